//! The −CZ−P−H− rotation circuits and their text / QASM renderings.

use std::fmt::Write as _;

/// A single gate in time order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Cz(usize, usize),
    /// Phase gate raised to a power in 1..=3.
    P(usize, u8),
    H(usize),
}

/// Three-layer circuit: CZ layer, then P layer, then (optionally) an H on
/// every qubit. As a measurement rotation it maps the states of one MUB
/// onto computational kets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalCliffordCircuit {
    pub n: usize,
    /// Unordered pairs stored with `a < b`, in lexicographic order.
    pub cz_pairs: Vec<(usize, usize)>,
    pub p_powers: Vec<u8>,
    pub followed_by_hadamard_layer: bool,
}

impl DiagonalCliffordCircuit {
    pub fn cz_count(&self) -> usize {
        self.cz_pairs.len()
    }

    pub fn gates(&self) -> Vec<Gate> {
        let mut gates: Vec<Gate> = self.cz_pairs.iter().map(|&(a, b)| Gate::Cz(a, b)).collect();
        gates.extend(
            self.p_powers
                .iter()
                .enumerate()
                .filter(|(_, &s)| s % 4 != 0)
                .map(|(a, &s)| Gate::P(a, s % 4)),
        );
        if self.followed_by_hadamard_layer {
            gates.extend((0..self.n).map(Gate::H));
        }
        gates
    }

    /// One gate per line: `CZ a b`, `P a s`, `H a`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in self.gates() {
            match g {
                Gate::Cz(a, b) => writeln!(out, "CZ {a} {b}"),
                Gate::P(a, s) => writeln!(out, "P {a} {s}"),
                Gate::H(a) => writeln!(out, "H {a}"),
            }
            .expect("writing to a String");
        }
        out
    }

    /// OpenQASM 2.0 rendering of the same gate sequence followed by a full
    /// computational-basis measurement.
    pub fn to_qasm(&self) -> String {
        let n = self.n;
        let mut out = format!("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{n}];\ncreg c[{n}];\n");
        for g in self.gates() {
            let line = match g {
                Gate::Cz(a, b) => format!("cz q[{a}],q[{b}];"),
                Gate::P(a, 1) => format!("s q[{a}];"),
                Gate::P(a, 2) => format!("z q[{a}];"),
                Gate::P(a, _) => format!("sdg q[{a}];"),
                Gate::H(a) => format!("h q[{a}];"),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str("measure q -> c;\n");
        out
    }
}
