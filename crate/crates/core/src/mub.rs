//! The complete set of 2ⁿ + 1 mutually unbiased bases for n qubits.
//!
//! Basis 0 is the computational basis. Basis j ≥ 1 is built from the
//! symmetric matrix A = M_{j−1}, the matrix of multiplication by the field
//! element j − 1 in a self-dual basis of GF(2ⁿ):
//!
//! ```text
//! ⟨l|e_j^k⟩ = 2^{−n/2} · (−1)^{k·l} · i^{q(l)},   q(l) = lᵀ A l  (mod 4)
//! ```
//!
//! where the quadratic form counts diagonal entries once and each
//! off-diagonal pair twice. Unbiasedness follows from the invertibility of
//! every difference M_a ⊕ M_b.

use rayon::prelude::*;

use crate::circuit::DiagonalCliffordCircuit;
use crate::error::{Error, Result};
use crate::field::{multiplication_matrix_in, FieldElement, GaloisField, MAX_DEGREE};
use crate::gf2::{parity, qubit_mask, BitMatrix, BitVector};
use crate::sim::{check_dense, hadamard_all, StateVector, C64, I_POW};

/// Qubit ceiling for [`MubFamily::verify_unbiased`].
pub const VERIFY_MAX_QUBITS: usize = 10;

#[derive(Clone, Debug)]
pub struct MubFamily {
    n: usize,
    field: GaloisField,
    basis: Vec<FieldElement>,
    mats: Vec<BitMatrix>,
}

/// lᵀ A l mod 4 with diagonal weight 1 and off-diagonal weight 2.
#[inline]
pub fn quadratic_phase(a: &BitMatrix, l: u64) -> usize {
    let n = a.size();
    let mut q = 0u32;
    for (row_idx, &row) in a.rows().iter().enumerate() {
        if l & qubit_mask(n, row_idx) != 0 {
            q += (row & l).count_ones();
        }
    }
    (q & 3) as usize
}

impl MubFamily {
    pub fn build(n: usize) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::QubitCount { n, min: 1, max: MAX_DEGREE });
        }
        let field = GaloisField::standard(n)?;
        let basis = field.self_dual_basis()?;
        // a ↦ M_a is GF(2)-linear, so fill the table from the n monomials
        let monomials: Vec<BitMatrix> = (0..n)
            .map(|i| multiplication_matrix_in(&field, FieldElement(1 << i), &basis))
            .collect();
        let mut mats = Vec::with_capacity(1 << n);
        mats.push(BitMatrix::zeros(n));
        for a in 1usize..1 << n {
            let low = a.trailing_zeros() as usize;
            let m = &mats[a & (a - 1)] ^ &monomials[low];
            mats.push(m);
        }
        Ok(Self { n, field, basis, mats })
    }

    /// A family over an arbitrary matrix list; used to exercise the
    /// verifier with deliberately broken data.
    pub fn from_matrices(n: usize, mats: Vec<BitMatrix>) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::QubitCount { n, min: 1, max: MAX_DEGREE });
        }
        if mats.len() != 1 << n || mats.iter().any(|m| m.size() != n) {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: mats.len() });
        }
        let field = GaloisField::standard(n)?;
        let basis = field.self_dual_basis()?;
        Ok(Self { n, field, basis, mats })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// 2ⁿ + 1.
    pub fn num_bases(&self) -> usize {
        (1 << self.n) + 1
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn self_dual_basis(&self) -> &[FieldElement] {
        &self.basis
    }

    pub fn matrices(&self) -> &[BitMatrix] {
        &self.mats
    }

    /// Matrix for basis `j ≥ 1`; `None` for the computational basis.
    pub fn matrix(&self, j: usize) -> Option<&BitMatrix> {
        j.checked_sub(1).and_then(|i| self.mats.get(i))
    }

    fn check_index(&self, j: usize, k: &BitVector) -> Result<()> {
        if j >= self.num_bases() {
            return Err(Error::IndexOutOfRange(format!("basis {j} of {}", self.num_bases())));
        }
        if k.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: k.len() });
        }
        Ok(())
    }

    /// ⟨l|e_j^k⟩ in O(n²) bit operations with no heap allocation.
    ///
    /// # Panics
    /// If `j` is not a basis id or the bit lengths differ from n.
    pub fn amplitude(&self, j: usize, k: BitVector, l: BitVector) -> C64 {
        assert!(j < self.num_bases(), "basis id {j} out of range");
        assert!(k.len() == self.n && l.len() == self.n, "bit length mismatch");
        if j == 0 {
            return if k == l { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        }
        let a = &self.mats[j - 1];
        let sign = 2 * parity(k.value() & l.value()) as usize;
        let scale = (-(self.n as f64) / 2.0).exp2();
        I_POW[(quadratic_phase(a, l.value()) + sign) & 3] * scale
    }

    /// Dense statevector |e_j^k⟩.
    pub fn mub_state(&self, j: usize, k: BitVector) -> Result<StateVector> {
        self.check_index(j, &k)?;
        check_dense(self.n)?;
        if j == 0 {
            return Ok(StateVector::basis(k));
        }
        let a = &self.mats[j - 1];
        let scale = (-(self.n as f64) / 2.0).exp2();
        let amps = (0..1u64 << self.n)
            .map(|l| {
                let sign = 2 * parity(k.value() & l) as usize;
                I_POW[(quadratic_phase(a, l) + sign) & 3] * scale
            })
            .collect();
        Ok(StateVector::from_raw(self.n, amps))
    }

    /// Measurement rotation U_j with U_j|e_j^k⟩ = |k⟩.
    ///
    /// Gates run CZ, then P, then H. CZ pairs are the off-diagonal ones of
    /// A; P powers are −A_aa mod 4, which undoes the diagonal i^{A_aa}
    /// phases before the Hadamard layer.
    pub fn emit_circuit(&self, j: usize) -> Result<DiagonalCliffordCircuit> {
        if j == 0 {
            return Err(Error::IdentityBasis);
        }
        let a = self
            .matrix(j)
            .ok_or_else(|| Error::IndexOutOfRange(format!("basis {j} of {}", self.num_bases())))?;
        let n = self.n;
        let cz_pairs = (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .filter(|&(x, y)| a.get(x, y))
            .collect();
        let p_powers = (0..n).map(|x| if a.get(x, x) { 3 } else { 0 }).collect();
        Ok(DiagonalCliffordCircuit { n, cz_pairs, p_powers, followed_by_hadamard_layer: true })
    }

    /// CZ count of every circuit U_1 … U_{2ⁿ}.
    pub fn cz_counts(&self) -> Vec<usize> {
        self.mats.iter().map(BitMatrix::upper_weight).collect()
    }

    /// |⟨e_j^b|ψ⟩|² for every b, via one diagonal phase and a
    /// Walsh–Hadamard transform (O(n·2ⁿ) per basis).
    pub fn basis_probabilities(&self, j: usize, psi: &StateVector) -> Result<Vec<f64>> {
        if psi.num_qubits() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: psi.num_qubits() });
        }
        if j >= self.num_bases() {
            return Err(Error::IndexOutOfRange(format!("basis {j} of {}", self.num_bases())));
        }
        if j == 0 {
            return Ok(psi.amps().iter().map(|a| a.norm_sqr()).collect());
        }
        let a = &self.mats[j - 1];
        let mut amps: Vec<C64> = psi
            .amps()
            .iter()
            .enumerate()
            .map(|(l, &x)| x * I_POW[(4 - quadratic_phase(a, l as u64)) & 3])
            .collect();
        hadamard_all(&mut amps);
        Ok(amps.iter().map(|z| z.norm_sqr()).collect())
    }

    /// Checks pairwise unbiasedness of every basis pair and orthonormality
    /// inside each basis.
    ///
    /// Overlaps between bases j, j′ ≥ 1 depend only on k ⊕ k′, so each pair
    /// costs a single Walsh–Hadamard transform of the relative phase.
    pub fn verify_unbiased(&self, tol: f64) -> Result<UnbiasednessReport> {
        let n = self.n;
        if n > VERIFY_MAX_QUBITS {
            return Err(Error::QubitCount { n, min: 1, max: VERIFY_MAX_QUBITS });
        }
        let d = 1usize << n;
        let target = 1.0 / d as f64;
        let nb = self.num_bases();

        // basis 0 against everything: every amplitude must have modulus² 1/d
        let mut worst = (0.0f64, None::<(usize, usize)>);
        for j in 1..nb {
            let a = &self.mats[j - 1];
            for l in 0..d as u64 {
                // (−1)^{k·l} only flips sign, so k = 0 suffices
                let amp = I_POW[quadratic_phase(a, l)] * (1.0 / (d as f64).sqrt());
                let dev = (amp.norm_sqr() - target).abs();
                if dev > worst.0 {
                    worst = (dev, Some((0, j)));
                }
            }
        }

        let pairs: Vec<(usize, usize)> =
            (1..nb).flat_map(|j| (j..nb).map(move |jp| (j, jp))).collect();
        let results: Vec<(usize, usize, f64)> = pairs
            .par_iter()
            .map(|&(j, jp)| {
                let (a, b) = (&self.mats[j - 1], &self.mats[jp - 1]);
                let mut v: Vec<C64> = (0..d as u64)
                    .map(|l| I_POW[(quadratic_phase(b, l) + 4 - quadratic_phase(a, l)) & 3])
                    .collect();
                hadamard_all(&mut v);
                // overlap for k ⊕ k′ = m is v[m]/√d
                let dev = v
                    .iter()
                    .enumerate()
                    .map(|(m, z)| {
                        let p = z.norm_sqr() / d as f64;
                        if j == jp {
                            (p - if m == 0 { 1.0 } else { 0.0 }).abs()
                        } else {
                            (p - target).abs()
                        }
                    })
                    .fold(0.0, f64::max);
                (j, jp, dev)
            })
            .collect();

        let mut ortho = 0.0f64;
        for (j, jp, dev) in results {
            if j == jp {
                ortho = ortho.max(dev);
            } else if dev > worst.0 {
                worst = (dev, Some((j, jp)));
            }
        }
        Ok(UnbiasednessReport {
            n,
            tol,
            max_cross_deviation: worst.0,
            worst_pair: worst.1,
            max_orthonormality_deviation: ortho,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnbiasednessReport {
    pub n: usize,
    pub tol: f64,
    /// max over j ≠ j′ of | |⟨e_j^k|e_j′^k′⟩|² − 2⁻ⁿ |.
    pub max_cross_deviation: f64,
    pub worst_pair: Option<(usize, usize)>,
    /// max over j of | |⟨e_j^k|e_j^k′⟩|² − δ_kk′ |.
    pub max_orthonormality_deviation: f64,
}

impl UnbiasednessReport {
    pub fn passed(&self) -> bool {
        self.max_cross_deviation <= self.tol && self.max_orthonormality_deviation <= self.tol
    }
}
