//! A common interface over the MUB and random-Clifford measurement ensembles.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{rotated_basis_state, sample_clifford, CliffordElement, CLIFFORD_DENSE_MAX};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::mub::MubFamily;
use crate::rng::{stream_rng, ShotRng, CLIFFORD_STREAM};
use crate::sim::{outcome_probabilities, StateVector, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleTag {
    Mub,
    Clifford,
}

impl fmt::Display for EnsembleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Mub => "mub",
            Self::Clifford => "clifford",
        })
    }
}

impl FromStr for EnsembleTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mub" => Ok(Self::Mub),
            "clifford" => Ok(Self::Clifford),
            _ => Err(Error::Parse(format!("unknown ensemble {s:?}"))),
        }
    }
}

/// A random unitary ensemble. A rotation id names one element; the
/// snapshot state for outcome b is V|b⟩ with V = U† of that element.
pub trait Ensemble: Sync {
    fn num_qubits(&self) -> usize;

    fn tag(&self) -> EnsembleTag;

    /// Rotation used by shot `shot`, drawing from that shot's stream if needed.
    fn draw_rotation(&self, shot: u64, rng: &mut ShotRng) -> u64;

    /// Number of distinct rotation ids when the ensemble is finite and
    /// indexed; `None` when ids are per-shot.
    fn num_rotations(&self) -> Option<u64>;

    /// V|b⟩ as a dense statevector.
    fn rotated_state(&self, rotation: u64, b: BitVector) -> Result<StateVector>;

    /// ⟨φ|V|b⟩ for φ given by its nonzero entries.
    fn overlap(&self, rotation: u64, b: BitVector, support: &[(usize, C64)]) -> Result<C64> {
        let v = self.rotated_state(rotation, b)?;
        Ok(support.iter().map(|&(l, phi)| phi.conj() * v.amps()[l]).sum())
    }

    /// Born probabilities of every outcome when measuring ψ after rotation.
    fn outcome_probabilities(&self, rotation: u64, psi: &StateVector) -> Result<Vec<f64>> {
        let n = self.num_qubits();
        let states: Result<Vec<StateVector>> =
            (0..1u64 << n).map(|b| self.rotated_state(rotation, BitVector::new(n, b))).collect();
        let states = states?;
        Ok(outcome_probabilities(psi, |b| states[b.index()].clone()))
    }
}

impl Ensemble for MubFamily {
    fn num_qubits(&self) -> usize {
        MubFamily::num_qubits(self)
    }

    fn tag(&self) -> EnsembleTag {
        EnsembleTag::Mub
    }

    fn draw_rotation(&self, _shot: u64, rng: &mut ShotRng) -> u64 {
        rng.gen_range(0..self.num_bases() as u64)
    }

    fn num_rotations(&self) -> Option<u64> {
        Some(self.num_bases() as u64)
    }

    fn rotated_state(&self, rotation: u64, b: BitVector) -> Result<StateVector> {
        self.mub_state(rotation as usize, b)
    }

    fn overlap(&self, rotation: u64, b: BitVector, support: &[(usize, C64)]) -> Result<C64> {
        let j = rotation as usize;
        if j >= self.num_bases() {
            return Err(Error::IndexOutOfRange(format!("basis {j} of {}", self.num_bases())));
        }
        if b.len() != MubFamily::num_qubits(self) {
            return Err(Error::DimensionMismatch { expected: MubFamily::num_qubits(self), found: b.len() });
        }
        let n = b.len();
        Ok(support
            .iter()
            .map(|&(l, phi)| phi.conj() * self.amplitude(j, b, BitVector::new(n, l as u64)))
            .sum())
    }

    fn outcome_probabilities(&self, rotation: u64, psi: &StateVector) -> Result<Vec<f64>> {
        self.basis_probabilities(rotation as usize, psi)
    }
}

/// Uniform random Cliffords; the element for shot i is regenerated from
/// `(seed, i)`, so records only need the shot index.
#[derive(Clone, Debug)]
pub struct CliffordEnsemble {
    n: usize,
    seed: u64,
}

impl CliffordEnsemble {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if !(1..=CLIFFORD_DENSE_MAX).contains(&n) {
            return Err(Error::QubitCount { n, min: 1, max: CLIFFORD_DENSE_MAX });
        }
        Ok(Self { n, seed })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn element(&self, id: u64) -> CliffordElement {
        let mut rng = stream_rng(self.seed, CLIFFORD_STREAM | id);
        sample_clifford(self.n, &mut rng).expect("qubit count validated at construction")
    }
}

impl Ensemble for CliffordEnsemble {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn tag(&self) -> EnsembleTag {
        EnsembleTag::Clifford
    }

    fn draw_rotation(&self, shot: u64, _rng: &mut ShotRng) -> u64 {
        shot
    }

    fn num_rotations(&self) -> Option<u64> {
        None
    }

    fn rotated_state(&self, rotation: u64, b: BitVector) -> Result<StateVector> {
        rotated_basis_state(&self.element(rotation), b)
    }

    fn outcome_probabilities(&self, rotation: u64, psi: &StateVector) -> Result<Vec<f64>> {
        if psi.num_qubits() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: psi.num_qubits() });
        }
        let u = self.element(rotation).dense_unitary()?;
        Ok(crate::sim::dense_basis_probabilities(psi, &u))
    }
}
