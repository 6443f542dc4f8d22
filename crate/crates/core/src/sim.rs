//! Dense statevector simulation: states, the GHZ noise model, Born-rule
//! sampling and the three-layer rotation circuits.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::circuit::DiagonalCliffordCircuit;
use crate::error::{Error, Result};
use crate::gf2::{qubit_mask, BitVector};

pub type C64 = Complex64;

/// Default ceiling on qubits for anything that allocates 2ⁿ amplitudes.
pub const DEFAULT_MAX_QUBITS: usize = 20;

/// Dense-path qubit limit, overridable with `SHADOW_MAX_QUBITS`.
pub fn max_dense_qubits() -> usize {
    std::env::var("SHADOW_MAX_QUBITS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

pub(crate) fn check_dense(n: usize) -> Result<()> {
    let max = max_dense_qubits().min(crate::gf2::MAX_BITS);
    if n == 0 || n > max {
        return Err(Error::QubitCount { n, min: 1, max });
    }
    Ok(())
}

const NORM_TOL: f64 = 1e-9;
const PROB_TOL: f64 = 1e-6;

/// Powers of i, indexed mod 4.
pub(crate) const I_POW: [C64; 4] = [
    C64::new(1.0, 0.0),
    C64::new(0.0, 1.0),
    C64::new(-1.0, 0.0),
    C64::new(0.0, -1.0),
];

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes after checking length 2ⁿ and unit norm.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Parse(format!("{len} amplitudes is not a power of two ≥ 2")));
        }
        let n = len.trailing_zeros() as usize;
        let s = Self { n, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Parse(format!("state norm² = {norm}, expected 1")));
        }
        Ok(s)
    }

    pub(crate) fn from_raw(n: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        Self { n, amps }
    }

    /// Computational ket |k⟩.
    pub fn basis(k: BitVector) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << k.len()];
        amps[k.index()] = C64::new(1.0, 0.0);
        Self { n: k.len(), amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.n, other.n);
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// True when `other = e^{iθ}·self` within `tol` for some θ.
    pub fn equal_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        if self.n != other.n {
            return false;
        }
        let ov = self.inner(other);
        if ov.norm() < 1e-12 {
            return false;
        }
        let phase = ov / ov.norm();
        self.amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| (a * phase - b).norm() <= tol)
    }

    /// Indices and amplitudes of the nonzero entries.
    pub fn support(&self) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.amps.iter().copied().enumerate().filter(|(_, a)| *a != C64::new(0.0, 0.0))
    }

    pub fn projector(&self) -> DensityOp {
        let v = nalgebra::DVector::from_column_slice(&self.amps);
        DensityOp(&v * v.adjoint())
    }
}

/// (|0…0⟩ + |1…1⟩)/√2.
pub fn ghz_state(n: usize) -> Result<StateVector> {
    ghz_with_sign(n, 1.0)
}

/// (|0…0⟩ − |1…1⟩)/√2, the GHZ state after a Z error.
pub fn ghz_minus_state(n: usize) -> Result<StateVector> {
    ghz_with_sign(n, -1.0)
}

fn ghz_with_sign(n: usize, sign: f64) -> Result<StateVector> {
    check_dense(n)?;
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[(1 << n) - 1] += C64::new(sign * FRAC_1_SQRT_2, 0.0);
    Ok(StateVector::from_raw(n, amps))
}

/// Dense operator on n qubits; used in oracle and small-n paths only.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOp(pub DMatrix<C64>);

impl DensityOp {
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        let (r, c) = mat.shape();
        if r != c || r < 2 || !r.is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: r.next_power_of_two().max(2), found: c });
        }
        Ok(Self(mat))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let d = 1 << n;
        Self(DMatrix::identity(d, d) / C64::new(d as f64, 0.0))
    }

    pub fn identity(n: usize) -> Self {
        let d = 1 << n;
        Self(DMatrix::identity(d, d))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.0 - self.0.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    /// ⟨v|A|v⟩.
    pub fn expectation(&self, v: &StateVector) -> C64 {
        let amps = v.amps();
        let mut acc = C64::new(0.0, 0.0);
        for (r, ar) in amps.iter().enumerate() {
            let row: C64 = amps.iter().enumerate().map(|(c, ac)| self.0[(r, c)] * ac).sum();
            acc += ar.conj() * row;
        }
        acc
    }

    pub fn frobenius_distance(&self, other: &DensityOp) -> f64 {
        (&self.0 - &other.0).norm()
    }
}

/// The input states used in experiments.
#[derive(Clone, Debug, PartialEq)]
pub enum StateModel {
    Pure(StateVector),
    Ghz(usize),
    /// ρ_p = (1−p)|ψ⁺⟩⟨ψ⁺| + p|ψ⁻⟩⟨ψ⁻|.
    NoisyGhz { n: usize, p: f64 },
}

impl StateModel {
    pub fn noisy_ghz(n: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!("phase-flip probability {p} outside [0, 1]")));
        }
        Ok(Self::NoisyGhz { n, p })
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            Self::Pure(s) => s.num_qubits(),
            Self::Ghz(n) | Self::NoisyGhz { n, .. } => *n,
        }
    }

    /// Short text label, e.g. `ghz` or `noisy-ghz:0.3`.
    pub fn label(&self) -> String {
        match self {
            Self::Pure(_) => "pure".to_string(),
            Self::Ghz(_) => "ghz".to_string(),
            Self::NoisyGhz { p, .. } => format!("noisy-ghz:{p}"),
        }
    }

    pub fn density(&self) -> Result<DensityOp> {
        match self {
            Self::Pure(s) => Ok(s.projector()),
            Self::Ghz(n) => Ok(ghz_state(*n)?.projector()),
            Self::NoisyGhz { n, p } => {
                let plus = ghz_state(*n)?.projector();
                let minus = ghz_minus_state(*n)?.projector();
                Ok(DensityOp(
                    plus.0 * C64::new(1.0 - p, 0.0) + minus.0 * C64::new(*p, 0.0),
                ))
            }
        }
    }
}

/// A state realised as a classical mixture of pure branches.
pub trait BranchSource: Sync {
    fn num_qubits(&self) -> usize;
    fn branches(&self) -> Result<Vec<StateVector>>;
    fn pick_branch(&self, rng: &mut dyn rand::RngCore) -> usize;
    fn label(&self) -> String;
}

impl BranchSource for StateModel {
    fn num_qubits(&self) -> usize {
        StateModel::num_qubits(self)
    }

    fn branches(&self) -> Result<Vec<StateVector>> {
        match self {
            Self::Pure(s) => Ok(vec![s.clone()]),
            Self::Ghz(n) => Ok(vec![ghz_state(*n)?]),
            Self::NoisyGhz { n, .. } => Ok(vec![ghz_state(*n)?, ghz_minus_state(*n)?]),
        }
    }

    fn pick_branch(&self, rng: &mut dyn rand::RngCore) -> usize {
        match self {
            Self::NoisyGhz { p, .. } => usize::from(rng.gen::<f64>() < *p),
            _ => 0,
        }
    }

    fn label(&self) -> String {
        StateModel::label(self)
    }
}

/// Draws one pure branch of the model.
pub fn sample_branch(model: &StateModel, rng: &mut dyn rand::RngCore) -> Result<StateVector> {
    let idx = model.pick_branch(rng);
    Ok(model.branches()?.swap_remove(idx))
}

/// Born probabilities |⟨e_b|ψ⟩|² for every outcome b of a rotated basis.
pub fn outcome_probabilities<F>(state: &StateVector, basis: F) -> Vec<f64>
where
    F: Fn(BitVector) -> StateVector,
{
    let n = state.num_qubits();
    (0..1u64 << n)
        .map(|b| basis(BitVector::new(n, b)).inner(state).norm_sqr())
        .collect()
}

/// Probabilities against a dense basis whose columns are the basis states.
pub fn dense_basis_probabilities(state: &StateVector, basis: &DMatrix<C64>) -> Vec<f64> {
    let psi = nalgebra::DVector::from_column_slice(state.amps());
    (basis.adjoint() * psi).iter().map(|z| z.norm_sqr()).collect()
}

/// Inverse-CDF draw over outcomes in lexicographic order.
pub fn sample_from_probabilities(probs: &[f64], rng: &mut dyn rand::RngCore) -> Result<usize> {
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::BrokenBasis(total));
    }
    let u = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return Ok(i);
        }
    }
    // u landed in the rounding gap at the top; take the last outcome with mass
    Ok(probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1))
}

/// Samples an outcome b with probability |⟨e_b|ψ⟩|².
pub fn born_sample<F>(state: &StateVector, basis: F, rng: &mut dyn rand::RngCore) -> Result<BitVector>
where
    F: Fn(BitVector) -> StateVector,
{
    let probs = outcome_probabilities(state, basis);
    let b = sample_from_probabilities(&probs, rng)?;
    Ok(BitVector::new(state.num_qubits(), b as u64))
}

/// In-place normalised Walsh–Hadamard transform (H on every qubit).
pub fn hadamard_all(amps: &mut [C64]) {
    let len = amps.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for i in block..block + h {
                let (x, y) = (amps[i], amps[i + h]);
                amps[i] = x + y;
                amps[i + h] = x - y;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / (len as f64).sqrt();
    amps.iter_mut().for_each(|a| *a *= scale);
}

// Diagonal CZ·P phase exponent (mod 4) on basis index l, with P powers
// multiplied by `dir` (1 forward, 3 inverse).
fn diagonal_phase(c: &DiagonalCliffordCircuit, l: u64, dir: u8) -> usize {
    let n = c.n;
    let mut e = 0usize;
    for &(a, b) in &c.cz_pairs {
        if l & qubit_mask(n, a) != 0 && l & qubit_mask(n, b) != 0 {
            e += 2;
        }
    }
    for (a, &s) in c.p_powers.iter().enumerate() {
        if l & qubit_mask(n, a) != 0 {
            e += (s as usize) * dir as usize;
        }
    }
    e % 4
}

/// Applies the CZ layer, then the P layer, then the H layer.
pub fn apply_circuit(c: &DiagonalCliffordCircuit, s: &StateVector) -> Result<StateVector> {
    if c.n != s.num_qubits() {
        return Err(Error::DimensionMismatch { expected: c.n, found: s.num_qubits() });
    }
    let mut amps = s.amps().to_vec();
    for (l, a) in amps.iter_mut().enumerate() {
        *a *= I_POW[diagonal_phase(c, l as u64, 1)];
    }
    if c.followed_by_hadamard_layer {
        hadamard_all(&mut amps);
    }
    Ok(StateVector::from_raw(c.n, amps))
}

/// Applies the inverse circuit: H layer, P† layer, CZ layer.
pub fn apply_circuit_inverse(c: &DiagonalCliffordCircuit, s: &StateVector) -> Result<StateVector> {
    if c.n != s.num_qubits() {
        return Err(Error::DimensionMismatch { expected: c.n, found: s.num_qubits() });
    }
    let mut amps = s.amps().to_vec();
    if c.followed_by_hadamard_layer {
        hadamard_all(&mut amps);
    }
    for (l, a) in amps.iter_mut().enumerate() {
        *a *= I_POW[diagonal_phase(c, l as u64, 3)];
    }
    Ok(StateVector::from_raw(c.n, amps))
}
