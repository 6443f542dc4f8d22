//! Exact enumeration over all (2ⁿ + 1)·2ⁿ MUB projectors: the measurement
//! channel, single-shot estimator moments and the shadow norm. Dense and
//! small-n only.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::mub::MubFamily;
use crate::observable::Observable;
use crate::sim::{DensityOp, StateModel, StateVector, C64};

/// Largest n accepted by the enumeration oracles.
pub const ORACLE_MAX_QUBITS: usize = 5;

fn check(fam: &MubFamily, dim: usize) -> Result<()> {
    let n = fam.num_qubits();
    if n > ORACLE_MAX_QUBITS {
        return Err(Error::QubitCount { n, min: 1, max: ORACLE_MAX_QUBITS });
    }
    if dim != 1 << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, found: dim });
    }
    Ok(())
}

fn all_states(fam: &MubFamily) -> Result<Vec<StateVector>> {
    let n = fam.num_qubits();
    let mut out = Vec::with_capacity(fam.num_bases() << n);
    for j in 0..fam.num_bases() {
        for k in 0..1u64 << n {
            out.push(fam.mub_state(j, BitVector::new(n, k))?);
        }
    }
    Ok(out)
}

fn outer(v: &StateVector) -> DMatrix<C64> {
    v.projector().0
}

/// (1/(2ⁿ+1)) Σ_{j,k} tr(ρ P_jk) P_jk.
pub fn exact_channel_enum(fam: &MubFamily, rho: &DensityOp) -> Result<DensityOp> {
    check(fam, rho.dim())?;
    let d = rho.dim();
    let mut acc = DMatrix::<C64>::zeros(d, d);
    for v in all_states(fam)? {
        let p = outer(&v);
        let w = (rho.matrix() * &p).trace();
        acc += p * w;
    }
    Ok(DensityOp(acc / C64::new(fam.num_bases() as f64, 0.0)))
}

/// O − tr(O)/2ⁿ·I.
pub fn traceless_part(o: &DensityOp) -> DensityOp {
    let d = o.dim();
    let shift = o.trace() / C64::new(d as f64, 0.0);
    DensityOp(o.matrix() - DMatrix::<C64>::identity(d, d) * shift)
}

/// tr(A²) for Hermitian A.
pub fn hs_norm_sq(a: &DensityOp) -> f64 {
    a.matrix().norm_squared()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnapshotMoments {
    pub mean: f64,
    pub second: f64,
    pub variance: f64,
}

/// Exact moments of X = (2ⁿ+1)⟨e|O|e⟩ − tr(O) under the joint law
/// Pr(j, b) = ⟨e_j^b|ρ|e_j^b⟩/(2ⁿ+1).
pub fn exact_moments(fam: &MubFamily, rho: &DensityOp, obs: &DensityOp) -> Result<SnapshotMoments> {
    check(fam, rho.dim())?;
    check(fam, obs.dim())?;
    let nb = fam.num_bases() as f64;
    let tr_o = obs.trace().re;
    let mut mean = 0.0;
    let mut second = 0.0;
    for v in all_states(fam)? {
        let prob = rho.expectation(&v).re / nb;
        let x = nb * obs.expectation(&v).re - tr_o;
        mean += prob * x;
        second += prob * x * x;
    }
    Ok(SnapshotMoments { mean, second, variance: second - mean * mean })
}

/// Var of the single-snapshot estimator for `obs` on the model's state.
pub fn exact_single_shot_variance(fam: &MubFamily, model: &StateModel, obs: &Observable) -> Result<f64> {
    Ok(exact_moments(fam, &model.density()?, &obs.to_dense())?.variance)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShadowNorm {
    /// max over states σ of the single-snapshot second moment of O₀.
    pub value: f64,
    /// 2·tr(O₀²), the MUB bound.
    pub bound_mub: f64,
    /// 3·tr(O₀²), the random-Clifford bound.
    pub bound_clifford: f64,
}

/// Squared shadow norm of O₀: the top eigenvalue of
/// (2ⁿ+1) Σ_{j,k} tr(O₀P_jk)²·P_jk.
pub fn shadow_norm_sq(fam: &MubFamily, obs: &DensityOp) -> Result<ShadowNorm> {
    check(fam, obs.dim())?;
    let d = obs.dim();
    let o0 = traceless_part(obs);
    let nb = fam.num_bases() as f64;
    let mut s = DMatrix::<C64>::zeros(d, d);
    for v in all_states(fam)? {
        let w = o0.expectation(&v).re;
        s += outer(&v) * C64::new(nb * w * w, 0.0);
    }
    let value = s.symmetric_eigenvalues().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let t = hs_norm_sq(&o0);
    Ok(ShadowNorm { value, bound_mub: 2.0 * t, bound_clifford: 3.0 * t })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_proj() -> DensityOp {
        StateVector::basis(BitVector::new(1, 0)).projector()
    }

    #[test]
    fn n1_channel_on_zero() {
        let fam = MubFamily::build(1).unwrap();
        let out = exact_channel_enum(&fam, &zero_proj()).unwrap();
        assert!((out.0[(0, 0)].re - 2.0 / 3.0).abs() < 1e-14);
        assert!((out.0[(1, 1)].re - 1.0 / 3.0).abs() < 1e-14);
        assert!(out.0[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn maximally_mixed_fixed_point() {
        for n in 1..=3 {
            let fam = MubFamily::build(n).unwrap();
            let m = DensityOp::maximally_mixed(n);
            assert!(exact_channel_enum(&fam, &m).unwrap().frobenius_distance(&m) < 1e-12);
        }
    }

    #[test]
    fn n1_variance_example() {
        let fam = MubFamily::build(1).unwrap();
        let m = exact_moments(&fam, &zero_proj(), &zero_proj()).unwrap();
        assert!((m.mean - 1.0).abs() < 1e-14);
        assert!((m.second - 1.5).abs() < 1e-14);
        assert!((m.variance - 0.5).abs() < 1e-14);
    }

    #[test]
    fn identity_multiple_has_zero_variance_and_norm() {
        let fam = MubFamily::build(2).unwrap();
        let o = DensityOp(DensityOp::identity(2).0 * C64::new(0.7, 0.0));
        let rho = crate::sim::ghz_state(2).unwrap().projector();
        assert!(exact_moments(&fam, &rho, &o).unwrap().variance.abs() < 1e-12);
        assert!(shadow_norm_sq(&fam, &o).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn n1_shadow_norm_example() {
        let fam = MubFamily::build(1).unwrap();
        let sn = shadow_norm_sq(&fam, &zero_proj()).unwrap();
        assert!((sn.value - 0.75).abs() < 1e-14);
        assert!((sn.bound_mub - 1.0).abs() < 1e-14);
    }

    #[test]
    fn too_large() {
        let fam = MubFamily::build(6).unwrap();
        assert!(exact_channel_enum(&fam, &DensityOp::maximally_mixed(6)).is_err());
    }
}
