//! Snapshot acquisition, the reconstruction channel and median-of-means
//! prediction.
//!
//! For both ensembles the measurement channel is
//! M(A) = (A + tr(A)·I)/(2ⁿ + 1), so a snapshot with rotated state
//! |v⟩ = V|b⟩ predicts tr(O·M⁻¹(|v⟩⟨v|)) = (2ⁿ + 1)⟨v|O|v⟩ − tr(O).
//! Snapshots are kept as `(rotation, outcome)` pairs and the rotated state
//! is only ever touched through the entries the observable needs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::{CliffordEnsemble, Ensemble, EnsembleTag};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::mub::MubFamily;
use crate::observable::{Observable, ObservableKind};
use crate::rng::stream_rng;
use crate::sim::{sample_from_probabilities, BranchSource, DensityOp, C64};

/// Cap on the number of cached outcome probabilities during acquisition.
const PROBABILITY_CACHE_LIMIT: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SnapshotRecord {
    pub ensemble: EnsembleTag,
    /// MUB basis id j, or the shot index for Clifford runs.
    pub rotation: u64,
    pub outcome: BitVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowMeta {
    pub n: usize,
    pub ensemble: EnsembleTag,
    pub seed: u64,
    #[serde(rename = "N")]
    pub shots: usize,
    pub state: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShadowSet {
    pub meta: ShadowMeta,
    pub records: Vec<SnapshotRecord>,
}

impl ShadowSet {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Rebuilds the ensemble the records were drawn from.
    pub fn ensemble(&self) -> Result<Box<dyn Ensemble>> {
        Ok(match self.meta.ensemble {
            EnsembleTag::Mub => Box::new(MubFamily::build(self.meta.n)?),
            EnsembleTag::Clifford => Box::new(CliffordEnsemble::new(self.meta.n, self.meta.seed)?),
        })
    }
}

/// Runs `shots` independent rotate-and-measure rounds.
///
/// Shot i uses stream i of `seed` for the branch, the rotation and the
/// outcome, so the result is independent of the thread count.
pub fn acquire(
    source: &dyn BranchSource,
    ensemble: &dyn Ensemble,
    shots: usize,
    seed: u64,
) -> Result<ShadowSet> {
    let n = ensemble.num_qubits();
    if source.num_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, found: source.num_qubits() });
    }
    if shots == 0 {
        return Err(Error::Config("shot count must be at least 1".into()));
    }
    let branches = source.branches()?;
    let d = 1usize << n;

    // outcome probabilities per (branch, rotation), when the ensemble is a
    // small indexed set
    let cache: Option<Vec<Vec<f64>>> = match ensemble.num_rotations() {
        Some(nr) if (nr as usize) * d * branches.len() <= PROBABILITY_CACHE_LIMIT => {
            let keys: Vec<(usize, u64)> =
                (0..branches.len()).flat_map(|br| (0..nr).map(move |r| (br, r))).collect();
            Some(
                keys.par_iter()
                    .map(|&(br, r)| ensemble.outcome_probabilities(r, &branches[br]))
                    .collect::<Result<_>>()?,
            )
        }
        _ => None,
    };
    let nr = ensemble.num_rotations().unwrap_or(0);

    let records = (0..shots as u64)
        .into_par_iter()
        .map(|shot| {
            let mut rng = stream_rng(seed, shot);
            let br = source.pick_branch(&mut rng);
            let rotation = ensemble.draw_rotation(shot, &mut rng);
            let b = match &cache {
                Some(table) => sample_from_probabilities(&table[br * nr as usize + rotation as usize], &mut rng)?,
                None => {
                    let probs = ensemble.outcome_probabilities(rotation, &branches[br])?;
                    sample_from_probabilities(&probs, &mut rng)?
                }
            };
            Ok(SnapshotRecord {
                ensemble: ensemble.tag(),
                rotation,
                outcome: BitVector::new(n, b as u64),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ShadowSet {
        meta: ShadowMeta { n, ensemble: ensemble.tag(), seed, shots, state: source.label() },
        records,
    })
}

/// M⁻¹(A) = (2ⁿ + 1)A − tr(A)·I.
pub fn inverse_channel(a: &DensityOp) -> DensityOp {
    let d = a.dim();
    let tr = a.trace();
    let id = nalgebra::DMatrix::<C64>::identity(d, d);
    DensityOp(a.matrix() * C64::new((d + 1) as f64, 0.0) - id * tr)
}

/// M(A) = (A + tr(A)·I)/(2ⁿ + 1).
pub fn forward_channel(a: &DensityOp) -> DensityOp {
    let d = a.dim();
    let tr = a.trace();
    let id = nalgebra::DMatrix::<C64>::identity(d, d);
    DensityOp((a.matrix() + id * tr) / C64::new((d + 1) as f64, 0.0))
}

/// Prediction tr(O·M⁻¹(V|b⟩⟨b|V†)) of a single snapshot.
pub fn snapshot_expectation(
    rec: &SnapshotRecord,
    obs: &Observable,
    ensemble: &dyn Ensemble,
) -> Result<f64> {
    let n = ensemble.num_qubits();
    if obs.num_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, found: obs.num_qubits() });
    }
    if rec.outcome.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rec.outcome.len() });
    }
    let scale = ((1usize << n) + 1) as f64;
    let quad = match obs.kind() {
        ObservableKind::Projector { support, .. } => {
            ensemble.overlap(rec.rotation, rec.outcome, support)?.norm_sqr()
        }
        ObservableKind::Dense(_) => obs.expectation(&ensemble.rotated_state(rec.rotation, rec.outcome)?),
    };
    Ok(scale * quad - obs.trace())
}

/// Per-snapshot predictions in acquisition order.
pub fn snapshot_values(
    shadow: &ShadowSet,
    ensemble: &dyn Ensemble,
    obs: &Observable,
) -> Result<Vec<f64>> {
    shadow
        .records
        .par_iter()
        .map(|r| snapshot_expectation(r, obs, ensemble))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimatorConfig {
    /// Number of groups K.
    pub groups: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self { groups: 1 }
    }
}

/// Median of the K contiguous group means over the first K·⌊N/K⌋ values.
pub fn median_of_means(values: &[f64], groups: usize) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyShadow);
    }
    if groups == 0 || groups > values.len() {
        return Err(Error::Config(format!(
            "group count {groups} must be in 1..={}",
            values.len()
        )));
    }
    let per = values.len() / groups;
    let mut means: Vec<f64> = values[..groups * per]
        .chunks_exact(per)
        .map(|c| c.iter().sum::<f64>() / per as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let mid = groups / 2;
    Ok(if groups % 2 == 1 { means[mid] } else { 0.5 * (means[mid - 1] + means[mid]) })
}

/// Median-of-means prediction for each observable.
pub fn estimate(
    shadow: &ShadowSet,
    ensemble: &dyn Ensemble,
    observables: &[Observable],
    cfg: EstimatorConfig,
) -> Result<Vec<f64>> {
    if shadow.is_empty() {
        return Err(Error::EmptyShadow);
    }
    if cfg.groups == 0 || cfg.groups > shadow.len() {
        return Err(Error::Config(format!(
            "group count {} must be in 1..={}",
            cfg.groups,
            shadow.len()
        )));
    }
    observables
        .par_iter()
        .map(|o| median_of_means(&snapshot_values(shadow, ensemble, o)?, cfg.groups))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{ghz_state, StateModel, StateVector};
    use nalgebra::DMatrix;

    fn diag(v: &[f64]) -> DensityOp {
        let d = v.len();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for (i, &x) in v.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        DensityOp(m)
    }

    #[test]
    fn channel_examples() {
        let mixed = DensityOp::maximally_mixed(3);
        assert!(inverse_channel(&mixed).frobenius_distance(&mixed) < 1e-14);
        assert!(forward_channel(&mixed).frobenius_distance(&mixed) < 1e-14);
        let zero = diag(&[1.0, 0.0]);
        assert!(inverse_channel(&zero).frobenius_distance(&diag(&[2.0, -1.0])) < 1e-14);
        assert!(forward_channel(&zero).frobenius_distance(&diag(&[2.0 / 3.0, 1.0 / 3.0])) < 1e-14);
    }

    #[test]
    fn median_of_means_examples() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert_eq!(median_of_means(&v, 3).unwrap(), 3.5);
        assert_eq!(median_of_means(&v, 1).unwrap(), 3.5);
        // K = 4: L = 1, uses [1,2,3,4], median of even count
        assert_eq!(median_of_means(&v, 4).unwrap(), 2.5);
        assert_eq!(median_of_means(&[1.0, 100.0, 2.0, 3.0, 2.0], 5).unwrap(), 2.0);
        assert!(median_of_means(&v, 7).is_err());
        assert!(median_of_means(&v, 0).is_err());
        assert!(matches!(median_of_means(&[], 1), Err(Error::EmptyShadow)));
    }

    #[test]
    fn snapshot_examples_n1() {
        let fam = MubFamily::build(1).unwrap();
        let o = Observable::projector(StateVector::basis(BitVector::new(1, 0)));
        let rec = |j, b| SnapshotRecord { ensemble: EnsembleTag::Mub, rotation: j, outcome: BitVector::new(1, b) };
        assert!((snapshot_expectation(&rec(0, 0), &o, &fam).unwrap() - 2.0).abs() < 1e-12);
        assert!((snapshot_expectation(&rec(1, 0), &o, &fam).unwrap() - 0.5).abs() < 1e-12);
        // dense route through the inverse channel agrees
        for j in 0..3 {
            for b in 0..2 {
                let v = fam.mub_state(j, BitVector::new(1, b)).unwrap();
                let dense = (o.to_dense().0 * inverse_channel(&v.projector()).0).trace().re;
                let fast = snapshot_expectation(&rec(j as u64, b), &o, &fam).unwrap();
                assert!((dense - fast).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_observable_is_constant() {
        let fam = MubFamily::build(2).unwrap();
        let id = Observable::dense(DensityOp::identity(2)).unwrap();
        let mixed = Observable::dense(DensityOp::maximally_mixed(2)).unwrap();
        let shadow = acquire(&StateModel::Ghz(2), &fam, 50, 3).unwrap();
        for v in snapshot_values(&shadow, &fam, &id).unwrap() {
            assert!((v - 1.0).abs() < 1e-12);
        }
        for v in snapshot_values(&shadow, &fam, &mixed).unwrap() {
            assert!((v - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn acquire_ranges_and_errors() {
        let fam = MubFamily::build(2).unwrap();
        let s = acquire(&StateModel::Ghz(2), &fam, 4, 0).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.meta.shots, 4);
        for r in &s.records {
            assert!(r.rotation <= 4);
            assert!(r.outcome.value() < 4);
        }
        assert!(acquire(&StateModel::Ghz(3), &fam, 4, 0).is_err());
        assert!(acquire(&StateModel::Ghz(2), &fam, 0, 0).is_err());
    }

    #[test]
    fn estimate_errors() {
        let fam = MubFamily::build(2).unwrap();
        let s = acquire(&StateModel::Ghz(2), &fam, 10, 0).unwrap();
        let o = [Observable::ghz(2).unwrap()];
        assert!(estimate(&s, &fam, &o, EstimatorConfig { groups: 11 }).is_err());
        let empty = ShadowSet { meta: s.meta.clone(), records: vec![] };
        assert!(matches!(estimate(&empty, &fam, &o, EstimatorConfig::default()), Err(Error::EmptyShadow)));
        let wrong = [Observable::ghz(3).unwrap()];
        assert!(estimate(&s, &fam, &wrong, EstimatorConfig::default()).is_err());
    }

    #[test]
    fn ghz_fidelity_close_to_one() {
        let fam = MubFamily::build(3).unwrap();
        let s = acquire(&StateModel::Pure(ghz_state(3).unwrap()), &fam, 10_000, 17).unwrap();
        let est = estimate(&s, &fam, &[Observable::ghz(3).unwrap()], EstimatorConfig::default()).unwrap();
        assert!((est[0] - 1.0).abs() < 0.05, "{est:?}");
    }
}
