//! GHZ fidelity, noisy GHZ and MUB-vs-Clifford variance experiments, with
//! CSV/JSON emitters for their plot data.

use std::io::Write;

use serde::Serialize;

use crate::ensemble::{CliffordEnsemble, EnsembleTag};
use crate::error::{Error, Result};
use crate::mub::MubFamily;
use crate::observable::Observable;
use crate::oracle::{exact_single_shot_variance, hs_norm_sq, traceless_part};
use crate::rng::derive_seed;
use crate::shadow::{acquire, estimate, snapshot_values, EstimatorConfig};
use crate::sim::{ghz_state, StateModel, StateVector};
use crate::gf2::BitVector;

/// Mean and sample standard deviation (n − 1 denominator; 0 for one run).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentParams {
    pub n: usize,
    #[serde(rename = "N")]
    pub shots: usize,
    #[serde(rename = "K")]
    pub groups: usize,
    pub p: Option<f64>,
    pub ensemble: EnsembleTag,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentResult {
    pub label: String,
    pub params: ExperimentParams,
    pub estimates: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub runs: usize,
}

impl ExperimentResult {
    fn new(label: String, params: ExperimentParams, estimates: Vec<f64>) -> Self {
        let (mean, std) = mean_std(&estimates);
        let runs = estimates.len();
        Self { label, params, estimates, mean, std, runs }
    }
}

fn check_runs(shots: usize, runs: usize, groups: usize) -> Result<()> {
    if shots == 0 || runs == 0 {
        return Err(Error::Config("shots and runs must be positive".into()));
    }
    if groups == 0 || groups > shots {
        return Err(Error::Config(format!("group count {groups} must be in 1..={shots}")));
    }
    Ok(())
}

fn fidelity_runs(
    fam: &MubFamily,
    model: &StateModel,
    target: &Observable,
    shots: usize,
    runs: usize,
    groups: usize,
    seed_of_run: impl Fn(usize) -> u64,
) -> Result<Vec<f64>> {
    (0..runs)
        .map(|run| {
            let shadow = acquire(model, fam, shots, seed_of_run(run))?;
            Ok(estimate(&shadow, fam, std::slice::from_ref(target), EstimatorConfig { groups })?[0])
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct GhzFidelityConfig {
    pub qubits: Vec<usize>,
    pub shots: usize,
    pub runs: usize,
    pub groups: usize,
    pub seed: u64,
}

impl Default for GhzFidelityConfig {
    fn default() -> Self {
        Self { qubits: (2..=6).collect(), shots: 10_000, runs: 10, groups: 1, seed: 2023 }
    }
}

/// Fidelity of a perfect GHZ state with itself, estimated from MUB shadows.
pub fn ghz_fidelity(cfg: &GhzFidelityConfig) -> Result<Vec<ExperimentResult>> {
    check_runs(cfg.shots, cfg.runs, cfg.groups)?;
    cfg.qubits
        .iter()
        .map(|&n| {
            let fam = MubFamily::build(n)?;
            let model = StateModel::Pure(ghz_state(n)?);
            let target = Observable::ghz(n)?;
            let est = fidelity_runs(&fam, &model, &target, cfg.shots, cfg.runs, cfg.groups, |run| {
                derive_seed(cfg.seed, (n as u64) << 32 | run as u64)
            })?;
            let params = ExperimentParams {
                n,
                shots: cfg.shots,
                groups: cfg.groups,
                p: None,
                ensemble: EnsembleTag::Mub,
                seed: cfg.seed,
            };
            Ok(ExperimentResult::new(format!("ghz-fidelity/n={n}"), params, est))
        })
        .collect()
}

/// `n,run,estimate` rows.
pub fn write_ghz_fidelity_csv<W: Write>(results: &[ExperimentResult], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "run", "estimate"])?;
    for r in results {
        for (run, e) in r.estimates.iter().enumerate() {
            out.write_record([r.params.n.to_string(), run.to_string(), e.to_string()])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// `n,mean,std,runs` rows.
pub fn write_summary_csv<W: Write>(results: &[ExperimentResult], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "mean", "std", "runs"])?;
    for r in results {
        out.write_record([
            r.params.n.to_string(),
            r.mean.to_string(),
            r.std.to_string(),
            r.runs.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct NoisyGhzConfig {
    pub n: usize,
    pub shots: usize,
    pub runs: usize,
    pub groups: usize,
    pub p_grid: Vec<f64>,
    pub seed: u64,
}

impl Default for NoisyGhzConfig {
    fn default() -> Self {
        Self {
            n: 3,
            shots: 5000,
            runs: 10,
            groups: 1,
            p_grid: (0..=10).map(|i| i as f64 / 10.0).collect(),
            seed: 2023,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NoisyGhzRow {
    pub p: f64,
    pub estimate: f64,
    pub std: f64,
    #[serde(rename = "true")]
    pub true_value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NoisyGhzOutput {
    pub rows: Vec<NoisyGhzRow>,
    pub results: Vec<ExperimentResult>,
}

/// Fidelity with |ψ⁺⟩ of the phase-flipped GHZ mixture, for each p.
pub fn noisy_ghz(cfg: &NoisyGhzConfig) -> Result<NoisyGhzOutput> {
    check_runs(cfg.shots, cfg.runs, cfg.groups)?;
    let n = cfg.n;
    let fam = MubFamily::build(n)?;
    let target = Observable::ghz(n)?;
    let mut rows = Vec::with_capacity(cfg.p_grid.len());
    let mut results = Vec::with_capacity(cfg.p_grid.len());
    for (pi, &p) in cfg.p_grid.iter().enumerate() {
        let model = StateModel::noisy_ghz(n, p)?;
        let est = fidelity_runs(&fam, &model, &target, cfg.shots, cfg.runs, cfg.groups, |run| {
            derive_seed(cfg.seed, (pi as u64) << 32 | run as u64)
        })?;
        let params = ExperimentParams {
            n,
            shots: cfg.shots,
            groups: cfg.groups,
            p: Some(p),
            ensemble: EnsembleTag::Mub,
            seed: cfg.seed,
        };
        let res = ExperimentResult::new(format!("noisy-ghz/p={p}"), params, est);
        rows.push(NoisyGhzRow { p, estimate: res.mean, std: res.std, true_value: 1.0 - p });
        results.push(res);
    }
    Ok(NoisyGhzOutput { rows, results })
}

/// `p,estimate,std,true` rows.
pub fn write_noisy_ghz_csv<W: Write>(rows: &[NoisyGhzRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct VarianceCompareConfig {
    pub qubits: Vec<usize>,
    pub clifford_samples: usize,
    pub seed: u64,
}

impl Default for VarianceCompareConfig {
    fn default() -> Self {
        Self { qubits: vec![1, 2, 3], clifford_samples: 100_000, seed: 2023 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VarianceRow {
    pub observable: String,
    pub n: usize,
    /// Exact single-shot variance under uniform MUB sampling.
    pub var_mub: f64,
    /// Sample variance of Clifford snapshot predictions.
    pub var_clifford: f64,
    /// Standard error of `var_clifford`.
    pub var_clifford_stderr: f64,
    pub bound_mub: f64,
    pub bound_clifford: f64,
}

/// Sample variance and its standard error from the fourth central moment.
pub fn variance_with_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    let var = m2 * n / (n - 1.0);
    (var, ((m4 - m2 * m2).max(0.0) / n).sqrt())
}

/// Variance of single-snapshot predictions on the GHZ state, MUB (exact)
/// against Clifford (sampled), next to the 2·tr(O₀²) and 3·tr(O₀²) bounds.
pub fn variance_compare(cfg: &VarianceCompareConfig) -> Result<Vec<VarianceRow>> {
    if cfg.clifford_samples < 2 {
        return Err(Error::Config("need at least two Clifford samples".into()));
    }
    let mut rows = Vec::new();
    for &n in &cfg.qubits {
        if n > crate::oracle::ORACLE_MAX_QUBITS.min(4) {
            return Err(Error::QubitCount { n, min: 1, max: 4 });
        }
        let fam = MubFamily::build(n)?;
        let model = StateModel::Pure(ghz_state(n)?);
        let targets = [
            (format!("ghz_n{n}"), Observable::ghz(n)?),
            (format!("zero_n{n}"), Observable::projector(StateVector::basis(BitVector::zeros(n)))),
        ];
        for (ti, (label, obs)) in targets.into_iter().enumerate() {
            let var_mub = exact_single_shot_variance(&fam, &model, &obs)?;
            let seed = derive_seed(cfg.seed, (n as u64) << 32 | ti as u64);
            let ens = CliffordEnsemble::new(n, seed)?;
            let shadow = acquire(&model, &ens, cfg.clifford_samples, seed)?;
            let values = snapshot_values(&shadow, &ens, &obs)?;
            let (var_clifford, stderr) = variance_with_stderr(&values);
            let t = hs_norm_sq(&traceless_part(&obs.to_dense()));
            rows.push(VarianceRow {
                observable: label,
                n,
                var_mub,
                var_clifford,
                var_clifford_stderr: stderr,
                bound_mub: 2.0 * t,
                bound_clifford: 3.0 * t,
            });
        }
    }
    Ok(rows)
}

/// `observable,var_mub,var_clifford,bound_mub,bound_clifford` rows.
pub fn write_variance_csv<W: Write>(rows: &[VarianceRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["observable", "var_mub", "var_clifford", "bound_mub", "bound_clifford"])?;
    for r in rows {
        out.write_record([
            r.observable.clone(),
            r.var_mub.to_string(),
            r.var_clifford.to_string(),
            r.bound_mub.to_string(),
            r.bound_clifford.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
