//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::alloc::{GlobalAlloc, Layout, System};
use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mub_shadow::clifford::{enumerate_single_qubit_cliffords, rotated_basis_state, sample_clifford};
use mub_shadow::experiment::{
    ghz_fidelity, noisy_ghz, variance_compare, GhzFidelityConfig, NoisyGhzConfig, VarianceCompareConfig,
};
use mub_shadow::gf2::BitVector;
use mub_shadow::io::write_shadow_jsonl;
use mub_shadow::mub::MubFamily;
use mub_shadow::observable::Observable;
use mub_shadow::oracle::{exact_channel_enum, exact_single_shot_variance, hs_norm_sq, shadow_norm_sq, traceless_part};
use mub_shadow::shadow::{acquire, forward_channel, snapshot_expectation, SnapshotRecord};
use mub_shadow::ensemble::EnsembleTag;
use mub_shadow::sim::{apply_circuit, apply_circuit_inverse, ghz_state, DensityOp, StateModel, StateVector, C64};

use common::{random_density, random_hermitian};

struct CountingAlloc;

static ALLOCATIONS: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        ALLOCATIONS.fetch_add(1, Ordering::Relaxed);
        System.alloc(layout)
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout)
    }
}

#[global_allocator]
static GLOBAL: CountingAlloc = CountingAlloc;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn all_states(fam: &MubFamily) -> Vec<Vec<StateVector>> {
    let n = fam.num_qubits();
    (0..fam.num_bases())
        .map(|j| (0..1u64 << n).map(|k| fam.mub_state(j, BitVector::new(n, k)).unwrap()).collect())
        .collect()
}

fn unbiasedness() -> Outcome {
    let mut worst = 0.0f64;
    let mut ortho = 0.0f64;
    for n in 1..=5 {
        let fam = MubFamily::build(n).unwrap();
        let states = all_states(&fam);
        let inv_d = 1.0 / (1u64 << n) as f64;
        for (a, ba) in states.iter().enumerate() {
            for (ka, e) in ba.iter().enumerate() {
                for (kb, f) in ba.iter().enumerate() {
                    let target = if ka == kb { 1.0 } else { 0.0 };
                    ortho = ortho.max((e.inner(f).norm_sqr() - target).abs());
                }
                for bb in &states[a + 1..] {
                    for f in bb {
                        worst = worst.max((e.inner(f).norm_sqr() - inv_d).abs());
                    }
                }
            }
        }
    }
    ensure(
        worst < 1e-10 && ortho < 1e-10,
        format!("n=1..5 max cross deviation {worst:.2e}, orthonormality {ortho:.2e} (tol 1e-10)"),
    )
}

fn channel_equivalence() -> Outcome {
    let mut r = rng(11);
    let mut worst = 0.0f64;
    for n in 1..=4 {
        let fam = MubFamily::build(n).unwrap();
        for _ in 0..50 {
            let rho = random_density(n, &mut r);
            let got = exact_channel_enum(&fam, &rho).unwrap();
            worst = worst.max(got.frobenius_distance(&forward_channel(&rho)));
        }
    }
    ensure(worst < 1e-10, format!("50 states per n=1..4, max Frobenius error {worst:.2e} (tol 1e-10)"))
}

fn estimator_unbiasedness() -> Outcome {
    let mut r = rng(12);
    let mut worst = 0.0f64;
    for n in 1..=3 {
        let fam = MubFamily::build(n).unwrap();
        let nb = fam.num_bases() as f64;
        for _ in 0..20 {
            let rho = random_density(n, &mut r);
            let o = random_hermitian(n, &mut r);
            let obs = Observable::dense(o.clone()).unwrap();
            let mut mean = 0.0;
            for j in 0..fam.num_bases() {
                for k in 0..1u64 << n {
                    let b = BitVector::new(n, k);
                    let v = fam.mub_state(j, b).unwrap();
                    let p = rho.expectation(&v).re / nb;
                    let rec = SnapshotRecord { ensemble: EnsembleTag::Mub, rotation: j as u64, outcome: b };
                    mean += p * snapshot_expectation(&rec, &obs, &fam).unwrap();
                }
            }
            let truth = (o.matrix() * rho.matrix()).trace().re;
            worst = worst.max((mean - truth).abs());
        }
    }
    ensure(worst < 1e-10, format!("20 (rho, O) per n=1..3, max |E[X] - tr(O rho)| {worst:.2e} (tol 1e-10)"))
}

fn shadow_norm_bound() -> Outcome {
    let fam1 = MubFamily::build(1).unwrap();
    let zero = StateVector::basis(BitVector::new(1, 0)).projector();
    let s1 = shadow_norm_sq(&fam1, &zero).unwrap();
    let n1_ok = (s1.value - 0.75).abs() < 1e-10 && (s1.bound_mub - 1.0).abs() < 1e-12;

    let mut r = rng(13);
    let mut report = Vec::new();
    let mut violations = 0;
    for n in 1..=4 {
        let fam = MubFamily::build(n).unwrap();
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let s = shadow_norm_sq(&fam, &random_hermitian(n, &mut r)).unwrap();
            let ratio = s.value / s.bound_mub;
            worst = worst.max(ratio);
            if s.value > s.bound_mub * (1.0 + 1e-10) {
                violations += 1;
            }
        }
        report.push(format!("n={n} worst norm/bound {worst:.4}"));
    }
    ensure(
        n1_ok && violations == 0,
        format!(
            "n=1 |0><0|: {:.6} vs bound {:.6}; {violations}/400 random O exceed 2 tr(O0^2) [{}]",
            s1.value,
            s1.bound_mub,
            report.join(", ")
        ),
    )
}

fn variance_comparison() -> Outcome {
    let rows = variance_compare(&VarianceCompareConfig { qubits: vec![2, 3], clifford_samples: 100_000, seed: 2023 })
        .unwrap();
    let mut ok = true;
    let mut lines = Vec::new();
    for n in [2usize, 3] {
        let model = StateModel::Pure(ghz_state(n).unwrap());
        let obs = Observable::ghz(n).unwrap();
        let fam = MubFamily::build(n).unwrap();
        let var_mub = exact_single_shot_variance(&fam, &model, &obs).unwrap();
        let t = hs_norm_sq(&traceless_part(&obs.to_dense()));
        let row = rows.iter().find(|r| r.observable == format!("ghz_n{n}")).unwrap();
        ok &= var_mub <= 2.0 * t + 1e-12;
        ok &= row.var_clifford <= 3.0 * t + 5.0 * row.var_clifford_stderr;
        lines.push(format!(
            "n={n} var_mub {var_mub:.4} <= {:.4}, var_clifford {:.4}±{:.4} <= {:.4}",
            2.0 * t,
            row.var_clifford,
            row.var_clifford_stderr,
            3.0 * t
        ));
    }
    ensure(ok, lines.join("; "))
}

fn gate_counts() -> Outcome {
    let total3: usize = MubFamily::build(3).unwrap().cz_counts().iter().sum();
    let mut ok = total3 == 12;
    let mut lines = vec![format!("n=3 total {total3}")];
    for n in 2..=6usize {
        let counts = MubFamily::build(n).unwrap().cz_counts();
        let max = *counts.iter().max().unwrap();
        let total: usize = counts.iter().sum();
        // mean over the 2ⁿ non-identity circuits equals n(n−1)/4 exactly
        let exact_mean = 4 * total == n * (n - 1) * counts.len();
        ok &= max <= n * (n - 1) / 2 && exact_mean;
        lines.push(format!("n={n} max {max} mean {}", total as f64 / counts.len() as f64));
    }
    ensure(ok, lines.join(", "))
}

fn circuit_consistency() -> Outcome {
    let mut checked = 0;
    for n in 1..=4 {
        let fam = MubFamily::build(n).unwrap();
        for j in 1..fam.num_bases() {
            let c = fam.emit_circuit(j).unwrap();
            for k in 0..1u64 << n {
                let b = BitVector::new(n, k);
                let state = fam.mub_state(j, b).unwrap();
                let prepared = apply_circuit_inverse(&c, &StateVector::basis(b)).unwrap();
                let measured = apply_circuit(&c, &state).unwrap();
                if !prepared.equal_up_to_phase(&state, 1e-10)
                    || !measured.equal_up_to_phase(&StateVector::basis(b), 1e-10)
                {
                    return Err(format!("mismatch at n={n}, basis {j}, k={b}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (basis, outcome) pairs for n=1..4 agree to 1e-10"))
}

fn fig1() -> Outcome {
    let res = ghz_fidelity(&GhzFidelityConfig::default()).unwrap();
    let ok = res.iter().all(|r| (r.mean - 1.0).abs() <= 0.05);
    let lines: Vec<String> =
        res.iter().map(|r| format!("n={} mean {:.4} std {:.4}", r.params.n, r.mean, r.std)).collect();
    ensure(ok, format!("10^4 shots x 10 runs: {}", lines.join(", ")))
}

fn fig2() -> Outcome {
    let out = noisy_ghz(&NoisyGhzConfig::default()).unwrap();
    let worst = out.rows.iter().map(|r| (r.estimate - r.true_value).abs()).fold(0.0, f64::max);
    let p1 = out.rows.iter().find(|r| r.p == 1.0).map(|r| r.estimate).unwrap();
    ensure(
        worst <= 0.1 && p1.abs() <= 0.1,
        format!("n=3, 5000 shots, p=0..1: max |estimate - (1-p)| {worst:.4}, p=1 estimate {p1:.4}"),
    )
}

fn clifford_baseline() -> Outcome {
    let elems = enumerate_single_qubit_cliffords();
    let mut worst = 0.0f64;
    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let mut unit = DMatrix::<C64>::zeros(2, 2);
        unit[(a, b)] = C64::new(1.0, 0.0);
        let unit = DensityOp(unit);
        let mut avg = DMatrix::<C64>::zeros(2, 2);
        for e in &elems {
            for k in 0..2 {
                let v = rotated_basis_state(e, BitVector::new(1, k)).unwrap();
                let col = DMatrix::from_column_slice(2, 1, v.amps());
                avg += (&col * col.adjoint()) * unit.expectation(&v);
            }
        }
        let avg = DensityOp(avg / C64::new(elems.len() as f64, 0.0));
        worst = worst.max(avg.frobenius_distance(&forward_channel(&unit)));
    }

    let index: HashMap<_, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let draws = 100_000usize;
    let mut counts = vec![0usize; elems.len()];
    let mut r = rng(14);
    let mut unmatched = 0;
    for _ in 0..draws {
        match index.get(&sample_clifford(1, &mut r).unwrap()) {
            Some(&i) => counts[i] += 1,
            None => unmatched += 1,
        }
    }
    let p = 1.0 / elems.len() as f64;
    let expected = draws as f64 * p;
    let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
    let max_dev = counts.iter().map(|&c| (c as f64 - expected).abs() / sigma).fold(0.0, f64::max);
    ensure(
        elems.len() == 24 && worst < 1e-12 && unmatched == 0 && max_dev <= 5.0,
        format!(
            "{} elements, channel error {worst:.2e}; 10^5 draws max deviation {max_dev:.2} sigma, {unmatched} unmatched",
            elems.len()
        ),
    )
}

fn performance() -> Outcome {
    let n = 14;
    let fam = MubFamily::build(n).unwrap();
    let j = fam.num_bases() / 2;
    let k = BitVector::new(n, 0x1234);
    let start = Instant::now();
    let state = fam.mub_state(j, k).unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    let ls: Vec<BitVector> = (0..1000u64).map(|l| BitVector::new(n, l * 13 % (1 << n))).collect();
    let mut acc = C64::new(0.0, 0.0);
    let before = ALLOCATIONS.load(Ordering::SeqCst);
    for &l in &ls {
        acc += fam.amplitude(j, k, l);
    }
    let allocs = ALLOCATIONS.load(Ordering::SeqCst) - before;
    let agrees = (fam.amplitude(j, k, ls[7]) - state.amps()[ls[7].index()]).norm() < 1e-12;
    ensure(
        elapsed < 1.0 && allocs == 0 && agrees && acc.norm().is_finite(),
        format!("n=14 state synthesis {elapsed:.3}s (limit 1s); 1000 amplitude queries made {allocs} allocations"),
    )
}

fn shadow_bytes(threads: usize) -> Vec<u8> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| {
        let fam = MubFamily::build(4).unwrap();
        let shadow = acquire(&StateModel::noisy_ghz(4, 0.3).unwrap(), &fam, 20_000, 99).unwrap();
        let mut buf = Vec::new();
        write_shadow_jsonl(&shadow, &mut buf).unwrap();
        buf
    })
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_mub-shadow")).args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Outcome {
    let lib_same = shadow_bytes(1) == shadow_bytes(8) && shadow_bytes(8) == shadow_bytes(8);

    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let mut files = Vec::new();
    for (i, threads) in ["1", "8", "8"].iter().enumerate() {
        let out = path(&format!("shadow{i}.jsonl"));
        cli(&["--threads", threads, "acquire", "--state", "ghz", "--n", "5", "--shots", "5000", "--seed", "42", "--out", &out]);
        let est = cli(&["--threads", threads, "estimate", "--shadow", &out, "--groups", "5"]);
        let exp = path(&format!("exp{i}"));
        cli(&["--threads", threads, "experiment", "noisy-ghz", "--shots", "500", "--runs", "2", "--p", "0,0.5", "--out", &exp]);
        let clif = path(&format!("clifford{i}.jsonl"));
        cli(&["--threads", threads, "acquire", "--state", "ghz", "--ensemble", "clifford", "--n", "3", "--shots", "2000", "--seed", "5", "--out", &clif]);
        files.push((
            std::fs::read(&out).unwrap(),
            String::from_utf8(est).unwrap().replace(&out, "<shadow>"),
            std::fs::read(format!("{exp}/noisy_ghz.csv")).unwrap(),
            std::fs::read(&clif).unwrap(),
        ));
    }
    let cli_same = files.windows(2).all(|w| w[0] == w[1]);
    ensure(
        lib_same && cli_same,
        format!("library acquire 1 vs 8 threads identical: {lib_same}; CLI acquire/estimate/experiment bytes identical across runs and 1/8 threads: {cli_same}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("unbiasedness", unbiasedness),
        ("channel equivalence", channel_equivalence),
        ("estimator unbiasedness", estimator_unbiasedness),
        ("shadow-norm bound", shadow_norm_bound),
        ("variance comparison", variance_comparison),
        ("gate counts", gate_counts),
        ("circuit consistency", circuit_consistency),
        ("GHZ fidelity", fig1),
        ("noisy GHZ fidelity", fig2),
        ("Clifford baseline exactness", clifford_baseline),
        ("performance sanity", performance),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|a| a == &id || name.contains(a.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("[PASS] criterion {id} ({name}): {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] criterion {id} ({name}): {msg} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
