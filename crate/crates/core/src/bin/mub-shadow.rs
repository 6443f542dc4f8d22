use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use mub_shadow::ensemble::{CliffordEnsemble, Ensemble, EnsembleTag};
use mub_shadow::experiment::{
    ghz_fidelity, noisy_ghz, variance_compare, write_ghz_fidelity_csv, write_noisy_ghz_csv,
    write_summary_csv, write_variance_csv, GhzFidelityConfig, NoisyGhzConfig, VarianceCompareConfig,
};
use mub_shadow::inputs::{ObservableSpec, StateSpec};
use mub_shadow::io::{load_shadow, save_shadow, write_circuits, CircuitFormat};
use mub_shadow::mub::MubFamily;
use mub_shadow::shadow::{acquire, estimate, EstimatorConfig};
use mub_shadow::Result;

#[derive(Parser)]
#[command(name = "mub-shadow", version, about = "Classical shadows with mutually unbiased bases")]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, verify and export the MUB family.
    #[command(subcommand)]
    Mub(MubCmd),
    /// Acquire a shadow and write it as JSON lines.
    Acquire(AcquireArgs),
    /// Predict an observable from a saved shadow.
    Estimate(EstimateArgs),
    /// Run one of the fidelity / variance experiments.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand)]
enum MubCmd {
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    Circuits {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "text")]
        format: CircuitFormat,
    },
    Counts {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct AcquireArgs {
    #[arg(long)]
    state: StateSpec,
    #[arg(long, default_value = "mub")]
    ensemble: EnsembleTag,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    shots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    shadow: PathBuf,
    #[arg(long, default_value = "ghz-fidelity")]
    observable: ObservableSpec,
    #[arg(long, default_value_t = 1)]
    groups: usize,
}

#[derive(Subcommand)]
enum ExperimentCmd {
    GhzFidelity {
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 4, 5, 6])]
        qubits: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        shots: usize,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        groups: usize,
        #[arg(long, default_value_t = 2023)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    NoisyGhz {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 5000)]
        shots: usize,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        groups: usize,
        /// Comma-separated p values; defaults to 0, 0.1, …, 1.
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        #[arg(long, default_value_t = 2023)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    VarianceCompare {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3])]
        qubits: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 2023)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("thread pool configured once");
    }
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn create(path: &Path) -> Result<fs::File> {
    Ok(fs::File::create(path)?)
}

// Ok(false) signals a verification failure.
fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Mub(MubCmd::Verify { n, tol }) => {
            let r = MubFamily::build(n)?.verify_unbiased(tol)?;
            println!(
                "n={} bases={} max_deviation={:e} orthonormality={:e} tol={:e} {}",
                n,
                (1usize << n) + 1,
                r.max_cross_deviation,
                r.max_orthonormality_deviation,
                tol,
                if r.passed() { "PASS" } else { "FAIL" }
            );
            if let (false, Some((a, b))) = (r.passed(), r.worst_pair) {
                println!("worst pair: bases {a} and {b}");
            }
            Ok(r.passed())
        }
        Command::Mub(MubCmd::Circuits { n, out, format }) => {
            let paths = write_circuits(&MubFamily::build(n)?, &out, format)?;
            println!("wrote {} files to {}", paths.len(), out.display());
            Ok(true)
        }
        Command::Mub(MubCmd::Counts { n }) => {
            let counts = MubFamily::build(n)?.cz_counts();
            for (i, c) in counts.iter().enumerate() {
                println!("basis {}: {c}", i + 1);
            }
            let total: usize = counts.iter().sum();
            println!("total {total}");
            println!("max {}", counts.iter().max().copied().unwrap_or(0));
            println!("mean {}", total as f64 / counts.len() as f64);
            Ok(true)
        }
        Command::Acquire(a) => {
            let model = a.state.model(a.n)?;
            let ens: Box<dyn Ensemble> = match a.ensemble {
                EnsembleTag::Mub => Box::new(MubFamily::build(a.n)?),
                EnsembleTag::Clifford => Box::new(CliffordEnsemble::new(a.n, a.seed)?),
            };
            let mut shadow = acquire(&model, ens.as_ref(), a.shots, a.seed)?;
            shadow.meta.state = a.state.to_string();
            save_shadow(&shadow, &a.out)?;
            Ok(true)
        }
        Command::Estimate(e) => {
            let shadow = load_shadow(&e.shadow)?;
            let obs = e.observable.load(shadow.meta.n)?;
            let ens = shadow.ensemble()?;
            let est = estimate(&shadow, ens.as_ref(), &[obs], EstimatorConfig { groups: e.groups })?[0];
            let out = json!({
                "shadow": e.shadow.display().to_string(),
                "n": shadow.meta.n,
                "N": shadow.meta.shots,
                "K": e.groups,
                "ensemble": shadow.meta.ensemble,
                "state": shadow.meta.state,
                "observable": e.observable.to_string(),
                "estimate": est,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(true)
        }
        Command::Experiment(x) => run_experiment(x),
    }
}

fn run_experiment(cmd: ExperimentCmd) -> Result<bool> {
    match cmd {
        ExperimentCmd::GhzFidelity { qubits, shots, runs, groups, seed, out } => {
            fs::create_dir_all(&out)?;
            let res = ghz_fidelity(&GhzFidelityConfig { qubits, shots, runs, groups, seed })?;
            write_ghz_fidelity_csv(&res, create(&out.join("ghz_fidelity.csv"))?)?;
            write_summary_csv(&res, create(&out.join("ghz_fidelity_summary.csv"))?)?;
            serde_json::to_writer_pretty(create(&out.join("ghz_fidelity.json"))?, &res)?;
            for r in &res {
                println!("n={} mean={:.4} std={:.4} runs={}", r.params.n, r.mean, r.std, r.runs);
            }
        }
        ExperimentCmd::NoisyGhz { n, shots, runs, groups, p, seed, out } => {
            fs::create_dir_all(&out)?;
            let mut cfg = NoisyGhzConfig { n, shots, runs, groups, seed, ..Default::default() };
            if !p.is_empty() {
                cfg.p_grid = p;
            }
            let res = noisy_ghz(&cfg)?;
            write_noisy_ghz_csv(&res.rows, create(&out.join("noisy_ghz.csv"))?)?;
            serde_json::to_writer_pretty(create(&out.join("noisy_ghz.json"))?, &res)?;
            for r in &res.rows {
                println!("p={:.2} estimate={:.4} std={:.4} true={:.2}", r.p, r.estimate, r.std, r.true_value);
            }
        }
        ExperimentCmd::VarianceCompare { qubits, samples, seed, out } => {
            fs::create_dir_all(&out)?;
            let rows = variance_compare(&VarianceCompareConfig { qubits, clifford_samples: samples, seed })?;
            write_variance_csv(&rows, create(&out.join("variance_compare.csv"))?)?;
            serde_json::to_writer_pretty(create(&out.join("variance_compare.json"))?, &rows)?;
            for r in &rows {
                println!(
                    "{}: var_mub={:.4} var_clifford={:.4}±{:.4} bound_mub={:.4} bound_clifford={:.4}",
                    r.observable, r.var_mub, r.var_clifford, r.var_clifford_stderr, r.bound_mub, r.bound_clifford
                );
            }
        }
    }
    Ok(true)
}
