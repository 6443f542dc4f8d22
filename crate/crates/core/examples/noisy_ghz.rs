//! Fidelity of a phase-flipped GHZ mixture against 1 − p.
//!
//! cargo run --release --example noisy_ghz

use mub_shadow::experiment::{noisy_ghz, write_noisy_ghz_csv, NoisyGhzConfig};

fn main() -> mub_shadow::Result<()> {
    let out = noisy_ghz(&NoisyGhzConfig::default())?;
    write_noisy_ghz_csv(&out.rows, std::io::stdout())
}
