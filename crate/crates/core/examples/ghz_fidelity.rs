//! GHZ fidelity from MUB shadows for n = 2..6, ten runs of 10⁴ shots each.
//!
//! cargo run --release --example ghz_fidelity

use mub_shadow::experiment::{ghz_fidelity, GhzFidelityConfig};

fn main() -> mub_shadow::Result<()> {
    for r in ghz_fidelity(&GhzFidelityConfig::default())? {
        println!("n={} mean={:.4} std={:.4}", r.params.n, r.mean, r.std);
    }
    Ok(())
}
