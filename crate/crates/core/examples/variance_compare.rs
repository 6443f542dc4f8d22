//! Single-shot variance of MUB (exact) and Clifford (sampled) shadows.
//!
//! cargo run --release --example variance_compare

use mub_shadow::experiment::{variance_compare, VarianceCompareConfig};

fn main() -> mub_shadow::Result<()> {
    println!("{:<8} {:>9} {:>16} {:>9} {:>9}", "obs", "var_mub", "var_clifford", "2tr(O0²)", "3tr(O0²)");
    for r in variance_compare(&VarianceCompareConfig::default())? {
        println!(
            "{:<8} {:>9.4} {:>9.4}±{:.4} {:>9.4} {:>9.4}",
            r.observable, r.var_mub, r.var_clifford, r.var_clifford_stderr, r.bound_mub, r.bound_clifford
        );
    }
    Ok(())
}
