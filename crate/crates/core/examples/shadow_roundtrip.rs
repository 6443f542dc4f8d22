//! Acquires a shadow, writes it as JSON lines, reads it back and estimates several observables.
//!
//! cargo run --example shadow_roundtrip

use mub_shadow::io::{read_shadow_jsonl, write_shadow_jsonl};
use mub_shadow::mub::MubFamily;
use mub_shadow::observable::Observable;
use mub_shadow::shadow::{acquire, estimate, EstimatorConfig};
use mub_shadow::sim::{ghz_minus_state, StateModel};

fn main() -> mub_shadow::Result<()> {
    let n = 4;
    let fam = MubFamily::build(n)?;
    let shadow = acquire(&StateModel::noisy_ghz(n, 0.25)?, &fam, 20_000, 5)?;

    let mut buf = Vec::new();
    write_shadow_jsonl(&shadow, &mut buf)?;
    let text = String::from_utf8_lossy(&buf);
    for line in text.lines().take(3) {
        println!("{line}");
    }
    let back = read_shadow_jsonl(buf.as_slice())?;
    assert_eq!(back, shadow);

    let obs = [Observable::ghz(n)?, Observable::projector(ghz_minus_state(n)?)];
    let est = estimate(&back, &fam, &obs, EstimatorConfig { groups: 10 })?;
    println!("<psi+|rho|psi+> ~ {:.4} (exact 0.75)", est[0]);
    println!("<psi-|rho|psi-> ~ {:.4} (exact 0.25)", est[1]);
    Ok(())
}
