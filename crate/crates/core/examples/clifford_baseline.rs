//! Samples random Cliffords, shows a stabilizer snapshot and a Clifford shadow estimate.
//!
//! cargo run --example clifford_baseline

use mub_shadow::clifford::{enumerate_single_qubit_cliffords, rotated_basis_state, sample_clifford};
use mub_shadow::ensemble::CliffordEnsemble;
use mub_shadow::gf2::BitVector;
use mub_shadow::observable::Observable;
use mub_shadow::rng::stream_rng;
use mub_shadow::shadow::{acquire, estimate, EstimatorConfig};
use mub_shadow::sim::StateModel;

fn main() -> mub_shadow::Result<()> {
    println!("single-qubit Clifford group: {} elements", enumerate_single_qubit_cliffords().len());

    let mut rng = stream_rng(1, 0);
    let c = sample_clifford(3, &mut rng)?;
    for (q, img) in c.images().iter().enumerate() {
        println!("image {q}: x={:03b} z={:03b} sign={}", img.x, img.z, img.sign);
    }
    let snap = rotated_basis_state(&c, BitVector::zeros(3))?;
    println!("support of C|000>: {:?}", snap.support().map(|(l, _)| l).collect::<Vec<_>>());

    let ens = CliffordEnsemble::new(3, 11)?;
    let shadow = acquire(&StateModel::Ghz(3), &ens, 10_000, 11)?;
    let est = estimate(&shadow, &ens, &[Observable::ghz(3)?], EstimatorConfig { groups: 10 })?;
    println!("Clifford-shadow GHZ fidelity: {:.4}", est[0]);
    Ok(())
}
