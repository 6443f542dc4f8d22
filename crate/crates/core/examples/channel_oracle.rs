//! Exact checks by enumeration: measurement channel, snapshot moments and shadow norms.
//!
//! cargo run --example channel_oracle

use mub_shadow::gf2::BitVector;
use mub_shadow::mub::MubFamily;
use mub_shadow::oracle::{exact_channel_enum, exact_moments, shadow_norm_sq};
use mub_shadow::shadow::forward_channel;
use mub_shadow::sim::{ghz_state, StateVector};

fn main() -> mub_shadow::Result<()> {
    for n in 1..=3 {
        let fam = MubFamily::build(n)?;
        let rho = ghz_state(n)?.projector();
        let err = exact_channel_enum(&fam, &rho)?.frobenius_distance(&forward_channel(&rho));
        let m = exact_moments(&fam, &rho, &rho)?;
        let ghz = shadow_norm_sq(&fam, &rho)?;
        let zero = shadow_norm_sq(&fam, &StateVector::basis(BitVector::zeros(n)).projector())?;
        println!(
            "n={n}: channel error {err:.1e}, mean {:.6}, variance {:.4}, \
             shadow norm GHZ {:.4} / zero {:.4}, 2tr(O0²) = {:.4}",
            m.mean, m.variance, ghz.value, zero.value, ghz.bound_mub
        );
    }
    Ok(())
}
