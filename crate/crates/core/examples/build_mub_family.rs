//! Builds the MUB family for n qubits, checks unbiasedness and prints one state.
//!
//! cargo run --example build_mub_family -- 3

use mub_shadow::gf2::BitVector;
use mub_shadow::mub::MubFamily;

fn main() -> mub_shadow::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(3, |a| a.parse().expect("qubit count"));
    let fam = MubFamily::build(n)?;
    println!("GF(2^{n}) modulus {:#b}", fam.field().poly().coeffs());
    println!("self-dual basis: {:?}", fam.self_dual_basis());
    for j in 1..fam.num_bases().min(5) {
        println!("A_{} =\n{}", j, fam.matrix(j).expect("in range"));
    }
    let report = fam.verify_unbiased(1e-10)?;
    println!("{} bases, max cross deviation {:e}", fam.num_bases(), report.max_cross_deviation);

    let state = fam.mub_state(2 % fam.num_bases(), BitVector::zeros(n))?;
    for (l, a) in state.amps().iter().enumerate().take(8) {
        println!("<{l:0n$b}|e> = {a:.4}");
    }
    Ok(())
}
