//! Prints the CZ-P-H measurement circuit of every basis and the CZ totals.
//!
//! cargo run --example export_circuits -- 3

use mub_shadow::mub::MubFamily;

fn main() -> mub_shadow::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(3, |a| a.parse().expect("qubit count"));
    let fam = MubFamily::build(n)?;
    for j in 1..fam.num_bases() {
        let c = fam.emit_circuit(j)?;
        println!("# basis {j}: {} CZ", c.cz_count());
        print!("{}", c.to_text());
    }
    let counts = fam.cz_counts();
    let total: usize = counts.iter().sum();
    println!("total CZ {total}, mean {}", total as f64 / counts.len() as f64);
    println!("\n{}", fam.emit_circuit(fam.num_bases() - 1)?.to_qasm());
    Ok(())
}
