//! Classical shadow tomography with the complete set of 2ⁿ + 1 mutually
//! unbiased bases (MUBs) for n qubits, with a random-Clifford baseline.
//!
//! Each MUB is built from a symmetric GF(2) matrix A_j obtained from
//! multiplication in GF(2ⁿ) under a self-dual basis. The state ⟨l|e_j^k⟩ is
//! 2^{-n/2}(−1)^{k·l} i^{lᵀA_j l}, and basis j is measured with a CZ, then
//! phase, then Hadamard circuit.
//!
//! ```
//! use mub_shadow::mub::MubFamily;
//! use mub_shadow::observable::Observable;
//! use mub_shadow::shadow::{acquire, estimate, EstimatorConfig};
//! use mub_shadow::sim::StateModel;
//!
//! let fam = MubFamily::build(3)?;
//! let shadow = acquire(&StateModel::Ghz(3), &fam, 5000, 1)?;
//! let f = estimate(&shadow, &fam, &[Observable::ghz(3)?], EstimatorConfig::default())?[0];
//! assert!((f - 1.0).abs() < 0.1);
//! # Ok::<(), mub_shadow::Error>(())
//! ```
//!
//! Modules:
//! - [`gf2`], [`field`]: packed GF(2) linear algebra and GF(2ⁿ) arithmetic.
//! - [`mub`], [`circuit`]: the MUB family, amplitudes and measurement circuits.
//! - [`sim`]: dense statevector simulation and Born sampling.
//! - [`ensemble`], [`clifford`]: MUB and random-Clifford measurement ensembles.
//! - [`shadow`], [`observable`], [`oracle`]: acquisition, estimation and exact checks.
//! - [`experiment`], [`io`], [`inputs`]: experiment drivers and file formats.

pub mod circuit;
pub mod clifford;
pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod field;
pub mod gf2;
pub mod inputs;
pub mod io;
pub mod mub;
pub mod observable;
pub mod oracle;
pub mod rng;
pub mod shadow;
pub mod sim;

pub use error::{Error, Result};
