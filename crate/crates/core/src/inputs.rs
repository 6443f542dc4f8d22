//! Textual state and observable specifications accepted by the CLI.

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::io::{read_amplitudes, read_dense_matrix};
use crate::observable::Observable;
use crate::sim::{ghz_minus_state, StateModel, StateVector};

/// `ghz`, `ghz-minus`, `noisy-ghz:<p>`, `zero` or `amplitudes:<file>`.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Ghz,
    GhzMinus,
    NoisyGhz(f64),
    Zero,
    Amplitudes(PathBuf),
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("ghz", None) => Ok(Self::Ghz),
            ("ghz-minus", None) => Ok(Self::GhzMinus),
            ("zero", None) => Ok(Self::Zero),
            ("noisy-ghz", Some(p)) => {
                let p: f64 = p.parse().map_err(|_| Error::Parse(format!("bad probability {p:?}")))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Parse(format!("probability {p} outside [0, 1]")));
                }
                Ok(Self::NoisyGhz(p))
            }
            ("amplitudes", Some(path)) if !path.is_empty() => Ok(Self::Amplitudes(path.into())),
            _ => Err(Error::Parse(format!(
                "unknown state {s:?}; expected ghz, ghz-minus, zero, noisy-ghz:<p> or amplitudes:<file>"
            ))),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ghz => f.write_str("ghz"),
            Self::GhzMinus => f.write_str("ghz-minus"),
            Self::NoisyGhz(p) => write!(f, "noisy-ghz:{p}"),
            Self::Zero => f.write_str("zero"),
            Self::Amplitudes(p) => write!(f, "amplitudes:{}", p.display()),
        }
    }
}

impl StateSpec {
    pub fn model(&self, n: usize) -> Result<StateModel> {
        match self {
            Self::Ghz => Ok(StateModel::Ghz(n)),
            Self::GhzMinus => Ok(StateModel::Pure(ghz_minus_state(n)?)),
            Self::NoisyGhz(p) => StateModel::noisy_ghz(n, *p),
            Self::Zero => {
                crate::sim::check_dense(n)?;
                Ok(StateModel::Pure(StateVector::basis(BitVector::zeros(n))))
            }
            Self::Amplitudes(path) => {
                let s = read_amplitudes(BufReader::new(File::open(path)?))?;
                if s.num_qubits() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: s.num_qubits() });
                }
                Ok(StateModel::Pure(s))
            }
        }
    }
}

/// `ghz-fidelity`, `amplitudes:<file>` (projector) or `matrix:<file>`.
#[derive(Clone, Debug, PartialEq)]
pub enum ObservableSpec {
    GhzFidelity,
    Amplitudes(PathBuf),
    Matrix(PathBuf),
}

impl FromStr for ObservableSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "ghz-fidelity" => Ok(Self::GhzFidelity),
            Some(("amplitudes", p)) if !p.is_empty() => Ok(Self::Amplitudes(p.into())),
            Some(("matrix", p)) if !p.is_empty() => Ok(Self::Matrix(p.into())),
            _ => Err(Error::Parse(format!(
                "unknown observable {s:?}; expected ghz-fidelity, amplitudes:<file> or matrix:<file>"
            ))),
        }
    }
}

impl fmt::Display for ObservableSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::GhzFidelity => f.write_str("ghz-fidelity"),
            Self::Amplitudes(p) => write!(f, "amplitudes:{}", p.display()),
            Self::Matrix(p) => write!(f, "matrix:{}", p.display()),
        }
    }
}

impl ObservableSpec {
    /// Loads the observable and checks it acts on n qubits.
    pub fn load(&self, n: usize) -> Result<Observable> {
        let obs = match self {
            Self::GhzFidelity => Observable::ghz(n)?,
            Self::Amplitudes(p) => Observable::projector(read_amplitudes(BufReader::new(File::open(p)?))?),
            Self::Matrix(p) => Observable::dense(read_dense_matrix(BufReader::new(File::open(p)?))?)?,
        };
        if obs.num_qubits() != n {
            return Err(Error::DimensionMismatch { expected: n, found: obs.num_qubits() });
        }
        Ok(obs)
    }
}
