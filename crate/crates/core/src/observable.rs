use crate::error::{Error, Result};
use crate::sim::{ghz_state, DensityOp, StateVector, C64};

const HERMITIAN_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub enum ObservableKind {
    /// |φ⟩⟨φ|, with the nonzero entries of φ kept for sparse overlaps.
    Projector { state: StateVector, support: Vec<(usize, C64)> },
    Dense(DensityOp),
}

/// A target observable with its trace cached.
#[derive(Clone, Debug)]
pub struct Observable {
    kind: ObservableKind,
    trace: f64,
}

impl Observable {
    pub fn projector(state: StateVector) -> Self {
        let support = state.support().collect();
        Self { kind: ObservableKind::Projector { state, support }, trace: 1.0 }
    }

    pub fn dense(op: DensityOp) -> Result<Self> {
        if !op.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::Config("observable is not Hermitian".into()));
        }
        let trace = op.trace().re;
        Ok(Self { kind: ObservableKind::Dense(op), trace })
    }

    /// The GHZ fidelity observable |GHZ⟩⟨GHZ|.
    pub fn ghz(n: usize) -> Result<Self> {
        Ok(Self::projector(ghz_state(n)?))
    }

    pub fn kind(&self) -> &ObservableKind {
        &self.kind
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn num_qubits(&self) -> usize {
        match &self.kind {
            ObservableKind::Projector { state, .. } => state.num_qubits(),
            ObservableKind::Dense(op) => op.num_qubits(),
        }
    }

    /// Dense matrix form; allocates 4ⁿ entries.
    pub fn to_dense(&self) -> DensityOp {
        match &self.kind {
            ObservableKind::Projector { state, .. } => state.projector(),
            ObservableKind::Dense(op) => op.clone(),
        }
    }

    /// ⟨v|O|v⟩.
    pub fn expectation(&self, v: &StateVector) -> f64 {
        match &self.kind {
            ObservableKind::Projector { support, .. } => {
                let ov: C64 = support.iter().map(|&(l, phi)| phi.conj() * v.amps()[l]).sum();
                ov.norm_sqr()
            }
            ObservableKind::Dense(op) => op.expectation(v).re,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn projector_trace_and_support() {
        let o = Observable::ghz(4).unwrap();
        assert_eq!(o.trace(), 1.0);
        match o.kind() {
            ObservableKind::Projector { support, .. } => assert_eq!(support.len(), 2),
            _ => unreachable!(),
        }
        assert!((o.expectation(&ghz_state(4).unwrap()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dense_requires_hermitian() {
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(Observable::dense(DensityOp(m.clone())).is_err());
        m[(1, 0)] = C64::new(1.0, 0.0);
        let o = Observable::dense(DensityOp(m)).unwrap();
        assert_eq!(o.trace(), 0.0);
        assert_eq!(o.num_qubits(), 1);
    }
}
