#![allow(dead_code)]

use mub_shadow::sim::{DensityOp, StateVector, C64};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian_matrix<R: Rng>(d: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// Ginibre-distributed mixed state G·G†/tr(G·G†).
pub fn random_density<R: Rng>(n: usize, rng: &mut R) -> DensityOp {
    let g = gaussian_matrix(1 << n, rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityOp(m / tr)
}

/// GUE-like Hermitian matrix (G + G†)/2.
pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> DensityOp {
    let g = gaussian_matrix(1 << n, rng);
    DensityOp((&g + g.adjoint()) * C64::new(0.5, 0.0))
}

pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> StateVector {
    let amps: Vec<C64> = (0..1usize << n)
        .map(|_| C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::new(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}
