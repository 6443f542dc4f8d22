//! Uniformly random n-qubit Clifford elements.
//!
//! The symplectic part is drawn with the Koenig–Smolin transvection
//! construction (a random walk-free bijection onto Sp(2n, 2)); sign bits are
//! drawn independently, which together is exactly uniform over the Clifford
//! group modulo global phase.
//!
//! An element stores the tableau of the snapshot unitary C = U†, i.e. the
//! images C P_q C† of every X_q and Z_q, so that [`rotated_basis_state`]
//! is a stabilizer-state construction rather than an inversion. U is
//! uniform exactly when U† is.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{parity, qubit_mask, BitVector};
use crate::sim::{StateVector, C64, I_POW};

/// Largest n for which dense statevectors of Clifford snapshots are built.
pub const CLIFFORD_DENSE_MAX: usize = 6;

/// Largest n the tableau sampler handles (2n coordinates in one word).
pub const CLIFFORD_MAX_QUBITS: usize = 31;

/// Hermitian Pauli (−1)^sign · ⊗_q i^{x_q z_q} X^{x_q} Z^{z_q}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliRow {
    pub x: u64,
    pub z: u64,
    pub sign: bool,
}

impl PauliRow {
    /// Symplectic form: 1 when the two Paulis anticommute.
    pub fn anticommutes(&self, other: &PauliRow) -> bool {
        (parity(self.x & other.z) ^ parity(self.z & other.x)) == 1
    }

    /// Dense application to a statevector on n qubits.
    pub fn apply(&self, amps: &[C64]) -> Vec<C64> {
        let ny = (self.x & self.z).count_ones() as usize;
        let base = (ny + if self.sign { 2 } else { 0 }) & 3;
        let mut out = vec![C64::new(0.0, 0.0); amps.len()];
        for (idx, &a) in amps.iter().enumerate() {
            let idx = idx as u64;
            let e = (base + 2 * parity(self.z & idx) as usize) & 3;
            out[(idx ^ self.x) as usize] = a * I_POW[e];
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordElement {
    n: usize,
    /// Images of X_0 … X_{n−1}, then Z_0 … Z_{n−1}.
    images: Vec<PauliRow>,
}

impl CliffordElement {
    pub fn identity(n: usize) -> Self {
        let mut images = Vec::with_capacity(2 * n);
        images.extend((0..n).map(|q| PauliRow { x: qubit_mask(n, q), z: 0, sign: false }));
        images.extend((0..n).map(|q| PauliRow { x: 0, z: qubit_mask(n, q), sign: false }));
        Self { n, images }
    }

    pub fn from_images(n: usize, images: Vec<PauliRow>) -> Result<Self> {
        if images.len() != 2 * n {
            return Err(Error::DimensionMismatch { expected: 2 * n, found: images.len() });
        }
        let elem = Self { n, images };
        if !elem.is_symplectic() {
            return Err(Error::Config("tableau violates the symplectic condition".into()));
        }
        Ok(elem)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &[PauliRow] {
        &self.images
    }

    pub fn x_image(&self, q: usize) -> &PauliRow {
        &self.images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliRow {
        &self.images[self.n + q]
    }

    /// Images anticommute exactly when the originals do.
    pub fn is_symplectic(&self) -> bool {
        let n = self.n;
        (0..2 * n).all(|i| {
            (0..2 * n).all(|j| {
                let expected = i != j && i % n == j % n;
                self.images[i].anticommutes(&self.images[j]) == expected
            })
        })
    }
}

// --- Koenig–Smolin sampling on interleaved coordinates (x_0, z_0, x_1, z_1, …)

#[inline]
fn bit(v: u64, i: usize) -> bool {
    v >> i & 1 == 1
}

fn inner(v: u64, w: u64) -> bool {
    const EVEN: u64 = 0x5555_5555_5555_5555;
    (parity(v & EVEN & (w >> 1)) ^ parity(w & EVEN & (v >> 1))) == 1
}

fn transvection(k: u64, v: u64) -> u64 {
    if inner(k, v) {
        v ^ k
    } else {
        v
    }
}

// Vectors h1, h2 with y = Z_h2 Z_h1 x, for nonzero x, y.
fn find_transvection(x: u64, y: u64, pairs: usize) -> (u64, u64) {
    if x == y {
        return (0, 0);
    }
    if inner(x, y) {
        return (x ^ y, 0);
    }
    let pair = |v: u64, i: usize| (bit(v, 2 * i), bit(v, 2 * i + 1));
    let mut z = 0u64;
    for i in 0..pairs {
        let (x0, x1) = pair(x, i);
        let (y0, y1) = pair(y, i);
        if (x0 || x1) && (y0 || y1) {
            let mut z0 = x0 ^ y0;
            let mut z1 = x1 ^ y1;
            if !z0 && !z1 {
                z1 = true;
                if x0 != x1 {
                    z0 = true;
                }
            }
            z |= (z0 as u64) << (2 * i) | (z1 as u64) << (2 * i + 1);
            return (x ^ z, y ^ z);
        }
    }
    for i in 0..pairs {
        let (x0, x1) = pair(x, i);
        let (y0, y1) = pair(y, i);
        if (x0 || x1) && !(y0 || y1) {
            let (z0, z1) = if x0 == x1 { (false, true) } else { (x1, x0) };
            z |= (z0 as u64) << (2 * i) | (z1 as u64) << (2 * i + 1);
            break;
        }
    }
    for i in 0..pairs {
        let (x0, x1) = pair(x, i);
        let (y0, y1) = pair(y, i);
        if !(x0 || x1) && (y0 || y1) {
            let (z0, z1) = if y0 == y1 { (false, true) } else { (y1, y0) };
            z |= (z0 as u64) << (2 * i) | (z1 as u64) << (2 * i + 1);
            break;
        }
    }
    (x ^ z, y ^ z)
}

// Rows of a uniformly random symplectic matrix on `pairs` qubit pairs;
// row 2i is the image of x_i, row 2i+1 the image of z_i.
fn random_symplectic<R: Rng + ?Sized>(pairs: usize, rng: &mut R) -> Vec<u64> {
    let nn = 2 * pairs;
    let full = if nn == 64 { u64::MAX } else { (1u64 << nn) - 1 };
    let f1 = rng.gen_range(1..=full);
    let e1 = 1u64;
    let (t0, t1) = find_transvection(e1, f1, pairs);
    let bits: u64 = rng.gen_range(0..1u64 << (nn - 1));

    // e′ = e1 with coordinates 2.. set from bits[1..]
    let eprime = e1 | (bits >> 1) << 2;
    let h0 = transvection(t1, transvection(t0, eprime));
    let f1 = if bits & 1 == 1 { 0 } else { f1 };

    let mut g: Vec<u64> = vec![0b01, 0b10];
    if pairs > 1 {
        g.extend(random_symplectic(pairs - 1, rng).into_iter().map(|r| r << 2));
    }
    for row in g.iter_mut() {
        let mut v = *row;
        v = transvection(t0, v);
        v = transvection(t1, v);
        v = transvection(h0, v);
        v = transvection(f1, v);
        *row = v;
    }
    g
}

fn interleaved_to_pauli(n: usize, v: u64, sign: bool) -> PauliRow {
    let mut x = 0;
    let mut z = 0;
    for q in 0..n {
        if bit(v, 2 * q) {
            x |= qubit_mask(n, q);
        }
        if bit(v, 2 * q + 1) {
            z |= qubit_mask(n, q);
        }
    }
    PauliRow { x, z, sign }
}

/// Uniformly random Clifford element on n qubits (modulo global phase).
pub fn sample_clifford<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CliffordElement> {
    if !(1..=CLIFFORD_MAX_QUBITS).contains(&n) {
        return Err(Error::QubitCount { n, min: 1, max: CLIFFORD_MAX_QUBITS });
    }
    let rows = random_symplectic(n, rng);
    let mut images = vec![PauliRow { x: 0, z: 0, sign: false }; 2 * n];
    for q in 0..n {
        images[q] = interleaved_to_pauli(n, rows[2 * q], rng.gen());
        images[n + q] = interleaved_to_pauli(n, rows[2 * q + 1], rng.gen());
    }
    Ok(CliffordElement { n, images })
}

/// All 24 single-qubit Cliffords modulo phase: the six symplectic 2×2
/// matrices times four sign choices.
pub fn enumerate_single_qubit_cliffords() -> Vec<CliffordElement> {
    let nonzero = [(1u64, 0u64), (0, 1), (1, 1)];
    let mut out = Vec::with_capacity(24);
    for &(xx, xz) in &nonzero {
        for &(zx, zz) in &nonzero {
            if (xx, xz) == (zx, zz) {
                continue;
            }
            for signs in 0..4u8 {
                out.push(CliffordElement {
                    n: 1,
                    images: vec![
                        PauliRow { x: xx, z: xz, sign: signs & 1 == 1 },
                        PauliRow { x: zx, z: zz, sign: signs & 2 == 2 },
                    ],
                });
            }
        }
    }
    out
}

fn check_clifford_dense(n: usize) -> Result<()> {
    if n > CLIFFORD_DENSE_MAX {
        return Err(Error::QubitCount { n, min: 1, max: CLIFFORD_DENSE_MAX });
    }
    Ok(())
}

// C|0⟩: project computational kets onto the +1 eigenspace of every Z-image
// until one survives, then fix the phase so the first nonzero amplitude is
// real and positive.
fn zero_image(elem: &CliffordElement) -> StateVector {
    let n = elem.n;
    let d = 1usize << n;
    for start in 0..d {
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[start] = C64::new(1.0, 0.0);
        for q in 0..n {
            let pv = elem.z_image(q).apply(&v);
            for (a, b) in v.iter_mut().zip(pv) {
                *a = (*a + b) * 0.5;
            }
        }
        let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            let lead = v.iter().find(|a| a.norm() > 1e-9).copied().unwrap_or(C64::new(1.0, 0.0));
            let fix = lead.conj() / (lead.norm() * norm);
            v.iter_mut().for_each(|a| *a *= fix);
            return StateVector::from_raw(n, v);
        }
    }
    unreachable!("a stabilizer group always has a nonzero projection onto some ket")
}

/// C|b⟩ = U†|b⟩ for the element's snapshot unitary.
pub fn rotated_basis_state(elem: &CliffordElement, b: BitVector) -> Result<StateVector> {
    let n = elem.n;
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    check_clifford_dense(n)?;
    let mut amps = zero_image(elem).into_amps();
    for q in 0..n {
        if b.get(q) {
            amps = elem.x_image(q).apply(&amps);
        }
    }
    Ok(StateVector::from_raw(n, amps))
}

impl CliffordElement {
    /// Dense matrix with columns C|b⟩; a true unitary up to one global phase.
    pub fn dense_unitary(&self) -> Result<DMatrix<C64>> {
        check_clifford_dense(self.n)?;
        let d = 1usize << self.n;
        let zero = zero_image(self);
        let mut m = DMatrix::zeros(d, d);
        for b in 0..d as u64 {
            let mut amps = zero.amps().to_vec();
            for q in 0..self.n {
                if b & qubit_mask(self.n, q) != 0 {
                    amps = self.x_image(q).apply(&amps);
                }
            }
            m.set_column(b as usize, &nalgebra::DVector::from_vec(amps));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use std::collections::HashMap;

    #[test]
    fn sampled_tableaux_are_symplectic() {
        let mut rng = stream_rng(1, 0);
        for n in 1..=8 {
            for _ in 0..200 {
                assert!(sample_clifford(n, &mut rng).unwrap().is_symplectic());
            }
        }
    }

    #[test]
    fn enumeration_has_24_distinct_valid_elements() {
        let all = enumerate_single_qubit_cliffords();
        assert_eq!(all.len(), 24);
        assert!(all.iter().all(CliffordElement::is_symplectic));
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 24);
        assert!(all.contains(&CliffordElement::identity(1)));
    }

    #[test]
    fn identity_maps_b_to_b() {
        for n in 1..=4 {
            let id = CliffordElement::identity(n);
            for b in 0..1u64 << n {
                let s = rotated_basis_state(&id, BitVector::new(n, b)).unwrap();
                assert!((s.inner(&StateVector::basis(BitVector::new(n, b))).re - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rotated_states_are_stabilizer_states() {
        let mut rng = stream_rng(4, 0);
        for n in 1..=5 {
            for _ in 0..30 {
                let e = sample_clifford(n, &mut rng).unwrap();
                let u = e.dense_unitary().unwrap();
                // unitary
                let gram = u.adjoint() * &u;
                assert!((gram - DMatrix::<C64>::identity(1 << n, 1 << n)).norm() < 1e-10);
                for b in 0..1u64 << n {
                    let s = rotated_basis_state(&e, BitVector::new(n, b)).unwrap();
                    assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
                    let nz: Vec<C64> = s.amps().iter().copied().filter(|a| a.norm() > 1e-9).collect();
                    let m = nz[0].norm();
                    let ref_phase = nz[0] / m;
                    for a in &nz {
                        assert!((a.norm() - m).abs() < 1e-12);
                        let rel = a / (ref_phase * m);
                        let on_axis = rel.re.abs() < 1e-9 || rel.im.abs() < 1e-9;
                        assert!(on_axis, "phase {rel} not in {{±1, ±i}}");
                    }
                    assert!(nz.len().is_power_of_two());
                }
            }
        }
    }

    #[test]
    fn dense_path_limit() {
        let e = CliffordElement::identity(7);
        assert!(rotated_basis_state(&e, BitVector::zeros(7)).is_err());
    }

    #[test]
    fn n2_symplectic_part_covers_group_uniformly() {
        // |Sp(4, 2)| = 720
        let mut rng = stream_rng(9, 0);
        let draws = 72_000;
        let mut counts: HashMap<Vec<u64>, usize> = HashMap::new();
        for _ in 0..draws {
            *counts.entry(random_symplectic(2, &mut rng)).or_default() += 1;
        }
        assert_eq!(counts.len(), 720);
        let mean = draws as f64 / 720.0;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - mean).powi(2) / mean).sum();
        // 719 dof: mean 719, sd ≈ 37.9
        assert!(chi2 < 719.0 + 5.0 * 37.9, "chi2 = {chi2}");
    }

    #[test]
    fn single_qubit_group_closed_under_composition() {
        let all = enumerate_single_qubit_cliffords();
        let mats: Vec<DMatrix<C64>> = all.iter().map(|e| e.dense_unitary().unwrap()).collect();
        let same_up_to_phase = |a: &DMatrix<C64>, b: &DMatrix<C64>| {
            let ov = (a.adjoint() * b).trace();
            (ov.norm() - 2.0).abs() < 1e-9
        };
        for a in &mats {
            for b in &mats {
                let prod = a * b;
                assert!(mats.iter().any(|m| same_up_to_phase(m, &prod)));
            }
        }
        // pairwise distinct modulo phase
        for i in 0..24 {
            for j in 0..i {
                assert!(!same_up_to_phase(&mats[i], &mats[j]));
            }
        }
    }
}
