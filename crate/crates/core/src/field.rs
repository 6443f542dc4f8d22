//! Arithmetic in GF(2ⁿ) with polynomial-basis elements, plus the self-dual
//! basis and multiplication matrices used to build the MUB family.

use crate::error::{Error, Result};
use crate::gf2::{parity, qubit_mask, BitMatrix};

/// Largest extension degree with a built-in polynomial.
pub const MAX_DEGREE: usize = 16;

/// Canonical irreducible polynomial per degree, bit i = coefficient of xⁱ.
const POLY_TABLE: [u64; MAX_DEGREE] = [
    0b11,     // x + 1
    0b111,    // x² + x + 1
    0b1011,   // x³ + x + 1
    0x13,     // x⁴ + x + 1
    0x25,     // x⁵ + x² + 1
    0x43,     // x⁶ + x + 1
    0x83,     // x⁷ + x + 1
    0x11b,    // x⁸ + x⁴ + x³ + x + 1
    0x211,    // x⁹ + x⁴ + 1
    0x409,    // x¹⁰ + x³ + 1
    0x805,    // x¹¹ + x² + 1
    0x1009,   // x¹² + x³ + 1
    0x201b,   // x¹³ + x⁴ + x³ + x + 1
    0x4021,   // x¹⁴ + x⁵ + 1
    0x8003,   // x¹⁵ + x + 1
    0x1002b,  // x¹⁶ + x⁵ + x³ + x + 1
];

/// Element of GF(2ⁿ) as a polynomial of degree < n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// addition in characteristic 2 is XOR
#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Add for FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: Self) -> Self {
        FieldElement(self.0 ^ rhs.0)
    }
}

fn degree(p: u64) -> Option<usize> {
    (p != 0).then(|| 63 - p.leading_zeros() as usize)
}

fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = degree(m).expect("division by zero polynomial");
    while let Some(da) = degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

/// Degree-n polynomial over GF(2) with leading coefficient 1, checked irreducible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IrreduciblePoly {
    coeffs: u64,
    degree: usize,
}

impl IrreduciblePoly {
    /// Validates irreducibility by trial division against every polynomial
    /// of degree at most n/2.
    pub fn new(coeffs: u64) -> Result<Self> {
        let degree = degree(coeffs).ok_or(Error::Reducible(coeffs))?;
        if degree == 0 || degree > 32 || !is_irreducible(coeffs) {
            return Err(Error::Reducible(coeffs));
        }
        Ok(Self { coeffs, degree })
    }

    /// The built-in polynomial for degree `n`.
    pub fn standard(n: usize) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::QubitCount { n, min: 1, max: MAX_DEGREE });
        }
        Self::new(POLY_TABLE[n - 1])
    }

    pub fn coeffs(&self) -> u64 {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

fn is_irreducible(p: u64) -> bool {
    let n = degree(p).unwrap_or(0);
    if n == 0 {
        return false;
    }
    (1..=n / 2).all(|d| ((1u64 << d)..(1u64 << (d + 1))).all(|q| poly_rem(p, q) != 0))
}

/// Product a·b mod p.
pub fn gf2_mul(a: FieldElement, b: FieldElement, p: &IrreduciblePoly) -> FieldElement {
    let n = p.degree;
    let mut acc = 0u64;
    let mut x = a.0;
    let mut y = b.0;
    while y != 0 {
        if y & 1 == 1 {
            acc ^= x;
        }
        y >>= 1;
        x <<= 1;
        if x >> n & 1 == 1 {
            x ^= p.coeffs;
        }
    }
    FieldElement(acc)
}

/// Absolute trace a + a² + a⁴ + … + a^(2ⁿ⁻¹), returned as a bit.
pub fn field_trace(a: FieldElement, p: &IrreduciblePoly) -> bool {
    let mut sum = FieldElement::ZERO;
    let mut power = a;
    for _ in 0..p.degree {
        sum = sum + power;
        power = gf2_mul(power, power, p);
    }
    debug_assert!(sum.0 <= 1, "trace left the prime field");
    sum.0 == 1
}

/// GF(2ⁿ) with its trace map cached as a linear functional on coefficient bits.
#[derive(Clone, Debug)]
pub struct GaloisField {
    poly: IrreduciblePoly,
    trace_mask: u64,
}

impl GaloisField {
    pub fn new(poly: IrreduciblePoly) -> Self {
        let trace_mask = (0..poly.degree)
            .filter(|&i| field_trace(FieldElement(1 << i), &poly))
            .fold(0u64, |m, i| m | 1 << i);
        Self { poly, trace_mask }
    }

    pub fn standard(n: usize) -> Result<Self> {
        Ok(Self::new(IrreduciblePoly::standard(n)?))
    }

    pub fn degree(&self) -> usize {
        self.poly.degree
    }

    pub fn poly(&self) -> &IrreduciblePoly {
        &self.poly
    }

    pub fn order(&self) -> u64 {
        1 << self.poly.degree
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        gf2_mul(a, b, &self.poly)
    }

    pub fn trace(&self, a: FieldElement) -> bool {
        parity(a.0 & self.trace_mask) == 1
    }

    /// Trace bilinear form Tr(a·b).
    pub fn trace_form(&self, a: FieldElement, b: FieldElement) -> bool {
        self.trace(self.mul(a, b))
    }

    pub fn self_dual_basis(&self) -> Result<Vec<FieldElement>> {
        self_dual_basis_in(self)
    }
}

/// Deterministic self-dual basis {b₁,…,bₙ} with Tr(bᵢ·bⱼ) = δᵢⱼ.
pub fn self_dual_basis(p: &IrreduciblePoly) -> Result<Vec<FieldElement>> {
    self_dual_basis_in(&GaloisField::new(*p))
}

// Orthonormalisation of the trace form. Tr(x²) = Tr(x), so the form is
// non-alternating on a subspace exactly when that subspace contains an
// element of trace one. At each step pick the smallest unit vector whose
// orthogonal complement (inside the remaining subspace) stays non-alternating.
fn self_dual_basis_in(field: &GaloisField) -> Result<Vec<FieldElement>> {
    let n = field.degree();
    let mut span: Vec<FieldElement> = (0..n).map(|i| FieldElement(1 << i)).collect();
    let mut out = Vec::with_capacity(n);

    while !span.is_empty() {
        let candidates = span_elements(&span);
        let chosen = candidates
            .into_iter()
            .filter(|&v| field.trace(v))
            .find_map(|v| {
                let rest = orthogonal_complement(field, &span, v);
                (rest.is_empty() || rest.iter().any(|&w| field.trace(w))).then_some((v, rest))
            });
        let Some((v, rest)) = chosen else {
            return Err(Error::NoSelfDualBasis(n));
        };
        out.push(v);
        span = rest;
    }
    Ok(out)
}

fn span_elements(basis: &[FieldElement]) -> Vec<FieldElement> {
    let mut elems: Vec<FieldElement> = (1u64..1 << basis.len())
        .map(|mask| {
            basis
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(FieldElement::ZERO, |acc, (_, &b)| acc + b)
        })
        .collect();
    elems.sort();
    elems
}

// Basis of {w ∈ span(basis) : Tr(v·w) = 0}, given Tr(v·v) = 1.
fn orthogonal_complement(
    field: &GaloisField,
    basis: &[FieldElement],
    v: FieldElement,
) -> Vec<FieldElement> {
    // w ↦ w + Tr(v·w)·v projects span(basis) onto the complement; the
    // images of a basis span it, minus one dependency.
    let mut reduced: Vec<u64> = Vec::new();
    for &b in basis {
        let mut w = if field.trace_form(v, b) { (b + v).0 } else { b.0 };
        for &r in &reduced {
            let top = 63 - r.leading_zeros();
            if w >> top & 1 == 1 {
                w ^= r;
            }
        }
        if w != 0 {
            reduced.push(w);
            reduced.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    reduced.into_iter().map(FieldElement).collect()
}

/// Matrix of x ↦ a·x in a self-dual basis; entry (i, j) = Tr(bᵢ·a·bⱼ).
pub fn multiplication_matrix(
    a: FieldElement,
    basis: &[FieldElement],
    p: &IrreduciblePoly,
) -> BitMatrix {
    multiplication_matrix_in(&GaloisField::new(*p), a, basis)
}

pub(crate) fn multiplication_matrix_in(
    field: &GaloisField,
    a: FieldElement,
    basis: &[FieldElement],
) -> BitMatrix {
    let n = basis.len();
    let rows = (0..n)
        .map(|i| {
            let left = field.mul(basis[i], a);
            (0..n)
                .filter(|&j| field.trace_form(left, basis[j]))
                .fold(0u64, |row, j| row | qubit_mask(n, j))
        })
        .collect();
    BitMatrix::from_rows(n, rows)
}
