use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense complex matrix used for states, unitaries, Choi operators and POVM elements.
///
/// Column vectors (kets) are operators with a single column. Entries are addressed
/// as `(row, col)`; [`ComplexOperator::to_row_major`] exports the row-major layout.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexOperator {
    m: DMatrix<C64>,
}

impl ComplexOperator {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { m: DMatrix::zeros(rows, cols) }
    }

    pub fn identity(n: usize) -> Self {
        Self { m: DMatrix::identity(n, n) }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self { m: DMatrix::from_fn(rows, cols, f) }
    }

    pub fn from_matrix(m: DMatrix<C64>) -> Self {
        Self { m }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: &[C64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { m: DMatrix::from_row_slice(rows, cols, data) })
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    /// Column vector from amplitudes.
    pub fn ket(amplitudes: &[C64]) -> Self {
        Self { m: DMatrix::from_column_slice(amplitudes.len(), 1, amplitudes) }
    }

    /// Basis ket `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut k = Self::zeros(dim, 1);
        k.m[(index, 0)] = ONE;
        k
    }

    pub fn rows(&self) -> usize {
        self.m.nrows()
    }

    pub fn cols(&self) -> usize {
        self.m.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        Self { m: self.m.transpose() }
    }

    pub fn conj(&self) -> Self {
        Self { m: self.m.map(|z| z.conj()) }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { m: &self.m * s }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { m: self.m.kronecker(&other.m) }
    }

    /// `|a⟩⟨b|` for column vectors `a` and `b`.
    pub fn outer(a: &Self, b: &Self) -> Self {
        Self { m: &a.m * b.m.adjoint() }
    }

    /// `⟨a|b⟩` for column vectors.
    pub fn inner(a: &Self, b: &Self) -> C64 {
        a.m.column(0).dotc(&b.m.column(0))
    }

    pub fn norm(&self) -> f64 {
        self.m.norm()
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &Self) -> C64 {
        let a_psi = &self.m * &psi.m;
        psi.m.column(0).dotc(&a_psi.column(0))
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.m.shape(), other.m.shape(), "shape mismatch in max_abs_diff");
        self.m.iter().zip(other.m.iter()).fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn commutator(a: &Self, b: &Self) -> Self {
        a * b - b * a
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows();
        (self.adjoint() * self).max_abs_diff(&Self::identity(n)) <= tol
    }

    /// Eigenvalues (ascending) and eigenvectors (columns) of the Hermitian part.
    pub fn eigh(&self) -> (Vec<f64>, Self) {
        let h = (&self.m + self.m.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let n = self.rows();
        let vectors = DMatrix::from_fn(n, n, |i, c| eig.eigenvectors[(i, order[c])]);
        (values, Self { m: vectors })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigh().0.first().copied().unwrap_or(0.0)
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.is_hermitian(tol.max(tolerance::OPERATOR)) && self.min_eigenvalue() >= -tol
    }

    /// `exp(-i t H)` for Hermitian `H`, by spectral decomposition.
    pub fn exp_i_hermitian(h: &Self, t: f64) -> Self {
        let (values, v) = h.eigh();
        let phases: Vec<C64> = values.iter().map(|&l| C64::from_polar(1.0, -t * l)).collect();
        &(&v * &Self::diagonal(&phases)) * &v.adjoint()
    }
}

impl Index<(usize, usize)> for ComplexOperator {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.m[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexOperator {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.m[idx]
    }
}

impl Mul<&ComplexOperator> for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: &ComplexOperator) -> ComplexOperator {
        ComplexOperator { m: &self.m * &rhs.m }
    }
}

impl Mul<ComplexOperator> for ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: ComplexOperator) -> ComplexOperator {
        ComplexOperator { m: self.m * rhs.m }
    }
}

impl Mul<&ComplexOperator> for ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: &ComplexOperator) -> ComplexOperator {
        ComplexOperator { m: self.m * &rhs.m }
    }
}

impl Mul<ComplexOperator> for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: ComplexOperator) -> ComplexOperator {
        ComplexOperator { m: &self.m * rhs.m }
    }
}

impl Mul<C64> for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, s: C64) -> ComplexOperator {
        self.scale(s)
    }
}

impl Mul<C64> for ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, s: C64) -> ComplexOperator {
        self.scale(s)
    }
}

impl Mul<f64> for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, s: f64) -> ComplexOperator {
        self.scale(C64::new(s, 0.0))
    }
}

impl Mul<f64> for ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, s: f64) -> ComplexOperator {
        self.scale(C64::new(s, 0.0))
    }
}

impl Add for ComplexOperator {
    type Output = ComplexOperator;
    fn add(self, rhs: ComplexOperator) -> ComplexOperator {
        ComplexOperator { m: self.m + rhs.m }
    }
}

impl Add<&ComplexOperator> for &ComplexOperator {
    type Output = ComplexOperator;
    fn add(self, rhs: &ComplexOperator) -> ComplexOperator {
        ComplexOperator { m: &self.m + &rhs.m }
    }
}

impl AddAssign for ComplexOperator {
    fn add_assign(&mut self, rhs: ComplexOperator) {
        self.m += rhs.m;
    }
}

impl AddAssign<&ComplexOperator> for ComplexOperator {
    fn add_assign(&mut self, rhs: &ComplexOperator) {
        self.m += &rhs.m;
    }
}

impl Sub for ComplexOperator {
    type Output = ComplexOperator;
    fn sub(self, rhs: ComplexOperator) -> ComplexOperator {
        ComplexOperator { m: self.m - rhs.m }
    }
}

impl Sub<&ComplexOperator> for &ComplexOperator {
    type Output = ComplexOperator;
    fn sub(self, rhs: &ComplexOperator) -> ComplexOperator {
        ComplexOperator { m: &self.m - &rhs.m }
    }
}

impl Neg for ComplexOperator {
    type Output = ComplexOperator;
    fn neg(self) -> ComplexOperator {
        ComplexOperator { m: -self.m }
    }
}

/// Pauli matrices σx, σy, σz.
pub fn pauli() -> [ComplexOperator; 3] {
    let c = |re: f64, im: f64| C64::new(re, im);
    [
        ComplexOperator::from_row_major(2, 2, &[ZERO, ONE, ONE, ZERO]).unwrap(),
        ComplexOperator::from_row_major(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]).unwrap(),
        ComplexOperator::from_row_major(2, 2, &[ONE, ZERO, ZERO, c(-1.0, 0.0)]).unwrap(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn row_major_round_trip() {
        let data: Vec<C64> = (0..6).map(|k| C64::new(k as f64, -(k as f64))).collect();
        let op = ComplexOperator::from_row_major(2, 3, &data).unwrap();
        assert_eq!(op[(1, 0)], data[3]);
        assert_eq!(op.to_row_major(), data);
        assert!(ComplexOperator::from_row_major(2, 2, &data).is_err());
    }

    #[test]
    fn pauli_exponential_is_rotation() {
        let [_, _, sz] = pauli();
        let u = ComplexOperator::exp_i_hermitian(&(&sz * 0.5), 0.7);
        assert!(u.is_unitary(1e-12));
        assert_relative_eq!(u[(0, 0)].arg(), -0.35, epsilon = 1e-12);
        assert_relative_eq!(u[(1, 1)].arg(), 0.35, epsilon = 1e-12);
    }

    #[test]
    fn positivity_predicate() {
        let p = ComplexOperator::diagonal(&[ONE, ZERO]);
        assert!(p.is_positive(1e-10));
        let n = ComplexOperator::diagonal(&[ONE, C64::new(-1e-6, 0.0)]);
        assert!(!n.is_positive(1e-10));
        let [sx, _, _] = pauli();
        assert_relative_eq!(sx.min_eigenvalue(), -1.0, epsilon = 1e-12);
    }
}
