use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{c, Real, C};

/// Dense complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<R: Real> {
    rows: usize,
    cols: usize,
    data: Vec<C<R>>,
}

impl<R: Real> ComplexMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<R>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries; fails when the entry count
    /// does not equal `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C<R>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C<R>>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self { rows: n, cols: m, data: rows.concat() })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C<R>>> =
            rows.iter().map(|r| r.iter().map(|&x| c(R::lit(x))).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn diag_real(values: &[R]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = c(v);
        }
        m
    }

    /// Rank-one operator `|u><v|`.
    pub fn outer(u: &[C<R>], v: &[C<R>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Projector `|u><u|`.
    pub fn projector(u: &[C<R>]) -> Self {
        Self::outer(u, u)
    }

    /// Single column matrix.
    pub fn column(v: &[C<R>]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C<R>] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<C<R>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<C<R>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C<R>) -> C<R>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: R) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: C<R>) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C<R> {
        self.diagonal().into_iter().fold(C::zero(), |acc, z| acc + z)
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = R::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] = out.data[i * other.cols + j] + a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C<R>]) -> Result<Vec<C<R>>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(C::zero(), |acc, j| acc + self[(i, j)] * v[j]))
            .collect())
    }

    /// `<u|A|v>`.
    pub fn sandwich(&self, u: &[C<R>], v: &[C<R>]) -> Result<C<R>> {
        let av = self.mul_vec(v)?;
        Ok(inner(u, &av))
    }

    /// `A B - B A`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    /// Hilbert-Schmidt inner product `Tr(A† B)`.
    pub fn hs_inner(&self, other: &Self) -> C<R> {
        self.data.iter().zip(&other.data).fold(C::zero(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// Frobenius (Hilbert-Schmidt) norm.
    pub fn frobenius(&self) -> R {
        self.data.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt()
    }

    pub fn max_abs(&self) -> R {
        self.data.iter().map(|z| z.norm()).fold(R::zero(), R::max)
    }

    /// Entrywise comparison within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: R) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| (*a - *b).norm() <= tol)
    }

    /// `‖A − A†‖₂`.
    pub fn hermiticity_residual(&self) -> R {
        if !self.is_square() {
            return R::infinity();
        }
        (self - &self.adjoint()).frobenius()
    }

    /// Hermitian within `tol` relative to `max(1, ‖A‖₂)`.
    pub fn is_hermitian(&self, tol: R) -> bool {
        self.is_square() && self.hermiticity_residual() <= tol * R::one().max(self.frobenius())
    }

    /// True when every off-diagonal entry vanishes within `tol`.
    pub fn is_diagonal(&self, tol: R) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].norm() <= tol))
    }

    pub(crate) fn ensure_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::DimensionMismatch(format!("{what} must be square, got {}x{}", self.rows, self.cols)))
        }
    }
}

/// `<u|v>` with the first argument conjugated.
pub fn inner<R: Real>(u: &[C<R>], v: &[C<R>]) -> C<R> {
    u.iter().zip(v).fold(C::zero(), |acc, (a, b)| acc + a.conj() * b)
}

pub fn vec_norm<R: Real>(v: &[C<R>]) -> R {
    v.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt()
}

/// Standard basis vector `|i>` of dimension `dim`.
pub fn basis<R: Real>(dim: usize, i: usize) -> Vec<C<R>> {
    let mut v = vec![C::zero(); dim];
    v[i] = Complex::one();
    v
}

/// Orthonormal basis of the complement of the unit vector `u`.
///
/// Uses a Householder reflector, so the returned vectors are orthogonal to
/// `u` to machine precision even when `u` is far from the standard basis.
pub fn orthogonal_complement<R: Real>(u: &[C<R>]) -> Vec<Vec<C<R>>> {
    let n = u.len();
    let nu = vec_norm(u);
    let (k, uk) = u
        .iter()
        .enumerate()
        .fold((0, R::zero()), |best, (i, z)| if z.norm() > best.1 { (i, z.norm()) } else { best });
    let phase = if uk > R::zero() { u[k] / uk } else { Complex::one() };
    // w = u + phase·|u|·e_k; H = I − 2ww†/‖w‖² maps u to −phase·|u|·e_k.
    let mut w: Vec<C<R>> = u.to_vec();
    w[k] = w[k] + phase * nu;
    let wn2 = w.iter().map(|z| z.norm_sqr()).sum::<R>();
    let two = R::lit(2.0);
    (0..n)
        .filter(|&j| j != k)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let delta: C<R> = if i == j { C::one() } else { C::zero() };
                    delta - w[i] * w[j].conj() * (two / wn2)
                })
                .collect()
        })
        .collect()
}

impl<R: Real> Index<(usize, usize)> for ComplexMatrix<R> {
    type Output = C<R>;
    fn index(&self, (i, j): (usize, usize)) -> &C<R> {
        &self.data[i * self.cols + j]
    }
}

impl<R: Real> IndexMut<(usize, usize)> for ComplexMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<R> {
        &mut self.data[i * self.cols + j]
    }
}

impl<R: Real> Add for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;
    fn add(self, rhs: Self) -> ComplexMatrix<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<R: Real> Sub for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;
    fn sub(self, rhs: Self) -> ComplexMatrix<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<R: Real> Neg for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;
    fn neg(self) -> ComplexMatrix<R> {
        self.map(|z| -z)
    }
}

/// Panicking product for internal use where shapes are known to agree.
impl<R: Real> Mul for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;
    fn mul(self, rhs: Self) -> ComplexMatrix<R> {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}
