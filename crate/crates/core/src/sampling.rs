//! Seeded random matrices, states and channels.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{inner, vec_norm, ComplexMatrix};
use crate::scalar::{Real, C};

/// Deterministic random source; identical seeds give identical streams on
/// every platform.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Child sampler for an independent stream (one per restart).
    pub fn fork(&mut self) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(self.rng.random()) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn complex_normal<R: Real>(&mut self) -> C<R> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex::new(R::lit(self.normal() * s), R::lit(self.normal() * s))
    }
}

pub fn random_matrix<R: Real>(s: &mut Sampler, rows: usize, cols: usize) -> ComplexMatrix<R> {
    ComplexMatrix::from_fn(rows, cols, |_, _| s.complex_normal())
}

pub fn random_hermitian<R: Real>(s: &mut Sampler, n: usize) -> ComplexMatrix<R> {
    random_matrix::<R>(s, n, n).hermitian_part()
}

pub fn random_psd<R: Real>(s: &mut Sampler, n: usize) -> ComplexMatrix<R> {
    let g = random_matrix::<R>(s, n, n);
    &g * &g.adjoint()
}

/// Full-rank density matrix from the Ginibre ensemble.
pub fn random_density<R: Real>(s: &mut Sampler, n: usize) -> ComplexMatrix<R> {
    let p = random_psd::<R>(s, n);
    let t = p.trace().re;
    p.scale(R::one() / t)
}

/// Haar-random unit vector.
pub fn random_pure<R: Real>(s: &mut Sampler, n: usize) -> Vec<C<R>> {
    let v: Vec<C<R>> = (0..n).map(|_| s.complex_normal()).collect();
    let nv = vec_norm(&v);
    v.into_iter().map(|z| z / nv).collect()
}

/// Matrix with orthonormal columns (`rows ≥ cols`), by Gram-Schmidt on a
/// Gaussian matrix.
pub fn random_isometry<R: Real>(s: &mut Sampler, rows: usize, cols: usize) -> ComplexMatrix<R> {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let mut columns: Vec<Vec<C<R>>> = Vec::with_capacity(cols);
    while columns.len() < cols {
        let mut v: Vec<C<R>> = (0..rows).map(|_| s.complex_normal()).collect();
        for _ in 0..2 {
            for u in &columns {
                let p = inner(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi = *vi - *ui * p;
                }
            }
        }
        let nv = vec_norm(&v);
        if nv > R::lit(1e-6) {
            columns.push(v.into_iter().map(|z| z / nv).collect());
        }
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| columns[j][i])
}

pub fn random_unitary<R: Real>(s: &mut Sampler, n: usize) -> ComplexMatrix<R> {
    random_isometry(s, n, n)
}

/// Kraus operators of a random channel `C^{d_in} → C^{d_out}` with `n_kraus`
/// operators, cut from a random isometry.
pub fn random_kraus<R: Real>(s: &mut Sampler, d_in: usize, d_out: usize, n_kraus: usize) -> Vec<ComplexMatrix<R>> {
    let w = random_isometry::<R>(s, d_out * n_kraus, d_in);
    (0..n_kraus)
        .map(|k| ComplexMatrix::from_fn(d_out, d_in, |i, j| w[(k * d_out + i, j)]))
        .collect()
}
