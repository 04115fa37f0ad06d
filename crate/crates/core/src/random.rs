//! Seeded random matrices, states and unitaries.
//!
//! All draws go through ChaCha8 seeded from a `u64`, so every sample is
//! reproducible from `(master seed, index)` via [`derive_seed`].

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{frobenius_sq, hermitian_eigen, ComplexMatrix, DimensionFactorization};
use crate::scalar::Real;
use crate::states::DensityMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Child seed for sample `index` of a run started from `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(1)))
}

fn normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Real matrix with independent standard-normal entries.
pub fn gaussian_real<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| Complex::new(normal(rng), T::zero()))
}

/// Complex Ginibre matrix: real and imaginary parts standard normal.
pub fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| Complex::new(normal(rng), normal(rng)))
}

/// Hermitized Ginibre draw `(G + G^dagger) / 2`.
pub fn hermitian<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    ginibre::<T, R>(dim, dim, rng).hermitize()
}

/// Random Hermitian direction with `Tr(D D^dagger) = budget`.
pub fn hermitian_with_norm<T: Real, R: Rng + ?Sized>(dim: usize, budget: T, rng: &mut R) -> ComplexMatrix<T> {
    if budget == T::zero() {
        return ComplexMatrix::zeros(dim, dim);
    }
    let h = hermitian::<T, R>(dim, rng);
    let norm = frobenius_sq(&h);
    h.scale((budget / norm).sqrt())
}

/// Full-rank mixed state `G G^dagger / Tr(G G^dagger)`.
pub fn density<T: Real, R: Rng + ?Sized>(dims: &DimensionFactorization, rng: &mut R) -> Result<DensityMatrix<T>> {
    let n = dims.total();
    let g = ginibre::<T, R>(n, n, rng);
    let gg = g.matmul(&g.adjoint());
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale(T::one() / tr).hermitize(), dims.clone())
}

/// Random unitary `exp(iH)` for a Hermitized Ginibre `H`.
pub fn unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<ComplexMatrix<T>> {
    let h = hermitian::<T, R>(dim, rng);
    let eig = hermitian_eigen(&h)?;
    let phases = ComplexMatrix::from_fn(dim, dim, |i, j| {
        eig.vectors[(i, j)] * Complex::new(eig.values[j].cos(), eig.values[j].sin())
    });
    Ok(phases.matmul(&eig.vectors.adjoint()))
}
