//! Seeded random inputs for property checks, the self-test and the CLI.
//!
//! Every generator takes an explicit RNG so that a single seed determines a run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::domains::MatrixTuple;
use crate::linalg::{c, spectral_norm, CMatrix};
use num_complex::Complex64;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn unit_phase<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// A point drawn uniformly from the ball of the given radius in `C^dim`.
pub fn ball_point<R: Rng>(rng: &mut R, dim: usize, radius: f64) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    // Radius ~ U^{1/(2 dim)} gives the uniform distribution in real dimension 2*dim.
    let r = radius * rng.random::<f64>().powf(1.0 / (2 * dim) as f64);
    v.into_iter().map(|z| z * (r / norm)).collect()
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, k: usize) -> CMatrix {
    CMatrix::from_fn(k, k, |_, _| complex_normal(rng))
}

/// A tuple of `n` Gaussian `k × k` matrices.
pub fn gaussian_tuple<R: Rng>(rng: &mut R, n: usize, k: usize) -> MatrixTuple {
    MatrixTuple::new((0..n).map(|_| gaussian_matrix(rng, k)).collect()).expect("square matrices")
}

/// A row contraction with `‖Σ T_i T_i*‖ = scale²`, i.e. the row operator has norm `scale`.
pub fn row_contraction<R: Rng>(rng: &mut R, n: usize, k: usize, scale: f64) -> MatrixTuple {
    let t = gaussian_tuple(rng, n, k);
    let row = t.row_gram();
    let norm = spectral_norm(&row).expect("finite").sqrt();
    t.scaled(c(scale / norm, 0.0))
}
