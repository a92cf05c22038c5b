//! Seeded random streams and complex Gaussian draws.
//!
//! Every random quantity in the crate comes from a `ChaCha8Rng` built by
//! [`stream`], so a `(seed, index)` pair always reproduces the same draws no
//! matter which thread evaluates it.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexVector, OperatorMatrix, C64};

pub type StreamRng = ChaCha8Rng;

/// Independent generator for trial `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> OperatorMatrix {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    DVector::from_fn(n, |_, _| complex_normal(rng))
}

/// Uniform draw from the unit sphere of `C^n`.
pub fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    loop {
        let v = gaussian_vector(n, rng);
        let norm = v.norm();
        if norm > 1e-300 {
            return v / C64::from(norm);
        }
    }
}

/// Haar-ish random unitary from the QR factor of a Gaussian matrix, with the
/// diagonal phases of R folded back in.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> OperatorMatrix {
    let g = gaussian_matrix(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / C64::from(d.norm()) } else { C64::from(1.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

pub fn uniform<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| stream(7, 3).random()).collect();
        let b: Vec<u64> = (0..4).map(|_| stream(7, 3).random()).collect();
        assert_eq!(a, b);
        let x: u64 = stream(7, 3).random();
        let y: u64 = stream(7, 4).random();
        assert_ne!(x, y);
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = stream(1, 0);
        let q = random_unitary(6, &mut rng);
        let err = (q.adjoint() * &q - DMatrix::<C64>::identity(6, 6)).norm();
        assert!(err < 1e-13, "{err}");
    }
}
