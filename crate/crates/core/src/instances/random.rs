//! Seeded generators for systems and operators.
//!
//! Random pairs are built as `Φ_i = Θ_i R` and `Ψ_i = H_i Θ_i R` with Gaussian
//! `Θ_i`, a shared well-conditioned right factor `R` and Hermitian positive
//! definite weights `H_i` on each subspace. Then
//! `S = R* (Σ Θ_i* H_i Θ_i) R` is Hermitian PSD by construction while `Φ`
//! and `Ψ` stay genuinely different families.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::family::{BiGFrameSystem, GOperatorFamily};
use crate::linalg::{self, adjoint_mul, hermitian_eigen, OperatorMatrix, C64};
use crate::sampling::{self, StreamRng};

pub const MAX_AMBIENT_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Generic,
    Diagonal,
    Parseval,
    RankDeficientK,
    Tight,
}

impl SystemKind {
    pub const ALL: [SystemKind; 5] = [
        SystemKind::Generic,
        SystemKind::Diagonal,
        SystemKind::Parseval,
        SystemKind::RankDeficientK,
        SystemKind::Tight,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SystemKind::Generic => "generic",
            SystemKind::Diagonal => "diagonal",
            SystemKind::Parseval => "parseval",
            SystemKind::RankDeficientK => "rank_deficient_k",
            SystemKind::Tight => "tight",
        }
    }
}

impl std::str::FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SystemKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s || k.as_str().replace('_', "-") == s)
            .ok_or_else(|| Error::SpecInvalid(format!("unknown kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub ambient_dim: usize,
    pub family_size: usize,
    pub kind: SystemKind,
    pub seed: u64,
    /// Rank of `K` for `RankDeficientK`; defaults to `max(1, n / 2)`.
    pub k_rank: Option<usize>,
}

impl GeneratorSpec {
    pub fn new(ambient_dim: usize, family_size: usize, kind: SystemKind, seed: u64) -> Self {
        Self { ambient_dim, family_size, kind, seed, k_rank: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ambient_dim == 0 || self.ambient_dim > MAX_AMBIENT_DIM {
            return Err(Error::SpecInvalid(format!(
                "ambient_dim {} outside 1..={MAX_AMBIENT_DIM}",
                self.ambient_dim
            )));
        }
        if self.family_size == 0 {
            return Err(Error::SpecInvalid("family_size must be at least 1".into()));
        }
        if let Some(r) = self.k_rank {
            if r > self.ambient_dim {
                return Err(Error::SpecInvalid(format!(
                    "k_rank {r} exceeds ambient_dim {}",
                    self.ambient_dim
                )));
            }
        }
        Ok(())
    }

    pub fn requested_k_rank(&self) -> usize {
        self.k_rank.unwrap_or((self.ambient_dim / 2).max(1))
    }
}

pub fn random_system(spec: &GeneratorSpec) -> Result<BiGFrameSystem> {
    spec.validate()?;
    let mut rng = sampling::stream(spec.seed, 0);
    let n = spec.ambient_dim;
    let m = spec.family_size;
    match spec.kind {
        SystemKind::Generic => {
            let dims = covering_dims(n, m, &mut rng);
            let k = conditioned_operator(n, n, 0.5, 2.0, &mut rng);
            let (phi, psi) = weighted_pair(n, &dims, &mut rng);
            BiGFrameSystem::new(phi, psi, k)
        }
        SystemKind::RankDeficientK => {
            let dims = covering_dims(n, m, &mut rng);
            let k = rank_r_operator(n, spec.requested_k_rank(), &mut rng);
            let (phi, psi) = weighted_pair(n, &dims, &mut rng);
            BiGFrameSystem::new(phi, psi, k)
        }
        SystemKind::Diagonal => diagonal_system(n, m, &mut rng),
        SystemKind::Parseval | SystemKind::Tight => {
            let c = if spec.kind == SystemKind::Parseval {
                1.0
            } else {
                sampling::uniform(0.5, 2.0, &mut rng)
            };
            let dims = covering_dims(n, m, &mut rng);
            let k = conditioned_operator(n, n, 0.5, 2.0, &mut rng);
            tight_system_for(&k, c, &dims, &mut rng)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Hermitian PSD Gram matrix.
    Positive,
    /// Singular values in `[0.1, 2]`.
    Invertible,
    /// Exact rank `r`, nonzero singular values in `[0.5, 2]`.
    RankR(usize),
}

pub fn random_operator(dim: usize, kind: OperatorKind, seed: u64) -> Result<OperatorMatrix> {
    if dim == 0 || dim > MAX_AMBIENT_DIM {
        return Err(Error::SpecInvalid(format!("dim {dim} outside 1..={MAX_AMBIENT_DIM}")));
    }
    let mut rng = sampling::stream(seed, 0);
    match kind {
        OperatorKind::Positive => Ok(positive_operator(dim, &mut rng)),
        OperatorKind::Invertible => Ok(conditioned_operator(dim, dim, 0.1, 2.0, &mut rng)),
        OperatorKind::RankR(r) if r <= dim => Ok(rank_r_operator(dim, r, &mut rng)),
        OperatorKind::RankR(r) => Err(Error::SpecInvalid(format!("rank {r} exceeds dim {dim}"))),
    }
}

// ---------------------------------------------------------------------------
// building blocks, shared with the verification suites

/// Subspace dimensions in `1..=n` whose sum is at least `n`.
pub fn covering_dims(n: usize, m: usize, rng: &mut StreamRng) -> Vec<usize> {
    let mut dims: Vec<usize> = (0..m).map(|_| rng.random_range(1..=n)).collect();
    let mut i = 0;
    while dims.iter().sum::<usize>() < n {
        dims[i % m] = (dims[i % m] + 1).min(n);
        i += 1;
    }
    dims
}

/// Subspace dimensions whose sum is strictly below `n` (`n >= 2`), so any
/// family on them has a singular frame operator.
pub fn deficient_dims(n: usize, m: usize, rng: &mut StreamRng) -> Vec<usize> {
    assert!(n >= 2 && m >= 1 && m < n);
    let budget = rng.random_range(m..n);
    let mut dims = vec![1; m];
    for _ in m..budget {
        let i = rng.random_range(0..m);
        dims[i] += 1;
    }
    dims
}

/// `U diag(s) V*` with singular values uniform in `[lo, hi]`.
pub fn conditioned_operator(rows: usize, cols: usize, lo: f64, hi: f64, rng: &mut StreamRng) -> OperatorMatrix {
    let u = sampling::random_unitary(rows, rng);
    let v = sampling::random_unitary(cols, rng);
    let k = rows.min(cols);
    let mut d = OperatorMatrix::zeros(rows, cols);
    for i in 0..k {
        d[(i, i)] = C64::from(sampling::uniform(lo, hi, rng));
    }
    u * d * v.adjoint()
}

pub fn rank_r_operator(n: usize, r: usize, rng: &mut StreamRng) -> OperatorMatrix {
    let u = sampling::random_unitary(n, rng);
    let v = sampling::random_unitary(n, rng);
    let mut d = OperatorMatrix::zeros(n, n);
    for i in 0..r {
        d[(i, i)] = C64::from(sampling::uniform(0.5, 2.0, rng));
    }
    u * d * v.adjoint()
}

pub fn positive_operator(n: usize, rng: &mut StreamRng) -> OperatorMatrix {
    let b = sampling::gaussian_matrix(n, n, rng);
    linalg::hermitian_part(&(&b * b.adjoint() * C64::from(1.0 / n as f64)))
}

/// Hermitian positive definite weight with eigenvalues in `[0.25, 4]`.
pub fn hermitian_weight(d: usize, rng: &mut StreamRng) -> OperatorMatrix {
    let u = sampling::random_unitary(d, rng);
    let w: Vec<f64> = (0..d).map(|_| sampling::uniform(0.25, 4.0, rng)).collect();
    linalg::hermitian_part(&(&u * linalg::diag(&w) * u.adjoint()))
}

/// `Φ_i = Θ_i R`, `Ψ_i = H_i Θ_i R` on the given subspace dimensions.
pub fn weighted_pair(n: usize, dims: &[usize], rng: &mut StreamRng) -> (GOperatorFamily, GOperatorFamily) {
    let r = conditioned_operator(n, n, 0.5, 1.5, rng);
    let mut phi = Vec::with_capacity(dims.len());
    let mut psi = Vec::with_capacity(dims.len());
    for &d in dims {
        let theta = sampling::gaussian_matrix(d, n, rng) * &r;
        let h = hermitian_weight(d, rng);
        psi.push(&h * &theta);
        phi.push(theta);
    }
    (
        GOperatorFamily::new(n, phi).expect("generated shapes"),
        GOperatorFamily::new(n, psi).expect("generated shapes"),
    )
}

/// System with `S = c K K*` exactly up to round-off. Needs `Σ dims >= n`.
pub fn tight_system_for(
    k: &OperatorMatrix,
    c: f64,
    dims: &[usize],
    rng: &mut StreamRng,
) -> Result<BiGFrameSystem> {
    let n = k.nrows();
    let total: usize = dims.iter().sum();
    if total < n {
        return Err(Error::SpecInvalid("subspace dimensions do not cover the ambient space".into()));
    }
    // blocks of an isometry keep the Gram matrix below condition number 16
    let q = sampling::random_unitary(total, rng);
    let mut thetas = Vec::with_capacity(dims.len());
    let mut offset = 0;
    for &d in dims {
        thetas.push(q.view((offset, 0), (d, n)).into_owned());
        offset += d;
    }
    let weights: Vec<OperatorMatrix> = dims.iter().map(|&d| hermitian_weight(d, rng)).collect();
    let mut gram = OperatorMatrix::zeros(n, n);
    for (theta, h) in thetas.iter().zip(&weights) {
        gram += adjoint_mul(theta, &(h * theta));
    }
    let eig = hermitian_eigen(&gram);
    if eig.min() <= 1e-8 * eig.max() {
        return Err(Error::SpecInvalid("subspace dimensions do not cover the ambient space".into()));
    }
    let mut inv_sqrt = OperatorMatrix::zeros(n, n);
    for (i, &lambda) in eig.values.iter().enumerate() {
        let v = eig.vector(i);
        inv_sqrt += &v * v.adjoint() * C64::from(1.0 / lambda.sqrt());
    }
    let right = inv_sqrt * k.adjoint() * C64::from(c.sqrt());
    let phi: Vec<OperatorMatrix> = thetas.iter().map(|t| t * &right).collect();
    let psi: Vec<OperatorMatrix> = phi.iter().zip(&weights).map(|(p, h)| h * p).collect();
    BiGFrameSystem::new(GOperatorFamily::new(n, phi)?, GOperatorFamily::new(n, psi)?, k.clone())
}

fn diagonal_system(n: usize, m: usize, rng: &mut StreamRng) -> Result<BiGFrameSystem> {
    let mut phi = Vec::with_capacity(m);
    let mut psi = Vec::with_capacity(m);
    for _ in 0..m {
        let mut a = DMatrix::zeros(n, n);
        let mut b = DMatrix::zeros(n, n);
        for j in 0..n {
            // shared phase keeps conj(b_j) a_j real and positive
            let phase = C64::from_polar(1.0, sampling::uniform(0.0, std::f64::consts::TAU, rng));
            a[(j, j)] = phase * sampling::uniform(0.5, 2.0, rng);
            b[(j, j)] = phase * sampling::uniform(0.5, 2.0, rng);
        }
        phi.push(a);
        psi.push(b);
    }
    let mut k = DMatrix::zeros(n, n);
    for j in 0..n {
        let phase = C64::from_polar(1.0, sampling::uniform(0.0, std::f64::consts::TAU, rng));
        k[(j, j)] = phase * sampling::uniform(0.5, 2.0, rng);
    }
    BiGFrameSystem::new(GOperatorFamily::new(n, phi)?, GOperatorFamily::new(n, psi)?, k)
}
