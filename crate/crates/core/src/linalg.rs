//! Dense complex operator algebra.
//!
//! Operators on finite-dimensional spaces are plain `DMatrix<Complex<f64>>`
//! values. This module supplies the spectral primitives the rest of the crate
//! is built on (Hermitian eigendecomposition, SVD, norms) together with the
//! operator-theoretic tools: Moore-Penrose pseudo-inverse, PSD square root,
//! Douglas range-inclusion factorization, the injectivity margin and the
//! Neumann-type invertibility bounds.
//!
//! Floating point has no exact ranges, so every rank or definiteness decision
//! is made against a relative cutoff from [`SpectralTolerance`].

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::sampling;

pub type C64 = nalgebra::Complex<f64>;
pub type OperatorMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Relative cutoffs for rank, Hermiticity and definiteness decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralTolerance {
    /// Singular values at or below `rel_rank_tol * sigma_max` count as zero.
    /// `None` selects `max(rows, cols) * eps * 64` for the matrix at hand.
    pub rel_rank_tol: Option<f64>,
    /// Allowed `||M - M*||_F / ||M||_F`.
    pub rel_sym_tol: f64,
    /// Allowed negative eigenvalue, relative to the largest eigenvalue.
    pub rel_psd_tol: f64,
    /// Relative Frobenius residual accepted for identities that should hold
    /// exactly: range inclusion, tightness, commutation.
    pub rel_residual_tol: f64,
}

impl Default for SpectralTolerance {
    fn default() -> Self {
        Self {
            rel_rank_tol: None,
            rel_sym_tol: 1e-10,
            rel_psd_tol: 1e-10,
            rel_residual_tol: 1e-9,
        }
    }
}

impl SpectralTolerance {
    /// Default rank handling with one value for the symmetric, PSD and
    /// residual cutoffs.
    pub fn uniform(tol: f64) -> Self {
        Self {
            rel_rank_tol: None,
            rel_sym_tol: tol,
            rel_psd_tol: tol,
            rel_residual_tol: tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rel_rank_tol", self.rel_rank_tol.unwrap_or(0.0)),
            ("rel_sym_tol", self.rel_sym_tol),
            ("rel_psd_tol", self.rel_psd_tol),
            ("rel_residual_tol", self.rel_residual_tol),
        ];
        for (name, v) in fields {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::ParamsInvalid(format!("{name} = {v} is outside [0, 1)")));
            }
        }
        Ok(())
    }

    pub fn rank_cutoff(&self, rows: usize, cols: usize) -> f64 {
        self.rel_rank_tol
            .unwrap_or(rows.max(cols) as f64 * f64::EPSILON * 64.0)
    }
}

// ---------------------------------------------------------------------------
// constructors and small helpers

pub fn identity(n: usize) -> OperatorMatrix {
    DMatrix::identity(n, n)
}

pub fn diag(values: &[f64]) -> OperatorMatrix {
    let n = values.len();
    DMatrix::from_fn(n, n, |i, j| if i == j { C64::from(values[i]) } else { C64::from(0.0) })
}

pub fn scaled_identity(n: usize, c: f64) -> OperatorMatrix {
    identity(n) * C64::from(c)
}

/// Real row-major matrix lifted to complex entries.
pub fn from_real_rows(rows: usize, cols: usize, values: &[f64]) -> OperatorMatrix {
    assert_eq!(values.len(), rows * cols);
    DMatrix::from_fn(rows, cols, |i, j| C64::from(values[i * cols + j]))
}

pub fn is_finite(m: &OperatorMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn ensure_finite(m: &OperatorMatrix, what: &str) -> Result<()> {
    if is_finite(m) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub fn ensure_square(m: &OperatorMatrix) -> Result<usize> {
    if m.nrows() == m.ncols() {
        Ok(m.nrows())
    } else {
        Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() })
    }
}

pub fn fro_norm(m: &OperatorMatrix) -> f64 {
    m.norm()
}

/// Spectral norm (largest singular value).
pub fn op_norm(m: &OperatorMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// `a* b` accumulated over the shared index in ascending order.
///
/// The fixed order makes `adjoint_mul(b, a)` the exact conjugate transpose of
/// `adjoint_mul(a, b)`, which the swap identity relies on.
pub fn adjoint_mul(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    assert_eq!(a.nrows(), b.nrows(), "adjoint_mul: row counts differ");
    let (inner, n, m) = (a.nrows(), a.ncols(), b.ncols());
    let mut out = DMatrix::zeros(n, m);
    for j in 0..n {
        for k in 0..m {
            let mut acc = C64::from(0.0);
            for l in 0..inner {
                acc += a[(l, j)].conj() * b[(l, k)];
            }
            out[(j, k)] = acc;
        }
    }
    out
}

pub fn hermitian_part(m: &OperatorMatrix) -> OperatorMatrix {
    (m + m.adjoint()) * C64::from(0.5)
}

/// `||M - M*||_F / ||M||_F`, zero for the zero matrix.
pub fn hermiticity_residual(m: &OperatorMatrix) -> f64 {
    let scale = fro_norm(m);
    let skew = fro_norm(&(m - m.adjoint()));
    if scale == 0.0 {
        skew
    } else {
        skew / scale
    }
}

pub fn ensure_hermitian(m: &OperatorMatrix, tol: &SpectralTolerance) -> Result<OperatorMatrix> {
    ensure_square(m)?;
    let residual = hermiticity_residual(m);
    if residual > tol.rel_sym_tol {
        return Err(Error::NotHermitian { residual });
    }
    Ok(hermitian_part(m))
}

pub fn inner(u: &ComplexVector, v: &ComplexVector) -> C64 {
    // <u, v> linear in the first slot
    v.dotc(u)
}

// ---------------------------------------------------------------------------
// spectral primitives

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: OperatorMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, i: usize) -> ComplexVector {
        self.vectors.column(i).into_owned()
    }
}

/// Eigendecomposition of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &OperatorMatrix) -> HermitianEigen {
    let h = hermitian_part(m);
    let n = h.nrows();
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

/// Full SVD with singular values in descending order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: OperatorMatrix,
    pub singular_values: Vec<f64>,
    pub v_adj: OperatorMatrix,
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values strictly above `rel_cutoff * sigma_max`.
    pub fn rank(&self, rel_cutoff: f64) -> usize {
        let threshold = rel_cutoff * self.sigma_max();
        self.singular_values
            .iter()
            .take_while(|&&s| s > threshold && s > 0.0)
            .count()
    }
}

pub fn svd(m: &OperatorMatrix) -> Svd {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return Svd { u: identity(rows), singular_values: Vec::new(), v_adj: identity(cols) };
    }
    // nalgebra's complex SVD stalls near 1e-10 accuracy; faer's reaches round-off
    let a = faer::Mat::<C64>::from_fn(rows, cols, |i, j| m[(i, j)]);
    let d = a.svd().expect("SVD of a finite matrix converges");
    let (u, s, v) = (d.U(), d.S().column_vector(), d.V());
    Svd {
        u: DMatrix::from_fn(rows, rows, |i, j| u[(i, j)]),
        singular_values: (0..k).map(|i| s[i].re).collect(),
        v_adj: DMatrix::from_fn(cols, cols, |i, j| v[(j, i)].conj()),
    }
}

pub fn numerical_rank(m: &OperatorMatrix, tol: &SpectralTolerance) -> usize {
    svd(m).rank(tol.rank_cutoff(m.nrows(), m.ncols()))
}

/// Moore-Penrose inverse of a Hermitian PSD matrix from its eigenpairs,
/// discarding eigenvalues at or below `cutoff`.
pub(crate) fn hermitian_pinv(eig: &HermitianEigen, cutoff: f64) -> OperatorMatrix {
    let n = eig.vectors.nrows();
    let mut out = DMatrix::zeros(n, n);
    for (i, &lambda) in eig.values.iter().enumerate() {
        if lambda > cutoff {
            let v = eig.vector(i);
            out += &v * v.adjoint() * C64::from(1.0 / lambda);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// operator-theoretic tools

/// Moore-Penrose pseudo-inverse `T+`.
///
/// Singular values at or below the rank cutoff are treated as zero, so the
/// zero matrix maps to the zero matrix of transposed shape.
pub fn pseudo_inverse(t: &OperatorMatrix, tol: &SpectralTolerance) -> OperatorMatrix {
    let (rows, cols) = t.shape();
    let mut out = DMatrix::zeros(cols, rows);
    if t.is_empty() {
        return out;
    }
    let d = svd(t);
    let rank = d.rank(tol.rank_cutoff(rows, cols));
    for i in 0..rank {
        let u = d.u.column(i);
        let v = d.v_adj.row(i).adjoint();
        out += v * u.adjoint() * C64::from(1.0 / d.singular_values[i]);
    }
    out
}

/// Hermitian PSD square root.
///
/// Eigenvalues within `rel_psd_tol * lambda_max` of zero (on either side) are
/// clamped to exactly zero so the root has a clean null space.
pub fn psd_sqrt(s: &OperatorMatrix, tol: &SpectralTolerance) -> Result<OperatorMatrix> {
    let h = ensure_hermitian(s, tol)?;
    let eig = hermitian_eigen(&h);
    let scale = eig.max().max(0.0);
    let allowance = tol.rel_psd_tol * scale;
    if eig.min() < -allowance {
        return Err(Error::NotPsd { min_eigenvalue: eig.min() });
    }
    let n = h.nrows();
    let mut root = DMatrix::zeros(n, n);
    for (i, &lambda) in eig.values.iter().enumerate() {
        if lambda > allowance {
            let v = eig.vector(i);
            root += &v * v.adjoint() * C64::from(lambda.sqrt());
        }
    }
    Ok(hermitian_part(&root))
}

/// Result of a successful Douglas factorization `T1 = T2 U`.
#[derive(Debug, Clone)]
pub struct DouglasFactor {
    /// Minimal-norm factor `T2+ T1`.
    pub factor: OperatorMatrix,
    /// Least `lambda >= 0` with `T1 T1* <= lambda^2 T2 T2*`.
    pub lambda: f64,
    /// `||T2 T2+ T1 - T1||_F / ||T1||_F`.
    pub residual: f64,
}

/// Range inclusion `R(T1) ⊆ R(T2)` with its factor and majorization constant.
///
/// The constant is the square root of the largest generalized eigenvalue of
/// the pencil `(T1 T1*, T2 T2*)` restricted to the range of `T2`, computed as
/// the spectral norm of `diag(1/sigma_r) U_r* T1`.
pub fn douglas_factor(
    t1: &OperatorMatrix,
    t2: &OperatorMatrix,
    tol: &SpectralTolerance,
) -> Result<DouglasFactor> {
    if t1.nrows() != t2.nrows() {
        return Err(Error::DimensionMismatch { expected: t2.nrows(), found: t1.nrows() });
    }
    let t2_pinv = pseudo_inverse(t2, tol);
    let factor = &t2_pinv * t1;
    let t1_norm = fro_norm(t1);
    let abs_residual = fro_norm(&(t2 * &factor - t1));
    let residual = if t1_norm == 0.0 { 0.0 } else { abs_residual / t1_norm };
    if residual > tol.rel_residual_tol {
        return Err(Error::RangeNotIncluded { residual });
    }

    let d = svd(t2);
    let rank = d.rank(tol.rank_cutoff(t2.nrows(), t2.ncols()));
    let lambda = if rank == 0 || t1_norm == 0.0 {
        0.0
    } else {
        let u_r = d.u.columns(0, rank);
        let mut w = u_r.adjoint() * t1;
        for i in 0..rank {
            let mut row = w.row_mut(i);
            row /= C64::from(d.singular_values[i]);
        }
        op_norm(&w)
    };
    Ok(DouglasFactor { factor, lambda, residual })
}

/// Lower constant `c` in `c ||x||^2 <= ||T x||^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InjectivityMargin {
    /// `sigma_min(T)^2`, zero when `T` has more columns than rows.
    pub c: f64,
    pub injective_closed_range: bool,
}

pub fn injectivity_margin(t: &OperatorMatrix) -> InjectivityMargin {
    let (rows, cols) = t.shape();
    if t.is_empty() {
        return InjectivityMargin { c: 0.0, injective_closed_range: false };
    }
    let sv = svd(t).singular_values;
    let sigma_max = sv[0];
    let sigma_min = if rows < cols { 0.0 } else { *sv.last().unwrap() };
    let c = sigma_min * sigma_min;
    let cutoff = SpectralTolerance::default().rank_cutoff(rows, cols);
    InjectivityMargin {
        c,
        injective_closed_range: c > cutoff * sigma_max * sigma_max,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// Containment with a relative slack for boundary cases.
    pub fn contains_within(&self, other: &Interval, rel: f64) -> bool {
        let slack = rel * self.hi.abs().max(1.0);
        other.lo >= self.lo - slack && other.hi <= self.hi + slack
    }
}

#[derive(Debug, Clone)]
pub struct NeumannReport {
    /// Minimum of `alpha ||x|| + beta ||Tx|| - ||Tx - x||` over tested unit vectors.
    pub hypothesis_margin: f64,
    pub hypothesis_holds: bool,
    pub forward_bounds: Interval,
    pub inverse_bounds: Interval,
    /// `[sigma_min(T), sigma_max(T)]`.
    pub singular_range: Interval,
    /// Singular range of `T^-1`, absent when `T` is singular.
    pub inverse_range: Option<Interval>,
    /// Whether the computed ranges sit inside the predicted intervals; only
    /// evaluated when the hypothesis holds.
    pub bounds_verified: Option<bool>,
}

const NEUMANN_SLACK: f64 = 1e-12;

/// Sampled check of `||Tx - x|| <= alpha ||x|| + beta ||Tx||` and the
/// resulting two-sided bounds on `T` and `T^-1`.
///
/// Test vectors are `sample_count` seeded unit vectors plus every eigenvector
/// of `(T - I)*(T - I)`.
pub fn neumann_bounds(
    t: &OperatorMatrix,
    alpha: f64,
    beta: f64,
    sample_count: usize,
    seed: u64,
) -> Result<NeumannReport> {
    let n = ensure_square(t)?;
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(0.0..1.0).contains(&v) {
            return Err(Error::ParamsInvalid(format!("{name} = {v} is outside [0, 1)")));
        }
    }
    let shifted = t - identity(n);
    let gram = adjoint_mul(&shifted, &shifted);
    let eig = hermitian_eigen(&gram);

    let mut rng = sampling::stream(seed, 0);
    let mut vectors: Vec<ComplexVector> = (0..n).map(|i| eig.vector(i)).collect();
    vectors.extend((0..sample_count).map(|_| sampling::unit_vector(n, &mut rng)));

    let margin = vectors
        .iter()
        .map(|x| {
            let tx = t * x;
            alpha * x.norm() + beta * tx.norm() - (&tx - x).norm()
        })
        .fold(f64::INFINITY, f64::min);

    let sv = svd(t).singular_values;
    let singular_range = Interval::new(*sv.last().unwrap(), sv[0]);
    let cutoff = SpectralTolerance::default().rank_cutoff(n, n) * sv[0];
    let inverse_range = (singular_range.lo > cutoff)
        .then(|| Interval::new(1.0 / singular_range.hi, 1.0 / singular_range.lo));

    let forward_bounds = Interval::new((1.0 - alpha) / (1.0 + beta), (1.0 + alpha) / (1.0 - beta));
    let inverse_bounds = Interval::new((1.0 - beta) / (1.0 + alpha), (1.0 + beta) / (1.0 - alpha));

    let scale = 1.0 + singular_range.hi;
    let hypothesis_holds = margin >= -NEUMANN_SLACK * scale;
    let bounds_verified = hypothesis_holds.then(|| {
        forward_bounds.contains_within(&singular_range, NEUMANN_SLACK)
            && inverse_range
                .map(|r| inverse_bounds.contains_within(&r, NEUMANN_SLACK))
                .unwrap_or(false)
    });

    Ok(NeumannReport {
        hypothesis_margin: margin,
        hypothesis_holds,
        forward_bounds,
        inverse_bounds,
        singular_range,
        inverse_range,
        bounds_verified,
    })
}
