//! Biframe operators, optimal K-bi-g-frame bounds and classification.
//!
//! For a system `(Φ, Ψ)` with operator `K` the mixed form
//! `x -> Σ <Φ_i x, Ψ_i x>` is the quadratic form of `S = Σ Ψ_i* Φ_i`. The
//! system is a K-bi-g-frame when `A ||K* x||^2 <= <S x, x> <= B ||x||^2`, so
//! everything here reduces to spectral questions about `S` and `K K*`.
//!
//! The optimal lower constant is the infimum of `<S x, x> / ||K* x||^2`.
//! When `K K*` is singular the pencil `(S, K K*)` is singular too; the
//! infimum is then taken in closed form over the null-space component of `x`
//! by a Schur complement on the range/null splitting of `K K*`.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::family::{zeros, BiGFrameSystem, GOperatorFamily};
use crate::linalg::{
    self, adjoint_mul, douglas_factor, fro_norm, hermitian_eigen, hermitian_part,
    hermitian_pinv, ComplexVector, DouglasFactor, OperatorMatrix, SpectralTolerance, C64,
};

/// Lower and upper frame bounds, `0 < lower <= upper < ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        for v in [lower, upper] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NonPositiveBound(v));
            }
        }
        if lower > upper {
            return Err(Error::BoundsOrder { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    /// Bounds from the two optimal constants. The upper constant is raised to
    /// the lower one when `||K||` is small enough that `A_opt > λ_max(S)`;
    /// that keeps `A_opt` optimal while satisfying `A <= B`.
    pub fn from_optimal(a_opt: f64, b_opt: f64) -> Result<Self> {
        Self::new(a_opt, b_opt.max(a_opt))
    }
}

/// Verdicts ordered from worst to best; `>=` comparisons follow the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    InvalidNonRealForm,
    InvalidIndefinite,
    BesselOnly,
    BiGFrame,
    KBiGFrame,
    TightKBiGFrame,
    ParsevalKBiGFrame,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::InvalidNonRealForm => "invalid_non_real_form",
            Verdict::InvalidIndefinite => "invalid_indefinite",
            Verdict::BesselOnly => "bessel_only",
            Verdict::BiGFrame => "bi_g_frame",
            Verdict::KBiGFrame => "k_bi_g_frame",
            Verdict::TightKBiGFrame => "tight_k_bi_g_frame",
            Verdict::ParsevalKBiGFrame => "parseval_k_bi_g_frame",
        }
    }

    pub fn is_k_frame(&self) -> bool {
        *self >= Verdict::KBiGFrame
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why no optimal bound pair exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsFailure {
    /// `S` is not Hermitian, so the mixed form is not real.
    NonRealForm,
    /// `S` has a negative eigenvalue beyond the allowance.
    Indefinite,
    /// The Rayleigh infimum against `||K* x||^2` is zero.
    NoLowerBound,
    /// `K = 0`: every lower constant works vacuously.
    DegenerateK,
}

#[derive(Debug, Clone)]
pub struct BoundsDiagnostics {
    pub hermiticity_residual: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Optimal lower constant; `+∞` when `K = 0`, NaN when not reached.
    pub a_opt: f64,
    /// `λ_max(S)`; NaN when `S` failed the Hermiticity check.
    pub b_opt: f64,
    pub k_rank: usize,
    pub degenerate_k: bool,
    /// Unit vector attaining `A_opt ||K* x||^2 = <S x, x>`.
    pub lower_witness: Option<ComplexVector>,
    /// Unit vector attaining `<S x, x> = B_opt ||x||^2`.
    pub upper_witness: Option<ComplexVector>,
    /// Hermitian part of the biframe operator.
    pub operator: OperatorMatrix,
}

#[derive(Debug, Clone)]
pub struct OptimalBounds {
    pub bounds: std::result::Result<FrameBounds, BoundsFailure>,
    pub diagnostics: BoundsDiagnostics,
}

/// Structural matches with the specialisations of a K-bi-g-frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Annotation {
    /// `Φ = Ψ`: the verdict is a statement about `Φ` as a K-g-frame.
    SymmetricPair,
    /// `Ψ_i = Φ_i C` for one invertible `C` on the ambient space.
    ControlledPair,
}

impl Annotation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Annotation::SymmetricPair => "symmetric_pair",
            Annotation::ControlledPair => "controlled_pair",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub optimal_bounds: Option<FrameBounds>,
    pub a_opt: f64,
    pub b_opt: f64,
    pub hermiticity_residual: f64,
    pub min_eigenvalue: f64,
    /// `||S - A_opt K K*||_F`; NaN when `A_opt` is not finite.
    pub tight_residual: f64,
    pub k_rank: usize,
    pub degenerate_k: bool,
    /// `S` is positive definite, i.e. the pair is an ordinary bi-g-frame.
    pub bi_g_frame: bool,
    pub annotations: Vec<Annotation>,
}

/// `S = Σ Ψ_i* Φ_i`, summed in ascending index order.
pub fn biframe_operator(sys: &BiGFrameSystem) -> OperatorMatrix {
    let mut s = zeros(sys.ambient_dim());
    for (phi, psi) in sys.phi.operators().iter().zip(sys.psi.operators()) {
        s += adjoint_mul(psi, phi);
    }
    s
}

/// `Σ <Φ_i x, Ψ_i x>`.
pub fn quadratic_form(sys: &BiGFrameSystem, x: &ComplexVector) -> Result<C64> {
    let phi_x = sys.phi.analyze(x)?;
    let psi_x = sys.psi.analyze(x)?;
    Ok(phi_x.inner(&psi_x))
}

/// Frame operator `Σ Φ_i* Φ_i` of one family and its optimal g-Bessel bound.
pub fn g_frame_operator_and_bessel(fam: &GOperatorFamily) -> (OperatorMatrix, f64) {
    let mut s = zeros(fam.ambient_dim());
    for op in fam.operators() {
        s += adjoint_mul(op, op);
    }
    let bound = hermitian_eigen(&s).max().max(0.0);
    (s, bound)
}

/// Optimal bounds and the spectral diagnostics behind them.
pub fn optimal_bounds(sys: &BiGFrameSystem, tol: &SpectralTolerance) -> OptimalBounds {
    let raw = biframe_operator(sys);
    let hermiticity_residual = linalg::hermiticity_residual(&raw);
    let n = sys.ambient_dim();
    let mut diagnostics = BoundsDiagnostics {
        hermiticity_residual,
        min_eigenvalue: f64::NAN,
        max_eigenvalue: f64::NAN,
        a_opt: f64::NAN,
        b_opt: f64::NAN,
        k_rank: 0,
        degenerate_k: false,
        lower_witness: None,
        upper_witness: None,
        operator: hermitian_part(&raw),
    };

    let k_svd = linalg::svd(&sys.k_op);
    diagnostics.k_rank = k_svd.rank(tol.rank_cutoff(n, n));
    diagnostics.degenerate_k = diagnostics.k_rank == 0;

    if hermiticity_residual > tol.rel_sym_tol {
        return OptimalBounds { bounds: Err(BoundsFailure::NonRealForm), diagnostics };
    }

    let s = diagnostics.operator.clone();
    let eig = hermitian_eigen(&s);
    diagnostics.min_eigenvalue = eig.min();
    diagnostics.max_eigenvalue = eig.max();
    let lambda_max = eig.max();
    if eig.min() < -tol.rel_psd_tol * lambda_max.max(0.0) {
        return OptimalBounds { bounds: Err(BoundsFailure::Indefinite), diagnostics };
    }
    diagnostics.b_opt = lambda_max;
    diagnostics.upper_witness = Some(eig.vector(n - 1));

    if diagnostics.degenerate_k {
        diagnostics.a_opt = f64::INFINITY;
        return OptimalBounds { bounds: Err(BoundsFailure::DegenerateK), diagnostics };
    }

    let (a_opt, witness) = schur_lower_bound(&s, &k_svd, diagnostics.k_rank, tol.rel_psd_tol * lambda_max);
    diagnostics.a_opt = a_opt;
    diagnostics.lower_witness = Some(witness);

    let sigma_max = k_svd.sigma_max();
    let positive = a_opt * sigma_max * sigma_max > tol.rel_psd_tol * lambda_max;
    let bounds = if positive {
        FrameBounds::from_optimal(a_opt, lambda_max).map_err(|_| BoundsFailure::NoLowerBound)
    } else {
        Err(BoundsFailure::NoLowerBound)
    };
    OptimalBounds { bounds, diagnostics }
}

/// Infimum of `<S x, x> / ||K* x||^2` with the unit vector attaining it.
///
/// In the basis of left singular vectors of `K` the first `rank` coordinates
/// span `R(K)`; the remaining block is minimised out exactly.
fn schur_lower_bound(
    s: &OperatorMatrix,
    k_svd: &linalg::Svd,
    rank: usize,
    null_cutoff: f64,
) -> (f64, ComplexVector) {
    let n = s.nrows();
    let u = &k_svd.u;
    let rotated = hermitian_part(&(u.adjoint() * s * u));
    let s_rr = rotated.view((0, 0), (rank, rank)).into_owned();

    let (schur, null_solve) = if rank == n {
        (s_rr, None)
    } else {
        let s_rn = rotated.view((0, rank), (rank, n - rank)).into_owned();
        let s_nn = rotated.view((rank, rank), (n - rank, n - rank)).into_owned();
        let s_nn_pinv = hermitian_pinv(&hermitian_eigen(&s_nn), null_cutoff);
        let schur = &s_rr - &s_rn * &s_nn_pinv * s_rn.adjoint();
        // x_n = -S_nn+ S_nr x_r minimises the form for fixed x_r
        let solve = -(&s_nn_pinv * s_rn.adjoint());
        (schur, Some(solve))
    };

    let inv_sigma: Vec<f64> = k_svd.singular_values[..rank].iter().map(|s| 1.0 / s).collect();
    let scaled = DMatrix::from_fn(rank, rank, |i, j| schur[(i, j)] * C64::from(inv_sigma[i] * inv_sigma[j]));
    let eig = hermitian_eigen(&scaled);
    let y = eig.vector(0);

    let x_r = ComplexVector::from_fn(rank, |i, _| y[i] * C64::from(inv_sigma[i]));
    let mut coords = ComplexVector::zeros(n);
    coords.rows_mut(0, rank).copy_from(&x_r);
    if let Some(solve) = null_solve {
        coords.rows_mut(rank, n - rank).copy_from(&(solve * &x_r));
    }
    let mut x = u * coords;
    let norm = x.norm();
    if norm > 0.0 {
        x /= C64::from(norm);
    }
    (eig.min(), x)
}

pub fn classify(sys: &BiGFrameSystem, tol: &SpectralTolerance) -> ClassificationReport {
    let ob = optimal_bounds(sys, tol);
    let d = &ob.diagnostics;
    let annotations = annotations(sys, tol);

    let bi_g_frame = d.min_eigenvalue.is_finite()
        && d.max_eigenvalue > 0.0
        && d.min_eigenvalue > tol.rel_psd_tol * d.max_eigenvalue;

    let tight_residual = if d.a_opt.is_finite() {
        fro_norm(&(&d.operator - sys.k_gram() * C64::from(d.a_opt)))
    } else {
        f64::NAN
    };

    let fallback = if bi_g_frame { Verdict::BiGFrame } else { Verdict::BesselOnly };
    let verdict = match ob.bounds {
        Err(BoundsFailure::NonRealForm) => Verdict::InvalidNonRealForm,
        Err(BoundsFailure::Indefinite) => Verdict::InvalidIndefinite,
        Err(BoundsFailure::NoLowerBound) | Err(BoundsFailure::DegenerateK) => fallback,
        Ok(_) => {
            let tight = tight_residual <= tol.rel_residual_tol * fro_norm(&d.operator);
            if tight && (d.a_opt - 1.0).abs() <= tol.rel_residual_tol {
                Verdict::ParsevalKBiGFrame
            } else if tight {
                Verdict::TightKBiGFrame
            } else {
                Verdict::KBiGFrame
            }
        }
    };

    ClassificationReport {
        verdict,
        optimal_bounds: ob.bounds.ok(),
        a_opt: d.a_opt,
        b_opt: d.b_opt,
        hermiticity_residual: d.hermiticity_residual,
        min_eigenvalue: d.min_eigenvalue,
        tight_residual,
        k_rank: d.k_rank,
        degenerate_k: d.degenerate_k,
        bi_g_frame,
        annotations,
    }
}

fn annotations(sys: &BiGFrameSystem, tol: &SpectralTolerance) -> Vec<Annotation> {
    if sys.phi == sys.psi {
        return vec![Annotation::SymmetricPair];
    }
    if sys.is_empty() {
        return Vec::new();
    }
    // stack the families and solve Φ C = Ψ in the least-squares sense
    let n = sys.ambient_dim();
    let rows: usize = sys.phi.subspace_dims().iter().sum();
    let mut phi_stack = OperatorMatrix::zeros(rows, n);
    let mut psi_stack = OperatorMatrix::zeros(rows, n);
    let mut offset = 0;
    for (p, q) in sys.phi.operators().iter().zip(sys.psi.operators()) {
        phi_stack.rows_mut(offset, p.nrows()).copy_from(p);
        psi_stack.rows_mut(offset, q.nrows()).copy_from(q);
        offset += p.nrows();
    }
    let c = linalg::pseudo_inverse(&phi_stack, tol) * &psi_stack;
    let scale = fro_norm(&psi_stack);
    let residual = fro_norm(&(&phi_stack * &c - &psi_stack));
    if scale > 0.0
        && residual <= tol.rel_residual_tol * scale
        && linalg::numerical_rank(&c, tol) == n
    {
        vec![Annotation::ControlledPair]
    } else {
        Vec::new()
    }
}

/// `λ_min(S - a K K*)`: nonnegative exactly when `a` is a valid lower bound.
pub fn psd_gap(sys: &BiGFrameSystem, a: f64) -> Result<f64> {
    let tol = SpectralTolerance::default();
    let s = linalg::ensure_hermitian(&biframe_operator(sys), &tol)?;
    Ok(hermitian_eigen(&(s - sys.k_gram() * C64::from(a))).min())
}

/// Factor `K = S^{1/2} U`; fails with `RangeNotIncluded` exactly when the
/// system is not a K-bi-g-frame.
pub fn sqrt_factor(sys: &BiGFrameSystem, tol: &SpectralTolerance) -> Result<DouglasFactor> {
    let root = linalg::psd_sqrt(&biframe_operator(sys), tol)?;
    douglas_factor(&sys.k_op, &root, tol)
}
