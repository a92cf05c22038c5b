//! Constructions that turn one K-bi-g-frame into another, each paired with
//! the bounds the corresponding result predicts for the output.

use crate::error::{Error, Result};
use crate::family::BiGFrameSystem;
use crate::frame::{classify, optimal_bounds, FrameBounds, Verdict};
use crate::linalg::{
    self, douglas_factor, fro_norm, hermitian_eigen, identity, op_norm, OperatorMatrix,
    SpectralTolerance, C64,
};

/// Bounds a result predicts for a transformed system.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedBounds {
    pub lower: f64,
    pub upper: f64,
    /// Tag of the result the constants come from, e.g. `"4.3"`.
    pub source: &'static str,
    /// The constant as originally stated, when it differs from `lower`.
    pub paper_constant: Option<f64>,
}

impl PredictedBounds {
    fn new(lower: f64, upper: f64, source: &'static str) -> Self {
        Self { lower, upper, source, paper_constant: None }
    }

    /// `lower <= a_opt + slack`.
    pub fn lower_sound(&self, a_opt: f64, slack: f64) -> bool {
        self.lower <= a_opt + slack
    }

    /// `b_opt <= upper + slack`.
    pub fn upper_sound(&self, b_opt: f64, slack: f64) -> bool {
        b_opt <= self.upper + slack
    }
}

/// Exchange `Φ` and `Ψ`. The biframe operator becomes its adjoint, so bounds
/// and classification are unchanged.
pub fn swap(sys: &BiGFrameSystem) -> BiGFrameSystem {
    BiGFrameSystem {
        phi: sys.psi.clone(),
        psi: sys.phi.clone(),
        k_op: sys.k_op.clone(),
    }
}

/// Bounds for `(Φ, Ψ)` relative to `Σ α_j K_j` given bounds relative to each
/// `K_j`.
///
/// Cauchy-Schwarz gives `||Σ α_j K_j* x||^2 <= n Σ |α_j|^2 ||K_j* x||^2`, hence
/// the lower constant `1 / (n Σ |α_j|^2 / A_j)`. The constant without the
/// factor `n` is kept in `paper_constant`; it is not a valid bound in
/// general (take `K_1 = K_2`).
pub fn combined_operator_bounds(bounds: &[FrameBounds], coeffs: &[C64]) -> Result<PredictedBounds> {
    if bounds.is_empty() || coeffs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if bounds.len() != coeffs.len() {
        return Err(Error::LengthMismatch { left: bounds.len(), right: coeffs.len() });
    }
    for b in bounds {
        FrameBounds::new(b.lower, b.upper)?;
    }
    let weighted: f64 = bounds.iter().zip(coeffs).map(|(b, a)| a.norm_sqr() / b.lower).sum();
    if weighted == 0.0 {
        return Err(Error::ZeroCoefficients);
    }
    let n = bounds.len() as f64;
    let upper = bounds.iter().map(|b| b.upper).fold(f64::INFINITY, f64::min);
    let source = if bounds.len() == 2 { "3.8" } else { "3.9" };
    let mut out = PredictedBounds::new(1.0 / (n * weighted), upper, source);
    if bounds.len() > 1 {
        out.paper_constant = Some(1.0 / weighted);
    }
    Ok(out)
}

/// Bounds relative to `K_1 K_2 ... K_n` from bounds relative to `K_1`:
/// lower `A_1 / ||K_n* ... K_2*||^2`, upper unchanged.
pub fn product_operator_bounds(a1: FrameBounds, k_tail: &[OperatorMatrix]) -> Result<PredictedBounds> {
    FrameBounds::new(a1.lower, a1.upper)?;
    let source = if k_tail.len() <= 1 { "3.8" } else { "3.9" };
    let Some(first) = k_tail.first() else {
        return Ok(PredictedBounds::new(a1.lower, a1.upper, source));
    };
    let n = linalg::ensure_square(first)?;
    let mut product = identity(n);
    for k in k_tail {
        if k.shape() != (n, n) {
            return Err(Error::DimensionMismatch { expected: n, found: k.nrows() });
        }
        product *= k;
    }
    let norm = op_norm(&product);
    if norm == 0.0 {
        return Err(Error::ZeroTailNorm);
    }
    Ok(PredictedBounds::new(a1.lower / (norm * norm), a1.upper, source))
}

/// A bi-g-frame with bounds `A, B` is a K-bi-g-frame with `A / ||K||^2, B`
/// whenever `||K|| >= 1`.
pub fn lift_ordinary(bi_bounds: FrameBounds, k: &OperatorMatrix) -> Result<PredictedBounds> {
    FrameBounds::new(bi_bounds.lower, bi_bounds.upper)?;
    linalg::ensure_square(k)?;
    let norm = op_norm(k);
    if norm < 1.0 - 1e-12 {
        return Err(Error::NormBelowOne { norm });
    }
    Ok(PredictedBounds::new(bi_bounds.lower / (norm * norm), bi_bounds.upper, "3.10"))
}

fn k_frame_bounds(sys: &BiGFrameSystem, tol: &SpectralTolerance) -> Result<FrameBounds> {
    optimal_bounds(sys, tol).bounds.map_err(|_| Error::NotKBiGFrame)
}

fn ensure_operator_on(sys: &BiGFrameSystem, t: &OperatorMatrix) -> Result<()> {
    let n = linalg::ensure_square(t)?;
    if n != sys.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: sys.ambient_dim(), found: n });
    }
    linalg::ensure_finite(t, "operand")
}

/// Replace `K` by `T` with `R(T) ⊆ R(K)`. With the least `α` such that
/// `T T* <= α^2 K K*` the lower bound becomes `A / α^2`.
pub fn restrict_range(
    sys: &BiGFrameSystem,
    t: &OperatorMatrix,
    tol: &SpectralTolerance,
) -> Result<(BiGFrameSystem, PredictedBounds)> {
    ensure_operator_on(sys, t)?;
    let base = k_frame_bounds(sys, tol)?;
    let factor = douglas_factor(t, &sys.k_op, tol)?;
    let alpha = factor.lambda;
    let lower = if alpha > 0.0 { base.lower / (alpha * alpha) } else { f64::INFINITY };
    Ok((sys.with_k(t.clone())?, PredictedBounds::new(lower, base.upper, "4.1")))
}

/// Families `{Φ_i (I + T^n)}`, `{Ψ_i (I + T^n)}` for a positive operator `T`.
/// The biframe operator becomes `(I + T^n)* S (I + T^n)`.
pub fn positive_perturb(
    sys: &BiGFrameSystem,
    t: &OperatorMatrix,
    n: u32,
    tol: &SpectralTolerance,
) -> Result<BiGFrameSystem> {
    ensure_operator_on(sys, t)?;
    if n == 0 {
        return Err(Error::ParamsInvalid("power n must be at least 1".into()));
    }
    let t = linalg::ensure_hermitian(t, tol).map_err(|_| Error::NotPositive)?;
    let eig = hermitian_eigen(&t);
    if eig.min() < -tol.rel_psd_tol * eig.max().max(0.0) {
        return Err(Error::NotPositive);
    }
    let w = identity(t.nrows()) + t.pow(n - 1) * &t;
    Ok(BiGFrameSystem {
        phi: sys.phi.compose_right(&w)?,
        psi: sys.psi.compose_right(&w)?,
        k_op: sys.k_op.clone(),
    })
}

/// Relative commutator `||M K - K M||_F / (||M||_F ||K||_F)`.
pub fn commutator_residual(m: &OperatorMatrix, k: &OperatorMatrix) -> f64 {
    let scale = fro_norm(m) * fro_norm(k);
    if scale == 0.0 {
        return 0.0;
    }
    fro_norm(&(m * k - k * m)) / scale
}

fn ensure_commute(m: &OperatorMatrix, k: &OperatorMatrix, tol: &SpectralTolerance) -> Result<()> {
    let residual = commutator_residual(m, k);
    if residual > tol.rel_residual_tol {
        return Err(Error::CommutatorTooLarge { residual });
    }
    Ok(())
}

fn composed(sys: &BiGFrameSystem, m: &OperatorMatrix) -> Result<BiGFrameSystem> {
    let m_adj = m.adjoint();
    Ok(BiGFrameSystem {
        phi: sys.phi.compose_right(&m_adj)?,
        psi: sys.psi.compose_right(&m_adj)?,
        k_op: sys.k_op.clone(),
    })
}

/// Families `{Φ_i M*}`, `{Ψ_i M*}` for `M` commuting with `K` and
/// `R(K*) ⊆ R(M)`; predicted bounds `A ||M+||^-2` and `B ||M||^2`.
pub fn right_compose(
    sys: &BiGFrameSystem,
    m: &OperatorMatrix,
    tol: &SpectralTolerance,
) -> Result<(BiGFrameSystem, PredictedBounds)> {
    ensure_operator_on(sys, m)?;
    ensure_commute(m, &sys.k_op, tol)?;
    douglas_factor(&sys.k_op.adjoint(), m, tol)?;
    let base = k_frame_bounds(sys, tol)?;
    let pinv_norm = op_norm(&linalg::pseudo_inverse(m, tol));
    let lower = if pinv_norm > 0.0 { base.lower / (pinv_norm * pinv_norm) } else { 0.0 };
    let m_norm = op_norm(m);
    Ok((composed(sys, m)?, PredictedBounds::new(lower, base.upper * m_norm * m_norm, "4.3")))
}

/// Both sides of the equivalence for a tight system with invertible `K`:
/// the composed system is a K-bi-g-frame exactly when `M` is surjective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurjectivityCheck {
    pub is_k_bi_g_frame: bool,
    pub m_surjective: bool,
}

impl SurjectivityCheck {
    pub fn agrees(&self) -> bool {
        self.is_k_bi_g_frame == self.m_surjective
    }
}

pub fn surjectivity_equivalence(
    sys_tight: &BiGFrameSystem,
    delta: f64,
    m: &OperatorMatrix,
    tol: &SpectralTolerance,
) -> Result<SurjectivityCheck> {
    ensure_operator_on(sys_tight, m)?;
    let report = classify(sys_tight, tol);
    let delta_ok = (report.a_opt - delta).abs() <= tol.rel_residual_tol * delta.abs().max(1.0);
    if report.verdict < Verdict::TightKBiGFrame || !delta_ok {
        return Err(Error::NotTight);
    }
    let n = sys_tight.ambient_dim();
    let k_svd = linalg::svd(&sys_tight.k_op);
    if k_svd.rank(tol.rank_cutoff(n, n)) < n {
        return Err(Error::KStarNotSurjective { sigma_min: k_svd.singular_values[n - 1] });
    }
    ensure_commute(m, &sys_tight.k_op, tol)?;
    let out = classify(&composed(sys_tight, m)?, tol);
    Ok(SurjectivityCheck {
        is_k_bi_g_frame: out.verdict.is_k_frame(),
        m_surjective: linalg::numerical_rank(m, tol) == n,
    })
}
