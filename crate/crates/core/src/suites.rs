//! Seeded property suites, one per result, addressed by its number.
//!
//! Trial `i` of a run with seed `s` draws everything from
//! `sampling::stream(s, i)`, so trials are independent of each other and of
//! the thread schedule. Each trial reports pass/fail and, where the check is
//! an inequality, a normalised margin (`>= 0` means it held).

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::BiGFrameSystem;
use crate::frame::{
    biframe_operator, classify, g_frame_operator_and_bessel, optimal_bounds, psd_gap, sqrt_factor,
    FrameBounds, Verdict,
};
use crate::instances::random::{
    conditioned_operator, covering_dims, deficient_dims, positive_operator, random_system,
    tight_system_for, weighted_pair, GeneratorSpec, SystemKind,
};
use crate::linalg::{self, fro_norm, identity, op_norm, OperatorMatrix, SpectralTolerance, C64};
use crate::sampling::{self, StreamRng};
use crate::stability::{
    certify_stability, partial_sum_operator, scaled_psi, StabilityParams, StabilityVariant,
    SubsetPolicy,
};
use crate::transforms::{
    combined_operator_bounds, lift_ordinary, positive_perturb, product_operator_bounds,
    restrict_range, right_compose, surjectivity_equivalence, swap, PredictedBounds,
};

pub const THEOREM_TAGS: [&str; 14] = [
    "3.7", "3.8", "3.9", "3.10", "3.11", "3.13", "4.1", "4.2", "4.3", "4.4", "5.1", "5.2", "5.3", "5.4",
];

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub index: usize,
    pub passed: bool,
    pub margin: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary {
    pub theorem: String,
    pub seed: u64,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    /// Smallest margin over trials that report one.
    pub worst_margin: Option<f64>,
    pub outcomes: Vec<TrialOutcome>,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &TrialOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

struct Check {
    passed: bool,
    margin: Option<f64>,
    detail: String,
}

impl Check {
    fn flag(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, margin: None, detail: detail.into() }
    }

    /// Pass iff every margin is `>= 0`; reports the smallest.
    fn margins(margins: &[f64], detail: impl Into<String>) -> Self {
        let worst = margins.iter().copied().fold(f64::INFINITY, f64::min);
        Self { passed: worst >= 0.0, margin: Some(worst), detail: detail.into() }
    }

    fn and(mut self, other: Check) -> Self {
        self.passed &= other.passed;
        self.margin = match (self.margin, other.margin) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if !other.passed || self.detail.is_empty() {
            self.detail = if self.detail.is_empty() { other.detail } else { format!("{}; {}", self.detail, other.detail) };
        }
        self
    }
}

type TrialFn = fn(&mut StreamRng, usize) -> Result<Check>;

fn trial_fn(tag: &str) -> Option<TrialFn> {
    let f: TrialFn = match tag {
        "3.7" => |rng, _| trial_swap(rng),
        "3.8" => |rng, _| trial_combination(rng, 2),
        "3.9" => |rng, _| {
            let n = rng.random_range(2..=4);
            trial_combination(rng, n)
        },
        "3.10" => |rng, _| trial_lift(rng),
        "3.11" => |rng, _| trial_psd_gap(rng),
        "3.13" => trial_sqrt_factor,
        "4.1" => |rng, _| trial_restrict(rng),
        "4.2" => |rng, _| trial_positive_perturb(rng),
        "4.3" => |rng, _| trial_right_compose(rng),
        "4.4" => |rng, _| trial_surjectivity(rng),
        "5.1" => |rng, _| trial_stability(rng, StabilityVariant::Thm51),
        "5.2" => |rng, _| trial_stability(rng, StabilityVariant::Cor52),
        "5.3" => |rng, _| trial_stability(rng, StabilityVariant::Thm53),
        "5.4" => |rng, _| trial_stability(rng, StabilityVariant::Thm54),
        _ => return None,
    };
    Some(f)
}

pub fn is_known_tag(tag: &str) -> bool {
    THEOREM_TAGS.contains(&tag)
}

pub fn run_suite(tag: &str, instances: usize, seed: u64) -> Result<SuiteSummary> {
    let f = trial_fn(tag).ok_or_else(|| Error::ParamsInvalid(format!("unknown theorem tag `{tag}`")))?;
    let outcomes: Vec<TrialOutcome> = (0..instances)
        .into_par_iter()
        .map(|index| {
            let mut rng = sampling::stream(seed, index as u64);
            match f(&mut rng, index) {
                Ok(c) => TrialOutcome { index, passed: c.passed, margin: c.margin, detail: c.detail },
                Err(e) => TrialOutcome { index, passed: false, margin: None, detail: format!("error: {e}") },
            }
        })
        .collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let worst_margin = outcomes.iter().filter_map(|o| o.margin).reduce(f64::min);
    Ok(SuiteSummary {
        theorem: tag.to_string(),
        seed,
        instances,
        passed,
        failed: instances - passed,
        worst_margin,
        outcomes,
    })
}

// ---------------------------------------------------------------------------
// instance helpers

fn tol() -> SpectralTolerance {
    SpectralTolerance::default()
}

fn any_kind(rng: &mut StreamRng) -> SystemKind {
    SystemKind::ALL[rng.random_range(0..SystemKind::ALL.len())]
}

/// A K-bi-g-frame of a random kind.
fn frame_system(rng: &mut StreamRng, max_n: usize, max_m: usize) -> Result<BiGFrameSystem> {
    let n = rng.random_range(2..=max_n);
    let m = rng.random_range(1..=max_m);
    let mut spec = GeneratorSpec::new(n, m, any_kind(rng), rng.random());
    spec.k_rank = Some(rng.random_range(1..=n));
    random_system(&spec)
}

/// Generic pair with positive definite `S` for a given `K`.
fn pd_system(rng: &mut StreamRng, k: OperatorMatrix, max_m: usize) -> Result<BiGFrameSystem> {
    let n = k.nrows();
    let m = rng.random_range(1..=max_m);
    let dims = covering_dims(n, m, rng);
    let (phi, psi) = weighted_pair(n, &dims, rng);
    BiGFrameSystem::new(phi, psi, k)
}

fn k_bounds(sys: &BiGFrameSystem) -> Result<FrameBounds> {
    optimal_bounds(sys, &tol()).bounds.map_err(|_| Error::NotKBiGFrame)
}

fn random_complex(rng: &mut StreamRng, lo: f64, hi: f64) -> C64 {
    C64::from_polar(sampling::uniform(lo, hi, rng), sampling::uniform(0.0, std::f64::consts::TAU, rng))
}

/// Soundness of predicted bounds against the optimal ones of `out`, as
/// margins normalised by the bound scale.
fn sandwich(pred: &PredictedBounds, out: &BiGFrameSystem, check_upper: bool) -> Check {
    let ob = optimal_bounds(out, &tol());
    let d = &ob.diagnostics;
    let scale = 1.0 + d.b_opt.abs();
    let slack = 1e-8 * scale;
    let mut margins = Vec::new();
    if d.a_opt.is_finite() {
        margins.push((d.a_opt + slack - pred.lower) / scale);
    } else if d.a_opt.is_nan() {
        margins.push(-1.0);
    }
    if check_upper {
        margins.push((pred.upper + slack - d.b_opt) / scale);
    }
    Check::margins(
        &margins,
        format!("predicted ({}, {}) vs optimal ({}, {})", pred.lower, pred.upper, d.a_opt, d.b_opt),
    )
}

/// `Q diag(values) Q^-1`.
fn similar_diag(q: &OperatorMatrix, q_inv: &OperatorMatrix, values: &[C64]) -> OperatorMatrix {
    let n = values.len();
    let d = OperatorMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { C64::from(0.0) });
    q * d * q_inv
}

/// A random eigenbasis: unitary half of the time, merely well conditioned
/// otherwise.
fn eigenbasis(rng: &mut StreamRng, n: usize, unitary: bool) -> (OperatorMatrix, OperatorMatrix) {
    if unitary {
        let q = sampling::random_unitary(n, rng);
        let q_inv = q.adjoint();
        (q, q_inv)
    } else {
        let q = conditioned_operator(n, n, 0.5, 2.0, rng);
        let q_inv = q.clone().try_inverse().expect("well-conditioned basis");
        (q, q_inv)
    }
}

// ---------------------------------------------------------------------------
// trials

fn trial_swap(rng: &mut StreamRng) -> Result<Check> {
    let sys = frame_system(rng, 16, 8)?;
    let sw = swap(&sys);
    let exact = biframe_operator(&sw) == biframe_operator(&sys).adjoint();
    let a = classify(&sys, &tol());
    let b = classify(&sw, &tol());
    let rel = |x: f64, y: f64| if x == y { 0.0 } else { (x - y).abs() / x.abs().max(y.abs()) };
    let drift = rel(a.a_opt, b.a_opt).max(rel(a.b_opt, b.b_opt));
    Ok(Check::flag(exact, "adjoint identity")
        .and(Check::flag(a.verdict == b.verdict, format!("verdicts {} / {}", a.verdict, b.verdict)))
        .and(Check::margins(&[(1e-10 - drift) / 1e-10], format!("relative drift {drift:e}"))))
}

fn trial_combination(rng: &mut StreamRng, count: usize) -> Result<Check> {
    let n = rng.random_range(2..=8);
    let ks: Vec<OperatorMatrix> = (0..count).map(|_| conditioned_operator(n, n, 0.3, 2.0, rng)).collect();
    let sys = pd_system(rng, ks[0].clone(), 6)?;
    let bounds = ks.iter().map(|k| k_bounds(&sys.with_k(k.clone())?)).collect::<Result<Vec<_>>>()?;

    let coeffs: Vec<C64> = (0..count).map(|_| random_complex(rng, 0.2, 2.0)).collect();
    let combined = ks.iter().zip(&coeffs).fold(OperatorMatrix::zeros(n, n), |acc, (k, a)| acc + k * *a);
    let pred = combined_operator_bounds(&bounds, &coeffs)?;
    let sum = sandwich(&pred, &sys.with_k(combined)?, true);

    let product = ks.iter().skip(1).fold(ks[0].clone(), |acc, k| acc * k);
    let pred = product_operator_bounds(bounds[0], &ks[1..])?;
    let prod = sandwich(&pred, &sys.with_k(product)?, true);
    Ok(sum.and(prod))
}

fn trial_lift(rng: &mut StreamRng) -> Result<Check> {
    let n = rng.random_range(2..=12);
    let sys = pd_system(rng, identity(n), 8)?;
    let bi = k_bounds(&sys)?;
    let mut k = conditioned_operator(n, n, 0.1, 1.0, rng);
    let target = sampling::uniform(1.0, 3.0, rng);
    k *= C64::from(target / op_norm(&k));
    let pred = lift_ordinary(bi, &k)?;
    Ok(sandwich(&pred, &sys.with_k(k)?, true))
}

fn trial_psd_gap(rng: &mut StreamRng) -> Result<Check> {
    let sys = frame_system(rng, 16, 8)?;
    let r = classify(&sys, &tol());
    if !r.verdict.is_k_frame() || r.degenerate_k {
        return Ok(Check::flag(false, format!("generated system is {}", r.verdict)));
    }
    let s_norm = op_norm(&biframe_operator(&sys));
    let at = psd_gap(&sys, r.a_opt)?;
    let above = psd_gap(&sys, 1.01 * r.a_opt)?;
    Ok(Check::margins(&[(at + 1e-8 * s_norm) / s_norm], format!("gap at A_opt {at:e}"))
        .and(Check::flag(above < 0.0, format!("gap at 1.01 A_opt {above:e}"))))
}

fn trial_sqrt_factor(rng: &mut StreamRng, index: usize) -> Result<Check> {
    // every fourth trial: singular S against an invertible K
    let engineered = index.is_multiple_of(4);
    let sys = if engineered {
        let n = rng.random_range(3..=12);
        let m = rng.random_range(1..n);
        let dims = deficient_dims(n, m, rng);
        let (phi, psi) = weighted_pair(n, &dims, rng);
        BiGFrameSystem::new(phi, psi, conditioned_operator(n, n, 0.5, 2.0, rng))?
    } else {
        frame_system(rng, 12, 8)?
    };
    let is_frame = classify(&sys, &tol()).verdict.is_k_frame();
    match sqrt_factor(&sys, &tol()) {
        Ok(f) => {
            let k_norm = fro_norm(&sys.k_op);
            Ok(Check::flag(is_frame, format!("factor found (engineered={engineered}, frame={is_frame})")).and(Check::margins(
                &[(1e-9 * k_norm - f.residual * k_norm) / k_norm.max(f64::MIN_POSITIVE)],
                format!("relative residual {:e}", f.residual),
            )))
        }
        Err(Error::RangeNotIncluded { .. }) => Ok(Check::flag(
            !is_frame,
            format!("range inclusion rejected (engineered={engineered}, frame={is_frame})"),
        )),
        Err(e) => Err(e),
    }
}

fn trial_restrict(rng: &mut StreamRng) -> Result<Check> {
    let sys = frame_system(rng, 12, 6)?;
    let n = sys.ambient_dim();
    let w = sampling::gaussian_matrix(n, n, rng);
    let t = &sys.k_op * w;
    let (out, pred) = restrict_range(&sys, &t, &tol())?;
    Ok(sandwich(&pred, &out, true))
}

fn trial_positive_perturb(rng: &mut StreamRng) -> Result<Check> {
    let sys = frame_system(rng, 12, 6)?;
    let n = sys.ambient_dim();
    let t = positive_operator(n, rng);
    let power = rng.random_range(1..=3u32);
    let out = positive_perturb(&sys, &t, power, &tol())?;
    let w = identity(n) + t.pow(power - 1) * &t;
    let s_out = biframe_operator(&out);
    let expected = w.adjoint() * biframe_operator(&sys) * &w;
    let residual = fro_norm(&(&s_out - expected)) / fro_norm(&s_out);
    let verdict = classify(&out, &tol()).verdict;
    Ok(Check::margins(&[(1e-12 - residual) / 1e-12], format!("n={power} identity residual {residual:e}"))
        .and(Check::flag(verdict.is_k_frame(), format!("output verdict {verdict}"))))
}

fn trial_right_compose(rng: &mut StreamRng) -> Result<Check> {
    let n = rng.random_range(2..=8);
    let unitary = rng.random_bool(0.5);
    let (q, q_inv) = eigenbasis(rng, n, unitary);
    let mut kappa: Vec<C64> = (0..n).map(|_| random_complex(rng, 0.5, 2.0)).collect();
    let mut mu: Vec<C64> = (0..n).map(|_| random_complex(rng, 0.3, 2.0)).collect();
    if unitary {
        // zeros of M only where K vanishes, so that R(K*) ⊆ R(M)
        for i in 0..n {
            if rng.random_bool(0.3) {
                kappa[i] = C64::from(0.0);
                if rng.random_bool(0.5) {
                    mu[i] = C64::from(0.0);
                }
            }
        }
        if kappa.iter().all(|k| k.norm() == 0.0) {
            kappa[0] = C64::from(1.0);
            mu[0] = C64::from(1.0);
        }
    }
    let k = similar_diag(&q, &q_inv, &kappa);
    let m = similar_diag(&q, &q_inv, &mu);
    let sys = pd_system(rng, k, 6)?;
    let (out, pred) = right_compose(&sys, &m, &tol())?;
    Ok(sandwich(&pred, &out, true))
}

fn trial_surjectivity(rng: &mut StreamRng) -> Result<Check> {
    let n = rng.random_range(2..=8);
    let unitary = rng.random_bool(0.5);
    let (q, q_inv) = eigenbasis(rng, n, unitary);
    let kappa: Vec<C64> = (0..n).map(|_| random_complex(rng, 0.5, 2.0)).collect();
    let zero_rate = sampling::uniform(0.0, 0.6, rng);
    let mu: Vec<C64> = (0..n)
        .map(|_| if rng.random_bool(zero_rate) { C64::from(0.0) } else { random_complex(rng, 0.3, 2.0) })
        .collect();
    let k = similar_diag(&q, &q_inv, &kappa);
    let m = similar_diag(&q, &q_inv, &mu);
    let delta = sampling::uniform(0.5, 2.0, rng);
    let count = rng.random_range(1..=6);
    let dims = covering_dims(n, count, rng);
    let sys = tight_system_for(&k, delta, &dims, rng)?;
    let check = surjectivity_equivalence(&sys, delta, &m, &tol())?;
    Ok(Check::flag(
        check.agrees(),
        format!("K-bi-g-frame={} surjective={}", check.is_k_bi_g_frame, check.m_surjective),
    ))
}

/// Largest `||S_J - M_J||` over all nonempty subsets.
fn max_partial_difference(base: &BiGFrameSystem, cand: &BiGFrameSystem) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for j in SubsetPolicy::default().subsets(base.len()) {
        let d = partial_sum_operator(&base.phi, &base.psi, &j)? - partial_sum_operator(&cand.phi, &cand.psi, &j)?;
        worst = worst.max(op_norm(&d));
    }
    Ok(worst)
}

/// Parameters for which the hypothesis holds for every `x` given
/// `g = max_J ||S_J - M_J||` and `s_min = σ_min(K)`.
fn covering_params(variant: StabilityVariant, rng: &mut StreamRng, g: f64, s_min: f64) -> StabilityParams {
    let alpha = sampling::uniform(0.0, 0.2, rng);
    let beta = sampling::uniform(0.0, 0.2, rng);
    match variant {
        StabilityVariant::Thm51 => StabilityParams::thm_5_1(alpha, beta, g),
        StabilityVariant::Cor52 => StabilityParams::cor_5_2(g / s_min),
        StabilityVariant::Thm53 => StabilityParams::thm_5_3(alpha, beta, g / s_min),
        StabilityVariant::Thm54 => {
            let t = sampling::uniform(0.0, 1.0, rng);
            StabilityParams::thm_5_4(alpha, beta, (1.0 - t) * g / s_min, t * g)
        }
    }
}

fn trial_stability(rng: &mut StreamRng, variant: StabilityVariant) -> Result<Check> {
    let n = rng.random_range(2..=6);
    let k = conditioned_operator(n, n, 0.5, 2.0, rng);
    let s_min = linalg::svd(&k).singular_values[n - 1];
    let base = pd_system(rng, k, 8)?;
    let base_bounds = k_bounds(&base)?;

    let seed = rng.random();
    let scaled = variant == StabilityVariant::Thm51 && rng.random_bool(0.5);
    let (cand, params) = if scaled {
        let eps = sampling::uniform(0.01, 0.3, rng);
        let cand = BiGFrameSystem::new(base.phi.clone(), scaled_psi(&base, 1.0 + eps), base.k_op.clone())?;
        (cand, StabilityParams::thm_5_1(eps, 0.0, 0.0))
    } else {
        let e = sampling::gaussian_matrix(n, n, rng);
        let e = &e * C64::from(1.0 / op_norm(&e));
        let mut size = sampling::uniform(0.005, 0.05, rng);
        let mut found = None;
        for _ in 0..40 {
            let p = identity(n) + &e * C64::from(size);
            let cand = BiGFrameSystem::new(base.phi.compose_right(&p)?, base.psi.compose_right(&p)?, base.k_op.clone())?;
            let g = max_partial_difference(&base, &cand)?;
            let params = covering_params(variant, rng, g, s_min);
            if g > 0.0 && params.validate(&base_bounds).is_ok() {
                found = Some((cand, params));
                break;
            }
            size /= 2.0;
        }
        found.ok_or_else(|| Error::ParamsInvalid("no admissible perturbation size".into()))?
    };

    let cert = certify_stability(&base, &cand.phi, &cand.psi, &params, &SubsetPolicy::default(), &tol(), seed)?;
    let (_, bphi) = g_frame_operator_and_bessel(&base.phi);
    let (_, bpsi) = g_frame_operator_and_bessel(&base.psi);
    let scale = 1.0 + biframe_operator(&base).norm() + biframe_operator(&cand).norm();
    let upper_margin = (cert.predicted.upper + 1e-8 * scale - cert.candidate.b_opt) / scale;
    Ok(Check::flag(cert.verdict, format!("{} certificate (B_Φ={bphi:.3}, B_Ψ={bpsi:.3})", params.variant))
        .and(Check::margins(
            &[cert.hypothesis_margin / scale + 1e-12, upper_margin],
            format!("hypothesis margin {:e}, candidate {}", cert.hypothesis_margin, cert.candidate.verdict),
        ))
        .and(Check::flag(cert.candidate.verdict >= Verdict::KBiGFrame, "candidate lost the frame property")))
}
