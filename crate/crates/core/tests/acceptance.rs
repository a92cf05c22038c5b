//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use bigframe::instances::fixtures::{example_3_4, example_3_6};
use bigframe::instances::format::{deserialize, serialize};
use bigframe::instances::random::{positive_operator, random_system, GeneratorSpec, SystemKind};
use bigframe::linalg::{self, diag, douglas_factor, fro_norm, identity, neumann_bounds, pseudo_inverse};
use bigframe::sampling::{self, stream};
use bigframe::stability::{certify_stability, predicted_stability_bounds, scaled_psi, StabilityParams, SubsetPolicy};
use bigframe::suites::{run_suite, SuiteSummary, THEOREM_TAGS};
use bigframe::transforms::{combined_operator_bounds, positive_perturb};
use bigframe::{
    biframe_operator, classify, g_frame_operator_and_bessel, optimal_bounds, OperatorMatrix, SpectralTolerance,
    Verdict, C64,
};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn tol() -> SpectralTolerance {
    SpectralTolerance::default()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn suite_ok(tag: &str, instances: usize, seed: u64) -> Result<SuiteSummary, String> {
    let s = run_suite(tag, instances, seed).map_err(|e| e.to_string())?;
    if let Some(f) = s.failures().next() {
        return Err(format!("{tag}: {}/{} passed, first failure #{}: {}", s.passed, s.instances, f.index, f.detail));
    }
    Ok(s)
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let sys = example_3_4();
    let r = classify(&sys, &tol());
    ensure(r.verdict == Verdict::KBiGFrame, || format!("verdict {}", r.verdict))?;
    ensure((r.a_opt - 1.0).abs() <= 1e-9 && (r.b_opt - 2.0).abs() <= 1e-9, || {
        format!("bounds ({}, {})", r.a_opt, r.b_opt)
    })?;
    ensure(biframe_operator(&sys) == diag(&[2.0, 1.0, 1.0, 0.0]), || "S is not diag(2,1,1,0)".into())?;
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("A_opt={} B_opt={}", r.a_opt, r.b_opt))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let sys = example_3_6();
    let r = classify(&sys, &tol());
    ensure(r.verdict == Verdict::ParsevalKBiGFrame, || format!("verdict {}", r.verdict))?;
    let residual = fro_norm(&(biframe_operator(&sys) - sys.k_gram()));
    ensure(residual <= 1e-12, || format!("||S - KK*||_F = {residual:e}"))?;
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("||S - KK*||_F = {residual:e}"))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let s = suite_ok("3.7", 200, 0)?;
    within(t.elapsed(), Duration::from_secs(30))?;
    Ok(format!("{}/200 in {:?}", s.passed, t.elapsed()))
}

fn criterion_4() -> Outcome {
    let s = suite_ok("3.11", 200, 0)?;
    Ok(format!("{}/200, worst margin {:?}", s.passed, s.worst_margin))
}

fn criterion_5() -> Outcome {
    let s = suite_ok("3.13", 200, 0)?;
    let engineered = s.outcomes.iter().filter(|o| o.detail.contains("engineered=true")).count();
    ensure(engineered == 50, || format!("{engineered} engineered failures, expected 50"))?;
    Ok(format!("{}/200 with {engineered} engineered failures", s.passed))
}

fn criterion_6() -> Outcome {
    let a = suite_ok("3.8", 200, 0)?;
    let b = suite_ok("3.9", 200, 0)?;
    let sys = example_3_4();
    let ab = optimal_bounds(&sys, &tol()).bounds.map_err(|_| "Example 3.4 has no bounds".to_string())?;
    let one = C64::from(1.0);
    let pred = combined_operator_bounds(&[ab, ab], &[one, one]).map_err(|e| e.to_string())?;
    let doubled = sys.with_k(&sys.k_op * C64::from(2.0)).map_err(|e| e.to_string())?;
    let actual = classify(&doubled, &tol()).a_opt;
    let stated = pred.paper_constant.unwrap_or(f64::NAN);
    ensure((actual - 0.25).abs() <= 1e-9 && actual < 0.5, || format!("K1 = K2 instance gives A_opt = {actual}"))?;
    ensure((stated - 0.5).abs() <= 1e-12, || format!("stated constant {stated}"))?;
    ensure(pred.lower <= actual + 1e-8, || format!("corrected lower {} above {actual}", pred.lower))?;
    Ok(format!("3.8 {}/200, 3.9 {}/200, counter-instance A_opt={actual} vs stated {stated}", a.passed, b.passed))
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    for power in 1..=3u32 {
        for i in 0..100u64 {
            let mut rng = stream(7000 + power as u64, i);
            let n = rng.random_range(2..=10);
            let kind = SystemKind::ALL[rng.random_range(0..SystemKind::ALL.len())];
            let sys = random_system(&GeneratorSpec::new(n, rng.random_range(1..=6), kind, rng.random()))
                .map_err(|e| e.to_string())?;
            let t = positive_operator(n, &mut rng);
            let out = positive_perturb(&sys, &t, power, &tol()).map_err(|e| e.to_string())?;
            let mut tn = identity(n);
            for _ in 0..power {
                tn *= &t;
            }
            let w = identity(n) + tn;
            let s_out = biframe_operator(&out);
            let expected = w.adjoint() * biframe_operator(&sys) * &w;
            let rel = fro_norm(&(&s_out - expected)) / fro_norm(&s_out);
            worst = worst.max(rel);
            ensure(rel <= 1e-12, || format!("n={power} trial {i}: residual {rel:e}"))?;
            let v = classify(&out, &tol()).verdict;
            ensure(v >= Verdict::KBiGFrame, || format!("n={power} trial {i}: verdict {v}"))?;
        }
    }
    Ok(format!("300 trials, worst identity residual {worst:e}"))
}

fn criterion_8() -> Outcome {
    let a = suite_ok("4.3", 200, 0)?;
    let b = suite_ok("4.4", 200, 0)?;
    Ok(format!("4.3 {}/200, 4.4 {}/200", a.passed, b.passed))
}

fn criterion_9() -> Outcome {
    let mut worst_rel: f64 = 0.0;
    for (name, base) in [("3.4", example_3_4()), ("3.6", example_3_6())] {
        let ab = optimal_bounds(&base, &tol()).bounds.map_err(|_| format!("Example {name} has no bounds"))?;
        for eps in [0.01, 0.05, 0.1, 0.2, 0.3] {
            let cand = scaled_psi(&base, 1.0 + eps);
            let params = StabilityParams::thm_5_1(eps, 0.0, 0.0);
            let cert = certify_stability(&base, &base.phi, &cand, &params, &SubsetPolicy::default(), &tol(), 11)
                .map_err(|e| e.to_string())?;
            ensure(cert.verdict, || format!("Example {name}, eps {eps}: certificate fails"))?;
            ensure(cert.hypothesis_margin >= -1e-12, || {
                format!("Example {name}, eps {eps}: margin {:e}", cert.hypothesis_margin)
            })?;
            let achieved = cert.achieved.map(|b| b.lower).unwrap_or(f64::NAN);
            let expected = (1.0 + eps) * ab.lower;
            let rel = (achieved - expected).abs() / expected;
            worst_rel = worst_rel.max(rel);
            ensure(rel <= 1e-9, || format!("Example {name}, eps {eps}: achieved {achieved}, expected {expected}"))?;
        }
        let (_, bphi) = g_frame_operator_and_bessel(&base.phi);
        let (_, bpsi) = g_frame_operator_and_bessel(&base.psi);
        for d in [0.05, 0.1, 0.2] {
            let d = d * ab.lower;
            let c = predicted_stability_bounds(&StabilityParams::cor_5_2(d), &ab, bphi, bpsi).map_err(|e| e.to_string())?;
            let gamma = d * (ab.upper / ab.lower).sqrt();
            let t = predicted_stability_bounds(&StabilityParams::thm_5_1(0.0, 0.0, gamma), &ab, bphi, bpsi)
                .map_err(|e| e.to_string())?;
            let gap = (c.lower - t.lower).abs().max((c.upper - t.upper).abs());
            ensure(gap <= 1e-12, || format!("Example {name}, D={d}: specialisation gap {gap:e}"))?;
        }
    }
    Ok(format!("10 certificates, worst achieved-lower deviation {worst_rel:e}"))
}

fn penrose_residual(a: &OperatorMatrix, p: &OperatorMatrix) -> f64 {
    let scale = fro_norm(a).max(fro_norm(p)).max(1.0);
    let r1 = fro_norm(&(a * p * a - a)) / fro_norm(a);
    let r2 = fro_norm(&(p * a * p - p)) / fro_norm(p);
    let ap = a * p;
    let pa = p * a;
    let r3 = fro_norm(&(&ap - ap.adjoint())) / scale;
    let r4 = fro_norm(&(&pa - pa.adjoint())) / scale;
    r1.max(r2).max(r3).max(r4)
}

fn criterion_10() -> Outcome {
    let mut worst_penrose: f64 = 0.0;
    for i in 0..200u64 {
        let mut rng = stream(10_000, i);
        let rows = rng.random_range(2..=12);
        let cols = rng.random_range(2..=12);
        let r = rng.random_range(1..rows.min(cols));
        let a = sampling::gaussian_matrix(rows, r, &mut rng) * sampling::gaussian_matrix(r, cols, &mut rng);
        let p = pseudo_inverse(&a, &tol());
        let res = penrose_residual(&a, &p);
        worst_penrose = worst_penrose.max(res);
        ensure(res <= 1e-10, || format!("Penrose residual {res:e} on trial {i}"))?;
    }

    let mut worst_douglas: f64 = 0.0;
    for i in 0..200u64 {
        let mut rng = stream(10_001, i);
        let n = rng.random_range(2..=10);
        let r = rng.random_range(1..n);
        let t2 = sampling::gaussian_matrix(n, r, &mut rng) * sampling::gaussian_matrix(r, n, &mut rng);
        let w = sampling::gaussian_matrix(n, rng.random_range(1..=n), &mut rng);
        let t1 = &t2 * &w;
        let f = douglas_factor(&t1, &t2, &tol()).map_err(|e| format!("inclusion {i} rejected: {e}"))?;
        let residual = fro_norm(&(&t2 * &f.factor - &t1)) / fro_norm(&t1);
        worst_douglas = worst_douglas.max(residual);
        ensure(residual <= 1e-10, || format!("Douglas residual {residual:e} on trial {i}"))?;
        let outside = sampling::gaussian_matrix(n, 1, &mut rng);
        let q = &t2 * pseudo_inverse(&t2, &tol());
        let outside = &outside - &q * &outside;
        ensure(douglas_factor(&outside, &t2, &tol()).is_err(), || format!("non-inclusion {i} accepted"))?;
    }

    for i in 0..100u64 {
        let mut rng = stream(10_002, i);
        let n = rng.random_range(1..=8);
        let alpha = sampling::uniform(0.0, 0.6, &mut rng);
        let beta = sampling::uniform(0.0, 0.6, &mut rng);
        // |c - 1| <= alpha + beta c  iff  c in [(1 - alpha) / (1 + beta), (1 + alpha) / (1 - beta)]
        let lo = (1.0 - alpha) / (1.0 + beta);
        let hi = (1.0 + alpha) / (1.0 - beta);
        let c = sampling::uniform(lo, hi, &mut rng);
        let report = neumann_bounds(&linalg::scaled_identity(n, c), alpha, beta, 8, i).map_err(|e| e.to_string())?;
        let fwd = report.forward_bounds;
        let inv = report.inverse_bounds;
        let slack = 1e-12;
        let ok = report.hypothesis_holds
            && fwd.lo <= c + slack
            && c <= fwd.hi + slack
            && inv.lo <= 1.0 / c + slack
            && 1.0 / c <= inv.hi + slack
            && report.bounds_verified == Some(true);
        ensure(ok, || format!("scalar {c} with alpha {alpha}, beta {beta}: {report:?}"))?;
    }
    Ok(format!("Penrose worst {worst_penrose:e}, Douglas worst {worst_douglas:e}, 100 scalar Neumann checks"))
}

fn criterion_11() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_bigframe");
    let dir = std::env::temp_dir().join(format!("bigframe-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let input = dir.join("example_3_4.bgf");
    std::fs::write(&input, serialize(&example_3_4())).map_err(|e| e.to_string())?;
    let out = Command::new(bin).arg("analyze").arg(&input).output().map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(0), || format!("analyze exit {:?}", out.status.code()))?;
    let value = |key: &str| -> Option<f64> {
        text.lines().find_map(|l| l.strip_prefix(key)).and_then(|v| v.parse().ok())
    };
    let (a, b) = (value("A_opt="), value("B_opt="));
    ensure(a == Some(1.0) && b == Some(2.0), || format!("analyze printed A_opt={a:?} B_opt={b:?}"))?;

    for i in 0..50u64 {
        let mut rng = stream(11_000, i);
        let kind = SystemKind::ALL[rng.random_range(0..SystemKind::ALL.len())];
        let spec = GeneratorSpec::new(rng.random_range(1..=12), rng.random_range(1..=6), kind, rng.random());
        let sys = random_system(&spec).map_err(|e| e.to_string())?;
        let back = deserialize(&serialize(&sys)).map_err(|e| e.to_string())?;
        ensure(back == sys, || format!("round trip differs for {spec:?}"))?;
    }

    let code = |args: &[&str]| Command::new(bin).args(args).output().map(|o| o.status.code());
    ensure(code(&["verify", "3.7", "--instances", "5"]).ok() == Some(Some(0)), || "verify pass exit".into())?;
    ensure(code(&["verify", "9.9"]).ok() == Some(Some(2)), || "unknown tag exit".into())?;
    let bad = dir.join("bad.bgf");
    std::fs::write(&bad, "bigframe v1\ndim 2\n").map_err(|e| e.to_string())?;
    ensure(code(&["analyze", bad.to_str().unwrap()]).ok() == Some(Some(3)), || "parse error exit".into())?;

    let t = Instant::now();
    for tag in THEOREM_TAGS {
        let out = Command::new(bin).args(["verify", tag, "--instances", "200", "--seed", "0"]).output();
        let status = out.map_err(|e| e.to_string())?.status.code();
        ensure(status == Some(0), || format!("verify {tag} exited {status:?}"))?;
    }
    let elapsed = t.elapsed();
    within(elapsed, Duration::from_secs(300))?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("14 tags x 200 instances in {elapsed:?}"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Example 3.4 reproduction", criterion_1),
        ("Example 3.6 reproduction", criterion_2),
        ("swap suite", criterion_3),
        ("lower-bound gap suite", criterion_4),
        ("square-root factor suite", criterion_5),
        ("combined operator bounds", criterion_6),
        ("positive perturbation identity", criterion_7),
        ("right composition and surjectivity", criterion_8),
        ("stability certificates", criterion_9),
        ("operator kit", criterion_10),
        ("command line", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match run() {
            Ok(note) => println!("criterion {:>2} PASS {name}: {note} [{:.2?}]", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{:.2?}]", i + 1, t.elapsed());
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
