//! Text reports: a human summary and a `key=value` machine block.

use std::fmt::Write as _;

use crate::frame::ClassificationReport;
use crate::stability::{StabilityCertificate, SubsetMode};
use crate::suites::SuiteSummary;

pub enum Report<'a> {
    Classification(&'a ClassificationReport),
    Stability(&'a StabilityCertificate),
    Suite(&'a SuiteSummary),
}

/// Twelve significant digits, trailing zeros dropped; plain decimal for
/// moderate exponents, scientific otherwise.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn emit_report(report: &Report<'_>, machine: bool) -> String {
    match (report, machine) {
        (Report::Classification(r), true) => classification_machine(r),
        (Report::Classification(r), false) => classification_human(r),
        (Report::Stability(c), true) => stability_machine(c),
        (Report::Stability(c), false) => stability_human(c),
        (Report::Suite(s), true) => suite_machine(s),
        (Report::Suite(s), false) => suite_human(s),
    }
}

fn classification_machine(r: &ClassificationReport) -> String {
    format!(
        "classification={}\nA_opt={}\nB_opt={}\nhermiticity_residual={}\nmin_eigenvalue={}\ntight_residual={}\nk_rank={}\ndegenerate_k={}\n",
        r.verdict,
        fmt_num(r.a_opt),
        fmt_num(r.b_opt),
        fmt_num(r.hermiticity_residual),
        fmt_num(r.min_eigenvalue),
        fmt_num(r.tight_residual),
        r.k_rank,
        r.degenerate_k
    )
}

fn classification_human(r: &ClassificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", r.verdict);
    match r.optimal_bounds {
        Some(b) => {
            let _ = writeln!(out, "optimal bounds: A = {}, B = {}", fmt_num(b.lower), fmt_num(b.upper));
        }
        None if r.degenerate_k => {
            let _ = writeln!(out, "optimal bounds: K = 0, every lower constant works; B = {}", fmt_num(r.b_opt));
        }
        None => {
            let _ = writeln!(out, "optimal bounds: none (A_opt = {})", fmt_num(r.a_opt));
        }
    }
    let _ = writeln!(
        out,
        "spectrum of S: [{}, {}], hermiticity residual {}",
        fmt_num(r.min_eigenvalue),
        fmt_num(r.b_opt),
        fmt_num(r.hermiticity_residual)
    );
    let _ = writeln!(out, "rank of K: {}", r.k_rank);
    let _ = writeln!(out, "bi-g-frame (K = I): {}", if r.bi_g_frame { "yes" } else { "no" });
    let notes: Vec<&str> = r.annotations.iter().map(|a| a.as_str()).collect();
    let _ = writeln!(out, "annotations: {}", if notes.is_empty() { "none".into() } else { notes.join(", ") });
    out
}

fn stability_machine(c: &StabilityCertificate) -> String {
    let (a, b) = c.achieved.map_or((f64::NAN, f64::NAN), |b| (b.lower, b.upper));
    let policy = match c.policy_used.mode {
        SubsetMode::Exhaustive => "exhaustive",
        SubsetMode::Structured => "structured",
    };
    format!(
        "variant={}\nhypothesis_margin={}\nhypothesis_holds={}\npolicy={}\npredicted_lower={}\npredicted_upper={}\nachieved_lower={}\nachieved_upper={}\ncandidate_classification={}\npredicted_lower_holds={}\nverdict={}\n",
        c.predicted.source,
        fmt_num(c.hypothesis_margin),
        c.hypothesis_holds,
        policy,
        fmt_num(c.predicted.lower),
        fmt_num(c.predicted.upper),
        fmt_num(a),
        fmt_num(b),
        c.candidate.verdict,
        c.predicted_lower_holds,
        c.verdict
    )
}

fn stability_human(c: &StabilityCertificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "certificate: {}", if c.verdict { "holds" } else { "fails" });
    let _ = writeln!(
        out,
        "hypothesis margin {} over subset {:?} ({})",
        fmt_num(c.hypothesis_margin),
        c.worst_subset,
        if c.hypothesis_holds { "ok" } else { "violated" }
    );
    let _ = writeln!(
        out,
        "predicted bounds: {}, {}",
        fmt_num(c.predicted.lower),
        fmt_num(c.predicted.upper)
    );
    match c.achieved {
        Some(b) => {
            let _ = writeln!(out, "achieved bounds: {}, {}", fmt_num(b.lower), fmt_num(b.upper));
        }
        None => {
            let _ = writeln!(out, "achieved bounds: none (candidate is {})", c.candidate.verdict);
        }
    }
    let _ = writeln!(out, "note: {}", c.paper_lower_note);
    out
}

fn suite_machine(s: &SuiteSummary) -> String {
    let mut out = format!(
        "theorem={}\nseed={}\ninstances={}\npassed={}\nfailed={}\nworst_margin={}\n",
        s.theorem,
        s.seed,
        s.instances,
        s.passed,
        s.failed,
        s.worst_margin.map_or("n/a".into(), fmt_num)
    );
    for f in s.failures() {
        let _ = writeln!(out, "failure seed={} index={}: {}", s.seed, f.index, f.detail);
    }
    out
}

fn suite_human(s: &SuiteSummary) -> String {
    let status = if s.all_passed() { "PASS" } else { "FAIL" };
    format!(
        "{status} {}: {}/{} trials passed (seed {}), worst margin {}\n",
        s.theorem,
        s.passed,
        s.instances,
        s.seed,
        s.worst_margin.map_or("n/a".into(), fmt_num)
    )
}

/// Per-trial margins as CSV.
pub fn suite_csv(s: &SuiteSummary) -> String {
    let mut out = String::from("theorem,seed,index,passed,margin,detail\n");
    for o in &s.outcomes {
        let _ = writeln!(
            out,
            "{},{},{},{},{},\"{}\"",
            s.theorem,
            s.seed,
            o.index,
            o.passed,
            o.margin.map_or(String::new(), fmt_num),
            o.detail.replace('"', "\"\"")
        );
    }
    out
}
