//! The transform catalogue on concrete inputs: each prints the predicted
//! bounds next to the optimal bounds of the output system.
//!
//!     cargo run --example transforms

use bigframe::instances::fixtures::{example_3_4, example_3_6};
use bigframe::linalg::{diag, scaled_identity};
use bigframe::transforms::{
    combined_operator_bounds, positive_perturb, restrict_range, right_compose, surjectivity_equivalence, swap,
    PredictedBounds,
};
use bigframe::{classify, optimal_bounds, BiGFrameSystem, SpectralTolerance, C64};

fn show(label: &str, pred: Option<&PredictedBounds>, out: &BiGFrameSystem, tol: &SpectralTolerance) {
    let r = classify(out, tol);
    match pred {
        Some(p) => println!(
            "{label:<22} predicted [{:.4}, {:.4}]  optimal [{:.4}, {:.4}]  {}",
            p.lower, p.upper, r.a_opt, r.b_opt, r.verdict
        ),
        None => println!("{label:<22} optimal [{:.4}, {:.4}]  {}", r.a_opt, r.b_opt, r.verdict),
    }
}

fn main() {
    let tol = SpectralTolerance::default();
    let e34 = example_3_4();
    let e36 = example_3_6();

    show("swap(3.4)", None, &swap(&e34), &tol);

    let ab = optimal_bounds(&e34, &tol).bounds.unwrap();
    let one = C64::from(1.0);
    let p = combined_operator_bounds(&[ab, ab], &[one, one]).unwrap();
    let doubled = e34.with_k(&e34.k_op * C64::from(2.0)).unwrap();
    show("K + K on 3.4", Some(&p), &doubled, &tol);
    println!("{:<22} uncorrected constant {:.4}", "", p.paper_constant.unwrap());

    let (out, p) = right_compose(&e36, &scaled_identity(4, 1.5), &tol).unwrap();
    show("right-compose 1.5 I", Some(&p), &out, &tol);

    let (out, p) = restrict_range(&e36, &diag(&[1.0, 0.5, 0.0, 0.0]), &tol).unwrap();
    show("restrict to diag", Some(&p), &out, &tol);

    let out = positive_perturb(&e36, &diag(&[0.5, 0.25, 0.0, 1.0]), 2, &tol).unwrap();
    show("I + T^2 perturbation", None, &out, &tol);

    for m in [diag(&[1.0, 2.0, 3.0, 4.0]), diag(&[1.0, 2.0, 0.0, 4.0])] {
        let check = surjectivity_equivalence(&e36, 1.0, &m, &tol).unwrap();
        println!(
            "{:<22} K-bi-g-frame = {}, M surjective = {}",
            "tight 3.6 composed", check.is_k_bi_g_frame, check.m_surjective
        );
    }
}
