//! Classify the two worked examples and print both report forms.
//!
//!     cargo run --example analyze_fixtures

use bigframe::instances::fixtures::{example_3_4, example_3_6};
use bigframe::report::{emit_report, Report};
use bigframe::{biframe_operator, classify, SpectralTolerance};

fn main() {
    let tol = SpectralTolerance::default();
    for (name, sys) in [("Example 3.4", example_3_4()), ("Example 3.6", example_3_6())] {
        let s = biframe_operator(&sys);
        let diag: Vec<f64> = (0..s.nrows()).map(|i| s[(i, i)].re).collect();
        println!("== {name}: diag(S) = {diag:?}");
        let report = classify(&sys, &tol);
        print!("{}", emit_report(&Report::Classification(&report), false));
        print!("{}", emit_report(&Report::Classification(&report), true));
        println!();
    }
}
