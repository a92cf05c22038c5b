//! Run every property suite at a reduced size.
//!
//!     cargo run --release --example verify_suites -- 200 7

use bigframe::report::{emit_report, Report};
use bigframe::suites::{run_suite, THEOREM_TAGS};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let instances = args.first().map_or(50, |s| s.parse().expect("instance count"));
    let seed = args.get(1).map_or(0, |s| s.parse().expect("seed"));
    let start = std::time::Instant::now();
    let mut all = true;
    for tag in THEOREM_TAGS {
        let summary = run_suite(tag, instances, seed).expect("known tag");
        all &= summary.all_passed();
        print!("{}", emit_report(&Report::Suite(&summary), false));
    }
    println!("{} in {:.2?}", if all { "all suites pass" } else { "failures present" }, start.elapsed());
}
