//! Optimal bounds of seeded random systems, one per generator kind, checked
//! against the extremal vectors the solver reports.
//!
//!     cargo run --example optimal_bounds

use bigframe::instances::random::{random_system, GeneratorSpec, SystemKind};
use bigframe::{optimal_bounds, quadratic_form, SpectralTolerance};

fn main() {
    let tol = SpectralTolerance::default();
    for kind in SystemKind::ALL {
        let mut spec = GeneratorSpec::new(6, 4, kind, 2024);
        spec.k_rank = Some(3);
        let sys = random_system(&spec).expect("valid spec");
        let ob = optimal_bounds(&sys, &tol);
        let d = &ob.diagnostics;
        print!("{:<16} A_opt = {:<12.6} B_opt = {:<10.6} rank K = {}", kind.as_str(), d.a_opt, d.b_opt, d.k_rank);
        if let (Some(lw), Some(uw)) = (&d.lower_witness, &d.upper_witness) {
            let lower_gap = quadratic_form(&sys, lw).unwrap().re - d.a_opt * (sys.k_op.adjoint() * lw).norm_squared();
            let upper_gap = d.b_opt * uw.norm_squared() - quadratic_form(&sys, uw).unwrap().re;
            print!("  attained to {:.1e} / {:.1e}", lower_gap.abs(), upper_gap.abs());
        }
        println!();
        if let Err(why) = ob.bounds {
            println!("                 no bounds: {why:?}");
        }
    }
}
