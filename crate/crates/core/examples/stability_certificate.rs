//! Stability certificates for a scaled perturbation and for a small
//! conjugation of a random base system.
//!
//!     cargo run --example stability_certificate

use bigframe::instances::fixtures::example_3_6;
use bigframe::instances::random::{conditioned_operator, covering_dims, weighted_pair};
use bigframe::linalg::{identity, op_norm};
use bigframe::report::{emit_report, Report};
use bigframe::sampling::{self, stream};
use bigframe::stability::{certify_stability, scaled_psi, StabilityParams, SubsetPolicy};
use bigframe::{BiGFrameSystem, SpectralTolerance, C64};

fn main() {
    let tol = SpectralTolerance::default();
    let policy = SubsetPolicy::default();

    let base = example_3_6();
    let cand = scaled_psi(&base, 1.1);
    let cert = certify_stability(&base, &base.phi, &cand, &StabilityParams::thm_5_1(0.1, 0.0, 0.0), &policy, &tol, 0)
        .unwrap();
    println!("== scaled perturbation of Example 3.6");
    print!("{}", emit_report(&Report::Stability(&cert), false));

    let mut rng = stream(17, 0);
    let k = conditioned_operator(4, 4, 0.5, 2.0, &mut rng);
    let dims = covering_dims(4, 5, &mut rng);
    let (phi, psi) = weighted_pair(4, &dims, &mut rng);
    let base = BiGFrameSystem::new(phi, psi, k).unwrap();
    let e = sampling::gaussian_matrix(4, 4, &mut rng);
    let p = identity(4) + &e * C64::from(0.01 / op_norm(&e));
    let cand_phi = base.phi.compose_right(&p).unwrap();
    let cand_psi = base.psi.compose_right(&p).unwrap();
    let params = StabilityParams::thm_5_4(0.05, 0.05, 0.02, 0.02);
    println!("\n== conjugated random system, {}", params.variant);
    match certify_stability(&base, &cand_phi, &cand_psi, &params, &policy, &tol, 1) {
        Ok(cert) => print!("{}", emit_report(&Report::Stability(&cert), true)),
        Err(e) => println!("parameters rejected: {e}"),
    }
}
