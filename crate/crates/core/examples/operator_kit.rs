//! Pseudo-inverse, PSD square root, range inclusion and the Neumann-type
//! bounds on small hand-made operators.
//!
//!     cargo run --example operator_kit

use bigframe::linalg::{
    diag, douglas_factor, from_real_rows, injectivity_margin, neumann_bounds, pseudo_inverse, psd_sqrt,
    scaled_identity, SpectralTolerance,
};

fn main() {
    let tol = SpectralTolerance::default();

    let t = from_real_rows(2, 3, &[1.0, 2.0, 0.0, 2.0, 4.0, 0.0]);
    println!("T+ of a rank-one 2x3 matrix:{}", pseudo_inverse(&t, &tol).map(|z| z.re));

    let s = diag(&[4.0, 1.0, 0.0]);
    println!("psd_sqrt(diag(4, 1, 0)):{}", psd_sqrt(&s, &tol).unwrap().map(|z| z.re));

    let t2 = diag(&[1.0, 2.0, 0.0]);
    let t1 = diag(&[3.0, 1.0, 0.0]);
    let f = douglas_factor(&t1, &t2, &tol).unwrap();
    println!("R(diag(3,1,0)) in R(diag(1,2,0)): lambda = {}, residual = {:e}", f.lambda, f.residual);
    let outside = diag(&[0.0, 0.0, 1.0]);
    println!("R(e3 e3*) in R(diag(1,2,0)): {:?}", douglas_factor(&outside, &t2, &tol).err());

    println!("injectivity of diag(3,1,0): {:?}", injectivity_margin(&t1));

    let r = neumann_bounds(&scaled_identity(3, 1.2), 0.1, 0.2, 16, 0).unwrap();
    println!(
        "T = 1.2 I with alpha 0.1, beta 0.2: forward [{:.4}, {:.4}], inverse [{:.4}, {:.4}], verified {:?}",
        r.forward_bounds.lo, r.forward_bounds.hi, r.inverse_bounds.lo, r.inverse_bounds.hi, r.bounds_verified
    );
}
