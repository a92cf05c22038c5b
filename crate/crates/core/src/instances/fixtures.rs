//! The two worked examples on `C^4` as ready-made systems.

use crate::family::{BiGFrameSystem, GOperatorFamily};
use crate::linalg::{OperatorMatrix, C64};

/// `d x 4` matrix with a single entry `value` at `(row, col)`: the operator
/// `x -> value <x, e_{col}> e_{row}` into a `d`-dimensional subspace.
fn rank_one(d: usize, row: usize, col: usize, value: f64) -> OperatorMatrix {
    let mut m = OperatorMatrix::zeros(d, 4);
    m[(row, col)] = C64::from(value);
    m
}

/// `K x = <x, e1> e2` with `Φ_i`, `Ψ_i` into nested subspaces of dimension
/// 1, 2, 3, 4. Mixed form `2|x1|^2 + |x2|^2 + |x3|^2`, bounds 1 and 2.
pub fn example_3_4() -> BiGFrameSystem {
    let phi = GOperatorFamily::new(
        4,
        vec![
            rank_one(1, 0, 0, 1.0),
            rank_one(2, 0, 0, 1.0),
            rank_one(3, 2, 1, 3.0),
            rank_one(4, 3, 2, 4.0),
        ],
    )
    .expect("fixture shapes");
    let psi = GOperatorFamily::new(
        4,
        vec![
            rank_one(1, 0, 0, 1.0),
            rank_one(2, 0, 0, 1.0),
            rank_one(3, 2, 1, 1.0 / 3.0),
            rank_one(4, 3, 2, 1.0 / 4.0),
        ],
    )
    .expect("fixture shapes");
    let mut k = OperatorMatrix::zeros(4, 4);
    k[(1, 0)] = C64::from(1.0);
    BiGFrameSystem::new(phi, psi, k).expect("fixture shapes")
}

/// `K = I` with `Φ_i x = i <x, e_i>` and `Ψ_i x = <x, e_i> / i` on
/// one-dimensional subspaces: a Parseval K-bi-g-frame.
pub fn example_3_6() -> BiGFrameSystem {
    let phi = GOperatorFamily::new(
        4,
        (0..4).map(|i| rank_one(1, 0, i, (i + 1) as f64)).collect(),
    )
    .expect("fixture shapes");
    let psi = GOperatorFamily::new(
        4,
        (0..4).map(|i| rank_one(1, 0, i, 1.0 / (i + 1) as f64)).collect(),
    )
    .expect("fixture shapes");
    BiGFrameSystem::new(phi, psi, OperatorMatrix::identity(4, 4)).expect("fixture shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{biframe_operator, classify, optimal_bounds, quadratic_form, Verdict};
    use crate::linalg::{diag, fro_norm, ComplexVector, SpectralTolerance};
    use crate::sampling;

    fn basis(i: usize) -> ComplexVector {
        ComplexVector::from_fn(4, |r, _| C64::from(if r == i { 1.0 } else { 0.0 }))
    }

    #[test]
    fn example_3_4_operators_match_definitions() {
        let sys = example_3_4();
        assert_eq!(sys.phi.subspace_dims(), vec![1, 2, 3, 4]);
        // Φ_3 x = 3 <x, e2> e3, Ψ_4 x = <x, e3> e4 / 4
        let x = basis(1);
        let y = sys.phi.operator(2) * &x;
        assert_eq!(y, ComplexVector::from_vec(vec![0.0, 0.0, 3.0].into_iter().map(C64::from).collect()));
        let y = sys.psi.operator(3) * basis(2);
        assert_eq!(y[3], C64::from(0.25));
    }

    #[test]
    fn example_3_4_k_and_adjoint() {
        let sys = example_3_4();
        // K x = <x, e1> e2 and K* x = <x, e2> e1
        assert_eq!(&sys.k_op * basis(0), basis(1));
        assert_eq!(sys.k_op.adjoint() * basis(1), basis(0));
        assert_eq!(sys.k_op.adjoint() * basis(0), ComplexVector::zeros(4));
    }

    #[test]
    fn example_3_4_quadratic_form_display() {
        let sys = example_3_4();
        let mut rng = sampling::stream(34, 0);
        for _ in 0..20 {
            let x = sampling::gaussian_vector(4, &mut rng);
            let expected = 2.0 * x[0].norm_sqr() + x[1].norm_sqr() + x[2].norm_sqr();
            let form = quadratic_form(&sys, &x).unwrap();
            assert!((form.re - expected).abs() < 1e-12 && form.im.abs() < 1e-12);
            // ||K* x||^2 = |x2|^2 <= form <= 2 ||x||^2
            let kx = sys.k_op.adjoint() * &x;
            assert!(kx.norm_squared() <= form.re + 1e-12);
            assert!(form.re <= 2.0 * x.norm_squared() + 1e-12);
        }
        assert_eq!(biframe_operator(&sys), diag(&[2.0, 1.0, 1.0, 0.0]));
    }

    #[test]
    fn example_3_4_bounds() {
        let r = classify(&example_3_4(), &SpectralTolerance::default());
        assert_eq!(r.verdict, Verdict::KBiGFrame);
        let b = r.optimal_bounds.unwrap();
        assert!((b.lower - 1.0).abs() < 1e-9 && (b.upper - 2.0).abs() < 1e-9);
    }

    #[test]
    fn example_3_6_is_parseval() {
        let sys = example_3_6();
        assert_eq!(sys.phi.subspace_dims(), vec![1, 1, 1, 1]);
        assert_eq!(sys.k_op.adjoint(), sys.k_op);
        let s = biframe_operator(&sys);
        assert!(fro_norm(&(s - sys.k_gram())) <= 1e-14);
        let ob = optimal_bounds(&sys, &SpectralTolerance::default());
        let b = ob.bounds.unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
        assert_eq!(
            classify(&sys, &SpectralTolerance::default()).verdict,
            Verdict::ParsevalKBiGFrame
        );
    }
}
