use super::*;
use crate::fidelity::{fidelity_tuple, fidelity_tuple_mixed, werner_fidelity};
use crate::linalg::jacobi_eigen;
use crate::region::{SupportEvaluator, Verdict};
use approx::assert_abs_diff_eq;

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn three_term() -> ConstraintSpec {
    ConstraintSpec::parse(4, Some("F1"), &["F1+F3=2F2"]).unwrap()
}

/// `min_μ λ_max(C − μG)`, the dual bound of "maximize ψᵀCψ subject to
/// ψᵀGψ = 0" on the unit sphere; tight when the joint numerical range of
/// (C, G) is convex, which holds for dimension ≥ 3.
fn dual_bound(c: &DMatrix<f64>, g: &DMatrix<f64>) -> f64 {
    let q = |mu: f64| jacobi_eigen(&(c - g * mu)).max_value();
    let (mut lo, mut hi) = (-100.0, 100.0);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if q(a) < q(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    q(0.5 * (lo + hi))
}

#[test]
fn two_two_three_term_optimum() {
    let r = maximize_on_sphere(&p("2,2"), &three_term(), 11, 16).unwrap();
    let s3 = 3f64.sqrt();
    let best = r.best();
    for (got, want) in best
        .fidelities
        .iter()
        .zip([(2.0 + s3) / 4.0, 0.5, (2.0 - s3) / 4.0])
    {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-8);
    }
    let a = [0.5 * (2.0 - s3).sqrt(), (0.5 + s3 / 4.0).sqrt()];
    for (got, want) in best.amplitudes.iter().zip(a) {
        assert_abs_diff_eq!(got.abs(), want, epsilon = 1e-8);
    }
    assert!(best.residual <= SOLUTION_RESIDUAL);
}

#[test]
fn three_one_three_term_optimum_matches_duality() {
    let spec = three_term();
    let r = maximize_on_sphere(&p("3,1"), &spec, 11, 32).unwrap();
    let best = r.best();

    let map = FidelityMap::new(&p("3,1"));
    let problem = Problem::new(&map, &spec);
    let bound = dual_bound(&problem.objective, &problem.constraints[0]);
    assert_abs_diff_eq!(best.objective, bound, epsilon = 1e-8);

    for (got, want) in best.fidelities.iter().zip([0.887619, 0.556902, 0.226185]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-6);
    }
    assert!(best.fidelities[0] + best.fidelities[2] - 2.0 * best.fidelities[1] < 1e-8);
    let norm: f64 = best.amplitudes.iter().map(|x| x * x).sum();
    assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
}

#[test]
fn unconstrained_maximum() {
    let spec = ConstraintSpec::parse(4, Some("F1"), &[]).unwrap();
    let r = maximize_on_sphere(&p("2,2"), &spec, 3, 8).unwrap();
    assert_abs_diff_eq!(r.best().objective, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(r.best().amplitudes[0], 0.0, epsilon = 1e-7);
    assert_abs_diff_eq!(r.best().amplitudes[1], 1.0, epsilon = 1e-12);
}

#[test]
fn solutions_reproduce_and_lie_in_the_region() {
    let h = SupportEvaluator::new(4).unwrap();
    for lambda in ["3,1", "2,2"] {
        let r = maximize_on_sphere(&p(lambda), &three_term(), 5, 16).unwrap();
        for s in &r.solutions {
            let state = PureIrrepState::new(p(lambda), s.amplitudes.clone()).unwrap();
            let f = fidelity_tuple(&state);
            assert!(f
                .values
                .iter()
                .zip(&s.fidelities)
                .all(|(a, b)| (a - b).abs() < 1e-10));
            for v in &s.sign_family {
                let g = fidelity_tuple(&PureIrrepState::new(p(lambda), v.clone()).unwrap());
                assert!(g.max_abs_diff(&f) <= DEDUPE_TOLERANCE);
            }
            let verdict = h.membership(&s.fidelities, 1e-7).unwrap().verdict;
            assert_ne!(verdict, Verdict::Outside);
        }
        let objectives: Vec<f64> = r.solutions.iter().map(|s| s.objective).collect();
        assert!(objectives.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn reconstruction_is_deterministic() {
    let a = maximize_on_sphere(&p("3,1"), &three_term(), 9, 8).unwrap();
    let b = maximize_on_sphere(&p("3,1"), &three_term(), 9, 8).unwrap();
    assert_eq!(a.best().amplitudes, b.best().amplitudes);
}

#[test]
fn infeasible_and_invalid_requests() {
    let spec = ConstraintSpec::parse(4, None, &["F1=2"]).unwrap();
    assert!(matches!(
        maximize_on_sphere(&p("2,2"), &spec, 1, 4),
        Err(Error::Infeasible { .. })
    ));
    assert!(maximize_on_sphere(&p("3,2"), &three_term(), 1, 4).is_err());
    assert!(maximize_on_sphere(&p("2,2"), &three_term(), 1, 0).is_err());
    assert!(maximize_on_sphere(&p("2,1,1"), &three_term(), 1, 4).is_err());
}

#[test]
fn state_from_f1_examples() {
    let l = p("2,2");
    let zero = state_from_f1(&l, 0.0, true).unwrap();
    assert_eq!(
        zero.matrix(),
        &DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0])
    );
    let one = state_from_f1(&l, 1.0, false).unwrap();
    assert_eq!(
        one.matrix(),
        &DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0])
    );

    let s3 = 3f64.sqrt();
    let rho = state_from_f1(&l, (2.0 + s3) / 4.0, false).unwrap();
    let want = DMatrix::from_row_slice(2, 2, &[2.0 - s3, -1.0, -1.0, 2.0 + s3]) / 4.0;
    assert!(crate::linalg::max_abs_diff(rho.matrix(), &want) < 1e-15);

    for f1 in [0.1, 0.5, 0.9] {
        for positive in [true, false] {
            let rho = state_from_f1(&l, f1, positive).unwrap();
            assert_abs_diff_eq!(fidelity_tuple_mixed(&rho).values[0], f1, epsilon = 1e-14);
            let eig = jacobi_eigen(rho.matrix());
            assert_abs_diff_eq!(eig.min_value(), 0.0, epsilon = 1e-14);
            let sign = if positive { 1.0 } else { -1.0 };
            let psi = DVector::from_vec(vec![(1.0 - f1).sqrt(), sign * f1.sqrt()]);
            assert!(crate::linalg::max_abs_diff(rho.matrix(), &(&psi * psi.transpose())) < 1e-15);
        }
    }
    assert!(state_from_f1(&l, 1.5, true).is_err());
    assert!(state_from_f1(&p("3,1"), 0.5, true).is_err());
}

#[test]
fn symmetric_optimum_matches_werner() {
    for (n, t) in [(2, 1.0), (3, 0.75), (4, 2.0 / 3.0), (5, 0.625)] {
        let opt = symmetric_optimum(n).unwrap();
        assert_abs_diff_eq!(opt.singlet_fraction, t, epsilon = 1e-12);
        // One copy from one copy is the identity channel.
        let werner = if n == 2 {
            1.0
        } else {
            werner_fidelity(1, n - 1, 2).unwrap()
        };
        assert_abs_diff_eq!(opt.cloning_fidelity, werner, epsilon = 1e-9);
        for x in &opt.point.values {
            assert_abs_diff_eq!(*x, t, epsilon = 1e-12);
        }
        let mixed = fidelity_tuple_mixed(&opt.mixture().unwrap());
        assert!(mixed.max_abs_diff(&opt.point) < 1e-12);
    }
}
