//! Acceptance suite: one PASS/FAIL line per criterion, runtime included.
//! Exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cloneregion::fidelity::{
    fidelity_tuple, fidelity_tuple_mixed, realify, singlet_to_cloning, werner_fidelity, FidelityMap,
};
use cloneregion::oracle::verify;
use cloneregion::reconstruct::{
    maximize_on_sphere, state_from_f1, symmetric_optimum, ConstraintSpec,
};
use cloneregion::region::{coordinate_symmetry_check, permute_tuple, sample_region};
use cloneregion::report::report;
use cloneregion::sgroup::{align_with_published, qubit_partitions};
use cloneregion::{
    MixedIrrepState, Partition, Permutation, PureIrrepState, SupportEvaluator, Verdict,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

type Check = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Check);

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn within(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

fn random_unit(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

fn random_density(lambda: &Partition, rng: &mut ChaCha8Rng) -> MixedIrrepState {
    let d = lambda.dimension();
    let g: DMatrix<f64> = DMatrix::from_fn(d, d, |_, _| StandardNormal.sample(rng));
    let m = &g * g.transpose();
    let t = m.trace();
    MixedIrrepState::new(lambda.clone(), m / t).unwrap()
}

fn published_matrices() -> Check {
    let mut notes = Vec::new();
    let mut ok = true;
    for lambda in ["3,1", "2,2", "4,1", "3,2"] {
        let al = align_with_published(&p(lambda), 1e-12).expect("published table");
        let matched = al.matched();
        let bad: Vec<String> = matched
            .iter()
            .enumerate()
            .filter(|(_, m)| !**m)
            .map(|(i, _)| format!("V(1{}) err {:.3}", i + 2, al.errors[i]))
            .collect();
        if bad.is_empty() {
            notes.push(format!("({lambda}) all match"));
        } else {
            ok = false;
            notes.push(format!("({lambda}) mismatch: {}", bad.join(", ")));
        }
    }
    if ok {
        Ok(notes.join("; "))
    } else {
        Err(notes.join("; "))
    }
}

fn dimension_identities() -> Check {
    for n in 2..=10 {
        let total: usize = qubit_partitions(n)
            .unwrap()
            .iter()
            .map(|l| l.dimension() * l.qubit_multiplicity())
            .sum();
        if total != 1 << n {
            return Err(format!("n = {n}: sum r·d = {total}"));
        }
    }
    for (lambda, d) in [("3,1", 3), ("2,2", 2), ("4,1", 4), ("3,2", 5)] {
        if p(lambda).dimension() != d {
            return Err(format!("d({lambda}) = {}", p(lambda).dimension()));
        }
    }
    Ok("sum r(λ)d(λ) = 2^n for n = 2..10".into())
}

fn oracle_equivalence() -> Check {
    let mut notes = Vec::new();
    for n in 3..=5 {
        let r = verify(n, 100, 2024).map_err(|e| e.to_string())?;
        let ok =
            r.max_abs_error <= 1e-10 && r.block_leakage < 1e-9 && r.marginal_deviation <= 1e-10;
        let line = format!(
            "n={n}: err {:.1e}, leakage {:.1e}, marginal {:.1e}",
            r.max_abs_error, r.block_leakage, r.marginal_deviation
        );
        if !ok {
            return Err(line);
        }
        notes.push(line);
    }
    Ok(notes.join("; "))
}

fn werner_benchmark() -> Check {
    let h = SupportEvaluator::new(4)
        .unwrap()
        .value(&[1.0, 1.0, 1.0])
        .unwrap();
    let t = h / 3.0;
    let f = singlet_to_cloning(t).unwrap().f;
    let five = symmetric_optimum(5).unwrap().cloning_fidelity;
    let w5 = werner_fidelity(1, 4, 2).unwrap();
    let line = format!("h(1,1,1) = {h:.12}, t = {t:.12}, f4 = {f:.12}, f5 = {five:.12}");
    if within(h, 2.0, 1e-9)
        && within(t, 2.0 / 3.0, 1e-9)
        && within(f, 7.0 / 9.0, 1e-9)
        && within(five, 0.75, 1e-9)
        && within(w5, 0.75, 1e-9)
    {
        Ok(line)
    } else {
        Err(line)
    }
}

fn three_term() -> ConstraintSpec {
    ConstraintSpec::parse(4, Some("F1"), &["F1+F3=2F2"]).unwrap()
}

fn reconstruction_two_two() -> Check {
    let lambda = p("2,2");
    let r = maximize_on_sphere(&lambda, &three_term(), 11, 64).map_err(|e| e.to_string())?;
    let best = r.best();
    let s3 = 3f64.sqrt();
    let want = [(2.0 + s3) / 4.0, 0.5, (2.0 - s3) / 4.0];
    let f_err = best
        .fidelities
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let psi = DVector::from_vec(best.amplitudes.clone());
    let rho = &psi * psi.transpose();
    let published =
        |sign: f64| DMatrix::from_row_slice(2, 2, &[2.0 - s3, sign, sign, 2.0 + s3]) / 4.0;
    let rho_err = [-1.0, 1.0]
        .iter()
        .map(|&s| (&rho - published(s)).abs().max())
        .fold(f64::INFINITY, f64::min);
    let from_f1 = [(-1.0, false), (1.0, true)]
        .iter()
        .map(|&(s, positive)| {
            let m = state_from_f1(&lambda, want[0], positive).unwrap();
            (m.matrix() - published(s)).abs().max()
        })
        .fold(0.0, f64::max);
    let line = format!(
        "F err {f_err:.1e}, state vs published ρ {rho_err:.1e}, ρ(F₁) both signs {from_f1:.1e}"
    );
    if f_err <= 1e-8 && rho_err <= 1e-8 && from_f1 <= 1e-8 {
        Ok(line)
    } else {
        Err(line)
    }
}

// 0.318 is a quoted amplitude, not 1/π.
#[allow(clippy::approx_constant)]
fn reconstruction_three_one() -> Check {
    let r = maximize_on_sphere(&p("3,1"), &three_term(), 11, 64).map_err(|e| e.to_string())?;
    let best = r.best();
    let f_err = best
        .fidelities
        .iter()
        .zip([0.886, 0.556, 0.220])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let a_err = best
        .amplitudes
        .iter()
        .zip([0.114, 0.318, 0.941])
        .map(|(a, b)| (a.abs() - b).abs())
        .fold(0.0, f64::max);
    let line = format!(
        "F = ({:.6}, {:.6}, {:.6}) err {f_err:.1e}; |a| = ({:.6}, {:.6}, {:.6}) err {a_err:.1e}; tol 5e-3",
        best.fidelities[0],
        best.fidelities[1],
        best.fidelities[2],
        best.amplitudes[0].abs(),
        best.amplitudes[1].abs(),
        best.amplitudes[2].abs()
    );
    if f_err <= 5e-3 && a_err <= 5e-3 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn membership_suite() -> Check {
    let h = SupportEvaluator::new(4).unwrap();
    let tol = 1e-7;
    let origin = h.membership(&[0.0; 3], tol).unwrap();
    let vertex = h.membership(&[2.0 / 3.0; 3], tol).unwrap();
    let ones = h.membership(&[1.0; 3], tol).unwrap();
    let diag = 1.0 / 3f64.sqrt();
    let separation = ones
        .separator
        .as_ref()
        .map(|w| w.iter().sum::<f64>() * diag * ones.max_violation);

    let sample = sample_region(4, 20_000, 7).unwrap();
    let mut outside = 0;
    let mut checked = 0;
    for point in sample.points() {
        checked += 1;
        if h.membership(&point.fidelities, tol).unwrap().verdict == Verdict::Outside {
            outside += 1;
        }
    }
    let line = format!(
        "(0,0,0) {} (g = {:.1e}); (2/3,2/3,2/3) {} (g = {:.1e}); (1,1,1) {} separation {:.6}; cloud {checked} points, {outside} outside",
        origin.verdict,
        origin.max_violation,
        vertex.verdict,
        vertex.max_violation,
        ones.verdict,
        separation.unwrap_or(f64::NAN)
    );
    let ok = origin.verdict == Verdict::Inside
        && vertex.verdict == Verdict::Boundary
        && vertex.max_violation.abs() <= 1e-6
        && ones.verdict == Verdict::Outside
        && separation.is_some_and(|s| s >= 0.5)
        && outside == 0;
    if ok {
        Ok(line)
    } else {
        Err(line)
    }
}

fn complex_unit(d: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / n).collect()
}

fn realification() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut min_eig, mut trace_err, mut f_err) = (f64::INFINITY, 0.0f64, 0.0f64);
    let mut count = 0;
    for lambda in qubit_partitions(4).unwrap() {
        let map = FidelityMap::new(&lambda);
        let d = lambda.dimension();
        for _ in 0..1000 {
            let psi = complex_unit(d, &mut rng);
            let r = realify(&psi);
            min_eig = min_eig.min(r.clone().symmetric_eigen().eigenvalues.min());
            trace_err = trace_err.max((r.trace() - 1.0).abs());
            let mixed = fidelity_tuple_mixed(&MixedIrrepState::new(lambda.clone(), r).unwrap());
            let z = DVector::from_vec(psi);
            for (k, v) in map.transpositions().iter().enumerate() {
                let vc = v.map(|x| Complex64::new(x, 0.0));
                let expect = (z.adjoint() * vc * &z)[(0, 0)].re;
                f_err = f_err.max((mixed.values[k] - 0.5 * (1.0 - expect)).abs());
            }
            count += 1;
        }
    }
    let line = format!("{count} states: min eig {min_eig:.1e}, trace err {trace_err:.1e}, fidelity err {f_err:.1e}");
    if min_eig > -1e-10 && trace_err <= 1e-12 && f_err <= 1e-12 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn affinity_and_symmetry() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let lambdas: Vec<Partition> = ["3,1", "2,2", "4,1", "3,2"].iter().map(|s| p(s)).collect();
    let mut affinity = 0.0f64;
    for i in 0..500 {
        let lambda = &lambdas[i % lambdas.len()];
        let (a, b) = (
            random_density(lambda, &mut rng),
            random_density(lambda, &mut rng),
        );
        let alpha: f64 = rng.gen();
        let mix = MixedIrrepState::mixture(&[(alpha, &a), (1.0 - alpha, &b)]).unwrap();
        let (fa, fb, fm) = (
            fidelity_tuple_mixed(&a),
            fidelity_tuple_mixed(&b),
            fidelity_tuple_mixed(&mix),
        );
        for k in 0..fm.len() {
            affinity = affinity
                .max((fm.values[k] - alpha * fa.values[k] - (1.0 - alpha) * fb.values[k]).abs());
        }
    }
    let mut covariance = 0.0f64;
    for i in 0..500 {
        let lambda = &lambdas[i % lambdas.len()];
        let n = lambda.n();
        let psi =
            PureIrrepState::new(lambda.clone(), random_unit(lambda.dimension(), &mut rng)).unwrap();
        let mut rest: Vec<usize> = (2..=n).collect();
        for j in (1..rest.len()).rev() {
            rest.swap(j, rng.gen_range(0..=j));
        }
        let sigma = Permutation::new([1].into_iter().chain(rest).collect()).unwrap();
        let moved = fidelity_tuple(&coordinate_symmetry_check(&psi, &sigma).unwrap());
        let want = permute_tuple(&fidelity_tuple(&psi).values, &sigma);
        for (a, b) in moved.values.iter().zip(&want) {
            covariance = covariance.max((a - b).abs());
        }
    }
    let line = format!(
        "affinity err {affinity:.1e}, permutation covariance err {covariance:.1e} (500 cases each)"
    );
    if affinity <= 1e-12 && covariance <= 1e-12 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn plane_constant() -> Check {
    let r = report(4).map_err(|e| e.to_string())?;
    let plane = r.plane.ok_or("no plane in report")?;
    let constant = plane.constant.ok_or("plane has zero first coefficient")?;
    let flag = if within(constant, 2.5, 1e-6) {
        "agrees with 5/2"
    } else {
        "differs from the quoted 5/2"
    };
    let line = format!(
        "F12 + {:.6} F13 + {:.6} F14 = {constant:.12} ({flag}), residual {:.1e}",
        plane.coefficients.as_ref().map_or(f64::NAN, |c| c[1]),
        plane.coefficients.as_ref().map_or(f64::NAN, |c| c[2]),
        plane.max_residual
    );
    if plane.max_residual < 1e-8 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "published transposition matrices",
            Some(Duration::from_secs(1)),
            published_matrices,
        ),
        (
            "dimension identities",
            Some(Duration::from_secs(1)),
            dimension_identities,
        ),
        (
            "oracle equivalence",
            Some(Duration::from_secs(30)),
            oracle_equivalence,
        ),
        (
            "Werner/symmetric benchmark",
            Some(Duration::from_secs(1)),
            werner_benchmark,
        ),
        (
            "(2,2) reconstruction",
            Some(Duration::from_secs(5)),
            reconstruction_two_two,
        ),
        (
            "(3,1) reconstruction",
            Some(Duration::from_secs(10)),
            reconstruction_three_one,
        ),
        (
            "membership suite",
            Some(Duration::from_secs(60)),
            membership_suite,
        ),
        ("realification", None, realification),
        (
            "affinity and permutation covariance",
            None,
            affinity_and_symmetry,
        ),
        ("(2,2) affine-hull constant", None, plane_constant),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let slow = limit.is_some_and(|l| elapsed > l);
        let budget = limit.map_or(String::new(), |l| format!(" < {:.0} s", l.as_secs_f64()));
        let (pass, detail) = match outcome {
            Ok(d) if !slow => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(d) => (false, d),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} #{:<2} {name} [{:.2} s{budget}]: {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
