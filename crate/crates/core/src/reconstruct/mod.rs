//! Irrep states with prescribed fidelity relations.
//!
//! Every fidelity is a quadratic form on the unit sphere,
//! `F_k = ½(1 − ψᵀV_kψ)`, so "maximize `c·F` subject to `A F = b`" becomes
//! "maximize `ψᵀCψ` subject to `ψᵀG_iψ = 0`, `|ψ| = 1`". It is solved by a
//! quadratic-penalty ramp with projected-gradient inner loops, followed by
//! Newton's method on the KKT system.

mod constraint;

pub use constraint::{ConstraintSpec, LinearRelation};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fidelity::{
    singlet_to_cloning, FidelityMap, FidelityPoint, MixedIrrepState, PureIrrepState,
};
use crate::region::{coordinate_symmetry_check, SupportEvaluator};
use crate::sgroup::{Partition, Permutation};

/// Constraint residual required of reported solutions.
pub const SOLUTION_RESIDUAL: f64 = 1e-8;
/// Residual floor above which the constraints are declared infeasible.
pub const INFEASIBLE_RESIDUAL: f64 = 1e-4;
/// Tuples closer than this (max-norm) are one solution.
pub const DEDUPE_TOLERANCE: f64 = 1e-6;

const PENALTY_STAGES: usize = 5;
const PENALTY_START: f64 = 10.0;
const INNER_ITERATIONS: usize = 300;
const NEWTON_ITERATIONS: usize = 60;

/// One distinct optimum.
#[derive(Debug, Clone, Serialize)]
pub struct Solution {
    /// Representative amplitudes, sign-normalized so the largest entry is positive.
    pub amplitudes: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub objective: f64,
    pub residual: f64,
    /// Distinct amplitude vectors (up to global sign) found for this tuple.
    pub sign_family: Vec<Vec<f64>>,
    /// Restarts that ended here.
    pub hits: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionResult {
    pub lambda: Partition,
    pub spec: ConstraintSpec,
    /// Sorted by decreasing objective.
    pub solutions: Vec<Solution>,
    pub restarts: usize,
    pub seed: u64,
    /// Smallest constraint residual over all restarts.
    pub best_residual: f64,
}

impl ReconstructionResult {
    pub fn best(&self) -> &Solution {
        &self.solutions[0]
    }
}

struct Problem {
    objective: DMatrix<f64>,
    constraints: Vec<DMatrix<f64>>,
}

impl Problem {
    /// Absorbs constants using `ψᵀψ = 1`: `c·F = ψᵀ(½Σcₖ I − ½Σcₖ Vₖ)ψ`.
    fn new(map: &FidelityMap, spec: &ConstraintSpec) -> Problem {
        let d = map.dim();
        let form = |c: &[f64], shift: f64| {
            let mut m = DMatrix::<f64>::identity(d, d) * (0.5 * c.iter().sum::<f64>() - shift);
            for (ck, v) in c.iter().zip(map.transpositions()) {
                m -= v * (0.5 * ck);
            }
            m
        };
        let objective = spec
            .objective
            .as_ref()
            .map_or_else(|| DMatrix::zeros(d, d), |c| form(c, 0.0));
        let constraints = spec
            .relations
            .iter()
            .map(|r| form(&r.coefficients, r.rhs))
            .collect();
        Problem {
            objective,
            constraints,
        }
    }

    fn penalized(&self, psi: &DVector<f64>, mu: f64) -> (f64, DVector<f64>) {
        let cpsi = &self.objective * psi;
        let mut value = psi.dot(&cpsi);
        let mut grad = cpsi * 2.0;
        for g in &self.constraints {
            let gpsi = g * psi;
            let c = psi.dot(&gpsi);
            value -= mu * c * c;
            grad -= gpsi * (4.0 * mu * c);
        }
        (value, grad)
    }

    fn residual(&self, psi: &DVector<f64>) -> f64 {
        self.constraints
            .iter()
            .map(|g| psi.dot(&(g * psi)).abs())
            .fold(0.0, f64::max)
    }

    fn ascend(&self, mut psi: DVector<f64>, mu: f64) -> DVector<f64> {
        let (mut value, mut grad) = self.penalized(&psi, mu);
        let mut step = 0.1 / (1.0 + mu);
        for _ in 0..INNER_ITERATIONS {
            let tangent = &grad - &psi * grad.dot(&psi);
            if tangent.norm() < 1e-12 {
                break;
            }
            let mut moved = false;
            while step > 1e-16 {
                let trial = (&psi + &tangent * step).normalize();
                let (tv, tg) = self.penalized(&trial, mu);
                if tv > value {
                    moved = tv - value > 1e-16;
                    psi = trial;
                    value = tv;
                    grad = tg;
                    step *= 2.0;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        psi
    }

    /// Newton's method on `(C − Σνᵢ Gᵢ − θI)ψ = 0`, `ψᵀGᵢψ = 0`, `ψᵀψ = 1`,
    /// keeping the iterate with the smallest KKT residual.
    fn polish(&self, psi: DVector<f64>) -> DVector<f64> {
        let d = psi.len();
        let m = self.constraints.len();
        // Multipliers by least squares on the stationarity equation.
        let mut basis = DMatrix::<f64>::zeros(d, m + 1);
        for (i, g) in self.constraints.iter().enumerate() {
            basis.set_column(i, &(g * &psi));
        }
        basis.set_column(m, &psi);
        let target = &self.objective * &psi;
        let Ok(mult) = basis.clone().svd(true, true).solve(&target, 1e-14) else {
            return psi;
        };

        let mut x = DVector::<f64>::zeros(d + m + 1);
        x.rows_mut(0, d).copy_from(&psi);
        x.rows_mut(d, m + 1).copy_from(&mult);
        let kkt = |x: &DVector<f64>| -> (DVector<f64>, DMatrix<f64>) {
            let psi = x.rows(0, d).into_owned();
            let theta = x[d + m];
            let mut h = &self.objective - DMatrix::<f64>::identity(d, d) * theta;
            for (i, g) in self.constraints.iter().enumerate() {
                h -= g * x[d + i];
            }
            let mut r = DVector::<f64>::zeros(d + m + 1);
            let mut jac = DMatrix::<f64>::zeros(d + m + 1, d + m + 1);
            r.rows_mut(0, d).copy_from(&(&h * &psi));
            jac.view_mut((0, 0), (d, d)).copy_from(&h);
            for (i, g) in self.constraints.iter().enumerate() {
                let gpsi = g * &psi;
                r[d + i] = -0.5 * psi.dot(&gpsi);
                jac.view_mut((0, d + i), (d, 1)).copy_from(&(-&gpsi));
                jac.view_mut((d + i, 0), (1, d))
                    .copy_from(&(-gpsi.transpose()));
            }
            r[d + m] = -0.5 * (psi.dot(&psi) - 1.0);
            jac.view_mut((0, d + m), (d, 1)).copy_from(&(-&psi));
            jac.view_mut((d + m, 0), (1, d))
                .copy_from(&(-psi.transpose()));
            (r, jac)
        };
        let (mut r, mut jac) = kkt(&x);
        let mut best = (r.norm(), x.clone());
        for _ in 0..NEWTON_ITERATIONS {
            if best.0 < 1e-15 {
                break;
            }
            let Some(delta) = jac.clone().lu().solve(&(-&r)) else {
                break;
            };
            x += delta;
            (r, jac) = kkt(&x);
            let norm = r.norm();
            if !norm.is_finite() {
                break;
            }
            if norm < best.0 {
                best = (norm, x.clone());
            }
        }
        best.1.rows(0, d).into_owned().normalize()
    }

    fn solve_from(&self, start: DVector<f64>) -> DVector<f64> {
        let mut psi = start;
        if self.constraints.is_empty() {
            psi = self.ascend(psi, 0.0);
        } else {
            let mut mu = PENALTY_START;
            for _ in 0..PENALTY_STAGES {
                psi = self.ascend(psi, mu);
                mu *= 10.0;
            }
        }
        let polished = self.polish(psi.clone());
        // Keep the polished point unless Newton wandered to a worse place.
        if self.residual(&polished) <= self.residual(&psi).max(SOLUTION_RESIDUAL) {
            polished
        } else {
            psi
        }
    }
}

fn sign_normalized(v: &[f64]) -> Vec<f64> {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(0.0);
    if pivot < 0.0 {
        v.iter().map(|x| -x).collect()
    } else {
        v.to_vec()
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Multi-start search for states on `lambda` that satisfy the relations of
/// `spec` and maximize its objective. Restarts run in parallel from streams
/// of one seeded generator; results do not depend on the thread count.
pub fn maximize_on_sphere(
    lambda: &Partition,
    spec: &ConstraintSpec,
    seed: u64,
    restarts: usize,
) -> Result<ReconstructionResult> {
    if !lambda.is_qubit_allowed() {
        return Err(Error::UnsupportedPartition(format!(
            "{lambda} has more than two rows"
        )));
    }
    if spec.len() != lambda.n() - 1 {
        return invalid(format!(
            "constraints are written for n = {}, partition has n = {}",
            spec.len() + 1,
            lambda.n()
        ));
    }
    if restarts == 0 {
        return invalid("need at least one restart");
    }
    let map = FidelityMap::new(lambda);
    let problem = Problem::new(&map, spec);
    let d = map.dim();

    let finals: Vec<DVector<f64>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let start = loop {
                let v = DVector::<f64>::from_fn(d, |_, _| StandardNormal.sample(&mut rng));
                if v.norm() > 1e-8 {
                    break v.normalize();
                }
            };
            problem.solve_from(start)
        })
        .collect();

    let mut candidates: Vec<(Vec<f64>, Vec<f64>, f64, f64)> = finals
        .iter()
        .map(|psi| {
            let amps: Vec<f64> = psi.iter().copied().collect();
            let f = map.evaluate(&amps);
            let residual = spec.residual(&f);
            let objective = spec.objective_value(&f);
            (amps, f, objective, residual)
        })
        .collect();
    let best_residual = candidates.iter().map(|c| c.3).fold(f64::INFINITY, f64::min);
    candidates.retain(|c| c.3 <= SOLUTION_RESIDUAL);
    if candidates.is_empty() {
        return Err(Error::Infeasible {
            residual: best_residual,
        });
    }
    candidates.sort_by(|a, b| b.2.total_cmp(&a.2));

    let mut solutions: Vec<Solution> = Vec::new();
    for (amps, f, objective, residual) in candidates {
        let canon = sign_normalized(&amps);
        match solutions
            .iter_mut()
            .find(|s| max_diff(&s.fidelities, &f) <= DEDUPE_TOLERANCE)
        {
            Some(s) => {
                s.hits += 1;
                if !s
                    .sign_family
                    .iter()
                    .any(|v| max_diff(v, &canon) <= DEDUPE_TOLERANCE)
                {
                    s.sign_family.push(canon);
                }
            }
            None => solutions.push(Solution {
                amplitudes: canon.clone(),
                fidelities: f,
                objective,
                residual,
                sign_family: vec![canon],
                hits: 1,
            }),
        }
    }
    Ok(ReconstructionResult {
        lambda: lambda.clone(),
        spec: spec.clone(),
        solutions,
        restarts,
        seed,
        best_residual,
    })
}

/// The rank-one (2,2) state with first fidelity `F₁`:
/// `[[1 − F₁, ±√(F₁(1 − F₁))], [±√(F₁(1 − F₁)), F₁]]`.
pub fn state_from_f1(lambda: &Partition, f1: f64, positive: bool) -> Result<MixedIrrepState> {
    if lambda.parts() != [2, 2] {
        return Err(Error::UnsupportedPartition(format!(
            "state_from_f1 is defined for (2,2), got {lambda}"
        )));
    }
    if !(0.0..=1.0).contains(&f1) {
        return invalid(format!("F1 = {f1} outside [0, 1]"));
    }
    let off = (f1 * (1.0 - f1)).sqrt() * if positive { 1.0 } else { -1.0 };
    MixedIrrepState::new(
        lambda.clone(),
        DMatrix::from_row_slice(2, 2, &[1.0 - f1, off, off, f1]),
    )
}

/// Largest `t` with `(t, …, t)` in the region, and a mixture attaining it.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetricOptimum {
    pub n: usize,
    pub singlet_fraction: f64,
    pub cloning_fidelity: f64,
    pub lambda: Partition,
    /// Equal-weight mixture of the cyclic shifts of the support witness.
    pub components: Vec<PureIrrepState>,
    /// Fidelity tuple of the mixture.
    pub point: FidelityPoint,
}

impl SymmetricOptimum {
    pub fn mixture(&self) -> Result<MixedIrrepState> {
        let states: Vec<MixedIrrepState> = self.components.iter().map(|s| s.density()).collect();
        let w = 1.0 / states.len() as f64;
        let parts: Vec<(f64, &MixedIrrepState)> = states.iter().map(|s| (w, s)).collect();
        MixedIrrepState::mixture(&parts)
    }
}

/// `t = h(1, …, 1)/(n − 1)`: the witness of the support function along the
/// all-ones direction, averaged over the cyclic shifts of qubits `2..=n`,
/// has every fidelity equal to `t`.
pub fn symmetric_optimum(n: usize) -> Result<SymmetricOptimum> {
    let support = SupportEvaluator::new(n)?.evaluate(&vec![1.0; n - 1])?;
    let t = support.value / (n - 1) as f64;
    let cycle: Vec<usize> = (2..=n).collect();
    let shift = if n > 2 {
        Permutation::from_cycles(n, &[&cycle])?
    } else {
        Permutation::identity(n)
    };
    let mut components = vec![support.witness.clone()];
    let mut sigma = shift.clone();
    for _ in 1..(n - 1) {
        components.push(coordinate_symmetry_check(&support.witness, &sigma)?);
        sigma = sigma.compose(&shift);
    }
    let map = FidelityMap::new(&support.lambda);
    let mut values = vec![0.0; n - 1];
    for c in &components {
        for (acc, f) in values.iter_mut().zip(map.evaluate(c.amplitudes())) {
            *acc += f / components.len() as f64;
        }
    }
    Ok(SymmetricOptimum {
        n,
        singlet_fraction: t,
        cloning_fidelity: singlet_to_cloning(t.clamp(0.0, 1.0))?.f,
        lambda: support.lambda.clone(),
        components,
        point: FidelityPoint::tagged(values, support.lambda),
    })
}

#[cfg(test)]
mod tests;
