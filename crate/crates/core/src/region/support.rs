//! Exact support function of the fidelity region, and membership from a
//! projection onto the region plus multi-start ascent of the signed distance.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fidelity::{FidelityMap, FidelityPoint, PureIrrepState};
use crate::linalg::jacobi_eigen;
use crate::sgroup::{qubit_partitions, Partition};

use super::minnorm::{min_norm_point, Corral};

use nalgebra::DMatrix;

/// Largest `n` accepted by [`SupportEvaluator::new`]. The widest irrep at this
/// size has dimension 1430.
pub const MAX_SUPPORT_N: usize = 16;

/// `h(w) = max over states of w·F`, evaluated exactly as
/// `max_λ [ ½Σwₖ − ½ λ_min(Σ wₖ V^λ_(1k)) ]`.
#[derive(Debug, Clone)]
pub struct SupportEvaluator {
    n: usize,
    maps: Vec<FidelityMap>,
}

/// Support value together with the irrep and pure state that attain it.
#[derive(Debug, Clone, Serialize)]
pub struct SupportValue {
    pub value: f64,
    pub lambda: Partition,
    pub witness: PureIrrepState,
    /// `fidelity_tuple(witness)`.
    pub point: FidelityPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Inside,
    Boundary,
    Outside,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Inside => "inside",
            Verdict::Boundary => "boundary",
            Verdict::Outside => "outside",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Membership {
    pub verdict: Verdict,
    /// `max_{|w|=1} w·F − h(w)`: the signed distance from the region's boundary,
    /// positive outside.
    pub max_violation: f64,
    /// Unit direction attaining `max_violation`.
    pub direction: Vec<f64>,
    /// `direction` when the verdict is outside.
    pub separator: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy)]
pub struct MembershipOptions {
    pub tolerance: f64,
    /// Number of start directions: coordinate axes, ± all-ones, then random.
    pub starts: usize,
    /// Ascent steps spent on every start before ranking them.
    pub screen_iterations: usize,
    /// Number of best-ranked starts that are polished to convergence.
    pub polish: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        MembershipOptions {
            tolerance: 1e-7,
            starts: 64,
            screen_iterations: 3,
            polish: 4,
            max_iterations: 500,
            seed: 0x5eed,
        }
    }
}

struct Best {
    value: f64,
    map: usize,
    witness: Vec<f64>,
}

impl SupportEvaluator {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_SUPPORT_N {
            return invalid(format!("n = {n} exceeds {MAX_SUPPORT_N}"));
        }
        let maps = qubit_partitions(n)?.iter().map(FidelityMap::new).collect();
        Ok(SupportEvaluator { n, maps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Length of fidelity tuples, `n − 1`.
    pub fn dimension(&self) -> usize {
        self.n - 1
    }

    pub fn maps(&self) -> &[FidelityMap] {
        &self.maps
    }

    fn check_vector(&self, v: &[f64], what: &str) -> Result<()> {
        if v.len() != self.dimension() {
            return invalid(format!(
                "{what} has length {}, expected {}",
                v.len(),
                self.dimension()
            ));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return invalid(format!("{what} has non-finite entries"));
        }
        Ok(())
    }

    pub fn evaluate(&self, w: &[f64]) -> Result<SupportValue> {
        self.check_vector(w, "direction")?;
        if w.iter().all(|&x| x == 0.0) {
            return invalid("zero direction");
        }
        let best = self.best(w);
        let map = &self.maps[best.map];
        let witness = PureIrrepState::normalized(map.lambda().clone(), best.witness)?;
        let point = map.pure(&witness)?;
        Ok(SupportValue {
            value: best.value,
            lambda: map.lambda().clone(),
            witness,
            point,
        })
    }

    /// Support value alone.
    pub fn value(&self, w: &[f64]) -> Result<f64> {
        Ok(self.evaluate(w)?.value)
    }

    fn best(&self, w: &[f64]) -> Best {
        let half_sum = 0.5 * w.iter().sum::<f64>();
        let mut best: Option<Best> = None;
        for (idx, map) in self.maps.iter().enumerate() {
            let d = map.dim();
            let mut m = DMatrix::<f64>::zeros(d, d);
            for (wk, v) in w.iter().zip(map.transpositions()) {
                if *wk != 0.0 {
                    m.zip_apply(v, |a, b| *a += *wk * b);
                }
            }
            let eig = jacobi_eigen(&m);
            let value = half_sum - 0.5 * eig.min_value();
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(Best {
                    value,
                    map: idx,
                    witness: eig.vectors.column(0).iter().copied().collect(),
                });
            }
        }
        best.expect("at least two partitions")
    }

    /// `g(w) = w·F − h(w)` and the supergradient `F − F(witness)`.
    fn violation(&self, point: &[f64], w: &[f64]) -> (f64, Vec<f64>) {
        let best = self.best(w);
        let attained = self.maps[best.map].evaluate(&best.witness);
        let wf: f64 = w.iter().zip(point).map(|(a, b)| a * b).sum();
        let grad = point.iter().zip(&attained).map(|(f, a)| f - a).collect();
        (wf - best.value, grad)
    }

    /// Ascent of `g` on the unit sphere. It follows the tangent
    /// supergradient with a doubling/halving step until a step fails, then
    /// switches to gradient sampling: the direction is the minimum-norm
    /// combination of supergradients drawn from a neighbourhood whose radius
    /// shrinks whenever that direction stops paying off. This walks along the
    /// kinks of `g` instead of stalling on them.
    fn ascend(
        &self,
        point: &[f64],
        start: Vec<f64>,
        iterations: usize,
        target: f64,
        rng: &mut ChaCha8Rng,
    ) -> (f64, Vec<f64>) {
        let m = point.len();
        let mut w = start;
        let (mut g, mut grad) = self.violation(point, &w);
        let mut step = 0.5;
        let mut radius: Option<f64> = None;
        let mut checkpoint = g;
        for it in 0..iterations {
            if g >= target {
                break;
            }
            if it % 10 == 9 {
                if g - checkpoint <= 1e-13 * g.abs().max(1.0) {
                    break;
                }
                checkpoint = g;
            }
            let direction = match radius {
                None => tangent(&grad, &w),
                Some(r) => {
                    let mut bundle = vec![tangent(&grad, &w)];
                    for _ in 0..=m {
                        let jitter: Vec<f64> = (0..m).map(|_| StandardNormal.sample(rng)).collect();
                        let jt = tangent(&jitter, &w);
                        let jn = norm(&jt).max(1e-300);
                        let near = unit(w.iter().zip(&jt).map(|(a, j)| a + r * j / jn).collect());
                        bundle.push(tangent(&self.violation(point, &near).1, &w));
                    }
                    min_norm_point(&bundle)
                }
            };
            let dnorm = norm(&direction);
            let mut improved = false;
            if dnorm > 1e-14 {
                let mut s = match radius {
                    None => step,
                    Some(r) => (4.0 * r / dnorm).max(step),
                };
                // A failed search is the signal to refine, so keep it short.
                for _ in 0..8 {
                    if s * dnorm < 1e-15 {
                        break;
                    }
                    let trial = unit(w.iter().zip(&direction).map(|(a, t)| a + s * t).collect());
                    let (g_trial, grad_trial) = self.violation(point, &trial);
                    if g_trial > g {
                        w = trial;
                        g = g_trial;
                        grad = grad_trial;
                        step = (s * 2.0).min(8.0);
                        improved = true;
                        break;
                    }
                    s *= 0.25;
                }
            }
            if !improved {
                let r = radius.map_or(1e-3, |r| 0.1 * r);
                if r < 1e-11 {
                    break;
                }
                radius = Some(r);
                step = 1e-3;
            }
        }
        (g, w)
    }

    /// Minimum-norm-point iteration for the distance from `point` to the
    /// region. Returns an upper bound `|point − x|` with `x` in the region,
    /// the best lower bound `g(w)` seen and its direction.
    fn project(&self, point: &[f64], stop: f64, iterations: usize) -> (f64, f64, Vec<f64>) {
        let shift = |a: Vec<f64>| -> Vec<f64> { a.iter().zip(point).map(|(s, f)| s - f).collect() };
        let m = point.len();
        let first = self.best(&vec![1.0; m]);
        let mut corral = Corral::new(shift(self.maps[first.map].evaluate(&first.witness)));
        let (mut lower, mut lower_w) = (f64::NEG_INFINITY, Vec::new());
        let mut upper = f64::INFINITY;
        for _ in 0..iterations {
            let x = corral.point();
            let u = norm(&x);
            if u >= upper && corral.len() > m + 1 {
                break;
            }
            upper = upper.min(u);
            if upper <= stop {
                break;
            }
            let w: Vec<f64> = x.iter().map(|v| -v / u).collect();
            let best = self.best(&w);
            let wf: f64 = w.iter().zip(point).map(|(a, b)| a * b).sum();
            let g = wf - best.value;
            if g > lower {
                lower = g;
                lower_w = w;
            }
            if upper - lower <= 1e-12 {
                break;
            }
            corral.insert(shift(self.maps[best.map].evaluate(&best.witness)));
        }
        (upper, lower, lower_w)
    }

    fn start_directions(&self, options: &MembershipOptions) -> Vec<Vec<f64>> {
        let m = self.dimension();
        let mut starts = Vec::with_capacity(options.starts);
        for i in 0..m {
            for sign in [1.0, -1.0] {
                let mut e = vec![0.0; m];
                e[i] = sign;
                starts.push(e);
            }
        }
        let ones = 1.0 / (m as f64).sqrt();
        starts.push(vec![ones; m]);
        starts.push(vec![-ones; m]);
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        while starts.len() < options.starts {
            let v: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut rng)).collect();
            let nv = norm(&v);
            if nv > 1e-6 {
                starts.push(v.iter().map(|x| x / nv).collect());
            }
        }
        starts.truncate(options.starts.max(1));
        starts
    }

    /// Classifies `point` with the default options and the given tolerance.
    pub fn membership(&self, point: &[f64], tolerance: f64) -> Result<Membership> {
        self.membership_with(
            point,
            &MembershipOptions {
                tolerance,
                ..MembershipOptions::default()
            },
        )
    }

    /// Outside iff `max g > tol`, boundary iff `|max g| ≤ tol`, inside otherwise.
    ///
    /// A projection onto the region settles points that lie outside it; the
    /// multi-start ascent then measures how deep an admissible point sits.
    pub fn membership_with(
        &self,
        point: &[f64],
        options: &MembershipOptions,
    ) -> Result<Membership> {
        self.check_vector(point, "point")?;
        if options.tolerance.is_nan() || options.tolerance < 0.0 {
            return invalid("tolerance must be nonnegative");
        }
        let tol = options.tolerance;
        let (upper, lower, lower_w) =
            self.project(point, (0.1 * tol).max(1e-14), options.max_iterations);
        // Once the point is known to be within `tol` of the region, finding
        // any direction with g ≥ −tol settles the boundary verdict.
        let target = if upper <= tol { -tol } else { f64::INFINITY };
        let (max_violation, direction) = if lower > tol || lower >= target {
            (lower, lower_w)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ 0x9e37_79b9);
            let mut screened = Vec::with_capacity(options.starts + 1);
            for w in self.start_directions(options) {
                let r = self.ascend(point, w, options.screen_iterations, target, &mut rng);
                let done = r.0 >= target;
                screened.push(r);
                if done {
                    break;
                }
            }
            screened.sort_by(|a, b| b.0.total_cmp(&a.0));
            let mut best = (lower, lower_w);
            for (g, w) in screened.into_iter().take(options.polish.max(1)) {
                let r = if g >= target {
                    (g, w)
                } else {
                    self.ascend(point, w, options.max_iterations, target, &mut rng)
                };
                if r.0 > best.0 {
                    best = r;
                }
                if best.0 >= target {
                    break;
                }
            }
            best
        };
        let verdict = if max_violation > tol {
            Verdict::Outside
        } else if max_violation >= -tol {
            Verdict::Boundary
        } else {
            Verdict::Inside
        };
        Ok(Membership {
            verdict,
            max_violation,
            separator: (verdict == Verdict::Outside).then(|| direction.clone()),
            direction,
        })
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn unit(mut v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    v.iter_mut().for_each(|x| *x /= n);
    v
}

/// Component of `v` orthogonal to the unit vector `w`.
fn tangent(v: &[f64], w: &[f64]) -> Vec<f64> {
    let radial: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
    v.iter().zip(w).map(|(a, b)| a - radial * b).collect()
}
