//! Wolfe's minimum-norm-point method: the point of a convex hull closest to
//! the origin, grown one atom at a time.

use nalgebra::{DMatrix, DVector};

/// Affinely independent atoms with convex weights; `point()` is the
/// minimum-norm point of their hull once `settle` has run.
#[derive(Debug, Clone, Default)]
pub(crate) struct Corral {
    atoms: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Corral {
    pub(crate) fn new(atom: Vec<f64>) -> Self {
        Corral {
            atoms: vec![atom],
            weights: vec![1.0],
        }
    }

    pub(crate) fn point(&self) -> Vec<f64> {
        let m = self.atoms[0].len();
        let mut x = vec![0.0; m];
        for (a, w) in self.atoms.iter().zip(&self.weights) {
            for (xi, ai) in x.iter_mut().zip(a) {
                *xi += w * ai;
            }
        }
        x
    }

    pub(crate) fn len(&self) -> usize {
        self.atoms.len()
    }

    /// Adds an atom with weight zero and restores optimality over the hull.
    pub(crate) fn insert(&mut self, atom: Vec<f64>) {
        self.atoms.push(atom);
        self.weights.push(0.0);
        self.settle();
    }

    /// Minor cycles: move toward the affine minimizer of the corral, dropping
    /// atoms whose weight reaches zero on the way.
    fn settle(&mut self) {
        for _ in 0..(4 * self.atoms.len() + 8) {
            let Some(beta) = self.affine_minimizer() else {
                // Affinely dependent corral: keep the newest atoms that still
                // carry weight.
                self.drop_weightless();
                return;
            };
            if beta.iter().all(|&b| b > 1e-14) {
                self.weights = beta;
                return;
            }
            let mut theta = 1.0f64;
            for (&l, &b) in self.weights.iter().zip(&beta) {
                if b <= 1e-14 && l - b > 0.0 {
                    theta = theta.min(l / (l - b));
                }
            }
            for (l, b) in self.weights.iter_mut().zip(&beta) {
                *l = theta * b + (1.0 - theta) * *l;
            }
            self.drop_weightless();
        }
    }

    fn drop_weightless(&mut self) {
        let mut i = 0;
        while i < self.atoms.len() {
            if self.weights[i] <= 1e-15 && self.atoms.len() > 1 {
                self.atoms.remove(i);
                self.weights.remove(i);
            } else {
                i += 1;
            }
        }
        let total: f64 = self.weights.iter().sum();
        self.weights.iter_mut().for_each(|w| *w /= total);
    }

    /// `argmin |Σ βᵢ aᵢ|` subject to `Σ βᵢ = 1`.
    fn affine_minimizer(&self) -> Option<Vec<f64>> {
        let k = self.atoms.len();
        if k == 1 {
            return Some(vec![1.0]);
        }
        let mut sys = DMatrix::<f64>::zeros(k + 1, k + 1);
        for i in 0..k {
            for j in 0..k {
                sys[(i, j)] = dot(&self.atoms[i], &self.atoms[j]);
            }
            sys[(i, k)] = 1.0;
            sys[(k, i)] = 1.0;
        }
        let mut rhs = DVector::<f64>::zeros(k + 1);
        rhs[k] = 1.0;
        let sol = sys.lu().solve(&rhs)?;
        let beta: Vec<f64> = sol.iter().take(k).copied().collect();
        beta.iter().all(|b| b.is_finite()).then_some(beta)
    }
}

/// Minimum-norm point of the convex hull of `points`.
pub(crate) fn min_norm_point(points: &[Vec<f64>]) -> Vec<f64> {
    let start = points
        .iter()
        .min_by(|a, b| dot(a, a).total_cmp(&dot(b, b)))
        .expect("nonempty point set")
        .clone();
    let scale = points
        .iter()
        .map(|p| dot(p, p))
        .fold(0.0, f64::max)
        .max(1e-300);
    let mut corral = Corral::new(start);
    for _ in 0..(4 * points.len() + 8) {
        let x = corral.point();
        let xx = dot(&x, &x);
        let best = points
            .iter()
            .min_by(|a, b| dot(&x, a).total_cmp(&dot(&x, b)))
            .expect("nonempty");
        if xx - dot(&x, best) <= 1e-13 * scale {
            break;
        }
        corral.insert(best.clone());
    }
    corral.point()
}
