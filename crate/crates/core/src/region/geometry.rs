use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fidelity::PureIrrepState;
use crate::linalg::jacobi_eigen;
use crate::sgroup::{Irrep, Permutation};

/// `ψ′ = ρ(σ)ᵀψ` for σ fixing qubit 1. Then `F′₁ₖ = F₁,σ(k)`, because
/// `ρ(σ)V_(1k)ρ(σ)ᵀ = V_(σ(1)σ(k))`.
pub fn coordinate_symmetry_check(
    state: &PureIrrepState,
    sigma: &Permutation,
) -> Result<PureIrrepState> {
    let lambda = state.lambda();
    if sigma.n() != lambda.n() {
        return invalid(format!(
            "permutation acts on {} points, state on {}",
            sigma.n(),
            lambda.n()
        ));
    }
    if sigma.apply(1) != 1 {
        return invalid(format!("{sigma} moves qubit 1"));
    }
    let rep = Irrep::new(lambda).permutation(sigma)?;
    let moved = rep.transpose() * state.vector();
    PureIrrepState::normalized(lambda.clone(), moved.iter().copied().collect())
}

/// `σ`-permuted tuple: entry `k − 2` holds `F₁,σ(k)`.
pub fn permute_tuple(values: &[f64], sigma: &Permutation) -> Vec<f64> {
    (2..=values.len() + 1)
        .map(|k| values[sigma.apply(k) - 2])
        .collect()
}

/// Least-squares hyperplane `normal·x = offset` through a point cloud.
#[derive(Debug, Clone, Serialize)]
pub struct PlaneFit {
    /// Unit normal, signed so that its component sum is nonnegative.
    pub normal: Vec<f64>,
    pub offset: f64,
    /// Largest `|normal·x − offset|` over the cloud.
    pub max_residual: f64,
    /// Second-smallest covariance eigenvalue; near zero means the cloud is
    /// not even two-dimensionally spread.
    pub spread: f64,
}

impl PlaneFit {
    /// `(normal, offset)` rescaled so that the first coefficient is one.
    pub fn with_unit_first_coefficient(&self) -> Option<(Vec<f64>, f64)> {
        let a = self.normal[0];
        (a.abs() > 1e-12).then(|| (self.normal.iter().map(|x| x / a).collect(), self.offset / a))
    }
}

pub fn affine_plane_fit(points: &[Vec<f64>]) -> Result<PlaneFit> {
    let Some(first) = points.first() else {
        return Err(Error::DegenerateInput("empty point cloud".into()));
    };
    let m = first.len();
    if m < 2 || points.len() < m || points.iter().any(|p| p.len() != m) {
        return Err(Error::DegenerateInput(format!(
            "need at least {m} points of equal length >= 2"
        )));
    }
    let count = points.len() as f64;
    let mean: Vec<f64> = (0..m)
        .map(|k| points.iter().map(|p| p[k]).sum::<f64>() / count)
        .collect();
    let mut cov = DMatrix::<f64>::zeros(m, m);
    for p in points {
        for i in 0..m {
            for j in 0..m {
                cov[(i, j)] += (p[i] - mean[i]) * (p[j] - mean[j]) / count;
            }
        }
    }
    let eig = jacobi_eigen(&cov);
    let mut normal: Vec<f64> = eig.vectors.column(0).iter().copied().collect();
    if normal.iter().sum::<f64>() < 0.0 {
        normal.iter_mut().for_each(|x| *x = -*x);
    }
    let offset: f64 = normal.iter().zip(&mean).map(|(a, b)| a * b).sum();
    let max_residual = points
        .iter()
        .map(|p| (normal.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() - offset).abs())
        .fold(0.0, f64::max);
    Ok(PlaneFit {
        normal,
        offset,
        max_residual,
        spread: eig.values[1],
    })
}
