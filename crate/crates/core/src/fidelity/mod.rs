//! Singlet fractions of irrep states and conversions to cloning fidelities.
//!
//! For a state ρ supported on the irrep λ the singlet fraction between
//! qubit 1 and qubit k is `½(1 − tr ρ V^λ_(1k))`. Production paths use real
//! amplitudes only; [`realify`] is the bridge from complex states.

mod closed_form;

pub use closed_form::{
    closed_form_audit, closed_form_fidelities, corrected_closed_form_fidelities, ComponentAudit,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{is_symmetric, jacobi_eigen};
use crate::sgroup::{Irrep, Partition};

/// Accepted deviation of a pure state's norm from one.
pub const NORM_TOLERANCE: f64 = 1e-9;
/// Accepted negative eigenvalue of a mixed state.
pub const PSD_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-12;

/// Real unit vector in the representation space of `lambda`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PureIrrepState {
    lambda: Partition,
    amplitudes: Vec<f64>,
}

impl PureIrrepState {
    /// Rejects vectors whose norm deviates from one by more than
    /// [`NORM_TOLERANCE`]; accepted vectors are renormalized.
    pub fn new(lambda: Partition, amplitudes: Vec<f64>) -> Result<Self> {
        let d = lambda.dimension();
        if amplitudes.len() != d {
            return Err(Error::InvalidState(format!(
                "{lambda} has dimension {d}, got {} amplitudes",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(PureIrrepState {
            lambda,
            amplitudes: amplitudes.iter().map(|a| a / norm).collect(),
        })
    }

    /// Scales any nonzero vector to unit length.
    pub fn normalized(lambda: Partition, amplitudes: Vec<f64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        PureIrrepState::new(lambda, amplitudes.iter().map(|a| a / norm).collect())
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.amplitudes)
    }

    pub fn negated(&self) -> Self {
        PureIrrepState {
            lambda: self.lambda.clone(),
            amplitudes: self.amplitudes.iter().map(|a| -a).collect(),
        }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> MixedIrrepState {
        let v = self.vector();
        MixedIrrepState {
            lambda: self.lambda.clone(),
            matrix: &v * v.transpose(),
        }
    }
}

/// Real symmetric, positive semidefinite, trace-one matrix on an irrep.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedIrrepState {
    lambda: Partition,
    matrix: DMatrix<f64>,
}

impl MixedIrrepState {
    pub fn new(lambda: Partition, matrix: DMatrix<f64>) -> Result<Self> {
        let d = lambda.dimension();
        if matrix.shape() != (d, d) {
            return Err(Error::InvalidState(format!(
                "{lambda} needs a {d}x{d} matrix, got {:?}",
                matrix.shape()
            )));
        }
        if !is_symmetric(&matrix, 1e-12) {
            return Err(Error::InvalidState("matrix is not symmetric".into()));
        }
        let trace = matrix.trace();
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace {trace} is not 1")));
        }
        let min_eig = jacobi_eigen(&matrix).min_value();
        if min_eig < -PSD_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (eigenvalue {min_eig:e})"
            )));
        }
        Ok(MixedIrrepState { lambda, matrix })
    }

    /// `I / d_λ`.
    pub fn maximally_mixed(lambda: Partition) -> Self {
        let d = lambda.dimension();
        MixedIrrepState {
            lambda,
            matrix: DMatrix::identity(d, d) / d as f64,
        }
    }

    /// `Σ wᵢ ρᵢ`; weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(f64, &MixedIrrepState)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return invalid("empty mixture");
        };
        if parts
            .iter()
            .any(|(w, s)| *w < 0.0 || s.lambda != first.lambda)
        {
            return invalid("mixture weights must be nonnegative over one irrep");
        }
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return invalid(format!("mixture weights sum to {total}"));
        }
        let d = first.matrix.nrows();
        let matrix = parts
            .iter()
            .fold(DMatrix::zeros(d, d), |acc, (w, s)| acc + &s.matrix * *w);
        MixedIrrepState::new(first.lambda.clone(), matrix)
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Tuple `(F₁₂, …, F₁ₙ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityPoint {
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<Partition>,
}

impl FidelityPoint {
    pub fn new(values: Vec<f64>) -> Self {
        FidelityPoint {
            values,
            lambda: None,
        }
    }

    pub fn tagged(values: Vec<f64>, lambda: Partition) -> Self {
        FidelityPoint {
            values,
            lambda: Some(lambda),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dot(&self, w: &[f64]) -> f64 {
        self.values.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs_diff(&self, other: &FidelityPoint) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Average transmission fidelity `f` of a d-dimensional channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CloningFidelity {
    pub f: f64,
    pub d: usize,
}

/// The fidelity map of one irrep, holding `V^λ_(1k)` for `k = 2..=n`.
#[derive(Debug, Clone)]
pub struct FidelityMap {
    lambda: Partition,
    transpositions: Vec<DMatrix<f64>>,
}

impl FidelityMap {
    pub fn new(lambda: &Partition) -> Self {
        FidelityMap {
            lambda: lambda.clone(),
            transpositions: Irrep::new(lambda).transpositions_from_first(),
        }
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.transpositions.first().map_or(1, DMatrix::nrows)
    }

    /// `[V_(12), …, V_(1n)]`.
    pub fn transpositions(&self) -> &[DMatrix<f64>] {
        &self.transpositions
    }

    /// Fidelities for raw unit amplitudes (no validation).
    pub fn evaluate(&self, amplitudes: &[f64]) -> Vec<f64> {
        self.transpositions
            .iter()
            .map(|v| 0.5 * (1.0 - quadratic_form(v, amplitudes)))
            .collect()
    }

    pub fn pure(&self, state: &PureIrrepState) -> Result<FidelityPoint> {
        self.check_lambda(state.lambda())?;
        Ok(FidelityPoint::tagged(
            self.evaluate(state.amplitudes()),
            self.lambda.clone(),
        ))
    }

    pub fn mixed(&self, state: &MixedIrrepState) -> Result<FidelityPoint> {
        self.check_lambda(state.lambda())?;
        let values = self
            .transpositions
            .iter()
            .map(|v| 0.5 * (1.0 - state.matrix.dot(v)))
            .collect();
        Ok(FidelityPoint::tagged(values, self.lambda.clone()))
    }

    fn check_lambda(&self, lambda: &Partition) -> Result<()> {
        if lambda != &self.lambda {
            return Err(Error::InvalidState(format!(
                "state lives on {lambda}, map on {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

pub(crate) fn quadratic_form(m: &DMatrix<f64>, x: &[f64]) -> f64 {
    let d = x.len();
    let mut acc = 0.0;
    for i in 0..d {
        let mut row = 0.0;
        for j in 0..d {
            row += m[(i, j)] * x[j];
        }
        acc += x[i] * row;
    }
    acc
}

/// `F^λ_(1k) = ½(1 − ψᵀ V^λ_(1k) ψ)` for `k = 2..=n`.
pub fn fidelity_tuple(state: &PureIrrepState) -> FidelityPoint {
    FidelityMap::new(state.lambda())
        .pure(state)
        .expect("map built for the state's own irrep")
}

/// `F^λ_(1k) = ½(1 − tr ρ V^λ_(1k))`.
pub fn fidelity_tuple_mixed(state: &MixedIrrepState) -> FidelityPoint {
    FidelityMap::new(state.lambda())
        .mixed(state)
        .expect("map built for the state's own irrep")
}

/// `f = (F d + 1) / (d + 1)` for qubits.
pub fn singlet_to_cloning(singlet: f64) -> Result<CloningFidelity> {
    singlet_to_cloning_d(singlet, 2)
}

pub fn singlet_to_cloning_d(singlet: f64, d: usize) -> Result<CloningFidelity> {
    if !(0.0..=1.0).contains(&singlet) {
        return invalid(format!("singlet fraction {singlet} outside [0, 1]"));
    }
    if d < 2 {
        return invalid(format!("dimension d = {d} < 2"));
    }
    let d_f = d as f64;
    Ok(CloningFidelity {
        f: (singlet * d_f + 1.0) / (d_f + 1.0),
        d,
    })
}

/// Inverse of [`singlet_to_cloning_d`]: `F = (f(d+1) − 1)/d`.
pub fn cloning_to_singlet(f: f64, d: usize) -> f64 {
    let d_f = d as f64;
    (f * (d_f + 1.0) - 1.0) / d_f
}

/// Optimal fidelity of the universal symmetric `N₁ → N₂` cloner in dimension `d`:
/// `N₁/N₂ + (N₂ − N₁)(N₁ + 1) / (N₂ (N₁ + d))`.
pub fn werner_fidelity(n1: usize, n2: usize, d: usize) -> Result<f64> {
    if n1 < 1 || n1 >= n2 {
        return invalid(format!("need 1 <= N1 < N2, got N1 = {n1}, N2 = {n2}"));
    }
    if d < 2 {
        return invalid(format!("dimension d = {d} < 2"));
    }
    let (n1, n2, d) = (n1 as f64, n2 as f64, d as f64);
    Ok(n1 / n2 + (n2 - n1) * (n1 + 1.0) / (n2 * (n1 + d)))
}

/// `Re(|ψ⟩⟨ψ|)` for a complex amplitude vector: a real symmetric PSD matrix
/// with the same trace against every real symmetric matrix.
pub fn realify(psi: &[Complex64]) -> DMatrix<f64> {
    let d = psi.len();
    DMatrix::from_fn(d, d, |i, j| (psi[i] * psi[j].conj()).re)
}

/// `⟨ψ|M|ψ⟩` for complex ψ and real symmetric M (real-valued).
pub fn complex_expectation(m: &DMatrix<f64>, psi: &[Complex64]) -> f64 {
    let d = psi.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += psi[i].conj() * m[(i, j)] * psi[j];
        }
    }
    acc.re
}
