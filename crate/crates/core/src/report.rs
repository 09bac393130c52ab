//! One document bundling the checks for a given number of qubits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fidelity::{
    closed_form_audit, closed_form_fidelities, corrected_closed_form_fidelities, fidelity_tuple,
    werner_fidelity, ComponentAudit, PureIrrepState,
};
use crate::reconstruct::{maximize_on_sphere, symmetric_optimum, ConstraintSpec, Solution};
use crate::region::{affine_plane_fit, sample_region};
use crate::sgroup::{align_with_published, qubit_partitions, Partition};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub seed: u64,
    /// Sample size of the (2,2) cloud used for the plane fit.
    pub plane_samples: usize,
    pub restarts: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            seed: 7,
            plane_samples: 2000,
            restarts: 64,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionEntry {
    pub lambda: Partition,
    pub dimension: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixComparison {
    pub lambda: Partition,
    pub all_matched: bool,
    /// Per `k = 2..=n`.
    pub matched: Vec<bool>,
    pub errors: Vec<f64>,
    pub asymmetric: Vec<usize>,
    pub signed_permutation: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpotCheck {
    pub lambda: Partition,
    pub amplitudes: Vec<f64>,
    pub matrix_route: Vec<f64>,
    pub printed: Vec<f64>,
    pub corrected: Vec<f64>,
    pub printed_error: f64,
    pub corrected_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetricSummary {
    pub singlet_fraction: f64,
    pub cloning_fidelity: f64,
    pub lambda: Partition,
    pub werner_fidelity: f64,
    pub werner_agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaneSummary {
    pub lambda: Partition,
    pub samples: usize,
    pub seed: u64,
    pub normal: Vec<f64>,
    pub offset: f64,
    /// Constant `c` of `F₁₂ + … = c` after scaling the first coefficient to one.
    pub coefficients: Option<Vec<f64>>,
    pub constant: Option<f64>,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionSummary {
    pub lambda: Partition,
    pub objective: String,
    pub relations: Vec<String>,
    pub best: Option<Solution>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub n: usize,
    pub seed: u64,
    pub partitions: Vec<PartitionEntry>,
    pub dimension_sum: usize,
    pub hilbert_dimension: usize,
    pub published_matrices: Vec<MatrixComparison>,
    pub closed_form_audit: Vec<ComponentAudit>,
    pub closed_form_spot_checks: Vec<SpotCheck>,
    pub symmetric_optimum: SymmetricSummary,
    pub plane: Option<PlaneSummary>,
    pub reconstruction: Vec<ReconstructionSummary>,
}

pub fn report(n: usize) -> Result<Report> {
    report_with(n, &ReportOptions::default())
}

pub fn report_with(n: usize, options: &ReportOptions) -> Result<Report> {
    if !(3..=5).contains(&n) {
        return Err(Error::UnsupportedSize(n));
    }
    let lambdas = qubit_partitions(n)?;
    let partitions: Vec<PartitionEntry> = lambdas
        .iter()
        .map(|l| PartitionEntry {
            lambda: l.clone(),
            dimension: l.dimension(),
            multiplicity: l.qubit_multiplicity(),
        })
        .collect();
    let dimension_sum = partitions
        .iter()
        .map(|p| p.dimension * p.multiplicity)
        .sum();

    let mut published_matrices = Vec::new();
    let mut audit = Vec::new();
    let mut spot_checks = Vec::new();
    for lambda in &lambdas {
        if let Some(al) = align_with_published(lambda, 1e-12) {
            published_matrices.push(MatrixComparison {
                lambda: lambda.clone(),
                all_matched: al.all_matched(),
                matched: al.matched(),
                errors: al.errors.clone(),
                asymmetric: al.asymmetric.clone(),
                signed_permutation: al
                    .permutation
                    .perm
                    .iter()
                    .zip(&al.permutation.signs)
                    .map(|(&p, &s)| s as i64 * (p as i64 + 1))
                    .collect(),
            });
        }
        if let Ok(rows) = closed_form_audit(lambda, 1e-12) {
            audit.extend(rows);
            let d = lambda.dimension();
            let raw: Vec<f64> = (1..=d).map(|i| 1.0 / i as f64).collect();
            let state = PureIrrepState::normalized(lambda.clone(), raw)?;
            let matrix_route = fidelity_tuple(&state).values;
            let printed = closed_form_fidelities(lambda, state.amplitudes())?.values;
            let corrected = corrected_closed_form_fidelities(lambda, state.amplitudes())?.values;
            let err = |v: &[f64]| {
                v.iter()
                    .zip(&matrix_route)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            };
            spot_checks.push(SpotCheck {
                lambda: lambda.clone(),
                amplitudes: state.amplitudes().to_vec(),
                printed_error: err(&printed),
                corrected_error: err(&corrected),
                matrix_route,
                printed,
                corrected,
            });
        }
    }

    let opt = symmetric_optimum(n)?;
    let werner = werner_fidelity(1, n - 1, 2)?;
    let symmetric = SymmetricSummary {
        singlet_fraction: opt.singlet_fraction,
        cloning_fidelity: opt.cloning_fidelity,
        lambda: opt.lambda.clone(),
        werner_fidelity: werner,
        werner_agrees: (opt.cloning_fidelity - werner).abs() <= 1e-9,
    };

    let mut plane = None;
    let mut reconstruction = Vec::new();
    if n == 4 {
        let two_two: Partition = "2,2".parse()?;
        let sample = sample_region(4, options.plane_samples, options.seed)?;
        let cloud: Vec<Vec<f64>> = sample
            .cloud(&two_two)
            .expect("(2,2) is a partition of 4")
            .points
            .iter()
            .map(|p| p.fidelities.clone())
            .collect();
        let fit = affine_plane_fit(&cloud)?;
        let scaled = fit.with_unit_first_coefficient();
        plane = Some(PlaneSummary {
            lambda: two_two,
            samples: cloud.len(),
            seed: options.seed,
            coefficients: scaled.as_ref().map(|s| s.0.clone()),
            constant: scaled.map(|s| s.1),
            normal: fit.normal,
            offset: fit.offset,
            max_residual: fit.max_residual,
        });

        let objective = "F1";
        let relations = ["F1+F3=2F2"];
        let spec = ConstraintSpec::parse(4, Some(objective), &relations)?;
        for lambda in lambdas.iter().filter(|l| l.dimension() > 1) {
            let (best, error) =
                match maximize_on_sphere(lambda, &spec, options.seed, options.restarts) {
                    Ok(r) => (Some(r.best().clone()), None),
                    Err(e) => (None, Some(e.to_string())),
                };
            reconstruction.push(ReconstructionSummary {
                lambda: lambda.clone(),
                objective: objective.into(),
                relations: relations.iter().map(|s| s.to_string()).collect(),
                best,
                error,
            });
        }
    }

    Ok(Report {
        schema: SCHEMA_VERSION,
        n,
        seed: options.seed,
        partitions,
        dimension_sum,
        hilbert_dimension: 1 << n,
        published_matrices,
        closed_form_audit: audit,
        closed_form_spot_checks: spot_checks,
        symmetric_optimum: symmetric,
        plane,
        reconstruction,
    })
}
