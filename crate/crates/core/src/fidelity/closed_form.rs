//! Hand-expanded polynomial fidelities for the small irreps.
//!
//! Two tables live here. [`closed_form_fidelities`] reproduces the widely
//! circulated expansions term by term, including their known slips, so they
//! can be audited. [`corrected_closed_form_fidelities`] is the same table
//! expanded again from the orthogonal-form matrices. Neither depends on the
//! matrix machinery, which makes them an independent check of it.

use nalgebra::DMatrix;
use serde::Serialize;

use super::FidelityPoint;
use crate::error::{Error, Result};
use crate::linalg::max_abs_diff;
use crate::sgroup::{align_with_published, Irrep, Partition};

fn unsupported(lambda: &Partition) -> Error {
    Error::UnsupportedPartition(format!("no closed form for {lambda}"))
}

fn check_len(lambda: &Partition, a: &[f64]) -> Result<()> {
    let d = lambda.dimension();
    if a.len() != d {
        return Err(Error::InvalidState(format!(
            "{lambda} has dimension {d}, got {} amplitudes",
            a.len()
        )));
    }
    Ok(())
}

/// Fidelities from the circulated expansions, verbatim.
///
/// Available for (2,2), (3,1), (4,1) and (3,2). Some components are known to
/// disagree with the matrix route; see [`closed_form_audit`].
pub fn closed_form_fidelities(lambda: &Partition, a: &[f64]) -> Result<FidelityPoint> {
    check_len(lambda, a)?;
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    let values = match lambda.parts() {
        [2, 2] => {
            let (a1, a2) = (a[0], a[1]);
            vec![
                0.5 * (1.0 - a1 * a1 + a2 * a2),
                0.5 * (1.0 + a1 * a1 / 2.0 - a2 * a2 / 2.0 + s3 * a1 * a2),
                0.5 * (1.0 + a1 * a1 / 2.0 - a2 * a2 / 2.0 - s3 * a1 * a2),
            ]
        }
        [3, 1] => {
            let (a1, a2, a3) = (a[0], a[1], a[2]);
            vec![
                0.5 * (1.0 - a1 * a1 + a2 * a2 + a3 * a3),
                0.5 * (1.0 + a1 * a1 / 2.0 - a2 * a2 / 2.0 + a3 * a3 + s3 * a1 * a2),
                0.5 * (1.0 + a1 * a1 / 2.0 + 5.0 * a2 * a2 / 6.0 - a3 * a3 / 3.0
                    + a1 * a2 / s3
                    + 2.0 * s2 * a2 * a3 / 3.0
                    - 2.0 * (2.0f64 / 3.0).sqrt() * a1 * a3),
            ]
        }
        [4, 1] => {
            let (a1, a2, a3, a4) = (a[0], a[1], a[2], a[3]);
            vec![
                0.5 * (1.0 - a1 * a1 - a2 * a2 - a3 * a3 + a4 * a4),
                0.5 * (1.0 - a1 * a1 - a2 * a2 + a3 * a3 / 2.0 + s3 * a3 * a4 - a4 * a4 / 2.0),
                0.5 * (1.0 - a1 * a1 + a2 * a2 / 3.0 + 2.0 * s2 * a2 * a3 / 3.0
                    - 5.0 * a3 * a3 / 6.0
                    + 2.0 * (2.0f64 / 3.0).sqrt() * a2 * a4
                    + a3 * a4 / s3
                    - a4 * a4 / 2.0),
                0.5 * (1.0 + a1 * a1 / 4.0 + 0.5 * (5.0f64 / 3.0).sqrt() * a1 * a2
                    - 11.0 * a2 * a2 / 12.0
                    + (5.0f64 / 6.0).sqrt() * a1 * a3
                    + a2 * a3 / (3.0 * s2)
                    - 5.0 * a3 * a3 / 6.0
                    + (5.0f64 / 6.0).sqrt() * a1 * a4
                    + a2 * a4 / 6f64.sqrt()
                    + a3 * a4 / s3
                    - a4 * a4 / 2.0),
            ]
        }
        [3, 2] => {
            let (a1, a2, a3, a4, a5) = (a[0], a[1], a[2], a[3], a[4]);
            vec![
                0.5 * (1.0 - a1 * a1 - a2 * a2 - a3 * a3 - a4 * a4 + a5 * a5),
                0.5 * (1.0 - a1 * a1 + a2 * a2 / 2.0 + s3 * a2 * a3 - a3 * a3 / 2.0
                    + a4 * a4 / 2.0
                    + s3 * a4 * a5
                    - a5 * a5 / 2.0),
                fourteen_32(a),
                fifteen_32(a),
            ]
        }
        _ => return Err(unsupported(lambda)),
    };
    Ok(FidelityPoint::tagged(values, lambda.clone()))
}

fn fourteen_32(a: &[f64]) -> f64 {
    let (a1, a2, a3, a4, a5) = (a[0], a[1], a[2], a[3], a[4]);
    let s3 = 3f64.sqrt();
    0.5 * (1.0 + a1 * a1 / 3.0 + 2.0 * 2f64.sqrt() * a1 * a2 / 3.0 - 5.0 * a2 * a2 / 6.0
        + 2.0 * (2.0f64 / 3.0).sqrt() * a1 * a3
        + a2 * a3 / s3
        - a3 * a3 / 2.0
        + a4 * a4 / 2.0
        - s3 * a4 * a5
        - a5 * a5 / 2.0)
}

// The circulated text has a stray "−+" before the a2a5 term; it is read as "−".
fn fifteen_32(a: &[f64]) -> f64 {
    let (a1, a2, a3, a4, a5) = (a[0], a[1], a[2], a[3], a[4]);
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    let r23 = (2.0f64 / 3.0).sqrt();
    0.5 * (1.0 + a1 * a1 / 3.0 - s2 * a1 * a2 / 3.0 + a2 * a2 / 6.0
        - r23 * a1 * a3
        - 2.0 * a2 * a3 / s3
        - a3 * a3 / 2.0
        + r23 * a1 * a4
        + 2.0 * a2 * a4 / s3
        - a3 * a4
        - a4 * a4 / 2.0
        + s2 * a1 * a5
        - a2 * a5
        - a5 * a5 / 2.0)
}

/// Fidelities expanded from the orthogonal-form matrices in last-letter
/// tableau order. Agrees with the matrix route to rounding.
pub fn corrected_closed_form_fidelities(lambda: &Partition, a: &[f64]) -> Result<FidelityPoint> {
    check_len(lambda, a)?;
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    let r23 = (2.0f64 / 3.0).sqrt();
    let values = match lambda.parts() {
        [2, 2] => return closed_form_fidelities(lambda, a),
        [3, 1] => {
            let (a1, a2, a3) = (a[0], a[1], a[2]);
            vec![
                0.5 * (1.0 - a1 * a1 - a2 * a2 + a3 * a3),
                0.5 * (1.0 - a1 * a1 + a2 * a2 / 2.0 - a3 * a3 / 2.0 + s3 * a2 * a3),
                0.5 * (1.0 + a1 * a1 / 3.0 - 5.0 * a2 * a2 / 6.0 - a3 * a3 / 2.0
                    + 2.0 * s2 * a1 * a2 / 3.0
                    + 2.0 * r23 * a1 * a3
                    + a2 * a3 / s3),
            ]
        }
        [4, 1] => {
            let mut values = closed_form_fidelities(lambda, a)?.values;
            let (a1, a2, a3, a4) = (a[0], a[1], a[2], a[3]);
            values[3] = 0.5
                * (1.0 + a1 * a1 / 4.0 + 0.5 * (5.0f64 / 3.0).sqrt() * a1 * a2
                    - 11.0 * a2 * a2 / 12.0
                    + (5.0f64 / 6.0).sqrt() * a1 * a3
                    + a2 * a3 / (3.0 * s2)
                    - 5.0 * a3 * a3 / 6.0
                    + (5.0f64 / 2.0).sqrt() * a1 * a4
                    + a2 * a4 / 6f64.sqrt()
                    + a3 * a4 / s3
                    - a4 * a4 / 2.0);
            values
        }
        [3, 2] => {
            let mut values = closed_form_fidelities(lambda, a)?.values;
            let (a1, a2, a3, a4, a5) = (a[0], a[1], a[2], a[3], a[4]);
            values[0] = 0.5 * (1.0 - a1 * a1 - a2 * a2 + a3 * a3 - a4 * a4 + a5 * a5);
            values
        }
        _ => return Err(unsupported(lambda)),
    };
    Ok(FidelityPoint::tagged(values, lambda.clone()))
}

/// Agreement of one printed component `F_1k` with the matrix route.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentAudit {
    pub lambda: Partition,
    pub k: usize,
    pub agrees: bool,
    /// Largest entry difference between the quadratic form recovered from the
    /// printed polynomial and `V_(1k)`.
    pub max_coefficient_error: f64,
}

/// Recovers the symmetric matrix `W` with `F = ½(1 − aᵀWa)` from each printed
/// component by polarization on unit vectors and compares it with the
/// generated `V_(1k)`.
pub fn closed_form_audit(lambda: &Partition, tolerance: f64) -> Result<Vec<ComponentAudit>> {
    let d = lambda.dimension();
    closed_form_fidelities(lambda, &vec![0.0; d])?;
    let irrep = Irrep::new(lambda);
    let alignment = align_with_published(lambda, tolerance);
    let eval = |a: &[f64]| -> Vec<f64> {
        closed_form_fidelities(lambda, a)
            .expect("supported partition")
            .values
    };
    let basis = |i: usize| {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        e
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let diag: Vec<Vec<f64>> = (0..d).map(|i| eval(&basis(i))).collect();
    let mut out = Vec::new();
    for (slot, v) in irrep.transpositions_from_first().iter().enumerate() {
        let mut w = DMatrix::zeros(d, d);
        for i in 0..d {
            w[(i, i)] = 1.0 - 2.0 * diag[i][slot];
        }
        for i in 0..d {
            for j in (i + 1)..d {
                let mut u = vec![0.0; d];
                u[i] = h;
                u[j] = h;
                let quad = 1.0 - 2.0 * eval(&u)[slot];
                let off = quad - 0.5 * (w[(i, i)] + w[(j, j)]);
                w[(i, j)] = off;
                w[(j, i)] = off;
            }
        }
        let reference = match &alignment {
            Some(al) => al.permutation.conjugate(v),
            None => v.clone(),
        };
        let err = max_abs_diff(&w, &reference);
        out.push(ComponentAudit {
            lambda: lambda.clone(),
            k: slot + 2,
            agrees: err <= tolerance,
            max_coefficient_error: err,
        });
    }
    Ok(out)
}
