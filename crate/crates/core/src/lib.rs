//! Admissible regions of singlet-fraction tuples `(F₁₂, …, F₁ₙ)` for 1→N
//! universal qubit cloning machines.
//!
//! The region is the convex hull, over the two-row irreps λ of S_n, of the
//! sets `{ ½(1 − ⟨ψ|V^λ_(1k)|ψ⟩) }_k` traced out by real unit vectors ψ. The
//! crate builds the irreps in Young's orthogonal form ([`sgroup`]), maps irrep
//! states to fidelity tuples ([`fidelity`]), interrogates the region through
//! its exact support function ([`region`]), solves the inverse problems of
//! prescribing fidelity relations ([`reconstruct`]) and checks everything
//! against a brute-force computation in the full `2ⁿ`-dimensional space
//! ([`oracle`]).
//!
//! ```
//! use cloneregion::region::SupportEvaluator;
//!
//! let support = SupportEvaluator::new(4).unwrap();
//! let best = support.evaluate(&[1.0, 1.0, 1.0]).unwrap();
//! assert!((best.value - 2.0).abs() < 1e-9);
//! ```

pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod oracle;
pub mod reconstruct;
pub mod region;
pub mod report;
pub mod sgroup;

pub use error::{Error, Result};
pub use fidelity::{CloningFidelity, FidelityPoint, MixedIrrepState, PureIrrepState};
pub use region::{ConvexHull3, RegionSample, SupportEvaluator, Verdict};
pub use sgroup::{Irrep, Partition, Permutation, StandardTableau, TranspositionRep};

use nalgebra::DMatrix;
use serde::ser::{SerializeSeq, Serializer};

/// Serializes a matrix as a row-major array of rows.
pub fn serialize_matrix<S: Serializer>(
    m: &DMatrix<f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for row in m.row_iter() {
        let r: Vec<f64> = row.iter().copied().collect();
        seq.serialize_element(&r)?;
    }
    seq.end()
}

/// Row-major nested vectors.
pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}
