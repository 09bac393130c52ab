//! Partitions, standard tableaux and Young's orthogonal form for the
//! qubit-allowed (at most two-row) irreps of the symmetric group.

mod orthogonal;
mod partition;
mod published;
mod tableau;

pub use orthogonal::{
    adjacent_transposition_rep, permutation_rep, transposition_rep, Irrep, Permutation,
    TranspositionRep,
};
pub use partition::{qubit_partitions, Partition};
pub use published::{
    align_signed_permutation, align_with_published, published_transpositions, Alignment,
    SignedPermutation,
};
pub use tableau::{standard_tableaux, StandardTableau};

/// Hook-length dimension of `lambda`.
pub fn dimension(lambda: &Partition) -> usize {
    lambda.dimension()
}
