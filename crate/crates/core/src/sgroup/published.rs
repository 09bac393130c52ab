//! Transposition matrices `V_(1k)` for the qubit irreps of S4 and S5 as they
//! are tabulated in the cloning literature (Thomas' tables), transcribed
//! entry for entry, misprints included. The alignment search below compares
//! them against the generated orthogonal form.

use nalgebra::DMatrix;
use serde::Serialize;

use super::orthogonal::Irrep;
use super::partition::Partition;
use crate::linalg::max_abs_diff;

/// Tabulated `[V_(12), V_(13), …, V_(1n)]` for `lambda`, if one exists.
pub fn published_transpositions(lambda: &Partition) -> Option<Vec<DMatrix<f64>>> {
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    let h = s3 / 2.0;
    let m = |d: usize, rows: &[f64]| DMatrix::from_row_slice(d, d, rows);
    match lambda.parts() {
        [3, 1] => Some(vec![
            m(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0]),
            m(3, &[1.0, 0.0, 0.0, 0.0, -0.5, -h, 0.0, -h, 0.5]),
            m(
                3,
                &[
                    -1.0 / 3.0,
                    -s2 / 3.0,
                    -s6 / 3.0,
                    -s2 / 3.0,
                    5.0 / 6.0,
                    -s3 / 6.0,
                    -s6 / 3.0,
                    -s3 / 6.0,
                    0.5,
                ],
            ),
        ]),
        [2, 2] => Some(vec![
            m(2, &[1.0, 0.0, 0.0, -1.0]),
            m(2, &[-0.5, -h, -h, 0.5]),
            m(2, &[-0.5, h, h, 0.5]),
        ]),
        [4, 1] => {
            let r23 = (2.0f64 / 3.0).sqrt();
            Some(vec![
                m(
                    4,
                    &[
                        1.0, 0.0, 0.0, 0.0, //
                        0.0, 1.0, 0.0, 0.0, //
                        0.0, 0.0, 1.0, 0.0, //
                        0.0, 0.0, 0.0, -1.0,
                    ],
                ),
                m(
                    4,
                    &[
                        1.0, 0.0, 0.0, 0.0, //
                        0.0, 1.0, 0.0, 0.0, //
                        0.0, 0.0, -0.5, -h, //
                        0.0, 0.0, -h, 0.5,
                    ],
                ),
                m(
                    4,
                    &[
                        1.0,
                        0.0,
                        0.0,
                        0.0,
                        0.0,
                        -1.0 / 3.0,
                        -s2 / 3.0,
                        -r23,
                        0.0,
                        -s2 / 3.0,
                        5.0 / 6.0,
                        -1.0 / (2.0 * s3),
                        0.0,
                        -r23,
                        -1.0 / (2.0 * s3),
                        0.5,
                    ],
                ),
                m(
                    4,
                    &[
                        -0.25,
                        -0.25 * (5.0f64 / 3.0).sqrt(),
                        -0.5 * (5.0f64 / 6.0).sqrt(),
                        -0.5 * (5.0f64 / 2.0).sqrt(),
                        -0.25 * (5.0f64 / 3.0).sqrt(),
                        11.0 / 12.0,
                        -1.0 / (6.0 * s2),
                        -1.0 / (2.0 * s6),
                        -0.5 * (5.0f64 / 6.0).sqrt(),
                        -1.0 / (6.0 * s2),
                        5.0 / 6.0,
                        -1.0 / (2.0 * s3),
                        -0.5 * (5.0f64 / 2.0).sqrt(),
                        -1.0 / (2.0 * s6),
                        -1.0 / (2.0 * s3),
                        0.5,
                    ],
                ),
            ])
        }
        [3, 2] => {
            let r23 = (2.0f64 / 3.0).sqrt();
            Some(vec![
                // misprint: trace 3, the (3,2) character of a transposition is 1
                m(
                    5,
                    &[
                        1.0, 0.0, 0.0, 0.0, 0.0, //
                        0.0, 1.0, 0.0, 0.0, 0.0, //
                        0.0, 0.0, 1.0, 0.0, 0.0, //
                        0.0, 0.0, 0.0, 1.0, 0.0, //
                        0.0, 0.0, 0.0, 0.0, -1.0,
                    ],
                ),
                // misprint: the lower 2x2 block is not symmetric
                m(
                    5,
                    &[
                        1.0, 0.0, 0.0, 0.0, 0.0, //
                        0.0, -0.5, -h, 0.0, 0.0, //
                        0.0, -h, 0.5, 0.0, 0.0, //
                        0.0, 0.0, 0.0, -0.5, h, //
                        0.0, 0.0, 0.0, -h, 0.5,
                    ],
                ),
                m(
                    5,
                    &[
                        -1.0 / 3.0,
                        -s2 / 3.0,
                        -r23,
                        0.0,
                        0.0,
                        -s2 / 3.0,
                        5.0 / 6.0,
                        -1.0 / (2.0 * s3),
                        0.0,
                        0.0,
                        -r23,
                        -1.0 / (2.0 * s3),
                        0.5,
                        0.0,
                        0.0,
                        0.0,
                        0.0,
                        0.0,
                        -0.5,
                        h,
                        0.0,
                        0.0,
                        0.0,
                        h,
                        0.5,
                    ],
                ),
                m(
                    5,
                    &[
                        -1.0 / 3.0,
                        1.0 / (3.0 * s2),
                        1.0 / s6,
                        -1.0 / s6,
                        -1.0 / s2,
                        1.0 / (3.0 * s2),
                        -1.0 / 6.0,
                        1.0 / s3,
                        -1.0 / s3,
                        0.5,
                        1.0 / s6,
                        1.0 / s3,
                        0.5,
                        0.5,
                        0.0,
                        -1.0 / s6,
                        -1.0 / s3,
                        0.5,
                        0.5,
                        0.0,
                        -1.0 / s2,
                        0.5,
                        0.0,
                        0.0,
                        0.5,
                    ],
                ),
            ])
        }
        _ => None,
    }
}

/// A signed permutation matrix `S = D·P`, stored as `perm[i]` (row `i` has its
/// nonzero in column `perm[i]`) and `signs[i]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<f64>,
}

impl SignedPermutation {
    pub fn identity(d: usize) -> Self {
        SignedPermutation {
            perm: (0..d).collect(),
            signs: vec![1.0; d],
        }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let d = self.perm.len();
        let mut s = DMatrix::zeros(d, d);
        for (i, (&j, &sign)) in self.perm.iter().zip(&self.signs).enumerate() {
            s[(i, j)] = sign;
        }
        s
    }

    /// `S·M·Sᵀ` evaluated without floating-point products.
    pub fn conjugate(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let d = self.perm.len();
        DMatrix::from_fn(d, d, |i, j| {
            self.signs[i] * self.signs[j] * m[(self.perm[i], self.perm[j])]
        })
    }
}

/// Result of matching generated matrices to a published table under one
/// common signed permutation.
#[derive(Debug, Clone, Serialize)]
pub struct Alignment {
    pub lambda: Partition,
    /// Best signed permutation found (largest number of matched matrices,
    /// then smallest worst-case error).
    pub permutation: SignedPermutation,
    /// Per published matrix `V_(1k)`, `k = 2..=n`: max entry error under `permutation`.
    pub errors: Vec<f64>,
    /// Indices `k` whose published matrix is not symmetric.
    pub asymmetric: Vec<usize>,
    pub tolerance: f64,
}

impl Alignment {
    pub fn matched(&self) -> Vec<bool> {
        self.errors.iter().map(|&e| e <= self.tolerance).collect()
    }

    pub fn all_matched(&self) -> bool {
        self.errors.iter().all(|&e| e <= self.tolerance)
    }

    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    fn rec(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(items, k + 1, out);
            items.swap(k, i);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..d).collect(), 0, &mut out);
    out
}

/// Exhaustive search over signed permutations `S` (first sign fixed to `+`,
/// since `S` and `-S` act identically) for `S·M_k·Sᵀ = P_k`.
pub fn align_signed_permutation(
    lambda: &Partition,
    generated: &[DMatrix<f64>],
    published: &[DMatrix<f64>],
    tolerance: f64,
) -> Alignment {
    assert_eq!(generated.len(), published.len());
    let d = generated.first().map_or(0, DMatrix::nrows);
    let mut best: Option<(usize, f64, SignedPermutation, Vec<f64>)> = None;
    for perm in permutations(d) {
        for mask in 0..(1usize << d.saturating_sub(1)) {
            let signs: Vec<f64> = (0..d)
                .map(|i| {
                    if i > 0 && mask >> (i - 1) & 1 == 1 {
                        -1.0
                    } else {
                        1.0
                    }
                })
                .collect();
            let s = SignedPermutation {
                perm: perm.clone(),
                signs,
            };
            let errors: Vec<f64> = generated
                .iter()
                .zip(published)
                .map(|(g, p)| max_abs_diff(&s.conjugate(g), p))
                .collect();
            let matched = errors.iter().filter(|&&e| e <= tolerance).count();
            let worst = errors.iter().copied().fold(0.0, f64::max);
            let better = match &best {
                None => true,
                Some((bm, bw, _, _)) => matched > *bm || (matched == *bm && worst < *bw),
            };
            if better {
                best = Some((matched, worst, s, errors));
            }
        }
    }
    let (_, _, permutation, errors) =
        best.unwrap_or((0, 0.0, SignedPermutation::identity(0), vec![]));
    let asymmetric = published
        .iter()
        .enumerate()
        .filter(|(_, p)| max_abs_diff(p, &p.transpose()) > tolerance)
        .map(|(i, _)| i + 2)
        .collect();
    Alignment {
        lambda: lambda.clone(),
        permutation,
        errors,
        asymmetric,
        tolerance,
    }
}

/// Aligns the generated orthogonal form of `lambda` with its published table.
pub fn align_with_published(lambda: &Partition, tolerance: f64) -> Option<Alignment> {
    let published = published_transpositions(lambda)?;
    let generated = Irrep::new(lambda).transpositions_from_first();
    Some(align_signed_permutation(
        lambda, &generated, &published, tolerance,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn identity_alignment_for_consistent_tables() {
        for parts in [&[3, 1][..], &[2, 2], &[4, 1]] {
            let a = align_with_published(&shape(parts), 1e-12).unwrap();
            assert!(a.all_matched(), "{parts:?}: {:?}", a.errors);
            assert_eq!(
                a.permutation,
                SignedPermutation::identity(a.permutation.perm.len())
            );
        }
    }

    #[test]
    fn three_two_table_has_two_misprints() {
        let a = align_with_published(&shape(&[3, 2]), 1e-12).unwrap();
        assert_eq!(a.matched(), vec![false, false, true, true]);
        assert_eq!(a.asymmetric, vec![3]);
        assert_eq!(a.permutation, SignedPermutation::identity(5));
        // V_(12): one diagonal entry of the wrong sign
        assert!((a.errors[0] - 2.0).abs() < 1e-12);
        // V_(13): one off-diagonal sign
        assert!((a.errors[1] - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn recovers_planted_signed_permutation() {
        let lambda = shape(&[3, 1]);
        let generated = Irrep::new(&lambda).transpositions_from_first();
        let planted = SignedPermutation {
            perm: vec![2, 0, 1],
            signs: vec![1.0, -1.0, 1.0],
        };
        let target: Vec<_> = generated.iter().map(|g| planted.conjugate(g)).collect();
        let a = align_signed_permutation(&lambda, &generated, &target, 1e-12);
        assert!(a.all_matched());
        let s = a.permutation.matrix();
        for (g, t) in generated.iter().zip(&target) {
            assert!(max_abs_diff(&(&s * g * s.transpose()), t) < 1e-12);
        }
    }

    #[test]
    fn untabulated_partition() {
        assert!(published_transpositions(&shape(&[3, 3])).is_none());
    }
}
