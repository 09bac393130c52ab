//! Young's orthogonal form: real orthogonal matrices for the irreps of S_n on
//! the standard-tableau basis.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use super::partition::Partition;
use super::tableau::{index_by_word, standard_tableaux, StandardTableau};
use crate::error::{invalid, Result};
use crate::linalg::symmetrize;

/// A permutation of `1..=n` in one-line notation: `images[i] = σ(i + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return invalid(format!("{images:?} is not a permutation of 1..={n}"));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// The transposition exchanging `j` and `k`.
    pub fn transposition(n: usize, j: usize, k: usize) -> Result<Self> {
        if j == 0 || k == 0 || j > n || k > n || j == k {
            return invalid(format!("transposition ({j} {k}) invalid for n = {n}"));
        }
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(j - 1, k - 1);
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[2, 3, 4]]` for 2→3→4→2.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        for cycle in cycles {
            for (i, &from) in cycle.iter().enumerate() {
                let to = cycle[(i + 1) % cycle.len()];
                if from == 0 || from > n || to == 0 || to > n {
                    return invalid(format!("cycle {cycle:?} out of range for n = {n}"));
                }
                images[from - 1] = to;
            }
        }
        Permutation::new(images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `σ(x)` for 1-based `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1]
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.apply(x)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x - 1] = i + 1;
        }
        Permutation { images }
    }

    /// Word `[i₁, …, i_m]` with `σ = s_{i₁} s_{i₂} ⋯ s_{i_m}` where `s_i = (i i+1)`.
    pub fn adjacent_word(&self) -> Vec<usize> {
        // bubble sort: σ ∘ s_{a₁} ∘ ⋯ ∘ s_{a_m} = id, hence σ = s_{a_m} ⋯ s_{a₁}
        let mut w = self.images.clone();
        let mut applied = Vec::new();
        while let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
            w.swap(i, i + 1);
            applied.push(i + 1);
        }
        applied.reverse();
        applied
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", body.join(" "))
    }
}

/// Matrix of the transposition `(j k)` in the irrep `lambda`.
#[derive(Debug, Clone, Serialize)]
pub struct TranspositionRep {
    pub lambda: Partition,
    pub pair: (usize, usize),
    #[serde(serialize_with = "crate::serialize_matrix")]
    pub matrix: DMatrix<f64>,
}

/// An irrep of S_n in Young's orthogonal form, with the adjacent generators
/// `s_1, …, s_{n-1}` precomputed.
#[derive(Debug, Clone)]
pub struct Irrep {
    lambda: Partition,
    tableaux: Vec<StandardTableau>,
    generators: Vec<DMatrix<f64>>,
}

impl Irrep {
    pub fn new(lambda: &Partition) -> Self {
        let tableaux = standard_tableaux(lambda);
        let index = index_by_word(&tableaux);
        let d = tableaux.len();
        let n = lambda.n();
        let generators = (1..n)
            .map(|i| {
                let mut m = DMatrix::<f64>::zeros(d, d);
                for (a, t) in tableaux.iter().enumerate() {
                    let axial = (t.content(i + 1) - t.content(i)) as f64;
                    m[(a, a)] = 1.0 / axial;
                    if let Some(swapped) = t.swap_adjacent(i) {
                        let b = index[&swapped.row_word()];
                        m[(a, b)] = (1.0 - 1.0 / (axial * axial)).sqrt();
                    }
                }
                m
            })
            .collect();
        Irrep {
            lambda: lambda.clone(),
            tableaux,
            generators,
        }
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn n(&self) -> usize {
        self.lambda.n()
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn tableaux(&self) -> &[StandardTableau] {
        &self.tableaux
    }

    /// `s_i = (i i+1)`, `1 ≤ i ≤ n-1`.
    pub fn adjacent(&self, i: usize) -> Result<&DMatrix<f64>> {
        if i == 0 || i >= self.n() {
            return invalid(format!("adjacent index {i} out of range 1..{}", self.n()));
        }
        Ok(&self.generators[i - 1])
    }

    /// `(j k)` as `s_{k-1} ⋯ s_{j+1} s_j s_{j+1} ⋯ s_{k-1}`.
    pub fn transposition(&self, j: usize, k: usize) -> Result<DMatrix<f64>> {
        let n = self.n();
        if !(1 <= j && j < k && k <= n) {
            return invalid(format!("need 1 <= j < k <= {n}, got ({j},{k})"));
        }
        let mut m = self.generators[j - 1].clone();
        for step in (j + 1)..k {
            let s = &self.generators[step - 1];
            m = symmetrize(&(s * &m * s));
        }
        Ok(m)
    }

    pub fn permutation(&self, sigma: &Permutation) -> Result<DMatrix<f64>> {
        if sigma.n() != self.n() {
            return invalid(format!(
                "permutation acts on {} points, irrep on {}",
                sigma.n(),
                self.n()
            ));
        }
        let d = self.dim();
        Ok(sigma
            .adjacent_word()
            .iter()
            .fold(DMatrix::identity(d, d), |acc, &i| {
                acc * &self.generators[i - 1]
            }))
    }

    /// `[V_(12), V_(13), …, V_(1n)]`.
    pub fn transpositions_from_first(&self) -> Vec<DMatrix<f64>> {
        (2..=self.n())
            .map(|k| self.transposition(1, k).expect("k in range"))
            .collect()
    }
}

pub fn adjacent_transposition_rep(lambda: &Partition, i: usize) -> Result<TranspositionRep> {
    let irrep = Irrep::new(lambda);
    let matrix = irrep.adjacent(i)?.clone();
    Ok(TranspositionRep {
        lambda: lambda.clone(),
        pair: (i, i + 1),
        matrix,
    })
}

pub fn transposition_rep(lambda: &Partition, j: usize, k: usize) -> Result<TranspositionRep> {
    let matrix = Irrep::new(lambda).transposition(j, k)?;
    Ok(TranspositionRep {
        lambda: lambda.clone(),
        pair: (j, k),
        matrix,
    })
}

pub fn permutation_rep(lambda: &Partition, sigma: &Permutation) -> Result<DMatrix<f64>> {
    Irrep::new(lambda).permutation(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{jacobi_eigen, max_abs_diff};

    fn shape(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn id(d: usize) -> DMatrix<f64> {
        DMatrix::identity(d, d)
    }

    #[test]
    fn trivial_and_sign() {
        let m = adjacent_transposition_rep(&shape(&[4]), 2).unwrap().matrix;
        assert_eq!(m, DMatrix::from_element(1, 1, 1.0));
        let m = adjacent_transposition_rep(&shape(&[1, 1]), 1)
            .unwrap()
            .matrix;
        assert_eq!(m, DMatrix::from_element(1, 1, -1.0));
    }

    #[test]
    fn square_first_generator_is_diagonal() {
        let m = adjacent_transposition_rep(&shape(&[2, 2]), 1)
            .unwrap()
            .matrix;
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
    }

    #[test]
    fn out_of_range_indices() {
        assert!(adjacent_transposition_rep(&shape(&[3, 1]), 0).is_err());
        assert!(adjacent_transposition_rep(&shape(&[3, 1]), 4).is_err());
        assert!(transposition_rep(&shape(&[3, 1]), 2, 2).is_err());
        assert!(transposition_rep(&shape(&[3, 1]), 3, 5).is_err());
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
    }

    #[test]
    fn transposition_one_four_on_square() {
        let m = transposition_rep(&shape(&[2, 2]), 1, 4).unwrap().matrix;
        let h = 3f64.sqrt() / 2.0;
        let expected = DMatrix::from_row_slice(2, 2, &[-0.5, h, h, 0.5]);
        assert!(max_abs_diff(&m, &expected) < 1e-12);
    }

    #[test]
    fn transposition_one_five_on_four_one() {
        let m = transposition_rep(&shape(&[4, 1]), 1, 5).unwrap().matrix;
        assert!((m[(0, 0)] + 0.25).abs() < 1e-12);
    }

    #[test]
    fn braid_and_involution() {
        for parts in [&[3, 1][..], &[2, 2], &[3, 2], &[4, 2], &[3, 3], &[2, 1, 1]] {
            let irrep = Irrep::new(&shape(parts));
            let d = irrep.dim();
            let n = irrep.n();
            for i in 1..n {
                let s = irrep.adjacent(i).unwrap();
                assert!(max_abs_diff(&(s * s), &id(d)) < 1e-12);
                if i + 1 < n {
                    let t = irrep.adjacent(i + 1).unwrap();
                    assert!(max_abs_diff(&(s * t * s), &(t * s * t)) < 1e-12);
                }
                for j in (i + 2)..n {
                    let t = irrep.adjacent(j).unwrap();
                    assert!(max_abs_diff(&(s * t), &(t * s)) < 1e-12);
                }
            }
            for j in 1..=n {
                for k in (j + 1)..=n {
                    let v = irrep.transposition(j, k).unwrap();
                    assert_eq!(v, v.transpose());
                    assert!(max_abs_diff(&(&v * &v), &id(d)) < 1e-12);
                    let e = jacobi_eigen(&v);
                    assert!(e.values.iter().all(|x| (x.abs() - 1.0).abs() < 1e-12));
                }
            }
        }
    }

    #[test]
    fn trace_constant_over_transpositions() {
        for parts in [&[3, 1][..], &[3, 2], &[4, 2]] {
            let irrep = Irrep::new(&shape(parts));
            let t0 = irrep.transposition(1, 2).unwrap().trace();
            for j in 1..=irrep.n() {
                for k in (j + 1)..=irrep.n() {
                    assert!((irrep.transposition(j, k).unwrap().trace() - t0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn permutation_rep_consistency() {
        let irrep = Irrep::new(&shape(&[3, 1]));
        assert_eq!(irrep.permutation(&Permutation::identity(4)).unwrap(), id(3));
        let swap = Permutation::transposition(4, 1, 2).unwrap();
        assert!(
            max_abs_diff(
                &irrep.permutation(&swap).unwrap(),
                &irrep.transposition(1, 2).unwrap()
            ) < 1e-15
        );
        let cycle = Permutation::from_cycles(4, &[&[2, 3, 4]]).unwrap();
        let m = irrep.permutation(&cycle).unwrap();
        assert!((m.determinant() - 1.0).abs() < 1e-12);
        assert!(max_abs_diff(&(&m * &m * &m), &id(3)) < 1e-12);
    }

    #[test]
    fn homomorphism_and_conjugation() {
        let irrep = Irrep::new(&shape(&[3, 2]));
        let a = Permutation::new(vec![3, 1, 5, 2, 4]).unwrap();
        let b = Permutation::new(vec![2, 5, 4, 3, 1]).unwrap();
        let ra = irrep.permutation(&a).unwrap();
        let rb = irrep.permutation(&b).unwrap();
        let rab = irrep.permutation(&a.compose(&b)).unwrap();
        assert!(max_abs_diff(&(&ra * &rb), &rab) < 1e-12);
        for j in 1..=5 {
            for k in (j + 1)..=5 {
                let lhs = &ra * irrep.transposition(j, k).unwrap() * ra.transpose();
                let (x, y) = (a.apply(j), a.apply(k));
                let rhs = irrep.transposition(x.min(y), x.max(y)).unwrap();
                assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn adjacent_word_reproduces_permutation() {
        let sigma = Permutation::new(vec![4, 2, 5, 1, 3]).unwrap();
        let rebuilt = sigma
            .adjacent_word()
            .iter()
            .fold(Permutation::identity(5), |acc, &i| {
                acc.compose(&Permutation::transposition(5, i, i + 1).unwrap())
            });
        assert_eq!(rebuilt, sigma);
    }
}
