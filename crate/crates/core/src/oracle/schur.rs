//! Coupled-spin (Schur) basis of `n` qubits by sequential spin-½ coupling.

use std::collections::HashMap;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::Serialize;

use super::{swap_permutation, DenseOperator};
use crate::error::{Error, Result};
use crate::linalg::max_abs_diff;
use crate::sgroup::{qubit_partitions, standard_tableaux, Irrep, Partition};

pub const MAX_SCHUR_N: usize = 8;

/// Label of one Schur basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisLabel {
    pub lambda: Partition,
    /// Multiplicity index `m`, total spin projection `M = J − m`.
    pub multiplicity: usize,
    /// Index of the coupling path, equal to the index of its standard tableau
    /// in the orthogonal-form basis (entry `k` in row 2 iff step `k` lowers the spin).
    pub path: usize,
}

/// Location of the λ block inside the Schur basis.
#[derive(Debug, Clone, Serialize)]
pub struct BlockInfo {
    pub lambda: Partition,
    pub offset: usize,
    pub dim: usize,
    pub multiplicity: usize,
}

/// Orthogonal `U` whose rows are the Schur basis vectors in the computational
/// basis (qubit 1 most significant, `|0⟩` = spin up).
///
/// Blocks are ordered by partition (longest first row first), then by
/// multiplicity index, then by path, so `U V Uᵀ` restricted to λ is
/// `I_r ⊗ B_λ`.
#[derive(Debug, Clone)]
pub struct SchurTransform {
    n: usize,
    unitary: DMatrix<f64>,
    labels: Vec<BasisLabel>,
    blocks: Vec<BlockInfo>,
    /// Per block, orthogonal `Q` with `Q B_λ(σ) Qᵀ = ρ_λ(σ)` in orthogonal form.
    intertwiners: Vec<DMatrix<f64>>,
}

type Memo = HashMap<(Vec<u8>, i32), Vec<f64>>;

/// `|J, M⟩` for a path of row choices (0 raises the spin, 1 lowers it),
/// `two_m = 2M`.
fn coupled_vector(path: &[u8], two_m: i32, memo: &mut Memo) -> Vec<f64> {
    if let Some(v) = memo.get(&(path.to_vec(), two_m)) {
        return v.clone();
    }
    let k = path.len();
    let out = if k == 1 {
        if two_m == 1 {
            vec![1.0, 0.0]
        } else {
            vec![0.0, 1.0]
        }
    } else {
        let prefix = &path[..k - 1];
        let two_j = prefix
            .iter()
            .map(|&r| if r == 0 { 1 } else { -1 })
            .sum::<i32>();
        let denom = 2.0 * (two_j + 1) as f64;
        let plus = ((two_j + two_m + 1) as f64 / denom).max(0.0).sqrt();
        let minus = ((two_j - two_m + 1) as f64 / denom).max(0.0).sqrt();
        // Clebsch-Gordan coefficients for j ⊗ ½, Condon-Shortley phases.
        let (up_coeff, down_coeff) = if path[k - 1] == 0 {
            (plus, minus)
        } else {
            (-minus, plus)
        };
        let mut v = vec![0.0; 1 << k];
        if up_coeff != 0.0 && (two_m - 1).abs() <= two_j {
            let low = coupled_vector(prefix, two_m - 1, memo);
            for (i, x) in low.iter().enumerate() {
                v[2 * i] += up_coeff * x;
            }
        }
        if down_coeff != 0.0 && (two_m + 1).abs() <= two_j {
            let low = coupled_vector(prefix, two_m + 1, memo);
            for (i, x) in low.iter().enumerate() {
                v[2 * i + 1] += down_coeff * x;
            }
        }
        v
    };
    memo.insert((path.to_vec(), two_m), out.clone());
    out
}

impl SchurTransform {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=MAX_SCHUR_N).contains(&n) {
            return Err(Error::UnsupportedSize(n));
        }
        let dim = 1usize << n;
        let mut unitary = DMatrix::<f64>::zeros(dim, dim);
        let mut labels = Vec::with_capacity(dim);
        let mut blocks = Vec::new();
        let mut memo = Memo::new();
        for lambda in qubit_partitions(n)? {
            let tableaux = standard_tableaux(&lambda);
            let r = lambda.qubit_multiplicity();
            let two_j = (lambda.parts()[0] - lambda.parts().get(1).copied().unwrap_or(0)) as i32;
            blocks.push(BlockInfo {
                lambda: lambda.clone(),
                offset: labels.len(),
                dim: tableaux.len(),
                multiplicity: r,
            });
            for m in 0..r {
                let two_m = two_j - 2 * m as i32;
                for (t, tab) in tableaux.iter().enumerate() {
                    let path: Vec<u8> = tab.row_word().iter().map(|&r| r as u8).collect();
                    let v = coupled_vector(&path, two_m, &mut memo);
                    let row = labels.len();
                    for (c, x) in v.iter().enumerate() {
                        unitary[(row, c)] = *x;
                    }
                    labels.push(BasisLabel {
                        lambda: lambda.clone(),
                        multiplicity: m,
                        path: t,
                    });
                }
            }
        }
        let mut transform = SchurTransform {
            n,
            unitary,
            labels,
            blocks,
            intertwiners: Vec::new(),
        };
        transform.intertwiners = transform
            .blocks
            .iter()
            .map(|b| transform.compute_intertwiner(b))
            .collect::<Result<_>>()?;
        Ok(transform)
    }

    /// Shared instance per `n`, built on first use.
    pub fn cached(n: usize) -> Result<&'static SchurTransform> {
        static CACHE: [OnceLock<SchurTransform>; MAX_SCHUR_N + 1] =
            [const { OnceLock::new() }; MAX_SCHUR_N + 1];
        if !(2..=MAX_SCHUR_N).contains(&n) {
            return Err(Error::UnsupportedSize(n));
        }
        if let Some(t) = CACHE[n].get() {
            return Ok(t);
        }
        let built = SchurTransform::new(n)?;
        Ok(CACHE[n].get_or_init(|| built))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn unitary(&self) -> &DMatrix<f64> {
        &self.unitary
    }

    pub fn unitary_complex(&self) -> DenseOperator {
        self.unitary.map(|x| x.into())
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn blocks(&self) -> &[BlockInfo] {
        &self.blocks
    }

    pub fn block_info(&self, lambda: &Partition) -> Result<&BlockInfo> {
        self.blocks
            .iter()
            .find(|b| &b.lambda == lambda)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("{lambda} is not a two-row partition of {}", self.n))
            })
    }

    pub fn intertwiner(&self, lambda: &Partition) -> Result<&DMatrix<f64>> {
        let idx = self
            .blocks
            .iter()
            .position(|b| &b.lambda == lambda)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("{lambda} is not a two-row partition of {}", self.n))
            })?;
        Ok(&self.intertwiners[idx])
    }

    /// `U A Uᵀ`.
    pub fn conjugate(&self, op: &DMatrix<f64>) -> DMatrix<f64> {
        &self.unitary * op * self.unitary.transpose()
    }

    /// Copy `m` of the λ block of an operator already in the Schur basis.
    pub fn block(
        &self,
        schur_op: &DMatrix<f64>,
        lambda: &Partition,
        m: usize,
    ) -> Result<DMatrix<f64>> {
        let b = self.block_info(lambda)?;
        if m >= b.multiplicity {
            return Err(Error::InvalidArgument(format!(
                "multiplicity index {m} >= {}",
                b.multiplicity
            )));
        }
        let start = b.offset + m * b.dim;
        Ok(schur_op.view((start, start), (b.dim, b.dim)).into_owned())
    }

    /// Largest entry of a Schur-basis operator outside the `d_λ × d_λ`
    /// diagonal blocks.
    pub fn off_block_leakage(&self, schur_op: &DMatrix<f64>) -> f64 {
        let owner: Vec<usize> = self
            .labels
            .iter()
            .scan((None::<(Partition, usize)>, usize::MAX), |state, l| {
                let key = (l.lambda.clone(), l.multiplicity);
                if state.0.as_ref() != Some(&key) {
                    state.0 = Some(key);
                    state.1 = state.1.wrapping_add(1);
                }
                Some(state.1)
            })
            .collect();
        let dim = self.unitary.nrows();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                if owner[i] != owner[j] {
                    worst = worst.max(schur_op[(i, j)].abs());
                }
            }
        }
        worst
    }

    /// Largest difference between the repeated copies of each λ block.
    pub fn block_repetition_error(&self, schur_op: &DMatrix<f64>) -> f64 {
        let mut worst = 0.0f64;
        for b in &self.blocks {
            let first = self.block(schur_op, &b.lambda, 0).expect("own block");
            for m in 1..b.multiplicity {
                let other = self.block(schur_op, &b.lambda, m).expect("own block");
                worst = worst.max(max_abs_diff(&first, &other));
            }
        }
        worst
    }

    /// Orthogonal intertwiner from the Schur block to the orthogonal form,
    /// the normalized kernel of `X ↦ Y_i X − X B_i` over all adjacent
    /// transpositions.
    fn compute_intertwiner(&self, info: &BlockInfo) -> Result<DMatrix<f64>> {
        let d = info.dim;
        let irrep = Irrep::new(&info.lambda);
        let mut gram = DMatrix::<f64>::zeros(d * d, d * d);
        for i in 1..self.n {
            let swap = swap_permutation(self.n, i, i + 1)?;
            let block = self.block(&self.conjugate(&swap), &info.lambda, 0)?;
            let y = irrep.adjacent(i)?;
            // vec(Y X − X B) = (I ⊗ Y − Bᵀ ⊗ I) vec(X), column-major vec.
            let ident = DMatrix::<f64>::identity(d, d);
            let op = ident.kronecker(y) - block.transpose().kronecker(&ident);
            gram += op.transpose() * &op;
        }
        let eig = nalgebra::SymmetricEigen::new(gram);
        let (idx, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        let x = DMatrix::from_column_slice(d, d, eig.eigenvectors.column(idx).as_slice());
        let scale = ((x.transpose() * &x).trace() / d as f64).sqrt();
        let q = x / scale;
        let ortho = max_abs_diff(&(q.transpose() * &q), &DMatrix::identity(d, d));
        if ortho > 1e-9 {
            return Err(Error::VerificationMismatch(format!(
                "no orthogonal intertwiner for {} (deviation {ortho:e})",
                info.lambda
            )));
        }
        Ok(q)
    }
}
