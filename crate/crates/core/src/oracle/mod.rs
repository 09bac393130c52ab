//! Brute-force checks in the full `2ⁿ`-dimensional space of `n` qubits.
//!
//! Basis index bit `n − q` holds qubit `q` (qubit 1 is the most significant
//! bit) and `|0⟩` is spin up.

mod schur;
mod verify;

pub use schur::{BasisLabel, BlockInfo, SchurTransform, MAX_SCHUR_N};
pub use verify::{verify, VerifyReport};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fidelity::PureIrrepState;
use crate::sgroup::Partition;

pub type DenseOperator = DMatrix<Complex64>;

pub const MAX_SWAP_N: usize = 12;

/// Disagreement between the two singlet-fraction routes that is treated as a
/// failure.
pub const ROUTE_TOLERANCE: f64 = 1e-10;

fn bit(index: usize, n: usize, q: usize) -> usize {
    (index >> (n - q)) & 1
}

/// Index with the bits of qubits `j` and `k` exchanged.
fn swapped_index(index: usize, n: usize, j: usize, k: usize) -> usize {
    let (bj, bk) = (bit(index, n, j), bit(index, n, k));
    if bj == bk {
        index
    } else {
        index ^ (1 << (n - j)) ^ (1 << (n - k))
    }
}

fn check_pair(n: usize, j: usize, k: usize) -> Result<()> {
    if !(1 <= j && j < k && k <= n) {
        return invalid(format!("need 1 <= j < k <= n, got ({j},{k}) for n = {n}"));
    }
    if n > MAX_SWAP_N {
        return Err(Error::UnsupportedSize(n));
    }
    Ok(())
}

pub(crate) fn swap_permutation(n: usize, j: usize, k: usize) -> Result<DMatrix<f64>> {
    check_pair(n, j, k)?;
    let dim = 1 << n;
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(swapped_index(i, n, j, k), i)] = 1.0;
    }
    Ok(m)
}

/// Permutation matrix exchanging qubits `j` and `k`.
pub fn full_swap(n: usize, j: usize, k: usize) -> Result<DenseOperator> {
    Ok(swap_permutation(n, j, k)?.map(Complex64::from))
}

/// Hermitian, positive semidefinite, unit-trace density matrix on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    n: usize,
    matrix: DenseOperator,
}

impl FullState {
    pub fn new(n: usize, matrix: DenseOperator) -> Result<Self> {
        let dim = 1usize << n;
        if matrix.shape() != (dim, dim) {
            return Err(Error::InvalidState(format!(
                "need a {dim}x{dim} matrix for {n} qubits"
            )));
        }
        let herm = (&matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm > 1e-10 {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > 1e-12 || trace.im.abs() > 1e-12 {
            return Err(Error::InvalidState(format!("trace {trace} is not 1")));
        }
        let min_eig = nalgebra::SymmetricEigen::new(matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (eigenvalue {min_eig:e})"
            )));
        }
        Ok(FullState { n, matrix })
    }

    /// `I / 2ⁿ`.
    pub fn maximally_mixed(n: usize) -> Self {
        let dim = 1usize << n;
        FullState {
            n,
            matrix: DenseOperator::identity(dim, dim) / Complex64::from(dim as f64),
        }
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn pure(n: usize, psi: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        FullState::new(n, &v * v.adjoint())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DenseOperator {
        &self.matrix
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Reduced state of qubits `(j, k)`, indexed by `2·b_j + b_k`.
    pub fn reduced_pair(&self, j: usize, k: usize) -> Result<[[Complex64; 4]; 4]> {
        let n = self.n;
        check_pair(n, j, k)?;
        let dim = 1usize << n;
        let mask = (1 << (n - j)) | (1 << (n - k));
        let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
        for r in 0..dim {
            let rest = r & !mask;
            let a = 2 * bit(r, n, j) + bit(r, n, k);
            for b in 0..4 {
                let c = rest | ((b >> 1) << (n - j)) | ((b & 1) << (n - k));
                out[a][b] += self.matrix[(r, c)];
            }
        }
        Ok(out)
    }

    /// Reduced state of qubit `q`.
    pub fn reduced_qubit(&self, q: usize) -> [[Complex64; 2]; 2] {
        let n = self.n;
        let dim = 1usize << n;
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..dim {
            let a = bit(r, n, q);
            for b in 0..2 {
                let c = (r & !(1 << (n - q))) | (b << (n - q));
                out[a][b] += self.matrix[(r, c)];
            }
        }
        out
    }
}

/// `U_Schurᵀ [I_r/r ⊗ |φ⟩⟨φ| on λ] U_Schur` with `φ = Qᵀψ` the state carried
/// from the orthogonal-form basis into the coupled-spin block.
pub fn embed_state(n: usize, lambda: &Partition, psi: &PureIrrepState) -> Result<FullState> {
    if lambda.n() != n || !lambda.is_qubit_allowed() {
        return invalid(format!("{lambda} is not a two-row partition of {n}"));
    }
    if psi.lambda() != lambda {
        return invalid(format!("state lives on {}, not {lambda}", psi.lambda()));
    }
    let transform = SchurTransform::cached(n)?;
    let info = transform.block_info(lambda)?;
    let phi = transform.intertwiner(lambda)?.transpose() * psi.vector();
    let local = &phi * phi.transpose() / info.multiplicity as f64;
    let dim = 1usize << n;
    let mut schur_rho = DMatrix::<f64>::zeros(dim, dim);
    for m in 0..info.multiplicity {
        let start = info.offset + m * info.dim;
        schur_rho
            .view_mut((start, start), (info.dim, info.dim))
            .copy_from(&local);
    }
    let u = transform.unitary();
    let rho = u.transpose() * schur_rho * u;
    FullState::new(n, rho.map(Complex64::from))
}

/// Both routes to the singlet fraction of qubits `(1, k)`: the overlap of
/// the two-qubit reduced state with `(|01⟩ − |10⟩)/√2`, and
/// `½(1 − tr V_(1k) ρ)`.
pub fn singlet_fraction_routes(rho: &FullState, k: usize) -> Result<(f64, f64)> {
    let n = rho.n();
    if k < 2 || k > n {
        return invalid(format!("need 2 <= k <= {n}, got {k}"));
    }
    let r = rho.reduced_pair(1, k)?;
    let overlap = 0.5 * (r[1][1] + r[2][2] - r[1][2] - r[2][1]).re;
    let dim = 1usize << n;
    let swap_trace: Complex64 = (0..dim)
        .map(|i| rho.matrix()[(swapped_index(i, n, 1, k), i)])
        .sum();
    Ok((overlap, 0.5 * (1.0 - swap_trace.re)))
}

/// Singlet fraction `F₁ₖ` of a full state; fails if the two internal routes
/// disagree by more than [`ROUTE_TOLERANCE`].
pub fn singlet_fraction_direct(rho: &FullState, k: usize) -> Result<f64> {
    let (overlap, via_swap) = singlet_fraction_routes(rho, k)?;
    if (overlap - via_swap).abs() > ROUTE_TOLERANCE {
        return Err(Error::VerificationMismatch(format!(
            "singlet routes disagree: {overlap} vs {via_swap}"
        )));
    }
    Ok(overlap)
}

/// Largest operator-norm deviation of a single-qubit marginal from `I/2`.
pub fn marginal_check(rho: &FullState) -> f64 {
    (1..=rho.n())
        .map(|q| {
            let r = rho.reduced_qubit(q);
            // r − I/2 is Hermitian with eigenvalues mean ± radius.
            let a = r[0][0].re - 0.5;
            let d = r[1][1].re - 0.5;
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + r[0][1].norm_sqr()).sqrt();
            mean.abs() + radius
        })
        .fold(0.0, f64::max)
}
