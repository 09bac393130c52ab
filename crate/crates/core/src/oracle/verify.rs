use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{
    embed_state, marginal_check, singlet_fraction_routes, swap_permutation, SchurTransform,
};
use crate::error::{invalid, Result};
use crate::fidelity::{FidelityMap, PureIrrepState};
use crate::linalg::max_abs_diff;
use crate::sgroup::{qubit_partitions, Irrep};

/// Agreement between the irrep-level fidelity map and the full tensor space.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Worst `|F_direct − F_irrep|` over all states and all `k`.
    pub max_abs_error: f64,
    pub per_lambda_errors: BTreeMap<String, f64>,
    /// Worst single-qubit marginal deviation from `I/2` over embedded states.
    pub marginal_deviation: f64,
    /// Worst off-block entry of a Schur-conjugated transposition.
    pub block_leakage: f64,
    /// Worst mismatch between repeated copies of a block.
    pub block_repetition: f64,
    /// Worst mismatch between an intertwined block and the orthogonal form.
    pub irrep_match: f64,
    /// Worst disagreement between the two singlet-fraction routes.
    pub route_disagreement: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Embeds `trials` random real states per two-row irrep and compares
/// singlet fractions computed in the full space with the irrep formulas.
pub fn verify(n: usize, trials: usize, seed: u64) -> Result<VerifyReport> {
    const TOLERANCE: f64 = 1e-10;
    if trials == 0 {
        return invalid("need at least one trial");
    }
    let transform = SchurTransform::cached(n)?;

    let mut block_leakage = 0.0f64;
    let mut block_repetition = 0.0f64;
    let mut irrep_match = 0.0f64;
    let irreps: Vec<Irrep> = qubit_partitions(n)?.iter().map(Irrep::new).collect();
    for j in 1..n {
        for k in (j + 1)..=n {
            let conj = transform.conjugate(&swap_permutation(n, j, k)?);
            block_leakage = block_leakage.max(transform.off_block_leakage(&conj));
            block_repetition = block_repetition.max(transform.block_repetition_error(&conj));
            for irrep in &irreps {
                let q = transform.intertwiner(irrep.lambda())?;
                let block = transform.block(&conj, irrep.lambda(), 0)?;
                let mapped = q * block * q.transpose();
                irrep_match = irrep_match.max(max_abs_diff(&mapped, &irrep.transposition(j, k)?));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_lambda_errors = BTreeMap::new();
    let mut marginal_deviation = 0.0f64;
    let mut route_disagreement = 0.0f64;
    for irrep in &irreps {
        let lambda = irrep.lambda();
        let map = FidelityMap::new(lambda);
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let v: Vec<f64> = (0..irrep.dim())
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            let psi = PureIrrepState::normalized(lambda.clone(), v)?;
            let expected = map.evaluate(psi.amplitudes());
            let rho = embed_state(n, lambda, &psi)?;
            marginal_deviation = marginal_deviation.max(marginal_check(&rho));
            for k in 2..=n {
                let (overlap, via_swap) = singlet_fraction_routes(&rho, k)?;
                route_disagreement = route_disagreement.max((overlap - via_swap).abs());
                worst = worst.max((overlap - expected[k - 2]).abs());
            }
        }
        per_lambda_errors.insert(lambda.to_string(), worst);
    }
    let max_abs_error = per_lambda_errors.values().copied().fold(0.0, f64::max);
    let passed = max_abs_error <= TOLERANCE
        && marginal_deviation <= TOLERANCE
        && block_leakage <= 1e-9
        && block_repetition <= 1e-9
        && irrep_match <= 1e-9
        && route_disagreement <= 1e-12;
    Ok(VerifyReport {
        n,
        trials,
        seed,
        max_abs_error,
        per_lambda_errors,
        marginal_deviation,
        block_leakage,
        block_repetition,
        irrep_match,
        route_disagreement,
        tolerance: TOLERANCE,
        passed,
    })
}
