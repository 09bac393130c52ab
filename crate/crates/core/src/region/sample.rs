use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::fidelity::FidelityMap;
use crate::sgroup::{qubit_partitions, Partition};

/// Points drawn per RNG stream. Streams are keyed by (partition, chunk), so
/// the output does not depend on the number of worker threads.
const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledPoint {
    pub amplitudes: Vec<f64>,
    pub fidelities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaCloud {
    pub lambda: Partition,
    pub points: Vec<SampledPoint>,
}

/// Per-irrep clouds of fidelity tuples of random pure states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionSample {
    pub n: usize,
    pub samples_per_lambda: usize,
    pub seed: u64,
    pub clouds: Vec<LambdaCloud>,
}

impl RegionSample {
    pub fn len(&self) -> usize {
        self.clouds.iter().map(|c| c.points.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> impl Iterator<Item = &SampledPoint> {
        self.clouds.iter().flat_map(|c| c.points.iter())
    }

    pub fn cloud(&self, lambda: &Partition) -> Option<&LambdaCloud> {
        self.clouds.iter().find(|c| &c.lambda == lambda)
    }

    /// Largest deviation between stored fidelities and those recomputed from
    /// the stored amplitudes.
    pub fn reproduction_error(&self) -> f64 {
        self.clouds
            .iter()
            .flat_map(|cloud| {
                let map = FidelityMap::new(&cloud.lambda);
                cloud
                    .points
                    .iter()
                    .map(move |p| {
                        map.evaluate(&p.amplitudes)
                            .iter()
                            .zip(&p.fidelities)
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0, f64::max)
                    })
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max)
    }
}

/// Uniform points on `S^{d_λ−1}` (normalized Gaussians) for every two-row λ,
/// mapped to fidelity tuples. One-dimensional irreps contribute their single
/// point.
pub fn sample_region(n: usize, samples_per_lambda: usize, seed: u64) -> Result<RegionSample> {
    if samples_per_lambda == 0 {
        return invalid("need at least one sample per partition");
    }
    let clouds = qubit_partitions(n)?
        .iter()
        .enumerate()
        .map(|(index, lambda)| sample_cloud(lambda, index as u64, samples_per_lambda, seed))
        .collect();
    Ok(RegionSample {
        n,
        samples_per_lambda,
        seed,
        clouds,
    })
}

fn sample_cloud(lambda: &Partition, index: u64, count: usize, seed: u64) -> LambdaCloud {
    let map = FidelityMap::new(lambda);
    let d = map.dim();
    if d == 1 {
        return LambdaCloud {
            lambda: lambda.clone(),
            points: vec![SampledPoint {
                amplitudes: vec![1.0],
                fidelities: map.evaluate(&[1.0]),
            }],
        };
    }
    let chunks = count.div_ceil(CHUNK);
    let points = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((index << 32) | chunk as u64);
            let len = CHUNK.min(count - chunk * CHUNK);
            let mut out = Vec::with_capacity(len);
            while out.len() < len {
                let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm < 1e-12 {
                    continue;
                }
                let amplitudes: Vec<f64> = v.iter().map(|x| x / norm).collect();
                let fidelities = map.evaluate(&amplitudes);
                out.push(SampledPoint {
                    amplitudes,
                    fidelities,
                });
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    LambdaCloud {
        lambda: lambda.clone(),
        points,
    }
}
