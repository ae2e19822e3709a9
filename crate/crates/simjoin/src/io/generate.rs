//! Synthetic stream generators.
//!
//! Deterministic for a fixed seed. Timestamps follow either a Poisson
//! process (i.i.d. exponential inter-arrival gaps) or a fixed-step sequence;
//! dimensions are drawn uniformly or Zipf-distributed; values are uniform in
//! (0, 1] before normalization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Zipf};

use crate::scalar::{real, Real};
use crate::vector::{normalize, StreamItem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimestampModel {
    /// Exponential inter-arrival gaps with the given rate.
    Poisson { rate: f64 },
    /// Fixed step between consecutive items, starting at zero.
    Sequential { step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DimDistribution {
    Uniform,
    Zipf { exponent: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub count: usize,
    pub dims: u32,
    pub avg_nnz: usize,
    pub timestamps: TimestampModel,
    pub dim_distribution: DimDistribution,
    pub seed: u64,
}

impl GeneratorConfig {
    fn validate(&self) {
        assert!(self.count > 0, "count must be positive");
        assert!(self.dims > 0, "dims must be positive");
        assert!(self.avg_nnz > 0, "avg_nnz must be positive");
        match self.timestamps {
            TimestampModel::Poisson { rate } => assert!(rate > 0.0, "rate must be positive"),
            TimestampModel::Sequential { step } => assert!(step > 0.0, "step must be positive"),
        }
    }
}

pub fn generate_stream<T: Real>(config: &GeneratorConfig) -> Vec<StreamItem<T>> {
    config.validate();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let gap_dist = match config.timestamps {
        TimestampModel::Poisson { rate } => Some(Exp::new(rate).expect("positive rate")),
        TimestampModel::Sequential { .. } => None,
    };
    let zipf = match config.dim_distribution {
        DimDistribution::Zipf { exponent } => {
            Some(Zipf::new(config.dims as f64, exponent).expect("valid zipf"))
        }
        DimDistribution::Uniform => None,
    };

    let mut items = Vec::with_capacity(config.count);
    let mut t = 0.0f64;
    for i in 0..config.count {
        if i > 0 {
            t += match config.timestamps {
                TimestampModel::Sequential { step } => step,
                TimestampModel::Poisson { .. } => {
                    gap_dist.expect("poisson model").sample(&mut rng)
                }
            };
        }
        let nnz = rng
            .random_range(1..=2 * config.avg_nnz - 1)
            .min(config.dims as usize);
        let mut dims = std::collections::BTreeSet::new();
        let mut attempts = 0usize;
        while dims.len() < nnz {
            let dim = match &zipf {
                Some(z) => (z.sample(&mut rng) as u32).saturating_sub(1).min(config.dims - 1),
                None => rng.random_range(0..config.dims),
            };
            dims.insert(dim);
            attempts += 1;
            if attempts > 200 * nnz {
                // Heavily skewed draws can stall on distinct dims; fill the
                // remainder from the smallest unused ones.
                for d in 0..config.dims {
                    if dims.len() >= nnz {
                        break;
                    }
                    dims.insert(d);
                }
            }
        }
        let coords: Vec<(u32, T)> = dims
            .into_iter()
            .map(|d| (d, real::<T>(1.0 - rng.random::<f64>())))
            .collect();
        let vector = normalize(&coords).expect("generated values are positive");
        items.push(StreamItem::new(i as u64, t, vector));
    }
    items
}
