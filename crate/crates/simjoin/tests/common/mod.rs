//! Helpers shared by the property and acceptance suites.
#![allow(dead_code)] // each test binary uses a different subset

use std::collections::HashMap;

use simjoin::io::{generate_stream, DimDistribution, GeneratorConfig, TimestampModel};
use simjoin::{normalize, SimilarPair, StreamItem};

/// Build items from `(timestamp, coords)` rows, ids in order.
pub fn items_from(rows: &[(f64, Vec<(u32, f64)>)]) -> Vec<StreamItem<f64>> {
    rows.iter()
        .enumerate()
        .map(|(i, (ts, coords))| StreamItem::new(i as u64, *ts, normalize(coords).unwrap()))
        .collect()
}

/// Deterministic seeded stream for the acceptance matrix: generator output
/// with injected duplicate vectors (high-similarity pairs) and occasional
/// repeated timestamps (zero-delta pairs).
pub fn seeded_stream(seed: u64) -> Vec<StreamItem<f64>> {
    let count = match seed % 10 {
        0..=4 => 25 + (seed % 13) as usize * 4,
        5..=7 => 90 + (seed % 7) as usize * 10,
        8 => 220,
        _ => 450,
    };
    let dims = 10 + (seed % 41) as u32; // <= 50
    let avg_nnz = 2 + (seed % 4) as usize; // nnz <= 2*5-1 = 9
    let timestamps = if seed.is_multiple_of(2) {
        TimestampModel::Poisson { rate: 0.5 + (seed % 5) as f64 }
    } else {
        TimestampModel::Sequential { step: 0.05 + 0.1 * (seed % 7) as f64 }
    };
    let dim_distribution = if seed.is_multiple_of(3) {
        DimDistribution::Zipf { exponent: 1.1 }
    } else {
        DimDistribution::Uniform
    };
    let cfg = GeneratorConfig { count, dims, avg_nnz, timestamps, dim_distribution, seed };
    let mut items = generate_stream::<f64>(&cfg);

    // Duplicate some vectors a few positions later to force near-certain
    // pairs, and flatten some timestamps to create zero-delta pairs.
    let n = items.len();
    for i in (0..n).step_by(7) {
        let j = i + 1 + (seed as usize + i) % 5;
        if j < n {
            let vector = items[i].vector.clone();
            let ts = items[j].timestamp;
            items[j] = StreamItem::new(j as u64, ts, vector);
        }
    }
    for i in (1..n).step_by(11) {
        let ts = items[i - 1].timestamp;
        items[i] = StreamItem::new(i as u64, ts, items[i].vector.clone());
        // Restore monotonicity for the rest of the stream.
        let mut prev = ts;
        for (k, slot) in items.iter_mut().enumerate().skip(i + 1) {
            if slot.timestamp < prev {
                *slot = StreamItem::new(k as u64, prev, slot.vector.clone());
            }
            prev = slot.timestamp;
        }
    }
    items
}

pub type PairKey = (u64, u64);

pub fn pair_map(pairs: &[SimilarPair<f64>]) -> HashMap<PairKey, f64> {
    pairs.iter().map(|p| ((p.older, p.newer), p.score)).collect()
}

/// Assert two pair sets are identical with scores within `tol`.
pub fn assert_same_pairs(
    label: &str,
    got: &[SimilarPair<f64>],
    expect: &[SimilarPair<f64>],
    tol: f64,
) {
    let got_map = pair_map(got);
    let expect_map = pair_map(expect);
    for (key, score) in &expect_map {
        let Some(g) = got_map.get(key) else {
            panic!("{label}: missing pair {key:?} (expected score {score})");
        };
        assert!(
            (g - score).abs() <= tol,
            "{label}: score mismatch for {key:?}: {g} vs {score}"
        );
    }
    for key in got_map.keys() {
        assert!(
            expect_map.contains_key(key),
            "{label}: spurious pair {key:?}"
        );
    }
}
