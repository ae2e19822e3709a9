//! Brute-force reference implementations used by acceptance and property
//! tests. These share the primitive dot/decay math but none of the index
//! machinery, which keeps them independent of the code paths they check.

use crate::decay::{decay_unchecked, decayed_similarity, Params};
use crate::pair::{sort_pairs, SimilarPair};
use crate::scalar::Real;
use crate::vector::StreamItem;

/// Evaluate every pair within the time horizon directly and keep those whose
/// decayed similarity meets the threshold. Quadratic; intended for small
/// reference streams.
pub fn brute_force_join<T: Real>(
    items: &[StreamItem<T>],
    params: &Params<T>,
) -> Vec<SimilarPair<T>> {
    let mut pairs = Vec::new();
    for i in 0..items.len() {
        for j in (i + 1)..items.len() {
            let a = &items[i];
            let b = &items[j];
            let dt = (a.timestamp - b.timestamp).abs();
            if dt > params.tau {
                continue;
            }
            let score = decayed_similarity(a, b, params.lambda);
            if score >= params.theta {
                pairs.push(SimilarPair::new(a.id, b.id, score));
            }
        }
    }
    sort_pairs(&mut pairs);
    pairs
}

/// Per-dimension decayed maximum over an update history:
/// `max { value * exp(-lambda * (t - ts)) }` across entries on `dim`,
/// zero when the dimension never appeared.
pub fn brute_force_decayed_max<T: Real>(
    history: &[(u32, T, f64)],
    dim: u32,
    t: f64,
    lambda: T,
) -> T {
    let mut best = T::zero();
    for &(d, value, ts) in history {
        if d != dim {
            continue;
        }
        let decayed = value * decay_unchecked(t - ts, lambda);
        if decayed > best {
            best = decayed;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::normalize;

    const LN2: f64 = std::f64::consts::LN_2;

    fn unit_item(id: u64, ts: f64, dims: &[(u32, f64)]) -> StreamItem<f64> {
        StreamItem::new(id, ts, normalize(dims).unwrap())
    }

    #[test]
    fn trivial_streams_have_no_pairs() {
        let params = Params::new(0.5f64, 1.0).unwrap();
        assert!(brute_force_join::<f64>(&[], &params).is_empty());
        let one = vec![unit_item(0, 0.0, &[(1, 1.0)])];
        assert!(brute_force_join(&one, &params).is_empty());
    }

    #[test]
    fn identical_vectors_at_horizon_score_theta() {
        let theta = 0.7f64;
        let params = Params::new(theta, LN2).unwrap();
        let items = vec![
            unit_item(0, 0.0, &[(3, 1.0)]),
            unit_item(1, params.tau, &[(3, 1.0)]),
        ];
        let pairs = brute_force_join(&items, &params);
        assert_eq!(pairs.len(), 1);
        assert!((pairs[0].score - theta).abs() < 1e-12);
    }

    #[test]
    fn relabeling_ids_permutes_pairs_but_not_scores() {
        let params = Params::new(0.4f64, 0.1).unwrap();
        let raw = [
            (0.0, vec![(1u32, 0.7), (2, 0.5), (9, 0.2)]),
            (0.5, vec![(1, 0.6), (2, 0.6)]),
            (1.0, vec![(2, 0.9), (9, 0.1)]),
            (1.2, vec![(1, 0.7), (2, 0.5), (9, 0.2)]),
        ];
        let forward: Vec<StreamItem<f64>> = raw
            .iter()
            .enumerate()
            .map(|(i, (ts, coords))| unit_item(i as u64, *ts, coords))
            .collect();
        let relabeled: Vec<StreamItem<f64>> = raw
            .iter()
            .enumerate()
            .map(|(i, (ts, coords))| unit_item(100 - i as u64, *ts, coords))
            .collect();
        let a = brute_force_join(&forward, &params);
        let b = brute_force_join(&relabeled, &params);
        assert_eq!(a.len(), b.len());
        let mut scores_a: Vec<f64> = a.iter().map(|p| p.score).collect();
        let mut scores_b: Vec<f64> = b.iter().map(|p| p.score).collect();
        scores_a.sort_by(f64::total_cmp);
        scores_b.sort_by(f64::total_cmp);
        for (x, y) in scores_a.iter().zip(&scores_b) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn decayed_max_empty_history_is_zero() {
        assert_eq!(brute_force_decayed_max::<f64>(&[], 3, 1.0, LN2), 0.0);
    }

    #[test]
    fn decayed_max_single_entry() {
        let history = [(4u32, 0.8f64, 0.0)];
        let got = brute_force_decayed_max(&history, 4, 1.0, LN2);
        assert!((got - 0.4).abs() < 1e-15);
        assert_eq!(brute_force_decayed_max(&history, 5, 1.0, LN2), 0.0);
    }
}
