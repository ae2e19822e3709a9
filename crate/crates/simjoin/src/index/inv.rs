//! Baseline inverted index: no bound pruning, only time filtering.
//!
//! Candidate generation accumulates exact dot products, so verification just
//! applies the decay factor and the threshold.

use std::collections::HashMap;

use crate::decay::{decay_unchecked, Params};
use crate::error::{Error, Result};
use crate::metrics::Metrics;
use crate::pair::SimilarPair;
use crate::scalar::Real;
use crate::storage::{CandidateAccumulator, OrderedStore, PostingEntry, PostingList};
use crate::vector::StreamItem;

use super::{check_stream_order, Mode, SimilarityIndex};

pub struct InvIndex<T> {
    lists: HashMap<u32, PostingList<T>>,
    /// Full items, kept for score completion (timestamps) and uniform expiry
    /// accounting.
    items: OrderedStore<StreamItem<T>>,
    params: Params<T>,
    mode: Mode,
    last_ts: f64,
}

impl<T: Real> InvIndex<T> {
    pub fn new(params: Params<T>, mode: Mode) -> Self {
        InvIndex {
            lists: HashMap::new(),
            items: OrderedStore::new(),
            params,
            mode,
            last_ts: f64::NEG_INFINITY,
        }
    }

    pub fn list_len(&self, dim: u32) -> usize {
        self.lists.get(&dim).map_or(0, PostingList::len)
    }
}

impl<T: Real> SimilarityIndex<T> for InvIndex<T> {
    fn evict_expired(&mut self, now: f64) {
        if self.mode == Mode::Streaming {
            self.items.evict_expired(now, self.params.tau, |it| it.timestamp);
        }
    }

    fn candidate_gen(
        &mut self,
        query: &StreamItem<T>,
        metrics: &mut Metrics,
    ) -> CandidateAccumulator<T> {
        let mut acc = CandidateAccumulator::new();
        let now = query.timestamp;
        for (dim, xj) in query.vector.iter() {
            let Some(list) = self.lists.get_mut(&dim) else {
                continue;
            };
            if self.mode == Mode::Streaming {
                list.truncate_expired_backward(now, self.params.tau)
                    .expect("inverted lists stay time-ordered");
            }
            for e in list.iter() {
                metrics.entries_traversed += 1;
                if !acc.is_candidate(e.id) {
                    metrics.candidates_generated += 1;
                }
                acc.add(e.id, xj * e.value);
            }
        }
        acc
    }

    fn candidate_verify(
        &mut self,
        query: &StreamItem<T>,
        acc: CandidateAccumulator<T>,
        metrics: &mut Metrics,
    ) -> Result<Vec<SimilarPair<T>>> {
        let mut pairs = Vec::new();
        for (id, c) in acc.iter_positive() {
            let item = self.items.get(id).ok_or_else(|| {
                Error::InternalInconsistency(format!(
                    "candidate {id} within horizon missing from direct store"
                ))
            })?;
            let ff = match self.mode {
                Mode::Batch => T::one(),
                Mode::Streaming => {
                    decay_unchecked(query.timestamp - item.timestamp, self.params.lambda)
                }
            };
            metrics.full_similarities += 1;
            let score = c * ff;
            if score >= self.params.theta {
                pairs.push(SimilarPair::new(query.id, id, score));
            }
        }
        Ok(pairs)
    }

    fn index_item(&mut self, item: &StreamItem<T>, _metrics: &mut Metrics) -> Result<()> {
        check_stream_order(self.mode, &mut self.last_ts, item)?;
        let pn = &item.stats.prefix_norms;
        for (k, (dim, value)) in item.vector.iter().enumerate() {
            self.lists.entry(dim).or_default().push(PostingEntry {
                id: item.id,
                value,
                prefix_norm: pn[k],
                timestamp: item.timestamp,
            });
        }
        self.items.insert(item.id, item.clone());
        Ok(())
    }

    fn posting_entries(&self) -> usize {
        self.lists.values().map(PostingList::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::normalize;

    const LN2: f64 = std::f64::consts::LN_2;

    fn item(id: u64, ts: f64, coords: &[(u32, f64)]) -> StreamItem<f64> {
        StreamItem::new(id, ts, normalize(coords).unwrap())
    }

    fn streaming(theta: f64, lambda: f64) -> InvIndex<f64> {
        InvIndex::new(Params::new(theta, lambda).unwrap(), Mode::Streaming)
    }

    #[test]
    fn insert_creates_one_list_per_dimension() {
        let mut idx = streaming(0.5, 1.0);
        let mut m = Metrics::default();
        idx.index_item(&item(0, 0.0, &[(3, 0.6), (7, 0.8)]), &mut m).unwrap();
        assert_eq!(idx.list_len(3), 1);
        assert_eq!(idx.list_len(7), 1);
        assert_eq!(idx.posting_entries(), 2);
    }

    #[test]
    fn shared_dimension_preserves_time_order() {
        let mut idx = streaming(0.5, 1.0);
        let mut m = Metrics::default();
        idx.index_item(&item(0, 0.0, &[(5, 1.0)]), &mut m).unwrap();
        idx.index_item(&item(1, 1.0, &[(5, 0.6), (6, 0.8)]), &mut m).unwrap();
        assert_eq!(idx.list_len(5), 2);
        let ids: Vec<u64> = idx.lists[&5].iter().map(|e| e.id).collect();
        assert_eq!(ids, vec![0, 1]);
    }

    #[test]
    fn total_entries_equal_total_nonzeros() {
        let mut idx = streaming(0.5, 1.0);
        let mut m = Metrics::default();
        let batch = [
            item(0, 0.0, &[(1, 1.0)]),
            item(1, 0.1, &[(1, 1.0), (2, 1.0), (3, 1.0)]),
            item(2, 0.2, &[(2, 1.0), (9, 1.0)]),
        ];
        let nnz_total: usize = batch.iter().map(|it| it.vector.nnz()).sum();
        for it in &batch {
            idx.index_item(it, &mut m).unwrap();
        }
        assert_eq!(idx.posting_entries(), nnz_total);
    }

    #[test]
    fn rejects_out_of_order_streaming_insert() {
        let mut idx = streaming(0.5, 1.0);
        let mut m = Metrics::default();
        idx.index_item(&item(0, 5.0, &[(1, 1.0)]), &mut m).unwrap();
        let err = idx.index_item(&item(1, 4.0, &[(1, 1.0)]), &mut m).unwrap_err();
        assert!(matches!(err, Error::OutOfOrderStream { id: 1, .. }));
    }

    #[test]
    fn empty_index_yields_empty_accumulator() {
        let mut idx = streaming(0.5, 1.0);
        let mut m = Metrics::default();
        let acc = idx.candidate_gen(&item(9, 1.0, &[(1, 1.0)]), &mut m);
        assert_eq!(acc.positive_count(), 0);
        assert_eq!(m.entries_traversed, 0);
    }

    #[test]
    fn candidate_within_horizon_accumulates_exact_dot() {
        let mut idx = streaming(0.3, LN2); // tau = ln(1/0.3)/ln2 ~ 1.74
        let mut m = Metrics::default();
        idx.index_item(&item(0, 0.0, &[(1, 1.0), (2, 1.0)]), &mut m).unwrap();
        let q = item(1, 0.5, &[(1, 1.0), (3, 1.0)]);
        let acc = idx.candidate_gen(&q, &mut m);
        assert!((acc.score(0) - 0.5).abs() < 1e-9);
        assert_eq!(m.entries_traversed, 1);
    }

    #[test]
    fn expired_entry_is_dropped_and_not_traversed() {
        let mut idx = streaming(0.9, 1.0); // tau ~ 0.105
        let mut m = Metrics::default();
        idx.index_item(&item(0, 0.0, &[(1, 1.0)]), &mut m).unwrap();
        let acc = idx.candidate_gen(&item(1, 5.0, &[(1, 1.0)]), &mut m);
        assert_eq!(acc.positive_count(), 0);
        assert_eq!(m.entries_traversed, 0);
        assert_eq!(idx.posting_entries(), 0);
    }

    #[test]
    fn verify_applies_decay_and_threshold() {
        let mut idx = streaming(0.3, LN2);
        let mut m = Metrics::default();
        idx.index_item(&item(0, 0.0, &[(1, 1.0), (2, 1.0)]), &mut m).unwrap();
        let q = item(1, 0.5, &[(1, 1.0), (3, 1.0)]);
        let acc = idx.candidate_gen(&q, &mut m);
        let pairs = idx.candidate_verify(&q, acc, &mut m).unwrap();
        assert_eq!(pairs.len(), 1);
        let expect = 0.5 * 2f64.powf(-0.5);
        assert!((pairs[0].score - expect).abs() < 1e-9);
        assert_eq!((pairs[0].older, pairs[0].newer), (0, 1));
    }

    #[test]
    fn verify_rejects_below_threshold() {
        let mut idx = streaming(0.6, LN2);
        let mut m = Metrics::default();
        idx.index_item(&item(0, 0.0, &[(1, 1.0), (2, 1.0)]), &mut m).unwrap();
        let q = item(1, 0.0, &[(1, 1.0), (3, 1.0)]); // dot 0.5 < 0.6
        let acc = idx.candidate_gen(&q, &mut m);
        let pairs = idx.candidate_verify(&q, acc, &mut m).unwrap();
        assert!(pairs.is_empty());
        assert_eq!(m.full_similarities, 1);
    }

    #[test]
    fn verify_empty_accumulator() {
        let mut idx = streaming(0.6, LN2);
        let mut m = Metrics::default();
        let q = item(0, 0.0, &[(1, 1.0)]);
        let acc = CandidateAccumulator::new();
        assert!(idx.candidate_verify(&q, acc, &mut m).unwrap().is_empty());
    }

    #[test]
    fn entries_traversed_matches_brute_force_count() {
        let mut idx = streaming(0.7, 0.5); // tau ~ 0.713
        let mut m = Metrics::default();
        let items = [
            item(0, 0.0, &[(1, 0.6), (2, 0.8)]),
            item(1, 0.3, &[(1, 1.0)]),
            item(2, 0.6, &[(2, 0.5), (3, 0.9)]),
        ];
        for it in &items {
            idx.index_item(it, &mut m).unwrap();
        }
        let q = item(3, 1.0, &[(1, 0.5), (2, 0.5), (3, 0.8)]);
        let tau = idx.params.tau;
        let expect: u64 = items
            .iter()
            .map(|it| {
                it.vector
                    .dims()
                    .iter()
                    .filter(|d| q.vector.dims().contains(d))
                    .filter(|_| q.timestamp - it.timestamp <= tau)
                    .count() as u64
            })
            .sum();
        let before = m.entries_traversed;
        idx.candidate_gen(&q, &mut m);
        assert_eq!(m.entries_traversed - before, expect);
    }
}
