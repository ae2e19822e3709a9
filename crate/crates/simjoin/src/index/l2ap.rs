//! Full prefix-filtered index combining the dot-with-max bound and the l2
//! bounds, with the stream-side machinery they require: a running
//! per-dimension max vector, a decayed max vector for candidate generation,
//! and re-indexing to restore the prefix-filtering invariant whenever the max
//! vector grows.
//!
//! In streaming mode the max update and re-indexing run before the arriving
//! item queries the index (see [`SimilarityIndex::prepare`]); otherwise the
//! item could miss matches hidden in residual prefixes whose bounds were
//! computed under the smaller max vector. For the same reason the stored
//! prefix bound of a re-scanned residual is refreshed even when its boundary
//! does not move. The indexing bound accumulates `x_j * max_j` directly: the
//! classic cap by the vector's own max coordinate is only sound when vectors
//! are processed in decreasing max-coordinate order, which no stream
//! provides.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::decay::{decay_unchecked, Params};
use crate::error::Result;
use crate::metrics::Metrics;
use crate::pair::SimilarPair;
use crate::scalar::Real;
use crate::storage::{
    CandidateAccumulator, OrderedStore, PostingEntry, PostingList, ResidualEntry,
    ResidualStore,
};
use crate::vector::{StreamItem, VectorStats};

use super::{
    check_stream_order, l2_family_candidate_gen, l2_family_candidate_verify, CvRecord,
    Mode, SimilarityIndex,
};

/// Per-dimension worst-case indexed coordinate under time decay.
///
/// Each dimension stores the single history entry `(value, ts)` that
/// dominates all others at every future query time; this is exact because
/// `value * exp(-lambda (t - ts))` ordering between two entries does not
/// depend on `t`. With decay disabled the structure degenerates to a plain
/// running maximum, which is what batch mode needs.
#[derive(Debug, Clone)]
pub struct DecayedMaxVector<T> {
    entries: HashMap<u32, (T, f64)>,
    lambda: T,
    decay_enabled: bool,
}

impl<T: Real> DecayedMaxVector<T> {
    pub fn decayed(lambda: T) -> Self {
        DecayedMaxVector { entries: HashMap::new(), lambda, decay_enabled: true }
    }

    pub fn undecayed() -> Self {
        DecayedMaxVector { entries: HashMap::new(), lambda: T::one(), decay_enabled: false }
    }

    /// Keep the newer observation iff it dominates the stored one at its own
    /// timestamp (and therefore forever after).
    pub fn update(&mut self, dim: u32, value: T, ts: f64) {
        match self.entries.get_mut(&dim) {
            None => {
                self.entries.insert(dim, (value, ts));
            }
            Some(slot) => {
                let (stored, t0) = *slot;
                let threshold = if self.decay_enabled {
                    stored * decay_unchecked((ts - t0).max(0.0), self.lambda)
                } else {
                    stored
                };
                if value >= threshold {
                    *slot = (value, ts);
                }
            }
        }
    }

    /// Decayed maximum for `dim` as seen at time `t`; zero when the dimension
    /// never appeared.
    pub fn query(&self, dim: u32, t: f64) -> T {
        match self.entries.get(&dim) {
            None => T::zero(),
            Some(&(value, t0)) => {
                if self.decay_enabled {
                    value * decay_unchecked((t - t0).max(0.0), self.lambda)
                } else {
                    value
                }
            }
        }
    }
}

pub struct L2apIndex<T> {
    lists: HashMap<u32, PostingList<T>>,
    residuals: ResidualStore<T>,
    /// Inverted index of residual prefixes: which vectors hold un-indexed
    /// mass on a dimension, consulted when that dimension's max grows.
    residual_inverted: HashMap<u32, HashSet<u64>>,
    /// Full vectors, needed to recompute boundaries during re-indexing.
    items: OrderedStore<StreamItem<T>>,
    /// Running undecayed per-dimension maximum; drives the indexing bound.
    max_vec: HashMap<u32, T>,
    decayed_max: DecayedMaxVector<T>,
    params: Params<T>,
    mode: Mode,
    last_ts: f64,
    cv_log: Option<Vec<CvRecord<T>>>,
}

impl<T: Real> L2apIndex<T> {
    pub fn new_streaming(params: Params<T>) -> Self {
        let lambda = params.lambda;
        Self::with_max(params, Mode::Streaming, HashMap::new(), DecayedMaxVector::decayed(lambda))
    }

    /// Batch construction takes the max vector over everything the index will
    /// see, both the vectors to be indexed and the vectors that will query
    /// it. The candidate-generation max tracks only what actually got
    /// processed, undecayed.
    pub fn new_batch(params: Params<T>, max_vec: HashMap<u32, T>) -> Self {
        Self::with_max(params, Mode::Batch, max_vec, DecayedMaxVector::undecayed())
    }

    fn with_max(
        params: Params<T>,
        mode: Mode,
        max_vec: HashMap<u32, T>,
        decayed_max: DecayedMaxVector<T>,
    ) -> Self {
        L2apIndex {
            lists: HashMap::new(),
            residuals: ResidualStore::new(),
            residual_inverted: HashMap::new(),
            items: OrderedStore::new(),
            max_vec,
            decayed_max,
            params,
            mode,
            last_ts: f64::NEG_INFINITY,
            cv_log: None,
        }
    }

    pub fn residual(&self, id: u64) -> Option<&ResidualEntry<T>> {
        self.residuals.get(id)
    }

    pub fn max_coord(&self, dim: u32) -> T {
        self.max_vec.get(&dim).copied().unwrap_or_else(T::zero)
    }

    pub fn decayed_max(&self) -> &DecayedMaxVector<T> {
        &self.decayed_max
    }

    pub fn list_is_time_ordered(&self, dim: u32) -> Option<bool> {
        self.lists.get(&dim).map(PostingList::is_time_ordered)
    }

    /// First coordinate where both running bounds reach the threshold, and
    /// the bound value read just before it.
    fn boundary_scan(
        max_vec: &HashMap<u32, T>,
        theta: T,
        item: &StreamItem<T>,
    ) -> (usize, T) {
        let pn = &item.stats.prefix_norms;
        let mut b1 = T::zero();
        for (k, (dim, value)) in item.vector.iter().enumerate() {
            let b2_before = if k == 0 { T::zero() } else { pn[k - 1] };
            let pscore = b1.min(b2_before);
            let max_j = max_vec.get(&dim).copied().unwrap_or_else(T::zero);
            b1 = b1 + value * max_j;
            if b1.min(pn[k]) >= theta {
                return (k, pscore);
            }
        }
        let nnz = item.vector.nnz();
        let final_bound = if nnz == 0 { T::zero() } else { b1.min(pn[nnz - 1]) };
        (nnz, final_bound)
    }

    /// Fold the arriving item's coordinates into the max vector and restore
    /// the prefix-filtering invariant for residuals touching a grown
    /// dimension. Returns the number of posting entries appended.
    fn update_max_and_reindex(&mut self, item: &StreamItem<T>, now: f64) -> u64 {
        let mut changed: Vec<u32> = Vec::new();
        for (dim, value) in item.vector.iter() {
            let current = self.max_coord(dim);
            if value > current {
                self.max_vec.insert(dim, value);
                changed.push(dim);
            }
        }
        if changed.is_empty() {
            return 0;
        }
        // Deterministic candidate order keeps runs reproducible.
        let mut touched: BTreeSet<u64> = BTreeSet::new();
        for dim in &changed {
            if let Some(ids) = self.residual_inverted.get(dim) {
                touched.extend(ids.iter().copied());
            }
        }
        let mut appended = 0u64;
        for id in touched {
            let Some(entry) = self.residuals.get(id) else { continue };
            if now - entry.timestamp > self.params.tau {
                continue; // beyond horizon; eviction will reap it
            }
            let old_boundary = entry.prefix_nnz;
            if old_boundary == 0 {
                continue;
            }
            let Some(full) = self.items.get(id) else { continue };
            let full = full.clone();
            let (new_boundary, new_q) =
                Self::boundary_scan(&self.max_vec, self.params.theta, &full);
            debug_assert!(new_boundary <= old_boundary, "bounds only grow");
            for k in new_boundary..old_boundary {
                let dim = full.vector.dims()[k];
                // Appends an older timestamp at the tail: the list demotes
                // itself to forward-prune mode if needed.
                self.lists.entry(dim).or_default().push(PostingEntry {
                    id,
                    value: full.vector.values()[k],
                    prefix_norm: full.stats.prefix_norms[k],
                    timestamp: full.timestamp,
                });
                if let Some(set) = self.residual_inverted.get_mut(&dim) {
                    set.remove(&id);
                    if set.is_empty() {
                        self.residual_inverted.remove(&dim);
                    }
                }
                appended += 1;
            }
            let entry = self.residuals.get_mut(id).expect("checked above");
            if new_boundary < old_boundary {
                entry.prefix = full.vector.prefix_fragment(new_boundary);
                let (pmax, psum, pnnz) = VectorStats::of_fragment(&entry.prefix);
                entry.prefix_max = pmax;
                entry.prefix_sum = psum;
                entry.prefix_nnz = pnnz;
            }
            // The bound may have grown even when the boundary held; keeping
            // the stale smaller value would under-estimate residual mass.
            entry.pscore_q = new_q;
        }
        appended
    }
}

impl<T: Real> SimilarityIndex<T> for L2apIndex<T> {
    fn prepare(&mut self, item: &StreamItem<T>, metrics: &mut Metrics) {
        if self.mode == Mode::Batch {
            return;
        }
        metrics.reindex_operations += self.update_max_and_reindex(item, item.timestamp);
    }

    fn evict_expired(&mut self, now: f64) {
        if self.mode != Mode::Streaming {
            return;
        }
        let tau = self.params.tau;
        let evicted = self.residuals.evict_expired(now, tau, |e| e.timestamp);
        for (id, entry) in evicted {
            for &dim in entry.prefix.dims() {
                if let Some(set) = self.residual_inverted.get_mut(&dim) {
                    set.remove(&id);
                    if set.is_empty() {
                        self.residual_inverted.remove(&dim);
                    }
                }
            }
        }
        self.items.evict_expired(now, tau, |it| it.timestamp);
    }

    fn candidate_gen(
        &mut self,
        query: &StreamItem<T>,
        metrics: &mut Metrics,
    ) -> CandidateAccumulator<T> {
        // Cumulative dot between the query prefix and the decayed max vector:
        // the admission bound while scanning dimension k is the sum over
        // dims <= k, so a forward prefix sum avoids subtraction drift.
        let now = query.timestamp;
        let mut rs1_prefix = Vec::with_capacity(query.vector.nnz());
        let mut acc = T::zero();
        for (dim, value) in query.vector.iter() {
            acc = acc + value * self.decayed_max.query(dim, now);
            rs1_prefix.push(acc);
        }
        l2_family_candidate_gen(
            &mut self.lists,
            &self.residuals,
            query,
            &self.params,
            self.mode,
            Some(&rs1_prefix),
            metrics,
        )
    }

    fn candidate_verify(
        &mut self,
        query: &StreamItem<T>,
        acc: CandidateAccumulator<T>,
        metrics: &mut Metrics,
    ) -> Result<Vec<SimilarPair<T>>> {
        l2_family_candidate_verify(
            &self.residuals,
            query,
            &acc,
            &self.params,
            self.mode,
            &mut self.cv_log,
            metrics,
        )
    }

    fn index_item(&mut self, item: &StreamItem<T>, _metrics: &mut Metrics) -> Result<()> {
        check_stream_order(self.mode, &mut self.last_ts, item)?;
        let (boundary, pscore_q) =
            Self::boundary_scan(&self.max_vec, self.params.theta, item);
        let pn = &item.stats.prefix_norms;
        for ((dim, value), &prefix_norm) in item.vector.iter().zip(pn).skip(boundary) {
            self.lists.entry(dim).or_default().push(PostingEntry {
                id: item.id,
                value,
                prefix_norm,
                timestamp: item.timestamp,
            });
        }
        let prefix = item.vector.prefix_fragment(boundary);
        let (prefix_max, prefix_sum, prefix_nnz) = VectorStats::of_fragment(&prefix);
        for &dim in prefix.dims() {
            self.residual_inverted.entry(dim).or_default().insert(item.id);
        }
        self.residuals.insert(
            item.id,
            ResidualEntry {
                prefix,
                prefix_max,
                prefix_sum,
                prefix_nnz,
                pscore_q,
                timestamp: item.timestamp,
                full_max: item.stats.max_coord,
                full_nnz: item.stats.nnz,
            },
        );
        for (dim, value) in item.vector.iter() {
            self.decayed_max.update(dim, value, item.timestamp);
        }
        self.items.insert(item.id, item.clone());
        Ok(())
    }

    fn posting_entries(&self) -> usize {
        self.lists.values().map(PostingList::len).sum()
    }

    fn enable_cv_log(&mut self) {
        self.cv_log = Some(Vec::new());
    }

    fn take_cv_log(&mut self) -> Vec<CvRecord<T>> {
        self.cv_log.replace(Vec::new()).unwrap_or_default()
    }
}
