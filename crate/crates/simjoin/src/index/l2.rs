//! Prefix-filtered index using only the Cauchy-Schwarz (l2) bounds.
//!
//! Only the suffix of each vector whose inclusive prefix norm reaches the
//! threshold is indexed; the prefix is kept in the residual store together
//! with the bound value recorded just before indexing began. The bounds
//! depend only on the query and candidate vectors, never on stream-wide
//! statistics, so posting lists always stay time-ordered and no re-indexing
//! is ever needed.

use std::collections::HashMap;

use crate::decay::Params;
use crate::error::Result;
use crate::metrics::Metrics;
use crate::pair::SimilarPair;
use crate::scalar::Real;
use crate::storage::{
    CandidateAccumulator, PostingEntry, PostingList, ResidualEntry, ResidualStore,
};
use crate::vector::{StreamItem, VectorStats};

use super::{
    check_stream_order, l2_family_candidate_gen, l2_family_candidate_verify, CvRecord,
    Mode, SimilarityIndex,
};

pub struct L2Index<T> {
    lists: HashMap<u32, PostingList<T>>,
    residuals: ResidualStore<T>,
    params: Params<T>,
    mode: Mode,
    last_ts: f64,
    cv_log: Option<Vec<CvRecord<T>>>,
}

impl<T: Real> L2Index<T> {
    pub fn new(params: Params<T>, mode: Mode) -> Self {
        L2Index {
            lists: HashMap::new(),
            residuals: ResidualStore::new(),
            params,
            mode,
            last_ts: f64::NEG_INFINITY,
            cv_log: None,
        }
    }

    pub fn residual(&self, id: u64) -> Option<&ResidualEntry<T>> {
        self.residuals.get(id)
    }

    /// Index of the first coordinate whose inclusive prefix norm reaches the
    /// threshold; everything before it stays residual.
    fn boundary(&self, item: &StreamItem<T>) -> usize {
        item.stats
            .prefix_norms
            .iter()
            .position(|&n| n >= self.params.theta)
            .unwrap_or(item.vector.nnz())
    }
}

impl<T: Real> SimilarityIndex<T> for L2Index<T> {
    fn evict_expired(&mut self, now: f64) {
        if self.mode == Mode::Streaming {
            self.residuals.evict_expired(now, self.params.tau, |e| e.timestamp);
        }
    }

    fn candidate_gen(
        &mut self,
        query: &StreamItem<T>,
        metrics: &mut Metrics,
    ) -> CandidateAccumulator<T> {
        l2_family_candidate_gen(
            &mut self.lists,
            &self.residuals,
            query,
            &self.params,
            self.mode,
            None,
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
        let boundary = self.boundary(item);
        let pn = &item.stats.prefix_norms;
        // The bound value just before the first indexed coordinate.
        let pscore_q = if boundary == 0 { T::zero() } else { pn[boundary - 1] };
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
