//! Filtering indexes behind a common three-phase contract: candidate
//! generation, candidate verification, and index construction.
//!
//! Every index runs in one of two modes. In streaming mode the index is
//! continuously pruned by time filtering and scores carry the decay factor.
//! In batch mode (used by the mini-batch framework) time filtering is off,
//! the decay factor is one, and verified pairs carry raw dot products to be
//! decayed by the caller afterwards.

mod inv;
mod l2;
mod l2ap;

use std::collections::HashMap;
use std::str::FromStr;

pub use inv::InvIndex;
pub use l2::L2Index;
pub use l2ap::{DecayedMaxVector, L2apIndex};

use crate::decay::{decay_unchecked, Params};
use crate::error::{Error, Result};
use crate::metrics::Metrics;
use crate::pair::SimilarPair;
use crate::scalar::{real, Real};
use crate::storage::{CandidateAccumulator, PostingList, ResidualStore};
use crate::vector::{dot, StreamItem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    Inv,
    L2,
    L2ap,
}

impl IndexKind {
    pub const ALL: [IndexKind; 3] = [IndexKind::Inv, IndexKind::L2, IndexKind::L2ap];

    pub fn as_str(&self) -> &'static str {
        match self {
            IndexKind::Inv => "inv",
            IndexKind::L2 => "l2",
            IndexKind::L2ap => "l2ap",
        }
    }
}

impl FromStr for IndexKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "inv" => Ok(IndexKind::Inv),
            "l2" => Ok(IndexKind::L2),
            "l2ap" => Ok(IndexKind::L2ap),
            other => Err(format!("unknown index kind: {other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Streaming,
    Batch,
}

/// Verification bounds computed for one candidate, recorded when bound
/// tracing is enabled. Used by the safety checks in the test suites.
#[derive(Debug, Clone, Copy)]
pub struct CvRecord<T> {
    pub query: u64,
    pub candidate: u64,
    pub ps1: T,
    pub ds1: T,
    pub sz2: T,
}

/// The three-phase index contract shared by INV, L2, and L2AP.
pub trait SimilarityIndex<T: Real> {
    /// Index maintenance that must precede the query phase of an arriving
    /// item. Only streaming L2AP does work here: it folds the item's
    /// coordinates into the running max vector and re-indexes residuals so
    /// the prefix-filtering invariant holds before the item probes the index.
    fn prepare(&mut self, _item: &StreamItem<T>, _metrics: &mut Metrics) {}

    /// Drop store entries that fell behind the horizon. No-op in batch mode.
    fn evict_expired(&mut self, _now: f64) {}

    fn candidate_gen(
        &mut self,
        query: &StreamItem<T>,
        metrics: &mut Metrics,
    ) -> CandidateAccumulator<T>;

    fn candidate_verify(
        &mut self,
        query: &StreamItem<T>,
        acc: CandidateAccumulator<T>,
        metrics: &mut Metrics,
    ) -> Result<Vec<SimilarPair<T>>>;

    fn index_item(&mut self, item: &StreamItem<T>, metrics: &mut Metrics) -> Result<()>;

    /// Total posting entries currently held, across all lists.
    fn posting_entries(&self) -> usize;

    fn enable_cv_log(&mut self) {}

    fn take_cv_log(&mut self) -> Vec<CvRecord<T>> {
        Vec::new()
    }
}

pub(crate) fn check_stream_order<T: Real>(
    mode: Mode,
    last_ts: &mut f64,
    item: &StreamItem<T>,
) -> Result<()> {
    if mode == Mode::Streaming && item.timestamp < *last_ts {
        return Err(Error::OutOfOrderStream {
            id: item.id,
            timestamp: item.timestamp,
            tail: *last_ts,
        });
    }
    if item.timestamp > *last_ts {
        *last_ts = item.timestamp;
    }
    Ok(())
}

/// Candidate generation shared by L2 and L2AP: a reverse-order scan over the
/// query's dimensions with the suffix-norm admission bound, per-entry decay,
/// and early Cauchy-Schwarz pruning. `rs1_prefix`, when present, carries the
/// cumulative decayed-max dots that tighten the admission bound (L2AP).
#[allow(clippy::too_many_arguments)]
pub(crate) fn l2_family_candidate_gen<T: Real>(
    lists: &mut HashMap<u32, PostingList<T>>,
    residuals: &ResidualStore<T>,
    query: &StreamItem<T>,
    params: &Params<T>,
    mode: Mode,
    rs1_prefix: Option<&[T]>,
    metrics: &mut Metrics,
) -> CandidateAccumulator<T> {
    let mut acc = CandidateAccumulator::new();
    let theta = params.theta;
    let now = query.timestamp;
    // The size filter needs candidate stats that only exist where residual
    // entries do; it is a batch-only refinement.
    let sz1 = match mode {
        Mode::Batch => Some(theta / query.stats.max_coord),
        Mode::Streaming => None,
    };
    let dims = query.vector.dims();
    let values = query.vector.values();
    let pn = &query.stats.prefix_norms;

    for k in (0..dims.len()).rev() {
        let Some(list) = lists.get_mut(&dims[k]) else {
            continue;
        };
        if mode == Mode::Streaming {
            if list.is_time_ordered() {
                list.truncate_expired_backward(now, params.tau)
                    .expect("time-ordered list");
            } else {
                list.prune_expired_forward(now, params.tau);
            }
        }
        let xj = values[k];
        let qnorm = pn[k];
        let rs1 = rs1_prefix.map(|p| p[k]);
        for e in list.iter() {
            metrics.entries_traversed += 1;
            if let Some(sz1) = sz1 {
                if let Some(re) = residuals.get(e.id) {
                    if real::<T>(re.full_nnz as f64) * re.full_max < sz1 {
                        continue;
                    }
                }
            }
            let ff = match mode {
                Mode::Batch => T::one(),
                Mode::Streaming => decay_unchecked(now - e.timestamp, params.lambda),
            };
            if !acc.is_candidate(e.id) {
                let mut remscore = qnorm * ff;
                if let Some(r) = rs1 {
                    if r < remscore {
                        remscore = r;
                    }
                }
                if remscore < theta {
                    continue;
                }
                metrics.candidates_generated += 1;
            }
            acc.add(e.id, xj * e.value);
            let l2bound = acc.score(e.id) + qnorm * e.prefix_norm * ff;
            if l2bound < theta {
                acc.zero(e.id);
            }
        }
    }
    acc
}

/// Verification shared by L2 and L2AP: three upper bounds, then the exact
/// residual completion for candidates none of the bounds could dismiss.
pub(crate) fn l2_family_candidate_verify<T: Real>(
    residuals: &ResidualStore<T>,
    query: &StreamItem<T>,
    acc: &CandidateAccumulator<T>,
    params: &Params<T>,
    mode: Mode,
    cv_log: &mut Option<Vec<CvRecord<T>>>,
    metrics: &mut Metrics,
) -> Result<Vec<SimilarPair<T>>> {
    let theta = params.theta;
    let mut pairs = Vec::new();
    for (id, c) in acc.iter_positive() {
        let entry = residuals.get(id).ok_or_else(|| {
            Error::InternalInconsistency(format!(
                "candidate {id} within horizon missing from residual store"
            ))
        })?;
        let ff = match mode {
            Mode::Batch => T::one(),
            Mode::Streaming => {
                decay_unchecked(query.timestamp - entry.timestamp, params.lambda)
            }
        };
        let ps1 = (c + entry.pscore_q) * ff;
        let cross_a = query.stats.max_coord * entry.prefix_sum;
        let cross_b = entry.prefix_max * query.stats.coord_sum;
        let ds1 = (c + cross_a.min(cross_b)) * ff;
        let shared_cap = real::<T>(query.stats.nnz.min(entry.prefix_nnz) as f64);
        let sz2 = (c + shared_cap * query.stats.max_coord * entry.prefix_max) * ff;
        if let Some(log) = cv_log.as_mut() {
            log.push(CvRecord { query: query.id, candidate: id, ps1, ds1, sz2 });
        }
        if ps1 >= theta && ds1 >= theta && sz2 >= theta {
            metrics.full_similarities += 1;
            let s = c + dot(&query.vector, &entry.prefix);
            let score = s * ff;
            if score >= theta {
                pairs.push(SimilarPair::new(query.id, id, score));
            }
        }
    }
    Ok(pairs)
}
