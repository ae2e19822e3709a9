//! The two join frameworks.
//!
//! Streaming (`run_str`) keeps one continuously pruned index: every arriving
//! item queries the index before being inserted, so each unordered pair is
//! reported exactly once and never against itself.
//!
//! Mini-batch (`run_mb`) buffers horizon-length windows and joins them with
//! throwaway batch indexes: when a window closes, the previous window is
//! indexed (emitting its intra-window pairs), probed with every item of the
//! closing window, and dropped. Batch indexes accumulate raw dot products;
//! decay is applied to the emitted pairs afterwards. Both frameworks produce
//! the same pair set; mini-batch just reports later.

use std::collections::HashMap;
use std::str::FromStr;
use std::time::Instant;

use crate::decay::{decay_unchecked, Params};
use crate::error::{Error, Result};
use crate::index::{
    CvRecord, IndexKind, InvIndex, L2Index, L2apIndex, Mode, SimilarityIndex,
};
use crate::metrics::Metrics;
use crate::pair::SimilarPair;
use crate::scalar::Real;
use crate::vector::StreamItem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Str,
    Mb,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Str, Algorithm::Mb];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Str => "str",
            Algorithm::Mb => "mb",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "str" => Ok(Algorithm::Str),
            "mb" => Ok(Algorithm::Mb),
            other => Err(format!("unknown algorithm: {other}")),
        }
    }
}

/// Pairs, counters, and (when tracing) the verification bounds of one run.
#[derive(Debug)]
pub struct RunOutput<T> {
    pub pairs: Vec<SimilarPair<T>>,
    pub metrics: Metrics,
    pub cv_log: Vec<CvRecord<T>>,
}

fn make_streaming_index<T: Real>(
    kind: IndexKind,
    params: Params<T>,
) -> Box<dyn SimilarityIndex<T>> {
    match kind {
        IndexKind::Inv => Box::new(InvIndex::new(params, Mode::Streaming)),
        IndexKind::L2 => Box::new(L2Index::new(params, Mode::Streaming)),
        IndexKind::L2ap => Box::new(L2apIndex::new_streaming(params)),
    }
}

fn make_batch_index<T: Real>(
    kind: IndexKind,
    params: Params<T>,
    max_vec: HashMap<u32, T>,
) -> Box<dyn SimilarityIndex<T>> {
    match kind {
        IndexKind::Inv => Box::new(InvIndex::new(params, Mode::Batch)),
        IndexKind::L2 => Box::new(L2Index::new(params, Mode::Batch)),
        IndexKind::L2ap => Box::new(L2apIndex::new_batch(params, max_vec)),
    }
}

/// Run the given algorithm over an in-order stream.
pub fn run<T, I>(
    items: I,
    params: &Params<T>,
    algorithm: Algorithm,
    kind: IndexKind,
) -> Result<RunOutput<T>>
where
    T: Real,
    I: IntoIterator<Item = StreamItem<T>>,
{
    match algorithm {
        Algorithm::Str => run_str(items, params, kind),
        Algorithm::Mb => run_mb(items, params, kind),
    }
}

pub fn run_str<T, I>(items: I, params: &Params<T>, kind: IndexKind) -> Result<RunOutput<T>>
where
    T: Real,
    I: IntoIterator<Item = StreamItem<T>>,
{
    run_str_inner(items, params, kind, false)
}

/// As [`run_str`] but with verification-bound tracing enabled.
pub fn run_str_traced<T, I>(
    items: I,
    params: &Params<T>,
    kind: IndexKind,
) -> Result<RunOutput<T>>
where
    T: Real,
    I: IntoIterator<Item = StreamItem<T>>,
{
    run_str_inner(items, params, kind, true)
}

fn run_str_inner<T, I>(
    items: I,
    params: &Params<T>,
    kind: IndexKind,
    trace: bool,
) -> Result<RunOutput<T>>
where
    T: Real,
    I: IntoIterator<Item = StreamItem<T>>,
{
    let started = Instant::now();
    let mut index = make_streaming_index(kind, *params);
    if trace {
        index.enable_cv_log();
    }
    let mut metrics = Metrics::default();
    let mut pairs = Vec::new();
    let mut last_ts = f64::NEG_INFINITY;

    for item in items {
        if item.timestamp < last_ts {
            return Err(Error::OutOfOrderStream {
                id: item.id,
                timestamp: item.timestamp,
                tail: last_ts,
            });
        }
        last_ts = item.timestamp;
        metrics.items_processed += 1;

        let t = Instant::now();
        index.prepare(&item, &mut metrics);
        index.evict_expired(item.timestamp);
        metrics.ic_time += t.elapsed();

        let t = Instant::now();
        let acc = index.candidate_gen(&item, &mut metrics);
        metrics.cg_time += t.elapsed();

        let t = Instant::now();
        let found = index.candidate_verify(&item, acc, &mut metrics)?;
        metrics.cv_time += t.elapsed();
        pairs.extend(found);

        let t = Instant::now();
        index.index_item(&item, &mut metrics)?;
        metrics.ic_time += t.elapsed();
    }

    metrics.pairs_output = pairs.len() as u64;
    metrics.total_time = started.elapsed();
    Ok(RunOutput { pairs, metrics, cv_log: index.take_cv_log() })
}

/// One horizon-length window of buffered items plus its max-vector snapshot.
/// Only the L2AP bounds consume the snapshot, so the other indexes skip
/// maintaining it.
struct WindowBuffer<T> {
    items: Vec<StreamItem<T>>,
    max_vec: HashMap<u32, T>,
    window_start: f64,
    track_max: bool,
}

impl<T: Real> WindowBuffer<T> {
    fn new(track_max: bool) -> Self {
        WindowBuffer {
            items: Vec::new(),
            max_vec: HashMap::new(),
            window_start: 0.0,
            track_max,
        }
    }

    fn push(&mut self, item: StreamItem<T>) {
        if self.track_max {
            for (dim, value) in item.vector.iter() {
                let slot = self.max_vec.entry(dim).or_insert_with(T::zero);
                if value > *slot {
                    *slot = value;
                }
            }
        }
        self.items.push(item);
    }

    fn clear(&mut self) {
        self.items.clear();
        self.max_vec.clear();
    }
}

pub fn run_mb<T, I>(items: I, params: &Params<T>, kind: IndexKind) -> Result<RunOutput<T>>
where
    T: Real,
    I: IntoIterator<Item = StreamItem<T>>,
{
    let started = Instant::now();
    let tau = params.tau;
    let track_max = kind == IndexKind::L2ap;
    let mut metrics = Metrics::default();
    let mut out: Vec<SimilarPair<T>> = Vec::new();
    let mut prev = WindowBuffer::new(track_max);
    let mut cur = WindowBuffer::new(track_max);
    let mut anchor: Option<f64> = None;
    let mut last_ts = f64::NEG_INFINITY;

    for item in items {
        if item.timestamp < last_ts {
            return Err(Error::OutOfOrderStream {
                id: item.id,
                timestamp: item.timestamp,
                tail: last_ts,
            });
        }
        last_ts = item.timestamp;
        metrics.items_processed += 1;

        let t0 = *anchor.get_or_insert_with(|| {
            cur.window_start = item.timestamp;
            item.timestamp
        });

        loop {
            let closes = if tau > 0.0 {
                item.timestamp >= cur.window_start + tau
            } else {
                item.timestamp > cur.window_start
            };
            if !closes {
                break;
            }
            if prev.items.is_empty() && cur.items.is_empty() {
                // Skip an empty stretch in one step, staying aligned to the
                // first item's timestamp. Rounding at extreme ratios may land
                // one window short; forcing strict progress keeps the loop
                // finite either way.
                let mut jumped = if tau > 0.0 {
                    let k = ((item.timestamp - t0) / tau).floor();
                    let ws = t0 + k * tau;
                    if item.timestamp < ws { ws - tau } else { ws }
                } else {
                    item.timestamp
                };
                if jumped <= cur.window_start {
                    jumped = cur.window_start + tau;
                }
                cur.window_start = jumped;
                continue;
            }
            let next_start = cur.window_start + tau;
            close_window(kind, params, &mut prev, &mut cur, &mut out, &mut metrics)?;
            cur.window_start = next_start;
        }
        cur.push(item);
    }

    if anchor.is_some() {
        // Build over the last full window and probe the final partial one,
        // then index the final window itself for its intra-window pairs.
        close_window(kind, params, &mut prev, &mut cur, &mut out, &mut metrics)?;
        close_window(kind, params, &mut prev, &mut cur, &mut out, &mut metrics)?;
    }

    metrics.pairs_output = out.len() as u64;
    metrics.total_time = started.elapsed();
    Ok(RunOutput { pairs: out, metrics, cv_log: Vec::new() })
}

/// Index the previous window (emitting its intra-window pairs), probe it with
/// every item of the closing window, decay and report, then rotate windows.
fn close_window<T: Real>(
    kind: IndexKind,
    params: &Params<T>,
    prev: &mut WindowBuffer<T>,
    cur: &mut WindowBuffer<T>,
    out: &mut Vec<SimilarPair<T>>,
    metrics: &mut Metrics,
) -> Result<()> {
    if !prev.items.is_empty() || !cur.items.is_empty() {
        let mut combined = prev.max_vec.clone();
        for (&dim, &value) in &cur.max_vec {
            let slot = combined.entry(dim).or_insert_with(T::zero);
            if value > *slot {
                *slot = value;
            }
        }
        let mut index = make_batch_index(kind, *params, combined);
        let mut raw: Vec<SimilarPair<T>> = Vec::new();

        for it in &prev.items {
            let t = Instant::now();
            let acc = index.candidate_gen(it, metrics);
            metrics.cg_time += t.elapsed();
            let t = Instant::now();
            raw.extend(index.candidate_verify(it, acc, metrics)?);
            metrics.cv_time += t.elapsed();
            let t = Instant::now();
            index.index_item(it, metrics)?;
            metrics.ic_time += t.elapsed();
        }
        for it in &cur.items {
            let t = Instant::now();
            let acc = index.candidate_gen(it, metrics);
            metrics.cg_time += t.elapsed();
            let t = Instant::now();
            raw.extend(index.candidate_verify(it, acc, metrics)?);
            metrics.cv_time += t.elapsed();
        }

        let timestamps: HashMap<u64, f64> = prev
            .items
            .iter()
            .chain(cur.items.iter())
            .map(|it| (it.id, it.timestamp))
            .collect();
        out.extend(apply_decay(&raw, &timestamps, params)?);
    }
    // Rotate: the closing window becomes previous; the caller re-anchors
    // window_start before the next push.
    std::mem::swap(prev, cur);
    cur.clear();
    Ok(())
}

/// Decay raw-dot pairs emitted by a batch index and drop those that no
/// longer reach the threshold (or lie beyond the horizon, which the decayed
/// score cannot reach anyway).
pub fn apply_decay<T: Real>(
    raw: &[SimilarPair<T>],
    timestamps: &HashMap<u64, f64>,
    params: &Params<T>,
) -> Result<Vec<SimilarPair<T>>> {
    let mut kept = Vec::new();
    for p in raw {
        let ta = *timestamps.get(&p.older).ok_or_else(|| {
            Error::InternalInconsistency(format!("pair references unknown id {}", p.older))
        })?;
        let tb = *timestamps.get(&p.newer).ok_or_else(|| {
            Error::InternalInconsistency(format!("pair references unknown id {}", p.newer))
        })?;
        let dt = (ta - tb).abs();
        if dt > params.tau {
            continue;
        }
        let score = p.score * decay_unchecked(dt, params.lambda);
        if score >= params.theta {
            kept.push(SimilarPair { older: p.older, newer: p.newer, score });
        }
    }
    Ok(kept)
}
