//! Streaming similarity self-join over sparse unit-vector streams.
//!
//! Reports every pair of vectors in a timestamped stream whose time-decayed
//! cosine similarity `dot(x, y) * exp(-lambda * |t(x) - t(y)|)` reaches a
//! threshold `theta`. Because unit vectors dot to at most one, pairs further
//! apart than the horizon `tau = ln(1/theta) / lambda` can never qualify,
//! which bounds the memory of both join frameworks:
//!
//! - [`engine::run_str`] keeps one continuously pruned index and queries it
//!   with every arriving item before insertion.
//! - [`engine::run_mb`] buffers horizon-length windows and joins them with
//!   throwaway batch indexes, decaying scores afterwards.
//!
//! Both frameworks accept three pluggable filtering indexes
//! ([`index::InvIndex`], [`index::L2Index`], [`index::L2apIndex`]) and
//! produce identical pair sets; [`oracle`] holds the brute-force reference
//! the test suites compare against.
//!
//! The similarity math is generic over the scalar type via [`scalar::Real`]
//! (`f32` or `f64`); timestamps, the file formats, and the CLI are pinned to
//! `f64`, with concrete aliases exported at the crate root.

pub mod decay;
pub mod engine;
pub mod error;
pub mod index;
pub mod io;
pub mod metrics;
pub mod oracle;
pub mod pair;
pub mod scalar;
pub mod storage;
pub mod vector;

pub use decay::{compute_horizon, decay_factor, decayed_similarity, Params};
pub use engine::{apply_decay, run, run_mb, run_str, run_str_traced, Algorithm, RunOutput};
pub use error::{Error, Result};
pub use index::{IndexKind, InvIndex, L2Index, L2apIndex, Mode, SimilarityIndex};
pub use metrics::Metrics;
pub use pair::{sort_pairs, SimilarPair};
pub use scalar::{real, Real};
pub use vector::{dot, normalize, prefix_norms, SparseVector, StreamItem, VectorStats};

/// Concrete `f64` aliases; the file formats and the CLI are pinned to these.
pub type SparseVector64 = SparseVector<f64>;
pub type VectorStats64 = VectorStats<f64>;
pub type StreamItem64 = StreamItem<f64>;
pub type Params64 = Params<f64>;
pub type SimilarPair64 = SimilarPair<f64>;
