//! Index storage primitives: circular-buffer posting lists, insertion-ordered
//! residual stores, and the candidate score accumulator.

mod accum;
mod ring;
mod store;

pub use accum::CandidateAccumulator;
pub use ring::{PostingEntry, PostingList, MIN_CAPACITY};
pub use store::{OrderedStore, ResidualEntry, ResidualStore};
