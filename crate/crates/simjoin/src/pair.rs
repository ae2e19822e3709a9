/// A reported similar pair. Ids are normalized so `older < newer`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarPair<T> {
    pub older: u64,
    pub newer: u64,
    pub score: T,
}

impl<T> SimilarPair<T> {
    pub fn new(a: u64, b: u64, score: T) -> Self {
        debug_assert_ne!(a, b, "self-pairs are never reported");
        let (older, newer) = if a < b { (a, b) } else { (b, a) };
        SimilarPair { older, newer, score }
    }
}

/// Stable sort by `(older, newer)` so outputs are diffable across algorithms
/// despite differing report times.
pub fn sort_pairs<T>(pairs: &mut [SimilarPair<T>]) {
    pairs.sort_by_key(|p| (p.older, p.newer));
}
