//! Accumulated partial scores for candidate vectors.
//!
//! Candidates pruned mid-generation are zeroed rather than removed, so the
//! "already a candidate" test stays a plain `score > 0` check and
//! verification skips the zeros.

use std::collections::HashMap;

use crate::scalar::Real;

#[derive(Debug, Clone, Default)]
pub struct CandidateAccumulator<T> {
    scores: HashMap<u64, T>,
}

impl<T: Real> CandidateAccumulator<T> {
    pub fn new() -> Self {
        CandidateAccumulator { scores: HashMap::new() }
    }

    /// Current accumulated score; zero when absent or pruned.
    pub fn score(&self, id: u64) -> T {
        self.scores.get(&id).copied().unwrap_or_else(T::zero)
    }

    pub fn is_candidate(&self, id: u64) -> bool {
        self.score(id) > T::zero()
    }

    pub fn add(&mut self, id: u64, delta: T) {
        let slot = self.scores.entry(id).or_insert_with(T::zero);
        *slot = *slot + delta;
    }

    pub fn zero(&mut self, id: u64) {
        if let Some(slot) = self.scores.get_mut(&id) {
            *slot = T::zero();
        }
    }

    /// Candidates that survived generation with a positive score.
    pub fn iter_positive(&self) -> impl Iterator<Item = (u64, T)> + '_ {
        self.scores
            .iter()
            .filter(|(_, &s)| s > T::zero())
            .map(|(&id, &s)| (id, s))
    }

    pub fn positive_count(&self) -> usize {
        self.scores.values().filter(|&&s| s > T::zero()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeroed_candidates_are_skipped_but_remembered() {
        let mut acc: CandidateAccumulator<f64> = CandidateAccumulator::new();
        acc.add(1, 0.4);
        acc.add(2, 0.3);
        acc.zero(1);
        assert!(!acc.is_candidate(1));
        assert!(acc.is_candidate(2));
        assert_eq!(acc.positive_count(), 1);
        assert_eq!(acc.score(1), 0.0);
        // Re-accumulation after zeroing starts from zero.
        acc.add(1, 0.2);
        assert_eq!(acc.score(1), 0.2);
    }
}
