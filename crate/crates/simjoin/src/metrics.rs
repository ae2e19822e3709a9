//! Run counters and phase timings.

use std::time::Duration;

/// Counters and wall-clock phase times accumulated over one join run.
///
/// The counter chain `pairs_output <= full_similarities <=
/// candidates_generated <= entries_traversed` holds after every run.
#[derive(Debug, Clone, Default)]
pub struct Metrics {
    pub items_processed: u64,
    /// Posting entries touched during candidate generation (within horizon).
    pub entries_traversed: u64,
    /// Candidate admissions (a score transitioning from zero to positive).
    pub candidates_generated: u64,
    /// Candidates whose full similarity was computed during verification.
    pub full_similarities: u64,
    pub pairs_output: u64,
    /// Posting entries appended by max-vector re-indexing.
    pub reindex_operations: u64,
    pub ic_time: Duration,
    pub cg_time: Duration,
    pub cv_time: Duration,
    pub total_time: Duration,
}

impl Metrics {
    pub fn chain_holds(&self) -> bool {
        self.pairs_output <= self.full_similarities
            && self.full_similarities <= self.candidates_generated
            && self.candidates_generated <= self.entries_traversed
    }

    pub const CSV_HEADER: &'static str =
        "algorithm,index,theta,lambda,tau,items,entries,candidates,verified,pairs,reindexes,ic_ms,cg_ms,cv_ms,total_ms";

    /// One CSV row matching [`Metrics::CSV_HEADER`].
    pub fn csv_row(
        &self,
        algorithm: &str,
        index: &str,
        theta: f64,
        lambda: f64,
        tau: f64,
    ) -> String {
        fn ms(d: Duration) -> f64 {
            d.as_secs_f64() * 1e3
        }
        format!(
            "{algorithm},{index},{theta},{lambda},{tau},{},{},{},{},{},{},{:.3},{:.3},{:.3},{:.3}",
            self.items_processed,
            self.entries_traversed,
            self.candidates_generated,
            self.full_similarities,
            self.pairs_output,
            self.reindex_operations,
            ms(self.ic_time),
            ms(self.cg_time),
            ms(self.cv_time),
            ms(self.total_time),
        )
    }
}
