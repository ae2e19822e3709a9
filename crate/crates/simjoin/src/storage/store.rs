//! Insertion-ordered id -> value stores (hash map plus order queue).
//!
//! Streaming inserts arrive in time order, so eviction walks the queue from
//! the oldest entry and stops at the first fresh one: amortized constant time
//! per stream item.

use std::collections::{HashMap, VecDeque};

use crate::vector::SparseVector;

#[derive(Debug, Clone)]
pub struct OrderedStore<V> {
    map: HashMap<u64, V>,
    order: VecDeque<u64>,
}

impl<V> Default for OrderedStore<V> {
    fn default() -> Self {
        OrderedStore { map: HashMap::new(), order: VecDeque::new() }
    }
}

impl<V> OrderedStore<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn contains(&self, id: u64) -> bool {
        self.map.contains_key(&id)
    }

    pub fn get(&self, id: u64) -> Option<&V> {
        self.map.get(&id)
    }

    pub fn get_mut(&mut self, id: u64) -> Option<&mut V> {
        self.map.get_mut(&id)
    }

    pub fn insert(&mut self, id: u64, value: V) {
        debug_assert!(!self.map.contains_key(&id), "stream ids are unique");
        self.map.insert(id, value);
        self.order.push_back(id);
    }

    /// Ids and values in insertion (= time) order.
    pub fn iter_in_order(&self) -> impl Iterator<Item = (u64, &V)> + '_ {
        self.order.iter().filter_map(move |id| self.map.get(id).map(|v| (*id, v)))
    }

    /// Evict entries older than `tau`, walking from the oldest and stopping
    /// at the first fresh one. Returns the evicted entries.
    pub fn evict_expired(
        &mut self,
        now: f64,
        tau: f64,
        timestamp_of: impl Fn(&V) -> f64,
    ) -> Vec<(u64, V)> {
        let mut evicted = Vec::new();
        while let Some(&front) = self.order.front() {
            let expired = match self.map.get(&front) {
                Some(v) => now - timestamp_of(v) > tau,
                None => true,
            };
            if !expired {
                break;
            }
            self.order.pop_front();
            if let Some(v) = self.map.remove(&front) {
                evicted.push((front, v));
            }
        }
        evicted
    }
}

/// Un-indexed prefix of a vector, kept to complete exact similarity scores,
/// together with the verification-bound inputs recorded at indexing time.
#[derive(Debug, Clone)]
pub struct ResidualEntry<T> {
    /// Coordinates that were not indexed (a prefix in dimension order).
    pub prefix: SparseVector<T>,
    /// Largest coordinate of the prefix.
    pub prefix_max: T,
    /// Coordinate sum of the prefix.
    pub prefix_sum: T,
    /// Non-zero count of the prefix.
    pub prefix_nnz: usize,
    /// Bound on the prefix similarity recorded just before indexing began.
    pub pscore_q: T,
    pub timestamp: f64,
    /// Full-vector stats, used by the batch-mode size filter.
    pub full_max: T,
    pub full_nnz: usize,
}

pub type ResidualStore<T> = OrderedStore<ResidualEntry<T>>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_store_evicts_nothing() {
        let mut store: OrderedStore<f64> = OrderedStore::new();
        assert!(store.evict_expired(100.0, 1.0, |&ts| ts).is_empty());
    }

    #[test]
    fn single_stale_entry_is_evicted() {
        let mut store: OrderedStore<f64> = OrderedStore::new();
        store.insert(7, 0.0);
        let evicted = store.evict_expired(10.0, 1.0, |&ts| ts);
        assert_eq!(evicted.len(), 1);
        assert_eq!(evicted[0].0, 7);
        assert!(store.is_empty());
    }

    #[test]
    fn eviction_matches_predicate_filter_for_ordered_inserts() {
        let mut store: OrderedStore<f64> = OrderedStore::new();
        let stamps = [0.0, 0.5, 2.0, 3.5, 3.6, 8.0];
        for (i, &ts) in stamps.iter().enumerate() {
            store.insert(i as u64, ts);
        }
        let now = 9.0;
        let tau = 5.5;
        let expect: Vec<u64> = stamps
            .iter()
            .enumerate()
            .filter(|(_, &ts)| now - ts > tau)
            .map(|(i, _)| i as u64)
            .collect();
        let got: Vec<u64> = store
            .evict_expired(now, tau, |&ts| ts)
            .into_iter()
            .map(|(id, _)| id)
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn iteration_order_is_insertion_order() {
        let mut store: OrderedStore<f64> = OrderedStore::new();
        for (i, ts) in [(3u64, 1.0), (1, 2.0), (9, 3.0)] {
            store.insert(i, ts);
        }
        let ids: Vec<u64> = store.iter_in_order().map(|(id, _)| id).collect();
        assert_eq!(ids, vec![3, 1, 9]);
    }
}
