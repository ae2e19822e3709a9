//! Posting lists backed by a growable/shrinkable circular buffer.
//!
//! Capacity is always a power of two with a floor of [`MIN_CAPACITY`]: it
//! doubles when the buffer fills and halves while occupancy drops below a
//! quarter. Time-ordered lists support constant-time truncation of the
//! expired head; a list that receives an out-of-order append (re-indexing)
//! is demoted permanently to forward-prune mode.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Smallest ring capacity; avoids resize thrash on tiny lists.
pub const MIN_CAPACITY: usize = 8;

/// One posting entry: vector reference, coordinate value, inclusive prefix
/// norm at this coordinate, and the vector's arrival time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostingEntry<T> {
    pub id: u64,
    pub value: T,
    pub prefix_norm: T,
    pub timestamp: f64,
}

#[derive(Debug, Clone)]
pub struct PostingList<T> {
    slots: Vec<Option<PostingEntry<T>>>,
    head: usize,
    len: usize,
    time_ordered: bool,
}

impl<T: Real> Default for PostingList<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> PostingList<T> {
    pub fn new() -> Self {
        PostingList {
            slots: vec![None; MIN_CAPACITY],
            head: 0,
            len: 0,
            time_ordered: true,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    pub fn is_time_ordered(&self) -> bool {
        self.time_ordered
    }

    fn mask(&self) -> usize {
        self.slots.len() - 1
    }

    fn get(&self, logical: usize) -> &PostingEntry<T> {
        debug_assert!(logical < self.len);
        self.slots[(self.head + logical) & self.mask()]
            .as_ref()
            .expect("occupied slot")
    }

    pub fn back(&self) -> Option<&PostingEntry<T>> {
        if self.len == 0 {
            None
        } else {
            Some(self.get(self.len - 1))
        }
    }

    /// Entries oldest-to-newest in logical order.
    pub fn iter(&self) -> impl Iterator<Item = &PostingEntry<T>> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Append at the tail, doubling capacity first when full. An append that
    /// breaks timestamp order demotes the list to forward-prune mode instead
    /// of erroring.
    pub fn push(&mut self, entry: PostingEntry<T>) {
        if self.len == self.capacity() {
            self.resize(self.capacity() * 2);
        }
        if self.time_ordered {
            if let Some(tail) = self.back() {
                if entry.timestamp < tail.timestamp {
                    self.time_ordered = false;
                }
            }
        }
        let idx = (self.head + self.len) & self.mask();
        self.slots[idx] = Some(entry);
        self.len += 1;
    }

    /// Drop every expired entry from the head of a time-ordered list; the
    /// expired region is a contiguous prefix, so only the head pointer moves.
    pub fn truncate_expired_backward(&mut self, now: f64, tau: f64) -> Result<usize> {
        if !self.time_ordered {
            return Err(Error::WrongOrderMode);
        }
        let mut dropped = 0;
        while self.len > 0 {
            let front = self.slots[self.head].as_ref().expect("occupied slot");
            if now - front.timestamp > tau {
                self.slots[self.head] = None;
                self.head = (self.head + 1) & self.mask();
                self.len -= 1;
                dropped += 1;
            } else {
                break;
            }
        }
        self.maybe_shrink();
        Ok(dropped)
    }

    /// Remove every expired entry by a full forward scan, preserving the
    /// relative order of survivors. Works on unordered lists.
    pub fn prune_expired_forward(&mut self, now: f64, tau: f64) -> usize {
        let survivors: Vec<PostingEntry<T>> = self
            .iter()
            .filter(|e| now - e.timestamp <= tau)
            .copied()
            .collect();
        let dropped = self.len - survivors.len();
        if dropped > 0 {
            for slot in &mut self.slots {
                *slot = None;
            }
            self.head = 0;
            self.len = 0;
            for entry in survivors {
                let idx = self.len; // head is 0
                self.slots[idx] = Some(entry);
                self.len += 1;
            }
            self.maybe_shrink();
        }
        dropped
    }

    fn resize(&mut self, new_capacity: usize) {
        debug_assert!(new_capacity.is_power_of_two() && new_capacity >= self.len);
        let mut slots = vec![None; new_capacity];
        for (i, slot) in slots.iter_mut().enumerate().take(self.len) {
            *slot = Some(*self.get(i));
        }
        self.slots = slots;
        self.head = 0;
    }

    fn maybe_shrink(&mut self) {
        while self.capacity() > MIN_CAPACITY && self.len < self.capacity() / 4 {
            let target = self.capacity() / 2;
            self.resize(target);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(id: u64, ts: f64) -> PostingEntry<f64> {
        PostingEntry { id, value: 0.5, prefix_norm: 0.5, timestamp: ts }
    }

    #[test]
    fn append_to_empty_list() {
        let mut list = PostingList::new();
        list.push(entry(1, 0.0));
        assert_eq!(list.len(), 1);
        assert_eq!(list.capacity(), MIN_CAPACITY);
        assert!(list.is_time_ordered());
    }

    #[test]
    fn ninth_append_doubles_capacity_and_keeps_order() {
        let mut list = PostingList::new();
        let mut reference = Vec::new();
        for i in 0..9u64 {
            list.push(entry(i, i as f64));
            reference.push(i);
        }
        assert_eq!(list.capacity(), 16);
        let got: Vec<u64> = list.iter().map(|e| e.id).collect();
        assert_eq!(got, reference);
    }

    #[test]
    fn out_of_order_append_demotes_list() {
        let mut list = PostingList::new();
        list.push(entry(1, 5.0));
        list.push(entry(2, 3.0));
        assert!(!list.is_time_ordered());
        assert_eq!(list.len(), 2);
        assert!(matches!(
            list.truncate_expired_backward(10.0, 1.0),
            Err(Error::WrongOrderMode)
        ));
    }

    #[test]
    fn truncate_fresh_list_drops_nothing() {
        let mut list = PostingList::new();
        for i in 0..4u64 {
            list.push(entry(i, i as f64));
        }
        assert_eq!(list.truncate_expired_backward(3.0, 10.0).unwrap(), 0);
        assert_eq!(list.len(), 4);
    }

    #[test]
    fn truncate_empties_fully_stale_list() {
        let mut list = PostingList::new();
        for i in 0..4u64 {
            list.push(entry(i, i as f64));
        }
        assert_eq!(list.truncate_expired_backward(100.0, 1.0).unwrap(), 4);
        assert!(list.is_empty());
    }

    #[test]
    fn truncate_mixed_ages_matches_predicate_filter() {
        let mut list = PostingList::new();
        let stamps = [0.0, 1.0, 4.0, 4.5, 9.0];
        for (i, &ts) in stamps.iter().enumerate() {
            list.push(entry(i as u64, ts));
        }
        let now = 10.0;
        let tau = 6.0;
        let expect: Vec<u64> = stamps
            .iter()
            .enumerate()
            .filter(|(_, &ts)| now - ts <= tau)
            .map(|(i, _)| i as u64)
            .collect();
        let dropped = list.truncate_expired_backward(now, tau).unwrap();
        assert_eq!(dropped, stamps.len() - expect.len());
        let got: Vec<u64> = list.iter().map(|e| e.id).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn forward_prune_matches_backward_truncation_on_ordered_lists() {
        let stamps = [0.0, 1.0, 4.0, 4.5, 9.0];
        let mut a = PostingList::new();
        let mut b = PostingList::new();
        for (i, &ts) in stamps.iter().enumerate() {
            a.push(entry(i as u64, ts));
            b.push(entry(i as u64, ts));
        }
        a.truncate_expired_backward(10.0, 6.0).unwrap();
        b.prune_expired_forward(10.0, 6.0);
        let ga: Vec<u64> = a.iter().map(|e| e.id).collect();
        let gb: Vec<u64> = b.iter().map(|e| e.id).collect();
        assert_eq!(ga, gb);
    }

    #[test]
    fn forward_prune_keeps_survivor_order_on_demoted_list() {
        let mut list = PostingList::new();
        list.push(entry(0, 8.0));
        list.push(entry(1, 2.0)); // demotes
        list.push(entry(2, 9.0));
        list.push(entry(3, 1.0));
        assert!(!list.is_time_ordered());
        let dropped = list.prune_expired_forward(10.0, 5.0);
        assert_eq!(dropped, 2);
        let got: Vec<u64> = list.iter().map(|e| e.id).collect();
        assert_eq!(got, vec![0, 2]);
        assert!(!list.is_time_ordered());
    }

    #[test]
    fn shrink_halves_until_quarter_full() {
        let mut list = PostingList::new();
        for i in 0..64u64 {
            list.push(entry(i, i as f64));
        }
        assert_eq!(list.capacity(), 64);
        // Keep only the last entry.
        list.truncate_expired_backward(63.0, 0.5).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list.capacity(), MIN_CAPACITY);
    }
}
