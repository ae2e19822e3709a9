//! Sparse unit vectors and the per-vector statistics the pruning bounds rely on.
//!
//! A [`SparseVector`] stores only strictly positive coordinates, sorted by
//! dimension, and is normalized to unit Euclidean length on construction.
//! [`VectorStats`] caches the derived quantities (maximum coordinate,
//! coordinate sum, prefix norms) that candidate generation and verification
//! read on every probe.

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Tolerance for treating a vector as already unit-normalized.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// A sparse vector with strictly positive coordinates, sorted by ascending
/// dimension and normalized to unit Euclidean length.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector<T> {
    dims: Vec<u32>,
    values: Vec<T>,
}

impl<T: Real> SparseVector<T> {
    /// Number of non-zero coordinates.
    pub fn nnz(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Coordinates in ascending dimension order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, T)> + '_ {
        self.dims.iter().copied().zip(self.values.iter().copied())
    }

    /// Euclidean norm of the stored coordinates.
    pub fn norm(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, &v| acc + v * v)
            .sqrt()
    }

    /// An empty fragment; used for fully indexed residual prefixes.
    pub fn empty() -> Self {
        SparseVector { dims: Vec::new(), values: Vec::new() }
    }

    /// Fragment holding the first `n` coordinates. The fragment is not
    /// re-normalized; it represents a prefix of a unit vector.
    pub fn prefix_fragment(&self, n: usize) -> Self {
        SparseVector {
            dims: self.dims[..n].to_vec(),
            values: self.values[..n].to_vec(),
        }
    }
}

/// Merge duplicate dimensions by summation, drop zeros, and scale to unit
/// length. Inputs already within [`NORM_TOLERANCE`] of unit length are kept
/// bit-for-bit, which makes normalization idempotent.
pub fn normalize<T: Real>(raw: &[(u32, T)]) -> Result<SparseVector<T>> {
    let mut coords: Vec<(u32, T)> = Vec::with_capacity(raw.len());
    for &(dim, value) in raw {
        if !value.is_finite() {
            return Err(Error::NonFiniteCoordinate { dim });
        }
        if value < T::zero() {
            return Err(Error::NegativeCoordinate { dim });
        }
        coords.push((dim, value));
    }
    coords.sort_by_key(|&(dim, _)| dim);

    let mut dims: Vec<u32> = Vec::with_capacity(coords.len());
    let mut values: Vec<T> = Vec::with_capacity(coords.len());
    for (dim, value) in coords {
        match dims.last() {
            Some(&last) if last == dim => {
                let slot = values.last_mut().expect("parallel arrays");
                *slot = *slot + value;
            }
            _ => {
                dims.push(dim);
                values.push(value);
            }
        }
    }
    // Zero coordinates are absent by invariant.
    let mut keep_dims = Vec::with_capacity(dims.len());
    let mut keep_values = Vec::with_capacity(values.len());
    for (dim, value) in dims.into_iter().zip(values) {
        if value > T::zero() {
            keep_dims.push(dim);
            keep_values.push(value);
        }
    }
    if keep_values.is_empty() {
        return Err(Error::EmptyVector);
    }

    let norm = keep_values
        .iter()
        .fold(T::zero(), |acc, &v| acc + v * v)
        .sqrt();
    let tol: T = real(NORM_TOLERANCE);
    if (norm - T::one()).abs() > tol {
        for v in &mut keep_values {
            *v = *v / norm;
        }
    }
    Ok(SparseVector { dims: keep_dims, values: keep_values })
}

/// Dot product via a merge join over the two sorted coordinate lists.
pub fn dot<T: Real>(x: &SparseVector<T>, y: &SparseVector<T>) -> T {
    let mut acc = T::zero();
    let (mut i, mut j) = (0usize, 0usize);
    while i < x.dims.len() && j < y.dims.len() {
        match x.dims[i].cmp(&y.dims[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = acc + x.values[i] * y.values[j];
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Prefix norms of a vector: entry `k` is the Euclidean norm of the first
/// `k + 1` coordinates in ascending dimension order. Monotone non-decreasing,
/// final entry 1 within [`NORM_TOLERANCE`].
pub fn prefix_norms<T: Real>(x: &SparseVector<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(x.nnz());
    let mut sum_sq = T::zero();
    for &v in x.values() {
        sum_sq = sum_sq + v * v;
        out.push(sum_sq.sqrt());
    }
    out
}

/// Derived statistics of a sparse vector, computed once at ingestion.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorStats<T> {
    /// Largest coordinate value.
    pub max_coord: T,
    /// Sum of all coordinate values.
    pub coord_sum: T,
    /// Number of non-zero coordinates.
    pub nnz: usize,
    /// Cumulative prefix norms, one entry per coordinate, inclusive.
    pub prefix_norms: Vec<T>,
}

impl<T: Real> VectorStats<T> {
    pub fn of(vector: &SparseVector<T>) -> Self {
        let mut max_coord = T::zero();
        let mut coord_sum = T::zero();
        for &v in vector.values() {
            if v > max_coord {
                max_coord = v;
            }
            coord_sum = coord_sum + v;
        }
        VectorStats {
            max_coord,
            coord_sum,
            nnz: vector.nnz(),
            prefix_norms: prefix_norms(vector),
        }
    }

    /// Stats of a prefix fragment of a unit vector (not re-normalized).
    pub fn of_fragment(fragment: &SparseVector<T>) -> (T, T, usize) {
        let mut max_coord = T::zero();
        let mut coord_sum = T::zero();
        for &v in fragment.values() {
            if v > max_coord {
                max_coord = v;
            }
            coord_sum = coord_sum + v;
        }
        (max_coord, coord_sum, fragment.nnz())
    }
}

/// A vector together with its arrival timestamp and stable stream id.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamItem<T> {
    pub id: u64,
    /// Arrival time in seconds from an arbitrary epoch.
    pub timestamp: f64,
    pub vector: SparseVector<T>,
    pub stats: VectorStats<T>,
}

impl<T: Real> StreamItem<T> {
    pub fn new(id: u64, timestamp: f64, vector: SparseVector<T>) -> Self {
        let stats = VectorStats::of(&vector);
        StreamItem { id, timestamp, vector, stats }
    }
}
