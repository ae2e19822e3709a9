//! Time-decayed similarity and the time horizon derived from it.
//!
//! The similarity of two items is their dot product scaled by
//! `exp(-lambda * |t(x) - t(y)|)`. Because the dot product of unit vectors is
//! at most one, any pair further apart than the horizon
//! `tau = ln(1/theta) / lambda` can never reach the threshold, which is what
//! lets every index drop old data.

use crate::error::{Error, Result};
use crate::scalar::{real, Real};
use crate::vector::{dot, StreamItem};

/// Run parameters: similarity threshold, decay rate, and the derived horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params<T> {
    /// Similarity threshold in (0, 1].
    pub theta: T,
    /// Time-decay rate, strictly positive.
    pub lambda: T,
    /// Time horizon in seconds: `ln(1/theta) / lambda`.
    pub tau: f64,
}

impl<T: Real> Params<T> {
    pub fn new(theta: T, lambda: T) -> Result<Self> {
        let tau = compute_horizon(theta, lambda)?;
        Ok(Params { theta, lambda, tau })
    }
}

/// `exp(-lambda * dt)` for a non-negative time delta.
pub fn decay_factor<T: Real>(dt: f64, lambda: T) -> Result<T> {
    if dt < 0.0 {
        return Err(Error::NegativeDelta(dt));
    }
    Ok(decay_unchecked(dt, lambda))
}

#[inline]
pub(crate) fn decay_unchecked<T: Real>(dt: f64, lambda: T) -> T {
    (-(lambda * real::<T>(dt))).exp()
}

/// Time-dependent similarity: `dot(x, y) * exp(-lambda * |t(x) - t(y)|)`.
pub fn decayed_similarity<T: Real>(x: &StreamItem<T>, y: &StreamItem<T>, lambda: T) -> T {
    let dt = (x.timestamp - y.timestamp).abs();
    dot(&x.vector, &y.vector) * decay_unchecked(dt, lambda)
}

/// Horizon beyond which no pair can reach the threshold:
/// `tau = ln(1/theta) / lambda`.
pub fn compute_horizon<T: Real>(theta: T, lambda: T) -> Result<f64> {
    let theta_f = theta.to_f64().unwrap_or(f64::NAN);
    if theta_f.is_nan() || theta_f <= 0.0 || theta_f > 1.0 {
        return Err(Error::InvalidThreshold(theta_f));
    }
    let lambda_f = lambda.to_f64().unwrap_or(f64::NAN);
    if lambda_f.is_nan() || lambda_f <= 0.0 {
        return Err(Error::InvalidDecay(lambda_f));
    }
    let tau = (T::one() / theta).ln() / lambda;
    Ok(tau.to_f64().expect("horizon representable as f64"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::normalize;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn decay_factor_at_zero_delta() {
        assert_eq!(decay_factor(0.0, 3.7f64).unwrap(), 1.0);
    }

    #[test]
    fn decay_factor_halves_per_ln2_unit() {
        assert!((decay_factor(1.0, LN2).unwrap() - 0.5).abs() < 1e-15);
        assert!((decay_factor(2.0, LN2).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn decay_factor_rejects_negative_delta() {
        assert!(matches!(decay_factor(-0.5, 1.0f64), Err(Error::NegativeDelta(_))));
    }

    #[test]
    fn decayed_similarity_identical_vectors() {
        let v = normalize(&[(1u32, 1.0f64), (2, 1.0)]).unwrap();
        let x = StreamItem::new(0, 0.0, v.clone());
        let y = StreamItem::new(1, 1.0, v);
        assert!((decayed_similarity(&x, &y, LN2) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn decayed_similarity_zero_delta_equals_dot() {
        let a = normalize(&[(1u32, 1.0f64), (2, 1.0)]).unwrap();
        let b = normalize(&[(1u32, 1.0f64), (3, 1.0)]).unwrap();
        let x = StreamItem::new(0, 5.0, a.clone());
        let y = StreamItem::new(1, 5.0, b.clone());
        assert_eq!(decayed_similarity(&x, &y, LN2), dot(&a, &b));
    }

    #[test]
    fn decayed_similarity_half_dot_pair() {
        let a = normalize(&[(1u32, 1.0f64), (2, 1.0)]).unwrap();
        let b = normalize(&[(1u32, 1.0f64), (3, 1.0)]).unwrap();
        let x = StreamItem::new(0, 0.0, a);
        let y = StreamItem::new(1, 0.5, b);
        let expect = 0.5 * 2f64.powf(-0.5);
        assert!((decayed_similarity(&x, &y, LN2) - expect).abs() < 1e-12);
    }

    #[test]
    fn horizon_high_threshold_low_decay() {
        let tau = compute_horizon(0.99f64, 0.1).unwrap();
        assert!((tau - 0.100_503_358_535_014_4).abs() < 1e-12);
    }

    #[test]
    fn horizon_degenerate_theta_one() {
        assert_eq!(compute_horizon(1.0f64, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn horizon_analytic_value() {
        let tau = compute_horizon((-2.0f64).exp(), 1.0).unwrap();
        assert!((tau - 2.0).abs() < 1e-12);
    }

    #[test]
    fn horizon_rejects_bad_params() {
        assert!(matches!(compute_horizon(0.0f64, 1.0), Err(Error::InvalidThreshold(_))));
        assert!(matches!(compute_horizon(1.01f64, 1.0), Err(Error::InvalidThreshold(_))));
        assert!(matches!(compute_horizon(0.5f64, 0.0), Err(Error::InvalidDecay(_))));
        assert!(matches!(compute_horizon(0.5f64, -1.0), Err(Error::InvalidDecay(_))));
    }

    #[test]
    fn beyond_horizon_cannot_reach_threshold() {
        let v = normalize(&[(7u32, 1.0f64)]).unwrap();
        for &(theta, lambda) in &[(0.5, 0.1), (0.9, 1.0), (0.99, 0.01)] {
            let tau = compute_horizon(theta, lambda).unwrap();
            let x = StreamItem::new(0, 0.0, v.clone());
            let y = StreamItem::new(1, tau + 1e-6, v.clone());
            assert!(decayed_similarity(&x, &y, lambda) < theta);
        }
    }
}
