//! Probability vectors, outcome-subspace trace vectors, and the total
//! variation distance. Everything else in the crate is built on these.

use crate::error::{Error, Result};
use serde::Serialize;

/// Tolerance on |sum - 1| when validating external input.
pub const INPUT_NORM_TOL: f64 = 1e-9;
/// Tolerance used for internally computed vectors, where the identities are
/// exact and only floating-point accumulation must be absorbed.
pub const INTERNAL_NORM_TOL: f64 = 1e-12;

/// A finite probability distribution over outcomes, entries in [0, 1] summing
/// to 1 within tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Validate a raw sequence against the input tolerance ([`INPUT_NORM_TOL`]).
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(entries, INPUT_NORM_TOL)
    }

    /// Validate with an explicit normalization tolerance.
    pub fn with_tolerance(entries: Vec<f64>, tol: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("probability vector must be nonempty".into()));
        }
        for (index, &value) in entries.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::NegativeEntry { index, value });
            }
            if value > 1.0 + tol {
                return Err(Error::EntryAboveOne { index, value });
            }
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::NotNormalized { sum, tol });
        }
        Ok(Self(entries))
    }

    /// The uniform distribution over `n` outcomes.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one outcome");
        Self(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl<'a> IntoIterator for &'a ProbVector {
    type Item = &'a f64;
    type IntoIter = std::slice::Iter<'a, f64>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// The trace vector `a` of an outcome-labelled orthogonal decomposition of a
/// pointer state: `a_x` is the weight the pointer carries in the subspace
/// assigned to outcome `x`. Shaped exactly like a [`ProbVector`]; the length
/// is the number of outcomes.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct AVector(ProbVector);

impl AVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        Ok(Self(ProbVector::new(entries)?))
    }

    pub fn with_tolerance(entries: Vec<f64>, tol: f64) -> Result<Self> {
        Ok(Self(ProbVector::with_tolerance(entries, tol)?))
    }

    pub fn from_prob(p: ProbVector) -> Self {
        Self(p)
    }

    /// Number of outcomes `d_S`.
    pub fn outcomes(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn as_prob(&self) -> &ProbVector {
        &self.0
    }

    /// True if the entries are sorted in non-increasing order.
    pub fn is_sorted_descending(&self) -> bool {
        self.as_slice().windows(2).all(|w| w[0] >= w[1])
    }
}

impl std::ops::Index<usize> for AVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Total variation distance `(1/2) sum_x |p_x - q_x|`.
pub fn total_variation(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    Ok(tv_slices(p.as_slice(), q.as_slice()))
}

pub(crate) fn tv_slices(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p
        .iter()
        .zip(q)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
}
