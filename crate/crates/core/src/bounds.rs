//! Closed-form finite-resource bounds for joint information broadcasting:
//! maximal agreement over observers, the accompanying noise distribution and
//! bias at the optimum, and the Tsallis-entropy form of the minimal
//! disagreement.

use crate::error::{Error, Result};
use crate::prob::{AVector, ProbVector, INTERNAL_NORM_TOL};
use serde::Serialize;

/// Below this disagreement the noise distribution m* is a 0/0 and is not
/// exposed; the bias and local probabilities use singularity-free forms.
pub const IDEAL_DELTA_TOL: f64 = 1e-14;

/// Everything the closed-form layer knows about one (a, N, p_S) instance.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    /// Maximal agreement over `n_p` observers.
    pub gamma: f64,
    /// Minimal disagreement, always exactly `1 - gamma`.
    pub delta: f64,
    /// Noise distribution at the optimum; `None` in the ideal limit where it
    /// is undefined.
    pub mstar: Option<ProbVector>,
    /// Bias of the agreement-optimal broadcast.
    pub bias: f64,
    /// Local outcome distribution seen by every observer at the optimum.
    pub local_probs: ProbVector,
}

/// Maximal agreement `gamma = sum_x a_x^n_p` and the minimal disagreement
/// `delta = 1 - gamma`.
///
/// ```
/// use intersub::{bounds, AVector};
/// let a = AVector::new(vec![0.6, 0.4]).unwrap();
/// let (gamma, delta) = bounds::max_agreement(&a, 2).unwrap();
/// assert!((gamma - 0.52).abs() < 1e-15 && (delta - 0.48).abs() < 1e-15);
/// ```
pub fn max_agreement(a: &AVector, n_p: u32) -> Result<(f64, f64)> {
    if n_p == 0 {
        return Err(Error::Domain("observer count must be at least 1".into()));
    }
    let gamma: f64 = a.as_slice().iter().map(|&x| x.powi(n_p as i32)).sum();
    let gamma = gamma.min(1.0);
    Ok((gamma, 1.0 - gamma))
}

/// Tsallis entropy `S_q(p) = (1 - sum_i p_i^q) / (q - 1)` for q > 1.
pub fn tsallis_entropy(p: &ProbVector, q: f64) -> Result<f64> {
    if q.is_nan() || q <= 1.0 {
        return Err(Error::Domain(format!(
            "Tsallis order must be > 1, got {q}"
        )));
    }
    let s: f64 = p.iter().map(|&x| x.powf(q)).sum();
    Ok((1.0 - s) / (q - 1.0))
}

/// The noise distribution `m*_x = a_x (1 - a_x^(n_p - 1)) / (1 - gamma)`.
/// Undefined (singular) when the pointer is ideal (delta = 0).
pub fn noise_distribution(a: &AVector, n_p: u32) -> Result<ProbVector> {
    if n_p < 2 {
        return Err(Error::Domain(
            "noise distribution needs at least 2 observers".into(),
        ));
    }
    let (_, delta) = max_agreement(a, n_p)?;
    if delta <= IDEAL_DELTA_TOL {
        return Err(Error::Singular(
            "ideal pointer: disagreement is zero and m* is undefined".into(),
        ));
    }
    let entries: Vec<f64> = a
        .as_slice()
        .iter()
        .map(|&x| x * (1.0 - x.powi(n_p as i32 - 1)) / delta)
        .collect();
    ProbVector::with_tolerance(entries, INTERNAL_NORM_TOL)
}

/// Bias of the agreement-optimal broadcast,
/// `delta * D_T(p_S, m*) = (1/2) sum_x |a_x - a_x^n_p - delta p_S(x)|`.
/// The second form has no 0/0 at ideality and is the one evaluated.
pub fn optimal_bias(a: &AVector, n_p: u32, p_s: &ProbVector) -> Result<f64> {
    if a.outcomes() != p_s.len() {
        return Err(Error::DimensionMismatch(a.outcomes(), p_s.len()));
    }
    let (_, delta) = max_agreement(a, n_p)?;
    let bias = 0.5
        * a.as_slice()
            .iter()
            .zip(p_s)
            .map(|(&ax, &px)| (ax * (1.0 - ax.powi(n_p as i32 - 1)) - delta * px).abs())
            .sum::<f64>();
    Ok(bias)
}

/// Local outcome probabilities at the optimum,
/// `p~(x) = gamma p_S(x) + a_x - a_x^n_p`,
/// equal to `gamma p_S + delta m*` whenever delta > 0.
pub fn local_probabilities(a: &AVector, n_p: u32, p_s: &ProbVector) -> Result<ProbVector> {
    if a.outcomes() != p_s.len() {
        return Err(Error::DimensionMismatch(a.outcomes(), p_s.len()));
    }
    let (gamma, _) = max_agreement(a, n_p)?;
    let entries: Vec<f64> = a
        .as_slice()
        .iter()
        .zip(p_s)
        .map(|(&ax, &px)| gamma * px + ax * (1.0 - ax.powi(n_p as i32 - 1)))
        .collect();
    ProbVector::with_tolerance(entries, INTERNAL_NORM_TOL)
}

/// Bundle the full closed-form picture for one instance.
pub fn bound_report(a: &AVector, n_p: u32, p_s: &ProbVector) -> Result<BoundReport> {
    let (gamma, delta) = max_agreement(a, n_p)?;
    let mstar = if delta > IDEAL_DELTA_TOL && n_p >= 2 {
        Some(noise_distribution(a, n_p)?)
    } else {
        None
    };
    Ok(BoundReport {
        gamma,
        delta,
        mstar,
        bias: optimal_bias(a, n_p, p_s)?,
        local_probs: local_probabilities(a, n_p, p_s)?,
    })
}
