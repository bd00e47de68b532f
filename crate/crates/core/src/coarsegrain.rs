//! Coarse-graining of pointers into macrofractions: the grouped trace vector
//! `a^(l)`, its closed binomial/hypergeometric forms for two outcomes, and
//! the exponential-convergence asymptotics.

use crate::bounds;
use crate::comb::LnFactorials;
use crate::error::{Error, Result};
use crate::prob::{AVector, ProbVector, INTERNAL_NORM_TOL};
use serde::Serialize;

/// Hard cap on the macrofraction size handled by the enumeration.
pub const MAX_LCG: u32 = 128;
/// Outcome counts beyond this make the composition enumeration explode.
pub const MAX_OUTCOMES: usize = 8;

/// Agreement and bias after grouping `l_cg` pointers into one macrofraction.
#[derive(Clone, Debug, Serialize)]
pub struct CoarseGrainResult {
    pub l_cg: u32,
    pub avector_cg: AVector,
    pub gamma_cg: f64,
    pub bias_cg: f64,
}

/// Constants of the large-`l_cg` decay of `1 - a_0^(l)` for two outcomes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AsymptoticParams {
    /// Decay rate `D(a) = -log(2 sqrt(a_0 a_1))`.
    pub d_rate: f64,
    /// Limit of the terminating hypergeometric sum, `C(a) = a_0 / (a_0 - a_1)`.
    pub c_const: f64,
    /// Prefactor `F(a) = sqrt(2/pi) a_1 C(a)`.
    pub f_const: f64,
}

/// The coarse-grained trace vector: every composition `(k_0, .., k_{d-1})` of
/// `l_cg` contributes its multinomial term to the outcome with the largest
/// `k_x`, ties going to the smallest index. The result sums to 1 exactly
/// because the terms partition the multinomial expansion of `1 = (sum a_x)^l`.
///
/// `a` must be sorted in non-increasing order so that outcome 0 is the one
/// the grouping concentrates weight into.
///
/// ```
/// use intersub::{coarsegrain, AVector};
/// let a = AVector::new(vec![0.6, 0.4]).unwrap();
/// let grouped = coarsegrain::cg_avector(&a, 3).unwrap();
/// assert!((grouped[0] - 0.648).abs() < 1e-13); // 0.6^3 + 3 * 0.6^2 * 0.4
/// ```
pub fn cg_avector(a: &AVector, l_cg: u32) -> Result<AVector> {
    if l_cg == 0 {
        return Err(Error::Domain("macrofraction size must be >= 1".into()));
    }
    if l_cg > MAX_LCG {
        return Err(Error::Resource(format!(
            "macrofraction size {l_cg} exceeds cap {MAX_LCG}"
        )));
    }
    let d = a.outcomes();
    if d > MAX_OUTCOMES {
        return Err(Error::Resource(format!(
            "{d} outcomes exceed enumeration cap {MAX_OUTCOMES}"
        )));
    }
    if !a.is_sorted_descending() {
        return Err(Error::Domain(
            "trace vector must be sorted in non-increasing order".into(),
        ));
    }
    if l_cg == 1 {
        return Ok(a.clone());
    }

    let l = l_cg as usize;
    let lf = LnFactorials::up_to(l);
    let ln_a: Vec<f64> = a.as_slice().iter().map(|&x| x.ln()).collect(); // -inf for 0 entries

    // collect the terms per outcome, then accumulate each outcome in
    // descending magnitude
    let mut terms: Vec<Vec<f64>> = vec![Vec::new(); d];
    let mut ks = vec![0usize; d];
    enumerate_compositions(l, d, &mut ks, 0, &mut |ks| {
        let mut ln_term = lf.ln_multinomial(l, ks);
        for (x, &k) in ks.iter().enumerate() {
            if k > 0 {
                ln_term += k as f64 * ln_a[x];
            }
        }
        if ln_term > f64::NEG_INFINITY {
            let winner = argmax_smallest_index(ks);
            terms[winner].push(ln_term.exp());
        }
    });

    let entries: Vec<f64> = terms
        .into_iter()
        .map(|mut t| {
            t.sort_by(|x, y| y.partial_cmp(x).unwrap());
            t.into_iter().sum()
        })
        .collect();
    AVector::with_tolerance(entries, INTERNAL_NORM_TOL)
}

fn enumerate_compositions(
    remaining: usize,
    d: usize,
    ks: &mut Vec<usize>,
    idx: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if idx == d - 1 {
        ks[idx] = remaining;
        f(ks);
        return;
    }
    for k in 0..=remaining {
        ks[idx] = k;
        enumerate_compositions(remaining - k, d, ks, idx + 1, f);
    }
}

fn argmax_smallest_index(ks: &[usize]) -> usize {
    let mut best = 0;
    for (i, &k) in ks.iter().enumerate().skip(1) {
        if k > ks[best] {
            best = i;
        }
    }
    best
}

/// Closed hypergeometric form of `a_0^(l)` for two outcomes and odd `l`:
/// the complement `1 - a_0^(l)` is the central-binomial prefactor times the
/// terminating series `2F1(1, (1-l)/2; (l+3)/2; -a_1/a_0)` evaluated term by
/// term through the Pochhammer ratios. An independent route against the
/// binomial sum in [`cg_avector`].
pub fn cg_a0_hypergeometric(a: &AVector, l_cg: u32) -> Result<f64> {
    if a.outcomes() != 2 {
        return Err(Error::Domain(format!(
            "hypergeometric form needs exactly 2 outcomes, got {}",
            a.outcomes()
        )));
    }
    if l_cg == 0 || l_cg.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "hypergeometric form needs odd l_cg, got {l_cg}"
        )));
    }
    if l_cg > MAX_LCG {
        return Err(Error::Resource(format!(
            "macrofraction size {l_cg} exceeds cap {MAX_LCG}"
        )));
    }
    let (a0, a1) = (a[0], a[1]);
    if a1 == 0.0 {
        return Ok(1.0);
    }
    let l = l_cg as f64;
    let m = (l_cg as usize - 1) / 2; // (l-1)/2

    // 2F1(1, -m; c; -a1/a0) = sum_{n=0..m} t_n with
    // t_0 = 1, t_{n+1}/t_n = (m - n) / (c + n) * (a1/a0), c = (l+1)/2 + 1
    let z = a1 / a0;
    let mut t = 1.0;
    let mut hyp = 1.0;
    for n in 0..m {
        t *= (m - n) as f64 / ((l + 1.0) / 2.0 + 1.0 + n as f64) * z;
        hyp += t;
    }

    // central binomial C(l, (l+1)/2), exact in f64 multiplicative form
    let lf = LnFactorials::up_to(l_cg as usize);
    let ln_binom = lf.get(l_cg as usize) - lf.get(m + 1) - lf.get(l_cg as usize - m - 1);

    // prefactor a0^{(l-1)/2} a1^{(l+1)/2} C(l,(l+1)/2) in log space
    let ln_pref = (m as f64) * a0.ln() + (m as f64 + 1.0) * a1.ln() + ln_binom;
    Ok(1.0 - ln_pref.exp() * hyp)
}

/// Decay constants `D`, `C`, `F` of the two-outcome coarse-graining. Needs a
/// strictly dominant `a_0`; at `a_0 = a_1` the constant `C` diverges and the
/// decay degenerates to pure `1/sqrt(l)`.
pub fn asymptotic_params(a: &AVector) -> Result<AsymptoticParams> {
    if a.outcomes() != 2 {
        return Err(Error::Domain(format!(
            "asymptotics defined for 2 outcomes, got {}",
            a.outcomes()
        )));
    }
    let (a0, a1) = (a[0], a[1]);
    if a1 <= 0.0 {
        return Err(Error::Singular(
            "a_1 = 0: decay rate diverges (pure pointer)".into(),
        ));
    }
    if a0 <= a1 {
        return Err(Error::Singular(
            "a_0 must strictly dominate a_1 for the asymptotic constants".into(),
        ));
    }
    let d_rate = -(2.0 * (a0 * a1).sqrt()).ln();
    let c_const = a0 / (a0 - a1);
    let f_const = (2.0 / std::f64::consts::PI).sqrt() * a1 * c_const;
    Ok(AsymptoticParams {
        d_rate,
        c_const,
        f_const,
    })
}

/// Asymptotic `a_0^(l) ~ 1 - F(a) e^(-D(a)(l-1)) / sqrt(l)`.
pub fn asymptotic_a0(a: &AVector, l_cg: u32) -> Result<f64> {
    if l_cg < 3 {
        return Err(Error::Domain(format!(
            "asymptotic form needs l_cg >= 3, got {l_cg}"
        )));
    }
    let p = asymptotic_params(a)?;
    let l = l_cg as f64;
    Ok(1.0 - (-p.d_rate * (l - 1.0)).exp() / l.sqrt() * p.f_const)
}

/// Coarse-grain `a`, then evaluate agreement and bias for `n_observers`
/// macrofraction observers against the system distribution `p_s`.
pub fn cg_metrics(
    a: &AVector,
    l_cg: u32,
    n_observers: u32,
    p_s: &ProbVector,
) -> Result<CoarseGrainResult> {
    let avector_cg = cg_avector(a, l_cg)?;
    let (gamma_cg, _) = bounds::max_agreement(&avector_cg, n_observers)?;
    let bias_cg = bounds::optimal_bias(&avector_cg, n_observers, p_s)?;
    Ok(CoarseGrainResult {
        l_cg,
        avector_cg,
        gamma_cg,
        bias_cg,
    })
}
