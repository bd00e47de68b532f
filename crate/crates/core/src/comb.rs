//! Log-space factorials, binomials and multinomial coefficients shared by the
//! coarse-graining and spin-block code.

use statrs::function::gamma::ln_gamma;

/// Table of ln(n!) for n = 0..=n_max.
pub(crate) struct LnFactorials(Vec<f64>);

impl LnFactorials {
    pub fn up_to(n_max: usize) -> Self {
        Self((0..=n_max).map(|n| ln_gamma(n as f64 + 1.0)).collect())
    }

    #[inline]
    pub fn get(&self, n: usize) -> f64 {
        self.0[n]
    }

    /// ln of the multinomial coefficient l! / (k_0! ... k_r!), with sum k = l.
    pub fn ln_multinomial(&self, l: usize, ks: &[usize]) -> f64 {
        debug_assert_eq!(ks.iter().sum::<usize>(), l);
        self.get(l) - ks.iter().map(|&k| self.get(k)).sum::<f64>()
    }
}

/// Exact binomial coefficient, sufficient for the block degeneracies at
/// l <= 128 (C(128, 64) < 2^128). Returns 0 outside the Pascal triangle.
/// Pascal-row accumulation: every intermediate is itself a binomial, so
/// nothing can overflow before the result would.
pub(crate) fn binomial_u128(n: u32, k: i64) -> u128 {
    if k < 0 || k as u32 > n {
        return 0;
    }
    let k = (k as u32).min(n - k as u32) as usize;
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n as usize {
        for j in (1..=k.min(i)).rev() {
            row[j] += row[j - 1];
        }
    }
    row[k]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial_u128(4, 2), 6);
        assert_eq!(binomial_u128(4, -1), 0);
        assert_eq!(binomial_u128(4, 5), 0);
        assert_eq!(binomial_u128(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(
            binomial_u128(128, 64),
            23_951_146_041_928_082_866_135_587_776_380_551_750
        );
    }

    #[test]
    fn ln_multinomial_matches_exact() {
        let lf = LnFactorials::up_to(20);
        // 10! / (3! 3! 4!) = 4200
        let v = lf.ln_multinomial(10, &[3, 3, 4]).exp();
        assert!((v - 4200.0).abs() / 4200.0 < 1e-13);
    }
}
