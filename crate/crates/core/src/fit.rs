//! Exponential-decay fitting: ordinary least squares on the log-linearised
//! model `y = c0 e^(c1 x)` with the coefficient of determination evaluated on
//! the log scale.

use crate::error::{Error, Result};
use serde::Serialize;

/// Result of fitting `y = c0 e^(c1 x)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FitResult {
    pub c0: f64,
    pub c1: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

/// Least-squares fit of `log y = log c0 + c1 x`, skipping the first
/// `skip_first` points. All used `y` must be strictly positive and at least
/// three points must remain.
///
/// ```
/// use intersub::fit::fit_exponential;
/// let pts: Vec<(f64, f64)> = (1..=8).map(|i| {
///     let x = i as f64;
///     (x, 2.0 * (-0.5 * x).exp())
/// }).collect();
/// let f = fit_exponential(&pts, 0).unwrap();
/// assert!((f.c0 - 2.0).abs() < 1e-10 && (f.c1 + 0.5).abs() < 1e-10);
/// ```
pub fn fit_exponential(points: &[(f64, f64)], skip_first: usize) -> Result<FitResult> {
    let used = points.get(skip_first..).unwrap_or(&[]);
    if used.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} points after skipping {skip_first}, need at least 3",
            used.len()
        )));
    }
    for &(x, y) in used {
        if y.is_nan() || y <= 0.0 || !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!(
                "exponential fit needs finite x and y > 0, got ({x}, {y})"
            )));
        }
    }

    let n = used.len() as f64;
    let xs: Vec<f64> = used.iter().map(|&(x, _)| x).collect();
    let lys: Vec<f64> = used.iter().map(|&(_, y)| y.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = lys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("all x values identical".into()));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&lys)
        .map(|(x, ly)| (x - x_mean) * (ly - y_mean))
        .sum();
    let c1 = sxy / sxx;
    let ln_c0 = y_mean - c1 * x_mean;

    let fitted: Vec<f64> = xs.iter().map(|x| ln_c0 + c1 * x).collect();
    let r2 = r_squared(&lys, &fitted)?;

    Ok(FitResult {
        c0: ln_c0.exp(),
        c1,
        r_squared: r2,
        n_points: used.len(),
    })
}

/// `R^2 = 1 - S_res / S_tot`, residuals against the observed mean.
pub fn r_squared(observed: &[f64], fitted: &[f64]) -> Result<f64> {
    if observed.len() != fitted.len() {
        return Err(Error::DimensionMismatch(observed.len(), fitted.len()));
    }
    if observed.len() < 2 {
        return Err(Error::InsufficientData(
            "R^2 needs at least two points".into(),
        ));
    }
    let mean = observed.iter().sum::<f64>() / observed.len() as f64;
    let s_tot: f64 = observed.iter().map(|o| (o - mean).powi(2)).sum();
    if s_tot == 0.0 {
        return Err(Error::Domain(
            "observed sequence is constant: R^2 undefined".into(),
        ));
    }
    let s_res: f64 = observed
        .iter()
        .zip(fitted)
        .map(|(o, f)| (o - f).powi(2))
        .sum();
    Ok(1.0 - s_res / s_tot)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_model() {
        let pts: Vec<(f64, f64)> = (1..=10)
            .map(|i| {
                let x = i as f64;
                (x, 2.0 * (-0.5 * x).exp())
            })
            .collect();
        let f = fit_exponential(&pts, 0).unwrap();
        assert!((f.c0 - 2.0).abs() < 1e-10);
        assert!((f.c1 + 0.5).abs() < 1e-10);
        assert!(1.0 - f.r_squared < 1e-12);
        assert_eq!(f.n_points, 10);
    }

    #[test]
    fn skip_first_drops_leading_points() {
        // poison the first point; skipping it must restore the exact fit
        let mut pts: Vec<(f64, f64)> = vec![(0.0, 100.0)];
        pts.extend((1..=10).map(|i| {
            let x = i as f64;
            (x, 2.0 * (-0.5 * x).exp())
        }));
        let f = fit_exponential(&pts, 1).unwrap();
        assert!((f.c0 - 2.0).abs() < 1e-10);
        assert!((f.c1 + 0.5).abs() < 1e-10);
        assert_eq!(f.n_points, 10);
    }

    #[test]
    fn input_errors() {
        let good: Vec<(f64, f64)> = (1..=4).map(|i| (i as f64, 1.0)).collect();
        assert!(matches!(
            fit_exponential(&good, 2),
            Err(Error::InsufficientData(_))
        ));
        let bad = vec![(1.0, 1.0), (2.0, -0.5), (3.0, 1.0)];
        assert!(matches!(fit_exponential(&bad, 0), Err(Error::Domain(_))));
        let zero_y = vec![(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)];
        assert!(fit_exponential(&zero_y, 0).is_err());
    }

    #[test]
    fn r_squared_examples() {
        let obs = [1.0, 2.0, 3.0];
        assert_eq!(r_squared(&obs, &obs).unwrap(), 1.0);
        let mean = [2.0, 2.0, 2.0];
        assert_eq!(r_squared(&obs, &mean).unwrap(), 0.0);
        let f = [1.0, 2.0, 4.0];
        assert!((r_squared(&obs, &f).unwrap() - 0.5).abs() < 1e-15);

        assert!(r_squared(&[1.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(r_squared(&obs, &[1.0, 2.0]).is_err());
    }
}
