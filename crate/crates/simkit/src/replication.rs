//! Output analysis across replications: point estimates, confidence
//! intervals, and the pilot-based replication-count procedure.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::SimError;
use crate::SimResult;

/// Never recommend fewer replications than this, whatever the pilot says.
pub const REPLICATION_FLOOR: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    /// Half-width of the 95% confidence interval (Student-t, n-1 df).
    pub half_width: f64,
}

fn t_quantile(p: f64, df: usize) -> f64 {
    StudentsT::new(0.0, 1.0, df as f64)
        .expect("valid t distribution")
        .inverse_cdf(p)
}

fn mean_sd(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Mean, standard deviation and 95% CI half-width of replication outputs.
pub fn summarize(samples: &[f64]) -> SimResult<Summary> {
    if samples.len() < 2 {
        return Err(SimError::InsufficientData {
            needed: 2,
            got: samples.len(),
        });
    }
    let (mean, sd) = mean_sd(samples);
    let t = t_quantile(0.975, samples.len() - 1);
    Ok(Summary {
        n: samples.len(),
        mean,
        sd,
        half_width: t * sd / (samples.len() as f64).sqrt(),
    })
}

/// Smallest replication count `n >= REPLICATION_FLOOR` whose projected
/// relative CI half-width meets the precision target.
///
/// The pilot's standard deviation is extrapolated: at candidate `n` the
/// relative half-width is `100 * t(n-1, 1-alpha/2) * s / (sqrt(n) * |mean|)`,
/// compared against `precision_pct`.
pub fn replications_needed(
    pilot: &[f64],
    confidence: f64,
    precision_pct: f64,
) -> SimResult<usize> {
    if pilot.len() < 2 {
        return Err(SimError::InsufficientData {
            needed: 2,
            got: pilot.len(),
        });
    }
    if !(0.0 < confidence && confidence < 1.0) {
        return Err(SimError::InvalidParameter(format!(
            "confidence must lie in (0,1), got {confidence}"
        )));
    }
    if precision_pct <= 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "precision must be positive, got {precision_pct}"
        )));
    }
    let (mean, sd) = mean_sd(pilot);
    if mean == 0.0 {
        return Err(SimError::ZeroMean);
    }
    let p = 1.0 - (1.0 - confidence) / 2.0;
    let mut n = REPLICATION_FLOOR;
    loop {
        let rel = 100.0 * t_quantile(p, n - 1) * sd / ((n as f64).sqrt() * mean.abs());
        if rel <= precision_pct {
            return Ok(n);
        }
        n += 1;
        if n > 100_000 {
            return Err(SimError::InvalidParameter(
                "replication count did not converge".into(),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn t_quantile_matches_tables() {
        assert_relative_eq!(t_quantile(0.975, 9), 2.262, max_relative = 1e-3);
        assert_relative_eq!(t_quantile(0.975, 4), 2.776, max_relative = 1e-3);
        assert_relative_eq!(t_quantile(0.95, 7), 1.895, max_relative = 1e-3);
    }

    #[test]
    fn summarize_simple_samples() {
        let s = summarize(&[10.0, 10.0]).unwrap();
        assert_eq!(s.mean, 10.0);
        assert_eq!(s.sd, 0.0);
        assert_eq!(s.half_width, 0.0);

        let s = summarize(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(s.mean, 3.0);
        assert_relative_eq!(s.sd, 1.5811, max_relative = 1e-4);
    }

    #[test]
    fn summarize_needs_two() {
        assert!(matches!(
            summarize(&[1.0]),
            Err(SimError::InsufficientData { .. })
        ));
    }

    #[test]
    fn constant_pilot_returns_floor() {
        let n = replications_needed(&[150.0; 5], 0.95, 5.0).unwrap();
        assert_eq!(n, REPLICATION_FLOOR);
    }

    #[test]
    fn five_percent_cv_needs_seven() {
        // pilot with mean 100, sd 5 (5% coefficient of variation):
        // direct evaluation of the t-quantile formula gives n = 7
        let pilot = [95.0, 97.5, 100.0, 102.5, 105.0];
        let (mean, sd) = mean_sd(&pilot);
        assert_relative_eq!(sd / mean, 0.0395, max_relative = 1e-2);
        // scale to exactly 5% cv
        let pilot: Vec<f64> = pilot.iter().map(|x| 100.0 + (x - 100.0) * 0.05 * mean / sd).collect();
        let n = replications_needed(&pilot, 0.95, 5.0).unwrap();
        assert!((5..=10).contains(&n), "n={n}");
        assert_eq!(n, 7);
    }

    #[test]
    fn zero_mean_is_an_error() {
        assert!(matches!(
            replications_needed(&[-1.0, 1.0], 0.95, 5.0),
            Err(SimError::ZeroMean)
        ));
    }
}
