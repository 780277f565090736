//! Arrival processes: a weekly-periodic non-homogeneous Poisson process
//! generated by thinning. A constant profile reduces exactly to exponential
//! inter-arrival times.

use crate::error::SimError;
use crate::rng::Stream;
use crate::{Minutes, SimResult};

pub const HOURS_PER_WEEK: usize = 168;

/// Piecewise-constant weekly rate profile, one rate per hour of the week
/// (hour 0 = Monday 00:00), in arrivals per hour.
#[derive(Debug, Clone, PartialEq)]
pub struct WeeklyProfile {
    rates_per_hour: Vec<f64>,
    max_rate: f64,
}

impl WeeklyProfile {
    pub fn new(rates_per_hour: Vec<f64>) -> SimResult<Self> {
        if rates_per_hour.len() != HOURS_PER_WEEK {
            return Err(SimError::InvalidParameter(format!(
                "weekly profile needs {HOURS_PER_WEEK} hourly rates, got {}",
                rates_per_hour.len()
            )));
        }
        if rates_per_hour.iter().any(|r| *r < 0.0 || !r.is_finite()) {
            return Err(SimError::InvalidParameter(
                "profile rates must be finite and non-negative".into(),
            ));
        }
        let max_rate = rates_per_hour.iter().copied().fold(0.0, f64::max);
        if max_rate <= 0.0 {
            return Err(SimError::DeadArrivalProfile);
        }
        Ok(Self {
            rates_per_hour,
            max_rate,
        })
    }

    pub fn constant(rate_per_hour: f64) -> SimResult<Self> {
        Self::new(vec![rate_per_hour; HOURS_PER_WEEK])
    }

    /// Total expected arrivals over one week.
    pub fn weekly_total(&self) -> f64 {
        self.rates_per_hour.iter().sum()
    }

    /// Rescale so the weekly total matches `target`.
    pub fn normalized_to_weekly_total(&self, target: f64) -> SimResult<Self> {
        let current = self.weekly_total();
        let factor = target / current;
        Self::new(self.rates_per_hour.iter().map(|r| r * factor).collect())
    }

    /// Rate in effect at simulated minute `t`, per minute.
    pub fn rate_per_min_at(&self, t: Minutes) -> f64 {
        let hour_of_week = (t / 60.0).floor() as i64 % HOURS_PER_WEEK as i64;
        self.rates_per_hour[hour_of_week.unsigned_abs() as usize] / 60.0
    }

    pub fn is_constant(&self) -> bool {
        self.rates_per_hour
            .iter()
            .all(|r| *r == self.rates_per_hour[0])
    }

    pub fn hourly_rates(&self) -> &[f64] {
        &self.rates_per_hour
    }
}

/// Next event time of the non-homogeneous Poisson process after `clock`.
///
/// Thinning against the profile's maximum rate: candidate gaps are
/// exponential at the bounding rate, accepted with probability
/// rate(t)/max_rate, so no arrival ever lands in a zero-rate hour.
pub fn next_arrival(profile: &WeeklyProfile, clock: Minutes, stream: &mut Stream) -> Minutes {
    let lambda_max = profile.max_rate / 60.0;
    let mut t = clock;
    loop {
        let u = stream.uniform();
        t += -(1.0 - u).ln() / lambda_max;
        let accept = stream.uniform();
        if accept * lambda_max <= profile.rate_per_min_at(t) {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamSet;

    #[test]
    fn all_zero_profile_rejected() {
        assert!(matches!(
            WeeklyProfile::new(vec![0.0; HOURS_PER_WEEK]),
            Err(SimError::DeadArrivalProfile)
        ));
    }

    #[test]
    fn zero_rate_hours_receive_no_arrivals() {
        // alternate 0 and 120 per hour
        let rates: Vec<f64> = (0..HOURS_PER_WEEK)
            .map(|h| if h % 2 == 0 { 0.0 } else { 120.0 })
            .collect();
        let profile = WeeklyProfile::new(rates).unwrap();
        let mut s = StreamSet::new(99).stream(0, 0);
        let mut t = 0.0;
        for _ in 0..20_000 {
            t = next_arrival(&profile, t, &mut s);
            let hour = (t / 60.0).floor() as usize % HOURS_PER_WEEK;
            assert_eq!(hour % 2, 1, "arrival at t={t} fell in a zero-rate hour");
        }
    }

    #[test]
    fn normalization_hits_target_total() {
        let profile = WeeklyProfile::constant(10.0)
            .unwrap()
            .normalized_to_weekly_total(900.0)
            .unwrap();
        assert!((profile.weekly_total() - 900.0).abs() < 1e-9);
    }
}
