//! Service-time distributions, sampled by inverse CDF.

use crate::error::SimError;
use crate::rng::Stream;
use crate::SimResult;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    /// Exponential with the given mean (not rate).
    Exponential { mean: f64 },
    /// Triangular on [min, max] with the given mode.
    Triangular { min: f64, mode: f64, max: f64 },
    /// Uniform on [0, 1).
    Uniform01,
}

impl Distribution {
    pub fn validate(&self) -> SimResult<()> {
        match *self {
            Distribution::Exponential { mean } => {
                if mean > 0.0 {
                    Ok(())
                } else {
                    Err(SimError::InvalidDistribution(format!(
                        "exponential mean must be positive, got {mean}"
                    )))
                }
            }
            Distribution::Triangular { min, mode, max } => {
                if min <= mode && mode <= max {
                    Ok(())
                } else {
                    Err(SimError::InvalidDistribution(format!(
                        "triangular requires min <= mode <= max, got ({min}, {mode}, {max})"
                    )))
                }
            }
            Distribution::Uniform01 => Ok(()),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Distribution::Exponential { mean } => mean,
            Distribution::Triangular { min, mode, max } => (min + mode + max) / 3.0,
            Distribution::Uniform01 => 0.5,
        }
    }

    /// Scale the support by a positive factor (used by calibration).
    pub fn scaled(&self, factor: f64) -> Distribution {
        match *self {
            Distribution::Exponential { mean } => Distribution::Exponential {
                mean: mean * factor,
            },
            Distribution::Triangular { min, mode, max } => Distribution::Triangular {
                min: min * factor,
                mode: mode * factor,
                max: max * factor,
            },
            Distribution::Uniform01 => Distribution::Uniform01,
        }
    }

    pub fn sample(&self, stream: &mut Stream) -> f64 {
        let u = stream.uniform();
        match *self {
            Distribution::Exponential { mean } => -mean * (1.0 - u).ln(),
            Distribution::Triangular { min, mode, max } => {
                let range = max - min;
                if range == 0.0 {
                    return min;
                }
                let cut = (mode - min) / range;
                if u < cut {
                    min + (u * range * (mode - min)).sqrt()
                } else {
                    max - ((1.0 - u) * range * (max - mode)).sqrt()
                }
            }
            Distribution::Uniform01 => u,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamSet;

    #[test]
    fn degenerate_triangular_is_constant() {
        let d = Distribution::Triangular {
            min: 5.0,
            mode: 5.0,
            max: 5.0,
        };
        let mut s = StreamSet::new(7).stream(0, 0);
        for _ in 0..100 {
            assert_eq!(d.sample(&mut s), 5.0);
        }
    }

    #[test]
    fn triangular_stays_in_support() {
        let d = Distribution::Triangular {
            min: 2.0,
            mode: 4.0,
            max: 8.0,
        };
        let mut s = StreamSet::new(11).stream(0, 0);
        for _ in 0..10_000 {
            let x = d.sample(&mut s);
            assert!((2.0..=8.0).contains(&x));
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(Distribution::Exponential { mean: 0.0 }.validate().is_err());
        assert!(Distribution::Triangular {
            min: 3.0,
            mode: 2.0,
            max: 5.0
        }
        .validate()
        .is_err());
    }
}
