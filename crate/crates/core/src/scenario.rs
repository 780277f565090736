//! Shared model constants: the base-year calibration counts, the
//! traffic/clandestine/search growth factor grid, the probability rules
//! and the cost rules that every evaluation method uses identically.

use thiserror::Error;

use crate::exact::{int, is_zero, rat, to_f64, Rat};
use crate::money::Money;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("unknown {kind} level {level}")]
    UnknownLevel { kind: &'static str, level: String },

    #[error("scale factor requires traffic growth > -100%, got {0}")]
    TrafficGrowthOutOfRange(f64),

    #[error("searched proportion {0} exceeds 1: cannot search more than all traffic")]
    ProportionOutOfRange(f64),

    #[error("relative matrix base value must be non-zero")]
    ZeroBase,

    #[error("calibration out of range: {0}")]
    Calibration(String),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("decision tree is malformed: {0}")]
    MalformedTree(String),
}

/// Base-year counts from the Calais freight-search statistics, plus the
/// estimated missed flow that anchors every method.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationConstants {
    pub total_lorries_per_year: u64,
    pub uk_screen_share: Rat,
    pub french_found: u64,
    pub uk_shed_found: u64,
    pub uk_berth_found: u64,
    pub missed_positive_lorries: u64,
    pub clandestines_per_lorry: u64,
    pub cost_per_clandestine_per_year: Money,
    pub stay_years: u64,
}

impl Default for CalibrationConstants {
    fn default() -> Self {
        Self {
            total_lorries_per_year: 900_000,
            uk_screen_share: rat(33, 100),
            french_found: 1_800,
            uk_shed_found: 890,
            uk_berth_found: 784,
            missed_positive_lorries: 150,
            clandestines_per_lorry: 4,
            cost_per_clandestine_per_year: Money::from_pounds(20_000),
            stay_years: 5,
        }
    }
}

impl CalibrationConstants {
    pub fn uk_found_total(&self) -> u64 {
        self.uk_shed_found + self.uk_berth_found
    }

    pub fn total_found(&self) -> u64 {
        self.french_found + self.uk_found_total()
    }

    pub fn successful_clandestines(&self) -> u64 {
        self.missed_positive_lorries * self.clandestines_per_lorry
    }

    /// Cost of one missed positive lorry: clandestines aboard times the
    /// per-clandestine yearly cost times the expected stay.
    pub fn cost_per_missed_lorry(&self) -> Money {
        self.cost_per_clandestine_per_year
            * (self.clandestines_per_lorry * self.stay_years) as i64
    }
}

/// One level of a random factor: growth fraction and its probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorLevel {
    pub growth: Rat,
    pub probability: Rat,
}

/// The factor grid: traffic growth (TG) and clandestine growth (CG) are
/// random; search growth (SG) is the decision variable and carries no
/// probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFactors {
    pub tg_levels: Vec<FactorLevel>,
    pub cg_levels: Vec<FactorLevel>,
    pub sg_options: Vec<Rat>,
}

impl Default for ScenarioFactors {
    fn default() -> Self {
        Self {
            tg_levels: vec![
                FactorLevel { growth: int(0), probability: rat(1, 4) },
                FactorLevel { growth: rat(1, 10), probability: rat(1, 2) },
                FactorLevel { growth: rat(2, 10), probability: rat(1, 4) },
            ],
            cg_levels: vec![
                FactorLevel { growth: rat(-1, 2), probability: rat(1, 3) },
                FactorLevel { growth: int(0), probability: rat(1, 3) },
                FactorLevel { growth: rat(1, 4), probability: rat(1, 3) },
            ],
            sg_options: vec![int(0), rat(1, 10), rat(2, 10)],
        }
    }
}

impl ScenarioFactors {
    pub fn validate(&self) -> Result<(), ModelError> {
        let sum_tg: Rat = self.tg_levels.iter().map(|l| l.probability).sum();
        let sum_cg: Rat = self.cg_levels.iter().map(|l| l.probability).sum();
        if sum_tg != int(1) {
            return Err(ModelError::Calibration(format!(
                "TG probabilities sum to {sum_tg}, not 1"
            )));
        }
        if sum_cg != int(1) {
            return Err(ModelError::Calibration(format!(
                "CG probabilities sum to {sum_cg}, not 1"
            )));
        }
        Ok(())
    }

    fn find(levels: &[FactorLevel], growth: Rat, kind: &'static str) -> Result<FactorLevel, ModelError> {
        levels
            .iter()
            .copied()
            .find(|l| l.growth == growth)
            .ok_or_else(|| ModelError::UnknownLevel {
                kind,
                level: format!("{growth}"),
            })
    }

    pub fn tg(&self, growth: Rat) -> Result<FactorLevel, ModelError> {
        Self::find(&self.tg_levels, growth, "TG")
    }

    pub fn cg(&self, growth: Rat) -> Result<FactorLevel, ModelError> {
        Self::find(&self.cg_levels, growth, "CG")
    }

    pub fn sg(&self, growth: Rat) -> Result<Rat, ModelError> {
        self.sg_options
            .iter()
            .copied()
            .find(|s| *s == growth)
            .ok_or_else(|| ModelError::UnknownLevel {
                kind: "SG",
                level: format!("{growth}"),
            })
    }

    /// Joint probability of a (TG, CG) combination under independence.
    pub fn combined_probability(&self, tg: Rat, cg: Rat) -> Result<Rat, ModelError> {
        Ok(self.tg(tg)?.probability * self.cg(cg)?.probability)
    }
}

/// Cost rules: the flat price of a missed positive lorry and the yearly
/// price of each extra-search option. The search cost depends on the SG
/// decision only, never on traffic growth.
#[derive(Debug, Clone, PartialEq)]
pub struct CostModel {
    pub cost_per_missed_lorry: Money,
    pub search_growth_cost: Vec<(Rat, Money)>,
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            cost_per_missed_lorry: Money::from_pounds(400_000),
            search_growth_cost: vec![
                (int(0), Money::ZERO),
                (rat(1, 10), Money::from_pounds(5_000_000)),
                (rat(2, 10), Money::from_pounds(10_000_000)),
            ],
        }
    }
}

impl CostModel {
    pub fn search_cost(&self, sg: Rat) -> Result<Money, ModelError> {
        self.search_growth_cost
            .iter()
            .find(|(s, _)| *s == sg)
            .map(|(_, m)| *m)
            .ok_or_else(|| ModelError::UnknownLevel {
                kind: "SG",
                level: format!("{sg}"),
            })
    }
}

/// Change in effective search coverage relative to the base year:
/// r = (1 + SG) / (1 + TG).
pub fn scale_factor(tg: Rat, sg: Rat) -> Result<Rat, ModelError> {
    if tg <= int(-1) {
        return Err(ModelError::TrafficGrowthOutOfRange(to_f64(tg)));
    }
    Ok((int(1) + sg) / (int(1) + tg))
}

/// Share of vehicles searched under the given growth combination.
pub fn proportion_searched(
    constants: &CalibrationConstants,
    tg: Rat,
    sg: Rat,
) -> Result<Rat, ModelError> {
    let p = constants.uk_screen_share * scale_factor(tg, sg)?;
    if p > int(1) {
        return Err(ModelError::ProportionOutOfRange(to_f64(p)));
    }
    if is_zero(p) || p < int(0) {
        return Err(ModelError::ProportionOutOfRange(to_f64(p)));
    }
    Ok(p)
}
