//! Deterministic scenario-analysis pipeline: found/missed matrices over
//! the TG x SG grid, relative matrices against the base scenario, the
//! expected-cost matrices and the probability-weighted policy cost.

use crate::exact::{int, is_zero, Rat};
use crate::money::Money;
use crate::scenario::{scale_factor, CalibrationConstants, CostModel, ModelError, ScenarioFactors};

/// A 3x3 (or grid-sized) matrix of values over TG rows and SG columns,
/// conditioned on one CG level.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyMatrix {
    pub tg_levels: Vec<Rat>,
    pub sg_options: Vec<Rat>,
    pub cells: Vec<Vec<Rat>>,
    pub cg_context: Rat,
}

impl PolicyMatrix {
    pub fn cell(&self, tg: Rat, sg: Rat) -> Result<Rat, ModelError> {
        let row = self
            .tg_levels
            .iter()
            .position(|t| *t == tg)
            .ok_or_else(|| ModelError::UnknownLevel {
                kind: "TG",
                level: format!("{tg}"),
            })?;
        let col = self
            .sg_options
            .iter()
            .position(|s| *s == sg)
            .ok_or_else(|| ModelError::UnknownLevel {
                kind: "SG",
                level: format!("{sg}"),
            })?;
        Ok(self.cells[row][col])
    }

    fn build<F>(factors: &ScenarioFactors, cg: Rat, f: F) -> Result<PolicyMatrix, ModelError>
    where
        F: Fn(Rat, Rat) -> Result<Rat, ModelError>,
    {
        let tg_levels: Vec<Rat> = factors.tg_levels.iter().map(|l| l.growth).collect();
        let sg_options = factors.sg_options.clone();
        let mut cells = Vec::with_capacity(tg_levels.len());
        for &tg in &tg_levels {
            let mut row = Vec::with_capacity(sg_options.len());
            for &sg in &sg_options {
                row.push(f(tg, sg)?);
            }
            cells.push(row);
        }
        Ok(PolicyMatrix {
            tg_levels,
            sg_options,
            cells,
            cg_context: cg,
        })
    }

    /// Every cell divided by a base value; the r = 1 diagonal becomes 1.
    pub fn relative_to(&self, base_cell_value: Rat) -> Result<PolicyMatrix, ModelError> {
        if is_zero(base_cell_value) {
            return Err(ModelError::ZeroBase);
        }
        let mut out = self.clone();
        for row in &mut out.cells {
            for c in row.iter_mut() {
                *c /= base_cell_value;
            }
        }
        Ok(out)
    }
}

/// The scenario-analysis engine over one calibrated model.
#[derive(Debug, Clone, Default)]
pub struct ScenarioAnalysis {
    pub constants: CalibrationConstants,
    pub factors: ScenarioFactors,
    pub costs: CostModel,
}

impl ScenarioAnalysis {
    pub fn new(
        constants: CalibrationConstants,
        factors: ScenarioFactors,
        costs: CostModel,
    ) -> Self {
        Self {
            constants,
            factors,
            costs,
        }
    }

    /// Share of vehicles searched per grid cell (independent of CG).
    pub fn searched_matrix(&self) -> Result<PolicyMatrix, ModelError> {
        let c = &self.constants;
        PolicyMatrix::build(&self.factors, int(0), |tg, sg| {
            crate::scenario::proportion_searched(c, tg, sg)
        })
    }

    /// Positive lorries found per year: base UK total scaled by the
    /// coverage ratio r and the clandestine growth.
    pub fn found_matrix(&self, cg: Rat) -> Result<PolicyMatrix, ModelError> {
        self.factors.cg(cg)?;
        let base = int(self.constants.uk_found_total() as i128);
        PolicyMatrix::build(&self.factors, cg, |tg, sg| {
            Ok(base * scale_factor(tg, sg)? * (int(1) + cg))
        })
    }

    /// Positive lorries missed per year: the linear assumption makes the
    /// missed count inversely proportional to the coverage ratio.
    pub fn missed_matrix(&self, cg: Rat) -> Result<PolicyMatrix, ModelError> {
        self.factors.cg(cg)?;
        let base = int(self.constants.missed_positive_lorries as i128);
        PolicyMatrix::build(&self.factors, cg, |tg, sg| {
            Ok(base * (int(1) + cg) / scale_factor(tg, sg)?)
        })
    }

    /// Expected yearly cost per cell: missed lorries priced at the flat
    /// per-lorry cost, plus the SG option's search cost. Clandestine
    /// growth scales only the missed-lorry component; the search cost is
    /// a fixed price of the decision.
    pub fn expected_cost_matrix(&self, cg: Rat) -> Result<PolicyMatrix, ModelError> {
        let mut out = self.missed_matrix(cg)?;
        let lorry_cost = self.costs.cost_per_missed_lorry.as_pounds_rat();
        let sg_options = out.sg_options.clone();
        for row in &mut out.cells {
            for (cell, &sg) in row.iter_mut().zip(&sg_options) {
                let search = self.costs.search_cost(sg)?.as_pounds_rat();
                *cell = *cell * lorry_cost + search;
            }
        }
        Ok(out)
    }

    /// Probability-weighted expected cost of one SG option over all nine
    /// (TG, CG) combinations, in exact pounds.
    pub fn policy_expected_cost_rat(&self, sg: Rat) -> Result<Rat, ModelError> {
        self.factors.sg(sg)?;
        let mut total = int(0);
        for tl in &self.factors.tg_levels {
            for cl in &self.factors.cg_levels {
                let p = tl.probability * cl.probability;
                let ec = self.expected_cost_matrix(cl.growth)?.cell(tl.growth, sg)?;
                total += p * ec;
            }
        }
        Ok(total)
    }

    pub fn policy_expected_cost(&self, sg: Rat) -> Result<Money, ModelError> {
        Ok(Money::from_pounds_rat(self.policy_expected_cost_rat(sg)?))
    }

    /// Missed counts for all 27 (TG, CG, SG) cells, for the cost report.
    pub fn missed_by_cell(&self) -> Result<Vec<(Rat, Rat, Rat, f64)>, ModelError> {
        let mut out = Vec::new();
        for tl in &self.factors.tg_levels {
            for cl in &self.factors.cg_levels {
                let m = self.missed_matrix(cl.growth)?;
                for &sg in &self.factors.sg_options {
                    out.push((
                        tl.growth,
                        cl.growth,
                        sg,
                        crate::exact::to_f64(m.cell(tl.growth, sg)?),
                    ));
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{format_dp, rat, to_f64};

    fn sa() -> ScenarioAnalysis {
        ScenarioAnalysis::default()
    }

    #[test]
    fn found_matrix_examples() {
        let m = sa().found_matrix(int(0)).unwrap();
        assert_eq!(format_dp(m.cell(int(0), rat(2, 10)).unwrap(), 1), "2008.8");
        assert_eq!(format_dp(m.cell(rat(2, 10), int(0)).unwrap(), 1), "1395.0");
        // r = 1 diagonal
        assert_eq!(m.cell(rat(1, 10), rat(1, 10)).unwrap(), int(1674));
    }

    #[test]
    fn missed_matrix_examples() {
        let m = sa().missed_matrix(int(0)).unwrap();
        assert_eq!(format_dp(m.cell(rat(2, 10), int(0)).unwrap(), 1), "180.0");
        assert_eq!(format_dp(m.cell(int(0), rat(1, 10)).unwrap(), 1), "136.4");
        assert_eq!(m.cell(int(0), rat(1, 10)).unwrap(), rat(1500, 11));
        assert_eq!(m.cell(rat(1, 10), rat(1, 10)).unwrap(), int(150));
    }

    #[test]
    fn relative_matrices() {
        let a = sa();
        let found = a.found_matrix(int(0)).unwrap();
        let rel_found = found.relative_to(int(1674)).unwrap();
        assert_eq!(
            format_dp(rel_found.cell(rat(2, 10), int(0)).unwrap(), 6),
            "0.833333"
        );
        let missed = a.missed_matrix(int(0)).unwrap();
        let rel_missed = missed.relative_to(int(150)).unwrap();
        assert_eq!(format_dp(rel_missed.cell(rat(2, 10), int(0)).unwrap(), 2), "1.20");
        // element-wise reciprocals
        for (fr, mr) in rel_found.cells.iter().flatten().zip(rel_missed.cells.iter().flatten()) {
            assert_eq!(*fr * *mr, int(1));
        }
        // any matrix relative to itself, cell by cell, is all ones
        let self_rel = found
            .cells
            .iter()
            .flatten()
            .map(|c| *c / *c)
            .collect::<Vec<_>>();
        assert!(self_rel.iter().all(|c| *c == int(1)));
    }

    #[test]
    fn zero_base_is_an_error() {
        let m = sa().found_matrix(int(0)).unwrap();
        assert!(matches!(m.relative_to(int(0)), Err(ModelError::ZeroBase)));
    }

    #[test]
    fn expected_cost_examples() {
        let a = sa();
        let ec0 = a.expected_cost_matrix(int(0)).unwrap();
        let money = |r| Money::from_pounds_rat(r).display_pounds();
        assert_eq!(money(ec0.cell(int(0), rat(1, 10)).unwrap()), "£59,545,455");
        assert_eq!(money(ec0.cell(rat(2, 10), int(0)).unwrap()), "£72,000,000");
        // CG = +25% scales the missed component only
        let ec25 = a.expected_cost_matrix(rat(1, 4)).unwrap();
        assert_eq!(money(ec25.cell(int(0), rat(1, 10)).unwrap()), "£73,181,818");
    }

    #[test]
    fn policy_costs_reproduce_the_published_row() {
        let a = sa();
        let cost = |sg| a.policy_expected_cost(sg).unwrap().display_pounds();
        assert_eq!(cost(int(0)), "£60,500,000");
        assert_eq!(cost(rat(1, 10)), "£60,000,000");
        assert_eq!(cost(rat(2, 10)), "£60,416,667");
    }

    #[test]
    fn found_times_missed_is_constant_along_fixed_cg() {
        let a = sa();
        for cg in [rat(-1, 2), int(0), rat(1, 4)] {
            let f = a.found_matrix(cg).unwrap();
            let m = a.missed_matrix(cg).unwrap();
            let expected = int(1674) * int(150) * (int(1) + cg) * (int(1) + cg);
            for (fc, mc) in f.cells.iter().flatten().zip(m.cells.iter().flatten()) {
                assert_eq!(*fc * *mc, expected);
            }
        }
    }

    #[test]
    fn degenerate_probabilities_recover_the_cost_table_row() {
        // all probability mass on (TG=0, CG=0) -> policy costs equal the
        // top row of the CG=0 expected-cost table
        let mut a = sa();
        for l in &mut a.factors.tg_levels {
            l.probability = if is_zero(l.growth) { int(1) } else { int(0) };
        }
        for l in &mut a.factors.cg_levels {
            l.probability = if is_zero(l.growth) { int(1) } else { int(0) };
        }
        let ec = a.expected_cost_matrix(int(0)).unwrap();
        for &sg in &[int(0), rat(1, 10), rat(2, 10)] {
            assert_eq!(
                a.policy_expected_cost_rat(sg).unwrap(),
                ec.cell(int(0), sg).unwrap()
            );
        }
    }

    #[test]
    fn searched_matrix_is_the_proportion_table() {
        let m = sa().searched_matrix().unwrap();
        assert_eq!(format_dp(m.cell(rat(2, 10), rat(1, 10)).unwrap(), 4), "0.3025");
        assert!(to_f64(m.cell(int(0), rat(2, 10)).unwrap()) <= 1.0);
    }
}
