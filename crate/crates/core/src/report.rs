//! Cross-method cost comparison: turns each method's missed counts into
//! expected policy costs, ranks the SG options, and builds the absolute
//! and relative comparison tables with the cheapest-option column.

use std::collections::HashMap;

use crate::exact::{to_f64, Rat};
use crate::money::Money;
use crate::scenario::{CostModel, ModelError, ScenarioFactors};
use crate::tables::{growth_label, Table};

/// Evaluation methods that can feed the comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Sa,
    Dt,
    Mc,
    Des0,
    Des1,
    Des2,
    Des3,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Sa => "SA",
            Method::Dt => "DT",
            Method::Mc => "MCS",
            Method::Des0 => "DES 0",
            Method::Des1 => "DES 1",
            Method::Des2 => "DES 2",
            Method::Des3 => "DES 3",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Some(match s.to_ascii_lowercase().as_str() {
            "sa" => Method::Sa,
            "dt" => Method::Dt,
            "mc" | "mcs" => Method::Mc,
            "des0" => Method::Des0,
            "des1" => Method::Des1,
            "des2" => Method::Des2,
            "des3" => Method::Des3,
            _ => return None,
        })
    }
}

/// One method's policy costs over the SG options.
#[derive(Debug, Clone)]
pub struct MethodCosts {
    pub method: Method,
    pub cost_per_option: Vec<(Rat, Money)>,
    pub cheapest: usize,
    pub relative: Vec<Money>,
}

impl MethodCosts {
    pub fn new(method: Method, cost_per_option: Vec<(Rat, Money)>) -> Self {
        // ties break toward the lower SG option: strict less-than while
        // scanning in option order keeps the first minimum
        let mut cheapest = 0;
        for (i, (_, m)) in cost_per_option.iter().enumerate() {
            if *m < cost_per_option[cheapest].1 {
                cheapest = i;
            }
        }
        let min = cost_per_option[cheapest].1;
        let relative = cost_per_option.iter().map(|(_, m)| *m - min).collect();
        Self {
            method,
            cost_per_option,
            cheapest,
            relative,
        }
    }
}

/// Probability-weighted expected cost per SG option from per-cell missed
/// counts. Simulation methods supply replication means; deterministic
/// methods their exact values.
pub fn expected_cost(
    missed_by_cell: &[(Rat, Rat, Rat, f64)],
    costs: &CostModel,
    factors: &ScenarioFactors,
) -> Result<Vec<(Rat, Money)>, ModelError> {
    let mut cells: HashMap<(Rat, Rat, Rat), f64> = HashMap::new();
    for (tg, cg, sg, missed) in missed_by_cell {
        cells.insert((*tg, *cg, *sg), *missed);
    }
    let lorry_cost = to_f64(costs.cost_per_missed_lorry.as_pounds_rat());
    let mut out = Vec::new();
    for &sg in &factors.sg_options {
        let mut total = 0.0;
        for tl in &factors.tg_levels {
            for cl in &factors.cg_levels {
                let missed = cells.get(&(tl.growth, cl.growth, sg)).ok_or_else(|| {
                    ModelError::Calibration(format!(
                        "incomplete experiment: missing cell TG={} CG={} SG={}",
                        tl.growth, cl.growth, sg
                    ))
                })?;
                total += to_f64(tl.probability * cl.probability) * missed * lorry_cost;
            }
        }
        let search = costs.search_cost(sg)?;
        out.push((
            sg,
            Money::from_pence((total * 100.0).round() as i64) + search,
        ));
    }
    Ok(out)
}

/// The assembled comparison: absolute and relative tables plus flags for
/// methods whose cheapest option departs from the majority.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub rows: Vec<MethodCosts>,
    pub majority_option: usize,
    pub dissenters: Vec<Method>,
}

pub fn comparison_table(rows: Vec<MethodCosts>) -> Result<Comparison, ModelError> {
    if rows.is_empty() {
        return Err(ModelError::Calibration(
            "comparison needs at least one method".into(),
        ));
    }
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for r in &rows {
        *counts.entry(r.cheapest).or_insert(0) += 1;
    }
    let majority_option = counts
        .iter()
        .max_by_key(|(opt, n)| (**n, usize::MAX - **opt))
        .map(|(opt, _)| *opt)
        .unwrap_or(0);
    let dissenters = rows
        .iter()
        .filter(|r| r.cheapest != majority_option)
        .map(|r| r.method)
        .collect();
    Ok(Comparison {
        rows,
        majority_option,
        dissenters,
    })
}

impl Comparison {
    fn option_labels(&self) -> Vec<String> {
        self.rows[0]
            .cost_per_option
            .iter()
            .enumerate()
            .map(|(i, (sg, _))| format!("{}: {}", i + 1, growth_label("SG", *sg).replace("SG ", "SG=")))
            .collect()
    }

    /// Absolute costs with the cheapest-option column.
    pub fn absolute_table(&self) -> Table {
        let mut cols = self.option_labels();
        cols.push("Cheapest option".into());
        let mut t = Table::new(
            "Overall cost comparisons of all methodologies",
            "Option",
            cols,
        );
        for r in &self.rows {
            let mut cells: Vec<String> = r
                .cost_per_option
                .iter()
                .map(|(_, m)| m.display_pounds())
                .collect();
            cells.push(format!("{}", r.cheapest + 1));
            t.push_row(r.method.label(), cells);
        }
        t
    }

    /// Costs relative to each method's cheapest option.
    pub fn relative_table(&self) -> Table {
        let mut cols = self.option_labels();
        cols.push("Cheapest option".into());
        let mut t = Table::new(
            "Relative cost comparisons of all methodologies",
            "Option",
            cols,
        );
        for r in &self.rows {
            let mut cells: Vec<String> = r.relative.iter().map(|m| m.display_pounds()).collect();
            cells.push(format!("{}", r.cheapest + 1));
            t.push_row(r.method.label(), cells);
        }
        t
    }
}
