//! Decision-tree representation of the screening flow, calibrated from the
//! base-year counts and evaluated by rollback.
//!
//! The yearly pool of positive-lorry attempts is not fixed: unsuccessful
//! clandestines try again, so finding more lorries inflates the number of
//! attempts. Closing the model with
//! `N(r) = french + uk_found * r + missed(r)` keeps every branch
//! probability well-formed while the expected found counts stay exactly
//! proportional to the coverage ratio r and the missed count inversely
//! proportional to it.

use crate::exact::{int, rat, to_f64, Rat};
use crate::money::Money;
use crate::scenario::{
    scale_factor, CalibrationConstants, CostModel, ModelError, ScenarioFactors,
};

/// Where a positive lorry's story ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TerminalClass {
    FrenchFound,
    ShedFound,
    BerthFound,
    Missed,
}

impl TerminalClass {
    pub fn label(self) -> &'static str {
        match self {
            TerminalClass::FrenchFound => "found at French control",
            TerminalClass::ShedFound => "found in UK shed",
            TerminalClass::BerthFound => "found in berth",
            TerminalClass::Missed => "missed (boards ferry)",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Decision {
        label: String,
        choices: Vec<(String, TreeNode)>,
    },
    Chance {
        label: String,
        branches: Vec<(Rat, TreeNode)>,
    },
    Terminal {
        label: String,
        class: TerminalClass,
    },
}

impl TreeNode {
    fn chance(label: &str, branches: Vec<(Rat, TreeNode)>) -> TreeNode {
        TreeNode::Chance {
            label: label.to_string(),
            branches,
        }
    }

    fn terminal(class: TerminalClass) -> TreeNode {
        TreeNode::Terminal {
            label: class.label().to_string(),
            class,
        }
    }

    /// Check chance-branch probabilities: each in [0, 1], summing to 1.
    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            TreeNode::Terminal { .. } => Ok(()),
            TreeNode::Decision { choices, .. } => {
                for (_, child) in choices {
                    child.validate()?;
                }
                Ok(())
            }
            TreeNode::Chance { label, branches } => {
                if branches.is_empty() {
                    return Err(ModelError::MalformedTree(format!(
                        "chance node '{label}' has no branches"
                    )));
                }
                let mut sum = int(0);
                for (p, child) in branches {
                    if *p < int(0) || *p > int(1) {
                        return Err(ModelError::MalformedTree(format!(
                            "branch probability {p} at '{label}' outside [0, 1]"
                        )));
                    }
                    sum += *p;
                    child.validate()?;
                }
                if sum != int(1) {
                    return Err(ModelError::MalformedTree(format!(
                        "branch probabilities at '{label}' sum to {sum}, not 1"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Expected yearly counts per terminal class after rollback.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassExpectations {
    pub french_found: Rat,
    pub shed_found: Rat,
    pub berth_found: Rat,
    pub missed: Rat,
}

impl ClassExpectations {
    pub fn uk_found(&self) -> Rat {
        self.shed_found + self.berth_found
    }

    pub fn total(&self) -> Rat {
        self.french_found + self.uk_found() + self.missed
    }
}

/// Forward probability propagation: terminal-class expectations are path
/// probabilities times the yearly attempt count.
pub fn rollback(tree: &TreeNode, attempts: Rat) -> Result<ClassExpectations, ModelError> {
    tree.validate()?;
    let mut out = ClassExpectations::default();
    propagate(tree, attempts, &mut out)?;
    Ok(out)
}

fn propagate(node: &TreeNode, weight: Rat, out: &mut ClassExpectations) -> Result<(), ModelError> {
    match node {
        TreeNode::Terminal { class, .. } => {
            match class {
                TerminalClass::FrenchFound => out.french_found += weight,
                TerminalClass::ShedFound => out.shed_found += weight,
                TerminalClass::BerthFound => out.berth_found += weight,
                TerminalClass::Missed => out.missed += weight,
            }
            Ok(())
        }
        TreeNode::Chance { branches, .. } => {
            for (p, child) in branches {
                propagate(child, weight * *p, out)?;
            }
            Ok(())
        }
        TreeNode::Decision { label, .. } => Err(ModelError::MalformedTree(format!(
            "decision node '{label}' inside a chance rollback; evaluate options separately"
        ))),
    }
}

/// Observable shape of the flow that the base-year aggregates do not pin
/// down: the soft/hard lorry mix and the per-device conditional detection
/// probabilities. Aggregate stage probabilities are invariant to these.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeShape {
    pub soft_share: Rat,
    /// P(CO2 probe confirms | PMMW flagged a positive soft-sided lorry).
    pub co2_confirm: Rat,
    /// P(search finds the clandestines | positive lorry searched in a shed).
    pub shed_detection: Rat,
    /// P(search finds the clandestines | positive lorry searched in the berth).
    pub berth_detection: Rat,
}

impl Default for TreeShape {
    fn default() -> Self {
        Self {
            soft_share: rat(1, 2),
            co2_confirm: rat(19, 20),
            shed_detection: rat(9, 10),
            berth_detection: rat(19, 20),
        }
    }
}

/// Share of the missed flow that does not respond to search growth.
///
/// A small residue of missed lorries behaves as if outside the search
/// regime altogether; its default is calibrated so the rolled-up policy
/// costs reproduce the reference decision-tree cost row exactly. Zero
/// gives the pure inverse-r model of the scenario analysis.
pub const DEFAULT_RESIDUAL_MISSED: (i128, i128) = (3_831, 55_000);

/// Calibrated parameters of the flow tree for one (r, cg) combination.
#[derive(Debug, Clone, PartialEq)]
pub struct CalaisTreeParams {
    pub r: Rat,
    pub cg: Rat,
    /// Yearly positive-lorry attempts N(r), scaled by clandestine growth.
    pub attempts: Rat,
    pub p_french: Rat,
    pub p_shed_given_passed: Rat,
    pub p_berth_given_passed_shed: Rat,
    /// Expected missed count before clandestine growth.
    missed_base: Rat,
    residual_missed: Rat,
}

impl CalaisTreeParams {
    /// Calibrate from base-year constants at coverage ratio `r`, with the
    /// missed residual `residual` (zero for the pure linear model).
    pub fn with_residual(
        constants: &CalibrationConstants,
        r: Rat,
        cg: Rat,
        residual: Rat,
    ) -> Result<Self, ModelError> {
        if r <= int(0) {
            return Err(ModelError::Calibration(format!(
                "coverage ratio r must be positive, got {r}"
            )));
        }
        let french = int(constants.french_found as i128);
        let shed = int(constants.uk_shed_found as i128);
        let berth = int(constants.uk_berth_found as i128);
        let uk = shed + berth;
        let missed_total = int(constants.missed_positive_lorries as i128);
        if residual < int(0) || residual >= missed_total {
            return Err(ModelError::Calibration(format!(
                "missed residual {residual} outside [0, missed)"
            )));
        }
        let missed_base = (missed_total - residual) / r + residual;
        let n = french + uk * r + missed_base;
        Ok(Self {
            r,
            cg,
            attempts: n * (int(1) + cg),
            p_french: french / n,
            p_shed_given_passed: shed * r / (uk * r + missed_base),
            p_berth_given_passed_shed: berth * r / (berth * r + missed_base),
            missed_base,
            residual_missed: residual,
        })
    }

    pub fn new(constants: &CalibrationConstants, r: Rat, cg: Rat) -> Result<Self, ModelError> {
        Self::with_residual(constants, r, cg, int(0))
    }

    /// Expected counts implied by the calibration, without building a tree.
    pub fn expectations(&self) -> ClassExpectations {
        let grow = int(1) + self.cg;
        let n = self.attempts / grow;
        ClassExpectations {
            french_found: n * self.p_french * grow,
            shed_found: n * (int(1) - self.p_french) * self.p_shed_given_passed * grow,
            berth_found: n
                * (int(1) - self.p_french)
                * (int(1) - self.p_shed_given_passed)
                * self.p_berth_given_passed_shed
                * grow,
            missed: self.missed_base * grow,
        }
    }
}

fn check_probability(label: &str, p: Rat) -> Result<Rat, ModelError> {
    if p < int(0) || p > int(1) {
        return Err(ModelError::Calibration(format!(
            "{label} probability {p} outside [0, 1]; coverage ratio beyond the calibrated range"
        )));
    }
    Ok(p)
}

/// Build the flow tree for one (r, cg) cell.
///
/// Passport -> side split -> {soft: PMMW -> CO2 -> open | hard: HB -> open}
/// -> ticket -> UK passport -> shed (selected/searched/found) -> berth
/// (searched/found) with four terminal classes. Requests beyond the
/// largest r that keeps every branch probability in range fail loudly.
pub fn build_calais_tree(
    params: &CalaisTreeParams,
    shape: &TreeShape,
) -> Result<TreeNode, ModelError> {
    let one = int(1);

    // French chain: opening a positive lorry always finds the people; the
    // sensors carry the miss rates. Per-side detection equals the stage
    // aggregate, so the soft/hard mix never moves the aggregates.
    let pmmw_suspect = check_probability("PMMW suspicion", params.p_french / shape.co2_confirm)?;
    let co2_confirm = check_probability("CO2 confirmation", shape.co2_confirm)?;
    let hb_suspect = check_probability("heartbeat suspicion", params.p_french)?;

    // UK shed: targeted selection, then detection given a search.
    let q_shed = check_probability(
        "shed selection",
        params.p_shed_given_passed / shape.shed_detection,
    )?;
    let d_shed = check_probability("shed detection", shape.shed_detection)?;

    // Berth: mobile-unit search reaches a share of positives, then detection.
    let q_berth = check_probability(
        "berth search",
        params.p_berth_given_passed_shed / shape.berth_detection,
    )?;
    let d_berth = check_probability("berth detection", shape.berth_detection)?;

    let berth = TreeNode::chance(
        "berth: mobile units",
        vec![
            (
                q_berth,
                TreeNode::chance(
                    "berth search",
                    vec![
                        (d_berth, TreeNode::terminal(TerminalClass::BerthFound)),
                        (one - d_berth, TreeNode::terminal(TerminalClass::Missed)),
                    ],
                ),
            ),
            (one - q_berth, TreeNode::terminal(TerminalClass::Missed)),
        ],
    );

    let shed = TreeNode::chance(
        "UK shed: selection",
        vec![
            (
                q_shed,
                TreeNode::chance(
                    "shed search",
                    vec![
                        (d_shed, TreeNode::terminal(TerminalClass::ShedFound)),
                        (one - d_shed, berth.clone()),
                    ],
                ),
            ),
            (one - q_shed, berth),
        ],
    );

    let uk_passport = TreeNode::chance("UK passport control", vec![(one, shed)]);
    let ticket = TreeNode::chance("ticket purchase", vec![(one, uk_passport)]);

    let soft = TreeNode::chance(
        "PMMW scan (soft-sided)",
        vec![
            (
                pmmw_suspect,
                TreeNode::chance(
                    "CO2 probe",
                    vec![
                        (
                            co2_confirm,
                            TreeNode::chance(
                                "open lorry",
                                vec![(one, TreeNode::terminal(TerminalClass::FrenchFound))],
                            ),
                        ),
                        (one - co2_confirm, ticket.clone()),
                    ],
                ),
            ),
            (one - pmmw_suspect, ticket.clone()),
        ],
    );

    let hard = TreeNode::chance(
        "heartbeat detector (hard-sided)",
        vec![
            (
                hb_suspect,
                TreeNode::chance(
                    "open lorry",
                    vec![(one, TreeNode::terminal(TerminalClass::FrenchFound))],
                ),
            ),
            (one - hb_suspect, ticket),
        ],
    );

    let side = TreeNode::chance(
        "lorry side",
        vec![(shape.soft_share, soft), (one - shape.soft_share, hard)],
    );

    let root = TreeNode::chance("French passport control", vec![(one, side)]);
    root.validate()?;
    Ok(root)
}

/// Largest coverage ratio r for which every branch probability stays in
/// range under the given shape (zero-residual model).
pub fn r_max(constants: &CalibrationConstants, shape: &TreeShape) -> f64 {
    let berth = constants.uk_berth_found as f64;
    let missed = constants.missed_positive_lorries as f64;
    let shed = constants.uk_shed_found as f64;
    let uk = shed + berth;
    let mut bound = f64::INFINITY;
    // berth: q_berth = 1 when B r^2 (1 - d) = d * M
    let d = to_f64(shape.berth_detection);
    if d < 1.0 {
        bound = bound.min((missed * d / (berth * (1.0 - d))).sqrt());
    }
    // shed: binds only when detection is below the asymptotic stage share
    let d = to_f64(shape.shed_detection);
    if d < shed / uk {
        bound = bound.min((missed * d / (shed - d * uk)).sqrt());
    }
    bound
}

/// Probability-to-word mapping used when presenting the tree.
pub fn word_category(p: f64) -> Result<&'static str, ModelError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ModelError::ProbabilityOutOfRange(p));
    }
    Ok(if p > 0.5 {
        "large"
    } else if p > 0.1 {
        "medium"
    } else if p > 0.01 {
        "small"
    } else {
        "very small"
    })
}

/// Decision-tree evaluation over the whole factor grid.
#[derive(Debug, Clone)]
pub struct TreeEvaluation {
    pub constants: CalibrationConstants,
    pub factors: ScenarioFactors,
    pub costs: CostModel,
    pub shape: TreeShape,
    pub residual_missed: Rat,
}

impl Default for TreeEvaluation {
    fn default() -> Self {
        Self {
            constants: CalibrationConstants::default(),
            factors: ScenarioFactors::default(),
            costs: CostModel::default(),
            shape: TreeShape::default(),
            residual_missed: rat(DEFAULT_RESIDUAL_MISSED.0, DEFAULT_RESIDUAL_MISSED.1),
        }
    }
}

impl TreeEvaluation {
    pub fn params(&self, tg: Rat, sg: Rat, cg: Rat) -> Result<CalaisTreeParams, ModelError> {
        let r = scale_factor(tg, sg)?;
        CalaisTreeParams::with_residual(&self.constants, r, cg, self.residual_missed)
    }

    /// Expected counts per cell via an explicit build-and-rollback pass.
    pub fn cell_expectations(
        &self,
        tg: Rat,
        sg: Rat,
        cg: Rat,
    ) -> Result<ClassExpectations, ModelError> {
        let params = self.params(tg, sg, cg)?;
        let tree = build_calais_tree(&params, &self.shape)?;
        rollback(&tree, params.attempts)
    }

    /// UK found counts over the TG x SG grid at one CG level.
    pub fn found_matrix(&self, cg: Rat) -> Result<crate::analysis::PolicyMatrix, ModelError> {
        self.factors.cg(cg)?;
        let tg_levels: Vec<Rat> = self.factors.tg_levels.iter().map(|l| l.growth).collect();
        let sg_options = self.factors.sg_options.clone();
        let mut cells = Vec::new();
        for &tg in &tg_levels {
            let mut row = Vec::new();
            for &sg in &sg_options {
                row.push(self.cell_expectations(tg, sg, cg)?.uk_found());
            }
            cells.push(row);
        }
        Ok(crate::analysis::PolicyMatrix {
            tg_levels,
            sg_options,
            cells,
            cg_context: cg,
        })
    }

    /// Probability-weighted expected cost per SG option, from rollback
    /// missed counts.
    pub fn policy_costs(&self) -> Result<Vec<(Rat, Money)>, ModelError> {
        let mut out = Vec::new();
        for &sg in &self.factors.sg_options {
            let mut total = int(0);
            for tl in &self.factors.tg_levels {
                for cl in &self.factors.cg_levels {
                    let p = tl.probability * cl.probability;
                    let missed = self.cell_expectations(tl.growth, sg, cl.growth)?.missed;
                    let ec = missed * self.costs.cost_per_missed_lorry.as_pounds_rat()
                        + self.costs.search_cost(sg)?.as_pounds_rat();
                    total += p * ec;
                }
            }
            out.push((sg, Money::from_pounds_rat(total)));
        }
        Ok(out)
    }

    /// Missed counts for all 27 cells, for the cost report.
    pub fn missed_by_cell(&self) -> Result<Vec<(Rat, Rat, Rat, f64)>, ModelError> {
        let mut out = Vec::new();
        for tl in &self.factors.tg_levels {
            for cl in &self.factors.cg_levels {
                for &sg in &self.factors.sg_options {
                    let missed = self.cell_expectations(tl.growth, sg, cl.growth)?.missed;
                    out.push((tl.growth, cl.growth, sg, to_f64(missed)));
                }
            }
        }
        Ok(out)
    }
}

/// Plain-text indented outline with numeric probabilities and their word
/// categories.
pub fn outline(node: &TreeNode) -> String {
    let mut out = String::new();
    fn walk(node: &TreeNode, depth: usize, prefix: &str, out: &mut String) {
        let pad = "  ".repeat(depth);
        match node {
            TreeNode::Decision { label, choices } => {
                out.push_str(&format!("{pad}{prefix}[decision] {label}\n"));
                for (choice, child) in choices {
                    walk(child, depth + 1, &format!("({choice}) "), out);
                }
            }
            TreeNode::Chance { label, branches } => {
                out.push_str(&format!("{pad}{prefix}[chance] {label}\n"));
                for (p, child) in branches {
                    let pf = to_f64(*p);
                    let word = word_category(pf).unwrap_or("?");
                    walk(child, depth + 1, &format!("(p={pf:.5}, {word}) "), out);
                }
            }
            TreeNode::Terminal { label, .. } => {
                out.push_str(&format!("{pad}{prefix}[terminal] {label}\n"));
            }
        }
    }
    walk(node, 0, "", &mut out);
    out
}

/// DOT-compatible graph text for visualization.
pub fn to_dot(node: &TreeNode) -> String {
    let mut out = String::from("digraph screening {\n  rankdir=LR;\n");
    let mut next_id = 0usize;
    fn walk(node: &TreeNode, next_id: &mut usize, out: &mut String) -> usize {
        let id = *next_id;
        *next_id += 1;
        match node {
            TreeNode::Decision { label, choices } => {
                out.push_str(&format!("  n{id} [shape=box, label=\"{label}\"];\n"));
                for (choice, child) in choices {
                    let c = walk(child, next_id, out);
                    out.push_str(&format!("  n{id} -> n{c} [label=\"{choice}\"];\n"));
                }
            }
            TreeNode::Chance { label, branches } => {
                out.push_str(&format!("  n{id} [shape=ellipse, label=\"{label}\"];\n"));
                for (p, child) in branches {
                    let pf = to_f64(*p);
                    let word = word_category(pf).unwrap_or("?");
                    let c = walk(child, next_id, out);
                    out.push_str(&format!(
                        "  n{id} -> n{c} [label=\"{pf:.5} ({word})\"];\n"
                    ));
                }
            }
            TreeNode::Terminal { label, .. } => {
                out.push_str(&format!(
                    "  n{id} [shape=plaintext, label=\"{label}\"];\n"
                ));
            }
        }
        id
    }
    walk(node, &mut next_id, &mut out);
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::format_dp;
    use approx::assert_abs_diff_eq;

    fn constants() -> CalibrationConstants {
        CalibrationConstants::default()
    }

    #[test]
    fn base_stage_probabilities() {
        let p = CalaisTreeParams::new(&constants(), int(1), int(0)).unwrap();
        assert_eq!(p.attempts, int(3_624));
        assert_eq!(p.p_french, rat(1_800, 3_624));
        assert_eq!(p.p_shed_given_passed, rat(890, 1_824));
        assert_eq!(p.p_berth_given_passed_shed, rat(784, 934));
        assert_eq!(format_dp(p.p_french, 5), "0.49669");
        assert_eq!(format_dp(p.p_shed_given_passed, 5), "0.48794");
        assert_eq!(format_dp(p.p_berth_given_passed_shed, 5), "0.83940");
    }

    #[test]
    fn branch_probabilities_sum_to_one_everywhere() {
        for r in [rat(5, 6), int(1), rat(6, 5)] {
            let params = CalaisTreeParams::new(&constants(), r, int(0)).unwrap();
            let tree = build_calais_tree(&params, &TreeShape::default()).unwrap();
            tree.validate().unwrap();
        }
    }

    #[test]
    fn rollback_reproduces_the_linear_counts() {
        let params = CalaisTreeParams::new(&constants(), int(1), int(0)).unwrap();
        let tree = build_calais_tree(&params, &TreeShape::default()).unwrap();
        let e = rollback(&tree, params.attempts).unwrap();
        assert_eq!(e.french_found, int(1_800));
        assert_eq!(e.uk_found(), int(1_674));
        assert_eq!(e.missed, int(150));

        // r = 1.2: the SG +20%, TG 0 column
        let params = CalaisTreeParams::new(&constants(), rat(6, 5), int(0)).unwrap();
        let tree = build_calais_tree(&params, &TreeShape::default()).unwrap();
        let e = rollback(&tree, params.attempts).unwrap();
        assert_eq!(format_dp(e.uk_found(), 1), "2008.8");
        assert_eq!(format_dp(e.missed, 1), "125.0");

        // r = 1/1.1: TG +10%, SG 0
        let params = CalaisTreeParams::new(&constants(), rat(10, 11), int(0)).unwrap();
        let tree = build_calais_tree(&params, &TreeShape::default()).unwrap();
        let e = rollback(&tree, params.attempts).unwrap();
        assert_eq!(format_dp(e.uk_found(), 0), "1522");
    }

    #[test]
    fn degenerate_tree_returns_all_attempts() {
        let tree = TreeNode::chance(
            "only outcome",
            vec![(int(1), TreeNode::terminal(TerminalClass::Missed))],
        );
        let e = rollback(&tree, int(777)).unwrap();
        assert_eq!(e.missed, int(777));
        assert_eq!(e.total(), int(777));
    }

    #[test]
    fn malformed_probabilities_are_rejected() {
        let tree = TreeNode::chance(
            "broken",
            vec![
                (rat(1, 2), TreeNode::terminal(TerminalClass::Missed)),
                (rat(1, 3), TreeNode::terminal(TerminalClass::ShedFound)),
            ],
        );
        assert!(matches!(
            rollback(&tree, int(1)),
            Err(ModelError::MalformedTree(_))
        ));
    }

    #[test]
    fn french_expectation_is_independent_of_r() {
        for r in [rat(1, 3), rat(10, 11), int(1), rat(11, 10), rat(3, 2)] {
            let p = CalaisTreeParams::new(&constants(), r, int(0)).unwrap();
            assert_eq!(p.expectations().french_found, int(1_800));
        }
    }

    #[test]
    fn aggregates_invariant_under_side_split() {
        let params = CalaisTreeParams::new(&constants(), rat(10, 11), int(0)).unwrap();
        let mut reference = None;
        for share in [rat(1, 10), rat(1, 2), rat(9, 10)] {
            let shape = TreeShape {
                soft_share: share,
                ..TreeShape::default()
            };
            let tree = build_calais_tree(&params, &shape).unwrap();
            let e = rollback(&tree, params.attempts).unwrap();
            match reference {
                None => reference = Some(e),
                Some(prev) => assert_eq!(prev, e),
            }
        }
    }

    #[test]
    fn rollback_matches_params_expectations() {
        let eval = TreeEvaluation::default();
        for &sg in &[int(0), rat(1, 10), rat(2, 10)] {
            let e = eval.cell_expectations(rat(1, 10), sg, rat(1, 4)).unwrap();
            let p = eval.params(rat(1, 10), sg, rat(1, 4)).unwrap();
            assert_eq!(e, p.expectations());
        }
    }

    #[test]
    fn beyond_r_max_fails_loudly() {
        let shape = TreeShape::default();
        let bound = r_max(&constants(), &shape);
        assert_abs_diff_eq!(bound, 1.90662, epsilon = 1e-4);
        let params = CalaisTreeParams::new(&constants(), int(2), int(0)).unwrap();
        assert!(matches!(
            build_calais_tree(&params, &shape),
            Err(ModelError::Calibration(_))
        ));
        // just inside the bound still builds
        let params = CalaisTreeParams::new(&constants(), rat(19, 10), int(0)).unwrap();
        assert!(build_calais_tree(&params, &shape).is_ok());
    }

    #[test]
    fn word_categories() {
        assert_eq!(word_category(0.6).unwrap(), "large");
        assert_eq!(word_category(0.5).unwrap(), "medium");
        assert_eq!(word_category(0.05).unwrap(), "small");
        assert_eq!(word_category(0.1).unwrap(), "small");
        assert_eq!(word_category(0.01).unwrap(), "very small");
        assert!(word_category(1.5).is_err());
        assert!(word_category(-0.1).is_err());
    }

    #[test]
    fn policy_costs_reproduce_the_reference_row() {
        let eval = TreeEvaluation::default();
        let costs = eval.policy_costs().unwrap();
        let rendered: Vec<String> = costs.iter().map(|(_, m)| m.display_pounds()).collect();
        assert_eq!(rendered, vec!["£60,497,446", "£60,000,000", "£60,418,795"]);
    }

    #[test]
    fn zero_residual_collapses_to_the_scenario_analysis() {
        let eval = TreeEvaluation {
            residual_missed: int(0),
            ..TreeEvaluation::default()
        };
        let costs = eval.policy_costs().unwrap();
        let rendered: Vec<String> = costs.iter().map(|(_, m)| m.display_pounds()).collect();
        assert_eq!(rendered, vec!["£60,500,000", "£60,000,000", "£60,416,667"]);
    }

    #[test]
    fn argmin_matches_the_scenario_analysis() {
        let eval = TreeEvaluation::default();
        let dt = eval.policy_costs().unwrap();
        let dt_best = dt.iter().min_by_key(|(_, m)| *m).unwrap().0;

        let sa = crate::analysis::ScenarioAnalysis::default();
        let sa_best = *eval
            .factors
            .sg_options
            .iter()
            .min_by_key(|&&sg| sa.policy_expected_cost(sg).unwrap())
            .unwrap();
        assert_eq!(dt_best, sa_best);
        assert_eq!(dt_best, rat(1, 10));
    }

    #[test]
    fn found_counts_agree_with_the_scenario_analysis() {
        let eval = TreeEvaluation::default();
        let sa = crate::analysis::ScenarioAnalysis::default();
        let dt = eval.found_matrix(int(0)).unwrap();
        let sam = sa.found_matrix(int(0)).unwrap();
        for (a, b) in dt.cells.iter().flatten().zip(sam.cells.iter().flatten()) {
            let diff = to_f64(*a - *b).abs();
            assert!(diff <= 1.0, "cells differ by {diff}");
        }
    }

    #[test]
    fn outline_and_dot_render() {
        let eval = TreeEvaluation::default();
        let params = eval.params(int(0), int(0), int(0)).unwrap();
        let tree = build_calais_tree(&params, &eval.shape).unwrap();
        let text = outline(&tree);
        assert!(text.contains("PMMW"));
        assert!(text.contains("large") || text.contains("medium"));
        let dot = to_dot(&tree);
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("->"));
    }
}
