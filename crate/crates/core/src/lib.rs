//! Cost-benefit analysis of cargo-screening policies for the Calais-UK
//! lorry flow.
//!
//! One calibrated model of the screening process, evaluated four ways:
//! a deterministic scenario analysis, a decision tree, a Monte Carlo
//! simulation and a family of discrete-event simulations. All four feed
//! the same expected-cost comparison that ranks the search-growth policy
//! options.

pub mod analysis;
pub mod dtree;
pub mod exact;
pub mod flow;
pub mod money;
pub mod report;
pub mod scenario;
pub mod tables;

pub use exact::Rat;
pub use money::Money;
pub use scenario::{CalibrationConstants, CostModel, ModelError, ScenarioFactors};
