//! Scenario execution: independently seeded replications, grid sweeps,
//! and the per-replication/summary result structure with CSV export.

use rayon::prelude::*;
use simkit::{run_until, summarize, StreamSet, Summary};

use super::model::{CalaisFlow, OUTCOME_MISSED};
use super::{SimMatrix, SimModelConfig};
use crate::exact::{to_f64, Rat};
use crate::scenario::ModelError;

/// One replication's counts and decision-support statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationOutput {
    pub replication: u64,
    pub french_found: u64,
    pub shed_found: u64,
    pub berth_found: u64,
    pub missed: u64,
    pub jumped_total: u64,
    pub jumped_positive: u64,
    pub selected: u64,
    pub positives_created: u64,
    pub positives_disposed: u64,
    pub created: u64,
    pub disposed: u64,
    pub in_flight: u64,
    pub shed_utilization: f64,
    pub berth_utilization: f64,
    pub shed_queue_max: usize,
    pub shed_queue_mean: f64,
    pub berth_queue_max: usize,
    pub berth_queue_mean: f64,
    pub shed_wait_mean: f64,
    pub shed_wait_p90: f64,
    pub shed_throughput_per_hour: f64,
    pub berth_throughput_per_hour: f64,
    pub boarded_per_hour: f64,
    pub time_in_system_mean: f64,
    pub time_in_system_p90: f64,
    pub shed_bottleneck: bool,
    pub berth_bottleneck: bool,
}

impl ReplicationOutput {
    pub fn uk_found(&self) -> u64 {
        self.shed_found + self.berth_found
    }
}

/// Replication outputs for one grid cell plus the cross-replication
/// summaries used in reports and comparisons.
#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub mode: super::Mode,
    pub tg: Rat,
    pub cg: Rat,
    pub sg: Rat,
    pub seed: u64,
    pub reps: Vec<ReplicationOutput>,
    pub uk_found: Summary,
    pub missed: Summary,
    pub french_found: Summary,
    pub shed_found: Summary,
    pub berth_found: Summary,
}

impl ScenarioResult {
    /// Standard error of the mean UK-found estimate.
    pub fn uk_found_se(&self) -> f64 {
        self.uk_found.sd / (self.uk_found.n as f64).sqrt()
    }

    /// One CSV row per replication.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for r in &self.reps {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.4},{:.4},{},{:.3},{},{:.3},{:.3},{:.3},{:.2},{:.2},{},{}\n",
                self.mode.label(),
                to_f64(self.tg),
                to_f64(self.cg),
                to_f64(self.sg),
                r.replication,
                r.french_found,
                r.shed_found,
                r.berth_found,
                r.uk_found(),
                r.missed,
                r.jumped_total,
                r.jumped_positive,
                r.positives_disposed,
                r.in_flight,
                r.shed_utilization,
                r.berth_utilization,
                r.shed_queue_max,
                r.shed_queue_mean,
                r.berth_queue_max,
                r.berth_queue_mean,
                r.shed_wait_mean,
                r.shed_wait_p90,
                r.time_in_system_mean,
                r.time_in_system_p90,
                r.shed_bottleneck as u8,
                r.berth_bottleneck as u8,
            ));
        }
        out
    }

    pub fn csv_header() -> &'static str {
        "mode,tg,cg,sg,replication,french_found,shed_found,berth_found,uk_found,missed,\
         jumped_total,jumped_positive,positives_disposed,in_flight,shed_utilization,\
         berth_utilization,shed_queue_max,shed_queue_mean,berth_queue_max,berth_queue_mean,\
         shed_wait_mean,shed_wait_p90,time_in_system_mean,time_in_system_p90,\
         shed_bottleneck,berth_bottleneck"
    }
}

fn percentile(samples: &mut [f64], q: f64) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    samples[((samples.len() - 1) as f64 * q).round() as usize]
}

fn run_replication(
    cfg: &SimModelConfig,
    streams: &StreamSet,
    replication: u64,
) -> Result<ReplicationOutput, ModelError> {
    let mut model = CalaisFlow::new(cfg.clone(), streams, replication);
    let stats =
        run_until(&mut model, cfg.horizon).map_err(|e| ModelError::Calibration(e.to_string()))?;
    let c = model.counters;

    // positive-lorry conservation, checked on every replication
    debug_assert_eq!(
        c.french_found + c.shed_found + c.berth_found + c.missed,
        c.positives_disposed
    );
    if c.french_found + c.shed_found + c.berth_found + c.missed != c.positives_disposed {
        return Err(ModelError::Calibration(
            "positive-lorry conservation violated".into(),
        ));
    }
    debug_assert_eq!(stats.outcome(OUTCOME_MISSED), c.missed);

    let stations = stats.stations();
    let shed = &stations[0];
    let shed_id = stats.station_id(0);
    let berth_id = stats.station_id(1);
    let mut waits = shed.waiting.clone();
    let wait_mean = if waits.is_empty() {
        0.0
    } else {
        waits.iter().sum::<f64>() / waits.len() as f64
    };
    let wait_p90 = percentile(&mut waits, 0.9);
    let mut tis = stats.time_in_system.clone();
    let tis_mean = if tis.is_empty() {
        0.0
    } else {
        tis.iter().sum::<f64>() / tis.len() as f64
    };
    let tis_p90 = percentile(&mut tis, 0.9);

    Ok(ReplicationOutput {
        replication,
        french_found: c.french_found,
        shed_found: c.shed_found,
        berth_found: c.berth_found,
        missed: c.missed,
        jumped_total: c.jumped_total,
        jumped_positive: c.jumped_positive,
        selected: c.selected,
        positives_created: c.positives_created,
        positives_disposed: c.positives_disposed,
        created: stats.created,
        disposed: stats.disposed,
        in_flight: stats.in_flight,
        shed_utilization: stats.utilization(shed_id),
        berth_utilization: stats.utilization(berth_id),
        shed_queue_max: stations[0].queue_max,
        shed_queue_mean: stats.mean_queue_len(shed_id),
        berth_queue_max: stations[1].queue_max,
        berth_queue_mean: stats.mean_queue_len(berth_id),
        shed_wait_mean: wait_mean,
        shed_wait_p90: wait_p90,
        shed_throughput_per_hour: stats.throughput_per_hour(shed_id),
        berth_throughput_per_hour: stats.throughput_per_hour(berth_id),
        boarded_per_hour: (stats.disposed as f64) / (cfg.horizon / 60.0),
        time_in_system_mean: tis_mean,
        time_in_system_p90: tis_p90,
        shed_bottleneck: stats.is_bottleneck(shed_id),
        berth_bottleneck: stats.is_bottleneck(berth_id),
    })
}

/// Run one cell: `replications` independently seeded runs, merged in
/// replication order so concurrency never changes the output.
pub fn run_scenario(
    cfg: &SimModelConfig,
    replications: usize,
    seed: u64,
) -> Result<ScenarioResult, ModelError> {
    if replications < 2 {
        return Err(ModelError::Calibration(format!(
            "need at least 2 replications, got {replications}"
        )));
    }
    let streams = StreamSet::new(seed);
    let reps: Result<Vec<ReplicationOutput>, ModelError> = (0..replications as u64)
        .into_par_iter()
        .map(|rep| run_replication(cfg, &streams, rep))
        .collect();
    let reps = reps?;

    let series = |f: &dyn Fn(&ReplicationOutput) -> f64| -> Vec<f64> {
        reps.iter().map(|r| f(r)).collect()
    };
    let summary = |v: Vec<f64>| summarize(&v).map_err(|e| ModelError::Calibration(e.to_string()));

    Ok(ScenarioResult {
        mode: cfg.mode,
        tg: cfg.tg,
        cg: cfg.cg,
        sg: cfg.sg,
        seed,
        uk_found: summary(series(&|r| r.uk_found() as f64))?,
        missed: summary(series(&|r| r.missed as f64))?,
        french_found: summary(series(&|r| r.french_found as f64))?,
        shed_found: summary(series(&|r| r.shed_found as f64))?,
        berth_found: summary(series(&|r| r.berth_found as f64))?,
        reps,
    })
}

/// Results over a set of grid cells, one `ScenarioResult` each.
#[derive(Debug, Clone)]
pub struct GridResult {
    pub mode: super::Mode,
    pub cells: Vec<ScenarioResult>,
}

impl GridResult {
    /// Mean UK-found matrix over the (TG, SG) grid at one CG level.
    pub fn found_matrix(&self, cg: Rat) -> Option<SimMatrix> {
        let mut tg_levels: Vec<Rat> = Vec::new();
        let mut sg_options: Vec<Rat> = Vec::new();
        for c in self.cells.iter().filter(|c| c.cg == cg) {
            if !tg_levels.contains(&c.tg) {
                tg_levels.push(c.tg);
            }
            if !sg_options.contains(&c.sg) {
                sg_options.push(c.sg);
            }
        }
        if tg_levels.is_empty() {
            return None;
        }
        let mut cells = vec![vec![0.0; sg_options.len()]; tg_levels.len()];
        for c in self.cells.iter().filter(|c| c.cg == cg) {
            let i = tg_levels.iter().position(|t| *t == c.tg)?;
            let j = sg_options.iter().position(|s| *s == c.sg)?;
            cells[i][j] = c.uk_found.mean;
        }
        Some(SimMatrix {
            tg_levels,
            sg_options,
            cells,
        })
    }

    /// Mean missed counts for the cost report, one entry per cell.
    pub fn missed_by_cell(&self) -> Vec<(Rat, Rat, Rat, f64)> {
        self.cells
            .iter()
            .map(|c| (c.tg, c.cg, c.sg, c.missed.mean))
            .collect()
    }

    pub fn csv(&self) -> String {
        let mut out = String::from(ScenarioResult::csv_header());
        out.push('\n');
        for c in &self.cells {
            out.push_str(&c.csv_rows());
        }
        out
    }
}

/// Run a list of (TG, CG, SG) cells under one mode and seed. Cells share
/// replication streams, giving common random numbers across the grid.
pub fn run_grid(
    cfg_for_cell: impl Fn(Rat, Rat, Rat) -> Result<SimModelConfig, ModelError> + Sync,
    cells: &[(Rat, Rat, Rat)],
    replications: usize,
    seed: u64,
) -> Result<GridResult, ModelError> {
    let results: Result<Vec<ScenarioResult>, ModelError> = cells
        .par_iter()
        .map(|&(tg, cg, sg)| {
            let cfg = cfg_for_cell(tg, cg, sg)?;
            run_scenario(&cfg, replications, seed)
        })
        .collect();
    let cells = results?;
    let mode = cells.first().map(|c| c.mode).unwrap_or(super::Mode::Mc);
    Ok(GridResult { mode, cells })
}
