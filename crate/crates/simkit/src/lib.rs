//! A small discrete-event simulation kernel.
//!
//! The pieces are deliberately independent: a future-event calendar with
//! deterministic tie-breaking, reproducible per-purpose random streams,
//! inverse-CDF variate generation, a non-homogeneous Poisson arrival
//! process, bounded FIFO queues, and output-analysis helpers (replication
//! summaries and a Robinson-style replication-count procedure).

mod arrivals;
mod calendar;
mod dist;
mod error;
mod queue;
mod replication;
mod rng;
mod stats;

pub use arrivals::{next_arrival, WeeklyProfile};
pub use calendar::{run_until, EventCalendar, Minutes, Model};
pub use dist::Distribution;
pub use error::SimError;
pub use queue::{BoundedQueue, UNBOUNDED_CAPACITY};
pub use replication::{replications_needed, summarize, Summary, REPLICATION_FLOOR};
pub use rng::{Stream, StreamSet};
pub use stats::{StationId, StatsCollector};

pub type SimResult<T> = Result<T, SimError>;
