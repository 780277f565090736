//! Future-event calendar and the event-scheduling run loop.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::SimError;
use crate::stats::StatsCollector;
use crate::SimResult;

/// Simulated time in minutes.
pub type Minutes = f64;

struct Scheduled<E> {
    time: Minutes,
    seq: u64,
    payload: E,
}

impl<E> PartialEq for Scheduled<E> {
    fn eq(&self, other: &Self) -> bool {
        self.seq == other.seq
    }
}
impl<E> Eq for Scheduled<E> {}

impl<E> Ord for Scheduled<E> {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (time, insertion sequence): ties dispatch in insertion order
        other
            .time
            .partial_cmp(&self.time)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}
impl<E> PartialOrd for Scheduled<E> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Pending events ordered by (timestamp, insertion sequence). The clock never
/// moves backwards; scheduling before the current clock is a fatal error.
pub struct EventCalendar<E> {
    heap: BinaryHeap<Scheduled<E>>,
    clock: Minutes,
    next_seq: u64,
    executed: u64,
}

impl<E> Default for EventCalendar<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<E> EventCalendar<E> {
    pub fn new() -> Self {
        Self {
            heap: BinaryHeap::new(),
            clock: 0.0,
            next_seq: 0,
            executed: 0,
        }
    }

    pub fn clock(&self) -> Minutes {
        self.clock
    }

    pub fn executed(&self) -> u64 {
        self.executed
    }

    pub fn pending(&self) -> usize {
        self.heap.len()
    }

    pub fn schedule_at(&mut self, time: Minutes, payload: E) -> SimResult<()> {
        if time < self.clock {
            return Err(SimError::EventInPast {
                requested: time,
                clock: self.clock,
            });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Scheduled { time, seq, payload });
        Ok(())
    }

    pub fn schedule_in(&mut self, delay: Minutes, payload: E) -> SimResult<()> {
        self.schedule_at(self.clock + delay, payload)
    }

    fn pop_due(&mut self, end_time: Minutes) -> Option<(Minutes, E)> {
        match self.heap.peek() {
            Some(ev) if ev.time <= end_time => {
                let ev = self.heap.pop().expect("peeked");
                self.clock = ev.time;
                self.executed += 1;
                Some((ev.time, ev.payload))
            }
            _ => None,
        }
    }
}

/// A simulation model driven by the event-scheduling loop.
pub trait Model {
    type Event;

    /// Schedule the initial events (first arrivals, first ferry departure...).
    fn init(&mut self, cal: &mut EventCalendar<Self::Event>) -> SimResult<()>;

    /// Execute one event at the calendar's current clock.
    fn handle(&mut self, event: Self::Event, cal: &mut EventCalendar<Self::Event>)
        -> SimResult<()>;

    /// Close the run and hand over the collected statistics. Entities still
    /// in the system count as in-flight, not disposed.
    fn finish(&mut self, clock: Minutes) -> StatsCollector;
}

/// Run `model` until the calendar is exhausted or the next event lies beyond
/// `end_time`. Events exactly at `end_time` still execute.
pub fn run_until<M: Model>(model: &mut M, end_time: Minutes) -> SimResult<StatsCollector> {
    if end_time <= 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "end_time must be positive, got {end_time}"
        )));
    }
    let mut cal = EventCalendar::new();
    model.init(&mut cal)?;
    while let Some((_, ev)) = cal.pop_due(end_time) {
        model.handle(ev, &mut cal)?;
    }
    let mut stats = model.finish(end_time);
    stats.events_executed = cal.executed();
    Ok(stats)
}
