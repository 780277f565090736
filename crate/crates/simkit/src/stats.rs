//! Run statistics: per-station utilization, throughput and waiting times,
//! queue occupancy, entity accounting and time-in-system samples.

use std::collections::BTreeMap;

use crate::Minutes;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StationId(usize);

#[derive(Debug, Clone, Default)]
pub struct StationStats {
    pub name: String,
    pub servers: usize,
    busy_now: usize,
    busy_area: f64,
    last_busy_change: Minutes,
    pub completed: u64,
    pub waiting: Vec<f64>,
    pub queue_max: usize,
    queue_len: usize,
    queue_area: f64,
    queue_area_second_half: f64,
    last_queue_change: Minutes,
}

impl StationStats {
    fn integrate_busy(&mut self, now: Minutes) {
        self.busy_area += self.busy_now as f64 * (now - self.last_busy_change);
        self.last_busy_change = now;
    }

    fn integrate_queue(&mut self, now: Minutes, midpoint: Minutes) {
        let from = self.last_queue_change;
        let len = self.queue_len as f64;
        self.queue_area += len * (now - from);
        if now > midpoint {
            self.queue_area_second_half += len * (now - from.max(midpoint));
        }
        self.last_queue_change = now;
    }
}

/// Collected outputs of one simulation run.
#[derive(Debug, Clone, Default)]
pub struct StatsCollector {
    horizon: Minutes,
    stations: Vec<StationStats>,
    pub created: u64,
    pub disposed: u64,
    pub in_flight: u64,
    pub outcome_counts: BTreeMap<String, u64>,
    pub time_in_system: Vec<f64>,
    pub events_executed: u64,
    finalized_at: Minutes,
}

impl StatsCollector {
    pub fn new(horizon: Minutes) -> Self {
        Self {
            horizon,
            ..Default::default()
        }
    }

    pub fn register_station(&mut self, name: &str, servers: usize) -> StationId {
        self.stations.push(StationStats {
            name: name.to_string(),
            servers,
            ..Default::default()
        });
        StationId(self.stations.len() - 1)
    }

    pub fn station(&self, id: StationId) -> &StationStats {
        &self.stations[id.0]
    }

    /// Id of the `index`-th registered station.
    pub fn station_id(&self, index: usize) -> StationId {
        assert!(index < self.stations.len(), "no station at index {index}");
        StationId(index)
    }

    pub fn stations(&self) -> &[StationStats] {
        &self.stations
    }

    pub fn seize(&mut self, id: StationId, now: Minutes) {
        let st = &mut self.stations[id.0];
        st.integrate_busy(now);
        st.busy_now += 1;
        debug_assert!(st.busy_now <= st.servers, "seized more servers than exist");
    }

    pub fn release(&mut self, id: StationId, now: Minutes) {
        let st = &mut self.stations[id.0];
        st.integrate_busy(now);
        st.busy_now -= 1;
        st.completed += 1;
    }

    pub fn record_wait(&mut self, id: StationId, wait: f64) {
        self.stations[id.0].waiting.push(wait);
    }

    /// Credit busy time directly, for stations whose work is accounted in
    /// batches rather than via seize/release pairs.
    pub fn add_busy_time(&mut self, id: StationId, amount: f64) {
        self.stations[id.0].busy_area += amount;
    }

    pub fn add_completed(&mut self, id: StationId, n: u64) {
        self.stations[id.0].completed += n;
    }

    pub fn queue_changed(&mut self, id: StationId, len: usize, now: Minutes) {
        let midpoint = self.horizon / 2.0;
        let st = &mut self.stations[id.0];
        st.integrate_queue(now, midpoint);
        st.queue_len = len;
        st.queue_max = st.queue_max.max(len);
    }

    pub fn entity_created(&mut self) {
        self.created += 1;
    }

    pub fn dispose(&mut self, outcome: &str, time_in_system: Option<f64>) {
        self.disposed += 1;
        *self.outcome_counts.entry(outcome.to_string()).or_insert(0) += 1;
        if let Some(t) = time_in_system {
            self.time_in_system.push(t);
        }
    }

    pub fn finalize(&mut self, now: Minutes) {
        let midpoint = self.horizon / 2.0;
        for st in &mut self.stations {
            st.integrate_busy(now);
            st.integrate_queue(now, midpoint);
        }
        self.in_flight = self.created - self.disposed;
        self.finalized_at = now;
    }

    /// Busy-time fraction of a station's servers over the run, in [0, 1].
    pub fn utilization(&self, id: StationId) -> f64 {
        let st = &self.stations[id.0];
        if st.servers == 0 || self.finalized_at <= 0.0 {
            return 0.0;
        }
        (st.busy_area / (st.servers as f64 * self.finalized_at)).clamp(0.0, 1.0)
    }

    /// Completed services per hour.
    pub fn throughput_per_hour(&self, id: StationId) -> f64 {
        if self.finalized_at <= 0.0 {
            return 0.0;
        }
        self.stations[id.0].completed as f64 / (self.finalized_at / 60.0)
    }

    pub fn mean_queue_len(&self, id: StationId) -> f64 {
        if self.finalized_at <= 0.0 {
            return 0.0;
        }
        self.stations[id.0].queue_area / self.finalized_at
    }

    /// A station whose time-weighted mean queue keeps growing with run
    /// length is flagged: second-half mean well above first-half mean.
    pub fn is_bottleneck(&self, id: StationId) -> bool {
        if self.finalized_at <= 0.0 {
            return false;
        }
        let st = &self.stations[id.0];
        let half = self.finalized_at / 2.0;
        let second = st.queue_area_second_half / half;
        let first = (st.queue_area - st.queue_area_second_half) / half;
        second > 1.5 * first && second > 1.0
    }

    pub fn waiting_quantile(&self, id: StationId, q: f64) -> f64 {
        let mut w = self.stations[id.0].waiting.clone();
        if w.is_empty() {
            return 0.0;
        }
        w.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let idx = ((w.len() - 1) as f64 * q).round() as usize;
        w[idx]
    }

    pub fn outcome(&self, key: &str) -> u64 {
        self.outcome_counts.get(key).copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn utilization_and_throughput() {
        let mut c = StatsCollector::new(100.0);
        let s = c.register_station("shed", 2);
        c.seize(s, 0.0);
        c.release(s, 50.0);
        c.seize(s, 50.0);
        c.seize(s, 50.0);
        c.release(s, 100.0);
        c.release(s, 100.0);
        c.finalize(100.0);
        // busy area = 1*50 + 2*50 = 150 over 2 servers * 100 min
        assert!((c.utilization(s) - 0.75).abs() < 1e-12);
        assert!((c.throughput_per_hour(s) - 3.0 / (100.0 / 60.0)).abs() < 1e-12);
    }

    #[test]
    fn outcome_counts_sum_to_disposed() {
        let mut c = StatsCollector::new(10.0);
        c.entity_created();
        c.entity_created();
        c.entity_created();
        c.dispose("found", Some(1.0));
        c.dispose("missed", None);
        c.finalize(10.0);
        let total: u64 = c.outcome_counts.values().sum();
        assert_eq!(total, c.disposed);
        assert_eq!(c.in_flight, 1);
    }

    #[test]
    fn growing_queue_is_flagged() {
        let mut c = StatsCollector::new(100.0);
        let s = c.register_station("gate", 1);
        for i in 0..100 {
            c.queue_changed(s, i, i as f64);
        }
        c.finalize(100.0);
        assert!(c.is_bottleneck(s));

        let mut c2 = StatsCollector::new(100.0);
        let s2 = c2.register_station("gate", 1);
        c2.queue_changed(s2, 2, 0.0);
        c2.finalize(100.0);
        assert!(!c2.is_bottleneck(s2));
    }
}
