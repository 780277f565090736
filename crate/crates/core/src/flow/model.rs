//! Event-level implementation of the screening flow.
//!
//! Every lorry draws its full decision vector (side, positivity, French
//! screening, shed selection and detection, berth suspicion and detection)
//! from the routing stream at arrival, in a fixed order. Outcomes across
//! scenario cells and modes therefore share common random numbers; timing
//! and congestion are the only things the service stream can move.

use simkit::{
    next_arrival, BoundedQueue, EventCalendar, Minutes, Model, SimError, SimResult, StationId,
    StatsCollector, Stream, StreamSet,
};

use super::{Mode, SimModelConfig};

const PURPOSE_ARRIVALS: u64 = 0;
const PURPOSE_ROUTING: u64 = 1;
const PURPOSE_SERVICE: u64 = 2;

pub(crate) const OUTCOME_FRENCH: &str = "french-found";
pub(crate) const OUTCOME_SHED: &str = "shed-found";
pub(crate) const OUTCOME_BERTH: &str = "berth-found";
pub(crate) const OUTCOME_MISSED: &str = "missed-boarded";
pub(crate) const OUTCOME_CLEARED: &str = "cleared";

#[derive(Debug)]
pub(crate) enum Ev {
    Arrival,
    FrenchDone(u32),
    ShedDone(u32),
    FerryDeparture,
}

#[derive(Debug, Clone)]
struct Lorry {
    arrival: Minutes,
    positive: bool,
    french_found: bool,
    u_shed_sel: f64,
    u_shed_det: f64,
    u_berth_sus: f64,
    u_berth_det: f64,
    svc_shed: f64,
    svc_berth: f64,
    shed_enqueued_at: Minutes,
    searched_at_shed: bool,
    jumped: bool,
}

/// Slab of in-flight lorries; disposed slots are recycled.
#[derive(Default)]
struct Fleet {
    slots: Vec<Option<Lorry>>,
    free: Vec<u32>,
}

impl Fleet {
    fn insert(&mut self, lorry: Lorry) -> u32 {
        if let Some(id) = self.free.pop() {
            self.slots[id as usize] = Some(lorry);
            id
        } else {
            self.slots.push(Some(lorry));
            (self.slots.len() - 1) as u32
        }
    }

    fn get(&self, id: u32) -> &Lorry {
        self.slots[id as usize].as_ref().expect("live lorry")
    }

    fn get_mut(&mut self, id: u32) -> &mut Lorry {
        self.slots[id as usize].as_mut().expect("live lorry")
    }

    fn remove(&mut self, id: u32) -> Lorry {
        let lorry = self.slots[id as usize].take().expect("live lorry");
        self.free.push(id);
        lorry
    }
}

/// Per-replication outcome counters kept outside the generic collector.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Counters {
    pub positives_created: u64,
    pub positives_disposed: u64,
    pub french_found: u64,
    pub shed_found: u64,
    pub berth_found: u64,
    pub missed: u64,
    pub cleared: u64,
    pub selected: u64,
    pub jumped_total: u64,
    pub jumped_positive: u64,
}

pub(crate) struct CalaisFlow {
    cfg: SimModelConfig,
    arrivals: Stream,
    routing: Stream,
    service: Stream,
    fleet: Fleet,
    shed_queue: BoundedQueue<u32>,
    shed_busy: usize,
    berth_suspicious: Vec<u32>,
    stats: StatsCollector,
    shed_station: StationId,
    berth_station: StationId,
    pub(crate) counters: Counters,
}

impl CalaisFlow {
    pub(crate) fn new(cfg: SimModelConfig, streams: &StreamSet, replication: u64) -> Self {
        let mut stats = StatsCollector::new(cfg.horizon);
        let shed_station = stats.register_station("UK shed search", cfg.shed_servers);
        let berth_station = stats.register_station("berth mobile units", cfg.mobile_units);
        Self {
            shed_queue: BoundedQueue::new(cfg.shed_queue_capacity),
            arrivals: streams.stream(replication, PURPOSE_ARRIVALS),
            routing: streams.stream(replication, PURPOSE_ROUTING),
            service: streams.stream(replication, PURPOSE_SERVICE),
            fleet: Fleet::default(),
            shed_busy: 0,
            berth_suspicious: Vec::new(),
            stats,
            shed_station,
            berth_station,
            counters: Counters::default(),
            cfg,
        }
    }

    fn schedule_next_arrival(&mut self, cal: &mut EventCalendar<Ev>) -> SimResult<()> {
        let t = match &self.cfg.weekly_profile {
            Some(profile) => next_arrival(profile, cal.clock(), &mut self.arrivals),
            None => {
                let rate = self.cfg.arrival_rate_per_min();
                let u = self.arrivals.uniform();
                cal.clock() + (-(1.0 - u).ln() / rate)
            }
        };
        if t <= self.cfg.arrival_window {
            cal.schedule_at(t, Ev::Arrival)?;
        }
        Ok(())
    }

    fn dispose(&mut self, id: u32, outcome: &'static str, now: Minutes) {
        let lorry = self.fleet.remove(id);
        if lorry.positive {
            self.counters.positives_disposed += 1;
            match outcome {
                OUTCOME_FRENCH => self.counters.french_found += 1,
                OUTCOME_SHED => self.counters.shed_found += 1,
                OUTCOME_BERTH => self.counters.berth_found += 1,
                OUTCOME_MISSED => self.counters.missed += 1,
                _ => unreachable!("positive lorry with outcome {outcome}"),
            }
        } else {
            self.counters.cleared += 1;
        }
        self.stats.dispose(outcome, Some(now - lorry.arrival));
    }

    fn on_arrival(&mut self, cal: &mut EventCalendar<Ev>) -> SimResult<()> {
        let now = cal.clock();
        self.schedule_next_arrival(cal)?;

        // fixed-size decision vector: consume eight uniforms whatever the path
        let u_side = self.routing.uniform();
        let u_pos = self.routing.uniform();
        let u_fr_suspect = self.routing.uniform();
        let u_fr_confirm = self.routing.uniform();
        let u_shed_sel = self.routing.uniform();
        let u_shed_det = self.routing.uniform();
        let u_berth_sus = self.routing.uniform();
        let u_berth_det = self.routing.uniform();

        // and a fixed-size service vector, so timing draws stay aligned
        // lorry-for-lorry across modes and scenario cells
        let svc = &self.cfg.service;
        let svc_pmmw = svc.pmmw.sample(&mut self.service);
        let svc_hb = svc.hb.sample(&mut self.service);
        let svc_co2 = svc.co2.sample(&mut self.service);
        let svc_open = svc.open.sample(&mut self.service);
        let svc_shed = svc.shed_search.sample(&mut self.service);
        let svc_berth = svc.berth_search.sample(&mut self.service);

        let positive = u_pos < self.cfg.positive_probability();
        let soft = u_side < self.cfg.soft_share;
        self.stats.entity_created();
        if positive {
            self.counters.positives_created += 1;
        }

        // French control: sensors carry the miss rates, opening always finds.
        let mut delay;
        let mut french_found = false;
        if soft {
            delay = svc_pmmw;
            if positive {
                let suspect = u_fr_suspect < self.cfg.p_french / self.cfg.co2_confirm;
                if suspect {
                    delay += svc_co2;
                    if u_fr_confirm < self.cfg.co2_confirm {
                        delay += svc_open;
                        french_found = true;
                    }
                }
            }
        } else {
            delay = svc_hb;
            if positive && u_fr_suspect < self.cfg.p_french {
                delay += svc_open;
                french_found = true;
            }
        }

        let id = self.fleet.insert(Lorry {
            arrival: now,
            positive,
            french_found,
            u_shed_sel,
            u_shed_det,
            u_berth_sus,
            u_berth_det,
            svc_shed,
            svc_berth,
            shed_enqueued_at: 0.0,
            searched_at_shed: false,
            jumped: false,
        });
        cal.schedule_at(now + delay, Ev::FrenchDone(id))
    }

    fn on_french_done(&mut self, id: u32, cal: &mut EventCalendar<Ev>) -> SimResult<()> {
        let now = cal.clock();
        if self.fleet.get(id).french_found {
            self.dispose(id, OUTCOME_FRENCH, now);
            return Ok(());
        }
        // ticket purchase and UK passport control add no service time; the
        // shed selection decides the lorry's next stop
        let lorry = self.fleet.get(id);
        let q = if lorry.positive {
            self.cfg.q_shed_pos
        } else {
            self.cfg.q_shed_neg
        };
        if lorry.u_shed_sel < q {
            self.counters.selected += 1;
            if self.shed_queue.try_enqueue(id, now).is_ok() {
                self.fleet.get_mut(id).shed_enqueued_at = now;
                self.stats
                    .queue_changed(self.shed_station, self.shed_queue.len(), now);
                self.try_start_shed(cal)?;
            } else {
                // shed yard full: queue jumping, straight to the berth
                let positive = {
                    let l = self.fleet.get_mut(id);
                    l.jumped = true;
                    l.positive
                };
                self.counters.jumped_total += 1;
                if positive {
                    self.counters.jumped_positive += 1;
                }
                self.to_berth(id, cal)?;
            }
        } else {
            self.to_berth(id, cal)?;
        }
        Ok(())
    }

    fn try_start_shed(&mut self, cal: &mut EventCalendar<Ev>) -> SimResult<()> {
        let now = cal.clock();
        while self.shed_busy < self.cfg.shed_servers {
            let Some(id) = self.shed_queue.dequeue(now) else {
                break;
            };
            self.stats
                .queue_changed(self.shed_station, self.shed_queue.len(), now);
            let lorry = self.fleet.get(id);
            let wait = now - lorry.shed_enqueued_at;
            let t = lorry.svc_shed;
            self.stats.record_wait(self.shed_station, wait);
            self.stats.seize(self.shed_station, now);
            self.shed_busy += 1;
            cal.schedule_at(now + t, Ev::ShedDone(id))?;
        }
        Ok(())
    }

    fn on_shed_done(&mut self, id: u32, cal: &mut EventCalendar<Ev>) -> SimResult<()> {
        let now = cal.clock();
        self.stats.release(self.shed_station, now);
        self.shed_busy -= 1;
        let found = {
            let l = self.fleet.get_mut(id);
            l.searched_at_shed = true;
            l.positive && l.u_shed_det < self.cfg.d_shed
        };
        if found {
            self.dispose(id, OUTCOME_SHED, now);
        } else {
            self.to_berth(id, cal)?;
        }
        self.try_start_shed(cal)
    }

    fn to_berth(&mut self, id: u32, cal: &mut EventCalendar<Ev>) -> SimResult<()> {
        let now = cal.clock();
        let lorry = self.fleet.get(id);
        let suspicious = if lorry.positive {
            lorry.u_berth_sus < self.cfg.q_berth_pos
        } else {
            lorry.u_berth_sus < self.cfg.q_berth_neg
        };

        if self.cfg.mode == Mode::Mc {
            // time-free mode: berth detection is a pure probability draw
            let found = suspicious && lorry.positive && lorry.u_berth_det < self.cfg.d_berth;
            let outcome = if found {
                OUTCOME_BERTH
            } else if lorry.positive {
                OUTCOME_MISSED
            } else {
                OUTCOME_CLEARED
            };
            self.dispose(id, outcome, now);
            return Ok(());
        }

        if suspicious {
            self.berth_suspicious.push(id);
            self.stats
                .queue_changed(self.berth_station, self.berth_suspicious.len(), now);
        } else {
            // parks and boards the next ferry unsearched
            let cycle = self.cfg.ferry_cycle;
            let board_at = (now / cycle).floor() * cycle + cycle;
            if board_at <= self.cfg.horizon {
                let outcome = if lorry.positive {
                    OUTCOME_MISSED
                } else {
                    OUTCOME_CLEARED
                };
                self.dispose(id, outcome, board_at);
            }
            // otherwise the lorry is still parked at year end: in-flight
        }
        Ok(())
    }

    /// Ferry departure: the mobile units have worked the suspicious parked
    /// lorries for one cycle. Searches start while unit time remains (a
    /// search under way when the ferry arrives completes first), everyone
    /// else boards unsearched.
    fn on_ferry_departure(&mut self, cal: &mut EventCalendar<Ev>) -> SimResult<()> {
        let now = cal.clock();
        let mut budget = self.cfg.mobile_units as f64 * self.cfg.ferry_cycle;
        let mut busy = 0.0;
        let mut searched = 0u64;
        let waiting = std::mem::take(&mut self.berth_suspicious);
        for id in waiting {
            if budget > 0.0 {
                let t = self.fleet.get(id).svc_berth;
                budget -= t;
                busy += t;
                searched += 1;
                let lorry = self.fleet.get(id);
                let found = lorry.positive && lorry.u_berth_det < self.cfg.d_berth;
                let outcome = if found {
                    OUTCOME_BERTH
                } else if lorry.positive {
                    OUTCOME_MISSED
                } else {
                    OUTCOME_CLEARED
                };
                self.dispose(id, outcome, now);
            } else {
                let positive = self.fleet.get(id).positive;
                let outcome = if positive {
                    OUTCOME_MISSED
                } else {
                    OUTCOME_CLEARED
                };
                self.dispose(id, outcome, now);
            }
        }
        self.stats
            .add_busy_time(self.berth_station, busy.min(self.cfg.mobile_units as f64 * self.cfg.ferry_cycle));
        self.stats.add_completed(self.berth_station, searched);
        self.stats.queue_changed(self.berth_station, 0, now);

        let next = now + self.cfg.ferry_cycle;
        if next <= self.cfg.horizon {
            cal.schedule_at(next, Ev::FerryDeparture)?;
        }
        Ok(())
    }
}

impl Model for CalaisFlow {
    type Event = Ev;

    fn init(&mut self, cal: &mut EventCalendar<Ev>) -> SimResult<()> {
        if self.cfg.horizon <= 0.0 {
            return Err(SimError::InvalidParameter("horizon must be positive".into()));
        }
        self.schedule_next_arrival(cal)?;
        if self.cfg.mode != Mode::Mc {
            cal.schedule_at(self.cfg.ferry_cycle.min(self.cfg.horizon), Ev::FerryDeparture)?;
        }
        Ok(())
    }

    fn handle(&mut self, event: Ev, cal: &mut EventCalendar<Ev>) -> SimResult<()> {
        match event {
            Ev::Arrival => self.on_arrival(cal),
            Ev::FrenchDone(id) => self.on_french_done(id, cal),
            Ev::ShedDone(id) => self.on_shed_done(id, cal),
            Ev::FerryDeparture => self.on_ferry_departure(cal),
        }
    }

    fn finish(&mut self, clock: Minutes) -> StatsCollector {
        let mut stats = std::mem::take(&mut self.stats);
        stats.finalize(clock);
        stats
    }
}
