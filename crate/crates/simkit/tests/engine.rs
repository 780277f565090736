//! Kernel-level behaviour: determinism, analytic sampling bounds, and the
//! arrival process driven through the event calendar.

use simkit::{
    next_arrival, replications_needed, run_until, summarize, Distribution, EventCalendar, Minutes,
    Model, SimResult, StatsCollector, Stream, StreamSet, WeeklyProfile,
};

/// A source that emits Poisson arrivals at a fixed rate and disposes each
/// entity immediately.
struct ArrivalCounter {
    profile: WeeklyProfile,
    stream: Stream,
    stats: StatsCollector,
    horizon: Minutes,
}

enum Ev {
    Arrival,
}

impl Model for ArrivalCounter {
    type Event = Ev;

    fn init(&mut self, cal: &mut EventCalendar<Ev>) -> SimResult<()> {
        let t = next_arrival(&self.profile, 0.0, &mut self.stream);
        cal.schedule_at(t, Ev::Arrival)
    }

    fn handle(&mut self, ev: Ev, cal: &mut EventCalendar<Ev>) -> SimResult<()> {
        match ev {
            Ev::Arrival => {
                self.stats.entity_created();
                self.stats.dispose("arrived", None);
                let t = next_arrival(&self.profile, cal.clock(), &mut self.stream);
                cal.schedule_at(t, Ev::Arrival)
            }
        }
    }

    fn finish(&mut self, clock: Minutes) -> StatsCollector {
        let mut stats = std::mem::take(&mut self.stats);
        stats.finalize(clock.min(self.horizon));
        stats
    }
}

fn run_arrivals(seed: u64, rate_per_hour: f64, horizon: Minutes) -> u64 {
    let mut model = ArrivalCounter {
        profile: WeeklyProfile::constant(rate_per_hour).unwrap(),
        stream: StreamSet::new(seed).stream(0, 0),
        stats: StatsCollector::new(horizon),
        horizon,
    };
    run_until(&mut model, horizon).unwrap().created
}

#[test]
fn poisson_source_has_the_analytic_mean() {
    // rate 1/min over 60 minutes -> 60 expected arrivals
    let n = 400;
    let total: u64 = (0..n).map(|seed| run_arrivals(seed, 60.0, 60.0)).sum();
    let mean = total as f64 / n as f64;
    // 3 sigma bound on the mean of n Poisson(60) draws
    let bound = 3.0 * (60.0f64 / n as f64).sqrt();
    assert!(
        (mean - 60.0).abs() < bound,
        "mean {mean} outside 60 +- {bound}"
    );
}

#[test]
fn same_seed_is_bit_identical() {
    for seed in [1u64, 42, 987654321] {
        let a = run_arrivals(seed, 60.0, 10_000.0);
        let b = run_arrivals(seed, 60.0, 10_000.0);
        let c = run_arrivals(seed, 60.0, 10_000.0);
        assert_eq!(a, b);
        assert_eq!(b, c);
    }
}

#[test]
fn exponential_sample_mean_within_analytic_bound() {
    let d = Distribution::Exponential { mean: 10.0 };
    let mut s = StreamSet::new(5).stream(0, 0);
    let n = 10_000;
    let mean: f64 = (0..n).map(|_| d.sample(&mut s)).sum::<f64>() / n as f64;
    // sd of the mean is 10/sqrt(n) = 0.1; spec allows +-0.5
    assert!((mean - 10.0).abs() < 0.5, "mean {mean}");
}

#[test]
fn triangular_sample_mean_within_analytic_bound() {
    let d = Distribution::Triangular {
        min: 0.0,
        mode: 1.0,
        max: 2.0,
    };
    let mut s = StreamSet::new(6).stream(0, 0);
    let n = 10_000;
    let mean: f64 = (0..n).map(|_| d.sample(&mut s)).sum::<f64>() / n as f64;
    // analytic mean (0+1+2)/3 = 1, sd of the mean ~ sqrt(1/6)/100
    assert!((mean - 1.0).abs() < 0.05, "mean {mean}");
}

#[test]
fn weekly_arrival_totals_match_profile_rates() {
    // uneven profile: quiet nights, two daily peaks
    let mut rates = Vec::with_capacity(168);
    for _day in 0..7 {
        for hour in 0..24 {
            let r = match hour {
                0..=5 | 22..=23 => 24.0,
                6..=9 | 16..=19 => 120.0,
                _ => 60.0,
            };
            rates.push(r);
        }
    }
    let profile = WeeklyProfile::new(rates).unwrap();
    let weeks = 52.0;
    let horizon = weeks * 7.0 * 24.0 * 60.0;
    let mut model = ArrivalCounter {
        profile: profile.clone(),
        stream: StreamSet::new(777).stream(0, 0),
        stats: StatsCollector::new(horizon),
        horizon,
    };
    let got = run_until(&mut model, horizon).unwrap().created as f64;
    let expected = profile.weekly_total() * weeks;
    let bound = 3.0 * expected.sqrt();
    assert!(
        (got - expected).abs() < bound,
        "got {got}, expected {expected} +- {bound}"
    );
}

#[test]
fn constant_profile_interarrivals_are_exponential() {
    // mean inter-arrival of a 60/hour profile is 1 minute
    let profile = WeeklyProfile::constant(60.0).unwrap();
    let mut s = StreamSet::new(8).stream(0, 0);
    let mut t = 0.0;
    let n = 20_000;
    let mut gaps = Vec::with_capacity(n);
    for _ in 0..n {
        let next = next_arrival(&profile, t, &mut s);
        gaps.push(next - t);
        t = next;
    }
    let mean = gaps.iter().sum::<f64>() / n as f64;
    assert!((mean - 1.0).abs() < 0.03, "mean gap {mean}");
}

#[test]
fn half_width_shrinks_with_sample_size() {
    // on synthetic i.i.d. data the CI half-width goes roughly as 1/sqrt(n)
    let d = Distribution::Uniform01;
    let mut s = StreamSet::new(9).stream(0, 0);
    let draws: Vec<f64> = (0..4000).map(|_| d.sample(&mut s)).collect();
    let hw_small = summarize(&draws[..250]).unwrap().half_width;
    let hw_large = summarize(&draws).unwrap().half_width;
    let ratio = hw_small / hw_large;
    // expected ratio 4 (sqrt(16)); allow generous noise
    assert!((2.5..6.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn replication_procedure_uses_the_floor_and_the_pilot() {
    // low-variance pilot: floor applies
    assert_eq!(
        replications_needed(&[150.0, 150.1, 149.9, 150.0, 150.0], 0.95, 5.0).unwrap(),
        5
    );
    // noisy pilot needs more than the floor
    let noisy = [80.0, 120.0, 95.0, 110.0, 90.0];
    assert!(replications_needed(&noisy, 0.95, 5.0).unwrap() > 5);
}
