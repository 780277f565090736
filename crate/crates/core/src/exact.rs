//! Exact rational arithmetic for the deterministic pipelines.
//!
//! Growth fractions, probabilities and the money flowing through the
//! scenario-analysis and decision-tree calculations are all ratios of
//! small integers; keeping them rational makes the golden tables exact
//! instead of float-approximate (1/3 is not 0.333).

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rat = Ratio<i128>;

pub fn rat(numer: i128, denom: i128) -> Rat {
    Rat::new(numer, denom)
}

pub fn int(n: i128) -> Rat {
    Rat::from_integer(n)
}

pub fn to_f64(r: Rat) -> f64 {
    r.to_f64().expect("rational fits in f64")
}

/// Round half-to-even at `decimals` fractional digits, returning a rational.
pub fn round_dp(r: Rat, decimals: u32) -> Rat {
    let scale = int(10i128.pow(decimals));
    Rat::new(round_half_even(r * scale), 1) / scale
}

/// Nearest integer, ties to even.
pub fn round_half_even(r: Rat) -> i128 {
    let floor = r.floor().to_integer();
    let frac = r - int(floor);
    let half = rat(1, 2);
    if frac < half {
        floor
    } else if frac > half {
        floor + 1
    } else if floor % 2 == 0 {
        floor
    } else {
        floor + 1
    }
}

/// Render with exactly `decimals` fractional digits (half-even).
pub fn format_dp(r: Rat, decimals: u32) -> String {
    let scale = 10i128.pow(decimals);
    let scaled = round_half_even(r * int(scale));
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.abs();
    if decimals == 0 {
        return format!("{sign}{abs}");
    }
    let whole = abs / scale;
    let frac = abs % scale;
    format!("{sign}{whole}.{frac:0width$}", width = decimals as usize)
}

/// Parse a plain decimal or a `p/q` fraction into an exact rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().ok()?;
        let q: i128 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(rat(p, q));
    }
    let negative = s.starts_with('-');
    let body = s.trim_start_matches(['-', '+']);
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    let whole: i128 = if whole.is_empty() { 0 } else { whole.parse().ok()? };
    let mut value = int(whole);
    if !frac.is_empty() {
        if frac.len() > 24 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: i128 = frac.parse().ok()?;
        value += rat(digits, 10i128.pow(frac.len() as u32));
    }
    Some(if negative { -value } else { value })
}

pub fn is_zero(r: Rat) -> bool {
    r.is_zero()
}

pub fn abs(r: Rat) -> Rat {
    r.abs()
}
