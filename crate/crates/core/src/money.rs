//! Money as exact integer pence.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::exact::{int, rat, round_half_even, Rat};

/// An amount of money held as whole pence, so stored values never drift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, Hash)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub fn from_pence(pence: i64) -> Money {
        Money(pence)
    }

    pub fn from_pounds(pounds: i64) -> Money {
        Money(pounds * 100)
    }

    /// Round an exact pound amount to whole pence, half-to-even.
    pub fn from_pounds_rat(pounds: Rat) -> Money {
        Money(round_half_even(pounds * int(100)) as i64)
    }

    pub fn pence(self) -> i64 {
        self.0
    }

    /// Whole pounds, half-to-even on the pence.
    pub fn to_pounds_rounded(self) -> i64 {
        round_half_even(rat(self.0 as i128, 100)) as i64
    }

    pub fn as_pounds_rat(self) -> Rat {
        rat(self.0 as i128, 100)
    }

    /// The paper's tables print whole pounds with thousands separators.
    pub fn display_pounds(self) -> String {
        let pounds = self.to_pounds_rounded();
        let sign = if pounds < 0 { "-" } else { "" };
        let digits = pounds.abs().to_string();
        let mut grouped = String::new();
        for (i, ch) in digits.chars().enumerate() {
            if i > 0 && (digits.len() - i) % 3 == 0 {
                grouped.push(',');
            }
            grouped.push(ch);
        }
        format!("\u{a3}{sign}{grouped}")
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_pounds())
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Mul<i64> for Money {
    type Output = Money;
    fn mul(self, rhs: i64) -> Money {
        Money(self.0 * rhs)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        Money(iter.map(|m| m.0).sum())
    }
}
