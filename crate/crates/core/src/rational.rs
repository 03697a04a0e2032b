//! Exact rational arithmetic helpers and the `"p/q"` text encoding.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number used throughout the crate.
pub type Rational = BigRational;

/// Builds `num/den` as an exact rational. Panics when `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical text form: `"p/q"` with `q > 0` and `gcd(p, q) = 1`.
///
/// Integers are written with an explicit denominator (`"3/1"`, `"0/1"`).
pub fn format_rational(r: &Rational) -> String {
    // BigRational keeps itself reduced with a positive denominator.
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` (or a bare integer `"p"`). Rejects zero and negative
/// denominators; non-reduced fractions are accepted and reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`: expected \"p/q\""));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if !den.is_positive() {
        return Err(Error::Parse(format!(
            "invalid rational `{s}`: denominator must be positive"
        )));
    }
    Ok(Rational::new(num, den))
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a ratio of f64s for values outside the direct range.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Equispaced grid of `points` values on `[lo, hi]`, endpoints included,
/// duplicates removed. A single point grid is the lower endpoint.
pub fn grid(lo: &Rational, hi: &Rational, points: usize) -> Vec<Rational> {
    assert!(points >= 1, "grid needs at least one point");
    if lo == hi || points == 1 {
        return vec![lo.clone()];
    }
    let steps = int((points - 1) as i64);
    let width = hi - lo;
    (0..points)
        .map(|k| lo + &width * int(k as i64) / &steps)
        .collect()
}

/// A rational extended by `+∞`, used for penalty functions and conjugates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(Rational),
    PosInfinity,
}

impl Extended {
    pub fn zero() -> Self {
        Extended::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(r) => Some(r),
            Extended::PosInfinity => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(Extended::PosInfinity),
            other => parse_rational(other).map(Extended::Finite),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(r) => to_f64(r),
            Extended::PosInfinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(r) => f.write_str(&format_rational(r)),
            Extended::PosInfinity => f.write_str("inf"),
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::PosInfinity) => Less,
            (Extended::PosInfinity, Extended::Finite(_)) => Greater,
            (Extended::PosInfinity, Extended::PosInfinity) => Equal,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_format() {
        assert_eq!(format_rational(&rat(2, 4)), "1/2");
        assert_eq!(format_rational(&rat(-3, 6)), "-1/2");
        assert_eq!(format_rational(&int(3)), "3/1");
        assert_eq!(format_rational(&int(0)), "0/1");
    }

    #[test]
    fn parse_accepts_and_rejects() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("-2/4").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn grid_points() {
        assert_eq!(grid(&rat(1, 2), &int(2), 1), vec![rat(1, 2)]);
        assert_eq!(grid(&rat(1, 2), &int(2), 2), vec![rat(1, 2), int(2)]);
        assert_eq!(grid(&int(1), &int(2), 3), vec![int(1), rat(3, 2), int(2)]);
        assert_eq!(grid(&int(2), &int(2), 3), vec![int(2)]);
    }

    #[test]
    fn extended_order() {
        assert!(Extended::Finite(int(100)) < Extended::PosInfinity);
        assert_eq!(Extended::parse("inf").unwrap(), Extended::PosInfinity);
        assert_eq!(Extended::parse("3/4").unwrap(), Extended::Finite(rat(3, 4)));
        assert_eq!(Extended::PosInfinity.to_string(), "inf");
    }
}
