//! Exact rationals and phases.
//!
//! A [`Phase`] is a rational number taken modulo 1, kept in `[0, 1)`. It
//! stands for the root of unity `e[a] = exp(2*pi*i*a)`; addition of phases is
//! multiplication of the roots they denote. Phases are `Ord + Hash`, so they
//! serve as map keys throughout.

use std::fmt;

use num::bigint::Sign;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::error::{LgError, Result};

/// Arbitrary-precision rational, reduced, with positive denominator.
pub type Rational = BigRational;

/// Small-integer rational constructor.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || LgError::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Renders `p/q`, or just `p` for integers.
pub fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A rational residue modulo 1, representing the root of unity `e[value]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phase {
    value: Rational,
}

impl Phase {
    /// Reduces an arbitrary rational modulo 1 into `[0, 1)`.
    pub fn new(r: Rational) -> Phase {
        let f = r.floor();
        Phase { value: r - f }
    }

    pub fn zero() -> Phase {
        Phase { value: Rational::zero() }
    }

    pub fn from_frac(num: i64, den: i64) -> Phase {
        Phase::new(rat(num, den))
    }

    pub fn parse(s: &str) -> Result<Phase> {
        Ok(Phase::new(parse_rational(s)?))
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn add(&self, other: &Phase) -> Phase {
        Phase::new(&self.value + &other.value)
    }

    pub fn sub(&self, other: &Phase) -> Phase {
        Phase::new(&self.value - &other.value)
    }

    pub fn neg(&self) -> Phase {
        Phase::new(-&self.value)
    }

    /// `k * self` modulo 1.
    pub fn scale(&self, k: &BigInt) -> Phase {
        Phase::new(&self.value * Rational::from_integer(k.clone()))
    }

    pub fn scale_u64(&self, k: u64) -> Phase {
        self.scale(&BigInt::from(k))
    }

    /// Reduced denominator; this is also the multiplicative order of `e[self]`.
    pub fn denominator(&self) -> u64 {
        self.value
            .denom()
            .to_u64()
            .expect("phase denominator exceeds u64 range")
    }

    /// Numerator over the reduced denominator (in `[0, denominator)`).
    pub fn numerator(&self) -> u64 {
        debug_assert_ne!(self.value.numer().sign(), Sign::Minus);
        self.value
            .numer()
            .to_u64()
            .expect("phase numerator exceeds u64 range")
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().expect("phase out of f64 range")
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rational_string(&self.value))
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({self})")
    }
}

/// Least common multiple of two positive integers.
pub fn lcm_u64(a: u64, b: u64) -> u64 {
    num::integer::lcm(a, b)
}
