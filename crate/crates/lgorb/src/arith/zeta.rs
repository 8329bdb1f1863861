//! Finite products of cyclotomic-twisted factors `(1 - e[a]·t^m)^c`.
//!
//! A [`ZetaProduct`] is the exact factored form of a monodromy zeta function:
//! a finite map from `(m, a)` to a nonzero integer exponent `c`. Multiplying
//! products adds exponents; `twist(b)` substitutes `t -> e[-b]·t`... more
//! precisely it maps each factor `(1 - e[a]·t^m)` to `(1 - e[a - m·b]·t^m)`,
//! which is the substitution `t -> e[-b]·t`. The `degree` (sum of `c·m`)
//! equals the Euler characteristic the zeta function computes, and is
//! invariant under twists.
//!
//! Two products can denote the same rational function with different factor
//! maps, e.g. `(1-t^3)/(1-t)` versus `(1-e[1/3]t)(1-e[2/3]t)`. Comparisons of
//! mathematical equality therefore go through [`ZetaProduct::linearized`],
//! which expands every factor into linear factors `(1 - e[r]·t)` over the
//! m-th roots of `e[a]`.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::arith::phase::Phase;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZetaProduct {
    factors: BTreeMap<(u64, Phase), i64>,
}

impl ZetaProduct {
    /// The empty product, i.e. the constant function 1.
    pub fn one() -> Self {
        ZetaProduct { factors: BTreeMap::new() }
    }

    /// A single factor `(1 - e[a]·t^m)^c`.
    pub fn factor(m: u64, a: Phase, c: i64) -> Self {
        assert!(m >= 1);
        let mut factors = BTreeMap::new();
        if c != 0 {
            factors.insert((m, a), c);
        }
        ZetaProduct { factors }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&(u64, Phase), &i64)> {
        self.factors.iter()
    }

    pub fn mul_factor(&mut self, m: u64, a: Phase, c: i64) {
        assert!(m >= 1);
        if c == 0 {
            return;
        }
        let key = (m, a);
        let entry = self.factors.entry(key.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.factors.remove(&key);
        }
    }

    pub fn mul(&self, other: &ZetaProduct) -> ZetaProduct {
        let mut out = self.clone();
        for ((m, a), c) in &other.factors {
            out.mul_factor(*m, a.clone(), *c);
        }
        out
    }

    pub fn inv(&self) -> ZetaProduct {
        ZetaProduct {
            factors: self.factors.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    /// Raises to an integer power (0 gives the empty product).
    pub fn pow(&self, k: i64) -> ZetaProduct {
        if k == 0 {
            return ZetaProduct::one();
        }
        ZetaProduct {
            factors: self.factors.iter().map(|(key, c)| (key.clone(), c * k)).collect(),
        }
    }

    /// The substitution `t -> e[-b]·t`: each factor `(m, a)` becomes
    /// `(m, a - m·b)`.
    pub fn twist(&self, b: &Phase) -> ZetaProduct {
        let mut out = ZetaProduct::one();
        for ((m, a), c) in &self.factors {
            out.mul_factor(*m, a.sub(&b.scale_u64(*m)), *c);
        }
        out
    }

    /// Sum of `c·m`; the Euler characteristic computed by this zeta function.
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|((m, _), c)| (*m as i64) * c).sum()
    }

    /// Expands every factor into linear factors: `(1 - e[a]·t^m)` has roots
    /// at the m-th roots of `e[a]`, so it splits as the product over
    /// `k = 0..m` of `(1 - e[(a+k)/m]·t)`. Linear factor maps are canonical,
    /// so mathematical equality of products is equality of these maps.
    pub fn linearized(&self) -> BTreeMap<Phase, i64> {
        let mut out: BTreeMap<Phase, i64> = BTreeMap::new();
        for ((m, a), c) in &self.factors {
            for k in 0..*m {
                let r = Phase::new(
                    (a.value() + num::BigRational::from_integer(num::BigInt::from(k)))
                        / num::BigRational::from_integer(num::BigInt::from(*m)),
                );
                *out.entry(r).or_insert(0) += c;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// Equality as rational functions (via linear factorizations).
    pub fn same_function(&self, other: &ZetaProduct) -> bool {
        self.linearized() == other.linearized()
    }

    /// Sorted list of records `{"m":…, "phase":"p/q", "exp":…}`.
    pub fn to_json(&self) -> Value {
        let items: Vec<Value> = self
            .factors
            .iter()
            .map(|((m, a), c)| {
                json!({"m": m, "phase": a.to_string(), "exp": c})
            })
            .collect();
        Value::Array(items)
    }
}

impl fmt::Display for ZetaProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for ((m, a), c) in &self.factors {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            let base = if a.is_zero() {
                if *m == 1 {
                    "(1 - t)".to_string()
                } else {
                    format!("(1 - t^{m})")
                }
            } else if *m == 1 {
                format!("(1 - e[{a}]t)")
            } else {
                format!("(1 - e[{a}]t^{m})")
            };
            if *c == 1 {
                write!(f, "{base}")?;
            } else {
                write!(f, "{base}^{c}")?;
            }
        }
        Ok(())
    }
}
