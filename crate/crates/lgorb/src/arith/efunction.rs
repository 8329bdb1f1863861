//! Two-variable exponent sums with fractional exponents.
//!
//! An [`EFunction`] is a finite integer combination of terms `t^u * tbar^v`
//! with rational exponents `u`, `v`, tagged with the ambient dimension it was
//! computed for (needed by the associated zeta-function construction). The
//! substitution `t -> t^{-1}` maps a term `(u, v)` to `(-u, v)`.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use serde_json::{json, Value};

use crate::arith::phase::{rational_string, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EFunction {
    ambient_n: usize,
    terms: BTreeMap<(Rational, Rational), i64>,
}

impl EFunction {
    pub fn zero(ambient_n: usize) -> Self {
        EFunction { ambient_n, terms: BTreeMap::new() }
    }

    /// Dimension of the ambient space the invariant was computed on.
    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn add_term(&mut self, u: Rational, v: Rational, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry((u.clone(), v.clone())).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&(u, v));
        }
    }

    pub fn add(&self, other: &EFunction) -> EFunction {
        assert_eq!(self.ambient_n, other.ambient_n, "ambient dimensions differ");
        let mut out = self.clone();
        for ((u, v), c) in &other.terms {
            out.add_term(u.clone(), v.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> EFunction {
        EFunction {
            ambient_n: self.ambient_n,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> EFunction {
        if k == 0 {
            return EFunction::zero(self.ambient_n);
        }
        EFunction {
            ambient_n: self.ambient_n,
            terms: self.terms.iter().map(|(key, c)| (key.clone(), c * k)).collect(),
        }
    }

    /// The substitution `t -> t^{-1}`.
    pub fn invert_t(&self) -> EFunction {
        let mut out = EFunction::zero(self.ambient_n);
        for ((u, v), c) in &self.terms {
            out.add_term(-u.clone(), v.clone(), *c);
        }
        out
    }

    /// Collapses `t = 1`: returns the map `s -> a_s` of coefficients of
    /// `tbar^s` in `E(1, tbar)`.
    pub fn at_t_one(&self) -> BTreeMap<Rational, i64> {
        let mut out: BTreeMap<Rational, i64> = BTreeMap::new();
        for ((_, v), c) in &self.terms {
            *out.entry(v.clone()).or_insert(0) += c;
        }
        out.retain(|_, c| *c != 0);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Rational, Rational), &i64)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, u: &Rational, v: &Rational) -> i64 {
        self.terms.get(&(u.clone(), v.clone())).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients, i.e. the value at `t = tbar = 1`.
    pub fn total(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Sorted list of records `{"t":"p/q", "tbar":"p/q", "coeff":…}`.
    pub fn to_json(&self) -> Value {
        let items: Vec<Value> = self
            .terms
            .iter()
            .map(|((u, v), c)| {
                json!({"t": rational_string(u), "tbar": rational_string(v), "coeff": c})
            })
            .collect();
        Value::Array(items)
    }
}

impl fmt::Display for EFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((u, v), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut pieces: Vec<String> = Vec::new();
            if !u.numer().is_zero() {
                pieces.push(format!("t^({})", rational_string(u)));
            }
            if !v.numer().is_zero() {
                pieces.push(format!("tb^({})", rational_string(v)));
            }
            if pieces.is_empty() {
                write!(f, "{c}")?;
            } else if *c == 1 {
                write!(f, "{}", pieces.join("*"))?;
            } else {
                write!(f, "{}*{}", c, pieces.join("*"))?;
            }
        }
        Ok(())
    }
}
