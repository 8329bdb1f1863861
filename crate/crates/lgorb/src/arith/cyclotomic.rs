//! Exact arithmetic in cyclotomic fields.
//!
//! Two cooperating representations:
//!
//! * [`UnitRootSum`] — a formal rational combination of roots of unity
//!   `e[a]`, stored sparsely as phase → coefficient. Addition, scaling and
//!   multiplication (convolution of phases) are cheap; nothing is decided
//!   about vanishing.
//! * [`Cyclotomic`] — the normal form: a conductor `N` together with the
//!   coefficient vector of a polynomial in `zeta_N` reduced modulo the N-th
//!   cyclotomic polynomial `Phi_N`. Zero tests, equality, and integrality
//!   queries are exact here. Mixed conductors rebase to the lcm on demand.
//!
//! `Phi_N` is computed by recursive exact division of `x^N - 1` by the
//! cyclotomic polynomials of the proper divisors of `N`, and memoized.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, One, ToPrimitive, Zero};

use crate::arith::phase::{lcm_u64, rational_string, Phase, Rational};

/// Euler totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Möbius function: `(−1)^k` for squarefree `n` with `k` prime factors,
/// `0` otherwise.
pub fn moebius(mut n: u64) -> i64 {
    assert!(n >= 1);
    let mut sign = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Sorted list of positive divisors.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Exact division of integer polynomials, `dividend / divisor`, both ascending
/// by degree with the divisor monic. Panics if the division is not exact.
fn divide_exact(dividend: &[BigInt], divisor: &[BigInt]) -> Vec<BigInt> {
    assert!(divisor.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let mut rem: Vec<BigInt> = dividend.to_vec();
    let dd = divisor.len() - 1;
    assert!(rem.len() > dd);
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            quot[k] = c.clone();
            for (j, pj) in divisor.iter().enumerate() {
                rem[k + j] -= &c * pj;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "polynomial division was not exact");
    quot
}

/// Coefficients of the N-th cyclotomic polynomial, ascending by degree.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<BigInt>> {
    assert!(n >= 1);
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // Fill in ascending divisor order so every proper divisor is available.
    for d in divisors(n) {
        if cache.lock().unwrap().contains_key(&d) {
            continue;
        }
        // x^d - 1
        let mut poly = vec![BigInt::zero(); (d + 1) as usize];
        poly[0] = BigInt::from(-1);
        poly[d as usize] = BigInt::one();
        let mut quot = poly;
        for e in divisors(d) {
            if e == d {
                continue;
            }
            let phi_e = cache.lock().unwrap().get(&e).unwrap().clone();
            quot = divide_exact(&quot, &phi_e);
        }
        cache.lock().unwrap().insert(d, Arc::new(quot));
    }
    let p = cache.lock().unwrap().get(&n).unwrap().clone();
    p
}

/// Reduces a dense coefficient vector (ascending powers of `zeta_n`) modulo
/// `Phi_n`, returning exactly `euler_phi(n)` coefficients.
fn reduce_mod_phi(mut coeffs: Vec<Rational>, n: u64) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    if coeffs.len() < deg {
        coeffs.resize(deg, Rational::zero());
        return coeffs;
    }
    for k in (deg..coeffs.len()).rev() {
        let c = coeffs[k].clone();
        if c.is_zero() {
            continue;
        }
        coeffs[k] = Rational::zero();
        // x^deg = -sum_{j<deg} phi_j x^j, shifted by k-deg.
        for j in 0..deg {
            if !phi[j].is_zero() {
                let t = &c * Rational::from_integer(phi[j].clone());
                coeffs[k - deg + j] -= t;
            }
        }
    }
    coeffs.truncate(deg);
    coeffs
}

/// A formal rational combination of roots of unity.
///
/// This is the cheap working representation: no canonicalization happens
/// until [`UnitRootSum::normal_form`] is called.
#[derive(Clone, Debug, Default)]
pub struct UnitRootSum {
    terms: BTreeMap<Phase, Rational>,
}

impl UnitRootSum {
    pub fn zero() -> Self {
        UnitRootSum { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        UnitRootSum::root(&Phase::zero())
    }

    /// The single root of unity `e[a]`.
    pub fn root(a: &Phase) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(a.clone(), Rational::one());
        UnitRootSum { terms }
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut s = UnitRootSum::zero();
        s.add_term(&Phase::zero(), &r);
        s
    }

    /// Number of formal terms (not a semantic property).
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Phase, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, a: &Phase, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(a.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(a);
        }
    }

    pub fn add_assign(&mut self, other: &UnitRootSum) {
        for (a, c) in &other.terms {
            self.add_term(a, c);
        }
    }

    pub fn add(&self, other: &UnitRootSum) -> UnitRootSum {
        let mut s = self.clone();
        s.add_assign(other);
        s
    }

    pub fn neg(&self) -> UnitRootSum {
        UnitRootSum { terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &UnitRootSum) -> UnitRootSum {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> UnitRootSum {
        if k.is_zero() {
            return UnitRootSum::zero();
        }
        UnitRootSum { terms: self.terms.iter().map(|(a, c)| (a.clone(), c * k)).collect() }
    }

    /// Multiplication by a single root of unity: shifts every phase.
    pub fn mul_root(&self, a: &Phase) -> UnitRootSum {
        UnitRootSum { terms: self.terms.iter().map(|(b, c)| (b.add(a), c.clone())).collect() }
    }

    /// Full product (convolution of phase supports).
    pub fn mul(&self, other: &UnitRootSum) -> UnitRootSum {
        let mut s = UnitRootSum::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                s.add_term(&a.add(b), &(ca * cb));
            }
        }
        s
    }

    /// Least common multiple of the term denominators (1 for the empty sum).
    pub fn conductor(&self) -> u64 {
        self.terms.keys().fold(1u64, |acc, a| lcm_u64(acc, a.denominator()))
    }

    /// Canonical form; the only sound route to zero/equality/integrality.
    pub fn normal_form(&self) -> Cyclotomic {
        let n = self.conductor();
        let mut dense = vec![Rational::zero(); n as usize];
        for (a, c) in &self.terms {
            let k = a.numerator() * (n / a.denominator());
            dense[k as usize] += c;
        }
        Cyclotomic { conductor: n, coeffs: reduce_mod_phi(dense, n) }
    }

    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        if self.terms.keys().all(|a| a.is_zero()) {
            return self.terms.values().fold(Rational::zero(), |s, c| s + c).is_zero();
        }
        self.normal_form().is_zero()
    }

    /// Exact rational value, if the sum is rational.
    pub fn rational_value(&self) -> Option<Rational> {
        self.normal_form().as_rational()
    }

    /// Floating point evaluation (for cross-checks only).
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (a, c) in &self.terms {
            let t = 2.0 * std::f64::consts::PI * a.to_f64();
            let cf = c.to_f64().expect("coefficient out of f64 range");
            re += cf * t.cos();
            im += cf * t.sin();
        }
        (re, im)
    }
}

impl fmt::Display for UnitRootSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if a.is_zero() {
                write!(f, "{}", rational_string(c))?;
            } else if c.is_one() {
                write!(f, "e[{a}]")?;
            } else {
                write!(f, "{}*e[{a}]", rational_string(c))?;
            }
        }
        Ok(())
    }
}

/// Canonical element of a cyclotomic field: conductor `N` plus the residue of
/// a polynomial in `zeta_N` modulo `Phi_N` (coefficient vector of length
/// `euler_phi(N)`). Values at different conductors compare by rebasing both
/// to the lcm conductor.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Cyclotomic::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![r] }
    }

    pub fn from_integer(n: i64) -> Self {
        Cyclotomic::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn root_of_unity(a: &Phase) -> Self {
        UnitRootSum::root(a).normal_form()
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Coefficients over the power basis `1, zeta, ..., zeta^{phi(N)-1}`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Rewrites over a conductor `m` that is a multiple of the current one.
    pub fn rebase(&self, m: u64) -> Cyclotomic {
        assert_eq!(m % self.conductor, 0, "can only rebase to a multiple conductor");
        if m == self.conductor {
            return self.clone();
        }
        let stride = (m / self.conductor) as usize;
        let mut dense = vec![Rational::zero(); m as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[k * stride] += c;
            }
        }
        Cyclotomic { conductor: m, coeffs: reduce_mod_phi(dense, m) }
    }

    fn on_common_conductor(&self, other: &Cyclotomic) -> (Cyclotomic, Cyclotomic, u64) {
        let m = lcm_u64(self.conductor, other.conductor);
        (self.rebase(m), other.rebase(m), m)
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let (mut a, b, _) = self.on_common_conductor(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b, m) = self.on_common_conductor(other);
        let mut dense = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    dense[i + j] += x * y;
                }
            }
        }
        Cyclotomic { conductor: m, coeffs: reduce_mod_phi(dense, m) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational, if it lies in the prime field. In the power
    /// basis this is exactly "all coefficients above degree 0 vanish".
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        let r = self.as_rational()?;
        if r.denom().is_one() {
            Some(r.numer().clone())
        } else {
            None
        }
    }

    pub fn to_complex_f64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * (k as f64) / (self.conductor as f64);
            let cf = c.to_f64().expect("coefficient out of f64 range");
            re += cf * t.cos();
            im += cf * t.sin();
        }
        (re, im)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.on_common_conductor(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", rational_string(c))?;
            } else if c.is_one() {
                write!(f, "z{}^{}", self.conductor, k)?;
            } else {
                write!(f, "{}*z{}^{}", rational_string(c), self.conductor, k)?;
            }
        }
        Ok(())
    }
}

/// Normal form of a formal combination of roots of unity.
pub fn cyclotomic_normal_form(sum: &UnitRootSum) -> Cyclotomic {
    sum.normal_form()
}

/// A polynomial in one variable with cyclotomic coefficients, stored sparsely
/// by degree. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct CycloPoly {
    coeffs: BTreeMap<u64, Cyclotomic>,
}

impl CycloPoly {
    pub fn zero() -> Self {
        CycloPoly { coeffs: BTreeMap::new() }
    }

    /// Canonicalizes a dense vector of formal sums (index = degree).
    pub fn from_unit_root_sums(v: &[UnitRootSum]) -> Self {
        let mut coeffs = BTreeMap::new();
        for (deg, s) in v.iter().enumerate() {
            let c = s.normal_form();
            if !c.is_zero() {
                coeffs.insert(deg as u64, c);
            }
        }
        CycloPoly { coeffs }
    }

    pub fn set(&mut self, deg: u64, c: Cyclotomic) {
        if c.is_zero() {
            self.coeffs.remove(&deg);
        } else {
            self.coeffs.insert(deg, c);
        }
    }

    pub fn coefficient(&self, deg: u64) -> Cyclotomic {
        self.coeffs.get(&deg).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &Cyclotomic)> {
        self.coeffs.iter()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for CycloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *deg == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*t^{deg}")?;
            }
        }
        Ok(())
    }
}
