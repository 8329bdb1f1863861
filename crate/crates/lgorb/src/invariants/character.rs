//! Graded trace of a finite-order diagonalizable symmetry on the space of
//! top forms of an isolated quasihomogeneous singularity.

use num::Zero;

use crate::arith::cyclotomic::{CycloPoly, UnitRootSum};
use crate::arith::phase::{Phase, Rational};
use crate::error::{LgError, Result};
use crate::polynomial::QhPolynomial;

/// Multiplies a dense series (index = weighted degree) by `1 − e[root]·t^shift`.
fn mul_one_minus(series: &[UnitRootSum], root: &Phase, shift: usize) -> Vec<UnitRootSum> {
    assert!(shift >= 1);
    let mut out = vec![UnitRootSum::zero(); series.len() + shift];
    for (i, c) in series.iter().enumerate() {
        out[i].add_assign(c);
        let shifted = c.mul_root(root).neg();
        out[i + shift].add_assign(&shifted);
    }
    out
}

/// Dense coefficient list (index = weighted degree) of the graded trace of a
/// symmetry on the top-form module of `fg`, given the symmetry's eigenvalue /
/// coordinate-weight pairs.  See [`equivariant_omega_character`].
pub(crate) fn character_series(
    fg: &QhPolynomial,
    eigenvalues: &[(Phase, u64)],
) -> Result<Vec<UnitRootSum>> {
    let ws = fg.weights();
    let m = ws.vars();
    if eigenvalues.len() != m {
        return Err(LgError::IncompatibleLengths(format!(
            "{} eigenvalues for a polynomial in {} variables",
            eigenvalues.len(),
            m
        )));
    }
    let d = ws.degree();
    {
        let mut got: Vec<u64> = eigenvalues.iter().map(|(_, w)| *w).collect();
        let mut want = ws.weights().to_vec();
        got.sort_unstable();
        want.sort_unstable();
        if got != want {
            return Err(LgError::IncompatibleLengths(format!(
                "eigenvalue weights {:?} do not match the weight system {:?}",
                got, want
            )));
        }
    }

    let sum_w: u64 = ws.weights().iter().sum();
    let top = (m as u64) * d - sum_w; // top weighted degree of a form

    // Numerator (Π ē) · t^{Σw} · Π (1 − e·t^{d−w}); the global prefactor is
    // folded into the leading coefficient chain.
    let mut num = vec![UnitRootSum::zero(); sum_w as usize + 1];
    let mut prefactor = Phase::zero();
    for (e, _) in eigenvalues {
        prefactor = prefactor.add(&e.neg());
    }
    *num.last_mut().unwrap() = UnitRootSum::root(&prefactor);
    for (e, w) in eigenvalues {
        num = mul_one_minus(&num, e, (d - w) as usize);
    }

    // Denominator Π (1 − ē·t^{w}); constant term 1.
    let mut den = vec![UnitRootSum::one()];
    for (e, w) in eigenvalues {
        den = mul_one_minus(&den, &e.neg(), *w as usize);
    }

    // Exact series division up to the top form degree.
    let mut quo: Vec<UnitRootSum> = Vec::with_capacity(top as usize + 1);
    for k in 0..=top as usize {
        let mut c = num.get(k).cloned().unwrap_or_else(UnitRootSum::zero);
        for j in 1..den.len().min(k + 1) {
            c = c.sub(&den[j].mul(&quo[k - j]));
        }
        quo.push(c);
    }

    // The quotient is only meaningful if it is exact: re-multiply and compare
    // against the numerator in every degree.
    let mut check = vec![UnitRootSum::zero(); quo.len() + den.len() - 1];
    for (i, qc) in quo.iter().enumerate() {
        for (j, dc) in den.iter().enumerate() {
            check[i + j].add_assign(&qc.mul(dc));
        }
    }
    debug_assert_eq!(check.len(), num.len());
    for k in 0..check.len().max(num.len()) {
        let lhs = check.get(k).cloned().unwrap_or_else(UnitRootSum::zero);
        let rhs = num.get(k).cloned().unwrap_or_else(UnitRootSum::zero);
        if !lhs.sub(&rhs).is_zero() {
            return Err(LgError::NonPolynomialCharacter(format!(
                "graded trace of a symmetry of {} is not a polynomial \
                 (first failure at weighted degree {})",
                fg, k
            )));
        }
    }
    Ok(quo)
}

/// Graded trace `T(t)` of a finite-order symmetry `c` on the module of top
/// forms `Ω = Ω^m / df ∧ Ω^{m−1}` of an isolated quasihomogeneous `fg`, from
/// the eigenvalue/weight pairs `(e, w)` of `c` on the coordinates:
///
/// `T(t) = (Π ē) · t^{Σw} · Π (1 − e·t^{d−w}) / Π (1 − ē·t^{w})`.
///
/// The quotient is expanded by exact series division up to the top form
/// degree `m·d − Σw` and verified by re-multiplication, so inconsistent
/// eigen-data (a trace that is not polynomial) aborts with
/// [`LgError::NonPolynomialCharacter`] instead of silently truncating.
///
/// The value `T(1)` is the trace of `c` on `Ω`; for `c` the identity the
/// result is the Poincaré series of `Ω` and `T(1)` is the Milnor number.
pub fn equivariant_omega_character(
    fg: &QhPolynomial,
    eigenvalues: &[(Phase, u64)],
) -> Result<CycloPoly> {
    let series = character_series(fg, eigenvalues)?;
    Ok(CycloPoly::from_unit_root_sums(&series))
}

/// Convenience: the coefficient sum of the character as an exact rational,
/// when it is rational (it always is for averages over a full centralizer).
pub fn character_trace(series: &CycloPoly) -> Option<Rational> {
    let mut total = crate::arith::Cyclotomic::zero();
    for (_, c) in series.iter() {
        total = total.add(c);
    }
    if total.is_zero() {
        return Some(Rational::zero());
    }
    total.as_rational()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::InvertiblePolynomial;

    fn poly(src: &str) -> QhPolynomial {
        InvertiblePolynomial::parse(src, None).unwrap().base()
    }

    #[test]
    fn identity_trace_is_poincare_series() {
        // x^3: forms x^k dx have degrees 1, 2.
        let f = poly("x^3");
        let t = equivariant_omega_character(&f, &[(Phase::zero(), 1)]).unwrap();
        assert_eq!(t.degrees(), vec![1, 2]);
        assert_eq!(t.coefficient(1).as_integer().unwrap(), 1.into());
        assert_eq!(t.coefficient(2).as_integer().unwrap(), 1.into());
    }

    #[test]
    fn sign_flip_on_quadratic() {
        // x^2 with x ↦ −x: the single form dx has trace −1 at degree 1.
        let f = poly("x^2");
        let t = equivariant_omega_character(&f, &[(Phase::from_frac(1, 2), 1)]).unwrap();
        assert_eq!(t.degrees(), vec![1]);
        assert_eq!(t.coefficient(1).as_integer().unwrap(), (-1).into());
    }

    #[test]
    fn loop_involution_character() {
        // 2-variable loop x^3 y + y^5 x with both coordinates negated: basis
        // forms x^{k1} y^{k2} dx dy pick up (−1)^{k1+k2}, giving
        // t^3 − t^4 + t^7 − t^10 + t^11.
        let f = poly("x^3*y + y^5*x");
        let eig = [(Phase::from_frac(1, 2), 2), (Phase::from_frac(1, 2), 1)];
        let t = equivariant_omega_character(&f, &eig).unwrap();
        assert_eq!(t.degrees(), vec![3, 4, 7, 10, 11]);
        let expect = [(3u64, 1i64), (4, -1), (7, 1), (10, -1), (11, 1)];
        for (deg, c) in expect {
            assert_eq!(t.coefficient(deg).as_integer().unwrap(), c.into());
        }
        assert_eq!(character_trace(&t).unwrap(), Rational::from_integer(1.into()));
    }

    #[test]
    fn non_polynomial_trace_is_rejected() {
        // x^3 paired with the eigenvalue −1 is not a symmetry of x^3; the
        // formal quotient −t(1+t^2)/(1+t) is not a polynomial.
        let f = poly("x^3");
        let err = equivariant_omega_character(&f, &[(Phase::from_frac(1, 2), 1)]).unwrap_err();
        assert!(matches!(err, LgError::NonPolynomialCharacter(_)));
    }

    #[test]
    fn zero_variable_character_is_one() {
        let f = QhPolynomial::zero_variables();
        let t = equivariant_omega_character(&f, &[]).unwrap();
        assert_eq!(t.degrees(), vec![0]);
        assert_eq!(t.coefficient(0).as_integer().unwrap(), 1.into());
    }
}
