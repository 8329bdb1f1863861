//! Quasihomogeneous and invertible polynomials: exponent matrices, weight
//! systems, Milnor numbers, atomic decomposition, and transposition.

pub mod basis;
mod blocks;
mod parse;

pub use basis::{graded_dimensions, milnor_basis};
pub use blocks::{AtomicBlock, BlockKind};

use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::arith::phase::{lcm_u64, Rational};
use crate::arith::{matrix, Cyclotomic};
use crate::error::{LgError, Result};

/// Integer weights `w_i` with a common quasidegree `d`: every monomial
/// `x^k` of the owning polynomial satisfies `Σ k_i·w_i = d`. Stored with
/// `gcd(w_1, …, w_m, d) = 1` and `0 < w_i < d`. A zero-variable system
/// (`w` empty) is legal and has `d = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    w: Vec<u64>,
    d: u64,
}

impl WeightSystem {
    pub fn new(w: Vec<u64>, d: u64) -> Self {
        assert!(d >= 1);
        let mut g = d;
        for &wi in &w {
            assert!(0 < wi && wi < d, "weight {} outside (0, {})", wi, d);
            g = g.gcd(&wi);
        }
        if w.is_empty() {
            return WeightSystem { w, d: 1 };
        }
        WeightSystem { w: w.iter().map(|&wi| wi / g).collect(), d: d / g }
    }

    pub fn vars(&self) -> usize {
        self.w.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.w
    }

    pub fn degree(&self) -> u64 {
        self.d
    }

    /// The rational weights `q_i = w_i/d`.
    pub fn q(&self) -> Vec<Rational> {
        self.w
            .iter()
            .map(|&wi| BigRational::new(BigInt::from(wi), BigInt::from(self.d)))
            .collect()
    }

    /// Milnor number by the Milnor–Orlik product `Π_i (d − w_i)/w_i`;
    /// the zero-variable system gives 1 (empty product). The product is a
    /// positive integer whenever the owning polynomial has an isolated
    /// critical point; a non-integer signals a violated precondition.
    pub fn milnor_number(&self) -> Result<BigInt> {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for &wi in &self.w {
            num *= BigInt::from(self.d - wi);
            den *= BigInt::from(wi);
        }
        let (quot, rem) = num.div_rem(&den);
        if !rem.is_zero() {
            return Err(LgError::NonIntegerMilnorNumber(format!(
                "(w; d) = ({:?}; {})",
                self.w, self.d
            )));
        }
        Ok(quot)
    }
}

/// A monomial `coefficient · Π x_i^{k_i}` with a nonzero cyclotomic
/// coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub exponents: Vec<u64>,
    pub coefficient: Cyclotomic,
}

/// A quasihomogeneous polynomial in `m` variables with cyclotomic
/// coefficients; `m = 0` (no monomials, no variables) denotes the function
/// of zero variables.
#[derive(Clone, Debug)]
pub struct QhPolynomial {
    var_names: Vec<String>,
    monomials: Vec<Monomial>,
    weights: WeightSystem,
}

impl QhPolynomial {
    pub fn new(
        var_names: Vec<String>,
        monomials: Vec<Monomial>,
        weights: WeightSystem,
    ) -> Result<Self> {
        assert_eq!(var_names.len(), weights.vars());
        let mut seen = std::collections::BTreeSet::new();
        for mono in &monomials {
            assert_eq!(mono.exponents.len(), var_names.len());
            assert!(!mono.coefficient.is_zero(), "zero coefficient stored");
            assert!(seen.insert(mono.exponents.clone()), "duplicate exponent vector");
            let total: u64 = mono
                .exponents
                .iter()
                .zip(weights.weights())
                .map(|(&k, &w)| k * w)
                .sum();
            if total != weights.degree() {
                return Err(LgError::Parse(format!(
                    "monomial {:?} is not quasihomogeneous for (w; d) = ({:?}; {})",
                    mono.exponents,
                    weights.weights(),
                    weights.degree()
                )));
            }
        }
        Ok(QhPolynomial { var_names, monomials, weights })
    }

    /// The function of zero variables.
    pub fn zero_variables() -> Self {
        QhPolynomial {
            var_names: Vec::new(),
            monomials: Vec::new(),
            weights: WeightSystem::new(Vec::new(), 1),
        }
    }

    pub fn vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn milnor_number(&self) -> Result<BigInt> {
        self.weights.milnor_number()
    }
}

impl fmt::Display for QhPolynomial {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(fmt, "0");
        }
        let mut first = true;
        for mono in &self.monomials {
            if !first {
                write!(fmt, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            if let Some(r) = mono.coefficient.as_rational() {
                if !r.is_one() {
                    factors.push(crate::arith::phase::rational_string(&r));
                }
            } else {
                factors.push(format!("({})", mono.coefficient));
            }
            for (j, &e) in mono.exponents.iter().enumerate() {
                if e == 1 {
                    factors.push(self.var_names[j].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.var_names[j], e));
                }
            }
            if factors.is_empty() {
                factors.push("1".to_string());
            }
            write!(fmt, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// An invertible polynomial: `n` monomials in `n` variables, all
/// coefficients 1, invertible exponent matrix `E` (row i = monomial i),
/// together with its weight system and atomic decomposition.
#[derive(Clone, Debug)]
pub struct InvertiblePolynomial {
    var_names: Vec<String>,
    matrix: Vec<Vec<u64>>,
    inverse: Vec<Vec<Rational>>,
    det: BigInt,
    weights: WeightSystem,
    blocks: Vec<AtomicBlock>,
}

impl InvertiblePolynomial {
    /// Parses an expression (optionally with a declared variable order) and
    /// validates it.
    pub fn parse(expr: &str, declared: Option<&[String]>) -> Result<Self> {
        let raw = parse::parse_expression(expr)?;
        let (names, rows) = parse::resolve_variables(&raw, declared)?;
        Self::from_exponent_matrix(rows, names)
    }

    /// Validates an exponent matrix: square, invertible, atomic, with
    /// weights in (0, 1).
    pub fn from_exponent_matrix(matrix: Vec<Vec<u64>>, var_names: Vec<String>) -> Result<Self> {
        let monomials = matrix.len();
        let variables = var_names.len();
        if monomials != variables || matrix.iter().any(|r| r.len() != variables) {
            return Err(LgError::NotSquare { monomials, variables });
        }
        let big: Vec<Vec<BigInt>> = matrix
            .iter()
            .map(|row| row.iter().map(|&e| BigInt::from(e)).collect())
            .collect();
        let det = matrix::determinant(&big);
        if det.is_zero() {
            return Err(LgError::SingularMatrix);
        }
        let blocks = blocks::decompose(&matrix)?;
        let ones = vec![Rational::one(); variables];
        let q = matrix::solve(&big, &ones).expect("nonzero determinant");
        if q.iter().any(|qi| !(qi > &Rational::zero() && qi < &Rational::one())) {
            let shown: Vec<String> =
                q.iter().map(crate::arith::phase::rational_string).collect();
            return Err(LgError::NonPositiveWeights(format!("q = [{}]", shown.join(", "))));
        }
        let d = q
            .iter()
            .map(|qi| qi.denom().to_u64().expect("small denominator"))
            .fold(1u64, lcm_u64);
        let w: Vec<u64> = q
            .iter()
            .map(|qi| {
                (qi * BigRational::from_integer(BigInt::from(d)))
                    .to_integer()
                    .to_u64()
                    .expect("small weight")
            })
            .collect();
        let weights = WeightSystem::new(w, d);
        let inverse = matrix::inverse(&big).expect("nonzero determinant");
        let block_det: BigInt = blocks.iter().map(|b| b.determinant()).product();
        debug_assert_eq!(block_det, det.abs(), "block determinants disagree with det E");
        Ok(InvertiblePolynomial { var_names, matrix, inverse, det, weights, blocks })
    }

    pub fn vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    /// Exponent matrix: row i holds the exponents of monomial i.
    pub fn exponent_matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    /// Exact inverse of the exponent matrix.
    pub fn matrix_inverse(&self) -> &[Vec<Rational>] {
        &self.inverse
    }

    pub fn determinant(&self) -> &BigInt {
        &self.det
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn blocks(&self) -> &[AtomicBlock] {
        &self.blocks
    }

    pub fn milnor_number(&self) -> Result<BigInt> {
        self.weights.milnor_number()
    }

    /// The underlying polynomial with unit coefficients.
    pub fn base(&self) -> QhPolynomial {
        let monomials = self
            .matrix
            .iter()
            .map(|row| Monomial { exponents: row.clone(), coefficient: Cyclotomic::one() })
            .collect();
        QhPolynomial::new(self.var_names.clone(), monomials, self.weights.clone())
            .expect("validated polynomial is quasihomogeneous")
    }

    /// The transpose polynomial, with exponent matrix `E^T` and the same
    /// variable names.
    ///
    /// Fails when the transposed matrix is not itself a valid invertible
    /// polynomial: the transpose of a chain reverses its exponent
    /// sequence, so a chain with leading exponent 1 — accepted on the
    /// primal side — transposes to a chain with final exponent 1, which
    /// carries a monomial of degree one and is regular at the origin.
    pub fn transpose(&self) -> Result<Self> {
        let n = self.vars();
        let transposed: Vec<Vec<u64>> =
            (0..n).map(|i| (0..n).map(|j| self.matrix[j][i]).collect()).collect();
        Self::from_exponent_matrix(transposed, self.var_names.clone())
    }

    /// Expression string in the input grammar.
    pub fn expression(&self) -> String {
        self.base().to_string()
    }
}

impl fmt::Display for InvertiblePolynomial {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fmt, "{}", self.expression())
    }
}

/// Searches for a variable relabeling `π` (f-variable j ↦ g-variable π(j))
/// carrying the monomial set of `f` onto the monomial set of `g`. Returns
/// the relabeling, or `None` if the polynomials are not isomorphic.
pub fn polynomial_isomorphic(
    f: &InvertiblePolynomial,
    g: &InvertiblePolynomial,
) -> Option<Vec<usize>> {
    let n = f.vars();
    if g.vars() != n {
        return None;
    }
    let mut target: Vec<Vec<u64>> = g.exponent_matrix().to_vec();
    target.sort();
    // Prune with per-variable profiles: the multiset of exponents a variable
    // takes across monomials is invariant under relabeling.
    let profile = |m: &[Vec<u64>], j: usize| {
        let mut p: Vec<u64> = m.iter().map(|row| row[j]).collect();
        p.sort();
        p
    };
    let f_profiles: Vec<Vec<u64>> = (0..n).map(|j| profile(f.exponent_matrix(), j)).collect();
    let g_profiles: Vec<Vec<u64>> = (0..n).map(|j| profile(g.exponent_matrix(), j)).collect();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn search(
        j: usize,
        n: usize,
        f: &InvertiblePolynomial,
        target: &[Vec<u64>],
        f_profiles: &[Vec<u64>],
        g_profiles: &[Vec<u64>],
        perm: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        if j == n {
            let mut image: Vec<Vec<u64>> = f
                .exponent_matrix()
                .iter()
                .map(|row| {
                    let mut out = vec![0u64; n];
                    for (jj, &e) in row.iter().enumerate() {
                        out[perm[jj]] = e;
                    }
                    out
                })
                .collect();
            image.sort();
            return image == target;
        }
        for cand in 0..n {
            if used[cand] || f_profiles[j] != g_profiles[cand] {
                continue;
            }
            used[cand] = true;
            perm[j] = cand;
            if search(j + 1, n, f, target, f_profiles, g_profiles, perm, used) {
                return true;
            }
            used[cand] = false;
        }
        false
    }
    if search(0, n, f, &target, &f_profiles, &g_profiles, &mut perm, &mut used) {
        Some(perm)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn loop_polynomial_weights_and_milnor() {
        let f = InvertiblePolynomial::parse("x1^3*x2 + x2^5*x3 + x3^3*x4 + x4^5*x1", None)
            .unwrap();
        assert_eq!(f.weights().weights(), &[2, 1, 2, 1]);
        assert_eq!(f.weights().degree(), 7);
        assert_eq!(f.determinant(), &BigInt::from(224));
        assert_eq!(f.milnor_number().unwrap(), BigInt::from(225));
        assert_eq!(f.blocks()[0].kind, BlockKind::Loop);
        assert_eq!(f.blocks()[0].exponents, vec![3, 5, 3, 5]);
    }

    #[test]
    fn fermat_and_chain_weights() {
        let fermat = InvertiblePolynomial::parse("x^4", None).unwrap();
        assert_eq!(fermat.weights().weights(), &[1]);
        assert_eq!(fermat.weights().degree(), 4);
        assert_eq!(fermat.milnor_number().unwrap(), BigInt::from(3));

        let chain = InvertiblePolynomial::parse("x1^3*x2 + x2^4", None).unwrap();
        assert_eq!(chain.weights().weights(), &[1, 1]);
        assert_eq!(chain.weights().degree(), 4);
        assert_eq!(chain.milnor_number().unwrap(), BigInt::from(9));
    }

    #[test]
    fn weight_system_reduces_gcd() {
        let ws = WeightSystem::new(vec![2, 4], 6);
        assert_eq!(ws.weights(), &[1, 2]);
        assert_eq!(ws.degree(), 3);
        // x^2: w = 1, d = 2.
        let f = InvertiblePolynomial::parse("x^2", None).unwrap();
        assert_eq!(f.weights().weights(), &[1]);
        assert_eq!(f.weights().degree(), 2);
    }

    #[test]
    fn milnor_number_of_restricted_weights() {
        // Two-class weights (2, 1) with degree 7.
        let ws = WeightSystem::new(vec![2, 1], 7);
        assert_eq!(ws.milnor_number().unwrap(), BigInt::from(15));
        // Zero variables: empty product.
        let empty = WeightSystem::new(Vec::new(), 1);
        assert_eq!(empty.milnor_number().unwrap(), BigInt::one());
        // A non-integer product trips the error.
        let bad = WeightSystem::new(vec![3, 5], 7);
        assert!(matches!(bad.milnor_number(), Err(LgError::NonIntegerMilnorNumber(_))));
    }

    #[test]
    fn validation_error_order() {
        assert!(matches!(
            InvertiblePolynomial::parse("x1^2 + x2^2 + x1*x2", None),
            Err(LgError::NotSquare { monomials: 3, variables: 2 })
        ));
        assert!(matches!(
            InvertiblePolynomial::parse("x1*x2 + x2*x1", None),
            Err(LgError::SingularMatrix)
        ));
        assert!(matches!(
            InvertiblePolynomial::parse("x1^2*x2^2 + x2^3", None),
            Err(LgError::NotAtomicShape)
        ));
        assert!(matches!(
            InvertiblePolynomial::parse("x1*x2 + x2^3*x1", None),
            Err(LgError::DegenerateType(_))
        ));
        assert!(matches!(
            InvertiblePolynomial::parse("x^1", None),
            Err(LgError::DegenerateType(_))
        ));
    }

    #[test]
    fn hidden_chain_is_accepted() {
        // x1^2 + x1*x2 = x2·x1 + x1^2, a chain with exponents (1, 2).
        let f = InvertiblePolynomial::parse("x1^2 + x1*x2", None).unwrap();
        assert_eq!(f.blocks()[0].kind, BlockKind::Chain);
        assert_eq!(f.blocks()[0].exponents, vec![1, 2]);
        assert_eq!(f.weights().weights(), &[1, 1]);
        assert_eq!(f.weights().degree(), 2);
    }

    #[test]
    fn transpose_involution_and_isomorphism() {
        let f = InvertiblePolynomial::parse("x1^3*x2 + x2^5*x3 + x3^3*x4 + x4^5*x1", None)
            .unwrap();
        let ft = f.transpose().unwrap();
        assert_eq!(ft.blocks()[0].kind, BlockKind::Loop);
        // Transposing reverses loop orientation: type (3,5,3,5) again here
        // because the sequence is rotation-symmetric under reversal.
        assert_eq!(ft.blocks()[0].exponents, vec![3, 5, 3, 5]);
        assert_eq!(ft.transpose().unwrap().exponent_matrix(), f.exponent_matrix());
        assert!(polynomial_isomorphic(&f, &ft).is_some());

        let chain = InvertiblePolynomial::parse("x1^3*x2 + x2^4", None).unwrap();
        let chain_t = chain.transpose().unwrap();
        // E^T rows: x1^3 and x1 x2^4 — the chain read in reverse order.
        assert_eq!(chain_t.exponent_matrix(), &[vec![3, 0], vec![1, 4]]);
        assert_eq!(chain_t.blocks()[0].kind, BlockKind::Chain);
        assert_eq!(chain_t.blocks()[0].vars, vec![1, 0]);
        assert_eq!(chain_t.blocks()[0].exponents, vec![4, 3]);

        let fermats = InvertiblePolynomial::parse("x1^3 + x2^5", None).unwrap();
        assert_eq!(
            fermats.transpose().unwrap().exponent_matrix(),
            fermats.exponent_matrix()
        );

        // A chain with leading exponent 1 is accepted, but its transpose
        // ends in exponent 1 and is regular at the origin.
        let oneside = InvertiblePolynomial::parse("x1*x2 + x2^2", None).unwrap();
        assert!(matches!(
            oneside.transpose(),
            Err(LgError::DegenerateType(_))
        ));
    }

    #[test]
    fn isomorphism_respects_structure() {
        let f = InvertiblePolynomial::parse("x1^3 + x2^5", None).unwrap();
        let g = InvertiblePolynomial::parse("x1^5 + x2^3", None).unwrap();
        assert_eq!(polynomial_isomorphic(&f, &g), Some(vec![1, 0]));
        let h = InvertiblePolynomial::parse("x1^3 + x2^4", None).unwrap();
        assert!(polynomial_isomorphic(&f, &h).is_none());
    }

    #[test]
    fn display_round_trips() {
        let f = InvertiblePolynomial::parse("x1^3*x2 + x2^5*x3 + x3^3*x4 + x4^5*x1", None)
            .unwrap();
        // Factors print in variable-index order within each monomial.
        assert_eq!(f.expression(), "x1^3*x2 + x2^5*x3 + x3^3*x4 + x1*x4^5");
        let again = InvertiblePolynomial::parse(&f.expression(), None).unwrap();
        assert_eq!(again.exponent_matrix(), f.exponent_matrix());
    }

    #[test]
    fn block_determinants_multiply_to_det() {
        for expr in [
            "x1^3*x2 + x2^5*x3 + x3^3*x4 + x4^5*x1",
            "x1^2*x2 + x2^2*x1 + x3^4 + x4^3*x5 + x5^2",
            "x1^4 + x2^4 + x3^4 + x4^4",
        ] {
            let f = InvertiblePolynomial::parse(expr, None).unwrap();
            let product: BigInt = f.blocks().iter().map(|b| b.determinant()).product();
            assert_eq!(product, f.determinant().abs());
        }
    }
}
