//! Elements `(λ, σ)` of the semidirect product of a diagonal group by a
//! permutation group, acting by `((λ,σ)x)_i = e[λ_i] x_{σ^{-1}(i)}`, with
//! their eigenvalue data and age.

use std::fmt;

use num::Zero;

use crate::arith::{rat, Phase, Rational};

use super::diagonal::DiagonalElement;
use super::permutation::Permutation;

/// A monomial linear map `(λ, σ)`.  The product follows the action above:
/// `(λ,σ)(μ,τ) = (λ·(σ⋅μ), στ)` with `(σ⋅μ)_i = μ_{σ^{-1}(i)}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialElement {
    lambda: DiagonalElement,
    sigma: Permutation,
}

/// Sortable identity of an element, usable as a map key.
pub type ElementKey = (Vec<Phase>, Vec<usize>);

impl MonomialElement {
    pub fn new(lambda: DiagonalElement, sigma: Permutation) -> Self {
        assert_eq!(lambda.n(), sigma.n(), "phase vector and permutation sizes differ");
        MonomialElement { lambda, sigma }
    }

    pub fn identity(n: usize) -> Self {
        MonomialElement {
            lambda: DiagonalElement::identity(n),
            sigma: Permutation::identity(n),
        }
    }

    pub fn from_diagonal(lambda: DiagonalElement) -> Self {
        let n = lambda.n();
        MonomialElement { lambda, sigma: Permutation::identity(n) }
    }

    pub fn from_permutation(sigma: Permutation) -> Self {
        let n = sigma.n();
        MonomialElement { lambda: DiagonalElement::identity(n), sigma }
    }

    pub fn n(&self) -> usize {
        self.lambda.n()
    }

    pub fn lambda(&self) -> &DiagonalElement {
        &self.lambda
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn is_identity(&self) -> bool {
        self.lambda.is_identity() && self.sigma.is_identity()
    }

    pub fn key(&self) -> ElementKey {
        (self.lambda.phases().to_vec(), self.sigma.images().to_vec())
    }

    pub fn mul(&self, other: &MonomialElement) -> MonomialElement {
        MonomialElement {
            lambda: self.lambda.mul(&other.lambda.permuted(&self.sigma)),
            sigma: self.sigma.compose(&other.sigma),
        }
    }

    pub fn inverse(&self) -> MonomialElement {
        let sigma_inv = self.sigma.inverse();
        MonomialElement {
            lambda: self.lambda.inverse().permuted(&sigma_inv),
            sigma: sigma_inv,
        }
    }

    pub fn conjugate_by(&self, h: &MonomialElement) -> MonomialElement {
        // Diagonal elements commute with each other.
        if self.sigma.is_identity() && h.sigma.is_identity() {
            return self.clone();
        }
        h.mul(self).mul(&h.inverse())
    }

    pub fn commutes_with(&self, other: &MonomialElement) -> bool {
        if self.sigma.is_identity() && other.sigma.is_identity() {
            return true;
        }
        self.mul(other) == other.mul(self)
    }

    pub fn order(&self) -> u64 {
        let mut cur = self.clone();
        let mut ord = 1u64;
        while !cur.is_identity() {
            cur = cur.mul(self);
            ord += 1;
        }
        ord
    }

    pub fn pow(&self, k: u64) -> MonomialElement {
        let mut out = MonomialElement::identity(self.n());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Eigenvalue phases of the linear map on the ambient space: each
    /// σ-cycle of length ℓ with phase sum `r` contributes
    /// `(frac(r) + k)/ℓ` for `k = 0, .., ℓ-1`.
    pub fn eigenvalues(&self) -> Vec<Phase> {
        let mut out = Vec::with_capacity(self.n());
        for cycle in self.sigma.all_cycles() {
            let len = cycle.len() as u64;
            let r = cycle
                .iter()
                .fold(Phase::zero(), |acc, &j| acc.add(&self.lambda.phases()[j]));
            for k in 0..len {
                out.push(Phase::new(
                    (r.value() + rat(k as i64, 1)) / rat(len as i64, 1),
                ));
            }
        }
        out
    }

    /// Age: the sum of the eigenvalue phases, each taken in `[0,1)`.
    pub fn age(&self) -> Rational {
        self.eigenvalues()
            .iter()
            .fold(Rational::zero(), |acc, p| acc + p.value())
    }
}

impl fmt::Display for MonomialElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.lambda, self.sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn delta() -> DiagonalElement {
        DiagonalElement::parse_strings(&[
            "1/8".into(),
            "5/8".into(),
            "7/8".into(),
            "3/8".into(),
        ])
        .unwrap()
    }

    fn s() -> Permutation {
        Permutation::parse("(1 3)(2 4)", 4).unwrap()
    }

    #[test]
    fn product_law_and_inverse() {
        let g = MonomialElement::new(delta(), s());
        assert_eq!(g.mul(&g.inverse()), MonomialElement::identity(4));
        assert_eq!(g.inverse().mul(&g), MonomialElement::identity(4));
        // (δ, s)^2 = (δ · s⋅δ, 1); δ + s⋅δ = (1/8+7/8, 5/8+3/8, ...) = 0.
        let square = g.mul(&g);
        assert!(square.is_identity());
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn semidirect_product_twists_the_left_factor() {
        let d = delta();
        let sig = MonomialElement::from_permutation(s());
        let lam = MonomialElement::from_diagonal(d.clone());
        // (1,s)(λ,1)(1,s)^{-1} = (s⋅λ, 1).
        let conj = lam.conjugate_by(&sig);
        assert_eq!(conj.lambda(), &d.permuted(&s()));
        assert!(conj.sigma().is_identity());
    }

    #[test]
    fn ages_of_the_worked_elements() {
        assert_eq!(MonomialElement::from_diagonal(delta()).age(), rat(2, 1));
        let g = MonomialElement::from_permutation(s());
        // Two 2-cycles with phase sum 0: eigenvalues {1, -1} each.
        let eig = g.eigenvalues();
        assert_eq!(
            eig,
            vec![
                Phase::zero(),
                Phase::from_frac(1, 2),
                Phase::zero(),
                Phase::from_frac(1, 2)
            ]
        );
        assert_eq!(g.age(), rat(1, 1));
        let ds = MonomialElement::new(delta(), s());
        assert_eq!(ds.age(), rat(1, 1));
    }

    #[test]
    fn eigenvalues_of_a_three_cycle_with_phase() {
        // σ = (1 2 3), λ = (1/2, 0, 0): phase sum 1/2 on one 3-cycle gives
        // eigenvalue phases (1/6, 3/6, 5/6).
        let lam = DiagonalElement::parse_strings(&["1/2".into(), "0".into(), "0".into()])
            .unwrap();
        let g = MonomialElement::new(lam, Permutation::parse("(1 2 3)", 3).unwrap());
        let eig = g.eigenvalues();
        assert_eq!(
            eig,
            vec![
                Phase::from_frac(1, 6),
                Phase::from_frac(1, 2),
                Phase::from_frac(5, 6)
            ]
        );
        assert_eq!(g.age(), rat(3, 2));
        assert_eq!(g.order(), 6);
    }
}
