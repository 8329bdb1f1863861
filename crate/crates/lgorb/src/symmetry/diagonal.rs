//! Diagonal symmetries of an invertible polynomial: single elements
//! (vectors of phases), finite diagonal groups with cap-guarded
//! enumeration, the maximal group, the exponential grading element, and
//! the dual (annihilator) subgroup inside the transpose's maximal group.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, Zero};

use crate::arith::{lcm_u64, rational_string, Phase, Rational};
use crate::error::{LgError, Result};
use crate::polynomial::InvertiblePolynomial;

use super::permutation::Permutation;

/// A diagonal linear map `x_i ↦ e[φ_i] x_i`, stored by its phase vector
/// `φ ∈ [0,1)^n` (`e[t] = exp(2πit)`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiagonalElement {
    phases: Vec<Phase>,
}

impl DiagonalElement {
    pub fn identity(n: usize) -> Self {
        DiagonalElement { phases: vec![Phase::zero(); n] }
    }

    pub fn from_phases(phases: Vec<Phase>) -> Self {
        DiagonalElement { phases }
    }

    /// Parses a phase vector given as rational strings, e.g.
    /// `["1/8", "5/8", "7/8", "3/8"]`; values are reduced mod 1.
    pub fn parse_strings(parts: &[String]) -> Result<Self> {
        let mut phases = Vec::with_capacity(parts.len());
        for p in parts {
            phases.push(Phase::parse(p)?);
        }
        Ok(DiagonalElement { phases })
    }

    pub fn n(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn is_identity(&self) -> bool {
        self.phases.iter().all(Phase::is_zero)
    }

    pub fn mul(&self, other: &DiagonalElement) -> DiagonalElement {
        assert_eq!(self.n(), other.n());
        DiagonalElement {
            phases: self
                .phases
                .iter()
                .zip(&other.phases)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn inverse(&self) -> DiagonalElement {
        DiagonalElement { phases: self.phases.iter().map(Phase::neg).collect() }
    }

    pub fn pow(&self, k: u64) -> DiagonalElement {
        DiagonalElement {
            phases: self.phases.iter().map(|p| p.scale_u64(k)).collect(),
        }
    }

    /// Multiplicative order: the lcm of the phase denominators.
    pub fn order(&self) -> u64 {
        self.phases
            .iter()
            .fold(1u64, |acc, p| lcm_u64(acc, p.denominator()))
    }

    /// The permuted phase vector `(σ⋅λ)_i = λ_{σ^{-1}(i)}`, i.e. the
    /// diagonal part of the conjugate `(1,σ)(λ,1)(1,σ)^{-1}`.
    pub fn permuted(&self, sigma: &Permutation) -> DiagonalElement {
        let inv = sigma.inverse();
        DiagonalElement {
            phases: (0..self.n())
                .map(|i| self.phases[inv.apply(i)].clone())
                .collect(),
        }
    }

    /// Sum of the phase representatives in `[0,1)`, as an exact rational.
    /// For a diagonal element this equals its age.
    pub fn phase_sum(&self) -> Rational {
        self.phases
            .iter()
            .fold(Rational::zero(), |acc, p| acc + p.value())
    }
}

impl fmt::Display for DiagonalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.phases.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", rational_string(p.value()))?;
        }
        write!(f, ")")
    }
}

/// A finite group of diagonal maps, stored with its full sorted element
/// list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalGroup {
    n: usize,
    generators: Vec<DiagonalElement>,
    elements: Vec<DiagonalElement>,
}

impl DiagonalGroup {
    pub fn trivial(n: usize) -> Self {
        DiagonalGroup {
            n,
            generators: Vec::new(),
            elements: vec![DiagonalElement::identity(n)],
        }
    }

    /// Closure of the generators, refusing to enumerate past `cap`
    /// elements.
    pub fn closure(n: usize, generators: Vec<DiagonalElement>, cap: u64) -> Result<Self> {
        for g in &generators {
            assert_eq!(g.n(), n, "generator has the wrong number of phases");
        }
        let mut set: BTreeSet<DiagonalElement> = BTreeSet::new();
        let mut queue = vec![DiagonalElement::identity(n)];
        set.insert(queue[0].clone());
        while let Some(cur) = queue.pop() {
            for g in &generators {
                let next = g.mul(&cur);
                if set.insert(next.clone()) {
                    if set.len() as u64 > cap {
                        return Err(LgError::GroupTooLarge {
                            order: set.len() as u128,
                            cap,
                        });
                    }
                    queue.push(next);
                }
            }
        }
        Ok(DiagonalGroup {
            n,
            generators,
            elements: set.into_iter().collect(),
        })
    }

    /// Cyclic group generated by one element.
    pub fn cyclic(g: DiagonalElement, cap: u64) -> Result<Self> {
        Self::closure(g.n(), vec![g], cap)
    }

    /// Group from a known-closed element list.  A small generating set is
    /// extracted greedily; since the generated subgroup must reproduce the
    /// list exactly, this also asserts closure.
    pub fn from_elements(n: usize, mut elements: Vec<DiagonalElement>) -> Self {
        elements.sort();
        elements.dedup();
        let mut have: BTreeSet<DiagonalElement> = BTreeSet::new();
        have.insert(DiagonalElement::identity(n));
        let mut generators: Vec<DiagonalElement> = Vec::new();
        for e in &elements {
            if have.contains(e) {
                continue;
            }
            generators.push(e.clone());
            // Diagonal groups are abelian: adjoining a generator extends
            // the subgroup by whole cosets of its powers.
            let mut coset_reps: Vec<DiagonalElement> = Vec::new();
            let mut pow = e.clone();
            while !have.contains(&pow) {
                coset_reps.push(pow.clone());
                pow = pow.mul(e);
            }
            let base: Vec<DiagonalElement> = have.iter().cloned().collect();
            for r in &coset_reps {
                for h in &base {
                    have.insert(h.mul(r));
                }
            }
        }
        assert!(
            have.len() == elements.len() && have.iter().eq(elements.iter()),
            "element list is not closed"
        );
        DiagonalGroup { n, generators, elements }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[DiagonalElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[DiagonalElement] {
        &self.elements
    }

    pub fn contains(&self, g: &DiagonalElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Invariant factors `d_1 | d_2 | ... | d_r` of the abelian group,
    /// found by repeatedly splitting off an element of maximal residual
    /// order.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut have: BTreeSet<DiagonalElement> = BTreeSet::new();
        have.insert(DiagonalElement::identity(self.n));
        let mut factors: Vec<u64> = Vec::new();
        while have.len() < self.order() {
            let mut best: Option<(u64, &DiagonalElement)> = None;
            for g in &self.elements {
                let mut pow = g.clone();
                let mut ord = 1u64;
                while !have.contains(&pow) {
                    pow = pow.mul(g);
                    ord += 1;
                }
                if best.as_ref().map_or(true, |(b, _)| ord > *b) {
                    best = Some((ord, g));
                }
            }
            let (ord, g) = best.expect("non-trivial quotient has an element");
            factors.push(ord);
            let mut bigger = BTreeSet::new();
            let mut pow = DiagonalElement::identity(self.n);
            for _ in 0..ord {
                for h in &have {
                    bigger.insert(h.mul(&pow));
                }
                pow = pow.mul(g);
            }
            have = bigger;
        }
        factors.reverse();
        factors
    }

    /// Text form of the invariant factor decomposition, e.g. `"Z_2 x Z_4"`;
    /// the trivial group prints as `"1"`.
    pub fn structure(&self) -> String {
        let factors = self.invariant_factors();
        if factors.is_empty() {
            return "1".to_string();
        }
        factors
            .iter()
            .map(|d| format!("Z_{d}"))
            .collect::<Vec<_>>()
            .join(" x ")
    }

    /// Every subgroup, ordered by (order, element list).
    pub fn subgroups(&self) -> Vec<DiagonalGroup> {
        let mut known: BTreeMap<Vec<DiagonalElement>, Vec<DiagonalElement>> = BTreeMap::new();
        let trivial = vec![DiagonalElement::identity(self.n)];
        known.insert(trivial.clone(), Vec::new());
        let mut frontier = vec![trivial];
        let cap = self.order() as u64;
        while let Some(base) = frontier.pop() {
            for g in &self.elements {
                if base.binary_search(g).is_ok() {
                    continue;
                }
                let mut gens: Vec<DiagonalElement> = known[&base].clone();
                gens.push(g.clone());
                let bigger = DiagonalGroup::closure(self.n, gens.clone(), cap)
                    .expect("subgroup closure stays within the parent order");
                if !known.contains_key(&bigger.elements) {
                    known.insert(bigger.elements.clone(), gens);
                    frontier.push(bigger.elements);
                }
            }
        }
        let mut out: Vec<DiagonalGroup> = known
            .into_iter()
            .map(|(elements, generators)| DiagonalGroup {
                n: self.n,
                generators,
                elements,
            })
            .collect();
        out.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        out
    }
}

/// Whether `E·φ` is an integer vector, i.e. whether the diagonal map is a
/// symmetry of the polynomial with exponent matrix `E`.
pub fn preserves_polynomial(f: &InvertiblePolynomial, g: &DiagonalElement) -> bool {
    if g.n() != f.vars() {
        return false;
    }
    f.exponent_matrix().iter().all(|row| {
        row.iter()
            .zip(g.phases())
            .fold(Phase::zero(), |acc, (&k, p)| acc.add(&p.scale_u64(k)))
            .is_zero()
    })
}

/// `E·φ` as an integer vector; panics if `g` is not a symmetry of `f`.
fn exponent_pairing_vector(f: &InvertiblePolynomial, g: &DiagonalElement) -> Vec<BigInt> {
    f.exponent_matrix()
        .iter()
        .map(|row| {
            let total: Rational = row
                .iter()
                .zip(g.phases())
                .map(|(&k, p)| p.value() * Rational::from(BigInt::from(k)))
                .sum();
            assert!(
                total.is_integer(),
                "element is not a symmetry of the polynomial"
            );
            total.to_integer()
        })
        .collect()
}

/// The maximal diagonal symmetry group of `f`, of order `|det E|`, with
/// the columns of `E^{-1}` (mod 1) as generators.  Fails with
/// `GroupTooLarge` before enumerating when `|det E|` exceeds `cap`.
pub fn full_symmetry_group(f: &InvertiblePolynomial, cap: u64) -> Result<DiagonalGroup> {
    let order = num::abs(f.determinant().clone());
    let order_u128: u128 = order
        .to_string()
        .parse()
        .map_err(|_| LgError::GroupTooLarge { order: u128::MAX, cap })?;
    if order_u128 > cap as u128 {
        return Err(LgError::GroupTooLarge { order: order_u128, cap });
    }
    let n = f.vars();
    let inv = f.matrix_inverse();
    let generators: Vec<DiagonalElement> = (0..n)
        .map(|j| {
            DiagonalElement::from_phases(
                (0..n).map(|i| Phase::new(inv[i][j].clone())).collect(),
            )
        })
        .collect();
    let group = DiagonalGroup::closure(n, generators, cap)?;
    assert_eq!(
        group.order() as u128,
        order_u128,
        "maximal group order must equal |det E|"
    );
    Ok(group)
}

/// The exponential grading element `J = (e[q_1], .., e[q_n])`.
pub fn grading_element(f: &InvertiblePolynomial) -> DiagonalElement {
    let j = DiagonalElement::from_phases(f.weights().q().into_iter().map(Phase::new).collect());
    debug_assert!(preserves_polynomial(f, &j));
    j
}

/// The subgroup of elements with determinant 1 (phase sum an integer).
pub fn sl_subgroup(group: &DiagonalGroup) -> DiagonalGroup {
    let elements: Vec<DiagonalElement> = group
        .elements()
        .iter()
        .filter(|g| g.phase_sum().is_integer())
        .cloned()
        .collect();
    DiagonalGroup::from_elements(group.n(), elements)
}

/// The pairing `⟨λ̃, λ⟩ = e[φ̃ · (E φ)]` between the maximal groups of the
/// transpose and of `f`, as a phase.
pub fn dual_pairing(
    f: &InvertiblePolynomial,
    dual_elem: &DiagonalElement,
    elem: &DiagonalElement,
) -> Phase {
    let a = exponent_pairing_vector(f, elem);
    dual_elem
        .phases()
        .iter()
        .zip(&a)
        .fold(Phase::zero(), |acc, (p, k)| acc.add(&p.scale(k)))
}

/// The dual of a subgroup `G` of `f`'s maximal group: the annihilator of
/// `G` under `dual_pairing`, inside the maximal group of the transpose.
pub fn dual_subgroup(
    f: &InvertiblePolynomial,
    group: &DiagonalGroup,
    cap: u64,
) -> Result<DiagonalGroup> {
    let transpose = f.transpose()?;
    let ambient = full_symmetry_group(&transpose, cap)?;
    // Annihilation against a generating set of G suffices.
    let probes: &[DiagonalElement] = if group.generators().is_empty() {
        group.elements()
    } else {
        group.generators()
    };
    let elements: Vec<DiagonalElement> = ambient
        .elements()
        .iter()
        .filter(|cand| probes.iter().all(|g| dual_pairing(f, cand, g).is_zero()))
        .cloned()
        .collect();
    Ok(DiagonalGroup::from_elements(f.vars(), elements))
}
