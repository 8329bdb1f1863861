//! Assembly of the full symmetry setup of an instance `(f, G⋊S)`: element
//! enumeration, conjugacy classes, levels (conjugacy classes of the
//! permutation part), and centralizers, together with the brute-force
//! search for coordinate symmetries of a polynomial.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{LgError, Result};
use crate::polynomial::InvertiblePolynomial;

use super::diagonal::{grading_element, preserves_polynomial, DiagonalElement, DiagonalGroup};
use super::element::{ElementKey, MonomialElement};
use super::permutation::{all_permutations, PermGroup, Permutation};

/// Whether the coordinate permutation maps the monomial set of `f` to
/// itself (all coefficients are 1, so this is exactly invariance).
pub fn permutation_preserves(f: &InvertiblePolynomial, sigma: &Permutation) -> bool {
    if sigma.n() != f.vars() {
        return false;
    }
    let rows: BTreeSet<&Vec<u64>> = f.exponent_matrix().iter().collect();
    f.exponent_matrix().iter().all(|row| {
        let moved: Vec<u64> = (0..row.len()).map(|j| row[sigma.apply(j)]).collect();
        rows.contains(&moved)
    })
}

/// All coordinate permutations preserving `f`, found by brute force.
pub fn permutation_symmetries(f: &InvertiblePolynomial) -> PermGroup {
    let keep: Vec<Permutation> = all_permutations(f.vars())
        .into_iter()
        .filter(|p| permutation_preserves(f, p))
        .collect();
    PermGroup::from_elements(f.vars(), keep)
}

/// A conjugacy class of the semidirect product, with its centralizer.
#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub representative: MonomialElement,
    pub members: Vec<MonomialElement>,
    /// Index into `SymmetryData::levels`.
    pub level: usize,
    pub centralizer: Vec<MonomialElement>,
}

/// A level: a conjugacy class of the permutation group `S`.
#[derive(Clone, Debug)]
pub struct Level {
    pub representative: Permutation,
    pub members: Vec<Permutation>,
    /// Indices of the product's conjugacy classes lying over this level.
    pub classes: Vec<usize>,
}

/// The symmetry setup of one instance: the product group `G⋊S` with its
/// conjugacy classes grouped into levels.
#[derive(Clone, Debug)]
pub struct SymmetryData {
    f: InvertiblePolynomial,
    g_group: DiagonalGroup,
    s_group: PermGroup,
    grading: DiagonalElement,
    elements: Vec<MonomialElement>,
    classes: Vec<ConjugacyClass>,
    levels: Vec<Level>,
    class_lookup: BTreeMap<ElementKey, usize>,
}

/// Validates and assembles `(f, G⋊S)`.
///
/// Fails with `NotASymmetry` when an element of `G` or `S` does not
/// preserve `f`, and with `DoesNotNormalize` when conjugation by some
/// `σ ∈ S` leads outside `G`.
pub fn build_symmetry_data(
    f: &InvertiblePolynomial,
    g_group: &DiagonalGroup,
    s_group: &PermGroup,
) -> Result<SymmetryData> {
    let n = f.vars();
    if g_group.n() != n || s_group.n() != n {
        return Err(LgError::IncompatibleLengths(format!(
            "polynomial has {} variables; G acts on {} and S on {}",
            n,
            g_group.n(),
            s_group.n()
        )));
    }
    for g in g_group.elements() {
        if !preserves_polynomial(f, g) {
            return Err(LgError::NotASymmetry(format!(
                "diagonal element {g} does not preserve {}",
                f.expression()
            )));
        }
    }
    for sigma in s_group.elements() {
        if !permutation_preserves(f, sigma) {
            return Err(LgError::NotASymmetry(format!(
                "permutation {sigma} does not preserve {}",
                f.expression()
            )));
        }
    }
    let probes: &[DiagonalElement] = if g_group.generators().is_empty() {
        g_group.elements()
    } else {
        g_group.generators()
    };
    for sigma in s_group.elements() {
        for g in probes {
            if !g_group.contains(&g.permuted(sigma)) {
                return Err(LgError::DoesNotNormalize(format!(
                    "conjugating {g} by {sigma} leaves the diagonal group"
                )));
            }
        }
    }

    let mut elements: Vec<MonomialElement> = Vec::with_capacity(g_group.order() * s_group.order());
    for lambda in g_group.elements() {
        for sigma in s_group.elements() {
            elements.push(MonomialElement::new(lambda.clone(), sigma.clone()));
        }
    }
    elements.sort();

    // Conjugators: a generating set of the product.
    let mut conjugators: Vec<MonomialElement> = Vec::new();
    let g_gens: &[DiagonalElement] = if g_group.generators().is_empty() {
        g_group.elements()
    } else {
        g_group.generators()
    };
    let s_gens: &[Permutation] = if s_group.generators().is_empty() {
        s_group.elements()
    } else {
        s_group.generators()
    };
    for g in g_gens {
        conjugators.push(MonomialElement::from_diagonal(g.clone()));
    }
    for sigma in s_gens {
        conjugators.push(MonomialElement::from_permutation(sigma.clone()));
    }

    let levels_raw = s_group.conjugacy_classes();
    let mut levels: Vec<Level> = levels_raw
        .into_iter()
        .map(|members| Level {
            representative: members[0].clone(),
            members,
            classes: Vec::new(),
        })
        .collect();

    let mut classes: Vec<ConjugacyClass> = Vec::new();
    let mut class_lookup: BTreeMap<ElementKey, usize> = BTreeMap::new();
    for start in &elements {
        if class_lookup.contains_key(&start.key()) {
            continue;
        }
        let mut orbit: BTreeSet<MonomialElement> = BTreeSet::new();
        let mut queue: VecDeque<MonomialElement> = VecDeque::new();
        orbit.insert(start.clone());
        queue.push_back(start.clone());
        while let Some(cur) = queue.pop_front() {
            for h in &conjugators {
                let moved = cur.conjugate_by(h);
                if orbit.insert(moved.clone()) {
                    queue.push_back(moved);
                }
            }
        }
        let members: Vec<MonomialElement> = orbit.into_iter().collect();
        let representative = members[0].clone();
        let level = levels
            .iter()
            .position(|lv| lv.members.binary_search(representative.sigma()).is_ok())
            .expect("class sigma-part must lie in a level");
        let centralizer: Vec<MonomialElement> = if representative.sigma().is_identity() {
            // (ν,σ) commutes with a diagonal (λ,1) iff σ fixes λ, since the
            // diagonal parts commute among themselves.
            let lam = representative.lambda();
            let good: BTreeSet<&[usize]> = s_group
                .elements()
                .iter()
                .filter(|sigma| &lam.permuted(sigma) == lam)
                .map(|sigma| sigma.images())
                .collect();
            elements
                .iter()
                .filter(|h| good.contains(h.sigma().images()))
                .cloned()
                .collect()
        } else {
            elements
                .iter()
                .filter(|h| h.commutes_with(&representative))
                .cloned()
                .collect()
        };
        assert_eq!(
            members.len() * centralizer.len(),
            elements.len(),
            "orbit-stabilizer must balance"
        );
        let index = classes.len();
        for member in &members {
            class_lookup.insert(member.key(), index);
        }
        levels[level].classes.push(index);
        classes.push(ConjugacyClass { representative, members, level, centralizer });
    }

    Ok(SymmetryData {
        f: f.clone(),
        g_group: g_group.clone(),
        s_group: s_group.clone(),
        grading: grading_element(f),
        elements,
        classes,
        levels,
        class_lookup,
    })
}

impl SymmetryData {
    pub fn f(&self) -> &InvertiblePolynomial {
        &self.f
    }

    pub fn g_group(&self) -> &DiagonalGroup {
        &self.g_group
    }

    pub fn s_group(&self) -> &PermGroup {
        &self.s_group
    }

    /// The exponential grading element `J` of `f`.
    pub fn grading(&self) -> &DiagonalElement {
        &self.grading
    }

    pub fn elements(&self) -> &[MonomialElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn class_index_of(&self, elem: &MonomialElement) -> Option<usize> {
        self.class_lookup.get(&elem.key()).copied()
    }

    /// Index of the level containing the identity permutation.
    pub fn identity_level(&self) -> usize {
        self.levels
            .iter()
            .position(|lv| lv.representative.is_identity())
            .expect("the identity level always exists")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::symmetry::diagonal::full_symmetry_group;

    fn worked_instance() -> (InvertiblePolynomial, DiagonalGroup, PermGroup) {
        let f =
            InvertiblePolynomial::parse("x1^3*x2 + x2^5*x3 + x3^3*x4 + x4^5*x1", None).unwrap();
        let delta = DiagonalElement::parse_strings(&[
            "1/8".into(),
            "5/8".into(),
            "7/8".into(),
            "3/8".into(),
        ])
        .unwrap();
        let g = DiagonalGroup::cyclic(delta, 1_000_000).unwrap();
        let s = PermGroup::closure(4, vec![Permutation::parse("(1 3)(2 4)", 4).unwrap()]);
        (f, g, s)
    }

    #[test]
    fn coordinate_symmetries_of_the_worked_loop() {
        let (f, _, _) = worked_instance();
        let s = permutation_symmetries(&f);
        // The loop's only coordinate symmetries are the rotations that
        // respect the alternating exponents: identity and (1 3)(2 4).
        assert_eq!(s.order(), 2);
        assert!(s.contains(&Permutation::parse("(1 3)(2 4)", 4).unwrap()));
    }

    #[test]
    fn coordinate_symmetries_of_a_fermat_sum() {
        let f = InvertiblePolynomial::parse("x^3 + y^3 + z^3", None).unwrap();
        assert_eq!(permutation_symmetries(&f).order(), 6);
        let g = InvertiblePolynomial::parse("x^3 + y^3 + z^4", None).unwrap();
        assert_eq!(permutation_symmetries(&g).order(), 2);
    }

    #[test]
    fn worked_instance_classes_and_levels() {
        let (f, g, s) = worked_instance();
        let data = build_symmetry_data(&f, &g, &s).unwrap();
        assert_eq!(data.order(), 16);
        assert_eq!(data.levels().len(), 2);

        let id_level = data.identity_level();
        assert_eq!(data.levels()[id_level].classes.len(), 5);
        let swap_level = 1 - id_level;
        assert_eq!(data.levels()[swap_level].classes.len(), 2);

        // Diagonal classes pair δ^k with δ^{-k}.
        let sizes: Vec<usize> = data.levels()[id_level]
            .classes
            .iter()
            .map(|&c| data.classes()[c].members.len())
            .collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 1, 2, 2, 2]);

        // Both swap-level classes have 4 members and centralizer order 4.
        for &c in &data.levels()[swap_level].classes {
            let class = &data.classes()[c];
            assert_eq!(class.members.len(), 4);
            assert_eq!(class.centralizer.len(), 4);
            assert_eq!(class.representative.age(), rat(1, 1));
        }
    }

    #[test]
    fn class_lookup_is_total() {
        let (f, g, s) = worked_instance();
        let data = build_symmetry_data(&f, &g, &s).unwrap();
        let total: usize = data.classes().iter().map(|c| c.members.len()).sum();
        assert_eq!(total, data.order());
        for e in data.elements() {
            let idx = data.class_index_of(e).unwrap();
            assert!(data.classes()[idx].members.contains(e));
        }
    }

    #[test]
    fn rejects_non_symmetries_and_non_normalizing_parts() {
        let (f, g, _) = worked_instance();
        // (1 2) does not preserve the loop.
        let bad_s = PermGroup::closure(4, vec![Permutation::parse("(1 2)", 4).unwrap()]);
        match build_symmetry_data(&f, &g, &bad_s) {
            Err(LgError::NotASymmetry(_)) => {}
            other => panic!("expected NotASymmetry, got {other:?}"),
        }

        // A diagonal element that is not a symmetry of f.
        let bad_g = DiagonalGroup::cyclic(
            DiagonalElement::parse_strings(&[
                "1/2".into(),
                "0".into(),
                "0".into(),
                "0".into(),
            ])
            .unwrap(),
            100,
        )
        .unwrap();
        match build_symmetry_data(&f, &bad_g, &PermGroup::trivial(4)) {
            Err(LgError::NotASymmetry(_)) => {}
            other => panic!("expected NotASymmetry, got {other:?}"),
        }
    }

    #[test]
    fn normalization_failure_is_reported() {
        // In the Fermat cubic the subgroup scaling only the first
        // coordinate is moved by the 3-cycle.
        let f = InvertiblePolynomial::parse("x^3 + y^3 + z^3", None).unwrap();
        let one_coord = DiagonalGroup::cyclic(
            DiagonalElement::parse_strings(&["1/3".into(), "0".into(), "0".into()]).unwrap(),
            100,
        )
        .unwrap();
        let rot = PermGroup::closure(3, vec![Permutation::parse("(1 2 3)", 3).unwrap()]);
        match build_symmetry_data(&f, &one_coord, &rot) {
            Err(LgError::DoesNotNormalize(_)) => {}
            other => panic!("expected DoesNotNormalize, got {other:?}"),
        }
        // The diagonal scaling by e[1/3] on every coordinate is fine.
        let uniform = DiagonalGroup::cyclic(
            DiagonalElement::parse_strings(&["1/3".into(), "1/3".into(), "1/3".into()])
                .unwrap(),
            100,
        )
        .unwrap();
        let data = build_symmetry_data(&f, &uniform, &rot).unwrap();
        assert_eq!(data.order(), 9);
    }

    #[test]
    fn full_group_with_swap_has_matching_order() {
        let (f, _, s) = worked_instance();
        let full = full_symmetry_group(&f, 1_000_000).unwrap();
        let data = build_symmetry_data(&f, &full, &s).unwrap();
        assert_eq!(data.order(), 448);
        let sum: usize = data.classes().iter().map(|c| c.members.len()).sum();
        assert_eq!(sum, 448);
    }
}
