//! Common fixed loci of monomial symmetries: the linear subspace fixed by
//! a set of elements, described by zeroed coordinates and glued coordinate
//! classes with phase offsets; restriction of polynomials to such a locus;
//! and the eigenvalues of a second element acting on it.

use std::collections::BTreeMap;

use crate::arith::{Cyclotomic, Phase};
use crate::error::{LgError, Result};
use crate::polynomial::{Monomial, QhPolynomial, WeightSystem};

use super::element::MonomialElement;

/// The fixed subspace of a set of monomial maps.  Surviving coordinates
/// are partitioned into classes; within a class every coordinate is a
/// fixed unit-modulus multiple of the class representative:
/// `x_j = e[offset_j] · x_rep`.
#[derive(Clone, Debug)]
pub struct FixedLocus {
    n: usize,
    zeroed: Vec<bool>,
    class_of: Vec<Option<usize>>,
    classes: Vec<Vec<usize>>,
    offsets: Vec<Phase>,
    induced: WeightSystem,
}

impl FixedLocus {
    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the locus = number of coordinate classes.
    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    pub fn zeroed(&self) -> &[bool] {
        &self.zeroed
    }

    pub fn class_of(&self) -> &[Option<usize>] {
        &self.class_of
    }

    /// Coordinate classes, each sorted ascending; the first entry is the
    /// representative (offset zero).
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn offsets(&self) -> &[Phase] {
        &self.offsets
    }

    /// Weight system induced on the locus coordinates (gcd-reduced).
    pub fn induced_weights(&self) -> &WeightSystem {
        &self.induced
    }
}

/// The common fixed locus of `elements` inside the space with the given
/// weights.  A σ-cycle relation that closes up with a non-zero total phase
/// kills its whole coordinate class.
pub fn fixed_locus(
    elements: &[MonomialElement],
    ambient: &WeightSystem,
) -> Result<FixedLocus> {
    let n = ambient.vars();
    for e in elements {
        if e.n() != n {
            return Err(LgError::IncompatibleLengths(format!(
                "element acts on {} coordinates but the ambient space has {}",
                e.n(),
                n
            )));
        }
    }

    // Weighted union-find: offset[j] relates x_j to its parent,
    // x_j = e[offset_j] x_parent.  `dead` is tracked on roots.
    let mut parent: Vec<usize> = (0..n).collect();
    let mut offset: Vec<Phase> = vec![Phase::zero(); n];
    let mut dead: Vec<bool> = vec![false; n];

    fn find(parent: &mut [usize], offset: &mut [Phase], j: usize) -> (usize, Phase) {
        if parent[j] == j {
            return (j, offset[j].clone());
        }
        let (root, above) = find(parent, offset, parent[j]);
        let total = offset[j].add(&above);
        parent[j] = root;
        offset[j] = total.clone();
        (root, total)
    }

    for e in elements {
        let sigma_inv = e.sigma().inverse();
        for i in 0..n {
            // x_i = e[λ_i] x_{σ^{-1}(i)}.
            let j = sigma_inv.apply(i);
            let r = e.lambda().phases()[i].clone();
            let (ri, oi) = find(&mut parent, &mut offset, i);
            let (rj, oj) = find(&mut parent, &mut offset, j);
            if ri == rj {
                if oi != oj.add(&r) {
                    dead[ri] = true;
                }
            } else {
                // x_{ri} = e[r + oj - oi] x_{rj}.
                parent[ri] = rj;
                offset[ri] = r.add(&oj).sub(&oi);
                dead[rj] = dead[rj] || dead[ri];
            }
        }
    }

    let mut zeroed = vec![false; n];
    let mut final_offset = vec![Phase::zero(); n];
    let mut root_of = vec![0usize; n];
    for j in 0..n {
        let (root, off) = find(&mut parent, &mut offset, j);
        zeroed[j] = dead[root];
        root_of[j] = root;
        final_offset[j] = off;
    }

    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for j in 0..n {
        if !zeroed[j] {
            members.entry(root_of[j]).or_default().push(j);
        }
    }
    let mut classes: Vec<Vec<usize>> = members.into_values().collect();
    classes.sort_by_key(|c| c[0]);

    let mut class_of = vec![None; n];
    let mut offsets = vec![Phase::zero(); n];
    let mut weights = Vec::with_capacity(classes.len());
    for (c, class) in classes.iter().enumerate() {
        let rep = class[0];
        let w = ambient.weights()[rep];
        for &j in class {
            class_of[j] = Some(c);
            offsets[j] = final_offset[j].sub(&final_offset[rep]);
            assert_eq!(
                ambient.weights()[j], w,
                "coordinates glued by a symmetry must share a weight"
            );
        }
        weights.push(w);
    }

    let induced = WeightSystem::new(weights, ambient.degree());
    Ok(FixedLocus { n, zeroed, class_of, classes, offsets, induced })
}

/// Restricts `f` to the locus by the substitution
/// `x_j = e[offset_j] y_{class(j)}`; monomials touching a zeroed
/// coordinate vanish.  A positive-dimensional locus on which everything
/// cancels is reported as `UnexpectedZeroRestriction`.
pub fn restrict_polynomial(f: &QhPolynomial, locus: &FixedLocus) -> Result<QhPolynomial> {
    assert_eq!(f.vars(), locus.n(), "polynomial and locus sizes differ");
    if locus.dim() == 0 {
        return Ok(QhPolynomial::zero_variables());
    }
    let mut merged: BTreeMap<Vec<u64>, Cyclotomic> = BTreeMap::new();
    'mono: for mono in f.monomials() {
        let mut exps = vec![0u64; locus.dim()];
        let mut twist = Phase::zero();
        for (j, &k) in mono.exponents.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if locus.zeroed()[j] {
                continue 'mono;
            }
            let c = locus.class_of()[j].expect("surviving coordinate has a class");
            exps[c] += k;
            twist = twist.add(&locus.offsets()[j].scale_u64(k));
        }
        let coeff = mono.coefficient.mul(&Cyclotomic::root_of_unity(&twist));
        let entry = merged.entry(exps).or_insert_with(Cyclotomic::zero);
        *entry = entry.add(&coeff);
    }
    let monomials: Vec<Monomial> = merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(exponents, coefficient)| Monomial { exponents, coefficient })
        .collect();
    if monomials.is_empty() {
        return Err(LgError::UnexpectedZeroRestriction);
    }
    let names: Vec<String> = (1..=locus.dim()).map(|i| format!("y{i}")).collect();
    QhPolynomial::new(names, monomials, locus.induced_weights().clone())
}

/// Eigenvalues (with the induced weights of their coordinate classes) of
/// `elem` acting on the locus.  Fails with `DoesNotPreserveLocus` when the
/// element does not map the locus to itself compatibly.
pub fn element_eigenvalues_on_locus(
    elem: &MonomialElement,
    locus: &FixedLocus,
) -> Result<Vec<(Phase, u64)>> {
    if elem.n() != locus.n() {
        return Err(LgError::IncompatibleLengths(format!(
            "element acts on {} coordinates but the locus lives in {}",
            elem.n(),
            locus.n()
        )));
    }
    let tau_inv = elem.sigma().inverse();
    let m = locus.dim();

    // The induced map sends y_{class(τ^{-1}(i))} to y_{class(i)} with the
    // phase below; both the class assignment and the phase must be
    // constant over the coordinates of a target class.
    let mut source_of: Vec<Option<usize>> = vec![None; m];
    let mut phase_of: Vec<Option<Phase>> = vec![None; m];
    for i in 0..locus.n() {
        let pre = tau_inv.apply(i);
        match (locus.zeroed()[i], locus.zeroed()[pre]) {
            (true, true) => continue,
            (false, false) => {}
            _ => {
                return Err(LgError::DoesNotPreserveLocus(format!(
                    "element exchanges zeroed coordinate {} with surviving coordinate {}",
                    if locus.zeroed()[i] { i + 1 } else { pre + 1 },
                    if locus.zeroed()[i] { pre + 1 } else { i + 1 },
                )));
            }
        }
        let target = locus.class_of()[i].expect("surviving coordinate has a class");
        let source = locus.class_of()[pre].expect("surviving coordinate has a class");
        let phase = elem.lambda().phases()[i]
            .add(&locus.offsets()[pre])
            .sub(&locus.offsets()[i]);
        match &source_of[target] {
            None => {
                source_of[target] = Some(source);
                phase_of[target] = Some(phase);
            }
            Some(prev) => {
                if *prev != source || phase_of[target].as_ref() != Some(&phase) {
                    return Err(LgError::DoesNotPreserveLocus(format!(
                        "inconsistent induced action on coordinate class {}",
                        target + 1
                    )));
                }
            }
        }
    }

    // The induced class map is a permutation; walk its cycles.
    let mut seen = vec![false; m];
    let mut hit = vec![false; m];
    for d in 0..m {
        let s = source_of[d].expect("total induced map");
        assert!(!hit[s], "induced class map must be injective");
        hit[s] = true;
    }
    let mut out: Vec<(Phase, u64)> = Vec::with_capacity(m);
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = start;
        loop {
            seen[cur] = true;
            cycle.push(cur);
            cur = source_of[cur].unwrap();
            if cur == start {
                break;
            }
        }
        let len = cycle.len() as u64;
        let w = locus.induced_weights().weights()[cycle[0]];
        for &d in &cycle {
            assert_eq!(
                locus.induced_weights().weights()[d],
                w,
                "classes in one induced cycle must share a weight"
            );
        }
        let r = cycle
            .iter()
            .fold(Phase::zero(), |acc, &d| acc.add(phase_of[d].as_ref().unwrap()));
        for k in 0..len {
            let val = (r.value() + crate::arith::rat(k as i64, 1))
                / crate::arith::rat(len as i64, 1);
            out.push((Phase::new(val), w));
        }
    }
    Ok(out)
}
