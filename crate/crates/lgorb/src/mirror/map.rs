//! The transpose-side construction on the identity level: mapping monomial
//! top-forms on fixed subspaces to diagonal symmetries of the transpose,
//! the structural hypotheses under which that map organizes the identity
//! level, and the identity-level E-function assembled from matched pairs of
//! conjugacy classes of the two sides.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;

use crate::arith::{lcm_u64, rat, EFunction, Phase, Rational};
use crate::error::{LgError, Result};
use crate::polynomial::{milnor_basis, AtomicBlock, BlockKind, InvertiblePolynomial};
use crate::symmetry::{DiagonalElement, DiagonalGroup, PermGroup, Permutation};

use super::verify::{bhht_dual, DualPair};

/// Maps a monomial top-form on the fixed subspace of the diagonal symmetry
/// `lam` to a diagonal symmetry of the transpose polynomial: the form
/// `∧_{i∈I} x_i^{k_i} dx_i` (over the coordinates `I` fixed by `lam`) goes
/// to `e[β]` with `β = b·E^{-1}`, where `b_i = k_i + 1` on `I` and `0`
/// elsewhere and `E` is the exponent matrix of `f`.
///
/// `k` is ambient-indexed and must vanish outside `I`
/// (`SupportOutsideFixedLocus` otherwise).  The result lies in the maximal
/// diagonal symmetry group of the transpose — `β·(E^T)^T = b` is an integer
/// vector by construction — and this is re-checked on every call.
pub fn mirror_map(
    f: &InvertiblePolynomial,
    lam: &DiagonalElement,
    k: &[u64],
) -> Result<DiagonalElement> {
    let n = f.vars();
    assert_eq!(lam.n(), n, "symmetry must act on the ambient variables");
    assert_eq!(k.len(), n, "exponent vector must be ambient-indexed");
    let fixed: Vec<bool> = lam.phases().iter().map(Phase::is_zero).collect();
    if (0..n).any(|i| k[i] > 0 && !fixed[i]) {
        return Err(LgError::SupportOutsideFixedLocus);
    }
    let inv = f.matrix_inverse();
    let b: Vec<Rational> = (0..n)
        .map(|i| if fixed[i] { rat(k[i] as i64 + 1, 1) } else { Rational::zero() })
        .collect();
    let out = DiagonalElement::from_phases(
        (0..n)
            .map(|j| {
                let beta_j = (0..n).fold(Rational::zero(), |acc, i| acc + &b[i] * &inv[i][j]);
                Phase::new(beta_j)
            })
            .collect(),
    );
    // Membership in the maximal group of the transpose: each monomial of
    // the transpose (column of E) must pair integrally with the phases.
    for i in 0..n {
        let total = (0..n).fold(Phase::zero(), |acc, j| {
            acc.add(&out.phases()[j].scale_u64(f.exponent_matrix()[j][i]))
        });
        assert!(
            total.is_zero(),
            "mirror image must be a symmetry of the transpose"
        );
    }
    Ok(out)
}

/// Order of the restriction of `sigma` to an invariant coordinate set: the
/// lcm of its cycle lengths inside the set.
fn restriction_order(sigma: &Permutation, set: &BTreeSet<usize>) -> u64 {
    let mut order = 1u64;
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for &start in set {
        if seen.contains(&start) {
            continue;
        }
        let mut len = 0u64;
        let mut cur = start;
        loop {
            seen.insert(cur);
            len += 1;
            cur = sigma.apply(cur);
            if cur == start {
                break;
            }
        }
        order = lcm_u64(order, len);
    }
    order
}

/// Number of distinct images of a coordinate set under the group.
fn block_orbit_size(vars: &[usize], s_group: &PermGroup) -> usize {
    let images: BTreeSet<BTreeSet<usize>> = s_group
        .elements()
        .iter()
        .map(|sigma| vars.iter().map(|&v| sigma.apply(v)).collect())
        .collect();
    images.len()
}

/// Checks the structural hypotheses of the identity-level mirror route:
///
/// 1. among the atomic blocks, no two loops of even length share a type
///    (exponent sequence up to rotation);
/// 2. given 1, no permutation in `S` acts on an even-length loop of length
///    `L` with restriction order `k` leaving `L/k` odd, every odd-length
///    loop has an odd orbit of copies under `S`, and every chain has an odd
///    orbit of copies under `S`.
///
/// Fermat blocks are unconstrained.  A violation is reported as
/// `AssumptionViolated` with a witness.
pub fn check_mirror_assumptions(f: &InvertiblePolynomial, s_group: &PermGroup) -> Result<()> {
    let names = f.var_names();
    let show_vars = |b: &AtomicBlock| {
        b.vars
            .iter()
            .map(|&v| names[v].as_str())
            .collect::<Vec<_>>()
            .join(", ")
    };
    let even_loops: Vec<&AtomicBlock> = f
        .blocks()
        .iter()
        .filter(|b| b.kind == BlockKind::Loop && b.len() % 2 == 0)
        .collect();
    for (i, a) in even_loops.iter().enumerate() {
        for b in &even_loops[i + 1..] {
            if a.exponents == b.exponents {
                let ty = a
                    .exponents
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(LgError::AssumptionViolated(format!(
                    "even-length loops on ({}) and ({}) share the type ({ty})",
                    show_vars(a),
                    show_vars(b)
                )));
            }
        }
    }
    for block in &even_loops {
        let set: BTreeSet<usize> = block.vars.iter().copied().collect();
        for sigma in s_group.elements() {
            // A symmetry maps each block to one of the same kind and type;
            // an even-length loop has no twin of its type, so it is stable.
            let stable = block.vars.iter().all(|&v| set.contains(&sigma.apply(v)));
            assert!(stable, "a symmetry must stabilize an unpaired even-length loop");
            let k = restriction_order(sigma, &set);
            let l = block.len() as u64;
            debug_assert_eq!(l % k, 0, "a loop symmetry restricts to a rotation");
            if (l / k) % 2 == 1 {
                return Err(LgError::AssumptionViolated(format!(
                    "{sigma} acts on the even-length loop on ({}) with order {k}, \
                     leaving the odd quotient {}",
                    show_vars(block),
                    l / k
                )));
            }
        }
    }
    for block in f.blocks() {
        let what = match block.kind {
            BlockKind::Loop if block.len() % 2 == 1 => "odd-length loop",
            BlockKind::Chain => "chain",
            _ => continue,
        };
        let orbit = block_orbit_size(&block.vars, s_group);
        if orbit % 2 == 0 {
            return Err(LgError::AssumptionViolated(format!(
                "the {what} on ({}) has an even orbit of {orbit} copies",
                show_vars(block)
            )));
        }
    }
    Ok(())
}

/// Images under [`mirror_map`] of the invariant monomial basis forms on the
/// fixed subspace of `lam` (given by its fixed coordinates `fixed`): the
/// monomial top-form basis of the restriction is enumerated blockwise, each
/// form is mapped, and exactly the images lying in `dual_group` are kept —
/// a form is invariant under the annihilated group if and only if its image
/// lies in the annihilator, since both conditions read `b·φ ∈ ℤ` for every
/// group element `e[φ]`.
fn invariant_form_images(
    f: &InvertiblePolynomial,
    lam: &DiagonalElement,
    fixed: &[usize],
    dual_group: &DiagonalGroup,
) -> Result<BTreeSet<DiagonalElement>> {
    let n = f.vars();
    let mut images = BTreeSet::new();
    if fixed.is_empty() {
        // The restriction to the origin has the rank-one module of constant
        // forms; its generator is invariant and maps to the identity.
        images.insert(DiagonalElement::identity(n));
        return Ok(images);
    }
    let col_of: BTreeMap<usize, usize> =
        fixed.iter().enumerate().map(|(c, &v)| (v, c)).collect();
    let rows: Vec<Vec<u64>> = f
        .exponent_matrix()
        .iter()
        .filter(|row| {
            row.iter()
                .enumerate()
                .all(|(j, &e)| e == 0 || col_of.contains_key(&j))
        })
        .map(|row| fixed.iter().map(|&v| row[v]).collect())
        .collect();
    assert_eq!(
        rows.len(),
        fixed.len(),
        "restriction to a fixed subspace keeps one monomial per surviving variable"
    );
    let names: Vec<String> = fixed.iter().map(|&v| f.var_names()[v].clone()).collect();
    let shape = InvertiblePolynomial::from_exponent_matrix(rows, names)
        .expect("restriction of an invertible polynomial to a fixed subspace is invertible");
    for k in milnor_basis(&shape) {
        let mut ambient = vec![0u64; n];
        for (c, &v) in fixed.iter().enumerate() {
            ambient[v] = k[c];
        }
        let image = mirror_map(f, lam, &ambient)?;
        if dual_group.contains(&image) {
            images.insert(image);
        }
    }
    Ok(images)
}

/// The identity-level E-function assembled on the transpose side.
///
/// For every pair of identity-level conjugacy classes `([λ], [λ̃])` of the
/// two products, the pair contributes
/// `m·(−1)^{n_λ}·(t·t̄)^{A}·(t̄/t)^{B}` with `A = age(λ) − (n−n_λ)/2` and
/// `B = age(λ̃) − (n−n_λ̃)/2`, where the multiplicity `m` is zero unless
/// some member of `[λ̃]` is the mirror image of an invariant form on
/// `Fix(λ)`, and otherwise equals `2^r` with `r` the number of even-length
/// loops on which both representatives act trivially.  Requires the
/// hypotheses of [`check_mirror_assumptions`].
pub fn e_level1_from_pair(pair: &DualPair) -> Result<EFunction> {
    let primal = pair.primal();
    let dual = pair.dual();
    let f = primal.f();
    check_mirror_assumptions(f, primal.s_group())?;
    let n = f.vars();
    let even_loops: Vec<&[usize]> = f
        .blocks()
        .iter()
        .filter(|b| b.kind == BlockKind::Loop && b.len() % 2 == 0)
        .map(|b| b.vars.as_slice())
        .collect();
    let trivial_on = |lam: &DiagonalElement| -> Vec<bool> {
        even_loops
            .iter()
            .map(|vars| vars.iter().all(|&v| lam.phases()[v].is_zero()))
            .collect()
    };
    let placement = |lam: &DiagonalElement| -> Rational {
        let n_fixed = lam.phases().iter().filter(|p| p.is_zero()).count();
        lam.phase_sum() - rat((n - n_fixed) as i64, 2)
    };

    struct DualClassData {
        exponent: Rational,
        trivial: Vec<bool>,
        lambdas: Vec<DiagonalElement>,
    }
    let dual_classes: Vec<DualClassData> = dual.levels()[dual.identity_level()]
        .classes
        .iter()
        .map(|&ci| {
            let class = &dual.classes()[ci];
            let rep = class.representative.lambda();
            DualClassData {
                exponent: placement(rep),
                trivial: trivial_on(rep),
                lambdas: class.members.iter().map(|m| m.lambda().clone()).collect(),
            }
        })
        .collect();

    let mut e = EFunction::zero(n);
    for &ci in &primal.levels()[primal.identity_level()].classes {
        let class = &primal.classes()[ci];
        let lam = class.representative.lambda();
        let fixed: Vec<usize> = (0..n).filter(|&i| lam.phases()[i].is_zero()).collect();
        let sign: i64 = if fixed.len() % 2 == 1 { -1 } else { 1 };
        let a_exp = placement(lam);
        let trivial = trivial_on(lam);
        let images = invariant_form_images(f, lam, &fixed, dual.g_group())?;
        for dc in &dual_classes {
            if !dc.lambdas.iter().any(|l| images.contains(l)) {
                continue;
            }
            let r = trivial
                .iter()
                .zip(&dc.trivial)
                .filter(|(a, b)| **a && **b)
                .count();
            let multiplicity = 1i64 << r;
            e.add_term(
                &a_exp - &dc.exponent,
                &a_exp + &dc.exponent,
                sign * multiplicity,
            );
        }
    }
    Ok(e)
}

/// Builds the dual pair and assembles the identity-level E-function on the
/// transpose side; see [`e_level1_from_pair`].
pub fn e_level1_via_mirror(
    f: &InvertiblePolynomial,
    g_group: &DiagonalGroup,
    s_group: &PermGroup,
    cap: u64,
) -> Result<EFunction> {
    check_mirror_assumptions(f, s_group)?;
    let pair = bhht_dual(f, g_group, s_group, cap)?;
    e_level1_from_pair(&pair)
}
