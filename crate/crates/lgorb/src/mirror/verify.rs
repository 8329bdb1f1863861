//! Dual pairs built on the transpose side, and level-by-level verification
//! that the distributed invariants of the two sides agree under the
//! expected sign and variable changes.
//!
//! For a pair on `n` variables with sign `s = (−1)^n`, the checked
//! relations per level (and for the totals) are:
//!
//! * reduced Euler characteristic: `χ̄ = s·χ̄'`,
//! * reduced zeta function: `ζ̄ = (ζ̄')^s` as functions,
//! * E-function: `E(t, t̄) = s·E'(t^{-1}, t̄)` as exact term maps.

use num::BigInt;
use serde_json::{json, Value};

use crate::arith::{EFunction, ZetaProduct};
use crate::error::{LgError, Result};
use crate::invariants::{bigint_json, Analyzer};
use crate::polynomial::InvertiblePolynomial;
use crate::symmetry::{
    build_symmetry_data, dual_subgroup, DiagonalGroup, PermGroup, SymmetryData,
};

/// A polynomial-with-symmetries instance together with its transpose-side
/// counterpart: the transpose polynomial, the annihilator of the diagonal
/// group, and the same permutation group acting on both sides.
pub struct DualPair {
    primal: SymmetryData,
    dual: SymmetryData,
    provenance: Vec<String>,
}

impl DualPair {
    pub fn primal(&self) -> &SymmetryData {
        &self.primal
    }

    pub fn dual(&self) -> &SymmetryData {
        &self.dual
    }

    /// Human-readable notes about how the dual side was constructed.
    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn describe(&self) -> Value {
        let side = |data: &SymmetryData| {
            json!({
                "polynomial": data.f().expression(),
                "variables": data.f().var_names(),
                "g_order": data.g_group().order(),
                "g_structure": data.g_group().structure(),
                "s_order": data.s_group().order(),
                "order": data.order(),
                "classes": data.classes().len(),
                "levels": data.levels().len(),
            })
        };
        json!({
            "primal": side(&self.primal),
            "dual": side(&self.dual),
            "provenance": self.provenance,
        })
    }
}

/// Builds the dual pair of `(f, G⋊S)`: the transpose polynomial with the
/// annihilator group `G̃` (pairing trivially with `G` through the inverse
/// exponent matrix) and the same permutation group `S`.
///
/// The constructed side is revalidated from scratch: `S` must preserve the
/// transpose and normalize `G̃`, the order identity `|G|·|G̃| = |det E|`
/// must hold, and both sides must produce the same list of levels.
pub fn bhht_dual(
    f: &InvertiblePolynomial,
    g_group: &DiagonalGroup,
    s_group: &PermGroup,
    cap: u64,
) -> Result<DualPair> {
    let primal = build_symmetry_data(f, g_group, s_group)?;
    let transpose = f.transpose()?;
    let dual_group = dual_subgroup(f, g_group, cap)?;
    let product =
        BigInt::from(g_group.order() as u64) * BigInt::from(dual_group.order() as u64);
    assert_eq!(
        product,
        num::abs(f.determinant().clone()),
        "group orders must multiply to the determinant of the exponent matrix"
    );
    let dual = build_symmetry_data(&transpose, &dual_group, s_group)?;
    assert_eq!(
        primal.levels().len(),
        dual.levels().len(),
        "both sides carry the same permutation group, hence the same levels"
    );
    for (a, b) in primal.levels().iter().zip(dual.levels()) {
        assert_eq!(
            a.representative, b.representative,
            "levels of the two sides must line up"
        );
    }
    let provenance = vec![
        format!("transpose polynomial: {}", transpose.expression()),
        format!(
            "dual diagonal group: order {}, structure {}",
            dual_group.order(),
            dual_group.structure()
        ),
        format!(
            "shared permutation group: order {}, {} levels",
            s_group.order(),
            primal.levels().len()
        ),
    ];
    Ok(DualPair {
        primal,
        dual,
        provenance,
    })
}

/// The three distributed invariants a duality check can cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Invariant {
    Chi,
    Zeta,
    E,
}

pub const ALL_INVARIANTS: [Invariant; 3] = [Invariant::Chi, Invariant::Zeta, Invariant::E];

/// One Euler-characteristic comparison.  `lhs`/`rhs` are the reduced values
/// (the right-hand side already multiplied by `(−1)^n`), which is the pair
/// the duality equates; the unreduced values are reported alongside with
/// the same sign adjustment.
pub struct ChiCheck {
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub lhs_unreduced: BigInt,
    pub rhs_unreduced: BigInt,
    pub ok: bool,
}

impl ChiCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "lhs": bigint_json(&self.lhs),
            "rhs": bigint_json(&self.rhs),
            "lhs_unreduced": bigint_json(&self.lhs_unreduced),
            "rhs_unreduced": bigint_json(&self.rhs_unreduced),
            "ok": self.ok,
        })
    }
}

/// One reduced-zeta comparison; `rhs` is already inverted when `n` is odd,
/// and `ok` compares the two products as functions.
pub struct ZetaCheck {
    pub lhs: ZetaProduct,
    pub rhs: ZetaProduct,
    pub ok: bool,
}

impl ZetaCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "ok": self.ok,
        })
    }
}

/// One E-function comparison; `rhs` is the dual value with `t` inverted and
/// the sign `(−1)^n` applied, compared exactly term by term.
pub struct ECheck {
    pub lhs: EFunction,
    pub rhs: EFunction,
    pub ok: bool,
}

impl ECheck {
    pub fn to_json(&self) -> Value {
        json!({
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "ok": self.ok,
        })
    }
}

/// The comparisons performed for one level (or for the totals); only the
/// requested invariants are present.
#[derive(Default)]
pub struct ComparisonSet {
    pub chi: Option<ChiCheck>,
    pub zeta: Option<ZetaCheck>,
    pub e: Option<ECheck>,
}

impl ComparisonSet {
    pub fn ok(&self) -> bool {
        self.chi.as_ref().map_or(true, |c| c.ok)
            && self.zeta.as_ref().map_or(true, |c| c.ok)
            && self.e.as_ref().map_or(true, |c| c.ok)
    }

    fn write_json(&self, out: &mut serde_json::Map<String, Value>) {
        if let Some(c) = &self.chi {
            out.insert("chi".into(), c.to_json());
        }
        if let Some(c) = &self.zeta {
            out.insert("zeta".into(), c.to_json());
        }
        if let Some(c) = &self.e {
            out.insert("e".into(), c.to_json());
        }
    }
}

pub struct LevelComparison {
    pub level: String,
    pub checks: ComparisonSet,
}

/// The outcome of a duality verification: one comparison set per selected
/// level plus one for the totals, with the pair description attached.
pub struct DualityReport {
    pub pair: Value,
    pub levels: Vec<LevelComparison>,
    pub totals: ComparisonSet,
}

impl DualityReport {
    pub fn all_ok(&self) -> bool {
        self.levels.iter().all(|l| l.checks.ok()) && self.totals.ok()
    }

    pub fn to_json(&self) -> Value {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .map(|l| {
                let mut obj = serde_json::Map::new();
                obj.insert("level".into(), json!(l.level));
                l.checks.write_json(&mut obj);
                Value::Object(obj)
            })
            .collect();
        let mut totals = serde_json::Map::new();
        self.totals.write_json(&mut totals);
        json!({
            "pair": self.pair,
            "levels": levels,
            "totals": Value::Object(totals),
            "ok": self.all_ok(),
        })
    }
}

fn signed(value: BigInt, sign: i64) -> BigInt {
    if sign < 0 {
        -value
    } else {
        value
    }
}

fn compare_chi(
    lhs: (BigInt, BigInt),
    rhs: (BigInt, BigInt),
    sign: i64,
) -> ChiCheck {
    let (lhs_reduced, lhs_unreduced) = lhs;
    let rhs_reduced = signed(rhs.0, sign);
    let rhs_unreduced = signed(rhs.1, sign);
    ChiCheck {
        ok: lhs_reduced == rhs_reduced,
        lhs: lhs_reduced,
        rhs: rhs_reduced,
        lhs_unreduced,
        rhs_unreduced,
    }
}

fn compare_zeta(lhs: ZetaProduct, rhs: ZetaProduct, sign: i64) -> ZetaCheck {
    let rhs = if sign < 0 { rhs.inv() } else { rhs };
    ZetaCheck {
        ok: lhs.same_function(&rhs),
        lhs,
        rhs,
    }
}

fn compare_e(lhs: EFunction, rhs: EFunction, sign: i64) -> ECheck {
    let rhs = rhs.invert_t().scale(sign);
    ECheck {
        ok: lhs == rhs,
        lhs,
        rhs,
    }
}

/// Verifies the duality relations for the requested invariants (`which`
/// empty means all three), on the named levels (`None` means every level),
/// and always on the totals over all levels.  Mismatches are recorded in
/// the report, not raised; an unknown level name is a parse error.
pub fn verify_duality(
    pair: &DualPair,
    which: &[Invariant],
    levels: Option<&[String]>,
) -> Result<DualityReport> {
    let lhs = Analyzer::new(pair.primal())?;
    let rhs = Analyzer::new(pair.dual())?;
    let n = pair.primal().f().vars();
    let sign: i64 = if n % 2 == 1 { -1 } else { 1 };
    let wanted: Vec<Invariant> = if which.is_empty() {
        ALL_INVARIANTS.to_vec()
    } else {
        let mut w = which.to_vec();
        w.sort();
        w.dedup();
        w
    };
    let level_count = pair.primal().levels().len();
    let selected: Vec<usize> = match levels {
        None => (0..level_count).collect(),
        Some(names) => names
            .iter()
            .map(|name| {
                (0..level_count)
                    .find(|&l| lhs.level_name(l) == *name)
                    .ok_or_else(|| {
                        let available: Vec<String> =
                            (0..level_count).map(|l| lhs.level_name(l)).collect();
                        LgError::Parse(format!(
                            "unknown level {name:?}; available levels: {}",
                            available.join(", ")
                        ))
                    })
            })
            .collect::<Result<_>>()?,
    };
    let mut level_reports = Vec::with_capacity(selected.len());
    for level in selected {
        let mut checks = ComparisonSet::default();
        for inv in &wanted {
            match inv {
                Invariant::Chi => {
                    checks.chi = Some(compare_chi(
                        (lhs.chi_level_reduced(level)?, lhs.chi_level(level)?),
                        (rhs.chi_level_reduced(level)?, rhs.chi_level(level)?),
                        sign,
                    ));
                }
                Invariant::Zeta => {
                    checks.zeta = Some(compare_zeta(
                        lhs.zeta_level_reduced(level)?,
                        rhs.zeta_level_reduced(level)?,
                        sign,
                    ));
                }
                Invariant::E => {
                    checks.e = Some(compare_e(lhs.e_level(level)?, rhs.e_level(level)?, sign));
                }
            }
        }
        level_reports.push(LevelComparison {
            level: lhs.level_name(level),
            checks,
        });
    }
    let mut totals = ComparisonSet::default();
    for inv in &wanted {
        match inv {
            Invariant::Chi => {
                totals.chi = Some(compare_chi(
                    (lhs.chi_total_reduced()?, lhs.chi_total()?),
                    (rhs.chi_total_reduced()?, rhs.chi_total()?),
                    sign,
                ));
            }
            Invariant::Zeta => {
                totals.zeta = Some(compare_zeta(
                    lhs.zeta_total_reduced()?,
                    rhs.zeta_total_reduced()?,
                    sign,
                ));
            }
            Invariant::E => {
                totals.e = Some(compare_e(lhs.e_total()?, rhs.e_total()?, sign));
            }
        }
    }
    Ok(DualityReport {
        pair: pair.describe(),
        levels: level_reports,
        totals,
    })
}

/// A side-by-side exploration report for one level, asserting nothing: on
/// the primal side, the graded dimensions of each sector shifted to their
/// charges; on the dual side, each conjugacy class with its size and the
/// charge of its representative.
pub fn level_correspondence(pair: &DualPair, level: &str) -> Result<Value> {
    let primal = pair.primal();
    let dual = pair.dual();
    let analyzer = Analyzer::new(primal)?;
    let level_count = primal.levels().len();
    let index = (0..level_count)
        .find(|&l| analyzer.level_name(l) == level)
        .ok_or_else(|| LgError::Parse(format!("unknown level {level:?}")))?;
    let n = primal.f().vars();
    let half_n = crate::arith::rat(n as i64, 2);

    let mut primal_out = Vec::new();
    for &ci in &primal.levels()[index].classes {
        let class = &primal.classes()[ci];
        let age = class.representative.age();
        let shift = &age - &half_n;
        let dims: Vec<Value> = analyzer
            .sector_dims(ci)?
            .into_iter()
            .map(|(alpha, dim)| {
                json!({
                    "charge": crate::arith::rational_string(&(&alpha + &shift)),
                    "dim": dim,
                })
            })
            .collect();
        primal_out.push(json!({
            "class": class.representative.to_string(),
            "size": class.members.len(),
            "dims": dims,
        }));
    }

    let mut dual_out = Vec::new();
    for &ci in &dual.levels()[index].classes {
        let class = &dual.classes()[ci];
        let rep = &class.representative;
        let fixed_dim =
            crate::symmetry::fixed_locus(std::slice::from_ref(rep), dual.f().weights())?.dim();
        let charge = rep.age() - crate::arith::rat((n - fixed_dim) as i64, 2);
        dual_out.push(json!({
            "class": rep.to_string(),
            "size": class.members.len(),
            "charge": crate::arith::rational_string(&charge),
        }));
    }

    Ok(json!({
        "level": level,
        "primal": primal_out,
        "dual": dual_out,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Phase};
    use crate::polynomial::polynomial_isomorphic;
    use crate::symmetry::{full_symmetry_group, grading_element, DiagonalElement, Permutation};

    const CAP: u64 = 1_000_000;

    fn perm_group(n: usize, gens: &[&str]) -> PermGroup {
        let parsed = gens
            .iter()
            .map(|g| Permutation::parse(g, n).unwrap())
            .collect();
        PermGroup::closure(n, parsed)
    }

    fn seven_pair() -> DualPair {
        let f =
            InvertiblePolynomial::parse("x1^3*x2 + x2^5*x3 + x3^3*x4 + x4^5*x1", None).unwrap();
        let delta = DiagonalElement::parse_strings(&[
            "1/8".into(),
            "5/8".into(),
            "7/8".into(),
            "3/8".into(),
        ])
        .unwrap();
        let g = DiagonalGroup::cyclic(delta, CAP).unwrap();
        let s = perm_group(4, &["(1 3)(2 4)"]);
        bhht_dual(&f, &g, &s, CAP).unwrap()
    }

    #[test]
    fn worked_loop_pair_has_the_expected_shape() {
        let pair = seven_pair();
        assert_eq!(pair.primal().g_group().order(), 8);
        assert_eq!(pair.dual().g_group().order(), 28);
        assert_eq!(pair.dual().g_group().structure(), "Z_28");
        assert_eq!(pair.primal().levels().len(), 2);
        assert_eq!(pair.dual().levels().len(), 2);
        // The transpose of the length-four loop is again a length-four
        // loop with the exponents traversed the other way.
        assert!(
            polynomial_isomorphic(pair.primal().f(), pair.dual().f()).is_some()
        );
        assert!(!pair.provenance().is_empty());
        let description = pair.describe();
        assert_eq!(description["primal"]["g_order"], 8);
        assert_eq!(description["dual"]["g_order"], 28);
    }

    #[test]
    fn worked_loop_duality_holds_on_both_levels() {
        let pair = seven_pair();
        let report = verify_duality(&pair, &[], None).unwrap();
        assert!(report.all_ok());
        assert_eq!(report.levels.len(), 2);

        let identity = &report.levels[0];
        assert_eq!(identity.level, "1");
        let chi = identity.checks.chi.as_ref().unwrap();
        assert_eq!(chi.lhs, BigInt::from(-26));
        assert_eq!(chi.rhs, BigInt::from(-26));
        // The unreduced values differ: on the primal side eight elements
        // over the swap level have two-dimensional fixed loci, on the dual
        // side only four of twenty-eight do, and the class counts (5
        // against 21) absorb the difference after reduction.
        assert_eq!(chi.lhs_unreduced, BigInt::from(-21));
        assert_eq!(chi.rhs_unreduced, BigInt::from(-5));

        let swap = &report.levels[1];
        assert_eq!(swap.level, "(1 3)(2 4)");
        let chi = swap.checks.chi.as_ref().unwrap();
        assert_eq!(chi.lhs, BigInt::from(-16));
        assert_eq!(chi.rhs, BigInt::from(-16));
        assert_eq!(chi.lhs_unreduced, BigInt::from(-14));
        assert_eq!(chi.rhs_unreduced, BigInt::from(-2));

        let totals = report.totals.chi.as_ref().unwrap();
        assert_eq!(totals.lhs, BigInt::from(-42));
        assert_eq!(totals.rhs, BigInt::from(-42));
        assert!(report.totals.zeta.as_ref().unwrap().ok);
        assert!(report.totals.e.as_ref().unwrap().ok);
    }

    #[test]
    fn quartic_fermat_with_a_three_cycle_matches_in_chi_and_zeta() {
        let f = InvertiblePolynomial::parse("x1^4 + x2^4 + x3^4 + x4^4", None).unwrap();
        let g = DiagonalGroup::cyclic(grading_element(&f), CAP).unwrap();
        let s = perm_group(4, &["(1 2 3)"]);
        let pair = bhht_dual(&f, &g, &s, CAP).unwrap();
        let report =
            verify_duality(&pair, &[Invariant::Chi, Invariant::Zeta], None).unwrap();
        assert!(report.all_ok());
        for level in &report.levels {
            assert!(level.checks.chi.is_some());
            assert!(level.checks.zeta.is_some());
            assert!(level.checks.e.is_none());
        }
    }

    #[test]
    fn quintic_fermat_with_two_swaps_matches_in_chi_and_zeta() {
        let f =
            InvertiblePolynomial::parse("x1^5 + x2^5 + x3^5 + x4^5 + x5^5", None).unwrap();
        let g = DiagonalGroup::cyclic(grading_element(&f), CAP).unwrap();
        let s = perm_group(5, &["(1 2)(3 4)"]);
        let pair = bhht_dual(&f, &g, &s, CAP).unwrap();
        let report =
            verify_duality(&pair, &[Invariant::Chi, Invariant::Zeta], None).unwrap();
        assert!(report.all_ok());
    }

    #[test]
    fn odd_loop_matches_in_all_three_for_every_diagonal_subgroup() {
        let f = InvertiblePolynomial::parse("x1^2*x2 + x2^2*x3 + x3^2*x1", None).unwrap();
        let s = perm_group(3, &["(1 2 3)"]);
        let full = full_symmetry_group(&f, CAP).unwrap();
        for g in full.subgroups() {
            let pair = bhht_dual(&f, &g, &s, CAP).unwrap();
            let report = verify_duality(&pair, &[], None).unwrap();
            assert!(report.all_ok(), "failed for subgroup of order {}", g.order());
        }
    }

    #[test]
    fn tiny_sum_with_trivial_groups_matches_in_all_three() {
        let f = InvertiblePolynomial::parse("x^3 + y^3", None).unwrap();
        let g = DiagonalGroup::trivial(2);
        let s = PermGroup::trivial(2);
        let pair = bhht_dual(&f, &g, &s, CAP).unwrap();
        let report = verify_duality(&pair, &[], None).unwrap();
        assert!(report.all_ok());
    }

    #[test]
    fn report_json_follows_the_schema_and_levels_can_be_selected() {
        let pair = seven_pair();
        let selection = vec!["(1 3)(2 4)".to_string()];
        let report =
            verify_duality(&pair, &[Invariant::Chi], Some(&selection)).unwrap();
        assert_eq!(report.levels.len(), 1);
        let doc = report.to_json();
        assert_eq!(doc["levels"][0]["level"], "(1 3)(2 4)");
        assert_eq!(doc["levels"][0]["chi"]["ok"], true);
        assert!(doc["levels"][0].get("zeta").is_none());
        assert_eq!(doc["ok"], true);
        assert!(doc["pair"]["provenance"].is_array());
        // Totals always cover every level, even under a selection.
        assert_eq!(doc["totals"]["chi"]["lhs"], -42);

        let bad = vec!["(1 2)".to_string()];
        match verify_duality(&pair, &[], Some(&bad)) {
            Err(LgError::Parse(msg)) => assert!(msg.contains("available levels")),
            Err(other) => panic!("expected a parse error, got {other:?}"),
            Ok(_) => panic!("expected a parse error, got a report"),
        }
    }

    #[test]
    fn worked_loop_swap_level_correspondence_lines_up() {
        let pair = seven_pair();
        let doc = level_correspondence(&pair, "(1 3)(2 4)").unwrap();
        let primal = doc["primal"].as_array().unwrap();
        assert_eq!(primal.len(), 2);
        let expected: std::collections::BTreeMap<String, u64> = [
            ("-4/7", 1),
            ("-2/7", 1),
            ("-1/7", 1),
            ("0", 2),
            ("1/7", 1),
            ("2/7", 1),
            ("4/7", 1),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        // Each of the two classes over the level is closed under inversion,
        // so each carries the full eight-form charge distribution.
        for entry in primal {
            let mut charges = std::collections::BTreeMap::new();
            for d in entry["dims"].as_array().unwrap() {
                *charges
                    .entry(d["charge"].as_str().unwrap().to_string())
                    .or_insert(0u64) += d["dim"].as_u64().unwrap();
            }
            assert_eq!(charges, expected, "class {}", entry["class"]);
        }

        let dual = doc["dual"].as_array().unwrap();
        assert_eq!(dual.len(), 14);
        let zero_classes: Vec<&Value> = dual
            .iter()
            .filter(|c| c["charge"] == "0")
            .collect();
        assert_eq!(zero_classes.len(), 2);
        for class in zero_classes {
            assert_eq!(class["size"], 2);
        }
    }

    #[test]
    fn unreduced_chi_alone_does_not_match_across_the_worked_pair() {
        // The identity-level unreduced values differ (−21 against −5);
        // only the reduced values are equated by the duality.  This guards
        // the reduction convention in `compare_chi`.
        let pair = seven_pair();
        let report = verify_duality(&pair, &[Invariant::Chi], None).unwrap();
        let chi = report.levels[0].checks.chi.as_ref().unwrap();
        assert_ne!(chi.lhs_unreduced, chi.rhs_unreduced);
        assert!(chi.ok);
    }

    #[test]
    fn phases_of_the_dual_grading_match_the_primal_weights() {
        // Sanity anchor for the transpose construction: the grading element
        // of the dual side is the weight vector of the transpose.
        let pair = seven_pair();
        let expected: Vec<Phase> = [rat(2, 7), rat(1, 7), rat(2, 7), rat(1, 7)]
            .into_iter()
            .map(Phase::new)
            .collect();
        assert_eq!(pair.dual().grading().phases(), expected.as_slice());
    }
}
