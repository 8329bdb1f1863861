//! The JSON documents the command-line interface reads and writes: one
//! instance (a polynomial with its two symmetry groups) and one sweep
//! configuration, plus the translation between documents and live objects.
//!
//! All rational values travel as exact `"p/q"` strings and permutations as
//! cycle notation (`"(1 3)(2 4)"`), so documents are diffable and can serve
//! as golden files.

use serde::{Deserialize, Serialize};

use crate::error::{LgError, Result};
use crate::mirror::DualPair;
use crate::polynomial::InvertiblePolynomial;
use crate::symmetry::{
    dual_subgroup, full_symmetry_group, grading_element, sl_subgroup, DiagonalElement,
    DiagonalGroup, PermGroup, Permutation,
};

/// How the diagonal group of an instance is specified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    /// The trivial group.
    #[serde(rename = "trivial")]
    Trivial,
    /// Every diagonal symmetry of the polynomial.
    #[serde(rename = "full")]
    Full,
    /// The cyclic group generated by the grading element.
    #[serde(rename = "J")]
    J,
    /// The diagonal symmetries of integer phase sum (determinant one).
    #[serde(rename = "SL")]
    Sl,
    /// The closure of an explicit list of phase vectors.
    #[serde(rename = "generated")]
    Generated,
}

/// The `G` field of an instance document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupKind,
    /// Phase vectors generating the group, each phase a `"p/q"` string;
    /// only meaningful (and then required) for kind `"generated"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<String>>>,
}

/// The `S` field of an instance document: permutation generators in cycle
/// notation.  An absent field or an empty list means the trivial group.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PermSpec {
    #[serde(default)]
    pub generators: Vec<String>,
}

/// One instance document: a polynomial expression, an optional explicit
/// variable order, a diagonal group `G`, and a permutation group `S`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub polynomial: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    #[serde(rename = "G")]
    pub g: GroupSpec,
    #[serde(rename = "S", default)]
    pub s: PermSpec,
}

impl InstanceSpec {
    pub fn from_json(text: &str) -> Result<InstanceSpec> {
        serde_json::from_str(text)
            .map_err(|e| LgError::Parse(format!("instance document: {e}")))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("instance documents serialize")
    }

    /// Parses the polynomial and materializes both groups.  `cap` bounds
    /// every group enumeration.
    pub fn build(&self, cap: u64) -> Result<(InvertiblePolynomial, DiagonalGroup, PermGroup)> {
        let f = InvertiblePolynomial::parse(&self.polynomial, self.variables.as_deref())?;
        let n = f.vars();
        if self.g.kind != GroupKind::Generated && self.g.generators.is_some() {
            return Err(LgError::Parse(format!(
                "G.generators is only meaningful for kind \"generated\", not {:?}",
                self.g.kind
            )));
        }
        let g_group = match self.g.kind {
            GroupKind::Trivial => DiagonalGroup::trivial(n),
            GroupKind::Full => full_symmetry_group(&f, cap)?,
            GroupKind::J => DiagonalGroup::cyclic(grading_element(&f), cap)?,
            GroupKind::Sl => sl_subgroup(&full_symmetry_group(&f, cap)?),
            GroupKind::Generated => {
                let listed = self.g.generators.as_ref().ok_or_else(|| {
                    LgError::Parse("G of kind \"generated\" requires a generators list".into())
                })?;
                let parsed = listed
                    .iter()
                    .map(|parts| DiagonalElement::parse_strings(parts))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(bad) = parsed.iter().find(|e| e.n() != n) {
                    return Err(LgError::IncompatibleLengths(format!(
                        "generator {bad} has {} phases for {n} variables",
                        bad.n()
                    )));
                }
                DiagonalGroup::closure(n, parsed, cap)?
            }
        };
        let s_gens = self
            .s
            .generators
            .iter()
            .map(|text| Permutation::parse(text, n))
            .collect::<Result<Vec<_>>>()?;
        let s_group = PermGroup::closure(n, s_gens);
        Ok((f, g_group, s_group))
    }
}

/// A deterministic small generating set of a permutation group, depending
/// only on the element set: greedily adjoin the first element (in sorted
/// order) outside the subgroup generated so far.
fn minimal_perm_generators(group: &PermGroup) -> Vec<Permutation> {
    let mut generators: Vec<Permutation> = Vec::new();
    let mut have = PermGroup::trivial(group.n());
    for p in group.elements() {
        if !have.contains(p) {
            generators.push(p.clone());
            have = PermGroup::closure(group.n(), generators.clone());
        }
    }
    generators
}

/// The canonical document for a concrete `(f, G, S)`: the polynomial
/// expression with its variable order, `G` as an explicit generated group,
/// and `S` by a minimal generating set.  Equal groups always serialize to
/// identical documents because both generating sets are re-derived from the
/// sorted element lists.
pub fn explicit_spec(
    f: &InvertiblePolynomial,
    g_group: &DiagonalGroup,
    s_group: &PermGroup,
) -> InstanceSpec {
    let canonical_g = DiagonalGroup::from_elements(g_group.n(), g_group.elements().to_vec());
    let generators: Vec<Vec<String>> = canonical_g
        .generators()
        .iter()
        .map(|e| e.phases().iter().map(|p| p.to_string()).collect())
        .collect();
    InstanceSpec {
        polynomial: f.expression(),
        variables: Some(f.var_names().to_vec()),
        g: GroupSpec {
            kind: GroupKind::Generated,
            generators: Some(generators),
        },
        s: PermSpec {
            generators: minimal_perm_generators(s_group)
                .iter()
                .map(|p| p.to_string())
                .collect(),
        },
    }
}

/// The instance document of the transpose side of a validated pair.
pub fn dual_spec(pair: &DualPair) -> InstanceSpec {
    explicit_spec(
        pair.dual().f(),
        pair.dual().g_group(),
        pair.dual().s_group(),
    )
}

/// The transpose-side document computed directly from `(f, G, S)`, without
/// building the dual symmetry data (used to embed the dual in analysis
/// output cheaply).
pub fn dual_spec_of(
    f: &InvertiblePolynomial,
    g_group: &DiagonalGroup,
    s_group: &PermGroup,
    cap: u64,
) -> Result<InstanceSpec> {
    let transpose = f.transpose()?;
    let dual_group = dual_subgroup(f, g_group, cap)?;
    Ok(explicit_spec(&transpose, &dual_group, s_group))
}

/// The sweep configuration document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Total number of variables of an enumerated polynomial.
    pub max_vars: usize,
    /// Largest exponent appearing in any atomic block.
    pub max_exponent: u64,
    /// Largest diagonal group order included as an instance.
    pub max_group_order: u64,
    /// Keep only permutation groups whose subgroups all have an orbit count
    /// of the parity of the variable count.
    #[serde(default)]
    pub require_pc: bool,
    /// Results file (JSON lines); the done-log lives beside it at
    /// `<output_path>.done`.
    pub output_path: String,
    /// Skip instances whose hash is already in the done-log and append to
    /// the existing results file instead of truncating it.
    #[serde(default)]
    pub resume: bool,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<SweepConfig> {
        let config: SweepConfig = serde_json::from_str(text)
            .map_err(|e| LgError::Parse(format!("sweep configuration: {e}")))?;
        if config.max_vars == 0 || config.max_exponent < 2 || config.max_group_order == 0 {
            return Err(LgError::Parse(format!(
                "sweep bounds must be positive (with max_exponent at least 2): \
                 max_vars {}, max_exponent {}, max_group_order {}",
                config.max_vars, config.max_exponent, config.max_group_order
            )));
        }
        if config.output_path.is_empty() {
            return Err(LgError::Parse("sweep output_path must be non-empty".into()));
        }
        Ok(config)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("sweep configurations serialize")
    }

    /// Path of the done-log holding one instance hash per line.
    pub fn done_path(&self) -> String {
        format!("{}.done", self.output_path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u64 = 1_000_000;

    #[test]
    fn builds_each_group_kind() {
        let base = |g: GroupSpec| InstanceSpec {
            polynomial: "x1^3 + x2^3".into(),
            variables: None,
            g,
            s: PermSpec::default(),
        };
        let order_of = |kind: GroupKind, generators: Option<Vec<Vec<String>>>| {
            let (_, g, _) = base(GroupSpec { kind, generators }).build(CAP).unwrap();
            g.order()
        };
        assert_eq!(order_of(GroupKind::Trivial, None), 1);
        assert_eq!(order_of(GroupKind::Full, None), 9);
        assert_eq!(order_of(GroupKind::J, None), 3);
        // Phase sums p/3 + q/3 are integral on the diagonal Z_3.
        assert_eq!(order_of(GroupKind::Sl, None), 3);
        assert_eq!(
            order_of(
                GroupKind::Generated,
                Some(vec![vec!["1/3".into(), "2/3".into()]])
            ),
            3
        );
    }

    #[test]
    fn document_round_trips_through_json() {
        let text = r#"{
            "polynomial": "x1^3*x2 + x2^5*x3 + x3^3*x4 + x4^5*x1",
            "G": {"kind": "generated", "generators": [["1/8","5/8","7/8","3/8"]]},
            "S": {"generators": ["(1 3)(2 4)"]}
        }"#;
        let spec = InstanceSpec::from_json(text).unwrap();
        let (f, g, s) = spec.build(CAP).unwrap();
        assert_eq!(f.vars(), 4);
        assert_eq!(g.order(), 8);
        assert_eq!(s.order(), 2);
        let again = InstanceSpec::from_json(&spec.to_json().to_string()).unwrap();
        let (f2, g2, s2) = again.build(CAP).unwrap();
        assert_eq!(f2.expression(), f.expression());
        assert_eq!(g2.elements(), g.elements());
        assert_eq!(s2.elements(), s.elements());
    }

    #[test]
    fn malformed_documents_are_parse_errors() {
        let bad = [
            "not json",
            r#"{"polynomial": "x1^3"}"#,
            r#"{"polynomial": "x1^3", "G": {"kind": "generated"}}"#,
            r#"{"polynomial": "x1^3", "G": {"kind": "banana"}}"#,
            r#"{"polynomial": "x1^3", "G": {"kind": "trivial",
                "generators": [["1/3"]]}}"#,
        ];
        for text in bad {
            let err = InstanceSpec::from_json(text)
                .and_then(|spec| spec.build(CAP).map(|_| ()));
            match err {
                Err(LgError::Parse(_)) => {}
                other => panic!("expected a parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn explicit_spec_is_canonical_in_the_group_presentation() {
        let f = InvertiblePolynomial::parse("x1^2 + x2^2 + x3^2", None).unwrap();
        let g_a = full_symmetry_group(&f, CAP).unwrap();
        let g_b = DiagonalGroup::from_elements(3, g_a.elements().to_vec());
        let s_a = PermGroup::closure(
            3,
            vec![
                Permutation::parse("(1 2)", 3).unwrap(),
                Permutation::parse("(1 2 3)", 3).unwrap(),
            ],
        );
        let s_b = PermGroup::from_elements(3, s_a.elements().to_vec());
        let doc_a = explicit_spec(&f, &g_a, &s_a).to_json().to_string();
        let doc_b = explicit_spec(&f, &g_b, &s_b).to_json().to_string();
        assert_eq!(doc_a, doc_b);
    }

    #[test]
    fn sweep_config_validates_bounds() {
        let good = r#"{"max_vars": 2, "max_exponent": 3, "max_group_order": 20,
                       "output_path": "out.jsonl"}"#;
        let config = SweepConfig::from_json(good).unwrap();
        assert!(!config.require_pc);
        assert!(!config.resume);
        assert_eq!(config.done_path(), "out.jsonl.done");

        let bad = r#"{"max_vars": 0, "max_exponent": 3, "max_group_order": 20,
                      "output_path": "out.jsonl"}"#;
        assert!(matches!(
            SweepConfig::from_json(bad),
            Err(LgError::Parse(_))
        ));
    }
}
