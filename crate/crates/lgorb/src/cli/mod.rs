//! The `lgorb` command-line interface.
//!
//! Four subcommands: `analyze` prints the per-level and total invariants of
//! one instance, `dual` prints the transpose-side instance document,
//! `verify` checks the level-by-level duality relations, and `sweep`
//! enumerates small instances from a configuration and verifies each one.
//!
//! Exit codes: 0 success, 2 parse errors (malformed documents, flags, or
//! unknown level names), 3 validation errors (elements that are not
//! symmetries, degenerate polynomials, oversized groups), 4 duality
//! mismatches, 5 internal integrality tripwires.  The environment variable
//! `LGORB_GROUP_CAP` overrides the group-enumeration cap (default one
//! million elements).

mod spec;
mod sweep;

pub use spec::{dual_spec, dual_spec_of, explicit_spec, GroupKind, GroupSpec, InstanceSpec,
               PermSpec, SweepConfig};
pub use sweep::{enumerate_polynomials, run_sweep, SweepOutcome};

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::arith::rational_string;
use crate::error::{LgError, Result};
use crate::invariants::{bigint_json, Analyzer};
use crate::mirror::{bhht_dual, verify_duality, ComparisonSet, DualityReport, Invariant};
use crate::symmetry::build_symmetry_data;

/// Default bound on any group enumeration.
pub const DEFAULT_GROUP_CAP: u64 = 1_000_000;

/// The group-enumeration cap: `LGORB_GROUP_CAP` when set, else the default.
fn group_cap() -> Result<u64> {
    match std::env::var("LGORB_GROUP_CAP") {
        Ok(text) => match text.trim().parse::<u64>() {
            Ok(cap) if cap > 0 => Ok(cap),
            _ => Err(LgError::Parse(format!(
                "LGORB_GROUP_CAP must be a positive integer, got {text:?}"
            ))),
        },
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_GROUP_CAP),
        Err(std::env::VarError::NotUnicode(_)) => Err(LgError::Parse(
            "LGORB_GROUP_CAP is not valid unicode".into(),
        )),
    }
}

#[derive(Parser)]
#[command(
    name = "lgorb",
    version,
    about = "Exact orbifold invariants of invertible polynomials with symmetry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute per-level and total invariants of one instance document.
    Analyze {
        /// Instance document (JSON).
        file: PathBuf,
        /// Restrict the per-level listing to one level, named by its
        /// minimal permutation in cycle notation ("1" for the identity
        /// level).  Totals still cover every level.
        #[arg(long)]
        level: Option<String>,
        /// Comma-separated subset of chi, zeta, e (default: all three).
        #[arg(long, value_delimiter = ',')]
        invariants: Vec<String>,
        /// Print the reduced chi and zeta values in the text listing
        /// (JSON output always carries both forms).
        #[arg(long)]
        reduced: bool,
        /// Also report the unsigned E-function variant, in which every
        /// sector contributes with a positive sign.
        #[arg(long)]
        eprime: bool,
        /// Emit one JSON document instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Print the transpose-side dual of an instance as an instance document.
    Dual {
        /// Instance document (JSON).
        file: PathBuf,
    },
    /// Verify the level-by-level duality relations between an instance and
    /// its transpose-side dual.  Exits 0 when every checked relation holds,
    /// 4 otherwise.
    Verify {
        /// Instance document (JSON).
        file: PathBuf,
        /// "all" or a comma-separated list of level names.
        #[arg(long, default_value = "all")]
        levels: String,
        /// Comma-separated subset of chi, zeta, e (default: all three).
        #[arg(long, value_delimiter = ',')]
        invariants: Vec<String>,
        /// Emit the full comparison report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Enumerate small instances per a sweep configuration document,
    /// verify each, and append one JSON line per instance to the results
    /// file.  Exits 4 if any recorded instance violated a relation.
    Sweep {
        /// Sweep configuration (JSON).
        config: PathBuf,
    },
}

/// Parses the arguments and runs the selected subcommand, returning the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Analyze {
            file,
            level,
            invariants,
            reduced,
            eprime,
            json,
        } => cmd_analyze(&file, level.as_deref(), &invariants, reduced, eprime, json),
        Command::Dual { file } => cmd_dual(&file),
        Command::Verify {
            file,
            levels,
            invariants,
            json,
        } => cmd_verify(&file, &levels, &invariants, json),
        Command::Sweep { config } => cmd_sweep(&config),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("lgorb: {err}");
            err.exit_code()
        }
    }
}

fn read_instance(path: &Path) -> Result<InstanceSpec> {
    InstanceSpec::from_json(&std::fs::read_to_string(path)?)
}

fn parse_invariants(names: &[String]) -> Result<Vec<Invariant>> {
    let mut out: Vec<Invariant> = Vec::new();
    for name in names {
        out.push(match name.trim() {
            "chi" => Invariant::Chi,
            "zeta" => Invariant::Zeta,
            "e" => Invariant::E,
            other => {
                return Err(LgError::Parse(format!(
                    "unknown invariant {other:?}; expected chi, zeta, e"
                )))
            }
        });
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        out = crate::mirror::ALL_INVARIANTS.to_vec();
    }
    Ok(out)
}

fn find_level(analyzer: &Analyzer, name: &str) -> Result<usize> {
    let count = analyzer.data().levels().len();
    (0..count)
        .find(|&l| analyzer.level_name(l) == name)
        .ok_or_else(|| {
            let available: Vec<String> = (0..count).map(|l| analyzer.level_name(l)).collect();
            LgError::Parse(format!(
                "unknown level {name:?}; available levels: {}",
                available.join(", ")
            ))
        })
}

// ----- analyze --------------------------------------------------------------

struct LevelValues {
    name: String,
    classes: usize,
    chi: Option<(num::BigInt, num::BigInt)>,
    zeta: Option<(crate::arith::ZetaProduct, crate::arith::ZetaProduct)>,
    e: Option<crate::arith::EFunction>,
    e_prime: Option<crate::arith::EFunction>,
}

impl LevelValues {
    fn collect(
        analyzer: &Analyzer,
        level: Option<usize>,
        wanted: &[Invariant],
        eprime: bool,
    ) -> Result<LevelValues> {
        let (name, classes) = match level {
            Some(l) => (
                analyzer.level_name(l),
                analyzer.data().levels()[l].classes.len(),
            ),
            None => ("totals".to_string(), analyzer.data().classes().len()),
        };
        let mut values = LevelValues {
            name,
            classes,
            chi: None,
            zeta: None,
            e: None,
            e_prime: None,
        };
        for inv in wanted {
            match inv {
                Invariant::Chi => {
                    values.chi = Some(match level {
                        Some(l) => (analyzer.chi_level(l)?, analyzer.chi_level_reduced(l)?),
                        None => (analyzer.chi_total()?, analyzer.chi_total_reduced()?),
                    });
                }
                Invariant::Zeta => {
                    values.zeta = Some(match level {
                        Some(l) => (analyzer.zeta_level(l)?, analyzer.zeta_level_reduced(l)?),
                        None => (analyzer.zeta_total()?, analyzer.zeta_total_reduced()?),
                    });
                }
                Invariant::E => {
                    values.e = Some(match level {
                        Some(l) => analyzer.e_level(l)?,
                        None => analyzer.e_total()?,
                    });
                    if eprime {
                        values.e_prime = Some(match level {
                            Some(l) => analyzer.e_prime_level(l)?,
                            None => analyzer.e_prime_total()?,
                        });
                    }
                }
            }
        }
        Ok(values)
    }

    fn to_json(&self, is_level: bool) -> Value {
        let mut obj = serde_json::Map::new();
        if is_level {
            obj.insert("level".into(), json!(self.name));
        }
        obj.insert("classes".into(), json!(self.classes));
        if let Some((chi, chi_reduced)) = &self.chi {
            obj.insert("chi".into(), bigint_json(chi));
            obj.insert("chi_reduced".into(), bigint_json(chi_reduced));
        }
        if let Some((zeta, zeta_reduced)) = &self.zeta {
            obj.insert("zeta".into(), zeta.to_json());
            obj.insert("zeta_reduced".into(), zeta_reduced.to_json());
        }
        if let Some(e) = &self.e {
            obj.insert("e".into(), e.to_json());
        }
        if let Some(e_prime) = &self.e_prime {
            obj.insert("e_prime".into(), e_prime.to_json());
        }
        Value::Object(obj)
    }

    fn print_text(&self, reduced: bool) {
        println!("{} ({} classes)", self.name, self.classes);
        if let Some((chi, chi_reduced)) = &self.chi {
            if reduced {
                println!("  chi_reduced  = {chi_reduced}");
            } else {
                println!("  chi          = {chi}");
            }
        }
        if let Some((zeta, zeta_reduced)) = &self.zeta {
            if reduced {
                println!("  zeta_reduced = {zeta_reduced}");
            } else {
                println!("  zeta         = {zeta}");
            }
        }
        if let Some(e) = &self.e {
            println!("  e            = {e}");
        }
        if let Some(e_prime) = &self.e_prime {
            println!("  e_prime      = {e_prime}");
        }
    }
}

fn cmd_analyze(
    file: &Path,
    level: Option<&str>,
    invariants: &[String],
    reduced: bool,
    eprime: bool,
    json_output: bool,
) -> Result<i32> {
    let cap = group_cap()?;
    let instance = read_instance(file)?;
    let (f, g_group, s_group) = instance.build(cap)?;
    let data = build_symmetry_data(&f, &g_group, &s_group)?;
    let analyzer = Analyzer::new(&data)?;
    let wanted = parse_invariants(invariants)?;
    let selected: Vec<usize> = match level {
        Some(name) => vec![find_level(&analyzer, name)?],
        None => (0..data.levels().len()).collect(),
    };
    let per_level: Vec<LevelValues> = selected
        .iter()
        .map(|&l| LevelValues::collect(&analyzer, Some(l), &wanted, eprime))
        .collect::<Result<_>>()?;
    let totals = LevelValues::collect(&analyzer, None, &wanted, eprime)?;

    if json_output {
        // The dual document is advisory here: an instance can be analyzed
        // even when its transpose side does not exist (one-sided chains)
        // or exceeds the group cap.
        let (dual, dual_error) = match dual_spec_of(&f, &g_group, &s_group, cap) {
            Ok(spec) => (spec.to_json(), None),
            Err(e) => (Value::Null, Some(e.to_string())),
        };
        let weights: Vec<String> = f.weights().q().iter().map(|q| rational_string(q)).collect();
        let mut doc = json!({
            "instance": instance.to_json(),
            "polynomial": f.expression(),
            "variables": f.var_names(),
            "weights": weights,
            "g_order": g_group.order(),
            "g_structure": g_group.structure(),
            "s_order": s_group.order(),
            "order": data.order(),
            "classes": data.classes().len(),
            "levels": per_level.iter().map(|v| v.to_json(true)).collect::<Vec<_>>(),
            "totals": totals.to_json(false),
            "dual": dual,
        });
        if let Some(reason) = dual_error {
            doc["dual_error"] = json!(reason);
        }
        println!("{}", serde_json::to_string_pretty(&doc).expect("valid json"));
    } else {
        println!("polynomial: {}", f.expression());
        println!("variables:  {}", f.var_names().join(" "));
        let weights: Vec<String> = f.weights().q().iter().map(|q| rational_string(q)).collect();
        println!("weights:    {}", weights.join(" "));
        println!(
            "group:      |G| = {} ({}), |S| = {}, product order {}, {} classes over {} levels",
            g_group.order(),
            g_group.structure(),
            s_group.order(),
            data.order(),
            data.classes().len(),
            data.levels().len()
        );
        println!();
        for values in &per_level {
            values.print_text(reduced);
        }
        totals.print_text(reduced);
    }
    Ok(0)
}

// ----- dual -----------------------------------------------------------------

fn cmd_dual(file: &Path) -> Result<i32> {
    let cap = group_cap()?;
    let instance = read_instance(file)?;
    let (f, g_group, s_group) = instance.build(cap)?;
    let pair = bhht_dual(&f, &g_group, &s_group, cap)?;
    for note in pair.provenance() {
        eprintln!("note: {note}");
    }
    let doc = dual_spec(&pair).to_json();
    println!("{}", serde_json::to_string_pretty(&doc).expect("valid json"));
    Ok(0)
}

// ----- verify ---------------------------------------------------------------

fn checks_line(checks: &ComparisonSet) -> String {
    let mut parts: Vec<String> = Vec::new();
    if let Some(c) = &checks.chi {
        parts.push(format!(
            "chi {}",
            if c.ok { "ok" } else { "MISMATCH" }
        ));
    }
    if let Some(c) = &checks.zeta {
        parts.push(format!(
            "zeta {}",
            if c.ok { "ok" } else { "MISMATCH" }
        ));
    }
    if let Some(c) = &checks.e {
        parts.push(format!("e {}", if c.ok { "ok" } else { "MISMATCH" }));
    }
    parts.join("   ")
}

fn print_verify_text(report: &DualityReport) {
    println!(
        "primal: {}",
        report.pair["primal"]["polynomial"].as_str().unwrap_or("?")
    );
    println!(
        "dual:   {}",
        report.pair["dual"]["polynomial"].as_str().unwrap_or("?")
    );
    let width = report
        .levels
        .iter()
        .map(|l| l.level.len())
        .chain(std::iter::once("totals".len()))
        .max()
        .unwrap_or(6);
    for level in &report.levels {
        println!(
            "level {:width$}   {}",
            level.level,
            checks_line(&level.checks),
            width = width
        );
    }
    println!(
        "{:width$}         {}",
        "totals",
        checks_line(&report.totals),
        width = width
    );
    if report.all_ok() {
        println!("all checked duality relations hold");
    } else {
        println!("duality verification FAILED");
    }
}

fn cmd_verify(file: &Path, levels: &str, invariants: &[String], json_output: bool) -> Result<i32> {
    let cap = group_cap()?;
    let instance = read_instance(file)?;
    let (f, g_group, s_group) = instance.build(cap)?;
    let pair = bhht_dual(&f, &g_group, &s_group, cap)?;
    let wanted = parse_invariants(invariants)?;
    let selection: Option<Vec<String>> = if levels.trim() == "all" {
        None
    } else {
        Some(
            levels
                .split(',')
                .map(|name| name.trim().to_string())
                .collect(),
        )
    };
    let report = verify_duality(&pair, &wanted, selection.as_deref())?;
    if json_output {
        println!(
            "{}",
            serde_json::to_string_pretty(&report.to_json()).expect("valid json")
        );
    } else {
        print_verify_text(&report);
    }
    Ok(if report.all_ok() { 0 } else { 4 })
}

// ----- sweep ----------------------------------------------------------------

fn cmd_sweep(config_path: &Path) -> Result<i32> {
    let cap = group_cap()?;
    let config = SweepConfig::from_json(&std::fs::read_to_string(config_path)?)?;
    let mut progress = std::io::stderr();
    let outcome = run_sweep(&config, cap, &mut progress)?;
    println!(
        "swept {} instances ({} skipped via done-log), {} duality violations",
        outcome.instances, outcome.skipped, outcome.violations
    );
    println!("results: {}", config.output_path);
    Ok(if outcome.violations > 0 { 4 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_lists_parse_and_default() {
        assert_eq!(
            parse_invariants(&[]).unwrap(),
            vec![Invariant::Chi, Invariant::Zeta, Invariant::E]
        );
        assert_eq!(
            parse_invariants(&["zeta".into(), "chi".into(), "zeta".into()]).unwrap(),
            vec![Invariant::Chi, Invariant::Zeta]
        );
        assert!(matches!(
            parse_invariants(&["euler".into()]),
            Err(LgError::Parse(_))
        ));
    }
}
