//! Exact invariants of Landau–Ginzburg orbifolds of invertible polynomials.
//!
//! The crate models an invertible quasihomogeneous polynomial `f` together
//! with a finite symmetry group built from diagonal scalings and variable
//! permutations, and computes — exactly, over cyclotomic numbers — the
//! orbifold Euler characteristic, the orbifold monodromy zeta function, and
//! the orbifold E-function, each distributed over levels (conjugacy classes
//! of the permutation part). It also constructs transpose dual pairs and
//! verifies the expected level-by-level exchanges of invariants between a
//! pair and its dual.
//!
//! Entry points:
//! - [`polynomial::InvertiblePolynomial::parse`] — parse and classify `f`.
//! - [`symmetry::build_symmetry_data`] — assemble the group `G ⋊ S` and its
//!   conjugacy structure.
//! - [`invariants::Analyzer`] — compute χ, ζ, and E per level.
//! - [`mirror::bhht_dual`] / [`mirror::verify_duality`] — dual pairs and
//!   duality checks.
//! - [`cli::run`] — the `lgorb` command-line interface.

pub mod arith;
pub mod cli;
pub mod error;
pub mod invariants;
pub mod mirror;
pub mod polynomial;
pub mod symmetry;

pub use arith::{CycloPoly, Cyclotomic, EFunction, Phase, Rational, UnitRootSum, ZetaProduct};
pub use cli::{InstanceSpec, SweepConfig};
pub use error::{LgError, Result};
pub use invariants::{Analyzer, LevelReport, SectorData};
pub use mirror::{bhht_dual, e_level1_via_mirror, verify_duality, DualPair, DualityReport, Invariant};
pub use polynomial::{InvertiblePolynomial, QhPolynomial, WeightSystem};
