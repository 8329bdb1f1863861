//! The three orbifold invariants of a symmetric invertible singularity,
//! per level and total — Euler characteristic, monodromy zeta function,
//! and E-function — plus the bridge reconstructing the reduced zeta
//! function from the E-function.
//!
//! All computations reduce to two exact primitives:
//! [`chi_fiber_on_locus`] (Euler characteristic of a Milnor fiber inside a
//! joint fixed locus, via the weighted-homogeneous Milnor number) and
//! [`equivariant_omega_character`] (graded trace of a symmetry on the
//! top-form module).  Group quotients enter only through finite averages of
//! these primitives, and every such average is verified to be integral.

mod analyzer;
mod character;

pub(crate) use analyzer::bigint_json;
pub use analyzer::{
    chi_fiber_on_locus, chi_orb_level, chi_orb_level_reduced, chi_orb_total,
    chi_orb_total_reduced, e_function_level, e_function_sector, e_function_total,
    e_prime_function_level, e_prime_function_total, sector_data,
    sector_dimensions_via_character, sector_invariant_dimensions, zeta_from_e, zeta_orb_level,
    zeta_orb_level_reduced, zeta_orb_total, zeta_orb_total_reduced, zeta_sector, Analyzer,
    LevelReport, SectorData,
};
pub use character::{character_trace, equivariant_omega_character};
