//! Symmetry groups of invertible polynomials: diagonal groups and their
//! duals, coordinate permutations, the semidirect product with its
//! conjugacy classes and levels, fixed loci, and restrictions.

pub mod data;
pub mod diagonal;
pub mod element;
pub mod locus;
pub mod permutation;

pub use data::{
    build_symmetry_data, permutation_preserves, permutation_symmetries, ConjugacyClass, Level,
    SymmetryData,
};
pub use diagonal::{
    dual_pairing, dual_subgroup, full_symmetry_group, grading_element, preserves_polynomial,
    sl_subgroup, DiagonalElement, DiagonalGroup,
};
pub use element::{ElementKey, MonomialElement};
pub use locus::{element_eigenvalues_on_locus, fixed_locus, restrict_polynomial, FixedLocus};
pub use permutation::{all_permutations, PermGroup, Permutation};
