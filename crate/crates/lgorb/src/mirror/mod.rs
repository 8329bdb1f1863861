//! Transpose-side duality: dual pairs `(f, G⋊S)` against
//! `(f^T, G̃⋊S)`, verification that the distributed invariants of the two
//! sides agree level by level, and an independent construction of the
//! identity-level E-function from matched pairs of conjugacy classes.

mod map;
mod verify;

pub use map::{check_mirror_assumptions, e_level1_from_pair, e_level1_via_mirror, mirror_map};
pub use verify::{
    bhht_dual, level_correspondence, verify_duality, ChiCheck, ComparisonSet, DualPair,
    DualityReport, ECheck, Invariant, LevelComparison, ZetaCheck, ALL_INVARIANTS,
};
