//! Exact enumeration of odd-order alternating sign matrices with half-turn,
//! quarter-turn and double-diagonal symmetry, classified by the structure at
//! their center.

pub mod census;
pub mod center;
pub mod enumerate;
pub mod error;
pub mod formula;
pub mod matrix;
pub mod report;
pub mod selfcheck;
pub mod symmetry;

pub use census::{
    applicable_conjecture, applicable_orders, run_census, run_census_with, verify_relation,
    BigCount, CensusOptions, CensusRecord, Conjecture, Method, RatioReport,
};
pub use center::{center_structure, forced_center_sign, noncentral_counts, CenterStructure};
pub use enumerate::{
    enumerate_all, enumerate_half_turn, enumerate_symmetric, naive_oracle, ColumnState, EnumConfig,
    Enumerator,
};
pub use error::{AsmError, Axis, Result};
pub use formula::asm_total_formula;
pub use matrix::AsmMatrix;
pub use selfcheck::{selfcheck, CheckOutcome};
pub use symmetry::{
    antitranspose, half_turn, is_symmetric, quarter_turn, transpose, SymmetryClass,
};
