use std::fmt;

use thiserror::Error;

use crate::symmetry::SymmetryClass;

/// Which family of lines a validation failure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Row,
    Column,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Row => f.write_str("row"),
            Axis::Column => f.write_str("column"),
        }
    }
}

/// Errors raised by the matrix, enumeration and census layers.
///
/// All indices carried by the variants are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsmError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("entry ({row}, {col}) = {value} is outside {{-1, 0, 1}}")]
    EntryOutOfRange { row: usize, col: usize, value: i64 },
    #[error("{axis} {index}: partial sum at position {position} leaves {{0, 1}}")]
    PartialSumViolation {
        axis: Axis,
        index: usize,
        position: usize,
    },
    #[error("{axis} {index}: full sum is not 1")]
    FullSumViolation { axis: Axis, index: usize },
    #[error("order {0} is even; an odd order is required")]
    EvenOrder(usize),
    #[error("order must be positive")]
    ZeroOrder,
    #[error("matrix is not {0}-symmetric")]
    NotSymmetric(SymmetryClass),
    #[error("quarter-turn matrix of order {n} has center {found}, expected {expected}")]
    CenterSignMismatch { n: usize, found: i8, expected: i8 },
    #[error("the four neighbours of the center are not equal: {0:?}")]
    NeighborMismatch([i8; 4]),
    #[error("column state is full; no further rows can be emitted")]
    StateFull,
    #[error("order {n} exceeds the configured cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("symmetry class {0} is not supported here")]
    UnsupportedClass(SymmetryClass),
    #[error("cannot merge census for ({0}) into census for ({1})")]
    RecordMismatch(String, String),
    #[error("no ratio relation applies to order {n} in class {class}")]
    NotApplicable { n: usize, class: SymmetryClass },
}

pub type Result<T, E = AsmError> = std::result::Result<T, E>;
