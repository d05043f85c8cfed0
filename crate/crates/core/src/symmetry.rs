//! Symmetry group actions on ASMs and the class predicates built on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::matrix::AsmMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymmetryClass {
    Plain,
    HalfTurn,
    QuarterTurn,
    DoubleDiagonal,
}

impl SymmetryClass {
    /// The symmetric classes, in report order.
    pub const SYMMETRIC: [SymmetryClass; 3] = [
        SymmetryClass::HalfTurn,
        SymmetryClass::QuarterTurn,
        SymmetryClass::DoubleDiagonal,
    ];

    /// Short tag used on the command line and in reports.
    pub fn tag(self) -> &'static str {
        match self {
            SymmetryClass::Plain => "plain",
            SymmetryClass::HalfTurn => "ht",
            SymmetryClass::QuarterTurn => "qt",
            SymmetryClass::DoubleDiagonal => "dd",
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryClass::Plain => "plain",
            SymmetryClass::HalfTurn => "half-turn",
            SymmetryClass::QuarterTurn => "quarter-turn",
            SymmetryClass::DoubleDiagonal => "double-diagonal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown symmetry class {0:?} (expected plain, ht, qt or dd)")]
pub struct ParseClassError(String);

impl FromStr for SymmetryClass {
    type Err = ParseClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "plain" => Ok(SymmetryClass::Plain),
            "ht" | "half-turn" => Ok(SymmetryClass::HalfTurn),
            "qt" | "quarter-turn" => Ok(SymmetryClass::QuarterTurn),
            "dd" | "double-diagonal" => Ok(SymmetryClass::DoubleDiagonal),
            _ => Err(ParseClassError(s.to_owned())),
        }
    }
}

/// 180° rotation: `r[i][j] = a[n+1-i][n+1-j]`.
pub fn half_turn(a: &AsmMatrix) -> AsmMatrix {
    let last = a.order() - 1;
    a.remap(|i, j| (last - i, last - j))
}

/// 90° rotation: `r[j][n+1-i] = a[i][j]`.
pub fn quarter_turn(a: &AsmMatrix) -> AsmMatrix {
    let last = a.order() - 1;
    // r[p][q] = a[n+1-q][p]
    a.remap(|p, q| (last - q, p))
}

/// Flip in the main diagonal.
pub fn transpose(a: &AsmMatrix) -> AsmMatrix {
    a.remap(|i, j| (j, i))
}

/// Flip in the antidiagonal: `r[i][j] = a[n+1-j][n+1-i]`.
pub fn antitranspose(a: &AsmMatrix) -> AsmMatrix {
    let last = a.order() - 1;
    a.remap(|i, j| (last - j, last - i))
}

/// Membership test for a symmetry class, evaluated in place without building
/// the image matrix.
pub fn is_symmetric(a: &AsmMatrix, class: SymmetryClass) -> bool {
    let n = a.order();
    let last = n - 1;
    let e = a.entries();
    let at = |i: usize, j: usize| e[i * n + j];
    let all = |f: &dyn Fn(usize, usize) -> bool| (0..n).all(|i| (0..n).all(|j| f(i, j)));
    match class {
        SymmetryClass::Plain => true,
        SymmetryClass::HalfTurn => all(&|i, j| at(i, j) == at(last - i, last - j)),
        SymmetryClass::QuarterTurn => all(&|i, j| at(i, j) == at(last - j, i)),
        SymmetryClass::DoubleDiagonal => {
            all(&|i, j| at(i, j) == at(j, i) && at(i, j) == at(last - j, last - i))
        }
    }
}
