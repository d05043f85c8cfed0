//! Central-structure classification of odd-order symmetric ASMs.

use std::fmt;
use std::str::FromStr;

use crate::error::{AsmError, Result};
use crate::matrix::AsmMatrix;
use crate::symmetry::{is_symmetric, SymmetryClass};

/// The structure at the center of an odd-order symmetric ASM.
///
/// `neighbor` is only present for quarter-turn classification: it is the
/// common value of the four entries orthogonally adjacent to the center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CenterStructure {
    pub center: i8,
    pub neighbor: Option<i8>,
}

impl CenterStructure {
    pub fn center(center: i8) -> Self {
        CenterStructure {
            center,
            neighbor: None,
        }
    }

    pub fn with_neighbor(center: i8, neighbor: i8) -> Self {
        CenterStructure {
            center,
            neighbor: Some(neighbor),
        }
    }

    /// Report key, e.g. `center:+1` or `center:-1,adj:0`.
    pub fn key(&self) -> String {
        self.to_string()
    }
}

fn signed(v: i8) -> String {
    match v {
        1 => "+1".to_owned(),
        0 => "0".to_owned(),
        v => v.to_string(),
    }
}

impl fmt::Display for CenterStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "center:{}", signed(self.center))?;
        if let Some(adj) = self.neighbor {
            write!(f, ",adj:{}", signed(adj))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed structure key {0:?}")]
pub struct ParseStructureError(String);

impl FromStr for CenterStructure {
    type Err = ParseStructureError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let bad = || ParseStructureError(s.to_owned());
        let value = |v: &str| match v {
            "+1" => Ok(1),
            "0" => Ok(0),
            "-1" => Ok(-1),
            _ => Err(bad()),
        };
        let (head, adj) = match s.split_once(',') {
            Some((h, a)) => (h, Some(a.strip_prefix("adj:").ok_or_else(bad)?)),
            None => (s, None),
        };
        let center = value(head.strip_prefix("center:").ok_or_else(bad)?)?;
        if center == 0 {
            return Err(bad());
        }
        Ok(CenterStructure {
            center,
            neighbor: adj.map(value).transpose()?,
        })
    }
}

fn half_order(n: usize) -> Result<usize> {
    if n.is_multiple_of(2) {
        Err(AsmError::EvenOrder(n))
    } else {
        Ok(n / 2)
    }
}

/// Central entry shared by every quarter-turn symmetric ASM of odd order `n`:
/// `+1` when `n ≡ 1 (mod 4)`, `-1` when `n ≡ 3 (mod 4)`.
pub fn forced_center_sign(n: usize) -> Result<i8> {
    let m = half_order(n)?;
    Ok(if m % 2 == 0 { 1 } else { -1 })
}

/// Numbers `(k+, k-)` of non-central entries equal to `+1` and `-1`.
///
/// Since the entries sum to `n`, `k+ - k- + center = n`. Under quarter-turn
/// symmetry both counts are multiples of 4.
pub fn noncentral_counts(a: &AsmMatrix) -> Result<(usize, usize)> {
    let n = a.order();
    let m = half_order(n)?;
    let mid = m * n + m;
    let (mut plus, mut minus) = (0, 0);
    for (k, &x) in a.entries().iter().enumerate() {
        if k == mid {
            continue;
        }
        match x {
            1 => plus += 1,
            -1 => minus += 1,
            _ => {}
        }
    }
    Ok((plus, minus))
}

/// Classifies a matrix already known to lie in `class`.
///
/// For quarter-turn matrices the center sign is forced by the order and the
/// four orthogonal neighbours of the center form a single orbit, so a
/// mismatch in either is reported as an error rather than classified. At
/// `n = 1` there are no neighbours and the quarter-turn structure is just
/// `center:+1`.
pub fn center_structure(a: &AsmMatrix, class: SymmetryClass) -> Result<CenterStructure> {
    let n = a.order();
    let m = half_order(n)?;
    if class == SymmetryClass::Plain {
        return Err(AsmError::UnsupportedClass(class));
    }
    if !is_symmetric(a, class) {
        return Err(AsmError::NotSymmetric(class));
    }
    let c = m + 1;
    let center = a.get(c, c);
    if class != SymmetryClass::QuarterTurn {
        return Ok(CenterStructure::center(center));
    }
    let expected = forced_center_sign(n)?;
    if center != expected {
        return Err(AsmError::CenterSignMismatch {
            n,
            found: center,
            expected,
        });
    }
    if n == 1 {
        return Ok(CenterStructure::center(center));
    }
    let around = [
        a.get(c - 1, c),
        a.get(c, c + 1),
        a.get(c + 1, c),
        a.get(c, c - 1),
    ];
    if around.iter().any(|&x| x != around[0]) {
        return Err(AsmError::NeighborMismatch(around));
    }
    Ok(CenterStructure::with_neighbor(center, around[0]))
}
