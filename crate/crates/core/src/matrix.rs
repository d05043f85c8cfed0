//! The validated alternating sign matrix type.

use std::fmt;

use crate::error::{AsmError, Axis, Result};

/// An alternating sign matrix of order `n`.
///
/// Every row and column has prefix sums in `{0, 1}` and full sum `1`, which
/// is the same as saying the non-zero entries alternate in sign starting and
/// ending with `+1`. Values are immutable once validated; the group actions
/// return fresh matrices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AsmMatrix {
    order: usize,
    // row-major
    entries: Vec<i8>,
}

impl AsmMatrix {
    /// Validates a square integer array. Row and column indices in errors are
    /// 1-based.
    ///
    /// Full sums are checked before prefix sums, so a column that overshoots
    /// is reported as a `FullSumViolation` rather than by its first bad
    /// prefix.
    pub fn validate<R: AsRef<[i64]>>(raw: &[R]) -> Result<Self> {
        let n = raw.len();
        if n == 0 {
            return Err(AsmError::ZeroOrder);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in raw.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(AsmError::NotSquare);
            }
            for (j, &value) in row.iter().enumerate() {
                if !(-1..=1).contains(&value) {
                    return Err(AsmError::EntryOutOfRange {
                        row: i + 1,
                        col: j + 1,
                        value,
                    });
                }
                entries.push(value as i8);
            }
        }
        check_entries(n, &entries)?;
        Ok(AsmMatrix { order: n, entries })
    }

    /// Builds a matrix from row-major entries already known to form an ASM.
    pub(crate) fn from_entries_unchecked(order: usize, entries: Vec<i8>) -> Self {
        debug_assert_eq!(entries.len(), order * order);
        AsmMatrix { order, entries }
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [i8] {
        &mut self.entries
    }

    /// The `n × n` identity, which is an ASM for every `n ≥ 1`.
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "order must be positive");
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        AsmMatrix { order: n, entries }
    }

    /// Permutation matrix with a `1` in row `i` at column `sigma[i - 1]`
    /// (both 1-based).
    pub fn permutation(sigma: &[usize]) -> Result<Self> {
        let n = sigma.len();
        let mut raw = vec![vec![0i64; n]; n];
        for (i, &c) in sigma.iter().enumerate() {
            if c == 0 || c > n {
                return Err(AsmError::NotSquare);
            }
            raw[i][c - 1] = 1;
        }
        Self::validate(&raw)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry `(A)_{i,j}` with 1-based indices.
    pub fn get(&self, i: usize, j: usize) -> i8 {
        assert!(
            (1..=self.order).contains(&i) && (1..=self.order).contains(&j),
            "index ({i}, {j}) out of range for order {}",
            self.order
        );
        self.entries[(i - 1) * self.order + (j - 1)]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks(self.order)
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.rows()
            .map(|r| r.iter().map(|&x| i64::from(x)).collect())
            .collect()
    }

    /// Builds `r` with `r[i][j] = self[src(i, j)]` (0-based).
    pub(crate) fn remap(&self, src: impl Fn(usize, usize) -> (usize, usize)) -> Self {
        let n = self.order;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let (si, sj) = src(i, j);
                entries.push(self.entries[si * n + sj]);
            }
        }
        AsmMatrix { order: n, entries }
    }

    /// Renders the matrix as a text grid using `+`, `.` and `-`.
    pub fn to_grid(&self) -> String {
        let mut out = String::with_capacity(self.order * (self.order + 1));
        for row in self.rows() {
            for &x in row {
                out.push(match x {
                    1 => '+',
                    -1 => '-',
                    _ => '.',
                });
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for AsmMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl fmt::Display for AsmMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_grid())
    }
}

/// Checks the sum characterization on row-major entries already known to lie
/// in `{-1, 0, 1}`. This is the allocation-free core of [`AsmMatrix::validate`].
pub(crate) fn check_entries(n: usize, entries: &[i8]) -> Result<()> {
    let at = |axis: Axis, line: usize, k: usize| match axis {
        Axis::Row => entries[line * n + k],
        Axis::Column => entries[k * n + line],
    };
    for axis in [Axis::Row, Axis::Column] {
        for line in 0..n {
            let total: i32 = (0..n).map(|k| i32::from(at(axis, line, k))).sum();
            if total != 1 {
                return Err(AsmError::FullSumViolation {
                    axis,
                    index: line + 1,
                });
            }
        }
    }
    for axis in [Axis::Row, Axis::Column] {
        for line in 0..n {
            let mut acc = 0i32;
            for k in 0..n {
                acc += i32::from(at(axis, line, k));
                if !(0..=1).contains(&acc) {
                    return Err(AsmError::PartialSumViolation {
                        axis,
                        index: line + 1,
                        position: k + 1,
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_asm() {
        let a = AsmMatrix::validate(&[[1]]).unwrap();
        assert_eq!(a.order(), 1);
        assert_eq!(a.get(1, 1), 1);
    }

    #[test]
    fn minus_one_centered() {
        let a = AsmMatrix::validate(&[[0, 1, 0], [1, -1, 1], [0, 1, 0]]).unwrap();
        assert_eq!(a.get(2, 2), -1);
        assert_eq!(a.to_grid(), ".+.\n+-+\n.+.\n");
    }

    #[test]
    fn column_overshoot_is_a_full_sum_violation() {
        let err = AsmMatrix::validate(&[[1, 0], [1, 0]]).unwrap_err();
        assert_eq!(
            err,
            AsmError::FullSumViolation {
                axis: Axis::Column,
                index: 1
            }
        );
    }

    #[test]
    fn rejects_shape_and_range_errors() {
        assert_eq!(
            AsmMatrix::validate(&[vec![1, 0], vec![0]]).unwrap_err(),
            AsmError::NotSquare
        );
        assert_eq!(
            AsmMatrix::validate(&[[1, 0], [0, 2]]).unwrap_err(),
            AsmError::EntryOutOfRange {
                row: 2,
                col: 2,
                value: 2
            }
        );
        let empty: [[i64; 0]; 0] = [];
        assert_eq!(
            AsmMatrix::validate(&empty).unwrap_err(),
            AsmError::ZeroOrder
        );
    }

    #[test]
    fn sums_right_but_sign_order_wrong() {
        // Every line sums to 1, but column 2 opens with -1.
        let err = AsmMatrix::validate(&[[1, -1, 1], [0, 1, 0], [0, 1, 0]]).unwrap_err();
        assert_eq!(
            err,
            AsmError::PartialSumViolation {
                axis: Axis::Column,
                index: 2,
                position: 1
            }
        );
    }

    #[test]
    fn permutation_builder() {
        let p = AsmMatrix::permutation(&[2, 5, 3, 1, 4]).unwrap();
        assert_eq!(p.get(1, 2), 1);
        assert_eq!(p.get(5, 4), 1);
        assert_eq!(p.entries().iter().filter(|&&x| x == 1).count(), 5);
    }
}
