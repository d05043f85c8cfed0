//! Exhaustive ASM generation over the column-partial-sum state space.
//!
//! A [`ColumnState`] records which columns have partial sum 1 after the rows
//! emitted so far; its set bits are one row of the monotone triangle. A row
//! is a legal transition `s -> t` exactly when the set positions of `t`
//! interlace those of `s`, which is what [`ColumnState::successors`] walks.
//!
//! Half-turn symmetric matrices are generated from their top `m` rows only:
//! the state after the middle row is then forced to be the complement of the
//! mirrored state after row `m`, and the lower half is the half-turn image of
//! the upper half.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{AsmError, Result};
use crate::matrix::{check_entries, AsmMatrix};
use crate::symmetry::{is_symmetric, SymmetryClass};

/// Default hard cap on the order for full enumeration.
pub const DEFAULT_CAP_ALL: usize = 15;
/// Default hard cap on the order for symmetric enumeration.
pub const DEFAULT_CAP_SYMMETRIC: usize = 17;
/// Orders above this do not fit the bit-mask state.
pub const MAX_ORDER: usize = 64;
/// In release builds only this many emitted matrices are re-validated.
const RELEASE_REVALIDATE: u64 = 1000;

/// Partial column sums after some number of rows, as a bit mask with bit `j`
/// standing for column `j + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnState {
    order: usize,
    bits: u64,
}

impl ColumnState {
    /// The all-zero state before any row is emitted.
    pub fn empty(order: usize) -> Self {
        assert!((1..=MAX_ORDER).contains(&order), "order out of range");
        ColumnState { order, bits: 0 }
    }

    pub fn from_bits(order: usize, bits: u64) -> Self {
        assert!((1..=MAX_ORDER).contains(&order), "order out of range");
        assert_eq!(bits & !mask(order), 0, "bits beyond the order");
        ColumnState { order, bits }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Number of rows emitted to reach this state.
    pub fn rows(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_full(&self) -> bool {
        self.bits == mask(self.order)
    }

    /// All states reachable by emitting one more valid row, in lexicographic
    /// order of the new set positions.
    pub fn successors(&self) -> Result<Vec<ColumnState>> {
        if self.is_full() {
            return Err(AsmError::StateFull);
        }
        let mut out = Vec::new();
        push_successors(self.order, self.bits, &mut out);
        Ok(out
            .into_iter()
            .map(|bits| ColumnState {
                order: self.order,
                bits,
            })
            .collect())
    }

    /// The row `next - self`, if it is a legal transition.
    pub fn row_to(&self, next: &ColumnState) -> Option<Vec<i8>> {
        if self.order != next.order || !is_successor(self.bits, next.bits) {
            return None;
        }
        let mut row = vec![0; self.order];
        write_row(&mut row, self.bits, next.bits);
        Some(row)
    }
}

impl fmt::Display for ColumnState {
    /// Column 1 first, e.g. `010`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.order {
            f.write_str(if self.bits >> j & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed column state {0:?}")]
pub struct ParseStateError(String);

impl FromStr for ColumnState {
    type Err = ParseStateError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.is_empty() || s.len() > MAX_ORDER {
            return Err(ParseStateError(s.to_owned()));
        }
        let mut bits = 0u64;
        for (j, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << j,
                _ => return Err(ParseStateError(s.to_owned())),
            }
        }
        Ok(ColumnState {
            order: s.len(),
            bits,
        })
    }
}

#[inline]
fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
fn mirror(n: usize, bits: u64) -> u64 {
    bits.reverse_bits() >> (64 - n)
}

/// Appends every interlacing successor of `s`.
///
/// With `s` set at `a_1 < .. < a_r`, a successor is set at `b_1 < .. < b_{r+1}`
/// where `b_i` lies in `[a_{i-1}, a_i]` (with `a_0 = 0`, `a_{r+1} = n - 1`).
fn push_successors(n: usize, s: u64, out: &mut Vec<u64>) {
    let mut anchors = [0u8; MAX_ORDER + 2];
    let mut r = 0;
    let mut rest = s;
    while rest != 0 {
        anchors[r] = rest.trailing_zeros() as u8;
        r += 1;
        rest &= rest - 1;
    }
    anchors[r] = (n - 1) as u8;
    choose(&anchors[..=r], 0, 0, 0, out);
}

fn choose(anchors: &[u8], slot: usize, low: usize, acc: u64, out: &mut Vec<u64>) {
    let high = anchors[slot] as usize;
    let last = slot + 1 == anchors.len();
    for b in low..=high {
        let next = acc | 1 << b;
        if last {
            out.push(next);
        } else {
            // b_{i+1} >= a_i and b_{i+1} > b_i
            choose(anchors, slot + 1, (high).max(b + 1), next, out);
        }
    }
}

/// Whether `t - s` is a valid ASM row.
#[inline]
fn is_successor(s: u64, t: u64) -> bool {
    if t.count_ones() != s.count_ones() + 1 {
        return false;
    }
    let mut diff = s ^ t;
    let mut expect_plus = true;
    while diff != 0 {
        let bit = diff & diff.wrapping_neg();
        let plus = t & bit != 0;
        if plus != expect_plus {
            return false;
        }
        expect_plus = !expect_plus;
        diff ^= bit;
    }
    // ended on a +1
    !expect_plus
}

#[inline]
fn write_row(row: &mut [i8], s: u64, t: u64) {
    for (j, x) in row.iter_mut().enumerate() {
        *x = (t >> j & 1) as i8 - (s >> j & 1) as i8;
    }
}

/// Caps applied before any search starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    pub cap_all: usize,
    pub cap_symmetric: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            cap_all: DEFAULT_CAP_ALL,
            cap_symmetric: DEFAULT_CAP_SYMMETRIC,
        }
    }
}

impl EnumConfig {
    /// Same cap for both kinds of enumeration.
    pub fn with_cap(cap: usize) -> Self {
        EnumConfig {
            cap_all: cap,
            cap_symmetric: cap,
        }
    }

    fn check(&self, n: usize, symmetric: bool) -> Result<()> {
        if n == 0 {
            return Err(AsmError::ZeroOrder);
        }
        let cap = if symmetric {
            self.cap_symmetric
        } else {
            self.cap_all
        }
        .min(MAX_ORDER);
        if n > cap {
            return Err(AsmError::CapExceeded { n, cap });
        }
        if symmetric && n.is_multiple_of(2) {
            return Err(AsmError::EvenOrder(n));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Domain {
    /// Every row is searched.
    Full,
    /// Rows above the middle are searched; the rest is forced.
    UpperHalf,
}

impl Domain {
    fn depth(self, n: usize) -> usize {
        match self {
            Domain::Full => n,
            Domain::UpperHalf => n / 2,
        }
    }
}

/// Depth-first walker over one subtree of the search.
struct Walker<'v, V> {
    n: usize,
    domain: Domain,
    filter: SymmetryClass,
    levels: Vec<Vec<u64>>,
    matrix: AsmMatrix,
    emitted: u64,
    stopped: bool,
    visit: &'v mut V,
}

impl<'v, V: FnMut(&AsmMatrix) -> ControlFlow<()>> Walker<'v, V> {
    fn new(n: usize, domain: Domain, filter: SymmetryClass, visit: &'v mut V) -> Self {
        Walker {
            n,
            domain,
            filter,
            levels: vec![Vec::new(); n + 1],
            matrix: AsmMatrix::from_entries_unchecked(n, vec![0; n * n]),
            emitted: 0,
            stopped: false,
            visit,
        }
    }

    /// Replays a prefix path of states and searches below it.
    fn run_from(&mut self, path: &[u64]) {
        let n = self.n;
        let mut prev = 0;
        for (r, &s) in path.iter().enumerate() {
            write_row(&mut self.matrix.entries_mut()[r * n..(r + 1) * n], prev, s);
            prev = s;
        }
        self.descend(path.len(), prev);
    }

    fn descend(&mut self, depth: usize, state: u64) {
        let n = self.n;
        if depth == self.domain.depth(n) {
            self.leaf(state);
            return;
        }
        let mut next = std::mem::take(&mut self.levels[depth]);
        next.clear();
        push_successors(n, state, &mut next);
        for &t in &next {
            if self.stopped {
                break;
            }
            write_row(
                &mut self.matrix.entries_mut()[depth * n..(depth + 1) * n],
                state,
                t,
            );
            self.descend(depth + 1, t);
        }
        self.levels[depth] = next;
    }

    fn leaf(&mut self, state: u64) {
        let n = self.n;
        if self.domain == Domain::UpperHalf {
            let m = n / 2;
            // Column j must total 1, and rows below the middle contribute
            // exactly the mirrored upper partial sums.
            let middle = !mirror(n, state) & mask(n);
            if !is_successor(state, middle) {
                return;
            }
            let entries = self.matrix.entries_mut();
            write_row(&mut entries[m * n..(m + 1) * n], state, middle);
            for i in 0..m {
                let (upper, lower) = entries.split_at_mut((n - 1 - i) * n);
                let src = &upper[i * n..(i + 1) * n];
                for (dst, &x) in lower[..n].iter_mut().zip(src.iter().rev()) {
                    *dst = x;
                }
            }
        } else {
            debug_assert_eq!(state, mask(n));
        }
        if !is_symmetric(&self.matrix, self.filter) {
            return;
        }
        if cfg!(debug_assertions) || self.emitted < RELEASE_REVALIDATE {
            if let Err(e) = check_entries(n, self.matrix.entries()) {
                panic!(
                    "enumerator emitted an invalid matrix ({e}):\n{}",
                    self.matrix
                );
            }
            if self.domain == Domain::UpperHalf {
                assert!(
                    is_symmetric(&self.matrix, SymmetryClass::HalfTurn),
                    "upper-half search emitted a non-symmetric matrix:\n{}",
                    self.matrix
                );
            }
        }
        self.emitted += 1;
        if (self.visit)(&self.matrix).is_break() {
            self.stopped = true;
        }
    }
}

/// Runs searches under a fixed [`EnumConfig`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Enumerator {
    config: EnumConfig,
}

impl Enumerator {
    pub fn new(config: EnumConfig) -> Self {
        Enumerator { config }
    }

    pub fn config(&self) -> EnumConfig {
        self.config
    }

    /// Visits every ASM of order `n` once, in lexicographic successor order.
    /// The visitor receives a buffer that is reused between calls.
    pub fn all(&self, n: usize, mut visit: impl FnMut(&AsmMatrix)) -> Result<u64> {
        self.try_all(n, |a| {
            visit(a);
            ControlFlow::Continue(())
        })
    }

    /// Like [`Enumerator::all`], stopping after the first matrix for which
    /// `visit` breaks. Returns the number of matrices visited.
    pub fn try_all(
        &self,
        n: usize,
        mut visit: impl FnMut(&AsmMatrix) -> ControlFlow<()>,
    ) -> Result<u64> {
        self.config.check(n, false)?;
        let mut walker = Walker::new(n, Domain::Full, SymmetryClass::Plain, &mut visit);
        walker.run_from(&[]);
        Ok(walker.emitted)
    }

    /// Visits every half-turn symmetric ASM of odd order `n` once.
    pub fn half_turn(&self, n: usize, visit: impl FnMut(&AsmMatrix)) -> Result<u64> {
        self.symmetric(n, SymmetryClass::HalfTurn, visit)
    }

    /// Visits every ASM of odd order `n` in `class`. Quarter-turn and
    /// double-diagonal matrices are filtered out of the half-turn stream.
    pub fn symmetric(
        &self,
        n: usize,
        class: SymmetryClass,
        mut visit: impl FnMut(&AsmMatrix),
    ) -> Result<u64> {
        self.try_symmetric(n, class, |a| {
            visit(a);
            ControlFlow::Continue(())
        })
    }

    /// Early-stopping form of [`Enumerator::symmetric`].
    pub fn try_symmetric(
        &self,
        n: usize,
        class: SymmetryClass,
        mut visit: impl FnMut(&AsmMatrix) -> ControlFlow<()>,
    ) -> Result<u64> {
        if class == SymmetryClass::Plain {
            return Err(AsmError::UnsupportedClass(class));
        }
        self.config.check(n, true)?;
        let mut walker = Walker::new(n, Domain::UpperHalf, class, &mut visit);
        walker.run_from(&[]);
        Ok(walker.emitted)
    }

    /// Partitioned search on `workers` threads.
    ///
    /// The tree is cut at a fixed prefix depth; each prefix subtree gets a
    /// fresh accumulator from `init`, and the accumulators come back in
    /// prefix order, so any order-insensitive fold over them is independent
    /// of `workers`. `Plain` means every ASM of order `n`.
    pub fn partitioned<A, I, F>(
        &self,
        n: usize,
        class: SymmetryClass,
        workers: usize,
        init: I,
        visit: F,
    ) -> Result<Vec<A>>
    where
        A: Send,
        I: Fn() -> A + Sync,
        F: Fn(&mut A, &AsmMatrix) + Sync,
    {
        let domain = if class == SymmetryClass::Plain {
            self.config.check(n, false)?;
            Domain::Full
        } else {
            self.config.check(n, true)?;
            Domain::UpperHalf
        };
        let workers = workers.max(1);
        let run = |path: &Vec<u64>| {
            let mut acc = init();
            let mut v = |a: &AsmMatrix| {
                visit(&mut acc, a);
                ControlFlow::Continue(())
            };
            Walker::new(n, domain, class, &mut v).run_from(path);
            acc
        };
        if workers == 1 {
            return Ok(vec![run(&Vec::new())]);
        }
        let prefixes = split_prefixes(n, domain.depth(n), workers * 8);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("failed to build worker pool");
        Ok(pool.install(|| prefixes.par_iter().map(run).collect()))
    }
}

/// State paths at the shallowest depth (not past `max_depth`) with at least
/// `want` prefixes, in search order.
fn split_prefixes(n: usize, max_depth: usize, want: usize) -> Vec<Vec<u64>> {
    let mut frontier: Vec<Vec<u64>> = vec![Vec::new()];
    let mut buf = Vec::new();
    while frontier.len() < want && frontier.first().map_or(0, Vec::len) < max_depth {
        let mut deeper = Vec::new();
        for path in &frontier {
            buf.clear();
            push_successors(n, path.last().copied().unwrap_or(0), &mut buf);
            for &t in &buf {
                let mut p = path.clone();
                p.push(t);
                deeper.push(p);
            }
        }
        frontier = deeper;
    }
    frontier
}

pub fn enumerate_all(n: usize, visit: impl FnMut(&AsmMatrix)) -> Result<u64> {
    Enumerator::default().all(n, visit)
}

pub fn enumerate_half_turn(n: usize, visit: impl FnMut(&AsmMatrix)) -> Result<u64> {
    Enumerator::default().half_turn(n, visit)
}

pub fn enumerate_symmetric(
    n: usize,
    class: SymmetryClass,
    visit: impl FnMut(&AsmMatrix),
) -> Result<u64> {
    Enumerator::default().symmetric(n, class, visit)
}

/// Largest order accepted by [`naive_oracle`].
pub const NAIVE_MAX_ORDER: usize = 4;

/// Every `n × n` array over `{-1, 0, 1}` that passes validation, found by
/// trying all `3^(n²)` of them. Shares nothing with the state machine above.
pub fn naive_oracle(n: usize) -> Result<Vec<AsmMatrix>> {
    if n == 0 {
        return Err(AsmError::ZeroOrder);
    }
    if n > NAIVE_MAX_ORDER {
        return Err(AsmError::CapExceeded {
            n,
            cap: NAIVE_MAX_ORDER,
        });
    }
    let cells = n * n;
    let mut entries = vec![-1i8; cells];
    let mut found = Vec::new();
    loop {
        if check_entries(n, &entries).is_ok() {
            found.push(AsmMatrix::from_entries_unchecked(n, entries.clone()));
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == cells {
                return Ok(found);
            }
            if entries[k] < 1 {
                entries[k] += 1;
                break;
            }
            entries[k] = -1;
            k += 1;
        }
    }
}
