//! Exact per-structure counts and the ratio relations checked against them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::center::{center_structure, forced_center_sign, CenterStructure};
use crate::enumerate::{EnumConfig, Enumerator};
use crate::error::{AsmError, Result};
use crate::symmetry::SymmetryClass;

pub type BigCount = BigUint;

/// How a census was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    FundamentalDomain,
    Filter,
    Naive,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::FundamentalDomain => "fundamental-domain",
            Method::Filter => "filter",
            Method::Naive => "naive",
        }
    }

    fn for_class(class: SymmetryClass) -> Self {
        match class {
            SymmetryClass::HalfTurn => Method::FundamentalDomain,
            _ => Method::Filter,
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "fundamental-domain" => Ok(Method::FundamentalDomain),
            "filter" => Ok(Method::Filter),
            "naive" => Ok(Method::Naive),
            _ => Err(format!("unknown method {s:?}")),
        }
    }
}

/// The structures a census of `(n, class)` reports, seeded with zero so that
/// empty classes still show up.
pub fn expected_structures(n: usize, class: SymmetryClass) -> Result<Vec<CenterStructure>> {
    if n.is_multiple_of(2) {
        return Err(AsmError::EvenOrder(n));
    }
    Ok(match class {
        SymmetryClass::Plain => return Err(AsmError::UnsupportedClass(class)),
        SymmetryClass::HalfTurn | SymmetryClass::DoubleDiagonal => {
            vec![CenterStructure::center(1), CenterStructure::center(-1)]
        }
        SymmetryClass::QuarterTurn if n == 1 => vec![CenterStructure::center(1)],
        SymmetryClass::QuarterTurn => {
            let c = forced_center_sign(n)?;
            let adj = if c == 1 { [0, -1] } else { [1, 0] };
            adj.iter()
                .map(|&a| CenterStructure::with_neighbor(c, a))
                .collect()
        }
    })
}

/// Exact counts per central structure for one `(n, class)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRecord {
    pub n: usize,
    pub class: SymmetryClass,
    pub counts: BTreeMap<CenterStructure, BigCount>,
    pub total: BigCount,
    pub method: Method,
    pub elapsed_ms: u64,
}

impl CensusRecord {
    /// A record with every expected structure at zero.
    pub fn empty(n: usize, class: SymmetryClass) -> Result<Self> {
        let counts = expected_structures(n, class)?
            .into_iter()
            .map(|s| (s, BigCount::zero()))
            .collect();
        Ok(CensusRecord {
            n,
            class,
            counts,
            total: BigCount::zero(),
            method: Method::for_class(class),
            elapsed_ms: 0,
        })
    }

    /// Count of `structure`, zero when absent.
    pub fn count(&self, structure: &CenterStructure) -> BigCount {
        self.counts.get(structure).cloned().unwrap_or_default()
    }

    pub fn add(&mut self, structure: CenterStructure, by: impl Into<BigCount>) {
        let by = by.into();
        self.total += &by;
        *self.counts.entry(structure).or_default() += by;
    }

    /// Pointwise addition of another record for the same `(n, class)`.
    /// Elapsed times add as well.
    pub fn merge(&mut self, other: &CensusRecord) -> Result<()> {
        if (self.n, self.class) != (other.n, other.class) {
            return Err(AsmError::RecordMismatch(
                format!("{}, {}", other.n, other.class.tag()),
                format!("{}, {}", self.n, self.class.tag()),
            ));
        }
        for (s, c) in &other.counts {
            self.add(*s, c.clone());
        }
        self.elapsed_ms += other.elapsed_ms;
        Ok(())
    }

    /// Checks the record's structural invariants.
    pub fn is_consistent(&self) -> bool {
        let sum: BigCount = self.counts.values().sum();
        if sum != self.total {
            return false;
        }
        match self.class {
            SymmetryClass::QuarterTurn => {
                let Ok(c) = forced_center_sign(self.n) else {
                    return false;
                };
                self.counts.len() <= 2 && self.counts.keys().all(|s| s.center == c)
            }
            SymmetryClass::Plain => false,
            _ => self
                .counts
                .keys()
                .all(|s| s.neighbor.is_none() && (s.center == 1 || s.center == -1)),
        }
    }
}

/// Knobs for [`run_census_with`].
#[derive(Debug, Clone, Copy)]
pub struct CensusOptions {
    pub workers: usize,
    pub config: EnumConfig,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            workers: 1,
            config: EnumConfig::default(),
        }
    }
}

#[derive(Default)]
struct Tally {
    counts: BTreeMap<CenterStructure, u64>,
    error: Option<AsmError>,
}

pub fn run_census(n: usize, class: SymmetryClass) -> Result<CensusRecord> {
    run_census_with(n, class, &CensusOptions::default())
}

/// Enumerates `class` at order `n` and classifies every matrix by its
/// central structure. The counts do not depend on `opts.workers`.
pub fn run_census_with(
    n: usize,
    class: SymmetryClass,
    opts: &CensusOptions,
) -> Result<CensusRecord> {
    let start = Instant::now();
    let mut record = CensusRecord::empty(n, class)?;
    let parts = Enumerator::new(opts.config).partitioned(
        n,
        class,
        opts.workers,
        Tally::default,
        |tally, a| {
            if tally.error.is_some() {
                return;
            }
            match center_structure(a, class) {
                Ok(s) => *tally.counts.entry(s).or_default() += 1,
                Err(e) => tally.error = Some(e),
            }
        },
    )?;
    for part in parts {
        if let Some(e) = part.error {
            return Err(e);
        }
        for (s, c) in part.counts {
            record.add(s, c);
        }
    }
    record.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(record)
}

/// The ratio statements checked by the census.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Conjecture {
    /// Half-turn: center `+1` against center `-1` is `(m + 1) : m`. Proved.
    HtTheorem,
    /// Quarter-turn at `n = 4μ + 1`: neighbours `0` against `-1` is `(μ + 1) : μ`.
    Qt1a,
    /// Quarter-turn at `n = 4μ + 3`: neighbours `+1` against `0` is `(μ + 1) : μ`.
    Qt1b,
    /// Double-diagonal: center `+1` against center `-1` is `(m + 1) : m`.
    Dd2,
}

impl Conjecture {
    pub const ALL: [Conjecture; 4] = [
        Conjecture::HtTheorem,
        Conjecture::Qt1a,
        Conjecture::Qt1b,
        Conjecture::Dd2,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Conjecture::HtTheorem => "ht",
            Conjecture::Qt1a => "1a",
            Conjecture::Qt1b => "1b",
            Conjecture::Dd2 => "2",
        }
    }

    pub fn class(self) -> SymmetryClass {
        match self {
            Conjecture::HtTheorem => SymmetryClass::HalfTurn,
            Conjecture::Qt1a | Conjecture::Qt1b => SymmetryClass::QuarterTurn,
            Conjecture::Dd2 => SymmetryClass::DoubleDiagonal,
        }
    }

    /// Only the half-turn relation is an established theorem.
    pub fn is_theorem(self) -> bool {
        self == Conjecture::HtTheorem
    }

    /// Numerator and denominator structures at order `n`.
    fn structures(self) -> (CenterStructure, CenterStructure) {
        match self {
            Conjecture::HtTheorem | Conjecture::Dd2 => {
                (CenterStructure::center(1), CenterStructure::center(-1))
            }
            Conjecture::Qt1a => (
                CenterStructure::with_neighbor(1, 0),
                CenterStructure::with_neighbor(1, -1),
            ),
            Conjecture::Qt1b => (
                CenterStructure::with_neighbor(-1, 1),
                CenterStructure::with_neighbor(-1, 0),
            ),
        }
    }
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Conjecture {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Conjecture::ALL
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| format!("unknown relation {s:?} (expected ht, 1a, 1b or 2)"))
    }
}

/// Which relation applies to `(n, class)` and its parameter (`m` or `μ`).
pub fn applicable_conjecture(n: usize, class: SymmetryClass) -> Result<(Conjecture, usize)> {
    if n.is_multiple_of(2) {
        return Err(AsmError::EvenOrder(n));
    }
    let m = n / 2;
    let not_applicable = Err(AsmError::NotApplicable { n, class });
    let (tag, param) = match class {
        SymmetryClass::Plain => return not_applicable,
        SymmetryClass::HalfTurn => (Conjecture::HtTheorem, m),
        SymmetryClass::DoubleDiagonal => (Conjecture::Dd2, m),
        SymmetryClass::QuarterTurn if m.is_multiple_of(2) => (Conjecture::Qt1a, m / 2),
        SymmetryClass::QuarterTurn => (Conjecture::Qt1b, (m - 1) / 2),
    };
    if param == 0 {
        return not_applicable;
    }
    Ok((tag, param))
}

/// Odd orders `3..=max_n` at which `conjecture` applies.
pub fn applicable_orders(conjecture: Conjecture, max_n: usize) -> Vec<usize> {
    (3..=max_n)
        .step_by(2)
        .filter(|&n| {
            applicable_conjecture(n, conjecture.class()).is_ok_and(|(c, _)| c == conjecture)
        })
        .collect()
}

/// One instance of a ratio relation, decided by exact cross-multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub conjecture: Conjecture,
    pub n: usize,
    pub parameter: usize,
    pub numerator_count: BigCount,
    pub denominator_count: BigCount,
    /// `(p, q)`: the relation claims numerator / denominator = p / q.
    pub expected: (usize, usize),
    pub holds: bool,
    /// The denominator structure has no matrices, so the ratio is undefined.
    pub empty_class: bool,
}

impl RatioReport {
    pub fn status(&self) -> &'static str {
        match (self.holds, self.conjecture.is_theorem()) {
            (true, _) => "holds",
            (false, true) => "THEOREM FAILED - engine bug",
            (false, false) => "conjecture violated - verify build",
        }
    }
}

pub fn verify_relation(rec: &CensusRecord) -> Result<RatioReport> {
    let (conjecture, parameter) = applicable_conjecture(rec.n, rec.class)?;
    let (num, den) = conjecture.structures();
    let numerator_count = rec.count(&num);
    let denominator_count = rec.count(&den);
    let expected = (parameter + 1, parameter);
    let empty_class = denominator_count.is_zero();
    let holds = !empty_class
        && &numerator_count * BigCount::from(expected.1)
            == &denominator_count * BigCount::from(expected.0);
    Ok(RatioReport {
        conjecture,
        n: rec.n,
        parameter,
        numerator_count,
        denominator_count,
        expected,
        holds,
        empty_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(
        n: usize,
        class: SymmetryClass,
        counts: &[(CenterStructure, u64)],
    ) -> CensusRecord {
        let mut r = CensusRecord::empty(n, class).unwrap();
        for &(s, c) in counts {
            r.add(s, c);
        }
        r
    }

    #[test]
    fn order_three_censuses() {
        for class in [SymmetryClass::HalfTurn, SymmetryClass::DoubleDiagonal] {
            let r = run_census(3, class).unwrap();
            assert_eq!(r.count(&CenterStructure::center(1)), BigCount::from(2u8));
            assert_eq!(r.count(&CenterStructure::center(-1)), BigCount::from(1u8));
            assert_eq!(r.total, BigCount::from(3u8));
            assert!(r.is_consistent());
            assert!(verify_relation(&r).unwrap().holds);
        }
        let qt = run_census(3, SymmetryClass::QuarterTurn).unwrap();
        assert_eq!(qt.total, BigCount::from(1u8));
        assert_eq!(qt.method, Method::Filter);
    }

    #[test]
    fn order_five_quarter_turn_ratio() {
        let r = run_census(5, SymmetryClass::QuarterTurn).unwrap();
        let x = r.count(&CenterStructure::with_neighbor(1, 0));
        let y = r.count(&CenterStructure::with_neighbor(1, -1));
        assert_eq!(x, &y * BigCount::from(2u8));
        assert!(!y.is_zero());
    }

    #[test]
    fn applicability() {
        use Conjecture::*;
        assert_eq!(
            applicable_conjecture(7, SymmetryClass::QuarterTurn),
            Ok((Qt1b, 1))
        );
        assert_eq!(
            applicable_conjecture(9, SymmetryClass::QuarterTurn),
            Ok((Qt1a, 2))
        );
        assert_eq!(
            applicable_conjecture(5, SymmetryClass::HalfTurn),
            Ok((HtTheorem, 2))
        );
        assert_eq!(
            applicable_conjecture(5, SymmetryClass::DoubleDiagonal),
            Ok((Dd2, 2))
        );
        assert_eq!(
            applicable_conjecture(1, SymmetryClass::HalfTurn),
            Err(AsmError::NotApplicable {
                n: 1,
                class: SymmetryClass::HalfTurn
            })
        );
        assert!(applicable_conjecture(3, SymmetryClass::QuarterTurn).is_err());
        assert!(applicable_conjecture(1, SymmetryClass::QuarterTurn).is_err());
        assert_eq!(
            applicable_conjecture(6, SymmetryClass::HalfTurn),
            Err(AsmError::EvenOrder(6))
        );
        assert_eq!(applicable_orders(Qt1a, 13), [5, 9, 13]);
        assert_eq!(applicable_orders(Qt1b, 11), [7, 11]);
        assert!(applicable_orders(Qt1a, 3).is_empty());
        assert_eq!(applicable_orders(HtTheorem, 7), [3, 5, 7]);
    }

    #[test]
    fn synthetic_failure_and_empty_class() {
        let bad = synthetic(
            3,
            SymmetryClass::HalfTurn,
            &[
                (CenterStructure::center(1), 3),
                (CenterStructure::center(-1), 1),
            ],
        );
        let rep = verify_relation(&bad).unwrap();
        assert!(!rep.holds);
        assert!(!rep.empty_class);
        assert_eq!(rep.status(), "THEOREM FAILED - engine bug");

        let empty = CensusRecord::empty(5, SymmetryClass::DoubleDiagonal).unwrap();
        let rep = verify_relation(&empty).unwrap();
        assert!(!rep.holds);
        assert!(rep.empty_class);
        assert_eq!(rep.status(), "conjecture violated - verify build");
    }

    #[test]
    fn merge_adds_pointwise() {
        let a = synthetic(
            5,
            SymmetryClass::HalfTurn,
            &[(CenterStructure::center(1), 4)],
        );
        let b = synthetic(
            5,
            SymmetryClass::HalfTurn,
            &[(CenterStructure::center(-1), 7)],
        );
        let mut ab = a.clone();
        ab.merge(&b).unwrap();
        let mut ba = b.clone();
        ba.merge(&a).unwrap();
        assert_eq!(ab.counts, ba.counts);
        assert_eq!(ab.total, BigCount::from(11u8));
        let other = CensusRecord::empty(7, SymmetryClass::HalfTurn).unwrap();
        assert!(ab.merge(&other).is_err());
    }

    #[test]
    fn expected_structure_sets() {
        assert_eq!(
            expected_structures(7, SymmetryClass::QuarterTurn).unwrap(),
            [
                CenterStructure::with_neighbor(-1, 1),
                CenterStructure::with_neighbor(-1, 0)
            ]
        );
        assert_eq!(
            expected_structures(1, SymmetryClass::QuarterTurn).unwrap(),
            [CenterStructure::center(1)]
        );
    }
}
