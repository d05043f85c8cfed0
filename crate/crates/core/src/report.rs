//! Serialized forms of census records and ratio reports.
//!
//! Counts are always written as decimal strings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::census::{applicable_conjecture, BigCount, CensusRecord, Method, RatioReport};
use crate::center::CenterStructure;
use crate::symmetry::SymmetryClass;

pub const SCHEMA: &str = "asm-census/1";
pub const ENGINE_VERSION: &str = concat!("asm-census-core/", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {0:?}")]
    Schema(String),
    #[error("{0}")]
    Field(String),
    #[error("counts do not sum to the stated total")]
    Inconsistent,
}

/// The on-disk census document, field order as emitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusDocument {
    pub schema: String,
    pub n: usize,
    pub class: String,
    pub counts: BTreeMap<String, String>,
    pub total: String,
    pub method: String,
    pub elapsed_ms: u64,
    pub engine_version: String,
}

impl From<&CensusRecord> for CensusDocument {
    fn from(r: &CensusRecord) -> Self {
        CensusDocument {
            schema: SCHEMA.to_owned(),
            n: r.n,
            class: r.class.tag().to_owned(),
            counts: r
                .counts
                .iter()
                .map(|(s, c)| (s.key(), c.to_string()))
                .collect(),
            total: r.total.to_string(),
            method: r.method.tag().to_owned(),
            elapsed_ms: r.elapsed_ms,
            engine_version: ENGINE_VERSION.to_owned(),
        }
    }
}

fn parse_count(s: &str) -> Result<BigCount, ReportError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ReportError::Field(format!(
            "count {s:?} is not a decimal string"
        )));
    }
    s.parse()
        .map_err(|_| ReportError::Field(format!("count {s:?} is not a decimal string")))
}

impl TryFrom<&CensusDocument> for CensusRecord {
    type Error = ReportError;

    fn try_from(d: &CensusDocument) -> Result<Self, Self::Error> {
        if d.schema != SCHEMA {
            return Err(ReportError::Schema(d.schema.clone()));
        }
        let class: SymmetryClass = d
            .class
            .parse()
            .map_err(|e: crate::symmetry::ParseClassError| ReportError::Field(e.to_string()))?;
        let method: Method = d.method.parse().map_err(ReportError::Field)?;
        let mut counts = BTreeMap::new();
        for (k, v) in &d.counts {
            let s: CenterStructure = k.parse().map_err(|e| ReportError::Field(format!("{e}")))?;
            counts.insert(s, parse_count(v)?);
        }
        let total = parse_count(&d.total)?;
        if counts.values().sum::<BigCount>() != total {
            return Err(ReportError::Inconsistent);
        }
        Ok(CensusRecord {
            n: d.n,
            class,
            counts,
            total,
            method,
            elapsed_ms: d.elapsed_ms,
        })
    }
}

pub fn census_to_json(r: &CensusRecord) -> String {
    serde_json::to_string(&CensusDocument::from(r)).expect("census document serializes")
}

pub fn census_from_json(s: &str) -> Result<CensusRecord, ReportError> {
    let doc: CensusDocument = serde_json::from_str(s)?;
    CensusRecord::try_from(&doc)
}

/// `n,class,structure,count` with one row per structure, `+1` structures first.
pub fn census_to_csv(r: &CensusRecord) -> String {
    let mut out = String::from("n,class,structure,count\n");
    for (s, c) in r.counts.iter().rev() {
        writeln!(out, "{},{},{},{}", r.n, r.class.tag(), s.key(), c).unwrap();
    }
    out
}

fn reduced(num: &BigCount, den: &BigCount) -> String {
    use num_integer::Integer;
    if num == &BigCount::default() && den == &BigCount::default() {
        return "-".to_owned();
    }
    let g = num.gcd(den);
    format!("{}/{}", num / &g, den / &g)
}

/// Human-readable table. When a ratio relation applies, each row also shows
/// its count relative to the relation's denominator structure.
pub fn census_to_text(r: &CensusRecord) -> String {
    let denominator = verify_denominator(r);
    let mut out = String::new();
    writeln!(out, "order {} {} ASMs ({})", r.n, r.class, r.method.tag()).unwrap();
    let width = r
        .counts
        .keys()
        .map(|s| s.key().len())
        .max()
        .unwrap_or(9)
        .max(9);
    match &denominator {
        Some(_) => writeln!(out, "{:<width$}  {:>12}  ratio", "structure", "count").unwrap(),
        None => writeln!(out, "{:<width$}  {:>12}", "structure", "count").unwrap(),
    }
    for (s, c) in r.counts.iter().rev() {
        match &denominator {
            Some(d) => writeln!(out, "{:<width$}  {:>12}  {}", s.key(), c, reduced(c, d)).unwrap(),
            None => writeln!(out, "{:<width$}  {:>12}", s.key(), c).unwrap(),
        }
    }
    writeln!(out, "{:<width$}  {:>12}", "total", r.total).unwrap();
    out
}

fn verify_denominator(r: &CensusRecord) -> Option<BigCount> {
    applicable_conjecture(r.n, r.class).ok()?;
    crate::census::verify_relation(r)
        .ok()
        .map(|rep| rep.denominator_count)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioDocument {
    pub conjecture: String,
    pub n: usize,
    pub parameter: usize,
    pub numerator_count: String,
    pub denominator_count: String,
    pub expected: (usize, usize),
    pub holds: bool,
    pub empty_class: bool,
    pub status: String,
}

impl From<&RatioReport> for RatioDocument {
    fn from(r: &RatioReport) -> Self {
        RatioDocument {
            conjecture: r.conjecture.tag().to_owned(),
            n: r.n,
            parameter: r.parameter,
            numerator_count: r.numerator_count.to_string(),
            denominator_count: r.denominator_count.to_string(),
            expected: r.expected,
            holds: r.holds,
            empty_class: r.empty_class,
            status: r.status().to_owned(),
        }
    }
}

pub fn ratio_line(r: &RatioReport) -> String {
    format!(
        "[{}] n={} param={} {} : {} expected {}:{} -> {}{}",
        r.conjecture,
        r.n,
        r.parameter,
        r.numerator_count,
        r.denominator_count,
        r.expected.0,
        r.expected.1,
        r.status(),
        if r.empty_class { " (empty class)" } else { "" }
    )
}
