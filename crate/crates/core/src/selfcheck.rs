//! Engine self-check: independent routes that must agree before any census
//! result is trusted.

use std::collections::BTreeSet;

use crate::enumerate::{enumerate_all, enumerate_half_turn, naive_oracle, NAIVE_MAX_ORDER};
use crate::error::{AsmError, Result};
use crate::formula::asm_total_formula;
use crate::matrix::{check_entries, AsmMatrix};
use crate::symmetry::{
    antitranspose, half_turn, is_symmetric, quarter_turn, transpose, SymmetryClass,
};

/// Largest order `selfcheck` accepts.
pub const SELFCHECK_MAX_ORDER: usize = 7;
/// Group-action algebra is checked on every ASM up to this order.
const ALGEBRA_MAX_ORDER: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CheckOutcome {
            name,
            passed,
            detail,
        }
    }
}

fn all_of(n: usize) -> Vec<AsmMatrix> {
    let mut out = Vec::new();
    enumerate_all(n, |a| out.push(a.clone())).expect("order within default cap");
    out
}

fn oracle_equivalence(max_n: usize) -> CheckOutcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for n in 1..=max_n.min(NAIVE_MAX_ORDER) {
        let naive: BTreeSet<AsmMatrix> = naive_oracle(n).unwrap().into_iter().collect();
        let walked: Vec<AsmMatrix> = all_of(n);
        let walked_set: BTreeSet<AsmMatrix> = walked.iter().cloned().collect();
        let matched = naive.intersection(&walked_set).count();
        passed &= walked.len() == walked_set.len() && naive == walked_set;
        parts.push(format!("{matched}/{}", naive.len()));
    }
    let detail = match parts.as_slice() {
        [] => "nothing to compare".to_owned(),
        [one] => format!("{one} matrices matched"),
        [init @ .., last] => format!("{} and {last} matrices matched", init.join(", ")),
    };
    CheckOutcome::new("naive oracle vs state machine", passed, detail)
}

fn formula_cross_check(max_n: usize) -> CheckOutcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for n in 1..=max_n {
        let walked = enumerate_all(n, |_| {}).unwrap();
        let formula = asm_total_formula(n);
        passed &= formula == walked.into();
        parts.push(format!("n={n}: {walked} vs {formula}"));
    }
    CheckOutcome::new("enumeration vs product formula", passed, parts.join("; "))
}

fn fundamental_domain(max_n: usize) -> CheckOutcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for n in (1..=max_n).step_by(2) {
        let all = all_of(n);
        for class in SymmetryClass::SYMMETRIC {
            let filtered: BTreeSet<AsmMatrix> = all
                .iter()
                .filter(|a| is_symmetric(a, class))
                .cloned()
                .collect();
            let mut streamed = Vec::new();
            crate::enumerate::enumerate_symmetric(n, class, |a| streamed.push(a.clone())).unwrap();
            let streamed_set: BTreeSet<AsmMatrix> = streamed.iter().cloned().collect();
            passed &= streamed.len() == streamed_set.len() && streamed_set == filtered;
            parts.push(format!(
                "n={n} {}: {}/{}",
                class.tag(),
                streamed.len(),
                filtered.len()
            ));
        }
        passed &= enumerate_half_turn(n, |_| {}).is_ok();
    }
    CheckOutcome::new("fundamental domain vs filter", passed, parts.join("; "))
}

fn group_algebra(max_n: usize) -> CheckOutcome {
    let mut checked = 0usize;
    let mut failure = None;
    'outer: for n in 1..=max_n.min(ALGEBRA_MAX_ORDER) {
        for a in all_of(n) {
            let qt = quarter_turn(&a);
            let qt2 = quarter_turn(&qt);
            let ht = half_turn(&a);
            let images = [&qt, &ht, &transpose(&a), &antitranspose(&a)]
                .into_iter()
                .all(|m| check_entries(n, m.entries()).is_ok());
            let ok = images
                && quarter_turn(&quarter_turn(&qt2)) == a
                && qt2 == ht
                && antitranspose(&transpose(&a)) == ht
                && transpose(&transpose(&a)) == a
                && antitranspose(&antitranspose(&a)) == a
                && (!is_symmetric(&a, SymmetryClass::QuarterTurn)
                    || is_symmetric(&a, SymmetryClass::HalfTurn))
                && (!is_symmetric(&a, SymmetryClass::DoubleDiagonal)
                    || is_symmetric(&a, SymmetryClass::HalfTurn));
            if !ok {
                failure = Some(a);
                break 'outer;
            }
            checked += 1;
        }
    }
    match failure {
        None => CheckOutcome::new(
            "group-action algebra",
            true,
            format!("{checked} matrices checked"),
        ),
        Some(a) => CheckOutcome::new("group-action algebra", false, format!("failed on\n{a}")),
    }
}

/// Runs every self-check up to order `max_n` (at most 7).
pub fn selfcheck(max_n: usize) -> Result<Vec<CheckOutcome>> {
    if max_n > SELFCHECK_MAX_ORDER {
        return Err(AsmError::CapExceeded {
            n: max_n,
            cap: SELFCHECK_MAX_ORDER,
        });
    }
    Ok(vec![
        oracle_equivalence(max_n),
        formula_cross_check(max_n),
        fundamental_domain(max_n),
        group_algebra(max_n),
    ])
}
