//! Ambiguity and valuedness analysis.
//!
//! Finite ambiguity is decided exactly by searching for a [`Dumbbell`].
//! Finite valuedness is analyzed by a sound partial procedure: no dumbbell
//! means finite-valued, a verified simply divergent [`WPattern`] means not
//! finite-valued, and anything else is reported as unknown.

mod dumbbell;
mod search;
mod wpattern;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::skeleton::{SkeletonMonoid, DEFAULT_MONOID_CAP};
use crate::sst::{valuedness_oracle, OracleReading, Sst, DEFAULT_NODE_BUDGET};

pub use dumbbell::{find_dumbbell, is_finite_ambiguous, Dumbbell};
pub use search::{SearchLimits, SearchReport};
pub use wpattern::{
    amplify_valuedness, build_wrun, is_simply_divergent, Amplification, Divergence, MarkedSeq,
    WPattern,
};

/// Knobs for [`analyze_valuedness`]. The defaults are desk-scale choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AnalysisBudget {
    pub monoid_cap: u64,
    /// Node budget for the dumbbell product search and for oracles.
    pub node_budget: u64,
    /// Maximum length of each W-pattern component run.
    pub component_len: usize,
    pub max_candidates: u64,
    pub max_expansions: u64,
    /// Input lengths at which the brute-force oracle is read.
    pub oracle_lens: [usize; 3],
}

impl Default for AnalysisBudget {
    fn default() -> Self {
        Self {
            monoid_cap: DEFAULT_MONOID_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
            component_len: 4,
            max_candidates: 1_000_000,
            max_expansions: DEFAULT_NODE_BUDGET,
            oracle_lens: [2, 4, 6],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    Finite,
    Infinite,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Evidence {
    /// The product search found no dumbbell, so the SST is finite-ambiguous.
    NoDumbbell { monoid_size: usize },
    /// A simply divergent W-pattern, re-verified by the run evaluator.
    Divergent {
        dumbbell: Box<Dumbbell>,
        pattern: Box<WPattern>,
        divergence: Divergence,
        search: SearchReport,
    },
    /// Neither certificate was found within the budget.
    Inconclusive {
        dumbbell: Option<Box<Dumbbell>>,
        reason: String,
        search: Option<SearchReport>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub evidence: Evidence,
    pub budgets: AnalysisBudget,
    /// Readings at each length of `budgets.oracle_lens` that fit the node budget.
    pub oracle_readings: Vec<OracleReading>,
}

fn oracle_readings(sst: &Sst, budget: &AnalysisBudget) -> Vec<OracleReading> {
    budget
        .oracle_lens
        .iter()
        .map_while(|&n| valuedness_oracle(sst, n, budget.node_budget).ok())
        .collect()
}

pub fn analyze_valuedness(sst: &Sst, budget: &AnalysisBudget) -> Result<Verdict> {
    let verdict = |kind, evidence| Verdict {
        kind,
        evidence,
        budgets: *budget,
        oracle_readings: oracle_readings(sst, budget),
    };
    let unknown = |dumbbell: Option<Dumbbell>, reason: String, search| {
        verdict(
            VerdictKind::Unknown,
            Evidence::Inconclusive {
                dumbbell: dumbbell.map(Box::new),
                reason,
                search,
            },
        )
    };

    let dumbbell = match find_dumbbell(sst, budget.monoid_cap, budget.node_budget) {
        Ok(Some(d)) => d,
        Ok(None) => {
            let monoid_size = SkeletonMonoid::new(sst, budget.monoid_cap)?.len();
            return Ok(verdict(VerdictKind::Finite, Evidence::NoDumbbell { monoid_size }));
        }
        Err(Error::BudgetExceeded { what, limit }) => {
            return Ok(unknown(None, format!("{what} limit {limit} reached"), None));
        }
        Err(e) => return Err(e),
    };
    dumbbell.check(sst)?;

    let limits = SearchLimits {
        component_len: budget.component_len,
        max_candidates: budget.max_candidates,
        max_expansions: budget.max_expansions,
    };
    match search::search_wpattern(sst, limits)? {
        search::SearchOutcome::Found(pattern, divergence, report) => {
            pattern.check(sst)?;
            let again = is_simply_divergent(sst, &pattern)?;
            if again.as_ref() != Some(&divergence) {
                return Err(Error::MalformedWitness("divergence did not re-verify".into()));
            }
            Ok(verdict(
                VerdictKind::Infinite,
                Evidence::Divergent {
                    dumbbell: Box::new(dumbbell),
                    pattern,
                    divergence,
                    search: report,
                },
            ))
        }
        search::SearchOutcome::NotFound(report) => {
            let reason = match &report.stopped_by {
                Some(why) => why.clone(),
                None => format!(
                    "no simply divergent W-pattern with components of length at most {}",
                    budget.component_len
                ),
            };
            Ok(unknown(Some(dumbbell), reason, Some(report)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn small() -> AnalysisBudget {
        AnalysisBudget {
            component_len: 2,
            ..AnalysisBudget::default()
        }
    }

    #[test]
    fn appender_is_finite() {
        let v = analyze_valuedness(&fixtures::id(), &AnalysisBudget::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::Finite);
    }

    #[test]
    fn seeded_two_sided_count_is_infinite() {
        let sst = fixtures::tsc1();
        let v = analyze_valuedness(&sst, &AnalysisBudget::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::Infinite);
        let Evidence::Divergent { pattern, divergence, .. } = &v.evidence else {
            panic!("expected a divergent pattern");
        };
        pattern.check(&sst).unwrap();
        assert_ne!(divergence.output_mark4, divergence.output_mark2);
        let all = crate::sst::outputs(&sst, &divergence.input, DEFAULT_NODE_BUDGET).unwrap();
        assert!(all.contains(&divergence.output_mark4));
        assert!(all.contains(&divergence.output_mark2));
    }

    #[test]
    fn two_sided_count_is_unknown() {
        let budget = AnalysisBudget {
            component_len: 1,
            ..AnalysisBudget::default()
        };
        let v = analyze_valuedness(&fixtures::tsc(), &budget).unwrap();
        assert_eq!(v.kind, VerdictKind::Unknown);
        assert_eq!(v.oracle_readings.last().unwrap().max, 2);
        let Evidence::Inconclusive { search: Some(report), .. } = &v.evidence else {
            panic!("expected a search report");
        };
        assert!(report.exhausted);
    }

    #[test]
    fn amb_is_infinite_and_r2_is_unknown() {
        let v = analyze_valuedness(&fixtures::amb(), &small()).unwrap();
        assert_eq!(v.kind, VerdictKind::Infinite);
        // four-valued, yet infinitely ambiguous
        let v = analyze_valuedness(&fixtures::r2(), &small()).unwrap();
        assert_eq!(v.kind, VerdictKind::Unknown);
    }

    #[test]
    fn amplify_seeded_count() {
        let sst = fixtures::tsc1();
        let v = analyze_valuedness(&sst, &AnalysisBudget::default()).unwrap();
        let Evidence::Divergent { pattern, .. } = v.evidence else { panic!() };
        let amp = amplify_valuedness(&sst, &pattern, 3, 100_000).unwrap().unwrap();
        assert!(amp.outputs.len() >= 3);
        let all = crate::sst::outputs(&sst, &amp.input, DEFAULT_NODE_BUDGET).unwrap();
        assert!(amp.outputs.iter().all(|o| all.contains(o)));
    }

    #[test]
    fn tiny_budgets_fold_into_unknown() {
        let budget = AnalysisBudget {
            monoid_cap: 0,
            ..AnalysisBudget::default()
        };
        let v = analyze_valuedness(&fixtures::tsc1(), &budget).unwrap();
        assert_eq!(v.kind, VerdictKind::Unknown);
    }
}
