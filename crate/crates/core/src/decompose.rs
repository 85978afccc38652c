//! Run order, per-input semantic cover, single-valued selectors, and bounded
//! equivalence.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::budget::Meter;
use crate::delay::run_delay;
use crate::error::{Error, Result};
use crate::sst::{
    enumerate_with, inputs_up_to, outputs_in_witness_order, outputs_with, Run, Sst,
};

/// Compares two runs on the same input: first by start state, then
/// lexicographically by transition rank.
pub fn lex_compare(sst: &Sst, r1: &Run, r2: &Run) -> Result<Ordering> {
    if sst.input_of(r1)? != sst.input_of(r2)? {
        return Err(Error::InputMismatch);
    }
    let key = |r: &Run| r.steps.iter().map(|&t| sst.rank(t)).collect::<Vec<_>>();
    Ok(r1.start.cmp(&r2.start).then_with(|| key(r1).cmp(&key(r2))))
}

/// Accepting runs on `input` that have no lexicographically smaller run with
/// the same output within delay `d` (measured at `c`-cuts).
pub fn semantic_cover(sst: &Sst, input: &str, c: usize, d: usize, budget: u64) -> Result<Vec<Run>> {
    let mut meter = Meter::new("run enumeration", budget);
    let runs = enumerate_with(sst, input, &mut meter)?;
    let outs: Vec<String> = runs.iter().map(|r| sst.output_of(r)).collect::<Result<_>>()?;
    let mut cover = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        let mut shadowed = false;
        for j in 0..i {
            if outs[j] == outs[i] && run_delay(sst, &runs[j], run, c)?.delay <= d {
                shadowed = true;
                break;
            }
        }
        if !shadowed {
            cover.push(run.clone());
        }
    }
    Ok(cover)
}

/// The `index`-th single-valued component (0-based) of a decomposition.
#[derive(Debug, Clone, Copy)]
pub struct Selector<'a> {
    sst: &'a Sst,
    index: usize,
    budget: u64,
}

impl Selector<'_> {
    pub fn index(&self) -> usize {
        self.index
    }

    /// The `index`-th distinct output on `input`, ordering outputs by their
    /// lexicographically least witnessing run.
    pub fn eval(&self, input: &str) -> Result<Option<String>> {
        let mut meter = Meter::new("run enumeration", self.budget);
        Ok(outputs_in_witness_order(self.sst, input, &mut meter)?
            .into_iter()
            .nth(self.index))
    }
}

/// `k` selectors whose graphs together cover the relation on every input
/// with at most `k` outputs.
pub fn decompose_selectors(sst: &Sst, k: usize, budget: u64) -> Vec<Selector<'_>> {
    (0..k)
        .map(|index| Selector { sst, index, budget })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Equivalence {
    Equal { inputs_checked: usize },
    Counterexample {
        input: String,
        left: BTreeSet<String>,
        right: BTreeSet<String>,
    },
}

/// Compares output sets on all inputs up to `max_len` (nonempty inputs in
/// length-lexicographic order, then the empty input).
pub fn check_equivalence_bounded(a: &Sst, b: &Sst, max_len: usize, budget: u64) -> Result<Equivalence> {
    let letters = |s: &Sst| s.alphabet().iter().copied().collect::<BTreeSet<char>>();
    if letters(a) != letters(b) {
        return Err(Error::AlphabetMismatch);
    }
    let mut meter = Meter::new("equivalence run enumeration", budget);
    let mut checked = 0;
    for input in inputs_up_to(a.alphabet(), max_len) {
        let left = outputs_with(a, &input, &mut meter)?;
        let right = outputs_with(b, &input, &mut meter)?;
        checked += 1;
        if left != right {
            return Ok(Equivalence::Counterexample { input, left, right });
        }
    }
    Ok(Equivalence::Equal { inputs_checked: checked })
}
