//! Exhaustive enumeration of accepting runs, and the brute-force oracles
//! built on top of it.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::{Run, Sst, StateId};
use crate::budget::Meter;
use crate::error::Result;

/// Default number of run-prefix expansions an enumeration may perform.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// All accepting runs on `input`, in canonical lexicographic order.
pub fn enumerate_runs(sst: &Sst, input: &str, budget: u64) -> Result<Vec<Run>> {
    let mut meter = Meter::new("run enumeration", budget);
    enumerate_with(sst, input, &mut meter)
}

pub(crate) fn enumerate_with(sst: &Sst, input: &str, meter: &mut Meter) -> Result<Vec<Run>> {
    let letters: Option<Vec<usize>> = input.chars().map(|c| sst.letter_index(c)).collect();
    let Some(letters) = letters else {
        return Ok(Vec::new());
    };
    let n = letters.len();
    // live[i][q]: some accepting continuation reads letters[i..] from q
    let mut live = vec![vec![false; sst.num_states()]; n + 1];
    for q in sst.final_states() {
        live[n][q] = true;
    }
    for i in (0..n).rev() {
        for q in 0..sst.num_states() {
            live[i][q] = sst
                .successors_by_index(q, letters[i])
                .iter()
                .any(|&t| live[i + 1][sst.transition(t).target]);
        }
    }

    let mut runs = Vec::new();
    let mut steps = Vec::with_capacity(n);
    for q in sst.initial_states() {
        if live[0][q] {
            meter.tick()?;
            dfs(sst, &letters, &live, q, q, &mut steps, &mut runs, meter)?;
        }
    }
    Ok(runs)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    sst: &Sst,
    letters: &[usize],
    live: &[Vec<bool>],
    start: StateId,
    q: StateId,
    steps: &mut Vec<usize>,
    runs: &mut Vec<Run>,
    meter: &mut Meter,
) -> Result<()> {
    let i = steps.len();
    if i == letters.len() {
        runs.push(Run::new(start, steps.clone()));
        return Ok(());
    }
    for &t in sst.successors_by_index(q, letters[i]) {
        let r = sst.transition(t).target;
        if live[i + 1][r] {
            meter.tick()?;
            steps.push(t);
            dfs(sst, letters, live, start, r, steps, runs, meter)?;
            steps.pop();
        }
    }
    Ok(())
}

/// The set of outputs produced on `input`.
pub fn outputs(sst: &Sst, input: &str, budget: u64) -> Result<BTreeSet<String>> {
    let mut meter = Meter::new("run enumeration", budget);
    outputs_with(sst, input, &mut meter)
}

pub(crate) fn outputs_with(sst: &Sst, input: &str, meter: &mut Meter) -> Result<BTreeSet<String>> {
    enumerate_with(sst, input, meter)?
        .iter()
        .map(|run| sst.output_of(run))
        .collect()
}

/// Inputs of length `1..=max_len` in length-lexicographic order (alphabet
/// order), followed by the empty word.
pub fn inputs_up_to(alphabet: &[char], max_len: usize) -> impl Iterator<Item = String> + '_ {
    let mut digits: Vec<usize> = Vec::new();
    let mut done_nonempty = alphabet.is_empty() || max_len == 0;
    let mut emitted_empty = false;
    std::iter::from_fn(move || {
        if !done_nonempty {
            // odometer increment, least significant digit last
            let mut i = digits.len();
            loop {
                if i == 0 {
                    if digits.len() == max_len {
                        done_nonempty = true;
                        break;
                    }
                    digits = vec![0; digits.len() + 1];
                    break;
                }
                i -= 1;
                if digits[i] + 1 < alphabet.len() {
                    digits[i] += 1;
                    for d in &mut digits[i + 1..] {
                        *d = 0;
                    }
                    break;
                }
            }
            if !done_nonempty {
                return Some(digits.iter().map(|&d| alphabet[d]).collect());
            }
        }
        if !emitted_empty {
            emitted_empty = true;
            return Some(String::new());
        }
        None
    })
}

/// Largest count over all inputs up to a length, with the first input (in
/// [`inputs_up_to`] order) that attains it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReading {
    pub max: usize,
    pub witness: String,
    pub max_len: usize,
    pub inputs_checked: usize,
}

fn input_space(alphabet: usize, max_len: usize) -> u64 {
    let mut total: u64 = 1;
    let mut layer: u64 = 1;
    for _ in 0..max_len {
        layer = layer.saturating_mul(alphabet as u64);
        total = total.saturating_add(layer);
    }
    total
}

fn oracle(
    sst: &Sst,
    max_len: usize,
    budget: u64,
    count: impl Fn(&Sst, &str, &mut Meter) -> Result<usize>,
) -> Result<OracleReading> {
    let mut meter = Meter::new("oracle input space and run enumeration", budget);
    meter.add(input_space(sst.alphabet().len(), max_len))?;
    let mut best = OracleReading {
        max: 0,
        witness: String::new(),
        max_len,
        inputs_checked: 0,
    };
    let mut first = true;
    for input in inputs_up_to(sst.alphabet(), max_len) {
        let c = count(sst, &input, &mut meter)?;
        best.inputs_checked += 1;
        if first || c > best.max {
            best.max = c;
            best.witness = input;
            first = false;
        }
    }
    Ok(best)
}

/// Maximum number of distinct outputs over all inputs of length at most `max_len`.
pub fn valuedness_oracle(sst: &Sst, max_len: usize, budget: u64) -> Result<OracleReading> {
    oracle(sst, max_len, budget, |sst, u, m| Ok(outputs_with(sst, u, m)?.len()))
}

/// Maximum number of accepting runs over all inputs of length at most `max_len`.
pub fn ambiguity_oracle(sst: &Sst, max_len: usize, budget: u64) -> Result<OracleReading> {
    oracle(sst, max_len, budget, |sst, u, m| Ok(enumerate_with(sst, u, m)?.len()))
}

/// Distinct outputs in order of their lexicographically least witnessing run.
pub(crate) fn outputs_in_witness_order(
    sst: &Sst,
    input: &str,
    meter: &mut Meter,
) -> Result<Vec<String>> {
    let mut seen = HashSet::new();
    let mut ordered = Vec::new();
    for run in enumerate_with(sst, input, meter)? {
        let out = sst.output_of(&run)?;
        if seen.insert(out.clone()) {
            ordered.push(out);
        }
    }
    Ok(ordered)
}
