use std::collections::BTreeSet;

use serde::Serialize;

use super::dumbbell::{expect_access_and_exit, expect_idempotent, expect_path};
use crate::budget::Meter;
use crate::error::{Error, Result};
use crate::sst::{Run, Sst, StateId};

/// Three synchronized loop stations. Group `i` consists of
/// `prime[i] · double[i]^x · triple[i]`; all three groups read the same
/// inputs `v'`, `v''`, `v'''` in their respective components.
///
/// Group 0 goes `q1 -> r[0] -> q1`, group 1 goes `q1 -> r[1] -> q2`, and
/// group 2 goes `q2 -> r[2] -> q2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WPattern {
    pub q1: StateId,
    pub q2: StateId,
    pub r: [StateId; 3],
    pub rho0: Run,
    pub prime: [Run; 3],
    pub double: [Run; 3],
    pub triple: [Run; 3],
    pub rho4: Run,
}

impl WPattern {
    pub fn check(&self, sst: &Sst) -> Result<()> {
        let (q1, q2, r) = (self.q1, self.q2, self.r);
        expect_access_and_exit(sst, &self.rho0, q1, &self.rho4, q2)?;
        let ends = [(q1, q1), (q1, q2), (q2, q2)];
        for i in 0..3 {
            let (from, to) = ends[i];
            expect_path(sst, &self.prime[i], from, r[i], &format!("prime[{i}]"))?;
            expect_path(sst, &self.double[i], r[i], r[i], &format!("double[{i}]"))?;
            expect_path(sst, &self.triple[i], r[i], to, &format!("triple[{i}]"))?;
            expect_idempotent(sst, &self.double[i], &format!("double[{i}]"))?;
            expect_idempotent(sst, &self.group(i, 1), &format!("group {i}"))?;
        }
        for (name, comps) in [("prime", &self.prime), ("double", &self.double), ("triple", &self.triple)] {
            let v = sst.input_of(&comps[0])?;
            if sst.input_of(&comps[1])? != v || sst.input_of(&comps[2])? != v {
                return Err(Error::MalformedWitness(format!("{name} components must share their input")));
            }
        }
        Ok(())
    }

    /// `prime[i] · double[i]^x · triple[i]`.
    pub fn group(&self, i: usize, x: usize) -> Run {
        let mut run = self.prime[i].clone();
        for _ in 0..x {
            run.extend(&self.double[i]);
        }
        run.extend(&self.triple[i]);
        run
    }

    pub fn is_degenerate(&self) -> bool {
        self.prime.iter().chain(&self.double).chain(&self.triple).all(Run::is_empty)
    }
}

/// A positive sequence with one marked index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkedSeq {
    pub values: Vec<usize>,
    pub mark: usize,
}

impl MarkedSeq {
    pub fn new(values: Vec<usize>, mark: usize) -> Result<Self> {
        if mark >= values.len() {
            return Err(Error::InvalidMark("mark outside the sequence"));
        }
        if values.contains(&0) {
            return Err(Error::InvalidMark("entries must be positive"));
        }
        Ok(Self { values, mark })
    }
}

/// `rho0 · L(x1) … L(x_{i-1}) · M(x_i) · R(x_{i+1}) … R(x_n) · rho4` where
/// `L`, `M`, `R` are groups 0, 1, 2 and `i` is the mark.
pub fn build_wrun(sst: &Sst, p: &WPattern, s: &MarkedSeq) -> Result<Run> {
    let s = MarkedSeq::new(s.values.clone(), s.mark)?;
    let mut run = p.rho0.clone();
    for (k, &x) in s.values.iter().enumerate() {
        let g = match k.cmp(&s.mark) {
            std::cmp::Ordering::Less => 0,
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Greater => 2,
        };
        run.extend(&p.group(g, x));
    }
    run.extend(&p.rho4);
    sst.states_along(&run)?;
    Ok(run)
}

/// Two W-runs on the same input with different outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub tuple: [usize; 5],
    pub input: String,
    /// Output with the mark on the fourth entry.
    pub output_mark4: String,
    /// Output with the mark on the second entry.
    pub output_mark2: String,
}

/// First `n` in `{1,2}^5` (lexicographic) whose W-runs marked at positions 4
/// and 2 produce different outputs.
pub fn is_simply_divergent(sst: &Sst, p: &WPattern) -> Result<Option<Divergence>> {
    for bits in 0..32usize {
        let tuple: [usize; 5] = std::array::from_fn(|k| 1 + ((bits >> (4 - k)) & 1));
        let a = build_wrun(sst, p, &MarkedSeq::new(tuple.to_vec(), 3)?)?;
        let b = build_wrun(sst, p, &MarkedSeq::new(tuple.to_vec(), 1)?)?;
        let out_a = sst.output_of(&a)?;
        let out_b = sst.output_of(&b)?;
        if out_a != out_b {
            let input = sst.input_of(&a)?;
            if sst.input_of(&b)? != input {
                return Err(Error::InputMismatch);
            }
            return Ok(Some(Divergence {
                tuple,
                input,
                output_mark4: out_a,
                output_mark2: out_b,
            }));
        }
    }
    Ok(None)
}

/// One input together with `m` or more distinct outputs, each backed by a
/// verified W-run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Amplification {
    pub input: String,
    pub sequence: Vec<usize>,
    pub outputs: Vec<String>,
    pub runs: Vec<Run>,
}

/// Searches sequences `t` in `{1..m+1}^M` for `M = m, m+1, …` (lexicographic)
/// until the W-runs `wrun(t, mark h)` produce `m` distinct outputs. Each W-run
/// construction costs one unit of `budget`.
pub fn amplify_valuedness(
    sst: &Sst,
    p: &WPattern,
    m: usize,
    budget: u64,
) -> Result<Option<Amplification>> {
    if m == 0 {
        return Err(Error::OutOfRange("m must be positive".into()));
    }
    p.check(sst)?;
    let v = m + 1;
    let mut meter = Meter::new("amplification W-runs", budget);
    for len in m.. {
        let mut t = vec![1; len];
        loop {
            let mut seen = BTreeSet::new();
            let mut outputs = Vec::new();
            let mut runs = Vec::new();
            let mut input = None;
            for h in 0..len {
                if meter.tick().is_err() {
                    return Ok(None);
                }
                let run = build_wrun(sst, p, &MarkedSeq::new(t.clone(), h)?)?;
                let ann = sst.eval_run(&run)?;
                match &input {
                    None => input = Some(ann.input.clone()),
                    Some(u) if *u != ann.input => return Err(Error::InputMismatch),
                    Some(_) => {}
                }
                let out = ann.output_word();
                if seen.insert(out.clone()) {
                    outputs.push(out);
                    runs.push(run);
                }
            }
            if outputs.len() >= m {
                return Ok(Some(Amplification {
                    input: input.unwrap_or_default(),
                    sequence: t,
                    outputs,
                    runs,
                }));
            }
            // next tuple in lexicographic order
            let mut k = len;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                if t[k] < v {
                    t[k] += 1;
                    break;
                }
                t[k] = 1;
            }
            if t.iter().all(|&x| x == 1) {
                break;
            }
        }
    }
    unreachable!("the length loop only exits by returning")
}
