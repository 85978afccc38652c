//! Output weights and the C-delay between two runs with the same input and
//! output.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sst::{AnnotatedRun, Run, Sst};
use crate::wordcomb::cuts_of;

/// Number of output positions `<= j` written at a step `<= t`.
pub fn weight(run: &AnnotatedRun, t: usize, j: usize) -> Result<usize> {
    if t > run.len {
        return Err(Error::OutOfRange(format!("step {t} > run length {}", run.len)));
    }
    if j == 0 || j > run.output.len() {
        return Err(Error::OutOfRange(format!(
            "output position {j} outside 1..={}",
            run.output.len()
        )));
    }
    Ok(run.output[..j].iter().filter(|p| p.step <= t).count())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DelayReport {
    pub c: usize,
    pub cuts: Vec<usize>,
    /// `weights_left[t][k]` is the weight of the first run at step `t` and
    /// cut `cuts[k]`.
    pub weights_left: Vec<Vec<usize>>,
    pub weights_right: Vec<Vec<usize>>,
    pub delay: usize,
    /// First `(t, cut)` attaining the delay; `None` for empty outputs.
    pub argmax: Option<(usize, usize)>,
}

pub fn delay(r1: &AnnotatedRun, r2: &AnnotatedRun, c: usize) -> Result<DelayReport> {
    if c == 0 {
        return Err(Error::OutOfRange("C must be at least 1".into()));
    }
    if r1.input != r2.input || r1.len != r2.len {
        return Err(Error::InputMismatch);
    }
    let letters = |r: &AnnotatedRun| r.output.iter().map(|p| p.letter).collect::<Vec<_>>();
    let out = letters(r1);
    if out != letters(r2) {
        return Err(Error::OutputMismatch);
    }
    let cuts = cuts_of(&out, c);
    let table = |r: &AnnotatedRun| -> Result<Vec<Vec<usize>>> {
        (0..=r.len)
            .map(|t| cuts.iter().map(|&j| weight(r, t, j)).collect())
            .collect()
    };
    let weights_left = table(r1)?;
    let weights_right = table(r2)?;
    let mut delay = 0;
    let mut argmax = None;
    for t in 0..=r1.len {
        for (k, &j) in cuts.iter().enumerate() {
            let d = weights_left[t][k].abs_diff(weights_right[t][k]);
            if argmax.is_none() || d > delay {
                delay = d;
                argmax = Some((t, j));
            }
        }
    }
    Ok(DelayReport {
        c,
        cuts,
        weights_left,
        weights_right,
        delay,
        argmax,
    })
}

/// Evaluates two accepting runs and measures their delay.
pub fn run_delay(sst: &Sst, r1: &Run, r2: &Run, c: usize) -> Result<DelayReport> {
    delay(&sst.eval_run(r1)?, &sst.eval_run(r2)?, c)
}
