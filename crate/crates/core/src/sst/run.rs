use serde::Serialize;

use super::{Sst, StateId, Sym, TransId, Update};
use crate::error::{Error, Result};

/// A sequence of transitions starting in `start`. Positions `0..=len` sit
/// between transitions; position `i` is the state reached after `i` steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Run {
    pub start: StateId,
    pub steps: Vec<TransId>,
}

/// An output letter tagged with the step that introduced it: `0` for the
/// initial assignment, `t` for the `t`-th transition, `len` for constants of
/// the final-output expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Produced {
    pub letter: char,
    pub step: usize,
}

/// The consumed input and provenance-annotated output of an accepting run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnotatedRun {
    pub input: String,
    pub len: usize,
    pub output: Vec<Produced>,
}

impl AnnotatedRun {
    pub fn output_word(&self) -> String {
        self.output.iter().map(|p| p.letter).collect()
    }

    pub fn steps(&self) -> Vec<usize> {
        self.output.iter().map(|p| p.step).collect()
    }
}

impl Run {
    pub fn new(start: StateId, steps: Vec<TransId>) -> Self {
        Self { start, steps }
    }

    pub fn empty(start: StateId) -> Self {
        Self {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Appends `other` without checking that the states chain.
    pub fn concat(&self, other: &Run) -> Run {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Run::new(self.start, steps)
    }

    pub fn extend(&mut self, other: &Run) {
        self.steps.extend_from_slice(&other.steps);
    }
}

impl Sst {
    /// States at every position of the run, checking that steps chain.
    pub fn states_along(&self, run: &Run) -> Result<Vec<StateId>> {
        if run.start >= self.num_states() {
            return Err(Error::OutOfRange(format!("start state {}", run.start)));
        }
        let mut states = Vec::with_capacity(run.len() + 1);
        let mut cur = run.start;
        states.push(cur);
        for (i, &t) in run.steps.iter().enumerate() {
            let tr = self
                .transitions()
                .get(t)
                .ok_or(Error::UnknownTransition(t))?;
            if tr.source != cur {
                return Err(Error::BrokenRun {
                    step: i + 1,
                    expected: self.state_name(cur).to_string(),
                    found: self.state_name(tr.source).to_string(),
                });
            }
            cur = tr.target;
            states.push(cur);
        }
        Ok(states)
    }

    pub fn end_state(&self, run: &Run) -> Result<StateId> {
        Ok(*self.states_along(run)?.last().unwrap())
    }

    pub fn is_accepting(&self, run: &Run) -> bool {
        match self.end_state(run) {
            Ok(end) => self.is_initial(run.start) && self.is_final(end),
            Err(_) => false,
        }
    }

    pub fn input_of(&self, run: &Run) -> Result<String> {
        self.states_along(run)?;
        Ok(run.steps.iter().map(|&t| self.transition(t).letter).collect())
    }

    /// The composition of all updates along the run.
    pub fn induced_update(&self, run: &Run) -> Result<Update> {
        self.states_along(run)?;
        let mut acc = Update::identity(self.num_vars());
        for &t in &run.steps {
            acc = acc.then(&self.transition(t).update)?;
        }
        Ok(acc)
    }

    fn check_accepting(&self, run: &Run) -> Result<StateId> {
        let end = self.end_state(run)?;
        if !self.is_initial(run.start) {
            return Err(Error::NotAccepting("run does not start in an initial state"));
        }
        if !self.is_final(end) {
            return Err(Error::NotAccepting("run does not end in a final state"));
        }
        Ok(end)
    }

    /// Evaluates an accepting run step by step, tagging every output letter
    /// with the step that wrote it.
    pub fn eval_run(&self, run: &Run) -> Result<AnnotatedRun> {
        let end = self.check_accepting(run)?;
        let mut vals: Vec<Vec<Produced>> = self
            .initial_assignment()
            .iter()
            .map(|w| w.chars().map(|letter| Produced { letter, step: 0 }).collect())
            .collect();
        for (i, &t) in run.steps.iter().enumerate() {
            vals = substitute_tagged(&self.transition(t).update, vals, i + 1);
        }
        let mut output = Vec::new();
        for sym in self.final_output(end).unwrap() {
            match *sym {
                Sym::Letter(letter) => output.push(Produced {
                    letter,
                    step: run.len(),
                }),
                Sym::Var(x) => output.append(&mut vals[x]),
            }
        }
        Ok(AnnotatedRun {
            input: self.input_of(run)?,
            len: run.len(),
            output,
        })
    }

    /// Output of an accepting run computed as `(ι β O)(X1)`: the induced
    /// update is composed symbolically and only then instantiated.
    pub fn output_by_composition(&self, run: &Run) -> Result<String> {
        let end = self.check_accepting(run)?;
        let induced = self.induced_update(run)?;
        let final_expr = induced.apply(self.final_output(end).unwrap());
        Ok(instantiate_syms(&final_expr, self.initial_assignment()))
    }

    pub fn output_of(&self, run: &Run) -> Result<String> {
        Ok(self.eval_run(run)?.output_word())
    }

    /// Applies an update to a concrete valuation.
    pub fn apply_update(&self, update: &Update, vals: &[String]) -> Vec<String> {
        update
            .images()
            .iter()
            .map(|img| instantiate_syms(img, vals))
            .collect()
    }

    /// Reads the output from a valuation at final state `q`.
    pub fn read_output(&self, q: StateId, vals: &[String]) -> Option<String> {
        self.final_output(q).map(|expr| instantiate_syms(expr, vals))
    }
}

pub(crate) fn instantiate_syms(syms: &[Sym], vals: &[String]) -> String {
    let mut out = String::new();
    for s in syms {
        match *s {
            Sym::Letter(c) => out.push(c),
            Sym::Var(x) => out.push_str(&vals[x]),
        }
    }
    out
}

fn substitute_tagged(update: &Update, mut old: Vec<Vec<Produced>>, step: usize) -> Vec<Vec<Produced>> {
    update
        .images()
        .iter()
        .map(|img| {
            let mut new = Vec::new();
            for s in img {
                match *s {
                    Sym::Letter(letter) => new.push(Produced { letter, step }),
                    // copyless: every variable is moved at most once
                    Sym::Var(y) => new.append(&mut old[y]),
                }
            }
            new
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn appender_tags_each_step() {
        let sst = fixtures::id();
        let run = Run::new(0, vec![0, 0]);
        let ann = sst.eval_run(&run).unwrap();
        assert_eq!(ann.output_word(), "aa");
        assert_eq!(ann.steps(), vec![1, 2]);
        assert_eq!(ann.input, "aa");
    }

    #[test]
    fn tsc_all_append_in_qa() {
        let sst = fixtures::tsc();
        // declaration order: 0 = prepend 0, 1 = append 0, 2 = prepend 1, 3 = append 1
        let run = Run::new(0, vec![1, 3]);
        assert_eq!(sst.output_of(&run).unwrap(), "01");
    }

    #[test]
    fn tsc1_prepend_and_append() {
        let sst = fixtures::tsc1();
        assert_eq!(sst.output_of(&Run::new(0, vec![0])).unwrap(), "01");
        assert_eq!(sst.output_of(&Run::new(0, vec![1])).unwrap(), "10");
        let ann = sst.eval_run(&Run::new(0, vec![0])).unwrap();
        assert_eq!(ann.steps(), vec![1, 0]);
    }

    #[test]
    fn rejects_non_accepting_and_broken_runs() {
        let sst = fixtures::r2();
        let s0 = sst.state_id("s0").unwrap();
        assert!(matches!(
            sst.eval_run(&Run::empty(s0)),
            Err(Error::NotAccepting(_))
        ));
        // s0 -0-> s1 followed by a transition leaving c1
        let broken = Run::new(s0, vec![0, 6]);
        assert!(matches!(sst.eval_run(&broken), Err(Error::BrokenRun { .. })));
    }

    #[test]
    fn composition_route_agrees() {
        let sst = fixtures::tsc1();
        let run = Run::new(1, vec![4, 7, 5, 6]);
        assert_eq!(
            sst.output_by_composition(&run).unwrap(),
            sst.output_of(&run).unwrap()
        );
    }
}
