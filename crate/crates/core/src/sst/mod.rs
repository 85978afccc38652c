//! The streaming string transducer model.
//!
//! An [`Sst`] reads its input left to right and keeps a fixed set of string
//! variables. Every transition rewrites the variables with a copyless
//! [`Update`]; at the end of an accepting run the final-output expression of
//! the last state is evaluated to produce the output word.

mod enumerate;
mod parse;
mod run;
mod update;

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub use enumerate::{
    ambiguity_oracle, enumerate_runs, inputs_up_to, outputs, valuedness_oracle, OracleReading,
    DEFAULT_NODE_BUDGET,
};
pub use parse::{parse_sst, ParseError};
pub(crate) use enumerate::{enumerate_with, outputs_in_witness_order, outputs_with};
pub(crate) use run::instantiate_syms;
pub use run::{AnnotatedRun, Produced, Run};
pub use update::{compose_updates, format_syms, Sym, Update, UpdateDisplay, VarId};

pub type StateId = usize;
pub type TransId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub source: StateId,
    pub letter: char,
    pub update: Update,
    pub target: StateId,
}

/// Raw components of an SST, validated by [`Sst::new`].
#[derive(Debug, Clone, Default)]
pub struct SstParts {
    pub alphabet: Vec<char>,
    /// The first variable is the designated output variable.
    pub vars: Vec<String>,
    pub states: Vec<String>,
    pub initial: Vec<StateId>,
    /// Constant initial content per variable; missing entries are empty.
    pub initial_assignment: Vec<(VarId, String)>,
    pub final_output: Vec<(StateId, Vec<Sym>)>,
    pub transitions: Vec<Transition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sst {
    alphabet: Vec<char>,
    vars: Vec<String>,
    states: Vec<String>,
    is_initial: Vec<bool>,
    initial_assignment: Vec<String>,
    final_output: Vec<Option<Vec<Sym>>>,
    transitions: Vec<Transition>,
    /// Position of each transition in the canonical run order.
    rank: Vec<usize>,
    /// `outgoing[state][letter index]`, sorted by rank.
    outgoing: Vec<Vec<Vec<TransId>>>,
}

impl Sst {
    pub fn new(parts: SstParts) -> Result<Self> {
        let SstParts {
            alphabet,
            vars,
            states,
            initial,
            initial_assignment: init_list,
            final_output: final_list,
            transitions,
        } = parts;
        let nvars = vars.len();
        let nstates = states.len();
        if nvars == 0 {
            return Err(Error::OutOfRange("an SST needs at least one variable".into()));
        }
        let mut is_initial = vec![false; nstates];
        for q in initial {
            *is_initial
                .get_mut(q)
                .ok_or_else(|| Error::OutOfRange(format!("initial state {q}")))? = true;
        }
        let mut initial_assignment = vec![String::new(); nvars];
        for (x, word) in init_list {
            if x >= nvars {
                return Err(Error::OutOfRange(format!("variable {x}")));
            }
            if let Some(c) = word.chars().find(|c| !alphabet.contains(c)) {
                return Err(Error::UnknownLetter(c));
            }
            initial_assignment[x] = word;
        }
        let mut final_output = vec![None; nstates];
        for (q, expr) in final_list {
            if q >= nstates {
                return Err(Error::OutOfRange(format!("final state {q}")));
            }
            check_syms(&expr, &alphabet, nvars)?;
            if let Some(x) = update::first_repeated_var(expr.iter(), nvars) {
                return Err(Error::NotCopyless(vars[x].clone()));
            }
            final_output[q] = Some(expr);
        }
        for t in &transitions {
            if t.source >= nstates || t.target >= nstates {
                return Err(Error::OutOfRange(format!(
                    "transition state {} -> {}",
                    t.source, t.target
                )));
            }
            if !alphabet.contains(&t.letter) {
                return Err(Error::UnknownLetter(t.letter));
            }
            if t.update.num_vars() != nvars {
                return Err(Error::VariableMismatch {
                    left: nvars,
                    right: t.update.num_vars(),
                });
            }
            for img in t.update.images() {
                check_syms(img, &alphabet, nvars)?;
            }
            if let Some(x) = t.update.copy_violation() {
                return Err(Error::NotCopyless(vars[x].clone()));
            }
        }

        let letter_index = |c: char| alphabet.iter().position(|&a| a == c).unwrap();
        let mut order: Vec<TransId> = (0..transitions.len()).collect();
        order.sort_by_key(|&i| {
            let t = &transitions[i];
            (t.source, letter_index(t.letter), t.target, i)
        });
        let mut rank = vec![0; transitions.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let mut outgoing = vec![vec![Vec::new(); alphabet.len()]; nstates];
        for &i in &order {
            let t = &transitions[i];
            outgoing[t.source][letter_index(t.letter)].push(i);
        }

        Ok(Self {
            alphabet,
            vars,
            states,
            is_initial,
            initial_assignment,
            final_output,
            transitions,
            rank,
            outgoing,
        })
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|s| s == name)
    }

    pub fn is_initial(&self, q: StateId) -> bool {
        self.is_initial[q]
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.final_output[q].is_some()
    }

    pub fn initial_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| self.is_initial[q])
    }

    pub fn final_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| self.is_final(q))
    }

    pub fn initial_assignment(&self) -> &[String] {
        &self.initial_assignment
    }

    pub fn final_output(&self, q: StateId) -> Option<&[Sym]> {
        self.final_output[q].as_deref()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, t: TransId) -> &Transition {
        &self.transitions[t]
    }

    /// Position of a transition in the canonical order
    /// `(source, letter, target, declaration index)`.
    pub fn rank(&self, t: TransId) -> usize {
        self.rank[t]
    }

    pub fn letter_index(&self, c: char) -> Option<usize> {
        self.alphabet.iter().position(|&a| a == c)
    }

    /// Transitions leaving `q` on `letter`, in canonical order.
    pub fn successors(&self, q: StateId, letter: char) -> &[TransId] {
        match self.letter_index(letter) {
            Some(i) => &self.outgoing[q][i],
            None => &[],
        }
    }

    pub(crate) fn successors_by_index(&self, q: StateId, letter: usize) -> &[TransId] {
        &self.outgoing[q][letter]
    }

    pub fn display_update<'a>(&'a self, update: &'a Update) -> UpdateDisplay<'a> {
        UpdateDisplay {
            update,
            names: &self.vars,
        }
    }

    /// States reachable from some initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue: VecDeque<StateId> = self.initial_states().collect();
        for &q in &queue {
            seen[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for t in self.transitions.iter().filter(|t| t.source == q) {
                if !seen[t.target] {
                    seen[t.target] = true;
                    queue.push_back(t.target);
                }
            }
        }
        seen
    }

    /// States from which some final state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue: VecDeque<StateId> = self.final_states().collect();
        for &q in &queue {
            seen[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for t in self.transitions.iter().filter(|t| t.target == q) {
                if !seen[t.source] {
                    seen[t.source] = true;
                    queue.push_back(t.source);
                }
            }
        }
        seen
    }

    /// A shortest run from `from` to `to` (breadth-first, canonical tie-break).
    pub fn shortest_path(&self, from: StateId, to: StateId) -> Option<Run> {
        let mut parent: Vec<Option<TransId>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(q) = queue.pop_front() {
            if q == to {
                let mut steps = Vec::new();
                let mut cur = q;
                while cur != from {
                    let t = parent[cur].expect("parent of visited state");
                    steps.push(t);
                    cur = self.transitions[t].source;
                }
                steps.reverse();
                return Some(Run::new(from, steps));
            }
            for per_letter in &self.outgoing[q] {
                for &t in per_letter {
                    let r = self.transitions[t].target;
                    if !seen[r] {
                        seen[r] = true;
                        parent[r] = Some(t);
                        queue.push_back(r);
                    }
                }
            }
        }
        None
    }
}

fn check_syms(syms: &[Sym], alphabet: &[char], nvars: usize) -> Result<()> {
    for s in syms {
        match *s {
            Sym::Letter(c) if !alphabet.contains(&c) => return Err(Error::UnknownLetter(c)),
            Sym::Var(x) if x >= nvars => return Err(Error::OutOfRange(format!("variable {x}"))),
            _ => {}
        }
    }
    Ok(())
}

/// Serializes back to the textual format accepted by [`parse_sst`].
impl fmt::Display for Sst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.alphabet.iter().map(|c| c.to_string()).collect();
        writeln!(f, "alphabet: {}", letters.join(" "))?;
        writeln!(f, "vars: {}", self.vars.join(" "))?;
        writeln!(f, "states: {}", self.states.join(" "))?;
        let initial: Vec<&str> = self.initial_states().map(|q| self.state_name(q)).collect();
        writeln!(f, "initial: {}", initial.join(" "))?;
        for (x, word) in self.initial_assignment.iter().enumerate() {
            if !word.is_empty() {
                let spaced: Vec<String> = word.chars().map(|c| c.to_string()).collect();
                writeln!(f, "init {} = {}", self.vars[x], spaced.join(" "))?;
            }
        }
        for q in self.final_states() {
            let expr = format_syms(self.final_output(q).unwrap(), &self.vars);
            writeln!(f, "final {} -> {}", self.states[q], expr)?;
        }
        for t in &self.transitions {
            writeln!(
                f,
                "trans {} {} {} {}",
                self.states[t.source],
                t.letter,
                self.states[t.target],
                self.display_update(&t.update)
            )?;
        }
        Ok(())
    }
}
