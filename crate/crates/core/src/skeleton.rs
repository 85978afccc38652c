//! Skeletons, loops, pumping, and the symbolic output of pumped runs.

use std::collections::HashMap;
use std::fmt;

use crate::budget::Meter;
use crate::error::{Error, Result};
use crate::sst::{Run, Sst, Sym, TransId, Update, VarId};
use crate::wordcomb::{Assignment, ParamWord};

/// An update with every letter erased.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Skeleton {
    images: Vec<Vec<VarId>>,
}

impl Skeleton {
    pub fn new(images: Vec<Vec<VarId>>) -> Self {
        Self { images }
    }

    pub fn identity(vars: usize) -> Self {
        Self {
            images: (0..vars).map(|x| vec![x]).collect(),
        }
    }

    pub fn images(&self) -> &[Vec<VarId>] {
        &self.images
    }

    /// `self` followed by `next`, mirroring [`Update::then`].
    pub fn then(&self, next: &Skeleton) -> Skeleton {
        Skeleton {
            images: next
                .images
                .iter()
                .map(|img| img.iter().flat_map(|&y| self.images[y].iter().copied()).collect())
                .collect(),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.then(self) == *self
    }
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(x, img)| {
                let rhs: Vec<String> = img.iter().map(|y| format!("X{}", y + 1)).collect();
                format!("X{} := {}", x + 1, rhs.join(" "))
            })
            .collect();
        write!(f, "{{ {} }}", parts.join(" ; "))
    }
}

pub fn skeleton_of(u: &Update) -> Skeleton {
    Skeleton {
        images: u
            .images()
            .iter()
            .map(|img| {
                img.iter()
                    .filter_map(|s| match *s {
                        Sym::Var(y) => Some(y),
                        Sym::Letter(_) => None,
                    })
                    .collect()
            })
            .collect(),
    }
}

pub fn is_idempotent(s: &Skeleton) -> bool {
    s.is_idempotent()
}

/// Default cap on the number of skeleton-monoid elements.
pub const DEFAULT_MONOID_CAP: u64 = 1_000_000;

/// The monoid generated by the transition skeletons of an SST, with a
/// right-multiplication table by transitions.
#[derive(Debug, Clone)]
pub struct SkeletonMonoid {
    elements: Vec<Skeleton>,
    idempotent: Vec<bool>,
    /// `step[e][t]` is the element `e · skeleton(t)`.
    step: Vec<Vec<usize>>,
}

impl SkeletonMonoid {
    pub fn new(sst: &Sst, cap: u64) -> Result<Self> {
        let gens: Vec<Skeleton> = sst
            .transitions()
            .iter()
            .map(|t| skeleton_of(&t.update))
            .collect();
        let mut meter = Meter::new("skeleton monoid size", cap);
        let mut index: HashMap<Skeleton, usize> = HashMap::new();
        let mut elements = vec![Skeleton::identity(sst.num_vars())];
        index.insert(elements[0].clone(), 0);
        meter.tick()?;
        let mut step: Vec<Vec<usize>> = Vec::new();
        let mut next = 0;
        while next < elements.len() {
            let mut row = Vec::with_capacity(gens.len());
            for g in &gens {
                let prod = elements[next].then(g);
                let id = match index.get(&prod) {
                    Some(&id) => id,
                    None => {
                        meter.tick()?;
                        let id = elements.len();
                        index.insert(prod.clone(), id);
                        elements.push(prod);
                        id
                    }
                };
                row.push(id);
            }
            step.push(row);
            next += 1;
        }
        let idempotent = elements.iter().map(Skeleton::is_idempotent).collect();
        Ok(Self {
            elements,
            idempotent,
            step,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, e: usize) -> &Skeleton {
        &self.elements[e]
    }

    pub fn step(&self, e: usize, t: TransId) -> usize {
        self.step[e][t]
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.idempotent[e]
    }
}

/// All intervals `[i, j]` with `i < j` whose endpoints carry the same state
/// and whose induced update is skeleton-idempotent.
pub fn find_loops(sst: &Sst, run: &Run) -> Result<Vec<(usize, usize)>> {
    let states = sst.states_along(run)?;
    let skels: Vec<Skeleton> = run
        .steps
        .iter()
        .map(|&t| skeleton_of(&sst.transition(t).update))
        .collect();
    let mut loops = Vec::new();
    for i in 0..run.len() {
        let mut acc = Skeleton::identity(sst.num_vars());
        for j in i + 1..=run.len() {
            acc = acc.then(&skels[j - 1]);
            if states[i] == states[j] && acc.is_idempotent() {
                loops.push((i, j));
            }
        }
    }
    Ok(loops)
}

/// Disjoint loops on a run, sorted by position, with their induced updates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopSet {
    intervals: Vec<(usize, usize)>,
    updates: Vec<Update>,
}

impl LoopSet {
    /// Validates the intervals against `run`. Parameters and pumping counts
    /// refer to the intervals in sorted order.
    pub fn new(sst: &Sst, run: &Run, intervals: &[(usize, usize)]) -> Result<Self> {
        let states = sst.states_along(run)?;
        let mut intervals = intervals.to_vec();
        intervals.sort_unstable();
        let mut updates = Vec::with_capacity(intervals.len());
        for &(i, j) in &intervals {
            let invalid = |reason| Error::InvalidLoop {
                start: i,
                end: j,
                reason,
            };
            if i > j || j > run.len() {
                return Err(invalid("outside the run"));
            }
            if states[i] != states[j] {
                return Err(invalid("endpoints carry different states"));
            }
            let block = Run::new(states[i], run.steps[i..j].to_vec());
            let update = sst.induced_update(&block)?;
            if !skeleton_of(&update).is_idempotent() {
                return Err(invalid("induced skeleton is not idempotent"));
            }
            updates.push(update);
        }
        for w in intervals.windows(2) {
            let ((i1, j1), (i2, j2)) = (w[0], w[1]);
            if i2 < j1 {
                return Err(Error::OverlappingLoops(i1, j1, i2, j2));
            }
        }
        Ok(Self { intervals, updates })
    }

    pub fn intervals(&self) -> &[(usize, usize)] {
        &self.intervals
    }

    pub fn updates(&self) -> &[Update] {
        &self.updates
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Repeats every loop block `counts[k]` times.
pub fn pump(sst: &Sst, run: &Run, loops: &LoopSet, counts: &[usize]) -> Result<Run> {
    if counts.len() != loops.len() || counts.contains(&0) {
        return Err(Error::BadCounts);
    }
    let mut steps = Vec::new();
    let mut pos = 0;
    for (&(i, j), &n) in loops.intervals().iter().zip(counts) {
        steps.extend_from_slice(&run.steps[pos..i]);
        for _ in 0..n {
            steps.extend_from_slice(&run.steps[i..j]);
        }
        pos = j;
    }
    steps.extend_from_slice(&run.steps[pos..]);
    let pumped = Run::new(run.start, steps);
    sst.states_along(&pumped)?;
    Ok(pumped)
}

fn letters_only(syms: &[Sym]) -> String {
    syms.iter()
        .map(|s| match *s {
            Sym::Letter(c) => c,
            Sym::Var(_) => unreachable!("idempotent copyless images hide no variables here"),
        })
        .collect()
}

/// Words `(left, right)` with `u^n(x) = left^{n-1} u(x) right^{n-1}` for all
/// `n >= 1`.
pub fn idempotent_power_words(u: &Update, x: VarId) -> Result<(String, String)> {
    if !skeleton_of(u).is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    if x >= u.num_vars() {
        return Err(Error::OutOfRange(format!("variable {x}")));
    }
    let img = u.image(x);
    let Some(pos) = img.iter().position(|s| *s == Sym::Var(x)) else {
        return Ok((String::new(), String::new()));
    };
    let left = u.apply(&img[..pos]);
    let right = u.apply(&img[pos + 1..]);
    Ok((letters_only(&left), letters_only(&right)))
}

/// Symbolic output of `pump(run, loops, n)`: loop `k` carries parameter `k`,
/// which stands for `n_k - 1`.
pub fn pumped_output_expr(sst: &Sst, run: &Run, loops: &LoopSet) -> Result<ParamWord> {
    if !sst.is_accepting(run) {
        return Err(Error::NotAccepting("pumped output needs an accepting run"));
    }
    let end = sst.end_state(run)?;
    let mut vals: Vec<ParamWord> = sst
        .initial_assignment()
        .iter()
        .map(|w| ParamWord::constant(w.as_str()))
        .collect();

    let substitute = |img: &[Sym], vals: &mut Vec<ParamWord>| -> ParamWord {
        let mut out = ParamWord::constant("");
        for s in img {
            match *s {
                Sym::Letter(c) => out.push_word(c.encode_utf8(&mut [0; 4])),
                Sym::Var(y) => out.append(&std::mem::replace(&mut vals[y], ParamWord::constant(""))),
            }
        }
        out
    };

    let mut pos = 0;
    let mut blocks = loops.intervals().iter().zip(loops.updates()).enumerate().peekable();
    while pos < run.len() || blocks.peek().is_some() {
        if let Some(&(k, (&(i, j), alpha))) = blocks.peek() {
            if i == pos {
                let mut next = Vec::with_capacity(vals.len());
                let mut powers = Vec::with_capacity(vals.len());
                for x in 0..sst.num_vars() {
                    powers.push(idempotent_power_words(alpha, x)?);
                }
                for (x, (left, right)) in powers.into_iter().enumerate() {
                    let mut w = ParamWord::constant("");
                    if !left.is_empty() {
                        w.push_power(left, k);
                    }
                    w.append(&substitute(alpha.image(x), &mut vals));
                    if !right.is_empty() {
                        w.push_power(right, k);
                    }
                    next.push(w);
                }
                vals = next;
                pos = j;
                blocks.next();
                continue;
            }
        }
        let update = &sst.transition(run.steps[pos]).update;
        vals = update
            .images()
            .iter()
            .map(|img| substitute(img, &mut vals))
            .collect();
        pos += 1;
    }
    Ok(substitute(sst.final_output(end).unwrap(), &mut vals))
}

/// Instantiates a pumped-output expression at pumping counts `n` (each `>= 1`).
pub fn instantiate_pumped(expr: &ParamWord, counts: &[usize]) -> Result<String> {
    if counts.contains(&0) {
        return Err(Error::BadCounts);
    }
    let f: Assignment = counts.iter().enumerate().map(|(k, &n)| (k, n - 1)).collect();
    expr.instantiate(&f)
}
