//! Primitive roots, C-cuts, and word inequalities with parameterized
//! repetitions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Param = usize;

/// A total assignment of values to parameters.
pub type Assignment = BTreeMap<Param, usize>;

/// Longest proper border of every prefix (KMP failure function).
fn failure<T: Eq>(w: &[T]) -> Vec<usize> {
    let mut fail = vec![0; w.len()];
    let mut k = 0;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

/// Length of the primitive root of a nonempty slice.
pub fn primitive_root_len<T: Eq>(w: &[T]) -> usize {
    let n = w.len();
    if n == 0 {
        return 0;
    }
    let period = n - failure(w)[n - 1];
    if n.is_multiple_of(period) {
        period
    } else {
        n
    }
}

/// The shortest word `r` with `w` in `r*`.
pub fn primitive_root(w: &str) -> Result<String> {
    let chars: Vec<char> = w.chars().collect();
    if chars.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(chars[..primitive_root_len(&chars)].iter().collect())
}

/// Greedy C-cut positions of `w` (in characters, ascending). Each factor is
/// the longest one whose primitive root has length at most `c`; the last cut
/// is always `|w|`.
pub fn cuts(w: &str, c: usize) -> Vec<usize> {
    let chars: Vec<char> = w.chars().collect();
    cuts_of(&chars, c)
}

pub fn cuts_of<T: Eq>(w: &[T], c: usize) -> Vec<usize> {
    let c = c.max(1);
    let mut result = Vec::new();
    let mut start = 0;
    while start < w.len() {
        let fail = failure(&w[start..]);
        let mut best = start + 1;
        for (i, &border) in fail.iter().enumerate() {
            let len = i + 1;
            let period = len - border;
            let root = if len % period == 0 { period } else { len };
            if root <= c {
                best = start + len;
            }
        }
        result.push(best);
        start = best;
    }
    result
}

/// `s0 t1^{p1} s1 ... tm^{pm} sm`; parameter ids may repeat.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ParamWord {
    constants: Vec<String>,
    factors: Vec<(String, Param)>,
}

impl ParamWord {
    pub fn new(constants: Vec<String>, factors: Vec<(String, Param)>) -> Result<Self> {
        if constants.len() != factors.len() + 1 {
            return Err(Error::OutOfRange(format!(
                "{} constants for {} factors",
                constants.len(),
                factors.len()
            )));
        }
        Ok(Self { constants, factors })
    }

    pub fn constant(word: impl Into<String>) -> Self {
        Self {
            constants: vec![word.into()],
            factors: Vec::new(),
        }
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn factors(&self) -> &[(String, Param)] {
        &self.factors
    }

    pub fn push_word(&mut self, w: &str) {
        self.constants.last_mut().unwrap().push_str(w);
    }

    pub fn push_power(&mut self, base: impl Into<String>, p: Param) {
        self.factors.push((base.into(), p));
        self.constants.push(String::new());
    }

    pub fn append(&mut self, other: &ParamWord) {
        self.push_word(&other.constants[0]);
        for ((base, p), s) in other.factors.iter().zip(&other.constants[1..]) {
            self.push_power(base.clone(), *p);
            self.push_word(s);
        }
    }

    pub fn params(&self) -> BTreeSet<Param> {
        self.factors.iter().map(|&(_, p)| p).collect()
    }

    pub fn instantiate(&self, f: &Assignment) -> Result<String> {
        let mut out = self.constants[0].clone();
        for ((base, p), s) in self.factors.iter().zip(&self.constants[1..]) {
            let n = *f.get(p).ok_or(Error::MissingParameter(*p))?;
            out.push_str(&base.repeat(n));
            out.push_str(s);
        }
        Ok(out)
    }
}

impl fmt::Display for ParamWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.constants[0].is_empty() {
            parts.push(self.constants[0].clone());
        }
        for ((base, p), s) in self.factors.iter().zip(&self.constants[1..]) {
            parts.push(format!("({base})^p{p}"));
            if !s.is_empty() {
                parts.push(s.clone());
            }
        }
        if parts.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Asserts `left != right` under an assignment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Inequality {
    pub left: ParamWord,
    pub right: ParamWord,
}

impl Inequality {
    pub fn new(left: ParamWord, right: ParamWord) -> Self {
        Self { left, right }
    }

    pub fn params(&self) -> BTreeSet<Param> {
        let mut ps = self.left.params();
        ps.extend(self.right.params());
        ps
    }

    /// Number of repeated factors on each side.
    pub fn factor_counts(&self) -> (usize, usize) {
        (self.left.factors.len(), self.right.factors.len())
    }

    pub fn is_solution(&self, f: &Assignment) -> Result<bool> {
        Ok(self.left.instantiate(f)? != self.right.instantiate(f)?)
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≠ {}", self.left, self.right)
    }
}

pub fn is_solution(e: &Inequality, f: &Assignment) -> Result<bool> {
    e.is_solution(f)
}

/// Values in `[0, bound]` that are not solutions of a one-parameter inequality.
pub fn nonsolutions_single(e: &Inequality, bound: usize) -> Result<Vec<usize>> {
    let params = e.params();
    if params.len() != 1 {
        return Err(Error::NotSingleParameter(params.len()));
    }
    let p = *params.iter().next().unwrap();
    let mut out = Vec::new();
    for v in 0..=bound {
        if !e.is_solution(&Assignment::from([(p, v)]))? {
            out.push(v);
        }
    }
    Ok(out)
}

fn check_covered(params: &BTreeSet<Param>, declared: &[Param]) -> Result<()> {
    match params.iter().find(|p| !declared.contains(p)) {
        Some(&p) => Err(Error::MissingParameter(p)),
        None => Ok(()),
    }
}

/// Calls `visit` on every point of the box in lexicographic order (first
/// parameter slowest) until it returns `Some`.
fn scan_box<T>(
    ranges: &[(Param, usize, usize)],
    mut visit: impl FnMut(&Assignment) -> Result<Option<T>>,
) -> Result<Option<T>> {
    if ranges.iter().any(|&(_, lo, hi)| lo > hi) {
        return Ok(None);
    }
    let mut f: Assignment = ranges.iter().map(|&(p, lo, _)| (p, lo)).collect();
    loop {
        if let Some(found) = visit(&f)? {
            return Ok(Some(found));
        }
        let mut k = ranges.len();
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            let (p, lo, hi) = ranges[k];
            let v = f.get_mut(&p).unwrap();
            if *v < hi {
                *v += 1;
                break;
            }
            *v = lo;
        }
    }
}

/// First assignment, in lexicographic grid order over `ranges` (first listed
/// parameter varies slowest), that solves every inequality.
pub fn find_system_solution(
    system: &[Inequality],
    ranges: &[(Param, usize, usize)],
) -> Result<Option<Assignment>> {
    if system.is_empty() {
        return Err(Error::EmptySystem);
    }
    let declared: Vec<Param> = ranges.iter().map(|r| r.0).collect();
    for e in system {
        check_covered(&e.params(), &declared)?;
    }
    scan_box(ranges, |f| {
        for e in system {
            if !e.is_solution(f)? {
                return Ok(None);
            }
        }
        Ok(Some(f.clone()))
    })
}

fn box_is_solution(e: &Inequality, ranges: &[(Param, usize, usize)]) -> Result<bool> {
    let bad = scan_box(ranges, |f| Ok((!e.is_solution(f)?).then_some(())))?;
    Ok(bad.is_none())
}

/// Searches for intervals `[l_i, h_i]` with `h_i - l_i >= sizes[i]` inside
/// `[0, bound]` whose product contains only solutions.
///
/// Parameters are handled in the order of `seed`: for each one, `l` is the
/// least value such that every value in `[l, bound]` solves `e` against the
/// intervals already fixed (later parameters held at their seed values), and
/// `h = l + size`. The final box is verified exhaustively.
pub fn find_solution_box(
    e: &Inequality,
    seed: &[(Param, usize)],
    sizes: &[usize],
    bound: usize,
) -> Result<Option<Vec<(Param, usize, usize)>>> {
    if sizes.len() != seed.len() {
        return Err(Error::OutOfRange(format!(
            "{} sizes for {} parameters",
            sizes.len(),
            seed.len()
        )));
    }
    let declared: Vec<Param> = seed.iter().map(|s| s.0).collect();
    check_covered(&e.params(), &declared)?;
    let seed_f: Assignment = seed.iter().copied().collect();
    if !e.is_solution(&seed_f)? {
        return Err(Error::SeedNotSolution);
    }

    let mut fixed: Vec<(Param, usize, usize)> = Vec::new();
    for (k, &(p, _)) in seed.iter().enumerate() {
        let rest = &seed[k + 1..];
        let ranges_for = |lo: usize, hi: usize| {
            let mut r = fixed.clone();
            r.push((p, lo, hi));
            r.extend(rest.iter().map(|&(q, v)| (q, v, v)));
            r
        };
        // scan downwards: the tail [l, bound] stays good while every value is good
        let mut low = None;
        for v in (0..=bound).rev() {
            if box_is_solution(e, &ranges_for(v, v))? {
                low = Some(v);
            } else {
                break;
            }
        }
        let Some(low) = low else { return Ok(None) };
        let high = low + sizes[k];
        if high > bound {
            return Ok(None);
        }
        fixed.push((p, low, high));
    }
    if box_is_solution(e, &fixed)? {
        Ok(Some(fixed))
    } else {
        Ok(None)
    }
}
