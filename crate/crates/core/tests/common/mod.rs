#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use sstkit::sst::{SstParts, Sym, Transition, Update};
use sstkit::{Run, Sst};

pub const LETTERS: [char; 2] = ['a', 'b'];

/// A random copyless update over `vars` variables: every variable is either
/// dropped or placed once, and letters are sprinkled in.
pub fn random_update<R: Rng>(rng: &mut R, vars: usize, max_image: usize) -> Update {
    let mut images: Vec<Vec<Sym>> = vec![Vec::new(); vars];
    let mut order: Vec<usize> = (0..vars).collect();
    order.shuffle(rng);
    for y in order {
        if rng.gen_bool(0.8) {
            let x = rng.gen_range(0..vars);
            if images[x].len() < max_image {
                let at = rng.gen_range(0..=images[x].len());
                images[x].insert(at, Sym::Var(y));
            }
        }
    }
    for img in &mut images {
        let extra = rng.gen_range(0..=max_image.saturating_sub(img.len()).min(3));
        for _ in 0..extra {
            let at = rng.gen_range(0..=img.len());
            img.insert(at, Sym::Letter(*LETTERS.choose(rng).unwrap()));
        }
    }
    Update::new(images)
}

pub fn random_idempotent_update<R: Rng>(rng: &mut R, vars: usize, max_image: usize) -> Update {
    loop {
        let u = random_update(rng, vars, max_image);
        if sstkit::skeleton_of(&u).is_idempotent() {
            return u;
        }
    }
}

fn random_expr<R: Rng>(rng: &mut R, vars: usize) -> Vec<Sym> {
    let mut expr: Vec<Sym> = (0..vars)
        .filter(|&x| x == 0 || rng.gen_bool(0.5))
        .map(Sym::Var)
        .collect();
    expr.shuffle(rng);
    if rng.gen_bool(0.3) {
        let at = rng.gen_range(0..=expr.len());
        expr.insert(at, Sym::Letter(*LETTERS.choose(rng).unwrap()));
    }
    expr
}

/// A small random SST over `{a, b}` with every state initial-or-not and
/// final-or-not at random (at least one of each).
pub fn random_sst<R: Rng>(rng: &mut R) -> Sst {
    let states = rng.gen_range(1..=3);
    let vars = rng.gen_range(1..=3);
    let mut initial: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.5)).collect();
    if initial.is_empty() {
        initial.push(0);
    }
    let mut finals: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.6)).collect();
    if finals.is_empty() {
        finals.push(states - 1);
    }
    let mut transitions = Vec::new();
    for source in 0..states {
        for &letter in &LETTERS {
            for _ in 0..rng.gen_range(0..=2) {
                transitions.push(Transition {
                    source,
                    letter,
                    update: random_update(rng, vars, 4),
                    target: rng.gen_range(0..states),
                });
            }
        }
    }
    let mut initial_assignment = Vec::new();
    for x in 0..vars {
        if rng.gen_bool(0.3) {
            initial_assignment.push((x, LETTERS.choose(rng).unwrap().to_string()));
        }
    }
    Sst::new(SstParts {
        alphabet: LETTERS.to_vec(),
        vars: (1..=vars).map(|i| format!("X{i}")).collect(),
        states: (0..states).map(|i| format!("q{i}")).collect(),
        initial,
        initial_assignment,
        final_output: finals.into_iter().map(|q| (q, random_expr(rng, vars))).collect(),
        transitions,
    })
    .expect("generated SST is valid")
}

pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| *LETTERS.choose(rng).unwrap()).collect()
}

/// Output set by a forward subset construction over (state, valuation)
/// configurations; shares no code with run enumeration or `eval_run`.
pub fn outputs_by_configurations(sst: &Sst, input: &str) -> BTreeSet<String> {
    let mut configs: BTreeSet<(usize, Vec<String>)> = sst
        .initial_states()
        .map(|q| (q, sst.initial_assignment().to_vec()))
        .collect();
    for c in input.chars() {
        let mut next = BTreeSet::new();
        for (q, vals) in &configs {
            for t in sst.transitions() {
                if t.source == *q && t.letter == c {
                    let new_vals = t
                        .update
                        .images()
                        .iter()
                        .map(|img| {
                            img.iter()
                                .map(|s| match *s {
                                    Sym::Letter(l) => l.to_string(),
                                    Sym::Var(y) => vals[y].clone(),
                                })
                                .collect::<String>()
                        })
                        .collect();
                    next.insert((t.target, new_vals));
                }
            }
        }
        configs = next;
    }
    configs
        .into_iter()
        .filter_map(|(q, vals)| {
            sst.final_output(q).map(|expr| {
                expr.iter()
                    .map(|s| match *s {
                        Sym::Letter(l) => l.to_string(),
                        Sym::Var(y) => vals[y].clone(),
                    })
                    .collect()
            })
        })
        .collect()
}

/// Picks a random accepting run of `sst` on some random input, if any.
pub fn random_accepting_run<R: Rng>(rng: &mut R, sst: &Sst, max_len: usize) -> Option<Run> {
    for _ in 0..20 {
        let input = random_word(rng, max_len);
        let runs = sstkit::enumerate_runs(sst, &input, 1_000_000).ok()?;
        if let Some(run) = runs.choose(rng) {
            return Some(run.clone());
        }
    }
    None
}

/// Random set of at most `max` pairwise disjoint loops of `run`.
pub fn random_disjoint_loops<R: Rng>(rng: &mut R, sst: &Sst, run: &Run, max: usize) -> Vec<(usize, usize)> {
    let mut loops = sstkit::find_loops(sst, run).unwrap();
    loops.shuffle(rng);
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    for (i, j) in loops {
        if chosen.len() == max {
            break;
        }
        if chosen.iter().all(|&(a, b)| j <= a || b <= i) {
            chosen.push((i, j));
        }
    }
    chosen
}

/// Brute-force primitive root: the shortest prefix whose power is `w`.
pub fn naive_root(w: &[char]) -> usize {
    (1..=w.len())
        .find(|&d| w.len().is_multiple_of(d) && (0..w.len()).all(|i| w[i] == w[i % d]))
        .unwrap_or(0)
}

/// Brute-force cuts straight from the definition.
pub fn naive_cuts(w: &[char], c: usize) -> Vec<usize> {
    let mut cuts = Vec::new();
    let mut start = 0;
    while start < w.len() {
        let j = (start + 1..=w.len())
            .rev()
            .find(|&j| naive_root(&w[start..j]) <= c)
            .unwrap();
        cuts.push(j);
        start = j;
    }
    cuts
}

/// All tuples in `{1..=hi}^m`.
pub fn tuples(m: usize, hi: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=hi).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}
