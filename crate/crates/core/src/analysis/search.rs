//! Bounded enumeration of W-pattern candidates.
//!
//! Each of the three phases (`v'`, `v''`, `v'''`) is a synchronized
//! three-track run. Phase runs are grouped into layers by length and
//! deduplicated by their end states and induced updates, since the outputs
//! of W-runs depend on nothing else. Candidates are visited by increasing
//! total length, then by split, then by `(q1, q2)`, then in layer order.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use serde::Serialize;

use super::wpattern::{is_simply_divergent, Divergence, WPattern};
use crate::budget::Meter;
use crate::error::{Error, Result};
use crate::skeleton::{skeleton_of, Skeleton};
use crate::sst::{instantiate_syms, Run, Sst, StateId, Sym, TransId, Update};

type Triple = [StateId; 3];

struct PhaseRun {
    start: Triple,
    end: Triple,
    steps: [Vec<TransId>; 3],
    updates: [Update; 3],
    skeletons: [Skeleton; 3],
}

struct Layer {
    items: Vec<PhaseRun>,
    by_end: HashMap<Triple, Vec<usize>>,
}

struct Layers<'a> {
    sst: &'a Sst,
    cache: HashMap<(Triple, usize), Rc<Layer>>,
}

impl<'a> Layers<'a> {
    fn get(&mut self, start: Triple, len: usize, meter: &mut Meter) -> Result<Rc<Layer>> {
        if let Some(l) = self.cache.get(&(start, len)) {
            return Ok(l.clone());
        }
        let sst = self.sst;
        let items = if len == 0 {
            let id = Update::identity(sst.num_vars());
            let sk = skeleton_of(&id);
            vec![PhaseRun {
                start,
                end: start,
                steps: Default::default(),
                updates: [id.clone(), id.clone(), id],
                skeletons: [sk.clone(), sk.clone(), sk],
            }]
        } else {
            let prev = self.get(start, len - 1, meter)?;
            let mut seen: HashSet<(Triple, [Update; 3])> = HashSet::new();
            let mut items = Vec::new();
            for item in &prev.items {
                for letter in 0..sst.alphabet().len() {
                    let succ = |k: usize| sst.successors_by_index(item.end[k], letter);
                    for &t1 in succ(0) {
                        for &t2 in succ(1) {
                            for &t3 in succ(2) {
                                meter.tick()?;
                                let ts = [t1, t2, t3];
                                let end = ts.map(|t| sst.transition(t).target);
                                let updates: [Update; 3] = std::array::from_fn(|k| {
                                    item.updates[k]
                                        .then(&sst.transition(ts[k]).update)
                                        .expect("same variable set")
                                });
                                if !seen.insert((end, updates.clone())) {
                                    continue;
                                }
                                let steps = std::array::from_fn(|k| {
                                    let mut s = item.steps[k].clone();
                                    s.push(ts[k]);
                                    s
                                });
                                let skeletons = std::array::from_fn(|k| skeleton_of(&updates[k]));
                                items.push(PhaseRun {
                                    start,
                                    end,
                                    steps,
                                    updates,
                                    skeletons,
                                });
                            }
                        }
                    }
                }
            }
            items
        };
        let mut by_end: HashMap<Triple, Vec<usize>> = HashMap::new();
        for (i, item) in items.iter().enumerate() {
            by_end.entry(item.end).or_default().push(i);
        }
        let layer = Rc::new(Layer { items, by_end });
        self.cache.insert((start, len), layer.clone());
        Ok(layer)
    }
}

/// Limits of the W-pattern search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchLimits {
    pub component_len: usize,
    pub max_candidates: u64,
    pub max_expansions: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub candidates: u64,
    pub expansions: u64,
    /// Every candidate with total component length at most this was examined.
    pub complete_up_to_total_len: Option<usize>,
    pub exhausted: bool,
    pub stopped_by: Option<String>,
}

pub(crate) enum SearchOutcome {
    Found(Box<WPattern>, Divergence, SearchReport),
    NotFound(SearchReport),
}

struct Access {
    run: Run,
    vals: Vec<String>,
}

struct Exit {
    run: Run,
    update: Update,
    end: StateId,
}

pub(crate) fn search_wpattern(sst: &Sst, limits: SearchLimits) -> Result<SearchOutcome> {
    let mut candidates = Meter::new("W-pattern candidates", limits.max_candidates);
    let mut expansions = Meter::new("W-pattern phase expansions", limits.max_expansions);
    let mut layers = Layers {
        sst,
        cache: HashMap::new(),
    };
    let reachable = sst.reachable();
    let coreachable = sst.coreachable();
    let access: Vec<Vec<Access>> = (0..sst.num_states())
        .map(|q| {
            sst.initial_states()
                .filter_map(|i| sst.shortest_path(i, q))
                .map(|run| {
                    let mut vals = sst.initial_assignment().to_vec();
                    for &t in &run.steps {
                        vals = sst.apply_update(&sst.transition(t).update, &vals);
                    }
                    Access { run, vals }
                })
                .collect()
        })
        .collect();
    let exits: Vec<Vec<Exit>> = (0..sst.num_states())
        .map(|q| {
            sst.final_states()
                .filter_map(|f| sst.shortest_path(q, f).map(|run| (f, run)))
                .map(|(end, run)| Exit {
                    update: sst.induced_update(&run).expect("valid path"),
                    run,
                    end,
                })
                .collect()
        })
        .collect();

    let l = limits.component_len;
    let mut complete = None;
    let report = |candidates: &Meter, expansions: &Meter, complete, stopped_by: Option<String>| SearchReport {
        candidates: candidates.used(),
        expansions: expansions.used(),
        complete_up_to_total_len: complete,
        exhausted: stopped_by.is_none(),
        stopped_by,
    };

    for total in 1..=3 * l {
        for l1 in 0..=l.min(total) {
            for l2 in 0..=l.min(total - l1) {
                let l3 = total - l1 - l2;
                if l3 > l {
                    continue;
                }
                for q1 in (0..sst.num_states()).filter(|&q| reachable[q]) {
                    for q2 in (0..sst.num_states()).filter(|&q| coreachable[q]) {
                        let step = scan_split(
                            sst,
                            &mut layers,
                            [l1, l2, l3],
                            q1,
                            q2,
                            &access[q1],
                            &exits[q2],
                            &mut candidates,
                            &mut expansions,
                        );
                        match step {
                            Ok(Some((p, d))) => {
                                let rep = report(&candidates, &expansions, complete, Some("found".into()));
                                return Ok(SearchOutcome::Found(Box::new(p), d, SearchReport { exhausted: false, ..rep }));
                            }
                            Ok(None) => {}
                            Err(Error::BudgetExceeded { what, limit }) => {
                                let why = format!("{what} limit {limit} reached");
                                return Ok(SearchOutcome::NotFound(report(&candidates, &expansions, complete, Some(why))));
                            }
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
        complete = Some(total);
    }
    Ok(SearchOutcome::NotFound(report(&candidates, &expansions, complete, None)))
}

#[allow(clippy::too_many_arguments)]
fn scan_split(
    sst: &Sst,
    layers: &mut Layers<'_>,
    [l1, l2, l3]: [usize; 3],
    q1: StateId,
    q2: StateId,
    access: &[Access],
    exits: &[Exit],
    candidates: &mut Meter,
    expansions: &mut Meter,
) -> Result<Option<(WPattern, Divergence)>> {
    if access.is_empty() || exits.is_empty() {
        return Ok(None);
    }
    let first = layers.get([q1, q1, q2], l1, expansions)?;
    for a in &first.items {
        let r = a.end;
        let second = layers.get(r, l2, expansions)?;
        let Some(loops) = second.by_end.get(&r) else { continue };
        let third = layers.get(r, l3, expansions)?;
        let Some(closers) = third.by_end.get(&[q1, q2, q2]) else { continue };
        for &bi in loops {
            let b = &second.items[bi];
            if !b.skeletons.iter().all(Skeleton::is_idempotent) {
                continue;
            }
            for &ci in closers {
                let c = &third.items[ci];
                let groups_idempotent = (0..3).all(|k| {
                    a.skeletons[k]
                        .then(&b.skeletons[k])
                        .then(&c.skeletons[k])
                        .is_idempotent()
                });
                if !groups_idempotent {
                    continue;
                }
                let g = group_updates([a, b, c]);
                for acc in access {
                    for exit in exits {
                        candidates.tick()?;
                        if fast_divergence(sst, &g, acc, exit).is_none() {
                            continue;
                        }
                        let p = assemble(q1, q2, [a, b, c], acc, exit);
                        // re-verify through the run evaluator before reporting
                        p.check(sst)?;
                        if let Some(d) = is_simply_divergent(sst, &p)? {
                            return Ok(Some((p, d)));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

fn assemble(q1: StateId, q2: StateId, [a, b, c]: [&PhaseRun; 3], acc: &Access, exit: &Exit) -> WPattern {
    let runs = |ph: &PhaseRun| -> [Run; 3] {
        std::array::from_fn(|k| Run::new(ph.start[k], ph.steps[k].clone()))
    };
    WPattern {
        q1,
        q2,
        r: a.end,
        rho0: acc.run.clone(),
        prime: runs(a),
        double: runs(b),
        triple: runs(c),
        rho4: exit.run.clone(),
    }
}

/// Induced updates of each group with the middle loop taken once and twice.
fn group_updates([a, b, c]: [&PhaseRun; 3]) -> [[Update; 2]; 3] {
    let group = |k: usize, x: usize| {
        let mut u = a.updates[k].clone();
        for _ in 0..x {
            u = u.then(&b.updates[k]).expect("same variable set");
        }
        u.then(&c.updates[k]).expect("same variable set")
    };
    std::array::from_fn(|k| [group(k, 1), group(k, 2)])
}

/// Outputs of all 64 W-runs computed on concrete valuations, sharing
/// prefixes; returns the first divergent tuple index.
fn fast_divergence(sst: &Sst, g: &[[Update; 2]; 3], acc: &Access, exit: &Exit) -> Option<usize> {
    let finish = exit.update.apply(sst.final_output(exit.end).expect("final state"));

    let mut out_mark4 = vec![String::new(); 32];
    let mut out_mark2 = vec![String::new(); 32];
    let order4 = [&g[0], &g[0], &g[0], &g[1], &g[2]];
    let order2 = [&g[0], &g[1], &g[2], &g[2], &g[2]];
    walk(sst, &acc.vals, &order4, 0, 0, &finish, &mut out_mark4);
    walk(sst, &acc.vals, &order2, 0, 0, &finish, &mut out_mark2);
    (0..32).find(|&i| out_mark4[i] != out_mark2[i])
}

fn walk(
    sst: &Sst,
    vals: &[String],
    order: &[&[Update; 2]; 5],
    depth: usize,
    index: usize,
    finish: &[Sym],
    out: &mut [String],
) {
    if depth == 5 {
        out[index] = instantiate_syms(finish, vals);
        return;
    }
    for (bit, u) in order[depth].iter().enumerate() {
        let next = sst.apply_update(u, vals);
        walk(sst, &next, order, depth + 1, (index << 1) | bit, finish, out);
    }
}
