use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::budget::Meter;
use crate::error::{Error, Result};
use crate::skeleton::{skeleton_of, SkeletonMonoid};
use crate::sst::{Run, Sst, StateId, TransId};

/// Two loops on the same input joined by a bridge, with at least two of the
/// three middle runs distinct. Its presence means infinite ambiguity.
///
/// `rho0` reaches `q1`, `rho1` loops at `q1`, `rho2` goes from `q1` to `q2`,
/// `rho3` loops at `q2`, and `rho4` leaves `q2` for a final state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dumbbell {
    pub q1: StateId,
    pub q2: StateId,
    pub rho0: Run,
    pub rho1: Run,
    pub rho2: Run,
    pub rho3: Run,
    pub rho4: Run,
}

pub(crate) fn expect_path(sst: &Sst, run: &Run, from: StateId, to: StateId, name: &str) -> Result<()> {
    let states = sst
        .states_along(run)
        .map_err(|e| Error::MalformedWitness(format!("{name}: {e}")))?;
    if run.start != from || *states.last().unwrap() != to {
        return Err(Error::MalformedWitness(format!(
            "{name} must lead from {} to {}",
            sst.state_name(from),
            sst.state_name(to)
        )));
    }
    Ok(())
}

pub(crate) fn expect_idempotent(sst: &Sst, run: &Run, name: &str) -> Result<()> {
    if skeleton_of(&sst.induced_update(run)?).is_idempotent() {
        Ok(())
    } else {
        Err(Error::MalformedWitness(format!("{name} is not skeleton-idempotent")))
    }
}

pub(crate) fn expect_access_and_exit(sst: &Sst, rho0: &Run, q1: StateId, rho4: &Run, q2: StateId) -> Result<()> {
    if !sst.is_initial(rho0.start) {
        return Err(Error::MalformedWitness("rho0 must start in an initial state".into()));
    }
    expect_path(sst, rho0, rho0.start, q1, "rho0")?;
    let end = sst.end_state(rho4).map_err(|e| Error::MalformedWitness(format!("rho4: {e}")))?;
    if !sst.is_final(end) {
        return Err(Error::MalformedWitness("rho4 must end in a final state".into()));
    }
    expect_path(sst, rho4, q2, end, "rho4")
}

impl Dumbbell {
    /// Checks every structural requirement against `sst`.
    pub fn check(&self, sst: &Sst) -> Result<()> {
        let (q1, q2) = (self.q1, self.q2);
        expect_access_and_exit(sst, &self.rho0, q1, &self.rho4, q2)?;
        expect_path(sst, &self.rho1, q1, q1, "rho1")?;
        expect_path(sst, &self.rho2, q1, q2, "rho2")?;
        expect_path(sst, &self.rho3, q2, q2, "rho3")?;
        let v = sst.input_of(&self.rho1)?;
        if v.is_empty() {
            return Err(Error::MalformedWitness("the shared input must be nonempty".into()));
        }
        if sst.input_of(&self.rho2)? != v || sst.input_of(&self.rho3)? != v {
            return Err(Error::MalformedWitness("rho1, rho2, rho3 must share their input".into()));
        }
        expect_idempotent(sst, &self.rho1, "rho1")?;
        expect_idempotent(sst, &self.rho3, "rho3")?;
        if self.rho1.steps == self.rho2.steps && self.rho2.steps == self.rho3.steps {
            return Err(Error::MalformedWitness("rho1, rho2, rho3 are all equal".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    p1: StateId,
    s1: usize,
    p2: StateId,
    p3: StateId,
    s3: usize,
    differ: bool,
}

/// Searches the synchronized three-track product for a dumbbell. The search
/// is exhaustive: `None` means the SST is finite-ambiguous.
pub fn find_dumbbell(sst: &Sst, monoid_cap: u64, node_budget: u64) -> Result<Option<Dumbbell>> {
    let monoid = SkeletonMonoid::new(sst, monoid_cap)?;
    let mut meter = Meter::new("dumbbell product states", node_budget);
    let reachable = sst.reachable();
    let coreachable = sst.coreachable();
    for q1 in (0..sst.num_states()).filter(|&q| reachable[q]) {
        for q2 in (0..sst.num_states()).filter(|&q| coreachable[q]) {
            if let Some([rho1, rho2, rho3]) = search_pair(sst, &monoid, q1, q2, &mut meter)? {
                let rho0 = sst
                    .initial_states()
                    .filter_map(|i| sst.shortest_path(i, q1))
                    .min_by_key(Run::len)
                    .expect("q1 is reachable");
                let rho4 = sst
                    .final_states()
                    .filter_map(|f| sst.shortest_path(q2, f))
                    .min_by_key(Run::len)
                    .expect("q2 is co-reachable");
                return Ok(Some(Dumbbell {
                    q1,
                    q2,
                    rho0,
                    rho1,
                    rho2,
                    rho3,
                    rho4,
                }));
            }
        }
    }
    Ok(None)
}

fn search_pair(
    sst: &Sst,
    monoid: &SkeletonMonoid,
    q1: StateId,
    q2: StateId,
    meter: &mut Meter,
) -> Result<Option<[Run; 3]>> {
    let id = monoid.identity();
    let start = Node {
        p1: q1,
        s1: id,
        p2: q1,
        p3: q2,
        s3: id,
        differ: false,
    };
    let mut parent: HashMap<Node, (Node, [TransId; 3])> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    meter.tick()?;
    while let Some(node) = queue.pop_front() {
        for letter in 0..sst.alphabet().len() {
            for &t1 in sst.successors_by_index(node.p1, letter) {
                for &t2 in sst.successors_by_index(node.p2, letter) {
                    for &t3 in sst.successors_by_index(node.p3, letter) {
                        let next = Node {
                            p1: sst.transition(t1).target,
                            s1: monoid.step(node.s1, t1),
                            p2: sst.transition(t2).target,
                            p3: sst.transition(t3).target,
                            s3: monoid.step(node.s3, t3),
                            differ: node.differ || t1 != t2 || t2 != t3,
                        };
                        if next == start || parent.contains_key(&next) {
                            continue;
                        }
                        meter.tick()?;
                        parent.insert(next, (node, [t1, t2, t3]));
                        if next.p1 == q1
                            && next.p2 == q2
                            && next.p3 == q2
                            && next.differ
                            && monoid.is_idempotent(next.s1)
                            && monoid.is_idempotent(next.s3)
                        {
                            return Ok(Some(reconstruct(&parent, start, next, q1, q2)));
                        }
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(None)
}

fn reconstruct(
    parent: &HashMap<Node, (Node, [TransId; 3])>,
    start: Node,
    mut node: Node,
    q1: StateId,
    q2: StateId,
) -> [Run; 3] {
    let mut tracks: [Vec<TransId>; 3] = Default::default();
    while node != start {
        let (prev, ts) = parent[&node];
        for k in 0..3 {
            tracks[k].push(ts[k]);
        }
        node = prev;
    }
    let [a, b, c] = tracks.map(|mut t| {
        t.reverse();
        t
    });
    [Run::new(q1, a), Run::new(q1, b), Run::new(q2, c)]
}

/// True iff the SST has no dumbbell.
pub fn is_finite_ambiguous(sst: &Sst, monoid_cap: u64, node_budget: u64) -> Result<bool> {
    Ok(find_dumbbell(sst, monoid_cap, node_budget)?.is_none())
}
