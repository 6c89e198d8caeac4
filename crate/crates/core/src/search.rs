//! Budgeted shortest-path searches in Cayley graphs with normal-form keys.
//!
//! Every search reports a [`Measure`]: an exact distance, an infinity flag
//! when the reachable component was exhausted, or a lower bound when the node
//! budget ran out first. Results depend only on the graph, never on the
//! expansion schedule.

use std::fmt;

use rustc_hash::FxHashSet;
use serde::{Serialize, Serializer};

use crate::par;
use crate::word::NormalForm;

pub const DEFAULT_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Exact,
    LowerBound,
}

impl Status {
    pub fn and(self, other: Status) -> Status {
        if self == Status::Exact && other == Status::Exact {
            Status::Exact
        } else {
            Status::LowerBound
        }
    }

    pub fn is_exact(self) -> bool {
        self == Status::Exact
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Exact => "exact",
            Status::LowerBound => "lower_bound",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Finite(u64),
    Infinite,
}

impl Value {
    pub fn finite(self) -> Option<u64> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Value::Infinite
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Finite(v) => s.serialize_u64(*v),
            Value::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measure {
    pub value: Value,
    pub status: Status,
}

impl Measure {
    pub fn exact(v: u64) -> Self {
        Measure {
            value: Value::Finite(v),
            status: Status::Exact,
        }
    }

    pub fn lower_bound(v: u64) -> Self {
        Measure {
            value: Value::Finite(v),
            status: Status::LowerBound,
        }
    }

    pub fn infinite() -> Self {
        Measure {
            value: Value::Infinite,
            status: Status::Exact,
        }
    }

    /// The finite value, if any. A lower bound is returned as-is.
    pub fn finite(&self) -> Option<u64> {
        self.value.finite()
    }
}

/// Pruned bidirectional BFS from `start` to `goal`.
///
/// `expand` lists neighbors. `keep_forward(x, d)` / `keep_backward(x, d)`
/// decide whether a node first reached at depth `d` from the respective end
/// is kept; they must never drop a node lying on a path shorter than
/// `upper`, and must be monotone in `d`. When `upper` is the length of a
/// known path, exhausting the kept frontier proves that length optimal.
pub fn bidirectional<N, F, B>(
    start: &NormalForm,
    goal: &NormalForm,
    expand: N,
    keep_forward: F,
    keep_backward: B,
    upper: Option<u64>,
    budget: usize,
) -> Measure
where
    N: Fn(&NormalForm, &mut Vec<NormalForm>) + Sync + Send,
    F: Fn(&NormalForm, u64) -> bool + Sync + Send,
    B: Fn(&NormalForm, u64) -> bool + Sync + Send,
{
    if start == goal {
        return Measure::exact(0);
    }
    let mut fwd = Side::new(start.clone());
    let mut bwd = Side::new(goal.clone());
    let mut generated = 2usize;
    loop {
        // no path of length <= fwd.depth + bwd.depth exists here
        let explored = fwd.depth + bwd.depth;
        if let Some(u) = upper {
            if explored + 1 >= u {
                return Measure::exact(u);
            }
        }
        let forward = fwd.frontier.len() <= bwd.frontier.len();
        let (side, other) = if forward {
            (&mut fwd, &bwd)
        } else {
            (&mut bwd, &fwd)
        };
        let depth = side.depth + 1;
        let fresh = if forward {
            side.expand(&expand, |x| keep_forward(x, depth))
        } else {
            side.expand(&expand, |x| keep_backward(x, depth))
        };
        generated += fresh.len();
        if generated > budget {
            return Measure::lower_bound(explored);
        }
        if fresh.is_empty() {
            return match upper {
                Some(u) => Measure::exact(u),
                None => Measure::infinite(),
            };
        }
        let met = fresh.iter().any(|x| other.current.contains(x));
        side.advance(fresh);
        if met {
            return Measure::exact(fwd.depth + bwd.depth);
        }
    }
}

struct Side {
    depth: u64,
    frontier: Vec<NormalForm>,
    current: FxHashSet<NormalForm>,
    previous: FxHashSet<NormalForm>,
}

impl Side {
    fn new(root: NormalForm) -> Self {
        Side {
            depth: 0,
            frontier: vec![root.clone()],
            current: FxHashSet::from_iter([root]),
            previous: FxHashSet::default(),
        }
    }

    fn expand<N, K>(&self, expand: &N, keep: K) -> Vec<NormalForm>
    where
        N: Fn(&NormalForm, &mut Vec<NormalForm>) + Sync + Send,
        K: Fn(&NormalForm) -> bool + Sync + Send,
    {
        let mut fresh = par::flat_map(&self.frontier, |x| {
            let mut out = Vec::new();
            expand(x, &mut out);
            out.retain(|y| !self.current.contains(y) && !self.previous.contains(y) && keep(y));
            out
        });
        par::sort_unstable(&mut fresh);
        fresh.dedup();
        fresh
    }

    fn advance(&mut self, fresh: Vec<NormalForm>) {
        self.depth += 1;
        self.previous = std::mem::take(&mut self.current);
        self.current = fresh.iter().cloned().collect();
        self.frontier = fresh;
    }
}

/// A* from `start` to `goal` with a consistent `heuristic` (a lower bound on
/// the remaining distance that changes by at most one per edge). `expand`
/// must only list nodes of the admissible region.
pub fn astar<N, H>(start: &NormalForm, goal: &NormalForm, expand: N, heuristic: H, budget: usize) -> Measure
where
    N: Fn(&NormalForm, &mut Vec<NormalForm>),
    H: Fn(&NormalForm) -> u64,
{
    use rustc_hash::FxHashMap;

    if start == goal {
        return Measure::exact(0);
    }
    let mut best: FxHashMap<NormalForm, u64> = FxHashMap::default();
    let mut buckets: Vec<Vec<(NormalForm, u64)>> = Vec::new();
    let push = |buckets: &mut Vec<Vec<(NormalForm, u64)>>, f: u64, node: NormalForm, g: u64| {
        let f = f as usize;
        if buckets.len() <= f {
            buckets.resize_with(f + 1, Vec::new);
        }
        buckets[f].push((node, g));
    };
    best.insert(start.clone(), 0);
    push(&mut buckets, heuristic(start), start.clone(), 0);
    let mut f = 0usize;
    let mut scratch = Vec::new();
    loop {
        while f < buckets.len() && buckets[f].is_empty() {
            f += 1;
        }
        if f >= buckets.len() {
            return Measure::infinite();
        }
        // LIFO within a bucket prefers deeper nodes
        let (node, g) = buckets[f].pop().expect("nonempty bucket");
        if best.get(&node).is_some_and(|&b| b < g) {
            continue;
        }
        if &node == goal {
            return Measure::exact(g);
        }
        scratch.clear();
        expand(&node, &mut scratch);
        for next in scratch.drain(..) {
            let ng = g + 1;
            if best.get(&next).map_or(true, |&old| ng < old) {
                let h = heuristic(&next);
                best.insert(next.clone(), ng);
                push(&mut buckets, ng + h, next, ng);
            }
        }
        if best.len() > budget {
            return Measure::lower_bound(f as u64);
        }
    }
}
