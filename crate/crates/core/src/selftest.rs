//! Oracle-equivalence checks runnable outside the test harness.

use std::collections::HashMap;

use crate::ball;
use crate::bb;
use crate::geometry::distance_to_kernel;
use crate::graph::{samples, SimplicialGraph};
use crate::manifold;
use crate::oracle;
use crate::search::{Status, DEFAULT_BUDGET};
use crate::word::{self, Letter, NormalForm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub checked: u64,
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Check {
    name: String,
    checked: u64,
    failures: Vec<String>,
}

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), checked: 0, failures: Vec::new() }
    }

    fn expect(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 10 {
            self.failures.push(detail());
        }
    }

    fn done(self) -> CheckResult {
        CheckResult { name: self.name, checked: self.checked, failures: self.failures }
    }
}

fn all_words(g: &SimplicialGraph, max_len: usize) -> Vec<Vec<Letter>> {
    let alpha = oracle::generators(g);
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<Letter>| {
                alpha.iter().map(move |&l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Normal forms against exhaustive shuffling, for every word of length at
/// most `max_len`.
pub fn normal_forms(name: &str, g: &SimplicialGraph, max_len: usize) -> CheckResult {
    let mut c = Check::new(format!("normal forms on {name}"));
    for w in all_words(g, max_len) {
        let got = word::normalize(g, &w);
        let want = oracle::shuffle_normal_form(g, &w);
        c.expect(got.letters() == want.as_slice(), || {
            format!("{} -> {}", word::format_letters(g, &w), word::format_nf(g, &got))
        });
    }
    c.done()
}

/// Geodesic length and distance to the kernel against plain BFS.
pub fn metric_core(name: &str, g: &SimplicialGraph, radius: usize) -> CheckResult {
    let mut c = Check::new(format!("metric core on {name}"));
    let bfs = oracle::cayley_bfs(g, radius);
    let mut seen = 0usize;
    let walked = ball::enumerate_ball(g, radius, usize::MAX, |k, x| {
        seen += 1;
        c.expect(bfs.get(x) == Some(&k) && word::geodesic_length(x) == k, || {
            format!("|{}| = {} by BFS", word::format_nf(g, x), bfs.get(x).map_or(-1, |&d| d as i64))
        });
    });
    c.expect(walked.is_ok() && seen == bfs.len(), || format!("ball has {seen} elements, BFS {}", bfs.len()));
    for x in bfs.keys() {
        let want = oracle::distance_to_kernel_bfs(g, x) as u64;
        c.expect(distance_to_kernel(x) == want, || {
            format!("d({}, H) = {want} by BFS", word::format_nf(g, x))
        });
    }
    c.done()
}

/// Exact `T`-lengths against a breadth-first ball of `(H_Γ, T)`, and the
/// general rewrite against its round trip and length bound.
pub fn bb_subgroup(name: &str, g: &SimplicialGraph, radius: usize) -> CheckResult {
    let mut c = Check::new(format!("subgroup lengths on {name}"));
    let members: Vec<NormalForm> = oracle::cayley_bfs(g, radius)
        .into_keys()
        .filter(bb::is_member)
        .collect();
    let lengths: HashMap<NormalForm, u64> = members
        .iter()
        .map(|h| (h.clone(), bb::t_length(g, h, DEFAULT_BUDGET).expect("member")))
        .filter(|(_, m)| m.status == Status::Exact)
        .map(|(h, m)| (h, m.finite().expect("finite")))
        .collect();
    c.expect(lengths.len() == members.len(), || "a t-length search was cut short".into());
    let cap = lengths.values().copied().max().unwrap_or(0) as usize;
    let t_ball = oracle::t_ball(g, cap);
    let m = g.diameter().unwrap_or(0);
    for h in &members {
        if let Some(&v) = lengths.get(h) {
            c.expect(t_ball.get(h).map(|&d| d as u64) == Some(v), || {
                format!("|{}|_T = {v}", word::format_nf(g, h))
            });
        }
        let w = bb::rewrite_general(g, h).expect("member");
        c.expect(bb::eval_t_word(g, &w) == *h && w.len() <= m * h.len() * h.len(), || {
            format!("rewrite of {}", word::format_nf(g, h))
        });
    }
    c.done()
}

pub fn manifolds(max_vertices: usize) -> CheckResult {
    let mut c = Check::new(format!("manifold invariants on trees up to {max_vertices} vertices"));
    for n in 3..=max_vertices {
        for g in samples::trees(n) {
            match manifold::build_manifold(&g) {
                Ok(md) => {
                    let failures = manifold::invariant_failures(&g, &md);
                    c.expect(failures.is_empty(), || failures.join("; "));
                }
                Err(e) => c.expect(false, || e.to_string()),
            }
        }
    }
    c.done()
}

/// The checks run by `raag-lab selftest`.
pub fn run_all() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (name, g) in samples::suite() {
        out.push(normal_forms(name, &g, 4));
        out.push(metric_core(name, &g, 4));
        if g.is_connected() {
            out.push(bb_subgroup(name, &g, 4));
        }
    }
    out.push(manifolds(7));
    out
}
