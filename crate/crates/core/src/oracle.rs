//! Brute-force reference computations.
//!
//! Nothing here is fast. Each function answers the same question as a
//! library operation by the most direct route available (exhaustive rewriting,
//! plain BFS, Floyd-Warshall, bipartition enumeration) and is used to check
//! the library in tests and in `raag-lab selftest`.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::graph::{bit, SimplicialGraph, VertexId};
use crate::word::{mul_letter, multiply, invert, normalize, Letter, NormalForm};

/// Lexicographically least among the shortest words reachable from `word`
/// by swapping adjacent commuting letters and deleting adjacent inverse
/// pairs. Exponential; keep inputs short.
pub fn shuffle_normal_form(g: &SimplicialGraph, word: &[Letter]) -> Vec<Letter> {
    let start = word.to_vec();
    let mut seen: HashSet<Vec<Letter>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for i in 0..w.len().saturating_sub(1) {
            let (x, y) = (w[i], w[i + 1]);
            if x == y.inverse() {
                let mut shorter = w.clone();
                shorter.drain(i..i + 2);
                if seen.insert(shorter.clone()) {
                    queue.push_back(shorter);
                }
            } else if x.vertex() != y.vertex() && g.adjacent(x.vertex(), y.vertex()) {
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                if seen.insert(swapped.clone()) {
                    queue.push_back(swapped);
                }
            }
        }
    }
    let min_len = seen.iter().map(Vec::len).min().unwrap_or(0);
    seen.into_iter()
        .filter(|w| w.len() == min_len)
        .min()
        .unwrap_or_default()
}

pub fn generators(g: &SimplicialGraph) -> Vec<Letter> {
    g.vertices()
        .flat_map(|v| [Letter::pos(v), Letter::neg(v)])
        .collect()
}

/// BFS distances from the identity for every element within `radius`.
pub fn cayley_bfs(g: &SimplicialGraph, radius: usize) -> HashMap<NormalForm, usize> {
    let gens = generators(g);
    let mut dist = HashMap::from([(NormalForm::identity(), 0usize)]);
    let mut frontier = vec![NormalForm::identity()];
    for d in 1..=radius {
        let mut next = Vec::new();
        for x in &frontier {
            for &s in &gens {
                let y = mul_letter(g, x, s);
                if !dist.contains_key(&y) {
                    dist.insert(y.clone(), d);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Distance from `x` to the nearest element of height zero, by BFS.
pub fn distance_to_kernel_bfs(g: &SimplicialGraph, x: &NormalForm) -> usize {
    let gens = generators(g);
    let mut seen = HashSet::from([x.clone()]);
    let mut frontier = vec![x.clone()];
    let mut d = 0;
    loop {
        if frontier.iter().any(|y| y.height() == 0) {
            return d;
        }
        let mut next = Vec::new();
        for y in &frontier {
            for &s in &gens {
                let z = mul_letter(g, y, s);
                if seen.insert(z.clone()) {
                    next.push(z);
                }
            }
        }
        frontier = next;
        d += 1;
    }
}

/// Smallest `|w x w⁻¹|` over all `w` with `|w| <= radius`.
pub fn min_conjugate_length(g: &SimplicialGraph, x: &NormalForm, radius: usize) -> usize {
    cayley_bfs(g, radius)
        .keys()
        .map(|w| multiply(g, &multiply(g, w, x), &invert(g, w)).len())
        .min()
        .unwrap_or(x.len())
}

/// All-pairs shortest path lengths.
pub fn floyd_warshall(g: &SimplicialGraph) -> Vec<Vec<Option<usize>>> {
    let n = g.vertex_count();
    let mut d = vec![vec![None; n]; n];
    for v in 0..n {
        d[v][v] = Some(0);
    }
    for &(a, b) in g.edges() {
        d[a][b] = Some(1);
        d[b][a] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (d[i][k], d[k][j]) {
                    if d[i][j].map_or(true, |c| x + y < c) {
                        d[i][j] = Some(x + y);
                    }
                }
            }
        }
    }
    d
}

/// Whether the induced subgraph on `subset` is a nontrivial join, by trying
/// every bipartition.
pub fn is_join_by_bipartition(g: &SimplicialGraph, subset: &[VertexId]) -> bool {
    let k = subset.len();
    if k < 2 {
        return false;
    }
    // fix subset[0] on the left to halve the work
    (0u64..(1 << (k - 1))).any(|bits| {
        let left_mask = (bits << 1) | 1;
        if left_mask == (1 << k) - 1 {
            return false;
        }
        let mut right = 0u64;
        for (i, &v) in subset.iter().enumerate() {
            if left_mask & (1 << i) == 0 {
                right |= bit(v);
            }
        }
        subset
            .iter()
            .enumerate()
            .filter(|(i, _)| left_mask & (1 << i) != 0)
            .all(|(_, &u)| g.adj_mask(u) & right == right)
    })
}

fn t_steps(g: &SimplicialGraph) -> Vec<[Letter; 2]> {
    let mut steps = Vec::new();
    for &(s, t) in g.edges() {
        steps.push([Letter::pos(s), Letter::neg(t)]);
        steps.push([Letter::pos(t), Letter::neg(s)]);
    }
    steps
}

/// `|h|_T` for every member within `radius` of the identity in `(H_Γ, T)`.
pub fn t_ball(g: &SimplicialGraph, radius: usize) -> HashMap<NormalForm, usize> {
    let steps = t_steps(g);
    let mut dist = HashMap::from([(NormalForm::identity(), 0usize)]);
    let mut frontier = vec![NormalForm::identity()];
    for d in 1..=radius {
        let mut next = Vec::new();
        for x in &frontier {
            for st in &steps {
                let y = normalize(g, &[x.letters(), st.as_slice()].concat());
                if !dist.contains_key(&y) {
                    dist.insert(y.clone(), d);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Unidirectional BFS for `|h|_T` in the Cayley graph of `(H_Γ, T)`.
/// `None` if `h` is not reached within `max_radius`.
pub fn t_length_bfs(g: &SimplicialGraph, h: &NormalForm, max_radius: usize) -> Option<usize> {
    let steps = t_steps(g);
    let mut seen = HashSet::from([NormalForm::identity()]);
    let mut frontier = vec![NormalForm::identity()];
    for d in 0..=max_radius {
        if frontier.contains(h) {
            return Some(d);
        }
        let mut next = Vec::new();
        for x in &frontier {
            for st in &steps {
                let y = normalize(g, &[x.letters(), st.as_slice()].concat());
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    None
}
