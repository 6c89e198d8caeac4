//! Defining graphs of right-angled Artin groups.
//!
//! A [`SimplicialGraph`] is immutable once built. Vertex order is the order
//! of appearance in the input and every tie-break downstream refers to it.
//! Adjacency is kept both as sorted neighbor lists and as `u64` bit masks,
//! which limits graphs to [`MAX_VERTICES`] vertices.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

pub type VertexId = usize;

#[inline]
pub(crate) fn bit(v: VertexId) -> u64 {
    1u64 << v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialGraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<VertexId>>,
    adj_mask: Vec<u64>,
}

/// A splitting of the vertex set into two nonempty parts with every
/// cross pair adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JoinDecomposition {
    pub left: Vec<VertexId>,
    pub right: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphPath {
    pub vertices: Vec<VertexId>,
}

impl GraphPath {
    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<Vec<String>>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '^' | '*' | ',' | '"'))
}

/// Parses and validates a graph file.
pub fn load_graph(text: &str) -> Result<SimplicialGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut pairs = Vec::with_capacity(file.edges.len());
    for e in &file.edges {
        match e.as_slice() {
            [u, v] => pairs.push((u.as_str(), v.as_str())),
            _ => {
                return Err(Error::Parse(format!(
                    "edge must have exactly 2 endpoints, found {}",
                    e.len()
                )))
            }
        }
    }
    let names: Vec<&str> = file.vertices.iter().map(String::as_str).collect();
    SimplicialGraph::new(&names, &pairs)
}

impl SimplicialGraph {
    pub fn new(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        if vertices.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(vertices.len()));
        }
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, &name) in vertices.iter().enumerate() {
            if !valid_name(name) {
                return Err(Error::InvalidVertexName(name.to_string()));
            }
            if index.insert(name.to_string(), i).is_some() {
                return Err(Error::DuplicateVertex(name.to_string()));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))
        };
        let mut seen = HashSet::new();
        let mut idx_edges = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            let (a, b) = (lookup(u)?, lookup(v)?);
            if a == b {
                return Err(Error::SelfLoop(u.to_string()));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(u.to_string(), v.to_string()));
            }
            idx_edges.push(key);
        }
        let names = vertices.iter().map(|s| s.to_string()).collect();
        Ok(Self::from_parts(names, index, idx_edges))
    }

    fn from_parts(
        names: Vec<String>,
        index: HashMap<String, VertexId>,
        mut edges: Vec<(VertexId, VertexId)>,
    ) -> Self {
        edges.sort_unstable();
        let n = names.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut adj_mask = vec![0u64; n];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
            adj_mask[a] |= bit(b);
            adj_mask[b] |= bit(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        SimplicialGraph {
            names,
            index,
            edges,
            adjacency,
            adj_mask,
        }
    }

    /// Serializes to the graph-file format accepted by [`load_graph`].
    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| vec![self.names[a].clone(), self.names[b].clone()])
                .collect(),
        };
        serde_json::to_string(&file).expect("graph serialization cannot fail")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.names.len()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    #[inline]
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.adj_mask[u] & bit(v) != 0
    }

    #[inline]
    pub fn adj_mask(&self, v: VertexId) -> u64 {
        self.adj_mask[v]
    }

    pub fn all_mask(&self) -> u64 {
        if self.names.len() == 64 {
            u64::MAX
        } else {
            bit(self.names.len()) - 1
        }
    }

    /// BFS distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.distances_from(0).iter().all(Option::is_some)
    }

    pub fn diameter(&self) -> Result<usize> {
        let mut best = 0;
        for v in self.vertices() {
            for d in self.distances_from(v) {
                best = best.max(d.ok_or(Error::Disconnected)?);
            }
        }
        Ok(best)
    }

    /// A geodesic from `a` to `b`; BFS explores neighbors in vertex order and
    /// keeps the first parent found.
    pub fn shortest_path(&self, a: VertexId, b: VertexId) -> Result<GraphPath> {
        let n = self.vertex_count();
        for v in [a, b] {
            if v >= n {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
        }
        let mut parent = vec![usize::MAX; n];
        parent[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            if u == b {
                break;
            }
            for &w in &self.adjacency[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if parent[b] == usize::MAX {
            return Err(Error::Disconnected);
        }
        let mut vertices = vec![b];
        let mut cur = b;
        while cur != a {
            cur = parent[cur];
            vertices.push(cur);
        }
        vertices.reverse();
        Ok(GraphPath { vertices })
    }

    /// Connected components of the complement graph restricted to `subset`,
    /// each as a bit mask, ordered by least vertex.
    fn complement_components(&self, subset: u64) -> Vec<u64> {
        let mut rest = subset;
        let mut comps = Vec::new();
        while rest != 0 {
            let start = rest.trailing_zeros() as usize;
            let mut comp = bit(start);
            let mut frontier = comp;
            while frontier != 0 {
                let u = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = !self.adj_mask[u] & subset & !comp & !bit(u);
                comp |= fresh;
                frontier |= fresh;
            }
            rest &= !comp;
            comps.push(comp);
        }
        comps
    }

    /// Join decomposition of the subgraph induced on `subset` (at least two
    /// vertices). `left` is the smallest complement component, ties going to
    /// the one holding the least vertex.
    pub fn join_decomposition_of(&self, subset: u64) -> Option<JoinDecomposition> {
        if subset.count_ones() < 2 {
            return None;
        }
        let comps = self.complement_components(subset);
        if comps.len() < 2 {
            return None;
        }
        let left = *comps
            .iter()
            .min_by_key(|c| c.count_ones())
            .expect("at least two components");
        Some(JoinDecomposition {
            left: mask_to_vec(left),
            right: mask_to_vec(subset & !left),
        })
    }

    pub fn join_decomposition(&self) -> Option<JoinDecomposition> {
        self.join_decomposition_of(self.all_mask())
    }

    pub fn is_join(&self) -> bool {
        self.join_decomposition().is_some()
    }

    /// Checks that `j` splits the whole vertex set into two nonempty parts
    /// with all cross pairs adjacent.
    pub fn validate_join(&self, j: &JoinDecomposition) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidJoin(msg.to_string()));
        if j.left.is_empty() || j.right.is_empty() {
            return bad("both sides must be nonempty");
        }
        let n = self.vertex_count();
        let mut l = 0u64;
        let mut r = 0u64;
        for &v in &j.left {
            if v >= n {
                return bad("vertex out of range");
            }
            l |= bit(v);
        }
        for &v in &j.right {
            if v >= n {
                return bad("vertex out of range");
            }
            r |= bit(v);
        }
        if l & r != 0 {
            return bad("sides overlap");
        }
        if l | r != self.all_mask() {
            return bad("sides do not cover the vertex set");
        }
        for &u in &j.left {
            if self.adj_mask[u] & r != r {
                return bad("a cross pair is not an edge");
            }
        }
        Ok(())
    }

    /// The lexicographically least maximal induced join subgraph `J`
    /// together with the least vertex outside it.
    pub fn maximal_join_subgraph(&self) -> Result<(Vec<VertexId>, VertexId)> {
        let n = self.vertex_count();
        if n > 20 {
            return Err(Error::TooManyVertices(n));
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if self.is_join() {
            return Err(Error::GraphIsJoin);
        }
        let joins: Vec<u64> = (1u64..(1u64 << n))
            .filter(|&m| self.join_decomposition_of(m).is_some())
            .collect();
        let maximal = joins
            .iter()
            .copied()
            .filter(|&m| !joins.iter().any(|&o| o != m && o & m == m))
            .map(mask_to_vec)
            .min()
            .ok_or(Error::TooFewVertices(n, 2))?;
        let inside: u64 = maximal.iter().map(|&v| bit(v)).sum();
        let v = (0..n)
            .find(|&v| inside & bit(v) == 0)
            .expect("a non-join graph has a vertex outside any join");
        Ok((maximal, v))
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count() >= 1
            && self.edge_count() + 1 == self.vertex_count()
            && self.is_connected()
    }

    pub fn leaves(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.degree(v) == 1).collect()
    }
}

pub(crate) fn mask_to_vec(mut m: u64) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Small named graphs used throughout tests, benches and the CLI.
pub mod samples {
    use super::SimplicialGraph;

    const LETTERS: &str = "abcdefghijklmnopqrstuvwxyz";

    fn letter_names(n: usize) -> Vec<String> {
        assert!(n <= LETTERS.len());
        LETTERS[..n].chars().map(String::from).collect()
    }

    fn build(names: &[String], edges: &[(usize, usize)]) -> SimplicialGraph {
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let pairs: Vec<(&str, &str)> = edges.iter().map(|&(a, b)| (refs[a], refs[b])).collect();
        SimplicialGraph::new(&refs, &pairs).expect("sample graphs are valid")
    }

    /// `a - b`.
    pub fn edge() -> SimplicialGraph {
        path(2)
    }

    /// Two vertices `a`, `b` and no edge: the free group of rank 2.
    pub fn free2() -> SimplicialGraph {
        build(&letter_names(2), &[])
    }

    /// Path on `n` vertices named `a`, `b`, `c`, ...
    pub fn path(n: usize) -> SimplicialGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        build(&letter_names(n), &edges)
    }

    /// Cycle on `n >= 3` vertices named `a`, `b`, ...
    pub fn cycle(n: usize) -> SimplicialGraph {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((0, n - 1));
        build(&letter_names(n), &edges)
    }

    /// Star `K_{1,k}` with center `c` and leaves `x`, `y`, `z`, `u`, `v`, `w`.
    pub fn star(k: usize) -> SimplicialGraph {
        const LEAVES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
        assert!(k <= LEAVES.len());
        let mut names = vec!["c".to_string()];
        names.extend(LEAVES[..k].iter().map(|s| s.to_string()));
        let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        build(&names, &edges)
    }

    /// The 4-cycle `a-b-c-d-a` with the chord `a-c`.
    pub fn c4_chord() -> SimplicialGraph {
        build(
            &letter_names(4),
            &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)],
        )
    }

    /// Edge, P3, P4, K_{1,3}, C4 with a chord.
    pub fn suite() -> Vec<(&'static str, SimplicialGraph)> {
        vec![
            ("edge", edge()),
            ("P3", path(3)),
            ("P4", path(4)),
            ("K13", star(3)),
            ("C4+chord", c4_chord()),
        ]
    }

    /// All trees on `n` vertices up to isomorphism, vertices named by letters.
    pub fn trees(n: usize) -> Vec<SimplicialGraph> {
        super::trees::unlabeled_trees(n)
            .into_iter()
            .map(|edges| build(&letter_names(n), &edges))
            .collect()
    }
}

mod trees {
    use std::collections::BTreeSet;

    type Edges = Vec<(usize, usize)>;

    fn adjacency(n: usize, edges: &Edges) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn encode(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
        let mut kids: Vec<String> = adj[v]
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| encode(adj, w, v))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }

    /// Canonical code: least rooted encoding over the tree's centers.
    fn canonical(n: usize, edges: &Edges) -> String {
        let adj = adjacency(n, edges);
        let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
        let mut remaining = n;
        let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
        let mut removed = vec![false; n];
        while remaining > 2 {
            let mut next = Vec::new();
            for &v in &layer {
                removed[v] = true;
                remaining -= 1;
                for &w in &adj[v] {
                    if !removed[w] {
                        degree[w] -= 1;
                        if degree[w] == 1 {
                            next.push(w);
                        }
                    }
                }
            }
            layer = next;
        }
        (0..n)
            .filter(|&v| !removed[v])
            .map(|c| encode(&adj, c, usize::MAX))
            .min()
            .expect("nonempty tree")
    }

    pub(super) fn unlabeled_trees(n: usize) -> Vec<Edges> {
        if n == 0 {
            return Vec::new();
        }
        let mut level: Vec<Edges> = vec![Vec::new()];
        for size in 1..n {
            let mut seen = BTreeSet::new();
            let mut next = Vec::new();
            for t in &level {
                for v in 0..size {
                    let mut grown = t.clone();
                    grown.push((v, size));
                    if seen.insert(canonical(size + 1, &grown)) {
                        next.push(grown);
                    }
                }
            }
            level = next;
        }
        level
    }
}
