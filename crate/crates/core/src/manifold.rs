//! Combinatorial data of the graph manifold `M` with `π₁(M) = A_Γ` for a
//! tree `Γ`, and of the horizontal surface whose group is `H_Γ`.
//!
//! Each vertex `v` of degree `k ≥ 2` gives a piece `Σ_v × S¹_v`, where
//! `Σ_v` is a disk with `k` holes labelled by the neighbors of `v`. Pieces
//! over adjacent interior vertices are glued along `S¹_u × S¹_v` with fiber
//! and base exchanged. Leaf edges stay as boundary tori. The surface meets
//! piece `v` in a copy of `Σ_v` winding `-1` times around the fiber along
//! each inner hole and `k` times along the outer boundary.

use serde_json::json;

use crate::bb::{self, TLetter};
use crate::error::{Error, Result};
use crate::graph::{SimplicialGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertPiece {
    pub vertex: VertexId,
    /// Inner boundary circles, one per neighbor.
    pub inner: Vec<VertexId>,
    /// The fiber circle is labelled by `vertex` itself.
    pub fiber: VertexId,
}

impl SeifertPiece {
    pub fn degree(&self) -> usize {
        self.inner.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GluingTorus {
    pub edge: (VertexId, VertexId),
    pub swaps_fiber_and_base: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryTorus {
    pub leaf: VertexId,
    pub interior: VertexId,
}

/// Degrees of a surface boundary circle on the base and fiber directions
/// of the torus it lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Winding {
    pub circle: Circle,
    pub base_degree: i64,
    pub fiber_degree: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Circle {
    Inner(VertexId),
    Outer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfacePiece {
    pub vertex: VertexId,
    pub inner_windings: Vec<Winding>,
    pub outer_winding: Winding,
    pub euler: i64,
}

impl SurfacePiece {
    pub fn fiber_winding_sum(&self) -> i64 {
        self.inner_windings.iter().map(|w| w.fiber_degree).sum::<i64>() + self.outer_winding.fiber_degree
    }
}

/// Two surface boundary circles identified across a gluing torus: the
/// circle of piece `a` around hole `b`, and that of piece `b` around `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CirclePairing {
    pub a: VertexId,
    pub b: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldData {
    pub pieces: Vec<SeifertPiece>,
    pub gluings: Vec<GluingTorus>,
    pub boundary_tori: Vec<BoundaryTorus>,
    pub surface: Vec<SurfacePiece>,
    pub pairings: Vec<CirclePairing>,
}

pub fn build_manifold(g: &SimplicialGraph) -> Result<ManifoldData> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(Error::TooFewVertices(n, 3));
    }
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let interior = |v: VertexId| g.degree(v) >= 2;
    let pieces: Vec<SeifertPiece> = g
        .vertices()
        .filter(|&v| interior(v))
        .map(|v| SeifertPiece {
            vertex: v,
            inner: g.neighbors(v).to_vec(),
            fiber: v,
        })
        .collect();
    let mut gluings = Vec::new();
    let mut boundary_tori = Vec::new();
    for &(u, v) in g.edges() {
        match (interior(u), interior(v)) {
            (true, true) => gluings.push(GluingTorus {
                edge: (u, v),
                swaps_fiber_and_base: true,
            }),
            (false, true) => boundary_tori.push(BoundaryTorus { leaf: u, interior: v }),
            (true, false) => boundary_tori.push(BoundaryTorus { leaf: v, interior: u }),
            (false, false) => unreachable!("a tree on three or more vertices has no isolated edge"),
        }
    }
    let surface = pieces
        .iter()
        .map(|p| {
            let k = p.degree() as i64;
            SurfacePiece {
                vertex: p.vertex,
                inner_windings: p
                    .inner
                    .iter()
                    .map(|&u| Winding {
                        circle: Circle::Inner(u),
                        base_degree: 1,
                        fiber_degree: -1,
                    })
                    .collect(),
                outer_winding: Winding {
                    circle: Circle::Outer,
                    base_degree: 1,
                    fiber_degree: k,
                },
                euler: 1 - k,
            }
        })
        .collect();
    let pairings = gluings
        .iter()
        .map(|t| CirclePairing { a: t.edge.0, b: t.edge.1 })
        .collect();
    Ok(ManifoldData {
        pieces,
        gluings,
        boundary_tori,
        surface,
        pairings,
    })
}

/// Euler characteristic of the surface. Gluing circles contribute zero.
pub fn surface_euler(md: &ManifoldData) -> i64 {
    md.surface.iter().map(|s| s.euler).sum()
}

/// Positive generators `u v⁻¹` over all pieces `v` and holes `u`.
pub fn surface_group_generators(md: &ManifoldData) -> Vec<TLetter> {
    let mut out: Vec<TLetter> = md
        .pieces
        .iter()
        .flat_map(|p| p.inner.iter().map(move |&u| TLetter::new(u, p.vertex)))
        .map(|l| if l.is_positive() { l } else { l.inverse() })
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingCheck {
    pub edge: (VertexId, VertexId),
    /// Class of the circle of the first piece, as (base, fiber) there.
    pub first: (i64, i64),
    /// Class of the circle of the second piece, moved into the first
    /// piece's coordinates.
    pub second_swapped: (i64, i64),
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingReport {
    pub checks: Vec<GluingCheck>,
}

impl GluingReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn inner_class(md: &ManifoldData, piece: VertexId, hole: VertexId) -> Option<(i64, i64)> {
    let s = md.surface.iter().find(|s| s.vertex == piece)?;
    let w = s
        .inner_windings
        .iter()
        .find(|w| w.circle == Circle::Inner(hole))?;
    Some((w.base_degree, w.fiber_degree))
}

/// For every gluing torus, compares the two surface circles on it up to
/// sign after exchanging fiber and base.
pub fn check_gluing_compatibility(md: &ManifoldData) -> GluingReport {
    let checks = md
        .gluings
        .iter()
        .map(|t| {
            let (u, v) = t.edge;
            let first = inner_class(md, u, v);
            let second = inner_class(md, v, u);
            match (first, second) {
                (Some(first), Some((base, fiber))) => {
                    let second_swapped = if t.swaps_fiber_and_base {
                        (fiber, base)
                    } else {
                        (base, fiber)
                    };
                    let pass = second_swapped == first || second_swapped == (-first.0, -first.1);
                    GluingCheck { edge: t.edge, first, second_swapped, pass }
                }
                _ => GluingCheck {
                    edge: t.edge,
                    first: first.unwrap_or_default(),
                    second_swapped: (0, 0),
                    pass: false,
                },
            }
        })
        .collect();
    GluingReport { checks }
}

impl ManifoldData {
    pub fn to_json(&self, g: &SimplicialGraph) -> serde_json::Value {
        let name = |v: VertexId| g.name(v).to_string();
        let circle = |c: Circle| match c {
            Circle::Inner(u) => name(u),
            Circle::Outer => "outer".to_string(),
        };
        let winding = |w: &Winding| {
            json!({
                "circle": circle(w.circle),
                "base_degree": w.base_degree,
                "fiber_degree": w.fiber_degree,
            })
        };
        let generators: Vec<String> = surface_group_generators(self)
            .iter()
            .map(|l| format!("{}*{}", name(l.first), name(l.second)))
            .collect();
        let report = check_gluing_compatibility(self);
        json!({
            "pieces": self.pieces.iter().map(|p| json!({
                "vertex": name(p.vertex),
                "inner": p.inner.iter().map(|&u| name(u)).collect::<Vec<_>>(),
                "outer": format!("b_{}", name(p.vertex)),
                "fiber": name(p.fiber),
            })).collect::<Vec<_>>(),
            "gluings": self.gluings.iter().map(|t| json!({
                "edge": [name(t.edge.0), name(t.edge.1)],
                "swaps_fiber_and_base": t.swaps_fiber_and_base,
            })).collect::<Vec<_>>(),
            "boundary_tori": self.boundary_tori.iter().map(|b| json!({
                "leaf": name(b.leaf),
                "interior": name(b.interior),
            })).collect::<Vec<_>>(),
            "surface": self.surface.iter().map(|s| json!({
                "vertex": name(s.vertex),
                "inner_windings": s.inner_windings.iter().map(winding).collect::<Vec<_>>(),
                "outer_winding": winding(&s.outer_winding),
                "euler": s.euler,
            })).collect::<Vec<_>>(),
            "pairings": self.pairings.iter().map(|p| json!({
                "a": name(p.a),
                "b": name(p.b),
            })).collect::<Vec<_>>(),
            "surface_euler": surface_euler(self),
            "surface_generators": generators,
            "gluing_checks": report.checks.iter().map(|c| json!({
                "edge": [name(c.edge.0), name(c.edge.1)],
                "pass": c.pass,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks every invariant of `md` against `g` and returns the failures.
pub fn invariant_failures(g: &SimplicialGraph, md: &ManifoldData) -> Vec<String> {
    let mut out = Vec::new();
    if surface_euler(md) != 1 - g.edge_count() as i64 {
        out.push(format!("surface euler {} for {} edges", surface_euler(md), g.edge_count()));
    }
    for s in &md.surface {
        if s.fiber_winding_sum() != 0 {
            out.push(format!("fiber windings of {} sum to {}", g.name(s.vertex), s.fiber_winding_sum()));
        }
    }
    match bb::t_generators(g) {
        Ok(mut t) => {
            t.sort();
            if t != surface_group_generators(md) {
                out.push("surface generators differ from T".to_string());
            }
        }
        Err(e) => out.push(e.to_string()),
    }
    if !check_gluing_compatibility(md).all_pass() {
        out.push("gluing compatibility failed".to_string());
    }
    let interior = g.vertices().filter(|&v| g.degree(v) >= 2).count();
    if md.pieces.len() != interior {
        out.push("piece count differs from interior vertex count".to_string());
    }
    let interior_edges = g
        .edges()
        .iter()
        .filter(|&&(u, v)| g.degree(u) >= 2 && g.degree(v) >= 2)
        .count();
    if md.gluings.len() != interior_edges {
        out.push("gluing count differs from interior edge count".to_string());
    }
    if md.boundary_tori.len() != g.leaves().len() {
        out.push("boundary torus count differs from leaf count".to_string());
    }
    out
}
