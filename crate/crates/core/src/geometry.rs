//! Finite-radius measurements: distortion of `H_Γ` in `A_Γ`, distances in
//! complements of neighborhoods of `H_Γ`, relative and geodesic divergence.
//!
//! All distances are in the word metric of `(A_Γ, S)`. Every search carries
//! a node budget, and every record carries a [`Status`].

use std::fmt;
use std::str::FromStr;

use serde_json::json;

use crate::ball;
use crate::bb;
use crate::error::{Error, Result};
use crate::graph::{bit, SimplicialGraph, VertexId};
use crate::par;
use crate::search::{self, Measure, Status, Value};
use crate::word::{
    self, cyclic_reduce, distance, format_nf, mul_letter, multiply, normalize, power, Letter,
    NormalForm,
};

/// Distance from `x` to `H_Γ`, which is `|Φ(x)|`.
pub fn distance_to_kernel(x: &NormalForm) -> u64 {
    x.height().unsigned_abs()
}

fn generators(g: &SimplicialGraph) -> Vec<Letter> {
    g.vertices()
        .flat_map(|v| [Letter::pos(v), Letter::neg(v)])
        .collect()
}

/// Length of a shortest edge path from `x` to `y` through vertices with
/// `|Φ| ≥ k`.
///
/// When `k ≥ 1` and the endpoints lie on opposite sides of `H_Γ`, every
/// path crosses `{|Φ| < k}` because each step changes `Φ` by one, so the
/// value is infinite. Otherwise A* runs inside the region.
pub fn complement_distance(
    g: &SimplicialGraph,
    x: &NormalForm,
    y: &NormalForm,
    k: u64,
    budget: usize,
) -> Result<Measure> {
    for (name, z) in [("x", x), ("y", y)] {
        if distance_to_kernel(z) < k {
            return Err(Error::Precondition(format!(
                "|Φ({name})| = {} is below {k}",
                distance_to_kernel(z)
            )));
        }
    }
    if x == y {
        return Ok(Measure::exact(0));
    }
    if k == 0 {
        return Ok(Measure::exact(distance(g, x, y) as u64));
    }
    if x.height().signum() != y.height().signum() {
        return Ok(Measure::infinite());
    }
    let gens = generators(g);
    Ok(search::astar(
        x,
        y,
        |z, out| {
            out.extend(
                gens.iter()
                    .map(|&s| mul_letter(g, z, s))
                    .filter(|w| distance_to_kernel(w) >= k),
            )
        },
        |z| distance(g, z, y) as u64,
        budget,
    ))
}

/// The pair used to show that `H_Γ` has at least quadratic divergence when
/// `Γ` is connected and not a join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPair {
    pub x: NormalForm,
    pub y: NormalForm,
    pub h: NormalForm,
    pub t: VertexId,
    pub join: Vec<VertexId>,
    pub outside: VertexId,
}

impl WitnessPair {
    pub fn to_json(&self, g: &SimplicialGraph) -> serde_json::Value {
        json!({
            "x": format_nf(g, &self.x),
            "y": format_nf(g, &self.y),
            "h": format_nf(g, &self.h),
            "t": g.name(self.t),
            "join": self.join.iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
            "outside": g.name(self.outside),
            "h_cyclically_reduced": word::is_cyclically_reduced(g, &self.h),
            "h_support_is_join": self.support_is_join(g),
        })
    }

    /// Whether the vertices occurring in `h` span a join.
    pub fn support_is_join(&self, g: &SimplicialGraph) -> bool {
        let mask = word::support(&self.h).iter().map(|&v| bit(v)).sum();
        g.join_decomposition_of(mask).is_some()
    }
}

/// `h = g v^{-n}` for `g` the product of a maximal join `J` (in vertex
/// order), `n = |J|` and `v` the least vertex outside `J`; then
/// `x = h^{-r} t^r` and `y = h^r t^r` with `t` the least vertex.
pub fn witness_pair(g: &SimplicialGraph, r: u64) -> Result<WitnessPair> {
    let (join, outside) = g.maximal_join_subgraph()?;
    let mut letters: Vec<Letter> = join.iter().map(|&v| Letter::pos(v)).collect();
    letters.extend(std::iter::repeat(Letter::neg(outside)).take(join.len()));
    let h = normalize(g, &letters);
    let t = 0;
    let tr = power(g, &normalize(g, &[Letter::pos(t)]), r as i64);
    Ok(WitnessPair {
        x: multiply(g, &power(g, &h, -(r as i64)), &tr),
        y: multiply(g, &power(g, &h, r as i64), &tr),
        h,
        t,
        join,
        outside,
    })
}

/// A rational number `p/q` in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rho {
    p: u64,
    q: u64,
}

impl Rho {
    pub fn new(p: u64, q: u64) -> Result<Rho> {
        if q == 0 || p == 0 || p > q {
            return Err(Error::Precondition(format!("rho = {p}/{q} is not in (0, 1]")));
        }
        let d = gcd(p, q);
        Ok(Rho { p: p / d, q: q / d })
    }

    pub fn one() -> Rho {
        Rho { p: 1, q: 1 }
    }

    /// `⌈ρ r⌉`.
    pub fn ceil_mul(self, r: u64) -> u64 {
        (self.p * r).div_ceil(self.q)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl FromStr for Rho {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rho> {
        let bad = || Error::Parse(format!("expected a rational `p/q`, found `{s}`"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        Rho::new(p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivergenceRecord {
    pub rho: Rho,
    pub n: u64,
    pub r: u64,
    pub value: Value,
    pub x: NormalForm,
    pub y: NormalForm,
    pub status: Status,
}

impl DivergenceRecord {
    pub const CSV_HEADER: &'static str = "rho,n,r,value,x,y,status";

    pub fn to_csv(&self, g: &SimplicialGraph) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.rho,
            self.n,
            self.r,
            self.value,
            format_nf(g, &self.x),
            format_nf(g, &self.y),
            self.status
        )
    }

    pub fn to_json(&self, g: &SimplicialGraph) -> serde_json::Value {
        json!({
            "rho": self.rho.to_string(),
            "n": self.n,
            "r": self.r,
            "value": self.value,
            "x": format_nf(g, &self.x),
            "y": format_nf(g, &self.y),
            "status": self.status,
        })
    }
}

/// `δ^n_ρ(r)`: the largest complement distance `d_{⌈ρr⌉}(x₁, x₂)` over pairs
/// on the sheet `{Φ = r}` with `d(x₁, x₂) ≤ n r` and a finite complement
/// distance.
///
/// `H_Γ` acts on the sheet transitively and by isometries of both metrics,
/// so `x₁ = t^r` (`t` the least vertex) loses nothing, and `x₂ = x₁ z` runs
/// over members `z` with `|z|_S ≤ n r`. Pairs on opposite sheets are at
/// infinite complement distance and are excluded. Candidates are tried in
/// decreasing order of the bound `2 |z|_T ≤ 2 |rewrite|`, which also bounds
/// their complement distance, until no candidate can beat the best.
pub fn relative_divergence(
    g: &SimplicialGraph,
    rho: Rho,
    n: u64,
    r: u64,
    budget: usize,
) -> Result<DivergenceRecord> {
    if r == 0 {
        return Err(Error::Precondition("r must be at least 1".into()));
    }
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let k = rho.ceil_mul(r);
    let x1 = power(g, &normalize(g, &[Letter::pos(0)]), r as i64);
    let mut status = Status::Exact;
    let mut members = Vec::new();
    let radius = (n * r) as usize;
    if let Err(e) = ball::enumerate_ball(g, radius, budget, |_, z| {
        if bb::is_member(z) {
            members.push(z.clone());
        }
    }) {
        if !e.is_budget() {
            return Err(e);
        }
        status = Status::LowerBound;
    }
    let mut candidates: Vec<(u64, NormalForm)> = par::map(&members, |z| {
        let ub = 2 * bb::t_upper_bound(g, z).map(|w| w.len()).unwrap_or(0) as u64;
        (ub, z.clone())
    });
    drop(members);
    par::sort_by_key(&mut candidates, |(ub, z)| (std::cmp::Reverse(*ub), z.clone()));

    let mut best = (0u64, x1.clone());
    'outer: for chunk in candidates.chunks(4 * par::width()) {
        if chunk[0].0 <= best.0 {
            break;
        }
        let results = par::map(chunk, |(ub, z)| {
            if *ub <= best.0 {
                return None;
            }
            let x2 = multiply(g, &x1, z);
            Some(complement_distance(g, &x1, &x2, k, budget).map(|m| (m, x2)))
        });
        for ((ub, _), res) in chunk.iter().zip(results) {
            if *ub <= best.0 {
                break 'outer;
            }
            let (m, x2) = res.expect("evaluated")?;
            if m.status == Status::LowerBound {
                status = Status::LowerBound;
            }
            if let Some(v) = m.finite() {
                if v > best.0 {
                    best = (v, x2);
                }
            }
            if m.status == Status::LowerBound {
                break 'outer;
            }
        }
    }
    Ok(DivergenceRecord {
        rho,
        n,
        r,
        value: Value::Finite(best.0),
        x: x1,
        y: best.1,
        status,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicDivergenceRecord {
    pub g: NormalForm,
    pub r: u64,
    pub value: Value,
    pub status: Status,
}

impl GeodesicDivergenceRecord {
    pub const CSV_HEADER: &'static str = "g,r,value,status";

    pub fn to_csv(&self, graph: &SimplicialGraph) -> String {
        format!("{},{},{},{}", format_nf(graph, &self.g), self.r, self.value, self.status)
    }

    pub fn to_json(&self, graph: &SimplicialGraph) -> serde_json::Value {
        json!({
            "g": format_nf(graph, &self.g),
            "r": self.r,
            "value": self.value,
            "status": self.status,
        })
    }
}

/// The point at parameter `j` on the axis `⋯ p p p ⋯` through the identity.
pub fn axis_point(g: &SimplicialGraph, period: &NormalForm, j: i64) -> NormalForm {
    // backwards along the same word, not along the normal form of p⁻¹
    let p: Vec<Letter> = if j >= 0 {
        period.letters().to_vec()
    } else {
        period.letters().iter().rev().map(|l| l.inverse()).collect()
    };
    let letters: Vec<Letter> = p.iter().copied().cycle().take(j.unsigned_abs() as usize).collect();
    normalize(g, &letters)
}

/// Length of a shortest path from `α(-r)` to `α(r)` through vertices at
/// distance at least `r` from the identity.
pub fn geodesic_divergence(
    g: &SimplicialGraph,
    period: &NormalForm,
    r: u64,
    budget: usize,
) -> Result<GeodesicDivergenceRecord> {
    if period.is_empty() {
        return Err(Error::Precondition("period must be nonempty".into()));
    }
    if !cyclic_reduce(g, period).conjugator.is_empty() {
        return Err(Error::Precondition("period must be cyclically reduced".into()));
    }
    let len = period.len();
    let reps = (r as usize).div_ceil(len) + 1;
    for k in 1..=reps {
        let found = power(g, period, k as i64).len();
        if found != k * len {
            return Err(Error::NonGeodesicAxis {
                power: k,
                found,
                expected: k * len,
            });
        }
    }
    let record = |value: Value, status| GeodesicDivergenceRecord {
        g: period.clone(),
        r,
        value,
        status,
    };
    if r == 0 {
        return Ok(record(Value::Finite(0), Status::Exact));
    }
    let start = axis_point(g, period, -(r as i64));
    let goal = axis_point(g, period, r as i64);
    let gens = generators(g);
    let m = search::astar(
        &start,
        &goal,
        |z, out| {
            out.extend(
                gens.iter()
                    .map(|&s| mul_letter(g, z, s))
                    .filter(|w| w.len() as u64 >= r),
            )
        },
        |z| distance(g, z, &goal) as u64,
        budget,
    );
    Ok(record(m.value, m.status))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistortionRecord {
    pub r: u64,
    pub ball_size: u64,
    pub kernel_count: u64,
    pub dist_value: u64,
    pub witness: NormalForm,
    pub status: Status,
}

impl DistortionRecord {
    pub const CSV_HEADER: &'static str = "r,ball_size,kernel_count,dist_value,witness,status";

    pub fn to_csv(&self, g: &SimplicialGraph) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.r,
            self.ball_size,
            self.kernel_count,
            self.dist_value,
            format_nf(g, &self.witness),
            self.status
        )
    }

    pub fn to_json(&self, g: &SimplicialGraph) -> serde_json::Value {
        json!({
            "r": self.r,
            "ball_size": self.ball_size,
            "kernel_count": self.kernel_count,
            "dist_value": self.dist_value,
            "witness": format_nf(g, &self.witness),
            "status": self.status,
        })
    }
}

/// Rows for radii `0..=r_max`; `truncated` is set when the ball budget ran
/// out, in which case `records` holds the completed prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistortionTable {
    pub records: Vec<DistortionRecord>,
    pub truncated: bool,
}

impl DistortionTable {
    pub fn has_lower_bounds(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::LowerBound)
    }
}

/// `Dist(r) = max { |h|_T : h ∈ H_Γ, |h|_S ≤ r }` for `r ≤ r_max`.
///
/// Members of each sphere are tried in decreasing order of their rewrite
/// length (an upper bound on `|h|_T`) and the scan stops once no remaining
/// member can beat the running maximum. The witness of a row is the first
/// maximizer in that order, at the least radius attaining the maximum.
pub fn distortion_table(g: &SimplicialGraph, r_max: u64, budget: usize) -> Result<DistortionTable> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut records = Vec::new();
    let mut sphere = vec![NormalForm::identity()];
    let mut ball_size = 0u64;
    let mut kernel_count = 0u64;
    let mut best = (0u64, NormalForm::identity());
    let mut status = Status::Exact;
    for r in 0..=r_max {
        if r > 0 {
            let next = ball::next_sphere(g, &sphere);
            if next.len() + sphere.len() > budget {
                return Ok(DistortionTable { records, truncated: true });
            }
            sphere = next;
        }
        ball_size += sphere.len() as u64;
        let members: Vec<&NormalForm> = sphere.iter().filter(|x| bb::is_member(x)).collect();
        kernel_count += members.len() as u64;
        let mut ranked: Vec<(u64, &NormalForm)> = par::map(&members, |&h| {
            (bb::t_upper_bound(g, h).map(|w| w.len() as u64).unwrap_or(0), h)
        });
        ranked.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
        'scan: for chunk in ranked.chunks(4 * par::width()) {
            if chunk[0].0 <= best.0 {
                break;
            }
            let results = par::map(chunk, |&(ub, h)| {
                (ub > best.0).then(|| bb::t_length(g, h, budget))
            });
            for (&(ub, h), res) in chunk.iter().zip(results) {
                if ub <= best.0 {
                    break 'scan;
                }
                let m = res.expect("evaluated")?;
                status = status.and(m.status);
                let v = m.finite().expect("t-length is finite");
                if v > best.0 {
                    best = (v, h.clone());
                }
            }
        }
        records.push(DistortionRecord {
            r,
            ball_size,
            kernel_count,
            dist_value: best.0,
            witness: best.1.clone(),
            status,
        });
    }
    Ok(DistortionTable { records, truncated: false })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    /// `log value - fitted`, one per point used.
    pub residuals: Vec<f64>,
    pub points: usize,
}

/// Least-squares slope of `log value` against `log r` over points with
/// `r ≥ 1` and `value ≥ 1`. Advisory only.
pub fn fit_growth(points: &[(u64, u64)]) -> Result<GrowthFit> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(r, v)| r >= 1 && v >= 1)
        .map(|&(r, v)| ((r as f64).ln(), (v as f64).ln()))
        .collect();
    let n = usable.len();
    if n < 3 {
        return Err(Error::InsufficientData(n));
    }
    let nf = n as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData(1));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    Ok(GrowthFit {
        slope,
        intercept,
        residuals: usable.iter().map(|p| p.1 - (intercept + slope * p.0)).collect(),
        points: n,
    })
}

/// Exact rows of a distortion table as `(r, Dist(r))`.
pub fn exact_points(table: &DistortionTable) -> Vec<(u64, u64)> {
    table
        .records
        .iter()
        .filter(|rec| rec.status == Status::Exact)
        .map(|rec| (rec.r, rec.dist_value))
        .collect()
}
