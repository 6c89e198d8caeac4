//! Acceptance criteria, one line each. Runs as a plain binary so the
//! verdict lines are always printed; exits nonzero if any criterion fails.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use raag_core::ball::walk_ball;
use raag_core::bb::{self, syllables};
use raag_core::geometry::{self, Rho};
use raag_core::graph::samples;
use raag_core::manifold;
use raag_core::oracle;
use raag_core::search::{Status, Value, DEFAULT_BUDGET};
use raag_core::word::{self, format_nf, Letter, NormalForm};
use raag_core::SimplicialGraph;

/// Frozen distortion values of P4 for `r = 0..=8`. Radii up to 4 were
/// checked against a breadth-first ball of `(H, T)`, radii 5 and 6 by exact
/// bidirectional search over every member.
const P4_DISTORTION: [u64; 9] = [0, 0, 3, 3, 8, 8, 15, 15, 24];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn random_member(g: &SimplicialGraph, rng: &mut StdRng, max_len: usize) -> NormalForm {
    let half = rng.gen_range(0..=max_len / 2);
    let n = g.vertex_count();
    let mut letters: Vec<Letter> = (0..2 * half)
        .map(|i| Letter::new(rng.gen_range(0..n), i < half))
        .collect();
    letters.shuffle(rng);
    word::normalize(g, &letters)
}

#[derive(Default)]
struct Corpus {
    checked: AtomicU64,
    round_trip_failures: AtomicU64,
    bound_checks: AtomicU64,
    bound_violations: AtomicU64,
    examples: Mutex<Vec<String>>,
}

impl Corpus {
    fn check(&self, g: &SimplicialGraph, h: &NormalForm) {
        self.checked.fetch_add(1, Ordering::Relaxed);
        let m = g.diameter().expect("connected") as u64;
        let n = h.len() as u64;
        let w = bb::rewrite_general(g, h).expect("member");
        if bb::eval_t_word(g, &w) != *h {
            self.round_trip_failures.fetch_add(1, Ordering::Relaxed);
            self.note(format!("round trip of {}", format_nf(g, h)));
        }
        let mut bounds = vec![(w.len() as u64, m * n * n, "general")];
        let mut prefix = 0i64;
        let syl = syllables(h.letters());
        for pair in syl.windows(2) {
            prefix += pair[0].1;
            let block = bb::rewrite_pair(g, pair[0].0, pair[1].0, prefix).expect("connected");
            bounds.push((block.len() as u64, m * prefix.unsigned_abs(), "pair"));
        }
        if let Some(j) = g.join_decomposition() {
            let w = bb::rewrite_join(g, h, &j).expect("join");
            if bb::eval_t_word(g, &w) != *h {
                self.round_trip_failures.fetch_add(1, Ordering::Relaxed);
                self.note(format!("join round trip of {}", format_nf(g, h)));
            }
            bounds.push((w.len() as u64, 2 * n, "join"));
        }
        for (len, bound, kind) in bounds {
            self.bound_checks.fetch_add(1, Ordering::Relaxed);
            if len > bound {
                self.bound_violations.fetch_add(1, Ordering::Relaxed);
                self.note(format!("{kind} rewrite of {} has length {len} > {bound}", format_nf(g, h)));
            }
        }
    }

    fn note(&self, s: String) {
        let mut ex = self.examples.lock().unwrap();
        if ex.len() < 5 {
            ex.push(s);
        }
    }
}

/// Criteria 1 and 2 share one corpus: every member of the radius-10 ball of
/// each suite graph plus 10^4 random members of length at most 30.
fn rewriter_corpus() -> Corpus {
    let corpus = Corpus::default();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for (_, g) in samples::suite() {
        walk_ball(&g, 10, |w| {
            if w.iter().map(|l| l.sign()).sum::<i32>() == 0 {
                corpus.check(&g, &word::normalize(&g, w));
            }
        });
    }
    let suite = samples::suite();
    for i in 0..10_000 {
        let g = &suite[i % suite.len()].1;
        let h = random_member(g, &mut rng, 30);
        corpus.check(g, &h);
    }
    corpus
}

fn criterion_1(c: &Corpus) -> Verdict {
    let failures = c.round_trip_failures.load(Ordering::Relaxed);
    verdict(
        failures == 0,
        format!(
            "{} members rewritten, {failures} round-trip failures {:?}",
            c.checked.load(Ordering::Relaxed),
            c.examples.lock().unwrap()
        ),
    )
}

fn criterion_2(c: &Corpus) -> Verdict {
    let v = c.bound_violations.load(Ordering::Relaxed);
    verdict(
        v == 0,
        format!("{} length bounds checked, {v} violations", c.bound_checks.load(Ordering::Relaxed)),
    )
}

fn criterion_3() -> Verdict {
    let edge = geometry::distortion_table(&samples::edge(), 12, DEFAULT_BUDGET).unwrap();
    let edge_ok = !edge.truncated
        && edge.records.len() == 13
        && edge.records.iter().all(|r| {
            r.status == Status::Exact && r.dist_value == r.r / 2 && r.dist_value <= 2 * r.r
        });
    let p3 = geometry::distortion_table(&samples::path(3), 10, DEFAULT_BUDGET).unwrap();
    let p3_ok = !p3.truncated
        && p3.records.len() == 11
        && p3.records.iter().all(|r| r.status == Status::Exact && r.dist_value <= 2 * r.r);
    let values = |t: &geometry::DistortionTable| t.records.iter().map(|r| r.dist_value).collect::<Vec<_>>();
    verdict(
        edge_ok && p3_ok,
        format!("edge Dist = {:?}, P3 Dist = {:?}", values(&edge), values(&p3)),
    )
}

fn criterion_4() -> Verdict {
    let t = geometry::distortion_table(&samples::path(4), 8, DEFAULT_BUDGET).unwrap();
    let values: Vec<u64> = t.records.iter().map(|r| r.dist_value).collect();
    let golden = !t.truncated && values == P4_DISTORTION;
    let exact: Vec<(u64, u64)> = geometry::exact_points(&t).into_iter().filter(|&(r, _)| r >= 1).collect();
    // Dist(r)/r <= Dist(s)/s  iff  Dist(r)·s <= Dist(s)·r
    let drops: Vec<u64> = exact
        .windows(2)
        .filter(|w| w[0].1 * w[1].0 > w[1].1 * w[0].0)
        .map(|w| w[1].0)
        .collect();
    let at = |r: u64| exact.iter().find(|p| p.0 == r).map(|p| p.1);
    let strict = match (at(4), at(8)) {
        (Some(d4), Some(d8)) => d8 * 4 > d4 * 8,
        _ => false,
    };
    verdict(
        golden && drops.is_empty() && strict,
        format!(
            "Dist = {values:?} (golden {}), Dist(8)/8 > Dist(4)/4: {strict}, Dist(r)/r drops at r = {drops:?}",
            if golden { "matches" } else { "differs" }
        ),
    )
}

fn criterion_5() -> Verdict {
    let mut violations = Vec::new();
    let mut compared = 0;
    for (name, g) in [("edge", samples::edge()), ("P3", samples::path(3)), ("P4", samples::path(4))] {
        let dist = geometry::distortion_table(&g, 8, DEFAULT_BUDGET).unwrap();
        for r in 1..=4u64 {
            let rec = geometry::relative_divergence(&g, Rho::one(), 2, r, DEFAULT_BUDGET).unwrap();
            let Some(row) = dist.records.get(2 * r as usize) else { continue };
            if rec.status != Status::Exact || row.status != Status::Exact {
                continue;
            }
            compared += 1;
            let delta = rec.value.finite().unwrap_or(u64::MAX);
            if delta > row.dist_value {
                violations.push(format!("{name} r={r}: {delta} > Dist({}) = {}", 2 * r, row.dist_value));
            }
        }
    }
    verdict(
        violations.is_empty() && compared > 0,
        format!("{compared} exact pairs compared, violations: {violations:?}"),
    )
}

fn criterion_6() -> Verdict {
    let mut rng = StdRng::seed_from_u64(6);
    let suite = samples::suite();
    let mut opposite_bad = 0;
    let mut same_bad = Vec::new();
    for i in 0..1000 {
        let g = &suite[i % suite.len()].1;
        let (x, y, k) = sheet_pair(g, &mut rng, true);
        let m = geometry::complement_distance(g, &x, &y, k, DEFAULT_BUDGET).unwrap();
        if !(m.value == Value::Infinite && m.status == Status::Exact) {
            opposite_bad += 1;
        }
    }
    for i in 0..1000 {
        let g = &suite[i % suite.len()].1;
        let (x, y, k) = sheet_pair(g, &mut rng, false);
        let m = geometry::complement_distance(g, &x, &y, k, DEFAULT_BUDGET).unwrap();
        let z = word::multiply(g, &word::invert(g, &x), &y);
        let bound = 2 * bb::t_upper_bound(g, &z).unwrap().len() as u64;
        let ok = m.status == Status::Exact && m.finite().is_some_and(|v| v <= bound);
        if !ok && same_bad.len() < 5 {
            same_bad.push(format!("{} to {}: {:?} vs {bound}", format_nf(g, &x), format_nf(g, &y), m));
        }
    }
    verdict(
        opposite_bad == 0 && same_bad.is_empty(),
        format!("opposite-sheet failures {opposite_bad}/1000, same-sheet failures {same_bad:?}"),
    )
}

/// `x` on a sheet `Φ = m ≥ 1` and `y` either on `Φ = -m'` or on the same
/// sheet as `x`, with the threshold `k ≤ min(|Φ(x)|, |Φ(y)|)`.
fn sheet_pair(g: &SimplicialGraph, rng: &mut StdRng, opposite: bool) -> (NormalForm, NormalForm, u64) {
    let n = g.vertex_count();
    let point = |rng: &mut StdRng, height: i64| {
        let h = random_member(g, rng, 4);
        let v = rng.gen_range(0..n);
        let t = word::power(g, &word::normalize(g, &[Letter::pos(v)]), height);
        word::multiply(g, &h, &t)
    };
    let m = rng.gen_range(1..=3i64);
    let x = point(rng, m);
    if opposite {
        let m2 = rng.gen_range(1..=3i64);
        let y = point(rng, -m2);
        (x, y, rng.gen_range(1..=m.min(m2)) as u64)
    } else {
        let y = word::multiply(g, &x, &random_member(g, rng, 4));
        (x, y, rng.gen_range(1..=m) as u64)
    }
}

fn criterion_7() -> Verdict {
    let e = samples::edge();
    let a = word::parse_element(&e, "a").unwrap();
    let z2: Vec<Option<u64>> = (1..=3)
        .map(|r| {
            let rec = geometry::geodesic_divergence(&e, &a, r, DEFAULT_BUDGET).unwrap();
            (rec.status == Status::Exact).then(|| rec.value.finite()).flatten()
        })
        .collect();
    let z2_ok = z2 == [Some(4), Some(8), Some(12)];
    let p4 = samples::path(4);
    let h = geometry::witness_pair(&p4, 1).unwrap().h;
    let div: Vec<Option<u64>> = (1..=3)
        .map(|r| {
            let rec = geometry::geodesic_divergence(&p4, &h, r, DEFAULT_BUDGET).unwrap();
            (rec.status == Status::Exact).then(|| rec.value.finite()).flatten()
        })
        .collect();
    let convex = match div[..] {
        [Some(d1), Some(d2), Some(d3)] => d3 + d1 >= 2 * d2,
        _ => false,
    };
    verdict(
        z2_ok && convex,
        format!("Z^2 axis of a: {z2:?}; P4 axis of {}: Div(1..=3) = {div:?}", format_nf(&p4, &h)),
    )
}

fn criterion_8() -> Verdict {
    let graphs = [
        ("edge", samples::edge()),
        ("P3", samples::path(3)),
        ("P4", samples::path(4)),
        ("K13", samples::star(3)),
        ("C4+chord", samples::c4_chord()),
        ("F2", samples::free2()),
        ("P5", samples::path(5)),
        ("C5", samples::cycle(5)),
    ];
    let mut mismatches = Vec::new();
    let mut checked = 0usize;
    for (name, g) in &graphs {
        let bfs = oracle::cayley_bfs(g, 5);
        for (x, &d) in &bfs {
            checked += 1;
            if word::geodesic_length(x) != d {
                mismatches.push(format!("{name}: |{}|", format_nf(g, x)));
            }
            if geometry::distance_to_kernel(x) as usize != oracle::distance_to_kernel_bfs(g, x) {
                mismatches.push(format!("{name}: d({}, H)", format_nf(g, x)));
            }
        }
    }
    verdict(
        mismatches.is_empty(),
        format!("{checked} elements on {} graphs, mismatches {:?}", graphs.len(), &mismatches[..mismatches.len().min(5)]),
    )
}

fn criterion_9() -> Verdict {
    let mut trees = 0;
    let mut failures = Vec::new();
    for n in 3..=7 {
        for g in samples::trees(n) {
            trees += 1;
            let md = manifold::build_manifold(&g).unwrap();
            failures.extend(manifold::invariant_failures(&g, &md));
        }
    }
    verdict(failures.is_empty(), format!("{trees} trees, failures {failures:?}"))
}

fn criterion_10() -> Verdict {
    let mut found = Vec::new();
    for (name, g) in [("P4", samples::path(4)), ("K13", samples::star(3))] {
        if let Some(w) = bb::find_relation(&g, 8).unwrap() {
            found.push(format!("{name}: {}", bb::format_t_word(&g, &w)));
        }
    }
    verdict(found.is_empty(), format!("relations of length <= 8: {found:?}"))
}

fn main() {
    // `cargo test` passes harness flags; a name filter skips the suite
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return;
    }
    let mut failed = 0;
    let mut report = |n: u32, limit: Option<Duration>, run: &dyn Fn() -> Verdict| {
        let start = Instant::now();
        let v = run();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took <= l);
        let pass = v.pass && in_time;
        if !pass {
            failed += 1;
        }
        let limit_note = match limit {
            Some(l) if !in_time => format!(" [over the {}s limit]", l.as_secs()),
            _ => String::new(),
        };
        println!(
            "criterion {n:>2}: {} ({:.1}s){limit_note} {}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            v.detail
        );
    };
    let corpus_start = Instant::now();
    let corpus = rewriter_corpus();
    let corpus_time = corpus_start.elapsed();
    println!("rewriter corpus built in {:.1}s", corpus_time.as_secs_f64());
    let five_min = Duration::from_secs(300);
    report(1, Some(five_min.saturating_sub(corpus_time)), &|| criterion_1(&corpus));
    report(2, None, &|| criterion_2(&corpus));
    report(3, Some(Duration::from_secs(120)), &criterion_3);
    report(4, Some(Duration::from_secs(600)), &criterion_4);
    report(5, None, &criterion_5);
    report(6, None, &criterion_6);
    report(7, None, &criterion_7);
    report(8, None, &criterion_8);
    report(9, Some(Duration::from_secs(60)), &criterion_9);
    report(10, Some(Duration::from_secs(300)), &criterion_10);
    println!("{failed} of 10 criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
