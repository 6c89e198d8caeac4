//! Enumeration of Cayley-graph balls of `A_Γ`.
//!
//! Each element of length `k + 1` is generated from exactly one element of
//! length `k`: strip its greatest last letter. A candidate `x · l` is kept
//! when `l⁻¹` is not a last letter of `x` (so the product is reduced) and
//! no last letter of `x` that commutes with `l` exceeds it (so `l` is the
//! greatest last letter of the product). This makes the geodesic spheres a
//! spanning tree, so no global visited set is needed, and parallel workers
//! never produce duplicates.

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::SimplicialGraph;
use crate::par;
use crate::word::{canonical_order, last_positions, Letter, Letters, NormalForm};

type LastSet = SmallVec<[Letter; 8]>;

fn alphabet(g: &SimplicialGraph) -> Vec<Letter> {
    g.vertices()
        .flat_map(|v| [Letter::pos(v), Letter::neg(v)])
        .collect()
}

#[inline]
fn accepts(g: &SimplicialGraph, lasts: &[Letter], l: Letter) -> bool {
    let inv = l.inverse();
    lasts
        .iter()
        .all(|&m| m != inv && !(m > l && g.adjacent(m.vertex(), l.vertex())))
}

#[inline]
fn child_lasts(g: &SimplicialGraph, lasts: &[Letter], l: Letter) -> LastSet {
    let mut out: LastSet = lasts
        .iter()
        .copied()
        .filter(|m| g.adjacent(m.vertex(), l.vertex()))
        .collect();
    out.push(l);
    out
}

fn lasts_of(g: &SimplicialGraph, letters: &[Letter]) -> LastSet {
    last_positions(g, letters)
        .into_iter()
        .map(|i| letters[i])
        .collect()
}

/// The sphere of radius `k + 1`, given the sphere of radius `k`, sorted in
/// canonical-key order.
pub fn next_sphere(g: &SimplicialGraph, sphere: &[NormalForm]) -> Vec<NormalForm> {
    let alpha = alphabet(g);
    let mut next = par::flat_map(sphere, |x| {
        let lasts = lasts_of(g, x.letters());
        alpha
            .iter()
            .filter(|&&l| accepts(g, &lasts, l))
            .map(|&l| {
                let mut buf: Letters = x.letters().into();
                buf.push(l);
                NormalForm::from_canonical(canonical_order(g, &buf))
            })
            .collect()
    });
    par::sort_unstable(&mut next);
    next
}

/// Visits every element with `|x|_S <= r` once, layer by layer, each layer
/// in canonical-key order. `budget` caps the number of elements held at once
/// (current plus next layer). Returns the number of elements visited.
pub fn enumerate_ball<F>(g: &SimplicialGraph, r: usize, budget: usize, mut visit: F) -> Result<u64>
where
    F: FnMut(usize, &NormalForm),
{
    let mut sphere = vec![NormalForm::identity()];
    let mut count = 0u64;
    for k in 0..=r {
        for x in &sphere {
            visit(k, x);
        }
        count += sphere.len() as u64;
        if k == r {
            break;
        }
        let next = next_sphere(g, &sphere);
        if next.len() + sphere.len() > budget {
            return Err(Error::Budget {
                budget,
                completed: k,
            });
        }
        sphere = next;
    }
    Ok(count)
}

/// Collects the spheres of radius `0..=r`.
pub fn spheres(g: &SimplicialGraph, r: usize, budget: usize) -> Result<Vec<Vec<NormalForm>>> {
    let mut out: Vec<Vec<NormalForm>> = vec![vec![NormalForm::identity()]];
    let mut held = 1usize;
    for k in 0..r {
        let next = next_sphere(g, &out[k]);
        held += next.len();
        if held > budget {
            return Err(Error::Budget {
                budget,
                completed: k,
            });
        }
        out.push(next);
    }
    Ok(out)
}

/// Depth-first walk of the same spanning tree. Memory is `O(r)` per worker
/// and the order is unspecified; `visit` receives a reduced (not necessarily
/// canonical) word for each element with `|x|_S <= r`. Returns the count.
pub fn walk_ball<F>(g: &SimplicialGraph, r: usize, visit: F) -> u64
where
    F: Fn(&[Letter]) + Sync + Send,
{
    visit(&[]);
    if r == 0 {
        return 1;
    }
    let alpha = alphabet(g);
    // split at depth two so workers get comparable subtrees
    let mut roots: Vec<(Letters, LastSet)> = Vec::new();
    for &l in &alpha {
        let w: Letters = SmallVec::from_slice(&[l]);
        let lasts: LastSet = SmallVec::from_slice(&[l]);
        if r == 1 {
            roots.push((w, lasts));
            continue;
        }
        visit(&w);
        for &m in &alpha {
            if accepts(g, &lasts, m) {
                let mut w2 = w.clone();
                w2.push(m);
                roots.push((w2, child_lasts(g, &lasts, m)));
            }
        }
    }
    let depth = roots[0].0.len();
    let inner = if r == 1 { 0 } else { alpha.len() as u64 };
    1 + inner
        + par::sum(&roots, |(w, lasts)| {
            let mut word = w.clone();
            walk_from(g, &alpha, &mut word, lasts, r - depth, &visit)
        })
}

fn walk_from<F>(
    g: &SimplicialGraph,
    alpha: &[Letter],
    word: &mut Letters,
    lasts: &[Letter],
    remaining: usize,
    visit: &F,
) -> u64
where
    F: Fn(&[Letter]),
{
    visit(word);
    if remaining == 0 {
        return 1;
    }
    let mut count = 1;
    for &l in alpha {
        if accepts(g, lasts, l) {
            let next_lasts = child_lasts(g, lasts, l);
            word.push(l);
            count += walk_from(g, alpha, word, &next_lasts, remaining - 1, visit);
            word.pop();
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::samples::*;
    use crate::oracle;
    use crate::word::normalize;
    use std::collections::HashSet;
    use std::sync::Mutex;

    fn ball_count(g: &SimplicialGraph, r: usize) -> u64 {
        enumerate_ball(g, r, usize::MAX, |_, _| {}).unwrap()
    }

    #[test]
    fn small_ball_counts() {
        assert_eq!(ball_count(&edge(), 1), 5);
        assert_eq!(ball_count(&edge(), 2), 13);
        assert_eq!(ball_count(&free2(), 2), 17);
    }

    #[test]
    fn z2_balls_follow_closed_form() {
        for r in 0..=12u64 {
            assert_eq!(ball_count(&edge(), r as usize), 2 * r * r + 2 * r + 1);
        }
    }

    #[test]
    fn p4_spheres_follow_growth_series() {
        // growth series (1+t)^2 / ((1-t)(1-5t))
        let f = |n: i64| if n < 0 { 0 } else { (5i64.pow(n as u32 + 1) - 1) / 4 };
        let sph = spheres(&path(4), 7, usize::MAX).unwrap();
        for (n, s) in sph.iter().enumerate() {
            let n = n as i64;
            assert_eq!(s.len() as i64, f(n) + 2 * f(n - 1) + f(n - 2), "n = {n}");
        }
    }

    #[test]
    fn layers_match_plain_bfs() {
        for g in [path(3), c4_chord(), star(3), cycle(5)] {
            let bfs = oracle::cayley_bfs(&g, 5);
            let mut seen = HashSet::new();
            let n = enumerate_ball(&g, 5, usize::MAX, |k, x| {
                assert_eq!(bfs.get(x), Some(&k));
                assert_eq!(x.len(), k);
                assert!(seen.insert(x.clone()));
            })
            .unwrap();
            assert_eq!(n as usize, bfs.len());
        }
    }

    #[test]
    fn layers_are_sorted() {
        let sph = spheres(&path(4), 4, usize::MAX).unwrap();
        for s in &sph {
            assert!(s.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn walk_agrees_with_layers() {
        for g in [edge(), free2(), path(4), c4_chord()] {
            for r in 0..=5 {
                let seen = Mutex::new(HashSet::new());
                let n = walk_ball(&g, r, |w| {
                    let x = normalize(&g, w);
                    assert_eq!(x.len(), w.len(), "walk produced an unreduced word");
                    assert!(seen.lock().unwrap().insert(x));
                });
                assert_eq!(n, ball_count(&g, r));
                assert_eq!(seen.lock().unwrap().len() as u64, n);
            }
        }
    }

    #[test]
    fn budget_reports_completed_layer() {
        let err = enumerate_ball(&path(4), 6, 100, |_, _| {}).unwrap_err();
        assert!(matches!(err, Error::Budget { budget: 100, completed: 2 }), "{err:?}");
    }
}
