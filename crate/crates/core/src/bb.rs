//! The Bestvina-Brady subgroup `H_Γ = ker Φ` and its generating set `T`.
//!
//! A [`TLetter`] stands for `(s t⁻¹)^{±1}` with `s < t` adjacent. Words over
//! `T` are produced by three rewriters: pairs `a^m b^{-m}` along a shortest
//! path, arbitrary members by telescoping syllables, and members of a join by
//! routing every syllable through a fixed vertex on the other side.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{bit, JoinDecomposition, SimplicialGraph, VertexId};
use crate::search::{self, Measure};
use crate::word::{self, distance, mul_word, push_reduced, Letter, Letters, NormalForm};

/// `(first · second⁻¹)^sign` with `first < second` adjacent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TLetter {
    pub first: VertexId,
    pub second: VertexId,
    pub sign: i8,
}

impl TLetter {
    /// The letter equal to `s t⁻¹`, in either orientation.
    pub fn new(s: VertexId, t: VertexId) -> TLetter {
        debug_assert_ne!(s, t);
        if s < t {
            TLetter { first: s, second: t, sign: 1 }
        } else {
            TLetter { first: t, second: s, sign: -1 }
        }
    }

    pub fn inverse(self) -> TLetter {
        TLetter { sign: -self.sign, ..self }
    }

    pub fn is_positive(self) -> bool {
        self.sign > 0
    }

    /// The two S-letters of this letter.
    pub fn letters(self) -> [Letter; 2] {
        if self.sign > 0 {
            [Letter::pos(self.first), Letter::neg(self.second)]
        } else {
            [Letter::pos(self.second), Letter::neg(self.first)]
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TWord {
    pub letters: Vec<TLetter>,
}

impl TWord {
    pub fn new(letters: Vec<TLetter>) -> Self {
        TWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> TWord {
        TWord::new(self.letters.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &TWord) -> TWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        TWord::new(letters)
    }

    /// Free reduction over `T`: cancels adjacent `τ τ⁻¹`.
    pub fn free_reduce(&self) -> TWord {
        let mut out: Vec<TLetter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        TWord::new(out)
    }

    fn push_power(&mut self, s: VertexId, t: VertexId, m: i64) {
        if s == t || m == 0 {
            return;
        }
        let l = TLetter::new(s, t);
        let l = if m > 0 { l } else { l.inverse() };
        self.letters
            .extend(std::iter::repeat(l).take(m.unsigned_abs() as usize));
    }
}

/// Positive generators `s t⁻¹`, one per edge, in edge order.
pub fn t_generators(g: &SimplicialGraph) -> Result<Vec<TLetter>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(g.edges().iter().map(|&(s, t)| TLetter::new(s, t)).collect())
}

pub fn is_member(x: &NormalForm) -> bool {
    x.height() == 0
}

fn check_member(x: &NormalForm) -> Result<()> {
    if is_member(x) {
        Ok(())
    } else {
        Err(Error::NotAMember(x.height()))
    }
}

fn check_letter(g: &SimplicialGraph, l: TLetter) -> Result<()> {
    let n = g.vertex_count();
    if l.first >= n || l.second >= n || l.first >= l.second || l.sign.abs() != 1 {
        return Err(Error::Parse(format!("malformed T-letter {l:?}")));
    }
    if !g.adjacent(l.first, l.second) {
        return Err(Error::NotAnEdge(
            g.name(l.first).to_string(),
            g.name(l.second).to_string(),
        ));
    }
    Ok(())
}

pub fn eval_t_word(g: &SimplicialGraph, w: &TWord) -> NormalForm {
    let flat: Vec<Letter> = w.letters.iter().flat_map(|l| l.letters()).collect();
    word::normalize(g, &flat)
}

/// `a^m b^{-m}` as `(s₀s₁⁻¹)^m (s₁s₂⁻¹)^m ⋯` along the shortest path from
/// `a` to `b`.
pub fn rewrite_pair(g: &SimplicialGraph, a: VertexId, b: VertexId, m: i64) -> Result<TWord> {
    let mut out = TWord::default();
    if a == b || m == 0 {
        return Ok(out);
    }
    let path = g.shortest_path(a, b)?;
    for step in path.vertices.windows(2) {
        out.push_power(step[0], step[1], m);
    }
    Ok(out)
}

/// Maximal runs of equal-vertex letters, as `(vertex, exponent)`.
pub fn syllables(letters: &[Letter]) -> Vec<(VertexId, i64)> {
    let mut out: Vec<(VertexId, i64)> = Vec::new();
    for l in letters {
        match out.last_mut() {
            Some((v, k)) if *v == l.vertex() => *k += l.sign() as i64,
            _ => out.push((l.vertex(), l.sign() as i64)),
        }
    }
    out.retain(|&(_, k)| k != 0);
    out
}

/// Rewrites a member `h = s₁^{m₁} ⋯ s_k^{m_k}` as the product of
/// `s_i^{P_i} s_{i+1}^{-P_i}` with `P_i = m₁ + ⋯ + m_i`.
pub fn rewrite_general(g: &SimplicialGraph, h: &NormalForm) -> Result<TWord> {
    check_member(h)?;
    if h.is_empty() {
        return Ok(TWord::default());
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let syl = syllables(h.letters());
    let mut out = TWord::default();
    let mut prefix = 0i64;
    for pair in syl.windows(2) {
        prefix += pair[0].1;
        let block = rewrite_pair(g, pair[0].0, pair[1].0, prefix)?;
        out.letters.extend(block.letters);
    }
    Ok(out)
}

/// Rewrites a member of a join `Γ₁ * Γ₂` through the least vertices `a ∈ Γ₁`
/// and `b ∈ Γ₂`. The output is not freely reduced.
pub fn rewrite_join(g: &SimplicialGraph, h: &NormalForm, j: &JoinDecomposition) -> Result<TWord> {
    check_member(h)?;
    g.validate_join(j)?;
    let a = *j.left.iter().min().expect("validated");
    let b = *j.right.iter().min().expect("validated");
    let left_mask: u64 = j.left.iter().map(|&v| bit(v)).sum();
    let (w1, w2): (Vec<Letter>, Vec<Letter>) = h
        .letters()
        .iter()
        .partition(|l| left_mask & bit(l.vertex()) != 0);
    let mut out = TWord::default();
    let mut m = 0i64;
    for (v, k) in syllables(&w1) {
        out.push_power(v, b, k);
        m += k;
    }
    out.push_power(b, a, m);
    for (v, k) in syllables(&w2) {
        out.push_power(a, v, -k);
    }
    Ok(out)
}

/// Shortest T-word known without search: the freely reduced general
/// rewrite, or the join rewrite when it is shorter.
pub fn t_upper_bound(g: &SimplicialGraph, h: &NormalForm) -> Result<TWord> {
    let general = rewrite_general(g, h)?.free_reduce();
    match g.join_decomposition() {
        Some(j) => {
            let join = rewrite_join(g, h, &j)?.free_reduce();
            Ok(if join.len() < general.len() { join } else { general })
        }
        None => Ok(general),
    }
}

/// `|h|_T`. On a tree `T` is a free basis, so the freely reduced rewrite is
/// already geodesic. Otherwise a bidirectional search over `T`-steps runs,
/// pruned by `|z⁻¹h|_S / 2 ≤ |z⁻¹h|_T` against the rewrite length.
pub fn t_length(g: &SimplicialGraph, h: &NormalForm, budget: usize) -> Result<Measure> {
    check_member(h)?;
    if h.is_empty() {
        return Ok(Measure::exact(0));
    }
    let upper = t_upper_bound(g, h)?.len() as u64;
    if g.is_tree() {
        return Ok(Measure::exact(upper));
    }
    Ok(t_length_search(g, h, upper, budget))
}

/// Bidirectional search only, bounded above by `upper`.
pub fn t_length_search(g: &SimplicialGraph, h: &NormalForm, upper: u64, budget: usize) -> Measure {
    let steps: Vec<[Letter; 2]> = g
        .edges()
        .iter()
        .flat_map(|&(s, t)| [TLetter::new(s, t).letters(), TLetter::new(t, s).letters()])
        .collect();
    let half = |d: usize| d.div_ceil(2) as u64;
    search::bidirectional(
        &NormalForm::identity(),
        h,
        |x, out| out.extend(steps.iter().map(|st| mul_word(g, x, st))),
        |x, depth| depth + half(distance(g, x, h)) < upper,
        |x, depth| depth + half(x.len()) < upper,
        Some(upper),
        budget,
    )
}

/// Searches for a nonempty freely reduced word of length at most `max_len`
/// in `T^{±1}` that evaluates to the identity. Returns the first one found
/// in depth-first order.
pub fn find_relation(g: &SimplicialGraph, max_len: usize) -> Result<Option<TWord>> {
    let gens = t_generators(g)?;
    let alphabet: Vec<TLetter> = gens.iter().flat_map(|&l| [l, l.inverse()]).collect();
    let mut word = Vec::with_capacity(max_len);
    Ok(relation_from(g, &alphabet, &mut word, &Letters::new(), max_len).map(TWord::new))
}

fn relation_from(
    g: &SimplicialGraph,
    alphabet: &[TLetter],
    word: &mut Vec<TLetter>,
    reduced: &Letters,
    remaining: usize,
) -> Option<Vec<TLetter>> {
    if remaining == 0 {
        return None;
    }
    for &l in alphabet {
        if word.last() == Some(&l.inverse()) {
            continue;
        }
        let mut next = reduced.clone();
        for s in l.letters() {
            push_reduced(g, &mut next, s);
        }
        word.push(l);
        if next.is_empty() {
            return Some(word.clone());
        }
        if let Some(found) = relation_from(g, alphabet, word, &next, remaining - 1) {
            return Some(found);
        }
        word.pop();
    }
    None
}

/// Formats `w` as tokens `s*t^k` meaning `(s t⁻¹)^k`, compressing runs.
pub fn format_t_word(g: &SimplicialGraph, w: &TWord) -> String {
    let mut tokens = Vec::new();
    let mut i = 0;
    let ls = &w.letters;
    while i < ls.len() {
        let mut j = i;
        while j < ls.len() && ls[j] == ls[i] {
            j += 1;
        }
        let l = ls[i];
        let k = (j - i) as i64 * l.sign as i64;
        let base = format!("{}*{}", g.name(l.first), g.name(l.second));
        tokens.push(if k == 1 { base } else { format!("{base}^{k}") });
        i = j;
    }
    tokens.join(" ")
}

/// Parses the `s*t^k` grammar. Either orientation of an edge is accepted.
pub fn parse_t_word(g: &SimplicialGraph, text: &str) -> Result<TWord> {
    let mut out = TWord::default();
    for token in text.split_whitespace() {
        let (pair, k) = match token.split_once('^') {
            None => (token, 1i64),
            Some((pair, e)) => {
                let k: i64 = e
                    .parse()
                    .map_err(|_| Error::MalformedExponent(token.to_string()))?;
                if k == 0 {
                    return Err(Error::MalformedExponent(token.to_string()));
                }
                (pair, k)
            }
        };
        let (s, t) = pair
            .split_once('*')
            .ok_or_else(|| Error::Parse(format!("expected `s*t` in `{token}`")))?;
        let (s, t) = (g.vertex(s)?, g.vertex(t)?);
        if s == t || !g.adjacent(s, t) {
            return Err(Error::NotAnEdge(g.name(s).to_string(), g.name(t).to_string()));
        }
        if out.len().saturating_add(k.unsigned_abs() as usize) > word::DEFAULT_LETTER_BUDGET {
            return Err(Error::LetterBudget(word::DEFAULT_LETTER_BUDGET));
        }
        out.push_power(s, t, k);
    }
    for &l in &out.letters {
        check_letter(g, l)?;
    }
    Ok(out)
}

pub struct DisplayTWord<'a>(pub &'a SimplicialGraph, pub &'a TWord);

impl fmt::Display for DisplayTWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_t_word(self.0, self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::samples::*;
    use crate::oracle;
    use crate::search::{Status, DEFAULT_BUDGET};
    use crate::word::{format_nf, multiply, parse_element};
    use proptest::prelude::*;

    fn nf(g: &SimplicialGraph, s: &str) -> NormalForm {
        parse_element(g, s).unwrap()
    }

    fn tw(g: &SimplicialGraph, s: &str) -> TWord {
        parse_t_word(g, s).unwrap()
    }

    #[test]
    fn generators() {
        assert_eq!(format_t_word(&edge(), &TWord::new(t_generators(&edge()).unwrap())), "a*b");
        let p4 = path(4);
        assert_eq!(
            format_t_word(&p4, &TWord::new(t_generators(&p4).unwrap())),
            "a*b b*c c*d"
        );
        assert_eq!(t_generators(&free2()), Err(Error::Disconnected));
    }

    #[test]
    fn membership() {
        let g = path(3);
        assert!(is_member(&nf(&g, "a b^-1")));
        assert!(!is_member(&nf(&g, "a")));
        assert!(is_member(&nf(&g, "a^2 b^-1 c^-1")));
    }

    #[test]
    fn evaluation() {
        let g = path(3);
        assert_eq!(eval_t_word(&g, &tw(&g, "a*b")), nf(&g, "a b^-1"));
        assert_eq!(eval_t_word(&g, &tw(&g, "a*b b*c")), nf(&g, "a c^-1"));
        let w = tw(&g, "a*b^2 c*b b*a");
        assert!(eval_t_word(&g, &w.concat(&w.inverse())).is_empty());
    }

    #[test]
    fn pair_rewrites() {
        let p3 = path(3);
        assert!(rewrite_pair(&p3, 0, 0, 5).unwrap().is_empty());
        let w = rewrite_pair(&p3, 0, 2, 2).unwrap();
        assert_eq!(format_t_word(&p3, &w), "a*b^2 b*c^2");
        assert_eq!(eval_t_word(&p3, &w), nf(&p3, "a^2 c^-2"));
        let e = edge();
        assert_eq!(format_t_word(&e, &rewrite_pair(&e, 0, 1, 3).unwrap()), "a*b^3");
        assert_eq!(format_t_word(&e, &rewrite_pair(&e, 1, 0, 1).unwrap()), "a*b^-1");
    }

    #[test]
    fn general_rewrites() {
        let e = edge();
        assert!(rewrite_general(&e, &NormalForm::identity()).unwrap().is_empty());
        let h = nf(&e, "a^2 b^-2");
        let w = rewrite_general(&e, &h).unwrap();
        assert_eq!(format_t_word(&e, &w), "a*b^2");
        let p4 = path(4);
        let w = rewrite_general(&p4, &nf(&p4, "a d^-1")).unwrap();
        assert_eq!(format_t_word(&p4, &w), "a*b b*c c*d");
        assert_eq!(
            rewrite_general(&p4, &nf(&p4, "a")),
            Err(Error::NotAMember(1))
        );
    }

    #[test]
    fn join_rewrites() {
        let p3 = path(3);
        let j = JoinDecomposition { left: vec![0, 2], right: vec![1] };
        let h = nf(&p3, "a c b^-2");
        let w = rewrite_join(&p3, &h, &j).unwrap();
        assert_eq!(format_t_word(&p3, &w), "a*b b*c^-1 a*b^-2 a*b^2");
        assert_eq!(w.len(), 6);
        assert_eq!(eval_t_word(&p3, &w), h);

        let e = edge();
        let h = nf(&e, "a b^-1 a b^-1 a b^-1");
        let j = e.join_decomposition().unwrap();
        let w = rewrite_join(&e, &h, &j).unwrap();
        assert!(w.len() <= 12);
        assert_eq!(eval_t_word(&e, &w), h);

        let bad = JoinDecomposition { left: vec![0], right: vec![2] };
        assert!(matches!(rewrite_join(&p3, &h, &bad), Err(Error::InvalidJoin(_))));
    }

    #[test]
    fn t_length_examples() {
        let e = edge();
        assert_eq!(t_length(&e, &NormalForm::identity(), DEFAULT_BUDGET), Ok(Measure::exact(0)));
        assert_eq!(t_length(&e, &nf(&e, "a b^-1 a b^-1 a b^-1"), DEFAULT_BUDGET), Ok(Measure::exact(3)));
        let p3 = path(3);
        assert_eq!(t_length(&p3, &nf(&p3, "a c^-1"), DEFAULT_BUDGET), Ok(Measure::exact(2)));
        assert_eq!(t_length(&p3, &nf(&p3, "a"), DEFAULT_BUDGET), Err(Error::NotAMember(1)));
    }

    #[test]
    fn search_agrees_with_tree_shortcut() {
        for g in [path(3), path(4), star(3)] {
            for (h, _) in oracle::cayley_bfs(&g, 6).into_iter().filter(|(h, _)| is_member(h)) {
                let upper = t_upper_bound(&g, &h).unwrap().len() as u64;
                let m = t_length_search(&g, &h, upper, DEFAULT_BUDGET);
                assert_eq!(m, Measure::exact(upper), "{}", format_nf(&g, &h));
            }
        }
    }

    #[test]
    fn t_length_matches_bfs_oracle() {
        for g in [c4_chord(), cycle(4), cycle(5)] {
            for (h, _) in oracle::cayley_bfs(&g, 4).into_iter().filter(|(h, _)| is_member(h)) {
                let m = t_length(&g, &h, DEFAULT_BUDGET).unwrap();
                assert_eq!(m.status, Status::Exact);
                let v = m.finite().unwrap() as usize;
                let bfs = oracle::t_length_bfs(&g, &h, v);
                assert_eq!(bfs, Some(v), "{}", format_nf(&g, &h));
            }
        }
    }

    #[test]
    fn t_length_budget() {
        let g = cycle(5);
        let h = nf(&g, "a^4 c^-4 b^3 e^-3 d^2 a^-2");
        let m = t_length(&g, &h, 20).unwrap();
        assert_eq!(m.status, Status::LowerBound);
        let exact = t_length(&g, &h, DEFAULT_BUDGET).unwrap();
        assert!(m.finite() <= exact.finite());
    }

    #[test]
    fn trees_have_no_short_relations() {
        for g in [path(4), star(3), path(5)] {
            assert_eq!(find_relation(&g, 6).unwrap(), None);
        }
        // adjacent T-letters on a triangle satisfy (ab⁻¹)(bc⁻¹)(ca⁻¹) = e
        assert_eq!(find_relation(&cycle(3), 3).unwrap().map(|w| w.len()), Some(3));
    }

    #[test]
    fn t_word_grammar() {
        let g = path(3);
        assert_eq!(tw(&g, "b*a^2"), tw(&g, "a*b^-2"));
        assert_eq!(format_t_word(&g, &tw(&g, "b*c a*b a*b c*b^-1")), "b*c a*b^2 b*c");
        assert!(parse_t_word(&g, "a*c").is_err());
        assert!(parse_t_word(&g, "a*b^0").is_err());
        assert!(parse_t_word(&g, "ab").is_err());
        assert!(tw(&g, "").is_empty());
    }

    fn member_strategy(g: SimplicialGraph, max_len: usize) -> impl Strategy<Value = (SimplicialGraph, NormalForm)> {
        let n = g.vertex_count();
        prop::collection::vec((0..n, any::<bool>()), 0..max_len).prop_map(move |ls| {
            let mut letters: Vec<Letter> = ls.into_iter().map(|(v, p)| Letter::new(v, p)).collect();
            let height: i64 = letters.iter().map(|l| l.sign() as i64).sum();
            letters.extend(std::iter::repeat(Letter::new(0, height < 0)).take(height.unsigned_abs() as usize));
            let h = word::normalize(&g, &letters);
            (g.clone(), h)
        })
    }

    fn suite_member() -> impl Strategy<Value = (SimplicialGraph, NormalForm)> {
        prop_oneof![
            member_strategy(edge(), 24),
            member_strategy(path(3), 24),
            member_strategy(path(4), 24),
            member_strategy(star(3), 24),
            member_strategy(c4_chord(), 24),
        ]
    }

    proptest! {
        #[test]
        fn general_rewrite_round_trips((g, h) in suite_member()) {
            let w = rewrite_general(&g, &h).unwrap();
            prop_assert_eq!(eval_t_word(&g, &w), h.clone());
            let m = g.diameter().unwrap();
            prop_assert!(w.len() <= m * h.len() * h.len());
        }

        #[test]
        fn join_rewrite_round_trips((g, h) in member_strategy(path(3), 30)) {
            let j = g.join_decomposition().unwrap();
            let w = rewrite_join(&g, &h, &j).unwrap();
            prop_assert_eq!(eval_t_word(&g, &w), h.clone());
            prop_assert!(w.len() <= 2 * h.len());
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in "([ab]\\*[ab]|b\\*c|c\\*b)( (a\\*b|b\\*a|b\\*c)){0,6}", b in "(a\\*b|b\\*c)(\\^-?[1-3])?") {
            let g = path(3);
            prop_assume!(!a.contains("a*a") && !a.contains("b*b"));
            let (wa, wb) = (tw(&g, &a), tw(&g, &b));
            prop_assert_eq!(
                eval_t_word(&g, &wa.concat(&wb)),
                multiply(&g, &eval_t_word(&g, &wa), &eval_t_word(&g, &wb))
            );
        }

        #[test]
        fn format_parse_round_trip(ls in prop::collection::vec((0usize..3, any::<bool>()), 0..12)) {
            let g = path(4);
            let w = TWord::new(
                ls.into_iter()
                    .map(|(i, p)| {
                        let l = TLetter::new(i, i + 1);
                        if p { l } else { l.inverse() }
                    })
                    .collect(),
            );
            prop_assert_eq!(tw(&g, &format_t_word(&g, &w)), w);
        }

        #[test]
        fn t_length_is_bounded_by_rewrites((g, h) in member_strategy(c4_chord(), 10)) {
            let m = t_length(&g, &h, DEFAULT_BUDGET).unwrap();
            prop_assert_eq!(m.status, Status::Exact);
            let v = m.finite().unwrap() as usize;
            prop_assert!(v <= rewrite_general(&g, &h).unwrap().len());
            prop_assert!(2 * v >= h.len());
        }
    }
}
