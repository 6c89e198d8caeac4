//! Words over `S ∪ S⁻¹` and their canonical normal forms.
//!
//! Two words represent the same element of `A_Γ` exactly when they reduce to
//! the same shuffle class. Reduction appends letters one at a time: a new
//! letter cancels against an earlier inverse if every letter in between
//! commutes with it. The canonical representative of a reduced shuffle class
//! is its lexicographically least linearization, built greedily by always
//! emitting the smallest letter that can be shuffled to the front.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{bit, SimplicialGraph, VertexId};

/// Letters order by vertex index first, then `+1` before `-1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    #[inline]
    pub fn new(vertex: VertexId, positive: bool) -> Letter {
        debug_assert!(vertex < crate::graph::MAX_VERTICES);
        Letter(((vertex as u8) << 1) | (!positive) as u8)
    }

    #[inline]
    pub fn pos(vertex: VertexId) -> Letter {
        Letter::new(vertex, true)
    }

    #[inline]
    pub fn neg(vertex: VertexId) -> Letter {
        Letter::new(vertex, false)
    }

    #[inline]
    pub fn vertex(self) -> VertexId {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub fn sign(self) -> i32 {
        if self.is_positive() {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.vertex(), if self.is_positive() { '+' } else { '-' })
    }
}

pub type Letters = SmallVec<[Letter; 24]>;

/// An arbitrary, possibly unreduced, word.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SWord {
    pub letters: Vec<Letter>,
}

impl SWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        SWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn sign_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign() as i64).sum()
    }

    pub fn inverse(&self) -> SWord {
        SWord::new(self.letters.iter().rev().map(|l| l.inverse()).collect())
    }
}

/// Canonical geodesic representative of a group element.
///
/// Equality of normal forms is equality in `A_Γ`. The derived `Ord` compares
/// letter sequences lexicographically and is the canonical key order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NormalForm {
    letters: Letters,
    height: i32,
}

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm::default()
    }

    /// Wraps letters already known to be reduced and lexicographically least.
    pub(crate) fn from_canonical(letters: Letters) -> Self {
        let height = letters.iter().map(|l| l.sign()).sum();
        NormalForm { letters, height }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Geodesic length `|x|_S`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Image under the height homomorphism `Φ`.
    pub fn height(&self) -> i64 {
        self.height as i64
    }

    pub fn to_sword(&self) -> SWord {
        SWord::new(self.letters.to_vec())
    }
}

impl fmt::Debug for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NF{:?}", self.letters.as_slice())
    }
}

/// Appends `l` to the reduced word `buf`, cancelling it against an inverse
/// that can be shuffled to the end. Returns whether a cancellation happened.
#[inline]
pub(crate) fn push_reduced(g: &SimplicialGraph, buf: &mut Letters, l: Letter) -> bool {
    let inv = l.inverse();
    let adj = g.adj_mask(l.vertex());
    for i in (0..buf.len()).rev() {
        let m = buf[i];
        if m == inv {
            buf.remove(i);
            return true;
        }
        if adj & bit(m.vertex()) == 0 {
            break;
        }
    }
    buf.push(l);
    false
}

/// Lexicographically least linearization of a reduced word.
pub(crate) fn canonical_order(g: &SimplicialGraph, letters: &[Letter]) -> Letters {
    let full = g.all_mask();
    let mut rest: Letters = letters.into();
    let mut out = Letters::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut blocked = 0u64;
        let mut best = 0usize;
        for (i, &l) in rest.iter().enumerate() {
            let v = l.vertex();
            if blocked & bit(v) == 0 && l < rest[best] {
                best = i;
            }
            blocked |= !g.adj_mask(v);
            if blocked & full == full {
                break;
            }
        }
        out.push(rest.remove(best));
    }
    out
}

pub fn normalize(g: &SimplicialGraph, word: &[Letter]) -> NormalForm {
    let mut buf = Letters::with_capacity(word.len());
    for &l in word {
        push_reduced(g, &mut buf, l);
    }
    NormalForm::from_canonical(canonical_order(g, &buf))
}

/// Normal form of `x · l`.
pub fn mul_letter(g: &SimplicialGraph, x: &NormalForm, l: Letter) -> NormalForm {
    let mut buf = x.letters.clone();
    push_reduced(g, &mut buf, l);
    NormalForm::from_canonical(canonical_order(g, &buf))
}

/// Normal form of `x · w` for an arbitrary word `w`.
pub fn mul_word(g: &SimplicialGraph, x: &NormalForm, w: &[Letter]) -> NormalForm {
    let mut buf = x.letters.clone();
    for &l in w {
        push_reduced(g, &mut buf, l);
    }
    NormalForm::from_canonical(canonical_order(g, &buf))
}

pub fn multiply(g: &SimplicialGraph, x: &NormalForm, y: &NormalForm) -> NormalForm {
    mul_word(g, x, &y.letters)
}

pub fn invert(g: &SimplicialGraph, x: &NormalForm) -> NormalForm {
    let rev: Letters = x.letters.iter().rev().map(|l| l.inverse()).collect();
    NormalForm::from_canonical(canonical_order(g, &rev))
}

/// `x^k` for any integer `k`.
pub fn power(g: &SimplicialGraph, x: &NormalForm, k: i64) -> NormalForm {
    let base = if k < 0 { invert(g, x) } else { x.clone() };
    let mut buf = Letters::new();
    for _ in 0..k.unsigned_abs() {
        for &l in base.letters() {
            push_reduced(g, &mut buf, l);
        }
    }
    NormalForm::from_canonical(canonical_order(g, &buf))
}

/// `|x⁻¹ y|_S`, the Cayley-graph distance between `x` and `y`.
pub fn distance(g: &SimplicialGraph, x: &NormalForm, y: &NormalForm) -> usize {
    let mut buf: Letters = x.letters.iter().rev().map(|l| l.inverse()).collect();
    for &l in y.letters() {
        push_reduced(g, &mut buf, l);
    }
    buf.len()
}

pub fn geodesic_length(x: &NormalForm) -> usize {
    x.len()
}

pub fn phi(x: &NormalForm) -> i64 {
    x.height()
}

/// Vertices occurring in `x`, in vertex order.
pub fn support(x: &NormalForm) -> Vec<VertexId> {
    let mask = x.letters.iter().fold(0u64, |m, l| m | bit(l.vertex()));
    crate::graph::mask_to_vec(mask)
}

/// Positions of letters that can be shuffled to the front.
pub(crate) fn first_positions(g: &SimplicialGraph, letters: &[Letter]) -> SmallVec<[usize; 8]> {
    let mut out = SmallVec::new();
    let mut blocked = 0u64;
    for (i, l) in letters.iter().enumerate() {
        if blocked & bit(l.vertex()) == 0 {
            out.push(i);
        }
        blocked |= !g.adj_mask(l.vertex());
    }
    out
}

/// Positions of letters that can be shuffled to the end.
pub(crate) fn last_positions(g: &SimplicialGraph, letters: &[Letter]) -> SmallVec<[usize; 8]> {
    let mut out = SmallVec::new();
    let mut blocked = 0u64;
    for (i, l) in letters.iter().enumerate().rev() {
        if blocked & bit(l.vertex()) == 0 {
            out.push(i);
        }
        blocked |= !g.adj_mask(l.vertex());
    }
    out
}

/// `x = conjugator · core · conjugator⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSplit {
    pub conjugator: NormalForm,
    pub core: NormalForm,
}

/// Peels, while possible, the least letter that shuffles to the front and
/// whose inverse shuffles to the back.
pub fn cyclic_reduce(g: &SimplicialGraph, x: &NormalForm) -> CyclicSplit {
    let mut core: Letters = x.letters.clone();
    let mut conj = Letters::new();
    loop {
        let lasts = last_positions(g, &core);
        let peel = first_positions(g, &core)
            .into_iter()
            .filter_map(|i| {
                let l = core[i];
                lasts
                    .iter()
                    .find(|&&j| core[j] == l.inverse())
                    .map(|&j| (l, i, j))
            })
            .min_by_key(|&(l, _, _)| l);
        let Some((l, i, j)) = peel else { break };
        let (hi, lo) = (i.max(j), i.min(j));
        core.remove(hi);
        core.remove(lo);
        push_reduced(g, &mut conj, l);
    }
    CyclicSplit {
        conjugator: NormalForm::from_canonical(canonical_order(g, &conj)),
        core: NormalForm::from_canonical(canonical_order(g, &core)),
    }
}

pub fn is_cyclically_reduced(g: &SimplicialGraph, x: &NormalForm) -> bool {
    cyclic_reduce(g, x).conjugator.is_empty()
}

pub const DEFAULT_LETTER_BUDGET: usize = 1_000_000;

pub fn parse_word(g: &SimplicialGraph, text: &str) -> Result<SWord> {
    parse_word_with_budget(g, text, DEFAULT_LETTER_BUDGET)
}

/// Parses whitespace-separated tokens `v` or `v^k` (`k` a nonzero integer).
pub fn parse_word_with_budget(g: &SimplicialGraph, text: &str, budget: usize) -> Result<SWord> {
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        let (name, exp) = match token.split_once('^') {
            None => (token, 1i64),
            Some((name, e)) => {
                let k: i64 = e
                    .parse()
                    .map_err(|_| Error::MalformedExponent(token.to_string()))?;
                if k == 0 {
                    return Err(Error::MalformedExponent(token.to_string()));
                }
                (name, k)
            }
        };
        let v = g.vertex(name)?;
        let count = exp.unsigned_abs() as usize;
        if letters.len().saturating_add(count) > budget {
            return Err(Error::LetterBudget(budget));
        }
        letters.extend(std::iter::repeat(Letter::new(v, exp > 0)).take(count));
    }
    Ok(SWord::new(letters))
}

/// Parses and normalizes in one step.
pub fn parse_element(g: &SimplicialGraph, text: &str) -> Result<NormalForm> {
    Ok(normalize(g, &parse_word(g, text)?.letters))
}

/// Serializes letters in the word grammar, compressing runs into exponents.
pub fn format_letters(g: &SimplicialGraph, letters: &[Letter]) -> String {
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let l = letters[i];
        let mut j = i;
        while j < letters.len() && letters[j] == l {
            j += 1;
        }
        let k = (j - i) as i64 * l.sign() as i64;
        let name = g.name(l.vertex());
        tokens.push(if k == 1 {
            name.to_string()
        } else {
            format!("{name}^{k}")
        });
        i = j;
    }
    tokens.join(" ")
}

pub fn format_nf(g: &SimplicialGraph, x: &NormalForm) -> String {
    format_letters(g, x.letters())
}
