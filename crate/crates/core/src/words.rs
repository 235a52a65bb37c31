//! Alternating words in `a`, `b`, the relators `u_r`, S-sequences and pieces.
//!
//! Words are written over `{a, b, A, B}` with `A = a⁻¹` and `B = b⁻¹`.

use std::collections::HashSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::cyclic;
use crate::error::{domain, Error, Result};
use crate::rational::Rational;
use crate::slopes::cf_expand;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub base: Base,
    pub inverse: bool,
}

impl Letter {
    pub const A: Letter = Letter { base: Base::A, inverse: false };
    pub const B: Letter = Letter { base: Base::B, inverse: false };
    pub const A_INV: Letter = Letter { base: Base::A, inverse: true };
    pub const B_INV: Letter = Letter { base: Base::B, inverse: true };

    pub fn new(base: Base, positive: bool) -> Letter {
        Letter { base, inverse: !positive }
    }

    pub fn inv(self) -> Letter {
        Letter { base: self.base, inverse: !self.inverse }
    }

    pub fn is_positive(self) -> bool {
        !self.inverse
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'A' => Some(Letter::A_INV),
            'B' => Some(Letter::B_INV),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match (self.base, self.inverse) {
            (Base::A, false) => 'a',
            (Base::B, false) => 'b',
            (Base::A, true) => 'A',
            (Base::B, true) => 'B',
        }
    }

    /// Position in the order `a < b < A < B` used for canonical rotations.
    fn rank(self) -> u8 {
        (self.inverse as u8) * 2 + (self.base == Base::B) as u8
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_char(self.to_char())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Parses a compact letter string without checking alternation.
pub fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    text.chars()
        .enumerate()
        .map(|(i, c)| {
            Letter::from_char(c).ok_or_else(|| Error::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}, expected one of a, b, A, B"),
            })
        })
        .collect()
}

pub fn letters_to_string(w: &[Letter]) -> String {
    w.iter().map(|l| l.to_char()).collect()
}

pub fn invert_letters(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inv()).collect()
}

fn is_alternating(w: &[Letter]) -> bool {
    w.windows(2).all(|p| p[0].base != p[1].base)
}

/// A word whose letters alternate between `a`-type and `b`-type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AltWord {
    letters: Vec<Letter>,
}

impl AltWord {
    pub fn new(letters: Vec<Letter>) -> Result<AltWord> {
        if let Some(i) = letters.windows(2).position(|p| p[0].base == p[1].base) {
            return domain(format!(
                "word {} is not alternating at position {}",
                letters_to_string(&letters),
                i + 1
            ));
        }
        Ok(AltWord { letters })
    }

    pub fn parse(text: &str) -> Result<AltWord> {
        let letters = parse_letters(text)?;
        if let Some(i) = letters.windows(2).position(|p| p[0].base == p[1].base) {
            return Err(Error::Parse {
                pos: i + 1,
                msg: "consecutive letters have the same base".into(),
            });
        }
        Ok(AltWord { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> AltWord {
        AltWord { letters: invert_letters(&self.letters) }
    }

    /// Concatenation, failing if the junction is not alternating.
    pub fn concat(&self, other: &AltWord) -> Result<AltWord> {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        AltWord::new(letters)
    }

    pub fn is_cyclically_alternating(&self) -> bool {
        let w = &self.letters;
        !w.is_empty() && w.len() % 2 == 0 && w[0].base != w[w.len() - 1].base
    }
}

impl fmt::Display for AltWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&letters_to_string(&self.letters))
    }
}

impl Serialize for AltWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A cyclically alternating word, up to rotation.
#[derive(Debug, Clone)]
pub struct CyclicWord {
    rep: AltWord,
}

impl CyclicWord {
    pub fn new(rep: AltWord) -> Result<CyclicWord> {
        if !rep.is_cyclically_alternating() {
            return domain(format!("{rep} is not cyclically alternating"));
        }
        Ok(CyclicWord { rep })
    }

    pub fn parse(text: &str) -> Result<CyclicWord> {
        CyclicWord::new(AltWord::parse(text)?)
    }

    pub fn rep(&self) -> &AltWord {
        &self.rep
    }

    pub fn letters(&self) -> &[Letter] {
        self.rep.letters()
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The rotation starting at letter `k`.
    pub fn rotation(&self, k: usize) -> AltWord {
        AltWord { letters: cyclic::rotated(self.letters(), k) }
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord { rep: self.rep.inverse() }
    }

    /// Least rotation under `a < b < A < B`.
    pub fn canonical_key(&self) -> Vec<Letter> {
        cyclic::canonical_rotation(self.letters())
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        cyclic::is_rotation(self.letters(), other.letters())
    }
}

impl Eq for CyclicWord {}

impl std::hash::Hash for CyclicWord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical_key().hash(state)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

/// The upper-presentation word for `q/p` with `0 < q <= p`; `1/1` gives `aB`.
pub(crate) fn upper_word(r: Rational) -> Vec<Letter> {
    let (q, p) = (r.num() as u128, r.den() as u128);
    let hat: Vec<Letter> = (1..p)
        .map(|i| {
            let positive = (i * q / p) % 2 == 0;
            let base = if i % 2 == 1 { Base::B } else { Base::A };
            Letter::new(base, positive)
        })
        .collect();
    let c = if p % 2 == 1 {
        Letter::new(Base::B, q % 2 == 0)
    } else {
        Letter::A_INV
    };
    let mut w = Vec::with_capacity(2 * p as usize);
    w.push(Letter::A);
    w.extend_from_slice(&hat);
    w.push(c);
    w.extend(invert_letters(&hat));
    w
}

/// The relator `u_r = a·ŵ·c·ŵ⁻¹` of the upper presentation.
pub fn relator_word(r: Rational) -> Result<AltWord> {
    if !r.in_open_unit() {
        return domain(format!("{r} is not in (0,1)"));
    }
    let w = upper_word(r);
    debug_assert!(is_alternating(&w));
    Ok(AltWord { letters: w })
}

/// The word `u_s` of the loop of slope `s`; same constructor as the relator.
pub fn loop_word(s: Rational) -> Result<AltWord> {
    relator_word(s)
}

pub(crate) fn cyclic_relator(r: Rational) -> Result<CyclicWord> {
    CyclicWord::new(relator_word(r)?)
}

/// A linear sequence of positive integers, printed `(3,2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SSeq(pub Vec<u64>);

/// A cyclic sequence of positive integers, printed `<3,2,3,2>`. Equality is up to rotation.
#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct CyclicSSeq(pub Vec<u64>);

impl CyclicSSeq {
    pub fn terms(&self) -> &[u64] {
        &self.0
    }

    pub fn canonical(&self) -> Vec<u64> {
        cyclic::canonical_rotation(&self.0)
    }
}

impl PartialEq for CyclicSSeq {
    fn eq(&self, other: &Self) -> bool {
        cyclic::is_rotation(&self.0, &other.0)
    }
}

impl Eq for CyclicSSeq {}

fn write_terms(f: &mut fmt::Formatter<'_>, open: &str, xs: &[u64], close: &str) -> fmt::Result {
    f.write_str(open)?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(close)
}

impl fmt::Display for SSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, "(", &self.0, ")")
    }
}

impl fmt::Display for CyclicSSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, "<", &self.0, ">")
    }
}

/// Run lengths of constant exponent sign along a linear letter sequence.
pub fn s_seq_letters(w: &[Letter]) -> Result<SSeq> {
    if w.is_empty() {
        return domain("S-sequence of the empty word");
    }
    let mut runs = Vec::new();
    let mut len = 1u64;
    for p in w.windows(2) {
        if p[0].inverse == p[1].inverse {
            len += 1;
        } else {
            runs.push(len);
            len = 1;
        }
    }
    runs.push(len);
    Ok(SSeq(runs))
}

pub fn s_seq(w: &AltWord) -> Result<SSeq> {
    s_seq_letters(w.letters())
}

/// Index of the first letter that starts a run in the cyclic reading, if signs change at all.
pub(crate) fn first_sign_change(w: &[Letter]) -> Option<usize> {
    let n = w.len();
    (0..n).find(|&i| w[i].inverse != w[(i + n - 1) % n].inverse)
}

/// Cyclic run lengths of a cyclic letter sequence, starting at its first sign change.
pub fn cs_seq_letters(w: &[Letter]) -> Result<CyclicSSeq> {
    if w.is_empty() {
        return domain("S-sequence of the empty word");
    }
    match first_sign_change(w) {
        None => Ok(CyclicSSeq(vec![w.len() as u64])),
        Some(k) => Ok(CyclicSSeq(s_seq_letters(&cyclic::rotated(w, k))?.0)),
    }
}

pub fn cs_seq(w: &CyclicWord) -> CyclicSSeq {
    cs_seq_letters(w.letters()).expect("cyclic words are nonempty")
}

/// `CS(s)` for a slope in `(0, 1]`.
pub fn cs_of_slope(s: Rational) -> Result<CyclicSSeq> {
    if s.num() == 0 || s.num() > s.den() {
        return domain(format!("{s} is not in (0,1]"));
    }
    cs_seq_letters(&upper_word(s))
}

/// True iff `needle` occurs as consecutive terms of the cyclic `haystack`.
pub fn contains_cyclic_subseq(haystack: &CyclicSSeq, needle: &SSeq) -> bool {
    !needle.0.is_empty() && cyclic::cyclic_find(&haystack.0, &needle.0).is_some()
}

fn starts_and_ends_with(s: &[u64], pat: &[u64]) -> bool {
    s.starts_with(pat) && s.ends_with(pat)
}

fn rep(count: u64, value: u64) -> impl Iterator<Item = u64> {
    std::iter::repeat(value).take(count as usize)
}

/// The begin/end shape of `(S1, S2)` predicted by the continued fraction `c`; for two and
/// three coefficients the blocks must equal the patterns exactly.
fn split_pattern(c: &[u64]) -> (Vec<u64>, Vec<u64>, bool) {
    let m = c[0];
    let one = std::iter::once;
    match c.len() {
        2 => (vec![m + 1], rep(c[1] - 1, m).collect(), true),
        3 if c[1] == 1 => (rep(c[2], m + 1).collect(), vec![m], true),
        _ if c[1] >= 2 => (one(m + 1).chain(rep(c[1] - 1, m)).chain(one(m + 1)).collect(), rep(c[1], m).collect(), false),
        _ => (rep(c[2] + 1, m + 1).collect(), one(m).chain(rep(c[2], m + 1)).chain(one(m)).collect(), false),
    }
}

fn split_pattern_holds(pat: &(Vec<u64>, Vec<u64>, bool), s1: &[u64], s2: &[u64]) -> bool {
    let (p1, p2, exact) = pat;
    if *exact {
        s1 == &p1[..] && s2 == &p2[..]
    } else {
        starts_and_ends_with(s1, p1) && starts_and_ends_with(s2, p2)
    }
}

/// The blocks predicted by lifting the decomposition of `r̃` one level: for type A the
/// terms of `T2` become runs of `m` closed by `m+1` on both sides and the terms of `T1`
/// become runs of `m` separated by `m+1`; type B is the same with the roles of `m` and
/// `m+1` exchanged.
fn lifted_split(c: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let m = c[0];
    let runs = |ts: &[u64], run: u64, sep: u64, closed: bool| {
        let mut out = Vec::new();
        if closed {
            out.push(sep);
        }
        for (i, &t) in ts.iter().enumerate() {
            if i > 0 && !closed {
                out.push(sep);
            }
            out.extend(rep(t, run));
            if closed {
                out.push(sep);
            }
        }
        out
    };
    match c.len() {
        2 => (vec![m + 1], rep(c[1] - 1, m).collect()),
        3 if c[1] == 1 => (rep(c[2], m + 1).collect(), vec![m]),
        _ if c[1] >= 2 => {
            let mut next = c[1..].to_vec();
            next[0] -= 1;
            let (t1, t2) = lifted_split(&next);
            (runs(&t2, m, m + 1, true), runs(&t1, m, m + 1, false))
        }
        _ => {
            let (t1, t2) = lifted_split(&c[2..]);
            (runs(&t1, m + 1, m, false), runs(&t2, m + 1, m, true))
        }
    }
}

/// All `(S1, S2)` with `CS(r) = <S1, S2, S1, S2>` whose begin/end shape matches the
/// continued fraction of `r`. For long expansions there can be several.
pub fn pattern_split_candidates(r: Rational) -> Result<Vec<(SSeq, SSeq)>> {
    let cf = cf_expand(r)?;
    if cf.len() < 2 {
        return Err(Error::Unsupported(format!("S1/S2 are undefined for r = {r} = 1/p")));
    }
    let cs = cs_of_slope(r)?.0;
    let n = cs.len();
    if n % 2 != 0 {
        return Err(Error::Invariant(format!("CS({r}) has odd length {n}")));
    }
    let half = n / 2;
    let mut found: Vec<(SSeq, SSeq)> = Vec::new();
    // Half-periodicity is invariant under rotation, and rotations by `half` repeat.
    if cs[..half] != cs[half..] {
        return Ok(found);
    }
    let doubled = [&cs[..half], &cs[..half]].concat();
    let pat = split_pattern(cf.coeffs());
    for rho in 0..half {
        let window = &doubled[rho..rho + half];
        if !window.starts_with(&pat.0) || !window.ends_with(&pat.1) {
            continue;
        }
        for l1 in 1..half {
            let (s1, s2) = window.split_at(l1);
            if split_pattern_holds(&pat, s1, s2) {
                let cand = (SSeq(s1.to_vec()), SSeq(s2.to_vec()));
                if !found.contains(&cand) {
                    found.push(cand);
                }
            }
        }
    }
    Ok(found)
}

/// The decomposition `CS(r) = <S1, S2, S1, S2>`.
///
/// Every rotation and split point is enumerated; a candidate must satisfy the begin/end
/// pattern and agree with the one-level lift of the decomposition of `r̃`. Exactly one
/// candidate may survive.
pub fn split_s1_s2(r: Rational) -> Result<(SSeq, SSeq)> {
    let candidates = pattern_split_candidates(r)?;
    let cf = cf_expand(r)?;
    let (l1, l2) = lifted_split(cf.coeffs());
    let mut hits = candidates.into_iter().filter(|(s1, s2)| s1.0 == l1 && s2.0 == l2);
    match (hits.next(), hits.next()) {
        (Some(hit), None) => Ok(hit),
        (None, _) => Err(Error::Invariant(format!(
            "no S1/S2 split of CS({r}) matches the pattern and the lift"
        ))),
        (Some(_), Some(_)) => Err(Error::Invariant(format!("several S1/S2 splits of CS({r})"))),
    }
}

/// `a ↦ a`, `b ↦ b⁻¹`.
pub fn mirror_word(w: &AltWord) -> AltWord {
    AltWord {
        letters: w
            .letters()
            .iter()
            .map(|&l| if l.base == Base::B { l.inv() } else { l })
            .collect(),
    }
}

pub fn cyclic_eq(u: &CyclicWord, v: &CyclicWord, up_to_inverse: bool) -> bool {
    if u.len() != v.len() {
        return false;
    }
    let key = v.canonical_key();
    u.canonical_key() == key || (up_to_inverse && u.inverse().canonical_key() == key)
}

/// The relator `u_r` with its symmetrized closure.
#[derive(Debug, Clone)]
pub struct RelatorSet {
    slope: Rational,
    relator: CyclicWord,
    /// `u_r` followed by `u_r⁻¹`; occurrence positions index into these two cyclic words.
    sides: [Vec<Letter>; 2],
    /// Element index of the rotation of side `inv` starting at `offset`, as `element[inv][offset]`.
    element: [Vec<usize>; 2],
    elements: Vec<Vec<Letter>>,
    members: HashSet<Vec<Letter>>,
}

impl RelatorSet {
    pub fn new(r: Rational) -> Result<RelatorSet> {
        let relator = cyclic_relator(r)?;
        let fwd = relator.letters().to_vec();
        let bwd = invert_letters(&fwd);
        let mut elements: Vec<Vec<Letter>> = Vec::new();
        let mut index = std::collections::HashMap::new();
        let mut element = [Vec::new(), Vec::new()];
        for (side, word) in [&fwd, &bwd].into_iter().enumerate() {
            for k in 0..word.len() {
                let rot = cyclic::rotated(word, k);
                let id = *index.entry(rot.clone()).or_insert_with(|| {
                    elements.push(rot);
                    elements.len() - 1
                });
                element[side].push(id);
            }
        }
        let members = elements.iter().cloned().collect();
        Ok(RelatorSet {
            slope: r,
            relator,
            sides: [fwd, bwd],
            element,
            elements,
            members,
        })
    }

    pub fn slope(&self) -> Rational {
        self.slope
    }

    pub fn relator(&self) -> &CyclicWord {
        &self.relator
    }

    /// `u_r` (`inverse = false`) or `u_r⁻¹` (`inverse = true`) as a letter sequence.
    pub fn side(&self, inverse: bool) -> &[Letter] {
        &self.sides[inverse as usize]
    }

    pub fn symmetrized(&self) -> &[Vec<Letter>] {
        &self.elements
    }

    pub fn relator_len(&self) -> usize {
        self.sides[0].len()
    }

    /// True iff `w` is an element of the symmetrized set.
    pub fn contains(&self, w: &[Letter]) -> bool {
        self.members.contains(w)
    }

    /// All `(inverse, offset)` at which `w` occurs as a cyclic subword of `u_r^{±1}`.
    pub fn occurrences(&self, w: &[Letter]) -> Vec<(bool, usize)> {
        let mut out = Vec::new();
        for inv in [false, true] {
            for k in cyclic::cyclic_positions(self.side(inv), w) {
                out.push((inv, k));
            }
        }
        out
    }

    /// Cyclic subword of `u_r^{±1}` at `offset` of length `len` (wrapping around).
    pub fn subword(&self, inverse: bool, offset: usize, len: usize) -> Vec<Letter> {
        let side = self.side(inverse);
        let n = side.len();
        (0..len).map(|j| side[(offset + j) % n]).collect()
    }

    fn distinct_elements(&self, occ: &[(bool, usize)]) -> usize {
        let ids: HashSet<usize> = occ.iter().map(|&(i, k)| self.element[i as usize][k]).collect();
        ids.len()
    }

    /// A piece is a common prefix of two distinct elements of the symmetrized set.
    pub fn is_piece(&self, w: &[Letter]) -> bool {
        if w.len() > self.relator_len() {
            return false;
        }
        self.distinct_elements(&self.occurrences(w)) >= 2
    }

    /// Length of the longest prefix of `w` that is a piece.
    pub fn max_piece_prefix(&self, w: &[Letter]) -> usize {
        let n = self.relator_len();
        let mut live: Vec<(bool, usize)> = (0..n).flat_map(|k| [(false, k), (true, k)]).collect();
        let mut best = 0;
        for (j, &x) in w.iter().enumerate().take(n) {
            live.retain(|&(inv, k)| self.side(inv)[(k + j) % n] == x);
            if self.distinct_elements(&live) < 2 {
                break;
            }
            best = j + 1;
        }
        best
    }
}

pub fn is_piece(w: &AltWord, rs: &RelatorSet) -> bool {
    rs.is_piece(w.letters())
}

pub fn max_piece_prefix(w: &AltWord, rs: &RelatorSet) -> usize {
    rs.max_piece_prefix(w.letters())
}

/// True iff some rotation of `u` is a concatenation of at most `n` pieces.
pub fn product_of_pieces_bound(u: &CyclicWord, rs: &RelatorSet, n: usize) -> bool {
    let w = u.letters();
    let len = w.len();
    let doubled: Vec<Letter> = w.iter().chain(w).copied().collect();
    // Pieces are closed under taking subwords, so every prefix of a maximal piece is a piece.
    let reach: Vec<usize> = (0..len)
        .map(|i| rs.max_piece_prefix(&doubled[i..i + len]))
        .collect();
    (0..len).any(|start| {
        let mut best = vec![usize::MAX; len + 1];
        best[len] = 0;
        for i in (0..len).rev() {
            let cap = reach[(start + i) % len].min(len - i);
            for l in 1..=cap {
                if best[i + l] != usize::MAX {
                    best[i] = best[i].min(best[i + l] + 1);
                }
            }
        }
        best[0] <= n
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn word(r: Rational) -> String {
        relator_word(r).unwrap().to_string()
    }

    fn cs(r: Rational) -> Vec<u64> {
        cs_of_slope(r).unwrap().0
    }

    #[test]
    fn relators() {
        assert_eq!(word(q(1, 3)), "abaBAB");
        assert_eq!(word(q(2, 5)), "abaBAbabAB");
        assert_eq!(word(q(1, 2)), "abAB");
        assert_eq!(word(q(3, 8)).len(), 16);
        assert_eq!(word(q(5, 12)), "abaBAbabABabABAbaBABabAB");
        assert!(relator_word(Rational::ONE).is_err());
    }

    #[test]
    fn cyclic_sequences() {
        assert_eq!(cs(q(1, 3)), [3, 3]);
        assert_eq!(cs(q(2, 5)), [3, 2, 3, 2]);
        assert_eq!(cs(q(3, 8)), [3, 3, 2, 3, 3, 2]);
        assert_eq!(cs(q(1, 2)), [2, 2]);
        assert_eq!(cs(q(1, 6)), [6, 6]);
        assert_eq!(cs(q(3, 7)), [3, 2, 2, 3, 2, 2]);
        assert_eq!(cs(q(5, 12)), [3, 2, 3, 2, 2, 3, 2, 3, 2, 2]);
        assert_eq!(cs(Rational::ONE), [1, 1]);
    }

    #[test]
    fn linear_s_sequence() {
        assert_eq!(s_seq(&AltWord::parse("abaB").unwrap()).unwrap(), SSeq(vec![3, 1]));
        assert!(s_seq(&AltWord::default()).is_err());
        let w = CyclicWord::parse("abAB").unwrap();
        assert_eq!(cs_seq(&w), CyclicSSeq(vec![2, 2]));
    }

    #[test]
    fn splits() {
        let (s1, s2) = split_s1_s2(q(2, 5)).unwrap();
        assert_eq!((s1.0, s2.0), (vec![3], vec![2]));
        let (s1, s2) = split_s1_s2(q(3, 8)).unwrap();
        assert_eq!((s1.0, s2.0), (vec![3, 3], vec![2]));
        let (s1, s2) = split_s1_s2(q(5, 12)).unwrap();
        assert_eq!((s1.0, s2.0), (vec![3, 2, 3], vec![2, 2]));
        assert!(matches!(split_s1_s2(q(1, 4)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn cyclic_containment() {
        let h = CyclicSSeq(vec![3, 2, 3, 2]);
        assert!(contains_cyclic_subseq(&h, &SSeq(vec![2, 3])));
        assert!(!contains_cyclic_subseq(&h, &SSeq(vec![2, 2])));
        assert!(contains_cyclic_subseq(&CyclicSSeq(vec![3, 3, 2, 3, 3, 2]), &SSeq(vec![3, 3])));
        assert!(contains_cyclic_subseq(&h, &SSeq(vec![2, 3, 2, 3])));
        assert!(!contains_cyclic_subseq(&h, &SSeq(vec![2, 3, 2, 3, 2])));
    }

    #[test]
    fn pieces() {
        let rs = RelatorSet::new(q(1, 3)).unwrap();
        assert!(rs.is_piece(&[Letter::A]));
        assert!(!rs.is_piece(relator_word(q(1, 3)).unwrap().letters()));
        let u = cyclic_relator(q(1, 3)).unwrap();
        assert!(!product_of_pieces_bound(&u, &rs, 3));
        assert!(product_of_pieces_bound(&u, &rs, 6));
        let rs = RelatorSet::new(q(2, 5)).unwrap();
        assert!(!product_of_pieces_bound(rs.relator(), &rs, 3));
        assert_eq!(rs.symmetrized().len(), 20);
    }

    #[test]
    fn mirror_and_equality() {
        assert_eq!(mirror_word(&AltWord::parse("ab").unwrap()).to_string(), "aB");
        let m = CyclicWord::new(mirror_word(&relator_word(q(1, 3)).unwrap())).unwrap();
        assert!(cyclic_eq(&m, &cyclic_relator(q(2, 3)).unwrap(), true));
        let c = CyclicWord::new(mirror_word(&AltWord::parse("abAB").unwrap())).unwrap();
        assert_eq!(c.to_string(), "aBAb");
        assert!(!cyclic_eq(&c, &c.inverse(), false));
        let half = cyclic_relator(q(1, 2)).unwrap();
        assert!(cyclic_eq(&c, &half.inverse(), false));

        let u = CyclicWord::parse("abaBAB").unwrap();
        let rot = CyclicWord::new(u.rotation(2)).unwrap();
        assert!(cyclic_eq(&rot, &u, false));
        assert!(cyclic_eq(&u, &u.inverse(), true));
        assert!(!cyclic_eq(&u, &u.inverse(), false));
        assert!(!cyclic_eq(&u, &cyclic_relator(q(2, 5)).unwrap(), true));
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert!(matches!(AltWord::parse("abx"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(AltWord::parse("abba"), Err(Error::Parse { pos: 2, .. })));
        assert!(CyclicWord::parse("aba").is_err());
    }
}
