use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::words::{cyclic_relator, s_seq_letters, split_s1_s2, AltWord, Base, Letter};

use super::{cyclic_word, AnnularDiagram, Face, INNER_LEFT, INNER_RIGHT, OUTER_LEFT, OUTER_RIGHT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    Converging,
    Diverging,
    Mixing,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct VertexKind {
    pub kind: Kind,
    pub degree: usize,
}

/// Kind of a vertex from the labels of its incoming unit segments.
pub fn kind_of(incoming: &[Letter]) -> Kind {
    let has = |b: Base, inv: bool| incoming.iter().any(|l| l.base == b && l.inverse == inv);
    let pos = has(Base::A, false) as u8 + has(Base::B, false) as u8;
    let neg = has(Base::A, true) as u8 + has(Base::B, true) as u8;
    match (pos, neg) {
        (2, 0) => Kind::Converging,
        (0, 2) => Kind::Diverging,
        (2, 2) => Kind::Mixing,
        _ => Kind::Other,
    }
}

/// Arc endpoint: `(layer, face, slot, at_end)`.
pub type Endpoint = (usize, usize, usize, bool);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub kind: Kind,
    pub degree: usize,
    /// Labels of incoming unit segments, one per incident edge end.
    pub incoming: Vec<Letter>,
    /// Every arc endpoint identified with this vertex, sorted.
    pub endpoints: Vec<Endpoint>,
}

impl Vertex {
    pub fn vertex_kind(&self) -> VertexKind {
        VertexKind { kind: self.kind, degree: self.degree }
    }

    pub fn is_sign_change(&self) -> bool {
        matches!(self.kind, Kind::Converging | Kind::Diverging)
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// All vertices of a structurally valid diagram, ordered by their least endpoint.
pub fn vertices(d: &AnnularDiagram) -> Result<Vec<Vertex>> {
    d.check_structure()?;
    let t = d.t();
    let arc_id = |j: usize, i: usize, slot: usize| (j * t + i) * 4 + slot;
    let node = |j: usize, i: usize, slot: usize, end: bool| 2 * arc_id(j, i, slot) + end as usize;
    let mut dsu = Dsu((0..2 * 4 * d.face_count()).collect());
    for j in 0..d.layers.len() {
        for i in 0..t {
            dsu.union(node(j, i, OUTER_LEFT, true), node(j, i, OUTER_RIGHT, false));
            dsu.union(node(j, i, INNER_LEFT, true), node(j, i, INNER_RIGHT, false));
            dsu.union(node(j, i, OUTER_LEFT, false), node(j, i, INNER_LEFT, false));
            dsu.union(node(j, i, OUTER_RIGHT, true), node(j, i, INNER_RIGHT, true));
            dsu.union(node(j, i, OUTER_RIGHT, true), node(j, (i + 1) % t, OUTER_LEFT, false));
        }
    }
    for j in 0..d.layers.len().saturating_sub(1) {
        let g = d.gluing_offsets[j];
        for k in 0..2 * t {
            let (fi, slot) = (k / 2, INNER_LEFT + k % 2);
            let ko = (k + g) % (2 * t);
            let (fo, oslot) = (ko / 2, OUTER_LEFT + ko % 2);
            for end in [false, true] {
                dsu.union(node(j, fi, slot, end), node(j + 1, fo, oslot, end));
            }
        }
    }
    let mut groups: BTreeMap<usize, Vertex> = BTreeMap::new();
    for (j, layer) in d.layers.iter().enumerate() {
        for (i, f) in layer.faces.iter().enumerate() {
            for slot in 0..4 {
                // Outer arcs below the first layer are the same edges as the inner arcs above.
                let alias = j > 0 && slot <= OUTER_RIGHT;
                let w = f.arc(slot);
                for end in [false, true] {
                    let root = dsu.find(node(j, i, slot, end));
                    let v = groups.entry(root).or_insert_with(|| Vertex {
                        kind: Kind::Other,
                        degree: 0,
                        incoming: Vec::new(),
                        endpoints: Vec::new(),
                    });
                    v.endpoints.push((j, i, slot, end));
                    if !alias {
                        v.degree += 1;
                        v.incoming.push(if end { *w.last().unwrap() } else { w[0].inv() });
                    }
                }
            }
        }
    }
    let mut out: Vec<Vertex> = groups.into_values().collect();
    for v in &mut out {
        v.endpoints.sort();
        v.kind = kind_of(&v.incoming);
    }
    out.sort_by(|a, b| a.endpoints[0].cmp(&b.endpoints[0]));
    Ok(out)
}

pub fn vertex_kinds(d: &AnnularDiagram) -> Result<Vec<VertexKind>> {
    Ok(vertices(d)?.iter().map(Vertex::vertex_kind).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FaceKind {
    S1Face,
    S2Face,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceDecomposition {
    pub y: AltWord,
    pub w: AltWord,
    pub z: AltWord,
    pub y2: AltWord,
    pub w2: AltWord,
    pub z2: AltWord,
    pub kind: FaceKind,
}

/// Letter ranges of the sign runs of a linear word.
fn run_ranges(w: &[Letter]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=w.len() {
        if i == w.len() || w[i].inverse != w[i - 1].inverse {
            out.push((start, i));
            start = i;
        }
    }
    out
}

/// First `(start, end)` letter range whose runs have lengths `pat`; `interior` forbids the
/// first and last run of `w`.
fn find_runs(w: &[Letter], pat: &[u64], interior: bool) -> Option<(usize, usize)> {
    let runs = run_ranges(w);
    let k = pat.len();
    let lo = interior as usize;
    let hi = runs.len().checked_sub(k + interior as usize)?;
    (lo..=hi)
        .find(|&i| runs[i..i + k].iter().zip(pat).all(|(&(a, b), &p)| (b - a) as u64 == p))
        .map(|i| (runs[i].0, runs[i + k - 1].1))
}

fn side_kind(side: &[Letter], s1: &[u64], s2: &[u64]) -> (Option<(usize, usize)>, Option<(usize, usize)>) {
    (find_runs(side, s1, false), find_runs(side, s2, true))
}

fn checked_face(f: &Face, r: Rational) -> Result<()> {
    if f.arcs.iter().any(AltWord::is_empty) {
        return Err(Error::Hypothesis("face_kind needs four nonempty arcs".into()));
    }
    let rel = cyclic_relator(r)?;
    let boundary = cyclic_word(&f.boundary());
    if !boundary.is_some_and(|b| b == rel || b == rel.inverse()) {
        return Err(Error::Hypothesis(format!("face boundary is not in the symmetrized set of u_{r}")));
    }
    Ok(())
}

/// Splits both sides of a face as `y·w·z` with `S(w) = S1`, or `S(w) = S2` and `y, z` nonempty.
pub fn face_decomposition(f: &Face, r: Rational) -> Result<FaceDecomposition> {
    checked_face(f, r)?;
    let (s1, s2) = split_s1_s2(r)?;
    let (outer, inner) = (f.outer_side(), f.inner_side());
    let (o1, o2) = side_kind(&outer, &s1.0, &s2.0);
    let (i1, i2) = side_kind(&inner, &s1.0, &s2.0);
    let one = o1.is_some() && i1.is_some();
    let two = o2.is_some() && i2.is_some();
    let (kind, (os, oe), (is, ie)) = match (one, two) {
        (true, false) => (FaceKind::S1Face, o1.unwrap(), i1.unwrap()),
        (false, true) => (FaceKind::S2Face, o2.unwrap(), i2.unwrap()),
        (true, true) => return Err(Error::Invariant("face contains both S1 and an interior S2 on each side".into())),
        (false, false) => {
            return Err(Error::Invariant(format!(
                "face sides {} / {} contain neither S1 nor an interior S2 on both sides",
                s_seq_letters(&outer)?,
                s_seq_letters(&inner)?
            )))
        }
    };
    let part = |w: &[Letter], a: usize, b: usize| AltWord::new(w[a..b].to_vec());
    Ok(FaceDecomposition {
        y: part(&outer, 0, os)?,
        w: part(&outer, os, oe)?,
        z: part(&outer, oe, outer.len())?,
        y2: part(&inner, 0, is)?,
        w2: part(&inner, is, ie)?,
        z2: part(&inner, ie, inner.len())?,
        kind,
    })
}

pub fn face_kind(f: &Face, r: Rational) -> Result<FaceKind> {
    Ok(face_decomposition(f, r)?.kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{invert_letters, parse_letters, relator_word};

    fn q(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn l(t: &str) -> Vec<Letter> {
        parse_letters(t).unwrap()
    }

    /// Face cut from a rotation of `u` at the given cumulative cut points.
    fn face_from(u: &[Letter], cuts: [usize; 3]) -> Face {
        let [a, b, c] = cuts;
        let ir = invert_letters(&u[b..c]);
        let il = invert_letters(&u[c..]);
        Face::from_letters([&u[..a], &u[a..b], &il, &ir]).unwrap()
    }

    #[test]
    fn kinds_from_labels() {
        assert_eq!(kind_of(&l("ab")), Kind::Converging);
        assert_eq!(kind_of(&l("AB")), Kind::Diverging);
        assert_eq!(kind_of(&l("aAbB")), Kind::Mixing);
        assert_eq!(kind_of(&l("aB")), Kind::Other);
    }

    #[test]
    fn single_face_vertices() {
        // One face; its two corners coincide, so the diagram has the junction and two midpoints.
        let u = relator_word(q(1, 3)).unwrap().into_letters();
        let d = AnnularDiagram::single_layer(vec![face_from(&u, [1, 3, 4])]);
        let vs = vertices(&d).unwrap();
        assert_eq!(vs.len(), 3);
        assert_eq!(vs.iter().map(|v| v.degree).sum::<usize>(), 8);
        assert_eq!(vs[0].degree, 4);
    }

    #[test]
    fn face_kinds_for_two_fifths() {
        // u_{2/5} = abaBAbabAB with CS <3,2,3,2>, S1 = (3), S2 = (2).
        let u = relator_word(q(2, 5)).unwrap().into_letters();
        // Outer side abaB has runs (3,1): S1 at the first run; inner side reads (B A b a B)^-1.
        let f = face_from(&u, [2, 4, 7]);
        let dec = face_decomposition(&f, q(2, 5)).unwrap();
        assert_eq!(dec.kind, FaceKind::S1Face);
        assert_eq!(dec.w.to_string(), "aba");
        // Rotated to aBAbabABab: outer aBAb has runs (1,2,1), inner BAbaBA has (2,2,2).
        let rot: Vec<Letter> = crate::cyclic::rotated(&u, 2);
        let f = face_from(&rot, [2, 4, 7]);
        assert_eq!(crate::words::letters_to_string(&f.inner_side()), "BAbaBA");
        let dec = face_decomposition(&f, q(2, 5)).unwrap();
        assert_eq!(dec.kind, FaceKind::S2Face);
        assert_eq!((dec.y.to_string(), dec.w.to_string(), dec.z.to_string()), ("a".into(), "BA".into(), "b".into()));
        assert_eq!(dec.w2.to_string(), "ba");
    }

    #[test]
    fn face_kind_preconditions() {
        let u = relator_word(q(2, 5)).unwrap();
        let empty = AltWord::new(vec![]).unwrap();
        let f = Face::new(u.clone(), empty.clone(), empty.clone(), empty);
        assert!(matches!(face_kind(&f, q(2, 5)), Err(Error::Hypothesis(_))));
    }
}
