//! The T-sequence relabeling of a diagram over a general slope `r` into one over `r̃`.
//!
//! Every vertex must sit at a sign change, so each arc's S-sequence is a block of whole
//! runs of every cycle through it. A new arc has one letter per non-separator run of the
//! old arc, and its sign flips exactly where the old arc has a separator between two such
//! runs. What remains free is the base and sign of each arc's first letter; both are fixed
//! by xor constraints at every vertex of every cycle, up to a global choice.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::slopes::{classify_slope, reduce_loop_slope, reduce_slope, ReductionType};
use crate::tseq::{ct_seq, t_seq, TSpec};
use crate::words::{cs_seq_letters, s_seq_letters, split_s1_s2, AltWord, Base, Letter, SSeq};

use super::validate::{validate, validate_diagram};
use super::{vertices, AnnularDiagram, Certificate, Face, Layer, INNER_LEFT, OUTER_LEFT};

fn inapplicable<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::TransformInapplicable(msg.into()))
}

/// Reduction type and spec of an unmirrored general slope.
fn reduction(r: Rational) -> Result<(ReductionType, TSpec, Rational)> {
    let class = classify_slope(r)?;
    if class.is_mirrored() {
        return inapplicable(format!("{r} > 1/2; apply the mirror first"));
    }
    let Some(ty) = class.reduction_type() else {
        return inapplicable(format!("{r} is special ({class})"));
    };
    Ok((ty, TSpec::for_reduction(ty)?, reduce_slope(r, &class)?))
}

/// What an old arc contributes to its new label.
#[derive(Debug, Clone)]
struct ArcData {
    /// Number of new letters.
    len: usize,
    /// `flips[i]`: sign changes between new letters `i` and `i + 1`.
    flips: Vec<bool>,
    lead_sep: bool,
    trail_sep: bool,
}

impl ArcData {
    fn new(label: &[Letter], spec: TSpec) -> Result<ArcData> {
        let s = s_seq_letters(label)?.0;
        let (sep, run) = (spec.separator(), spec.run());
        if let Some(x) = s.iter().find(|&&x| x != sep && x != run) {
            return inapplicable(format!("arc S-sequence term {x} is outside {{{}, {}}}", spec.m, spec.m + 1));
        }
        let mut flips = Vec::new();
        let mut len = 0;
        let mut pending = false;
        for &x in &s {
            if x == sep {
                pending = true;
            } else {
                if len > 0 {
                    flips.push(pending);
                }
                len += 1;
                pending = false;
            }
        }
        if len == 0 {
            return inapplicable("an arc has an empty T-sequence");
        }
        Ok(ArcData { len, flips, lead_sep: s[0] == sep, trail_sep: *s.last().unwrap() == sep })
    }

    fn flip_parity(&self) -> bool {
        self.flips.iter().filter(|&&f| f).count() % 2 == 1
    }

    /// (base offset, sign offset) of the first or last letter of the traversal.
    fn end_offsets(&self, inverse: bool, last: bool) -> (bool, bool) {
        let far = ((self.len - 1) % 2 == 1, self.flip_parity());
        match (inverse, last) {
            (false, false) => (false, false),
            (false, true) => far,
            (true, false) => (far.0, !far.1),
            (true, true) => (false, true),
        }
    }

    fn leading(&self, inverse: bool) -> bool {
        if inverse {
            self.trail_sep
        } else {
            self.lead_sep
        }
    }

    fn trailing(&self, inverse: bool) -> bool {
        if inverse {
            self.lead_sep
        } else {
            self.trail_sep
        }
    }
}

/// Union-find with xor offsets to the root.
struct ParityDsu {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityDsu {
    fn new(n: usize) -> ParityDsu {
        ParityDsu { parent: (0..n).collect(), parity: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (root, p) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.parity[x] ^= p;
        (root, self.parity[x])
    }

    /// Imposes `x ⊕ y = p`; false on contradiction.
    fn relate(&mut self, x: usize, y: usize, p: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == p;
        }
        self.parent[rx] = ry;
        self.parity[rx] = px ^ py ^ p;
        true
    }
}

/// Underlying edges: outer arcs of layer 0, then the inner arcs of every layer.
struct EdgeMap<'a> {
    d: &'a AnnularDiagram,
    t: usize,
}

impl EdgeMap<'_> {
    fn count(&self) -> usize {
        2 * self.t * (self.d.layers.len() + 1)
    }

    fn id(&self, j: usize, i: usize, slot: usize) -> usize {
        let two_t = 2 * self.t;
        let k = 2 * i + slot % 2;
        if slot >= INNER_LEFT {
            two_t * (j + 1) + k
        } else if j == 0 {
            k
        } else {
            two_t * j + (k + two_t - self.d.gluing_offsets[j - 1]) % two_t
        }
    }

    fn label(&self, e: usize) -> &[Letter] {
        let two_t = 2 * self.t;
        let (row, k) = (e / two_t, e % two_t);
        if row == 0 {
            self.d.layers[0].circle_arc(false, k)
        } else {
            self.d.layers[row - 1].circle_arc(true, k)
        }
    }

    /// Every cycle as a list of `(edge, inverse)`: circles, then face boundaries.
    fn cycles(&self) -> Vec<Vec<(usize, bool)>> {
        let two_t = 2 * self.t;
        let mut out: Vec<Vec<(usize, bool)>> = (0..=self.d.layers.len()).map(|row| (0..two_t).map(|k| (row * two_t + k, false)).collect()).collect();
        for (j, i, _) in self.d.faces() {
            out.push(vec![
                (self.id(j, i, OUTER_LEFT), false),
                (self.id(j, i, OUTER_LEFT + 1), false),
                (self.id(j, i, INNER_LEFT + 1), true),
                (self.id(j, i, INNER_LEFT), true),
            ]);
        }
        out
    }
}

fn contains_run(s: &SSeq, pat: &[u64]) -> bool {
    s.0.windows(pat.len()).any(|w| w == pat)
}

fn check_faces(d: &AnnularDiagram, r: Rational, m: u64) -> Result<()> {
    let (s1, s2) = split_s1_s2(r)?;
    let p1: Vec<u64> = [vec![m], s1.0, vec![m]].concat();
    let p2: Vec<u64> = [vec![m + 1], s2.0, vec![m + 1]].concat();
    for (j, i, f) in d.faces() {
        let (o, n) = (s_seq_letters(&f.outer_side())?, s_seq_letters(&f.inner_side())?);
        let ok = (contains_run(&o, &p1) && contains_run(&n, &p1)) || (contains_run(&o, &p2) && contains_run(&n, &p2));
        if !ok {
            return inapplicable(format!("layer {j} face {i}: sides {o} / {n} contain neither (m,S1,m) nor (m+1,S2,m+1) on both"));
        }
    }
    Ok(())
}

fn build_label(arc: &ArcData, base_b: bool, negative: bool) -> Vec<Letter> {
    let mut out = Vec::with_capacity(arc.len);
    let (mut b, mut neg) = (base_b, negative);
    for i in 0..arc.len {
        if i > 0 {
            b = !b;
            neg ^= arc.flips[i - 1];
        }
        out.push(Letter { base: if b { Base::B } else { Base::A }, inverse: neg });
    }
    out
}

/// The four relabelings of `d`, in the order (base flip, sign flip) = 00, 01, 10, 11.
fn relabelings(d: &AnnularDiagram, r: Rational) -> Result<Vec<AnnularDiagram>> {
    let (ty, spec, _) = reduction(r)?;
    d.check_structure()?;
    if d.layers.is_empty() {
        return Ok(vec![AnnularDiagram::default()]);
    }
    if let Some(v) = vertices(d)?.iter().find(|v| !v.is_sign_change()) {
        let at = v.endpoints[0];
        return inapplicable(format!(
            "degree-{} vertex at layer {} face {} arc {} is {:?}, not converging or diverging",
            v.degree, at.0, at.1, at.2, v.kind
        ));
    }
    check_faces(d, r, ty.m())?;
    let map = EdgeMap { d, t: d.t() };
    let arcs: Vec<ArcData> = (0..map.count()).map(|e| ArcData::new(map.label(e), spec)).collect::<Result<_>>()?;
    let mut bases = ParityDsu::new(arcs.len());
    let mut signs = ParityDsu::new(arcs.len());
    for cycle in map.cycles() {
        let n = cycle.len();
        for p in 0..n {
            let (x, xi) = cycle[p];
            let (y, yi) = cycle[(p + 1) % n];
            let (ax, ay) = (&arcs[x], &arcs[y]);
            if ax.trailing(xi) && ay.leading(yi) {
                return inapplicable("two separators meet at a vertex");
            }
            let sep = ax.trailing(xi) || ay.leading(yi);
            let (xb, xs) = ax.end_offsets(xi, true);
            let (yb, ys) = ay.end_offsets(yi, false);
            if !bases.relate(x, y, xb ^ yb ^ true) || !signs.relate(x, y, xs ^ ys ^ sep) {
                return inapplicable("arc labels admit no consistent relabeling");
            }
        }
    }
    let mut out = Vec::with_capacity(4);
    for (fb, fs) in [(false, false), (false, true), (true, false), (true, true)] {
        let labels: Vec<Vec<Letter>> = (0..arcs.len())
            .map(|e| build_label(&arcs[e], bases.find(e).1 ^ fb, signs.find(e).1 ^ fs))
            .collect();
        let layers = d
            .layers
            .iter()
            .enumerate()
            .map(|(j, l)| {
                let faces = (0..l.t())
                    .map(|i| {
                        let arc = |slot| AltWord::new(labels[map.id(j, i, slot)].clone());
                        Ok(Face::new(arc(0)?, arc(1)?, arc(2)?, arc(3)?))
                    })
                    .collect::<Result<_>>()?;
                Ok(Layer { faces })
            })
            .collect::<Result<_>>()?;
        out.push(AnnularDiagram { layers, gluing_offsets: d.gluing_offsets.clone() });
    }
    Ok(out)
}

/// Relabels a diagram over `r` into a reduced one over `r̃` without boundary requirements.
pub fn t_transform_diagram(d: &AnnularDiagram, r: Rational) -> Result<AnnularDiagram> {
    let (_, _, rt) = reduction(r)?;
    for cand in relabelings(d, r)? {
        if cand.layers.is_empty() || validate_diagram(&cand, rt)?.is_valid() {
            return Ok(cand);
        }
    }
    inapplicable(format!("no relabeling lands in the reduced relator set of {rt}"))
}

/// Transforms a certificate over `r` for `(s, s')` into one over `r̃` for `(s̃, s̃')`.
pub fn t_transform(c: &Certificate) -> Result<Certificate> {
    let (ty, _, rt) = reduction(c.r)?;
    let loop_red = |x: Rational| match reduce_loop_slope(x, ty) {
        Ok(y) if y.in_open_unit() => Ok(y),
        Ok(y) => inapplicable(format!("{x} reduces to the boundary value {y}")),
        Err(e) => inapplicable(e.to_string()),
    };
    let (st, st2) = (loop_red(c.s)?, loop_red(c.s2)?);
    for cand in relabelings(&c.diagram, c.r)? {
        let out = Certificate { r: rt, s: st, s2: st2, diagram: cand, conjugator: None }.with_conjugator()?;
        if validate(&out)?.is_valid() {
            return Ok(out);
        }
    }
    inapplicable(format!("no relabeling gives a valid certificate over {rt} for ({st}, {st2})"))
}

/// Checks `S(ψ(x)) = T(φ(x))` for every run of consecutive arcs on every circle and every
/// face side, and `CS(ψ(∂)) = CT(φ(∂))` for every circle and face. Returns the violations.
pub fn check_t_identities(before: &AnnularDiagram, after: &AnnularDiagram, r: Rational) -> Result<Vec<String>> {
    let (_, spec, _) = reduction(r)?;
    let mut bad = Vec::new();
    if before.layers.len() != after.layers.len() || before.t() != after.t() {
        bad.push("diagram shapes differ".to_string());
        return Ok(bad);
    }
    let linear = |x: &[Letter], y: &[Letter], what: String, bad: &mut Vec<String>| -> Result<()> {
        if t_seq(&s_seq_letters(x)?, spec)? != s_seq_letters(y)? {
            bad.push(what);
        }
        Ok(())
    };
    let cyclic = |x: &[Letter], y: &[Letter], what: String, bad: &mut Vec<String>| -> Result<()> {
        if ct_seq(&cs_seq_letters(x)?, spec)? != cs_seq_letters(y)? {
            bad.push(what);
        }
        Ok(())
    };
    let mut circles: Vec<(String, &Layer, &Layer, bool)> = Vec::new();
    if let (Some(b), Some(a)) = (before.layers.first(), after.layers.first()) {
        circles.push(("outer circle".into(), b, a, false));
    }
    for (j, (b, a)) in before.layers.iter().zip(&after.layers).enumerate() {
        circles.push((format!("inner circle of layer {j}"), b, a, true));
    }
    for (name, b, a, inner) in circles {
        let two_t = 2 * b.t();
        for start in 0..two_t {
            for len in 1..=two_t {
                let take = |l: &Layer| (0..len).flat_map(|k| l.circle_arc(inner, (start + k) % two_t).to_vec()).collect::<Vec<_>>();
                linear(&take(b), &take(a), format!("{name}: arcs {start}..+{len}"), &mut bad)?;
            }
        }
        cyclic(&b.circle(inner), &a.circle(inner), format!("{name}: cyclic"), &mut bad)?;
    }
    for ((j, i, fb), (_, _, fa)) in before.faces().zip(after.faces()) {
        linear(&fb.outer_side(), &fa.outer_side(), format!("layer {j} face {i}: outer side"), &mut bad)?;
        linear(&fb.inner_side(), &fa.inner_side(), format!("layer {j} face {i}: inner side"), &mut bad)?;
        cyclic(&fb.boundary(), &fa.boundary(), format!("layer {j} face {i}: boundary"), &mut bad)?;
    }
    Ok(bad)
}
