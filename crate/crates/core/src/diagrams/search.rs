use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rational::Rational;
use crate::slopes::in_domain;
use crate::words::{invert_letters, loop_word, AltWord, Letter, RelatorSet};

use super::validate::{reducible_across, validate};
use super::{cyclic_word, AnnularDiagram, Certificate, Face, Layer, INNER_LEFT, OUTER_LEFT};

/// Search limits. Arc lengths bound every arc, so a face side has at most `2·max_arc_len` letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_layers: usize,
    pub max_faces: usize,
    pub max_arc_len: usize,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds { max_layers: 2, max_faces: 8, max_arc_len: 20 }
    }
}

struct Ctx<'a> {
    rs: &'a RelatorSet,
    n: usize,
    v: Vec<Letter>,
    v_inv: Vec<Letter>,
    layers: usize,
    t: usize,
    max_arc: usize,
}

fn sign_change(w: &[Letter], i: usize) -> bool {
    w[i - 1].inverse != w[i].inverse
}

/// Cut positions of a side into two arcs within the length bound, sign changes first.
fn splits(side: &[Letter], max_arc: usize) -> Vec<usize> {
    let m = side.len();
    let ok: Vec<usize> = (1..m).filter(|&i| i <= max_arc && m - i <= max_arc).collect();
    let (mut first, rest): (Vec<usize>, Vec<usize>) = ok.into_iter().partition(|&i| sign_change(side, i));
    first.extend(rest);
    first
}

fn make_face(outer: &[Letter], ocut: usize, inner: &[Letter], icut: usize) -> Face {
    let alt = |w: &[Letter]| AltWord::new(w.to_vec()).expect("subword of an alternating word");
    Face::new(alt(&outer[..ocut]), alt(&outer[ocut..]), alt(&inner[..icut]), alt(&inner[icut..]))
}

impl Ctx<'_> {
    /// Inner sides `Y⁻¹` for each occurrence of `X·Y` in the symmetrized set.
    fn inner_options(&self, outer: &[Letter]) -> Vec<Vec<Letter>> {
        let x = outer.len();
        if x < 2 || x + 2 > self.n {
            return Vec::new();
        }
        let mut out: Vec<Vec<Letter>> = Vec::new();
        for (inv, k) in self.rs.occurrences(outer) {
            let side = invert_letters(&self.rs.subword(inv, k + x, self.n - x));
            if side.len() <= 2 * self.max_arc && !out.contains(&side) {
                out.push(side);
            }
        }
        out
    }

    fn boundary_ok(&self, inner: &[Letter]) -> bool {
        [&self.v, &self.v_inv].iter().any(|w| w.len() == inner.len() && crate::cyclic::is_rotation(w, inner))
    }

    /// Fills layer `j` given its outer sides, each already split into two arcs.
    fn layer(&self, j: usize, outer: &[(Vec<Letter>, usize)], above: &[Layer], gluing: &[usize]) -> Option<(Vec<Layer>, Vec<usize>)> {
        let last = j + 1 == self.layers;
        let gs: &[usize] = if last { &[0] } else { &[0, 1] };
        for &g in gs {
            let mut faces = Vec::with_capacity(self.t);
            if let Some(found) = self.face(j, 0, g, outer, above, gluing, &mut faces) {
                return Some(found);
            }
        }
        None
    }

    fn reduced_against_above(&self, j: usize, i: usize, face: &Face, above: &[Layer], gluing: &[usize]) -> bool {
        if j == 0 {
            return true;
        }
        let upper = &above[j - 1];
        let two_t = 2 * self.t;
        (0..2).all(|slot| {
            let k = (2 * i + slot + two_t - gluing[j - 1]) % two_t;
            !reducible_across(&upper.faces[k / 2], INNER_LEFT + k % 2, face, OUTER_LEFT + slot)
        })
    }

    /// Lower outer sides fully determined by the first `done` faces must occur in the relator set.
    fn lower_sides_ok(&self, faces: &[Face], g: usize) -> bool {
        let two_t = 2 * self.t;
        let known = 2 * faces.len();
        (0..self.t).all(|i| {
            let a = (2 * i + two_t - g) % two_t;
            let b = (2 * i + 1 + two_t - g) % two_t;
            if a >= known || b >= known {
                return true;
            }
            let side = [faces[a / 2].arc(INNER_LEFT + a % 2), faces[b / 2].arc(INNER_LEFT + b % 2)].concat();
            !self.inner_options(&side).is_empty()
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn face(
        &self,
        j: usize,
        i: usize,
        g: usize,
        outer: &[(Vec<Letter>, usize)],
        above: &[Layer],
        gluing: &[usize],
        faces: &mut Vec<Face>,
    ) -> Option<(Vec<Layer>, Vec<usize>)> {
        let last = j + 1 == self.layers;
        if i == self.t {
            let layer = Layer { faces: faces.clone() };
            let mut layers = above.to_vec();
            if last {
                if !self.boundary_ok(&layer.circle(true)) {
                    return None;
                }
                layers.push(layer);
                return Some((layers, gluing.to_vec()));
            }
            let two_t = 2 * self.t;
            let next: Vec<(Vec<Letter>, usize)> = (0..self.t)
                .map(|i| {
                    let a = (2 * i + two_t - g) % two_t;
                    let b = (2 * i + 1 + two_t - g) % two_t;
                    let (x, y) = (layer.circle_arc(true, a), layer.circle_arc(true, b));
                    ([x, y].concat(), x.len())
                })
                .collect();
            layers.push(layer);
            let mut gl = gluing.to_vec();
            gl.push(g);
            return self.layer(j + 1, &next, &layers, &gl);
        }
        let (side, ocut) = &outer[i];
        for inner in self.inner_options(side) {
            let cuts = splits(&inner, self.max_arc);
            let Some(&canonical) = cuts.first() else { continue };
            let probe = make_face(side, *ocut, &inner, canonical);
            if !self.reduced_against_above(j, i, &probe, above, gluing) {
                continue;
            }
            let tries: &[usize] = if last { &cuts[..1] } else { &cuts };
            for &c in tries {
                faces.push(make_face(side, *ocut, &inner, c));
                if (last || self.lower_sides_ok(faces, g)) && !faces.is_empty() {
                    if let Some(found) = self.face(j, i + 1, g, outer, above, gluing, faces) {
                        return Some(found);
                    }
                }
                faces.pop();
            }
        }
        None
    }
}

/// Compositions of `total` into `k` parts within `[lo, hi]`, in lexicographic order.
fn compositions(total: usize, k: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, k: usize, lo: usize, hi: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if total < lo * k || total > hi * k {
            return;
        }
        for x in lo..=hi.min(total) {
            cur.push(x);
            go(total - x, k - 1, lo, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, k, lo, hi, &mut Vec::new(), &mut out);
    out
}

/// Layer-by-layer circle lengths with equal face counts: `|inner_j| = t·n − |outer_j|`.
fn lengths_consistent(layers: usize, t: usize, n: usize, u: usize, v: usize) -> bool {
    let mut outer = u;
    for _ in 0..layers {
        if t * n < outer + 2 * t || outer < 2 * t {
            return false;
        }
        outer = t * n - outer;
    }
    outer == v
}

/// Searches for a reduced annular diagram with outer label `u_s` and inner label `u_s'^{±1}`.
///
/// Enumeration order is layers, then faces per layer, then outer rotation, then arc-length
/// compositions and relator occurrences. Gluing offsets range over `{0, 1}`: with equal face
/// counts an offset `g + 2` is the same diagram as `g` with the lower faces renumbered.
pub fn search_certificate(r: Rational, s: Rational, s2: Rational, bounds: Bounds) -> Result<Option<Certificate>> {
    if bounds.max_faces == 0 || bounds.max_arc_len == 0 {
        return domain("search bounds must be positive");
    }
    for x in [s, s2] {
        if !in_domain(r, x)? {
            return domain(format!("{x} is not in I1 ∪ I2 for {r}"));
        }
    }
    let rs = RelatorSet::new(r)?;
    let u = loop_word(s)?.into_letters();
    let v = loop_word(s2)?.into_letters();
    let v_inv = invert_letters(&v);
    let cert = |diagram: AnnularDiagram| Certificate { r, s, s2, diagram, conjugator: None }.with_conjugator();

    let (cu, cv) = (cyclic_word(&u), cyclic_word(&v));
    if cu.is_some() && (cu == cv || cu == cv.as_ref().map(|c| c.inverse())) {
        return cert(AnnularDiagram::default()).map(Some);
    }
    let n = rs.relator_len();
    for layers in 1..=bounds.max_layers {
        for t in 1..=bounds.max_faces {
            if !lengths_consistent(layers, t, n, u.len(), v.len()) {
                continue;
            }
            let ctx = Ctx { rs: &rs, n, v: v.clone(), v_inv: v_inv.clone(), layers, t, max_arc: bounds.max_arc_len };
            let hi = (2 * bounds.max_arc_len).min(n - 2);
            let comps = compositions(u.len(), t, 2, hi);
            let found = (0..u.len()).into_par_iter().find_map_first(|o| {
                let rot = crate::cyclic::rotated(&u, o);
                comps.iter().find_map(|c| {
                    let mut pos = 0;
                    let mut outer = Vec::with_capacity(t);
                    for &x in c {
                        let side = rot[pos..pos + x].to_vec();
                        pos += x;
                        let cut = *splits(&side, bounds.max_arc_len).first()?;
                        outer.push((side, cut));
                    }
                    let (ls, gs) = ctx.layer(0, &outer, &[], &[])?;
                    Some(AnnularDiagram { layers: ls, gluing_offsets: gs })
                })
            });
            if let Some(d) = found {
                let c = cert(d)?;
                let report = validate(&c)?;
                if let Some(f) = report.first_failure() {
                    return Err(Error::Invariant(format!("search produced an invalid diagram: {} {:?}", f.clause, f.detail)));
                }
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}
