//! Layered annular diagrams over the symmetrized relator set of `u_r`.
//!
//! A diagram is a list of layers from the outer boundary inwards. Each layer is a cyclic
//! ring of `t` faces meeting at single junction vertices. Every arc label is read in the
//! flow direction of the outer boundary, so a face reads `oL·oR·iR⁻¹·iL⁻¹` clockwise.
//! Inner arc `k` of layer `j` is the same edge as outer arc `(k + g_j) mod 2t` of layer
//! `j + 1`, where `g_j` is the gluing offset.

mod reglue;
mod search;
mod synth;
mod transform;
mod validate;
mod vertices;

pub use reglue::{apply_reglue, plan_reglue, reglue_at_vertex, Move, RegluePlan};
pub use search::{search_certificate, Bounds};
pub use synth::synthetic_rings;
pub use transform::{check_t_identities, t_transform, t_transform_diagram};
pub use validate::{validate, validate_diagram, Clause, ClauseResult, ValidationReport};
pub use vertices::{
    face_decomposition, face_kind, vertex_kinds, vertices, FaceDecomposition, FaceKind, Kind, Vertex, VertexKind,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::slopes::parse_rational;
use crate::words::{
    invert_letters, letters_to_string, loop_word, parse_letters, relator_word, AltWord, CyclicWord, Letter,
};

pub const OUTER_LEFT: usize = 0;
pub const OUTER_RIGHT: usize = 1;
pub const INNER_LEFT: usize = 2;
pub const INNER_RIGHT: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Face {
    /// `[outerLeft, outerRight, innerLeft, innerRight]`.
    pub arcs: [AltWord; 4],
}

impl Face {
    pub fn new(ol: AltWord, or: AltWord, il: AltWord, ir: AltWord) -> Face {
        Face { arcs: [ol, or, il, ir] }
    }

    pub fn from_letters(arcs: [&[Letter]; 4]) -> Result<Face> {
        let [a, b, c, d] = arcs.map(|x| AltWord::new(x.to_vec()));
        Ok(Face::new(a?, b?, c?, d?))
    }

    pub fn arc(&self, slot: usize) -> &[Letter] {
        self.arcs[slot].letters()
    }

    pub fn outer_side(&self) -> Vec<Letter> {
        [self.arc(OUTER_LEFT), self.arc(OUTER_RIGHT)].concat()
    }

    pub fn inner_side(&self) -> Vec<Letter> {
        [self.arc(INNER_LEFT), self.arc(INNER_RIGHT)].concat()
    }

    /// `oL·oR·iR⁻¹·iL⁻¹`.
    pub fn boundary(&self) -> Vec<Letter> {
        let mut w = self.outer_side();
        w.extend(invert_letters(self.arc(INNER_RIGHT)));
        w.extend(invert_letters(self.arc(INNER_LEFT)));
        w
    }

    pub fn perimeter(&self) -> usize {
        self.arcs.iter().map(AltWord::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layer {
    pub faces: Vec<Face>,
}

impl Layer {
    pub fn t(&self) -> usize {
        self.faces.len()
    }

    /// Arc `k` of the outer (`inner = false`) or inner circle, `k < 2t`.
    pub fn circle_arc(&self, inner: bool, k: usize) -> &[Letter] {
        let slot = if inner { INNER_LEFT } else { OUTER_LEFT } + k % 2;
        self.faces[k / 2].arc(slot)
    }

    pub fn circle(&self, inner: bool) -> Vec<Letter> {
        (0..2 * self.t()).flat_map(|k| self.circle_arc(inner, k).to_vec()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AnnularDiagram {
    pub layers: Vec<Layer>,
    /// One offset per pair of consecutive layers.
    pub gluing_offsets: Vec<usize>,
}

impl AnnularDiagram {
    pub fn single_layer(faces: Vec<Face>) -> AnnularDiagram {
        AnnularDiagram { layers: vec![Layer { faces }], gluing_offsets: Vec::new() }
    }

    pub fn t(&self) -> usize {
        self.layers.first().map_or(0, Layer::t)
    }

    pub fn face_count(&self) -> usize {
        self.layers.iter().map(Layer::t).sum()
    }

    pub fn faces(&self) -> impl Iterator<Item = (usize, usize, &Face)> {
        self.layers.iter().enumerate().flat_map(|(j, l)| l.faces.iter().enumerate().map(move |(i, f)| (j, i, f)))
    }

    /// Checks shape invariants: offsets count, equal positive face counts, nonempty arcs.
    pub fn check_structure(&self) -> Result<()> {
        let n = self.layers.len();
        if self.gluing_offsets.len() != n.saturating_sub(1) {
            return Err(Error::Structural(format!(
                "{} layers need {} gluing offsets, found {}",
                n,
                n.saturating_sub(1),
                self.gluing_offsets.len()
            )));
        }
        let t = self.t();
        for (j, l) in self.layers.iter().enumerate() {
            if l.t() == 0 {
                return Err(Error::Structural(format!("layer {j} has no faces")));
            }
            if l.t() != t {
                return Err(Error::Structural(format!("layer {j} has {} faces, layer 0 has {t}", l.t())));
            }
            for (i, f) in l.faces.iter().enumerate() {
                if let Some(slot) = f.arcs.iter().position(AltWord::is_empty) {
                    return Err(Error::Structural(format!("layer {j} face {i} arc {slot} is empty")));
                }
            }
        }
        if let Some(g) = self.gluing_offsets.iter().find(|&&g| g >= 2 * t) {
            return Err(Error::Structural(format!("gluing offset {g} is not below 2t = {}", 2 * t)));
        }
        Ok(())
    }

    /// Outer label of layer 0, or `None` without layers.
    pub fn outer_word(&self) -> Option<Vec<Letter>> {
        self.layers.first().map(|l| l.circle(false))
    }

    pub fn inner_word(&self) -> Option<Vec<Letter>> {
        self.layers.last().map(|l| l.circle(true))
    }

    /// Inner arc index of layer `j` glued to outer arc 0 of layer `j + 1`.
    pub(crate) fn glue_source(&self, j: usize) -> usize {
        let two_t = 2 * self.t();
        (two_t - self.gluing_offsets[j] % two_t) % two_t
    }

    /// `Σ face perimeters − |outer| − |inner| − 2·Σ glued lengths`; zero for consistent data.
    pub fn perimeter_defect(&self) -> i64 {
        let faces: usize = self.faces().map(|(_, _, f)| f.perimeter()).sum();
        let outer = self.outer_word().map_or(0, |w| w.len());
        let inner = self.inner_word().map_or(0, |w| w.len());
        let glued: usize = self.layers.iter().skip(1).map(|l| l.circle(false).len()).sum();
        faces as i64 - outer as i64 - inner as i64 - 2 * glued as i64
    }
}

/// A conjugacy certificate: outer label `u_s`, inner label `u_s'^{±1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub r: Rational,
    pub s: Rational,
    pub s2: Rational,
    pub diagram: AnnularDiagram,
    /// `g` with `u_s = g·u_s'^{±1}·g⁻¹` in the group, freely reduced.
    pub conjugator: Option<Vec<Letter>>,
}

pub(crate) fn free_reduce(w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl Certificate {
    /// The conjugator read off the diagram, or `None` if the boundaries do not match `u_s`, `u_s'^{±1}`.
    pub fn derive_conjugator(&self) -> Result<Option<Vec<Letter>>> {
        let u = loop_word(self.s)?.into_letters();
        let v = loop_word(self.s2)?.into_letters();
        let d = &self.diagram;
        let (outer, inner) = match (d.outer_word(), d.inner_word()) {
            (Some(o), Some(i)) => (o, i),
            _ => (u.clone(), u.clone()),
        };
        let Some(o) = rotation_offset(&u, &outer) else { return Ok(None) };
        let vinv = invert_letters(&v);
        let (vv, k) = match rotation_offset(&v, &inner) {
            Some(k) => (v, k),
            None => match rotation_offset(&vinv, &inner) {
                Some(k) => (vinv, k),
                None => return Ok(None),
            },
        };
        let mut g = u[..o].to_vec();
        for j in 0..d.layers.len().saturating_sub(1) {
            let src = d.glue_source(j);
            for kk in 0..src {
                g.extend_from_slice(d.layers[j].circle_arc(true, kk));
            }
        }
        g.extend(invert_letters(&vv[..k]));
        Ok(Some(free_reduce(&g)))
    }

    pub fn with_conjugator(mut self) -> Result<Certificate> {
        self.conjugator = self.derive_conjugator()?;
        Ok(self)
    }
}

/// Least `k` with `rotate(base, k) == w`.
pub(crate) fn rotation_offset(base: &[Letter], w: &[Letter]) -> Option<usize> {
    if base.len() != w.len() {
        return None;
    }
    crate::cyclic::cyclic_find(base, w)
}

pub(crate) fn cyclic_word(w: &[Letter]) -> Option<CyclicWord> {
    AltWord::new(w.to_vec()).ok().and_then(|a| CyclicWord::new(a).ok())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArcJson {
    pub offset: usize,
    pub len: usize,
    pub inverse: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FaceJson {
    pub arcs: Vec<ArcJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LayerJson {
    pub faces: Vec<FaceJson>,
}

/// Wire format: arcs are located by offset and length in `u_r` or `u_r⁻¹`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateJson {
    pub slope: String,
    pub loops: [String; 2],
    pub layers: Vec<LayerJson>,
    pub gluing_offsets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<String>,
}

fn encode_arc(label: &[Letter], sides: [&[Letter]; 2]) -> Result<ArcJson> {
    for (inverse, side) in [false, true].into_iter().zip(sides) {
        if let Some(offset) = (label.len() <= side.len()).then(|| crate::cyclic::cyclic_find(side, label)).flatten() {
            return Ok(ArcJson { offset, len: label.len(), inverse });
        }
    }
    Err(Error::Structural(format!("arc {} is not a subword of the relator", letters_to_string(label))))
}

fn decode_arc(a: &ArcJson, sides: [&[Letter]; 2]) -> Result<AltWord> {
    let side = sides[a.inverse as usize];
    let n = side.len();
    if a.len == 0 || a.len > n || a.offset >= n {
        return Err(Error::Structural(format!("arc offset {} len {} out of range for |u_r| = {n}", a.offset, a.len)));
    }
    AltWord::new((0..a.len).map(|i| side[(a.offset + i) % n]).collect())
}

impl Certificate {
    pub fn to_json(&self) -> Result<CertificateJson> {
        let u = relator_word(self.r)?.into_letters();
        let ui = invert_letters(&u);
        let sides = [&u[..], &ui[..]];
        let layers = self
            .diagram
            .layers
            .iter()
            .map(|l| {
                let faces = l
                    .faces
                    .iter()
                    .map(|f| Ok(FaceJson { arcs: f.arcs.iter().map(|a| encode_arc(a.letters(), sides)).collect::<Result<_>>()? }))
                    .collect::<Result<_>>()?;
                Ok(LayerJson { faces })
            })
            .collect::<Result<_>>()?;
        Ok(CertificateJson {
            slope: self.r.to_string(),
            loops: [self.s.to_string(), self.s2.to_string()],
            layers,
            gluing_offsets: self.diagram.gluing_offsets.clone(),
            conjugator: self.conjugator.as_deref().map(letters_to_string),
        })
    }

    /// Decodes the wire format; shape errors are reported as [`Error::Structural`].
    pub fn from_json(j: &CertificateJson) -> Result<Certificate> {
        let structural = |e: Error| match e {
            Error::Structural(_) => e,
            other => Error::Structural(other.to_string()),
        };
        let r = parse_rational(&j.slope).map_err(structural)?;
        let s = parse_rational(&j.loops[0]).map_err(structural)?;
        let s2 = parse_rational(&j.loops[1]).map_err(structural)?;
        let u = relator_word(r).map_err(structural)?.into_letters();
        let ui = invert_letters(&u);
        let sides = [&u[..], &ui[..]];
        let mut layers = Vec::with_capacity(j.layers.len());
        for (lj, l) in j.layers.iter().enumerate() {
            let mut faces = Vec::with_capacity(l.faces.len());
            for (fi, f) in l.faces.iter().enumerate() {
                let arcs: [ArcJson; 4] = f.arcs.clone().try_into().map_err(|v: Vec<ArcJson>| {
                    Error::Structural(format!("layer {lj} face {fi} has {} arcs, expected 4", v.len()))
                })?;
                let [a, b, c, d] = arcs.map(|a| decode_arc(&a, sides));
                faces.push(Face::new(a.map_err(structural)?, b.map_err(structural)?, c.map_err(structural)?, d.map_err(structural)?));
            }
            layers.push(Layer { faces });
        }
        let conjugator = match &j.conjugator {
            Some(t) => Some(parse_letters(t).map_err(structural)?),
            None => None,
        };
        let diagram = AnnularDiagram { layers, gluing_offsets: j.gluing_offsets.clone() };
        diagram.check_structure()?;
        Ok(Certificate { r, s, s2, diagram, conjugator })
    }

    pub fn to_json_string(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.to_json()?).map_err(|e| Error::Invariant(e.to_string()))
    }

    pub fn from_json_str(text: &str) -> Result<Certificate> {
        let j: CertificateJson = serde_json::from_str(text).map_err(|e| Error::Structural(e.to_string()))?;
        Certificate::from_json(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn zero_layer_json() {
        let c = Certificate { r: q(2, 5), s: q(1, 3), s2: q(1, 3), diagram: AnnularDiagram::default(), conjugator: None };
        let c = c.with_conjugator().unwrap();
        assert_eq!(c.conjugator, Some(vec![]));
        let text = c.to_json_string().unwrap();
        let back = Certificate::from_json_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn malformed_json() {
        assert!(matches!(Certificate::from_json_str("{"), Err(Error::Structural(_))));
        let bad = r#"{"slope":"1/3","loops":["3/4","3/5"],"layers":[{"faces":[{"arcs":[{"offset":0,"len":1,"inverse":false}]}]}],"gluing_offsets":[]}"#;
        assert!(matches!(Certificate::from_json_str(bad), Err(Error::Structural(_))));
        let bad = r#"{"slope":"1/3","loops":["3/4","3/5"],"layers":[],"gluing_offsets":[0]}"#;
        assert!(matches!(Certificate::from_json_str(bad), Err(Error::Structural(_))));
    }

    #[test]
    fn free_reduction() {
        let w = parse_letters("abBAab").unwrap();
        assert_eq!(letters_to_string(&free_reduce(&w)), "ab");
    }
}
