use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::rational::Rational;
use crate::words::{cyclic_relator, invert_letters, letters_to_string, loop_word, CyclicWord, Letter};

use super::{cyclic_word, AnnularDiagram, Certificate, Face, INNER_LEFT, INNER_RIGHT, OUTER_LEFT, OUTER_RIGHT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// (i) every face boundary lies in the symmetrized relator set.
    FacesInRelatorSet,
    /// (ii) the outer boundary reads `u_s`.
    OuterBoundary,
    /// (iii) the inner boundary reads `u_s'^{±1}`.
    InnerBoundary,
    /// (iv) glued arcs carry the same label in the flow direction.
    Gluing,
    /// (v) no reducible pair across a glued edge.
    Reduced,
    /// The recorded conjugator matches the one read off the diagram.
    Conjugator,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::FacesInRelatorSet => "(i) faces in relator set",
            Clause::OuterBoundary => "(ii) outer boundary",
            Clause::InnerBoundary => "(iii) inner boundary",
            Clause::Gluing => "(iv) gluing",
            Clause::Reduced => "(v) reduced",
            Clause::Conjugator => "conjugator",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: Clause,
    pub ok: bool,
    /// Location of the first violation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub clauses: Vec<ClauseResult>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.clauses.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| !c.ok)
    }

    fn push(&mut self, clause: Clause, failure: Option<String>) {
        self.clauses.push(ClauseResult { clause, ok: failure.is_none(), detail: failure });
    }
}

fn in_relator_set(f: &Face, rel: &CyclicWord, rel_inv: &CyclicWord) -> bool {
    cyclic_word(&f.boundary()).is_some_and(|b| &b == rel || &b == rel_inv)
}

fn faces_clause(d: &AnnularDiagram, r: Rational) -> Result<Option<String>> {
    let rel = cyclic_relator(r)?;
    let rel_inv = rel.inverse();
    Ok(d.faces().find(|(_, _, f)| !in_relator_set(f, &rel, &rel_inv)).map(|(j, i, f)| {
        format!("layer {j} face {i} reads {}", letters_to_string(&f.boundary()))
    }))
}

fn gluing_clause(d: &AnnularDiagram) -> Option<String> {
    let t = d.t();
    for j in 0..d.layers.len().saturating_sub(1) {
        let g = d.gluing_offsets[j];
        for k in 0..2 * t {
            let above = d.layers[j].circle_arc(true, k);
            let below = d.layers[j + 1].circle_arc(false, (k + g) % (2 * t));
            if above != below {
                return Some(format!(
                    "inner arc {k} of layer {j} ({}) differs from outer arc {} of layer {} ({})",
                    letters_to_string(above),
                    (k + g) % (2 * t),
                    j + 1,
                    letters_to_string(below)
                ));
            }
        }
    }
    None
}

/// Start of arc `slot` inside `Face::boundary`, where inner arcs appear inverted.
fn boundary_position(f: &Face, slot: usize) -> usize {
    let [ol, or, ir] = [OUTER_LEFT, OUTER_RIGHT, INNER_RIGHT].map(|s| f.arc(s).len());
    match slot {
        OUTER_LEFT => 0,
        OUTER_RIGHT => ol,
        INNER_RIGHT => ol + or,
        _ => ol + or + ir,
    }
}

/// Faces `D` above and `D'` below a glued edge `x` are a reducible pair when `D` reads
/// `x⁻¹·δ` and `D'` reads `x·δ⁻¹` from that edge.
pub(super) fn reducible_across(upper: &Face, uslot: usize, lower: &Face, lslot: usize) -> bool {
    let x = upper.arc(uslot);
    let du = crate::cyclic::rotated(&upper.boundary(), boundary_position(upper, uslot));
    let dl = crate::cyclic::rotated(&lower.boundary(), boundary_position(lower, lslot));
    if du.len() != dl.len() || dl[..x.len()] != *x {
        return false;
    }
    dl[x.len()..] == invert_letters(&du[x.len()..])[..]
}

fn reduced_clause(d: &AnnularDiagram) -> Option<String> {
    let t = d.t();
    for j in 0..d.layers.len().saturating_sub(1) {
        let g = d.gluing_offsets[j];
        for k in 0..2 * t {
            let ko = (k + g) % (2 * t);
            let upper = &d.layers[j].faces[k / 2];
            let lower = &d.layers[j + 1].faces[ko / 2];
            if reducible_across(upper, INNER_LEFT + k % 2, lower, OUTER_LEFT + ko % 2) {
                return Some(format!(
                    "layer {j} face {} and layer {} face {} form a reducible pair across inner arc {k}",
                    k / 2,
                    j + 1,
                    ko / 2
                ));
            }
        }
    }
    None
}

/// Clauses (i), (iv) and (v) for a diagram without boundary requirements.
pub fn validate_diagram(d: &AnnularDiagram, r: Rational) -> Result<ValidationReport> {
    d.check_structure()?;
    let mut rep = ValidationReport { clauses: Vec::new() };
    rep.push(Clause::FacesInRelatorSet, faces_clause(d, r)?);
    rep.push(Clause::Gluing, gluing_clause(d));
    rep.push(Clause::Reduced, reduced_clause(d));
    Ok(rep)
}

fn boundary_matches(w: &[Letter], target: &CyclicWord, allow_inverse: bool) -> bool {
    cyclic_word(w).is_some_and(|c| &c == target || (allow_inverse && c == target.inverse()))
}

/// Checks every clause independently of the search code; structural problems are errors.
pub fn validate(c: &Certificate) -> Result<ValidationReport> {
    let d = &c.diagram;
    d.check_structure()?;
    let u = CyclicWord::new(loop_word(c.s)?)?;
    let v = CyclicWord::new(loop_word(c.s2)?)?;
    let mut rep = ValidationReport { clauses: Vec::new() };
    rep.push(Clause::FacesInRelatorSet, faces_clause(d, c.r)?);
    match (d.outer_word(), d.inner_word()) {
        (Some(outer), Some(inner)) => {
            rep.push(
                Clause::OuterBoundary,
                (!boundary_matches(&outer, &u, false))
                    .then(|| format!("outer boundary reads {}, expected u_{} = {}", letters_to_string(&outer), c.s, u)),
            );
            rep.push(
                Clause::InnerBoundary,
                (!boundary_matches(&inner, &v, true))
                    .then(|| format!("inner boundary reads {}, expected u_{}^±1 = {}", letters_to_string(&inner), c.s2, v)),
            );
        }
        _ => {
            rep.push(Clause::OuterBoundary, None);
            rep.push(
                Clause::InnerBoundary,
                (!boundary_matches(u.letters(), &v, true))
                    .then(|| format!("empty diagram needs u_{} and u_{}^±1 to coincide", c.s, c.s2)),
            );
        }
    }
    rep.push(Clause::Gluing, gluing_clause(d));
    rep.push(Clause::Reduced, reduced_clause(d));
    if let Some(g) = &c.conjugator {
        let derived = c.derive_conjugator()?;
        let failure = match derived {
            Some(h) if &h == g => None,
            Some(h) => Some(format!("recorded {} but the diagram gives {}", letters_to_string(g), letters_to_string(&h))),
            None => Some("boundaries do not determine a conjugator".into()),
        };
        rep.push(Clause::Conjugator, failure);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::Layer;
    use crate::error::Error;
    use crate::words::AltWord;

    fn q(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn face(arcs: [&str; 4]) -> Face {
        let [a, b, c, d] = arcs.map(|s| AltWord::parse(s).unwrap());
        Face::new(a, b, c, d)
    }

    fn one_third() -> Certificate {
        crate::diagrams::search_certificate(q(1, 3), q(3, 4), q(3, 5), crate::diagrams::Bounds::default())
            .unwrap()
            .expect("certificate")
    }

    #[test]
    fn reflexive_zero_layer() {
        let c = Certificate { r: q(5, 12), s: q(2, 5), s2: q(2, 5), diagram: AnnularDiagram::default(), conjugator: None };
        assert!(validate(&c).unwrap().is_valid());
        let c = Certificate { s2: q(3, 7), ..c };
        let rep = validate(&c).unwrap();
        assert_eq!(rep.first_failure().unwrap().clause, Clause::InnerBoundary);
    }

    #[test]
    fn flipped_letter_breaks_clause_i() {
        let c = one_third();
        assert!(validate(&c).unwrap().is_valid());
        let mut bad = c.clone();
        let arc = &mut bad.diagram.layers[0].faces[0].arcs[OUTER_LEFT];
        let mut letters = arc.letters().to_vec();
        letters[0] = letters[0].inv();
        *arc = AltWord::new(letters).unwrap();
        let rep = validate(&bad).unwrap();
        assert_eq!(rep.first_failure().unwrap().clause, Clause::FacesInRelatorSet);
    }

    #[test]
    fn structural_errors() {
        let mut c = one_third();
        c.diagram.layers[0].faces[0].arcs[INNER_LEFT] = AltWord::new(vec![]).unwrap();
        assert!(matches!(validate(&c), Err(Error::Structural(_))));
        let mut c = one_third();
        c.diagram.gluing_offsets.push(0);
        assert!(matches!(validate(&c), Err(Error::Structural(_))));
    }

    #[test]
    fn stacked_mirror_layers_are_reducible() {
        let c = one_third();
        let top = c.diagram.layers[0].clone();
        // Reflect the ring across its core: inner sides become outer sides.
        let flipped = Layer {
            faces: top
                .faces
                .iter()
                .map(|f| Face::new(f.arcs[2].clone(), f.arcs[3].clone(), f.arcs[0].clone(), f.arcs[1].clone()))
                .collect(),
        };
        let d = AnnularDiagram { layers: vec![top, flipped], gluing_offsets: vec![0] };
        let rep = validate_diagram(&d, q(1, 3)).unwrap();
        assert!(rep.clauses[0].ok && rep.clauses[1].ok);
        assert_eq!(rep.first_failure().unwrap().clause, Clause::Reduced);
        let stacked = Certificate { r: q(1, 3), s: q(3, 4), s2: q(3, 4), diagram: d, conjugator: None };
        let rep = validate(&stacked).unwrap();
        assert!(rep.clauses[1].ok && rep.clauses[2].ok);
        assert!(!rep.is_valid());
    }

    #[test]
    fn gluing_mismatch() {
        let f1 = face(["ab", "aB", "ba", "BA"]);
        let d = AnnularDiagram { layers: vec![Layer { faces: vec![f1.clone()] }, Layer { faces: vec![f1] }], gluing_offsets: vec![1] };
        let rep = validate_diagram(&d, q(1, 3)).unwrap();
        assert!(!rep.clauses[1].ok);
    }
}
