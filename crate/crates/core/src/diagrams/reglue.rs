//! Cut-and-reglue at a junction vertex of a layer.
//!
//! At the junction `x` between faces `D1` and `D2`, a forward move of depth `d` slides `x`
//! by `d` letters into `D2`: the first `d` letters `P` of `D2`'s outer left arc move to the
//! end of `D1`'s outer right arc, and the last `d` letters of `D1`'s inner right arc (which
//! must read `P⁻¹`) move to the front of `D2`'s inner left arc. Both face labels change
//! only by rotation and both circles keep their labels. A backward move slides `x` into `D1`.
//!
//! The matching condition repeats an incoming label at `x`, so a mixing vertex never slides.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{invert_letters, AltWord, Letter};

use super::vertices::kind_of;
use super::{cyclic_word, AnnularDiagram, Kind, Vertex, INNER_LEFT, INNER_RIGHT, OUTER_LEFT, OUTER_RIGHT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Move {
    MakeConverging,
    MakeDiverging,
}

impl Move {
    fn target(self) -> Kind {
        match self {
            Move::MakeConverging => Kind::Converging,
            Move::MakeDiverging => Kind::Diverging,
        }
    }
}

/// A resolved move: junction `junction` of layer `layer` lies between faces `junction` and
/// `junction + 1 (mod t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegluePlan {
    pub layer: usize,
    pub junction: usize,
    pub forward: bool,
    pub depth: usize,
}

fn inapplicable<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::MoveInapplicable(msg.into()))
}

/// The four arcs at a junction: `[oR1, oL2, iR1, iL2]`.
fn junction_arcs(d: &AnnularDiagram, j: usize, i: usize) -> [Vec<Letter>; 4] {
    let t = d.t();
    let (f1, f2) = (&d.layers[j].faces[i], &d.layers[j].faces[(i + 1) % t]);
    [f1.arc(OUTER_RIGHT), f2.arc(OUTER_LEFT), f1.arc(INNER_RIGHT), f2.arc(INNER_LEFT)].map(<[Letter]>::to_vec)
}

/// The arcs after sliding the junction, if the labels allow it.
fn slide(arcs: &[Vec<Letter>; 4], forward: bool, depth: usize) -> Option<[Vec<Letter>; 4]> {
    let [or1, ol2, ir1, il2] = arcs;
    if forward {
        if ol2.len() <= depth || ir1.len() <= depth {
            return None;
        }
        let p = &ol2[..depth];
        let q = &ir1[ir1.len() - depth..];
        (q == invert_letters(p)).then(|| {
            [[&or1[..], p].concat(), ol2[depth..].to_vec(), ir1[..ir1.len() - depth].to_vec(), [q, &il2[..]].concat()]
        })
    } else {
        if or1.len() <= depth || il2.len() <= depth {
            return None;
        }
        let p = &or1[or1.len() - depth..];
        let q = &il2[..depth];
        (q == invert_letters(p)).then(|| {
            [or1[..or1.len() - depth].to_vec(), [p, &ol2[..]].concat(), [&ir1[..], q].concat(), il2[depth..].to_vec()]
        })
    }
}

fn junction_kind(arcs: &[Vec<Letter>; 4]) -> Kind {
    let [or1, ol2, ir1, il2] = arcs;
    kind_of(&[*or1.last().unwrap(), ol2[0].inv(), *ir1.last().unwrap(), il2[0].inv()])
}

/// Locates the junction of `v` and the least slide that makes it `mv`'s target kind.
pub fn plan_reglue(d: &AnnularDiagram, v: &Vertex, mv: Move) -> Result<RegluePlan> {
    if v.degree != 4 {
        return inapplicable(format!("vertex has degree {}, not 4", v.degree));
    }
    if v.is_sign_change() {
        return inapplicable(format!("vertex is already {:?}", v.kind));
    }
    let Some(&(layer, junction, _, _)) = v.endpoints.iter().find(|e| e.2 == INNER_RIGHT && e.3 && v.endpoints.contains(&(e.0, (e.1 + 1) % d.t(), INNER_LEFT, false)))
    else {
        return inapplicable("vertex is not a junction between two faces of a layer");
    };
    let arcs = junction_arcs(d, layer, junction);
    let longest = arcs.iter().map(Vec::len).max().unwrap_or(0);
    for depth in 1..longest {
        for forward in [true, false] {
            if let Some(new) = slide(&arcs, forward, depth) {
                if junction_kind(&new) == mv.target() {
                    return Ok(RegluePlan { layer, junction, forward, depth });
                }
            }
        }
    }
    inapplicable(format!("no slide along matching arcs makes the vertex {:?}", mv.target()))
}

/// Performs a planned move, carrying the change to glued neighbor faces. A neighbor side may
/// only have its internal cut moved, so both partner arcs must lie in the same face.
pub fn apply_reglue(d: &AnnularDiagram, plan: RegluePlan) -> Result<AnnularDiagram> {
    let RegluePlan { layer: j, junction: i, forward, depth } = plan;
    let t = d.t();
    let two_t = 2 * t;
    let arcs = junction_arcs(d, j, i);
    let Some([or1, ol2, ir1, il2]) = slide(&arcs, forward, depth) else {
        return inapplicable("labels at the junction do not allow this slide");
    };
    let alt = |w: Vec<Letter>| AltWord::new(w);
    let mut out = d.clone();
    let i2 = (i + 1) % t;
    out.layers[j].faces[i].arcs[OUTER_RIGHT] = alt(or1.clone())?;
    out.layers[j].faces[i2].arcs[OUTER_LEFT] = alt(ol2.clone())?;
    out.layers[j].faces[i].arcs[INNER_RIGHT] = alt(ir1.clone())?;
    out.layers[j].faces[i2].arcs[INNER_LEFT] = alt(il2.clone())?;
    let (k1, k2) = (2 * i + 1, (2 * i + 2) % two_t);
    if j + 1 < d.layers.len() {
        let g = d.gluing_offsets[j];
        let (c1, c2) = ((k1 + g) % two_t, (k2 + g) % two_t);
        if c1 % 2 != 0 || c2 != c1 + 1 {
            return inapplicable("the glued arcs below belong to different faces");
        }
        out.layers[j + 1].faces[c1 / 2].arcs[OUTER_LEFT] = alt(ir1)?;
        out.layers[j + 1].faces[c1 / 2].arcs[OUTER_RIGHT] = alt(il2)?;
    }
    if j > 0 {
        let g = d.gluing_offsets[j - 1];
        let (c1, c2) = ((k1 + two_t - g) % two_t, (k2 + two_t - g) % two_t);
        if c1 % 2 != 0 || c2 != c1 + 1 {
            return inapplicable("the glued arcs above belong to different faces");
        }
        out.layers[j - 1].faces[c1 / 2].arcs[INNER_LEFT] = alt(or1)?;
        out.layers[j - 1].faces[c1 / 2].arcs[INNER_RIGHT] = alt(ol2)?;
    }
    check_soundness(d, &out)?;
    Ok(out)
}

/// Face labels as a multiset of cyclic words and both boundary circles must be unchanged.
fn check_soundness(before: &AnnularDiagram, after: &AnnularDiagram) -> Result<()> {
    let key = |d: &AnnularDiagram| {
        let mut v: Vec<Vec<Letter>> =
            d.faces().map(|(_, _, f)| cyclic_word(&f.boundary()).map(|c| c.canonical_key()).unwrap_or_default()).collect();
        v.sort();
        v
    };
    let circle = |w: Option<Vec<Letter>>| w.and_then(|w| cyclic_word(&w));
    if key(before) != key(after)
        || circle(before.outer_word()) != circle(after.outer_word())
        || circle(before.inner_word()) != circle(after.inner_word())
    {
        return Err(Error::Invariant("reglue changed a face label or a boundary word".into()));
    }
    Ok(())
}

/// Makes the degree-4 junction `v` converging or diverging by sliding it along matching arcs.
pub fn reglue_at_vertex(d: &AnnularDiagram, v: &Vertex, mv: Move) -> Result<AnnularDiagram> {
    let plan = plan_reglue(d, v, mv)?;
    let out = apply_reglue(d, plan)?;
    let new_kind = junction_kind(&junction_arcs(&out, plan.layer, plan.junction));
    if new_kind != mv.target() {
        return Err(Error::Invariant(format!("reglue produced a {new_kind:?} vertex")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::vertices;
    use crate::rational::Rational;

    fn q(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn face(arcs: [&str; 4]) -> crate::diagrams::Face {
        let [a, b, c, d] = arcs.map(|w| AltWord::parse(w).unwrap());
        crate::diagrams::Face::new(a, b, c, d)
    }

    #[test]
    fn other_junction_becomes_converging() {
        let d = AnnularDiagram::single_layer(vec![face(["a", "b", "baBABa", "bA"]), face(["aB", "A", "BAbaBA", "B"])]);
        assert!(crate::diagrams::validate_diagram(&d, q(2, 5)).unwrap().clauses[0].ok);
        let v = vertices(&d).unwrap().into_iter().find(|v| v.degree == 4 && v.kind == Kind::Other).unwrap();
        let plan = plan_reglue(&d, &v, Move::MakeConverging).unwrap();
        let out = reglue_at_vertex(&d, &v, Move::MakeConverging).unwrap();
        assert_eq!(out.outer_word().and_then(|w| cyclic_word(&w)), d.outer_word().and_then(|w| cyclic_word(&w)));
        assert_eq!(out.inner_word().and_then(|w| cyclic_word(&w)), d.inner_word().and_then(|w| cyclic_word(&w)));
        assert!(crate::diagrams::validate_diagram(&out, q(2, 5)).unwrap().clauses[0].ok);
        let after = junction_arcs(&out, plan.layer, plan.junction);
        assert_eq!(junction_kind(&after), Kind::Converging);
    }

    #[test]
    fn mixing_junctions_do_not_slide() {
        let c = crate::diagrams::search_certificate(q(3, 8), q(1, 6), q(3, 10), crate::diagrams::Bounds::default())
            .unwrap()
            .unwrap();
        for v in vertices(&c.diagram).unwrap().iter().filter(|v| v.kind == Kind::Mixing) {
            for mv in [Move::MakeConverging, Move::MakeDiverging] {
                assert!(matches!(reglue_at_vertex(&c.diagram, v, mv), Err(Error::MoveInapplicable(_))));
            }
        }
    }

    #[test]
    fn terminal_and_degree_two() {
        let r = q(5, 12);
        let d = crate::diagrams::synthetic_rings(r, 1).unwrap().remove(0);
        let vs = vertices(&d).unwrap();
        let four = vs.iter().find(|v| v.degree == 4).unwrap();
        assert!(matches!(reglue_at_vertex(&d, four, Move::MakeDiverging), Err(Error::MoveInapplicable(_))));
        let two = vs.iter().find(|v| v.degree == 2).unwrap();
        assert!(matches!(reglue_at_vertex(&d, two, Move::MakeConverging), Err(Error::MoveInapplicable(_))));
    }
}
