//! Hand-built single-layer rings whose faces and vertices meet the transform's hypotheses.

use crate::error::Result;
use crate::rational::Rational;
use crate::slopes::classify_slope;
use crate::tseq::{ct_seq, TSpec};
use crate::words::{cs_seq_letters, invert_letters, s_seq_letters, split_s1_s2, Letter, RelatorSet};

use super::{vertices, AnnularDiagram, Face};

fn sign_changes(w: &[Letter]) -> Vec<usize> {
    let n = w.len();
    (0..n).filter(|&i| w[i].inverse != w[(i + n - 1) % n].inverse).collect()
}

fn contains_run(s: &[u64], pat: &[u64]) -> bool {
    s.windows(pat.len()).any(|w| w == pat)
}

/// Faces cut from `u_r^{±1}` at sign changes, with both sides containing `(m,S1,m)` or both
/// `(m+1,S2,m+1)`, and every arc holding a non-separator run.
fn candidate_faces(r: Rational, spec: TSpec) -> Result<Vec<Face>> {
    let rs = RelatorSet::new(r)?;
    let (s1, s2) = split_s1_s2(r)?;
    let m = spec.m;
    let p1 = [vec![m], s1.0, vec![m]].concat();
    let p2 = [vec![m + 1], s2.0, vec![m + 1]].concat();
    let mut out = Vec::new();
    for inv in [false, true] {
        let side = rs.side(inv);
        for k in sign_changes(side) {
            let f = crate::cyclic::rotated(side, k);
            let cuts: Vec<usize> = sign_changes(&f).into_iter().filter(|&i| i > 0).collect();
            for (x, &a) in cuts.iter().enumerate() {
                for (y, &b) in cuts.iter().enumerate().skip(x + 1) {
                    for &c in &cuts[y + 1..] {
                        let (ol, or) = (&f[..a], &f[a..b]);
                        let (ir, il) = (invert_letters(&f[b..c]), invert_letters(&f[c..]));
                        let up = s_seq_letters(&[ol, or].concat())?.0;
                        let dn = s_seq_letters(&[&il[..], &ir[..]].concat())?.0;
                        let kinds = (contains_run(&up, &p1) && contains_run(&dn, &p1))
                            || (contains_run(&up, &p2) && contains_run(&dn, &p2));
                        let runs = [ol, or, &il[..], &ir[..]]
                            .iter()
                            .all(|w| s_seq_letters(w).map(|s| s.0.contains(&spec.run())).unwrap_or(false));
                        if kinds && runs {
                            out.push(Face::from_letters([ol, or, &il, &ir])?);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn circle_ok(w: &[Letter], spec: TSpec) -> bool {
    w.len() % 2 == 0
        && (0..w.len()).all(|i| w[i].base != w[(i + 1) % w.len()].base)
        && cs_seq_letters(w).and_then(|cs| ct_seq(&cs, spec)).is_ok()
}

/// `strict` asks for valid circles and converging or diverging vertices only.
pub(crate) fn rings(r: Rational, limit: usize, strict: bool) -> Result<Vec<AnnularDiagram>> {
    let class = classify_slope(r)?;
    let Some(ty) = class.reduction_type() else {
        return Err(crate::error::Error::TransformInapplicable(format!("{r} is not an unmirrored general slope")));
    };
    let spec = TSpec::for_reduction(ty)?;
    let faces = candidate_faces(r, spec)?;
    let mut out = Vec::new();
    let mut consider = |fs: Vec<Face>| -> Result<bool> {
        let d = AnnularDiagram::single_layer(fs);
        let circles = d.outer_word().into_iter().chain(d.inner_word()).all(|w| circle_ok(&w, spec));
        if !strict || (circles && vertices(&d)?.iter().all(|v| v.is_sign_change())) {
            out.push(d);
        }
        Ok(out.len() >= limit)
    };
    for f in &faces {
        if consider(vec![f.clone()])? {
            return Ok(out);
        }
    }
    for f in &faces {
        for g in &faces {
            if consider(vec![f.clone(), g.clone()])? {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// Up to `limit` one-layer rings of one or two faces over a general `r ≤ 1/2`, all of whose
/// vertices are converging or diverging. Boundaries are unconstrained.
pub fn synthetic_rings(r: Rational, limit: usize) -> Result<Vec<AnnularDiagram>> {
    rings(r, limit, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{face_kind, validate_diagram};

    #[test]
    fn rings_are_valid() {
        let r = Rational::new(5, 12).unwrap();
        let rings = synthetic_rings(r, 6).unwrap();
        assert_eq!(rings.len(), 6);
        for d in &rings {
            assert!(validate_diagram(d, r).unwrap().is_valid());
            for (_, _, f) in d.faces() {
                face_kind(f, r).unwrap();
            }
        }
    }
}
