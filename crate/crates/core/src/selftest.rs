//! Randomized invariant suites, shared by the `selftest` command, the acceptance run and
//! the property tests. Each property is a pure check on one input; the suites draw inputs
//! from a seeded ChaCha stream so a failing run can be replayed from its seed.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::homotopy_classify;
use crate::diagrams::{
    apply_reglue, check_t_identities, plan_reglue, search_certificate, synthetic_rings, t_transform_diagram, validate, vertices,
    AnnularDiagram, Bounds, Certificate, CertificateJson, Face, Kind, Move,
};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::riley::{
    evaluate_letters, identity_residual, numeric_roots, rational_rem, riley_polynomial, trace_of_loop, verify_trace_certificate,
    IntPoly, TraceCertificate,
};
use crate::slopes::{
    cf_eval, cf_expand, classify_slope, farey_parents, in_domain, mobius_a, reduce_loop_slope, reduce_slope, ContFrac,
    ReductionType, SlopeClass,
};
use crate::tseq::{ct_seq, inverse_ct, verify_reduction_identity, TSpec, TType};
use crate::words::{
    contains_cyclic_subseq, cs_of_slope, cyclic_eq, invert_letters, mirror_word, product_of_pieces_bound,
    relator_word, split_s1_s2, AltWord, Base, CyclicSSeq, CyclicWord, Letter, RelatorSet,
};

/// Outcome of one property on one input: `Ok(false)` means the input was outside the
/// property's hypothesis and was skipped.
pub type Check = std::result::Result<bool, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(true)
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn q(n: u64, d: u64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

/// Input-level properties.
pub mod props {
    use super::*;

    pub fn cf_round_trip(r: Rational) -> Check {
        let cf = lib(cf_expand(r))?;
        ensure(cf.is_canonical() && lib(cf_eval(&cf))? == r, || format!("cf_eval(cf_expand({r})) = {cf} fails"))
    }

    pub fn farey_law(r: Rational) -> Check {
        let p = lib(farey_parents(r))?;
        ensure(
            p.r1.cross(p.r2).abs() == 1 && p.r1.mediant(p.r2).ok() == Some(r) && p.r1 < r && r < p.r2,
            || format!("parents {} < {r} < {} violate the Farey laws", p.r1, p.r2),
        )
    }

    pub fn taxonomy(r: Rational) -> Check {
        let class = lib(classify_slope(r))?;
        let base = match &class {
            SlopeClass::Mirror { inner } => inner.as_ref(),
            c => c,
        };
        let general = matches!(base, SlopeClass::GeneralTypeA { .. } | SlopeClass::GeneralTypeB { .. });
        ensure(general == class.is_general() && general != class.is_special(), || format!("{r}: class {class} is inconsistent"))
    }

    /// `M({r1(r), r2(r)}) = {r1(r̃), r2(r̃)}` for type A slopes.
    pub fn mobius_coherence(r: Rational) -> Check {
        let class = lib(classify_slope(r))?;
        let Some(ReductionType::A(m)) = class.reduction_type() else { return Ok(false) };
        let rt = lib(reduce_slope(r, &class))?;
        if !rt.in_open_unit() {
            return Ok(false);
        }
        let (p, pt) = (lib(farey_parents(r))?, lib(farey_parents(rt))?);
        let mut image = [mobius_a(m, p.r1), mobius_a(m, p.r2)];
        image.sort();
        let mut want = [Some(pt.r1), Some(pt.r2)];
        want.sort();
        ensure(image == want, || format!("{r}: M maps parents to {image:?}, expected {want:?}"))
    }

    pub fn mirror_farey(r: Rational) -> Check {
        let p = lib(farey_parents(r))?;
        let pm = lib(farey_parents(lib(r.one_minus())?))?;
        let want = (lib(p.r2.one_minus())?, lib(p.r1.one_minus())?);
        ensure((pm.r1, pm.r2) == want, || format!("parents of 1 - {r} are {}, {}", pm.r1, pm.r2))
    }

    /// For type A `r` and `s ∈ I1 ∪ I2` of shape `[m, p2 >= 2, ...]`, `s̃` lies in the domain of `r̃`.
    pub fn domain_transport(r: Rational, s: Rational) -> Check {
        let class = lib(classify_slope(r))?;
        let Some(ty @ ReductionType::A(_)) = class.reduction_type() else { return Ok(false) };
        if !lib(in_domain(r, s))? {
            return Ok(false);
        }
        let Ok(st) = reduce_loop_slope(s, ty) else { return Ok(false) };
        let rt = lib(reduce_slope(r, &class))?;
        // s̃ = 1 is the boundary slope of the reduced knot and lies outside every domain.
        if !rt.in_open_unit() || !st.in_open_unit() {
            return Ok(false);
        }
        ensure(lib(in_domain(rt, st))?, || format!("{s} ∈ I({r}) but {st} ∉ I({rt})"))
    }

    pub fn relator_length(r: Rational) -> Check {
        let n = lib(relator_word(r))?.len();
        ensure(n as u64 == 2 * r.den(), || format!("|u_{r}| = {n}"))
    }

    fn block(count: u64, value: u64) -> Vec<u64> {
        vec![value; count as usize]
    }

    /// `CS([m,n]) = <m+1, (n-1)<m>, m+1, (n-1)<m>>`.
    pub fn cs_two_term(m: u64, n: u64) -> Check {
        let r = lib(cf_eval(&lib(ContFrac::new(vec![m, n]))?))?;
        let half = [vec![m + 1], block(n - 1, m)].concat();
        let want = CyclicSSeq([half.clone(), half].concat());
        let got = lib(cs_of_slope(r))?;
        ensure(got == want, || format!("CS([{m},{n}]) = {got}, expected {want}"))
    }

    /// `CS([m,1,n]) = <n<m+1>, m, n<m+1>, m>`.
    pub fn cs_three_term(m: u64, n: u64) -> Check {
        let r = lib(cf_eval(&lib(ContFrac::new(vec![m, 1, n]))?))?;
        let half = [block(n, m + 1), vec![m]].concat();
        let want = CyclicSSeq([half.clone(), half].concat());
        let got = lib(cs_of_slope(r))?;
        ensure(got == want, || format!("CS([{m},1,{n}]) = {got}, expected {want}"))
    }

    /// For `r <= 1/2` with at least two coefficients, `CS(r)` is `<S1, S2, S1, S2>`.
    pub fn four_block(r: Rational) -> Check {
        if r > Rational::HALF || lib(cf_expand(r))?.len() < 2 {
            return Ok(false);
        }
        let cs = lib(cs_of_slope(r))?;
        let t = cs.terms();
        let periodic = t.len() % 2 == 0 && crate::cyclic::rotated(t, t.len() / 2) == t;
        let (s1, s2) = lib(split_s1_s2(r))?;
        let rebuilt = CyclicSSeq([s1.0.clone(), s2.0.clone(), s1.0, s2.0].concat());
        ensure(periodic && rebuilt == cs, || format!("CS({r}) = {cs} is not <S1,S2,S1,S2>"))
    }

    /// `CS(s)` uses only `l` and `l + 1`, where `l` is the first coefficient; `CS(1/l) = <l, l>`.
    pub fn first_coefficient(s: Rational) -> Check {
        let cf = lib(cf_expand(s))?;
        let l = cf.coeffs()[0];
        let cs = lib(cs_of_slope(s))?;
        if cf.len() == 1 {
            return ensure(cs == CyclicSSeq(vec![l, l]), || format!("CS(1/{l}) = {cs}"));
        }
        ensure(cs.terms().iter().all(|&x| x == l || x == l + 1), || format!("CS({s}) = {cs} leaves {{{l}, {}}}", l + 1))
    }

    /// For general `r` and `s` in its domain, `CS(s)` does not contain both `S1` and `S2`.
    pub fn domain_exclusion(r: Rational, s: Rational) -> Check {
        if r > Rational::HALF || !lib(classify_slope(r))?.is_general() || !lib(in_domain(r, s))? || s == Rational::ONE {
            return Ok(false);
        }
        let (s1, s2) = lib(split_s1_s2(r))?;
        let cs = lib(cs_of_slope(s))?;
        ensure(!(contains_cyclic_subseq(&cs, &s1) && contains_cyclic_subseq(&cs, &s2)), || {
            format!("CS({s}) = {cs} contains both {s1} and {s2}")
        })
    }

    pub fn mirror_law(r: Rational) -> Check {
        let u = lib(CyclicWord::new(mirror_word(&lib(relator_word(r))?)))?;
        let v = lib(CyclicWord::new(lib(relator_word(lib(r.one_minus())?))?))?;
        ensure(cyclic_eq(&u, &v, true), || format!("mirror of u_{r} is not u_{{1-r}}^±1"))
    }

    pub fn not_three_pieces(r: Rational) -> Check {
        let rs = lib(RelatorSet::new(r))?;
        ensure(!product_of_pieces_bound(rs.relator(), &rs, 3), || format!("u_{r} is a product of at most 3 pieces"))
    }

    pub fn inverse_law(terms: &[u64], spec: TSpec) -> Check {
        let t = CyclicSSeq(terms.to_vec());
        let s = lib(inverse_ct(&t, spec))?;
        let n = s.terms().len();
        let sep = spec.separator();
        let adjacent = (0..n).any(|i| s.terms()[i] == sep && s.terms()[(i + 1) % n] == sep);
        let back = lib(ct_seq(&s, spec))?;
        let sum: u64 = s.terms().iter().sum();
        let law = terms.len() as u64 * sep + spec.run() * terms.iter().sum::<u64>();
        ensure(back == t && !adjacent && sum == law, || format!("inverse law fails on {t} under {spec:?}"))
    }

    /// `CT(r) = CS(r̃)` for a general `r <= 1/2`.
    pub fn reduction_identity_slope(r: Rational) -> Check {
        let class = lib(classify_slope(r))?;
        let Some(ty) = class.reduction_type() else { return Ok(false) };
        let spec = lib(TSpec::for_reduction(ty))?;
        let rt = lib(reduce_slope(r, &class))?;
        let ct = lib(ct_seq(&lib(cs_of_slope(r))?, spec))?;
        ensure(ct == lib(cs_of_slope(rt))?, || format!("CT({r}) = {ct} differs from CS({rt})"))
    }

    pub fn reduction_identity_loop(s: Rational, ty: ReductionType) -> Check {
        if reduce_loop_slope(s, ty).is_err() {
            return Ok(false);
        }
        let spec = lib(TSpec::for_reduction(ty))?;
        ensure(lib(verify_reduction_identity(s, spec))?, || format!("CT({s}) != CS(s̃) for {ty}"))
    }

    pub fn classify_symmetry(r: Rational, s: Rational, s2: Rational) -> Check {
        let (Ok(a), Ok(b)) = (homotopy_classify(r, s, s2), homotopy_classify(r, s2, s)) else { return Ok(false) };
        ensure(a.verdict == b.verdict, || format!("({r}, {s}, {s2}) is not symmetric"))
    }

    pub fn classify_mirror(r: Rational, s: Rational, s2: Rational) -> Check {
        let Ok(a) = homotopy_classify(r, s, s2) else { return Ok(false) };
        let m = |x: Rational| lib(x.one_minus());
        let b = lib(homotopy_classify(m(r)?, m(s)?, m(s2)?))?;
        ensure(a.verdict == b.verdict, || format!("({r}, {s}, {s2}) and its mirror disagree"))
    }

    /// For `r = 1/p`, distinct loops are homotopic iff `s = q/p1`, `s' = q/p2` with `p1 + p2 = qp`.
    pub fn torus_relation(p: u64, s: Rational, s2: Rational) -> Check {
        let r = q(1, p);
        let Ok(rep) = homotopy_classify(r, s, s2) else { return Ok(false) };
        if s == s2 {
            return Ok(false);
        }
        let (r0, a, b) = (rep.witness.r, rep.witness.loops[0], rep.witness.loops[1]);
        let want = a.num() == b.num() && a.den() + b.den() == a.num() * r0.den();
        ensure(rep.verdict.is_homotopic() == want, || format!("1/{p}: ({s}, {s2}) verdict {}", rep.verdict))
    }

    /// `tr ρ(g w g⁻¹) = tr ρ(w) = tr ρ(w⁻¹)` as polynomials.
    pub fn trace_invariance(w: &[Letter], g: &[Letter]) -> Check {
        let tr = |x: &[Letter]| evaluate_letters(x).trace();
        let conj = [g, w, &invert_letters(g)].concat();
        let t = tr(w);
        ensure(tr(&conj) == t && tr(&invert_letters(w)) == t, || "trace is not a class function".to_string())
    }

    pub fn homomorphism(r: Rational) -> Check {
        let u = lib(relator_word(r))?;
        let roots = lib(numeric_roots(&lib(riley_polynomial(r))?, 30))?;
        let worst = roots.iter().map(|b| identity_residual(u.letters(), b)).fold(0.0, f64::max);
        ensure(worst < 1e-9, || format!("ρ(u_{r}) is {worst:e} from I at a root"))
    }

    pub fn mirror_degree(r: Rational) -> Check {
        let d = lib(riley_polynomial(r))?.degree();
        let dm = lib(riley_polynomial(lib(r.one_minus())?))?.degree();
        ensure(d == dm, || format!("deg Riley({r}) = {d:?}, deg Riley(1 - r) = {dm:?}"))
    }

    /// Homotopic pairs never carry a separating factor.
    pub fn coherence(r: Rational, s: Rational, s2: Rational) -> Check {
        let Ok(rep) = homotopy_classify(r, s, s2) else { return Ok(false) };
        if !rep.verdict.is_homotopic() || s == s2 || !lib(in_domain(r, s))? || !lib(in_domain(r, s2))? {
            return Ok(false);
        }
        let ra = lib(residues(r, s))?;
        let rb = lib(residues(r, s2))?;
        ensure(ra == rb, || format!("({r}, {s}, {s2}) is homotopic yet traces differ modulo a Riley factor"))
    }

    pub fn json_round_trip(c: &Certificate) -> Check {
        let back = lib(Certificate::from_json_str(&lib(c.to_json_string())?))?;
        ensure(&back == c, || "certificate JSON does not round-trip".into())
    }

    pub fn bookkeeping(d: &AnnularDiagram) -> Check {
        ensure(d.perimeter_defect() == 0, || format!("perimeter defect {}", d.perimeter_defect()))
    }

    pub fn mixing_law(c: &Certificate) -> Check {
        let mixing = lib(vertices(&c.diagram))?.iter().any(|v| v.kind == Kind::Mixing);
        ensure(c.diagram.layers.is_empty() || mixing, || format!("certificate for ({}, {}, {}) has no mixing vertex", c.r, c.s, c.s2))
    }

    pub fn reglue_soundness(d: &AnnularDiagram) -> Check {
        let others: Vec<_> = lib(vertices(d))?.into_iter().filter(|v| v.degree == 4 && v.kind == Kind::Other).collect();
        let mut moved = false;
        for v in &others {
            for mv in [Move::MakeConverging, Move::MakeDiverging] {
                let Ok(plan) = plan_reglue(d, v, mv) else { continue };
                // apply_reglue re-checks the face multiset and both circles.
                let out = lib(apply_reglue(d, plan))?;
                let same = |a: Option<Vec<Letter>>, b: Option<Vec<Letter>>| {
                    a.and_then(|w| AltWord::new(w).ok()).and_then(|w| CyclicWord::new(w).ok())
                        == b.and_then(|w| AltWord::new(w).ok()).and_then(|w| CyclicWord::new(w).ok())
                };
                if !same(d.outer_word(), out.outer_word()) || !same(d.inner_word(), out.inner_word()) {
                    return Err("reglue changed a boundary word".into());
                }
                moved = true;
            }
        }
        Ok(moved)
    }

    pub fn t_identities(d: &AnnularDiagram, r: Rational) -> Check {
        let out = lib(t_transform_diagram(d, r))?;
        let bad = lib(check_t_identities(d, &out, r))?;
        let mixing = lib(vertices(&out))?.iter().any(|v| v.degree == 4 && v.kind == Kind::Mixing);
        ensure(bad.is_empty() && !mixing, || format!("over {r}: {}", bad.join("; ")))
    }
}

type ResidueCache = Mutex<HashMap<(Rational, Rational), Vec<Vec<BigRational>>>>;

fn factor_cache() -> &'static Mutex<HashMap<Rational, Vec<IntPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<Rational, Vec<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `tr ρ(u_s)` modulo every irreducible factor of the Riley polynomial of `r`.
fn residues(r: Rational, s: Rational) -> Result<Vec<Vec<BigRational>>> {
    static CACHE: OnceLock<ResidueCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(r, s)) {
        return Ok(v.clone());
    }
    let factors = {
        let known = factor_cache().lock().unwrap().get(&r).cloned();
        match known {
            Some(f) => f,
            None => {
                let f: Vec<IntPoly> = riley_polynomial(r)?.factor().into_iter().map(|(f, _)| f).collect();
                factor_cache().lock().unwrap().insert(r, f.clone());
                f
            }
        }
    };
    let tr = trace_of_loop(s)?.to_rational();
    let out: Vec<Vec<BigRational>> = factors.iter().map(|f| rational_rem(&tr, &f.to_rational())).collect();
    cache.lock().unwrap().insert((r, s), out.clone());
    Ok(out)
}

/// Random generators for the suites.
pub mod gen {
    use super::*;

    pub fn slope<R: Rng>(rng: &mut R, max_den: u64) -> Rational {
        loop {
            let p = rng.gen_range(2..=max_den);
            let n = rng.gen_range(1..p);
            if num_integer::gcd(n, p) == 1 {
                return q(n, p);
            }
        }
    }

    /// Canonical continued fraction with the given first coefficient range and length.
    pub fn cf<R: Rng>(rng: &mut R, first: std::ops::RangeInclusive<u64>, len: std::ops::RangeInclusive<usize>, max: u64) -> Vec<u64> {
        let k = rng.gen_range(len);
        let mut c: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=max)).collect();
        c[0] = rng.gen_range(first);
        if k > 1 && c[k - 1] == 1 {
            c[k - 1] = rng.gen_range(2..=max.max(2));
        }
        c
    }

    /// A general slope `r <= 1/2` with coefficients at most 5 and length at most 6.
    pub fn general_slope<R: Rng>(rng: &mut R) -> Rational {
        loop {
            let c = cf(rng, 2..=5, 3..=6, 5);
            let r = cf_eval(&ContFrac::new(c).unwrap()).unwrap();
            if classify_slope(r).map(|k| k.is_general()).unwrap_or(false) {
                return r;
            }
        }
    }

    /// A slope of shape `[m, p2 >= 2, ...]` (A) or `[m, 1, p3, ...]` (B) with denominator at most `max_den`.
    pub fn shaped_loop<R: Rng>(rng: &mut R, ty: ReductionType, max_den: u64) -> Rational {
        loop {
            let mut c = cf(rng, ty.m()..=ty.m(), 2..=7, 6);
            match ty {
                ReductionType::A(_) => c[1] = c[1].max(2),
                ReductionType::B(_) => {
                    if c.len() < 3 {
                        c.push(rng.gen_range(2..=6));
                    }
                    c[1] = 1;
                }
            }
            let Ok(s) = cf_eval(&ContFrac::new(c).unwrap()) else { continue };
            if s.den() <= max_den && reduce_loop_slope(s, ty).is_ok() {
                return s;
            }
        }
    }

    pub fn in_domain_slope<R: Rng>(rng: &mut R, r: Rational, max_den: u64) -> Option<Rational> {
        (0..200).map(|_| slope(rng, max_den)).find(|&s| in_domain(r, s).unwrap_or(false))
    }

    pub fn word<R: Rng>(rng: &mut R, max_len: usize) -> Vec<Letter> {
        let n = rng.gen_range(1..=max_len);
        (0..n)
            .map(|_| Letter::new(if rng.gen() { Base::A } else { Base::B }, rng.gen()))
            .collect()
    }

    /// A ring of two faces cut at random points of random rotations of `u_r^{±1}`.
    pub fn random_ring<R: Rng>(rng: &mut R, r: Rational) -> AnnularDiagram {
        let rs = RelatorSet::new(r).unwrap();
        let n = rs.relator_len();
        let mut face = || {
            let side = rs.side(rng.gen()).to_vec();
            let f = crate::cyclic::rotated(&side, rng.gen_range(0..n));
            let mut cuts: Vec<usize> = (1..n).collect();
            cuts.shuffle(rng);
            let mut c = cuts[..3].to_vec();
            c.sort();
            let (a, b, d) = (c[0], c[1], c[2]);
            let ir = invert_letters(&f[b..d]);
            let il = invert_letters(&f[d..]);
            Face::from_letters([&f[..a], &f[a..b], &il, &ir]).unwrap()
        };
        AnnularDiagram::single_layer(vec![face(), face()])
    }
}

/// A certificate to be mutated.
#[derive(Debug, Clone)]
pub enum Subject {
    Diagram(Certificate),
    Trace(TraceCertificate),
}

#[derive(Debug, Clone, Serialize)]
pub struct MutationOutcome {
    pub description: String,
    pub rejected: bool,
}

fn diagram_rejected(c: &Certificate) -> bool {
    !matches!(validate(c), Ok(rep) if rep.is_valid())
}

fn json_rejected(j: &CertificateJson) -> std::result::Result<bool, Certificate> {
    match Certificate::from_json(j) {
        Ok(c) => Ok(diagram_rejected(&c)),
        Err(_) => Ok(true),
    }
}

fn flip(l: Letter) -> Letter {
    l.inv()
}

fn other_slope<R: Rng>(rng: &mut R, x: Rational) -> Rational {
    loop {
        let y = gen::slope(rng, 30);
        if y != x {
            return y;
        }
    }
}

/// One single-field mutation of a diagram certificate, or `None` if the draw was a no-op.
fn mutate_diagram<R: Rng>(c: &Certificate, rng: &mut R) -> Option<MutationOutcome> {
    let d = &c.diagram;
    let has_faces = !d.layers.is_empty();
    let kind = rng.gen_range(0..9);
    let pick_arc = |rng: &mut R| {
        let j = rng.gen_range(0..d.layers.len());
        let i = rng.gen_range(0..d.t());
        (j, i, rng.gen_range(0..4))
    };
    match kind {
        0 | 1 if has_faces => {
            let (j, i, slot) = pick_arc(rng);
            let mut m = c.clone();
            let arc = &mut m.diagram.layers[j].faces[i].arcs[slot];
            let mut w = arc.letters().to_vec();
            let at = rng.gen_range(0..w.len());
            w[at] = flip(w[at]);
            *arc = AltWord::new(w).ok()?;
            Some(MutationOutcome { description: format!("flip letter {at} of layer {j} face {i} arc {slot}"), rejected: diagram_rejected(&m) })
        }
        2 if has_faces => {
            let (j, i, slot) = pick_arc(rng);
            let mut m = c.clone();
            m.diagram.layers[j].faces[i].arcs[slot] = AltWord::new(Vec::new()).ok()?;
            Some(MutationOutcome { description: format!("delete layer {j} face {i} arc {slot}"), rejected: diagram_rejected(&m) })
        }
        3 => {
            let mut m = c.clone();
            if d.gluing_offsets.is_empty() {
                m.diagram.gluing_offsets.push(rng.gen_range(0..2 * d.t().max(1)));
                return Some(MutationOutcome { description: "add a gluing offset".into(), rejected: diagram_rejected(&m) });
            }
            let g = rng.gen_range(0..d.gluing_offsets.len());
            let two_t = 2 * d.t();
            m.diagram.gluing_offsets[g] = (d.gluing_offsets[g] + rng.gen_range(1..two_t.max(2))) % two_t.max(1);
            (m != *c).then(|| MutationOutcome { description: format!("perturb gluing offset {g}"), rejected: diagram_rejected(&m) })
        }
        4 => {
            let mut m = c.clone();
            let mut g = c.conjugator.clone().unwrap_or_default();
            if g.is_empty() || rng.gen() {
                g.push(Letter::new(if rng.gen() { Base::A } else { Base::B }, true));
            } else {
                let at = rng.gen_range(0..g.len());
                g[at] = flip(g[at]);
            }
            m.conjugator = Some(g);
            (m != *c).then(|| MutationOutcome { description: "edit the conjugator".into(), rejected: diagram_rejected(&m) })
        }
        5..=7 if has_faces => {
            let mut j = c.to_json().ok()?;
            let (lj, fi, slot) = pick_arc(rng);
            let arc = &mut j.layers[lj].faces[fi].arcs[slot];
            let n = 2 * c.r.den() as usize;
            let description = match kind {
                5 => {
                    arc.offset = (arc.offset + rng.gen_range(1..n)) % n;
                    format!("shift the offset of layer {lj} face {fi} arc {slot}")
                }
                6 => {
                    arc.len = if arc.len > 1 && rng.gen() { arc.len - 1 } else { arc.len + 1 };
                    format!("change the length of layer {lj} face {fi} arc {slot}")
                }
                _ => {
                    arc.inverse = !arc.inverse;
                    format!("toggle the orientation of layer {lj} face {fi} arc {slot}")
                }
            };
            match Certificate::from_json(&j) {
                Ok(back) if back == *c => None,
                _ => Some(MutationOutcome { description, rejected: json_rejected(&j).unwrap_or(false) }),
            }
        }
        _ => {
            let mut j = c.to_json().ok()?;
            let field = rng.gen_range(0..3);
            let description = match field {
                0 => {
                    j.slope = other_slope(rng, c.r).to_string();
                    "change the relator slope".to_string()
                }
                k => {
                    let old = if k == 1 { c.s } else { c.s2 };
                    j.loops[k - 1] = other_slope(rng, old).to_string();
                    format!("change loop slope {k}")
                }
            };
            Some(MutationOutcome { description, rejected: json_rejected(&j).unwrap_or(false) })
        }
    }
}

fn trace_rejected(c: &TraceCertificate) -> bool {
    !matches!(verify_trace_certificate(c), Ok(check) if check.is_valid())
}

fn mutate_trace<R: Rng>(c: &TraceCertificate, rng: &mut R) -> Option<MutationOutcome> {
    let mut m = c.clone();
    let description = match rng.gen_range(0..5) {
        0 => {
            let mut coeffs = c.riley_factor.coeffs().to_vec();
            let at = rng.gen_range(0..coeffs.len());
            coeffs[at] += if rng.gen() { 1 } else { -1 };
            m.riley_factor = IntPoly::new(coeffs);
            format!("change coefficient {at} of the factor")
        }
        1 => {
            let at = rng.gen_range(0..=c.diff.len());
            if at == c.diff.len() {
                m.diff.push(BigRational::one());
            } else {
                m.diff[at] += BigRational::one();
            }
            while m.diff.last().is_some_and(|x| x.is_zero()) {
                m.diff.pop();
            }
            m.nonzero = m.diff.iter().any(|x| !x.is_zero());
            format!("change coefficient {at} of the residue")
        }
        2 => {
            m.s = other_slope(rng, c.s);
            format!("change the first loop to {}", m.s)
        }
        3 => {
            m.s2 = other_slope(rng, c.s2);
            format!("change the second loop to {}", m.s2)
        }
        _ => {
            m.r = other_slope(rng, c.r);
            format!("change the relator slope to {}", m.r)
        }
    };
    if m == *c {
        return None;
    }
    let rejected = trace_rejected(&m);
    // A new slope can turn the record into a sound proof of another true statement
    // (small factors such as y + 1 divide many Riley polynomials); that is not a corruption.
    if !rejected && m.riley_factor == c.riley_factor && m.diff == c.diff && proves_true_claim(&m) {
        return None;
    }
    Some(MutationOutcome { description, rejected })
}

fn proves_true_claim(c: &TraceCertificate) -> bool {
    homotopy_classify(c.r, c.s, c.s2).is_ok_and(|rep| !rep.verdict.is_homotopic())
}

/// Draws random single-field mutations until one changes the certificate.
pub fn mutate<R: Rng>(subject: &Subject, rng: &mut R) -> MutationOutcome {
    loop {
        let out = match subject {
            Subject::Diagram(c) => mutate_diagram(c, rng),
            Subject::Trace(c) => mutate_trace(c, rng),
        };
        if let Some(o) = out {
            return o;
        }
    }
}

/// The diagram certificates of the two positive cases.
pub fn positive_certificates() -> Result<&'static [Certificate]> {
    static CERTS: OnceLock<std::result::Result<Vec<Certificate>, Error>> = OnceLock::new();
    let certs = CERTS.get_or_init(|| {
        let cases = [(q(1, 3), q(3, 4), q(3, 5)), (q(3, 8), q(1, 6), q(3, 10))];
        cases
            .into_iter()
            .map(|(r, s, s2)| {
                search_certificate(r, s, s2, Bounds::default())?
                    .ok_or_else(|| Error::Invariant(format!("no certificate for ({r}, {s}, {s2})")))
            })
            .collect()
    });
    certs.as_deref().map_err(Clone::clone)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Slopes,
    Words,
    Tseq,
    Classify,
    Diagrams,
    Riley,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Slopes, Suite::Words, Suite::Tseq, Suite::Classify, Suite::Diagrams, Suite::Riley];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Slopes => "slopes",
            Suite::Words => "words",
            Suite::Tseq => "tseq",
            Suite::Classify => "classify",
            Suite::Diagrams => "diagrams",
            Suite::Riley => "riley",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}; expected one of slopes, words, tseq, classify, diagrams, riley")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub suite: Suite,
    pub name: &'static str,
    /// Number of applicable inputs asked for.
    pub target: usize,
    /// Inputs that met the property's hypothesis.
    pub checked: usize,
    pub skipped: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked == self.target
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub cases: usize,
    pub properties: Vec<PropertyResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }
}

type Draw = Box<dyn FnMut(&mut ChaCha8Rng) -> Check>;

fn properties(suite: Suite) -> Result<Vec<(&'static str, usize, Draw)>> {
    use props::*;
    let full = usize::MAX;
    let mut out: Vec<(&'static str, usize, Draw)> = Vec::new();
    macro_rules! prop {
        ($name:expr, $cap:expr, $body:expr) => {
            out.push(($name, $cap, Box::new($body)))
        };
    }
    match suite {
        Suite::Slopes => {
            prop!("cf_round_trip", full, |g| cf_round_trip(gen::slope(g, 500)));
            prop!("farey_law", full, |g| farey_law(gen::slope(g, 500)));
            prop!("taxonomy", full, |g| taxonomy(gen::slope(g, 500)));
            prop!("mobius_coherence", full, |g| mobius_coherence(gen::general_slope(g)));
            prop!("mirror_farey", full, |g| mirror_farey(gen::slope(g, 500)));
            prop!("domain_transport", full, |g| {
                let r = gen::general_slope(g);
                let Some(ReductionType::A(m)) = classify_slope(r).ok().and_then(|c| c.reduction_type()) else { return Ok(false) };
                domain_transport(r, gen::shaped_loop(g, ReductionType::A(m), 300))
            });
        }
        Suite::Words => {
            prop!("relator_length", full, |g| relator_length(gen::slope(g, 200)));
            prop!("cs_two_term", full, |g| cs_two_term(g.gen_range(2..=8), g.gen_range(2..=8)));
            prop!("cs_three_term", full, |g| cs_three_term(g.gen_range(2..=8), g.gen_range(2..=8)));
            prop!("four_block", full, |g| four_block(gen::slope(g, 300)));
            prop!("first_coefficient", full, |g| first_coefficient(gen::slope(g, 300)));
            prop!("domain_exclusion", full, |g| {
                let r = gen::general_slope(g);
                match gen::in_domain_slope(g, r, 300) {
                    Some(s) => domain_exclusion(r, s),
                    None => Ok(false),
                }
            });
            prop!("mirror_law", full, |g| mirror_law(gen::slope(g, 200)));
            prop!("not_three_pieces", full, |g| not_three_pieces(gen::slope(g, 40)));
        }
        Suite::Tseq => {
            prop!("inverse_law", full, |g| {
                let len = g.gen_range(1..=8);
                let terms: Vec<u64> = (0..len).map(|_| g.gen_range(1..=6)).collect();
                let ty = if g.gen() { TType::Type1 } else { TType::Type2 };
                inverse_law(&terms, TSpec::new(g.gen_range(2..=5), ty).unwrap())
            });
            prop!("reduction_identity_slope", full, |g| reduction_identity_slope(gen::general_slope(g)));
            prop!("reduction_identity_loop", full, |g| {
                let ty = if g.gen() { ReductionType::A(g.gen_range(2..=5)) } else { ReductionType::B(g.gen_range(2..=5)) };
                reduction_identity_loop(gen::shaped_loop(g, ty, 300), ty)
            });
        }
        Suite::Classify => {
            let triple = |g: &mut ChaCha8Rng| {
                let r = gen::slope(g, 40);
                let s = gen::in_domain_slope(g, r, 40)?;
                let s2 = gen::in_domain_slope(g, r, 40)?;
                Some((r, s, s2))
            };
            prop!("symmetry", full, move |g| triple(g).map_or(Ok(false), |(r, s, s2)| classify_symmetry(r, s, s2)));
            prop!("mirror_equivariance", full, move |g| triple(g).map_or(Ok(false), |(r, s, s2)| classify_mirror(r, s, s2)));
            prop!("torus_relation", full, |g| {
                let p = g.gen_range(2..=6);
                let r = q(1, p);
                // Pair a random q/p1 with its torus partner half of the time.
                let Some(s) = gen::in_domain_slope(g, r, 60) else { return Ok(false) };
                let partner = s.num() * p > s.den() && g.gen();
                let s2 = if partner {
                    match Rational::new(s.num(), s.num() * p - s.den()) {
                        Ok(x) if x.den() == s.num() * p - s.den() && x.in_open_unit() => x,
                        _ => return Ok(false),
                    }
                } else {
                    match gen::in_domain_slope(g, r, 60) {
                        Some(x) => x,
                        None => return Ok(false),
                    }
                };
                torus_relation(p, s, s2)
            });
        }
        Suite::Diagrams => {
            let certs = positive_certificates()?;
            let subjects: Vec<Certificate> = certs.to_vec();
            let s1 = subjects.clone();
            prop!("mutation_kill", full, move |g| {
                let c = s1.choose(g).unwrap();
                let m = mutate(&Subject::Diagram(c.clone()), g);
                ensure(m.rejected, || format!("accepted after: {}", m.description))
            });
            let s2 = subjects.clone();
            prop!("json_round_trip", full, move |g| json_round_trip(s2.choose(g).unwrap()));
            prop!("mixing_law", full, move |g| mixing_law(subjects.choose(g).unwrap()));
            prop!("bookkeeping", full, |g| {
                let r = [q(1, 3), q(2, 5), q(3, 8), q(5, 12)][g.gen_range(0..4)];
                bookkeeping(&gen::random_ring(g, r))
            });
            prop!("reglue_soundness", full, |g| {
                let r = [q(2, 5), q(3, 7), q(5, 12)][g.gen_range(0..3)];
                reglue_soundness(&gen::random_ring(g, r))
            });
            let mut rings: Vec<(Rational, AnnularDiagram)> = Vec::new();
            for r in [q(5, 12), q(7, 17), q(9, 22)] {
                rings.extend(synthetic_rings(r, 40)?.into_iter().map(|d| (r, d)));
            }
            prop!("t_identities", full, move |g| {
                let (r, d) = rings.choose(g).unwrap();
                t_identities(d, *r)
            });
        }
        Suite::Riley => {
            let trace = crate::riley::nonconjugacy_certificate(q(5, 12), q(2, 5), q(3, 7))?
                .ok_or_else(|| Error::Invariant("no trace certificate for (5/12, 2/5, 3/7)".into()))?;
            prop!("trace_mutation_kill", full, move |g| {
                let m = mutate(&Subject::Trace(trace.clone()), g);
                ensure(m.rejected, || format!("accepted after: {}", m.description))
            });
            prop!("trace_invariance", full, |g| trace_invariance(&gen::word(g, 12), &gen::word(g, 4)));
            prop!("homomorphism", 50, |g| homomorphism(gen::slope(g, 60)));
            prop!("mirror_degree", 100, |g| mirror_degree(gen::slope(g, 40)));
            prop!("coherence", full, |g| {
                if g.gen_ratio(1, 5) {
                    let (s, s2) = [(q(1, 6), q(3, 10)), (q(3, 4), q(5, 12))][g.gen_range(0..2)];
                    return coherence(q(3, 8), s, s2);
                }
                let p = g.gen_range(3..=6);
                let Some(s) = gen::in_domain_slope(g, q(1, p), 60) else { return Ok(false) };
                let Some(den) = (s.num() * p).checked_sub(s.den()).filter(|&d| d > s.num()) else { return Ok(false) };
                match Rational::new(s.num(), den) {
                    Ok(s2) if s2.den() == den => coherence(q(1, p), s, s2),
                    _ => Ok(false),
                }
            });
        }
    }
    Ok(out)
}

const MAX_DRAWS_PER_CASE: usize = 50;

/// Runs every property of `suite` until `cases` random inputs met its hypothesis (fewer
/// where the property caps its count), seeding a fresh stream per property. A property
/// passes only if it reached its target without failures.
pub fn run_suite(suite: Suite, cases: usize, seed: u64) -> Result<SelftestReport> {
    let mut results = Vec::new();
    for (k, (name, cap, mut draw)) in properties(suite)?.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((suite as u64) << 32) ^ k as u64);
        let mut res = PropertyResult { suite, name, target: cases.min(cap), checked: 0, skipped: 0, failures: 0, first_failure: None };
        let target = cases.min(cap);
        // Draw until `target` inputs met the hypothesis, giving up after `MAX_DRAWS_PER_CASE` times as many.
        for _ in 0..target * MAX_DRAWS_PER_CASE {
            if res.checked == target {
                break;
            }
            match draw(&mut rng) {
                Ok(true) => res.checked += 1,
                Ok(false) => res.skipped += 1,
                Err(msg) => {
                    res.checked += 1;
                    res.failures += 1;
                    res.first_failure.get_or_insert(msg);
                }
            }
        }
        results.push(res);
    }
    Ok(SelftestReport { seed, cases, properties: results })
}

pub fn run_suites(suites: &[Suite], cases: usize, seed: u64) -> Result<SelftestReport> {
    let mut all = SelftestReport { seed, cases, properties: Vec::new() };
    for &s in suites {
        all.properties.extend(run_suite(s, cases, seed)?.properties);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for suite in [Suite::Slopes, Suite::Words, Suite::Tseq, Suite::Classify] {
            let rep = run_suite(suite, 40, 7).unwrap();
            for p in &rep.properties {
                assert!(p.failures == 0, "{}::{}: {:?}", suite, p.name, p.first_failure);
            }
        }
    }

    #[test]
    fn suite_names() {
        assert_eq!("tseq".parse::<Suite>().unwrap(), Suite::Tseq);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn mutations_are_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = positive_certificates().unwrap()[0].clone();
        for _ in 0..50 {
            let m = mutate(&Subject::Diagram(c.clone()), &mut rng);
            assert!(m.rejected, "{}", m.description);
        }
        let t = crate::riley::nonconjugacy_certificate(q(5, 12), q(2, 5), q(3, 7)).unwrap().unwrap();
        for _ in 0..20 {
            let m = mutate(&Subject::Trace(t.clone()), &mut rng);
            assert!(m.rejected, "{} {:?}", m.description, t.riley_factor);
        }
    }

    #[test]
    fn reglue_property_moves_something() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let moved = (0..200).filter(|_| props::reglue_soundness(&gen::random_ring(&mut rng, q(2, 5))).unwrap()).count();
        assert!(moved > 0);
    }
}
