//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twobridge::classify::{
    homotopy_classify, peripheral_classify, primitivity_classify, HomotopicRule, HomotopyVerdict, PeripheralVerdict,
    PrimitivityVerdict,
};
use twobridge::diagrams::{search_certificate, validate, vertices, Bounds, Certificate, Kind};
use twobridge::rational::Rational;
use twobridge::riley::nonconjugacy_certificate;
use twobridge::selftest::{gen, mutate, positive_certificates, run_suite, Subject, Suite};
use twobridge::slopes::{cf_eval, cf_expand, classify_slope, in_domain, ContFrac, ReductionType};
use twobridge::tseq::{verify_reduction_identity, TSpec};
use twobridge::words::{cs_of_slope, pattern_split_candidates, split_s1_s2, CyclicSSeq};

fn q(n: u64, d: u64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn cf(c: &[u64]) -> Rational {
    cf_eval(&ContFrac::new(c.to_vec()).unwrap()).unwrap()
}

/// Reduced slopes in `(0, 1)` with denominator at most `max_den`.
fn slopes_up_to(max_den: u64) -> Vec<Rational> {
    (2..=max_den).flat_map(|p| (1..p).filter(move |&n| num_integer::gcd(n, p) == 1).map(move |n| q(n, p))).collect()
}

fn in_domain_slopes(r: Rational, max_den: u64) -> Vec<Rational> {
    slopes_up_to(max_den).into_iter().filter(|&s| in_domain(r, s).unwrap()).collect()
}

type Outcome = Result<String, String>;

/// Expected homotopy for distinct in-domain loops: the Whitehead pairs at 3/8, and the
/// torus pairs `q/p1`, `q/p2` with `q/(p1 + p2) = 1/p` at `r = 1/p`.
fn expected_homotopic(r: Rational, s: Rational, t: Rational) -> bool {
    if r == q(3, 8) {
        let set = |a: Rational, b: Rational| (s == a && t == b) || (s == b && t == a);
        return set(q(1, 6), q(3, 10)) || set(q(3, 4), q(5, 12));
    }
    r.num() == 1 && s.num() == t.num() && s.num() * r.den() == s.den() + t.den()
}

fn criterion_1(homotopic: &mut Vec<(Rational, Rational, Rational)>) -> Outcome {
    let mut checked = 0;
    for r in [q(1, 3), q(1, 4), q(1, 5), q(3, 8)] {
        let dom = in_domain_slopes(r, 40);
        for &s in &dom {
            for &t in &dom {
                let v = homotopy_classify(r, s, t).map_err(|e| e.to_string())?.verdict;
                checked += 1;
                if s == t {
                    if v != HomotopyVerdict::Homotopic(HomotopicRule::Reflexive) {
                        return Err(format!("({r}, {s}, {s}) gave {v}"));
                    }
                    continue;
                }
                let want = expected_homotopic(r, s, t);
                if v.is_homotopic() != want {
                    return Err(format!("({r}, {s}, {t}) gave {v}, expected homotopic = {want}"));
                }
                if want {
                    homotopic.push((r, s, t));
                }
            }
        }
    }
    let wp = homotopic.iter().filter(|x| x.0 == q(3, 8)).count();
    if wp != 4 {
        return Err(format!("{wp} ordered Whitehead pairs found at 3/8, expected 4"));
    }
    Ok(format!("{checked} ordered pairs, {} homotopic distinct pairs", homotopic.len()))
}

fn criterion_2() -> Outcome {
    let mut peripheral: Vec<(Rational, Rational, PeripheralVerdict)> = vec![
        (q(2, 5), q(1, 5), PeripheralVerdict::Peripheral { case: 1, n: None }),
        (q(2, 5), q(3, 5), PeripheralVerdict::Peripheral { case: 1, n: None }),
    ];
    let mut primitive: Vec<(Rational, Rational, PrimitivityVerdict)> = vec![
        (q(2, 5), q(2, 7), PrimitivityVerdict::ProperPower { exponent: 3 }),
        (q(2, 5), q(3, 4), PrimitivityVerdict::ProperPower { exponent: 3 }),
        (q(3, 7), q(2, 7), PrimitivityVerdict::ProperPower { exponent: 2 }),
        (q(2, 7), q(3, 7), PrimitivityVerdict::ProperPower { exponent: 2 }),
    ];
    for n in 3..=10u64 {
        let p = 2 * n + 1;
        peripheral.push((q(n, p), q(n + 1, p), PeripheralVerdict::Peripheral { case: 2, n: Some(n) }));
        peripheral.push((q(2, p), q(1, p), PeripheralVerdict::Peripheral { case: 3, n: Some(n) }));
    }
    let mut rs: Vec<Rational> = peripheral.iter().map(|x| x.0).chain(primitive.iter().map(|x| x.0)).collect();
    rs.extend([q(3, 8), q(5, 12), q(8, 21)]);
    rs.sort();
    rs.dedup();
    let mut checked = 0;
    for &r in &rs {
        let mut dom = in_domain_slopes(r, 40);
        dom.extend(peripheral.iter().filter(|x| x.0 == r).map(|x| x.1));
        dom.sort();
        dom.dedup();
        for s in dom {
            let want_p = peripheral.iter().find(|x| x.0 == r && x.1 == s).map_or(PeripheralVerdict::NotPeripheral, |x| x.2);
            let want_q = primitive.iter().find(|x| x.0 == r && x.1 == s).map_or(PrimitivityVerdict::Primitive, |x| x.2);
            let got_p = peripheral_classify(r, s).map_err(|e| format!("peripheral({r}, {s}): {e}"))?.verdict;
            let got_q = primitivity_classify(r, s).map_err(|e| format!("primitive({r}, {s}): {e}"))?.verdict;
            if got_p != want_p || got_q != want_q {
                return Err(format!("({r}, {s}): got {got_p} / {got_q}, expected {want_p} / {want_q}"));
            }
            checked += 1;
        }
    }
    // Every listed case must have been reached by the sweep.
    for (r, s, _) in &peripheral {
        if !in_domain(*r, *s).unwrap() {
            return Err(format!("listed peripheral case ({r}, {s}) is outside the domain"));
        }
    }
    primitive.retain(|(r, s, _)| !in_domain(*r, *s).unwrap());
    if let Some((r, s, _)) = primitive.first() {
        return Err(format!("listed primitivity case ({r}, {s}) is outside the domain"));
    }
    Ok(format!("{checked} (r, s) pairs over {} slopes", rs.len()))
}

fn starts_and_ends(s: &[u64], pat: &[u64]) -> bool {
    s.starts_with(pat) && s.ends_with(pat)
}

fn rep(n: u64, v: u64) -> Vec<u64> {
    vec![v; n as usize]
}

/// The 200 general slopes shared by criteria 3 and 4.
fn general_sample() -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..200).map(|_| gen::general_slope(&mut rng)).collect()
}

fn criterion_3(general: &[Rational]) -> Outcome {
    for m in 2..=8u64 {
        for n in 2..=8u64 {
            for (c, half) in [
                (vec![m, n], [vec![m + 1], rep(n - 1, m)].concat()),
                (vec![m, 1, n], [rep(n, m + 1), vec![m]].concat()),
            ] {
                let r = cf(&c);
                let cs = cs_of_slope(r).map_err(|e| e.to_string())?;
                if cs != CyclicSSeq([half.clone(), half.clone()].concat()) {
                    return Err(format!("CS({r}) = {cs}"));
                }
                let (s1, s2) = split_s1_s2(r).map_err(|e| format!("{r}: {e}"))?;
                let cut = if c.len() == 2 { 1 } else { n as usize };
                if s1.0 != half[..cut] || s2.0 != half[cut..] {
                    return Err(format!("split of {r} is {s1}, {s2}"));
                }
            }
        }
    }
    for &r in general {
        let c = cf_expand(r).unwrap().coeffs().to_vec();
        let (s1, s2) = split_s1_s2(r).map_err(|e| format!("{r}: {e}"))?;
        let cs = cs_of_slope(r).unwrap();
        if CyclicSSeq([s1.0.clone(), s2.0.clone(), s1.0.clone(), s2.0.clone()].concat()) != cs {
            return Err(format!("CS({r}) = {cs} is not <S1,S2,S1,S2> for {s1}, {s2}"));
        }
        let m = c[0];
        let ok = if c[1] >= 2 {
            starts_and_ends(&s1.0, &[vec![m + 1], rep(c[1] - 1, m), vec![m + 1]].concat()) && starts_and_ends(&s2.0, &rep(c[1], m))
        } else {
            starts_and_ends(&s1.0, &rep(c[2] + 1, m + 1)) && starts_and_ends(&s2.0, &[vec![m], rep(c[2], m + 1), vec![m]].concat())
        };
        if !ok {
            return Err(format!("{r} = {:?}: S1 {s1}, S2 {s2} break the begin/end pattern", c));
        }
    }
    let ambiguous = general.iter().filter(|&&r| pattern_split_candidates(r).map_or(0, |c| c.len()) > 1).count();
    Ok(format!(
        "98 special slopes and {} general slopes ({ambiguous} with several pattern-only splits, resolved by the lift)",
        general.len()
    ))
}

fn criterion_4(general: &[Rational]) -> Outcome {
    for &r in general {
        let ty = classify_slope(r).unwrap().reduction_type().unwrap();
        let spec = TSpec::for_reduction(ty).unwrap();
        if !verify_reduction_identity(r, spec).map_err(|e| format!("{r}: {e}"))? {
            return Err(format!("CT({r}) != CS(r̃)"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x100b);
    let mut loops = 0;
    while loops < 500 {
        let r = general[rng.gen_range(0..general.len())];
        let ty: ReductionType = classify_slope(r).unwrap().reduction_type().unwrap();
        let s = gen::shaped_loop(&mut rng, ty, 300);
        if !in_domain(r, s).unwrap() {
            continue;
        }
        let spec = TSpec::for_reduction(ty).unwrap();
        if !verify_reduction_identity(s, spec).map_err(|e| format!("{s}: {e}"))? {
            return Err(format!("CT({s}) != CS(s̃) for {ty} (r = {r})"));
        }
        loops += 1;
    }
    Ok(format!("{} slopes and {loops} loops", general.len()))
}

fn criterion_5(certs: &mut Vec<Certificate>) -> Outcome {
    let mut notes = Vec::new();
    for (r, s, t) in [(q(1, 3), q(3, 4), q(3, 5)), (q(3, 8), q(1, 6), q(3, 10))] {
        let start = Instant::now();
        let c = search_certificate(r, s, t, Bounds::default())
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("no certificate for ({r}, {s}, {t}) within {:?}", Bounds::default()))?;
        let elapsed = start.elapsed();
        if elapsed > Duration::from_secs(300) {
            return Err(format!("({r}, {s}, {t}) took {elapsed:?}"));
        }
        let rep = validate(&c).map_err(|e| e.to_string())?;
        if let Some(f) = rep.first_failure() {
            return Err(format!("({r}, {s}, {t}): validation fails {}", f.clause));
        }
        if !vertices(&c.diagram).map_err(|e| e.to_string())?.iter().any(|v| v.kind == Kind::Mixing) {
            return Err(format!("({r}, {s}, {t}): no mixing vertex"));
        }
        notes.push(format!("({r}, {s}, {t}) {} faces in {:.0?}", c.diagram.face_count(), elapsed));
        certs.push(c);
    }
    Ok(notes.join("; "))
}

/// A fixed sample of 50 non-homotopic pairs, ten per relator slope.
fn negative_sample() -> Vec<(Rational, Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e6567);
    let mut out = Vec::new();
    for r in [q(5, 12), q(8, 21), q(2, 5), q(3, 7), q(3, 8)] {
        let dom = in_domain_slopes(r, 30);
        let mut k = 0;
        while k < 10 {
            let (s, t) = (dom[rng.gen_range(0..dom.len())], dom[rng.gen_range(0..dom.len())]);
            if s != t && !homotopy_classify(r, s, t).unwrap().verdict.is_homotopic() {
                out.push((r, s, t));
                k += 1;
            }
        }
    }
    out
}

fn criterion_6(homotopic: &[(Rational, Rational, Rational)]) -> Outcome {
    let sample = negative_sample();
    let mut some = 0;
    for &(r, s, t) in &sample {
        if nonconjugacy_certificate(r, s, t).map_err(|e| format!("({r}, {s}, {t}): {e}"))?.is_some() {
            some += 1;
        }
    }
    for &(r, s, t) in homotopic {
        if nonconjugacy_certificate(r, s, t).map_err(|e| e.to_string())?.is_some() {
            return Err(format!("homotopic pair ({r}, {s}, {t}) received a separating certificate"));
        }
    }
    let line = format!("{some}/{} negative pairs certified; {} homotopic pairs all None", sample.len(), homotopic.len());
    if some * 10 < sample.len() * 9 {
        return Err(line);
    }
    Ok(line)
}

fn criterion_7(certs: &[Certificate]) -> Outcome {
    let trace = nonconjugacy_certificate(q(5, 12), q(2, 5), q(3, 7)).map_err(|e| e.to_string())?.ok_or("no trace certificate")?;
    let mut subjects: Vec<Subject> = certs.iter().cloned().map(Subject::Diagram).collect();
    subjects.push(Subject::Trace(trace));
    let mut rng = ChaCha8Rng::seed_from_u64(rand::random());
    for i in 0..100 {
        let m = mutate(&subjects[i % subjects.len()], &mut rng);
        if !m.rejected {
            return Err(format!("mutation {i} accepted: {}", m.description));
        }
    }
    Ok("100 of 100 rejected".into())
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    for suite in [Suite::Words, Suite::Tseq, Suite::Diagrams] {
        let seed: u64 = rand::random();
        let rep = run_suite(suite, 1000, seed).map_err(|e| e.to_string())?;
        if let Some(p) = rep.properties.iter().find(|p| !p.passed()) {
            return Err(format!(
                "{suite}::{} with seed {seed}: {} failures of {} checked; {}",
                p.name,
                p.failures,
                p.checked,
                p.first_failure.as_deref().unwrap_or("no applicable inputs")
            ));
        }
        let min = rep.properties.iter().map(|p| p.checked).min().unwrap_or(0);
        notes.push(format!("{suite} seed {seed} ({} properties, min {min} checked)", rep.properties.len()));
    }
    Ok(notes.join("; "))
}

fn report(n: usize, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if let (Ok(msg), Some(limit)) = (&out, limit) {
        if elapsed > limit {
            out = Err(format!("{msg}; took {elapsed:.1?}, limit {limit:?}"));
        }
    }
    match &out {
        Ok(msg) => println!("PASS criterion {n}: {msg} [{elapsed:.1?}]"),
        Err(msg) => println!("FAIL criterion {n}: {msg} [{elapsed:.1?}]"),
    }
    out.is_ok()
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let mut homotopic = Vec::new();
    let mut certs = Vec::new();
    let general = general_sample();
    let mut ok = true;
    ok &= report(1, secs(10), || criterion_1(&mut homotopic));
    ok &= report(2, secs(5), criterion_2);
    ok &= report(3, secs(10), || criterion_3(&general));
    ok &= report(4, secs(20), || criterion_4(&general));
    // Each search has its own 5 minute limit inside the criterion.
    ok &= report(5, None, || criterion_5(&mut certs));
    ok &= report(6, secs(60), || criterion_6(&homotopic));
    if certs.is_empty() {
        certs = positive_certificates().map(|c| c.to_vec()).unwrap_or_default();
    }
    ok &= report(7, secs(10), || criterion_7(&certs));
    ok &= report(8, None, criterion_8);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
