use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};
use twobridge::classify::{homotopy_classify, peripheral_classify, primitivity_classify, PeripheralVerdict, PrimitivityVerdict, Witness};
use twobridge::diagrams::{search_certificate, validate, Bounds, Certificate};
use twobridge::error::Error;
use twobridge::rational::Rational;
use twobridge::riley::{nonconjugacy_certificate, verify_trace_certificate, TraceCertificate};
use twobridge::selftest::{run_suites, Suite};
use twobridge::slopes::{cf_expand, classify_slope, farey_parents, reduce_loop_slope, reduce_slope};
use twobridge::tseq::{ct_seq, verify_reduction_identity, TSpec};
use twobridge::words::{cs_of_slope, relator_word, split_s1_s2};

use crate::{Command, Method, Status};

type Out<'a> = &'a mut dyn Write;

/// A command failure: the status to exit with and a message.
struct Failure(Status, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = if matches!(e, Error::Invariant(_)) { Status::Internal } else { Status::Usage };
        Failure(status, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure(Status::Usage, e.to_string())
    }
}

type Res = Result<Status, Failure>;

fn emit_json(out: Out, v: &impl Serialize) -> std::io::Result<()> {
    let text = serde_json::to_string(v).map_err(std::io::Error::other)?;
    writeln!(out, "{text}")
}

pub fn run(cmd: &Command, json: bool, out: Out) -> Status {
    let res = match cmd {
        Command::Classify { r, s, s2 } => classify(*r, *s, *s2, json, out),
        Command::Peripheral { r, s } => peripheral(*r, *s, json, out),
        Command::Primitive { r, s } => primitive(*r, *s, json, out),
        Command::Inspect { r } => inspect(*r, json, out),
        Command::Reduce { r, loop_slope, steps } => reduce(*r, *loop_slope, *steps, json, out),
        Command::Certify { r, s, s2, method, max_layers, max_faces, max_arc_len, output } => {
            let bounds = Bounds { max_layers: *max_layers, max_faces: *max_faces, max_arc_len: *max_arc_len };
            certify(*r, *s, *s2, *method, bounds, output.as_deref(), json, out)
        }
        Command::Verify { file } => verify(file, json, out),
        Command::Selftest { suite, cases, seed } => selftest(suite, *cases, *seed, json, out),
    };
    match res {
        Ok(status) => status,
        Err(Failure(status, msg)) => {
            if json {
                let kind = if status == Status::Internal { "internal" } else { "usage" };
                let _ = emit_json(out, &json!({ "error": { "kind": kind, "message": msg } }));
            } else {
                eprintln!("error: {msg}");
            }
            status
        }
    }
}

fn witness_line(w: &Witness) -> String {
    let loops: Vec<String> = w.loops.iter().map(|s| s.to_string()).collect();
    let mut line = format!("witness: r = {}, loops {}", w.r, loops.join(", "));
    if w.mirrored {
        line.push_str(" (mirrored)");
    }
    if let Some(t) = &w.torus {
        line.push_str(&format!("; q = {}, p1 = {}, p2 = {}", t.q, t.p1, t.p2));
    }
    if !w.endpoints.is_empty() {
        let e: Vec<String> = w.endpoints.iter().map(|s| s.to_string()).collect();
        line.push_str(&format!("; on interval endpoints: {}", e.join(", ")));
    }
    line
}

fn classify(r: Rational, s: Rational, s2: Rational, json: bool, out: Out) -> Res {
    let rep = homotopy_classify(r, s, s2)?;
    if json {
        emit_json(out, &rep)?;
    } else {
        writeln!(out, "{}", rep.verdict)?;
        writeln!(out, "{}", witness_line(&rep.witness))?;
    }
    Ok(if rep.verdict.is_homotopic() { Status::Ok } else { Status::Negative })
}

fn peripheral(r: Rational, s: Rational, json: bool, out: Out) -> Res {
    let rep = peripheral_classify(r, s)?;
    if json {
        emit_json(out, &rep)?;
    } else {
        writeln!(out, "{}", rep.verdict)?;
        writeln!(out, "{}", witness_line(&rep.witness))?;
    }
    Ok(if rep.verdict == PeripheralVerdict::NotPeripheral { Status::Negative } else { Status::Ok })
}

fn primitive(r: Rational, s: Rational, json: bool, out: Out) -> Res {
    let rep = primitivity_classify(r, s)?;
    if json {
        emit_json(out, &rep)?;
    } else {
        writeln!(out, "{}", rep.verdict)?;
        writeln!(out, "{}", witness_line(&rep.witness))?;
    }
    Ok(if rep.verdict == PrimitivityVerdict::Primitive { Status::Ok } else { Status::Negative })
}

fn inspect(r: Rational, json: bool, out: Out) -> Res {
    let cf = cf_expand(r)?;
    let parents = farey_parents(r)?;
    let class = classify_slope(r)?;
    let u = relator_word(r)?;
    let cs = cs_of_slope(r)?;
    let split = match split_s1_s2(r) {
        Ok(sp) => Some(sp),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e.into()),
    };
    if json {
        let mut v = json!({
            "slope": r,
            "cf": cf.coeffs(),
            "parents": [parents.r1, parents.r2],
            "i1": [Rational::ZERO, parents.r1],
            "i2": [parents.r2, Rational::ONE],
            "class": class,
            "relator": u,
            "cs": cs.terms(),
        });
        if let Some((s1, s2)) = &split {
            v["s1"] = json!(s1.0);
            v["s2"] = json!(s2.0);
        }
        emit_json(out, &v)?;
    } else {
        writeln!(out, "slope    {r}")?;
        writeln!(out, "CF       {cf}")?;
        writeln!(out, "parents  {}, {}", parents.r1, parents.r2)?;
        writeln!(out, "I1 ∪ I2  [0, {}] ∪ [{}, 1]", parents.r1, parents.r2)?;
        writeln!(out, "class    {class}")?;
        writeln!(out, "u_r      {u}")?;
        writeln!(out, "CS       {cs}")?;
        if let Some((s1, s2)) = &split {
            writeln!(out, "S1       {s1}")?;
            writeln!(out, "S2       {s2}")?;
        }
    }
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct Step {
    from: Rational,
    to: Rational,
    /// `mirror`, or the reduction shape such as `A(2)`.
    #[serde(rename = "type")]
    ty: String,
    cf: String,
    /// `CT(from) = CS(to)`; always true for a mirror step.
    identity: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    loop_from: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    loop_to: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    loop_identity: Option<bool>,
    /// Why the loop stopped being tracked at this step.
    #[serde(skip_serializing_if = "Option::is_none")]
    loop_note: Option<String>,
}

impl Step {
    fn new(from: Rational, to: Rational, ty: String, identity: bool) -> Result<Step, Failure> {
        Ok(Step {
            cf: format!("{} -> {}", cf_expand(from)?, cf_expand(to)?),
            from,
            to,
            ty,
            identity,
            loop_from: None,
            loop_to: None,
            loop_identity: None,
            loop_note: None,
        })
    }
}

fn reduce(r: Rational, s: Option<Rational>, steps: Option<usize>, json: bool, out: Out) -> Res {
    let mut x = r;
    let mut lp = s;
    let mut chain: Vec<Step> = Vec::new();
    let limit = steps.unwrap_or(usize::MAX);
    let mut reductions = 0;
    loop {
        if x > Rational::HALF {
            let mut step = Step::new(x, x.one_minus()?, "mirror".into(), true)?;
            if let Some(l) = lp {
                step.loop_from = Some(l);
                step.loop_to = Some(l.one_minus()?);
                lp = step.loop_to;
            }
            x = step.to;
            chain.push(step);
        }
        let class = classify_slope(x)?;
        let Some(ty) = class.reduction_type() else { break };
        if reductions == limit {
            break;
        }
        let spec = TSpec::for_reduction(ty)?;
        let next = reduce_slope(x, &class)?;
        let identity = ct_seq(&cs_of_slope(x)?, spec)? == cs_of_slope(next)?;
        let mut step = Step::new(x, next, ty.to_string(), identity)?;
        if let Some(l) = lp {
            step.loop_from = Some(l);
            match reduce_loop_slope(l, ty) {
                Ok(lt) => {
                    step.loop_to = Some(lt);
                    step.loop_identity = Some(verify_reduction_identity(l, spec)?);
                    lp = lt.in_open_unit().then_some(lt);
                    if lp.is_none() {
                        step.loop_note = Some(format!("{lt} is the boundary slope"));
                    }
                }
                Err(_) => {
                    step.loop_note = Some(format!("{l} = {} does not have the {ty} shape", cf_expand(l)?));
                    lp = None;
                }
            }
        }
        chain.push(step);
        reductions += 1;
        x = next;
    }
    let class = classify_slope(x)?;
    let ok = chain.iter().all(|st| st.identity && st.loop_identity != Some(false));
    if json {
        emit_json(
            out,
            &json!({ "slope": r, "steps": chain, "last": x, "last_cf": cf_expand(x)?.coeffs(), "class": class, "identities_hold": ok }),
        )?;
    } else {
        writeln!(out, "start   {r} = {}", cf_expand(r)?)?;
        for st in &chain {
            if st.ty == "mirror" {
                writeln!(out, "mirror  {} -> {}  {}", st.from, st.to, st.cf)?;
            } else {
                let mark = if st.identity { "ok" } else { "FAILED" };
                writeln!(out, "{:<7} {} -> {}  {}  CT({}) = CS({}) {mark}", st.ty, st.from, st.to, st.cf, st.from, st.to)?;
            }
            match (st.loop_from, st.loop_to, st.loop_identity) {
                (Some(a), Some(b), Some(id)) => {
                    writeln!(out, "  loop  {a} -> {b}  CT({a}) = CS({b}) {}", if id { "ok" } else { "FAILED" })?
                }
                (Some(a), Some(b), None) => writeln!(out, "  loop  {a} -> {b}")?,
                _ => {}
            }
            if let Some(note) = &st.loop_note {
                writeln!(out, "  loop no longer tracked: {note}")?;
            }
        }
        writeln!(out, "end     {x} = {} ({class})", cf_expand(x)?)?;
    }
    if !ok {
        return Err(Failure(Status::Internal, "a CT identity failed along the chain".into()));
    }
    Ok(Status::Ok)
}

#[allow(clippy::too_many_arguments)]
fn certify(
    r: Rational,
    s: Rational,
    s2: Rational,
    method: Method,
    bounds: Bounds,
    output: Option<&std::path::Path>,
    json: bool,
    out: Out,
) -> Res {
    let (text, summary) = match method {
        Method::Diagram => match search_certificate(r, s, s2, bounds)? {
            Some(c) => {
                let d = &c.diagram;
                (Some(c.to_json_string()?), {
                    let plural = |n: usize, w: &str| format!("{n} {w}{}", if n == 1 { "" } else { "s" });
                    format!("diagram certificate: {}, {}", plural(d.layers.len(), "layer"), plural(d.face_count(), "face"))
                })
            }
            None => (None, format!("no diagram certificate within {bounds:?}")),
        },
        Method::Trace => match nonconjugacy_certificate(r, s, s2)? {
            Some(c) => {
                let summary = format!("trace certificate: factor {}", c.riley_factor);
                (Some(serde_json::to_string(&c).map_err(|e| Failure(Status::Internal, e.to_string()))?), summary)
            }
            None => (None, "inconclusive: no Riley factor separates the traces".to_string()),
        },
    };
    let Some(text) = text else {
        if json {
            emit_json(out, &json!({ "certificate": Value::Null, "message": summary }))?;
        } else {
            writeln!(out, "{summary}")?;
        }
        return Ok(Status::Negative);
    };
    match output {
        Some(path) => {
            std::fs::write(path, format!("{text}\n"))?;
            if json {
                emit_json(out, &json!({ "written": path.display().to_string(), "message": summary }))?;
            } else {
                writeln!(out, "{summary}; written to {}", path.display())?;
            }
        }
        None => writeln!(out, "{text}")?,
    }
    Ok(Status::Ok)
}

fn verify(file: &std::path::Path, json: bool, out: Out) -> Res {
    let text = std::fs::read_to_string(file)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure(Status::Usage, format!("{}: {e}", file.display())))?;
    let malformed = |e: String| Failure(Status::Usage, format!("malformed certificate: {e}"));
    let (kind, valid, clauses): (&str, bool, Vec<(String, bool, Option<String>)>) = if value.get("riley_factor").is_some() {
        let c: TraceCertificate = serde_json::from_value(value).map_err(|e| malformed(e.to_string()))?;
        let check = verify_trace_certificate(&c)?;
        let clauses = check.clauses().iter().map(|&(n, ok)| (n.to_string(), ok, None)).collect();
        ("trace", check.is_valid(), clauses)
    } else {
        let c = Certificate::from_json_str(&text).map_err(|e| malformed(e.to_string()))?;
        let rep = match validate(&c) {
            Ok(rep) => rep,
            Err(e @ Error::Structural(_)) => return Err(malformed(e.to_string())),
            Err(e) => return Err(e.into()),
        };
        let clauses = rep.clauses.iter().map(|c| (c.clause.to_string(), c.ok, c.detail.clone())).collect();
        ("diagram", rep.is_valid(), clauses)
    };
    if json {
        let list: Vec<Value> = clauses
            .iter()
            .map(|(name, ok, detail)| {
                let mut v = json!({ "clause": name, "ok": ok });
                if let Some(d) = detail {
                    v["detail"] = json!(d);
                }
                v
            })
            .collect();
        emit_json(out, &json!({ "kind": kind, "valid": valid, "clauses": list }))?;
    } else {
        for (name, ok, detail) in &clauses {
            match detail {
                Some(d) => writeln!(out, "{} {name}: {d}", if *ok { "PASS" } else { "FAIL" })?,
                None => writeln!(out, "{} {name}", if *ok { "PASS" } else { "FAIL" })?,
            }
        }
        writeln!(out, "{kind} certificate is {}", if valid { "valid" } else { "invalid" })?;
    }
    Ok(if valid { Status::Ok } else { Status::Negative })
}

fn selftest(suite: &str, cases: usize, seed: u64, json: bool, out: Out) -> Res {
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    if cases == 0 {
        return Err(Failure(Status::Usage, "--cases must be positive".into()));
    }
    let rep = run_suites(&suites, cases, seed)?;
    if json {
        emit_json(out, &rep)?;
    } else {
        for p in &rep.properties {
            let mark = if p.passed() { "PASS" } else { "FAIL" };
            write!(out, "{mark} {}::{} ({} checked, {} skipped)", p.suite, p.name, p.checked, p.skipped)?;
            match &p.first_failure {
                Some(msg) => writeln!(out, ": {} failures, first: {msg}", p.failures)?,
                None => writeln!(out)?,
            }
        }
        writeln!(out, "seed {seed}, {} properties, {}", rep.properties.len(), if rep.passed() { "all passed" } else { "FAILURES" })?;
    }
    Ok(if rep.passed() { Status::Ok } else { Status::Internal })
}
