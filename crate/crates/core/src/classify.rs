//! Decision tables for homotopy, peripherality and primitivity of the loops `α_s`.
//!
//! The tables are stated for `0 < r <= 1/2`; larger `r` are handled through the mirror
//! homeomorphism `(r, s, s') ↦ (1 − r, 1 − s, 1 − s')`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::rational::Rational;
use crate::slopes::{classify_slope, farey_parents, in_domain, SlopeClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HomotopicRule {
    TorusFamily,
    WhiteheadPair,
    Reflexive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotHomotopicRule {
    /// `r` is outside the five families treated by the earlier tables.
    MainTheorem,
    /// `r` is `1/n`, `[2,n]`, `[n,2]`, `[2,1,n]` or `[n,1,2]`.
    SpecialCaseTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HomotopyVerdict {
    Homotopic(HomotopicRule),
    NotHomotopic(NotHomotopicRule),
}

impl HomotopyVerdict {
    pub fn is_homotopic(self) -> bool {
        matches!(self, HomotopyVerdict::Homotopic(_))
    }
}

impl fmt::Display for HomotopyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyVerdict::Homotopic(HomotopicRule::TorusFamily) => write!(f, "Homotopic (torus family)"),
            HomotopyVerdict::Homotopic(HomotopicRule::WhiteheadPair) => write!(f, "Homotopic (Whitehead pair)"),
            HomotopyVerdict::Homotopic(HomotopicRule::Reflexive) => write!(f, "Homotopic (reflexive)"),
            HomotopyVerdict::NotHomotopic(NotHomotopicRule::MainTheorem) => write!(f, "Not homotopic (main theorem)"),
            HomotopyVerdict::NotHomotopic(NotHomotopicRule::SpecialCaseTable) => {
                write!(f, "Not homotopic (special-case table)")
            }
        }
    }
}

/// `(q, p1, p2)` with `s = q/p1`, `s' = q/p2` and `p1 + p2 = q·p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TorusWitness {
    pub q: u64,
    pub p1: u64,
    pub p2: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// True when the inputs were mirrored to bring `r` into `(0, 1/2]`.
    pub mirrored: bool,
    /// The slopes the table was evaluated on (after mirroring).
    pub r: Rational,
    pub loops: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusWitness>,
    /// Loops lying on an endpoint `r1` or `r2` of the admissible intervals.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub endpoints: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyReport {
    pub verdict: HomotopyVerdict,
    pub witness: Witness,
}

impl HomotopyVerdict {
    /// Snake-case name of the rule, as used in JSON output.
    pub fn rule_name(self) -> &'static str {
        match self {
            HomotopyVerdict::Homotopic(HomotopicRule::TorusFamily) => "torus_family",
            HomotopyVerdict::Homotopic(HomotopicRule::WhiteheadPair) => "whitehead_pair",
            HomotopyVerdict::Homotopic(HomotopicRule::Reflexive) => "reflexive",
            HomotopyVerdict::NotHomotopic(NotHomotopicRule::MainTheorem) => "main_theorem",
            HomotopyVerdict::NotHomotopic(NotHomotopicRule::SpecialCaseTable) => "special_case_table",
        }
    }
}

impl Serialize for HomotopyReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            verdict: &'static str,
            rule: &'static str,
            witness: &'a Witness,
        }
        let verdict = if self.verdict.is_homotopic() { "homotopic" } else { "not_homotopic" };
        Out {
            verdict,
            rule: self.verdict.rule_name(),
            witness: &self.witness,
        }
        .serialize(s)
    }
}

fn q(n: u64, d: u64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

/// Brings `r` into `(0, 1/2]`, mirroring the loops alongside it.
fn normalize(r: Rational, loops: &[Rational]) -> Result<(bool, Rational, Vec<Rational>)> {
    if !r.in_open_unit() {
        return domain(format!("r = {r} is not in (0,1)"));
    }
    for &s in loops {
        if !s.in_open_unit() {
            return domain(format!("loop slope {s} is not in (0,1)"));
        }
        if !in_domain(r, s)? {
            let p = farey_parents(r)?;
            return domain(format!(
                "loop slope {s} is outside I1({r}) ∪ I2({r}) = [0, {}] ∪ [{}, 1]",
                p.r1, p.r2
            ));
        }
    }
    if r <= Rational::HALF {
        return Ok((false, r, loops.to_vec()));
    }
    let mirrored: Result<Vec<_>> = loops.iter().map(|s| s.one_minus()).collect();
    Ok((true, r.one_minus()?, mirrored?))
}

fn endpoints(r: Rational, loops: &[Rational]) -> Result<Vec<Rational>> {
    let p = farey_parents(r)?;
    Ok(loops.iter().copied().filter(|&s| s == p.r1 || s == p.r2).collect())
}

/// True iff `r <= 1/2` belongs to one of the families `1/n`, `[2,n]`, `[n,2]`, `[2,1,n]`, `[n,1,2]`.
fn in_special_table(class: &SlopeClass) -> bool {
    match *class {
        SlopeClass::TorusSpecial { .. } => true,
        SlopeClass::TwoTermSpecial { m, n } | SlopeClass::ThreeTermSpecial { m, n } => m == 2 || n == 2,
        _ => false,
    }
}

/// Homotopy of `α_s` and `α_{s'}` in the complement of `K(r)`.
pub fn homotopy_classify(r: Rational, s: Rational, s2: Rational) -> Result<HomotopyReport> {
    let (mirrored, r0, loops) = normalize(r, &[s, s2])?;
    let (a, b) = (loops[0], loops[1]);
    let mut witness = Witness {
        mirrored,
        r: r0,
        loops: loops.clone(),
        torus: None,
        endpoints: endpoints(r0, &loops)?,
    };
    let verdict = if a == b {
        HomotopyVerdict::Homotopic(HomotopicRule::Reflexive)
    } else if r0.num() == 1 && a.num() == b.num() && a.den() + b.den() == a.num() * r0.den() {
        witness.torus = Some(TorusWitness {
            q: a.num(),
            p1: a.den(),
            p2: b.den(),
        });
        HomotopyVerdict::Homotopic(HomotopicRule::TorusFamily)
    } else if r0 == q(3, 8) && is_whitehead_pair(a, b) {
        HomotopyVerdict::Homotopic(HomotopicRule::WhiteheadPair)
    } else if in_special_table(&classify_slope(r0)?) {
        HomotopyVerdict::NotHomotopic(NotHomotopicRule::SpecialCaseTable)
    } else {
        HomotopyVerdict::NotHomotopic(NotHomotopicRule::MainTheorem)
    };
    Ok(HomotopyReport { verdict, witness })
}

fn is_whitehead_pair(a: Rational, b: Rational) -> bool {
    let pair = |x: Rational, y: Rational| (a == x && b == y) || (a == y && b == x);
    pair(q(1, 6), q(3, 10)) || pair(q(3, 4), q(5, 12))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PeripheralVerdict {
    /// One of the three listed cases; `n` is the family parameter for cases 2 and 3.
    Peripheral {
        case: u8,
        #[serde(skip_serializing_if = "Option::is_none")]
        n: Option<u64>,
    },
    NotPeripheral,
}

impl fmt::Display for PeripheralVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeripheralVerdict::Peripheral { case, n: Some(n) } => write!(f, "Peripheral (case {case}, n = {n})"),
            PeripheralVerdict::Peripheral { case, n: None } => write!(f, "Peripheral (case {case})"),
            PeripheralVerdict::NotPeripheral => write!(f, "Not peripheral"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PrimitivityVerdict {
    Primitive,
    ProperPower { exponent: u8 },
}

impl fmt::Display for PrimitivityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimitivityVerdict::Primitive => write!(f, "Primitive"),
            PrimitivityVerdict::ProperPower { exponent } => write!(f, "Proper power (exponent {exponent})"),
        }
    }
}

/// A verdict of the single-loop tables together with how it was reached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopReport<V> {
    #[serde(flatten)]
    pub verdict: V,
    pub witness: Witness,
}

fn single_loop_setup(r: Rational, s: Rational) -> Result<Witness> {
    let (mirrored, r0, loops) = normalize(r, &[s])?;
    if r0.num() == 1 {
        return Err(Error::Hypothesis(format!(
            "r = {r0} is of the form 1/n; the peripherality and primitivity tables assume r ≠ 1/n"
        )));
    }
    Ok(Witness {
        mirrored,
        r: r0,
        endpoints: endpoints(r0, &loops)?,
        loops,
        torus: None,
    })
}

pub fn peripheral_classify(r: Rational, s: Rational) -> Result<LoopReport<PeripheralVerdict>> {
    let witness = single_loop_setup(r, s)?;
    let (r0, s0) = (witness.r, witness.loops[0]);
    let (a, p) = (r0.num(), r0.den());
    let verdict = if r0 == q(2, 5) && (s0 == q(1, 5) || s0 == q(3, 5)) {
        PeripheralVerdict::Peripheral { case: 1, n: None }
    } else if p % 2 == 1 && a == (p - 1) / 2 && a >= 3 && s0 == q(a + 1, p) {
        PeripheralVerdict::Peripheral { case: 2, n: Some(a) }
    } else if p % 2 == 1 && a == 2 && p >= 7 && s0 == q(1, p) {
        PeripheralVerdict::Peripheral {
            case: 3,
            n: Some((p - 1) / 2),
        }
    } else {
        PeripheralVerdict::NotPeripheral
    };
    Ok(LoopReport { verdict, witness })
}

pub fn primitivity_classify(r: Rational, s: Rational) -> Result<LoopReport<PrimitivityVerdict>> {
    let witness = single_loop_setup(r, s)?;
    let (r0, s0) = (witness.r, witness.loops[0]);
    let verdict = if r0 == q(2, 5) && (s0 == q(2, 7) || s0 == q(3, 4)) {
        PrimitivityVerdict::ProperPower { exponent: 3 }
    } else if (r0 == q(3, 7) && s0 == q(2, 7)) || (r0 == q(2, 7) && s0 == q(3, 7)) {
        PrimitivityVerdict::ProperPower { exponent: 2 }
    } else {
        PrimitivityVerdict::Primitive
    };
    Ok(LoopReport { verdict, witness })
}
