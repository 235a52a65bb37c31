//! Parabolic representations `a ↦ A`, `b ↦ B(ω)` and trace certificates of non-conjugacy.

mod matrix;
mod poly;
mod roots;

pub use matrix::{evaluate_letters, evaluate_word, generator_images, PolyMatrix};
pub use poly::{rational_rem, IntPoly};
pub use roots::{identity_residual, numeric_roots, Cx, RootBox};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rational::Rational;
use crate::slopes::{in_domain, parse_rational};
use crate::words::{loop_word, relator_word};

/// Gcd of the entries of `ρ(u_r) − I`, primitive with positive leading coefficient.
pub fn riley_polynomial(r: Rational) -> Result<IntPoly> {
    let m = evaluate_word(&relator_word(r)?);
    let g = m.minus_identity().iter().fold(IntPoly::zero(), |g, e| g.gcd(e));
    if g.is_zero() {
        return Err(Error::Degenerate(format!("ρ(u_{r}) = I identically in ω")));
    }
    Ok(g)
}

/// The Riley polynomial with its factorization. `abelian_root` flags the factor `ω`,
/// whose root sends `b` to the identity.
#[derive(Debug, Clone, Serialize)]
pub struct RileyReport {
    pub slope: Rational,
    pub polynomial: IntPoly,
    pub factors: Vec<(IntPoly, usize)>,
    pub abelian_root: bool,
}

pub fn riley_report(r: Rational) -> Result<RileyReport> {
    let polynomial = riley_polynomial(r)?;
    let factors = polynomial.factor();
    let abelian_root = factors.iter().any(|(f, _)| *f == IntPoly::omega());
    Ok(RileyReport { slope: r, polynomial, factors, abelian_root })
}

pub fn trace_of_loop(s: Rational) -> Result<IntPoly> {
    Ok(evaluate_word(&loop_word(s)?).trace())
}

/// `tr ρ(u_s) − tr ρ(u_s')` reduced modulo `f` over the rationals.
pub fn trace_diff_mod(s: Rational, s2: Rational, f: &IntPoly) -> Result<Vec<BigRational>> {
    let d = &trace_of_loop(s)? - &trace_of_loop(s2)?;
    Ok(rational_rem(&d.to_rational(), &f.to_rational()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceCertificate {
    pub r: Rational,
    pub s: Rational,
    pub s2: Rational,
    pub riley_factor: IntPoly,
    pub diff: Vec<BigRational>,
    pub nonzero: bool,
}

#[derive(Serialize, Deserialize)]
struct TraceCertificateJson {
    slope: String,
    loops: [String; 2],
    riley_factor: Vec<String>,
    trace_diff_mod_factor: Vec<String>,
}

impl Serialize for TraceCertificate {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        TraceCertificateJson {
            slope: self.r.to_string(),
            loops: [self.s.to_string(), self.s2.to_string()],
            riley_factor: self.riley_factor.coeffs().iter().map(|c| c.to_string()).collect(),
            trace_diff_mod_factor: self.diff.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TraceCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TraceCertificateJson::deserialize(de)?;
        let rat = |t: &str| parse_rational(t).map_err(D::Error::custom);
        let int = |t: &String| t.parse::<BigInt>().map_err(D::Error::custom);
        let big = |t: &String| t.parse::<BigRational>().map_err(D::Error::custom);
        let riley_factor = IntPoly::new(raw.riley_factor.iter().map(int).collect::<std::result::Result<_, _>>()?);
        let diff: Vec<BigRational> = raw.trace_diff_mod_factor.iter().map(big).collect::<std::result::Result<_, _>>()?;
        Ok(TraceCertificate {
            r: rat(&raw.slope)?,
            s: rat(&raw.loops[0])?,
            s2: rat(&raw.loops[1])?,
            nonzero: diff.iter().any(|c| !c.is_zero()),
            riley_factor,
            diff,
        })
    }
}

/// The first irreducible factor of the Riley polynomial separating the traces of `u_s`
/// and `u_s'`. `None` is inconclusive.
pub fn nonconjugacy_certificate(r: Rational, s: Rational, s2: Rational) -> Result<Option<TraceCertificate>> {
    if s == s2 {
        return domain("the two loop slopes coincide");
    }
    for x in [s, s2] {
        if !in_domain(r, x)? {
            return domain(format!("{x} is not in I1 ∪ I2 for {r}"));
        }
    }
    let factors = riley_polynomial(r)?.factor();
    let d = &trace_of_loop(s)? - &trace_of_loop(s2)?;
    let diffs: Vec<Vec<BigRational>> = factors
        .par_iter()
        .map(|(f, _)| rational_rem(&d.to_rational(), &f.to_rational()))
        .collect();
    Ok(factors.into_iter().zip(diffs).find(|(_, diff)| !diff.is_empty()).map(|((f, _), diff)| {
        TraceCertificate { r, s, s2, riley_factor: f, diff, nonzero: true }
    }))
}

/// Outcome of re-checking a trace certificate from scratch.
#[derive(Debug, Clone, Serialize)]
pub struct TraceCheck {
    pub loops_in_domain: bool,
    pub factor_irreducible: bool,
    pub factor_divides_riley: bool,
    pub diff_matches: bool,
    pub diff_nonzero: bool,
}

impl TraceCheck {
    pub fn is_valid(&self) -> bool {
        self.loops_in_domain && self.factor_irreducible && self.factor_divides_riley && self.diff_matches && self.diff_nonzero
    }

    pub fn clauses(&self) -> [(&'static str, bool); 5] {
        [
            ("loops_in_domain", self.loops_in_domain),
            ("factor_irreducible", self.factor_irreducible),
            ("factor_divides_riley", self.factor_divides_riley),
            ("diff_matches", self.diff_matches),
            ("diff_nonzero", self.diff_nonzero),
        ]
    }
}

pub fn verify_trace_certificate(c: &TraceCertificate) -> Result<TraceCheck> {
    let loops_in_domain = c.s != c.s2 && in_domain(c.r, c.s)? && in_domain(c.r, c.s2)?;
    let f = &c.riley_factor;
    let factor_irreducible = f.degree().unwrap_or(0) >= 1 && {
        let fac = f.factor();
        fac.len() == 1 && fac[0].1 == 1
    };
    let factor_divides_riley = f.degree().unwrap_or(0) >= 1
        && rational_rem(&riley_polynomial(c.r)?.to_rational(), &f.to_rational()).is_empty();
    let diff_matches = f.degree().unwrap_or(0) >= 1 && trace_diff_mod(c.s, c.s2, f)? == c.diff;
    let diff_nonzero = c.diff.iter().any(|x| !x.is_zero());
    Ok(TraceCheck { loops_in_domain, factor_irreducible, factor_divides_riley, diff_matches, diff_nonzero })
}
