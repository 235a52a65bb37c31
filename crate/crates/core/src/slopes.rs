//! Continued fractions, Farey parents, the admissible loop intervals and the
//! special/general slope taxonomy.
//!
//! Continued fractions follow the convention `[m1, ..., mk] = 1/(m1 + 1/(m2 + ...))`,
//! so that `[2, n] = n/(2n+1)` and `[2, 1, 2] = 3/8`.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::rational::Rational;

/// A positive continued fraction `[m1, ..., mk]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ContFrac {
    coeffs: Vec<u64>,
}

impl ContFrac {
    pub fn new(coeffs: Vec<u64>) -> Result<ContFrac> {
        if coeffs.is_empty() {
            return domain("empty continued fraction");
        }
        if coeffs.contains(&0) {
            return domain("continued fraction coefficients must be positive");
        }
        Ok(ContFrac { coeffs })
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True iff the last coefficient is at least 2, or the expansion is a single term `[m]` with `m >= 2`.
    pub fn is_canonical(&self) -> bool {
        *self.coeffs.last().unwrap() >= 2
    }

    /// Folds a trailing 1: `[..., t, 1] = [..., t + 1]`.
    pub fn canonical(&self) -> ContFrac {
        let mut c = self.coeffs.clone();
        if c.len() >= 2 && c[c.len() - 1] == 1 {
            c.pop();
            *c.last_mut().unwrap() += 1;
        }
        ContFrac { coeffs: c }
    }
}

impl fmt::Display for ContFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, m) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "]")
    }
}

/// Canonical continued fraction of `r` in `(0, 1)`.
pub fn cf_expand(r: Rational) -> Result<ContFrac> {
    if !r.in_open_unit() {
        return domain(format!("{r} is not in (0,1)"));
    }
    let (mut p, mut q) = (r.den(), r.num());
    let mut coeffs = Vec::new();
    while q != 0 {
        coeffs.push(p / q);
        (p, q) = (q, p % q);
    }
    Ok(ContFrac { coeffs })
}

/// Exact value of a continued fraction.
pub fn cf_eval(cf: &ContFrac) -> Result<Rational> {
    let mut x = Rational::ZERO;
    for &m in cf.coeffs.iter().rev() {
        x = x.add_int(m)?.recip()?;
    }
    Ok(x)
}

/// Farey parents `r1 < r < r2`, giving `I1 = [0, r1]` and `I2 = [r2, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntervalPair {
    pub r1: Rational,
    pub r2: Rational,
}

impl IntervalPair {
    /// Closed-interval membership `s ∈ [0, r1] ∪ [r2, 1]`, for any `s` in `[0, 1]`.
    pub fn contains(&self, s: Rational) -> bool {
        s <= self.r1 || (s >= self.r2 && s <= Rational::ONE)
    }
}

pub fn farey_parents(r: Rational) -> Result<IntervalPair> {
    let cf = cf_expand(r)?;
    let c = cf.coeffs();
    let k = c.len();
    if k == 1 {
        return Ok(IntervalPair {
            r1: Rational::ZERO,
            r2: Rational::new(1, c[0] - 1)?,
        });
    }
    let x = cf_eval(&ContFrac::new(c[..k - 1].to_vec())?)?;
    let mut shorter = c.to_vec();
    shorter[k - 1] -= 1;
    let y = cf_eval(&ContFrac::new(shorter)?)?;
    let (r1, r2) = if x < y { (x, y) } else { (y, x) };
    debug_assert!(r1 < r && r < r2);
    debug_assert_eq!(r1.cross(r2).abs(), 1);
    debug_assert_eq!(r1.mediant(r2).ok(), Some(r));
    Ok(IntervalPair { r1, r2 })
}

/// True iff `s ∈ I1(r) ∪ I2(r)`, with both endpoints included.
pub fn in_domain(r: Rational, s: Rational) -> Result<bool> {
    if !r.in_open_unit() {
        return domain(format!("r = {r} is not in (0,1)"));
    }
    if !s.in_open_unit() {
        return domain(format!("s = {s} is not in (0,1)"));
    }
    Ok(farey_parents(r)?.contains(s))
}

/// The reduction shape of a general slope, carrying its first coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", content = "m")]
pub enum ReductionType {
    A(u64),
    B(u64),
}

impl ReductionType {
    pub fn m(self) -> u64 {
        match self {
            ReductionType::A(m) | ReductionType::B(m) => m,
        }
    }
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionType::A(m) => write!(f, "A({m})"),
            ReductionType::B(m) => write!(f, "B({m})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum SlopeClass {
    /// `1/p`, `p >= 2`.
    TorusSpecial { p: u64 },
    /// `[m, n]`, `m, n >= 2`.
    TwoTermSpecial { m: u64, n: u64 },
    /// `[m, 1, n]`, `m, n >= 2`.
    ThreeTermSpecial { m: u64, n: u64 },
    /// `[m, m2, ..., mk]` with `m2 >= 2`, `k >= 3`; `tail = [m2, ..., mk]`.
    GeneralTypeA { m: u64, tail: Vec<u64> },
    /// `[m, 1, m3, ..., mk]` with `k >= 4`; `tail = [m3, ..., mk]`.
    GeneralTypeB { m: u64, tail: Vec<u64> },
    /// The class of `1 - r` for `r > 1/2`.
    Mirror { inner: Box<SlopeClass> },
}

impl SlopeClass {
    pub fn is_special(&self) -> bool {
        match self {
            SlopeClass::Mirror { inner } => inner.is_special(),
            SlopeClass::GeneralTypeA { .. } | SlopeClass::GeneralTypeB { .. } => false,
            _ => true,
        }
    }

    pub fn is_general(&self) -> bool {
        !self.is_special()
    }

    pub fn is_mirrored(&self) -> bool {
        matches!(self, SlopeClass::Mirror { .. })
    }

    /// Reduction shape of an unmirrored general class.
    pub fn reduction_type(&self) -> Option<ReductionType> {
        match self {
            SlopeClass::GeneralTypeA { m, .. } => Some(ReductionType::A(*m)),
            SlopeClass::GeneralTypeB { m, .. } => Some(ReductionType::B(*m)),
            _ => None,
        }
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for SlopeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeClass::TorusSpecial { p } => write!(f, "TorusSpecial({p})"),
            SlopeClass::TwoTermSpecial { m, n } => write!(f, "TwoTermSpecial({m},{n})"),
            SlopeClass::ThreeTermSpecial { m, n } => write!(f, "ThreeTermSpecial({m},{n})"),
            SlopeClass::GeneralTypeA { m, tail } => write!(f, "GeneralTypeA({m}; {})", join(tail)),
            SlopeClass::GeneralTypeB { m, tail } => write!(f, "GeneralTypeB({m}; {})", join(tail)),
            SlopeClass::Mirror { inner } => write!(f, "Mirror({inner})"),
        }
    }
}

pub fn classify_slope(r: Rational) -> Result<SlopeClass> {
    if !r.in_open_unit() {
        return domain(format!("{r} is not in (0,1)"));
    }
    if r > Rational::HALF {
        let inner = classify_slope(r.one_minus()?)?;
        return Ok(SlopeClass::Mirror {
            inner: Box::new(inner),
        });
    }
    let cf = cf_expand(r)?;
    let c = cf.coeffs();
    let m = c[0];
    Ok(match (c.len(), c.get(1)) {
        (1, _) => SlopeClass::TorusSpecial { p: m },
        (2, _) => SlopeClass::TwoTermSpecial { m, n: c[1] },
        (3, Some(1)) => SlopeClass::ThreeTermSpecial { m, n: c[2] },
        (_, Some(1)) => SlopeClass::GeneralTypeB {
            m,
            tail: c[2..].to_vec(),
        },
        _ => SlopeClass::GeneralTypeA {
            m,
            tail: c[1..].to_vec(),
        },
    })
}

/// The mirror map `r ↦ 1 − r`.
pub fn mirror(r: Rational) -> Result<Rational> {
    r.one_minus()
}

fn eval_canonical(coeffs: &[u64]) -> Result<Rational> {
    cf_eval(&ContFrac::new(coeffs.to_vec())?.canonical())
}

/// `r̃` for a general slope: `[m2 − 1, m3, ...]` (type A) or `[m3, ...]` (type B).
pub fn reduce_slope(r: Rational, class: &SlopeClass) -> Result<Rational> {
    let cf = cf_expand(r)?;
    let c = cf.coeffs();
    match class {
        SlopeClass::GeneralTypeA { m, tail } if c[0] == *m && c[1..] == tail[..] => {
            let mut out = c[1..].to_vec();
            out[0] -= 1;
            eval_canonical(&out)
        }
        SlopeClass::GeneralTypeB { m, tail } if c[0] == *m && c[2..] == tail[..] => {
            eval_canonical(&c[2..])
        }
        SlopeClass::GeneralTypeA { .. } | SlopeClass::GeneralTypeB { .. } => {
            domain(format!("class {class} does not describe {r}"))
        }
        _ => Err(Error::NotReducible(r.to_string())),
    }
}

/// `s̃` for a loop slope of matching shape. The result may be the boundary value `1`.
pub fn reduce_loop_slope(s: Rational, ty: ReductionType) -> Result<Rational> {
    let cf = cf_expand(s)?;
    let c = cf.coeffs();
    match ty {
        ReductionType::A(m) => {
            if c.len() < 2 || c[0] != m || c[1] < 2 {
                return domain(format!("{s} = {cf} does not have shape [{m}, p2 >= 2, ...]"));
            }
            let mut out = c[1..].to_vec();
            out[0] -= 1;
            eval_canonical(&out)
        }
        ReductionType::B(m) => {
            if c.len() < 3 || c[0] != m || c[1] != 1 {
                return domain(format!("{s} = {cf} does not have shape [{m}, 1, p3, ...]"));
            }
            eval_canonical(&c[2..])
        }
    }
}

/// `M(x) = 1/(1/(−m + 1/x) − 1)`, the type A reduction as a Möbius map.
/// Returns `None` where `M` is undefined or negative.
pub fn mobius_a(m: u64, x: Rational) -> Option<Rational> {
    if x.num() == 0 {
        return None;
    }
    let x = Ratio::new(x.num() as i128, x.den() as i128);
    let m = Ratio::from_integer(m as i128);
    let one = Ratio::from_integer(1);
    let inner = x.recip() - m;
    if inner == Ratio::from_integer(0) {
        return None;
    }
    let outer = inner.recip() - one;
    if outer == Ratio::from_integer(0) {
        return None;
    }
    let y = outer.recip();
    if y < Ratio::from_integer(0) {
        return None;
    }
    Rational::new(u64::try_from(*y.numer()).ok()?, u64::try_from(*y.denom()).ok()?).ok()
}

/// Parses `"q/p"`, a bare integer, or a bracketed continued fraction `"[2,1,2]"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let offset = text.len() - text.trim_start().len();
    let perr = |pos: usize, msg: &str| Error::Parse {
        pos: offset + pos,
        msg: msg.to_string(),
    };
    if trimmed.is_empty() {
        return Err(perr(0, "empty slope"));
    }
    if let Some(body) = trimmed.strip_prefix('[') {
        let Some(body) = body.strip_suffix(']') else {
            return Err(perr(trimmed.len(), "expected ']'"));
        };
        let mut coeffs = Vec::new();
        let mut pos = 1;
        for part in body.split(',') {
            let lead = part.len() - part.trim_start().len();
            let v: u64 = part
                .trim()
                .parse()
                .map_err(|_| perr(pos + lead, "expected a positive integer coefficient"))?;
            if v == 0 {
                return Err(perr(pos + lead, "coefficients must be positive"));
            }
            coeffs.push(v);
            pos += part.len() + 1;
        }
        return cf_eval(&ContFrac::new(coeffs)?);
    }
    let (num_text, den_text) = match trimmed.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (trimmed, None),
    };
    let num: u64 = num_text
        .trim()
        .parse()
        .map_err(|_| perr(0, "expected a non-negative integer numerator"))?;
    let den: u64 = match den_text {
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| perr(num_text.len() + 1, "expected a positive integer denominator"))?,
        None => 1,
    };
    if den == 0 {
        return Err(perr(num_text.len() + 1, "zero denominator"));
    }
    Rational::new(num, den)
}

/// Parses a slope and requires it to lie in `(0, 1)`.
pub fn parse_slope(text: &str) -> Result<Rational> {
    let r = parse_rational(text)?;
    if !r.in_open_unit() {
        return domain(format!("slope {r} is not in (0,1)"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn cf(c: &[u64]) -> ContFrac {
        ContFrac::new(c.to_vec()).unwrap()
    }

    #[test]
    fn expansions() {
        assert_eq!(cf_expand(q(3, 8)).unwrap(), cf(&[2, 1, 2]));
        assert_eq!(cf_expand(q(3, 7)).unwrap(), cf(&[2, 3]));
        assert_eq!(cf_expand(q(1, 2)).unwrap(), cf(&[2]));
        assert_eq!(cf_expand(q(5, 12)).unwrap(), cf(&[2, 2, 2]));
        assert!(cf_expand(Rational::ONE).is_err());
        assert!(cf_expand(Rational::ZERO).is_err());
    }

    #[test]
    fn evaluations() {
        assert_eq!(cf_eval(&cf(&[2, 1, 2])).unwrap(), q(3, 8));
        assert_eq!(cf_eval(&cf(&[7])).unwrap(), q(1, 7));
        assert_eq!(cf_eval(&cf(&[1, 2])).unwrap(), q(2, 3));
        assert_eq!(cf_eval(&cf(&[2, 2, 1])).unwrap(), q(3, 7));
        assert!(ContFrac::new(vec![]).is_err());
    }

    #[test]
    fn canonical_folding() {
        assert_eq!(cf(&[2, 2, 1]).canonical(), cf(&[2, 3]));
        assert!(!cf(&[2, 1]).is_canonical());
        assert!(cf(&[2]).is_canonical());
    }

    #[test]
    fn parents() {
        let p = farey_parents(q(5, 12)).unwrap();
        assert_eq!((p.r1, p.r2), (q(2, 5), q(3, 7)));
        let p = farey_parents(q(3, 8)).unwrap();
        assert_eq!((p.r1, p.r2), (q(1, 3), q(2, 5)));
        let p = farey_parents(q(1, 2)).unwrap();
        assert_eq!((p.r1, p.r2), (Rational::ZERO, Rational::ONE));
    }

    #[test]
    fn domain_membership() {
        assert!(in_domain(q(3, 8), q(1, 6)).unwrap());
        assert!(in_domain(q(3, 8), q(5, 12)).unwrap());
        assert!(!in_domain(q(3, 8), q(3, 8)).unwrap());
        assert!(in_domain(q(3, 8), Rational::ONE).is_err());
    }

    #[test]
    fn taxonomy() {
        assert_eq!(
            classify_slope(q(3, 8)).unwrap(),
            SlopeClass::ThreeTermSpecial { m: 2, n: 2 }
        );
        assert_eq!(
            classify_slope(q(5, 12)).unwrap(),
            SlopeClass::GeneralTypeA { m: 2, tail: vec![2, 2] }
        );
        assert_eq!(
            classify_slope(q(5, 7)).unwrap(),
            SlopeClass::Mirror {
                inner: Box::new(SlopeClass::TwoTermSpecial { m: 3, n: 2 })
            }
        );
        assert_eq!(
            classify_slope(q(8, 21)).unwrap(),
            SlopeClass::GeneralTypeB { m: 2, tail: vec![1, 1, 2] }
        );
        assert_eq!(classify_slope(q(1, 2)).unwrap(), SlopeClass::TorusSpecial { p: 2 });
    }

    #[test]
    fn mirror_map() {
        assert_eq!(mirror(q(3, 8)).unwrap(), q(5, 8));
        assert_eq!(mirror(q(1, 2)).unwrap(), q(1, 2));
        assert_eq!(mirror(q(2, 7)).unwrap(), q(5, 7));
    }

    #[test]
    fn slope_reduction() {
        let r = q(5, 12);
        assert_eq!(reduce_slope(r, &classify_slope(r).unwrap()).unwrap(), q(2, 3));
        let r = cf_eval(&cf(&[2, 1, 2, 2])).unwrap();
        assert_eq!(r, q(7, 19));
        assert_eq!(reduce_slope(r, &classify_slope(r).unwrap()).unwrap(), q(2, 5));
        let r = q(1, 3);
        assert!(matches!(
            reduce_slope(r, &classify_slope(r).unwrap()),
            Err(Error::NotReducible(_))
        ));
    }

    #[test]
    fn loop_reduction() {
        assert_eq!(reduce_loop_slope(q(3, 7), ReductionType::A(2)).unwrap(), q(1, 2));
        assert_eq!(mobius_a(2, q(3, 7)), Some(q(1, 2)));
        assert_eq!(reduce_loop_slope(q(3, 8), ReductionType::B(2)).unwrap(), q(1, 2));
        assert_eq!(reduce_loop_slope(q(2, 5), ReductionType::A(2)).unwrap(), Rational::ONE);
        assert!(reduce_loop_slope(q(3, 8), ReductionType::A(2)).is_err());
        assert!(reduce_loop_slope(q(3, 4), ReductionType::A(2)).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_slope("3/8").unwrap(), q(3, 8));
        assert_eq!(parse_slope(" [2,1,2] ").unwrap(), q(3, 8));
        assert_eq!(parse_slope("6/16").unwrap(), q(3, 8));
        assert!(matches!(parse_slope("3/x"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_slope("[2,0]"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_slope("3/2"), Err(Error::Domain(_))));
    }
}
