//! T-sequences: the run-length reduction of `{m, m+1}`-sequences used to pass from
//! a general slope `r` to `r̃`.

use serde::Serialize;

use crate::cyclic;
use crate::error::{domain, Error, Result};
use crate::rational::Rational;
use crate::slopes::{reduce_loop_slope, ReductionType};
use crate::words::{cs_of_slope, CyclicSSeq, SSeq};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TType {
    /// Separator `m+1`, runs of `m`.
    Type1,
    /// Separator `m`, runs of `m+1`.
    Type2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TSpec {
    pub m: u64,
    pub ty: TType,
}

impl TSpec {
    pub fn new(m: u64, ty: TType) -> Result<TSpec> {
        if m < 2 {
            return domain(format!("T-sequence parameter m = {m} must be at least 2"));
        }
        Ok(TSpec { m, ty })
    }

    /// The spec matching a reduction shape: type A uses Type1, type B uses Type2.
    pub fn for_reduction(ty: ReductionType) -> Result<TSpec> {
        match ty {
            ReductionType::A(m) => TSpec::new(m, TType::Type1),
            ReductionType::B(m) => TSpec::new(m, TType::Type2),
        }
    }

    pub fn separator(self) -> u64 {
        match self.ty {
            TType::Type1 => self.m + 1,
            TType::Type2 => self.m,
        }
    }

    pub fn run(self) -> u64 {
        match self.ty {
            TType::Type1 => self.m,
            TType::Type2 => self.m + 1,
        }
    }

    fn check_alphabet(self, terms: &[u64], cyclic: bool) -> Result<()> {
        let (sep, run) = (self.separator(), self.run());
        if let Some(x) = terms.iter().find(|&&x| x != sep && x != run) {
            return domain(format!("term {x} is outside {{{}, {}}}", self.m, self.m + 1));
        }
        let n = terms.len();
        let pairs = if cyclic { n } else { n.saturating_sub(1) };
        if (0..pairs).any(|i| terms[i] == sep && terms[(i + 1) % n] == sep) {
            return domain(format!("forbidden adjacency ({sep}, {sep})"));
        }
        Ok(())
    }
}

/// Linear T-sequence. A leading and a trailing separator are absorbed as `*` and `*'`.
pub fn t_seq(s: &SSeq, spec: TSpec) -> Result<SSeq> {
    spec.check_alphabet(&s.0, false)?;
    let sep = spec.separator();
    let mut body = &s.0[..];
    if body.first() == Some(&sep) {
        body = &body[1..];
    }
    if body.last() == Some(&sep) {
        body = &body[..body.len() - 1];
    }
    if body.is_empty() {
        return Ok(SSeq(Vec::new()));
    }
    Ok(SSeq(
        body.split(|&x| x == sep).map(|run| run.len() as u64).collect(),
    ))
}

/// Cyclic T-sequence: run lengths of the non-separator value between consecutive separators.
pub fn ct_seq(cs: &CyclicSSeq, spec: TSpec) -> Result<CyclicSSeq> {
    let terms = cs.terms();
    spec.check_alphabet(terms, true)?;
    let sep = spec.separator();
    let Some(first) = terms.iter().position(|&x| x == sep) else {
        return domain("cyclic T-sequence of a sequence without separators");
    };
    if terms.iter().all(|&x| x == sep) {
        return domain("cyclic T-sequence of a sequence of separators only");
    }
    let rot = cyclic::rotated(terms, first);
    let out: Vec<u64> = rot[1..].split(|&x| x == sep).map(|run| run.len() as u64).collect();
    let ct = CyclicSSeq(out);
    let total: u64 = terms.iter().sum();
    let rebuilt = ct.terms().len() as u64 * sep + spec.run() * ct.terms().iter().sum::<u64>();
    if total != rebuilt {
        return Err(Error::Invariant(format!("sum law fails for {cs} under {spec:?}")));
    }
    Ok(ct)
}

/// `<sep, t1<run>, sep, t2<run>, ...>`, a right inverse of [`ct_seq`].
pub fn inverse_ct(t: &CyclicSSeq, spec: TSpec) -> Result<CyclicSSeq> {
    if t.terms().is_empty() || t.terms().contains(&0) {
        return domain("inverse_ct needs a nonempty sequence of positive terms");
    }
    let mut out = Vec::new();
    for &ti in t.terms() {
        out.push(spec.separator());
        out.extend(std::iter::repeat(spec.run()).take(ti as usize));
    }
    Ok(CyclicSSeq(out))
}

/// Checks `CT(CS(x)) = CS(x̃)`, where `x̃` is the reduction of `x` for the shape of `spec`.
pub fn verify_reduction_identity(x: Rational, spec: TSpec) -> Result<bool> {
    let ty = match spec.ty {
        TType::Type1 => ReductionType::A(spec.m),
        TType::Type2 => ReductionType::B(spec.m),
    };
    let reduced = reduce_loop_slope(x, ty)?;
    let lhs = ct_seq(&cs_of_slope(x)?, spec)?;
    Ok(lhs == cs_of_slope(reduced)?)
}
