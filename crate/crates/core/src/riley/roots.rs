//! Complex root isolation in binary fixed point (`value = n / 2^bits`).

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Base, Letter};

use super::poly::IntPoly;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// `log2 |n|`, or `-inf` for zero.
fn log2_abs(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    let shift = bits.saturating_sub(60);
    let top = (n.abs() >> shift).to_f64().unwrap_or(f64::MAX);
    top.log2() + shift as f64
}

/// Complex fixed-point number at a scale carried by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cx {
    pub re: BigInt,
    pub im: BigInt,
}

impl Cx {
    pub fn zero() -> Cx {
        Cx { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn from_int(n: &BigInt, bits: u32) -> Cx {
        Cx { re: n << bits, im: BigInt::zero() }
    }

    pub fn from_f64(re: f64, im: f64, bits: u32) -> Cx {
        let conv = |x: f64| {
            let s = x * 2f64.powi(52);
            BigInt::from(s as i64) << bits >> 52u32
        };
        Cx { re: conv(re), im: conv(im) }
    }

    pub fn add(&self, o: &Cx) -> Cx {
        Cx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Cx) -> Cx {
        Cx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Cx, bits: u32) -> Cx {
        Cx {
            re: (&self.re * &o.re - &self.im * &o.im) >> bits,
            im: (&self.re * &o.im + &self.im * &o.re) >> bits,
        }
    }

    /// `None` when `o` is zero at this scale.
    pub fn div(&self, o: &Cx, bits: u32) -> Option<Cx> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) << bits;
        let im = (&self.im * &o.re - &self.re * &o.im) << bits;
        Some(Cx { re: re / &den, im: im / &den })
    }

    /// `log2 |z|` in real units.
    pub fn log2_abs(&self, bits: u32) -> f64 {
        let sq = &self.re * &self.re + &self.im * &self.im;
        log2_abs(&sq) / 2.0 - bits as f64
    }

    pub fn rescale(&self, from: u32, to: u32) -> Cx {
        if to >= from {
            Cx { re: &self.re << (to - from), im: &self.im << (to - from) }
        } else {
            Cx { re: &self.re >> (from - to), im: &self.im >> (from - to) }
        }
    }

    pub fn to_f64(&self, bits: u32) -> (f64, f64) {
        (fixed_to_f64(&self.re, bits), fixed_to_f64(&self.im, bits))
    }
}

fn fixed_to_f64(n: &BigInt, bits: u32) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let sign = if n.sign() == Sign::Minus { -1.0 } else { 1.0 };
    sign * (log2_abs(n) - bits as f64).exp2()
}

/// Decimal rendering of `n / 2^bits` with `digits` fractional digits, truncated toward zero.
fn fixed_to_decimal(n: &BigInt, bits: u32, digits: usize) -> String {
    let scaled = (n.abs() * BigInt::from(10).pow(digits as u32)) >> bits;
    let s = format!("{:0>width$}", scaled.to_string(), width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    let sign = if n.is_negative() && scaled != BigInt::zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

fn horner(coeffs: &[BigInt], z: &Cx, bits: u32) -> Cx {
    coeffs.iter().rev().fold(Cx::zero(), |acc, c| acc.mul(z, bits).add(&Cx::from_int(c, bits)))
}

/// A disk known to contain exactly one root of the polynomial it was computed for.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootBox {
    #[serde(skip)]
    pub center: Cx,
    #[serde(skip)]
    pub bits: u32,
    /// Upper bound on `log10` of the inclusion radius.
    pub radius_log10: f64,
    /// Multiplicity of the irreducible factor the root belongs to.
    pub multiplicity: usize,
    #[serde(rename = "re")]
    pub re_decimal: String,
    #[serde(rename = "im")]
    pub im_decimal: String,
}

impl RootBox {
    fn new(center: Cx, bits: u32, radius_log10: f64, multiplicity: usize, digits: usize) -> RootBox {
        let re_decimal = fixed_to_decimal(&center.re, bits, digits);
        let im_decimal = fixed_to_decimal(&center.im, bits, digits);
        RootBox { center, bits, radius_log10, multiplicity, re_decimal, im_decimal }
    }

    pub fn re(&self) -> f64 {
        fixed_to_f64(&self.center.re, self.bits)
    }

    pub fn im(&self) -> f64 {
        fixed_to_f64(&self.center.im, self.bits)
    }

    pub fn is_nonreal(&self) -> bool {
        self.im().abs().log10() > self.radius_log10
    }
}

fn initial_guesses(coeffs: &[BigInt], bits: u32) -> Vec<Cx> {
    let n = coeffs.len() - 1;
    let lead = log2_abs(&coeffs[n]);
    // Geometric mean of root moduli, clamped to the Fujiwara bound.
    let mean = (log2_abs(&coeffs[0]) - lead) / n as f64;
    let fujiwara = (0..n)
        .map(|k| (log2_abs(&coeffs[k]) - lead) / (n - k) as f64)
        .fold(f64::NEG_INFINITY, f64::max)
        + 1.0;
    let radius = mean.min(fujiwara).exp2();
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Cx::from_f64(radius * t.cos(), radius * t.sin(), bits)
        })
        .collect()
}

/// Aberth–Ehrlich iteration for a squarefree polynomial; returns `None` if it stalls.
fn aberth(coeffs: &[BigInt], zs: &mut [Cx], bits: u32, target: f64, max_iter: usize) -> Option<()> {
    let n = zs.len();
    let deriv: Vec<BigInt> = coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let one = Cx::from_int(&BigInt::from(1), bits);
    for _ in 0..max_iter {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..n {
            let pz = horner(coeffs, &zs[i], bits);
            if pz.re.is_zero() && pz.im.is_zero() {
                continue;
            }
            let dz = horner(&deriv, &zs[i], bits);
            let Some(ratio) = pz.div(&dz, bits) else {
                zs[i] = zs[i].add(&Cx::from_f64(1e-3, 1e-3, bits));
                worst = f64::INFINITY;
                continue;
            };
            let mut sum = Cx::zero();
            for j in 0..n {
                if j != i {
                    if let Some(q) = one.div(&zs[i].sub(&zs[j]), bits) {
                        sum = sum.add(&q);
                    }
                }
            }
            let den = one.sub(&ratio.mul(&sum, bits));
            let step = ratio.div(&den, bits).unwrap_or(ratio);
            worst = worst.max(step.log2_abs(bits));
            zs[i] = zs[i].sub(&step);
        }
        if worst < target {
            return Some(());
        }
    }
    None
}

/// Weierstrass inclusion radii `n·|p(z_i)| / (|lc|·∏|z_i − z_j|)` in `log2` units.
fn inclusion_radii(coeffs: &[BigInt], zs: &[Cx], bits: u32) -> Vec<f64> {
    let n = zs.len();
    let lead = log2_abs(&coeffs[n]);
    (0..n)
        .map(|i| {
            let p = horner(coeffs, &zs[i], bits).log2_abs(bits);
            let prod: f64 = (0..n).filter(|&j| j != i).map(|j| zs[i].sub(&zs[j]).log2_abs(bits)).sum();
            // Horner rounding: at most (n + 2) ulps of the scale times sum |c_k| |z|^k.
            let lz = zs[i].log2_abs(bits).max(0.0);
            let mag = log2_sum(coeffs.iter().enumerate().map(|(k, c)| log2_abs(c) + k as f64 * lz));
            let ulp = -(bits as f64) + ((n + 2) as f64).log2() + mag + 1.0;
            (n as f64).log2() + p.max(ulp) - lead - prod
        })
        .collect()
}

fn log2_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    let top = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + v.iter().map(|x| (x - top).exp2()).sum::<f64>().log2()
}

fn disjoint(zs: &[Cx], radii: &[f64], bits: u32) -> bool {
    (0..zs.len()).all(|i| {
        (i + 1..zs.len()).all(|j| {
            let d = zs[i].sub(&zs[j]).log2_abs(bits);
            let sum = (radii[i].exp2() + radii[j].exp2()).log2();
            d > sum + 1.0
        })
    })
}

fn isolate_squarefree(f: &IntPoly, digits: u32) -> Result<Vec<(Cx, u32, f64)>> {
    let coeffs = f.coeffs();
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        let bits = (digits as f64 * LOG2_10) as u32 + 64;
        let z = Cx { re: -(&coeffs[0] << bits) / &coeffs[1], im: BigInt::zero() };
        return Ok(vec![(z, bits, -(bits as f64) + 1.0)]);
    }
    let want = -(digits as f64) * LOG2_10;
    let size = coeffs.iter().map(log2_abs).fold(0.0, f64::max);
    let mut bits = ((digits as f64 * LOG2_10 + size) as u32 + 64).max(128);
    let mut zs = initial_guesses(coeffs, bits);
    for _ in 0..5 {
        let converged = aberth(coeffs, &mut zs, bits, want - 16.0, 400 + 20 * n);
        if converged.is_some() {
            let radii = inclusion_radii(coeffs, &zs, bits);
            if radii.iter().all(|&r| r <= want) && disjoint(&zs, &radii, bits) {
                return Ok(zs.into_iter().zip(radii).map(|(z, r)| (z, bits, r)).collect());
            }
        }
        let next = bits * 2;
        zs = zs.iter().map(|z| z.rescale(bits, next)).collect();
        bits = next;
    }
    Err(Error::Invariant(format!("root isolation did not converge for {f}")))
}

/// Isolating disks for all complex roots of `p`, each of radius at most `10^(−digits)`.
/// Roots of repeated factors are listed once per multiplicity.
pub fn numeric_roots(p: &IntPoly, digits: u32) -> Result<Vec<RootBox>> {
    if p.is_zero() {
        return Err(Error::Degenerate("numeric_roots of the zero polynomial".into()));
    }
    let mut out = Vec::new();
    for (f, mult) in p.factor() {
        for (z, bits, r) in isolate_squarefree(&f, digits)? {
            let rb = RootBox::new(z, bits, r / LOG2_10, mult, digits as usize);
            out.extend(std::iter::repeat(rb).take(mult));
        }
    }
    Ok(out)
}

/// `max |ρ(w)_{ij} − δ_{ij}|` at a numeric root, evaluated in the root's fixed-point scale.
pub fn identity_residual(w: &[Letter], root: &RootBox) -> f64 {
    let bits = root.bits;
    let one = Cx::from_int(&BigInt::from(1), bits);
    let om = &root.center;
    let mut m = [one.clone(), Cx::zero(), Cx::zero(), one.clone()];
    for l in w {
        for row in 0..2 {
            let (x, y) = (m[2 * row].clone(), m[2 * row + 1].clone());
            match (l.base, l.inverse) {
                (Base::A, false) => m[2 * row + 1] = y.add(&x),
                (Base::A, true) => m[2 * row + 1] = y.sub(&x),
                (Base::B, false) => m[2 * row] = x.add(&y.mul(om, bits)),
                (Base::B, true) => m[2 * row] = x.sub(&y.mul(om, bits)),
            }
        }
    }
    m[0] = m[0].sub(&one);
    m[3] = m[3].sub(&one);
    m.iter().map(|z| z.log2_abs(bits).exp2()).fold(0.0, f64::max)
}
