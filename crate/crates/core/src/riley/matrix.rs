use std::fmt;

use crate::words::{AltWord, Base, Letter};

use super::poly::IntPoly;

/// A 2×2 matrix over `ℤ[ω]`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    pub e: [IntPoly; 4],
}

impl PolyMatrix {
    pub fn identity() -> PolyMatrix {
        PolyMatrix::from_entries(IntPoly::one(), IntPoly::zero(), IntPoly::zero(), IntPoly::one())
    }

    pub fn from_entries(a: IntPoly, b: IntPoly, c: IntPoly, d: IntPoly) -> PolyMatrix {
        PolyMatrix { e: [a, b, c, d] }
    }

    pub fn entry(&self, i: usize, j: usize) -> &IntPoly {
        &self.e[2 * i + j]
    }

    pub fn trace(&self) -> IntPoly {
        &self.e[0] + &self.e[3]
    }

    pub fn det(&self) -> IntPoly {
        &(&self.e[0] * &self.e[3]) - &(&self.e[1] * &self.e[2])
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        let [a, b, c, d] = &self.e;
        let [p, q, r, s] = &o.e;
        PolyMatrix::from_entries(
            &(a * p) + &(b * r),
            &(a * q) + &(b * s),
            &(c * p) + &(d * r),
            &(c * q) + &(d * s),
        )
    }

    /// In-place right multiplication by the image of one letter.
    pub fn mul_letter(&mut self, l: Letter) {
        let om = IntPoly::omega();
        let neg = l.inverse;
        for row in 0..2 {
            let (x, y) = (self.e[2 * row].clone(), self.e[2 * row + 1].clone());
            match l.base {
                // [[1, ±1], [0, 1]]
                Base::A => {
                    self.e[2 * row + 1] = if neg { &y - &x } else { &y + &x };
                }
                // [[1, 0], [±ω, 1]]
                Base::B => {
                    let t = &y * &om;
                    self.e[2 * row] = if neg { &x - &t } else { &x + &t };
                }
            }
        }
    }

    /// The four entries of `self − I`.
    pub fn minus_identity(&self) -> [IntPoly; 4] {
        let one = IntPoly::one();
        [&self.e[0] - &one, self.e[1].clone(), self.e[2].clone(), &self.e[3] - &one]
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.e;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// The parabolic pair `A = [[1,1],[0,1]]`, `B = [[1,0],[ω,1]]`.
pub fn generator_images() -> (PolyMatrix, PolyMatrix) {
    let a = PolyMatrix::from_entries(IntPoly::one(), IntPoly::one(), IntPoly::zero(), IntPoly::one());
    let b = PolyMatrix::from_entries(IntPoly::one(), IntPoly::zero(), IntPoly::omega(), IntPoly::one());
    (a, b)
}

pub fn evaluate_letters(w: &[Letter]) -> PolyMatrix {
    let mut m = PolyMatrix::identity();
    for &l in w {
        m.mul_letter(l);
    }
    m
}

pub fn evaluate_word(w: &AltWord) -> PolyMatrix {
    evaluate_letters(w.letters())
}
