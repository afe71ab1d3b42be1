//! Elements `a + b*sqrt(d)` of Q or a real quadratic field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::{Int, Rat};

/// `a + b*sqrt(d)` with rational coordinates. For Q (`d == 1`) the `b`
/// coordinate is always zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FElem {
    pub a: Rat,
    pub b: Rat,
    pub d: i64,
}

impl FElem {
    pub fn new(d: i64, a: Rat, b: Rat) -> FElem {
        if d == 1 {
            FElem { a: a + b, b: Rat::zero(), d }
        } else {
            FElem { a, b, d }
        }
    }

    pub fn from_int(d: i64, n: i64) -> FElem {
        FElem::new(d, Rat::from_integer(Int::from(n)), Rat::zero())
    }

    pub fn from_rat(d: i64, q: Rat) -> FElem {
        FElem::new(d, q, Rat::zero())
    }

    pub fn from_ints(d: i64, a: i64, b: i64) -> FElem {
        FElem::new(d, Rat::from_integer(Int::from(a)), Rat::from_integer(Int::from(b)))
    }

    pub fn sqrt_d(d: i64) -> FElem {
        FElem::new(d, Rat::zero(), Rat::one())
    }

    pub fn zero(d: i64) -> FElem {
        FElem::from_int(d, 0)
    }

    pub fn one(d: i64) -> FElem {
        FElem::from_int(d, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> FElem {
        FElem { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    pub fn norm(&self) -> Rat {
        if self.d == 1 {
            return self.a.clone();
        }
        &self.a * &self.a - Rat::from_integer(Int::from(self.d)) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rat {
        if self.d == 1 {
            return self.a.clone();
        }
        &self.a + &self.a
    }

    pub fn scale(&self, q: &Rat) -> FElem {
        FElem { a: &self.a * q, b: &self.b * q, d: self.d }
    }

    pub fn inv(&self) -> FElem {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm();
        if self.d == 1 {
            return FElem::from_rat(1, n.recip());
        }
        self.conj().scale(&n.recip())
    }

    pub fn div(&self, other: &FElem) -> FElem {
        self * &other.inv()
    }

    pub fn pow(&self, e: u32) -> FElem {
        let mut r = FElem::one(self.d);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Sign under the embedding sending sqrt(d) to `+sqrt(d)` (`place = 0`)
    /// or `-sqrt(d)` (`place = 1`).
    pub fn sign_at(&self, place: usize) -> i8 {
        let b = if place == 0 { self.b.clone() } else { -self.b.clone() };
        sign_of(&self.a, &b, self.d)
    }

    pub fn is_totally_positive(&self) -> bool {
        let places = if self.d == 1 { 1 } else { 2 };
        (0..places).all(|p| self.sign_at(p) > 0)
    }

    /// Integral over Z: trace and norm are integers.
    pub fn is_integral(&self) -> bool {
        self.trace().is_integer() && self.norm().is_integer()
    }

    pub fn coords(&self) -> Vec<Rat> {
        if self.d == 1 {
            vec![self.a.clone()]
        } else {
            vec![self.a.clone(), self.b.clone()]
        }
    }

    pub fn from_coords(d: i64, c: &[Rat]) -> FElem {
        if d == 1 {
            FElem::from_rat(1, c[0].clone())
        } else {
            FElem::new(d, c[0].clone(), c[1].clone())
        }
    }
}

/// Sign of `a + b*sqrt(d)` for the positive square root.
fn sign_of(a: &Rat, b: &Rat, d: i64) -> i8 {
    let sa = sgn(a);
    let sb = if d == 1 { 0 } else { sgn(b) };
    if d == 1 {
        return sgn(&(a + b));
    }
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    let lhs = a * a;
    let rhs = b * b * Rat::from_integer(Int::from(d));
    if lhs > rhs {
        sa
    } else {
        sb
    }
}

fn sgn(x: &Rat) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl Add for &FElem {
    type Output = FElem;
    fn add(self, o: &FElem) -> FElem {
        FElem { a: &self.a + &o.a, b: &self.b + &o.b, d: self.d }
    }
}

impl Sub for &FElem {
    type Output = FElem;
    fn sub(self, o: &FElem) -> FElem {
        FElem { a: &self.a - &o.a, b: &self.b - &o.b, d: self.d }
    }
}

impl Mul for &FElem {
    type Output = FElem;
    fn mul(self, o: &FElem) -> FElem {
        debug_assert_eq!(self.d, o.d);
        let d = Rat::from_integer(Int::from(self.d));
        FElem { a: &self.a * &o.a + d * &self.b * &o.b, b: &self.a * &o.b + &self.b * &o.a, d: self.d }
    }
}

impl Neg for &FElem {
    type Output = FElem;
    fn neg(self) -> FElem {
        FElem { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }
}

impl fmt::Display for FElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({})", self.b, self.d);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(f, "{} {} {}*sqrt({})", self.a, sign, self.b.abs(), self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs_and_norms() {
        let e = FElem::from_ints(7, 8, 3);
        assert_eq!(e.norm(), Rat::one());
        assert!(e.is_totally_positive());
        let s = FElem::sqrt_d(7);
        assert_eq!(s.sign_at(0), 1);
        assert_eq!(s.sign_at(1), -1);
    }
}
