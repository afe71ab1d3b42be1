//! Q and real quadratic fields: discriminant, integral basis, fundamental unit.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::algebra::Multiplication;
use crate::arith::int::{is_squarefree, kronecker_prime};
use crate::error::{Error, Result};
use crate::numberfield::elem::FElem;
use crate::{Int, Lattice, Rat};

/// Decomposition type of a rational prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Q (`d == 1`) or the real quadratic field Q(sqrt(d)).
#[derive(Clone, Debug)]
pub struct RealQuadraticField {
    pub d: i64,
    pub disc: Int,
    /// The fundamental unit greater than one; `None` for Q.
    pub fund_unit: Option<FElem>,
    /// Norm of the fundamental unit (`-1` for Q, where `-1` generates the units).
    pub unit_norm: i8,
    ring: Lattice,
}

impl RealQuadraticField {
    pub fn new(d: i64) -> Result<RealQuadraticField> {
        if d == 1 {
            return Ok(Self::rationals());
        }
        if d <= 1 {
            return Err(Error::InvalidInput(format!("field parameter {d} must exceed 1")));
        }
        if !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        let disc = if d % 4 == 1 { Int::from(d) } else { Int::from(4 * d) };
        let eps = fundamental_unit(d);
        let unit_norm = if eps.norm().is_one() { 1 } else { -1 };
        let mut f = RealQuadraticField {
            d,
            disc,
            fund_unit: Some(eps),
            unit_norm,
            ring: Lattice::from_rows(1, &[vec![Rat::one()]]),
        };
        let basis: Vec<Vec<Rat>> = f.integral_basis().iter().map(|x| x.coords()).collect();
        f.ring = Lattice::from_rows(2, &basis);
        Ok(f)
    }

    pub fn rationals() -> RealQuadraticField {
        RealQuadraticField {
            d: 1,
            disc: Int::one(),
            fund_unit: None,
            unit_norm: -1,
            ring: Lattice::from_rows(1, &[vec![Rat::one()]]),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.d == 1
    }

    pub fn degree(&self) -> usize {
        if self.is_rational() {
            1
        } else {
            2
        }
    }

    pub fn name(&self) -> String {
        if self.is_rational() {
            "Q".to_string()
        } else {
            format!("Q(sqrt({}))", self.d)
        }
    }

    /// Generator of O_F over Z: `sqrt(d)` or `(1 + sqrt(d))/2`.
    pub fn omega(&self) -> FElem {
        if self.is_rational() {
            return FElem::one(1);
        }
        if self.d % 4 == 1 {
            FElem::new(self.d, Rat::new(Int::one(), Int::from(2)), Rat::new(Int::one(), Int::from(2)))
        } else {
            FElem::sqrt_d(self.d)
        }
    }

    pub fn integral_basis(&self) -> Vec<FElem> {
        if self.is_rational() {
            vec![FElem::one(1)]
        } else {
            vec![FElem::one(self.d), self.omega()]
        }
    }

    pub fn ring_of_integers(&self) -> &Lattice {
        &self.ring
    }

    pub fn elem(&self, a: Rat, b: Rat) -> FElem {
        FElem::new(self.d, a, b)
    }

    pub fn int(&self, n: i64) -> FElem {
        FElem::from_int(self.d, n)
    }

    pub fn from_int(&self, n: &Int) -> FElem {
        FElem::from_rat(self.d, Rat::from_integer(n.clone()))
    }

    /// `u + v*omega`.
    pub fn from_basis_coords(&self, u: &Int, v: &Int) -> FElem {
        let w = self.omega();
        &self.from_int(u) + &w.scale(&Rat::from_integer(v.clone()))
    }

    /// Coordinates `(u, v)` with `x = u + v*omega`, if `x` is integral.
    pub fn basis_coords(&self, x: &FElem) -> Option<(Int, Int)> {
        if self.is_rational() {
            return x.a.is_integer().then(|| (x.a.to_integer(), Int::zero()));
        }
        let (u, v) = if self.d % 4 == 1 {
            let v = &x.b * Rat::from_integer(Int::from(2));
            (&x.a - &x.b, v)
        } else {
            (x.a.clone(), x.b.clone())
        };
        (u.is_integer() && v.is_integer()).then(|| (u.to_integer(), v.to_integer()))
    }

    pub fn is_integral(&self, x: &FElem) -> bool {
        self.basis_coords(x).is_some()
    }

    pub fn fund_unit_coords(&self) -> Option<(Int, Int)> {
        self.fund_unit.as_ref().and_then(|e| self.basis_coords(e))
    }

    /// Decomposition of `p` in F via the Kronecker symbol `(D/p)`. Over Q every
    /// prime is reported as `Split` into itself.
    pub fn splitting(&self, p: u64) -> Splitting {
        if self.is_rational() {
            return Splitting::Split;
        }
        match kronecker_prime(&self.disc, p) {
            1 => Splitting::Split,
            -1 => Splitting::Inert,
            _ => Splitting::Ramified,
        }
    }

    /// Totally positive units modulo squares of units: `[1]` or `[1, eps]`.
    pub fn totally_positive_unit_classes(&self) -> Vec<FElem> {
        let mut out = vec![FElem::one(self.d)];
        if let Some(e) = &self.fund_unit {
            if self.unit_norm == 1 {
                out.push(e.clone());
            }
        }
        out
    }
}

impl Multiplication for RealQuadraticField {
    fn dim(&self) -> usize {
        self.degree()
    }

    fn mul_coords(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let a = FElem::from_coords(self.d, x);
        let b = FElem::from_coords(self.d, y);
        (&a * &b).coords()
    }
}

/// Fundamental unit via the continued fraction of omega. The first convergent
/// `p/q` with `N(p - q*omega) = +-1` yields the unit `p - q*conj(omega)`.
fn fundamental_unit(d: i64) -> FElem {
    let dd = Int::from(d);
    let s = dd.sqrt();
    let (mut big_p, mut big_q, tr, nm) = if d % 4 == 1 {
        (Int::one(), Int::from(2), Int::one(), Int::from((1 - d) / 4))
    } else {
        (Int::zero(), Int::one(), Int::zero(), Int::from(-d))
    };
    let (mut p1, mut p2) = (Int::one(), Int::zero());
    let (mut q1, mut q2) = (Int::zero(), Int::one());
    loop {
        let a = (&big_p + &s).div_floor(&big_q);
        let p = &a * &p1 + &p2;
        let q = &a * &q1 + &q2;
        let n = &p * &p - &p * &q * &tr + &q * &q * &nm;
        if n.abs().is_one() {
            let u = &p - &q * &tr;
            let half = Rat::new(Int::one(), Int::from(2));
            return if d % 4 == 1 {
                let qh = Rat::from_integer(q) * half;
                FElem::new(d, Rat::from_integer(u) + &qh, qh)
            } else {
                FElem::new(d, Rat::from_integer(u), Rat::from_integer(q))
            };
        }
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
        let np = &a * &big_q - &big_p;
        let nq = (&dd - &np * &np) / &big_q;
        big_p = np;
        big_q = nq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_of_small_fields() {
        let f = RealQuadraticField::new(7).unwrap();
        assert_eq!(f.disc, Int::from(28));
        assert_eq!(f.fund_unit, Some(FElem::from_ints(7, 8, 3)));
        assert_eq!(f.unit_norm, 1);
        let f = RealQuadraticField::new(5).unwrap();
        assert_eq!(f.fund_unit_coords(), Some((Int::zero(), Int::one())));
        assert_eq!(f.unit_norm, -1);
        let f = RealQuadraticField::new(2).unwrap();
        assert_eq!(f.fund_unit, Some(FElem::from_ints(2, 1, 1)));
        assert!(RealQuadraticField::new(12).is_err());
        assert!(RealQuadraticField::new(0).is_err());
    }

    #[test]
    fn splitting_mod_28() {
        let f = RealQuadraticField::new(7).unwrap();
        assert_eq!(f.splitting(7), Splitting::Ramified);
        assert_eq!(f.splitting(3), Splitting::Split);
        assert_eq!(f.splitting(5), Splitting::Inert);
    }
}
