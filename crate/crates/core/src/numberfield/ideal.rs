//! Fractional ideals of O_F as Hermite-normal-form Z-lattices, and the
//! prime ideals above a rational prime.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::algebra::{lattice_product, scale_lattice};
use crate::arith::int::{mod_u64, sqrt_mod_prime};
use crate::numberfield::elem::FElem;
use crate::numberfield::field::{RealQuadraticField, Splitting};
use crate::{Int, Lattice, Rat};

/// A fractional ideal of O_F, stored as a Z-lattice in the coordinates of
/// `a + b*sqrt(d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadIdeal {
    d: i64,
    lat: Lattice,
}

impl QuadIdeal {
    /// The O_F-module generated by `gens`.
    pub fn from_generators(f: &RealQuadraticField, gens: &[FElem]) -> QuadIdeal {
        let basis = f.integral_basis();
        let mut rows = Vec::new();
        for g in gens {
            for w in &basis {
                rows.push((g * w).coords());
            }
        }
        QuadIdeal { d: f.d, lat: Lattice::from_rows(f.degree(), &rows) }
    }

    pub fn principal(f: &RealQuadraticField, x: &FElem) -> QuadIdeal {
        Self::from_generators(f, std::slice::from_ref(x))
    }

    pub fn unit(f: &RealQuadraticField) -> QuadIdeal {
        QuadIdeal { d: f.d, lat: f.ring_of_integers().clone() }
    }

    pub fn from_lattice(f: &RealQuadraticField, lat: Lattice) -> QuadIdeal {
        QuadIdeal { d: f.d, lat }
    }

    /// The ideal `[a, (b + sqrt(D))/2]` for `b^2 = D mod 4a`.
    pub fn from_form_root(f: &RealQuadraticField, a: &Int, b: &Int) -> QuadIdeal {
        let second = root_element(f, b);
        Self::from_generators(f, &[f.from_int(a), second])
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lat
    }

    pub fn basis(&self) -> Vec<FElem> {
        self.lat.basis().iter().map(|c| FElem::from_coords(self.d, c)).collect()
    }

    pub fn mul(&self, f: &RealQuadraticField, other: &QuadIdeal) -> QuadIdeal {
        QuadIdeal { d: self.d, lat: lattice_product(f, &self.lat, &other.lat) }
    }

    pub fn mul_elem(&self, f: &RealQuadraticField, x: &FElem) -> QuadIdeal {
        QuadIdeal { d: self.d, lat: scale_lattice(f, &x.coords(), &self.lat) }
    }

    pub fn pow(&self, f: &RealQuadraticField, e: u32) -> QuadIdeal {
        let mut r = QuadIdeal::unit(f);
        for _ in 0..e {
            r = r.mul(f, self);
        }
        r
    }

    pub fn add(&self, other: &QuadIdeal) -> QuadIdeal {
        QuadIdeal { d: self.d, lat: self.lat.sum(&other.lat) }
    }

    pub fn conj(&self) -> QuadIdeal {
        let rows: Vec<Vec<Rat>> = self.basis().iter().map(|x| x.conj().coords()).collect();
        QuadIdeal { d: self.d, lat: Lattice::from_rows(self.lat.dim(), &rows) }
    }

    pub fn scale(&self, q: &Rat) -> QuadIdeal {
        QuadIdeal { d: self.d, lat: self.lat.scale(q) }
    }

    /// Absolute norm `[O_F : I]` extended multiplicatively.
    pub fn norm(&self, f: &RealQuadraticField) -> Rat {
        self.lat.covolume() / f.ring_of_integers().covolume()
    }

    pub fn contains(&self, x: &FElem) -> bool {
        self.lat.contains(&x.coords())
    }

    pub fn divides(&self, other: &QuadIdeal) -> bool {
        self.lat.contains_lattice(&other.lat)
    }

    pub fn is_integral(&self, f: &RealQuadraticField) -> bool {
        f.ring_of_integers().contains_lattice(&self.lat)
    }

    /// Inverse via `I * conj(I) = N(I) O_F`.
    pub fn inverse(&self, f: &RealQuadraticField) -> QuadIdeal {
        if f.is_rational() {
            let g = &self.basis()[0];
            return QuadIdeal::principal(f, &g.inv());
        }
        let n = self.norm(f);
        self.conj().scale(&n.recip())
    }

    /// Smallest positive integer in the ideal (the ideal must be integral).
    pub fn min_integer(&self) -> Int {
        let sub = if self.lat.dim() == 1 { self.lat.clone() } else { self.lat.intersect_zero_coords(&[1]) };
        sub.basis()[0][0].to_integer()
    }
}

/// `(b + sqrt(D))/2` as an element of F.
pub fn root_element(f: &RealQuadraticField, b: &Int) -> FElem {
    let half = Rat::new(Int::one(), Int::from(2));
    let sqrt_disc_coeff = if f.disc == Int::from(f.d) { half.clone() } else { Rat::one() };
    f.elem(Rat::from_integer(b.clone()) * &half, sqrt_disc_coeff)
}

/// A prime ideal of O_F with its residue data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub p: u64,
    /// Residue degree.
    pub f: u32,
    /// Ramification index.
    pub e: u32,
    /// For degree-one primes of a quadratic field: `b` with `P = [p, (b + sqrt(D))/2]`.
    pub b: Option<Int>,
    /// Position among the primes above `p` (0 or 1).
    pub index: usize,
    pub ideal: QuadIdeal,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }

    /// Short label such as `3`, `3'` (second prime above a split 3) or `5^2`.
    pub fn label(&self) -> String {
        match (self.f, self.index) {
            (2, _) => format!("{}^2", self.p),
            (_, 0) => format!("{}", self.p),
            _ => format!("{}'", self.p),
        }
    }

    /// Image of `sqrt(d)` in the residue field F_p (degree-one primes, odd p).
    pub fn sqrt_d_residue(&self, fld: &RealQuadraticField) -> Option<u64> {
        let b = self.b.as_ref()?;
        if self.p == 2 {
            return None;
        }
        let p = self.p;
        let minus_b = (p - mod_u64(b, p)) % p;
        if fld.disc == Int::from(fld.d) {
            Some(minus_b)
        } else {
            let inv2 = p.div_ceil(2);
            Some(minus_b * inv2 % p)
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// The prime ideals of O_F above `p`, conjugate pairs ordered by the root `b`.
pub fn prime_ideals_above(f: &RealQuadraticField, p: u64) -> Vec<PrimeIdeal> {
    let pi = Int::from(p);
    if f.is_rational() {
        return vec![PrimeIdeal { p, f: 1, e: 1, b: None, index: 0, ideal: QuadIdeal::principal(f, &f.from_int(&pi)) }];
    }
    let disc = &f.disc;
    let find_b = |want_zero: bool| -> Int {
        // smallest b >= 0 with b = D (mod 2) and b^2 = D (mod 4p)
        let four_p = Int::from(4 * p);
        let mut b = Int::zero();
        loop {
            if (&b - disc).is_even() && (&b * &b - disc).is_multiple_of(&four_p) {
                if !want_zero || (&b % &pi).is_zero() {
                    return b;
                }
            }
            b += 1;
        }
    };
    match f.splitting(p) {
        Splitting::Inert => {
            vec![PrimeIdeal { p, f: 2, e: 1, b: None, index: 0, ideal: QuadIdeal::principal(f, &f.from_int(&pi)) }]
        }
        Splitting::Ramified => {
            let b = find_b(true);
            vec![PrimeIdeal { p, f: 1, e: 2, ideal: QuadIdeal::from_form_root(f, &pi, &b), b: Some(b), index: 0 }]
        }
        Splitting::Split => {
            let b = if p == 2 {
                Int::one()
            } else {
                // r and p - r have opposite parity; keep the one matching D
                let r = sqrt_mod_prime(mod_u64(disc, p), p).expect("split prime has a root");
                let cand = Int::from(r);
                if (&cand - disc).is_even() {
                    cand
                } else {
                    Int::from(p - r)
                }
            };
            let nb = -b.clone();
            vec![
                PrimeIdeal { p, f: 1, e: 1, ideal: QuadIdeal::from_form_root(f, &pi, &b), b: Some(b), index: 0 },
                PrimeIdeal { p, f: 1, e: 1, ideal: QuadIdeal::from_form_root(f, &pi, &nb), b: Some(nb), index: 1 },
            ]
        }
    }
}

/// Exponent of the prime `q` in the nonzero integral ideal `a`.
pub fn ideal_valuation(f: &RealQuadraticField, a: &QuadIdeal, q: &PrimeIdeal) -> u32 {
    let mut v = 0;
    let mut power = q.ideal.clone();
    while power.divides(a) {
        v += 1;
        power = power.mul(f, &q.ideal);
    }
    v
}

/// Prime factorization of a nonzero integral ideal.
pub fn factor_ideal(f: &RealQuadraticField, a: &QuadIdeal) -> Vec<(PrimeIdeal, u32)> {
    let n = a.norm(f).to_integer();
    let mut out = Vec::new();
    for p in crate::arith::int::prime_divisors(&n) {
        for q in prime_ideals_above(f, p) {
            let v = ideal_valuation(f, a, &q);
            if v > 0 {
                out.push((q, v));
            }
        }
    }
    out
}
