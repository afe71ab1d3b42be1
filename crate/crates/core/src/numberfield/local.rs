//! Valuations, residue characters and Hilbert symbols at the places of F.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::int::{legendre, mod_u64, rat_mod, rat_valuation, valuation};
use crate::numberfield::elem::FElem;
use crate::numberfield::field::RealQuadraticField;
use crate::numberfield::ideal::PrimeIdeal;
use crate::{Int, Rat};

/// Valuation and unit part of a nonzero element at a prime, with the unit
/// part reduced modulo `p^m`. Only meaningful when the completion is Q_p
/// (Q itself or a split prime of a quadratic field).
fn qp_unit_part(f: &RealQuadraticField, q: &PrimeIdeal, x: &FElem, m: u32) -> (i64, u64) {
    let p = q.p;
    let pm = Int::from(p).pow(m);
    if f.is_rational() || x.b.is_zero() {
        let v = rat_valuation(&x.a, p);
        let unit = &x.a / Rat::from_integer(Int::from(p)).pow(v as i32);
        return (v, rat_mod_big(&unit, &pm));
    }
    let den = x.a.denom().lcm(x.b.denom());
    let big_r = (&x.a * Rat::from_integer(den.clone())).to_integer();
    let big_s = (&x.b * Rat::from_integer(den.clone())).to_integer();
    let norm = &big_r * &big_r - Int::from(f.d) * &big_s * &big_s;
    let k = valuation(&norm, p) + m + 1;
    let pk = Int::from(p).pow(k);
    let t = padic_sqrt_d(f, q, k);
    let image = (&big_r + &big_s * &t).mod_floor(&pk);
    debug_assert!(!image.is_zero());
    let vx = valuation(&image, p);
    let unit_x = (&image / Int::from(p).pow(vx)).mod_floor(&pm);
    let vd = valuation(&den, p);
    let unit_d = (&den / Int::from(p).pow(vd)).mod_floor(&pm);
    let inv_d = mod_inverse(&unit_d, &pm);
    let unit = (unit_x * inv_d).mod_floor(&pm);
    (vx as i64 - vd as i64, unit.to_u64().unwrap())
}

fn rat_mod_big(x: &Rat, m: &Int) -> u64 {
    let inv = mod_inverse(&x.denom().mod_floor(m), m);
    (x.numer() * inv).mod_floor(m).to_u64().unwrap()
}

fn mod_inverse(a: &Int, m: &Int) -> Int {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// `t` with `t^2 = d (mod p^k)` matching the embedding attached to the
/// degree-one prime `q` (split in F).
fn padic_sqrt_d(f: &RealQuadraticField, q: &PrimeIdeal, k: u32) -> Int {
    let p = q.p;
    let d = Int::from(f.d);
    let pk = Int::from(p).pow(k);
    if p == 2 {
        // q = [2, (b + sqrt d)/2] forces t = -b (mod 4)
        let b = q.b.as_ref().expect("degree-one prime");
        let mut t = (-b).mod_floor(&Int::from(4));
        let mut j = 3;
        while j < k + 1 {
            let modulus = Int::one() << (j + 1);
            if !(&t * &t - &d).is_multiple_of(&modulus) {
                t += Int::one() << (j - 1);
            }
            j += 1;
        }
        return t.mod_floor(&pk);
    }
    let t0 = q.sqrt_d_residue(f).expect("odd degree-one prime");
    let mut t = Int::from(t0);
    let mut prec = Int::from(p);
    while prec < pk {
        prec = (&prec * &prec).min(pk.clone());
        let two_t = (Int::from(2) * &t).mod_floor(&prec);
        let inv = mod_inverse(&two_t, &prec);
        t = (&t - (&t * &t - &d) * inv).mod_floor(&prec);
    }
    t
}

/// Normalized valuation of a nonzero element at a prime of F.
pub fn valuation_at(f: &RealQuadraticField, q: &PrimeIdeal, x: &FElem) -> i64 {
    assert!(!x.is_zero(), "valuation of zero");
    if f.is_rational() || (q.f == 1 && q.e == 1) {
        return qp_unit_part(f, q, x, 1).0;
    }
    let p = q.p;
    let vr = (!x.a.is_zero()).then(|| rat_valuation(&x.a, p));
    let vs = (!x.b.is_zero()).then(|| rat_valuation(&x.b, p));
    if q.f == 2 {
        // basis {1, sqrt d} is p-integral for odd p; for p = 2 inert means d = 5 mod 8
        // and the basis {1, omega} must be used
        if p == 2 {
            let (u, v) = to_omega_coords(f, x);
            return min_opt(opt_val(&u, p), opt_val(&v, p));
        }
        return min_opt(vr, vs);
    }
    // ramified
    if p == 2 {
        return ramified_dyadic_valuation(x);
    }
    min_opt(vr.map(|v| 2 * v), vs.map(|v| 2 * v + 1))
}

fn opt_val(x: &Rat, p: u64) -> Option<i64> {
    (!x.is_zero()).then(|| rat_valuation(x, p))
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> i64 {
    match (a, b) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => unreachable!("zero element"),
    }
}

fn to_omega_coords(f: &RealQuadraticField, x: &FElem) -> (Rat, Rat) {
    if f.d % 4 == 1 {
        (&x.a - &x.b, &x.b * Rat::from_integer(Int::from(2)))
    } else {
        (x.a.clone(), x.b.clone())
    }
}

/// Valuation at the ramified prime above 2. The prime is Galois stable, so
/// `2 v(x) = v(N(x)) = 2 v_2(N(x))`.
fn ramified_dyadic_valuation(x: &FElem) -> i64 {
    rat_valuation(&x.norm(), 2)
}

/// Quadratic character of the residue of `x / pi^v` at an odd prime, with
/// uniformizer `p` (unramified) or `sqrt(d)` (ramified).
fn unit_character(f: &RealQuadraticField, q: &PrimeIdeal, x: &FElem) -> i8 {
    let p = q.p;
    debug_assert!(p != 2);
    if f.is_rational() || (q.f == 1 && q.e == 1) {
        let (_, u) = qp_unit_part(f, q, x, 1);
        return legendre(u, p);
    }
    if q.f == 2 {
        let v = valuation_at(f, q, x);
        let scale = Rat::from_integer(Int::from(p)).pow(-(v as i32));
        let r = rat_mod(&(&x.a * &scale), p).unwrap();
        let s = rat_mod(&(&x.b * &scale), p).unwrap();
        let norm = (r * r % p + p - (mod_u64(&Int::from(f.d), p) * (s * s % p)) % p) % p;
        return legendre(norm, p);
    }
    // ramified, uniformizer sqrt(d)
    let v = valuation_at(f, q, x);
    let k = v.div_euclid(2) as i32;
    let dk = Rat::from_integer(Int::from(f.d)).pow(-k);
    let res = if v % 2 == 0 { &x.a * &dk } else { &x.b * &dk };
    legendre(rat_mod(&res, p).unwrap(), p)
}

/// Local Hilbert symbol `(a, b)` at a finite prime, or `None` at a dyadic
/// prime of a quadratic field that is not split (callers use the product
/// formula there).
pub fn hilbert_symbol(f: &RealQuadraticField, q: &PrimeIdeal, a: &FElem, b: &FElem) -> Option<i8> {
    let p = q.p;
    if p == 2 {
        if !(f.is_rational() || (q.f == 1 && q.e == 1)) {
            return None;
        }
        let (alpha, u) = qp_unit_part(f, q, a, 3);
        let (beta, v) = qp_unit_part(f, q, b, 3);
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let e = eps(u) * eps(v) + (alpha.rem_euclid(2) as u64) * omega(v) + (beta.rem_euclid(2) as u64) * omega(u);
        return Some(if e % 2 == 0 { 1 } else { -1 });
    }
    let alpha = valuation_at(f, q, a);
    let beta = valuation_at(f, q, b);
    let q_size = q.norm();
    let mut s: i8 = if (alpha * beta).rem_euclid(2) == 1 && ((q_size - 1) / 2) % 2 == 1 { -1 } else { 1 };
    if beta.rem_euclid(2) == 1 {
        s *= unit_character(f, q, a);
    }
    if alpha.rem_euclid(2) == 1 {
        s *= unit_character(f, q, b);
    }
    Some(s)
}

/// Hilbert symbol at a real place: `-1` iff both entries are negative there.
pub fn hilbert_symbol_real(place: usize, a: &FElem, b: &FElem) -> i8 {
    if a.sign_at(place) < 0 && b.sign_at(place) < 0 {
        -1
    } else {
        1
    }
}

/// Whether `x` is a square in the residue field of an odd prime (x a unit there).
pub fn is_residue_square(f: &RealQuadraticField, q: &PrimeIdeal, x: &FElem) -> bool {
    debug_assert_eq!(valuation_at(f, q, x), 0);
    unit_character(f, q, x) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::ideal::prime_ideals_above;

    #[test]
    fn rational_symbols() {
        let f = RealQuadraticField::rationals();
        let m1 = f.int(-1);
        let two = &prime_ideals_above(&f, 2)[0];
        let eleven = &prime_ideals_above(&f, 11)[0];
        assert_eq!(hilbert_symbol(&f, two, &m1, &m1), Some(-1));
        assert_eq!(hilbert_symbol(&f, two, &m1, &f.int(-11)), Some(1));
        assert_eq!(hilbert_symbol(&f, eleven, &m1, &f.int(-11)), Some(-1));
        assert_eq!(hilbert_symbol(&f, two, &f.int(2), &f.int(3)), Some(-1));
    }

    #[test]
    fn split_prime_valuations() {
        let f = RealQuadraticField::new(7).unwrap();
        let ps = prime_ideals_above(&f, 3);
        let x = FElem::from_ints(7, 2, 1); // norm -3
        let v: Vec<i64> = ps.iter().map(|q| valuation_at(&f, q, &x)).collect();
        assert_eq!(v.iter().sum::<i64>(), 1);
        let ram = &prime_ideals_above(&f, 7)[0];
        assert_eq!(valuation_at(&f, ram, &FElem::sqrt_d(7)), 1);
        assert_eq!(valuation_at(&f, ram, &f.int(49)), 4);
    }
}
