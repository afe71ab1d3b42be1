//! Class numbers of CM fields by ideal enumeration, and of imaginary
//! quadratic orders by reduced forms.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::algebra::lattice_product;
use crate::arith::int::primes_up_to;
use crate::arith::lattice::{lll_gram, short_vectors_big};
use crate::cmorders::field::CMField;
use crate::error::{Error, Result};
use crate::numberfield::forms::FormClassGroup;
use crate::numberfield::ideal::{prime_ideals_above, QuadIdeal};
use crate::{Int, Lattice, Rat};

/// Number of reduced primitive positive definite forms of discriminant `disc < 0`.
pub fn imaginary_form_class_number(disc: i64) -> usize {
    assert!(disc < 0 && disc.rem_euclid(4) <= 1, "not a negative discriminant");
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

impl CMField {
    pub fn ideal_mul(&self, a: &Lattice, b: &Lattice) -> Lattice {
        lattice_product(self, a, b)
    }

    pub fn ideal_conj(&self, a: &Lattice) -> Lattice {
        let rows: Vec<Vec<Rat>> = a.basis().iter().map(|c| self.coords(&self.from_coords(c).conj())).collect();
        Lattice::from_rows(self.degree(), &rows)
    }

    /// `N_{K/F}(A) = (A conj(A)) ∩ F` for a fractional ideal `A` of O_K.
    pub fn relative_norm_ideal(&self, a: &Lattice) -> QuadIdeal {
        let n = self.f.degree();
        let prod = self.ideal_mul(a, &self.ideal_conj(a));
        let ys: Vec<usize> = (n..2 * n).collect();
        let inter = prod.intersect_zero_coords(&ys);
        let rows: Vec<Vec<Rat>> = inter.basis().into_iter().map(|r| r[..n].to_vec()).collect();
        QuadIdeal::from_lattice(&self.f, Lattice::from_rows(n, &rows))
    }

    pub fn ideal_norm(&self, a: &Lattice) -> Rat {
        a.covolume() / self.ring.covolume()
    }

    /// Whether the integral ideal `A` of O_K is principal. A generator `x`
    /// satisfies `x conj(x) = beta` for a totally positive generator `beta`
    /// of `N_{K/F}(A)` (up to totally positive units modulo norms), and the
    /// positive form `Tr_{F/Q}(x conj(x)/beta)` then attains its least
    /// possible value `[F:Q]`.
    pub fn is_principal(&self, group: &FormClassGroup, a: &Lattice) -> bool {
        let norm_ideal = self.relative_norm_ideal(a);
        let Some(beta0) = group.narrow_generator(&self.f, &norm_ideal) else {
            return false;
        };
        let deg = self.f.degree() as i64;
        let basis: Vec<_> = a.basis().iter().map(|c| self.from_coords(c)).collect();
        for u in self.f.totally_positive_unit_classes() {
            let beta_inv = (&beta0 * &u).inv();
            let n = basis.len();
            let mut g = vec![vec![Int::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let t = self.rel_trace(&self.mul(&basis[i], &basis[j].conj()));
                    let v = (&t * &beta_inv).trace();
                    assert!(v.is_integer(), "norm form is not integral");
                    g[i][j] = v.to_integer();
                }
            }
            let mut found = false;
            short_vectors_big(&g, &Int::from(2 * deg), |_, _| {
                found = true;
                false
            });
            if found {
                return true;
            }
        }
        false
    }

    /// Class of `X conj(Y) conj(N(Y))`, equal to `[X][Y]^{-1}`.
    fn quotient_ideal(&self, x: &Lattice, y: &Lattice) -> Lattice {
        let mut q = self.ideal_mul(x, &self.ideal_conj(y));
        if !self.f.is_rational() {
            let ny = self.relative_norm_ideal(y).conj();
            q = self.ideal_mul(&q, &self.extend_ideal(&ny));
        }
        q
    }

    pub fn equivalent(&self, group: &FormClassGroup, x: &Lattice, y: &Lattice) -> bool {
        self.is_principal(group, &self.quotient_ideal(x, y))
    }

    /// Prime ideals of O_K of norm at most `bound`.
    pub fn small_primes(&self, bound: u64) -> Vec<Lattice> {
        let mut out = Vec::new();
        for p in primes_up_to(bound) {
            for q in prime_ideals_above(&self.f, p) {
                if q.norm() > bound {
                    continue;
                }
                for big in self.primes_above(&q) {
                    if big.norm <= bound {
                        out.push(big.lattice);
                    }
                }
            }
        }
        out
    }

    /// `A^{-1}` for an integral ideal, via `A conj(A) = N_{K/F}(A) O_K`.
    pub fn ideal_inverse(&self, a: &Lattice) -> Lattice {
        let n = self.relative_norm_ideal(a).inverse(&self.f);
        self.ideal_mul(&self.ideal_conj(a), &self.extend_ideal(&n))
    }

    /// An element of `a` that is short for `Tr_{K/Q}(x conj(x))`.
    fn short_element(&self, a: &Lattice) -> Vec<Rat> {
        let basis = a.basis();
        let elems: Vec<_> = basis.iter().map(|c| self.from_coords(c)).collect();
        let n = elems.len();
        let mut g = vec![vec![Int::zero(); n]; n];
        let scale = a.den() * a.den();
        for i in 0..n {
            for j in 0..n {
                let t = self.abs_trace(&self.mul(&elems[i], &elems[j].conj())) * Rat::from_integer(scale.clone());
                g[i][j] = t.to_integer();
            }
        }
        let (u, _) = lll_gram(&g);
        let mut v = vec![Rat::zero(); n];
        for (c, b) in u[0].iter().zip(&basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += Rat::from_integer(c.clone()) * bi;
            }
        }
        v
    }

    /// A small integral ideal in the class of the integral ideal `a`.
    pub fn reduce_ideal(&self, a: &Lattice) -> Lattice {
        let mut cur = a.clone();
        for _ in 0..2 {
            let alpha = self.short_element(&cur);
            let inv = self.ideal_inverse(&cur);
            cur = crate::arith::algebra::scale_lattice(self, &alpha, &inv);
        }
        cur
    }

    /// `h(O_K)`: the subgroup generated by the primes below the Minkowski
    /// bound is grown one generator at a time by its cosets. Fails when the
    /// bound exceeds `budget`.
    pub fn class_number(&self, group: &FormClassGroup, budget: u64) -> Result<usize> {
        let bound = self.minkowski_bound();
        if bound > budget {
            return Err(Error::BudgetExceeded {
                what: format!("ideal norms for the class number of {} over {}", self.tag, self.f.name()),
                needed: bound,
                budget,
            });
        }
        let narrow_class = |x: &Lattice| group.class_of(&self.f, &self.relative_norm_ideal(x));
        let mut reps: Vec<(Lattice, usize)> = vec![(self.ring.clone(), narrow_class(&self.ring))];
        let member = |reps: &[(Lattice, usize)], z: &Lattice| {
            let c = narrow_class(z);
            reps.iter().any(|(r, rc)| *rc == c && self.equivalent(group, z, r))
        };
        for p in self.small_primes(bound) {
            if member(&reps, &p) {
                continue;
            }
            let mut powers = vec![p.clone()];
            loop {
                let next = self.reduce_ideal(&self.ideal_mul(powers.last().unwrap(), &p));
                if member(&reps, &next) {
                    break;
                }
                powers.push(next);
            }
            let mut grown = Vec::with_capacity(reps.len() * powers.len());
            for x in &powers {
                for (r, _) in &reps {
                    let z = self.reduce_ideal(&self.ideal_mul(r, x));
                    let c = narrow_class(&z);
                    grown.push((z, c));
                }
            }
            reps.extend(grown);
        }
        Ok(reps.len())
    }
}

/// `|(O_K / f O_K)^x| / |(O_F / f)^x|` as an exact integer, from the
/// decomposition types of the primes dividing the conductor.
pub fn unit_index_ratio(k: &CMField, conductor: &[(crate::numberfield::ideal::PrimeIdeal, u32)]) -> Int {
    use crate::numberfield::field::Splitting;
    let mut r = Rat::one();
    for (q, e) in conductor {
        let n = Rat::from_integer(Int::from(q.norm()));
        let chi = match k.splitting_of(q) {
            Splitting::Split => Rat::one(),
            Splitting::Inert => -Rat::one(),
            Splitting::Ramified => Rat::zero(),
        };
        r *= n.pow(*e as i32) * (Rat::one() - chi / &n);
    }
    assert!(r.is_integer());
    r.to_integer()
}

/// `h(O_F + f O_K) = h(O_K) * ratio / [O_K^x : B^x]`.
pub fn order_class_number(h_max: usize, ratio: &Int, unit_index: usize) -> Result<u64> {
    let num = Int::from(h_max) * ratio;
    let (q, r) = num.div_rem(&Int::from(unit_index));
    if !r.is_zero() || !q.is_positive() {
        return Err(Error::InvariantViolation(format!(
            "order class number {num}/{unit_index} is not a positive integer"
        )));
    }
    Ok(q.to_u64().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::field::RealQuadraticField;
    use crate::numberfield::forms::narrow_class_group;

    #[test]
    fn imaginary_quadratic_values() {
        assert_eq!(imaginary_form_class_number(-3), 1);
        assert_eq!(imaginary_form_class_number(-4), 1);
        assert_eq!(imaginary_form_class_number(-20), 2);
        assert_eq!(imaginary_form_class_number(-23), 3);
        assert_eq!(imaginary_form_class_number(-56), 4);
        assert_eq!(imaginary_form_class_number(-16), 1);
    }

    #[test]
    fn enumeration_over_q() {
        let q = RealQuadraticField::rationals();
        let g = narrow_class_group(&q);
        for m in [1, 2, 3, 5, 6, 23, 47] {
            let k = CMField::with_rational_delta(&q, m, "K").unwrap();
            let disc = k.disc.to_i64().unwrap();
            assert_eq!(k.class_number(&g, 10_000).unwrap(), imaginary_form_class_number(disc), "m = {m}");
        }
    }

    #[test]
    fn enumeration_over_sqrt7() {
        let f = RealQuadraticField::new(7).unwrap();
        let g = narrow_class_group(&f);
        let k = CMField::with_rational_delta(&f, 1, "F(i)").unwrap();
        assert_eq!(k.class_number(&g, 10_000).unwrap(), 1);
    }
}
