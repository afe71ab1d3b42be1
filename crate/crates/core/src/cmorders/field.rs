//! CM extensions `K = F(sqrt(delta))`: arithmetic, maximal order, roots of
//! unity, unit coset representatives and decomposition of primes of F.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::algebra::{lattice_product, scale_lattice, Multiplication};
use crate::arith::int::{int_sqrt_exact, legendre, prime_divisors, rat_mod, rat_sqrt, squarefree_part};
use crate::error::{Error, Result};
use crate::numberfield::elem::FElem;
use crate::numberfield::field::{RealQuadraticField, Splitting};
use crate::numberfield::ideal::{PrimeIdeal, QuadIdeal};
use crate::{Int, Lattice, Rat};

/// `x + y*theta` with `theta^2 = delta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElem {
    pub x: FElem,
    pub y: FElem,
}

impl KElem {
    pub fn from_f(x: FElem) -> KElem {
        let y = FElem::zero(x.d);
        KElem { x, y }
    }

    pub fn conj(&self) -> KElem {
        KElem { x: self.x.clone(), y: -&self.y }
    }

    pub fn is_in_f(&self) -> bool {
        self.y.is_zero()
    }
}

/// Which family a CM extension belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CMKind {
    /// `F(sqrt(-m))` for a positive squarefree integer `m`.
    Rational(i64),
    /// `Q(zeta5)` over `Q(sqrt 5)`.
    Zeta5,
}

/// A CM extension `K/F` together with its maximal order and unit data.
#[derive(Clone, Debug)]
pub struct CMField {
    pub f: RealQuadraticField,
    pub kind: CMKind,
    pub delta: FElem,
    pub tag: String,
    /// Maximal order as a lattice in the coordinates `[x.., y..]`.
    pub ring: Lattice,
    /// Signed absolute discriminant of K.
    pub disc: Int,
    /// All roots of unity in K.
    pub roots_of_unity: Vec<KElem>,
    /// A unit with `eta^2 = zeta * eps` when the Hasse unit index is 2.
    pub eta: Option<KElem>,
}

impl Multiplication for CMField {
    fn dim(&self) -> usize {
        2 * self.f.degree()
    }

    fn mul_coords(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let x = self.from_coords(a);
        let y = self.from_coords(b);
        self.coords(&self.mul(&x, &y))
    }
}

impl CMField {
    /// `F(sqrt(-m))`.
    pub fn with_rational_delta(f: &RealQuadraticField, m: i64, tag: &str) -> Result<CMField> {
        if m <= 0 || squarefree_part(m) != m {
            return Err(Error::InvalidInput(format!("CM parameter {m} must be positive and squarefree")));
        }
        let delta = f.int(-m);
        Self::build(f, CMKind::Rational(m), delta, tag)
    }

    /// `Q(zeta5) = F(sqrt((-5 - sqrt 5)/2))` over `F = Q(sqrt 5)`.
    pub fn zeta5(f: &RealQuadraticField) -> Result<CMField> {
        if f.d != 5 {
            return Err(Error::InvalidInput("Q(zeta5) is a CM extension of Q(sqrt 5) only".into()));
        }
        let half = Rat::new(Int::one(), Int::from(2));
        let delta = f.elem(Rat::from_integer(Int::from(-5)) * &half, -half.clone());
        Self::build(f, CMKind::Zeta5, delta, "F(zeta5)")
    }

    fn build(f: &RealQuadraticField, kind: CMKind, delta: FElem, tag: &str) -> Result<CMField> {
        let mut k = CMField {
            f: f.clone(),
            kind,
            delta,
            tag: tag.to_string(),
            ring: Lattice::from_rows(1, &[vec![Rat::one()]]),
            disc: Int::zero(),
            roots_of_unity: Vec::new(),
            eta: None,
        };
        k.ring = k.maximal_order()?;
        k.disc = k.discriminant(&k.ring);
        k.roots_of_unity = k.find_roots_of_unity();
        k.eta = k.find_eta();
        Ok(k)
    }

    pub fn d(&self) -> i64 {
        self.f.d
    }

    pub fn degree(&self) -> usize {
        2 * self.f.degree()
    }

    pub fn elem(&self, x: FElem, y: FElem) -> KElem {
        KElem { x, y }
    }

    pub fn theta(&self) -> KElem {
        KElem { x: FElem::zero(self.d()), y: FElem::one(self.d()) }
    }

    pub fn one(&self) -> KElem {
        KElem::from_f(FElem::one(self.d()))
    }

    pub fn coords(&self, z: &KElem) -> Vec<Rat> {
        let mut c = z.x.coords();
        c.extend(z.y.coords());
        c
    }

    pub fn from_coords(&self, c: &[Rat]) -> KElem {
        let n = self.f.degree();
        KElem { x: FElem::from_coords(self.d(), &c[..n]), y: FElem::from_coords(self.d(), &c[n..]) }
    }

    pub fn add(&self, a: &KElem, b: &KElem) -> KElem {
        KElem { x: &a.x + &b.x, y: &a.y + &b.y }
    }

    pub fn sub(&self, a: &KElem, b: &KElem) -> KElem {
        KElem { x: &a.x - &b.x, y: &a.y - &b.y }
    }

    pub fn neg(&self, a: &KElem) -> KElem {
        KElem { x: -&a.x, y: -&a.y }
    }

    pub fn mul(&self, a: &KElem, b: &KElem) -> KElem {
        let x = &(&a.x * &b.x) + &(&(&a.y * &b.y) * &self.delta);
        let y = &(&a.x * &b.y) + &(&a.y * &b.x);
        KElem { x, y }
    }

    pub fn scale(&self, s: &FElem, a: &KElem) -> KElem {
        KElem { x: s * &a.x, y: s * &a.y }
    }

    /// Relative trace `Tr_{K/F}`.
    pub fn rel_trace(&self, a: &KElem) -> FElem {
        &a.x + &a.x
    }

    /// Relative norm `N_{K/F}`.
    pub fn rel_norm(&self, a: &KElem) -> FElem {
        &(&a.x * &a.x) - &(&(&a.y * &a.y) * &self.delta)
    }

    /// `Tr_{K/Q}`.
    pub fn abs_trace(&self, a: &KElem) -> Rat {
        self.rel_trace(a).trace()
    }

    pub fn abs_norm(&self, a: &KElem) -> Rat {
        self.rel_norm(a).norm()
    }

    pub fn inv(&self, a: &KElem) -> KElem {
        let n = self.rel_norm(a).inv();
        self.scale(&n, &a.conj())
    }

    pub fn is_integral(&self, a: &KElem) -> bool {
        self.f.is_integral(&self.rel_trace(a)) && self.f.is_integral(&self.rel_norm(a))
    }

    pub fn contains(&self, lat: &Lattice, a: &KElem) -> bool {
        lat.contains(&self.coords(a))
    }

    /// Image of a lattice of F inside K (`y = 0`).
    pub fn embed_f_lattice(&self, l: &Lattice) -> Lattice {
        let n = self.f.degree();
        let rows: Vec<Vec<Rat>> = l
            .basis()
            .into_iter()
            .map(|mut r| {
                r.extend(std::iter::repeat_n(Rat::zero(), n));
                r
            })
            .collect();
        Lattice::from_rows(self.degree(), &rows)
    }

    /// `a O_K` for a fractional ideal `a` of F.
    pub fn extend_ideal(&self, a: &QuadIdeal) -> Lattice {
        lattice_product(self, &self.embed_f_lattice(a.lattice()), &self.ring)
    }

    /// The order `O_F + f O_K`.
    pub fn order_of_conductor(&self, conductor: &QuadIdeal) -> Lattice {
        self.embed_f_lattice(self.f.ring_of_integers()).sum(&self.extend_ideal(conductor))
    }

    /// `det(Tr_{K/Q}(e_i e_j))` for a full-rank lattice.
    pub fn discriminant(&self, lat: &Lattice) -> Int {
        let basis: Vec<KElem> = lat.basis().iter().map(|c| self.from_coords(c)).collect();
        let n = basis.len();
        let mut m = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                m[i][j] = self.abs_trace(&self.mul(&basis[i], &basis[j]));
            }
        }
        let det = rat_det(m);
        assert!(det.is_integer(), "discriminant of a non-integral lattice");
        det.to_integer()
    }

    /// Square root in F, if one exists.
    pub fn sqrt_in_f(&self, u: &FElem) -> Option<FElem> {
        sqrt_in_f(&self.f, u)
    }

    /// Square root in K, if one exists.
    pub fn sqrt_in_k(&self, z: &KElem) -> Option<KElem> {
        let d = self.d();
        if z.y.is_zero() {
            if let Some(s) = self.sqrt_in_f(&z.x) {
                return Some(KElem::from_f(s));
            }
            let q = z.x.div(&self.delta);
            return self.sqrt_in_f(&q).map(|s| KElem { x: FElem::zero(d), y: s });
        }
        let n = self.sqrt_in_f(&self.rel_norm(z))?;
        let half = Rat::new(Int::one(), Int::from(2));
        for sign in [1i64, -1] {
            let cand = (&z.x + &n.scale(&Rat::from_integer(Int::from(sign)))).scale(&half);
            if let Some(p) = self.sqrt_in_f(&cand) {
                if p.is_zero() {
                    continue;
                }
                let q = z.y.div(&(&p + &p));
                let r = KElem { x: p, y: q };
                if self.mul(&r, &r) == *z {
                    return Some(r);
                }
            }
        }
        None
    }

    fn integral_generators(&self) -> Vec<KElem> {
        let d = self.d();
        let half = Rat::new(Int::one(), Int::from(2));
        match self.kind {
            CMKind::Zeta5 => {
                let z = self.zeta5_elem();
                let mut out = vec![self.one()];
                for _ in 0..3 {
                    let last = out.last().unwrap().clone();
                    out.push(self.mul(&last, &z));
                }
                out
            }
            CMKind::Rational(m) => {
                let mut gens: Vec<KElem> = self.f.integral_basis().into_iter().map(KElem::from_f).collect();
                let theta = self.theta();
                gens.push(quadratic_generator(&theta, -m, &half, self));
                if !self.f.is_rational() {
                    // sqrt(-m d) = sqrt(d) * theta
                    let t = KElem { x: FElem::zero(d), y: FElem::sqrt_d(d) };
                    let raw = -m * d;
                    let core = squarefree_part(raw);
                    let k = int_sqrt_exact(&Int::from(raw / core)).expect("square cofactor");
                    let s = self.scale(&FElem::from_rat(d, Rat::new(Int::one(), k)), &t);
                    gens.push(quadratic_generator(&s, core, &half, self));
                }
                gens
            }
        }
    }

    fn zeta5_elem(&self) -> KElem {
        let half = Rat::new(Int::one(), Int::from(2));
        let c = self.f.elem(-half.clone(), half.clone());
        KElem { x: c.scale(&half), y: FElem::from_rat(self.d(), half) }
    }

    /// Expected discriminant: product of the discriminants of the quadratic
    /// subfields for biquadratic K, `125` for `Q(zeta5)`.
    fn expected_disc(&self) -> Int {
        match self.kind {
            CMKind::Zeta5 => Int::from(125),
            CMKind::Rational(m) => {
                let dk = fundamental_disc(-m);
                if self.f.is_rational() {
                    Int::from(dk)
                } else {
                    let d3 = fundamental_disc(squarefree_part(-m * self.d()));
                    &self.f.disc * Int::from(dk) * Int::from(d3)
                }
            }
        }
    }

    fn ring_closure(&self, mut l: Lattice) -> Lattice {
        loop {
            let next = l.sum(&lattice_product(self, &l, &l));
            if next == l {
                return l;
            }
            l = next;
        }
    }

    fn maximal_order(&self) -> Result<Lattice> {
        let rows: Vec<Vec<Rat>> = self.integral_generators().iter().map(|g| self.coords(g)).collect();
        let mut l = self.ring_closure(Lattice::from_rows(self.degree(), &rows));
        let target = self.expected_disc();
        loop {
            let disc = self.discriminant(&l);
            let ratio = Rat::new(disc.clone(), target.clone());
            if ratio.is_one() {
                return Ok(l);
            }
            if !ratio.is_integer() {
                return Err(Error::InvariantViolation(format!("order discriminant {disc} vs field {target}")));
            }
            let index_sq = ratio.to_integer();
            let mut grown = false;
            for p in prime_divisors(&index_sq) {
                if let Some(x) = self.p_saturating_element(&l, p) {
                    let extra = Lattice::from_rows(self.degree(), &[self.coords(&x)]);
                    l = self.ring_closure(l.sum(&extra));
                    grown = true;
                    break;
                }
            }
            if !grown {
                return Err(Error::InvariantViolation(format!(
                    "saturation stalled with discriminant {disc}, expected {target}"
                )));
            }
        }
    }

    /// An integral element of `(1/p) L` outside `L`.
    fn p_saturating_element(&self, l: &Lattice, p: u64) -> Option<KElem> {
        let basis = l.basis();
        let n = basis.len();
        let total = (p as usize).pow(n as u32);
        let inv_p = Rat::new(Int::one(), Int::from(p));
        for idx in 1..total {
            let mut rem = idx;
            let mut v = vec![Rat::zero(); n];
            for b in &basis {
                let c = (rem % p as usize) as i64;
                rem /= p as usize;
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += bi * Rat::from_integer(Int::from(c));
                }
            }
            let v: Vec<Rat> = v.iter().map(|x| x * &inv_p).collect();
            let x = self.from_coords(&v);
            if self.is_integral(&x) {
                return Some(x);
            }
        }
        None
    }

    fn find_roots_of_unity(&self) -> Vec<KElem> {
        let d = self.d();
        let mut gens = vec![KElem::from_f(FElem::from_int(d, -1))];
        if let Some(i) = self.sqrt_in_k(&KElem::from_f(FElem::from_int(d, -1))) {
            if let Some(z8) = self.sqrt_in_k(&i) {
                gens.push(z8);
            }
            gens.push(i);
        }
        if let Some(s) = self.sqrt_in_k(&KElem::from_f(FElem::from_int(d, -3))) {
            let half = FElem::from_rat(d, Rat::new(Int::one(), Int::from(2)));
            gens.push(self.scale(&half, &self.add(&KElem::from_f(FElem::from_int(d, -1)), &s)));
        }
        if self.kind == CMKind::Zeta5 {
            gens.push(self.zeta5_elem());
        }
        let mut group: BTreeMap<Vec<Rat>, KElem> = BTreeMap::new();
        let one = self.one();
        group.insert(self.coords(&one), one);
        loop {
            let current: Vec<KElem> = group.values().cloned().collect();
            let before = group.len();
            for a in &current {
                for g in &gens {
                    let p = self.mul(a, g);
                    group.entry(self.coords(&p)).or_insert(p);
                }
            }
            if group.len() == before {
                break;
            }
        }
        group.into_values().collect()
    }

    fn find_eta(&self) -> Option<KElem> {
        let eps = self.f.fund_unit.as_ref()?;
        for z in &self.roots_of_unity {
            let target = self.scale(eps, z);
            if let Some(e) = self.sqrt_in_k(&target) {
                if self.is_integral(&e) {
                    return Some(e);
                }
            }
        }
        None
    }

    pub fn w_k(&self) -> usize {
        self.roots_of_unity.len()
    }

    /// Hasse unit index `[O_K^x : W_K O_F^x]`.
    pub fn hasse_unit_index(&self) -> usize {
        if self.eta.is_some() {
            2
        } else {
            1
        }
    }

    /// Representatives of `O_K^x / O_F^x`, starting with 1.
    pub fn unit_coset_reps(&self) -> Vec<KElem> {
        let mut base: Vec<KElem> = Vec::new();
        for z in &self.roots_of_unity {
            let mz = self.neg(z);
            if !base.contains(&mz) {
                base.push(z.clone());
            }
        }
        base.sort_by_key(|z| !(z.x.is_one() && z.y.is_zero()));
        let mut out = base.clone();
        if let Some(eta) = &self.eta {
            out.extend(base.iter().map(|z| self.mul(z, eta)));
        }
        out
    }

    /// `[O_K^x : O_F^x]`.
    pub fn w_max(&self) -> usize {
        self.unit_coset_reps().len()
    }

    /// Residue representatives of `O_F / q`.
    pub fn residue_reps(&self, q: &PrimeIdeal) -> Vec<FElem> {
        let p = q.p as i64;
        if q.f == 1 {
            (0..p).map(|a| self.f.int(a)).collect()
        } else {
            let mut out = Vec::new();
            for u in 0..p {
                for v in 0..p {
                    out.push(self.f.from_basis_coords(&Int::from(u), &Int::from(v)));
                }
            }
            out
        }
    }

    /// A basis element `t` of O_K with `O_K = O_F[t]` locally at `q`.
    fn local_generator(&self, q: &PrimeIdeal) -> KElem {
        let sub = self.embed_f_lattice(self.f.ring_of_integers()).sum(&self.extend_ideal(&q.ideal));
        self.ring
            .basis()
            .iter()
            .map(|c| self.from_coords(c))
            .find(|t| !self.contains(&sub, t))
            .expect("O_K is not contained in O_F + q O_K")
    }

    /// Prime ideals of O_K above `q`, via the factorization of the
    /// characteristic polynomial of a local generator.
    pub fn primes_above(&self, q: &PrimeIdeal) -> Vec<KPrime> {
        let t = self.local_generator(q);
        let tr = self.rel_trace(&t);
        let nm = self.rel_norm(&t);
        let roots: Vec<FElem> =
            self.residue_reps(q).into_iter().filter(|r| q.ideal.contains(&(&(&(r * r) - &(&tr * r)) + &nm))).collect();
        let q_ext = self.extend_ideal(&q.ideal);
        let n = q.norm();
        let make = |r: &FElem| {
            let g = self.sub(&t, &KElem::from_f(r.clone()));
            q_ext.sum(&scale_lattice(self, &self.coords(&g), &self.ring))
        };
        match roots.len() {
            0 => vec![KPrime { below: q.clone(), lattice: q_ext, norm: n * n, splitting: Splitting::Inert }],
            1 => vec![KPrime { below: q.clone(), lattice: make(&roots[0]), norm: n, splitting: Splitting::Ramified }],
            _ => roots
                .iter()
                .map(|r| KPrime { below: q.clone(), lattice: make(r), norm: n, splitting: Splitting::Split })
                .collect(),
        }
    }

    /// Decomposition type of a prime of F in K. For odd `q` this reads the
    /// discriminant of a local generator in the residue field instead of
    /// searching for roots.
    pub fn splitting_of(&self, q: &PrimeIdeal) -> Splitting {
        if q.p == 2 {
            return self.primes_above(q)[0].splitting;
        }
        let p = q.p;
        let t = self.local_generator(q);
        let (tr, nm) = (self.rel_trace(&t), self.rel_norm(&t));
        let disc = &(&tr * &tr) - &(&nm * &self.f.int(4));
        if q.ideal.contains(&disc) {
            return Splitting::Ramified;
        }
        // a unit of F_{p^2} is a square iff its norm to F_p is
        let residue = if q.f == 2 {
            rat_mod(&disc.norm(), p)
        } else {
            let s = q.sqrt_d_residue(&self.f).unwrap_or(0);
            rat_mod(&disc.a, p).zip(rat_mod(&disc.b, p)).map(|(a, b)| (a + b * s % p) % p)
        };
        match residue.map(|r| legendre(r, p)) {
            Some(1) => Splitting::Split,
            Some(-1) => Splitting::Inert,
            _ => self.primes_above(q)[0].splitting,
        }
    }

    /// Narrow Minkowski-type bound: every ideal class of O_K contains an
    /// integral ideal of norm at most the returned integer.
    pub fn minkowski_bound(&self) -> u64 {
        // rational upper bounds for 1/pi and 1/pi^2
        let inv_pi = Rat::new(Int::from(31831), Int::from(100000));
        let inv_pi2 = Rat::new(Int::from(10133), Int::from(100000));
        let c = if self.f.is_rational() {
            Rat::from_integer(Int::from(2)) * inv_pi
        } else {
            Rat::new(Int::from(3), Int::from(2)) * inv_pi2
        };
        let sq = &c * &c * Rat::from_integer(self.disc.abs());
        crate::arith::int::rat_floor_sqrt(&sq).to_u64().unwrap()
    }
}

/// A prime ideal of O_K.
#[derive(Clone, Debug)]
pub struct KPrime {
    pub below: PrimeIdeal,
    pub lattice: Lattice,
    /// Absolute norm.
    pub norm: u64,
    pub splitting: Splitting,
}

fn quadratic_generator(s: &KElem, core: i64, half: &Rat, k: &CMField) -> KElem {
    // s^2 = core; the ring of integers of Q(s) is Z[(1 + s)/2] or Z[s]
    if core.rem_euclid(4) == 1 {
        let h = FElem::from_rat(k.d(), half.clone());
        k.scale(&h, &k.add(&k.one(), s))
    } else {
        s.clone()
    }
}

fn fundamental_disc(n: i64) -> i64 {
    if n.rem_euclid(4) == 1 {
        n
    } else {
        4 * n
    }
}

fn rat_det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rat::zero();
        };
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        let pv = m[c][c].clone();
        det *= &pv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = &m[r][c] / &pv;
            for k in c..n {
                let sub = &factor * &m[c][k];
                m[r][k] -= sub;
            }
        }
    }
    det
}

/// Square root in Q or a real quadratic field, if one exists.
pub fn sqrt_in_f(f: &RealQuadraticField, u: &FElem) -> Option<FElem> {
    let d = f.d;
    if u.is_zero() {
        return Some(FElem::zero(d));
    }
    if f.is_rational() || u.b.is_zero() {
        if let Some(s) = rat_sqrt(&u.a) {
            return Some(FElem::from_rat(d, s));
        }
        if f.is_rational() {
            return None;
        }
        let q = &u.a / Rat::from_integer(Int::from(d));
        return rat_sqrt(&q).map(|s| f.elem(Rat::zero(), s));
    }
    let n = rat_sqrt(&u.norm())?;
    let half = Rat::new(Int::one(), Int::from(2));
    for cand in [(&u.a + &n) * &half, (&u.a - &n) * &half] {
        if let Some(p) = rat_sqrt(&cand) {
            if p.is_zero() {
                continue;
            }
            let q = &u.b / (&p + &p);
            let r = f.elem(p, q);
            if &r * &r == *u {
                return Some(r);
            }
        }
    }
    None
}

/// Positive squarefree `m` with `F(sqrt(-eps)) = F(sqrt(-m))`, for a totally
/// positive fundamental unit (`(1 + eps)^2 = eps (2 + Tr eps)`).
pub fn sqrt_minus_eps_parameter(f: &RealQuadraticField) -> Option<i64> {
    let eps = f.fund_unit.as_ref()?;
    if f.unit_norm != 1 {
        return None;
    }
    let t = (Rat::from_integer(Int::from(2)) + eps.trace()).to_integer().to_i64().unwrap();
    let m = squarefree_part(t);
    let alt = squarefree_part(m * f.d);
    Some(if alt.abs() < m { alt.abs() } else { m })
}

/// Whether `F(sqrt(-m1)) = F(sqrt(-m2))`: `m1 m2` is a square or `d` times a square.
pub fn same_rational_field(d: i64, m1: i64, m2: i64) -> bool {
    let s = squarefree_part(m1 * m2);
    s == 1 || (d != 1 && s == d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_and_eisenstein() {
        let q = RealQuadraticField::rationals();
        let k = CMField::with_rational_delta(&q, 1, "F(i)").unwrap();
        assert_eq!(k.disc, Int::from(-4));
        assert_eq!(k.w_k(), 4);
        assert_eq!(k.w_max(), 2);
        let k = CMField::with_rational_delta(&q, 3, "F(zeta3)").unwrap();
        assert_eq!(k.disc, Int::from(-3));
        assert_eq!(k.w_k(), 6);
        assert_eq!(k.w_max(), 3);
    }

    #[test]
    fn biquadratic_over_sqrt7() {
        let f = RealQuadraticField::new(7).unwrap();
        let k = CMField::with_rational_delta(&f, 1, "F(i)").unwrap();
        // Q(i, sqrt 7): discriminants 28 * (-4) * (-7)
        assert_eq!(k.disc, Int::from(784));
        assert_eq!(k.hasse_unit_index(), 2);
        assert_eq!(k.w_max(), 4);
        assert_eq!(sqrt_minus_eps_parameter(&f), Some(2));
    }

    #[test]
    fn cyclotomic_five() {
        let f = RealQuadraticField::new(5).unwrap();
        let k = CMField::zeta5(&f).unwrap();
        assert_eq!(k.disc, Int::from(125));
        assert_eq!(k.w_k(), 10);
        assert_eq!(k.w_max(), 5);
    }

    #[test]
    fn decomposition_in_gaussian_field() {
        use crate::numberfield::ideal::prime_ideals_above;
        let q = RealQuadraticField::rationals();
        let k = CMField::with_rational_delta(&q, 1, "F(i)").unwrap();
        let ty = |p| k.splitting_of(&prime_ideals_above(&q, p)[0]);
        assert_eq!(ty(2), Splitting::Ramified);
        assert_eq!(ty(3), Splitting::Inert);
        assert_eq!(ty(5), Splitting::Split);
        assert_eq!(ty(13), Splitting::Split);
        assert_eq!(ty(11), Splitting::Inert);
    }

    #[test]
    fn fast_splitting_agrees_with_root_search() {
        use crate::cmorders::catalog::cm_fields;
        use crate::numberfield::ideal::prime_ideals_above;
        for d in [1, 2, 3, 5, 7, 13, 15, 21, 79] {
            let f = if d == 1 { RealQuadraticField::rationals() } else { RealQuadraticField::new(d).unwrap() };
            for k in cm_fields(&f).unwrap() {
                for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
                    for q in prime_ideals_above(&f, p) {
                        assert_eq!(k.splitting_of(&q), k.primes_above(&q)[0].splitting, "{} at {}", k.tag, q.label());
                    }
                }
            }
        }
    }
}
