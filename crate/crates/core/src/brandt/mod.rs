//! Explicit orders in definite quaternion algebras over Q and their right
//! ideal classes, used as an independent check of the class number formula.

mod classes;

pub use classes::{ideal_class_set, is_isomorphic, unit_index, RightIdealClassSet};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::algebra::{lattice_product, Multiplication};
use crate::arith::int::{factor, int_sqrt_exact, inv_mod, mod_u64};
use crate::error::{Error, Result};
use crate::quatalg::{EichlerOrderSpec, QuaternionAlgebraSpec};
use crate::{Int, Lattice, Rat};

/// `(a, b)` over Q with basis `1, i, j, ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalQuaternionAlgebra {
    pub a: Int,
    pub b: Int,
}

impl Multiplication for RationalQuaternionAlgebra {
    fn dim(&self) -> usize {
        4
    }

    fn mul_coords(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let a = Rat::from_integer(self.a.clone());
        let b = Rat::from_integer(self.b.clone());
        let ab = &a * &b;
        vec![
            &x[0] * &y[0] + &a * &x[1] * &y[1] + &b * &x[2] * &y[2] - &ab * &x[3] * &y[3],
            &x[0] * &y[1] + &x[1] * &y[0] - &b * &x[2] * &y[3] + &b * &x[3] * &y[2],
            &x[0] * &y[2] + &x[2] * &y[0] + &a * &x[1] * &y[3] - &a * &x[3] * &y[1],
            &x[0] * &y[3] + &x[3] * &y[0] + &x[1] * &y[2] - &x[2] * &y[1],
        ]
    }
}

impl RationalQuaternionAlgebra {
    pub fn new(a: i64, b: i64) -> RationalQuaternionAlgebra {
        RationalQuaternionAlgebra { a: Int::from(a), b: Int::from(b) }
    }

    /// Requires integral `a`, `b` over Q.
    pub fn from_spec(spec: &QuaternionAlgebraSpec) -> Result<RationalQuaternionAlgebra> {
        let ok = |x: &crate::numberfield::FElem| x.b.is_zero() && x.a.is_integer();
        if spec.d != 1 || !ok(&spec.a) || !ok(&spec.b) {
            return Err(Error::InvalidInput("the oracle needs an algebra over Q with integral a, b".into()));
        }
        Ok(RationalQuaternionAlgebra { a: spec.a.a.to_integer(), b: spec.b.a.to_integer() })
    }

    pub fn is_definite(&self) -> bool {
        self.a.is_negative() && self.b.is_negative()
    }

    pub fn conj(&self, x: &[Rat]) -> Vec<Rat> {
        vec![x[0].clone(), -&x[1], -&x[2], -&x[3]]
    }

    pub fn nrd(&self, x: &[Rat]) -> Rat {
        let a = Rat::from_integer(self.a.clone());
        let b = Rat::from_integer(self.b.clone());
        &x[0] * &x[0] - &a * &x[1] * &x[1] - &b * &x[2] * &x[2] + a * b * &x[3] * &x[3]
    }

    pub fn trd(&self, x: &[Rat]) -> Rat {
        &x[0] * Rat::from_integer(Int::from(2))
    }

    /// `trd(x conj(y))`, twice the bilinear form of `nrd`.
    pub fn pairing(&self, x: &[Rat], y: &[Rat]) -> Rat {
        self.trd(&self.mul_coords(x, &self.conj(y)))
    }

    pub fn conj_lattice(&self, l: &Lattice) -> Lattice {
        let rows: Vec<Vec<Int>> = l.int_rows().iter().map(|x| vec![x[0].clone(), -&x[1], -&x[2], -&x[3]]).collect();
        Lattice::from_int_rows(4, rows, l.den().clone())
    }

    /// Product on integer coordinates.
    fn mul_int(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        let (a, b) = (&self.a, &self.b);
        let ab = a * b;
        vec![
            &x[0] * &y[0] + a * &x[1] * &y[1] + b * &x[2] * &y[2] - &ab * &x[3] * &y[3],
            &x[0] * &y[1] + &x[1] * &y[0] - b * &x[2] * &y[3] + b * &x[3] * &y[2],
            &x[0] * &y[2] + &x[2] * &y[0] + a * &x[1] * &y[3] - a * &x[3] * &y[1],
            &x[0] * &y[3] + &x[3] * &y[0] + &x[1] * &y[2] - &x[2] * &y[1],
        ]
    }

    /// `x conj(y)` summed to `trd`, on integer coordinates.
    fn pairing_int(&self, x: &[Int], y: &[Int]) -> Int {
        let (a, b) = (&self.a, &self.b);
        let s = &x[0] * &y[0] - a * &x[1] * &y[1] - b * &x[2] * &y[2] + a * b * &x[3] * &y[3];
        s * 2
    }

    /// The Z-span of the products of two lattices.
    pub fn product(&self, l: &Lattice, m: &Lattice) -> Lattice {
        let mut rows = Vec::with_capacity(16);
        for x in l.int_rows() {
            for y in m.int_rows() {
                rows.push(self.mul_int(x, y));
            }
        }
        Lattice::from_int_rows(4, rows, l.den() * m.den())
    }

    /// Integral Gram matrix of `trd(x conj(y)) / scale` on the basis of `l`.
    pub fn gram(&self, l: &Lattice, scale: &Rat) -> Vec<Vec<Int>> {
        let b = l.int_rows();
        let den = Rat::from_integer(l.den() * l.den()) * scale;
        let mut g = vec![vec![Int::zero(); b.len()]; b.len()];
        for i in 0..b.len() {
            for j in i..b.len() {
                let v = Rat::from_integer(self.pairing_int(&b[i], &b[j])) / &den;
                assert!(v.is_integer(), "norm form is not integral at this scale");
                g[i][j] = v.to_integer();
                g[j][i] = g[i][j].clone();
            }
        }
        g
    }
}

/// An order of the form "maximal order intersected with a level-N Eichler
/// condition" in a definite algebra over Q.
#[derive(Clone, Debug)]
pub struct RationalQuaternionOrder {
    pub algebra: RationalQuaternionAlgebra,
    /// Basis rows in the coordinates `1, i, j, ij`.
    pub lattice: Lattice,
    /// Product of the finite ramified primes.
    pub ram: u64,
    pub level: u64,
}

fn one_vec() -> Vec<Rat> {
    vec![Rat::one(), Rat::zero(), Rat::zero(), Rat::zero()]
}

fn det(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Int::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    d.to_integer()
}

/// Reduced discriminant of an order, from `|det trd(e_i e_j)| = d(O)^2`.
pub fn reduced_discriminant(alg: &RationalQuaternionAlgebra, l: &Lattice) -> Int {
    let b = l.basis();
    let g: Vec<Vec<Int>> =
        b.iter().map(|x| b.iter().map(|y| alg.trd(&alg.mul_coords(x, y)).to_integer()).collect()).collect();
    int_sqrt_exact(&det(&g).abs()).expect("discriminant of an order is a square")
}

/// The ring generated by `l` and 1, if it stays integral within a few
/// rounds of multiplication.
fn ring_closure(alg: &RationalQuaternionAlgebra, l: &Lattice) -> Option<Lattice> {
    let mut cur = l.sum(&Lattice::from_rows(4, &[one_vec()]));
    for _ in 0..8 {
        for x in cur.basis() {
            if !alg.trd(&x).is_integer() || !alg.nrd(&x).is_integer() {
                return None;
            }
        }
        let next = cur.sum(&lattice_product(alg, &cur, &cur));
        if next == cur {
            return Some(cur);
        }
        cur = next;
    }
    None
}

/// Coefficient vectors of `(Z/p)^n` in lexicographic order, zero excluded.
pub(crate) fn residue_vectors(p: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = p.pow(n as u32);
    (1..total).map(move |mut k| {
        let mut v = vec![0; n];
        for c in v.iter_mut() {
            *c = k % p;
            k /= p;
        }
        v
    })
}

pub(crate) fn combine(basis: &[Vec<Rat>], coeffs: &[u64], scale: &Rat) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); 4];
    for (c, b) in coeffs.iter().zip(basis) {
        if *c == 0 {
            continue;
        }
        let c = Rat::from_integer(Int::from(*c));
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += &c * bi;
        }
    }
    v.iter().map(|x| x * scale).collect()
}

/// Basis of `{c : c M = 0}` over F_p for a square matrix `M` given by rows.
fn left_kernel_mod(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    // transpose, then row-reduce to find the null space of M^T
    let mut a: Vec<Vec<u64>> = (0..n).map(|k| (0..n).map(|i| m[i][k] % p).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(r) = (row..n).find(|&r| a[r][col] != 0) else { continue };
        a.swap(r, row);
        let inv = inv_mod(a[row][col], p).expect("p is prime");
        for x in a[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r2 in 0..n {
            if r2 != row && a[r2][col] != 0 {
                let f = a[r2][col];
                for k in 0..n {
                    a[r2][k] = (a[r2][k] + (p - f) * a[row][k]) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; n];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - a[r][free]) % p;
        }
        out.push(v);
    }
    out
}

/// A maximal order containing `Z<1, i, j, ij>`, found by adjoining elements
/// of `(1/p) O` while `d(O)` exceeds the product of the ramified primes.
pub fn maximal_order(alg: &RationalQuaternionAlgebra, ram: u64) -> Result<RationalQuaternionOrder> {
    if !alg.is_definite() {
        return Err(Error::InvalidInput("the oracle needs a definite algebra".into()));
    }
    let std_basis: Vec<Vec<Rat>> =
        (0..4).map(|k| (0..4).map(|c| if c == k { Rat::one() } else { Rat::zero() }).collect()).collect();
    let mut order = Lattice::from_rows(4, &std_basis);
    loop {
        let d = reduced_discriminant(alg, &order);
        let (q, r) = d.div_rem(&Int::from(ram));
        if !r.is_zero() {
            return Err(Error::InvariantViolation(format!("d(O) = {d} is not a multiple of {ram}")));
        }
        if q.is_one() {
            break;
        }
        let p = factor(q.to_u64().expect("small discriminant"))[0].0;
        let basis = order.basis();
        let inv_p = Rat::new(Int::one(), Int::from(p));
        let mut grown = None;
        for coeffs in residue_vectors(p, 4) {
            let x = combine(&basis, &coeffs, &inv_p);
            if !alg.trd(&x).is_integer() || !alg.nrd(&x).is_integer() {
                continue;
            }
            let cand = order.sum(&Lattice::from_rows(4, &[x]));
            if let Some(ring) = ring_closure(alg, &cand) {
                grown = Some(ring);
                break;
            }
        }
        order = grown.ok_or_else(|| Error::SearchExhausted {
            what: format!("integral elements of (1/{p})O"),
            bound: p.pow(4),
        })?;
    }
    Ok(RationalQuaternionOrder { algebra: alg.clone(), lattice: order, ram, level: 1 })
}

/// The Eichler order of level `n` inside the maximal order `max`: for each
/// `p | n`, an element `e` with `trd e = 1`, `nrd e = 0 (mod p)` is a rank-one
/// idempotent of `O/pO = M_2(F_p)`, and the order keeps `x` with
/// `(1 - e) x e in pO`.
pub fn eichler_suborder(max: &RationalQuaternionOrder, n: u64) -> Result<RationalQuaternionOrder> {
    let alg = &max.algebra;
    let mut order = max.lattice.clone();
    for (p, e) in factor(n) {
        if e > 1 {
            return Err(Error::InvalidInput(format!("level {n} is not squarefree")));
        }
        if max.ram % p == 0 {
            return Err(Error::InvalidInput(format!("level prime {p} divides the discriminant {}", max.ram)));
        }
        let basis = order.basis();
        let idem = residue_vectors(p, 4)
            .map(|c| combine(&basis, &c, &Rat::one()))
            .find(|x| mod_u64(&alg.trd(x).to_integer(), p) == 1 && mod_u64(&alg.nrd(x).to_integer(), p) == 0)
            .ok_or_else(|| Error::SearchExhausted { what: format!("rank-one idempotent mod {p}"), bound: p.pow(4) })?;
        let one_minus = {
            let mut v = idem.iter().map(|x| -x).collect::<Vec<_>>();
            v[0] += Rat::one();
            v
        };
        // the F_p-linear map x -> (1 - e) x e on O/pO, in basis coordinates
        let cols: Vec<Vec<u64>> = basis
            .iter()
            .map(|x| {
                let y = alg.mul_coords(&alg.mul_coords(&one_minus, x), &idem);
                order.coords(&y).expect("order is a ring").iter().map(|c| mod_u64(c, p)).collect()
            })
            .collect();
        let kernel = left_kernel_mod(&cols, p);
        let pr = Rat::from_integer(Int::from(p));
        let mut rows: Vec<Vec<Rat>> = basis.iter().map(|x| x.iter().map(|c| c * &pr).collect()).collect();
        rows.extend(kernel.iter().map(|c| combine(&basis, c, &Rat::one())));
        let next = Lattice::from_rows(4, &rows);
        if next.covolume() / order.covolume() != pr {
            return Err(Error::InvariantViolation(format!("level-{p} suborder has the wrong index")));
        }
        order = next;
    }
    let out = RationalQuaternionOrder { algebra: alg.clone(), lattice: order, ram: max.ram, level: max.level * n };
    let d = reduced_discriminant(alg, &out.lattice);
    if d != Int::from(out.ram * out.level) {
        return Err(Error::InvariantViolation(format!("Eichler order has d(O) = {d}")));
    }
    Ok(out)
}

/// Mass `(1/12) prod_{p | ram}(p - 1) prod_{q | level}(q + 1)`.
pub fn rational_eichler_mass(ram: u64, level: u64) -> Rat {
    let mut m = Rat::new(Int::one(), Int::from(12));
    for (p, _) in factor(ram) {
        m *= Rat::from_integer(Int::from(p - 1));
    }
    for (q, _) in factor(level) {
        m *= Rat::from_integer(Int::from(q + 1));
    }
    m
}

/// Builds the Eichler order described by `spec` (over Q) and enumerates
/// its right ideal classes.
pub fn oracle_class_set(spec: &EichlerOrderSpec, max_classes: usize) -> Result<RightIdealClassSet> {
    let alg = RationalQuaternionAlgebra::from_spec(&spec.alg)?;
    if !alg.is_definite() {
        return Err(Error::InvalidInput("the oracle needs a definite algebra".into()));
    }
    let ram: u64 = spec.alg.ram_finite.iter().map(|q| q.p).product();
    let level: u64 = spec.level.iter().map(|q| q.p).product();
    let max = maximal_order(&alg, ram)?;
    let order = if level == 1 { max } else { eichler_suborder(&max, level)? };
    ideal_class_set(&order, max_classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_and_level_three() {
        let alg = RationalQuaternionAlgebra::new(-1, -1);
        let o = maximal_order(&alg, 2).unwrap();
        assert_eq!(reduced_discriminant(&alg, &o.lattice), Int::from(2));
        let half = Rat::new(Int::one(), Int::from(2));
        assert!(o.lattice.contains(&[half.clone(), half.clone(), half.clone(), half]));
        let e = eichler_suborder(&o, 3).unwrap();
        assert_eq!(e.lattice.covolume() / o.lattice.covolume(), Rat::from_integer(Int::from(3)));
        assert_eq!(reduced_discriminant(&alg, &e.lattice), Int::from(6));
        assert!(eichler_suborder(&o, 2).is_err());
    }

    #[test]
    fn discriminant_eleven() {
        let alg = RationalQuaternionAlgebra::new(-1, -11);
        let o = maximal_order(&alg, 11).unwrap();
        assert_eq!(reduced_discriminant(&alg, &o.lattice), Int::from(11));
    }
}
