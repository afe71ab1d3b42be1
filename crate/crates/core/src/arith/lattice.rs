//! Integer lattices: Hermite normal form, LLL on Gram matrices and
//! Fincke-Pohst enumeration. The algorithms are generic over any exact
//! signed integer type; `Lattice` fixes the big-integer instance.

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Int, Rat};

/// Bounds shared by the generic lattice routines.
pub trait LatticeInt: Integer + Signed + Clone + Roots + std::fmt::Debug {}
impl<T: Integer + Signed + Clone + Roots + std::fmt::Debug> LatticeInt for T {}

fn sub_row<T: LatticeInt>(m: &mut [Vec<T>], target: usize, src: usize, q: &T) {
    if q.is_zero() {
        return;
    }
    let (a, b) = if target < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x = x.clone() - q.clone() * y.clone();
    }
}

/// Row-style Hermite normal form. Returns the nonzero rows in echelon form,
/// pivots positive, entries above each pivot reduced into `[0, pivot)`.
pub fn hnf<T: LatticeInt>(mut m: Vec<Vec<T>>) -> Vec<Vec<T>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..ncols {
        if r >= m.len() {
            break;
        }
        loop {
            let piv =
                (r..m.len()).filter(|&i| !m[i][col].is_zero()).min_by(|&i, &j| m[i][col].abs().cmp(&m[j][col].abs()));
            let Some(piv) = piv else { break };
            m.swap(r, piv);
            let mut clean = true;
            for i in r + 1..m.len() {
                if !m[i][col].is_zero() {
                    let q = m[i][col].div_floor(&m[r][col]);
                    sub_row(&mut m, i, r, &q);
                    if !m[i][col].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if r < m.len() && !m[r][col].is_zero() {
            if m[r][col].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = m[i][col].div_floor(&m[r][col]);
                sub_row(&mut m, i, r, &q);
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

/// Gram-Schmidt data of a positive definite Gram matrix.
fn gram_schmidt<T: LatticeInt>(g: &[Vec<T>]) -> (Vec<Vec<Ratio<T>>>, Vec<Ratio<T>>) {
    let n = g.len();
    let mut mu = vec![vec![Ratio::zero(); n]; n];
    let mut bstar = vec![Ratio::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = Ratio::from_integer(g[i][j].clone());
            for k in 0..j {
                s = s - mu[i][k].clone() * mu[j][k].clone() * bstar[k].clone();
            }
            mu[i][j] = s / bstar[j].clone();
        }
        let mut s = Ratio::from_integer(g[i][i].clone());
        for k in 0..i {
            s = s - mu[i][k].clone() * mu[i][k].clone() * bstar[k].clone();
        }
        bstar[i] = s;
        mu[i][i] = Ratio::one();
    }
    (mu, bstar)
}

fn gram_row_op<T: LatticeInt>(g: &mut [Vec<T>], k: usize, j: usize, q: &T) {
    // basis_k -= q * basis_j
    let n = g.len();
    let gkj = g[k][j].clone();
    let gjj = g[j][j].clone();
    let gkk = g[k][k].clone();
    for l in 0..n {
        if l != k {
            let v = g[k][l].clone() - q.clone() * g[j][l].clone();
            g[k][l] = v.clone();
            g[l][k] = v;
        }
    }
    let two = T::one() + T::one();
    g[k][k] = gkk - two * q.clone() * gkj + q.clone() * q.clone() * gjj;
}

/// LLL reduction (delta = 3/4) of a positive definite integral Gram matrix,
/// in the all-integer form that tracks the Gram-Schmidt data through the
/// subdeterminants `d_i` and the scaled coefficients `lambda_{ij}`.
/// Returns `(u, g2)` with `g2 = u g u^T`; row `i` of `u` expresses the new
/// basis vector `i` in the old basis.
pub fn lll_gram<T: LatticeInt>(g: &[Vec<T>]) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let n = g.len();
    let mut u: Vec<Vec<T>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect();
    let mut g = g.to_vec();
    if n <= 1 {
        return (u, g);
    }
    let two = T::one() + T::one();
    let three = two.clone() + T::one();
    let four = two.clone() + two.clone();
    // d[i + 1] is the Gram determinant of the first i + 1 vectors; d[0] = 1
    let mut d = vec![T::zero(); n + 1];
    d[0] = T::one();
    d[1] = g[0][0].clone();
    let mut lam = vec![vec![T::zero(); n]; n];
    let mut k = 1;
    let mut kmax = 0;

    let redi = |k: usize, l: usize, u: &mut Vec<Vec<T>>, g: &mut Vec<Vec<T>>, lam: &mut Vec<Vec<T>>, d: &[T]| {
        let dl = &d[l + 1];
        if (two.clone() * lam[k][l].clone()).abs() <= *dl {
            return;
        }
        let q = (two.clone() * lam[k][l].clone() + dl.clone()).div_floor(&(two.clone() * dl.clone()));
        sub_row(u, k, l, &q);
        gram_row_op(g, k, l, &q);
        lam[k][l] = lam[k][l].clone() - q.clone() * dl.clone();
        for i in 0..l {
            lam[k][i] = lam[k][i].clone() - q.clone() * lam[l][i].clone();
        }
    };

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut v = g[k][j].clone();
                for i in 0..j {
                    v = (d[i + 1].clone() * v - lam[k][i].clone() * lam[j][i].clone()) / d[i].clone();
                }
                if j < k {
                    lam[k][j] = v;
                } else {
                    assert!(!v.is_zero(), "lll_gram: Gram matrix is singular");
                    d[k + 1] = v;
                }
            }
        }
        loop {
            redi(k, k - 1, &mut u, &mut g, &mut lam, &d);
            let lhs = four.clone() * d[k + 1].clone() * d[k - 1].clone();
            let rhs = three.clone() * d[k].clone() * d[k].clone()
                - four.clone() * lam[k][k - 1].clone() * lam[k][k - 1].clone();
            if lhs >= rhs {
                break;
            }
            // swap vectors k-1 and k
            u.swap(k, k - 1);
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            for j in 0..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let b = (d[k - 1].clone() * d[k + 1].clone() + l.clone() * l.clone()) / d[k].clone();
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (d[k + 1].clone() * lam[i][k - 1].clone() - l.clone() * t.clone()) / d[k].clone();
                lam[i][k - 1] = (b.clone() * t + l.clone() * lam[i][k].clone()) / d[k + 1].clone();
            }
            d[k] = b;
            if k > 1 {
                k -= 1;
            }
        }
        for l in (0..k - 1).rev() {
            redi(k, l, &mut u, &mut g, &mut lam, &d);
        }
        k += 1;
    }
    (u, g)
}

fn eval_form<T: LatticeInt>(g: &[Vec<T>], x: &[T]) -> T {
    let mut s = T::zero();
    for i in 0..x.len() {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..x.len() {
            s = s + x[i].clone() * g[i][j].clone() * x[j].clone();
        }
    }
    s
}

/// Calls `visit(x, q(x))` for every nonzero `x` with `x^T g x <= bound`
/// (both `x` and `-x` are visited). Enumeration stops as soon as `visit`
/// returns `false`; the return value reports whether it ran to completion.
pub fn short_vectors<T, V>(g: &[Vec<T>], bound: &T, mut visit: V) -> bool
where
    T: LatticeInt,
    V: FnMut(&[T], &T) -> bool,
{
    let n = g.len();
    if n == 0 || bound.is_negative() {
        return true;
    }
    let (u, gr) = lll_gram(g);
    let (mu, bstar) = gram_schmidt(&gr);
    let mut y = vec![T::zero(); n];
    let mut x = vec![T::zero(); n];
    let bound_r = Ratio::from_integer(bound.clone());
    enumerate_level(n - 1, &mu, &bstar, &bound_r, &mut y, &mut |y: &[T]| {
        if y.iter().all(|c| c.is_zero()) {
            return true;
        }
        for (j, xj) in x.iter_mut().enumerate() {
            let mut s = T::zero();
            for i in 0..n {
                s = s + y[i].clone() * u[i][j].clone();
            }
            *xj = s;
        }
        let val = eval_form(g, &x);
        if val > *bound {
            return true;
        }
        visit(&x, &val)
    })
}

/// [`short_vectors`] for a big-integer Gram matrix of rank at most 4, run in
/// `i128` when the entries are small enough that every Gram-Schmidt
/// numerator and denominator stays far below the `i128` range.
pub fn short_vectors_big<V>(g: &[Vec<Int>], bound: &Int, mut visit: V) -> bool
where
    V: FnMut(&[Int], &Int) -> bool,
{
    const SMALL: i64 = 1 << 10;
    let small = |x: &Int| x.to_i64().is_some_and(|v| v.abs() < SMALL);
    if g.len() <= 4 && small(bound) && g.iter().flatten().all(small) {
        let gs: Vec<Vec<i128>> = g.iter().map(|r| r.iter().map(|x| x.to_i128().unwrap()).collect()).collect();
        let b = bound.to_i128().unwrap();
        return short_vectors(&gs, &b, |x, q| {
            let xb: Vec<Int> = x.iter().map(|&v| Int::from(v)).collect();
            visit(&xb, &Int::from(*q))
        });
    }
    short_vectors(g, bound, visit)
}

fn enumerate_level<T, V>(
    level: usize,
    mu: &[Vec<Ratio<T>>],
    bstar: &[Ratio<T>],
    remaining: &Ratio<T>,
    y: &mut Vec<T>,
    leaf: &mut V,
) -> bool
where
    T: LatticeInt,
    V: FnMut(&[T]) -> bool,
{
    let n = y.len();
    let mut center = Ratio::zero();
    for j in level + 1..n {
        center = center - mu[j][level].clone() * Ratio::from_integer(y[j].clone());
    }
    let radius_sq = remaining.clone() / bstar[level].clone();
    let r = (radius_sq.floor().to_integer()).sqrt() + T::one();
    let c = center.floor().to_integer();
    let lo = c.clone() - r.clone();
    let hi = c + r + T::one();
    let mut v = lo;
    while v <= hi {
        let diff = Ratio::from_integer(v.clone()) - center.clone();
        let used = diff.clone() * diff * bstar[level].clone();
        if used <= *remaining {
            y[level] = v.clone();
            let rest = remaining.clone() - used;
            let go_on = if level == 0 { leaf(y) } else { enumerate_level(level - 1, mu, bstar, &rest, y, leaf) };
            if !go_on {
                return false;
            }
        }
        v = v + T::one();
    }
    y[level] = T::zero();
    true
}

/// A full-or-partial rank Z-lattice in Q^n stored as `rows / den` with the
/// rows in Hermite normal form and `den` minimal. Equal lattices compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    den: Int,
    rows: Vec<Vec<Int>>,
    dim: usize,
}

impl Lattice {
    pub fn from_rows(dim: usize, rows: &[Vec<Rat>]) -> Lattice {
        let mut den = Int::one();
        for r in rows {
            assert_eq!(r.len(), dim, "row length mismatch");
            for x in r {
                den = den.lcm(x.denom());
            }
        }
        let int_rows: Vec<Vec<Int>> = rows
            .iter()
            .map(|r| r.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect())
            .collect();
        Self::from_int_rows(dim, int_rows, den)
    }

    pub fn from_int_rows(dim: usize, rows: Vec<Vec<Int>>, den: Int) -> Lattice {
        let rows = hnf(rows);
        let mut g = den.clone();
        for r in &rows {
            for x in r {
                g = g.gcd(x);
            }
        }
        let (rows, den) = if g.is_one() {
            (rows, den)
        } else {
            (rows.into_iter().map(|r| r.into_iter().map(|x| x / &g).collect()).collect(), den / &g)
        };
        Lattice { den, rows, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> Vec<Vec<Rat>> {
        self.rows.iter().map(|r| r.iter().map(|x| Rat::new(x.clone(), self.den.clone())).collect()).collect()
    }

    pub fn int_rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn den(&self) -> &Int {
        &self.den
    }

    /// Integer coordinates of `v` in the stored basis, if `v` lies in the lattice.
    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.dim);
        let mut res: Vec<Rat> = v.iter().map(|x| x * Rat::from_integer(self.den.clone())).collect();
        let mut out = Vec::with_capacity(self.rows.len());
        let mut col = 0;
        for row in &self.rows {
            while row[col].is_zero() {
                if !res[col].is_zero() {
                    return None;
                }
                col += 1;
            }
            let q = &res[col] / Rat::from_integer(row[col].clone());
            if !q.is_integer() {
                return None;
            }
            let q = q.to_integer();
            for (r, x) in res.iter_mut().zip(row) {
                *r -= Rat::from_integer(&q * x);
            }
            out.push(q);
        }
        res.iter().all(|x| x.is_zero()).then_some(out)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut rows = self.basis();
        rows.extend(other.basis());
        Lattice::from_rows(self.dim, &rows)
    }

    pub fn scale(&self, q: &Rat) -> Lattice {
        let rows: Vec<Vec<Rat>> = self.basis().into_iter().map(|r| r.into_iter().map(|x| x * q).collect()).collect();
        Lattice::from_rows(self.dim, &rows)
    }

    /// Absolute value of the determinant of a full-rank basis.
    pub fn covolume(&self) -> Rat {
        assert_eq!(self.rank(), self.dim, "covolume of a degenerate lattice");
        let mut p = Int::one();
        for (i, r) in self.rows.iter().enumerate() {
            p *= &r[i];
        }
        Rat::new(p, num_traits::pow(self.den.clone(), self.dim))
    }

    /// The sublattice of vectors whose coordinates in `zero_cols` vanish.
    pub fn intersect_zero_coords(&self, zero_cols: &[usize]) -> Lattice {
        let mut order: Vec<usize> = zero_cols.to_vec();
        order.extend((0..self.dim).filter(|c| !zero_cols.contains(c)));
        let permuted: Vec<Vec<Int>> = self.rows.iter().map(|r| order.iter().map(|&c| r[c].clone()).collect()).collect();
        let h = hnf(permuted);
        let kept: Vec<Vec<Int>> = h
            .into_iter()
            .filter(|r| r[..zero_cols.len()].iter().all(|x| x.is_zero()))
            .map(|r| {
                let mut back = vec![Int::zero(); self.dim];
                for (k, &c) in order.iter().enumerate() {
                    back[c] = r[k].clone();
                }
                back
            })
            .collect();
        Lattice::from_int_rows(self.dim, kept, self.den.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int::rat;

    #[test]
    fn hnf_small() {
        let h = hnf(vec![vec![4i64, 6], vec![6, 4]]);
        assert_eq!(h, vec![vec![2, 8], vec![0, 10]]);
    }

    #[test]
    fn lll_finds_short_basis() {
        let g = vec![vec![1i64, 100], vec![100, 10001]];
        let (u, g2) = lll_gram(&g);
        assert_eq!(g2[0][0] + g2[1][1], 2);
        let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
        assert_eq!(det.abs(), 1);
    }

    #[test]
    fn short_vectors_counts_a2() {
        // hexagonal lattice: 6 vectors of norm 2
        let g = vec![vec![2i64, 1], vec![1, 2]];
        let mut count = 0;
        short_vectors(&g, &2, |_, v| {
            assert_eq!(*v, 2);
            count += 1;
            true
        });
        assert_eq!(count, 6);
    }

    #[test]
    fn lattice_membership() {
        let l = Lattice::from_rows(2, &[vec![rat(2), rat(0)], vec![rat(1), rat(3)]]);
        assert!(l.contains(&[rat(3), rat(3)]));
        assert!(!l.contains(&[rat(1), rat(0)]));
        assert_eq!(l.covolume(), rat(6));
        let sub = l.intersect_zero_coords(&[1]);
        assert_eq!(sub.basis(), vec![vec![rat(2), rat(0)]]);
    }
}
