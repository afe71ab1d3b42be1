//! Right ideal classes of a definite order over Q by neighbor enumeration,
//! certified complete by the mass formula.

use num_traits::{One, Zero};

use super::{combine, rational_eichler_mass, residue_vectors, RationalQuaternionAlgebra, RationalQuaternionOrder};
use crate::arith::algebra::scale_lattice;
use crate::arith::int::{is_prime, rat_sqrt};
use crate::arith::lattice::{lll_gram, short_vectors_big};
use crate::error::{Error, Result};
use crate::{Int, Lattice, Rat};

#[derive(Clone, Debug)]
pub struct RightIdealClassSet {
    pub representatives: Vec<Lattice>,
    /// `|O_l(I)^x / {+-1}|` for each representative.
    pub unit_indices: Vec<u64>,
    /// Sum of `1 / w_i`.
    pub mass: Rat,
    /// The prime whose neighbors were explored.
    pub neighbor_prime: u64,
}

impl RightIdealClassSet {
    pub fn class_number(&self) -> usize {
        self.representatives.len()
    }
}

/// `nrd(I)` from `covol(I) = nrd(I)^2 covol(O)`.
fn ideal_norm(order: &Lattice, i: &Lattice) -> Rat {
    rat_sqrt(&(i.covolume() / order.covolume())).expect("right ideals have square index")
}

/// Number of vectors with `trd(x conj x) / scale <= 2`, counting `x` and `-x`.
fn count_minimal(alg: &RationalQuaternionAlgebra, l: &Lattice, scale: &Rat, stop_at_first: bool) -> u64 {
    let g = alg.gram(l, scale);
    let mut n = 0u64;
    short_vectors_big(&g, &Int::from(2), |_, _| {
        n += 1;
        !stop_at_first
    });
    n
}

/// `|O_l(I)^x / {+-1}|`, from the elements of `I conj(I) = nrd(I) O_l(I)`
/// of norm `nrd(I)^2`.
pub fn unit_index(alg: &RationalQuaternionAlgebra, i: &Lattice, norm: &Rat) -> u64 {
    let l = alg.product(i, &alg.conj_lattice(i));
    count_minimal(alg, &l, &(norm * norm), false) / 2
}

/// `J = x I` for some `x` iff `J conj(I)` has an element of norm
/// `nrd(I) nrd(J)`.
pub fn is_isomorphic(alg: &RationalQuaternionAlgebra, i: &Lattice, ni: &Rat, j: &Lattice, nj: &Rat) -> bool {
    let l = alg.product(j, &alg.conj_lattice(i));
    count_minimal(alg, &l, &(ni * nj), true) > 0
}

/// Counts of vectors with normalized norm 1 and 2 in `I`, an isometry
/// invariant of the class.
fn theta(alg: &RationalQuaternionAlgebra, i: &Lattice, ni: &Rat) -> [u64; 2] {
    let g = alg.gram(i, ni);
    let mut t = [0u64; 2];
    short_vectors_big(&g, &Int::from(4), |_, q| {
        t[if *q <= Int::from(2) { 0 } else { 1 }] += 1;
        true
    });
    t
}

/// A small integral ideal `conj(a) J / nrd(J)` in the class of `J`, with `a`
/// a short vector of `J`.
fn reduce(alg: &RationalQuaternionAlgebra, j: &Lattice, nj: &Rat) -> (Lattice, Rat) {
    let g = alg.gram(j, nj);
    let (u, _) = lll_gram(&g);
    let basis = j.basis();
    let mut a = vec![Rat::zero(); 4];
    for (c, b) in u[0].iter().zip(&basis) {
        for (ai, bi) in a.iter_mut().zip(b) {
            *ai += Rat::from_integer(c.clone()) * bi;
        }
    }
    let na = alg.nrd(&a);
    let l = scale_lattice(alg, &alg.conj(&a), j).scale(&(Rat::one() / nj));
    (l, na / nj)
}

/// The `ell + 1` right ideals `alpha O + ell I` of index `ell^2` in `I`.
fn neighbors(alg: &RationalQuaternionAlgebra, order: &Lattice, i: &Lattice, ni: &Rat, ell: u64) -> Vec<Lattice> {
    let basis = i.basis();
    let ell_r = Rat::from_integer(Int::from(ell));
    let ell_i = i.scale(&ell_r);
    let target = i.covolume() * &ell_r * &ell_r;
    let mut out: Vec<Lattice> = Vec::new();
    for c in residue_vectors(ell, 4) {
        let alpha = combine(&basis, &c, &Rat::one());
        let q = alg.nrd(&alpha) / ni;
        if !(q / &ell_r).is_integer() {
            continue;
        }
        let j = scale_lattice(alg, &alpha, order).sum(&ell_i);
        if j.covolume() != target || out.contains(&j) {
            continue;
        }
        out.push(j);
        if out.len() as u64 == ell + 1 {
            break;
        }
    }
    out
}

/// Breadth-first neighbor search from `O` itself, stopping when the
/// collected `1/w` reach the Eichler mass.
pub fn ideal_class_set(order: &RationalQuaternionOrder, max_classes: usize) -> Result<RightIdealClassSet> {
    let alg = &order.algebra;
    let o = &order.lattice;
    let target = rational_eichler_mass(order.ram, order.level);
    let ell = (2u64..).find(|&p| is_prime(p) && (order.ram * order.level) % p != 0).unwrap();
    let one = Rat::one();
    let mut reps: Vec<(Lattice, Rat)> = vec![(o.clone(), one.clone())];
    let mut w = vec![unit_index(alg, o, &one)];
    let mut thetas = vec![theta(alg, o, &one)];
    let mut mass = Rat::new(Int::one(), Int::from(w[0]));
    let mut next = 0;
    while mass < target {
        if next >= reps.len() || reps.len() > max_classes {
            return Err(Error::SearchExhausted {
                what: format!(
                    "right ideal classes of the order of discriminant {} and level {} (mass {mass} of {target})",
                    order.ram, order.level
                ),
                bound: max_classes as u64,
            });
        }
        let (i, ni) = reps[next].clone();
        next += 1;
        for j in neighbors(alg, o, &i, &ni, ell) {
            let nj = ideal_norm(o, &j);
            let (j, nj) = reduce(alg, &j, &nj);
            let tj = theta(alg, &j, &nj);
            let known = reps.iter().zip(&thetas).any(|((r, nr), tr)| *tr == tj && is_isomorphic(alg, r, nr, &j, &nj));
            if known {
                continue;
            }
            let wj = unit_index(alg, &j, &nj);
            mass += Rat::new(Int::one(), Int::from(wj));
            reps.push((j, nj));
            w.push(wj);
            thetas.push(tj);
            if mass >= target {
                break;
            }
        }
    }
    if mass != target {
        return Err(Error::InvariantViolation(format!("class masses overshoot: {mass} > {target}")));
    }
    debug_assert!(!mass.is_zero());
    Ok(RightIdealClassSet {
        representatives: reps.into_iter().map(|(l, _)| l).collect(),
        unit_indices: w,
        mass,
        neighbor_prime: ell,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brandt::{eichler_suborder, maximal_order};

    #[test]
    fn small_class_sets() {
        let o = maximal_order(&RationalQuaternionAlgebra::new(-1, -1), 2).unwrap();
        let c = ideal_class_set(&o, 100).unwrap();
        assert_eq!(c.unit_indices, vec![12]);
        let o = maximal_order(&RationalQuaternionAlgebra::new(-1, -11), 11).unwrap();
        let c = ideal_class_set(&o, 100).unwrap();
        let mut w = c.unit_indices.clone();
        w.sort();
        assert_eq!(w, vec![2, 3]);
        let o = maximal_order(&RationalQuaternionAlgebra::new(-1, -1), 2).unwrap();
        let e = eichler_suborder(&o, 3).unwrap();
        assert_eq!(ideal_class_set(&e, 100).unwrap().class_number(), 1);
    }
}
