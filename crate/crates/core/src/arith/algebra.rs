//! Products of lattices inside a finite-dimensional Q-algebra.

use crate::{Lattice, Rat};

/// A Q-algebra with a fixed basis, given by its multiplication on coordinates.
pub trait Multiplication {
    fn dim(&self) -> usize;
    fn mul_coords(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat>;
}

/// The Z-span of all products `x*y` with `x` in `a` and `y` in `b`.
pub fn lattice_product<M: Multiplication + ?Sized>(m: &M, a: &Lattice, b: &Lattice) -> Lattice {
    let ba = a.basis();
    let bb = b.basis();
    let mut rows = Vec::with_capacity(ba.len() * bb.len());
    for x in &ba {
        for y in &bb {
            rows.push(m.mul_coords(x, y));
        }
    }
    Lattice::from_rows(m.dim(), &rows)
}

/// The lattice `x * l`.
pub fn scale_lattice<M: Multiplication + ?Sized>(m: &M, x: &[Rat], l: &Lattice) -> Lattice {
    let rows: Vec<Vec<Rat>> = l.basis().iter().map(|y| m.mul_coords(x, y)).collect();
    Lattice::from_rows(m.dim(), &rows)
}

/// The lattice `l * x` (differs from [`scale_lattice`] in noncommutative algebras).
pub fn scale_lattice_right<M: Multiplication + ?Sized>(m: &M, l: &Lattice, x: &[Rat]) -> Lattice {
    let rows: Vec<Vec<Rat>> = l.basis().iter().map(|y| m.mul_coords(y, x)).collect();
    Lattice::from_rows(m.dim(), &rows)
}

/// Whether `l` is closed under multiplication.
pub fn is_ring<M: Multiplication + ?Sized>(m: &M, l: &Lattice) -> bool {
    let b = l.basis();
    b.iter().all(|x| b.iter().all(|y| l.contains(&m.mul_coords(x, y))))
}
