//! Indefinite binary quadratic forms of discriminant D_F and the narrow
//! class group they realize.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::numberfield::elem::FElem;
use crate::numberfield::field::RealQuadraticField;
use crate::numberfield::ideal::QuadIdeal;
use crate::{Int, Rat};

/// The form `a x^2 + b x y + c y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryForm {
    pub a: Int,
    pub b: Int,
    pub c: Int,
}

impl BinaryForm {
    pub fn new(a: Int, b: Int, c: Int) -> BinaryForm {
        BinaryForm { a, b, c }
    }

    pub fn disc(&self) -> Int {
        &self.b * &self.b - Int::from(4) * &self.a * &self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    /// Reduced in the indefinite sense: `|sqrt(D) - 2|a|| < b < sqrt(D)`.
    pub fn is_reduced(&self) -> bool {
        let d = self.disc();
        let s = d.sqrt();
        let b = &self.b;
        if !b.is_positive() || *b > s {
            return false;
        }
        let two_a = Int::from(2) * self.a.abs();
        // sqrt(D) < b + 2|a|
        let upper = &(b + &two_a) * &(b + &two_a) > d;
        // sqrt(D) > 2|a| - b
        let lower = &two_a - b < Int::zero() || d > &(&two_a - b) * &(&two_a - b);
        upper && lower
    }

    /// One reduction step `(a, b, c) -> (c, r, (r^2 - D)/(4c))` and the `t`
    /// with `r = -b + 2 c t`.
    fn rho(&self) -> (BinaryForm, Int) {
        let d = self.disc();
        let r = normalize_b(&(-&self.b), &self.c, &d);
        let t = (&r + &self.b) / (Int::from(2) * &self.c);
        let c2 = (&r * &r - &d) / (Int::from(4) * &self.c);
        (BinaryForm::new(self.c.clone(), r, c2), t)
    }

    pub fn label(&self) -> String {
        format!("[{},{},{}]", self.a, self.b, self.c)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// The representative `r = b (mod 2|a|)` used by the reduction operator.
fn normalize_b(b: &Int, a: &Int, d: &Int) -> Int {
    let two_a = Int::from(2) * a.abs();
    if &(a * a) < d {
        // largest r = b (mod 2|a|) below sqrt(D)
        let s = d.sqrt();
        &s - (&s - b).mod_floor(&two_a)
    } else {
        let mut r = b.mod_floor(&two_a);
        if r > a.abs() {
            r -= &two_a;
        }
        r
    }
}

/// A form together with the Z-basis of the ideal it was computed from; the
/// basis is transformed along with every reduction step.
#[derive(Clone, Debug)]
struct TrackedForm {
    form: BinaryForm,
    basis: [FElem; 2],
}

impl TrackedForm {
    fn step(&self) -> TrackedForm {
        let (form, t) = self.form.rho();
        let [a1, a2] = &self.basis;
        let t = FElem::from_rat(a1.d, Rat::from_integer(t));
        let new2 = &(-a1) + &(a2 * &t);
        TrackedForm { form, basis: [a2.clone(), new2] }
    }

    fn reduce(mut self) -> TrackedForm {
        let mut guard = 0usize;
        while !self.form.is_reduced() {
            self = self.step();
            guard += 1;
            assert!(guard < 100_000, "form reduction did not terminate");
        }
        self
    }
}

/// The form attached to a nonzero fractional ideal of a real quadratic
/// field, `N(x a1 + y a2)/N(I)`, with the basis ordered so that the
/// ideal `[a, (b + sqrt(D))/2]` gives `(a, b, c)`.
fn tracked_form_of_ideal(f: &RealQuadraticField, ideal: &QuadIdeal) -> TrackedForm {
    let basis = ideal.basis();
    let (mut a1, mut a2) = (basis[0].clone(), basis[1].clone());
    // orientation: y1*x2 - x1*y2 < 0, as for (a, (b + sqrt D)/2)
    let orient = &a1.b * &a2.a - &a1.a * &a2.b;
    if orient.is_positive() {
        std::mem::swap(&mut a1, &mut a2);
    }
    let n = ideal.norm(f);
    let a = (a1.norm() / &n).to_integer();
    let c = (a2.norm() / &n).to_integer();
    let b = ((&a1 * &a2.conj()).trace() / &n).to_integer();
    TrackedForm { form: BinaryForm::new(a, b, c), basis: [a1, a2] }
}

/// Cl^+(O_F) realized by cycles of reduced forms, with the projection to
/// Cl(O_F).
#[derive(Clone, Debug)]
pub struct FormClassGroup {
    pub disc: Int,
    /// One cycle of reduced forms per class; the first entry is the label form.
    pub cycles: Vec<Vec<BinaryForm>>,
    /// Ideal representative of each class.
    pub reps: Vec<QuadIdeal>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub kernel_pi: Vec<usize>,
    /// ker(pi)-cosets, i.e. the wide classes, each listed by narrow class index.
    pub cosets: Vec<Vec<usize>>,
    lookup: HashMap<BinaryForm, usize>,
}

impl FormClassGroup {
    pub fn h_plus(&self) -> usize {
        self.cycles.len()
    }

    pub fn r(&self) -> usize {
        self.kernel_pi.len()
    }

    pub fn h(&self) -> usize {
        self.cosets.len()
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inverse(&self, x: usize) -> usize {
        (0..self.h_plus()).find(|&y| self.table[x][y] == self.identity).unwrap()
    }

    pub fn label(&self, c: usize) -> String {
        if self.disc.is_one() {
            return "1".to_string();
        }
        self.cycles[c][0].label()
    }

    pub fn wide_class_of(&self, c: usize) -> usize {
        self.cosets.iter().position(|co| co.contains(&c)).unwrap()
    }

    pub fn wide_label(&self, w: usize) -> String {
        self.label(self.cosets[w][0])
    }

    /// Index of the narrow class of a nonzero fractional ideal.
    pub fn class_of(&self, f: &RealQuadraticField, ideal: &QuadIdeal) -> usize {
        if f.is_rational() {
            return 0;
        }
        let t = tracked_form_of_ideal(f, ideal).reduce();
        self.lookup[&t.form]
    }

    /// A totally positive generator if the ideal is narrowly principal.
    pub fn narrow_generator(&self, f: &RealQuadraticField, ideal: &QuadIdeal) -> Option<FElem> {
        if f.is_rational() {
            let g = ideal.basis()[0].clone();
            return Some(if g.a.is_negative() { -&g } else { g });
        }
        self.generator_with_sign(f, ideal, 1)
    }

    /// A generator of any sign if the ideal is principal.
    pub fn generator(&self, f: &RealQuadraticField, ideal: &QuadIdeal) -> Option<FElem> {
        if f.is_rational() {
            return Some(ideal.basis()[0].clone());
        }
        self.generator_with_sign(f, ideal, 1).or_else(|| self.generator_with_sign(f, ideal, -1))
    }

    fn generator_with_sign(&self, f: &RealQuadraticField, ideal: &QuadIdeal, sign: i64) -> Option<FElem> {
        let start = tracked_form_of_ideal(f, ideal).reduce();
        let mut cur = start.clone();
        loop {
            if cur.form.a == Int::from(sign) {
                let g = cur.basis[0].clone();
                return Some(if g.sign_at(0) < 0 { -&g } else { g });
            }
            cur = cur.step();
            if cur.form == start.form {
                return None;
            }
        }
    }

    pub fn is_principal(&self, f: &RealQuadraticField, ideal: &QuadIdeal) -> bool {
        let c = self.class_of(f, ideal);
        self.kernel_pi.contains(&c)
    }

    /// Order of a class.
    pub fn order(&self, c: usize) -> usize {
        let mut k = 1;
        let mut x = c;
        while x != self.identity {
            x = self.mul(x, c);
            k += 1;
        }
        k
    }
}

/// Enumerates reduced forms of discriminant D_F, groups them into cycles and
/// builds the composition table through ideal multiplication.
pub fn narrow_class_group(f: &RealQuadraticField) -> FormClassGroup {
    if f.is_rational() {
        return FormClassGroup {
            disc: Int::one(),
            cycles: vec![vec![BinaryForm::new(Int::one(), Int::one(), Int::zero())]],
            reps: vec![QuadIdeal::unit(f)],
            table: vec![vec![0]],
            identity: 0,
            kernel_pi: vec![0],
            cosets: vec![vec![0]],
            lookup: HashMap::new(),
        };
    }
    let d = f.disc.clone();
    let s = d.sqrt();
    let mut reduced = Vec::new();
    let mut b = if d.is_even() { Int::from(2) } else { Int::one() };
    while b <= s {
        let m = (&d - &b * &b) / Int::from(4);
        // a * c = -m with a | m, both signs
        let mut a = Int::one();
        while a <= m {
            if m.is_multiple_of(&a) {
                for sa in [Int::one(), -Int::one()] {
                    let aa = &a * &sa;
                    let cc = -(&m / &aa);
                    let form = BinaryForm::new(aa, b.clone(), cc);
                    if form.is_primitive() && form.is_reduced() {
                        reduced.push(form);
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    reduced.sort();
    let mut lookup = HashMap::new();
    let mut cycles: Vec<Vec<BinaryForm>> = Vec::new();
    for form in &reduced {
        if lookup.contains_key(form) {
            continue;
        }
        let idx = cycles.len();
        let mut cycle = vec![form.clone()];
        lookup.insert(form.clone(), idx);
        let mut cur = form.rho().0;
        while cur != *form {
            lookup.insert(cur.clone(), idx);
            cycle.push(cur.clone());
            cur = cur.rho().0;
        }
        // label form: smallest positive a, then smallest b
        cycle.sort_by(|x, y| {
            (x.a.is_negative(), x.a.abs(), x.b.clone()).cmp(&(y.a.is_negative(), y.a.abs(), y.b.clone()))
        });
        cycles.push(cycle);
    }
    // principal class first, then by label
    cycles.sort_by(|x, y| {
        let kx = (x[0].a.abs(), x[0].b.clone());
        let ky = (y[0].a.abs(), y[0].b.clone());
        kx.cmp(&ky)
    });
    lookup.clear();
    for (i, cyc) in cycles.iter().enumerate() {
        for form in cyc {
            lookup.insert(form.clone(), i);
        }
    }
    let reps: Vec<QuadIdeal> = cycles
        .iter()
        .map(|cyc| {
            let pos = cyc.iter().find(|x| x.a.is_positive()).expect("cycle contains a positive form");
            QuadIdeal::from_form_root(f, &pos.a, &pos.b)
        })
        .collect();
    let mut group = FormClassGroup {
        disc: d,
        cycles,
        reps,
        table: Vec::new(),
        identity: 0,
        kernel_pi: Vec::new(),
        cosets: Vec::new(),
        lookup,
    };
    let n = group.h_plus();
    let mut table = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i..n {
            let prod = group.reps[i].mul(f, &group.reps[j]);
            let c = group.class_of(f, &prod);
            table[i][j] = c;
            table[j][i] = c;
        }
    }
    group.table = table;
    group.identity = group.class_of(f, &QuadIdeal::unit(f));
    let root_d = QuadIdeal::principal(f, &FElem::sqrt_d(f.d));
    let k = group.class_of(f, &root_d);
    group.kernel_pi = if k == group.identity { vec![k] } else { vec![group.identity, k] };
    let mut seen = vec![false; n];
    let mut cosets = Vec::new();
    for c in 0..n {
        if seen[c] {
            continue;
        }
        let coset: Vec<usize> = group.kernel_pi.iter().map(|&k| group.table[c][k]).collect();
        let mut coset = coset;
        coset.sort_unstable();
        coset.dedup();
        for &x in &coset {
            seen[x] = true;
        }
        cosets.push(coset);
    }
    group.cosets = cosets;
    group
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(d: i64) -> FormClassGroup {
        narrow_class_group(&RealQuadraticField::new(d).unwrap())
    }

    #[test]
    fn small_narrow_class_numbers() {
        let g = group(7);
        assert_eq!((g.h_plus(), g.r(), g.h()), (2, 2, 1));
        assert_eq!((group(5).h_plus(), group(5).r()), (1, 1));
        let g = group(10);
        assert_eq!((g.h_plus(), g.r()), (2, 1));
        let g = group(15);
        assert_eq!((g.h_plus(), g.r(), g.h()), (4, 2, 2));
    }

    #[test]
    fn narrow_generator_is_totally_positive() {
        let f = RealQuadraticField::new(7).unwrap();
        let g = narrow_class_group(&f);
        let ideal = QuadIdeal::principal(&f, &FElem::from_ints(7, 3, 1));
        let gen = g.narrow_generator(&f, &ideal).unwrap();
        assert!(gen.is_totally_positive());
        assert_eq!(QuadIdeal::principal(&f, &gen), ideal);
        let root7 = QuadIdeal::principal(&f, &FElem::sqrt_d(7));
        assert!(g.narrow_generator(&f, &root7).is_none());
        assert!(g.generator(&f, &root7).is_some());
    }
}
