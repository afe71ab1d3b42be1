//! Quaternion algebras `(a, b)_F` at genus level: ramification, definite
//! algebra searches, Eichler order specifications and h_D(F).

use std::collections::BTreeSet;

use num_traits::One;

use crate::arith::int::{prime_divisors, primes_up_to};
use crate::error::{Error, Result};
use crate::numberfield::elem::FElem;
use crate::numberfield::field::RealQuadraticField;
use crate::numberfield::forms::FormClassGroup;
use crate::numberfield::ideal::{prime_ideals_above, PrimeIdeal};
use crate::numberfield::local::{hilbert_symbol, hilbert_symbol_real};
use crate::Int;

/// The algebra `i^2 = a, j^2 = b, ij = -ji` over F.
#[derive(Clone, Debug)]
pub struct QuaternionAlgebraSpec {
    pub d: i64,
    pub a: FElem,
    pub b: FElem,
    pub ram_finite: Vec<PrimeIdeal>,
    /// Indices of the ramified real places (0: sqrt(d) > 0, 1: conjugate).
    pub ram_infinite: Vec<usize>,
}

impl QuaternionAlgebraSpec {
    pub fn new(f: &RealQuadraticField, a: FElem, b: FElem) -> Result<QuaternionAlgebraSpec> {
        let (ram_finite, ram_infinite) = ramified_places(f, &a, &b)?;
        Ok(QuaternionAlgebraSpec { d: f.d, a, b, ram_finite, ram_infinite })
    }

    pub fn is_totally_definite(&self, f: &RealQuadraticField) -> bool {
        self.ram_infinite.len() == f.degree()
    }

    /// Some infinite place splits the algebra.
    pub fn satisfies_eichler_condition(&self, f: &RealQuadraticField) -> bool {
        self.ram_infinite.len() < f.degree()
    }

    pub fn is_ramified_at(&self, q: &PrimeIdeal) -> bool {
        self.ram_finite.contains(q)
    }

    pub fn ram_labels(&self) -> Vec<String> {
        self.ram_finite.iter().map(|q| q.label()).collect()
    }
}

/// Candidate primes for ramification: every prime dividing `2 N(a) N(b)`.
fn candidate_primes(a: &FElem, b: &FElem) -> Vec<u64> {
    let mut ps = BTreeSet::new();
    ps.insert(2u64);
    for x in [a, b] {
        let n = x.norm();
        for part in [n.numer(), n.denom()] {
            ps.extend(prime_divisors(part));
        }
    }
    ps.into_iter().collect()
}

/// Finite and infinite ramification of `(a, b)_F`.
pub fn ramified_places(f: &RealQuadraticField, a: &FElem, b: &FElem) -> Result<(Vec<PrimeIdeal>, Vec<usize>)> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidInput("quaternion algebra parameters must be nonzero".into()));
    }
    let ram_infinite: Vec<usize> = (0..f.degree()).filter(|&v| hilbert_symbol_real(v, a, b) == -1).collect();
    let mut product: i8 = if ram_infinite.len() % 2 == 0 { 1 } else { -1 };
    let mut ram_finite = Vec::new();
    let mut deferred = None;
    for p in candidate_primes(a, b) {
        for q in prime_ideals_above(f, p) {
            match hilbert_symbol(f, &q, a, b) {
                Some(s) => {
                    product *= s;
                    if s == -1 {
                        ram_finite.push(q);
                    }
                }
                None => {
                    debug_assert!(deferred.is_none(), "at most one non-split dyadic prime");
                    deferred = Some(q);
                }
            }
        }
    }
    if let Some(q) = deferred {
        // product formula: the remaining symbol makes the total product 1
        if product == -1 {
            ram_finite.push(q);
        }
    } else if product != 1 {
        return Err(Error::InvariantViolation(format!(
            "ramification of ({}, {}) over {} has odd size",
            a,
            b,
            f.name()
        )));
    }
    ram_finite.sort_by(|x, y| (x.p, x.index).cmp(&(y.p, y.index)));
    Ok((ram_finite, ram_infinite))
}

/// Searches pairs `(-m, -n)` with `1 <= m <= n <= bound` for a totally
/// definite algebra unramified at every finite prime.
pub fn find_unramified_definite_algebra(f: &RealQuadraticField, bound: u64) -> Result<QuaternionAlgebraSpec> {
    if f.degree() % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "no totally definite algebra over {} is unramified at all finite primes (odd number of real places)",
            f.name()
        )));
    }
    find_definite_with(f, &[], bound)
}

/// Searches for a totally definite algebra whose finite ramification is
/// exactly `primes`: first rational pairs `(-m, -n)`, then `a = -g` with
/// `g >> 0` generating the product of the requested primes (times one
/// auxiliary prime when that product is not narrowly principal) against
/// small totally negative `b`.
pub fn find_definite_algebra_ramified_at(
    f: &RealQuadraticField,
    group: &FormClassGroup,
    primes: &[PrimeIdeal],
    bound: u64,
) -> Result<QuaternionAlgebraSpec> {
    if (primes.len() + f.degree()) % 2 == 1 {
        return Err(Error::InvalidInput(format!(
            "ramification set of size {} plus {} real places is odd",
            primes.len(),
            f.degree()
        )));
    }
    let rational_bound = if f.is_rational() { bound } else { bound.min(24) };
    if let Ok(alg) = find_definite_with(f, primes, rational_bound) {
        return Ok(alg);
    }
    let mut target = crate::numberfield::ideal::QuadIdeal::unit(f);
    for q in primes {
        target = target.mul(f, &q.ideal);
    }
    let aux: Vec<Option<PrimeIdeal>> = std::iter::once(None)
        .chain(
            primes_up_to(bound.max(50))
                .into_iter()
                .flat_map(|p| prime_ideals_above(f, p))
                .filter(|q| !primes.contains(q))
                .map(Some),
        )
        .collect();
    let small = small_totally_positive(f, 12);
    for q in &aux {
        let ideal = match q {
            Some(q) => target.mul(f, &q.ideal),
            None => target.clone(),
        };
        let Some(g) = group.narrow_generator(f, &ideal) else {
            continue;
        };
        for u in f.totally_positive_unit_classes() {
            let a = -&(&g * &u);
            for x in &small {
                let b = -x;
                let (fin, inf) = ramified_places(f, &a, &b)?;
                if inf.len() == f.degree() && same_primes(&fin, primes) {
                    return QuaternionAlgebraSpec::new(f, a, b);
                }
            }
        }
    }
    Err(Error::SearchExhausted { what: "definite algebra with prescribed ramification".into(), bound })
}

/// Totally positive integers `u + v omega` with `|u|, |v| <= c`, by norm.
fn small_totally_positive(f: &RealQuadraticField, c: i64) -> Vec<FElem> {
    let mut out: Vec<FElem> = Vec::new();
    for u in -c..=c {
        for v in -c..=c {
            let x = &f.int(u) + &(&f.int(v) * &f.omega());
            if !x.is_zero() && x.is_totally_positive() {
                out.push(x);
            }
        }
    }
    out.sort_by(|x, y| (x.norm(), x.trace()).cmp(&(y.norm(), y.trace())));
    out.dedup();
    out
}

fn same_primes(x: &[PrimeIdeal], y: &[PrimeIdeal]) -> bool {
    x.len() == y.len() && x.iter().all(|q| y.contains(q))
}

fn find_definite_with(f: &RealQuadraticField, primes: &[PrimeIdeal], bound: u64) -> Result<QuaternionAlgebraSpec> {
    for n in 1..=bound as i64 {
        for m in 1..=n {
            let a = f.int(-m);
            let b = f.int(-n);
            let (fin, inf) = ramified_places(f, &a, &b)?;
            if inf.len() == f.degree() && same_primes(&fin, primes) {
                return QuaternionAlgebraSpec::new(f, a, b);
            }
        }
    }
    Err(Error::SearchExhausted { what: "totally definite algebra".into(), bound })
}

/// An Eichler order of squarefree level, described at genus level.
#[derive(Clone, Debug)]
pub struct EichlerOrderSpec {
    pub alg: QuaternionAlgebraSpec,
    pub level: Vec<PrimeIdeal>,
}

impl EichlerOrderSpec {
    /// Primes dividing the reduced discriminant (each to the first power).
    pub fn disc_primes(&self) -> Vec<PrimeIdeal> {
        let mut v = self.alg.ram_finite.clone();
        v.extend(self.level.iter().cloned());
        v
    }

    pub fn disc_norm(&self) -> u64 {
        self.disc_primes().iter().map(|q| q.norm()).product()
    }

    pub fn level_norm(&self) -> u64 {
        self.level.iter().map(|q| q.norm()).product()
    }

    pub fn is_maximal(&self) -> bool {
        self.level.is_empty()
    }

    pub fn level_labels(&self) -> Vec<String> {
        self.level.iter().map(|q| q.label()).collect()
    }
}

/// Validates the level and records the genus.
pub fn eichler_order(alg: &QuaternionAlgebraSpec, level: &[PrimeIdeal]) -> Result<EichlerOrderSpec> {
    for (i, q) in level.iter().enumerate() {
        if level[..i].contains(q) {
            return Err(Error::InvalidInput(format!("level is not squarefree: {} repeats", q.label())));
        }
        if alg.is_ramified_at(q) {
            return Err(Error::InvalidInput(format!(
                "level prime {} divides the ramification of the algebra",
                q.label()
            )));
        }
    }
    let mut level = level.to_vec();
    level.sort_by(|x, y| (x.p, x.index).cmp(&(y.p, y.index)));
    Ok(EichlerOrderSpec { alg: alg.clone(), level })
}

/// `h_D(F) = h(F) 2^{|R|} / |sign image of O_F^x on R|` with `R` the ramified
/// real places.
pub fn restricted_class_number(f: &RealQuadraticField, group: &FormClassGroup, alg: &QuaternionAlgebraSpec) -> usize {
    let h = group.h();
    let places = &alg.ram_infinite;
    if places.is_empty() {
        return h;
    }
    let mut units = vec![f.int(-1)];
    if let Some(e) = &f.fund_unit {
        units.push(e.clone());
    }
    let mut image: BTreeSet<Vec<i8>> = BTreeSet::new();
    image.insert(vec![1; places.len()]);
    loop {
        let before = image.len();
        let current: Vec<Vec<i8>> = image.iter().cloned().collect();
        for s in &current {
            for u in &units {
                let v: Vec<i8> = s.iter().zip(places).map(|(x, &p)| x * u.sign_at(p)).collect();
                image.insert(v);
            }
        }
        if image.len() == before {
            break;
        }
    }
    h * (1usize << places.len()) / image.len()
}

/// Norm of an ideal product as an integer, for display.
pub fn norm_product(primes: &[PrimeIdeal]) -> Int {
    primes.iter().fold(Int::one(), |acc, q| acc * Int::from(q.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::forms::narrow_class_group;

    #[test]
    fn rational_ramification() {
        let q = RealQuadraticField::rationals();
        let alg = QuaternionAlgebraSpec::new(&q, q.int(-1), q.int(-1)).unwrap();
        assert_eq!(alg.ram_labels(), vec!["2"]);
        assert_eq!(alg.ram_infinite, vec![0]);
        let alg = QuaternionAlgebraSpec::new(&q, q.int(-1), q.int(-11)).unwrap();
        assert_eq!(alg.ram_labels(), vec!["11"]);
    }

    #[test]
    fn unramified_definite_over_sqrt7() {
        let f = RealQuadraticField::new(7).unwrap();
        let alg = find_unramified_definite_algebra(&f, 20).unwrap();
        assert!(alg.ram_finite.is_empty());
        assert!(alg.is_totally_definite(&f));
        let g = narrow_class_group(&f);
        assert_eq!(restricted_class_number(&f, &g, &alg), 2);
        assert!(find_unramified_definite_algebra(&RealQuadraticField::rationals(), 20).is_err());
    }
}
