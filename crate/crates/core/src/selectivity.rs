//! Optimal spinor selectivity of catalog orders for an Eichler genus, and
//! the map `delta` on narrow classes.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::int::{legendre, primes_up_to, rat_mod};
use crate::cmorders::catalog::{BCatalog, CMOrderRecord};
use crate::cmorders::field::CMField;
use crate::error::{Error, Result};
use crate::numberfield::field::Splitting;
use crate::numberfield::forms::FormClassGroup;
use crate::numberfield::ideal::prime_ideals_above;
use crate::quatalg::EichlerOrderSpec;
use crate::Rat;

/// Condition (a): K/F is unramified at every finite prime, i.e.
/// `|disc K| = disc(F)^2`.
pub fn is_unramified_cm_extension(k: &CMField) -> bool {
    let dk = num_traits::Signed::abs(&k.disc);
    dk == &k.f.disc * &k.f.disc
}

/// Condition (b): every prime dividing the reduced discriminant to an odd
/// power splits in K.
pub fn condition_b(k: &CMField, order: &EichlerOrderSpec) -> bool {
    order.disc_primes().iter().all(|q| k.splitting_of(q) == Splitting::Split)
}

/// Artin symbol of an unramified CM extension on each narrow class
/// (0: trivial Frobenius), read off from degree-one primes of F. Every
/// class is sampled at least `samples` times and the samples must agree.
pub fn artin_map(k: &CMField, group: &FormClassGroup, samples: usize) -> Result<Vec<u8>> {
    if !is_unramified_cm_extension(k) {
        return Err(Error::InvalidInput(format!("{} is ramified over {}", k.tag, k.f.name())));
    }
    let f = &k.f;
    let hp = group.h_plus();
    let mut seen: Vec<Vec<u8>> = vec![Vec::new(); hp];
    let bad = {
        let n = k.delta.norm();
        let mut v = crate::arith::int::prime_divisors(n.numer());
        v.extend(crate::arith::int::prime_divisors(n.denom()));
        v.extend(crate::arith::int::prime_divisors(&f.disc));
        v.push(2);
        v
    };
    const LIMIT: u64 = 20_000;
    for p in primes_up_to(LIMIT) {
        if seen.iter().all(|s| s.len() >= samples) {
            break;
        }
        if bad.contains(&p) {
            continue;
        }
        for q in prime_ideals_above(f, p) {
            if q.f != 1 {
                continue;
            }
            let c = group.class_of(f, &q.ideal);
            if seen[c].len() >= samples {
                continue;
            }
            let residue = match q.sqrt_d_residue(f) {
                Some(t) => {
                    let a = rat_mod(&k.delta.a, p).unwrap();
                    let b = if k.delta.b.is_zero() { 0 } else { rat_mod(&k.delta.b, p).unwrap() };
                    (a + b * t % p) % p
                }
                None => rat_mod(&k.delta.a, p).unwrap(),
            };
            seen[c].push(if legendre(residue, p) == 1 { 0 } else { 1 });
        }
    }
    let mut values = Vec::with_capacity(hp);
    for (c, s) in seen.iter().enumerate() {
        if s.len() < samples {
            return Err(Error::SearchExhausted {
                what: format!("split primes in narrow class {}", group.label(c)),
                bound: LIMIT,
            });
        }
        if s.iter().any(|&x| x != s[0]) {
            return Err(Error::InvariantViolation(format!(
                "Artin symbol of {} is not constant on narrow class {}",
                k.tag,
                group.label(c)
            )));
        }
        values.push(s[0]);
    }
    for x in 0..hp {
        for y in 0..hp {
            if values[group.mul(x, y)] != values[x] ^ values[y] {
                return Err(Error::InvariantViolation(format!("Artin map of {} is not a homomorphism", k.tag)));
            }
        }
    }
    Ok(values)
}

/// Base values for the selective orders. `default` is `Delta(O_K, O)` for
/// the maximal order of each K; an order of conductor f inherits
/// `default + (f, K/F)`. Overrides, keyed by [`order_key`], set
/// `Delta(B, O)` directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaBase {
    pub default: u8,
    pub overrides: BTreeMap<String, u8>,
}

impl Default for DeltaBase {
    fn default() -> Self {
        DeltaBase { default: 1, overrides: BTreeMap::new() }
    }
}

impl DeltaBase {
    pub fn constant(v: u8) -> DeltaBase {
        DeltaBase { default: v, overrides: BTreeMap::new() }
    }

    pub fn override_for(&self, b: &CMOrderRecord) -> Option<u8> {
        self.overrides.get(&order_key(b)).copied()
    }

    /// Parses `0`, `1`, or comma-separated entries `KEY=0|1` (plus an
    /// optional bare default), with `KEY = tag@conductor`.
    pub fn parse(s: &str) -> Result<DeltaBase> {
        let mut out = DeltaBase::default();
        let bit = |t: &str| match t.trim() {
            "0" => Ok(0u8),
            "1" => Ok(1u8),
            other => Err(Error::InvalidInput(format!("delta base value {other:?} is not 0 or 1"))),
        };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.rsplit_once('=') {
                Some((key, v)) => {
                    out.overrides.insert(key.trim().to_string(), bit(v)?);
                }
                None => out.default = bit(part)?,
            }
        }
        Ok(out)
    }
}

/// `tag@conductor`, e.g. `F(i)@1`.
pub fn order_key(b: &CMOrderRecord) -> String {
    format!("{}@{}", b.tag, b.conductor.label())
}

/// Selectivity data of one catalog order for one genus.
#[derive(Clone, Debug, Serialize)]
pub struct SelectivityReport {
    pub order: String,
    pub cond_a: bool,
    pub cond_b: bool,
    pub s: u8,
    pub m_nonzero: bool,
    pub selective: bool,
    /// `Delta(B, O)`, the value of `delta` on the trivial class.
    pub delta_base: u8,
    /// `delta` on every narrow class, in class-group order.
    pub delta: Vec<u8>,
}

pub fn selectivity(
    cat: &BCatalog,
    b: &CMOrderRecord,
    order: &EichlerOrderSpec,
    m_b: &Rat,
    group: &FormClassGroup,
    base: &DeltaBase,
) -> Result<SelectivityReport> {
    let k = cat.field_of(b);
    let cond_a = is_unramified_cm_extension(k);
    let cond_b = condition_b(k, order);
    let s = cond_a && cond_b;
    let m_nonzero = !m_b.is_zero();
    let selective = s && m_nonzero;
    let (delta, delta_base) = if selective {
        let art = artin_map(k, group, 3)?;
        let own =
            base.override_for(b).unwrap_or_else(|| base.default ^ art[group.class_of(&cat.f, &b.conductor.ideal)]);
        (art.iter().map(|a| a ^ own).collect(), own)
    } else {
        (vec![u8::from(m_nonzero); group.h_plus()], u8::from(m_nonzero))
    };
    Ok(SelectivityReport {
        order: order_key(b),
        cond_a,
        cond_b,
        s: u8::from(s),
        m_nonzero,
        selective,
        delta_base,
        delta,
    })
}

/// Each `ker(pi)`-coset carries `delta`-sum `r/2`. Non-selective reports
/// pass trivially.
pub fn coset_sum_check(report: &SelectivityReport, group: &FormClassGroup) -> Result<bool> {
    if !report.selective {
        return Ok(true);
    }
    let r = group.r();
    if r % 2 == 1 {
        return Err(Error::InvariantViolation(format!(
            "selective order {} over a field with r = {r} odd",
            report.order
        )));
    }
    Ok(group.cosets.iter().all(|coset| coset.iter().map(|&c| report.delta[c] as usize).sum::<usize>() == r / 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmorders::catalog::cm_fields;
    use crate::numberfield::field::RealQuadraticField;
    use crate::numberfield::forms::narrow_class_group;

    #[test]
    fn condition_a_examples() {
        let q = RealQuadraticField::rationals();
        assert!(cm_fields(&q).unwrap().iter().all(|k| !is_unramified_cm_extension(k)));
        let f = RealQuadraticField::new(7).unwrap();
        let ks = cm_fields(&f).unwrap();
        assert!(is_unramified_cm_extension(&ks[0]));
        assert!(!is_unramified_cm_extension(&ks[1]));
        let g = narrow_class_group(&f);
        let art = artin_map(&ks[0], &g, 3).unwrap();
        assert_eq!(art.iter().map(|&x| x as usize).sum::<usize>(), 1);
    }

    #[test]
    fn delta_base_spec() {
        let d = DeltaBase::parse("0, F(i)@1=1").unwrap();
        assert_eq!(d.default, 0);
        assert_eq!(d.overrides["F(i)@1"], 1);
        assert!(DeltaBase::parse("2").is_err());
    }
}
