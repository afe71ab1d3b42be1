//! The finite catalog of CM O_F-orders `B` with `w(B) > 1`, their class
//! numbers, local optimal embedding numbers and `M(B)`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cmorders::classgroup::{order_class_number, unit_index_ratio};
use crate::cmorders::field::{same_rational_field, sqrt_minus_eps_parameter, CMField, CMKind};
use crate::cmorders::table::CuratedTable;
use crate::error::{Error, Result};
use crate::numberfield::field::{RealQuadraticField, Splitting};
use crate::numberfield::forms::FormClassGroup;
use crate::numberfield::ideal::{factor_ideal, PrimeIdeal, QuadIdeal};
use crate::quatalg::EichlerOrderSpec;
use crate::{Int, Lattice, Rat};

/// Where a class number came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Curated,
}

/// An integral ideal of O_F used as a conductor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conductor {
    pub ideal: QuadIdeal,
    pub factors: Vec<(PrimeIdeal, u32)>,
}

impl Conductor {
    pub fn unit(f: &RealQuadraticField) -> Conductor {
        Conductor { ideal: QuadIdeal::unit(f), factors: Vec::new() }
    }

    pub fn norm(&self) -> u64 {
        self.factors.iter().map(|(q, e)| q.norm().pow(*e)).product()
    }

    /// `1`, or the prime labels joined by `*` with multiplicity.
    pub fn label(&self) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (q, e) in &self.factors {
            for _ in 0..*e {
                parts.push(q.label());
            }
        }
        parts.join("*")
    }

    pub fn is_divisible_by(&self, q: &PrimeIdeal) -> bool {
        self.factors.iter().any(|(p, _)| p == q)
    }
}

/// A catalog member `B = O_F + f O_K`.
#[derive(Clone, Debug)]
pub struct CMOrderRecord {
    /// Index into [`BCatalog::fields`].
    pub field: usize,
    pub tag: String,
    pub conductor: Conductor,
    pub h: u64,
    /// `[B^x : O_F^x]`.
    pub w: u64,
    pub provenance: Provenance,
    pub lattice: Lattice,
}

/// The catalog of one base field.
#[derive(Clone, Debug)]
pub struct BCatalog {
    pub f: RealQuadraticField,
    pub fields: Vec<CMField>,
    pub members: Vec<CMOrderRecord>,
}

impl BCatalog {
    pub fn d(&self) -> i64 {
        self.f.d
    }

    pub fn field_of(&self, b: &CMOrderRecord) -> &CMField {
        &self.fields[b.field]
    }
}

/// Options for [`build_catalog`].
#[derive(Clone, Debug)]
pub struct CatalogOptions<'a> {
    /// Largest ideal norm the class group enumeration may use.
    pub budget: u64,
    pub curated: Option<&'a CuratedTable>,
}

impl Default for CatalogOptions<'_> {
    fn default() -> Self {
        CatalogOptions { budget: 5000, curated: None }
    }
}

/// The CM extensions of F with `O_K^x != O_F^x`: `F(i)`, `F(sqrt -3)`,
/// `F(sqrt(-eps))` for a totally positive fundamental unit and `Q(zeta5)`
/// over `Q(sqrt 5)`, without repetitions.
pub fn cm_fields(f: &RealQuadraticField) -> Result<Vec<CMField>> {
    let mut params: Vec<(i64, &str)> = vec![(1, "F(i)"), (3, "F(zeta3)")];
    if let Some(m) = sqrt_minus_eps_parameter(f) {
        params.push((m, "F(sqrt(-eps))"));
    }
    let mut kept: Vec<(i64, &str)> = Vec::new();
    for (m, tag) in params {
        if !kept.iter().any(|&(m2, _)| same_rational_field(f.d, m, m2)) {
            kept.push((m, tag));
        }
    }
    let mut out = Vec::new();
    for (m, tag) in kept {
        out.push(CMField::with_rational_delta(f, m, tag)?);
    }
    if f.d == 5 {
        out.push(CMField::zeta5(f)?);
    }
    Ok(out)
}

/// Candidate conductors: divisors `f` of `(u - conj u)^2` with `f^2` dividing
/// it, over all unit coset representatives `u` outside O_F.
fn candidate_conductors(k: &CMField) -> Vec<Conductor> {
    let f = &k.f;
    let mut seen: BTreeSet<Vec<(u64, usize, u32)>> = BTreeSet::new();
    let mut out = Vec::new();
    for u in k.unit_coset_reps() {
        if u.is_in_f() {
            continue;
        }
        let diff = k.sub(&u, &u.conj());
        let sq = k.mul(&diff, &diff);
        debug_assert!(sq.is_in_f());
        let ideal = QuadIdeal::principal(f, &sq.x);
        let fac = factor_ideal(f, &ideal);
        let mut exps: Vec<Vec<u32>> = vec![Vec::new()];
        for (_, e) in &fac {
            let mut next = Vec::new();
            for prefix in &exps {
                for k in 0..=e / 2 {
                    let mut v = prefix.clone();
                    v.push(k);
                    next.push(v);
                }
            }
            exps = next;
        }
        for ex in exps {
            let factors: Vec<(PrimeIdeal, u32)> =
                fac.iter().zip(&ex).filter(|(_, &e)| e > 0).map(|((q, _), &e)| (q.clone(), e)).collect();
            let key: Vec<(u64, usize, u32)> = factors.iter().map(|(q, e)| (q.p, q.index, *e)).collect();
            if !seen.insert(key) {
                continue;
            }
            let mut ideal = QuadIdeal::unit(f);
            for (q, e) in &factors {
                ideal = ideal.mul(f, &q.ideal.pow(f, *e));
            }
            out.push(Conductor { ideal, factors });
        }
    }
    out.sort_by_key(|c| (c.norm(), c.label()));
    out
}

/// `w(B)`: the number of unit coset representatives lying in `B`.
pub fn unit_index(k: &CMField, order: &Lattice) -> u64 {
    k.unit_coset_reps().iter().filter(|u| k.contains(order, u)).count() as u64
}

/// Builds the catalog of F. Class numbers come from ideal enumeration; when
/// the enumeration would exceed the budget, curated values are used instead.
/// Curated values that disagree with computed ones are a hard failure.
pub fn build_catalog(f: &RealQuadraticField, group: &FormClassGroup, opts: &CatalogOptions) -> Result<BCatalog> {
    let fields = cm_fields(f)?;
    let mut members = Vec::new();
    for (idx, k) in fields.iter().enumerate() {
        let h_max = match k.class_number(group, opts.budget) {
            Ok(h) => Some(h),
            Err(e @ Error::BudgetExceeded { .. }) => {
                if opts.curated.is_none() {
                    return Err(e);
                }
                None
            }
            Err(e) => return Err(e),
        };
        let w_max = k.w_max() as u64;
        for cond in candidate_conductors(k) {
            let lattice = k.order_of_conductor(&cond.ideal);
            let w = unit_index(k, &lattice);
            if w <= 1 {
                continue;
            }
            let curated = opts.curated.and_then(|t| t.get(f.d, &k.tag, cond.norm()));
            let (h, provenance) = match h_max {
                Some(hm) => {
                    let ratio = unit_index_ratio(k, &cond.factors);
                    let h = order_class_number(hm, &ratio, (w_max / w) as usize)?;
                    if let Some(row) = curated {
                        if row.h != h || row.w != w {
                            return Err(Error::Conflict {
                                key: format!("{}, {}, {}", f.d, k.tag, cond.norm()),
                                left: format!("computed h={h} w={w}"),
                                right: format!("curated h={} w={} (line {})", row.h, row.w, row.line),
                            });
                        }
                    }
                    (h, Provenance::Computed)
                }
                None => match curated {
                    Some(row) if row.w == w => (row.h, Provenance::Curated),
                    Some(row) => {
                        return Err(Error::Conflict {
                            key: format!("{}, {}, {}", f.d, k.tag, cond.norm()),
                            left: format!("computed w={w}"),
                            right: format!("curated w={} (line {})", row.w, row.line),
                        })
                    }
                    None => {
                        return Err(Error::BudgetExceeded {
                            what: format!("class number of {} over {} (no curated row)", k.tag, f.name()),
                            needed: k.minkowski_bound(),
                            budget: opts.budget,
                        })
                    }
                },
            };
            members.push(CMOrderRecord { field: idx, tag: k.tag.clone(), conductor: cond, h, w, provenance, lattice });
        }
    }
    Ok(BCatalog { f: f.clone(), fields, members })
}

/// Eichler symbol of `B` at `q`: `+1` if `q` divides the conductor, otherwise
/// `+1`, `-1`, `0` for `q` split, inert, ramified in K.
pub fn eichler_symbol(cat: &BCatalog, b: &CMOrderRecord, q: &PrimeIdeal) -> i64 {
    if b.conductor.is_divisible_by(q) {
        return 1;
    }
    match cat.field_of(b).splitting_of(q) {
        Splitting::Split => 1,
        Splitting::Inert => -1,
        Splitting::Ramified => 0,
    }
}

fn check_conductor(b: &CMOrderRecord, order: &EichlerOrderSpec) -> Result<()> {
    for q in order.disc_primes() {
        if b.conductor.is_divisible_by(&q) {
            return Err(Error::Unsupported(format!(
                "conductor {} of {} shares the prime {} with the discriminant",
                b.conductor.label(),
                b.tag,
                q.label()
            )));
        }
    }
    Ok(())
}

/// Number of `O_q^x`-orbits of optimal embeddings `B_q -> O_q`.
pub fn local_embedding_count(
    cat: &BCatalog,
    b: &CMOrderRecord,
    order: &EichlerOrderSpec,
    q: &PrimeIdeal,
) -> Result<i64> {
    check_conductor(b, order)?;
    let e = eichler_symbol(cat, b, q);
    Ok(if order.alg.is_ramified_at(q) {
        1 - e
    } else if order.level.contains(q) {
        1 + e
    } else {
        1
    })
}

/// `M(B) = h(B)/w(B) * prod_q m_q`.
pub fn big_m(cat: &BCatalog, b: &CMOrderRecord, order: &EichlerOrderSpec) -> Result<Rat> {
    check_conductor(b, order)?;
    let mut m = Rat::new(Int::from(b.h), Int::from(b.w));
    for q in order.disc_primes() {
        let c = local_embedding_count(cat, b, order, &q)?;
        m *= Rat::from_integer(Int::from(c));
    }
    Ok(m)
}

/// Whether `B` lies in `B'` (same field).
pub fn is_suborder(a: &CMOrderRecord, b: &CMOrderRecord) -> bool {
    a.field == b.field && b.lattice.contains_lattice(&a.lattice)
}

pub fn is_biquadratic(k: &CMField) -> bool {
    matches!(k.kind, CMKind::Rational(_)) && !k.f.is_rational()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::forms::narrow_class_group;
    use crate::numberfield::ideal::prime_ideals_above;
    use crate::quatalg::{eichler_order, QuaternionAlgebraSpec};

    fn rational_catalog() -> BCatalog {
        let q = RealQuadraticField::rationals();
        build_catalog(&q, &narrow_class_group(&q), &CatalogOptions::default()).unwrap()
    }

    #[test]
    fn catalog_over_q() {
        let cat = rational_catalog();
        let summary: Vec<(String, String, u64, u64)> =
            cat.members.iter().map(|b| (b.tag.clone(), b.conductor.label(), b.h, b.w)).collect();
        assert_eq!(summary, vec![("F(i)".into(), "1".into(), 1, 2), ("F(zeta3)".into(), "1".into(), 1, 3)]);
    }

    #[test]
    fn embedding_numbers_over_q() {
        let cat = rational_catalog();
        let q = &cat.f;
        let gauss = &cat.members[0];
        let eis = &cat.members[1];
        let alg = |b: i64| QuaternionAlgebraSpec::new(q, q.int(-1), q.int(-b)).unwrap();
        let o2 = eichler_order(&QuaternionAlgebraSpec::new(q, q.int(-1), q.int(-1)).unwrap(), &[]).unwrap();
        let p = |n: u64| prime_ideals_above(q, n).remove(0);
        assert_eq!(local_embedding_count(&cat, gauss, &o2, &p(2)).unwrap(), 1);
        assert_eq!(big_m(&cat, gauss, &o2).unwrap(), Rat::new(1.into(), 2.into()));
        assert_eq!(big_m(&cat, eis, &o2).unwrap(), Rat::new(2.into(), 3.into()));
        let o11 = eichler_order(&alg(11), &[]).unwrap();
        assert_eq!(local_embedding_count(&cat, gauss, &o11, &p(11)).unwrap(), 2);
        let o13 = eichler_order(&QuaternionAlgebraSpec::new(q, q.int(-2), q.int(-13)).unwrap(), &[]).unwrap();
        assert_eq!(o13.alg.ram_labels(), vec!["13"]);
        assert_eq!(local_embedding_count(&cat, gauss, &o13, &p(13)).unwrap(), 0);
        assert_eq!(big_m(&cat, gauss, &o13).unwrap(), Rat::from_integer(0.into()));
    }

    #[test]
    fn catalog_over_sqrt7_and_sqrt5() {
        let f = RealQuadraticField::new(7).unwrap();
        let cat = build_catalog(&f, &narrow_class_group(&f), &CatalogOptions::default()).unwrap();
        let tags: BTreeSet<&str> = cat.members.iter().map(|b| b.tag.as_str()).collect();
        assert_eq!(tags, BTreeSet::from(["F(i)", "F(zeta3)", "F(sqrt(-eps))"]));
        let f = RealQuadraticField::new(5).unwrap();
        let cat = build_catalog(&f, &narrow_class_group(&f), &CatalogOptions::default()).unwrap();
        assert!(cat.members.iter().any(|b| b.tag == "F(zeta5)"));
    }
}
