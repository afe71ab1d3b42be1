//! Class numbers of Eichler orders fiber by fiber: the Eichler mass, the
//! spinor class mass, `h_sc` on each narrow class, the fibers of the map to
//! the wide class group, and the divisibility verdicts.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::cmorders::catalog::{big_m, build_catalog, BCatalog, CatalogOptions, Provenance};
use crate::error::{Error, Result};
use crate::numberfield::{narrow_class_group, zeta_minus_one, FormClassGroup, RealQuadraticField};
use crate::quatalg::{restricted_class_number, EichlerOrderSpec};
use crate::selectivity::{coset_sum_check, order_key, selectivity, DeltaBase, SelectivityReport};
use crate::{Int, Rat};

/// Everything about F that the fiber computation reuses across orders.
#[derive(Clone, Debug)]
pub struct BaseField {
    pub f: RealQuadraticField,
    pub group: FormClassGroup,
    pub catalog: BCatalog,
    pub zeta: Rat,
}

impl BaseField {
    /// `d = 1` stands for Q.
    pub fn new(d: i64, opts: &CatalogOptions) -> Result<BaseField> {
        let f = if d == 1 { RealQuadraticField::rationals() } else { RealQuadraticField::new(d)? };
        BaseField::from_field(f, opts)
    }

    pub fn from_field(f: RealQuadraticField, opts: &CatalogOptions) -> Result<BaseField> {
        let group = narrow_class_group(&f);
        let catalog = build_catalog(&f, &group, opts)?;
        let zeta = zeta_minus_one(&f);
        Ok(BaseField { f, group, catalog, zeta })
    }
}

/// `2^{1-n} |zeta_F(-1)| h(F) prod_{ram}(Np - 1) prod_{level}(Np + 1)`, as a
/// sum of `1/[O_i^x : O_F^x]` over the ideal classes.
pub fn eichler_mass(bf: &BaseField, order: &EichlerOrderSpec) -> Rat {
    let n = bf.f.degree() as u32;
    let mut m =
        bf.zeta.abs() * Rat::from_integer(Int::from(bf.group.h())) / Rat::from_integer(Int::from(2u32.pow(n - 1)));
    for q in &order.alg.ram_finite {
        m *= Rat::from_integer(Int::from(q.norm() - 1));
    }
    for q in &order.level {
        m *= Rat::from_integer(Int::from(q.norm() + 1));
    }
    m
}

/// Mass of one fiber of the reduced norm map: `Mass / h^+(F)`.
pub fn spinor_class_mass(bf: &BaseField, order: &EichlerOrderSpec) -> Rat {
    eichler_mass(bf, order) / Rat::from_integer(Int::from(bf.group.h_plus()))
}

/// An exact rational that serializes as a JSON integer when integral and
/// as the string `p/q` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Exact(pub Rat);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_u64() {
            Some(n) => s.serialize_u64(n),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl Exact {
    pub fn as_u64(&self) -> Option<u64> {
        if self.0.is_integer() && !self.0.is_negative() {
            self.0.to_integer().to_u64()
        } else {
            None
        }
    }
}

impl std::fmt::Display for Exact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn ser_rat<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_rat<S: Serializer>(x: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// Contribution of one catalog order.
#[derive(Clone, Debug, Serialize)]
pub struct TermReport {
    pub order: String,
    pub h: u64,
    pub w: u64,
    #[serde(serialize_with = "ser_rat")]
    pub m: Rat,
    pub provenance: Provenance,
    pub selectivity: SelectivityReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Divisibility {
    pub h_f: usize,
    pub h_plus: usize,
    pub h_f_divides: bool,
    pub h_plus_divides: bool,
    /// Whether `h^+ | h(O)` is a theorem for this order.
    pub h_plus_required: bool,
    /// `h^+` fails to divide where no theorem demands it.
    pub expected_negative: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Assumptions {
    /// Base value used for each selective order.
    pub delta_base: BTreeMap<String, u8>,
    pub mass_sc: &'static str,
    pub relaxed: bool,
    /// Set when the catalog rests on the finite list of unit sources, which
    /// is only known to be exhaustive on the fields it was tested on.
    pub catalog_warning: Option<&'static str>,
}

const CATALOG_WARNING: &str =
    "CM orders found from unit sources i, zeta3, zeta5, sqrt(-eps) and Hasse units; exhaustiveness not proven for this field";

#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    pub field: String,
    pub d: i64,
    pub algebra: AlgebraSummary,
    pub level: Vec<String>,
    pub totally_definite: bool,
    #[serde(serialize_with = "ser_opt_rat")]
    pub mass: Option<Rat>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub mass_sc: Option<Rat>,
    pub h: usize,
    pub h_plus: usize,
    pub r: usize,
    /// Keyed by narrow class label; empty for indefinite algebras.
    pub psi_fibers: BTreeMap<String, Exact>,
    /// Keyed by wide class label.
    pub phi_fibers: BTreeMap<String, Exact>,
    pub total: Exact,
    pub divisibility: Divisibility,
    pub assumptions: Assumptions,
    pub terms: Vec<TermReport>,
    /// Class number source of each catalog order.
    pub provenance: BTreeMap<String, Provenance>,
    /// Per-class values in class-group order (not serialized).
    #[serde(skip)]
    pub psi: Vec<Rat>,
    #[serde(skip)]
    pub phi: Vec<Rat>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraSummary {
    pub a: String,
    pub b: String,
    pub ram_finite: Vec<String>,
    pub ram_infinite: Vec<usize>,
}

impl FiberReport {
    pub fn total_u64(&self) -> Option<u64> {
        self.total.as_u64()
    }

    /// All wide-class fibers agree.
    pub fn phi_constant(&self) -> bool {
        self.phi.windows(2).all(|w| w[0] == w[1])
    }

    /// Orders in the selective part of the catalog.
    pub fn selective_orders(&self) -> Vec<String> {
        self.terms.iter().filter(|t| t.selectivity.selective).map(|t| t.order.clone()).collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct FiberOptions {
    pub delta_base: DeltaBase,
    /// Accept non-integral fibers (used when sweeping base assignments).
    pub relaxed: bool,
}

/// `h_sc` on class `c`, reorganized form: non-selective orders weighted by
/// `1/(2h^+)`, selective ones by `delta(c)/h^+`.
pub fn h_sc_reorganized(mass_sc: &Rat, h_plus: usize, terms: &[TermReport], c: usize) -> Rat {
    let hp = Rat::from_integer(Int::from(h_plus));
    let mut non = Rat::zero();
    let mut sel = Rat::zero();
    for t in terms {
        let x = Rat::from_integer(Int::from(t.w - 1)) * &t.m;
        if t.selectivity.selective {
            sel += x * Rat::from_integer(Int::from(t.selectivity.delta[c]));
        } else {
            non += x;
        }
    }
    mass_sc + non / (Rat::from_integer(Int::from(2)) * &hp) + sel / hp
}

/// `h_sc` on class `c` with the uniform weight `2^s Delta(c)` on every order.
pub fn h_sc_weighted(mass_sc: &Rat, h_plus: usize, terms: &[TermReport], c: usize) -> Rat {
    let mut sum = Rat::zero();
    for t in terms {
        let weight = (1i64 << t.selectivity.s) * i64::from(t.selectivity.delta[c]);
        sum += Rat::from_integer(Int::from(weight * (t.w as i64 - 1))) * &t.m;
    }
    mass_sc + sum / Rat::from_integer(Int::from(2 * h_plus))
}

fn terms_for(bf: &BaseField, order: &EichlerOrderSpec, base: &DeltaBase) -> Result<Vec<TermReport>> {
    let mut out = Vec::with_capacity(bf.catalog.members.len());
    for b in &bf.catalog.members {
        let m = big_m(&bf.catalog, b, order)?;
        let rep = selectivity(&bf.catalog, b, order, &m, &bf.group, base)?;
        if !coset_sum_check(&rep, &bf.group)? {
            return Err(Error::InvariantViolation(format!(
                "delta of {} does not sum to r/2 on every ker(pi)-coset",
                rep.order
            )));
        }
        out.push(TermReport { order: order_key(b), h: b.h, w: b.w, m, provenance: b.provenance, selectivity: rep });
    }
    Ok(out)
}

/// Checks `h(F) | h(O)` (always) and `h^+(F) | h(O)` (required for totally
/// definite algebras ramified at a finite prime).
pub fn divisibility_verdict(bf: &BaseField, order: &EichlerOrderSpec, total: &Rat) -> Result<Divisibility> {
    let h = bf.group.h();
    let hp = bf.group.h_plus();
    let divides = |n: usize| total.is_integer() && (total.to_integer() % Int::from(n)).is_zero();
    let required = order.alg.is_totally_definite(&bf.f) && !order.alg.ram_finite.is_empty();
    let v = Divisibility {
        h_f: h,
        h_plus: hp,
        h_f_divides: divides(h),
        h_plus_divides: divides(hp),
        h_plus_required: required,
        expected_negative: !required && !divides(hp),
    };
    if !v.h_f_divides {
        return Err(Error::InvariantViolation(format!("h(F) = {h} does not divide h(O) = {total}")));
    }
    if required && !v.h_plus_divides {
        return Err(Error::InvariantViolation(format!("h^+(F) = {hp} does not divide h(O) = {total}")));
    }
    Ok(v)
}

/// The full fiber computation for one Eichler order.
pub fn compute_fibers(bf: &BaseField, order: &EichlerOrderSpec, opts: &FiberOptions) -> Result<FiberReport> {
    let g = &bf.group;
    let alg = &order.alg;
    let summary = AlgebraSummary {
        a: alg.a.to_string(),
        b: alg.b.to_string(),
        ram_finite: alg.ram_labels(),
        ram_infinite: alg.ram_infinite.clone(),
    };
    let totally_definite = alg.is_totally_definite(&bf.f);
    let mut report = FiberReport {
        field: bf.f.name(),
        d: bf.f.d,
        algebra: summary,
        level: order.level_labels(),
        totally_definite,
        mass: None,
        mass_sc: None,
        h: g.h(),
        h_plus: g.h_plus(),
        r: g.r(),
        psi_fibers: BTreeMap::new(),
        phi_fibers: BTreeMap::new(),
        total: Exact(Rat::zero()),
        divisibility: Divisibility {
            h_f: g.h(),
            h_plus: g.h_plus(),
            h_f_divides: false,
            h_plus_divides: false,
            h_plus_required: false,
            expected_negative: false,
        },
        assumptions: Assumptions {
            delta_base: BTreeMap::new(),
            mass_sc: "Mass/h+",
            relaxed: opts.relaxed,
            catalog_warning: (!bf.f.is_rational()).then_some(CATALOG_WARNING),
        },
        terms: Vec::new(),
        provenance: BTreeMap::new(),
        psi: Vec::new(),
        phi: Vec::new(),
    };

    if !totally_definite {
        // strong approximation: h(O) = h_D(F), spread evenly over Cl(F)
        let hd = restricted_class_number(&bf.f, g, alg);
        let per = Rat::new(Int::from(hd), Int::from(g.h()));
        report.phi = vec![per; g.h()];
        report.total = Exact(Rat::from_integer(Int::from(hd)));
    } else {
        let mass = eichler_mass(bf, order);
        let mass_sc = spinor_class_mass(bf, order);
        let terms = terms_for(bf, order, &opts.delta_base)?;
        let mut psi = Vec::with_capacity(g.h_plus());
        for c in 0..g.h_plus() {
            let v = h_sc_reorganized(&mass_sc, g.h_plus(), &terms, c);
            let check = h_sc_weighted(&mass_sc, g.h_plus(), &terms, c);
            if v != check {
                return Err(Error::InvariantViolation(format!(
                    "fiber formulas disagree on class {}: {v} vs {check}",
                    g.label(c)
                )));
            }
            if !opts.relaxed && !(v.is_integer() && v.is_positive()) {
                let inputs: Vec<String> = terms
                    .iter()
                    .map(|t| format!("{}: h={} w={} M={} delta={}", t.order, t.h, t.w, t.m, t.selectivity.delta[c]))
                    .collect();
                return Err(Error::NonIntegral {
                    value: v.to_string(),
                    context: format!(
                        "{} level [{}] class {}: Mass_sc={mass_sc}, h+={}, {}",
                        bf.f.name(),
                        order.level_labels().join(","),
                        g.label(c),
                        g.h_plus(),
                        inputs.join("; ")
                    ),
                });
            }
            psi.push(v);
        }
        report.phi = g.cosets.iter().map(|co| co.iter().map(|&c| psi[c].clone()).sum()).collect();
        report.total = Exact(psi.iter().sum());
        for (c, v) in psi.iter().enumerate() {
            report.psi_fibers.insert(g.label(c), Exact(v.clone()));
        }
        report.assumptions.delta_base = terms
            .iter()
            .filter(|t| t.selectivity.selective)
            .map(|t| (t.order.clone(), t.selectivity.delta_base))
            .collect();
        report.psi = psi;
        report.mass = Some(mass);
        report.mass_sc = Some(mass_sc);
        report.provenance = terms.iter().map(|t| (t.order.clone(), t.provenance)).collect();
        report.terms = terms;
    }
    for (w, v) in report.phi.iter().enumerate() {
        report.phi_fibers.insert(g.wide_label(w), Exact(v.clone()));
    }
    let total = report.total.0.clone();
    if !opts.relaxed || total.is_integer() {
        report.divisibility = divisibility_verdict(bf, order, &total)?;
    }
    Ok(report)
}

/// Sum over the catalog of `(w - 1) M(B)`.
pub fn weighted_embedding_sum(report: &FiberReport) -> Rat {
    report.terms.iter().map(|t| Rat::from_integer(Int::from(t.w - 1)) * &t.m).fold(Rat::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int::rat_frac;
    use crate::numberfield::FElem;
    use crate::quatalg::{eichler_order, find_unramified_definite_algebra, QuaternionAlgebraSpec};

    fn rational_order(b: i64, level: &[u64]) -> (BaseField, EichlerOrderSpec) {
        let bf = BaseField::new(1, &CatalogOptions::default()).unwrap();
        let alg = QuaternionAlgebraSpec::new(&bf.f, FElem::from_int(1, -1), FElem::from_int(1, b)).unwrap();
        let lv: Vec<_> = level.iter().map(|&p| crate::numberfield::prime_ideals_above(&bf.f, p).remove(0)).collect();
        let o = eichler_order(&alg, &lv).unwrap();
        (bf, o)
    }

    #[test]
    fn rational_maximal_orders() {
        let (bf, o) = rational_order(-1, &[]);
        assert_eq!(eichler_mass(&bf, &o), rat_frac(1, 12));
        let r = compute_fibers(&bf, &o, &FiberOptions::default()).unwrap();
        assert_eq!(r.total_u64(), Some(1));
        let (bf, o) = rational_order(-11, &[]);
        assert_eq!(eichler_mass(&bf, &o), rat_frac(5, 6));
        let r = compute_fibers(&bf, &o, &FiberOptions::default()).unwrap();
        assert_eq!(r.total_u64(), Some(2));
    }

    #[test]
    fn sqrt7_anchor() {
        let bf = BaseField::new(7, &CatalogOptions::default()).unwrap();
        let alg = find_unramified_definite_algebra(&bf.f, 50).unwrap();
        let o = eichler_order(&alg, &[]).unwrap();
        assert_eq!(eichler_mass(&bf, &o), rat_frac(1, 3));
        assert_eq!(spinor_class_mass(&bf, &o), rat_frac(1, 6));
        let r = compute_fibers(&bf, &o, &FiberOptions::default()).unwrap();
        assert_eq!(weighted_embedding_sum(&r), rat_frac(16, 3));
        assert_eq!(r.total_u64(), Some(3));
        assert_eq!(r.phi.len(), 1);
        assert!(r.divisibility.h_f_divides);
        assert!(!r.divisibility.h_plus_divides);
        assert!(r.divisibility.expected_negative);
    }
}
