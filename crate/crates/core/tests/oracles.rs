//! Field invariants against independent computations: brute-force units,
//! the Bernoulli-number form of zeta_F(-1), and the analytic class number
//! formula.

use num_traits::ToPrimitive;

use quatclass::arith::int::{factor, is_squarefree, kronecker_prime};
use quatclass::numberfield::{narrow_class_group, zeta_minus_one, FElem, RealQuadraticField};
use quatclass::{Int, Rat};

fn fields(max: i64) -> impl Iterator<Item = RealQuadraticField> {
    (2..=max).filter(|&d| is_squarefree(d)).map(|d| RealQuadraticField::new(d).unwrap())
}

fn disc(d: i64) -> i64 {
    if d % 4 == 1 {
        d
    } else {
        4 * d
    }
}

/// Kronecker symbol `(D / n)` for a fundamental discriminant, multiplicative in n.
fn chi(dd: i64, n: u64) -> i64 {
    if n == 0 {
        return 0;
    }
    factor(n).into_iter().map(|(p, e)| (kronecker_prime(&Int::from(dd), p) as i64).pow(e)).product()
}

fn is_square(n: u128) -> bool {
    let r = (n as f64).sqrt() as u128;
    (r.saturating_sub(1)..=r + 1).any(|s| s * s == n)
}

/// Smallest unit `(x + y sqrt D)/2 > 1` with `x^2 - D y^2 = +-4`, scanning y.
fn brute_force_unit(d: i64, max_y: u128) -> Option<(u128, u128, i8)> {
    let dd = disc(d) as u128;
    for y in 1..=max_y {
        for (sign, n) in [(-1i8, dd * y * y - 4), (1, dd * y * y + 4)] {
            if is_square(n) {
                return Some(((n as f64).sqrt().round() as u128, y, sign));
            }
        }
    }
    None
}

#[test]
fn fundamental_units_match_brute_force() {
    let mut compared = 0;
    for f in fields(200) {
        let Some((x, y, sign)) = brute_force_unit(f.d, 200_000) else {
            continue;
        };
        let dd = disc(f.d);
        // (x + y sqrt(D))/2 with D = d or 4d
        let (a, b) = if dd == f.d {
            (Rat::new(x.into(), 2.into()), Rat::new(y.into(), 2.into()))
        } else {
            (Rat::from_integer(Int::from(x) / 2), Rat::from_integer(y.into()))
        };
        let expect = FElem::new(f.d, a, b);
        assert_eq!(f.fund_unit.as_ref(), Some(&expect), "d = {}", f.d);
        assert_eq!(f.unit_norm, sign, "d = {}", f.d);
        compared += 1;
    }
    assert!(compared > 100);
}

/// `zeta_F(-1) = B_{2,chi} / 24` with `B_{2,chi} = D sum_{a=1}^{D} chi(a) B_2(a/D)`.
#[test]
fn zeta_matches_generalized_bernoulli() {
    for f in fields(150) {
        let dd = disc(f.d);
        let mut b2 = Rat::from_integer(0.into());
        for a in 1..=dd {
            let x = Rat::new(a.into(), dd.into());
            let poly = &x * &x - &x + Rat::new(1.into(), 6.into());
            b2 += poly * Rat::from_integer(chi(dd, a as u64).into());
        }
        b2 *= Rat::from_integer(dd.into());
        assert_eq!(zeta_minus_one(&f), b2 / Rat::from_integer(24.into()), "d = {}", f.d);
    }
}

/// `h log(eps) = -sum_{a < D/2} chi(a) log sin(pi a / D)`, in floating point.
#[test]
fn class_numbers_match_analytic_formula() {
    for f in fields(200) {
        let dd = disc(f.d);
        let eps = f.fund_unit.as_ref().unwrap();
        let log_eps = eps.a.to_f64().unwrap() + eps.b.to_f64().unwrap() * (f.d as f64).sqrt();
        let s: f64 = (1..dd / 2 + 1)
            .map(|a| -(chi(dd, a as u64) as f64) * (std::f64::consts::PI * a as f64 / dd as f64).sin().ln())
            .sum();
        let h = s / log_eps.ln();
        let g = narrow_class_group(&f);
        assert!((h - g.h() as f64).abs() < 1e-6, "d = {}: analytic {h}, forms {}", f.d, g.h());
        let r = if f.unit_norm == 1 { 2 } else { 1 };
        assert_eq!(g.h_plus(), r * g.h(), "d = {}", f.d);
    }
}
