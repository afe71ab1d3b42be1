//! Class numbers of biquadratic CM fields from ideal enumeration against the
//! unit-index formula h_K = Q w_K / (w_1 w_2) h(F) h(k_1) h(k_2).

use num_traits::ToPrimitive;
use quatclass::arith::int::{is_squarefree, squarefree_part};
use quatclass::cmorders::classgroup::imaginary_form_class_number;
use quatclass::cmorders::field::{sqrt_minus_eps_parameter, CMField};
use quatclass::numberfield::field::RealQuadraticField;
use quatclass::numberfield::forms::narrow_class_group;
use rayon::prelude::*;

fn fundamental(n: i64) -> i64 {
    if n.rem_euclid(4) == 1 {
        n
    } else {
        4 * n
    }
}

fn roots_of_unity_count(disc: i64) -> usize {
    match disc {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

#[test]
fn enumeration_matches_unit_index_formula() {
    let ds: Vec<i64> = (2..=100).filter(|&d| is_squarefree(d)).collect();
    ds.par_iter().for_each(|&d| {
        let f = RealQuadraticField::new(d).unwrap();
        let g = narrow_class_group(&f);
        let mut ms = vec![1, 3];
        ms.extend(sqrt_minus_eps_parameter(&f));
        for m in ms {
            let k = CMField::with_rational_delta(&f, m, "K").unwrap();
            let d1 = fundamental(-m);
            let d2 = fundamental(squarefree_part(-m * d));
            let num = k.hasse_unit_index()
                * k.w_k()
                * g.h()
                * imaginary_form_class_number(d1)
                * imaginary_form_class_number(d2);
            let den = roots_of_unity_count(d1) * roots_of_unity_count(d2);
            assert_eq!(num % den, 0, "d = {d}, m = {m}");
            let h = k.class_number(&g, 100_000).unwrap();
            assert_eq!(h, num / den, "d = {d}, m = {m}, disc = {}", k.disc.to_i64().unwrap());
        }
    });
}
