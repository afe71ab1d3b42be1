use proptest::prelude::*;
use proptest::sample::select;

use quatclass::arith::int::{is_prime, is_squarefree};
use quatclass::brandt::{eichler_suborder, ideal_class_set, maximal_order, RationalQuaternionAlgebra};
use quatclass::classnumbers::BaseField;
use quatclass::cmorders::catalog::{cm_fields, is_suborder};
use quatclass::cmorders::CatalogOptions;
use quatclass::numberfield::{narrow_class_group, prime_ideals_above, FElem, RealQuadraticField, Splitting};
use quatclass::quatalg::{find_definite_algebra_ramified_at, ramified_places};
use quatclass::selectivity::{artin_map, is_unramified_cm_extension};

fn squarefree(max: i64) -> Vec<i64> {
    (2..=max).filter(|&d| is_squarefree(d)).collect()
}

fn elem(d: i64, a: i64, b: i64) -> FElem {
    FElem::from_ints(d, a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn narrow_class_group_axioms(d in select(squarefree(300))) {
        let f = RealQuadraticField::new(d).unwrap();
        let g = narrow_class_group(&f);
        let n = g.h_plus();
        let e = g.identity;
        for x in 0..n {
            prop_assert_eq!(g.mul(x, e), x);
            prop_assert_eq!(g.mul(x, g.inverse(x)), e);
            for y in 0..n {
                prop_assert_eq!(g.mul(x, y), g.mul(y, x));
                for z in 0..n {
                    prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                }
            }
        }
        // the kernel of the map to the wide group is a subgroup of order r
        prop_assert!(g.r() == 1 || g.r() == 2);
        prop_assert_eq!(g.r() * g.h(), n);
        for &k in &g.kernel_pi {
            for &l in &g.kernel_pi {
                prop_assert!(g.kernel_pi.contains(&g.mul(k, l)));
            }
        }
    }

    /// The Artin character read from Legendre symbols agrees with the
    /// splitting of primes computed in K itself.
    #[test]
    fn artin_map_matches_splitting(d in select(squarefree(100)), p in 3u64..1500) {
        prop_assume!(is_prime(p));
        let f = RealQuadraticField::new(d).unwrap();
        let g = narrow_class_group(&f);
        for k in cm_fields(&f).unwrap().iter().filter(|k| is_unramified_cm_extension(k)) {
            let art = artin_map(k, &g, 3).unwrap();
            for x in 0..g.h_plus() {
                for y in 0..g.h_plus() {
                    prop_assert_eq!(art[g.mul(x, y)], art[x] ^ art[y]);
                }
            }
            prop_assert_eq!(art[g.identity], 0);
            for q in prime_ideals_above(&f, p) {
                let split = k.splitting_of(&q) == Splitting::Split;
                prop_assert_eq!(art[g.class_of(&f, &q.ideal)] == 0, split, "{} at {}", k.tag, q.label());
            }
        }
    }

    /// `(a, b)` depends on `b` only up to squares, is symmetric, and ramifies
    /// at an even number of places; `(a, -a)` splits.
    #[test]
    fn ramification_invariances(
        d in select(squarefree(60)),
        a in (-40i64..40, -6i64..6),
        b in (-40i64..40, -6i64..6),
        s in (-5i64..5, -3i64..3),
    ) {
        let f = RealQuadraticField::new(d).unwrap();
        let a = elem(d, a.0, a.1);
        let b = elem(d, b.0, b.1);
        let s = elem(d, s.0, s.1);
        prop_assume!(!a.is_zero() && !b.is_zero() && !s.is_zero());
        let base = ramified_places(&f, &a, &b).unwrap();
        prop_assert_eq!((base.0.len() + base.1.len()) % 2, 0);
        let scaled = ramified_places(&f, &a, &(&b * &(&s * &s))).unwrap();
        prop_assert_eq!(&base, &scaled);
        let mut swapped = ramified_places(&f, &b, &a).unwrap();
        swapped.0.sort_by_key(|q| (q.p, q.index));
        let mut sorted = base.clone();
        sorted.0.sort_by_key(|q| (q.p, q.index));
        prop_assert_eq!(sorted, swapped);
        let split = ramified_places(&f, &a, &-&a).unwrap();
        prop_assert!(split.0.is_empty() && split.1.is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// `B subset B'` gives `B^x subset B'^x`, so `w(B) | w(B')`.
    #[test]
    fn unit_indices_nest(d in select(squarefree(60))) {
        let bf = BaseField::new(d, &CatalogOptions::default()).unwrap();
        let members = &bf.catalog.members;
        for x in members {
            prop_assert!(x.w > 1);
            for y in members {
                if is_suborder(x, y) {
                    prop_assert_eq!(y.w % x.w, 0, "{} in {}", x.conductor.label(), y.conductor.label());
                }
            }
        }
    }

    /// Unit groups of left orders over Q have order dividing 24, so each
    /// `|O^x / {+-1}|` divides 12.
    #[test]
    fn brandt_unit_indices_divide_twelve(p in select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43]), n in select(vec![1u64, 2, 3, 5, 7])) {
        prop_assume!(p != n);
        let q = BaseField::new(1, &CatalogOptions::default()).unwrap();
        let ram = vec![prime_ideals_above(&q.f, p).remove(0)];
        let spec = find_definite_algebra_ramified_at(&q.f, &q.group, &ram, 500).unwrap();
        let alg = RationalQuaternionAlgebra::from_spec(&spec).unwrap();
        let o = eichler_suborder(&maximal_order(&alg, p).unwrap(), n).unwrap();
        let cs = ideal_class_set(&o, 1000).unwrap();
        for w in &cs.unit_indices {
            prop_assert_eq!(12 % w, 0);
        }
    }
}
