//! The special value zeta_F(-1).

use num_integer::Roots;

use crate::arith::int::sigma1;
use crate::numberfield::field::RealQuadraticField;
use crate::{Int, Rat};

/// Siegel's formula `zeta_F(-1) = (1/60) sum sigma_1((D - b^2)/4)` over
/// `b^2 < D`, `b = D (mod 2)`. Returns `-1/12` for Q.
pub fn zeta_minus_one(f: &RealQuadraticField) -> Rat {
    if f.is_rational() {
        return Rat::new(Int::from(-1), Int::from(12));
    }
    let d: u64 = f.disc.to_string().parse().expect("discriminant fits in u64");
    let s = d.sqrt();
    let mut total: u64 = 0;
    let start = d % 2;
    let mut b = start;
    while b <= s {
        if b * b < d {
            let term = sigma1((d - b * b) / 4);
            total += if b == 0 { term } else { 2 * term };
        }
        b += 2;
    }
    Rat::new(Int::from(total), Int::from(60))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(d: i64) -> Rat {
        zeta_minus_one(&RealQuadraticField::new(d).unwrap())
    }

    #[test]
    fn known_values() {
        assert_eq!(z(7), Rat::new(Int::from(2), Int::from(3)));
        assert_eq!(z(5), Rat::new(Int::from(1), Int::from(30)));
        assert_eq!(z(2), Rat::new(Int::from(1), Int::from(12)));
    }
}
