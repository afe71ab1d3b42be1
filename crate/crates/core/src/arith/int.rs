//! Small-integer number theory helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Int, Rat};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter_map(|(k, &p)| p.then_some(k as u64)).collect()
}

/// Prime factorization by trial division.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            let mut e = 0;
            while n % f == 0 {
                n /= f;
                e += 1;
            }
            out.push((f, e));
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime divisors of a nonzero big integer. Panics if a cofactor exceeds u64
/// after removing small primes, which does not happen for the heights used here.
pub fn prime_divisors(n: &Int) -> Vec<u64> {
    let n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    let mut rest = n;
    let mut out = Vec::new();
    let mut f = 2u64;
    while rest.bits() > 63 && f < 1 << 24 {
        let fb = BigInt::from(f);
        if (&rest % &fb).is_zero() {
            out.push(f);
            while (&rest % &fb).is_zero() {
                rest /= &fb;
            }
        }
        f += 1;
    }
    let small = rest.to_u64().expect("cofactor too large for trial division");
    for (p, _) in factor(small) {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out.sort_unstable();
    out
}

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    factor(n.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

pub fn sigma1(n: u64) -> u64 {
    factor(n).iter().map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1)).product()
}

pub fn valuation(n: &Int, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while n.is_multiple_of(&p) {
        n /= &p;
        v += 1;
    }
    v
}

pub fn rat_valuation(x: &Rat, p: u64) -> i64 {
    valuation(x.numer(), p) as i64 - valuation(x.denom(), p) as i64
}

pub fn mod_u64(x: &Int, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Image of a p-integral rational in Z/p.
pub fn rat_mod(x: &Rat, p: u64) -> Option<u64> {
    let den = mod_u64(x.denom(), p);
    if den == 0 {
        return None;
    }
    let num = mod_u64(x.numer(), p);
    Some(mul_mod(num, inv_mod(den, p)?, p))
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// Legendre symbol (a/p) for an odd prime p, with a already reduced.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol (D/p) for a prime p.
pub fn kronecker_prime(disc: &Int, p: u64) -> i8 {
    if p == 2 {
        if disc.is_even() {
            return 0;
        }
        return match mod_u64(disc, 8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    legendre(mod_u64(disc, p), p)
}

/// Square root modulo an odd prime (Tonelli-Shanks).
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre(z, p) == -1).unwrap();
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Exact square root of a nonnegative rational, if it is a square.
pub fn rat_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let n = int_sqrt_exact(x.numer())?;
    let d = int_sqrt_exact(x.denom())?;
    Some(Rat::new(n, d))
}

pub fn int_sqrt_exact(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// floor(sqrt(x)) for a nonnegative rational.
pub fn rat_floor_sqrt(x: &Rat) -> Int {
    if !x.is_positive() {
        return Int::zero();
    }
    x.floor().to_integer().sqrt()
}

pub fn squarefree_part(n: i64) -> i64 {
    let sign = n.signum();
    let core: u64 = factor(n.unsigned_abs()).iter().filter(|&&(_, e)| e % 2 == 1).map(|&(p, _)| p).product();
    sign * core as i64
}

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_one(x: &Rat) -> bool {
    x.is_one()
}
