//! Arithmetic modulo word-sized primes, Chinese remaindering and rational reconstruction.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Primes just below 2^62.
pub const PRIMES: [u64; 12] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387751,
    4611686018427387737,
    4611686018427387733,
    4611686018427387709,
    4611686018427387701,
    4611686018427387631,
    4611686018427387617,
    4611686018427387587,
];

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero modulo p");
    pow_mod(a, p - 2, p)
}

pub fn from_i64(x: i64, p: u64) -> u64 {
    let r = x.rem_euclid(p as i64);
    r as u64
}

pub fn from_bigint(x: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let r = x.mod_floor(&pb);
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

/// Reduce a rational whose denominator is prime to `p`.
pub fn from_rational(x: &BigRational, p: u64) -> u64 {
    let n = from_bigint(x.numer(), p);
    let d = from_bigint(x.denom(), p);
    mul_mod(n, inv_mod(d, p), p)
}

/// Combine residues into the symmetric-free representative modulo the product.
pub fn crt(residues: &[u64], primes: &[u64]) -> (BigInt, BigInt) {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let pb = BigInt::from(p);
        let xm = from_bigint(&x, p);
        let mm = from_bigint(&m, p);
        let t = mul_mod(sub_mod(r, xm, p), inv_mod(mm, p), p);
        x += &m * BigInt::from(t);
        m *= pb;
    }
    (x, m)
}

/// Wang's rational reconstruction: find `a/b` with `a = b x mod m`, `|a|, b < sqrt(m/2)`.
pub fn rational_reconstruct(x: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        let t2 = &t0 - &qt * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (num, den) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    if num.gcd(&den) != BigInt::one() && !num.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_small_fractions() {
        let r = BigRational::new(BigInt::from(-355), BigInt::from(113));
        let ps = &PRIMES[..2];
        let res: Vec<u64> = ps.iter().map(|&p| from_rational(&r, p)).collect();
        let (x, m) = crt(&res, ps);
        assert_eq!(rational_reconstruct(&x, &m), Some(r));
    }

    #[test]
    fn inverse_roundtrip() {
        let p = PRIMES[0];
        for a in [1u64, 2, 3, 12345, p - 1] {
            assert_eq!(mul_mod(a, inv_mod(a, p), p), 1);
        }
    }
}
