//! Small number-theoretic helpers on arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Prime factorization of `|n|` by trial division, primes ascending.
///
/// Panics on zero. Prime factors beyond `u64` are not supported.
pub fn factor(n: &BigInt) -> Vec<(u64, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut rest = n.abs();
    let mut out = Vec::new();
    let mut p: u64 = 2;
    while BigInt::from(p) * BigInt::from(p) <= rest {
        let bp = BigInt::from(p);
        let mut e = 0;
        while rest.is_multiple_of(&bp) {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let last = rest.to_u64().expect("prime factor exceeds u64");
        out.push((last, 1));
    }
    out
}

/// Primes dividing `2 * n`, ascending.
pub fn relevant_primes(n: &BigInt) -> Vec<u64> {
    let mut ps: Vec<u64> = factor(n).into_iter().map(|(p, _)| p).collect();
    if ps.first() != Some(&2) {
        ps.insert(0, 2);
    }
    ps
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let bp = BigInt::from(p);
    let mut n = n.clone();
    let mut e = 0;
    while n.is_multiple_of(&bp) {
        n /= &bp;
        e += 1;
    }
    e
}

/// Valuation of a nonzero rational (numerator minus denominator).
pub fn rat_valuation(x: &BigRational, p: u64) -> i64 {
    valuation(x.numer(), p) as i64 - valuation(x.denom(), p) as i64
}

/// Splits `n = p^e * rest` with `rest` prime to `p`.
pub fn split_prime(n: &BigInt, p: u64) -> (u32, BigInt) {
    let e = valuation(n, p);
    (e, n / BigInt::from(p).pow(e))
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factor(&BigInt::from(n)).iter().all(|&(_, e)| e == 1)
}

/// Residue of a `p`-integral rational modulo `m` (denominator must be a unit mod `m`).
pub fn rat_mod(x: &BigRational, m: u64) -> u64 {
    let bm = BigInt::from(m);
    let num = x.numer().mod_floor(&bm);
    let den = x.denom().mod_floor(&bm);
    let inv = mod_inverse(&den, &bm).expect("denominator not invertible");
    (num * inv).mod_floor(&bm).to_u64().expect("residue fits u64")
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// `b^e mod m`.
pub fn pow_mod(b: u64, e: u32, m: u64) -> u64 {
    BigInt::from(b)
        .modpow(&BigInt::from(e), &BigInt::from(m))
        .to_u64()
        .expect("residue fits u64")
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && factor(&BigInt::from(p)) == vec![(p, 1)]
}

pub fn one_over(d: &BigInt) -> BigRational {
    BigRational::new(BigInt::one(), d.clone())
}
