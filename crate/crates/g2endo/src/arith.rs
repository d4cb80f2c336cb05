//! Small integer helpers shared across modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Primes `<= n` by a plain sieve.
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
    sieve.iter().enumerate().filter_map(|(k, &b)| if b { Some(k as u64) } else { None }).collect()
}

/// Odd primes in `[3, bound]`.
pub fn odd_primes_up_to(bound: u64) -> Vec<u64> {
    primes_up_to(bound).into_iter().filter(|&p| p > 2).collect()
}

pub fn is_prime_u64(n: u64) -> bool {
    crate::numfield::is_prime_u64(n)
}

/// Exact square root of a non-negative perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

pub fn is_square(n: &BigInt) -> bool {
    exact_sqrt(n).is_some()
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// All positive divisors of `|n|`, sorted; `n` must be nonzero and fully factorable.
pub fn positive_divisors(n: &BigInt) -> crate::Result<Vec<BigInt>> {
    let fac = crate::numfield::factor(n);
    if !fac.is_complete() {
        return Err(crate::Error::PartialFactorization(fac.cofactor.to_string()));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in &fac.primes {
        let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
        for d in &divs {
            let mut pk = d.clone();
            next.push(pk.clone());
            for _ in 0..*e {
                pk *= p;
                next.push(pk.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn squarefree_part_sign(n: i64) -> i64 {
    assert!(n != 0);
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut out = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    out *= m;
    sign * out as i64
}
