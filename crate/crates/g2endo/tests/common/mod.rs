//! Oracles shared by the property suites and the acceptance run.
#![allow(dead_code)]

use g2endo::finitefield::FrobeniusData;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Reducibility of a monic integer quartic by exhaustive search.
pub fn quartic_reducible_brute(c: [i64; 4]) -> bool {
    let [a0, a1, a2, a3] = c;
    let f = |x: i64| x.pow(4) + a3 * x.pow(3) + a2 * x * x + a1 * x + a0;
    let bound = 1 + c.iter().map(|v| v.abs()).max().unwrap();
    if (-bound..=bound).any(|r| f(r) == 0) {
        return true;
    }
    // (x² + b x + e)(x² + d x + g) with e g = a0, both factors have roots bounded by `bound`
    for b in -2 * bound..=2 * bound {
        let d = a3 - b;
        for e in -bound * bound..=bound * bound {
            if e == 0 || a0 % e != 0 {
                continue;
            }
            let g = a0 / e;
            if e + g + b * d == a2 && b * g + d * e == a1 {
                return true;
            }
        }
    }
    false
}

/// All four roots on |z| = √p: x⁴+ax³+bx²+apx+p² = x² g(x + p/x) with g(t) = t² + at + b - 2p,
/// whose roots must be real and at most 2√p in absolute value.
pub fn roots_on_circle(fd: &FrobeniusData) -> bool {
    let (a, b, p) = (fd.a as f64, fd.b as f64, fd.p as f64);
    let disc = a * a - 4.0 * (b - 2.0 * p);
    if disc < -1e-9 {
        return false;
    }
    let s = disc.max(0.0).sqrt();
    let lim = 2.0 * p.sqrt() + 1e-9;
    ((-a + s) / 2.0).abs() <= lim && ((-a - s) / 2.0).abs() <= lim
}

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn pmul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `(c x + d)^6 f((a x + b)/(c x + d))` as a sextic.
pub fn moebius(f: &[BigRational; 7], a: i64, b: i64, c: i64, d: i64) -> [BigRational; 7] {
    let mut out = vec![BigRational::zero(); 7];
    for (i, fi) in f.iter().enumerate() {
        let mut t = vec![fi.clone()];
        for _ in 0..i {
            t = pmul(&t, &[q(b), q(a)]);
        }
        for _ in i..6 {
            t = pmul(&t, &[q(d), q(c)]);
        }
        for (k, v) in t.into_iter().enumerate() {
            out[k] += v;
        }
    }
    out.try_into().unwrap()
}

pub fn random_sextic(rng: &mut ChaCha8Rng) -> [BigRational; 7] {
    loop {
        let f: [BigRational; 7] = std::array::from_fn(|_| q(rng.gen_range(-9..=9)));
        if !f[6].is_zero() && !g2endo::moduli::igusa::igusa_clebsch_sextic(&f).i10.is_zero() {
            return f;
        }
    }
}

pub fn random_unimodular(rng: &mut ChaCha8Rng) -> (i64, i64, i64, i64) {
    let (mut p, mut q, mut r, mut s) = (1i64, 0i64, 0i64, 1i64);
    for _ in 0..rng.gen_range(3..10) {
        let k = rng.gen_range(-3..=3);
        (p, q, r, s) = match rng.gen_range(0..3) {
            0 => (p, q + k * p, r, s + k * r),
            1 => (p + k * q, q, r + k * s, s),
            _ => (q, p, s, r),
        };
    }
    (p, q, r, s)
}
