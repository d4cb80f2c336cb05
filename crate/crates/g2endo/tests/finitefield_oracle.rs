use g2endo::finitefield::{count_points, frobenius_data, satisfies_functional_equation, CurveModel};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::roots_on_circle;

fn pw(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// 1 for nonzero squares, -1 for non-squares, 0 for zero.
fn chi(a: u64, p: u64) -> i64 {
    match pw(a, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn coeffs_mod(c: &FCurve, p: u64) -> Vec<u64> {
    c.coeffs.iter().map(|&a| a.rem_euclid(p as i64) as u64).collect()
}

struct FCurve {
    coeffs: Vec<i64>,
}

fn brute_fp(c: &FCurve, p: u64) -> u64 {
    let f = coeffs_mod(c, p);
    let eval = |x: u64| f.iter().rev().fold(0, |acc, &a| (acc * x + a) % p);
    let affine: i64 = (0..p).map(|x| 1 + chi(eval(x), p)).sum();
    let infinity = if f.len() == 7 { 1 + chi(f[6], p) } else { 1 };
    (affine + infinity) as u64
}

/// F_{p²} = F_p(√n) with `n` a non-residue; an element is a square iff its norm is.
fn brute_fp2(c: &FCurve, p: u64) -> u64 {
    let n = (2..p).find(|&v| chi(v, p) == -1).unwrap();
    let f = coeffs_mod(c, p);
    let mul = |(a, b): (u64, u64), (x, y): (u64, u64)| ((a * x + b * y % p * n) % p, (a * y + b * x) % p);
    let chi2 = |(a, b): (u64, u64)| {
        let norm = (a * a % p + p - b * b % p * n % p) % p;
        chi(norm, p)
    };
    let mut total: i64 = 0;
    for a in 0..p {
        for b in 0..p {
            let mut acc = (0u64, 0u64);
            for &co in f.iter().rev() {
                acc = mul(acc, (a, b));
                acc = ((acc.0 + co) % p, acc.1);
            }
            total += 1 + chi2(acc);
        }
    }
    // leading coefficient is in F_p, hence a square in F_{p²}
    total += if f.len() == 7 {
        if f[6].is_multiple_of(p) {
            1
        } else {
            2
        }
    } else {
        1
    };
    total as u64
}

fn random_curve(rng: &mut ChaCha8Rng) -> (FCurve, CurveModel) {
    loop {
        let deg = if rng.gen_bool(0.5) { 5 } else { 6 };
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-20..=20)).collect();
        c.push(rng.gen_range(1..=5));
        if let Ok(cv) = CurveModel::from_i64(&c) {
            return (FCurve { coeffs: c }, cv);
        }
    }
}

#[test]
fn point_counts_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let primes = g2endo::arith::odd_primes_up_to(43);
    let mut checked = 0;
    while checked < 60 {
        let (fc, cv) = random_curve(&mut rng);
        let p = primes[rng.gen_range(0..primes.len())];
        if !cv.is_good_prime(p) {
            continue;
        }
        assert_eq!(count_points(&cv, p).unwrap(), brute_fp(&fc, p), "{:?} p={}", fc.coeffs, p);
        assert_eq!(count_points(&cv, p * p).unwrap(), brute_fp2(&fc, p), "{:?} p^2={}", fc.coeffs, p * p);
        checked += 1;
    }
}

#[test]
fn weil_polynomials_over_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let primes = g2endo::arith::odd_primes_up_to(200);
    let mut checked = 0;
    while checked < 200 {
        let (_, cv) = random_curve(&mut rng);
        let p = primes[rng.gen_range(0..primes.len())];
        if !cv.is_good_prime(p) {
            continue;
        }
        let fd = frobenius_data(&cv, p).unwrap();
        assert!(satisfies_functional_equation(&fd), "{} p={}", cv.f, p);
        assert!(roots_on_circle(&fd), "{} p={} a={} b={}", cv.f, p, fd.a, fd.b);
        // P(1) = #J(F_p) > 0 and the constant term is p²
        let c = fd.weil_poly.coeffs();
        assert_eq!(c[0].to_u64().unwrap(), p * p);
        let jac: i64 = c.iter().map(|v| v.to_i64().unwrap()).sum();
        assert!(jac > 0);
        checked += 1;
    }
}

#[test]
fn example_curve_frobenius_table() {
    // y² = x⁵ - x⁴ - x³ + x² + x - 1, counted by brute force
    let fc = FCurve { coeffs: vec![-1, 1, 1, -1, -1, 1] };
    let cv = CurveModel::from_i64(&fc.coeffs).unwrap();
    for p in g2endo::arith::odd_primes_up_to(67).into_iter().filter(|&p| p != 3) {
        let fd = frobenius_data(&cv, p).unwrap();
        let n1 = brute_fp(&fc, p) as i64;
        let n2 = brute_fp2(&fc, p) as i64;
        let pp = p as i64;
        assert_eq!(fd.a, n1 - pp - 1);
        assert_eq!(2 * fd.b, n2 - pp * pp - 1 + fd.a * fd.a);
        if p % 8 == 3 {
            assert_eq!(fd.a, 0, "p = {}", p);
        }
    }
    let fd7 = frobenius_data(&cv, 7).unwrap();
    assert_eq!((fd7.a, fd7.b, fd7.ordinary, fd7.in_omega_prime), (-4, 10, true, true));
    assert!(frobenius_data(&cv, 3).is_err());
}
