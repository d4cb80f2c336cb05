//! Binary quadratic forms `[[a,x],[x,c]]` as discriminant matrices of quaternion orders.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::gcd_u64;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BinaryQuadraticForm {
    pub a: i64,
    pub x: i64,
    pub c: i64,
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.x, self.x, self.c)
    }
}

impl BinaryQuadraticForm {
    pub fn new(a: i64, x: i64, c: i64) -> Self {
        BinaryQuadraticForm { a, x, c }
    }

    /// `Q(m,n) = a m² + 2x mn + c n²`.
    pub fn value(&self, m: i64, n: i64) -> i128 {
        let (a, x, c, m, n) = (self.a as i128, self.x as i128, self.c as i128, m as i128, n as i128);
        a * m * m + 2 * x * m * n + c * n * n
    }

    pub fn det(&self) -> i128 {
        self.a as i128 * self.c as i128 - self.x as i128 * self.x as i128
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && self.det() > 0
    }

    /// Image under `(m,n) ↦ (p m + q n, r m + s n)`.
    pub fn transform(&self, p: i64, q: i64, r: i64, s: i64) -> Self {
        let (a, x, c) = (self.a, self.x, self.c);
        BinaryQuadraticForm {
            a: a * p * p + 2 * x * p * r + c * r * r,
            x: a * p * q + x * (p * s + q * r) + c * r * s,
            c: a * q * q + 2 * x * q * s + c * s * s,
        }
    }
}

pub fn is_discriminant(d: i64) -> bool {
    d.rem_euclid(4) <= 1
}

/// Canonical `GL₂(ℤ)` representative with `0 ≤ 2x ≤ a ≤ c`.
pub fn reduce_gl2z(form: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm> {
    if !form.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let (mut a, mut x, mut c) = (form.a as i128, form.x as i128, form.c as i128);
    loop {
        // m ↦ m + k n with k nearest to -x/a
        let k = (-x).div_euclid(a) + if 2 * (-x).rem_euclid(a) > a { 1 } else { 0 };
        c += a * k * k + 2 * x * k;
        x += a * k;
        if c < a {
            std::mem::swap(&mut a, &mut c);
            continue;
        }
        break;
    }
    x = x.abs();
    Ok(BinaryQuadraticForm { a: a as i64, x: x as i64, c: c as i64 })
}

pub fn equivalent(f: &BinaryQuadraticForm, g: &BinaryQuadraticForm) -> Result<bool> {
    Ok(reduce_gl2z(f)? == reduce_gl2z(g)?)
}

fn isqrt(n: i128) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r as i64
}

/// A coprime `(m, n)` with `Q(m,n) = d`; `m ≥ 0`, `n` tried as `0, 1, -1, 2, -2, …`.
pub fn primitively_represents(form: &BinaryQuadraticForm, d: i64) -> Result<Option<(i64, i64)>> {
    if !form.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    if d <= 0 {
        return Ok(None);
    }
    let det = form.det();
    let mmax = isqrt(d as i128 * form.c as i128 / det);
    let nmax = isqrt(d as i128 * form.a as i128 / det);
    for m in 0..=mmax {
        for k in 0..=(2 * nmax) {
            let n = if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 };
            if gcd_u64(m.unsigned_abs(), n.unsigned_abs()) != 1 {
                continue;
            }
            if form.value(m, n) == d as i128 {
                return Ok(Some((m, n)));
            }
        }
    }
    Ok(None)
}

/// Sorted primitive values `<= cap`.
pub fn primitive_values(form: &BinaryQuadraticForm, cap: i64) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for d in 1..=cap {
        if primitively_represents(form, d)?.is_some() {
            out.push(d);
        }
    }
    Ok(out)
}

/// `[[a,x],[x,c]]` for `0 ≤ x ≤ ⌊√(ac)⌋` with `det > 0`, `a+2x+c ≡ 0,1 mod 4`, one per class.
pub fn enumerate_candidates(a: i64, c: i64) -> Result<Vec<BinaryQuadraticForm>> {
    for d in [a, c] {
        if d <= 0 || !is_discriminant(d) {
            return Err(Error::NotDiscriminant(d));
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for x in 0..=isqrt(a as i128 * c as i128) {
        let f = BinaryQuadraticForm::new(a, x, c);
        if f.det() <= 0 || !is_discriminant(a + 2 * x + c) {
            continue;
        }
        if seen.insert(reduce_gl2z(&f)?) {
            out.push(f);
        }
    }
    Ok(out)
}

pub const DEFAULT_SEARCH_CAP: i64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QmCertificate {
    pub positive: (i64, i64),
    /// For each inequivalent candidate, the least discriminant it represents and the target does not.
    pub negative: Vec<(BinaryQuadraticForm, i64)>,
}

impl QmCertificate {
    pub fn negative_set(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.negative.iter().map(|p| p.1).collect();
        v.sort();
        v.dedup();
        v
    }
}

pub fn certify_qm_sets(target: &BinaryQuadraticForm, cap: i64) -> Result<QmCertificate> {
    let t = reduce_gl2z(target)?;
    let mut negative = Vec::new();
    for m in enumerate_candidates(target.a, target.c)? {
        if reduce_gl2z(&m)? == t {
            continue;
        }
        let mut found = None;
        for d in 1..=cap {
            if !is_discriminant(d) {
                continue;
            }
            if primitively_represents(&m, d)?.is_some() && primitively_represents(target, d)?.is_none() {
                found = Some(d);
                break;
            }
        }
        let d = found.ok_or_else(|| Error::SearchExhausted { cap: cap as u64, form: m.to_string() })?;
        assert!(primitively_represents(target, d)?.is_none());
        negative.push((m, d));
    }
    Ok(QmCertificate { positive: (target.a, target.c), negative })
}

// ---------------------------------------------------------------------------

fn split_p(n: i128, p: i128) -> (u32, i128) {
    let mut v = 0;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    (v, m)
}

fn legendre_i128(a: i128, p: i128) -> i32 {
    let a = a.rem_euclid(p) as u64;
    crate::finitefield::legendre(a, p as u64)
}

/// Hilbert symbol `(a, b)_p` for a prime `p` and nonzero `a, b`.
pub fn hilbert_symbol(a: i128, b: i128, p: u64) -> i32 {
    assert!(a != 0 && b != 0);
    let pi = p as i128;
    let (al, u) = split_p(a, pi);
    let (be, v) = split_p(b, pi);
    if p == 2 {
        let eps = |t: i128| ((t.rem_euclid(8) - 1) / 2 % 2) as u32;
        let omega = |t: i128| {
            let r = t.rem_euclid(8);
            if r == 3 || r == 5 {
                1
            } else {
                0
            }
        };
        let e = eps(u) * eps(v) + al * omega(v) + be * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = 1;
        if al % 2 == 1 && be % 2 == 1 && p % 4 == 3 {
            s = -s;
        }
        if be % 2 == 1 {
            s *= legendre_i128(u, pi);
        }
        if al % 2 == 1 {
            s *= legendre_i128(v, pi);
        }
        s
    }
}

/// Product of the finite primes where `(a, b)` ramifies.
pub fn quaternion_algebra_disc(a: i128, b: i128) -> Result<u64> {
    let mut primes = vec![2u64];
    for n in [a, b] {
        let fac = crate::numfield::factor(&num_bigint::BigInt::from(n));
        if !fac.is_complete() {
            return Err(Error::PartialFactorization(fac.cofactor.to_string()));
        }
        for (p, _) in fac.primes {
            let p: u64 = p.try_into().map_err(|_| Error::Invalid("prime too large".into()))?;
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    Ok(primes.into_iter().filter(|&p| hilbert_symbol(a, b, p) == -1).product())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionOrderDescriptor {
    pub form: BinaryQuadraticForm,
    pub reduced_form: BinaryQuadraticForm,
    pub disc: i64,
    pub algebra_disc: u64,
    pub index_in_maximal: u64,
}

pub fn describe_order(form: &BinaryQuadraticForm) -> Result<QuaternionOrderDescriptor> {
    let reduced = reduce_gl2z(form)?;
    let det = form.det();
    if det % 4 != 0 {
        return Err(Error::Invalid(format!("det of {} is not divisible by 4", form)));
    }
    let disc = (det / 4) as i64;
    // the algebra is (a, det/a) ≅ (a, a·det)
    let algebra_disc = quaternion_algebra_disc(form.a as i128, form.a as i128 * det)?;
    if !(disc as u64).is_multiple_of(algebra_disc) {
        return Err(Error::Invalid(format!("disc {} not divisible by algebra disc {}", disc, algebra_disc)));
    }
    Ok(QuaternionOrderDescriptor { form: *form, reduced_form: reduced, disc, algebra_disc, index_in_maximal: disc as u64 / algebra_disc })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QmDeduction {
    pub descriptor: Option<QuaternionOrderDescriptor>,
    pub survivors: Vec<BinaryQuadraticForm>,
    /// Eliminated candidates with the non-member discriminant each represents.
    pub eliminated: Vec<(BinaryQuadraticForm, i64)>,
    pub queries: Vec<(i64, Option<bool>)>,
}

pub const DEFAULT_QUERY_CAP: i64 = 100;

/// Discriminants `<= cap`, other than `d1, d2`, primitively represented by some candidate.
pub fn required_queries(d1: i64, d2: i64, cap: i64) -> Result<Vec<i64>> {
    let mut s = std::collections::BTreeSet::new();
    for m in enumerate_candidates(d1, d2)? {
        for v in primitive_values(&m, cap)? {
            if v != d1 && v != d2 {
                s.insert(v);
            }
        }
    }
    Ok(s.into_iter().collect())
}

/// Eliminates each candidate `[[d1,x],[x,d2]]` at its least primitive value `<= cap`
/// that the oracle reports as a non-member; `None` answers are skipped.
pub fn deduce_qm_ring<F>(d1: i64, d2: i64, mut membership: F, cap: i64) -> Result<QmDeduction>
where
    F: FnMut(i64) -> Option<bool>,
{
    let mut answers: BTreeMap<i64, Option<bool>> = BTreeMap::new();
    let mut survivors = Vec::new();
    let mut eliminated = Vec::new();
    for m in enumerate_candidates(d1, d2)? {
        let mut killer = None;
        for v in primitive_values(&m, cap)? {
            let ans = *answers.entry(v).or_insert_with(|| membership(v));
            if ans == Some(false) {
                killer = Some(v);
                break;
            }
        }
        match killer {
            Some(v) => eliminated.push((m, v)),
            None => survivors.push(m),
        }
    }
    let descriptor = if survivors.len() == 1 { Some(describe_order(&survivors[0])?) } else { None };
    Ok(QmDeduction { descriptor, survivors, eliminated, queries: answers.into_iter().collect() })
}
