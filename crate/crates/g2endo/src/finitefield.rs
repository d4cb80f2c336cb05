//! Arithmetic in 𝔽_p and 𝔽_{p²}, polynomials over 𝔽_p, point counting on
//! `y² = f(x)` and the Frobenius polynomial `x⁴ + a x³ + b x² + a p x + p²`.
//!
//! Primes are assumed to fit in 32 bits so that products fit in a `u64`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::intpoly::{self, discriminant, IntPoly};
use crate::{Error, Result};

/// Default cap on the characteristic for naive counting.
pub const DEFAULT_PRIME_CAP: u64 = 1 << 16;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
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
    assert!(!a.is_multiple_of(p), "inverse of zero");
    pow_mod(a, p - 2, p)
}

/// Legendre symbol for an odd prime `p`.
pub fn legendre(a: u64, p: u64) -> i32 {
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

pub fn reduce_bigint(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Least positive quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&n| legendre(n, p) == -1).expect("odd prime has a non-residue")
}

/// Dense polynomial over 𝔽_p, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for v in c.iter_mut() {
            *v %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_intpoly(f: &IntPoly, p: u64) -> Self {
        Self::new(p, f.coeffs().iter().map(|c| reduce_bigint(c, p)).collect())
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    fn deg0(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => {
                let inv = inv_mod(l, self.p);
                Self::new(self.p, self.c.iter().map(|&v| mul_mod(v, inv, self.p)).collect())
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        Self::new(p, (0..n).map(|i| (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % p).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        Self::new(p, (0..n).map(|i| (self.c.get(i).copied().unwrap_or(0) + p - o.c.get(i).copied().unwrap_or(0)) % p).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(self.p, vec![]);
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Self::new(p, out)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.c.len() < d.c.len() {
            return (Self::new(p, vec![]), self.clone());
        }
        let mut r = self.c.clone();
        let dd = d.deg0();
        let inv = inv_mod(*d.c.last().unwrap(), p);
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = mul_mod(r[k + dd], inv, p);
            q[k] = t;
            if t != 0 {
                for (j, &dc) in d.c.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - mul_mod(t, dc, p)) % p;
                }
            }
        }
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(p, self.c.iter().enumerate().skip(1).map(|(i, &v)| mul_mod(v, i as u64 % p, p)).collect())
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut r = Self::new(self.p, vec![1]).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        r
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                !d.is_zero() && self.gcd(&d).degree() == Some(0)
            }
        }
    }

    /// Degrees of the irreducible factors of a squarefree polynomial (distinct-degree factorization).
    pub fn factor_degrees(&self) -> Vec<usize> {
        let p = self.p;
        let mut f = self.monic();
        let mut out = Vec::new();
        let x = Self::x(p);
        let mut h = x.rem(&f);
        let mut i = 1;
        while f.deg0() >= 2 * i {
            h = h.pow_mod(p, &f);
            let g = f.gcd(&h.sub(&x));
            let gd = g.deg0();
            if gd > 0 {
                for _ in 0..gd / i {
                    out.push(i);
                }
                f = f.divrem(&g).0;
                h = h.rem(&f);
            }
            i += 1;
        }
        if f.deg0() > 0 {
            out.push(f.deg0());
        }
        out.sort_unstable();
        out
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Self {
        let p = self.p;
        let f = self.monic();
        if f.deg0() == 0 {
            return Self::new(p, vec![1]);
        }
        let d = f.derivative();
        if d.is_zero() {
            // f(x) = g(x^p) = g(x)^p over 𝔽_p
            let g: Vec<u64> = f.c.iter().step_by(p as usize).copied().collect();
            return Self::new(p, g).radical();
        }
        let g = f.gcd(&d);
        let w = f.divrem(&g).0;
        let rg = g.radical();
        // lcm(w, rad g)
        let common = w.gcd(&rg);
        w.mul(&rg).divrem(&common).0.monic()
    }
}

/// 𝔽_{p²} = 𝔽_p[t]/(t² - n) with `n` the least non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp2 {
    pub p: u64,
    pub n: u64,
}

pub type Fp2Elem = (u64, u64);

impl Fp2 {
    pub fn new(p: u64) -> Self {
        Fp2 { p, n: least_nonresidue(p) }
    }

    #[inline]
    pub fn add(&self, x: Fp2Elem, y: Fp2Elem) -> Fp2Elem {
        ((x.0 + y.0) % self.p, (x.1 + y.1) % self.p)
    }

    #[inline]
    pub fn mul(&self, x: Fp2Elem, y: Fp2Elem) -> Fp2Elem {
        let p = self.p;
        let re = (mul_mod(x.0, y.0, p) + mul_mod(mul_mod(x.1, y.1, p), self.n, p)) % p;
        let im = (mul_mod(x.0, y.1, p) + mul_mod(x.1, y.0, p)) % p;
        (re, im)
    }

    pub fn pow(&self, mut x: Fp2Elem, mut e: u64) -> Fp2Elem {
        let mut r = (1 % self.p, 0);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        r
    }

    pub fn conj(&self, x: Fp2Elem) -> Fp2Elem {
        (x.0, (self.p - x.1) % self.p)
    }

    #[inline]
    pub fn norm(&self, x: Fp2Elem) -> u64 {
        let p = self.p;
        (mul_mod(x.0, x.0, p) + p - mul_mod(mul_mod(x.1, x.1, p), self.n, p)) % p
    }
}

/// A genus-2 model `y² = f(x)` with `deg f ∈ {5, 6}` and nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveModel {
    pub f: IntPoly,
    pub disc: BigInt,
}

impl CurveModel {
    pub fn new(f: IntPoly) -> Result<Self> {
        let d = f.deg();
        if f.is_zero() || !(d == 5 || d == 6) {
            return Err(Error::DegreeOutOfRange(d));
        }
        let disc = discriminant(&f)?;
        if disc.is_zero() {
            return Err(Error::Singular);
        }
        Ok(CurveModel { f, disc })
    }

    pub fn from_i64(c: &[i64]) -> Result<Self> {
        Self::new(IntPoly::from_i64(c))
    }

    /// Model `y² + h y = g`, completed to `y² = 4g + h²`.
    pub fn from_gh(g: &IntPoly, h: &IntPoly) -> Result<Self> {
        let f = &g.scale(&BigInt::from(4)) + &(h * h);
        Self::new(f)
    }

    pub fn degree(&self) -> usize {
        self.f.deg()
    }

    /// `p` odd and `p ∤ lc(f)·disc(f)`.
    pub fn is_good_prime(&self, p: u64) -> bool {
        if p.is_multiple_of(2) {
            return false;
        }
        let bp = BigInt::from(p);
        !(&self.disc % &bp).is_zero() && !(self.f.lc() % &bp).is_zero()
    }

    /// Prime divisors of `2·lc·disc` together with any unfactored cofactor.
    pub fn bad_primes(&self) -> (Vec<BigInt>, BigInt) {
        let n = BigInt::from(2) * self.f.lc() * &self.disc;
        let fac = crate::numfield::factor(&n);
        (fac.primes.iter().map(|(p, _)| p.clone()).collect(), fac.cofactor)
    }
}

fn check_prime(curve: &CurveModel, p: u64) -> Result<()> {
    if p.is_multiple_of(2) {
        return Err(Error::EvenPrime(p));
    }
    if !crate::numfield::is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if p > DEFAULT_PRIME_CAP {
        return Err(Error::PrimeTooLarge(p, DEFAULT_PRIME_CAP));
    }
    if !curve.is_good_prime(p) {
        return Err(Error::BadPrime(p));
    }
    Ok(())
}

fn square_table(p: u64) -> Vec<i8> {
    let mut t = vec![-1i8; p as usize];
    t[0] = 0;
    for x in 1..p {
        t[mul_mod(x, x, p) as usize] = 1;
    }
    t
}

fn count_fp(fc: &[u64], p: u64, deg6: bool, chi: &[i8]) -> u64 {
    let mut total: i64 = 0;
    for x in 0..p {
        let mut v = 0u64;
        for &c in fc.iter().rev() {
            v = (mul_mod(v, x, p) + c) % p;
        }
        total += 1 + chi[v as usize] as i64;
    }
    let inf = if deg6 {
        if chi[*fc.last().unwrap() as usize] == 1 {
            2
        } else {
            0
        }
    } else {
        1
    };
    (total + inf) as u64
}

fn count_fp2(fc: &[u64], p: u64, deg6: bool, chi: &[i8]) -> u64 {
    let k = Fp2::new(p);
    let mut total: u64 = 0;
    // x ∈ 𝔽_p: f(x) ∈ 𝔽_p is a square in 𝔽_{p²}
    for x in 0..p {
        let mut v = 0u64;
        for &c in fc.iter().rev() {
            v = (mul_mod(v, x, p) + c) % p;
        }
        total += if v == 0 { 1 } else { 2 };
    }
    // x and its conjugate have the same norm of f(x)
    let mut paired: u64 = 0;
    for x1 in 1..=(p - 1) / 2 {
        for x0 in 0..p {
            let x = (x0, x1);
            let mut v: Fp2Elem = (0, 0);
            for &c in fc.iter().rev() {
                v = k.mul(v, x);
                v.0 = (v.0 + c) % p;
            }
            paired += (1 + chi[k.norm(v) as usize] as i64) as u64;
        }
    }
    total += 2 * paired;
    total + if deg6 { 2 } else { 1 }
}

/// Points on the smooth projective model over 𝔽_q, `q ∈ {p, p²}`.
pub fn count_points(curve: &CurveModel, q: u64) -> Result<u64> {
    let (p, r) = if crate::numfield::is_prime_u64(q) {
        (q, 1)
    } else {
        let s = (q as f64).sqrt().round() as u64;
        if s * s != q || !crate::numfield::is_prime_u64(s) {
            return Err(Error::Invalid(format!("{} is neither p nor p^2", q)));
        }
        (s, 2)
    };
    check_prime(curve, p)?;
    let fc: Vec<u64> = curve.f.coeffs().iter().map(|c| reduce_bigint(c, p)).collect();
    let chi = square_table(p);
    let deg6 = curve.degree() == 6;
    Ok(if r == 1 { count_fp(&fc, p, deg6, &chi) } else { count_fp2(&fc, p, deg6, &chi) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusData {
    pub p: u64,
    pub n1: u64,
    pub n2: u64,
    pub a: i64,
    pub b: i64,
    pub weil_poly: IntPoly,
    pub ordinary: bool,
    pub in_omega_prime: bool,
}

impl FrobeniusData {
    /// Rebuild from `(p, a, b)`; used by tests and by data replay.
    pub fn from_ab(p: u64, a: i64, b: i64) -> Result<Self> {
        let pp = p as i64;
        let weil_poly = IntPoly::from_i64(&[pp * pp, a * pp, b, a, 1]);
        let ordinary = b.rem_euclid(pp) != 0;
        let in_omega_prime = ordinary && intpoly::is_irreducible(&intpoly::twist(&weil_poly, 4)?)?;
        let n1 = (pp + 1 + a) as u64;
        let n2 = (pp * pp + 1 - (a * a - 2 * b)) as u64;
        Ok(FrobeniusData { p, n1, n2, a, b, weil_poly, ordinary, in_omega_prime })
    }
}

/// Frobenius polynomial data at a good odd prime.
pub fn frobenius_data(curve: &CurveModel, p: u64) -> Result<FrobeniusData> {
    check_prime(curve, p)?;
    let n1 = count_points(curve, p)?;
    let n2 = count_points(curve, p * p)?;
    let pp = p as i64;
    let a = n1 as i64 - pp - 1;
    let num = n2 as i64 - pp * pp - 1 + a * a;
    if num % 2 != 0 {
        return Err(Error::ParityFailure(p));
    }
    let b = num / 2;
    // power sums s1 = -a, s2 = a² - 2b
    let s1 = -a;
    let s2 = a * a - 2 * b;
    assert_eq!(n1 as i64, pp + 1 - s1);
    assert_eq!(n2 as i64, pp * pp + 1 - s2);
    assert!(a * a <= 16 * pp, "Weil bound violated for a at p = {}", p);
    assert!(b.abs() <= 6 * pp, "Weil bound violated for b at p = {}", p);
    let fd = FrobeniusData::from_ab(p, a, b)?;
    debug_assert_eq!(fd.n1, n1);
    debug_assert_eq!(fd.n2, n2);
    Ok(fd)
}

/// Frobenius data for every good odd prime `<= bound`, in ascending order.
pub fn frobenius_stream(curve: &CurveModel, bound: u64) -> impl Iterator<Item = Result<FrobeniusData>> + '_ {
    crate::arith::odd_primes_up_to(bound).into_iter().filter(move |&p| curve.is_good_prime(p)).map(move |p| frobenius_data(curve, p))
}

/// Functional equation `p²·P(x) = x⁴·P(p/x)` checked coefficientwise.
pub fn satisfies_functional_equation(fd: &FrobeniusData) -> bool {
    let p = BigInt::from(fd.p);
    let c = fd.weil_poly.coeffs();
    if c.len() != 5 {
        return false;
    }
    // coefficient of x^i on the right is c_{4-i} p^{4-i}
    (0..=4).all(|i| &p * &p * &c[i] == &c[4 - i] * num_traits::pow(p.clone(), 4 - i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_poly_ddf() {
        // x^4 + 1 over F_3 splits as two quadratics
        let f = FpPoly::new(3, vec![1, 0, 0, 0, 1]);
        assert_eq!(f.factor_degrees(), vec![2, 2]);
        // x^5 - x - 1 is irreducible mod 5
        let g = FpPoly::new(5, vec![4, 4, 0, 0, 0, 1]);
        assert_eq!(g.factor_degrees(), vec![5]);
        let h = FpPoly::new(7, vec![0, 6, 0, 1]); // x^3 - x
        assert_eq!(h.factor_degrees(), vec![1, 1, 1]);
    }

    #[test]
    fn fp_poly_radical() {
        // (x+1)^2 (x+2) over F_2 -> radical (x+1) x
        let f = FpPoly::new(2, vec![1, 0, 1]).mul(&FpPoly::new(2, vec![0, 1]));
        assert_eq!(f.mul(&FpPoly::new(2, vec![1, 1])).radical(), FpPoly::new(2, vec![0, 1, 1]));
        let g = FpPoly::new(3, vec![2, 0, 0, 1]); // x^3 + 2 = (x+2)^3 over F_3
        assert_eq!(g.radical(), FpPoly::new(3, vec![2, 1]));
    }

    #[test]
    fn fp2_frobenius_is_conjugation() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            let k = Fp2::new(p);
            for a in 0..p.min(20) {
                for b in 0..p.min(7) {
                    assert_eq!(k.pow((a, b), p), k.conj((a, b)));
                }
            }
        }
    }

    #[test]
    fn odd_quintic_symmetry() {
        let c = CurveModel::from_i64(&[0, 1, 0, 0, 0, 1]).unwrap();
        for p in [3u64, 7, 11, 19, 23] {
            assert_eq!(count_points(&c, p).unwrap(), p + 1);
            assert_eq!(frobenius_data(&c, p).unwrap().a, 0);
        }
    }

    #[test]
    fn errors() {
        let c = CurveModel::from_i64(&[0, 1, 0, 0, 0, 1]).unwrap();
        assert_eq!(count_points(&c, 2), Err(Error::EvenPrime(2)));
        assert!(matches!(frobenius_data(&c, 2), Err(Error::EvenPrime(2))));
        assert!(CurveModel::from_i64(&[0, 0, 1, 0, 0, 1]).is_err());
    }
}
