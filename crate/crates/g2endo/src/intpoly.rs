//! Dense univariate polynomials over ℤ.
//!
//! Everything here is exact. Besides ring arithmetic the module provides
//! resultants, discriminants, the power twist `f{m}` (the monic polynomial
//! whose roots are the m-th powers of the roots of `f`), irreducibility for
//! degrees 2 to 6, square roots of monic quartics and Galois certificates
//! built from Frobenius cycle types.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::finitefield::FpPoly;
use crate::{Error, Result};

/// Serialized as decimal strings, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl From<IntPoly> for Vec<String> {
    fn from(p: IntPoly) -> Self {
        p.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for IntPoly {
    type Error = String;

    fn try_from(v: Vec<String>) -> std::result::Result<Self, String> {
        let c =
            v.iter().map(|s| s.parse::<BigInt>().map_err(|e| format!("bad coefficient '{}': {}", s, e))).collect::<std::result::Result<_, _>>()?;
        Ok(IntPoly::new(c))
    }
}

impl IntPoly {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &BigInt) -> Self {
        Self::new(vec![-r, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// `f(x^m)`
    pub fn compose_power(&self, m: usize) -> Self {
        let mut out = vec![BigInt::zero(); self.deg() * m + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * m] = c.clone();
        }
        Self::new(out)
    }

    /// `f(-x)`
    pub fn negate_x(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect())
    }

    /// `x^n f(1/x)`, with `n >= deg f`.
    pub fn reverse(&self, n: usize) -> Self {
        assert!(n >= self.deg());
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[n - i] = c.clone();
        }
        Self::new(out)
    }

    /// `f(x + r)`
    pub fn shift(&self, r: &BigInt) -> Self {
        let mut acc = IntPoly::zero();
        let lin = IntPoly::new(vec![r.clone(), BigInt::one()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &IntPoly::constant(c.clone());
        }
        acc
    }

    /// Exact quotient `self / d` over ℤ, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dl = d.lc();
        let dd = d.deg();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = &rem[k + dd];
            let (qk, r) = top.div_rem(&dl);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &qk * dc;
            }
            q[k] = qk;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Sum of squared coefficients.
    pub fn norm2_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{}", a)?;
            }
            if i > 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                write!(f, "x")?;
                if i > 1 {
                    write!(f, "^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `Res(f, g) = lc(f)^{deg g} · ∏_{f(α)=0} g(α)`, via the Sylvester determinant.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (m, n) = (f.deg(), g.deg());
    if m == 0 {
        return Ok(num_traits::pow(f.lc(), n));
    }
    if n == 0 {
        return Ok(num_traits::pow(g.lc(), m));
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for j in 0..=m {
            row[i + j] = f.coeff(m - j);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for j in 0..=n {
            row[i + j] = g.coeff(n - j);
        }
        rows.push(row);
    }
    Ok(bareiss_det(rows))
}

/// `disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
pub fn discriminant(f: &IntPoly) -> Result<BigInt> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.deg();
    if n == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let r = resultant(f, &f.derivative())?;
    let d = r / f.lc();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
}

/// Interpolates the unique polynomial of degree `< xs.len()` through the points.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> Vec<BigRational> {
    let n = xs.len();
    // Newton divided differences.
    let mut dd: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = BigRational::from_integer(&xs[i] - &xs[i - j]);
            dd[i] = num / den;
        }
    }
    let mut poly = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        // poly = poly * (x - xs[k]) + dd[k]
        let mut next = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            if i + 1 < n {
                next[i + 1] += &poly[i];
            }
            next[i] -= &poly[i] * BigRational::from_integer(xs[k].clone());
        }
        next[0] += &dd[k];
        poly = next;
    }
    poly
}

fn twist_constant_check(f: &IntPoly, m: usize, out: &IntPoly) {
    let n = f.deg();
    let sign_n = if n % 2 == 1 { -BigInt::one() } else { BigInt::one() };
    let prod_roots = &sign_n * f.coeff(0);
    let expect = &sign_n * num_traits::pow(prod_roots, m);
    assert_eq!(out.coeff(0), expect, "twist constant term mismatch");
}

/// `f{m}` computed directly as `x ↦ Res_y(f(y), x - y^m)` by evaluation and interpolation.
pub fn twist_resultant(f: &IntPoly, m: usize) -> Result<IntPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if m == 0 {
        return Err(Error::Invalid("twist exponent must be positive".into()));
    }
    if m == 1 {
        return Ok(f.clone());
    }
    let n = f.deg();
    let xs: Vec<BigInt> = (0..=n as i64).map(BigInt::from).collect();
    let mut ys = Vec::with_capacity(n + 1);
    for x0 in &xs {
        let mut g = vec![BigInt::zero(); m + 1];
        g[0] = x0.clone();
        g[m] = -BigInt::one();
        ys.push(resultant(f, &IntPoly::new(g))?);
    }
    let rat = interpolate(&xs, &ys);
    let coeffs: Vec<BigInt> = rat
        .into_iter()
        .map(|c| {
            assert!(c.is_integer(), "non-integral twist coefficient");
            c.to_integer()
        })
        .collect();
    let out = IntPoly::new(coeffs);
    assert!(out.is_monic() && out.deg() == n);
    twist_constant_check(f, m, &out);
    Ok(out)
}

/// One Graeffe step: the polynomial whose roots are the squares of the roots of `f`.
pub fn graeffe(f: &IntPoly) -> Result<IntPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = f.deg();
    let h = f * &f.negate_x();
    let mut out: Vec<BigInt> = h.coeffs.iter().step_by(2).cloned().collect();
    if n % 2 == 1 {
        for c in out.iter_mut() {
            *c = -&*c;
        }
    }
    Ok(IntPoly::new(out))
}

/// `f{m}` for monic `f`: the monic polynomial `∏(x - x_i^m)`.
///
/// `m` is split into prime factors; factors of 2 use Graeffe steps and odd
/// primes use the resultant construction.
pub fn twist(f: &IntPoly, m: usize) -> Result<IntPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if m == 0 {
        return Err(Error::Invalid("twist exponent must be positive".into()));
    }
    let mut g = f.clone();
    let mut k = m;
    while k.is_multiple_of(2) {
        g = graeffe(&g)?;
        k /= 2;
    }
    let mut q = 3;
    while k > 1 {
        while k.is_multiple_of(q) {
            g = twist_resultant(&g, q)?;
            k /= q;
        }
        q += 2;
    }
    twist_constant_check(f, m, &g);
    Ok(g)
}

/// Factor degrees of `f mod p` when `f mod p` keeps its degree and is squarefree.
fn mod_p_pattern(f: &IntPoly, p: u64) -> Option<Vec<usize>> {
    let fp = FpPoly::from_intpoly(f, p);
    if fp.degree() != Some(f.deg()) {
        return None;
    }
    if !fp.is_squarefree() {
        return None;
    }
    Some(fp.factor_degrees())
}

fn subset_sums(parts: &[usize], n: usize) -> BTreeSet<usize> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in parts {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    (1..n).filter(|&s| reach[s]).collect()
}

/// Degrees `1..n-1` not excluded as factor degrees by reductions modulo small primes.
fn possible_factor_degrees(f: &IntPoly, primes: usize) -> BTreeSet<usize> {
    let n = f.deg();
    let mut possible: BTreeSet<usize> = (1..n).collect();
    let mut used = 0;
    for p in arith::primes_up_to(2000) {
        if used >= primes || possible.is_empty() {
            break;
        }
        if let Some(pat) = mod_p_pattern(f, p) {
            let s = subset_sums(&pat, n);
            possible = possible.intersection(&s).cloned().collect();
            used += 1;
        }
    }
    possible
}

fn signed_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let pos = arith::positive_divisors(n)?;
    let mut out = Vec::with_capacity(pos.len() * 2);
    for d in pos {
        out.push(-&d);
        out.push(d);
    }
    Ok(out)
}

/// Some rational root `num/den` of a primitive `f` with nonzero constant term.
fn rational_root(f: &IntPoly) -> Result<Option<BigRational>> {
    let n = f.deg();
    let nums = signed_divisors(&f.coeff(0))?;
    let dens = arith::positive_divisors(&f.lc())?;
    for q in &dens {
        for p in &nums {
            if !p.gcd(q).is_one() {
                continue;
            }
            // q^n f(p/q) = Σ a_i p^i q^{n-i}
            let mut acc = BigInt::zero();
            let mut pp = BigInt::one();
            let qpows: Vec<BigInt> = (0..=n).map(|k| num_traits::pow(q.clone(), k)).collect();
            for i in 0..=n {
                acc += f.coeff(i) * &pp * &qpows[n - i];
                pp *= p;
            }
            if acc.is_zero() {
                return Ok(Some(BigRational::new(p.clone(), q.clone())));
            }
        }
    }
    Ok(None)
}

/// Monic quadratic factor of a monic quartic, by coefficient matching.
fn monic_quartic_quadratic_factor(f: &IntPoly) -> Result<Option<(IntPoly, IntPoly)>> {
    debug_assert!(f.is_monic() && f.deg() == 4);
    let (a0, a1, a2, a3) = (f.coeff(0), f.coeff(1), f.coeff(2), f.coeff(3));
    for c in signed_divisors(&a0)? {
        let e = &a0 / &c;
        let mut cands = Vec::new();
        if e != c {
            let num = &a1 - &a3 * &c;
            let den = &e - &c;
            if !num.is_multiple_of(&den) {
                continue;
            }
            cands.push(num / den);
        } else {
            if a1 != &a3 * &c {
                continue;
            }
            let disc = &a3 * &a3 - BigInt::from(4) * (&a2 - BigInt::from(2) * &c);
            if let Some(s) = arith::exact_sqrt(&disc) {
                let twice = &a3 + &s;
                if twice.is_even() {
                    cands.push(twice / 2);
                }
            }
        }
        for b in cands {
            let d = &a3 - &b;
            if &c + &e + &b * &d == a2 && &b * &e + &c * &d == a1 {
                let g = IntPoly::new(vec![c.clone(), b.clone(), BigInt::one()]);
                let h = IntPoly::new(vec![e.clone(), d, BigInt::one()]);
                return Ok(Some((g, h)));
            }
        }
    }
    Ok(None)
}

fn divisor_count(n: &BigInt) -> Option<usize> {
    let fac = crate::numfield::factor(n);
    if !fac.is_complete() {
        return None;
    }
    Some(fac.primes.iter().map(|(_, e)| *e as usize + 1).product())
}

/// Kronecker search for a factor of exact degree `d` of a primitive `f` without rational roots.
fn kronecker_factor(f: &IntPoly, d: usize) -> Result<Option<IntPoly>> {
    // choose d+1 evaluation points with few divisors
    let mut pts: Vec<(usize, BigInt, BigInt)> = Vec::new();
    for k in -12i64..=12 {
        let x = BigInt::from(k);
        let v = f.eval(&x);
        if v.is_zero() {
            continue;
        }
        if let Some(c) = divisor_count(&v) {
            pts.push((c, x, v));
        }
    }
    pts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.abs().cmp(&b.1.abs())));
    if pts.len() < d + 1 {
        return Err(Error::Invalid("no usable evaluation points".into()));
    }
    pts.truncate(d + 1);
    let xs: Vec<BigInt> = pts.iter().map(|p| p.1.clone()).collect();
    let mut choices: Vec<Vec<BigInt>> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        if i == 0 {
            choices.push(arith::positive_divisors(&p.2)?);
        } else {
            choices.push(signed_divisors(&p.2)?);
        }
    }
    let lc = f.lc();
    let norm2 = f.norm2_sq();
    let bounds: Vec<BigInt> = (0..=d as u64)
        .map(|j| {
            let b = arith::binomial(d as u64, j);
            &b * &b * &norm2
        })
        .collect();
    let mut idx = vec![0usize; d + 1];
    loop {
        let ys: Vec<BigInt> = idx.iter().enumerate().map(|(i, &k)| choices[i][k].clone()).collect();
        let g = interpolate(&xs, &ys);
        if g.iter().all(|c| c.is_integer()) {
            let gi = IntPoly::new(g.into_iter().map(|c| c.to_integer()).collect());
            let ok_shape = gi.deg() == d && lc.is_multiple_of(&gi.lc()) && gi.coeffs.iter().zip(bounds.iter()).all(|(c, b)| &(c * c) <= b);
            if ok_shape && f.div_exact(&gi).is_some() {
                return Ok(Some(gi));
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos > d {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Exact irreducibility over ℚ for degrees 2 to 6.
///
/// A mod-p pattern filter may prove irreducibility; reducibility is only
/// ever reported with an explicit integer factor in hand.
pub fn is_irreducible(f: &IntPoly) -> Result<bool> {
    let n = f.deg();
    if f.is_zero() || !(2..=6).contains(&n) {
        return Err(Error::DegreeOutOfRange(n));
    }
    let f = f.primitive_part();
    if f.coeff(0).is_zero() {
        return Ok(false);
    }
    if discriminant(&f)?.is_zero() {
        return Ok(false);
    }
    let possible = possible_factor_degrees(&f, 8);
    let small: Vec<usize> = (1..=n / 2).filter(|d| possible.contains(d) || possible.contains(&(n - d))).collect();
    if small.is_empty() {
        return Ok(true);
    }
    if small.contains(&1) && rational_root(&f)?.is_some() {
        return Ok(false);
    }
    if n <= 3 {
        return Ok(true);
    }
    if n == 4 && f.is_monic() {
        if !small.contains(&2) {
            return Ok(true);
        }
        return Ok(monic_quartic_quadratic_factor(&f)?.is_none());
    }
    for d in small.into_iter().filter(|&d| d >= 2) {
        if kronecker_factor(&f, d)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monic `h` with `h^2 = f` for a monic quartic `f`, if one exists in ℤ[x].
pub fn perfect_square_root(f: &IntPoly) -> Result<Option<IntPoly>> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if f.deg() != 4 {
        return Err(Error::DegreeOutOfRange(f.deg()));
    }
    let a3 = f.coeff(3);
    if !a3.is_even() {
        return Ok(None);
    }
    let b: BigInt = &a3 / 2;
    let t: BigInt = f.coeff(2) - &b * &b;
    if !t.is_even() {
        return Ok(None);
    }
    let c = t / 2;
    let h = IntPoly::new(vec![c, b, BigInt::one()]);
    if &(&h * &h) == f {
        Ok(Some(h))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaloisVerdict {
    ProvenSn,
    ProvenAn,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisCertificate {
    pub verdict: GaloisVerdict,
    /// Primes with the cycle type of Frobenius (sorted factor degrees mod p).
    pub witnesses: Vec<(u64, Vec<usize>)>,
    pub discriminant_is_square: bool,
    /// Transitivity, established by exact irreducibility over ℚ.
    pub irreducible: bool,
}

fn has_long_prime_cycle(ct: &[usize], n: usize) -> bool {
    ct.iter().any(|&l| 2 * l > n && arith::is_prime_u64(l as u64))
}

/// One 2-cycle, every other cycle odd: an odd power is a transposition.
fn is_transposition_pattern(ct: &[usize]) -> bool {
    ct.iter().filter(|&&l| l == 2).count() == 1 && ct.iter().all(|&l| l == 2 || l % 2 == 1)
}

/// One 3-cycle, no other length divisible by 3: a power is a 3-cycle.
fn is_three_cycle_pattern(ct: &[usize]) -> bool {
    ct.iter().filter(|&&l| l == 3).count() == 1 && ct.iter().all(|&l| l == 3 || l % 3 != 0)
}

/// Certificate that `Gal(f)` is `S_n` or `A_n`, from Frobenius cycle types at primes `<= prime_budget`.
///
/// Transitivity comes from exact irreducibility. A primitive group holding a
/// transposition is `S_n`; holding a 3-cycle it contains `A_n`.
pub fn galois_sn_certificate(f: &IntPoly, prime_budget: u64) -> Result<GaloisCertificate> {
    let n = f.deg();
    if f.is_zero() || !(2..=6).contains(&n) {
        return Err(Error::DegreeOutOfRange(n));
    }
    let disc = discriminant(f)?;
    if disc.is_zero() {
        return Err(Error::NotSquarefree);
    }
    let square = arith::is_square(&disc);
    let irreducible = is_irreducible(f)?;
    let mut cert = GaloisCertificate { verdict: GaloisVerdict::Unknown, witnesses: Vec::new(), discriminant_is_square: square, irreducible };
    if !irreducible {
        return Ok(cert);
    }
    if n == 2 {
        cert.verdict = GaloisVerdict::ProvenSn;
        return Ok(cert);
    }
    if n == 3 {
        cert.verdict = if square { GaloisVerdict::ProvenAn } else { GaloisVerdict::ProvenSn };
        return Ok(cert);
    }
    let bad = f.lc() * &disc;
    let mut primitive = arith::is_prime_u64(n as u64);
    let mut transposition = false;
    let mut three_cycle = false;
    for p in arith::primes_up_to(prime_budget) {
        if (&bad % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = FpPoly::from_intpoly(f, p);
        let mut ct = fp.factor_degrees();
        ct.sort_unstable();
        let mut useful = false;
        if !primitive && has_long_prime_cycle(&ct, n) {
            primitive = true;
            useful = true;
        }
        if !transposition && is_transposition_pattern(&ct) {
            transposition = true;
            useful = true;
        }
        if !three_cycle && is_three_cycle_pattern(&ct) {
            three_cycle = true;
            useful = true;
        }
        if useful {
            cert.witnesses.push((p, ct));
        }
        if primitive && (transposition || three_cycle) {
            break;
        }
    }
    if primitive && transposition {
        assert!(!square, "transposition with square discriminant");
        cert.verdict = GaloisVerdict::ProvenSn;
    } else if primitive && three_cycle {
        cert.verdict = if square { GaloisVerdict::ProvenAn } else { GaloisVerdict::ProvenSn };
    }
    Ok(cert)
}

/// Lossy helper for diagnostics.
pub fn to_f64_coeffs(f: &IntPoly) -> Vec<f64> {
    f.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-3, 1])).unwrap(), BigInt::from(-1));
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[1, 0, 1])).unwrap(), BigInt::zero());
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])).unwrap(), BigInt::one());
        assert!(resultant(&IntPoly::zero(), &p(&[1])).is_err());
    }

    #[test]
    fn discriminant_examples() {
        // b^2 - 4c
        assert_eq!(discriminant(&p(&[3, 5, 1])).unwrap(), BigInt::from(13));
        // -4p^3 - 27q^2 with p = 2, q = 1
        assert_eq!(discriminant(&p(&[1, 2, 0, 1])).unwrap(), BigInt::from(-32 - 27));
        assert_eq!(discriminant(&p(&[1, 1, 1, 1, 1])).unwrap(), BigInt::from(125));
        assert!(discriminant(&p(&[7])).is_err());
    }

    #[test]
    fn twist_examples() {
        assert_eq!(twist(&p(&[2, -3, 1]), 2).unwrap(), p(&[4, -5, 1]));
        let f = p(&[5, -1, 3, 0, 1]);
        assert_eq!(twist(&f, 1).unwrap(), f);
        let cyclo = p(&[1, 1, 1, 1, 1]);
        assert_eq!(twist(&cyclo, 5).unwrap(), p(&[1, -4, 6, -4, 1]));
        assert!(twist(&p(&[1, 2]), 2).is_err());
    }

    #[test]
    fn twist_routes_agree() {
        let f = p(&[7, -3, 2, 1, 1]);
        assert_eq!(twist_resultant(&f, 2).unwrap(), graeffe(&f).unwrap());
        assert_eq!(twist_resultant(&f, 12).unwrap(), twist(&f, 12).unwrap());
        assert_eq!(twist_resultant(&f, 6).unwrap(), twist(&twist(&f, 2).unwrap(), 3).unwrap());
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&p(&[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&p(&[-1, 0, 0, 0, 1])).unwrap());
        assert!(!is_irreducible(&p(&[4, 0, 0, 0, 1])).unwrap()); // (x^2+2x+2)(x^2-2x+2)
        assert!(is_irreducible(&p(&[-1, -1, 0, 0, 0, 1])).unwrap());
        // (x^2+x+1)(x^3-x+3)
        let g = &p(&[1, 1, 1]) * &p(&[3, -1, 0, 1]);
        assert!(!is_irreducible(&g).unwrap());
        // (2x^3+x+1)(3x^3-x^2+5)
        let h = &p(&[1, 1, 0, 2]) * &p(&[5, 0, -1, 3]);
        assert!(!is_irreducible(&h).unwrap());
        assert!(!is_irreducible(&p(&[1, 0, 0, 0, 0, 0, 1])).unwrap()); // x^6+1 = (x^2+1)(x^4-x^2+1)
        assert!(is_irreducible(&p(&[3, 0, 0, 0, 0, 0, 2])).unwrap());
        assert!(is_irreducible(&p(&[1])).is_err());
    }

    #[test]
    fn square_roots() {
        let h = p(&[1, 1, 1]);
        assert_eq!(perfect_square_root(&(&h * &h)).unwrap(), Some(h));
        assert_eq!(perfect_square_root(&p(&[1, 0, 0, 0, 1])).unwrap(), None);
    }

    #[test]
    fn galois_examples() {
        assert_eq!(galois_sn_certificate(&p(&[-2, 0, 1]), 10).unwrap().verdict, GaloisVerdict::ProvenSn);
        let c = galois_sn_certificate(&p(&[-1, -1, 0, 0, 0, 1]), 200).unwrap();
        assert_eq!(c.verdict, GaloisVerdict::ProvenSn);
        assert!(!c.witnesses.is_empty());
        assert_eq!(galois_sn_certificate(&p(&[1, 1, 1, 1, 1]), 1000).unwrap().verdict, GaloisVerdict::Unknown);
        // x^3 - 3x + 1 has cyclic Galois group of order 3
        assert_eq!(galois_sn_certificate(&p(&[1, -3, 0, 1]), 50).unwrap().verdict, GaloisVerdict::ProvenAn);
    }

    #[test]
    fn display_and_shift() {
        assert_eq!(p(&[-1, 0, 2, 1]).to_string(), "x^3 + 2*x^2 - 1");
        let f = p(&[1, 2, 3]);
        assert_eq!(f.shift(&BigInt::from(1)), p(&[6, 8, 3]));
        assert_eq!(f.reverse(3), p(&[0, 3, 2, 1]));
    }
}
