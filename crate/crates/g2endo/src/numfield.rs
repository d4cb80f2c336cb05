//! Integer factorization, discriminants of the fields ℚ[x]/(f) and quadratic
//! field utilities.
//!
//! Field discriminants are computed by testing the equation order with
//! Dedekind's criterion and enlarging it with Round-2 steps (q-radical, then
//! ring of multipliers) at every prime whose square divides `disc(f)`.
#![allow(clippy::needless_range_loop)]

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::finitefield::FpPoly;
use crate::intpoly::{discriminant, IntPoly};
use crate::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn small_primes() -> &'static [u64] {
    static P: OnceLock<Vec<u64>> = OnceLock::new();
    P.get_or_init(|| arith::primes_up_to(TRIAL_LIMIT))
}

fn mulmod128(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn powmod128(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut r = 1 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod128(r, a, n);
        }
        a = mulmod128(a, a, n);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &MR_BASES {
        let mut x = powmod128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod128(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Primality {
    Prime,
    Composite,
    /// Passed Miller–Rabin above the range where the fixed bases are a proof.
    ProbablePrime,
}

/// The first 13 prime bases prove primality below this bound.
fn mr_proof_bound() -> BigUint {
    "3317044064679887385961981".parse().unwrap()
}

pub fn primality(n: &BigUint) -> Primality {
    if let Some(v) = n.to_u64() {
        return if is_prime_u64(v) { Primality::Prime } else { Primality::Composite };
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    for &a in &MR_BASES {
        if (n % a).is_zero() {
            return Primality::Composite;
        }
    }
    'outer: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return Primality::Composite;
    }
    if n < &mr_proof_bound() {
        Primality::Prime
    } else {
        Primality::ProbablePrime
    }
}

pub fn is_prime(n: &BigInt) -> bool {
    match n.to_biguint() {
        Some(u) => primality(&u) == Primality::Prime,
        None => false,
    }
}

/// `n = unit · ∏ p^e · cofactor`; `cofactor = 1` when the factorization is complete.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub unit: i8,
    pub primes: Vec<(BigInt, u32)>,
    pub cofactor: BigInt,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    pub fn value(&self) -> BigInt {
        let mut v = BigInt::from(self.unit) * &self.cofactor;
        for (p, e) in &self.primes {
            v *= num_traits::pow(p.clone(), *e as usize);
        }
        v
    }

    pub fn exponent(&self, p: u64) -> u32 {
        let bp = BigInt::from(p);
        self.primes.iter().find(|(q, _)| *q == bp).map_or(0, |(_, e)| *e)
    }

    fn push(&mut self, p: BigInt) {
        match self.primes.iter_mut().find(|(q, _)| *q == p) {
            Some(entry) => entry.1 += 1,
            None => self.primes.push((p, 1)),
        }
    }
}

fn rho_u64(n: u64, c: u64, max_iter: u64) -> Option<u64> {
    let f = |x: u64| (mulmod128(x, x, n) + c) % n;
    let m = 128u64;
    let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
    let (mut x, mut ys) = (0u64, 0u64);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mulmod128(q, x.abs_diff(y), n);
            }
            g = arith::gcd_u64(q, n);
            k += m;
        }
        r *= 2;
        if r > max_iter {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = arith::gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn rho_big(n: &BigUint, c: u64, max_iter: u64) -> Option<BigUint> {
    let cc = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &cc) % n;
    let m = 128u64;
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = BigUint::zero();
    let mut ys = BigUint::zero();
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (&q * diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        if r > max_iter {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

fn find_factor(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r == *n {
        return Some(r);
    }
    if let Some(v) = n.to_u64() {
        return (1..=12u64).find_map(|c| rho_u64(v, c, 1 << 24)).map(BigUint::from);
    }
    (1..=3u64).find_map(|c| rho_big(n, c, 1 << 20))
}

/// Trial division to 10⁶, then Brent's variant of Pollard rho.
///
/// Composite or unproven parts that resist splitting stay in the cofactor.
pub fn factor(n: &BigInt) -> Factorization {
    assert!(!n.is_zero(), "factor(0)");
    let mut out = Factorization { unit: if n.is_negative() { -1 } else { 1 }, primes: Vec::new(), cofactor: BigInt::one() };
    let mut m = n.magnitude().clone();
    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        if let Some(v) = m.to_u64() {
            if p.saturating_mul(p) > v {
                break;
            }
            let mut v = v;
            while v % p == 0 {
                v /= p;
                out.push(BigInt::from(p));
            }
            m = BigUint::from(v);
        } else {
            while (&m % p).is_zero() {
                m /= p;
                out.push(BigInt::from(p));
            }
        }
    }
    let mut stack = Vec::new();
    if !m.is_one() {
        stack.push(m);
    }
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        let small = x.to_u64().is_some_and(|v| v < TRIAL_LIMIT * TRIAL_LIMIT);
        if small {
            out.push(BigInt::from(x));
            continue;
        }
        match primality(&x) {
            Primality::Prime => out.push(BigInt::from(x)),
            Primality::ProbablePrime => out.cofactor *= BigInt::from(x),
            Primality::Composite => match find_factor(&x) {
                Some(d) => {
                    let e = &x / &d;
                    stack.push(d);
                    stack.push(e);
                }
                None => out.cofactor *= BigInt::from(x),
            },
        }
    }
    out.primes.sort();
    out
}

// ---------------------------------------------------------------------------
// Lattices and orders in ℚ[x]/(f)

type RVec = Vec<BigRational>;

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Row-style Hermite normal form of an integer matrix; returns the nonzero rows.
pub fn hnf_rows(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let mut r = 0;
    for col in 0..ncols {
        if r >= rows.len() {
            break;
        }
        loop {
            let piv = (r..rows.len()).filter(|&i| !rows[i][col].is_zero()).min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(piv) = piv else { break };
            rows.swap(r, piv);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                for j in col..ncols {
                    let t = &q * &rows[r][j];
                    rows[i][j] -= t;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][col].is_zero() {
            if rows[r][col].is_negative() {
                for j in col..ncols {
                    rows[r][j] = -&rows[r][j];
                }
            }
            for i in 0..r {
                let q = rows[i][col].div_floor(&rows[r][col]);
                if !q.is_zero() {
                    for j in col..ncols {
                        let t = &q * &rows[r][j];
                        rows[i][j] -= t;
                    }
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

/// HNF basis of the ℤ-span of rational row vectors.
fn rational_hnf(gens: &[RVec], n: usize) -> Vec<RVec> {
    let mut den = BigInt::one();
    for v in gens {
        for c in v {
            den = den.lcm(c.denom());
        }
    }
    let rows: Vec<Vec<BigInt>> = gens.iter().map(|v| v.iter().map(|c| (c * rat(den.clone())).to_integer()).collect()).collect();
    hnf_rows(rows, n).into_iter().map(|row| row.into_iter().map(|c| BigRational::new(c, den.clone())).collect()).collect()
}

fn mat_inverse(m: &[RVec]) -> Vec<RVec> {
    let n = m.len();
    let mut a: Vec<RVec> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero()).expect("singular basis matrix");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for j in 0..2 * n {
            a[col][j] = &a[col][j] * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..2 * n {
                    let t = &f * &a[col][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

fn mat_det(m: &[RVec]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= &a[col][col];
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] / &a[col][col];
            for j in col..n {
                let t = &f * &a[col][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

fn row_times(v: &[BigRational], m: &[RVec]) -> RVec {
    let n = m[0].len();
    (0..n).map(|j| v.iter().zip(m.iter()).map(|(a, row)| a * &row[j]).sum()).collect()
}

/// Left null space over 𝔽_q: all `u` with `Σ u_i · rows_i ≡ 0 (mod q)`.
fn left_kernel_mod(rows: &[Vec<BigInt>], q: &BigInt) -> Vec<Vec<BigInt>> {
    let n = rows.len();
    if n == 0 {
        return Vec::new();
    }
    let m = rows[0].len();
    // work on the transpose: m equations in n unknowns
    let mut a: Vec<Vec<BigInt>> = (0..m).map(|j| (0..n).map(|i| rows[i][j].mod_floor(q)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..m).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(r, piv);
        let inv = modinv(&a[r][col], q);
        for j in 0..n {
            a[r][j] = (&a[r][j] * &inv).mod_floor(q);
        }
        for i in 0..m {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..n {
                    let t = &f * &a[r][j];
                    a[i][j] = (&a[i][j] - t).mod_floor(q);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigInt::zero(); n];
            v[fc] = BigInt::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = (-&a[ri][fc]).mod_floor(q);
            }
            v
        })
        .collect()
}

fn modinv(a: &BigInt, q: &BigInt) -> BigInt {
    let e = a.extended_gcd(q);
    assert!(e.gcd.is_one(), "non-invertible element mod q");
    e.x.mod_floor(q)
}

/// An order in ℚ[x]/(f) given by a ℤ-basis in power-basis coordinates.
#[derive(Clone, Debug)]
struct Order {
    f: IntPoly,
    basis: Vec<RVec>,
    inv: Vec<RVec>,
}

impl Order {
    fn equation_order(f: &IntPoly) -> Self {
        let n = f.deg();
        let basis: Vec<RVec> = (0..n).map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect();
        Order { f: f.clone(), inv: basis.clone(), basis }
    }

    fn from_basis(f: &IntPoly, basis: Vec<RVec>) -> Self {
        let inv = mat_inverse(&basis);
        Order { f: f.clone(), basis, inv }
    }

    fn n(&self) -> usize {
        self.basis.len()
    }

    /// Product in ℚ[x]/(f), power-basis coordinates.
    fn field_mul(&self, a: &[BigRational], b: &[BigRational]) -> RVec {
        let n = self.n();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = std::mem::replace(&mut prod[k], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                prod[k - n + j] -= &c * rat(self.f.coeff(j));
            }
        }
        prod.truncate(n);
        prod
    }

    fn coords(&self, x: &[BigRational]) -> RVec {
        row_times(x, &self.inv)
    }

    fn int_coords(&self, x: &[BigRational]) -> Vec<BigInt> {
        self.coords(x)
            .into_iter()
            .map(|c| {
                assert!(c.is_integer(), "element not in order");
                c.to_integer()
            })
            .collect()
    }

    /// `T[i][j]` = coordinates of `b_i·b_j`.
    fn mult_table(&self) -> Vec<Vec<Vec<BigInt>>> {
        (0..self.n()).map(|i| (0..self.n()).map(|j| self.int_coords(&self.field_mul(&self.basis[i], &self.basis[j]))).collect()).collect()
    }

    fn det(&self) -> BigRational {
        mat_det(&self.basis)
    }

    fn combination(&self, c: &[BigRational]) -> RVec {
        row_times(c, &self.basis)
    }
}

fn alg_mul_mod(t: &[Vec<Vec<BigInt>>], x: &[BigInt], y: &[BigInt], q: &BigInt) -> Vec<BigInt> {
    let n = x.len();
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if y[j].is_zero() {
                continue;
            }
            let s = &x[i] * &y[j];
            for k in 0..n {
                out[k] += &s * &t[i][j][k];
            }
        }
    }
    out.into_iter().map(|v| v.mod_floor(q)).collect()
}

fn alg_pow_mod(t: &[Vec<Vec<BigInt>>], x: &[BigInt], e: &BigUint, q: &BigInt) -> Vec<BigInt> {
    // an HNF basis need not contain 1, so square-and-multiply starts from x itself
    let bits = e.bits();
    let mut acc: Option<Vec<BigInt>> = None;
    for i in (0..bits).rev() {
        if let Some(a) = acc.take() {
            acc = Some(alg_mul_mod(t, &a, &a, q));
        }
        if e.bit(i) {
            acc = Some(match acc.take() {
                None => x.iter().map(|v| v.mod_floor(q)).collect(),
                Some(a) => alg_mul_mod(t, &a, x, q),
            });
        }
    }
    acc.expect("positive exponent")
}

/// One Round-2 step at `q`; `None` when the order is already q-maximal.
fn round2_step(order: &Order, q: &BigInt) -> Option<Order> {
    let n = order.n();
    let t = order.mult_table();
    // q-radical: kernel of x ↦ x^{q^k} on O/qO with q^k >= n
    let mut e = BigUint::one();
    let qu = q.to_biguint().unwrap();
    while e < BigUint::from(n) {
        e *= &qu;
    }
    let unit = |i: usize| -> Vec<BigInt> { (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect() };
    let images: Vec<Vec<BigInt>> = (0..n).map(|i| alg_pow_mod(&t, &unit(i), &e, q)).collect();
    let ker = left_kernel_mod(&images, q);
    let mut gens: Vec<RVec> = ker.iter().map(|v| v.iter().cloned().map(rat).collect()).collect();
    for i in 0..n {
        gens.push(unit(i).into_iter().map(|v| rat(v * q)).collect());
    }
    // radical basis in order coordinates, then in field coordinates
    let rad_coords = rational_hnf(&gens, n);
    let rad_field: Vec<RVec> = rad_coords.iter().map(|c| order.combination(c)).collect();
    let rad_inv = mat_inverse(&rad_field);
    // ring of multipliers: u with u·I ⊆ qI
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(n * n);
            for iota in &rad_field {
                let prod = order.field_mul(&order.basis[i], iota);
                for c in row_times(&prod, &rad_inv) {
                    assert!(c.is_integer(), "radical is not an ideal");
                    row.push(c.to_integer());
                }
            }
            row
        })
        .collect();
    let uker = left_kernel_mod(&rows, q);
    let qr = rat(q.clone());
    let mut gens: Vec<RVec> = uker.iter().map(|v| v.iter().map(|c| rat(c.clone()) / &qr).collect()).collect();
    for i in 0..n {
        gens.push(unit(i).into_iter().map(rat).collect());
    }
    let new_coords = rational_hnf(&gens, n);
    let idx_det = mat_det(&new_coords);
    if idx_det.is_one() {
        return None;
    }
    let new_basis: Vec<RVec> = new_coords.iter().map(|c| order.combination(c)).collect();
    Some(Order::from_basis(&order.f, new_basis))
}

/// Dedekind's criterion: is ℤ[x]/(f) maximal at the prime `q`?
pub fn dedekind_is_maximal(f: &IntPoly, q: u64) -> bool {
    let fbar = FpPoly::from_intpoly(f, q);
    let g = fbar.radical();
    let h = fbar.divrem(&g).0;
    let lift = |p: &FpPoly| IntPoly::new(p.coeffs().iter().map(|&c| BigInt::from(c)).collect());
    let gh = &lift(&g) * &lift(&h);
    let diff = f - &gh;
    let bq = BigInt::from(q);
    let big_f = IntPoly::new(
        diff.coeffs()
            .iter()
            .map(|c| {
                debug_assert!((c % &bq).is_zero());
                c / &bq
            })
            .collect(),
    );
    let fb = FpPoly::from_intpoly(&big_f, q);
    let d = fb.gcd(&g).gcd(&h);
    d.degree() == Some(0)
}

/// Discriminant of the number field ℚ[x]/(f) for monic irreducible `f`.
pub fn field_discriminant(f: &IntPoly) -> Result<BigInt> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = f.deg();
    if !(1..=6).contains(&n) {
        return Err(Error::DegreeOutOfRange(n));
    }
    if n >= 2 && !crate::intpoly::is_irreducible(f)? {
        return Err(Error::Reducible);
    }
    let d = discriminant(f)?;
    if n == 1 {
        return Ok(BigInt::one());
    }
    let fac = factor(&d);
    if !fac.is_complete() {
        return Err(Error::PartialFactorization(fac.cofactor.to_string()));
    }
    let mut order = Order::equation_order(f);
    for (q, e) in &fac.primes {
        if *e < 2 {
            continue;
        }
        if let Some(qs) = q.to_u64().filter(|&v| v < (1 << 32)) {
            if dedekind_is_maximal(f, qs) {
                continue;
            }
        }
        while let Some(next) = round2_step(&order, q) {
            order = next;
        }
    }
    let det = order.det();
    let disc = rat(d.clone()) * &det * &det;
    assert!(disc.is_integer(), "non-integral order discriminant");
    let disc = disc.to_integer();
    let (quot, r) = d.div_rem(&disc);
    assert!(r.is_zero() && arith::is_square(&quot), "index identity violated for {}", f);
    Ok(disc)
}

// ---------------------------------------------------------------------------
// Quadratic fields

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |m: i64| arith::squarefree_part_sign(m) == m;
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// A quadratic field, identified by its fundamental discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadraticField {
    pub fundamental_discriminant: i64,
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if !is_fundamental_discriminant(d) {
            return Err(Error::NotDiscriminant(d));
        }
        Ok(QuadraticField { fundamental_discriminant: d })
    }

    /// The field ℚ(√m) for a squarefree `m ≠ 0, 1`.
    pub fn from_radicand(m: i64) -> Result<Self> {
        if m == 0 || m == 1 || arith::squarefree_part_sign(m) != m {
            return Err(Error::Invalid(format!("{} is not a squarefree radicand", m)));
        }
        let d = if m.rem_euclid(4) == 1 { m } else { 4 * m };
        Self::new(d)
    }

    pub fn radicand(&self) -> i64 {
        let d = self.fundamental_discriminant;
        if d.rem_euclid(4) == 0 {
            d / 4
        } else {
            d
        }
    }

    pub fn name(&self) -> String {
        let m = self.radicand();
        if m == -1 {
            "Q(i)".to_string()
        } else {
            format!("Q(sqrt({}))", m)
        }
    }
}

/// Kronecker symbol `(D | p)` for an odd prime `p`.
pub fn kronecker(d: i64, p: u64) -> i32 {
    crate::finitefield::legendre(d.rem_euclid(p as i64) as u64, p)
}

/// `(D | p) = +1`, for odd primes `p ∤ D`.
pub fn splits_in(d: i64, p: u64) -> Result<bool> {
    if p.is_multiple_of(2) {
        return Err(Error::EvenPrime(p));
    }
    match kronecker(d, p) {
        0 => Err(Error::Ramified(p)),
        s => Ok(s == 1),
    }
}

/// Quadratic fields whose discriminant is supported on `s`, ordered by `(|D|, D)`.
pub fn quadratic_fields_unramified_outside(s: &[u64]) -> Vec<QuadraticField> {
    let mut odd: Vec<u64> = s.iter().copied().filter(|&p| p != 2 && is_prime_u64(p)).collect();
    odd.sort_unstable();
    odd.dedup();
    let has2 = s.contains(&2);
    let mut out = Vec::new();
    for mask in 0u32..(1 << odd.len()) {
        let mut d: i64 = 1;
        for (i, &p) in odd.iter().enumerate() {
            if mask & (1 << i) != 0 {
                let star = if p % 4 == 1 { p as i64 } else { -(p as i64) };
                d *= star;
            }
        }
        if d != 1 {
            out.push(d);
        }
        if has2 {
            out.push(-4 * d);
            out.push(8 * d);
            out.push(-8 * d);
        }
    }
    let mut fields: Vec<QuadraticField> = out.into_iter().map(|d| QuadraticField::new(d).expect("constructed discriminant is fundamental")).collect();
    fields.sort_by_key(|k| (k.fundamental_discriminant.abs(), k.fundamental_discriminant));
    fields
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(561));
        assert!(!is_prime_u64(3_215_031_751));
        assert!(is_prime(&BigInt::from(18446744073709551557u64)));
    }

    #[test]
    fn factor_examples() {
        let f = factor(&BigInt::from(125));
        assert_eq!(f.primes, vec![(BigInt::from(5), 3)]);
        let f = factor(&BigInt::from(36864));
        assert_eq!(f.primes, vec![(BigInt::from(2), 12), (BigInt::from(3), 2)]);
        let p1 = BigInt::from(1_073_741_827u64);
        let p2 = BigInt::from(1_073_741_831u64);
        let f = factor(&(&p1 * &p2));
        assert!(f.is_complete());
        assert_eq!(f.primes, vec![(p1, 1), (p2, 1)]);
        let f = factor(&BigInt::from(-12));
        assert_eq!(f.unit, -1);
        assert_eq!(f.value(), BigInt::from(-12));
    }

    #[test]
    fn field_disc_examples() {
        assert_eq!(field_discriminant(&IntPoly::from_i64(&[-1, -1, 1])).unwrap(), BigInt::from(5));
        assert_eq!(field_discriminant(&IntPoly::from_i64(&[1, 1, 1, 1, 1])).unwrap(), BigInt::from(125));
        assert_eq!(field_discriminant(&IntPoly::from_i64(&[-2, 0, 1])).unwrap(), BigInt::from(8));
        // x^2 - 5: equation order has index 2
        assert_eq!(field_discriminant(&IntPoly::from_i64(&[-5, 0, 1])).unwrap(), BigInt::from(5));
        // x^2 + 27: ℚ(√-3)
        assert_eq!(field_discriminant(&IntPoly::from_i64(&[27, 0, 1])).unwrap(), BigInt::from(-3));
        // x^4 + 1: ℚ(ζ8), disc 256
        assert_eq!(field_discriminant(&IntPoly::from_i64(&[1, 0, 0, 0, 1])).unwrap(), BigInt::from(256));
        assert!(field_discriminant(&IntPoly::from_i64(&[-1, 0, 0, 0, 1])).is_err());
    }

    #[test]
    fn dedekind() {
        assert!(!dedekind_is_maximal(&IntPoly::from_i64(&[-5, 0, 1]), 2));
        assert!(dedekind_is_maximal(&IntPoly::from_i64(&[-2, 0, 1]), 2));
    }

    #[test]
    fn quadratic_examples() {
        assert!(splits_in(8, 7).unwrap());
        assert!(!splits_in(8, 5).unwrap());
        assert!(splits_in(-8, 11).unwrap());
        assert!(splits_in(5, 5).is_err());
        let got: Vec<i64> = quadratic_fields_unramified_outside(&[2, 3]).iter().map(|k| k.fundamental_discriminant).collect();
        assert_eq!(got, vec![-3, -4, -8, 8, 12, -24, 24]);
        assert!(quadratic_fields_unramified_outside(&[]).is_empty());
        let got: Vec<i64> = quadratic_fields_unramified_outside(&[5]).iter().map(|k| k.fundamental_discriminant).collect();
        assert_eq!(got, vec![5]);
        assert_eq!(QuadraticField::new(8).unwrap().name(), "Q(sqrt(2))");
        assert_eq!(QuadraticField::from_radicand(-1).unwrap().fundamental_discriminant, -4);
    }
}
