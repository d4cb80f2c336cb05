//! Fixed-point complex numbers on `BigInt` and a Durand–Kerner root finder.
//!
//! Values are stored as `(re + i·im) / 2^PREC`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub const PREC: u32 = 384;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fx {
    pub re: BigInt,
    pub im: BigInt,
}

fn one_scaled() -> BigInt {
    BigInt::one() << PREC
}

impl Fx {
    pub fn zero() -> Fx {
        Fx { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn one() -> Fx {
        Fx { re: one_scaled(), im: BigInt::zero() }
    }

    pub fn from_rational(r: &BigRational) -> Fx {
        Fx { re: (r.numer() << PREC).div_floor(r.denom()), im: BigInt::zero() }
    }

    pub fn from_f64(re: f64, im: f64) -> Fx {
        let s = |v: f64| BigRational::from_float(v).map(|r| (r.numer() << PREC).div_floor(r.denom())).unwrap_or_default();
        Fx { re: s(re), im: s(im) }
    }

    pub fn add(&self, o: &Fx) -> Fx {
        Fx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        Fx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        Fx { re: (&self.re * &o.re - &self.im * &o.im) >> PREC, im: (&self.re * &o.im + &self.im * &o.re) >> PREC }
    }

    pub fn div(&self, o: &Fx) -> Result<Fx> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let nr = &self.re * &o.re + &self.im * &o.im;
        let ni = &self.im * &o.re - &self.re * &o.im;
        Ok(Fx { re: (nr << PREC).div_floor(&den), im: (ni << PREC).div_floor(&den) })
    }

    pub fn pow(&self, e: u32) -> Fx {
        (0..e).fold(Fx::one(), |acc, _| acc.mul(self))
    }

    /// `|z|²` scaled by `2^(2·PREC)`.
    pub fn abs2_scaled(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> f64 {
        let r = BigRational::new(self.abs2_scaled(), BigInt::one() << (2 * PREC));
        r.to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        let d = one_scaled();
        let c = |v: &BigInt| BigRational::new(v.clone(), d.clone()).to_f64().unwrap_or(f64::NAN);
        (c(&self.re), c(&self.im))
    }

    pub fn conj(&self) -> Fx {
        Fx { re: self.re.clone(), im: -&self.im }
    }

    pub fn is_small(&self, bits: u32) -> bool {
        self.re.abs().bits() + bits as u64 <= PREC as u64 && self.im.abs().bits() + bits as u64 <= PREC as u64
    }
}

/// Roots of a monic polynomial `x^n + c[n-1] x^(n-1) + ... + c[0]`.
#[derive(Clone, Debug)]
pub struct Roots {
    pub roots: Vec<Fx>,
    /// Largest inclusion radius `n·|p(z)/∏(z - z_j)|` over the returned roots.
    pub error_bound: f64,
    pub iterations: usize,
}

fn horner(c: &[Fx], z: &Fx) -> Fx {
    let mut acc = Fx::one();
    for a in c.iter().rev() {
        acc = acc.mul(z).add(a);
    }
    acc
}

fn weierstrass(c: &[Fx], z: &[Fx], k: usize) -> Result<Fx> {
    let mut den = Fx::one();
    for (j, zj) in z.iter().enumerate() {
        if j != k {
            den = den.mul(&z[k].sub(zj));
        }
    }
    horner(c, &z[k]).div(&den)
}

pub const MAX_ITER: usize = 5000;

pub fn monic_roots(c: &[BigRational]) -> Result<Roots> {
    let n = c.len();
    if n == 0 {
        return Ok(Roots { roots: Vec::new(), error_bound: 0.0, iterations: 0 });
    }
    let cf: Vec<Fx> = c.iter().map(Fx::from_rational).collect();
    let bound = 1.0 + c.iter().map(|a| a.abs().to_f64().unwrap_or(f64::MAX)).fold(0.0, f64::max);
    let w = Fx::from_f64(0.4, 0.9);
    let r = Fx::from_f64(bound.min(1e300), 0.0);
    let mut z: Vec<Fx> = (0..n).map(|k| r.mul(&w.pow(k as u32 + 1))).collect();
    // a double root only resolves to about half the working precision
    let target_bits = 160u32;
    for it in 0..MAX_ITER {
        let mut converged = true;
        for k in 0..n {
            let d = weierstrass(&cf, &z, k)?;
            let scale = z[k].abs().max(1.0).log2().ceil() as i64;
            if !d.is_small((target_bits as i64 - scale.max(0)).max(0) as u32) {
                converged = false;
            }
            z[k] = z[k].sub(&d);
        }
        if converged {
            let mut eb: f64 = 0.0;
            for k in 0..n {
                let d = weierstrass(&cf, &z, k)?;
                eb = eb.max(n as f64 * d.abs());
            }
            return Ok(Roots { roots: z, error_bound: eb, iterations: it + 1 });
        }
    }
    Err(Error::NoConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn cyclotomic_roots() {
        // x^4 + 1
        let r = monic_roots(&[q(1), q(0), q(0), q(0)]).unwrap();
        for z in &r.roots {
            assert!((z.abs() - 1.0).abs() < 1e-30);
            let (a, b) = z.to_f64_pair();
            assert!((a.abs() - b.abs()).abs() < 1e-15);
        }
        assert!(r.error_bound < 1e-40);
    }

    #[test]
    fn double_root() {
        // (x-1)²(x+2)
        let r = monic_roots(&[q(2), q(-3), q(0)]).unwrap();
        assert!(r.error_bound < 1e-30);
    }

    #[test]
    fn integer_roots() {
        // (x-1)(x-2)(x-3)
        let r = monic_roots(&[q(-6), q(11), q(-6)]).unwrap();
        let mut re: Vec<f64> = r.roots.iter().map(|z| z.to_f64_pair().0).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in re.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
