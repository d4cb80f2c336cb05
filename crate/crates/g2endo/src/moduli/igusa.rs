//! Igusa–Clebsch invariants of a binary sextic through Clebsch transvectants.
//!
//! Convention (stamped as [`CONVENTION_ID`]): with `A = (f,f)_6`, `B = (i,i)_4`,
//! `C = (i,Δ)_4`, `D = (y3,y1)_2` where `i = (f,f)_4`, `Δ = (i,i)_2`,
//! `y1 = (f,i)_4`, `y2 = (i,y1)_2`, `y3 = (i,y2)_2`,
//!
//! ```text
//! I2  = -120 A
//! I4  = -720 A² + 6750 B
//! I6  = 8640 A³ - 108000 A B + 202500 C
//! I10 = -62208 A⁵ + 972000 A³ B + 1620000 A² C - 3037500 A B² - 6075000 B C - 4556250 D
//! ```
//!
//! Under this normalization `I10` is the discriminant of the binary sextic, so a
//! quintic `f` (read as a sextic with vanishing top coefficient) has
//! `I10 = lc(f)² · disc(f)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::finitefield::CurveModel;
use crate::{Error, Result};

pub const CONVENTION_ID: &str = "igusa-clebsch-transvectant-v1";

pub const WEIGHTS: [u32; 4] = [2, 4, 6, 10];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IgusaInvariants {
    pub i2: BigRational,
    pub i4: BigRational,
    pub i6: BigRational,
    pub i10: BigRational,
}

impl IgusaInvariants {
    pub fn new(i2: BigRational, i4: BigRational, i6: BigRational, i10: BigRational) -> Self {
        IgusaInvariants { i2, i4, i6, i10 }
    }

    pub fn from_i64(v: [i64; 4]) -> Self {
        let r = |x: i64| BigRational::from_integer(BigInt::from(x));
        IgusaInvariants::new(r(v[0]), r(v[1]), r(v[2]), r(v[3]))
    }

    pub fn as_array(&self) -> [&BigRational; 4] {
        [&self.i2, &self.i4, &self.i6, &self.i10]
    }

    /// `I_{2k} ↦ c^{2k} I_{2k}`.
    pub fn scaled(&self, c: &BigRational) -> Self {
        let p = |x: &BigRational, k: u32| x * num_traits::pow(c.clone(), k as usize);
        IgusaInvariants::new(p(&self.i2, 2), p(&self.i4, 4), p(&self.i6, 6), p(&self.i10, 10))
    }
}

/// Binary form of degree `c.len() - 1`; `c[i]` multiplies `x^i y^(n-i)`.
#[derive(Clone, Debug)]
struct BinForm {
    c: Vec<BigRational>,
}

fn falling(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

fn fact(n: usize) -> BigInt {
    falling(n, n)
}

impl BinForm {
    fn deg(&self) -> usize {
        self.c.len() - 1
    }

    fn diff(&self, a: usize, b: usize) -> BinForm {
        let n = self.deg();
        let m = n - a - b;
        let mut out = vec![BigRational::zero(); m + 1];
        for i in a..=n {
            let j = n - i;
            if j < b {
                continue;
            }
            out[i - a] = &self.c[i] * BigRational::from_integer(falling(i, a) * falling(j, b));
        }
        BinForm { c: out }
    }

    fn mul(&self, o: &BinForm) -> BinForm {
        let mut out = vec![BigRational::zero(); self.deg() + o.deg() + 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BinForm { c: out }
    }

    fn transvectant(&self, g: &BinForm, k: usize) -> BinForm {
        let (m, n) = (self.deg(), g.deg());
        let mut acc = BinForm { c: vec![BigRational::zero(); m + n - 2 * k + 1] };
        for j in 0..=k {
            let t = self.diff(k - j, j).mul(&g.diff(j, k - j));
            let coef = BigRational::from_integer(crate::arith::binomial(k as u64, j as u64));
            for (a, b) in acc.c.iter_mut().zip(t.c.iter()) {
                if j % 2 == 0 {
                    *a += &coef * b;
                } else {
                    *a -= &coef * b;
                }
            }
        }
        let norm = BigRational::new(fact(m - k) * fact(n - k), fact(m) * fact(n));
        for a in acc.c.iter_mut() {
            *a *= &norm;
        }
        acc
    }

    fn scalar(&self) -> BigRational {
        assert_eq!(self.deg(), 0);
        self.c[0].clone()
    }
}

/// Invariants of a binary sextic given by 7 coefficients `a0..a6` of `x^0..x^6`.
pub fn igusa_clebsch_sextic(coeffs: &[BigRational; 7]) -> IgusaInvariants {
    let f = BinForm { c: coeffs.to_vec() };
    let i = f.transvectant(&f, 4);
    let delta = i.transvectant(&i, 2);
    let y1 = f.transvectant(&i, 4);
    let y2 = i.transvectant(&y1, 2);
    let y3 = i.transvectant(&y2, 2);
    let a = f.transvectant(&f, 6).scalar();
    let b = i.transvectant(&i, 4).scalar();
    let c = i.transvectant(&delta, 4).scalar();
    let d = y3.transvectant(&y1, 2).scalar();
    let k = |v: i64| BigRational::from_integer(BigInt::from(v));
    let a2 = &a * &a;
    let a3 = &a2 * &a;
    let a5 = &a3 * &a2;
    let i2 = k(-120) * &a;
    let i4 = k(-720) * &a2 + k(6750) * &b;
    let i6 = k(8640) * &a3 - k(108000) * &a * &b + k(202500) * &c;
    let i10 = k(-62208) * &a5 + k(972000) * &a3 * &b + k(1620000) * &a2 * &c - k(3037500) * &a * &b * &b - k(6075000) * &b * &c - k(4556250) * &d;
    IgusaInvariants::new(i2, i4, i6, i10)
}

pub fn igusa_clebsch(curve: &CurveModel) -> Result<IgusaInvariants> {
    if curve.disc.is_zero() {
        return Err(Error::Singular);
    }
    let mut c: [BigRational; 7] = Default::default();
    for (k, slot) in c.iter_mut().enumerate() {
        *slot = BigRational::from_integer(curve.f.coeff(k));
    }
    let inv = igusa_clebsch_sextic(&c);
    debug_assert!(!inv.i10.is_zero());
    Ok(inv)
}

/// Same point of weighted projective space `P(2,4,6,10)` over `Q̄`.
///
/// Decided by the cross relations `Q_i^{w_j} P_j^{w_i} = Q_j^{w_i} P_i^{w_j}`
/// (halved weights) together with equal zero patterns.
pub fn weighted_equal(p: &IgusaInvariants, q: &IgusaInvariants) -> bool {
    let w = [1usize, 2, 3, 5];
    let pa = p.as_array();
    let qa = q.as_array();
    for k in 0..4 {
        if pa[k].is_zero() != qa[k].is_zero() {
            return false;
        }
    }
    if pa.iter().all(|x| x.is_zero()) {
        return true;
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            if pa[i].is_zero() || pa[j].is_zero() {
                continue;
            }
            let lhs = num_traits::pow(qa[i].clone(), w[j]) * num_traits::pow(pa[j].clone(), w[i]);
            let rhs = num_traits::pow(qa[j].clone(), w[i]) * num_traits::pow(pa[i].clone(), w[j]);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Absolute invariants `I2⁵/I10, I2³I4/I10, I2²I6/I10` (None when `I10 = 0`).
pub fn absolute_invariants(p: &IgusaInvariants) -> Option<[BigRational; 3]> {
    if p.i10.is_zero() {
        return None;
    }
    let i2_2 = &p.i2 * &p.i2;
    let i2_3 = &i2_2 * &p.i2;
    let i2_5 = &i2_3 * &i2_2;
    Some([&i2_5 / &p.i10, &i2_3 * &p.i4 / &p.i10, &i2_2 * &p.i6 / &p.i10])
}
