//! Humbert-surface equation files and membership evaluation.
//!
//! ```text
//! # comment
//! discriminant=8
//! coords=igusa            (or satake)
//! convention=igusa-clebsch-transvectant-v1
//! 1 1 0 0 : -3/2          (igusa: e2 e4 e6 e10 : coeff)
//! 1 0 0 0 0 0 : 1         (satake: e1 .. e6 : coeff)
//! [satake_transform]
//! s1 1 0 0 0 : 21         (s_k e2 e4 e6 e10 : coeff)
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::fixed::{monic_roots, Fx};
use super::igusa::{IgusaInvariants, CONVENTION_ID, WEIGHTS};
use crate::error::parse_err;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoordinateSystem {
    Igusa,
    Satake,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub coeff: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HumbertEquation {
    pub discriminant: u64,
    pub coordinate_system: CoordinateSystem,
    pub monomials: Vec<Monomial>,
    pub convention_id: String,
    /// Power sums `s1..s6` of the Satake coordinates as polynomials in the Igusa invariants.
    pub satake_transform: Option<Vec<Vec<Monomial>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    On,
    Off,
    NumericOn,
    NumericOff,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub membership: Membership,
    /// False when some nonvanishing normalized value lies within `10·tol`.
    pub reliable: bool,
    pub min_value: Option<f64>,
    pub min_nonvanishing: Option<f64>,
    pub root_error_bound: Option<f64>,
}

pub const DEFAULT_TOL: f64 = 1e-20;

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

fn parse_monomial(line: &str, lineno: usize, nvars: usize) -> Result<Monomial> {
    let (lhs, rhs) = line.split_once(':').ok_or_else(|| parse_err(lineno, "expected ':'"))?;
    let exps: Vec<u32> =
        lhs.split_whitespace().map(|t| t.parse::<u32>().map_err(|_| parse_err(lineno, format!("bad exponent '{}'", t)))).collect::<Result<_>>()?;
    if exps.len() != nvars {
        return Err(parse_err(lineno, format!("expected {} exponents, found {}", nvars, exps.len())));
    }
    let coeff = parse_rational(rhs).ok_or_else(|| parse_err(lineno, format!("bad coefficient '{}'", rhs.trim())))?;
    Ok(Monomial { exps, coeff })
}

fn weighted_degree(m: &Monomial) -> u32 {
    m.exps.iter().zip(WEIGHTS.iter()).map(|(e, w)| e * w).sum()
}

fn eval_igusa_poly(ms: &[Monomial], p: &IgusaInvariants) -> BigRational {
    let vals = p.as_array();
    let mut acc = BigRational::zero();
    for m in ms {
        let mut t = m.coeff.clone();
        for (v, e) in vals.iter().zip(m.exps.iter()) {
            t *= num_traits::pow((*v).clone(), *e as usize);
        }
        acc += t;
    }
    acc
}

impl HumbertEquation {
    pub fn parse(text: &str) -> Result<Self> {
        let mut disc = None;
        let mut coords = None;
        let mut conv = None;
        let mut monomials = Vec::new();
        let mut transform: Option<Vec<Vec<Monomial>>> = None;
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line == "[satake_transform]" {
                transform = Some(vec![Vec::new(); 6]);
                continue;
            }
            if let Some((k, v)) = line.split_once('=') {
                let v = v.trim();
                match k.trim() {
                    "discriminant" => disc = Some(v.parse::<u64>().map_err(|_| parse_err(lineno, "bad discriminant"))?),
                    "coords" => {
                        coords = Some(match v {
                            "igusa" => CoordinateSystem::Igusa,
                            "satake" => CoordinateSystem::Satake,
                            _ => return Err(parse_err(lineno, format!("unknown coords '{}'", v))),
                        })
                    }
                    "convention" => conv = Some(v.to_string()),
                    other => return Err(parse_err(lineno, format!("unknown key '{}'", other))),
                }
                continue;
            }
            if let Some(t) = transform.as_mut() {
                let rest = line.strip_prefix('s').ok_or_else(|| parse_err(lineno, "expected 's<k>' in transform block"))?;
                let (k, body) = rest.split_at(rest.find(char::is_whitespace).unwrap_or(rest.len()));
                let k: usize = k.parse().map_err(|_| parse_err(lineno, "bad power-sum index"))?;
                if !(1..=6).contains(&k) {
                    return Err(parse_err(lineno, "power-sum index must be 1..6"));
                }
                t[k - 1].push(parse_monomial(body, lineno, 4)?);
                continue;
            }
            let nvars = match coords {
                Some(CoordinateSystem::Igusa) => 4,
                Some(CoordinateSystem::Satake) => 6,
                None => return Err(parse_err(lineno, "coords must precede monomials")),
            };
            monomials.push(parse_monomial(line, lineno, nvars)?);
        }
        let discriminant = disc.ok_or_else(|| parse_err(0, "missing discriminant"))?;
        if discriminant == 0 || discriminant % 4 > 1 {
            return Err(Error::NotDiscriminant(discriminant as i64));
        }
        let coordinate_system = coords.ok_or_else(|| parse_err(0, "missing coords"))?;
        let convention_id = conv.ok_or_else(|| parse_err(0, "missing convention"))?;
        let eq = HumbertEquation { discriminant, coordinate_system, monomials, convention_id, satake_transform: transform };
        eq.validate()?;
        Ok(eq)
    }

    pub fn validate(&self) -> Result<()> {
        if self.monomials.is_empty() {
            return Err(Error::Invalid("equation has no monomials".into()));
        }
        match self.coordinate_system {
            CoordinateSystem::Igusa => {
                let d = weighted_degree(&self.monomials[0]);
                if let Some(m) = self.monomials.iter().find(|m| weighted_degree(m) != d) {
                    return Err(Error::NotHomogeneous(format!("monomial {:?} has weight {}, expected {}", m.exps, weighted_degree(m), d)));
                }
            }
            CoordinateSystem::Satake => {
                let t = self.satake_transform.as_ref().ok_or(Error::MissingTransform)?;
                if let Some(k) = t.iter().position(|s| s.is_empty()) {
                    return Err(Error::Invalid(format!("power sum s{} not given", k + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {}", path.display(), e)))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "discriminant={}", self.discriminant);
        let _ = writeln!(
            s,
            "coords={}",
            match self.coordinate_system {
                CoordinateSystem::Igusa => "igusa",
                CoordinateSystem::Satake => "satake",
            }
        );
        let _ = writeln!(s, "convention={}", self.convention_id);
        let line = |m: &Monomial| {
            let e: Vec<String> = m.exps.iter().map(|e| e.to_string()).collect();
            format!("{} : {}", e.join(" "), m.coeff)
        };
        for m in &self.monomials {
            let _ = writeln!(s, "{}", line(m));
        }
        if let Some(t) = &self.satake_transform {
            let _ = writeln!(s, "[satake_transform]");
            for (k, ms) in t.iter().enumerate() {
                for m in ms {
                    let _ = writeln!(s, "s{} {}", k + 1, line(m));
                }
            }
        }
        s
    }

    /// Exact value of an Igusa-coordinate equation.
    pub fn evaluate_igusa(&self, p: &IgusaInvariants) -> Result<BigRational> {
        if self.coordinate_system != CoordinateSystem::Igusa {
            return Err(Error::Invalid("not an Igusa-coordinate equation".into()));
        }
        Ok(eval_igusa_poly(&self.monomials, p))
    }

    pub fn power_sums(&self, p: &IgusaInvariants) -> Result<[BigRational; 6]> {
        let t = self.satake_transform.as_ref().ok_or(Error::MissingTransform)?;
        let mut out: [BigRational; 6] = Default::default();
        for (k, ms) in t.iter().enumerate().take(6) {
            out[k] = eval_igusa_poly(ms, p);
        }
        Ok(out)
    }
}

/// Elementary symmetric functions `e1..e6` from power sums via Newton's identities.
pub fn newton_elementary(s: &[BigRational; 6]) -> [BigRational; 6] {
    let mut e: Vec<BigRational> = vec![BigRational::one()];
    for k in 1..=6 {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let t = &e[k - i] * &s[i - 1];
            if i % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        e.push(acc / BigRational::from_integer(BigInt::from(k)));
    }
    let mut out: [BigRational; 6] = Default::default();
    out.clone_from_slice(&e[1..]);
    out
}

/// Coefficients `c0..c5` of the monic sextic with the given power sums.
pub fn satake_polynomial(s: &[BigRational; 6]) -> Vec<BigRational> {
    let e = newton_elementary(s);
    // x^6 - e1 x^5 + e2 x^4 - ... + e6
    (0..6)
        .map(|i| {
            let k = 6 - i;
            if k % 2 == 0 {
                e[k - 1].clone()
            } else {
                -e[k - 1].clone()
            }
        })
        .collect()
}

/// All orderings of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Normalized `|E(x_σ)| / Σ |c_m| ∏ |x_σ(i)|^{e_i}` for one ordering of the roots.
pub fn normalized_value(ms: &[Monomial], roots: &[Fx], perm: &[usize]) -> f64 {
    let mut val = Fx::zero();
    let mut norm = 0.0f64;
    for m in ms {
        let c = Fx::from_rational(&m.coeff);
        let mut t = c.clone();
        let mut mag = m.coeff.abs().to_f64().unwrap_or(f64::INFINITY);
        for (i, &e) in m.exps.iter().enumerate() {
            if e > 0 {
                let z = &roots[perm[i]];
                t = t.mul(&z.pow(e));
                mag *= z.abs().powi(e as i32);
            }
        }
        val = val.add(&t);
        norm += mag;
    }
    if norm == 0.0 {
        return 0.0;
    }
    val.abs() / norm
}

pub fn satake_values(eq: &HumbertEquation, roots: &[Fx]) -> Vec<f64> {
    permutations(roots.len()).iter().map(|p| normalized_value(&eq.monomials, roots, p)).collect()
}

pub fn satake_roots(eq: &HumbertEquation, p: &IgusaInvariants) -> Result<(Vec<Fx>, f64)> {
    let s = eq.power_sums(p)?;
    let poly = satake_polynomial(&s);
    let r = monic_roots(&poly)?;
    let scale = r.roots.iter().map(|z| z.abs()).fold(1.0f64, f64::max);
    if r.error_bound.is_nan() || r.error_bound > 1e-30 * scale {
        return Err(Error::NoConvergence);
    }
    Ok((r.roots, r.error_bound))
}

pub fn humbert_membership(point: &IgusaInvariants, eq: &HumbertEquation, tol: f64) -> Result<MembershipReport> {
    if eq.convention_id != CONVENTION_ID {
        return Err(Error::ConventionMismatch { expected: CONVENTION_ID.into(), found: eq.convention_id.clone() });
    }
    match eq.coordinate_system {
        CoordinateSystem::Igusa => {
            let v = eq.evaluate_igusa(point)?;
            Ok(MembershipReport {
                membership: if v.is_zero() { Membership::On } else { Membership::Off },
                reliable: true,
                min_value: None,
                min_nonvanishing: None,
                root_error_bound: None,
            })
        }
        CoordinateSystem::Satake => {
            let (roots, eb) = satake_roots(eq, point)?;
            let vals = satake_values(eq, &roots);
            let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let min_nv = vals.iter().cloned().filter(|v| *v >= tol).fold(f64::INFINITY, f64::min);
            let min_nv = if min_nv.is_finite() { Some(min_nv) } else { None };
            Ok(MembershipReport {
                membership: if min < tol { Membership::NumericOn } else { Membership::NumericOff },
                reliable: min_nv.is_none_or(|m| m > 10.0 * tol),
                min_value: Some(min),
                min_nonvanishing: min_nv,
                root_error_bound: Some(eb),
            })
        }
    }
}

/// Loads every `<D>.eq` under `dir`, keyed by discriminant.
pub fn load_humbert_dir(dir: &Path) -> Result<BTreeMap<u64, HumbertEquation>> {
    let mut out = BTreeMap::new();
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Invalid(format!("{}: {}", dir.display(), e)))?;
    let mut paths: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
    paths.sort();
    for path in paths {
        if path.extension().and_then(|s| s.to_str()) != Some("eq") {
            continue;
        }
        let eq = HumbertEquation::load(&path)?;
        out.insert(eq.discriminant, eq);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_roundtrip() {
        // roots 1..6
        let s: [BigRational; 6] = std::array::from_fn(|k| BigRational::from_integer((1..=6).map(|j: i64| BigInt::from(j).pow(k as u32 + 1)).sum()));
        let c = satake_polynomial(&s);
        assert_eq!(c[0], BigRational::from_integer(BigInt::from(720)));
        assert_eq!(c[5], BigRational::from_integer(BigInt::from(-21)));
    }

    #[test]
    fn perms() {
        let p = permutations(6);
        assert_eq!(p.len(), 720);
        assert_eq!(p[1], vec![0, 1, 2, 3, 5, 4]);
    }

    #[test]
    fn inhomogeneous_rejected() {
        let t = "discriminant=5\ncoords=igusa\nconvention=x\n1 0 0 0 : 1\n0 1 0 0 : 1\n";
        assert!(matches!(HumbertEquation::parse(t), Err(Error::NotHomogeneous(_))));
    }
}
