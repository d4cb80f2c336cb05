//! Decision procedures on Frobenius data: geometric and base-field
//! irreducibility, the discriminant gcd bound, the split-form test for real
//! multiplication and the search for the field of definition of RM.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::finitefield::{frobenius_data, CurveModel, FrobeniusData};
use crate::intpoly::{galois_sn_certificate, is_irreducible, perfect_square_root, twist, GaloisCertificate, GaloisVerdict};
use crate::numfield::{self, field_discriminant, splits_in, QuadraticField};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTheoryConstants {
    pub exponent_bound: usize,
    pub extension_degree_set: [usize; 6],
    pub field_case_degree_bound: usize,
}

pub const GROUP_CONSTANTS: GroupTheoryConstants =
    GroupTheoryConstants { exponent_bound: 12, extension_degree_set: [1, 2, 3, 4, 6, 12], field_case_degree_bound: 4 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IrreducibilityStatus {
    AbsIrreducible,
    AbsIrreducibleNoQM,
    EndIsZ,
    NoQM,
    Inconclusive,
    /// Base-field variants reported by [`k_irreducibility`].
    BaseSimple,
    BaseSimpleNoQM,
    BaseNoQM,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    IrreducibleQuintic,
    /// An odd prime exactly dividing the (homogeneous) discriminant, together with the
    /// geometric simplicity it needs: `twist_prime` names an irreducible `f_p{12}`, `None`
    /// means `f` is an irreducible quintic.
    DiscValuationOne {
        prime: BigInt,
        twist_prime: Option<u64>,
    },
    Galois(GaloisCertificate),
    /// `f_p{exponent}` is irreducible.
    IrreducibleTwist {
        prime: u64,
        exponent: usize,
    },
    /// `f_p{exponent}` is not the square of a polynomial.
    NonSquareTwist {
        prime: u64,
        exponent: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityVerdict {
    pub status: IrreducibilityStatus,
    pub witness: Option<Witness>,
    /// Largest prime whose Frobenius polynomial was examined (0 if none).
    pub bound_used: u64,
}

#[derive(Clone, Debug)]
pub struct IrreducibilityOptions {
    /// Step 2 runs only when `|disc f|` is at most this.
    pub factor_cap: BigInt,
    pub galois_budget: u64,
}

impl Default for IrreducibilityOptions {
    fn default() -> Self {
        IrreducibilityOptions { factor_cap: num_traits::pow(BigInt::from(10), 30), galois_budget: 200 }
    }
}

/// Outcome of scanning `f_p{m}` over the good odd primes `<= bound`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistScan {
    pub first_irreducible: Option<u64>,
    pub first_non_square: Option<u64>,
    pub bound_used: u64,
}

/// Scans primes in ascending order and stops at the first irreducible twist.
pub fn twist_scan(curve: &CurveModel, bound: u64, exponent: usize) -> Result<TwistScan> {
    let mut out = TwistScan::default();
    for p in arith::odd_primes_up_to(bound) {
        if !curve.is_good_prime(p) {
            continue;
        }
        let fd = frobenius_data(curve, p)?;
        out.bound_used = p;
        let t = twist(&fd.weil_poly, exponent)?;
        if is_irreducible(&t)? {
            out.first_irreducible = Some(p);
            out.first_non_square.get_or_insert(p);
            break;
        }
        if out.first_non_square.is_none() && perfect_square_root(&t)?.is_none() {
            out.first_non_square = Some(p);
        }
    }
    Ok(out)
}

fn step4_verdict(scan: &TwistScan, exponent: usize, base: bool) -> IrreducibilityVerdict {
    use IrreducibilityStatus::*;
    let (irr, noqm) = if base { (BaseSimpleNoQM, BaseNoQM) } else { (AbsIrreducibleNoQM, NoQM) };
    if let Some(p) = scan.first_irreducible {
        return IrreducibilityVerdict { status: irr, witness: Some(Witness::IrreducibleTwist { prime: p, exponent }), bound_used: scan.bound_used };
    }
    if let Some(p) = scan.first_non_square {
        return IrreducibilityVerdict { status: noqm, witness: Some(Witness::NonSquareTwist { prime: p, exponent }), bound_used: scan.bound_used };
    }
    IrreducibilityVerdict { status: Inconclusive, witness: None, bound_used: scan.bound_used }
}

/// Odd prime dividing `disc` exactly once, if `disc` factors completely.
pub fn valuation_one_prime(disc: &BigInt) -> Option<BigInt> {
    let fac = numfield::factor(disc);
    fac.primes.iter().find(|(p, e)| *e == 1 && *p != BigInt::from(2)).map(|(p, _)| p.clone())
}

/// Discriminant of `f` as a binary sextic: a quintic has a root at infinity.
pub fn homogeneous_disc(curve: &CurveModel) -> BigInt {
    if curve.f.deg() == 5 {
        let lc = curve.f.lc();
        &curve.disc * &lc * &lc
    } else {
        curve.disc.clone()
    }
}

/// Hall's criterion, given geometric simplicity: one node at an odd prime means toric rank
/// one, and a simple `End⁰` acting faithfully on a rank-one character group is `Q`.
/// A split Jacobian can satisfy the valuation condition (`E₁ × E₂` with one factor
/// multiplicative), so without simplicity this proves nothing.
pub fn hall_witness(curve: &CurveModel, opts: &IrreducibilityOptions, simple: &Witness) -> Option<Witness> {
    let twist_prime = match simple {
        Witness::IrreducibleQuintic => None,
        Witness::IrreducibleTwist { prime, exponent } if *exponent == GROUP_CONSTANTS.exponent_bound => Some(*prime),
        _ => return None,
    };
    let d = homogeneous_disc(curve);
    if d.abs() > opts.factor_cap {
        return None;
    }
    valuation_one_prime(&d).map(|prime| Witness::DiscValuationOne { prime, twist_prime })
}

/// Zarhin's criterion: `Gal(f)` is `S_n` or `A_n`.
pub fn zarhin_witness(curve: &CurveModel, opts: &IrreducibilityOptions) -> Result<Option<Witness>> {
    let cert = galois_sn_certificate(&curve.f, opts.galois_budget)?;
    Ok((cert.verdict != GaloisVerdict::Unknown).then_some(Witness::Galois(cert)))
}

/// A proof of `End = Z` for a curve already known to be geometrically simple via `simple`.
pub fn end_is_z_witness(curve: &CurveModel, opts: &IrreducibilityOptions, simple: &Witness) -> Result<Option<Witness>> {
    if let Some(w) = hall_witness(curve, opts, simple) {
        return Ok(Some(w));
    }
    zarhin_witness(curve, opts)
}

/// Geometric irreducibility test with default options.
pub fn geometric_irreducibility(curve: &CurveModel, bound: u64) -> Result<IrreducibilityVerdict> {
    geometric_irreducibility_with(curve, bound, &IrreducibilityOptions::default())
}

pub fn geometric_irreducibility_with(curve: &CurveModel, bound: u64, opts: &IrreducibilityOptions) -> Result<IrreducibilityVerdict> {
    use IrreducibilityStatus::*;
    if bound < 3 {
        return Err(Error::Invalid("bound must be at least 3".into()));
    }
    let f = &curve.f;
    if f.deg() == 5 && is_irreducible(f)? {
        return Ok(IrreducibilityVerdict { status: AbsIrreducible, witness: Some(Witness::IrreducibleQuintic), bound_used: 0 });
    }
    if let Some(w) = zarhin_witness(curve, opts)? {
        return Ok(IrreducibilityVerdict { status: EndIsZ, witness: Some(w), bound_used: 0 });
    }
    let scan = twist_scan(curve, bound, GROUP_CONSTANTS.exponent_bound)?;
    let v = step4_verdict(&scan, GROUP_CONSTANTS.exponent_bound, false);
    if v.status == AbsIrreducibleNoQM {
        // step 2 deferred until simplicity is known
        if let Some(w) = hall_witness(curve, opts, v.witness.as_ref().expect("step 4 witness")) {
            return Ok(IrreducibilityVerdict { status: EndIsZ, witness: Some(w), bound_used: v.bound_used });
        }
    }
    Ok(v)
}

/// The base-field variant: `f_p` in place of `f_p{12}`.
pub fn k_irreducibility(curve: &CurveModel, bound: u64) -> Result<IrreducibilityVerdict> {
    let scan = twist_scan(curve, bound, 1)?;
    Ok(step4_verdict(&scan, 1, true))
}

/// [`k_irreducibility`] over a quadratic field `K`: places of norm `<= bound`, where a split
/// prime contributes `f_p` and an inert one `f_p{2}`; ramified primes are skipped.
pub fn k_irreducibility_over(curve: &CurveModel, bound: u64, k: &QuadraticField) -> Result<IrreducibilityVerdict> {
    use IrreducibilityStatus::*;
    let d = k.fundamental_discriminant;
    let mut non_square = None;
    let mut used = 0;
    for p in arith::odd_primes_up_to(bound) {
        if !curve.is_good_prime(p) || d.rem_euclid(p as i64) == 0 {
            continue;
        }
        let exponent = if numfield::splits_in(d, p)? { 1 } else { 2 };
        if exponent == 2 && p * p > bound {
            continue;
        }
        used = p;
        let t = twist(&frobenius_data(curve, p)?.weil_poly, exponent)?;
        if is_irreducible(&t)? {
            return Ok(IrreducibilityVerdict {
                status: BaseSimpleNoQM,
                witness: Some(Witness::IrreducibleTwist { prime: p, exponent }),
                bound_used: used,
            });
        }
        if non_square.is_none() && perfect_square_root(&t)?.is_none() {
            non_square = Some(Witness::NonSquareTwist { prime: p, exponent });
        }
    }
    Ok(match non_square {
        Some(w) => IrreducibilityVerdict { status: BaseNoQM, witness: Some(w), bound_used: used },
        None => IrreducibilityVerdict { status: Inconclusive, witness: None, bound_used: used },
    })
}

/// Re-runs a witness on its own; `true` when it still supports its claim.
pub fn verify_witness(curve: &CurveModel, w: &Witness) -> Result<bool> {
    Ok(match w {
        Witness::IrreducibleQuintic => curve.f.deg() == 5 && is_irreducible(&curve.f)?,
        Witness::DiscValuationOne { prime, twist_prime } => {
            let p = prime.to_u64().ok_or_else(|| Error::Invalid("prime too large".into()))?;
            let simple = match twist_prime {
                None => Witness::IrreducibleQuintic,
                Some(q) => Witness::IrreducibleTwist { prime: *q, exponent: GROUP_CONSTANTS.exponent_bound },
            };
            p % 2 == 1 && numfield::is_prime(prime) && arith::valuation(&homogeneous_disc(curve), p) == 1 && verify_witness(curve, &simple)?
        }
        Witness::Galois(c) => {
            let again = galois_sn_certificate(&curve.f, c.witnesses.iter().map(|w| w.0).max().unwrap_or(2))?;
            again.verdict == c.verdict
        }
        Witness::IrreducibleTwist { prime, exponent } => {
            let fd = frobenius_data(curve, *prime)?;
            is_irreducible(&twist(&fd.weil_poly, *exponent)?)?
        }
        Witness::NonSquareTwist { prime, exponent } => {
            let fd = frobenius_data(curve, *prime)?;
            perfect_square_root(&twist(&fd.weil_poly, *exponent)?)?.is_none()
        }
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiscMode {
    /// Admit places in Ω′: ordinary with `f_p{4}` irreducible.
    Geometric,
    /// Admit places where `f_p` is irreducible.
    OverK,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiscVerdict {
    EndIsZ,
    BoundOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiscBoundOptions {
    /// Stop as soon as the gcd drops to 24 or below.
    pub early_exit: bool,
}

impl Default for DiscBoundOptions {
    fn default() -> Self {
        DiscBoundOptions { early_exit: true }
    }
}

pub const EARLY_EXIT_THRESHOLD: u64 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscBoundResult {
    /// gcd of the admitted Δ(v); 0 when no place was admitted.
    pub d_of_b: BigInt,
    pub cm_excluded: bool,
    pub verdict: DiscVerdict,
    pub rm_candidates: Vec<QuadraticField>,
    pub places_used: Vec<u64>,
    /// Admitted places dropped because `disc(f_p)` did not factor.
    pub places_skipped: Vec<u64>,
    pub deltas: Vec<(u64, BigInt)>,
    pub early_exit_taken: bool,
}

/// Positive fundamental discriminants `D` with `D² | d`.
pub fn rm_candidates_for(d: &BigInt) -> Vec<QuadraticField> {
    if d.is_zero() {
        return Vec::new();
    }
    let fac = numfield::factor(d);
    let mut s = BigInt::one();
    for (p, e) in &fac.primes {
        s *= num_traits::pow(p.clone(), (*e / 2) as usize);
    }
    let Ok(divs) = arith::positive_divisors(&s) else { return Vec::new() };
    divs.into_iter()
        .filter_map(|dv| dv.to_i64())
        .filter(|&dv| numfield::is_fundamental_discriminant(dv))
        .map(|dv| QuadraticField { fundamental_discriminant: dv })
        .collect()
}

/// Running gcd of field discriminants over the admitted places of an ascending stream.
pub fn disc_bound<I, F>(stream: I, place_filter: F, mode: DiscMode, opts: DiscBoundOptions) -> Result<DiscBoundResult>
where
    I: IntoIterator<Item = FrobeniusData>,
    F: Fn(&FrobeniusData) -> bool,
{
    disc_bound_fallible(stream.into_iter().map(Ok), place_filter, mode, opts)
}

/// [`disc_bound`] over a lazily computed curve stream, so early exit saves point counts.
pub fn disc_bound_curve<F>(curve: &CurveModel, bound: u64, place_filter: F, mode: DiscMode, opts: DiscBoundOptions) -> Result<DiscBoundResult>
where
    F: Fn(&FrobeniusData) -> bool,
{
    disc_bound_fallible(crate::finitefield::frobenius_stream(curve, bound), place_filter, mode, opts)
}

pub fn disc_bound_fallible<I, F>(stream: I, place_filter: F, mode: DiscMode, opts: DiscBoundOptions) -> Result<DiscBoundResult>
where
    I: IntoIterator<Item = Result<FrobeniusData>>,
    F: Fn(&FrobeniusData) -> bool,
{
    let mut d = BigInt::zero();
    let mut distinct = BTreeSet::new();
    let mut out = DiscBoundResult {
        d_of_b: BigInt::zero(),
        cm_excluded: false,
        verdict: DiscVerdict::BoundOnly,
        rm_candidates: Vec::new(),
        places_used: Vec::new(),
        places_skipped: Vec::new(),
        deltas: Vec::new(),
        early_exit_taken: false,
    };
    let mut last_p = 0;
    for fd in stream {
        let fd = fd?;
        assert!(fd.p > last_p, "Frobenius stream must be ascending");
        last_p = fd.p;
        if !place_filter(&fd) {
            continue;
        }
        let admitted = match mode {
            DiscMode::Geometric => {
                if fd.in_omega_prime {
                    assert!(fd.ordinary);
                    assert!(is_irreducible(&twist(&fd.weil_poly, GROUP_CONSTANTS.field_case_degree_bound)?)?);
                }
                fd.in_omega_prime
            }
            DiscMode::OverK => is_irreducible(&fd.weil_poly)?,
        };
        if !admitted {
            continue;
        }
        let delta = match field_discriminant(&fd.weil_poly) {
            Ok(v) => v.abs(),
            Err(Error::PartialFactorization(_)) => {
                out.places_skipped.push(fd.p);
                continue;
            }
            Err(e) => return Err(e),
        };
        d = d.gcd(&delta);
        distinct.insert(delta.clone());
        out.places_used.push(fd.p);
        out.deltas.push((fd.p, delta));
        if opts.early_exit && d <= BigInt::from(EARLY_EXIT_THRESHOLD) {
            out.early_exit_taken = true;
            break;
        }
    }
    out.cm_excluded = distinct.len() >= 2;
    let early = out.early_exit_taken;
    if d.is_one() || (early && !d.is_zero()) {
        out.verdict = DiscVerdict::EndIsZ;
    }
    if out.cm_excluded {
        out.rm_candidates = rm_candidates_for(&d);
    }
    out.d_of_b = d;
    Ok(out)
}

/// Frobenius data for the good odd primes `<= bound`, ascending.
pub fn collect_frobenius(curve: &CurveModel, bound: u64) -> Result<Vec<FrobeniusData>> {
    crate::finitefield::frobenius_stream(curve, bound).collect()
}

// ---------------------------------------------------------------------------

/// `a + b√m` with rational parts.
#[derive(Clone, Debug, PartialEq)]
struct Surd {
    a: BigRational,
    b: BigRational,
}

impl Surd {
    fn int(a: BigInt) -> Self {
        Surd { a: BigRational::from_integer(a), b: BigRational::zero() }
    }
    fn add(&self, o: &Surd) -> Surd {
        Surd { a: &self.a + &o.a, b: &self.b + &o.b }
    }
    fn mul(&self, o: &Surd, m: &BigRational) -> Surd {
        Surd { a: &self.a * &o.a + &self.b * &o.b * m, b: &self.a * &o.b + &self.b * &o.a }
    }
}

/// `(W, Z)` such that `f_p{2} = (x² - (W+Z√m)/2·x + p²)(x² - (W-Z√m)/2·x + p²)`.
pub fn rm_split_witness(fd: &FrobeniusData, m: i64) -> Result<Option<(BigInt, BigInt)>> {
    if m <= 1 || arith::squarefree_part_sign(m) != m {
        return Err(Error::Invalid(format!("{} is not a real quadratic radicand", m)));
    }
    let g = twist(&fd.weil_poly, 2)?;
    let p2 = BigInt::from(fd.p) * BigInt::from(fd.p);
    let w2 = -g.coeff(3);
    let half_allowed = m.rem_euclid(4) == 1;
    if !half_allowed && w2.is_odd() {
        return Ok(None);
    }
    // m Z² = 8p² + W² - 4c₂ with W = 2w, Z = 2z
    let rhs = BigInt::from(8) * &p2 + &w2 * &w2 - BigInt::from(4) * g.coeff(2);
    let bm = BigInt::from(m);
    if rhs.is_negative() || !rhs.is_multiple_of(&bm) {
        return Ok(None);
    }
    let Some(z2) = arith::exact_sqrt(&(&rhs / &bm)) else { return Ok(None) };
    if half_allowed {
        if (&w2 - &z2).is_odd() {
            return Ok(None);
        }
    } else if z2.is_odd() {
        return Ok(None);
    }
    let mr = BigRational::from_integer(bm);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let t1 = Surd { a: -BigRational::from_integer(w2.clone()) * &half, b: -BigRational::from_integer(z2.clone()) * &half };
    let t2 = Surd { a: t1.a.clone(), b: -t1.b.clone() };
    let q1 = [Surd::int(p2.clone()), t1, Surd::int(BigInt::one())];
    let q2 = [Surd::int(p2.clone()), t2, Surd::int(BigInt::one())];
    let mut prod = vec![Surd::int(BigInt::zero()); 5];
    for i in 0..3 {
        for j in 0..3 {
            prod[i + j] = prod[i + j].add(&q1[i].mul(&q2[j], &mr));
        }
    }
    let ok = (0..5).all(|k| prod[k].b.is_zero() && prod[k].a == BigRational::from_integer(g.coeff(k)));
    Ok(if ok { Some((w2, z2)) } else { None })
}

/// Does `f_p{2}` split over ℚ(√m) in the shape forced by real multiplication?
pub fn rm_split_test(fd: &FrobeniusData, m: i64) -> bool {
    matches!(rm_split_witness(fd, m), Ok(Some(_)))
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldOfDefinition {
    /// The unique survivor, when exactly one candidate survives.
    pub field: Option<QuadraticField>,
    pub rm_disc: i64,
    pub bad_set: Vec<u64>,
    pub candidates: Vec<QuadraticField>,
    /// Eliminated candidates with the restricted gcd that eliminated them.
    pub eliminated: Vec<(QuadraticField, BigInt)>,
    pub survivors: Vec<QuadraticField>,
    pub bound: u64,
}

/// Primes where the model may fail to be semistable: 2, odd `p` with `p² | disc`, odd `p | lc`.
pub fn non_semistable_set(curve: &CurveModel) -> Result<Vec<u64>> {
    let fac = numfield::factor(&curve.disc);
    if !fac.is_complete() {
        return Err(Error::PartialFactorization(fac.cofactor.to_string()));
    }
    let mut s: BTreeSet<u64> = BTreeSet::new();
    s.insert(2);
    for (p, e) in &fac.primes {
        if *e >= 2 {
            s.insert(p.to_u64().ok_or_else(|| Error::Invalid("bad prime too large".into()))?);
        }
    }
    let lcf = numfield::factor(&curve.f.lc());
    for (p, _) in &lcf.primes {
        s.insert(p.to_u64().ok_or_else(|| Error::Invalid("bad prime too large".into()))?);
    }
    Ok(s.into_iter().collect())
}

/// Finds the minimal field of definition of potential RM among quadratic fields
/// unramified outside the non-semistable primes.
pub fn rm_field_of_definition(curve: &CurveModel, rm_disc: i64, bound: u64) -> Result<FieldOfDefinition> {
    let bad_set = non_semistable_set(curve)?;
    let candidates = numfield::quadratic_fields_unramified_outside(&bad_set);
    let frob = collect_frobenius(curve, bound)?;
    let mut eliminated = Vec::new();
    let mut survivors = Vec::new();
    for k in &candidates {
        let dk = k.fundamental_discriminant;
        let res = disc_bound(
            frob.iter().cloned(),
            |fd| (dk.rem_euclid(fd.p as i64) != 0) && splits_in(dk, fd.p).unwrap_or(false),
            DiscMode::OverK,
            DiscBoundOptions { early_exit: true },
        )?;
        if res.verdict == DiscVerdict::EndIsZ {
            eliminated.push((*k, res.d_of_b));
        } else {
            survivors.push(*k);
        }
    }
    let field = if survivors.len() == 1 { Some(survivors[0]) } else { None };
    Ok(FieldOfDefinition { field, rm_disc, bad_set, candidates, eliminated, survivors, bound })
}

/// Restricted gcd over places satisfying `filter`, without early exit.
pub fn restricted_gcd(frob: &[FrobeniusData], filter: impl Fn(&FrobeniusData) -> bool) -> Result<DiscBoundResult> {
    disc_bound(frob.iter().cloned(), filter, DiscMode::OverK, DiscBoundOptions { early_exit: false })
}

/// Δ(v) for each place, keyed by prime; convenience for reports.
pub fn delta_table(res: &DiscBoundResult) -> BTreeMap<u64, String> {
    res.deltas.iter().map(|(p, d)| (*p, d.to_string())).collect()
}
