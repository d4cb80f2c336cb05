//! End-to-end classification of a curve and the small-coefficient survey.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::endotests::{
    self, disc_bound_curve, geometric_irreducibility, rm_field_of_definition, twist_scan, DiscBoundOptions, DiscMode, DiscVerdict,
    IrreducibilityOptions, IrreducibilityStatus, Witness, GROUP_CONSTANTS,
};
use crate::finitefield::CurveModel;
use crate::intpoly::IntPoly;
use crate::moduli::{self, humbert, igusa_clebsch, CmRecord, HumbertEquation, Membership};
use crate::numfield::QuadraticField;
use crate::qforms::{self, QuaternionOrderDescriptor};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    pub b_irred: u64,
    pub b_disc: u64,
    pub data_dir: Option<PathBuf>,
    pub tol: f64,
    pub timings: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig { b_irred: 59, b_disc: 200, data_dir: None, tol: humbert::DEFAULT_TOL, timings: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    Trivial,
    Rm { disc: i64, order_index: Option<u64> },
    Cm { field_disc: Option<i64>, label: Option<String> },
    Decomposable { n: Option<u64> },
    Qm { descriptor: Option<QuaternionOrderDescriptor> },
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofStatus {
    ProvenUpper,
    ProvenLower,
    ProvenBoth,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub kind: String,
    pub detail: String,
}

fn ev(kind: &str, detail: impl Into<String>) -> Evidence {
    Evidence { kind: kind.into(), detail: detail.into() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveEcho {
    pub f: String,
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub convention_id: String,
    pub curve: CurveEcho,
    pub classification: Classification,
    pub proof_status: ProofStatus,
    pub evidence: Vec<Evidence>,
    pub bounds_used: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_of_definition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

impl AnalysisReport {
    /// 0 proven, 2 heuristic or one-sided, 3 undetermined.
    pub fn exit_code(&self) -> i32 {
        match (&self.classification, self.proof_status) {
            (Classification::Undetermined, _) => 3,
            (_, ProofStatus::ProvenBoth) => 0,
            _ => 2,
        }
    }
}

/// Humbert equations and CM records found under a data directory.
#[derive(Clone, Debug, Default)]
pub struct DataSet {
    pub humbert: BTreeMap<u64, HumbertEquation>,
    pub cm: Vec<CmRecord>,
}

impl DataSet {
    /// Reads `humbert/*.eq` and `cm/list.txt`; both are optional.
    pub fn load(dir: &Path) -> Result<Self> {
        let mut out = DataSet::default();
        let h = dir.join("humbert");
        if h.is_dir() {
            out.humbert = humbert::load_humbert_dir(&h)?;
        }
        let c = dir.join("cm").join("list.txt");
        if c.is_file() {
            out.cm = moduli::load_cm_list(&c)?;
        }
        Ok(out)
    }
}

/// `Some(true/false)` when an equation for `H_D` is available and decisive.
fn membership_of(data: &DataSet, point: &moduli::IgusaInvariants, d: u64, tol: f64, evidence: &mut Vec<Evidence>) -> Result<Option<bool>> {
    let Some(eq) = data.humbert.get(&d) else { return Ok(None) };
    let r = moduli::humbert_membership(point, eq, tol)?;
    let on = match r.membership {
        Membership::On | Membership::NumericOn => true,
        Membership::Off | Membership::NumericOff => false,
    };
    if !r.reliable {
        evidence.push(ev("humbert_unreliable", format!("H_{}: separation audit failed", d)));
        return Ok(None);
    }
    Ok(Some(on))
}

fn membership_map(
    data: &DataSet,
    point: &moduli::IgusaInvariants,
    keys: impl Iterator<Item = u64>,
    tol: f64,
    evidence: &mut Vec<Evidence>,
) -> Result<BTreeMap<u64, bool>> {
    let mut m = BTreeMap::new();
    for d in keys {
        if let Some(b) = membership_of(data, point, d, tol, evidence)? {
            m.insert(d, b);
        }
    }
    Ok(m)
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::IrreducibleQuintic => "f is an irreducible quintic".into(),
        Witness::DiscValuationOne { prime, twist_prime } => {
            let simple = match twist_prime {
                Some(q) => format!("f_{}{{12}} irreducible", q),
                None => "f is an irreducible quintic".to_string(),
            };
            format!("odd prime {} divides disc(f) exactly once and {}", prime, simple)
        }
        Witness::Galois(c) => format!("Galois group certified {:?} by {} primes", c.verdict, c.witnesses.len()),
        Witness::IrreducibleTwist { prime, exponent } => format!("f_{}{{{}}} irreducible", prime, exponent),
        Witness::NonSquareTwist { prime, exponent } => format!("f_{}{{{}}} not a square", prime, exponent),
    }
}

pub fn analyze(curve: &CurveModel, cfg: &AnalysisConfig) -> Result<AnalysisReport> {
    let data = match &cfg.data_dir {
        Some(d) => DataSet::load(d)?,
        None => DataSet::default(),
    };
    analyze_with_data(curve, cfg, &data)
}

pub fn analyze_with_data(curve: &CurveModel, cfg: &AnalysisConfig, data: &DataSet) -> Result<AnalysisReport> {
    let t0 = Instant::now();
    let mut timings = BTreeMap::new();
    let mut evidence = Vec::new();
    let mut bounds = BTreeMap::new();
    let mut fod = None;
    bounds.insert("b_irred".to_string(), cfg.b_irred);

    let irr = geometric_irreducibility(curve, cfg.b_irred)?;
    timings.insert("irreducibility".to_string(), t0.elapsed().as_millis());
    if let Some(w) = &irr.witness {
        evidence.push(ev("irreducibility", format!("{:?}: {}", irr.status, witness_text(w))));
    }
    let mut no_qm = matches!(irr.status, IrreducibilityStatus::AbsIrreducibleNoQM | IrreducibilityStatus::NoQM);
    let abs_irr = matches!(irr.status, IrreducibilityStatus::AbsIrreducible | IrreducibilityStatus::AbsIrreducibleNoQM);
    if irr.status == IrreducibilityStatus::AbsIrreducible {
        let scan = twist_scan(curve, cfg.b_irred, GROUP_CONSTANTS.exponent_bound)?;
        if let Some(p) = scan.first_non_square {
            no_qm = true;
            evidence.push(ev("no_qm", format!("f_{}{{12}} not a square", p)));
        }
    }

    let late_trivial = if irr.status == IrreducibilityStatus::AbsIrreducible {
        endotests::end_is_z_witness(curve, &IrreducibilityOptions::default(), &Witness::IrreducibleQuintic)?
    } else {
        None
    };
    if let Some(w) = &late_trivial {
        evidence.push(ev("end_is_z", witness_text(w)));
    }
    let (classification, status) = if irr.status == IrreducibilityStatus::EndIsZ || late_trivial.is_some() {
        (Classification::Trivial, ProofStatus::ProvenBoth)
    } else if abs_irr && no_qm {
        bounds.insert("b_disc".to_string(), cfg.b_disc);
        let db = disc_bound_curve(curve, cfg.b_disc, |_| true, DiscMode::Geometric, DiscBoundOptions { early_exit: true })?;
        timings.insert("disc_bound".to_string(), t0.elapsed().as_millis());
        evidence.push(ev("disc_bound", format!("d(B) = {} over {} places, cm_excluded = {}", db.d_of_b, db.places_used.len(), db.cm_excluded)));
        if db.verdict == DiscVerdict::EndIsZ {
            (Classification::Trivial, ProofStatus::ProvenBoth)
        } else if db.cm_excluded && db.rm_candidates.is_empty() && !db.d_of_b.eq(&BigInt::from(0)) {
            evidence.push(ev("disc_bound", "no real quadratic discriminant D with D² | d(B)"));
            (Classification::Trivial, ProofStatus::ProvenBoth)
        } else if db.cm_excluded {
            classify_rm(curve, cfg, data, &db.rm_candidates, &mut evidence, &mut fod)?
        } else if db.places_used.is_empty() {
            (Classification::Undetermined, ProofStatus::Heuristic)
        } else {
            classify_cm(curve, data, &mut evidence)?
        }
    } else {
        classify_reducible_or_qm(curve, cfg, data, no_qm, &mut evidence)?
    };
    timings.insert("total".to_string(), t0.elapsed().as_millis());

    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        convention_id: moduli::CONVENTION_ID.to_string(),
        curve: CurveEcho { f: curve.f.to_string(), coeffs: curve.f.coeffs().iter().map(|c| c.to_string()).collect() },
        classification,
        proof_status: status,
        evidence,
        bounds_used: bounds,
        field_of_definition: fod,
        timings_ms: if cfg.timings { Some(timings) } else { None },
    })
}

fn classify_rm(
    curve: &CurveModel,
    cfg: &AnalysisConfig,
    data: &DataSet,
    candidates: &[QuadraticField],
    evidence: &mut Vec<Evidence>,
    fod: &mut Option<String>,
) -> Result<(Classification, ProofStatus)> {
    let first = candidates[0].fundamental_discriminant;
    if data.humbert.is_empty() {
        evidence.push(ev("rm_candidates", format!("{:?}", candidates.iter().map(|k| k.fundamental_discriminant).collect::<Vec<_>>())));
        return Ok((Classification::Rm { disc: first, order_index: None }, ProofStatus::Heuristic));
    }
    let point = igusa_clebsch(curve)?;
    for k in candidates {
        let d = k.fundamental_discriminant as u64;
        let keys = (1..=16u64).map(|n| n * n * d).filter(|dd| data.humbert.contains_key(dd));
        let m = membership_map(data, &point, keys, cfg.tol, evidence)?;
        if let Some(order) = moduli::rm_order_from_membership(&m, d)? {
            evidence.push(ev("humbert", format!("point lies on H_{}", order.discriminant)));
            // field of definition, when End over Q is already trivial
            let overk = disc_bound_curve(curve, cfg.b_disc, |_| true, DiscMode::OverK, DiscBoundOptions { early_exit: true })?;
            if overk.verdict == DiscVerdict::EndIsZ {
                if let Ok(f) = rm_field_of_definition(curve, k.fundamental_discriminant, cfg.b_disc) {
                    if let Some(field) = f.field {
                        *fod = Some(field.name());
                        evidence.push(ev("field_of_definition", format!("{} survives among {} candidates", field.name(), f.candidates.len())));
                    }
                }
            }
            return Ok((Classification::Rm { disc: k.fundamental_discriminant, order_index: Some(order.index) }, ProofStatus::ProvenBoth));
        }
    }
    Ok((Classification::Rm { disc: first, order_index: None }, ProofStatus::ProvenUpper))
}

fn classify_cm(curve: &CurveModel, data: &DataSet, evidence: &mut Vec<Evidence>) -> Result<(Classification, ProofStatus)> {
    if !data.cm.is_empty() {
        let point = igusa_clebsch(curve)?;
        if let Some(rec) = moduli::cm_list_match(&point, &data.cm) {
            evidence.push(ev("cm_list", format!("matches '{}'", rec.label)));
            return Ok((Classification::Cm { field_disc: None, label: Some(rec.label.clone()) }, ProofStatus::ProvenBoth));
        }
    }
    evidence.push(ev("cm_suspected", "a single field discriminant across admissible places"));
    Ok((Classification::Cm { field_disc: None, label: None }, ProofStatus::Heuristic))
}

fn classify_reducible_or_qm(
    curve: &CurveModel,
    cfg: &AnalysisConfig,
    data: &DataSet,
    no_qm: bool,
    evidence: &mut Vec<Evidence>,
) -> Result<(Classification, ProofStatus)> {
    if data.humbert.is_empty() {
        evidence.push(ev("reducible_suspected", format!("every f_p{{12}} with p <= {} is reducible", cfg.b_irred)));
        // every f_p{12} a square is the QM signature
        return Ok(if no_qm {
            (Classification::Decomposable { n: None }, ProofStatus::Heuristic)
        } else {
            (Classification::Qm { descriptor: None }, ProofStatus::Heuristic)
        });
    }
    let point = igusa_clebsch(curve)?;
    let squares = (2..=16u64).map(|n| n * n).filter(|d| data.humbert.contains_key(d));
    let m = membership_map(data, &point, squares, cfg.tol, evidence)?;
    if let Some(order) = moduli::rm_order_from_membership(&m, 1)? {
        evidence.push(ev("humbert", format!("point lies on H_{}", order.discriminant)));
        return Ok((Classification::Decomposable { n: Some(order.index) }, ProofStatus::ProvenBoth));
    }
    if no_qm {
        return Ok((Classification::Decomposable { n: None }, ProofStatus::Heuristic));
    }
    // QM: the two least non-square discriminants whose surfaces contain the point
    let mut on = Vec::new();
    for &d in data.humbert.keys() {
        if crate::arith::is_square(&BigInt::from(d)) {
            continue;
        }
        if membership_of(data, &point, d, cfg.tol, evidence)? == Some(true) {
            on.push(d as i64);
            if on.len() == 2 {
                break;
            }
        }
    }
    if !on.is_empty() {
        evidence.push(ev("humbert", format!("point lies on H_{:?}", on)));
    }
    if on.len() < 2 {
        return Ok((Classification::Qm { descriptor: None }, ProofStatus::Heuristic));
    }
    let mut oracle_ev = Vec::new();
    let ded = qforms::deduce_qm_ring(
        on[0],
        on[1],
        |d| membership_of(data, &point, d as u64, cfg.tol, &mut oracle_ev).ok().flatten(),
        qforms::DEFAULT_QUERY_CAP,
    )?;
    evidence.extend(oracle_ev);
    evidence.push(ev("qm_deduction", format!("{} survivor(s) among [[{},x],[x,{}]]", ded.survivors.len(), on[0], on[1])));
    Ok(match ded.descriptor {
        Some(d) => (Classification::Qm { descriptor: Some(d) }, ProofStatus::ProvenBoth),
        None => (Classification::Qm { descriptor: None }, ProofStatus::Heuristic),
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyConfig {
    pub coefficient_box: i64,
    pub a4_nonneg: bool,
    pub b_irred: u64,
    pub b_disc: u64,
    /// `(count, seed)`; `None` runs the whole box.
    pub sample: Option<(usize, u64)>,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig { coefficient_box: 10, a4_nonneg: true, b_irred: 59, b_disc: 200, sample: None }
    }
}

impl SurveyConfig {
    pub fn total_models(&self) -> u64 {
        let w = 2 * self.coefficient_box as u64 + 1;
        let w4 = if self.a4_nonneg { self.coefficient_box as u64 + 1 } else { w };
        w.pow(4) * w4
    }

    /// `[a0, a1, a2, a3, a4]` for a model index (a0 fastest).
    pub fn model(&self, mut idx: u64) -> [i64; 5] {
        let b = self.coefficient_box;
        let w = 2 * b as u64 + 1;
        let mut out = [0i64; 5];
        for slot in out.iter_mut().take(4) {
            *slot = (idx % w) as i64 - b;
            idx /= w;
        }
        out[4] = if self.a4_nonneg { idx as i64 } else { idx as i64 - b };
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurveyCategory {
    Singular,
    Trivial,
    SuspectedRm,
    SuspectedCm,
    SuspectedDecomposable,
    SuspectedQm,
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub coeffs: [i64; 5],
    pub category: SurveyCategory,
    /// Largest prime used to prove geometric irreducibility without QM.
    pub irreducibility_prime: Option<u64>,
    pub rm_disc: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveySummary {
    pub schema_version: u32,
    pub config: SurveyConfig,
    pub models: u64,
    pub counts: BTreeMap<SurveyCategory, u64>,
    pub rm_counts: BTreeMap<i64, u64>,
    pub irreducible_no_qm: u64,
    pub max_irreducibility_prime: u64,
}

pub fn survey_model(coeffs: [i64; 5], cfg: &SurveyConfig) -> Result<SurveyRecord> {
    let mut c = coeffs.to_vec();
    c.push(1);
    let rec = |category, p, d| SurveyRecord { coeffs, category, irreducibility_prime: p, rm_disc: d };
    let curve = match CurveModel::new(IntPoly::from_i64(&c)) {
        Ok(cv) => cv,
        Err(Error::Singular) | Err(Error::NotSquarefree) => return Ok(rec(SurveyCategory::Singular, None, None)),
        Err(e) => return Err(e),
    };
    let irr = geometric_irreducibility(&curve, cfg.b_irred)?;
    use IrreducibilityStatus::*;
    let (abs_irr, mut no_qm, mut prime) = match irr.status {
        EndIsZ => return Ok(rec(SurveyCategory::Trivial, Some(0), None)),
        AbsIrreducibleNoQM => (true, true, irr.bound_used),
        AbsIrreducible => (true, false, 0),
        NoQM => (false, true, irr.bound_used),
        _ => (false, false, irr.bound_used),
    };
    if irr.status == AbsIrreducible {
        let scan = twist_scan(&curve, cfg.b_irred, GROUP_CONSTANTS.exponent_bound)?;
        if let Some(p) = scan.first_non_square {
            no_qm = true;
            prime = p;
        }
    }
    if !(abs_irr && no_qm) {
        let cat = if no_qm { SurveyCategory::SuspectedDecomposable } else { SurveyCategory::SuspectedQm };
        return Ok(rec(cat, None, None));
    }
    if irr.status == AbsIrreducible && endotests::end_is_z_witness(&curve, &IrreducibilityOptions::default(), &Witness::IrreducibleQuintic)?.is_some()
    {
        return Ok(rec(SurveyCategory::Trivial, Some(prime), None));
    }
    let db = disc_bound_curve(&curve, cfg.b_disc, |_| true, DiscMode::Geometric, DiscBoundOptions { early_exit: true })?;
    let p = Some(prime);
    Ok(if db.verdict == DiscVerdict::EndIsZ || (db.cm_excluded && db.rm_candidates.is_empty() && db.d_of_b != BigInt::from(0)) {
        rec(SurveyCategory::Trivial, p, None)
    } else if db.cm_excluded {
        rec(SurveyCategory::SuspectedRm, p, Some(db.rm_candidates[0].fundamental_discriminant))
    } else if db.places_used.is_empty() {
        rec(SurveyCategory::Unresolved, p, None)
    } else {
        rec(SurveyCategory::SuspectedCm, p, None)
    })
}

pub fn survey_indices(cfg: &SurveyConfig) -> Vec<u64> {
    let total = cfg.total_models();
    match cfg.sample {
        None => (0..total).collect(),
        Some((n, seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = n.min(total as usize);
            let mut v: Vec<u64> = rand::seq::index::sample(&mut rng, total as usize, n).into_iter().map(|i| i as u64).collect();
            v.sort_unstable();
            v
        }
    }
}

/// Runs the survey in parallel; records come back in index order.
pub fn survey(cfg: &SurveyConfig) -> Result<(SurveySummary, Vec<SurveyRecord>)> {
    let idx = survey_indices(cfg);
    let records: Vec<SurveyRecord> = idx.par_iter().map(|&i| survey_model(cfg.model(i), cfg)).collect::<Result<Vec<_>>>()?;
    let mut counts = BTreeMap::new();
    let mut rm_counts = BTreeMap::new();
    let mut irr = 0;
    let mut maxp = 0;
    for r in &records {
        *counts.entry(r.category).or_insert(0) += 1;
        if let Some(d) = r.rm_disc {
            *rm_counts.entry(d).or_insert(0) += 1;
        }
        if let Some(p) = r.irreducibility_prime {
            irr += 1;
            maxp = maxp.max(p);
        }
    }
    Ok((
        SurveySummary {
            schema_version: SCHEMA_VERSION,
            config: cfg.clone(),
            models: records.len() as u64,
            counts,
            rm_counts,
            irreducible_no_qm: irr,
            max_irreducibility_prime: maxp,
        },
        records,
    ))
}
