use std::path::PathBuf;
use std::time::Instant;

use g2endo::finitefield::CurveModel;
use g2endo::intpoly::IntPoly;
use g2endo::pipeline::{analyze, survey, survey_model, AnalysisConfig, Classification, ProofStatus, SurveyCategory, SurveyConfig};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(rel)
}

fn cfg(dir: Option<&str>) -> AnalysisConfig {
    AnalysisConfig { data_dir: dir.map(data), ..AnalysisConfig::default() }
}

fn curves() -> Vec<(CurveModel, &'static str)> {
    let split = CurveModel::from_gh(&IntPoly::from_i64(&[14, 0, 11, 7, 2, 3, 1]), &IntPoly::from_i64(&[0, 1, 1])).unwrap();
    vec![
        (CurveModel::from_i64(&[-1, 1, 1, -1, -1, 1]).unwrap(), "toy"),
        (CurveModel::from_i64(&[1, 0, 0, 0, 0, 1]).unwrap(), "toy"),
        (CurveModel::from_i64(&[1, 1, 0, 0, 0, 1]).unwrap(), "toy"),
        (CurveModel::from_gh(&IntPoly::from_i64(&[0, 0, -3, -1, 9, 6]), &IntPoly::from_i64(&[1])).unwrap(), "toy_qm"),
        (split, "toy"),
    ]
}

fn rank(s: ProofStatus) -> u8 {
    match s {
        ProofStatus::ProvenBoth => 2,
        ProofStatus::ProvenUpper | ProofStatus::ProvenLower => 1,
        ProofStatus::Heuristic => 0,
    }
}

#[test]
fn fixture_classifications() {
    let c = curves();
    let r = analyze(&c[0].0, &cfg(Some("toy"))).unwrap();
    assert_eq!(r.classification, Classification::Rm { disc: 8, order_index: Some(1) });
    assert_eq!(r.proof_status, ProofStatus::ProvenBoth);
    assert_eq!(r.field_of_definition.as_deref(), Some("Q(sqrt(2))"));
    assert_eq!(r.exit_code(), 0);

    let r = analyze(&c[1].0, &cfg(Some("toy"))).unwrap();
    assert!(matches!(r.classification, Classification::Cm { .. }));
    assert_eq!(r.proof_status, ProofStatus::ProvenBoth);

    let r = analyze(&c[2].0, &cfg(None)).unwrap();
    assert_eq!(r.classification, Classification::Trivial);
    assert_eq!(r.proof_status, ProofStatus::ProvenBoth);

    let r = analyze(&c[3].0, &cfg(Some("toy_qm"))).unwrap();
    let Classification::Qm { descriptor: Some(d) } = &r.classification else { panic!("{:?}", r.classification) };
    assert_eq!((d.disc, d.algebra_disc, d.index_in_maximal), (36, 6, 6));

    let r = analyze(&c[4].0, &cfg(None)).unwrap();
    assert!(matches!(r.classification, Classification::Decomposable { .. }), "{:?}", r.classification);
}

#[test]
fn removing_data_never_promotes() {
    for (c, dir) in curves() {
        let with = analyze(&c, &cfg(Some(dir))).unwrap();
        let without = analyze(&c, &cfg(None)).unwrap();
        assert_eq!(std::mem::discriminant(&with.classification), std::mem::discriminant(&without.classification), "{}", c.f);
        assert!(rank(without.proof_status) <= rank(with.proof_status), "{}", c.f);
    }
}

#[test]
fn reports_are_deterministic_and_carry_evidence() {
    for (c, dir) in curves() {
        let a = serde_json::to_string(&analyze(&c, &cfg(Some(dir))).unwrap()).unwrap();
        let b = serde_json::to_string(&analyze(&c, &cfg(Some(dir))).unwrap()).unwrap();
        assert_eq!(a, b);
        let r = analyze(&c, &cfg(Some(dir))).unwrap();
        assert!(!r.evidence.is_empty(), "{}", c.f);
        assert!(r.timings_ms.is_none());
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["bounds_used"]["b_irred"], 59);
    }
}

#[test]
fn trivial_case_is_fast() {
    let c = CurveModel::from_i64(&[1, 1, 0, 0, 0, 1]).unwrap();
    let t = Instant::now();
    let r = analyze(&c, &cfg(None)).unwrap();
    assert_eq!(r.classification, Classification::Trivial);
    assert!(t.elapsed().as_secs_f64() < 1.0, "{:?}", t.elapsed());
}

#[test]
fn survey_box_and_reproducibility() {
    let full = SurveyConfig::default();
    assert_eq!(full.total_models(), 2_139_291);
    assert_eq!(full.model(0), [-10, -10, -10, -10, 0]);
    assert_eq!(full.model(full.total_models() - 1), [10, 10, 10, 10, 10]);

    let cfg = SurveyConfig { sample: Some((200, 3)), ..SurveyConfig::default() };
    let (s1, r1) = survey(&cfg).unwrap();
    let (s2, r2) = survey(&cfg).unwrap();
    assert_eq!(s1, s2);
    assert_eq!(r1, r2);
    assert_eq!(s1.models, 200);
    assert_eq!(s1.counts.values().sum::<u64>(), 200);
    assert!(s1.max_irreducibility_prime <= 59);
    // a different seed draws a different sample
    let (_, r3) = survey(&SurveyConfig { sample: Some((200, 4)), ..SurveyConfig::default() }).unwrap();
    assert_ne!(r1, r3);
}

#[test]
fn survey_models() {
    let cfg = SurveyConfig::default();
    // x⁵ + x⁴ is singular
    assert_eq!(survey_model([0, 0, 0, 0, 1], &cfg).unwrap().category, SurveyCategory::Singular);
    assert_eq!(survey_model([-1, 1, 1, -1, -1], &cfg).unwrap().category, SurveyCategory::SuspectedRm);
    assert_eq!(survey_model([-1, 1, 1, -1, -1], &cfg).unwrap().rm_disc, Some(8));
    assert_eq!(survey_model([1, 0, 0, 0, 0], &cfg).unwrap().category, SurveyCategory::SuspectedCm);
    assert_eq!(survey_model([1, 1, 0, 0, 0], &cfg).unwrap().category, SurveyCategory::Trivial);
}

#[test]
fn too_few_places_is_undetermined() {
    let c = CurveModel::from_i64(&[-1, 1, 1, -1, -1, 1]).unwrap();
    let r = analyze(&c, &AnalysisConfig { b_disc: 3, ..AnalysisConfig::default() }).unwrap();
    assert_eq!(r.classification, Classification::Undetermined);
    assert_eq!(r.exit_code(), 3);
}
