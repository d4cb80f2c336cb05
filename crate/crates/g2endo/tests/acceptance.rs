//! One PASS/FAIL line per acceptance criterion, with its time limit.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{moebius, q, quartic_reducible_brute, random_sextic, random_unimodular, roots_on_circle};
use g2endo::covers::{map_degree, parse_cover, pullback_differential, verify_cover};
use g2endo::endotests::{
    collect_frobenius, disc_bound, geometric_irreducibility, restricted_gcd, rm_field_of_definition, DiscBoundOptions, DiscMode, DiscVerdict,
    IrreducibilityStatus,
};
use g2endo::finitefield::{frobenius_data, satisfies_functional_equation, CurveModel};
use g2endo::intpoly::{is_irreducible, twist, IntPoly};
use g2endo::moduli::humbert::{humbert_membership, load_humbert_dir, satake_roots, satake_values, DEFAULT_TOL};
use g2endo::moduli::igusa::igusa_clebsch_sextic;
use g2endo::moduli::{igusa_clebsch, weighted_equal, HumbertEquation, Membership};
use g2endo::numfield::field_discriminant;
use g2endo::pipeline::{survey, SurveyCategory, SurveyConfig};
use g2endo::qforms::{deduce_qm_ring, primitively_represents, reduce_gl2z, BinaryQuadraticForm, DEFAULT_QUERY_CAP};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn example() -> CurveModel {
    CurveModel::from_i64(&[-1, 1, 1, -1, -1, 1]).unwrap()
}

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(rel)
}

fn c1() -> Outcome {
    let v = geometric_irreducibility(&example(), 7).map_err(|e| e.to_string())?;
    ensure(v.status == IrreducibilityStatus::AbsIrreducibleNoQM, format!("status {:?}", v.status))?;
    Ok(format!("{:?} with B = {}", v.status, v.bound_used))
}

fn c2() -> Outcome {
    let frob = collect_frobenius(&example(), 67).map_err(|e| e.to_string())?;
    let full = disc_bound(frob.clone(), |_| true, DiscMode::OverK, DiscBoundOptions { early_exit: false }).map_err(|e| e.to_string())?;
    ensure(full.verdict == DiscVerdict::EndIsZ, format!("B=67: {:?}", full.verdict))?;
    let short: Vec<_> = frob.into_iter().filter(|f| f.p <= 23).collect();
    let early = disc_bound(short, |_| true, DiscMode::OverK, DiscBoundOptions { early_exit: true }).map_err(|e| e.to_string())?;
    ensure(early.verdict == DiscVerdict::EndIsZ, format!("B=23 early exit: {:?}", early.verdict))?;
    Ok("EndIsZ at B = 67, and at B = 23 with early exit".into())
}

fn c3() -> Outcome {
    let frob = collect_frobenius(&example(), 500).map_err(|e| e.to_string())?;
    let mut seen = Vec::new();
    for b in [67u64, 200, 500] {
        let sub = frob.iter().filter(|f| f.p <= b).cloned();
        let r = disc_bound(sub, |_| true, DiscMode::Geometric, DiscBoundOptions { early_exit: false }).map_err(|e| e.to_string())?;
        ensure(BigInt::from(64).is_multiple_of(&r.d_of_b), format!("B={}: d = {}", b, r.d_of_b))?;
        ensure(r.cm_excluded, format!("B={}: CM not excluded", b))?;
        let rm: Vec<i64> = r.rm_candidates.iter().map(|k| k.fundamental_discriminant).collect();
        ensure(rm == [8], format!("B={}: rm candidates {:?}", b, rm))?;
        seen.push(r.d_of_b);
    }
    ensure(seen[1] == seen[2], format!("not stable: {:?}", seen))?;
    Ok(format!("d(B) = {} for B = 200, 500; RM candidate 8", seen[2]))
}

fn c4() -> Outcome {
    let f = rm_field_of_definition(&example(), 8, 61).map_err(|e| e.to_string())?;
    let field = f.field.ok_or("no field survives")?;
    ensure(field.fundamental_discriminant == 8, format!("got {}", field.name()))?;
    let gone: BTreeSet<i64> = f.eliminated.iter().map(|(k, _)| k.fundamental_discriminant).collect();
    ensure(gone == BTreeSet::from([-24, -8, -4, -3, 12, 24]), format!("eliminated {:?}", gone))?;
    Ok(format!("{} survives, eliminated {:?}", field.name(), gone))
}

fn c5() -> Outcome {
    let frob = collect_frobenius(&example(), 500).map_err(|e| e.to_string())?;
    let mut stable_from = None;
    for b in (50..=500).step_by(50) {
        let sub: Vec<_> = frob.iter().filter(|f| f.p <= b).cloned().collect();
        let r = restricted_gcd(&sub, |f| f.p % 8 == 1 || f.p % 8 == 3).map_err(|e| e.to_string())?;
        if r.d_of_b == BigInt::from(16) {
            stable_from.get_or_insert(b);
        } else {
            stable_from = None;
        }
    }
    let from = stable_from.ok_or("restricted gcd is not 16 at B = 500")?;
    let mut n3 = 0;
    for fd in frob.iter().filter(|f| f.p <= 200 && f.p % 8 == 3) {
        let c = fd.weil_poly.coeffs();
        ensure(c[1].is_zero() && c[3].is_zero() && c[2].is_even(), format!("p = {}: {}", fd.p, fd.weil_poly))?;
        n3 += 1;
    }
    Ok(format!("restricted gcd = 16 for B >= {}; {} primes p = 3 mod 8 have shape x^4 + 2a x^2 + p^2", from, n3))
}

fn c6() -> Outcome {
    for ((a, x, c), (m, n), target) in [((12, 0, 24), (1, 1), 36), ((12, 2, 24), (1, 1), 40), ((12, 4, 24), (1, -1), 28), ((12, 6, 24), (1, 1), 48)] {
        let form = BinaryQuadraticForm::new(a, x, c);
        ensure(form.value(m, n) == target as i128 && m.gcd(&n) == 1, format!("{} at ({}, {})", form, m, n))?;
        ensure(primitively_represents(&form, target).map_err(|e| e.to_string())?.is_some(), format!("{} misses {}", form, target))?;
    }
    Ok("36, 40, 28, 48 represented primitively".into())
}

fn c7() -> Outcome {
    let oracle = |d: i64| match d {
        12 | 24 => Some(true),
        1..=24 | 28 | 36 | 40 | 48 => Some(false),
        _ => None,
    };
    let ded = deduce_qm_ring(12, 24, oracle, DEFAULT_QUERY_CAP).map_err(|e| e.to_string())?;
    let d = ded.descriptor.ok_or_else(|| format!("{} survivors", ded.survivors.len()))?;
    ensure((d.disc, d.algebra_disc, d.index_in_maximal) == (36, 6, 6), format!("{:?}", d))?;
    Ok(format!("disc {}, algebra disc {}, index {}", d.disc, d.algebra_disc, d.index_in_maximal))
}

fn c8() -> Outcome {
    let text = std::fs::read_to_string(data("covers/degree7.cover")).map_err(|e| e.to_string())?;
    let c = parse_cover(&text).map_err(|e| e.to_string())?;
    ensure(verify_cover(&c.curve, &c.map).map_err(|e| e.to_string())?, "rejected")?;
    let deg = map_degree(&c.curve, &c.map).map_err(|e| e.to_string())?;
    ensure(deg == 7, format!("degree {}", deg))?;
    let (a, b) = pullback_differential(&c.curve, &c.map).map_err(|e| e.to_string())?;
    let k = &c.curve.field;
    let mut m = c.map.clone();
    m.w_num[3] = k.add(&m.w_num[3], &k.one());
    ensure(!verify_cover(&c.curve, &m).map_err(|e| e.to_string())?, "mutation accepted")?;
    Ok(format!("degree {}, pullback ({}) + ({})x; mutation rejected", deg, k.fmt_elem(&a), k.fmt_elem(&b)))
}

fn c9() -> Outcome {
    let n = 10_000u64;
    let cfg = SurveyConfig { sample: Some((n as usize, 20_260_101)), ..SurveyConfig::default() };
    let (s, _) = survey(&cfg).map_err(|e| e.to_string())?;
    let count = |c| *s.counts.get(&c).unwrap_or(&0);
    let singular = count(SurveyCategory::Singular);
    let trivial = count(SurveyCategory::Trivial);

    let p = 7239.0 / 2_139_291.0;
    let mean = n as f64 * p;
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    ensure((singular as f64 - mean).abs() <= 3.0 * sigma, format!("singular {} vs {:.1} ± {:.1}", singular, mean, 3.0 * sigma))?;
    let frac = trivial as f64 / (n - singular) as f64;
    let target = 2_129_918.0 / 2_132_052.0;
    ensure((frac - target).abs() <= 0.005, format!("trivial fraction {:.5} vs {:.5}", frac, target))?;
    ensure(s.max_irreducibility_prime <= 59, format!("irreducibility prime {}", s.max_irreducibility_prime))?;
    Ok(format!(
        "singular {} (expected {:.1} ± {:.1}), trivial {:.5} (target {:.5} ± 0.005), max prime {}, other {:?}",
        singular,
        mean,
        3.0 * sigma,
        frac,
        target,
        s.max_irreducibility_prime,
        s.counts.iter().filter(|(c, _)| !matches!(c, SurveyCategory::Singular | SurveyCategory::Trivial)).collect::<Vec<_>>()
    ))
}

fn c10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let primes = g2endo::arith::odd_primes_up_to(200);
    let mut pairs = 0;
    while pairs < 200 {
        let mut c: Vec<i64> = (0..rng.gen_range(5..=6)).map(|_| rng.gen_range(-20..=20)).collect();
        c.push(rng.gen_range(1..=5));
        let Ok(cv) = CurveModel::from_i64(&c) else { continue };
        let p = primes[rng.gen_range(0..primes.len())];
        if !cv.is_good_prime(p) {
            continue;
        }
        let fd = frobenius_data(&cv, p).map_err(|e| e.to_string())?;
        ensure(satisfies_functional_equation(&fd) && roots_on_circle(&fd), format!("{} at p = {}", cv.f, p))?;
        pairs += 1;
    }

    for _ in 0..1000 {
        let f = IntPoly::from_i64(&[rng.gen_range(-20..=20), rng.gen_range(-20..=20), rng.gen_range(-20..=20), rng.gen_range(-20..=20), 1]);
        let direct = twist(&f, 12).map_err(|e| e.to_string())?;
        let step = twist(&twist(&twist(&f, 2).map_err(|e| e.to_string())?, 2).map_err(|e| e.to_string())?, 3).map_err(|e| e.to_string())?;
        ensure(direct == step, format!("twist composition fails for {}", f))?;
    }

    let mut quartics = 0;
    for a0 in -5..=5 {
        for a1 in -5..=5 {
            for a2 in -5..=5 {
                for a3 in -5..=5 {
                    let got = is_irreducible(&IntPoly::from_i64(&[a0, a1, a2, a3, 1])).map_err(|e| e.to_string())?;
                    ensure(got != quartic_reducible_brute([a0, a1, a2, a3]), format!("x^4 + {}x^3 + {}x^2 + {}x + {}", a3, a2, a1, a0))?;
                    quartics += 1;
                }
            }
        }
    }

    for (c, d) in [(vec![-1, -1, 1], 5), (vec![-2, 0, 1], 8), (vec![1, 1, 1, 1, 1], 125)] {
        let got = field_discriminant(&IntPoly::from_i64(&c)).map_err(|e| e.to_string())?;
        ensure(got == BigInt::from(d), format!("field disc {} != {}", got, d))?;
    }
    // the index identity is asserted inside every call
    for _ in 0..200 {
        let f = IntPoly::from_i64(&[rng.gen_range(-30..=30), rng.gen_range(-30..=30), rng.gen_range(-30..=30), 1]);
        if is_irreducible(&f).map_err(|e| e.to_string())? {
            field_discriminant(&f).map_err(|e| e.to_string())?;
        }
    }

    let mut forms = 0;
    while forms < 50 {
        let (a, c) = (rng.gen_range(1..=60), rng.gen_range(1..=60));
        let x = rng.gen_range(-a.min(c)..=a.min(c));
        let form = BinaryQuadraticForm::new(a, x, c);
        if !form.is_positive_definite() {
            continue;
        }
        let red = reduce_gl2z(&form).map_err(|e| e.to_string())?;
        let (p, q, r, s) = random_unimodular(&mut rng);
        ensure(reduce_gl2z(&form.transform(p, q, r, s)).map_err(|e| e.to_string())? == red, format!("{} not canonical", form))?;
        forms += 1;
    }
    Ok(format!("{} Frobenius pairs, 1000 twist compositions, {} quartics, {} GL2 changes", pairs, quartics, forms))
}

fn c11() -> Outcome {
    let mut n_eq = 0;
    for dir in ["toy/humbert", "toy_qm/humbert"] {
        for (_, eq) in load_humbert_dir(&data(dir)).map_err(|e| e.to_string())? {
            let again = HumbertEquation::parse(&eq.to_text()).map_err(|e| e.to_string())?;
            ensure(again == eq, format!("H_{} does not round-trip", eq.discriminant))?;
            n_eq += 1;
        }
    }
    let eq8 = HumbertEquation::load(&data("toy/humbert/8.eq")).map_err(|e| e.to_string())?;
    let on = igusa_clebsch(&example()).map_err(|e| e.to_string())?;
    ensure(eq8.evaluate_igusa(&on).map_err(|e| e.to_string())?.is_zero(), "toy H_8 does not vanish")?;

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let f = random_sextic(&mut rng);
        let base = igusa_clebsch_sextic(&f);
        let l = rng.gen_range(2..=5);
        let r = rng.gen_range(-4..=4);
        let scaled = igusa_clebsch_sextic(&moebius(&f, l, 0, 0, 1)) == base.scaled(&q(l * l * l));
        let shifted = igusa_clebsch_sextic(&moebius(&f, 1, r, 0, 1)) == base;
        let reversed = igusa_clebsch_sextic(&moebius(&f, 0, 1, 1, 0)) == base;
        ensure(scaled && shifted && reversed, "igusa_clebsch not invariant")?;
        ensure(weighted_equal(&igusa_clebsch_sextic(&moebius(&f, l, r, 0, 1)), &base), "weighted equality fails")?;
    }

    let on_eq = HumbertEquation::load(&data("satake/on.eq")).map_err(|e| e.to_string())?;
    let off_eq = HumbertEquation::load(&data("satake/off.eq")).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut points = 0;
    while points < 5 {
        let p = igusa_clebsch_sextic(&random_sextic(&mut rng));
        if p.i2.is_zero() {
            continue;
        }
        for (eq, want) in [(&on_eq, Membership::NumericOn), (&off_eq, Membership::NumericOff)] {
            let (roots, _) = satake_roots(eq, &p).map_err(|e| e.to_string())?;
            let mut a = satake_values(eq, &roots);
            let mut shuffled = roots.clone();
            shuffled.shuffle(&mut rng);
            let mut b = satake_values(eq, &shuffled);
            ensure(a.len() == 720, format!("{} permutations", a.len()))?;
            a.sort_by(|x, y| x.partial_cmp(y).unwrap());
            b.sort_by(|x, y| x.partial_cmp(y).unwrap());
            for (x, y) in a.iter().zip(&b) {
                worst = worst.max((x - y).abs());
            }
            let rep = humbert_membership(&p, eq, DEFAULT_TOL).map_err(|e| e.to_string())?;
            ensure(rep.reliable && rep.membership == want, format!("{:?} reliable={}", rep.membership, rep.reliable))?;
        }
        points += 1;
    }
    ensure(worst < 1e-20, format!("permutation spread {:e}", worst))?;
    Ok(format!("{} toy equations round-trip; 100 sextics invariant; Satake spread {:.1e} < 1e-20 with audit", n_eq, worst))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "geometric irreducibility at B = 7", 1, c1),
        (2, "EndIsZ over Q at B = 67 and B = 23", 5, c2),
        (3, "geometric d(B) divides 64", 5, c3),
        (4, "RM field of definition", 30, c4),
        (5, "restricted gcd over Q(sqrt(-2)) places", 60, c5),
        (6, "quadratic form fixtures", 1, c6),
        (7, "QM order deduction", 1, c7),
        (8, "degree-7 cover", 1, c8),
        (9, "sampled survey", 600, c9),
        (10, "property suites", 300, c10),
        (11, "Humbert pathway", 60, c11),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let t = Instant::now();
        let out = run();
        let dt = t.elapsed();
        let verdict = match &out {
            Ok(_) if dt <= Duration::from_secs(limit) => "PASS",
            _ => "FAIL",
        };
        let detail = match out {
            Ok(s) => s,
            Err(e) => e,
        };
        println!("criterion {:>2} {}: {} [{:.2}s / {}s] {}", n, verdict, name, dt.as_secs_f64(), limit, detail);
        if verdict == "FAIL" {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{} criteria failed", failed);
        std::process::exit(1);
    }
}
