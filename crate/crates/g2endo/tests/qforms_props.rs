use std::collections::BTreeSet;

use g2endo::numfield::factor;
use g2endo::qforms::{
    certify_qm_sets, deduce_qm_ring, describe_order, enumerate_candidates, equivalent, hilbert_symbol, primitive_values, primitively_represents,
    quaternion_algebra_disc, reduce_gl2z, required_queries, BinaryQuadraticForm, DEFAULT_QUERY_CAP,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::random_unimodular;

fn f(a: i64, x: i64, c: i64) -> BinaryQuadraticForm {
    BinaryQuadraticForm::new(a, x, c)
}

/// The membership answers for the point: on H_12 and H_24, off every other H_D with
/// D <= 24 and off H_28, H_36, H_40, H_48; nothing else is known.
fn known_memberships(d: i64) -> Option<bool> {
    match d {
        12 | 24 => Some(true),
        1..=24 | 28 | 36 | 40 | 48 => Some(false),
        _ => None,
    }
}

#[test]
fn discriminant_matrices_represent_listed_values() {
    for (form, v, target) in [(f(12, 0, 24), (1, 1), 36), (f(12, 2, 24), (1, 1), 40), (f(12, 4, 24), (1, -1), 28), (f(12, 6, 24), (1, 1), 48)] {
        assert_eq!(form.value(v.0, v.1), target as i128);
        assert_eq!(v.0.gcd(&v.1), 1);
        let (m, n) = primitively_represents(&form, target).unwrap().expect("primitive representation");
        assert_eq!(form.value(m, n), target as i128);
        assert_eq!(m.gcd(&n), 1);
    }
}

#[test]
fn qm_deduction_for_12_24() {
    let ded = deduce_qm_ring(12, 24, known_memberships, DEFAULT_QUERY_CAP).unwrap();
    assert_eq!(ded.survivors, vec![f(12, 12, 24)]);
    let d = ded.descriptor.unwrap();
    assert_eq!((d.disc, d.algebra_disc, d.index_in_maximal), (36, 6, 6));
    // n = 0, 2, 4, 6 fall to 36, 40, 28, 48
    for (x, killer) in [(0, 36), (2, 40), (4, 28), (6, 48)] {
        assert!(ded.eliminated.iter().any(|(m, v)| m.x == x && *v == killer), "x = {}", x);
    }
    // every query asked is one the candidates really represent
    let needed: BTreeSet<i64> = required_queries(12, 24, DEFAULT_QUERY_CAP).unwrap().into_iter().collect();
    for (d, _) in &ded.queries {
        assert!(needed.contains(d) || *d == 12 || *d == 24);
    }
}

#[test]
fn deduction_without_answers_keeps_everyone() {
    let ded = deduce_qm_ring(12, 24, |_| None, DEFAULT_QUERY_CAP).unwrap();
    assert_eq!(ded.survivors.len(), enumerate_candidates(12, 24).unwrap().len());
    assert!(ded.descriptor.is_none());
}

#[test]
fn candidates_are_positive_definite_with_det_divisible_by_four() {
    let c = enumerate_candidates(12, 24).unwrap();
    assert_eq!(c.iter().map(|m| m.x).collect::<Vec<_>>(), vec![0, 2, 4, 6, 8, 10, 12, 14, 16]);
    for m in c {
        assert!(m.is_positive_definite());
        assert_eq!(m.det() % 4, 0);
    }
}

#[test]
fn reduction_is_canonical_under_basis_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let (a, c) = (rng.gen_range(1..=40), rng.gen_range(1..=40));
        let x = rng.gen_range(-(a.min(c))..=a.min(c));
        let form = f(a, x, c);
        if !form.is_positive_definite() {
            continue;
        }
        let red = reduce_gl2z(&form).unwrap();
        assert!(red.x >= 0 && 2 * red.x <= red.a && red.a <= red.c, "{} not reduced", red);
        assert_eq!(red.det(), form.det());
        for _ in 0..50 {
            let (p, q, r, s) = random_unimodular(&mut rng);
            assert_eq!((p * s - q * r).abs(), 1);
            let g = form.transform(p, q, r, s);
            assert_eq!(reduce_gl2z(&g).unwrap(), red, "{} vs {}", g, form);
            assert!(equivalent(&g, &form).unwrap());
        }
    }
    assert!(!equivalent(&f(1, 0, 6), &f(2, 0, 3)).unwrap());
}

fn brute_primitive_values(form: &BinaryQuadraticForm, cap: i64) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    for m in -60i64..=60 {
        for n in -60i64..=60 {
            if m.gcd(&n) == 1 {
                let v = form.value(m, n);
                if v <= cap as i128 {
                    out.insert(v as i64);
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn primitive_values_match_enumeration(a in 1i64..=30, c in 1i64..=30, x in -15i64..=15) {
        let form = f(a, x, c);
        prop_assume!(form.is_positive_definite());
        let got: BTreeSet<i64> = primitive_values(&form, 100).unwrap().into_iter().collect();
        prop_assert_eq!(got, brute_primitive_values(&form, 100));
    }

    /// Hilbert reciprocity: the number of places where (a, b) = -1 is even.
    #[test]
    fn hilbert_product_formula(a in -200i64..=200, b in -200i64..=200) {
        prop_assume!(a != 0 && b != 0);
        let mut primes: BTreeSet<u64> = [2u64].into_iter().collect();
        for n in [a, b] {
            for (p, _) in factor(&BigInt::from(n)).primes {
                primes.insert(p.to_u64().unwrap());
            }
        }
        let finite = primes.iter().filter(|&&p| hilbert_symbol(a as i128, b as i128, p) == -1).count();
        let infinite = (a < 0 && b < 0) as usize;
        prop_assert_eq!((finite + infinite) % 2, 0);
        // symmetric and trivial on squares
        for &p in &primes {
            prop_assert_eq!(hilbert_symbol(a as i128, b as i128, p), hilbert_symbol(b as i128, a as i128, p));
            prop_assert_eq!(hilbert_symbol((a * a) as i128, b as i128, p), 1);
        }
    }
}

#[test]
fn algebra_discriminants() {
    assert_eq!(quaternion_algebra_disc(-1, -1).unwrap(), 2);
    assert_eq!(quaternion_algebra_disc(-1, -3).unwrap(), 3);
    assert_eq!(quaternion_algebra_disc(1, 7).unwrap(), 1);
    let d = describe_order(&f(12, 12, 24)).unwrap();
    assert_eq!(d.reduced_form, f(12, 0, 12));
    assert_eq!(d.algebra_disc, 6);
}

#[test]
fn qm_certificate_sets() {
    let cert = certify_qm_sets(&f(12, 12, 24), 100).unwrap();
    assert_eq!(cert.positive, (12, 24));
    // each other candidate is pinned down by a value the target does not represent
    let target = f(12, 12, 24);
    for (m, d) in &cert.negative {
        assert_ne!(reduce_gl2z(m).unwrap(), reduce_gl2z(&target).unwrap());
        assert!(primitively_represents(&target, *d).unwrap().is_none());
        assert!(primitively_represents(m, *d).unwrap().is_some());
    }
    assert_eq!(cert.negative.len(), enumerate_candidates(12, 24).unwrap().len() - 1);
}
