mod common;

use congruent_core::descent::{case_exclusion, CaseLabel, CaseVerdict, CaseWitnesses};
use congruent_core::ecparam::{point_from_triangle, triangle_from_point, ParamTuple, Triangle};
use congruent_core::numth::{gcd, is_prime, legendre, mul_mod, reduce_signed};
use congruent_core::pythag::{generate_triple, parametrize_triple, TripleParam};
use congruent_core::tunnell::{count_form, count_form_partitioned, Form};
use congruent_core::Rational;
use proptest::prelude::*;

#[test]
fn triple_roundtrip_up_to_500() {
    let n = common::triple_roundtrip(500).unwrap();
    assert!(n > 700, "only {n} triples");
}

#[test]
fn legendre_agreement_below_10000() {
    common::legendre_three_way(10_000).unwrap();
}

#[test]
fn euler_equals_reciprocity_for_all_residues() {
    for p in common::primes_below(700).filter(|&p| p > 2) {
        for a in 1..p as i64 {
            assert_eq!(
                congruent_core::numth::legendre_euler(a, p).unwrap(),
                congruent_core::numth::legendre_reciprocity(a, p).unwrap()
            );
        }
    }
}

#[test]
fn oracle_tuples_round_trip() {
    common::tuple_point_triangle(60, 300).unwrap();
}

#[test]
fn synthetic_tuples_round_trip() {
    common::synthetic_tuples(40).unwrap();
}

#[test]
fn partitioned_counts() {
    common::partitioned_counting((1..=300).chain([1001, 5003, 20_000]), &[1, 2, 3, 4, 8]).unwrap();
}

fn coprime_pair(max: u64) -> impl Strategy<Value = (u64, u64)> {
    (2..=max)
        .prop_flat_map(|m| (Just(m), 1..m))
        .prop_filter("coprime", |&(m, e)| gcd(m, e) == 1)
}

fn odd_primes() -> Vec<u64> {
    (3..400).filter(|&p| is_prime(p)).collect()
}

proptest! {
    #[test]
    fn param_triple_param((m, e) in coprime_pair(200), h in 1u64..50) {
        let p = TripleParam::new(h, m, e).unwrap();
        match generate_triple(p) {
            Ok((a, b, c)) => prop_assert_eq!(parametrize_triple(a, b, c).unwrap(), p),
            Err(_) => prop_assert!(h % 2 == 1 && (m - e) % 2 == 1),
        }
    }

    #[test]
    fn synthetic_tuple((m, e) in coprime_pair(100), r in 1u64..8) {
        let d = r * r * e * m * (m * m - e * e);
        let t = ParamTuple::new(2 * e * m * r, 1, m, e, d).unwrap();
        prop_assert!(common::check_tuple(&t).is_ok());
    }

    #[test]
    fn scaled_triangles((m, e) in coprime_pair(60), s in 1u64..20) {
        let h = if (m - e) % 2 == 0 { 1 } else { 2 };
        let (a, b, c) = generate_triple(TripleParam { h, m, e }).unwrap();
        let tri = Triangle::from_sides(a.into(), b.into(), c.into()).unwrap();
        let big = tri.scaled(s).unwrap();
        prop_assert_eq!(big.area, tri.area * s * s);
        let p = point_from_triangle(&big).unwrap();
        prop_assert_eq!(triangle_from_point(&p).unwrap(), big);
        let p_small = point_from_triangle(&tri).unwrap();
        prop_assert_eq!(&p.x, &(&p_small.x * &Rational::from(s * s)));
    }

    #[test]
    fn partition_is_deterministic(n in 1u64..50_000, w in 1usize..12, f in 0usize..4) {
        let form = Form::ALL[f];
        prop_assert_eq!(count_form_partitioned(n, form, w), count_form(n, form));
    }

    /// Exclusions are false statements, survivals carry a checked root.
    #[test]
    fn exclusion_soundness(d in prop::sample::select(odd_primes()), s in 1u64..500, t in 1u64..500, c1 in 1u64..500, c2 in 1u64..500, two in any::<bool>()) {
        prop_assume!(t % d != 0);
        let label = if two { CaseLabel::Case2 } else { CaseLabel::Case1 };
        let v = case_exclusion(d, label, &CaseWitnesses { s, t, c1, c2 }).unwrap();
        match v {
            CaseVerdict::Excluded(r) => {
                let eq = r.equation.unwrap();
                prop_assert!(!eq.holds());
                prop_assert_eq!(legendre(eq.target, d).unwrap(), -1);
                for x in 0..d.min(2000) {
                    prop_assert_ne!(mul_mod(x, x, d), reduce_signed(eq.target, d));
                }
            }
            CaseVerdict::Survives(sv) => {
                prop_assert_eq!(mul_mod(sv.solution, sv.solution, d), reduce_signed(sv.equation.target, d));
            }
            CaseVerdict::Reduces => prop_assert!(false),
        }
    }
}
