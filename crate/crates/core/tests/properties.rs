use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use pfilt_core::certify::{certify, criteria, refine, Certificate, Status};
use pfilt_core::charring::{euler_character, steinberg_character, weyl_character, FormalCharacter};
use pfilt_core::rootsys::{RootSystem, WeylElement};
use pfilt_core::simples::{DecompTable, Provenance, Simples};
use pfilt_core::weights::{dot_dominantize, split, DotNormal, Weight};
use proptest::prelude::*;

fn system(name: &str) -> Arc<RootSystem> {
    RootSystem::parse(name).unwrap()
}

fn weight(rank: usize, lo: i64, hi: i64) -> impl Strategy<Value = Weight> {
    prop::collection::vec(lo..=hi, rank).prop_map(Weight)
}

fn rank2() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["A2", "B2", "G2", "A1xA1"])
}

/// Kostant partition function for A2: `aα1 + bα2` splits as
/// `kα1 + kα2 + (a−k)α1 + (b−k)α2` for `0 ≤ k ≤ min(a, b)`.
fn kostant_a2(a: i64, b: i64) -> i64 {
    if a < 0 || b < 0 {
        0
    } else {
        a.min(b) + 1
    }
}

/// The six elements of W(A2) as integer matrices on fundamental-weight
/// coordinates, with their determinants.
fn weyl_group_a2() -> Vec<([[i64; 2]; 2], i64)> {
    let s1 = [[-1, 0], [1, 1]];
    let s2 = [[1, 1], [0, -1]];
    let mul = |a: [[i64; 2]; 2], b: [[i64; 2]; 2]| {
        let mut c = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        c
    };
    let mut seen = HashSet::new();
    let mut out = vec![([[1, 0], [0, 1]], 1)];
    seen.insert([[1, 0], [0, 1]]);
    let mut i = 0;
    while i < out.len() {
        let (m, d) = out[i];
        for s in [s1, s2] {
            let n = mul(s, m);
            if seen.insert(n) {
                out.push((n, -d));
            }
        }
        i += 1;
    }
    out
}

/// Weight multiplicity in χ(λ) for A2 from Kostant's formula.
fn kostant_multiplicity(lambda: &Weight, mu: &Weight) -> i64 {
    let lr = [lambda[0] + 1, lambda[1] + 1];
    let mr = [mu[0] + 1, mu[1] + 1];
    let mut total = 0;
    for (m, det) in weyl_group_a2() {
        let w = [m[0][0] * lr[0] + m[0][1] * lr[1], m[1][0] * lr[0] + m[1][1] * lr[1]];
        let (x, y) = (w[0] - mr[0], w[1] - mr[1]);
        // fundamental to simple-root coordinates
        if (2 * x + y) % 3 != 0 || (x + 2 * y) % 3 != 0 {
            continue;
        }
        total += det * kostant_a2((2 * x + y) / 3, (x + 2 * y) / 3);
    }
    total
}

fn random_word(rs: &RootSystem, letters: &[usize]) -> WeylElement {
    WeylElement {
        word: letters.iter().map(|i| i % rs.rank()).collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_recomposes(v in weight(3, 0, 400), p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 0u32..4) {
        let s = split(&v, p, n);
        prop_assert_eq!(s.recompose(), v);
        prop_assert!(s.lambda0.coords().iter().all(|&c| c >= 0 && c < (p as i64).pow(n)));
    }

    #[test]
    fn dot_action_sign_matches_word(name in rank2(), mu in weight(2, -8, 8), letters in prop::collection::vec(0usize..4, 0..8)) {
        let rs = system(name);
        let w = random_word(&rs, &letters);
        let moved = w.dot_act(&rs, &mu);
        match (dot_dominantize(&rs, &mu), dot_dominantize(&rs, &moved)) {
            (DotNormal::Singular, b) => prop_assert_eq!(b, DotNormal::Singular),
            (DotNormal::Regular { sign, weight }, DotNormal::Regular { sign: s2, weight: w2 }) => {
                prop_assert_eq!(weight, w2);
                prop_assert_eq!(s2, sign * w.det());
            }
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn euler_character_is_alternating(name in rank2(), mu in weight(2, -6, 6), letters in prop::collection::vec(0usize..4, 0..6)) {
        let rs = system(name);
        let w = random_word(&rs, &letters);
        let a = euler_character(&rs, &w.dot_act(&rs, &mu)).unwrap();
        let b = euler_character(&rs, &mu).unwrap().scale(w.det());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dimension_is_multiplicative(name in rank2(), a in weight(2, 0, 3), b in weight(2, 0, 3)) {
        let rs = system(name);
        let x = weyl_character(&rs, &a).unwrap();
        let y = weyl_character(&rs, &b).unwrap();
        prop_assert_eq!(x.mul(&y).unwrap().dimension(), x.dimension() * y.dimension());
    }

    #[test]
    fn frobenius_twist_is_a_ring_map(a in weight(2, 0, 3), b in weight(2, 0, 3), p in prop::sample::select(vec![2u64, 3]), n in 0u32..3) {
        let rs = system("B2");
        let x = weyl_character(&rs, &a).unwrap();
        let y = weyl_character(&rs, &b).unwrap();
        prop_assert_eq!(
            x.mul(&y).unwrap().frobenius_twist(p, n),
            x.frobenius_twist(p, n).mul(&y.frobenius_twist(p, n)).unwrap()
        );
        prop_assert_eq!(
            x.add(&y).unwrap().frobenius_twist(p, n),
            x.frobenius_twist(p, n).add(&y.frobenius_twist(p, n)).unwrap()
        );
    }

    #[test]
    fn freudenthal_matches_kostant(lambda in weight(2, 0, 6)) {
        let rs = system("A2");
        let chi = weyl_character(&rs, &lambda).unwrap();
        for (mu, m) in chi.terms() {
            prop_assert_eq!(*m, kostant_multiplicity(&lambda, mu), "μ = {}", mu);
        }
        // and nothing Kostant sees is missing
        for x in -12..=12 {
            for y in -12..=12 {
                let mu = Weight(vec![x, y]);
                prop_assert_eq!(chi.coefficient(&mu), kostant_multiplicity(&lambda, &mu));
            }
        }
    }

    #[test]
    fn dimension_matches_weyl_formula(name in prop::sample::select(vec!["A2", "B2", "G2", "A3", "B3", "C3"]), seed in weight(3, 0, 2)) {
        let rs = system(name);
        let lambda = Weight(seed.coords()[..rs.rank()].to_vec());
        prop_assert_eq!(weyl_character(&rs, &lambda).unwrap().dimension() as i128, rs.weyl_dimension(&lambda));
    }

    #[test]
    fn simple_below_weyl(name in prop::sample::select(vec!["A2", "B2"]), p in prop::sample::select(vec![2u64, 3, 5]), lambda in weight(2, 0, 12)) {
        let rs = system(name);
        let s = Simples::with_bundled(&rs, p).unwrap();
        let l = s.exact_character(&lambda).unwrap();
        let chi = weyl_character(&rs, &lambda).unwrap();
        prop_assert!(l.is_nonnegative());
        prop_assert!(l.is_w_symmetric());
        prop_assert!(chi.sub(&l).unwrap().is_nonnegative());
        prop_assert_eq!(l.coefficient(&lambda), 1);
    }

    #[test]
    fn steinberg_factorization(lambda in weight(2, 0, 30), p in prop::sample::select(vec![2u64, 3])) {
        let rs = system("A2");
        let s = Simples::with_bundled(&rs, p).unwrap();
        let parts = split(&lambda, p, 1);
        let direct = s.exact_character(&lambda).unwrap();
        let via = s
            .exact_character(&parts.lambda0)
            .unwrap()
            .mul(&s.exact_character(&parts.lambda1).unwrap().frobenius_twist(p, 1))
            .unwrap();
        prop_assert_eq!(direct, via);
    }

    #[test]
    fn global_bound_implies_main_bound(name in prop::sample::select(vec!["A2", "B2", "A1xA1", "A1"]), p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), seed in weight(2, 0, 40)) {
        let rs = system(name);
        let lambda = Weight(seed.coords()[..rs.rank()].to_vec());
        let s = Simples::with_bundled(&rs, p).unwrap();
        let r = criteria(&s, &lambda).unwrap();
        prop_assert!(!r.flags.global_bound || r.flags.main_bound);
        if let Some(hl) = r.h_lambda {
            prop_assert!(hl <= r.h);
        }
    }

    #[test]
    fn character_json_round_trip(name in rank2(), lambda in weight(2, 0, 3), k in -3i64..=3) {
        let rs = system(name);
        let c = weyl_character(&rs, &lambda).unwrap().scale(k);
        let j = c.to_json();
        let back = FormalCharacter::from_json(&j).unwrap();
        prop_assert_eq!(back.to_json(), j);
        prop_assert_eq!(back, c);
    }

    #[test]
    fn certificate_json_round_trip(lambda in weight(2, 0, 8), n in 0u32..3) {
        let rs = system("A2");
        let s = Simples::with_bundled(&rs, 2).unwrap();
        let c = certify(&s, &lambda, n).unwrap();
        let j = c.to_json();
        prop_assert_eq!(Certificate::from_json(&j).unwrap().to_json(), j);
    }

    #[test]
    fn refine_composes(lambda in 0i64..=40, p in prop::sample::select(vec![2u64, 3]), m in 0u32..3, extra in 0u32..2) {
        let rs = system("A1");
        let s = Simples::new(&rs, p).unwrap();
        let base = Certificate::good_filtration(&Weight(vec![lambda]), p);
        let r = m + extra;
        let stepwise = refine(&s, &refine(&s, &base, m).unwrap(), r).unwrap();
        let direct = refine(&s, &base, r).unwrap();
        prop_assert_eq!(&stepwise, &direct);
        prop_assert!(direct.euler_identity_holds(&s).unwrap());
    }
}

#[test]
fn a1_weyl_closed_form() {
    let rs = system("A1");
    for n in 0..30 {
        let chi = weyl_character(&rs, &Weight(vec![n])).unwrap();
        let want: BTreeMap<Weight, i64> = (0..=n).map(|k| (Weight(vec![n - 2 * k]), 1)).collect();
        let got: BTreeMap<Weight, i64> = chi.terms().map(|(w, m)| (w.clone(), *m)).collect();
        assert_eq!(got, want);
    }
}

#[test]
fn tables_invert_to_weyl_characters() {
    for (name, p) in [("A2", 2), ("A2", 3), ("A2", 5), ("B2", 2), ("B2", 3), ("B2", 5), ("B2", 7)] {
        let rs = system(name);
        let s = Simples::with_bundled(&rs, p).unwrap();
        let table = s.table();
        for row in table.rows() {
            let mut sum = FormalCharacter::zero(&rs);
            for (mu, d) in &row.factors {
                sum = sum.add(&s.exact_character(mu).unwrap().scale(*d)).unwrap();
            }
            assert_eq!(sum, weyl_character(&rs, &row.lambda).unwrap(), "{name} p={p} row {}", row.lambda);
        }
        let again = DecompTable::from_json(&table.to_json(), &rs, Provenance::Ingested).unwrap();
        assert_eq!(again.to_json(), table.to_json());
    }
}

#[test]
fn steinberg_dimension() {
    for (name, p, n) in [("A1", 2, 3), ("A2", 3, 1), ("B2", 2, 2), ("G2", 2, 1)] {
        let rs = system(name);
        let st = steinberg_character(&rs, p, n);
        let positive = rs.positive_roots().len() as u32;
        assert_eq!(st.dimension(), (p as i64).pow(n * positive));
    }
}

#[test]
fn unknown_never_refines() {
    let rs = system("G2");
    let s = Simples::new(&rs, 3).unwrap();
    let c = certify(&s, &Weight(vec![1, 1]), 1).unwrap();
    assert_eq!(c.status, Status::Unknown);
    assert!(refine(&s, &c, 2).is_err());
}
