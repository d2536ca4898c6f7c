use std::collections::HashMap;

use bincum::algebra::{poly_substitute, rat, MultilinearPoly};
use bincum::combinatorics::{cube_group, subsets_by_size, SubsetMask};
use bincum::fixtures::{parse_all, PRINCIPAL_MINOR_GENERATORS_N4};
use bincum::hyperdet::*;
use bincum::transforms::*;
use bincum::{Rational, SparsePoly};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_probs(rng: &mut ChaCha8Rng, n: usize) -> BinaryTable {
    let raw: Vec<i64> = (0..1 << n).map(|_| rng.gen_range(1..=20)).collect();
    let total: i64 = raw.iter().sum();
    BinaryTable::new(n, Coords::Prob, raw.iter().map(|&x| rat(x, total)).collect()).unwrap()
}

#[test]
fn det4_census() {
    let p = hyperdet_cumulants(4).unwrap();
    assert_eq!(p.num_terms(), 13_819);
    assert_eq!(zgrade(&p).unwrap(), Grading::Homogeneous(vec![12, 12, 12, 12]));
    assert_eq!(p.total_degree(), Some(24));
    assert_eq!(p.min_total_degree(), Some(15));
    let top = [("k123", 3), ("k124", 3), ("k134", 3), ("k234", 3), ("k1234", 3)];
    assert_eq!(p.coefficient_of(&top).unwrap(), rat(1, 1));
    let lead = [("k12", 6), ("k13", 5), ("k14", 1), ("k23", 1), ("k24", 5), ("k34", 6)];
    assert_eq!(p.coefficient_of(&lead).unwrap(), rat(256, 1));
    let other = [("k34", 1), ("k123", 3), ("k124", 3), ("k134", 2), ("k234", 2), ("k1234", 4)];
    assert_eq!(p.coefficient_of(&other).unwrap(), rat(-1, 1));
    assert_eq!(p.ring().num_vars(), 11);
    assert!(p.ring().vars().iter().all(|v| v.len() >= 3));
    // cached copy is identical
    assert_eq!(hyperdet_cumulants(4).unwrap(), p);
}

#[test]
fn schlafli_is_independent_of_the_slicing_axis() {
    let ring = cumulant_ring(4, 2);
    let mu = cumulants_to_moments_exp(&symbolic_cumulants(4, &ring)).unwrap();
    let t = MultilinearPoly::new(4, mu).unwrap();
    let reference = schlafli_det4(&t, 4).unwrap();
    assert_eq!(reference, hyperdet_cumulants(4).unwrap());
    for axis in 1..=3 {
        assert_eq!(schlafli_det4(&t, axis).unwrap(), reference, "axis {axis}");
    }
    assert!(schlafli_det4(&t, 5).is_err());
}

#[test]
fn rank_one_tensor_has_zero_hyperdeterminant() {
    let ring = cumulant_ring(4, 2);
    let t = MultilinearPoly::from_fn(4, |_| ring.one());
    assert!(schlafli_det4(&t, 4).unwrap().is_zero());
    let small = MultilinearPoly::from_fn(3, |_| ring.one());
    assert!(schlafli_det4(&small, 3).is_err());
}

#[test]
fn moment_quartic_becomes_the_tangle() {
    let h = hyperdet3_moments();
    assert_eq!(h.total_degree().map(BigInt::from), Some(cayley_degree(3)));
    let kr = cumulant_ring(3, 1);
    let mu = cumulants_to_moments_partition(&symbolic_cumulants(3, &kr)).unwrap();
    let bindings: HashMap<String, SparsePoly> = SubsetMask::full(3)
        .subsets()
        .skip(1)
        .map(|x| (muvar_name(x), mu[x.index()].clone()))
        .collect();
    let sub = poly_substitute(&h, &bindings, &kr.zero()).unwrap();
    assert_eq!(sub.into_ring(&cumulant_ring(3, 2)).unwrap(), hyperdet_cumulants(3).unwrap());
    // product distribution: mu_I = prod mu_i
    let m = [rat(1, 3), rat(3, 4), rat(2, 5)];
    let values: HashMap<String, Rational> = SubsetMask::full(3)
        .subsets()
        .skip(1)
        .map(|x| (muvar_name(x), x.elements().fold(rat(1, 1), |a, i| a * &m[i - 1])))
        .collect();
    assert!(h.evaluate_named(&values).unwrap().is_zero());
}

#[test]
fn evaluation_on_tables() {
    let two_point = BinaryTable::from_fn(2, Coords::Prob, |x| {
        if x.is_empty() || x == SubsetMask::full(2) { rat(1, 2) } else { rat(0, 1) }
    })
    .unwrap();
    assert_eq!(hyperdet_eval(&two_point).unwrap(), rat(1, 4));
    for n in 2..=4 {
        let marg = [rat(1, 3), rat(2, 7), rat(4, 5), rat(1, 2)];
        let prod = BinaryTable::from_fn(n, Coords::Prob, |x| {
            (1..=n).fold(rat(1, 1), |acc, i| {
                acc * if x.contains(i) { marg[i - 1].clone() } else { rat(1, 1) - &marg[i - 1] }
            })
        })
        .unwrap();
        assert!(hyperdet_eval(&prod).unwrap().is_zero(), "n={n}");
    }
    let five = BinaryTable::from_fn(5, Coords::Prob, |_| rat(1, 32)).unwrap();
    assert!(hyperdet_eval(&five).is_err());
}

#[test]
fn tangle_vanishes_on_symbolic_tangential_parametrization() {
    let p = bincum::models::tangential_parametrization(3).unwrap();
    let h = hyperdet_cumulants(3).unwrap();
    assert!(poly_substitute(&h, &p.bindings(), &p.ring().zero()).unwrap().is_zero());
}

/// Checks `Det(g t) = chi(g) Det(t)` with one sign `chi(g)` per symmetry.
fn check_sign_character(n: usize, gs: &[bincum::CubeSymmetry], tables: &[BinaryTable]) {
    let base: Vec<Rational> = tables.iter().map(|t| hyperdet_eval(t).unwrap()).collect();
    assert!(base.iter().all(|v| !v.is_zero()));
    for g in gs {
        let mut chi: Option<Rational> = None;
        for (t, v) in tables.iter().zip(&base) {
            let r = hyperdet_eval(&t.act_symmetry(g).unwrap()).unwrap() / v;
            assert!(r == rat(1, 1) || r == rat(-1, 1), "n={n}: ratio {r}");
            match &chi {
                None => chi = Some(r),
                Some(c) => assert_eq!(c, &r, "n={n}: inconsistent sign"),
            }
        }
    }
}

#[test]
fn invariance_under_cube_symmetries() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let tables: Vec<BinaryTable> = (0..5).map(|_| random_probs(&mut rng, 3)).collect();
    check_sign_character(3, &cube_group(3).unwrap(), &tables);
    let group = cube_group(4).unwrap();
    let sample: Vec<_> = (0..24).map(|_| group[rng.gen_range(0..group.len())].clone()).collect();
    let tables: Vec<BinaryTable> = (0..3).map(|_| random_probs(&mut rng, 4)).collect();
    check_sign_character(4, &sample, &tables);
}

#[test]
fn cayley_degrees_and_moment_degree() {
    for (n, c) in [(2, 2), (3, 4), (4, 24), (5, 128)] {
        assert_eq!(cayley_degree(n), BigInt::from(c));
    }
    assert_eq!(hyperdet3_moments().total_degree(), Some(4));
    // the n=4 expansion lives on tables with mu_{} = 1, so degrees drop below C_4
    assert_eq!(hyperdet_cumulants(4).unwrap().total_degree(), Some(24));
}

#[test]
fn principal_minor_cumulants_follow_cycle_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..10 {
        let a = random_symmetric(&mut rng, 4);
        let k = principal_minor_cumulants(&a).unwrap();
        for i in 0..4 {
            assert_eq!(k.get(SubsetMask::singleton(i + 1)), &a[i][i]);
        }
        for pair in subsets_by_size(4, 2).into_iter().filter(|x| x.len() == 2) {
            let e: Vec<usize> = pair.elements().map(|i| i - 1).collect();
            assert_eq!(k.get(pair), &-(&a[e[0]][e[1]] * &a[e[0]][e[1]]));
        }
        for triple in subsets_by_size(4, 3).into_iter().filter(|x| x.len() == 3) {
            let e: Vec<usize> = triple.elements().map(|i| i - 1).collect();
            let expected = rat(2, 1) * &a[e[0]][e[1]] * &a[e[0]][e[2]] * &a[e[1]][e[2]];
            assert_eq!(k.get(triple), &expected);
        }
        let (a12, a13, a14, a23, a24, a34) = (&a[0][1], &a[0][2], &a[0][3], &a[1][2], &a[1][3], &a[2][3]);
        let four = rat(-2, 1) * (a12 * a13 * a24 * a34 + a12 * a14 * a23 * a34 + a13 * a14 * a23 * a24);
        assert_eq!(k.get(SubsetMask::full(4)), &four);
    }
    let diag: Vec<Vec<Rational>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { rat(i as i64 + 2, 3) } else { rat(0, 1) }).collect())
        .collect();
    let k = principal_minor_cumulants(&diag).unwrap();
    assert!(subsets_by_size(4, 2).iter().all(|&x| k.get(x).is_zero()));
}

#[test]
fn principal_minor_ideal() {
    assert!(verify_principal_minor_ideal(100, 2024).unwrap());
    let ring = cumulant_ring(4, 2);
    let mut gens = parse_all(&ring, &PRINCIPAL_MINOR_GENERATORS_N4).unwrap();
    assert_eq!(gens.len(), 20);
    // hand evaluation: a12 = a13 = a23 = 1, zero diagonal
    let a: Vec<Vec<Rational>> = (0..3)
        .map(|i| (0..3).map(|j| if i == j { rat(0, 1) } else { rat(1, 1) }).collect())
        .collect();
    let k = principal_minor_cumulants(&a).unwrap();
    let s = |x: &str| SubsetMask::parse_key(x, 3).unwrap();
    let value = rat(4, 1) * k.get(s("12")) * k.get(s("13")) * k.get(s("23")) + k.get(s("123")).pow(2);
    assert_eq!(value, rat(0, 1));
    // negative control: 4 -> 5 in the first generator
    gens[0] = ring.parse("5*k12*k13*k23 + k123^2").unwrap();
    assert!(!principal_minor_relations_hold(&gens, 5, 2024).unwrap());
}
