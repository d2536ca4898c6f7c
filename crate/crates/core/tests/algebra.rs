use std::collections::HashMap;
use std::sync::Arc;

use bincum::algebra::*;
use bincum::combinatorics::SubsetMask;
use bincum::CommRing;
use itertools::Itertools;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

fn random_ml(rng: &mut ChaCha8Rng, n: usize, constant: Option<Rational>) -> MultilinearPoly<Rational> {
    let mut f = MultilinearPoly::from_fn(n, |_| small_rational(rng));
    if let Some(c) = constant {
        f.set_coeff(SubsetMask::EMPTY, c);
    }
    f
}

/// Embeds a squarefree polynomial into `Q[x1..xn]`.
fn to_sparse(f: &MultilinearPoly<Rational>, ring: &Arc<PolyRing>) -> SparsePoly {
    let mut out = ring.zero();
    for s in SubsetMask::full(f.n()).subsets() {
        let mono = s
            .elements()
            .fold(ring.one(), |acc, i| acc.mul(&ring.var_at(i - 1)));
        out = out.add(&mono.scale(f.coeff(s)));
    }
    out
}

/// Drops every monomial with a squared variable.
fn reduce(p: &SparsePoly, n: usize) -> MultilinearPoly<Rational> {
    let mut out = MultilinearPoly::constant(n, rat(0, 1));
    for (m, c) in p.terms() {
        if m.exponents().iter().all(|&e| e <= 1) {
            let s = SubsetMask::from_elements(
                m.exponents().iter().enumerate().filter(|(_, &e)| e == 1).map(|(i, _)| i + 1),
            );
            out.set_coeff(s, c.clone());
        }
    }
    out
}

#[test]
fn truncated_product_matches_full_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ring = PolyRing::new((1..=4).map(|i| format!("x{i}"))).unwrap();
    for _ in 0..50 {
        let f = random_ml(&mut rng, 4, None);
        let g = random_ml(&mut rng, 4, None);
        let full = to_sparse(&f, &ring).mul(&to_sparse(&g, &ring));
        assert_eq!(ml_mul(&f, &g).unwrap(), reduce(&full, 4));
    }
    let a = MultilinearPoly::new(1, vec![rat(1, 1), rat(1, 1)]).unwrap();
    assert_eq!(ml_mul(&a, &a).unwrap().coeffs(), &[rat(1, 1), rat(2, 1)]);
    let b = MultilinearPoly::new(2, vec![rat(1, 1); 4]).unwrap();
    assert!(ml_mul(&a, &b).is_err());
}

#[test]
fn ring_laws_and_log_exp_inverses() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let f = random_ml(&mut rng, n, None);
        let g = random_ml(&mut rng, n, None);
        let h = random_ml(&mut rng, n, None);
        assert_eq!(ml_mul(&f, &g).unwrap(), ml_mul(&g, &f).unwrap());
        assert_eq!(
            ml_mul(&ml_mul(&f, &g).unwrap(), &h).unwrap(),
            ml_mul(&f, &ml_mul(&g, &h).unwrap()).unwrap()
        );
        assert_eq!(
            ml_mul(&f, &g.add(&h).unwrap()).unwrap(),
            ml_mul(&f, &g).unwrap().add(&ml_mul(&f, &h).unwrap()).unwrap()
        );
        let k = random_ml(&mut rng, n, Some(rat(0, 1)));
        assert_eq!(ml_log(&ml_exp(&k).unwrap()).unwrap(), k);
        let m = random_ml(&mut rng, n, Some(rat(1, 1)));
        assert_eq!(ml_exp(&ml_log(&m).unwrap()).unwrap(), m);
    }
    let bad = MultilinearPoly::new(1, vec![rat(2, 1), rat(0, 1)]).unwrap();
    assert!(ml_log(&bad).is_err());
    assert!(ml_exp(&bad).is_err());
}

#[test]
fn exp_of_two_cumulants() {
    let ring = PolyRing::new(["k1", "k2"]).unwrap();
    let k = MultilinearPoly::new(
        2,
        vec![ring.zero(), ring.var("k1").unwrap(), ring.var("k2").unwrap(), ring.zero()],
    )
    .unwrap();
    let m = ml_exp(&k).unwrap();
    assert_eq!(m.coeff(SubsetMask(3)), &ring.parse("k1*k2").unwrap());
    assert!(m.coeff(SubsetMask::EMPTY).is_one_value());
    let zero = MultilinearPoly::constant(3, rat(0, 1));
    assert_eq!(ml_exp(&zero).unwrap(), MultilinearPoly::constant(3, rat(1, 1)));
}

/// Leibniz expansion; fine for the sparse 7x7 Sylvester matrix.
fn leibniz_det(m: &[Vec<SparsePoly>], like: &SparsePoly) -> SparsePoly {
    let n = m.len();
    let mut total = like.zero_like();
    for perm in (0..n).permutations(n) {
        if perm.iter().enumerate().any(|(i, &j)| m[i][j].is_zero()) {
            continue;
        }
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let prod = perm
            .iter()
            .enumerate()
            .fold(like.one_like(), |acc, (i, &j)| acc.mul(&m[i][j]));
        total = if inversions % 2 == 0 { total.add(&prod) } else { total.sub(&prod) };
    }
    total
}

#[test]
fn discriminant_equals_resultant_over_leading_coefficient() {
    let ring = PolyRing::new(["a", "b", "c", "d", "e"]).unwrap();
    let v: Vec<SparsePoly> = ["a", "b", "c", "d", "e"].iter().map(|x| ring.var(x).unwrap()).collect();
    let zero = ring.zero();
    let f = v.clone();
    let df: Vec<SparsePoly> = (0..4).map(|i| v[i].scale(&rat(4 - i as i64, 1))).collect();
    // Sylvester matrix of f (degree 4) and f' (degree 3): 3 rows of f, 4 rows of f'
    let mut rows = Vec::new();
    for shift in 0..3 {
        let mut row = vec![zero.clone(); 7];
        for (j, c) in f.iter().enumerate() {
            row[shift + j] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..4 {
        let mut row = vec![zero.clone(); 7];
        for (j, c) in df.iter().enumerate() {
            row[shift + j] = c.clone();
        }
        rows.push(row);
    }
    let res = leibniz_det(&rows, &zero);
    let disc = binary_quartic_discriminant(&v[0], &v[1], &v[2], &v[3], &v[4]);
    assert_eq!(disc.mul(&v[0]), res);
    assert_eq!(disc.num_terms(), 16);
    assert_eq!(disc.coefficient_of(&[("a", 3), ("e", 3)]).unwrap(), rat(256, 1));
    assert_eq!(disc.coefficient_of(&[("a", 2), ("d", 4)]).unwrap(), rat(-27, 1));
    assert_eq!(disc.total_degree(), Some(6));
    assert_eq!(disc.min_total_degree(), Some(6));
}

fn quartic_from_roots(roots: &[Rational; 4]) -> [Rational; 5] {
    // coefficients of prod (x - r), highest degree first
    let mut c = vec![rat(1, 1)];
    for r in roots {
        let mut next = vec![rat(0, 1); c.len() + 1];
        for (i, x) in c.iter().enumerate() {
            next[i] += x;
            next[i + 1] -= x * r;
        }
        c = next;
    }
    [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone(), c[4].clone()]
}

#[test]
fn discriminant_detects_repeated_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let [a, b, c, d, e] = [1, 0, 0, 0, 0].map(|x| rat(x, 1));
    assert_eq!(binary_quartic_discriminant(&a, &b, &c, &d, &e), rat(0, 1));
    let [a, b, c, d, e] = [1, 0, -5, 0, 4].map(|x| rat(x, 1));
    assert_eq!(binary_quartic_discriminant(&a, &b, &c, &d, &e), rat(5184, 1));
    for trial in 0..50 {
        let mut roots: [Rational; 4] = std::array::from_fn(|_| small_rational(&mut rng));
        let repeated = trial % 2 == 0;
        if repeated {
            roots[3] = roots[rng.gen_range(0..3)].clone();
        } else {
            while roots.iter().tuple_combinations().any(|(x, y)| x == y) {
                roots = std::array::from_fn(|_| small_rational(&mut rng));
            }
        }
        let lead = rat(rng.gen_range(1..=4), 1);
        let [a, b, c, d, e] = quartic_from_roots(&roots).map(|x| x * &lead);
        let disc = binary_quartic_discriminant(&a, &b, &c, &d, &e);
        assert_eq!(disc.is_zero_value(), repeated, "roots {roots:?}");
    }
}

#[test]
fn substitution_matches_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ring = PolyRing::new(["x", "y", "z"]).unwrap();
    let p = ring.parse("3*x^2*y - y*z^3/2 + 7 - x*y*z + z^4").unwrap();
    for _ in 0..20 {
        let point: Vec<Rational> = (0..3).map(|_| small_rational(&mut rng)).collect();
        let bindings: HashMap<String, Rational> =
            ["x", "y", "z"].iter().map(|v| v.to_string()).zip(point.iter().cloned()).collect();
        let direct = p.terms().fold(rat(0, 1), |acc, (m, c)| {
            let mut t = c.clone();
            for (v, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= v;
                }
            }
            acc + t
        });
        assert_eq!(poly_substitute(&p, &bindings, &rat(0, 1)).unwrap(), direct);
        assert_eq!(p.evaluate(&point), direct);
    }
    let k = PolyRing::new(["k12"]).unwrap();
    let b: HashMap<String, Rational> = [("k12".to_string(), rat(0, 1))].into();
    assert!(poly_substitute(&k.var("k12").unwrap(), &b, &rat(0, 1)).unwrap().is_zero_value());
    assert!(poly_substitute(&p, &b, &rat(0, 1)).is_err());
}

#[test]
fn toric_bindings_kill_the_tangle() {
    let ring = PolyRing::new(["s1", "s2", "s3"]).unwrap();
    let s: Vec<SparsePoly> = (1..=3).map(|i| ring.var(&format!("s{i}")).unwrap()).collect();
    let k = bincum::models::tangential_cumulants(&s).unwrap();
    let bindings: HashMap<String, SparsePoly> = ["12", "13", "23", "123"]
        .iter()
        .map(|key| (format!("k{key}"), k[SubsetMask::parse_key(key, 3).unwrap().index()].clone()))
        .collect();
    let kr = bincum::transforms::cumulant_ring(3, 2);
    let tangle = kr.parse("k123^2 + 4*k12*k13*k23").unwrap();
    assert!(poly_substitute(&tangle, &bindings, &ring.zero()).unwrap().is_zero());
}

#[test]
fn jacobian_rank_basics() {
    let ring = PolyRing::new(["t1", "t2"]).unwrap();
    let params = vec!["t1".to_string(), "t2".to_string()];
    assert_eq!(jacobian_rank(&[ring.parse("t1*t2").unwrap()], &params, 0).unwrap(), 1);
    assert_eq!(jacobian_rank(&[ring.zero(), ring.zero()], &params, 0).unwrap(), 0);
}

proptest! {
    #[test]
    fn rationalize_recovers_small_fractions(p in -500i64..500, q in 1i64..500) {
        let x = rat(p, q);
        let approx = p as f64 / q as f64;
        prop_assert_eq!(rationalize(approx, 1000).unwrap(), x);
    }

    #[test]
    fn format_parse_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = rat(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }
}
