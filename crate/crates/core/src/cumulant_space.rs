//! The space `K_n` of cumulants of probability distributions on `2^[n]`:
//! its defining inequalities, exact membership, and numerical maximization
//! of the top cumulant `k_{12...n}` over the probability simplex.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{rationalize, to_f64, Rational, SparsePoly};
use crate::combinatorics::{cube_group, necklace_count, set_partitions, SubsetMask};
use crate::error::{Error, Result};
use crate::models::kappa_poly;
use crate::transforms::{cumulant_ring, cumulants_to_moments_partition, kvar_name, symbolic_cumulants, BinaryTable, Coords};

/// Denominator bound used when floating-point input is rationalized.
pub const RATIONALIZE_DEN: u64 = 1_000_000;
/// Largest n for membership tests.
pub const MAX_MEMBERSHIP_N: usize = 6;
/// Largest n for the optimizer and the inequality list.
pub const MAX_OPTIMIZE_N: usize = 5;

/// A real cumulant vector, dense by subset mask (`values[0]` is `k_{} = 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct CumulantPoint {
    n: usize,
    values: Vec<f64>,
}

impl CumulantPoint {
    pub fn new(n: usize, values: Vec<f64>) -> Result<CumulantPoint> {
        if n == 0 || n > MAX_MEMBERSHIP_N {
            return Err(Error::Unsupported(format!("cumulant points with n = {n}")));
        }
        if values.len() != 1 << n {
            return Err(Error::InvalidArgument(format!(
                "a point with n = {n} needs {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("cumulant values must be finite".into()));
        }
        if values[0] != 0.0 {
            return Err(Error::Constraint(format!("k_{{}} must be 0, got {}", values[0])));
        }
        Ok(CumulantPoint { n, values })
    }

    pub fn from_table(t: &BinaryTable) -> Result<CumulantPoint> {
        let k = t.to_coords(Coords::Cumulant)?;
        CumulantPoint::new(k.n(), k.entries().iter().map(to_f64).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, s: SubsetMask) -> f64 {
        self.values[s.index()]
    }

    /// Exact cumulant table with every value rationalized to denominator at most `max_den`.
    pub fn rationalize(&self, max_den: u64) -> Result<BinaryTable> {
        let mut entries = self
            .values
            .iter()
            .map(|&v| rationalize(v, max_den))
            .collect::<Result<Vec<_>>>()?;
        entries[0] = Rational::zero();
        BinaryTable::new(self.n, Coords::Cumulant, entries)
    }
}

/// `rho_J` on a cumulant table: `k_i -> 1 - k_i` for `i in J`, and
/// `k_B -> (-1)^{|B ∩ J|} k_B` for `|B| >= 2`.
pub fn apply_rho<T: Clone>(
    k: &[T],
    j: SubsetMask,
    one_minus: impl Fn(&T) -> T,
    negate: impl Fn(&T) -> T,
) -> Vec<T> {
    k.iter()
        .enumerate()
        .map(|(i, v)| {
            let b = SubsetMask(i as u32);
            match b.len() {
                0 => v.clone(),
                1 if j.contains(b.min_element().unwrap()) => one_minus(v),
                1 => v.clone(),
                _ if b.intersection(j).len() % 2 == 1 => negate(v),
                _ => v.clone(),
            }
        })
        .collect()
}

/// The `2^n` polynomials `sum_pi prod_{B in pi} rho_J(k_B)`, indexed by `J`,
/// over the ring of all nonempty cumulants. Polynomial `J` is `p_{[n] \ J}`.
pub fn knspace_inequalities(n: usize) -> Result<Vec<SparsePoly>> {
    if n == 0 || n > MAX_OPTIMIZE_N {
        return Err(Error::Unsupported(format!("inequalities for n = {n}")));
    }
    let ring = cumulant_ring(n, 1);
    let k = symbolic_cumulants(n, &ring);
    let one = ring.one();
    SubsetMask::full(n)
        .subsets()
        .map(|j| {
            let kj = apply_rho(&k, j, |v| one.sub(v), |v| v.neg());
            Ok(cumulants_to_moments_partition(&kj)?.pop().expect("nonempty table"))
        })
        .collect()
}

/// Outcome of a membership test.
#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// First subset `I` (in mask order) with `p_I < 0`.
    pub witness: Option<SubsetMask>,
    /// Every subset with a negative probability.
    pub violations: Vec<SubsetMask>,
    /// The exact probability table of the (rationalized) point.
    pub probabilities: BinaryTable,
}

/// Exact membership of a rational cumulant table: all probabilities nonnegative.
pub fn knspace_membership_exact(k: &BinaryTable) -> Result<Membership> {
    if k.n() > MAX_MEMBERSHIP_N {
        return Err(Error::Unsupported(format!("membership for n = {}", k.n())));
    }
    let p = k.to_coords(Coords::Prob)?;
    let violations: Vec<SubsetMask> = SubsetMask::full(k.n())
        .subsets()
        .filter(|&s| p.get(s).is_negative())
        .collect();
    Ok(Membership {
        member: violations.is_empty(),
        witness: violations.first().copied(),
        violations,
        probabilities: p,
    })
}

/// Membership of a floating-point point after rationalizing to [`RATIONALIZE_DEN`].
pub fn knspace_membership(pt: &CumulantPoint) -> Result<Membership> {
    knspace_membership_exact(&pt.rationalize(RATIONALIZE_DEN)?)
}

/// Membership decided by the signs of [`knspace_inequalities`] at an exact point.
pub fn inequality_signs_hold(ineqs: &[SparsePoly], k: &BinaryTable) -> Result<bool> {
    let values: HashMap<String, Rational> = SubsetMask::full(k.n())
        .subsets()
        .skip(1)
        .map(|s| (kvar_name(s), k.get(s).clone()))
        .collect();
    for q in ineqs {
        if q.evaluate_named(&values)?.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `kappa_n(1/2)` together with whether `n` is odd (then the value is 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaAtHalf {
    pub n: usize,
    pub value: Rational,
    pub odd: bool,
}

impl KappaAtHalf {
    /// `(-1)^{n/2} sum_i (-1/2)^i gamma_{i,n}`, the conjectured optimum for even n.
    pub fn conjectured_optimum(&self) -> Option<Rational> {
        if self.odd {
            return None;
        }
        let half = Rational::new(BigInt::from(-1), BigInt::from(2));
        let mut sum = Rational::zero();
        let mut pow = Rational::one();
        for i in 1..=self.n {
            pow *= &half;
            sum += &pow * Rational::from_integer(BigInt::from(necklace_count(self.n, i)));
        }
        Some(if self.n / 2 % 2 == 1 { -sum } else { sum })
    }
}

pub fn kappa_at_half(n: usize) -> Result<KappaAtHalf> {
    let t = Rational::new(BigInt::from(1), BigInt::from(2));
    let value = kappa_poly(n)?.evaluate(&[t]);
    Ok(KappaAtHalf { n, value, odd: n % 2 == 1 })
}

/// `k_{[n]}` as a function of the moment vector, with its partition expansion
/// precomputed for repeated floating-point evaluation.
#[derive(Clone, Debug)]
pub struct TopCumulant {
    n: usize,
    terms: Vec<(f64, Vec<usize>)>,
}

impl TopCumulant {
    pub fn new(n: usize) -> Result<TopCumulant> {
        if n == 0 || n > MAX_OPTIMIZE_N {
            return Err(Error::Unsupported(format!("top cumulant for n = {n}")));
        }
        let terms = set_partitions(SubsetMask::full(n))
            .map(|pi| {
                let b = pi.num_blocks();
                let c = (1..b).fold(1.0, |acc, x| acc * x as f64);
                let c = if b % 2 == 1 { c } else { -c };
                (c, pi.blocks().iter().map(|s| s.index()).collect())
            })
            .collect();
        Ok(TopCumulant { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn moments(&self, p: &[f64]) -> Vec<f64> {
        let mut mu = p.to_vec();
        for bit in 0..self.n {
            for i in 0..mu.len() {
                if i >> bit & 1 == 0 {
                    mu[i] += mu[i | 1 << bit];
                }
            }
        }
        mu
    }

    /// `k_{[n]}(p)` for any vector `p` of length `2^n`.
    pub fn value(&self, p: &[f64]) -> f64 {
        let mu = self.moments(p);
        self.terms
            .iter()
            .map(|(c, blocks)| c * blocks.iter().map(|&b| mu[b]).product::<f64>())
            .sum()
    }

    /// Value and gradient with respect to `p` (chain rule through the partition formula).
    pub fn value_and_gradient(&self, p: &[f64]) -> (f64, Vec<f64>) {
        let mu = self.moments(p);
        let mut dmu = vec![0.0; mu.len()];
        let mut value = 0.0;
        for (c, blocks) in &self.terms {
            value += c * blocks.iter().map(|&b| mu[b]).product::<f64>();
            for (i, &b) in blocks.iter().enumerate() {
                let rest: f64 = blocks
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &o)| mu[o])
                    .product();
                dmu[b] += c * rest;
            }
        }
        // p_J feeds mu_I for every I ⊆ J: subset-sum transform
        for bit in 0..self.n {
            for i in 0..dmu.len() {
                if i >> bit & 1 == 1 {
                    dmu[i] += dmu[i ^ 1 << bit];
                }
            }
        }
        (value, dmu)
    }

    /// Largest relative gap between the analytic gradient and central
    /// differences (step `h`) over `points` random points of the simplex.
    pub fn gradient_check(&self, points: usize, h: f64, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..points {
            let p = random_simplex_point(&mut rng, 1 << self.n);
            let (_, g) = self.value_and_gradient(&p);
            let scale = g.iter().fold(1.0f64, |m, x| m.max(x.abs()));
            for i in 0..p.len() {
                let mut up = p.clone();
                let mut down = p.clone();
                up[i] += h;
                down[i] -= h;
                let fd = (self.value(&up) - self.value(&down)) / (2.0 * h);
                worst = worst.max((fd - g[i]).abs() / scale);
            }
        }
        worst
    }
}

/// Uniform point of the simplex (normalized exponential samples).
pub fn random_simplex_point(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..len).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

/// Euclidean projection onto the probability simplex.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

#[derive(Clone, Debug)]
pub struct OptimizerOptions {
    pub starts: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Stop when a step moves no coordinate by more than this.
    pub step_tolerance: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        OptimizerOptions {
            starts: 1000,
            seed: 0,
            max_iters: 5000,
            step_tolerance: 1e-13,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalResult {
    pub start: usize,
    pub value: f64,
    pub point: Vec<f64>,
    pub iterations: usize,
}

/// Projected gradient ascent with backtracking from one point of the simplex.
pub fn local_ascent(f: &TopCumulant, start: Vec<f64>, opts: &OptimizerOptions) -> (f64, Vec<f64>, usize) {
    let mut x = project_to_simplex(&start);
    let (mut fx, mut g) = f.value_and_gradient(&x);
    let mut eta = 1.0;
    for it in 0..opts.max_iters {
        let mut accepted = false;
        while eta > 1e-14 {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + eta * b).collect();
            let y = project_to_simplex(&trial);
            let ascent: f64 = g.iter().zip(y.iter().zip(&x)).map(|(gi, (yi, xi))| gi * (yi - xi)).sum();
            let fy = f.value(&y);
            if fy >= fx + 1e-4 * ascent {
                let moved = y.iter().zip(&x).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                x = y;
                let (v, grad) = f.value_and_gradient(&x);
                fx = v;
                g = grad;
                accepted = true;
                eta = (eta * 2.0).min(1e3);
                if moved < opts.step_tolerance {
                    return (fx, x, it + 1);
                }
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            return (fx, x, it + 1);
        }
    }
    (fx, x, opts.max_iters)
}

/// Picks a fixed representative of an argmax of `|k_{[n]}|` among its images
/// under the cube group (odd flips negate `k_{[n]}`, everything else fixes
/// it): largest `p_{}`, then the lexicographically largest table in mask order.
/// For `n = 1` there is no such symmetry and `p` is returned unchanged.
pub fn normalize_argmax(n: usize, p: &[f64]) -> Result<Vec<f64>> {
    let mut best = p.to_vec();
    if n == 1 {
        return Ok(best);
    }
    for g in cube_group(n)? {
        let mut img = vec![0.0; p.len()];
        for (i, &x) in p.iter().enumerate() {
            img[g.apply(SubsetMask(i as u32)).index()] = x;
        }
        let better = img
            .iter()
            .zip(&best)
            .find(|(a, b)| a != b)
            .map_or(false, |(a, b)| a > b);
        if better {
            best = img;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct OptimizerReport {
    pub n: usize,
    pub best_value: f64,
    pub best_start: usize,
    /// A maximizer of `|k_{[n]}|`, normalized by [`normalize_argmax`]; its
    /// `k_{[n]}` is `±best_value`.
    pub argmax: Vec<f64>,
    pub starts: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Worst relative gap between analytic and finite-difference gradients.
    pub gradient_check: f64,
    /// The argmax rationalized and renormalized exactly.
    pub argmax_exact: BinaryTable,
    /// Exact `k_{[n]}` of `argmax_exact` (sign as for `argmax`).
    pub certified_value: Rational,
    /// Exact membership of the cumulants of `argmax_exact` in `K_n`.
    pub certified: bool,
}

/// Maximizes `k_{12...n}` over the simplex from `starts` seeded random starts.
pub fn maximize_top_cumulant(n: usize, starts: usize, seed: u64) -> Result<OptimizerReport> {
    maximize_top_cumulant_with(n, &OptimizerOptions { starts, seed, ..Default::default() })
}

pub fn maximize_top_cumulant_with(n: usize, opts: &OptimizerOptions) -> Result<OptimizerReport> {
    if opts.starts == 0 {
        return Err(Error::InvalidArgument("need at least one start".into()));
    }
    let f = TopCumulant::new(n)?;
    let results: Vec<LocalResult> = (0..opts.starts)
        .into_par_iter()
        .map(|start| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(start as u64);
            let x0 = random_simplex_point(&mut rng, 1 << n);
            let (value, point, iterations) = local_ascent(&f, x0, opts);
            LocalResult { start, value, point, iterations }
        })
        .collect();
    let mut best = &results[0];
    for r in &results[1..] {
        if r.value > best.value + 1e-12 {
            best = r;
        }
    }
    let argmax = normalize_argmax(n, &best.point)?;
    let gradient_check = f.gradient_check(10, 1e-6, opts.seed);

    let raw = argmax
        .iter()
        .map(|&x| rationalize(x, RATIONALIZE_DEN))
        .collect::<Result<Vec<_>>>()?;
    let total: Rational = raw.iter().sum();
    let argmax_exact = BinaryTable::new(n, Coords::Prob, raw.iter().map(|x| x / &total).collect())?;
    let k = argmax_exact.to_coords(Coords::Cumulant)?;
    let certified_value = k.get(SubsetMask::full(n)).clone();
    let certified = knspace_membership_exact(&k)?.member;
    Ok(OptimizerReport {
        n,
        best_value: best.value,
        best_start: best.start,
        argmax,
        starts: opts.starts,
        seed: opts.seed,
        tolerance: opts.step_tolerance,
        gradient_check,
        argmax_exact,
        certified_value,
        certified,
    })
}

/// The two-point distribution `p_{} = p_{[n]} = 1/2`.
pub fn two_point_table(n: usize) -> Result<BinaryTable> {
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    BinaryTable::from_fn(n, Coords::Prob, |s| {
        if s.is_empty() || s == SubsetMask::full(n) {
            half.clone()
        } else {
            Rational::zero()
        }
    })
}
