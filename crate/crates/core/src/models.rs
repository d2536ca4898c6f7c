//! Hidden subset models, split models, and symbolic cumulant
//! parametrizations of these and of the tangential and secant varieties.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{
    jacobian_rank, ml_log, poly_substitute, random_integer_point, CommRing, MultilinearPoly, PolyRing,
    Rational, SparsePoly,
};
use crate::combinatorics::{factorial, necklace_count, SubsetMask};
use crate::error::{Error, Result};
use crate::transforms::{cumulant_ring, kvar_name, moments_to_cumulants_partition};

/// Largest `n` for which parametrizations are built.
pub const MAX_MODEL_N: usize = 6;

/// A collection `A` of hidden subsets of `[n]`, in a fixed order; the `l`-th
/// subset is hidden class `l + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HiddenSubsetModel {
    n: usize,
    subsets: Vec<SubsetMask>,
}

impl HiddenSubsetModel {
    pub fn new(n: usize, subsets: Vec<SubsetMask>) -> Result<HiddenSubsetModel> {
        if n == 0 || n > MAX_MODEL_N {
            return Err(Error::Unsupported(format!("models with n = {n}")));
        }
        if subsets.is_empty() {
            return Err(Error::InvalidArgument("a hidden subset model needs at least one subset".into()));
        }
        let full = SubsetMask::full(n);
        for (i, s) in subsets.iter().enumerate() {
            if !s.is_subset_of(full) {
                return Err(Error::InvalidArgument(format!("{s} is not a subset of [{n}]")));
            }
            if subsets[..i].contains(s) {
                return Err(Error::InvalidArgument(format!("subset {s} is listed twice")));
            }
        }
        Ok(HiddenSubsetModel { n, subsets })
    }

    /// Parses a comma-separated list such as `{},12,34,1234`.
    pub fn parse(n: usize, src: &str) -> Result<HiddenSubsetModel> {
        let subsets = src
            .split(',')
            .map(|s| SubsetMask::parse_label(s.trim(), n))
            .collect::<Result<Vec<_>>>()?;
        HiddenSubsetModel::new(n, subsets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn subsets(&self) -> &[SubsetMask] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }
}

impl fmt::Display for HiddenSubsetModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.subsets.iter().map(|s| s.label()).join(","))
    }
}

/// `n` ordered two-block partitions of the hidden classes `[m]`; split `i`
/// is stored as its first block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CsiSplitModel {
    m: usize,
    splits: Vec<SubsetMask>,
}

impl CsiSplitModel {
    pub fn new(m: usize, splits: Vec<SubsetMask>) -> Result<CsiSplitModel> {
        if m == 0 || m > 32 {
            return Err(Error::Unsupported(format!("split models with m = {m}")));
        }
        if splits.is_empty() || splits.len() > MAX_MODEL_N {
            return Err(Error::Unsupported(format!("split models with n = {}", splits.len())));
        }
        let classes = SubsetMask::full(m);
        if let Some(s) = splits.iter().find(|s| !s.is_subset_of(classes)) {
            return Err(Error::InvalidArgument(format!("block {s} is not a subset of [{m}]")));
        }
        Ok(CsiSplitModel { m, splits })
    }

    /// Parses splits such as `1|234;2|134` (`,` is also accepted between
    /// splits). Classes are single digits; `m` is the largest class named.
    pub fn parse(src: &str) -> Result<CsiSplitModel> {
        let parts: Vec<&str> = src.split([';', ',']).map(str::trim).collect();
        let mut blocks = Vec::with_capacity(parts.len());
        let mut m = 0;
        for p in &parts {
            let (first, second) = p
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("split `{p}` has no `|`")))?;
            let mut sides = [SubsetMask::EMPTY; 2];
            for (side, text) in sides.iter_mut().zip([first, second]) {
                for c in text.chars() {
                    let d = c
                        .to_digit(10)
                        .filter(|&d| d >= 1)
                        .ok_or_else(|| Error::Parse(format!("bad class `{c}` in split `{p}`")))?
                        as usize;
                    if side.contains(d) {
                        return Err(Error::Parse(format!("class {d} repeated in split `{p}`")));
                    }
                    *side = side.union(SubsetMask::singleton(d));
                    m = m.max(d);
                }
            }
            if !sides[0].is_disjoint(sides[1]) {
                return Err(Error::Parse(format!("blocks of `{p}` overlap")));
            }
            blocks.push(sides);
        }
        let classes = SubsetMask::full(m);
        for (p, sides) in parts.iter().zip(&blocks) {
            if sides[0].union(sides[1]) != classes {
                return Err(Error::Parse(format!("split `{p}` does not cover classes 1..{m}")));
            }
        }
        CsiSplitModel::new(m, blocks.into_iter().map(|b| b[0]).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.splits.len()
    }

    pub fn first_blocks(&self) -> &[SubsetMask] {
        &self.splits
    }

    /// (A1): every split has two nonempty blocks.
    pub fn satisfies_a1(&self) -> bool {
        let classes = SubsetMask::full(self.m);
        self.splits.iter().all(|&s| !s.is_empty() && s != classes)
    }

    /// (A2): no two classes share a block in every split.
    pub fn satisfies_a2(&self) -> bool {
        let signature = |l: usize| -> u32 {
            self.splits
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(l))
                .fold(0, |acc, (i, _)| acc | (1 << i))
        };
        (1..=self.m).map(signature).all_unique()
    }

    /// Same splits up to relabeling the classes and swapping blocks within
    /// each split. Tries every class permutation, so only small `m` are
    /// practical.
    pub fn equivalent(&self, other: &CsiSplitModel) -> bool {
        if self.m != other.m || self.n() != other.n() {
            return false;
        }
        let classes = SubsetMask::full(self.m);
        (0..self.m).permutations(self.m).any(|perm| {
            self.splits.iter().zip(&other.splits).all(|(s, t)| {
                let image = SubsetMask::from_elements(s.elements().map(|l| perm[l - 1] + 1));
                image == *t || image == classes.minus(*t)
            })
        })
    }
}

fn block_string(s: SubsetMask, wide: bool) -> String {
    if wide {
        format!("{{{}}}", s.elements().join(","))
    } else {
        s.elements().join("")
    }
}

impl fmt::Display for CsiSplitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.m > 9;
        let classes = SubsetMask::full(self.m);
        let mut parts = self.splits.iter().map(|&s| {
            format!(
                "{}|{}",
                block_string(s, wide),
                block_string(classes.minus(s), wide)
            )
        });
        write!(f, "{}", parts.join(","))
    }
}

/// Split `i` has first block `{l : i in J_l}`.
pub fn hsm_to_csi(h: &HiddenSubsetModel) -> CsiSplitModel {
    let splits = (1..=h.n)
        .map(|i| {
            SubsetMask::from_elements(
                h.subsets
                    .iter()
                    .enumerate()
                    .filter(|(_, j)| j.contains(i))
                    .map(|(l, _)| l + 1),
            )
        })
        .collect();
    CsiSplitModel {
        m: h.subsets.len(),
        splits,
    }
}

/// `J_l = {i : l in first block of split i}`. Fails when two classes give the
/// same subset, i.e. when (A2) is violated.
pub fn csi_to_hsm(c: &CsiSplitModel) -> Result<HiddenSubsetModel> {
    let subsets = (1..=c.m)
        .map(|l| {
            SubsetMask::from_elements(
                c.splits
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.contains(l))
                    .map(|(i, _)| i + 1),
            )
        })
        .collect();
    HiddenSubsetModel::new(c.n(), subsets)
}

/// Name of the mixing weight of hidden subset `j`, e.g. `t_12`, `t_{}`.
pub fn t_name(j: SubsetMask) -> String {
    format!("t_{}", j.label())
}

pub fn b_name(i: usize) -> String {
    format!("b{i}")
}

pub fn a0_name(i: usize) -> String {
    format!("a0_{i}")
}

/// Cumulant coordinates `k_I` as polynomials in model parameters.
#[derive(Clone, Debug)]
pub struct ModelParametrization {
    n: usize,
    ring: Arc<PolyRing>,
    free_params: Vec<String>,
    cumulants: Vec<SparsePoly>,
    with_singletons: bool,
}

impl ModelParametrization {
    /// `cumulants` is indexed by subset mask; entries of size below two are
    /// used only when `with_singletons` is set. `free_params` are the ring
    /// variables the higher cumulants may depend on.
    pub fn new(
        n: usize,
        ring: Arc<PolyRing>,
        free_params: Vec<String>,
        cumulants: Vec<SparsePoly>,
        with_singletons: bool,
    ) -> Result<ModelParametrization> {
        if cumulants.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: cumulants.len(),
            });
        }
        for p in &free_params {
            if ring.var_index(p).is_none() {
                return Err(Error::UnknownVariable(p.clone()));
            }
        }
        let param = ModelParametrization {
            n,
            ring,
            free_params,
            cumulants,
            with_singletons,
        };
        for s in param.higher_subsets() {
            let k = param.cumulant(s);
            if !k.ring().vars().eq(param.ring.vars()) {
                return Err(Error::RingMismatch(format!("coordinate {} has a foreign ring", kvar_name(s))));
            }
            if let Some(v) = k.support_vars().into_iter().find(|v| !param.free_params.iter().any(|p| p == v)) {
                return Err(Error::Constraint(format!(
                    "higher cumulant {} depends on `{v}`, which is not a free parameter",
                    kvar_name(s)
                )));
            }
        }
        Ok(param)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn free_params(&self) -> &[String] {
        &self.free_params
    }

    pub fn cumulant(&self, s: SubsetMask) -> &SparsePoly {
        &self.cumulants[s.index()]
    }

    pub fn higher_subsets(&self) -> impl Iterator<Item = SubsetMask> {
        crate::combinatorics::subsets_by_size(self.n, 2).into_iter()
    }

    /// Higher cumulants in the order `k12, k13, ..., k[n]`.
    pub fn higher_cumulants(&self) -> Vec<SparsePoly> {
        self.higher_subsets().map(|s| self.cumulant(s).clone()).collect()
    }

    /// Coordinate name to polynomial, for substitution.
    pub fn bindings(&self) -> HashMap<String, SparsePoly> {
        let min = if self.with_singletons { 1 } else { 2 };
        crate::combinatorics::subsets_by_size(self.n, min)
            .into_iter()
            .map(|s| (kvar_name(s), self.cumulant(s).clone()))
            .collect()
    }
}

/// Cumulant parametrization of a hidden subset model: the mixing table has
/// weight `t_J` on each `J` in `A` (the last weight is `1 - sum of the others`),
/// `k_I = k^(t)_I prod_{i in I} b_i` for `|I| >= 2` and
/// `k_i = a0_i + b_i k^(t)_i`.
pub fn hsm_parametrization(h: &HiddenSubsetModel) -> Result<ModelParametrization> {
    let n = h.n;
    let (last, rest) = h.subsets.split_last().expect("nonempty");
    let t_names: Vec<String> = rest.iter().map(|&j| t_name(j)).collect();
    let b_names: Vec<String> = (1..=n).map(b_name).collect();
    let a_names: Vec<String> = (1..=n).map(a0_name).collect();
    let ring = PolyRing::new(t_names.iter().chain(&b_names).chain(&a_names).cloned())?;
    let mut weights: Vec<(SubsetMask, SparsePoly)> = Vec::with_capacity(h.len());
    let mut rest_sum = ring.zero();
    for (&j, name) in rest.iter().zip(&t_names) {
        let t = ring.var(name)?;
        rest_sum = rest_sum.add(&t);
        weights.push((j, t));
    }
    weights.push((*last, ring.one().sub(&rest_sum)));

    let mu: Vec<SparsePoly> = SubsetMask::full(n)
        .subsets()
        .map(|i| {
            weights
                .iter()
                .filter(|(j, _)| i.is_subset_of(*j))
                .fold(ring.zero(), |acc, (_, t)| acc.add(t))
        })
        .collect();
    let kt = moments_to_cumulants_partition(&mu)?;
    let b: Vec<SparsePoly> = b_names.iter().map(|v| ring.var(v)).collect::<Result<_>>()?;
    let cumulants = SubsetMask::full(n)
        .subsets()
        .map(|s| match s.len() {
            0 => Ok(ring.zero()),
            1 => {
                let i = s.min_element().expect("singleton");
                Ok(ring.var(&a_names[i - 1])?.add(&b[i - 1].mul(&kt[s.index()])))
            }
            _ => Ok(s.elements().fold(kt[s.index()].clone(), |acc, i| acc.mul(&b[i - 1]))),
        })
        .collect::<Result<Vec<_>>>()?;
    let free: Vec<String> = t_names.into_iter().chain(b_names).collect();
    ModelParametrization::new(n, ring, free, cumulants, true)
}

/// Cumulants of a hidden subset model computed independently of
/// [`hsm_parametrization`], as the truncated logarithm of the mixture
/// `sum_J t_J prod_{i not in J} (1 + a0_i x_i) prod_{i in J} (1 + (a0_i + b_i) x_i)`.
/// Uses the same ring and parameter names.
pub fn hsm_cumulants_via_log(h: &HiddenSubsetModel) -> Result<Vec<SparsePoly>> {
    let param = hsm_parametrization(h)?;
    let ring = param.ring().clone();
    let n = h.n;
    let (last, rest) = h.subsets.split_last().expect("nonempty");
    let mut weights = Vec::with_capacity(h.len());
    let mut rest_sum = ring.zero();
    for &j in rest {
        let t = ring.var(&t_name(j))?;
        rest_sum = rest_sum.add(&t);
        weights.push((j, t));
    }
    weights.push((*last, ring.one().sub(&rest_sum)));
    let mut mixture = MultilinearPoly::constant(n, ring.zero());
    for (j, t) in &weights {
        let mut term = MultilinearPoly::constant(n, t.clone());
        for i in 1..=n {
            let mut slope = ring.var(&a0_name(i))?;
            if j.contains(i) {
                slope = slope.add(&ring.var(&b_name(i))?);
            }
            let mut factor = MultilinearPoly::constant(n, ring.one());
            factor.set_coeff(SubsetMask::singleton(i), slope);
            term = crate::algebra::ml_mul(&term, &factor)?;
        }
        mixture = mixture.add(&term)?;
    }
    Ok(ml_log(&mixture)?.into_coeffs())
}

/// `kappa_nu(t) = sum_i (-1)^(i-1) gamma_{i,nu} t^i`, `gamma` the necklace counts.
pub fn kappa_poly(nu: usize) -> Result<SparsePoly> {
    if nu == 0 {
        return Err(Error::InvalidArgument("kappa is defined for nu >= 1".into()));
    }
    let ring = PolyRing::new(["t"])?;
    Ok(kappa_in(nu, &ring.var("t")?))
}

fn kappa_coefficients(nu: usize) -> Vec<Rational> {
    (0..=nu)
        .map(|i| {
            let g = Rational::from_integer(BigInt::from(necklace_count(nu, i)));
            if i % 2 == 0 {
                -g
            } else {
                g
            }
        })
        .collect()
}

fn kappa_in<R: CommRing>(nu: usize, t: &R) -> R {
    kappa_coefficients(nu)
        .iter()
        .rev()
        .fold(t.zero_like(), |acc, c| acc.times(t).plus(&t.constant_like(c)))
}

/// Tangential variety: `k_I = (-1)^(|I|-1) (|I|-1)! prod_{i in I} s_i` for
/// `|I| >= 2`; returned densely by subset mask with zeros below size two.
pub fn tangential_cumulants<R: CommRing>(s: &[R]) -> Result<Vec<R>> {
    let n = s.len();
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one parameter".into()));
    }
    Ok(SubsetMask::full(n)
        .subsets()
        .map(|set| {
            if set.len() < 2 {
                return s[0].zero_like();
            }
            let mut c = Rational::from_integer(BigInt::from(factorial(set.len() - 1)));
            if set.len() % 2 == 0 {
                c = -c;
            }
            set.elements()
                .fold(s[0].constant_like(&c), |acc, i| acc.times(&s[i - 1]))
        })
        .collect())
}

/// Secant variety: `k_I = kappa_{|I|}(t) prod_{i in I} b_i` for `|I| >= 2`.
pub fn secant_cumulants<R: CommRing>(t: &R, b: &[R]) -> Result<Vec<R>> {
    let n = b.len();
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one parameter".into()));
    }
    Ok(SubsetMask::full(n)
        .subsets()
        .map(|set| {
            if set.len() < 2 {
                return t.zero_like();
            }
            set.elements()
                .fold(kappa_in(set.len(), t), |acc, i| acc.times(&b[i - 1]))
        })
        .collect())
}

/// Symbolic tangential parametrization in parameters `s1..sn`.
pub fn tangential_parametrization(n: usize) -> Result<ModelParametrization> {
    let names: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
    let ring = PolyRing::new(names.clone())?;
    let s: Vec<SparsePoly> = names.iter().map(|v| ring.var(v)).collect::<Result<_>>()?;
    let k = tangential_cumulants(&s)?;
    ModelParametrization::new(n, ring, names, k, false)
}

/// Symbolic secant parametrization in parameters `t, b1..bn`.
pub fn secant_parametrization(n: usize) -> Result<ModelParametrization> {
    let names: Vec<String> = std::iter::once("t".to_string()).chain((1..=n).map(b_name)).collect();
    let ring = PolyRing::new(names.clone())?;
    let t = ring.var("t")?;
    let b: Vec<SparsePoly> = (1..=n).map(|i| ring.var(&b_name(i))).collect::<Result<_>>()?;
    let k = secant_cumulants(&t, &b)?;
    ModelParametrization::new(n, ring, names, k, false)
}

/// `(2^n - n - 1) - rank` of the Jacobian of the higher cumulants with
/// respect to the free parameters.
pub fn model_codimension(h: &HiddenSubsetModel, seed: u64) -> Result<usize> {
    if h.n > 5 {
        return Err(Error::Unsupported(format!("codimension for n = {} > 5", h.n)));
    }
    let param = hsm_parametrization(h)?;
    parametrization_codimension(&param, seed)
}

pub fn parametrization_codimension(param: &ModelParametrization, seed: u64) -> Result<usize> {
    let ambient = (1usize << param.n) - param.n - 1;
    let rank = jacobian_rank(&param.higher_cumulants(), param.free_params(), seed)?;
    Ok(ambient - rank)
}

/// Sampled parameters are integers in `-SAMPLE_BOUND..=SAMPLE_BOUND`.
pub const SAMPLE_BOUND: i64 = 1000;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Substitute the parametrization and expand.
    Symbolic,
    /// Exact evaluation at seeded random integer parameter points.
    Sampled { trials: usize, seed: u64 },
}

/// Whether every generator vanishes on the parametrization.
pub fn verify_vanishing(
    generators: &[SparsePoly],
    param: &ModelParametrization,
    mode: VerifyMode,
) -> Result<bool> {
    let bindings = param.bindings();
    for g in generators {
        if let Some(v) = g.support_vars().into_iter().find(|v| !bindings.contains_key(*v)) {
            return Err(Error::UnknownVariable(format!(
                "`{v}` is not a coordinate of the parametrization"
            )));
        }
    }
    match mode {
        VerifyMode::Symbolic => {
            let zero = param.ring.zero();
            for g in generators {
                if !poly_substitute(g, &bindings, &zero)?.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        VerifyMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let points: Vec<Vec<Rational>> = (0..trials)
                .map(|_| random_integer_point(&mut rng, param.ring.num_vars(), SAMPLE_BOUND))
                .collect();
            let results: Vec<Result<bool>> = points
                .par_iter()
                .map(|x| {
                    let values: HashMap<String, Rational> = bindings
                        .iter()
                        .map(|(k, p)| (k.clone(), p.evaluate(x)))
                        .collect();
                    for g in generators {
                        if !g.evaluate_named(&values)?.is_zero() {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                })
                .collect();
            for r in results {
                if !r? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// The 21 listed generators of the tangential variety, `n = 4`.
pub fn tangential_ideal_generators_n4() -> Vec<SparsePoly> {
    crate::fixtures::tangential_generators_n4(&cumulant_ring(4, 2)).expect("fixture parses")
}
