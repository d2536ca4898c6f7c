//! Conversions among probability, moment and cumulant coordinates, the cube
//! symmetry and value-relabeling actions, independence checks and the
//! `Z^n`-grading of cumulant polynomials.
//!
//! Two independent routes compute cumulants from moments: the set-partition
//! (Möbius inversion) formula, kept as the reference, and the truncated
//! logarithm of the moment generating function, which the table methods use.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{ml_exp, ml_log, CommRing, Monomial, MultilinearPoly, PolyRing, Rational, SparsePoly};
use crate::combinatorics::{factorial, set_partitions, subsets_by_size, CubeSymmetry, SubsetMask};
use crate::error::{Error, Result};

/// Largest table dimension handled by [`BinaryTable`].
pub const MAX_TABLE_N: usize = 16;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coords {
    Prob,
    Moment,
    Cumulant,
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coords::Prob => "prob",
            Coords::Moment => "moment",
            Coords::Cumulant => "cumulant",
        })
    }
}

impl FromStr for Coords {
    type Err = Error;

    fn from_str(s: &str) -> Result<Coords> {
        match s {
            "prob" => Ok(Coords::Prob),
            "moment" => Ok(Coords::Moment),
            "cumulant" => Ok(Coords::Cumulant),
            other => Err(Error::Parse(format!("unknown coordinate system `{other}`"))),
        }
    }
}

/// A `2 x ... x 2` table of exact rationals indexed by subsets of `[n]`,
/// tagged with its coordinate system.
///
/// Invariants: probabilities sum to one, `mu_{} = 1`, `k_{} = 0`.
/// Probability tables may have negative entries (they are distributions, not
/// necessarily probability distributions).
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryTable {
    n: usize,
    coords: Coords,
    entries: Vec<Rational>,
}

impl BinaryTable {
    pub fn new(n: usize, coords: Coords, entries: Vec<Rational>) -> Result<BinaryTable> {
        if n > MAX_TABLE_N {
            return Err(Error::Unsupported(format!("tables with n = {n} > {MAX_TABLE_N}")));
        }
        if entries.len() != 1 << n {
            return Err(Error::InvalidArgument(format!(
                "a table with n = {n} needs {} entries, got {}",
                1usize << n,
                entries.len()
            )));
        }
        let t = BinaryTable { n, coords, entries };
        t.validate()?;
        Ok(t)
    }

    /// Builds a table from a function of the subset.
    pub fn from_fn(n: usize, coords: Coords, f: impl FnMut(SubsetMask) -> Rational) -> Result<BinaryTable> {
        let entries = SubsetMask::full(n).subsets().map(f).collect();
        BinaryTable::new(n, coords, entries)
    }

    fn validate(&self) -> Result<()> {
        match self.coords {
            Coords::Prob => {
                let total: Rational = self.entries.iter().sum();
                if !total.is_one() {
                    return Err(Error::Constraint(format!(
                        "probabilities must sum to 1, got {total}"
                    )));
                }
            }
            Coords::Moment => {
                if !self.entries[0].is_one() {
                    return Err(Error::Constraint(format!(
                        "moment table needs mu_{{}} = 1, got {}",
                        self.entries[0]
                    )));
                }
            }
            Coords::Cumulant => {
                if !self.entries[0].is_zero() {
                    return Err(Error::Constraint(format!(
                        "cumulant table needs k_{{}} = 0, got {}",
                        self.entries[0]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> Coords {
        self.coords
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, s: SubsetMask) -> &Rational {
        &self.entries[s.index()]
    }

    fn expect(&self, coords: Coords) -> Result<()> {
        if self.coords != coords {
            return Err(Error::WrongCoords {
                expected: coords.to_string(),
                found: self.coords.to_string(),
            });
        }
        Ok(())
    }

    fn with(&self, coords: Coords, entries: Vec<Rational>) -> Result<BinaryTable> {
        BinaryTable::new(self.n, coords, entries)
    }

    /// `mu_I = sum_{J ⊇ I} p_J` by the superset-sum transform.
    pub fn probs_to_moments(&self) -> Result<BinaryTable> {
        self.expect(Coords::Prob)?;
        let mut v = self.entries.clone();
        superset_zeta(&mut v);
        self.with(Coords::Moment, v)
    }

    /// `p_I = sum_{J ⊇ I} (-1)^{|J \ I|} mu_J`.
    pub fn moments_to_probs(&self) -> Result<BinaryTable> {
        self.expect(Coords::Moment)?;
        let mut v = self.entries.clone();
        superset_mobius(&mut v);
        self.with(Coords::Prob, v)
    }

    /// Cumulants as coefficients of the truncated `log M(x)`.
    pub fn moments_to_cumulants(&self) -> Result<BinaryTable> {
        self.expect(Coords::Moment)?;
        self.with(Coords::Cumulant, moments_to_cumulants_log(&self.entries)?)
    }

    /// Cumulants by the set-partition formula.
    pub fn moments_to_cumulants_reference(&self) -> Result<BinaryTable> {
        self.expect(Coords::Moment)?;
        self.with(Coords::Cumulant, moments_to_cumulants_partition(&self.entries)?)
    }

    /// Moments as coefficients of the truncated `exp K(x)`.
    pub fn cumulants_to_moments(&self) -> Result<BinaryTable> {
        self.expect(Coords::Cumulant)?;
        self.with(Coords::Moment, cumulants_to_moments_exp(&self.entries)?)
    }

    /// Moments by the set-partition formula.
    pub fn cumulants_to_moments_reference(&self) -> Result<BinaryTable> {
        self.expect(Coords::Cumulant)?;
        self.with(Coords::Moment, cumulants_to_moments_partition(&self.entries)?)
    }

    /// Converts to any coordinate system.
    pub fn to_coords(&self, target: Coords) -> Result<BinaryTable> {
        use Coords::*;
        match (self.coords, target) {
            (a, b) if a == b => Ok(self.clone()),
            (Prob, Moment) => self.probs_to_moments(),
            (Prob, Cumulant) => self.probs_to_moments()?.moments_to_cumulants(),
            (Moment, Prob) => self.moments_to_probs(),
            (Moment, Cumulant) => self.moments_to_cumulants(),
            (Cumulant, Moment) => self.cumulants_to_moments(),
            (Cumulant, Prob) => self.cumulants_to_moments()?.moments_to_probs(),
            _ => unreachable!(),
        }
    }

    /// `g(p)_{g(I)} = p_I` for a cube symmetry `g`.
    pub fn act_symmetry(&self, g: &CubeSymmetry) -> Result<BinaryTable> {
        self.expect(Coords::Prob)?;
        if g.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: g.n(),
            });
        }
        let mut out = vec![Rational::zero(); self.entries.len()];
        for (i, p) in self.entries.iter().enumerate() {
            out[g.apply(SubsetMask(i as u32)).index()] = p.clone();
        }
        self.with(Coords::Prob, out)
    }

    /// Moments of the same distribution when variable `i` takes the values
    /// `(b_i, a_i)` instead of `(0, 1)`:
    /// `mu'_I = sum_{J ⊆ I} prod_{I \ J} b_i prod_J (a_i - b_i) mu_J`.
    pub fn relabel_values(&self, a: &[Rational], b: &[Rational]) -> Result<BinaryTable> {
        self.expect(Coords::Moment)?;
        for v in [a, b] {
            if v.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: v.len(),
                });
            }
        }
        let mut v = self.entries.clone();
        for i in 0..self.n {
            let bit = 1usize << i;
            let d = &a[i] - &b[i];
            for s in 0..v.len() {
                if s & bit != 0 {
                    v[s] = &b[i] * &v[s ^ bit] + &d * &v[s];
                }
            }
        }
        self.with(Coords::Moment, v)
    }

    /// Whether the marginal on `A ∪ B` factorizes as `A ⊥ B`, i.e. `k_I = 0`
    /// for every `I ⊆ A ∪ B` meeting both `A` and `B`.
    pub fn check_independence(&self, a: SubsetMask, b: SubsetMask) -> Result<bool> {
        if !a.is_disjoint(b) {
            return Err(Error::InvalidArgument(format!("{a} and {b} overlap")));
        }
        let full = SubsetMask::full(self.n);
        if !a.union(b).is_subset_of(full) {
            return Err(Error::InvalidArgument(format!(
                "{a} or {b} is not a subset of [{}]",
                self.n
            )));
        }
        let k = self.to_coords(Coords::Cumulant)?;
        Ok(a.union(b)
            .subsets()
            .filter(|s| !s.is_disjoint(a) && !s.is_disjoint(b))
            .all(|s| k.get(s).is_zero()))
    }
}

/// In-place superset sums: `v[I] <- sum_{J ⊇ I} v[J]`.
pub fn superset_zeta<R: CommRing>(v: &mut [R]) {
    let len = v.len();
    assert!(len.is_power_of_two());
    let mut bit = 1;
    while bit < len {
        for s in 0..len {
            if s & bit == 0 {
                v[s] = v[s].plus(&v[s | bit]);
            }
        }
        bit <<= 1;
    }
}

/// Inverse of [`superset_zeta`].
pub fn superset_mobius<R: CommRing>(v: &mut [R]) {
    let len = v.len();
    assert!(len.is_power_of_two());
    let mut bit = 1;
    while bit < len {
        for s in 0..len {
            if s & bit == 0 {
                v[s] = v[s].minus(&v[s | bit]);
            }
        }
        bit <<= 1;
    }
}

fn table_dim(len: usize) -> Result<usize> {
    if !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "table length {len} is not a power of two"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Cumulants by Möbius inversion on the partition lattice:
/// `k_I = sum_pi (-1)^{|pi|-1} (|pi|-1)! prod_{B in pi} mu_B`.
pub fn moments_to_cumulants_partition<R: CommRing>(mu: &[R]) -> Result<Vec<R>> {
    let n = table_dim(mu.len())?;
    if !mu[0].is_one_value() {
        return Err(Error::Constraint("moments need mu_{} = 1".into()));
    }
    let mut out = vec![mu[0].zero_like(); mu.len()];
    for s in SubsetMask::full(n).subsets().skip(1) {
        let mut acc = mu[0].zero_like();
        for p in set_partitions(s) {
            let blocks = p.num_blocks();
            let mut coef = Rational::from_integer(BigInt::from(factorial(blocks - 1)));
            if blocks % 2 == 0 {
                coef = -coef;
            }
            let prod = product_of_blocks(mu, p.blocks());
            acc = acc.plus(&prod.scale(&coef));
        }
        out[s.index()] = acc;
    }
    Ok(out)
}

/// Moments from cumulants: `mu_I = sum_pi prod_{B in pi} k_B`.
pub fn cumulants_to_moments_partition<R: CommRing>(k: &[R]) -> Result<Vec<R>> {
    let n = table_dim(k.len())?;
    if !k[0].is_zero_value() {
        return Err(Error::Constraint("cumulants need k_{} = 0".into()));
    }
    let out = SubsetMask::full(n)
        .subsets()
        .map(|s| {
            set_partitions(s).fold(k[0].zero_like(), |acc, p| {
                acc.plus(&product_of_blocks(k, p.blocks()))
            })
        })
        .collect();
    Ok(out)
}

fn product_of_blocks<R: CommRing>(v: &[R], blocks: &[SubsetMask]) -> R {
    let mut it = blocks.iter();
    match it.next() {
        None => v[0].one_like(),
        Some(first) => it.fold(v[first.index()].clone(), |acc, b| acc.times(&v[b.index()])),
    }
}

/// Cumulants as the coefficients of the truncated logarithm of `M(x)`.
pub fn moments_to_cumulants_log<R: CommRing>(mu: &[R]) -> Result<Vec<R>> {
    let n = table_dim(mu.len())?;
    let m = MultilinearPoly::new(n, mu.to_vec())?;
    Ok(ml_log(&m)?.into_coeffs())
}

/// Moments as the coefficients of the truncated exponential of `K(x)`.
pub fn cumulants_to_moments_exp<R: CommRing>(k: &[R]) -> Result<Vec<R>> {
    let n = table_dim(k.len())?;
    let kk = MultilinearPoly::new(n, k.to_vec())?;
    Ok(ml_exp(&kk)?.into_coeffs())
}

/// Variable name of the cumulant `k_I`, e.g. `k123`.
pub fn kvar_name(s: SubsetMask) -> String {
    format!("k{}", s.key())
}

/// Variable name of the moment `mu_I`, e.g. `mu12`.
pub fn muvar_name(s: SubsetMask) -> String {
    format!("mu{}", s.key())
}

/// Subset of a cumulant variable name such as `k134`.
pub fn parse_kvar(name: &str) -> Option<SubsetMask> {
    let digits = name.strip_prefix('k')?;
    if digits.is_empty() {
        return None;
    }
    SubsetMask::parse_key(digits, 9).ok()
}

/// Polynomial ring in the cumulants `k_I` with `|I| >= min_size`, ordered by
/// size then lexicographically (`k12 < k13 < ... < k1234` for `min_size = 2`).
pub fn cumulant_ring(n: usize, min_size: usize) -> Arc<PolyRing> {
    PolyRing::new(subsets_by_size(n, min_size.max(1)).into_iter().map(kvar_name))
        .expect("subset names are distinct")
}

/// Polynomial ring in the moments `mu_I`, `I` nonempty.
pub fn moment_ring(n: usize) -> Arc<PolyRing> {
    PolyRing::new(subsets_by_size(n, 1).into_iter().map(muvar_name))
        .expect("subset names are distinct")
}

/// The generic cumulant table over `ring`: `k_I` for subsets whose variable is
/// present in the ring, zero otherwise (and at the empty set).
pub fn symbolic_cumulants(n: usize, ring: &Arc<PolyRing>) -> Vec<SparsePoly> {
    SubsetMask::full(n)
        .subsets()
        .map(|s| {
            if s.is_empty() {
                ring.zero()
            } else {
                ring.var(&kvar_name(s)).unwrap_or_else(|_| ring.zero())
            }
        })
        .collect()
}

/// Degree vector in `Z^n` with `deg(k_I) = sum_{i in I} e_i`.
pub type MultiDegree = Vec<u32>;

/// `Z^n`-degree of a polynomial in cumulant variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Every monomial has this degree vector (the zero polynomial reports all zeros).
    Homogeneous(MultiDegree),
    /// Two monomials with different degree vectors.
    Inhomogeneous { first: String, second: String },
}

/// `Z^n`-grading with `deg(k_I) = sum_{i in I} e_i`; `n` is the largest
/// element mentioned by any ring variable.
pub fn zgrade(p: &SparsePoly) -> Result<Grading> {
    let ring = p.ring();
    let mut var_sets = Vec::with_capacity(ring.num_vars());
    for v in ring.vars() {
        var_sets.push(parse_kvar(v).ok_or_else(|| Error::UnknownVariable(v.clone()))?);
    }
    let n = var_sets
        .iter()
        .map(|s| 32 - s.bits().leading_zeros() as usize)
        .max()
        .unwrap_or(0);
    let degree_of = |m: &Monomial| {
        let mut d = vec![0u32; n];
        for (s, &e) in var_sets.iter().zip(m.exponents()) {
            for i in s.elements() {
                d[i - 1] += e as u32;
            }
        }
        d
    };
    let mut first: Option<(&Monomial, Vec<u32>)> = None;
    for (m, _) in p.terms() {
        let d = degree_of(m);
        match &first {
            None => first = Some((m, d)),
            Some((m0, d0)) if *d0 != d => {
                return Ok(Grading::Inhomogeneous {
                    first: p.monomial_string(m0),
                    second: p.monomial_string(m),
                })
            }
            _ => {}
        }
    }
    Ok(Grading::Homogeneous(first.map_or(vec![0; n], |(_, d)| d)))
}
