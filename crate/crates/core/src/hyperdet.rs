//! Hyperdeterminants of `2x2`, `2x2x2` and `2x2x2x2` tables expressed in
//! moments and cumulants, and the cumulants of principal minors of a
//! symmetric matrix.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    binary_quartic_discriminant, determinant, ml_exp, random_point, CommRing, MultilinearPoly,
    PolyRing, Rational, SparsePoly,
};
use crate::combinatorics::SubsetMask;
use crate::error::{Error, Result};
use crate::fixtures::PRINCIPAL_MINOR_GENERATORS_N4;
use crate::transforms::{
    cumulant_ring, kvar_name, moment_ring, muvar_name, symbolic_cumulants, BinaryTable, Coords,
};

/// Cayley's `2x2x2` hyperdeterminant of entries indexed by 3-bit masks
/// (bit `i-1` is the index along axis `i`).
pub fn hyperdet222<R: CommRing>(a: &[R]) -> Result<R> {
    if a.len() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: a.len(),
        });
    }
    let sq = |i: usize, j: usize| a[i].times(&a[j]).pow(2);
    let quad = |i: usize, j: usize, k: usize, l: usize| a[i].times(&a[j]).times(&a[k].times(&a[l]));
    let squares = [sq(0, 7), sq(1, 6), sq(2, 5), sq(4, 3)];
    let twos = [
        quad(0, 1, 6, 7),
        quad(0, 2, 5, 7),
        quad(0, 4, 3, 7),
        quad(1, 2, 5, 6),
        quad(1, 4, 3, 6),
        quad(2, 4, 3, 5),
    ];
    let fours = [quad(0, 3, 5, 6), quad(1, 2, 4, 7)];
    let mut acc = a[0].zero_like();
    for t in &squares {
        acc = acc.plus(t);
    }
    let mut mixed = a[0].zero_like();
    for t in &twos {
        mixed = mixed.plus(t);
    }
    acc = acc.minus(&mixed.scale(&Rational::from_integer(2.into())));
    let mut cross = a[0].zero_like();
    for t in &fours {
        cross = cross.plus(t);
    }
    Ok(acc.plus(&cross.scale(&Rational::from_integer(4.into()))))
}

/// Dense univariate polynomial `c_0 + c_1 s + ...` over a ring; always keeps
/// at least the constant coefficient so the ring witness is never lost.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<R> {
    coeffs: Vec<R>,
}

impl<R: CommRing> UniPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a univariate polynomial needs a coefficient".into()));
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(CommRing::is_zero_value) {
            coeffs.pop();
        }
        Ok(UniPoly { coeffs })
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `s^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.coeffs[0].zero_like())
    }

    fn trimmed(coeffs: Vec<R>) -> Self {
        UniPoly::new(coeffs).expect("nonempty")
    }
}

impl<R: CommRing> CommRing for UniPoly<R> {
    fn zero_like(&self) -> Self {
        UniPoly {
            coeffs: vec![self.coeffs[0].zero_like()],
        }
    }
    fn one_like(&self) -> Self {
        UniPoly {
            coeffs: vec![self.coeffs[0].one_like()],
        }
    }
    fn is_zero_value(&self) -> bool {
        self.coeffs.iter().all(CommRing::is_zero_value)
    }
    fn plus(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        UniPoly::trimmed((0..len).map(|i| self.coeff(i).plus(&other.coeff(i))).collect())
    }
    fn minus(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        UniPoly::trimmed((0..len).map(|i| self.coeff(i).minus(&other.coeff(i))).collect())
    }
    fn times(&self, other: &Self) -> Self {
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_value() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero_value() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        UniPoly::trimmed(out)
    }
    fn negate(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(CommRing::negate).collect(),
        }
    }
    fn scale(&self, c: &Rational) -> Self {
        UniPoly::trimmed(self.coeffs.iter().map(|x| x.scale(c)).collect())
    }
    fn compatible(&self, other: &Self) -> bool {
        self.coeffs[0].compatible(&other.coeffs[0])
    }
}

/// The 12-term quartic in moments `mu_1, ..., mu_123` (with `mu_{} = 1`).
pub fn hyperdet3_moments() -> SparsePoly {
    let ring = moment_ring(3);
    let entries: Vec<SparsePoly> = SubsetMask::full(3)
        .subsets()
        .map(|s| {
            if s.is_empty() {
                ring.one()
            } else {
                ring.var(&muvar_name(s)).expect("moment variable")
            }
        })
        .collect();
    hyperdet222(&entries).expect("eight entries")
}

/// Schläfli's construction of the `2x2x2x2` hyperdeterminant: slicing `t`
/// along `axis` as `F + x_axis G`, the `2x2x2` hyperdeterminant of `F + s G`
/// is a quartic in `s` whose discriminant is returned, divided by its content
/// and with the sign normalized as in [`hyperdet_cumulants`].
pub fn schlafli_det4(t: &MultilinearPoly<SparsePoly>, axis: usize) -> Result<SparsePoly> {
    if t.n() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: t.n(),
        });
    }
    if !(1..=4).contains(&axis) {
        return Err(Error::InvalidArgument(format!("axis {axis} is not in 1..=4")));
    }
    let ring = t.coeffs()[0].ring().clone();
    if t.coeffs().iter().any(|c| !c.same_ring(&t.coeffs()[0])) {
        return Err(Error::RingMismatch("tensor entries live in different rings".into()));
    }
    let low = (1u32 << (axis - 1)) - 1;
    let bit = 1u32 << (axis - 1);
    // 3-bit index -> 4-bit mask with a zero inserted at the slicing axis
    let spread = |m: u32| (m & low) | ((m & !low) << 1);
    let pencil: Vec<UniPoly<SparsePoly>> = (0..8u32)
        .map(|m| {
            let f = t.coeffs()[spread(m) as usize].clone();
            let g = t.coeffs()[(spread(m) | bit) as usize].clone();
            UniPoly::new(vec![f, g])
        })
        .collect::<Result<_>>()?;
    let quartic = hyperdet222(&pencil)?;
    let c: Vec<SparsePoly> = (0..5).map(|i| quartic.coeff(i)).collect();
    let disc = binary_quartic_discriminant(&c[4], &c[3], &c[2], &c[1], &c[0]);
    Ok(normalize(disc, &ring))
}

/// Exponents of the sign-fixing monomial `k123^3 k124^3 k134^3 k234^3 k1234^3`.
const SIGN_ANCHOR: [(&str, u16); 5] = [("k123", 3), ("k124", 3), ("k134", 3), ("k234", 3), ("k1234", 3)];

fn normalize(p: SparsePoly, ring: &Arc<PolyRing>) -> SparsePoly {
    let p = p.primitive_part();
    let anchor = if SIGN_ANCHOR.iter().all(|(v, _)| ring.var_index(v).is_some()) {
        p.coefficient_of(&SIGN_ANCHOR).ok().filter(|c| !c.is_zero())
    } else {
        None
    };
    let sign_source = anchor.or_else(|| p.leading_term().map(|(_, c)| c.clone()));
    match sign_source {
        Some(c) if c.is_negative() => p.neg(),
        _ => p,
    }
}

/// Moments `exp K(x)` of the generic cumulant table over `ring`.
fn symbolic_moments(n: usize, ring: &Arc<PolyRing>) -> Result<Vec<SparsePoly>> {
    let k = MultilinearPoly::new(n, symbolic_cumulants(n, ring))?;
    Ok(ml_exp(&k)?.into_coeffs())
}

static DET4: OnceLock<SparsePoly> = OnceLock::new();

/// The hyperdeterminant of a `2^n` table as a polynomial in the higher
/// cumulants `k_I`, `|I| >= 2`.
///
/// For `n = 2, 3` the moment formula is expanded in all cumulants and the
/// result is moved into the ring of higher cumulants, which fails if any
/// `k_i` survived. For `n = 4` the Schläfli construction is applied to the
/// moments with `k_1 = ... = k_4 = 0`; the result is cached.
pub fn hyperdet_cumulants(n: usize) -> Result<SparsePoly> {
    let higher = cumulant_ring(n.min(4), 2);
    match n {
        2 | 3 => {
            let all = cumulant_ring(n, 1);
            let mu = symbolic_moments(n, &all)?;
            let det = if n == 2 {
                mu[0].mul(&mu[3]).sub(&mu[1].mul(&mu[2]))
            } else {
                hyperdet222(&mu)?
            };
            det.into_ring(&higher)
        }
        4 => {
            if let Some(p) = DET4.get() {
                return Ok(p.clone());
            }
            let mu = symbolic_moments(4, &higher)?;
            let p = schlafli_det4(&MultilinearPoly::new(4, mu)?, 4)?;
            Ok(DET4.get_or_init(|| p).clone())
        }
        _ => Err(Error::Unsupported(format!(
            "hyperdeterminant expansion for n = {n} (only n = 2, 3, 4)"
        ))),
    }
}

/// Value of [`hyperdet_cumulants`] at the cumulants of `t`.
pub fn hyperdet_eval(t: &BinaryTable) -> Result<Rational> {
    let n = t.n();
    let p = hyperdet_cumulants(n)?;
    let k = t.to_coords(Coords::Cumulant)?;
    let values: Vec<Rational> = p
        .ring()
        .vars()
        .iter()
        .map(|v| {
            let s = SubsetMask::parse_key(&v[1..], n).expect("cumulant variable");
            k.get(s).clone()
        })
        .collect();
    Ok(p.evaluate(&values))
}

/// Degree `C_n` of the `2^n` hyperdeterminant. The generating function
/// `f = sum C_n x^n / n! = exp(-2x) / (1-x)^2` satisfies `(1-x) f' = 2x f`,
/// so `C_{n+1} = n (C_n + 2 C_{n-1})` with `C_0 = 1`, `C_1 = 0`.
pub fn cayley_degree(n: usize) -> BigInt {
    let (mut prev, mut cur) = (BigInt::from(1), BigInt::zero());
    for m in 1..n {
        let next = BigInt::from(m) * (&cur + BigInt::from(2) * &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    if n == 0 {
        prev
    } else {
        cur
    }
}

/// Cumulants of the principal minors `mu_I = det A_I` of a symmetric matrix.
pub fn principal_minor_cumulants(a: &[Vec<Rational>]) -> Result<BinaryTable> {
    let n = a.len();
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        for j in 0..i {
            if row[j] != a[j][i] {
                return Err(Error::InvalidArgument(format!(
                    "matrix is not symmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mu = SubsetMask::full(n)
        .subsets()
        .map(|s| {
            let idx: Vec<usize> = s.elements().map(|i| i - 1).collect();
            let sub: Vec<Vec<Rational>> = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| a[i][j].clone()).collect())
                .collect();
            if sub.is_empty() {
                Ok(Rational::from_integer(1.into()))
            } else {
                determinant(&sub)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    BinaryTable::new(n, Coords::Moment, mu)?.moments_to_cumulants()
}

/// Random symmetric `n x n` matrix with entries `q/1000`, `q` in `1..1000`.
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Rational>> {
    let upper = random_point(rng, n * (n + 1) / 2);
    let mut a = vec![vec![Rational::zero(); n]; n];
    let mut it = upper.into_iter();
    for i in 0..n {
        for j in i..n {
            let v = it.next().expect("enough entries");
            a[i][j] = v.clone();
            a[j][i] = v;
        }
    }
    a
}

/// Whether every polynomial in `gens` (over the higher cumulants of `n = 4`)
/// vanishes on the principal-minor cumulants of `trials` random matrices.
pub fn principal_minor_relations_hold(gens: &[SparsePoly], trials: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let k = principal_minor_cumulants(&random_symmetric(&mut rng, 4))?;
        let values: HashMap<String, Rational> = SubsetMask::full(4)
            .subsets()
            .filter(|s| s.len() >= 2)
            .map(|s| (kvar_name(s), k.get(s).clone()))
            .collect();
        for g in gens {
            if !g.evaluate_named(&values)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks the twenty listed relations among principal-minor cumulants.
pub fn verify_principal_minor_ideal(trials: usize, seed: u64) -> Result<bool> {
    let ring = cumulant_ring(4, 2);
    let gens = crate::fixtures::parse_all(&ring, &PRINCIPAL_MINOR_GENERATORS_N4)?;
    principal_minor_relations_hold(&gens, trials, seed)
}
