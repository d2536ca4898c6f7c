use num_bigint::BigInt;

use super::{CommRing, Rational};
use crate::combinatorics::SubsetMask;
use crate::error::{Error, Result};

/// Element of `R[x_1..x_n] / <x_1^2, ..., x_n^2>`, stored densely: the
/// coefficient of `prod_{i in I} x_i` sits at index `I.bits()`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearPoly<R> {
    n: usize,
    coeffs: Vec<R>,
}

impl<R: CommRing> MultilinearPoly<R> {
    pub fn new(n: usize, coeffs: Vec<R>) -> Result<Self> {
        if coeffs.len() != 1 << n {
            return Err(Error::InvalidArgument(format!(
                "a squarefree polynomial in {n} variables needs {} coefficients, got {}",
                1usize << n,
                coeffs.len()
            )));
        }
        Ok(MultilinearPoly { n, coeffs })
    }

    pub fn from_fn(n: usize, f: impl FnMut(SubsetMask) -> R) -> Self {
        let coeffs = SubsetMask::full(n).subsets().map(f).collect();
        MultilinearPoly { n, coeffs }
    }

    pub fn constant(n: usize, c: R) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero; 1 << n];
        coeffs[0] = c;
        MultilinearPoly { n, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn coeff(&self, s: SubsetMask) -> &R {
        &self.coeffs[s.index()]
    }

    pub fn set_coeff(&mut self, s: SubsetMask, c: R) {
        self.coeffs[s.index()] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CommRing::is_zero_value)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if !self.coeffs[0].compatible(&other.coeffs[0]) {
            return Err(Error::RingMismatch(
                "squarefree polynomials have coefficients in different rings".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(MultilinearPoly {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.plus(b)).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(MultilinearPoly {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.minus(b)).collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        MultilinearPoly {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Substitutes `x_i -> w_i x_i`, i.e. scales coefficient `I` by `prod_{i in I} w_i`.
    pub fn rescale_vars(&self, w: &[R]) -> Result<Self> {
        if w.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: w.len(),
            });
        }
        let coeffs = SubsetMask::full(self.n)
            .subsets()
            .map(|s| {
                s.elements()
                    .fold(self.coeffs[s.index()].clone(), |acc, i| acc.times(&w[i - 1]))
            })
            .collect();
        Ok(MultilinearPoly { n: self.n, coeffs })
    }
}

/// Product modulo the squares: only disjoint pairs of subsets combine.
pub fn ml_mul<R: CommRing>(f: &MultilinearPoly<R>, g: &MultilinearPoly<R>) -> Result<MultilinearPoly<R>> {
    f.check(g)?;
    let full = SubsetMask::full(f.n);
    let zero = f.coeffs[0].zero_like();
    let mut out = vec![zero; f.coeffs.len()];
    for (i, a) in f.coeffs.iter().enumerate() {
        if a.is_zero_value() {
            continue;
        }
        let s = SubsetMask(i as u32);
        for t in full.minus(s).subsets() {
            let b = &g.coeffs[t.index()];
            if b.is_zero_value() {
                continue;
            }
            let u = s.union(t).index();
            out[u] = out[u].plus(&a.times(b));
        }
    }
    Ok(MultilinearPoly { n: f.n, coeffs: out })
}

/// Truncated logarithm `sum_{i=1}^{n} (-1)^{i-1} (f - 1)^i / i`; requires a
/// constant term of one.
pub fn ml_log<R: CommRing>(f: &MultilinearPoly<R>) -> Result<MultilinearPoly<R>> {
    if !f.coeffs[0].is_one_value() {
        return Err(Error::Constraint(
            "logarithm needs a constant coefficient equal to 1".into(),
        ));
    }
    let mut g = f.clone();
    g.coeffs[0] = g.coeffs[0].zero_like();
    let mut power = g.clone();
    let mut acc = g.clone();
    for i in 2..=f.n {
        power = ml_mul(&power, &g)?;
        if power.is_zero() {
            break;
        }
        let sign: i64 = if i % 2 == 0 { -1 } else { 1 };
        let c = Rational::new(BigInt::from(sign), BigInt::from(i as u64));
        acc = acc.add(&power.scale(&c))?;
    }
    Ok(acc)
}

/// Truncated exponential `sum_{i=0}^{n} f^i / i!`; requires a zero constant term.
pub fn ml_exp<R: CommRing>(f: &MultilinearPoly<R>) -> Result<MultilinearPoly<R>> {
    if !f.coeffs[0].is_zero_value() {
        return Err(Error::Constraint(
            "exponential needs a zero constant coefficient".into(),
        ));
    }
    let one = f.coeffs[0].one_like();
    let mut acc = MultilinearPoly::constant(f.n, one);
    acc = acc.add(f)?;
    let mut power = f.clone();
    let mut fact = BigInt::from(1);
    for i in 2..=f.n {
        power = ml_mul(&power, f)?;
        if power.is_zero() {
            break;
        }
        fact *= i as u64;
        acc = acc.add(&power.scale(&Rational::new(BigInt::from(1), fact.clone())))?;
    }
    Ok(acc)
}
