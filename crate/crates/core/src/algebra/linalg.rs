use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Rational, SparsePoly};
use crate::error::{Error, Result};

/// Independent random points tried by [`jacobian_rank`]; the maximum rank wins.
pub const JACOBIAN_TRIALS: usize = 3;

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = &m[rank][c] * &m[i][j] - &m[i][c] * &m[rank][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Clears denominators row by row.
fn integer_rows(m: &[Vec<Rational>]) -> (Vec<Vec<BigInt>>, Rational) {
    let mut scale = Rational::one();
    let rows = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= Rational::from_integer(l.clone());
            row.iter()
                .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    (rows, scale)
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    bareiss_rank(integer_rows(m).0)
}

/// Determinant of a square rational matrix via fraction-free elimination.
pub fn determinant(m: &[Vec<Rational>]) -> Result<Rational> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(Rational::one());
    }
    let (mut a, scale) = integer_rows(m);
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = Rational::from_integer(a[n - 1][n - 1].clone()) / scale;
    Ok(if negate { -det } else { det })
}

/// A point with coordinates `q / 1000`, `q` uniform in `1..1000`.
pub fn random_point<R: Rng>(rng: &mut R, len: usize) -> Vec<Rational> {
    (0..len)
        .map(|_| Rational::new(BigInt::from(rng.gen_range(1..1000)), BigInt::from(1000)))
        .collect()
}

/// An integer point with coordinates uniform in `-bound..=bound`. Integer
/// points keep exact evaluation of high-degree polynomials cheap.
pub fn random_integer_point<R: Rng>(rng: &mut R, len: usize, bound: i64) -> Vec<Rational> {
    (0..len)
        .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-bound..=bound))))
        .collect()
}

/// Generic rank of the Jacobian of `polys` with respect to `params`.
///
/// Partial derivatives are symbolic; they are evaluated at
/// [`JACOBIAN_TRIALS`] seeded random rational points and the largest exact
/// rank is returned. The answer can only err low, and only when every point
/// hits the degeneracy locus.
pub fn jacobian_rank(polys: &[SparsePoly], params: &[String], seed: u64) -> Result<usize> {
    let Some(first) = polys.first() else {
        return Ok(0);
    };
    let ring = first.ring().clone();
    let mut param_idx = Vec::with_capacity(params.len());
    for p in params {
        param_idx.push(
            ring.var_index(p)
                .ok_or_else(|| Error::UnknownVariable(p.clone()))?,
        );
    }
    for f in polys {
        if !f.same_ring(first) {
            return Err(Error::RingMismatch("Jacobian entries over different rings".into()));
        }
        for v in f.support_vars() {
            if !params.iter().any(|p| p == v) {
                return Err(Error::InvalidArgument(format!(
                    "variable `{v}` is not among the Jacobian parameters"
                )));
            }
        }
    }
    let jac: Vec<Vec<SparsePoly>> = polys
        .iter()
        .map(|f| param_idx.iter().map(|&j| f.derivative(j)).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..JACOBIAN_TRIALS {
        let point = random_point(&mut rng, ring.num_vars());
        let m: Vec<Vec<Rational>> = jac
            .iter()
            .map(|row| row.iter().map(|d| d.evaluate(&point)).collect())
            .collect();
        best = best.max(rank(&m));
    }
    Ok(best)
}
