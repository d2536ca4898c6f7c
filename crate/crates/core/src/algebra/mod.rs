//! Exact arithmetic: rationals, sparse multivariate polynomials, the
//! squarefree ring `R[x_1..x_n] / <x_1^2, ..., x_n^2>` and fraction-free linear
//! algebra.

mod linalg;
mod multilinear;
mod parse;
mod poly;
mod rational;

pub use linalg::{
    bareiss_rank, determinant, jacobian_rank, random_integer_point, random_point, rank,
    JACOBIAN_TRIALS,
};
pub use multilinear::{ml_exp, ml_log, ml_mul, MultilinearPoly};
pub use poly::{binary_quartic_discriminant, poly_substitute, Monomial, PolyRing, SparsePoly};
pub use rational::{format_rational, parse_rational, rat, rationalize, Rational};
pub(crate) use rational::to_f64;

/// Commutative ring operations shared by [`Rational`] and [`SparsePoly`] so
/// that the truncated log/exp series and the transforms are written once.
///
/// `*_like` constructors take `self` as a witness of the ring, which matters
/// for polynomials whose zero carries a variable list.
pub trait CommRing: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_value(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;

    /// Whether two values can be combined; polynomials need a common ring.
    fn compatible(&self, _other: &Self) -> bool {
        true
    }

    fn constant_like(&self, c: &Rational) -> Self {
        self.one_like().scale(c)
    }

    fn is_one_value(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

impl CommRing for Rational {
    fn zero_like(&self) -> Self {
        num_traits::Zero::zero()
    }
    fn one_like(&self) -> Self {
        num_traits::One::one()
    }
    fn is_zero_value(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
}
