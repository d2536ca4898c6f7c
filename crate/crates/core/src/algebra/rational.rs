use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, integers and plain decimals such as `"-0.35"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("`{s}` has a zero denominator")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued-fraction convergents plus the best semiconvergent).
pub fn rationalize(x: f64, max_den: u64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("cannot rationalize {x}")));
    }
    let exact = Rational::from_float(x).ok_or_else(|| {
        Error::InvalidArgument(format!("cannot rationalize {x}"))
    })?;
    let max_den = BigInt::from(max_den.max(1));
    if exact.denom() <= &max_den {
        return Ok(exact);
    }
    // convergents h/k of the exact binary value
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut rest = exact.clone();
    loop {
        let a = rest.floor().to_integer();
        let k2 = &a * &k1 + &k0;
        if k2 > max_den {
            // semiconvergent with the largest admissible partial quotient
            let t = (&max_den - &k0) / &k1;
            let semi = Rational::new(&t * &h1 + &h0, &t * &k1 + &k0);
            let conv = Rational::new(h1.clone(), k1.clone());
            let d_semi = (&semi - &exact).abs();
            let d_conv = (&conv - &exact).abs();
            return Ok(if d_semi < d_conv { semi } else { conv });
        }
        let h2 = &a * &h1 + &h0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            return Ok(Rational::new(h1, k1));
        }
        rest = frac.recip();
    }
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
