use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::rational::format_rational;
use super::{CommRing, Rational};
use crate::error::{Error, Result};

/// Products with more term pairs than this are split across threads.
const PARALLEL_MUL_THRESHOLD: usize = 1 << 15;

/// An ordered list of named variables. Polynomials over the same ring share it
/// through an `Arc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    vars: Vec<String>,
    index: HashMap<String, usize>,
}

impl PolyRing {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Result<Arc<PolyRing>> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(vars.len());
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::InvalidArgument("empty variable name".into()));
            }
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Arc::new(PolyRing { vars, index }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn zero(self: &Arc<Self>) -> SparsePoly {
        SparsePoly {
            ring: Arc::clone(self),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(self: &Arc<Self>, c: Rational) -> SparsePoly {
        let mut p = self.zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(self.num_vars()), c);
        }
        p
    }

    pub fn one(self: &Arc<Self>) -> SparsePoly {
        self.constant(Rational::one())
    }

    pub fn var(self: &Arc<Self>, name: &str) -> Result<SparsePoly> {
        let i = self
            .var_index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(self.var_at(i))
    }

    pub fn var_at(self: &Arc<Self>, i: usize) -> SparsePoly {
        let mut exps = vec![0u16; self.num_vars()];
        exps[i] = 1;
        let mut p = self.zero();
        p.terms.insert(Monomial(exps), Rational::one());
        p
    }

    /// Parses an expression such as `k12*k34 - 4*k14^2*(k23 + 1/2)`.
    pub fn parse(self: &Arc<Self>, src: &str) -> Result<SparsePoly> {
        super::parse::parse_poly(self, src)
    }
}

/// Exponent vector over a ring's variable list. Ordered by graded reverse
/// lexicographic order with the first declared variable largest.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                for (a, b) in self.0.iter().zip(&other.0).rev() {
                    if a != b {
                        return b.cmp(a);
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct SparsePoly {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePoly {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the monomial `prod vars[i]^e` given as `(name, exponent)` pairs.
    pub fn coefficient_of(&self, factors: &[(&str, u16)]) -> Result<Rational> {
        let mut exps = vec![0u16; self.ring.num_vars()];
        for (name, e) in factors {
            let i = self
                .ring
                .var_index(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            exps[i] += e;
        }
        Ok(self.coefficient(&Monomial(exps)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    /// The constant value of a constant polynomial.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.total_degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn min_total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).min()
    }

    /// Names of the variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<&str> {
        let n = self.ring.num_vars();
        let mut used = vec![false; n];
        for m in self.terms.keys() {
            for (u, &e) in used.iter_mut().zip(&m.0) {
                *u |= e > 0;
            }
        }
        (0..n)
            .filter(|&i| used[i])
            .map(|i| self.ring.vars[i].as_str())
            .collect()
    }

    fn check_ring(&self, other: &SparsePoly) {
        assert!(
            self.same_ring(other),
            "polynomials over different rings: {:?} vs {:?}",
            self.ring.vars,
            other.ring.vars
        );
    }

    pub fn same_ring(&self, other: &SparsePoly) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    fn from_map(ring: &Arc<PolyRing>, acc: FxHashMap<Monomial, Rational>) -> SparsePoly {
        SparsePoly {
            ring: Arc::clone(ring),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        self.check_ring(other);
        let mut out = self.clone();
        out.add_assign_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        self.check_ring(other);
        let mut out = self.clone();
        out.add_assign_scaled(other, &-Rational::one());
        out
    }

    /// `self += c * other`.
    pub fn add_assign_scaled(&mut self, other: &SparsePoly, c: &Rational) {
        self.check_ring(other);
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            let add = v * c;
            match self.terms.get_mut(m) {
                Some(cur) => {
                    *cur += add;
                    if cur.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), add);
                }
            }
        }
    }

    pub fn neg(&self) -> SparsePoly {
        SparsePoly {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> SparsePoly {
        if c.is_zero() {
            return self.ring.zero();
        }
        SparsePoly {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return self.ring.zero();
        }
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let outer: Vec<(&Monomial, &Rational)> = large.terms.iter().collect();
        let inner: Vec<(&Monomial, &Rational)> = small.terms.iter().collect();
        let accumulate = |chunk: &[(&Monomial, &Rational)]| {
            let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
            for (ma, ca) in chunk {
                for (mb, cb) in &inner {
                    let prod = *ca * *cb;
                    acc.entry(ma.mul(mb))
                        .and_modify(|c| *c += &prod)
                        .or_insert(prod);
                }
            }
            acc
        };
        let acc = if outer.len() * inner.len() > PARALLEL_MUL_THRESHOLD && outer.len() > 1 {
            let chunk = (outer.len() / (4 * rayon::current_num_threads())).max(1);
            outer
                .par_chunks(chunk)
                .map(accumulate)
                .reduce(FxHashMap::default, |mut a, b| {
                    if a.len() < b.len() {
                        return merge(b, a);
                    }
                    for (m, c) in b {
                        a.entry(m).and_modify(|x| *x += &c).or_insert(c);
                    }
                    a
                })
        } else {
            accumulate(&outer)
        };
        SparsePoly::from_map(&self.ring, acc)
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        CommRing::pow(self, e)
    }

    /// Partial derivative with respect to the variable at index `var`.
    pub fn derivative(&self, var: usize) -> SparsePoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            terms.insert(Monomial(exps), c * Rational::from_integer(BigInt::from(e)));
        }
        SparsePoly {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    /// Evaluates at a point given densely in ring variable order.
    ///
    /// Works over the integers: coefficients and point are brought to common
    /// denominators `L` and `D`, every term is padded to the top degree with
    /// powers of `D`, and a single division happens at the end.
    pub fn evaluate(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.ring.num_vars(), "point has wrong length");
        let Some(top) = self.total_degree() else {
            return Rational::zero();
        };
        let coef_den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let max_exp = self.max_exponents();
        let d = values
            .iter()
            .zip(&max_exp)
            .filter(|(_, &e)| e > 0)
            .fold(BigInt::one(), |acc, (v, _)| acc.lcm(v.denom()));
        let powers: Vec<Vec<BigInt>> = values
            .iter()
            .zip(&max_exp)
            .map(|(v, &e)| {
                let mut row = Vec::with_capacity(e as usize + 1);
                row.push(BigInt::one());
                if e > 0 {
                    let base = v.numer() * (&d / v.denom());
                    for k in 1..=e as usize {
                        let next = &row[k - 1] * &base;
                        row.push(next);
                    }
                }
                row
            })
            .collect();
        let d_powers: Vec<BigInt> = if d.is_one() {
            Vec::new()
        } else {
            let mut row = vec![BigInt::one()];
            for k in 1..=top as usize {
                let next = &row[k - 1] * &d;
                row.push(next);
            }
            row
        };
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.numer() * (&coef_den / c.denom());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            if !d_powers.is_empty() {
                t *= &d_powers[(top - m.total_degree()) as usize];
            }
            total += t;
        }
        let den = if d_powers.is_empty() {
            coef_den
        } else {
            coef_den * &d_powers[top as usize]
        };
        Rational::new(total, den)
    }

    /// Evaluates with values looked up by variable name; every variable that
    /// occurs must be bound.
    pub fn evaluate_named(&self, values: &HashMap<String, Rational>) -> Result<Rational> {
        let used = self.support_vars();
        let mut point = vec![Rational::zero(); self.ring.num_vars()];
        for name in used {
            let v = values
                .get(name)
                .ok_or_else(|| Error::UnboundVariable(name.to_string()))?;
            point[self.ring.var_index(name).unwrap()] = v.clone();
        }
        Ok(self.evaluate(&point))
    }

    fn max_exponents(&self) -> Vec<u16> {
        let mut max = vec![0u16; self.ring.num_vars()];
        for m in self.terms.keys() {
            for (x, &e) in max.iter_mut().zip(&m.0) {
                *x = (*x).max(e);
            }
        }
        max
    }

    /// Rewrites the polynomial over another ring, matching variables by name.
    pub fn into_ring(&self, target: &Arc<PolyRing>) -> Result<SparsePoly> {
        let mut map = Vec::with_capacity(self.ring.num_vars());
        for name in &self.ring.vars {
            map.push(target.var_index(name));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; target.num_vars()];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| Error::UnknownVariable(self.ring.vars[i].clone()))?;
                exps[j] += e;
            }
            terms.insert(Monomial(exps), c.clone());
        }
        Ok(SparsePoly {
            ring: Arc::clone(target),
            terms,
        })
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients.
    pub fn content(&self) -> Rational {
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        if g.is_zero() {
            Rational::one()
        } else {
            Rational::new(g, l)
        }
    }

    /// `self / content`, so coefficients are coprime integers.
    pub fn primitive_part(&self) -> SparsePoly {
        let c = self.content();
        self.scale(&c.recip())
    }

    /// Leading term in the monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn monomial_string(&self, m: &Monomial) -> String {
        let factors: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.ring.vars[i].clone()
                } else {
                    format!("{}^{}", self.ring.vars[i], e)
                }
            })
            .collect();
        factors.join("*")
    }

    /// Terms rendered individually in decreasing monomial order, e.g. `-4*k12*k13`.
    pub fn term_strings(&self) -> Vec<String> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| render_term(&self.monomial_string(m), c))
            .collect()
    }
}

fn merge(
    mut a: FxHashMap<Monomial, Rational>,
    b: FxHashMap<Monomial, Rational>,
) -> FxHashMap<Monomial, Rational> {
    for (m, c) in b {
        a.entry(m).and_modify(|x| *x += &c).or_insert(c);
    }
    a
}

fn render_term(mono: &str, c: &Rational) -> String {
    if mono.is_empty() {
        return format_rational(c);
    }
    if c.is_one() {
        mono.to_string()
    } else if (-c).is_one() {
        format!("-{mono}")
    } else {
        format!("{}*{}", format_rational(c), mono)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono = self.monomial_string(m);
            if k == 0 {
                f.write_str(&render_term(&mono, c))?;
            } else if c.is_negative() {
                write!(f, " - {}", render_term(&mono, &-c))?;
            } else {
                write!(f, " + {}", render_term(&mono, c))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({self})")
    }
}

impl CommRing for SparsePoly {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }
    fn one_like(&self) -> Self {
        self.ring.one()
    }
    fn is_zero_value(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn scale(&self, c: &Rational) -> Self {
        SparsePoly::scale(self, c)
    }
    fn compatible(&self, other: &Self) -> bool {
        self.same_ring(other)
    }
}

/// Substitutes a value for every variable occurring in `p` and expands.
/// `like` fixes the target ring (e.g. a zero polynomial of the parameter ring).
pub fn poly_substitute<R: CommRing>(
    p: &SparsePoly,
    bindings: &HashMap<String, R>,
    like: &R,
) -> Result<R> {
    let max_exp = p.max_exponents();
    let mut powers: Vec<Vec<R>> = Vec::with_capacity(max_exp.len());
    for (i, &e) in max_exp.iter().enumerate() {
        if e == 0 {
            powers.push(Vec::new());
            continue;
        }
        let name = &p.ring.vars[i];
        let v = bindings
            .get(name)
            .ok_or_else(|| Error::UnboundVariable(name.clone()))?;
        if !v.compatible(like) {
            return Err(Error::RingMismatch(format!(
                "binding for `{name}` lives in a different ring"
            )));
        }
        let mut row = vec![like.one_like(), v.clone()];
        for k in 2..=e as usize {
            let next = row[k - 1].times(v);
            row.push(next);
        }
        powers.push(row);
    }
    let mut total = like.zero_like();
    for (m, c) in &p.terms {
        let mut t: Option<R> = None;
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let f = &powers[i][e as usize];
            t = Some(match t {
                None => f.clone(),
                Some(acc) => acc.times(f),
            });
        }
        let t = match t {
            None => like.constant_like(c),
            Some(acc) => acc.scale(c),
        };
        total = total.plus(&t);
    }
    Ok(total)
}

/// Discriminant of the binary quartic `a x^4 + b x^3 + c x^2 + d x + e`
/// (16 terms, degree 6 in the coefficients).
pub fn binary_quartic_discriminant<R: CommRing>(a: &R, b: &R, c: &R, d: &R, e: &R) -> R {
    // shared powers
    let a2 = a.times(a);
    let a3 = a2.times(a);
    let b2 = b.times(b);
    let b3 = b2.times(b);
    let b4 = b3.times(b);
    let c2 = c.times(c);
    let c3 = c2.times(c);
    let c4 = c3.times(c);
    let d2 = d.times(d);
    let d3 = d2.times(d);
    let d4 = d3.times(d);
    let e2 = e.times(e);
    let e3 = e2.times(e);
    let k = |v: i64| Rational::from_integer(BigInt::from(v));

    let ae = a.times(e);
    let bd = b.times(d);
    let terms: Vec<(i64, R)> = vec![
        (256, a3.times(&e3)),
        (-192, a2.times(&e2).times(&bd)),
        (-128, a2.times(&c2).times(&e2)),
        (144, a2.times(c).times(&d2).times(e)),
        (-27, a2.times(&d4)),
        (144, b2.times(c).times(&e2).times(a)),
        (-6, b2.times(&d2).times(&ae)),
        (-80, c2.times(&bd).times(&ae)),
        (18, c.times(&d2).times(&bd).times(a)),
        (16, c4.times(&ae)),
        (-4, c3.times(&d2).times(a)),
        (-27, b4.times(&e2)),
        (18, b2.times(&bd).times(c).times(e)),
        (-4, b3.times(&d3)),
        (-4, b2.times(&c3).times(e)),
        (1, b2.times(&c2).times(&d2)),
    ];
    terms
        .into_iter()
        .fold(a.zero_like(), |acc, (coef, t)| acc.plus(&t.scale(&k(coef))))
}
