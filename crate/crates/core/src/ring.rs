//! Exact scalars: Laurent polynomials in a formal parameter `t` with rational
//! coefficients. A plain rational is the Laurent polynomial supported at
//! exponent zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `n/d`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        Some(Rational::from_integer(s.parse().ok()?))
    }
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // fall back on a decimal rendering for huge operands
        let scaled = (x * Rational::from_integer(BigInt::from(10).pow(30))).round();
        scaled.numer().to_f64().unwrap_or(f64::NAN) * 1e-30
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Element of Q[t, 1/t]. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RingElement {
    terms: BTreeMap<i32, Rational>,
}

impl RingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(qi(n))
    }

    /// `c * t^k`.
    pub fn monomial(c: Rational, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    /// `t^k`.
    pub fn t_pow(k: i32) -> Self {
        Self::monomial(Rational::one(), k)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }

    fn add_term(&mut self, k: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// The rational value if the element does not depend on `t`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// `(c, k)` if the element is `c t^k` with `c != 0`.
    pub fn as_monomial(&self) -> Option<(Rational, i32)> {
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().unwrap();
            Some((c.clone(), *k))
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coefficient(&self, k: i32) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (e + k, v.clone())).collect(),
        }
    }

    /// Formal derivative in `t`.
    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(k, c)| (k - 1, c * Rational::from_integer(BigInt::from(*k)))),
        )
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        if !t.is_positive() {
            return Err(Error::NonPositiveParameter(fmt_rational(t)));
        }
        let mut acc = Rational::zero();
        for (k, c) in &self.terms {
            let p = if *k >= 0 {
                num_traits::pow(t.clone(), *k as usize)
            } else {
                num_traits::pow(t.recip(), k.unsigned_abs() as usize)
            };
            acc += c * p;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.terms.iter().map(|(k, c)| rational_to_f64(c) * t.powi(*k)).sum()
    }

    /// Exact division; only monomial divisors are supported.
    pub fn checked_div(&self, divisor: &RingElement) -> Result<Self> {
        let (c, k) = divisor
            .as_monomial()
            .ok_or_else(|| Error::NotMonomial(divisor.to_string()))?;
        Ok(self.scale(&c.recip()).shift(-k))
    }
}

impl From<Rational> for RingElement {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for RingElement {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl AddAssign<&RingElement> for RingElement {
    fn add_assign(&mut self, rhs: &RingElement) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c.clone());
        }
    }
}

impl SubAssign<&RingElement> for RingElement {
    fn sub_assign(&mut self, rhs: &RingElement) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, -c);
        }
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for RingElement {
    type Output = RingElement;
    fn add(mut self, rhs: RingElement) -> RingElement {
        self += &rhs;
        self
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for RingElement {
    type Output = RingElement;
    fn sub(mut self, rhs: RingElement) -> RingElement {
        self -= &rhs;
        self
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    fn mul(self, rhs: RingElement) -> RingElement {
        &self * &rhs
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest power first
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let coef = fmt_rational(&abs);
            match *k {
                0 => write!(f, "{coef}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{coef}*")?;
                    }
                    if *k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_t_squared() {
        assert_eq!(RingElement::t_pow(2).derivative(), RingElement::monomial(qi(2), 1));
    }

    #[test]
    fn product_with_inverse_power() {
        let x = RingElement::t_pow(1) + RingElement::t_pow(-1);
        let y = &x * &RingElement::t_pow(1);
        assert_eq!(y, RingElement::t_pow(2) + RingElement::one());
    }

    #[test]
    fn evaluation() {
        assert_eq!(RingElement::t_pow(3).eval(&qi(2)).unwrap(), qi(8));
        assert_eq!(RingElement::t_pow(-2).eval(&qi(2)).unwrap(), q(1, 4));
        assert!(RingElement::t_pow(1).eval(&qi(0)).is_err());
        assert!(RingElement::t_pow(1).eval(&qi(-1)).is_err());
    }

    #[test]
    fn cancellation_leaves_no_zero_entries() {
        let x = RingElement::t_pow(3) - RingElement::t_pow(3);
        assert!(x.is_zero());
        assert_eq!(x, RingElement::zero());
        assert_eq!(RingElement::int(0), RingElement::zero());
    }

    #[test]
    fn monomial_division_only() {
        let x = RingElement::monomial(qi(4), 3) + RingElement::int(2);
        let y = x.checked_div(&RingElement::monomial(qi(2), 1)).unwrap();
        assert_eq!(y, RingElement::monomial(qi(2), 2) + RingElement::t_pow(-1));
        let bad = RingElement::t_pow(1) + RingElement::one();
        assert!(matches!(x.checked_div(&bad), Err(Error::NotMonomial(_))));
    }

    #[test]
    fn display() {
        let x = RingElement::monomial(q(-1, 2), -3) + RingElement::monomial(qi(2), 1) + RingElement::one();
        assert_eq!(x.to_string(), "2*t + 1 - 1/2*t^-3");
    }

    #[test]
    fn sqrt_of_perfect_squares() {
        assert_eq!(rational_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(rational_sqrt(&qi(2)), None);
        assert_eq!(rational_sqrt(&qi(-4)), None);
    }
}
