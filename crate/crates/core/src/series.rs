//! Truncated formal power series over exact rationals.
//!
//! A [`Series`] of order `N` stores the coefficients of `z^0 ..= z^N` and
//! stands for a power series modulo `z^(N+1)`. Every operation is exact in
//! that quotient ring. Binary operations on series of different orders
//! truncate to the smaller order; nothing ever extends precision implicitly.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    /// Builds a series of order `coeffs.len() - 1`.
    ///
    /// Panics on an empty coefficient list: a series always knows at least
    /// its constant term.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Self { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        Self::new((0..=order).map(f).collect())
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| int(v)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| Rational::zero())
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z` (or `0` when `order == 0`).
    pub fn identity(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    /// `c·z^power`, dropped entirely when `power > order`.
    pub fn monomial(c: Rational, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> Result<&Rational> {
        self.coeffs.get(m).ok_or(Error::OutOfRange {
            index: m,
            order: self.order(),
        })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Drops coefficients above `order`. Orders above the current one are clamped.
    pub fn truncate(&self, order: usize) -> Series {
        let order = order.min(self.order());
        Self::new(self.coeffs[..=order].to_vec())
    }

    /// Pads with zero coefficients up to `order`. Only meaningful when the caller
    /// knows the missing coefficients are being recomputed (Newton steps).
    fn zero_extend(&self, order: usize) -> Series {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order.max(self.order()) + 1, Rational::zero());
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Exact multiplication by `z`; the order grows by one.
    pub fn mul_z(&self) -> Series {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// `z·s mod z^(N+1)`: the top coefficient falls off and the order is kept.
    pub fn shift_truncated(&self) -> Series {
        self.mul_z().truncate(self.order())
    }

    /// Exact division by `z`; the order drops by one.
    pub fn div_z(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("division by z needs a zero constant term".into()));
        }
        if self.order() == 0 {
            return Err(Error::InsufficientOrder { need: 1, have: 0 });
        }
        Ok(Self::new(self.coeffs[1..].to_vec()))
    }

    fn shift_down(&self, by: usize) -> Series {
        Self::new(self.coeffs[by..].to_vec())
    }

    /// Cauchy product modulo `z^(min order + 1)`.
    pub fn mul(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn invert(&self) -> Result<Series> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = a0.recip();
        let n = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for m in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=m {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += a * &out[m - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Self::new(out))
    }

    pub fn div(&self, other: &Series) -> Result<Series> {
        Ok(self.mul(&other.invert()?))
    }

    /// `exp(a)` for `a` with zero constant term, via `m·e_m = Σ j·a_j·e_{m-j}`.
    pub fn exp(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("exp needs a zero constant term".into()));
        }
        let n = self.order();
        let weighted: Vec<Rational> = self.theta().into_coeffs();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(Rational::one());
        for m in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=m {
                if !weighted[j].is_zero() {
                    acc += &weighted[j] * &out[m - j];
                }
            }
            out.push(acc / int(m as i64));
        }
        Ok(Self::new(out))
    }

    /// `log(a)` for `a` with constant term one; the result has zero constant term.
    pub fn log(&self) -> Result<Series> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain("log needs constant term 1".into()));
        }
        // θ log a = θa / a
        let quotient = self.theta().div(self)?;
        Ok(quotient.integrate_theta())
    }

    /// Inverse of θ on series with zero constant term.
    fn integrate_theta(&self) -> Series {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| if m == 0 { Rational::zero() } else { c / int(m as i64) })
                .collect(),
        )
    }

    /// `a^e = exp(e·log a)` for a unit series `a` (constant term one).
    pub fn pow_rational(&self, e: &Rational) -> Result<Series> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain("rational powers need constant term 1".into()));
        }
        self.log()?.scale(e).exp()
    }

    /// θ = z·d/dz, coefficientwise `m·a_m`.
    pub fn theta(&self) -> Series {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| c * int(m as i64))
                .collect(),
        )
    }

    /// d/dz; the order drops by one (kept at zero for constants).
    pub fn derivative(&self) -> Series {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(m, c)| c * int(m as i64))
                .collect(),
        )
    }

    /// `f(g(z))` for `g` with zero constant term, by Horner evaluation.
    pub fn compose(&self, g: &Series) -> Result<Series> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::Domain("inner series of a composition needs zero constant term".into()));
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for c in self.coeffs[..n].iter().rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Functional inverse: `g` with `f(g) = z = g(f)` modulo `z^(N+1)`.
    ///
    /// Newton iteration `g ← g − (f∘g − z)/(f'∘g)`, doubling the number of
    /// correct coefficients each round.
    pub fn revert(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("reversion needs a zero constant term".into()));
        }
        let n = self.order();
        if n == 0 {
            return Err(Error::InsufficientOrder { need: 1, have: 0 });
        }
        let f1 = &self.coeffs[1];
        if f1.is_zero() {
            return Err(Error::Domain("reversion needs a nonzero linear coefficient".into()));
        }
        let df = self.derivative();
        let mut g = Self::new(vec![Rational::zero(), f1.recip()]);
        // g is correct modulo z^prec
        let mut prec = 2;
        while prec <= n {
            let next = (2 * prec).min(n + 1);
            let top = next - 1;
            let g_ext = g.zero_extend(top);
            let residual = &self.truncate(top).compose(&g_ext)? - &Self::identity(top);
            // residual = O(z^prec): only its coefficients prec..=top matter.
            let width = top - prec;
            let slope = df.truncate(width).compose(&g_ext.truncate(width))?;
            let step = residual.shift_down(prec).mul(&slope.invert()?);
            let mut correction = Self::zero(top);
            for (i, c) in step.coeffs.into_iter().enumerate() {
                correction.coeffs[prec + i] = c;
            }
            g = &g_ext - &correction;
            prec = next;
        }
        Ok(g)
    }
}

/// Coefficients `a_1..a_count` of `z = Σ a_m q^m` for `q = z·exp(φ(z))`,
/// from `a_m = [z^(m-1)] (1 + θφ)·exp(−mφ)`.
pub fn lagrange_coeffs(phi: &Series, count: usize) -> Result<Vec<Rational>> {
    if !phi.coeffs[0].is_zero() {
        return Err(Error::Domain("phi needs a zero constant term".into()));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let top = count - 1;
    if phi.order() < top {
        return Err(Error::InsufficientOrder {
            need: top,
            have: phi.order(),
        });
    }
    let phi = phi.truncate(top);
    let jacobian = &Series::one(top) + &phi.theta();
    let damp = (-&phi).exp()?;
    let mut power = Series::one(top);
    let mut out = Vec::with_capacity(count);
    for m in 1..=count {
        power = power.mul(&damp);
        let idx = m - 1;
        let mut a = Rational::zero();
        for i in 0..=idx {
            let (x, y) = (&jacobian.coeffs[i], &power.coeffs[idx - i]);
            if !x.is_zero() && !y.is_zero() {
                a += x * y;
            }
        }
        out.push(a);
    }
    Ok(out)
}

/// Serialized as the list of coefficient strings, index 0 first.
impl Serialize for Series {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::rational::vec_as_string::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs = crate::rational::vec_as_string::deserialize(d)?;
        if coeffs.is_empty() {
            return Err(serde::de::Error::custom("empty coefficient list"));
        }
        Ok(Series::new(coeffs))
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        Series::new((0..=n).map(|m| &self.coeffs[m] + &other.coeffs[m]).collect())
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        Series::new((0..=n).map(|m| &self.coeffs[m] - &other.coeffs[m]).collect())
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, other: &Series) -> Series {
        Series::mul(self, other)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// `regular + logpart·log z`, the carrier for logarithmic solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSeries {
    pub regular: Series,
    pub logpart: Series,
}

impl LogSeries {
    pub fn new(regular: Series, logpart: Series) -> Self {
        let n = regular.order().min(logpart.order());
        Self {
            regular: regular.truncate(n),
            logpart: logpart.truncate(n),
        }
    }

    /// A solution without logarithmic part.
    pub fn regular(s: Series) -> Self {
        let n = s.order();
        Self::new(s, Series::zero(n))
    }

    pub fn order(&self) -> usize {
        self.regular.order()
    }

    pub fn is_zero(&self) -> bool {
        self.regular.is_zero() && self.logpart.is_zero()
    }

    /// θ(R + L·log z) = θR + L + θL·log z
    pub fn theta(&self) -> LogSeries {
        LogSeries {
            regular: &self.regular.theta() + &self.logpart,
            logpart: self.logpart.theta(),
        }
    }

    pub fn scale(&self, c: &Rational) -> LogSeries {
        LogSeries {
            regular: self.regular.scale(c),
            logpart: self.logpart.scale(c),
        }
    }

    /// `z·Φ` at fixed order.
    pub fn shift_truncated(&self) -> LogSeries {
        LogSeries {
            regular: self.regular.shift_truncated(),
            logpart: self.logpart.shift_truncated(),
        }
    }

    /// `(θ + c)Φ`
    pub fn theta_plus(&self, c: &Rational) -> LogSeries {
        &self.theta() + &self.scale(c)
    }
}

impl Add for &LogSeries {
    type Output = LogSeries;
    fn add(self, other: &LogSeries) -> LogSeries {
        LogSeries::new(&self.regular + &other.regular, &self.logpart + &other.logpart)
    }
}

impl Sub for &LogSeries {
    type Output = LogSeries;
    fn sub(self, other: &LogSeries) -> LogSeries {
        LogSeries::new(&self.regular - &other.regular, &self.logpart - &other.logpart)
    }
}
