//! Truncated power series over `Complex64`.
//!
//! A [`Series`] of order `N` stores exactly `N + 1` coefficients and stands for
//! its residue class modulo `z^{N+1}`. Every operation takes the target order
//! explicitly and asserts that the operands carry enough coefficients; the
//! kernel never pads an operand with implied zeros.
//!
//! [`UnitSeries`] (constant term exactly 1) and [`AnalyticSeries`]
//! (`f(0) = 0`, `f'(0) = 1` exactly) are checked wrappers used throughout the
//! rest of the crate.

use std::ops::Deref;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("expected constant term 1, found {0}")]
    NonUnitConstant(C64),
    #[error("expected constant term 0, found {0}")]
    NonZeroConstant(C64),
    #[error("expected linear coefficient 1, found {0}")]
    NonUnitLinear(C64),
    #[error("series needs order {needed}, has {have}")]
    InsufficientOrder { needed: usize, have: usize },
    #[error("series must have at least one coefficient")]
    Empty,
}

/// Truncated power series `c_0 + c_1 z + ... + c_N z^N (mod z^{N+1})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    coeffs: Vec<C64>,
}

impl Series {
    /// Takes ownership of `c_0..c_N`; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<C64>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Series { coeffs })
    }

    /// A polynomial viewed as a series of the given order. Terms above
    /// `order` are dropped, missing terms are exact zeros.
    pub fn from_poly(poly: &[C64], order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        for (dst, src) in coeffs.iter_mut().zip(poly) {
            *dst = *src;
        }
        Series { coeffs }
    }

    pub fn from_real_poly(poly: &[f64], order: usize) -> Self {
        let poly: Vec<C64> = poly.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_poly(&poly, order)
    }

    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![ZERO; order + 1],
        }
    }

    pub fn constant(value: C64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    /// `c z^k`.
    pub fn monomial(c: C64, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The identity series `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(ONE, 1, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    /// Coefficient of `z^k`. Panics if `k` exceeds the order.
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs[k]
    }

    pub fn require_order(&self, needed: usize) -> Result<(), SeriesError> {
        if self.order() < needed {
            Err(SeriesError::InsufficientOrder {
                needed,
                have: self.order(),
            })
        } else {
            Ok(())
        }
    }

    /// Drops coefficients above `order`. Raising the order is not allowed.
    pub fn truncate(&self, order: usize) -> Series {
        assert!(
            order <= self.order(),
            "cannot truncate order {} series to higher order {order}",
            self.order()
        );
        Series {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Treats `self` as an exact polynomial and re-expresses it at `order`.
    /// Only meaningful when the caller knows the series is a polynomial of
    /// degree at most `self.order()`.
    pub fn pad_polynomial(&self, order: usize) -> Series {
        Self::from_poly(&self.coeffs, order)
    }

    pub fn add(&self, other: &Series, order: usize) -> Series {
        check_order(self, order);
        check_order(other, order);
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k] + other.coeffs[k])
            .collect();
        Series { coeffs }
    }

    pub fn sub(&self, other: &Series, order: usize) -> Series {
        check_order(self, order);
        check_order(other, order);
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k] - other.coeffs[k])
            .collect();
        Series { coeffs }
    }

    pub fn scale(&self, factor: C64) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Multiplies by `z^k`; the order grows by `k` because the low terms are
    /// exact zeros.
    pub fn shift_up(&self, k: usize) -> Series {
        let mut coeffs = vec![ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Series { coeffs }
    }

    /// Divides by `z^k`. The first `k` coefficients must be exactly zero; the
    /// order shrinks by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Series, SeriesError> {
        if let Some(c) = self.coeffs.iter().take(k).find(|c| **c != ZERO) {
            return Err(SeriesError::NonZeroConstant(*c));
        }
        self.require_order(k)?;
        Ok(Series {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Horner evaluation of the truncation at a point.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    pub fn max_abs_diff(&self, other: &Series) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

fn check_order(s: &Series, order: usize) {
    assert!(
        s.order() >= order,
        "operand of order {} used at order {order}",
        s.order()
    );
}

/// Cauchy product modulo `z^{order+1}`.
pub fn multiply(a: &Series, b: &Series, order: usize) -> Series {
    check_order(a, order);
    check_order(b, order);
    Series {
        coeffs: kernel::mul(&a.coeffs, &b.coeffs, order),
    }
}

/// `1 / a` for a series with constant term 1.
pub fn reciprocal(a: &Series, order: usize) -> Result<UnitSeries, SeriesError> {
    let unit = UnitSeries::new(a.clone())?;
    Ok(unit.recip(order))
}

/// Principal logarithm of a series with constant term 1. The result has
/// constant term exactly 0.
pub fn log_unit(a: &Series, order: usize) -> Result<Series, SeriesError> {
    let unit = UnitSeries::new(a.clone())?;
    Ok(unit.ln(order))
}

/// `exp(a)` for a series with constant term 0.
pub fn exp_zero(a: &Series, order: usize) -> Result<UnitSeries, SeriesError> {
    if a.coeffs[0] != ZERO {
        return Err(SeriesError::NonZeroConstant(a.coeffs[0]));
    }
    check_order(a, order);
    Ok(UnitSeries(Series {
        coeffs: kernel::exp(&a.coeffs, order),
    }))
}

/// `a^mu` on the principal branch (`1^mu = 1`), computed as `exp(mu log a)`.
pub fn pow_scalar(a: &Series, mu: C64, order: usize) -> Result<UnitSeries, SeriesError> {
    let unit = UnitSeries::new(a.clone())?;
    Ok(unit.powc(mu, order))
}

/// `outer(inner(z))` by Horner's scheme. `inner` must vanish at the origin.
pub fn compose(outer: &Series, inner: &Series, order: usize) -> Result<Series, SeriesError> {
    if inner.coeffs[0] != ZERO {
        return Err(SeriesError::NonZeroConstant(inner.coeffs[0]));
    }
    check_order(outer, order);
    check_order(inner, order);
    let mut acc = Series::constant(outer.coeffs[order], order);
    for k in (0..order).rev() {
        acc = multiply(&acc, inner, order);
        acc.coeffs[0] += outer.coeffs[k];
    }
    Ok(acc)
}

/// Compositional inverse `F` with `f(F(w)) = w (mod w^{order+1})`, by
/// triangular back-substitution against a table of powers of `F`.
pub fn revert(f: &AnalyticSeries, order: usize) -> AnalyticSeries {
    check_order(f, order);
    let mut coeffs = kernel::revert(f.coeffs(), order);
    if order >= 1 {
        coeffs[1] = ONE;
    }
    AnalyticSeries(Series { coeffs })
}

/// Series reversion by Newton iteration `F <- F - (f(F) - w) / f'(F)`,
/// doubling the number of correct coefficients per step. Agrees with
/// [`revert`] up to rounding.
pub fn revert_newton(f: &AnalyticSeries, order: usize) -> AnalyticSeries {
    check_order(f, order);
    if order <= 1 {
        return AnalyticSeries(Series::identity(order));
    }
    let df = differentiate(f);
    let mut inv = Series::identity(1);
    let mut prec = 1;
    while prec < order {
        let next = (2 * prec).min(order);
        let guess = inv.pad_polynomial(next);
        let residual = compose(f, &guess, next)
            .expect("guess vanishes at 0")
            .sub(&Series::identity(next), next);
        // residual = O(w^{prec+1}); only its tail matters.
        let tail = Series {
            coeffs: residual.coeffs[prec + 1..].to_vec(),
        };
        let tail_order = next - prec - 1;
        let slope =
            compose(&df, &guess.truncate(tail_order), tail_order).expect("guess vanishes at 0");
        let step = multiply(&tail, &UnitSeries(slope).recip(tail_order), tail_order);
        let mut coeffs = guess.coeffs;
        for (m, c) in step.coeffs.iter().enumerate() {
            coeffs[prec + 1 + m] -= c;
        }
        inv = Series { coeffs };
        prec = next;
    }
    inv.coeffs[0] = ZERO;
    inv.coeffs[1] = ONE;
    AnalyticSeries(inv)
}

/// Termwise antiderivative with zero constant term, of the given order.
pub fn integrate(a: &Series, order: usize) -> Series {
    let mut coeffs = vec![ZERO; order + 1];
    if order >= 1 {
        check_order(a, order - 1);
    }
    for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = a.coeffs[k - 1] / k as f64;
    }
    Series { coeffs }
}

/// Termwise derivative; the order drops by one (order 0 stays order 0).
pub fn differentiate(a: &Series) -> Series {
    if a.order() == 0 {
        return Series::zero(0);
    }
    let coeffs = (1..=a.order()).map(|k| a.coeffs[k] * k as f64).collect();
    Series { coeffs }
}

/// Series with constant term exactly 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Series", into = "Series")]
pub struct UnitSeries(Series);

impl UnitSeries {
    pub fn new(s: Series) -> Result<Self, SeriesError> {
        if s.coeffs[0] != ONE {
            return Err(SeriesError::NonUnitConstant(s.coeffs[0]));
        }
        Ok(UnitSeries(s))
    }

    pub fn into_series(self) -> Series {
        self.0
    }

    pub fn recip(&self, order: usize) -> UnitSeries {
        check_order(self, order);
        UnitSeries(Series {
            coeffs: kernel::recip(&self.0.coeffs, order),
        })
    }

    pub fn ln(&self, order: usize) -> Series {
        check_order(self, order);
        Series {
            coeffs: kernel::ln(&self.0.coeffs, order),
        }
    }

    pub fn powc(&self, mu: C64, order: usize) -> UnitSeries {
        let log = self.ln(order).scale(mu);
        exp_zero(&log, order).expect("log has zero constant term")
    }

    pub fn mul(&self, other: &UnitSeries, order: usize) -> UnitSeries {
        let mut p = multiply(self, other, order);
        p.coeffs[0] = ONE;
        UnitSeries(p)
    }
}

impl Deref for UnitSeries {
    type Target = Series;
    fn deref(&self) -> &Series {
        &self.0
    }
}

impl TryFrom<Series> for UnitSeries {
    type Error = SeriesError;
    fn try_from(s: Series) -> Result<Self, SeriesError> {
        UnitSeries::new(s)
    }
}

impl From<UnitSeries> for Series {
    fn from(u: UnitSeries) -> Series {
        u.0
    }
}

/// Normalized series `z + a_2 z^2 + ...` with `c_0 = 0` and `c_1 = 1` exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Series", into = "Series")]
pub struct AnalyticSeries(Series);

impl AnalyticSeries {
    pub fn new(s: Series) -> Result<Self, SeriesError> {
        if s.coeffs[0] != ZERO {
            return Err(SeriesError::NonZeroConstant(s.coeffs[0]));
        }
        s.require_order(1)?;
        if s.coeffs[1] != ONE {
            return Err(SeriesError::NonUnitLinear(s.coeffs[1]));
        }
        Ok(AnalyticSeries(s))
    }

    /// `z + tail[0] z^2 + tail[1] z^3 + ...` at the given order.
    pub fn from_tail(tail: &[C64], order: usize) -> Self {
        let mut poly = vec![ZERO, ONE];
        poly.extend_from_slice(tail);
        AnalyticSeries(Series::from_poly(&poly, order.max(1)))
    }

    /// `z * u(z)` for a unit series `u`; the order grows by one.
    pub fn from_unit_times_z(u: &UnitSeries) -> Self {
        AnalyticSeries(u.0.shift_up(1))
    }

    pub fn identity(order: usize) -> Self {
        AnalyticSeries(Series::identity(order.max(1)))
    }

    /// `a_n`, the coefficient of `z^n`.
    pub fn a(&self, n: usize) -> C64 {
        self.0.coeffs[n]
    }

    /// `f(z) / z`, a unit series of order one less.
    pub fn over_z(&self) -> UnitSeries {
        UnitSeries(Series {
            coeffs: self.0.coeffs[1..].to_vec(),
        })
    }

    /// `e^{-i theta} f(e^{i theta} z)`.
    pub fn rotate(&self, theta: f64) -> AnalyticSeries {
        let mut coeffs = self.0.coeffs.clone();
        for (k, c) in coeffs.iter_mut().enumerate().skip(2) {
            *c *= C64::from_polar(1.0, theta * (k as f64 - 1.0));
        }
        AnalyticSeries(Series { coeffs })
    }

    pub fn truncate(&self, order: usize) -> AnalyticSeries {
        assert!(order >= 1);
        AnalyticSeries(self.0.truncate(order))
    }

    pub fn into_series(self) -> Series {
        self.0
    }
}

impl Deref for AnalyticSeries {
    type Target = Series;
    fn deref(&self) -> &Series {
        &self.0
    }
}

impl TryFrom<Series> for AnalyticSeries {
    type Error = SeriesError;
    fn try_from(s: Series) -> Result<Self, SeriesError> {
        AnalyticSeries::new(s)
    }
}

impl From<AnalyticSeries> for Series {
    fn from(f: AnalyticSeries) -> Series {
        f.0
    }
}
