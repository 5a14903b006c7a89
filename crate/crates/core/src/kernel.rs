//! Coefficient recurrences shared by the `f64` series type and the
//! double-double evaluation used for inverse logarithmic coefficients.
//!
//! All routines take coefficient slices that already hold at least
//! `order + 1` entries; callers check orders.

use std::iter::Sum;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::Num;
use twofloat::TwoFloat;

use crate::series::C64;

pub(crate) trait Scalar: Copy + Num + Neg<Output = Self> + Sum {
    fn from_usize(k: usize) -> Self;
    fn from_c64(c: C64) -> Self;
    fn to_c64(self) -> C64;
}

impl Scalar for C64 {
    fn from_usize(k: usize) -> Self {
        C64::new(k as f64, 0.0)
    }

    fn from_c64(c: C64) -> Self {
        c
    }

    fn to_c64(self) -> C64 {
        self
    }
}

/// Complex double-double, about 32 significant digits.
pub(crate) type Dd = Complex<TwoFloat>;

impl Scalar for Dd {
    fn from_usize(k: usize) -> Self {
        Complex::new(TwoFloat::from(k as f64), TwoFloat::from(0.0))
    }

    fn from_c64(c: C64) -> Self {
        Complex::new(TwoFloat::from(c.re), TwoFloat::from(c.im))
    }

    fn to_c64(self) -> C64 {
        C64::new(f64::from(self.re), f64::from(self.im))
    }
}

pub(crate) fn lift<T: Scalar>(c: &[C64]) -> Vec<T> {
    c.iter().map(|&x| T::from_c64(x)).collect()
}

pub(crate) fn lower<T: Scalar>(c: &[T]) -> Vec<C64> {
    c.iter().map(|&x| x.to_c64()).collect()
}

pub(crate) fn mul<T: Scalar>(a: &[T], b: &[T], order: usize) -> Vec<T> {
    (0..=order)
        .map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum())
        .collect()
}

/// `1/a` for `a_0 = 1`: `r_k = -sum_{j=1}^{k} a_j r_{k-j}`.
pub(crate) fn recip<T: Scalar>(a: &[T], order: usize) -> Vec<T> {
    let mut r = vec![T::zero(); order + 1];
    r[0] = T::one();
    for k in 1..=order {
        let s: T = (1..=k).map(|j| a[j] * r[k - j]).sum();
        r[k] = -s;
    }
    r
}

/// `log a` for `a_0 = 1`: `k l_k = k a_k - sum_{j=1}^{k-1} j l_j a_{k-j}`.
pub(crate) fn ln<T: Scalar>(a: &[T], order: usize) -> Vec<T> {
    let mut l = vec![T::zero(); order + 1];
    for k in 1..=order {
        let s: T = (1..k).map(|j| l[j] * a[k - j] * T::from_usize(j)).sum();
        l[k] = a[k] - s / T::from_usize(k);
    }
    l
}

/// `exp a` for `a_0 = 0`: `k e_k = sum_{j=1}^{k} j a_j e_{k-j}`.
pub(crate) fn exp<T: Scalar>(a: &[T], order: usize) -> Vec<T> {
    let mut e = vec![T::zero(); order + 1];
    e[0] = T::one();
    for k in 1..=order {
        let s: T = (1..=k).map(|j| a[j] * e[k - j] * T::from_usize(j)).sum();
        e[k] = s / T::from_usize(k);
    }
    e
}

/// Compositional inverse of `a` (`a_0 = 0`, `a_1 = 1`).
///
/// Coefficients are obtained one at a time from `[w^n] f(F(w)) = 0`. The
/// powers `F^k` are kept as a table filled column by column, since
/// `[w^n] F^k` for `k >= 2` only involves `A_2..A_{n-1}`.
pub(crate) fn revert<T: Scalar>(a: &[T], order: usize) -> Vec<T> {
    if order == 0 {
        return vec![T::zero()];
    }
    // powers[k][m] = [w^m] F^k, k = 1..=order
    let mut powers = vec![vec![T::zero(); order + 1]; order + 1];
    for (k, row) in powers.iter_mut().enumerate().skip(1) {
        row[k] = T::one();
    }
    for n in 2..=order {
        let mut acc = T::zero();
        for k in 2..=n {
            if k < n {
                // [w^n] F^k = sum_i [w^i]F * [w^{n-i}] F^{k-1}, i = 1..=n-k+1
                let (lower, upper) = powers.split_at_mut(k);
                let (first, prev) = (&lower[1], &lower[k - 1]);
                upper[0][n] = (1..=n - k + 1).map(|i| first[i] * prev[n - i]).sum();
            }
            acc = acc + a[k] * powers[k][n];
        }
        powers[1][n] = -acc;
    }
    let mut coeffs = powers.swap_remove(1);
    coeffs[0] = T::zero();
    coeffs
}
