//! Strategies, oracles and residual checks shared by the property and
//! acceptance suites.
#![allow(dead_code)]

use std::f64::consts::TAU;

use invlog::families::{ClassSpec, Omega, Sample, SampleOrigin};
use invlog::series::{
    compose, differentiate, exp_zero, log_unit, multiply, pow_scalar, reciprocal, revert,
    revert_newton, AnalyticSeries, Series, UnitSeries, C64,
};
use proptest::prelude::*;

pub fn disk(radius: f64) -> impl Strategy<Value = C64> {
    (0.0..=1.0f64, 0.0..TAU).prop_map(move |(u, t)| C64::from_polar(radius * u.sqrt(), t))
}

/// `c_0 = 1`, other coefficients uniform in the unit disk.
pub fn unit_series(order: usize) -> impl Strategy<Value = Series> {
    proptest::collection::vec(disk(1.0), order).prop_map(|tail| {
        let mut c = vec![C64::new(1.0, 0.0)];
        c.extend(tail);
        Series::from_coeffs(c).unwrap()
    })
}

/// `c_0 = 0`, other coefficients uniform in the unit disk.
pub fn zero_series(order: usize) -> impl Strategy<Value = Series> {
    proptest::collection::vec(disk(1.0), order).prop_map(|tail| {
        let mut c = vec![C64::new(0.0, 0.0)];
        c.extend(tail);
        Series::from_coeffs(c).unwrap()
    })
}

/// Any coefficients in the unit disk.
pub fn any_series(order: usize) -> impl Strategy<Value = Series> {
    proptest::collection::vec(disk(1.0), order + 1).prop_map(|c| Series::from_coeffs(c).unwrap())
}

/// Normalized `f` with `a_k` uniform in the disk of radius `rho^{k-1}`.
pub fn decaying_analytic(order: usize, rho: f64) -> impl Strategy<Value = AnalyticSeries> {
    proptest::collection::vec(disk(1.0), order.saturating_sub(1)).prop_map(move |raw| {
        let tail: Vec<C64> = raw
            .iter()
            .enumerate()
            .map(|(i, &c)| c * rho.powi(i as i32 + 1))
            .collect();
        AnalyticSeries::from_tail(&tail, order)
    })
}

pub fn max_err(a: &Series, b: &Series) -> f64 {
    a.max_abs_diff(b)
}

/// Worst coefficient error relative to `max(1, |expected_k|)`.
pub fn max_rel_err(got: &Series, expected: &Series) -> f64 {
    got.coeffs()
        .iter()
        .zip(expected.coeffs())
        .map(|(g, e)| (g - e).norm() / e.norm().max(1.0))
        .fold(0.0, f64::max)
}

// kernel round trips; each returns the worst absolute coefficient error

pub fn log_exp_err(a: &Series, order: usize) -> f64 {
    let e = exp_zero(a, order).unwrap();
    max_err(&e.ln(order), a)
}

pub fn exp_log_err(u: &Series, order: usize) -> f64 {
    let l = log_unit(u, order).unwrap();
    max_err(&exp_zero(&l, order).unwrap(), u)
}

pub fn recip_recip_err(u: &Series, order: usize) -> f64 {
    let r = reciprocal(u, order).unwrap();
    max_err(&reciprocal(&r, order).unwrap(), u)
}

pub fn revert_revert_err(f: &AnalyticSeries, order: usize) -> f64 {
    max_err(&revert(&revert(f, order), order), f)
}

pub fn compose_revert_err(f: &AnalyticSeries, order: usize) -> f64 {
    let id = compose(f, &revert(f, order), order).unwrap();
    max_err(&id, &Series::identity(order))
}

/// Relative error of `pow_scalar(u, m)` against `m`-fold multiplication.
pub fn pow_int_err(u: &Series, m: u32, order: usize) -> f64 {
    let p = pow_scalar(u, C64::new(m as f64, 0.0), order).unwrap();
    let mut prod = u.clone();
    for _ in 1..m {
        prod = multiply(&prod, u, order);
    }
    max_rel_err(&p, &prod)
}

pub fn commutativity_err(a: &Series, b: &Series, order: usize) -> f64 {
    max_err(&multiply(a, b, order), &multiply(b, a, order))
}

pub fn associativity_err(a: &Series, b: &Series, c: &Series, order: usize) -> f64 {
    let left = multiply(&multiply(a, b, order), c, order);
    let right = multiply(a, &multiply(b, c, order), order);
    max_err(&left, &right)
}

fn naive_mul(a: &[C64], b: &[C64], len: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Reversion oracle: `A_n` is read off `[w^n] f(F_{n-1}(w)) = -A_n`, where
/// `F_{n-1}` is the inverse known through degree `n - 1` and every power of
/// it is recomputed from scratch.
pub fn revert_oracle(f: &AnalyticSeries, order: usize) -> Vec<C64> {
    let zero = C64::new(0.0, 0.0);
    let mut inv = vec![zero; order + 1];
    if order >= 1 {
        inv[1] = C64::new(1.0, 0.0);
    }
    for n in 2..=order {
        let len = n + 1;
        let mut power = inv[..len].to_vec();
        let mut coeff_n = power[n];
        for k in 2..=n {
            power = naive_mul(&power, &inv[..len], len);
            coeff_n += f.a(k) * power[n];
        }
        inv[n] = -coeff_n;
    }
    inv
}

pub fn revert_oracle_err(f: &AnalyticSeries, order: usize) -> f64 {
    let oracle = Series::from_coeffs(revert_oracle(f, order)).unwrap();
    max_err(&revert(f, order), &oracle)
}

pub fn newton_err(f: &AnalyticSeries, order: usize) -> f64 {
    max_err(&revert_newton(f, order), &revert(f, order))
}

// subordination residuals for sampled members

fn phi_of(sample: &Sample, order: usize) -> Series {
    match &sample.origin {
        SampleOrigin::Schwarz { phi } => phi.series(order),
        SampleOrigin::Structure { .. } => panic!("not a Schwarz sample"),
    }
}

/// `zf'/f - (1 + A phi)/(1 + B phi)` through order `N - 1`.
pub fn janowski_residual(spec: &ClassSpec, sample: &Sample) -> f64 {
    let (a, b) = spec.janowski().expect("starlike-type class");
    let f = &sample.member;
    let n = f.order() - 1;
    let lhs = multiply(&differentiate(f), &f.over_z().recip(n), n);
    let phi = phi_of(sample, n);
    let num = Series::one(n).add(&phi.scale(a), n);
    let den = UnitSeries::new(Series::one(n).add(&phi.scale(C64::new(b, 0.0)), n)).unwrap();
    max_err(&lhs, &multiply(&num, &den.recip(n), n))
}

/// `zf''/f' (1 - phi) - kappa phi` through order `N - 1`.
pub fn convex_type_residual(kappa: f64, sample: &Sample) -> f64 {
    let f = &sample.member;
    let n = f.order() - 1;
    let df = UnitSeries::new(differentiate(f)).unwrap();
    let zddf = differentiate(&df).shift_up(1);
    let ratio = multiply(&zddf, &df.recip(n), n);
    let phi = phi_of(sample, n);
    let lhs = multiply(&ratio, &Series::one(n).sub(&phi, n), n);
    max_err(&lhs, &phi.scale(C64::new(kappa, 0.0)))
}

/// `f'(z/f)^2 - 1 + lambda z^2 omega` through order `N - 1`.
pub fn u_lambda_residual(lambda: f64, sample: &Sample) -> f64 {
    let SampleOrigin::Structure { omega, .. } = &sample.origin else {
        panic!("not a structure sample");
    };
    u_lambda_relation_residual(lambda, omega, &sample.member)
}

pub fn u_lambda_relation_residual(lambda: f64, omega: &Omega, f: &AnalyticSeries) -> f64 {
    let n = f.order() - 1;
    let q = f.over_z().recip(n);
    let lhs = multiply(&differentiate(f), &multiply(&q, &q, n), n);
    let rhs = Series::one(n).sub(
        &omega
            .series(n)
            .shift_up(2)
            .truncate(n)
            .scale(C64::new(lambda, 0.0)),
        n,
    );
    max_err(&lhs, &rhs)
}
