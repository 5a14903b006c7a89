//! Inverse coefficients `A_n` and inverse logarithmic coefficients
//! `Gamma_n(F)`, where `F = f^{-1}` and `log(F(w)/w) = 2 sum Gamma_n w^n`.
//!
//! Two independent routes are provided: series reversion followed by a
//! logarithm, and the identity `2n Gamma_n(F) = [z^n] (z/f(z))^n`, which
//! never forms `F`.
//!
//! Both routes lift the input coefficients to complex double-double, run
//! their recurrences there and round once at the end. Near the Koebe function
//! `|Gamma_12|` is about `1e5`, and plain `f64` recurrences lose several
//! digits to cancellation at that size.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::kernel::{self, lift, lower, Dd, Scalar};
use crate::series::{revert, AnalyticSeries, Series, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaSource {
    Reversion,
    BnIdentity,
    ClosedForm,
}

/// `Gamma_1..Gamma_N` of the inverse function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaVector {
    /// `gammas[n - 1] = Gamma_n`.
    pub gammas: Vec<C64>,
    pub source: GammaSource,
    /// Coefficients of `F` when the reversion route produced the vector.
    pub inverse_coeffs: Option<AnalyticSeries>,
}

impl GammaVector {
    pub fn n_max(&self) -> usize {
        self.gammas.len()
    }

    /// `Gamma_n`, `n >= 1`.
    pub fn gamma(&self, n: usize) -> C64 {
        assert!(n >= 1 && n <= self.gammas.len(), "Gamma_{n} not computed");
        self.gammas[n - 1]
    }

    pub fn abs(&self) -> Vec<f64> {
        self.gammas.iter().map(|g| g.norm()).collect()
    }

    /// Largest entry-wise `|self - other|`.
    pub fn max_abs_diff(&self, other: &GammaVector) -> f64 {
        assert_eq!(self.gammas.len(), other.gammas.len());
        self.gammas
            .iter()
            .zip(&other.gammas)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn check_input(f: &AnalyticSeries, n_max: usize) {
    assert!(n_max >= 1, "n_max must be at least 1");
    assert!(
        f.order() > n_max,
        "Gamma_{n_max} needs f to order {}, got {}",
        n_max + 1,
        f.order()
    );
}

/// The inverse series `F = f^{-1}` to order `order`; `A_n = F.a(n)`.
pub fn inverse_coeffs(f: &AnalyticSeries, order: usize) -> AnalyticSeries {
    revert(f, order)
}

/// `(A_2, A_3, A_4)` from `(a_2, a_3, a_4)` in closed form.
pub fn inverse_coeffs_closed_form(a2: C64, a3: C64, a4: C64) -> [C64; 3] {
    [
        -a2,
        -a3 + 2.0 * a2 * a2,
        -a4 + 5.0 * a2 * a3 - 5.0 * a2 * a2 * a2,
    ]
}

/// `(Gamma_1, Gamma_2, Gamma_3)` from `(A_2, A_3, A_4)`.
pub fn gamma123_from_inverse(a2: C64, a3: C64, a4: C64) -> [C64; 3] {
    [
        a2 / 2.0,
        (a3 - a2 * a2 / 2.0) / 2.0,
        (a4 - a2 * a3 + a2 * a2 * a2 / 3.0) / 2.0,
    ]
}

/// `Gamma_n = [w^n] log(F(w)/w) / 2` with `F` obtained by reversion.
/// `f` must be known to order `n_max + 1`.
pub fn gamma_via_reversion(f: &AnalyticSeries, n_max: usize) -> GammaVector {
    check_input(f, n_max);
    let a: Vec<Dd> = lift(&f.coeffs()[..=n_max + 1]);
    let inv = kernel::revert(&a, n_max + 1);
    let mut inv_over_w = inv[1..].to_vec();
    inv_over_w[0] = Dd::from_usize(1);
    let log = kernel::ln(&inv_over_w, n_max);
    let half = Dd::from_usize(2);
    let mut inv = lower(&inv);
    inv[1] = C64::new(1.0, 0.0);
    GammaVector {
        gammas: lower(&log[1..].iter().map(|&c| c / half).collect::<Vec<_>>()),
        source: GammaSource::Reversion,
        inverse_coeffs: Some(
            AnalyticSeries::new(Series::from_coeffs(inv).expect("nonempty"))
                .expect("reversion keeps the normalization"),
        ),
    }
}

/// `Gamma_n = b_n(n, f) / (2n)`, `b_n(n, f) = [z^n] (z/f)^n`. The powers
/// `(z/f)^n` are built by repeated multiplication. `f` must be known to order
/// `n_max + 1`.
pub fn gamma_via_bn(f: &AnalyticSeries, n_max: usize) -> GammaVector {
    check_input(f, n_max);
    let f_over_z: Vec<Dd> = lift(&f.coeffs()[1..=n_max + 1]);
    let q = kernel::recip(&f_over_z, n_max);
    let mut power = q.clone();
    let mut gammas = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if n > 1 {
            power = kernel::mul(&power, &q, n_max);
        }
        gammas.push(power[n] / Dd::from_usize(2 * n));
    }
    GammaVector {
        gammas: lower(&gammas),
        source: GammaSource::BnIdentity,
        inverse_coeffs: None,
    }
}

/// Largest `|Gamma_n^{rev} - Gamma_n^{bn}|` over `n <= n_max`.
pub fn path_discrepancy(f: &AnalyticSeries, n_max: usize) -> f64 {
    gamma_via_reversion(f, n_max).max_abs_diff(&gamma_via_bn(f, n_max))
}

/// `(Gamma_1, Gamma_2)` for `f ∈ U(lambda)` with `f''(0) = 2 a_2` and
/// `omega(0) = a`: `b_1(1,f) = -a_2`, `b_2(2,f) = a_2^2 + 2 lambda a`.
pub fn gamma12_u(a2: C64, a: C64, lambda: f64) -> (C64, C64) {
    assert!(a.norm() <= 1.0 + 1e-12, "|a| = {} exceeds 1", a.norm());
    (-a2 / 2.0, (a2 * a2 + 2.0 * lambda * a) / 4.0)
}

/// `(Gamma_1, Gamma_2, Gamma_3)` for the member of `F(alpha)` whose Schwarz
/// function starts `c_1 z + c_2 z^2 + c_3 z^3`.
pub fn gamma123_f_alpha(c1: C64, c2: C64, c3: C64, alpha: f64) -> [C64; 3] {
    let s = 1.0 - alpha;
    let mu = 3.0 - 5.0 * alpha;
    let upsilon = (3.0 * alpha - 2.0) * (2.0 * alpha - 1.0);
    [
        -s * c1 / 2.0,
        s / 3.0 * (-2.0 * c2 + mu * c1 * c1) / 4.0,
        s / 2.0 * (-c3 + mu * c1 * c2 - upsilon * c1 * c1 * c1) / 6.0,
    ]
}

/// Packs closed-form values into a [`GammaVector`].
pub fn closed_form_vector(gammas: &[C64]) -> GammaVector {
    GammaVector {
        gammas: gammas.to_vec(),
        source: GammaSource::ClosedForm,
        inverse_coeffs: None,
    }
}

/// `e^{i n theta}`, the factor picked up by `Gamma_n` under
/// `f(z) -> e^{-i theta} f(e^{i theta} z)`.
pub fn rotation_factor(n: usize, theta: f64) -> C64 {
    Complex64::from_polar(1.0, n as f64 * theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{half_plane_map, k_ab_n, koebe};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn binom(n: u64, k: u64) -> f64 {
        (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
    }

    #[test]
    fn koebe_inverse_coeffs() {
        let inv = inverse_coeffs(&koebe(0.0, 10), 10);
        assert_eq!([inv.a(2), inv.a(3), inv.a(4)], [c(-2.0), c(5.0), c(-14.0)]);
        for n in 2..=10u64 {
            let lowner = binom(2 * n, n) / (n + 1) as f64;
            assert!((inv.a(n as usize).norm() - lowner).abs() <= 1e-9 * lowner);
        }
    }

    #[test]
    fn identity_has_zero_coefficients() {
        let id = AnalyticSeries::identity(9);
        let inv = inverse_coeffs(&id, 9);
        assert!(inv.coeffs()[2..].iter().all(|a| a.norm() == 0.0));
        assert!(gamma_via_reversion(&id, 8)
            .gammas
            .iter()
            .all(|g| g.norm() == 0.0));
        assert!(gamma_via_bn(&id, 8).gammas.iter().all(|g| g.norm() == 0.0));
    }

    #[test]
    fn closed_form_inverse_coeffs() {
        let a = [
            c(0.0),
            c(1.0),
            C64::new(0.3, -0.7),
            C64::new(-1.1, 0.2),
            C64::new(0.4, 0.9),
        ];
        let f = AnalyticSeries::new(crate::series::Series::from_poly(&a, 4)).unwrap();
        let inv = inverse_coeffs(&f, 4);
        let closed = inverse_coeffs_closed_form(a[2], a[3], a[4]);
        for (k, v) in closed.iter().enumerate() {
            assert!((inv.a(k + 2) - v).norm() < 1e-12);
        }
    }

    #[test]
    fn half_plane_gammas() {
        let f = half_plane_map(13);
        for g in [gamma_via_reversion(&f, 12), gamma_via_bn(&f, 12)] {
            for n in 1..=12 {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!((g.gamma(n) - c(sign / (2 * n) as f64)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn koebe_gammas() {
        let f = koebe(0.0, 13);
        let rev = gamma_via_reversion(&f, 12);
        let bn = gamma_via_bn(&f, 12);
        for n in 1..=12u64 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let expected = c(sign * binom(2 * n, n) / (2 * n) as f64);
            assert!((bn.gamma(n as usize) - expected).norm() <= 1e-12 * expected.norm());
            assert!((rev.gamma(n as usize) - expected).norm() <= 1e-12 * expected.norm());
        }
        assert!((bn.gamma(5).norm() - 25.2).abs() < 1e-12);
    }

    #[test]
    fn k_ab_n_top_gamma() {
        let (a, b) = (0.4, -0.3);
        for n in 1..=6 {
            let f = k_ab_n(a, b, n, n + 1).unwrap();
            let g = gamma_via_bn(&f, n);
            assert!((g.gamma(n) - c(-(a - b) / (2 * n) as f64)).norm() < 1e-14);
        }
    }

    #[test]
    fn inverse_gamma_identities() {
        let a = [
            c(0.0),
            c(1.0),
            C64::new(-0.5, 0.25),
            C64::new(0.8, 0.1),
            C64::new(-0.3, -0.6),
        ];
        let f = AnalyticSeries::new(crate::series::Series::from_poly(&a, 6)).unwrap();
        let rev = gamma_via_reversion(&f, 3);
        let inv = rev.inverse_coeffs.as_ref().unwrap();
        let closed = gamma123_from_inverse(inv.a(2), inv.a(3), inv.a(4));
        for (k, v) in closed.iter().enumerate() {
            assert!((rev.gamma(k + 1) - v).norm() < 1e-12);
        }
        // 2 Gamma_1 = -a_2, 4 Gamma_2 = -2 a_3 + 3 a_2^2, 6 Gamma_3 = -3 a_4 + 12 a_2 a_3 - 10 a_2^3
        assert!((2.0 * rev.gamma(1) + a[2]).norm() < 1e-14);
        assert!((4.0 * rev.gamma(2) - (-2.0 * a[3] + 3.0 * a[2] * a[2])).norm() < 1e-13);
        let g3 = -3.0 * a[4] + 12.0 * a[2] * a[3] - 10.0 * a[2] * a[2] * a[2];
        assert!((6.0 * rev.gamma(3) - g3).norm() < 1e-13);
    }

    #[test]
    fn rotation_covariance() {
        let f = koebe(0.0, 9).rotate(0.0);
        let theta = 0.83;
        let g = gamma_via_bn(&f, 8);
        let gr = gamma_via_bn(&f.rotate(theta), 8);
        for n in 1..=8 {
            let expected = g.gamma(n) * rotation_factor(n, theta);
            assert!((gr.gamma(n) - expected).norm() <= 1e-12 * expected.norm().max(1.0));
        }
    }

    #[test]
    fn gamma12_u_examples() {
        assert_eq!(gamma12_u(c(0.0), c(0.0), 0.5), (c(0.0), c(0.0)));
        let (g1, g2) = gamma12_u(c(1.5), c(0.2), 0.5);
        assert_eq!(g1, c(-0.75));
        assert!((g2 - c((2.25 + 0.2) / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn gamma123_f_alpha_examples() {
        let g = gamma123_f_alpha(c(1.0), c(0.0), c(0.0), 0.0);
        assert!((g[0] - c(-0.5)).norm() < 1e-15);
        assert!((g[1] - c(0.25)).norm() < 1e-15);
        assert!((g[2] - c(-1.0 / 6.0)).norm() < 1e-15);
        assert_eq!(gamma123_f_alpha(c(0.0), c(0.0), c(0.0), 0.3), [c(0.0); 3]);
    }

    #[test]
    #[should_panic(expected = "needs f to order")]
    fn short_input_is_rejected() {
        gamma_via_bn(&koebe(0.0, 5), 5);
    }
}
