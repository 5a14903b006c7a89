//! Sharp bounds on `|Gamma_n(F)|` for each class, with the clause that
//! produced each value.
//!
//! Piecewise bounds are indexed by the semi-closed intervals
//! `I_k(n) = [k/n, (k+1)/n)`, `k = 0..n-1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::families::{ClassSpec, FAlphaVariant};

/// Tolerance used to decide whether `n (1 - delta)` is an integer.
pub const INTEGRALITY_TOL: f64 = 1e-12;

/// Left end of the `alpha` range on which `(5 alpha - 3, (3 alpha - 2)(2 alpha - 1))`
/// lies in `D_2`. Used verbatim.
pub const D2_ALPHA_MIN: f64 = 0.21605468;

pub const STAR_ORDER_PRODUCT_LIMIT_NOTE: &str =
    "product upper limit printed as n-k+1 for the starlike-order case; n-k-1 used (the A=1-2beta, B=-1 case of the Janowski middle clause)";
pub const SPIRAL_TOP_CLAUSE_NOTE: &str =
    "top clause printed as (1-alpha)cos(beta)/n; (1-beta)cos(alpha)/n used (attained by the named extremal)";

/// A function that attains a bound clause.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "extremal", rename_all = "kebab-case")]
pub enum Extremal {
    Koebe,
    /// `k_{A,B;m}`
    KAb {
        m: usize,
    },
    /// `f_{alpha,beta;m}`
    Spiral {
        m: usize,
    },
    /// `f_{c,m}` with `f' = (1 - z^m)^{c/m}`
    Gc {
        m: usize,
    },
    /// `U(lambda)` extremal with `omega(0) = a`
    ULambda {
        a: f64,
    },
    FAlpha {
        variant: FAlphaVariant,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub n: usize,
    /// `None` where no bound is available for these parameters.
    pub value: Option<f64>,
    pub branch: String,
    /// Extremal function named for this clause, if any.
    pub extremal: Option<Extremal>,
    /// Set when the clause corrects a misprinted formula.
    pub deviation: Option<String>,
}

impl BoundResult {
    fn new(n: usize, value: f64, branch: impl Into<String>) -> Self {
        BoundResult {
            n,
            value: Some(value.abs()),
            branch: branch.into(),
            extremal: None,
            deviation: None,
        }
    }

    fn not_applicable(n: usize, branch: impl Into<String>) -> Self {
        BoundResult {
            n,
            value: None,
            branch: branch.into(),
            extremal: None,
            deviation: None,
        }
    }

    fn with_extremal(mut self, e: Extremal) -> Self {
        self.extremal = Some(e);
        self
    }

    fn with_deviation(mut self, note: &str) -> Self {
        self.deviation = Some(note.to_string());
        self
    }

    pub fn applicable(&self) -> bool {
        self.value.is_some()
    }
}

/// `k` with `x ∈ I_k(n)`, clamped to `0..=n-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalIndex {
    pub k: usize,
    /// `n x` is an integer within [`INTEGRALITY_TOL`], i.e. `x = k/n`.
    pub at_left_end: bool,
}

impl IntervalIndex {
    pub fn locate(x: f64, n: usize) -> Self {
        let scaled = n as f64 * x;
        let nearest = scaled.round();
        let (k, at_left_end) =
            if (scaled - nearest).abs() <= INTEGRALITY_TOL * scaled.abs().max(1.0) {
                (nearest, true)
            } else {
                (scaled.floor(), false)
            };
        let k = (k.max(0.0) as usize).min(n - 1);
        IntervalIndex { k, at_left_end }
    }
}

/// `prod_{j=0}^{terms-1} (n(A-B) + B j) / (1 + j)`.
fn janowski_product(n: usize, a: f64, b: f64, terms: usize) -> f64 {
    let base = n as f64 * (a - b);
    (0..terms).fold(1.0, |acc, j| acc * (base + b * j as f64) / (1.0 + j as f64))
}

/// `C(2n, n) / (2n)`.
pub fn bound_class_s(n: usize) -> BoundResult {
    assert!(n >= 1);
    let value = janowski_product(n, 1.0, -1.0, n) / (2 * n) as f64;
    BoundResult::new(n, value, "class-s").with_extremal(Extremal::Koebe)
}

/// Janowski class `S*(A, B)`, `-1 <= B < A <= 1`.
pub fn bound_star_ab(n: usize, a: f64, b: f64) -> BoundResult {
    assert!(n >= 1);
    assert!(
        (-1.0..1.0).contains(&b) && a > b && a <= 1.0,
        "(A, B) = ({a}, {b}) outside -1 <= B < A <= 1"
    );
    let delta = (1.0 - a) / (1.0 - b);
    let loc = IntervalIndex::locate(delta, n);
    let nf = n as f64;
    let middle = |k: usize| (n - k) as f64 / (2.0 * nf * nf) * janowski_product(n, a, b, n - k);

    if loc.k == 0 {
        let value = janowski_product(n, a, b, n) / (2.0 * nf);
        BoundResult::new(n, value, "star-ab:first[k=0]").with_extremal(Extremal::KAb { m: 1 })
    } else if loc.k == n - 1 {
        BoundResult::new(
            n,
            (a - b) / (2.0 * nf),
            format!("star-ab:last[k={}]", n - 1),
        )
        .with_extremal(Extremal::KAb { m: n })
    } else if loc.at_left_end && loc.k == 1 {
        // delta = 1/n with n(1 - delta) integral
        let value = janowski_product(n, a, b, n) / (2.0 * nf);
        BoundResult::new(n, value, "star-ab:integral-first[k=1]")
            .with_extremal(Extremal::KAb { m: 1 })
    } else if loc.at_left_end {
        BoundResult::new(
            n,
            middle(loc.k - 1),
            format!("star-ab:integral-middle[k={}]", loc.k),
        )
    } else {
        BoundResult::new(n, middle(loc.k), format!("star-ab:middle[k={}]", loc.k))
    }
}

/// Starlike functions of order `beta`: `S*(1 - 2 beta, -1)`.
pub fn bound_star_order(n: usize, beta: f64) -> BoundResult {
    assert!((0.0..1.0).contains(&beta), "beta = {beta} outside [0, 1)");
    let mut r = bound_star_ab(n, 1.0 - 2.0 * beta, -1.0);
    if r.branch.contains("middle[") {
        r = r.with_deviation(STAR_ORDER_PRODUCT_LIMIT_NOTE);
    }
    r
}

/// Spirallike functions of order `beta`, `|alpha| < pi/2`, `0 <= beta < 1`.
pub fn bound_spiral(n: usize, alpha: f64, beta: f64) -> BoundResult {
    assert!(n >= 1);
    assert!(alpha.abs() < std::f64::consts::FRAC_PI_2 && (0.0..1.0).contains(&beta));
    let nf = n as f64;
    let w = Complex64::from_polar(2.0 * nf * (1.0 - beta) * alpha.cos(), -alpha);
    let product = |terms: usize| {
        (0..terms).fold(1.0, |acc, j| acc * (w - j as f64).norm() / (1.0 + j as f64))
    };
    let loc = IntervalIndex::locate(beta, n);
    if loc.k == 0 {
        BoundResult::new(n, product(n) / (2.0 * nf), "spiral:first[k=0]")
            .with_extremal(Extremal::Spiral { m: 1 })
    } else if loc.k == n - 1 {
        BoundResult::new(
            n,
            (1.0 - beta) * alpha.cos() / nf,
            format!("spiral:top[k={}]", n - 1),
        )
        .with_extremal(Extremal::Spiral { m: n })
        .with_deviation(SPIRAL_TOP_CLAUSE_NOTE)
    } else {
        let k = loc.k;
        let value = (n - k) as f64 / (2.0 * nf * nf) * product(n - k);
        BoundResult::new(n, value, format!("spiral:middle[k={k}]"))
    }
}

/// Bound on `|b_m(lambda, f)|` for `f ∈ G(c)`, where
/// `(z/f)^lambda = 1 + sum b_m z^m`.
pub fn bound_bn_gc(m: usize, lambda: f64, c: f64) -> f64 {
    assert!(m >= 1 && lambda > 0.0 && c > 0.0 && c <= 1.0);
    let mf = m as f64;
    let product = |terms: usize| {
        (0..terms).fold(1.0, |acc, j| {
            acc * (lambda * c + j as f64) / (1.0 + j as f64)
        })
    };
    if lambda <= 1.0 {
        return lambda * c / (mf * (1.0 + c));
    }
    let fl = lambda.floor() as usize;
    if m <= fl + 1 {
        product(m) / (1.0 + c).powi(m as i32)
    } else {
        fl as f64 / (mf * (1.0 + c).powi(fl as i32)) * product(fl)
    }
}

/// `G(c)`: `prod_{j<n} (nc + j)/(1 + j) / (2n (1+c)^n)`, sharp for `f' = (1-z)^c`.
pub fn bound_gc(n: usize, c: f64) -> BoundResult {
    assert!(n >= 1 && c > 0.0 && c <= 1.0);
    let value = bound_bn_gc(n, n as f64, c) / (2 * n) as f64;
    BoundResult::new(n, value, "gc").with_extremal(Extremal::Gc { m: 1 })
}

/// `v(x) = ∫_0^1 (x + t)/(1 + x t) dt = 1/x - (1 - x^2)/x^2 log(1 + x)`.
pub fn v_of_x(x: f64) -> f64 {
    assert!((0.0..=1.0).contains(&x), "x = {x} outside [0, 1]");
    if x < 0.1 {
        // 1/2 + sum_{k>=1} (-1)^{k+1} 2 x^k / (k (k + 2))
        let mut sum = 0.5;
        let mut power = 1.0;
        for k in 1..40 {
            power *= x;
            let term = 2.0 * power / (k * (k + 2)) as f64;
            sum += if k % 2 == 1 { term } else { -term };
            if term < 1e-18 {
                break;
            }
        }
        sum
    } else {
        1.0 / x - (1.0 - x * x) / (x * x) * x.ln_1p()
    }
}

/// `U(lambda)`, first coefficient: `(1 + lambda v(|a|)) / 2`.
pub fn bound_u_gamma1(lambda: f64, abs_a: f64) -> BoundResult {
    check_u(lambda, abs_a);
    BoundResult::new(1, (1.0 + lambda * v_of_x(abs_a)) / 2.0, "u-lambda:gamma1")
        .with_extremal(Extremal::ULambda { a: abs_a })
}

/// `U(lambda)`, second coefficient: `((1 + lambda v(|a|))^2 + 2 lambda |a|) / 4`.
pub fn bound_u_gamma2(lambda: f64, abs_a: f64) -> BoundResult {
    check_u(lambda, abs_a);
    let s = 1.0 + lambda * v_of_x(abs_a);
    BoundResult::new(2, (s * s + 2.0 * lambda * abs_a) / 4.0, "u-lambda:gamma2")
        .with_extremal(Extremal::ULambda { a: abs_a })
}

fn check_u(lambda: f64, abs_a: f64) {
    assert!(
        lambda > 0.0 && lambda <= 1.0,
        "lambda = {lambda} outside (0, 1]"
    );
    assert!((0.0..=1.0).contains(&abs_a), "|a| = {abs_a} outside [0, 1]");
}

pub fn bound_f_gamma1(alpha: f64) -> BoundResult {
    check_f(alpha);
    BoundResult::new(1, (1.0 - alpha) / 2.0, "f-alpha:gamma1").with_extremal(Extremal::FAlpha {
        variant: FAlphaVariant::Pow1,
    })
}

pub fn bound_f_gamma2(alpha: f64) -> BoundResult {
    check_f(alpha);
    if alpha <= 0.2 {
        BoundResult::new(
            2,
            (1.0 - alpha) * (3.0 - 5.0 * alpha) / 12.0,
            "f-alpha:gamma2(a)",
        )
        .with_extremal(Extremal::FAlpha {
            variant: FAlphaVariant::Pow1,
        })
    } else {
        BoundResult::new(2, (1.0 - alpha) / 6.0, "f-alpha:gamma2(b)").with_extremal(
            Extremal::FAlpha {
                variant: FAlphaVariant::Pow2,
            },
        )
    }
}

/// Defined on `[D2_ALPHA_MIN, 7/10]` and `[-1/2, 7/47]`; not applicable in
/// the gaps.
pub fn bound_f_gamma3(alpha: f64) -> BoundResult {
    check_f(alpha);
    if (D2_ALPHA_MIN..=0.7).contains(&alpha) {
        BoundResult::new(3, (1.0 - alpha) / 12.0, "f-alpha:gamma3(D1|D2)").with_extremal(
            Extremal::FAlpha {
                variant: FAlphaVariant::Pow3,
            },
        )
    } else if (-0.5..=7.0 / 47.0).contains(&alpha) {
        let value = (1.0 - alpha) * (3.0 * alpha - 2.0) * (2.0 * alpha - 1.0) / 12.0;
        BoundResult::new(3, value, "f-alpha:gamma3(D6|D7)").with_extremal(Extremal::FAlpha {
            variant: FAlphaVariant::Pow1,
        })
    } else {
        BoundResult::not_applicable(3, "f-alpha:gamma3(gap)")
    }
}

fn check_f(alpha: f64) {
    assert!(
        (-0.5..1.0).contains(&alpha),
        "alpha = {alpha} outside [-1/2, 1)"
    );
}

/// The bound on `|Gamma_n|` for a class. For `U(lambda)` the bound depends on
/// `|omega(0)|`, passed as `abs_a`; other classes ignore it.
pub fn bound_for(spec: &ClassSpec, n: usize, abs_a: Option<f64>) -> BoundResult {
    match *spec {
        ClassSpec::FullS => bound_class_s(n),
        ClassSpec::StarAb { a, b, .. } => bound_star_ab(n, a, b),
        ClassSpec::Spiral { alpha, beta } => bound_spiral(n, alpha, beta),
        ClassSpec::Gc { c } => bound_gc(n, c),
        ClassSpec::ULambda { lambda } => {
            let abs_a = abs_a.unwrap_or(1.0);
            match n {
                1 => bound_u_gamma1(lambda, abs_a),
                2 => bound_u_gamma2(lambda, abs_a),
                _ => BoundResult::not_applicable(n, "u-lambda:open"),
            }
        }
        ClassSpec::FAlpha { alpha } => match n {
            1 => bound_f_gamma1(alpha),
            2 => bound_f_gamma2(alpha),
            3 => bound_f_gamma3(alpha),
            _ => BoundResult::not_applicable(n, "f-alpha:open"),
        },
    }
}

/// Regions of the `(mu, upsilon)` plane on which
/// `max |c_3 + mu c_1 c_2 + upsilon c_1^3|` over Schwarz functions is known in
/// closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PsRegion {
    D1,
    D2,
    D6,
    D7,
    Other,
}

impl PsRegion {
    pub fn contains(self, mu: f64, upsilon: f64) -> bool {
        let m = mu.abs();
        match self {
            PsRegion::D1 => m <= 0.5 && (-1.0..=1.0).contains(&upsilon),
            PsRegion::D2 => {
                let s = m + 1.0;
                (0.5..=2.0).contains(&m) && 4.0 / 27.0 * s * s * s - s <= upsilon && upsilon <= 1.0
            }
            PsRegion::D6 => (2.0..=4.0).contains(&m) && upsilon >= (mu * mu + 8.0) / 12.0,
            PsRegion::D7 => m >= 4.0 && upsilon >= 2.0 / 3.0 * (m - 1.0),
            PsRegion::Other => !PsRegion::NAMED.iter().any(|r| r.contains(mu, upsilon)),
        }
    }

    pub const NAMED: [PsRegion; 4] = [PsRegion::D1, PsRegion::D2, PsRegion::D6, PsRegion::D7];
}

/// First named region containing `(mu, upsilon)`, in the order D1, D2, D6, D7.
pub fn ps_region(mu: f64, upsilon: f64) -> PsRegion {
    PsRegion::NAMED
        .into_iter()
        .find(|r| r.contains(mu, upsilon))
        .unwrap_or(PsRegion::Other)
}

/// All named regions containing `(mu, upsilon)`.
pub fn ps_regions(mu: f64, upsilon: f64) -> Vec<PsRegion> {
    PsRegion::NAMED
        .into_iter()
        .filter(|r| r.contains(mu, upsilon))
        .collect()
}

/// Sharp bound on `|c_3 + mu c_1 c_2 + upsilon c_1^3|`: 1 on `D1 ∪ D2`,
/// `|upsilon|` on `D6 ∪ D7`, unknown elsewhere.
pub fn ps_psi_bound(mu: f64, upsilon: f64) -> Option<f64> {
    match ps_region(mu, upsilon) {
        PsRegion::D1 | PsRegion::D2 => Some(1.0),
        PsRegion::D6 | PsRegion::D7 => Some(upsilon.abs()),
        PsRegion::Other => None,
    }
}

/// `(mu, upsilon) = (5 alpha - 3, (3 alpha - 2)(2 alpha - 1))`.
pub fn f_alpha_ps_point(alpha: f64) -> (f64, f64) {
    (5.0 * alpha - 3.0, (3.0 * alpha - 2.0) * (2.0 * alpha - 1.0))
}

/// `alpha` ranges on which the region table asserts membership.
pub fn d1234_claims() -> [(PsRegion, f64, f64); 4] {
    [
        (PsRegion::D1, 0.5, 0.7),
        (PsRegion::D2, D2_ALPHA_MIN, 0.5),
        (PsRegion::D6, -0.2, 7.0 / 47.0),
        (PsRegion::D7, -0.5, -0.2),
    ]
}

/// Distance in `alpha` within which a failed membership is treated as a
/// boundary effect.
pub const D1234_BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum D1234Status {
    Match,
    /// Not in the claimed region, but within the boundary tolerance of an
    /// endpoint of the claimed range.
    Boundary,
    Mismatch,
    /// `alpha` is outside every claimed range.
    Unclaimed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct D1234Row {
    pub alpha: f64,
    pub mu: f64,
    pub upsilon: f64,
    pub claimed: Vec<PsRegion>,
    pub actual: Vec<PsRegion>,
    pub status: D1234Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct D1234Report {
    pub rows: Vec<D1234Row>,
    pub matches: usize,
    pub boundary: usize,
    pub mismatches: usize,
}

/// Checks the region table on each `alpha` of the grid.
pub fn verify_d1234(alpha_grid: &[f64]) -> D1234Report {
    let claims = d1234_claims();
    let rows: Vec<D1234Row> = alpha_grid
        .iter()
        .map(|&alpha| {
            let (mu, upsilon) = f_alpha_ps_point(alpha);
            let hits: Vec<_> = claims
                .iter()
                .filter(|(_, lo, hi)| (*lo..=*hi).contains(&alpha))
                .collect();
            let claimed: Vec<PsRegion> = hits.iter().map(|(r, _, _)| *r).collect();
            let actual = ps_regions(mu, upsilon);
            let status = if claimed.is_empty() {
                D1234Status::Unclaimed
            } else if claimed.iter().any(|r| actual.contains(r)) {
                D1234Status::Match
            } else if hits.iter().any(|(_, lo, hi)| {
                (alpha - lo).abs() <= D1234_BOUNDARY_TOL || (alpha - hi).abs() <= D1234_BOUNDARY_TOL
            }) {
                D1234Status::Boundary
            } else {
                D1234Status::Mismatch
            };
            D1234Row {
                alpha,
                mu,
                upsilon,
                claimed,
                actual,
                status,
            }
        })
        .collect();
    let count = |s: D1234Status| rows.iter().filter(|r| r.status == s).count();
    D1234Report {
        matches: count(D1234Status::Match),
        boundary: count(D1234Status::Boundary),
        mismatches: count(D1234Status::Mismatch),
        rows,
    }
}
