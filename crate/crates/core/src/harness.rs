//! Verification campaigns over sampled class members and extremals.
//!
//! Every campaign is a deterministic function of its configuration: sample
//! `i` draws from its own generator stream, samples are evaluated on a
//! worker pool, and reductions run serially over results in sample order.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{bound_for, BoundResult, Extremal};
use crate::families::{
    f_alpha_extremal, gc_extremal, k_ab_n, koebe, sample_member, spiral_extremal,
    u_lambda_extremal, ClassSpec, FamilyError, Sample,
};
use crate::invlog::{gamma_via_bn, gamma_via_reversion, GammaVector};
use crate::series::AnalyticSeries;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "INVLOG_THREADS";

/// Guard coefficients carried beyond the largest requested `n`.
pub const DEFAULT_GUARD: usize = 8;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("invalid campaign: {0}")]
    Config(String),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Runs `f` on a pool sized by [`THREADS_ENV`] (all cores when unset).
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, HarnessError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

fn check_common(n_max: usize, order: usize, tol: f64) -> Result<(), HarnessError> {
    if n_max == 0 {
        return Err(HarnessError::Config("n_max must be at least 1".into()));
    }
    if order <= n_max {
        return Err(HarnessError::Config(format!(
            "order {order} must exceed n_max {n_max}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(HarnessError::Config(format!(
            "tolerance {tol} must be positive"
        )));
    }
    Ok(())
}

/// Tolerance actually applied against a bound: `tol * max(1, bound)`.
pub fn scaled_tol(tol: f64, bound: f64) -> f64 {
    tol * bound.max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    Ok,
    /// Excess in `(t, 10 t]` with `t` the scaled tolerance.
    Numerical,
    /// Excess above `10 t`.
    Mathematical,
    /// No bound for this `n`.
    NotApplicable,
}

impl Flag {
    pub fn classify(abs_gamma: f64, bound: f64, tol: f64) -> Flag {
        let t = scaled_tol(tol, bound);
        let excess = abs_gamma - bound;
        if excess <= t {
            Flag::Ok
        } else if excess <= 10.0 * t {
            Flag::Numerical
        } else {
            Flag::Mathematical
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Ok => "ok",
            Flag::Numerical => "numerical",
            Flag::Mathematical => "mathematical",
            Flag::NotApplicable => "n/a",
        }
    }
}

/// The named extremal as a series of the given order.
pub fn extremal_series(
    spec: &ClassSpec,
    extremal: &Extremal,
    order: usize,
) -> Result<AnalyticSeries, FamilyError> {
    let wrong = || FamilyError::Unsupported("extremal does not belong to this class");
    match (*extremal, *spec) {
        (Extremal::Koebe, _) => Ok(koebe(0.0, order)),
        (Extremal::KAb { m }, ClassSpec::StarAb { a, b, .. }) => k_ab_n(a, b, m, order),
        (Extremal::KAb { m }, ClassSpec::FullS) => k_ab_n(1.0, -1.0, m, order),
        (Extremal::Spiral { m }, ClassSpec::Spiral { alpha, beta }) => {
            spiral_extremal(alpha, beta, m, order)
        }
        (Extremal::Gc { m }, ClassSpec::Gc { c }) => gc_extremal(c, m, order),
        (Extremal::ULambda { a }, ClassSpec::ULambda { lambda }) => {
            u_lambda_extremal(lambda, a, order)
        }
        (Extremal::FAlpha { variant }, ClassSpec::FAlpha { alpha }) => {
            f_alpha_extremal(alpha, variant, order)
        }
        _ => Err(wrong()),
    }
}

/// `|Gamma_n|` of the extremal named by `bound`, if any.
fn extremal_abs_gamma(spec: &ClassSpec, bound: &BoundResult) -> Result<Option<f64>, FamilyError> {
    let Some(extremal) = bound.extremal else {
        return Ok(None);
    };
    let f = extremal_series(spec, &extremal, bound.n + 1)?;
    Ok(Some(gamma_via_bn(&f, bound.n).gamma(bound.n).norm()))
}

// ---------------------------------------------------------------------------
// bound verification

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub spec: ClassSpec,
    pub n_max: usize,
    pub samples: u64,
    pub seed: u64,
    pub tol: f64,
    /// Truncation order of sampled members; `n_max + DEFAULT_GUARD` if unset.
    pub order: Option<usize>,
}

impl CampaignConfig {
    pub fn new(spec: ClassSpec, n_max: usize, samples: u64, seed: u64) -> Self {
        CampaignConfig {
            spec,
            n_max,
            samples,
            seed,
            tol: DEFAULT_TOL,
            order: None,
        }
    }

    pub fn order(&self) -> usize {
        self.order.unwrap_or(self.n_max + DEFAULT_GUARD)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sample_id: u64,
    pub n: usize,
    pub abs_gamma: f64,
    pub bound: Option<f64>,
    pub branch: String,
    pub margin: Option<f64>,
    pub flag: Flag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub sample_id: u64,
    pub n: usize,
    pub excess: f64,
    pub flag: Flag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub n: usize,
    pub empirical_max_abs_gamma: f64,
    /// The bound at the sample with the smallest margin (constant in the
    /// sample except for `U(lambda)`).
    pub bound: Option<f64>,
    /// Smallest `bound - |Gamma_n|` over the samples.
    pub margin: Option<f64>,
    pub sharpness_gap: Option<f64>,
    pub branch: String,
    pub deviation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resample {
    pub sample_id: u64,
    pub rejected_draws: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub spec: ClassSpec,
    pub n_max: usize,
    pub order: usize,
    pub samples: u64,
    pub seed: u64,
    pub tolerance: f64,
    pub rows: Vec<VerifyRow>,
    pub violations: Vec<Violation>,
    pub resamples: Vec<Resample>,
    pub records: Vec<SampleRecord>,
}

impl VerifyReport {
    pub fn mathematical_violations(&self) -> usize {
        self.violations
            .iter()
            .filter(|v| v.flag == Flag::Mathematical)
            .count()
    }

    pub fn passed(&self) -> bool {
        self.mathematical_violations() == 0
    }
}

struct Evaluated {
    sample_id: u64,
    resamples: u32,
    rows: Vec<(f64, BoundResult)>,
}

fn evaluate_sample(cfg: &CampaignConfig, sample_id: u64) -> Result<Evaluated, FamilyError> {
    let sample = sample_member(&cfg.spec, cfg.seed, sample_id, cfg.order())?;
    let abs_a = sample.omega_origin_modulus();
    let Sample {
        member, resamples, ..
    } = sample;
    let gammas = gamma_via_bn(&member, cfg.n_max);
    let rows = (1..=cfg.n_max)
        .map(|n| (gammas.gamma(n).norm(), bound_for(&cfg.spec, n, abs_a)))
        .collect();
    Ok(Evaluated {
        sample_id,
        resamples,
        rows,
    })
}

/// Monte-Carlo check of `|Gamma_n(F)| <= bound` over sampled class members.
pub fn verify_bounds(cfg: &CampaignConfig) -> Result<VerifyReport, HarnessError> {
    cfg.spec.validate()?;
    check_common(cfg.n_max, cfg.order(), cfg.tol)?;
    let evaluated: Vec<Evaluated> = with_pool(|| {
        (0..cfg.samples)
            .into_par_iter()
            .map(|i| evaluate_sample(cfg, i))
            .collect::<Result<Vec<_>, _>>()
    })??;

    let mut records = Vec::with_capacity(evaluated.len() * cfg.n_max);
    let mut violations = Vec::new();
    let mut resamples = Vec::new();
    // per n: (max |Gamma|, argmin-margin bound result, min margin)
    let mut per_n: Vec<(f64, Option<(BoundResult, f64)>)> = vec![(0.0, None); cfg.n_max];
    for ev in &evaluated {
        if ev.resamples > 0 {
            resamples.push(Resample {
                sample_id: ev.sample_id,
                rejected_draws: ev.resamples,
            });
        }
        for (abs_gamma, bound) in &ev.rows {
            let n = bound.n;
            let slot = &mut per_n[n - 1];
            slot.0 = slot.0.max(*abs_gamma);
            let (margin, flag) = match bound.value {
                Some(b) => (Some(b - abs_gamma), Flag::classify(*abs_gamma, b, cfg.tol)),
                None => (None, Flag::NotApplicable),
            };
            if let Some(m) = margin {
                if slot.1.as_ref().is_none_or(|(_, best)| m < *best) {
                    slot.1 = Some((bound.clone(), m));
                }
            }
            if matches!(flag, Flag::Numerical | Flag::Mathematical) {
                violations.push(Violation {
                    sample_id: ev.sample_id,
                    n,
                    excess: abs_gamma - bound.value.unwrap_or(f64::INFINITY),
                    flag,
                });
            }
            records.push(SampleRecord {
                sample_id: ev.sample_id,
                n,
                abs_gamma: *abs_gamma,
                bound: bound.value,
                branch: bound.branch.clone(),
                margin,
                flag,
            });
        }
    }

    let mut rows = Vec::with_capacity(cfg.n_max);
    for (idx, (max_abs, best)) in per_n.into_iter().enumerate() {
        let n = idx + 1;
        let (bound, margin) = match best {
            Some((b, m)) => (b, Some(m)),
            None => (bound_for(&cfg.spec, n, None), None),
        };
        let sharpness_gap = match (bound.value, extremal_abs_gamma(&cfg.spec, &bound)?) {
            (Some(b), Some(e)) => Some(b - e),
            _ => None,
        };
        rows.push(VerifyRow {
            n,
            empirical_max_abs_gamma: max_abs,
            bound: if margin.is_some() { bound.value } else { None },
            margin,
            sharpness_gap,
            branch: bound.branch.clone(),
            deviation: bound.deviation.clone(),
        });
    }

    Ok(VerifyReport {
        spec: cfg.spec,
        n_max: cfg.n_max,
        order: cfg.order(),
        samples: cfg.samples,
        seed: cfg.seed,
        tolerance: cfg.tol,
        rows,
        violations,
        resamples,
        records,
    })
}

// ---------------------------------------------------------------------------
// sharpness

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessRow {
    pub n: usize,
    pub bound: Option<f64>,
    pub branch: String,
    pub deviation: Option<String>,
    pub extremal: Option<Extremal>,
    pub extremal_abs_gamma: Option<f64>,
    /// `bound - |Gamma_n(extremal)|`.
    pub gap: Option<f64>,
    /// Whether the clause names an extremal, so the gap is required to vanish.
    pub asserted: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub spec: ClassSpec,
    pub n_values: Vec<usize>,
    pub abs_a: Option<f64>,
    pub tolerance: f64,
    pub rows: Vec<SharpnessRow>,
}

impl SharpnessReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn max_asserted_gap(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.asserted)
            .filter_map(|r| r.gap)
            .map(f64::abs)
            .fold(0.0, f64::max)
    }
}

/// Compares each bound with `|Gamma_n|` of the extremal its clause names.
/// For `U(lambda)`, `abs_a` selects the extremal (`omega(0) = a`).
pub fn sharpness_check(
    spec: &ClassSpec,
    n_values: &[usize],
    abs_a: Option<f64>,
    tol: f64,
) -> Result<SharpnessReport, HarnessError> {
    spec.validate()?;
    if n_values.contains(&0) {
        return Err(HarnessError::Config("n must be at least 1".into()));
    }
    check_common(1, 2, tol)?;
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let bound = bound_for(spec, n, abs_a);
        let extremal_abs = extremal_abs_gamma(spec, &bound)?;
        let gap = match (bound.value, extremal_abs) {
            (Some(b), Some(e)) => Some(b - e),
            _ => None,
        };
        let asserted = gap.is_some();
        let pass = match (gap, bound.value) {
            (Some(g), Some(b)) => g.abs() <= scaled_tol(tol, b),
            _ => true,
        };
        rows.push(SharpnessRow {
            n,
            bound: bound.value,
            branch: bound.branch,
            deviation: bound.deviation,
            extremal: bound.extremal,
            extremal_abs_gamma: extremal_abs,
            gap,
            asserted,
            pass,
        });
    }
    Ok(SharpnessReport {
        spec: *spec,
        n_values: n_values.to_vec(),
        abs_a,
        tolerance: tol,
        rows,
    })
}

// ---------------------------------------------------------------------------
// path cross-check

/// One member of each sampled class, at the parameters with the largest
/// coefficients.
pub fn default_cross_check_classes() -> Vec<ClassSpec> {
    vec![
        ClassSpec::FullS,
        ClassSpec::spiral(0.7, 0.2).expect("in range"),
        ClassSpec::gc(1.0).expect("in range"),
        ClassSpec::u_lambda(1.0).expect("in range"),
        ClassSpec::f_alpha(-0.5).expect("in range"),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckRecord {
    pub sample_id: u64,
    pub class: String,
    pub n: usize,
    pub abs_gamma: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDiscrepancy {
    pub spec: ClassSpec,
    pub samples: u64,
    pub max_discrepancy: f64,
    pub max_abs_gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub classes: Vec<ClassDiscrepancy>,
    pub n_max: usize,
    pub order: usize,
    pub samples: u64,
    pub seed: u64,
    pub tolerance: f64,
    pub max_discrepancy: f64,
    /// `(sample_id, n)` of the largest discrepancy.
    pub worst: Option<(u64, usize)>,
    pub failures: usize,
    pub records: Vec<CrossCheckRecord>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Compares the reversion and `b_n` routes on `samples` members drawn
/// round-robin from `specs` (sample `i` belongs to `specs[i % len]`).
/// A sample fails when some `|Gamma_n^{rev} - Gamma_n^{bn}| > tol`.
pub fn cross_check(
    specs: &[ClassSpec],
    samples: u64,
    seed: u64,
    n_max: usize,
    tol: f64,
) -> Result<CrossCheckReport, HarnessError> {
    if specs.is_empty() {
        return Err(HarnessError::Config("no classes given".into()));
    }
    for s in specs {
        s.validate()?;
    }
    let order = n_max + 1;
    check_common(n_max, order, tol)?;
    let per_sample: Vec<Vec<CrossCheckRecord>> = with_pool(|| {
        (0..samples)
            .into_par_iter()
            .map(|i| -> Result<_, FamilyError> {
                let spec = &specs[(i % specs.len() as u64) as usize];
                let f = sample_member(spec, seed, i, order)?.member;
                let rev = gamma_via_reversion(&f, n_max);
                let bn = gamma_via_bn(&f, n_max);
                Ok((1..=n_max)
                    .map(|n| CrossCheckRecord {
                        sample_id: i,
                        class: spec.label(),
                        n,
                        abs_gamma: bn.gamma(n).norm(),
                        discrepancy: (rev.gamma(n) - bn.gamma(n)).norm(),
                    })
                    .collect())
            })
            .collect::<Result<Vec<_>, _>>()
    })??;

    let mut classes: Vec<ClassDiscrepancy> = specs
        .iter()
        .map(|s| ClassDiscrepancy {
            spec: *s,
            samples: 0,
            max_discrepancy: 0.0,
            max_abs_gamma: 0.0,
        })
        .collect();
    let mut max_discrepancy = 0.0;
    let mut worst = None;
    let mut failures = 0;
    for (i, recs) in per_sample.iter().enumerate() {
        let class = &mut classes[i % specs.len()];
        class.samples += 1;
        let mut failed = false;
        for r in recs {
            class.max_discrepancy = class.max_discrepancy.max(r.discrepancy);
            class.max_abs_gamma = class.max_abs_gamma.max(r.abs_gamma);
            if r.discrepancy > max_discrepancy || worst.is_none() {
                max_discrepancy = r.discrepancy;
                worst = Some((r.sample_id, r.n));
            }
            failed |= r.discrepancy > tol;
        }
        failures += failed as usize;
    }
    Ok(CrossCheckReport {
        classes,
        n_max,
        order,
        samples,
        seed,
        tolerance: tol,
        max_discrepancy,
        worst,
        failures,
        records: per_sample.into_iter().flatten().collect(),
    })
}

// ---------------------------------------------------------------------------
// convex exploration

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExploreRow {
    pub n: usize,
    /// Largest `2n |Gamma_n|` observed.
    pub max_ratio: f64,
    pub argmax_sample: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exceedance {
    pub sample_id: u64,
    pub n: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExploreReport {
    pub n_min: usize,
    pub n_max: usize,
    pub order: usize,
    pub samples: u64,
    pub seed: u64,
    pub tolerance: f64,
    pub rows: Vec<ExploreRow>,
    /// Ratios above `1 + tol` for `n >= 4`, where no bound is known.
    pub exceedances: Vec<Exceedance>,
    /// Ratios above `1 + tol` for `n <= 3`, where `|Gamma_n| <= 1/(2n)` holds.
    pub violations: Vec<Exceedance>,
}

/// Searches sampled convex functions for `|Gamma_n(F)| > 1/(2n)`.
/// Reports only; nothing is asserted for `n >= 4`.
pub fn explore_convex_large_n(
    n_min: usize,
    n_max: usize,
    samples: u64,
    seed: u64,
    tol: f64,
) -> Result<ExploreReport, HarnessError> {
    if n_min == 0 || n_min > n_max {
        return Err(HarnessError::Config(format!(
            "n range {n_min}..={n_max} is empty or starts at 0"
        )));
    }
    let order = n_max + DEFAULT_GUARD;
    check_common(n_max, order, tol)?;
    let convex = ClassSpec::f_alpha(0.0)?;
    let ratios: Vec<Vec<f64>> = with_pool(|| {
        (0..samples)
            .into_par_iter()
            .map(|i| -> Result<_, FamilyError> {
                let f = sample_member(&convex, seed, i, order)?.member;
                let g = gamma_via_bn(&f, n_max);
                Ok((n_min..=n_max)
                    .map(|n| 2.0 * n as f64 * g.gamma(n).norm())
                    .collect())
            })
            .collect::<Result<Vec<_>, _>>()
    })??;

    let mut rows: Vec<ExploreRow> = (n_min..=n_max)
        .map(|n| ExploreRow {
            n,
            max_ratio: 0.0,
            argmax_sample: 0,
        })
        .collect();
    let mut exceedances = Vec::new();
    let mut violations = Vec::new();
    for (i, rs) in ratios.iter().enumerate() {
        for (row, &ratio) in rows.iter_mut().zip(rs) {
            if ratio > row.max_ratio {
                row.max_ratio = ratio;
                row.argmax_sample = i as u64;
            }
            if ratio > 1.0 + tol {
                let e = Exceedance {
                    sample_id: i as u64,
                    n: row.n,
                    ratio,
                };
                if row.n <= 3 {
                    violations.push(e);
                } else {
                    exceedances.push(e);
                }
            }
        }
    }
    Ok(ExploreReport {
        n_min,
        n_max,
        order,
        samples,
        seed,
        tolerance: tol,
        rows,
        exceedances,
        violations,
    })
}

// ---------------------------------------------------------------------------
// output

/// Fixed-width scientific notation with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_else(|| "n/a".to_string())
}

pub const REPORT_CSV_HEADER: [&str; 7] = [
    "sample_id",
    "n",
    "abs_gamma",
    "bound",
    "branch",
    "margin",
    "flag",
];

pub fn to_json<T: Serialize>(report: &T) -> Result<String, HarnessError> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

/// One row per (sample, n).
pub fn write_verify_csv<W: Write>(report: &VerifyReport, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_CSV_HEADER)?;
    for r in &report.records {
        w.write_record([
            r.sample_id.to_string(),
            r.n.to_string(),
            fmt_float(r.abs_gamma),
            fmt_opt(r.bound),
            r.branch.clone(),
            fmt_opt(r.margin),
            r.flag.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per `n`; `sample_id` names the extremal, `margin` is the gap.
pub fn write_sharpness_csv<W: Write>(report: &SharpnessReport, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_CSV_HEADER)?;
    for r in &report.rows {
        let id = match r.extremal {
            Some(e) => serde_json::to_string(&e)?,
            None => "none".to_string(),
        };
        let flag = if !r.asserted {
            "n/a"
        } else if r.pass {
            "ok"
        } else {
            "gap"
        };
        w.write_record([
            id,
            r.n.to_string(),
            fmt_opt(r.extremal_abs_gamma),
            fmt_opt(r.bound),
            r.branch.clone(),
            fmt_opt(r.gap),
            flag.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per `n`: the best sample, `|Gamma_n|`, `1/(2n)` and its margin.
pub fn write_explore_csv<W: Write>(report: &ExploreReport, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_CSV_HEADER)?;
    for r in &report.rows {
        let bound = 1.0 / (2 * r.n) as f64;
        let abs_gamma = r.max_ratio * bound;
        let flag = if r.max_ratio <= 1.0 + report.tolerance {
            "ok"
        } else if r.n <= 3 {
            "mathematical"
        } else {
            "exceeds"
        };
        w.write_record([
            r.argmax_sample.to_string(),
            r.n.to_string(),
            fmt_float(abs_gamma),
            fmt_float(bound),
            "convex:1/(2n)".to_string(),
            fmt_float(bound - abs_gamma),
            flag.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub const CROSS_CHECK_CSV_HEADER: [&str; 6] = [
    "sample_id",
    "class",
    "n",
    "abs_gamma",
    "discrepancy",
    "flag",
];

pub fn write_cross_check_csv<W: Write>(
    report: &CrossCheckReport,
    out: W,
) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CROSS_CHECK_CSV_HEADER)?;
    for r in &report.records {
        let flag = if r.discrepancy <= report.tolerance {
            "ok"
        } else {
            "mismatch"
        };
        w.write_record([
            r.sample_id.to_string(),
            r.class.clone(),
            r.n.to_string(),
            fmt_float(r.abs_gamma),
            fmt_float(r.discrepancy),
            flag.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub const GAMMA_CSV_HEADER: [&str; 4] = ["n", "re", "im", "abs"];

pub fn write_gamma_csv<W: Write>(gammas: &GammaVector, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(GAMMA_CSV_HEADER)?;
    for (i, g) in gammas.gammas.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            fmt_float(g.re),
            fmt_float(g.im),
            fmt_float(g.norm()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub const BOUNDS_CSV_HEADER: [&str; 5] = ["n", "bound", "branch", "extremal", "deviation"];

/// One row per bound; non-applicable bounds print `n/a`.
pub fn write_bounds_csv<W: Write>(bounds: &[BoundResult], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BOUNDS_CSV_HEADER)?;
    for b in bounds {
        let extremal = match b.extremal {
            Some(e) => serde_json::to_string(&e)?,
            None => String::new(),
        };
        w.write_record([
            b.n.to_string(),
            fmt_opt(b.value),
            b.branch.clone(),
            extremal,
            b.deviation.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
