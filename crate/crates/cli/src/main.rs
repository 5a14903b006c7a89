mod args;

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::Parser;
use invlog::bounds::{bound_for, BoundResult};
use invlog::families::{
    self, f_alpha_extremal, gc_extremal, half_plane_map, k_ab_n, koebe, member_from_schwarz,
    spiral_extremal, u_lambda_extremal, u_lambda_member, ClassSpec, FAlphaVariant, Omega,
    SchwarzFn,
};
use invlog::harness::{self, CampaignConfig};
use invlog::invlog::{gamma_via_bn, gamma_via_reversion};
use invlog::series::AnalyticSeries;
use num_complex::Complex64;

use args::{
    open_output, BoundsArgs, ClassName, Cli, Command, CrossCheckArgs, ExploreArgs, Family, Format,
    GammaArgs, OutputArgs, Route, SharpnessArgs, VerifyArgs,
};

const EXIT_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gamma(a) => cmd_gamma(&a),
        Command::Bounds(a) => cmd_bounds(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Sharpness(a) => cmd_sharpness(&a),
        Command::Explore(a) => cmd_explore(&a),
        Command::CrossCheck(a) => cmd_cross_check(&a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn emit<T: serde::Serialize>(
    out: &OutputArgs,
    report: &T,
    csv: impl FnOnce(&mut dyn std::io::Write) -> Result<(), harness::HarnessError>,
) -> Result<()> {
    let mut sink = open_output(out)?;
    match out.format {
        Format::Json => sink.write_all(harness::to_json(report)?.as_bytes())?,
        Format::Csv => csv(&mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

fn c64((re, im): (f64, f64)) -> Complex64 {
    Complex64::new(re, im)
}

fn class_of(a: &GammaArgs) -> Result<ClassSpec> {
    match a.class {
        Some(class) => a.params.class_spec(class),
        None => bail!("--class is required for --family {:?}", a.family),
    }
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| anyhow::anyhow!("--{flag} is required for this family"))
}

fn gamma_function(a: &GammaArgs, order: usize) -> Result<AnalyticSeries> {
    let p = &a.params;
    let m = a.m.unwrap_or(1);
    let f = match a.family {
        Family::Identity => AnalyticSeries::from_tail(&[], order),
        Family::Koebe => koebe(a.theta.unwrap_or(0.0), order),
        Family::Line => half_plane_map(order),
        Family::Halfconvex => {
            f_alpha_extremal(p.alpha.unwrap_or(-0.5), FAlphaVariant::HalfConvex, order)?
        }
        Family::KAb => k_ab_n(need(p.a_cap, "A")?, need(p.b_cap, "B")?, m, order)?,
        Family::Spiral => {
            spiral_extremal(need(p.alpha, "alpha")?, need(p.beta, "beta")?, m, order)?
        }
        Family::Gc => gc_extremal(need(p.c, "c")?, m, order)?,
        Family::ULambda => {
            let lambda = need(p.lambda, "lambda")?;
            ClassSpec::u_lambda(lambda)?;
            let a_origin = p.abs_a()?.unwrap_or(1.0);
            match a.a2 {
                Some(a2) => u_lambda_member(c64(a2), &Omega::mobius(a_origin), lambda, order)?,
                None => u_lambda_extremal(lambda, a_origin, order)?,
            }
        }
        Family::FAlpha => {
            let variant = a
                .variant
                .map(FAlphaVariant::from)
                .unwrap_or(FAlphaVariant::Pow1);
            f_alpha_extremal(need(p.alpha, "alpha")?, variant, order)?
        }
        Family::Member => {
            let spec = class_of(a)?;
            let zeros = a.zeros.iter().copied().map(c64).collect();
            let phi = SchwarzFn::new(a.theta.unwrap_or(0.0), m as u32, zeros)?;
            member_from_schwarz(&spec, &phi, order)?
        }
        Family::Sample => {
            let spec = class_of(a)?;
            let seed = need(a.seed, "seed")?;
            families::sample_member(&spec, seed, a.index, order)?.member
        }
    };
    Ok(f)
}

fn cmd_gamma(a: &GammaArgs) -> Result<bool> {
    if a.n_max == 0 {
        bail!("--n-max must be at least 1");
    }
    let order = a.order.unwrap_or(a.n_max + 1);
    if order <= a.n_max {
        bail!("--order {order} must exceed --n-max {}", a.n_max);
    }
    let f = gamma_function(a, order)?;
    if !f.is_finite() {
        bail!("coefficients of the requested function are not finite");
    }
    let gammas = match a.route {
        Route::Bn => gamma_via_bn(&f, a.n_max),
        Route::Reversion => gamma_via_reversion(&f, a.n_max),
    };
    emit(&a.out, &gammas, |w| harness::write_gamma_csv(&gammas, w))?;
    Ok(true)
}

fn cmd_bounds(a: &BoundsArgs) -> Result<bool> {
    if a.n_min == 0 || a.n_min > a.n_max {
        bail!("n range {}..={} is empty or starts at 0", a.n_min, a.n_max);
    }
    let spec = a.params.class_spec(a.class)?;
    let abs_a = a.params.abs_a()?;
    let rows: Vec<BoundResult> = (a.n_min..=a.n_max)
        .map(|n| bound_for(&spec, n, abs_a))
        .collect();
    emit(&a.out, &rows, |w| harness::write_bounds_csv(&rows, w))?;
    Ok(true)
}

fn cmd_verify(a: &VerifyArgs) -> Result<bool> {
    let spec = a.params.class_spec(a.class)?;
    let cfg = CampaignConfig {
        tol: a.tol,
        order: a.order,
        ..CampaignConfig::new(spec, a.n_max, a.samples, a.seed)
    };
    let report = harness::verify_bounds(&cfg)?;
    emit(&a.out, &report, |w| harness::write_verify_csv(&report, w))?;
    eprintln!(
        "{}: {} samples, {} mathematical violations",
        spec.label(),
        report.samples,
        report.mathematical_violations()
    );
    Ok(report.passed())
}

fn cmd_sharpness(a: &SharpnessArgs) -> Result<bool> {
    let spec = a.params.class_spec(a.class)?;
    let report = harness::sharpness_check(&spec, &a.n_values()?, a.params.abs_a()?, a.tol)?;
    emit(&a.out, &report, |w| {
        harness::write_sharpness_csv(&report, w)
    })?;
    eprintln!(
        "{}: max gap {:.3e} on attained clauses",
        spec.label(),
        report.max_asserted_gap()
    );
    Ok(report.passed())
}

fn cmd_explore(a: &ExploreArgs) -> Result<bool> {
    if a.class != ClassName::Convex {
        bail!("explore only searches the convex class");
    }
    let report = harness::explore_convex_large_n(a.n_min, a.n_max, a.samples, a.seed, a.tol)?;
    emit(&a.out, &report, |w| harness::write_explore_csv(&report, w))?;
    eprintln!(
        "{} exceedances of 1/(2n) for n >= 4, {} for n <= 3",
        report.exceedances.len(),
        report.violations.len()
    );
    Ok(true)
}

fn cmd_cross_check(a: &CrossCheckArgs) -> Result<bool> {
    let specs = match a.class {
        Some(class) => vec![a.params.class_spec(class)?],
        None => harness::default_cross_check_classes(),
    };
    let report = harness::cross_check(&specs, a.samples, a.seed, a.n_max, a.tol)?;
    emit(&a.out, &report, |w| {
        harness::write_cross_check_csv(&report, w)
    })?;
    eprintln!(
        "max discrepancy {:.3e} over {} samples, {} failures",
        report.max_discrepancy, report.samples, report.failures
    );
    Ok(report.passed())
}
