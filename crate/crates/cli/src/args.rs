use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use invlog::families::{ClassSpec, FAlphaVariant};

/// Parses a real number, accepting `p/q` rationals such as `3/5` or `-1/2`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in {s:?}"))?;
            let q: f64 = q
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in {s:?}"))?;
            if q == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            p / q
        }
        None => s.parse().map_err(|_| format!("not a number: {s:?}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

/// `re,im` or a real number.
pub fn parse_complex(s: &str) -> Result<(f64, f64), String> {
    match s.split_once(',') {
        Some((re, im)) => Ok((parse_real(re)?, parse_real(im)?)),
        None => Ok((parse_real(s)?, 0.0)),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "invlog",
    version,
    about = "Logarithmic coefficients of inverse univalent functions: compute, bound, verify"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print Gamma_n of a named function or class member.
    Gamma(GammaArgs),
    /// Print the sharp bounds of a class.
    Bounds(BoundsArgs),
    /// Monte-Carlo check of the bounds over sampled class members.
    Verify(VerifyArgs),
    /// Compare bounds with the extremal functions that attain them.
    Sharpness(SharpnessArgs),
    /// Search sampled convex functions for |Gamma_n| > 1/(2n).
    Explore(ExploreArgs),
    /// Compare the reversion and b_n routes for Gamma_n.
    CrossCheck(CrossCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassName {
    /// The full class S (sampled through starlike functions)
    S,
    /// Janowski starlike S*(A, B)
    StarAb,
    /// Starlike of order beta, S*(1 - 2 beta, -1)
    StarOrder,
    /// Spirallike of order beta with rotation alpha
    Spiral,
    Gc,
    ULambda,
    FAlpha,
    /// F(0)
    Convex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Pow1,
    Pow2,
    Pow3,
    Halfconvex,
}

impl From<Variant> for FAlphaVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Pow1 => FAlphaVariant::Pow1,
            Variant::Pow2 => FAlphaVariant::Pow2,
            Variant::Pow3 => FAlphaVariant::Pow3,
            Variant::Halfconvex => FAlphaVariant::HalfConvex,
        }
    }
}

/// Class parameters shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long = "A", value_parser = parse_real, allow_hyphen_values = true)]
    pub a_cap: Option<f64>,
    #[arg(long = "B", value_parser = parse_real, allow_hyphen_values = true)]
    pub b_cap: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// |omega(0)| for U(lambda), in [0, 1]
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub a: Option<f64>,
}

impl ParamArgs {
    fn need(value: Option<f64>, flag: &str, class: &str) -> Result<f64> {
        value.ok_or_else(|| anyhow!("--{flag} is required for {class}"))
    }

    pub fn class_spec(&self, class: ClassName) -> Result<ClassSpec> {
        let spec = match class {
            ClassName::S => ClassSpec::FullS,
            ClassName::StarAb => ClassSpec::star_ab(
                Self::need(self.a_cap, "A", "star-ab")?,
                Self::need(self.b_cap, "B", "star-ab")?,
            )?,
            ClassName::StarOrder => {
                ClassSpec::star_order(Self::need(self.beta, "beta", "star-order")?)?
            }
            ClassName::Spiral => ClassSpec::spiral(
                Self::need(self.alpha, "alpha", "spiral")?,
                Self::need(self.beta, "beta", "spiral")?,
            )?,
            ClassName::Gc => ClassSpec::gc(Self::need(self.c, "c", "gc")?)?,
            ClassName::ULambda => {
                ClassSpec::u_lambda(Self::need(self.lambda, "lambda", "u-lambda")?)?
            }
            ClassName::FAlpha => ClassSpec::f_alpha(Self::need(self.alpha, "alpha", "f-alpha")?)?,
            ClassName::Convex => ClassSpec::f_alpha(0.0)?,
        };
        Ok(spec)
    }

    /// `|omega(0)|` for `U(lambda)` bounds; unset means the bound over all `omega`.
    pub fn abs_a(&self) -> Result<Option<f64>> {
        match self.a {
            Some(a) if !(0.0..=1.0).contains(&a) => bail!("--a = {a} outside [0, 1]"),
            a => Ok(a),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Identity,
    Koebe,
    /// l(z) = z/(1 - z)
    Line,
    Halfconvex,
    KAb,
    Spiral,
    Gc,
    ULambda,
    FAlpha,
    /// A member built from an explicit Schwarz function (--class, --theta, --m, --zero)
    Member,
    /// A sampled member (--class, --seed, --index)
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Bn,
    Reversion,
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Class of a `member` or `sample`.
    #[arg(long, value_enum)]
    pub class: Option<ClassName>,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Rotation angle (Koebe, Schwarz functions).
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Index n of k_{A,B;n} and the spiral extremal, m of the G(c) extremal,
    /// zero order of a Schwarz function.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, value_enum)]
    pub variant: Option<Variant>,
    /// f''(0)/2 of a U(lambda) member, as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub a2: Option<(f64, f64)>,
    /// Blaschke zero of the Schwarz function, as `re,im`; repeatable.
    #[arg(long = "zero", value_parser = parse_complex, allow_hyphen_values = true)]
    pub zeros: Vec<(f64, f64)>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub index: u64,
    #[arg(long)]
    pub n_max: usize,
    /// Truncation order of the function (default n-max + 1).
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, value_enum, default_value_t = Route::Bn)]
    pub route: Route,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub class: ClassName,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long)]
    pub n_max: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub class: ClassName,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long)]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_parser = parse_real, default_value = "1e-9")]
    pub tol: f64,
    /// Truncation order of sampled members (default n-max + 8).
    #[arg(long)]
    pub order: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SharpnessArgs {
    #[arg(long, value_enum)]
    pub class: ClassName,
    #[command(flatten)]
    pub params: ParamArgs,
    /// A single n.
    #[arg(long, conflicts_with = "n_max")]
    pub n: Option<usize>,
    /// Check every n from 1 to n-max.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_parser = parse_real, default_value = "1e-9")]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl SharpnessArgs {
    pub fn n_values(&self) -> Result<Vec<usize>> {
        match (self.n, self.n_max) {
            (Some(n), None) => Ok(vec![n]),
            (None, Some(m)) => Ok((1..=m).collect()),
            _ => bail!("give --n or --n-max"),
        }
    }
}

#[derive(Debug, Args)]
pub struct ExploreArgs {
    /// Only the convex class is searched.
    #[arg(long, value_enum, default_value_t = ClassName::Convex)]
    pub class: ClassName,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long)]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_parser = parse_real, default_value = "1e-9")]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CrossCheckArgs {
    /// Class to sample; all five sampled classes when omitted.
    #[arg(long, value_enum)]
    pub class: Option<ClassName>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    #[arg(long)]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_parser = parse_real, default_value = "1e-10")]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

pub fn open_output(out: &OutputArgs) -> Result<Box<dyn std::io::Write>> {
    match &out.output {
        Some(path) => {
            let file = std::fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_and_rationals() {
        assert_eq!(parse_real("3/5"), Ok(0.6));
        assert_eq!(parse_real("-1/2"), Ok(-0.5));
        assert_eq!(parse_real(" 0.25 "), Ok(0.25));
        assert_eq!(parse_real("1e-9"), Ok(1e-9));
        assert!(parse_real("1/0").is_err());
        assert!(parse_real("abc").is_err());
        assert!(parse_real("inf").is_err());
        assert_eq!(parse_complex("0.5,-1/4"), Ok((0.5, -0.25)));
        assert_eq!(parse_complex("2"), Ok((2.0, 0.0)));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
