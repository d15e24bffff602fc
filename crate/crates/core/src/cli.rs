//! Command-line front end. [`run`] parses arguments, resolves a
//! [`RunConfig`] and dispatches to the library.
//!
//! Exit codes: 0 on success (including failed diagnostic verdicts), 2 on
//! domain or validation errors, 3 on resource limits, 64 on usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    approx_polynomial, identity_certify, riemann_extend, ApproxOptions, ExtendOptions, ThinSetSpec,
};
use crate::cauchy::{cauchy_derivative, taylor_coefficients, BoundarySamples};
use crate::curve::{CurveC1, CurveComponent};
use crate::error::{Error, Result};
use crate::expr::{Expr, ExprFn};
use crate::holomorphy::{check_all, halton_points, DEFAULT_BASE_POINTS, DEFAULT_SPECTRAL_TOL};
use crate::multi_index::MultiIndex;
use crate::point::CPoint;
use crate::polydisc::Polydisc;
use crate::quadrature::integrate_curve;
use crate::series::{liouville_test, LiouvilleOptions};
use crate::space::{Seminorm, Shape, SpaceDescriptor, VectorValue};

/// Exit code for command-line usage errors.
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "polydisc",
    version,
    about = "Numerical complex analysis on polydiscs in C^d"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Taylor coefficients a_beta for |beta| <= n from one DFT of boundary
    /// samples (Cauchy integral formula, taylor_coefficients)
    Taylor(TaylorArgs),
    /// One complex partial derivative at a point by Cauchy's integral formula
    /// (cauchy_derivative)
    Deriv(DerivArgs),
    /// Integral of the expression over the distinguished boundary of the
    /// disc, or over a product of segments (integrate_curve)
    Integrate(IntegrateArgs),
    /// Holomorphy diagnostics: Cauchy-Riemann residual, negative spectrum,
    /// slice checks and coordinate probes (cr_residual,
    /// negative_spectrum_check, separate_holomorphy_check,
    /// weak_holomorphy_probe)
    CheckHolo(CheckArgs),
    /// Decide whether an entire function is a polynomial of degree <= k
    /// (Liouville test, liouville_test)
    Liouville(LiouvilleArgs),
    /// Value of the holomorphic extension across the zero set of a
    /// polynomial (removable singularities, riemann_extend)
    Extend(ExtendArgs),
    /// Polynomial approximation on the closed polydisc with a certified
    /// error (polydisc algebra, approx_polynomial)
    Approx(ApproxArgs),
    /// Compare the Taylor coefficients of two functions at the disc centre
    /// (identity theorem, identity_certify)
    CertifyIdentity(CertifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Common {
    /// Function of z1..zd, e.g. "exp(z1+z2)" or "[z1, z2^2]"
    #[arg(long)]
    expr: Option<String>,
    /// JSON file: an expression fixture {"expr": ..} or boundary samples
    #[arg(long)]
    input: Option<PathBuf>,
    /// Number of complex variables
    #[arg(long = "d")]
    d: Option<usize>,
    /// Value space: scalar, vec:m or mat:m (default: inferred)
    #[arg(long)]
    space: Option<String>,
    /// Comma-separated seminorm family, e.g. sup,euclidean,operator
    #[arg(long)]
    seminorms: Option<String>,
    /// Disc centre: d reals, 2d re,im values, or "re,im;re,im"
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    /// Disc radii: d values or one value for every axis
    #[arg(long)]
    radii: Option<String>,
    /// Boundary nodes per axis: d values or one value
    #[arg(long)]
    nodes: Option<String>,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Seed for randomised sample points
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct TaylorArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 8)]
    max_degree: u32,
}

#[derive(Debug, Args)]
struct DerivArgs {
    #[command(flatten)]
    common: Common,
    /// Multi-index, d comma-separated orders
    #[arg(long)]
    beta: String,
    /// Evaluation point (default: the centre)
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
}

#[derive(Debug, Args)]
struct IntegrateArgs {
    #[command(flatten)]
    common: Common,
    /// Segment start point; with --to integrates over a product of segments
    #[arg(long, allow_hyphen_values = true, requires = "to")]
    from: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "from")]
    to: Option<String>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = DEFAULT_SPECTRAL_TOL)]
    tol: f64,
}

#[derive(Debug, Args)]
struct LiouvilleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: u32,
    /// Increasing radii, comma-separated
    #[arg(long, default_value = "2,8")]
    radii_seq: String,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value = "sup")]
    seminorm: String,
}

#[derive(Debug, Args)]
struct ExtendArgs {
    #[command(flatten)]
    common: Common,
    /// Polynomial whose zero set is removed, e.g. "z1*z2"
    #[arg(long)]
    thin: String,
    /// Target point (default: the centre)
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    /// Exclusion tolerance for |p(z)| (default: relative 1e-8)
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
struct ApproxArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value = "sup")]
    seminorm: String,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[command(flatten)]
    common: Common,
    /// Second function
    #[arg(long)]
    expr2: String,
    #[arg(long, default_value_t = 12)]
    max_degree: u32,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

/// Where the function comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Expr(ExprFn),
    Samples(BoundarySamples),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operation {
    Taylor {
        max_degree: u32,
    },
    Deriv {
        beta: MultiIndex,
        at: CPoint,
    },
    Integrate {
        segments: Option<(CPoint, CPoint)>,
    },
    CheckHolo {
        tol: f64,
    },
    Liouville {
        k: u32,
        radii: Vec<f64>,
        tol: f64,
        seminorm: Seminorm,
    },
    Extend {
        thin: ThinSetSpec,
        at: CPoint,
    },
    Approx {
        eps: f64,
        seminorm: Seminorm,
    },
    CertifyIdentity {
        other: ExprFn,
        max_degree: u32,
        tol: f64,
    },
}

/// Fully resolved invocation: defaults applied, inputs parsed and read.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub operation: Operation,
    pub source: Source,
    pub d: usize,
    pub space: SpaceDescriptor,
    pub disc: Polydisc,
    pub nodes: Vec<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: Option<u64>,
}

fn parse_reals(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::invalid(format!("{what}: '{t}' is not a finite number")))
        })
        .collect()
}

/// `d` reals, `2d` values read as re,im pairs, or `;`-separated
/// coordinates each given as `re,im` or `re`.
pub fn parse_point(s: &str, d: usize, what: &str) -> Result<CPoint> {
    let coords: Vec<Complex64> = if s.contains(';') {
        s.split(';')
            .map(|c| match parse_reals(c, what)?.as_slice() {
                [re] => Ok(Complex64::new(*re, 0.0)),
                [re, im] => Ok(Complex64::new(*re, *im)),
                _ => Err(Error::invalid(format!(
                    "{what}: coordinate '{c}' must be re or re,im"
                ))),
            })
            .collect::<Result<_>>()?
    } else {
        let x = parse_reals(s, what)?;
        if x.len() == d {
            x.into_iter().map(|re| Complex64::new(re, 0.0)).collect()
        } else if x.len() == 2 * d {
            x.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect()
        } else {
            return Err(Error::invalid(format!(
                "{what}: expected {d} reals or {} re,im values, got {}",
                2 * d,
                x.len()
            )));
        }
    };
    if coords.len() != d {
        return Err(Error::invalid(format!(
            "{what}: expected {d} coordinates, got {}",
            coords.len()
        )));
    }
    CPoint::new(coords)
}

fn per_axis<T: Copy>(values: Vec<T>, d: usize, what: &str) -> Result<Vec<T>> {
    match values.len() {
        1 => Ok(vec![values[0]; d]),
        n if n == d => Ok(values),
        n => Err(Error::invalid(format!(
            "{what}: expected 1 or {d} values, got {n}"
        ))),
    }
}

fn parse_seminorm(s: &str) -> Result<Seminorm> {
    s.parse()
}

fn resolve_space(common: &Common, inferred: Shape) -> Result<SpaceDescriptor> {
    let shape = match &common.space {
        Some(s) => s.parse::<Shape>()?,
        None => inferred,
    };
    match &common.seminorms {
        Some(list) => SpaceDescriptor::new(
            shape,
            list.split(',')
                .map(|t| parse_seminorm(t.trim()))
                .collect::<Result<_>>()?,
        ),
        None => Ok(SpaceDescriptor::with_default_seminorms(shape)),
    }
}

/// Reads an `--input` file: an expression fixture or boundary samples.
fn read_input(path: &PathBuf, d_flag: Option<usize>) -> Result<(Source, usize)> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text)?;
    if let Some(src) = doc.get("expr").and_then(Value::as_str) {
        let d = d_flag
            .or_else(|| doc.get("d").and_then(Value::as_u64).map(|d| d as usize))
            .ok_or_else(|| Error::invalid("expression fixture without a dimension; pass --d"))?;
        return Ok((Source::Expr(ExprFn::parse(src, d)?), d));
    }
    let samples = BoundarySamples::from_json(&text)?;
    let d = samples.disc().dim();
    if d_flag.is_some_and(|x| x != d) {
        return Err(Error::invalid(format!(
            "--d disagrees with the sample file (d = {d})"
        )));
    }
    Ok((Source::Samples(samples), d))
}

impl RunConfig {
    fn from_common(
        common: &Common,
        operation: impl FnOnce(usize, &Polydisc) -> Result<Operation>,
    ) -> Result<Self> {
        let (source, d) = match (&common.expr, &common.input) {
            (Some(_), Some(_)) => {
                return Err(Error::invalid("give either --expr or --input, not both"))
            }
            (None, None) => return Err(Error::invalid("one of --expr or --input is required")),
            (Some(src), None) => {
                let d = common
                    .d
                    .ok_or_else(|| Error::invalid("--d is required with --expr"))?;
                (Source::Expr(ExprFn::parse(src, d)?), d)
            }
            (None, Some(path)) => read_input(path, common.d)?,
        };
        let (space, disc, nodes) = match &source {
            Source::Samples(s) => {
                if common.center.is_some() || common.radii.is_some() || common.nodes.is_some() {
                    return Err(Error::invalid(
                        "--center, --radii and --nodes come from the sample file",
                    ));
                }
                (s.space().clone(), s.disc().clone(), s.nodes().to_vec())
            }
            Source::Expr(f) => {
                use crate::quadrature::Integrand;
                let space = resolve_space(common, f.shape())?;
                if space.shape() != f.shape() {
                    return Err(Error::Shape(format!(
                        "expression has values in {} but --space is {}",
                        f.shape(),
                        space.shape()
                    )));
                }
                let center = match &common.center {
                    Some(s) => parse_point(s, d, "--center")?,
                    None => CPoint::origin(d)?,
                };
                let radii = match &common.radii {
                    Some(s) => per_axis(parse_reals(s, "--radii")?, d, "--radii")?,
                    None => vec![1.0; d],
                };
                let nodes = match &common.nodes {
                    Some(s) => {
                        let n = s
                            .split(',')
                            .map(|t| {
                                t.trim().parse::<usize>().map_err(|_| {
                                    Error::invalid(format!("--nodes: '{t}' is not a count"))
                                })
                            })
                            .collect::<Result<Vec<_>>>()?;
                        per_axis(n, d, "--nodes")?
                    }
                    None => vec![64; d],
                };
                (space, Polydisc::new(center, radii)?, nodes)
            }
        };
        let operation = operation(d, &disc)?;
        if let Some(out) = &common.out {
            if out.as_os_str().is_empty() {
                return Err(Error::invalid("--out is empty"));
            }
            if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
                if !parent.is_dir() {
                    return Err(Error::Io(format!(
                        "output directory {} does not exist",
                        parent.display()
                    )));
                }
            }
        }
        Ok(RunConfig {
            operation,
            source,
            d,
            space,
            disc,
            nodes,
            out: common.out.clone(),
            format: common.format,
            seed: common.seed,
        })
    }

    fn resolve(command: Command) -> Result<Self> {
        match command {
            Command::Taylor(a) => Self::from_common(&a.common, |_, _| {
                Ok(Operation::Taylor {
                    max_degree: a.max_degree,
                })
            }),
            Command::Deriv(a) => Self::from_common(&a.common, |d, disc| {
                let beta = MultiIndex::new(
                    a.beta
                        .split(',')
                        .map(|t| {
                            t.trim().parse::<u32>().map_err(|_| {
                                Error::invalid(format!("--beta: '{t}' is not an order"))
                            })
                        })
                        .collect::<Result<_>>()?,
                );
                if beta.dim() != d {
                    return Err(Error::invalid(format!("--beta needs {d} orders")));
                }
                let at = match &a.at {
                    Some(s) => parse_point(s, d, "--at")?,
                    None => disc.center().clone(),
                };
                Ok(Operation::Deriv { beta, at })
            }),
            Command::Integrate(a) => Self::from_common(&a.common, |d, _| {
                let segments = match (&a.from, &a.to) {
                    (Some(f), Some(t)) => {
                        Some((parse_point(f, d, "--from")?, parse_point(t, d, "--to")?))
                    }
                    _ => None,
                };
                Ok(Operation::Integrate { segments })
            }),
            Command::CheckHolo(a) => {
                Self::from_common(&a.common, |_, _| Ok(Operation::CheckHolo { tol: a.tol }))
            }
            Command::Liouville(a) => Self::from_common(&a.common, |_, _| {
                Ok(Operation::Liouville {
                    k: a.k,
                    radii: parse_reals(&a.radii_seq, "--radii-seq")?,
                    tol: a.tol,
                    seminorm: parse_seminorm(&a.seminorm)?,
                })
            }),
            Command::Extend(a) => {
                let mut config = Self::from_common(&a.common, |d, disc| {
                    let at = match &a.at {
                        Some(s) => parse_point(s, d, "--at")?,
                        None => disc.center().clone(),
                    };
                    Ok(Operation::Extend {
                        thin: ThinSetSpec::parse(&a.thin, d, a.tol)?,
                        at,
                    })
                })?;
                // without --center the search disc is centred at the target
                if let (None, Operation::Extend { at, .. }) = (&a.common.center, &config.operation)
                {
                    config.disc = Polydisc::new(at.clone(), config.disc.radii().to_vec())?;
                }
                Ok(config)
            }
            Command::Approx(a) => Self::from_common(&a.common, |_, _| {
                Ok(Operation::Approx {
                    eps: a.eps,
                    seminorm: parse_seminorm(&a.seminorm)?,
                })
            }),
            Command::CertifyIdentity(a) => Self::from_common(&a.common, |d, _| {
                Ok(Operation::CertifyIdentity {
                    other: ExprFn::parse(&a.expr2, d)?,
                    max_degree: a.max_degree,
                    tol: a.tol,
                })
            }),
        }
    }

    fn function(&self, command: &str) -> Result<&ExprFn> {
        match &self.source {
            Source::Expr(f) => Ok(f),
            Source::Samples(_) => Err(Error::invalid(format!(
                "{command} needs --expr (sample files are not callable)"
            ))),
        }
    }

    fn samples(&self) -> Result<BoundarySamples> {
        match &self.source {
            Source::Samples(s) => Ok(s.clone()),
            Source::Expr(f) => BoundarySamples::sample(f, &self.disc, &self.nodes, &self.space),
        }
    }
}

/// Result of a command, ready to serialise.
enum Output {
    Json(Value),
    /// JSON plus a plain-text rendering used when no --out is given.
    Text(Value, String),
    Csv(Vec<Vec<String>>),
}

fn to_json<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

/// `x` rounded to 12 decimals without trailing zeros; `-0` prints as `0`.
fn short(x: f64) -> String {
    let s = format!("{:.12}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn format_complex(c: Complex64) -> String {
    let im = short(c.im);
    match im.strip_prefix('-') {
        Some(abs) => format!("{}-{abs}i", short(c.re)),
        None => format!("{}+{im}i", short(c.re)),
    }
}

fn format_value(v: &VectorValue) -> String {
    match v.as_scalar() {
        Some(c) => format_complex(c),
        None => format!(
            "[{}]",
            v.entries()
                .iter()
                .map(|&c| format_complex(c))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

fn value_rows(v: &VectorValue) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["entry".into(), "re".into(), "im".into()]];
    for (i, c) in v.entries().iter().enumerate() {
        rows.push(vec![i.to_string(), c.re.to_string(), c.im.to_string()]);
    }
    rows
}

fn base_points(config: &RunConfig) -> Result<Vec<CPoint>> {
    match config.seed {
        None => halton_points(&config.disc, DEFAULT_BASE_POINTS, 0.5),
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..DEFAULT_BASE_POINTS)
                .map(|_| {
                    CPoint::new(
                        (0..config.d)
                            .map(|j| {
                                let r = 0.5 * config.disc.radii()[j] * rng.gen::<f64>().sqrt();
                                let t = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
                                config.disc.center()[j] + Complex64::from_polar(r, t)
                            })
                            .collect(),
                    )
                })
                .collect()
        }
    }
}

fn execute(config: &RunConfig) -> Result<Output> {
    let csv_only = |name: &str| -> Result<()> {
        if config.format == Format::Csv {
            Err(Error::invalid(format!(
                "{name} has no CSV output; use --format json"
            )))
        } else {
            Ok(())
        }
    };
    match &config.operation {
        Operation::Taylor { max_degree } => {
            let series = taylor_coefficients(&config.samples()?, *max_degree)?;
            if config.format == Format::Csv {
                let mut header: Vec<String> = (1..=config.d).map(|j| format!("beta{j}")).collect();
                header.extend(["entry", "re", "im"].map(String::from));
                let mut rows = vec![header];
                for (beta, a) in series.terms() {
                    for (i, c) in a.entries().iter().enumerate() {
                        let mut row: Vec<String> =
                            beta.exponents().iter().map(u32::to_string).collect();
                        row.extend([i.to_string(), c.re.to_string(), c.im.to_string()]);
                        rows.push(row);
                    }
                }
                return Ok(Output::Csv(rows));
            }
            Ok(Output::Json(to_json(&series)?))
        }
        Operation::Deriv { beta, at } => {
            let est = cauchy_derivative(&config.samples()?, at, beta)?;
            if config.format == Format::Csv {
                return Ok(Output::Csv(value_rows(&est.value)));
            }
            let text = format_value(&est.value);
            Ok(Output::Text(
                json!({"beta": beta, "at": at, "value": est.value.entries(), "warnings": est.warnings}),
                text,
            ))
        }
        Operation::Integrate { segments } => {
            let f = config.function("integrate")?;
            let curve = match segments {
                None => CurveC1::distinguished_boundary(&config.disc),
                Some((a, b)) => CurveC1::new(
                    (0..config.d)
                        .map(|j| CurveComponent::segment(a[j], b[j]))
                        .collect(),
                )?,
            };
            let est = integrate_curve(f, &curve, &config.nodes)?;
            if config.format == Format::Csv {
                return Ok(Output::Csv(value_rows(&est.value)));
            }
            let text = format_value(&est.value);
            Ok(Output::Text(
                json!({"value": est.value.entries(), "warnings": est.warnings}),
                text,
            ))
        }
        Operation::CheckHolo { tol } => {
            csv_only("check-holo")?;
            let f = config.function("check-holo")?;
            let nodes = *config.nodes.iter().max().expect("d >= 1");
            let mut report = check_all(
                f,
                &config.space,
                &config.disc,
                &base_points(config)?,
                nodes,
                *tol,
            )?;
            if f.is_tainted() {
                report
                    .notes
                    .push("expression contains conj; failure expected".into());
            }
            Ok(Output::Json(to_json(&report)?))
        }
        Operation::Liouville {
            k,
            radii,
            tol,
            seminorm,
        } => {
            csv_only("liouville")?;
            let f = config.function("liouville")?;
            let options = LiouvilleOptions {
                radii: radii.clone(),
                tol: *tol,
                nodes: *config.nodes.iter().max().expect("d >= 1"),
            };
            let result = liouville_test(f, &config.space, *k, *seminorm, &options)?;
            Ok(Output::Json(to_json(&result)?))
        }
        Operation::Extend { thin, at } => {
            csv_only("extend")?;
            let f = config.function("extend")?;
            let options = ExtendOptions {
                nodes: *config.nodes.iter().max().expect("d >= 1"),
                ..Default::default()
            };
            let ext = riemann_extend(
                f,
                &config.space,
                thin,
                at,
                std::slice::from_ref(&config.disc),
                &options,
            )?;
            Ok(Output::Json(to_json(&ext)?))
        }
        Operation::Approx { eps, seminorm } => {
            csv_only("approx")?;
            let f = config.function("approx")?;
            let a = approx_polynomial(
                f,
                &config.space,
                &config.disc,
                *eps,
                *seminorm,
                &ApproxOptions::default(),
            )?;
            let mut doc = to_json(&a)?;
            doc["expr"] = json!(Expr::from_series(&a.polynomial).to_string());
            Ok(Output::Json(doc))
        }
        Operation::CertifyIdentity {
            other,
            max_degree,
            tol,
        } => {
            csv_only("certify-identity")?;
            let f = config.function("certify-identity")?;
            let nodes = *config.nodes.iter().max().expect("d >= 1");
            let cert = identity_certify(
                f,
                other,
                &config.space,
                &config.disc,
                *max_degree,
                *tol,
                nodes,
            )?;
            Ok(Output::Json(to_json(&cert)?))
        }
    }
}

fn render(output: &Output, to_file: bool) -> Result<String> {
    match output {
        Output::Json(v) => Ok(serde_json::to_string_pretty(v)? + "\n"),
        Output::Text(v, text) => {
            if to_file {
                Ok(serde_json::to_string_pretty(v)? + "\n")
            } else {
                Ok(format!("{text}\n"))
            }
        }
        Output::Csv(rows) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.write_record(row).map_err(|e| Error::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
        }
    }
}

fn run_config(config: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let output = execute(config)?;
    let text = render(&output, config.out.is_some())?;
    match &config.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => stdout.write_all(text.as_bytes()).map_err(Error::from),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let result = RunConfig::resolve(cli.command).and_then(|config| run_config(&config, stdout));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
