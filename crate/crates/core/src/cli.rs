//! Command-line front end. [`run`] takes the argument vector and returns the
//! exit code with captured stdout and stderr, so the binary is a thin
//! wrapper and the whole surface is testable in-process.
//!
//! Exit codes: 0 success, 1 usage or domain error, 2 verification failure
//! or route disagreement.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{factorial_f64, parse_rational, q_to_f64, Q};
use crate::error::Error;
use crate::format::fmt_sig;
use crate::moments::{
    adjusted_table, canonical_table, generating_function, ode_residual, taylor_coefficient, MomentKind, MomentTable,
    Route,
};
use crate::oracle::{inner_product, QuadratureConfig, Strategy};
use crate::poly::{Poly, RationalPoly};
use crate::polys::{
    apply_operator, build_matrix_a, build_matrix_a_tilde, exceptional_condition_residual, literature_norm_squared,
    literature_normalization, solve_exact, solve_polynomial, three_term_residual, x1_from_classical, Basis,
    Coefficient, Flavor, Normalization, X1Polynomial,
};
use crate::precision::Tolerances;

pub const CONFIG_ENV: &str = "X1LAG_CONFIG";

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code: 1,
            stdout: String::new(),
            stderr,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "x1lag",
    version,
    about = "Exceptional X1-Laguerre polynomials and their moments"
)]
struct Cli {
    /// TOML config file; falls back to $X1LAG_CONFIG. Flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Adjusted or canonical moment table by one route, optionally
    /// cross-checked against others.
    Moments(MomentsArgs),
    /// Coefficients of L_n^α.
    Poly(PolyArgs),
    /// Run invariant checks and emit a JSON report.
    Verify(VerifyArgs),
    /// Moments by every available route side by side.
    Table(TableArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Significant digits for csv and text output (1-17).
    #[arg(long)]
    digits: Option<usize>,
    /// Agreement tolerance; overrides the per-check defaults.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct MomentsArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = KindArg::Adjusted)]
    kind: KindArg,
    #[arg(long)]
    kmax: usize,
    /// Route for the output; further comma-separated routes are compared
    /// against it.
    #[arg(long, value_delimiter = ',', value_parser = parse_route)]
    route: Vec<Route>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct PolyArgs {
    #[arg(long)]
    n: usize,
    /// α as a decimal or p/q; exact mode keeps it rational.
    #[arg(long, allow_negative_numbers = true)]
    alpha: String,
    #[arg(long, value_enum, default_value_t = PathArg::Tilde)]
    path: PathArg,
    #[arg(long, value_enum, default_value_t = BasisArg::X)]
    basis: BasisArg,
    #[arg(long, value_enum, default_value_t = NormArg::Literature)]
    normalization: NormArg,
    /// K for `--normalization raw`.
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    /// Exact rational arithmetic (Bareiss-Cramer) at rational α.
    #[arg(long)]
    exact: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    nmax: usize,
    /// Comma-separated α values.
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2.5")]
    alpha: Vec<String>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = Check::all())]
    checks: Vec<Check>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = KindArg::Adjusted)]
    kind: KindArg,
    #[arg(long, default_value_t = 12)]
    kmax: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Adjusted,
    Canonical,
}

impl From<KindArg> for MomentKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Adjusted => MomentKind::Adjusted,
            KindArg::Canonical => MomentKind::Canonical,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PathArg {
    A,
    Tilde,
    Classical,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    X,
    Shifted,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::X => Basis::X,
            BasisArg::Shifted => Basis::Shifted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum NormArg {
    Literature,
    Raw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
enum Check {
    Eigen,
    Exceptional,
    ThreeTerm,
    Orthogonality,
    Norm,
    Representation,
    Moments,
    Generating,
}

impl Check {
    fn all() -> Vec<Check> {
        Check::value_variants().to_vec()
    }
}

fn parse_route(s: &str) -> Result<Route, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Keys accepted in the config file. Flags take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    digits: Option<usize>,
    tol: Option<f64>,
    strategy: Option<Strategy>,
    levels: Option<usize>,
    target_rel_tol: Option<f64>,
    truncation_x_max: Option<f64>,
    tolerances: Option<Tolerances>,
}

struct Settings {
    digits: usize,
    tol: Option<f64>,
    quad: QuadratureConfig,
    tolerances: Tolerances,
}

fn load_file_config(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}

fn settings(file: FileConfig, common: &Common) -> Result<Settings, String> {
    let tolerances = file.tolerances.unwrap_or_default();
    let mut quad = QuadratureConfig {
        target_rel_tol: tolerances.quadrature_target,
        ..QuadratureConfig::default()
    };
    if let Some(s) = file.strategy {
        quad.strategy = s;
        if s == Strategy::GeneralizedGaussLaguerre && file.levels.is_none() {
            quad.levels = QuadratureConfig::gauss(200, quad.target_rel_tol).levels;
        }
    }
    if let Some(l) = file.levels {
        quad.levels = l;
    }
    if let Some(t) = file.target_rel_tol {
        quad.target_rel_tol = t;
    }
    quad.truncation_x_max = file.truncation_x_max;
    quad.validate().map_err(|e| e.to_string())?;
    let digits = common.digits.or(file.digits).unwrap_or(17);
    if !(1..=17).contains(&digits) {
        return Err(format!("--digits must be between 1 and 17, got {digits}"));
    }
    let tol = common.tol.or(file.tol);
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(format!("--tol must be positive, got {t}"));
        }
    }
    Ok(Settings {
        digits,
        tol,
        quad,
        tolerances,
    })
}

/// Run with the config path fallback taken from the environment.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::var_os(CONFIG_ENV).map(PathBuf::from))
}

/// Run with an explicit stand-in for `$X1LAG_CONFIG`.
pub fn run_with_env<I, T>(args: I, env_config: Option<PathBuf>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    let file = match cli.config.or(env_config) {
        Some(p) => match load_file_config(&p) {
            Ok(f) => f,
            Err(msg) => return Outcome::usage(msg),
        },
        None => FileConfig::default(),
    };
    let common = match &cli.command {
        Command::Moments(a) => &a.common,
        Command::Poly(a) => &a.common,
        Command::Verify(a) => &a.common,
        Command::Table(a) => &a.common,
    };
    let s = match settings(file, common) {
        Ok(s) => s,
        Err(msg) => return Outcome::usage(msg),
    };
    match cli.command {
        Command::Moments(a) => cmd_moments(&a, &s),
        Command::Poly(a) => cmd_poly(&a, &s),
        Command::Verify(a) => cmd_verify(&a, &s),
        Command::Table(a) => cmd_table(&a, &s),
    }
}

fn error_outcome(e: Error) -> Outcome {
    Outcome::usage(format!("error: {e}"))
}

fn moment_table(alpha: f64, kind: MomentKind, k_max: usize, route: Route, s: &Settings) -> crate::Result<MomentTable> {
    match kind {
        MomentKind::Adjusted => adjusted_table(alpha, k_max, route, &s.quad),
        MomentKind::Canonical => canonical_table(alpha, k_max, route, &s.quad),
    }
}

fn render_table(t: &MomentTable, format: Format, digits: usize) -> String {
    match format {
        Format::Csv => t.to_csv(digits),
        Format::Json => t.to_json() + "\n",
        Format::Text => {
            let mut out = format!("# {} moments, alpha = {}\n", t.kind, fmt_sig(t.alpha, digits));
            for (k, (v, r)) in t.values.iter().zip(&t.routes).enumerate() {
                let _ = writeln!(out, "{k:>4}  {:>26}  {r}", fmt_sig(*v, digits));
            }
            out
        }
    }
}

fn cmd_moments(a: &MomentsArgs, s: &Settings) -> Outcome {
    let kind = MomentKind::from(a.kind);
    let routes = if a.route.is_empty() {
        vec![match kind {
            MomentKind::Adjusted => Route::Recursion,
            MomentKind::Canonical => Route::Inversion,
        }]
    } else {
        a.route.clone()
    };
    let primary = match moment_table(a.alpha, kind, a.kmax, routes[0], s) {
        Ok(t) => t,
        Err(e) => return error_outcome(e),
    };
    let tol = s.tol.unwrap_or(s.tolerances.quadrature_rel);
    let mut report = String::new();
    for &route in &routes[1..] {
        let other = match moment_table(a.alpha, kind, a.kmax, route, s) {
            Ok(t) => t,
            Err(e) => return error_outcome(e),
        };
        for (k, (x, y)) in primary.values.iter().zip(&other.values).enumerate() {
            let d = crate::precision::rel_diff(*y, *x);
            if d > tol {
                let _ = writeln!(
                    report,
                    "k={k}: {}={} {}={} rel diff {d:.3e} > {tol:e}",
                    routes[0],
                    fmt_sig(*x, s.digits),
                    route,
                    fmt_sig(*y, s.digits)
                );
            }
        }
    }
    let stdout = render_table(&primary, a.format, s.digits);
    if report.is_empty() {
        Outcome::ok(stdout)
    } else {
        Outcome {
            code: 2,
            stdout,
            stderr: format!("route disagreement:\n{report}"),
        }
    }
}

fn cmd_table(a: &TableArgs, s: &Settings) -> Outcome {
    let kind = MomentKind::from(a.kind);
    let routes: &[Route] = match kind {
        MomentKind::Adjusted => &[
            Route::Recursion,
            Route::ClosedForm,
            Route::MatrixProduct,
            Route::GeneratingFunction,
            Route::Quadrature,
        ],
        MomentKind::Canonical => &[Route::Inversion, Route::Recursion, Route::Quadrature],
    };
    let tables: Vec<crate::Result<MomentTable>> = routes
        .par_iter()
        .map(|&r| moment_table(a.alpha, kind, a.kmax, r, s))
        .collect();
    let tables = match tables.into_iter().collect::<crate::Result<Vec<_>>>() {
        Ok(t) => t,
        Err(e) => return error_outcome(e),
    };
    let tol = s.tol.unwrap_or(s.tolerances.quadrature_rel);
    let spread: Vec<f64> = (0..=a.kmax)
        .map(|k| {
            let base = tables[0].values[k];
            tables
                .iter()
                .map(|t| crate::precision::rel_diff(t.values[k], base))
                .fold(0.0, f64::max)
        })
        .collect();
    let names: Vec<&str> = routes.iter().map(|r| r.as_str()).collect();
    let stdout = match a.format {
        Format::Json => {
            let columns: serde_json::Map<String, serde_json::Value> = names
                .iter()
                .zip(&tables)
                .map(|(n, t)| (n.to_string(), json!(t.values)))
                .collect();
            json!({
                "alpha": a.alpha,
                "kind": kind.to_string(),
                "routes": columns,
                "max_rel_diff": spread,
            })
            .to_string()
                + "\n"
        }
        Format::Csv | Format::Text => {
            let sep = if a.format == Format::Csv { "," } else { "  " };
            let mut out = format!("k{sep}{}{sep}max_rel_diff\n", names.join(sep));
            for k in 0..=a.kmax {
                let row: Vec<String> = tables.iter().map(|t| fmt_sig(t.values[k], s.digits)).collect();
                let _ = writeln!(out, "{k}{sep}{}{sep}{}", row.join(sep), fmt_sig(spread[k], 3));
            }
            out
        }
    };
    let worst = spread.iter().cloned().fold(0.0, f64::max);
    if worst > tol {
        Outcome {
            code: 2,
            stdout,
            stderr: format!("routes disagree: max relative difference {worst:.3e} > {tol:e}\n"),
        }
    } else {
        Outcome::ok(stdout)
    }
}

fn parse_alpha_q(s: &str) -> Result<Q, String> {
    let q = parse_rational(s).ok_or_else(|| format!("cannot parse alpha '{s}' as a rational number"))?;
    if q <= Q::from_integer(0.into()) {
        return Err(format!("domain error: alpha must be positive, got {s}"));
    }
    Ok(q)
}

fn parse_alpha_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .or_else(|_| parse_rational(s).map(|q| q_to_f64(&q)).ok_or(()))
        .map_err(|_| format!("cannot parse alpha '{s}'"))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(format!("domain error: alpha must be positive and finite, got {s}"));
    }
    Ok(v)
}

fn relative_discrepancy(p: &Poly<f64>, q: &Poly<f64>) -> f64 {
    let scale = q.max_abs_coeff().max(f64::MIN_POSITIVE);
    p.sub(q).max_abs_coeff() / scale
}

fn float_polynomial(
    path: PathArg,
    n: usize,
    alpha: f64,
    k: f64,
    norm: &Normalization<f64>,
) -> crate::Result<X1Polynomial<f64>> {
    let quad = QuadratureConfig::default();
    match path {
        PathArg::Tilde => {
            let t = adjusted_table(alpha, 2 * n, Route::Recursion, &quad)?;
            let (p, sol) = solve_polynomial(&build_matrix_a_tilde(n, &t, k)?, alpha, norm.clone())?;
            log::info!("tilde path n={n}: condition estimate {:.3e}", sol.condition);
            Ok(p)
        }
        PathArg::A => {
            let t = canonical_table(alpha, 2 * n, Route::Inversion, &quad)?;
            let (p, sol) = solve_polynomial(&build_matrix_a(n, &t, k)?, alpha, norm.clone())?;
            log::info!("A path n={n}: condition estimate {:.3e}", sol.condition);
            Ok(p)
        }
        PathArg::Classical => {
            let p = x1_from_classical(n, &alpha)?;
            let lit = literature_normalization(n, alpha)?;
            Ok(match norm {
                Normalization::Literature => p,
                Normalization::Raw(_) => p.scaled(&(k / lit)),
            })
        }
        PathArg::Both => unreachable!("handled by the caller"),
    }
}

fn exact_polynomial(path: PathArg, n: usize, alpha: &Q) -> crate::Result<X1Polynomial<Q>> {
    match path {
        PathArg::Tilde => solve_exact(n, Flavor::ATilde, alpha),
        PathArg::A => solve_exact(n, Flavor::A, alpha),
        PathArg::Classical => x1_from_classical(n, alpha),
        PathArg::Both => unreachable!("handled by the caller"),
    }
}

fn render_poly<C: Coefficient>(
    p: &X1Polynomial<C>,
    basis: Basis,
    format: Format,
    pretty: impl Fn(&Poly<C>) -> String,
    scalar: impl Fn(&C) -> String,
) -> String {
    match format {
        Format::Json => p.to_json(basis).to_string() + "\n",
        Format::Csv => {
            let mut out = String::from("k,coeff\n");
            for (k, c) in p.coeffs(basis).coeffs().iter().enumerate() {
                let _ = writeln!(out, "{k},{}", scalar(c));
            }
            out
        }
        Format::Text => format!("L_{}(x) = {}\n", p.n, pretty(p.coeffs(basis))),
    }
}

fn basis_var(basis: Basis) -> &'static str {
    match basis {
        Basis::X => "x",
        Basis::Shifted => "(x+alpha)",
    }
}

fn cmd_poly(a: &PolyArgs, s: &Settings) -> Outcome {
    if a.n == 0 {
        return Outcome::usage("error: no degree-0 member: the X1 family starts at n = 1");
    }
    let basis = Basis::from(a.basis);
    let var = basis_var(basis);
    let digits = s.digits;
    if a.exact {
        if a.normalization == NormArg::Raw {
            return Outcome::usage("error: --exact supports --normalization literature only");
        }
        let alpha = match parse_alpha_q(&a.alpha) {
            Ok(q) => q,
            Err(m) => return Outcome::usage(m),
        };
        let scalar = |c: &Q| crate::poly::fmt_q(c);
        let pretty = |p: &RationalPoly| p.pretty(var);
        if a.path == PathArg::Both {
            let (pa, pt) = match (
                exact_polynomial(PathArg::A, a.n, &alpha),
                exact_polynomial(PathArg::Tilde, a.n, &alpha),
            ) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(e), _) | (_, Err(e)) => return error_outcome(e),
            };
            let agree = pa.coeffs_x == pt.coeffs_x;
            let stdout = both_output(
                a.format,
                &pa,
                &pt,
                basis,
                if agree { 0.0 } else { f64::INFINITY },
                &pretty,
                &scalar,
            );
            return if agree {
                Outcome::ok(stdout)
            } else {
                Outcome {
                    code: 2,
                    stdout,
                    stderr: "representations disagree\n".into(),
                }
            };
        }
        return match exact_polynomial(a.path, a.n, &alpha) {
            Ok(p) => Outcome::ok(render_poly(&p, basis, a.format, pretty, scalar)),
            Err(e) => error_outcome(e),
        };
    }
    let alpha = match parse_alpha_f64(&a.alpha) {
        Ok(v) => v,
        Err(m) => return Outcome::usage(m),
    };
    let (k, norm) = match a.normalization {
        NormArg::Literature => match literature_normalization(a.n, alpha) {
            Ok(k) => (k, Normalization::Literature),
            Err(e) => return error_outcome(e),
        },
        NormArg::Raw => match a.k {
            Some(k) if k != 0.0 && k.is_finite() => (k, Normalization::Raw(k)),
            Some(_) => return error_outcome(Error::ZeroNormalization),
            None => return Outcome::usage("error: --normalization raw needs --k"),
        },
    };
    let scalar = |c: &f64| fmt_sig(*c, digits);
    let pretty = |p: &Poly<f64>| p.pretty(var, digits);
    if a.path == PathArg::Both {
        let (pa, pt) = match (
            float_polynomial(PathArg::A, a.n, alpha, k, &norm),
            float_polynomial(PathArg::Tilde, a.n, alpha, k, &norm),
        ) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(e), _) | (_, Err(e)) => return error_outcome(e),
        };
        let d = relative_discrepancy(&pa.coeffs_x, &pt.coeffs_x);
        let tol = s.tol.unwrap_or(s.tolerances.representation_rel);
        let stdout = both_output(a.format, &pa, &pt, basis, d, &pretty, &scalar);
        return if d <= tol {
            Outcome::ok(stdout)
        } else {
            Outcome {
                code: 2,
                stdout,
                stderr: format!("representations disagree: {d:.3e} > {tol:e}\n"),
            }
        };
    }
    match float_polynomial(a.path, a.n, alpha, k, &norm) {
        Ok(p) => Outcome::ok(render_poly(&p, basis, a.format, pretty, scalar)),
        Err(e) => error_outcome(e),
    }
}

fn both_output<C: Coefficient>(
    format: Format,
    pa: &X1Polynomial<C>,
    pt: &X1Polynomial<C>,
    basis: Basis,
    discrepancy: f64,
    pretty: &impl Fn(&Poly<C>) -> String,
    scalar: &impl Fn(&C) -> String,
) -> String {
    match format {
        Format::Json => {
            json!({
                "a": pa.to_json(basis),
                "tilde": pt.to_json(basis),
                "max_discrepancy": discrepancy,
            })
            .to_string()
                + "\n"
        }
        Format::Csv => {
            let mut out = String::from("k,a,tilde\n");
            for k in 0..=pa.n {
                let _ = writeln!(
                    out,
                    "{k},{},{}",
                    scalar(&pa.coeffs(basis).coeff(k)),
                    scalar(&pt.coeffs(basis).coeff(k))
                );
            }
            out
        }
        Format::Text => format!(
            "A:     {}\ntilde: {}\nmax discrepancy: {discrepancy:.3e}\n",
            pretty(pa.coeffs(basis)),
            pretty(pt.coeffs(basis))
        ),
    }
}

/// One line of the verification report.
#[derive(Clone, Debug, Serialize)]
struct Record {
    check: Check,
    n: usize,
    alpha: f64,
    residual: f64,
    tol: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn cells(checks: &[Check], alphas: &[(f64, Q)], nmax: usize) -> Vec<(Check, usize, f64, Q)> {
    let mut out = Vec::new();
    for &check in checks {
        let ns: Vec<usize> = match check {
            Check::ThreeTerm => (1..=nmax.saturating_sub(2)).collect(),
            Check::Moments | Check::Generating => vec![nmax],
            _ => (1..=nmax).collect(),
        };
        for (af, aq) in alphas {
            for &n in &ns {
                out.push((check, n, *af, aq.clone()));
            }
        }
    }
    out
}

fn exact_max_abs(p: &Poly<Q>) -> f64 {
    p.coeffs().iter().map(|c| q_to_f64(c).abs()).fold(0.0, f64::max)
}

/// Residual and tolerance of one (check, n, α) cell.
fn run_check(check: Check, n: usize, alpha: f64, aq: &Q, s: &Settings) -> crate::Result<(f64, f64)> {
    let t = &s.tolerances;
    let pick = |default: f64| s.tol.unwrap_or(default);
    let quad = &s.quad;
    match check {
        Check::Eigen => {
            let p = solve_exact(n, Flavor::ATilde, aq)?.coeffs_x;
            let lp = apply_operator(&p, aq)?;
            Ok((
                exact_max_abs(&lp.sub(&p.scale(&Q::from_integer((n as i64 - 1).into())))),
                0.0,
            ))
        }
        Check::Exceptional => {
            let adj = adjusted_table(alpha, 2 * n, Route::Recursion, quad)?;
            let k = literature_normalization(n, alpha)?;
            let (p, _) = solve_polynomial(&build_matrix_a_tilde(n, &adj, k)?, alpha, Normalization::Literature)?;
            let r = exceptional_condition_residual(&p.coeffs_x, &alpha);
            let scale = p.coeffs_x.max_abs_coeff();
            Ok((
                r.derivative_form.abs().max(r.coefficient_form.abs()) / scale,
                pick(t.exceptional_rel),
            ))
        }
        Check::ThreeTerm => {
            let l: Vec<Poly<Q>> = (n..=n + 2)
                .map(|m| x1_from_classical(m, aq).map(|p| p.coeffs_x))
                .collect::<crate::Result<_>>()?;
            Ok((exact_max_abs(&three_term_residual(&l[0], &l[1], &l[2], n, aq)), 0.0))
        }
        Check::Orthogonality => {
            let ln = x1_from_classical(n, &alpha)?.coeffs_x;
            let nn = inner_product(&ln, &ln, alpha, quad)?.value;
            let mut worst = 0.0_f64;
            for m in 1..n {
                let lm = x1_from_classical(m, &alpha)?.coeffs_x;
                let mm = inner_product(&lm, &lm, alpha, quad)?.value;
                let ip = inner_product(&lm, &ln, alpha, quad)?.value;
                worst = worst.max(ip.abs() / (mm * nn).sqrt());
            }
            Ok((worst, pick(t.orthogonality_rel)))
        }
        Check::Norm => {
            let ln = x1_from_classical(n, &alpha)?.coeffs_x;
            let q = inner_product(&ln, &ln, alpha, quad)?.value;
            Ok((
                crate::precision::rel_diff(q, literature_norm_squared(n, alpha)?),
                pick(t.norm_rel),
            ))
        }
        Check::Representation => {
            let k = literature_normalization(n, alpha)?;
            let pa = float_polynomial(PathArg::A, n, alpha, k, &Normalization::Literature)?;
            let pt = float_polynomial(PathArg::Tilde, n, alpha, k, &Normalization::Literature)?;
            Ok((
                relative_discrepancy(&pa.coeffs_x, &pt.coeffs_x),
                pick(t.representation_rel),
            ))
        }
        Check::Moments => {
            let k_max = 2 * n;
            let base = adjusted_table(alpha, k_max, Route::Recursion, quad)?;
            let mut worst = 0.0_f64;
            for route in [
                Route::ClosedForm,
                Route::MatrixProduct,
                Route::GeneratingFunction,
                Route::Quadrature,
            ] {
                worst = worst.max(base.max_rel_diff(&adjusted_table(alpha, k_max, route, quad)?).1);
            }
            let inv = canonical_table(alpha, k_max, Route::Inversion, quad)?;
            for route in [Route::Recursion, Route::Quadrature] {
                worst = worst.max(inv.max_rel_diff(&canonical_table(alpha, k_max, route, quad)?).1);
            }
            Ok((worst, pick(t.quadrature_rel)))
        }
        Check::Generating => {
            let k_max = 2 * n;
            let base = adjusted_table(alpha, k_max + 2, Route::Recursion, quad)?;
            let mut worst = crate::precision::rel_diff(generating_function(0.0, alpha)?, base.values[2]);
            for k in 0..=k_max {
                let v = taylor_coefficient(k, alpha)? * factorial_f64(k);
                worst = worst.max(crate::precision::rel_diff(v, base.values[k + 2]));
            }
            for tp in [-0.5, 0.0, 0.3, 0.7] {
                worst = worst.max(ode_residual(tp, alpha)?);
            }
            Ok((worst, pick(t.generating_rel)))
        }
    }
}

fn cmd_verify(a: &VerifyArgs, s: &Settings) -> Outcome {
    if a.nmax == 0 {
        return Outcome::usage("error: --nmax must be at least 1 (no degree-0 member)");
    }
    let mut alphas = Vec::new();
    for text in &a.alpha {
        match (parse_alpha_f64(text), parse_alpha_q(text)) {
            (Ok(f), Ok(q)) => alphas.push((f, q)),
            (Err(m), _) | (_, Err(m)) => return Outcome::usage(m),
        }
    }
    let mut checks = a.checks.clone();
    checks.sort();
    checks.dedup();
    let mut records: Vec<Record> = cells(&checks, &alphas, a.nmax)
        .into_par_iter()
        .map(|(check, n, alpha, aq)| match run_check(check, n, alpha, &aq, s) {
            Ok((residual, tol)) => Record {
                check,
                n,
                alpha,
                residual,
                tol,
                pass: residual <= tol,
                error: None,
            },
            Err(e) => Record {
                check,
                n,
                alpha,
                residual: f64::NAN,
                tol: 0.0,
                pass: false,
                error: Some(e.to_string()),
            },
        })
        .collect();
    records.sort_by(|x, y| {
        x.check
            .cmp(&y.check)
            .then(x.alpha.total_cmp(&y.alpha))
            .then(x.n.cmp(&y.n))
    });
    let passed = records.iter().all(|r| r.pass);
    let report = json!({ "passed": passed, "records": records });
    let stdout = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    if passed {
        Outcome::ok(stdout)
    } else {
        let failed = records.iter().filter(|r| !r.pass).count();
        Outcome {
            code: 2,
            stdout,
            stderr: format!("{failed} of {} checks failed\n", records.len()),
        }
    }
}
