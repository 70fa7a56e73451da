//! Command-line front end: `eval`, `profile`, `verify` and `sample`.
//!
//! Settings come from flags and, optionally, a flat TOML file given with
//! `--config`; flags win over the file. Exit codes: 0 on success, 1 on a
//! configuration or I/O error, 2 when verification fails.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::controls::NumericControls;
use crate::eval::{evaluate, EvalRequest, Method, PointResult};
use crate::kernels::mass_positive_halfline;
use crate::laws::GenGammaLaw;
use crate::order::EquationOrder;
use crate::stable::{
    empirical_cf, first_passage_cdf, ks_statistic, mean_and_stderr, median, sample_gen_gamma,
    sample_skewed_stable, sample_zn, zn_cf, CompositionSpec, SampleBatch, Sampler,
};
use crate::verify::run_verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

/// Header of `eval` CSV output.
pub const EVAL_HEADER: &str = "x,t,value,abs_err,method,nodes";

#[derive(Debug, Parser)]
#[command(name = "pseudoheat", version, about = "Fundamental solutions of higher-order heat equations and their stable compositions")]
pub struct Cli {
    /// Flat TOML file with default settings; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate u_m(x, t) on a grid.
    Eval(GridArgs),
    /// Tabulate profiles for several orders and report zero crossings.
    Profile(GridArgs),
    /// Run the identity checks and print a pass/fail report.
    Verify(VerifyArgs),
    /// Draw samples from a stable composition or generalized gamma law.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawKind {
    /// Positive stable subordinator T_alpha(t).
    Subordinator,
    /// Iterated composition Z_n of the third-order pseudo-process.
    Zn,
    /// Generalized gamma law.
    GenGamma,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Numeric tolerance: sets both the series and quadrature tolerances.
    #[arg(long)]
    pub tol: Option<f64>,
    /// RNG seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo sample count (accepts forms like 1e5).
    #[arg(long, value_parser = parse_count)]
    pub mc: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Equation order(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<u32>,
    /// Explicit x values, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<f64>,
    /// Uniform grid `a:b:n`.
    #[arg(long, allow_hyphen_values = true)]
    pub x_range: Option<String>,
    /// Time values, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<f64>,
    #[arg(long)]
    pub method: Option<Method>,
    /// Use the mirrored odd-order equation (x -> -x).
    #[arg(long)]
    pub mirror: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    /// Restrict to these check names or groups, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub law: Option<LawKind>,
    /// Stability index of the subordinator.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Composition depth n of Z_n.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Shape of the generalized gamma law.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Summary file; standard output when samples go to `--out`, else standard error.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    m: Option<OneOrMany<u32>>,
    x: Option<OneOrMany<f64>>,
    x_range: Option<String>,
    t: Option<OneOrMany<f64>>,
    method: Option<String>,
    mirror: Option<bool>,
    tol: Option<f64>,
    seed: Option<u64>,
    mc: Option<f64>,
    format: Option<Format>,
    out: Option<PathBuf>,
    only: Option<Vec<String>>,
    law: Option<LawKind>,
    alpha: Option<f64>,
    depth: Option<u32>,
    gamma: Option<f64>,
    summary: Option<PathBuf>,
    series_rel_tol: Option<f64>,
    series_max_terms: Option<usize>,
    quad_abs_tol: Option<f64>,
    quad_cutoff_decades: Option<f64>,
}

/// Failure of a command before or while writing its output.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<crate::Error> for ConfigError {
    fn from(e: crate::Error) -> Self {
        ConfigError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, ConfigError>;

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    count_from_f64(v)
}

fn count_from_f64(v: f64) -> std::result::Result<usize, String> {
    if v >= 1.0 && v.fract() == 0.0 && v <= 1e12 {
        Ok(v as usize)
    } else {
        Err(format!("sample count must be a positive integer, got {v}"))
    }
}

/// Parses `a:b:n` into `n` equally spaced points from `a` to `b`.
pub fn parse_range(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || ConfigError(format!("x-range `{s}` must look like a:b:n"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() || (n == 1 && a != b) {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

fn load_file(path: Option<&Path>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| ConfigError(format!("invalid config {}: {e}", path.display())))
}

struct Settings {
    controls: NumericControls,
    format: Format,
    out: Option<PathBuf>,
}

fn settings(common: &CommonArgs, file: &FileConfig) -> CliResult<Settings> {
    let mut controls = NumericControls::default();
    if let Some(v) = file.series_rel_tol {
        controls.series_rel_tol = v;
    }
    if let Some(v) = file.series_max_terms {
        controls.series_max_terms = v;
    }
    if let Some(v) = file.quad_abs_tol {
        controls.quad_abs_tol = v;
    }
    if let Some(v) = file.quad_cutoff_decades {
        controls.quad_cutoff_decades = v;
    }
    if let Some(tol) = common.tol.or(file.tol) {
        controls.series_rel_tol = tol;
        controls.quad_abs_tol = tol;
    }
    if let Some(seed) = common.seed.or(file.seed) {
        controls.rng_seed = seed;
    }
    let mc = match (common.mc, file.mc) {
        (Some(n), _) => Some(n),
        (None, Some(v)) => Some(count_from_f64(v).map_err(ConfigError)?),
        _ => None,
    };
    if let Some(n) = mc {
        controls.mc_samples = n;
    }
    controls.validate()?;
    Ok(Settings {
        controls,
        format: common.format.or(file.format).unwrap_or(Format::Csv),
        out: common.out.clone().or_else(|| file.out.clone()),
    })
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| ConfigError(format!("cannot write output: {e}"))),
    }
}

struct Grid {
    orders: Vec<EquationOrder>,
    xs: Vec<f64>,
    ts: Vec<f64>,
    method: Method,
}

fn grid(args: &GridArgs, file: &FileConfig, default_m: &[u32], default_range: &str) -> CliResult<Grid> {
    let ms = if !args.m.is_empty() {
        args.m.clone()
    } else {
        file.m.clone().map(OneOrMany::into_vec).unwrap_or_else(|| default_m.to_vec())
    };
    let mirror = args.mirror || file.mirror.unwrap_or(false);
    let mut orders = Vec::with_capacity(ms.len());
    for m in ms {
        let o = EquationOrder::new(m)?;
        if mirror && !o.is_odd() {
            return Err(ConfigError(format!("--mirror applies to odd orders only, got m={m}")));
        }
        orders.push(if mirror { o.mirrored() } else { o });
    }
    let xs = if !args.x.is_empty() {
        args.x.clone()
    } else if let Some(r) = &args.x_range {
        parse_range(r)?
    } else if let Some(x) = &file.x {
        x.clone().into_vec()
    } else if let Some(r) = &file.x_range {
        parse_range(r)?
    } else {
        parse_range(default_range)?
    };
    let ts = if !args.t.is_empty() {
        args.t.clone()
    } else {
        file.t.clone().map(OneOrMany::into_vec).unwrap_or_else(|| vec![1.0])
    };
    if xs.is_empty() || ts.is_empty() {
        return Err(ConfigError("empty x or t grid".into()));
    }
    if let Some(bad) = xs.iter().find(|x| !x.is_finite()) {
        return Err(ConfigError(format!("x must be finite, got {bad}")));
    }
    if let Some(bad) = ts.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(ConfigError(format!("t must be positive and finite, got {bad}")));
    }
    let method = match (args.method, &file.method) {
        (Some(m), _) => m,
        (None, Some(s)) => s.parse().map_err(ConfigError)?,
        _ => Method::Auto,
    };
    Ok(Grid { orders, xs, ts, method })
}

#[derive(Serialize)]
struct EvalJsonRow {
    x: f64,
    t: f64,
    value: Option<f64>,
    abs_err: Option<f64>,
    method: String,
    nodes: usize,
    status: String,
}

fn eval_rows(grid: &Grid, controls: NumericControls) -> Vec<PointResult> {
    let points: Vec<(f64, f64)> = grid
        .ts
        .iter()
        .flat_map(|&t| grid.xs.iter().map(move |&x| (x, t)))
        .collect();
    let request = EvalRequest::new(grid.orders[0], points)
        .with_method(grid.method)
        .with_controls(controls);
    evaluate(&request)
}

/// Renders `eval` results as CSV.
pub fn render_eval_csv(rows: &[PointResult]) -> String {
    let mut out = String::from(EVAL_HEADER);
    out.push('\n');
    for r in rows {
        match &r.outcome {
            Ok(v) => {
                let _ = writeln!(out, "{},{},{},{},{},{}", r.x, r.t, v.value, v.abs_err, v.method.name(), v.nodes);
            }
            Err(e) => {
                let _ = writeln!(out, "{},{},,,error:{},0", r.x, r.t, e.kind());
            }
        }
    }
    out
}

fn render_eval_json(rows: &[PointResult]) -> String {
    let json: Vec<EvalJsonRow> = rows
        .iter()
        .map(|r| match &r.outcome {
            Ok(v) => EvalJsonRow {
                x: r.x,
                t: r.t,
                value: Some(v.value),
                abs_err: Some(v.abs_err),
                method: v.method.name().into(),
                nodes: v.nodes,
                status: "ok".into(),
            },
            Err(e) => EvalJsonRow {
                x: r.x,
                t: r.t,
                value: None,
                abs_err: None,
                method: String::new(),
                nodes: 0,
                status: format!("error:{}: {e}", e.kind()),
            },
        })
        .collect();
    serde_json::to_string_pretty(&json).expect("rows serialize") + "\n"
}

fn cmd_eval(args: &GridArgs, file: &FileConfig, stdout: &mut dyn Write) -> CliResult<i32> {
    let s = settings(&args.common, file)?;
    let g = grid(args, file, &[3], "0:0:1")?;
    if g.orders.len() != 1 {
        return Err(ConfigError("eval takes exactly one order; use profile for several".into()));
    }
    let rows = eval_rows(&g, s.controls);
    let text = match s.format {
        Format::Csv => render_eval_csv(&rows),
        Format::Json => render_eval_json(&rows),
    };
    emit(s.out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

/// Sign changes of `values` on the grid, located by linear interpolation.
pub fn zero_crossings(xs: &[f64], values: &[Option<f64>]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..xs.len() {
        if let (Some(a), Some(b)) = (values[i - 1], values[i]) {
            if a == 0.0 && i == 1 {
                out.push(xs[0]);
            }
            if (a < 0.0 && b >= 0.0 && !(b == 0.0 && i + 1 < xs.len() && values[i + 1].is_some_and(|c| c < 0.0)))
                || (a > 0.0 && b <= 0.0 && !(b == 0.0 && i + 1 < xs.len() && values[i + 1].is_some_and(|c| c > 0.0)))
            {
                out.push(xs[i - 1] + (xs[i] - xs[i - 1]) * a / (a - b));
            }
        }
    }
    out
}

#[derive(Serialize)]
struct ProfileColumn {
    name: String,
    values: Vec<Option<f64>>,
    zero_crossings: Vec<f64>,
    negative_side_crossings: usize,
    peak_x: Option<f64>,
    mass_positive: Option<f64>,
    asymmetry: Option<f64>,
}

#[derive(Serialize)]
struct ProfileJson {
    t: f64,
    x: Vec<f64>,
    columns: Vec<ProfileColumn>,
}

fn cmd_profile(args: &GridArgs, file: &FileConfig, stdout: &mut dyn Write) -> CliResult<i32> {
    let s = settings(&args.common, file)?;
    let g = grid(args, file, &[3, 5, 7], "-5:5:201")?;
    if g.ts.len() != 1 {
        return Err(ConfigError("profile takes a single time".into()));
    }
    let t = g.ts[0];
    let mut columns = Vec::new();
    for &order in &g.orders {
        let single = Grid {
            orders: vec![order],
            xs: g.xs.clone(),
            ts: vec![t],
            method: g.method,
        };
        let values: Vec<Option<f64>> = eval_rows(&single, s.controls)
            .into_iter()
            .map(|r| r.outcome.ok().map(|v| v.value))
            .collect();
        let crossings = zero_crossings(&g.xs, &values);
        let negative = crossings.iter().filter(|&&x| x < 0.0).count();
        let peak_x = g
            .xs
            .iter()
            .zip(&values)
            .filter_map(|(&x, v)| v.map(|v| (x, v)))
            .fold(None, |best: Option<(f64, f64)>, (x, v)| match best {
                Some((_, bv)) if bv >= v => best,
                _ => Some((x, v)),
            })
            .map(|(x, _)| x);
        let base = EquationOrder::new(order.m())?;
        let mass = mass_positive_halfline(base, t, &s.controls).ok().map(|r| {
            if order.is_mirrored() {
                1.0 - r.value
            } else {
                r.value
            }
        });
        columns.push(ProfileColumn {
            name: format!("u_{}", order.m()),
            values,
            zero_crossings: crossings,
            negative_side_crossings: negative,
            peak_x,
            mass_positive: mass,
            asymmetry: mass.map(|m| (m - 0.5).abs()),
        });
    }
    let text = match s.format {
        Format::Json => {
            let json = ProfileJson {
                t,
                x: g.xs.clone(),
                columns,
            };
            serde_json::to_string_pretty(&json).expect("profile serializes") + "\n"
        }
        Format::Csv => {
            let mut out = String::from("x,t");
            for c in &columns {
                out.push(',');
                out.push_str(&c.name);
            }
            out.push('\n');
            for (i, x) in g.xs.iter().enumerate() {
                let _ = write!(out, "{x},{t}");
                for c in &columns {
                    match c.values[i] {
                        Some(v) => {
                            let _ = write!(out, ",{v}");
                        }
                        None => out.push(','),
                    }
                }
                out.push('\n');
            }
            for c in &columns {
                let locs: Vec<String> = c.zero_crossings.iter().map(|x| format!("{x:.6}")).collect();
                let _ = writeln!(
                    out,
                    "# {} zero_crossings={} negative_side={} at [{}]",
                    c.name,
                    c.zero_crossings.len(),
                    c.negative_side_crossings,
                    locs.join(" ")
                );
                let fmt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_else(|| "n/a".into());
                let _ = writeln!(
                    out,
                    "# {} peak_x={} mass_positive={} asymmetry={}",
                    c.name,
                    fmt(c.peak_x),
                    fmt(c.mass_positive),
                    fmt(c.asymmetry)
                );
            }
            out
        }
    };
    emit(s.out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, file: &FileConfig, stdout: &mut dyn Write) -> CliResult<i32> {
    let s = settings(&args.common, file)?;
    let only = if !args.only.is_empty() {
        args.only.clone()
    } else {
        file.only.clone().unwrap_or_default()
    };
    let report = run_verify(&s.controls, &only)?;
    let text = match s.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    emit(s.out.as_deref(), &text, stdout)?;
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_VERIFY })
}

struct SummaryLine {
    statistic: String,
    value: f64,
    reference: Option<f64>,
    stderr: Option<f64>,
}

fn summarize(kind: LawKind, batch: &SampleBatch, alpha: f64, spec: Option<&CompositionSpec>, law: Option<&GenGammaLaw>, t: f64) -> Vec<SummaryLine> {
    let n = batch.values.len() as f64;
    let mut lines = Vec::new();
    match kind {
        LawKind::Subordinator => {
            for lambda in [0.5f64, 1.0, 2.0] {
                let (mean, se) = mean_and_stderr(&batch.values, |x| (-lambda * x).exp());
                lines.push(SummaryLine {
                    statistic: format!("laplace(lambda={lambda})"),
                    value: mean,
                    reference: Some((-lambda.powf(alpha) * t).exp()),
                    stderr: Some(se),
                });
            }
            if alpha == 0.5 {
                lines.push(SummaryLine {
                    statistic: "ks_first_passage".into(),
                    value: ks_statistic(&batch.values, |x| first_passage_cdf(x, t)),
                    reference: None,
                    stderr: None,
                });
            }
        }
        LawKind::Zn => {
            let spec = spec.expect("composition spec");
            for beta in [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0] {
                let emp = empirical_cf(&batch.values, beta);
                let exact = zn_cf(spec, beta);
                for (part, v, r) in [("re", emp.re, exact.re), ("im", emp.im, exact.im)] {
                    lines.push(SummaryLine {
                        statistic: format!("cf_{part}(beta={beta})"),
                        value: v,
                        reference: Some(r),
                        stderr: Some(1.0 / n.sqrt()),
                    });
                }
            }
            let law = spec.law();
            lines.push(SummaryLine {
                statistic: "median".into(),
                value: median(&batch.values),
                reference: (spec.depth() == 1).then(|| law.cauchy_location()),
                stderr: (spec.depth() == 1)
                    .then(|| std::f64::consts::PI * law.cauchy_scale() / (2.0 * n.sqrt())),
            });
        }
        LawKind::GenGamma => {
            let law = law.expect("gen-gamma law");
            let g = law.shape();
            let (mean, se) = mean_and_stderr(&batch.values, |x| x.powf(g));
            lines.push(SummaryLine {
                statistic: "mean(x^gamma)".into(),
                value: mean,
                reference: Some(law.t()),
                stderr: Some(se),
            });
            lines.push(SummaryLine {
                statistic: "ks".into(),
                value: ks_statistic(&batch.values, |x| law.cdf(x)),
                reference: None,
                stderr: None,
            });
        }
    }
    lines
}

fn cmd_sample(args: &SampleArgs, file: &FileConfig, stdout: &mut dyn Write) -> CliResult<i32> {
    let s = settings(&args.common, file)?;
    let kind = args
        .law
        .or(file.law)
        .ok_or_else(|| ConfigError("sample needs --law subordinator|zn|gen-gamma".into()))?;
    let t = args.t.or_else(|| file.t.clone().and_then(|t| t.into_vec().first().copied())).unwrap_or(1.0);
    let count = s.controls.mc_samples;
    let mut sampler = Sampler::new(s.controls.rng_seed);
    let alpha = args.alpha.or(file.alpha).unwrap_or(0.5);
    let mut spec = None;
    let mut gg = None;
    let batch = match kind {
        LawKind::Subordinator => sample_skewed_stable(alpha, t, count, &mut sampler)?,
        LawKind::Zn => {
            let c = CompositionSpec::new(args.depth.or(file.depth).unwrap_or(1), t)?;
            spec = Some(c);
            sample_zn(&c, count, &mut sampler)?
        }
        LawKind::GenGamma => {
            let law = GenGammaLaw::new(args.gamma.or(file.gamma).unwrap_or(3.0), t)?;
            gg = Some(law);
            sample_gen_gamma(&law, count, &mut sampler)?
        }
    };
    let mut samples = String::with_capacity(batch.values.len() * 24);
    for v in &batch.values {
        let _ = writeln!(samples, "{v}");
    }
    let lines = summarize(kind, &batch, alpha, spec.as_ref(), gg.as_ref(), t);
    let opt = |v: Option<f64>| v.map(|v| format!("{v:.6e}")).unwrap_or_default();
    let summary = match s.format {
        Format::Csv => {
            let mut out = format!("# law={} seed={} count={}\nstatistic,value,reference,stderr\n", batch.law_tag, batch.seed, batch.values.len());
            for l in &lines {
                let _ = writeln!(out, "{},{:.6e},{},{}", l.statistic, l.value, opt(l.reference), opt(l.stderr));
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = lines
                .iter()
                .map(|l| {
                    serde_json::json!({
                        "statistic": l.statistic,
                        "value": l.value,
                        "reference": l.reference,
                        "stderr": l.stderr,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "law": batch.law_tag,
                "seed": batch.seed,
                "count": batch.values.len(),
                "summary": rows,
            });
            serde_json::to_string_pretty(&doc).expect("summary serializes") + "\n"
        }
    };
    let summary_path = args.summary.clone().or_else(|| file.summary.clone());
    match (&s.out, &summary_path) {
        (Some(out), Some(sp)) => {
            emit(Some(out), &samples, stdout)?;
            emit(Some(sp), &summary, stdout)?;
        }
        (Some(out), None) => {
            emit(Some(out), &samples, stdout)?;
            emit(None, &summary, stdout)?;
        }
        (None, Some(sp)) => {
            emit(None, &samples, stdout)?;
            emit(Some(sp), &summary, stdout)?;
        }
        (None, None) => {
            emit(None, &samples, stdout)?;
            eprint!("{summary}");
        }
    }
    Ok(EXIT_OK)
}

/// Runs the command line `args` (including the program name), writing
/// results to `stdout` and diagnostics to standard error. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            if e.use_stderr() {
                let _ = e.print();
            } else {
                let _ = write!(stdout, "{e}");
            }
            return code;
        }
    };
    let result = load_file(cli.config.as_deref()).and_then(|file| match &cli.command {
        Command::Eval(a) => cmd_eval(a, &file, stdout),
        Command::Profile(a) => cmd_profile(a, &file, stdout),
        Command::Verify(a) => cmd_verify(a, &file, stdout),
        Command::Sample(a) => cmd_sample(a, &file, stdout),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}
