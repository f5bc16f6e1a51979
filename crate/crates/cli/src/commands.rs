use muntz::arith::{closed_form, dirichlet_partial, sieve_build, SeriesId};
use muntz::formulas::{compare_residue, line_identity, LineIdentityReport, REPORT_SCHEMA};
use muntz::mellin::TestFunction;
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{ConfigError, Format, RunConfig};
use crate::points::parse_complex;
use crate::Status;

/// Default tolerance of the line identity.
pub const LINE_TOL: f64 = 1e-7;
const DEFAULT_X: [f64; 3] = [0.5, 1.0, 2.0];
const DEFAULT_DIRICHLET_S: [&str; 3] = ["2", "3", "2+5i"];

#[derive(Debug, Clone, clap::Args)]
pub struct DirichletArgs {
    /// Points with Re s > 1.
    #[arg(long = "s", value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Vec<String>,
    /// Number of terms in each partial sum.
    #[arg(long, default_value_t = 100_000)]
    pub limit: u64,
    /// Streams to check (default: the full suite).
    #[arg(long = "series", value_delimiter = ',')]
    pub series: Vec<String>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ResidueArgs {
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long = "x", value_delimiter = ',')]
    pub x: Vec<f64>,
    /// Use ζ^k(s)/ζ(2s) instead of ζ^k(s).
    #[arg(long)]
    pub quotient: bool,
    /// The pole: 1, or a non-positive integer.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub pole: i64,
    #[arg(long, default_value = "exp")]
    pub function: String,
}

#[derive(Debug, Clone, clap::Args)]
pub struct LineArgs {
    /// Streams to check (default: the full suite).
    #[arg(long = "series", value_delimiter = ',')]
    pub series: Vec<String>,
    #[arg(long = "x", value_delimiter = ',')]
    pub x: Vec<f64>,
    #[arg(long, default_value = "exp")]
    pub function: String,
}

#[derive(Debug, Clone, clap::Args)]
pub struct TableArgs {
    /// Last n written.
    #[arg(long = "max-n", default_value_t = 100)]
    pub max_n: u64,
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    schema: u32,
    rows: &'a [T],
}

fn render<T: Serialize>(rows: &[T], format: Format) -> Result<String, ConfigError> {
    let err = |e: String| ConfigError(format!("cannot serialize report: {e}"));
    match format {
        Format::Json => serde_json::to_string_pretty(&Document { schema: REPORT_SCHEMA, rows })
            .map(|s| s + "\n")
            .map_err(|e| err(e.to_string())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| err(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| err(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| err(e.to_string()))
        }
    }
}

fn series_list(names: &[String]) -> Result<Vec<SeriesId>, ConfigError> {
    if names.is_empty() {
        return Ok(SeriesId::SUITE.to_vec());
    }
    names.iter().map(|n| Ok(n.parse::<SeriesId>()?)).collect()
}

fn x_list(x: &[f64]) -> Result<Vec<f64>, ConfigError> {
    if let Some(bad) = x.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(ConfigError(format!("x must be positive, got {bad}")));
    }
    Ok(if x.is_empty() { DEFAULT_X.to_vec() } else { x.to_vec() })
}

#[derive(Debug, Serialize)]
struct DirichletRow {
    series: SeriesId,
    s_re: f64,
    s_im: f64,
    terms: u64,
    partial_re: f64,
    partial_im: f64,
    closed_re: f64,
    closed_im: f64,
    abs_err: f64,
    rel_err: f64,
    tail_bound: f64,
    pass: bool,
}

/// Partial sums against closed forms; a row fails when the difference
/// exceeds the rigorous tail bound plus rounding.
pub fn dirichlet(args: &DirichletArgs, config: &RunConfig) -> Result<Status, ConfigError> {
    let points: Vec<Complex64> = if args.points.is_empty() {
        DEFAULT_DIRICHLET_S.iter().map(|p| parse_complex(p)).collect::<Result<_, _>>()?
    } else {
        args.points.iter().map(|p| parse_complex(p)).collect::<Result<_, _>>()?
    };
    if let Some(p) = points.iter().find(|p| !(p.re > 1.0)) {
        return Err(ConfigError(format!("Dirichlet series diverge for Re s <= 1 (s = {p})")));
    }
    let ids = series_list(&args.series)?;
    let table = sieve_build(args.limit.max(10))?;
    let mut rows = Vec::new();
    for &s in &points {
        for &id in &ids {
            let partial = dirichlet_partial(&table, id, s, args.limit)?;
            let exact = closed_form(id, s)?;
            let abs_err = (partial.value - exact).norm();
            let rounding = 64.0 * f64::EPSILON * exact.norm().max(1.0);
            let pass = abs_err <= partial.tail_bound + rounding;
            if !pass {
                eprintln!("{id} at s = {s}: |error| {abs_err:.3e} exceeds tail bound {:.3e}", partial.tail_bound);
            }
            rows.push(DirichletRow {
                series: id,
                s_re: s.re,
                s_im: s.im,
                terms: args.limit,
                partial_re: partial.value.re,
                partial_im: partial.value.im,
                closed_re: exact.re,
                closed_im: exact.im,
                abs_err,
                rel_err: abs_err / exact.norm(),
                tail_bound: partial.tail_bound,
                pass,
            });
        }
    }
    config.emit(&render(&rows, config.format)?)?;
    Ok(if rows.iter().all(|r| r.pass) { Status::Pass } else { Status::Fail })
}

#[derive(Debug, Serialize)]
struct ResidueRow {
    family: &'static str,
    k: u32,
    pole: i64,
    x: f64,
    function: String,
    closed_form: Option<f64>,
    numeric: f64,
    radius_02: f64,
    radius_03: f64,
    difference: Option<f64>,
    radius_spread: f64,
    pass: bool,
}

/// Closed-form residues against contour integrals.
pub fn residue(args: &ResidueArgs, config: &RunConfig) -> Result<Status, ConfigError> {
    let f = TestFunction::by_name(&args.function)?;
    let mut rows = Vec::new();
    for x in x_list(&args.x)? {
        let c = compare_residue(&f, args.k, args.quotient, args.pole, x)?;
        if !c.pass {
            eprintln!("{} k = {} pole {} at x = {x}: routes disagree", c.family, c.k, c.pole);
        }
        rows.push(ResidueRow {
            family: c.family,
            k: c.k,
            pole: c.pole,
            x: c.x,
            function: c.function,
            closed_form: c.closed_form,
            numeric: c.numeric,
            radius_02: c.radius_values[0],
            radius_03: c.radius_values[1],
            difference: c.difference,
            radius_spread: c.radius_spread,
            pass: c.pass,
        });
    }
    config.emit(&render(&rows, config.format)?)?;
    Ok(if rows.iter().all(|r| r.pass) { Status::Pass } else { Status::Fail })
}

/// The Dirichlet-series inversion identity on Re s = 2.
pub fn line(args: &LineArgs, config: &RunConfig) -> Result<Status, ConfigError> {
    let f = TestFunction::by_name(&args.function)?;
    let ids = series_list(&args.series)?;
    let xs = x_list(&args.x)?;
    let table = sieve_build(config.sieve_limit)?;
    let mut rows: Vec<LineIdentityReport> = Vec::new();
    for &id in &ids {
        for &x in &xs {
            let r = line_identity(&table, id, &f, x, config.tol, config.t_max)?;
            if !r.pass {
                eprintln!("{id} at x = {x}: rel err {:.3e}", r.rel_err);
            }
            rows.push(r);
        }
    }
    config.emit(&render(&rows, config.format)?)?;
    Ok(if rows.iter().all(|r| r.pass) { Status::Pass } else { Status::Fail })
}

/// n, μ, ω, d, d₃, d₄ as CSV.
pub fn table(args: &TableArgs, config: &RunConfig) -> Result<Status, ConfigError> {
    let table = sieve_build(args.max_n.max(10))?;
    let mut buf = Vec::new();
    table.write_csv(&mut buf, args.max_n)?;
    let text = String::from_utf8(buf).map_err(|e| ConfigError(e.to_string()))?;
    config.emit(&text)?;
    Ok(Status::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rows_are_flat() {
        let rows = vec![DirichletRow {
            series: SeriesId::Mu,
            s_re: 2.0,
            s_im: 0.0,
            terms: 10,
            partial_re: 0.6,
            partial_im: 0.0,
            closed_re: 0.6,
            closed_im: 0.0,
            abs_err: 0.0,
            rel_err: 0.0,
            tail_bound: 0.1,
            pass: true,
        }];
        let csv = render(&rows, Format::Csv).unwrap();
        assert!(csv.starts_with("series,s_re,s_im,terms"));
        assert!(csv.lines().nth(1).unwrap().starts_with("mu,2.0,0.0,10"));
        let json: serde_json::Value = serde_json::from_str(&render(&rows, Format::Json).unwrap()).unwrap();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["rows"][0]["series"], "mu");
    }

    #[test]
    fn x_must_be_positive() {
        assert!(x_list(&[1.0, -1.0]).is_err());
        assert_eq!(x_list(&[]).unwrap(), DEFAULT_X.to_vec());
    }
}
