use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use muntz::formulas::{CaseId, DEFAULT_T_MAX};
use muntz::mellin::TestFunction;

/// Smallest tolerance accepted from flags or files.
pub const MIN_TOL: f64 = 1e-12;

/// A configuration problem; always reported with exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<muntz::Error> for ConfigError {
    fn from(e: muntz::Error) -> Self {
        ConfigError(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(ConfigError(format!("unknown format '{s}' (json or csv)"))),
        }
    }
}

/// Settings shared by every subcommand, after merging file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tol: f64,
    pub sieve_limit: u64,
    pub t_max: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub cases: Vec<CaseId>,
    pub functions: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            sieve_limit: 1_000_000,
            t_max: DEFAULT_T_MAX,
            out: None,
            format: Format::Json,
            seed: None,
            jobs: None,
            cases: Vec::new(),
            functions: Vec::new(),
        }
    }
}

/// Values given on the command line; `None` leaves the file or default.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct CommonFlags {
    /// Relative tolerance of every check.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Largest n in the arithmetic tables.
    #[arg(long = "sieve-limit")]
    pub sieve_limit: Option<u64>,
    /// Cap on the truncation height of line integrals.
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Jitter default sample points by up to ±0.02 with this seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Flat key=value file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_list<T>(value: &str, parse: impl Fn(&str) -> Result<T, ConfigError>) -> Result<Vec<T>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(parse)
        .collect()
}

pub fn parse_case(name: &str) -> Result<CaseId, ConfigError> {
    Ok(name.parse::<CaseId>()?)
}

pub fn parse_function(name: &str) -> Result<String, ConfigError> {
    TestFunction::by_name(name)?;
    Ok(name.to_string())
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError(format!("{key}: cannot parse '{value}'")))
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    parse_text(&text)
}

pub fn parse_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("line {}: expected key=value", i + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

impl RunConfig {
    fn apply_file(&mut self, map: &BTreeMap<String, String>) -> Result<(), ConfigError> {
        for (k, v) in map {
            match k.as_str() {
                "tol" => self.tol = number(k, v)?,
                "sieve-limit" => self.sieve_limit = number(k, v)?,
                "t-max" => self.t_max = number(k, v)?,
                "out" => self.out = Some(PathBuf::from(v)),
                "format" => self.format = v.parse()?,
                "seed" => self.seed = Some(number(k, v)?),
                "jobs" => self.jobs = Some(number(k, v)?),
                "cases" => self.cases = parse_list(v, parse_case)?,
                "functions" => self.functions = parse_list(v, parse_function)?,
                other => return Err(ConfigError(format!("unknown config key '{other}'"))),
            }
        }
        Ok(())
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(flags: &CommonFlags) -> Result<Self, ConfigError> {
        Self::resolve_from(RunConfig::default(), flags)
    }

    /// As [`RunConfig::resolve`], starting from `base` instead of the defaults.
    pub fn resolve_from(base: RunConfig, flags: &CommonFlags) -> Result<Self, ConfigError> {
        let mut c = base;
        if let Some(path) = &flags.config {
            c.apply_file(&read_file(path)?)?;
        }
        if let Some(v) = flags.tol {
            c.tol = v;
        }
        if let Some(v) = flags.sieve_limit {
            c.sieve_limit = v;
        }
        if let Some(v) = flags.t_max {
            c.t_max = v;
        }
        if let Some(v) = &flags.out {
            c.out = Some(v.clone());
        }
        if let Some(v) = flags.format {
            c.format = v;
        }
        if let Some(v) = flags.seed {
            c.seed = Some(v);
        }
        if let Some(v) = flags.jobs {
            c.jobs = Some(v);
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.tol >= MIN_TOL) || !self.tol.is_finite() {
            return Err(ConfigError(format!("tol must be at least {MIN_TOL:e}, got {}", self.tol)));
        }
        if self.sieve_limit < 10 {
            return Err(ConfigError(format!("sieve-limit must be at least 10, got {}", self.sieve_limit)));
        }
        if !(self.t_max >= 10.0) {
            return Err(ConfigError(format!("t-max must be at least 10, got {}", self.t_max)));
        }
        if self.jobs == Some(0) {
            return Err(ConfigError("jobs must be positive".into()));
        }
        Ok(())
    }

    /// Writes `text` to the configured file or to standard output.
    pub fn emit(&self, text: &str) -> Result<(), ConfigError> {
        match &self.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}
