use std::sync::Arc;

use muntz::arith::sieve_build;
use muntz::formulas::{
    gamma_zeta_preset, CaseId, FormulaCase, PresetId, ReportDocument, ReportEntry, Verifier,
};
use muntz::mellin::TestFunction;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::{parse_case, parse_function, ConfigError, Format, RunConfig};
use crate::points::{jitter, parse_complex, rng};
use crate::Status;

#[derive(Debug, Clone, Default, clap::Args)]
pub struct VerifyArgs {
    /// Case ids such as muntz-k1, quot-k3, left-k2, far-left-k1-m1.
    #[arg(long = "case", value_delimiter = ',')]
    pub cases: Vec<String>,
    /// Catalog functions: exp, gaussian, power3, power5, bump.
    #[arg(long = "function", value_delimiter = ',')]
    pub functions: Vec<String>,
    /// Sample points (default: the case's standard set).
    #[arg(long = "s", value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Vec<String>,
    /// Γ·ζ presets with f = e^{−x}, or `all`.
    #[arg(long = "preset", value_delimiter = ',')]
    pub presets: Vec<String>,
    /// Run the full case × function matrix and every preset.
    #[arg(long)]
    pub all: bool,
}

/// The (case, function) pairs run by `--all`: every case for the rapidly
/// decaying functions, and for the others the cases whose hypotheses they
/// meet and whose series converge within the default sieve.
pub fn full_matrix() -> Vec<(CaseId, &'static str)> {
    let mut out = Vec::new();
    for f in ["exp", "gaussian"] {
        out.extend(CaseId::standard().into_iter().map(|c| (c, f)));
    }
    let power5 = [
        CaseId::MuntzK(1),
        CaseId::MuntzK(2),
        CaseId::MuntzK(3),
        CaseId::MuntzZeta2,
        CaseId::QuotK(1),
        CaseId::QuotK(2),
        CaseId::QuotK(3),
        CaseId::QuotK(4),
        CaseId::LeftStripK(1),
        CaseId::LeftStripK(2),
    ];
    out.extend(power5.into_iter().map(|c| (c, "power5")));
    out.extend([CaseId::MuntzK(1), CaseId::QuotK(1)].into_iter().map(|c| (c, "power3")));
    out.extend([CaseId::MuntzK(1), CaseId::MuntzZeta2, CaseId::LeftStripK(1)].into_iter().map(|c| (c, "bump")));
    out
}

struct Task {
    case: FormulaCase,
    function: TestFunction,
    points: Vec<Complex64>,
    preset: Option<PresetId>,
}

fn plan(args: &VerifyArgs, config: &RunConfig) -> Result<Vec<Task>, ConfigError> {
    let explicit: Vec<Complex64> = args.points.iter().map(|p| parse_complex(p)).collect::<Result<_, _>>()?;
    let mut cases: Vec<CaseId> = args.cases.iter().map(|c| parse_case(c)).collect::<Result<_, _>>()?;
    if cases.is_empty() {
        cases = config.cases.clone();
    }
    let mut functions: Vec<String> = args.functions.iter().map(|f| parse_function(f)).collect::<Result<_, _>>()?;
    if functions.is_empty() {
        functions = config.functions.clone();
    }
    if functions.is_empty() {
        functions.push("exp".into());
    }
    let mut presets = Vec::new();
    for p in &args.presets {
        if p == "all" {
            presets.extend(PresetId::all());
        } else {
            presets.push(p.parse::<PresetId>()?);
        }
    }
    if args.all {
        presets.extend(PresetId::all());
    }
    presets.sort();
    presets.dedup();
    let pairs: Vec<(CaseId, String)> = if args.all {
        full_matrix().into_iter().map(|(c, f)| (c, f.to_string())).collect()
    } else {
        cases
            .iter()
            .flat_map(|&c| functions.iter().map(move |f| (c, f.clone())))
            .collect()
    };
    if pairs.is_empty() && presets.is_empty() {
        return Err(ConfigError("nothing to verify: give --case, --preset or --all".into()));
    }
    let mut jitter_rng = config.seed.map(rng);
    let mut tasks = Vec::new();
    for (id, name) in pairs {
        let case = FormulaCase::new(id)?;
        let function = TestFunction::by_name(&name)?;
        case.check_class(&function)?;
        let mut points = if explicit.is_empty() { case.default_samples() } else { explicit.clone() };
        if let (Some(r), true) = (jitter_rng.as_mut(), explicit.is_empty()) {
            points = jitter(&points, r);
        }
        for &s in &points {
            case.check_point(s)?;
        }
        tasks.push(Task { case, function, points, preset: None });
    }
    for p in presets {
        let case = FormulaCase::new(p.case())?;
        let points = if explicit.is_empty() { vec![p.default_point()] } else { explicit.clone() };
        for &s in &points {
            case.check_point(s)?;
        }
        tasks.push(Task { case, function: TestFunction::exp_decay(), points, preset: Some(p) });
    }
    Ok(tasks)
}

fn run_task(verifier: &Verifier, task: &Task, tol: f64) -> ReportEntry {
    let id = task.case.id();
    match task.preset {
        None => {
            let r = verifier.verify(&task.case, &task.function, &task.points, tol);
            ReportEntry::from_result(id, task.function.name(), r)
        }
        Some(p) => {
            let reports: Result<Vec<_>, _> = task
                .points
                .iter()
                .map(|&s| gamma_zeta_preset(verifier, p, s, tol.min(p.default_tol())))
                .collect();
            let merged = reports.map(|mut rs| {
                let mut first = rs.remove(0);
                for r in rs {
                    if !r.passed() {
                        first.verdict = r.verdict;
                    }
                    first.points.extend(r.points);
                }
                first
            });
            ReportEntry::from_result(id, task.function.name(), merged).with_preset(p)
        }
    }
}

pub fn run(args: &VerifyArgs, config: &RunConfig) -> Result<Status, ConfigError> {
    let tasks = plan(args, config)?;
    let table = Arc::new(sieve_build(config.sieve_limit)?);
    let verifier = Verifier::new(table);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = config.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| ConfigError(e.to_string()))?;
    let entries: Vec<ReportEntry> = pool.install(|| tasks.par_iter().map(|t| run_task(&verifier, t, config.tol)).collect());
    let doc = ReportDocument::new(config.tol, config.sieve_limit, entries);
    for e in &doc.entries {
        let label = match e.preset {
            Some(p) => format!("{p} ({})", e.case),
            None => format!("{} {}", e.case, e.function),
        };
        match (&e.report, &e.error) {
            (Some(r), _) => {
                eprintln!("{label}: {} (max rel err {:.2e})", if r.passed() { "pass" } else { "FAIL" }, r.max_rel_err());
                for p in r.points.iter().filter(|p| !p.pass) {
                    eprintln!("  failing at s = {}: rel err {:.2e}", p.s, p.rel_err);
                }
            }
            (None, err) => eprintln!("{label}: ERROR {}", err.as_deref().unwrap_or("")),
        }
    }
    let text = match config.format {
        Format::Json => doc.to_json()? + "\n",
        Format::Csv => doc.to_csv()?,
    };
    config.emit(&text)?;
    Ok(if doc.passed() { Status::Pass } else { Status::Fail })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_respects_hypotheses() {
        for (id, f) in full_matrix() {
            let case = FormulaCase::new(id).unwrap();
            let function = TestFunction::by_name(f).unwrap();
            assert!(case.check_class(&function).is_ok(), "{id} {f}");
        }
    }

    #[test]
    fn plan_rejects_class_violation() {
        let args = VerifyArgs { cases: vec!["quot-k3".into()], functions: vec!["power3".into()], ..Default::default() };
        let err = plan(&args, &RunConfig::default()).err().unwrap();
        assert!(err.0.contains("hypothesis"), "{err}");
    }

    #[test]
    fn plan_rejects_point_outside_strip() {
        let args = VerifyArgs { cases: vec!["muntz-k1".into()], points: vec!["1.5".into()], ..Default::default() };
        assert!(plan(&args, &RunConfig::default()).is_err());
    }

    #[test]
    fn seeded_plans_agree() {
        let args = VerifyArgs { cases: vec!["muntz-k1".into(), "left-k1".into()], ..Default::default() };
        let config = RunConfig { seed: Some(3), ..Default::default() };
        let a: Vec<_> = plan(&args, &config).unwrap().into_iter().map(|t| t.points).collect();
        let b: Vec<_> = plan(&args, &config).unwrap().into_iter().map(|t| t.points).collect();
        assert_eq!(a, b);
        let plain: Vec<_> = plan(&args, &RunConfig::default()).unwrap().into_iter().map(|t| t.points).collect();
        assert_ne!(a, plain);
    }
}
