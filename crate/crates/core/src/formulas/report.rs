use serde::Serialize;

use super::case::CaseId;
use super::preset::PresetId;
use super::verify::VerificationReport;
use crate::error::{Error, Result};

/// Version of the JSON layout written by [`ReportDocument::to_json`].
pub const REPORT_SCHEMA: u32 = 1;

/// The outcome of one (case, function) task: a report, or the error that
/// stopped it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub case: CaseId,
    pub function: String,
    /// Set when the entry comes from a Γ·ζ preset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<PresetId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ReportEntry {
    pub fn from_result(case: CaseId, function: &str, result: Result<VerificationReport>) -> Self {
        match result {
            Ok(r) => Self { case, function: function.to_string(), preset: None, report: Some(r), error: None },
            Err(e) => Self { case, function: function.to_string(), preset: None, report: None, error: Some(e.to_string()) },
        }
    }

    pub fn with_preset(mut self, preset: PresetId) -> Self {
        self.preset = Some(preset);
        self
    }

    pub fn passed(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.passed())
    }
}

/// A run's reports in a fixed order, with the settings that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub tol: f64,
    pub sieve_limit: u64,
    pub entries: Vec<ReportEntry>,
}

const CSV_HEADER: [&str; 20] = [
    "case",
    "function",
    "preset",
    "s_re",
    "s_im",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "abs_err",
    "rel_err",
    "series_tail",
    "inner_quadrature",
    "outer_quadrature",
    "residue",
    "endpoint",
    "truncation",
    "x_lo",
    "x_hi",
    "status",
];

impl ReportDocument {
    /// Entries are sorted by (case, function) so output does not depend on
    /// the order tasks finished in.
    pub fn new(tol: f64, sieve_limit: u64, mut entries: Vec<ReportEntry>) -> Self {
        entries.sort_by(|a, b| (a.case, &a.function, a.preset).cmp(&(b.case, &b.function, b.preset)));
        Self { schema: REPORT_SCHEMA, tol, sieve_limit, entries }
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// One row per sample point; a failed task gives one row with its error
    /// in the status column.
    pub fn to_csv(&self) -> Result<String> {
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).map_err(ser)?;
        for entry in &self.entries {
            let case = entry.case.to_string();
            let preset = entry.preset.map(|p| p.to_string()).unwrap_or_default();
            match (&entry.report, &entry.error) {
                (Some(r), _) => {
                    for p in &r.points {
                        let b = &p.budget;
                        let nums = [
                            p.s.re, p.s.im, p.lhs.re, p.lhs.im, p.rhs.re, p.rhs.im, p.abs_err, p.rel_err,
                            b.series_tail, b.inner_quadrature, b.outer_quadrature, b.residue, b.endpoint,
                            b.truncation, r.x_lo, r.x_hi,
                        ];
                        let mut row = vec![case.clone(), entry.function.clone(), preset.clone()];
                        row.extend(nums.iter().map(|v| format!("{v:e}")));
                        row.push(if p.pass { "pass" } else { "fail" }.to_string());
                        w.write_record(&row).map_err(ser)?;
                    }
                }
                (None, err) => {
                    let mut row = vec![case.clone(), entry.function.clone(), preset.clone()];
                    row.extend(std::iter::repeat(String::new()).take(CSV_HEADER.len() - 4));
                    row.push(format!("error: {}", err.as_deref().unwrap_or("unknown")));
                    w.write_record(&row).map_err(ser)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
    }
}
