//! Report rows and their two serializations.
//!
//! One report = one command run: a `command` tag, homogeneous `rows`, and
//! an optional `error` carrying the first failure (rows computed before the
//! failure are kept — partial results are flushed, not discarded). CSV gets
//! the error as a trailing `# error: …` comment line; JSON embeds it as an
//! object, and the whole envelope is described by
//! `schemas/output.schema.json` shipped with this crate.
//!
//! Numbers print through Rust's shortest-round-trip float formatting, so a
//! fixed config and thread count reproduce reports byte for byte. Undefined
//! ratios serialize as `null` (never 0 or NaN): a dead main term makes the
//! ratio meaningless, and a plotting script must see that, not a fake zero.

use std::io::Write;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, Serialize)]
pub struct CountRow {
    pub poly: String,
    pub a1: i64,
    pub a2: i64,
    pub n: u64,
    pub exact: u64,
    pub weighted: f64,
    pub main_weighted: f64,
    pub main_unweighted: f64,
    pub ratio_weighted: Option<f64>,
    pub ratio_unweighted: Option<f64>,
    pub series_value: f64,
    pub series_tail_bound: f64,
    pub elapsed_s: f64,
}

/// A [`CountRow`] without the timing column: sweeps exist to be diffed,
/// and elapsed time is the one field two identical runs never share.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub poly: String,
    pub a1: i64,
    pub a2: i64,
    pub n: u64,
    pub exact: u64,
    pub weighted: f64,
    pub main_weighted: f64,
    pub main_unweighted: f64,
    pub ratio_weighted: Option<f64>,
    pub ratio_unweighted: Option<f64>,
    pub series_value: f64,
    pub series_tail_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PredictRow {
    pub poly: String,
    pub a1: i64,
    pub a2: i64,
    pub n: u64,
    pub main_weighted: f64,
    pub main_unweighted: f64,
    pub series_value: f64,
    pub series_tail_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesRow {
    pub poly: String,
    pub a1: i64,
    pub a2: i64,
    pub trunc_p: u64,
    pub trunc_q: u64,
    pub euler_value: f64,
    pub euler_tail_bound: f64,
    /// Modulus-sum value; only defined for the plain difference form.
    pub qsum_value: Option<f64>,
    /// |euler_value − qsum_value|, when both exist.
    pub agreement_delta: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BiasRow {
    pub poly: String,
    pub a1: i64,
    pub a2: i64,
    pub n: u64,
    pub p: u64,
    pub theoretical: f64,
    pub empirical: f64,
    /// empirical − theoretical (signed).
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyRow {
    pub check: String,
    pub poly: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub detail: String,
    pub status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Row {
    Count(CountRow),
    Sweep(SweepRow),
    Predict(PredictRow),
    Series(SeriesRow),
    Bias(BiasRow),
    Verify(VerifyRow),
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorObject>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorObject {
    pub message: String,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, rows: Vec::new(), error: None }
    }

    pub fn fail(command: &'static str, message: String) -> Self {
        Report { command, rows: Vec::new(), error: Some(ErrorObject { message }) }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(self).expect("report serialization");
                text.push('\n');
                text
            }
            Format::Csv => self.render_csv(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(csv_header(self.command));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        if let Some(err) = &self.error {
            // Comment trailer: parsers that split on commas never see it as
            // a data row, and a human tailing the file sees why it stopped.
            out.push_str(&format!("# error: {}\n", err.message.replace('\n', " ")));
        }
        out
    }

    /// Writes the rendered report to `--out` or stdout.
    pub fn emit(&self, cfg_format: Format, out: Option<&std::path::Path>) -> Result<()> {
        let text = self.render(cfg_format);
        match out {
            Some(path) => std::fs::write(path, text)
                .with_context(|| format!("writing report to {}", path.display())),
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(text.as_bytes()).context("writing report to stdout")
            }
        }
    }

    pub fn emit_for(&self, cfg: &RunConfig) -> Result<()> {
        self.emit(cfg.format, cfg.out.as_deref())
    }
}

pub fn csv_header(command: &str) -> &'static str {
    match command {
        "count" => {
            "poly,a1,a2,N,exact,weighted,main_weighted,main_unweighted,\
             ratio_weighted,ratio_unweighted,series_value,series_tail_bound,elapsed_s"
        }
        "sweep" => {
            "poly,a1,a2,N,exact,weighted,main_weighted,main_unweighted,\
             ratio_weighted,ratio_unweighted,series_value,series_tail_bound"
        }
        "predict" => "poly,a1,a2,N,main_weighted,main_unweighted,series_value,series_tail_bound",
        "series" => "poly,a1,a2,trunc_p,trunc_q,euler_value,euler_tail_bound,qsum_value,agreement_delta",
        "bias" => "poly,a1,a2,N,p,theoretical,empirical,deviation",
        "verify" => "check,poly,N,detail,status",
        other => unreachable!("no CSV layout for command {other}"),
    }
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_else(|| "null".into())
}

impl Row {
    fn csv_line(&self) -> String {
        match self {
            Row::Count(r) => format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.poly,
                r.a1,
                r.a2,
                r.n,
                r.exact,
                num(r.weighted),
                num(r.main_weighted),
                num(r.main_unweighted),
                opt(r.ratio_weighted),
                opt(r.ratio_unweighted),
                num(r.series_value),
                num(r.series_tail_bound),
                num(r.elapsed_s),
            ),
            Row::Sweep(r) => format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.poly,
                r.a1,
                r.a2,
                r.n,
                r.exact,
                num(r.weighted),
                num(r.main_weighted),
                num(r.main_unweighted),
                opt(r.ratio_weighted),
                opt(r.ratio_unweighted),
                num(r.series_value),
                num(r.series_tail_bound),
            ),
            Row::Predict(r) => format!(
                "{},{},{},{},{},{},{},{}",
                r.poly,
                r.a1,
                r.a2,
                r.n,
                num(r.main_weighted),
                num(r.main_unweighted),
                num(r.series_value),
                num(r.series_tail_bound),
            ),
            Row::Series(r) => format!(
                "{},{},{},{},{},{},{},{},{}",
                r.poly,
                r.a1,
                r.a2,
                r.trunc_p,
                r.trunc_q,
                num(r.euler_value),
                num(r.euler_tail_bound),
                opt(r.qsum_value),
                opt(r.agreement_delta),
            ),
            Row::Bias(r) => format!(
                "{},{},{},{},{},{},{},{}",
                r.poly,
                r.a1,
                r.a2,
                r.n,
                r.p,
                num(r.theoretical),
                num(r.empirical),
                num(r.deviation),
            ),
            Row::Verify(r) => format!(
                "{},{},{},{},{}",
                r.check,
                r.poly,
                r.n.map(|v| v.to_string()).unwrap_or_else(|| "null".into()),
                r.detail,
                match r.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                },
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_count_row() -> CountRow {
        CountRow {
            poly: "x^2".into(),
            a1: 1,
            a2: -1,
            n: 10,
            exact: 2,
            weighted: 9.135,
            main_weighted: 14.07,
            main_unweighted: 2.65,
            ratio_weighted: Some(0.649),
            ratio_unweighted: Some(0.754),
            series_value: 1.0,
            series_tail_bound: 1e-5,
            elapsed_s: 0.002,
        }
    }

    #[test]
    fn csv_rows_match_headers() {
        let mut report = Report::new("count");
        report.rows.push(Row::Count(sample_count_row()));
        let text = report.render(Format::Csv);
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        let row = lines.next().unwrap();
        assert_eq!(header.split(',').count(), row.split(',').count());
        assert!(row.starts_with("x^2,1,-1,10,2,"));
    }

    #[test]
    fn null_ratios_render_as_null_everywhere() {
        let mut row = sample_count_row();
        row.ratio_weighted = None;
        row.ratio_unweighted = None;
        let mut report = Report::new("count");
        report.rows.push(Row::Count(row));

        let csv = report.render(Format::Csv);
        assert!(csv.contains(",null,null,"), "{csv}");

        let json = report.render(Format::Json);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(value["rows"][0]["ratio_weighted"].is_null());
        assert!(value["rows"][0]["ratio_unweighted"].is_null());
    }

    #[test]
    fn error_trailer_forms() {
        let mut report = Report::fail("count", "bad input".into());
        report.rows.push(Row::Count(sample_count_row()));
        let csv = report.render(Format::Csv);
        assert!(csv.trim_end().ends_with("# error: bad input"));
        let json: serde_json::Value =
            serde_json::from_str(&report.render(Format::Json)).unwrap();
        assert_eq!(json["error"]["message"], "bad input");
        assert_eq!(json["rows"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn every_command_has_a_header() {
        for cmd in ["count", "predict", "series", "bias", "verify", "sweep"] {
            assert!(!csv_header(cmd).is_empty());
        }
    }
}
