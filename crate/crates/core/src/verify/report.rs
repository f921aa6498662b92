use std::str::FromStr;

use serde::Serialize;

use super::{Report, ReportEntry};
use crate::arith::{parse_fraction, to_decimal_string};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Md,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" => Ok(Format::Md),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(report).map_err(|e| Error::Config(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => csv(report),
        Format::Md => Ok(markdown(report)),
    }
}

fn joined_params(e: &ReportEntry) -> String {
    e.params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn status_name(e: &ReportEntry) -> String {
    serde_json::to_value(e.status)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn csv(report: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(e.to_string());
    w.write_record([
        "identity",
        "params",
        "lhs",
        "rhs",
        "status",
        "bound",
        "elapsed_ms",
    ])
    .map_err(io)?;
    for e in &report.entries {
        w.write_record([
            e.identity.as_str(),
            &joined_params(e),
            &e.lhs,
            &e.rhs,
            &status_name(e),
            e.bound.as_deref().unwrap_or(""),
            &e.elapsed_ms.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

fn decimal(s: &str) -> String {
    parse_fraction(s)
        .map(|x| to_decimal_string(&x, 20))
        .unwrap_or_else(|_| s.to_string())
}

fn markdown(report: &Report) -> String {
    let s = &report.summary;
    let mut out = format!(
        "# Verification report\n\npass_exact: {}, pass_within_bound: {}, fail: {}, wall_ms: {}\n\n",
        s.pass_exact, s.pass_within_bound, s.fail, s.wall_ms
    );
    out.push_str(
        "| identity | params | lhs | rhs | lhs (decimal) | status | bound | elapsed_ms |\n",
    );
    out.push_str("|---|---|---|---|---|---|---|---|\n");
    for e in &report.entries {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
            e.identity,
            joined_params(e),
            e.lhs,
            e.rhs,
            decimal(&e.lhs),
            status_name(e),
            e.bound.as_deref().unwrap_or(""),
            e.elapsed_ms
        ));
    }
    out
}
