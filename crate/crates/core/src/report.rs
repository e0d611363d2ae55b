//! Text and JSON renderings of verification reports.

use std::fmt::Write;

use crate::pipeline::{ExampleReport, Status, SuiteReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (text or json)")),
        }
    }
}

/// Render a report. Timings are printed only when asked for, so that the
/// default output is identical across runs.
pub fn emit_report(report: &SuiteReport, format: Format, timings: bool) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => emit_text(report, timings),
    }
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Skip => "skip",
    }
}

fn example_text(out: &mut String, e: &ExampleReport, timings: bool) {
    let head = if e.passed { "PASS" } else { "FAIL" };
    let _ = write!(out, "== {} {head}", e.name);
    if timings {
        let _ = write!(out, " ({:.3}s)", e.elapsed.as_secs_f64());
    }
    out.push('\n');
    for c in &e.checks {
        let _ = write!(out, "  {:<4} {:<24} {:<4}  {}", c.id, c.name, status(c.status), c.detail);
        if timings {
            let _ = write!(out, "  [{:.3}s]", c.elapsed.as_secs_f64());
        }
        out.push('\n');
        for w in &c.witnesses {
            let _ = writeln!(out, "         ! {w}");
        }
        for n in &c.notes {
            let _ = writeln!(out, "         note: {n}");
        }
    }
}

fn emit_text(report: &SuiteReport, timings: bool) -> String {
    let mut out = String::new();
    for e in &report.examples {
        example_text(&mut out, e, timings);
        out.push('\n');
    }
    if report.examples.len() > 1 {
        let _ = writeln!(out, "{:<18} {:<22} {}", "example", "configuration", "verdict");
        for e in &report.examples {
            let v = e.verdict.map(|v| v.as_str()).unwrap_or("-");
            let _ = writeln!(out, "{:<18} {:<22} {v}", e.name, e.configuration());
        }
        out.push('\n');
    }
    let _ = write!(out, "{}/{} examples pass", report.passed, report.total);
    if timings {
        let _ = write!(out, " in {:.2}s", report.elapsed.as_secs_f64());
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::SCHEMA;
    use std::time::Duration;

    fn empty() -> SuiteReport {
        SuiteReport {
            schema: SCHEMA,
            seed: 0,
            max_ext_degree: 4,
            passed: 0,
            total: 0,
            examples: vec![],
            elapsed: Duration::ZERO,
        }
    }

    #[test]
    fn empty_report_is_a_valid_document() {
        let j = emit_report(&empty(), Format::Json, false);
        let v: serde_json::Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["examples"].as_array().unwrap().len(), 0);
        assert_eq!(emit_report(&empty(), Format::Text, false), "0/0 examples pass\n");
    }
}
