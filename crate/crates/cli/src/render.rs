use std::fmt::Write as _;

use anyhow::Result;
use serde_json::Value;

use scroll_ulrich::beilinson::ResolutionReport;

use crate::config::Format;

/// A result document: JSON always, plus an optional dedicated markdown form.
pub struct Doc {
    pub value: Value,
    markdown: Option<String>,
}

impl Doc {
    pub fn plain(value: Value) -> Self {
        Doc {
            value,
            markdown: None,
        }
    }

    pub fn with_markdown(value: Value, markdown: String) -> Self {
        Doc {
            value,
            markdown: Some(markdown),
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            // serde_json maps are ordered by key, so output is stable
            Format::Json => serde_json::to_string_pretty(&self.value)?,
            Format::Markdown => match &self.markdown {
                Some(md) => md.trim_end().to_string(),
                None => key_value_markdown(&self.value),
            },
        })
    }
}

fn key_value_markdown(v: &Value) -> String {
    let mut s = String::from("| key | value |\n|---|---|\n");
    if let Value::Object(map) = v {
        for (k, x) in map {
            let cell = match x {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(s, "| {k} | {} |", cell.replace('|', "\\|"));
        }
    }
    s.trim_end().to_string()
}

pub fn complex_markdown(r: &ResolutionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:?} for {} on {}\n", r.shape, r.input, r.variety);
    let _ = writeln!(s, "| position | term |\n|---|---|");
    for t in &r.terms {
        let _ = writeln!(s, "| {} | {} |", t.position, t.sheaf);
    }
    let _ = writeln!(s, "\n| multiplicity | value |\n|---|---|");
    for m in &r.multiplicities {
        let _ = writeln!(s, "| {} | {} |", m.label, m.value);
    }
    let c = r.checks;
    let _ = writeln!(
        s,
        "\nrank_ok = {}, ch_ok = {}, chi_grid_ok = {}, pattern_ok = {}",
        c.rank_ok, c.ch_ok, c.chi_grid_ok, c.pattern_ok
    );
    s
}

pub fn suite_markdown(summary: &[String], first_failure: Option<&str>) -> String {
    let mut s = String::from("| check | status |\n|---|---|\n");
    for line in summary {
        let (name, status) = line.split_once(": ").unwrap_or((line, ""));
        let _ = writeln!(s, "| {name} | {status} |");
    }
    if let Some(f) = first_failure {
        let _ = writeln!(s, "\nfirst failure: {f}");
    }
    s
}
