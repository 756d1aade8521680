use std::collections::BTreeMap;
use std::fmt::Write as _;

use ainf::bar::{Certificate, Window};
use ainf::complex::Ranks;

/// An ordered list of `key=value` facts plus an overall verdict.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, String)>,
    failed: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// Records a check; any failing check makes the report fail.
    pub fn check(&mut self, key: impl Into<String>, ok: bool) {
        self.failed |= !ok;
        self.push(key, if ok { "pass" } else { "fail" });
    }

    pub fn passed(&self) -> bool {
        !self.failed
    }

    /// One entry per degree of the window, zeros included.
    pub fn ranks(&mut self, prefix: &str, ranks: &Ranks, window: Window) {
        for d in window.lo..=window.hi {
            self.push(format!("{prefix}.h{d}"), ranks.get(&d).copied().unwrap_or(0));
        }
    }

    pub fn certificate(&mut self, prefix: &str, c: &Certificate) {
        self.push(format!("{prefix}.status"), c.status);
        self.push(format!("{prefix}.n_used"), c.n_used);
        self.push(format!("{prefix}.window"), format!("{}..{}", c.window.lo, c.window.hi));
    }

    /// The machine-readable form, one `key=value` per line.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            writeln!(out, "{k}={v}").unwrap();
        }
        writeln!(out, "verdict={}", if self.passed() { "pass" } else { "fail" }).unwrap();
        out
    }

    /// The same facts grouped by their first key segment.
    pub fn to_pretty(&self) -> String {
        let mut groups: Vec<(String, Vec<(String, String)>)> = Vec::new();
        for (k, v) in &self.entries {
            let (head, rest) = k.split_once('.').unwrap_or((k.as_str(), ""));
            match groups.last_mut() {
                Some((h, items)) if h == head => items.push((rest.to_string(), v.clone())),
                _ => groups.push((head.to_string(), vec![(rest.to_string(), v.clone())])),
            }
        }
        let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (head, items) in groups {
            if items.len() == 1 && items[0].0.is_empty() {
                writeln!(out, "{head:<width$}  {}", items[0].1).unwrap();
                continue;
            }
            writeln!(out, "{head}").unwrap();
            for (rest, v) in items {
                let key = if rest.is_empty() { "  (value)".to_string() } else { format!("  {rest}") };
                writeln!(out, "{key:<width$}  {v}").unwrap();
            }
        }
        writeln!(out, "{:<width$}  {}", "verdict", if self.passed() { "pass" } else { "fail" }).unwrap();
        out
    }

    /// Reads back the pretty form; used to show both renderings carry the same facts.
    pub fn parse_pretty(text: &str) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        let mut head = String::new();
        for line in text.lines() {
            let indented = line.starts_with("  ");
            let body = line.trim_start();
            match body.split_once("  ") {
                None => head = body.to_string(),
                Some((k, v)) => {
                    let k = k.trim_end();
                    let key = if !indented {
                        k.to_string()
                    } else if k == "(value)" {
                        head.clone()
                    } else {
                        format!("{head}.{k}")
                    };
                    out.insert(key, v.trim_start().to_string());
                }
            }
        }
        out
    }
}
