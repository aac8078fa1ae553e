//! Deterministic rendering of operation results.
//!
//! A report is an ordered list of scalar items and list blocks; the two
//! output modes render the same data either as an indented human-readable
//! text report or as line-oriented `key=value` pairs for machine diffing.

use std::fmt::Display;
use std::fmt::Write as _;

/// Output format selected by `--out`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputMode {
    #[default]
    Text,
    Kv,
}

impl OutputMode {
    pub fn parse(s: &str) -> Option<OutputMode> {
        match s {
            "text" => Some(OutputMode::Text),
            "kv" => Some(OutputMode::Kv),
            _ => None,
        }
    }
}

enum Entry {
    Item(String, String),
    List(String, Vec<String>),
}

/// Ordered result entries of one operation.
#[derive(Default)]
pub struct Report {
    entries: Vec<Entry>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    /// Appends a scalar `key = value` entry.
    pub fn item(&mut self, key: &str, value: impl Display) {
        self.entries.push(Entry::Item(key.to_string(), value.to_string()));
    }

    /// Appends a list block (possibly empty).
    pub fn list(&mut self, key: &str, items: Vec<String>) {
        self.entries.push(Entry::List(key.to_string(), items));
    }

    /// Appends a list block holding the lines of a multi-line display.
    pub fn lines(&mut self, key: &str, value: impl Display) {
        let items = value.to_string().lines().map(str::to_string).collect();
        self.list(key, items);
    }

    pub fn render(&self, mode: OutputMode) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match (mode, e) {
                (OutputMode::Text, Entry::Item(k, v)) => {
                    writeln!(out, "{k} = {v}").unwrap();
                }
                (OutputMode::Text, Entry::List(k, items)) => {
                    if items.is_empty() {
                        writeln!(out, "{k}: none").unwrap();
                    } else {
                        writeln!(out, "{k}:").unwrap();
                        for it in items {
                            writeln!(out, "  {it}").unwrap();
                        }
                    }
                }
                (OutputMode::Kv, Entry::Item(k, v)) => {
                    writeln!(out, "{k}={v}").unwrap();
                }
                (OutputMode::Kv, Entry::List(k, items)) => {
                    writeln!(out, "{k}.count={}", items.len()).unwrap();
                    for (i, it) in items.iter().enumerate() {
                        writeln!(out, "{k}.{i}={it}").unwrap();
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_mode_indents_lists_and_marks_empty_ones() {
        let mut r = Report::new();
        r.item("dim", 3);
        r.list("basis", vec!["x".into(), "y".into()]);
        r.list("extra", Vec::new());
        assert_eq!(r.render(OutputMode::Text), "dim = 3\nbasis:\n  x\n  y\nextra: none\n");
    }

    #[test]
    fn kv_mode_is_line_oriented() {
        let mut r = Report::new();
        r.item("dim", 3);
        r.list("basis", vec!["x".into()]);
        assert_eq!(r.render(OutputMode::Kv), "dim=3\nbasis.count=1\nbasis.0=x\n");
    }
}
