//! Line-oriented `key=value` records used by the decision and replay logs.
//!
//! A record is a single line of space-separated `key=value` fields. Keys are
//! ASCII identifiers, values never contain whitespace or `=`. Missing values
//! are written as `NA`. Seconds and minutes use 2 decimals, rule strengths
//! 4 decimals.

use std::fmt;

use crate::fuzzy::FuzzyOutcome;

pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Record {
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl fmt::Display) {
        self.fields.push((key.to_string(), value.to_string()));
    }

    pub fn push_fixed(&mut self, key: &str, value: f64, decimals: usize) {
        self.push(key, format!("{value:.decimals$}"));
    }

    pub fn push_opt_fixed(&mut self, key: &str, value: Option<f64>, decimals: usize) {
        match value {
            Some(v) => self.push_fixed(key, v, decimals),
            None => self.push(key, "NA"),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    /// Parses one record line. Returns `None` for a malformed field.
    pub fn parse(line: &str) -> Option<Self> {
        let mut fields = Vec::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok.split_once('=')?;
            if k.is_empty() || v.contains('=') {
                return None;
            }
            fields.push((k.to_string(), v.to_string()));
        }
        Some(Self { fields })
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// `r1:0.0000,r2:0.1200,...` (1-based rule numbers), or `-` without a trace.
pub fn fired_list(trace: Option<&FuzzyOutcome>) -> String {
    match trace {
        Some(t) if !t.fired.is_empty() => t
            .fired
            .iter()
            .map(|f| format!("r{}:{:.4}", f.rule + 1, f.strength))
            .collect::<Vec<_>>()
            .join(","),
        _ => "-".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_rejects_malformed() {
        assert!(Record::parse("a=1 b").is_none());
        assert!(Record::parse("=1").is_none());
        assert!(Record::parse("a=b=c").is_none());
        assert_eq!(Record::parse("").unwrap(), Record::new());
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(
            fields in proptest::collection::vec(("[a-z_]{1,12}", "[A-Za-z0-9.:,_-]{1,16}"), 0..8)
        ) {
            let mut r = Record::new();
            for (k, v) in &fields {
                r.push(k, v);
            }
            prop_assert_eq!(Record::parse(&r.to_string()).unwrap(), r);
        }
    }
}
