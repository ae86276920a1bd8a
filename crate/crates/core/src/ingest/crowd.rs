use std::fmt;
use std::io::{Read, Write};

use chrono::NaiveDateTime;

use super::{IngestError, ParseReport, RowFault};
use crate::dome::crowd_ratio;
use crate::record::TIMESTAMP_FORMAT;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrowdSource {
    File,
    DensityMap,
    Synthetic,
}

impl CrowdSource {
    fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "" | "file" => Some(Self::File),
            "density-map" | "densitymap" => Some(Self::DensityMap),
            "synthetic" => Some(Self::Synthetic),
            _ => None,
        }
    }
}

impl fmt::Display for CrowdSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::File => "file",
            Self::DensityMap => "density-map",
            Self::Synthetic => "synthetic",
        })
    }
}

/// What the profile row carried.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrowdMeasure {
    Count(f64),
    Ratio(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrowdProfileEntry {
    pub timestamp: NaiveDateTime,
    pub measure: CrowdMeasure,
    /// Percentage of capacity, always in `[0, 100]`.
    pub ratio: f64,
    pub source: CrowdSource,
}

const TIMESTAMP_FORMATS: [&str; 4] = [
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%d %H:%M",
];

pub fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    let s = s.trim();
    TIMESTAMP_FORMATS
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
}

/// Parses a crowd profile CSV with a `timestamp` column and exactly one of
/// `count` / `ratio` (optional `source`). Counts become ratios against
/// `capacity`. Entries come back sorted by timestamp. Out-of-order rows and
/// clamped ratios are kept and reported in `notes`; rejected rows go to
/// `faults`.
///
/// A completely empty input yields an empty profile.
pub fn parse_crowd_profile(input: impl Read, capacity: u64) -> Result<ParseReport<CrowdProfileEntry>, IngestError> {
    if capacity == 0 {
        return Err(IngestError::Schema("capacity must be positive".into()));
    }
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().all(|h| h.trim().is_empty()) {
        return Ok(ParseReport::default());
    }
    let find = |name: &str| headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
    let ts_col = find("timestamp").ok_or_else(|| IngestError::Schema("missing `timestamp` column".into()))?;
    let (value_col, is_count) = match (find("count"), find("ratio")) {
        (Some(c), None) => (c, true),
        (None, Some(r)) => (r, false),
        (Some(_), Some(_)) => {
            return Err(IngestError::Schema(
                "profile has both `count` and `ratio` columns".into(),
            ))
        }
        (None, None) => return Err(IngestError::Schema("profile needs a `count` or `ratio` column".into())),
    };
    let source_col = find("source");

    let mut report = ParseReport::default();
    let mut last: Option<NaiveDateTime> = None;
    for result in reader.records() {
        report.rows += 1;
        let row = match result {
            Ok(row) => row,
            Err(e) => {
                report.faults.push(RowFault {
                    line: e.position().map_or(0, |p| p.line() as usize),
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = row.position().map_or(0, |p| p.line() as usize);
        let get = |i: usize| row.get(i).map(str::trim).unwrap_or("");
        let mut fault = |message: String| report.faults.push(RowFault { line, message });

        let Some(timestamp) = parse_timestamp(get(ts_col)) else {
            fault(format!("bad timestamp `{}`", get(ts_col)));
            continue;
        };
        let Some(value) = get(value_col).parse::<f64>().ok().filter(|v| v.is_finite()) else {
            fault(format!("bad value `{}`", get(value_col)));
            continue;
        };
        let source = match source_col.map(get) {
            None => CrowdSource::File,
            Some(s) => match CrowdSource::parse(s) {
                Some(src) => src,
                None => {
                    fault(format!("unknown source `{s}`"));
                    continue;
                }
            },
        };
        let (measure, ratio) = if is_count {
            match crowd_ratio(value, capacity) {
                Ok(r) => (CrowdMeasure::Count(value), r),
                Err(e) => {
                    fault(e.to_string());
                    continue;
                }
            }
        } else {
            let clamped = value.clamp(0.0, 100.0);
            if clamped != value {
                report.notes.push(RowFault {
                    line,
                    message: format!("ratio {value} clamped to {clamped}"),
                });
            }
            (CrowdMeasure::Ratio(clamped), clamped)
        };
        if last.is_some_and(|prev| timestamp <= prev) {
            report.notes.push(RowFault {
                line,
                message: format!("timestamp {timestamp} is not after the previous row"),
            });
        }
        last = Some(timestamp);
        report.records.push(CrowdProfileEntry {
            timestamp,
            measure,
            ratio,
            source,
        });
    }
    report.records.sort_by_key(|e| e.timestamp);
    Ok(report)
}

/// Writes a ratio-form profile (`timestamp,ratio,source`).
pub fn write_crowd_profile(entries: &[CrowdProfileEntry], out: impl Write) -> Result<(), IngestError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["timestamp", "ratio", "source"])?;
    for e in entries {
        w.write_record([
            e.timestamp.format(TIMESTAMP_FORMAT).to_string(),
            e.ratio.to_string(),
            e.source.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
