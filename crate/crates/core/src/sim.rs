//! Deterministic hourly replay of recorded weather and crowd data through
//! the controller.
//!
//! Log format: one record per line (see [`crate::record`]). Decision lines
//! carry `kind=decision timestamp temperature humidity rain ratio
//! open_seconds minutes label fired status`; the last line is
//! `kind=summary hours total_open_seconds rain_closures no_rule_events`.

use std::io::Write;

use chrono::{Duration, NaiveDateTime};
use thiserror::Error;

use crate::dome::{CrowdEstimate, DomeDecision, DomeError, DomeLabel, DomeState, WeatherReading};
use crate::ingest::{Config, CrowdProfileEntry, WeatherRecord};
use crate::record::{fired_list, Record, TIMESTAMP_FORMAT};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("weather timeline is empty")]
    EmptyWeather,
    #[error(transparent)]
    Controller(#[from] DomeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventLogEntry {
    pub timestamp: NaiveDateTime,
    pub weather: Option<WeatherReading>,
    pub crowd: Option<CrowdEstimate>,
    pub decision: DomeDecision,
    /// Fleet state right after the decision was applied.
    pub fleet: DomeState,
}

impl EventLogEntry {
    pub fn to_record(&self) -> Record {
        let mut r = Record::new();
        r.push("kind", "decision");
        r.push("timestamp", self.timestamp.format(TIMESTAMP_FORMAT));
        r.push_opt_fixed("temperature", self.weather.map(|w| w.temperature), 2);
        r.push_opt_fixed("humidity", self.weather.map(|w| w.humidity), 2);
        r.push("rain", self.weather.map_or("NA".to_string(), |w| w.rain.to_string()));
        r.push_opt_fixed("ratio", self.crowd.map(|c| c.ratio), 2);
        r.push_fixed("open_seconds", self.decision.open_seconds, 2);
        r.push_fixed("minutes", self.decision.minutes(), 2);
        r.push("label", self.decision.label);
        r.push("fired", fired_list(self.decision.trace.as_ref()));
        r.push("status", &self.fleet);
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReplaySummary {
    pub hours: usize,
    pub total_open_seconds: f64,
    pub rain_closures: usize,
    pub no_rule_events: usize,
}

impl ReplaySummary {
    fn add(&mut self, e: &EventLogEntry) {
        self.hours += 1;
        self.total_open_seconds += e.decision.open_seconds;
        if e.weather.is_some_and(|w| w.rain) {
            self.rain_closures += 1;
        }
        if e.decision.label == DomeLabel::NoRule {
            self.no_rule_events += 1;
        }
    }

    pub fn to_record(&self) -> Record {
        let mut r = Record::new();
        r.push("kind", "summary");
        r.push("hours", self.hours);
        r.push_fixed("total_open_seconds", self.total_open_seconds, 2);
        r.push("rain_closures", self.rain_closures);
        r.push("no_rule_events", self.no_rule_events);
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayLog {
    pub entries: Vec<EventLogEntry>,
    pub summary: ReplaySummary,
}

impl ReplayLog {
    pub fn write_to(&self, mut out: impl Write) -> std::io::Result<()> {
        for e in &self.entries {
            writeln!(out, "{}", e.to_record())?;
        }
        writeln!(out, "{}", self.summary.to_record())
    }
}

/// Latest item at or before `at` whose age is below `max_age_s`.
fn last_fresh<T>(items: &[(NaiveDateTime, T)], at: NaiveDateTime, max_age_s: i64) -> Option<&T> {
    let idx = items.partition_point(|(ts, _)| *ts <= at);
    let (ts, item) = items.get(idx.checked_sub(1)?)?;
    ((at - *ts).num_seconds() < max_age_s).then_some(item)
}

/// Replays the weather span hour head by hour head, handing each entry to
/// `sink` as soon as it is produced.
pub fn run_replay_with(
    weather: &[WeatherRecord],
    crowd: &[CrowdProfileEntry],
    config: &Config,
    mut sink: impl FnMut(&EventLogEntry),
) -> Result<ReplaySummary, SimError> {
    if weather.is_empty() {
        return Err(SimError::EmptyWeather);
    }
    let mut controller = config.controller()?;
    let capacity = config.controller.capacity;
    let staleness = config.controller.staleness_seconds;

    let mut readings: Vec<(NaiveDateTime, Option<WeatherReading>)> = weather
        .iter()
        .map(|r| {
            let reading = r.to_reading();
            if let Err(e) = &reading {
                log::warn!("weather row at {} unusable: {e}", r.timestamp());
            }
            (r.timestamp(), reading.ok())
        })
        .collect();
    readings.sort_by_key(|(ts, _)| *ts);
    let mut ratios: Vec<(NaiveDateTime, f64)> = crowd.iter().map(|c| (c.timestamp, c.ratio)).collect();
    ratios.sort_by_key(|(ts, _)| *ts);

    let first = readings[0].0;
    let last = readings[readings.len() - 1].0;
    let mut head = controller.hour_head(first);
    if head < first {
        head += Duration::hours(1);
    }

    let mut provider = |at: NaiveDateTime| {
        let w = (*last_fresh(&readings, at, staleness)?)?;
        let ratio = *last_fresh(&ratios, at, staleness)?;
        let c = CrowdEstimate::from_ratio(ratio, capacity).ok()?;
        Some((w, c))
    };

    let mut summary = ReplaySummary::default();
    while head <= last {
        if let Some(decision) = controller.tick(head, &mut provider) {
            let entry = EventLogEntry {
                timestamp: head,
                weather: decision.weather,
                crowd: decision.crowd,
                decision,
                fleet: controller.fleet().clone(),
            };
            summary.add(&entry);
            sink(&entry);
        }
        head += Duration::hours(1);
    }
    Ok(summary)
}

pub fn run_replay(
    weather: &[WeatherRecord],
    crowd: &[CrowdProfileEntry],
    config: &Config,
) -> Result<ReplayLog, SimError> {
    let mut entries = Vec::new();
    let summary = run_replay_with(weather, crowd, config, |e| entries.push(e.clone()))?;
    Ok(ReplayLog { entries, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{CrowdMeasure, CrowdSource};
    use chrono::NaiveDate;

    fn ts(h: u32, m: u32) -> NaiveDateTime {
        NaiveDate::from_ymd_opt(2021, 8, 1)
            .unwrap()
            .and_hms_opt(h, m, 0)
            .unwrap()
    }

    fn weather(h: u32, m: u32, temp: f64, rain: bool) -> WeatherRecord {
        WeatherRecord {
            date: ts(h, m).date(),
            hour: h,
            minute: m,
            day: None,
            temperature: temp,
            humidity: 30.0,
            wind: None,
            barometer: None,
            visibility: None,
            rain: Some(rain),
        }
    }

    fn crowd(h: u32, ratio: f64) -> CrowdProfileEntry {
        CrowdProfileEntry {
            timestamp: ts(h, 0),
            measure: CrowdMeasure::Ratio(ratio),
            ratio,
            source: CrowdSource::Synthetic,
        }
    }

    #[test]
    fn empty_weather_is_fatal() {
        assert!(matches!(
            run_replay(&[], &[], &Config::default()),
            Err(SimError::EmptyWeather)
        ));
    }

    #[test]
    fn window_starts_at_first_full_hour() {
        let w = vec![
            weather(9, 30, 30.0, false),
            weather(10, 10, 30.0, false),
            weather(11, 0, 30.0, false),
        ];
        let c = vec![crowd(10, 50.0)];
        let log = run_replay(&w, &c, &Config::default()).unwrap();
        let heads: Vec<_> = log.entries.iter().map(|e| e.timestamp).collect();
        assert_eq!(heads, vec![ts(10, 0), ts(11, 0)]);
        // 10:00 joins the 09:30 weather row.
        assert!((log.entries[0].decision.open_seconds - 150.0).abs() < 1e-9);
        // 11:00: the crowd reading is exactly one hour old, which is stale.
        assert_eq!(log.entries[1].decision.label, DomeLabel::NoRule);
    }

    #[test]
    fn empty_crowd_profile_runs_fail_safe() {
        let w: Vec<_> = (0..5).map(|h| weather(h, 0, 30.0, false)).collect();
        let log = run_replay(&w, &[], &Config::default()).unwrap();
        assert_eq!(log.entries.len(), 5);
        assert!(log.entries.iter().all(|e| e.decision.open_seconds == 0.0));
        assert_eq!(log.summary.no_rule_events, 5);
    }

    #[test]
    fn log_lines_parse_back() {
        let w: Vec<_> = (0..3).map(|h| weather(h, 0, 30.0, h == 1)).collect();
        let c: Vec<_> = (0..3).map(|h| crowd(h, 50.0)).collect();
        let log = run_replay(&w, &c, &Config::default()).unwrap();
        let mut out = Vec::new();
        log.write_to(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        let r = Record::parse(lines[1]).unwrap();
        assert_eq!(r.get("rain"), Some("true"));
        assert_eq!(r.get("open_seconds"), Some("0.00"));
        assert_eq!(r.get("label"), Some("Stop"));
        let s = Record::parse(lines[3]).unwrap();
        assert_eq!(s.get("kind"), Some("summary"));
        assert_eq!(s.get("hours"), Some("3"));
        assert_eq!(s.get("total_open_seconds"), Some("300.00"));
        assert_eq!(s.get("rain_closures"), Some("1"));
    }
}
