use std::collections::HashMap;
use std::io::{Read, Write};

use chrono::{NaiveDate, NaiveDateTime};

use super::{parse_bool, IngestError, ParseReport, RowFault};
use crate::dome::{DomeError, WeatherReading, SENSOR_MAX_C, SENSOR_MIN_C};

/// One weather-history row. `wind`, `barometer` and `visibility` are carried
/// through untouched when numeric.
#[derive(Debug, Clone, PartialEq)]
pub struct WeatherRecord {
    pub date: NaiveDate,
    pub hour: u32,
    pub minute: u32,
    pub day: Option<String>,
    pub temperature: f64,
    pub humidity: f64,
    pub wind: Option<f64>,
    pub barometer: Option<f64>,
    pub visibility: Option<f64>,
    pub rain: Option<bool>,
}

impl WeatherRecord {
    pub fn timestamp(&self) -> NaiveDateTime {
        self.date
            .and_hms_opt(self.hour, self.minute, 0)
            .expect("validated hour/minute")
    }

    /// Sensor view of the row; a missing rain column means no rain.
    pub fn to_reading(&self) -> Result<WeatherReading, DomeError> {
        WeatherReading::new(
            self.temperature,
            self.humidity.clamp(0.0, 100.0),
            self.rain.unwrap_or(false),
            self.timestamp(),
        )
    }
}

const DATE_FORMATS: [&str; 4] = ["%Y-%m-%d", "%d/%m/%Y", "%Y/%m/%d", "%d-%m-%Y"];

fn parse_date(s: &str) -> Option<NaiveDate> {
    let s = s.trim();
    for f in DATE_FORMATS {
        if let Ok(d) = NaiveDate::parse_from_str(s, f) {
            return Some(d);
        }
    }
    // `2017-01-01 00:00:00` style: keep the date part.
    let (d, rest) = NaiveDate::parse_and_remainder(s, "%Y-%m-%d").ok()?;
    (rest.starts_with(' ') || rest.starts_with('T')).then_some(d)
}

/// Leading decimal number of a field such as `11 km/h` or `58%`.
fn leading_number(s: &str) -> Option<f64> {
    let s = s.trim();
    let end = s
        .char_indices()
        .find(|&(i, c)| !(c.is_ascii_digit() || c == '.' || ((c == '-' || c == '+') && i == 0)))
        .map_or(s.len(), |(i, _)| i);
    s[..end].parse().ok()
}

struct Columns {
    date: usize,
    hour: usize,
    minute: usize,
    temperature: usize,
    humidity: usize,
    day: Option<usize>,
    wind: Option<usize>,
    barometer: Option<usize>,
    visibility: Option<usize>,
    rain: Option<usize>,
}

impl Columns {
    fn resolve(headers: &csv::StringRecord) -> Result<Self, IngestError> {
        let index: HashMap<String, usize> = headers
            .iter()
            .enumerate()
            .map(|(i, h)| (h.trim().to_ascii_lowercase(), i))
            .collect();
        let find = |names: &[&str]| names.iter().find_map(|n| index.get(*n).copied());
        let need = |names: &[&str]| {
            find(names).ok_or_else(|| IngestError::Schema(format!("missing required column `{}`", names[0])))
        };
        Ok(Self {
            date: need(&["date"])?,
            hour: need(&["hour"])?,
            minute: need(&["minute"])?,
            temperature: need(&["temperature", "temp"])?,
            humidity: need(&["humidity"])?,
            day: find(&["day_name", "dayname", "weekday", "day"]),
            wind: find(&["wind"]),
            barometer: find(&["barometer"]),
            visibility: find(&["visibility"]),
            rain: find(&["rain"]),
        })
    }

    fn parse(&self, row: &csv::StringRecord) -> Result<WeatherRecord, String> {
        let get = |i: usize| row.get(i).map(str::trim).unwrap_or("");
        let opt = |i: Option<usize>| i.map(get).filter(|s| !s.is_empty());

        let date = parse_date(get(self.date)).ok_or_else(|| format!("bad date `{}`", get(self.date)))?;
        let hour: u32 = get(self.hour)
            .parse()
            .ok()
            .filter(|h| *h <= 23)
            .ok_or_else(|| format!("bad hour `{}`", get(self.hour)))?;
        let minute: u32 = get(self.minute)
            .parse()
            .ok()
            .filter(|m| *m <= 59)
            .ok_or_else(|| format!("bad minute `{}`", get(self.minute)))?;
        let temperature: f64 = get(self.temperature)
            .parse()
            .ok()
            .filter(|t: &f64| t.is_finite())
            .ok_or_else(|| format!("bad temperature `{}`", get(self.temperature)))?;
        if !(SENSOR_MIN_C..=SENSOR_MAX_C).contains(&temperature) {
            return Err(format!("temperature {temperature} outside [-40, 80]"));
        }
        let hum = get(self.humidity);
        let humidity: f64 = hum
            .strip_suffix('%')
            .unwrap_or(hum)
            .trim()
            .parse()
            .ok()
            .filter(|h: &f64| (0.0..=100.0).contains(h))
            .ok_or_else(|| format!("bad humidity `{hum}`"))?;
        let rain = match opt(self.rain) {
            None => None,
            Some(s) => Some(parse_bool(s).ok_or_else(|| format!("bad rain flag `{s}`"))?),
        };
        Ok(WeatherRecord {
            date,
            hour,
            minute,
            day: opt(self.day).map(str::to_string),
            temperature,
            humidity,
            wind: opt(self.wind).and_then(leading_number),
            barometer: opt(self.barometer).and_then(leading_number),
            visibility: opt(self.visibility).and_then(leading_number),
            rain,
        })
    }
}

/// Parses a weather-history CSV. Columns are resolved by header name;
/// `date`, `hour`, `minute`, `temperature` (or `temp`) and `humidity` are
/// required, `day`, `wind`, `barometer`, `visibility` and `rain` are
/// optional and anything else is ignored.
///
/// Bad rows become faults; only a missing or incomplete header is fatal.
pub fn parse_weather_csv(input: impl Read) -> Result<ParseReport<WeatherRecord>, IngestError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.is_empty() || headers.iter().all(|h| h.trim().is_empty()) {
        return Err(IngestError::Schema("missing header row".into()));
    }
    let columns = Columns::resolve(&headers)?;

    let mut report = ParseReport::default();
    for result in reader.records() {
        report.rows += 1;
        match result {
            Ok(row) => {
                let line = row.position().map_or(0, |p| p.line() as usize);
                if row.len() != headers.len() {
                    report.faults.push(RowFault {
                        line,
                        message: format!("expected {} fields, found {}", headers.len(), row.len()),
                    });
                    continue;
                }
                match columns.parse(&row) {
                    Ok(rec) => report.records.push(rec),
                    Err(message) => report.faults.push(RowFault { line, message }),
                }
            }
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line() as usize);
                report.faults.push(RowFault {
                    line,
                    message: e.to_string(),
                });
            }
        }
    }
    Ok(report)
}

fn opt_num(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

/// Writes records back in the canonical column order.
pub fn write_weather_csv(records: &[WeatherRecord], out: impl Write) -> Result<(), IngestError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "date",
        "hour",
        "minute",
        "day",
        "temperature",
        "humidity",
        "wind",
        "barometer",
        "visibility",
        "rain",
    ])?;
    for r in records {
        w.write_record([
            r.date.format("%Y-%m-%d").to_string(),
            r.hour.to_string(),
            r.minute.to_string(),
            r.day.clone().unwrap_or_default(),
            r.temperature.to_string(),
            r.humidity.to_string(),
            opt_num(r.wind),
            opt_num(r.barometer),
            opt_num(r.visibility),
            r.rain.map_or(String::new(), |b| b.to_string()),
        ])?;
    }
    w.flush()?;
    Ok(())
}
