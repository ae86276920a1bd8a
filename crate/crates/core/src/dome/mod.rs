//! Sensor inputs, the per-hour dome decision and fleet actuation.

mod controller;
mod defaults;
mod fleet;

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDateTime;
use thiserror::Error;

use crate::fuzzy::{Engine, FuzzyError, FuzzyOutcome, OutcomeFlag};
use crate::record::{fired_list, Record};

pub use controller::{Controller, ControllerConfig, InputProvider};
pub use defaults::*;
pub use fleet::{DomeState, DomeStatus, TransitionFault};

/// Operating range of the temperature/humidity sensor.
pub const SENSOR_MIN_C: f64 = -40.0;
pub const SENSOR_MAX_C: f64 = 80.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomeError {
    #[error("capacity must be positive")]
    InvalidCapacity,
    #[error("crowd count must be finite and non-negative, got {0}")]
    InvalidCount(f64),
    #[error("temperature {0} °C outside sensor range [-40, 80]")]
    TemperatureOutOfRange(f64),
    #[error("humidity {0} % outside [0, 100]")]
    HumidityOutOfRange(f64),
    #[error("controller config: {0}")]
    Config(String),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

/// `100 · count / capacity`, clamped to `[0, 100]`. Counts may be fractional.
pub fn crowd_ratio(count: f64, capacity: u64) -> Result<f64, DomeError> {
    if capacity == 0 {
        return Err(DomeError::InvalidCapacity);
    }
    if !count.is_finite() || count < 0.0 {
        return Err(DomeError::InvalidCount(count));
    }
    Ok((100.0 * count / capacity as f64).clamp(0.0, 100.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeatherReading {
    pub temperature: f64,
    pub humidity: f64,
    pub rain: bool,
    pub timestamp: NaiveDateTime,
}

impl WeatherReading {
    pub fn new(temperature: f64, humidity: f64, rain: bool, timestamp: NaiveDateTime) -> Result<Self, DomeError> {
        if !(SENSOR_MIN_C..=SENSOR_MAX_C).contains(&temperature) {
            return Err(DomeError::TemperatureOutOfRange(temperature));
        }
        if !(0.0..=100.0).contains(&humidity) {
            return Err(DomeError::HumidityOutOfRange(humidity));
        }
        Ok(Self {
            temperature,
            humidity,
            rain,
            timestamp,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrowdEstimate {
    pub count: f64,
    pub capacity: u64,
    pub ratio: f64,
}

impl CrowdEstimate {
    pub fn from_count(count: f64, capacity: u64) -> Result<Self, DomeError> {
        let ratio = crowd_ratio(count, capacity)?;
        Ok(Self { count, capacity, ratio })
    }

    /// The ratio is clamped to `[0, 100]`; the implied count follows it.
    pub fn from_ratio(ratio: f64, capacity: u64) -> Result<Self, DomeError> {
        if capacity == 0 {
            return Err(DomeError::InvalidCapacity);
        }
        if !ratio.is_finite() {
            return Err(DomeError::InvalidCount(ratio));
        }
        let ratio = ratio.clamp(0.0, 100.0);
        Ok(Self {
            count: ratio * capacity as f64 / 100.0,
            capacity,
            ratio,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomeLabel {
    Stop,
    Short,
    Medium,
    Tall,
    NoRule,
}

impl DomeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Stop => "Stop",
            Self::Short => "Short",
            Self::Medium => "Medium",
            Self::Tall => "Tall",
            Self::NoRule => "NoRule",
        }
    }
}

impl fmt::Display for DomeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DomeLabel {
    type Err = DomeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "Stop" => Self::Stop,
            "Short" => Self::Short,
            "Medium" => Self::Medium,
            "Tall" => Self::Tall,
            "NoRule" => Self::NoRule,
            other => return Err(DomeError::Config(format!("unknown dome label `{other}`"))),
        })
    }
}

/// One hourly decision. `trace` is absent when the engine was not consulted
/// (rain override, missing inputs).
#[derive(Debug, Clone, PartialEq)]
pub struct DomeDecision {
    pub open_seconds: f64,
    pub label: DomeLabel,
    pub trace: Option<FuzzyOutcome>,
    pub issued_at: NaiveDateTime,
    pub weather: Option<WeatherReading>,
    pub crowd: Option<CrowdEstimate>,
}

impl DomeDecision {
    /// Closed-and-stay-closed decision used whenever inputs are missing.
    pub fn fail_safe(issued_at: NaiveDateTime) -> Self {
        Self {
            open_seconds: 0.0,
            label: DomeLabel::NoRule,
            trace: None,
            issued_at,
            weather: None,
            crowd: None,
        }
    }

    pub fn minutes(&self) -> f64 {
        self.open_seconds / 60.0
    }

    /// Decision-log line: timestamp, ratio, temperature, rain,
    /// open_seconds, minutes, label, fired rules.
    pub fn to_record(&self) -> Record {
        let mut r = Record::new();
        r.push("timestamp", self.issued_at.format(crate::record::TIMESTAMP_FORMAT));
        r.push_opt_fixed("ratio", self.crowd.map(|c| c.ratio), 2);
        r.push_opt_fixed("temperature", self.weather.map(|w| w.temperature), 2);
        r.push("rain", self.weather.map_or("NA".to_string(), |w| w.rain.to_string()));
        r.push_fixed("open_seconds", self.open_seconds, 2);
        r.push_fixed("minutes", self.minutes(), 2);
        r.push("label", self.label);
        r.push("fired", fired_list(self.trace.as_ref()));
        r
    }
}

/// Rain short-circuits to Stop without consulting the engine; otherwise the
/// engine decides and a zero-mass outcome maps to `(0, NoRule)`.
pub fn decide(weather: &WeatherReading, crowd: &CrowdEstimate, engine: &Engine) -> DomeDecision {
    let mut decision = DomeDecision {
        open_seconds: 0.0,
        label: DomeLabel::Stop,
        trace: None,
        issued_at: weather.timestamp,
        weather: Some(*weather),
        crowd: Some(*crowd),
    };
    if weather.rain {
        return decision;
    }
    let outcome = match engine.infer(&[(CROWD, crowd.ratio), (WEATHER, weather.temperature)]) {
        Ok(o) => o,
        Err(e) => {
            log::error!("inference failed, holding domes closed: {e}");
            decision.label = DomeLabel::NoRule;
            return decision;
        }
    };
    if outcome.flag == OutcomeFlag::NoRuleFired {
        log::warn!(
            "no rule fired at ratio {:.2} %, {:.2} °C; domes stay closed",
            crowd.ratio,
            weather.temperature
        );
        decision.label = DomeLabel::NoRule;
    } else {
        let axis = engine.output().axis();
        decision.open_seconds = outcome.crisp.clamp(axis.lo().max(0.0), axis.hi());
        decision.label = output_label(engine, &outcome);
    }
    decision.trace = Some(outcome);
    decision
}

/// Output term with the highest membership at the crisp value; the first
/// such term in declaration order wins ties.
fn output_label(engine: &Engine, outcome: &FuzzyOutcome) -> DomeLabel {
    let mut best: Option<(f64, &str)> = None;
    for t in engine.output().terms() {
        let m = t.mf.membership_at(outcome.crisp);
        if best.is_none_or(|(b, _)| m > b) {
            best = Some((m, &t.label));
        }
    }
    let label = match best {
        Some((m, label)) if m > 0.0 => label,
        _ => {
            // Crisp value between terms: fall back to the strongest rule.
            let strongest = outcome
                .fired
                .iter()
                .fold(None::<&crate::fuzzy::FiredRule>, |acc, f| match acc {
                    Some(a) if a.strength >= f.strength => Some(a),
                    _ => Some(f),
                });
            match strongest {
                Some(f) => &engine.rules()[f.rule].consequent.term,
                None => return DomeLabel::NoRule,
            }
        }
    };
    label.parse().unwrap_or(DomeLabel::NoRule)
}
