use chrono::{Duration, NaiveDateTime, Timelike};

use super::{
    decide, CrowdEstimate, DomeDecision, DomeError, DomeLabel, DomeState, WeatherReading, CROWD, DEFAULT_CAPACITY,
    DEFAULT_DOME_COUNT, DEFAULT_STALENESS_SECONDS, DEFAULT_TRAVEL_SECONDS, WEATHER,
};
use crate::fuzzy::Engine;

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerConfig {
    pub capacity: u64,
    pub dome_count: usize,
    pub travel_seconds: f64,
    /// Decision instants are `hh:00:00 + tick_offset_seconds`.
    pub tick_offset_seconds: u32,
    /// Readings older than this at a decision instant are ignored.
    pub staleness_seconds: i64,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        Self {
            capacity: DEFAULT_CAPACITY,
            dome_count: DEFAULT_DOME_COUNT,
            travel_seconds: DEFAULT_TRAVEL_SECONDS,
            tick_offset_seconds: 0,
            staleness_seconds: DEFAULT_STALENESS_SECONDS,
        }
    }
}

impl ControllerConfig {
    pub fn validate(&self) -> Result<(), DomeError> {
        if self.capacity == 0 {
            return Err(DomeError::InvalidCapacity);
        }
        if self.dome_count == 0 {
            return Err(DomeError::Config("dome count must be at least 1".into()));
        }
        if !(self.travel_seconds.is_finite() && self.travel_seconds > 0.0) {
            return Err(DomeError::Config("travel_seconds must be positive".into()));
        }
        if self.tick_offset_seconds >= 3600 {
            return Err(DomeError::Config("tick_offset_seconds must be below 3600".into()));
        }
        if self.staleness_seconds <= 0 {
            return Err(DomeError::Config("staleness_seconds must be positive".into()));
        }
        Ok(())
    }
}

/// Source of controller inputs at a decision instant.
pub trait InputProvider {
    fn inputs_at(&mut self, at: NaiveDateTime) -> Option<(WeatherReading, CrowdEstimate)>;
}

impl<F> InputProvider for F
where
    F: FnMut(NaiveDateTime) -> Option<(WeatherReading, CrowdEstimate)>,
{
    fn inputs_at(&mut self, at: NaiveDateTime) -> Option<(WeatherReading, CrowdEstimate)> {
        self(at)
    }
}

/// Hourly controller: decides at every hour head and keeps the fleet timers
/// running in between.
#[derive(Debug, Clone)]
pub struct Controller {
    engine: Engine,
    config: ControllerConfig,
    fleet: DomeState,
    clock: Option<NaiveDateTime>,
    last_head: Option<NaiveDateTime>,
}

impl Controller {
    pub fn new(engine: Engine, config: ControllerConfig) -> Result<Self, DomeError> {
        config.validate()?;
        for name in [CROWD, WEATHER] {
            if engine.input(name).is_none() {
                return Err(DomeError::Config(format!("engine has no `{name}` input")));
            }
        }
        for t in engine.output().terms() {
            let label: DomeLabel = t.label.parse()?;
            if label == DomeLabel::NoRule {
                return Err(DomeError::Config("`NoRule` is reserved".into()));
            }
        }
        let fleet = DomeState::new(config.dome_count, config.travel_seconds);
        Ok(Self {
            engine,
            config,
            fleet,
            clock: None,
            last_head: None,
        })
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn config(&self) -> &ControllerConfig {
        &self.config
    }

    pub fn fleet(&self) -> &DomeState {
        &self.fleet
    }

    /// Most recent decision instant at or before `t`.
    pub fn hour_head(&self, t: NaiveDateTime) -> NaiveDateTime {
        let offset = Duration::seconds(self.config.tick_offset_seconds as i64);
        let shifted = t - offset;
        let floored = shifted
            .with_minute(0)
            .and_then(|x| x.with_second(0))
            .and_then(|x| x.with_nanosecond(0))
            .expect("valid time");
        floored + offset
    }

    /// Advances the clock to `now`. Fleet timers run at 1 s resolution; a
    /// decision is emitted on the first tick at or after each hour head.
    ///
    /// A clock that moves backwards is ignored (no decision, no timer
    /// change) and logged.
    pub fn tick(&mut self, now: NaiveDateTime, inputs: &mut impl InputProvider) -> Option<DomeDecision> {
        if let Some(prev) = self.clock {
            if now < prev {
                log::warn!("clock went backwards ({prev} -> {now}); tick ignored");
                return None;
            }
            let elapsed = (now - prev).num_seconds();
            for _ in 0..elapsed {
                self.fleet.advance(1.0);
            }
        }
        self.clock = Some(now);

        let head = self.hour_head(now);
        if self.last_head == Some(head) {
            return None;
        }
        self.last_head = Some(head);

        let decision = match inputs.inputs_at(head) {
            Some((weather, crowd)) => {
                let mut d = decide(&weather, &crowd, &self.engine);
                d.issued_at = head;
                d
            }
            None => {
                log::warn!("no usable inputs at {head}; domes held closed");
                DomeDecision::fail_safe(head)
            }
        };
        if let Ok(next) = self.fleet.apply_decision(&decision) {
            self.fleet = next;
        }
        Some(decision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dome::{default_engine, DomeStatus};
    use chrono::NaiveDate;

    fn t(h: u32, m: u32) -> NaiveDateTime {
        NaiveDate::from_ymd_opt(2022, 3, 4)
            .unwrap()
            .and_hms_opt(h, m, 0)
            .unwrap()
    }

    fn steady(at: NaiveDateTime) -> Option<(WeatherReading, CrowdEstimate)> {
        Some((
            WeatherReading::new(30.0, 35.0, false, at).unwrap(),
            CrowdEstimate::from_ratio(50.0, DEFAULT_CAPACITY).unwrap(),
        ))
    }

    fn controller() -> Controller {
        Controller::new(default_engine(), ControllerConfig::default()).unwrap()
    }

    #[test]
    fn one_decision_per_hour() {
        let mut c = controller();
        let mut provider = steady;
        let decisions = (0..24).filter_map(|h| c.tick(t(h, 0), &mut provider)).count();
        assert_eq!(decisions, 24);

        let mut c = controller();
        assert!(c.tick(t(5, 0), &mut provider).is_some());
        assert!(c.tick(t(5, 40), &mut provider).is_none());
        assert!(c.tick(t(6, 2), &mut provider).is_some());
    }

    #[test]
    fn gap_is_fail_safe() {
        let mut c = controller();
        let mut provider = |at: NaiveDateTime| if at.hour() == 13 { None } else { steady(at) };
        for h in 0..24 {
            let d = c.tick(t(h, 0), &mut provider).unwrap();
            if h == 13 {
                assert_eq!((d.open_seconds, d.label), (0.0, DomeLabel::NoRule));
            } else {
                assert!((d.open_seconds - 150.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn timers_run_between_ticks() {
        let mut c = controller();
        let mut provider = steady;
        c.tick(t(8, 0), &mut provider).unwrap();
        assert!(matches!(c.fleet().uniform(), Some(DomeStatus::Opening { .. })));
        c.tick(t(8, 1), &mut provider);
        match c.fleet().uniform() {
            Some(DomeStatus::Open { remaining }) => assert!((remaining - 150.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        c.tick(t(8, 30), &mut provider);
        assert_eq!(c.fleet().uniform(), Some(DomeStatus::Closed));
    }

    #[test]
    fn tick_offset_shifts_heads() {
        let cfg = ControllerConfig {
            tick_offset_seconds: 900,
            ..ControllerConfig::default()
        };
        let c = Controller::new(default_engine(), cfg).unwrap();
        assert_eq!(c.hour_head(t(10, 10)), t(9, 15));
        assert_eq!(c.hour_head(t(10, 15)), t(10, 15));
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = ControllerConfig {
            capacity: 0,
            ..ControllerConfig::default()
        };
        assert!(Controller::new(default_engine(), cfg).is_err());
        let cfg = ControllerConfig {
            travel_seconds: 0.0,
            ..ControllerConfig::default()
        };
        assert!(Controller::new(default_engine(), cfg).is_err());
    }
}
