//! Fuzzy dome-ventilation control.
//!
//! Crowd ratio and air temperature go in, an open duration for the dome
//! fleet comes out once per hour. The crate also renders crowd density maps
//! from head annotations and evaluates predicted counts.
//!
//! * [`fuzzy`]: general Mamdani inference engine.
//! * [`dome`]: sensor types, the rain override, the fleet state machine and
//!   the hourly controller.
//! * [`density`]: geometry-adaptive density maps and count metrics.
//! * [`ingest`]: CSV and configuration parsers.
//! * [`sim`]: hourly replay over recorded data.

pub mod density;
pub mod dome;
pub mod fuzzy;
pub mod ingest;
pub mod record;
pub mod sim;

pub use density::{DensityMap, HeadAnnotations, KernelParams};
pub use dome::{decide, Controller, ControllerConfig, CrowdEstimate, DomeDecision, DomeLabel, WeatherReading};
pub use fuzzy::{Engine, FuzzyOutcome, OutcomeFlag};
pub use ingest::{load_config, Config};
pub use sim::{run_replay, ReplayLog};
