//! Default controller vocabulary.
//!
//! The crowd axis is a percentage of capacity, the weather axis is air
//! temperature in °C and the output axis is the open duration in seconds.
//!
//! | variable | term    | shape                         |
//! |----------|---------|-------------------------------|
//! | crowd    | NoCrowd | trapezoidal 0 0 25 30         |
//! | crowd    | Medium  | triangular 25 50 75           |
//! | crowd    | Crowd   | triangular 70 100 100         |
//! | weather  | Rain    | trapezoidal 0 0 7 24          |
//! | weather  | Outlook | triangular 7 27 47            |
//! | time     | Stop    | singleton 0                   |
//! | time     | Short   | triangular 0 60 120           |
//! | time     | Medium  | triangular 90 150 210         |
//! | time     | Tall    | triangular 180 300 300        |
//!
//! With these shapes a 72 % crowd at 30 °C opens the domes for 182.53 s
//! (3.04 min).

use crate::fuzzy::{Engine, LinguisticVariable, MembershipFunction, Rule, UniverseAxis};

pub const DEFAULT_CAPACITY: u64 = 698_000;
pub const DEFAULT_DOME_COUNT: usize = 27;
pub const DEFAULT_TRAVEL_SECONDS: f64 = 60.0;
pub const DEFAULT_STALENESS_SECONDS: i64 = 3600;

pub const CROWD: &str = "crowd";
pub const WEATHER: &str = "weather";
pub const TIME: &str = "time";

pub const DEFAULT_RULES: [&str; 4] = [
    "if weather is Rain then time is Stop",
    "if weather is Outlook and crowd is NoCrowd then time is Short",
    "if weather is Outlook and crowd is Medium then time is Medium",
    "if weather is Outlook and crowd is Crowd then time is Tall",
];

fn var(name: &str, lo: f64, hi: f64, terms: &[(&str, &str, &[f64])]) -> LinguisticVariable {
    let axis = UniverseAxis::new(name, lo, hi, 0.5).expect("default axis");
    let terms = terms
        .iter()
        .map(|(label, shape, pts)| {
            (
                label.to_string(),
                MembershipFunction::from_parts(shape, pts).expect("default shape"),
            )
        })
        .collect();
    LinguisticVariable::new(axis, terms).expect("default variable")
}

pub fn default_crowd() -> LinguisticVariable {
    var(
        CROWD,
        0.0,
        100.0,
        &[
            ("NoCrowd", "trapezoidal", &[0.0, 0.0, 25.0, 30.0]),
            ("Medium", "triangular", &[25.0, 50.0, 75.0]),
            ("Crowd", "triangular", &[70.0, 100.0, 100.0]),
        ],
    )
}

pub fn default_weather() -> LinguisticVariable {
    var(
        WEATHER,
        0.0,
        50.0,
        &[
            ("Rain", "trapezoidal", &[0.0, 0.0, 7.0, 24.0]),
            ("Outlook", "triangular", &[7.0, 27.0, 47.0]),
        ],
    )
}

pub fn default_time() -> LinguisticVariable {
    var(
        TIME,
        0.0,
        300.0,
        &[
            ("Stop", "singleton", &[0.0]),
            ("Short", "triangular", &[0.0, 60.0, 120.0]),
            ("Medium", "triangular", &[90.0, 150.0, 210.0]),
            ("Tall", "triangular", &[180.0, 300.0, 300.0]),
        ],
    )
}

pub fn default_rules() -> Vec<Rule> {
    DEFAULT_RULES.iter().map(|r| r.parse().expect("default rule")).collect()
}

pub fn default_engine() -> Engine {
    Engine::new(
        vec![default_crowd(), default_weather()],
        default_time(),
        default_rules(),
    )
    .expect("default engine")
}
