use std::fmt;

use thiserror::Error;

use super::DomeDecision;

/// Status of a single dome. Times are seconds.
///
/// The only legal cycle is `Closed → Opening → Open → Closing → Closed`;
/// a zero-duration command forces any moving or open dome to `Closing`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomeStatus {
    Closed,
    /// Travelling towards fully open; `hold` is the open duration to apply
    /// once the rails reach the end.
    Opening {
        elapsed: f64,
        hold: f64,
    },
    Open {
        remaining: f64,
    },
    Closing {
        elapsed: f64,
    },
}

impl DomeStatus {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Closed => "Closed",
            Self::Opening { .. } => "Opening",
            Self::Open { .. } => "Open",
            Self::Closing { .. } => "Closing",
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Self::Closed)
    }

    fn command(self, open_seconds: f64, travel: f64) -> Result<Self, TransitionFault> {
        if open_seconds > 0.0 {
            match self {
                Self::Closed => Ok(Self::Opening {
                    elapsed: 0.0,
                    hold: open_seconds,
                }),
                Self::Opening { elapsed, .. } => Ok(Self::Opening {
                    elapsed,
                    hold: open_seconds,
                }),
                Self::Open { .. } => Ok(Self::Open {
                    remaining: open_seconds,
                }),
                Self::Closing { .. } => Err(TransitionFault {
                    from: self.name(),
                    requested: "Opening",
                }),
            }
        } else {
            Ok(match self {
                Self::Closed => Self::Closed,
                // Nothing to retrace if the rails have not moved yet.
                Self::Opening { elapsed, .. } if elapsed <= 0.0 => Self::Closed,
                // Retrace the distance already travelled.
                Self::Opening { elapsed, .. } => Self::Closing {
                    elapsed: (travel - elapsed).max(0.0),
                },
                Self::Open { .. } => Self::Closing { elapsed: 0.0 },
                Self::Closing { elapsed } => Self::Closing { elapsed },
            })
        }
    }

    fn advance(mut self, mut dt: f64, travel: f64) -> Self {
        while dt > 0.0 {
            self = match self {
                Self::Closed => return self,
                Self::Opening { elapsed, hold } => {
                    let left = travel - elapsed;
                    if dt < left {
                        return Self::Opening {
                            elapsed: elapsed + dt,
                            hold,
                        };
                    }
                    dt -= left;
                    Self::Open { remaining: hold }
                }
                Self::Open { remaining } => {
                    if dt < remaining {
                        return Self::Open {
                            remaining: remaining - dt,
                        };
                    }
                    dt -= remaining;
                    Self::Closing { elapsed: 0.0 }
                }
                Self::Closing { elapsed } => {
                    let left = travel - elapsed;
                    if dt < left {
                        return Self::Closing { elapsed: elapsed + dt };
                    }
                    dt -= left;
                    Self::Closed
                }
            };
        }
        self
    }
}

impl fmt::Display for DomeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Closed => f.write_str("Closed"),
            Self::Opening { elapsed, .. } => write!(f, "Opening({elapsed:.0})"),
            Self::Open { remaining } => write!(f, "Open({remaining:.0})"),
            Self::Closing { elapsed } => write!(f, "Closing({elapsed:.0})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("illegal transition {from} -> {requested}")]
pub struct TransitionFault {
    pub from: &'static str,
    pub requested: &'static str,
}

/// The dome fleet. Every command is applied identically to all domes.
#[derive(Debug, Clone, PartialEq)]
pub struct DomeState {
    domes: Vec<DomeStatus>,
    travel_seconds: f64,
}

impl DomeState {
    pub fn new(count: usize, travel_seconds: f64) -> Self {
        Self {
            domes: vec![DomeStatus::Closed; count],
            travel_seconds,
        }
    }

    pub fn domes(&self) -> &[DomeStatus] {
        &self.domes
    }

    pub fn travel_seconds(&self) -> f64 {
        self.travel_seconds
    }

    /// Common status when the fleet is uniform.
    pub fn uniform(&self) -> Option<DomeStatus> {
        let first = *self.domes.first()?;
        self.domes.iter().all(|d| *d == first).then_some(first)
    }

    /// Applies a decision to every dome. An illegal request leaves the fleet
    /// untouched and reports the fault.
    pub fn apply_decision(&self, decision: &DomeDecision) -> Result<DomeState, TransitionFault> {
        self.command(decision.open_seconds)
    }

    pub fn command(&self, open_seconds: f64) -> Result<DomeState, TransitionFault> {
        let domes = self
            .domes
            .iter()
            .map(|d| d.command(open_seconds, self.travel_seconds))
            .collect::<Result<Vec<_>, _>>();
        match domes {
            Ok(domes) => Ok(DomeState {
                domes,
                travel_seconds: self.travel_seconds,
            }),
            Err(fault) => {
                log::warn!("dome command rejected: {fault}");
                Err(fault)
            }
        }
    }

    pub fn advance(&mut self, dt: f64) {
        let travel = self.travel_seconds;
        for d in &mut self.domes {
            *d = d.advance(dt, travel);
        }
    }
}

impl fmt::Display for DomeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.uniform() {
            Some(s) => write!(f, "{s}"),
            None => f.write_str("Mixed"),
        }
    }
}
