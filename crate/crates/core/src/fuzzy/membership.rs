use std::fmt;

use super::FuzzyError;

/// Piecewise-linear membership shape. Breakpoints are in axis units.
///
/// Construct through [`MembershipFunction::triangular`],
/// [`MembershipFunction::trapezoidal`] or [`MembershipFunction::singleton`];
/// the constructors enforce breakpoint ordering so evaluation never fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MembershipFunction {
    Triangular { a: f64, b: f64, c: f64 },
    Trapezoidal { a: f64, b: f64, c: f64, d: f64 },
    Singleton { p: f64 },
}

impl MembershipFunction {
    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self, FuzzyError> {
        check_ordered("triangular", &[a, b, c])?;
        Ok(Self::Triangular { a, b, c })
    }

    pub fn trapezoidal(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        check_ordered("trapezoidal", &[a, b, c, d])?;
        Ok(Self::Trapezoidal { a, b, c, d })
    }

    pub fn singleton(p: f64) -> Result<Self, FuzzyError> {
        check_ordered("singleton", &[p])?;
        Ok(Self::Singleton { p })
    }

    /// Builds a shape from its config-file name and breakpoint list.
    pub fn from_parts(shape: &str, points: &[f64]) -> Result<Self, FuzzyError> {
        let arity = |n: usize| {
            if points.len() == n {
                Ok(())
            } else {
                Err(FuzzyError::InvalidShape(format!(
                    "{shape} takes {n} breakpoints, got {}",
                    points.len()
                )))
            }
        };
        match shape.to_ascii_lowercase().as_str() {
            "triangular" | "tri" => {
                arity(3)?;
                Self::triangular(points[0], points[1], points[2])
            }
            "trapezoidal" | "trap" => {
                arity(4)?;
                Self::trapezoidal(points[0], points[1], points[2], points[3])
            }
            "singleton" => {
                arity(1)?;
                Self::singleton(points[0])
            }
            other => Err(FuzzyError::InvalidShape(format!("unknown shape `{other}`"))),
        }
    }

    /// Degree of membership of `x`, always in `[0, 1]`.
    ///
    /// A zero-width edge (`a == b`) is a vertical shoulder: the degree jumps
    /// to 1 at the breakpoint. Singletons are 1 only at exactly `p`.
    pub fn membership_at(&self, x: f64) -> f64 {
        match *self {
            Self::Triangular { a, b, c } => trapezoid(x, a, b, b, c),
            Self::Trapezoidal { a, b, c, d } => trapezoid(x, a, b, c, d),
            Self::Singleton { p } => {
                if x == p {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Closed interval outside of which the degree is zero.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Self::Triangular { a, c, .. } => (a, c),
            Self::Trapezoidal { a, d, .. } => (a, d),
            Self::Singleton { p } => (p, p),
        }
    }

    pub fn shape_name(&self) -> &'static str {
        match self {
            Self::Triangular { .. } => "triangular",
            Self::Trapezoidal { .. } => "trapezoidal",
            Self::Singleton { .. } => "singleton",
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Self::Triangular { a, b, c } => vec![a, b, c],
            Self::Trapezoidal { a, b, c, d } => vec![a, b, c, d],
            Self::Singleton { p } => vec![p],
        }
    }
}

impl fmt::Display for MembershipFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.shape_name())?;
        for p in self.breakpoints() {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

fn check_ordered(shape: &str, points: &[f64]) -> Result<(), FuzzyError> {
    if points.iter().any(|p| !p.is_finite()) {
        return Err(FuzzyError::InvalidShape(format!(
            "{shape} breakpoints must be finite: {points:?}"
        )));
    }
    if points.windows(2).any(|w| w[0] > w[1]) {
        return Err(FuzzyError::InvalidShape(format!(
            "{shape} breakpoints must be non-decreasing: {points:?}"
        )));
    }
    Ok(())
}

fn trapezoid(x: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    if x < a || x > d {
        0.0
    } else if x < b {
        (x - a) / (b - a)
    } else if x <= c {
        1.0
    } else {
        (d - x) / (d - c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangular_examples() {
        let mf = MembershipFunction::triangular(25.0, 50.0, 75.0).unwrap();
        assert_eq!(mf.membership_at(50.0), 1.0);
        assert_eq!(mf.membership_at(80.0), 0.0);
        assert!((mf.membership_at(72.0) - 0.12).abs() < 1e-12);
        assert_eq!(mf.membership_at(25.0), 0.0);
        assert_eq!(mf.membership_at(75.0), 0.0);
    }

    #[test]
    fn shoulders() {
        let left = MembershipFunction::trapezoidal(0.0, 0.0, 25.0, 30.0).unwrap();
        assert_eq!(left.membership_at(0.0), 1.0);
        assert_eq!(left.membership_at(25.0), 1.0);
        assert_eq!(left.membership_at(30.0), 0.0);
        assert!((left.membership_at(27.5) - 0.5).abs() < 1e-12);

        let right = MembershipFunction::triangular(70.0, 100.0, 100.0).unwrap();
        assert_eq!(right.membership_at(100.0), 1.0);
        assert!((right.membership_at(72.0) - 2.0 / 30.0).abs() < 1e-12);
    }

    #[test]
    fn singleton_is_exact() {
        let mf = MembershipFunction::singleton(0.0).unwrap();
        assert_eq!(mf.membership_at(0.0), 1.0);
        assert_eq!(mf.membership_at(1e-9), 0.0);
    }

    #[test]
    fn malformed_shapes_rejected() {
        assert!(MembershipFunction::triangular(50.0, 25.0, 75.0).is_err());
        assert!(MembershipFunction::trapezoidal(0.0, 10.0, 5.0, 20.0).is_err());
        assert!(MembershipFunction::triangular(0.0, f64::NAN, 1.0).is_err());
        assert!(MembershipFunction::from_parts("gaussian", &[1.0, 2.0]).is_err());
        assert!(MembershipFunction::from_parts("triangular", &[1.0, 2.0]).is_err());
    }

    #[test]
    fn from_parts_round_trips_display() {
        let mf = MembershipFunction::from_parts("trapezoidal", &[0.0, 0.0, 7.0, 24.0]).unwrap();
        assert_eq!(mf.to_string(), "trapezoidal 0 0 7 24");
    }
}
