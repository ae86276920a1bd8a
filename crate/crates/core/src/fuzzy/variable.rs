use super::{FuzzyError, MembershipFunction};

/// Minimum number of grid intervals an axis must span.
pub const MIN_GRID_INTERVALS: f64 = 10.0;

/// Numeric universe of a linguistic variable plus its integration pitch.
#[derive(Debug, Clone, PartialEq)]
pub struct UniverseAxis {
    name: String,
    lo: f64,
    hi: f64,
    step: f64,
}

impl UniverseAxis {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64, step: f64) -> Result<Self, FuzzyError> {
        let name = name.into();
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return Err(FuzzyError::InvalidAxis(format!("{name}: bounds must be finite")));
        }
        if lo >= hi {
            return Err(FuzzyError::InvalidAxis(format!("{name}: lo {lo} must be < hi {hi}")));
        }
        if step <= 0.0 {
            return Err(FuzzyError::InvalidAxis(format!("{name}: step {step} must be > 0")));
        }
        if (hi - lo) / step < MIN_GRID_INTERVALS {
            return Err(FuzzyError::InvalidAxis(format!(
                "{name}: step {step} leaves fewer than 10 grid intervals"
            )));
        }
        Ok(Self { name, lo, hi, step })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// Number of grid points `lo, lo + step, ...` not exceeding `hi`.
    pub fn grid_len(&self) -> usize {
        ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn grid_point(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step
    }

    /// Index of the grid point nearest to `x` (clamped into the grid).
    pub fn nearest_index(&self, x: f64) -> usize {
        let i = ((x - self.lo) / self.step).round();
        (i.max(0.0) as usize).min(self.grid_len() - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub label: String,
    pub mf: MembershipFunction,
}

/// A named axis with an ordered set of labelled fuzzy sets.
#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticVariable {
    axis: UniverseAxis,
    terms: Vec<Term>,
}

impl LinguisticVariable {
    pub fn new(axis: UniverseAxis, terms: Vec<(String, MembershipFunction)>) -> Result<Self, FuzzyError> {
        if terms.is_empty() {
            return Err(FuzzyError::InvalidVariable(format!("{}: no terms", axis.name())));
        }
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (label, mf) in terms {
            if out.iter().any(|t| t.label == label) {
                return Err(FuzzyError::InvalidVariable(format!(
                    "{}: duplicate label `{label}`",
                    axis.name()
                )));
            }
            let (lo, hi) = mf.support();
            if lo < axis.lo() || hi > axis.hi() {
                return Err(FuzzyError::InvalidVariable(format!(
                    "{}: term `{label}` support [{lo}, {hi}] leaves axis [{}, {}]",
                    axis.name(),
                    axis.lo(),
                    axis.hi()
                )));
            }
            out.push(Term { label, mf });
        }
        Ok(Self { axis, terms: out })
    }

    pub fn name(&self) -> &str {
        self.axis.name()
    }

    pub fn axis(&self) -> &UniverseAxis {
        &self.axis
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_index(&self, label: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.label == label)
    }

    /// Degree of every term at `x`, in term order. `x` is clamped to the
    /// axis first.
    pub fn fuzzify(&self, x: f64) -> Vec<(String, f64)> {
        let x = self.axis.clamp(x);
        self.terms
            .iter()
            .map(|t| (t.label.clone(), t.mf.membership_at(x)))
            .collect()
    }

    pub(crate) fn degrees(&self, x: f64) -> Vec<f64> {
        let x = self.axis.clamp(x);
        self.terms.iter().map(|t| t.mf.membership_at(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(a: f64, b: f64, c: f64) -> MembershipFunction {
        MembershipFunction::triangular(a, b, c).unwrap()
    }

    #[test]
    fn axis_invariants() {
        assert!(UniverseAxis::new("t", 0.0, 300.0, 0.5).is_ok());
        assert!(UniverseAxis::new("t", 10.0, 0.0, 0.5).is_err());
        assert!(UniverseAxis::new("t", 0.0, 10.0, 0.0).is_err());
        assert!(UniverseAxis::new("t", 0.0, 10.0, 2.0).is_err());
        let axis = UniverseAxis::new("t", 0.0, 300.0, 0.5).unwrap();
        assert_eq!(axis.grid_len(), 601);
        assert_eq!(axis.grid_point(600), 300.0);
        assert_eq!(axis.nearest_index(-3.0), 0);
        assert_eq!(axis.nearest_index(150.2), 300);
    }

    #[test]
    fn rejects_duplicate_and_out_of_axis_terms() {
        let axis = UniverseAxis::new("crowd", 0.0, 100.0, 0.5).unwrap();
        let dup = vec![
            ("A".to_string(), tri(0.0, 1.0, 2.0)),
            ("A".to_string(), tri(2.0, 3.0, 4.0)),
        ];
        assert!(LinguisticVariable::new(axis.clone(), dup).is_err());
        let wide = vec![("A".to_string(), tri(-5.0, 1.0, 2.0))];
        assert!(LinguisticVariable::new(axis.clone(), wide).is_err());
        assert!(LinguisticVariable::new(axis, vec![]).is_err());
    }

    #[test]
    fn fuzzify_clamps() {
        let axis = UniverseAxis::new("crowd", 0.0, 100.0, 0.5).unwrap();
        let var = LinguisticVariable::new(axis, vec![("High".to_string(), tri(70.0, 100.0, 100.0))]).unwrap();
        assert_eq!(var.fuzzify(250.0)[0].1, 1.0);
        assert_eq!(var.fuzzify(-4.0)[0].1, 0.0);
    }
}
