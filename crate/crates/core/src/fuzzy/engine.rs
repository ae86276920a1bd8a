use super::{FuzzyError, LinguisticVariable, Rule, UniverseAxis};

/// Membership curve sampled on a uniform output grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    pub lo: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl SampledCurve {
    pub fn zeros(axis: &UniverseAxis) -> Self {
        Self {
            lo: axis.lo(),
            step: axis.step(),
            values: vec![0.0; axis.grid_len()],
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &m)| (self.x(i), m))
    }

    /// `[min, max]` of the grid points with non-zero membership.
    pub fn support(&self) -> Option<(f64, f64)> {
        let first = self.values.iter().position(|&m| m > 0.0)?;
        let last = self.values.iter().rposition(|&m| m > 0.0)?;
        Some((self.x(first), self.x(last)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeFlag {
    Ok,
    NoRuleFired,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiredRule {
    /// Zero-based position in the rule base.
    pub rule: usize,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariableDegrees {
    pub variable: String,
    pub input: f64,
    pub degrees: Vec<(String, f64)>,
}

/// Full trace of one inference.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyOutcome {
    pub crisp: f64,
    pub flag: OutcomeFlag,
    pub fired: Vec<FiredRule>,
    pub memberships: Vec<VariableDegrees>,
    pub aggregate: SampledCurve,
}

/// Discrete centroid `Σ xᵢ·μᵢ / Σ μᵢ`, summed in ascending grid order.
///
/// A zero-mass curve yields `(lo, NoRuleFired)`.
pub fn defuzzify_centroid(curve: &SampledCurve) -> (f64, OutcomeFlag) {
    let mut moment = 0.0;
    let mut mass = 0.0;
    for (x, m) in curve.points() {
        moment += x * m;
        mass += m;
    }
    if mass > 0.0 {
        (moment / mass, OutcomeFlag::Ok)
    } else {
        (curve.lo, OutcomeFlag::NoRuleFired)
    }
}

#[derive(Debug, Clone, PartialEq)]
struct CompiledRule {
    clauses: Vec<(usize, usize)>,
    consequent: usize,
}

/// Mamdani inference engine: min for AND, min-clip implication, max
/// aggregation and discrete-centroid defuzzification.
///
/// Immutable once built; `infer` is a pure function of its inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Engine {
    inputs: Vec<LinguisticVariable>,
    output: LinguisticVariable,
    rules: Vec<Rule>,
    compiled: Vec<CompiledRule>,
    // One sampled consequent per output term; a singleton occupies the
    // single grid point nearest to it.
    consequents: Vec<Vec<f64>>,
}

impl Engine {
    pub fn new(
        inputs: Vec<LinguisticVariable>,
        output: LinguisticVariable,
        rules: Vec<Rule>,
    ) -> Result<Self, FuzzyError> {
        let mut names: Vec<&str> = inputs.iter().map(|v| v.name()).collect();
        names.push(output.name());
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(FuzzyError::InvalidVariable(format!("duplicate variable `{n}`")));
            }
        }
        if rules.is_empty() {
            return Err(FuzzyError::InvalidRule("rule base is empty".into()));
        }

        let mut compiled = Vec::with_capacity(rules.len());
        for rule in &rules {
            let mut clauses = Vec::with_capacity(rule.antecedent.len());
            for clause in &rule.antecedent {
                let vi = inputs
                    .iter()
                    .position(|v| v.name() == clause.variable)
                    .ok_or_else(|| FuzzyError::UnknownVariable(clause.variable.clone()))?;
                let ti = inputs[vi]
                    .term_index(&clause.term)
                    .ok_or_else(|| FuzzyError::UnknownTerm {
                        variable: clause.variable.clone(),
                        term: clause.term.clone(),
                    })?;
                clauses.push((vi, ti));
            }
            if rule.consequent.variable != output.name() {
                return Err(FuzzyError::UnknownVariable(rule.consequent.variable.clone()));
            }
            let consequent = output
                .term_index(&rule.consequent.term)
                .ok_or_else(|| FuzzyError::UnknownTerm {
                    variable: rule.consequent.variable.clone(),
                    term: rule.consequent.term.clone(),
                })?;
            compiled.push(CompiledRule { clauses, consequent });
        }

        let axis = output.axis();
        let consequents = output
            .terms()
            .iter()
            .map(|t| {
                let mut samples: Vec<f64> = (0..axis.grid_len())
                    .map(|i| t.mf.membership_at(axis.grid_point(i)))
                    .collect();
                if let super::MembershipFunction::Singleton { p } = t.mf {
                    samples.iter_mut().for_each(|m| *m = 0.0);
                    samples[axis.nearest_index(p)] = 1.0;
                }
                samples
            })
            .collect();

        Ok(Self {
            inputs,
            output,
            rules,
            compiled,
            consequents,
        })
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.inputs
    }

    pub fn input(&self, name: &str) -> Option<&LinguisticVariable> {
        self.inputs.iter().find(|v| v.name() == name)
    }

    pub fn output(&self) -> &LinguisticVariable {
        &self.output
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    fn resolve_inputs(&self, inputs: &[(&str, f64)]) -> Result<Vec<f64>, FuzzyError> {
        self.inputs
            .iter()
            .map(|v| {
                let (_, x) = inputs
                    .iter()
                    .find(|(n, _)| *n == v.name())
                    .ok_or_else(|| FuzzyError::MissingInput(v.name().to_string()))?;
                if x.is_finite() {
                    Ok(*x)
                } else {
                    Err(FuzzyError::NonFiniteInput(v.name().to_string()))
                }
            })
            .collect()
    }

    /// Activation strength of every rule, in rule order. Rules that do not
    /// fire are reported with strength 0.
    pub fn evaluate_rules(&self, inputs: &[(&str, f64)]) -> Result<Vec<FiredRule>, FuzzyError> {
        let crisp = self.resolve_inputs(inputs)?;
        let degrees: Vec<Vec<f64>> = self.inputs.iter().zip(&crisp).map(|(v, &x)| v.degrees(x)).collect();
        Ok(self.strengths(&degrees))
    }

    fn strengths(&self, degrees: &[Vec<f64>]) -> Vec<FiredRule> {
        self.compiled
            .iter()
            .enumerate()
            .map(|(rule, c)| FiredRule {
                rule,
                strength: c.clauses.iter().map(|&(v, t)| degrees[v][t]).fold(1.0, f64::min),
            })
            .collect()
    }

    /// Max over consequents, each clipped at its rule's strength.
    pub fn aggregate(&self, fired: &[FiredRule]) -> SampledCurve {
        let mut curve = SampledCurve::zeros(self.output.axis());
        for f in fired {
            if f.strength <= 0.0 {
                continue;
            }
            let samples = &self.consequents[self.compiled[f.rule].consequent];
            for (acc, &m) in curve.values.iter_mut().zip(samples) {
                *acc = acc.max(m.min(f.strength));
            }
        }
        curve
    }

    pub fn infer(&self, inputs: &[(&str, f64)]) -> Result<FuzzyOutcome, FuzzyError> {
        let crisp_in = self.resolve_inputs(inputs)?;
        let mut degrees = Vec::with_capacity(self.inputs.len());
        let mut memberships = Vec::with_capacity(self.inputs.len());
        for (v, &x) in self.inputs.iter().zip(&crisp_in) {
            let d = v.degrees(x);
            memberships.push(VariableDegrees {
                variable: v.name().to_string(),
                input: x,
                degrees: v
                    .terms()
                    .iter()
                    .map(|t| t.label.clone())
                    .zip(d.iter().copied())
                    .collect(),
            });
            degrees.push(d);
        }
        let fired = self.strengths(&degrees);
        let aggregate = self.aggregate(&fired);
        let (crisp, flag) = defuzzify_centroid(&aggregate);
        Ok(FuzzyOutcome {
            crisp,
            flag,
            fired,
            memberships,
            aggregate,
        })
    }
}
