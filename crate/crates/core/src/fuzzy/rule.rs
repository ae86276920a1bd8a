use std::fmt;
use std::str::FromStr;

use super::FuzzyError;

/// `variable is term`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub variable: String,
    pub term: String,
}

impl Clause {
    pub fn new(variable: impl Into<String>, term: impl Into<String>) -> Self {
        Self {
            variable: variable.into(),
            term: term.into(),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} is {}", self.variable, self.term)
    }
}

/// Conjunctive rule: every antecedent clause AND-ed, one consequent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub antecedent: Vec<Clause>,
    pub consequent: Clause,
}

impl Rule {
    pub fn new(antecedent: Vec<Clause>, consequent: Clause) -> Result<Self, FuzzyError> {
        if antecedent.is_empty() {
            return Err(FuzzyError::InvalidRule("empty antecedent".into()));
        }
        Ok(Self { antecedent, consequent })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("if ")?;
        for (i, c) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(" and ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, " then {}", self.consequent)
    }
}

/// Parses `if <var> is <term> [and <var> is <term>]* then <var> is <term>`.
/// Keywords are case-insensitive; names are case-sensitive.
impl FromStr for Rule {
    type Err = FuzzyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| FuzzyError::InvalidRule(format!("{why}: `{}`", s.trim()));
        let words: Vec<&str> = s.split_whitespace().collect();
        let kw = |i: usize, k: &str| words.get(i).is_some_and(|w| w.eq_ignore_ascii_case(k));

        if !kw(0, "if") {
            return Err(bad("rule must start with `if`"));
        }
        let mut i = 1;
        let mut antecedent = Vec::new();
        loop {
            let (Some(var), true, Some(term)) = (words.get(i), kw(i + 1, "is"), words.get(i + 2)) else {
                return Err(bad("expected `<variable> is <term>`"));
            };
            antecedent.push(Clause::new(*var, *term));
            i += 3;
            if kw(i, "and") {
                i += 1;
            } else if kw(i, "then") {
                i += 1;
                break;
            } else {
                return Err(bad("expected `and` or `then`"));
            }
        }
        let (Some(var), true, Some(term)) = (words.get(i), kw(i + 1, "is"), words.get(i + 2)) else {
            return Err(bad("expected consequent `<variable> is <term>`"));
        };
        if words.len() != i + 3 {
            return Err(bad("trailing words after consequent"));
        }
        Rule::new(antecedent, Clause::new(*var, *term))
    }
}
