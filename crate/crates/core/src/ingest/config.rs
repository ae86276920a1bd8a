//! Unified configuration file.
//!
//! Line-oriented, UTF-8. `#` starts a comment that runs to end of line;
//! blank lines are ignored. Sections:
//!
//! ```text
//! [controller]            capacity, domes, travel_seconds,
//!                         tick_offset_seconds, staleness_seconds
//! [kernel]                k, beta, fallback_sigma, truncation_radius
//! [input <name>]          axis = <lo> <hi> <step>
//!                         <Label> = <shape> <breakpoint>...
//! [output <name>]         same body as [input]
//! [rules]                 if <var> is <Term> [and <var> is <Term>]... then <var> is <Term>
//! ```
//!
//! Shapes are `triangular a b c`, `trapezoidal a b c d` and `singleton p`.
//! Omitted sections and keys keep their defaults. An `[input]` or `[output]`
//! section replaces the whole term set of that variable; its `axis` line may
//! be omitted only when the variable exists in the defaults. A `[rules]`
//! section replaces the whole rule base.

use std::fmt;
use std::io::Read;

use thiserror::Error;

use crate::density::KernelParams;
use crate::dome::{default_crowd, default_rules, default_time, default_weather, Controller, ControllerConfig};
use crate::fuzzy::{Engine, LinguisticVariable, MembershipFunction, Rule, UniverseAxis};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}", self.render())]
pub struct ConfigError {
    /// 1-based; 0 when the problem is not tied to one line.
    pub line: usize,
    pub section: String,
    pub message: String,
}

impl ConfigError {
    fn render(&self) -> String {
        let mut s = String::from("config");
        if self.line > 0 {
            s.push_str(&format!(" line {}", self.line));
        }
        if !self.section.is_empty() {
            s.push_str(&format!(" [{}]", self.section));
        }
        format!("{s}: {}", self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub engine: Engine,
    pub controller: ControllerConfig,
    pub kernel: KernelParams,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            engine: crate::dome::default_engine(),
            controller: ControllerConfig::default(),
            kernel: KernelParams::default(),
        }
    }
}

impl Config {
    pub fn controller(&self) -> Result<Controller, crate::dome::DomeError> {
        Controller::new(self.engine.clone(), self.controller.clone())
    }
}

fn write_variable(f: &mut fmt::Formatter<'_>, kind: &str, v: &LinguisticVariable) -> fmt::Result {
    let a = v.axis();
    writeln!(f, "[{kind} {}]", v.name())?;
    writeln!(f, "axis = {} {} {}", a.lo(), a.hi(), a.step())?;
    for t in v.terms() {
        writeln!(f, "{} = {}", t.label, t.mf)?;
    }
    writeln!(f)
}

/// Canonical text form; `load_config` reads it back to an equal value.
impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.controller;
        writeln!(f, "[controller]")?;
        writeln!(f, "capacity = {}", c.capacity)?;
        writeln!(f, "domes = {}", c.dome_count)?;
        writeln!(f, "travel_seconds = {}", c.travel_seconds)?;
        writeln!(f, "tick_offset_seconds = {}", c.tick_offset_seconds)?;
        writeln!(f, "staleness_seconds = {}", c.staleness_seconds)?;
        writeln!(f)?;
        let k = &self.kernel;
        writeln!(f, "[kernel]")?;
        writeln!(f, "k = {}", k.k)?;
        writeln!(f, "beta = {}", k.beta)?;
        writeln!(f, "fallback_sigma = {}", k.fallback_sigma)?;
        writeln!(f, "truncation_radius = {}", k.truncation_radius)?;
        writeln!(f)?;
        for v in self.engine.inputs() {
            write_variable(f, "input", v)?;
        }
        write_variable(f, "output", self.engine.output())?;
        writeln!(f, "[rules]")?;
        for r in self.engine.rules() {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Section {
    Controller,
    Kernel,
    Input(String),
    Output(String),
    Rules,
}

impl Section {
    fn label(&self) -> String {
        match self {
            Self::Controller => "controller".into(),
            Self::Kernel => "kernel".into(),
            Self::Input(n) => format!("input {n}"),
            Self::Output(n) => format!("output {n}"),
            Self::Rules => "rules".into(),
        }
    }
}

struct VarDraft {
    name: String,
    line: usize,
    axis: Option<(f64, f64, f64)>,
    terms: Vec<(String, MembershipFunction)>,
}

struct Parser {
    section: Option<Section>,
    seen: Vec<Section>,
    keys: Vec<String>,
    controller: ControllerConfig,
    kernel: KernelParams,
    inputs: Vec<VarDraft>,
    output: Option<VarDraft>,
    rules: Option<Vec<Rule>>,
}

fn numbers(s: &str) -> Option<Vec<f64>> {
    s.split_whitespace().map(|w| w.parse().ok()).collect()
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

impl Parser {
    fn err(&self, line: usize, message: impl Into<String>) -> ConfigError {
        ConfigError {
            line,
            section: self.section.as_ref().map(Section::label).unwrap_or_default(),
            message: message.into(),
        }
    }

    fn header(&mut self, line: usize, body: &str) -> Result<(), ConfigError> {
        let words: Vec<&str> = body.split_whitespace().collect();
        let section = match words.as_slice() {
            ["controller"] => Section::Controller,
            ["kernel"] => Section::Kernel,
            ["rules"] => Section::Rules,
            ["input", name] if is_identifier(name) => Section::Input(name.to_string()),
            ["output", name] if is_identifier(name) => Section::Output(name.to_string()),
            _ => {
                self.section = None;
                return Err(self.err(line, format!("unknown section `[{body}]`")));
            }
        };
        let duplicate = self.seen.iter().any(|s| match (s, &section) {
            (Section::Output(_), Section::Output(_)) => true,
            (a, b) => a == b,
        });
        self.section = Some(section.clone());
        if duplicate {
            return Err(self.err(line, "section appears more than once"));
        }
        self.seen.push(section.clone());
        self.keys.clear();
        match section {
            Section::Input(name) => self.inputs.push(VarDraft {
                name,
                line,
                axis: None,
                terms: Vec::new(),
            }),
            Section::Output(name) => {
                self.output = Some(VarDraft {
                    name,
                    line,
                    axis: None,
                    terms: Vec::new(),
                })
            }
            Section::Rules => self.rules = Some(Vec::new()),
            _ => {}
        }
        Ok(())
    }

    fn entry(&mut self, line: usize, text: &str) -> Result<(), ConfigError> {
        let Some(section) = self.section.clone() else {
            return Err(self.err(line, "entry outside of any section"));
        };
        if section == Section::Rules {
            let rule: Rule = text.parse().map_err(|e| self.err(line, format!("{e}")))?;
            self.rules.as_mut().expect("rules section open").push(rule);
            return Ok(());
        }
        let Some((key, value)) = text.split_once('=') else {
            return Err(self.err(line, format!("expected `key = value`, found `{text}`")));
        };
        let (key, value) = (key.trim(), value.trim());
        if !is_identifier(key) {
            return Err(self.err(line, format!("bad key `{key}`")));
        }
        if self.keys.iter().any(|k| k == key) {
            return Err(self.err(line, format!("`{key}` given more than once")));
        }
        self.keys.push(key.to_string());

        match section {
            Section::Controller => self.controller_key(line, key, value),
            Section::Kernel => self.kernel_key(line, key, value),
            Section::Input(_) | Section::Output(_) => self.variable_key(line, key, value),
            Section::Rules => unreachable!(),
        }
    }

    fn parse_num<T: std::str::FromStr>(&self, line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
        value
            .parse()
            .map_err(|_| self.err(line, format!("`{key}`: cannot parse `{value}`")))
    }

    fn controller_key(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "capacity" => self.controller.capacity = self.parse_num(line, key, value)?,
            "domes" => self.controller.dome_count = self.parse_num(line, key, value)?,
            "travel_seconds" => self.controller.travel_seconds = self.parse_num(line, key, value)?,
            "tick_offset_seconds" => self.controller.tick_offset_seconds = self.parse_num(line, key, value)?,
            "staleness_seconds" => self.controller.staleness_seconds = self.parse_num(line, key, value)?,
            _ => return Err(self.err(line, format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    fn kernel_key(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "k" => self.kernel.k = self.parse_num(line, key, value)?,
            "beta" => self.kernel.beta = self.parse_num(line, key, value)?,
            "fallback_sigma" => self.kernel.fallback_sigma = self.parse_num(line, key, value)?,
            "truncation_radius" => self.kernel.truncation_radius = self.parse_num(line, key, value)?,
            _ => return Err(self.err(line, format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    fn variable_key(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        let draft_err = |p: &Self, m: String| p.err(line, m);
        if key == "axis" {
            let v = numbers(value)
                .filter(|v| v.len() == 3)
                .ok_or_else(|| draft_err(self, format!("axis needs `<lo> <hi> <step>`, found `{value}`")))?;
            UniverseAxis::new("axis", v[0], v[1], v[2]).map_err(|e| draft_err(self, e.to_string()))?;
            self.current_draft().axis = Some((v[0], v[1], v[2]));
            return Ok(());
        }
        let (shape, rest) = value.split_once(char::is_whitespace).unwrap_or((value, ""));
        let points = numbers(rest).ok_or_else(|| draft_err(self, format!("term `{key}`: bad breakpoints `{rest}`")))?;
        let mf = MembershipFunction::from_parts(shape, &points)
            .map_err(|e| draft_err(self, format!("term `{key}`: {e}")))?;
        self.current_draft().terms.push((key.to_string(), mf));
        Ok(())
    }

    fn current_draft(&mut self) -> &mut VarDraft {
        match self.section {
            Some(Section::Output(_)) => self.output.as_mut().expect("output open"),
            _ => self.inputs.last_mut().expect("input open"),
        }
    }
}

fn build_variable(
    draft: VarDraft,
    kind: &str,
    default: Option<&LinguisticVariable>,
) -> Result<LinguisticVariable, ConfigError> {
    let err = |m: String| ConfigError {
        line: draft.line,
        section: format!("{kind} {}", draft.name),
        message: m,
    };
    let (lo, hi, step) = match (draft.axis, default) {
        (Some(a), _) => a,
        (None, Some(d)) => (d.axis().lo(), d.axis().hi(), d.axis().step()),
        (None, None) => return Err(err("new variable needs an `axis` line".into())),
    };
    if draft.terms.is_empty() {
        return Err(err("no terms defined".into()));
    }
    let axis = UniverseAxis::new(draft.name.clone(), lo, hi, step).map_err(|e| err(e.to_string()))?;
    LinguisticVariable::new(axis, draft.terms).map_err(|e| err(e.to_string()))
}

/// Reads and validates a configuration. Empty input yields the defaults.
pub fn load_config(mut input: impl Read) -> Result<Config, ConfigError> {
    let mut text = String::new();
    input.read_to_string(&mut text).map_err(|e| ConfigError {
        line: 0,
        section: String::new(),
        message: e.to_string(),
    })?;

    let mut p = Parser {
        section: None,
        seen: Vec::new(),
        keys: Vec::new(),
        controller: ControllerConfig::default(),
        kernel: KernelParams::default(),
        inputs: Vec::new(),
        output: None,
        rules: None,
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(body) = content.strip_prefix('[') {
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| p.err(line, format!("unterminated section header `{content}`")))?;
            p.header(line, body.trim())?;
        } else {
            p.entry(line, content)?;
        }
    }

    let whole = |section: &str, message: String| ConfigError {
        line: 0,
        section: section.to_string(),
        message,
    };
    p.controller
        .validate()
        .map_err(|e| whole("controller", e.to_string()))?;
    p.kernel.validate().map_err(|e| whole("kernel", e.to_string()))?;

    let mut inputs = vec![default_crowd(), default_weather()];
    for draft in p.inputs {
        let pos = inputs.iter().position(|v| v.name() == draft.name);
        let var = build_variable(draft, "input", pos.map(|i| &inputs[i]))?;
        match pos {
            Some(i) => inputs[i] = var,
            None => inputs.push(var),
        }
    }
    let output = match p.output {
        None => default_time(),
        Some(draft) => {
            let default = default_time();
            let d = (draft.name == default.name()).then_some(&default);
            build_variable(draft, "output", d)?
        }
    };
    let rules = p.rules.unwrap_or_else(default_rules);
    let engine = Engine::new(inputs, output, rules).map_err(|e| whole("rules", e.to_string()))?;

    Ok(Config {
        engine,
        controller: p.controller,
        kernel: p.kernel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(s: &str) -> Result<Config, ConfigError> {
        load_config(s.as_bytes())
    }

    #[test]
    fn empty_is_default() {
        assert_eq!(load("").unwrap(), Config::default());
        assert_eq!(load("# nothing\n\n").unwrap(), Config::default());
    }

    #[test]
    fn display_round_trips() {
        let c = Config::default();
        assert_eq!(load(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn capacity_override() {
        let c = load("[controller]\ncapacity = 500000 # smaller venue\n").unwrap();
        assert_eq!(c.controller.capacity, 500_000);
        assert_eq!(c.controller.dome_count, 27);
        assert_eq!(c.engine, Config::default().engine);
    }

    #[test]
    fn malformed_triangle_names_term() {
        let e = load("[input crowd]\nNoCrowd = trapezoidal 0 0 25 30\nMedium = triangular 50 25 75\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(e.section, "input crowd");
        assert!(e.message.contains("Medium"), "{e}");
        assert!(e.to_string().starts_with("config line 3 [input crowd]:"));
    }

    #[test]
    fn replaces_term_set() {
        let c = load(
            "[input crowd]\nLow = trapezoidal 0 0 40 60\nHigh = trapezoidal 40 60 100 100\n\
                      [rules]\nif weather is Rain then time is Stop\n\
                      if weather is Outlook and crowd is Low then time is Short\n\
                      if weather is Outlook and crowd is High then time is Tall\n",
        )
        .unwrap();
        assert_eq!(c.engine.input("crowd").unwrap().terms().len(), 2);
        assert_eq!(c.engine.rules().len(), 3);
    }

    #[test]
    fn diagnostics() {
        let cases = [
            ("capacity = 5\n", 1),
            ("[controller]\ncapacity = lots\n", 2),
            ("[controller]\nspeed = 3\n", 2),
            ("[controller]\ncapacity = 1\ncapacity = 2\n", 3),
            ("[weird]\n", 1),
            ("[kernel\n", 1),
            ("[rules]\nweather is Rain\n", 2),
            ("[input crowd]\naxis = 0 100\n", 2),
            ("[input crowd]\nA = blob 1 2\n", 2),
            ("[kernel]\n[kernel]\n", 2),
        ];
        for (text, line) in cases {
            let e = load(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?} -> {e}");
        }
        // Whole-file checks report line 0.
        let e = load("[controller]\ncapacity = 0\n").unwrap_err();
        assert_eq!((e.line, e.section.as_str()), (0, "controller"));
        let e = load("[rules]\nif weather is Snow then time is Stop\n").unwrap_err();
        assert_eq!(e.section, "rules");
        let e = load("[input wind]\nCalm = triangular 0 0 5\n").unwrap_err();
        assert!(e.message.contains("axis"));
        let e = load("[kernel]\ntruncation_radius = 1\n").unwrap_err();
        assert_eq!(e.section, "kernel");
    }
}
