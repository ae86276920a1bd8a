use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use chrono::Local;
use dome_core::density::{
    count_from_map, evaluate_counts, parse_annotations, render_density_map, write_dmap, write_text_grid,
};
use dome_core::dome::{CROWD, WEATHER};
use dome_core::ingest::{parse_crowd_profile, parse_timestamp, parse_weather_csv, ParseReport};
use dome_core::record::Record;
use dome_core::sim::run_replay_with;
use dome_core::{load_config, Config, CrowdEstimate, DomeDecision, WeatherReading};

use crate::{ConfigArg, DecideArgs, DensityArgs, EvalArgs, Failure, SimulateArgs};

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn io_fault(e: io::Error) -> Failure {
    Failure::Data(format!("write failed: {e}"))
}

fn load(arg: &ConfigArg) -> Result<Config, Failure> {
    let Some(path) = &arg.config else {
        return Ok(Config::default());
    };
    let file = File::open(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let config = load_config(file).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    config.controller().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(config)
}

fn report_rows<T>(path: &Path, report: &ParseReport<T>) {
    for f in &report.faults {
        log::warn!("{}: skipped {f}", path.display());
    }
    for n in &report.notes {
        log::info!("{}: {n}", path.display());
    }
}

fn decision_for(a: &DecideArgs, config: &Config) -> Result<DomeDecision, Failure> {
    let at = match &a.at {
        Some(s) => parse_timestamp(s).ok_or_else(|| Failure::Usage(format!("bad --at timestamp `{s}`")))?,
        None => Local::now().naive_local(),
    };
    let weather = WeatherReading::new(a.temp, a.humidity, a.rain, at).map_err(|e| Failure::Data(e.to_string()))?;
    let crowd = match (a.crowd, a.count) {
        (Some(ratio), _) => CrowdEstimate::from_ratio(ratio, config.controller.capacity),
        (None, Some(count)) => CrowdEstimate::from_count(count, a.capacity.unwrap_or(config.controller.capacity)),
        (None, None) => return Err(Failure::Usage("one of --crowd or --count is required".into())),
    }
    .map_err(|e| Failure::Data(e.to_string()))?;
    Ok(dome_core::decide(&weather, &crowd, &config.engine))
}

pub fn decide(a: &DecideArgs) -> Result<(), Failure> {
    let config = load(&a.config)?;
    let d = decision_for(a, &config)?;
    println!("{}", d.to_record());
    Ok(())
}

pub fn explain(a: &DecideArgs) -> Result<(), Failure> {
    let config = load(&a.config)?;
    let d = decision_for(a, &config)?;
    let engine = &config.engine;
    // The rain override skips the engine; run it anyway so the trace is visible.
    let outcome = match &d.trace {
        Some(t) => t.clone(),
        None => {
            let (Some(w), Some(c)) = (d.weather, d.crowd) else {
                return Err(Failure::Data("no inputs to explain".into()));
            };
            engine
                .infer(&[(CROWD, c.ratio), (WEATHER, w.temperature)])
                .map_err(|e| Failure::Data(e.to_string()))?
        }
    };
    let mut out = io::stdout().lock();
    for v in &outcome.memberships {
        let mut r = Record::new();
        r.push("variable", &v.variable);
        r.push_fixed("input", v.input, 2);
        for (term, deg) in &v.degrees {
            r.push_fixed(term, *deg, 4);
        }
        writeln!(out, "{r}").map_err(io_fault)?;
    }
    for f in &outcome.fired {
        let rule = &engine.rules()[f.rule];
        let when = rule
            .antecedent
            .iter()
            .map(|c| format!("{}.{}", c.variable, c.term))
            .collect::<Vec<_>>()
            .join("&");
        let mut r = Record::new();
        r.push("rule", format!("r{}", f.rule + 1));
        r.push_fixed("strength", f.strength, 4);
        r.push("when", when);
        r.push("then", format!("{}.{}", rule.consequent.variable, rule.consequent.term));
        writeln!(out, "{r}").map_err(io_fault)?;
    }
    let mut r = Record::new();
    r.push_fixed("centroid", outcome.crisp, 2);
    r.push("override", if a.rain { "rain" } else { "none" });
    r.push_fixed("open_seconds", d.open_seconds, 2);
    r.push_fixed("minutes", d.minutes(), 2);
    r.push("label", d.label);
    writeln!(out, "{r}").map_err(io_fault)?;
    Ok(())
}

pub fn simulate(a: &SimulateArgs) -> Result<(), Failure> {
    let config = load(&a.config)?;
    let weather =
        parse_weather_csv(open(&a.weather)?).map_err(|e| Failure::Data(format!("{}: {e}", a.weather.display())))?;
    report_rows(&a.weather, &weather);
    let crowd = parse_crowd_profile(open(&a.crowd_profile)?, config.controller.capacity)
        .map_err(|e| Failure::Data(format!("{}: {e}", a.crowd_profile.display())))?;
    report_rows(&a.crowd_profile, &crowd);

    let mut sink: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut write_err = None;
    let summary = run_replay_with(&weather.records, &crowd.records, &config, |e| {
        if write_err.is_none() {
            if let Err(err) = writeln!(sink, "{}", e.to_record()) {
                write_err = Some(err);
            }
        }
    })
    .map_err(|e| Failure::Data(e.to_string()))?;
    if let Some(err) = write_err {
        return Err(io_fault(err));
    }
    let line = summary.to_record();
    writeln!(sink, "{line}").map_err(io_fault)?;
    sink.flush().map_err(io_fault)?;
    if a.out.is_some() {
        println!("{line}");
    }
    Ok(())
}

pub fn densitymap(a: &DensityArgs) -> Result<(), Failure> {
    let config = load(&a.config)?;
    let ann = parse_annotations(BufReader::new(open(&a.annotations)?))
        .map_err(|e| Failure::Data(format!("{}: {e}", a.annotations.display())))?;
    let map = render_density_map(&ann, &config.kernel).map_err(|e| Failure::Data(e.to_string()))?;
    let mut out = create(&a.out)?;
    write_dmap(&map, &mut out).map_err(|e| Failure::Data(e.to_string()))?;
    out.flush().map_err(io_fault)?;
    if let Some(p) = &a.text {
        let mut t = create(p)?;
        write_text_grid(&map, &mut t).map_err(|e| Failure::Data(e.to_string()))?;
        t.flush().map_err(io_fault)?;
    }
    let mut r = Record::new();
    r.push_fixed("count", count_from_map(&map), 4);
    r.push("heads", ann.points().len());
    r.push("width", map.width);
    r.push("height", map.height);
    println!("{r}");
    Ok(())
}

fn read_counts(path: &Path) -> Result<(Vec<f64>, Vec<f64>), Failure> {
    let bad = |m: String| Failure::Data(format!("{}: {m}", path.display()));
    let mut reader = csv::Reader::from_reader(open(path)?);
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| bad(format!("missing `{name}` column")))
    };
    let (pc, tc) = (col("predicted")?, col("truth")?);
    let (mut predicted, mut truth) = (Vec::new(), Vec::new());
    for row in reader.records() {
        let row = row.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize| {
            let s = row.get(i).unwrap_or("").trim();
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(format!("bad number `{s}`")))
        };
        predicted.push(num(pc)?);
        truth.push(num(tc)?);
    }
    Ok((predicted, truth))
}

pub fn eval(a: &EvalArgs) -> Result<(), Failure> {
    let (predicted, truth) = match (&a.counts, &a.predicted, &a.truth) {
        (Some(path), _, _) => read_counts(path)?,
        (None, Some(p), Some(t)) => (p.clone(), t.clone()),
        _ => return Err(Failure::Usage("give --counts or both --predicted and --truth".into())),
    };
    let m = evaluate_counts(&predicted, &truth).map_err(|e| Failure::Data(e.to_string()))?;
    let mut r = Record::new();
    r.push("n", predicted.len());
    r.push_fixed("mae", m.mae, 2);
    r.push_fixed("rmse", m.rmse, 2);
    println!("{r}");
    Ok(())
}
