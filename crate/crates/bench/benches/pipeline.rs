use std::hint::black_box;

use chrono::NaiveDate;
use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dome_core::density::{render_density_map, HeadAnnotations, KernelParams, Point};
use dome_core::dome::default_engine;
use dome_core::ingest::{Config, CrowdMeasure, CrowdProfileEntry, CrowdSource, WeatherRecord};
use dome_core::sim::run_replay;

fn inference(c: &mut Criterion) {
    let engine = default_engine();
    c.bench_function("infer crowd 72% / 30 C", |b| {
        b.iter(|| engine.infer(black_box(&[("crowd", 72.0), ("weather", 30.0)])).unwrap())
    });
}

fn density(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let points = (0..500)
        .map(|_| Point {
            x: rng.random_range(0.0..512.0),
            y: rng.random_range(0.0..384.0),
        })
        .collect();
    let ann = HeadAnnotations::new(512, 384, points).unwrap();
    let params = KernelParams::default();
    c.bench_function("render 500 heads 512x384", |b| {
        b.iter(|| render_density_map(black_box(&ann), &params).unwrap())
    });
}

fn replay(c: &mut Criterion) {
    let day = NaiveDate::from_ymd_opt(2021, 8, 1).unwrap();
    let weather: Vec<WeatherRecord> = (0..24 * 7)
        .map(|h| WeatherRecord {
            date: day + chrono::Days::new(h / 24),
            hour: (h % 24) as u32,
            minute: 0,
            day: None,
            temperature: 20.0 + (h % 24) as f64,
            humidity: 30.0,
            wind: None,
            barometer: None,
            visibility: None,
            rain: Some(h % 37 == 0),
        })
        .collect();
    let crowd: Vec<CrowdProfileEntry> = weather
        .iter()
        .enumerate()
        .map(|(i, w)| CrowdProfileEntry {
            timestamp: w.timestamp(),
            measure: CrowdMeasure::Ratio((i * 7 % 100) as f64),
            ratio: (i * 7 % 100) as f64,
            source: CrowdSource::Synthetic,
        })
        .collect();
    let config = Config::default();
    c.bench_function("replay one week", |b| {
        b.iter(|| run_replay(black_box(&weather), black_box(&crowd), &config).unwrap())
    });
}

criterion_group!(benches, inference, density, replay);
criterion_main!(benches);
