//! Reference implementations written independently of the crate, used as
//! oracles by the integration tests and the acceptance runner.

#![allow(dead_code)]

use dome_core::density::Point;

/// Trapezoid `a ≤ b ≤ c ≤ d`; a zero-width edge is a vertical shoulder.
pub fn trap(x: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    if x < a || x > d {
        0.0
    } else if x >= b && x <= c {
        1.0
    } else if x < b {
        (x - a) / (b - a)
    } else {
        (d - x) / (d - c)
    }
}

pub fn tri(x: f64, a: f64, b: f64, c: f64) -> f64 {
    trap(x, a, b, b, c)
}

/// Hand-written copy of the default controller, integrated on a grid 1/16.7
/// as coarse as the engine's. The Stop singleton is an impulse carrying the
/// mass of one engine grid cell (`h · 0.5 s`).
pub fn centroid_oracle(ratio: f64, temperature: f64) -> f64 {
    let crowd = ratio.clamp(0.0, 100.0);
    let temp = temperature.clamp(0.0, 50.0);
    let no_crowd = trap(crowd, 0.0, 0.0, 25.0, 30.0);
    let medium = tri(crowd, 25.0, 50.0, 75.0);
    let crowded = tri(crowd, 70.0, 100.0, 100.0);
    let rain = trap(temp, 0.0, 0.0, 7.0, 24.0);
    let outlook = tri(temp, 7.0, 27.0, 47.0);

    let stop = rain;
    let short = outlook.min(no_crowd);
    let med = outlook.min(medium);
    let tall = outlook.min(crowded);

    let h = 0.03;
    let n = 10_001;
    let mut moment = 0.0;
    let mut mass = 0.0;
    for i in 0..n {
        let x = i as f64 * h;
        let mu = short
            .min(tri(x, 0.0, 60.0, 120.0))
            .max(med.min(tri(x, 90.0, 150.0, 210.0)))
            .max(tall.min(tri(x, 180.0, 300.0, 300.0)));
        // Trapezoid rule weights.
        let w = if i == 0 || i == n - 1 { 0.5 * h } else { h };
        moment += x * mu * w;
        mass += mu * w;
    }
    mass += stop * 0.5;
    if mass == 0.0 {
        0.0
    } else {
        moment / mass
    }
}

/// Mean distance to the `k` nearest other points, by sorting every distance.
pub fn brute_knn_mean(points: &[Point], index: usize, k: usize) -> Option<f64> {
    if points.len() < k + 1 {
        return None;
    }
    let p = points[index];
    let mut d: Vec<f64> = points
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != index)
        .map(|(_, q)| {
            let (dx, dy) = (q.x - p.x, q.y - p.y);
            (dx * dx + dy * dy).sqrt()
        })
        .collect();
    d.sort_by(f64::total_cmp);
    Some(d[..k].iter().sum::<f64>() / k as f64)
}

/// Straightforward single-threaded renderer: every pixel centre inside
/// `radius · σ` gets a Gaussian weight, renormalised per head.
pub fn brute_density(
    width: u32,
    height: u32,
    points: &[Point],
    k: usize,
    beta: f64,
    fallback: f64,
    radius: f64,
) -> Vec<f64> {
    let mut out = vec![0.0; (width * height) as usize];
    for (i, p) in points.iter().enumerate() {
        let sigma = brute_knn_mean(points, i, k).map_or(fallback, |m| (beta * m).max(0.5));
        let r = radius * sigma;
        let mut kernel = Vec::new();
        let mut total = 0.0;
        for row in 0..height {
            for col in 0..width {
                let dx = col as f64 + 0.5 - p.x;
                let dy = row as f64 + 0.5 - p.y;
                let d2 = dx * dx + dy * dy;
                if d2 <= r * r {
                    let w = (-d2 / (2.0 * sigma * sigma)).exp();
                    kernel.push(((row * width + col) as usize, w));
                    total += w;
                }
            }
        }
        for (idx, w) in kernel {
            out[idx] += w / total;
        }
    }
    out
}
