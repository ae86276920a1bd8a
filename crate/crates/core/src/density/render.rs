use rayon::prelude::*;

use super::{DensityError, DensityMap, HeadAnnotations, KdTree, KernelParams, Point};

/// Smallest σ a kernel may have, in pixels.
pub const MIN_SIGMA: f64 = 0.5;

/// `beta · mean_distance`; `fallback_sigma` when there are too few
/// neighbours, and never below [`MIN_SIGMA`].
pub fn adaptive_sigma(mean_distance: Option<f64>, params: &KernelParams) -> f64 {
    match mean_distance {
        None => params.fallback_sigma,
        Some(d) => (params.beta * d).max(MIN_SIGMA),
    }
}

struct Patch {
    col0: usize,
    row0: usize,
    cols: usize,
    values: Vec<f64>,
}

fn kernel_patch(p: Point, sigma: f64, params: &KernelParams, width: u32, height: u32) -> Patch {
    let radius = params.truncation_radius * sigma;
    let r2 = radius * radius;
    let inv = 1.0 / (2.0 * sigma * sigma);

    // Offsets are computed from the integer pixel and the fractional part so
    // that integer shifts of the head reproduce the same kernel bit for bit.
    let (px, py) = (p.x.floor(), p.y.floor());
    let (fx, fy) = (p.x - px, p.y - py);
    let reach = radius.ceil() as i64 + 1;
    let (px, py) = (px as i64, py as i64);

    let col0 = (px - reach).max(0);
    let col1 = (px + reach).min(width as i64 - 1);
    let row0 = (py - reach).max(0);
    let row1 = (py + reach).min(height as i64 - 1);
    let cols = (col1 - col0 + 1) as usize;
    let rows = (row1 - row0 + 1) as usize;

    let mut values = vec![0.0; cols * rows];
    let mut mass = 0.0;
    for (ri, row) in (row0..=row1).enumerate() {
        let dy = (row - py) as f64 + 0.5 - fy;
        for (ci, col) in (col0..=col1).enumerate() {
            let dx = (col - px) as f64 + 0.5 - fx;
            let d2 = dx * dx + dy * dy;
            if d2 <= r2 {
                let w = (-d2 * inv).exp();
                values[ri * cols + ci] = w;
                mass += w;
            }
        }
    }
    if mass > 0.0 {
        values.iter_mut().for_each(|v| *v /= mass);
    } else {
        // Unreachable for σ ≥ MIN_SIGMA, kept so mass is conserved regardless.
        let idx = (py - row0) as usize * cols + (px - col0) as usize;
        values[idx] = 1.0;
    }
    Patch {
        col0: col0 as usize,
        row0: row0 as usize,
        cols,
        values,
    }
}

/// Renders one renormalised Gaussian per head.
///
/// Kernels are computed in parallel and accumulated in annotation order, so
/// the result does not depend on thread scheduling.
pub fn render_density_map(annotations: &HeadAnnotations, params: &KernelParams) -> Result<DensityMap, DensityError> {
    params.validate()?;
    let (width, height) = (annotations.width(), annotations.height());
    if width == 0 || height == 0 {
        return Err(DensityError::ZeroSize { width, height });
    }
    let points = annotations.points();
    let tree = KdTree::new(points);
    let patches: Vec<Patch> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let sigma = adaptive_sigma(tree.mean_distance(i, params.k), params);
            kernel_patch(points[i], sigma, params, width, height)
        })
        .collect();

    let mut map = DensityMap::zeros(width, height);
    let stride = width as usize;
    for patch in &patches {
        for (ri, row) in patch.values.chunks(patch.cols).enumerate() {
            let start = (patch.row0 + ri) * stride + patch.col0;
            for (dst, v) in map.values[start..start + patch.cols].iter_mut().zip(row) {
                *dst += v;
            }
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::count_from_map;

    fn heads(w: u32, h: u32, pts: &[(f64, f64)]) -> HeadAnnotations {
        HeadAnnotations::new(w, h, pts.iter().map(|&(x, y)| Point { x, y }).collect()).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let p = KernelParams::default();
        assert!((adaptive_sigma(Some(10.0), &p) - 3.0).abs() < 1e-12);
        assert_eq!(adaptive_sigma(None, &p), 15.0);
        assert_eq!(adaptive_sigma(Some(1.0), &p), 0.5);
        assert_eq!(adaptive_sigma(Some(0.0), &p), 0.5);
    }

    #[test]
    fn single_head_sums_to_one() {
        let p = KernelParams::default();
        let m = render_density_map(&heads(64, 64, &[(32.0, 32.0)]), &p).unwrap();
        assert!((count_from_map(&m) - 1.0).abs() < 1e-9);
        let m = render_density_map(&heads(64, 64, &[(0.0, 0.0)]), &p).unwrap();
        assert!((count_from_map(&m) - 1.0).abs() < 1e-9);
        assert!(m.values.iter().all(|&v| v >= 0.0));
        // Peak sits on the head's pixel.
        let (imax, _) = m
            .values
            .iter()
            .enumerate()
            .fold((0, 0.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        assert_eq!(imax, 0);
    }

    #[test]
    fn empty_annotation_set_is_zero() {
        let m = render_density_map(&heads(16, 8, &[]), &KernelParams::default()).unwrap();
        assert_eq!(m.values.len(), 128);
        assert_eq!(count_from_map(&m), 0.0);
    }

    #[test]
    fn bad_params_rejected() {
        let p = KernelParams {
            truncation_radius: 1.0,
            ..Default::default()
        };
        assert!(render_density_map(&heads(8, 8, &[(1.0, 1.0)]), &p).is_err());
    }
}
