use crate::model::Grid3D;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagPoint {
    /// Lag length in blocks.
    pub lag: f64,
    pub semivariance: f64,
    pub pairs: usize,
}

/// Classical semivariogram estimator along an integer step `direction`,
/// at multiples `lags` of that step. Lags without any active pair are
/// left out.
pub fn experimental_variogram(grid: &Grid3D, direction: [i64; 3], lags: &[usize]) -> Result<Vec<LagPoint>> {
    if direction == [0, 0, 0] {
        return Err(Error::InvalidGrid("zero lag direction".into()));
    }
    let shape = grid.shape();
    let extent = |d: i64, n: usize| d == 0 || n >= 2;
    if !(extent(direction[0], shape.nx) && extent(direction[1], shape.ny) && extent(direction[2], shape.nz)) {
        return Err(Error::InvalidGrid(format!("fewer than 2 cells along {direction:?} in a {shape} grid")));
    }
    let step_len = ((direction[0] * direction[0] + direction[1] * direction[1] + direction[2] * direction[2]) as f64).sqrt();
    let values = grid.values();
    let mut out = Vec::with_capacity(lags.len());
    for &k in lags {
        let (dx, dy, dz) = (direction[0] * k as i64, direction[1] * k as i64, direction[2] * k as i64);
        let mut sum = 0.0;
        let mut pairs = 0usize;
        for (i, &a) in values.iter().enumerate() {
            if !grid.is_active(i) {
                continue;
            }
            let (x, y, z) = shape.coords(i);
            let Some(j) = shape.checked_index(x as i64 + dx, y as i64 + dy, z as i64 + dz) else {
                continue;
            };
            if !grid.is_active(j) {
                continue;
            }
            let d = values[j] - a;
            sum += d * d;
            pairs += 1;
        }
        if pairs > 0 && k > 0 {
            out.push(LagPoint {
                lag: k as f64 * step_len,
                semivariance: 0.5 * sum / pairs as f64,
                pairs,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalFit {
    pub range: f64,
    pub sill: f64,
}

/// Pair-weighted least-squares fit of a zero-nugget spherical model.
/// Candidate ranges run from 0.5 to three times the longest lag in steps
/// of 0.01 blocks; the sill has a closed form for each candidate.
pub fn fit_spherical_range(points: &[LagPoint]) -> Option<SphericalFit> {
    let max_lag = points.iter().map(|p| p.lag).fold(0.0, f64::max);
    if points.len() < 2 || max_lag <= 0.0 {
        return None;
    }
    let shape = |h: f64, a: f64| {
        let r = h / a;
        if r >= 1.0 {
            1.0
        } else {
            r * (1.5 - 0.5 * r * r)
        }
    };
    let mut best: Option<(f64, SphericalFit)> = None;
    let steps = ((3.0 * max_lag - 0.5) / 0.01).ceil() as usize;
    for s in 0..=steps {
        let a = 0.5 + s as f64 * 0.01;
        let (mut fg, mut ff) = (0.0, 0.0);
        for p in points {
            let f = shape(p.lag, a);
            let w = p.pairs as f64;
            fg += w * f * p.semivariance;
            ff += w * f * f;
        }
        if ff == 0.0 {
            continue;
        }
        let sill = fg / ff;
        let sse: f64 = points
            .iter()
            .map(|p| {
                let r = p.semivariance - sill * shape(p.lag, a);
                p.pairs as f64 * r * r
            })
            .sum();
        if best.as_ref().is_none_or(|b| sse < b.0) {
            best = Some((sse, SphericalFit { range: a, sill }));
        }
    }
    best.map(|b| b.1)
}
