use statrs::distribution::{ContinuousCDF, Normal};

use crate::{Error, Result};

/// Empirical global distribution with a normal-score table.
///
/// Each distinct value `z_k` maps to the standard normal quantile of its
/// mid-rank probability. Transforms interpolate linearly between table
/// entries and clamp outside them, so back-transformed values never leave
/// `[min, max]` of the data.
#[derive(Debug, Clone)]
pub struct GlobalCdf {
    z: Vec<f64>,
    y: Vec<f64>,
    n: usize,
    mean: f64,
    variance: f64,
}

impl GlobalCdf {
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Result<Self> {
        let mut v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return Err(Error::EmptyCdf);
        }
        if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite(*bad));
        }
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let mean = v.iter().sum::<f64>() / n as f64;
        let variance = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;

        let normal = Normal::standard();
        let mut z = Vec::new();
        let mut y = Vec::new();
        let mut i = 0;
        while i < n {
            let mut j = i + 1;
            while j < n && v[j] == v[i] {
                j += 1;
            }
            let p = (i as f64 + 0.5 * (j - i) as f64) / n as f64;
            z.push(v[i]);
            y.push(normal.inverse_cdf(p));
            i = j;
        }
        Ok(Self {
            z,
            y,
            n,
            mean,
            variance,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Population variance of the data.
    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn min(&self) -> f64 {
        self.z[0]
    }

    pub fn max(&self) -> f64 {
        self.z[self.z.len() - 1]
    }

    /// Distinct data values in increasing order.
    pub fn support(&self) -> &[f64] {
        &self.z
    }

    /// Original units to normal score.
    pub fn to_normal(&self, value: f64) -> f64 {
        interpolate(&self.z, &self.y, value)
    }

    /// Normal score to original units.
    pub fn from_normal(&self, score: f64) -> f64 {
        interpolate(&self.y, &self.z, score)
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let last = xs.len() - 1;
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[last] {
        return ys[last];
    }
    let hi = xs.partition_point(|&v| v <= x);
    let lo = hi - 1;
    let t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    ys[lo] + t * (ys[hi] - ys[lo])
}
