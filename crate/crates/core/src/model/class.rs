use std::fmt;

use super::Grid3D;
use crate::{Error, Result};

/// Half-open porosity interval `[lower, upper[`. The bottom class may use
/// `-inf` as its lower bound and the top class `+inf` as its upper bound.
#[derive(Debug, Clone, PartialEq)]
pub struct PorosityClass {
    pub label: String,
    pub lower: f64,
    pub upper: f64,
}

impl PorosityClass {
    pub fn new(label: impl Into<String>, lower: f64, upper: f64) -> Result<Self> {
        let label = label.into();
        if lower.is_nan() || upper.is_nan() || lower >= upper {
            return Err(Error::InvalidClass(format!(
                "{label}: need lower < upper, got [{lower}, {upper}["
            )));
        }
        Ok(Self {
            label,
            lower,
            upper,
        })
    }

    /// The whole real line.
    pub fn everything(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    #[inline]
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value < self.upper
    }
}

impl fmt::Display for PorosityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}, {}[", self.label, self.lower, self.upper)
    }
}

/// Whether `value` falls in `class`.
pub fn class_indicator(value: f64, class: &PorosityClass) -> Result<bool> {
    if !value.is_finite() {
        return Err(Error::NonFinite(value));
    }
    Ok(class.contains(value))
}

/// Linear interpolation between the closest order statistics of sorted
/// data (the "type 7" rule).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Quartile classes `1Q = [-inf, Q1[`, `1Q3Q = [Q1, Q3[`, `3Q = [Q3, +inf[`
/// from the active cells of a reference map.
pub fn classes_from_quartiles(reference: &Grid3D) -> Result<Vec<PorosityClass>> {
    let mut v: Vec<f64> = reference.active_values().collect();
    if v.len() < 4 {
        return Err(Error::TooFewCells {
            needed: 4,
            found: v.len(),
        });
    }
    v.sort_by(f64::total_cmp);
    let q1 = quantile(&v, 0.25);
    let q3 = quantile(&v, 0.75);
    if q1 >= q3 {
        return Err(Error::DegenerateClasses { q1, q3 });
    }
    Ok(vec![
        PorosityClass::new("1Q", f64::NEG_INFINITY, q1)?,
        PorosityClass::new("1Q3Q", q1, q3)?,
        PorosityClass::new("3Q", q3, f64::INFINITY)?,
    ])
}

/// Fraction of active cells whose value lies in `class`.
pub fn class_proportion(grid: &Grid3D, class: &PorosityClass) -> Result<f64> {
    let (mut hits, mut total) = (0usize, 0usize);
    for v in grid.active_values() {
        total += 1;
        if class.contains(v) {
            hits += 1;
        }
    }
    if total == 0 {
        return Err(Error::Empty("grid has no active cells"));
    }
    Ok(hits as f64 / total as f64)
}
