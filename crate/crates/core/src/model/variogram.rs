use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Variogram structure. Only the spherical model is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    #[default]
    Spherical,
}

/// Anisotropic single-structure variogram.
///
/// Ranges are in block units along the principal directions labelled by
/// (azimuth; dip): `(90;0)` is the grid x axis, `(0;0)` the y axis and
/// `(0;90)` the vertical z axis. Principal axes coincide with grid axes, so
/// a lag needs no rotation before anisotropy scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct VariogramModel {
    label: String,
    kind: ModelKind,
    ranges: [f64; 3],
    sill: f64,
    nugget: f64,
    inv_ranges: [f64; 3],
}

impl VariogramModel {
    pub fn spherical(label: impl Into<String>, ranges: [f64; 3], sill: f64, nugget: f64) -> Result<Self> {
        let label = label.into();
        if ranges.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidVariogram(format!(
                "{label}: ranges must be positive, got {ranges:?}"
            )));
        }
        if !(sill.is_finite() && sill > 0.0) {
            return Err(Error::InvalidVariogram(format!("{label}: sill must be positive, got {sill}")));
        }
        if !(nugget.is_finite() && nugget >= 0.0) {
            return Err(Error::InvalidVariogram(format!(
                "{label}: nugget must be non-negative, got {nugget}"
            )));
        }
        Ok(Self {
            label,
            kind: ModelKind::Spherical,
            inv_ranges: [1.0 / ranges[0], 1.0 / ranges[1], 1.0 / ranges[2]],
            ranges,
            sill,
            nugget,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn ranges(&self) -> [f64; 3] {
        self.ranges
    }

    pub fn sill(&self) -> f64 {
        self.sill
    }

    pub fn nugget(&self) -> f64 {
        self.nugget
    }

    /// Same structure with a different sill.
    pub fn with_sill(&self, sill: f64) -> Result<Self> {
        Self::spherical(self.label.clone(), self.ranges, sill, self.nugget)
    }

    /// Ratio of each range to the matching map extent.
    pub fn extent_ratio(&self, extent: [f64; 3]) -> [f64; 3] {
        [
            self.ranges[0] / extent[0],
            self.ranges[1] / extent[1],
            self.ranges[2] / extent[2],
        ]
    }

    /// Length of the lag after dividing each component by its range.
    #[inline]
    pub fn normalized_distance(&self, lag: [f64; 3]) -> f64 {
        let u = lag[0] * self.inv_ranges[0];
        let v = lag[1] * self.inv_ranges[1];
        let w = lag[2] * self.inv_ranges[2];
        (u * u + v * v + w * w).sqrt()
    }

    /// Semivariance at `lag`.
    #[inline]
    pub fn gamma(&self, lag: [f64; 3]) -> f64 {
        let h = self.normalized_distance(lag);
        if h == 0.0 {
            0.0
        } else {
            self.nugget + self.sill * spherical_shape(h)
        }
    }

    /// Covariance `C(h) = C(0) - gamma(h)`.
    #[inline]
    pub fn covariance(&self, lag: [f64; 3]) -> f64 {
        self.total_sill() - self.gamma(lag)
    }

    /// `nugget + sill`, the covariance at lag zero.
    #[inline]
    pub fn total_sill(&self) -> f64 {
        self.nugget + self.sill
    }
}

#[inline]
fn spherical_shape(h: f64) -> f64 {
    if h >= 1.0 {
        1.0
    } else {
        h * (1.5 - 0.5 * h * h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn iso(a: f64) -> VariogramModel {
        VariogramModel::spherical("iso", [a, a, a], 1.0, 0.0).unwrap()
    }

    #[test]
    fn spherical_values() {
        let m = iso(10.0);
        assert_eq!(m.gamma([0.0, 0.0, 0.0]), 0.0);
        // 1.5 * 0.5 - 0.5 * 0.125
        assert_abs_diff_eq!(m.gamma([5.0, 0.0, 0.0]), 0.6875, epsilon = 1e-15);
        assert_abs_diff_eq!(m.covariance([5.0, 0.0, 0.0]), 0.3125, epsilon = 1e-15);
        assert_eq!(m.covariance([0.0, 0.0, 0.0]), 1.0);
        assert_eq!(m.covariance([10.0, 0.0, 0.0]), 0.0);
        assert_eq!(m.gamma([30.0, 30.0, 30.0]), 1.0);

        let n = VariogramModel::spherical("n", [10.0, 5.0, 2.0], 2.0, 0.5).unwrap();
        assert_eq!(n.gamma([0.0, 0.0, 0.0]), 0.0);
        assert_eq!(n.gamma([0.0, 0.0, 2.0]), 2.5);
        assert_eq!(n.covariance([0.0, 0.0, 0.0]), 2.5);
    }

    #[test]
    fn anisotropy_scales_each_axis() {
        let m = VariogramModel::spherical("a", [20.0, 10.0, 5.0], 1.0, 0.0).unwrap();
        let g = m.gamma([10.0, 0.0, 0.0]);
        assert_eq!(g, m.gamma([0.0, 5.0, 0.0]));
        assert_eq!(g, m.gamma([0.0, 0.0, 2.5]));
        assert_eq!(m.extent_ratio([40.0, 20.0, 10.0]), [0.5, 0.5, 0.5]);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(VariogramModel::spherical("x", [0.0, 1.0, 1.0], 1.0, 0.0).is_err());
        assert!(VariogramModel::spherical("x", [1.0, 1.0, 1.0], 0.0, 0.0).is_err());
        assert!(VariogramModel::spherical("x", [1.0, 1.0, 1.0], 1.0, -0.1).is_err());
    }

    proptest! {
        #[test]
        fn gamma_nondecreasing_along_rays(
            dir in prop::array::uniform3(-1.0f64..1.0),
            ranges in prop::array::uniform3(0.5f64..50.0),
            nugget in 0.0f64..1.0,
        ) {
            prop_assume!(dir.iter().map(|d| d * d).sum::<f64>() > 1e-6);
            let m = VariogramModel::spherical("p", ranges, 1.3, nugget).unwrap();
            let mut last = 0.0;
            for step in 0..100 {
                let t = step as f64;
                let g = m.gamma([dir[0] * t, dir[1] * t, dir[2] * t]);
                prop_assert!(g >= last);
                prop_assert!(g <= m.total_sill());
                last = g;
            }
        }

        #[test]
        fn covariance_gamma_identity(lag in prop::array::uniform3(-60.0f64..60.0)) {
            let m = VariogramModel::spherical("p", [33.0, 13.0, 5.0], 4.2, 0.3).unwrap();
            prop_assert!((m.covariance([0.0; 3]) - m.covariance(lag) - m.gamma(lag)).abs() <= 1e-12);
        }
    }
}
