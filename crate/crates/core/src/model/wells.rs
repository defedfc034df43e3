use std::collections::HashSet;
use std::sync::Arc;

use super::{Grid3D, GridShape};
use crate::{Error, Result};

/// A drilling strategy: the number of wells and their (x, y) block columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellTemplate {
    name: String,
    columns: Vec<(i64, i64)>,
}

impl WellTemplate {
    pub fn new(name: impl Into<String>, columns: Vec<(i64, i64)>) -> Result<Self> {
        let name = name.into();
        if columns.is_empty() {
            return Err(Error::InvalidTemplate(format!("{name}: no wells")));
        }
        let mut seen = HashSet::with_capacity(columns.len());
        for c in &columns {
            if !seen.insert(*c) {
                return Err(Error::InvalidTemplate(format!(
                    "{name}: duplicate column ({}, {})",
                    c.0, c.1
                )));
            }
        }
        Ok(Self { name, columns })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn columns(&self) -> &[(i64, i64)] {
        &self.columns
    }

    pub fn n_wells(&self) -> usize {
        self.columns.len()
    }

    /// `(min_x, max_x, min_y, max_y)` over the template columns.
    pub fn bounds(&self) -> (i64, i64, i64, i64) {
        let mut b = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for &(x, y) in &self.columns {
            b.0 = b.0.min(x);
            b.1 = b.1.max(x);
            b.2 = b.2.min(y);
            b.3 = b.3.max(y);
        }
        b
    }

    /// Inclusive ranges of translations `(dx, dy)` that keep every column
    /// inside a grid of the given shape.
    pub fn valid_offsets(&self, shape: GridShape) -> Result<((i64, i64), (i64, i64))> {
        let (x0, x1, y0, y1) = self.bounds();
        let dx = (-x0, shape.nx as i64 - 1 - x1);
        let dy = (-y0, shape.ny as i64 - 1 - y1);
        if dx.0 > dx.1 || dy.0 > dy.1 {
            return Err(Error::TemplateTooLarge {
                span_x: (x1 - x0 + 1) as usize,
                span_y: (y1 - y0 + 1) as usize,
                nx: shape.nx,
                ny: shape.ny,
            });
        }
        Ok((dx, dy))
    }

    /// Pairwise column differences `(xj - xi, yj - yi)` for `i < j`.
    pub fn pairwise_differences(&self) -> Vec<(i64, i64)> {
        pairwise(&self.columns)
    }
}

pub(crate) fn pairwise(cols: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(cols.len() * cols.len().saturating_sub(1) / 2);
    for (i, a) in cols.iter().enumerate() {
        for b in &cols[i + 1..] {
            out.push((b.0 - a.0, b.1 - a.1));
        }
    }
    out
}

/// A placed copy of a template together with the full vertical column of
/// porosity read at every well.
#[derive(Debug, Clone, PartialEq)]
pub struct WellSet {
    template: Arc<WellTemplate>,
    offset: (i64, i64),
    data: Vec<Vec<f64>>,
}

impl WellSet {
    /// Builds a well set from already-extracted columns. Every column must
    /// have the same length.
    pub fn from_parts(template: Arc<WellTemplate>, offset: (i64, i64), data: Vec<Vec<f64>>) -> Result<Self> {
        if data.len() != template.n_wells() {
            return Err(Error::InvalidTemplate(format!(
                "{} columns of data for a {}-well template",
                data.len(),
                template.n_wells()
            )));
        }
        let nz = data.first().map_or(0, Vec::len);
        if nz == 0 || data.iter().any(|c| c.len() != nz) {
            return Err(Error::InvalidTemplate(
                "well columns must be non-empty and of equal length".into(),
            ));
        }
        if let Some(v) = data.iter().flatten().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(*v));
        }
        Ok(Self {
            template,
            offset,
            data,
        })
    }

    pub fn template(&self) -> &Arc<WellTemplate> {
        &self.template
    }

    pub fn offset(&self) -> (i64, i64) {
        self.offset
    }

    /// Porosity per well, top to bottom (`data[well][z]`).
    pub fn data(&self) -> &[Vec<f64>] {
        &self.data
    }

    pub fn nz(&self) -> usize {
        self.data[0].len()
    }

    /// Translated (x, y) column of each well.
    pub fn positions(&self) -> Vec<(i64, i64)> {
        self.template
            .columns()
            .iter()
            .map(|&(x, y)| (x + self.offset.0, y + self.offset.1))
            .collect()
    }

    pub fn pairwise_differences(&self) -> Vec<(i64, i64)> {
        pairwise(&self.positions())
    }

    /// All well values, well by well.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.data.iter().flatten().copied()
    }

    pub fn n_values(&self) -> usize {
        self.data.len() * self.nz()
    }

    /// `(cell index, value)` pairs in a grid of the given shape.
    pub fn conditioning(&self, shape: GridShape) -> Result<Vec<(usize, f64)>> {
        let mut out = Vec::with_capacity(self.n_values());
        for (pos, column) in self.positions().into_iter().zip(&self.data) {
            if column.len() != shape.nz {
                return Err(Error::ShapeMismatch {
                    expected: format!("{} levels", shape.nz),
                    found: format!("{} levels", column.len()),
                });
            }
            for (z, &v) in column.iter().enumerate() {
                let idx = shape
                    .checked_index(pos.0, pos.1, z as i64)
                    .ok_or_else(|| shape.out_of_bounds(pos.0, pos.1, z as i64))?;
                out.push((idx, v));
            }
        }
        Ok(out)
    }

    /// Writes the well columns back into `grid`.
    pub fn write_into(&self, grid: &mut Grid3D) -> Result<()> {
        let shape = grid.shape();
        for (idx, v) in self.conditioning(shape)? {
            let (x, y, z) = shape.coords(idx);
            grid.set(x, y, z, v)?;
        }
        Ok(())
    }
}
