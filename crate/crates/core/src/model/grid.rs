use std::fmt;

use crate::{Error, Result};

/// Cell counts of a regular block grid. Cells are indexed with x fastest,
/// then y, then z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridShape {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
}

impl GridShape {
    pub fn new(nx: usize, ny: usize, nz: usize) -> Result<Self> {
        if nx == 0 || ny == 0 || nz == 0 {
            return Err(Error::InvalidGrid(format!(
                "cell counts must be positive, got {nx}x{ny}x{nz}"
            )));
        }
        Ok(Self { nx, ny, nz })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.nx * (y + self.ny * z)
    }

    #[inline]
    pub fn coords(&self, index: usize) -> (usize, usize, usize) {
        let x = index % self.nx;
        let rest = index / self.nx;
        (x, rest % self.ny, rest / self.ny)
    }

    /// Index of a signed coordinate, or `None` when it falls outside.
    #[inline]
    pub fn checked_index(&self, x: i64, y: i64, z: i64) -> Option<usize> {
        if x < 0 || y < 0 || z < 0 {
            return None;
        }
        let (x, y, z) = (x as usize, y as usize, z as usize);
        if x >= self.nx || y >= self.ny || z >= self.nz {
            return None;
        }
        Some(self.index(x, y, z))
    }

    pub(crate) fn out_of_bounds(&self, x: i64, y: i64, z: i64) -> Error {
        Error::OutOfBounds {
            x,
            y,
            z,
            nx: self.nx,
            ny: self.ny,
            nz: self.nz,
        }
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.nx, self.ny, self.nz)
    }
}

/// Dense 3D porosity field in percent, with an optional mask of active cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid3D {
    shape: GridShape,
    values: Vec<f64>,
    mask: Option<Vec<bool>>,
}

impl Grid3D {
    pub fn new(shape: GridShape, values: Vec<f64>) -> Result<Self> {
        Self::with_mask(shape, values, None)
    }

    pub fn with_mask(shape: GridShape, values: Vec<f64>, mask: Option<Vec<bool>>) -> Result<Self> {
        if values.len() != shape.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a {shape} grid",
                values.len()
            )));
        }
        if let Some(mask) = &mask {
            if mask.len() != shape.len() {
                return Err(Error::InvalidGrid(format!(
                    "mask of length {} for a {shape} grid",
                    mask.len()
                )));
            }
        }
        for (i, &v) in values.iter().enumerate() {
            let active = mask.as_ref().is_none_or(|m| m[i]);
            if !active {
                continue;
            }
            if !v.is_finite() {
                return Err(Error::NonFinite(v));
            }
            if !(0.0..=100.0).contains(&v) {
                return Err(Error::InvalidGrid(format!(
                    "porosity {v} outside [0, 100] at cell {i}"
                )));
            }
        }
        Ok(Self {
            shape,
            values,
            mask,
        })
    }

    pub fn constant(shape: GridShape, value: f64) -> Result<Self> {
        Self::new(shape, vec![value; shape.len()])
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }

    #[inline]
    pub fn is_active(&self, index: usize) -> bool {
        self.mask.as_ref().is_none_or(|m| m[index])
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.values[self.shape.index(x, y, z)]
    }

    /// Overwrites one cell; the value must satisfy the grid invariants.
    pub fn set(&mut self, x: usize, y: usize, z: usize, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFinite(value));
        }
        if !(0.0..=100.0).contains(&value) {
            return Err(Error::InvalidGrid(format!("porosity {value} outside [0, 100]")));
        }
        let i = self.shape.index(x, y, z);
        self.values[i] = value;
        Ok(())
    }

    /// Values of active cells in index order.
    pub fn active_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(i, _)| self.is_active(*i))
            .map(|(_, &v)| v)
    }

    pub fn active_count(&self) -> usize {
        match &self.mask {
            None => self.values.len(),
            Some(m) => m.iter().filter(|&&a| a).count(),
        }
    }

    pub(crate) fn ensure_same_shape(&self, other: &Grid3D) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: self.shape.to_string(),
                found: other.shape.to_string(),
            });
        }
        Ok(())
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_is_x_fastest() {
        let s = GridShape::new(3, 4, 5).unwrap();
        assert_eq!(s.index(1, 0, 0), 1);
        assert_eq!(s.index(0, 1, 0), 3);
        assert_eq!(s.index(0, 0, 1), 12);
        for i in 0..s.len() {
            let (x, y, z) = s.coords(i);
            assert_eq!(s.index(x, y, z), i);
        }
        assert_eq!(s.checked_index(-1, 0, 0), None);
        assert_eq!(s.checked_index(3, 0, 0), None);
    }

    #[test]
    fn rejects_bad_grids() {
        let s = GridShape::new(2, 2, 1).unwrap();
        assert!(GridShape::new(0, 2, 1).is_err());
        assert!(Grid3D::new(s, vec![1.0; 3]).is_err());
        assert!(Grid3D::new(s, vec![1.0, f64::NAN, 1.0, 1.0]).is_err());
        assert!(Grid3D::new(s, vec![1.0, 101.0, 1.0, 1.0]).is_err());
        // inactive cells are not checked
        let g = Grid3D::with_mask(
            s,
            vec![1.0, f64::NAN, 1.0, 1.0],
            Some(vec![true, false, true, true]),
        )
        .unwrap();
        assert_eq!(g.active_count(), 3);
        assert_eq!(g.active_values().collect::<Vec<_>>(), vec![1.0, 1.0, 1.0]);
    }
}
