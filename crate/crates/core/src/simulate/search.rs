use crate::model::GridShape;

/// Grid offsets inside an anisotropic search ellipsoid, nearest first by
/// normalized distance.
#[derive(Debug, Clone)]
pub struct SearchTemplate {
    offsets: Vec<[i64; 3]>,
}

impl SearchTemplate {
    /// All non-zero offsets with `(dx/rx)^2 + (dy/ry)^2 + (dz/rz)^2 <= 1`
    /// that can connect two cells of `shape`. Ties in distance are ordered
    /// by `(dz, dy, dx)` so the template is fully deterministic.
    pub fn new(shape: GridShape, radii: [f64; 3]) -> Self {
        let reach = |r: f64, n: usize| (r.floor() as i64).min(n as i64 - 1).max(0);
        let (mx, my, mz) = (
            reach(radii[0], shape.nx),
            reach(radii[1], shape.ny),
            reach(radii[2], shape.nz),
        );
        let mut keyed = Vec::new();
        for dz in -mz..=mz {
            for dy in -my..=my {
                for dx in -mx..=mx {
                    if dx == 0 && dy == 0 && dz == 0 {
                        continue;
                    }
                    let u = dx as f64 / radii[0];
                    let v = dy as f64 / radii[1];
                    let w = dz as f64 / radii[2];
                    let d2 = u * u + v * v + w * w;
                    if d2 <= 1.0 {
                        keyed.push((d2, [dx, dy, dz]));
                    }
                }
            }
        }
        keyed.sort_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then_with(|| (a.1[2], a.1[1], a.1[0]).cmp(&(b.1[2], b.1[1], b.1[0])))
        });
        Self {
            offsets: keyed.into_iter().map(|(_, o)| o).collect(),
        }
    }

    pub fn offsets(&self) -> &[[i64; 3]] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
}
