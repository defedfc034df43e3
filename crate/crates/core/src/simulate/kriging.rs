use crate::model::VariogramModel;

/// A conditioning value and its lag from the target node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub lag: [f64; 3],
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrigingEstimate {
    pub mean: f64,
    pub variance: f64,
}

/// Counters for numerical trouble met while solving kriging systems.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KrigingDiagnostics {
    pub systems: u64,
    pub negative_variance_clamped: u64,
    pub dropped_neighbors: u64,
    pub singular_fallbacks: u64,
}

impl KrigingDiagnostics {
    pub fn merge(&mut self, other: &KrigingDiagnostics) {
        self.systems += other.systems;
        self.negative_variance_clamped += other.negative_variance_clamped;
        self.dropped_neighbors += other.dropped_neighbors;
        self.singular_fallbacks += other.singular_fallbacks;
    }
}

/// Simple-kriging normal equations with reusable buffers.
///
/// After [`KrigingSystem::solve`], the covariance matrix, right-hand side
/// and weights of the last system stay available for inspection.
#[derive(Debug, Default)]
pub struct KrigingSystem {
    neighbors: Vec<Neighbor>,
    matrix: Vec<f64>,
    chol: Vec<f64>,
    rhs: Vec<f64>,
    weights: Vec<f64>,
    diagnostics: KrigingDiagnostics,
}

impl KrigingSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn diagnostics(&self) -> &KrigingDiagnostics {
        &self.diagnostics
    }

    /// Neighbors actually used by the last solve.
    pub fn neighbors(&self) -> &[Neighbor] {
        &self.neighbors
    }

    /// Row-major covariance matrix among the neighbors of the last solve.
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    /// Covariances between each neighbor and the target.
    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Solves for the simple-kriging mean and variance at the target.
    ///
    /// A singular system loses the farther member of its most correlated
    /// neighbor pair and is retried; a system that stays singular falls back
    /// to the global mean and total variance.
    pub fn solve(&mut self, model: &VariogramModel, neighbors: &[Neighbor], global_mean: f64) -> KrigingEstimate {
        self.diagnostics.systems += 1;
        self.neighbors.clear();
        self.neighbors.extend_from_slice(neighbors);
        let c0 = model.total_sill();

        loop {
            let n = self.neighbors.len();
            if n == 0 {
                self.matrix.clear();
                self.rhs.clear();
                self.weights.clear();
                return KrigingEstimate {
                    mean: global_mean,
                    variance: c0,
                };
            }
            self.build(model);
            if self.factor(c0) {
                break;
            }
            if n == 1 {
                self.diagnostics.singular_fallbacks += 1;
                self.weights.clear();
                self.weights.push(0.0);
                return KrigingEstimate {
                    mean: global_mean,
                    variance: c0,
                };
            }
            let drop = self.most_redundant();
            self.neighbors.remove(drop);
            self.diagnostics.dropped_neighbors += 1;
        }

        self.back_substitute();
        let mut mean = global_mean;
        let mut explained = 0.0;
        for ((w, nb), c) in self.weights.iter().zip(&self.neighbors).zip(&self.rhs) {
            mean += w * (nb.value - global_mean);
            explained += w * c;
        }
        let mut variance = c0 - explained;
        if variance < 0.0 {
            self.diagnostics.negative_variance_clamped += 1;
            variance = 0.0;
        }
        KrigingEstimate {
            mean,
            variance: variance.min(c0),
        }
    }

    fn build(&mut self, model: &VariogramModel) {
        let n = self.neighbors.len();
        self.matrix.clear();
        self.matrix.resize(n * n, 0.0);
        self.rhs.clear();
        let c0 = model.total_sill();
        for i in 0..n {
            let a = self.neighbors[i].lag;
            self.rhs.push(model.covariance(a));
            self.matrix[i * n + i] = c0;
            for j in 0..i {
                let b = self.neighbors[j].lag;
                let c = model.covariance([a[0] - b[0], a[1] - b[1], a[2] - b[2]]);
                self.matrix[i * n + j] = c;
                self.matrix[j * n + i] = c;
            }
        }
    }

    /// Cholesky factorisation into the lower triangle of `chol`. Returns
    /// false when a pivot is not safely positive.
    fn factor(&mut self, c0: f64) -> bool {
        let n = self.neighbors.len();
        self.chol.clear();
        self.chol.extend_from_slice(&self.matrix);
        let l = &mut self.chol;
        let tol = 1e-10 * c0;
        for j in 0..n {
            let mut d = l[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if d <= tol {
                return false;
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut s = l[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        true
    }

    fn back_substitute(&mut self) {
        let n = self.neighbors.len();
        let l = &self.chol;
        self.weights.clear();
        self.weights.extend_from_slice(&self.rhs);
        let w = &mut self.weights;
        for i in 0..n {
            let mut s = w[i];
            for k in 0..i {
                s -= l[i * n + k] * w[k];
            }
            w[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = w[i];
            for k in i + 1..n {
                s -= l[k * n + i] * w[k];
            }
            w[i] = s / l[i * n + i];
        }
    }

    /// Index to drop: of the pair with the largest off-diagonal covariance,
    /// the member less correlated with the target.
    fn most_redundant(&self) -> usize {
        let n = self.neighbors.len();
        let (mut bi, mut bj, mut best) = (0, 1, f64::NEG_INFINITY);
        for i in 0..n {
            for j in i + 1..n {
                let c = self.matrix[i * n + j];
                if c > best {
                    (bi, bj, best) = (i, j, c);
                }
            }
        }
        if self.rhs[bi] < self.rhs[bj] {
            bi
        } else {
            bj
        }
    }
}

/// One-shot simple kriging at `target` from `(position, value)` data.
pub fn simple_kriging(
    target: [f64; 3],
    neighbors: &[([f64; 3], f64)],
    model: &VariogramModel,
    global_mean: f64,
) -> KrigingEstimate {
    let nbs: Vec<Neighbor> = neighbors
        .iter()
        .map(|(p, v)| Neighbor {
            lag: [p[0] - target[0], p[1] - target[1], p[2] - target[2]],
            value: *v,
        })
        .collect();
    KrigingSystem::new().solve(model, &nbs, global_mean)
}
