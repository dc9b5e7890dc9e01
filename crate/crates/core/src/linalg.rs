//! Small dense vector and matrix helpers for dimensions 2..=8.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PHI: f64 = 1.618_033_988_749_895;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalize(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|x| x / n).collect()
}

/// Geodesic distance on the sphere, clamped against rounding outside [-1, 1].
pub fn sphere_dist(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

pub fn cross3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Integer lattice key of a vector, used for tolerance-based deduplication.
pub fn grid_key(v: &[f64], tol: f64) -> Vec<i64> {
    // `+ 0.0` folds -0.0 into 0.0 before rounding.
    v.iter().map(|x| ((x / tol).round() + 0.0) as i64).collect()
}

/// A point on the unit sphere S^d, stored as a (d+1)-vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitPoint(Vec<f64>);

impl UnitPoint {
    /// Accepts `v` only if its norm is 1 within `1e-12`.
    pub fn new(v: Vec<f64>) -> Result<Self> {
        let n = norm(&v);
        if v.len() < 2 || (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "point {v:?} is not a unit vector (norm {n})"
            )));
        }
        Ok(UnitPoint(v))
    }

    /// Projects a nonzero vector onto the sphere.
    pub fn normalized(v: &[f64]) -> Self {
        UnitPoint(normalize(v))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Ambient dimension d+1.
    pub fn ambient_dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn neg(&self) -> Self {
        UnitPoint(self.0.iter().map(|x| -x).collect())
    }
}

impl AsRef<[f64]> for UnitPoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    n: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Mat { n, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Mat { n, data }
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n);
        Mat { n, data }
    }

    /// Householder reflection `I - 2 v vᵀ / ‖v‖²`.
    pub fn reflection(v: &[f64]) -> Self {
        let n = v.len();
        let s = 2.0 / dot(v, v);
        let mut m = Mat::identity(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] -= s * v[i] * v[j];
            }
        }
        m
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Mat::from_row_major(n, vec![0.0; n * n]);
        for (j, &i) in perm.iter().enumerate() {
            m.data[i * n + j] = 1.0;
        }
        m
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Mat::from_row_major(n, vec![0.0; n * n]);
        for (i, x) in d.iter().enumerate() {
            m.data[i * n + i] = *x;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Mat { n, data }
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        Mat { n, data }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.data.chunks(self.n).map(|row| dot(row, v)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for c in 0..n {
            let p = (c..n)
                .max_by(|&x, &y| a[x * n + c].abs().total_cmp(&a[y * n + c].abs()))
                .unwrap();
            if a[p * n + c] == 0.0 {
                return 0.0;
            }
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a[c * n + c];
            det *= piv;
            for r in c + 1..n {
                let f = a[r * n + c] / piv;
                for j in c..n {
                    a[r * n + j] -= f * a[c * n + j];
                }
            }
        }
        det
    }

    /// `max |(M Mᵀ - I)_ij|`.
    pub fn orthogonality_error(&self) -> f64 {
        let p = self.mul(&self.transpose());
        let n = self.n;
        (0..n * n)
            .map(|k| {
                let id = if k / n == k % n { 1.0 } else { 0.0 };
                (p.data[k] - id).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Orthonormal basis of the sum-zero hyperplane of R^{n+1} (Helmert basis),
/// returned as n row vectors of length n+1.
pub fn helmert_basis(n: usize) -> Vec<Vec<f64>> {
    (1..=n)
        .map(|k| {
            let s = ((k * (k + 1)) as f64).sqrt();
            let mut h = vec![0.0; n + 1];
            for x in h.iter_mut().take(k) {
                *x = 1.0 / s;
            }
            h[k] = -(k as f64) / s;
            h
        })
        .collect()
}

/// `n` independent uniform points on the unit sphere in R^dim, reproducible
/// from `seed`.
pub fn random_unit_points(dim: usize, n: usize, seed: u64) -> Vec<UnitPoint> {
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        if norm(&v) > 1e-8 {
            out.push(UnitPoint::normalized(&v));
        }
    }
    out
}

/// A random orthogonal matrix (Gram–Schmidt with reorthogonalization).
pub fn random_orthogonal(dim: usize, seed: u64) -> Mat {
    let cols = random_unit_points(dim, dim, seed);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for c in cols {
        let mut v = c.into_vec();
        for _ in 0..2 {
            for b in &basis {
                let p = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        basis.push(normalize(&v));
    }
    Mat::from_rows(&basis)
}
