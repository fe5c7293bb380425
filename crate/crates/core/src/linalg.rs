//! Orthogonal matrices: validated storage, Householder completion of a
//! prescribed first row, and Haar-distributed sampling.

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::sample::VectorSample;

pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// An `n x n` matrix with `max |H^T H - I| <= 1e-10`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMatrix {
    entries: DMatrix<f64>,
}

/// `max_ij |(H^T H - I)_ij|`.
pub fn orthogonality_defect(h: &DMatrix<f64>) -> f64 {
    let gram = h.transpose() * h;
    let n = h.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).abs());
        }
    }
    worst
}

impl OrthogonalMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), got: entries.ncols() });
        }
        let deviation = orthogonality_defect(&entries);
        if !(deviation <= ORTHOGONALITY_TOL) {
            return Err(Error::NotOrthogonal { deviation });
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: DMatrix::identity(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.entries.row(i).iter().copied().collect()
    }

    pub fn defect(&self) -> f64 {
        orthogonality_defect(&self.entries)
    }
}

/// Orthogonal matrix whose first row is `first_row`.
///
/// With `s = sign(u_0)` (zero counts as positive) and `w = u + s e_1`, the
/// reflection `P = I - 2 w w^T / w^T w` sends `e_1` to `-s u`. Negating the
/// first row of `P` when `s > 0` gives a matrix with first row `u`. Choosing
/// the sign of the pivot keeps `w_0 = u_0 + s` away from cancellation, and for
/// `u = e_1` the result is exactly the identity.
///
/// Rows with `| |u| - 1 | <= 1e-8` are accepted; the reflection is built from
/// `u / |u|`, and the returned first row is `u` bit-for-bit whenever `u` is
/// already unit to within a few ulps.
pub fn householder_complete(first_row: &[f64]) -> Result<OrthogonalMatrix> {
    let n = first_row.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let norm = first_row.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotUnit { norm });
    }
    let u: Vec<f64> = if (norm - 1.0).abs() <= 4.0 * f64::EPSILON {
        first_row.to_vec()
    } else {
        first_row.iter().map(|x| x / norm).collect()
    };

    let s = if u[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut w = u.clone();
    w[0] += s;
    let wtw: f64 = w.iter().map(|x| x * x).sum();
    let scale = 2.0 / wtw;

    let mut h = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        for j in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            h[(i, j)] = delta - scale * w[i] * w[j];
        }
    }
    for (j, &x) in u.iter().enumerate() {
        h[(0, j)] = x;
    }
    if n > 1 && u[1..].iter().all(|&x| x == 0.0) && u[0] == 1.0 {
        return Ok(OrthogonalMatrix::identity(n));
    }
    OrthogonalMatrix::new(h)
}

/// Haar-distributed orthogonal matrix: QR of a standard Gaussian matrix with
/// the columns of `Q` multiplied by `sign(R_ii)`.
pub fn haar_orthogonal(n: usize, rs: &RandomSource) -> Result<OrthogonalMatrix> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = rs.rng();
    loop {
        let g = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
        let qr = g.qr();
        let r = qr.r();
        let diag: Vec<f64> = (0..n).map(|i| r[(i, i)]).collect();
        // Numerically singular draw: probability zero, but re-draw rather than fail.
        if diag.iter().any(|d| d.abs() < 1e-12) {
            continue;
        }
        let mut q = qr.q();
        for (j, d) in diag.iter().enumerate() {
            if *d < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        if let Ok(h) = OrthogonalMatrix::new(q) {
            return Ok(h);
        }
    }
}

/// Replaces every row `x` of `vs` with `H x`.
pub fn apply_rotation(h: &OrthogonalMatrix, vs: &VectorSample) -> Result<VectorSample> {
    let n = h.dim();
    if vs.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: vs.n() });
    }
    let e = h.entries();
    // Row-major copy so the inner loop walks contiguous memory.
    let rows: Vec<f64> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|ij| e[ij]).collect();
    let mut out = Vec::with_capacity(vs.m() * n);
    for x in vs.rows() {
        for hrow in rows.chunks_exact(n) {
            out.push(hrow.iter().zip(x).map(|(a, b)| a * b).sum());
        }
    }
    Ok(VectorSample::from_flat_unchecked(vs.m(), n, out))
}

/// `u . x` for every row: the first coordinate of `H x` when `u` is the first row of `H`.
pub fn project_rows(u: &[f64], vs: &VectorSample) -> Result<Vec<f64>> {
    if u.len() != vs.n() {
        return Err(Error::DimensionMismatch { expected: vs.n(), got: u.len() });
    }
    Ok(vs.rows().map(|x| x.iter().zip(u).map(|(a, b)| a * b).sum()).collect())
}
