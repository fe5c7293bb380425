//! Sample containers. Both types validate finiteness at construction and are
//! immutable afterwards.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSample {
    values: Vec<f64>,
}

impl ScalarSample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { values })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty() && values.iter().all(|v| v.is_finite()));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Unbiased sample variance; zero for a single observation.
    pub fn variance(&self) -> f64 {
        let m = self.values.len();
        if m < 2 {
            return 0.0;
        }
        let mean = self.mean();
        self.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1) as f64
    }

    /// Elementwise transform, e.g. scaling or negation.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_unstable_by(f64::total_cmp);
        v
    }
}

/// `m` draws of an `n`-dimensional vector, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSample {
    data: Vec<f64>,
    m: usize,
    n: usize,
}

impl VectorSample {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptySample)?;
        let n = first.len();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let mut data = Vec::with_capacity(rows.len() * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Ragged { row, expected: n, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Self::from_flat(rows.len(), n, data)
    }

    pub fn from_flat(m: usize, n: usize, data: Vec<f64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::EmptySample);
        }
        if data.len() != m * n {
            return Err(Error::DimensionMismatch { expected: m * n, got: data.len() });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { data, m, n })
    }

    pub(crate) fn from_flat_unchecked(m: usize, n: usize, data: Vec<f64>) -> Self {
        debug_assert!(m > 0 && n > 0 && data.len() == m * n);
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Self { data, m, n }
    }

    /// Number of draws.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.n)
    }

    pub fn column(&self, j: usize) -> Result<ScalarSample> {
        if j >= self.n {
            return Err(Error::IndexOutOfRange { index: j, dim: self.n });
        }
        Ok(ScalarSample::from_vec_unchecked(self.rows().map(|r| r[j]).collect()))
    }

    /// Euclidean norm of each row.
    pub fn row_norms(&self) -> ScalarSample {
        ScalarSample::from_vec_unchecked(
            self.rows().map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt()).collect(),
        )
    }

    /// Rows `start..end` as a new sample.
    pub fn slice_rows(&self, start: usize, end: usize) -> Result<Self> {
        if start >= end || end > self.m {
            return Err(Error::IndexOutOfRange { index: end, dim: self.m });
        }
        Ok(Self::from_flat_unchecked(
            end - start,
            self.n,
            self.data[start * self.n..end * self.n].to_vec(),
        ))
    }

    /// Each row divided by its norm. Zero rows are an error.
    pub fn normalized_rows(&self) -> Result<Self> {
        let mut data = Vec::with_capacity(self.data.len());
        for r in self.rows() {
            let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::NonFinite);
            }
            data.extend(r.iter().map(|x| x / norm));
        }
        Ok(Self::from_flat_unchecked(self.m, self.n, data))
    }

    /// First column as a plain vector.
    pub fn into_column0(self) -> Vec<f64> {
        if self.n == 1 {
            self.data
        } else {
            self.rows().map(|r| r[0]).collect()
        }
    }

    /// Row sums, i.e. the partial sums S_n of each draw.
    pub fn row_sums(&self) -> ScalarSample {
        ScalarSample::from_vec_unchecked(self.rows().map(|r| r.iter().sum()).collect())
    }
}
