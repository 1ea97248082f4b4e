use crate::error::{Error, Result};

/// Sample-by-feature matrix, dense for small feature counts and CSR otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureMatrix {
    Dense {
        rows: usize,
        cols: usize,
        data: Vec<f64>,
    },
    Sparse {
        cols: usize,
        indptr: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
    },
}

/// Feature dimension up to which rows are densified.
pub const DENSE_FEATURE_LIMIT: usize = 10_000;

impl FeatureMatrix {
    pub fn dense(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(FeatureMatrix::Dense { rows, cols, data })
    }

    /// Builds from sparse rows of `(zero-based column, value)` pairs.
    pub fn from_sparse_rows(rows: &[Vec<(usize, f64)>], cols: usize) -> Result<Self> {
        for row in rows {
            if let Some(&(j, _)) = row.iter().find(|(j, _)| *j >= cols) {
                return Err(Error::IndexOutOfRange { index: j, len: cols });
            }
        }
        if cols <= DENSE_FEATURE_LIMIT {
            let mut data = vec![0.0; rows.len() * cols];
            for (i, row) in rows.iter().enumerate() {
                for &(j, v) in row {
                    data[i * cols + j] = v;
                }
            }
            return Ok(FeatureMatrix::Dense {
                rows: rows.len(),
                cols,
                data,
            });
        }
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for row in rows {
            for &(j, v) in row {
                indices.push(j);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Ok(FeatureMatrix::Sparse {
            cols,
            indptr,
            indices,
            values,
        })
    }

    pub fn rows(&self) -> usize {
        match self {
            FeatureMatrix::Dense { rows, .. } => *rows,
            FeatureMatrix::Sparse { indptr, .. } => indptr.len() - 1,
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            FeatureMatrix::Dense { cols, .. } | FeatureMatrix::Sparse { cols, .. } => *cols,
        }
    }

    pub fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        match self {
            FeatureMatrix::Dense { cols, data, .. } => {
                data[i * cols..(i + 1) * cols].iter().zip(x).map(|(a, b)| a * b).sum()
            }
            FeatureMatrix::Sparse {
                indptr,
                indices,
                values,
                ..
            } => (indptr[i]..indptr[i + 1]).map(|k| values[k] * x[indices[k]]).sum(),
        }
    }

    /// `out += alpha * a_i`
    pub fn add_row_scaled(&self, i: usize, alpha: f64, out: &mut [f64]) {
        match self {
            FeatureMatrix::Dense { cols, data, .. } => {
                for (o, a) in out.iter_mut().zip(&data[i * cols..(i + 1) * cols]) {
                    *o += alpha * a;
                }
            }
            FeatureMatrix::Sparse {
                indptr,
                indices,
                values,
                ..
            } => {
                for k in indptr[i]..indptr[i + 1] {
                    out[indices[k]] += alpha * values[k];
                }
            }
        }
    }

    /// Rows restricted to `keep`, in that order.
    pub fn select_rows(&self, keep: &[usize]) -> Self {
        match self {
            FeatureMatrix::Dense { cols, data, .. } => {
                let mut out = Vec::with_capacity(keep.len() * cols);
                for &i in keep {
                    out.extend_from_slice(&data[i * cols..(i + 1) * cols]);
                }
                FeatureMatrix::Dense {
                    rows: keep.len(),
                    cols: *cols,
                    data: out,
                }
            }
            FeatureMatrix::Sparse {
                cols,
                indptr,
                indices,
                values,
            } => {
                let mut ip = vec![0];
                let mut ix = Vec::new();
                let mut vs = Vec::new();
                for &i in keep {
                    ix.extend_from_slice(&indices[indptr[i]..indptr[i + 1]]);
                    vs.extend_from_slice(&values[indptr[i]..indptr[i + 1]]);
                    ip.push(ix.len());
                }
                FeatureMatrix::Sparse {
                    cols: *cols,
                    indptr: ip,
                    indices: ix,
                    values: vs,
                }
            }
        }
    }
}
