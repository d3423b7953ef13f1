//! Matrix storage: a small column-compressed sparse type for the shift-like
//! operators and [`OperatorMatrix`], the tagged container handed to callers.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::domain::BasisIndex;
use crate::error::{Error, Result};

/// Dimension at which [`OperatorMatrix`] switches from dense to sparse storage.
pub const DENSE_LIMIT: usize = 2000;

/// How composed operators are formed at the truncation edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Entries of the infinite operator restricted to the window.
    Exact,
    /// Products of truncated factors.
    Compressed,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Compressed => "compressed",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "compressed" => Ok(Mode::Compressed),
            other => Err(Error::InvalidMode(other.to_string())),
        }
    }
}

/// Column-compressed sparse matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    vals: Vec<Complex64>,
}

impl SparseMatrix {
    /// Build from `(row, col, value)` triplets; duplicates are summed and
    /// explicit zeros dropped.
    pub fn from_triplets(rows: usize, cols: usize, mut trips: Vec<(usize, usize, Complex64)>) -> Self {
        trips.sort_by(|x, y| (x.1, x.0).cmp(&(y.1, y.0)));
        let mut col_ptr = vec![0usize; cols + 1];
        let mut row_idx = Vec::with_capacity(trips.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(trips.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in trips {
            assert!(r < rows && c < cols, "triplet ({r},{c}) out of bounds");
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                row_idx.push(r);
                vals.push(v);
                col_ptr[c + 1] += 1;
                last = Some((r, c));
            }
        }
        for c in 0..cols {
            col_ptr[c + 1] += col_ptr[c];
        }
        let mut m = SparseMatrix { rows, cols, col_ptr, row_idx, vals };
        m.prune();
        m
    }

    fn prune(&mut self) {
        if self.vals.iter().all(|v| *v != Complex64::new(0.0, 0.0)) {
            return;
        }
        let mut trips = Vec::with_capacity(self.vals.len());
        for (r, c, v) in self.iter() {
            if v != Complex64::new(0.0, 0.0) {
                trips.push((r, c, v));
            }
        }
        *self = SparseMatrix::from_triplets(self.rows, self.cols, trips);
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Iterate `(row, col, value)` in column-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.cols).flat_map(move |c| {
            (self.col_ptr[c]..self.col_ptr[c + 1]).map(move |k| (self.row_idx[k], c, self.vals[k]))
        })
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.col_ptr[c]..self.col_ptr[c + 1]).map(move |k| (self.row_idx[k], self.vals[k]))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.column(c).find(|(i, _)| *i == r).map_or(Complex64::new(0.0, 0.0), |(_, v)| v)
    }

    pub fn adjoint(&self) -> Self {
        let trips = self.iter().map(|(r, c, v)| (c, r, v.conj())).collect();
        SparseMatrix::from_triplets(self.cols, self.rows, trips)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.iter() {
            m[(r, c)] += v;
        }
        m
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        let mut trips = Vec::new();
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                let v = m[(r, c)];
                if v != Complex64::new(0.0, 0.0) {
                    trips.push((r, c, v));
                }
            }
        }
        SparseMatrix::from_triplets(m.nrows(), m.ncols(), trips)
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![Complex64::new(0.0, 0.0); self.rows];
        for c in 0..self.cols {
            let xc = x[c];
            if xc == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (r, v) in self.column(c) {
                y[r] += v * xc;
            }
        }
        y
    }

    /// `A B` for dense `B`.
    pub fn mul_dense(&self, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        assert_eq!(b.nrows(), self.cols);
        let mut out = DMatrix::zeros(self.rows, b.ncols());
        for j in 0..b.ncols() {
            for c in 0..self.cols {
                let bc = b[(c, j)];
                if bc == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (r, v) in self.column(c) {
                    out[(r, j)] += v * bc;
                }
            }
        }
        out
    }

    /// `B A` for dense `B`.
    pub fn rmul_dense(&self, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        assert_eq!(b.ncols(), self.rows);
        let mut out = DMatrix::zeros(b.nrows(), self.cols);
        for c in 0..self.cols {
            for (r, v) in self.column(c) {
                for i in 0..b.nrows() {
                    out[(i, c)] += b[(i, r)] * v;
                }
            }
        }
        out
    }

    /// Sparse product `A B`.
    pub fn mul_sparse(&self, b: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, b.rows);
        let mut trips = Vec::new();
        for (k, j, bv) in b.iter() {
            for (i, av) in self.column(k) {
                trips.push((i, j, av * bv));
            }
        }
        SparseMatrix::from_triplets(self.rows, b.cols, trips)
    }

    /// `A + s I` (square only).
    pub fn shifted(&self, s: Complex64) -> SparseMatrix {
        assert_eq!(self.rows, self.cols);
        let mut trips: Vec<_> = self.iter().collect();
        trips.extend((0..self.rows).map(|i| (i, i, s)));
        SparseMatrix::from_triplets(self.rows, self.cols, trips)
    }

    pub fn scale(&self, s: Complex64) -> SparseMatrix {
        let trips = self.iter().map(|(r, c, v)| (r, c, v * s)).collect();
        SparseMatrix::from_triplets(self.rows, self.cols, trips)
    }

    pub fn sub(&self, b: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (b.rows, b.cols));
        let mut trips: Vec<_> = self.iter().collect();
        trips.extend(b.iter().map(|(r, c, v)| (r, c, -v)));
        SparseMatrix::from_triplets(self.rows, self.cols, trips)
    }

    pub fn max_nnz_per_column(&self) -> usize {
        (0..self.cols).map(|c| self.col_ptr[c + 1] - self.col_ptr[c]).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Storage {
    Dense(DMatrix<Complex64>),
    Sparse(SparseMatrix),
}

/// A truncated operator together with its basis, construction mode and name.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub index: BasisIndex,
    pub entries: Storage,
    pub mode: Mode,
    pub name: String,
}

impl OperatorMatrix {
    /// Wrap a sparse matrix, densifying below [`DENSE_LIMIT`].
    pub fn from_sparse(index: &BasisIndex, m: SparseMatrix, mode: Mode, name: &str) -> Self {
        assert_eq!((m.rows, m.cols), (index.dim(), index.dim()));
        let entries = if index.dim() < DENSE_LIMIT { Storage::Dense(m.to_dense()) } else { Storage::Sparse(m) };
        OperatorMatrix { index: index.clone(), entries, mode, name: name.to_string() }
    }

    pub fn from_dense(index: &BasisIndex, m: DMatrix<Complex64>, mode: Mode, name: &str) -> Self {
        assert_eq!((m.nrows(), m.ncols()), (index.dim(), index.dim()));
        let entries = if index.dim() < DENSE_LIMIT {
            Storage::Dense(m)
        } else {
            Storage::Sparse(SparseMatrix::from_dense(&m))
        };
        OperatorMatrix { index: index.clone(), entries, mode, name: name.to_string() }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.index.dim()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        match &self.entries {
            Storage::Dense(m) => m[(r, c)],
            Storage::Sparse(s) => s.get(r, c),
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match &self.entries {
            Storage::Dense(m) => m.clone(),
            Storage::Sparse(s) => s.to_dense(),
        }
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        match &self.entries {
            Storage::Dense(m) => SparseMatrix::from_dense(m),
            Storage::Sparse(s) => s.clone(),
        }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        match &self.entries {
            Storage::Dense(m) => {
                let v = nalgebra::DVector::from_column_slice(x);
                (m * v).as_slice().to_vec()
            }
            Storage::Sparse(s) => s.mul_vec(x),
        }
    }

    /// Nonzero entries as `(row, col, value)`, column-major.
    pub fn triplets(&self) -> Vec<(usize, usize, Complex64)> {
        self.to_sparse().iter().collect()
    }

    /// Largest entrywise deviation from conjugate symmetry.
    pub fn hermitian_deviation(&self) -> f64 {
        let m = self.to_dense();
        let mut dev = 0.0f64;
        for c in 0..m.ncols() {
            for r in 0..=c {
                dev = dev.max((m[(r, c)] - m[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// True if every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        match &self.entries {
            Storage::Dense(m) => m.iter().all(|v| v.im == 0.0),
            Storage::Sparse(s) => s.iter().all(|(_, _, v)| v.im == 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            vec![(0, 0, c64(1.0)), (0, 0, c64(2.0)), (1, 0, c64(1.0)), (1, 0, c64(-1.0))],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 0), c64(3.0));
    }

    #[test]
    fn sparse_dense_products_agree() {
        let a = SparseMatrix::from_triplets(
            3,
            3,
            vec![(1, 0, c64(2.0)), (2, 1, Complex64::new(0.0, 1.0)), (0, 2, c64(-1.0)), (2, 2, c64(0.5))],
        );
        let b = DMatrix::from_fn(3, 3, |i, j| Complex64::new((i + 2 * j) as f64, i as f64 - j as f64));
        let dense = a.to_dense();
        assert!((a.mul_dense(&b) - &dense * &b).norm() < 1e-14);
        assert!((a.rmul_dense(&b) - &b * &dense).norm() < 1e-14);
        assert!((a.mul_sparse(&a).to_dense() - &dense * &dense).norm() < 1e-14);
        assert!((a.adjoint().to_dense() - dense.adjoint()).norm() == 0.0);
    }

    #[test]
    fn mode_parse() {
        assert_eq!("exact".parse::<Mode>().unwrap(), Mode::Exact);
        assert_eq!("lazy".parse::<Mode>().unwrap_err(), Error::InvalidMode("lazy".into()));
    }
}
