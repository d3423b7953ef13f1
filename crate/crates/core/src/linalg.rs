//! Dense linear algebra glue over nalgebra, a tree-structured inertia count
//! for smallest singular values, and polynomial roots.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::SparseMatrix;

fn is_real(m: &DMatrix<Complex64>) -> bool {
    m.iter().all(|v| v.im == 0.0)
}

fn real_part(m: &DMatrix<Complex64>) -> DMatrix<f64> {
    m.map(|v| v.re)
}

/// Largest entrywise deviation of `m` from `m*`.
pub fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut dev = 0.0f64;
    for c in 0..m.ncols() {
        for r in 0..=c {
            dev = dev.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    dev
}

/// Ascending eigenvalues of a Hermitian matrix (the lower triangle is read).
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = if is_real(m) {
        real_part(m).symmetric_eigenvalues().iter().copied().collect()
    } else {
        m.clone().symmetric_eigenvalues().iter().copied().collect()
    };
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigen-decomposition `m = V diag(w) V*` with ascending `w`.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let (w, v): (Vec<f64>, DMatrix<Complex64>) = if is_real(m) {
        let e = real_part(m).symmetric_eigen();
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors.map(|x| Complex64::new(x, 0.0)))
    } else {
        let e = m.clone().symmetric_eigen();
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
    };
    let mut perm: Vec<usize> = (0..w.len()).collect();
    perm.sort_by(|&i, &j| w[i].total_cmp(&w[j]));
    let ws = perm.iter().map(|&i| w[i]).collect();
    let vs = DMatrix::from_fn(v.nrows(), v.ncols(), |r, c| v[(r, perm[c])]);
    (ws, vs)
}

/// `f(m)` for Hermitian `m` via its eigen-decomposition.
pub fn hermitian_function(m: &DMatrix<Complex64>, f: impl Fn(f64) -> f64) -> DMatrix<Complex64> {
    let (w, v) = hermitian_eigen(m);
    let mut scaled = v.clone();
    for (c, &wc) in w.iter().enumerate() {
        let fc = f(wc);
        for r in 0..scaled.nrows() {
            scaled[(r, c)] *= fc;
        }
    }
    &scaled * v.adjoint()
}

/// Singular values, descending.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = if is_real(m) {
        real_part(m).singular_values().iter().copied().collect()
    } else {
        m.singular_values().iter().copied().collect()
    };
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Smallest singular value (of the `min(rows, cols)` computed ones).
pub fn smallest_singular_value(m: &DMatrix<Complex64>) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Number of singular values above `tol`.
pub fn numerical_rank(m: &DMatrix<Complex64>, tol: f64) -> usize {
    singular_values(m).iter().filter(|&&s| s > tol).count()
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Solve the square system `m x = b` by partial-pivoting LU.
pub fn lu_solve(m: &DMatrix<Complex64>, b: &[Complex64]) -> Result<Vec<Complex64>> {
    if m.nrows() != m.ncols() || m.nrows() != b.len() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), got: b.len() });
    }
    let lu = m.clone().lu();
    let x = lu.solve(&DVector::from_column_slice(b)).ok_or(Error::Singular)?;
    if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Singular);
    }
    Ok(x.as_slice().to_vec())
}

/// Least-squares solution of the tall system `m x ≈ b` by Householder QR.
pub fn least_squares(m: &DMatrix<Complex64>, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let (rows, cols) = m.shape();
    if rows < cols || rows != b.len() {
        return Err(Error::DimensionMismatch { expected: rows, got: b.len() });
    }
    let qr = m.clone().qr();
    let top = qr.q().adjoint() * DVector::from_column_slice(b);
    let x = qr.r().solve_upper_triangular(&top).ok_or(Error::Singular)?;
    Ok(x.as_slice().to_vec())
}

// ---------------------------------------------------------------------------
// Inertia counting on forest-structured matrices

/// Elimination order for the bipartite graph of a sparse matrix whose
/// augmented form `[[0, M], [M*, 0]]` is a forest.
///
/// Nodes `0..rows` are rows, `rows..rows+cols` are columns.
#[derive(Debug, Clone)]
pub struct ForestOrder {
    rows: usize,
    nodes: usize,
    /// Children before parents.
    post: Vec<usize>,
    parent: Vec<usize>,
    /// `|w|^2` on the edge to the parent.
    weight: Vec<f64>,
}

const NO_PARENT: usize = usize::MAX;

impl ForestOrder {
    /// `None` if the bipartite graph of `m` has a cycle.
    pub fn new(m: &SparseMatrix) -> Option<Self> {
        let nodes = m.rows + m.cols;
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nodes];
        let mut edges = 0usize;
        for (r, c, v) in m.iter() {
            let w = v.norm_sqr();
            adj[r].push((m.rows + c, w));
            adj[m.rows + c].push((r, w));
            edges += 1;
        }
        let mut parent = vec![NO_PARENT; nodes];
        let mut weight = vec![0.0; nodes];
        let mut seen = vec![false; nodes];
        let mut bfs = Vec::with_capacity(nodes);
        let mut components = 0usize;
        for root in 0..nodes {
            if seen[root] {
                continue;
            }
            components += 1;
            seen[root] = true;
            let start = bfs.len();
            bfs.push(root);
            let mut head = start;
            while head < bfs.len() {
                let u = bfs[head];
                head += 1;
                for &(v, w) in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        parent[v] = u;
                        weight[v] = w;
                        bfs.push(v);
                    }
                }
            }
        }
        if edges + components != nodes {
            return None;
        }
        bfs.reverse();
        Some(ForestOrder { rows: m.rows, nodes, post: bfs, parent, weight })
    }

    /// Number of singular values of `M` strictly below `s > 0`, computed as
    /// the count of negative pivots of `Aug - sI` minus `max(rows, cols)`.
    pub fn count_below(&self, s: f64) -> usize {
        let mut d = vec![-s; self.nodes];
        let tiny = f64::MIN_POSITIVE * 1e10;
        let mut neg = 0usize;
        for &u in &self.post {
            let mut du = d[u];
            if du == 0.0 {
                du = -tiny;
            }
            if du < 0.0 {
                neg += 1;
            }
            let p = self.parent[u];
            if p != NO_PARENT {
                d[p] -= self.weight[u] / du;
            }
        }
        let cols = self.nodes - self.rows;
        neg.saturating_sub(self.rows.max(cols))
    }
}

/// Smallest singular value of a forest-structured sparse matrix by bisection
/// on inertia counts (logarithmic in `s`). Returns `None` on a cyclic graph.
pub fn forest_smallest_singular_value(m: &SparseMatrix) -> Option<f64> {
    let order = ForestOrder::new(m)?;
    // Frobenius norm bounds the largest singular value.
    let hi0 = math::sqrt(m.iter().map(|(_, _, v)| v.norm_sqr()).sum::<f64>()) * 1.01 + 1e-300;
    if order.count_below(hi0) == 0 {
        return Some(hi0);
    }
    let mut lo = libm::log(hi0) - 700.0;
    let mut hi = libm::log(hi0);
    if order.count_below(libm::exp(lo)) >= 1 {
        return Some(0.0);
    }
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if order.count_below(libm::exp(mid)) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(libm::exp(0.5 * (lo + hi)))
}

// ---------------------------------------------------------------------------
// Polynomials

/// Evaluate a polynomial with real coefficients (highest degree first).
pub fn poly_eval(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

fn poly_deriv_eval(coeffs: &[f64], x: Complex64) -> Complex64 {
    let deg = coeffs.len() - 1;
    coeffs[..deg]
        .iter()
        .enumerate()
        .fold(Complex64::new(0.0, 0.0), |acc, (i, &c)| acc * x + c * (deg - i) as f64)
}

/// All complex roots of a monic real polynomial (highest degree first) by
/// Durand–Kerner iteration followed by Newton polishing.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[0];
    let p: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + p[1..].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = poly_eval(&p, z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-17 {
            break;
        }
    }
    for x in z.iter_mut() {
        for _ in 0..3 {
            let d = poly_deriv_eval(&p, *x);
            if d.norm() == 0.0 {
                break;
            }
            let step = poly_eval(&p, *x) / d;
            if !(step.re.is_finite() && step.im.is_finite()) {
                break;
            }
            *x -= step;
        }
        // Real polynomials: snap negligible imaginary parts.
        if x.im.abs() <= 1e-14 * x.norm().max(1e-300) {
            x.im = 0.0;
        }
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn roots_of_quadratic_and_cubic() {
        let r = poly_roots(&[1.0, -3.0, 2.0]);
        assert!((r[0] - c64(1.0)).norm() < 1e-14 && (r[1] - c64(2.0)).norm() < 1e-14);
        let r = poly_roots(&[1.0, -6.0, 11.0, -6.0]);
        for (x, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - c64(want)).norm() < 1e-13);
        }
        let r = poly_roots(&[1.0, 0.0, 1.0]);
        assert!((r[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn forest_count_matches_svd() {
        // Lower bidiagonal 5x4 (a path graph).
        let mut trips = Vec::new();
        for c in 0..4 {
            trips.push((c, c, Complex64::new(0.3 + 0.1 * c as f64, 0.2)));
            trips.push((c + 1, c, c64(1.0 - 0.1 * c as f64)));
        }
        let m = SparseMatrix::from_triplets(5, 4, trips);
        let sv = singular_values(&m.to_dense());
        let order = ForestOrder::new(&m).unwrap();
        for &s in &[0.1, 0.5, 0.9, 1.2, 2.0] {
            assert_eq!(order.count_below(s), sv.iter().filter(|&&x| x < s).count());
        }
        let smin = forest_smallest_singular_value(&m).unwrap();
        assert!((smin - sv[3]).abs() < 1e-12 * sv[0]);
        let wide = m.adjoint();
        assert!((forest_smallest_singular_value(&wide).unwrap() - sv[3]).abs() < 1e-12 * sv[0]);
    }

    #[test]
    fn forest_rejects_cycles() {
        let m = SparseMatrix::from_triplets(2, 2, vec![(0, 0, c64(1.0)), (0, 1, c64(1.0)), (1, 0, c64(1.0)), (1, 1, c64(1.0))]);
        assert!(ForestOrder::new(&m).is_none());
    }

    #[test]
    fn least_squares_recovers_consistent_system() {
        let m = DMatrix::from_fn(4, 3, |i, j| Complex64::new(((i * 3 + j) * (i + 2 * j)) as f64 + 1.0, (i as f64 - j as f64) * 0.5));
        let x = [c64(1.0), Complex64::new(0.0, 2.0), c64(-1.0)];
        let b = &m * DVector::from_column_slice(&x);
        let got = least_squares(&m, b.as_slice()).unwrap();
        for (g, w) in got.iter().zip(x.iter()) {
            assert!((g - w).norm() < 1e-12, "{got:?}");
        }
    }

    #[test]
    fn eigen_function_identity() {
        let m = DMatrix::from_row_slice(2, 2, &[c64(2.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), c64(2.0)]);
        let sq = hermitian_function(&m, |x| x * x);
        assert!((sq - &m * &m).norm() < 1e-13);
        assert_eq!(hermitian_eigenvalues(&m).len(), 2);
    }
}
