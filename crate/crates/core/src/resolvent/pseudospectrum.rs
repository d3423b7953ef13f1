//! Smallest singular value of `z − λ` on a grid.
//!
//! A square section of `z − λ` is singular at every point of the holes
//! (column `E_N` loses its image), so it says nothing about the operator.
//! The infinite `σ_min(z − λ)` is the smaller of the lower bounds of `z − λ`
//! and `z* − λ̄`; each is approximated by a rectangular section that keeps the
//! images leaving the window through the outer edge.
//!
//! Both sections have a bipartite graph that is a tree, so besides the dense
//! SVD there is an `O(dim)` inertia count per trial value.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::domain::{BasisIndex, BasisLabel, DomainParams};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::SparseMatrix;
use crate::operators;

/// Dimension below which [`SminMethod::Auto`] uses the dense SVD.
pub const SVD_AUTO_LIMIT: usize = 1500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SminMethod {
    Svd,
    Forest,
    Auto,
}

impl FromStr for SminMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svd" => Ok(SminMethod::Svd),
            "forest" => Ok(SminMethod::Forest),
            "auto" => Ok(SminMethod::Auto),
            other => Err(Error::InvalidMode(other.into())),
        }
    }
}

/// Where a grid point sits relative to the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// In the closed domain; carries its kind ("disk", "annulus", "pants").
    Domain(crate::DomainKind),
    Hole1,
    Hole2,
    Outside,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Domain(k) => k.as_str(),
            Region::Hole1 => "hole1",
            Region::Hole2 => "hole2",
            Region::Outside => "outside",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn region_of(params: &DomainParams, lambda: Complex64) -> Region {
    let m = lambda.norm();
    if m > 1.0 {
        return Region::Outside;
    }
    match *params {
        DomainParams::Annulus { r } if m < r => Region::Hole1,
        DomainParams::Pants { r1, .. } if m < r1 => Region::Hole1,
        DomainParams::Pants { a, r2, .. } if (lambda - a).norm() < r2 => Region::Hole2,
        _ => Region::Domain(params.kind()),
    }
}

/// Euclidean distance from `λ` to the closed domain (zero inside it).
pub fn distance_to_domain(params: &DomainParams, lambda: Complex64) -> f64 {
    let m = lambda.norm();
    match region_of(params, lambda) {
        Region::Outside => m - 1.0,
        Region::Hole1 => params.f_radius().unwrap_or(0.0) - m,
        Region::Hole2 => {
            let (a, _, r2) = params.pants_params("distance_to_domain").expect("hole2 implies pants");
            r2 - (lambda - a).norm()
        }
        Region::Domain(_) => 0.0,
    }
}

fn in_window(lab: &BasisLabel, n: i64) -> bool {
    lab.n.abs() <= n
}

/// Restrict `m` (built on `big`) to window columns and rows in the window or
/// satisfying `extra`; window rows first, extras after, both in basis order.
fn restrict(big: &BasisIndex, m: &SparseMatrix, n: i64, extra: impl Fn(&BasisLabel) -> bool) -> SparseMatrix {
    let mut row_map = alloc::vec![usize::MAX; big.dim()];
    let mut col_map = alloc::vec![usize::MAX; big.dim()];
    let mut rows = 0;
    let mut cols = 0;
    for (i, lab) in big.order.iter().enumerate() {
        if in_window(lab, n) {
            row_map[i] = rows;
            col_map[i] = cols;
            rows += 1;
            cols += 1;
        }
    }
    for (i, lab) in big.order.iter().enumerate() {
        if !in_window(lab, n) && extra(lab) {
            row_map[i] = rows;
            rows += 1;
        }
    }
    let trips = m
        .iter()
        .filter(|&(r, c, _)| row_map[r] != usize::MAX && col_map[c] != usize::MAX)
        .map(|(r, c, v)| (row_map[r], col_map[c], v))
        .collect();
    SparseMatrix::from_triplets(rows, cols, trips)
}

/// `z − λ` from the window into the window plus `E_{N+1}`.
pub fn section_z(index: &BasisIndex, lambda: Complex64) -> SparseMatrix {
    let n = index.n() as i64;
    let big = BasisIndex::new(index.params, index.n() + 1).expect("N + 1 is a valid truncation");
    let m = operators::z_sparse(&big).shifted(-lambda);
    restrict(&big, &m, n, |lab| lab.n == n + 1)
}

/// `z* − λ̄` from the window into the window plus `F_{-N-1}`, `G_{-N-1}`.
pub fn section_z_adjoint(index: &BasisIndex, lambda: Complex64) -> SparseMatrix {
    let n = index.n() as i64;
    let big = BasisIndex::new(index.params, index.n() + 1).expect("N + 1 is a valid truncation");
    let m = operators::z_sparse(&big).adjoint().shifted(-lambda.conj());
    restrict(&big, &m, n, |lab| lab.n == -n - 1)
}

fn smin_of(m: &SparseMatrix, method: SminMethod) -> f64 {
    let dense = |m: &SparseMatrix| linalg::smallest_singular_value(&m.to_dense());
    match method {
        SminMethod::Svd => dense(m),
        SminMethod::Forest => linalg::forest_smallest_singular_value(m).unwrap_or_else(|| dense(m)),
        SminMethod::Auto if m.cols < SVD_AUTO_LIMIT => dense(m),
        SminMethod::Auto => linalg::forest_smallest_singular_value(m).unwrap_or_else(|| dense(m)),
    }
}

/// Approximate `σ_min(z − λ)` from the two rectangular sections.
pub fn smin(index: &BasisIndex, lambda: Complex64, method: SminMethod) -> f64 {
    smin_of(&section_z(index, lambda), method).min(smin_of(&section_z_adjoint(index, lambda), method))
}

/// `σ_min` of the square section `z_N − λ`; kept for comparison only.
pub fn smin_square(index: &BasisIndex, lambda: Complex64) -> f64 {
    linalg::smallest_singular_value(&operators::z_sparse(index).shifted(-lambda).to_dense())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub res: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.x0, self.x1, self.y0, self.y1].iter().all(|v| v.is_finite());
        if !finite || self.x0 >= self.x1 || self.y0 >= self.y1 {
            return Err(Error::ConstraintViolation("grid bounds must be finite with x0 < x1 and y0 < y1"));
        }
        if self.res < 2 {
            return Err(Error::ConstraintViolation("grid resolution must be at least 2"));
        }
        Ok(())
    }

    /// Grid points ordered by imaginary part, then real part.
    pub fn points(&self) -> Vec<Complex64> {
        let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (self.res - 1) as f64;
        let mut out = Vec::with_capacity(self.res * self.res);
        for iy in 0..self.res {
            for ix in 0..self.res {
                out.push(Complex64::new(step(self.x0, self.x1, ix), step(self.y0, self.y1, iy)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub lambda: Complex64,
    pub smin: f64,
    pub region: Region,
}

pub fn grid_point(index: &BasisIndex, lambda: Complex64, method: SminMethod) -> GridPoint {
    GridPoint { lambda, smin: smin(index, lambda, method), region: region_of(&index.params, lambda) }
}

pub fn pseudospectrum_grid(
    params: &DomainParams,
    n: usize,
    grid: &GridSpec,
    method: SminMethod,
) -> Result<Vec<GridPoint>> {
    grid.validate()?;
    let index = BasisIndex::new(*params, n)?;
    Ok(grid.points().into_iter().map(|l| grid_point(&index, l, method)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn square_section_is_singular_at_zero() {
        let idx = BasisIndex::new(DomainParams::default_pants(), 20).unwrap();
        assert!(smin_square(&idx, c64(0.0)) < 1e-14);
        assert!(smin(&idx, c64(0.0), SminMethod::Svd) > 0.01);
    }

    #[test]
    fn forest_matches_svd() {
        for p in [DomainParams::default_pants(), DomainParams::annulus(0.4).unwrap(), DomainParams::Disk] {
            let idx = BasisIndex::new(p, 25).unwrap();
            for lam in [c64(0.05), Complex64::new(0.3, 0.2), Complex64::new(0.55, 0.01), Complex64::new(1.3, -0.4)] {
                let a = smin(&idx, lam, SminMethod::Svd);
                let b = smin(&idx, lam, SminMethod::Forest);
                assert!((a - b).abs() <= 1e-10 * (1.0 + a), "{lam}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn regions_and_distance() {
        let p = DomainParams::default_pants();
        assert_eq!(region_of(&p, c64(0.1)), Region::Hole1);
        assert_eq!(region_of(&p, c64(0.5)), Region::Hole2);
        assert_eq!(region_of(&p, c64(2.0)), Region::Outside);
        assert_eq!(region_of(&p, c64(0.3)).as_str(), "pants");
        assert!((distance_to_domain(&p, c64(0.05)) - 0.15).abs() < 1e-15);
        assert!((distance_to_domain(&p, c64(1.5)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn grid_validation() {
        let g = GridSpec { x0: 0.0, x1: -1.0, y0: 0.0, y1: 1.0, res: 4 };
        assert!(g.validate().is_err());
        let g = GridSpec { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0, res: 3 };
        let pts = g.points();
        assert_eq!(pts[1], Complex64::new(0.5, 0.0));
        assert_eq!(pts[3], Complex64::new(0.0, 0.5));
    }
}
