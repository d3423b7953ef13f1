//! Truncated matrices of `z`, `z*` and their products.
//!
//! `z` acts by
//!
//! ```text
//! z E_n = E_{n+1}
//! z F_n = r1 F_{n+1}          (F_0 := E_0)
//! z G_n = r2 G_{n+1} + a G_n  (G_0 := E_0)
//! ```
//!
//! and images that leave the window are dropped. Exact-mode products are
//! assembled from the infinite-matrix formulas and then restricted, so they
//! carry no edge artifacts.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::c64;
use crate::domain::{BasisIndex, BasisLabel, DomainParams, Family};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{Mode, OperatorMatrix, SparseMatrix};

/// Sparse truncated `z` on `index`.
pub fn z_sparse(index: &BasisIndex) -> SparseMatrix {
    let n = index.dim();
    let mut trips = Vec::with_capacity(2 * n);
    let mut push = |row: BasisLabel, col: usize, v: f64| {
        if let Some(r) = index.index_of(row) {
            trips.push((r, col, c64(v)));
        }
    };
    for (col, lab) in index.order.iter().enumerate() {
        let up = |fam: Family| if lab.n == -1 { BasisLabel::e(0) } else { BasisLabel { family: fam, n: lab.n + 1 } };
        match (lab.family, index.params) {
            (Family::E, _) => push(BasisLabel::e(lab.n + 1), col, 1.0),
            (Family::F, DomainParams::Annulus { r }) => push(up(Family::F), col, r),
            (Family::F, DomainParams::Pants { r1, .. }) => push(up(Family::F), col, r1),
            (Family::G, DomainParams::Pants { a, r2, .. }) => {
                push(up(Family::G), col, r2);
                push(*lab, col, a);
            }
            _ => unreachable!("family not present in this domain"),
        }
    }
    SparseMatrix::from_triplets(n, n, trips)
}

/// Truncated `z`.
pub fn build_z(index: &BasisIndex) -> OperatorMatrix {
    OperatorMatrix::from_sparse(index, z_sparse(index), Mode::Compressed, "z")
}

/// Truncated `z*`: the conjugate transpose of the truncated `z`.
pub fn build_z_star(index: &BasisIndex) -> OperatorMatrix {
    OperatorMatrix::from_sparse(index, z_sparse(index).adjoint(), Mode::Compressed, "z*")
}

/// Exact-mode `zz*` restricted to the window.
pub fn zzstar_exact_sparse(index: &BasisIndex) -> SparseMatrix {
    let mut t = Triplets::new(index);
    let n = index.n() as i64;
    for k in 1..=n {
        t.add(BasisLabel::e(k), BasisLabel::e(k), 1.0);
    }
    match index.params {
        DomainParams::Disk => {}
        DomainParams::Annulus { r } => {
            t.add(BasisLabel::e(0), BasisLabel::e(0), r * r);
            for k in 1..=n {
                t.add(BasisLabel::f(-k), BasisLabel::f(-k), r * r);
            }
        }
        DomainParams::Pants { a, r1, r2 } => {
            for k in 1..=n {
                t.add(BasisLabel::f(-k), BasisLabel::f(-k), r1 * r1);
            }
            // Tridiagonal block on E_0, G_{-1}, G_{-2}, ... with g_0 := e_0.
            let g = |k: i64| if k == 0 { BasisLabel::e(0) } else { BasisLabel::g(k) };
            t.add(g(0), g(0), r1 * r1 + r2 * r2);
            for k in 1..=n {
                t.add(g(-k), g(-k), a * a + r2 * r2);
                t.add(g(-k), g(-k + 1), a * r2);
                t.add(g(-k + 1), g(-k), a * r2);
            }
        }
    }
    t.finish()
}

/// Exact-mode `z*z` restricted to the window.
pub fn zstarz_exact_sparse(index: &BasisIndex) -> SparseMatrix {
    let mut t = Triplets::new(index);
    let n = index.n() as i64;
    for k in 0..=n {
        t.add(BasisLabel::e(k), BasisLabel::e(k), 1.0);
    }
    match index.params {
        DomainParams::Disk => {}
        DomainParams::Annulus { r } => {
            for k in 1..=n {
                t.add(BasisLabel::f(-k), BasisLabel::f(-k), r * r);
            }
        }
        DomainParams::Pants { a, r1, r2 } => {
            for k in 1..=n {
                t.add(BasisLabel::f(-k), BasisLabel::f(-k), r1 * r1);
                t.add(BasisLabel::g(-k), BasisLabel::g(-k), a * a + r2 * r2);
                if k < n {
                    t.add(BasisLabel::g(-k), BasisLabel::g(-k - 1), a * r2);
                    t.add(BasisLabel::g(-k - 1), BasisLabel::g(-k), a * r2);
                }
            }
            t.add(BasisLabel::f(-1), BasisLabel::g(-1), r1 * r2);
            t.add(BasisLabel::g(-1), BasisLabel::f(-1), r1 * r2);
        }
    }
    t.finish()
}

/// `zz*` in the requested mode.
pub fn build_zzstar(index: &BasisIndex, mode: Mode) -> OperatorMatrix {
    let m = match mode {
        Mode::Exact => zzstar_exact_sparse(index),
        Mode::Compressed => {
            let z = z_sparse(index);
            z.mul_sparse(&z.adjoint())
        }
    };
    OperatorMatrix::from_sparse(index, m, mode, "zz*")
}

/// `z*z` in the requested mode.
pub fn build_zstarz(index: &BasisIndex, mode: Mode) -> OperatorMatrix {
    let m = match mode {
        Mode::Exact => zstarz_exact_sparse(index),
        Mode::Compressed => {
            let z = z_sparse(index);
            z.adjoint().mul_sparse(&z)
        }
    };
    OperatorMatrix::from_sparse(index, m, mode, "z*z")
}

/// Exact-mode `[z*, z]`: nonzero only on `span{E_0, F_{-1}, G_{-1}}`.
pub fn commutator_exact_sparse(index: &BasisIndex) -> SparseMatrix {
    let mut t = Triplets::new(index);
    match index.params {
        DomainParams::Disk => t.add(BasisLabel::e(0), BasisLabel::e(0), 1.0),
        DomainParams::Annulus { r } => t.add(BasisLabel::e(0), BasisLabel::e(0), 1.0 - r * r),
        DomainParams::Pants { a, r1, r2 } => {
            let basis = [BasisLabel::e(0), BasisLabel::f(-1), BasisLabel::g(-1)];
            let am = matrix_a(a, r1, r2);
            for (i, &bi) in basis.iter().enumerate() {
                for (j, &bj) in basis.iter().enumerate() {
                    t.add(bi, bj, am[i][j]);
                }
            }
        }
    }
    t.finish()
}

/// `[z*, z] = z*z - zz*` in the requested mode.
pub fn build_commutator(index: &BasisIndex, mode: Mode) -> OperatorMatrix {
    let m = match mode {
        Mode::Exact => commutator_exact_sparse(index),
        Mode::Compressed => {
            let z = z_sparse(index);
            let zs = z.adjoint();
            zs.mul_sparse(&z).sub(&z.mul_sparse(&zs))
        }
    };
    OperatorMatrix::from_sparse(index, m, mode, "[z*,z]")
}

struct Triplets<'a> {
    index: &'a BasisIndex,
    trips: Vec<(usize, usize, Complex64)>,
}

impl<'a> Triplets<'a> {
    fn new(index: &'a BasisIndex) -> Self {
        Triplets { index, trips: Vec::new() }
    }

    /// Entry at (row, col); silently dropped outside the window.
    fn add(&mut self, row: BasisLabel, col: BasisLabel, v: f64) {
        if let (Some(r), Some(c)) = (self.index.index_of(row), self.index.index_of(col)) {
            self.trips.push((r, c, c64(v)));
        }
    }

    fn finish(self) -> SparseMatrix {
        let d = self.index.dim();
        SparseMatrix::from_triplets(d, d, self.trips)
    }
}

// ---------------------------------------------------------------------------
// Small matrices A, C, D

fn matrix_a(a: f64, r1: f64, r2: f64) -> [[f64; 3]; 3] {
    [[1.0 - r1 * r1 - r2 * r2, 0.0, -a * r2], [0.0, 0.0, r1 * r2], [-a * r2, r1 * r2, 0.0]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallMatrix {
    A,
    C,
    D,
}

/// A small real symmetric matrix with its characteristic polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallMatrixReport {
    pub which: SmallMatrix,
    /// Basis labels of rows and columns.
    pub basis: Vec<BasisLabel>,
    pub entries: DMatrix<f64>,
    /// Monic coefficients, highest degree first.
    pub char_poly: Vec<f64>,
    pub roots: Vec<Complex64>,
}

impl SmallMatrixReport {
    pub fn name(&self) -> String {
        String::from(match self.which {
            SmallMatrix::A => "A",
            SmallMatrix::C => "C",
            SmallMatrix::D => "D",
        })
    }

    /// Largest `|p(root)|` over the stored roots.
    pub fn max_root_residual(&self) -> f64 {
        self.roots.iter().map(|&x| linalg::poly_eval(&self.char_poly, x).norm()).fold(0.0, f64::max)
    }
}

/// Matrices `A` (on `E_0, F_{-1}, G_{-1}`), `C` (on `E_0, G_{-1}`) and `D`
/// (on `G_{-1}, G_{-2}`) with their characteristic polynomials.
pub fn small_matrices(params: &DomainParams) -> Result<Vec<SmallMatrixReport>> {
    let (a, r1, r2) = params.pants_params("small_matrices")?;
    let t = 1.0 - r1 * r1 - r2 * r2;
    let am = matrix_a(a, r1, r2);
    let pa = vec![1.0, -t, -(a * a * r2 * r2 + r1 * r1 * r2 * r2), t * r1 * r1 * r2 * r2];
    let pc = vec![1.0, -(r1 * r1 + r2 * r2 + a * a), a * a * r1 * r1];
    let s = a * a + r2 * r2;
    let pd = vec![1.0, -s, 0.0];

    let report = |which, basis: Vec<BasisLabel>, entries: DMatrix<f64>, char_poly: Vec<f64>| SmallMatrixReport {
        which,
        basis,
        entries,
        roots: linalg::poly_roots(&char_poly),
        char_poly,
    };
    let out = vec![
        report(
            SmallMatrix::A,
            vec![BasisLabel::e(0), BasisLabel::f(-1), BasisLabel::g(-1)],
            DMatrix::from_fn(3, 3, |i, j| am[i][j]),
            pa,
        ),
        report(
            SmallMatrix::C,
            vec![BasisLabel::e(0), BasisLabel::g(-1)],
            DMatrix::from_row_slice(2, 2, &[r1 * r1 + r2 * r2, a * r2, a * r2, a * a]),
            pc,
        ),
        report(
            SmallMatrix::D,
            vec![BasisLabel::g(-1), BasisLabel::g(-2)],
            DMatrix::from_row_slice(2, 2, &[a * a, a * r2, a * r2, r2 * r2]),
            pd,
        ),
    ];

    let tol = 1e-10;
    let a_rep = &out[0];
    if a_rep.roots.iter().any(|x| x.norm() <= tol) {
        return Err(Error::ConstraintViolation("0 is a root of p_A"));
    }
    let c_rep = &out[1];
    if c_rep.roots.iter().any(|x| x.norm() <= tol || (x - c64(1.0)).norm() <= tol) {
        return Err(Error::ConstraintViolation("p_C vanishes at 0 or 1"));
    }
    let mut d_roots: Vec<f64> = out[2].roots.iter().map(|x| x.re).collect();
    d_roots.sort_by(f64::total_cmp);
    if d_roots[0].abs() > tol || (d_roots[1] - s).abs() > tol * s.max(1.0) {
        return Err(Error::ConstraintViolation("roots of p_D differ from {0, a^2 + r2^2}"));
    }
    Ok(out)
}

/// Embed a small matrix into the big window at its basis labels.
pub fn embed_small(index: &BasisIndex, rep: &SmallMatrixReport) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(index.dim(), index.dim());
    for (i, &bi) in rep.basis.iter().enumerate() {
        for (j, &bj) in rep.basis.iter().enumerate() {
            if let (Some(r), Some(c)) = (index.index_of(bi), index.index_of(bj)) {
                m[(r, c)] = c64(rep.entries[(i, j)]);
            }
        }
    }
    m
}
