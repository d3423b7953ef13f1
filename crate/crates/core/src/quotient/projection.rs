//! `P_E`, `P_F`, `P_G` by functional calculus.
//!
//! For the pants the eigenvalue `1` of `zz*` carries `E_1, E_2, ...` but not
//! `E_0` (which sits in the tridiagonal block with the `G` family), so `P_{E_0}`
//! is produced separately from the commutator:
//!
//! ```text
//! P    = f([z*, z])        projection onto span{E_0, F_{-1}, G_{-1}}
//! P_E1 = 1_{1}(z P z*)
//! P_E0 = z* P_E1 z
//! ```

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::cluster_radius;
use crate::c64;
use crate::domain::{BasisIndex, DomainParams, Family};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{Mode, OperatorMatrix, SparseMatrix};
use crate::operators;

/// `1_{|x − target| ≤ radius}(m)` for Hermitian `m`. Eigenvalues in the shell
/// `(radius, 2 radius)` make the cluster ambiguous.
pub fn indicator_projection(m: &DMatrix<Complex64>, target: f64, radius: f64) -> Result<DMatrix<Complex64>> {
    let (w, v) = linalg::hermitian_eigen(m);
    let mut cols = Vec::new();
    for (c, &x) in w.iter().enumerate() {
        let d = (x - target).abs();
        if d <= radius {
            cols.push(c);
        } else if d < 2.0 * radius {
            return Err(Error::ClusterAmbiguity { target, eigenvalue: x });
        }
    }
    let n = m.nrows();
    let mut p = DMatrix::zeros(n, n);
    for &c in &cols {
        let col = v.column(c);
        p += &col * col.adjoint();
    }
    Ok(p)
}

/// `f(m)` for a Hermitian sparse `m` whose support is small; `f(0)` must be
/// `0` so that the complement of the support is untouched.
pub fn sparse_function(m: &SparseMatrix, f: impl Fn(f64) -> f64) -> SparseMatrix {
    let mut support: Vec<usize> = m.iter().flat_map(|(r, c, _)| [r, c]).collect();
    support.sort_unstable();
    support.dedup();
    let k = support.len();
    let block = DMatrix::from_fn(k, k, |i, j| m.get(support[i], support[j]));
    let fb = linalg::hermitian_function(&block, f);
    let mut trips = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            trips.push((support[i], support[j], fb[(i, j)]));
        }
    }
    SparseMatrix::from_triplets(m.rows, m.cols, trips)
}

/// Indicator of the eigenvalue `1` of `zPz*`, separated from the roots of
/// `p_C` and from `0`.
pub(crate) fn one_indicator(params: &DomainParams) -> Result<impl Fn(f64) -> f64> {
    let c = &operators::small_matrices(params)?[1];
    let gap = c.roots.iter().map(|x| (x - c64(1.0)).norm()).fold(1.0, f64::min);
    Ok(move |x: f64| if (x - 1.0).abs() < 0.5 * gap { 1.0 } else { 0.0 })
}

/// Indicator of the nonzero eigenvalues, i.e. the roots of `p_A` for the
/// commutator.
pub(crate) fn nonzero_indicator(params: &DomainParams) -> Result<impl Fn(f64) -> f64> {
    let a = &operators::small_matrices(params)?[0];
    let smallest = a.roots.iter().map(|x| x.norm()).fold(f64::INFINITY, f64::min);
    Ok(move |x: f64| if x.abs() > 0.5 * smallest { 1.0 } else { 0.0 })
}

/// The three projections of the commutator route: `(P, P_E1, P_E0)`.
pub fn e0_route(index: &BasisIndex) -> Result<(SparseMatrix, SparseMatrix, SparseMatrix)> {
    let params = &index.params;
    let p = sparse_function(&operators::commutator_exact_sparse(index), nonzero_indicator(params)?);
    let z = operators::z_sparse(index);
    let zs = z.adjoint();
    let zpz = z.mul_sparse(&p).mul_sparse(&zs);
    let p_e1 = sparse_function(&zpz, one_indicator(params)?);
    let p_e0 = zs.mul_sparse(&p_e1).mul_sparse(&z);
    Ok((p, p_e1, p_e0))
}

/// Spectral projection onto the `E`, `F` or `G` family.
pub fn spectral_projection(params: &DomainParams, n: usize, which: Family) -> Result<OperatorMatrix> {
    let index = BasisIndex::new(*params, n)?;
    let rad = cluster_radius(params)?;
    let dim = index.dim();
    let name = match which {
        Family::E => "P_E",
        Family::F => "P_F",
        Family::G => "P_G",
    };
    let (pe, pf) = match *params {
        DomainParams::Disk => unreachable!("cluster_radius rejects the disk"),
        DomainParams::Annulus { r } => {
            // z*z is 1 on E and r² on F, with no coupling.
            let m = operators::zstarz_exact_sparse(&index).to_dense();
            (indicator_projection(&m, 1.0, rad)?, indicator_projection(&m, r * r, rad)?)
        }
        DomainParams::Pants { r1, .. } => {
            let m = operators::zzstar_exact_sparse(&index).to_dense();
            let pf = indicator_projection(&m, r1 * r1, rad)?;
            if which == Family::F {
                (DMatrix::zeros(dim, dim), pf)
            } else {
                let (_, _, p_e0) = e0_route(&index)?;
                let pe = indicator_projection(&m, 1.0, rad)? + p_e0.to_dense();
                (pe, pf)
            }
        }
    };
    let out = match which {
        Family::E => pe,
        Family::F => pf,
        Family::G if !params.has_family(Family::G) => DMatrix::zeros(dim, dim),
        Family::G => DMatrix::identity(dim, dim) - pe - pf,
    };
    Ok(OperatorMatrix::from_dense(&index, out, Mode::Exact, name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::{max_deviation, slice_projection};

    #[test]
    fn pants_projections_match_slices() {
        let p = DomainParams::default_pants();
        let idx = BasisIndex::new(p, 30).unwrap();
        for fam in [Family::E, Family::F, Family::G] {
            let got = spectral_projection(&p, 30, fam).unwrap().to_sparse();
            let want = slice_projection(&idx, |l| l.family == fam);
            assert!(max_deviation(&got, &want) < 1e-10, "{fam:?}");
        }
    }

    #[test]
    fn annulus_has_no_g() {
        let p = DomainParams::annulus(0.5).unwrap();
        let g = spectral_projection(&p, 10, Family::G).unwrap();
        assert!(g.to_dense().iter().all(|v| v.norm() == 0.0));
        assert!(matches!(
            spectral_projection(&DomainParams::Disk, 10, Family::E),
            Err(Error::UnsupportedDomain { .. })
        ));
    }

    #[test]
    fn ambiguity_is_reported() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![c64(1.0), c64(0.85)]));
        assert!(matches!(indicator_projection(&m, 1.0, 0.1), Err(Error::ClusterAmbiguity { .. })));
    }
}
