//! Linear-algebra oracles for the resolvent solvers.
//!
//! Outside the unit disk the square section `z_N − λ` is a contraction shifted
//! by `λ` and LU is reliable. Inside a hole the square section is useless (it
//! is exactly singular at `λ = 0` and `λ = a`, and exponentially ill
//! conditioned elsewhere), so the system is posed on the rectangular section
//! that keeps the row `E_{N+1}` and solved in the least-squares sense.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::pseudospectrum::section_z;
use crate::c64;
use crate::domain::{CoefficientVector, DomainParams};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Mode;
use crate::operators;

/// Dense solve of `(z − λ) φ = rhs` on the window.
pub fn dense_resolvent_z(params: &DomainParams, lambda: Complex64, rhs: &CoefficientVector) -> Result<CoefficientVector> {
    if rhs.index.params != *params {
        return Err(Error::ConstraintViolation("rhs index built for different parameters"));
    }
    let idx = &rhs.index;
    let values = if lambda.norm() > 1.0 {
        let m: DMatrix<Complex64> = operators::z_sparse(idx).shifted(-lambda).to_dense();
        linalg::lu_solve(&m, &rhs.values)?
    } else {
        let sec = section_z(idx, lambda);
        let mut b: Vec<Complex64> = rhs.values.clone();
        b.resize(sec.rows, c64(0.0));
        linalg::least_squares(&sec.to_dense(), &b)?
    };
    CoefficientVector::from_values(idx, values)
}

/// Dense LU solve of `(zz* − λ) φ = rhs` with exact-mode `zz*`. The matrix
/// is real, so one real factorization serves both parts of the right-hand side.
pub fn dense_resolvent_zzstar(params: &DomainParams, lambda: f64, rhs: &CoefficientVector) -> Result<CoefficientVector> {
    if rhs.index.params != *params {
        return Err(Error::ConstraintViolation("rhs index built for different parameters"));
    }
    let m = operators::build_zzstar(&rhs.index, Mode::Exact).to_sparse().shifted(c64(-lambda)).to_dense();
    let lu = m.map(|v| v.re).lu();
    let part = |f: fn(&Complex64) -> f64| -> Result<DVector<f64>> {
        lu.solve(&DVector::from_iterator(rhs.values.len(), rhs.values.iter().map(f))).ok_or(Error::Singular)
    };
    let (re, im) = (part(|v| v.re)?, part(|v| v.im)?);
    if re.iter().chain(im.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Singular);
    }
    CoefficientVector::from_values(&rhs.index, re.iter().zip(im.iter()).map(|(&a, &b)| Complex64::new(a, b)).collect())
}
