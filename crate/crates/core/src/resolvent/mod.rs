//! Resolvents of `z` and `zz*`.
//!
//! The analytic solvers evaluate the closed-form solutions of the coefficient
//! recurrences; [`dense`] holds the linear-algebra oracles they are checked
//! against.

pub mod analytic_z;
pub mod analytic_zzstar;
pub mod dense;
pub mod kernels;
pub mod pseudospectrum;

use num_complex::Complex64;

use crate::domain::DomainParams;
use crate::error::{Error, Result};

pub use analytic_z::solve_resolvent_z;
pub use analytic_zzstar::solve_resolvent_zzstar;
pub use kernels::{schur_young_bound, BoundReport, KernelName, KernelSpec};
pub use pseudospectrum::{pseudospectrum_grid, GridPoint, GridSpec, Region, SminMethod};

/// Relative residual tolerance for the resolvent solvers.
pub const TOL_RESOLVENT: f64 = 1e-9;

/// Minimum distance from the boundary of a resolvent region.
pub const REGION_MARGIN: f64 = 1e-6;

/// Which closed-form case of the resolvent of `z` applies at `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZRegion {
    /// `λ = 0` exactly.
    Zero,
    /// Inside the hole centred at the origin.
    Hole1,
    /// Inside the hole centred at `a` (pants only).
    Hole2,
    /// `|λ| > 1`.
    Outside,
}

/// Classify `λ` for the resolvent of `z`; `RegionViolation` inside the
/// closed domain or within [`REGION_MARGIN`] of its boundary.
pub fn z_region(params: &DomainParams, lambda: Complex64) -> Result<ZRegion> {
    let m = lambda.norm();
    if m > 1.0 + REGION_MARGIN {
        return Ok(ZRegion::Outside);
    }
    let hole = match *params {
        DomainParams::Disk => None,
        DomainParams::Annulus { r } => (m < r - REGION_MARGIN).then_some(ZRegion::Hole1),
        DomainParams::Pants { a, r1, r2 } => {
            if m < r1 - REGION_MARGIN {
                Some(ZRegion::Hole1)
            } else if (lambda - a).norm() < r2 - REGION_MARGIN {
                Some(ZRegion::Hole2)
            } else {
                None
            }
        }
    };
    match hole {
        Some(ZRegion::Hole1) if m == 0.0 => Ok(ZRegion::Zero),
        Some(h) => Ok(h),
        None => Err(Error::RegionViolation { lambda, reason: "λ lies in the closed domain or too close to its boundary" }),
    }
}

/// Which closed-form case of the resolvent of `zz*` applies at real `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZzRegion {
    /// `0 < λ < (r2 − a)²`.
    Low,
    /// `(r2 + a)² < λ < 1`.
    High,
}

pub fn zz_region(params: &DomainParams, lambda: f64) -> Result<ZzRegion> {
    let (a, r1, r2) = params.pants_params("solve_resolvent_zzstar")?;
    let lo = (r2 - a) * (r2 - a);
    let hi = (r2 + a) * (r2 + a);
    let m = REGION_MARGIN;
    let region = if lambda > m && lambda < lo - m {
        ZzRegion::Low
    } else if lambda > hi + m && lambda < 1.0 - m {
        ZzRegion::High
    } else {
        return Err(Error::RegionViolation {
            lambda: Complex64::new(lambda, 0.0),
            reason: "λ must lie in (0, (r2-a)^2) or ((r2+a)^2, 1)",
        });
    };
    for eig in [crate::spectral::simple_eigenvalue(params)?, r1 * r1] {
        if (lambda - eig).abs() < m {
            return Err(Error::NearEigenvalue { lambda, eigenvalue: eig });
        }
    }
    Ok(region)
}
