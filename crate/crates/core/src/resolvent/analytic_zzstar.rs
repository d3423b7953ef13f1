//! Closed-form solution of `(zz* − λ) φ = φ̃` for the pants.
//!
//! `E_n` (n ≥ 1) and `F_n` are eigenvectors, so those coefficients are divided
//! by `1 − λ` and `r1² − λ`. The remaining block couples `g_0 := e_0` with
//! `G_{-1}, G_{-2}, ...`:
//!
//! ```text
//! a r2 g_{n+1} + (a² + r2² − λ) g_n + a r2 g_{n-1} = g̃_n     (n ≤ −1)
//! (r1² + r2² − λ) g_0 + a r2 g_{-1}                = g̃_0
//! ```
//!
//! Variation of parameters against the homogeneous solutions `x±^n` gives a
//! particular solution; the boundary row fixes the multiple of the root that
//! decays at `−∞` (`x−` below the band, `x+` above it).

use alloc::vec::Vec;

use num_complex::Complex64;

use super::{zz_region, ZzRegion};
use crate::c64;
use crate::domain::{BasisLabel, CoefficientVector, DomainParams};
use crate::error::{Error, Result};
use crate::spectral::characteristic_roots;

/// Solve `(zz* − λ) φ = rhs` for real `λ` in the resolvent intervals.
pub fn solve_resolvent_zzstar(params: &DomainParams, lambda: f64, rhs: &CoefficientVector) -> Result<CoefficientVector> {
    if rhs.index.params != *params {
        return Err(Error::ConstraintViolation("rhs index built for different parameters"));
    }
    let region = zz_region(params, lambda)?;
    let (a, r1, r2) = params.pants_params("solve_resolvent_zzstar")?;
    let idx = &rhs.index;
    let n = idx.n() as i64;
    let mut out = CoefficientVector::zeros(idx);

    for k in 1..=n {
        out.set(BasisLabel::e(k), rhs.get(BasisLabel::e(k)) / (1.0 - lambda));
        out.set(BasisLabel::f(-k), rhs.get(BasisLabel::f(-k)) / (r1 * r1 - lambda));
    }

    // g̃_j for j = 0, -1, ..., -N; gt[m] = g̃_{-m}.
    let gt: Vec<Complex64> =
        (0..=n).map(|m| if m == 0 { rhs.get(BasisLabel::e(0)) } else { rhs.get(BasisLabel::g(-m)) }).collect();

    let rd = characteristic_roots(params, c64(lambda))?;
    let sd = rd.delta.sqrt();
    let (xp, xm) = (rd.x_plus, rd.x_minus);
    let corner = r1 * r1 + r2 * r2 - lambda;
    let kp = xp * corner + a * r2;
    let km = xm * corner + a * r2;

    // Sum over j = -1..-N of g̃_j w^{j + shift}.
    let moment = |w: Complex64, shift: i32| -> Complex64 {
        (1..=n).map(|m| gt[m as usize] * w.powi(shift - m as i32)).sum()
    };
    // Σ_{j=n+1}^{-1} g̃_j w^{j-n} and Σ_{j≤n} g̃_j w^{j-n} at n = -k.
    let above = |w: Complex64, k: i64| -> Complex64 { (1..k).map(|m| gt[m as usize] * w.powi((k - m) as i32)).sum() };
    let below = |w: Complex64, k: i64| -> Complex64 { (k..=n).map(|m| gt[m as usize] * w.powi((k - m) as i32)).sum() };

    // `dec` decays toward −∞ and carries the boundary constant; the sign
    // flips because a r2 (x− − x+) = −√Δ above the band.
    let (dec, other, k_dec, k_other, sign) = match region {
        ZzRegion::Low => (xm, xp, km, kp, 1.0),
        ZzRegion::High => (xp, xm, kp, km, -1.0),
    };
    let s = moment(dec, 1) / sd;
    let c = (gt[0] - k_other * s * sign) / k_dec;
    let g = |k: i64| -> Complex64 {
        if k == 0 {
            c * dec + other * s * sign
        } else {
            c * dec.powi(1 - k as i32) + (above(other, k) + below(dec, k)) * sign / sd
        }
    };

    let g0 = g(0);
    out.set(BasisLabel::e(0), g0);
    for k in 1..=n {
        out.set(BasisLabel::g(-k), g(k));
    }
    if out.values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::Singular);
    }
    Ok(out)
}
