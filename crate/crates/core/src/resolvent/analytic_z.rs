//! Closed-form solution of `(z − λ) φ = φ̃`.
//!
//! With `ρ = r1` (or `r` for the annulus) and `q = (λ − a)/r2`, the
//! coefficient equations are
//!
//! ```text
//! E_0:  ρ f_{-1} + r2 g_{-1} − λ e_0 = ẽ_0
//! E_n:  e_{n-1} − λ e_n           = ẽ_n
//! F_n:  ρ f_{n-1} − λ f_n         = f̃_n
//! G_n:  r2 g_{n-1} + (a − λ) g_n  = g̃_n
//! ```
//!
//! and each region picks the bounded branch of every one-step recurrence. Sums
//! are evaluated directly over the window; because the right-hand side lives
//! in the window and the chosen branches only look toward the support, the
//! result is the infinite solution restricted to the window.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{z_region, ZRegion};
use crate::c64;
use crate::domain::{CoefficientVector, DomainParams};
use crate::error::{Error, Result};
use crate::operators;

/// Coefficients split by family; `f[k-1]` holds `f_{-k}`.
struct Blocks {
    e: Vec<Complex64>,
    f: Vec<Complex64>,
    g: Vec<Complex64>,
}

impl Blocks {
    fn split(v: &CoefficientVector) -> Self {
        let n = v.index.n();
        let f_on = v.index.params.has_family(crate::Family::F);
        let g_on = v.index.params.has_family(crate::Family::G);
        Blocks {
            e: v.values[0..=n].to_vec(),
            f: if f_on { v.values[n + 1..2 * n + 1].to_vec() } else { Vec::new() },
            g: if g_on { v.values[2 * n + 1..3 * n + 1].to_vec() } else { Vec::new() },
        }
    }

    fn join(self, like: &CoefficientVector) -> CoefficientVector {
        let mut values = self.e;
        values.extend(self.f);
        values.extend(self.g);
        CoefficientVector { index: like.index.clone(), values }
    }
}

/// `Σ_{j=0}^{N} w^j x_j`.
fn moment_e(w: Complex64, x: &[Complex64]) -> Complex64 {
    x.iter().enumerate().map(|(j, &xj)| w.powi(j as i32) * xj).sum()
}

/// `Σ_{j=-1}^{-N} w^j x_j` over a negative-index block.
fn moment_neg(w: Complex64, x: &[Complex64]) -> Complex64 {
    x.iter().enumerate().map(|(k, &xj)| w.powi(-(k as i32 + 1)) * xj).sum()
}

/// `e_n = Σ_{j>n} λ^{j-n-1} ẽ_j` (valid for `|λ| < 1`).
fn e_block(lambda: Complex64, et: &[Complex64]) -> Vec<Complex64> {
    let n = et.len();
    (0..n)
        .map(|i| (i + 1..n).map(|j| lambda.powi((j - i - 1) as i32) * et[j]).sum())
        .collect()
}

/// Decaying branch toward `−∞` from a known `x_{-1}`:
/// `x_n = w^{-1-n} x_{-1} + (1/ρ) Σ_{j=n+1}^{-1} w^{j-n-1} x̃_j`, `|w| < 1`.
fn downward(w: Complex64, rho: f64, x_m1: Complex64, xt: &[Complex64]) -> Vec<Complex64> {
    let n = xt.len();
    (1..=n)
        .map(|k| {
            // index n = -k
            let mut s = w.powi(k as i32 - 1) * x_m1;
            for m in 1..k {
                // j = -m, exponent j - n - 1 = k - m - 1
                s += w.powi((k - m - 1) as i32) * xt[m - 1] / rho;
            }
            s
        })
        .collect()
}

/// Branch that vanishes below the support:
/// `x_n = −(1/ρ) Σ_{j≤n} w^{j-n-1} x̃_j`, `|w| > 1`.
fn upward(w: Complex64, rho: f64, xt: &[Complex64]) -> Vec<Complex64> {
    let n = xt.len();
    (1..=n)
        .map(|k| {
            let mut s = c64(0.0);
            for m in k..=n {
                // j = -m ≤ n = -k, exponent j - n - 1 = k - m - 1 ≤ -1
                s += w.powi(k as i32 - m as i32 - 1) * xt[m - 1];
            }
            -s / rho
        })
        .collect()
}

/// Solve `(z − λ) φ = rhs` by the closed-form case for the region of `λ`.
///
/// For `|λ| > 1` the Neumann series `−Σ λ^{-k-1} z^k rhs` is summed with the
/// truncated `z`; since `z` never moves mass from outside the window back in,
/// the truncated powers agree with the infinite ones on the window. Very close
/// to the unit circle the series is replaced by a direct solve.
pub fn solve_resolvent_z(params: &DomainParams, lambda: Complex64, rhs: &CoefficientVector) -> Result<CoefficientVector> {
    if rhs.index.params != *params {
        return Err(Error::ConstraintViolation("rhs index built for different parameters"));
    }
    let region = z_region(params, lambda)?;
    if region == ZRegion::Outside {
        return neumann(lambda, rhs);
    }
    let t = Blocks::split(rhs);
    let (e, f, g) = match (*params, region) {
        (DomainParams::Annulus { r }, ZRegion::Zero) => {
            let mut f = vec![c64(0.0); t.f.len()];
            f[0] = t.e[0] / r;
            for k in 2..=f.len() {
                f[k - 1] = t.f[k - 2] / r;
            }
            (shift_down(&t.e), f, Vec::new())
        }
        (DomainParams::Annulus { r }, ZRegion::Hole1) => {
            let f_m1 = moment_e(lambda, &t.e) / r;
            (e_block(lambda, &t.e), downward(lambda / r, r, f_m1, &t.f), Vec::new())
        }
        (DomainParams::Pants { a, r1, r2 }, ZRegion::Zero) => {
            let q = c64(-a / r2);
            let f_m1 = (t.e[0] + moment_neg(q, &t.g)) / r1;
            let mut f = vec![c64(0.0); t.f.len()];
            f[0] = f_m1;
            for k in 2..=f.len() {
                f[k - 1] = t.f[k - 2] / r1;
            }
            (shift_down(&t.e), f, upward(q, r2, &t.g))
        }
        (DomainParams::Pants { a, r1, r2 }, ZRegion::Hole1) => {
            let q = (lambda - a) / r2;
            let f_m1 = (moment_e(lambda, &t.e) + moment_neg(q, &t.g)) / r1;
            (e_block(lambda, &t.e), downward(lambda / r1, r1, f_m1, &t.f), upward(q, r2, &t.g))
        }
        (DomainParams::Pants { a, r1, r2 }, ZRegion::Hole2) => {
            let q = (lambda - a) / r2;
            let w = lambda / r1;
            let g_m1 = (moment_e(lambda, &t.e) + moment_neg(w, &t.f)) / r2;
            (e_block(lambda, &t.e), upward(w, r1, &t.f), downward(q, r2, g_m1, &t.g))
        }
        _ => unreachable!("z_region only returns holes that exist"),
    };
    Ok(Blocks { e, f, g }.join(rhs))
}

/// `e_n = ẽ_{n+1}`.
fn shift_down(et: &[Complex64]) -> Vec<Complex64> {
    (0..et.len()).map(|i| et.get(i + 1).copied().unwrap_or(c64(0.0))).collect()
}

const NEUMANN_MAX_TERMS: usize = 50_000;

fn neumann(lambda: Complex64, rhs: &CoefficientVector) -> Result<CoefficientVector> {
    let m = lambda.norm();
    if m <= 1.0 {
        return Err(Error::SeriesDivergence { ratio: 1.0 / m });
    }
    let z = operators::z_sparse(&rhs.index);
    let inv = Complex64::new(1.0, 0.0) / lambda;
    let mut term: Vec<Complex64> = rhs.values.iter().map(|x| -x * inv).collect();
    let mut acc = term.clone();
    // ‖z‖ ≤ 1, so the k-th term is at most |λ|^{-k-1}‖rhs‖.
    let needed = libm::ceil(libm::log(1e-20) / libm::log(1.0 / m)) as usize + 4;
    if needed > NEUMANN_MAX_TERMS {
        // Too close to the unit circle for the series; the square section is
        // still well conditioned there.
        return super::dense::dense_resolvent_z(&rhs.index.params, lambda, rhs);
    }
    for _ in 0..needed {
        term = z.mul_vec(&term).into_iter().map(|x| x * inv).collect();
        let mut any = false;
        for (a, t) in acc.iter_mut().zip(&term) {
            if *t != c64(0.0) {
                any = true;
                *a += t;
            }
        }
        if !any {
            break;
        }
    }
    Ok(CoefficientVector { index: rhs.index.clone(), values: acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{BasisIndex, BasisLabel};

    fn residual(lambda: Complex64, rhs: &CoefficientVector, phi: &CoefficientVector) -> f64 {
        let z = operators::z_sparse(&rhs.index);
        let zphi = z.mul_vec(&phi.values);
        let mut r = 0.0f64;
        for i in 0..zphi.len() {
            r = r.max((zphi[i] - lambda * phi.values[i] - rhs.values[i]).norm());
        }
        r
    }

    #[test]
    fn zero_case_f_shift() {
        let p = DomainParams::default_pants();
        let idx = BasisIndex::new(p, 10).unwrap();
        let rhs = CoefficientVector::unit(&idx, BasisLabel::f(-3));
        let phi = solve_resolvent_z(&p, c64(0.0), &rhs).unwrap();
        assert!((phi.get(BasisLabel::f(-4)) - c64(5.0)).norm() < 1e-14);
        let nz = phi.values.iter().filter(|v| v.norm() > 0.0).count();
        assert_eq!(nz, 1);
    }

    #[test]
    fn small_cases_solve_the_system() {
        let p = DomainParams::default_pants();
        let idx = BasisIndex::new(p, 40).unwrap();
        let mut rhs = CoefficientVector::zeros(&idx);
        for (i, v) in rhs.values.iter_mut().enumerate() {
            let l = idx.label_of(i);
            if l.n.abs() <= 5 {
                *v = Complex64::new(1.0 / (1.0 + i as f64), 0.3 * (i % 3) as f64);
            }
        }
        for lam in [c64(0.0), Complex64::new(0.05, 0.08), Complex64::new(0.52, -0.04), Complex64::new(-1.2, 0.5)] {
            let phi = solve_resolvent_z(&p, lam, &rhs).unwrap();
            // Only the outer edge rows may carry truncation residual.
            let z = operators::z_sparse(&idx);
            let zphi = z.mul_vec(&phi.values);
            for i in 0..idx.dim() {
                if idx.edge_distance(i) > 0 {
                    let r = (zphi[i] - lam * phi.values[i] - rhs.values[i]).norm();
                    assert!(r < 1e-12, "lambda {lam} row {} residual {r}", idx.label_of(i));
                }
            }
        }
    }

    #[test]
    fn annulus_hole() {
        let p = DomainParams::annulus(0.5).unwrap();
        let idx = BasisIndex::new(p, 30).unwrap();
        let rhs = CoefficientVector::unit(&idx, BasisLabel::e(2));
        for lam in [c64(0.0), Complex64::new(0.2, 0.1)] {
            let phi = solve_resolvent_z(&p, lam, &rhs).unwrap();
            assert!(residual(lam, &rhs, &phi) < 1e-9);
        }
    }
}
