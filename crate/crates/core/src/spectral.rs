//! Closed-form spectra, roots of the two-step recurrence, explicit
//! eigenvectors and truncated eigensolves.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::c64;
use crate::domain::{BasisIndex, BasisLabel, DomainParams};
use crate::error::{Error, Result};
use crate::linalg;
use crate::math;
use crate::matrix::{Mode, OperatorMatrix};
use crate::operators;

pub use crate::domain::CoefficientVector;

/// Which eigenspace an isolated point of `σ(zz*)` belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralFamily {
    EFamily,
    FFamily,
    Simple,
}

impl SpectralFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectralFamily::EFamily => "E",
            SpectralFamily::FFamily => "F",
            SpectralFamily::Simple => "simple",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsolatedPoint {
    pub value: f64,
    pub family: SpectralFamily,
}

/// Closed-form spectrum of `zz*`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumDescription {
    pub isolated: Vec<IsolatedPoint>,
    pub band: Option<(f64, f64)>,
    /// Set when the set is a consequence of the shift formulas rather than a
    /// stated theorem (the disk).
    pub derived_only: bool,
}

impl SpectrumDescription {
    pub fn value_of(&self, family: SpectralFamily) -> Option<f64> {
        self.isolated.iter().find(|p| p.family == family).map(|p| p.value)
    }
}

/// `σ(zz*)` from the closed forms.
pub fn closed_form_spectrum(params: &DomainParams) -> Result<SpectrumDescription> {
    let iso = |value, family| IsolatedPoint { value, family };
    Ok(match *params {
        DomainParams::Disk => SpectrumDescription {
            isolated: alloc::vec![iso(1.0, SpectralFamily::EFamily), iso(0.0, SpectralFamily::Simple)],
            band: None,
            derived_only: true,
        },
        DomainParams::Annulus { r } => SpectrumDescription {
            isolated: alloc::vec![iso(1.0, SpectralFamily::EFamily), iso(r * r, SpectralFamily::FFamily)],
            band: None,
            derived_only: false,
        },
        DomainParams::Pants { r1, .. } => SpectrumDescription {
            isolated: alloc::vec![
                iso(1.0, SpectralFamily::EFamily),
                iso(r1 * r1, SpectralFamily::FFamily),
                iso(simple_eigenvalue(params)?, SpectralFamily::Simple),
            ],
            band: Some(band(params)?),
            derived_only: false,
        },
    })
}

/// `[(r2 - a)^2, (r2 + a)^2]`.
pub fn band(params: &DomainParams) -> Result<(f64, f64)> {
    let (a, _, r2) = params.pants_params("band")?;
    Ok(((r2 - a) * (r2 - a), (r2 + a) * (r2 + a)))
}

/// The isolated eigenvalue `λ* = r1²(a² − r2² − r1²)/(a² − r1²)` below the band.
pub fn simple_eigenvalue(params: &DomainParams) -> Result<f64> {
    let (a, r1, r2) = params.pants_params("simple_eigenvalue")?;
    let (a2, r12, r22) = (a * a, r1 * r1, r2 * r2);
    let lam = r12 * (a2 - r22 - r12) / (a2 - r12);
    if !(lam > 0.0 && lam < r12) {
        return Err(Error::ConstraintViolation("0 < λ* < r1^2"));
    }
    if lam >= (r2 - a) * (r2 - a) {
        return Err(Error::ConstraintViolation("λ* below the band"));
    }
    Ok(lam)
}

// ---------------------------------------------------------------------------
// Characteristic roots

/// Roots of `a r2 x² + (r2² + a² − λ) x + a r2 = 0`.
///
/// `x± = (λ − r2² − a² ± √Δ)/(2 a r2)` with the principal square root. Below
/// the band `|x−| > 1 > |x+|`; above it `x+ > 1 > |x−|`; inside it the pair
/// is conjugate on the unit circle with `Im x+ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootData {
    pub lambda: Complex64,
    pub delta: Complex64,
    pub x_plus: Complex64,
    pub x_minus: Complex64,
}

impl RootData {
    /// The root of modulus greater than one (decays as `n → −∞`).
    pub fn growing(&self) -> Complex64 {
        if self.x_plus.norm() >= self.x_minus.norm() {
            self.x_plus
        } else {
            self.x_minus
        }
    }

    pub fn decaying(&self) -> Complex64 {
        if self.x_plus.norm() >= self.x_minus.norm() {
            self.x_minus
        } else {
            self.x_plus
        }
    }

    /// `max |p(x±)|` for `p(x) = a r2 x² + (r2² + a² − λ) x + a r2`.
    pub fn residual(&self, params: &DomainParams) -> f64 {
        let (a, _, r2) = params.pants_params("residual").expect("pants");
        let p = |x: Complex64| x * x * (a * r2) + x * (r2 * r2 + a * a - self.lambda) + a * r2;
        p(self.x_plus).norm().max(p(self.x_minus).norm())
    }
}

pub fn characteristic_roots(params: &DomainParams, lambda: Complex64) -> Result<RootData> {
    let (a, _, r2) = params.pants_params("characteristic_roots")?;
    let s = r2 * r2 + a * a;
    let b = c64(s) - lambda;
    let delta = b * b - 4.0 * a * a * r2 * r2;
    let sq = delta.sqrt();
    let den = 2.0 * a * r2;
    Ok(RootData { lambda, delta, x_plus: (lambda - s + sq) / den, x_minus: (lambda - s - sq) / den })
}

// ---------------------------------------------------------------------------
// Explicit eigenvectors

/// A truncated eigenvector together with a bound on what was cut away.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedEigenvector {
    pub vector: CoefficientVector,
    /// Norm of the discarded coefficients (for `φ_λ`), or the exact residual
    /// bound `‖(M − λ)v‖` (for the simple eigenvector).
    pub tail_bound: f64,
}

/// Truncation of `φ_λ = Σ λ^n E_n + Σ (λ/r1)^n F_n + Σ ((λ−a)/r2)^n G_n`, which
/// satisfies `z* φ_λ = λ φ_λ` for `λ` interior to the domain.
pub fn eigenvector_phi_lambda_z_star(
    params: &DomainParams,
    lambda: Complex64,
    index: &BasisIndex,
) -> Result<TruncatedEigenvector> {
    let m = lambda.norm();
    let inside = match *params {
        DomainParams::Disk => m < 1.0,
        DomainParams::Annulus { r } => m < 1.0 && m > r,
        DomainParams::Pants { a, r1, r2 } => m < 1.0 && m > r1 && (lambda - a).norm() > r2,
    };
    if !inside {
        return Err(Error::DomainViolation { lambda, reason: "needs |λ| < 1 and λ outside every hole" });
    }
    let n = index.n() as i32;
    let mut v = CoefficientVector::zeros(index);
    let geom_tail = |ratio: f64| {
        let q = math::powi(ratio, 2 * (n + 1));
        q / (1.0 - ratio * ratio)
    };
    let mut tail2 = geom_tail(m);
    for k in 0..=n {
        v.set(BasisLabel::e(k as i64), lambda.powi(k));
    }
    if let Some(rf) = params.f_radius() {
        let w = lambda / rf;
        for k in 1..=n {
            v.set(BasisLabel::f(-(k as i64)), w.powi(-k));
        }
        tail2 += geom_tail(rf / m);
    }
    if let DomainParams::Pants { a, r2, .. } = *params {
        let w = (lambda - a) / r2;
        for k in 1..=n {
            v.set(BasisLabel::g(-(k as i64)), w.powi(-k));
        }
        tail2 += geom_tail(r2 / (lambda - a).norm());
    }
    Ok(TruncatedEigenvector { vector: v, tail_bound: math::sqrt(tail2) })
}

/// Eigenvector `Σ_{n ≤ 0} x−^{n+1} G_n` (with `G_0 := E_0`) of `zz*` for `λ*`.
///
/// `tail_bound` is `a r2 |x−|^{−N}`, the exact residual against exact-mode
/// `zz*` in infinite precision (it sits in row `G_{−N}`).
pub fn eigenvector_simple(params: &DomainParams, index: &BasisIndex) -> Result<TruncatedEigenvector> {
    let (a, _, r2) = params.pants_params("eigenvector_simple")?;
    let lam = simple_eigenvalue(params)?;
    let roots = characteristic_roots(params, c64(lam))?;
    let x = roots.x_minus;
    let n = index.n() as i32;
    let mut v = CoefficientVector::zeros(index);
    v.set(BasisLabel::e(0), x);
    for k in 1..=n {
        v.set(BasisLabel::g(-(k as i64)), x.powi(1 - k));
    }
    Ok(TruncatedEigenvector { vector: v, tail_bound: a * r2 * crate::math::powi(x.norm(), -n) })
}

// ---------------------------------------------------------------------------
// Truncated spectra

/// Tolerance on conjugate symmetry accepted by [`truncated_eigenvalues`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Ascending eigenvalues of a Hermitian truncated operator.
pub fn truncated_eigenvalues(matrix: &OperatorMatrix) -> Result<Vec<f64>> {
    let dev = matrix.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { name: matrix.name.clone(), deviation: dev });
    }
    Ok(linalg::hermitian_eigenvalues(&matrix.to_dense()))
}

/// Eigenvalue classification used by the convergence report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classified {
    Band,
    Isolated(SpectralFamily),
}

/// Band if within `0.02·(hi − lo)` of the band, else the nearest isolated point.
pub fn classify(spec: &SpectrumDescription, x: f64) -> Classified {
    if let Some((lo, hi)) = spec.band {
        let dist = if x < lo { lo - x } else if x > hi { x - hi } else { 0.0 };
        if dist <= 0.02 * (hi - lo) {
            return Classified::Band;
        }
    }
    let nearest = spec
        .isolated
        .iter()
        .min_by(|p, q| (p.value - x).abs().total_cmp(&(q.value - x).abs()))
        .expect("isolated points are never empty");
    Classified::Isolated(nearest.family)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub err_lambda_star: f64,
    pub err_r1sq: f64,
    pub err_one: f64,
    pub band_lo_err: f64,
    pub band_hi_err: f64,
}

/// Distances of the exact-mode truncated spectrum of `zz*` to the closed forms.
pub fn spectrum_convergence_report(params: &DomainParams, n_list: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let spec = closed_form_spectrum(params)?;
    let (lo, hi) = band(params)?;
    let lam = simple_eigenvalue(params)?;
    let (_, r1, _) = params.pants_params("spectrum_convergence_report")?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let idx = BasisIndex::new(*params, n)?;
        let ev = truncated_eigenvalues(&operators::build_zzstar(&idx, Mode::Exact))?;
        let nearest = |t: f64| ev.iter().map(|x| (x - t).abs()).fold(f64::INFINITY, f64::min);
        let band_vals: Vec<f64> = ev.iter().copied().filter(|&x| classify(&spec, x) == Classified::Band).collect();
        let (bmin, bmax) = band_vals
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        rows.push(ConvergenceRow {
            n,
            err_lambda_star: nearest(lam),
            err_r1sq: nearest(r1 * r1),
            err_one: nearest(1.0),
            band_lo_err: (bmin - lo).abs(),
            band_hi_err: (bmax - hi).abs(),
        });
    }
    Ok(rows)
}

/// Count eigenvalues within `tol` of `target`.
pub fn multiplicity(eigenvalues: &[f64], target: f64, tol: f64) -> usize {
    eigenvalues.iter().filter(|x| (*x - target).abs() <= tol).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_eigenvalue_values() {
        let p = DomainParams::default_pants();
        assert!((simple_eigenvalue(&p).unwrap() - 0.032380952380952384).abs() < 1e-17);
        let q = DomainParams::pants(0.6, 0.1, 0.2).unwrap();
        assert!((simple_eigenvalue(&q).unwrap() - 0.008857142857142857).abs() < 1e-17);
    }

    #[test]
    fn roots_at_lambda_star() {
        let p = DomainParams::default_pants();
        let lam = simple_eigenvalue(&p).unwrap();
        let rd = characteristic_roots(&p, c64(lam)).unwrap();
        assert!((rd.x_minus - c64(-2.1)).norm() < 1e-12);
        assert!((rd.x_plus - c64((lam - 0.08) / 0.1)).norm() < 1e-12);
    }

    #[test]
    fn band_edge_double_root() {
        let p = DomainParams::default_pants();
        let rd = characteristic_roots(&p, c64(0.49)).unwrap();
        assert!(rd.delta.norm() < 1e-15);
        assert!((rd.x_plus - rd.x_minus).norm() < 1e-6);
    }

    #[test]
    fn annulus_and_disk_spectra() {
        let s = closed_form_spectrum(&DomainParams::annulus(0.5).unwrap()).unwrap();
        assert_eq!(s.value_of(SpectralFamily::FFamily), Some(0.25));
        assert!(s.band.is_none());
        let d = closed_form_spectrum(&DomainParams::Disk).unwrap();
        assert!(d.derived_only);
    }

    #[test]
    fn phi_rejects_hole_points() {
        let p = DomainParams::default_pants();
        let idx = BasisIndex::new(p, 10).unwrap();
        assert!(matches!(
            eigenvector_phi_lambda_z_star(&p, c64(0.1), &idx),
            Err(Error::DomainViolation { .. })
        ));
        assert!(eigenvector_phi_lambda_z_star(&p, c64(0.5), &idx).is_err());
        assert!(eigenvector_phi_lambda_z_star(&p, c64(1.0), &idx).is_err());
    }

    #[test]
    fn classification_threshold() {
        let s = closed_form_spectrum(&DomainParams::default_pants()).unwrap();
        assert_eq!(classify(&s, 0.0899), Classified::Band);
        assert_eq!(classify(&s, 0.0401), Classified::Isolated(SpectralFamily::FFamily));
        assert_eq!(classify(&s, 0.99), Classified::Isolated(SpectralFamily::EFamily));
    }
}
