//! Domain parameters, truncation level and the canonical basis enumeration.
//!
//! Order is fixed: `E_0..E_N`, then `F_{-1}..F_{-N}`, then `G_{-1}..G_{-N}`, so
//! every family occupies a contiguous index range.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    Disk,
    Annulus,
    Pants,
}

impl DomainKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DomainKind::Disk => "disk",
            DomainKind::Annulus => "annulus",
            DomainKind::Pants => "pants",
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for DomainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disk" => Ok(DomainKind::Disk),
            "annulus" => Ok(DomainKind::Annulus),
            "pants" => Ok(DomainKind::Pants),
            _ => Err(Error::ConstraintViolation("kind must be one of disk, annulus, pants")),
        }
    }
}

/// Which quantum domain, with its radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainParams {
    Disk,
    /// Annulus `r < |ζ| < 1`.
    Annulus { r: f64 },
    /// Unit disk minus `|ζ| ≤ r1` and `|ζ - a| ≤ r2`.
    Pants { a: f64, r1: f64, r2: f64 },
}

impl DomainParams {
    pub fn disk() -> Self {
        DomainParams::Disk
    }

    pub fn annulus(r: f64) -> Result<Self> {
        let p = DomainParams::Annulus { r };
        validate(&p)?;
        Ok(p)
    }

    pub fn pants(a: f64, r1: f64, r2: f64) -> Result<Self> {
        let p = DomainParams::Pants { a, r1, r2 };
        validate(&p)?;
        Ok(p)
    }

    /// The default parameter set `pants(0.5, 0.2, 0.2)`.
    pub fn default_pants() -> Self {
        DomainParams::Pants { a: 0.5, r1: 0.2, r2: 0.2 }
    }

    pub fn kind(&self) -> DomainKind {
        match self {
            DomainParams::Disk => DomainKind::Disk,
            DomainParams::Annulus { .. } => DomainKind::Annulus,
            DomainParams::Pants { .. } => DomainKind::Pants,
        }
    }

    /// `(a, r1, r2)` for pants, `UnsupportedDomain` otherwise.
    pub fn pants_params(&self, op: &'static str) -> Result<(f64, f64, f64)> {
        match *self {
            DomainParams::Pants { a, r1, r2 } => Ok((a, r1, r2)),
            _ => Err(Error::UnsupportedDomain { op, kind: self.kind().as_str() }),
        }
    }

    /// Weight of the `F` family: `r1` for pants, `r` for the annulus.
    pub fn f_radius(&self) -> Option<f64> {
        match *self {
            DomainParams::Disk => None,
            DomainParams::Annulus { r } => Some(r),
            DomainParams::Pants { r1, .. } => Some(r1),
        }
    }

    pub fn has_family(&self, family: Family) -> bool {
        match family {
            Family::E => true,
            Family::F => !matches!(self, DomainParams::Disk),
            Family::G => matches!(self, DomainParams::Pants { .. }),
        }
    }

    pub fn family_count(&self) -> usize {
        match self {
            DomainParams::Disk => 1,
            DomainParams::Annulus { .. } => 2,
            DomainParams::Pants { .. } => 3,
        }
    }
}

/// Check the strict geometric inequalities of the domain.
pub fn validate(params: &DomainParams) -> Result<()> {
    match *params {
        DomainParams::Disk => Ok(()),
        DomainParams::Annulus { r } => {
            if !(r.is_finite() && r > 0.0 && r < 1.0) {
                return Err(Error::ConstraintViolation("0 < r < 1"));
            }
            Ok(())
        }
        DomainParams::Pants { a, r1, r2 } => {
            if !(a.is_finite() && r1.is_finite() && r2.is_finite()) {
                return Err(Error::ConstraintViolation("parameters must be finite"));
            }
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::ConstraintViolation("0 < a < 1"));
            }
            if r1 <= 0.0 {
                return Err(Error::ConstraintViolation("r1 > 0"));
            }
            if r2 <= 0.0 {
                return Err(Error::ConstraintViolation("r2 > 0"));
            }
            if a + r2 >= 1.0 {
                return Err(Error::ConstraintViolation("a + r2 < 1"));
            }
            if r1 + r2 >= a {
                return Err(Error::ConstraintViolation("r1 + r2 < a"));
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
        })
    }
}

/// A basis vector `E_n` (n ≥ 0), `F_n` or `G_n` (n ≤ -1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub family: Family,
    pub n: i64,
}

impl BasisLabel {
    pub const fn e(n: i64) -> Self {
        BasisLabel { family: Family::E, n }
    }
    pub const fn f(n: i64) -> Self {
        BasisLabel { family: Family::F, n }
    }
    pub const fn g(n: i64) -> Self {
        BasisLabel { family: Family::G, n }
    }

    pub fn is_well_formed(&self) -> bool {
        match self.family {
            Family::E => self.n >= 0,
            Family::F | Family::G => self.n <= -1,
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.n)
    }
}

/// Truncation level `N ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Truncation(usize);

impl Truncation {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidTruncation(n));
        }
        Ok(Truncation(n))
    }

    #[inline]
    pub fn n(self) -> usize {
        self.0
    }
}

/// Canonical ordered enumeration of the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisIndex {
    pub params: DomainParams,
    pub trunc: Truncation,
    pub order: Vec<BasisLabel>,
}

/// Build the canonical enumeration; fails if `params` is invalid.
pub fn enumerate_basis(params: DomainParams, trunc: Truncation) -> Result<BasisIndex> {
    validate(&params)?;
    let n = trunc.n() as i64;
    let mut order = Vec::with_capacity(dim_of(&params, trunc));
    order.extend((0..=n).map(BasisLabel::e));
    if params.has_family(Family::F) {
        order.extend((1..=n).map(|k| BasisLabel::f(-k)));
    }
    if params.has_family(Family::G) {
        order.extend((1..=n).map(|k| BasisLabel::g(-k)));
    }
    Ok(BasisIndex { params, trunc, order })
}

fn dim_of(params: &DomainParams, trunc: Truncation) -> usize {
    trunc.n() * params.family_count() + 1
}

impl BasisIndex {
    /// Shorthand for `enumerate_basis(params, Truncation::new(n)?)`.
    pub fn new(params: DomainParams, n: usize) -> Result<Self> {
        enumerate_basis(params, Truncation::new(n)?)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.order.len()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.trunc.n()
    }

    #[inline]
    pub fn label_of(&self, i: usize) -> BasisLabel {
        self.order[i]
    }

    /// Position of `label`, or `None` if it lies outside the window.
    pub fn index_of(&self, label: BasisLabel) -> Option<usize> {
        let n = self.n() as i64;
        if !self.params.has_family(label.family) || !label.is_well_formed() {
            return None;
        }
        match label.family {
            Family::E if label.n <= n => Some(label.n as usize),
            Family::F if -label.n <= n => Some((n - label.n) as usize),
            Family::G if -label.n <= n => Some((2 * n - label.n) as usize),
            _ => None,
        }
    }

    pub fn family_range(&self, family: Family) -> Range<usize> {
        let n = self.n();
        if !self.params.has_family(family) {
            return 0..0;
        }
        match family {
            Family::E => 0..n + 1,
            Family::F => n + 1..2 * n + 1,
            Family::G => 2 * n + 1..3 * n + 1,
        }
    }

    /// Distance of basis position `i` from the outer edge of its family
    /// (0 for `E_N`, `F_{-N}`, `G_{-N}`).
    pub fn edge_distance(&self, i: usize) -> usize {
        let l = self.label_of(i);
        self.n() - l.n.unsigned_abs() as usize
    }
}

/// Coefficients `(e_n, f_n, g_n)` aligned with a [`BasisIndex`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub index: BasisIndex,
    pub values: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn zeros(index: &BasisIndex) -> Self {
        CoefficientVector { index: index.clone(), values: alloc::vec![Complex64::new(0.0, 0.0); index.dim()] }
    }

    pub fn from_values(index: &BasisIndex, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != index.dim() {
            return Err(Error::DimensionMismatch { expected: index.dim(), got: values.len() });
        }
        Ok(CoefficientVector { index: index.clone(), values })
    }

    /// Unit vector at `label`; panics if the label is outside the window.
    pub fn unit(index: &BasisIndex, label: BasisLabel) -> Self {
        let mut v = Self::zeros(index);
        let i = index.index_of(label).expect("label outside the truncation window");
        v.values[i] = Complex64::new(1.0, 0.0);
        v
    }

    /// Coefficient at `label`; zero outside the window.
    pub fn get(&self, label: BasisLabel) -> Complex64 {
        self.index.index_of(label).map_or(Complex64::new(0.0, 0.0), |i| self.values[i])
    }

    pub fn set(&mut self, label: BasisLabel, value: Complex64) {
        if let Some(i) = self.index.index_of(label) {
            self.values[i] = value;
        }
    }

    pub fn norm(&self) -> f64 {
        crate::math::sqrt(self.values.iter().map(|c| c.norm_sqr()).sum())
    }

    /// Largest `|n|` carrying a nonzero coefficient (0 for the zero vector).
    pub fn support_radius(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(i, _)| self.index.label_of(i).n.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }
}
