//! Spectral projections, the commutator-ideal certificates, Toeplitz
//! compressions and the symbol map onto triples of circle functions.

pub mod certificates;
pub mod projection;
pub mod symbol;
pub mod toeplitz;

use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{BasisIndex, BasisLabel, DomainParams};
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::{c64, spectral};

pub use certificates::{commutator_ideal_certificates, CertificateEntry};
pub use projection::spectral_projection;
pub use symbol::{symbol_of, word_matrix, Letter, OperatorWord, SymbolTriple, TrigPoly, MAX_WORD_DEGREE};
pub use toeplitz::{compactness_score, toeplitz_compress, CompactnessRow};

/// A quarter of the smallest gap between the points the functional calculus
/// has to separate.
pub fn cluster_radius(params: &DomainParams) -> Result<f64> {
    let mut pts: Vec<f64> = match *params {
        DomainParams::Pants { r1, .. } => {
            let (lo, hi) = spectral::band(params)?;
            vec![spectral::simple_eigenvalue(params)?, r1 * r1, lo, hi, 1.0]
        }
        DomainParams::Annulus { r } => vec![r * r, 1.0],
        DomainParams::Disk => return Err(Error::UnsupportedDomain { op: "cluster_radius", kind: "disk" }),
    };
    pts.sort_by(f64::total_cmp);
    let gap = pts.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    Ok(0.25 * gap)
}

/// Diagonal projection onto the basis vectors selected by `keep`.
pub fn slice_projection(index: &BasisIndex, keep: impl Fn(&BasisLabel) -> bool) -> SparseMatrix {
    let trips = index.order.iter().enumerate().filter(|(_, l)| keep(l)).map(|(i, _)| (i, i, c64(1.0))).collect();
    SparseMatrix::from_triplets(index.dim(), index.dim(), trips)
}

/// Rank-one `x ↦ ⟨B_i, x⟩ B_j`, i.e. the matrix unit at `(B_j, B_i)`.
pub fn transfer(index: &BasisIndex, from: BasisLabel, to: BasisLabel) -> SparseMatrix {
    let d = index.dim();
    let trips = match (index.index_of(to), index.index_of(from)) {
        (Some(r), Some(c)) => vec![(r, c, c64(1.0))],
        _ => Vec::new(),
    };
    SparseMatrix::from_triplets(d, d, trips)
}

/// Restrict a matrix built on `big` to the window of `small` (same params,
/// smaller truncation).
pub fn restrict(big: &BasisIndex, small: &BasisIndex, m: &SparseMatrix) -> SparseMatrix {
    let map: Vec<Option<usize>> = big.order.iter().map(|l| small.index_of(*l)).collect();
    let trips = m
        .iter()
        .filter_map(|(r, c, v)| match (map[r], map[c]) {
            (Some(r), Some(c)) => Some((r, c, v)),
            _ => None,
        })
        .collect();
    SparseMatrix::from_triplets(small.dim(), small.dim(), trips)
}

/// Largest entry of `a − b` in absolute value.
pub fn max_deviation(a: &SparseMatrix, b: &SparseMatrix) -> f64 {
    a.sub(b).iter().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
}
