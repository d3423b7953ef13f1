//! Toeplitz compressions `T_E(φ1) P_E + T_F(φ2) P_F + T_G(φ3) P_G` and the
//! compactness diagnostic for `word − T(symbol(word))`.
//!
//! Within each family block the entry at `(m, n)` is the Fourier coefficient
//! `c_{m−n}`; `E` uses indices `0..=N`, `F` and `G` use `−1..=−N`. So
//! `T_E(ζ) E_n = E_{n+1}` while `T_F(ζ) F_{-1} = 0`.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::symbol::{symbol_of, word_matrix, OperatorWord, SymbolTriple, TrigPoly};
use crate::domain::{BasisIndex, BasisLabel, DomainParams, Family};
use crate::error::Result;
use crate::linalg;
use crate::matrix::{Mode, OperatorMatrix, SparseMatrix};

/// Number of outermost indices per family removed before measuring.
pub const EDGE_MASK: usize = 5;

fn block_triplets(index: &BasisIndex, family: Family, phi: &TrigPoly, out: &mut Vec<(usize, usize, Complex64)>) {
    if !index.params.has_family(family) {
        return;
    }
    for col in index.family_range(family) {
        let n = index.label_of(col).n;
        for (k, c) in phi.terms() {
            let m = n + k as i64;
            let row = BasisLabel { family, n: m };
            // stay inside the family's own index range
            let inside = match family {
                Family::E => m >= 0,
                _ => m <= -1,
            };
            if inside {
                if let Some(r) = index.index_of(row) {
                    out.push((r, col, c));
                }
            }
        }
    }
}

pub fn toeplitz_sparse(index: &BasisIndex, triple: &SymbolTriple) -> SparseMatrix {
    let mut trips = Vec::new();
    block_triplets(index, Family::E, &triple.phi1, &mut trips);
    block_triplets(index, Family::F, &triple.phi2, &mut trips);
    block_triplets(index, Family::G, &triple.phi3, &mut trips);
    SparseMatrix::from_triplets(index.dim(), index.dim(), trips)
}

pub fn toeplitz_compress(params: &DomainParams, n: usize, triple: &SymbolTriple) -> Result<OperatorMatrix> {
    let index = BasisIndex::new(*params, n)?;
    let m = toeplitz_sparse(&index, triple);
    Ok(OperatorMatrix::from_sparse(&index, m, Mode::Compressed, "T"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactnessRow {
    pub n: usize,
    pub m: usize,
    pub masked_norm: f64,
    pub tail_norm: f64,
}

/// Zero every row and column whose basis index is not kept.
fn compress(index: &BasisIndex, m: &SparseMatrix, keep: impl Fn(&BasisLabel) -> bool) -> DMatrix<Complex64> {
    let kept: Vec<usize> = (0..index.dim()).filter(|&i| keep(&index.label_of(i))).collect();
    let mut pos = alloc::vec![usize::MAX; index.dim()];
    for (k, &i) in kept.iter().enumerate() {
        pos[i] = k;
    }
    let mut out = DMatrix::zeros(kept.len(), kept.len());
    for (r, c, v) in m.iter() {
        if pos[r] != usize::MAX && pos[c] != usize::MAX {
            out[(pos[r], pos[c])] = v;
        }
    }
    out
}

/// `word` (exact mode) minus the Toeplitz compression of its symbol.
pub fn symbol_difference(params: &DomainParams, word: &OperatorWord, n: usize) -> Result<(BasisIndex, SparseMatrix)> {
    let index = BasisIndex::new(*params, n)?;
    let sym = symbol_of(word, params)?;
    let w = word_matrix(word, &index, Mode::Exact)?;
    let d = w.sub(&toeplitz_sparse(&index, &sym));
    Ok((index, d))
}

/// For each `N`: the norm of `word − T(symbol(word))` with the
/// [`EDGE_MASK`] outermost indices per family removed, and for each cut `M`
/// the norm of its compression to `|n| ≥ M`.
pub fn compactness_score(
    params: &DomainParams,
    word: &OperatorWord,
    n_list: &[usize],
    m_list: &[usize],
) -> Result<Vec<CompactnessRow>> {
    let mut rows = Vec::new();
    for &n in n_list {
        let (index, diff) = symbol_difference(params, word, n)?;
        let lim = n.saturating_sub(EDGE_MASK) as u64;
        let masked = |l: &BasisLabel| l.n.unsigned_abs() <= lim;
        let masked_norm = linalg::spectral_norm(&compress(&index, &diff, masked));
        for &m in m_list {
            let tail = compress(&index, &diff, |l| masked(l) && l.n.unsigned_abs() >= m as u64);
            let tail_norm = if tail.nrows() == 0 { 0.0 } else { linalg::spectral_norm(&tail) };
            rows.push(CompactnessRow { n, m, masked_norm, tail_norm });
        }
    }
    Ok(rows)
}
