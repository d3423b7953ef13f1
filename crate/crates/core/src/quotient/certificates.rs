//! Finite-matrix certificates for the construction of the rank-one operators
//! `P_{B_i,B_j}` inside the commutator ideal.
//!
//! Products are formed with `z` on a window of size `2N + 1` and restricted
//! to the original window, so no identity picks up truncation artifacts.
//!
//! The chains in Steps 4, 5, 7 and 8 are checked one link at a time: each link
//! takes the projection certified by the previous link (the exact slice
//! projection) as its input. Feeding the computed projection forward instead
//! would multiply rounding noise by `r1^{-2n}` (Step 5) or `(a/r2)²` per level
//! (Step 7), which says nothing about the identities themselves.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::projection::{e0_route, nonzero_indicator, sparse_function};
use super::{max_deviation, restrict, slice_projection, transfer};
use crate::c64;
use crate::domain::{BasisIndex, BasisLabel, DomainParams};
use crate::error::Result;
use crate::linalg;
use crate::math;
use crate::matrix::SparseMatrix;
use crate::operators::{self, SmallMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateEntry {
    pub step: u8,
    pub identity: String,
    pub max_deviation: f64,
}

/// Largest index magnitude used in the Step 8 transfer checks.
const STEP8_RANGE: i64 = 6;

struct Ctx {
    big: BasisIndex,
    small: BasisIndex,
    z: SparseMatrix,
    zs: SparseMatrix,
    r1: f64,
    r2: f64,
}

impl Ctx {
    fn slice(&self, lab: BasisLabel) -> SparseMatrix {
        slice_projection(&self.big, |l| *l == lab)
    }
    fn slices(&self, labs: &[BasisLabel]) -> SparseMatrix {
        slice_projection(&self.big, |l| labs.contains(l))
    }
    fn dev(&self, a: &SparseMatrix, b: &SparseMatrix) -> f64 {
        max_deviation(&restrict(&self.big, &self.small, a), &restrict(&self.big, &self.small, b))
    }
    /// `z^k m` (or `(z*)^k m`).
    fn left_pow(&self, star: bool, k: i64, m: &SparseMatrix) -> SparseMatrix {
        let op = if star { &self.zs } else { &self.z };
        (0..k).fold(m.clone(), |acc, _| op.mul_sparse(&acc))
    }
    /// `m z^k` (or `m (z*)^k`).
    fn right_pow(&self, m: &SparseMatrix, star: bool, k: i64) -> SparseMatrix {
        let op = if star { &self.zs } else { &self.z };
        (0..k).fold(m.clone(), |acc, _| acc.mul_sparse(op))
    }
    fn transfer(&self, from: BasisLabel, to: BasisLabel) -> SparseMatrix {
        transfer(&self.big, from, to)
    }
}

fn embed(index: &BasisIndex, basis: &[BasisLabel], m: &DMatrix<f64>) -> SparseMatrix {
    let mut trips = Vec::new();
    for (i, &bi) in basis.iter().enumerate() {
        for (j, &bj) in basis.iter().enumerate() {
            if let (Some(r), Some(c)) = (index.index_of(bi), index.index_of(bj)) {
                trips.push((r, c, c64(m[(i, j)])));
            }
        }
    }
    SparseMatrix::from_triplets(index.dim(), index.dim(), trips)
}

fn entry(step: u8, identity: impl Into<String>, max_deviation: f64) -> CertificateEntry {
    CertificateEntry { step, identity: identity.into(), max_deviation }
}

/// Run Steps 1–8 at truncation `n` (pants only) and report the largest
/// entrywise deviation of each identity.
pub fn commutator_ideal_certificates(params: &DomainParams, n: usize) -> Result<Vec<CertificateEntry>> {
    let (a, r1, r2) = params.pants_params("commutator_ideal_certificates")?;
    let small = BasisIndex::new(*params, n)?;
    let big = BasisIndex::new(*params, 2 * n + 1)?;
    let z = operators::z_sparse(&big);
    let zs = z.adjoint();
    let cx = Ctx { big, small, z, zs, r1, r2 };
    let mats = operators::small_matrices(params)?;
    let mat = |w: SmallMatrix| mats.iter().find(|m| m.which == w).expect("all three small matrices present");
    let (e0, f1, g1, g2) = (BasisLabel::e(0), BasisLabel::f(-1), BasisLabel::g(-1), BasisLabel::g(-2));
    let ni = n as i64;
    let mut out = Vec::new();

    // Step 1
    let comm = operators::commutator_exact_sparse(&cx.big);
    let am = mat(SmallMatrix::A);
    out.push(entry(1, "[z*,z] = A on span{E0,F-1,G-1}", cx.dev(&comm, &embed(&cx.big, &am.basis, &am.entries))));
    let block = comm.to_dense();
    let ev = linalg::hermitian_eigenvalues(&block);
    let mut nonzero: Vec<f64> = ev.iter().copied().filter(|x| x.abs() > 1e-12).collect();
    let mut roots: Vec<f64> = am.roots.iter().map(|x| x.re).collect();
    nonzero.sort_by(f64::total_cmp);
    roots.sort_by(f64::total_cmp);
    let root_dev = if nonzero.len() == roots.len() {
        nonzero.iter().zip(&roots).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    out.push(entry(1, "nonzero spectrum of [z*,z] = roots of p_A", root_dev));
    let p = sparse_function(&comm, nonzero_indicator(params)?);
    let p_slice = cx.slices(&[e0, f1, g1]);
    out.push(entry(1, "f([z*,z]) = P_{E0,F-1,G-1}", cx.dev(&p, &p_slice)));

    // Step 2
    let zpz = cx.z.mul_sparse(&p).mul_sparse(&cx.zs);
    let cm = mat(SmallMatrix::C);
    let want = embed(&cx.big, &cm.basis, &cm.entries);
    let want = SparseMatrix::from_triplets(want.rows, want.cols, want.iter().chain(cx.slice(BasisLabel::e(1)).iter()).collect());
    out.push(entry(2, "zPz* = C on span{E0,G-1} + P_E1", cx.dev(&zpz, &want)));
    let (_, p_e1, p_e0) = e0_route(&cx.big)?;
    out.push(entry(2, "f(zPz*) = P_E1", cx.dev(&p_e1, &cx.slice(BasisLabel::e(1)))));

    // Step 3
    let c_roots: Vec<f64> = cm.roots.iter().map(|x| x.re).collect();
    let sep = c_roots.iter().map(|x| x.abs().min((x - 1.0).abs())).fold(f64::INFINITY, f64::min) * 0.5;
    let g = move |x: f64| if c_roots.iter().any(|r| (x - r).abs() < sep) { 1.0 } else { 0.0 };
    let p_e0g1 = sparse_function(&zpz, g);
    out.push(entry(3, "g(zPz*) = P_{E0,G-1}", cx.dev(&p_e0g1, &cx.slices(&[e0, g1]))));
    let p_f1 = p.sub(&p_e0g1);
    out.push(entry(3, "P - P_{E0,G-1} = P_F-1", cx.dev(&p_f1, &cx.slice(f1))));

    // Step 4
    let pe1 = cx.slice(BasisLabel::e(1));
    let mut worst = 0.0f64;
    for k in 1..ni {
        let m = cx.left_pow(false, k - 1, &cx.right_pow(&pe1, true, k - 1));
        worst = worst.max(cx.dev(&m, &cx.slice(BasisLabel::e(k))));
    }
    out.push(entry(4, format!("z^(n-1) P_E1 (z*)^(n-1) = P_En, 1 <= n <= {}", ni - 1), worst));

    // Step 5
    let pf1 = cx.slice(f1);
    let mut worst = 0.0f64;
    for k in 1..ni {
        let m = cx.left_pow(true, k, &cx.right_pow(&pf1, false, k)).scale(c64(math::powi(r1, -2 * k as i32)));
        worst = worst.max(cx.dev(&m, &cx.slice(BasisLabel::f(-k - 1))));
    }
    out.push(entry(5, format!("r1^(-2n) (z*)^n P_F-1 z^n = P_F(-n-1), 1 <= n <= {}", ni - 1), worst));

    // Step 6
    let m = cx.zs.mul_sparse(&pe1).mul_sparse(&cx.z);
    out.push(entry(6, "z* P_E1 z = P_E0", cx.dev(&m, &cx.slice(e0))));
    out.push(entry(6, "commutator route P_E0 = P_E0", cx.dev(&p_e0, &cx.slice(e0))));
    let pg1 = p.sub(&cx.slice(e0)).sub(&pf1);
    out.push(entry(6, "P - P_E0 - P_F-1 = P_G-1", cx.dev(&pg1, &cx.slice(g1))));

    // Step 7
    let s = a * a + r2 * r2;
    let dm = mat(SmallMatrix::D);
    let m = cx.zs.mul_sparse(&cx.slice(g1)).mul_sparse(&cx.z);
    out.push(entry(7, "z* P_G-1 z = D on span{G-1,G-2}", cx.dev(&m, &embed(&cx.big, &[g1, g2], &dm.entries))));
    let v = [a, r2];
    let dv = [dm.entries[(0, 0)] * v[0] + dm.entries[(0, 1)] * v[1], dm.entries[(1, 0)] * v[0] + dm.entries[(1, 1)] * v[1]];
    out.push(entry(7, "D v = (a^2 + r2^2) v, v = a G-1 + r2 G-2", (dv[0] - s * v[0]).abs().max((dv[1] - s * v[1]).abs())));
    let is_s = move |x: f64| if (x - s).abs() < 0.5 * s { 1.0 } else { 0.0 };
    let mut worst = 0.0f64;
    for k in 1..ni {
        let p1 = cx.slice(BasisLabel::g(-k));
        let pv = sparse_function(&cx.zs.mul_sparse(&p1).mul_sparse(&cx.z), is_s);
        let comb = p1
            .scale(c64(a * a / s))
            .sub(&p1.mul_sparse(&pv))
            .sub(&pv.mul_sparse(&p1));
        let comb = SparseMatrix::from_triplets(comb.rows, comb.cols, comb.iter().chain(pv.iter()).collect());
        let next = comb.scale(c64(s / (r2 * r2)));
        worst = worst.max(cx.dev(&next, &cx.slice(BasisLabel::g(-k - 1))));
    }
    out.push(entry(7, format!("P_G(n-1) from P_Gn and P_v, -{} <= n <= -1", ni - 1), worst));

    // Step 8
    out.extend(step8(&cx));
    Ok(out)
}

fn step8(cx: &Ctx) -> Vec<CertificateEntry> {
    let (r1, r2) = (cx.r1, cx.r2);
    let lim = STEP8_RANGE.min(cx.small.n() as i64 - 1);
    let pw = |x: f64, k: i64| math::powi(x, k as i32);
    let e = BasisLabel::e;
    let f = BasisLabel::f;
    let g = BasisLabel::g;
    let mut rows: Vec<(&'static str, f64)> = Vec::new();
    let mut track = |name: &'static str, d: f64| match rows.iter_mut().find(|(n, _)| *n == name) {
        Some(r) => r.1 = r.1.max(d),
        None => rows.push((name, d)),
    };
    for n in 0..=lim {
        for m in 0..=lim {
            let pen = cx.slice(e(n));
            if n + m <= lim {
                track("P_{En,E(n+m)} = z^m P_En", cx.dev(&cx.left_pow(false, m, &pen), &cx.transfer(e(n), e(n + m))));
            }
            if m <= n {
                track("P_{En,E(n-m)} = (z*)^m P_En", cx.dev(&cx.left_pow(true, m, &pen), &cx.transfer(e(n), e(n - m))));
            }
        }
    }
    for n in -lim..=-1 {
        let pfn = cx.slice(f(n));
        let pgn = cx.slice(g(n));
        for m in 0..=lim {
            if n + m < 0 {
                let lhs = cx.left_pow(false, m, &pfn).scale(c64(pw(r1, -m)));
                track("P_{Fn,F(n+m)} = r1^-m z^m P_Fn", cx.dev(&lhs, &cx.transfer(f(n), f(n + m))));
                let lhs = cx.slice(g(n + m)).mul_sparse(&cx.left_pow(false, m, &pgn)).scale(c64(pw(r2, -m)));
                track("P_{Gn,G(n+m)} = r2^-m P_G(n+m) z^m P_Gn", cx.dev(&lhs, &cx.transfer(g(n), g(n + m))));
            } else {
                let lhs = cx.left_pow(false, m, &pfn).scale(c64(pw(r1, n)));
                track("P_{Fn,Ek} = r1^n z^(k-n) P_Fn", cx.dev(&lhs, &cx.transfer(f(n), e(n + m))));
                let lhs = cx.slice(e(n + m)).mul_sparse(&cx.left_pow(false, m, &pgn)).scale(c64(pw(r2, n)));
                track("P_{Gn,E(n+m)} = r2^n P_E(n+m) z^m P_Gn", cx.dev(&lhs, &cx.transfer(g(n), e(n + m))));
            }
            if n - m >= -lim {
                let lhs = cx.left_pow(true, m, &pfn).scale(c64(pw(r1, -m)));
                track("P_{Fn,F(n-m)} = r1^-m (z*)^m P_Fn", cx.dev(&lhs, &cx.transfer(f(n), f(n - m))));
                let lhs = cx.slice(g(n - m)).mul_sparse(&cx.left_pow(true, m, &pgn)).scale(c64(pw(r2, -m)));
                track("P_{Gn,G(n-m)} = r2^-m P_G(n-m) (z*)^m P_Gn", cx.dev(&lhs, &cx.transfer(g(n), g(n - m))));
            }
        }
        for m in 1..=lim {
            let inner = cx.slice(BasisLabel::e(0)).mul_sparse(&cx.left_pow(false, -n, &pgn));
            let lhs = cx.slice(f(-m)).mul_sparse(&cx.left_pow(true, m, &inner)).scale(c64(pw(r1, -m) * pw(r2, n)));
            track("P_{Gn,F(-m)} = r1^-m r2^n P_F(-m) (z*)^m P_E0 z^-n P_Gn", cx.dev(&lhs, &cx.transfer(g(n), f(-m))));
        }
    }
    rows.into_iter().map(|(name, d)| entry(8, name, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_steps_hold_at_small_n() {
        let rep = commutator_ideal_certificates(&DomainParams::default_pants(), 12).unwrap();
        for e in &rep {
            assert!(e.max_deviation <= 1e-10, "step {}: {} = {:e}", e.step, e.identity, e.max_deviation);
        }
        for step in 1..=8u8 {
            assert!(rep.iter().any(|e| e.step == step));
        }
    }

    #[test]
    fn disk_is_rejected() {
        assert!(commutator_ideal_certificates(&DomainParams::Disk, 5).is_err());
    }
}
