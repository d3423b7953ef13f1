mod common;

use proptest::prelude::*;

use pants_core::matrix::SparseMatrix;
use pants_core::quotient::toeplitz::{symbol_difference, toeplitz_sparse, EDGE_MASK};
use pants_core::quotient::{
    self, compactness_score, max_deviation, restrict, slice_projection, spectral_projection, symbol_of, word_matrix,
    Letter, OperatorWord, SymbolTriple, TrigPoly,
};
use pants_core::{c64, linalg, operators, BasisIndex, BasisLabel, Complex64, DomainParams, Error, Family, Mode};

fn pants() -> DomainParams {
    DomainParams::default_pants()
}

fn word(s: &str) -> OperatorWord {
    s.parse().unwrap()
}

fn arb_word(max_deg: usize) -> impl Strategy<Value = OperatorWord> {
    let term = (proptest::collection::vec(any::<bool>(), 0..=max_deg), -2.0..2.0f64, -2.0..2.0f64).prop_map(
        |(bits, re, im)| {
            let letters: Vec<Letter> = bits.into_iter().map(|b| if b { Letter::Z } else { Letter::ZStar }).collect();
            OperatorWord::letters(&letters).scale(Complex64::new(re, im))
        },
    );
    proptest::collection::vec(term, 1..=3).prop_map(|ts| ts.iter().fold(OperatorWord::default(), |w, t| w.add(t)))
}

// ---------------------------------------------------------------------------
// projections

#[test]
fn projection_algebra() {
    for p in [pants(), DomainParams::pants(0.6, 0.15, 0.3).unwrap(), DomainParams::annulus(0.45).unwrap()] {
        let n = 40;
        let idx = BasisIndex::new(p, n).unwrap();
        let pr: Vec<SparseMatrix> =
            [Family::E, Family::F, Family::G].map(|f| spectral_projection(&p, n, f).unwrap().to_sparse()).into();
        let sum = pr[0].sub(&pr[1].scale(c64(-1.0))).sub(&pr[2].scale(c64(-1.0)));
        assert!(max_deviation(&sum, &slice_projection(&idx, |_| true)) < 1e-10, "{p:?}");
        for i in 0..3 {
            assert!(max_deviation(&pr[i].mul_sparse(&pr[i]), &pr[i]) < 1e-10);
            let d = pr[i].to_dense();
            assert!(linalg::hermitian_deviation(&d) < 1e-12);
            for j in 0..3 {
                if i != j {
                    let prod = pr[i].mul_sparse(&pr[j]);
                    assert!(prod.iter().all(|(_, _, v)| v.norm() < 1e-10));
                }
            }
            // the range is the family slice
            let fam = [Family::E, Family::F, Family::G][i];
            assert!(max_deviation(&pr[i], &slice_projection(&idx, |l| l.family == fam)) < 1e-10);
        }
    }
}

#[test]
fn e0_route_lands_on_e0() {
    let idx = BasisIndex::new(pants(), 20).unwrap();
    let (p, p_e1, p_e0) = quotient::projection::e0_route(&idx).unwrap();
    let three = slice_projection(&idx, |l| l.n == 0 || l.n == -1 && l.family != Family::E);
    assert!(max_deviation(&p, &three) < 1e-12);
    assert!(max_deviation(&p_e1, &slice_projection(&idx, |l| *l == BasisLabel::e(1))) < 1e-12);
    assert!(max_deviation(&p_e0, &slice_projection(&idx, |l| *l == BasisLabel::e(0))) < 1e-12);
}

#[test]
fn disk_has_no_projections() {
    assert!(matches!(spectral_projection(&DomainParams::Disk, 10, Family::E), Err(Error::UnsupportedDomain { .. })));
}

// ---------------------------------------------------------------------------
// certificates

#[test]
fn certificates_at_n_100() {
    let certs = quotient::commutator_ideal_certificates(&pants(), 100).unwrap();
    let mut steps: Vec<u8> = certs.iter().map(|c| c.step).collect();
    steps.dedup();
    assert_eq!(steps, (1..=8).collect::<Vec<u8>>());
    for c in &certs {
        assert!(c.max_deviation <= 1e-10, "step {} `{}`: {:e}", c.step, c.identity, c.max_deviation);
        if c.step == 4 {
            assert!(c.max_deviation <= 1e-12, "step 4 `{}`: {:e}", c.identity, c.max_deviation);
        }
    }
}

#[test]
fn certificates_other_parameters() {
    let p = DomainParams::pants(0.55, 0.1, 0.3).unwrap();
    for c in quotient::commutator_ideal_certificates(&p, 40).unwrap() {
        assert!(c.max_deviation <= 1e-10, "step {} `{}`: {:e}", c.step, c.identity, c.max_deviation);
    }
}

// ---------------------------------------------------------------------------
// symbols

#[test]
fn frozen_symbols() {
    let p = pants();
    let s = symbol_of(&OperatorWord::z(), &p).unwrap();
    assert_eq!(s.phi1, TrigPoly::zeta());
    assert_eq!(s.phi2, TrigPoly::from_terms(&[(1, c64(0.2))]));
    assert_eq!(s.phi3, TrigPoly::from_terms(&[(0, c64(0.5)), (1, c64(0.2))]));
    let c = symbol_of(&word("z*z - zz*"), &p).unwrap();
    assert!(c.max_deviation(&SymbolTriple::constant(c64(0.0))) < 1e-16);
    let zz = symbol_of(&word("zz*"), &p).unwrap();
    assert!((zz.phi2.coeff(0) - c64(0.04)).norm() < 1e-16 && zz.phi2.degree() == 0);
    // |r2ζ + a|² = r2² + a² + a r2 (ζ + ζ̄)
    assert!((zz.phi3.coeff(0) - c64(0.29)).norm() < 1e-16);
    assert!((zz.phi3.coeff(1) - c64(0.1)).norm() < 1e-16 && (zz.phi3.coeff(-1) - c64(0.1)).norm() < 1e-16);
}

#[test]
fn word_parsing() {
    assert_eq!(word("z z*"), OperatorWord::letters(&[Letter::Z, Letter::ZStar]));
    assert_eq!(word("zz*"), word("z z*"));
    assert_eq!(word("2 z - z"), OperatorWord::z().scale(c64(2.0)).sub(&OperatorWord::z()));
    assert_eq!(word(&word("z*z - 0.5").to_string()), word("z*z - 0.5"));
    for bad in ["", "z +", "y", "z ** z"] {
        assert!(matches!(bad.parse::<OperatorWord>(), Err(Error::InvalidWord(_))), "{bad:?}");
    }
    let long = OperatorWord::letters(&[Letter::Z; 21]);
    assert!(matches!(symbol_of(&long, &pants()), Err(Error::DegreeGuard { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn symbol_is_multiplicative(p in common::any_params(), w1 in arb_word(4), w2 in arb_word(4)) {
        let lhs = symbol_of(&w1.mul(&w2), &p).unwrap();
        let rhs = symbol_of(&w1, &p).unwrap().mul(&symbol_of(&w2, &p).unwrap());
        prop_assert!(lhs.max_deviation(&rhs) < 1e-12);
        let sum = symbol_of(&w1.add(&w2), &p).unwrap();
        let parts = symbol_of(&w1, &p).unwrap().add(&symbol_of(&w2, &p).unwrap());
        prop_assert!(sum.max_deviation(&parts) < 1e-12);
    }

    #[test]
    fn symbol_respects_the_adjoint(p in common::any_params(), w in arb_word(5), theta in 0.0..6.28f64) {
        let s = symbol_of(&w, &p).unwrap();
        let t = symbol_of(&w.adjoint(), &p).unwrap();
        prop_assert!(t.max_deviation(&s.conj()) < 1e-12);
        for (x, y) in t.eval(theta).iter().zip(s.eval(theta)) {
            prop_assert!((x - y.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn real_words_round_trip(bits in proptest::collection::vec((proptest::collection::vec(any::<bool>(), 0..5), -3.0..3.0f64), 1..4)) {
        let w = bits.iter().fold(OperatorWord::default(), |acc, (b, c)| {
            let letters: Vec<Letter> = b.iter().map(|&z| if z { Letter::Z } else { Letter::ZStar }).collect();
            acc.add(&OperatorWord::letters(&letters).scale(c64(*c)))
        });
        prop_assert_eq!(w.to_string().parse::<OperatorWord>().unwrap(), w);
    }

    #[test]
    fn toeplitz_products_differ_only_near_zero(p in common::pants_params(), w1 in arb_word(3), w2 in arb_word(3)) {
        // T(φ)T(ψ) − T(φψ) is supported on |n| ≤ deg once the truncation edge
        // is pushed out by building at N + deg and restricting
        let n = 20;
        let deg = w1.degree() + w2.degree();
        let small = BasisIndex::new(p, n).unwrap();
        let big = BasisIndex::new(p, n + deg + 1).unwrap();
        let (s1, s2) = (symbol_of(&w1, &p).unwrap(), symbol_of(&w2, &p).unwrap());
        let prod = toeplitz_sparse(&big, &s1).mul_sparse(&toeplitz_sparse(&big, &s2));
        let diff = restrict(&big, &small, &prod.sub(&toeplitz_sparse(&big, &s1.mul(&s2))));
        for (r, c, v) in diff.iter() {
            let (lr, lc) = (small.label_of(r), small.label_of(c));
            if lr.n.unsigned_abs() as usize > deg || lc.n.unsigned_abs() as usize > deg {
                prop_assert!(v.norm() < 1e-12, "{lr} {lc} {v}");
            }
        }
    }

    #[test]
    fn word_difference_is_finite_rank(p in common::pants_params(), w in arb_word(4)) {
        let (idx, d) = symbol_difference(&p, &w, 30).unwrap();
        let deg = w.degree() as i64;
        for (r, c, v) in d.iter() {
            let (lr, lc) = (idx.label_of(r), idx.label_of(c));
            if lr.n.abs() > deg + 1 || lc.n.abs() > deg + 1 {
                prop_assert!(v.norm() < 1e-12, "{lr} {lc} {v}");
            }
        }
    }

    #[test]
    fn exact_words_are_big_window_products(p in common::any_params(), w in arb_word(3)) {
        let idx = BasisIndex::new(p, 12).unwrap();
        let big = BasisIndex::new(p, 12 + w.degree()).unwrap();
        let z = operators::z_sparse(&big);
        let zs = z.adjoint();
        let mut acc = SparseMatrix::from_triplets(big.dim(), big.dim(), Vec::new());
        for (c, letters) in &w.terms {
            let mut m = slice_projection(&big, |_| true);
            for l in letters {
                m = m.mul_sparse(if *l == Letter::Z { &z } else { &zs });
            }
            acc = acc.sub(&m.scale(-*c));
        }
        let got = word_matrix(&w, &idx, Mode::Exact).unwrap();
        prop_assert!(max_deviation(&got, &restrict(&big, &idx, &acc)) < 1e-12);
    }
}

// ---------------------------------------------------------------------------
// compactness

#[test]
fn z_difference_tail_vanishes() {
    let rows = compactness_score(&pants(), &OperatorWord::z(), &[40, 80], &[1, 20]).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert!(r.tail_norm <= 1e-12);
        // only E_0 ← F_{-1} (r1) and E_0 ← G_{-1} (r2) survive
        assert!((r.masked_norm - (0.04f64 + 0.04).sqrt()).abs() < 1e-14);
    }
}

#[test]
fn commutator_word_has_zero_symbol_but_full_norm() {
    let p = pants();
    let w = word("z*z - zz*");
    let rows = compactness_score(&p, &w, &[30, 60], &[2, 4, 8]).unwrap();
    let idx = BasisIndex::new(p, 60).unwrap();
    let comm = linalg::spectral_norm(&operators::commutator_exact_sparse(&idx).to_dense());
    for r in &rows {
        assert!((r.masked_norm - comm).abs() < 1e-12);
        assert!(r.tail_norm < 1e-14);
    }
}

#[test]
fn masked_norms_stabilise_and_tails_decay() {
    let p = pants();
    let w = word("z z* z - 2 z* z z");
    let rows = compactness_score(&p, &w, &[20, 40, 80], &[1, 2, 3, 4, 6]).unwrap();
    let masked: Vec<f64> = rows.iter().filter(|r| r.m == 1).map(|r| r.masked_norm).collect();
    assert!((masked[1] - masked[2]).abs() < 1e-12 && (masked[0] - masked[2]).abs() < 1e-12);
    for n in [20, 40, 80] {
        let tails: Vec<f64> = rows.iter().filter(|r| r.n == n).map(|r| r.tail_norm).collect();
        assert!(tails.windows(2).all(|t| t[1] <= t[0] + 1e-15));
        assert!(*tails.last().unwrap() < 1e-12);
    }
    assert_eq!(EDGE_MASK, 5);
}
