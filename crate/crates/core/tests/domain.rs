mod common;

use proptest::prelude::*;

use pants_core::domain::{enumerate_basis, validate};
use pants_core::{BasisIndex, BasisLabel, DomainParams, Error, Family, Truncation};

#[test]
fn canonical_orders() {
    let idx = BasisIndex::new(DomainParams::default_pants(), 2).unwrap();
    let want = [
        BasisLabel::e(0),
        BasisLabel::e(1),
        BasisLabel::e(2),
        BasisLabel::f(-1),
        BasisLabel::f(-2),
        BasisLabel::g(-1),
        BasisLabel::g(-2),
    ];
    assert_eq!(idx.order, want);
    let disk = BasisIndex::new(DomainParams::Disk, 3).unwrap();
    assert_eq!(disk.order, (0..=3).map(BasisLabel::e).collect::<Vec<_>>());
    assert_eq!(BasisIndex::new(DomainParams::annulus(0.4).unwrap(), 2).unwrap().dim(), 5);
}

#[test]
fn dim_formula() {
    for n in 2..=50 {
        let t = Truncation::new(n).unwrap();
        for (p, fams) in [(DomainParams::Disk, 1), (DomainParams::annulus(0.5).unwrap(), 2), (DomainParams::default_pants(), 3)] {
            let idx = enumerate_basis(p, t).unwrap();
            assert_eq!(idx.dim(), fams * n + 1);
            let count = |f: Family| idx.order.iter().filter(|l| l.family == f).count();
            assert_eq!(count(Family::E), n + 1);
            assert_eq!(count(Family::F), if fams > 1 { n } else { 0 });
            assert_eq!(count(Family::G), if fams > 2 { n } else { 0 });
            for f in [Family::E, Family::F, Family::G] {
                assert_eq!(idx.family_range(f).len(), count(f));
            }
        }
    }
}

#[test]
fn each_pants_constraint_rejected() {
    for (a, r1, r2, what) in [
        (0.0, 0.1, 0.1, "0 < a < 1"),
        (0.5, 0.0, 0.1, "r1 > 0"),
        (0.5, 0.1, -0.1, "r2 > 0"),
        (0.8, 0.1, 0.2, "a + r2 < 1"),
        (0.5, 0.3, 0.2, "r1 + r2 < a"),
    ] {
        assert_eq!(DomainParams::pants(a, r1, r2), Err(Error::ConstraintViolation(what)));
    }
    // boundary equalities are rejected too
    assert!(DomainParams::pants(0.75, 0.1, 0.25).is_err());
    assert!(DomainParams::pants(0.5, 0.25, 0.25).is_err());
    assert!(DomainParams::annulus(1.0).is_err());
    assert!(validate(&DomainParams::Annulus { r: f64::NAN }).is_err());
    assert_eq!(Truncation::new(1), Err(Error::InvalidTruncation(1)));
}

#[test]
fn invalid_params_never_index() {
    let bad = DomainParams::Pants { a: 0.5, r1: 0.4, r2: 0.2 };
    assert!(BasisIndex::new(bad, 5).is_err());
}

proptest! {
    #[test]
    fn index_round_trip(p in common::any_params(), n in 2usize..60) {
        let idx = BasisIndex::new(p, n).unwrap();
        for i in 0..idx.dim() {
            let l = idx.label_of(i);
            prop_assert!(l.is_well_formed());
            prop_assert_eq!(idx.index_of(l), Some(i));
        }
        prop_assert_eq!(idx.index_of(BasisLabel::e(n as i64 + 1)), None);
        prop_assert_eq!(idx.index_of(BasisLabel::f(0)), None);
    }
}
