mod common;

use proptest::prelude::*;

use pants_core::resolvent::dense::{dense_resolvent_z, dense_resolvent_zzstar};
use pants_core::resolvent::kernels::{self, KernelName, KernelSpec};
use pants_core::resolvent::pseudospectrum::{self as ps, smin, GridSpec, Region, SminMethod};
use pants_core::resolvent::{solve_resolvent_z, solve_resolvent_zzstar, z_region, zz_region, ZRegion, ZzRegion};
use pants_core::spectral;
use pants_core::{c64, operators, BasisIndex, BasisLabel, CoefficientVector, Complex64, DomainParams, Error, Mode};

use common::{local_vector, rel_err};

fn pants() -> DomainParams {
    DomainParams::default_pants()
}

/// `(z − λ)φ` against exact-mode `z` (one extra index so nothing is dropped).
fn apply_z_minus(p: &DomainParams, phi: &CoefficientVector, lam: Complex64) -> Vec<Complex64> {
    let n = phi.index.n();
    let big = BasisIndex::new(*p, n + 1).unwrap();
    let mut x = CoefficientVector::zeros(&big);
    for (i, l) in phi.index.order.iter().enumerate() {
        x.set(*l, phi.values[i]);
    }
    let y = operators::z_sparse(&big).shifted(-lam).mul_vec(&x.values);
    phi.index.order.iter().map(|l| y[big.index_of(*l).unwrap()]).collect()
}

#[test]
fn zero_region_frozen_example() {
    // (z − 0)φ = E_0 has φ = F_{-1}/r1 on the pants
    let p = pants();
    let idx = BasisIndex::new(p, 10).unwrap();
    let phi = solve_resolvent_z(&p, c64(0.0), &CoefficientVector::unit(&idx, BasisLabel::e(0))).unwrap();
    let mut want = CoefficientVector::zeros(&idx);
    want.set(BasisLabel::f(-1), c64(5.0));
    assert!(rel_err(&phi.values, &want.values) < 1e-15);
    // and z⁻¹ E_3 = E_2
    let phi = solve_resolvent_z(&p, c64(0.0), &CoefficientVector::unit(&idx, BasisLabel::e(3))).unwrap();
    assert_eq!(phi.get(BasisLabel::e(2)), c64(1.0));
}

#[test]
fn regions_and_their_errors() {
    let p = pants();
    assert_eq!(z_region(&p, Complex64::new(0.5, 0.1)).unwrap(), ZRegion::Hole2);
    assert_eq!(z_region(&p, Complex64::new(0.0, 1.5)).unwrap(), ZRegion::Outside);
    for lam in [Complex64::new(0.3, 0.5), c64(0.2), c64(1.0)] {
        assert!(matches!(z_region(&p, lam), Err(Error::RegionViolation { .. })), "{lam}");
    }
    assert_eq!(zz_region(&p, 0.05).unwrap(), ZzRegion::Low);
    assert_eq!(zz_region(&p, 0.7).unwrap(), ZzRegion::High);
    assert!(matches!(zz_region(&p, 0.2), Err(Error::RegionViolation { .. })));
    assert!(matches!(zz_region(&p, 0.04), Err(Error::NearEigenvalue { .. })));
    assert!(matches!(zz_region(&p, spectral::simple_eigenvalue(&p).unwrap()), Err(Error::NearEigenvalue { .. })));
    let idx = BasisIndex::new(pants(), 5).unwrap();
    let rhs = CoefficientVector::unit(&idx, BasisLabel::e(0));
    assert!(solve_resolvent_z(&p, Complex64::new(0.3, 0.5), &rhs).is_err());
    assert!(solve_resolvent_zzstar(&DomainParams::Disk, 0.5, &rhs).is_err());
}

#[test]
fn kernel_bounds_dominate_on_fixed_points() {
    let p = pants();
    for name in KernelName::ALL {
        let lams: &[Complex64] = match name {
            KernelName::T1 => &[Complex64::new(0.05, 0.1), Complex64::new(0.55, -0.05)],
            KernelName::T2 | KernelName::T3 | KernelName::T7 => &[Complex64::new(0.05, 0.1), c64(-0.15)],
            KernelName::T4 | KernelName::T5 | KernelName::T6 => &[Complex64::new(0.55, -0.05), c64(0.35)],
            KernelName::L1 | KernelName::L2 | KernelName::Q => &[c64(0.01), c64(0.06)],
            KernelName::L3 | KernelName::L4 | KernelName::R => &[c64(0.6), c64(0.95)],
        };
        for &lam in lams {
            let rep = kernels::schur_young_bound_at(&KernelSpec { name, params: p, lambda: lam }, 200).unwrap();
            assert!(rep.slack >= -1e-9 * rep.schur_young_bound, "{name} at {lam}: {rep:?}");
            assert!(rep.measured_norm > 0.0);
        }
    }
    // outside its validity region a kernel is rejected
    let bad = KernelSpec { name: KernelName::T3, params: p, lambda: c64(0.5) };
    assert!(kernels::schur_young_bound(&bad).is_err());
}

#[test]
fn rank_one_kernels_measure_exactly() {
    // for a rank-one kernel the Schur–Young estimate need not be tight, but
    // the measured norm at two truncations must agree once the tails vanish
    let p = pants();
    for name in KernelName::ALL.into_iter().filter(|k| k.is_rank_one()) {
        let lam = match name {
            KernelName::T2 => c64(0.1),
            KernelName::T5 => c64(0.45),
            KernelName::Q => c64(0.05),
            _ => c64(0.8),
        };
        let spec = KernelSpec { name, params: p, lambda: lam };
        let a = kernels::measured_norm(&spec, 200).unwrap();
        let b = kernels::measured_norm(&spec, 400).unwrap();
        assert!((a - b).abs() < 1e-12 * a, "{name}: {a} vs {b}");
    }
}

#[test]
fn pseudospectrum_grid_layout() {
    let p = pants();
    let g = GridSpec { x0: -1.2, x1: 1.2, y0: -1.2, y1: 1.2, res: 5 };
    let pts = ps::pseudospectrum_grid(&p, 30, &g, SminMethod::Auto).unwrap();
    assert_eq!(pts.len(), 25);
    assert_eq!(pts[1].lambda, Complex64::new(-0.6, -1.2));
    assert_eq!(pts[5].lambda, Complex64::new(-1.2, -0.6));
    assert_eq!(pts[12].region, Region::Hole1);
    assert_eq!(pts[0].region, Region::Outside);
    assert_eq!(pts[13].region, Region::Hole2);
    assert_eq!(pts[17].region.as_str(), "pants");
    assert!(ps::pseudospectrum_grid(&p, 30, &GridSpec { res: 1, ..g }, SminMethod::Auto).is_err());
}

#[test]
fn smin_small_on_the_domain_and_large_off_it() {
    let p = pants();
    let idx = BasisIndex::new(p, 100).unwrap();
    for lam in [Complex64::new(0.3, 0.5), c64(-0.6), Complex64::new(0.8, 0.1)] {
        assert!(smin(&idx, lam, SminMethod::Forest) < 1e-8, "{lam}");
    }
    for lam in [c64(0.0), c64(0.5), Complex64::new(0.6, 1.04)] {
        assert!(smin(&idx, lam, SminMethod::Forest) > 0.05, "{lam}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn z_resolvent_matches_dense_oracle(
        p in common::pants_params(),
        hole in 0usize..3,
        t in 0.05..0.5f64,
        ang in 0.0..6.28f64,
        seed in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 8),
    ) {
        let (a, r1, r2) = p.pants_params("test").unwrap();
        let lam = match hole {
            0 => Complex64::from_polar(t * r1, ang),
            1 => c64(a) + Complex64::from_polar(t * r2, ang),
            _ => Complex64::from_polar(1.1 + 3.0 * t, ang),
        };
        let idx = BasisIndex::new(p, 60).unwrap();
        let rhs = local_vector(&idx, 4, &seed);
        let an = solve_resolvent_z(&p, lam, &rhs).unwrap();
        let de = dense_resolvent_z(&p, lam, &rhs).unwrap();
        prop_assert!(rel_err(&an.values, &de.values) < 1e-9);
        // residual on the interior, where the window cut does not reach
        let r = apply_z_minus(&p, &an, lam);
        for (i, l) in idx.order.iter().enumerate() {
            if l.n.abs() < 40 {
                prop_assert!((r[i] - rhs.values[i]).norm() < 1e-10 * (1.0 + an.norm()));
            }
        }
    }

    #[test]
    fn annulus_and_disk_resolvents(r in 0.2..0.8f64, t in 0.0..0.5f64, ang in 0.0..6.28f64, out in any::<bool>()) {
        let p = if out { DomainParams::Disk } else { DomainParams::annulus(r).unwrap() };
        let lam = if out { Complex64::from_polar(1.2 + t, ang) } else { Complex64::from_polar(t * r, ang) };
        let idx = BasisIndex::new(p, 80).unwrap();
        let rhs = local_vector(&idx, 3, &[(0.3, -0.2), (1.0, 0.5), (-0.7, 0.1)]);
        let an = solve_resolvent_z(&p, lam, &rhs).unwrap();
        let de = dense_resolvent_z(&p, lam, &rhs).unwrap();
        prop_assert!(rel_err(&an.values, &de.values) < 1e-9);
    }

    #[test]
    fn zzstar_resolvent_matches_dense_oracle(p in common::pants_params(), t in 0.02..0.98f64, high in any::<bool>()) {
        let (_, r1, _) = p.pants_params("test").unwrap();
        let (lo, hi) = spectral::band(&p).unwrap();
        let lam = if high { hi + (1.0 - hi) * t } else { lo * t };
        prop_assume!(zz_region(&p, lam).is_ok());
        prop_assume!((lam - r1 * r1).abs() > 1e-3 && (lam - spectral::simple_eigenvalue(&p).unwrap()).abs() > 1e-3);
        let n = 150;
        let rd = spectral::characteristic_roots(&p, c64(lam)).unwrap();
        // the dense oracle cuts the G block
        prop_assume!(rd.growing().norm().powi(-(n as i32 - 5)) < 1e-13);
        let idx = BasisIndex::new(p, n).unwrap();
        let rhs = local_vector(&idx, 5, &[(0.3, 0.0), (-1.0, 0.0), (0.6, 0.0), (0.1, 0.0)]);
        let an = solve_resolvent_zzstar(&p, lam, &rhs).unwrap();
        let de = dense_resolvent_zzstar(&p, lam, &rhs).unwrap();
        prop_assert!(rel_err(&an.values, &de.values) < 1e-9);
        let m = operators::build_zzstar(&idx, Mode::Exact).to_sparse().shifted(c64(-lam));
        let r = m.mul_vec(&an.values);
        for (i, l) in idx.order.iter().enumerate() {
            if l.n.abs() < 100 {
                prop_assert!((r[i] - rhs.values[i]).norm() < 1e-10 * (1.0 + an.norm()));
            }
        }
    }

    #[test]
    fn smin_is_at_least_distance_outside(p in common::any_params(), rad in 1.01..2.5f64, ang in 0.0..6.28f64) {
        let idx = BasisIndex::new(p, 40).unwrap();
        let lam = Complex64::from_polar(rad, ang);
        let s = smin(&idx, lam, SminMethod::Svd);
        prop_assert!(s >= rad - 1.0 - 1e-12);
        let f = smin(&idx, lam, SminMethod::Forest);
        prop_assert!((f - s).abs() <= 1e-10 * s.max(1e-3));
    }
}
