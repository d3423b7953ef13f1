#![allow(dead_code)]

use proptest::prelude::*;

use pants_core::{BasisIndex, CoefficientVector, Complex64, DomainParams};

/// Valid pants parameters: `a + r2 < 1` and `r1 + r2 < a` with some room.
pub fn pants_params() -> impl Strategy<Value = DomainParams> {
    (0.3..0.85f64, 0.1..0.9f64, 0.1..0.9f64).prop_map(|(a, u, v)| {
        let r2 = u * 0.9 * (1.0 - a).min(a);
        let r1 = v * 0.9 * (a - r2);
        DomainParams::pants(a, r1, r2).expect("strategy builds valid parameters")
    })
}

pub fn any_params() -> impl Strategy<Value = DomainParams> {
    prop_oneof![
        Just(DomainParams::Disk),
        (0.05..0.95f64).prop_map(|r| DomainParams::annulus(r).unwrap()),
        pants_params(),
    ]
}

/// Coefficient vector with entries in the unit square on `|n| ≤ support`.
pub fn local_vector(index: &BasisIndex, support: i64, seed: &[(f64, f64)]) -> CoefficientVector {
    let mut v = CoefficientVector::zeros(index);
    let mut k = 0;
    for (i, lab) in index.order.iter().enumerate() {
        if lab.n.abs() <= support {
            let (re, im) = seed[k % seed.len()];
            v.values[i] = Complex64::new(re, im);
            k += 1;
        }
    }
    v
}

pub fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let n: f64 = b.iter().map(|x| x.norm_sqr()).sum();
    (d / n).sqrt()
}
