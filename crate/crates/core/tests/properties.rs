//! Randomized invariants across modules.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use multicrit::airy::{AiryEvaluator, KernelRepresentation};
use multicrit::limit_shape::Density;
use multicrit::{
    normalized_toeplitz_det, sample_in_window, symbol_coeffs, Family, KappaTable, MeasureKind,
    MeasureTable, MulticriticalParams, Partition, Specialization, ToeplitzSpec,
};

fn kind() -> impl Strategy<Value = MeasureKind> {
    prop_oneof![Just(MeasureKind::Odd), Just(MeasureKind::OddEven)]
}

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..9, 0..9).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

/// Enumeration tables at θ = 0.6 for both kinds and n ∈ {1, 2}.
fn tables() -> &'static Vec<(MulticriticalParams, MeasureTable)> {
    static T: OnceLock<Vec<(MulticriticalParams, MeasureTable)>> = OnceLock::new();
    T.get_or_init(|| {
        let mut out = Vec::new();
        for k in [MeasureKind::Odd, MeasureKind::OddEven] {
            for n in 1..=2 {
                let p = MulticriticalParams::new(k, n, 0.6).unwrap();
                let t = MeasureTable::new(p.spec(), 30).unwrap();
                out.push((p, t));
            }
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fermionic_round_trip(lam in partition(), extra in 0i64..5) {
        let low = -(lam.length() as i64) - extra;
        let set = lam.fermionic_set(low).unwrap();
        prop_assert_eq!(set.to_partition().unwrap(), lam.clone());
        prop_assert_eq!(set.min_hole(), -(lam.length() as i64));
        if !lam.is_empty() {
            prop_assert_eq!(set.max(), Some(lam.first_part() as i64 - 1));
        }
    }

    #[test]
    fn conjugation(lam in partition()) {
        let c = lam.conjugate();
        prop_assert_eq!(c.conjugate(), lam.clone());
        prop_assert_eq!(c.size(), lam.size());
        prop_assert_eq!(c.length(), lam.first_part());
    }

    #[test]
    fn sum_rules(k in kind(), n in 1usize..7, num in 1i64..40, den in 1i64..12) {
        let theta = BigRational::new(BigInt::from(num), BigInt::from(den));
        let p = MulticriticalParams::with_exact_theta(k, n, theta.clone()).unwrap();
        let th = p.spec().exact().unwrap();
        let total: BigRational = th.iter().cloned().sum();
        prop_assert_eq!(total, p.b() * &theta / BigRational::from_integer(2.into()));
        for j in 1..n {
            let moment: BigRational = th
                .iter()
                .enumerate()
                .map(|(i, t)| t * BigRational::from_integer(BigInt::from(i + 1).pow(2 * j as u32)))
                .sum();
            prop_assert!(moment.is_zero());
        }
        prop_assert_eq!(&th[0], &theta);
        if k == MeasureKind::Odd {
            prop_assert!(th.iter().skip(1).step_by(2).all(|t| t.is_zero()));
        }
    }

    #[test]
    fn kappa_unimodular(k in kind(), n in 1usize..5, theta in 0.05f64..5.0) {
        let p = MulticriticalParams::new(k, n, theta).unwrap();
        let t = KappaTable::new(p.spec()).unwrap();
        let norm: f64 = t.coefficients().values().iter().map(|c| c * c).sum();
        prop_assert!((norm - 1.0).abs() < 1e-10, "{norm}");
    }

    #[test]
    fn kernel_window_is_a_contraction(k in kind(), n in 1usize..4, theta in 0.1f64..10.0, lo in -30i64..0, width in 1i64..40) {
        let p = MulticriticalParams::new(k, n, theta).unwrap();
        let t = KappaTable::new(p.spec()).unwrap();
        let w = t.window(lo, lo + width).unwrap();
        prop_assert!(w.max_asymmetry() <= 1e-12);
        let ev = w.eigenvalues();
        prop_assert!(ev[0] >= -1e-10 && *ev.last().unwrap() <= 1.0 + 1e-10, "{ev:?}");
        for m in lo..=lo + width {
            let d = t.density(m);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&d));
        }
    }

    #[test]
    fn gap_is_a_cdf(k in kind(), n in 1usize..4, theta in 0.1f64..15.0) {
        let p = MulticriticalParams::new(k, n, theta).unwrap();
        let t = KappaTable::new(p.spec()).unwrap();
        let r = t.truncation_radius();
        let g = t.gap_range(0, r);
        prop_assert!(g.iter().all(|v| (-1e-14..=1.0 + 1e-14).contains(&v.value)));
        prop_assert!(g.windows(2).all(|w| w[1].value >= w[0].value - 1e-14));
        prop_assert!((g.last().unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlations_match_enumeration(idx in 0usize..4, a in -4i64..4, b in -4i64..4) {
        prop_assume!(a != b);
        let (p, table) = &tables()[idx];
        let kt = KappaTable::new(p.spec()).unwrap();
        prop_assert!((table.correlation(&[a]) - kt.correlation(&[a])).abs() < 1e-8);
        prop_assert!((table.correlation(&[a, b]) - kt.correlation(&[a, b])).abs() < 1e-8);
    }

    #[test]
    fn g_family_is_f_of_conjugate(t1 in -1.5f64..1.5, t2 in -1.0f64..1.0, t3 in -0.7f64..0.7) {
        let spec = Specialization::new(vec![t1, t2, t3]).unwrap();
        let g = symbol_coeffs(&spec, Family::G, 10).unwrap();
        let f = symbol_coeffs(&spec.omega(), Family::F, 10).unwrap();
        for m in -10..=10 {
            prop_assert!((g.get(m).unwrap() - f.get(m).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn toeplitz_matches_gap(k in kind(), n in 1usize..3, theta in 0.1f64..2.0, l in 0usize..7) {
        let p = MulticriticalParams::new(k, n, theta).unwrap();
        let det = normalized_toeplitz_det(&ToeplitzSpec::new(p.spec(), Family::G, l).unwrap()).unwrap();
        let gap = KappaTable::new(p.spec()).unwrap().gap_probability(l as i64).value;
        prop_assert!((det - gap).abs() < 1e-9, "{det} vs {gap}");
    }

    #[test]
    fn limit_shape_profile(n in 1usize..5, u in 0.0f64..1.0) {
        let dens = Density::new(MeasureKind::Odd, n).unwrap();
        let b = dens.right_edge();
        let x = u * 1.5 * b;
        prop_assert!((dens.rho(-x).unwrap() - (1.0 - dens.rho(x).unwrap())).abs() < 1e-10);
        prop_assert!((dens.omega(-x).unwrap() - dens.omega(x).unwrap()).abs() < 1e-10);
        prop_assert!(dens.omega(x).unwrap() >= x.abs() - 1e-12);
    }

    #[test]
    fn omega_slope(k in kind(), n in 1usize..4, u in 0.05f64..0.95) {
        let dens = Density::new(k, n).unwrap();
        let (l, r) = (dens.left_edge(), dens.right_edge());
        let x = l + u * (r - l);
        let h = 1e-4;
        let slope = (dens.omega(x + h).unwrap() - dens.omega(x - h).unwrap()) / (2.0 * h);
        prop_assert!((slope - (1.0 - 2.0 * dens.rho(x).unwrap())).abs() < 1e-6);
        prop_assert!(slope.abs() <= 1.0 + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn airy_diagonal_limit(order in prop_oneof![Just(3usize), Just(5), Just(7)], x in -3.0f64..3.0) {
        let e = AiryEvaluator::new(order).unwrap();
        let s = e.kernel(x, x, KernelRepresentation::DerivativeSum).unwrap();
        let p = e.kernel(x, x, KernelRepresentation::ProductIntegral).unwrap();
        prop_assert!((s - p).abs() < 1e-8, "{s} vs {p}");
    }

    #[test]
    fn sampler_is_deterministic(theta in 0.2f64..2.5, seed in any::<u64>()) {
        let spec = Specialization::plancherel(theta);
        let a = sample_in_window(&spec, theta, -12, 12, 64, seed).unwrap();
        let b = sample_in_window(&spec, theta, -12, 12, 64, seed).unwrap();
        prop_assert_eq!(&a.samples, &b.samples);
        prop_assert!(a.samples.iter().all(|p| p.first_part() <= 13 && p.length() <= 12));
    }
}

#[test]
fn empty_toeplitz_is_one() {
    let spec = Specialization::plancherel(1.0);
    let ts = ToeplitzSpec::new(&spec, Family::F, 0).unwrap();
    assert_eq!(multicrit::toeplitz_det(&ts).unwrap(), 1.0);
}
