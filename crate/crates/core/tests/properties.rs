//! Property suite: the cross-module invariants, sampled over seeded random
//! instances. The exact finite-standard model acts as the oracle: its
//! Berezin quantities reduce to entry scans, checked here against the
//! search-based implementation path.

use num_complex::Complex64;
use proptest::prelude::*;

use berkit::berezin::{
    berezin_inf_c, berezin_norm, berezin_number, berezin_symbol, psd_power_sum_norm_bound,
};
use berkit::block::BlockMatrix;
use berkit::bounds::{self, BoundParams, SpectralPair};
use berkit::linalg::{
    abs_op, apply_spectral_fn, numerical_radius, numerical_radius_entrywise_nonneg, op_norm,
    CMatrix,
};
use berkit::rkhs::{RkhsModel, RkhsPoint};
use berkit::verify::{gen_for_bound, sample_matrix, BoundInstance, Ensemble, InstanceSpec};

fn mat(seed: u64, dim: usize, ensemble: Ensemble) -> CMatrix {
    sample_matrix(&InstanceSpec::new(seed, dim, ensemble)).unwrap()
}

/// Direct entry-scan oracles for the standard model.
fn oracle_max_diag(a: &CMatrix) -> f64 {
    (0..a.rows()).map(|i| a[(i, i)].norm()).fold(0.0, f64::max)
}

fn oracle_min_diag(a: &CMatrix) -> f64 {
    (0..a.rows()).map(|i| a[(i, i)].norm()).fold(f64::INFINITY, f64::min)
}

fn oracle_max_entry(a: &CMatrix) -> f64 {
    a.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn radius_sits_between_half_norm_and_norm(seed in 0u64..5000, dim in 1usize..6) {
        let a = mat(seed, dim, Ensemble::ComplexGaussian);
        let w = numerical_radius(&a, 128).unwrap();
        let n = op_norm(&a).unwrap();
        prop_assert!(w <= n + 1e-8, "w={w} > ||a||={n}");
        prop_assert!(w >= 0.5 * n - 1e-8, "w={w} < ||a||/2={}", 0.5 * n);
    }

    #[test]
    fn abs_op_squares_back_to_gram(seed in 0u64..5000, dim in 1usize..6) {
        let a = mat(seed, dim, Ensemble::ComplexGaussian);
        let abs = abs_op(&a).unwrap();
        let eig = berkit::linalg::herm_eig(&abs).unwrap();
        prop_assert!(eig.lambda_min() >= -1e-10 * a.frobenius().max(1.0));
        let err = abs.mul(&abs).sub(&a.gram()).frobenius();
        prop_assert!(err <= 1e-9 * a.frobenius().powi(2).max(1e-12), "err={err}");
    }

    #[test]
    fn nonneg_radius_routes_agree(seed in 0u64..5000, dim in 1usize..6) {
        let g = mat(seed, dim, Ensemble::RealGaussian);
        let mut nn = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                nn[(i, j)] = Complex64::new(g[(i, j)].re.abs(), 0.0);
            }
        }
        let sweep = numerical_radius(&nn, 1024).unwrap();
        let sym = numerical_radius_entrywise_nonneg(&nn).unwrap();
        prop_assert!((sweep - sym).abs() <= 1e-8, "sweep={sweep} sym={sym}");
    }

    #[test]
    fn complementary_powers_recover_abs(seed in 0u64..5000, dim in 1usize..5, s_idx in 0usize..3) {
        let a = mat(seed, dim, Ensemble::ComplexGaussian);
        let s = [0.25, 0.5, 0.75][s_idx];
        let abs = abs_op(&a).unwrap();
        let f = apply_spectral_fn(&abs, |t| t.powf(s)).unwrap();
        let g = apply_spectral_fn(&abs, |t| t.powf(1.0 - s)).unwrap();
        let err = f.mul(&g).sub(&abs).frobenius();
        prop_assert!(err <= 1e-9 * a.frobenius().max(1.0), "err={err}");
    }

    #[test]
    fn adjoint_preserves_operator_norm(seed in 0u64..5000, dim in 1usize..6) {
        let a = mat(seed, dim, Ensemble::ComplexGaussian);
        let n1 = op_norm(&a).unwrap();
        let n2 = op_norm(&a.adjoint()).unwrap();
        prop_assert!((n1 - n2).abs() <= 1e-10 * n1.max(1.0));
    }

    #[test]
    fn normalized_kernels_are_unit(seed in 0u64..5000, dim in 2usize..6, re in -0.6f64..0.6, im in -0.6f64..0.6) {
        let m = RkhsModel::DirectSum(vec![
            RkhsModel::FiniteStandard(dim),
            RkhsModel::HardyTruncated { dim: 30, r_max: 0.9 },
        ]);
        let p = RkhsPoint::Tuple(vec![
            RkhsPoint::Index((seed as usize) % dim),
            RkhsPoint::Disk { re, im },
        ]);
        let k = m.normalized_kernel(&p).unwrap();
        let norm: f64 = k.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn finite_standard_quantities_match_entry_oracles(seed in 0u64..5000, dim in 1usize..7) {
        let a = mat(seed, dim, Ensemble::ComplexGaussian);
        let m = RkhsModel::FiniteStandard(dim);
        let ber = berezin_number(&a, &m).unwrap();
        let norm = berezin_norm(&a, &m).unwrap();
        let c = berezin_inf_c(&a, &m).unwrap();
        prop_assert!(ber.exact && norm.exact && c.exact);
        prop_assert!((ber.value - oracle_max_diag(&a)).abs() <= 1e-14);
        prop_assert!((norm.value - oracle_max_entry(&a)).abs() <= 1e-14);
        prop_assert!((c.value - oracle_min_diag(&a)).abs() <= 1e-14);
    }

    #[test]
    fn quantity_chain_on_finite_models(seed in 0u64..5000, dim in 1usize..6) {
        let a = mat(seed, dim, Ensemble::ComplexGaussian);
        let m = RkhsModel::FiniteStandard(dim);
        let ber = berezin_number(&a, &m).unwrap().value;
        let bnorm = berezin_norm(&a, &m).unwrap().value;
        let onorm = op_norm(&a).unwrap();
        let w = numerical_radius(&a, 128).unwrap();
        prop_assert!(ber <= bnorm + 1e-8);
        prop_assert!(bnorm <= onorm + 1e-8);
        prop_assert!(ber <= w + 1e-8);
    }

    #[test]
    fn psd_norm_equals_number_on_finite_models(seed in 0u64..5000, dim in 1usize..6) {
        let a = mat(seed, dim, Ensemble::Psd);
        let m = RkhsModel::FiniteStandard(dim);
        let ber = berezin_number(&a, &m).unwrap().value;
        let bnorm = berezin_norm(&a, &m).unwrap().value;
        prop_assert!((ber - bnorm).abs() <= 1e-8, "ber={ber} norm={bnorm}");
    }

    #[test]
    fn psd_power_sums_dominate(seed in 0u64..5000, dim in 1usize..5, r in 1u32..4) {
        let m = RkhsModel::FiniteStandard(dim);
        let ops: Vec<CMatrix> = (0..3)
            .map(|k| mat(seed.wrapping_add(k), dim, Ensemble::Psd))
            .collect();
        let sum = ops.iter().fold(CMatrix::zeros(dim, dim), |acc, t| acc.add(t));
        let lhs = berezin_norm(&sum, &m).unwrap().value.powi(r as i32);
        let rhs = psd_power_sum_norm_bound(&ops, r, &m).unwrap();
        prop_assert!(lhs <= rhs + 1e-9 * rhs.max(1.0), "lhs={lhs} rhs={rhs}");
    }

    #[test]
    fn corner_embedding_halves_the_number(seed in 0u64..5000, dim in 1usize..6) {
        let a = mat(seed, dim, Ensemble::ComplexGaussian);
        let m = RkhsModel::FiniteStandard(dim);
        let doubled = RkhsModel::DirectSum(vec![m.clone(), m.clone()]);
        let corner = BlockMatrix::corner_embed(&a).assemble();
        let lhs = berezin_number(&corner, &doubled).unwrap().value;
        let rhs = berezin_number(&a, &m).unwrap().value;
        prop_assert!((lhs - 0.5 * rhs).abs() <= 1e-12);
    }

    #[test]
    fn closed_form_equals_general_block_bound(seed in 0u64..5000, dim in 1usize..5) {
        let spec = InstanceSpec::new(seed, dim, Ensemble::ComplexGaussian);
        let m = RkhsModel::FiniteStandard(dim);
        if let BoundInstance::Blocks(blocks) = gen_for_bound(bounds::BoundId::co5, &spec).unwrap() {
            let closed = bounds::ub_2x2_co5(&blocks, &m).unwrap().value();
            let general = bounds::ub_block_th4(&blocks, &SpectralPair::Power(0.5), &m)
                .unwrap()
                .value();
            prop_assert!((closed - general).abs() <= 1e-9 * closed.max(1.0));
        }
    }

    #[test]
    fn large_alpha_limits_match_the_closed_limits(seed in 0u64..5000, dim in 1usize..5) {
        let m = RkhsModel::FiniteStandard(dim);
        let big = Complex64::new(1e6, 0.0);
        let a = mat(seed, dim, Ensemble::ComplexGaussian);
        let b = mat(seed.wrapping_add(1), dim, Ensemble::ComplexGaussian);
        let c = mat(seed.wrapping_add(2), dim, Ensemble::ComplexGaussian);
        let d = mat(seed.wrapping_add(3), dim, Ensemble::ComplexGaussian);
        let v5 = bounds::ub_offdiag_th5(&a, &b, big, &m).unwrap().value();
        let v4 = bounds::ub_offdiag_co4(&a, &b, &m).unwrap().value();
        prop_assert!((v5 - v4).abs() <= 1e-5, "th5={v5} co4={v4}");
        let v6 = bounds::ub_full_th6(&a, &b, &c, &d, big, &m).unwrap().value();
        let v6l = bounds::ub_full_co6(&a, &b, &c, &d, &m).unwrap().value();
        prop_assert!((v6 - v6l).abs() <= 1e-5, "th6={v6} co6={v6l}");
    }

    #[test]
    fn symmetrized_corner_bound_refines_operator_norm(seed in 0u64..5000, dim in 1usize..6) {
        // the limit form never exceeds the squared operator norm
        let a = mat(seed, dim, Ensemble::ComplexGaussian);
        let m = RkhsModel::FiniteStandard(dim);
        let raw = bounds::ub_offdiag_inq3(&a, &m).unwrap().raw;
        let n2 = op_norm(&a).unwrap().powi(2);
        prop_assert!(raw <= n2 + 1e-9 * n2.max(1.0), "raw={raw} ||a||^2={n2}");
    }

    #[test]
    fn symbol_matches_quadratic_form(seed in 0u64..5000, dim in 1usize..6) {
        // independent route: assemble the normalized kernel by hand
        let a = mat(seed, dim, Ensemble::ComplexGaussian);
        let m = RkhsModel::FiniteStandard(dim);
        let i = (seed as usize) % dim;
        let s = berezin_symbol(&a, &m, &RkhsPoint::Index(i)).unwrap();
        prop_assert!((s - a[(i, i)]).norm() <= 1e-14);
    }

    #[test]
    fn bound_params_roundtrip_through_json(seed in 0u64..5000) {
        let p = berkit::verify::params_for_seed(seed);
        let text = serde_json::to_string(&p).unwrap();
        let back: BoundParams = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(p, back);
    }
}

/// Doubling the (nested) grid never lowers the grid-stage sup estimate, and
/// refinement only improves on it.
#[test]
fn hardy_grid_estimates_are_monotone() {
    use berkit::berezin::SearchSpec;
    use berkit::rkhs::{hardy_operator, HardyKind};
    let model = RkhsModel::HardyTruncated { dim: 48, r_max: 0.9 };
    let ops = [
        hardy_operator(HardyKind::Mz, 48).unwrap(),
        hardy_operator(HardyKind::PMonomial(2), 48).unwrap(),
    ];
    for op in &ops {
        let mut last = 0.0;
        for (r, a) in [(4, 8), (8, 16), (16, 32), (32, 64)] {
            let spec = SearchSpec { radii: r, angles: a, refine: false, ..SearchSpec::default() };
            let v = berkit::berezin::berezin_number_with(op, &model, &spec).unwrap().value;
            assert!(v + 1e-15 >= last, "grid doubling lowered the estimate: {v} < {last}");
            last = v;
        }
        let coarse = SearchSpec { radii: 8, angles: 16, refine: false, ..SearchSpec::default() };
        let refined = SearchSpec { radii: 8, angles: 16, refine: true, ..SearchSpec::default() };
        let v0 = berkit::berezin::berezin_number_with(op, &model, &coarse).unwrap().value;
        let v1 = berkit::berezin::berezin_number_with(op, &model, &refined).unwrap().value;
        assert!(v1 >= v0);
    }
}

/// Estimates certify themselves: re-evaluating at the witness reproduces the
/// value, on exact and estimated models alike.
#[test]
fn witnesses_reproduce_values() {
    use berkit::berezin::Witness;
    let hardy = RkhsModel::HardyTruncated { dim: 60, r_max: 0.95 };
    let mz = berkit::rkhs::hardy_operator(berkit::rkhs::HardyKind::Mz, 60).unwrap();
    let est = berezin_number(&mz, &hardy).unwrap();
    match &est.witness {
        Witness::Point(p) => {
            let re_eval = berezin_symbol(&mz, &hardy, p).unwrap().norm();
            assert!((re_eval - est.value).abs() <= 1e-12);
        }
        Witness::Pair { .. } => panic!("number estimates carry point witnesses"),
    }

    let norm = berezin_norm(&mz, &hardy).unwrap();
    match &norm.witness {
        Witness::Pair { lambda, mu } => {
            let kl = hardy.normalized_kernel(lambda).unwrap();
            let km = hardy.normalized_kernel(mu).unwrap();
            let v: Complex64 = mz
                .matvec(&kl)
                .iter()
                .zip(&km)
                .map(|(&a, &b)| a * b.conj())
                .sum();
            assert!((v.norm() - norm.value).abs() <= 1e-12);
        }
        Witness::Point(_) => panic!("norm estimates carry pair witnesses"),
    }
}
