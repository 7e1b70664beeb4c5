use monospec::dominance::{check_liftable, dominance_of, lift, DominanceMatrix, Liftability};
use monospec::matrix::{
    convex_combine_monotone, determinant, prefix_sums, validate_monotone, validate_stochastic, DEFAULT_TOL,
};
use monospec::realise::{family_matrix, realise_pair, Family, FamilyId};
use monospec::regions::{stochastic3_real_pair_member, theta_member, xi3_boundary, xi3_pair_member, xi_n_member};
use monospec::sampler::sample_one;
use monospec::spectra::poly::{faddeev_leverrier, relative_residual, roots};
use monospec::spectra::{eigenpair_3x3, spectrum_of_stochastic, EigenPair};
use num_complex::Complex64;
use proptest::prelude::*;

fn stochastic_rows(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0f64..1.0, n), n).prop_map(|rows| {
        rows.into_iter()
            .map(|r| {
                let total: f64 = r.iter().sum::<f64>() + 1e-3;
                let mut r: Vec<f64> = r.iter().map(|v| v / total).collect();
                let rest = 1.0 - r.iter().sum::<f64>();
                r[0] += rest;
                r
            })
            .collect()
    })
}

fn pair_in_region() -> impl Strategy<Value = EigenPair> {
    (0.0f64..=1.0, -0.5f64..=1.0)
        .prop_map(|(x, y)| EigenPair { lambda2: x, lambda3: y })
        .prop_filter("inside the pair region", |&p| xi3_pair_member(p, 0.0).member)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn monotone_check_agrees_with_prefix_table(rows in (2usize..6).prop_flat_map(stochastic_rows)) {
        let s = validate_stochastic(&rows, DEFAULT_TOL).unwrap();
        let by_table = prefix_sums(&s).is_column_nonincreasing(DEFAULT_TOL);
        prop_assert_eq!(validate_monotone(s).is_ok(), by_table);
    }

    #[test]
    fn sampled_matrices_pass_both_checks(n in 1usize..8, seed: u64, index in 0u64..1000) {
        let m = sample_one(n, seed, index).unwrap();
        prop_assert!(prefix_sums(m.as_stochastic()).is_column_nonincreasing(DEFAULT_TOL));
        prop_assert!(validate_monotone(m.as_stochastic().clone()).is_ok());
    }

    #[test]
    fn convex_combination_stays_monotone(n in 2usize..7, seed: u64, t in 0.0f64..=1.0) {
        let a = sample_one(n, seed, 0).unwrap();
        let b = sample_one(n, seed, 1).unwrap();
        prop_assert!(convex_combine_monotone(&a, &b, t).is_ok());
    }

    #[test]
    fn dominance_is_linear(n in 2usize..7, seed: u64, t in 0.0f64..=1.0) {
        let a = sample_one(n, seed, 0).unwrap();
        let b = sample_one(n, seed, 1).unwrap();
        let c = convex_combine_monotone(&a, &b, t).unwrap();
        let (da, db, dc) = (dominance_of(&a).unwrap(), dominance_of(&b).unwrap(), dominance_of(&c).unwrap());
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let expected = t * da.get(i, j) + (1.0 - t) * db.get(i, j);
                prop_assert!((dc.get(i, j) - expected).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn lift_round_trips(seed: u64, index in 0u64..1000) {
        // dominance matrices of sampled monotone matrices are always liftable
        let m = sample_one(3, seed, index).unwrap();
        let d = dominance_of(&m).unwrap();
        let w = check_liftable(&d, DEFAULT_TOL).unwrap().witness();
        prop_assert!(w.is_some());
        let back = dominance_of(&lift(&d, w.unwrap(), DEFAULT_TOL).unwrap()).unwrap();
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            prop_assert!((back.get(i, j) - d.get(i, j)).abs() <= 1e-12);
        }
    }

    #[test]
    fn liftability_matches_explicit_entries(a in 0.0f64..1.2, b in 0.0f64..1.2, c in 0.0f64..1.2, d in 0.0f64..1.2) {
        let dm = DominanceMatrix::new(&[vec![a, b], vec![c, d]], DEFAULT_TOL).unwrap();
        let liftable = matches!(check_liftable(&dm, 0.0).unwrap(), Liftability::Feasible(_));
        // the minimal witness works whenever anything does
        let (m11, m33) = (a + c, b + d);
        let entries = [m11, 1.0 - (m11 + m33 - b - d), m33 - b - d, m11 - a, 1.0 - (m11 - a + m33 - d),
                       m33 - d, m11 - a - c, 1.0 - (m11 - a - c + m33), m33];
        let slack = entries.iter().copied().fold(f64::INFINITY, f64::min);
        if slack.abs() > 1e-12 {
            prop_assert_eq!(liftable, slack > 0.0);
        }
    }

    #[test]
    fn pair_region_is_star_convex(p in pair_in_region(), t in 0.0f64..=1.0) {
        prop_assert!(xi3_pair_member(p.scaled(t), 1e-12).member);
    }

    #[test]
    fn pair_region_inside_stochastic_region(p in pair_in_region()) {
        prop_assert!(stochastic3_real_pair_member(p, 1e-12).member);
        prop_assert!(theta_member(Complex64::new(p.lambda3, 0.0), 3, 1e-12).unwrap().member);
    }

    #[test]
    fn interval_chain(x in -1.5f64..1.5) {
        for (small, large) in [(1usize, 2usize), (2, 3)] {
            if xi_n_member(x, small, 1e-12).unwrap().member {
                prop_assert!(xi_n_member(x, large, 1e-12).unwrap().member);
            }
        }
        if xi_n_member(x, 3, 1e-12).unwrap().member {
            prop_assert!(theta_member(Complex64::new(x, 0.0), 3, 1e-12).unwrap().member);
        }
    }

    #[test]
    fn sampled_spectra_inside_theta3(seed: u64, index in 0u64..1000) {
        let m = sample_one(3, seed, index).unwrap();
        for z in spectrum_of_stochastic(m.as_stochastic()).unwrap().values() {
            prop_assert!(theta_member(*z, 3, 1e-9).unwrap().member);
        }
        let p = eigenpair_3x3(&dominance_of(&m).unwrap()).unwrap();
        prop_assert!(xi3_pair_member(p, 1e-9).member);
    }

    #[test]
    fn family_points_lie_on_their_curves(k in 0usize..5, u in 0.0f64..=1.0) {
        let family = [Family::C1, Family::C2, Family::C3, Family::C4, Family::C5][k];
        let (lo, hi) = family.alpha_range();
        let m = family_matrix(FamilyId::new(family, lo + u * (hi - lo)).unwrap()).unwrap();
        let p = eigenpair_3x3(&dominance_of(&m).unwrap()).unwrap();
        prop_assert!(family.curve().unwrap().residual(p).abs() < 1e-9);
    }

    #[test]
    fn realised_pairs_have_the_requested_spectrum(p in pair_in_region()) {
        let m = realise_pair(p, DEFAULT_TOL).unwrap();
        let q = eigenpair_3x3(&dominance_of(&m).unwrap()).unwrap();
        prop_assert!((q.lambda2 - p.lambda2).abs() < 1e-9 && (q.lambda3 - p.lambda3).abs() < 1e-9);
    }

    #[test]
    fn roots_have_small_residuals(rows in (2usize..8).prop_flat_map(stochastic_rows)) {
        let s = validate_stochastic(&rows, DEFAULT_TOL).unwrap();
        let coeffs = faddeev_leverrier(s.entries());
        for z in roots(&coeffs).unwrap() {
            prop_assert!(relative_residual(&coeffs, z) < 1e-9);
        }
    }

    #[test]
    fn trace_and_determinant_identities(rows in (2usize..8).prop_flat_map(stochastic_rows)) {
        let s = validate_stochastic(&rows, DEFAULT_TOL).unwrap();
        let spectrum = spectrum_of_stochastic(&s).unwrap();
        prop_assert!((spectrum.sum() - Complex64::new(s.trace(), 0.0)).norm() < 1e-9);
        prop_assert!((spectrum.product() - Complex64::new(determinant(s.entries()), 0.0)).norm() < 1e-9);
    }
}

#[test]
fn boundary_is_consistent_on_200_slopes() {
    for i in 0..200 {
        let k = -1.0 + 2.0 * i as f64 / 199.0;
        let (p, curve) = xi3_boundary(k).unwrap();
        assert!(curve.residual(p).abs() < 1e-12, "slope {k}: residual {}", curve.residual(p));
        assert!((p.lambda3 - k * p.lambda2).abs() < 1e-12);
        let on = xi3_pair_member(p, 1e-12);
        assert!(on.member && on.margin.abs() < 1e-12, "slope {k}: {on}");
        assert!(!xi3_pair_member(p.scaled(1.0 + 1e-6), 1e-12).member, "slope {k}");
    }
}
