use proptest::prelude::*;
use zetadim::dimension::{
    abel_check, counting_profile, dyadic_ladder, parse_rung_table, render_rung_table, zeta_estimates, DEFAULT_WINDOW,
};
use zetadim::generators::{gen_lattice, gen_power_set};
use zetadim::geometry::PointSet;
use zetadim::patches::threshold_bound;
use zetadim::PointSet32;
use zetadim_validation::direct_zeta_sum;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn estimates_are_ordered_and_in_range(alpha in 1.1f64..4.0, top in 12u32..34, r in 0.1f64..0.9) {
        let set = gen_power_set::<f64>(alpha, 4096.0).unwrap();
        let profile = counting_profile(&set, &[0.0], r, &dyadic_ladder(1.0, 2f64.powi(top as i32)).unwrap()).unwrap();
        let est = zeta_estimates(&profile, DEFAULT_WINDOW).unwrap();
        prop_assert!(est.lower <= est.upper);
        prop_assert!(est.diagnostics.out_of_range || (0.0..=1.0).contains(&est.upper));
        // the upper estimate sits near 1/α once the ladder is long
        if top >= 24 {
            prop_assert!((est.upper - 1.0 / alpha).abs() < 0.1, "alpha {} upper {}", alpha, est.upper);
        }
    }

    #[test]
    fn base_point_shift_barely_moves_the_lattice_estimate(shift in -3000.0f64..3000.0) {
        let z = gen_lattice::<f64>(1, 1e6).unwrap();
        let ladder = dyadic_ladder(1.0, 5e5).unwrap();
        let at = |c: f64| zeta_estimates(&counting_profile(&z, &[c], 0.5, &ladder).unwrap(), DEFAULT_WINDOW).unwrap();
        let (a, b) = (at(0.0), at(shift.round()));
        prop_assert!((a.upper - b.upper).abs() <= 0.02);
        prop_assert!((a.lower - b.lower).abs() <= 0.02);
    }

    #[test]
    fn abel_form_matches_direct_sums(
        raw in prop::collection::vec(-500.0f64..500.0, 1..200),
        sigma in 0.1f64..3.0,
        ell in 1.0f64..500.0,
    ) {
        let set = PointSet::from_values(&raw).unwrap().with_sample_radius(500.0).unwrap();
        let pts: Vec<Vec<f64>> = set.iter().map(<[f64]>::to_vec).collect();
        let direct = direct_zeta_sum(&pts, &[0.0], sigma, ell);
        match abel_check(&set, &[0.0], sigma, ell) {
            Ok(chk) => prop_assert!((chk.abel - direct).abs() <= 1e-9 * direct, "{} vs {}", chk.abel, direct),
            // nothing at positive distance within ell
            Err(_) => prop_assert_eq!(direct, 0.0),
        }
    }
}

#[test]
fn rung_table_round_trips() {
    let set = gen_power_set::<f64>(2.0, 1e8).unwrap();
    let profile = counting_profile(&set, &[0.0], 0.5, &dyadic_ladder(1.0, 1e8).unwrap()).unwrap();
    let est = zeta_estimates(&profile, DEFAULT_WINDOW).unwrap();
    let rows = parse_rung_table(&render_rung_table(&profile, &est)).unwrap();
    assert_eq!(rows.len(), profile.rungs.len());
    for (row, rung) in rows.iter().zip(&profile.rungs) {
        assert_eq!(row.radius, rung.radius);
        assert_eq!(row.upper, rung.bound.upper);
        assert_eq!(row.lower, rung.bound.lower);
    }
    assert_eq!(rows.iter().filter(|r| r.slope.is_some()).count(), est.window_slopes.iter().flatten().count());
}

#[test]
fn single_precision_estimate_agrees() {
    let values: Vec<f32> = (1..=3000).map(|n| (n * n) as f32).collect();
    let set: PointSet32 = PointSet::from_values(&values).unwrap();
    let ladder = dyadic_ladder::<f32>(1.0, 9e6).unwrap();
    let est = zeta_estimates(&counting_profile(&set, &[0.0], 0.5, &ladder).unwrap(), DEFAULT_WINDOW).unwrap();
    let set64 = gen_power_set::<f64>(2.0, 9e6).unwrap();
    let est64 = zeta_estimates(
        &counting_profile(&set64, &[0.0], 0.5, &dyadic_ladder(1.0, 9e6).unwrap()).unwrap(),
        DEFAULT_WINDOW,
    )
    .unwrap();
    assert!((est.upper - est64.upper).abs() < 1e-4);
}

#[test]
fn threshold_grows_with_k_and_precision() {
    for d in 1..=3 {
        for m in 1..=d {
            for &eps in &[0.9, 0.5, 0.3, 0.2, 0.1, 0.05, 0.01] {
                let mut prev = f64::NEG_INFINITY;
                for k in 3..12 {
                    let t = threshold_bound(d, m, k, eps).unwrap();
                    assert!(t > prev && t < d as f64, "d={d} m={m} k={k} eps={eps}");
                    prev = t;
                }
            }
            // ceil makes the bound flat between jumps, never decreasing
            let mut prev = f64::NEG_INFINITY;
            for i in 1..400 {
                let eps = 1.0 / (1.0 + i as f64 * 0.05);
                let t = threshold_bound(d, m, 3, eps).unwrap();
                assert!(t >= prev);
                prev = t;
            }
        }
    }
}
