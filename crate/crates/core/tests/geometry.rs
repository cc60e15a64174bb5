use proptest::prelude::*;
use zetadim::geometry::{build_grid_index, distance, lex_cmp, product_set, Metric, Point, PointSet};
use zetadim::{Point32, PointSet32, PointSet64};
use zetadim_validation::{euclid, sup_product};

fn coords(d: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-50.0f64..50.0, d), n)
}

fn set_of(points: &[Vec<f64>], radius: f64) -> PointSet64 {
    let pts: Vec<Point<f64>> = points.iter().map(|p| Point::new(p.clone()).unwrap()).collect();
    PointSet::from_points(&pts).unwrap().with_sample_radius(radius).unwrap()
}

fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    v.sort_by(|a, b| lex_cmp(a, b));
    v
}

proptest! {
    #[test]
    fn triangle_inequality(p in coords(3, 3..=3)) {
        for metric in [Metric::Euclidean, Metric::SupProduct(vec![1, 2])] {
            let d = |a: &[f64], b: &[f64]| distance(a, b, &metric).unwrap();
            prop_assert!(d(&p[0], &p[2]) <= d(&p[0], &p[1]) + d(&p[1], &p[2]) + 1e-12);
            prop_assert_eq!(d(&p[0], &p[1]), d(&p[1], &p[0]));
            prop_assert_eq!(d(&p[0], &p[0]), 0.0);
        }
        let sup = distance(&p[0], &p[1], &Metric::SupProduct(vec![1, 2])).unwrap();
        prop_assert!((sup - sup_product(&[1, 2], &p[0], &p[1])).abs() < 1e-12);
    }

    #[test]
    fn ball_counts_are_monotone_and_exact(
        pts in coords(2, 1..=60),
        c in prop::collection::vec(-20.0f64..20.0, 2),
        r1 in 0.0f64..40.0,
        extra in 0.0f64..40.0,
    ) {
        let set = set_of(&pts, 200.0);
        let r2 = r1 + extra;
        let n1 = set.ball_count(&c, r1).unwrap();
        let n2 = set.ball_count(&c, r2).unwrap();
        prop_assert!(n1 <= n2);
        let own: Vec<&[f64]> = set.iter().collect();
        let brute = own.iter().filter(|p| euclid(p, &c) <= r1).count() as u64;
        prop_assert_eq!(n1, brute);
    }

    #[test]
    fn product_counts_factor(
        a in coords(1, 1..=12),
        b in coords(2, 1..=12),
        ca in -10.0f64..10.0,
        cb in prop::collection::vec(-10.0f64..10.0, 2),
        r in 0.0f64..60.0,
    ) {
        let (x, y) = (set_of(&a, 100.0), set_of(&b, 100.0));
        let xy = product_set(&x, &y).unwrap();
        prop_assert_eq!(xy.len(), x.len() * y.len());
        let center = [ca, cb[0], cb[1]];
        prop_assert_eq!(
            xy.ball_count(&center, r).unwrap(),
            x.ball_count(&[ca], r).unwrap() * y.ball_count(&cb, r).unwrap()
        );
    }

    #[test]
    fn grid_index_matches_brute_force(
        pts in coords(2, 1..=80),
        q in prop::collection::vec(-60.0f64..60.0, 2),
        cell in 0.5f64..20.0,
        radius in 0.0f64..30.0,
    ) {
        let set = set_of(&pts, 100.0);
        let index = build_grid_index(&set, cell).unwrap();
        let got = sorted(index.query_within(&q, radius).unwrap().into_iter().map(<[f64]>::to_vec).collect());
        let want = sorted(set.iter().filter(|p| euclid(p, &q) <= radius).map(<[f64]>::to_vec).collect());
        prop_assert_eq!(got, want);
    }

    #[test]
    fn min_gap_matches_brute_force(pts in coords(2, 2..=40)) {
        let set = set_of(&pts, 100.0);
        prop_assume!(set.len() >= 2);
        let own: Vec<&[f64]> = set.iter().collect();
        let mut best = f64::INFINITY;
        for i in 0..own.len() {
            for j in i + 1..own.len() {
                best = best.min(euclid(own[i], own[j]));
            }
        }
        prop_assert!((set.min_gap().unwrap() - best).abs() <= 1e-12 * best.max(1.0));
    }
}

#[test]
fn single_precision_sets_count_like_double() {
    let values: Vec<f32> = (1..=500).map(|n| (n * n) as f32).collect();
    let set32: PointSet32 = PointSet::from_values(&values).unwrap();
    let set64 = PointSet::from_values(&values.iter().map(|&v| f64::from(v)).collect::<Vec<_>>()).unwrap();
    for r in [0.0, 1.0, 99.5, 1e4, 2.5e5] {
        assert_eq!(set32.ball_count(&[0.0], r as f32).unwrap(), set64.ball_count(&[0.0], r).unwrap());
    }
    let p = Point32::new(vec![3.0, 4.0]).unwrap();
    assert_eq!(distance(p.coords(), &[0.0, 0.0], &Metric::Euclidean).unwrap(), 5.0);
}

#[test]
fn queries_outside_the_sample_are_refused() {
    let set = set_of(&[vec![0.0], vec![1.0]], 10.0);
    assert!(set.ball_count(&[5.0], 6.0).is_err());
    assert!(set.ball_count(&[5.0], 5.0).is_ok());
}
