use proptest::prelude::*;
use zetadim::Error;
use zetadim::geometry::{Point, PointSet};
use zetadim::patches::{
    completeness_epsilon, find_patch, make_patch, read_witness, standard_orientation, verify_patch, write_witness,
    ArithmeticPatch, PatchQuery,
};
use zetadim::generators::PointFormat;
use zetadim_validation::{ap_oracle_1d, euclid, ApRegion};

fn rotation(theta: f64) -> Vec<Vec<f64>> {
    vec![vec![theta.cos(), theta.sin()], vec![-theta.sin(), theta.cos()]]
}

fn patch(t: &[f64], delta: f64, e: Vec<Vec<f64>>, k: usize) -> ArithmeticPatch<f64> {
    ArithmeticPatch::new(Point::new(t.to_vec()).unwrap(), delta, e, k).unwrap()
}

fn values(v: &[f64], radius: f64) -> PointSet<f64> {
    PointSet::from_values(v).unwrap().with_sample_radius(radius).unwrap()
}

proptest! {
    #[test]
    fn patches_verify_against_themselves(
        t in prop::collection::vec(-100.0f64..100.0, 2),
        delta in 0.01f64..50.0,
        theta in 0.0f64..6.3,
        k in 2usize..6,
        m in 1usize..=2,
        eps in 0.0f64..1.0,
    ) {
        let e: Vec<Vec<f64>> = rotation(theta).into_iter().take(m).collect();
        let pts = make_patch(&t, delta, &e, k).unwrap();
        prop_assert_eq!(pts.len(), k.pow(m as u32));
        let q: Vec<&[f64]> = pts.iter().map(|p| p.coords()).collect();
        prop_assert!(verify_patch(&q, &patch(&t, delta, e, k), eps));
    }

    #[test]
    fn perturbation_closure(
        t in -100.0f64..100.0,
        delta in 0.5f64..20.0,
        k in 3usize..7,
        eps in 0.01f64..0.45,
        shifts in prop::collection::vec(-1.0f64..1.0, 7),
        victim in 0usize..7,
    ) {
        let p = patch(&[t], delta, vec![vec![1.0]], k);
        let slack = 0.99 * eps * delta;
        let moved: Vec<Vec<f64>> = p.points().iter().zip(&shifts).map(|(x, s)| vec![x[0] + s * slack]).collect();
        let q: Vec<&[f64]> = moved.iter().map(Vec::as_slice).collect();
        prop_assert!(verify_patch(&q, &p, eps));
        // pushing one representative far away strands its target
        let victim = victim % k;
        let mut broken = moved.clone();
        broken[victim][0] += 1e3 * delta;
        let q: Vec<&[f64]> = broken.iter().map(Vec::as_slice).collect();
        prop_assert!(!verify_patch(&q, &p, eps));
    }

    #[test]
    fn search_is_sound(
        raw in prop::collection::btree_set(-150i32..150, 3..40),
        k in 3usize..5,
        eps in prop::sample::select(vec![0.0, 0.05, 0.2, 0.4]),
    ) {
        let v: Vec<f64> = raw.iter().map(|&x| f64::from(x)).collect();
        let set = values(&v, 400.0);
        let res = find_patch(&set, &PatchQuery::standard(k, eps, 1, 1));
        if v.len() < k {
            let too_few = matches!(res, Err(Error::TooFewPoints { .. }));
            prop_assert!(too_few);
            return Ok(());
        }
        let rep = res.unwrap();
        prop_assert_eq!(rep.found, rep.witness.is_some());
        if let Some(w) = rep.witness {
            prop_assert!(w.verify());
            prop_assert_eq!(w.q.len(), k);
            prop_assert!(w.q.iter().all(|q| v.contains(&q[0])));
            let tol = eps * w.patch.delta;
            prop_assert!(w.patch.points().iter().all(|x| w.q.iter().any(|y| euclid(x, y) <= tol)));
        }
    }

    #[test]
    fn search_is_complete_against_the_exhaustive_oracle(
        raw in prop::collection::btree_set(-200i32..200, 3..50),
        jitter in prop::collection::vec(-0.3f64..0.3, 50),
        eps in prop::sample::select(vec![0.0, 0.02, 0.05, 0.1]),
    ) {
        let k = 3;
        let v: Vec<f64> = raw.iter().zip(&jitter).map(|(&x, j)| f64::from(x) + j).collect();
        let set = values(&v, 1000.0);
        let sep = set.separation().unwrap();
        let region = ApRegion { radius: 600.0, delta_min: sep, delta_max: 400.0 };
        let truth = ap_oracle_1d(&v, k, eps, region);
        let loose = completeness_epsilon(eps, k, 1, 1.1);
        prop_assert!(loose < 1.0);
        let found = find_patch(&set, &PatchQuery::standard(k, loose, 1, 1)).unwrap().found;
        if let Some((t, d)) = truth {
            prop_assert!(found, "oracle AP t={} Δ={} at ε={} missed at ε'={}", t, d, eps, loose);
        }
        // soundness against the oracle at the same tolerance
        let strict = find_patch(&set, &PatchQuery::standard(k, eps, 1, 1)).unwrap();
        if strict.found {
            let wide = ApRegion { radius: 1000.0, delta_min: sep / 2.0, delta_max: 1000.0 };
            prop_assert!(ap_oracle_1d(&v, k, eps, wide).is_some());
        }
    }
}

#[test]
fn exact_planar_patches_in_the_lattice() {
    let pts: Vec<Point<f64>> = (-10..=10)
        .flat_map(|x| (-10..=10).map(move |y| Point::new(vec![f64::from(x), f64::from(y)]).unwrap()))
        .collect();
    let set = PointSet::from_points(&pts).unwrap();
    let rep = find_patch(&set, &PatchQuery::standard(4, 0.0, 2, 2)).unwrap();
    let w = rep.witness.expect("lattice contains a 4×4 grid");
    assert_eq!(w.q.len(), 16);
    assert!(w.verify());
    assert_eq!(w.padded, 0);
}

#[test]
fn witnesses_survive_a_file_round_trip() {
    let set = values(&[2.0, 3.0, 5.0, 7.0, 11.0, 13.0], 20.0);
    let w = find_patch(&set, &PatchQuery::standard(3, 0.1, 1, 1)).unwrap().witness.unwrap();
    for format in [PointFormat::Csv, PointFormat::JsonLines] {
        let mut buf = Vec::new();
        write_witness(&mut buf, &w, format).unwrap();
        let back = read_witness::<f64, _>(buf.as_slice(), format).unwrap();
        assert_eq!(back.patch, w.patch);
        assert_eq!(back.q, w.q);
        assert!(back.verify());
    }
}

#[test]
fn absent_patch_is_reported() {
    let set = values(&[1.0, 10.0, 100.0, 1000.0], 1000.0);
    let rep = find_patch(&set, &PatchQuery::new(3, 0.01, standard_orientation(1, 1))).unwrap();
    assert!(!rep.found);
    assert!(rep.witness.is_none());
    let region = ApRegion { radius: 1000.0, delta_min: 1.0, delta_max: 500.0 };
    assert!(ap_oracle_1d(&[1.0, 10.0, 100.0, 1000.0], 3, 0.01, region).is_none());
}
