mod common;

use common::*;
use phiconv::bauer::{bauer_witness, common_extremal_maximizer};
use phiconv::convexity::{
    is_between, is_phi_convex, is_strictly_quasiconvex, phi_convex_hull, phi_exposed_points,
    phi_extremal_points,
};
use phiconv::perturb::{genericity_estimate, has_strong_max, perturb_to_unique_max, sample_perturbation};
use phiconv::scenario::parse_scenario;
use phiconv::{
    argmax_set, build_family, rho_inf_distance, segment_member, FamilySpec, IndexSet, PointCloud,
    ScalarField, Tolerances,
};
use proptest::prelude::*;
use rand::Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn finite_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rho_is_a_metric(a in finite_vec(6), b in finite_vec(6), c in finite_vec(6)) {
        let (f, g, h) = (
            ScalarField::new(a).unwrap(),
            ScalarField::new(b).unwrap(),
            ScalarField::new(c).unwrap(),
        );
        let fg = rho_inf_distance(&f, &g).unwrap();
        prop_assert_eq!(fg, rho_inf_distance(&g, &f).unwrap());
        prop_assert_eq!(rho_inf_distance(&f, &f).unwrap(), 0.0);
        prop_assert!((0.0..1.0).contains(&fg));
        let fh = rho_inf_distance(&f, &h).unwrap();
        let gh = rho_inf_distance(&g, &h).unwrap();
        prop_assert!(fh <= fg + gh + 1e-12);
        if f != g {
            prop_assert!(fg > 0.0);
        }
    }

    #[test]
    fn rho_budget_equivalence(a in finite_vec(5), b in finite_vec(5), eps in 0.01f64..0.99) {
        let (f, g) = (ScalarField::new(a.clone()).unwrap(), ScalarField::new(b.clone()).unwrap());
        let sup = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0f64, f64::max);
        let rho = rho_inf_distance(&f, &g).unwrap();
        let budget = eps / (1.0 - eps);
        // skip knife-edge cases where rounding decides both sides
        prop_assume!((sup - budget).abs() > 1e-12 * budget.max(1.0));
        prop_assert_eq!(rho <= eps, sup <= budget);
    }

    #[test]
    fn argmax_attains_max(v in finite_vec(7), mask in prop::collection::vec(any::<bool>(), 7)) {
        let f = ScalarField::new(v).unwrap();
        let mut dom: Vec<usize> = (0..7).filter(|&i| mask[i]).collect();
        if dom.is_empty() {
            dom.push(0);
        }
        let dom = IndexSet::from(dom);
        let m = argmax_set(&f, &dom, &tol()).unwrap();
        prop_assert!(!m.is_empty());
        prop_assert!(m.is_subset(&dom));
        for &i in m.iter() {
            for &j in dom.iter() {
                prop_assert!(f[i] >= f[j] - 1e-9);
            }
        }
    }

    #[test]
    fn segment_member_symmetry(a in finite_vec(2), x in finite_vec(2), y in finite_vec(2)) {
        let t = tol();
        prop_assert_eq!(
            segment_member(&a, &x, &y, &t).unwrap(),
            segment_member(&a, &y, &x, &t).unwrap()
        );
        prop_assert!(segment_member(&x, &x, &y, &t).unwrap());
        prop_assert!(segment_member(&y, &x, &y, &t).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn affine_betweenness_is_segment_membership(seed in any::<u64>(), n in 4usize..14) {
        let mut r = rng(seed);
        let cloud = random_cloud_2d(&mut r, n);
        let fam = build_family(&FamilySpec::Affine, &cloud).unwrap();
        for _ in 0..60 {
            let a = r.random_range(0..n);
            let x = r.random_range(0..n);
            let y = r.random_range(0..n);
            if a == x || a == y {
                continue;
            }
            let lp = is_between(a, x, y, &fam, &tol()).unwrap();
            prop_assert!(lp.replay((a, x, y), &fam, &tol()));
            let geo = segment_member(cloud.point(a), cloud.point(x), cloud.point(y), &tol()).unwrap();
            prop_assert_eq!(lp.is_between(), geo, "triple ({}, {}, {})", a, x, y);
        }
    }

    #[test]
    fn exposed_within_extremal(seed in any::<u64>(), n in 3usize..12, kind in 0usize..3) {
        let mut r = rng(seed);
        let cloud = random_cloud_2d(&mut r, n);
        let spec = match kind {
            0 => FamilySpec::Affine,
            1 => FamilySpec::Polynomial { degree: 2 },
            _ => FamilySpec::Lipschitz { basepoint: r.random_range(0..n), full: false },
        };
        let Ok(fam) = build_family(&spec, &cloud) else {
            // rank-deficient polynomial families are reported, not built
            return Ok(());
        };
        let dom = cloud.full_domain();
        let exposed = phi_exposed_points(&dom, &fam, &tol()).unwrap();
        let ext = phi_extremal_points(&dom, &fam, &tol()).unwrap();
        prop_assert!(exposed.points().is_subset(&ext));
        if exposed.non_separating.is_none() {
            prop_assert!(!exposed.certificates.is_empty());
        }
        for c in &exposed.certificates {
            prop_assert!(c.replay(&dom, &fam, &tol()));
        }
    }

    #[test]
    fn hull_is_a_closure(seed in any::<u64>(), n in 4usize..12) {
        let mut r = rng(seed);
        let cloud = random_cloud_2d(&mut r, n);
        let fam = build_family(&FamilySpec::Affine, &cloud).unwrap();
        let dom = cloud.full_domain();
        let a = IndexSet::from(random_subset(&mut r, n));
        let h = phi_convex_hull(&a, &dom, &fam, &tol()).unwrap();
        prop_assert!(a.is_subset(&h));
        prop_assert_eq!(phi_convex_hull(&h, &dom, &fam, &tol()).unwrap(), h.clone());
        let bigger: IndexSet = a.iter().copied().chain(random_subset(&mut r, n)).collect();
        prop_assert!(h.is_subset(&phi_convex_hull(&bigger, &dom, &fam, &tol()).unwrap()));
    }

    #[test]
    fn affine_stability_of_convexity(seed in any::<u64>(), n in 4usize..12) {
        let mut r = rng(seed);
        let cloud = random_cloud_2d(&mut r, n);
        let fam = build_family(&FamilySpec::Affine, &cloud).unwrap();
        let dom = cloud.full_domain();
        let f = quadratic(&cloud, random_psd(&mut r), [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)]);
        prop_assert!(is_phi_convex(&f, &dom, &fam, &tol()).unwrap().holds);
        let c: Vec<f64> = (0..fam.dim()).map(|_| r.random_range(-2.0..2.0)).collect();
        let g = f.add(&fam.evaluate(&c).unwrap()).unwrap();
        prop_assert!(is_phi_convex(&g, &dom, &fam, &tol()).unwrap().holds);
    }

    #[test]
    fn strictly_quasiconvex_fields_are_affine_convex(seed in any::<u64>(), n in 4usize..12) {
        let mut r = rng(seed);
        let cloud = random_cloud_2d(&mut r, n);
        let fam = build_family(&FamilySpec::Affine, &cloud).unwrap();
        let centre = [r.random::<f64>(), r.random::<f64>()];
        // distance to a point is strictly quasi-convex except along rays through it
        let f = field(&cloud, |p| ((p[0] - centre[0]).powi(2) + (p[1] - centre[1]).powi(2)).sqrt());
        if is_strictly_quasiconvex(&f, &cloud, &tol()).unwrap().holds {
            prop_assert!(is_phi_convex(&f, &cloud.full_domain(), &fam, &tol()).unwrap().holds);
        }
        let noise: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let g = ScalarField::new(noise).unwrap();
        if is_strictly_quasiconvex(&g, &cloud, &tol()).unwrap().holds {
            prop_assert!(is_phi_convex(&g, &cloud.full_domain(), &fam, &tol()).unwrap().holds);
        }
    }

    #[test]
    fn bauer_and_single_common_max_agree(seed in any::<u64>(), n in 4usize..14) {
        let mut r = rng(seed);
        let cloud = random_cloud_2d(&mut r, n);
        let fam = build_family(&FamilySpec::Affine, &cloud).unwrap();
        let dom = cloud.full_domain();
        let f = quadratic(&cloud, random_psd(&mut r), [r.random_range(-1.0..1.0), 0.0]);
        let w = bauer_witness(&f, &dom, &fam, &tol(), true).unwrap();
        prop_assert!(w.replay(std::slice::from_ref(&f), &dom, &fam, &tol()).unwrap());
        let v = common_extremal_maximizer(std::slice::from_ref(&f), &dom, &fam, &tol(), true).unwrap();
        prop_assert_eq!(w, v);
    }

    #[test]
    fn perturbation_invariants(seed in any::<u64>(), n in 4usize..12, eps in 0.01f64..0.9) {
        let mut r = rng(seed);
        let cloud = random_cloud_2d(&mut r, n);
        let fam = build_family(&FamilySpec::Affine, &cloud).unwrap();
        let dom = cloud.full_domain();
        // convex field with a whole face of maximizers: a max of affine maps, flattened
        let f = field(&cloud, |p| p[0].max(0.5));
        let res = perturb_to_unique_max(&f, &dom, &fam, eps, &tol()).unwrap();
        prop_assert!(res.rho_distance < eps);
        prop_assert!(res.gap >= 1e-9);
        let ext = phi_extremal_points(&dom, &fam, &tol()).unwrap();
        prop_assert!(ext.contains(res.unique_point));

        let g = f.add(&fam.evaluate(&res.coefficients).unwrap()).unwrap();
        let nearest = dom
            .iter()
            .filter(|&&q| q != res.unique_point)
            .map(|&q| cloud.distance(q, res.unique_point))
            .fold(f64::INFINITY, f64::min);
        let n0 = (1.0 / nearest).floor() as u32 + 1;
        for k in n0..n0 + 5 {
            prop_assert_eq!(has_strong_max(&g, &dom, k, &cloud, &tol()).unwrap(), Some(res.unique_point));
        }
    }

    #[test]
    fn strong_max_sets_shrink_as_n_grows(seed in any::<u64>(), n in 3usize..10) {
        let mut r = rng(seed);
        let cloud = random_cloud_2d(&mut r, n);
        let dom = cloud.full_domain();
        let vals: Vec<f64> = (0..n).map(|_| f64::from(r.random_range(0..4u32))).collect();
        let f = ScalarField::new(vals).unwrap();
        // a larger n means a smaller radius and a larger far set, so O_{n+1} ⊆ O_n
        for k in 2..16u32 {
            if has_strong_max(&f, &dom, k, &cloud, &tol()).unwrap().is_some() {
                for k2 in 1..k {
                    prop_assert!(has_strong_max(&f, &dom, k2, &cloud, &tol()).unwrap().is_some());
                }
            }
        }
    }

    #[test]
    fn sampler_respects_budget(seed in any::<u64>(), eps in 0.001f64..0.999, basepoint in 0usize..6) {
        let mut r = rng(seed);
        let cloud = random_cloud_2d(&mut r, 6);
        let zero = ScalarField::constant(6, 0.0).unwrap();
        for spec in [FamilySpec::Affine, FamilySpec::Lipschitz { basepoint, full: false }] {
            let fam = build_family(&spec, &cloud).unwrap();
            for k in 0..20 {
                let c = sample_perturbation(&fam, eps, seed, k);
                let phi = fam.evaluate(&c).unwrap();
                prop_assert!(rho_inf_distance(&phi, &zero).unwrap() <= eps + 1e-12);
            }
        }
    }

    #[test]
    fn scenario_round_trip(
        seed in any::<u64>(),
        n in 3usize..8,
        eps in 0.001f64..0.999,
        samples in 1usize..5000,
        check in any::<bool>(),
        values in finite_vec(8),
    ) {
        let mut r = rng(seed);
        let cloud = generic_cloud_2d(&mut r, n);
        let points = serde_json::to_string(cloud.points()).unwrap();
        let values = serde_json::to_string(&values[..n]).unwrap();
        let text = format!(
            r#"{{"task":"genericity","params":{{"epsilon":{eps},"samples":{samples},"seed":{seed}}},
                "cloud":{{"points":{points}}},"family":{{"kind":"lipschitz","basepoint":{}}},
                "functions":[{{"kind":"values","values":{values}}}],"checkConvexity":{check},
                "tolerances":{{"uniqueGap":1e-7}}}}"#,
            n - 1
        );
        let cfg = parse_scenario(text.as_bytes()).unwrap();
        let again = parse_scenario(cfg.to_json().as_bytes()).unwrap();
        prop_assert_eq!(cfg, again);
    }
}

#[test]
fn genericity_is_order_independent() {
    let cloud = PointCloud::new(vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 1.0],
        vec![0.5, 0.5],
    ])
    .unwrap();
    let fam = build_family(&FamilySpec::Affine, &cloud).unwrap();
    let dom = cloud.full_domain();
    let f = ScalarField::constant(5, 0.0).unwrap();
    let full = genericity_estimate(&f, &dom, &fam, 0.1, 300, 9, &tol(), true).unwrap();
    // any sub-run sees exactly the same per-sample outcomes
    let prefix = genericity_estimate(&f, &dom, &fam, 0.1, 120, 9, &tol(), true).unwrap();
    assert_eq!(&full.outcomes[..120], &prefix.outcomes[..]);
    let again = genericity_estimate(&f, &dom, &fam, 0.1, 300, 9, &tol(), true).unwrap();
    assert_eq!(full, again);
}

#[test]
fn strong_max_can_be_lost_when_n_grows() {
    // two equal maxima 0.5 apart: vacuous at n = 1, impossible at n = 3
    let cloud = PointCloud::new(vec![vec![0.0], vec![0.5]]).unwrap();
    let f = ScalarField::constant(2, 1.0).unwrap();
    let dom = cloud.full_domain();
    assert_eq!(has_strong_max(&f, &dom, 1, &cloud, &tol()).unwrap(), Some(0));
    assert_eq!(has_strong_max(&f, &dom, 3, &cloud, &tol()).unwrap(), None);
}
