use proptest::prelude::*;

use hypercut::density::{density_condition_check, BudgetEntry, EigenvalueBudget, M_of_p};
use hypercut::geometry::{mobius_apply, sphere_point};
use hypercut::modular::{in_fundamental_domain, reduce_fundamental};
use hypercut::torus::{torus_l1, sandwich, TorusConfig};
use hypercut::{distance, MobiusReal, PointH};

fn point() -> impl Strategy<Value = PointH> {
    (-5.0..5.0f64, -4.0..4.0f64).prop_map(|(x, ly)| PointH::new(x, ly.exp()).unwrap())
}

proptest! {
    #[test]
    fn distance_is_a_metric(a in point(), b in point(), c in point()) {
        let (ab, ba) = (distance(&a, &b), distance(&b, &a));
        prop_assert!((ab - ba).abs() <= 1e-12 * (1.0 + ab));
        prop_assert!(distance(&a, &c) <= ab + distance(&b, &c) + 1e-9);
        prop_assert_eq!(distance(&a, &a), 0.0);
    }

    #[test]
    fn mobius_maps_are_isometries(a in point(), b in point(), m in (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)) {
        let (p, q, r) = m;
        prop_assume!(p.abs() > 0.1);
        // det = p s - q r = 1
        let g = MobiusReal::new(p, q, r, (1.0 + q * r) / p).unwrap();
        let d = distance(&a, &b);
        let gd = distance(&mobius_apply(&g, &a).unwrap(), &mobius_apply(&g, &b).unwrap());
        prop_assert!((d - gd).abs() <= 1e-7 * (1.0 + d), "{} vs {}", d, gd);
    }

    #[test]
    fn circles_have_their_radius(z in point(), r in 0.0..20.0f64, theta in 0.0..std::f64::consts::PI) {
        let p = sphere_point(&z, r, theta).unwrap();
        prop_assert!((distance(&z, &p) - r).abs() <= 1e-8 * (1.0 + r));
    }

    #[test]
    fn reduction_lands_in_the_domain(z in point()) {
        let (w, g) = reduce_fundamental(&z).unwrap();
        prop_assert!(in_fundamental_domain(&w));
        let gz = g.apply(&z).unwrap();
        prop_assert!(distance(&gz, &w) <= 1e-8);
    }

    #[test]
    fn budget_counts_are_monotone(entries in prop::collection::vec((2.01..20.0f64, 1u64..50), 0..8), p in 2.0..25.0f64) {
        let b = EigenvalueBudget::new(1e4, entries.iter().map(|&(p, m)| BudgetEntry { p, m }).collect(), "random").unwrap();
        prop_assert!(M_of_p(&b, p) >= M_of_p(&b, p + 0.5));
        prop_assert_eq!(M_of_p(&b, 2.0), b.total());
        let pass = density_condition_check(&b, 1.0, 0.1, 1.0).unwrap().pass;
        for i in 0..b.entries().len() {
            // removing entries never breaks the condition
            prop_assert!(!pass || density_condition_check(&b.without(i), 1.0, 0.1, 1.0).unwrap().pass);
        }
    }

    #[test]
    fn torus_distance_sits_in_its_sandwich(lambda in 0.1..200.0f64, a in 0.05..8.0f64) {
        let cfg = TorusConfig::new(lambda, a * lambda).unwrap();
        let l1 = torus_l1(&cfg).unwrap();
        let (lo, hi) = sandwich(a);
        prop_assert!(lo <= l1 * (1.0 + 1e-9) && l1 <= hi * (1.0 + 1e-9), "{} {} {}", lo, l1, hi);
    }
}
