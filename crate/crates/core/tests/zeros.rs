mod common;

use common::{c, dd_sum};
use proptest::prelude::*;
use zerofree::quadrature::integrate;
use zerofree::zeros::{blaschke_condition, check_separation, make_zero_set};
use zerofree::{RateFunction, SeparationParams, ZeroSet};

fn raw_strategy() -> impl Strategy<Value = Vec<(f64, f64, u128)>> {
    prop::collection::vec((-50.0f64..50.0, 0.01f64..20.0, 1u128..5), 0..60)
}

proptest! {
    #[test]
    fn total_multiplicity_is_preserved(raw in raw_strategy()) {
        let zs = make_zero_set(raw.iter().map(|&(x, y, m)| (c(x, y), m))).unwrap();
        prop_assert_eq!(zs.total_multiplicity(), raw.iter().map(|r| r.2).sum::<u128>());
        prop_assert_eq!(zs.union(&ZeroSet::empty()), zs.clone());
        let json = serde_json::to_string(&zs).unwrap();
        prop_assert_eq!(serde_json::from_str::<ZeroSet>(&json).unwrap(), zs);
    }

    #[test]
    fn blaschke_condition_matches_double_double(raw in raw_strategy()) {
        let zs = make_zero_set(raw.iter().map(|&(x, y, m)| (c(x, y), m))).unwrap();
        let oracle = dd_sum(raw.iter().map(|&(x, y, m)| m as f64 * y / (1.0 + x * x + y * y)));
        prop_assert!((blaschke_condition(&zs) - oracle).abs() <= 1e-14 * oracle.max(1e-300));
    }

    #[test]
    fn separation_matches_all_pairs(raw in prop::collection::vec((-10.0f64..10.0, 0.01f64..3.0), 0..40), k in 0.2f64..3.0, cs in 0.1f64..2.0) {
        let zs = make_zero_set(raw.iter().map(|&(x, y)| (c(x, y), 1))).unwrap();
        let p = SeparationParams::new(k, cs).unwrap();
        let pts: Vec<_> = zs.entries().iter().map(|e| e.position).filter(|&z| p.in_sector(z)).collect();
        let mut brute = 0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if (pts[i] - pts[j]).norm() < cs * (pts[i].norm() + pts[j].norm()).powf(-0.25) {
                    brute += 1;
                }
            }
        }
        prop_assert_eq!(check_separation(&zs, &p).len(), brute);
    }

    #[test]
    fn rate_catalogue_round_trips(p in 0.1f64..4.0) {
        let rho = RateFunction::reciprocal_power(p).unwrap();
        let back: RateFunction = rho.to_string().parse().unwrap();
        prop_assert_eq!(back.eval(7.5).unwrap(), rho.eval(7.5).unwrap());
    }
}

#[test]
fn quadrature_against_closed_forms() {
    let r = integrate(|x: f64| x.exp(), 0.0, 3.0, 1e-12, 1000).unwrap();
    assert!((r.value - (3f64.exp() - 1.0)).abs() < 1e-11);
    let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 4.0, 1e-9, 20_000).unwrap();
    assert!((r.value - 4.0).abs() < 1e-8);
}
