mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use xorprot::bounds::{bound_conventional, bound_nc};
use xorprot::coding::{select_pairs_fixed, select_pairs_osh, Combo};
use xorprot::model::Instance;
use xorprot::oracle::optimal_matching;
use xorprot::power::{eval_conventional, eval_with_coding};
use xorprot::routing::route_all;

fn instance(seed: u64, n: usize) -> Instance {
    common::random_instance(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn text_round_trip(seed in any::<u64>(), n in 3usize..=7) {
        let inst = instance(seed, n);
        let again = Instance::parse(&inst.to_text()).unwrap();
        prop_assert_eq!(&again, &inst);
    }

    #[test]
    fn routing_is_minimal_and_disjoint(seed in any::<u64>(), n in 3usize..=6) {
        let inst = instance(seed, n);
        let topo = inst.topology();
        let routing = route_all(&inst).unwrap();
        prop_assert_eq!(routing.len(), inst.demands().len());
        for (pair, d) in routing.iter().zip(inst.demands()) {
            pair.validate(topo).unwrap();
            prop_assert_eq!(pair.demand, *d);
            prop_assert!(pair.working.edge_disjoint(&pair.protection));
            prop_assert!(pair.working.hop_count() <= pair.protection.hop_count());
            let h_min = common::bfs_hops(topo, d.source, d.dest);
            prop_assert!(pair.total_hops() >= 2 * h_min);
            prop_assert_eq!(
                Some(pair.total_hops()),
                common::brute_disjoint_total(topo, d.source, d.dest)
            );
        }
    }

    #[test]
    fn power_decomposition(seed in any::<u64>(), n in 3usize..=6) {
        let inst = instance(seed, n);
        let routing = route_all(&inst).unwrap();
        let osh = select_pairs_osh(&inst, &routing, 8).unwrap();
        osh.assignment.validate(&inst, &osh.routing).unwrap();
        let r = eval_with_coding(&inst, &osh.routing, &osh.assignment).unwrap();
        prop_assert!(r.p2_reduction >= 0.0);
        prop_assert!(r.p2_reduction <= r.p1_conventional);
        prop_assert!((r.p_total - (r.p1_conventional - r.p2_reduction)).abs() < 1e-6);
        prop_assert_eq!(r.p1_conventional, eval_conventional(&inst, &osh.routing).unwrap());

        let mut seen = vec![false; inst.demands().len()];
        let k = inst.params().slope();
        for p in osh.assignment.pairs() {
            prop_assert!(!seen[p.d1] && !seen[p.d2]);
            seen[p.d1] = true;
            seen[p.d2] = true;
            let (a, b) = (&inst.demands()[p.d1], &inst.demands()[p.d2]);
            prop_assert_eq!(a.dest, b.dest);
            let expected = k * a.volume.min(b.volume) * p.shared_links.len() as f64;
            prop_assert!((p.benefit - expected).abs() < 1e-6);
        }
    }

    #[test]
    fn power_is_linear_in_volume(seed in any::<u64>(), n in 3usize..=6, v in 1u32..200) {
        let base = instance(seed, n).with_uniform_volume(f64::from(v)).unwrap();
        let doubled = base.with_uniform_volume(f64::from(2 * v)).unwrap();
        let run = |inst: &Instance| {
            let osh = select_pairs_osh(inst, &route_all(inst).unwrap(), 8).unwrap();
            eval_with_coding(inst, &osh.routing, &osh.assignment).unwrap()
        };
        let (a, b) = (run(&base), run(&doubled));
        prop_assert!((2.0 * a.p_total - b.p_total).abs() < 1e-6 * b.p_total.max(1.0));
        prop_assert!((a.savings_fraction - b.savings_fraction).abs() < 1e-12);
    }

    #[test]
    fn bounds_hold(seed in any::<u64>(), n in 3usize..=6) {
        let inst = instance(seed, n);
        let routing = route_all(&inst).unwrap();
        let osh = select_pairs_osh(&inst, &routing, 8).unwrap();
        let r = eval_with_coding(&inst, &osh.routing, &osh.assignment).unwrap();
        let b = bound_nc(&inst, &osh.assignment).unwrap();
        prop_assert_eq!(b.conventional_lower, bound_conventional(&inst).unwrap());
        prop_assert!(b.conventional_lower <= r.p1_conventional + 1e-6);
        prop_assert!(b.nc_lower_pairwise <= r.p_total + 1e-6);
        prop_assert!(b.nc_lower_pairwise <= b.conventional_lower + 1e-6);
        for ((&h, &s), &t) in b.h_min.iter().zip(&b.hat_h).zip(&b.tilde_h) {
            prop_assert_eq!(t, h as f64 - s as f64 / 4.0);
        }
    }

    #[test]
    fn oracle_dominates_fixed_combos(seed in any::<u64>(), n in 3usize..=5) {
        let inst = instance(seed, n);
        let routing = route_all(&inst).unwrap();
        let oracle = optimal_matching(&inst, &routing, &Combo::ALL).unwrap();
        oracle.best_assignment.validate(&inst, &oracle.best_routing).unwrap();
        for combo in Combo::ALL {
            let fixed = select_pairs_fixed(&inst, &routing, combo).unwrap();
            let p = eval_with_coding(&inst, &routing, &fixed).unwrap().p_total;
            prop_assert!(oracle.best_power <= p + 1e-6, "{combo}: {} > {p}", oracle.best_power);
        }
    }
}
