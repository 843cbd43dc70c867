mod common;

use common::{is_partition, problem};
use hfvrp::search::{apply, evaluate, feasibility, for_each_move, local_search, violation, SearchConfig};
use hfvrp::solution::{check_feasibility, is_feasible, solution_distance, total_cost, validate};
use hfvrp::{Problem, Solution};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Customers shuffled into `k` routes of random types; capacities may break.
fn random_solution(p: &Problem, k: usize, seed: u64) -> Solution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (1..=p.n()).collect();
    order.shuffle(&mut rng);
    let k = k.clamp(1, p.n());
    let mut routes: Vec<(usize, Vec<usize>)> = (0..k).map(|_| (rng.gen_range(0..p.fleet_size()), Vec::new())).collect();
    for (i, v) in order.into_iter().enumerate() {
        let r = if i < k { i } else { rng.gen_range(0..k) };
        routes[r].1.push(v);
    }
    Solution::from_routes(p, routes)
}

fn setup() -> impl Strategy<Value = (Problem, Solution, u64)> {
    (3usize..20, 1usize..4, 0usize..5, 1usize..6, any::<u64>()).prop_map(|(n, h, v, k, seed)| {
        let p = problem(n, h, common::variant(v), seed);
        let s = random_solution(&p, k, seed ^ 0x5eed);
        (p, s, seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distance_is_a_pseudometric((p, a, seed) in setup(), k1 in 1usize..6, k2 in 1usize..6) {
        let b = random_solution(&p, k1, seed.wrapping_add(1));
        let c = random_solution(&p, k2, seed.wrapping_add(2));
        prop_assert_eq!(solution_distance(&a, &a), 0);
        prop_assert_eq!(solution_distance(&a, &b), solution_distance(&b, &a));
        prop_assert!(solution_distance(&a, &c) <= solution_distance(&a, &b) + solution_distance(&b, &c));
    }

    #[test]
    fn delta_matches_applied_change((p, s, seed) in setup()) {
        let config = SearchConfig { intra_route: true };
        let mut moves = Vec::new();
        for_each_move(&s, &p, config, |mv| moves.push(mv));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        moves.shuffle(&mut rng);
        let before_over = check_feasibility(&s, &p).total_overload() as i64;
        for mv in moves.into_iter().take(40) {
            let delta = evaluate(&s, &p, &mv);
            let mut t = s.clone();
            apply(&mut t, &p, &mv);
            prop_assert!(is_partition(&t, p.n()));
            let exact = total_cost(&t, &p);
            prop_assert!((t.cost() - exact).abs() < 1e-6);
            prop_assert!((exact - s.cost() - delta.cost).abs() < 1e-6, "{:?}", mv);
            let after_over = check_feasibility(&t, &p).total_overload() as i64;
            prop_assert_eq!(after_over - before_over, delta.violation);
        }
    }

    #[test]
    fn local_search_reaches_a_local_optimum((p, s, _) in setup()) {
        let feasible_before = check_feasibility(&s, &p).total_overload() == 0;
        let mut t = s.clone();
        local_search(&mut t, &p, SearchConfig::default());
        prop_assert!(is_partition(&t, p.n()));
        prop_assert!((t.cost() - total_cost(&t, &p)).abs() < 1e-6);
        if feasible_before {
            prop_assert!(t.cost() <= s.cost() + 1e-9);
            prop_assert_eq!(check_feasibility(&t, &p).total_overload(), 0);
        }
        let mut improving = 0;
        for_each_move(&t, &p, SearchConfig::default(), |mv| {
            let d = evaluate(&t, &p, &mv);
            if d.capacity_ok && d.cost < -1e-6 {
                improving += 1;
            }
        });
        prop_assert_eq!(improving, 0);
    }

    #[test]
    fn feasibility_never_loses_customers((p, s, seed) in setup()) {
        let mut t = s.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let before = violation(&s, &p);
        feasibility(&mut t, &p, SearchConfig::default(), &mut rng);
        prop_assert!(is_partition(&t, p.n()));
        prop_assert!((t.cost() - total_cost(&t, &p)).abs() < 1e-6);
        let after = violation(&t, &p);
        prop_assert!(after <= before);
        if after == 0 {
            prop_assert!(is_feasible(&t, &p));
            prop_assert!(validate(&t, &p).is_empty());
        }
    }

    #[test]
    fn remove_and_insert_keep_caches((p, s, seed) in setup()) {
        let mut t = s.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let v = rng.gen_range(1..=p.n());
            t.remove(&p, v);
            let r = rng.gen_range(0..t.num_routes());
            let gap = rng.gen_range(0..=t.route(r).len());
            t.insert(&p, v, r, gap);
            prop_assert_eq!(t.place(v).map(|(rr, _)| rr), Some(r));
            prop_assert!((t.cost() - total_cost(&t, &p)).abs() < 1e-6);
        }
        prop_assert!(is_partition(&t, p.n()));
    }
}
