mod common;

use common::{is_partition, problem};
use hfvrp::engine::{format_trace, Ails, TRACE_HEADER};
use hfvrp::oracle::exact_solve;
use hfvrp::solution::{is_feasible, total_cost, validate};
use hfvrp::{run_many, solve, Params};
use proptest::prelude::*;

fn quick(seed: u64) -> Params {
    Params { max_no_improve: 300, seed, ..Params::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_bounds_the_engine(n in 1usize..7, h in 1usize..4, v in 0usize..5, seed in any::<u64>()) {
        let p = problem(n, h, common::variant(v), seed);
        let (opt, sol) = exact_solve(&p).unwrap();
        prop_assert!(is_feasible(&sol, &p));
        prop_assert!(validate(&sol, &p).is_empty());
        prop_assert!((total_cost(&sol, &p) - opt).abs() < 1e-9);
        let run = solve(&p, &quick(seed)).unwrap();
        prop_assert!(is_feasible(&run.best_solution, &p));
        prop_assert!(run.best_cost >= opt - 1e-6, "engine {} below optimum {}", run.best_cost, opt);
    }
}

#[test]
fn steps_keep_invariants() {
    let p = problem(40, 3, hfvrp::Variant::Hvrpfd, 11);
    let mut ails = Ails::new(&p, quick(3)).unwrap();
    let mut best = ails.best().cost();
    for _ in 0..300 {
        let rec = ails.step().unwrap();
        assert!(rec.best_cost <= best);
        best = rec.best_cost;
        for s in [ails.reference(), ails.best(), ails.current()] {
            assert!(is_partition(s, p.n()));
            assert!(is_feasible(s, &p));
            assert!((s.cost() - total_cost(s, &p)).abs() < 1e-6);
        }
        assert!(ails.stats().iter().all(|st| (1..=p.n()).contains(&st.omega())));
    }
}

#[test]
fn runs_are_reproducible() {
    let p = problem(25, 2, hfvrp::Variant::Fsmfd, 5);
    let params = Params { max_iterations: Some(200), trace: true, ..quick(9) };
    let a = solve(&p, &params).unwrap();
    let b = solve(&p, &params).unwrap();
    assert_eq!(a.best_cost, b.best_cost);
    let (ta, tb) = (format_trace(a.trace.as_ref().unwrap()), format_trace(b.trace.as_ref().unwrap()));
    assert_eq!(ta, tb);
    assert!(ta.starts_with(TRACE_HEADER));
    assert_eq!(ta.lines().count(), 201);

    let many = run_many(&p, &params, 3).unwrap();
    assert_eq!(many.runs.len(), 3);
    assert_eq!(many.runs[0].best_cost, a.best_cost);
    assert!(many.best <= many.avg + 1e-9);
}

#[test]
fn bad_parameters_are_rejected() {
    let p = problem(5, 2, hfvrp::Variant::Fsmd, 1);
    for params in [
        Params { alpha: 1.5, ..Params::default() },
        Params { eta: -0.1, ..Params::default() },
        Params { gamma: 0, ..Params::default() },
        Params { d_beta: 0.0, ..Params::default() },
    ] {
        assert!(solve(&p, &params).is_err());
    }
}
