//! The adaptive iterated local search loop and multi-run bookkeeping.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::adapt::{AcceptState, HeuristicStats};
use crate::construct::build_initial;
use crate::error::{Error, Result};
use crate::model::{Instance, Problem};
use crate::perturb::{perturb, RemovalKind};
use crate::search::{feasibility, local_search, SearchConfig};
use crate::solution::{is_feasible, solution_distance, total_cost, Solution};

/// Perturb-and-repair attempts per iteration before the run is aborted.
pub const MAX_RETRIES: usize = 1000;

/// Smallest decrease of the best cost that resets the stopping counter.
pub const IMPROVEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct Params {
    /// Probability of the route-count and fleet mutations.
    pub alpha: f64,
    /// Target solution distance per perturbation.
    pub d_beta: f64,
    /// Acceptance threshold position between best and average.
    pub eta: f64,
    /// Uses of a removal heuristic between degree adjustments. Also the
    /// acceptance window length.
    pub gamma: usize,
    /// Neighbor list size.
    pub phi: usize,
    /// Stop after this many iterations without improving the best solution.
    pub max_no_improve: usize,
    pub seed: u64,
    pub time_limit: Option<Duration>,
    /// Hard cap on iterations, mostly for tests.
    pub max_iterations: Option<usize>,
    pub search: SearchConfig,
    /// Keep one record per iteration.
    pub trace: bool,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            alpha: 0.4,
            d_beta: 15.0,
            eta: 0.2,
            gamma: 20,
            phi: 20,
            max_no_improve: 40_000,
            seed: 0,
            time_limit: None,
            max_iterations: None,
            search: SearchConfig::default(),
            trace: false,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Parameter(format!("alpha {} outside [0, 1]", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::Parameter(format!("eta {} outside [0, 1]", self.eta)));
        }
        if !(self.d_beta > 0.0 && self.d_beta.is_finite()) {
            return Err(Error::Parameter(format!("d_beta {} must be positive", self.d_beta)));
        }
        if self.gamma == 0 {
            return Err(Error::Parameter("gamma must be positive".into()));
        }
        if self.phi == 0 {
            return Err(Error::Parameter("phi must be positive".into()));
        }
        Ok(())
    }
}

/// What happened in one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub cost: f64,
    pub best_cost: f64,
    pub heuristic: RemovalKind,
    pub omega: usize,
    pub accepted: bool,
}

impl IterationRecord {
    pub fn trace_line(&self) -> String {
        format!(
            "{},{:.6},{:.6},{},{},{}",
            self.iteration,
            self.cost,
            self.best_cost,
            self.heuristic,
            self.omega,
            u8::from(self.accepted)
        )
    }
}

pub const TRACE_HEADER: &str = "iter,f(s),f(s*),heuristic,omega,accepted";

pub fn format_trace(records: &[IterationRecord]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{}", r.trace_line());
    }
    out
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub best_solution: Solution,
    pub best_cost: f64,
    pub iterations: usize,
    /// Wall-clock seconds.
    pub time: f64,
    pub trace: Option<Vec<IterationRecord>>,
}

/// Cheapest single route for a one-customer instance.
fn single_customer(problem: &Problem) -> Solution {
    let best = (0..problem.fleet_size())
        .filter(|&t| problem.vehicle(t).capacity >= problem.demand(1))
        .map(|t| Solution::from_routes(problem, vec![(t, vec![1])]))
        .min_by(|a, b| a.cost().total_cmp(&b.cost()))
        .expect("instance validation guarantees an adequate type");
    best
}

/// A run advanced one iteration at a time.
pub struct Ails<'a> {
    problem: &'a Problem,
    params: Params,
    rng: ChaCha8Rng,
    reference: Solution,
    best: Solution,
    current: Solution,
    stats: [HeuristicStats; 3],
    accept: AcceptState,
    iteration: usize,
    since_improvement: usize,
    started: Instant,
}

impl<'a> Ails<'a> {
    /// Builds and locally optimizes the initial solution.
    pub fn new(problem: &'a Problem, params: Params) -> Result<Self> {
        params.validate()?;
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let initial = if problem.n() == 1 {
            single_customer(problem)
        } else {
            let mut s = build_initial(problem, params.search, &mut rng)?;
            local_search(&mut s, problem, params.search);
            s
        };
        let omega = params.d_beta.min(problem.n() as f64);
        let mut accept = AcceptState::new(params.eta, params.gamma);
        accept.update_average(initial.cost());
        Ok(Self {
            problem,
            rng,
            reference: initial.clone(),
            best: initial.clone(),
            current: initial,
            stats: std::array::from_fn(|_| HeuristicStats::new(omega)),
            accept,
            iteration: 0,
            since_improvement: 0,
            started,
            params,
        })
    }

    pub fn reference(&self) -> &Solution {
        &self.reference
    }

    pub fn best(&self) -> &Solution {
        &self.best
    }

    /// Local optimum produced by the latest iteration.
    pub fn current(&self) -> &Solution {
        &self.current
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn stats(&self) -> &[HeuristicStats; 3] {
        &self.stats
    }

    pub fn is_done(&self) -> bool {
        self.problem.n() == 1
            || self.since_improvement >= self.params.max_no_improve
            || self.params.max_iterations.is_some_and(|m| self.iteration >= m)
            || self.params.time_limit.is_some_and(|t| self.started.elapsed() >= t)
    }

    pub fn step(&mut self) -> Result<IterationRecord> {
        let problem = self.problem;
        self.iteration += 1;
        let k = self.rng.gen_range(0..RemovalKind::ALL.len());
        let kind = RemovalKind::ALL[k];
        let omega = self.stats[k].omega().min(problem.n());

        let mut retries = 0;
        let mut s = loop {
            let mut s = perturb(&self.reference, problem, kind, omega, self.params.alpha, &mut self.rng);
            feasibility(&mut s, problem, self.params.search, &mut self.rng);
            if is_feasible(&s, problem) {
                break s;
            }
            retries += 1;
            if retries >= MAX_RETRIES {
                return Err(Error::Stalled { iteration: self.iteration, retries });
            }
        };
        local_search(&mut s, problem, self.params.search);

        let distance = solution_distance(&s, &self.reference) as f64;
        self.stats[k].record_and_adjust(distance, self.params.d_beta, self.params.gamma, problem.n());

        let f = s.cost();
        let accepted = self.accept.accept(f);
        self.accept.update_average(f);
        if accepted {
            self.reference = s.clone();
        }
        if f < self.best.cost() - IMPROVEMENT_TOL {
            self.best = s.clone();
            self.since_improvement = 0;
        } else {
            self.since_improvement += 1;
        }
        self.current = s;

        Ok(IterationRecord {
            iteration: self.iteration,
            cost: f,
            best_cost: self.best.cost(),
            heuristic: kind,
            omega,
            accepted,
        })
    }

    pub fn run(mut self) -> Result<RunResult> {
        let mut trace = self.params.trace.then(Vec::new);
        while !self.is_done() {
            let record = self.step()?;
            if let Some(t) = trace.as_mut() {
                t.push(record);
            }
        }
        let best_cost = total_cost(&self.best, self.problem);
        Ok(RunResult {
            best_solution: self.best,
            best_cost,
            iterations: self.iteration,
            time: self.started.elapsed().as_secs_f64(),
            trace,
        })
    }
}

/// Prepares solver data: normalizes the fleet and builds neighbor lists.
pub fn prepare(instance: &Instance, params: &Params) -> Result<Problem> {
    Problem::new(instance.normalize_fleet(), params.phi)
}

pub fn solve(problem: &Problem, params: &Params) -> Result<RunResult> {
    Ails::new(problem, params.clone())?.run()
}

pub fn run(instance: &Instance, params: &Params) -> Result<RunResult> {
    let problem = prepare(instance, params)?;
    solve(&problem, params)
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    /// Per-run results in run order.
    pub runs: Vec<RunResult>,
    pub best: f64,
    pub avg: f64,
    pub avg_time: f64,
}

impl RunSummary {
    pub fn best_run(&self) -> &RunResult {
        self.runs.iter().min_by(|a, b| a.best_cost.total_cmp(&b.best_cost)).expect("at least one run")
    }
}

/// Independent runs seeded `seed, seed + 1, ...`, executed in parallel.
pub fn run_many(problem: &Problem, params: &Params, runs: usize) -> Result<RunSummary> {
    if runs == 0 {
        return Err(Error::Parameter("runs must be at least 1".into()));
    }
    let results = (0..runs)
        .into_par_iter()
        .map(|i| {
            let p = Params { seed: params.seed.wrapping_add(i as u64), ..params.clone() };
            solve(problem, &p)
        })
        .collect::<Result<Vec<_>>>()?;
    let count = results.len() as f64;
    let best = results.iter().map(|r| r.best_cost).fold(f64::INFINITY, f64::min);
    let avg = results.iter().map(|r| r.best_cost).sum::<f64>() / count;
    let avg_time = results.iter().map(|r| r.time).sum::<f64>() / count;
    Ok(RunSummary { runs: results, best, avg, avg_time })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Variant, VehicleType};
    use crate::solution::tests::problem;
    use crate::solution::validate;

    fn small() -> Problem {
        let coords = vec![
            (0.0, 0.0),
            (3.0, 7.0),
            (-5.0, 2.0),
            (8.0, -1.0),
            (-2.0, -6.0),
            (6.0, 5.0),
            (-7.0, -3.0),
            (1.0, 9.0),
            (4.0, -8.0),
        ];
        problem(
            coords,
            vec![0, 4, 6, 3, 7, 5, 2, 6, 4],
            vec![VehicleType::new(10, 20.0, 1.0, 3), VehicleType::new(20, 35.0, 1.2, 2)],
            Variant::Hvrpfd,
        )
    }

    fn quick(seed: u64) -> Params {
        Params { seed, max_no_improve: 300, trace: true, ..Params::default() }
    }

    #[test]
    fn single_customer_picks_cheapest_type() {
        let p = problem(
            vec![(0.0, 0.0), (3.0, 4.0)],
            vec![0, 5],
            vec![VehicleType::new(10, 30.0, 1.0, 1), VehicleType::new(5, 2.0, 2.0, 1)],
            Variant::Hvrpfd,
        );
        let r = solve(&p, &Params::default()).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.best_solution.route(0).vehicle(), 1);
        assert!((r.best_cost - 22.0).abs() < 1e-12);
    }

    #[test]
    fn best_is_monotone_and_feasible() {
        let p = small();
        let r = solve(&p, &quick(3)).unwrap();
        assert!(is_feasible(&r.best_solution, &p));
        assert!(validate(&r.best_solution, &p).is_empty());
        assert_eq!(r.best_cost, total_cost(&r.best_solution, &p));
        let trace = r.trace.unwrap();
        assert!(trace.windows(2).all(|w| w[1].best_cost <= w[0].best_cost));
        assert!(r.iterations >= 300);
    }

    #[test]
    fn deterministic() {
        let p = small();
        let a = solve(&p, &quick(11)).unwrap();
        let b = solve(&p, &quick(11)).unwrap();
        assert_eq!(a.best_cost.to_bits(), b.best_cost.to_bits());
        assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn many_runs_in_order() {
        let p = small();
        let params = quick(5);
        let summary = run_many(&p, &params, 3).unwrap();
        assert_eq!(summary.runs.len(), 3);
        let single = solve(&p, &Params { seed: 6, ..params.clone() }).unwrap();
        assert_eq!(summary.runs[1].best_cost, single.best_cost);
        assert!(summary.best <= summary.avg + 1e-12);

        let one = run_many(&p, &params, 1).unwrap();
        assert_eq!(one.best, one.avg);
    }

    #[test]
    fn rejects_bad_params() {
        let p = small();
        let bad = Params { alpha: 1.5, ..Params::default() };
        assert!(matches!(solve(&p, &bad), Err(Error::Parameter(_))));
    }
}
