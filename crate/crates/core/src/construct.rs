//! Randomized initial solution: seed routes, distance-based insertion,
//! then capacity repair.

use rand::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Problem, Vertex};
use crate::perturb::{candidate_positions, insert_by_distance};
use crate::search::{feasibility, SearchConfig};
use crate::solution::{is_feasible, Solution};

/// Attempts before giving up on an instance.
pub const MAX_ATTEMPTS: usize = 1000;

fn seed_type<R: Rng>(solution: &Solution, problem: &Problem, rng: &mut R) -> usize {
    let h = problem.fleet_size();
    let counts = solution.type_counts(h);
    let available: Vec<usize> = (0..h).filter(|&t| counts[t] < problem.vehicle(t).count).collect();
    match available.choose(rng) {
        Some(&t) => t,
        None => rng.gen_range(0..h),
    }
}

/// One construction attempt. The result may still violate capacities.
pub fn build_once<R: Rng>(problem: &Problem, config: SearchConfig, rng: &mut R) -> Solution {
    let mut customers: Vec<Vertex> = problem.instance.customers().collect();
    customers.shuffle(rng);
    let seeds = problem.min_routes.min(customers.len());
    let mut s = Solution::empty(problem);
    for &v in &customers[..seeds] {
        let t = seed_type(&s, problem, rng);
        let r = s.add_route(t);
        s.insert(problem, v, r, 0);
    }
    for &v in &customers[seeds..] {
        let (positions, _) = candidate_positions(&s, None, &[]);
        insert_by_distance(&mut s, problem, v, &positions);
    }
    feasibility(&mut s, problem, config, rng);
    s
}

/// Builds a feasible solution, restarting from scratch until the capacity
/// repair succeeds.
pub fn build_initial<R: Rng>(problem: &Problem, config: SearchConfig, rng: &mut R) -> Result<Solution> {
    for _ in 0..MAX_ATTEMPTS {
        let s = build_once(problem, config, rng);
        if is_feasible(&s, problem) {
            return Ok(s);
        }
    }
    Err(Error::Infeasible { attempts: MAX_ATTEMPTS })
}
