//! Ruin-and-recreate perturbation: three removal heuristics, two insertion
//! heuristics, route-count and vehicle-type mutation.

use std::fmt;

use rand::distributions::WeightedIndex;
use rand::prelude::*;

use crate::model::{Problem, Vertex};
use crate::solution::Solution;

/// How customers are picked for removal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RemovalKind {
    /// A random customer and its nearest customers.
    Concentric,
    /// Uniformly random customers.
    Random,
    /// Consecutive customers of a route.
    Sequence,
}

impl RemovalKind {
    pub const ALL: [RemovalKind; 3] = [RemovalKind::Concentric, RemovalKind::Random, RemovalKind::Sequence];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            RemovalKind::Concentric => "concentric",
            RemovalKind::Random => "random",
            RemovalKind::Sequence => "sequence",
        }
    }
}

impl fmt::Display for RemovalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where removed customers go back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertionKind {
    /// Next to the closest legal anchor vertex.
    ByDistance,
    /// At the cheapest legal detour, weighted by the route's unit cost.
    ByCost,
}

/// Former neighbors of removed customers. A customer may not go back next
/// to either of them.
#[derive(Debug, Clone, Default)]
pub struct ForbiddenAdjacency {
    former: Vec<Option<(Vertex, Vertex)>>,
}

impl ForbiddenAdjacency {
    pub fn new(n: usize) -> Self {
        Self { former: vec![None; n + 1] }
    }

    pub fn record(&mut self, v: Vertex, neighbors: (Vertex, Vertex)) {
        self.former[v] = Some(neighbors);
    }

    pub fn get(&self, v: Vertex) -> Option<(Vertex, Vertex)> {
        self.former.get(v).copied().flatten()
    }

    pub fn clear(&mut self) {
        self.former.iter_mut().for_each(|f| *f = None);
    }
}

/// An insertion point: before position `gap` of `route`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub route: usize,
    pub gap: usize,
}

/// Legal insertion points for `v`: every gap of every open route whose end
/// vertices are not a former neighbor of `v`. Falls back to every open gap
/// (and then to every gap) when nothing is legal. `closed[r]` marks routes
/// being dismantled.
pub fn candidate_positions(
    solution: &Solution,
    former: Option<(Vertex, Vertex)>,
    closed: &[bool],
) -> (Vec<Position>, bool) {
    let is_closed = |r: usize| closed.get(r).copied().unwrap_or(false);
    let mut out = Vec::new();
    for (r, route) in solution.routes().iter().enumerate() {
        if is_closed(r) {
            continue;
        }
        for gap in 0..=route.len() {
            let (p, n) = route.gap_ends(gap);
            let banned = former.is_some_and(|(a, b)| p == a || p == b || n == a || n == b);
            if !banned {
                out.push(Position { route: r, gap });
            }
        }
    }
    if !out.is_empty() {
        return (out, false);
    }
    for (r, route) in solution.routes().iter().enumerate() {
        if !is_closed(r) {
            out.extend((0..=route.len()).map(|gap| Position { route: r, gap }));
        }
    }
    if out.is_empty() {
        for (r, route) in solution.routes().iter().enumerate() {
            out.extend((0..=route.len()).map(|gap| Position { route: r, gap }));
        }
    }
    (out, true)
}

/// Picks the position whose preceding vertex is closest to `v`; first wins ties.
pub fn choose_by_distance(solution: &Solution, problem: &Problem, v: Vertex, positions: &[Position]) -> Position {
    let mut best = positions[0];
    let mut best_d = f64::INFINITY;
    for &pos in positions {
        let (anchor, _) = solution.route(pos.route).gap_ends(pos.gap);
        let d = problem.d(v, anchor);
        if d < best_d {
            best_d = d;
            best = pos;
        }
    }
    best
}

/// Picks the cheapest detour `r_t (d(p,v) + d(v,n) - d(p,n))`; first wins ties.
pub fn choose_by_cost(solution: &Solution, problem: &Problem, v: Vertex, positions: &[Position]) -> Position {
    let mut best = positions[0];
    let mut best_c = f64::INFINITY;
    for &pos in positions {
        let route = solution.route(pos.route);
        let (p, n) = route.gap_ends(pos.gap);
        let c = problem.vehicle(route.vehicle()).unit_cost * (problem.d(p, v) + problem.d(v, n) - problem.d(p, n));
        if c < best_c {
            best_c = c;
            best = pos;
        }
    }
    best
}

pub fn insert_by_distance(solution: &mut Solution, problem: &Problem, v: Vertex, positions: &[Position]) {
    let pos = choose_by_distance(solution, problem, v, positions);
    solution.insert(problem, v, pos.route, pos.gap);
}

pub fn insert_by_cost(solution: &mut Solution, problem: &Problem, v: Vertex, positions: &[Position]) {
    let pos = choose_by_cost(solution, problem, v, positions);
    solution.insert(problem, v, pos.route, pos.gap);
}

pub fn insert_with(kind: InsertionKind, solution: &mut Solution, problem: &Problem, v: Vertex, positions: &[Position]) {
    match kind {
        InsertionKind::ByDistance => insert_by_distance(solution, problem, v, positions),
        InsertionKind::ByCost => insert_by_cost(solution, problem, v, positions),
    }
}

/// Customers picked for removal, plus routes that the removal dismantles
/// completely.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RemovalPlan {
    pub targets: Vec<Vertex>,
    pub closed_routes: Vec<usize>,
}

fn random_customer<R: Rng>(problem: &Problem, rng: &mut R) -> Vertex {
    rng.gen_range(1..=problem.n())
}

pub fn plan_concentric<R: Rng>(problem: &Problem, omega: usize, rng: &mut R) -> RemovalPlan {
    let center = random_customer(problem, rng);
    plan_concentric_from(problem, center, omega)
}

/// `center` and its `omega - 1` nearest customers, whatever route they are in.
pub fn plan_concentric_from(problem: &Problem, center: Vertex, omega: usize) -> RemovalPlan {
    let omega = omega.clamp(1, problem.n());
    let mut targets = Vec::with_capacity(omega);
    targets.push(center);
    targets.extend(problem.proximity[center].iter().take(omega - 1));
    RemovalPlan { targets, closed_routes: Vec::new() }
}

pub fn plan_random<R: Rng>(problem: &Problem, omega: usize, rng: &mut R) -> RemovalPlan {
    let omega = omega.clamp(1, problem.n());
    let targets = rand::seq::index::sample(rng, problem.n(), omega).into_iter().map(|i| i + 1).collect();
    RemovalPlan { targets, closed_routes: Vec::new() }
}

pub fn plan_sequence<R: Rng>(solution: &Solution, problem: &Problem, omega: usize, rng: &mut R) -> RemovalPlan {
    let start = random_customer(problem, rng);
    plan_sequence_from(solution, problem, start, omega, rng)
}

/// Walks forward from `start` along its route (wrapping past the depot).
/// A route walked completely is closed and the walk continues at a random
/// customer of a random other non-empty route.
pub fn plan_sequence_from<R: Rng>(
    solution: &Solution,
    problem: &Problem,
    start: Vertex,
    omega: usize,
    rng: &mut R,
) -> RemovalPlan {
    let omega = omega.clamp(1, problem.n());
    let mut plan = RemovalPlan::default();
    let (mut r, mut p) = solution.place(start).expect("start customer is not routed");
    loop {
        let route = solution.route(r).customers();
        let take = (omega - plan.targets.len()).min(route.len());
        plan.targets.extend((0..take).map(|k| route[(p + k) % route.len()]));
        if take < route.len() || plan.targets.len() == omega {
            if take == route.len() {
                plan.closed_routes.push(r);
            }
            break;
        }
        plan.closed_routes.push(r);
        let open: Vec<usize> = (0..solution.num_routes())
            .filter(|&o| !solution.route(o).is_empty() && !plan.closed_routes.contains(&o))
            .collect();
        let Some(&next) = open.choose(rng) else { break };
        r = next;
        p = rng.gen_range(0..solution.route(r).len());
    }
    plan
}

pub fn plan_removal<R: Rng>(
    kind: RemovalKind,
    solution: &Solution,
    problem: &Problem,
    omega: usize,
    rng: &mut R,
) -> RemovalPlan {
    match kind {
        RemovalKind::Concentric => plan_concentric(problem, omega, rng),
        RemovalKind::Random => plan_random(problem, omega, rng),
        RemovalKind::Sequence => plan_sequence(solution, problem, omega, rng),
    }
}

fn remove_planned(
    solution: &mut Solution,
    problem: &Problem,
    plan: &RemovalPlan,
    forbidden: &mut ForbiddenAdjacency,
) -> Vec<Vertex> {
    for &v in &plan.targets {
        let former = solution.remove(problem, v);
        forbidden.record(v, former);
    }
    plan.targets.clone()
}

/// Removes a random customer and its `omega - 1` nearest customers.
pub fn remove_concentric<R: Rng>(
    solution: &mut Solution,
    problem: &Problem,
    omega: usize,
    forbidden: &mut ForbiddenAdjacency,
    rng: &mut R,
) -> Vec<Vertex> {
    let plan = plan_concentric(problem, omega, rng);
    remove_planned(solution, problem, &plan, forbidden)
}

/// Removes `omega` distinct random customers.
pub fn remove_random<R: Rng>(
    solution: &mut Solution,
    problem: &Problem,
    omega: usize,
    forbidden: &mut ForbiddenAdjacency,
    rng: &mut R,
) -> Vec<Vertex> {
    let plan = plan_random(problem, omega, rng);
    remove_planned(solution, problem, &plan, forbidden)
}

/// Removes `omega` route-consecutive customers; emptied routes are deleted.
pub fn remove_sequence<R: Rng>(
    solution: &mut Solution,
    problem: &Problem,
    omega: usize,
    forbidden: &mut ForbiddenAdjacency,
    rng: &mut R,
) -> Vec<Vertex> {
    let plan = plan_sequence(solution, problem, omega, rng);
    let removed = remove_planned(solution, problem, &plan, forbidden);
    solution.drop_empty_routes();
    removed
}

/// Type-choice weights `(routes of type t + 1) / (m + h)`.
pub fn fleet_distribution(solution: &Solution, fleet_size: usize) -> Vec<f64> {
    let counts = solution.type_counts(fleet_size);
    let total = (solution.num_routes() + fleet_size) as f64;
    counts.into_iter().map(|c| (c + 1) as f64 / total).collect()
}

fn sample_fleet_type<R: Rng>(solution: &Solution, fleet_size: usize, rng: &mut R) -> usize {
    let weights: Vec<usize> = solution.type_counts(fleet_size).into_iter().map(|c| c + 1).collect();
    WeightedIndex::new(weights).expect("positive weights").sample(rng)
}

/// Vehicle type for a newly opened route. Limited fleets draw uniformly
/// among types with vehicles left; unlimited fleets draw by the type-choice
/// weights.
pub fn new_route_type<R: Rng>(solution: &Solution, problem: &Problem, rng: &mut R) -> usize {
    let h = problem.fleet_size();
    if problem.instance.variant.limited_fleet() {
        let counts = solution.type_counts(h);
        let available: Vec<usize> = (0..h).filter(|&t| counts[t] < problem.vehicle(t).count).collect();
        match available.choose(rng) {
            Some(&t) => t,
            None => rng.gen_range(0..h),
        }
    } else {
        sample_fleet_type(solution, h, rng)
    }
}

/// With probability `alpha`, adds or removes one route within
/// `[min_routes, max_routes]`. A removed route's customers are reinserted
/// with `insertion`; an added route starts empty. Returns the change in
/// route count.
pub fn mutate_route_count<R: Rng>(
    solution: &mut Solution,
    problem: &Problem,
    alpha: f64,
    insertion: InsertionKind,
    rng: &mut R,
) -> isize {
    if !rng.gen_bool(alpha) {
        return 0;
    }
    let m = solution.num_routes();
    let can_grow = m < problem.max_routes;
    let can_shrink = m >= 2 && m > problem.min_routes;
    let grow = match (can_grow, can_shrink) {
        (true, true) => rng.gen_bool(0.5),
        (true, false) => true,
        (false, true) => false,
        (false, false) => return 0,
    };
    if grow {
        let t = new_route_type(solution, problem, rng);
        solution.add_route(t);
        1
    } else {
        let r = rng.gen_range(0..m);
        let freed = solution.remove_route(problem, r);
        for v in freed {
            let (positions, _) = candidate_positions(solution, None, &[]);
            insert_with(insertion, solution, problem, v, &positions);
        }
        -1
    }
}

/// With probability `alpha`, changes the vehicle types of two random routes:
/// swapped for limited fleets, redrawn by the type-choice weights otherwise.
pub fn mutate_fleet<R: Rng>(solution: &mut Solution, problem: &Problem, alpha: f64, rng: &mut R) -> bool {
    if !rng.gen_bool(alpha) || solution.num_routes() < 2 {
        return false;
    }
    let picked = rand::seq::index::sample(rng, solution.num_routes(), 2);
    let (a, b) = (picked.index(0), picked.index(1));
    if problem.instance.variant.limited_fleet() {
        let (ta, tb) = (solution.route(a).vehicle(), solution.route(b).vehicle());
        solution.set_vehicle(problem, a, tb);
        solution.set_vehicle(problem, b, ta);
    } else {
        let h = problem.fleet_size();
        let weights: Vec<usize> = solution.type_counts(h).into_iter().map(|c| c + 1).collect();
        let dist = WeightedIndex::new(weights).expect("positive weights");
        let (ta, tb) = (dist.sample(rng), dist.sample(rng));
        solution.set_vehicle(problem, a, ta);
        solution.set_vehicle(problem, b, tb);
    }
    true
}

/// Perturbs a copy of `reference`: route-count mutation, fleet mutation,
/// then `omega` one-at-a-time removals (picked by `removal`) each followed
/// by a reinsertion away from the customer's former neighbors. The result
/// may violate capacities. Routes left empty are dropped.
pub fn perturb<R: Rng>(
    reference: &Solution,
    problem: &Problem,
    removal: RemovalKind,
    omega: usize,
    alpha: f64,
    rng: &mut R,
) -> Solution {
    let mut s = reference.clone();
    let insertion = if rng.gen_bool(0.5) { InsertionKind::ByDistance } else { InsertionKind::ByCost };
    mutate_route_count(&mut s, problem, alpha, insertion, rng);
    mutate_fleet(&mut s, problem, alpha, rng);

    let plan = plan_removal(removal, &s, problem, omega, rng);
    let mut closed = vec![false; s.num_routes()];
    for &r in &plan.closed_routes {
        closed[r] = true;
    }
    for &v in &plan.targets {
        let former = s.remove(problem, v);
        let (positions, _) = candidate_positions(&s, Some(former), &closed);
        insert_with(insertion, &mut s, problem, v, &positions);
    }
    s.drop_empty_routes();
    s
}
