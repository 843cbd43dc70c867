//! Best-improvement neighborhood search over inter-route shift, swap and
//! 2-opt* moves, restricted to each customer's nearest vertices.
//!
//! The depot is always offered as an anchor in addition to the neighbor
//! list. Anchoring at the depot means "next to the depot in any other
//! route", which is how customers reach empty routes.

use rand::Rng;

use crate::model::{Problem, Vertex, DEPOT};
use crate::perturb::new_route_type;
use crate::solution::{check_feasibility, route_cost_of, Route, Solution};

/// Smallest cost decrease that counts as an improvement.
const IMPROVEMENT_EPS: f64 = 1e-7;

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchConfig {
    /// Also try 2-opt inside a route. Off by default.
    pub intra_route: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    Shift,
    Swap,
    TwoOptStar,
    TwoOpt,
}

/// A neighborhood move. Positions refer to the solution the move was
/// generated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Move the customer at `from[pos]` into route `to` before position `gap`.
    Shift { from: usize, pos: usize, to: usize, gap: usize },
    /// Exchange `a[pa]` and `b[pb]`.
    Swap { a: usize, pa: usize, b: usize, pb: usize },
    /// Cut `a` after its first `ka` customers and `b` after its first `kb`.
    /// Straight: `a[..ka] + b[kb..]` and `b[..kb] + a[ka..]`.
    /// Reversed: `a[..ka] + rev(b[..kb])` and `rev(a[ka..]) + b[kb..]`.
    TwoOptStar { a: usize, ka: usize, b: usize, kb: usize, reversed: bool },
    /// Reverse `route[i..=j]`.
    TwoOpt { route: usize, i: usize, j: usize },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::Shift { .. } => MoveKind::Shift,
            Move::Swap { .. } => MoveKind::Swap,
            Move::TwoOptStar { .. } => MoveKind::TwoOptStar,
            Move::TwoOpt { .. } => MoveKind::TwoOpt,
        }
    }
}

/// Effect of a move on the objective and on total overload.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta {
    pub cost: f64,
    pub violation: i64,
    /// Both touched routes stay within capacity.
    pub capacity_ok: bool,
}

#[inline]
fn overload(load: u64, cap: u64) -> u64 {
    load.saturating_sub(cap)
}

/// New state of one route after a move: (size, length, load).
type RouteAfter = (usize, f64, u64);

fn route_delta(problem: &Problem, route: &Route, after: RouteAfter) -> (f64, i64, bool) {
    let (size, len, load) = after;
    let cap = u64::from(problem.vehicle(route.vehicle()).capacity);
    let cost = route_cost_of(problem, route.vehicle(), size, len) - route.cost(problem);
    let viol = overload(load, cap) as i64 - overload(route.load(), cap) as i64;
    (cost, viol, load <= cap)
}

#[inline]
fn combine(problem: &Problem, ra: &Route, a: RouteAfter, rb: &Route, b: RouteAfter) -> Delta {
    let (ca, va, oka) = route_delta(problem, ra, a);
    let (cb, vb, okb) = route_delta(problem, rb, b);
    Delta { cost: ca + cb, violation: va + vb, capacity_ok: oka && okb }
}

const OVER_CAPACITY: Delta = Delta { cost: f64::INFINITY, violation: 0, capacity_ok: false };

#[inline]
fn fits(problem: &Problem, route: &Route, load: u64) -> bool {
    load <= u64::from(problem.vehicle(route.vehicle()).capacity)
}

/// Delta evaluation in constant time from the route caches.
pub fn evaluate(solution: &Solution, problem: &Problem, mv: &Move) -> Delta {
    evaluate_with::<false>(solution, problem, mv)
}

/// With `PRUNE`, moves breaking a capacity return early with only
/// `capacity_ok` meaningful.
#[inline]
fn evaluate_with<const PRUNE: bool>(solution: &Solution, problem: &Problem, mv: &Move) -> Delta {
    let d = |i, j| problem.d(i, j);
    match *mv {
        Move::Shift { from, pos, to, gap } => {
            let (ra, rb) = (solution.route(from), solution.route(to));
            let v = ra.customers()[pos];
            let q = u64::from(problem.demand(v));
            let (load_a, load_b) = (ra.load() - q, rb.load() + q);
            if PRUNE && !(fits(problem, rb, load_b) && fits(problem, ra, load_a)) {
                return OVER_CAPACITY;
            }
            let (pa, na) = (ra.at(pos as isize - 1), ra.at(pos as isize + 1));
            let (pb, nb) = rb.gap_ends(gap);
            let len_a = ra.length() - d(pa, v) - d(v, na) + d(pa, na);
            let len_b = rb.length() + d(pb, v) + d(v, nb) - d(pb, nb);
            combine(problem, ra, (ra.len() - 1, len_a, load_a), rb, (rb.len() + 1, len_b, load_b))
        }
        Move::Swap { a, pa, b, pb } => {
            let (ra, rb) = (solution.route(a), solution.route(b));
            let (v, u) = (ra.customers()[pa], rb.customers()[pb]);
            let (qv, qu) = (u64::from(problem.demand(v)), u64::from(problem.demand(u)));
            let (load_a, load_b) = (ra.load() - qv + qu, rb.load() - qu + qv);
            if PRUNE && !(fits(problem, ra, load_a) && fits(problem, rb, load_b)) {
                return OVER_CAPACITY;
            }
            let (pva, nva) = (ra.at(pa as isize - 1), ra.at(pa as isize + 1));
            let (pub_, nub) = (rb.at(pb as isize - 1), rb.at(pb as isize + 1));
            let len_a = ra.length() - d(pva, v) - d(v, nva) + d(pva, u) + d(u, nva);
            let len_b = rb.length() - d(pub_, u) - d(u, nub) + d(pub_, v) + d(v, nub);
            combine(problem, ra, (ra.len(), len_a, load_a), rb, (rb.len(), len_b, load_b))
        }
        Move::TwoOptStar { a, ka, b, kb, reversed } => {
            let (ra, rb) = (solution.route(a), solution.route(b));
            let (head_a, head_b) = (ra.head_load(ka), rb.head_load(kb));
            let (tail_a, tail_b) = (ra.load() - head_a, rb.load() - head_b);
            let (load_a, load_b) =
                if reversed { (head_a + head_b, tail_a + tail_b) } else { (head_a + tail_b, head_b + tail_a) };
            if PRUNE && !(fits(problem, ra, load_a) && fits(problem, rb, load_b)) {
                return OVER_CAPACITY;
            }
            let (size_ha, size_ta) = (ka, ra.len() - ka);
            let (size_hb, size_tb) = (kb, rb.len() - kb);
            let (last_ha, first_ta) = (ra.at(ka as isize - 1), ra.at(ka as isize));
            let (last_hb, first_tb) = (rb.at(kb as isize - 1), rb.at(kb as isize));
            if !reversed {
                let len_a = ra.head_length(ka) + d(last_ha, first_tb) + rb.tail_length(kb);
                let len_b = rb.head_length(kb) + d(last_hb, first_ta) + ra.tail_length(ka);
                combine(problem, ra, (size_ha + size_tb, len_a, load_a), rb, (size_hb + size_ta, len_b, load_b))
            } else {
                let len_a = ra.head_length(ka) + d(last_ha, last_hb) + rb.head_length(kb);
                let len_b = ra.tail_length(ka) + d(first_ta, first_tb) + rb.tail_length(kb);
                combine(problem, ra, (size_ha + size_hb, len_a, load_a), rb, (size_ta + size_tb, len_b, load_b))
            }
        }
        Move::TwoOpt { route, i, j } => {
            let r = solution.route(route);
            let (before, first) = (r.at(i as isize - 1), r.at(i as isize));
            let (last, after) = (r.at(j as isize), r.at(j as isize + 1));
            let gain = d(before, last) + d(first, after) - d(before, first) - d(last, after);
            Delta {
                cost: problem.vehicle(r.vehicle()).unit_cost * gain,
                violation: 0,
                capacity_ok: fits(problem, r, r.load()),
            }
        }
    }
}

/// Applies a move, rebuilding the caches of the touched routes.
pub fn apply(solution: &mut Solution, problem: &Problem, mv: &Move) {
    match *mv {
        Move::Shift { from, pos, to, gap } => {
            let mut a = solution.route(from).customers().to_vec();
            let mut b = solution.route(to).customers().to_vec();
            let v = a.remove(pos);
            b.insert(gap, v);
            solution.set_route(problem, from, a);
            solution.set_route(problem, to, b);
        }
        Move::Swap { a, pa, b, pb } => {
            let mut ca = solution.route(a).customers().to_vec();
            let mut cb = solution.route(b).customers().to_vec();
            std::mem::swap(&mut ca[pa], &mut cb[pb]);
            solution.set_route(problem, a, ca);
            solution.set_route(problem, b, cb);
        }
        Move::TwoOptStar { a, ka, b, kb, reversed } => {
            let (ca, cb) = (solution.route(a).customers(), solution.route(b).customers());
            let (new_a, new_b): (Vec<Vertex>, Vec<Vertex>) = if !reversed {
                (
                    ca[..ka].iter().chain(&cb[kb..]).copied().collect(),
                    cb[..kb].iter().chain(&ca[ka..]).copied().collect(),
                )
            } else {
                (
                    ca[..ka].iter().chain(cb[..kb].iter().rev()).copied().collect(),
                    ca[ka..].iter().rev().chain(&cb[kb..]).copied().collect(),
                )
            };
            solution.set_route(problem, a, new_a);
            solution.set_route(problem, b, new_b);
        }
        Move::TwoOpt { route, i, j } => {
            let mut c = solution.route(route).customers().to_vec();
            c[i..=j].reverse();
            solution.set_route(problem, route, c);
        }
    }
}

/// Moves placing `v` (at `a[i]`) next to the depot in route `b`, numbered
/// in scan order.
fn depot_moves(a: usize, i: usize, b: usize, kb: usize, visit: &mut impl FnMut(usize, Move)) {
    visit(0, Move::Shift { from: a, pos: i, to: b, gap: 0 });
    if kb > 0 {
        visit(1, Move::Shift { from: a, pos: i, to: b, gap: kb });
    }
    // the four cuts that make v adjacent to the depot
    visit(2, Move::TwoOptStar { a, ka: i + 1, b, kb, reversed: false });
    visit(3, Move::TwoOptStar { a, ka: i + 1, b, kb: 0, reversed: true });
    visit(4, Move::TwoOptStar { a, ka: i, b, kb: 0, reversed: false });
    visit(5, Move::TwoOptStar { a, ka: i, b, kb, reversed: true });
}

/// Moves between `v = a[i]` and `u = b[j]`, numbered in scan order.
fn pair_moves(a: usize, i: usize, b: usize, j: usize, config: SearchConfig, visit: &mut impl FnMut(usize, Move)) {
    if a == b {
        if config.intra_route {
            if i < j {
                visit(0, Move::TwoOpt { route: a, i: i + 1, j });
            } else if j < i {
                visit(0, Move::TwoOpt { route: a, i: j + 1, j: i });
            }
        }
        return;
    }
    visit(0, Move::Shift { from: a, pos: i, to: b, gap: j });
    visit(1, Move::Shift { from: a, pos: i, to: b, gap: j + 1 });
    visit(2, Move::Shift { from: b, pos: j, to: a, gap: i });
    visit(3, Move::Shift { from: b, pos: j, to: a, gap: i + 1 });
    visit(4, Move::Swap { a, pa: i, b, pb: j });
    visit(5, Move::TwoOptStar { a, ka: i + 1, b, kb: j + 1, reversed: false });
    visit(6, Move::TwoOptStar { a, ka: i + 1, b, kb: j, reversed: false });
    visit(7, Move::TwoOptStar { a, ka: i, b, kb: j + 1, reversed: false });
    visit(8, Move::TwoOptStar { a, ka: i + 1, b, kb: j + 1, reversed: true });
    visit(9, Move::TwoOptStar { a, ka: i, b, kb: j, reversed: true });
}

/// Calls `visit` for every move generated from customer `v` and the anchor `u`.
fn moves_for_pair(solution: &Solution, v: Vertex, u: Vertex, config: SearchConfig, visit: &mut impl FnMut(Move)) {
    let Some((a, i)) = solution.place(v) else { return };
    if u == DEPOT {
        for b in (0..solution.num_routes()).filter(|&b| b != a) {
            depot_moves(a, i, b, solution.route(b).len(), &mut |_, mv| visit(mv));
        }
        return;
    }
    let Some((b, j)) = solution.place(u) else { return };
    pair_moves(a, i, b, j, config, &mut |_, mv| visit(mv));
}

/// Enumerates the whole restricted neighborhood in a fixed order.
pub fn for_each_move(solution: &Solution, problem: &Problem, config: SearchConfig, mut visit: impl FnMut(Move)) {
    for v in 1..=problem.n() {
        let neighbors = problem.neighbors.of(v);
        for &u in neighbors {
            moves_for_pair(solution, v, u, config, &mut visit);
        }
        if !neighbors.contains(&DEPOT) {
            moves_for_pair(solution, v, DEPOT, config, &mut visit);
        }
    }
}

/// Total violation: overload plus a fleet-size excess term weighted by the
/// total demand, so one missing vehicle outweighs any overload.
pub fn violation(solution: &Solution, problem: &Problem) -> u64 {
    let report = check_feasibility(solution, problem);
    report.total_overload() + problem.instance.total_demand() * report.total_count_excess() as u64
}

/// Position of a move in the full scan: customer, anchor index, target
/// route for depot anchors, move number.
type ScanKey = (usize, usize, usize, usize);

/// Lexicographic score, lower is better.
type Score = (i64, f64);

#[derive(Debug, Clone, Copy)]
struct Candidate {
    score: Score,
    key: ScanKey,
    mv: Move,
}

impl Candidate {
    /// Better score, or the same score found earlier in the scan.
    fn beats(&self, other: &Candidate) -> bool {
        (self.score.0, self.score.1) < (other.score.0, other.score.1)
            || (self.score == other.score && self.key < other.key)
    }
}

fn routes_touched(mv: &Move) -> [usize; 2] {
    match *mv {
        Move::Shift { from, to, .. } => [from, to],
        Move::Swap { a, b, .. } | Move::TwoOptStar { a, b, .. } => [a, b],
        Move::TwoOpt { route, .. } => [route, route],
    }
}

/// Best improving move per (customer, route of the anchor). A move only
/// depends on the two routes it touches, so after applying one only the
/// entries involving those routes are recomputed. Picking the overall best
/// by (score, scan key) gives exactly the move a full rescan would pick.
struct MoveCache<F, const PRUNE: bool> {
    routes: usize,
    best: Vec<Option<Candidate>>,
    score: F,
    config: SearchConfig,
}

impl<F: Fn(&Delta) -> Option<Score>, const PRUNE: bool> MoveCache<F, PRUNE> {
    fn new(solution: &Solution, problem: &Problem, config: SearchConfig, score: F) -> Self {
        let mut cache = Self { routes: 0, best: Vec::new(), score, config };
        cache.rebuild(solution, problem);
        cache
    }

    fn rebuild(&mut self, solution: &Solution, problem: &Problem) {
        self.routes = solution.num_routes();
        self.best = vec![None; (problem.n() + 1) * self.routes];
        for v in 1..=problem.n() {
            self.refresh(solution, problem, v, None);
        }
    }

    /// Recomputes the entries of `v`, all of them or those for two routes.
    fn refresh(&mut self, solution: &Solution, problem: &Problem, v: Vertex, only: Option<[usize; 2]>) {
        let wanted = |b: usize| only.is_none_or(|[x, y]| b == x || b == y);
        let row = v * self.routes;
        for b in (0..self.routes).filter(|&b| wanted(b)) {
            self.best[row + b] = None;
        }
        let Some((a, i)) = solution.place(v) else { return };
        let routes = self.routes;
        let config = self.config;
        let (best, score) = (&mut self.best, &self.score);
        let mut offer = |b: usize, key: ScanKey, mv: Move| {
            let delta = evaluate_with::<PRUNE>(solution, problem, &mv);
            if let Some(sc) = score(&delta) {
                let cand = Candidate { score: sc, key, mv };
                let slot = &mut best[row + b];
                if slot.as_ref().is_none_or(|cur| cand.beats(cur)) {
                    *slot = Some(cand);
                }
            }
        };
        let depot_anchor = |idx: usize, offer: &mut dyn FnMut(usize, ScanKey, Move)| {
            for b in (0..routes).filter(|&b| b != a && wanted(b)) {
                depot_moves(a, i, b, solution.route(b).len(), &mut |k, mv| offer(b, (v, idx, b, k), mv));
            }
        };
        let neighbors = problem.neighbors.of(v);
        let mut saw_depot = false;
        for (idx, &u) in neighbors.iter().enumerate() {
            if u == DEPOT {
                saw_depot = true;
                depot_anchor(idx, &mut offer);
            } else if let Some((b, j)) = solution.place(u) {
                if wanted(b) {
                    pair_moves(a, i, b, j, config, &mut |k, mv| offer(b, (v, idx, 0, k), mv));
                }
            }
        }
        if !saw_depot {
            depot_anchor(neighbors.len(), &mut offer);
        }
    }

    /// Accounts for an empty route appended to the solution; entries for
    /// the existing routes stay valid.
    fn route_added(&mut self, solution: &Solution, problem: &Problem) {
        let (old, new) = (self.routes, solution.num_routes());
        let mut best = vec![None; (problem.n() + 1) * new];
        for v in 0..=problem.n() {
            best[v * new..v * new + old].copy_from_slice(&self.best[v * old..(v + 1) * old]);
        }
        self.best = best;
        self.routes = new;
        for v in 1..=problem.n() {
            self.refresh(solution, problem, v, Some([new - 1, new - 1]));
        }
    }

    fn best(&self) -> Option<Candidate> {
        let mut out: Option<Candidate> = None;
        for c in self.best.iter().flatten() {
            if out.as_ref().is_none_or(|o| c.beats(o)) {
                out = Some(*c);
            }
        }
        out
    }

    /// Applies `mv` and brings the cache up to date.
    fn apply(&mut self, solution: &mut Solution, problem: &Problem, mv: &Move) {
        apply(solution, problem, mv);
        let touched = routes_touched(mv);
        for v in 1..=problem.n() {
            let full = solution.place(v).is_some_and(|(r, _)| touched.contains(&r));
            self.refresh(solution, problem, v, if full { None } else { Some(touched) });
        }
    }
}

fn ls_score(delta: &Delta) -> Option<Score> {
    (delta.capacity_ok && delta.cost < -IMPROVEMENT_EPS).then_some((0, delta.cost))
}

fn feasibility_score(delta: &Delta) -> Option<Score> {
    (delta.violation < 0 || (delta.violation == 0 && delta.cost < -IMPROVEMENT_EPS))
        .then_some((delta.violation, delta.cost))
}

/// Descends to a local optimum applying the best capacity-feasible
/// cost-reducing move each round.
pub fn local_search(solution: &mut Solution, problem: &Problem, config: SearchConfig) {
    let mut cache = MoveCache::<_, true>::new(solution, problem, config, ls_score);
    let mut applied = 0u64;
    while let Some(best) = cache.best() {
        cache.apply(solution, problem, &best.mv);
        applied += 1;
        if cfg!(debug_assertions) && applied.is_multiple_of(1000) {
            let exact = crate::solution::total_cost(solution, problem);
            debug_assert!((exact - solution.cost()).abs() < 1e-6, "cost cache drifted");
        }
    }
    solution.drop_empty_routes();
    solution.refresh_cost(problem);
}

/// Tries to remove capacity violations. Moves are ranked by (violation
/// change, cost change); when no move improves and the solution is still
/// infeasible an empty route is added, up to `max_routes` routes. May give
/// up with an infeasible solution.
pub fn feasibility<R: Rng>(solution: &mut Solution, problem: &Problem, config: SearchConfig, rng: &mut R) {
    let mut current = violation(solution, problem);
    if current > 0 {
        let mut cache = MoveCache::<_, false>::new(solution, problem, config, feasibility_score);
        while current > 0 {
            match cache.best() {
                Some(best) => {
                    cache.apply(solution, problem, &best.mv);
                    current = (current as i64 + best.score.0) as u64;
                }
                None if solution.num_routes() < problem.max_routes => {
                    let t = new_route_type(solution, problem, rng);
                    solution.add_route(t);
                    current = violation(solution, problem);
                    cache.route_added(solution, problem);
                }
                None => break,
            }
        }
    }
    solution.drop_empty_routes();
    solution.refresh_cost(problem);
}

/// Reference implementations that rescan the whole neighborhood each round.
#[cfg(test)]
pub(crate) mod naive {
    use super::*;

    pub(crate) fn local_search(solution: &mut Solution, problem: &Problem, config: SearchConfig) {
        loop {
            let mut best: Option<(Move, f64)> = None;
            for_each_move(solution, problem, config, |mv| {
                let delta = evaluate(solution, problem, &mv);
                if delta.capacity_ok && delta.cost < -IMPROVEMENT_EPS && best.is_none_or(|(_, c)| delta.cost < c) {
                    best = Some((mv, delta.cost));
                }
            });
            let Some((mv, _)) = best else { break };
            apply(solution, problem, &mv);
        }
        solution.drop_empty_routes();
        solution.refresh_cost(problem);
    }

    pub(crate) fn feasibility<R: Rng>(solution: &mut Solution, problem: &Problem, config: SearchConfig, rng: &mut R) {
        let mut current = violation(solution, problem);
        while current > 0 {
            let mut best: Option<(Move, i64, f64)> = None;
            for_each_move(solution, problem, config, |mv| {
                let delta = evaluate(solution, problem, &mv);
                let improving = delta.violation < 0 || (delta.violation == 0 && delta.cost < -IMPROVEMENT_EPS);
                if improving
                    && best.is_none_or(|(_, bv, bc)| delta.violation < bv || (delta.violation == bv && delta.cost < bc))
                {
                    best = Some((mv, delta.violation, delta.cost));
                }
            });
            match best {
                Some((mv, dv, _)) => {
                    apply(solution, problem, &mv);
                    current = (current as i64 + dv) as u64;
                }
                None if solution.num_routes() < problem.max_routes => {
                    let t = new_route_type(solution, problem, rng);
                    solution.add_route(t);
                    current = violation(solution, problem);
                }
                None => break,
            }
        }
        solution.drop_empty_routes();
        solution.refresh_cost(problem);
    }
}
