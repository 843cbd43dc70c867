//! Routes and solutions with cached loads, lengths and cost.

use std::fmt;

use crate::model::{Problem, Vertex, DEPOT};

/// A vehicle tour starting and ending at the depot. Only the customers are
/// stored; the depot is implicit at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    vehicle: usize,
    customers: Vec<Vertex>,
    load: u64,
    length: f64,
    /// `reach[i]`: travelled distance from the depot up to `customers[i]`.
    reach: Vec<f64>,
    /// `carried[i]`: demand of `customers[..=i]`.
    carried: Vec<u64>,
}

impl Route {
    pub fn new(problem: &Problem, vehicle: usize, customers: Vec<Vertex>) -> Self {
        let mut route = Route { vehicle, customers, load: 0, length: 0.0, reach: Vec::new(), carried: Vec::new() };
        route.refresh(problem);
        route
    }

    fn refresh(&mut self, problem: &Problem) {
        self.reach.clear();
        self.carried.clear();
        let mut prev = DEPOT;
        let (mut len, mut load) = (0.0, 0u64);
        for &c in &self.customers {
            len += problem.d(prev, c);
            load += u64::from(problem.demand(c));
            self.reach.push(len);
            self.carried.push(load);
            prev = c;
        }
        self.length = len + problem.d(prev, DEPOT);
        self.load = load;
    }

    pub fn vehicle(&self) -> usize {
        self.vehicle
    }

    pub fn customers(&self) -> &[Vertex] {
        &self.customers
    }

    pub fn load(&self) -> u64 {
        self.load
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.customers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.customers.is_empty()
    }

    /// Vertex at position `pos`, treating `-1` and `len` as the depot.
    #[inline]
    pub fn at(&self, pos: isize) -> Vertex {
        if pos < 0 || pos as usize >= self.customers.len() {
            DEPOT
        } else {
            self.customers[pos as usize]
        }
    }

    /// Vertices on both sides of gap `g` (insertion before `customers[g]`).
    #[inline]
    pub fn gap_ends(&self, g: usize) -> (Vertex, Vertex) {
        (self.at(g as isize - 1), self.at(g as isize))
    }

    /// Distance from the depot to the end of the first `k` customers.
    #[inline]
    pub(crate) fn head_length(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.reach[k - 1]
        }
    }

    /// Distance from `customers[k]` back to the depot.
    #[inline]
    pub(crate) fn tail_length(&self, k: usize) -> f64 {
        if k >= self.customers.len() {
            0.0
        } else {
            self.length - self.reach[k]
        }
    }

    #[inline]
    pub(crate) fn head_load(&self, k: usize) -> u64 {
        if k == 0 {
            0
        } else {
            self.carried[k - 1]
        }
    }

    /// Money cost of the route: fixed cost plus unit cost times length. An
    /// empty route costs nothing.
    pub fn cost(&self, problem: &Problem) -> f64 {
        route_cost_of(problem, self.vehicle, self.customers.len(), self.length)
    }
}

/// Cost of a route of type `vehicle` with `size` customers and the given length.
#[inline]
pub(crate) fn route_cost_of(problem: &Problem, vehicle: usize, size: usize, length: f64) -> f64 {
    if size == 0 {
        0.0
    } else {
        let t = problem.vehicle(vehicle);
        t.fixed_cost + t.unit_cost * length
    }
}

/// Length of the closed tour visiting `customers` in order, from scratch.
pub fn path_length(problem: &Problem, customers: &[Vertex]) -> f64 {
    let mut prev = DEPOT;
    let mut len = 0.0;
    for &c in customers {
        len += problem.d(prev, c);
        prev = c;
    }
    len + problem.d(prev, DEPOT)
}

/// Cost of a route computed from scratch.
pub fn route_cost(route: &Route, problem: &Problem) -> f64 {
    route_cost_of(problem, route.vehicle, route.customers.len(), path_length(problem, &route.customers))
}

/// A (possibly partial) set of routes.
#[derive(Debug, Clone)]
pub struct Solution {
    routes: Vec<Route>,
    cost: f64,
    /// customer -> (route, position); `None` while the customer is removed.
    place: Vec<Option<(usize, usize)>>,
}

impl Solution {
    pub fn empty(problem: &Problem) -> Self {
        Self { routes: Vec::new(), cost: 0.0, place: vec![None; problem.n() + 1] }
    }

    /// Builds a solution from `(vehicle type, customers)` pairs.
    pub fn from_routes(problem: &Problem, routes: Vec<(usize, Vec<Vertex>)>) -> Self {
        let mut s = Self::empty(problem);
        for (vehicle, customers) in routes {
            s.routes.push(Route::new(problem, vehicle, customers));
        }
        s.reindex_from(0);
        s.refresh_cost(problem);
        s
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    pub fn route(&self, r: usize) -> &Route {
        &self.routes[r]
    }

    pub fn num_routes(&self) -> usize {
        self.routes.len()
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn place(&self, v: Vertex) -> Option<(usize, usize)> {
        self.place.get(v).copied().flatten()
    }

    /// Neighbors of a routed customer: (predecessor, successor).
    pub fn adjacent(&self, v: Vertex) -> Option<(Vertex, Vertex)> {
        let (r, p) = self.place(v)?;
        let route = &self.routes[r];
        Some((route.at(p as isize - 1), route.at(p as isize + 1)))
    }

    /// Number of routes per vehicle type, empty routes included.
    pub fn type_counts(&self, fleet_size: usize) -> Vec<usize> {
        let mut counts = vec![0; fleet_size];
        for r in &self.routes {
            counts[r.vehicle] += 1;
        }
        counts
    }

    /// Recomputes the cached objective from the route caches.
    pub fn refresh_cost(&mut self, problem: &Problem) {
        self.cost = self.routes.iter().map(|r| r.cost(problem)).sum();
    }

    fn reindex_from(&mut self, first_route: usize) {
        for (ri, route) in self.routes.iter().enumerate().skip(first_route) {
            for (p, &c) in route.customers.iter().enumerate() {
                self.place[c] = Some((ri, p));
            }
        }
    }

    fn reindex_route(&mut self, r: usize) {
        for (p, &c) in self.routes[r].customers.iter().enumerate() {
            self.place[c] = Some((r, p));
        }
    }

    /// Rewrites route `r` with new customers and re-derives its caches.
    pub(crate) fn set_route(&mut self, problem: &Problem, r: usize, customers: Vec<Vertex>) {
        let old = self.routes[r].cost(problem);
        self.routes[r].customers = customers;
        self.routes[r].refresh(problem);
        self.cost += self.routes[r].cost(problem) - old;
        self.reindex_route(r);
    }

    /// Appends an empty route and returns its index.
    pub fn add_route(&mut self, vehicle: usize) -> usize {
        self.routes.push(Route {
            vehicle,
            customers: Vec::new(),
            load: 0,
            length: 0.0,
            reach: Vec::new(),
            carried: Vec::new(),
        });
        self.routes.len() - 1
    }

    pub fn set_vehicle(&mut self, problem: &Problem, r: usize, vehicle: usize) {
        let old = self.routes[r].cost(problem);
        self.routes[r].vehicle = vehicle;
        self.cost += self.routes[r].cost(problem) - old;
    }

    /// Inserts `v` into route `r` before position `gap`.
    pub fn insert(&mut self, problem: &Problem, v: Vertex, r: usize, gap: usize) {
        debug_assert!(self.place[v].is_none(), "customer {v} already routed");
        let old = self.routes[r].cost(problem);
        let route = &mut self.routes[r];
        route.customers.insert(gap, v);
        route.refresh(problem);
        self.cost += self.routes[r].cost(problem) - old;
        self.reindex_route(r);
    }

    /// Takes `v` out of its route and returns its former neighbors.
    pub fn remove(&mut self, problem: &Problem, v: Vertex) -> (Vertex, Vertex) {
        let (r, p) = self.place[v].expect("customer is not routed");
        let neighbors = self.adjacent(v).expect("customer is not routed");
        let old = self.routes[r].cost(problem);
        let route = &mut self.routes[r];
        route.customers.remove(p);
        route.refresh(problem);
        self.cost += self.routes[r].cost(problem) - old;
        self.place[v] = None;
        self.reindex_route(r);
        neighbors
    }

    /// Deletes route `r` and returns the customers it held (now unrouted).
    pub fn remove_route(&mut self, problem: &Problem, r: usize) -> Vec<Vertex> {
        let route = self.routes.remove(r);
        self.cost -= route.cost(problem);
        for &c in &route.customers {
            self.place[c] = None;
        }
        self.reindex_from(r);
        route.customers
    }

    /// Deletes all empty routes, keeping the order of the rest.
    pub fn drop_empty_routes(&mut self) {
        if self.routes.iter().any(Route::is_empty) {
            self.routes.retain(|r| !r.is_empty());
            self.reindex_from(0);
        }
    }

    /// Customers that are not in any route.
    pub fn unrouted(&self) -> impl Iterator<Item = Vertex> + '_ {
        (1..self.place.len()).filter(|&v| self.place[v].is_none())
    }

    /// Undirected edge set, each edge as `(min, max)`, sorted and deduplicated.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut edges = Vec::with_capacity(self.place.len() + self.routes.len());
        for route in &self.routes {
            if route.is_empty() {
                continue;
            }
            let mut prev = DEPOT;
            for &c in route.customers.iter().chain(std::iter::once(&DEPOT)) {
                edges.push((prev.min(c), prev.max(c)));
                prev = c;
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }
}

/// Objective computed from scratch: fixed cost plus unit-cost-weighted
/// length over all non-empty routes.
pub fn total_cost(solution: &Solution, problem: &Problem) -> f64 {
    solution.routes.iter().map(|r| route_cost(r, problem)).sum()
}

/// Size of the symmetric difference of the two undirected edge sets.
pub fn solution_distance(a: &Solution, b: &Solution) -> usize {
    let (ea, eb) = (a.edges(), b.edges());
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < ea.len() && j < eb.len() {
        match ea[i].cmp(&eb[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    ea.len() + eb.len() - 2 * common
}

/// Capacity and fleet-size violations of a solution.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeasibilityReport {
    /// `(route, load above capacity)`
    pub overloads: Vec<(usize, u64)>,
    /// `(vehicle type, routes above availability)`
    pub count_excess: Vec<(usize, usize)>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.overloads.is_empty() && self.count_excess.is_empty()
    }

    pub fn total_overload(&self) -> u64 {
        self.overloads.iter().map(|&(_, e)| e).sum()
    }

    pub fn total_count_excess(&self) -> usize {
        self.count_excess.iter().map(|&(_, e)| e).sum()
    }
}

pub fn check_feasibility(solution: &Solution, problem: &Problem) -> FeasibilityReport {
    let overloads = solution
        .routes
        .iter()
        .enumerate()
        .filter_map(|(r, route)| {
            let cap = u64::from(problem.vehicle(route.vehicle).capacity);
            (route.load > cap).then(|| (r, route.load - cap))
        })
        .collect();
    let count_excess = solution
        .type_counts(problem.fleet_size())
        .into_iter()
        .enumerate()
        .filter_map(|(t, used)| {
            let avail = problem.vehicle(t).count;
            (used > avail).then(|| (t, used - avail))
        })
        .collect();
    FeasibilityReport { overloads, count_excess }
}

pub fn is_feasible(solution: &Solution, problem: &Problem) -> bool {
    check_feasibility(solution, problem).is_feasible()
}

/// A structural problem found by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    DuplicateCustomer(Vertex),
    MissingCustomer(Vertex),
    InvalidVertex { route: usize, vertex: Vertex },
    UnknownVehicle { route: usize, vehicle: usize },
    MembershipMismatch(Vertex),
    LoadCacheDrift { route: usize, cached: u64, actual: u64 },
    LengthCacheDrift { route: usize, cached: f64, actual: f64 },
    CostCacheDrift { cached: f64, actual: f64 },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DuplicateCustomer(v) => write!(f, "duplicate customer {v}"),
            Diagnostic::MissingCustomer(v) => write!(f, "missing customer {v}"),
            Diagnostic::InvalidVertex { route, vertex } => {
                write!(f, "route {route} holds invalid vertex {vertex}")
            }
            Diagnostic::UnknownVehicle { route, vehicle } => {
                write!(f, "route {route} uses unknown vehicle type {vehicle}")
            }
            Diagnostic::MembershipMismatch(v) => write!(f, "membership index wrong for customer {v}"),
            Diagnostic::LoadCacheDrift { route, cached, actual } => {
                write!(f, "load cache drift on route {route}: {cached} vs {actual}")
            }
            Diagnostic::LengthCacheDrift { route, cached, actual } => {
                write!(f, "length cache drift on route {route}: {cached} vs {actual}")
            }
            Diagnostic::CostCacheDrift { cached, actual } => {
                write!(f, "cost cache drift: {cached} vs {actual}")
            }
        }
    }
}

/// Checks the partition property and every cache. An empty list means valid.
pub fn validate(solution: &Solution, problem: &Problem) -> Vec<Diagnostic> {
    let n = problem.n();
    let mut out = Vec::new();
    let mut seen = vec![0usize; n + 1];
    for (r, route) in solution.routes.iter().enumerate() {
        if route.vehicle >= problem.fleet_size() {
            out.push(Diagnostic::UnknownVehicle { route: r, vehicle: route.vehicle });
            continue;
        }
        for (p, &c) in route.customers.iter().enumerate() {
            if c == DEPOT || c > n {
                out.push(Diagnostic::InvalidVertex { route: r, vertex: c });
                continue;
            }
            seen[c] += 1;
            if seen[c] == 2 {
                out.push(Diagnostic::DuplicateCustomer(c));
            }
            if solution.place.get(c).copied().flatten() != Some((r, p)) && seen[c] == 1 {
                out.push(Diagnostic::MembershipMismatch(c));
            }
        }
        let load: u64 = route.customers.iter().filter(|&&c| c <= n).map(|&c| u64::from(problem.demand(c))).sum();
        if load != route.load {
            out.push(Diagnostic::LoadCacheDrift { route: r, cached: route.load, actual: load });
        }
        let length =
            if route.customers.iter().all(|&c| c <= n) { path_length(problem, &route.customers) } else { route.length };
        if (length - route.length).abs() > 1e-9 {
            out.push(Diagnostic::LengthCacheDrift { route: r, cached: route.length, actual: length });
        }
    }
    for (v, &count) in seen.iter().enumerate().skip(1) {
        if count == 0 {
            out.push(Diagnostic::MissingCustomer(v));
        }
    }
    if out.is_empty() {
        let actual = total_cost(solution, problem);
        if (actual - solution.cost).abs() > 1e-6 {
            out.push(Diagnostic::CostCacheDrift { cached: solution.cost, actual });
        }
    }
    out
}
