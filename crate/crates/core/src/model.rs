//! Problem data: instances, fleet variants, distances and neighbor lists.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Vertex index. `0` is the depot, `1..=n` are customers.
pub type Vertex = usize;

pub const DEPOT: Vertex = 0;

/// One vehicle type of the fleet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleType {
    pub capacity: u32,
    pub fixed_cost: f64,
    /// Multiplier applied to travelled distance.
    pub unit_cost: f64,
    /// Number of vehicles available.
    pub count: usize,
}

impl VehicleType {
    pub fn new(capacity: u32, fixed_cost: f64, unit_cost: f64, count: usize) -> Self {
        Self { capacity, fixed_cost, unit_cost, count }
    }

    fn check(&self, index: usize) -> Result<()> {
        if self.capacity == 0 {
            return Err(Error::invalid(format!("vehicle type {index}: capacity must be positive")));
        }
        if !(self.fixed_cost >= 0.0 && self.fixed_cost.is_finite()) {
            return Err(Error::invalid(format!("vehicle type {index}: fixed cost must be >= 0")));
        }
        if !(self.unit_cost > 0.0 && self.unit_cost.is_finite()) {
            return Err(Error::invalid(format!("vehicle type {index}: unit cost must be > 0")));
        }
        if self.count == 0 {
            return Err(Error::invalid(format!("vehicle type {index}: count must be >= 1")));
        }
        Ok(())
    }
}

/// The five heterogeneous fleet variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Hvrpfd,
    Hvrpd,
    Fsmfd,
    Fsmf,
    Fsmd,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::Hvrpfd, Variant::Hvrpd, Variant::Fsmfd, Variant::Fsmf, Variant::Fsmd];

    pub fn limited_fleet(self) -> bool {
        matches!(self, Variant::Hvrpfd | Variant::Hvrpd)
    }

    pub fn fixed_costs(self) -> bool {
        matches!(self, Variant::Hvrpfd | Variant::Fsmfd | Variant::Fsmf)
    }

    pub fn dependent_costs(self) -> bool {
        !matches!(self, Variant::Fsmf)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Hvrpfd => "HVRPFD",
            Variant::Hvrpd => "HVRPD",
            Variant::Fsmfd => "FSMFD",
            Variant::Fsmf => "FSMF",
            Variant::Fsmd => "FSMD",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == upper)
            .ok_or_else(|| Error::UnknownVariant(s.trim().to_string()))
    }
}

/// Immutable problem data.
///
/// `fleet` holds the vehicle types the solver works with. It starts out equal
/// to `raw_fleet` and is rewritten by [`Instance::normalize_fleet`]; the raw
/// data is always kept for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub variant: Variant,
    pub coords: Vec<(f64, f64)>,
    pub demands: Vec<u32>,
    pub fleet: Vec<VehicleType>,
    pub raw_fleet: Vec<VehicleType>,
}

impl Instance {
    /// Builds and validates an instance. `coords[0]` is the depot.
    pub fn new(
        name: impl Into<String>,
        variant: Variant,
        coords: Vec<(f64, f64)>,
        demands: Vec<u32>,
        fleet: Vec<VehicleType>,
    ) -> Result<Self> {
        let instance = Self { name: name.into(), variant, coords, demands, raw_fleet: fleet.clone(), fleet };
        instance.check()?;
        Ok(instance)
    }

    fn check(&self) -> Result<()> {
        if self.coords.is_empty() {
            return Err(Error::invalid("instance has no depot"));
        }
        if self.coords.len() != self.demands.len() {
            return Err(Error::invalid(format!(
                "{} coordinates but {} demands",
                self.coords.len(),
                self.demands.len()
            )));
        }
        if self.coords.len() < 2 {
            return Err(Error::invalid("instance has no customers"));
        }
        if self.demands[DEPOT] != 0 {
            return Err(Error::invalid("depot demand must be 0"));
        }
        if self.fleet.is_empty() {
            return Err(Error::invalid("fleet is empty"));
        }
        for (t, vt) in self.fleet.iter().enumerate() {
            vt.check(t)?;
        }
        let max_cap = self.max_capacity();
        for (i, &q) in self.demands.iter().enumerate().skip(1) {
            if q == 0 {
                return Err(Error::invalid(format!("customer {i} has zero demand")));
            }
            if q > max_cap {
                return Err(Error::invalid(format!(
                    "customer {i} demand {q} exceeds every vehicle capacity ({max_cap})"
                )));
            }
        }
        Ok(())
    }

    /// Number of customers.
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn customers(&self) -> std::ops::RangeInclusive<Vertex> {
        1..=self.n()
    }

    pub fn max_capacity(&self) -> u32 {
        self.fleet.iter().map(|t| t.capacity).max().unwrap_or(0)
    }

    pub fn total_demand(&self) -> u64 {
        self.demands.iter().map(|&q| u64::from(q)).sum()
    }

    /// Returns a copy with the fleet adjusted to the cost structure of the
    /// variant: fixed costs dropped when the variant has none, unit costs set
    /// to 1 when travel is free of dependent cost, and availability set to
    /// `n` for unlimited fleets. Always derived from `raw_fleet`, so the
    /// operation is idempotent.
    pub fn normalize_fleet(&self) -> Instance {
        let n = self.n();
        let variant = self.variant;
        let fleet = self
            .raw_fleet
            .iter()
            .map(|t| VehicleType {
                capacity: t.capacity,
                fixed_cost: if variant.fixed_costs() { t.fixed_cost } else { 0.0 },
                unit_cost: if variant.dependent_costs() { t.unit_cost } else { 1.0 },
                count: if variant.limited_fleet() { t.count } else { n },
            })
            .collect();
        Instance { fleet, ..self.clone() }
    }

    /// Same instance solved as another variant.
    pub fn with_variant(&self, variant: Variant) -> Instance {
        Instance { variant, fleet: self.raw_fleet.clone(), ..self.clone() }
    }

    /// Lower bound on the route count: total demand over the largest
    /// capacity, floored, and never below one.
    pub fn min_routes(&self) -> usize {
        let floor = self.total_demand() / u64::from(self.max_capacity());
        (floor as usize).max(1)
    }

    /// Upper bound on the route count: `n` for unlimited fleets, the total
    /// number of vehicles otherwise.
    pub fn max_routes(&self) -> usize {
        if self.variant.limited_fleet() {
            self.raw_fleet.iter().map(|t| t.count).sum()
        } else {
            self.n()
        }
    }
}

/// Dense symmetric Euclidean distance matrix.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    size: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_coords(coords: &[(f64, f64)]) -> Self {
        let size = coords.len();
        let mut data = vec![0.0; size * size];
        for i in 0..size {
            for j in (i + 1)..size {
                let (dx, dy) = (coords[i].0 - coords[j].0, coords[i].1 - coords[j].1);
                let d = dx.hypot(dy);
                data[i * size + j] = d;
                data[j * size + i] = d;
            }
        }
        Self { size, data }
    }

    #[inline]
    pub fn get(&self, i: Vertex, j: Vertex) -> f64 {
        self.data[i * self.size + j]
    }

    /// Number of vertices, depot included.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }
}

pub fn build_distances(instance: &Instance) -> DistanceMatrix {
    DistanceMatrix::from_coords(&instance.coords)
}

/// For every vertex, the closest other vertices in ascending distance.
#[derive(Debug, Clone)]
pub struct NeighborLists {
    lists: Vec<Vec<Vertex>>,
}

impl NeighborLists {
    pub fn of(&self, v: Vertex) -> &[Vertex] {
        &self.lists[v]
    }

    pub fn size(&self) -> usize {
        self.lists.first().map_or(0, Vec::len)
    }
}

/// Orders every other vertex by distance from `v`; ties go to the lower index.
fn sorted_by_distance(matrix: &DistanceMatrix, v: Vertex, include_depot: bool) -> Vec<Vertex> {
    let start = if include_depot { 0 } else { 1 };
    let mut others: Vec<Vertex> = (start..matrix.len()).filter(|&u| u != v).collect();
    others.sort_by(|&a, &b| matrix.get(v, a).total_cmp(&matrix.get(v, b)).then(a.cmp(&b)));
    others
}

/// Keeps the `phi` nearest vertices (depot included) of every vertex.
/// `phi` must lie in `1..=len-1`, `len` being the vertex count.
pub fn build_neighbors(matrix: &DistanceMatrix, phi: usize) -> Result<NeighborLists> {
    let others = matrix.len().saturating_sub(1);
    if phi < 1 || phi > others {
        return Err(Error::Parameter(format!("neighborhood size {phi} outside [1, {others}]")));
    }
    let lists = (0..matrix.len())
        .map(|v| {
            let mut l = sorted_by_distance(matrix, v, true);
            l.truncate(phi);
            l
        })
        .collect();
    Ok(NeighborLists { lists })
}

/// Everything the solver needs about an instance, built once per run.
#[derive(Debug, Clone)]
pub struct Problem {
    pub instance: Instance,
    pub dist: DistanceMatrix,
    pub neighbors: NeighborLists,
    /// All customers ordered by distance from each customer (index 0 unused).
    pub proximity: Vec<Vec<Vertex>>,
    pub min_routes: usize,
    pub max_routes: usize,
}

impl Problem {
    /// Builds solver data from a normalized instance; `phi` is clamped to the
    /// number of other vertices.
    pub fn new(instance: Instance, phi: usize) -> Result<Self> {
        let dist = build_distances(&instance);
        let phi = phi.clamp(1, instance.n());
        let neighbors = build_neighbors(&dist, phi)?;
        let proximity = (0..dist.len())
            .map(|v| if v == DEPOT { Vec::new() } else { sorted_by_distance(&dist, v, false) })
            .collect();
        let max_routes = instance.max_routes();
        let min_routes = instance.min_routes().min(max_routes);
        Ok(Self { instance, dist, neighbors, proximity, min_routes, max_routes })
    }

    pub fn n(&self) -> usize {
        self.instance.n()
    }

    #[inline]
    pub fn d(&self, i: Vertex, j: Vertex) -> f64 {
        self.dist.get(i, j)
    }

    #[inline]
    pub fn demand(&self, v: Vertex) -> u32 {
        self.instance.demands[v]
    }

    #[inline]
    pub fn vehicle(&self, t: usize) -> &VehicleType {
        &self.instance.fleet[t]
    }

    pub fn fleet_size(&self) -> usize {
        self.instance.fleet.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_instance(xs: &[f64], variant: Variant) -> Instance {
        let mut coords = vec![(0.0, 0.0)];
        coords.extend(xs.iter().map(|&x| (x, 0.0)));
        let mut demands = vec![0];
        demands.extend(xs.iter().map(|_| 1));
        Instance::new("line", variant, coords, demands, vec![VehicleType::new(10, 5.0, 1.0, 3)]).unwrap()
    }

    #[test]
    fn distances() {
        let m = DistanceMatrix::from_coords(&[(0.0, 0.0), (3.0, 4.0)]);
        assert_eq!(m.get(0, 1), 5.0);
        assert_eq!(m.get(1, 0), 5.0);
        assert_eq!(m.get(1, 1), 0.0);
        let m = DistanceMatrix::from_coords(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert_eq!(m.get(1, 2), 2f64.sqrt());
    }

    #[test]
    fn normalization_by_variant() {
        let t = VehicleType::new(20, 20.0, 1.0, 20);
        let coords: Vec<_> = (0..=20).map(|i| (i as f64, 0.0)).collect();
        let mut demands = vec![1; 21];
        demands[0] = 0;
        let base = Instance::new("x", Variant::Fsmd, coords, demands, vec![t]).unwrap();

        let fsmd = base.normalize_fleet();
        assert_eq!(fsmd.fleet[0], VehicleType::new(20, 0.0, 1.0, 20));
        let fsmf = base.with_variant(Variant::Fsmf).normalize_fleet();
        assert_eq!(fsmf.fleet[0], VehicleType::new(20, 20.0, 1.0, 20));
        assert_eq!(fsmf.raw_fleet[0], t);

        let again = fsmd.normalize_fleet();
        assert_eq!(again, fsmd);
    }

    #[test]
    fn hvrpd_keeps_counts() {
        let mut inst = line_instance(&[1.0, 2.0], Variant::Hvrpd);
        inst.raw_fleet = vec![VehicleType::new(20, 20.0, 1.0, 4)];
        let norm = inst.normalize_fleet();
        assert_eq!(norm.fleet[0], VehicleType::new(20, 0.0, 1.0, 4));
    }

    #[test]
    fn route_bounds() {
        let mk = |demands: Vec<u32>, cap: u32| {
            let coords = (0..demands.len()).map(|i| (i as f64, 0.0)).collect();
            Instance::new("b", Variant::Fsmd, coords, demands, vec![VehicleType::new(cap, 0.0, 1.0, 1)]).unwrap()
        };
        assert_eq!(mk(vec![0, 10, 10, 10], 15).min_routes(), 2);
        assert_eq!(mk(vec![0, 5], 100).min_routes(), 1);
        assert_eq!(mk(vec![0, 7, 8], 10).min_routes(), 1);

        let fsmf = line_instance(&[1.0; 20], Variant::Fsmf);
        assert_eq!(fsmf.max_routes(), 20);
    }

    #[test]
    fn neighbor_ties_prefer_lower_index() {
        let m = DistanceMatrix::from_coords(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (5.0, 0.0)]);
        let nl = build_neighbors(&m, 1).unwrap();
        assert_eq!(nl.of(1), &[0]);
        let all = build_neighbors(&m, 3).unwrap();
        assert_eq!(all.of(1), &[0, 2, 3]);

        let s = 3f64.sqrt() / 2.0;
        let tri = DistanceMatrix::from_coords(&[(0.0, 0.0), (1.0, 0.0), (0.5, s)]);
        let nl = build_neighbors(&tri, 1).unwrap();
        assert_eq!(nl.of(0), &[1]);
        assert_eq!(nl.of(2), &[0]);
    }

    #[test]
    fn neighbor_size_checked() {
        let m = DistanceMatrix::from_coords(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert!(build_neighbors(&m, 0).is_err());
        assert!(build_neighbors(&m, 3).is_err());
    }

    #[test]
    fn rejects_bad_instances() {
        let fleet = vec![VehicleType::new(10, 0.0, 1.0, 1)];
        let coords = vec![(0.0, 0.0), (1.0, 1.0)];
        assert!(Instance::new("x", Variant::Fsmd, coords.clone(), vec![1, 1], fleet.clone()).is_err());
        assert!(Instance::new("x", Variant::Fsmd, coords.clone(), vec![0, 11], fleet.clone()).is_err());
        assert!(Instance::new("x", Variant::Fsmd, coords, vec![0, 10], fleet).is_ok());
    }

    #[test]
    fn variant_flags() {
        use Variant::*;
        assert_eq!(
            Variant::ALL.map(|v| (v.limited_fleet(), v.fixed_costs(), v.dependent_costs())),
            [(true, true, true), (true, false, true), (false, true, true), (false, true, false), (false, false, true)]
        );
        assert_eq!("fsmd".parse::<Variant>().unwrap(), Fsmd);
        assert!("CVRP".parse::<Variant>().is_err());
    }
}
