//! Random instances for tests and fixtures.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::model::{Instance, Variant, VehicleType};

/// Customers uniform on a 100x100 integer grid with the depot at the
/// center, demands in `1..=10`, and `h` vehicle types of growing capacity
/// and cost. Limited fleets get about 1.5 times the capacity needed.
pub fn random_instance(name: &str, n: usize, h: usize, variant: Variant, seed: u64) -> Instance {
    assert!(n >= 1 && h >= 1, "need at least one customer and one type");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = vec![(50.0, 50.0)];
    let mut demands = vec![0u32];
    for _ in 0..n {
        coords.push((f64::from(rng.gen_range(0..=100)), f64::from(rng.gen_range(0..=100))));
        demands.push(rng.gen_range(1..=10));
    }
    let total: u32 = demands.iter().sum();
    let smallest = (total * 7 / (20 + 2 * n as u32).max(1)).max(10);
    let fleet = (0..h)
        .map(|t| {
            let grow = 1.0 + 0.7 * t as f64;
            let capacity = (f64::from(smallest) * grow).round() as u32;
            let fixed = (20.0 * grow.powf(1.3)).round();
            let unit = 1.0 + 0.25 * t as f64;
            let count = ((1.5 * f64::from(total)) / (h as f64 * f64::from(capacity))).ceil().max(1.0) as usize;
            VehicleType::new(capacity, fixed, unit, count)
        })
        .collect();
    Instance::new(name, variant, coords, demands, fleet).expect("generated instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_valid() {
        let a = random_instance("x", 30, 3, Variant::Hvrpd, 4);
        let b = random_instance("x", 30, 3, Variant::Hvrpd, 4);
        assert_eq!(a, b);
        let capacity: u64 = a.raw_fleet.iter().map(|t| u64::from(t.capacity) * t.count as u64).sum();
        assert!(capacity as f64 >= 1.5 * a.total_demand() as f64);
    }
}
