#![allow(dead_code)]

use hfvrp::io::synthetic::random_instance;
use hfvrp::{Problem, Variant};

pub fn problem(n: usize, h: usize, variant: Variant, seed: u64) -> Problem {
    let instance = random_instance("prop", n, h, variant, seed);
    Problem::new(instance.normalize_fleet(), 20).unwrap()
}

/// Every customer appears exactly once over all routes.
pub fn is_partition(solution: &hfvrp::Solution, n: usize) -> bool {
    let mut seen = vec![0u32; n + 1];
    for r in solution.routes() {
        for &v in r.customers() {
            if v == 0 || v > n {
                return false;
            }
            seen[v] += 1;
        }
    }
    seen[1..].iter().all(|&c| c == 1)
}

pub fn variant(i: usize) -> Variant {
    Variant::ALL[i % Variant::ALL.len()]
}
