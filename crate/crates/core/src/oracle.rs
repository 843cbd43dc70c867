//! Exhaustive solver for tiny instances, used as ground truth in tests.

use crate::error::{Error, Result};
use crate::model::{Problem, Vertex};
use crate::solution::{path_length, Solution};

/// Largest instance accepted.
pub const MAX_CUSTOMERS: usize = 8;

/// Shortest ordering of the customers in `members`, orientation fixed by
/// requiring the first customer to be smaller than the last.
fn best_order(problem: &Problem, members: &[Vertex]) -> (f64, Vec<Vertex>) {
    let mut perm = members.to_vec();
    let mut best = (f64::INFINITY, perm.clone());
    permute(problem, &mut perm, 0, &mut best);
    best
}

fn permute(problem: &Problem, perm: &mut Vec<Vertex>, k: usize, best: &mut (f64, Vec<Vertex>)) {
    if k == perm.len() {
        if perm.len() > 1 && perm[0] > perm[perm.len() - 1] {
            return;
        }
        let len = path_length(problem, perm);
        if len < best.0 {
            *best = (len, perm.clone());
        }
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(problem, perm, k + 1, best);
        perm.swap(k, i);
    }
}

struct Block {
    order: Vec<Vertex>,
    /// Cost per vehicle type, `None` when the type is too small.
    costs: Vec<Option<f64>>,
    cheapest: f64,
}

fn assign(
    blocks: &[&Block],
    k: usize,
    left: &mut [usize],
    acc: f64,
    lower: &[f64],
    best: &mut (f64, Vec<usize>),
    chosen: &mut Vec<usize>,
) {
    if acc + lower[k] >= best.0 {
        return;
    }
    if k == blocks.len() {
        *best = (acc, chosen.clone());
        return;
    }
    for (t, c) in blocks[k].costs.iter().enumerate() {
        let Some(c) = *c else { continue };
        if left[t] == 0 {
            continue;
        }
        left[t] -= 1;
        chosen.push(t);
        assign(blocks, k + 1, left, acc + c, lower, best, chosen);
        chosen.pop();
        left[t] += 1;
    }
}

fn make_block(problem: &Problem, n: usize, h: usize, mask: usize) -> Block {
    let members: Vec<Vertex> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
    let load: u64 = members.iter().map(|&v| u64::from(problem.demand(v))).sum();
    let (len, order) = best_order(problem, &members);
    let costs: Vec<Option<f64>> = (0..h)
        .map(|t| {
            let vt = problem.vehicle(t);
            (u64::from(vt.capacity) >= load).then_some(vt.fixed_cost + vt.unit_cost * len)
        })
        .collect();
    let cheapest = costs.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    Block { order, costs, cheapest }
}

/// Optimal solution by enumerating every partition of the customers into
/// routes, every visiting order and every fleet-respecting type assignment.
pub fn exact_solve(problem: &Problem) -> Result<(f64, Solution)> {
    let n = problem.n();
    if n > MAX_CUSTOMERS {
        return Err(Error::TooLarge { n, limit: MAX_CUSTOMERS });
    }
    let h = problem.fleet_size();
    let mut cache: Vec<Option<Block>> = (0..1usize << n).map(|_| None).collect();
    let mut best: (f64, Vec<(usize, Vec<Vertex>)>) = (f64::INFINITY, Vec::new());
    let mut rgs = vec![0usize; n];
    loop {
        let k = rgs.iter().max().map_or(0, |m| m + 1);
        if k <= problem.max_routes {
            let mut masks = vec![0usize; k];
            for (i, &b) in rgs.iter().enumerate() {
                masks[b] |= 1 << i;
            }
            for &m in &masks {
                if cache[m].is_none() {
                    cache[m] = Some(make_block(problem, n, h, m));
                }
            }
            let blocks: Vec<&Block> = masks.iter().map(|&m| cache[m].as_ref().unwrap()).collect();
            let mut lower = vec![0.0; k + 1];
            for i in (0..k).rev() {
                lower[i] = lower[i + 1] + blocks[i].cheapest;
            }
            if lower[0] < best.0 {
                let mut left: Vec<usize> = (0..h).map(|t| problem.vehicle(t).count).collect();
                let mut found = (best.0, Vec::new());
                assign(&blocks, 0, &mut left, 0.0, &lower, &mut found, &mut Vec::new());
                if found.1.len() == k && found.0 < best.0 {
                    let routes = found.1.iter().zip(&blocks).map(|(&t, b)| (t, b.order.clone())).collect();
                    best = (found.0, routes);
                }
            }
        }
        if !next_rgs(&mut rgs) {
            break;
        }
    }
    if best.1.is_empty() {
        return Err(Error::Infeasible { attempts: 1 });
    }
    let solution = Solution::from_routes(problem, best.1);
    Ok((solution.cost(), solution))
}

/// Advances a restricted growth string; false after the last one.
fn next_rgs(a: &mut [usize]) -> bool {
    for i in (1..a.len()).rev() {
        let prefix_max = a[..i].iter().copied().max().unwrap_or(0);
        if a[i] <= prefix_max {
            a[i] += 1;
            a[i + 1..].iter_mut().for_each(|x| *x = 0);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Variant, VehicleType};
    use crate::solution::tests::problem;
    use crate::solution::{is_feasible, validate};

    #[test]
    fn bell_numbers() {
        for (n, bell) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)] {
            let mut a = vec![0; n];
            let mut count = 1;
            while next_rgs(&mut a) {
                count += 1;
            }
            assert_eq!(count, bell);
        }
    }

    #[test]
    fn one_customer_two_types() {
        let p = problem(
            vec![(0.0, 0.0), (3.0, 4.0)],
            vec![0, 1],
            vec![VehicleType::new(5, 10.0, 1.0, 1), VehicleType::new(5, 1.0, 2.0, 1)],
            Variant::Hvrpfd,
        );
        let (c, s) = exact_solve(&p).unwrap();
        assert!((c - 20.0).abs() < 1e-12);
        assert_eq!(s.route(0).vehicle(), 0);
    }

    #[test]
    fn collinear_merge() {
        let p = problem(
            vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)],
            vec![0, 1, 1],
            vec![VehicleType::new(10, 0.0, 1.0, 2)],
            Variant::Fsmd,
        );
        let (c, s) = exact_solve(&p).unwrap();
        assert!((c - 4.0).abs() < 1e-12);
        assert_eq!(s.num_routes(), 1);
    }

    #[test]
    fn respects_fleet_limits() {
        // cheap small vehicle can serve each customer alone but only one exists
        let p = problem(
            vec![(0.0, 0.0), (10.0, 0.0), (-10.0, 0.0)],
            vec![0, 5, 5],
            vec![VehicleType::new(5, 0.0, 1.0, 1), VehicleType::new(10, 0.0, 3.0, 1)],
            Variant::Hvrpd,
        );
        let (c, s) = exact_solve(&p).unwrap();
        assert!((c - 80.0).abs() < 1e-9);
        assert!(is_feasible(&s, &p));
        assert!(validate(&s, &p).is_empty());
    }

    #[test]
    fn refuses_large() {
        let coords: Vec<_> = (0..10).map(|i| (f64::from(i), 0.0)).collect();
        let mut demands = vec![1; 10];
        demands[0] = 0;
        let p = problem(coords, demands, vec![VehicleType::new(100, 0.0, 1.0, 1)], Variant::Fsmd);
        assert!(matches!(exact_solve(&p), Err(Error::TooLarge { n: 9, .. })));
    }
}
