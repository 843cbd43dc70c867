//! Human-readable solution files and benchmark tables.

use std::fmt::Write as _;

use crate::io::bks::gap;
use crate::model::{Problem, DEPOT};
use crate::solution::{route_cost, total_cost, Solution};

/// `A`, `B`, ... for the first 26 types, `T27`, `T28`, ... after.
pub fn type_label(t: usize) -> String {
    if t < 26 {
        char::from(b'A' + t as u8).to_string()
    } else {
        format!("T{}", t + 1)
    }
}

/// One `Route k [type X]: 0 ... 0 (load L, cost C)` line per non-empty
/// route, then `Total cost: X.XX`.
pub fn format_solution(solution: &Solution, problem: &Problem) -> String {
    let mut out = String::new();
    let mut k = 0;
    for route in solution.routes().iter().filter(|r| !r.is_empty()) {
        k += 1;
        let _ = write!(out, "Route {k} [type {}]: {DEPOT}", type_label(route.vehicle()));
        for v in route.customers() {
            let _ = write!(out, " {v}");
        }
        let _ = writeln!(out, " {DEPOT} (load {}, cost {:.2})", route.load(), route_cost(route, problem));
    }
    let _ = writeln!(out, "Total cost: {:.2}", total_cost(solution, problem));
    out
}

pub fn format_gap(value: Option<f64>) -> String {
    value.map_or_else(|| "n/a".to_string(), |g| format!("{g:.4}"))
}

fn format_time(time: f64, omit: bool) -> String {
    if omit {
        "-".to_string()
    } else {
        format!("{time:.2}")
    }
}

/// Summary line `instance variant best avg time gap`.
pub fn summary_line(
    name: &str,
    variant: &str,
    best: f64,
    avg: f64,
    time: f64,
    bks: Option<f64>,
    omit_time: bool,
) -> String {
    let g = bks.and_then(|b| gap(avg, b).ok());
    format!(
        "instance {name} variant {variant} best {best:.2} avg {avg:.2} time {} gap: {}",
        format_time(time, omit_time),
        format_gap(g)
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub name: String,
    pub bks: Option<f64>,
    pub avg: f64,
    pub best: f64,
    /// Mean seconds per run.
    pub time: f64,
}

impl BenchRow {
    pub fn gap(&self) -> Option<f64> {
        self.bks.and_then(|b| gap(self.avg, b).ok())
    }
}

/// Mean of the row gaps that exist, rounded per row to 4 decimals first so
/// the footer agrees with the printed column.
pub fn mean_gap(rows: &[BenchRow]) -> Option<f64> {
    let gaps: Vec<f64> = rows.iter().filter_map(BenchRow::gap).map(|g| (g * 1e4).round() / 1e4).collect();
    (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64)
}

/// Aligned table with columns `Inst BKS Avg (gap) Best Time` and an `Avg`
/// footer holding the mean gap and mean time.
pub fn format_bench_table(rows: &[BenchRow], omit_time: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<10} {:>12} {:>24} {:>12} {:>10}", "Inst", "BKS", "Avg (gap)", "Best", "Time");
    for r in rows {
        let bks = r.bks.map_or_else(|| "-".to_string(), |b| format!("{b:.2}"));
        let avg = format!("{:.2} ({})", r.avg, format_gap(r.gap()));
        let _ = writeln!(
            out,
            "{:<10} {:>12} {:>24} {:>12.2} {:>10}",
            r.name,
            bks,
            avg,
            r.best,
            format_time(r.time, omit_time)
        );
    }
    let time = rows.iter().map(|r| r.time).sum::<f64>() / rows.len().max(1) as f64;
    let _ = writeln!(
        out,
        "{:<10} {:>12} {:>24} {:>12} {:>10}",
        "Avg",
        "",
        format!("({})", format_gap(mean_gap(rows))),
        "",
        format_time(time, omit_time)
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Variant, VehicleType};
    use crate::solution::tests::problem;

    #[test]
    fn solution_text() {
        let p = problem(
            vec![(0.0, 0.0), (3.0, 4.0), (0.0, 1.0)],
            vec![0, 2, 3],
            vec![VehicleType::new(5, 10.0, 1.0, 2), VehicleType::new(9, 20.0, 2.0, 1)],
            Variant::Hvrpfd,
        );
        let s = Solution::from_routes(&p, vec![(1, vec![1]), (0, vec![2])]);
        assert_eq!(
            format_solution(&s, &p),
            "Route 1 [type B]: 0 1 0 (load 2, cost 40.00)\nRoute 2 [type A]: 0 2 0 (load 3, cost 12.00)\nTotal cost: 52.00\n"
        );
    }

    #[test]
    fn labels() {
        assert_eq!(type_label(0), "A");
        assert_eq!(type_label(25), "Z");
        assert_eq!(type_label(26), "T27");
    }

    #[test]
    fn table_footer() {
        let rows = vec![
            BenchRow { name: "a".into(), bks: Some(100.0), avg: 101.0, best: 100.0, time: 1.0 },
            BenchRow { name: "b".into(), bks: Some(200.0), avg: 200.0, best: 200.0, time: 3.0 },
            BenchRow { name: "c".into(), bks: None, avg: 5.0, best: 5.0, time: 2.0 },
        ];
        assert_eq!(mean_gap(&rows), Some(0.5));
        let table = format_bench_table(&rows, false);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[1].contains("101.00 (1.0000)"));
        assert!(lines[3].contains("(n/a)"));
        assert!(lines[4].starts_with("Avg") && lines[4].contains("(0.5000)") && lines[4].ends_with("2.00"));
        assert!(!format_bench_table(&rows, true).contains("2.00 "));
    }

    #[test]
    fn summary() {
        let line = summary_line("t", "FSMD", 10.0, 10.5, 1.234, None, false);
        assert_eq!(line, "instance t variant FSMD best 10.00 avg 10.50 time 1.23 gap: n/a");
        let line = summary_line("t", "FSMD", 10.0, 10.0, 1.0, Some(10.0), true);
        assert!(line.ends_with("time - gap: 0.0000"));
    }
}
