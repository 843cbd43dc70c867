//! Native instance format.
//!
//! ```text
//! NAME: example
//! VARIANT: HVRPFD
//! DIMENSION: 3
//! VEHICLE_TYPES: 2
//! 10 20 1.0 2
//! 25 45 1.3 1
//! NODE_COORD_SECTION
//! 0 0 0
//! 1 3 4
//! 2 -1 6
//! DEMAND_SECTION
//! 0 0
//! 1 4
//! 2 7
//! EOF
//! ```
//!
//! `DIMENSION` counts the depot. Each vehicle line is
//! `capacity fixed_cost unit_cost [count]`; the count may be left out for
//! unlimited-fleet variants. The `:` after keywords is optional and `#`
//! starts a comment.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Instance, Variant, VehicleType, DEPOT};

struct Lines<'a> {
    inner: std::iter::Peekable<std::vec::IntoIter<(usize, Vec<&'a str>)>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let l = l.split('#').next().unwrap_or("");
                let tokens: Vec<&str> = l.split_whitespace().collect();
                (!tokens.is_empty()).then_some((i + 1, tokens))
            })
            .collect();
        Self { inner: lines.into_iter().peekable() }
    }

    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        self.inner.next()
    }
}

/// Vehicle line before validation: line number, capacity, fixed cost,
/// unit cost and optional count.
type RawVehicle = (usize, u32, f64, f64, Option<usize>);

fn number<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token.parse().map_err(|_| Error::parse(line, format!("invalid {what} `{token}`")))
}

/// Splits `KEY: value`, `KEY : value` and `KEY value`.
fn keyword<'a>(tokens: &[&'a str]) -> (String, Vec<&'a str>) {
    let first = tokens[0];
    let (key, rest_of_first) = match first.split_once(':') {
        Some((k, r)) => (k, r),
        None => (first, ""),
    };
    let mut values: Vec<&str> = Vec::new();
    if !rest_of_first.is_empty() {
        values.push(rest_of_first);
    }
    for t in &tokens[1..] {
        if *t != ":" {
            values.push(t.trim_start_matches(':'));
        }
    }
    values.retain(|v| !v.is_empty());
    (key.to_ascii_uppercase(), values)
}

fn single<'a>(line: usize, key: &str, values: &[&'a str]) -> Result<&'a str> {
    match values {
        [v] => Ok(v),
        _ => Err(Error::parse(line, format!("{key} expects one value"))),
    }
}

/// Parses the native format. `variant` overrides the file's `VARIANT`.
pub fn parse_instance(text: &str, variant: Option<Variant>) -> Result<Instance> {
    let mut lines = Lines::new(text);
    let mut name = None;
    let mut declared = None;
    let mut dimension: Option<(usize, usize)> = None;
    let mut raw_fleet: Option<Vec<RawVehicle>> = None;
    let mut coords: Option<Vec<(f64, f64)>> = None;
    let mut demands: Option<Vec<u32>> = None;
    let mut demand_lines = Vec::new();
    let mut last_line = 0;

    while let Some((line, tokens)) = lines.next() {
        last_line = line;
        let (key, values) = keyword(&tokens);
        match key.as_str() {
            "NAME" => name = Some(values.join(" ")),
            "VARIANT" => declared = Some(single(line, &key, &values)?.parse::<Variant>()?),
            "DIMENSION" => {
                let d: usize = number(line, single(line, &key, &values)?, "dimension")?;
                if d < 2 {
                    return Err(Error::parse(line, "DIMENSION must count the depot and at least one customer"));
                }
                dimension = Some((d, line));
            }
            "VEHICLE_TYPES" => {
                let h: usize = number(line, single(line, &key, &values)?, "type count")?;
                if h == 0 {
                    return Err(Error::parse(line, "at least one vehicle type is required"));
                }
                let mut fleet = Vec::with_capacity(h);
                for _ in 0..h {
                    let Some((l, t)) = lines.next() else {
                        return Err(Error::parse(line, format!("expected {h} vehicle type lines")));
                    };
                    if !(3..=4).contains(&t.len()) {
                        return Err(Error::parse(l, "vehicle line needs `capacity fixed unit [count]`"));
                    }
                    let count = t.get(3).map(|c| number(l, c, "count")).transpose()?;
                    fleet.push((
                        l,
                        number(l, t[0], "capacity")?,
                        number(l, t[1], "fixed cost")?,
                        number(l, t[2], "unit cost")?,
                        count,
                    ));
                }
                raw_fleet = Some(fleet);
            }
            "NODE_COORD_SECTION" => {
                let (d, _) =
                    dimension.ok_or_else(|| Error::parse(line, "DIMENSION must precede NODE_COORD_SECTION"))?;
                let mut c = Vec::with_capacity(d);
                for id in 0..d {
                    let (l, t) =
                        lines.next().ok_or_else(|| Error::parse(line, format!("expected {d} coordinate lines")))?;
                    if t.len() != 3 {
                        return Err(Error::parse(l, "coordinate line needs `id x y`"));
                    }
                    let got: usize = number(l, t[0], "id")?;
                    if got != id {
                        return Err(Error::parse(l, format!("expected id {id}, found {got}")));
                    }
                    c.push((number(l, t[1], "x")?, number(l, t[2], "y")?));
                }
                coords = Some(c);
            }
            "DEMAND_SECTION" => {
                let (d, _) = dimension.ok_or_else(|| Error::parse(line, "DIMENSION must precede DEMAND_SECTION"))?;
                let mut q = Vec::with_capacity(d);
                for id in 0..d {
                    let (l, t) =
                        lines.next().ok_or_else(|| Error::parse(line, format!("expected {d} demand lines")))?;
                    if t.len() != 2 {
                        return Err(Error::parse(l, "demand line needs `id q`"));
                    }
                    let got: usize = number(l, t[0], "id")?;
                    if got != id {
                        return Err(Error::parse(l, format!("expected id {id}, found {got}")));
                    }
                    let demand: u32 = number(l, t[1], "demand")?;
                    if id == DEPOT && demand != 0 {
                        return Err(Error::parse(l, "depot demand must be 0"));
                    }
                    if id != DEPOT && demand == 0 {
                        return Err(Error::parse(l, format!("customer {id} has zero demand")));
                    }
                    q.push(demand);
                    demand_lines.push(l);
                }
                demands = Some(q);
            }
            "EOF" => break,
            other => return Err(Error::parse(line, format!("unknown keyword `{other}`"))),
        }
    }

    let end = last_line + 1;
    let (d, _) = dimension.ok_or_else(|| Error::parse(end, "missing DIMENSION"))?;
    let raw_fleet = raw_fleet.ok_or_else(|| Error::parse(end, "missing VEHICLE_TYPES"))?;
    let coords = coords.ok_or_else(|| Error::parse(end, "missing NODE_COORD_SECTION"))?;
    let demands = demands.ok_or_else(|| Error::parse(end, "missing DEMAND_SECTION"))?;
    let variant =
        variant.or(declared).ok_or_else(|| Error::parse(end, "missing VARIANT (give one on the command line)"))?;
    let n = d - 1;

    let mut fleet = Vec::with_capacity(raw_fleet.len());
    for &(l, capacity, fixed, unit, count) in &raw_fleet {
        let count = match count {
            Some(c) => c,
            None if !variant.limited_fleet() => n,
            None => return Err(Error::parse(l, format!("{variant} needs a vehicle count"))),
        };
        fleet.push(VehicleType::new(capacity, fixed, unit, count));
    }
    let max_cap = fleet.iter().map(|t| t.capacity).max().unwrap_or(0);
    for &(l, capacity, ..) in &raw_fleet {
        if capacity == 0 {
            return Err(Error::parse(l, "capacity must be positive"));
        }
    }
    if let Some(v) = demands.iter().position(|&q| q > max_cap) {
        return Err(Error::parse(
            demand_lines[v],
            format!("customer {v} demand {} exceeds every vehicle capacity ({max_cap})", demands[v]),
        ));
    }
    Instance::new(name.unwrap_or_else(|| "unnamed".into()), variant, coords, demands, fleet)
}

/// Writes an instance in the native format (raw fleet, counts included).
pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME: {}", instance.name);
    let _ = writeln!(out, "VARIANT: {}", instance.variant);
    let _ = writeln!(out, "DIMENSION: {}", instance.coords.len());
    let _ = writeln!(out, "VEHICLE_TYPES: {}", instance.raw_fleet.len());
    for t in &instance.raw_fleet {
        let _ = writeln!(out, "{} {} {} {}", t.capacity, t.fixed_cost, t.unit_cost, t.count);
    }
    out.push_str("NODE_COORD_SECTION\n");
    for (i, (x, y)) in instance.coords.iter().enumerate() {
        let _ = writeln!(out, "{i} {x} {y}");
    }
    out.push_str("DEMAND_SECTION\n");
    for (i, q) in instance.demands.iter().enumerate() {
        let _ = writeln!(out, "{i} {q}");
    }
    out.push_str("EOF\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "NAME: tiny\nVARIANT: FSMD\nDIMENSION: 2\nVEHICLE_TYPES: 1\n10 0 1.0\nNODE_COORD_SECTION\n0 0 0\n1 3 4\nDEMAND_SECTION\n0 0\n1 5\nEOF\n";

    #[test]
    fn round_trip() {
        let a = parse_instance(TINY, None).unwrap();
        assert_eq!(a.n(), 1);
        assert_eq!(a.raw_fleet[0].count, 1);
        let b = parse_instance(&write_instance(&a), None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn keyword_spacing() {
        let text = TINY.replace("DIMENSION: 2", "DIMENSION : 2").replace("NAME: tiny", "NAME tiny");
        assert_eq!(parse_instance(&text, None).unwrap().name, "tiny");
    }

    #[test]
    fn errors_name_lines() {
        let bad = TINY.replace("1 5\nEOF", "1 0\nEOF");
        match parse_instance(&bad, None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 11),
            other => panic!("{other:?}"),
        }
        let skipped = TINY.replace("1 3 4", "2 3 4");
        assert!(matches!(parse_instance(&skipped, None), Err(Error::Parse { line: 8, .. })));
        let depot = TINY.replace("0 0\n1 5", "0 3\n1 5");
        assert!(matches!(parse_instance(&depot, None), Err(Error::Parse { line: 10, .. })));
        let missing = TINY.replace("DEMAND_SECTION\n0 0\n1 5\n", "");
        assert!(matches!(parse_instance(&missing, None), Err(Error::Parse { .. })));
        let limited = TINY.replace("FSMD", "HVRPD");
        assert!(matches!(parse_instance(&limited, None), Err(Error::Parse { line: 5, .. })));
        let big = TINY.replace("1 5\nEOF", "1 50\nEOF");
        assert!(matches!(parse_instance(&big, None), Err(Error::Parse { line: 11, .. })));
    }

    #[test]
    fn override_variant() {
        let i = parse_instance(TINY, Some(Variant::Fsmf)).unwrap();
        assert_eq!(i.variant, Variant::Fsmf);
        let no_variant = TINY.replace("VARIANT: FSMD\n", "");
        assert!(parse_instance(&no_variant, None).is_err());
        assert!(parse_instance(&no_variant, Some(Variant::Fsmd)).is_ok());
    }
}
