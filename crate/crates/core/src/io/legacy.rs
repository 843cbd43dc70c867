//! Converter for the TSPLIB-style layout most benchmark collections use:
//! 1-based node ids, a `DEPOT_SECTION`, and no per-type vehicle data.
//!
//! The fleet comes from, in order of preference: the `fleet` argument, a
//! `VEHICLE_SECTION` block of `capacity fixed unit count` lines ended by
//! `-1`, or the embedded benchmark table matched by instance name.

use crate::error::{Error, Result};
use crate::io::fleets::benchmark_fleet;
use crate::model::{Instance, Variant, VehicleType};

/// Heuristic format sniffing: legacy files have a depot section or TSPLIB
/// header keys and lack the native vehicle block.
pub fn looks_legacy(text: &str) -> bool {
    let upper = text.to_ascii_uppercase();
    !upper.contains("VEHICLE_TYPES")
        && (upper.contains("DEPOT_SECTION") || upper.contains("EDGE_WEIGHT_TYPE") || upper.contains("CAPACITY"))
}

fn header_key(line: &str) -> Option<(String, String)> {
    let (k, v) = line.split_once(':')?;
    Some((k.trim().to_ascii_uppercase(), v.trim().to_string()))
}

pub fn convert_legacy(
    text: &str,
    fallback_name: &str,
    variant: Option<Variant>,
    fleet: Option<Vec<VehicleType>>,
) -> Result<Instance> {
    let mut name = None;
    let mut declared = None;
    let mut nodes: Vec<(usize, f64, f64)> = Vec::new();
    let mut demand: Vec<(usize, u32)> = Vec::new();
    let mut depot = None;
    let mut vehicles: Vec<VehicleType> = Vec::new();
    let mut section = "";

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let upper = line.to_ascii_uppercase();
        if upper.ends_with("_SECTION") {
            section = match upper.as_str() {
                "NODE_COORD_SECTION" => "coord",
                "DEMAND_SECTION" => "demand",
                "DEPOT_SECTION" => "depot",
                "VEHICLE_SECTION" => "vehicle",
                _ => return Err(Error::parse(line_no, format!("unsupported section `{line}`"))),
            };
            continue;
        }
        if upper == "EOF" {
            break;
        }
        if let Some((key, value)) = header_key(line) {
            match key.as_str() {
                "NAME" => name = Some(value),
                "VARIANT" => declared = Some(value.parse::<Variant>()?),
                _ => {}
            }
            section = "";
            continue;
        }
        let t: Vec<&str> = line.split_whitespace().collect();
        let num =
            |s: &str| -> Result<f64> { s.parse().map_err(|_| Error::parse(line_no, format!("invalid number `{s}`"))) };
        let id =
            |s: &str| -> Result<usize> { s.parse().map_err(|_| Error::parse(line_no, format!("invalid id `{s}`"))) };
        match section {
            "coord" if t.len() == 3 => nodes.push((id(t[0])?, num(t[1])?, num(t[2])?)),
            "demand" if t.len() == 2 => {
                let q: u32 = t[1].parse().map_err(|_| Error::parse(line_no, format!("invalid demand `{}`", t[1])))?;
                demand.push((id(t[0])?, q));
            }
            "depot" => {
                if t[0] != "-1" && depot.is_none() {
                    depot = Some(id(t[0])?);
                }
            }
            "vehicle" if t[0] == "-1" => section = "",
            "vehicle" if t.len() == 4 => {
                let cap: u32 = t[0].parse().map_err(|_| Error::parse(line_no, "invalid capacity"))?;
                vehicles.push(VehicleType::new(cap, num(t[1])?, num(t[2])?, id(t[3])?));
            }
            _ => return Err(Error::parse(line_no, format!("unexpected line `{line}`"))),
        }
    }

    if nodes.is_empty() {
        return Err(Error::invalid("legacy file has no NODE_COORD_SECTION entries"));
    }
    if demand.len() != nodes.len() {
        return Err(Error::invalid(format!("{} coordinates but {} demands", nodes.len(), demand.len())));
    }
    nodes.sort_by_key(|n| n.0);
    demand.sort_by_key(|d| d.0);
    let depot = depot.unwrap_or(nodes[0].0);
    let depot_at = nodes
        .iter()
        .position(|n| n.0 == depot)
        .ok_or_else(|| Error::invalid(format!("depot id {depot} has no coordinates")))?;

    let order: Vec<usize> = std::iter::once(depot_at).chain((0..nodes.len()).filter(|&i| i != depot_at)).collect();
    let coords = order.iter().map(|&i| (nodes[i].1, nodes[i].2)).collect();
    let mut demands: Vec<u32> = Vec::with_capacity(order.len());
    for &i in &order {
        let (did, q) = demand[i];
        if did != nodes[i].0 {
            return Err(Error::invalid(format!("node {} has no demand entry", nodes[i].0)));
        }
        demands.push(q);
    }

    let name = name.unwrap_or_else(|| fallback_name.to_string());
    let fleet = match fleet {
        Some(f) => f,
        None if !vehicles.is_empty() => vehicles,
        None => benchmark_fleet(&name)
            .or_else(|| benchmark_fleet(fallback_name))
            .map(|b| b.fleet())
            .ok_or_else(|| Error::invalid(format!("no vehicle data for `{name}`")))?,
    };
    let variant = variant.or(declared).ok_or_else(|| Error::invalid("variant not given"))?;
    Instance::new(name, variant, coords, demands, fleet)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEGACY: &str = "NAME : 13\nTYPE : CVRP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nCAPACITY : 200\nNODE_COORD_SECTION\n1 5 5\n2 0 0\n3 8 1\nDEMAND_SECTION\n1 4\n2 0\n3 9\nDEPOT_SECTION\n2\n-1\nEOF\n";

    #[test]
    fn depot_moves_to_zero_and_fleet_is_embedded() {
        assert!(looks_legacy(LEGACY));
        let i = convert_legacy(LEGACY, "", Some(Variant::Hvrpfd), None).unwrap();
        assert_eq!(i.coords, vec![(0.0, 0.0), (5.0, 5.0), (8.0, 1.0)]);
        assert_eq!(i.demands, vec![0, 4, 9]);
        assert_eq!(i.raw_fleet.len(), 6);
    }

    #[test]
    fn vehicle_block() {
        let text = LEGACY.replace("NAME : 13", "NAME : custom").replace("EOF", "VEHICLE_SECTION\n10 5 1.0 2\n-1\nEOF");
        let i = convert_legacy(&text, "", Some(Variant::Hvrpd), None).unwrap();
        assert_eq!(i.raw_fleet, vec![VehicleType::new(10, 5.0, 1.0, 2)]);
        let unknown = LEGACY.replace("NAME : 13", "NAME : custom");
        assert!(convert_legacy(&unknown, "", Some(Variant::Hvrpd), None).is_err());
    }
}
