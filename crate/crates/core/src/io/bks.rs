//! Best-known solution values and the relative gap.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::fleets::canonical_name;
use crate::model::Variant;

/// Environment variable naming an extra BKS file.
pub const BKS_ENV: &str = "HFVRP_BKS";

const SEEDED: &[(Variant, &[(&str, f64)])] = &[
    (
        Variant::Hvrpfd,
        &[
            ("13", 3185.09),
            ("14", 10107.53),
            ("15", 3065.29),
            ("16", 3265.41),
            ("17", 2076.96),
            ("18", 3743.58),
            ("19", 10420.34),
            ("20", 4760.68),
        ],
    ),
    (
        Variant::Hvrpd,
        &[
            ("13", 1517.84),
            ("14", 607.53),
            ("15", 1015.29),
            ("16", 1144.94),
            ("17", 1061.96),
            ("18", 1823.58),
            ("19", 1117.51),
            ("20", 1534.17),
            ("N1", 2233.90),
            ("N2", 2851.94),
            ("N3", 2378.99),
            ("N4", 1839.22),
            ("N5", 2047.81),
            ("H1", 12050.08),
            ("H2", 10130.30),
            ("H3", 16192.26),
            ("H4", 17273.75),
            ("H5", 23024.58),
        ],
    ),
    (
        Variant::Fsmfd,
        &[
            ("3", 1144.22),
            ("4", 6437.33),
            ("5", 1322.26),
            ("6", 6516.47),
            ("13", 2964.65),
            ("14", 9126.90),
            ("15", 2634.96),
            ("16", 3168.92),
            ("17", 2004.48),
            ("18", 3147.99),
            ("19", 8661.81),
            ("20", 4153.02),
        ],
    ),
    (
        Variant::Fsmf,
        &[
            ("3", 961.03),
            ("4", 6437.33),
            ("5", 1007.05),
            ("6", 6516.47),
            ("13", 2406.36),
            ("14", 9119.03),
            ("15", 2586.37),
            ("16", 2720.43),
            ("17", 1734.53),
            ("18", 2369.65),
            ("19", 8661.81),
            ("20", 4029.61),
        ],
    ),
    (
        Variant::Fsmd,
        &[
            ("3", 623.22),
            ("4", 387.18),
            ("5", 742.87),
            ("6", 415.03),
            ("13", 1491.86),
            ("14", 603.21),
            ("15", 999.82),
            ("16", 1131.00),
            ("17", 1038.60),
            ("18", 1800.80),
            ("19", 1105.44),
            ("20", 1530.43),
            ("N1", 2211.63),
            ("N2", 2811.37),
            ("N3", 2234.57),
            ("N4", 1822.78),
            ("N5", 2016.79),
        ],
    ),
];

/// `(instance, variant) -> best-known cost`. Instance names are compared
/// after [`canonical_name`].
#[derive(Debug, Clone, Default)]
pub struct BksRegistry {
    values: BTreeMap<(String, Variant), f64>,
}

impl BksRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Published values for the classic benchmarks.
    pub fn seeded() -> Self {
        let mut r = Self::empty();
        for (variant, rows) in SEEDED {
            for &(name, cost) in *rows {
                r.insert(name, *variant, cost);
            }
        }
        r
    }

    /// Seeded values, then the file named by `HFVRP_BKS` if set.
    pub fn from_env() -> Result<Self> {
        let mut r = Self::seeded();
        if let Some(path) = std::env::var_os(BKS_ENV) {
            r.load(Path::new(&path))?;
        }
        Ok(r)
    }

    pub fn insert(&mut self, name: &str, variant: Variant, cost: f64) {
        self.values.insert((canonical_name(name), variant), cost);
    }

    pub fn get(&self, name: &str, variant: Variant) -> Option<f64> {
        self.values.get(&(canonical_name(name), variant)).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Adds `name variant cost` lines; later entries win. Blank lines and
    /// `#` comments are skipped.
    pub fn extend_from_str(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let t: Vec<&str> = line.split_whitespace().collect();
            let [name, variant, cost] = t[..] else {
                return Err(Error::parse(i + 1, "expected `name variant cost`"));
            };
            let variant: Variant = variant.parse()?;
            let cost: f64 = cost.parse().map_err(|_| Error::parse(i + 1, format!("invalid cost `{cost}`")))?;
            self.insert(name, variant, cost);
        }
        Ok(())
    }

    pub fn load(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
        self.extend_from_str(&text)
    }
}

/// Relative gap in percent.
pub fn gap(avg: f64, bks: f64) -> Result<f64> {
    if bks.is_nan() || bks <= 0.0 {
        return Err(Error::Domain(bks));
    }
    Ok(100.0 * (avg - bks) / bks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_values() {
        assert_eq!(format!("{:.4}", gap(10110.61, 10107.53).unwrap()), "0.0305");
        assert_eq!(gap(5.0, 5.0).unwrap(), 0.0);
        assert_eq!(gap(10.0, 5.0).unwrap(), 100.0);
        assert!(matches!(gap(1.0, 0.0), Err(Error::Domain(_))));
        assert!(gap(1.0, -2.0).is_err());
    }

    #[test]
    fn seeded_lookup() {
        let r = BksRegistry::seeded();
        assert_eq!(r.get("golden_14", Variant::Hvrpfd), Some(10107.53));
        assert_eq!(r.get("3", Variant::Fsmd), Some(623.22));
        assert_eq!(r.get("3", Variant::Hvrpfd), None);
        assert_eq!(r.len(), 8 + 18 + 12 + 12 + 17);
    }

    #[test]
    fn user_file() {
        let mut r = BksRegistry::seeded();
        r.extend_from_str("# mine\ntiny fsmd 12.5\n3 FSMD 600\n").unwrap();
        assert_eq!(r.get("tiny", Variant::Fsmd), Some(12.5));
        assert_eq!(r.get("3", Variant::Fsmd), Some(600.0));
        assert!(r.extend_from_str("bad line").is_err());
    }
}
