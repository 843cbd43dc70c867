//! Vehicle fleets of the 22 classic benchmark instances. Coordinates and
//! demands are not included; see [`crate::io::legacy`] for combining a
//! coordinate file with these fleets.

use crate::model::VehicleType;

/// `(capacity, fixed cost, unit cost, count)`.
type Row = (u32, f64, f64, usize);

pub struct BenchmarkFleet {
    pub name: &'static str,
    /// Customer count.
    pub n: usize,
    rows: &'static [Row],
}

impl BenchmarkFleet {
    pub fn fleet(&self) -> Vec<VehicleType> {
        self.rows.iter().map(|&(q, f, r, u)| VehicleType::new(q, f, r, u)).collect()
    }
}

const G3: &[Row] =
    &[(20, 20.0, 1.0, 20), (30, 35.0, 1.1, 20), (40, 50.0, 1.2, 20), (70, 120.0, 1.7, 20), (120, 225.0, 2.5, 20)];
const G4: &[Row] = &[(60, 1000.0, 1.0, 20), (80, 1500.0, 1.1, 20), (150, 3000.0, 1.4, 20)];
const G6: &[Row] = &[(60, 1000.0, 1.0, 20), (30, 1500.0, 1.1, 20), (150, 3000.0, 1.4, 20)];

pub const BENCHMARK_FLEETS: &[BenchmarkFleet] = &[
    BenchmarkFleet { name: "3", n: 20, rows: G3 },
    BenchmarkFleet { name: "4", n: 20, rows: G4 },
    BenchmarkFleet { name: "5", n: 20, rows: G3 },
    BenchmarkFleet { name: "6", n: 20, rows: G6 },
    BenchmarkFleet {
        name: "13",
        n: 50,
        rows: &[
            (20, 20.0, 1.0, 4),
            (30, 35.0, 1.1, 2),
            (40, 50.0, 1.2, 4),
            (70, 120.0, 1.7, 4),
            (120, 225.0, 2.5, 2),
            (200, 400.0, 3.2, 1),
        ],
    },
    BenchmarkFleet { name: "14", n: 50, rows: &[(120, 1000.0, 1.0, 4), (160, 1500.0, 1.1, 2), (300, 3500.0, 1.4, 1)] },
    BenchmarkFleet { name: "15", n: 50, rows: &[(50, 100.0, 1.0, 4), (100, 250.0, 1.6, 3), (160, 450.0, 2.0, 2)] },
    BenchmarkFleet { name: "16", n: 50, rows: &[(40, 100.0, 1.0, 2), (80, 200.0, 1.6, 4), (140, 400.0, 2.1, 3)] },
    BenchmarkFleet {
        name: "17",
        n: 75,
        rows: &[(50, 25.0, 1.0, 4), (120, 80.0, 1.2, 4), (200, 150.0, 1.5, 2), (350, 320.0, 1.8, 1)],
    },
    BenchmarkFleet {
        name: "18",
        n: 75,
        rows: &[
            (20, 10.0, 1.0, 4),
            (50, 35.0, 1.3, 4),
            (100, 100.0, 1.9, 2),
            (150, 180.0, 2.4, 2),
            (250, 400.0, 2.9, 1),
            (400, 800.0, 3.2, 1),
        ],
    },
    BenchmarkFleet { name: "19", n: 100, rows: &[(100, 500.0, 1.0, 4), (200, 1200.0, 1.4, 3), (300, 2100.0, 1.7, 3)] },
    BenchmarkFleet { name: "20", n: 100, rows: &[(60, 100.0, 1.0, 6), (140, 300.0, 1.7, 4), (200, 500.0, 2.0, 3)] },
    BenchmarkFleet {
        name: "N1",
        n: 150,
        rows: &[(50, 0.0, 1.0, 5), (100, 0.0, 1.5, 4), (150, 0.0, 1.9, 4), (200, 0.0, 2.2, 3), (250, 0.0, 2.6, 2)],
    },
    BenchmarkFleet {
        name: "N2",
        n: 199,
        rows: &[
            (50, 0.0, 1.0, 8),
            (100, 0.0, 1.5, 6),
            (150, 0.0, 1.9, 5),
            (200, 0.0, 2.2, 4),
            (250, 0.0, 2.6, 2),
            (350, 0.0, 3.2, 1),
        ],
    },
    BenchmarkFleet {
        name: "N3",
        n: 120,
        rows: &[(50, 0.0, 1.0, 6), (100, 0.0, 1.5, 3), (150, 0.0, 1.9, 3), (200, 0.0, 2.2, 2)],
    },
    BenchmarkFleet {
        name: "N4",
        n: 100,
        rows: &[(50, 0.0, 1.0, 4), (120, 0.0, 1.6, 4), (180, 0.0, 2.1, 4), (240, 0.0, 2.6, 2)],
    },
    BenchmarkFleet {
        name: "N5",
        n: 134,
        rows: &[(900, 0.0, 1.0, 5), (1500, 0.0, 1.5, 3), (2000, 0.0, 1.8, 2), (2500, 0.0, 2.2, 1)],
    },
    BenchmarkFleet {
        name: "H1",
        n: 200,
        rows: &[(50, 0.0, 1.0, 8), (100, 0.0, 1.1, 6), (200, 0.0, 1.2, 4), (500, 0.0, 1.7, 3), (1000, 0.0, 2.5, 1)],
    },
    BenchmarkFleet {
        name: "H2",
        n: 240,
        rows: &[(50, 0.0, 1.0, 10), (100, 0.0, 1.1, 5), (200, 0.0, 1.2, 5), (500, 0.0, 1.7, 4), (1000, 0.0, 2.5, 1)],
    },
    BenchmarkFleet {
        name: "H3",
        n: 280,
        rows: &[(50, 0.0, 1.0, 10), (100, 0.0, 1.1, 5), (200, 0.0, 1.2, 5), (500, 0.0, 1.7, 4), (1000, 0.0, 2.5, 2)],
    },
    BenchmarkFleet {
        name: "H4",
        n: 320,
        rows: &[
            (50, 0.0, 1.0, 10),
            (100, 0.0, 1.1, 8),
            (200, 0.0, 1.2, 5),
            (500, 0.0, 1.7, 2),
            (1000, 0.0, 2.5, 2),
            (1500, 0.0, 3.0, 1),
        ],
    },
    BenchmarkFleet {
        name: "H5",
        n: 360,
        rows: &[
            (50, 0.0, 1.0, 10),
            (100, 0.0, 1.2, 8),
            (200, 0.0, 1.5, 5),
            (500, 0.0, 1.8, 1),
            (1500, 0.0, 2.5, 2),
            (2000, 0.0, 3.0, 1),
        ],
    },
];

/// Maps common spellings (`golden_13`, `G13.txt`, `n1`) to the short
/// benchmark names used here (`13`, `N1`).
pub fn canonical_name(name: &str) -> String {
    let stem = name.rsplit(['/', '\\']).next().unwrap_or(name);
    let stem = stem.split('.').next().unwrap_or(stem).to_ascii_uppercase();
    let trimmed = stem.trim_start_matches("GOLDEN").trim_start_matches(['_', '-', ' ']).to_string();
    let digits_from = trimmed.find(|c: char| c.is_ascii_digit());
    match digits_from {
        Some(i) if trimmed[i..].chars().all(|c| c.is_ascii_digit()) => {
            let prefix = &trimmed[..i];
            let number = trimmed[i..].trim_start_matches('0');
            match prefix {
                "" | "G" => number.to_string(),
                "N" | "H" => format!("{prefix}{number}"),
                _ => stem,
            }
        }
        _ => stem,
    }
}

pub fn benchmark_fleet(name: &str) -> Option<&'static BenchmarkFleet> {
    let key = canonical_name(name);
    BENCHMARK_FLEETS.iter().find(|f| f.name == key)
}
