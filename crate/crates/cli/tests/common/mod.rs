#![allow(dead_code)]

use std::path::{Path, PathBuf};

use fss_core::ingest::TABLE1_INDICES;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const UCI_HEADER: &str = "Age,BMI,Glucose,Insulin,HOMA,Leptin,Adiponectin,Resistin,MCP.1,Classification";
pub const UCI_ROWS: usize = 116;
pub const UCI_HEALTHY: usize = 52;

// age, bmi, glucose, insulin, homa, leptin, adiponectin, resistin, mcp1
const TABLE1_ROWS: [[f64; 9]; 10] = [
    [82.0, 23.12, 91.0, 4.50, 1.01, 17.94, 22.43, 9.27, 554.70],
    [49.0, 23.01, 94.0, 5.66, 1.31, 35.59, 26.72, 4.58, 174.80],
    [64.0, 34.53, 95.0, 4.43, 1.04, 21.21, 5.46, 6.70, 960.25],
    [66.0, 36.21, 101.0, 15.53, 3.87, 74.71, 7.54, 22.32, 864.97],
    [71.0, 30.30, 102.0, 8.34, 2.10, 56.50, 8.13, 4.30, 198.11],
    [62.0, 22.66, 92.0, 3.48, 0.79, 9.86, 11.24, 10.69, 703.97],
    [44.0, 24.74, 106.0, 58.46, 15.29, 18.16, 16.10, 5.31, 244.75],
    [71.0, 25.51, 112.0, 10.40, 2.87, 19.07, 5.49, 22.04, 709.00],
    [82.0, 31.22, 100.0, 18.08, 4.46, 31.65, 9.92, 19.94, 1256.08],
    [57.0, 34.84, 138.0, 12.55, 4.27, 33.16, 2.36, 7.37, 714.75],
];

/// A seeded stand-in for the 116-row UCI Coimbra file: same header, same class
/// split, random plausible values, with the ten-patient sample at its rows.
pub fn synthetic_uci_csv() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(116);
    let mut out = String::from(UCI_HEADER);
    out.push('\n');
    for row in 1..=UCI_ROWS {
        let class = if row <= UCI_HEALTHY { 1 } else { 2 };
        let values: [f64; 9] = match TABLE1_INDICES.iter().position(|&i| i == row) {
            Some(k) => TABLE1_ROWS[k],
            None => [
                rng.gen_range(24..=89) as f64,
                round2(rng.gen_range(18.0..38.6)),
                rng.gen_range(60..=201) as f64,
                round2(rng.gen_range(2.4..58.5)),
                round2(rng.gen_range(0.5..25.0)),
                round2(rng.gen_range(4.3..90.3)),
                round2(rng.gen_range(1.6..38.1)),
                round2(rng.gen_range(3.2..82.1)),
                round2(rng.gen_range(45.8..1698.4)),
            ],
        };
        let cells: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
        out.push_str(&cells.join(","));
        out.push_str(&format!(",{class}\n"));
    }
    out
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

pub fn fixture_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/coimbra_synthetic.csv")
}

/// Every regular file under `dir`, as (name, bytes), sorted by name.
pub fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .filter(|e| e.file_type().unwrap().is_file())
        .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap()))
        .collect();
    out.sort();
    out
}
