#![allow(dead_code)]

use std::path::Path;

/// `J_0(x)` from its power series; accurate to ~1e-15 for `x <= 10`.
pub fn bessel_j0(x: f64) -> f64 {
    let q = -(x * x) / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..200 {
        term *= q / (m as f64 * m as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    sum
}

/// First positive zero of `J_0` by bisection on `[2, 3]`.
pub fn j0_first_zero() -> f64 {
    let (mut a, mut b) = (2.0f64, 3.0f64);
    assert!(bessel_j0(a) > 0.0 && bessel_j0(b) < 0.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if bessel_j0(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[derive(Debug, Clone)]
pub struct Row {
    pub name: String,
    pub metric: String,
    pub value: f64,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub pass: bool,
    pub h: Option<f64>,
}

fn opt(s: &str) -> Option<f64> {
    (!s.is_empty()).then(|| s.parse().expect("numeric field"))
}

pub fn read_results(path: &Path) -> Vec<Row> {
    let mut r = csv::Reader::from_path(path).expect("results.csv");
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["name", "metric", "value", "bracket_lo", "bracket_hi", "pass", "h", "seconds"]);
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            Row {
                name: rec[0].to_string(),
                metric: rec[1].to_string(),
                value: rec[2].parse().unwrap(),
                lo: opt(&rec[3]),
                hi: opt(&rec[4]),
                pass: &rec[5] == "true",
                h: opt(&rec[6]),
            }
        })
        .collect()
}

pub fn workspace_root() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR")).parent().unwrap().parent().unwrap()
}
