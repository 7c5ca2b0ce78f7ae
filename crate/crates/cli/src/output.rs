//! Result tables and field images.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{ensure, Context, Result};
use drumhead::{Grid, GridField};

/// One metric of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub name: String,
    pub metric: String,
    pub value: f64,
    pub bracket_lo: Option<f64>,
    pub bracket_hi: Option<f64>,
    pub pass: bool,
    pub h: Option<f64>,
    pub seconds: Option<f64>,
}

impl ResultRow {
    /// A row whose pass flag is `lo <= value <= hi` for the bounds that are present.
    pub fn checked(
        name: &str,
        metric: impl Into<String>,
        value: f64,
        lo: Option<f64>,
        hi: Option<f64>,
        h: Option<f64>,
    ) -> Self {
        let pass = value.is_finite()
            && lo.is_none_or(|l| value >= l)
            && hi.is_none_or(|u| value <= u);
        Self {
            name: name.to_string(),
            metric: metric.into(),
            value,
            bracket_lo: lo,
            bracket_hi: hi,
            pass,
            h,
            seconds: None,
        }
    }

    /// An informational row that always passes.
    pub fn info(name: &str, metric: impl Into<String>, value: f64, h: Option<f64>) -> Self {
        Self {
            pass: true,
            ..Self::checked(name, metric, value, None, None, h)
        }
    }

    /// A failure marker for an experiment that could not run.
    pub fn error(name: &str) -> Self {
        Self {
            pass: false,
            ..Self::checked(name, "error", f64::NAN, None, None, None)
        }
    }
}

pub const CSV_HEADER: [&str; 8] = ["name", "metric", "value", "bracket_lo", "bracket_hi", "pass", "h", "seconds"];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_csv(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.name.clone(),
            r.metric.clone(),
            r.value.to_string(),
            opt(r.bracket_lo),
            opt(r.bracket_hi),
            r.pass.to_string(),
            opt(r.h),
            opt(r.seconds),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `f` as an ASCII PGM over the grid's bounding window; exterior pixels are 0 and
/// values map linearly from `[0, max f]` to `[0, 255]`. The first row is the top of the domain.
pub fn render_field(grid: &Grid, f: &GridField, path: &Path) -> Result<()> {
    ensure!(f.key() == grid.key(), "field does not belong to the grid");
    ensure!(f.values().iter().all(|v| v.is_finite()), "field has non-finite values");
    let (i0, j0, nx, ny) = grid.window();
    let max = f.values().iter().cloned().fold(0.0f64, f64::max);
    let mut out = String::new();
    writeln!(out, "P2")?;
    writeln!(out, "# h={} scale={}", grid.h(), max)?;
    writeln!(out, "{nx} {ny}")?;
    writeln!(out, "255")?;
    for row in (0..ny).rev() {
        let line: Vec<String> = (0..nx)
            .map(|col| {
                let v = grid
                    .index_of(i0 + col as i64, j0 + row as i64)
                    .map(|k| f.values()[k])
                    .unwrap_or(0.0);
                let g = if max > 0.0 { (v.max(0.0) / max * 255.0).round() } else { 0.0 };
                (g as u8).to_string()
            })
            .collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    let mut file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use drumhead::discretize::rasterize;
    use drumhead::geometry::rectangle;
    use drumhead::{Domain, Point2};

    fn pixels(path: &Path) -> Vec<u8> {
        let text = std::fs::read_to_string(path).unwrap();
        text.lines().skip(4).flat_map(|l| l.split(' ').map(|s| s.parse().unwrap()).collect::<Vec<u8>>()).collect()
    }

    fn grid() -> Grid {
        let d: Domain = rectangle(Point2::ORIGIN, Point2::new(1.0, 1.0)).unwrap().into();
        rasterize(&d, 0.125).unwrap()
    }

    #[test]
    fn constant_and_zero_fields() {
        let g = grid();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.pgm");
        render_field(&g, &GridField::constant(&g, 3.0), &p).unwrap();
        let px = pixels(&p);
        assert_eq!(px.len(), g.window().2 * g.window().3);
        assert_eq!(px.iter().filter(|&&v| v == 255).count(), g.len());
        render_field(&g, &GridField::constant(&g, 0.0), &p).unwrap();
        assert!(pixels(&p).iter().all(|&v| v == 0));
    }

    #[test]
    fn rejects_non_finite_fields() {
        let g = grid();
        let dir = tempfile::tempdir().unwrap();
        let f = GridField::constant(&g, f64::NAN);
        assert!(render_field(&g, &f, &dir.path().join("x.pgm")).is_err());
    }

    #[test]
    fn pass_flags_follow_brackets() {
        assert!(ResultRow::checked("e", "m", 1.0, Some(0.5), Some(1.0), None).pass);
        assert!(!ResultRow::checked("e", "m", 1.1, None, Some(1.0), None).pass);
        assert!(!ResultRow::checked("e", "m", f64::NAN, None, None, None).pass);
        assert!(!ResultRow::error("e").pass);
    }
}
