//! Point clouds of the extended immersion for external viewers.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::immersion::{mean_curvature_estimate, ImmersionSpec};

/// Largest grid that will be written.
pub const MAX_EXPORT_NODES: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Ply,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "ply" => Ok(Format::Ply),
            other => Err(Error::Config(format!("unknown export format '{other}' (csv or ply)"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExportSummary {
    pub path: String,
    pub format: Format,
    pub rows: usize,
    pub max_mean_curvature: f64,
}

struct Row {
    t: f64,
    y: Vec<f64>,
    p: Vec<f64>,
    mean_h: f64,
}

/// Writes one row (CSV) or vertex (PLY) per node of the grid of `spec`.
///
/// CSV columns are `t, Y1..Yk, P1..Pd, meanH`. PLY vertices are the first
/// three chart coordinates, zero padded when `dim p < 3`. The file appears
/// atomically; nothing is created when the grid is refused or a node fails.
pub fn export_point_cloud(spec: &ImmersionSpec, path: &Path, format: Format) -> Result<ExportSummary> {
    let nodes = spec.grid_size();
    if nodes > MAX_EXPORT_NODES {
        return Err(Error::GridTooLarge { nodes, limit: MAX_EXPORT_NODES });
    }
    let rows: Vec<Row> = spec
        .grid()
        .par_iter()
        .map(|(t, y)| {
            let p = spec.chart(*t, y)?;
            let mean_h = mean_curvature_estimate(spec, *t, y)?.norm;
            Ok(Row { t: *t, y: y.clone(), p, mean_h })
        })
        .collect::<Result<_>>()?;
    let mut body = Vec::new();
    match format {
        Format::Csv => {
            let mut header = vec!["t".to_string()];
            header.extend((1..=spec.dim_s()).map(|i| format!("Y{i}")));
            header.extend((1..=spec.space.dim()).map(|i| format!("P{i}")));
            header.push("meanH".into());
            writeln!(body, "{}", header.join(","))?;
            for r in &rows {
                let mut cells = vec![format!("{:e}", r.t)];
                cells.extend(r.y.iter().chain(&r.p).map(|v| format!("{v:e}")));
                cells.push(format!("{:e}", r.mean_h));
                writeln!(body, "{}", cells.join(","))?;
            }
        }
        Format::Ply => {
            writeln!(body, "ply\nformat ascii 1.0")?;
            writeln!(body, "comment vertices are chart coordinates P1 P2 P3 of {} (dim p = {})", spec.space.algebra().name(), spec.space.dim())?;
            writeln!(body, "element vertex {}", rows.len())?;
            writeln!(body, "property double x\nproperty double y\nproperty double z\nend_header")?;
            for r in &rows {
                let c = |i: usize| r.p.get(i).copied().unwrap_or(0.0);
                writeln!(body, "{:e} {:e} {:e}", c(0), c(1), c(2))?;
            }
        }
    }
    write_atomic(path, &body)?;
    Ok(ExportSummary {
        path: path.display().to_string(),
        format,
        rows: rows.len(),
        max_mean_curvature: rows.iter().map(|r| r.mean_h).fold(0.0, f64::max),
    })
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_space_str;
    use crate::geometry::immersion::Axis;

    fn spec(t: Axis, y: Axis) -> ImmersionSpec {
        let e = build_space_str("su21").unwrap();
        let pair = e.build_pair("real-form").unwrap();
        let x = e.algebra.p_coordinates(&pair.normal_frame.basis()[0].to_f64()).unwrap();
        ImmersionSpec::new(&e.algebra, &pair.s, &x, t, y, 1e-3).unwrap()
    }

    #[test]
    fn single_node_csv_and_ply() {
        let dir = tempfile::tempdir().unwrap();
        let s = spec(Axis::new(0.5, 1), Axis::new(0.5, 1));
        let csv = dir.path().join("one.csv");
        let sum = export_point_cloud(&s, &csv, Format::Csv).unwrap();
        assert_eq!(sum.rows, 1);
        let text = std::fs::read_to_string(&csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,Y1,Y2,P1,P2,P3,P4,meanH");
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split(',').count(), 8);
        let ply = dir.path().join("one.ply");
        export_point_cloud(&s, &ply, Format::Ply).unwrap();
        let text = std::fs::read_to_string(&ply).unwrap();
        assert!(text.starts_with("ply\n") && text.contains("element vertex 1\n"));
        assert_eq!(text.lines().last().unwrap(), "0e0 0e0 0e0");
    }

    #[test]
    fn oversized_grid_is_refused_before_writing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("big.csv");
        let s = spec(Axis::new(0.5, 1100), Axis::new(0.5, 100));
        assert_eq!(s.grid_size(), 11_000_000);
        let r = export_point_cloud(&s, &path, Format::Csv);
        assert!(matches!(r, Err(Error::GridTooLarge { nodes: 11_000_000, .. })));
        assert!(!path.exists());
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn formats_parse() {
        assert_eq!("PLY".parse::<Format>().unwrap(), Format::Ply);
        assert!("obj".parse::<Format>().is_err());
    }
}
