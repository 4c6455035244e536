//! Writes the complex-hyperplane extension as CSV and PLY point clouds.
//!
//! Usage: cargo run --release --example export_point_cloud [dir]

use std::path::PathBuf;

use transvector::catalog::build_space_str;
use transvector::condition::to_float;
use transvector::export::{export_point_cloud, Format};
use transvector::geometry::{Axis, ImmersionSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let e = build_space_str("su21")?;
    let pair = e.build_pair("complex-hyperplane")?;
    let x = e.algebra.p_coordinates(&to_float(&pair.normal_frame.basis()[0]))?;
    let spec = ImmersionSpec::new(&e.algebra, &pair.s, &x, Axis::new(0.5, 4), Axis::new(0.5, 4), 1e-3)?;
    for (format, ext) in [(Format::Csv, "csv"), (Format::Ply, "ply")] {
        let s = export_point_cloud(&spec, &dir.join(format!("hyperplane.{ext}")), format)?;
        println!("{} rows -> {}  (max |H| {:.1e})", s.rows, s.path, s.max_mean_curvature);
    }
    Ok(())
}
