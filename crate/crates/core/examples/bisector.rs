//! The complex-hyperplane extension is equidistant from z+- = exp(+-r JX) . o;
//! the real-form extension is not.

use transvector::catalog::{bisector_equidistance_check, build_space_str};
use transvector::condition::to_float;
use transvector::geometry::Axis;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e = build_space_str("su21")?;
    let grid = Axis::new(0.5, 5);
    for name in ["complex-hyperplane", "real-form"] {
        let pair = e.build_pair(name)?;
        let x = e.algebra.p_coordinates(&to_float(&pair.normal_frame.basis()[0]))?;
        let r = bisector_equidistance_check(&e, &pair, &x, 0.5, grid, grid, 1e-8)?;
        println!(
            "{name:<20} nodes {}  max |d(q,z+) - d(q,z-)| = {:.2e}  equidistant {}",
            r.nodes, r.max_delta, r.equidistant
        );
    }
    Ok(())
}
