//! The transvected copy psi_t(S) of the totally geodesic S sits at distance
//! |t| |X| from S, realized at every point of S.

use transvector::catalog::build_space_str;
use transvector::condition::to_float;
use transvector::geometry::checks::{distance_law_check, geodesic_speed, transvection_isometry};
use transvector::geometry::{Axis, ImmersionSpec};
use transvector::report::y_grid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e = build_space_str("su21")?;
    let pair = e.build_pair("real-form")?;
    let x = e.algebra.p_coordinates(&to_float(&pair.normal_frame.basis()[0]))?;
    let spec = ImmersionSpec::new(&e.algebra, &pair.s, &x, Axis::new(0.5, 3), Axis::new(0.5, 3), 1e-3)?;
    let law = distance_law_check(&spec, &[-1.0, -0.25, 0.5], &y_grid(2, 0.5, 2), 1e-3)?;
    println!("{}", serde_json::to_string_pretty(&law)?);
    println!("{:?}", geodesic_speed(&spec.space, 8, 3)?);
    println!("{:?}", transvection_isometry(&spec, 8, 3)?);
    Ok(())
}
