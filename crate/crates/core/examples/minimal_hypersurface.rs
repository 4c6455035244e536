//! Mean curvature of the extension f(t, y) = exp(tX) exp(Y) . o in complex
//! hyperbolic space, for the real form and the complex hyperplane, and for a
//! non-reflective sl(3,R) line where it is visibly nonzero.

use transvector::catalog::build_space_str;
use transvector::condition::{condition_holds, normal_grid, to_float};
use transvector::geometry::immersion::curvature_report;
use transvector::geometry::{Axis, ImmersionSpec, Surface};

fn show(label: &str, spec: &ImmersionSpec) -> Result<(), Box<dyn std::error::Error>> {
    let ext = curvature_report(spec, Surface::Extension)?;
    let base = curvature_report(spec, Surface::Baseline)?;
    println!(
        "{label:<28} nodes {:>3}  max |H| {:.2e}  at h/2 {:.2e}  ratio {:.2}  baseline {:.1e}",
        ext.nodes.len(),
        ext.max_norm,
        ext.max_norm_half_step,
        ext.halving_ratio(),
        base.max_norm
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Axis::new(0.5, 3);
    let e = build_space_str("su21")?;
    for name in ["real-form", "complex-hyperplane"] {
        let pair = e.build_pair(name)?;
        let x = e.algebra.p_coordinates(&to_float(&pair.normal_frame.basis()[0]))?;
        show(&format!("su21/{name}"), &ImmersionSpec::new(&e.algebra, &pair.s, &x, grid, grid, 1e-3)?)?;
    }

    let e = build_space_str("sl3r")?;
    let pair = e.build_pair("symmetric-line")?;
    let mut bad = None;
    for x in normal_grid(&e.algebra, &pair.s, &[-1, 0, 1])? {
        if !condition_holds(&e.algebra, &pair.s, &x, 8, 1)?.holds {
            bad = Some(x);
            break;
        }
    }
    let x = e.algebra.p_coordinates(&to_float(&bad.expect("a failing normal on the grid")))?;
    show("sl3r/symmetric-line, bad X", &ImmersionSpec::new(&e.algebra, &pair.s, &x, grid, grid, 1e-3)?)?;
    Ok(())
}
