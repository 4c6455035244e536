//! Negative controls: normals on a small integer grid for which the
//! odd-power condition fails, with the failing power and residual.

use transvector::catalog::build_space_str;
use transvector::condition::{normal_grid, search_counterexample};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (id, name) in [("su21", "real-form"), ("sl3r", "symmetric-line"), ("sl3r", "diagonal-flat")] {
        let e = build_space_str(id)?;
        let pair = e.build_pair(name)?;
        let grid = normal_grid(&e.algebra, &pair.s, &[-1, 0, 1])?;
        let found = search_counterexample(&e.algebra, std::slice::from_ref(&pair.s), &grid, 8, 5)?;
        println!("{id}/{name}: {} of {} normals fail", found.len(), grid.len());
        if let Some(c) = found.first() {
            let w = c.verdict.witness.as_ref().expect("failing verdict has a witness");
            println!("  X = {:?}, n = {}, residual {:.3}", c.x, w.n, w.residual);
        }
    }
    Ok(())
}
