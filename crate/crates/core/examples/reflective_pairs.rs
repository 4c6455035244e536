//! Catalog spaces, their named pairs, and the predicates each pair satisfies.

use transvector::catalog::{build_space_str, listing, predicate_row};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let l = listing()?;
    println!("families: {:?}", l.families);
    for id in ["su21", "su31", "so31", "sl3r"] {
        let e = build_space_str(id)?;
        println!("\n{id}: {} (dim k {}, dim p {})", e.algebra.name(), e.algebra.dim_k(), e.algebra.dim_p());
        for name in e.pair_names() {
            let row = predicate_row(&e, &e.build_pair(name)?)?;
            println!(
                "  {:<20} dim s {}  lts {:<5}  reflective {:<5}  totally real {:<6}  as declared {}",
                row.pair,
                row.dim_s,
                row.lie_triple_system,
                row.reflective,
                format!("{:?}", row.totally_real),
                row.matches
            );
        }
    }
    Ok(())
}
