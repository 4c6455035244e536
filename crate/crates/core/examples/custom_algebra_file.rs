//! Loads an algebra definition from a text file, here su(1,1) written with
//! complex matrices, and runs the structural checks on it.
//!
//! Usage: cargo run --example custom_algebra_file [path]

use std::path::PathBuf;

use transvector::geometry::checks::geodesic_speed;
use transvector::geometry::SymmetricSpace;
use transvector::io::parse_algebra_file;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/su11.alg"));
    let alg = parse_algebra_file(&path)?;
    let v = alg.validate();
    println!("{}: dim {}, k {}, p {}, valid {}", alg.name(), v.dim, v.dim_k, v.dim_p, v.passed);
    println!("realization: {:?}", alg.validate_realization()?.passed);
    let space = SymmetricSpace::new(&alg)?;
    println!("{:?}", geodesic_speed(&space, 8, 1)?);

    let bad = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/sl2r_bad.alg");
    match parse_algebra_file(&bad) {
        Ok(_) => println!("unexpectedly accepted {}", bad.display()),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
