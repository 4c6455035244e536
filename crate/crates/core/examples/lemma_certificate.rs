//! Exact certificate that the even-odd bracket identities follow from the
//! odd-power condition, for both su(2,1) pairs.

use transvector::catalog::build_space_str;
use transvector::condition::{sample_normals, verify_lemma_conclusion};
use transvector::sampling::{random_combination, SampleStream};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e = build_space_str("su21")?;
    let stream = SampleStream::new(11);
    for name in ["real-form", "complex-hyperplane"] {
        let pair = e.build_pair(name)?;
        let x = &sample_normals(&e.algebra, &pair.s, 1, 11)?[0];
        for i in 0..3 {
            let y = random_combination(pair.s.basis(), e.algebra.dim(), &mut stream.rng(i));
            let c = verify_lemma_conclusion(&e.algebra, &pair.s, x, &y, 4, 4)?;
            let worst = c.conclusion_residuals.iter().flatten().fold(0.0f64, |a, b| a.max(*b));
            println!("{name} Y#{i}: passed {} (n, m <= 4, worst residual {worst})", c.passed);
        }
    }
    Ok(())
}
