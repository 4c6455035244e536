//! The smallest case: sl(2,R), s = span(H), normal X = E + F.
//!
//! Prints the odd brackets [X, ad_H^(2n+1) X] = -2^(2n+2) H exactly and the
//! covariant derivative of the transported normal, which equals -sinh(4) H.

use transvector::catalog::sl_n;
use transvector::condition::{condition_holds, nabla_zz};
use transvector::subspace::Subspace;
use transvector::AlgebraVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alg = sl_n(2)?;
    println!("{} with basis {:?}", alg.name(), alg.labels());
    let h = AlgebraVector::from_i64(&[1, 0, 0]);
    let x = AlgebraVector::from_i64(&[0, 1, 1]);
    let s = Subspace::new(&alg, vec![h.clone()])?;

    let chain = alg.ad_chain(&h, &x, 7)?;
    for n in 0..=3 {
        let w = alg.bracket(&x, &chain[2 * n + 1])?;
        println!("n = {n}: [X, ad_H^{} X] = {:?}", 2 * n + 1, w.to_rational_strings());
    }
    let v = condition_holds(&alg, &s, &x, 16, 1)?;
    println!("condition holds: {} (max power {})", v.holds, v.max_power);

    let nz = nabla_zz(&alg, &s.to_f64(&alg), &x.to_f64(), &h.to_f64(), 30)?;
    println!("nabla_Z Z = {:?}", nz.value);
    println!("-sinh(4)  = {}", -(4f64.sinh()));
    println!("series gap {:.2e}, in s: {}", nz.series_gap, nz.in_s);
    Ok(())
}
