//! Restricted roots of su(2,1) and sl(3,R), the commutation rules between
//! root spaces, and the root-space construction of normal pairs.

use transvector::catalog::build_space_str;
use transvector::roots::{
    abelian_grid, build_root_space_example, maximal_abelian, restricted_root_decomposition, verify_commutation_rules,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for id in ["su21", "sl3r", "so41"] {
        let e = build_space_str(id)?;
        let alg = &e.algebra;
        let a = maximal_abelian(alg)?;
        let rd = restricted_root_decomposition(alg, &a, 1)?;
        let summary = rd.summary();
        println!("{id}: rank {}, dim m {}", summary.rank, summary.dim_m);
        for r in &summary.positive_roots {
            println!("  root {:?}  multiplicity {}  dim k {}  dim p {}", r.functional, r.multiplicity, r.dim_k, r.dim_p);
        }
        let rules = verify_commutation_rules(alg, &rd)?;
        println!("  commutation rules: {} checked, passed {}", rules.checked, rules.passed);
        let x = &abelian_grid(alg, &rd.a, &[1])[0];
        for root in 0..rd.positive.len() {
            let ex = build_root_space_example(alg, &rd, root, x, 8, 1)?;
            println!("  s = p_root[{root}], X = {:?}: certified {}", ex.x, ex.certified);
        }
    }
    Ok(())
}
