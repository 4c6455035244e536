use std::sync::OnceLock;

use proptest::prelude::*;

use transvector::catalog::{build_space_str, CatalogEntry};
use transvector::condition::condition_holds;
use transvector::subspace::{is_lie_triple_system, is_reflective, orthocomplement_in_p, Subspace};
use transvector::{AlgebraVector, StructuredLieAlgebra, Q};

fn su21() -> &'static CatalogEntry {
    static E: OnceLock<CatalogEntry> = OnceLock::new();
    E.get_or_init(|| build_space_str("su21").unwrap())
}

fn sl3() -> &'static CatalogEntry {
    static E: OnceLock<CatalogEntry> = OnceLock::new();
    E.get_or_init(|| build_space_str("sl3r").unwrap())
}

fn entry(which: bool) -> &'static CatalogEntry {
    if which {
        su21()
    } else {
        sl3()
    }
}

fn combo(alg: &StructuredLieAlgebra, basis: &[AlgebraVector<Q>], c: &[i64]) -> AlgebraVector<Q> {
    let mut v = AlgebraVector::<Q>::zero(alg.dim());
    for (b, x) in basis.iter().zip(c) {
        v.axpy(&Q::from_integer((*x).into()), b);
    }
    v
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 8)
}

fn full(alg: &StructuredLieAlgebra, c: &[i64]) -> AlgebraVector<Q> {
    AlgebraVector(c.iter().take(alg.dim()).map(|x| Q::from_integer((*x).into())).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn killing_form_is_ad_invariant(which: bool, x in coeffs(), y in coeffs(), z in coeffs()) {
        let alg = &entry(which).algebra;
        let (x, y, z) = (full(alg, &x), full(alg, &y), full(alg, &z));
        let lhs = alg.killing_form(&alg.bracket(&z, &x).unwrap(), &y).unwrap();
        let rhs = alg.killing_form(&x, &alg.bracket(&z, &y).unwrap()).unwrap();
        prop_assert_eq!(lhs, -rhs);
    }

    #[test]
    fn cartan_parity(which: bool, a in coeffs(), b in coeffs(), c in coeffs()) {
        let alg = &entry(which).algebra;
        let p1 = combo(alg, alg.p_basis(), &a);
        let p2 = combo(alg, alg.p_basis(), &b);
        let k = combo(alg, alg.k_basis(), &c);
        prop_assert!(alg.is_in_k(&alg.bracket(&p1, &p2).unwrap()).unwrap());
        prop_assert!(alg.is_in_p(&alg.bracket(&k, &p1).unwrap()).unwrap());
        let x = full(alg, &a);
        let y = full(alg, &b);
        let lhs = alg.theta_apply(&alg.bracket(&x, &y).unwrap()).unwrap();
        let rhs = alg.bracket(&alg.theta_apply(&x).unwrap(), &alg.theta_apply(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_operator_symmetric_nonpositive(which: bool, a in coeffs(), b in coeffs(), c in coeffs()) {
        let alg = &entry(which).algebra;
        let cv = combo(alg, alg.p_basis(), &a);
        let u = combo(alg, alg.p_basis(), &b);
        let v = combo(alg, alg.p_basis(), &c);
        let ru = alg.jacobi_operator(&cv, &u).unwrap();
        let rv = alg.jacobi_operator(&cv, &v).unwrap();
        prop_assert_eq!(alg.killing_form(&ru, &v).unwrap(), alg.killing_form(&u, &rv).unwrap());
        prop_assert!(alg.killing_form(&ru, &u).unwrap() <= Q::from_integer(0.into()));
    }

    #[test]
    fn triple_systems_survive_basis_change(which: bool, pair_ix in 0usize..2, m in prop::array::uniform4(-4i64..=4)) {
        let e = entry(which);
        let names = e.pair_names();
        let pair = e.build_pair(names[pair_ix % names.len()]).unwrap();
        let k = pair.s.dim();
        prop_assume!(k == 2 || k == 1);
        let q = |x: i64| Q::from_integer(x.into());
        let mat = if k == 2 {
            prop_assume!(m[0] * m[3] - m[1] * m[2] != 0);
            vec![vec![q(m[0]), q(m[1])], vec![q(m[2]), q(m[3])]]
        } else {
            prop_assume!(m[0] != 0);
            vec![vec![q(m[0])]]
        };
        let r = pair.s.recombined(&e.algebra, &mat).unwrap();
        prop_assert!(r.same_span(&pair.s).unwrap());
        prop_assert_eq!(
            is_lie_triple_system(&e.algebra, &r).unwrap().holds,
            is_lie_triple_system(&e.algebra, &pair.s).unwrap().holds
        );
    }

    #[test]
    fn reflectivity_is_symmetric_under_complement(which: bool, a in coeffs()) {
        let alg = &entry(which).algebra;
        let v = combo(alg, alg.p_basis(), &a);
        prop_assume!(!v.is_zero());
        let b = Subspace::new(alg, vec![v]).unwrap();
        let perp = orthocomplement_in_p(alg, &b).unwrap();
        prop_assert_eq!(is_reflective(alg, &b).unwrap().holds, is_reflective(alg, &perp).unwrap().holds);
    }

    #[test]
    fn condition_is_scale_invariant(which: bool, a in coeffs(), num in 1i64..=7, den in 1i64..=5, neg: bool) {
        let e = entry(which);
        let pair = e.build_pair(e.pair_names()[0]).unwrap();
        let x = combo(&e.algebra, pair.normal_frame.basis(), &a);
        prop_assume!(!x.is_zero());
        let c = Q::new(if neg { -num } else { num }.into(), den.into());
        let v1 = condition_holds(&e.algebra, &pair.s, &x, 6, 9).unwrap();
        let v2 = condition_holds(&e.algebra, &pair.s, &x.scale(&c), 6, 9).unwrap();
        prop_assert_eq!(v1.holds, v2.holds);
    }
}
