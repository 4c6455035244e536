//! Maximal abelian subspaces of `p` and the restricted root decomposition
//! `g = m + a + sum g_lambda`, computed exactly when the spectrum of a
//! generic `ad_H` is rational.

use nalgebra::DMatrix;
use num::{Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::algebra::{AlgebraVector, StructuredLieAlgebra};
use crate::condition::{condition_holds, ConditionVerdict};
use crate::error::{Error, Result};
use crate::linalg;
use crate::sampling::{random_combination, SampleStream};
use crate::scalar::{rational_string, Scalar, Q};
use crate::subspace::{is_lie_triple_system, Subspace};

/// Centralizer of `a` inside `p`, as a subspace.
fn centralizer_in_p(alg: &StructuredLieAlgebra, a: &[AlgebraVector<Q>]) -> Result<Subspace<Q>> {
    let p = alg.p_basis();
    let d = alg.dim();
    let mut rows = Vec::new();
    for ai in a {
        let imgs: Vec<AlgebraVector<Q>> = p.iter().map(|pj| alg.bracket(ai, pj)).collect::<Result<_>>()?;
        for comp in 0..d {
            rows.push(imgs.iter().map(|v| v.0[comp].clone()).collect::<Vec<Q>>());
        }
    }
    let ker = if rows.is_empty() {
        linalg::identity::<Q>(p.len())
    } else {
        linalg::nullspace(rows, p.len())
    };
    let vecs: Vec<AlgebraVector<Q>> = ker
        .iter()
        .map(|c| {
            let mut v = AlgebraVector::zero(d);
            for (ci, pi) in c.iter().zip(p) {
                v.axpy(ci, pi);
            }
            v
        })
        .collect();
    Subspace::span(alg, &vecs)
}

/// Greedy maximal abelian subspace of `p`: keep adjoining the first
/// centralizer vector not already present.
pub fn maximal_abelian(alg: &StructuredLieAlgebra) -> Result<Subspace<Q>> {
    let mut a: Vec<AlgebraVector<Q>> = Vec::new();
    loop {
        let current = Subspace::span(alg, &a)?;
        let cent = centralizer_in_p(alg, &a)?;
        let mut next = None;
        for v in cent.basis() {
            if !current.contains(v)?.inside {
                next = Some(v.clone());
                break;
            }
        }
        match next {
            Some(v) => a.push(v),
            None => return Subspace::new(alg, a),
        }
    }
}

/// Whether `a` is abelian and no vector of `p` outside it commutes with all of it.
pub fn is_maximal_abelian(alg: &StructuredLieAlgebra, a: &Subspace<Q>) -> Result<bool> {
    for x in a.basis() {
        for y in a.basis() {
            if !alg.bracket(x, y)?.is_zero() {
                return Ok(false);
            }
        }
    }
    let cent = centralizer_in_p(alg, a.basis())?;
    cent.same_span(a)
}

/// One positive restricted root with its spaces.
#[derive(Debug, Clone)]
pub struct PositiveRoot {
    /// Values on the `a` basis.
    pub functional: Vec<Q>,
    pub g_plus: Subspace<Q>,
    pub g_minus: Subspace<Q>,
    pub k: Subspace<Q>,
    pub p: Subspace<Q>,
}

impl PositiveRoot {
    pub fn multiplicity(&self) -> usize {
        self.g_plus.dim()
    }
}

#[derive(Debug, Clone)]
pub struct RootDatum {
    pub a: Subspace<Q>,
    pub m: Subspace<Q>,
    /// Generic element used to separate the root spaces.
    pub generic: AlgebraVector<Q>,
    /// Sorted by the lexicographic order of the functionals.
    pub positive: Vec<PositiveRoot>,
}

fn is_lex_positive(v: &[Q]) -> bool {
    v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())
}

fn vec_add(a: &[Q], b: &[Q], sign: i64) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y * Q::from_i64(sign)).collect()
}

/// Best rational approximation with denominator at most `max_den`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some(Q::new((h1 as i64).into(), (k1 as i64).into()));
        }
        let frac = r - a;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

impl RootDatum {
    pub fn rank(&self) -> usize {
        self.a.dim()
    }

    /// All roots, positive then negative.
    pub fn roots(&self) -> Vec<Vec<Q>> {
        let mut out: Vec<Vec<Q>> = self.positive.iter().map(|r| r.functional.clone()).collect();
        out.extend(self.positive.iter().map(|r| r.functional.iter().map(|x| -x).collect()));
        out
    }

    /// Index in `positive` of the root equal to `±v`, with the sign found.
    pub fn lookup(&self, v: &[Q]) -> Option<(usize, bool)> {
        let neg: Vec<Q> = v.iter().map(|x| -x).collect();
        self.positive.iter().enumerate().find_map(|(i, r)| {
            if r.functional == v {
                Some((i, true))
            } else if r.functional == neg {
                Some((i, false))
            } else {
                None
            }
        })
    }

    /// `k_v` with `k_0 = m` and `{0}` for non-roots.
    pub fn k_space(&self, alg: &StructuredLieAlgebra, v: &[Q]) -> Subspace<Q> {
        if v.iter().all(|x| x.is_zero()) {
            return self.m.clone();
        }
        self.lookup(v).map_or_else(|| Subspace::zero(alg), |(i, _)| self.positive[i].k.clone())
    }

    /// `p_v` with `p_0 = a` and `{0}` for non-roots.
    pub fn p_space(&self, alg: &StructuredLieAlgebra, v: &[Q]) -> Subspace<Q> {
        if v.iter().all(|x| x.is_zero()) {
            return self.a.clone();
        }
        self.lookup(v).map_or_else(|| Subspace::zero(alg), |(i, _)| self.positive[i].p.clone())
    }

    /// Value of a root on an element of `a`.
    pub fn evaluate(&self, alg: &StructuredLieAlgebra, functional: &[Q], h: &AlgebraVector<Q>) -> Result<Q> {
        let c = coordinates_in(alg, &self.a, h)?;
        Ok(functional.iter().zip(&c).fold(Q::zero(), |acc, (a, b)| acc + a * b))
    }

    pub fn summary(&self) -> RootSummary {
        RootSummary {
            rank: self.rank(),
            dim_m: self.m.dim(),
            positive_roots: self
                .positive
                .iter()
                .map(|r| RootEntry {
                    functional: r.functional.iter().map(rational_string).collect(),
                    multiplicity: r.multiplicity(),
                    dim_k: r.k.dim(),
                    dim_p: r.p.dim(),
                })
                .collect(),
        }
    }
}

/// Coordinates of `v` over the basis of `s`; error if `v` is outside.
pub fn coordinates_in(alg: &StructuredLieAlgebra, s: &Subspace<Q>, v: &AlgebraVector<Q>) -> Result<Vec<Q>> {
    let d = alg.dim();
    let a: Vec<Vec<Q>> = (0..d).map(|r| s.basis().iter().map(|b| b.0[r].clone()).collect()).collect();
    linalg::solve(&a, &v.0).ok_or(Error::NotInAbelian)
}

#[derive(Debug, Clone, Serialize)]
pub struct RootEntry {
    pub functional: Vec<String>,
    pub multiplicity: usize,
    pub dim_k: usize,
    pub dim_p: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootSummary {
    pub rank: usize,
    pub dim_m: usize,
    pub positive_roots: Vec<RootEntry>,
}

fn eigenspace(alg: &StructuredLieAlgebra, ad: &[Vec<Q>], mu: &Q) -> Result<Vec<AlgebraVector<Q>>> {
    let d = alg.dim();
    let mut m = ad.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = &row[i] - mu;
    }
    Ok(linalg::nullspace(m, d).into_iter().map(AlgebraVector).collect())
}

fn try_decompose(alg: &StructuredLieAlgebra, a: &Subspace<Q>, h: &AlgebraVector<Q>) -> Result<Option<RootDatum>> {
    let d = alg.dim();
    let ad = alg.ad_matrix(h)?;
    let fm = DMatrix::from_fn(d, d, |i, j| ad[i][j].to_f64());
    let eig = fm.complex_eigenvalues();
    let mut mus: Vec<Q> = Vec::new();
    for z in eig.iter() {
        if z.im.abs() > 1e-6 {
            return Err(Error::RootDecomposition("ad_H has non-real spectrum".into()));
        }
        let r = rationalize(z.re, 10_000, 1e-7 * (1.0 + z.re.abs()))
            .ok_or_else(|| Error::RootDecomposition(format!("eigenvalue {} is not a small rational", z.re)))?;
        if !mus.contains(&r) {
            mus.push(r);
        }
    }
    let mut spaces = Vec::new();
    let mut total = 0;
    for mu in &mus {
        let v = eigenspace(alg, &ad, mu)?;
        total += v.len();
        spaces.push((mu.clone(), v));
    }
    if total != d {
        return Err(Error::RootDecomposition(format!(
            "eigenspaces of ad_H span {total} of {d} dimensions"
        )));
    }
    // joint eigenvalues on the a basis; a failure means H was not generic
    let mut functionals: Vec<(Vec<Q>, Vec<AlgebraVector<Q>>)> = Vec::new();
    for (_, vecs) in spaces {
        let mut f = Vec::new();
        for ai in a.basis() {
            let img = alg.bracket(ai, &vecs[0])?;
            let piv = vecs[0].0.iter().position(|x| !x.is_zero()).expect("nonzero eigenvector");
            let val = &img.0[piv] / &vecs[0].0[piv];
            for v in &vecs {
                if alg.bracket(ai, v)? != v.scale(&val) {
                    return Ok(None);
                }
            }
            f.push(val);
        }
        functionals.push((f, vecs));
    }
    let zero_idx = functionals.iter().position(|(f, _)| f.iter().all(|x| x.is_zero()));
    let g0: Vec<AlgebraVector<Q>> = zero_idx.map(|i| functionals[i].1.clone()).unwrap_or_default();
    let mut m_vecs = Vec::new();
    let mut a0 = Vec::new();
    for v in &g0 {
        let (k, p) = alg.cartan_split(v)?;
        m_vecs.push(k);
        a0.push(p);
    }
    let m = Subspace::span(alg, &m_vecs)?;
    if !Subspace::span(alg, &a0)?.same_span(a)? {
        return Err(Error::RootDecomposition("p-part of the zero eigenspace differs from a".into()));
    }
    let mut positive = Vec::new();
    for (f, plus) in &functionals {
        if !is_lex_positive(f) {
            continue;
        }
        let neg: Vec<Q> = f.iter().map(|x| -x).collect();
        let minus = functionals
            .iter()
            .find(|(g, _)| *g == neg)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::RootDecomposition("root system is not symmetric".into()))?;
        let mut ks = Vec::new();
        let mut ps = Vec::new();
        for v in plus.iter().chain(&minus) {
            let (k, p) = alg.cartan_split(v)?;
            ks.push(k);
            ps.push(p);
        }
        positive.push(PositiveRoot {
            functional: f.clone(),
            g_plus: Subspace::new(alg, plus.clone())?,
            g_minus: Subspace::new(alg, minus)?,
            k: Subspace::span(alg, &ks)?,
            p: Subspace::span(alg, &ps)?,
        });
    }
    positive.sort_by(|x, y| {
        x.functional
            .iter()
            .zip(&y.functional)
            .map(|(a, b)| a.cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(Some(RootDatum {
        a: a.clone(),
        m,
        generic: h.clone(),
        positive,
    }))
}

/// Restricted root decomposition relative to a maximal abelian `a`.
///
/// Uses `H = sum c_i a_i` with random small odd `c_i`; if `H` is not
/// generic (some eigenspace of `ad_H` is not a joint eigenspace), a new
/// combination is drawn, at most 8 times.
pub fn restricted_root_decomposition(alg: &StructuredLieAlgebra, a: &Subspace<Q>, seed: u64) -> Result<RootDatum> {
    if !is_maximal_abelian(alg, a)? {
        return Err(Error::RootDecomposition("a is not maximal abelian in p".into()));
    }
    let stream = SampleStream::new(seed).fork(0x524f4f54);
    for attempt in 0..8u64 {
        let mut rng = stream.rng(attempt);
        let mut h = AlgebraVector::<Q>::zero(alg.dim());
        for (i, ai) in a.basis().iter().enumerate() {
            let c: i64 = if attempt == 0 { 2 * i as i64 + 1 } else { 2 * rng.gen_range(-4i64..=3) + 1 };
            h.axpy(&Q::from_i64(c), ai);
        }
        if let Some(rd) = try_decompose(alg, a, &h)? {
            return Ok(rd);
        }
    }
    Err(Error::RootDecomposition("no generic element found in 8 attempts".into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleFailure {
    pub rule: String,
    pub lambda: usize,
    pub mu: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutationReport {
    pub checked: usize,
    pub failures: Vec<RuleFailure>,
    pub max_residual: f64,
    /// `[p_lambda, p_lambda]` has a nonzero component in `k_{2 lambda}` for some lambda.
    pub double_root_component: bool,
    pub dimension_bookkeeping: bool,
    pub multiplicity_symmetry: bool,
    pub passed: bool,
}

/// The three bracket rules between root spaces, with `p_0 = a`, `k_0 = m`
/// and absent spaces zero, plus dimension bookkeeping.
pub fn verify_commutation_rules(alg: &StructuredLieAlgebra, rd: &RootDatum) -> Result<CommutationReport> {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut max_residual: f64 = 0.0;
    let mut double_root_component = false;
    let n = rd.positive.len();
    for li in 0..n {
        for mi in 0..n {
            let l = &rd.positive[li];
            let m = &rd.positive[mi];
            let plus = vec_add(&l.functional, &m.functional, 1);
            let minus = vec_add(&l.functional, &m.functional, -1);
            let p_target = rd.p_space(alg, &plus).sum(alg, &rd.p_space(alg, &minus))?;
            let k_target = rd.k_space(alg, &plus).sum(alg, &rd.k_space(alg, &minus))?;
            let rules: [(&str, &Subspace<Q>, &Subspace<Q>, &Subspace<Q>); 3] = [
                ("[k_l, p_m] in p_(l+m) + p_(l-m)", &l.k, &m.p, &p_target),
                ("[k_l, k_m] in k_(l+m) + k_(l-m)", &l.k, &m.k, &k_target),
                ("[p_l, p_m] in k_(l+m) + k_(l-m)", &l.p, &m.p, &k_target),
            ];
            for (name, x, y, target) in rules {
                for u in x.basis() {
                    for v in y.basis() {
                        checked += 1;
                        let w = alg.bracket(u, v)?;
                        let r = target.contains(&w)?;
                        max_residual = max_residual.max(r.residual);
                        if !r.inside {
                            failures.push(RuleFailure {
                                rule: name.into(),
                                lambda: li,
                                mu: mi,
                                residual: r.residual,
                            });
                        }
                    }
                }
            }
            if li == mi {
                let k2 = rd.k_space(alg, &plus);
                if k2.dim() > 0 {
                    for u in l.p.basis() {
                        for v in l.p.basis() {
                            let w = alg.bracket(u, v)?;
                            if !rd.m.contains(&w)?.inside {
                                double_root_component = true;
                            }
                        }
                    }
                }
            }
        }
    }
    let dim_k_sum: usize = rd.m.dim() + rd.positive.iter().map(|r| r.k.dim()).sum::<usize>();
    let dim_p_sum: usize = rd.a.dim() + rd.positive.iter().map(|r| r.p.dim()).sum::<usize>();
    let dimension_bookkeeping = dim_k_sum == alg.dim_k() && dim_p_sum == alg.dim_p();
    let multiplicity_symmetry = rd.positive.iter().all(|r| r.k.dim() == r.p.dim() && r.p.dim() == r.multiplicity());
    Ok(CommutationReport {
        checked,
        passed: failures.is_empty() && dimension_bookkeeping && multiplicity_symmetry,
        failures,
        max_residual,
        double_root_component,
        dimension_bookkeeping,
        multiplicity_symmetry,
    })
}

/// `ad_H^2 v = lambda(H)^2 v` for every `v` in every `p_lambda` and every
/// `H` in the `a` basis.
pub fn check_root_eigen_relation(alg: &StructuredLieAlgebra, rd: &RootDatum) -> Result<bool> {
    for r in &rd.positive {
        for (i, h) in rd.a.basis().iter().enumerate() {
            let l2 = &r.functional[i] * &r.functional[i];
            for v in r.p.basis() {
                if alg.ad_power(h, 2, v)? != v.scale(&l2) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct RootSpaceExample {
    pub root: Vec<String>,
    pub x: Vec<String>,
    pub lie_triple_system: bool,
    pub odd_chain_in_k_lambda: bool,
    pub even_chain_in_a_plus_p_2lambda: bool,
    pub condition: ConditionVerdict,
    pub certified: bool,
}

/// Checks the construction `s = p_lambda`, `X in a`: `p_lambda` is a Lie
/// triple system, `ad_Y^{2n+1} X in k_lambda`, `ad_Y^{2n} X in a + p_{2 lambda}`,
/// and the extension condition holds.
pub fn build_root_space_example(
    alg: &StructuredLieAlgebra,
    rd: &RootDatum,
    root: usize,
    x: &AlgebraVector<Q>,
    samples: usize,
    seed: u64,
) -> Result<RootSpaceExample> {
    let r = rd.positive.get(root).ok_or(Error::UnknownRoot(root))?;
    if x.is_zero() || !rd.a.contains(x)?.inside {
        return Err(Error::NotInAbelian);
    }
    let s = &r.p;
    let lts = is_lie_triple_system(alg, s)?.holds;
    let double: Vec<Q> = r.functional.iter().map(|v| v * Q::from_i64(2)).collect();
    let even_target = rd.a.sum(alg, &rd.p_space(alg, &double))?;
    let n_max = alg.dim_p();
    let stream = SampleStream::new(seed).fork(0x4558);
    let mut odd_ok = true;
    let mut even_ok = true;
    for i in 0..samples {
        let y = random_combination(s.basis(), alg.dim(), &mut stream.rng(i as u64));
        let chain = alg.ad_chain(&y, x, 2 * n_max + 1)?;
        for n in 0..=n_max {
            odd_ok &= r.k.contains(&chain[2 * n + 1])?.inside;
            even_ok &= even_target.contains(&chain[2 * n])?.inside;
        }
    }
    let condition = condition_holds(alg, s, x, samples, seed)?;
    Ok(RootSpaceExample {
        root: r.functional.iter().map(rational_string).collect(),
        x: x.to_rational_strings(),
        lie_triple_system: lts,
        odd_chain_in_k_lambda: odd_ok,
        even_chain_in_a_plus_p_2lambda: even_ok,
        certified: lts && odd_ok && even_ok && condition.holds,
        condition,
    })
}

/// Nonzero integer combinations of the `a` basis with coefficients in `values`.
pub fn abelian_grid(alg: &StructuredLieAlgebra, a: &Subspace<Q>, values: &[i64]) -> Vec<AlgebraVector<Q>> {
    let r = a.dim();
    let total = values.len().pow(r as u32);
    let mut out = Vec::new();
    for mut idx in 0..total {
        let mut v = AlgebraVector::<Q>::zero(alg.dim());
        for b in a.basis() {
            v.axpy(&Q::from_i64(values[idx % values.len()]), b);
            idx /= values.len();
        }
        if !v.is_zero() {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationalize_small_fractions() {
        assert_eq!(rationalize(0.5, 100, 1e-9), Some(Q::new(1.into(), 2.into())));
        assert_eq!(rationalize(-3.0, 100, 1e-9), Some(Q::from_i64(-3)));
        assert_eq!(rationalize(2.0f64.sqrt(), 100, 1e-9), None);
    }

    #[test]
    fn lexicographic_sign() {
        assert!(is_lex_positive(&[Q::from_i64(0), Q::from_i64(2)]));
        assert!(!is_lex_positive(&[Q::from_i64(-1), Q::from_i64(5)]));
        assert!(!is_lex_positive(&[Q::from_i64(0)]));
    }
}

#[cfg(test)]
mod decomposition_tests {
    use super::*;
    use crate::catalog::{build_space_str, sl_n};

    fn datum(id: &str) -> (StructuredLieAlgebra, RootDatum) {
        let e = build_space_str(id).unwrap();
        let a = maximal_abelian(&e.algebra).unwrap();
        let rd = restricted_root_decomposition(&e.algebra, &a, 5).unwrap();
        (e.algebra, rd)
    }

    #[test]
    fn sl2_single_root() {
        let alg = sl_n(2).unwrap();
        let h = AlgebraVector::from_i64(&[1, 0, 0]);
        let a = Subspace::new(&alg, vec![h.clone()]).unwrap();
        let rd = restricted_root_decomposition(&alg, &a, 1).unwrap();
        assert_eq!(rd.rank(), 1);
        assert_eq!(rd.m.dim(), 0);
        assert_eq!(rd.positive.len(), 1);
        // [H, E] = 2E
        assert_eq!(rd.positive[0].functional, vec![Q::from_i64(2)]);
        let ef = Subspace::new(&alg, vec![AlgebraVector::from_i64(&[0, 1, 1])]).unwrap();
        assert!(rd.positive[0].p.same_span(&ef).unwrap());
        assert_eq!(rd.evaluate(&alg, &rd.positive[0].functional, &h.scale(&Q::from_i64(3))).unwrap(), Q::from_i64(6));
    }

    #[test]
    fn su21_has_roots_lambda_and_double() {
        let (alg, rd) = datum("su21");
        assert_eq!(rd.rank(), 1);
        assert_eq!(rd.m.dim(), 1);
        let mults: Vec<usize> = rd.positive.iter().map(|r| r.multiplicity()).collect();
        assert_eq!(mults, vec![2, 1]);
        let l = &rd.positive[0].functional[0];
        assert_eq!(&rd.positive[1].functional[0], &(l * Q::from_i64(2)));
        let total = rd.a.dim() + rd.m.dim() + 2 * mults.iter().sum::<usize>();
        assert_eq!(total, alg.dim());
        let c = verify_commutation_rules(&alg, &rd).unwrap();
        assert!(c.passed && c.failures.is_empty() && c.double_root_component);
        assert!(check_root_eigen_relation(&alg, &rd).unwrap());
    }

    #[test]
    fn sl3_and_so31() {
        let (alg, rd) = datum("sl3r");
        assert_eq!(rd.rank(), 2);
        assert_eq!(rd.m.dim(), 0);
        assert_eq!(rd.positive.len(), 3);
        assert!(rd.positive.iter().all(|r| r.multiplicity() == 1));
        assert!(verify_commutation_rules(&alg, &rd).unwrap().passed);
        assert!(check_root_eigen_relation(&alg, &rd).unwrap());

        let (alg, rd) = datum("so31");
        assert_eq!(rd.rank(), 1);
        assert_eq!(rd.m.dim(), 1);
        assert_eq!(rd.positive.len(), 1);
        assert_eq!(rd.positive[0].multiplicity(), 2);
        assert!(!verify_commutation_rules(&alg, &rd).unwrap().double_root_component);
    }

    #[test]
    fn root_space_examples_are_certified() {
        for id in ["su21", "sl3r"] {
            let (alg, rd) = datum(id);
            for x in abelian_grid(&alg, &rd.a, &[-1, 1, 2]) {
                for root in 0..rd.positive.len() {
                    let ex = build_root_space_example(&alg, &rd, root, &x, 6, 2).unwrap();
                    assert!(ex.certified, "{id} root {root}");
                }
            }
            let bad = rd.positive[0].p.basis()[0].clone();
            assert!(matches!(build_root_space_example(&alg, &rd, 0, &bad, 2, 2), Err(Error::NotInAbelian)));
            let x = rd.a.basis()[0].clone();
            assert!(matches!(build_root_space_example(&alg, &rd, 99, &x, 2, 2), Err(Error::UnknownRoot(99))));
        }
    }

    #[test]
    fn non_maximal_abelian_is_rejected() {
        let e = build_space_str("sl3r").unwrap();
        let a = maximal_abelian(&e.algebra).unwrap();
        let one = Subspace::new(&e.algebra, vec![a.basis()[0].clone()]).unwrap();
        assert!(!is_maximal_abelian(&e.algebra, &one).unwrap());
        assert!(restricted_root_decomposition(&e.algebra, &one, 1).is_err());
    }
}
