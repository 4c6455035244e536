//! Subspaces of the algebra and the structural predicates on them:
//! Lie triple systems, reflective subspaces, totally real subspaces.

use serde::Serialize;

use crate::algebra::{to_mode, AlgebraScalar, AlgebraVector, StructuredLieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon};
use crate::scalar::{Mode, Scalar, Q};

/// Result of a membership test.
#[derive(Debug, Clone)]
pub struct Membership<S> {
    pub inside: bool,
    /// Norm of the part of `v` not explained by the subspace; exactly 0 when
    /// inside in exact mode.
    pub residual: f64,
    pub remainder: AlgebraVector<S>,
}

/// A linear subspace of the algebra with a fixed basis.
#[derive(Debug, Clone)]
pub struct Subspace<S> {
    ambient: String,
    d: usize,
    basis: Vec<AlgebraVector<S>>,
    echelon: Echelon<S>,
    ortho: Vec<Vec<f64>>,
}

impl<S: AlgebraScalar> Subspace<S> {
    /// Subspace with the given (linearly independent) basis.
    pub fn new(alg: &StructuredLieAlgebra, basis: Vec<AlgebraVector<S>>) -> Result<Self> {
        let d = alg.dim();
        for b in &basis {
            if b.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: b.len() });
            }
        }
        let echelon = Echelon::new(basis.iter().map(|b| b.0.clone()).collect(), d);
        if echelon.rank() != basis.len() {
            return Err(Error::DependentBasis);
        }
        Ok(Self::assemble(alg, basis, echelon))
    }

    /// Span of arbitrary (possibly dependent) vectors; the basis is the
    /// reduced echelon form.
    pub fn span(alg: &StructuredLieAlgebra, vectors: &[AlgebraVector<S>]) -> Result<Self> {
        let d = alg.dim();
        for b in vectors {
            if b.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: b.len() });
            }
        }
        let echelon = Echelon::new(vectors.iter().map(|b| b.0.clone()).collect(), d);
        let basis = echelon.rows().iter().cloned().map(AlgebraVector).collect();
        Ok(Self::assemble(alg, basis, echelon))
    }

    pub fn zero(alg: &StructuredLieAlgebra) -> Self {
        Self::assemble(alg, Vec::new(), Echelon::new(Vec::new(), alg.dim()))
    }

    fn assemble(alg: &StructuredLieAlgebra, basis: Vec<AlgebraVector<S>>, echelon: Echelon<S>) -> Self {
        let mut ortho: Vec<Vec<f64>> = Vec::new();
        for b in &basis {
            let mut w: Vec<f64> = b.0.iter().map(|x| x.to_f64()).collect();
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for q in &ortho {
                    let c: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
                    for (x, y) in w.iter_mut().zip(q) {
                        *x -= c * y;
                    }
                }
            }
            let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 0.0 {
                ortho.push(w.into_iter().map(|x| x / n).collect());
            }
        }
        Subspace {
            ambient: alg.name().to_string(),
            d: alg.dim(),
            basis,
            echelon,
            ortho,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &[AlgebraVector<S>] {
        &self.basis
    }

    pub fn mode(&self) -> Mode {
        S::MODE
    }

    fn check_ambient(&self, alg: &StructuredLieAlgebra) -> Result<()> {
        if alg.name() != self.ambient || alg.dim() != self.d {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// Membership: exact linear solve in exact mode, least-squares residual
    /// with tolerance `1e-9 (1 + |v|)` in float mode.
    pub fn contains(&self, v: &AlgebraVector<S>) -> Result<Membership<S>> {
        if v.len() != self.d {
            return Err(Error::AmbientMismatch);
        }
        Ok(match S::MODE {
            Mode::Exact => {
                let rem = AlgebraVector(self.echelon.reduce(&v.0));
                let inside = rem.is_zero();
                Membership {
                    inside,
                    residual: if inside { 0.0 } else { rem.norm().max(f64::MIN_POSITIVE) },
                    remainder: rem,
                }
            }
            Mode::Float => {
                let vf: Vec<f64> = v.0.iter().map(|x| x.to_f64()).collect();
                let mut w = vf.clone();
                for _ in 0..2 {
                    for q in &self.ortho {
                        let c: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
                        for (x, y) in w.iter_mut().zip(q) {
                            *x -= c * y;
                        }
                    }
                }
                let residual = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                let vnorm = vf.iter().map(|x| x * x).sum::<f64>().sqrt();
                Membership {
                    inside: residual <= float_tolerance(vnorm),
                    residual,
                    remainder: AlgebraVector(w.iter().map(|x| S::from_rational(&f64_to_q(*x))).collect()),
                }
            }
        })
    }

    pub fn contains_all(&self, vs: &[AlgebraVector<S>]) -> Result<bool> {
        for v in vs {
            if !self.contains(v)?.inside {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same span (both inclusions).
    pub fn same_span(&self, other: &Subspace<S>) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.contains_all(&other.basis)?)
    }

    /// `self + other`.
    pub fn sum(&self, alg: &StructuredLieAlgebra, other: &Subspace<S>) -> Result<Subspace<S>> {
        self.check_ambient(alg)?;
        other.check_ambient(alg)?;
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(alg, &all)
    }

    /// Replaces the basis by `basis * m` for an invertible `k x k` matrix `m`.
    pub fn recombined(&self, alg: &StructuredLieAlgebra, m: &[Vec<S>]) -> Result<Subspace<S>> {
        let k = self.dim();
        let cols: Vec<AlgebraVector<S>> = (0..k)
            .map(|j| {
                let mut v = AlgebraVector::zero(self.d);
                for i in 0..k {
                    v.axpy(&m[i][j], &self.basis[i]);
                }
                v
            })
            .collect();
        Subspace::new(alg, cols)
    }

    pub fn is_in_p(&self, alg: &StructuredLieAlgebra) -> Result<bool> {
        self.check_ambient(alg)?;
        for b in &self.basis {
            if !alg.is_in_p(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_f64(&self, alg: &StructuredLieAlgebra) -> Subspace<f64> {
        let basis = self.basis.iter().map(|b| b.to_f64()).collect();
        let echelon = Echelon::new(self.basis.iter().map(|b| b.to_f64().0).collect(), self.d);
        Subspace::assemble(alg, basis, echelon)
    }
}

impl Subspace<Q> {
    /// Coordinates of the basis over the `p` basis, as rational strings.
    pub fn p_coordinate_strings(&self, alg: &StructuredLieAlgebra) -> Result<Vec<Vec<String>>> {
        self.basis
            .iter()
            .map(|b| {
                alg.p_coordinates(b)
                    .map(|c| c.iter().map(crate::scalar::rational_string).collect())
            })
            .collect()
    }
}

pub fn float_tolerance(norm: f64) -> f64 {
    1e-9 * (1.0 + norm)
}

fn f64_to_q(x: f64) -> Q {
    Q::from_float(x).unwrap_or_default()
}

fn require_in_p<S: AlgebraScalar>(alg: &StructuredLieAlgebra, s: &Subspace<S>) -> Result<()> {
    if !s.is_in_p(alg)? {
        return Err(Error::SubspaceNotInP);
    }
    Ok(())
}

/// `s^perp` inside `p` with respect to the Killing form.
pub fn orthocomplement_in_p<S: AlgebraScalar>(alg: &StructuredLieAlgebra, s: &Subspace<S>) -> Result<Subspace<S>> {
    require_in_p(alg, s)?;
    let p: Vec<AlgebraVector<S>> = alg.p_basis().iter().map(to_mode).collect();
    let rows: Vec<Vec<S>> = s
        .basis
        .iter()
        .map(|sv| p.iter().map(|pv| alg.killing_form(pv, sv)).collect::<Result<Vec<S>>>())
        .collect::<Result<_>>()?;
    let ker = linalg::nullspace(rows, p.len());
    let basis: Vec<AlgebraVector<S>> = ker
        .iter()
        .map(|c| {
            let mut v = AlgebraVector::zero(alg.dim());
            for (ci, pv) in c.iter().zip(&p) {
                if !ci.is_zero() {
                    v.axpy(ci, pv);
                }
            }
            v
        })
        .collect();
    Subspace::new(alg, basis)
}

#[derive(Debug, Clone, Serialize)]
pub struct TripleWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub residual: f64,
    pub remainder: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TripleReport {
    pub holds: bool,
    pub mode: Mode,
    pub max_residual: f64,
    pub witness: Option<TripleWitness>,
}

/// Checks `[[a_i, b_j], c_k] in target` over basis triples.
fn triple_inclusion<S: AlgebraScalar>(
    alg: &StructuredLieAlgebra,
    a: &Subspace<S>,
    b: &Subspace<S>,
    c: &Subspace<S>,
    target: &Subspace<S>,
    antisymmetric_ab: bool,
) -> Result<TripleReport> {
    let mut max_residual: f64 = 0.0;
    let mut witness = None;
    for (i, x) in a.basis.iter().enumerate() {
        for (j, y) in b.basis.iter().enumerate() {
            if antisymmetric_ab && j <= i {
                continue;
            }
            let xy = alg.bracket(x, y)?;
            if xy.is_zero() {
                continue;
            }
            for (k, z) in c.basis.iter().enumerate() {
                let w = alg.bracket(&xy, z)?;
                let m = target.contains(&w)?;
                if !m.inside && witness.is_none() {
                    witness = Some(TripleWitness {
                        i,
                        j,
                        k,
                        residual: m.residual,
                        remainder: m.remainder.to_strings(),
                    });
                }
                max_residual = max_residual.max(m.residual);
            }
        }
    }
    Ok(TripleReport {
        holds: witness.is_none(),
        mode: S::MODE,
        max_residual,
        witness,
    })
}

/// `[[s, s], s] in s`, checked on basis triples.
pub fn is_lie_triple_system<S: AlgebraScalar>(alg: &StructuredLieAlgebra, s: &Subspace<S>) -> Result<TripleReport> {
    require_in_p(alg, s)?;
    triple_inclusion(alg, s, s, s, s, true)
}

#[derive(Debug, Clone, Serialize)]
pub struct ReflectiveReport {
    pub holds: bool,
    pub mode: Mode,
    pub dim_b: usize,
    pub dim_perp: usize,
    pub b_triple_system: TripleReport,
    pub perp_triple_system: TripleReport,
    /// `[[b, b^perp], b] in b^perp`
    pub mixed_into_perp: TripleReport,
    /// `[[b, b^perp], b^perp] in b`
    pub mixed_into_b: TripleReport,
}

pub fn is_reflective<S: AlgebraScalar>(alg: &StructuredLieAlgebra, b: &Subspace<S>) -> Result<ReflectiveReport> {
    require_in_p(alg, b)?;
    let perp = orthocomplement_in_p(alg, b)?;
    let b_lts = triple_inclusion(alg, b, b, b, b, true)?;
    let perp_lts = triple_inclusion(alg, &perp, &perp, &perp, &perp, true)?;
    let into_perp = triple_inclusion(alg, b, &perp, b, &perp, false)?;
    let into_b = triple_inclusion(alg, b, &perp, &perp, b, false)?;
    Ok(ReflectiveReport {
        holds: b_lts.holds && perp_lts.holds && into_perp.holds && into_b.holds,
        mode: S::MODE,
        dim_b: b.dim(),
        dim_perp: perp.dim(),
        b_triple_system: b_lts,
        perp_triple_system: perp_lts,
        mixed_into_perp: into_perp,
        mixed_into_b: into_b,
    })
}

/// A complex structure on `p`, stored as an exact matrix over `p` coordinates.
#[derive(Debug, Clone)]
pub struct ComplexStructure {
    matrix: Vec<Vec<Q>>,
}

impl ComplexStructure {
    /// Checks `J^2 = -id` and B-orthogonality.
    pub fn from_matrix(alg: &StructuredLieAlgebra, matrix: Vec<Vec<Q>>) -> Result<Self> {
        let r = alg.dim_p();
        if matrix.len() != r || matrix.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidComplexStructure(format!("matrix must be {r}x{r}")));
        }
        let sq = linalg::mat_mul(&matrix, &matrix);
        for (i, row) in sq.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let target = if i == j { Q::from_i64(-1) } else { Q::from_i64(0) };
                if *x != target {
                    return Err(Error::InvalidComplexStructure("J^2 != -id".into()));
                }
            }
        }
        let j = ComplexStructure { matrix };
        for a in alg.p_basis() {
            for b in alg.p_basis() {
                if alg.killing_form(&j.apply(alg, a)?, &j.apply(alg, b)?)? != alg.killing_form(a, b)? {
                    return Err(Error::InvalidComplexStructure("J is not B-orthogonal".into()));
                }
            }
        }
        Ok(j)
    }

    /// `J = ad(zeta) / sqrt(c)` on `p`, where `zeta` spans the center of `k`
    /// and `ad(zeta)^2 = -c` on `p`.
    pub fn from_center_of_k(alg: &StructuredLieAlgebra) -> Result<Self> {
        let k = alg.k_basis();
        let d = alg.dim();
        // zeta = sum c_i k_i with [zeta, k_j] = 0 for all j
        let mut rows = Vec::new();
        for kj in k {
            let cols: Vec<AlgebraVector<Q>> = k.iter().map(|ki| alg.bracket(ki, kj)).collect::<Result<_>>()?;
            for comp in 0..d {
                rows.push(cols.iter().map(|c| c.0[comp].clone()).collect::<Vec<Q>>());
            }
        }
        let center = linalg::nullspace(rows, k.len());
        if center.len() != 1 {
            return Err(Error::InvalidComplexStructure(format!(
                "center of k has dimension {}, expected 1",
                center.len()
            )));
        }
        let mut zeta = AlgebraVector::<Q>::zero(d);
        for (c, ki) in center[0].iter().zip(k) {
            zeta.axpy(c, ki);
        }
        let r = alg.dim_p();
        let mut ad = vec![vec![Q::from_i64(0); r]; r];
        for (j, pj) in alg.p_basis().iter().enumerate() {
            let img = alg.p_coordinates(&alg.bracket(&zeta, pj)?)?;
            for i in 0..r {
                ad[i][j] = img[i].clone();
            }
        }
        let sq = linalg::mat_mul(&ad, &ad);
        let c = -sq[0][0].clone();
        let root = crate::scalar::rational_sqrt(&c)
            .filter(|x| *x != Q::from_i64(0))
            .ok_or_else(|| Error::InvalidComplexStructure("ad(zeta)^2 is not -(perfect square) id".into()))?;
        let matrix = ad.into_iter().map(|row| row.into_iter().map(|x| x / &root).collect()).collect();
        Self::from_matrix(alg, matrix)
    }

    pub fn matrix(&self) -> &[Vec<Q>] {
        &self.matrix
    }

    pub fn apply(&self, alg: &StructuredLieAlgebra, v: &AlgebraVector<Q>) -> Result<AlgebraVector<Q>> {
        let c = alg.p_coordinates(v)?;
        alg.from_p_coordinates(&linalg::mat_vec(&self.matrix, &c))
    }

    pub fn apply_f64(&self, alg: &StructuredLieAlgebra, v: &AlgebraVector<f64>) -> Result<AlgebraVector<f64>> {
        let c = alg.p_coordinates(v)?;
        let m: Vec<Vec<f64>> = self.matrix.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect();
        alg.from_p_coordinates(&linalg::mat_vec(&m, &c))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TotallyRealReport {
    pub holds: bool,
    pub max_pairing: f64,
}

/// `B(J x, y) = 0` for all basis pairs of `b`.
pub fn is_totally_real(alg: &StructuredLieAlgebra, b: &Subspace<Q>, j: &ComplexStructure) -> Result<TotallyRealReport> {
    require_in_p(alg, b)?;
    let mut max_pairing: f64 = 0.0;
    for x in b.basis() {
        let jx = j.apply(alg, x)?;
        for y in b.basis() {
            max_pairing = max_pairing.max(alg.killing_form(&jx, y)?.to_f64().abs());
        }
    }
    Ok(TotallyRealReport {
        holds: max_pairing == 0.0,
        max_pairing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_space_str, sl_n};

    fn unit(alg: &StructuredLieAlgebra, label: &str) -> AlgebraVector<Q> {
        let i = alg.labels().iter().position(|l| l == label).unwrap();
        AlgebraVector::unit(alg.dim(), i)
    }

    fn v(c: &[i64]) -> AlgebraVector<Q> {
        AlgebraVector::from_i64(c)
    }

    #[test]
    fn membership_in_span_of_h() {
        let a = sl_n(2).unwrap();
        let s = Subspace::new(&a, vec![v(&[1, 0, 0])]).unwrap();
        let m = s.contains(&v(&[-2, 0, 0])).unwrap();
        assert!(m.inside && m.residual == 0.0);
        assert!(!s.contains(&v(&[0, 1, 1])).unwrap().inside);
        assert!(s.contains(&v(&[0, 0, 0])).unwrap().inside);
        let sf = s.to_f64(&a);
        assert!(sf.contains(&AlgebraVector(vec![3.5, 1e-12, 0.0])).unwrap().inside);
        assert!(!sf.contains(&AlgebraVector(vec![3.5, 1e-3, 0.0])).unwrap().inside);
    }

    #[test]
    fn orthocomplement_of_h() {
        let a = sl_n(2).unwrap();
        let s = Subspace::new(&a, vec![v(&[1, 0, 0])]).unwrap();
        let perp = orthocomplement_in_p(&a, &s).unwrap();
        assert!(perp.same_span(&Subspace::new(&a, vec![v(&[0, 1, 1])]).unwrap()).unwrap());
        assert!(orthocomplement_in_p(&a, &perp).unwrap().same_span(&s).unwrap());
        let p = Subspace::new(&a, a.p_basis().to_vec()).unwrap();
        assert_eq!(orthocomplement_in_p(&a, &p).unwrap().dim(), 0);
        let e = Subspace::new(&a, vec![v(&[0, 1, 0])]).unwrap();
        assert!(matches!(orthocomplement_in_p(&a, &e), Err(Error::SubspaceNotInP)));
    }

    #[test]
    fn triple_systems_and_reflective_pairs() {
        let a = sl_n(2).unwrap();
        let h = Subspace::new(&a, vec![v(&[1, 0, 0])]).unwrap();
        assert!(is_lie_triple_system(&a, &h).unwrap().holds);
        assert!(is_reflective(&a, &Subspace::<Q>::zero(&a)).unwrap().holds);
        for n in ["su21", "su31"] {
            let e = build_space_str(n).unwrap();
            for pair in ["real-form", "complex-hyperplane"] {
                let b = e.build_pair(pair).unwrap().s;
                let r = is_reflective(&e.algebra, &b).unwrap();
                assert!(r.holds, "{n} {pair}");
                assert_eq!(r.mixed_into_b.max_residual, 0.0);
                let perp = orthocomplement_in_p(&e.algebra, &b).unwrap();
                assert!(is_reflective(&e.algebra, &perp).unwrap().holds);
            }
        }
    }

    #[test]
    fn lts_is_basis_independent() {
        let e = build_space_str("su21").unwrap();
        let s = e.build_pair("real-form").unwrap().s;
        let m = vec![vec![Q::from_i64(2), Q::from_i64(1)], vec![Q::from_i64(-3), Q::from_i64(5)]];
        let r = s.recombined(&e.algebra, &m).unwrap();
        assert!(r.same_span(&s).unwrap());
        assert!(is_lie_triple_system(&e.algebra, &r).unwrap().holds);
    }

    #[test]
    fn lts_failure_has_witness() {
        // a plane that is neither complex nor totally real
        let e = build_space_str("su21").unwrap();
        let a = &e.algebra;
        let s = Subspace::new(a, vec![unit(a, "X1"), &unit(a, "Y1") + &unit(a, "X2")]).unwrap();
        let r = is_lie_triple_system(a, &s).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert!(w.residual > 0.0);
    }

    #[test]
    fn totally_real_real_form_not_complex_line() {
        let e = build_space_str("su21").unwrap();
        let a = &e.algebra;
        let j = e.complex_structure.as_ref().unwrap();
        let rf = e.build_pair("real-form").unwrap().s;
        assert!(is_totally_real(a, &rf, j).unwrap().holds);
        let line = e.build_pair("complex-hyperplane").unwrap().s;
        assert!(!is_totally_real(a, &line, j).unwrap().holds);
        assert!(is_totally_real(a, &Subspace::<Q>::zero(a), j).unwrap().holds);
        // p = b + J b for the real form
        let jb: Vec<AlgebraVector<Q>> = rf.basis().iter().map(|x| j.apply(a, x).unwrap()).collect();
        let sum = Subspace::span(a, &[rf.basis().to_vec(), jb].concat()).unwrap();
        assert_eq!(sum.dim(), a.dim_p());
    }

    #[test]
    fn complex_structure_squares_to_minus_one() {
        let e = build_space_str("su31").unwrap();
        let j = ComplexStructure::from_center_of_k(&e.algebra).unwrap();
        for x in e.algebra.p_basis() {
            let jj = j.apply(&e.algebra, &j.apply(&e.algebra, x).unwrap()).unwrap();
            assert_eq!(jj, -x);
        }
        let bad = vec![vec![Q::from_i64(1); e.algebra.dim_p()]; e.algebra.dim_p()];
        assert!(ComplexStructure::from_matrix(&e.algebra, bad).is_err());
    }
}
