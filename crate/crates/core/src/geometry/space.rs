//! The symmetric space `M = G/K` in global normal coordinates `P in p`,
//! realized through the matrix group of a catalog or file algebra.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::dd::{expm_dd, logm_spd_dd, Dd, DdMat};
use super::expm::expm;
use crate::algebra::{AlgebraVector, StructuredLieAlgebra};
use crate::error::{Error, Result};

/// Float model of `G/K` with base point `o = K`.
#[derive(Debug, Clone)]
pub struct SymmetricSpace {
    alg: StructuredLieAlgebra,
    size: usize,
    /// Matrices of all basis elements.
    basis_mats: Vec<DMatrix<f64>>,
    /// Matrices of the `p` basis.
    p_mats: Vec<DMatrix<f64>>,
    /// Frobenius Gram matrix of `p_mats`, inverted.
    frob_inv: DMatrix<f64>,
    /// Killing form on `p` coordinates.
    killing_p: DMatrix<f64>,
    p_mats_dd: Vec<DdMat>,
    frob_inv_dd: DdMat,
}

/// A point in normal coordinates with its group representative `exp(P)`.
#[derive(Debug, Clone)]
pub struct SpacePoint {
    pub coords: Vec<f64>,
    pub rep: DMatrix<f64>,
}

impl SymmetricSpace {
    pub fn new(alg: &StructuredLieAlgebra) -> Result<Self> {
        let real = alg.realization().ok_or(Error::NoRealization)?;
        let size = real.size;
        let basis_mats: Vec<DMatrix<f64>> = real
            .images_f64()
            .into_iter()
            .map(|m| DMatrix::from_fn(size, size, |i, j| m[i][j]))
            .collect();
        let p_mats: Vec<DMatrix<f64>> = alg
            .p_basis()
            .iter()
            .map(|v| {
                let mut m = DMatrix::zeros(size, size);
                for (c, b) in v.0.iter().zip(&basis_mats) {
                    let c = crate::scalar::rational_to_f64(c);
                    if c != 0.0 {
                        m += b * c;
                    }
                }
                m
            })
            .collect();
        let r = p_mats.len();
        let gram = DMatrix::from_fn(r, r, |i, j| p_mats[i].dot(&p_mats[j]));
        let frob_inv = gram.try_inverse().ok_or(Error::DependentBasis)?;
        let pb: Vec<AlgebraVector<f64>> = alg.p_basis().iter().map(|v| v.to_f64()).collect();
        let mut killing_p = DMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                killing_p[(i, j)] = alg.killing_form(&pb[i], &pb[j])?;
            }
        }
        let p_mats_dd: Vec<DdMat> = p_mats.iter().map(|m| DdMat::from_f64(size, |i, j| m[(i, j)])).collect();
        let mut gram_dd = DdMat::zeros(r);
        for i in 0..r {
            for j in 0..r {
                gram_dd.a[i * r + j] = frobenius_dd(&p_mats_dd[i], &p_mats_dd[j]);
            }
        }
        let frob_inv_dd = gram_dd.inverse()?;
        Ok(SymmetricSpace {
            alg: alg.clone(),
            size,
            basis_mats,
            p_mats,
            frob_inv,
            killing_p,
            p_mats_dd,
            frob_inv_dd,
        })
    }

    pub fn algebra(&self) -> &StructuredLieAlgebra {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.p_mats.len()
    }

    pub fn matrix_size(&self) -> usize {
        self.size
    }

    pub fn killing_p(&self) -> &DMatrix<f64> {
        &self.killing_p
    }

    /// Matrix of an algebra vector.
    pub fn algebra_matrix(&self, v: &AlgebraVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.size, self.size);
        for (c, b) in v.0.iter().zip(&self.basis_mats) {
            if *c != 0.0 {
                m += b * *c;
            }
        }
        m
    }

    /// Matrix of a `p` coordinate vector.
    pub fn p_matrix(&self, c: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.size, self.size);
        for (ci, b) in c.iter().zip(&self.p_mats) {
            if *ci != 0.0 {
                m += b * *ci;
            }
        }
        m
    }

    /// `p` coordinates of a matrix together with the relative residual of
    /// the projection onto the span of the `p` matrices.
    pub fn p_coords_of_matrix(&self, m: &DMatrix<f64>) -> (Vec<f64>, f64) {
        let r = self.dim();
        let rhs = nalgebra::DVector::from_fn(r, |i, _| self.p_mats[i].dot(m));
        let c = &self.frob_inv * rhs;
        let c: Vec<f64> = c.iter().cloned().collect();
        let back = self.p_matrix(&c);
        let residual = (m - back).norm() / (1.0 + m.norm());
        (c, residual)
    }

    /// `sqrt(B(v, v))` for `p` coordinates.
    pub fn norm_b(&self, c: &[f64]) -> f64 {
        self.inner_b(c, c).max(0.0).sqrt()
    }

    pub fn inner_b(&self, u: &[f64], v: &[f64]) -> f64 {
        let r = self.dim();
        let mut s = 0.0;
        for i in 0..r {
            for j in 0..r {
                s += u[i] * self.killing_p[(i, j)] * v[j];
            }
        }
        s
    }

    pub fn exp_p(&self, c: &[f64]) -> Result<DMatrix<f64>> {
        expm(&self.p_matrix(c))
    }

    pub fn point(&self, c: &[f64]) -> Result<SpacePoint> {
        Ok(SpacePoint {
            coords: c.to_vec(),
            rep: self.exp_p(c)?,
        })
    }

    pub fn origin(&self) -> SpacePoint {
        SpacePoint {
            coords: vec![0.0; self.dim()],
            rep: DMatrix::identity(self.size, self.size),
        }
    }

    /// Normal coordinates `P` of `g . o`, where `exp(2P) = g theta(g)^{-1} = g g^T`.
    ///
    /// The orthogonal polar factor `U` of `g` comes from the Newton iteration
    /// `U <- (U + U^{-T}) / 2`; then `exp(P) = g U^T` is symmetric positive
    /// definite and its logarithm avoids squaring the condition number.
    pub fn cartan_project(&self, g: &DMatrix<f64>) -> Result<Vec<f64>> {
        let mut u = g.clone();
        for _ in 0..100 {
            let inv_t = u.clone().try_inverse().ok_or(Error::NotPositiveDefinite)?.transpose();
            let next = (&u + inv_t) * 0.5;
            let delta = (&next - &u).norm();
            u = next;
            if delta <= 1e-15 * u.norm() {
                break;
            }
        }
        let h = g * u.transpose();
        let sym = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let min = eig.eigenvalues.min();
        let max = eig.eigenvalues.max();
        if !(min > 0.0) || !max.is_finite() {
            return Err(Error::NotPositiveDefinite);
        }
        let logs = eig.eigenvalues.map(|x| x.ln());
        let log = &eig.eigenvectors * DMatrix::from_diagonal(&logs) * eig.eigenvectors.transpose();
        let (c, residual) = self.p_coords_of_matrix(&log);
        if residual > 1e-10 * (max / min) + 1e-12 {
            return Err(Error::NotInGroup { residual });
        }
        Ok(c)
    }

    /// `exp(P)` in double-double precision.
    pub fn exp_p_dd(&self, c: &[Dd]) -> Result<DdMat> {
        let mut m = DdMat::zeros(self.size);
        for (ci, b) in c.iter().zip(&self.p_mats_dd) {
            if ci.hi != 0.0 {
                m = m.add(&b.scale(*ci));
            }
        }
        expm_dd(&m)
    }

    /// Double-double version of [`Self::cartan_project`], as `log(g g^T) / 2`.
    /// The squared conditioning is harmless at this precision.
    pub fn cartan_project_dd(&self, g: &DdMat) -> Result<Vec<Dd>> {
        let l = logm_spd_dd(&g.mul(&g.transpose()))?.ldexp(-1);
        let r = self.dim();
        let rhs: Vec<Dd> = self.p_mats_dd.iter().map(|p| frobenius_dd(p, &l)).collect();
        let c: Vec<Dd> = (0..r)
            .map(|i| (0..r).fold(Dd::ZERO, |acc, j| acc + self.frob_inv_dd.get(i, j) * rhs[j]))
            .collect();
        let lf = DMatrix::from_fn(self.size, self.size, |i, j| l.get(i, j).to_f64());
        let cf: Vec<f64> = c.iter().map(|x| x.to_f64()).collect();
        let residual = (&lf - self.p_matrix(&cf)).norm() / (1.0 + lf.norm());
        if residual > 1e-10 {
            return Err(Error::NotInGroup { residual });
        }
        Ok(c)
    }

    /// Point `g . o`.
    pub fn act(&self, g: &DMatrix<f64>) -> Result<SpacePoint> {
        let c = self.cartan_project(g)?;
        self.point(&c)
    }

    /// Riemannian distance for the Killing metric.
    pub fn distance(&self, a: &SpacePoint, b: &SpacePoint) -> Result<f64> {
        let ainv = expm(&(self.p_matrix(&a.coords) * -1.0))?;
        let c = self.cartan_project(&(ainv * &b.rep))?;
        Ok(self.norm_b(&c))
    }

    /// Distance from the base point, read off directly from the coordinates.
    pub fn distance_from_origin(&self, a: &SpacePoint) -> f64 {
        self.norm_b(&a.coords)
    }

    /// Applies `sinh(ad_P)/ad_P = sum ad_P^{2k}/(2k+1)!` to `u`, all on `p`
    /// coordinates; `u` in `p` maps to `p` since only even powers occur.
    pub fn dexp_factor(&self, p: &[f64], u: &[f64], max_terms: usize) -> Result<Vec<f64>> {
        let alg = &self.alg;
        let pv = alg.from_p_coordinates(p)?;
        let mut term = alg.from_p_coordinates(u)?;
        let mut sum = term.clone();
        let mut k = 0usize;
        loop {
            let next = alg.bracket(&pv, &alg.bracket(&pv, &term)?)?;
            let denom = ((2 * k + 2) * (2 * k + 3)) as f64;
            term = next.scale(&(1.0 / denom));
            sum = &sum + &term;
            k += 1;
            let tn = term.norm();
            if tn <= 1e-17 * sum.norm().max(1e-300) || tn == 0.0 {
                break;
            }
            if k >= max_terms {
                let ratio = tn / sum.norm().max(1e-300);
                if ratio > 1e-12 {
                    return Err(Error::TruncationTooSmall { k, ratio });
                }
                break;
            }
        }
        alg.p_coordinates(&sum)
    }

    /// Metric at `exp(P) . o` in normal coordinates, as a matrix on `p` coordinates.
    pub fn metric_matrix(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let r = self.dim();
        let cols: Vec<Vec<f64>> = (0..r)
            .map(|i| {
                let mut e = vec![0.0; r];
                e[i] = 1.0;
                self.dexp_factor(p, &e, 200)
            })
            .collect::<Result<_>>()?;
        let s = DMatrix::from_fn(r, r, |i, j| cols[j][i]);
        Ok(s.transpose() * &self.killing_p * s)
    }

    /// `g_P(u, v) = B(S(P) u, S(P) v)`.
    pub fn pullback_metric(&self, p: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
        let su = self.dexp_factor(p, u, 200)?;
        let sv = self.dexp_factor(p, v, 200)?;
        Ok(self.inner_b(&su, &sv))
    }
}

fn frobenius_dd(a: &DdMat, b: &DdMat) -> Dd {
    a.a.iter().zip(&b.a).fold(Dd::ZERO, |acc, (x, y)| acc + *x * *y)
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub passed: bool,
}

impl InvariantReport {
    pub fn new(name: &str, max_error: f64, tolerance: f64, samples: usize) -> Self {
        InvariantReport {
            name: name.into(),
            max_error,
            tolerance,
            samples,
            passed: max_error <= tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_space_str, sl_n};

    fn sl2() -> (SymmetricSpace, Vec<f64>, Vec<f64>) {
        let alg = sl_n(2).unwrap();
        let h = alg.p_coordinates(&AlgebraVector(vec![1.0, 0.0, 0.0])).unwrap();
        let ef = alg.p_coordinates(&AlgebraVector(vec![0.0, 1.0, 1.0])).unwrap();
        (SymmetricSpace::new(&alg).unwrap(), h, ef)
    }

    fn scaled(v: &[f64], c: f64) -> Vec<f64> {
        v.iter().map(|x| x * c).collect()
    }

    #[test]
    fn killing_lengths_on_sl2() {
        // B(X, Y) = 4 tr(XY) on sl(2)
        let (sp, h, ef) = sl2();
        assert!((sp.norm_b(&h) - 8f64.sqrt()).abs() < 1e-14);
        assert!((sp.norm_b(&ef) - 8f64.sqrt()).abs() < 1e-14);
        assert!(sp.inner_b(&h, &ef).abs() < 1e-14);
    }

    #[test]
    fn distance_along_a_geodesic() {
        let (sp, h, _) = sl2();
        let o = sp.origin();
        for t in [-1.5, -0.3, 0.0, 0.7, 2.0] {
            let q = sp.point(&scaled(&h, t)).unwrap();
            let d = sp.distance(&o, &q).unwrap();
            assert!((d - t.abs() * 8f64.sqrt()).abs() < 1e-12, "{t}: {d}");
        }
        let a = sp.point(&scaled(&h, 0.4)).unwrap();
        let b = sp.point(&scaled(&h, -0.9)).unwrap();
        assert!((sp.distance(&a, &b).unwrap() - 1.3 * 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn pullback_metric_closed_form() {
        // ad_P^2 (E+F) = 4 r^2 (E+F) for P = r H, so the factor is sinh(2r)/(2r)
        let (sp, h, ef) = sl2();
        for r in [0.1, 0.5, 1.2] {
            let p = scaled(&h, r);
            let f = (2.0 * r).sinh() / (2.0 * r);
            let g = sp.pullback_metric(&p, &ef, &ef).unwrap();
            assert!((g - 8.0 * f * f).abs() < 1e-12 * g, "{r}");
            let radial = sp.pullback_metric(&p, &h, &h).unwrap();
            assert!((radial - 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cartan_projection_strips_k() {
        let e = build_space_str("su21").unwrap();
        let sp = SymmetricSpace::new(&e.algebra).unwrap();
        let alg = &e.algebra;
        let mut kv = AlgebraVector::<f64>::zero(alg.dim());
        for b in alg.k_basis() {
            kv = &kv + &b.to_f64().scale(&0.37);
        }
        let k = expm(&sp.algebra_matrix(&kv)).unwrap();
        let c = sp.cartan_project(&k).unwrap();
        assert!(c.iter().all(|x| x.abs() < 1e-12), "{c:?}");
        let p: Vec<f64> = (0..sp.dim()).map(|i| 0.3 - 0.15 * i as f64).collect();
        let g = sp.exp_p(&p).unwrap() * &k;
        let back = sp.cartan_project(&g).unwrap();
        for (x, y) in back.iter().zip(&p) {
            assert!((x - y).abs() < 1e-11);
        }
        let dd = sp.cartan_project_dd(&DdMat::from_f64(sp.matrix_size(), |i, j| g[(i, j)])).unwrap();
        for (x, y) in dd.iter().zip(&p) {
            assert!((x.to_f64() - y).abs() < 1e-11);
        }
    }
}
