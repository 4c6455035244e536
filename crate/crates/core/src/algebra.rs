//! Real semisimple Lie algebras with a Cartan involution, given by a bracket
//! table over a fixed basis.

use std::fmt::Write as _;
use std::ops::{Add, Neg, Sub};

use num::traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon};
use crate::scalar::{rational_string, Mode, Scalar, Q};

/// Coefficient vector over the algebra basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraVector<S>(pub Vec<S>);

impl<S: Scalar> AlgebraVector<S> {
    pub fn zero(d: usize) -> Self {
        AlgebraVector(vec![S::zero(); d])
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = Self::zero(d);
        v.0[i] = S::one();
        v
    }

    pub fn from_i64(c: &[i64]) -> Self {
        AlgebraVector(c.iter().map(|&x| S::from_i64(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        AlgebraVector(self.0.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: &S, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a = a.clone() + c.clone() * b.clone();
            }
        }
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> AlgebraVector<f64> {
        AlgebraVector(self.0.iter().map(|x| x.to_f64()).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|x| x.to_string()).collect()
    }
}

impl AlgebraVector<Q> {
    pub fn to_rational_strings(&self) -> Vec<String> {
        self.0.iter().map(rational_string).collect()
    }
}

impl<S: Scalar> Add for &AlgebraVector<S> {
    type Output = AlgebraVector<S>;
    fn add(self, rhs: Self) -> AlgebraVector<S> {
        AlgebraVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }
}

impl<S: Scalar> Sub for &AlgebraVector<S> {
    type Output = AlgebraVector<S>;
    fn sub(self, rhs: Self) -> AlgebraVector<S> {
        AlgebraVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }
}

impl<S: Scalar> Neg for &AlgebraVector<S> {
    type Output = AlgebraVector<S>;
    fn neg(self) -> AlgebraVector<S> {
        AlgebraVector(self.0.iter().map(|a| -a.clone()).collect())
    }
}

/// Sparse structure constants: `entries[i * d + j]` lists `(k, c)` with
/// `[e_i, e_j] = sum c e_k`.
#[derive(Debug, Clone)]
pub struct BracketTable<S> {
    d: usize,
    entries: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> BracketTable<S> {
    fn get(&self, i: usize, j: usize) -> &[(usize, S)] {
        &self.entries[i * self.d + j]
    }

    fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BracketTable<T> {
        BracketTable {
            d: self.d,
            entries: self
                .entries
                .iter()
                .map(|e| e.iter().map(|(k, c)| (*k, f(c))).collect())
                .collect(),
        }
    }
}

/// Scalar-mode dependent caches of an algebra.
#[derive(Debug, Clone)]
pub struct ModeData<S> {
    table: BracketTable<S>,
    theta: Vec<Vec<S>>,
    killing: Vec<Vec<S>>,
}

/// Scalars an algebra can compute in.
pub trait AlgebraScalar: Scalar {
    fn data(a: &StructuredLieAlgebra) -> &ModeData<Self>;
}

impl AlgebraScalar for Q {
    fn data(a: &StructuredLieAlgebra) -> &ModeData<Q> {
        &a.exact
    }
}

impl AlgebraScalar for f64 {
    fn data(a: &StructuredLieAlgebra) -> &ModeData<f64> {
        &a.float
    }
}

/// How the Cartan involution acts on group elements of a realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvolutionRule {
    /// `theta(g) = (g^T)^{-1}`, differential `x -> -x^T`.
    TransposeInverse,
}

/// Real matrix images of the basis. Complex realizations are stored in
/// realified form (`a + bi -> [[a, -b], [b, a]]`), which turns `g^dagger`
/// into `g^T`.
#[derive(Debug, Clone)]
pub struct MatrixRealization {
    pub size: usize,
    pub images: Vec<Vec<Vec<Q>>>,
    pub involution: InvolutionRule,
    pub realified: bool,
}

impl MatrixRealization {
    pub fn images_f64(&self) -> Vec<Vec<Vec<f64>>> {
        self.images
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect())
            .collect()
    }
}

/// Realifies a complex matrix given as (real part, imaginary part).
pub fn realify(re: &[Vec<Q>], im: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = re.len();
    let mut out = vec![vec![Q::zero(); 2 * n]; 2 * n];
    for r in 0..n {
        for c in 0..n {
            let a = &re[r][c];
            let b = &im[r][c];
            out[2 * r][2 * c] = a.clone();
            out[2 * r][2 * c + 1] = -b.clone();
            out[2 * r + 1][2 * c] = b.clone();
            out[2 * r + 1][2 * c + 1] = a.clone();
        }
    }
    out
}

fn commutator(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let ab = linalg::mat_mul(a, b);
    let ba = linalg::mat_mul(b, a);
    ab.iter()
        .zip(&ba)
        .map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| x - y).collect())
        .collect()
}

fn flatten(m: &[Vec<Q>]) -> Vec<Q> {
    m.iter().flat_map(|r| r.iter().cloned()).collect()
}

fn transpose(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect()
}

/// The involutive Lie algebra `g = k + p`.
#[derive(Debug, Clone)]
pub struct StructuredLieAlgebra {
    name: String,
    labels: Vec<String>,
    exact: ModeData<Q>,
    float: ModeData<f64>,
    k_basis: Vec<AlgebraVector<Q>>,
    p_basis: Vec<AlgebraVector<Q>>,
    p_free: Vec<usize>,
    realization: Option<MatrixRealization>,
}

impl StructuredLieAlgebra {
    /// Builds the algebra from the sparse upper triangle of the bracket table
    /// (`(i, j, coeffs)` with `i < j`) and the matrix of the involution
    /// (`theta[i][j]` is the `e_i` coefficient of `theta(e_j)`).
    ///
    /// Structural axioms are not enforced here; see [`Self::validate`].
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        brackets: &[(usize, usize, Vec<Q>)],
        theta: Vec<Vec<Q>>,
    ) -> Result<Self> {
        let d = labels.len();
        if d == 0 {
            return Err(Error::InvalidAlgebra("empty basis".into()));
        }
        if theta.len() != d || theta.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidAlgebra(format!("theta must be {d}x{d}")));
        }
        let mut entries = vec![Vec::new(); d * d];
        for (i, j, c) in brackets {
            let (i, j) = (*i, *j);
            if i >= d || j >= d {
                return Err(Error::InvalidAlgebra(format!("bracket index ({i}, {j}) out of range")));
            }
            if c.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: c.len() });
            }
            let fwd: Vec<(usize, Q)> = c
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| (k, x.clone()))
                .collect();
            let bwd: Vec<(usize, Q)> = fwd.iter().map(|(k, x)| (*k, -x.clone())).collect();
            if i == j {
                if !fwd.is_empty() {
                    // keep it so that validation reports the antisymmetry failure
                    entries[i * d + j] = fwd;
                }
                continue;
            }
            entries[i * d + j] = fwd;
            entries[j * d + i] = bwd;
        }
        let table = BracketTable { d, entries };
        let killing = killing_matrix(&table);
        let mut theta_minus = theta.clone();
        let mut theta_plus = theta.clone();
        for i in 0..d {
            theta_minus[i][i] = &theta_minus[i][i] - Q::from_i64(1);
            theta_plus[i][i] = &theta_plus[i][i] + Q::from_i64(1);
        }
        let k_basis: Vec<AlgebraVector<Q>> =
            linalg::nullspace(theta_minus, d).into_iter().map(AlgebraVector).collect();
        let p_ech = Echelon::new(theta_plus, d);
        let p_free = p_ech.free_columns();
        let p_basis: Vec<AlgebraVector<Q>> = p_ech.nullspace().into_iter().map(AlgebraVector).collect();
        let to_f = |m: &Vec<Vec<Q>>| -> Vec<Vec<f64>> {
            m.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect()
        };
        let float = ModeData {
            table: table.convert(|x| x.to_f64()),
            theta: to_f(&theta),
            killing: to_f(&killing),
        };
        Ok(StructuredLieAlgebra {
            name: name.into(),
            labels,
            exact: ModeData {
                table,
                theta,
                killing,
            },
            float,
            k_basis,
            p_basis,
            p_free,
            realization: None,
        })
    }

    /// Builds the algebra spanned by real matrices: brackets are the matrix
    /// commutators re-expressed in the basis, and the involution is the
    /// differential `x -> -x^T` of `g -> (g^T)^{-1}`.
    pub fn from_matrix_basis(
        name: impl Into<String>,
        labels: Vec<String>,
        images: Vec<Vec<Vec<Q>>>,
        realified: bool,
    ) -> Result<Self> {
        let d = images.len();
        if d != labels.len() {
            return Err(Error::DimensionMismatch { expected: labels.len(), got: d });
        }
        let size = images.first().map_or(0, |m| m.len());
        let cols: Vec<Vec<Q>> = images.iter().map(|m| flatten(m)).collect();
        let a: Vec<Vec<Q>> = (0..size * size)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        if linalg::rank(a.clone(), d) != d {
            return Err(Error::DependentBasis);
        }
        let express = |m: &[Vec<Q>]| -> Result<Vec<Q>> {
            linalg::solve(&a, &flatten(m))
                .ok_or_else(|| Error::InvalidAlgebra("matrix span is not closed under the operation".into()))
        };
        let mut brackets = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let c = express(&commutator(&images[i], &images[j]))?;
                if c.iter().any(|x| !x.is_zero()) {
                    brackets.push((i, j, c));
                }
            }
        }
        let mut theta = vec![vec![Q::zero(); d]; d];
        for (j, m) in images.iter().enumerate() {
            let neg_t: Vec<Vec<Q>> = transpose(m).into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect();
            let c = express(&neg_t)?;
            for i in 0..d {
                theta[i][j] = c[i].clone();
            }
        }
        let mut alg = Self::new(name, labels, &brackets, theta)?;
        alg.realization = Some(MatrixRealization {
            size,
            images,
            involution: InvolutionRule::TransposeInverse,
            realified,
        });
        Ok(alg)
    }

    pub fn with_realization(mut self, r: MatrixRealization) -> Self {
        self.realization = Some(r);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn k_basis(&self) -> &[AlgebraVector<Q>] {
        &self.k_basis
    }

    pub fn p_basis(&self) -> &[AlgebraVector<Q>] {
        &self.p_basis
    }

    pub fn dim_k(&self) -> usize {
        self.k_basis.len()
    }

    pub fn dim_p(&self) -> usize {
        self.p_basis.len()
    }

    pub fn realization(&self) -> Option<&MatrixRealization> {
        self.realization.as_ref()
    }

    pub fn theta_matrix<S: AlgebraScalar>(&self) -> &[Vec<S>] {
        &S::data(self).theta
    }

    pub fn killing_matrix<S: AlgebraScalar>(&self) -> &[Vec<S>] {
        &S::data(self).killing
    }

    /// Upper-triangle nonzero bracket entries.
    pub fn bracket_entries(&self) -> Vec<(usize, usize, Vec<Q>)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let e = self.exact.table.get(i, j);
                if !e.is_empty() {
                    let mut c = vec![Q::zero(); d];
                    for (k, x) in e {
                        c[*k] = x.clone();
                    }
                    out.push((i, j, c));
                }
            }
        }
        out
    }

    fn check_len<S>(&self, v: &AlgebraVector<S>) -> Result<()> {
        if v.0.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.0.len() });
        }
        Ok(())
    }

    pub fn bracket<S: AlgebraScalar>(&self, x: &AlgebraVector<S>, y: &AlgebraVector<S>) -> Result<AlgebraVector<S>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    fn bracket_unchecked<S: AlgebraScalar>(&self, x: &AlgebraVector<S>, y: &AlgebraVector<S>) -> AlgebraVector<S> {
        let table = &S::data(self).table;
        let d = self.dim();
        let mut out = vec![S::zero(); d];
        for (i, xi) in x.0.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.0.iter().enumerate() {
                if yj.is_zero() || i == j && table.get(i, j).is_empty() {
                    continue;
                }
                let f = xi.clone() * yj.clone();
                for (k, c) in table.get(i, j) {
                    out[*k] = out[*k].clone() + f.clone() * c.clone();
                }
            }
        }
        AlgebraVector(out)
    }

    /// `ad_Y^k X`.
    pub fn ad_power<S: AlgebraScalar>(&self, y: &AlgebraVector<S>, k: usize, x: &AlgebraVector<S>) -> Result<AlgebraVector<S>> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut v = x.clone();
        for _ in 0..k {
            v = self.bracket_unchecked(y, &v);
        }
        Ok(v)
    }

    /// `[X, ad_Y X, ..., ad_Y^max X]`.
    pub fn ad_chain<S: AlgebraScalar>(&self, y: &AlgebraVector<S>, x: &AlgebraVector<S>, max: usize) -> Result<Vec<AlgebraVector<S>>> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut out = Vec::with_capacity(max + 1);
        out.push(x.clone());
        for k in 0..max {
            let next = self.bracket_unchecked(y, &out[k]);
            out.push(next);
        }
        Ok(out)
    }

    /// Matrix of `ad_x` (column `j` is `[x, e_j]`).
    pub fn ad_matrix<S: AlgebraScalar>(&self, x: &AlgebraVector<S>) -> Result<Vec<Vec<S>>> {
        self.check_len(x)?;
        let d = self.dim();
        let mut m = vec![vec![S::zero(); d]; d];
        for j in 0..d {
            let col = self.bracket_unchecked(x, &AlgebraVector::unit(d, j));
            for i in 0..d {
                m[i][j] = col.0[i].clone();
            }
        }
        Ok(m)
    }

    pub fn killing_form<S: AlgebraScalar>(&self, x: &AlgebraVector<S>, y: &AlgebraVector<S>) -> Result<S> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.killing_unchecked(x, y))
    }

    fn killing_unchecked<S: AlgebraScalar>(&self, x: &AlgebraVector<S>, y: &AlgebraVector<S>) -> S {
        let by = linalg::mat_vec(&S::data(self).killing, &y.0);
        x.0.iter().zip(&by).fold(S::zero(), |acc, (a, b)| {
            if a.is_zero() || b.is_zero() {
                acc
            } else {
                acc + a.clone() * b.clone()
            }
        })
    }

    pub fn theta_apply<S: AlgebraScalar>(&self, v: &AlgebraVector<S>) -> Result<AlgebraVector<S>> {
        self.check_len(v)?;
        Ok(AlgebraVector(linalg::mat_vec(&S::data(self).theta, &v.0)))
    }

    /// `(k_part, p_part)` with `v = k + p`, `theta(k) = k`, `theta(p) = -p`.
    pub fn cartan_split<S: AlgebraScalar>(&self, v: &AlgebraVector<S>) -> Result<(AlgebraVector<S>, AlgebraVector<S>)> {
        let tv = self.theta_apply(v)?;
        let half = S::one() / S::from_i64(2);
        let k = (v + &tv).scale(&half);
        let p = (v - &tv).scale(&half);
        Ok((k, p))
    }

    /// Size of `theta(v) + v`; zero iff `v` is in `p`.
    pub fn p_residual<S: AlgebraScalar>(&self, v: &AlgebraVector<S>) -> Result<f64> {
        let tv = self.theta_apply(v)?;
        Ok((&tv + v).max_abs())
    }

    pub fn is_in_p<S: AlgebraScalar>(&self, v: &AlgebraVector<S>) -> Result<bool> {
        let tv = self.theta_apply(v)?;
        let sum = &tv + v;
        let scale = v.max_abs().max(1.0);
        Ok(sum.0.iter().all(|x| x.is_negligible(scale * 1e3)))
    }

    pub fn is_in_k<S: AlgebraScalar>(&self, v: &AlgebraVector<S>) -> Result<bool> {
        let tv = self.theta_apply(v)?;
        let diff = &tv - v;
        let scale = v.max_abs().max(1.0);
        Ok(diff.0.iter().all(|x| x.is_negligible(scale * 1e3)))
    }

    /// Coordinates of `v` in the computed `p` basis; `v` must lie in `p`.
    pub fn p_coordinates<S: AlgebraScalar>(&self, v: &AlgebraVector<S>) -> Result<Vec<S>> {
        if !self.is_in_p(v)? {
            return Err(Error::NotInP { residual: self.p_residual(v)? });
        }
        Ok(self.p_free.iter().map(|&i| v.0[i].clone()).collect())
    }

    pub fn from_p_coordinates<S: AlgebraScalar>(&self, c: &[S]) -> Result<AlgebraVector<S>> {
        if c.len() != self.dim_p() {
            return Err(Error::DimensionMismatch { expected: self.dim_p(), got: c.len() });
        }
        let mut v = AlgebraVector::zero(self.dim());
        for (ci, b) in c.iter().zip(&self.p_basis) {
            if !ci.is_zero() {
                v.axpy(ci, &convert(b));
            }
        }
        Ok(v)
    }

    /// `R(u, v) w = [[u, v], w]` on `p`. With this sign the Jacobi operator
    /// `R(c, .) c` is B-negative semidefinite on noncompact type.
    pub fn curvature_tensor<S: AlgebraScalar>(
        &self,
        u: &AlgebraVector<S>,
        v: &AlgebraVector<S>,
        w: &AlgebraVector<S>,
    ) -> Result<AlgebraVector<S>> {
        for x in [u, v, w] {
            self.check_len(x)?;
            if !self.is_in_p(x)? {
                return Err(Error::NotInP { residual: self.p_residual(x)? });
            }
        }
        let uv = self.bracket_unchecked(u, v);
        Ok(self.bracket_unchecked(&uv, w))
    }

    /// `R(c, v) c`.
    pub fn jacobi_operator<S: AlgebraScalar>(&self, c: &AlgebraVector<S>, v: &AlgebraVector<S>) -> Result<AlgebraVector<S>> {
        self.curvature_tensor(c, v, c)
    }

    /// Checks every structural axiom; see [`ValidationReport`].
    pub fn validate(&self) -> ValidationReport {
        validate_algebra(self)
    }

    /// Commutators of the realization versus the bracket table, and the
    /// differential of the group involution versus theta.
    pub fn validate_realization(&self) -> Result<RealizationReport> {
        let r = self.realization.as_ref().ok_or(Error::NoRealization)?;
        let d = self.dim();
        let combine = |c: &[Q]| -> Vec<Vec<Q>> {
            let mut m = vec![vec![Q::zero(); r.size]; r.size];
            for (k, ck) in c.iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                for a in 0..r.size {
                    for b in 0..r.size {
                        if !r.images[k][a][b].is_zero() {
                            m[a][b] = &m[a][b] + ck * &r.images[k][a][b];
                        }
                    }
                }
            }
            m
        };
        let max_diff = |a: &[Vec<Q>], b: &[Vec<Q>]| -> f64 {
            a.iter()
                .zip(b)
                .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).to_f64().abs()))
                .fold(0.0, f64::max)
        };
        let mut commutator_residual: f64 = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                let mut c = vec![Q::zero(); d];
                for (k, x) in self.exact.table.get(i, j) {
                    c[*k] = x.clone();
                }
                let lhs = commutator(&r.images[i], &r.images[j]);
                commutator_residual = commutator_residual.max(max_diff(&lhs, &combine(&c)));
            }
        }
        let mut involution_residual: f64 = 0.0;
        for j in 0..d {
            let col: Vec<Q> = (0..d).map(|i| self.exact.theta[i][j].clone()).collect();
            let neg_t: Vec<Vec<Q>> = transpose(&r.images[j]).into_iter().map(|row| row.into_iter().map(|x| -x).collect()).collect();
            involution_residual = involution_residual.max(max_diff(&neg_t, &combine(&col)));
        }
        Ok(RealizationReport {
            size: r.size,
            realified: r.realified,
            commutator_residual,
            involution_residual,
            passed: commutator_residual == 0.0 && involution_residual == 0.0,
        })
    }
}

fn convert<S: Scalar>(v: &AlgebraVector<Q>) -> AlgebraVector<S> {
    AlgebraVector(v.0.iter().map(S::from_rational).collect())
}

/// Converts an exact vector to either scalar mode.
pub fn to_mode<S: Scalar>(v: &AlgebraVector<Q>) -> AlgebraVector<S> {
    convert(v)
}

fn killing_matrix(table: &BracketTable<Q>) -> Vec<Vec<Q>> {
    let d = table.d;
    // dense[i][l][k] = coefficient of e_k in [e_i, e_l]
    let mut dense = vec![vec![vec![Q::zero(); d]; d]; d];
    for i in 0..d {
        for l in 0..d {
            for (k, c) in table.get(i, l) {
                dense[i][l][*k] = c.clone();
            }
        }
    }
    let mut b = vec![vec![Q::zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            // tr(ad_i ad_j) = sum_{k,l} c_{i l}^k c_{j k}^l
            let mut acc = Q::zero();
            for l in 0..d {
                for (k, c) in table.get(i, l) {
                    let other = &dense[j][*k][l];
                    if !other.is_zero() {
                        acc += c * other;
                    }
                }
            }
            b[i][j] = acc.clone();
            b[j][i] = acc;
        }
    }
    b
}

#[derive(Debug, Clone, Serialize)]
pub struct RealizationReport {
    pub size: usize,
    pub realified: bool,
    pub commutator_residual: f64,
    pub involution_residual: f64,
    pub passed: bool,
}

/// Residuals of every structural axiom of an involutive Lie algebra.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub algebra: String,
    pub mode: Mode,
    pub dim: usize,
    pub dim_k: usize,
    pub dim_p: usize,
    pub antisymmetry: f64,
    pub jacobi: f64,
    pub jacobi_witness: Option<[usize; 3]>,
    pub theta_involution: f64,
    pub theta_automorphism: f64,
    pub killing_symmetry: f64,
    pub killing_theta_invariance: f64,
    pub cartan_closure: f64,
    pub killing_negative_definite_on_k: bool,
    pub killing_positive_definite_on_p: bool,
    pub killing_nondegenerate: bool,
    pub failures: Vec<String>,
    pub passed: bool,
}

pub fn validate_algebra(a: &StructuredLieAlgebra) -> ValidationReport {
    let d = a.dim();
    let t = &a.exact.table;
    let e = |i: usize| AlgebraVector::<Q>::unit(d, i);
    let mut failures = Vec::new();

    let mut antisymmetry: f64 = 0.0;
    for i in 0..d {
        for j in i..d {
            let mut s = vec![Q::zero(); d];
            for (k, c) in t.get(i, j) {
                s[*k] += c;
            }
            if i != j {
                for (k, c) in t.get(j, i) {
                    s[*k] += c;
                }
            }
            antisymmetry = antisymmetry.max(AlgebraVector(s).max_abs());
        }
    }

    let basis: Vec<AlgebraVector<Q>> = (0..d).map(e).collect();
    let mut jacobi: f64 = 0.0;
    let mut jacobi_witness = None;
    for i in 0..d {
        for j in i + 1..d {
            let ij = a.bracket_unchecked(&basis[i], &basis[j]);
            for k in j + 1..d {
                let jk = a.bracket_unchecked(&basis[j], &basis[k]);
                let ki = a.bracket_unchecked(&basis[k], &basis[i]);
                let sum = &(&a.bracket_unchecked(&basis[i], &jk) + &a.bracket_unchecked(&basis[j], &ki))
                    + &a.bracket_unchecked(&basis[k], &ij);
                let r = sum.max_abs();
                if r > jacobi {
                    jacobi = r;
                    jacobi_witness = Some([i, j, k]);
                }
            }
        }
    }

    let theta = &a.exact.theta;
    let theta_sq = linalg::mat_mul(theta, theta);
    let mut theta_involution: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { Q::from_i64(1) } else { Q::zero() };
            theta_involution = theta_involution.max((&theta_sq[i][j] - target).to_f64().abs());
        }
    }
    let theta_vecs: Vec<AlgebraVector<Q>> = (0..d)
        .map(|j| AlgebraVector((0..d).map(|i| theta[i][j].clone()).collect()))
        .collect();
    let mut theta_automorphism: f64 = 0.0;
    for i in 0..d {
        for j in i + 1..d {
            let lhs = AlgebraVector(linalg::mat_vec(theta, &a.bracket_unchecked(&basis[i], &basis[j]).0));
            let rhs = a.bracket_unchecked(&theta_vecs[i], &theta_vecs[j]);
            theta_automorphism = theta_automorphism.max((&lhs - &rhs).max_abs());
        }
    }

    let b = &a.exact.killing;
    let mut killing_symmetry: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            killing_symmetry = killing_symmetry.max((&b[i][j] - &b[j][i]).to_f64().abs());
        }
    }
    let bt = linalg::mat_mul(&linalg::mat_mul(&transpose(theta), b), theta);
    let mut killing_theta_invariance: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            killing_theta_invariance = killing_theta_invariance.max((&bt[i][j] - &b[i][j]).to_f64().abs());
        }
    }

    let gram = |vs: &[AlgebraVector<Q>], sign: i64| -> Vec<Vec<Q>> {
        vs.iter()
            .map(|x| vs.iter().map(|y| a.killing_unchecked(x, y) * Q::from_i64(sign)).collect())
            .collect()
    };
    let killing_negative_definite_on_k = linalg::is_positive_definite(&gram(&a.k_basis, -1));
    let killing_positive_definite_on_p = a.p_basis.is_empty() || linalg::is_positive_definite(&gram(&a.p_basis, 1));
    let killing_nondegenerate = linalg::rank(b.clone(), d) == d;

    let mut cartan_closure: f64 = 0.0;
    for (xs, ys, want_k) in [
        (&a.k_basis, &a.k_basis, true),
        (&a.k_basis, &a.p_basis, false),
        (&a.p_basis, &a.p_basis, true),
    ] {
        for x in xs.iter() {
            for y in ys.iter() {
                let z = a.bracket_unchecked(x, y);
                let tz = AlgebraVector(linalg::mat_vec(theta, &z.0));
                let r = if want_k { (&tz - &z).max_abs() } else { (&tz + &z).max_abs() };
                cartan_closure = cartan_closure.max(r);
            }
        }
    }

    let mut check = |ok: bool, msg: String| {
        if !ok {
            failures.push(msg);
        }
    };
    check(antisymmetry == 0.0, format!("antisymmetry residual {antisymmetry}"));
    check(jacobi == 0.0, {
        let mut s = format!("Jacobi identity residual {jacobi}");
        if let Some([i, j, k]) = jacobi_witness {
            let _ = write!(s, " at ({}, {}, {})", a.labels[i], a.labels[j], a.labels[k]);
        }
        s
    });
    check(theta_involution == 0.0, format!("theta^2 != id (residual {theta_involution})"));
    check(theta_automorphism == 0.0, format!("theta is not an automorphism (residual {theta_automorphism})"));
    check(killing_symmetry == 0.0, "Killing form not symmetric".into());
    check(killing_theta_invariance == 0.0, "Killing form not theta-invariant".into());
    check(cartan_closure == 0.0, format!("Cartan bracket relations fail (residual {cartan_closure})"));
    check(killing_nondegenerate, "not semisimple: Killing form is degenerate".into());
    check(killing_negative_definite_on_k, "Killing form not negative definite on k".into());
    check(killing_positive_definite_on_p, "Killing form not positive definite on p (not of noncompact type)".into());
    if a.p_basis.is_empty() {
        failures.push("p is trivial".into());
    }

    let passed = failures.is_empty();
    ValidationReport {
        algebra: a.name.clone(),
        mode: Mode::Exact,
        dim: d,
        dim_k: a.dim_k(),
        dim_p: a.dim_p(),
        antisymmetry,
        jacobi,
        jacobi_witness,
        theta_involution,
        theta_automorphism,
        killing_symmetry,
        killing_theta_invariance,
        cartan_closure,
        killing_negative_definite_on_k,
        killing_positive_definite_on_p,
        killing_nondegenerate,
        failures,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qf};

    /// sl(2,R) with basis H, E, F entered by hand (not via matrices).
    pub(crate) fn sl2_by_hand(ef: Vec<Q>) -> StructuredLieAlgebra {
        let labels = vec!["H".to_string(), "E".into(), "F".into()];
        let br = vec![
            (0, 1, vec![q(0), q(2), q(0)]),
            (0, 2, vec![q(0), q(0), q(-2)]),
            (1, 2, ef),
        ];
        let theta = vec![
            vec![q(-1), q(0), q(0)],
            vec![q(0), q(0), q(-1)],
            vec![q(0), q(-1), q(0)],
        ];
        StructuredLieAlgebra::new("sl2", labels, &br, theta).unwrap()
    }

    fn sl2() -> StructuredLieAlgebra {
        sl2_by_hand(vec![q(1), q(0), q(0)])
    }

    fn v(c: &[i64]) -> AlgebraVector<Q> {
        AlgebraVector::from_i64(c)
    }

    /// 2x2 matrix oracle for sl(2): H, E, F as matrices.
    fn mat(c: &[i64]) -> [[i64; 2]; 2] {
        [[c[0], c[1]], [c[2], -c[0]]]
    }

    fn matrix_bracket(x: &[i64], y: &[i64]) -> Vec<i64> {
        let (a, b) = (mat(x), mat(y));
        let mut m = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    m[i][j] += a[i][k] * b[k][j] - b[i][k] * a[k][j];
                }
            }
        }
        vec![m[0][0], m[0][1], m[1][0]]
    }

    #[test]
    fn bracket_matches_matrix_commutator() {
        let a = sl2();
        assert_eq!(matrix_bracket(&[1, 0, 0], &[0, 1, 0]), vec![0, 2, 0]);
        assert_eq!(a.bracket(&v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap(), v(&[0, 2, 0]));
        assert_eq!(matrix_bracket(&[0, 1, 0], &[0, 0, 1]), vec![1, 0, 0]);
        assert_eq!(a.bracket(&v(&[0, 1, 0]), &v(&[0, 0, 1])).unwrap(), v(&[1, 0, 0]));
        let x = v(&[3, -1, 2]);
        assert!(a.bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn ad_powers_of_h_on_e_plus_f() {
        let a = sl2();
        let h = v(&[1, 0, 0]);
        let x = v(&[0, 1, 1]);
        assert_eq!(matrix_bracket(&[1, 0, 0], &[0, 1, 1]), vec![0, 2, -2]);
        assert_eq!(a.ad_power(&h, 1, &x).unwrap(), v(&[0, 2, -2]));
        assert_eq!(matrix_bracket(&[1, 0, 0], &[0, 2, -2]), vec![0, 4, 4]);
        assert_eq!(a.ad_power(&h, 2, &x).unwrap(), v(&[0, 4, 4]));
        assert_eq!(a.ad_power(&h, 0, &x).unwrap(), x);
    }

    #[test]
    fn killing_values() {
        let a = sl2();
        let h = v(&[1, 0, 0]);
        assert_eq!(a.killing_form(&h, &h).unwrap(), q(8));
        assert_eq!(a.killing_form(&h, &v(&[0, 1, 1])).unwrap(), q(0));
        // independent route: trace of ad_H ad_H
        let ad = a.ad_matrix(&h).unwrap();
        let sq = linalg::mat_mul(&ad, &ad);
        assert_eq!((0..3).map(|i| sq[i][i].clone()).sum::<Q>(), q(8));
    }

    #[test]
    fn cartan_split_of_e() {
        let a = sl2();
        let (k, p) = a.cartan_split(&v(&[0, 1, 0])).unwrap();
        assert_eq!(k, AlgebraVector(vec![q(0), qf(1, 2), qf(-1, 2)]));
        assert_eq!(p, AlgebraVector(vec![q(0), qf(1, 2), qf(1, 2)]));
        let (k, p) = a.cartan_split(&v(&[0, 1, -1])).unwrap();
        assert_eq!(k, v(&[0, 1, -1]));
        assert!(p.is_zero());
        let (k, p) = a.cartan_split(&AlgebraVector::<Q>::zero(3)).unwrap();
        assert!(k.is_zero() && p.is_zero());
    }

    #[test]
    fn jacobi_operator_sign() {
        let a = sl2();
        let h = v(&[1, 0, 0]);
        let x = v(&[0, 1, 1]);
        let j = a.jacobi_operator(&h, &x).unwrap();
        assert_eq!(j, v(&[0, -4, -4]));
        assert!(a.killing_form(&j, &x).unwrap() < q(0));
        assert!(a.jacobi_operator(&h, &h).unwrap().is_zero());
        let r1 = a.curvature_tensor(&h, &x, &h).unwrap();
        let r2 = a.curvature_tensor(&x, &h, &h).unwrap();
        assert_eq!(r1, -&r2);
        assert!(matches!(a.curvature_tensor(&v(&[0, 1, 0]), &h, &h), Err(Error::NotInP { .. })));
    }

    #[test]
    fn sl2_validates() {
        let r = sl2().validate();
        assert!(r.passed, "{:?}", r.failures);
        assert_eq!(r.jacobi, 0.0);
        assert_eq!((r.dim_k, r.dim_p), (1, 2));
    }

    #[test]
    fn rescaled_ef_still_satisfies_jacobi() {
        // [E, F] = 2H is just a rescaled sl(2): the only independent Jacobi
        // triple (H, E, F) gives [H,2H] + [E,2F] + [F,2E] = 0.
        let r = sl2_by_hand(vec![q(2), q(0), q(0)]).validate();
        assert_eq!(r.jacobi, 0.0);
    }

    #[test]
    fn corrupted_table_reports_jacobi_witness() {
        // [E, F] = H + E: Jacobi sum on (H, E, F) is 2E.
        let r = sl2_by_hand(vec![q(1), q(1), q(0)]).validate();
        assert!(!r.passed);
        assert_eq!(r.jacobi, 2.0);
        assert_eq!(r.jacobi_witness, Some([0, 1, 2]));
    }

    #[test]
    fn zero_algebra_is_not_semisimple() {
        let a = StructuredLieAlgebra::new("zero", vec!["Z".into()], &[], vec![vec![q(-1)]]).unwrap();
        let r = a.validate();
        assert!(!r.passed);
        assert!(!r.killing_nondegenerate);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = sl2();
        assert!(matches!(
            a.bracket(&v(&[1, 0]), &v(&[0, 1, 0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn p_coordinates_round_trip() {
        let a = sl2();
        let x = v(&[2, 3, 3]);
        let c = a.p_coordinates(&x).unwrap();
        assert_eq!(a.from_p_coordinates(&c).unwrap(), x);
        assert!(a.p_coordinates(&v(&[0, 1, 0])).is_err());
    }
}
