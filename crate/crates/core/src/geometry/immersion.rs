//! The extended immersion `f(t, y) = exp(tX) exp(Y) . o` with `Y = sum y_i s_i`,
//! and a finite-difference estimate of its mean curvature.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::dd::Dd;
use super::expm::expm;
use super::space::{SpacePoint, SymmetricSpace};
use crate::algebra::StructuredLieAlgebra;
use crate::error::{Error, Result};
use crate::scalar::Q;
use crate::subspace::{is_lie_triple_system, Subspace};

/// Regular grid over `[-radius, radius]` with `steps` nodes per axis.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Axis {
    pub radius: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(radius: f64, steps: usize) -> Self {
        Axis { radius, steps }
    }

    pub fn nodes(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![0.0];
        }
        (0..self.steps)
            .map(|i| -self.radius + 2.0 * self.radius * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct ImmersionSpec {
    pub space: SymmetricSpace,
    /// Basis of `s` in `p` coordinates.
    pub s_basis: Vec<Vec<f64>>,
    /// Normal direction in `p` coordinates.
    pub x: Vec<f64>,
    pub t_axis: Axis,
    pub y_axis: Axis,
    /// Finite-difference step.
    pub h: f64,
    /// Parameters must stay within this box, including difference stencils.
    pub domain: f64,
}

impl ImmersionSpec {
    /// Checks that `s` is a Lie triple system in `p` and `X` is B-normal to it.
    pub fn new(alg: &StructuredLieAlgebra, s: &Subspace<Q>, x: &[f64], t_axis: Axis, y_axis: Axis, h: f64) -> Result<Self> {
        let space = SymmetricSpace::new(alg)?;
        let r = is_lie_triple_system(alg, s)?;
        if let Some(w) = r.witness {
            return Err(Error::NotLieTripleSystem {
                i: w.i,
                j: w.j,
                k: w.k,
                residual: w.residual,
            });
        }
        let s_basis: Vec<Vec<f64>> = s
            .basis()
            .iter()
            .map(|b| alg.p_coordinates(&b.to_f64()))
            .collect::<Result<_>>()?;
        let x = x.to_vec();
        if x.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), got: x.len() });
        }
        let xn = space.norm_b(&x).max(1.0);
        for b in &s_basis {
            let pairing = space.inner_b(&x, b).abs();
            if pairing > 1e-10 * xn * space.norm_b(b).max(1.0) {
                return Err(Error::NotNormal { pairing });
            }
        }
        if t_axis.nodes().is_empty() || y_axis.nodes().is_empty() || !(h > 0.0) {
            return Err(Error::Config("empty grid or nonpositive step".into()));
        }
        let domain = t_axis.radius.max(y_axis.radius) + 4.0 * h + 0.25;
        Ok(ImmersionSpec {
            space,
            s_basis,
            x,
            t_axis,
            y_axis,
            h,
            domain,
        })
    }

    pub fn dim_s(&self) -> usize {
        self.s_basis.len()
    }

    /// Whether `s` has codimension at least two in `p`, the range in which
    /// the extension is a proper enlargement that can fail to be geodesic.
    pub fn codimension_at_least_two(&self) -> bool {
        self.space.dim() >= self.dim_s() + 2
    }

    pub fn with_step(&self, h: f64) -> Self {
        let mut s = self.clone();
        s.h = h;
        s
    }

    fn y_vector(&self, y: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.space.dim()];
        for (c, b) in y.iter().zip(&self.s_basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += c * bi;
            }
        }
        v
    }

    fn check_domain(&self, params: &[f64]) -> Result<()> {
        if params.iter().any(|p| p.abs() > self.domain) {
            return Err(Error::GridBoundary);
        }
        Ok(())
    }

    /// Normal coordinates of `f(t, y)`.
    pub fn chart(&self, t: f64, y: &[f64]) -> Result<Vec<f64>> {
        let tx: Vec<f64> = self.x.iter().map(|v| v * t).collect();
        let g = self.space.exp_p(&tx)? * self.space.exp_p(&self.y_vector(y))?;
        self.space.cartan_project(&g)
    }

    /// Normal coordinates of `exp(Y) . o`, the totally geodesic piece alone.
    pub fn base_chart(&self, y: &[f64]) -> Result<Vec<f64>> {
        let g = self.space.exp_p(&self.y_vector(y))?;
        self.space.cartan_project(&g)
    }

    fn y_vector_dd(&self, y: &[Dd]) -> Vec<Dd> {
        let mut v = vec![Dd::ZERO; self.space.dim()];
        for (c, b) in y.iter().zip(&self.s_basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                if *bi != 0.0 {
                    *vi = *vi + *c * Dd::new(*bi);
                }
            }
        }
        v
    }

    /// [`Self::chart`] in double-double precision.
    pub fn chart_dd(&self, t: Dd, y: &[Dd]) -> Result<Vec<Dd>> {
        let tx: Vec<Dd> = self.x.iter().map(|v| Dd::new(*v) * t).collect();
        let g = self.space.exp_p_dd(&tx)?.mul(&self.space.exp_p_dd(&self.y_vector_dd(y))?);
        self.space.cartan_project_dd(&g)
    }

    /// [`Self::base_chart`] in double-double precision.
    pub fn base_chart_dd(&self, y: &[Dd]) -> Result<Vec<Dd>> {
        let g = self.space.exp_p_dd(&self.y_vector_dd(y))?;
        self.space.cartan_project_dd(&g)
    }

    /// The point `f(t, y)`; only matrix exponential overflow limits the range.
    pub fn immersion_point(&self, t: f64, y: &[f64]) -> Result<SpacePoint> {
        self.space.point(&self.chart(t, y)?)
    }

    /// `psi_t` applied to a point: left multiplication by `exp(tX)`.
    pub fn transvect(&self, t: f64, q: &SpacePoint) -> Result<SpacePoint> {
        let tx: Vec<f64> = self.x.iter().map(|v| v * t).collect();
        let g = self.space.exp_p(&tx)? * &q.rep;
        self.space.act(&g)
    }

    /// All `(t, y)` grid nodes, `t` outermost.
    pub fn grid(&self) -> Vec<(f64, Vec<f64>)> {
        let ts = self.t_axis.nodes();
        let ys = self.y_axis.nodes();
        let k = self.dim_s();
        let mut out = Vec::new();
        for &t in &ts {
            let total = ys.len().pow(k as u32);
            for mut idx in 0..total {
                let mut y = Vec::with_capacity(k);
                for _ in 0..k {
                    y.push(ys[idx % ys.len()]);
                    idx /= ys.len();
                }
                out.push((t, y));
            }
        }
        out
    }

    /// Node count of [`Self::grid`]; saturates instead of overflowing.
    pub fn grid_size(&self) -> usize {
        self.y_axis
            .steps
            .max(1)
            .checked_pow(self.dim_s() as u32)
            .and_then(|n| n.checked_mul(self.t_axis.steps.max(1)))
            .unwrap_or(usize::MAX)
    }
}

/// Which parametrization to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Surface {
    /// `(t, y) -> f(t, y)`
    Extension,
    /// `y -> exp(Y) . o`
    Baseline,
}

/// Mean curvature vector (trace of the second fundamental form against the
/// induced metric, in `p` coordinates) and its norm in the ambient metric.
#[derive(Debug, Clone, Serialize)]
pub struct MeanCurvature {
    pub params: Vec<f64>,
    pub vector: Vec<f64>,
    pub norm: f64,
    pub induced_min_eig: f64,
}

fn christoffel(space: &SymmetricSpace, p: &[f64], h: f64) -> Result<Vec<DMatrix<f64>>> {
    let r = space.dim();
    let g = space.metric_matrix(p)?;
    let ginv = g.clone().try_inverse().ok_or(Error::IllConditioned { min_eig: 0.0 })?;
    let mut dg = Vec::with_capacity(r);
    for e in 0..r {
        let mut pp = p.to_vec();
        let mut pm = p.to_vec();
        pp[e] += h;
        pm[e] -= h;
        dg.push((space.metric_matrix(&pp)? - space.metric_matrix(&pm)?) / (2.0 * h));
    }
    // gamma[a][(b, c)] = 1/2 g^{ad} (d_b g_dc + d_c g_db - d_d g_bc)
    let mut gamma = vec![DMatrix::zeros(r, r); r];
    for b in 0..r {
        for c in 0..r {
            let lower = DVector::from_fn(r, |d, _| dg[b][(d, c)] + dg[c][(d, b)] - dg[d][(b, c)]);
            let up = &ginv * lower * 0.5;
            for a in 0..r {
                gamma[a][(b, c)] = up[a];
            }
        }
    }
    Ok(gamma)
}

/// Chart map evaluated in double-double precision.
pub type ChartDd<'a> = dyn Fn(&[Dd]) -> Result<Vec<Dd>> + Sync + 'a;

/// Mean curvature of a chart map `phi: R^m -> p` at `u` by central
/// differences. Offsets and differences are formed in double-double so that
/// only the `O(h^2)` truncation error survives the division by `h^2`.
pub fn mean_curvature_of_chart(space: &SymmetricSpace, phi: &ChartDd<'_>, u: &[f64], h: f64) -> Result<MeanCurvature> {
    let m = u.len();
    let r = space.dim();
    let at = |shifts: &[(usize, f64)]| -> Result<Vec<Dd>> {
        let mut v: Vec<Dd> = u.iter().map(|x| Dd::new(*x)).collect();
        for &(i, s) in shifts {
            v[i] = Dd::sum_exact(u[i], s);
        }
        phi(&v)
    };
    let combine = |terms: &[(&Vec<Dd>, f64)], scale: f64| -> DVector<f64> {
        DVector::from_fn(r, |a, _| {
            let s = terms.iter().fold(Dd::ZERO, |acc, (v, c)| acc + v[a] * Dd::new(*c));
            (s / Dd::new(scale)).to_f64()
        })
    };
    let p0 = at(&[])?;
    let mut tangents = Vec::with_capacity(m);
    let mut plus = Vec::with_capacity(m);
    let mut minus = Vec::with_capacity(m);
    for i in 0..m {
        let fp = at(&[(i, h)])?;
        let fm = at(&[(i, -h)])?;
        tangents.push(combine(&[(&fp, 1.0), (&fm, -1.0)], 2.0 * h));
        plus.push(fp);
        minus.push(fm);
    }
    let h2 = Dd::new(h) * Dd::new(h);
    let mut second = vec![vec![DVector::zeros(r); m]; m];
    for i in 0..m {
        second[i][i] = DVector::from_fn(r, |a, _| {
            ((plus[i][a] - p0[a].ldexp(1) + minus[i][a]) / h2).to_f64()
        });
        for j in i + 1..m {
            let pp = at(&[(i, h), (j, h)])?;
            let pm = at(&[(i, h), (j, -h)])?;
            let mp = at(&[(i, -h), (j, h)])?;
            let mm = at(&[(i, -h), (j, -h)])?;
            let d = DVector::from_fn(r, |a, _| ((pp[a] - pm[a] - mp[a] + mm[a]) / h2.ldexp(2)).to_f64());
            second[i][j] = d.clone();
            second[j][i] = d;
        }
    }
    let p0v: Vec<f64> = p0.iter().map(|x| x.to_f64()).collect();
    let g = space.metric_matrix(&p0v)?;
    let gamma = christoffel(space, &p0v, h)?;
    let tmat = DMatrix::from_fn(r, m, |a, i| tangents[i][a]);
    let induced = tmat.transpose() * &g * &tmat;
    let eig = nalgebra::SymmetricEigen::new(induced.clone()).eigenvalues;
    let min_eig = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_eig = eig.iter().cloned().fold(0.0, f64::max);
    if !(min_eig > 1e-10 * max_eig.max(1e-300)) {
        return Err(Error::IllConditioned { min_eig });
    }
    let hinv = induced.try_inverse().ok_or(Error::IllConditioned { min_eig })?;
    let mut trace = DVector::zeros(r);
    for i in 0..m {
        for j in 0..m {
            let mut acc = second[i][j].clone();
            for a in 0..r {
                acc[a] += (tangents[i].transpose() * &gamma[a] * &tangents[j])[(0, 0)];
            }
            trace += acc * hinv[(i, j)];
        }
    }
    // normal projection with respect to g
    let coeffs = &hinv * (tmat.transpose() * &g * &trace);
    let normal = &trace - &tmat * coeffs;
    let norm = (normal.transpose() * &g * &normal)[(0, 0)].max(0.0).sqrt();
    Ok(MeanCurvature {
        params: u.to_vec(),
        vector: normal.iter().cloned().collect(),
        norm,
        induced_min_eig: min_eig,
    })
}

pub fn mean_curvature_estimate(spec: &ImmersionSpec, t: f64, y: &[f64]) -> Result<MeanCurvature> {
    let mut u = vec![t];
    u.extend_from_slice(y);
    spec.check_domain(&u.iter().map(|v| v.abs() + spec.h).collect::<Vec<_>>())?;
    let phi = |v: &[Dd]| spec.chart_dd(v[0], &v[1..]);
    mean_curvature_of_chart(&spec.space, &phi, &u, spec.h)
}

pub fn baseline_mean_curvature(spec: &ImmersionSpec, y: &[f64]) -> Result<MeanCurvature> {
    spec.check_domain(&y.iter().map(|v| v.abs() + spec.h).collect::<Vec<_>>())?;
    let phi = |v: &[Dd]| spec.base_chart_dd(v);
    mean_curvature_of_chart(&spec.space, &phi, y, spec.h)
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureNode {
    pub t: f64,
    pub y: Vec<f64>,
    pub vector: Vec<f64>,
    pub norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureReport {
    pub surface: Surface,
    pub h: f64,
    pub nodes: Vec<CurvatureNode>,
    pub max_norm: f64,
    /// Max over nodes of `|H_h| - |H_{h/2}|`, an estimate of the
    /// discretization error of the reported norms.
    pub discretization_estimate: f64,
    /// Max norm with the halved step.
    pub max_norm_half_step: f64,
}

impl CurvatureReport {
    /// `max_norm / max_norm_half_step`
    pub fn halving_ratio(&self) -> f64 {
        self.max_norm / self.max_norm_half_step.max(1e-300)
    }
}

fn evaluate(spec: &ImmersionSpec, surface: Surface, t: f64, y: &[f64]) -> Result<MeanCurvature> {
    match surface {
        Surface::Extension => mean_curvature_estimate(spec, t, y),
        Surface::Baseline => baseline_mean_curvature(spec, y),
    }
}

/// Mean curvature over the grid of `spec`, at steps `h` and `h/2`.
pub fn curvature_report(spec: &ImmersionSpec, surface: Surface) -> Result<CurvatureReport> {
    let mut grid = spec.grid();
    if surface == Surface::Baseline {
        grid.retain(|(t, _)| *t == spec.t_axis.nodes()[spec.t_axis.nodes().len() / 2]);
    }
    let half = spec.with_step(spec.h / 2.0);
    let results: Vec<Result<(CurvatureNode, f64)>> = grid
        .par_iter()
        .map(|(t, y)| {
            let a = evaluate(spec, surface, *t, y)?;
            let b = evaluate(&half, surface, *t, y)?;
            Ok((
                CurvatureNode {
                    t: *t,
                    y: y.clone(),
                    vector: a.vector,
                    norm: a.norm,
                },
                b.norm,
            ))
        })
        .collect();
    let mut nodes = Vec::with_capacity(results.len());
    let mut max_norm: f64 = 0.0;
    let mut max_half: f64 = 0.0;
    let mut disc: f64 = 0.0;
    for r in results {
        let (node, hn) = r?;
        max_norm = max_norm.max(node.norm);
        max_half = max_half.max(hn);
        disc = disc.max((node.norm - hn).abs());
        nodes.push(node);
    }
    Ok(CurvatureReport {
        surface,
        h: spec.h,
        nodes,
        max_norm,
        discretization_estimate: disc,
        max_norm_half_step: max_half,
    })
}

/// `Ad(exp(-Y)) X` computed with matrices, split into its `p` part; the
/// B-pairing of that part with `s` measures normality of the transvection
/// field along `S`.
pub fn transported_normal_pairing(spec: &ImmersionSpec, y: &[f64]) -> Result<f64> {
    let space = &spec.space;
    let yv = spec.y_vector(y);
    let ym = space.p_matrix(&yv);
    let e_minus = expm(&(&ym * -1.0))?;
    let e_plus = expm(&ym)?;
    let z = e_minus * space.p_matrix(&spec.x) * e_plus;
    let sym = (&z + z.transpose()) * 0.5;
    let (zp, _) = space.p_coords_of_matrix(&sym);
    let mut worst: f64 = 0.0;
    for b in &spec.s_basis {
        worst = worst.max(space.inner_b(&zp, b).abs() / space.norm_b(b).max(1e-300));
    }
    Ok(worst)
}
