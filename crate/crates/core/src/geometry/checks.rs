//! Sampled metric checks: geodesic speed, chart round trips, transvection
//! isometry, and the distance law `d(S, psi_t(S)) = |t| |X|_B`.

use rand::Rng;
use serde::Serialize;

use super::immersion::ImmersionSpec;
use super::space::{InvariantReport, SpacePoint, SymmetricSpace};
use crate::error::Result;
use crate::sampling::SampleStream;

fn random_p(space: &SymmetricSpace, rng: &mut impl Rng) -> Vec<f64> {
    (0..space.dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

fn unit_b(space: &SymmetricSpace, v: Vec<f64>) -> Vec<f64> {
    let n = space.norm_b(&v);
    v.into_iter().map(|x| x / n).collect()
}

fn scaled(v: &[f64], s: f64) -> Vec<f64> {
    v.iter().map(|x| x * s).collect()
}

/// `d(o, exp(s v) . o) = |s|` for unit `v` and `|s| <= 4`.
pub fn geodesic_speed(space: &SymmetricSpace, samples: usize, seed: u64) -> Result<InvariantReport> {
    let stream = SampleStream::new(seed).fork(1);
    let o = space.origin();
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let mut rng = stream.rng(i as u64);
        let v = unit_b(space, random_p(space, &mut rng));
        let s: f64 = rng.gen_range(-4.0..=4.0);
        let q = space.point(&scaled(&v, s))?;
        worst = worst.max((space.distance(&o, &q)? - s.abs()).abs());
    }
    Ok(InvariantReport::new("geodesic-speed", worst, 1e-10, samples))
}

/// `cartan_project(exp(P)) = P` for `|P|_B <= 4`.
pub fn chart_round_trip(space: &SymmetricSpace, samples: usize, seed: u64) -> Result<InvariantReport> {
    let stream = SampleStream::new(seed).fork(2);
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let mut rng = stream.rng(i as u64);
        let v = unit_b(space, random_p(space, &mut rng));
        let p = scaled(&v, rng.gen_range(0.0..=4.0));
        let back = space.cartan_project(&space.exp_p(&p)?)?;
        let err: Vec<f64> = back.iter().zip(&p).map(|(a, b)| a - b).collect();
        worst = worst.max(space.norm_b(&err));
    }
    Ok(InvariantReport::new("chart-round-trip", worst, 1e-12, samples))
}

/// `cartan_project(exp(P) k) = P` for `k = exp(K)`, `K` in `k`.
pub fn isotropy_invariance(space: &SymmetricSpace, samples: usize, seed: u64) -> Result<InvariantReport> {
    let stream = SampleStream::new(seed).fork(3);
    let alg = space.algebra();
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let mut rng = stream.rng(i as u64);
        let p = random_p(space, &mut rng);
        let mut kv = crate::algebra::AlgebraVector::<f64>::zero(alg.dim());
        for b in alg.k_basis() {
            kv.axpy(&rng.gen_range(-1.0..=1.0), &b.to_f64());
        }
        let k = super::expm::expm(&space.algebra_matrix(&kv))?;
        let back = space.cartan_project(&(space.exp_p(&p)? * k))?;
        let err: Vec<f64> = back.iter().zip(&p).map(|(a, b)| a - b).collect();
        worst = worst.max(space.norm_b(&err));
    }
    Ok(InvariantReport::new("isotropy-invariance", worst, 1e-11, samples))
}

/// `d(psi_t q1, psi_t q2) = d(q1, q2)`.
pub fn transvection_isometry(spec: &ImmersionSpec, samples: usize, seed: u64) -> Result<InvariantReport> {
    let space = &spec.space;
    let stream = SampleStream::new(seed).fork(4);
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let mut rng = stream.rng(i as u64);
        let q1 = space.point(&random_p(space, &mut rng))?;
        let q2 = space.point(&random_p(space, &mut rng))?;
        let t: f64 = rng.gen_range(-1.0..=1.0);
        let d0 = space.distance(&q1, &q2)?;
        let d1 = space.distance(&spec.transvect(t, &q1)?, &spec.transvect(t, &q2)?)?;
        worst = worst.max((d0 - d1).abs());
    }
    Ok(InvariantReport::new("transvection-isometry", worst, 1e-9, samples))
}

/// `s -> d(exp(s v) . o, exp(s w) . o)` is nondecreasing on `s >= 0`.
pub fn spreading_monotonicity(space: &SymmetricSpace, samples: usize, seed: u64) -> Result<InvariantReport> {
    let stream = SampleStream::new(seed).fork(5);
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let mut rng = stream.rng(i as u64);
        let v = random_p(space, &mut rng);
        let w = random_p(space, &mut rng);
        let mut prev = 0.0;
        for k in 0..=12 {
            let s = k as f64 * 0.25;
            let d = space.distance(&space.point(&scaled(&v, s))?, &space.point(&scaled(&w, s))?)?;
            worst = worst.max(prev - d);
            prev = d;
        }
    }
    Ok(InvariantReport::new("spreading-monotonicity", worst.max(0.0), 1e-9, samples))
}

/// Distance from `q` to the totally geodesic `S = exp(s) . o`, minimized
/// over `s` coordinates by pattern search from `start`; the squared distance
/// is convex along `S`, so the local minimum is global.
pub fn distance_to_s(spec: &ImmersionSpec, q: &SpacePoint, start: &[f64]) -> Result<(f64, Vec<f64>)> {
    let k = spec.dim_s();
    let space = &spec.space;
    let eval = |y: &[f64]| -> Result<f64> {
        let p = spec.base_chart(y)?;
        space.distance(q, &space.point(&p)?)
    };
    let mut best = start.to_vec();
    let mut best_d = eval(&best)?;
    if k == 0 {
        return Ok((best_d, best));
    }
    let mut step = 0.25;
    while step > 1e-10 {
        let mut improved = false;
        for i in 0..k {
            for dir in [1.0, -1.0] {
                let mut y = best.clone();
                y[i] += dir * step;
                let d = eval(&y)?;
                if d < best_d {
                    best_d = d;
                    best = y;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((best_d, best))
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceLawEntry {
    pub t: f64,
    pub expected: f64,
    /// (i) `|d(o, gamma(t)) - |t| |X|_B|`
    pub geodesic_error: f64,
    /// (ii) `min over y of d(psi_t(exp(Y) o), S) - |t| |X|_B`, should be `>= -slack`
    pub min_excess: f64,
    /// (ii) at `y = 0` the bound is attained: `|d(gamma(t), S) - |t| |X|_B|`
    pub foot_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceLawReport {
    pub x_norm_b: f64,
    pub entries: Vec<DistanceLawEntry>,
    pub geodesic_tolerance: f64,
    pub slack: f64,
    /// (iii) worst violation of monotonicity of `t -> d(o, psi_t(q))` away from `t = 0`
    pub minimum_violation: f64,
    pub geodesic_ok: bool,
    pub lower_bound_ok: bool,
    pub minimum_at_zero_ok: bool,
    pub passed: bool,
}

/// The three sampled consequences of `d(S, psi_t(S)) = |t| |X|_B`.
pub fn distance_law_check(spec: &ImmersionSpec, ts: &[f64], ys: &[Vec<f64>], slack: f64) -> Result<DistanceLawReport> {
    let space = &spec.space;
    let o = space.origin();
    let xn = space.norm_b(&spec.x);
    let geodesic_tolerance = 1e-9;
    let zero_y = vec![0.0; spec.dim_s()];
    let mut entries = Vec::new();
    for &t in ts {
        let expected = t.abs() * xn;
        let gamma = spec.immersion_point(t, &zero_y)?;
        let geodesic_error = (space.distance(&o, &gamma)? - expected).abs();
        let mut min_excess = f64::INFINITY;
        for y in ys {
            let q = spec.immersion_point(t, y)?;
            let (d, _) = distance_to_s(spec, &q, y)?;
            min_excess = min_excess.min(d - expected);
        }
        let (dg, _) = distance_to_s(spec, &gamma, &zero_y)?;
        entries.push(DistanceLawEntry {
            t,
            expected,
            geodesic_error,
            min_excess,
            foot_error: (dg - expected).abs(),
        });
    }
    let mut sorted: Vec<f64> = ts.to_vec();
    sorted.push(0.0);
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut minimum_violation: f64 = 0.0;
    for y in ys {
        let q = spec.space.point(&spec.base_chart(y)?)?;
        let mut ds = Vec::new();
        for &t in &sorted {
            ds.push(space.distance(&o, &spec.transvect(t, &q)?)?);
        }
        let zero = sorted.iter().position(|t| *t == 0.0).unwrap_or(0);
        for i in 0..ds.len() {
            if i < zero {
                minimum_violation = minimum_violation.max(ds[i + 1] - ds[i]);
            } else if i > zero {
                minimum_violation = minimum_violation.max(ds[i - 1] - ds[i]);
            }
        }
    }
    let geodesic_ok = entries.iter().all(|e| e.geodesic_error <= geodesic_tolerance);
    let lower_bound_ok = entries.iter().all(|e| e.min_excess >= -slack && e.foot_error <= slack);
    let minimum_at_zero_ok = minimum_violation <= 1e-12;
    Ok(DistanceLawReport {
        x_norm_b: xn,
        entries,
        geodesic_tolerance,
        slack,
        minimum_violation,
        geodesic_ok,
        lower_bound_ok,
        minimum_at_zero_ok,
        passed: geodesic_ok && lower_bound_ok && minimum_at_zero_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_space_str;
    use crate::geometry::immersion::Axis;

    #[test]
    fn invariants_on_catalog_spaces() {
        for id in ["sl2r", "su21", "so31", "sl3r"] {
            let e = build_space_str(id).unwrap();
            let sp = SymmetricSpace::new(&e.algebra).unwrap();
            for r in [
                geodesic_speed(&sp, 6, 11).unwrap(),
                chart_round_trip(&sp, 6, 11).unwrap(),
                isotropy_invariance(&sp, 6, 11).unwrap(),
                spreading_monotonicity(&sp, 3, 11).unwrap(),
            ] {
                assert!(r.passed, "{id} {}: {}", r.name, r.max_error);
            }
        }
    }

    #[test]
    fn distance_law_on_real_form() {
        let e = build_space_str("su21").unwrap();
        let pair = e.build_pair("real-form").unwrap();
        let x = e.algebra.p_coordinates(&pair.normal_frame.basis()[0].to_f64()).unwrap();
        let spec = ImmersionSpec::new(&e.algebra, &pair.s, &x, Axis::new(0.5, 3), Axis::new(0.5, 3), 1e-3).unwrap();
        let xn = spec.space.norm_b(&x);
        // psi_t(o) lies at distance |t| |X| from S, attained at o itself
        let q = spec.transvect(0.5, &spec.space.origin()).unwrap();
        let (d, foot) = distance_to_s(&spec, &q, &[0.2, -0.1]).unwrap();
        assert!((d - 0.5 * xn).abs() < 1e-7, "{d}");
        assert!(foot.iter().all(|c| c.abs() < 1e-5), "{foot:?}");
        let r = distance_law_check(&spec, &[-0.5, 0.25], &[vec![0.0, 0.0], vec![0.3, -0.2]], 1e-3).unwrap();
        assert!(r.passed);
        assert!(transvection_isometry(&spec, 4, 2).unwrap().passed);
    }
}
