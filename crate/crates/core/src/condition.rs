//! The extension condition `[X, ad_Y^{2n+1} X] in s` for `Y in s`, the
//! algebraic lemma that upgrades it to `[ad_Y^{2n} X, ad_Y^{2m+1} X] in s`,
//! and the series for `(nabla_Z Z)_p = [Z^k, Z^p]` with `Z = e^{-ad_Y} X`.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{to_mode, AlgebraScalar, AlgebraVector, StructuredLieAlgebra};
use crate::error::{Error, Result};
use crate::sampling::{random_combination, SampleStream};
use crate::scalar::{Mode, Scalar, Q};
use crate::subspace::{float_tolerance, is_lie_triple_system, orthocomplement_in_p, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    ExactSampled,
    FloatSampled,
}

impl From<Mode> for SamplingMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => SamplingMode::ExactSampled,
            Mode::Float => SamplingMode::FloatSampled,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionWitness {
    pub sample: usize,
    /// Y as coefficients over the algebra basis.
    pub y: Vec<String>,
    pub n: usize,
    pub residual: f64,
    pub remainder: Vec<String>,
}

/// Outcome of sampling the quantifier over `Y in s` and `0 <= n <= max_power`.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionVerdict {
    pub holds: bool,
    pub mode: SamplingMode,
    pub max_power: usize,
    pub per_n_worst_residual: Vec<f64>,
    pub witness: Option<ConditionWitness>,
    pub samples: usize,
    pub seed: u64,
    /// 0 in exact mode; the relative factor of `1e-9 (1 + |v|)` in float mode.
    pub tolerance: f64,
    pub warnings: Vec<String>,
}

fn require_lts<S: AlgebraScalar>(alg: &StructuredLieAlgebra, s: &Subspace<S>) -> Result<()> {
    let r = is_lie_triple_system(alg, s)?;
    if let Some(w) = r.witness {
        return Err(Error::NotLieTripleSystem {
            i: w.i,
            j: w.j,
            k: w.k,
            residual: w.residual,
        });
    }
    Ok(())
}

fn require_p<S: AlgebraScalar>(alg: &StructuredLieAlgebra, x: &AlgebraVector<S>) -> Result<()> {
    if !alg.is_in_p(x)? {
        return Err(Error::NotInP { residual: alg.p_residual(x)? });
    }
    Ok(())
}

/// Residuals of `[X, ad_Y^{2n+1} X]` against `s` for `n = 0..=max_power`,
/// plus the first failing `n`.
pub fn condition_at<S: AlgebraScalar>(
    alg: &StructuredLieAlgebra,
    s: &Subspace<S>,
    x: &AlgebraVector<S>,
    y: &AlgebraVector<S>,
    max_power: usize,
) -> Result<(Vec<f64>, Option<(usize, f64, AlgebraVector<S>)>)> {
    let chain = alg.ad_chain(y, x, 2 * max_power + 1)?;
    let mut residuals = Vec::with_capacity(max_power + 1);
    let mut first = None;
    for n in 0..=max_power {
        let w = alg.bracket(x, &chain[2 * n + 1])?;
        let m = s.contains(&w)?;
        if !m.inside && first.is_none() {
            first = Some((n, m.residual, m.remainder.clone()));
        }
        residuals.push(m.residual);
    }
    Ok((residuals, first))
}

/// Decides the extension condition for `(s, X)` by sampling `Y in s`.
///
/// For a fixed `Y`, `ad_Y^2` preserves `p` and is annihilated by its
/// characteristic polynomial there, so powers `n <= dim p` span all higher
/// ones. The quantifier over `Y` is polynomial, hence the random sampling.
pub fn condition_holds<S: AlgebraScalar>(
    alg: &StructuredLieAlgebra,
    s: &Subspace<S>,
    x: &AlgebraVector<S>,
    samples: usize,
    seed: u64,
) -> Result<ConditionVerdict> {
    require_lts(alg, s)?;
    require_p(alg, x)?;
    let mut warnings = Vec::new();
    let scale = x.max_abs().max(1.0);
    if s.basis()
        .iter()
        .map(|b| alg.killing_form(x, b))
        .collect::<Result<Vec<S>>>()?
        .iter()
        .any(|v| !v.is_negligible(scale * scale * 1e3))
    {
        warnings.push("X has a nonzero component along s; the construction wants X normal to s".into());
    }
    let max_power = alg.dim_p();
    let stream = SampleStream::new(seed);
    let d = alg.dim();
    let per_sample: Vec<Result<(AlgebraVector<S>, Vec<f64>, Option<(usize, f64, AlgebraVector<S>)>)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.rng(i as u64);
            let y = random_combination(s.basis(), d, &mut rng);
            let (res, first) = condition_at(alg, s, x, &y, max_power)?;
            Ok((y, res, first))
        })
        .collect();
    let mut per_n_worst_residual = vec![0.0f64; max_power + 1];
    let mut witness = None;
    for (i, r) in per_sample.into_iter().enumerate() {
        let (y, res, first) = r?;
        for (w, r) in per_n_worst_residual.iter_mut().zip(&res) {
            *w = w.max(*r);
        }
        if witness.is_none() {
            if let Some((n, residual, rem)) = first {
                witness = Some(ConditionWitness {
                    sample: i,
                    y: y.to_strings(),
                    n,
                    residual,
                    remainder: rem.to_strings(),
                });
            }
        }
    }
    Ok(ConditionVerdict {
        holds: witness.is_none(),
        mode: S::MODE.into(),
        max_power,
        per_n_worst_residual,
        witness,
        samples,
        seed,
        tolerance: match S::MODE {
            Mode::Exact => 0.0,
            Mode::Float => 1e-9,
        },
        warnings,
    })
}

/// Brute-force certificate for one `Y`.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaCertificate {
    pub mode: Mode,
    pub n_max: usize,
    pub m_max: usize,
    /// `[X, ad_Y^{2m+1} X]` for `m <= n_max + m_max`.
    pub hypothesis_residuals: Vec<f64>,
    /// `[ad_Y^{2n} X, ad_Y^{2m+1} X]`, indexed `[n][m]`.
    pub conclusion_residuals: Vec<Vec<f64>>,
    /// `ad_Y [ad_Y^{2n} X, ad_Y^{2m} X]`, indexed `[n][m]`.
    pub auxiliary_residuals: Vec<Vec<f64>>,
    pub passed: bool,
}

/// Checks the lemma's conclusion for a single `Y` by brute force.
///
/// A hypothesis failure is [`Error::HypothesisViolated`]; a conclusion
/// failure with the hypothesis satisfied is [`Error::LemmaViolated`].
pub fn verify_lemma_conclusion<S: AlgebraScalar>(
    alg: &StructuredLieAlgebra,
    s: &Subspace<S>,
    x: &AlgebraVector<S>,
    y: &AlgebraVector<S>,
    n_max: usize,
    m_max: usize,
) -> Result<LemmaCertificate> {
    let top = 2 * (n_max + m_max) + 2;
    let chain = alg.ad_chain(y, x, top)?;
    let mut hypothesis_residuals = Vec::new();
    for m in 0..=(n_max + m_max) {
        let r = s.contains(&alg.bracket(x, &chain[2 * m + 1])?)?;
        if !r.inside {
            return Err(Error::HypothesisViolated { m, residual: r.residual });
        }
        hypothesis_residuals.push(r.residual);
    }
    let mut conclusion_residuals = vec![vec![0.0; m_max + 1]; n_max + 1];
    let mut auxiliary_residuals = vec![vec![0.0; m_max + 1]; n_max + 1];
    for n in 0..=n_max {
        for m in 0..=m_max {
            let c = s.contains(&alg.bracket(&chain[2 * n], &chain[2 * m + 1])?)?;
            if !c.inside {
                return Err(Error::LemmaViolated { n, m, residual: c.residual });
            }
            conclusion_residuals[n][m] = c.residual;
            let inner = alg.bracket(&chain[2 * n], &chain[2 * m])?;
            let a = s.contains(&alg.bracket(y, &inner)?)?;
            if !a.inside {
                return Err(Error::LemmaViolated { n, m, residual: a.residual });
            }
            auxiliary_residuals[n][m] = a.residual;
        }
    }
    Ok(LemmaCertificate {
        mode: S::MODE,
        n_max,
        m_max,
        hypothesis_residuals,
        conclusion_residuals,
        auxiliary_residuals,
        passed: true,
    })
}

/// Frobenius norm of `ad_Y`, an upper bound for its operator norm.
pub fn ad_norm(alg: &StructuredLieAlgebra, y: &AlgebraVector<f64>) -> Result<f64> {
    let m = alg.ad_matrix(y)?;
    Ok(m.iter().flat_map(|r| r.iter()).map(|x| x * x).sum::<f64>().sqrt())
}

fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for i in 1..=n {
        f[i] = f[i - 1] * i as f64;
    }
    f
}

/// `(nabla_Z Z)_p` evaluated two ways.
#[derive(Debug, Clone, Serialize)]
pub struct NablaZZ {
    pub truncation: usize,
    /// `[Z^k, Z^p]` from the theta-split of the truncated `e^{-ad_Y} X`.
    pub value: Vec<f64>,
    /// `-sum_{n,m<=K} [ad_Y^{2n} X, ad_Y^{2m+1} X] / ((2n)! (2m+1)!)`.
    pub double_series: Vec<f64>,
    pub z_k: Vec<f64>,
    pub z_p: Vec<f64>,
    /// `|value + double_series|`: for `X, Y in p` the even powers form
    /// `Z^p` and the odd powers `Z^k`, so the double series is `[Z^p, Z^k]`.
    pub series_gap: f64,
    /// `|ad_Y|^{2K+2} / (2K+2)! * |X|`
    pub tail_bound: f64,
    pub rounding_floor: f64,
    pub membership_residual: f64,
    pub membership_tolerance: f64,
    pub in_s: bool,
}

impl NablaZZ {
    /// Agreement of the two evaluations within `10 x` the error budget.
    pub fn series_consistent(&self) -> bool {
        self.series_gap <= 10.0 * (self.tail_bound + self.rounding_floor)
    }
}

pub fn nabla_zz(
    alg: &StructuredLieAlgebra,
    s: &Subspace<f64>,
    x: &AlgebraVector<f64>,
    y: &AlgebraVector<f64>,
    k: usize,
) -> Result<NablaZZ> {
    if k < 1 {
        return Err(Error::TruncationTooSmall { k, ratio: f64::INFINITY });
    }
    let top = 2 * k + 1;
    let chain = alg.ad_chain(y, x, top)?;
    let fact = factorials(top + 1);
    let d = alg.dim();
    let mut z = AlgebraVector::<f64>::zero(d);
    for (j, term) in chain.iter().enumerate() {
        let c = if j % 2 == 0 { 1.0 } else { -1.0 } / fact[j];
        z.axpy(&c, term);
    }
    let znorm = z.norm();
    let last = chain[top].norm() / fact[top];
    if znorm > 0.0 && last > 1e-14 * znorm {
        return Err(Error::TruncationTooSmall { k, ratio: last / znorm });
    }
    let (z_k, z_p) = alg.cartan_split(&z)?;
    let value = alg.bracket(&z_k, &z_p)?;

    let mut double = AlgebraVector::<f64>::zero(d);
    let mut magnitude = 0.0;
    for n in 0..=k {
        for m in 0..=k {
            let t = alg.bracket(&chain[2 * n], &chain[2 * m + 1])?;
            let c = -1.0 / (fact[2 * n] * fact[2 * m + 1]);
            magnitude += t.norm() * c.abs();
            double.axpy(&c, &t);
        }
    }
    let series_gap = (&value + &double).norm();
    let a = ad_norm(alg, y)?;
    let tail_bound = a.powi(2 * k as i32 + 2) / fact[top + 1] * x.norm();
    let rounding_floor = 64.0 * f64::EPSILON * (magnitude + z_k.norm() * z_p.norm() * a.max(1.0));
    let m = s.contains(&value)?;
    Ok(NablaZZ {
        truncation: k,
        value: value.0,
        double_series: double.0,
        z_k: z_k.0,
        z_p: z_p.0,
        series_gap,
        tail_bound,
        rounding_floor,
        membership_residual: m.residual,
        membership_tolerance: float_tolerance(m.remainder.norm().max(0.0) + z.norm()),
        in_s: m.inside,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalFieldReport {
    /// max over basis vectors `v` of `s` of `|B(Z^p, v)|`
    pub max_pairing: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// The p-component of `e^{-ad_Y} X` stays B-orthogonal to `s` whenever `X`
/// is and `s` is a Lie triple system; condition (1) is not needed.
pub fn normal_field_check(
    alg: &StructuredLieAlgebra,
    s: &Subspace<f64>,
    x: &AlgebraVector<f64>,
    y: &AlgebraVector<f64>,
    k: usize,
) -> Result<NormalFieldReport> {
    let xn = x.norm().max(1.0);
    let mut pre: f64 = 0.0;
    for b in s.basis() {
        pre = pre.max(alg.killing_form(x, b)?.abs() / b.norm().max(1.0));
    }
    if pre > 1e-9 * xn {
        return Err(Error::NotNormal { pairing: pre });
    }
    let top = 2 * k + 1;
    let chain = alg.ad_chain(y, x, top)?;
    let fact = factorials(top + 1);
    let mut z_p = AlgebraVector::<f64>::zero(alg.dim());
    for n in 0..=k {
        z_p.axpy(&(1.0 / fact[2 * n]), &chain[2 * n]);
    }
    let mut max_pairing: f64 = 0.0;
    let mut bscale: f64 = 0.0;
    for b in s.basis() {
        let pairing = alg.killing_form(&z_p, b)?;
        max_pairing = max_pairing.max(pairing.abs());
        bscale = bscale.max(b.norm());
    }
    let a = ad_norm(alg, y)?;
    let kn = alg.killing_matrix::<f64>().iter().flat_map(|r| r.iter()).map(|v| v * v).sum::<f64>().sqrt();
    let tail = a.powi(2 * k as i32 + 2) / fact[top + 1] * x.norm() * a.exp();
    let tolerance = kn * bscale * (tail + 64.0 * f64::EPSILON * z_p.norm().max(x.norm()) * (1.0 + a).powi(2)) + 1e-12;
    Ok(NormalFieldReport {
        max_pairing,
        tolerance,
        passed: max_pairing <= tolerance,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub candidate: usize,
    pub x: Vec<String>,
    pub verdict: ConditionVerdict,
}

/// Negative controls: every (candidate, X) pair on which the condition fails.
pub fn search_counterexample(
    alg: &StructuredLieAlgebra,
    candidates: &[Subspace<Q>],
    x_grid: &[AlgebraVector<Q>],
    samples: usize,
    seed: u64,
) -> Result<Vec<Counterexample>> {
    let mut out = Vec::new();
    for (ci, s) in candidates.iter().enumerate() {
        require_lts(alg, s)?;
        for x in x_grid {
            let verdict = condition_holds(alg, s, x, samples, seed)?;
            if !verdict.holds {
                out.push(Counterexample {
                    candidate: ci,
                    x: x.to_rational_strings(),
                    verdict,
                });
            }
        }
    }
    Ok(out)
}

/// Nonzero combinations of the normal frame `s^perp` with coefficients
/// drawn from `values`.
pub fn normal_grid(alg: &StructuredLieAlgebra, s: &Subspace<Q>, values: &[i64]) -> Result<Vec<AlgebraVector<Q>>> {
    let perp = orthocomplement_in_p(alg, s)?;
    let frame = perp.basis();
    let mut out = Vec::new();
    let total = values.len().pow(frame.len() as u32);
    for mut idx in 0..total {
        let mut v = AlgebraVector::<Q>::zero(alg.dim());
        for b in frame {
            let c = Q::from_i64(values[idx % values.len()]);
            idx /= values.len();
            v.axpy(&c, b);
        }
        if !v.is_zero() {
            out.push(v);
        }
    }
    Ok(out)
}

/// Random nonzero B-normal vectors to `s` inside `p`.
pub fn sample_normals(alg: &StructuredLieAlgebra, s: &Subspace<Q>, count: usize, seed: u64) -> Result<Vec<AlgebraVector<Q>>> {
    let perp = orthocomplement_in_p(alg, s)?;
    let stream = SampleStream::new(seed).fork(0x4e4f524d);
    let mut out = Vec::new();
    let mut i = 0u64;
    while out.len() < count && !perp.basis().is_empty() {
        let v = random_combination(perp.basis(), alg.dim(), &mut stream.rng(i));
        if !v.is_zero() {
            out.push(v);
        }
        i += 1;
    }
    Ok(out)
}

/// Float copy of an exact vector.
pub fn to_float(v: &AlgebraVector<Q>) -> AlgebraVector<f64> {
    to_mode::<f64>(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_space_str, sl_n};

    fn v(c: &[i64]) -> AlgebraVector<Q> {
        AlgebraVector::from_i64(c)
    }

    fn pow2(k: usize) -> Q {
        Q::from_integer(num::BigInt::from(2).pow(k as u32))
    }

    #[test]
    fn sl2_odd_powers_in_closed_form() {
        // ad_H^(2n+1)(E+F) = 2^(2n+1)(E-F) and [E+F, E-F] = -2H
        let a = sl_n(2).unwrap();
        let x = v(&[0, 1, 1]);
        let y = v(&[1, 0, 0]);
        let chain = a.ad_chain(&y, &x, 9).unwrap();
        for n in 0..=4 {
            let w = a.bracket(&x, &chain[2 * n + 1]).unwrap();
            let expect = AlgebraVector(vec![-pow2(2 * n + 2), Q::from_i64(0), Q::from_i64(0)]);
            assert_eq!(w, expect, "n = {n}");
        }
        let s = Subspace::new(&a, vec![y.clone()]).unwrap();
        let (res, first) = condition_at(&a, &s, &x, &y, 4).unwrap();
        assert!(first.is_none());
        assert!(res.iter().all(|r| *r == 0.0));
    }

    #[test]
    fn sl2_lemma_brackets_in_closed_form() {
        let a = sl_n(2).unwrap();
        let x = v(&[0, 1, 1]);
        let y = v(&[1, 0, 0]);
        let chain = a.ad_chain(&y, &x, 12).unwrap();
        for n in 0..=3 {
            for m in 0..=3 {
                let w = a.bracket(&chain[2 * n], &chain[2 * m + 1]).unwrap();
                let expect = AlgebraVector(vec![-pow2(2 * n + 2 * m + 2), Q::from_i64(0), Q::from_i64(0)]);
                assert_eq!(w, expect);
            }
        }
        let s = Subspace::new(&a, vec![y.clone()]).unwrap();
        let cert = verify_lemma_conclusion(&a, &s, &x, &y, 3, 3).unwrap();
        assert!(cert.passed);
    }

    #[test]
    fn condition_holds_on_sl2_and_scales() {
        let a = sl_n(2).unwrap();
        let s = Subspace::new(&a, vec![v(&[1, 0, 0])]).unwrap();
        let x = v(&[0, 1, 1]);
        let r = condition_holds(&a, &s, &x, 8, 3).unwrap();
        assert!(r.holds && r.witness.is_none());
        let scaled = x.scale(&Q::new(7.into(), 3.into()));
        assert!(condition_holds(&a, &s, &scaled, 8, 3).unwrap().holds);
        assert!(matches!(condition_holds(&a, &s, &v(&[0, 1, 0]), 8, 3), Err(Error::NotInP { .. })));
    }

    #[test]
    fn nabla_zz_matches_hyperbolic_closed_form() {
        // e^{-ad_H}(E+F) = e^{-2}E + e^2 F, whose k and p parts bracket to -sinh(4) H
        let a = sl_n(2).unwrap();
        let s = Subspace::new(&a, vec![v(&[1, 0, 0])]).unwrap().to_f64(&a);
        let x = AlgebraVector(vec![0.0, 1.0, 1.0]);
        let y = AlgebraVector(vec![1.0, 0.0, 0.0]);
        let r = nabla_zz(&a, &s, &x, &y, 30).unwrap();
        let sh = 4f64.sinh();
        assert!((r.value[0] + sh).abs() < 1e-12 * sh, "{:?}", r.value);
        assert!(r.value[1].abs() < 1e-12 && r.value[2].abs() < 1e-12);
        let c = 2f64.cosh();
        assert!((r.z_p[1] - c).abs() < 1e-12 && (r.z_p[2] - c).abs() < 1e-12);
        assert!(r.in_s && r.series_consistent());
        let zero = nabla_zz(&a, &s, &x, &AlgebraVector(vec![0.0; 3]), 5).unwrap();
        assert!(zero.value.iter().all(|c| c.abs() < 1e-15));
        assert!(matches!(nabla_zz(&a, &s, &x, &y, 2), Err(Error::TruncationTooSmall { .. })));
    }

    #[test]
    fn normal_field_stays_normal() {
        let e = build_space_str("su21").unwrap();
        let pair = e.build_pair("real-form").unwrap();
        let sf = pair.s.to_f64(&e.algebra);
        let x = to_float(&pair.normal_frame.basis()[0]);
        let y = to_float(&pair.s.basis()[1]);
        let r = normal_field_check(&e.algebra, &sf, &x, &y.scale(&0.7), 40).unwrap();
        assert!(r.passed, "{}", r.max_pairing);
    }

    #[test]
    fn counterexample_search() {
        let e = build_space_str("su21").unwrap();
        let pair = e.build_pair("real-form").unwrap();
        let grid = normal_grid(&e.algebra, &pair.s, &[-1, 0, 1]).unwrap();
        assert!(search_counterexample(&e.algebra, &[], &grid, 4, 1).unwrap().is_empty());
        assert!(search_counterexample(&e.algebra, std::slice::from_ref(&pair.s), &grid, 4, 1).unwrap().is_empty());

        let e = build_space_str("sl3r").unwrap();
        let pair = e.build_pair("symmetric-line").unwrap();
        let grid = normal_grid(&e.algebra, &pair.s, &[-1, 0, 1]).unwrap();
        let found = search_counterexample(&e.algebra, std::slice::from_ref(&pair.s), &grid, 4, 1).unwrap();
        assert!(!found.is_empty());
        let w = found[0].verdict.witness.as_ref().unwrap();
        assert!(w.residual > 0.0);
    }
}
