//! Acceptance run: one PASS/FAIL line per criterion, tolerances and time
//! limits pinned below. Exits nonzero when any criterion fails.

use std::time::{Duration, Instant};

use serde_json::Value;

use transvector::catalog::{bisector_equidistance_check, build_space_str, sl_n};
use transvector::condition::{condition_holds, nabla_zz, sample_normals, to_float, verify_lemma_conclusion};
use transvector::geometry::checks::{distance_law_check, geodesic_speed, transvection_isometry};
use transvector::geometry::immersion::{Axis, ImmersionSpec};
use transvector::report::{run, y_grid, Command, ReportEnvelope, RunConfig};
use transvector::roots::{
    abelian_grid, build_root_space_example, check_root_eigen_relation, maximal_abelian, restricted_root_decomposition,
    verify_commutation_rules,
};
use transvector::sampling::{random_combination, random_float_combination, SampleStream};
use transvector::subspace::Subspace;
use transvector::{AlgebraVector, Error, Q};

const SEED: u64 = 7;
const ALGEBRAS: [&str; 4] = ["su21", "su31", "so31", "sl3r"];
const REFLECTIVE: [(&str, &str); 4] = [
    ("su21", "real-form"),
    ("su21", "complex-hyperplane"),
    ("su31", "real-form"),
    ("su31", "complex-hyperplane"),
];

const CONDITION_SAMPLES: usize = 64;
const CONDITION_NORMALS: usize = 5;
const LEMMA_ORDER: usize = 4;
const LEMMA_SAMPLES: usize = 8;
const SERIES_K: usize = 12;
const SERIES_DRAWS: usize = 100;
const SERIES_FACTOR: f64 = 10.0;
const SINH_TOL: f64 = 1e-12;
const TOL_H: f64 = 1e-4;
const TOL_BASELINE: f64 = 1e-5;
const HALVING: f64 = 2.0;
const CONTROL_MIN: f64 = 1e-2;
const TOL_BISECTOR: f64 = 1e-8;
const BISECTOR_CONTROL_MIN: f64 = 1e-2;
const DISTANCE_SLACK: f64 = 1e-3;
const INVARIANT_TOL: f64 = 1e-9;

struct Outcome {
    passed: bool,
    detail: String,
}

type Runs = Vec<(String, RunConfig, ReportEnvelope)>;

fn ok(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn report(cfg: RunConfig, runs: &mut Runs) -> ReportEnvelope {
    let (env, _) = run(&cfg);
    let label = format!(
        "{} {} {}",
        cfg.command.name(),
        match &cfg.source {
            Some(transvector::report::AlgebraSource::Catalog(id)) => id.clone(),
            _ => String::new(),
        },
        cfg.pair.clone().unwrap_or_default()
    );
    runs.push((label, cfg, env.clone()));
    env
}

fn check<'a>(env: &'a ReportEnvelope, name: &str) -> Option<&'a Value> {
    env.checks.iter().find(|c| c.name == name).map(|c| &c.details)
}

fn passed(env: &ReportEnvelope, name: &str) -> bool {
    env.checks.iter().any(|c| c.name == name && c.passed)
}

fn c1_algebras() -> Result<Outcome, Error> {
    let mut worst = Duration::ZERO;
    let mut bad = Vec::new();
    for id in ALGEBRAS {
        let e = build_space_str(id)?;
        let start = Instant::now();
        let r = e.algebra.validate();
        let dt = start.elapsed();
        worst = worst.max(dt);
        let zero = [
            r.antisymmetry,
            r.jacobi,
            r.theta_involution,
            r.theta_automorphism,
            r.killing_symmetry,
            r.killing_theta_invariance,
            r.cartan_closure,
        ]
        .iter()
        .all(|v| *v == 0.0);
        if !(r.passed && zero && dt < Duration::from_secs(1)) {
            bad.push(id);
        }
    }
    Ok(ok(bad.is_empty(), format!("exact residuals 0, slowest {worst:.2?} (< 1 s); failing {bad:?}")))
}

fn c2_condition() -> Result<Outcome, Error> {
    let start = Instant::now();
    let mut cases = 0;
    let mut bad = Vec::new();
    for (id, name) in REFLECTIVE {
        let e = build_space_str(id)?;
        let pair = e.build_pair(name)?;
        for x in sample_normals(&e.algebra, &pair.s, CONDITION_NORMALS, SEED)? {
            let v = condition_holds(&e.algebra, &pair.s, &x, CONDITION_SAMPLES, SEED)?;
            cases += 1;
            if !v.holds || v.per_n_worst_residual.iter().any(|r| *r != 0.0) {
                bad.push(format!("{id}/{name}"));
            }
        }
    }
    let dt = start.elapsed();
    let pass = bad.is_empty() && cases == REFLECTIVE.len() * CONDITION_NORMALS && dt < Duration::from_secs(30);
    Ok(ok(
        pass,
        format!("{cases} (pair, X) cases x {CONDITION_SAMPLES} Y, zero residuals, {dt:.2?} (< 30 s); failing {bad:?}"),
    ))
}

fn c3_lemma() -> Result<Outcome, Error> {
    let mut certified = 0;
    let mut bad = Vec::new();
    for (id, name) in REFLECTIVE {
        let e = build_space_str(id)?;
        let pair = e.build_pair(name)?;
        let stream = SampleStream::new(SEED).fork(3);
        for (i, x) in sample_normals(&e.algebra, &pair.s, CONDITION_NORMALS, SEED)?.iter().enumerate() {
            for j in 0..LEMMA_SAMPLES {
                let y = random_combination(pair.s.basis(), e.algebra.dim(), &mut stream.rng((i * LEMMA_SAMPLES + j) as u64));
                match verify_lemma_conclusion(&e.algebra, &pair.s, x, &y, LEMMA_ORDER, LEMMA_ORDER) {
                    Ok(c) if c.passed => certified += 1,
                    Ok(_) => bad.push(format!("{id}/{name}")),
                    Err(err) => bad.push(format!("{id}/{name}: {err}")),
                }
            }
        }
    }
    let sl2 = sl_n(2)?;
    let h = AlgebraVector::<Q>::from_i64(&[1, 0, 0]);
    let s = Subspace::new(&sl2, vec![h.clone()])?;
    match verify_lemma_conclusion(&sl2, &s, &AlgebraVector::from_i64(&[0, 1, 1]), &h, LEMMA_ORDER, LEMMA_ORDER) {
        Ok(c) if c.passed => certified += 1,
        other => bad.push(format!("sl2r worked example: {:?}", other.err())),
    }
    Ok(ok(bad.is_empty(), format!("{certified} certificates at n, m <= {LEMMA_ORDER}; failing {bad:?}")))
}

fn c4_series() -> Result<Outcome, Error> {
    let stream = SampleStream::new(SEED).fork(4);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let mut setups = Vec::new();
    for (id, name) in REFLECTIVE {
        let e = build_space_str(id)?;
        let pair = e.build_pair(name)?;
        let x = to_float(&sample_normals(&e.algebra, &pair.s, 1, SEED)?[0]);
        setups.push((e, pair, x));
    }
    for draw in 0..SERIES_DRAWS {
        let (e, pair, x) = &setups[draw % setups.len()];
        let basis: Vec<AlgebraVector<f64>> = pair.s.basis().iter().map(to_float).collect();
        let y = random_float_combination(&basis, e.algebra.dim(), 1.0, &mut stream.rng(draw as u64));
        let nz = nabla_zz(&e.algebra, &pair.s.to_f64(&e.algebra), x, &y, SERIES_K)?;
        let budget = nz.tail_bound + nz.rounding_floor;
        worst = worst.max(nz.series_gap / budget.max(1e-300));
        if nz.series_gap > SERIES_FACTOR * budget {
            failures += 1;
        }
    }
    let sl2 = sl_n(2)?;
    let s = Subspace::<Q>::new(&sl2, vec![AlgebraVector::from_i64(&[1, 0, 0])])?.to_f64(&sl2);
    let nz = nabla_zz(&sl2, &s, &AlgebraVector(vec![0.0, 1.0, 1.0]), &AlgebraVector(vec![1.0, 0.0, 0.0]), 30)?;
    let target = -(4f64.sinh());
    let closed = (nz.value[0] - target).abs().max(nz.value[1].abs()).max(nz.value[2].abs());
    Ok(ok(
        failures == 0 && closed <= SINH_TOL,
        format!(
            "{SERIES_DRAWS} draws at K = {SERIES_K}, worst gap {worst:.3} x budget (<= {SERIES_FACTOR}); sl2 closed form error {closed:.1e} (<= {SINH_TOL:.0e})"
        ),
    ))
}

fn construct_cfg(space: &str, pair: &str) -> RunConfig {
    let mut c = RunConfig::new(Command::Construct).with_space(space).with_pair(pair);
    c.seed = SEED;
    c.grid.t_steps = 5;
    c.grid.y_steps = 5;
    c.h = 1e-3;
    c.tolerances.mean_curvature = TOL_H;
    c.tolerances.baseline = TOL_BASELINE;
    c
}

fn num(v: Option<&Value>, key: &str) -> f64 {
    v.and_then(|d| d.get(key)).and_then(Value::as_f64).unwrap_or(f64::NAN)
}

fn c5_minimality(runs: &mut Runs) -> Result<Outcome, Error> {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    for pair in ["real-form", "complex-hyperplane"] {
        let env = report(construct_cfg("su21", pair), runs);
        let ext = check(&env, "extension-mean-curvature");
        let base = num(check(&env, "baseline-mean-curvature"), "max_norm");
        let (max, ratio, nodes) = (num(ext, "max_norm"), num(ext, "halving_ratio"), num(ext, "nodes"));
        pass &= env.error.is_none()
            && nodes == 125.0
            && max <= TOL_H
            && passed(&env, "extension-halving")
            && base <= TOL_BASELINE;
        lines.push(format!("{pair} max {max:.2e} ratio {ratio:.2} baseline {base:.1e}"));
    }
    let mut control = construct_cfg("sl3r", "symmetric-line");
    control.x = Some("bad".into());
    let env = report(control, runs);
    let max = num(check(&env, "extension-mean-curvature"), "max_norm");
    pass &= max >= CONTROL_MIN;
    lines.push(format!("control sl3r/symmetric-line max {max:.2e} (>= {CONTROL_MIN:.0e})"));
    let dt = start.elapsed();
    pass &= dt < Duration::from_secs(120);
    Ok(ok(
        pass,
        format!(
            "5x5x5, h = 1e-3, tol {TOL_H:.0e}, halving >= {HALVING}, baseline {TOL_BASELINE:.0e}; {}; {dt:.1?} (< 2 min)",
            lines.join("; ")
        ),
    ))
}

fn bisector_cfg(pair: &str) -> RunConfig {
    let mut c = RunConfig::new(Command::Bisector).with_space("su21").with_pair(pair);
    c.seed = SEED;
    c.grid.t_steps = 7;
    c.grid.y_steps = 7;
    c.tolerances.bisector = TOL_BISECTOR;
    c
}

fn c6_bisector(runs: &mut Runs) -> Result<Outcome, Error> {
    let e = build_space_str("su21")?;
    let t = Axis::new(0.5, 7);
    let y = Axis::new(0.5, 7);
    let hyper = e.build_pair("complex-hyperplane")?;
    let xh = e.algebra.p_coordinates(&to_float(&hyper.normal_frame.basis()[0]))?;
    let a = bisector_equidistance_check(&e, &hyper, &xh, 0.5, t, y, TOL_BISECTOR)?;
    let real = e.build_pair("real-form")?;
    let xr = e.algebra.p_coordinates(&to_float(&real.normal_frame.basis()[0]))?;
    let b = bisector_equidistance_check(&e, &real, &xr, 0.5, t, y, TOL_BISECTOR)?;
    // the command is rerun for determinism
    let env = report(bisector_cfg("complex-hyperplane"), runs);
    let pass = a.nodes == 343 && a.max_delta <= TOL_BISECTOR && b.max_delta >= BISECTOR_CONTROL_MIN && env.error.is_none();
    Ok(ok(
        pass,
        format!(
            "7x7x7, complex-hyperplane max delta {:.1e} (<= {TOL_BISECTOR:.0e}), real-form max delta {:.2e} (>= {BISECTOR_CONTROL_MIN:.0e})",
            a.max_delta, b.max_delta
        ),
    ))
}

fn c7_distance(runs: &mut Runs) -> Result<Outcome, Error> {
    let e = build_space_str("su21")?;
    let ts = [-1.0, -0.5, -0.25, 0.25, 0.5, 1.0];
    let mut lines = Vec::new();
    let mut pass = true;
    for name in ["real-form", "complex-hyperplane"] {
        let pair = e.build_pair(name)?;
        let x = e.algebra.p_coordinates(&to_float(&pair.normal_frame.basis()[0]))?;
        let spec = ImmersionSpec::new(&e.algebra, &pair.s, &x, Axis::new(0.5, 5), Axis::new(0.5, 5), 1e-3)?;
        let law = distance_law_check(&spec, &ts, &y_grid(spec.dim_s(), 0.5, 3), DISTANCE_SLACK)?;
        let speed = geodesic_speed(&spec.space, 32, SEED)?;
        let iso = transvection_isometry(&spec, 32, SEED)?;
        pass &= law.passed && speed.max_error <= INVARIANT_TOL && iso.max_error <= INVARIANT_TOL;
        lines.push(format!("{name} law {} speed {:.1e} isometry {:.1e}", law.passed, speed.max_error, iso.max_error));
        let mut cfg = RunConfig::new(Command::Verify).with_space("su21").with_pair(name);
        cfg.seed = SEED;
        let env = report(cfg, runs);
        pass &= env.error.is_none() && env.summary.failed == 0;
    }
    Ok(ok(
        pass,
        format!("t in {{+-0.25, +-0.5, +-1}}, slack {DISTANCE_SLACK:.0e}, invariants {INVARIANT_TOL:.0e}; {}", lines.join("; ")),
    ))
}

fn c8_roots(runs: &mut Runs) -> Result<Outcome, Error> {
    let start = Instant::now();
    let mut pass = true;
    let mut lines = Vec::new();
    for (id, expect) in [("su21", vec![2usize, 1]), ("sl3r", vec![1, 1, 1])] {
        let e = build_space_str(id)?;
        let alg = &e.algebra;
        let a = maximal_abelian(alg)?;
        let rd = restricted_root_decomposition(alg, &a, SEED)?;
        let dims: Vec<usize> = rd.positive.iter().map(|r| r.p.dim()).collect();
        let mut shape = dims == expect;
        if id == "su21" {
            let l = &rd.positive[0].functional[0];
            shape &= rd.positive[1].functional[0] == l * Q::from_integer(2.into());
        }
        let rules = verify_commutation_rules(alg, &rd)?;
        let eigen = check_root_eigen_relation(alg, &rd)?;
        let mut examples = 0;
        let mut certified = true;
        for x in abelian_grid(alg, &rd.a, &[-1, 1, 2]) {
            for root in 0..rd.positive.len() {
                certified &= build_root_space_example(alg, &rd, root, &x, 16, SEED)?.certified;
                examples += 1;
            }
        }
        pass &= shape && rules.passed && rules.max_residual == 0.0 && eigen && certified;
        lines.push(format!("{id} dims {dims:?} rules {} examples {examples} certified {certified}", rules.passed));
        let mut cfg = RunConfig::new(Command::Roots).with_space(id);
        cfg.seed = SEED;
        report(cfg, runs);
    }
    let dt = start.elapsed();
    pass &= dt < Duration::from_secs(10);
    Ok(ok(pass, format!("{}; {dt:.2?} (< 10 s)", lines.join("; "))))
}

fn c9_determinism(runs: &mut Runs) -> Result<Outcome, Error> {
    for (id, pair) in REFLECTIVE {
        for command in [Command::Check, Command::Lemma] {
            let mut cfg = RunConfig::new(command).with_space(id).with_pair(pair);
            cfg.seed = SEED;
            report(cfg, runs);
        }
    }
    report(RunConfig::new(Command::Catalog), runs);
    let mut differing = Vec::new();
    for (label, cfg, env) in runs.iter() {
        let (again, _) = run(cfg);
        if env.deterministic_json()? != again.deterministic_json()? {
            differing.push(label.clone());
        }
    }
    Ok(ok(
        differing.is_empty(),
        format!("{} command reruns byte-identical excluding wall time; differing {differing:?}", runs.len()),
    ))
}

fn main() {
    let mut runs: Runs = Vec::new();
    let mut all = true;
    let mut line = |n: usize, name: &str, r: Result<Outcome, Error>| {
        let o = r.unwrap_or_else(|e| ok(false, format!("error: {e}")));
        all &= o.passed;
        println!("{} {n} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    };
    line(1, "algebra certificates", c1_algebras());
    line(2, "reflective implies condition", c2_condition());
    line(3, "lemma certification", c3_lemma());
    line(4, "series identity", c4_series());
    line(5, "minimality", c5_minimality(&mut runs));
    line(6, "bisector", c6_bisector(&mut runs));
    line(7, "distance law", c7_distance(&mut runs));
    line(8, "restricted roots", c8_roots(&mut runs));
    line(9, "determinism", c9_determinism(&mut runs));
    if !all {
        std::process::exit(1);
    }
}
