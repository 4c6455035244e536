use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use transvector::export::Format;
use transvector::report::{run, AlgebraSource, Command, RunConfig};

#[derive(Parser)]
#[command(name = "transvector", version, about = "Extension condition, transvection immersions, and their checks")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Decide the extension condition for (s, X)
    Check(Common),
    /// Certify the bracket lemma by brute force
    Lemma(Common),
    /// Restricted roots, commutation rules, root-space examples
    Roots(Common),
    /// Build the extended immersion and measure its mean curvature
    Construct(Common),
    /// Condition, series identity, normality, distance law, invariants
    Verify(Common),
    /// Bisector equidistance and the real-form control
    Bisector(Common),
    /// List or validate catalog entries
    Catalog(Common),
}

#[derive(Args)]
struct Common {
    /// Catalog id: su{n}1, so{n}1, sl{n}r
    #[arg(long)]
    space: Option<String>,
    /// Algebra definition file
    #[arg(long, conflicts_with = "space")]
    algebra: Option<PathBuf>,
    #[arg(long)]
    pair: Option<String>,
    /// JSON subspace file
    #[arg(long = "s")]
    s_file: Option<PathBuf>,
    /// Normal X as rational p coordinates "a,b,..", or "bad"
    #[arg(long = "X", visible_alias = "x", allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    normals: Option<usize>,
    #[arg(long)]
    t_radius: Option<f64>,
    #[arg(long)]
    t_steps: Option<usize>,
    #[arg(long)]
    y_radius: Option<f64>,
    #[arg(long)]
    y_steps: Option<usize>,
    /// Series truncation K
    #[arg(long = "K", visible_alias = "truncation")]
    truncation: Option<usize>,
    /// Finite-difference step
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    m_max: Option<usize>,
    /// Bisector focal distance
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    tol_mean_curvature: Option<f64>,
    #[arg(long)]
    tol_baseline: Option<f64>,
    #[arg(long)]
    tol_bisector: Option<f64>,
    #[arg(long)]
    distance_slack: Option<f64>,
    /// Report path; stdout when absent
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Point cloud path (construct)
    #[arg(long)]
    export: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    list: bool,
}

fn config(command: Command, a: Common) -> Result<RunConfig, String> {
    let mut c = RunConfig::new(command);
    c.source = match (a.space, a.algebra) {
        (Some(id), _) => Some(AlgebraSource::Catalog(id)),
        (None, Some(p)) => Some(AlgebraSource::File(p)),
        (None, None) => None,
    };
    c.pair = a.pair;
    c.s_file = a.s_file;
    c.x = a.x;
    macro_rules! set {
        ($($field:expr => $value:expr),* $(,)?) => { $(if let Some(v) = $value { $field = v; })* };
    }
    set! {
        c.seed => a.seed,
        c.samples => a.samples,
        c.normals => a.normals,
        c.grid.t_radius => a.t_radius,
        c.grid.t_steps => a.t_steps,
        c.grid.y_radius => a.y_radius,
        c.grid.y_steps => a.y_steps,
        c.truncation => a.truncation,
        c.h => a.h,
        c.n_max => a.n_max,
        c.m_max => a.m_max,
        c.r => a.r,
        c.tolerances.mean_curvature => a.tol_mean_curvature,
        c.tolerances.baseline => a.tol_baseline,
        c.tolerances.bisector => a.tol_bisector,
        c.tolerances.distance_slack => a.distance_slack,
    }
    c.output = a.out;
    c.export = a.export;
    c.export_format = a.format.parse::<Format>().map_err(|e| e.to_string())?;
    c.list = a.list;
    Ok(c)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = std::env::var("TRANSVECTOR_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let (command, args) = match cli.command {
        Sub::Check(a) => (Command::Check, a),
        Sub::Lemma(a) => (Command::Lemma, a),
        Sub::Roots(a) => (Command::Roots, a),
        Sub::Construct(a) => (Command::Construct, a),
        Sub::Verify(a) => (Command::Verify, a),
        Sub::Bisector(a) => (Command::Bisector, a),
        Sub::Catalog(a) => (Command::Catalog, a),
    };
    let cfg = match config(command, args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let (env, status) = run(&cfg);
    if cfg.output.is_none() {
        match env.to_json() {
            Ok(bytes) => {
                let _ = std::io::stdout().write_all(&bytes);
            }
            Err(e) => eprintln!("error: {e}"),
        }
    }
    if let Some(err) = &env.error {
        eprintln!("error: {err}");
    }
    eprintln!(
        "{}: {}/{} checks passed, status {status}",
        env.command, env.summary.passed, env.summary.total
    );
    ExitCode::from(status as u8)
}
