use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use sqstates::figures::{self, FigureRun};
use sqstates::fock::{build_su11_generators, Basis};
use sqstates::genscheme::{self, SchemeConfig};
use sqstates::moments::{uncertainty_matrix, UncertaintyJson};
use sqstates::su11::{self, BuildOptions, Method, Su11Params};
use sqstates::verify::{self, Suite};
use sqstates::Error;

const USAGE: u8 = 1;
const FAILURE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "sqstates", version, about = "su(1,1) squeezed and intelligent states: figures, states, checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// p and K~2 variances of the even family |1, sqrt(1+x^2), -x, 0; +>
    Fig1a(FigArgs),
    /// q and K~1 variances of the squeezed even cat with zeta = 0.31, z = -d
    Fig1b(FigArgs),
    /// photon number distribution of |-0.5-5i, sqrt(1.25), -0.5; +>
    Fig2a(FigArgs),
    /// photon number distribution of |1, sqrt(10), -3; +>
    Fig2b(FigArgs),
    /// Build one state from a JSON parameter file and report on it
    State(StateArgs),
    /// Run an invariant suite; exit status 0 only if every check passes
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
    /// Map a generation-scheme configuration to state parameters, or simulate it
    Scheme(SchemeArgs),
}

#[derive(Args, Debug)]
struct Tolerances {
    /// Tail-mass tolerance for declaring a state converged
    #[arg(long, default_value_t = 1e-12)]
    tail_tol: f64,
    /// Tolerance on the weight leaking past the cutoff
    #[arg(long, default_value_t = 1e-10)]
    leak_tol: f64,
    /// Largest cutoff the automatic doubling may reach
    #[arg(long)]
    max_cutoff: Option<usize>,
}

#[derive(Args, Debug)]
struct FigArgs {
    /// CSV output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary path (printed when absent)
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Sweep step; unused by the photon-number figures
    #[arg(long)]
    step: Option<f64>,
    /// Starting Fock cutoff
    #[arg(long, env = "SQSTATES_CUTOFF", default_value_t = 512)]
    cutoff: usize,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Args, Debug)]
struct StateArgs {
    /// JSON file with z, u, v, w (each [re, im]) and k
    #[arg(long)]
    params: PathBuf,
    /// Starting ladder cutoff
    #[arg(long, env = "SQSTATES_CUTOFF", default_value_t = 256)]
    cutoff: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Eigenresiduals,
    Robertson,
    Closedforms,
    Canonical,
    Scheme,
    Figures,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Eigenresiduals => Suite::EigenResiduals,
            SuiteArg::Robertson => Suite::Robertson,
            SuiteArg::Closedforms => Suite::ClosedForms,
            SuiteArg::Canonical => Suite::Canonical,
            SuiteArg::Scheme => Suite::Scheme,
            SuiteArg::Figures => Suite::Figures,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeMode {
    Map,
    Simulate,
}

#[derive(Args, Debug)]
struct SchemeArgs {
    /// JSON SchemeConfig: chi, gamma1, n, optional alpha and gamma2
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    mode: SchemeMode,
    /// Optional parameter file of the state the mapping should reproduce
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Fock cutoff of mode a (simulate)
    #[arg(long)]
    cutoff_a: Option<usize>,
    /// Fock cutoff of mode b (simulate)
    #[arg(long)]
    cutoff_b: Option<usize>,
    /// Two-mode squeeze parameter |g2 t2|/2 (simulate)
    #[arg(long, default_value_t = 0.5)]
    squeeze: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure carried to the exit code: usage problems and domain failures.
enum Failure {
    Usage(String),
    Domain(Error),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn error_json(e: &Error) -> serde_json::Value {
    let kind = match e {
        Error::NotNormalizable { .. } => "not_normalizable",
        Error::NonConvergent { .. } => "non_convergent",
        Error::InvalidChi(_) => "invalid_chi",
        Error::InvalidK(_) => "invalid_k",
        Error::ZeroU => "zero_u",
        _ => "invalid",
    };
    let mut v = json!({ "error": kind, "message": e.to_string() });
    match e {
        Error::NotNormalizable { margin } => v["margin"] = json!(margin),
        Error::NonConvergent { tail_mass, cutoff } => {
            v["tail_mass"] = json!(tail_mass);
            v["cutoff"] = json!(cutoff);
        }
        Error::InvalidChi(c) => v["abs_chi"] = json!(c),
        _ => {}
    }
    v
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

fn options(cutoff: usize, tol: &Tolerances, default_max: usize) -> Result<BuildOptions, Failure> {
    if cutoff == 0 {
        return Err(Failure::Usage("--cutoff must be positive".into()));
    }
    if !(tol.tail_tol > 0.0) || !(tol.leak_tol > 0.0) {
        return Err(Failure::Usage("tolerances must be positive".into()));
    }
    Ok(BuildOptions {
        cutoff,
        max_cutoff: tol.max_cutoff.unwrap_or(default_max).max(cutoff),
        tail_tol: tol.tail_tol,
        leak_tol: tol.leak_tol,
    })
}

fn run_figure(which: &str, a: &FigArgs) -> Result<(), Failure> {
    let opts = options(a.cutoff, &a.tol, figures::FIGURE_MAX_CUTOFF)?;
    if let Some(s) = a.step {
        if !(s > 0.0) {
            return Err(Failure::Usage("--step must be positive".into()));
        }
    }
    let run: FigureRun = match which {
        "fig1a" => figures::fig1a(a.step.unwrap_or(0.05), &opts)?,
        "fig1b" => figures::fig1b(a.step.unwrap_or(0.01), &opts)?,
        "fig2a" => figures::fig2a(&opts)?,
        _ => figures::fig2b(&opts)?,
    };
    write_text(a.out.as_deref(), &run.table.to_csv())?;
    for e in &run.table.errors {
        eprintln!("row {} ({} = {}): {}", e.index, run.table.columns[0], e.parameter, e.message);
    }
    let summary = to_pretty(&json!({ "figure": which, "summary": run.summary, "row_errors": run.table.errors }));
    match (&a.summary, &a.out) {
        (Some(p), _) => write_text(Some(p), &summary),
        // CSV went to stdout; keep the summary off it
        (None, None) => {
            eprint!("{summary}");
            Ok(())
        }
        (None, Some(_)) => write_text(None, &summary),
    }
}

#[derive(Serialize)]
struct StateReport {
    params: Su11Params,
    method: Method,
    cutoff: usize,
    tail_mass: f64,
    leak: f64,
    eigen_residual: f64,
    mean_k3: f64,
    /// 2<K3> - 1/2 for the one-mode realizations k = 1/4, 3/4
    mean_photon_number: Option<f64>,
    normalizability_margin: f64,
    uncertainty_k1_k2_k3: UncertaintyJson,
    robertson_slack: f64,
    relative_saturation: f64,
    amplitudes: sqstates::fock::StateRecord,
}

fn run_state(a: &StateArgs) -> Result<(), Failure> {
    let opts = options(a.cutoff, &a.tol, BuildOptions::default().max_cutoff)?;
    let p: Su11Params = read_json(&a.params)?;
    p.validate()?;
    let built = su11::construct(&p, &opts)?;
    let basis = match built.state.basis() {
        Basis::Ladder(b) => *b,
        _ => unreachable!("ladder construction"),
    };
    let g = build_su11_generators(&basis);
    let residual = built.state.eigen_residual(&g.combination(p.u, p.v, p.w), p.z)?;
    let k3 = built.state.expectation(&g.k3)?.re;
    let report = uncertainty_matrix(&built.state, &[&g.k1, &g.k2, &g.k3])?;
    let one_mode = (p.k - 0.25).abs() < 1e-12 || (p.k - 0.75).abs() < 1e-12;
    let out = StateReport {
        params: p,
        method: built.method,
        cutoff: basis.cutoff(),
        tail_mass: built.state.tail_mass(),
        leak: built.leak,
        eigen_residual: residual,
        mean_k3: k3,
        mean_photon_number: one_mode.then_some(2.0 * k3 - 0.5),
        normalizability_margin: su11::is_normalizable(&p).margin,
        uncertainty_k1_k2_k3: report.to_json(),
        robertson_slack: report.robertson_slack(),
        relative_saturation: report.relative_saturation(),
        amplitudes: built.state.to_record(),
    };
    write_text(a.out.as_deref(), &to_pretty(&out))
}

fn run_verify(suite: Suite) -> Result<(), Failure> {
    let r = verify::run_suite(suite);
    for c in &r.checks {
        eprintln!("{c}");
    }
    write_text(None, &to_pretty(&r))?;
    if r.passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn run_scheme(a: &SchemeArgs) -> Result<(), Failure> {
    let cfg: SchemeConfig = read_json(&a.config)?;
    cfg.validate()?;
    let targets = genscheme::scheme_targets(&cfg)?;
    let report = match a.mode {
        SchemeMode::Map => {
            let overlap = match &a.reference {
                Some(path) => {
                    let r: Su11Params = read_json(path)?;
                    let m = verify::scheme_mapping("reference", &cfg, &r)?;
                    json!({ "overlap": m.overlap, "error": m.error })
                }
                None => serde_json::Value::Null,
            };
            json!({ "mode": "map", "targets": targets, "reference": overlap })
        }
        SchemeMode::Simulate => {
            let (ca, cb) = match (a.cutoff_a, a.cutoff_b) {
                (Some(x), Some(y)) if x > 0 && y > 0 => (x, y),
                _ => return Err(Failure::Usage("simulate mode needs --cutoff-a and --cutoff-b".into())),
            };
            let phys = genscheme::physical_for_chi(cfg.chi, a.squeeze)?;
            let out = genscheme::simulate_scheme(&cfg, &phys, ca, cb)?;
            let v = genscheme::verify_scheme_output(&out.state, targets.lambda, targets.z, cfg.parity())?;
            json!({
                "mode": "simulate",
                "success_probability": out.probability,
                "fitted_z": v.fitted_z,
                "fitted_eigenvalue": v.fitted_eigenvalue,
                "expected_eigenvalue": targets.eigenvalue,
                "residual": v.residual,
                "a_variance": v.a_variance,
                "relative_z_error": v.relative_z_error,
                "fidelity": v.fidelity,
                "tail_a": out.tail_a,
                "tail_b": out.tail_b,
                "alpha": out.alpha,
                "gamma2": out.gamma2,
                "physical": { "g1t1": phys.g1t1, "g2t2": phys.g2t2 },
            })
        }
    };
    write_text(a.out.as_deref(), &to_pretty(&report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Fig1a(a) => run_figure("fig1a", a),
        Command::Fig1b(a) => run_figure("fig1b", a),
        Command::Fig2a(a) => run_figure("fig2a", a),
        Command::Fig2b(a) => run_figure("fig2b", a),
        Command::State(a) => run_state(a),
        Command::Verify { suite } => run_verify((*suite).into()),
        Command::Scheme(a) => run_scheme(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Domain(e)) => {
            println!("{}", error_json(&e));
            ExitCode::from(FAILURE)
        }
        Err(Failure::Checks) => ExitCode::from(FAILURE),
    }
}
