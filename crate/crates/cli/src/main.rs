use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dirbandit::config::{ArmSpec, ConfigError, InstanceConfig};
use dirbandit::index::{
    break_even_observation, break_even_value, index_sweep, ArmFamily, Direction, IndexError,
    IndexOptions, IndexResult,
};
use dirbandit::scalar::format_sig;
use dirbandit::verify::{
    render_table, reports_to_json, run_suite, SuiteConfig, SuiteName, SuiteParams, SuiteReport,
    VerifyError,
};
use dirbandit::{policy_tree, value, Arithmetic, Exact, Scalar, SolveError, SolverOptions};

const MEMO_CAP_ENV: &str = "BANDIT_MEMO_CAP";

#[derive(Parser)]
#[command(
    name = "dirbandit",
    version,
    about = "Finite-horizon Dirichlet bandit solver"
)]
struct Cli {
    /// Worker threads for parallel evaluation.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal value of a two-armed instance.
    Value {
        config: PathBuf,
        /// Rational arithmetic.
        #[arg(long)]
        exact: bool,
        /// Print the optimal policy to this depth.
        #[arg(long, value_name = "DEPTH")]
        policy: Option<usize>,
    },
    /// Break-even value of arm 1 against a known arm.
    Lambda {
        config: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Break-even observation of arm 1.
    Breakeven {
        config: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run a randomized property suite, or `all`.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per suite (defaults differ by suite).
        #[arg(long)]
        trials: Option<usize>,
        /// Write a JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        exact: bool,
    },
    /// Break-even value along a one-parameter family of arm 1 (CSV).
    Sweep {
        config: PathBuf,
        #[arg(long, value_enum)]
        param: Param,
        /// Comma-separated parameter values.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    Mass,
    Spread,
    Shift,
}

/// Exit status with a diagnostic for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::new(2, format!("config error: {e}"))
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        Failure::new(3, format!("solver error: {e}"))
    }
}

impl From<IndexError> for Failure {
    fn from(e: IndexError) -> Self {
        let code = match e {
            IndexError::NotRegular => 4,
            IndexError::Solve(_) => 3,
            IndexError::ResidualExceeded { .. } | IndexError::BracketNotFound => 1,
            _ => 5,
        };
        Failure::new(code, format!("index error: {e}"))
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        let code = match e {
            VerifyError::Solve { .. } => 3,
            VerifyError::InvalidParameter(_) => 2,
            _ => 1,
        };
        Failure::new(code, format!("verify error: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

fn load(path: &Path) -> Result<InstanceConfig, Failure> {
    let src = fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    InstanceConfig::from_toml_str(&src)
        .map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn solver_options(cfg: &InstanceConfig) -> Result<SolverOptions, Failure> {
    let mut opts = cfg.solver_options();
    if let Ok(raw) = std::env::var(MEMO_CAP_ENV) {
        opts.memo_cap = raw
            .trim()
            .parse()
            .map_err(|_| Failure::new(2, format!("{MEMO_CAP_ENV}: not a count: {raw:?}")))?;
    }
    Ok(opts)
}

fn write_out(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

/// Fixed-point with `decimals` places.
fn fixed(x: f64, decimals: usize) -> String {
    format!("{x:.decimals$}")
}

fn show<S: Scalar>(x: &S) -> String {
    if S::EXACT {
        x.to_string()
    } else {
        fixed(x.to_f64(), 10)
    }
}

fn run_value<S: Scalar>(
    cfg: &InstanceConfig,
    opts: &SolverOptions,
    policy: Option<usize>,
) -> CmdResult {
    let state = cfg.state::<S>()?;
    let report = value(&state, opts)?;
    println!("W={}", show(&report.w));
    println!("W1={}", show(&report.w1));
    println!("W2={}", show(&report.w2));
    println!("action={}", report.action);
    if let Some(depth) = policy {
        let tree = policy_tree(&state, depth, opts).map_err(|e| match e {
            SolveError::DepthExceedsHorizon { .. } => Failure::new(2, format!("--policy: {e}")),
            other => Failure::from(other),
        })?;
        print!("{}", tree.render());
    }
    Ok(())
}

fn cmd_value(config: &Path, exact: bool, policy: Option<usize>) -> CmdResult {
    let cfg = load(config)?;
    let mut opts = solver_options(&cfg)?;
    if exact {
        opts.mode = Arithmetic::Exact;
    }
    match opts.mode {
        Arithmetic::Float => run_value::<f64>(&cfg, &opts, policy),
        Arithmetic::Exact => run_value::<Exact>(&cfg, &opts, policy),
    }
}

/// Arm 1 and the index options of a one-armed config.
fn one_armed(config: &Path, tol: Option<f64>) -> Result<(InstanceConfig, IndexOptions), Failure> {
    let cfg = load(config)?;
    if matches!(cfg.arm2, Some(ArmSpec::Atoms(_))) {
        return Err(Failure::new(
            5,
            "arm2 must be `{ known = λ }` or absent for an index",
        ));
    }
    let mut opts = IndexOptions {
        solver: solver_options(&cfg)?,
        ..IndexOptions::default()
    };
    if let Some(t) = tol {
        opts.tol = t;
    }
    Ok((cfg, opts))
}

/// Decimal places that resolve `tol`.
fn places(tol: f64) -> usize {
    (-tol.log10()).ceil().clamp(1.0, 16.0) as usize
}

fn print_index(name: &str, r: &IndexResult, tol: f64) {
    let p = places(tol);
    println!("{name}={}", fixed(r.value, p));
    println!(
        "bracket=[{}, {}]",
        format_sig(r.bracket.0, 10),
        format_sig(r.bracket.1, 10)
    );
    println!("iterations={}", r.iterations);
    println!("residual={}", format_sig(r.residual, 10));
    if r.nonmonotone {
        eprintln!("warning: bracketing probes were not monotone; reporting the lowest crossing");
    }
}

fn cmd_lambda(config: &Path, tol: Option<f64>) -> CmdResult {
    let (cfg, opts) = one_armed(config, tol)?;
    let r = break_even_value(&cfg.arm1::<f64>()?, &cfg.discount::<f64>()?, &opts)?;
    print_index("lambda", &r, opts.tol);
    Ok(())
}

fn cmd_breakeven(config: &Path, tol: Option<f64>) -> CmdResult {
    let (cfg, opts) = one_armed(config, tol)?;
    let r = break_even_observation(&cfg.arm1::<f64>()?, &cfg.discount::<f64>()?, &opts)?;
    print_index("b", &r, opts.tol);
    Ok(())
}

fn cmd_verify(
    suite: &str,
    seed: u64,
    trials: Option<usize>,
    out: Option<&Path>,
    exact: bool,
) -> CmdResult {
    let names: Vec<SuiteName> = if suite == "all" {
        SuiteName::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(|e: String| Failure::new(2, e))?]
    };
    let params = SuiteParams::default();
    let mut reports: Vec<SuiteReport> = Vec::with_capacity(names.len());
    for name in &names {
        let mut cfg = SuiteConfig::new(seed, trials.unwrap_or(name.default_trials()));
        if exact {
            cfg = cfg.exact();
        }
        let report = run_suite(*name, &cfg, &params)?;
        eprintln!("{}: {:.2}s", report.suite, report.elapsed.as_secs_f64());
        reports.push(report);
    }
    print!("{}", render_table(&reports));
    if let Some(path) = out {
        let json = if reports.len() == 1 {
            reports[0].to_json()
        } else {
            reports_to_json(&reports)
        };
        write_out(path, &(json + "\n"))?;
    }
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::new(1, "property violations found"))
    }
}

fn parse_grid(grid: &str) -> Result<Vec<f64>, Failure> {
    let values = grid
        .split(',')
        .map(|t| {
            f64::parse_number(t.trim())
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Failure::new(2, format!("--grid: bad value {:?}", t.trim())))
        })
        .collect::<Result<Vec<f64>, Failure>>()?;
    if values.is_empty() {
        return Err(Failure::new(2, "--grid is empty"));
    }
    Ok(values)
}

fn cmd_sweep(
    config: &Path,
    param: Param,
    grid: &str,
    out: Option<&Path>,
    tol: Option<f64>,
) -> CmdResult {
    let grid = parse_grid(grid)?;
    let (cfg, opts) = one_armed(config, tol)?;
    let arm = cfg.arm1::<f64>()?;
    let family = match param {
        Param::Mass => ArmFamily::Mass(arm.predictive()),
        Param::Spread => ArmFamily::Spread(arm),
        Param::Shift => ArmFamily::Shift(arm),
    };
    if let Param::Mass | Param::Spread = param {
        if let Some(x) = grid.iter().find(|x| match param {
            Param::Mass => **x <= 0.0,
            _ => **x < 0.0,
        }) {
            return Err(Failure::new(
                2,
                format!("--grid: {x} is out of range for this family"),
            ));
        }
    }
    let table = index_sweep(&family, &cfg.discount::<f64>()?, &grid, &opts)?;
    let expected = match table.direction {
        Direction::Nondecreasing => "nondecreasing",
        Direction::Nonincreasing => "nonincreasing",
    };
    for k in &table.flags {
        eprintln!(
            "flag: lambda is not {expected} between param {} and {}",
            format_sig(table.rows[*k].param, 10),
            format_sig(table.rows[*k + 1].param, 10)
        );
    }
    let csv = table.to_csv();
    match out {
        Some(path) => write_out(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

#[cfg(feature = "parallel")]
fn set_jobs(jobs: usize) -> CmdResult {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| Failure::new(2, format!("--jobs: {e}")))
}

#[cfg(not(feature = "parallel"))]
fn set_jobs(_jobs: usize) -> CmdResult {
    eprintln!("note: built without the `parallel` feature; --jobs is ignored");
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::new(2, "--jobs must be at least 1"));
        }
        set_jobs(jobs)?;
    }
    match cli.command {
        Command::Value {
            config,
            exact,
            policy,
        } => cmd_value(&config, exact, policy),
        Command::Lambda { config, tol } => cmd_lambda(&config, tol),
        Command::Breakeven { config, tol } => cmd_breakeven(&config, tol),
        Command::Verify {
            suite,
            seed,
            trials,
            out,
            exact,
        } => cmd_verify(&suite, seed, trials, out.as_deref(), exact),
        Command::Sweep {
            config,
            param,
            grid,
            out,
            tol,
        } => cmd_sweep(&config, param, &grid, out.as_deref(), tol),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
