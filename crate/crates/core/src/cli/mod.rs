//! Command-line front end. Every run writes CSV artifacts and a
//! `manifest.txt` under `--out-dir`; `replay` re-executes a manifest.
//!
//! Exit codes: 0 on success, 2 on usage errors (including out-of-range
//! parameters), 1 on numerical failures and I/O errors.

mod manifest;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

pub use manifest::RunManifest;

use crate::error::Error;
use crate::ffpe::{solve_ffpe, summarize, uniform_grid, FfpeProblem};
use crate::output::fmt_f64;
use crate::pricing::{map_real_params, subordinated_price_mc, subordinated_price_quadrature, Contract};
use crate::quadrature::QuadConfig;
use crate::rng::par_map_paths;
use crate::specfun::{
    airy_ai, f_alpha, f_alpha_mode, gamma, inverse_subordinator_density, mittag_leffler_neg, probability_integral,
    AlphaIndex, EvalConfig,
};
use crate::subdiffusion::{density_grid, sample_subordinated_paths, ModelParams};
use crate::subordinator::{
    ctrw_counting_path, sample_inverse_paths, sample_stable_path, write_paths_csv, SamplePath, SimConfig,
};

pub const MANIFEST_FILE: &str = "manifest.txt";

#[derive(Parser, Debug)]
#[command(
    name = "subdiff",
    version,
    about = "Subordinated Black-Scholes and subdiffusion toolkit"
)]
struct Cli {
    /// Directory for CSV artifacts and the run manifest.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Price a European call on the subordinated clock.
    Price(PriceArgs),
    /// Tabulate the density of B_{S(t)} on a spatial grid.
    Density(DensityArgs),
    /// Dump sample paths.
    Simulate(SimulateArgs),
    /// Evaluate one special function.
    Special(SpecialArgs),
    /// Solve the fractional Fokker-Planck equation from a Gaussian start.
    Fpe(FpeArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Quad,
    Mc,
}

#[derive(Args, Debug)]
struct PriceArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 100.0)]
    spot: f64,
    #[arg(long, default_value_t = 100.0)]
    strike: f64,
    /// Interest rate in market units [default: 0.05].
    #[arg(long, conflicts_with_all = ["beta", "tau_dimless"])]
    rate: Option<f64>,
    /// Volatility in market units [default: 0.2].
    #[arg(long, conflicts_with_all = ["beta", "tau_dimless"])]
    sigma: Option<f64>,
    /// Maturity in market units [default: 1].
    #[arg(long, conflicts_with_all = ["beta", "tau_dimless"])]
    maturity: Option<f64>,
    /// Dimensionless rate 2 r / sigma^2.
    #[arg(long, requires = "tau_dimless")]
    beta: Option<f64>,
    /// Dimensionless clock time sigma^2 t / 2.
    #[arg(long, requires = "beta")]
    tau_dimless: Option<f64>,
    #[arg(long, value_enum, default_value_t = Method::Quad)]
    method: Method,
    #[arg(long, default_value_t = 100_000)]
    paths: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    dtau: f64,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[arg(long)]
    alpha: f64,
    /// Generalized diffusion coefficient D.
    #[arg(long, default_value_t = 1.0)]
    diffusion: f64,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, default_value_t = 201)]
    points: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Process {
    /// The subordinator T on an operational-time grid.
    Stable,
    /// The inverse subordinator S.
    Inverse,
    /// B_{S(t)}.
    Subdiffusion,
    /// Renewal counts with Pareto waiting times.
    Ctrw,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    process: Process,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    diffusion: f64,
    /// Time horizon (operational time for `stable`).
    #[arg(long, default_value_t = 1.0)]
    t_max: f64,
    /// Grid points on [0, t_max] (ignored by `stable`, which uses the dtau grid).
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[arg(long, default_value_t = 10)]
    paths: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    dtau: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Function {
    Gamma,
    Phi,
    MittagLeffler,
    FAlpha,
    FAlphaMode,
    InverseDensity,
    Airy,
}

#[derive(Args, Debug)]
struct SpecialArgs {
    #[arg(long, value_enum)]
    function: Function,
    #[arg(long)]
    alpha: Option<f64>,
    /// Argument of gamma, phi, f_alpha and airy.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<f64>,
    /// Argument of mittag_leffler (evaluated at -x) and inverse_density.
    #[arg(long)]
    x: Option<f64>,
    /// Time of inverse_density.
    #[arg(long)]
    t: Option<f64>,
}

#[derive(Args, Debug)]
struct FpeArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    diffusion: f64,
    /// Half-width of the spatial domain [-x_max, x_max].
    #[arg(long, default_value_t = 10.0)]
    x_max: f64,
    #[arg(long, default_value_t = 0.2)]
    dx: f64,
    #[arg(long, default_value_t = 1.0)]
    t_end: f64,
    /// Time step as a fraction of the largest stable step.
    #[arg(long, default_value_t = 0.9)]
    safety: f64,
    /// Operational age of the Gaussian initial profile.
    #[arg(long, default_value_t = 0.5)]
    tau0: f64,
    /// Number of output times after t = 0.
    #[arg(long, default_value_t = 5)]
    snapshots: usize,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    #[arg(long)]
    manifest: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numerical(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::Domain { .. } | Error::Pole(_) => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&matches) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Numerical(e)) => {
            eprintln!("numerical failure: {e}");
            1
        }
        Err(CliError::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            1
        }
    }
}

fn dispatch(matches: &ArgMatches) -> CliResult<()> {
    let cli = Cli::from_arg_matches(matches).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Command::Replay(r) = &cli.command {
        return replay(&r.manifest, &cli.out_dir);
    }
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let mut manifest = RunManifest {
        subcommand: name.to_string(),
        parameters: echo_parameters(name, sub),
        ..RunManifest::default()
    };
    fs::create_dir_all(&cli.out_dir).map_err(|e| io_err(&cli.out_dir, e))?;
    let out = &cli.out_dir;
    let artifacts = match &cli.command {
        Command::Price(a) => {
            manifest.seed = (a.method == Method::Mc).then_some(a.seed);
            price(a, out)?
        }
        Command::Density(a) => density(a, out)?,
        Command::Simulate(a) => {
            manifest.seed = Some(a.seed);
            simulate(a, out)?
        }
        Command::Special(a) => special(a, out)?,
        Command::Fpe(a) => fpe(a, out)?,
        Command::Replay(_) => unreachable!(),
    };
    manifest.artifact_paths = artifacts;
    let path = out.join(MANIFEST_FILE);
    fs::write(&path, manifest.render()).map_err(|e| io_err(&path, e))?;
    Ok(())
}

fn echo_parameters(name: &str, sub: &ArgMatches) -> Vec<(String, String)> {
    let cmd = Cli::command();
    let def = cmd.find_subcommand(name).expect("known subcommand");
    def.get_arguments()
        .map(|a| a.get_id())
        .filter(|id| id.as_str() != "out_dir")
        .filter_map(|id| {
            let raw = sub.get_raw(id.as_str())?;
            let value = raw
                .map(|v| v.to_string_lossy().into_owned())
                .collect::<Vec<_>>()
                .join(",");
            Some((id.as_str().replace('_', "-"), value))
        })
        .collect()
}

fn replay(manifest_path: &Path, out_dir: &Path) -> CliResult<()> {
    let m = RunManifest::read(manifest_path)?;
    if m.subcommand == "replay" {
        return Err(CliError::Usage("a manifest cannot replay a replay".into()));
    }
    let mut args: Vec<OsString> = vec!["subdiff".into()];
    args.extend(m.to_args().into_iter().map(OsString::from));
    args.push("--out-dir".into());
    args.push(out_dir.as_os_str().to_owned());
    let matches = Cli::command()
        .try_get_matches_from(args)
        .map_err(|e| CliError::Usage(format!("manifest does not parse: {e}")))?;
    dispatch(&matches)
}

fn write_artifact(out: &Path, name: &str, contents: &str) -> CliResult<String> {
    let path = out.join(name);
    fs::write(&path, contents).map_err(|e| io_err(&path, e))?;
    Ok(name.to_string())
}

fn alpha_index(alpha: f64) -> CliResult<AlphaIndex> {
    AlphaIndex::new(alpha).map_err(|e| CliError::Usage(format!("--alpha: {e}")))
}

fn price(a: &PriceArgs, out: &Path) -> CliResult<Vec<String>> {
    let alpha = alpha_index(a.alpha)?;
    let (beta, t) = match (a.beta, a.tau_dimless) {
        (Some(beta), Some(tau)) => (beta, tau),
        _ => {
            let c = map_real_params(
                a.spot,
                a.strike,
                a.rate.unwrap_or(0.05),
                a.sigma.unwrap_or(0.2),
                a.maturity.unwrap_or(1.0),
            )?;
            (c.beta, c.tau)
        }
    };
    let contract = Contract::new(a.spot, a.strike, beta)?;
    let (method, price, se) = match a.method {
        Method::Quad => {
            let quad = QuadConfig::new(a.tol, 1e-10, 4000)?;
            (
                "quad",
                subordinated_price_quadrature(alpha, t, &contract, &quad)?,
                String::new(),
            )
        }
        Method::Mc => {
            let cfg = SimConfig {
                seed: a.seed,
                n_paths: a.paths,
                dtau: a.dtau,
                t_max: t.max(f64::MIN_POSITIVE),
            };
            let est = subordinated_price_mc(alpha, t, &contract, &cfg)?;
            ("mc", est.mean, fmt_f64(est.std_error))
        }
    };
    let row = format!(
        "{},{},{},{},{},{method},{},{se}\n",
        fmt_f64(a.alpha),
        fmt_f64(t),
        fmt_f64(a.spot),
        fmt_f64(a.strike),
        fmt_f64(beta),
        fmt_f64(price)
    );
    let csv = format!("alpha,t,spot,strike,beta,method,price,std_error\n{row}");
    print!("{csv}");
    Ok(vec![write_artifact(out, "price.csv", &csv)?])
}

fn density(a: &DensityArgs, out: &Path) -> CliResult<Vec<String>> {
    let params = ModelParams {
        alpha: alpha_index(a.alpha)?,
        d: a.diffusion,
    };
    if a.points < 2 || !(a.x_max > a.x_min) {
        return Err(CliError::Usage("--points must be >= 2 and --x-max > --x-min".into()));
    }
    let xs = uniform_grid(a.x_min, a.x_max, a.points - 1);
    let quad = QuadConfig::new(a.tol, 1e-11, 4000)?;
    let grid = density_grid(&params, a.t, &xs, &quad)?;
    let mut csv = String::from("x,p\n");
    for (x, p) in grid.x_grid.iter().zip(&grid.values) {
        writeln!(csv, "{},{}", fmt_f64(*x), fmt_f64(*p)).unwrap();
    }
    println!("trapezoidal mass on grid: {}", fmt_f64(grid.mass()));
    Ok(vec![write_artifact(out, "density.csv", &csv)?])
}

fn simulate(a: &SimulateArgs, out: &Path) -> CliResult<Vec<String>> {
    let alpha = alpha_index(a.alpha)?;
    if a.points < 1 {
        return Err(CliError::Usage("--points must be >= 1".into()));
    }
    let cfg = SimConfig {
        seed: a.seed,
        n_paths: a.paths,
        dtau: a.dtau,
        t_max: a.t_max,
    };
    cfg.validate()?;
    let grid = if a.points == 1 {
        vec![a.t_max]
    } else {
        uniform_grid(0.0, a.t_max, a.points - 1)
    };
    let paths: Vec<SamplePath> = match a.process {
        Process::Stable => par_map_paths(cfg.seed, cfg.n_paths, |_, rng| {
            sample_stable_path(alpha, a.t_max, a.dtau, rng)
        })?,
        Process::Inverse => sample_inverse_paths(alpha, &grid, &cfg)?,
        Process::Subdiffusion => {
            let params = ModelParams { alpha, d: a.diffusion };
            sample_subordinated_paths(&params, &grid, &cfg)?
        }
        Process::Ctrw => par_map_paths(cfg.seed, cfg.n_paths, |_, rng| ctrw_counting_path(alpha, &grid, rng))?,
    };
    let mut buf = Vec::new();
    write_paths_csv(&mut buf, &paths).map_err(|e| CliError::Io(e.to_string()))?;
    let csv = String::from_utf8(buf).expect("csv is ascii");
    Ok(vec![write_artifact(out, "paths.csv", &csv)?])
}

fn required(v: Option<f64>, flag: &str, function: &str) -> CliResult<f64> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for --function {function}")))
}

fn special(a: &SpecialArgs, out: &Path) -> CliResult<Vec<String>> {
    let name = a.function.to_possible_value().expect("named").get_name().to_string();
    let cfg = EvalConfig::default();
    let alpha = || -> CliResult<AlphaIndex> { alpha_index(required(a.alpha, "alpha", &name)?) };
    let value = match a.function {
        Function::Gamma => gamma(required(a.z, "z", &name)?)?,
        Function::Phi => probability_integral(required(a.z, "z", &name)?),
        Function::MittagLeffler => mittag_leffler_neg(alpha()?, required(a.x, "x", &name)?)?,
        Function::FAlpha => f_alpha(alpha()?, required(a.z, "z", &name)?, &cfg)?,
        Function::FAlphaMode => f_alpha_mode(alpha()?)?.unwrap_or(0.0),
        Function::InverseDensity => {
            inverse_subordinator_density(alpha()?, required(a.t, "t", &name)?, required(a.x, "x", &name)?)?
        }
        Function::Airy => airy_ai(required(a.z, "z", &name)?)?,
    };
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let csv = format!(
        "function,alpha,t,x,z,value\n{name},{},{},{},{},{}\n",
        opt(a.alpha),
        opt(a.t),
        opt(a.x),
        opt(a.z),
        fmt_f64(value)
    );
    print!("{csv}");
    Ok(vec![write_artifact(out, "special.csv", &csv)?])
}

fn fpe(a: &FpeArgs, out: &Path) -> CliResult<Vec<String>> {
    let params = ModelParams {
        alpha: alpha_index(a.alpha)?,
        d: a.diffusion,
    };
    params.validate()?;
    if !(a.dx > 0.0 && a.x_max > a.dx && a.t_end > 0.0 && a.safety > 0.0 && a.safety <= 1.0) {
        return Err(CliError::Usage(
            "need --dx > 0, --x-max > --dx, --t-end > 0 and 0 < --safety <= 1".into(),
        ));
    }
    if a.snapshots == 0 {
        return Err(CliError::Usage("--snapshots must be >= 1".into()));
    }
    let nx = (2.0 * a.x_max / a.dx).round() as usize;
    let xs = uniform_grid(-a.x_max, a.x_max, nx);
    let probe = FfpeProblem::gaussian_start(params, xs.clone(), vec![0.0, a.t_end], a.tau0)?;
    let dt_max = probe.admissible_dt()?;
    let nt = ((a.t_end / (a.safety * dt_max)).ceil() as usize).max(a.snapshots);
    let problem = FfpeProblem::gaussian_start(params, xs, uniform_grid(0.0, a.t_end, nt), a.tau0)?;
    let sol = solve_ffpe(&problem)?;

    let mut indices: Vec<usize> = (1..=a.snapshots).map(|k| k * nt / a.snapshots).collect();
    indices.dedup();
    let quad = QuadConfig::new(1e-13, 1e-10, 4000)?;
    let rows = summarize(&problem, &sol, &indices, a.tau0, &quad)?;

    let mut long = String::from("t,x,p\n");
    for &n in std::iter::once(&0).chain(&indices) {
        let t = fmt_f64(sol.t_grid[n]);
        for (x, p) in sol.x_grid.iter().zip(&sol.values[n]) {
            writeln!(long, "{t},{},{}", fmt_f64(*x), fmt_f64(*p)).unwrap();
        }
    }
    let mut summary = String::from("t,mass_error,min_value,oracle_max_error\n");
    for r in &rows {
        writeln!(
            summary,
            "{},{},{},{}",
            fmt_f64(r.t),
            fmt_f64(r.mass_error),
            fmt_f64(r.min_value),
            fmt_f64(r.oracle_max_error)
        )
        .unwrap();
    }
    print!("{summary}");
    Ok(vec![
        write_artifact(out, "fpe.csv", &long)?,
        write_artifact(out, "fpe_summary.csv", &summary)?,
    ])
}
