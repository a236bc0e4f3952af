//! `fraclab` — ground states, symmetry breaking, and inequality surveys for
//! the weighted fractional-order equation, from the command line.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 strict-admissibility
//! failure, 3 solver convergence failure.

use clap::{Parser, Subcommand};
use fraclab::config::RunConfig;
use fraclab::experiments;
use fraclab::grid::GridEnergy;
use fraclab::io;
use fraclab::params::{exponents, validate};
use fraclab::quadrature::default_radius_grid;
use fraclab::radial::gaussian_profile;
use fraclab::solver::{self, RadialGridSpec};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

/// Default configuration compiled into the binary; the same file ships in
/// the repository as `crates/fraclab-cli/default.cfg`.
const DEFAULT_CONFIG: &str = include_str!("../default.cfg");

#[derive(Parser)]
#[command(name = "fraclab", version, about = "Ground states and symmetry breaking for a weighted nonlocal equation")]
struct Cli {
    /// Configuration file (key = value lines, or a run manifest).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (falls back to $FRACLAB_OUT, then ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the configured random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap worker parallelism (1 = reproducibility mode).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Exit with status 2 when any admissibility check fails.
    #[arg(long, global = true)]
    strict: bool,
    /// Override a configuration key, e.g. --set s=0.8 (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the derived exponents and the admissibility report.
    Exponents,
    /// Radial ground state m(R) on the ball.
    SolveRadial,
    /// Unrestricted ground state M(R) on the ball.
    SolveFull,
    /// Radial whole-space ground state on the truncated domain [0, L].
    SolveRn,
    /// m(R) vs M(R) across the configured radius list.
    Sweep,
    /// Translated-bump decay of the unrestricted whole-space quotient.
    Bump,
    /// Cut-off convergence in the energy norm.
    Cutoff,
    /// Radial decay inequality survey (empirical constants).
    Strauss,
    /// Weighted interpolation inequality survey.
    Gn,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are normal exits.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };

    let overrides: Vec<(String, String)> = match cli
        .set
        .iter()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| format!("--set {kv}: expected KEY=VALUE"))
        })
        .collect()
    {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("fraclab: {msg}");
            return ExitCode::from(1);
        }
    };
    let mut config = match load_config(cli.config.as_deref(), &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("fraclab: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(seed) = cli.seed {
        config.solver.seed = seed;
    }
    if let Some(threads) = cli.threads {
        config.threads = threads;
    }

    let report = validate(&config.params);
    if cli.strict && !report.passed() {
        eprintln!("fraclab: admissibility failure under --strict\n{}", report.to_table());
        return ExitCode::from(2);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.max(1))
        .build()
        .expect("thread pool");

    let out_dir = resolve_out_dir(cli.out);
    let outcome = pool.install(|| run(&cli.command, &config, &out_dir));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Convergence(msg)) => {
            eprintln!("fraclab: convergence failure: {msg}");
            ExitCode::from(3)
        }
        Err(RunError::Other(e)) => {
            eprintln!("fraclab: {e}");
            ExitCode::from(1)
        }
    }
}

enum RunError {
    Convergence(String),
    Other(fraclab::Error),
}

impl From<fraclab::Error> for RunError {
    fn from(e: fraclab::Error) -> Self {
        match e {
            fraclab::Error::Convergence(msg) => RunError::Convergence(msg),
            other => RunError::Other(other),
        }
    }
}

fn load_config(path: Option<&Path>, overrides: &[(String, String)]) -> fraclab::Result<RunConfig> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| fraclab::Error::Config(format!("cannot read {}: {e}", p.display())))?,
        None => DEFAULT_CONFIG.to_string(),
    };
    RunConfig::parse_str_with_overrides(&text, overrides)
}

fn resolve_out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("FRACLAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn run(command: &Command, config: &RunConfig, out_dir: &Path) -> Result<(), RunError> {
    match command {
        Command::Exponents => cmd_exponents(config),
        Command::SolveRadial => cmd_solve_ball(config, out_dir, false),
        Command::SolveFull => cmd_solve_ball(config, out_dir, true),
        Command::SolveRn => cmd_solve_rn(config, out_dir),
        Command::Sweep => cmd_sweep(config, out_dir),
        Command::Bump => cmd_bump(config, out_dir),
        Command::Cutoff => cmd_cutoff(config, out_dir),
        Command::Strauss => cmd_survey(config, out_dir, true),
        Command::Gn => cmd_survey(config, out_dir, false),
    }
}

fn prepare(out_dir: &Path, experiment: &str, config: &RunConfig) -> Result<(PathBuf, u64), RunError> {
    std::fs::create_dir_all(out_dir).map_err(|e| RunError::Other(e.into()))?;
    let stamp = timestamp();
    let manifest = out_dir.join(format!("{experiment}_{stamp}_manifest.json"));
    io::write_manifest(&manifest, experiment, config, stamp)?;
    Ok((out_dir.to_path_buf(), stamp))
}

fn cmd_exponents(config: &RunConfig) -> Result<(), RunError> {
    let exps = exponents(&config.params)?;
    println!("theta   = {}", exps.theta);
    println!("sigma   = {}", exps.sigma);
    println!("alpha   = {}", exps.alpha);
    println!("2*      = {}", exps.sob_crit);
    println!("2*_b    = {}", exps.sob_crit_shifted);
    println!("c       = {}", exps.c);
    println!("e1      = {}", exps.e1);
    println!("e2      = {}", exps.e2);
    println!("eta     = {}", exps.eta);
    println!();
    print!("{}", validate(&config.params).to_table());
    Ok(())
}

fn cmd_solve_ball(config: &RunConfig, out_dir: &Path, full: bool) -> Result<(), RunError> {
    let name = if full { "solve-full" } else { "solve-radial" };
    let (dir, stamp) = prepare(out_dir, name, config)?;
    let (n_side, h) = config.single_grid();
    let op = GridEnergy::assemble(n_side, h, config.radius, &config.params)?;
    let radial = solver::solve_radial(&op, &config.solver)?;
    let result = if full {
        solver::solve_full(&op, radial.minimizer.as_grid(), &config.solver)?
    } else {
        radial
    };

    io::write_solve_summary_csv(&dir.join(format!("{name}_{stamp}.csv")), &result)?;
    io::write_trace_csv(&dir.join(format!("{name}_{stamp}_trace.csv")), &result.trace)?;
    if let Some(grid) = result.minimizer.as_grid() {
        io::write_grid_csv(&dir.join(format!("{name}_{stamp}_minimizer.csv")), grid)?;
        io::write_grid_binary(&dir.join(format!("{name}_{stamp}_minimizer.bin")), grid)?;
    }
    println!(
        "{}(R={}) = {} multiplier={} nonradiality={} iters={} converged={}",
        if full { "M" } else { "m" },
        config.radius,
        result.level,
        result.multiplier,
        result.nonradiality.unwrap_or(f64::NAN),
        result.iters,
        result.converged,
    );
    if !result.converged {
        return Err(RunError::Convergence(format!("{name} did not converge")));
    }
    Ok(())
}

fn cmd_solve_rn(config: &RunConfig, out_dir: &Path) -> Result<(), RunError> {
    let (dir, stamp) = prepare(out_dir, "solve-rn", config)?;
    let result = solver::solve_whole_space(
        &config.params,
        config.truncation,
        &RadialGridSpec::default(),
        &config.solver,
    )?;
    io::write_solve_summary_csv(&dir.join(format!("solve-rn_{stamp}.csv")), &result)?;
    if let Some(profile) = result.minimizer.as_radial() {
        io::write_radial_csv(&dir.join(format!("solve-rn_{stamp}_minimizer.csv")), profile)?;
    }
    println!(
        "m(inf; L={}) = {} iters={} converged={} truncation_suspect={}",
        config.truncation, result.level, result.iters, result.converged, result.truncation_suspect,
    );
    if !result.converged {
        return Err(RunError::Convergence("whole-space solve did not converge".into()));
    }
    Ok(())
}

fn cmd_sweep(config: &RunConfig, out_dir: &Path) -> Result<(), RunError> {
    let (dir, stamp) = prepare(out_dir, "sweep", config)?;
    let sweep = experiments::sweep_radii(
        &config.params,
        &config.r_list,
        config.sweep_policy(),
        config.truncation,
        &config.solver,
    )?;
    io::write_sweep_csv(&dir.join(format!("sweep_{stamp}.csv")), &sweep)?;
    let curve = |f: &dyn Fn(&experiments::SweepRow) -> f64| -> Vec<(f64, f64)> {
        sweep.rows.iter().map(|r| (r.radius, f(r))).collect()
    };
    io::write_plot_data(&dir.join(format!("sweep_{stamp}_m.dat")), &curve(&|r| r.radial_level))?;
    io::write_plot_data(&dir.join(format!("sweep_{stamp}_M.dat")), &curve(&|r| r.full_level))?;
    io::write_plot_data(&dir.join(format!("sweep_{stamp}_gap.dat")), &curve(&|r| r.relative_gap))?;
    if let Some(grid) = &sweep.final_full_minimizer {
        io::write_grid_binary(&dir.join(format!("sweep_{stamp}_full_minimizer.bin")), grid)?;
    }
    if let Some(grid) = &sweep.final_radial_minimizer {
        io::write_grid_binary(&dir.join(format!("sweep_{stamp}_radial_minimizer.bin")), grid)?;
    }

    let last = sweep.rows.last().expect("sweep returns rows");
    println!(
        "gap(R={}) = {} rel={} nonradiality={} | m(inf)={}",
        last.radius, last.gap, last.relative_gap, last.nonradiality, sweep.whole_space_level,
    );
    if sweep.rows.iter().any(|r| !r.radial_converged || !r.full_converged) {
        return Err(RunError::Convergence("a sweep row did not converge".into()));
    }
    Ok(())
}

fn cmd_bump(config: &RunConfig, out_dir: &Path) -> Result<(), RunError> {
    let (dir, stamp) = prepare(out_dir, "bump", config)?;
    let result = experiments::bump_decay(&config.params, &config.t_list)?;
    io::write_bump_csv(&dir.join(format!("bump_{stamp}.csv")), &result)?;
    let curve: Vec<(f64, f64)> = result.rows.iter().map(|r| (r.t, r.quotient)).collect();
    io::write_plot_data(&dir.join(format!("bump_{stamp}_quotient.dat")), &curve)?;
    println!(
        "fitted slope = {} (a - 2b/p = {}), quotient({}) = {}",
        result.fitted_slope,
        result.predicted_slope,
        result.rows.last().unwrap().t,
        result.rows.last().unwrap().quotient,
    );
    Ok(())
}

fn cmd_cutoff(config: &RunConfig, out_dir: &Path) -> Result<(), RunError> {
    let (dir, stamp) = prepare(out_dir, "cutoff", config)?;
    let grid = default_radius_grid();
    let u = gaussian_profile(&grid, config.params.n, 1.0);
    let result = experiments::cutoff_convergence(&u, &config.params, &config.cutoff_r_list)?;
    io::write_cutoff_csv(&dir.join(format!("cutoff_{stamp}.csv")), &result)?;
    let curve: Vec<(f64, f64)> = result.rows.iter().map(|r| (r.radius, r.error)).collect();
    io::write_plot_data(&dir.join(format!("cutoff_{stamp}_error.dat")), &curve)?;
    let last = result.rows.last().unwrap();
    println!("cutoff error(R={}) = {} (norm {})", last.radius, last.error, result.norm);
    Ok(())
}

fn cmd_survey(config: &RunConfig, out_dir: &Path, strauss: bool) -> Result<(), RunError> {
    let name = if strauss { "strauss" } else { "gn" };
    let (dir, stamp) = prepare(out_dir, name, config)?;
    let family = experiments::FamilySpec::default();
    let result = if strauss {
        experiments::strauss_survey(&config.params, &family)?
    } else {
        experiments::gn_survey(&config.params, &family)?
    };
    io::write_survey_csv(&dir.join(format!("{name}_{stamp}.csv")), &result)?;
    println!("{name} survey: {} members, max ratio = {}", result.rows.len(), result.max_ratio);
    Ok(())
}
