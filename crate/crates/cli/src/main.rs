//! Command-line interface over the composition-runs library: exact
//! longest-run distributions, dominant-pole data, law comparisons, moment
//! asymptotics, pole-isolation witnesses, and reproducible simulations, all
//! emitted as plot-ready CSV or versioned JSON.

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use commands::Settings;
use config::FileConfig;

#[derive(Debug)]
pub enum CliError {
    Core(composition_runs::Error),
    SeriesCap { n: usize, cap: usize },
    Usage(String),
    Config(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> &str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::SeriesCap { .. } => "series-cap-exceeded",
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::SeriesCap { n, cap } => {
                write!(f, "n = {n} exceeds the series cap {cap} (raise --series-cap)")
            }
            CliError::Usage(m) | CliError::Config(m) | CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<composition_runs::Error> for CliError {
    fn from(e: composition_runs::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "composition-runs",
    version,
    about = "Longest-run statistics of uniform random integer compositions"
)]
struct Cli {
    /// Output format (csv or json)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Significant decimal digits for reported values
    #[arg(long, global = true, env = "COMPOSITION_RUNS_PRECISION")]
    precision: Option<u32>,

    /// Largest n accepted by series-backed commands
    #[arg(long, global = true)]
    series_cap: Option<usize>,

    /// Optional TOML config mirroring these flags (flags win)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Stamp outputs with wall-clock time (breaks byte-reproducibility)
    #[arg(long, global = true)]
    timestamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact distribution of the longest run at size n (or an n-sweep)
    Exact {
        #[arg(long)]
        n: Option<usize>,
        /// Emit rows only for k up to this bound
        #[arg(long)]
        k_max: Option<usize>,
        /// Sweep sizes FROM:TO:STEP (e.g. 20:500:20) instead of a single n
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Dominant pole rho_k with bracket, residual, and first-order estimate
    Rho {
        /// Single k or inclusive range (e.g. 7 or 2..10)
        #[arg(long)]
        k: String,
        /// Residual tolerance for the certified pole
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Exact vs double-exponential vs residue-based P(L < k) per k
    Compare {
        #[arg(long)]
        n: usize,
    },
    /// Exact and asymptotic mean/variance per n, or the fluctuation curves
    Moments {
        /// Comma-separated sizes (e.g. 64,256,1024)
        #[arg(long)]
        n: Option<String>,
        /// Fourier truncation for the fluctuation series
        #[arg(long)]
        terms: Option<u32>,
        /// Sweep the two fluctuation curves over w = lg x instead
        #[arg(long)]
        figure2: bool,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Seeded Monte Carlo: aggregate run statistics or single-sample profiles
    Simulate {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        trials: Option<u64>,
        /// Single seed, or an inclusive range (e.g. 1..4) with --single
        #[arg(long)]
        seed: String,
        #[arg(long)]
        r_max: Option<u32>,
        /// Dump one composition's per-value run profile per seed
        #[arg(long)]
        single: bool,
    },
    /// Samples |g| and |f| on |z| = 3/5 to witness pole isolation
    Rouche {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        samples: Option<u32>,
    },
}

fn parse_range_u64(s: &str, what: &str) -> Result<(u64, u64), CliError> {
    let parse_one = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("cannot parse {what} value {t:?}")))
    };
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (parse_one(a)?, parse_one(b)?);
        if b < a {
            return Err(CliError::Usage(format!("empty {what} range {s:?}")));
        }
        Ok((a, b))
    } else {
        let v = parse_one(s)?;
        Ok((v, v))
    }
}

fn parse_sweep(s: &str) -> Result<Vec<usize>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "--sweep wants FROM:TO:STEP, got {s:?}"
        )));
    }
    let nums: Vec<usize> = parts
        .iter()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("cannot parse sweep value {t:?}")))
        })
        .collect::<Result<_, _>>()?;
    let (from, to, step) = (nums[0], nums[1], nums[2]);
    if step == 0 || from == 0 || to < from {
        return Err(CliError::Usage(
            "sweep needs 0 < FROM <= TO and STEP > 0".into(),
        ));
    }
    Ok((from..=to).step_by(step).collect())
}

fn parse_n_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("cannot parse n value {t:?}")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file_cfg = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(CliError::Config)?,
        None => FileConfig::default(),
    };

    let format = cli.format.unwrap_or(match file_cfg.defaults.format.as_deref() {
        Some("json") => Format::Json,
        _ => Format::Csv,
    });
    let digits = cli
        .precision
        .or(file_cfg.defaults.precision)
        .unwrap_or(50)
        .clamp(5, 200);
    let settings = Settings {
        digits,
        series_cap: cli
            .series_cap
            .or(file_cfg.defaults.series_cap)
            .unwrap_or(4096),
        timestamp: cli.timestamp.then(|| {
            let secs = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            format!("unix:{secs}")
        }),
    };

    let record = match cli.command {
        Command::Exact { n, k_max, sweep } => {
            let k_max = k_max.or(file_cfg.exact.k_max);
            match (&sweep, n) {
                (Some(s), _) => commands::cmd_exact(&settings, parse_sweep(s)?, k_max, sweep),
                (None, Some(n)) => commands::cmd_exact(&settings, vec![n], k_max, None),
                (None, None) => Err(CliError::Usage("exact wants --n or --sweep".into())),
            }?
        }
        Command::Rho { k, tol } => {
            let (lo, hi) = parse_range_u64(&k, "k")?;
            let tol = tol.or(file_cfg.rho.tol).unwrap_or(1e-30);
            commands::cmd_rho(&settings, (lo as u32, hi as u32), tol)?
        }
        Command::Compare { n } => commands::cmd_compare(&settings, n)?,
        Command::Moments {
            n,
            terms,
            figure2,
            from,
            to,
            step,
        } => {
            let terms = terms.or(file_cfg.moments.terms).unwrap_or(16).max(1);
            if figure2 {
                let (from, to, step) = match (from, to, step) {
                    (Some(f), Some(t), Some(s)) => (f, t, s),
                    _ => {
                        return Err(CliError::Usage(
                            "--figure2 wants --from, --to and --step".into(),
                        ))
                    }
                };
                commands::cmd_moments_figure2(&settings, from, to, step)?
            } else {
                let list = n.ok_or_else(|| CliError::Usage("moments wants --n".into()))?;
                commands::cmd_moments(&settings, parse_n_list(&list)?, terms)?
            }
        }
        Command::Simulate {
            n,
            trials,
            seed,
            r_max,
            single,
        } => {
            let seeds = parse_range_u64(&seed, "seed")?;
            let trials = trials.or(file_cfg.simulate.trials).unwrap_or(1);
            let r_max = r_max.or(file_cfg.simulate.r_max);
            commands::cmd_simulate(&settings, n, trials, seeds, r_max, single)?
        }
        Command::Rouche { k, samples } => {
            let samples = samples.or(file_cfg.rouche.samples).unwrap_or(4096);
            commands::cmd_rouche(&settings, k, samples)?
        }
    };

    let payload = match format {
        Format::Csv => record.to_csv(),
        Format::Json => record.to_json(),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{payload}"),
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}: {e}", e.code());
        std::process::exit(1);
    }
}
