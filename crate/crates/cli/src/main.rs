use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgGroup, Parser, Subcommand};

use hardy_cli::builtin::{builtin, BUILTINS};
use hardy_cli::{run_suite, RunOptions, RunSpec, SuiteConfig, TAGS};
use hardy_core::QuadConfig;

#[derive(Parser)]
#[command(name = "hardy", version, about = "Numerical checks of Picone identities and Hardy-type inequalities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a suite file or a builtin suite.
    #[command(group(ArgGroup::new("source").required(true).args(["suite", "builtin"])))]
    Verify {
        #[arg(long)]
        suite: Option<PathBuf>,
        #[arg(long)]
        builtin: Option<String>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Count inconclusive runs as passing.
        #[arg(long)]
        allow_inconclusive: bool,
        #[arg(long, env = "HARDY_OUT_DIR", default_value = "hardy-reports")]
        out: PathBuf,
    },
    /// Pointwise Picone checks (and the rho identities on product groups).
    IdentityCheck {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 10_000)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a builtin suite as TOML.
    Builtin { name: String },
    /// List theorem tags and builtin suites.
    List,
}

fn identity_suite(group: &str, points: usize, seed: u64) -> Result<SuiteConfig> {
    let g = hardy_core::StratifiedGroup::from_spec(group).context("--group")?;
    let mut picone = RunSpec::new("picone");
    picone.group = Some(group.to_string());
    picone.points = Some(points);
    picone.quadrature = Some(QuadConfig::mc(hardy_core::quad::DEFAULT_MC_SAMPLES, seed));
    let mut runs = vec![picone];
    if let Some((base, n)) = g.factors() {
        let mut rho = RunSpec::new("rho_identities");
        rho.group = Some(base.label().to_string());
        rho.n = Some(n);
        rho.points = Some(points);
        rho.quadrature = Some(QuadConfig::mc(hardy_core::quad::DEFAULT_MC_SAMPLES, seed));
        runs.push(rho);
    }
    Ok(SuiteConfig { runs })
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Verify { suite, builtin: name, jobs, allow_inconclusive, out } => {
            let cfg = match (suite, name) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    SuiteConfig::parse(&text).with_context(|| format!("parsing {}", path.display()))?
                }
                (None, Some(name)) => builtin(&name)?,
                (None, None) => unreachable!("clap requires a source"),
            };
            let opts = RunOptions { jobs, allow_inconclusive, out: Some(out.clone()) };
            let outcome = run_suite(&cfg, &opts)?;
            print!("{}", outcome.table());
            eprintln!("reports written to {}", out.display());
            Ok(outcome.exit_code())
        }
        Cmd::IdentityCheck { group, points, seed, out } => {
            let cfg = identity_suite(&group, points, seed)?;
            let outcome = run_suite(&cfg, &RunOptions { out, ..Default::default() })?;
            print!("{}", outcome.table());
            Ok(outcome.exit_code())
        }
        Cmd::Builtin { name } => {
            print!("{}", builtin(&name)?.to_toml());
            Ok(0)
        }
        Cmd::List => {
            println!("theorems: {}", TAGS.join(", "));
            println!("builtin suites: {}", BUILTINS.join(", "));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
