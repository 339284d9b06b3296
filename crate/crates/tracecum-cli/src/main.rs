use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use tracecum_cli::config::{parse_config, ExperimentConfig, LemmaOptions, Mode};
use tracecum_cli::run::{run, summary};

#[derive(Parser)]
#[command(name = "tracecum", version, about = "Exact and Monte Carlo cumulants of random matrix traces")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, env = "TRACECUM_THREADS", global = true)]
    threads: Option<usize>,
    /// Run on one thread; output bytes then depend only on config and seed.
    #[arg(long, global = true)]
    single_thread: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the graph-order lemma suites.
    VerifyLemmas {
        #[arg(long, default_value_t = LemmaOptions::default().max_m)]
        max_m: usize,
        #[arg(long, default_value_t = LemmaOptions::default().max_r)]
        max_r: usize,
        #[arg(long, default_value_t = LemmaOptions::default().trials)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the report and the verdict CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List ensembles, entry laws, deterministic matrices and modes.
    ListBuiltins,
}

fn load(path: &PathBuf) -> Result<ExperimentConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn execute(cli: Cli) -> Result<i32, String> {
    let threads = if cli.single_thread { Some(1) } else { cli.threads };
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global().map_err(|e| e.to_string())?;
    }
    let (cfg, write) = match cli.command {
        Command::ListBuiltins => {
            print!("{}", tracecum_cli::list_builtins());
            return Ok(0);
        }
        Command::Run { config, seed, out } => {
            let mut cfg = load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(dir) = out {
                cfg.output.dir = dir;
            }
            (cfg, true)
        }
        Command::VerifyLemmas { max_m, max_r, trials, seed, out } => {
            let mut cfg = parse_config(r#"{"mode": "verify-lemmas"}"#).map_err(|e| e.to_string())?;
            cfg.lemmas = LemmaOptions { max_m, max_r, trials };
            cfg.seed = seed;
            let write = out.is_some();
            if let Some(dir) = out {
                cfg.output.dir = dir;
                cfg.output.stem = "lemmas".into();
            }
            debug_assert_eq!(cfg.mode, Mode::VerifyLemmas);
            (cfg, write)
        }
    };
    let report = if write { run(&cfg) } else { tracecum_cli::run::execute(&cfg) }.map_err(|e| e.to_string())?;
    print!("{}", summary(&report));
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
