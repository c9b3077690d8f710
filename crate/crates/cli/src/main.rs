use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qracah_cli::config::{load, parse_suites, ConfigError, RunConfig, CONFIG_SCHEMA};
use qracah_cli::runner::{run, RunReport};
use qracah_cli::sweep::sweep;

#[derive(Parser)]
#[command(name = "qracah", version, about = "Exact verification of q-Racah tridiagonal pair identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites on one parameter point.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Write the JSON report here instead of the config's `output`.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Comma-separated suites, overriding the config.
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<String>>,
        /// Include per-check timings in the JSON report.
        #[arg(long)]
        timing: bool,
    },
    /// Run the suites on randomly drawn parameters with the config's module shape.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the JSON schema of the configuration file.
    ShowConfigSchema,
}

fn load_config(path: &Path, suites: Option<Vec<String>>) -> Result<RunConfig, (Value, ConfigError)> {
    let mut raw = load(path).map_err(|e| (Value::Null, e))?;
    if let Some(s) = suites {
        if let Err(e) = parse_suites(&s) {
            return Err((serde_json::to_value(&raw).unwrap_or(Value::Null), ConfigError::Invalid(e)));
        }
        raw.suites = s;
    }
    let echo = serde_json::to_value(&raw).unwrap_or(Value::Null);
    raw.validate().map_err(|e| (echo, e))
}

fn emit(value: &Value, path: Option<&str>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes") + "\n";
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(value: &Value, path: Option<&str>, summary: &str, code: i32) -> ExitCode {
    if let Err(e) = emit(value, path) {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(2);
    }
    if path.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ShowConfigSchema => {
            print!("{CONFIG_SCHEMA}");
            ExitCode::SUCCESS
        }
        Command::Verify { config, output, suites, timing } => {
            let out = output.map(|p| p.display().to_string());
            let cfg = match load_config(&config, suites) {
                Ok(c) => c,
                Err((echo, e)) => {
                    let r = RunReport::config_error(echo, e.messages());
                    return finish(&r.to_json(false), out.as_deref(), &r.summary_text(), r.exit_code());
                }
            };
            let out = out.or_else(|| cfg.output_path.clone());
            let r = run(&cfg);
            finish(&r.to_json(timing), out.as_deref(), &r.summary_text(), r.exit_code())
        }
        Command::Sweep { config, count, seed, output } => {
            let out = output.map(|p| p.display().to_string());
            let fail = |echo: Value, msgs: Vec<String>| {
                let r = RunReport::config_error(echo, msgs);
                finish(&r.to_json(false), out.as_deref(), &r.summary_text(), r.exit_code())
            };
            let cfg = match load_config(&config, None) {
                Ok(c) => c,
                Err((echo, e)) => return fail(echo, e.messages()),
            };
            let echo = serde_json::to_value(&cfg.raw).unwrap_or(Value::Null);
            let count = count.or(cfg.sweep.map(|s| s.count));
            let seed = seed.or(cfg.sweep.map(|s| s.seed));
            let (count, seed) = match (count, seed) {
                (Some(0), _) => return fail(echo, vec!["sweep.count must be at least 1".into()]),
                (Some(c), Some(s)) => (c, s),
                _ => return fail(echo, vec!["sweep needs a count and a seed".into()]),
            };
            let r = sweep(&cfg, count, seed);
            let mut v = r.to_json();
            v["config"] = json!(echo);
            let out = out.or_else(|| cfg.output_path.clone());
            finish(&v, out.as_deref(), &r.summary_text(), r.exit_code())
        }
    }
}
