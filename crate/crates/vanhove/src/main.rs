//! Scenario runner CLI.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vanhove::scenario::{
    builtin_scenario, emit_outputs, parse_config, run_scenario, RunOptions, ScenarioConfig,
    BUILTIN_SCENARIOS,
};

/// Environment variable naming the default output root.
const OUT_ENV: &str = "VANHOVE_OUT";

#[derive(Parser)]
#[command(
    name = "vanhove",
    version,
    about = "Decoherence laboratory for the van Hove algebra: kernel evolution, Riemann-Lebesgue decay, and the GNS pointer basis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario (a config path or a built-in scenario name)
    Run {
        /// Config file path or built-in name (see `list-scenarios`)
        config: String,
        /// Output directory (default: $VANHOVE_OUT or the config's
        /// output.directory or ./vanhove_out, joined with the scenario name)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit SVG plots of |value| vs t
        #[arg(long)]
        plot: bool,
        /// Re-run on a doubled grid and assert the results move less than
        /// the configured refinement tolerance
        #[arg(long)]
        refine: bool,
        /// Override the config's random seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Parse and validate a config without running it
    Validate {
        /// Config file path or built-in name
        config: String,
    },
    /// List the built-in scenario library
    ListScenarios,
}

fn load_config(arg: &str) -> Result<ScenarioConfig, String> {
    let path = Path::new(arg);
    if path.exists() {
        return parse_config(path).map_err(|e| e.to_string());
    }
    if let Some(builtin) = builtin_scenario(arg) {
        return ScenarioConfig::from_toml_str(builtin.toml).map_err(|e| e.to_string());
    }
    let known: Vec<&str> = BUILTIN_SCENARIOS.iter().map(|s| s.name).collect();
    Err(format!(
        "`{arg}` is neither a config file nor a built-in scenario (built-ins: {})",
        known.join(", ")
    ))
}

fn output_dir(cli_out: Option<PathBuf>, config: &ScenarioConfig) -> PathBuf {
    if let Some(dir) = cli_out {
        return dir;
    }
    let root = std::env::var_os(OUT_ENV)
        .map(PathBuf::from)
        .or_else(|| config.output.directory.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("vanhove_out"));
    root.join(&config.name)
}

fn run(
    config_arg: &str,
    out: Option<PathBuf>,
    plot: bool,
    refine: bool,
    seed: Option<u64>,
) -> Result<bool, String> {
    let config = load_config(config_arg)?;
    let options = RunOptions { seed, refine };
    let run = run_scenario(&config, &options).map_err(|e| e.to_string())?;
    let dir = output_dir(out, &config);
    let emit_plot = plot || config.output.plot;
    let written = emit_outputs(&run, &dir, emit_plot).map_err(|e| e.to_string())?;

    let s = &run.summary;
    let mut report = String::new();
    let _ = writeln!(report, "scenario          {}", s.scenario);
    let _ = writeln!(report, "grid nodes        {}", s.grid_nodes);
    let _ = writeln!(report, "resolvable band   {:.6}", s.resolvable_band);
    let _ = writeln!(report, "decay reference   {:.6e}", s.decay_reference);
    let _ = writeln!(report, "final |v|/ref     {:.6e}", s.final_abs_over_ref);
    match s.decoherence_time {
        Some(t) => {
            let _ = writeln!(report, "decoherence time  {t:.6}");
        }
        None => {
            let _ = writeln!(report, "decoherence time  not reached");
        }
    }
    if let (Some(model), Some(rate)) = (&s.fit_model, s.fit_rate) {
        let _ = writeln!(report, "decay fit         {model} (rate {rate:.6})");
    }
    let _ = writeln!(report, "truncation tail   {:.6e}", s.truncation_tail_bound);
    let _ = writeln!(
        report,
        "pointer residual  {:.6e}",
        s.pointer_identity_residual
    );
    if let Some(delta) = s.grid_refinement_delta {
        let _ = writeln!(report, "refinement delta  {delta:.6e}");
    }
    for note in &s.notes {
        let _ = writeln!(report, "note: {note}");
    }
    for failure in &s.failures {
        let _ = writeln!(report, "FAIL: {failure}");
    }
    for path in &written {
        let _ = writeln!(report, "wrote {}", path.display());
    }
    // A closed stdout (e.g. piping into `head`) is not an error worth dying
    // over once the artifacts are on disk.
    let _ = std::io::stdout().write_all(report.as_bytes());
    Ok(s.failures.is_empty())
}

fn validate(config_arg: &str) -> Result<String, String> {
    let config = load_config(config_arg)?;
    Ok(format!(
        "ok: scenario `{}` ({} axes, seed {})",
        config.name,
        config.grid.axes.len(),
        config.seed
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            plot,
            refine,
            seed,
        } => match run(&config, out, plot, refine, seed) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::FAILURE,
            Err(message) => {
                eprintln!("error: {message}");
                ExitCode::from(2)
            }
        },
        Command::Validate { config } => match validate(&config) {
            Ok(message) => {
                println!("{message}");
                ExitCode::SUCCESS
            }
            Err(message) => {
                eprintln!("error: {message}");
                ExitCode::from(2)
            }
        },
        Command::ListScenarios => {
            for builtin in BUILTIN_SCENARIOS {
                println!("{:<18} {}", builtin.name, builtin.description);
            }
            ExitCode::SUCCESS
        }
    }
}
