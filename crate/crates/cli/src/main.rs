//! `phasetime`: tables, sweeps and oracle runs for square-barrier wave packets.

mod commands;
mod config;
mod csv;
mod error;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Command, RunConfig};
use error::CliError;

#[derive(Parser)]
#[command(name = "phasetime", version, about = "Square-barrier wave packet scattering and phase times")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// k_max a over a grid of w a and L/a.
    Table1(Opts),
    /// Tunneling and scattering time rates against the opacity.
    Rates(Opts),
    /// Phase times over barrier width or momentum.
    PhaseTimes(Opts),
    /// Multiple-peak and single-packet densities above the barrier.
    Peaks(Opts),
    /// Free packet with its momentum distribution cut at w.
    Cutoff(Opts),
    /// Grid propagation with peak tracks.
    Propagate(Opts),
    /// Runs the invariant checks.
    Validate(Opts),
}

/// Every configuration key is also a flag; flags win over the config file.
#[derive(Args, Default)]
struct Opts {
    /// `key = value` file applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    k0a: Option<String>,
    #[arg(long)]
    wa: Option<String>,
    #[arg(long)]
    l_over_a: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    #[arg(long)]
    wa_list: Option<String>,
    #[arg(long)]
    l_list: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    alpha_min: Option<String>,
    #[arg(long)]
    alpha_max: Option<String>,
    #[arg(long)]
    points: Option<String>,
    /// `length` or `momentum`.
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long)]
    times: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<String>,
    #[arg(long)]
    terms: Option<String>,
    #[arg(long)]
    dx: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    #[arg(long)]
    save_every: Option<String>,
    #[arg(long)]
    prominence: Option<String>,
    #[arg(long)]
    unitarity: Option<String>,
    #[arg(long)]
    series: Option<String>,
    #[arg(long)]
    derivative: Option<String>,
    #[arg(long)]
    branch_rel: Option<String>,
    #[arg(long)]
    root_rel: Option<String>,
    /// Output directory.
    #[arg(long, short)]
    output: Option<String>,
    /// Write failed points as `nan` and exit successfully.
    #[arg(long)]
    keep_going: bool,
}

impl Opts {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        let pairs: [(&str, &Option<String>); 28] = [
            ("k0a", &self.k0a),
            ("wa", &self.wa),
            ("l-over-a", &self.l_over_a),
            ("m", &self.m),
            ("x0", &self.x0),
            ("wa-list", &self.wa_list),
            ("l-list", &self.l_list),
            ("n", &self.n),
            ("alpha-min", &self.alpha_min),
            ("alpha-max", &self.alpha_max),
            ("points", &self.points),
            ("sweep", &self.sweep),
            ("times", &self.times),
            ("x-min", &self.x_min),
            ("x-max", &self.x_max),
            ("terms", &self.terms),
            ("dx", &self.dx),
            ("dt", &self.dt),
            ("steps", &self.steps),
            ("save-every", &self.save_every),
            ("prominence", &self.prominence),
            ("unitarity", &self.unitarity),
            ("series", &self.series),
            ("derivative", &self.derivative),
            ("branch-rel", &self.branch_rel),
            ("root-rel", &self.root_rel),
            ("output", &self.output),
            ("keep-going", &None),
        ];
        let mut out: Vec<_> = pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
            .collect();
        if self.keep_going {
            out.push(("keep-going", "true"));
        }
        out
    }
}

fn config_for(command: Command, opts: &Opts) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::new(command);
    if let Some(path) = &opts.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        config.apply_text(&text)?;
        // The subcommand on the command line decides what runs.
        config.command = command;
    }
    for (key, value) in opts.overrides() {
        config.set(key, value)?;
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match &cli.command {
        Cmd::Table1(o) => (Command::Table1, o),
        Cmd::Rates(o) => (Command::Rates, o),
        Cmd::PhaseTimes(o) => (Command::PhaseTimes, o),
        Cmd::Peaks(o) => (Command::Peaks, o),
        Cmd::Cutoff(o) => (Command::Cutoff, o),
        Cmd::Propagate(o) => (Command::Propagate, o),
        Cmd::Validate(o) => (Command::Validate, o),
    };
    let result = config_for(command, opts).and_then(|c| commands::run(&c));
    match result {
        Ok(report) => {
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
