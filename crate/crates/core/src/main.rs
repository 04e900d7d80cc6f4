use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use xywave_core::runner::{self, parse_key_values, Command, RunConfig, RunError};

/// Thermal entanglement and measurement-induced dynamics of the XY spin chain.
///
/// Ranges are `value` or `min:max:steps` (inclusive); integer offsets are
/// `value` or `min:max`. Settings resolve as flags > --config file > defaults.
#[derive(Parser)]
#[command(name = "xywave", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Nearest-neighbour concurrence over a (lambda, beta) grid.
    PhaseDiagram(Options),
    /// Correlators and concurrence at several offsets over a beta grid.
    Thermal(Options),
    /// Site magnetization after a sigma_z measurement, over (x, t, beta).
    Wave(Options),
    /// Zero-temperature wave, entropy, concurrence and fidelity over (x, t).
    Zerotemp(Options),
    /// Compare analytic results with exact diagonalization; JSON report.
    Validate(Options),
}

#[derive(Args, Default)]
struct Options {
    /// Flat `key = value` file with defaults for this run.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Offset(s) from the measured site.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// selective | nonselective
    #[arg(long)]
    mode: Option<String>,
    /// Magnetization sign convention, +1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<String>,
    /// Initial quadrature nodes.
    #[arg(long)]
    nodes: Option<String>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    tolerance: Option<String>,
    /// thermal | dynamics | zerotemp | all
    #[arg(long)]
    suite: Option<String>,
    /// Largest oracle chain length.
    #[arg(long)]
    n: Option<String>,
    /// Oracle memory budget in MiB.
    #[arg(long)]
    memory_budget: Option<String>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    /// Output path; stdout when absent or `-`.
    #[arg(long)]
    out: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<String>,
    /// Leave the timestamp out of the output.
    #[arg(long)]
    no_timestamp: bool,
}

impl Options {
    fn flag_pairs(&self) -> Vec<(String, String)> {
        let named = [
            ("lambda", &self.lambda),
            ("beta", &self.beta),
            ("gamma", &self.gamma),
            ("x", &self.x),
            ("t", &self.t),
            ("mode", &self.mode),
            ("sign", &self.sign),
            ("nodes", &self.nodes),
            ("tolerance", &self.tolerance),
            ("suite", &self.suite),
            ("n", &self.n),
            ("memory-budget", &self.memory_budget),
            ("format", &self.format),
            ("out", &self.out),
            ("threads", &self.threads),
        ];
        let mut pairs: Vec<(String, String)> =
            named.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))).collect();
        if self.no_timestamp {
            pairs.push(("timestamp".into(), "false".into()));
        }
        pairs
    }
}

fn resolve(command: Command, opts: &Options) -> Result<RunConfig, RunError> {
    let file = match &opts.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))?;
            parse_key_values(&text)?
        }
        None => Vec::new(),
    };
    RunConfig::resolve(command, &file, &opts.flag_pairs())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match &cli.command {
        Cmd::PhaseDiagram(o) => (Command::PhaseDiagram, o),
        Cmd::Thermal(o) => (Command::Thermal, o),
        Cmd::Wave(o) => (Command::Wave, o),
        Cmd::Zerotemp(o) => (Command::ZeroTemp, o),
        Cmd::Validate(o) => (Command::Validate, o),
    };
    match resolve(command, opts).and_then(|cfg| runner::run(&cfg)) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("xywave: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
