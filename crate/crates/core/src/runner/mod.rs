//! Parameter sweeps, validation and output for the `xywave` binary.

mod config;
mod output;
mod sweep;
mod validate;

use std::fs::File;
use std::io::{BufWriter, Write};

pub use config::{parse_key_values, Axis, Command, Format, IntAxis, RunConfig, Suite};
pub use output::{SweepResult, Value};
pub use sweep::{run_phase_diagram, run_thermal, run_wave, run_zerotemp};
pub use validate::{memory_needed, run_validate, Check, FiniteSizeError, ValidationReport};

use crate::error::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("numeric failure at {point}: {message}")]
    Numeric { point: String, message: String },
    #[error("oracle needs about {needed} bytes, over the memory budget of {budget} bytes")]
    Budget { needed: usize, budget: usize },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Usage(_) | RunError::Budget { .. } | RunError::Io(_) => 2,
            RunError::Numeric { .. } => 3,
            RunError::Validation(_) => 4,
        }
    }
}

/// Parameter errors become usage errors; everything else is numeric.
pub(crate) fn classify(e: Error, point: String) -> RunError {
    match e {
        Error::InvalidParameter(_)
        | Error::CouplingOutOfRange(_)
        | Error::AnisotropyUnsupported(_)
        | Error::ChainSize(_) => RunError::Usage(format!("{point}: {e}")),
        other => RunError::Numeric { point, message: other.to_string() },
    }
}

/// Effective configuration, then `info.*` entries, then the timestamp.
pub(crate) fn metadata(cfg: &RunConfig, info: Vec<(String, String)>) -> Vec<(String, String)> {
    let mut m = cfg.pairs();
    m.push(("info.version".into(), VERSION.into()));
    m.push(("info.entropy_base".into(), "2".into()));
    m.extend(info);
    if cfg.timestamp {
        let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs());
        m.push(("info.timestamp".into(), secs.to_string()));
    }
    m
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Sweep(SweepResult),
    Report(ValidationReport),
}

/// Runs the configured command on a pool of `cfg.threads` workers.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| RunError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| match cfg.command {
        Command::PhaseDiagram => run_phase_diagram(cfg).map(Outcome::Sweep),
        Command::Thermal => run_thermal(cfg).map(Outcome::Sweep),
        Command::Wave => run_wave(cfg).map(Outcome::Sweep),
        Command::ZeroTemp => run_zerotemp(cfg).map(Outcome::Sweep),
        Command::Validate => run_validate(cfg).map(Outcome::Report),
    })
}

/// Executes and writes the result to `cfg.out` (stdout when unset). A failed
/// validation report is written before the error is returned.
pub fn run(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let outcome = execute(cfg)?;
    let io = |e: std::io::Error| RunError::Io(e.to_string());
    let mut sink: Box<dyn Write> = match &cfg.out {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?))
        }
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    match &outcome {
        Outcome::Sweep(result) => result.write(cfg.format, &mut sink).map_err(io)?,
        Outcome::Report(report) => {
            serde_json::to_writer_pretty(&mut sink, report).map_err(|e| RunError::Io(e.to_string()))?;
            writeln!(sink).map_err(io)?;
        }
    }
    sink.flush().map_err(io)?;
    if let Outcome::Report(report) = &outcome {
        let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
        if !failed.is_empty() {
            return Err(RunError::Validation(failed.join(", ")));
        }
    }
    Ok(outcome)
}
