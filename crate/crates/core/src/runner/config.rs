use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::dynamics::MeasurementMode;
use crate::thermal::{SignConvention, SIGN_CONVENTION_ENV};

use super::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    PhaseDiagram,
    Thermal,
    Wave,
    ZeroTemp,
    Validate,
}

impl Command {
    pub const ALL: [Command; 5] =
        [Command::PhaseDiagram, Command::Thermal, Command::Wave, Command::ZeroTemp, Command::Validate];

    pub fn name(self) -> &'static str {
        match self {
            Command::PhaseDiagram => "phase-diagram",
            Command::Thermal => "thermal",
            Command::Wave => "wave",
            Command::ZeroTemp => "zerotemp",
            Command::Validate => "validate",
        }
    }

    /// Keys that configure this command, in metadata order, with defaults.
    fn keys(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Command::PhaseDiagram => &[
                ("lambda", "0.8:0.99:60"),
                ("beta", "0.5:40:80"),
                ("gamma", "0"),
                ("nodes", "64"),
                ("tolerance", "1e-10"),
                ("format", "csv"),
            ],
            Command::Thermal => &[
                ("lambda", "0.8"),
                ("beta", "0.5:40:80"),
                ("gamma", "0"),
                ("x", "1:5"),
                ("sign", "+1"),
                ("nodes", "64"),
                ("tolerance", "1e-10"),
                ("format", "csv"),
            ],
            Command::Wave => &[
                ("lambda", "0.8"),
                ("beta", "1:20:40"),
                ("x", "1"),
                ("t", "0:12:240"),
                ("mode", "selective"),
                ("nodes", "64"),
                ("tolerance", "1e-10"),
                ("format", "csv"),
            ],
            Command::ZeroTemp => &[("lambda", "0.8"), ("t", "0:40:400"), ("x", "-40:40"), ("format", "csv")],
            Command::Validate => &[("suite", "all"), ("n", "12"), ("memory-budget", "2048")],
        }
    }
}

const COMMON_KEYS: [(&str, &str); 3] = [("out", "-"), ("threads", "auto"), ("timestamp", "true")];

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, RunError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| RunError::Usage(format!("unknown command {s:?}")))
    }
}

/// Inclusive, evenly spaced real axis; `steps = 1` is the single value `min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn single(v: f64) -> Self {
        Self { min: v, max: v, steps: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.max } else { self.min + span * i as f64 / last })
            .collect()
    }

    pub fn as_single(&self) -> Option<f64> {
        (self.steps == 1).then_some(self.min)
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("bad number {p:?} in range {s:?}"));
        let axis = match parts.as_slice() {
            [v] => Axis::single(num(v)?),
            [a, b, n] => Axis {
                min: num(a)?,
                max: num(b)?,
                steps: n.trim().parse().map_err(|_| format!("bad step count in range {s:?}"))?,
            },
            _ => return Err(format!("range {s:?} is not `value` or `min:max:steps`")),
        };
        if axis.min.is_nan() || axis.max.is_nan() {
            return Err(format!("range {s:?} contains NaN"));
        }
        if axis.steps == 0 {
            return Err(format!("range {s:?} needs at least one step"));
        }
        if axis.min > axis.max {
            return Err(format!("range {s:?} has min > max"));
        }
        if axis.steps == 1 && axis.min != axis.max {
            return Err(format!("range {s:?} with one step must have min = max"));
        }
        Ok(axis)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_single() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}:{}:{}", self.min, self.max, self.steps),
        }
    }
}

/// Inclusive integer range `a:b` or a single integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntAxis {
    pub min: i64,
    pub max: i64,
}

impl IntAxis {
    pub fn values(&self) -> impl Iterator<Item = i64> {
        self.min..=self.max
    }

    pub fn len(&self) -> usize {
        (self.max - self.min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl FromStr for IntAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |p: &str| p.trim().parse::<i64>().map_err(|_| format!("bad integer {p:?} in range {s:?}"));
        let (min, max) = match s.split(':').collect::<Vec<_>>().as_slice() {
            [v] => (num(v)?, num(v)?),
            [a, b] => (num(a)?, num(b)?),
            _ => return Err(format!("integer range {s:?} is not `value` or `min:max`")),
        };
        if min > max {
            return Err(format!("range {s:?} has min > max"));
        }
        Ok(Self { min, max })
    }
}

impl fmt::Display for IntAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.min == self.max {
            write!(f, "{}", self.min)
        } else {
            write!(f, "{}:{}", self.min, self.max)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Suite {
    Thermal,
    Dynamics,
    ZeroTemp,
    #[default]
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Thermal => "thermal",
            Suite::Dynamics => "dynamics",
            Suite::ZeroTemp => "zerotemp",
            Suite::All => "all",
        }
    }

    pub fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

/// Fully resolved configuration of one run.
///
/// Fields a command does not use keep their defaults and are left out of
/// [`RunConfig::pairs`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub lambda: Axis,
    pub beta: Axis,
    pub gamma: f64,
    pub x: IntAxis,
    pub t: Axis,
    pub mode: MeasurementMode,
    pub sign: SignConvention,
    pub nodes: usize,
    pub tolerance: f64,
    pub suite: Suite,
    pub n: usize,
    pub memory_budget_mib: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub timestamp: bool,
}

/// Parses flat `key = value` text; `#` starts a comment line.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>, RunError> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| RunError::Usage(format!("line {}: expected key = value", lineno + 1)))?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

fn bad(key: &str, value: &str, why: impl fmt::Display) -> RunError {
    RunError::Usage(format!("{key} = {value:?}: {why}"))
}

impl RunConfig {
    /// Layers `defaults < file < flags` for `command`; keys that do not apply
    /// to the command are errors wherever they come from.
    pub fn resolve(command: Command, file: &[(String, String)], flags: &[(String, String)]) -> Result<Self, RunError> {
        let allowed: Vec<(&str, &str)> = command.keys().iter().chain(COMMON_KEYS.iter()).copied().collect();
        let mut merged: BTreeMap<String, String> =
            allowed.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        if allowed.iter().any(|(k, _)| *k == "sign") {
            if let Ok(v) = std::env::var(SIGN_CONVENTION_ENV) {
                merged.insert("sign".into(), v);
            }
        }
        for (source, pairs) in [("config file", file), ("flags", flags)] {
            for (k, v) in pairs {
                if k == "command" {
                    if v != command.name() {
                        return Err(RunError::Usage(format!(
                            "{source} is for command {v:?}, not {:?}",
                            command.name()
                        )));
                    }
                    continue;
                }
                if !allowed.iter().any(|(a, _)| a == k) {
                    return Err(RunError::Usage(format!(
                        "unknown key {k:?} in {source} for command {}",
                        command.name()
                    )));
                }
                merged.insert(k.clone(), v.clone());
            }
        }
        Self::from_map(command, &merged)
    }

    fn from_map(command: Command, m: &BTreeMap<String, String>) -> Result<Self, RunError> {
        let get = |k: &str| m.get(k).map(String::as_str);
        let axis = |k: &str| -> Result<Option<Axis>, RunError> {
            get(k).map(|v| v.parse::<Axis>().map_err(|e| bad(k, v, e))).transpose()
        };
        let num = |k: &str| -> Result<Option<f64>, RunError> {
            get(k).map(|v| v.parse::<f64>().map_err(|e| bad(k, v, e))).transpose()
        };
        let count = |k: &str| -> Result<Option<usize>, RunError> {
            get(k).map(|v| v.parse::<usize>().map_err(|e| bad(k, v, e))).transpose()
        };
        let cfg = RunConfig {
            command,
            lambda: axis("lambda")?.unwrap_or(Axis::single(0.8)),
            beta: axis("beta")?.unwrap_or(Axis::single(1.0)),
            gamma: num("gamma")?.unwrap_or(0.0),
            x: get("x")
                .map(|v| v.parse::<IntAxis>().map_err(|e| bad("x", v, e)))
                .transpose()?
                .unwrap_or(IntAxis { min: 1, max: 1 }),
            t: axis("t")?.unwrap_or(Axis::single(0.0)),
            mode: get("mode").map(|v| v.parse().map_err(|e| bad("mode", v, e))).transpose()?.unwrap_or_default(),
            sign: get("sign").map(|v| v.parse().map_err(|e| bad("sign", v, e))).transpose()?.unwrap_or_default(),
            nodes: count("nodes")?.unwrap_or(64),
            tolerance: num("tolerance")?.unwrap_or(1e-10),
            suite: match get("suite") {
                None | Some("all") => Suite::All,
                Some("thermal") => Suite::Thermal,
                Some("dynamics") => Suite::Dynamics,
                Some("zerotemp") => Suite::ZeroTemp,
                Some(v) => return Err(bad("suite", v, "expected thermal, dynamics, zerotemp or all")),
            },
            n: count("n")?.unwrap_or(12),
            memory_budget_mib: get("memory-budget")
                .map(|v| v.parse().map_err(|e| bad("memory-budget", v, e)))
                .transpose()?
                .unwrap_or(2048),
            format: match get("format") {
                None | Some("csv") => Format::Csv,
                Some("json") => Format::Json,
                Some(v) => return Err(bad("format", v, "expected csv or json")),
            },
            out: match get("out") {
                None | Some("-") => None,
                Some(p) => Some(PathBuf::from(p)),
            },
            threads: match get("threads") {
                None | Some("auto") => None,
                Some(v) => match v.parse::<usize>() {
                    Ok(0) | Err(_) => return Err(bad("threads", v, "expected a positive integer or auto")),
                    Ok(n) => Some(n),
                },
            },
            timestamp: match get("timestamp") {
                None | Some("true") => true,
                Some("false") => false,
                Some(v) => return Err(bad("timestamp", v, "expected true or false")),
            },
        };
        if !(cfg.tolerance > 0.0 && cfg.tolerance < 1.0) {
            return Err(bad("tolerance", &cfg.tolerance.to_string(), "must lie in (0, 1)"));
        }
        if cfg.nodes == 0 {
            return Err(bad("nodes", "0", "must be positive"));
        }
        if matches!(command, Command::Wave | Command::ZeroTemp | Command::Thermal) && cfg.lambda.as_single().is_none() {
            return Err(bad("lambda", &cfg.lambda.to_string(), "this command takes a single coupling"));
        }
        if cfg.t.min < 0.0 {
            return Err(bad("t", &cfg.t.to_string(), "times must be >= 0"));
        }
        if command == Command::Validate && !(crate::oracle::MIN_SITES + 4..=crate::oracle::MAX_SITES).contains(&cfg.n) {
            return Err(bad("n", &cfg.n.to_string(), "validation needs 6 <= n <= 14"));
        }
        if command == Command::Thermal && cfg.x.values().any(|x| x == 0) {
            return Err(bad("x", &cfg.x.to_string(), "pair offsets must be nonzero"));
        }
        Ok(cfg)
    }

    /// Canonical `key = value` pairs; feeding them back through
    /// [`RunConfig::resolve`] reproduces this configuration.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let value = |k: &str| -> String {
            match k {
                "lambda" => self.lambda.to_string(),
                "beta" => self.beta.to_string(),
                "gamma" => self.gamma.to_string(),
                "x" => self.x.to_string(),
                "t" => self.t.to_string(),
                "mode" => self.mode.to_string(),
                "sign" => self.sign.to_string(),
                "nodes" => self.nodes.to_string(),
                "tolerance" => format!("{:e}", self.tolerance),
                "suite" => self.suite.name().into(),
                "n" => self.n.to_string(),
                "memory-budget" => self.memory_budget_mib.to_string(),
                "format" => match self.format {
                    Format::Csv => "csv".into(),
                    Format::Json => "json".into(),
                },
                "out" => self.out.as_ref().map_or_else(|| "-".into(), |p| p.display().to_string()),
                "threads" => self.threads.map_or_else(|| "auto".into(), |n| n.to_string()),
                "timestamp" => self.timestamp.to_string(),
                other => unreachable!("no key {other}"),
            }
        };
        std::iter::once(("command".to_string(), self.command.name().to_string()))
            .chain(self.command.keys().iter().chain(COMMON_KEYS.iter()).map(|(k, _)| (k.to_string(), value(k))))
            .collect()
    }

    /// Rebuilds the configuration from the `# key=value` header of an
    /// emitted CSV file (or any text with such lines). `info.*` keys are
    /// descriptive and skipped.
    pub fn from_metadata(text: &str) -> Result<Self, RunError> {
        let mut pairs = Vec::new();
        for line in text.lines() {
            let Some(rest) = line.strip_prefix("# ") else {
                if line.starts_with('#') {
                    continue;
                }
                break;
            };
            if let Some((k, v)) = rest.split_once('=') {
                if !k.starts_with("info.") {
                    pairs.push((k.to_string(), v.to_string()));
                }
            }
        }
        let command = pairs
            .iter()
            .find(|(k, _)| k == "command")
            .ok_or_else(|| RunError::Usage("metadata has no command".into()))?
            .1
            .parse()?;
        Self::resolve(command, &pairs, &[])
    }
}
