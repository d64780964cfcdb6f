//! Run configuration: built-in defaults, `key = value` files and command-line overrides.

use std::fmt::Write as _;
use std::str::FromStr;

use phasetime::Tolerances;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Table1,
    Rates,
    PhaseTimes,
    Peaks,
    Cutoff,
    Propagate,
    Validate,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Table1,
        Command::Rates,
        Command::PhaseTimes,
        Command::Peaks,
        Command::Cutoff,
        Command::Propagate,
        Command::Validate,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Table1 => "table1",
            Command::Rates => "rates",
            Command::PhaseTimes => "phase-times",
            Command::Peaks => "peaks",
            Command::Cutoff => "cutoff",
            Command::Propagate => "propagate",
            Command::Validate => "validate",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

/// Independent variable of `phase-times`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// Barrier width over `l-list`, at `k = k0`.
    Length,
    /// Momentum over `(0, w)`, at fixed width.
    Momentum,
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "length" => Ok(Sweep::Length),
            "momentum" => Ok(Sweep::Momentum),
            _ => Err(format!("expected `length` or `momentum`, got `{s}`")),
        }
    }
}

impl Sweep {
    fn name(&self) -> &'static str {
        match self {
            Sweep::Length => "length",
            Sweep::Momentum => "momentum",
        }
    }
}

/// Everything a run depends on. Lengths are in units of the packet width `a`,
/// momenta in units of `1/a`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub k0a: f64,
    pub wa: f64,
    pub l_over_a: f64,
    pub m: f64,
    pub x0: f64,
    pub wa_list: Vec<f64>,
    pub l_list: Vec<f64>,
    pub n: Vec<f64>,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub points: usize,
    pub sweep: Sweep,
    pub times: Vec<f64>,
    pub x_min: f64,
    pub x_max: f64,
    pub terms: usize,
    pub dx: f64,
    pub dt: f64,
    pub steps: usize,
    pub save_every: usize,
    pub prominence: f64,
    pub unitarity: f64,
    pub series: f64,
    pub derivative: f64,
    pub branch_rel: f64,
    pub root_rel: f64,
    pub output: String,
    pub keep_going: bool,
}

/// Keys in the order they are written.
pub const KEYS: [&str; 29] = [
    "command",
    "k0a",
    "wa",
    "l-over-a",
    "m",
    "x0",
    "wa-list",
    "l-list",
    "n",
    "alpha-min",
    "alpha-max",
    "points",
    "sweep",
    "times",
    "x-min",
    "x-max",
    "terms",
    "dx",
    "dt",
    "steps",
    "save-every",
    "prominence",
    "unitarity",
    "series",
    "derivative",
    "branch-rel",
    "root-rel",
    "output",
    "keep-going",
];

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let tol = Tolerances::default();
        Self {
            command,
            k0a: 1.0,
            wa: 2.0,
            l_over_a: 0.5,
            m: 1.0,
            x0: -5.0,
            wa_list: vec![1.5, 2.0, 4.0, 6.0, 8.0, 10.0, 20.0],
            l_list: (0..=20).map(|i| i as f64 / 20.0).collect(),
            n: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            alpha_min: 1e-4,
            alpha_max: 50.0,
            points: 801,
            sweep: Sweep::Length,
            times: vec![0.0, 5.0, 10.0],
            x_min: -80.0,
            x_max: 80.0,
            terms: 20,
            dx: 0.02,
            dt: 0.005,
            steps: 1200,
            save_every: 20,
            prominence: 1e-6,
            unitarity: tol.unitarity,
            series: tol.series,
            derivative: tol.derivative,
            branch_rel: tol.branch_rel,
            root_rel: tol.root_rel,
            output: "out".to_string(),
            keep_going: false,
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            unitarity: self.unitarity,
            series: self.series,
            derivative: self.derivative,
            branch_rel: self.branch_rel,
            root_rel: self.root_rel,
        }
    }

    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad = |msg: String| CliError::Parse(format!("{key}: {msg}"));
        let value = value.trim();
        match key {
            "command" => self.command = value.parse().map_err(bad)?,
            "k0a" => self.k0a = float(value).map_err(bad)?,
            "wa" => self.wa = float(value).map_err(bad)?,
            "l-over-a" => self.l_over_a = float(value).map_err(bad)?,
            "m" => self.m = float(value).map_err(bad)?,
            "x0" => self.x0 = float(value).map_err(bad)?,
            "wa-list" => self.wa_list = list(value).map_err(bad)?,
            "l-list" => self.l_list = list(value).map_err(bad)?,
            "n" => self.n = list(value).map_err(bad)?,
            "alpha-min" => self.alpha_min = float(value).map_err(bad)?,
            "alpha-max" => self.alpha_max = float(value).map_err(bad)?,
            "points" => self.points = count(value).map_err(bad)?,
            "sweep" => self.sweep = value.parse().map_err(bad)?,
            "times" => self.times = list(value).map_err(bad)?,
            "x-min" => self.x_min = float(value).map_err(bad)?,
            "x-max" => self.x_max = float(value).map_err(bad)?,
            "terms" => self.terms = count(value).map_err(bad)?,
            "dx" => self.dx = float(value).map_err(bad)?,
            "dt" => self.dt = float(value).map_err(bad)?,
            "steps" => self.steps = count(value).map_err(bad)?,
            "save-every" => self.save_every = count(value).map_err(bad)?,
            "prominence" => self.prominence = float(value).map_err(bad)?,
            "unitarity" => self.unitarity = float(value).map_err(bad)?,
            "series" => self.series = float(value).map_err(bad)?,
            "derivative" => self.derivative = float(value).map_err(bad)?,
            "branch-rel" => self.branch_rel = float(value).map_err(bad)?,
            "root-rel" => self.root_rel = float(value).map_err(bad)?,
            "output" => {
                if value.is_empty() {
                    return Err(bad("must not be empty".into()));
                }
                self.output = value.to_string()
            }
            "keep-going" => self.keep_going = value.parse().map_err(|_| bad(format!("expected true or false, got `{value}`")))?,
            _ => return Err(CliError::Parse(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Text form of one key, as read back by [`RunConfig::set`].
    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "command" => self.command.name().to_string(),
            "k0a" => fmt(self.k0a),
            "wa" => fmt(self.wa),
            "l-over-a" => fmt(self.l_over_a),
            "m" => fmt(self.m),
            "x0" => fmt(self.x0),
            "wa-list" => join(&self.wa_list),
            "l-list" => join(&self.l_list),
            "n" => join(&self.n),
            "alpha-min" => fmt(self.alpha_min),
            "alpha-max" => fmt(self.alpha_max),
            "points" => self.points.to_string(),
            "sweep" => self.sweep.name().to_string(),
            "times" => join(&self.times),
            "x-min" => fmt(self.x_min),
            "x-max" => fmt(self.x_max),
            "terms" => self.terms.to_string(),
            "dx" => fmt(self.dx),
            "dt" => fmt(self.dt),
            "steps" => self.steps.to_string(),
            "save-every" => self.save_every.to_string(),
            "prominence" => fmt(self.prominence),
            "unitarity" => fmt(self.unitarity),
            "series" => fmt(self.series),
            "derivative" => fmt(self.derivative),
            "branch-rel" => fmt(self.branch_rel),
            "root-rel" => fmt(self.root_rel),
            "output" => self.output.clone(),
            "keep-going" => self.keep_going.to_string(),
            _ => return None,
        })
    }

    /// Applies a `key = value` file on top of the current values.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Parse(format!("line {}: expected `key = value`", i + 1)))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for key in KEYS {
            let _ = writeln!(s, "{key} = {}", self.get(key).unwrap_or_default());
        }
        s
    }

    /// Rejects non-physical or unusable values.
    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("k0a", self.k0a),
            ("wa", self.wa),
            ("m", self.m),
            ("alpha-min", self.alpha_min),
            ("alpha-max", self.alpha_max),
            ("dx", self.dx),
            ("dt", self.dt),
            ("prominence", self.prominence),
            ("unitarity", self.unitarity),
            ("series", self.series),
            ("derivative", self.derivative),
            ("branch-rel", self.branch_rel),
            ("root-rel", self.root_rel),
        ];
        for (key, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Parse(format!("{key} must be positive, got {v}")));
            }
        }
        if !(self.l_over_a.is_finite() && self.l_over_a >= 0.0) {
            return Err(CliError::Parse(format!("l-over-a must be non-negative, got {}", self.l_over_a)));
        }
        if self.wa_list.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(CliError::Parse("wa-list entries must be positive".into()));
        }
        if self.l_list.iter().any(|&v| !(v.is_finite() && v >= 0.0)) {
            return Err(CliError::Parse("l-list entries must be non-negative".into()));
        }
        if self.n.iter().any(|&v| !(v > 0.0 && v < 1.0)) {
            return Err(CliError::Parse("n entries must lie in (0, 1)".into()));
        }
        if self.alpha_min >= self.alpha_max {
            return Err(CliError::Parse("alpha-min must be below alpha-max".into()));
        }
        if self.x_min >= self.x_max || !self.x0.is_finite() {
            return Err(CliError::Parse("x-min must be below x-max and x0 finite".into()));
        }
        if self.times.iter().any(|t| !t.is_finite()) {
            return Err(CliError::Parse("times must be finite".into()));
        }
        for (key, v) in [("points", self.points), ("terms", self.terms), ("save-every", self.save_every)] {
            if v == 0 {
                return Err(CliError::Parse(format!("{key} must be at least 1")));
            }
        }
        Ok(())
    }
}

fn float(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("expected a number, got `{s}`"))
}

fn count(s: &str) -> Result<usize, String> {
    s.parse::<usize>().map_err(|_| format!("expected a non-negative integer, got `{s}`"))
}

fn list(s: &str) -> Result<Vec<f64>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|v| float(v.trim())).collect()
}

/// Shortest text that parses back to the same value.
fn fmt(v: f64) -> String {
    format!("{v:?}")
}

fn join(v: &[f64]) -> String {
    v.iter().map(|&x| fmt(x)).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    impl RunConfig {
        fn parse(text: &str) -> Result<Self, CliError> {
            let mut c = RunConfig::new(Command::Validate);
            c.apply_text(text)?;
            c.validate()?;
            Ok(c)
        }
    }

    #[test]
    fn defaults_round_trip() {
        for cmd in Command::ALL {
            let c = RunConfig::new(cmd);
            let text = c.serialize();
            let back = RunConfig::parse(&text).unwrap();
            assert_eq!(back, c);
            assert_eq!(back.serialize(), text);
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = RunConfig::parse("# header\n\ncommand = rates  # trailing\nn = 0.2, 0.4\n").unwrap();
        assert_eq!(c.command, Command::Rates);
        assert_eq!(c.n, vec![0.2, 0.4]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("k0a = -1").is_err());
        assert!(RunConfig::parse("nosuch = 1").is_err());
        assert!(RunConfig::parse("k0a 1").is_err());
        assert!(RunConfig::parse("n = 1.5").is_err());
        assert!(RunConfig::parse("points = 0").is_err());
    }
}
