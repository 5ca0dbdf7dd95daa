//! Run configuration assembled from three layers: built-in defaults, an
//! optional `key = value` file, and command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cavent_core::model::ModelParams;
use cavent_core::C64;
use clap::Args;

use crate::error::{CliError, CliResult};

/// A model parameter that can be swept or set by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamName {
    Omega,
    Omega0,
    OmegaC,
    G,
    Lambda,
    Kappa,
    AlphaRe,
    AlphaIm,
}

impl ParamName {
    pub const ALL: [ParamName; 8] = [
        ParamName::Omega,
        ParamName::Omega0,
        ParamName::OmegaC,
        ParamName::G,
        ParamName::Lambda,
        ParamName::Kappa,
        ParamName::AlphaRe,
        ParamName::AlphaIm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParamName::Omega => "omega",
            ParamName::Omega0 => "omega0",
            ParamName::OmegaC => "omega_c",
            ParamName::G => "g",
            ParamName::Lambda => "lambda",
            ParamName::Kappa => "kappa",
            ParamName::AlphaRe => "alpha_re",
            ParamName::AlphaIm => "alpha_im",
        }
    }

    pub fn set(self, p: &mut ModelParams, v: f64) {
        match self {
            ParamName::Omega => p.omega = v,
            ParamName::Omega0 => p.omega0 = v,
            ParamName::OmegaC => p.omega_c = v,
            ParamName::G => p.g = v,
            ParamName::Lambda => p.lam = v,
            ParamName::Kappa => p.kappa = v,
            ParamName::AlphaRe => p.alpha.re = v,
            ParamName::AlphaIm => p.alpha.im = v,
        }
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParamName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().replace('-', "_");
        ParamName::ALL
            .into_iter()
            .find(|p| p.as_str() == key)
            .ok_or_else(|| format!("unknown parameter `{s}`"))
    }
}

/// Sweep axis written `name:min:max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub name: ParamName,
    pub min: f64,
    pub max: f64,
}

impl Axis {
    /// `points` evenly spaced values from `min` to `max`; a single point sits at `min`.
    pub fn values(&self, points: usize) -> Vec<f64> {
        cavent_core::liouville::time_grid(self.min, self.max, points)
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, min, max] = parts[..] else {
            return Err(format!("axis `{s}` must look like name:min:max"));
        };
        let min: f64 = min.trim().parse().map_err(|e| format!("axis minimum `{min}`: {e}"))?;
        let max: f64 = max.trim().parse().map_err(|e| format!("axis maximum `{max}`: {e}"))?;
        if !(min.is_finite() && max.is_finite() && min <= max) {
            return Err(format!("axis `{s}` needs finite bounds with min <= max"));
        }
        Ok(Axis { name: name.parse()?, min, max })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:e}:{:e}", self.name, self.min, self.max)
    }
}

/// Grid resolution written `<n1>x<n2>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid(pub usize, pub usize);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("grid `{s}` must look like <n1>x<n2>"))?;
        let n1: usize = a.trim().parse().map_err(|e| format!("grid `{s}`: {e}"))?;
        let n2: usize = b.trim().parse().map_err(|e| format!("grid `{s}`: {e}"))?;
        if n1 == 0 || n2 == 0 {
            return Err(format!("grid `{s}` needs at least one point per axis"));
        }
        Ok(Grid(n1, n2))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.0, self.1)
    }
}

/// One configuration layer. Every field is optional so layers can be stacked.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Layer {
    /// Driving frequency of the cavity field ω
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Atomic transition frequency ω0
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega0: Option<f64>,
    /// Classical field frequency ωc
    #[arg(long = "omega-c", global = true, allow_hyphen_values = true)]
    pub omega_c: Option<f64>,
    /// Atom-cavity coupling g
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub g: Option<f64>,
    /// Classical driving strength λ
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Cavity decay rate k
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    #[arg(long = "alpha-re", global = true, allow_hyphen_values = true)]
    pub alpha_re: Option<f64>,
    #[arg(long = "alpha-im", global = true, allow_hyphen_values = true)]
    pub alpha_im: Option<f64>,
    #[arg(long = "c0-re", global = true, allow_hyphen_values = true)]
    pub c0_re: Option<f64>,
    #[arg(long = "c0-im", global = true, allow_hyphen_values = true)]
    pub c0_im: Option<f64>,
    #[arg(long = "c1-re", global = true, allow_hyphen_values = true)]
    pub c1_re: Option<f64>,
    #[arg(long = "c1-im", global = true, allow_hyphen_values = true)]
    pub c1_im: Option<f64>,
    #[arg(long = "t-start", global = true, allow_hyphen_values = true)]
    pub t_start: Option<f64>,
    #[arg(long = "t-end", global = true, allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    /// Number of time samples (at least 2)
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Fock-space cutoff for the integrated oracle
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Integrator tolerance for the oracle
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Also integrate the master equation and emit numeric columns
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub oracle: Option<bool>,
    /// Output file, or directory for the figure commands
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Sweep resolution `<n1>x<n2>`
    #[arg(long, global = true)]
    pub grid: Option<Grid>,
    /// First sweep axis `name:min:max` (rows)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub axis1: Option<Axis>,
    /// Second sweep axis `name:min:max` (columns)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub axis2: Option<Axis>,
    /// Evaluation time of a sweep (default 1/g)
    #[arg(long, global = true)]
    pub time: Option<f64>,
    /// Worker threads for sweeps (1 forces sequential evaluation)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

macro_rules! overlay {
    ($upper:expr, $lower:expr, $($field:ident),* $(,)?) => {
        Layer { $($field: $upper.$field.or($lower.$field)),* }
    };
}

impl Layer {
    /// Fields set in `self` win over those in `lower`.
    pub fn over(self, lower: Layer) -> Layer {
        overlay!(
            self, lower, omega, omega0, omega_c, g, lambda, kappa, alpha_re, alpha_im, c0_re, c0_im, c1_re, c1_im,
            t_start, t_end, steps, nmax, tol, oracle, output, grid, axis1, axis2, time, threads,
        )
    }

    /// Parses the `key = value` format. Keys are the flag names with either
    /// `-` or `_` separators; `#` starts a comment.
    pub fn parse_file_contents(text: &str) -> CliResult<Layer> {
        let mut layer = Layer::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| CliError::Invalid(format!("config line {}: {msg}", lineno + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad(format!("expected key = value, got `{line}`")))?;
            layer.set(&key.trim().replace('-', "_"), value.trim()).map_err(bad)?;
        }
        Ok(layer)
    }

    pub fn from_file(path: &Path) -> CliResult<Layer> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_file_contents(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<Option<T>, String>
        where
            T::Err: fmt::Display,
        {
            value.parse().map(Some).map_err(|e| format!("{key}: cannot parse `{value}`: {e}"))
        }
        match key {
            "omega" => self.omega = parse(key, value)?,
            "omega0" => self.omega0 = parse(key, value)?,
            "omega_c" => self.omega_c = parse(key, value)?,
            "g" => self.g = parse(key, value)?,
            "lambda" => self.lambda = parse(key, value)?,
            "kappa" => self.kappa = parse(key, value)?,
            "alpha_re" => self.alpha_re = parse(key, value)?,
            "alpha_im" => self.alpha_im = parse(key, value)?,
            "c0_re" => self.c0_re = parse(key, value)?,
            "c0_im" => self.c0_im = parse(key, value)?,
            "c1_re" => self.c1_re = parse(key, value)?,
            "c1_im" => self.c1_im = parse(key, value)?,
            "t_start" => self.t_start = parse(key, value)?,
            "t_end" => self.t_end = parse(key, value)?,
            "steps" => self.steps = parse(key, value)?,
            "nmax" => self.nmax = parse(key, value)?,
            "tol" => self.tol = parse(key, value)?,
            "oracle" => self.oracle = parse(key, value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            "grid" => self.grid = parse(key, value)?,
            "axis1" => self.axis1 = parse(key, value)?,
            "axis2" => self.axis2 = parse(key, value)?,
            "time" => self.time = parse(key, value)?,
            "threads" => self.threads = parse(key, value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }
}

/// Time grid used when no layer sets one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeDefaults {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
}

impl TimeDefaults {
    /// `[0, 3/g]` with 600 samples, several concurrence periods at the default parameters.
    pub fn periods(g: f64) -> Self {
        Self { t_start: 0.0, t_end: 3.0 / g, steps: 600 }
    }
}

pub const DEFAULT_TOL: f64 = cavent_core::liouville::master::DEFAULT_TOL;
pub const DEFAULT_GRID: Grid = Grid(101, 101);

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    /// `None` picks a cutoff from `|α|`.
    pub nmax: Option<usize>,
    pub tol: f64,
    pub oracle: bool,
    pub output: Option<PathBuf>,
    pub grid: Grid,
    pub axis1: Option<Axis>,
    pub axis2: Option<Axis>,
    pub time: Option<f64>,
    pub threads: Option<usize>,
}

impl RunConfig {
    /// Fills the gaps of `layer` from the defaults. `time` computes the time
    /// grid defaults from the resolved model parameters.
    pub fn resolve(layer: &Layer, time: impl FnOnce(&ModelParams) -> TimeDefaults) -> CliResult<RunConfig> {
        let d = ModelParams::default();
        let params = ModelParams {
            omega: layer.omega.unwrap_or(d.omega),
            omega0: layer.omega0.unwrap_or(d.omega0),
            omega_c: layer.omega_c.unwrap_or(d.omega_c),
            g: layer.g.unwrap_or(d.g),
            lam: layer.lambda.unwrap_or(d.lam),
            kappa: layer.kappa.unwrap_or(d.kappa),
            alpha: C64::new(layer.alpha_re.unwrap_or(d.alpha.re), layer.alpha_im.unwrap_or(d.alpha.im)),
            c0: C64::new(layer.c0_re.unwrap_or(d.c0.re), layer.c0_im.unwrap_or(d.c0.im)),
            c1: C64::new(layer.c1_re.unwrap_or(d.c1.re), layer.c1_im.unwrap_or(d.c1.im)),
        };
        params.validate()?;
        let td = time(&params);
        let cfg = RunConfig {
            t_start: layer.t_start.unwrap_or(td.t_start),
            t_end: layer.t_end.unwrap_or(td.t_end),
            steps: layer.steps.unwrap_or(td.steps),
            nmax: layer.nmax,
            tol: layer.tol.unwrap_or(DEFAULT_TOL),
            oracle: layer.oracle.unwrap_or(false),
            output: layer.output.clone(),
            grid: layer.grid.unwrap_or(DEFAULT_GRID),
            axis1: layer.axis1,
            axis2: layer.axis2,
            time: layer.time,
            threads: layer.threads,
            params,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        let bad = |m: &str| Err(CliError::Invalid(m.to_string()));
        if !(self.t_start >= 0.0 && self.t_start.is_finite() && self.t_end.is_finite()) {
            return bad("t-start must be finite and non-negative, t-end finite");
        }
        if self.t_end < self.t_start {
            return bad("t-end must not precede t-start");
        }
        if self.steps < 2 {
            return bad("steps must be at least 2");
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad("tol must lie in (0, 1)");
        }
        if let Some(t) = self.time {
            if !(t >= 0.0 && t.is_finite()) {
                return bad("time must be finite and non-negative");
            }
        }
        if self.threads == Some(0) {
            return bad("threads must be positive");
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        cavent_core::liouville::time_grid(self.t_start, self.t_end, self.steps)
    }

    /// `(name, value)` pairs describing the full model parameter set.
    pub fn parameter_metadata(&self) -> Vec<(String, String)> {
        parameter_metadata(&self.params)
    }
}

pub fn parameter_metadata(p: &ModelParams) -> Vec<(String, String)> {
    let f = |v: f64| crate::output::format_float(v);
    vec![
        ("omega".into(), f(p.omega)),
        ("omega0".into(), f(p.omega0)),
        ("omega_c".into(), f(p.omega_c)),
        ("g".into(), f(p.g)),
        ("lambda".into(), f(p.lam)),
        ("kappa".into(), f(p.kappa)),
        ("alpha_re".into(), f(p.alpha.re)),
        ("alpha_im".into(), f(p.alpha.im)),
        ("c0_re".into(), f(p.c0.re)),
        ("c0_im".into(), f(p.c0.im)),
        ("c1_re".into(), f(p.c1.re)),
        ("c1_im".into(), f(p.c1.im)),
    ]
}
