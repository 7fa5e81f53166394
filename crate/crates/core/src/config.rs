//! `key = value` run configuration.
//!
//! ```text
//! # comments start with '#'
//! family = PSI            # PSI | PHI
//! alpha = pi/12, pi/8, pi/4
//! epsilon = 0, 2
//! T_max = 20
//! n_points = 2000
//! path = ANALYTIC         # ANALYTIC | ORACLE | BOTH
//! output_dir = out
//! svg = true
//! zero_threshold = 1e-9
//! lambda = 2              # omega_0 / g, enters phases only
//! n_max = 2
//! ladder = unit           # unit | bosonic
//! ```
//!
//! Angles accept plain numbers or multiples of `pi` (`pi/8`, `3*pi/8`,
//! `3pi/8`, `0.5*pi`).

use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::PathBuf;

use crate::analysis::{linspace, DEFAULT_POINTS, DEFAULT_T_MAX, DEFAULT_ZERO_THRESHOLD};
use crate::model::{Family, LadderScaling, ModelParams};
use crate::{Error, Result};

/// Which path(s) a command evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathChoice {
    Analytic,
    Oracle,
    Both,
}

/// Angles used by the figure commands when none are configured.
pub const FIGURE_ALPHAS: [(&str, f64); 3] =
    [("pi/12", PI / 12.0), ("pi/8", PI / 8.0), ("pi/4", FRAC_PI_4)];
pub const FIGURE_EPSILONS: [(&str, f64); 2] = [("0", 0.0), ("2", 2.0)];
pub const DEFAULT_LAMBDA: f64 = 2.0;

/// A value together with the text it was written as (used in file names).
#[derive(Debug, Clone, PartialEq)]
pub struct Labeled {
    pub label: String,
    pub value: f64,
}

impl Labeled {
    fn from_pairs(pairs: &[(&str, f64)]) -> Vec<Labeled> {
        pairs
            .iter()
            .map(|&(l, v)| Labeled {
                label: l.to_string(),
                value: v,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: Option<Family>,
    pub alphas: Option<Vec<Labeled>>,
    pub epsilons: Option<Vec<Labeled>>,
    pub t_max: f64,
    pub n_points: usize,
    pub path: PathChoice,
    pub output_dir: PathBuf,
    pub emit_svg: bool,
    pub zero_threshold: f64,
    pub lambda: f64,
    pub n_max: usize,
    pub ladder: LadderScaling,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: None,
            alphas: None,
            epsilons: None,
            t_max: DEFAULT_T_MAX,
            n_points: DEFAULT_POINTS,
            path: PathChoice::Analytic,
            output_dir: PathBuf::from("out"),
            emit_svg: false,
            zero_threshold: DEFAULT_ZERO_THRESHOLD,
            lambda: DEFAULT_LAMBDA,
            n_max: 2,
            ladder: LadderScaling::Unit,
        }
    }
}

impl RunConfig {
    /// Configured family, `PSI` when unset.
    pub fn family(&self) -> Family {
        self.family.unwrap_or(Family::Psi)
    }

    /// Configured angles, `[pi/4]` when unset.
    pub fn alpha_list(&self) -> Vec<Labeled> {
        self.alphas
            .clone()
            .unwrap_or_else(|| Labeled::from_pairs(&[("pi/4", FRAC_PI_4)]))
    }

    /// Configured dipole ratios, `[0]` when unset.
    pub fn epsilon_list(&self) -> Vec<Labeled> {
        self.epsilons
            .clone()
            .unwrap_or_else(|| Labeled::from_pairs(&[("0", 0.0)]))
    }

    /// Angles for the figure commands: configured, or [`FIGURE_ALPHAS`].
    pub fn figure_alphas(&self) -> Vec<Labeled> {
        self.alphas
            .clone()
            .unwrap_or_else(|| Labeled::from_pairs(&FIGURE_ALPHAS))
    }

    pub fn figure_epsilons(&self) -> Vec<Labeled> {
        self.epsilons
            .clone()
            .unwrap_or_else(|| Labeled::from_pairs(&FIGURE_EPSILONS))
    }

    pub fn t_grid(&self) -> Vec<f64> {
        linspace(0.0, self.t_max, self.n_points)
    }

    /// Model parameters in units of `g` for one dipole ratio.
    pub fn params(&self, epsilon: f64) -> Result<ModelParams> {
        Ok(ModelParams::dimensionless(epsilon, self.lambda, self.n_max)?.with_ladder(self.ladder))
    }
}

/// Parses an angle: a number or a multiple of `pi`.
pub fn parse_angle(text: &str) -> Option<f64> {
    let s: String = text.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
    let Some(pos) = s.find("pi") else {
        return s.parse().ok().filter(|v: &f64| v.is_finite());
    };
    let (head, tail) = (&s[..pos], &s[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coefficient = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().ok()?,
    };
    let value = if tail.is_empty() {
        coefficient * PI
    } else if let Some(d) = tail.strip_prefix('/') {
        coefficient * PI / d.parse::<f64>().ok().filter(|d| *d != 0.0)?
    } else {
        coefficient * PI * tail.strip_prefix('*')?.parse::<f64>().ok()?
    };
    value.is_finite().then_some(value)
}

const KEYS: [&str; 12] = [
    "family",
    "alpha",
    "epsilon",
    "T_max",
    "n_points",
    "path",
    "output_dir",
    "svg",
    "zero_threshold",
    "lambda",
    "n_max",
    "ladder",
];

/// Parses configuration text. Every error names the line and key.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |key: &str, message: String| Error::Config {
            line,
            key: key.to_string(),
            message,
        };
        let Some((key, value)) = content.split_once('=') else {
            return Err(err(content, "expected `key = value`".into()));
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(&key) = KEYS.iter().find(|k| k.eq_ignore_ascii_case(key)) else {
            return Err(err(key, "unknown key".into()));
        };
        if !seen.insert(key) {
            return Err(err(key, "duplicate key".into()));
        }
        if value.is_empty() {
            return Err(err(key, "missing value".into()));
        }
        let number = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| err(key, format!("`{v}` is not a number")))
        };

        match key {
            "family" => cfg.family = Some(value.parse().map_err(|m| err(key, m))?),
            "alpha" => {
                let mut list = Vec::new();
                for item in value.split(',').map(str::trim) {
                    let v = parse_angle(item)
                        .ok_or_else(|| err(key, format!("`{item}` is not an angle")))?;
                    if !(0.0..=FRAC_PI_2 + 1e-15).contains(&v) {
                        return Err(err(key, format!("{item} is outside [0, pi/2]")));
                    }
                    list.push(Labeled {
                        label: item.to_string(),
                        value: v,
                    });
                }
                cfg.alphas = Some(list);
            }
            "epsilon" => {
                let mut list = Vec::new();
                for item in value.split(',').map(str::trim) {
                    let v = number(item)?;
                    if v < 0.0 {
                        return Err(err(key, format!("{item} is negative")));
                    }
                    list.push(Labeled {
                        label: item.to_string(),
                        value: v,
                    });
                }
                cfg.epsilons = Some(list);
            }
            "T_max" => {
                cfg.t_max = number(value)?;
                if cfg.t_max <= 0.0 {
                    return Err(err(key, "must be positive".into()));
                }
            }
            "n_points" => {
                cfg.n_points = value
                    .parse()
                    .map_err(|_| err(key, format!("`{value}` is not an integer")))?;
                if cfg.n_points < 2 {
                    return Err(err(key, "must be at least 2".into()));
                }
            }
            "path" => {
                cfg.path = match value.to_ascii_uppercase().as_str() {
                    "ANALYTIC" => PathChoice::Analytic,
                    "ORACLE" => PathChoice::Oracle,
                    "BOTH" => PathChoice::Both,
                    _ => return Err(err(key, format!("`{value}` is not ANALYTIC, ORACLE or BOTH"))),
                }
            }
            "output_dir" => cfg.output_dir = PathBuf::from(value),
            "svg" => {
                cfg.emit_svg = match value.to_ascii_lowercase().as_str() {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => return Err(err(key, format!("`{value}` is not a boolean"))),
                }
            }
            "zero_threshold" => {
                cfg.zero_threshold = number(value)?;
                if cfg.zero_threshold <= 0.0 {
                    return Err(err(key, "must be positive".into()));
                }
            }
            "lambda" => cfg.lambda = number(value)?,
            "n_max" => {
                cfg.n_max = value
                    .parse()
                    .map_err(|_| err(key, format!("`{value}` is not an integer")))?;
                if cfg.n_max < 2 {
                    return Err(err(key, "must be at least 2".into()));
                }
            }
            "ladder" => {
                cfg.ladder = match value.to_ascii_lowercase().as_str() {
                    "unit" => LadderScaling::Unit,
                    "bosonic" => LadderScaling::Bosonic,
                    _ => return Err(err(key, format!("`{value}` is not unit or bosonic"))),
                }
            }
            _ => unreachable!("key list and match arms agree"),
        }
    }
    Ok(cfg)
}
