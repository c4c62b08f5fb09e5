use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::KineticVariant;
use crate::numerics::{ExactReal, MIN_DIGITS};

pub const DEFAULT_STATES: usize = 20;
pub const DEFAULT_PRECISION: u32 = 300;
pub const DEFAULT_CHECK_INCREMENT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(OutputFormat::Text),
            "json" | "structured" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Json => "json",
        })
    }
}

/// Everything needed for one solve of the quartic problem.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lambda: ExactReal,
    pub states: usize,
    pub mesh_points: usize,
    /// Working precision in decimal digits.
    pub precision: u32,
    pub variant: KineticVariant,
    pub scaling: ExactReal,
    /// Extra mesh points for the self-check run; `None` disables it and
    /// `Some(0)` repeats the run at the same size.
    pub check_increment: Option<usize>,
    pub want_vectors: bool,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(lambda: ExactReal, mesh_points: usize) -> Self {
        RunConfig {
            lambda,
            states: DEFAULT_STATES,
            mesh_points,
            precision: DEFAULT_PRECISION,
            variant: KineticVariant::default(),
            scaling: ExactReal::from_integer(1),
            check_increment: Some(DEFAULT_CHECK_INCREMENT),
            want_vectors: false,
            format: OutputFormat::Text,
        }
    }

    pub fn with_states(mut self, states: usize) -> Self {
        self.states = states;
        self
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = precision;
        self
    }

    pub fn with_variant(mut self, variant: KineticVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_scaling(mut self, scaling: ExactReal) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn with_check_increment(mut self, delta: Option<usize>) -> Self {
        self.check_increment = delta;
        self
    }

    pub fn with_vectors(mut self, want: bool) -> Self {
        self.want_vectors = want;
        self
    }

    /// Checks the ranges of every field.
    ///
    /// `states <= mesh_points / 2` is only enforced when the self-check is on;
    /// without it the caller is asking for raw matrix eigenvalues.
    pub fn validate(&self) -> Result<()> {
        if self.mesh_points == 0 {
            return Err(Error::Config("mesh_points must be at least 1".into()));
        }
        if self.states == 0 {
            return Err(Error::Config("states must be at least 1".into()));
        }
        if self.states > self.mesh_points {
            return Err(Error::Config(format!(
                "{} states requested from a {}-point mesh",
                self.states, self.mesh_points
            )));
        }
        if self.check_increment.is_some() && self.states > self.mesh_points / 2 {
            return Err(Error::Config(format!(
                "{} states requested but only {} are trusted on a {}-point mesh",
                self.states,
                self.mesh_points / 2,
                self.mesh_points
            )));
        }
        if self.precision < MIN_DIGITS {
            return Err(Error::Config(format!(
                "precision must be at least {MIN_DIGITS} digits"
            )));
        }
        if self.scaling.cmp_zero() != std::cmp::Ordering::Greater {
            return Err(Error::Config("scaling must be positive".into()));
        }
        Ok(())
    }

    /// Applies one `key = value` setting. Keys use the CLI flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let key = key.trim().replace('_', "-");
        match key.as_str() {
            "lambda" => self.lambda = value.parse()?,
            "states" => self.states = parse_count(&key, value)?,
            "mesh-points" => self.mesh_points = parse_count(&key, value)?,
            "precision" => {
                self.precision = u32::try_from(parse_count(&key, value)?)
                    .map_err(|_| Error::Config(format!("{key}: {value} is out of range")))?
            }
            "variant" => self.variant = value.parse()?,
            "scaling" => self.scaling = value.parse()?,
            "check-increment" => {
                self.check_increment = match value {
                    "off" | "none" => None,
                    v => Some(parse_count(&key, v)?),
                }
            }
            "vectors" => self.want_vectors = parse_flag(&key, value)?,
            "format" => self.format = value.parse()?,
            _ => return Err(Error::Config(format!("unknown setting {key:?}"))),
        }
        Ok(())
    }
}

fn parse_count(key: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: expected a non-negative integer, got {value:?}")))
}

fn parse_flag(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got {value:?}"))),
    }
}

/// Parses a config file of `key = value` lines. `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(Error::Config(format!("line {}: empty key or value", lineno + 1)));
        }
        pairs.push((key.to_string(), value.to_string()));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> RunConfig {
        RunConfig::new(ExactReal::from_integer(1), 100)
    }

    #[test]
    fn defaults() {
        let c = base();
        assert_eq!(c.states, 20);
        assert_eq!(c.precision, 300);
        assert_eq!(c.check_increment, Some(20));
        assert_eq!(c.scaling, ExactReal::from_integer(1));
        assert!(c.validate().is_ok());
    }

    #[test]
    fn trust_region_only_with_self_check() {
        let c = RunConfig::new(ExactReal::from_integer(1), 2).with_states(2);
        assert!(c.validate().is_err());
        assert!(c.clone().with_check_increment(None).validate().is_ok());
        assert!(c.with_check_increment(None).with_states(3).validate().is_err());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(base().with_precision(10).validate().is_err());
        assert!(base().with_scaling(ExactReal::from_integer(0)).validate().is_err());
        assert!(base().with_states(0).validate().is_err());
        assert!(RunConfig::new(ExactReal::from_integer(1), 0).validate().is_err());
    }

    #[test]
    fn file_settings() {
        let text = "# run\nlambda = -1/2\nmesh_points = 40  # small\n\nvariant=gauss\ncheck-increment = off\nvectors = true\nformat = json\n";
        let mut c = base();
        for (k, v) in parse_config_file(text).unwrap() {
            c.set(&k, &v).unwrap();
        }
        assert_eq!(c.lambda, "-1/2".parse().unwrap());
        assert_eq!(c.mesh_points, 40);
        assert_eq!(c.variant, KineticVariant::GaussApprox);
        assert_eq!(c.check_increment, None);
        assert!(c.want_vectors);
        assert_eq!(c.format, OutputFormat::Json);
    }

    #[test]
    fn file_errors() {
        assert!(parse_config_file("lambda\n").is_err());
        assert!(parse_config_file("= 3\n").is_err());
        assert!(base().set("colour", "blue").is_err());
        assert!(base().set("states", "-3").is_err());
        assert!(base().set("vectors", "maybe").is_err());
        assert!(base().set("precision", "5000000000").is_err());
    }
}
