use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::Config(format!(
                "unknown format '{other}' (csv | json)"
            ))),
        }
    }
}

/// A number or a ratio such as `1/3`.
pub fn parse_ratio(s: &str) -> std::result::Result<f64, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("not a number: '{s}'"))
    };
    match s.split_once('/') {
        Some((a, b)) => {
            let d = num(b)?;
            if d == 0.0 {
                return Err(format!("zero denominator in '{s}'"));
            }
            Ok(num(a)? / d)
        }
        None => num(s),
    }
}

/// How the blend parameter is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PhiChoice {
    #[default]
    Network,
    Fixed(f64),
    /// minimize the calibration functional at the similarity `p`
    Calibrate,
}

impl FromStr for PhiChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "network" | "net" => Ok(PhiChoice::Network),
            "calibrate" => Ok(PhiChoice::Calibrate),
            v => {
                let phi: f64 = v.parse().map_err(|_| {
                    CliError::Config(format!(
                        "--phi expects network, calibrate or a number, got '{s}'"
                    ))
                })?;
                if !(0.0..=1.0).contains(&phi) {
                    return Err(CliError::Config(format!(
                        "--phi must lie in [0, 1], got {phi}"
                    )));
                }
                Ok(PhiChoice::Fixed(phi))
            }
        }
    }
}

impl std::fmt::Display for PhiChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhiChoice::Network => f.write_str("network"),
            PhiChoice::Calibrate => f.write_str("calibrate"),
            PhiChoice::Fixed(v) => write!(f, "{v}"),
        }
    }
}

/// Run configuration as read from a JSON file or collected from flags.
/// Every field is optional; flags take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub tau0_factor: Option<f64>,
    pub phi: Option<String>,
    pub epsilon: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub tau: Option<f64>,
    pub verbose: Option<bool>,
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        RunConfig {
            alpha: self.alpha.or(base.alpha),
            lambda: self.lambda.or(base.lambda),
            m: self.m.or(base.m),
            n: self.n.or(base.n),
            tau0_factor: self.tau0_factor.or(base.tau0_factor),
            phi: self.phi.or(base.phi),
            epsilon: self.epsilon.or(base.epsilon),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            tau: self.tau.or(base.tau),
            verbose: self.verbose.or(base.verbose),
        }
    }

    /// Fills defaults and validates domains.
    pub fn settings(&self) -> Result<Settings> {
        let s = Settings {
            alpha: self.alpha.unwrap_or(0.5),
            lambda: self.lambda.unwrap_or(1.0 / 3.0),
            m: self.m.unwrap_or(80),
            n: self.n.unwrap_or(240),
            tau0_factor: self
                .tau0_factor
                .unwrap_or(fstefan::scheme::DEFAULT_TAU0_FACTOR),
            phi: self
                .phi
                .as_deref()
                .map(str::parse)
                .transpose()?
                .unwrap_or_default(),
            epsilon: self.epsilon.unwrap_or(1e-3),
            format: self.format.unwrap_or_default(),
            tau: self.tau,
            verbose: self.verbose.unwrap_or(false),
        };
        if !(s.alpha > 0.0 && s.alpha <= 1.0) {
            return Err(CliError::Config(format!(
                "--alpha must lie in (0, 1], got {}",
                s.alpha
            )));
        }
        if !(s.lambda > 0.0 && s.lambda.is_finite()) {
            return Err(CliError::Config(format!(
                "--lambda must be positive, got {}",
                s.lambda
            )));
        }
        if s.m < 2 || s.n < 1 {
            return Err(CliError::Config(format!(
                "need m >= 2 and n >= 1, got m = {}, n = {}",
                s.m, s.n
            )));
        }
        if !(s.tau0_factor > 0.0 && s.tau0_factor < 1.0) {
            return Err(CliError::Config(format!(
                "--tau0-factor must lie in (0, 1), got {}",
                s.tau0_factor
            )));
        }
        if !(s.epsilon > 0.0) {
            return Err(CliError::Config(format!(
                "--epsilon must be positive, got {}",
                s.epsilon
            )));
        }
        Ok(s)
    }
}

/// Validated run settings with defaults applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub alpha: f64,
    pub lambda: f64,
    pub m: usize,
    pub n: usize,
    pub tau0_factor: f64,
    pub phi: PhiChoice,
    pub epsilon: f64,
    pub format: OutputFormat,
    pub tau: Option<f64>,
    pub verbose: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        assert_eq!(parse_ratio("1/3").unwrap(), 1.0 / 3.0);
        assert_eq!(parse_ratio(" 0.75 ").unwrap(), 0.75);
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("a/3").is_err());
    }

    #[test]
    fn phi_parsing() {
        assert_eq!("network".parse::<PhiChoice>().unwrap(), PhiChoice::Network);
        assert_eq!(
            "calibrate".parse::<PhiChoice>().unwrap(),
            PhiChoice::Calibrate
        );
        assert_eq!("0.25".parse::<PhiChoice>().unwrap(), PhiChoice::Fixed(0.25));
        assert!("1.5".parse::<PhiChoice>().is_err());
        assert!("sometimes".parse::<PhiChoice>().is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = RunConfig {
            alpha: Some(0.25),
            m: Some(40),
            phi: Some("1".into()),
            ..RunConfig::default()
        };
        let flags = RunConfig {
            alpha: Some(0.75),
            ..RunConfig::default()
        };
        let s = flags.over(file).settings().unwrap();
        assert_eq!(s.alpha, 0.75);
        assert_eq!(s.m, 40);
        assert_eq!(s.n, 240);
        assert_eq!(s.phi, PhiChoice::Fixed(1.0));
    }

    #[test]
    fn json_schema_round_trip() {
        let cfg = RunConfig {
            alpha: Some(0.5),
            lambda: Some(2.0 / 3.0),
            format: Some(OutputFormat::Json),
            phi: Some("network".into()),
            ..RunConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
        assert!(serde_json::from_str::<RunConfig>(r#"{"alpah": 0.5}"#).is_err());
    }

    #[test]
    fn invalid_settings() {
        let bad = RunConfig {
            alpha: Some(1.5),
            ..RunConfig::default()
        };
        assert!(bad.settings().is_err());
        let bad = RunConfig {
            m: Some(1),
            ..RunConfig::default()
        };
        assert!(bad.settings().is_err());
    }
}
