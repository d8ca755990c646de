//! Key=value configuration files and flag/file/default precedence.
//!
//! Every subcommand accepts `--config FILE`. The file holds one `key = value`
//! pair per line (`#` comments and blank lines ignored). Explicit command-line
//! flags always win over file entries, which win over built-in defaults.

use std::collections::HashMap;
use std::path::Path;

use dephasim_core::Axis;

use crate::CliError;

/// Recognized configuration keys, shared by all subcommands. Subcommands
/// simply ignore keys they have no use for.
const KNOWN_KEYS: [&str; 10] = [
    "a", "tau", "axis", "c1", "c2", "c3", "nu_max", "steps", "seed", "grid",
];

/// Parsed contents of a `--config` file.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    /// Loads and parses a key=value file. Unknown keys and malformed lines
    /// are configuration errors; an unreadable path is an I/O error.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config file {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    line_no + 1
                )));
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!(
                    "{}:{}: unknown key `{key}` (expected one of {})",
                    path.display(),
                    line_no + 1,
                    KNOWN_KEYS.join(", ")
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::Config(format!("config key `{key}`: cannot parse `{raw}`"))
            }),
        }
    }
}

/// Resolves one setting from flag, then file, then default.
fn resolve<T: std::str::FromStr>(
    flag: Option<T>,
    file: &ConfigFile,
    key: &str,
    default: T,
) -> Result<T, CliError> {
    if let Some(v) = flag {
        return Ok(v);
    }
    Ok(file.get(key)?.unwrap_or(default))
}

/// Fully resolved numeric settings for a run. Validation of ranges happens
/// when the values are turned into core types (`ChannelParams`, `CVector`),
/// so this struct only records the merged raw numbers.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub a: f64,
    pub tau: f64,
    pub axis: Axis,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub nu_max: f64,
    pub steps: usize,
    pub seed: u64,
    pub grid: usize,
}

/// Raw optional values coming from clap flags.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub a: Option<f64>,
    pub tau: Option<f64>,
    pub axis: Option<usize>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c3: Option<f64>,
    pub nu_max: Option<f64>,
    pub steps: Option<usize>,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
}

impl Resolved {
    /// Built-in defaults: the telegraph parameters and initial state of the
    /// canonical demonstration run (a = 1 Hz, tau = 5 s, z-axis noise,
    /// c = (1, -0.6, 0.6)), 1000 steps. The default time horizon differs per
    /// subcommand, so it is an argument.
    pub fn merge(
        overrides: Overrides,
        file: &ConfigFile,
        nu_max_default: f64,
    ) -> Result<Self, CliError> {
        let axis_index = resolve(overrides.axis, file, "axis", 3)?;
        let axis = Axis::from_index(axis_index)
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Self {
            a: resolve(overrides.a, file, "a", 1.0)?,
            tau: resolve(overrides.tau, file, "tau", 5.0)?,
            axis,
            c1: resolve(overrides.c1, file, "c1", 1.0)?,
            c2: resolve(overrides.c2, file, "c2", -0.6)?,
            c3: resolve(overrides.c3, file, "c3", 0.6)?,
            nu_max: resolve(overrides.nu_max, file, "nu_max", nu_max_default)?,
            steps: resolve(overrides.steps, file, "steps", 1000)?,
            seed: resolve(overrides.seed, file, "seed", 0)?,
            grid: resolve(overrides.grid, file, "grid", 10_000)?,
        })
    }
}
