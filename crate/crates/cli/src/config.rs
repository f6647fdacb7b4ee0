use std::path::Path;

use congruent_core::oracle::{DEFAULT_TRIANGLE_BOUND, DEFAULT_TUPLE_BOUND};
use congruent_core::report::ReportConfig;
use serde::Deserialize;

/// Defaults read from an optional TOML file. Command-line flags win.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub tuple_bound: u64,
    pub triangle_bound: u64,
    pub descent_bound: u64,
    pub tunnell_max_n: u64,
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        let report = ReportConfig::default();
        Config {
            tuple_bound: DEFAULT_TUPLE_BOUND,
            triangle_bound: DEFAULT_TRIANGLE_BOUND,
            descent_bound: report.descent_bound,
            tunnell_max_n: report.tunnell_max_n,
            workers: 1,
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config, String> {
        let Some(path) = path else { return Ok(Config::default()) };
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cfg: Config = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        log::debug!("loaded {cfg:?} from {}", path.display());
        Ok(cfg)
    }

    pub fn report(&self) -> ReportConfig {
        ReportConfig {
            tunnell_max_n: self.tunnell_max_n,
            tuple_bound: self.tuple_bound,
            descent_bound: self.descent_bound,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg: Config = toml::from_str("tuple_bound = 40").unwrap();
        assert_eq!(cfg.tuple_bound, 40);
        assert_eq!(cfg.triangle_bound, DEFAULT_TRIANGLE_BOUND);
        assert!(toml::from_str::<Config>("bogus = 1").is_err());
    }
}
