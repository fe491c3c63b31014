//! `key = value` configuration with `#` comments.

use std::path::Path;

pub const ENV_VAR: &str = "WSUB_CONFIG";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub qmax: i64,
    pub zmax: i64,
    /// Largest rank accepted by verbs that compute OPEs.
    pub max_n_ope: usize,
    /// Largest rank accepted by `central-charges`.
    pub max_n_cc: usize,
    /// Worker threads; 0 leaves the pool at its default size.
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { qmax: 10, zmax: 10, max_n_ope: 4, max_n_cc: 6, threads: 0 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ConfigError::Syntax { line: i + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let int = |v: &str| v.parse::<i64>().map_err(|_| err(format!("`{key}` needs an integer, got `{v}`")));
            let nonneg = |v: &str| -> Result<usize, ConfigError> {
                usize::try_from(int(v)?).map_err(|_| err(format!("`{key}` must be nonnegative")))
            };
            match key {
                "qmax" => cfg.qmax = nonneg(value)? as i64,
                "zmax" => cfg.zmax = nonneg(value)? as i64,
                "max_n_ope" => cfg.max_n_ope = nonneg(value)?,
                "max_n_cc" => cfg.max_n_cc = nonneg(value)?,
                "threads" => cfg.threads = nonneg(value)?,
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        Config::parse(&text)
    }

    /// The file named by `--config`, else by `WSUB_CONFIG`, else the defaults.
    pub fn resolve(flag: Option<&Path>) -> Result<Config, ConfigError> {
        match flag {
            Some(p) => Config::load(p),
            None => match std::env::var_os(ENV_VAR) {
                Some(p) if !p.is_empty() => Config::load(Path::new(&p)),
                _ => Ok(Config::default()),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let c = Config::parse("# caps\nqmax = 4\n zmax=3 # inline\nthreads = 2\n\nmax_n_ope = 3\n").unwrap();
        assert_eq!(c, Config { qmax: 4, zmax: 3, max_n_ope: 3, max_n_cc: 6, threads: 2 });
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(Config::parse("qmax 4"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(Config::parse("\nfoo = 1"), Err(ConfigError::Syntax { line: 2, .. })));
        assert!(Config::parse("qmax = -1").is_err());
        assert!(Config::parse("threads = two").is_err());
    }
}
