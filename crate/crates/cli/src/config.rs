//! Flat `key = value` files. Keys are long flag names without the dashes;
//! `true` and `false` switch boolean flags.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::Usage;

#[derive(Debug, Default, Clone, PartialEq)]
pub struct ConfigFile {
    pub entries: Vec<(String, String)>,
}

impl ConfigFile {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Usage(format!("{}:{}: expected key = value", origin.display(), i + 1)).into());
            };
            let (k, v) = (k.trim().trim_start_matches("--"), v.trim());
            if k.is_empty() {
                return Err(Usage(format!("{}:{}: empty key", origin.display(), i + 1)).into());
            }
            entries.push((k.to_string(), v.to_string()));
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text, path)
    }

    pub fn out_dir(&self) -> Option<PathBuf> {
        self.entries.iter().rev().find(|(k, _)| k == "out-dir").map(|(_, v)| PathBuf::from(v))
    }

    /// `argv` with every configured flag it does not already set appended.
    /// `out-dir` is resolved separately so that the environment can sit
    /// between it and the command line.
    pub fn merge_into(&self, argv: &[String]) -> Vec<String> {
        let given = |k: &str| {
            let flag = format!("--{k}");
            argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
        };
        let mut out = argv.to_vec();
        for (k, v) in &self.entries {
            if k == "out-dir" || k == "config" || given(k) {
                continue;
            }
            match v.as_str() {
                "true" => out.push(format!("--{k}")),
                "false" => {}
                _ => out.push(format!("--{k}={v}")),
            }
        }
        out
    }
}

/// Value of `--config` in a raw argument list.
pub fn config_path(argv: &[String]) -> Option<PathBuf> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--" {
            break;
        }
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn command_line_wins() {
        let c = ConfigFile::parse("# sweep\nseed = 4\nn=11\nno-timestamp = true\nout-dir = res\n", Path::new("c")).unwrap();
        let merged = c.merge_into(&argv("tweetstat spam sweep --n 9"));
        assert_eq!(merged, argv("tweetstat spam sweep --n 9 --seed=4 --no-timestamp"));
        assert_eq!(c.out_dir(), Some(PathBuf::from("res")));
    }

    #[test]
    fn malformed_lines_are_usage_errors() {
        let e = ConfigFile::parse("seed 4", Path::new("c")).unwrap_err();
        assert!(e.downcast_ref::<Usage>().is_some());
    }

    #[test]
    fn finds_config_flag() {
        assert_eq!(config_path(&argv("t --config a.cfg net")), Some(PathBuf::from("a.cfg")));
        assert_eq!(config_path(&argv("t --config=b net")), Some(PathBuf::from("b")));
        assert_eq!(config_path(&argv("t net -- --config x")), None);
    }
}
