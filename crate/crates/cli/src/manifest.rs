use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Written next to every output file as `<output>.manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments that reproduce the run, seed resolved, output target removed.
    pub argv: Vec<String>,
    /// Parsed configuration, defaults filled in.
    pub config: serde_json::Value,
    pub seed: u64,
    pub stochastic: bool,
    pub version: String,
    pub timestamp: String,
    pub output: PathBuf,
}

impl RunManifest {
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write(&self) -> Result<PathBuf, CliError> {
        let path = Self::path_for(&self.output);
        fs::write(&path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Drops `--emit`, `--seed` and `--threads` (in either `--flag value` or
/// `--flag=value` form) and pins the resolved seed up front.
pub fn canonical_argv(argv: &[String], seed: u64) -> Vec<String> {
    const DROPPED: [&str; 3] = ["--emit", "--seed", "--threads"];
    let mut out = vec!["--seed".to_string(), seed.to_string()];
    let mut iter = argv.iter().skip(1);
    while let Some(arg) = iter.next() {
        if DROPPED.contains(&arg.as_str()) {
            iter.next();
        } else if !DROPPED
            .iter()
            .any(|flag| arg.starts_with(&format!("{flag}=")))
        {
            out.push(arg.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn canonical_form_pins_seed_and_drops_outputs() {
        let argv =
            args("spinlab --seed 4 simulate --family r1 --emit out.csv --threads=2 --shots 10");
        assert_eq!(
            canonical_argv(&argv, 4),
            args("--seed 4 simulate --family r1 --shots 10")
        );
        assert_eq!(
            canonical_argv(&args("spinlab triangle --seed=9"), 7),
            args("--seed 7 triangle")
        );
    }

    #[test]
    fn manifest_path_appends_suffix() {
        assert_eq!(
            RunManifest::path_for(Path::new("a/b.csv")),
            PathBuf::from("a/b.csv.manifest.json")
        );
    }
}
