//! Run configuration: JSON file defaults overridden by command-line flags.

use crate::report::Format;
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Every parameter any subcommand accepts. Unset fields fall back to the
/// config file, then to command defaults.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub q: Option<u64>,
    pub qs: Option<Vec<u64>>,
    pub l: Option<u32>,
    pub modulus: Option<u64>,
    pub residue: Option<u64>,
    pub h: Option<Vec<u64>>,
    pub t: Option<String>,
    pub bfree: Option<String>,
    pub c_policy: Option<String>,
    pub precision: Option<f64>,
    pub theorem: Option<String>,
    pub method: Option<String>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub suite: Option<String>,
    pub qmax: Option<u64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

macro_rules! overlay {
    ($self:ident, $base:ident; $($f:ident),*) => {
        RunConfig { $($f: $self.$f.or($base.$f)),* }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    /// Fields set here win over `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        overlay!(self, base; q, qs, l, modulus, residue, h, t, bfree, c_policy, precision, theorem, method,
            samples, seed, suite, qmax, format, output)
    }

    /// The Q sweep: `qs` if given, else the single `q`.
    pub fn sweep(&self) -> Option<Vec<u64>> {
        self.qs.clone().or_else(|| self.q.map(|q| vec![q]))
    }
}
