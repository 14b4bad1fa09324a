use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;
use veronese_core::code::DEFAULT_BUDGET;

/// Keys of a JSON config file. Same names as the long flags, with `_` for `-`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub p: Option<u32>,
    pub e: Option<u32>,
    pub t: Option<u32>,
    pub n: Option<usize>,
    pub sigma: Option<Vec<u32>>,
    pub sigma_q: Option<Vec<u32>>,
    pub allow_collapse: Option<bool>,
    pub budget: Option<u64>,
    pub workers: Option<usize>,
    pub w_max: Option<usize>,
    pub k: Option<usize>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct VarietyArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: Option<u32>,
    /// q = p^e.
    #[arg(long)]
    pub e: Option<u32>,
    /// Field is GF(q^t).
    #[arg(long)]
    pub t: Option<u32>,
    /// Points of PG(n-1, q^t).
    #[arg(long)]
    pub n: Option<usize>,
    /// Automorphisms as powers of p, e.g. `0,0,2`.
    #[arg(long, value_delimiter = ',', conflicts_with = "sigma_q")]
    pub sigma: Option<Vec<u32>>,
    /// Automorphisms as powers of q.
    #[arg(long, value_delimiter = ',')]
    pub sigma_q: Option<Vec<u32>>,
    /// Proceed when monomials coincide (fewer coordinates than expected).
    #[arg(long)]
    pub allow_collapse: bool,
    /// JSON config file; flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Most subsets examined by any single search.
    #[arg(long, env = "VERONESE_BUDGET")]
    pub budget: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Largest subset size to search.
    #[arg(long)]
    pub w_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Result file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the parity-check matrix as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sigma {
    P(Vec<u32>),
    Q(Vec<u32>),
}

/// Fully resolved settings.
#[derive(Debug, Clone)]
pub struct Settings {
    pub p: u32,
    pub e: u32,
    pub t: u32,
    pub n: usize,
    pub sigma: Sigma,
    pub allow_collapse: bool,
    pub budget: u64,
    pub workers: usize,
    pub w_max: Option<usize>,
    pub k: Option<usize>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, String> {
    v.ok_or_else(|| format!("missing --{flag} (give it as a flag or in the config file)"))
}

impl Settings {
    pub fn resolve(
        v: &VarietyArgs,
        s: Option<&SearchArgs>,
        o: Option<&OutputArgs>,
        k: Option<usize>,
    ) -> Result<Self, String> {
        let f = FileConfig::load(v.config.as_deref())?;
        let sigma = match (&v.sigma, &v.sigma_q, f.sigma, f.sigma_q) {
            (Some(s), _, _, _) => Sigma::P(s.clone()),
            (None, Some(h), _, _) => Sigma::Q(h.clone()),
            (None, None, Some(_), Some(_)) => return Err("config gives both sigma and sigma_q".into()),
            (None, None, Some(s), None) => Sigma::P(s),
            (None, None, None, Some(h)) => Sigma::Q(h),
            (None, None, None, None) => return Err("missing --sigma or --sigma-q".into()),
        };
        Ok(Settings {
            p: need(v.p.or(f.p), "p")?,
            e: v.e.or(f.e).unwrap_or(1),
            t: need(v.t.or(f.t), "t")?,
            n: v.n.or(f.n).unwrap_or(2),
            sigma,
            allow_collapse: v.allow_collapse || f.allow_collapse.unwrap_or(false),
            budget: s.and_then(|s| s.budget).or(f.budget).unwrap_or(DEFAULT_BUDGET),
            workers: s.and_then(|s| s.workers).or(f.workers).unwrap_or(0),
            w_max: s.and_then(|s| s.w_max).or(f.w_max),
            k: k.or(f.k),
            out: o.and_then(|o| o.out.clone()).or(f.out),
            csv: o.and_then(|o| o.csv.clone()).or(f.csv),
        })
    }
}
