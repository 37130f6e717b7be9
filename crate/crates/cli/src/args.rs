//! Flag parsing, `--tol-<check>` rewriting and config-file merging.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use biharm_core::suite::default_tolerance;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "biharm",
    version,
    about = "Checks biharmonic Legendrian immersions in deformed Sasakian 7-spheres"
)]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suite of one immersion.
    Verify(VerifyArgs),
    /// Solve the flat system or list the non-flat biharmonic μ².
    Solve(SolveArgs),
    /// Sample ‖τ₂‖ of the non-flat family over a μ² range (CSV).
    Scan(ScanArgs),
    /// Verification suites of every shipped immersion.
    Report(ReportArgs),
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Number of sample points.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Tolerance override `check=value`; `--tol-<check> value` is accepted too.
    #[arg(long = "tol", value_name = "CHECK=VALUE")]
    pub tol: Vec<String>,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat `key=value` file; flags on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub immersion: String,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub mu2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, conflicts_with = "nonflat", required_unless_present = "nonflat")]
    pub flat: bool,
    #[arg(long)]
    pub nonflat: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: f64,
    /// Grid points per variable for the flat solver.
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, required = true)]
    pub nonflat: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: f64,
    #[arg(long = "mu2-min")]
    pub mu2_min: f64,
    #[arg(long = "mu2-max")]
    pub mu2_max: f64,
    #[arg(long)]
    pub steps: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: Common,
}

/// Rewrites `--tol-<check> v` and `--tol-<check>=v` into `--tol <check>=v`.
pub fn rewrite_tol_flags(args: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        match a.strip_prefix("--tol-") {
            Some(rest) => {
                out.push("--tol".into());
                match rest.split_once('=') {
                    Some((check, v)) => out.push(format!("{check}={v}")),
                    None => out.push(format!("{rest}={}", it.next().unwrap_or_default())),
                }
            }
            None => out.push(a),
        }
    }
    out
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Flag list for a `key=value` config file. Blank lines and `#` comments are
/// skipped; `true`/`false` values toggle switches.
pub fn config_flags(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", n + 1))?;
        let (k, v) = (k.trim(), v.trim());
        if k == "config" {
            return Err(format!(
                "config line {}: nested config files are not supported",
                n + 1
            ));
        }
        match v {
            "true" => out.push(format!("--{k}")),
            "false" => {}
            _ => {
                out.push(format!("--{k}"));
                out.push(v.to_string());
            }
        }
    }
    Ok(out)
}

/// Full argument list: config-file flags are inserted right after the
/// subcommand so later command-line flags override them.
pub fn expand_args(args: Vec<String>) -> Result<Vec<String>, String> {
    let args = rewrite_tol_flags(args);
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let extra = rewrite_tol_flags(config_flags(&text)?);
    let Some(pos) = args.iter().skip(1).position(|a| !a.starts_with('-')) else {
        return Ok(args);
    };
    let mut out = args[..pos + 2].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[pos + 2..]);
    Ok(out)
}

/// Parses `check=value` overrides; later entries win.
pub fn parse_tolerances(entries: &[String]) -> Result<BTreeMap<String, f64>, String> {
    let mut map = BTreeMap::new();
    for e in entries {
        let (k, v) = e
            .split_once('=')
            .ok_or_else(|| format!("tolerance `{e}`: expected check=value"))?;
        if default_tolerance(k).is_none() {
            return Err(format!("unknown check `{k}` in tolerance override"));
        }
        let v: f64 = v
            .parse()
            .map_err(|_| format!("tolerance `{e}`: bad number"))?;
        if !(v > 0.0) {
            return Err(format!("tolerance `{e}` must be positive"));
        }
        map.insert(k.to_string(), v);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn tol_flags_are_rewritten() {
        assert_eq!(
            rewrite_tol_flags(v(
                "biharm verify --tol-bitension 1e-8 --tol-legendrian=1e-9"
            )),
            v("biharm verify --tol bitension=1e-8 --tol legendrian=1e-9")
        );
    }

    #[test]
    fn config_lines() {
        let f =
            config_flags("# comment\nsamples = 7\n\nflat=true\nnonflat=false\ntol-xi-law=1e-5\n")
                .unwrap();
        assert_eq!(f, v("--samples 7 --flat --tol-xi-law 1e-5"));
        assert!(config_flags("samples").is_err());
    }

    #[test]
    fn tolerance_parsing() {
        let m = parse_tolerances(&v("bitension=1e-3 bitension=2e-3")).unwrap();
        assert_eq!(m["bitension"], 2e-3);
        assert!(parse_tolerances(&v("nonsense=1")).is_err());
        assert!(parse_tolerances(&v("bitension=-1")).is_err());
    }
}
