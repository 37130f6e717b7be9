//! Command execution and report writing.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use biharm_core::immersion::ImmersionId;
use biharm_core::report::{CheckRecord, VerificationReport};
use biharm_core::sampling::DEFAULT_SAMPLES;
use biharm_core::solver::{
    mu_sample, nonflat_mu, nonflat_mu_corrected, scan_mu, solve_flat, verify_fixed_example,
    FixedExample, FlatRoot,
};
use biharm_core::suite::{build_immersion, verify_suite, ImmersionParams, Profile, SuiteOptions};
use biharm_core::{GeomError, SolverConfig};
use serde::Serialize;

use crate::args::{parse_tolerances, Command, Common, ReportArgs, ScanArgs, SolveArgs, VerifyArgs};

pub enum Failure {
    /// Bad flags, unknown ids or parameters outside a family.
    Usage(String),
    Io(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn usage(e: GeomError) -> Failure {
    Failure::Usage(e.to_string())
}

/// Resolved settings echoed into every report.
#[derive(Debug, Serialize)]
struct RunConfig {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    immersion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flat: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    solver: Option<SolverConfig>,
    samples: usize,
    seed: u64,
    tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    fn new(command: &'static str, common: &Common) -> Result<Self, Failure> {
        Ok(Self {
            command,
            immersion: None,
            epsilon: None,
            mu2: None,
            flat: None,
            solver: None,
            samples: common.samples.unwrap_or(DEFAULT_SAMPLES),
            seed: common.seed.unwrap_or(0),
            tolerances: parse_tolerances(&common.tol).map_err(Failure::Usage)?,
        })
    }

    fn suite_options(&self) -> SuiteOptions {
        SuiteOptions {
            samples: self.samples,
            seed: self.seed,
            tolerances: self.tolerances.clone(),
        }
    }
}

#[derive(Serialize)]
struct Trailer<'a, S: Serialize> {
    summary: S,
    version: &'static str,
    config: &'a RunConfig,
}

fn open(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn create(p: &Path) -> Result<File, Failure> {
    File::create(p).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display())))
}

fn line<T: Serialize>(w: &mut dyn Write, v: &T) -> Result<(), Failure> {
    let s = serde_json::to_string(v).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(w, "{s}")?;
    Ok(())
}

fn write_report(
    out: &Option<PathBuf>,
    report: &VerificationReport,
    cfg: &RunConfig,
) -> Result<bool, Failure> {
    let mut w = open(out)?;
    for r in &report.records {
        line(&mut *w, r)?;
    }
    line(
        &mut *w,
        &Trailer {
            summary: report.summary(),
            version: env!("CARGO_PKG_VERSION"),
            config: cfg,
        },
    )?;
    w.flush()?;
    Ok(report.all_pass())
}

pub fn run(cmd: Command) -> Result<bool, Failure> {
    match cmd {
        Command::Verify(a) => verify(a),
        Command::Solve(a) => solve(a),
        Command::Scan(a) => scan(a),
        Command::Report(a) => report(a),
    }
}

fn verify(a: VerifyArgs) -> Result<bool, Failure> {
    let id: ImmersionId = a.immersion.parse().map_err(usage)?;
    let flat = match (a.lambda, a.a, a.c, a.d) {
        (Some(l), Some(x), Some(c), Some(d)) => Some([l, x, c, d]),
        (None, None, None, None) => None,
        _ => {
            return Err(Failure::Usage(
                "--lambda, --a, --c and --d go together".into(),
            ))
        }
    };
    let params = ImmersionParams {
        epsilon: a.epsilon,
        mu2: a.mu2,
        flat,
    };
    let mut cfg = RunConfig::new("verify", &a.common)?;
    cfg.immersion = Some(id.to_string());
    cfg.epsilon = a.epsilon;
    cfg.mu2 = a.mu2;
    cfg.flat = flat;
    let imm = build_immersion(id, &params).map_err(usage)?;
    let report = verify_suite(&imm, Profile::of(id), &cfg.suite_options());
    write_report(&a.common.out, &report, &cfg)
}

#[derive(Serialize)]
struct RootLine<'a> {
    bucket: &'static str,
    #[serde(flatten)]
    root: &'a FlatRoot,
}

#[derive(Serialize)]
struct FlatSummary {
    validated: usize,
    algebra_only: usize,
}

#[derive(Serialize)]
struct MuLine {
    branch: &'static str,
    mu2: f64,
    bitension: f64,
    mean_curvature: f64,
}

#[derive(Serialize)]
struct MuSummary {
    printed: usize,
    corrected: usize,
}

fn solve(a: SolveArgs) -> Result<bool, Failure> {
    let mut cfg = RunConfig::new("solve", &a.common)?;
    cfg.epsilon = Some(a.epsilon);
    if a.flat {
        let defaults = SolverConfig::default();
        let scfg = SolverConfig {
            grid: a.grid.unwrap_or(defaults.grid),
            seed: cfg.seed,
            samples: cfg.samples,
            ..defaults
        };
        cfg.solver = Some(scfg);
        let sol = solve_flat(a.epsilon, &scfg).map_err(usage)?;
        let mut w = open(&a.common.out)?;
        for root in &sol.validated {
            line(
                &mut *w,
                &RootLine {
                    bucket: "validated",
                    root,
                },
            )?;
        }
        for root in &sol.algebra_only {
            line(
                &mut *w,
                &RootLine {
                    bucket: "algebra_only",
                    root,
                },
            )?;
        }
        let summary = FlatSummary {
            validated: sol.validated.len(),
            algebra_only: sol.algebra_only.len(),
        };
        line(
            &mut *w,
            &Trailer {
                summary,
                version: env!("CARGO_PKG_VERSION"),
                config: &cfg,
            },
        )?;
        w.flush()?;
    } else {
        let printed = nonflat_mu(a.epsilon);
        let corrected = nonflat_mu_corrected(a.epsilon);
        let mut w = open(&a.common.out)?;
        for (branch, list) in [("printed", &printed), ("corrected", &corrected)] {
            for &m in list {
                let s = mu_sample(a.epsilon, m).map_err(usage)?;
                line(
                    &mut *w,
                    &MuLine {
                        branch,
                        mu2: m,
                        bitension: s.residual,
                        mean_curvature: s.mean_curvature,
                    },
                )?;
            }
        }
        let summary = MuSummary {
            printed: printed.len(),
            corrected: corrected.len(),
        };
        line(
            &mut *w,
            &Trailer {
                summary,
                version: env!("CARGO_PKG_VERSION"),
                config: &cfg,
            },
        )?;
        w.flush()?;
    }
    Ok(true)
}

fn scan(a: ScanArgs) -> Result<bool, Failure> {
    let s = scan_mu(a.epsilon, a.mu2_min, a.mu2_max, a.steps).map_err(usage)?;
    let mut w = open(&a.common.out)?;
    writeln!(w, "mu2,residual")?;
    for p in &s.samples {
        writeln!(w, "{},{}", p.mu2, p.residual)?;
    }
    w.flush()?;
    for m in &s.minima {
        eprintln!(
            "local minimum: mu2={} residual={:e} |H|={}",
            m.mu2, m.residual, m.mean_curvature
        );
    }
    Ok(true)
}

fn report(a: ReportArgs) -> Result<bool, Failure> {
    let cfg = RunConfig::new("report", &a.common)?;
    let opts = cfg.suite_options();
    let mut all = VerificationReport::new();
    for id in ImmersionId::ALL {
        match build_immersion(id, &ImmersionParams::default()) {
            Ok(imm) => all.extend(verify_suite(&imm, Profile::of(id), &opts)),
            Err(e) => all.push(CheckRecord::failed(
                "geometry",
                id.to_string(),
                0.0,
                e.to_string(),
            )),
        }
    }
    for which in FixedExample::ALL {
        match verify_fixed_example(which, cfg.samples, cfg.seed) {
            Ok(r) => all.extend(r),
            Err(e) => all.push(CheckRecord::failed(
                "fixed-example",
                format!("{which:?}"),
                0.0,
                e.to_string(),
            )),
        }
    }
    write_report(&a.common.out, &all, &cfg)
}
