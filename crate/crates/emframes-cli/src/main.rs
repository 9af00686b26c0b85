//! Batch interface: identity-suite verification with seeded randomness,
//! frame transforms of scenario fields at a point, and radial flux scans.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 quadrature failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use emframes::fields::{ChargeCurrent, EMField};
use emframes::jet::real_point;
use emframes::nonradiating::{flux_scan, FluxConfig, Scenario};
use emframes::nullspace::{nullspace_analysis, RowVariant, SystemKind};
use emframes::scenario::{complex_json, cvec_json, parse_point_arg, parse_radii_arg, ScenarioFile};
use emframes::stress::build_stress_energy;
use emframes::verify::run_suite;
use emframes::Error;

#[derive(Parser)]
#[command(name = "emframes", version, about = "Frame transforms, identity verification and flux scans for relativistic electrodynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded identity suite and report per-check residuals.
    Verify {
        /// kinematics | fields | stress | nonradiating | all
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Override every check's pass tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Run a single named check (e.g. detA) instead of the default set.
        #[arg(long)]
        check: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Apply a scenario's frame chain to its fields at a spacetime point.
    Transform {
        scenario: PathBuf,
        /// Point "x,y,z,t" in the base frame.
        #[arg(long)]
        at: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Radial Poynting-flux scan: volume vs surface integrals per radius.
    Scan {
        scenario: PathBuf,
        #[arg(long)]
        time: Option<f64>,
        /// Comma-separated radii (overrides the scenario's analysis block).
        #[arg(long)]
        radii: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Nullspace analysis of the limit constraint systems.
    Nullspace {
        /// limit | times_u | combined
        #[arg(long, default_value = "limit")]
        system: String,
        /// published | derived coefficient rows
        #[arg(long, default_value = "published")]
        rows: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 80)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::QuadratureFailure(_) => 3,
        _ => 2,
    }
}

/// Write atomically: temp file in the target directory, then rename.
fn emit(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        None => {
            print!("{content}");
            std::io::stdout().flush()?;
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().unwrap_or(Path::new("."));
            let tmp = dir.join(format!(
                ".{}.tmp",
                path.file_name().map(|s| s.to_string_lossy().to_string()).unwrap_or_else(|| "out".into())
            ));
            std::fs::write(&tmp, content)?;
            std::fs::rename(&tmp, path)?;
            Ok(())
        }
    }
}

fn load_scenario(path: &Path) -> Result<ScenarioFile, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    ScenarioFile::from_json(&text)
}

fn run_verify(
    suite: &str,
    seed: u64,
    trials: usize,
    tol: Option<f64>,
    check: Option<&str>,
    out: &Option<PathBuf>,
    format: &str,
) -> Result<bool, Error> {
    if format != "json" {
        return Err(Error::Config(format!("verify supports --format json, got '{format}'")));
    }
    let constants = emframes::Constants::natural();
    let report = run_suite(suite, seed, trials, tol, check, &constants)?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    emit(out, &format!("{text}\n")).map_err(|e| Error::Config(e.to_string()))?;
    Ok(report.pass)
}

fn state_json(f: &EMField, cc: &ChargeCurrent, k: &emframes::Constants) -> serde_json::Value {
    let se = build_stress_energy(f, k);
    let mut p_rows = Vec::new();
    for i in 0..3 {
        p_rows.push(serde_json::json!([
            complex_json(se.p.m[i][0]),
            complex_json(se.p.m[i][1]),
            complex_json(se.p.m[i][2])
        ]));
    }
    serde_json::json!({
        "e": cvec_json(&f.e),
        "b": cvec_json(&f.b),
        "rho": complex_json(cc.rho),
        "j": cvec_json(&cc.j),
        "stress_energy": {
            "sigma": complex_json(se.sigma),
            "g": cvec_json(&se.g),
            "p": p_rows,
        }
    })
}

fn run_transform(
    scenario: &Path,
    at: &str,
    out: &Option<PathBuf>,
    format: &str,
) -> Result<(), Error> {
    if format != "json" {
        return Err(Error::Config(format!("transform supports --format json, got '{format}'")));
    }
    let file = load_scenario(scenario)?;
    let k = file.constants()?;
    let provider = file.provider(&k)?;
    let chain = file.frame_chain(&k)?;
    let p = parse_point_arg(at)?;
    let point = real_point(p[0], p[1], p[2], p[3]);
    let sample = provider.sample(&point);
    let before_f = EMField { e: sample.e, b: sample.b };
    let before_cc = ChargeCurrent { rho: sample.rho, j: sample.j };
    let after_f = chain.transform_em(&before_f);
    let after_cc = chain.transform_cc(&before_cc);
    let mapped = chain.map_point(&point);
    let doc = serde_json::json!({
        "point": [p[0], p[1], p[2], p[3]],
        "corresponding_point": [
            complex_json(mapped[0]), complex_json(mapped[1]),
            complex_json(mapped[2]), complex_json(mapped[3])
        ],
        "before": state_json(&before_f, &before_cc, &k),
        "after": state_json(&after_f, &after_cc, &k),
    });
    let text = serde_json::to_string_pretty(&doc).expect("serializes");
    emit(out, &format!("{text}\n")).map_err(|e| Error::Config(e.to_string()))
}

fn run_scan(
    scenario: &Path,
    time: Option<f64>,
    radii: Option<&str>,
    out: &Option<PathBuf>,
    format: &str,
) -> Result<(), Error> {
    if format != "csv" {
        return Err(Error::Config(format!("scan supports --format csv, got '{format}'")));
    }
    let file = load_scenario(scenario)?;
    let k = file.constants()?;
    let provider = file.provider(&k)?;
    let chain = file.frame_chain(&k)?;
    let provider: std::sync::Arc<dyn emframes::provider::FieldProvider> = if chain.steps.is_empty() {
        provider
    } else {
        std::sync::Arc::new(emframes::frame::TransformedProvider { inner: provider, chain })
    };
    let radii = match radii {
        Some(text) => parse_radii_arg(text)?,
        None if !file.analysis.radii.is_empty() => {
            let r = file.analysis.radii.clone();
            if r.windows(2).any(|w| w[1] <= w[0]) || r[0] <= 0.0 {
                return Err(Error::Config("scenario radii must be positive and increasing".into()));
            }
            r
        }
        None => return Err(Error::Config("no radii given (flag --radii or analysis block)".into())),
    };
    let t = time.unwrap_or(file.analysis.time);
    let s = Scenario::new(provider, t, radii)?;
    let rows = flux_scan(&s, t, &FluxConfig::default())?;
    let has_imag = rows
        .iter()
        .any(|r| r.volume_integral_im.abs() > 1e-12 || r.surface_integral_im.abs() > 1e-12);
    let mut text = String::new();
    if has_imag {
        text.push_str("r,volume_integral,surface_integral,abs_error_estimate,volume_integral_im,surface_integral_im\n");
    } else {
        text.push_str("r,volume_integral,surface_integral,abs_error_estimate\n");
    }
    for row in &rows {
        if has_imag {
            text.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.r,
                row.volume_integral,
                row.surface_integral,
                row.abs_error_estimate,
                row.volume_integral_im,
                row.surface_integral_im
            ));
        } else {
            text.push_str(&format!(
                "{},{},{},{}\n",
                row.r, row.volume_integral, row.surface_integral, row.abs_error_estimate
            ));
        }
    }
    emit(out, &text).map_err(|e| Error::Config(e.to_string()))
}

fn run_nullspace(
    system: &str,
    rows: &str,
    seed: u64,
    samples: usize,
    out: &Option<PathBuf>,
) -> Result<bool, Error> {
    let system = match system {
        "limit" => SystemKind::Limit,
        "times_u" => SystemKind::TimesU,
        "combined" => SystemKind::Combined,
        other => return Err(Error::Config(format!("unknown system '{other}'"))),
    };
    let variant = match rows {
        "published" => RowVariant::Published,
        "derived" => RowVariant::Derived,
        other => return Err(Error::Config(format!("unknown row variant '{other}'"))),
    };
    let k = emframes::Constants::natural();
    let report = nullspace_analysis(seed, samples, system, variant, &k)?;
    let pass = report.all_reference_checks_pass();
    let text = serde_json::to_string_pretty(&report).expect("serializes");
    emit(out, &format!("{text}\n")).map_err(|e| Error::Config(e.to_string()))?;
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<bool, Error> = match &cli.command {
        Command::Verify { suite, seed, trials, tol, check, out, format } => {
            run_verify(suite, *seed, *trials, *tol, check.as_deref(), out, format)
        }
        Command::Transform { scenario, at, out, format } => {
            run_transform(scenario, at, out, format).map(|_| true)
        }
        Command::Scan { scenario, time, radii, out, format } => {
            run_scan(scenario, *time, radii.as_deref(), out, format).map(|_| true)
        }
        Command::Nullspace { system, rows, seed, samples, out } => {
            run_nullspace(system, rows, *seed, *samples, out)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
