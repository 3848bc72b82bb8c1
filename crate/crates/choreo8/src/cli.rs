//! Command-line surface: `simulate`, `events`, `fit`, `curves`, and
//! `compare` subcommands that emit deterministic CSV/JSON artifacts, each
//! accompanied by a run manifest.
//!
//! `--out` is a path prefix; every command appends its own suffixes
//! (`.csv`, `.report.json`, `.manifest.json`, ...). Exit codes: 0 on
//! success, 2 for validation failures (bad flags, failed `--check`,
//! unwritable paths), 3 for numeric failures.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis;
use crate::curves::{self, CurveSpec};
use crate::dynamics::{self, canonical_initial_state, UnitSystem};
use crate::export::{self, Csv};
use crate::integrate::{integrate, Trajectory};
use crate::series;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad inputs or a failed `--check`; exit code 2.
    #[error("{0}")]
    Validation(String),
    /// Integration or analysis breakdown; exit code 3.
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<crate::integrate::IntegrateError> for CliError {
    fn from(e: crate::integrate::IntegrateError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<analysis::AnalysisError> for CliError {
    fn from(e: analysis::AnalysisError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<curves::CurveError> for CliError {
    fn from(e: curves::CurveError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<series::SeriesError> for CliError {
    fn from(e: series::SeriesError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<export::ExportError> for CliError {
    fn from(e: export::ExportError) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "choreo8", version, about = "figure-8 three-body choreography laboratory")]
pub struct Cli {
    /// Integration tolerance (also via CHOREO8_TOL).
    #[arg(long, global = true, env = "CHOREO8_TOL")]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesName {
    /// Separation of the base pair (one-harmonic classical fit).
    R23,
    /// Triangle perimeter (harmonics at multiples of 6).
    Perimeter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Lb,
    Lg,
    Hp,
    Ghp,
    Ring,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the canonical orbit and write the trajectory + a
    /// conservation report.
    Simulate {
        #[arg(long, default_value_t = 0.1)]
        grid_step_deg: f64,
        #[arg(long, default_value_t = 360.0)]
        tau_end_deg: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// JSON unit-system file for physical-unit conversion in the report.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Detect the 12 configuration events and write geometry reports.
    Events {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Verify the event invariants; exit 2 on any deviation.
        #[arg(long)]
        check: bool,
    },
    /// Least-squares cosine-series fit of an orbit series.
    Fit {
        #[arg(value_enum)]
        series: SeriesName,
        /// Harmonic multipliers, e.g. --multipliers 6,12 (empty: mean only).
        #[arg(long, value_delimiter = ',')]
        multipliers: Vec<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample a catalog curve and write its property report.
    Curves {
        #[arg(value_enum)]
        family: FamilyName,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// y-scale of the Gerono variant (default a/2).
        #[arg(long)]
        b: Option<f64>,
        #[arg(long, default_value_t = 1.4706)]
        k: f64,
        /// y-rescale of the generalized hippopede (default 0.9353 a).
        #[arg(long)]
        a_prime: Option<f64>,
        #[arg(long, default_value_t = 360)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Emit the Bernoulli-lemniscate vs figure-8 comparison table.
    Compare {
        #[arg(long)]
        out: PathBuf,
        /// Compare the lemniscate against itself (all ratios 1).
        #[arg(long)]
        lb_self: bool,
    },
}

/// Provenance record written next to every output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub tolerance: f64,
    pub outputs: Vec<String>,
    pub version: String,
    pub wall_time_ms: f64,
}

fn write_manifest(
    out: &Path,
    command: &str,
    parameters: serde_json::Value,
    tolerance: f64,
    outputs: &[PathBuf],
    started: Instant,
) -> Result<PathBuf, CliError> {
    let path = suffixed(out, ".manifest.json");
    let manifest = RunManifest {
        command: command.into(),
        parameters,
        tolerance,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        version: env!("CARGO_PKG_VERSION").into(),
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    export::write_json_atomic(&path, &manifest)?;
    Ok(path)
}

fn suffixed(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    out.with_file_name(name)
}

fn integrate_period(tol: f64, tau_end: f64) -> Result<Trajectory, CliError> {
    Ok(integrate(&canonical_initial_state(), tau_end, tol)?)
}

/// Entry point for the binary; parses real process arguments.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    if !(1e-14..=1e-6).contains(&tol) {
        return Err(CliError::Validation(format!(
            "tolerance {tol} outside [1e-14, 1e-6]"
        )));
    }
    match cli.command {
        Command::Simulate {
            grid_step_deg,
            tau_end_deg,
            out,
            format,
            config,
        } => cmd_simulate(tol, grid_step_deg, tau_end_deg, &out, format, config.as_deref()),
        Command::Events { out, format, check } => cmd_events(tol, &out, format, check),
        Command::Fit {
            series,
            multipliers,
            out,
        } => cmd_fit(tol, series, &multipliers, &out),
        Command::Curves {
            family,
            a,
            b,
            k,
            a_prime,
            samples,
            out,
            format,
        } => cmd_curves(family, a, b, k, a_prime, samples, &out, format),
        Command::Compare { out, lb_self } => cmd_compare(tol, &out, lb_self),
    }
}

pub fn cmd_simulate(
    tol: f64,
    grid_step_deg: f64,
    tau_end_deg: f64,
    out: &Path,
    format: Format,
    config: Option<&Path>,
) -> Result<(), CliError> {
    let started = Instant::now();
    if grid_step_deg <= 0.0 || tau_end_deg <= 0.0 {
        return Err(CliError::Validation(
            "grid step and tau end must be positive".into(),
        ));
    }
    let units = config
        .map(|p| {
            UnitSystem::from_json_file(p)
                .map_err(|e| CliError::Validation(format!("bad unit config: {e}")))
        })
        .transpose()?;
    let traj = integrate_period(tol, tau_end_deg.to_radians())?;
    let csv = export::trajectory_csv(&traj, grid_step_deg, tau_end_deg)?;
    let mut outputs = Vec::new();

    let data_path = match format {
        Format::Csv => {
            let p = suffixed(out, ".csv");
            csv.write_atomic(&p)?;
            p
        }
        Format::Json => {
            let p = suffixed(out, ".json");
            export::write_json_atomic(&p, &json!({ "header": csv.header, "rows": csv.rows }))?;
            p
        }
    };
    outputs.push(data_path);

    let initial = canonical_initial_state();
    let final_state = traj.state_at(traj.tau_end())?;
    let closure = (tau_end_deg >= 360.0 - 1e-9).then(|| {
        let end = traj.state_at(traj.tau_start() + TWO_PI).unwrap();
        let dp = (0..3).map(|i| (end.r[i] - initial.r[i]).norm()).fold(0.0, f64::max);
        let dv = (0..3).map(|i| (end.v[i] - initial.v[i]).norm()).fold(0.0, f64::max);
        json!({ "position": dp, "velocity": dv })
    });
    let energy = dynamics::energies(&initial)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    let report = json!({
        "tolerance": tol,
        "tau_end_deg": tau_end_deg,
        "closure_deviation": closure,
        "integrals_initial": dynamics::first_integrals(&initial),
        "integrals_final": dynamics::first_integrals(&final_state),
        "energy": energy,
        "physical_units": units.map(|u| json!({
            "period_s": u.period_s(),
            "period_days": u.period_s() / 86400.0,
        })),
    });
    let report_path = suffixed(out, ".report.json");
    export::write_json_atomic(&report_path, &report)?;
    outputs.push(report_path);

    let params = json!({
        "grid_step_deg": grid_step_deg,
        "tau_end_deg": tau_end_deg,
        "format": format!("{format:?}").to_lowercase(),
    });
    write_manifest(out, "simulate", params, tol, &outputs, started)?;
    println!(
        "simulate: wrote {} rows to {}",
        csv.rows.len(),
        outputs[0].display()
    );
    Ok(())
}

/// The two figures the artifact cannot reproduce, reported next to its own
/// oracle values.
fn flagged_discrepancies(events: &[analysis::ConfigurationEvent]) -> serde_json::Value {
    let one_kg_one_m = UnitSystem {
        r_m: 1.0,
        m_total_kg: 1.0,
        g: UnitSystem::DEFAULT_G,
    };
    let d12_at_0 = events[0].state.separation(0, 1);
    json!({
        "unit_period": {
            "published_days": 28.153,
            "computed_days": one_kg_one_m.period_s() / 86400.0,
        },
        "separation_range": {
            "published_max_m": 1.12,
            "computed_tau0_separation": d12_at_0,
            "note": "1.12 matches the tau=0 pair separation 1.1443, not the true maximum 1.38047",
        },
    })
}

pub fn cmd_events(tol: f64, out: &Path, format: Format, check: bool) -> Result<(), CliError> {
    let started = Instant::now();
    let traj = integrate_period(tol, TWO_PI)?;
    let events = analysis::find_configurations(&traj)?;

    let mut reports = Vec::new();
    for e in &events {
        let report = match e.kind {
            analysis::ConfigKind::Collinear => {
                serde_json::to_value(analysis::collinear_geometry(e, &traj)?)
            }
            analysis::ConfigKind::Isosceles => {
                serde_json::to_value(analysis::isosceles_geometry(e, &traj)?)
            }
        }
        .map_err(|e| CliError::Numeric(e.to_string()))?;
        reports.push(report);
    }

    let mut outputs = Vec::new();
    if format == Format::Csv {
        let mut csv = Csv::new(&[
            "tau_deg",
            "is_collinear",
            "special_particle",
            "line_angle_deg",
            "tangent_angle_deg",
        ]);
        for e in &events {
            csv.push(vec![
                e.tau_deg,
                (e.kind == analysis::ConfigKind::Collinear) as u8 as f64,
                e.special_particle as f64,
                e.line_angle_deg,
                e.tangent_angle_deg,
            ])?;
        }
        let p = suffixed(out, ".csv");
        csv.write_atomic(&p)?;
        outputs.push(p);
    }
    let doc = json!({
        "events": events,
        "geometry": reports,
        "flagged_discrepancies": flagged_discrepancies(&events),
    });
    let p = suffixed(out, ".json");
    export::write_json_atomic(&p, &doc)?;
    outputs.push(p);

    if check {
        check_events(&events, &traj)?;
        println!("events --check: all invariants hold");
    }
    let params = json!({ "check": check, "format": format!("{format:?}").to_lowercase() });
    write_manifest(out, "events", params, tol, &outputs, started)?;
    println!("events: wrote {} events to {}", events.len(), out.display());
    Ok(())
}

fn check_events(
    events: &[analysis::ConfigurationEvent],
    traj: &Trajectory,
) -> Result<(), CliError> {
    let fail = |m: String| Err(CliError::Validation(format!("--check failed: {m}")));
    if events.len() != 12 {
        return fail(format!("{} events, expected 12", events.len()));
    }
    for (i, e) in events.iter().enumerate() {
        let want = if i % 2 == 0 {
            analysis::ConfigKind::Isosceles
        } else {
            analysis::ConfigKind::Collinear
        };
        if e.kind != want {
            return fail(format!("event {i} has kind {:?}", e.kind));
        }
        if (e.tau_deg - 30.0 * i as f64).abs() > 0.05 {
            return fail(format!("event {i} at {} deg", e.tau_deg));
        }
        match e.kind {
            analysis::ConfigKind::Collinear => {
                let r = analysis::collinear_geometry(e, traj)?;
                if (r.line_angle_deg.abs() - 14.0688).abs() > 0.01 {
                    return fail(format!("collinear line angle {}", r.line_angle_deg));
                }
                if (r.tangent_angle_deg.abs() - 42.8434).abs() > 0.02 {
                    return fail(format!("collinear tangent {}", r.tangent_angle_deg));
                }
                if r.tangent_parallelism_deg > 0.01 {
                    return fail(format!("velocities not parallel: {}", r.tangent_parallelism_deg));
                }
            }
            analysis::ConfigKind::Isosceles => {
                let r = analysis::isosceles_geometry(e, traj)?;
                if !(12.00..=12.06).contains(&r.side_angle_deg) {
                    return fail(format!("isosceles side angle {}", r.side_angle_deg));
                }
            }
        }
    }
    Ok(())
}

pub fn cmd_fit(
    tol: f64,
    series_name: SeriesName,
    multipliers: &[u32],
    out: &Path,
) -> Result<(), CliError> {
    let started = Instant::now();
    let traj = integrate_period(tol, TWO_PI)?;
    let t0 = traj.tau_start();
    let r23 = |t: f64| -> Result<f64, CliError> { Ok(traj.state_at(t)?.separation(1, 2)) };
    let perimeter = |t: f64| -> Result<f64, CliError> {
        let s = traj.state_at(t)?;
        Ok(s.separation(0, 1) + s.separation(1, 2) + s.separation(2, 0))
    };
    let mut samples = Vec::new();
    let grid_kind;
    match series_name {
        // the classical one-harmonic r23 fit interpolates the four
        // extrema; richer fits use the dense grid
        SeriesName::R23 if multipliers == [2] => {
            grid_kind = "extrema";
            for k in 0..4 {
                let t = t0 + TWO_PI * k as f64 / 4.0;
                samples.push((t - t0, r23(t)?));
            }
        }
        _ => {
            grid_kind = "dense";
            for k in 0..720 {
                let t = t0 + TWO_PI * k as f64 / 720.0;
                let v = match series_name {
                    SeriesName::R23 => r23(t)?,
                    SeriesName::Perimeter => perimeter(t)?,
                };
                samples.push((t - t0, v));
            }
        }
    }
    let fit = series::fit_cosine_series(&samples, multipliers)?;
    let doc = json!({
        "series": format!("{series_name:?}").to_lowercase(),
        "grid": grid_kind,
        "sample_count": samples.len(),
        "fit": fit,
    });
    let p = suffixed(out, ".json");
    export::write_json_atomic(&p, &doc)?;
    let params = json!({
        "series": format!("{series_name:?}").to_lowercase(),
        "multipliers": multipliers,
    });
    write_manifest(out, "fit", params, tol, std::slice::from_ref(&p), started)?;
    println!("fit: c0 = {:.9}, wrote {}", fit.c0, p.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_curves(
    family: FamilyName,
    a: f64,
    b: Option<f64>,
    k: f64,
    a_prime: Option<f64>,
    samples: usize,
    out: &Path,
    format: Format,
) -> Result<(), CliError> {
    let started = Instant::now();
    if samples < 4 {
        return Err(CliError::Validation("need at least 4 samples".into()));
    }
    let spec = match family {
        FamilyName::Lb => CurveSpec::BernoulliLemniscate { a },
        FamilyName::Lg => CurveSpec::GeronoLemniscate {
            a,
            b: b.unwrap_or(a / 2.0),
        },
        FamilyName::Hp => CurveSpec::Hippopede { a, k },
        FamilyName::Ghp => CurveSpec::GeneralizedHippopede {
            a,
            k,
            a_prime: a_prime.unwrap_or(0.9353 * a),
        },
        FamilyName::Ring => CurveSpec::RingPotential,
    };
    spec.validate()?;

    let mut outputs = Vec::new();
    if spec != CurveSpec::RingPotential {
        let csv = export::curve_csv(&spec, samples)?;
        let p = match format {
            Format::Csv => {
                let p = suffixed(out, ".csv");
                csv.write_atomic(&p)?;
                p
            }
            Format::Json => {
                let p = suffixed(out, ".samples.json");
                export::write_json_atomic(&p, &json!({ "header": csv.header, "rows": csv.rows }))?;
                p
            }
        };
        outputs.push(p);
    }

    let triangular = curves::triangular_property(&spec).ok();
    let hippo_k = match spec {
        CurveSpec::BernoulliLemniscate { .. } => Some(2.0_f64.sqrt()),
        CurveSpec::Hippopede { k, .. } | CurveSpec::GeneralizedHippopede { k, .. } => Some(k),
        _ => None,
    };
    let report = json!({
        "spec": spec,
        "tangent_at_origin_deg": curves::tangent_at_origin(&spec).ok(),
        "triangular": triangular,
        "collinear_angle_deg": hippo_k.map(curves::collinear_angle).transpose()?,
        "lb_length": matches!(spec, CurveSpec::BernoulliLemniscate { .. })
            .then(|| curves::lb_arclength(a))
            .transpose()?,
    });
    let p = suffixed(out, ".report.json");
    export::write_json_atomic(&p, &report)?;
    outputs.push(p.clone());

    let params = json!({
        "family": format!("{family:?}").to_lowercase(),
        "a": a, "b": b, "k": k, "a_prime": a_prime, "samples": samples,
    });
    write_manifest(out, "curves", params, DEFAULT_TOL, &outputs, started)?;
    println!("curves: wrote report to {}", p.display());
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct CompareRow {
    pub name: String,
    pub lb: f64,
    pub fig8: f64,
    pub ratio: f64,
}

fn row(name: &str, lb: f64, fig8: f64) -> CompareRow {
    CompareRow {
        name: name.into(),
        lb,
        fig8,
        ratio: lb / fig8,
    }
}

pub fn cmd_compare(tol: f64, out: &Path, lb_self: bool) -> Result<(), CliError> {
    let started = Instant::now();
    // lemniscate side, computed fresh from the catalog
    let lb = CurveSpec::BernoulliLemniscate { a: 1.0 };
    let lb_tangent = curves::tangent_at_origin(&lb)?;
    let lb_collinear = curves::collinear_angle(2.0_f64.sqrt())?;
    let lb_tri = curves::triangular_property(&lb)?;
    let lb_y_max = (0..=3600)
        .map(|i| curves::eval_parametric(&lb, TWO_PI * i as f64 / 3600.0).unwrap().point.y)
        .fold(0.0, f64::max);
    let lb_length = curves::lb_arclength(1.0)?.per_2a;

    // figure-8 side, measured on a fresh integration
    let (tangent, collinear, theta_t, y_max, length) = if lb_self {
        (lb_tangent, lb_collinear, lb_tri.theta_t_deg, lb_y_max, lb_length)
    } else {
        let traj = integrate_period(tol, TWO_PI)?;
        let events = analysis::find_configurations(&traj)?;
        let col = &events[1];
        let iso = &events[0];
        let apex = iso.special_particle;
        let base = iso.state.r[(apex + 1) % 3];
        let a = iso.state.r[apex].norm();
        let theta_t = (base.y.abs()).atan2(a / 2.0).to_degrees();
        let y_max = base.y.abs() / a;
        (
            col.tangent_angle_deg.abs(),
            col.line_angle_deg.abs(),
            theta_t,
            y_max,
            analysis::arclength(&traj)?.per_2a,
        )
    };

    let rows = vec![
        row("tangent_at_origin_deg", lb_tangent, tangent),
        row("collinear_angle_deg", lb_collinear, collinear),
        row(
            "tangent_quotient",
            lb_tangent / lb_collinear,
            tangent / collinear,
        ),
        row("theta_t_deg", lb_tri.theta_t_deg, theta_t),
        row("extrem_y_over_a", lb_y_max, y_max),
        row("length_per_2a", lb_length, length),
    ];
    let doc = json!({ "lb_self": lb_self, "rows": rows });
    let p = suffixed(out, ".json");
    export::write_json_atomic(&p, &doc)?;
    write_manifest(
        out,
        "compare",
        json!({ "lb_self": lb_self }),
        tol,
        std::slice::from_ref(&p),
        started,
    )?;
    println!("compare: wrote {}", p.display());
    Ok(())
}
