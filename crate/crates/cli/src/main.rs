//! `henon`: orbits, sector-cycle tables, verification suites, seeded
//! samplers, limit estimation and escape rasters for the map family
//! F(z, w) = (e^{-z^m} + a w, z) with a = delta e^{2 pi i / m}.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error, 3 runtime or I/O error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use henon_core::combinatorics::{cycle_decomposition, limit_slice_map};
use henon_core::dynamics::iterate;
use henon_core::geometry::{sample_a, sample_w_n, sector_pair, slice_index, SectorPair, WSchedule};
use henon_core::limits::estimate_h;
use henon_core::params::Params;
use henon_core::parse::{format_complex, parse_complex};
use henon_core::point::ComplexPair;
use henon_core::render::{render, write_png, write_ppm, RenderMetadata, SliceMode, SliceSpec};
use henon_core::sphere::SphereValue;
use henon_core::verify::{run_suite, Suite, VerifyConfig};
use henon_core::Error;
use num_complex::Complex64;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "henon",
    version,
    about = "Dynamics toolkit for the family F(z, w) = (e^{-z^m} + delta e^{2 pi i/m} w, z)"
)]
struct Cli {
    #[command(flatten)]
    run: RunFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunFlags {
    /// Exponent m in f(z) = e^{-z^m}; at least 2.
    #[arg(long, global = true, default_value_t = 5)]
    m: u32,
    /// Modulus delta of the linear coefficient; must exceed 2.
    #[arg(long, global = true, default_value_t = 3.0)]
    delta: f64,
    /// Absorbing-region radius C (membership is Re(z^m) > C^m); at least 1.
    #[arg(long = "C", global = true, default_value_t = 1.0)]
    c_abs: f64,
    /// Override the derived base radius of the wedge schedule.
    #[arg(long, global = true)]
    r0: Option<f64>,
    /// Iteration budget for classification.
    #[arg(long, global = true, default_value_t = 200)]
    budget: usize,
    /// Series tolerance for limit estimation.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Seed shared by all samplers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; data commands print to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Serialization format. Raster output always goes through `render`,
    /// which writes PNG for a .png --out under the default format and P6
    /// PPM otherwise.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Ppm,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the map and report the orbit with sector pairs and flags.
    Orbit {
        /// Starting z, e.g. "1.5-2e-3i".
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        z: Complex64,
        /// Starting w.
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        w: Complex64,
        /// Number of steps.
        #[arg(long, short = 'n', default_value_t = 16)]
        steps: usize,
    },
    /// Print the sector-pair cycles and their slice assignments.
    Cycles,
    /// Run verification suites and report each check.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
    /// Classify a pixel grid of starting points and write an image plus a
    /// JSON sidecar.
    Render {
        #[arg(long, value_enum, default_value_t = ModeArg::Real)]
        mode: ModeArg,
        /// Window center in the slice plane.
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true, default_value = "0")]
        center: Complex64,
        /// Horizontal span of the window.
        #[arg(long)]
        extent: f64,
        #[arg(long, default_value_t = 256)]
        width: u32,
        #[arg(long, default_value_t = 256)]
        height: u32,
        /// Pinned second coordinate for --mode z.
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true, default_value = "0")]
        at: Complex64,
        /// Base point of the complex line for --mode line.
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true, default_value = "0")]
        base_z: Complex64,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true, default_value = "0")]
        base_w: Complex64,
        /// Direction of the complex line for --mode line; not both zero.
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true, default_value = "1")]
        dir_z: Complex64,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true, default_value = "0")]
        dir_w: Complex64,
        /// Worker threads; defaults to the available parallelism. The
        /// HENON_THREADS environment variable caps the final count.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Emit seeded sample points.
    Sample {
        #[command(subcommand)]
        kind: SampleKind,
    },
    /// Estimate the limit directions h1, h2 and the series tails at a point.
    Limits {
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        w: Complex64,
    },
}

#[derive(Subcommand)]
enum SampleKind {
    /// Points on the central rays of a sector pair, radii in
    /// [radius, 10 radius].
    Ray {
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[arg(long, default_value_t = 0)]
        b: u32,
        /// Lower radius; defaults to 20 m.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 16)]
        count: usize,
    },
    /// Points in wedge number `step` of the schedule for representative
    /// pair (0, b).
    Wedge {
        #[arg(long, default_value_t = 0)]
        b: u32,
        #[arg(long, default_value_t = 0)]
        step: u32,
        #[arg(long, default_value_t = 16)]
        count: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Combinatorics,
    Cycling,
    Growth,
    Limits,
    Conjugacy,
    Diagnostic,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Combinatorics => Suite::Combinatorics,
            SuiteArg::Cycling => Suite::Cycling,
            SuiteArg::Growth => Suite::Growth,
            SuiteArg::Limits => Suite::Limits,
            SuiteArg::Conjugacy => Suite::Conjugacy,
            SuiteArg::Diagnostic => Suite::Diagnostic,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Real (z, w) plane: pixel (u, v) starts at (u, v).
    Real,
    /// z plane with w pinned by --at.
    Z,
    /// Complex line base + t * dir, t from the window.
    Line,
}

enum Failure {
    Config(String),
    Runtime(String),
    Verification(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Param(_) => Failure::Config(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn complex_arg(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(n)) => {
            eprintln!("error: {n} check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Orbit { z, w, steps } => cmd_orbit(&cli.run, *z, *w, *steps),
        Command::Cycles => cmd_cycles(&cli.run),
        Command::Verify { suite } => cmd_verify(&cli.run, *suite),
        Command::Render {
            mode,
            center,
            extent,
            width,
            height,
            at,
            base_z,
            base_w,
            dir_z,
            dir_w,
            threads,
        } => {
            let slice_mode = match mode {
                ModeArg::Real => SliceMode::RealPlane,
                ModeArg::Z => SliceMode::ZPlane { w: *at },
                ModeArg::Line => SliceMode::Line {
                    base: ComplexPair::new(*base_z, *base_w),
                    dir: ComplexPair::new(*dir_z, *dir_w),
                },
            };
            let spec = SliceSpec {
                mode: slice_mode,
                center: *center,
                extent: *extent,
                width: *width,
                height: *height,
            };
            cmd_render(&cli.run, &spec, *threads)
        }
        Command::Sample { kind } => cmd_sample(&cli.run, kind),
        Command::Limits { z, w } => cmd_limits(&cli.run, *z, *w),
    }
}

/// Validate the shared numeric configuration and build map parameters.
fn params(run: &RunFlags) -> Result<Params, Failure> {
    let p = Params::new(run.m, run.delta)?;
    if !(run.c_abs >= 1.0 && run.c_abs.is_finite()) {
        return Err(Failure::Config(format!("--C {} must be finite and at least 1", run.c_abs)));
    }
    if run.budget == 0 {
        return Err(Failure::Config("--budget must be at least 1".into()));
    }
    Ok(p)
}

fn schedule(run: &RunFlags, p: &Params) -> Result<WSchedule, Failure> {
    Ok(match run.r0 {
        Some(r0) => WSchedule::with_r0(p, r0)?,
        None => WSchedule::new(p),
    })
}

/// Write to --out, or to stdout when omitted.
fn emit(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let text = if body.ends_with('\n') { body.to_owned() } else { format!("{body}\n") };
            std::fs::write(path, text)
                .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
        }
        None => print_line(body.trim_end_matches('\n')),
    }
}

/// A closed pipe on stdout (e.g. the reader was `head`) is not an error.
fn print_line(line: &str) -> Result<(), Failure> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{line}").and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(Failure::Runtime(format!("stdout: {e}"))),
    }
}

fn reject_raster_format(run: &RunFlags) -> Result<(), Failure> {
    if run.format == Format::Ppm {
        return Err(Failure::Config("--format ppm applies only to render".into()));
    }
    Ok(())
}

/// 17 significant digits: enough to reproduce any binary64 exactly.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn sphere_json(v: SphereValue) -> serde_json::Value {
    match v.finite() {
        Some(c) => json!([c.re, c.im]),
        None => json!("inf"),
    }
}

fn cmd_orbit(run: &RunFlags, z: Complex64, w: Complex64, steps: usize) -> Result<(), Failure> {
    let p = params(run)?;
    reject_raster_format(run)?;
    let orbit = iterate(ComplexPair::new(z, w), steps, &p);
    let m = p.m();
    let body = match run.format {
        Format::Json => {
            let points: Vec<_> = orbit
                .points()
                .iter()
                .enumerate()
                .map(|(n, q)| {
                    json!({
                        "n": n,
                        "z": [q.z.re, q.z.im],
                        "w": [q.w.re, q.w.im],
                        "sector_pair": sector_pair(q, m).map(|s| s.to_string()),
                        "flag": orbit.flag(n).map(|f| f.to_string()),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&json!({
                "m": m,
                "delta": p.delta(),
                "truncated": orbit.truncated(),
                "points": points,
            }))
            .expect("orbit serializes")
        }
        Format::Csv => {
            let mut s = String::from("n,z_re,z_im,w_re,w_im,sector_pair,flag\n");
            for (n, q) in orbit.points().iter().enumerate() {
                let pair = sector_pair(q, m).map(|x| x.to_string()).unwrap_or_default();
                let flag = orbit.flag(n).map(|f| f.to_string()).unwrap_or_default();
                s.push_str(&format!(
                    "{n},{},{},{},{},{},{}\n",
                    num(q.z.re),
                    num(q.z.im),
                    num(q.w.re),
                    num(q.w.im),
                    csv_field(&pair),
                    csv_field(&flag),
                ));
            }
            s
        }
        Format::Ppm => unreachable!("rejected above"),
    };
    emit(run.out.as_deref(), &body)?;
    if orbit.truncated() {
        return Err(Failure::Runtime(format!(
            "orbit left the binary64 range after step {}",
            orbit.len() - 1
        )));
    }
    Ok(())
}

fn cmd_cycles(run: &RunFlags) -> Result<(), Failure> {
    let p = params(run)?;
    reject_raster_format(run)?;
    let m = p.m();
    let dec = cycle_decomposition(m);
    let body = match run.format {
        Format::Json => {
            let cycles: Vec<_> = dec
                .cycles()
                .iter()
                .map(|c| {
                    let (j1, j2) = limit_slice_map(c.representative().b, m);
                    json!({
                        "representative": c.representative().to_string(),
                        "period": c.period(),
                        "slices": [j1.0, j2.0],
                        "members": c.members().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&json!({ "m": m, "cycles": cycles }))
                .expect("cycles serialize")
        }
        Format::Csv => {
            let mut s = String::from("representative,period,slice_h1,slice_h2,members\n");
            for c in dec.cycles() {
                let (j1, j2) = limit_slice_map(c.representative().b, m);
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    csv_field(&c.representative().to_string()),
                    c.period(),
                    j1.0,
                    j2.0,
                    csv_field(&c.to_string()),
                ));
            }
            s
        }
        Format::Ppm => unreachable!("rejected above"),
    };
    emit(run.out.as_deref(), &body)
}

fn cmd_verify(run: &RunFlags, suite: SuiteArg) -> Result<(), Failure> {
    reject_raster_format(run)?;
    if !(run.c_abs >= 1.0 && run.c_abs.is_finite()) {
        return Err(Failure::Config(format!("--C {} must be finite and at least 1", run.c_abs)));
    }
    let cfg = VerifyConfig {
        m: run.m,
        delta: run.delta,
        c_abs: run.c_abs,
        seed: run.seed,
        r0: run.r0,
    };
    let reports = run_suite(suite.into(), &cfg)?;
    let body = match run.format {
        Format::Json => serde_json::to_string_pretty(&reports).expect("reports serialize"),
        Format::Csv => {
            let mut s = String::from("suite,name,passed,measured,tolerance,detail\n");
            for r in &reports {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.suite,
                    csv_field(&r.name),
                    r.passed,
                    num(r.measured),
                    num(r.tolerance),
                    csv_field(&r.detail),
                ));
            }
            s
        }
        Format::Ppm => unreachable!("rejected above"),
    };
    emit(run.out.as_deref(), &body)?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(Failure::Verification(failed));
    }
    Ok(())
}

fn worker_count(requested: Option<usize>) -> Result<usize, Failure> {
    let available = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let mut n = requested.unwrap_or(available).max(1);
    if let Ok(raw) = std::env::var("HENON_THREADS") {
        let cap: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&c| c >= 1)
            .ok_or_else(|| {
                Failure::Config(format!("HENON_THREADS={raw:?} must be a positive integer"))
            })?;
        n = n.min(cap);
    }
    Ok(n)
}

fn cmd_render(run: &RunFlags, spec: &SliceSpec, threads: Option<usize>) -> Result<(), Failure> {
    let p = params(run)?;
    let out = run
        .out
        .as_deref()
        .ok_or_else(|| Failure::Config("render requires --out".into()))?;
    let workers = worker_count(threads)?;
    let raster = render(spec, &p, run.budget, run.c_abs, workers)?;
    let png = run.format == Format::Json
        && out.extension().is_some_and(|e| e.eq_ignore_ascii_case("png"));
    match run.format {
        Format::Csv => return Err(Failure::Config("--format csv is not a raster format".into())),
        _ if png => write_png(out, &raster)?,
        _ => write_ppm(out, &raster)?,
    }
    let meta = RenderMetadata::new(spec, &p, run.budget, run.c_abs, &raster);
    meta.write(out)?;
    print_line(&format!(
        "wrote {} and {}",
        out.display(),
        RenderMetadata::sidecar_path(out).display()
    ))
}

fn cmd_sample(run: &RunFlags, kind: &SampleKind) -> Result<(), Failure> {
    let p = params(run)?;
    reject_raster_format(run)?;
    let m = p.m();
    let pts = match kind {
        SampleKind::Ray { a, b, radius, count } => {
            if *a >= m || *b >= m {
                return Err(Failure::Config(format!(
                    "sector pair ({a}, {b}) needs both indices below m = {m}"
                )));
            }
            let lower = radius.unwrap_or((20 * m) as f64);
            if !(lower > 0.0 && lower.is_finite()) {
                return Err(Failure::Config(format!(
                    "--radius {lower} must be positive and finite"
                )));
            }
            sample_a(SectorPair::new(*a, *b), lower, *count, run.seed, m)
        }
        SampleKind::Wedge { b, step, count } => {
            if *b >= m {
                return Err(Failure::Config(format!("--b {b} must be below m = {m}")));
            }
            let sched = schedule(run, &p)?;
            if !sched.radius(*step).is_finite() {
                return Err(Failure::Config(format!(
                    "schedule radius overflows at --step {step}"
                )));
            }
            sample_w_n(*step, *b, &sched, *count, run.seed)
        }
    };
    let body = match run.format {
        Format::Json => {
            let rows: Vec<_> =
                pts.iter().map(|q| json!({ "z": [q.z.re, q.z.im], "w": [q.w.re, q.w.im] })).collect();
            serde_json::to_string_pretty(&rows).expect("samples serialize")
        }
        Format::Csv => {
            let mut s = String::from("z_re,z_im,w_re,w_im\n");
            for q in &pts {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    num(q.z.re),
                    num(q.z.im),
                    num(q.w.re),
                    num(q.w.im)
                ));
            }
            s
        }
        Format::Ppm => unreachable!("rejected above"),
    };
    emit(run.out.as_deref(), &body)
}

fn cmd_limits(run: &RunFlags, z: Complex64, w: Complex64) -> Result<(), Failure> {
    let p = params(run)?;
    reject_raster_format(run)?;
    let m = p.m();
    let outcome = match estimate_h(ComplexPair::new(z, w), &p, run.tol) {
        Ok(est) => json!({
            "status": "ok",
            "h1": sphere_json(est.h1),
            "h2": sphere_json(est.h2),
            "h1_slice": slice_index(est.h1, m).map(|s| s.0),
            "h2_slice": slice_index(est.h2, m).map(|s| s.0),
            "delta1": [est.delta1.re, est.delta1.im],
            "delta2": [est.delta2.re, est.delta2.im],
            "terms": est.terms_used,
            "residual": est.residual,
        }),
        Err(Error::OrbitLeftS { step }) => json!({
            "status": "left-sector-union",
            "step": step,
        }),
        Err(Error::Overflow) => json!({ "status": "overflow" }),
        Err(Error::Disagreement { distance, allowed }) => json!({
            "status": "disagreement",
            "distance": distance,
            "allowed": allowed,
        }),
        Err(e) => return Err(e.into()),
    };
    let body = match run.format {
        Format::Json => serde_json::to_string_pretty(&outcome).expect("limits serialize"),
        Format::Csv => {
            let mut s = String::from("status,h1,h2,h1_slice,h2_slice,terms,residual,step\n");
            let get = |k: &str| outcome.get(k).cloned().unwrap_or(serde_json::Value::Null);
            let status = outcome["status"].as_str().unwrap_or_default().to_owned();
            let hs = |k: &str| -> String {
                match get(k) {
                    serde_json::Value::Array(a) => format_complex(Complex64::new(
                        a[0].as_f64().unwrap_or(f64::NAN),
                        a[1].as_f64().unwrap_or(f64::NAN),
                    )),
                    serde_json::Value::String(v) => v,
                    _ => String::new(),
                }
            };
            let num_field = |k: &str| -> String {
                match get(k) {
                    serde_json::Value::Number(v) => v.to_string(),
                    _ => String::new(),
                }
            };
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                csv_field(&status),
                csv_field(&hs("h1")),
                csv_field(&hs("h2")),
                num_field("h1_slice"),
                num_field("h2_slice"),
                num_field("terms"),
                num_field("residual"),
                num_field("step"),
            ));
            s
        }
        Format::Ppm => unreachable!("rejected above"),
    };
    emit(run.out.as_deref(), &body)
}
