use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ballbody::contraction::bound_chain;
use ballbody::estimators::{shard_rng, uniform_in_ball, EstimatorConfig};
use ballbody::exact2d::{disk_intersection, render_scene, spindle_hull_2d, SvgLayer, SvgStyle};
use ballbody::geometry::{ball_hull_membership, dual};
use ballbody::harness::{
    body_intrinsic_volume, run_bsz_check, run_identity_suite, run_kp_check, run_threshold_sweep, write_records_csv,
    write_records_json, ExperimentKind, ExperimentSpec, Summary, TrialRecord, Verdict,
};
use ballbody::{Error, PointSet, Result};

#[derive(Parser)]
#[command(
    name = "ballbody",
    version,
    about = "Intersections of congruent balls: duals, hulls, intrinsic volumes and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args)]
struct Points {
    /// Point set as JSON (`{"dim":..,"points":[..]}`) or CSV with a header; `-` reads JSON from stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Draw this many random points instead of reading a file.
    #[arg(long = "n-points", default_value_t = 5)]
    n_points: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Random points are drawn from a ball of radius `spread · radius`.
    #[arg(long, default_value_t = 0.7)]
    spread: f64,
}

#[derive(Args)]
struct Estimation {
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 256)]
    directions: usize,
    #[arg(long = "confidence-z", default_value_t = 3.0)]
    confidence_z: f64,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long = "max-iters", default_value_t = 10_000)]
    max_iters: usize,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, env = "BALLBODY_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct Suite {
    /// Dimensions, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    dim: Vec<usize>,
    /// Intrinsic-volume indices, comma separated; default 1, 2 and d.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long = "n-points")]
    n_points: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
    #[command(flatten)]
    est: Estimation,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// The r-ball body of a point set: status, circumradius, and in the plane its arc polygon.
    Dual {
        #[command(flatten)]
        points: Points,
        #[command(flatten)]
        common: Common,
    },
    /// Ball-hull membership of a query point, with a separating certificate when outside.
    Hull {
        #[command(flatten)]
        points: Points,
        /// Query point, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        query: Vec<f64>,
        #[command(flatten)]
        est: Estimation,
        #[command(flatten)]
        common: Common,
    },
    /// Intrinsic volume V_k of the r-ball body.
    Ivol {
        #[command(flatten)]
        points: Points,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        est: Estimation,
        #[command(flatten)]
        common: Common,
    },
    /// Monotonicity check against the ball of equal volume.
    CheckBsz(Suite),
    /// Monotonicity under uniform contractions, with the bound chain.
    CheckKp(Suite),
    /// Dual identities and invariants.
    Identities(Suite),
    /// Threshold table and case coverage map.
    Thresholds {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6,7,8,9,10,41,42,43,50")]
        dim: Vec<usize>,
        #[arg(long)]
        lambda: Option<f64>,
        /// Also print the bound chain for this N at each dimension (needs --lambda).
        #[arg(long = "n-points")]
        n_points: Option<u64>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// SVG of a planar point set, its r-ball body and its ball hull (always SVG).
    Render {
        #[command(flatten)]
        points: Points,
        #[arg(long = "width-px", default_value_t = 480.0)]
        width_px: f64,
        #[command(flatten)]
        common: Common,
    },
}

fn estimator(est: &Estimation, seed: u64) -> EstimatorConfig {
    EstimatorConfig {
        samples: est.samples,
        seed,
        confidence_z: est.confidence_z,
        feasibility_tolerance: est.tolerance,
        max_projection_iters: est.max_iters,
        directions: est.directions,
    }
}

fn load_points(points: &Points, radius: f64, seed: u64) -> Result<PointSet> {
    match &points.input {
        Some(path) if path.as_os_str() == "-" => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            PointSet::from_json(&text)
        }
        Some(path) => {
            let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
                PointSet::read_csv(BufReader::new(file))
            } else {
                let mut text = String::new();
                BufReader::new(file).read_to_string(&mut text)?;
                PointSet::from_json(&text)
            }
        }
        None => {
            if points.dim == 0 || points.n_points == 0 {
                return Err(Error::InvalidParameter("--dim and --n-points must be positive".into()));
            }
            let mut rng = shard_rng(seed, 0);
            let origin = vec![0.0; points.dim];
            let coords = (0..points.n_points)
                .flat_map(|_| uniform_in_ball(&mut rng, &origin, points.spread * radius))
                .collect();
            PointSet::from_flat(points.dim, coords)
        }
    }
}

fn emit(out: &Option<PathBuf>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
        }
    }
    Ok(())
}

fn emit_json(out: &Option<PathBuf>, value: &serde_json::Value) -> Result<()> {
    emit(out, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

fn require(format: Format, allowed: &[Format], what: &str) -> Result<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("unsupported --format for {what}")))
    }
}

fn suite_spec(kind: ExperimentKind, s: &Suite) -> ExperimentSpec {
    ExperimentSpec {
        kind,
        dims: s.dim.clone(),
        k_values: s.k.clone(),
        trials: s.trials,
        seed: s.common.seed,
        estimator: estimator(&s.est, s.common.seed),
        n_points: s.n_points,
        radius: s.common.radius,
        lambda: s.lambda,
        out: s.common.out.clone(),
    }
}

fn run_suite(kind: ExperimentKind, s: &Suite) -> Result<ExitCode> {
    require(s.common.format, &[Format::Json, Format::Csv], "suites")?;
    let spec = suite_spec(kind, s);
    let records: Vec<TrialRecord> = match kind {
        ExperimentKind::BszCheck => run_bsz_check(&spec)?,
        ExperimentKind::KpCheck => run_kp_check(&spec)?,
        _ => run_identity_suite(&spec)?,
    };
    emit(&spec.out, |w| match s.common.format {
        Format::Csv => write_records_csv(&records, w),
        _ => write_records_json(&records, w),
    })?;
    let summary = Summary::of(&records);
    eprintln!(
        "{} records: {} holds, {} within noise, {} violations, {} invalid, {} observational",
        summary.records,
        summary.holds,
        summary.holds_within_noise,
        summary.violations,
        summary.invalid,
        summary.observational
    );
    Ok(if summary.violations > 0 {
        ExitCode::from(1)
    } else if summary.invalid > 0 || records.iter().any(|r| r.verdict == Verdict::Invalid) {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn coverage_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.coverage.csv"))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Dual { points, common } => {
            let pts = load_points(&points, common.radius, common.seed)?;
            let body = dual(&pts, common.radius)?;
            if pts.dim() == 2 {
                let poly = disk_intersection(&pts, common.radius)?;
                if common.format == Format::Svg {
                    let svg = ballbody::exact2d::render_svg(&poly, &SvgStyle::default());
                    return emit(&common.out, |w| Ok(w.write_all(svg.as_bytes())?)).map(|_| ExitCode::SUCCESS);
                }
                require(common.format, &[Format::Json], "dual")?;
                emit_json(
                    &common.out,
                    &json!({"body": body, "polygon": poly, "area": poly.area(), "v1": poly.v1()}),
                )?;
            } else {
                require(common.format, &[Format::Json], "dual outside the plane")?;
                emit_json(&common.out, &json!({ "body": body }))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Hull {
            points,
            query,
            est,
            common,
        } => {
            require(common.format, &[Format::Json], "hull")?;
            let pts = load_points(&points, common.radius, common.seed)?;
            let verdict = ball_hull_membership(&pts, common.radius, &query, &estimator(&est, common.seed))?;
            emit_json(
                &common.out,
                &json!({ "query": query, "radius": common.radius, "membership": verdict }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ivol { points, k, est, common } => {
            require(common.format, &[Format::Json], "ivol")?;
            let pts = load_points(&points, common.radius, common.seed)?;
            let body = dual(&pts, common.radius)?;
            let e = body_intrinsic_volume(&body, k, &estimator(&est, common.seed))?;
            emit_json(
                &common.out,
                &json!({ "k": k, "radius": common.radius, "status": body.status().as_str(), "estimate": e }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckBsz(s) => run_suite(ExperimentKind::BszCheck, &s),
        Command::CheckKp(s) => run_suite(ExperimentKind::KpCheck, &s),
        Command::Identities(s) => run_suite(ExperimentKind::IdentitySuite, &s),
        Command::Thresholds {
            dim,
            lambda,
            n_points,
            k,
            common,
        } => {
            require(common.format, &[Format::Json, Format::Csv], "thresholds")?;
            let mut spec = ExperimentSpec::new(ExperimentKind::ThresholdSweep, dim.clone(), 1, common.seed);
            spec.radius = common.radius;
            spec.lambda = lambda;
            let sweep = run_threshold_sweep(&spec)?;
            let chains = match n_points {
                Some(n) => {
                    let lambda = lambda.ok_or_else(|| Error::InvalidParameter("--n-points needs --lambda".into()))?;
                    dim.iter()
                        .map(|&d| bound_chain(d, n, lambda, common.radius, k.min(d)))
                        .collect::<Result<Vec<_>>>()?
                }
                None => Vec::new(),
            };
            if common.format == Format::Csv {
                emit(&common.out, |w| sweep.write_thresholds_csv(w))?;
                if let Some(out) = &common.out {
                    emit(&Some(coverage_path(out)), |w| sweep.write_coverage_csv(w))?;
                }
            } else {
                emit_json(&common.out, &json!({ "sweep": sweep, "bound_chains": chains }))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Render {
            points,
            width_px,
            common,
        } => {
            require(common.format, &[Format::Svg, Format::Json], "render")?;
            let pts = load_points(&points, common.radius, common.seed)?;
            let body = disk_intersection(&pts, common.radius)?;
            let hull = spindle_hull_2d(&pts, common.radius)?;
            let layers = [
                SvgLayer {
                    polygon: &hull,
                    style: SvgStyle {
                        stroke: "#1f4e9c".into(),
                        fill: "none".into(),
                        ..SvgStyle::default()
                    },
                    label: Some("hull".into()),
                },
                SvgLayer {
                    polygon: &body,
                    style: SvgStyle::default(),
                    label: Some("dual".into()),
                },
            ];
            let markers: Vec<[f64; 2]> = pts.iter().map(|p| [p[0], p[1]]).collect();
            let svg = render_scene(&layers, &markers, width_px);
            emit(&common.out, |w| Ok(w.write_all(svg.as_bytes())?))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Error::Io(msg)) if msg.contains("Broken pipe") => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NoConvergence { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
