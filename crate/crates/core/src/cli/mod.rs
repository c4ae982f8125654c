//! `lie3` command-line interface.
//!
//! Exit codes: 0 success, 1 invalid input, 2 verification failure.

pub mod document;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{catalog_entry, Group, Mat3, Vec3, DEFAULT_TOL};
use crate::bianchi::{classify, BianchiType};
use crate::error::Error;
use crate::foliation::{
    adapt_basis, classify_family, family_index, search_directions, SearchOptions, ADAPT_TOL,
};
use crate::format::{round_sig, sig};
use crate::geometry::curvature;

use document::{parse_metric_text, AlgebraDocument, LoadedAlgebra};

pub use verify::{verify_paper, VerifyOptions, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 1;
pub const EXIT_VERIFICATION_FAILED: i32 = 2;

const HUMAN_DIGITS: usize = 6;
const JSON_DIGITS: usize = 12;
const COORD_EPS: f64 = 1e-12;

pub(crate) const ALPHA_CONVENTION: &str =
    "VI: alpha is minus the ad eigenvalue ratio, representative of {alpha, 1/alpha} with |alpha| >= 1; VII: |alpha|";

#[derive(Debug, Parser)]
#[command(
    name = "lie3",
    version,
    about = "Left-invariant geometry of 3-dimensional Lie groups"
)]
pub struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Validity tolerance for Jacobi and antisymmetry checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Number of sphere lattice points for the foliation search.
    #[arg(long, global = true, default_value_t = 20_000)]
    lattice: usize,
    /// Random metrics per negative case in verify-paper.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    /// Seed for metric sampling.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the nine standard metric Lie algebras.
    Catalog,
    /// Bianchi type of an algebra.
    Classify(InputArgs),
    /// Connection-derived curvature of a left-invariant metric.
    Curvature(InputArgs),
    /// Left-invariant conformal foliations by geodesics.
    Foliations(InputArgs),
    /// Reproduce the classification of groups admitting harmonic morphisms to surfaces.
    VerifyPaper(VerifyArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// JSON algebra document.
    #[arg(long, conflicts_with = "group", required_unless_present = "group")]
    input: Option<PathBuf>,
    /// Catalog group name (R3, Nil3, H2xR, G4, H3, Sol3, G7, SL2R~, SU2).
    #[arg(long)]
    group: Option<String>,
    /// Parameter for Sol3 and G7.
    #[arg(long, requires = "group", allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// JSON 3x3 metric, overriding any metric in the input.
    #[arg(long)]
    metric: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Use the type IX variant with [Y,Z]=-2X (classifies as VIII).
    #[arg(long)]
    printed_type_ix: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_INVALID_INPUT
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID_INPUT
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid flag: {0}")]
    Flag(String),
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Flag(format!(
            "--tol must be positive, got {}",
            cli.tol
        )));
    }
    if cli.lattice == 0 {
        return Err(CliError::Flag("--lattice must be positive".into()));
    }
    let opts = SearchOptions {
        lattice: cli.lattice,
        tol: cli.tol,
        ..SearchOptions::default()
    };
    let (text, value, code) = match &cli.command {
        Command::Catalog => {
            let (t, v) = cmd_catalog();
            (t, v, EXIT_OK)
        }
        Command::Classify(input) => {
            let (t, v) = cmd_classify(&load_input(input, cli.tol)?, cli.tol)?;
            (t, v, EXIT_OK)
        }
        Command::Curvature(input) => {
            let (t, v) = cmd_curvature(&load_input(input, cli.tol)?);
            (t, v, EXIT_OK)
        }
        Command::Foliations(input) => {
            let (t, v) = cmd_foliations(&load_input(input, cli.tol)?, &opts)?;
            (t, v, EXIT_OK)
        }
        Command::VerifyPaper(args) => {
            let report = verify_paper(&VerifyOptions {
                samples: cli.samples,
                seed: cli.seed,
                search: opts,
                printed_type_ix: args.printed_type_ix,
            })?;
            let code = if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFICATION_FAILED
            };
            (report.render_text(), report.to_json(), code)
        }
    };
    let written = if cli.json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&value).expect("JSON value serializes")
        )
    } else {
        write!(out, "{text}")
    };
    written.map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })?;
    Ok(code)
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

fn load_input(args: &InputArgs, tol: f64) -> Result<LoadedAlgebra, CliError> {
    let mut loaded = match (&args.input, &args.group) {
        (Some(path), _) => AlgebraDocument::parse(&read(path)?)?.load(tol)?,
        (None, Some(name)) => {
            LoadedAlgebra::from_entry(&crate::algebra::catalog(name, args.alpha)?)
        }
        (None, None) => {
            return Err(CliError::Flag(
                "one of --input or --group is required".into(),
            ))
        }
    };
    if let Some(path) = &args.metric {
        loaded.metric = parse_metric_text(&read(path)?)?;
    }
    Ok(loaded)
}

pub(crate) fn num(x: f64) -> Value {
    let r = round_sig(x, JSON_DIGITS);
    // normalise negative zero
    json!(if r == 0.0 { 0.0 } else { r })
}

/// Zeroes round-off in unit-scale coordinates before display.
pub(crate) fn snap(x: f64) -> f64 {
    if x.abs() < COORD_EPS {
        0.0
    } else {
        x
    }
}

pub(crate) fn vec_json(v: &Vec3) -> Value {
    Value::Array(v.iter().map(|x| num(snap(*x))).collect())
}

fn mat_json(m: &Mat3) -> Value {
    Value::Array(
        (0..3)
            .map(|i| Value::Array((0..3).map(|j| num(m[(i, j)])).collect()))
            .collect(),
    )
}

pub(crate) fn h(x: f64) -> String {
    sig(if x == 0.0 { 0.0 } else { x }, HUMAN_DIGITS)
}

pub(crate) fn vec_text(v: &Vec3) -> String {
    format!("({}, {}, {})", h(snap(v[0])), h(snap(v[1])), h(snap(v[2])))
}

pub(crate) fn type_json(t: &BianchiType) -> Value {
    json!({
        "type": t.tag.as_str(),
        "alpha": t.param.map(num),
    })
}

fn cmd_catalog() -> (String, Value) {
    let mut text = String::from("Bianchi catalog (orthonormal basis X, Y, Z)\n");
    let mut entries = Vec::new();
    for group in Group::ALL {
        let sample_alpha = match group {
            Group::Sol3 => Some(2.0),
            Group::G7 => Some(1.0),
            _ => None,
        };
        let entry = catalog_entry(group, sample_alpha).expect("catalog entries are valid");
        let tag = crate::bianchi::classify_unchecked(&entry.constants).tag;
        let requirement = group.parameter_requirement();
        text.push_str(&format!(
            "  {:<5} {:<6} {:<36} {}\n",
            tag.as_str(),
            group.name(),
            group.bracket_table(),
            requirement
                .map(|r| format!("requires {r}"))
                .unwrap_or_default()
        ));
        entries.push(json!({
            "name": group.name(),
            "type": tag.as_str(),
            "brackets": group.bracket_table(),
            "parameter": requirement,
        }));
    }
    text.push_str(&format!("{} entries\n", entries.len()));
    (text, json!({ "entries": entries }))
}

fn cmd_classify(input: &LoadedAlgebra, tol: f64) -> Result<(String, Value), Error> {
    let t = classify(&input.constants, tol)?;
    let text = format!("{t}\n");
    let mut value = type_json(&t);
    value["name"] = json!(input.label);
    value["alpha_convention"] = json!(ALPHA_CONVENTION);
    Ok((text, value))
}

fn cmd_curvature(input: &LoadedAlgebra) -> (String, Value) {
    let c = input.orthonormal();
    let r = curvature(&c);
    let mut text = format!("{}\n", input.label);
    text.push_str("Ricci tensor (orthonormal frame):\n");
    for i in 0..3 {
        text.push_str(&format!(
            "  [{:>10} {:>10} {:>10}]\n",
            h(r.ricci[(i, 0)]),
            h(r.ricci[(i, 1)]),
            h(r.ricci[(i, 2)])
        ));
    }
    let spectrum: Vec<String> = r
        .ricci_spectrum
        .distinct
        .iter()
        .map(|(v, m)| format!("{} (x{m})", h(*v)))
        .collect();
    text.push_str(&format!("Ricci spectrum: {{{}}}\n", spectrum.join(", ")));
    text.push_str(&format!(
        "sectional: K(X,Y)={} K(X,Z)={} K(Y,Z)={}\n",
        h(r.sectional_basis[0]),
        h(r.sectional_basis[1]),
        h(r.sectional_basis[2])
    ));
    text.push_str(&format!("scalar curvature: {}\n", h(r.scalar)));
    match r.constant_curvature {
        Some(k) => text.push_str(&format!("constant curvature {}\n", h(k))),
        None => text.push_str("non-constant curvature\n"),
    }
    let value = json!({
        "name": input.label,
        "ricci": mat_json(&r.ricci),
        "ricci_spectrum": r.ricci_spectrum.distinct.iter()
            .map(|(v, m)| json!({"value": num(*v), "multiplicity": m}))
            .collect::<Vec<_>>(),
        "sectional": {
            "XY": num(r.sectional_basis[0]),
            "XZ": num(r.sectional_basis[1]),
            "YZ": num(r.sectional_basis[2]),
        },
        "scalar": num(r.scalar),
        "constant_curvature": r.constant_curvature.map(num),
    });
    (text, value)
}

fn cmd_foliations(input: &LoadedAlgebra, opts: &SearchOptions) -> Result<(String, Value), Error> {
    let c = input.orthonormal();
    let kind = classify(&c, opts.tol)?;
    let report = search_directions(&c, opts)?;
    let mut text = format!("{} (type {kind})\n", input.label);
    let mut directions = Vec::new();
    if report.constant_curvature {
        text.push_str("constant curvature; admits harmonic morphisms to surfaces\n");
    } else if report.directions.is_empty() {
        text.push_str("no conformal foliation by geodesics; does not admit harmonic morphisms\n");
    }
    for (n, d) in report.directions.iter().enumerate() {
        let u = d.direction();
        let params = adapt_basis(&c, &u)?;
        let family = family_index(&params, ADAPT_TOL);
        let family_type = classify_family(&params, ADAPT_TOL)?;
        text.push_str(&format!(
            "direction {}: {}  geodesic residual {}  conformal residual {}\n",
            n + 1,
            vec_text(&u),
            h(d.geodesic_residual),
            h(d.conformal_residual)
        ));
        text.push_str(&format!(
            "  adapted (a,b,x,y,z) = ({}, {}, {}, {}, {})  family {}  type {}\n",
            h(snap(params.a)),
            h(snap(params.b)),
            h(snap(params.x)),
            h(snap(params.y)),
            h(snap(params.z)),
            family.map(|f| f.to_string()).unwrap_or_else(|| "-".into()),
            family_type
        ));
        directions.push(json!({
            "direction": vec_json(&u),
            "geodesic_residual": num(d.geodesic_residual),
            "conformal_residual": num(d.conformal_residual),
            "adapted": {
                "a": num(snap(params.a)), "b": num(snap(params.b)), "x": num(snap(params.x)),
                "y": num(snap(params.y)), "z": num(snap(params.z)),
            },
            "family": family,
            "family_type": type_json(&family_type),
        }));
    }
    if !report.constant_curvature && !report.directions.is_empty() {
        text.push_str("admits harmonic morphisms to surfaces\n");
    }
    let value = json!({
        "name": input.label,
        "type": type_json(&kind),
        "constant_curvature": report.constant_curvature,
        "directions": directions,
        "admits": report.admits,
        "lattice_min_residual": report.lattice_min_residual.map(num),
    });
    Ok((text, value))
}
