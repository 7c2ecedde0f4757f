//! Command-line front end.
//!
//! Subcommands: `gen`, `measure`, `sweep`, `detect`, `splittings`. JSON goes
//! to standard output for everything except `sweep`, which emits CSV.
//!
//! Exit codes: 0 success, 1 argument error, 2 invalid density matrix or
//! malformed file, 3 numerical failure, 4 I/O error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::LinalgError;
use crate::maps::{EnceMapSpec, MapError, MapKind, Side, DEFAULT_X};
use crate::measures::{self, MeasureError, WeightedMeasureSpec, DETECTION_THRESHOLD};
use crate::multipartite::{self, MultipartiteError, PeStatus};
use crate::states::{self, DensityMatrix, NamedStateSpec, StateError};

/// Environment variable overriding the detection threshold.
pub const TOL_ENV: &str = "ENCE_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Args(String),
    #[error("invalid density matrix: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Args(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

fn from_linalg(e: LinalgError) -> CliError {
    match e {
        LinalgError::IterationFailure => CliError::Numerical(e.to_string()),
        _ => CliError::Invalid(e.to_string()),
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::BadDims
            | StateError::DimMismatch { .. }
            | StateError::NonHermitian(_)
            | StateError::TraceNotOne(_)
            | StateError::NotPsd(_)
            | StateError::Format(_) => CliError::Invalid(e.to_string()),
            StateError::Linalg(l) => from_linalg(l),
            _ => CliError::Args(e.to_string()),
        }
    }
}

impl From<MapError> for CliError {
    fn from(e: MapError) -> Self {
        match e {
            MapError::Linalg(l) => from_linalg(l),
            _ => CliError::Args(e.to_string()),
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        match e {
            MeasureError::Map(m) => m.into(),
            MeasureError::DegenerateImage | MeasureError::NumericalFailure(_) => {
                CliError::Numerical(e.to_string())
            }
            MeasureError::EmptySpec | MeasureError::BadWeight(_) => CliError::Args(e.to_string()),
        }
    }
}

impl From<MultipartiteError> for CliError {
    fn from(e: MultipartiteError) -> Self {
        match e {
            MultipartiteError::State(s) => s.into(),
            MultipartiteError::Linalg(l) => from_linalg(l),
            MultipartiteError::Measure(m) => m.into(),
            _ => CliError::Args(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "ence",
    version,
    about = "Detect and quantify nonclassical correlation of quantum states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a named or random state in the text format
    Gen(GenArgs),
    /// Evaluate one measure and print a JSON record
    Measure(MeasureArgs),
    /// Evaluate D, Q_R, Q_L and Q_tilde over a parameter range as CSV
    Sweep(SweepArgs),
    /// Run the product-eigenbasis oracle and the measures on every splitting
    Detect(DetectArgs),
    /// Q_tilde on every bipartite splitting with min/max/avg
    Splittings(SplittingsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Named state: pseudo-entangled (ps), zero-plus, bell, classical-cc,
    /// one-way-cc, tripartite-cex, maximally-mixed, random, random-pe
    #[arg(long)]
    pub state: Option<String>,
    /// Parameter p of the pseudo-entangled family
    #[arg(long)]
    pub p: Option<f64>,
    /// Subsystem dimensions for random, random-pe and maximally-mixed
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Seed for random states
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    #[command(flatten)]
    pub named: StateArgs,
    /// State file to read
    #[arg(long = "in", value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapArg {
    Transpose,
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Right,
    Left,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Right => Side::Right,
            SideArg::Left => Side::Left,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    D,
    Q,
    Qtilde,
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    P,
    X,
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    #[arg(long, value_enum, default_value_t = MapArg::Transpose)]
    pub map: MapArg,
    /// Power-map parameter
    #[arg(long, default_value_t = DEFAULT_X, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, value_enum, default_value_t = SideArg::Right)]
    pub side: SideArg,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub named: StateArgs,
    /// Output path; standard output if absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, value_enum, default_value_t = MeasureArg::Qtilde)]
    pub measure: MeasureArg,
    /// Weights for `weighted`: the transpose weight, then one per power
    /// parameter in --xs (default all 1)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub weights: Option<Vec<f64>>,
    /// Power-map parameters for `weighted`
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "2",
        allow_negative_numbers = true
    )]
    pub xs: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, value_enum)]
    pub var: SweepVar,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub step: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Power-map parameter for the power-map columns
    #[arg(long, default_value_t = DEFAULT_X, allow_negative_numbers = true)]
    pub x: f64,
    /// Detection threshold (overrides ENCE_TOL)
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SplittingsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = MapArg::Transpose)]
    pub map: MapArg,
    #[arg(long, default_value_t = DEFAULT_X, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Builds a state from the named-state flags.
pub fn build_named(args: &StateArgs) -> Result<(String, DensityMatrix)> {
    let name = args
        .state
        .clone()
        .ok_or_else(|| CliError::Args("--state is required".into()))?;
    let key = name.replace('-', "_").to_ascii_lowercase();
    let no_p = |what: &str| match args.p {
        Some(_) => Err(CliError::Args(format!("--p does not apply to `{what}`"))),
        None => Ok(()),
    };
    let rho = match key.as_str() {
        "random" | "random_pe" => {
            no_p(&name)?;
            let dims = args.dims.clone().unwrap_or_else(|| vec![2, 2]);
            if key == "random" {
                states::random_density(&dims, args.seed, None)?
            } else {
                if dims.len() < 2 {
                    return Err(CliError::Args(
                        "random-pe needs at least two subsystems".into(),
                    ));
                }
                states::random_fully_product_state(&dims, args.seed, true)?
            }
        }
        _ => {
            let mut spec = NamedStateSpec::new(name.clone());
            if let Some(p) = args.p {
                spec = spec.with_param("p", p);
            }
            if let Some(dims) = &args.dims {
                if !matches!(key.as_str(), "maximally_mixed") {
                    return Err(CliError::Args(format!("--dims does not apply to `{name}`")));
                }
                let [da, db] = dims[..] else {
                    return Err(CliError::Args(
                        "maximally-mixed takes exactly two dims".into(),
                    ));
                };
                spec = spec.with_param("da", da as f64).with_param("db", db as f64);
            }
            states::make_named_state(&spec)?
        }
    };
    Ok((name, rho))
}

/// Resolves the input source: exactly one of `--state` and `--in`.
pub fn load_input(args: &InputArgs) -> Result<(String, DensityMatrix)> {
    match (&args.named.state, &args.input) {
        (Some(_), Some(_)) => Err(CliError::Args(
            "give exactly one of --state and --in, not both".into(),
        )),
        (None, None) => Err(CliError::Args(
            "an input is required: --state NAME or --in PATH".into(),
        )),
        (Some(_), None) => build_named(&args.named),
        (None, Some(path)) => {
            if args.named.p.is_some() || args.named.dims.is_some() {
                return Err(CliError::Args(
                    "--p and --dims only apply to named states".into(),
                ));
            }
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok((path.display().to_string(), states::from_text(&text)?))
        }
    }
}

fn map_kind(map: MapArg, x: f64) -> Result<MapKind> {
    let kind = match map {
        MapArg::Transpose => MapKind::Transpose,
        MapArg::Power => MapKind::PowerMap(x),
    };
    Ok(kind.validate()?)
}

fn x_field(kind: MapKind) -> Option<f64> {
    match kind {
        MapKind::Transpose => None,
        MapKind::PowerMap(x) => Some(x),
    }
}

fn map_name(kind: MapKind) -> &'static str {
    match kind {
        MapKind::Transpose => "transpose",
        MapKind::PowerMap(_) => "power",
    }
}

fn require_bipartite(rho: &DensityMatrix) -> Result<()> {
    match rho.num_subsystems() {
        2 => Ok(()),
        m => Err(CliError::Args(format!(
            "this command needs a bipartite state, got {m} subsystems"
        ))),
    }
}

/// Detection threshold: `--tol`, then `ENCE_TOL`, then the default.
pub fn detection_threshold(flag: Option<f64>) -> Result<f64> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Args(format!("{TOL_ENV}=`{s}` is not a number")))?,
            Err(_) => DETECTION_THRESHOLD,
        },
    };
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Args(format!(
            "tolerance {tol} must be finite and nonnegative"
        )));
    }
    Ok(tol)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
pub struct MeasureRecord {
    pub state: String,
    pub dims: Vec<usize>,
    pub map: String,
    pub x: Option<f64>,
    pub side: String,
    pub measure: String,
    pub value: f64,
    pub spectrum_in: Vec<f64>,
    pub spectrum_out: Vec<f64>,
}

pub fn run_gen(args: &GenArgs) -> Result<()> {
    let (_, rho) = build_named(&args.named)?;
    emit(&args.out, &states::to_text(&rho))
}

pub fn measure_record(args: &MeasureArgs) -> Result<MeasureRecord> {
    let (state, rho) = load_input(&args.input)?;
    require_bipartite(&rho)?;
    let side = Side::from(args.map.side);
    let (map, x, result) = match args.measure {
        MeasureArg::Weighted => {
            let weights = args
                .weights
                .clone()
                .unwrap_or_else(|| vec![1.0; args.xs.len() + 1]);
            if weights.len() != args.xs.len() + 1 {
                return Err(CliError::Args(format!(
                    "--weights needs {} values (transpose, then one per --xs entry), got {}",
                    args.xs.len() + 1,
                    weights.len()
                )));
            }
            let powers: Vec<(f64, f64)> = args
                .xs
                .iter()
                .copied()
                .zip(weights[1..].iter().copied())
                .collect();
            let spec = WeightedMeasureSpec::transpose_and_powers(weights[0], &powers);
            (
                "weighted".to_string(),
                None,
                measures::weighted_measure(&rho, &spec)?,
            )
        }
        measure => {
            let kind = map_kind(args.map.map, args.map.x)?;
            let spec = EnceMapSpec::new(kind, side)?;
            let result = match measure {
                MeasureArg::D => measures::measure_d(&rho, &spec)?,
                MeasureArg::Q => measures::measure_q(&rho, &spec)?,
                _ => measures::measure_q_tilde(&rho, kind)?,
            };
            (map_name(kind).to_string(), x_field(kind), result)
        }
    };
    Ok(MeasureRecord {
        state,
        dims: rho.dims().to_vec(),
        map,
        x,
        side: result.side.as_str().to_string(),
        measure: result.measure.as_str().to_string(),
        value: result.value,
        spectrum_in: result.spectrum_in,
        spectrum_out: result.spectrum_out,
    })
}

pub fn run_measure(args: &MeasureArgs) -> Result<()> {
    let record = measure_record(args)?;
    emit(&args.out, &to_json(&record))
}

/// Sample points `from, from + step, …` up to `to` inclusive.
pub fn sweep_points(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) {
        return Err(CliError::Args("sweep bounds must be finite".into()));
    }
    if step <= 0.0 {
        return Err(CliError::Args(format!(
            "--step must be positive, got {step}"
        )));
    }
    if to < from {
        return Err(CliError::Args(format!(
            "--to ({to}) is below --from ({from})"
        )));
    }
    let span = (to - from) / step;
    let count = (span + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(CliError::Args(format!(
            "sweep has {count} samples, more than 10^6"
        )));
    }
    Ok((0..count)
        .map(|i| {
            if i + 1 == count && (span - span.round()).abs() < 1e-9 {
                to
            } else {
                from + i as f64 * step
            }
        })
        .collect())
}

struct SweepRow {
    param: f64,
    d: f64,
    q_right: f64,
    q_left: f64,
    q_tilde: f64,
}

fn sweep_row(param: f64, rho: &DensityMatrix, kind: MapKind, side: Side) -> Result<SweepRow> {
    let d = measures::measure_d(rho, &EnceMapSpec::new(kind, side)?)?.value;
    let qt = measures::measure_q_tilde(rho, kind)?;
    Ok(SweepRow {
        param,
        d,
        q_right: qt.components[0].value,
        q_left: qt.components[1].value,
        q_tilde: qt.value,
    })
}

/// Evaluates `eval` on every point, in parallel, keeping the input order.
fn evaluate_in_order<F>(points: &[f64], eval: F) -> Vec<Result<SweepRow>>
where
    F: Fn(f64) -> Result<SweepRow> + Sync,
{
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = points.len().div_ceil(threads).max(1);
    let eval = &eval;
    std::thread::scope(|scope| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|&v| eval(v)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}

pub fn sweep_csv(args: &SweepArgs) -> Result<String> {
    let points = sweep_points(args.from, args.to, args.step)?;
    let side = Side::from(args.map.side);
    let rows = match args.var {
        SweepVar::P => {
            if args.input.input.is_some() {
                return Err(CliError::Args(
                    "--var p needs a named state family, not --in".into(),
                ));
            }
            if args.input.named.p.is_some() {
                return Err(CliError::Args("--p is set by the sweep; drop it".into()));
            }
            let kind = map_kind(args.map.map, args.map.x)?;
            evaluate_in_order(&points, |p| {
                let named = StateArgs {
                    p: Some(p),
                    ..args.input.named.clone()
                };
                let (_, rho) = build_named(&named)?;
                require_bipartite(&rho)?;
                sweep_row(p, &rho, kind, side)
            })
        }
        SweepVar::X => {
            if args.map.map != MapArg::Power {
                return Err(CliError::Args("--var x needs --map power".into()));
            }
            let (_, rho) = load_input(&args.input)?;
            require_bipartite(&rho)?;
            for &x in &points {
                MapKind::PowerMap(x).validate()?;
            }
            evaluate_in_order(&points, |x| sweep_row(x, &rho, MapKind::PowerMap(x), side))
        }
    };
    let mut csv = String::from("param,value_D,value_Q_R,value_Q_L,value_Qtilde\n");
    for row in rows {
        let r = row?;
        writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.param, r.d, r.q_right, r.q_left, r.q_tilde
        )
        .expect("writing to a String");
    }
    Ok(csv)
}

pub fn run_sweep(args: &SweepArgs) -> Result<()> {
    let csv = sweep_csv(args)?;
    emit(&args.out, &csv)
}

#[derive(Debug, Serialize)]
pub struct MapColumns {
    pub map: String,
    pub x: Option<f64>,
    #[serde(rename = "D_R")]
    pub d_right: f64,
    #[serde(rename = "D_L")]
    pub d_left: f64,
    #[serde(rename = "Q_R")]
    pub q_right: f64,
    #[serde(rename = "Q_L")]
    pub q_left: f64,
    #[serde(rename = "Q_tilde")]
    pub q_tilde: f64,
}

impl MapColumns {
    fn max(&self) -> f64 {
        [
            self.d_right,
            self.d_left,
            self.q_right,
            self.q_left,
            self.q_tilde,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Serialize)]
pub struct SplittingMeasures {
    pub splitting: String,
    pub oracle: String,
    pub transpose: MapColumns,
    pub power: MapColumns,
}

#[derive(Debug, Serialize)]
pub struct DetectRecord {
    pub state: String,
    pub dims: Vec<usize>,
    pub oracle: String,
    pub witnesses: Vec<String>,
    pub measures: Vec<SplittingMeasures>,
    pub verdict: String,
}

fn map_columns(rho: &DensityMatrix, kind: MapKind) -> Result<MapColumns> {
    let d_right = measures::measure_d(rho, &EnceMapSpec::new(kind, Side::Right)?)?.value;
    let d_left = measures::measure_d(rho, &EnceMapSpec::new(kind, Side::Left)?)?.value;
    let qt = measures::measure_q_tilde(rho, kind)?;
    Ok(MapColumns {
        map: map_name(kind).to_string(),
        x: x_field(kind),
        d_right,
        d_left,
        q_right: qt.components[0].value,
        q_left: qt.components[1].value,
        q_tilde: qt.value,
    })
}

pub fn detect_record(args: &DetectArgs) -> Result<DetectRecord> {
    let tol = detection_threshold(args.tol)?;
    let power = map_kind(MapArg::Power, args.x)?;
    let (state, rho) = load_input(&args.input)?;
    let splittings = multipartite::enumerate_bipartitions(rho.num_subsystems())?;
    let mut rows = Vec::with_capacity(splittings.len());
    let mut witnesses = Vec::new();
    let mut statuses = Vec::with_capacity(splittings.len());
    for s in &splittings {
        let verdict = multipartite::pe_oracle_bipartite(&rho, s)?;
        if let Some(w) = &verdict.witness {
            witnesses.push(format!("{s}: {w}"));
        }
        statuses.push(verdict.status);
        let flat = rho.bipartition(s.left())?;
        rows.push(SplittingMeasures {
            splitting: s.to_string(),
            oracle: verdict.status.as_str().to_string(),
            transpose: map_columns(&flat, MapKind::Transpose)?,
            power: map_columns(&flat, power)?,
        });
    }
    let oracle = if statuses.contains(&PeStatus::NoPE) {
        PeStatus::NoPE
    } else if statuses.contains(&PeStatus::Indeterminate) {
        PeStatus::Indeterminate
    } else {
        PeStatus::HasPE
    };
    let detected = rows
        .iter()
        .any(|r| r.transpose.max() > tol || r.power.max() > tol);
    let verdict = if oracle == PeStatus::NoPE || detected {
        "nonclassical"
    } else if oracle == PeStatus::HasPE {
        "classical"
    } else {
        "undetected"
    };
    Ok(DetectRecord {
        state,
        dims: rho.dims().to_vec(),
        oracle: oracle.as_str().to_string(),
        witnesses,
        measures: rows,
        verdict: verdict.to_string(),
    })
}

pub fn run_detect(args: &DetectArgs) -> Result<()> {
    let record = detect_record(args)?;
    emit(&args.out, &to_json(&record))
}

#[derive(Debug, Serialize)]
pub struct SplittingValue {
    pub splitting: String,
    #[serde(rename = "Q_tilde")]
    pub q_tilde: f64,
}

#[derive(Debug, Serialize)]
pub struct SplittingsRecord {
    pub state: String,
    pub dims: Vec<usize>,
    pub map: String,
    pub x: Option<f64>,
    pub rows: Vec<SplittingValue>,
    pub min: f64,
    pub max: f64,
    pub avg: f64,
}

pub fn splittings_record(args: &SplittingsArgs) -> Result<SplittingsRecord> {
    let kind = map_kind(args.map, args.x)?;
    let (state, rho) = load_input(&args.input)?;
    let table = multipartite::splitting_table(&rho, kind)?;
    Ok(SplittingsRecord {
        state,
        dims: rho.dims().to_vec(),
        map: map_name(kind).to_string(),
        x: x_field(kind),
        rows: table
            .rows
            .iter()
            .map(|r| SplittingValue {
                splitting: r.splitting.to_string(),
                q_tilde: r.value,
            })
            .collect(),
        min: table.min,
        max: table.max,
        avg: table.avg,
    })
}

pub fn run_splittings(args: &SplittingsArgs) -> Result<()> {
    let record = splittings_record(args)?;
    emit(&args.out, &to_json(&record))
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Measure(a) => run_measure(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Detect(a) => run_detect(a),
        Command::Splittings(a) => run_splittings(a),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
