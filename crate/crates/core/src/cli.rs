//! Command layer behind the `tensor-modes` binary.
//!
//! Every subcommand reads its inputs from flags or a tensor JSON file and
//! writes a table (CSV or JSON) to `--out`, or to standard output when no
//! path is given. Each written file gets a `<file>.manifest.json` companion
//! recording the tool version, the parsed flags, the SHA-256 of the input
//! file and a UTC timestamp.
//!
//! Exit codes: 0 success, 1 input or argument error, 2 degenerate family,
//! 3 blow-up during integration.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::casestudy::{
    bifurcation_scan, critical_angles, offset_experiment_with, restrict, QuarticFamily, OFFSET_DT,
};
use crate::dynamics::{
    boundedness, find_period, integrate_mode, psi, Boundedness, ReducedMode, Scheme,
    SecondOrderSystem, State,
};
use crate::error::Error;
use crate::spectra::{
    find_eigenpairs, table_compatibility, CriticalKind, SolverConfig, SpectrumReport,
};
use crate::symtensor::{random_polynomial, HomogeneousPolynomial};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_DEGENERATE: u8 = 2;
pub const EXIT_BLOW_UP: u8 = 3;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "tensor-modes",
    version,
    about = "Tensor eigenvectors as nonlinear normal modes of homogeneous potentials"
)]
pub struct Cli {
    /// Seed for random starts and random tensors.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Residual tolerance for eigenpairs.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Unit for reported angles.
    #[arg(long, global = true, value_enum, default_value_t = ThetaUnits::Rad)]
    pub theta_units: ThetaUnits,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaUnits {
    Rad,
    Pi,
}

impl ThetaUnits {
    fn convert(self, theta: f64) -> f64 {
        match self {
            ThetaUnits::Rad => theta,
            ThetaUnits::Pi => theta / std::f64::consts::PI,
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Real eigenpairs of a tensor file. With --out, writes the requested
    /// format and the other one next to it.
    Eigs(EigsArgs),
    /// Integrate x'' = -grad V(x) / mass from (q0, v0).
    Simulate(SimulateArgs),
    /// Restricted potential W(theta) of a case-study family.
    Restrict(RestrictArgs),
    /// Critical angles of a case-study family with curvature and kind.
    Modes(FamilyArgs),
    /// Mode count of the lower-symmetry family over a beta range.
    Scan(ScanArgs),
    /// Counting diagnostics of a tensor file (always JSON).
    Check(CheckArgs),
    /// Scalar mode equation gamma'' = alpha gamma^p.
    Mode(ModeArgs),
    /// Offset experiment around a critical angle (always JSON).
    Offset(OffsetArgs),
    /// Seeded random tensor file (always JSON).
    Random(RandomArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SolverArgs {
    /// Deterministic start count; default max(200, 50 N_R).
    #[arg(long)]
    pub starts: Option<usize>,
    /// Additional seeded random starts.
    #[arg(long, default_value_t = 0)]
    pub random_starts: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub dedup_tol: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub degeneracy_tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct EigsArgs {
    pub tensor: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    pub tensor: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    Yoshida4,
    Leapfrog,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    pub tensor: PathBuf,
    /// Initial position, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub q0: Vec<f64>,
    /// Initial velocity, comma separated; zero when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub v0: Vec<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    /// Keep every K-th sample (the last sample is always kept).
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, value_enum, default_value_t = SchemeArg::Yoshida4)]
    pub scheme: SchemeArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Higher,
    Lower,
}

#[derive(Debug, Args, Serialize)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    /// y^4 coefficient of the lower-symmetry family.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
}

impl FamilyArgs {
    fn family(&self) -> Result<QuarticFamily, Error> {
        match (self.family, self.alpha) {
            (FamilyKind::Higher, None) => Ok(QuarticFamily::HigherSymmetry { beta: self.beta }),
            (FamilyKind::Higher, Some(_)) => Err(Error::InvalidArgument(
                "--alpha does not apply to the higher-symmetry family".into(),
            )),
            (FamilyKind::Lower, Some(alpha)) => Ok(QuarticFamily::LowerSymmetry {
                alpha,
                beta: self.beta,
            }),
            (FamilyKind::Lower, None) => Err(Error::InvalidArgument(
                "the lower-symmetry family needs --alpha".into(),
            )),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct RestrictArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 360)]
    pub samples: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub alpha: f64,
    /// lo:hi:step, inclusive of both ends.
    #[arg(long, allow_hyphen_values = true)]
    pub beta_range: String,
}

#[derive(Debug, Args, Serialize)]
pub struct ModeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long)]
    pub p: u32,
    /// Initial gamma.
    #[arg(long, allow_hyphen_values = true)]
    pub y1: f64,
    /// Initial gamma'.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub y2: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    /// Stop once |gamma| exceeds this value.
    #[arg(long)]
    pub escape: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct OffsetArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// Critical angle in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub theta0: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1e-3)]
    pub offset: f64,
    #[arg(long, default_value_t = 100.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = OFFSET_DT)]
    pub dt: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct RandomArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub degree: u32,
    /// Coefficients are uniform in [-bound, bound].
    #[arg(long, default_value_t = 1.0)]
    pub bound: f64,
}

/// A failed run with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: err.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Error::Io(err).into()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x}"),
            Cell::Int(k) => k.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Rectangular output with a fixed column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| Error::Io(e.into_error()))
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, Error> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => json_bytes(self),
        }
    }
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, Error> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Provenance record written next to every output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub output: String,
    pub flags: serde_json::Value,
    pub input: Option<InputDigest>,
    pub timestamp: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

struct Context<'a> {
    cli: &'a Cli,
    input: Option<InputDigest>,
}

impl Context<'_> {
    fn read_tensor(&mut self, path: &Path) -> Result<HomogeneousPolynomial, Failure> {
        let bytes = fs::read(path).map_err(|e| Failure {
            code: EXIT_INPUT,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        self.input = Some(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        let text = String::from_utf8(bytes).map_err(|e| Failure {
            code: EXIT_INPUT,
            message: format!("{} is not UTF-8: {e}", path.display()),
        })?;
        HomogeneousPolynomial::from_json_str(&text).map_err(|e| Failure {
            code: EXIT_INPUT,
            message: format!("{}: {e}", path.display()),
        })
    }

    fn write_file(&self, path: &Path, bytes: &[u8]) -> Result<(), Failure> {
        fs::write(path, bytes)?;
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            output: path.display().to_string(),
            flags: serde_json::to_value(self.cli).map_err(Error::from)?,
            input: self.input.clone(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        };
        fs::write(manifest_path(path), json_bytes(&manifest)?)?;
        Ok(())
    }

    /// Writes to `--out` (plus manifest) or to standard output.
    fn emit(&self, bytes: &[u8]) -> Result<(), Failure> {
        match &self.cli.out {
            Some(path) => self.write_file(path, bytes),
            None => {
                io::stdout().write_all(bytes)?;
                Ok(())
            }
        }
    }

    fn emit_table(&self, table: &Table) -> Result<(), Failure> {
        self.emit(&table.render(self.cli.format)?)
    }
}

fn solver_config(cli: &Cli, args: &SolverArgs) -> SolverConfig {
    SolverConfig {
        starts: args.starts,
        random_starts: args.random_starts,
        seed: cli.seed,
        tol: cli.tol,
        dedup_tol: args.dedup_tol,
        max_iter: args.max_iter,
        degeneracy_tol: args.degeneracy_tol,
    }
}

fn degenerate_failure(report: &SpectrumReport) -> Failure {
    Failure {
        code: EXIT_DEGENERATE,
        message: format!(
            "degenerate family: {} distinct critical points exceed twice the eigenspace bound {}; \
             the critical set is not finite and counting checks are inapplicable",
            report.real_count, report.bezout_bound
        ),
    }
}

/// One row per eigenpair: `lambda, v1..vm, [theta,] kind, morse_index,
/// ph_index, multiplicity_one, residual`. `theta` appears for planar tensors.
pub fn spectrum_table(report: &SpectrumReport, units: ThetaUnits) -> Table {
    let planar = report.dim == 2;
    let mut columns = vec!["lambda".to_string()];
    columns.extend((1..=report.dim).map(|i| format!("v{i}")));
    if planar {
        columns.push("theta".into());
    }
    columns.extend(
        [
            "kind",
            "morse_index",
            "ph_index",
            "multiplicity_one",
            "residual",
        ]
        .map(String::from),
    );
    let mut table = Table::new(columns);
    for e in &report.eigenpairs {
        let mut row = vec![Cell::Num(e.pair.lambda)];
        row.extend(e.pair.v.iter().map(|&x| Cell::Num(x)));
        if planar {
            row.push(Cell::Num(units.convert(e.pair.angle())));
        }
        row.push(Cell::Text(e.class.kind.to_string()));
        row.push(Cell::Int(e.class.morse_index as i64));
        row.push(
            e.class
                .ph_index
                .map_or(Cell::Empty, |k| Cell::Int(k as i64)),
        );
        row.push(e.multiplicity_one.as_str().into());
        row.push(Cell::Num(e.pair.residual));
        table.push(row);
    }
    table
}

fn cmd_eigs(ctx: &mut Context, args: &EigsArgs) -> Result<(), Failure> {
    let p = ctx.read_tensor(&args.tensor)?;
    let report = find_eigenpairs(&p, &solver_config(ctx.cli, &args.solver))?;
    let table = spectrum_table(&report, ctx.cli.theta_units);
    let json = json_bytes(&report)?;
    let csv = table.to_csv()?;
    let (primary, other) = match ctx.cli.format {
        Format::Csv => ((csv, Format::Csv), (json, Format::Json)),
        Format::Json => ((json, Format::Json), (csv, Format::Csv)),
    };
    ctx.emit(&primary.0)?;
    if let Some(out) = &ctx.cli.out {
        let companion = out.with_extension(other.1.extension());
        if &companion != out {
            ctx.write_file(&companion, &other.0)?;
        }
    }
    if report.degenerate_family {
        return Err(degenerate_failure(&report));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct CheckPoint<'a> {
    v: &'a [f64],
    lambda: f64,
    kind: CriticalKind,
    morse_index: usize,
    ph_index: Option<i32>,
}

#[derive(Debug, Serialize)]
struct CensusCheck {
    max: u32,
    min: u32,
    saddles: BTreeMap<u32, u32>,
    degenerate: u32,
    compatible: Option<bool>,
}

#[derive(Debug, Serialize)]
struct CheckReport<'a> {
    dim: usize,
    degree: u32,
    bezout_bound: u64,
    real_count: usize,
    eigenspace_count: usize,
    parity: &'static str,
    chi: i64,
    index_sum: Option<i64>,
    index_sum_check: &'static str,
    degenerate_family: bool,
    census: CensusCheck,
    points: Vec<CheckPoint<'a>>,
}

fn cmd_check(ctx: &mut Context, args: &CheckArgs) -> Result<(), Failure> {
    let p = ctx.read_tensor(&args.tensor)?;
    let report = find_eigenpairs(&p, &solver_config(ctx.cli, &args.solver))?;
    let mut census = CensusCheck {
        max: 0,
        min: 0,
        saddles: BTreeMap::new(),
        degenerate: 0,
        compatible: None,
    };
    for e in &report.eigenpairs {
        match e.class.kind {
            CriticalKind::Maximum => census.max += 1,
            CriticalKind::Minimum => census.min += 1,
            CriticalKind::Saddle(k) => *census.saddles.entry(k as u32).or_default() += 1,
            CriticalKind::Degenerate => census.degenerate += 1,
        }
    }
    if census.degenerate == 0 && !report.degenerate_family && report.degree > 2 {
        census.compatible = Some(table_compatibility(
            census.max,
            census.min,
            &census.saddles,
            report.dim,
            report.degree - 1,
        ));
    }
    let out = CheckReport {
        dim: report.dim,
        degree: report.degree,
        bezout_bound: report.bezout_bound,
        real_count: report.real_count,
        eigenspace_count: report.eigenspace_count,
        parity: report.parity.as_str(),
        chi: report.chi,
        index_sum: report.index_sum,
        index_sum_check: report.index_sum_ok.as_str(),
        degenerate_family: report.degenerate_family,
        census,
        points: report
            .eigenpairs
            .iter()
            .map(|e| CheckPoint {
                v: &e.pair.v,
                lambda: e.pair.lambda,
                kind: e.class.kind,
                morse_index: e.class.morse_index,
                ph_index: e.class.ph_index,
            })
            .collect(),
    };
    ctx.emit(&json_bytes(&out)?)?;
    if report.degenerate_family {
        return Err(degenerate_failure(&report));
    }
    Ok(())
}

fn parse_vector(name: &str, values: &[f64], dim: usize) -> Result<Vec<f64>, Failure> {
    if values.is_empty() && name == "v0" {
        return Ok(vec![0.0; dim]);
    }
    if values.len() != dim {
        return Err(Failure {
            code: EXIT_INPUT,
            message: format!(
                "--{name} has {} components but the tensor has dimension {dim}",
                values.len()
            ),
        });
    }
    Ok(values.to_vec())
}

fn cmd_simulate(ctx: &mut Context, args: &SimulateArgs) -> Result<(), Failure> {
    let p = ctx.read_tensor(&args.tensor)?;
    let dim = p.dim();
    let q0 = parse_vector("q0", &args.q0, dim)?;
    let v0 = parse_vector("v0", &args.v0, dim)?;
    if args.stride == 0 {
        return Err(Error::InvalidArgument("--stride must be positive".into()).into());
    }
    let sys = SecondOrderSystem::new(p, args.mass)?;
    let s0 = State::new(q0, v0);
    let mut columns = vec!["t".to_string()];
    columns.extend((1..=dim).map(|i| format!("q{i}")));
    columns.extend((1..=dim).map(|i| format!("v{i}")));
    columns.push("energy".into());
    let mut table = Table::new(columns);
    let row = |s: &State| -> Result<Vec<Cell>, Error> {
        let mut r = vec![Cell::Num(s.t)];
        r.extend(s.q.iter().chain(&s.v).map(|&x| Cell::Num(x)));
        r.push(Cell::Num(sys.energy(s)?));
        Ok(r)
    };

    let at_rest_at_origin = s0.q.iter().chain(&s0.v).all(|&x| x == 0.0);
    if at_rest_at_origin {
        table.push(row(&s0)?);
        ctx.emit_table(&table)?;
        eprintln!("equilibrium start: energy drift 0");
        return Ok(());
    }

    let scheme = match args.scheme {
        SchemeArg::Yoshida4 => Scheme::Yoshida4,
        SchemeArg::Leapfrog => Scheme::Leapfrog,
    };
    let traj = sys.integrate_with(&s0, args.dt, args.t_end, scheme)?;
    let n = traj.samples.len();
    for (k, s) in traj.samples.iter().enumerate() {
        if k % args.stride == 0 || k + 1 == n {
            table.push(row(s)?);
        }
    }
    ctx.emit_table(&table)?;
    eprintln!("energy drift: {:e}", traj.energy_drift);
    if let Some(t) = traj.blow_up {
        return Err(Failure {
            code: EXIT_BLOW_UP,
            message: format!(
                "blow-up: state exceeded the runaway limit at t = {t}; trajectory truncated at t = {}",
                traj.last().t
            ),
        });
    }
    Ok(())
}

fn cmd_restrict(ctx: &mut Context, args: &RestrictArgs) -> Result<(), Failure> {
    let family = args.family.family()?;
    let profile = restrict(&family, args.samples)?;
    let mut table = Table::new(["theta", "W"]);
    for (&t, &w) in profile.thetas.iter().zip(&profile.values) {
        table.push(vec![
            Cell::Num(ctx.cli.theta_units.convert(t)),
            Cell::Num(w),
        ]);
    }
    ctx.emit_table(&table)
}

fn cmd_modes(ctx: &mut Context, args: &FamilyArgs) -> Result<(), Failure> {
    let set = critical_angles(&args.family()?)?;
    let mut table = Table::new(["theta", "d2W", "kind", "c_theta"]);
    for m in &set.modes {
        table.push(vec![
            Cell::Num(ctx.cli.theta_units.convert(m.theta)),
            Cell::Num(m.d2w),
            m.kind.as_str().into(),
            Cell::Num(m.c_theta),
        ]);
    }
    ctx.emit_table(&table)
}

/// Parses `lo:hi:step`.
pub fn parse_range(s: &str) -> Result<(f64, f64, f64), Error> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::InvalidArgument(format!("expected lo:hi:step, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    Ok((num(parts[0])?, num(parts[1])?, num(parts[2])?))
}

/// Widest angle list of any scan row (four axes plus four off-axis points).
const SCAN_ANGLE_COLUMNS: usize = 8;

fn cmd_scan(ctx: &mut Context, args: &ScanArgs) -> Result<(), Failure> {
    let (lo, hi, step) = parse_range(&args.beta_range)?;
    let scan = bifurcation_scan(args.alpha, lo, hi, step)?;
    let mut columns = vec!["beta".to_string(), "count".to_string()];
    columns.extend((1..=SCAN_ANGLE_COLUMNS).map(|i| format!("theta{i}")));
    let mut table = Table::new(columns);
    for row in &scan.rows {
        let mut r = vec![Cell::Num(row.beta), Cell::Int(row.count as i64)];
        r.extend((0..SCAN_ANGLE_COLUMNS).map(|i| {
            row.angles
                .get(i)
                .map_or(Cell::Empty, |&t| Cell::Num(ctx.cli.theta_units.convert(t)))
        }));
        table.push(r);
    }
    ctx.emit_table(&table)?;
    for t in &scan.transitions {
        eprintln!(
            "transition at beta = {:.9} ({} -> {} modes)",
            t.beta, t.count_below, t.count_above
        );
    }
    Ok(())
}

fn cmd_mode(ctx: &mut Context, args: &ModeArgs) -> Result<(), Failure> {
    if args.p == 0 {
        return Err(Error::InvalidArgument("--p must be at least 1".into()).into());
    }
    if args.stride == 0 {
        return Err(Error::InvalidArgument("--stride must be positive".into()).into());
    }
    let mode = ReducedMode::new(args.alpha, args.p);
    let traj = integrate_mode(&mode, args.y1, args.y2, args.dt, args.t_end, args.escape)?;
    let mut table = Table::new(["t", "gamma", "gammadot", "psi"]);
    let n = traj.samples.len();
    for (k, s) in traj.samples.iter().enumerate() {
        if k % args.stride == 0 || k + 1 == n {
            table.push(vec![
                Cell::Num(s.t),
                Cell::Num(s.gamma),
                Cell::Num(s.gammadot),
                Cell::Num(psi(&mode, s.gamma, s.gammadot)),
            ]);
        }
    }
    ctx.emit_table(&table)?;
    let class = boundedness(&mode);
    eprintln!(
        "class: {}",
        serde_json::to_value(class)
            .map_err(Error::from)?
            .as_str()
            .unwrap_or("?")
    );
    eprintln!("psi drift: {:e}", traj.psi_drift(&mode));
    if class == Boundedness::Periodic {
        if let Some(est) = find_period(&mode, args.y1, args.y2, args.dt, args.t_end)? {
            eprintln!("period: {}", est.period);
        }
    }
    if let Some(t) = traj.escape {
        return Err(Failure {
            code: EXIT_BLOW_UP,
            message: format!("|gamma| left the bounded range at t = {t}"),
        });
    }
    Ok(())
}

fn cmd_offset(ctx: &mut Context, args: &OffsetArgs) -> Result<(), Failure> {
    let family = args.family.family()?;
    let outcome = offset_experiment_with(&family, args.theta0, args.offset, args.t_end, args.dt)?;
    ctx.emit(&json_bytes(&outcome)?)
}

fn cmd_random(ctx: &mut Context, args: &RandomArgs) -> Result<(), Failure> {
    if !(args.bound > 0.0) {
        return Err(Error::InvalidArgument("--bound must be positive".into()).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cli.seed);
    let p = random_polynomial(args.dim, args.degree, args.bound, &mut rng)?;
    let mut text = p.to_json_string();
    text.push('\n');
    ctx.emit(text.as_bytes())
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<(), Failure> {
    let mut ctx = Context { cli, input: None };
    match &cli.command {
        Command::Eigs(a) => cmd_eigs(&mut ctx, a),
        Command::Simulate(a) => cmd_simulate(&mut ctx, a),
        Command::Restrict(a) => cmd_restrict(&mut ctx, a),
        Command::Modes(a) => cmd_modes(&mut ctx, a),
        Command::Scan(a) => cmd_scan(&mut ctx, a),
        Command::Check(a) => cmd_check(&mut ctx, a),
        Command::Mode(a) => cmd_mode(&mut ctx, a),
        Command::Offset(a) => cmd_offset(&mut ctx, a),
        Command::Random(a) => cmd_random(&mut ctx, a),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Usage errors map to exit code 1.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_OK
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
