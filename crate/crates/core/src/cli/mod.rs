//! Command-line front end.
//!
//! Exit codes: 0 success, 1 argument error, 2 numerical or I/O failure,
//! 3 verification failure.

mod scan;
mod svg;
pub mod verify;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::delay::{delay_jump, delay_jump_at_maximum, wigner_delay, JumpReport, JUMP_ENERGY};
use crate::error::Error;
use crate::levels::critical_depth;
use crate::model::{Geometry, Potential};
use crate::phase::{phase_curve, EnergyGrid, GridKind, PhaseCurve};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ARGUMENT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

pub const CSV_HEADER: &str = "E_hartree,delta_rad,tau_au,fd_error";

#[derive(Parser, Debug)]
#[command(
    name = "shallow-delay",
    version,
    about = "Phase shifts and Wigner time delays for shallow spherical potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Critical depth at which the first bound state of angular momentum l appears.
    Critical(CriticalArgs),
    /// Continuous phase shift on an energy grid.
    Phase(CurveArgs),
    /// Wigner time delay on an energy grid.
    Delay(CurveArgs),
    /// Delay jumps across the critical depth.
    Jump(JumpArgs),
    /// Regenerate the data sets behind one figure.
    Scan(scan::ScanArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Well,
    Shell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    Log,
    Linear,
}

impl From<Grid> for GridKind {
    fn from(g: Grid) -> Self {
        match g {
            Grid::Log => GridKind::Log,
            Grid::Linear => GridKind::Linear,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct GeometryArgs {
    /// Potential family (same as --family)
    #[arg(value_enum, value_name = "FAMILY")]
    family_positional: Option<Family>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Well radius in bohr
    #[arg(long, default_value_t = 2.0)]
    radius: f64,
    /// Shell inner radius in bohr
    #[arg(long = "r-in", default_value_t = 5.0)]
    r_in: f64,
    /// Shell outer radius in bohr
    #[arg(long = "r-out", default_value_t = 7.0)]
    r_out: f64,
}

impl GeometryArgs {
    fn family(&self) -> Result<Option<Family>, Failure> {
        match (self.family_positional, self.family) {
            (Some(a), Some(b)) if a != b => Err(Failure::argument(
                "conflicting families given positionally and with --family",
            )),
            (a, b) => Ok(a.or(b)),
        }
    }

    fn geometry_for(&self, family: Family) -> Geometry {
        match family {
            Family::Well => Geometry::Well {
                radius: self.radius,
            },
            Family::Shell => Geometry::Shell {
                inner_radius: self.r_in,
                outer_radius: self.r_out,
            },
        }
    }

    fn geometry(&self) -> Result<Geometry, Failure> {
        let family = self
            .family()?
            .ok_or_else(|| Failure::argument("a potential family (well or shell) is required"))?;
        Ok(self.geometry_for(family))
    }
}

#[derive(Args, Debug)]
struct CriticalArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[arg(long, default_value_t = 0)]
    l: u32,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    /// Depth U0 in hartree
    #[arg(long)]
    depth: Option<f64>,
    /// Offset from the critical depth: U0 = U_c + ΔU (negative values go below)
    #[arg(long = "delta-u", allow_negative_numbers = true)]
    delta_u: Option<f64>,
    #[arg(long, default_value_t = 0)]
    l: u32,
    #[arg(long = "e-min", default_value_t = 5e-5)]
    e_min: f64,
    #[arg(long = "e-max", default_value_t = 1.0)]
    e_max: f64,
    #[arg(long, default_value_t = 400)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Grid::Log)]
    grid: Grid,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also write an SVG plot to this file
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Read the job from a JSON file instead of the flags above
    #[arg(long)]
    job: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct JumpArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[arg(long)]
    l: Option<u32>,
    /// Depth offsets; comma separated
    #[arg(long = "delta-u", value_delimiter = ',', allow_negative_numbers = true)]
    delta_u: Vec<f64>,
    /// Comparison energy in hartree
    #[arg(long, conflicts_with = "at_maximum")]
    energy: Option<f64>,
    /// Compare at the maximum of the below-critical delay in [e-min, e-max]
    #[arg(long = "at-maximum")]
    at_maximum: bool,
    #[arg(long = "e-min", default_value_t = 5e-5)]
    e_min: f64,
    #[arg(long = "e-max", default_value_t = 1.0)]
    e_max: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Reduced suite
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A phase or delay job, as read from `--job` or assembled from flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub family: Family,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_r_in")]
    pub r_in: f64,
    #[serde(default = "default_r_out")]
    pub r_out: f64,
    #[serde(default)]
    pub depth: Option<f64>,
    #[serde(default)]
    pub delta_u: Option<f64>,
    #[serde(default)]
    pub l: u32,
    #[serde(default = "default_e_min")]
    pub e_min: f64,
    #[serde(default = "default_e_max")]
    pub e_max: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_grid")]
    pub grid: Grid,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: Format,
    #[serde(default)]
    pub svg: Option<PathBuf>,
}

fn default_radius() -> f64 {
    2.0
}
fn default_r_in() -> f64 {
    5.0
}
fn default_r_out() -> f64 {
    7.0
}
fn default_e_min() -> f64 {
    5e-5
}
fn default_e_max() -> f64 {
    1.0
}
fn default_points() -> usize {
    400
}
fn default_grid() -> Grid {
    Grid::Log
}
fn default_format() -> Format {
    Format::Csv
}

impl JobSpec {
    pub fn geometry(&self) -> Geometry {
        match self.family {
            Family::Well => Geometry::Well {
                radius: self.radius,
            },
            Family::Shell => Geometry::Shell {
                inner_radius: self.r_in,
                outer_radius: self.r_out,
            },
        }
    }

    pub fn potential(&self) -> crate::Result<Potential> {
        let geometry = self.geometry();
        let depth = match (self.depth, self.delta_u) {
            (Some(d), None) => d,
            (None, Some(du)) => critical_depth(&geometry, self.l)?.u_critical + du,
            _ => {
                return Err(Error::InvalidArgument(
                    "give exactly one of depth and delta-u".into(),
                ))
            }
        };
        geometry.with_depth(depth)
    }

    pub fn grid(&self) -> EnergyGrid {
        EnergyGrid {
            e_min: self.e_min,
            e_max: self.e_max,
            points: self.points,
            kind: self.grid.into(),
        }
    }
}

impl CurveArgs {
    fn job(&self) -> Result<JobSpec, Failure> {
        if let Some(path) = &self.job {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::argument(format!("cannot read {}: {e}", path.display())))?;
            return serde_json::from_str(&text)
                .map_err(|e| Failure::argument(format!("bad job file {}: {e}", path.display())));
        }
        let family = self
            .geometry
            .family()?
            .ok_or_else(|| Failure::argument("a potential family (well or shell) is required"))?;
        Ok(JobSpec {
            family,
            radius: self.geometry.radius,
            r_in: self.geometry.r_in,
            r_out: self.geometry.r_out,
            depth: self.depth,
            delta_u: self.delta_u,
            l: self.l,
            e_min: self.e_min,
            e_max: self.e_max,
            points: self.points,
            grid: self.grid,
            out: self.out.clone(),
            format: self.format,
            svg: self.svg.clone(),
        })
    }
}

#[derive(Debug)]
enum Failure {
    Argument(String),
    Numerical(Error),
    Io(String),
    Verify,
}

impl Failure {
    fn argument(msg: impl Into<String>) -> Self {
        Failure::Argument(msg.into())
    }

    fn code(&self) -> i32 {
        match self {
            Failure::Argument(_) => EXIT_ARGUMENT,
            Failure::Numerical(_) | Failure::Io(_) => EXIT_NUMERICAL,
            Failure::Verify => EXIT_VERIFY,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_argument_error() {
            Failure::Argument(e.to_string())
        } else {
            Failure::Numerical(e)
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Parse `args` (program name first), run the command and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_ARGUMENT
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            match &f {
                Failure::Argument(m) => eprintln!("error: {m}"),
                Failure::Numerical(e) => eprintln!("error: {e}"),
                Failure::Io(m) => eprintln!("error: {m}"),
                Failure::Verify => eprintln!("verification failed"),
            }
            f.code()
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Critical(a) => cmd_critical(&a),
        Command::Phase(a) => cmd_curve(&a.job()?, CurveKind::Phase),
        Command::Delay(a) => cmd_curve(&a.job()?, CurveKind::Delay),
        Command::Jump(a) => cmd_jump(&a),
        Command::Scan(a) => scan::cmd_scan(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn cmd_critical(args: &CriticalArgs) -> Result<(), Failure> {
    let level = critical_depth(&args.geometry.geometry()?, args.l)?;
    let json = serde_json::to_string(&level).expect("plain struct serializes");
    println!("{json}");
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CurveKind {
    Phase,
    Delay,
}

/// One output row: the continuous phase and the delay at the same energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    #[serde(rename = "E_hartree")]
    pub energy: f64,
    #[serde(rename = "delta_rad")]
    pub delta: f64,
    #[serde(rename = "tau_au")]
    pub tau: f64,
    pub fd_error: f64,
}

pub fn curve_rows(curve: &PhaseCurve) -> crate::Result<Vec<CurveRow>> {
    use rayon::prelude::*;
    curve
        .points
        .par_iter()
        .map(|p| {
            let d = wigner_delay(&curve.potential, curve.l, p.energy)?;
            Ok(CurveRow {
                energy: p.energy,
                delta: p.continuous,
                tau: d.tau,
                fd_error: d.fd_error,
            })
        })
        .collect()
}

/// Twelve significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn rows_to_csv(rows: &[CurveRow]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt_num(r.energy),
            fmt_num(r.delta),
            fmt_num(r.tau),
            fmt_num(r.fd_error)
        );
    }
    s
}

fn cmd_curve(job: &JobSpec, kind: CurveKind) -> Result<(), Failure> {
    let potential = job.potential()?;
    let curve = phase_curve(&potential, job.l, &job.grid())?;
    let rows = curve_rows(&curve)?;
    let body = match job.format {
        Format::Csv => rows_to_csv(&rows),
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                l: u32,
                potential: &'a Potential,
                levinson_count: u32,
                branch_shift: i64,
                rows: &'a [CurveRow],
            }
            let out = Out {
                l: job.l,
                potential: &potential,
                levinson_count: curve.levinson_count,
                branch_shift: curve.branch_shift,
                rows: &rows,
            };
            serde_json::to_string_pretty(&out).expect("plain struct serializes") + "\n"
        }
    };
    let plot = job.svg.as_ref().map(|path| {
        let series = vec![svg::Series {
            label: format!("U0 = {:.5}", potential.depth()),
            points: rows
                .iter()
                .map(|r| {
                    let y = match kind {
                        CurveKind::Phase => r.delta,
                        CurveKind::Delay => r.tau,
                    };
                    (r.energy, y)
                })
                .collect(),
        }];
        let (title, ylabel) = match kind {
            CurveKind::Phase => (format!("phase shift, l = {}", job.l), "delta (rad)"),
            CurveKind::Delay => (format!("time delay, l = {}", job.l), "tau (a.u.)"),
        };
        let log_x = job.grid == Grid::Log;
        (
            path.clone(),
            svg::plot(&title, "E (hartree)", ylabel, &series, log_x),
        )
    });

    let mut files = Vec::new();
    if let Some(path) = &job.out {
        files.push((path.clone(), body.clone()));
    }
    if let Some(p) = plot {
        files.push(p);
    }
    write_all_or_nothing(&files)?;
    if job.out.is_none() {
        print!("{body}");
    }
    Ok(())
}

/// Write every file or, on the first failure, remove the ones already written.
fn write_all_or_nothing(files: &[(PathBuf, String)]) -> Result<(), Failure> {
    let mut written: Vec<&Path> = Vec::new();
    for (path, content) in files {
        if let Err(e) = write_atomic(path, content) {
            for p in written {
                let _ = fs::remove_file(p);
            }
            return Err(Failure::Io(format!("cannot write {}: {e}", path.display())));
        }
        written.push(path);
    }
    Ok(())
}

fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, content)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Depth offsets of the reference configurations, by family and l.
pub fn default_delta_u(family: Family, l: u32) -> Option<[f64; 3]> {
    match (family, l) {
        (Family::Well, 0) => Some([0.05, 0.10, 0.15]),
        (Family::Well, 1) => Some([0.1, 0.2, 0.3]),
        (Family::Shell, 0) => Some([0.0071, 0.0143, 0.0214]),
        (Family::Shell, 1) => Some([0.0117, 0.0234, 0.0350]),
        _ => None,
    }
}

pub const SHELL_P_ASSUMPTION: &str =
    "shell p-wave offsets are 8, 16 and 24% of U_p (0.0117, 0.0234, 0.0350)";

fn cmd_jump(args: &JumpArgs) -> Result<(), Failure> {
    let families = match args.geometry.family()? {
        Some(f) => vec![f],
        None => vec![Family::Well, Family::Shell],
    };
    let ls = match args.l {
        Some(l) => vec![l],
        None => vec![0, 1],
    };
    let mut groups = Vec::new();
    for &family in &families {
        for &l in &ls {
            let offsets = if args.delta_u.is_empty() {
                default_delta_u(family, l)
                    .ok_or_else(|| {
                        Failure::argument(format!("no default offsets for l = {l}; pass --delta-u"))
                    })?
                    .to_vec()
            } else {
                args.delta_u.clone()
            };
            groups.push((family, l, offsets));
        }
    }
    for (_, _, offsets) in &groups {
        if let Some(bad) = offsets.iter().find(|d| !(**d > 0.0) || !d.is_finite()) {
            return Err(Failure::argument(format!(
                "--delta-u values must be positive, got {bad}"
            )));
        }
    }
    let energy = args.energy.unwrap_or(JUMP_ENERGY);

    let mut rows: Vec<JumpReport> = Vec::new();
    for (family, l, offsets) in &groups {
        let geometry = args.geometry.geometry_for(*family);
        for &du in offsets {
            let report = if args.at_maximum {
                delay_jump_at_maximum(&geometry, *l, du, args.e_min, args.e_max)?
            } else {
                delay_jump(&geometry, *l, du, energy)?
            };
            rows.push(report);
        }
    }

    let body = match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Table<'a> {
                evaluated_at: String,
                delta_u_convention: &'static str,
                assumptions: Vec<&'static str>,
                rows: &'a [JumpReport],
            }
            let uses_shell_p_defaults = args.delta_u.is_empty()
                && groups
                    .iter()
                    .any(|(f, l, _)| *f == Family::Shell && *l == 1);
            let table = Table {
                evaluated_at: if args.at_maximum {
                    "maximum of the below-critical delay".into()
                } else {
                    format!("E = {energy}")
                },
                delta_u_convention:
                    "U0 = U_c - dU (below) and U_c + dU (above); jump = tau_below - tau_above",
                assumptions: if uses_shell_p_defaults {
                    vec![SHELL_P_ASSUMPTION]
                } else {
                    vec![]
                },
                rows: &rows,
            };
            serde_json::to_string_pretty(&table).expect("plain struct serializes") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("family,l,delta_u,E_hartree,tau_below,tau_above,jump\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.family,
                    r.l,
                    fmt_num(r.delta_u),
                    fmt_num(r.energy),
                    fmt_num(r.tau_below),
                    fmt_num(r.tau_above),
                    fmt_num(r.jump)
                );
            }
            s
        }
    };
    match &args.out {
        Some(path) => write_all_or_nothing(&[(path.clone(), body)])?,
        None => print!("{body}"),
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let report = verify::run_suite(args.quick, &verify::BesselSet::default());
    let body = serde_json::to_string_pretty(&report).expect("plain struct serializes") + "\n";
    match &args.out {
        Some(path) => write_all_or_nothing(&[(path.clone(), body)])?,
        None => print!("{body}"),
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
