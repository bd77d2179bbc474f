//! `casimir`: pressures, correlator profiles, separation sweeps and
//! verification reports.
//!
//! Exit codes: 0 success, 1 failed verification or computation, 2 invalid
//! arguments or configuration.

mod config;
mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use casimir::correlators::{self, CorrelatorTensor};
use casimir::pressure::{self, ForceResult, ThreePlateConfig};
use casimir::verify::{self, Suite};
use casimir::{Execution, Setup, SetupKind};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use config::Config;
use output::{sig17, Destination, Num, Table};

/// `hbar c` in J m.
pub const HBAR_C: f64 = 3.16152677e-26;

/// Environment variable naming the output directory.
pub const OUT_DIR_ENV: &str = "CASIMIR_OUT_DIR";

#[derive(Parser)]
#[command(name = "casimir", version, about = "Casimir pressure between parallel plates from the quantum Lorentz force")]
struct Cli {
    /// Flat `key = value` file overriding the defaults; flags override the file
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for output files
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    out_dir: Option<PathBuf>,

    /// Run on the calling thread only
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Net pressure on the plate at z = a with its per-face decomposition
    Pressure {
        #[arg(long, value_parser = parse_setup)]
        setup: Option<SetupKind>,
        /// Plate separation (natural units)
        #[arg(long)]
        a: Option<f64>,
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// Position of the third plate; omitted means infinitely far
        #[arg(long)]
        ell: Option<f64>,
        /// Physical separation in meters; adds the pressure in pascals
        #[arg(long)]
        si_separation: Option<f64>,
        #[arg(long, value_enum)]
        format: Option<ReportFormat>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Correlators and force density sampled across the cavity
    Profile {
        #[arg(long, value_parser = parse_setup)]
        setup: Option<SetupKind>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        z_min: Option<f64>,
        #[arg(long)]
        z_max: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Comma-separated subset of EE, BB, EB, e2mb2, force_density
        #[arg(long)]
        quantities: Option<String>,
        #[arg(long, value_enum)]
        format: Option<TableFormat>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Net pressure and energy over a range of separations
    Sweep {
        #[arg(long, value_parser = parse_setup)]
        setup: Option<SetupKind>,
        #[arg(long)]
        a_min: Option<f64>,
        #[arg(long)]
        a_max: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum)]
        spacing: Option<Spacing>,
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long, value_enum)]
        format: Option<TableFormat>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite and emit a JSON report
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Option<Suite>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Closed,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

impl TableFormat {
    fn extension(self) -> &'static str {
        match self {
            TableFormat::Csv => "csv",
            TableFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Spacing {
    Linear,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    EE,
    BB,
    EB,
    E2mB2,
    ForceDensity,
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ee" => Ok(Quantity::EE),
            "bb" => Ok(Quantity::BB),
            "eb" => Ok(Quantity::EB),
            "e2mb2" => Ok(Quantity::E2mB2),
            "force_density" => Ok(Quantity::ForceDensity),
            other => Err(format!("unknown quantity '{other}' (expected EE, BB, EB, e2mb2, force_density)")),
        }
    }
}

impl Quantity {
    const ALL: [Quantity; 5] = [Quantity::EE, Quantity::BB, Quantity::EB, Quantity::E2mB2, Quantity::ForceDensity];

    fn columns(self) -> Vec<String> {
        let tensor = |p: &str| ["xx", "yy", "zz"].iter().map(|c| format!("{p}_{c}")).collect();
        match self {
            Quantity::EE => tensor("EE"),
            Quantity::BB => tensor("BB"),
            Quantity::EB => tensor("EB"),
            Quantity::E2mB2 => vec!["e2mb2".into()],
            Quantity::ForceDensity => vec!["force_density".into()],
        }
    }

    fn values(self, setup: &Setup, z: f64) -> casimir::Result<Vec<f64>> {
        let tensor = |t: CorrelatorTensor| t.components().to_vec();
        Ok(match self {
            Quantity::EE => tensor(correlators::corr_ee(setup, z)?),
            Quantity::BB => tensor(correlators::corr_bb(setup, z)?),
            Quantity::EB => tensor(correlators::corr_eb(setup, z)?),
            Quantity::E2mB2 => vec![correlators::e2_minus_b2(setup, z)?],
            Quantity::ForceDensity => vec![pressure::left_force_density(setup, setup.a() - z)?],
        })
    }
}

fn parse_setup(s: &str) -> Result<SetupKind, String> {
    s.parse().map_err(|e: casimir::Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: casimir::Error| e.to_string())
}

fn parse_quantities(s: &str) -> Result<Vec<Quantity>, String> {
    let mut out = Vec::new();
    for q in s.split(',').filter(|p| !p.trim().is_empty()) {
        let q: Quantity = q.parse()?;
        if out.contains(&q) {
            return Err(format!("quantity '{}' listed twice", q.columns()[0]));
        }
        out.push(q);
    }
    if out.is_empty() {
        return Err("no quantities requested".into());
    }
    Ok(out)
}

/// Why a command stopped.
#[derive(Debug)]
enum Failure {
    /// Exit code 2.
    Usage(String),
    /// Exit code 1.
    Runtime(String),
    /// Exit code 1, report already written.
    Verification,
}

impl From<casimir::Error> for Failure {
    fn from(e: casimir::Error) -> Self {
        match e {
            casimir::Error::Domain(_) | casimir::Error::Config(_) | casimir::Error::Params(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(format!("i/o error: {e}"))
    }
}

/// Value from the command line, else the config file, else `default`.
fn pick<T>(cli: Option<T>, cfg: &mut Config, key: &str, default: T) -> Result<T, Failure>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    pick_opt(cli, cfg, key).map(|v| v.unwrap_or(default))
}

fn pick_opt<T>(cli: Option<T>, cfg: &mut Config, key: &str) -> Result<Option<T>, Failure>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    let from_file = cfg.take::<T>(key).map_err(Failure::Usage)?;
    Ok(cli.or(from_file))
}

/// `ValueEnum` types parsed from config strings.
#[derive(Debug, Clone, Copy)]
struct Enum<T>(T);

impl<T: ValueEnum> FromStr for Enum<T> {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        T::from_str(s, true).map(Enum)
    }
}

fn pick_enum<T: ValueEnum + Copy>(cli: Option<T>, cfg: &mut Config, key: &str, default: T) -> Result<T, Failure> {
    pick(cli.map(Enum), cfg, key, Enum(default)).map(|e| e.0)
}

/// Keys a config file may carry; those of other commands are ignored.
const CONFIG_KEYS: &[&str] = &[
    "setup",
    "a",
    "method",
    "ell",
    "si_separation",
    "format",
    "output",
    "z_min",
    "z_max",
    "samples",
    "quantities",
    "a_min",
    "a_max",
    "spacing",
    "suite",
];

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p).map_err(Failure::Usage)?,
        None => Config::default(),
    };
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let out_dir = cli.out_dir.as_deref();
    let result = match cli.command {
        Command::Pressure { setup, a, method, ell, si_separation, format, output } => {
            let setup = pick(setup, &mut cfg, "setup", SetupKind::ConductorConductor)?;
            let a = pick(a, &mut cfg, "a", 1.0)?;
            let method = pick_enum(method, &mut cfg, "method", Method::Closed)?;
            let ell = pick_opt(ell, &mut cfg, "ell")?;
            let si = pick_opt(si_separation, &mut cfg, "si_separation")?;
            let format = pick_enum(format, &mut cfg, "format", ReportFormat::Text)?;
            let output = pick_opt(output, &mut cfg, "output")?;
            let report = pressure_report(setup, a, method, ell, si)?;
            let (text, ext) = match format {
                ReportFormat::Text => (report.to_text(), "txt"),
                ReportFormat::Json => (to_json(&report)?, "json"),
            };
            let name = format!("pressure_{}.{ext}", setup.label());
            Destination::resolve(output, out_dir, &name).write(&text)?;
            Ok(())
        }
        Command::Profile { setup, a, z_min, z_max, samples, quantities, format, output } => {
            let setup = pick(setup, &mut cfg, "setup", SetupKind::ConductorConductor)?;
            let a = pick(a, &mut cfg, "a", 1.0)?;
            let z_min = pick(z_min, &mut cfg, "z_min", 0.01 * a)?;
            let z_max = pick(z_max, &mut cfg, "z_max", 0.99 * a)?;
            let samples = pick(samples, &mut cfg, "samples", 101)?;
            let quantities: Option<String> = pick_opt(quantities, &mut cfg, "quantities")?;
            let quantities = match quantities {
                Some(q) => parse_quantities(&q).map_err(Failure::Usage)?,
                None => Quantity::ALL.to_vec(),
            };
            let format = pick_enum(format, &mut cfg, "format", TableFormat::Csv)?;
            let output = pick_opt(output, &mut cfg, "output")?;
            let setup = Setup::new(setup, a)?;
            let table = profile_table(&setup, z_min, z_max, samples, &quantities, exec)?;
            let text = render_table(&table, format, setup.kind, Some(setup.a()))?;
            let name = format!("profile_{}.{}", setup.kind.label(), format.extension());
            Destination::resolve(output, out_dir, &name).write(&text)?;
            Ok(())
        }
        Command::Sweep { setup, a_min, a_max, samples, spacing, method, format, output } => {
            let setup = pick(setup, &mut cfg, "setup", SetupKind::ConductorConductor)?;
            let a_min = pick(a_min, &mut cfg, "a_min", 0.5)?;
            let a_max = pick(a_max, &mut cfg, "a_max", 2.0)?;
            let samples = pick(samples, &mut cfg, "samples", 16)?;
            let spacing = pick_enum(spacing, &mut cfg, "spacing", Spacing::Geometric)?;
            let method = pick_enum(method, &mut cfg, "method", Method::Closed)?;
            let format = pick_enum(format, &mut cfg, "format", TableFormat::Csv)?;
            let output = pick_opt(output, &mut cfg, "output")?;
            let table = sweep_table(setup, a_min, a_max, samples, spacing, method, exec)?;
            let text = render_table(&table, format, setup, None)?;
            let name = format!("sweep_{}.{}", setup.label(), format.extension());
            Destination::resolve(output, out_dir, &name).write(&text)?;
            Ok(())
        }
        Command::Verify { suite, output } => {
            let suite = pick(suite, &mut cfg, "suite", Suite::All)?;
            let output = pick_opt(output, &mut cfg, "output")?;
            let report = verify::run(suite, exec);
            let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Runtime(e.to_string()))? + "\n";
            let name = format!("verify_{}.json", suite.label());
            Destination::resolve(output, out_dir, &name).write(&text)?;
            eprintln!("verify {}: {}/{} checks passed", suite.label(), report.total - report.failed, report.total);
            for c in report.failures() {
                eprintln!("FAIL {} measured {:?} tolerance {}", c.name, c.measured, c.tolerance);
            }
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    };
    result?;
    // keys of other commands are allowed so one file can serve all of them
    let mut rest = cfg;
    for key in CONFIG_KEYS {
        let _ = rest.take::<String>(key);
    }
    rest.finish().map_err(Failure::Usage)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| Failure::Runtime(e.to_string()))
}

#[derive(Debug, Serialize)]
struct SiPressure {
    separation_m: Num,
    pressure_pa: Num,
}

#[derive(Debug, Serialize)]
struct PressureReport {
    setup: SetupKind,
    a: Num,
    method: Method,
    /// `None` for an infinitely distant third plate.
    ell: Option<Num>,
    net: Num,
    left: Num,
    right: Num,
    /// Coefficients of `pi^-2 (z - a)^-4`.
    divergent_left: String,
    divergent_right: String,
    divergences_cancel: bool,
    verdict: &'static str,
    si: Option<SiPressure>,
}

impl PressureReport {
    fn to_text(&self) -> String {
        let mut lines = vec![
            format!("setup: {}", self.setup.label()),
            format!("a: {}", sig17(self.a.0)),
            format!("method: {}", if self.method == Method::Closed { "closed" } else { "oracle" }),
            format!("ell: {}", self.ell.map_or("infinity".to_string(), |n| sig17(n.0))),
            format!("net_pressure: {}", sig17(self.net.0)),
            format!("left_finite: {}", sig17(self.left.0)),
            format!("right_finite: {}", sig17(self.right.0)),
            format!("divergent_left: {} / pi^2", self.divergent_left),
            format!("divergent_right: {} / pi^2", self.divergent_right),
            format!("divergences_cancel: {}", self.divergences_cancel),
            format!("verdict: {}", self.verdict),
        ];
        if let Some(si) = &self.si {
            lines.push(format!("separation_m: {}", sig17(si.separation_m.0)));
            lines.push(format!("pressure_pa: {}", sig17(si.pressure_pa.0)));
        }
        lines.join("\n") + "\n"
    }
}

fn pressure_report(
    kind: SetupKind,
    a: f64,
    method: Method,
    ell: Option<f64>,
    si: Option<f64>,
) -> Result<PressureReport, Failure> {
    let setup = Setup::new(kind, a)?;
    let config = match ell {
        Some(l) => ThreePlateConfig::matching(setup, l)?,
        None => ThreePlateConfig::isolated(setup),
    };
    let r: ForceResult = match method {
        Method::Closed => pressure::three_plate_force(&config),
        Method::Oracle => pressure::three_plate_force_oracle(&config)?,
    };
    let si = match si {
        Some(s) if !(s > 0.0 && s.is_finite()) => {
            return Err(Failure::Usage(format!("SI separation {s} m must be positive")));
        }
        // P = c / a^4 in natural units; the same c times hbar c / s^4 in pascals
        Some(s) => Some(SiPressure { separation_m: Num(s), pressure_pa: Num(r.net * a.powi(4) * HBAR_C / s.powi(4)) }),
        None => None,
    };
    Ok(PressureReport {
        setup: kind,
        a: Num(a),
        method,
        ell: ell.map(Num),
        net: Num(r.net),
        left: Num(r.left),
        right: Num(r.right),
        divergent_left: r.divergent_left.0.to_string(),
        divergent_right: r.divergent_right.0.to_string(),
        divergences_cancel: r.divergences_cancel(),
        verdict: if r.is_attractive() { "attractive" } else { "repulsive" },
        si,
    })
}

fn profile_table(
    setup: &Setup,
    z_min: f64,
    z_max: f64,
    samples: usize,
    quantities: &[Quantity],
    exec: Execution,
) -> Result<Table, Failure> {
    let a = setup.a();
    if !(0.0 < z_min && z_min < z_max && z_max < a) {
        return Err(Failure::Usage(format!(
            "need 0 < z_min < z_max < a, got z_min = {z_min}, z_max = {z_max}, a = {a}"
        )));
    }
    if samples < 2 {
        return Err(Failure::Usage(format!("need at least 2 samples, got {samples}")));
    }
    let zs = verify::linear_grid(z_min, z_max, samples);
    let rows = exec.map(&zs, |&z| -> casimir::Result<Vec<Num>> {
        let mut row = vec![z, PI * z / a];
        for q in quantities {
            row.extend(q.values(setup, z)?);
        }
        Ok(row.into_iter().map(Num).collect())
    });
    let mut columns = vec!["z".to_string(), "xi".to_string()];
    columns.extend(quantities.iter().flat_map(|q| q.columns()));
    Ok(Table { columns, rows: rows.into_iter().collect::<casimir::Result<_>>()? })
}

fn sweep_table(
    kind: SetupKind,
    a_min: f64,
    a_max: f64,
    samples: usize,
    spacing: Spacing,
    method: Method,
    exec: Execution,
) -> Result<Table, Failure> {
    if !(0.0 < a_min && a_min < a_max && a_max.is_finite()) {
        return Err(Failure::Usage(format!("need 0 < a_min < a_max, got a_min = {a_min}, a_max = {a_max}")));
    }
    if samples < 2 {
        return Err(Failure::Usage(format!("need at least 2 samples, got {samples}")));
    }
    let grid = match spacing {
        Spacing::Linear => verify::linear_grid(a_min, a_max, samples),
        Spacing::Geometric => verify::geometric_grid(a_min, a_max, samples),
    };
    let rows = exec.map(&grid, |&a| -> casimir::Result<Vec<Num>> {
        let setup = Setup::new(kind, a)?;
        let r = match method {
            Method::Closed => pressure::net_pressure(&setup),
            Method::Oracle => pressure::net_pressure_oracle(&setup)?,
        };
        Ok([a, r.net, r.left, r.right, pressure::energy_per_area(&setup)].map(Num).to_vec())
    });
    let columns = ["a", "net_pressure", "left_finite", "right_finite", "energy_per_area"].map(String::from).to_vec();
    Ok(Table { columns, rows: rows.into_iter().collect::<casimir::Result<_>>()? })
}

#[derive(Serialize)]
struct TableDocument<'a> {
    setup: SetupKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<Num>,
    columns: &'a [String],
    rows: &'a [Vec<Num>],
}

fn render_table(table: &Table, format: TableFormat, setup: SetupKind, a: Option<f64>) -> Result<String, Failure> {
    match format {
        TableFormat::Csv => Ok(table.to_csv()),
        TableFormat::Json => {
            let doc = TableDocument { setup, a: a.map(Num), columns: &table.columns, rows: &table.rows };
            serde_json::to_string(&doc).map(|s| s + "\n").map_err(|e| Failure::Runtime(e.to_string()))
        }
    }
}
