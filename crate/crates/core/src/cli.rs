//! Command-line front end.
//!
//! Exit codes: `0` success (or PHYSICAL), `2` UNPHYSICAL, `3` INDETERMINATE,
//! `1` any error including bad arguments.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::dynamics::{drift_momentum, ponderomotive_energy, simulate, Termination};
use crate::error::{Error, Result};
use crate::minkowski::FourVector;
use crate::potential::{evaluate_fields, FieldOptions, PotentialField};
use crate::validator::{validate, Verdict};

/// Directory searched for `--scenario NAME` instead of the bundled set.
pub const SCENARIO_DIR_ENV: &str = "LIGHTCONE_SCENARIO_DIR";

pub const BUNDLED_SCENARIOS: [(&str, &str); 6] = [
    (
        "eq_t_planewave",
        include_str!("../scenarios/eq_t_planewave.json"),
    ),
    (
        "eq_x_nonphysical",
        include_str!("../scenarios/eq_x_nonphysical.json"),
    ),
    (
        "lightcone_shift",
        include_str!("../scenarios/lightcone_shift.json"),
    ),
    (
        "planewave_plus_coulomb",
        include_str!("../scenarios/planewave_plus_coulomb.json"),
    ),
    (
        "radiation_pressure_circular",
        include_str!("../scenarios/radiation_pressure_circular.json"),
    ),
    (
        "radiation_pressure_dipole",
        include_str!("../scenarios/radiation_pressure_dipole.json"),
    ),
];

#[derive(Debug, Parser)]
#[command(
    name = "lightcone",
    version,
    about = "Four-potentials, gauge shifts and physicality checks"
)]
pub struct Cli {
    /// Worker threads for grid evaluation (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the constraint suite and print a verdict.
    Validate(ValidateArgs),
    /// Tabulate E and B along a line of events.
    Fields(GridCommandArgs),
    /// Tabulate the potential before and after the configured gauge shift.
    Transform(GridCommandArgs),
    /// Integrate a particle and report the ponderomotive summary.
    Simulate(SimulateArgs),
    /// List bundled scenarios.
    Scenarios(ScenariosArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Scenario file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Bundled scenario name, or a file in $LIGHTCONE_SCENARIO_DIR.
    #[arg(long)]
    pub scenario: Option<String>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub source: Source,
    /// Machine-readable report destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// `name=value`, repeatable.
    #[arg(long = "tolerance", value_name = "NAME=VALUE")]
    pub tolerances: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    T,
    X,
    Y,
    Z,
}

impl Axis {
    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Args)]
pub struct Grid {
    /// Event coordinate varied along the grid (`t` means `x^0 = ct`).
    #[arg(long, value_enum, default_value = "z")]
    pub axis: Axis,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, default_value_t = 11)]
    pub count: usize,
    /// Base event `x0,x1,x2,x3`; the grid overrides the chosen axis.
    #[arg(long, default_value = "0,0,0,0", allow_negative_numbers = true)]
    pub at: String,
}

impl Grid {
    pub fn events(&self) -> Result<Vec<FourVector>> {
        let parts: Vec<f64> = self
            .at
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("--at: {e}")))?;
        let base: [f64; 4] = parts
            .try_into()
            .map_err(|_| Error::Config("--at needs four comma-separated numbers".into()))?;
        if !(self.from.is_finite() && self.to.is_finite() && base.iter().all(|v| v.is_finite())) {
            return Err(Error::Config("grid bounds must be finite".into()));
        }
        Ok((0..self.count)
            .map(|i| {
                let s = if self.count == 1 {
                    0.0
                } else {
                    i as f64 / (self.count - 1) as f64
                };
                let mut e = base;
                e[self.axis.index()] = self.from + (self.to - self.from) * s;
                FourVector::from(e)
            })
            .collect())
    }
}

#[derive(Debug, Args)]
pub struct GridCommandArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub grid: Grid,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `machine` emits CSV on stdout, `text` aligned columns.
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: Source,
    /// Trajectory CSV destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Machine-readable summary destination.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Overrides `run.t_end`.
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ScenariosArgs {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

/// Parses `args` (program name first) and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
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
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Validate(a) => cmd_validate(&a),
        Command::Fields(a) => cmd_fields(&a).map(|_| 0),
        Command::Transform(a) => cmd_transform(&a).map(|_| 0),
        Command::Simulate(a) => cmd_simulate(&a).map(|_| 0),
        Command::Scenarios(a) => cmd_scenarios(&a).map(|_| 0),
    }
}

/// Writes via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, contents.as_bytes()),
        None => {
            std::io::stdout().write_all(contents.as_bytes())?;
            Ok(())
        }
    }
}

/// Scenario names and sources visible to `--scenario`.
pub fn scenario_catalogue() -> Result<Vec<(String, String)>> {
    match std::env::var_os(SCENARIO_DIR_ENV) {
        Some(dir) => {
            let mut out = Vec::new();
            for entry in fs::read_dir(&dir)? {
                let path = entry?.path();
                if path.extension().is_some_and(|e| e == "json") {
                    let name = path
                        .file_stem()
                        .unwrap_or_default()
                        .to_string_lossy()
                        .into_owned();
                    out.push((name, fs::read_to_string(&path)?));
                }
            }
            out.sort();
            Ok(out)
        }
        None => Ok(BUNDLED_SCENARIOS
            .iter()
            .map(|(n, s)| (n.to_string(), s.to_string()))
            .collect()),
    }
}

pub fn load_source(source: &Source) -> Result<ScenarioConfig> {
    if let Some(path) = &source.config {
        return ScenarioConfig::load(path);
    }
    let name = source.scenario.as_deref().unwrap_or_default();
    if let Some(dir) = std::env::var_os(SCENARIO_DIR_ENV) {
        return ScenarioConfig::load(Path::new(&dir).join(format!("{name}.json")));
    }
    let text = BUNDLED_SCENARIOS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Config(format!("no bundled scenario named `{name}`")))?;
    ScenarioConfig::from_json(text).map_err(|e| Error::Config(format!("scenario {name}: {e}")))
}

fn cmd_validate(a: &ValidateArgs) -> Result<i32> {
    let mut cfg = load_source(&a.source)?;
    if let Some(seed) = a.seed {
        cfg.run.seed = seed;
    }
    for spec in &a.tolerances {
        let (key, value) = spec.split_once('=').ok_or_else(|| {
            Error::Config(format!("--tolerance expects NAME=VALUE, got `{spec}`"))
        })?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|e| Error::Config(format!("--tolerance {key}: {e}")))?;
        cfg.run.tolerances.set(key.trim(), value)?;
    }
    let field = cfg.potential()?;
    let report = validate(&field, &cfg.validation_context()?, &cfg.validator_config());
    let machine = report.to_json();
    if let Some(out) = &a.out {
        write_atomic(out, machine.as_bytes())?;
    }
    let mut text = match a.format {
        Format::Text => report.to_text(),
        Format::Machine => machine,
    };
    if a.format == Format::Text && !report.failing().is_empty() {
        let _ = writeln!(text, "failing: {}", report.failing().join(", "));
    }
    print!("{text}");
    Ok(match report.verdict {
        Verdict::Physical => 0,
        Verdict::Unphysical => 2,
        Verdict::Indeterminate => 3,
    })
}

/// Adding `0.0` turns `-0.0` into `0.0` so tables do not show signed zeros.
fn format_table(header: &[&str], rows: &[Vec<f64>], format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Machine => {
            let _ = writeln!(s, "{}", header.join(","));
            for r in rows {
                let cells: Vec<_> = r.iter().map(|v| format!("{:.16e}", v + 0.0)).collect();
                let _ = writeln!(s, "{}", cells.join(","));
            }
        }
        Format::Text => {
            let cells: Vec<_> = header.iter().map(|h| format!("{h:>14}")).collect();
            let _ = writeln!(s, "{}", cells.join(" "));
            for r in rows {
                let cells: Vec<_> = r.iter().map(|v| format!("{:>14.6e}", v + 0.0)).collect();
                let _ = writeln!(s, "{}", cells.join(" "));
            }
        }
    }
    s
}

/// Files always receive CSV; stdout follows `--format`.
fn emit_table(
    header: &[&str],
    rows: &[Vec<f64>],
    out: Option<&Path>,
    format: Format,
) -> Result<()> {
    let format = if out.is_some() {
        Format::Machine
    } else {
        format
    };
    emit(out, &format_table(header, rows, format))
}

/// Field rows on the grid; singular events are skipped with a warning.
pub fn field_rows(field: &PotentialField, events: &[FourVector]) -> Result<Vec<Vec<f64>>> {
    let results: Vec<_> = events
        .par_iter()
        .map(|x| (*x, evaluate_fields(field, *x, FieldOptions::default())))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    for (i, (x, r)) in results.into_iter().enumerate() {
        match r {
            Ok(s) => {
                let mut row = x.to_array().to_vec();
                row.extend(s.e.to_array());
                row.extend(s.b.to_array());
                rows.push(row);
            }
            Err(e @ Error::Singularity { .. }) => eprintln!("warning: row {i} at {x} skipped: {e}"),
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

pub const FIELD_HEADER: [&str; 10] = ["x0", "x1", "x2", "x3", "Ex", "Ey", "Ez", "Bx", "By", "Bz"];
pub const TRANSFORM_HEADER: [&str; 12] = [
    "x0", "x1", "x2", "x3", "A0", "A1", "A2", "A3", "At0", "At1", "At2", "At3",
];

fn cmd_fields(a: &GridCommandArgs) -> Result<()> {
    let cfg = load_source(&a.source)?;
    let field = cfg.total_potential()?;
    let rows = field_rows(&field, &a.grid.events()?)?;
    emit_table(&FIELD_HEADER, &rows, a.out.as_deref(), a.format)
}

fn cmd_transform(a: &GridCommandArgs) -> Result<()> {
    let cfg = load_source(&a.source)?;
    let original = cfg.base_potential()?;
    let transformed = cfg.potential()?;
    let events = a.grid.events()?;
    let results: Vec<_> = events
        .par_iter()
        .map(|x| Ok::<_, Error>((*x, original.evaluate(*x)?, transformed.evaluate(*x)?)))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((x, a0, a1)) => rows.push([x.to_array(), a0.to_array(), a1.to_array()].concat()),
            Err(e @ Error::Singularity { .. }) => eprintln!("warning: row {i} skipped: {e}"),
            Err(e) => return Err(e),
        }
    }
    emit_table(&TRANSFORM_HEADER, &rows, a.out.as_deref(), a.format)
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationSummary {
    pub field: String,
    pub samples: usize,
    pub t_final: f64,
    pub termination: String,
    pub u_p: Option<f64>,
    pub drift_p_parallel: Option<f64>,
    pub n_photons: Option<f64>,
    /// `drift_p_parallel * c / U_p`.
    pub ratio: Option<f64>,
}

impl SimulationSummary {
    pub fn to_text(&self) -> String {
        let opt = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.6e}"));
        let mut s = String::new();
        let _ = writeln!(s, "field:            {}", self.field);
        let _ = writeln!(
            s,
            "samples:          {} (t_final {:.6})",
            self.samples, self.t_final
        );
        let _ = writeln!(s, "termination:      {}", self.termination);
        let _ = writeln!(s, "U_p:              {}", opt(self.u_p));
        let _ = writeln!(s, "drift_p_parallel: {}", opt(self.drift_p_parallel));
        let _ = writeln!(s, "n_photons:        {}", opt(self.n_photons));
        let _ = writeln!(s, "ratio:            {}", opt(self.ratio));
        s
    }
}

/// Runs the scenario's particle and computes the summary; the CSV is returned alongside.
pub fn simulate_scenario(cfg: &ScenarioConfig) -> Result<(SimulationSummary, Vec<u8>)> {
    let init = cfg.particle_state()?;
    let opts = cfg.simulation_options()?;
    let field = cfg.total_potential()?;
    let traj = simulate(init, &field, &opts)?;
    let termination = match &traj.termination {
        Termination::Completed => "completed".to_string(),
        Termination::Singularity { t, detail } => format!("singularity at t={t}: {detail}"),
        Termination::NonFinite { t, detail } => format!("non-finite state at t={t}: {detail}"),
    };
    let mut summary = SimulationSummary {
        field: field.describe(),
        samples: traj.samples.len(),
        t_final: traj.last().t,
        termination,
        u_p: None,
        drift_p_parallel: None,
        n_photons: None,
        ratio: None,
    };
    if let (Some(period), Some(omega), Some(dir)) = (cfg.period(), cfg.omega(), cfg.direction()) {
        // U_p belongs to the wave itself, also when the particle sees it frozen
        let u_p = ponderomotive_energy(&cfg.gauged_potential()?, init.q, init.m, cfg.run.c)?;
        let drift = drift_momentum(&traj, dir, period, cfg.run.average_cycles)?.with_field(
            u_p,
            omega,
            cfg.run.hbar,
        )?;
        summary.u_p = drift.u_p;
        summary.drift_p_parallel = Some(drift.drift_p_parallel);
        summary.n_photons = drift.n_photons;
        summary.ratio = drift.drift_ratio(cfg.run.c);
    }
    let mut csv = Vec::new();
    traj.write_csv(&mut csv)?;
    Ok((summary, csv))
}

fn cmd_simulate(a: &SimulateArgs) -> Result<()> {
    let mut cfg = load_source(&a.source)?;
    if let Some(t) = a.t_end {
        cfg.run.t_end = Some(t);
    }
    let (summary, csv) = simulate_scenario(&cfg)?;
    if let Some(out) = &a.out {
        write_atomic(out, &csv)?;
    }
    let machine = serde_json::to_string_pretty(&summary)? + "\n";
    if let Some(path) = &a.summary {
        write_atomic(path, machine.as_bytes())?;
    }
    print!(
        "{}",
        match a.format {
            Format::Text => summary.to_text(),
            Format::Machine => machine,
        }
    );
    Ok(())
}

fn cmd_scenarios(a: &ScenariosArgs) -> Result<()> {
    let catalogue = scenario_catalogue()?;
    let mut out = String::new();
    let mut machine = Vec::new();
    for (name, text) in &catalogue {
        let description = ScenarioConfig::from_json(text)
            .map(|c| c.description.unwrap_or_default())
            .unwrap_or_else(|e| format!("(invalid: {e})"));
        let _ = writeln!(out, "{name:<28} {description}");
        machine.push(serde_json::json!({"name": name, "description": description}));
    }
    match a.format {
        Format::Text => print!("{out}"),
        Format::Machine => println!("{}", serde_json::to_string_pretty(&machine)?),
    }
    Ok(())
}
