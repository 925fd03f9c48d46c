//! Command implementations behind the `tcoulomb` binary.
//!
//! Every command renders a [`Document`] that is written either as CSV, with
//! `#`-prefixed metadata lines ahead of the column header, or as JSON.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{run_checks, CheckLevel, Fault};
use crate::error::{Error, Result};
use crate::frobenius::{node_positions, solve_truncation, ExactSolution};
use crate::model::{convert_energy, Energy, PhysicalParams, UnitFrame};
use crate::oracle::{solve_state, RadialProblem, DEFAULT_TOL};
use crate::quadrature::integrate;
use crate::spectrum::{
    build_curve, degenerate_family, interpolate, CurvePoint, ExactTable, PointSource,
    SpectralCurve,
};

pub const TOOL: &str = concat!("tcoulomb ", env!("CARGO_PKG_VERSION"));
pub const SCHEMA_VERSION: &str = "v1";
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Upper end of the dense interpolated samples in figure files.
pub const FIGURE_BETA_MAX: f64 = 60.0;
/// Spacing of the shared `β` lattice of interpolated figure samples.
pub const FIGURE_BETA_STEP: f64 = 0.5;
/// `β` of the oracle points in `fig1.csv`.
pub const FIGURE_ORACLE_BETA: f64 = 40.0;

// CODATA 2018
const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
const HBAR: f64 = 6.626_070_15e-34 / (2.0 * std::f64::consts::PI);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "tcoulomb", version, about = "Bound states of the truncated Coulomb potential -beta/(r+1)")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Output file (a directory for `figures`); standard output when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Exact solutions of truncation order n, ascending in beta
    Exact {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
        tol: f64,
        /// Add the cutoff radius and level energy of a hydrogen atom
        #[arg(long)]
        hydrogen: bool,
    },
    /// Exact points of the curve alpha_{nu,l}(beta)
    Curve {
        #[arg(long, default_value_t = 0)]
        nu: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 20)]
        n_max: u32,
        #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
        tol: f64,
    },
    /// Lagrange interpolation of a curve at one or more beta values
    Interp {
        #[arg(long, default_value_t = 0)]
        nu: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 20)]
        n_max: u32,
        /// Comma-separated list
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
        tol: f64,
    },
    /// Numerical eigenvalue from the shooting solver
    Oracle {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 0)]
        nu: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        r_max: Option<f64>,
    },
    /// Run the invariant suites
    Check {
        #[arg(long, value_enum, default_value_t = CheckLevel::Quick)]
        level: CheckLevel,
        /// Corrupt one stored coefficient first; the run must then fail
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Normalized exact eigenfunction sampled on [0, r_max]
    Wavefn {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        /// Root index, 1-based and ascending in alpha
        #[arg(long, default_value_t = 1)]
        i: u32,
        /// Defaults to 30/alpha
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Write fig1.csv, fig2.csv and fig3.csv into the --out directory
    Figures {
        #[arg(long, default_value_t = 20)]
        n_max: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Exact { .. } => "exact",
            Command::Curve { .. } => "curve",
            Command::Interp { .. } => "interp",
            Command::Oracle { .. } => "oracle",
            Command::Check { .. } => "check",
            Command::Wavefn { .. } => "wavefn",
            Command::Figures { .. } => "figures",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits, enough to reproduce any double exactly.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| (*c).to_owned()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Output of one command: a flat table for CSV and a structured value for
/// JSON.
#[derive(Debug, Clone)]
pub struct Document {
    pub kind: String,
    pub table: Table,
    pub data: Value,
}

impl Document {
    pub fn schema(&self) -> String {
        format!("tcoulomb.{}/{SCHEMA_VERSION}", self.kind)
    }

    pub fn to_csv(&self, command_line: &str) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        writeln!(out, "# tool: {TOOL}")?;
        writeln!(out, "# schema: {}", self.schema())?;
        writeln!(out, "# command: {command_line}")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.table.columns)?;
        for row in &self.table.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| Error::Io(e.into_error()))
    }

    pub fn to_json(&self, command_line: &str) -> Result<Vec<u8>> {
        let doc = json!({
            "tool": TOOL,
            "schema": self.schema(),
            "command": command_line,
            "data": self.data,
        });
        let mut out = serde_json::to_vec_pretty(&doc)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn render(&self, format: Format, command_line: &str) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(command_line),
            Format::Json => self.to_json(command_line),
        }
    }
}

/// Coupling and cutoff radius of a hydrogen atom whose `β` is given.
pub fn hydrogen(beta: f64) -> Result<PhysicalParams> {
    let bohr = 4.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY * HBAR * HBAR
        / (ELECTRON_MASS * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE);
    PhysicalParams::new(ELECTRON_MASS, ELEMENTARY_CHARGE, 1, VACUUM_PERMITTIVITY, beta * bohr, HBAR)
}

#[derive(Debug, Clone, Serialize)]
struct ExactRow<'a> {
    n: u32,
    l: u32,
    i: u32,
    nu: u32,
    alpha: f64,
    beta: f64,
    energy_tilde: f64,
    energy_breve: f64,
    coeffs: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    cutoff_radius_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy_ev: Option<f64>,
}

pub fn cmd_exact(n: u32, l: u32, tol: f64, with_hydrogen: bool) -> Result<Document> {
    let sols = solve_truncation(n, l, tol)?;
    let mut columns = vec!["n", "l", "i", "nu", "alpha", "beta", "energy_tilde", "energy_breve"];
    let coeff_names: Vec<String> = (0..=n).map(|j| format!("c{j}")).collect();
    columns.extend(coeff_names.iter().map(String::as_str));
    if with_hydrogen {
        columns.extend(["cutoff_radius_m", "energy_ev"]);
    }
    let mut table = Table::new(&columns);
    let mut rows = Vec::new();
    for s in &sols {
        let (radius, ev) = if with_hydrogen {
            let p = hydrogen(s.beta)?;
            let e = Energy::new(s.energy_tilde, UnitFrame::tilde(s.beta)?);
            let joules = convert_energy(e, UnitFrame::physical(s.beta)?, Some(&p))?.value;
            (Some(p.cutoff_radius()), Some(joules / ELEMENTARY_CHARGE))
        } else {
            (None, None)
        };
        let mut row: Vec<Cell> = vec![
            s.n.into(),
            s.l.into(),
            s.i.into(),
            s.nodes.into(),
            s.alpha.into(),
            s.beta.into(),
            s.energy_tilde.into(),
            s.energy_breve().into(),
        ];
        row.extend(s.coeffs.iter().map(|&c| Cell::from(c)));
        row.extend(radius.map(Cell::from));
        row.extend(ev.map(Cell::from));
        table.push(row);
        rows.push(ExactRow {
            n: s.n,
            l: s.l,
            i: s.i,
            nu: s.nodes,
            alpha: s.alpha,
            beta: s.beta,
            energy_tilde: s.energy_tilde,
            energy_breve: s.energy_breve(),
            coeffs: &s.coeffs,
            cutoff_radius_m: radius,
            energy_ev: ev,
        });
    }
    Ok(Document { kind: "exact".into(), table, data: serde_json::to_value(rows)? })
}

fn source_cells(source: PointSource) -> [Cell; 3] {
    match source {
        PointSource::Exact { n, i } => [source.label().into(), n.into(), i.into()],
        _ => [source.label().into(), Cell::Text(String::new()), Cell::Text(String::new())],
    }
}

pub fn cmd_curve(nu: u32, l: u32, n_max: u32, tol: f64) -> Result<Document> {
    let curve = build_curve(nu, l, n_max, tol)?;
    let mut table = Table::new(&["nu", "l", "beta", "alpha", "source", "n", "i"]);
    for p in curve.points() {
        let mut row = vec![nu.into(), l.into(), p.beta.into(), p.alpha.into()];
        row.extend(source_cells(p.source));
        table.push(row);
    }
    Ok(Document { kind: "curve".into(), table, data: serde_json::to_value(&curve)? })
}

pub fn cmd_interp(nu: u32, l: u32, n_max: u32, betas: &[f64], tol: f64) -> Result<Document> {
    let curve = build_curve(nu, l, n_max, tol)?;
    let mut table = Table::new(&["nu", "l", "beta", "alpha", "source", "points"]);
    let mut rows = Vec::new();
    for &beta in betas {
        let alpha = interpolate(&curve, beta)?;
        table.push(vec![
            nu.into(),
            l.into(),
            beta.into(),
            alpha.into(),
            "interpolated".into(),
            curve.len().into(),
        ]);
        rows.push(CurvePoint { beta, alpha, source: PointSource::Interpolated });
    }
    let data = json!({ "nu": nu, "l": l, "points": curve.len(), "values": rows });
    Ok(Document { kind: "interp".into(), table, data })
}

pub fn cmd_oracle(beta: f64, l: u32, nu: u32, tol: f64, r_max: Option<f64>) -> Result<Document> {
    let mut problem = RadialProblem::new(beta, l)?.with_tol(tol)?;
    if let Some(r) = r_max {
        problem = problem.with_r_max(r)?;
    }
    let res = solve_state(&problem, nu)?;
    let mut table = Table::new(&[
        "beta",
        "l",
        "nu",
        "alpha",
        "energy_tilde",
        "grid_error_estimate",
        "observed_order",
        "r_max",
        "grid_size",
    ]);
    table.push(vec![
        beta.into(),
        l.into(),
        nu.into(),
        res.alpha.into(),
        res.energy_tilde.into(),
        res.grid_error_estimate.into(),
        res.observed_order.into(),
        res.r_max.into(),
        res.grid_size.into(),
    ]);
    let data = json!({ "beta": beta, "l": l, "result": res });
    Ok(Document { kind: "oracle".into(), table, data })
}

fn pick(n: u32, l: u32, i: u32) -> Result<ExactSolution> {
    let mut sols = solve_truncation(n, l, DEFAULT_ROOT_TOL)?;
    if i == 0 || i > n + 1 {
        return Err(Error::InvalidInput(format!("root index i={i} must lie in 1..={}", n + 1)));
    }
    Ok(sols.swap_remove(i as usize - 1))
}

pub fn cmd_wavefn(n: u32, l: u32, i: u32, r_max: Option<f64>, points: usize) -> Result<Document> {
    if points < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 sample points, got {points}")));
    }
    let sol = pick(n, l, i)?;
    let r_max = r_max.unwrap_or(30.0 / sol.alpha);
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(Error::InvalidInput(format!("r_max must be positive, got {r_max}")));
    }
    let ef = sol.eigenfunction()?;
    // f² ≤ e^(-2αr) times a polynomial; integrating to 60/α leaves ~e^-120
    let norm2 = integrate(|r| ef.eval(r).powi(2), 0.0, 60.0 / sol.alpha, 0.0, 1e-12)?.value;
    let scale = norm2.sqrt().recip();
    let nodes = node_positions(&sol)?;
    let mut table = Table::new(&["r", "f"]);
    let mut samples = Vec::with_capacity(points);
    for k in 0..points {
        let r = r_max * k as f64 / (points - 1) as f64;
        let f = if r == 0.0 { 0.0 } else { scale * ef.eval(r) };
        table.push(vec![r.into(), f.into()]);
        samples.push([r, f]);
    }
    let data = json!({
        "n": n, "l": l, "i": i, "nu": sol.nodes,
        "alpha": sol.alpha, "beta": sol.beta,
        "nodes": nodes,
        "samples": samples,
    });
    Ok(Document { kind: "wavefn".into(), table, data })
}

/// Rows `curve_id, beta, alpha, source` for figure files.
#[derive(Debug, Clone, Default)]
pub struct FigureData {
    rows: Vec<(String, f64, f64, &'static str)>,
}

impl FigureData {
    pub fn rows(&self) -> &[(String, f64, f64, &'static str)] {
        &self.rows
    }

    fn add_curve(&mut self, id: &str, curve: &SpectralCurve) -> Result<()> {
        for p in curve.points() {
            self.rows.push((id.to_owned(), p.beta, p.alpha, "exact"));
        }
        for beta in figure_lattice(curve) {
            self.rows.push((id.to_owned(), beta, interpolate(curve, beta)?, "interpolated"));
        }
        Ok(())
    }

    fn document(&self, kind: &str) -> Result<Document> {
        let mut table = Table::new(&["curve_id", "beta", "alpha", "source"]);
        let mut data = Vec::with_capacity(self.rows.len());
        for (id, beta, alpha, source) in &self.rows {
            table.push(vec![id.as_str().into(), (*beta).into(), (*alpha).into(), (*source).into()]);
            data.push(json!({ "curve_id": id, "beta": beta, "alpha": alpha, "source": source }));
        }
        Ok(Document { kind: kind.into(), table, data: Value::Array(data) })
    }
}

/// Multiples of [`FIGURE_BETA_STEP`] strictly inside the curve's range and
/// not above [`FIGURE_BETA_MAX`].
fn figure_lattice(curve: &SpectralCurve) -> Vec<f64> {
    let Some((lo, hi)) = curve.beta_range() else {
        return Vec::new();
    };
    let hi = hi.min(FIGURE_BETA_MAX);
    let first = (lo / FIGURE_BETA_STEP).floor() as i64 + 1;
    (first..)
        .map(|k| k as f64 * FIGURE_BETA_STEP)
        .take_while(|&b| b < hi)
        .collect()
}

/// Curves `ν = 0..=8` for `l = 0` with oracle points at `β = 40`.
pub fn figure1(n_max: u32) -> Result<FigureData> {
    let table = ExactTable::build(0, n_max, DEFAULT_ROOT_TOL)?;
    let mut fig = FigureData::default();
    for nu in 0..=8.min(n_max) {
        fig.add_curve(&format!("nu{nu}_l0"), &table.curve(nu)?)?;
    }
    for nu in 0..=8.min(n_max) {
        let res = solve_state(&RadialProblem::new(FIGURE_ORACLE_BETA, 0)?, nu)?;
        fig.rows.push((format!("nu{nu}_l0"), FIGURE_ORACLE_BETA, res.alpha, "oracle"));
    }
    Ok(fig)
}

/// Ground-state curves for `l = 0..=9`.
pub fn figure2(n_max: u32) -> Result<FigureData> {
    let mut fig = FigureData::default();
    for l in 0..=9 {
        fig.add_curve(&format!("nu0_l{l}"), &build_curve(0, l, n_max, DEFAULT_ROOT_TOL)?)?;
    }
    Ok(fig)
}

/// The Coulomb-degenerate families `ν + l = 2` and `ν + l = 3`.
pub fn figure3(n_max: u32) -> Result<FigureData> {
    let mut fig = FigureData::default();
    for k in [2, 3] {
        for curve in degenerate_family(k, n_max, DEFAULT_ROOT_TOL)? {
            fig.add_curve(&format!("k{k}_nu{}_l{}", curve.nu(), curve.l()), &curve)?;
        }
    }
    Ok(fig)
}

pub fn cmd_figures(dir: &Path, n_max: u32, command_line: &str) -> Result<Vec<PathBuf>> {
    if n_max > 40 {
        return Err(Error::InvalidInput(format!("figures need n_max <= 40, got {n_max}")));
    }
    fs::create_dir_all(dir)?;
    let figures = [
        ("fig1", figure1(n_max)?),
        ("fig2", figure2(n_max)?),
        ("fig3", figure3(n_max)?),
    ];
    let mut written = Vec::new();
    for (name, fig) in figures {
        let path = dir.join(format!("{name}.csv"));
        fs::write(&path, fig.document(name)?.to_csv(command_line)?)?;
        written.push(path);
    }
    Ok(written)
}

fn emit(bytes: &[u8], out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

/// Execute `config`, returning the process exit code for outcomes that are
/// not errors (a failed check suite yields 2).
pub fn run(config: &RunConfig, command_line: &str, stdout: &mut dyn Write) -> Result<i32> {
    let out = config.out.as_deref();
    let doc = match &config.command {
        Command::Exact { n, l, tol, hydrogen } => cmd_exact(*n, *l, *tol, *hydrogen)?,
        Command::Curve { nu, l, n_max, tol } => cmd_curve(*nu, *l, *n_max, *tol)?,
        Command::Interp { nu, l, n_max, beta, tol } => cmd_interp(*nu, *l, *n_max, beta, *tol)?,
        Command::Oracle { beta, l, nu, tol, r_max } => cmd_oracle(*beta, *l, *nu, *tol, *r_max)?,
        Command::Wavefn { n, l, i, r_max, points } => cmd_wavefn(*n, *l, *i, *r_max, *points)?,
        Command::Check { level, inject_fault } => {
            let report = run_checks(*level, inject_fault.then(Fault::default));
            let json = json!({
                "tool": TOOL,
                "schema": format!("tcoulomb.check/{SCHEMA_VERSION}"),
                "command": command_line,
                "passed": report.passed(),
                "report": report,
            });
            let mut bytes = serde_json::to_vec_pretty(&json)?;
            bytes.push(b'\n');
            match (out, config.format) {
                (Some(path), _) => {
                    fs::write(path, &bytes)?;
                    writeln!(stdout, "{report}")?;
                }
                (None, Format::Json) => stdout.write_all(&bytes)?,
                (None, Format::Csv) => writeln!(stdout, "{report}")?,
            }
            return Ok(if report.passed() { 0 } else { 2 });
        }
        Command::Figures { n_max } => {
            let dir = out.ok_or_else(|| {
                Error::InvalidInput("figures needs --out DIR for its output files".into())
            })?;
            for path in cmd_figures(dir, *n_max, command_line)? {
                writeln!(stdout, "wrote {}", path.display())?;
            }
            return Ok(0);
        }
    };
    emit(&doc.render(config.format, command_line)?, out, stdout)?;
    Ok(0)
}

/// Parse `args` (program name first) and run; clap handles `--help` and
/// `--version`.
pub fn run_from_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let config = match RunConfig::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    // the program path is left out so output does not depend on it
    let command_line = std::iter::once("tcoulomb".to_owned())
        .chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");
    match run(&config, &command_line, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
