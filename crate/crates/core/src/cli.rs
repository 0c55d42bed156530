//! Command-line front end: `solve`, `reproduce`, `convergence` and `basis`.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 numerical failure (non-convergence,
//! singular system, or a reproduced table outside tolerance).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{self, reference, TableRun};
use crate::error::{Error, Result};
use crate::newton::NewtonReport;
use crate::opmat::build_d;
use crate::problem::resolve_problem;
use crate::schemes::{collocation_nodes, solve, SchemeConfig, SchemeKind, Treatment};
use crate::wavelet::BasisSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "vlwave", version, about = "Vieta-Lucas wavelet solvers for singular ODEs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and write a solution CSV.
    Solve(SolveArgs),
    /// Re-run a published error table.
    Reproduce(ReproduceArgs),
    /// Error norms over a list of resolutions.
    Convergence(ConvergenceArgs),
    /// Dump the operational matrix and collocation nodes of a basis.
    Basis(BasisArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TreatmentArg {
    Raw,
    Zeta,
}

impl From<TreatmentArg> for Treatment {
    fn from(t: TreatmentArg) -> Self {
        match t {
            TreatmentArg::Raw => Treatment::Raw,
            TreatmentArg::Zeta => Treatment::MultiplyByZeta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Collocation,
    Tau,
    Galerkin,
}

impl From<SchemeArg> for SchemeKind {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Collocation => SchemeKind::Collocation,
            SchemeArg::Tau => SchemeKind::Tau,
            SchemeArg::Galerkin => SchemeKind::Galerkin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// `builtin:N` (N = 1..5) or a JSON problem file.
    #[arg(long)]
    pub problem: String,
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    /// Integrand treatment for Tau and Galerkin (default: zeta when mu != 0).
    #[arg(long, value_enum)]
    pub treatment: Option<TreatmentArg>,
    /// Newton tolerance on the residual infinity norm.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = 50)]
    pub max_iter: usize,
    /// Gauss-Legendre points per subinterval.
    #[arg(long = "quad-order", default_value_t = crate::quadrature::DEFAULT_ORDER)]
    pub quad_order: usize,
}

impl SolverArgs {
    fn config(&self) -> SchemeConfig {
        let mut c = SchemeConfig::new(self.scheme.into());
        c.treatment = self.treatment.map(Treatment::from);
        c.newton.tol = self.tol;
        c.newton.max_iter = self.max_iter;
        c.quad_order = self.quad_order;
        c
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = 1, conflicts_with = "eta")]
    pub k: u32,
    /// Polynomial order per subinterval.
    #[arg(long = "M", conflicts_with = "eta", required_unless_present = "eta")]
    pub order: Option<usize>,
    /// Shorthand for `--k 1 --M N`.
    #[arg(long)]
    pub eta: Option<usize>,
    /// Solution CSV; the manifest goes next to it.
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated evaluation points (default: 0, L/10, ..., L).
    #[arg(long, value_delimiter = ',')]
    pub points: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long)]
    pub table: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_delimiter = ',', default_value = "6,8,10,12")]
    pub etas: Vec<usize>,
    #[arg(long, default_value = "convergence.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long = "M")]
    pub order: usize,
    #[arg(long = "L", default_value_t = 2.0)]
    pub length: f64,
    /// Also print the operational matrix.
    #[arg(long = "dump-opmat")]
    pub dump_opmat: bool,
    /// Also print the collocation nodes.
    #[arg(long = "dump-nodes")]
    pub dump_nodes: bool,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

/// Record of one invocation, written as JSON next to the outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub problem: Option<String>,
    pub scheme: Option<SchemeKind>,
    pub basis: Option<BasisSpec>,
    pub eta: Option<usize>,
    pub config: Option<SchemeConfig>,
    pub singularity_treatment: Option<Treatment>,
    pub timestamp: String,
    pub report: Option<NewtonReport>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            problem: None,
            scheme: None,
            basis: None,
            eta: None,
            config: None,
            singularity_treatment: None,
            timestamp: chrono::Utc::now().to_rfc3339(),
            report: None,
            outputs: Vec::new(),
        }
    }

    fn write(&mut self, path: &Path) -> Result<()> {
        self.outputs.push(path.display().to_string());
        fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::SingularJacobian { .. }
        | Error::NonFiniteJacobian { .. }
        | Error::NonFiniteResidual(_)
        | Error::NonFiniteIntegrand { .. } => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Solve(a) => cmd_solve(&a),
        Command::Reproduce(a) => cmd_reproduce(&a),
        Command::Convergence(a) => cmd_convergence(&a),
        Command::Basis(a) => cmd_basis(&a),
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?)
}

fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}

pub fn cmd_solve(a: &SolveArgs) -> Result<i32> {
    let problem = resolve_problem(&a.solver.problem)?;
    let basis = match (a.eta, a.order) {
        (Some(eta), _) => BasisSpec::single(eta, problem.length)?,
        (None, Some(m)) => BasisSpec::new(a.k, m, problem.length)?,
        (None, None) => return Err(Error::Config("either --eta or --M is required".into())),
    };
    let config = a.solver.config();
    let sol = solve(&problem, &basis, &config)?;
    let l = problem.length;
    let points = a
        .points
        .clone()
        .unwrap_or_else(|| (0..=10).map(|i| l * i as f64 / 10.0).collect());
    if let Some(&x) = points.iter().find(|&&x| !(0.0..=l).contains(&x)) {
        return Err(Error::Config(format!("point {x} outside [0, {l}]")));
    }

    let mut w = csv_writer(&a.out)?;
    let has_exact = problem.exact.is_some();
    if has_exact {
        w.write_record(["x", "approx", "exact", "abs_error"])?;
    } else {
        w.write_record(["x", "approx"])?;
    }
    for &x in &points {
        let y = sol.value(x)?;
        if has_exact {
            let e = problem.exact_at(x)?;
            w.write_record([fmt(x), fmt(y), fmt(e), fmt((e - y).abs())])?;
        } else {
            w.write_record([fmt(x), fmt(y)])?;
        }
    }
    w.flush()?;

    let mut m = RunManifest::new("solve");
    m.problem = Some(a.solver.problem.clone());
    m.scheme = Some(config.scheme);
    m.basis = Some(basis);
    m.eta = Some(basis.eta());
    m.config = Some(config);
    m.singularity_treatment = Some(sol.treatment);
    m.report = Some(sol.report.clone());
    m.outputs.push(a.out.display().to_string());
    m.write(&manifest_path(&a.out))?;

    let r = &sol.report;
    println!(
        "{} {} eta={} iterations={} residual={:.3e} converged={}",
        problem.name, config.scheme, basis.eta(), r.iterations, r.final_residual_norm, r.converged
    );
    Ok(if r.converged { EXIT_OK } else { EXIT_NUMERICAL })
}

#[derive(Serialize)]
struct SummaryRow {
    example: usize,
    scheme: SchemeKind,
    eta: usize,
    max_error: f64,
    published_max: f64,
    tolerance: f64,
    iterations: usize,
    converged: bool,
    pass: bool,
}

impl From<&TableRun> for SummaryRow {
    fn from(r: &TableRun) -> Self {
        Self {
            example: r.example,
            scheme: r.table.scheme,
            eta: r.table.eta,
            max_error: r.table.max_error(),
            published_max: r.published_max(),
            tolerance: r.tolerance,
            iterations: r.iterations,
            converged: r.converged,
            pass: r.pass(),
        }
    }
}

pub fn cmd_reproduce(a: &ReproduceArgs) -> Result<i32> {
    let cases = reference::cases(a.table)?;
    let runs = analysis::reproduce_table(a.table)?;
    fs::create_dir_all(&a.out)?;
    let ext = match a.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut manifest = RunManifest::new("reproduce");
    for case in cases {
        let path = a.out.join(format!("table{}_example{}.{ext}", a.table, case.example));
        let mine: Vec<&TableRun> = runs.iter().filter(|r| r.example == case.example).collect();
        match a.format {
            Format::Csv => {
                let mut w = csv_writer(&path)?;
                w.write_record(["x", "exact", "scheme", "approx", "abs_error", "published_error"])?;
                for run in &mine {
                    for (row, published) in run.table.rows.iter().zip(&run.published_errors) {
                        w.write_record([
                            fmt(row.x),
                            fmt(row.exact),
                            run.table.scheme.to_string(),
                            fmt(row.approx),
                            fmt(row.abs_error()),
                            fmt(*published),
                        ])?;
                    }
                }
                w.flush()?;
            }
            Format::Json => fs::write(&path, serde_json::to_string_pretty(&mine)? + "\n")?,
        }
        manifest.outputs.push(path.display().to_string());
    }

    let summary: Vec<SummaryRow> = runs.iter().map(SummaryRow::from).collect();
    let path = a.out.join(format!("table{}_summary.{ext}", a.table));
    match a.format {
        Format::Csv => {
            let mut w = csv_writer(&path)?;
            for s in &summary {
                w.serialize(s)?;
            }
            w.flush()?;
        }
        Format::Json => fs::write(&path, serde_json::to_string_pretty(&summary)? + "\n")?,
    }
    manifest.outputs.push(path.display().to_string());
    manifest.write(&a.out.join(format!("table{}_manifest.json", a.table)))?;

    let mut stdout = std::io::stdout().lock();
    for s in &summary {
        writeln!(
            stdout,
            "{} example {} {:<11} max error {:.2e} (published {:.2e}, tolerance {:.0e})",
            if s.pass { "PASS" } else { "FAIL" },
            s.example,
            s.scheme,
            s.max_error,
            s.published_max,
            s.tolerance
        )?;
    }
    Ok(if summary.iter().all(|s| s.pass) { EXIT_OK } else { EXIT_NUMERICAL })
}

pub fn cmd_convergence(a: &ConvergenceArgs) -> Result<i32> {
    let problem = resolve_problem(&a.solver.problem)?;
    let config = a.solver.config();
    let rows = analysis::convergence_sweep(&problem, &config, &a.etas)?;
    let mut w = csv_writer(&a.out)?;
    w.write_record(["eta", "linf", "l2", "iterations", "converged", "error"])?;
    for r in &rows {
        w.write_record([
            r.eta.to_string(),
            fmt(r.linf),
            fmt(r.l2),
            r.iterations.to_string(),
            r.converged.to_string(),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    let mut m = RunManifest::new("convergence");
    m.problem = Some(a.solver.problem.clone());
    m.scheme = Some(config.scheme);
    m.config = Some(config);
    m.singularity_treatment = Some(config.effective_treatment(&problem));
    m.outputs.push(a.out.display().to_string());
    m.write(&manifest_path(&a.out))?;
    for r in &rows {
        match &r.error {
            None => println!("eta={:<3} linf={:.3e} l2={:.3e}", r.eta, r.linf, r.l2),
            Some(e) => println!("eta={:<3} failed: {e}", r.eta),
        }
    }
    Ok(if rows.iter().all(|r| r.converged) { EXIT_OK } else { EXIT_NUMERICAL })
}

pub fn cmd_basis(a: &BasisArgs) -> Result<i32> {
    let spec = BasisSpec::new(a.k, a.order, a.length)?;
    fs::create_dir_all(&a.out)?;
    let stem = format!("basis_k{}_M{}", a.k, a.order);
    let mut m = RunManifest::new("basis");
    m.basis = Some(spec);
    m.eta = Some(spec.eta());

    let d = build_d(&spec).entries;
    let path = a.out.join(format!("{stem}_opmat.csv"));
    let mut w = csv_writer(&path)?;
    w.write_record((1..=d.ncols()).map(|c| format!("c{c}")))?;
    for r in 0..d.nrows() {
        w.write_record(d.row(r).iter().map(|&v| fmt(v)))?;
    }
    w.flush()?;
    m.outputs.push(path.display().to_string());
    if a.dump_opmat {
        println!("{}", fs::read_to_string(&path)?.trim_end());
    }

    if spec.eta() >= 3 {
        let nodes = collocation_nodes(&spec)?;
        let path = a.out.join(format!("{stem}_nodes.csv"));
        let mut w = csv_writer(&path)?;
        w.write_record(["x"])?;
        for x in &nodes {
            w.write_record([fmt(*x)])?;
        }
        w.flush()?;
        m.outputs.push(path.display().to_string());
        if a.dump_nodes {
            println!("{}", fs::read_to_string(&path)?.trim_end());
        }
    } else if a.dump_nodes {
        println!("no collocation nodes for eta = {}", spec.eta());
    }
    m.write(&a.out.join(format!("{stem}_manifest.json")))?;
    Ok(EXIT_OK)
}
