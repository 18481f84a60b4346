//! The `bohrkit` command line: radii, sweeps, verification suites and tables.
//!
//! Exit codes: 0 success, 1 usage or validation, 2 domain error, 3 numerical
//! failure, 4 unwritable output, 5 a verification assertion failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use bohrkit::radii::{bohr_radius_omega, RadiusEquation, RadiusResult};
use bohrkit::tolerances::RADIUS_TOL;
use bohrkit::verify::{
    default_ladder, identity_suite, lemma1_check, remainder_order_check, sharpness_scan_bernardi,
    sharpness_scan_cesaro, OperatorKind,
};
use bohrkit::{DomainGamma, Error};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_OUTPUT: i32 = 4;
pub const EXIT_ASSERTION: i32 = 5;

/// Blaschke degrees and series order used by `verify lemma1`.
const LEMMA1_DEGREE_MAX: usize = 8;
const LEMMA1_ORDER: usize = 64;
const LEMMA1_SLACK: f64 = 1e-9;
const IDENTITY_TOL: f64 = 1e-10;
const SLOPE_RANGE: (f64, f64) = (1.8, 2.2);

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_domain() { EXIT_DOMAIN } else { EXIT_NUMERICAL };
        Failure::new(code, e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "bohrkit",
    version,
    about = "Bohr-type radii for Cesàro and Bernardi operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one radius equation.
    #[command(subcommand)]
    Radius(RadiusCmd),
    /// Solve a radius equation over a grid of one parameter.
    Sweep(SweepArgs),
    /// Run a verification suite and print a JSON report.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Print a table of radii or constants.
    Table(TableArgs),
}

#[derive(Subcommand, Debug)]
enum RadiusCmd {
    Cesaro {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value_t = RADIUS_TOL)]
        tol: f64,
    },
    Bernardi {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, default_value_t = RADIUS_TOL)]
        tol: f64,
    },
    BernardiClassic {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = RADIUS_TOL)]
        tol: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum EquationArg {
    Cesaro,
    Bernardi,
    BernardiClassic,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum ParameterArg {
    Gamma,
    Beta,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    equation: EquationArg,
    #[arg(long, value_enum)]
    parameter: ParameterArg,
    /// Comma-separated, strictly increasing grid values.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    grid: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = RADIUS_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum OpArg {
    Cesaro,
    Bernardi,
}

impl From<OpArg> for OperatorKind {
    fn from(op: OpArg) -> Self {
        match op {
            OpArg::Cesaro => OperatorKind::Cesaro,
            OpArg::Bernardi => OperatorKind::Bernardi,
        }
    }
}

#[derive(Args, Debug)]
struct ExtremalArgs {
    #[arg(long, value_enum)]
    op: OpArg,
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    r: f64,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    Lemma1 {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    Sharpness(ExtremalArgs),
    RemainderOrder(ExtremalArgs),
    Identities,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum TableName {
    #[value(name = "theorem1")]
    CesaroRadii,
    #[value(name = "theorem2")]
    BernardiRadii,
    #[value(name = "paper-constants")]
    Constants,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum TableFormat {
    Text,
    Csv,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(value_enum)]
    name: TableName,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Caps the global rayon pool from `BOHRKIT_THREADS`, if set.
pub fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("BOHRKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::new(
            EXIT_USAGE,
            format!("BOHRKIT_THREADS must be a positive integer, got {raw:?}"),
        )
    })?;
    // a pool that already exists keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parse `args` (program name first), run the command, and return the exit
/// code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let mut text = e.render().to_string();
            if !e.use_stderr() {
                let _ = out.write_all(text.as_bytes());
                return EXIT_OK;
            }
            if !text.contains("Usage:") {
                text = format!("{text}\n{}\n", Cli::command().render_usage());
            }
            let _ = err.write_all(text.as_bytes());
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Radius(cmd) => run_radius(cmd, out),
        Command::Sweep(args) => run_sweep(args, out),
        Command::Verify(cmd) => run_verify(cmd, out),
        Command::Table(args) => run_table(args, out),
    }
}

fn gamma(g: f64) -> Result<DomainGamma, Failure> {
    Ok(DomainGamma::new(g)?)
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_DOMAIN, format!("tol must be positive, got {tol}")))
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::new(EXIT_OUTPUT, format!("cannot write output: {e}")))
}

fn emit_to(path: Option<&PathBuf>, out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    match path {
        None => emit(out, text),
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::new(EXIT_OUTPUT, format!("cannot write {}: {e}", p.display())))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Seventeen significant digits; parses back to the same double.
fn full(x: f64) -> String {
    format!("{x:.16e}")
}

fn equation_parameters(eq: &RadiusEquation) -> Value {
    match *eq {
        RadiusEquation::Cesaro { gamma } => json!({ "gamma": gamma }),
        RadiusEquation::Bernardi { gamma, beta } => json!({ "gamma": gamma, "beta": beta }),
        RadiusEquation::BernardiClassic { beta, m } => json!({ "beta": beta, "m": m }),
    }
}

fn run_radius(cmd: RadiusCmd, out: &mut dyn Write) -> Result<i32, Failure> {
    let (eq, tol) = match cmd {
        RadiusCmd::Cesaro { gamma: g, tol } => (RadiusEquation::Cesaro { gamma: gamma(g)? }, tol),
        RadiusCmd::Bernardi { gamma: g, beta, tol } => (RadiusEquation::Bernardi { gamma: gamma(g)?, beta }, tol),
        RadiusCmd::BernardiClassic { beta, m, tol } => (RadiusEquation::BernardiClassic { beta, m }, tol),
    };
    check_tol(tol)?;
    let root = eq.solve(tol)?;
    let record = json!({
        "equation": eq.name(),
        "parameters": equation_parameters(&eq),
        "radius": root.value,
        "residual": root.residual,
        "iterations": root.iterations,
        "converged": root.converged,
        "version": VERSION,
    });
    emit(out, &to_json(&record))?;
    Ok(if root.converged { EXIT_OK } else { EXIT_NUMERICAL })
}

fn validation(message: impl Into<String>) -> Failure {
    Failure::new(EXIT_USAGE, message)
}

fn sweep_equations(args: &SweepArgs) -> Result<Vec<RadiusEquation>, Failure> {
    if args.grid.is_empty() {
        return Err(validation("the sweep grid is empty"));
    }
    if args.grid.iter().any(|x| !x.is_finite()) || args.grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(validation("the sweep grid must be finite and strictly increasing"));
    }
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| validation(format!("this sweep needs --{name}")));
    args.grid
        .iter()
        .map(|&x| {
            Ok(match (args.equation, args.parameter) {
                (EquationArg::Cesaro, ParameterArg::Gamma) => RadiusEquation::Cesaro { gamma: gamma(x)? },
                (EquationArg::Bernardi, ParameterArg::Gamma) => RadiusEquation::Bernardi {
                    gamma: gamma(x)?,
                    beta: need(args.beta, "beta")?,
                },
                (EquationArg::Bernardi, ParameterArg::Beta) => RadiusEquation::Bernardi {
                    gamma: gamma(need(args.gamma, "gamma")?)?,
                    beta: x,
                },
                (EquationArg::BernardiClassic, ParameterArg::Beta) => {
                    let m = args.m.ok_or_else(|| validation("this sweep needs --m"))?;
                    RadiusEquation::BernardiClassic { beta: x, m }
                }
                (EquationArg::Cesaro, ParameterArg::Beta) => {
                    return Err(validation("the cesaro equation has no beta parameter"))
                }
                (EquationArg::BernardiClassic, ParameterArg::Gamma) => {
                    return Err(validation("the bernardi-classic equation has no gamma parameter"))
                }
            })
        })
        .collect()
}

fn run_sweep(args: SweepArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let equations = sweep_equations(&args)?;
    check_tol(args.tol)?;
    let roots: Vec<RadiusResult> = equations
        .par_iter()
        .map(|eq| eq.solve(args.tol))
        .collect::<bohrkit::Result<_>>()?;
    let column = match args.parameter {
        ParameterArg::Gamma => "gamma",
        ParameterArg::Beta => "beta",
    };

    let text = match args.format {
        FormatArg::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let fail = |e: csv::Error| Failure::new(EXIT_OUTPUT, e.to_string());
            w.write_record([column, "radius", "residual", "iterations"])
                .map_err(fail)?;
            for (x, root) in args.grid.iter().zip(&roots) {
                w.write_record([
                    x.to_string(),
                    full(root.value),
                    full(root.residual),
                    root.iterations.to_string(),
                ])
                .map_err(fail)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Failure::new(EXIT_OUTPUT, e.to_string()))?)
                .expect("csv output is UTF-8")
        }
        FormatArg::Json => {
            let rows: Vec<Value> = args
                .grid
                .iter()
                .zip(&roots)
                .map(|(x, root)| {
                    json!({
                        column: x,
                        "radius": root.value,
                        "residual": root.residual,
                        "iterations": root.iterations,
                    })
                })
                .collect();
            to_json(&rows)
        }
    };
    emit_to(args.out.as_ref(), out, &text)?;
    Ok(if roots.iter().all(|r| r.converged) {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    })
}

fn report(
    out: &mut dyn Write,
    suite: &str,
    parameters: Value,
    passed: bool,
    body: &impl Serialize,
) -> Result<i32, Failure> {
    let doc = json!({
        "suite": suite,
        "version": VERSION,
        "parameters": parameters,
        "passed": passed,
        "report": body,
    });
    emit(out, &to_json(&doc))?;
    Ok(if passed { EXIT_OK } else { EXIT_ASSERTION })
}

fn run_verify(cmd: VerifyCmd, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        VerifyCmd::Lemma1 {
            gamma: g,
            samples,
            seed,
        } => {
            let rep = lemma1_check(gamma(g)?, samples, LEMMA1_DEGREE_MAX, LEMMA1_ORDER, seed)?;
            let params = json!({
                "gamma": g,
                "samples": samples,
                "seed": seed,
                "degree_max": LEMMA1_DEGREE_MAX,
                "order": LEMMA1_ORDER,
            });
            report(out, "lemma1", params, rep.max_ratio <= 1.0 + LEMMA1_SLACK, &rep)
        }
        VerifyCmd::Sharpness(a) => {
            let dom = gamma(a.gamma)?;
            let ladder = default_ladder();
            let rep = match a.op {
                OpArg::Cesaro => sharpness_scan_cesaro(dom, a.r, &ladder)?,
                OpArg::Bernardi => {
                    let beta = a.beta.ok_or_else(|| validation("--op bernardi needs --beta"))?;
                    sharpness_scan_bernardi(dom, beta, a.r, &ladder)?
                }
            };
            // no witness is expected where the construction is not known to be sharp
            let passed = rep.witness_found || rep.exploratory;
            report(out, "sharpness", extremal_parameters(&a), passed, &rep)
        }
        VerifyCmd::RemainderOrder(a) => {
            if a.op == OpArg::Bernardi && a.beta.is_none() {
                return Err(validation("--op bernardi needs --beta"));
            }
            let fit = remainder_order_check(a.op.into(), gamma(a.gamma)?, a.beta, a.r, &default_ladder())?;
            let passed = fit.slope >= SLOPE_RANGE.0 && fit.slope <= SLOPE_RANGE.1;
            report(out, "remainder-order", extremal_parameters(&a), passed, &fit)
        }
        VerifyCmd::Identities => {
            let rep = identity_suite()?;
            report(out, "identities", json!({}), rep.max_deviation <= IDENTITY_TOL, &rep)
        }
    }
}

fn extremal_parameters(a: &ExtremalArgs) -> Value {
    json!({
        "op": OperatorKind::from(a.op).name(),
        "gamma": a.gamma,
        "beta": if a.op == OpArg::Bernardi { a.beta } else { None },
        "r": a.r,
        "a_values": default_ladder(),
    })
}

const CESARO_TABLE_GAMMAS: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99];
const BERNARDI_TABLE_GAMMAS: [f64; 6] = [0.0, 0.2, 0.4, 0.5, 0.6, 0.8];
const BERNARDI_TABLE_BETAS: [f64; 4] = [1.0, 2.0, 3.0, 5.0];

struct Table {
    header: Vec<String>,
    /// Each cell keeps the full value for CSV and a display string.
    rows: Vec<Vec<Cell>>,
}

enum Cell {
    Text(String),
    Number(f64),
}

impl Cell {
    fn display(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Number(x) => format!("{x:.6}"),
        }
    }

    fn full(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Number(x) => full(*x),
        }
    }
}

fn solve(eq: RadiusEquation) -> Result<f64, Failure> {
    let root = eq.solve(RADIUS_TOL)?;
    if !root.converged {
        return Err(Failure::new(
            EXIT_NUMERICAL,
            format!("{} radius did not converge", eq.name()),
        ));
    }
    Ok(root.value)
}

fn build_table(name: TableName) -> Result<Table, Failure> {
    match name {
        TableName::CesaroRadii => {
            let radii: Vec<f64> = CESARO_TABLE_GAMMAS
                .par_iter()
                .map(|&g| solve(RadiusEquation::Cesaro { gamma: gamma(g)? }))
                .collect::<Result<_, _>>()?;
            Ok(Table {
                header: vec!["gamma".into(), "cesaro_radius".into(), "bohr_radius".into()],
                rows: CESARO_TABLE_GAMMAS
                    .iter()
                    .zip(radii)
                    .map(|(&g, r)| {
                        let bohr = bohr_radius_omega(DomainGamma::new(g).expect("grid lies in [0,1)"));
                        vec![Cell::Text(g.to_string()), Cell::Number(r), Cell::Number(bohr)]
                    })
                    .collect(),
            })
        }
        TableName::BernardiRadii => {
            let mut header = vec!["gamma".to_string()];
            header.extend(BERNARDI_TABLE_BETAS.iter().map(|b| format!("beta={b}")));
            let rows = BERNARDI_TABLE_GAMMAS
                .par_iter()
                .map(|&g| {
                    let dom = gamma(g)?;
                    let mut row = vec![Cell::Text(g.to_string())];
                    for &beta in &BERNARDI_TABLE_BETAS {
                        row.push(Cell::Number(solve(RadiusEquation::Bernardi { gamma: dom, beta })?));
                    }
                    Ok(row)
                })
                .collect::<Result<_, Failure>>()?;
            Ok(Table { header, rows })
        }
        TableName::Constants => {
            let bohr = bohr_radius_omega(DomainGamma::unit_disk());
            let cesaro = solve(RadiusEquation::Cesaro {
                gamma: DomainGamma::unit_disk(),
            })?;
            let classic = solve(RadiusEquation::BernardiClassic { beta: 1.0, m: 1 })?;
            let row = |name: &str, x: f64, quoted: &str| {
                vec![Cell::Text(name.into()), Cell::Number(x), Cell::Text(quoted.into())]
            };
            Ok(Table {
                header: vec!["constant".into(), "computed".into(), "reference".into()],
                rows: vec![
                    row("bohr gamma=0", bohr, "1/3"),
                    row("cesaro gamma=0", cesaro, "0.5335"),
                    row("bernardi-classic beta=1 m=1", classic, "-"),
                ],
            })
        }
    }
}

fn render_text(t: &Table) -> String {
    let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Cell::display).collect()).collect();
    let mut widths: Vec<usize> = t.header.iter().map(|h| h.chars().count()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |items: &[String]| {
        let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(&t.header);
    for row in &cells {
        s += &line(row);
    }
    s
}

fn render_csv(t: &Table) -> Result<String, Failure> {
    let fail = |e: csv::Error| Failure::new(EXIT_OUTPUT, e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.header).map_err(fail)?;
    for row in &t.rows {
        w.write_record(row.iter().map(Cell::full)).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::new(EXIT_OUTPUT, e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn run_table(args: TableArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let table = build_table(args.name)?;
    let text = match args.format {
        TableFormat::Text => render_text(&table),
        TableFormat::Csv => render_csv(&table)?,
    };
    emit_to(args.out.as_ref(), out, &text)?;
    Ok(EXIT_OK)
}
