//! Command-line front end for the defect Grover walk: simulate the walk,
//! list eigenvalues per closed-form case, construct stationary measures with
//! their φ oracle, emit the homogeneous limit measure, and run the
//! acceptance battery.
//!
//! Tables go to stdout, diagnostics to stderr. Exit codes: 0 ok,
//! 1 verification failure, 2 usage or parameter error.

use std::fmt;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use grover_walk::closed_form::{
    defect_solution, flat_solution, homogeneous_limit_measure, limit_decay_base, BranchSign,
    FlatFamily,
};
use grover_walk::lattice::{phi, step, ChiralityAmplitude, CoinConfig, WaveWindow};
use grover_walk::spectral::{
    defect_eigenvalue_pair, symmetric_quintic, symmetric_quintic_roots, theta_roots,
};
use grover_walk::verify::eigen_residual;
use grover_walk::C64;

#[derive(Parser)]
#[command(
    name = "grover-walk",
    version,
    about = "Three-state Grover walk on the integers with one coin defect at the origin"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the walk from an origin-localized state and emit the measure.
    Simulate(SimulateArgs),
    /// Emit eigenvalues and the small decay root per closed-form case.
    Eigen(EigenArgs),
    /// Construct a closed-form stationary measure and compare it with φ of
    /// the matching eigenvector.
    Stationary(StationaryArgs),
    /// Emit the time-averaged limit measure of the homogeneous walk.
    Limits(LimitsArgs),
    /// Run the full acceptance battery.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CaseLabel {
    Thm1Plus,
    Thm1Minus,
    I,
    IiA,
    IiB,
    IA,
}

impl CaseLabel {
    fn as_str(self) -> &'static str {
        match self {
            CaseLabel::Thm1Plus => "thm1+",
            CaseLabel::Thm1Minus => "thm1-",
            CaseLabel::I => "i",
            CaseLabel::IiA => "ii-a",
            CaseLabel::IiB => "ii-b",
            CaseLabel::IA => "i-a",
        }
    }
}

fn parse_case(s: &str) -> Result<CaseLabel, String> {
    match s {
        "thm1+" => Ok(CaseLabel::Thm1Plus),
        "thm1-" => Ok(CaseLabel::Thm1Minus),
        "i" => Ok(CaseLabel::I),
        "ii-a" => Ok(CaseLabel::IiA),
        "ii-b" => Ok(CaseLabel::IiB),
        "i-a" => Ok(CaseLabel::IA),
        other => Err(format!(
            "unknown case '{other}'; expected one of thm1+, thm1-, i, ii-a, ii-b, i-a"
        )),
    }
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected 're,im', got '{s}'"))?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|e| format!("bad real part '{re}': {e}"))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|e| format!("bad imaginary part '{im}': {e}"))?;
    Ok(C64::new(re, im))
}

#[derive(Args)]
struct SimulateArgs {
    /// Defect angle θ in radians, in [0, 2π); θ = 0 is the homogeneous walk.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    theta: f64,
    /// Initial left amplitude at the origin, as "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1,0")]
    alpha: C64,
    /// Initial stay amplitude at the origin, as "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    beta: C64,
    /// Initial right amplitude at the origin, as "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    gamma: C64,
    /// Number of steps to run.
    #[arg(long, default_value_t = 50)]
    steps: usize,
    /// Window half-width; must be at least steps + initial support radius.
    #[arg(long)]
    window: Option<i64>,
    /// Emit every step (rows step, x, value) instead of the final one.
    #[arg(long)]
    all_steps: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    output_format: Format,
}

#[derive(Args)]
struct EigenArgs {
    /// Defect angle θ in radians, in [0, 2π).
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    /// Closed-form case: thm1+, thm1-, i, ii-a, ii-b, or i-a.
    #[arg(long, value_parser = parse_case)]
    case: CaseLabel,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    output_format: Format,
}

#[derive(Args)]
struct StationaryArgs {
    /// Defect angle θ in radians, in [0, 2π).
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    /// Closed-form case: thm1+, thm1-, i, ii-a, or ii-b.
    #[arg(long, value_parser = parse_case)]
    case: CaseLabel,
    /// Free amplitude α, as "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1,0")]
    alpha: C64,
    /// Second free amplitude γ, as "re,im"; used by case ii-b only.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    gamma: Option<C64>,
    /// Window half-width for the constructed eigenvector.
    #[arg(long, default_value_t = 32)]
    window: i64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    output_format: Format,
}

#[derive(Args)]
struct LimitsArgs {
    /// Seed left amplitude α̃, as "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1,0")]
    alpha: C64,
    /// Seed stay amplitude β̃, as "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    beta: C64,
    /// Seed right amplitude γ̃, as "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "-1,0")]
    gamma: C64,
    /// Window half-width.
    #[arg(long, default_value_t = 32)]
    window: i64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    output_format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    output_format: Format,
}

/// Failures after argument parsing: parameter errors exit 2 like usage
/// errors; verification failures exit 1.
enum CliError {
    Parameter(String),
    Verification(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parameter(m) => write!(f, "parameter error: {m}"),
            CliError::Verification(m) => write!(f, "verification failure: {m}"),
        }
    }
}

impl From<grover_walk::Error> for CliError {
    fn from(e: grover_walk::Error) -> Self {
        let msg = e.to_string();
        let msg = msg
            .strip_prefix("parameter error: ")
            .map(str::to_string)
            .unwrap_or(msg);
        CliError::Parameter(msg)
    }
}

enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(t) => {
                if t.contains(',') || t.contains('"') || t.contains('\n') {
                    format!("\"{}\"", t.replace('"', "\"\""))
                } else {
                    t.clone()
                }
            }
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(t) => json!(t),
        }
    }
}

struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &'static [&'static str]) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn emit(spec: serde_json::Value, table: &Table, invariants: &[String], format: Format) {
    use std::io::Write;

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    // A closed pipe (e.g. | head) silently ends the emission.
    let result: std::io::Result<()> = (|| {
        match format {
            Format::Csv => {
                writeln!(out, "{}", table.columns.join(","))?;
                for row in &table.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = table
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = serde_json::Map::new();
                        for (name, cell) in table.columns.iter().zip(row) {
                            obj.insert((*name).to_string(), cell.json());
                        }
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let doc = json!({
                    "spec": spec,
                    "rows": rows,
                    "invariants_checked": invariants,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json encoding"))?;
            }
        }
        Ok(())
    })();
    if let Err(e) = result {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("failed writing to stdout: {e}");
        }
    }
}

fn complex_arg(v: C64) -> String {
    format!("{},{}", v.re, v.im)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => run_simulate(args),
        Command::Eigen(args) => run_eigen(args),
        Command::Stationary(args) => run_stationary(args),
        Command::Limits(args) => run_limits(args),
        Command::Verify(args) => run_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Verification(_) => ExitCode::from(1),
                CliError::Parameter(_) => ExitCode::from(2),
            }
        }
    }
}

fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let config = CoinConfig::new(args.theta)?;
    let window = args.window.unwrap_or(args.steps as i64 + 16);
    // The initial state is origin-localized, so its support radius is 0.
    if window < args.steps as i64 {
        return Err(CliError::Parameter(format!(
            "window {window} is smaller than steps {}; the valid interior would be exhausted",
            args.steps
        )));
    }
    if window > 1_000_000 {
        return Err(CliError::Parameter("window larger than 1e6 sites".into()));
    }

    let mut psi = WaveWindow::zero(-window, window);
    psi.set(0, ChiralityAmplitude::new(args.alpha, args.beta, args.gamma));
    if psi.norm_sqr_valid() == 0.0 {
        return Err(CliError::Parameter(
            "initial amplitudes are all zero".into(),
        ));
    }

    let mut invariants = vec![format!("theta in [0, 2pi): {}", args.theta)];
    // Support spreads one site per step while the interior shrinks by one,
    // so the interior norm is conserved only while window >= 2k.
    let conserved_steps = (window as usize) / 2;
    let initial_norm = psi.norm_sqr_valid();
    let mut worst_drift: f64 = 0.0;

    let mut table = if args.all_steps {
        Table::new(&["step", "x", "value"])
    } else {
        Table::new(&["x", "value"])
    };
    let record = |k: usize, psi: &WaveWindow<f64>, table: &mut Table| {
        let m = phi(psi);
        for x in psi.valid_lo()..=psi.valid_hi() {
            if args.all_steps {
                table.push(vec![
                    Cell::Int(k as i64),
                    Cell::Int(x),
                    Cell::Float(m.get(x)),
                ]);
            } else if k == args.steps {
                table.push(vec![Cell::Int(x), Cell::Float(m.get(x))]);
            }
        }
    };

    record(0, &psi, &mut table);
    for k in 1..=args.steps {
        psi = step(&psi, &config)?;
        if k <= conserved_steps {
            worst_drift = worst_drift.max((psi.norm_sqr_valid() - initial_norm).abs());
        }
        record(k, &psi, &mut table);
    }

    if conserved_steps > 0 {
        let bound = 1e-12 * initial_norm.max(1.0);
        if worst_drift > bound {
            return Err(CliError::Verification(format!(
                "interior norm drifted by {worst_drift:.3e} (bound {bound:.1e}) while the support was fully interior"
            )));
        }
        invariants.push(format!(
            "interior norm conserved to 1e-12 through step {}",
            conserved_steps.min(args.steps)
        ));
    }
    invariants.push("measure values nonnegative".into());

    let spec = json!({
        "command": "simulate",
        "theta": args.theta,
        "alpha": complex_arg(args.alpha),
        "beta": complex_arg(args.beta),
        "gamma": complex_arg(args.gamma),
        "steps": args.steps,
        "window": window,
        "all_steps": args.all_steps,
    });
    emit(spec, &table, &invariants, args.output_format);
    Ok(())
}

fn run_eigen(args: EigenArgs) -> Result<(), CliError> {
    let config = CoinConfig::new(args.theta)?;
    let label = args.case.as_str();
    let mut table = Table::new(&[
        "case",
        "lambda_re",
        "lambda_im",
        "theta_s_re",
        "theta_s_im",
        "abs2_theta_s",
    ]);
    let mut invariants = Vec::new();

    let push_lambda = |lambda: C64, table: &mut Table| -> Result<(), CliError> {
        let pair = theta_roots(lambda)?;
        table.push(vec![
            Cell::Text(label.to_string()),
            Cell::Float(lambda.re),
            Cell::Float(lambda.im),
            Cell::Float(pair.theta_s.re),
            Cell::Float(pair.theta_s.im),
            Cell::Float(pair.theta_s.norm_sqr()),
        ]);
        Ok(())
    };

    match args.case {
        CaseLabel::Thm1Plus | CaseLabel::Thm1Minus | CaseLabel::IiA => {
            let (lp, lm) = defect_eigenvalue_pair(&config)?;
            let chosen: Vec<C64> = match args.case {
                CaseLabel::Thm1Plus => vec![lp],
                CaseLabel::Thm1Minus => vec![lm],
                _ => vec![lp, lm],
            };
            for lambda in chosen {
                let off = (lambda.norm() - 1.0).abs();
                if off > 1e-12 {
                    return Err(CliError::Verification(format!(
                        "eigenvalue {lambda} is off the unit circle by {off:.3e} (bound 1e-12)"
                    )));
                }
                push_lambda(lambda, &mut table)?;
            }
            invariants.push("eigenvalues on the unit circle to 1e-12".into());
        }
        CaseLabel::I => {
            push_lambda(C64::new(-1.0, 0.0), &mut table)?;
            invariants.push("flat family eigenvalue is exactly -1".into());
        }
        CaseLabel::IiB => {
            if (config.omega() + C64::new(1.0, 0.0)).norm() > 1e-12 {
                return Err(CliError::Parameter(format!(
                    "case ii-b exists only at theta = pi (got {}); pass --theta 3.141592653589793",
                    args.theta
                )));
            }
            push_lambda(C64::new(-1.0, 0.0), &mut table)?;
            invariants.push("flat family eigenvalue is exactly -1".into());
        }
        CaseLabel::IA => {
            let quintic = symmetric_quintic(&config);
            let roots = symmetric_quintic_roots(&config)?;
            let mut worst = 0.0f64;
            for lambda in roots {
                worst = worst.max(quintic.eval(lambda).norm());
                push_lambda(lambda, &mut table)?;
            }
            if worst > 1e-10 {
                return Err(CliError::Verification(format!(
                    "quintic root residual {worst:.3e} exceeds 1e-10"
                )));
            }
            invariants.push("quintic residual < 1e-10 per root".into());
            // Off-circle roots never admit bounded eigenvectors; the circle
            // is not asserted here.
        }
    }

    let spec = json!({
        "command": "eigen",
        "theta": args.theta,
        "case": label,
    });
    emit(spec, &table, &invariants, args.output_format);
    Ok(())
}

fn run_stationary(args: StationaryArgs) -> Result<(), CliError> {
    let config = CoinConfig::new(args.theta)?;
    if args.window < 1 || args.window > 4096 {
        return Err(CliError::Parameter(
            "window must be between 1 and 4096".into(),
        ));
    }
    if args.case != CaseLabel::IiB && args.gamma.is_some() {
        return Err(CliError::Parameter(format!(
            "--gamma is only meaningful for case ii-b, not {}",
            args.case.as_str()
        )));
    }
    let hw = args.window as usize;

    let (lambda, psi, measure) = match args.case {
        CaseLabel::Thm1Plus | CaseLabel::Thm1Minus => {
            let sign = if args.case == CaseLabel::Thm1Plus {
                BranchSign::Plus
            } else {
                BranchSign::Minus
            };
            let sol = defect_solution(&config, sign, args.alpha, hw).map_err(|e| {
                if matches!(e, grover_walk::Error::TailDivergent { .. }) {
                    CliError::Parameter(format!(
                        "branch {} does not decay at theta = {}; try the other thm1 branch \
                         (both decay for acos(1/3) <= theta <= 2pi - acos(1/3))",
                        args.case.as_str(),
                        args.theta
                    ))
                } else {
                    e.into()
                }
            })?;
            (sol.branch.lambda, sol.psi, sol.measure)
        }
        CaseLabel::I => {
            let sol = flat_solution(&config, &FlatFamily::Symmetric { alpha: args.alpha }, hw)?;
            (sol.lambda, sol.psi, sol.measure)
        }
        CaseLabel::IiA => {
            let sol = flat_solution(
                &config,
                &FlatFamily::Antisymmetric { alpha: args.alpha },
                hw,
            )?;
            (sol.lambda, sol.psi, sol.measure)
        }
        CaseLabel::IiB => {
            let gamma = args.gamma.ok_or_else(|| {
                CliError::Parameter("case ii-b needs --gamma (second tail amplitude)".into())
            })?;
            let sol = flat_solution(
                &config,
                &FlatFamily::Split {
                    alpha: args.alpha,
                    gamma,
                },
                hw,
            )?;
            (sol.lambda, sol.psi, sol.measure)
        }
        CaseLabel::IA => {
            return Err(CliError::Parameter(
                "case i-a has no closed-form measure; use eigen --case i-a for its spectrum"
                    .into(),
            ));
        }
    };

    let oracle = phi(&psi);
    let mut table = Table::new(&["x", "value", "oracle", "absdiff"]);
    let mut worst = 0.0f64;
    let mut worst_rel = 0.0f64;
    for x in -args.window..=args.window {
        let value = measure.get(x);
        let probe = oracle.get(x);
        let diff = (value - probe).abs();
        worst = worst.max(diff);
        worst_rel = worst_rel.max(diff / value.abs().max(1.0));
        table.push(vec![
            Cell::Int(x),
            Cell::Float(value),
            Cell::Float(probe),
            Cell::Float(diff),
        ]);
    }
    if worst_rel > 1e-9 {
        return Err(CliError::Verification(format!(
            "closed-form measure and phi oracle disagree by {worst:.3e}"
        )));
    }

    let residual = eigen_residual(&psi, lambda, &config)?;
    if residual > 1e-10 {
        return Err(CliError::Verification(format!(
            "eigen-equation residual {residual:.3e} exceeds 1e-10"
        )));
    }

    let invariants = vec![
        "phi oracle within 1e-9".to_string(),
        "eigen-equation residual < 1e-10".to_string(),
        "measure values nonnegative".to_string(),
    ];
    let mut spec = json!({
        "command": "stationary",
        "theta": args.theta,
        "case": args.case.as_str(),
        "alpha": complex_arg(args.alpha),
        "window": args.window,
    });
    if let Some(g) = args.gamma {
        spec["gamma"] = json!(complex_arg(g));
    }
    emit(spec, &table, &invariants, args.output_format);
    Ok(())
}

fn run_limits(args: LimitsArgs) -> Result<(), CliError> {
    if args.window < 1 || args.window > 4096 {
        return Err(CliError::Parameter(
            "window must be between 1 and 4096".into(),
        ));
    }
    let seed = ChiralityAmplitude::new(args.alpha, args.beta, args.gamma);
    if seed.norm_sqr() == 0.0 {
        return Err(CliError::Parameter("seed amplitudes are all zero".into()));
    }
    let measure = homogeneous_limit_measure(seed, args.window as usize);

    let mut table = Table::new(&["x", "value"]);
    for x in -args.window..=args.window {
        table.push(vec![Cell::Int(x), Cell::Float(measure.get(x))]);
    }

    let mut invariants = vec!["measure values nonnegative".to_string()];
    // Tails decay geometrically with the closed-form base when present.
    let base = limit_decay_base::<f64>();
    let mut geometric = true;
    for anchor in [1i64, -1] {
        let head = measure.get(anchor);
        if head > 1e-300 {
            for x in 1..args.window.min(6) {
                let a = measure.get(anchor.signum() * x);
                let b = measure.get(anchor.signum() * (x + 1));
                if (b / a - base).abs() > 1e-10 * base {
                    geometric = false;
                }
            }
        }
    }
    if !geometric {
        return Err(CliError::Verification(
            "limit-measure tails are not geometric with the closed-form base".into(),
        ));
    }
    invariants.push("tails geometric with base 49-20*sqrt(6)".into());

    let spec = json!({
        "command": "limits",
        "alpha": complex_arg(args.alpha),
        "beta": complex_arg(args.beta),
        "gamma": complex_arg(args.gamma),
        "window": args.window,
    });
    emit(spec, &table, &invariants, args.output_format);
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<(), CliError> {
    let results = grover_walk::acceptance::run_all();
    let mut table = Table::new(&["criterion", "passed", "name", "detail"]);
    let mut invariants = Vec::new();
    let mut failed = Vec::new();
    for r in &results {
        table.push(vec![
            Cell::Int(r.index as i64),
            Cell::Text(if r.passed { "pass" } else { "fail" }.into()),
            Cell::Text(r.name.to_string()),
            Cell::Text(r.detail.clone()),
        ]);
        if r.passed {
            invariants.push(format!("criterion {}: {}", r.index, r.name));
        } else {
            failed.push(r.index.to_string());
        }
    }
    let spec = json!({ "command": "verify" });
    emit(spec, &table, &invariants, args.output_format);
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "acceptance criteria failed: {}",
            failed.join(", ")
        )))
    }
}
