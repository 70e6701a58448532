use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qultra::qcore::real;
use qultra::ultraspherical::{bilateral_cn, classical_cn, Kind, UltraParams};
use qultra::{Error, Result};
use qultra_cli::config::{read_config_file, theta_grid, ConfigMap, SamplePoint, SuiteConfig};
use qultra_cli::report::VerificationReport;
use qultra_cli::suite::{identity_names, run_identity, run_suite};

#[derive(Parser)]
#[command(name = "qultra", version, about = "Bilateral q-ultraspherical functions and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate C_n at the given point(s).
    Eval {
        #[arg(long, value_enum, default_value_t = KindArg::Bilateral)]
        kind: KindArg,
    },
    /// Run one named identity check.
    Identity {
        #[arg(long)]
        name: Option<String>,
        /// List the known identity names.
        #[arg(long)]
        list: bool,
    },
    /// Run every identity check and print the report.
    Suite,
    /// Print C_n over a grid of n and θ as CSV.
    Table {
        #[arg(long, value_enum, default_value_t = KindArg::Bilateral)]
        kind: KindArg,
        #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
        n_min: i64,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        n_max: i64,
        /// Number of interior θ grid points; defaults to the configured points.
        #[arg(long)]
        grid: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Classical,
    Bilateral,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Classical => Kind::Classical,
            KindArg::Bilateral => Kind::Bilateral,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// `json` by default; `table` defaults to `csv`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    n: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true, conflicts_with_all = ["theta", "z_re", "z_im"])]
    x: Option<String>,
    /// One value or a comma-separated list.
    #[arg(long, global = true, allow_hyphen_values = true, conflicts_with_all = ["z_re", "z_im"])]
    theta: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    z_re: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    z_im: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    t_re: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    t_im: Option<String>,
    #[arg(long, global = true)]
    rel_tol: Option<String>,
    #[arg(long, global = true)]
    abs_tol: Option<String>,
    #[arg(long, global = true)]
    max_terms: Option<String>,
    #[arg(long, global = true)]
    quad_tol: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
}

impl Common {
    fn overrides(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("q", &self.q),
            ("beta", &self.beta),
            ("gamma", &self.gamma),
            ("n", &self.n),
            ("m", &self.m),
            ("x", &self.x),
            ("theta", &self.theta),
            ("z_re", &self.z_re),
            ("z_im", &self.z_im),
            ("t", &self.t_re),
            ("t_im", &self.t_im),
            ("rel_tol", &self.rel_tol),
            ("abs_tol", &self.abs_tol),
            ("max_terms", &self.max_terms),
            ("quad_tol", &self.quad_tol),
            ("seed", &self.seed),
        ]
    }

    /// File values first, then flags on top.
    fn config(&self) -> Result<SuiteConfig> {
        let mut map = match &self.config {
            Some(path) => read_config_file(path)?,
            None => ConfigMap::new(),
        };
        let point_flag = self.x.is_some() || self.theta.is_some() || self.z_re.is_some() || self.z_im.is_some();
        if point_flag {
            for k in ["x", "theta", "z_re", "z_im"] {
                map.remove(k);
            }
        }
        for (key, value) in self.overrides() {
            if let Some(v) = value {
                map.insert(key.to_string(), v.clone());
            }
        }
        SuiteConfig::from_map(&map)
    }
}

fn exit_for(e: &Error) -> u8 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

#[derive(Serialize)]
struct EvalRow {
    n: i64,
    theta: f64,
    re: f64,
    im: f64,
    terms: usize,
}

fn evaluate(kind: Kind, n: i64, p: &SamplePoint, cfg: &SuiteConfig) -> Result<EvalRow> {
    let (b, q) = (real(cfg.beta), cfg.base());
    let (value, terms) = match kind {
        Kind::Classical => (classical_cn(n, &p.point, b, q)?, n.max(0) as usize + 1),
        Kind::Bilateral => {
            let v = bilateral_cn(n, &p.point, &UltraParams::new(b, real(cfg.gamma), q), &cfg.policy)?;
            (v.value, v.truncation_terms)
        }
    };
    Ok(EvalRow { n, theta: p.point.z().arg(), re: value.re, im: value.im, terms })
}

fn write_csv(rows: &[EvalRow]) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(io::stdout().lock());
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()
}

fn write_json<T: Serialize>(value: &T) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)
}

fn print_report(report: &VerificationReport) -> ExitCode {
    for e in &report.errors {
        eprintln!("error: {e}");
    }
    for s in &report.skipped {
        eprintln!("skipped {}: {}", s.identity_name, s.reason);
    }
    print!("{}", report.to_json());
    ExitCode::from(if report.overall_passed { 0 } else { 1 })
}

fn run(cli: Cli) -> std::result::Result<ExitCode, (u8, String)> {
    let fail = |e: Error| (exit_for(&e), e.to_string());
    let io_fail = |e: io::Error| (2u8, e.to_string());
    let cfg = cli.common.config().map_err(fail)?;
    match cli.command {
        Command::Eval { kind } => {
            let n = cfg.n.ok_or((2, "eval needs --n".to_string()))?;
            let rows = cfg.points.iter().map(|p| evaluate(kind.into(), n, p, &cfg)).collect::<Result<Vec<_>>>().map_err(fail)?;
            match cli.common.format.unwrap_or(Format::Json) {
                Format::Json => write_json(&rows).map_err(io_fail)?,
                Format::Csv => write_csv(&rows).map_err(io_fail)?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Identity { list: true, .. } => {
            for name in identity_names() {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Identity { name, .. } => {
            let name = name.ok_or((2, "identity needs --name (or --list)".to_string()))?;
            let report = run_identity(&name, &cfg).map_err(fail)?;
            if !report.errors.is_empty() {
                print_report(&report);
                return Ok(ExitCode::from(3));
            }
            if report.entries.is_empty() {
                print_report(&report);
                let pole = report.skipped.iter().any(|s| s.pole);
                return Ok(ExitCode::from(if pole { 3 } else { 2 }));
            }
            Ok(print_report(&report))
        }
        Command::Suite => {
            if cli.common.format == Some(Format::Csv) {
                return Err((2, "suite writes JSON only".to_string()));
            }
            Ok(print_report(&run_suite(&cfg)))
        }
        Command::Table { kind, n_min, n_max, grid } => {
            if n_min > n_max {
                return Err((2, format!("empty n range {n_min}..{n_max}")));
            }
            let points: Vec<SamplePoint> = match grid {
                Some(0) => return Err((2, "--grid must be positive".to_string())),
                Some(g) => theta_grid(g).into_iter().map(SamplePoint::theta).collect(),
                None => cfg.points.clone(),
            };
            let mut rows = Vec::new();
            for n in n_min..=n_max {
                for p in &points {
                    rows.push(evaluate(kind.into(), n, p, &cfg).map_err(fail)?);
                }
            }
            match cli.common.format.unwrap_or(Format::Csv) {
                Format::Csv => write_csv(&rows).map_err(io_fail)?,
                Format::Json => write_json(&rows).map_err(io_fail)?,
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
