use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use blochgeo::coding::{
    bracket_spread, classical_redundancy_constant, quantum_maximin_constant, w_profile,
};
use blochgeo::curvature::{
    constant_curvature, husimi_curvature_closed, monge_distance, radial_distance, scalar_curvature,
};
use blochgeo::goldens::{self, GoldenConfig, GoldenRow, CRITERIA};
use blochgeo::metriczoo::{metric_by_id, RadialMetric};
use blochgeo::numerics::linspace;
use blochgeo::priors::{kl_divergence, noninformativity_compare, prior_by_id, MeasurementScheme};
use blochgeo::table::{format_sig, Cell, Format, OutputTable, SIGNIFICANT_DIGITS};
use blochgeo::Error;

const EXIT_GOLDEN: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_MATH: u8 = 3;

/// Radii at which the redundancy bracket is checked for equalization.
const EQUALIZER_GRID: (f64, f64, usize) = (0.01, 0.99, 99);

#[derive(Parser)]
#[command(
    name = "blochgeo",
    version,
    about = "Information geometry of the qubit Bloch ball"
)]
struct Cli {
    /// Relative tolerance applied to every integral.
    #[arg(long, global = true, env = "BLOCHGEO_TOL")]
    tol: Option<f64>,
    /// Gauss–Legendre nodes per panel.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Initial panel count.
    #[arg(long, global = true)]
    panels: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Write the table here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Radii {
    /// `a:b:n`, n equally spaced radii from a to b.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<Grid>,
    /// A single radius.
    #[arg(long)]
    at: Option<f64>,
}

impl Radii {
    fn values(&self) -> Vec<f64> {
        match (&self.grid, self.at) {
            (Some(g), _) => g.0.clone(),
            (None, Some(r)) => vec![r],
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Metric components A(r), B(r) and the implied generator f(t).
    Metric {
        #[arg(long)]
        id: String,
        /// Index for escort-based metrics.
        #[arg(long)]
        q: Option<f64>,
        #[command(flatten)]
        radii: Radii,
    },
    /// Relative entropy of two priors, or the noninformativity report.
    Kl {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long, value_parser = ["octahedron", "dodecahedron", "icosahedron"])]
        scheme: Option<String>,
        /// Likelihood exponent of the scheme.
        #[arg(long, default_value_t = 1.0, requires = "scheme")]
        m: f64,
    },
    /// Constant term c of the redundancy 1.5·log N + c.
    #[command(group = clap::ArgGroup::new("which").required(true))]
    Redundancy {
        #[arg(long, group = "which")]
        prior: Option<String>,
        /// Classical constant for the Fisher–Husimi volume.
        #[arg(long, group = "which")]
        classical: bool,
    },
    /// Scalar curvature K(r).
    Curvature {
        #[arg(long)]
        id: String,
        #[arg(long)]
        q: Option<f64>,
        #[command(flatten)]
        radii: Radii,
    },
    /// Geodesic distance from the fully mixed state along a radius.
    Distance {
        /// A metric id, or `monge` for the linear comparator.
        #[arg(long)]
        id: String,
        #[arg(long)]
        q: Option<f64>,
        #[command(flatten)]
        radii: Radii,
    },
    /// Runs the acceptance table.
    Goldens {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=CRITERIA as i64))]
        criterion: Option<u8>,
    },
}

#[derive(Clone)]
struct Grid(Vec<f64>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(format!("expected a:b:n, got `{s}`"));
    };
    let a: f64 = a.parse().map_err(|_| format!("bad start `{a}`"))?;
    let b: f64 = b.parse().map_err(|_| format!("bad end `{b}`"))?;
    let n: usize = n.parse().map_err(|_| format!("bad count `{n}`"))?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(format!("empty or non-finite grid `{s}`"));
    }
    Ok(Grid(if n == 1 { vec![a] } else { linspace(a, b, n) }))
}

enum Failure {
    Usage(String),
    Math(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownId(_) => Failure::Usage(e.to_string()),
            e => Failure::Math(e),
        }
    }
}

fn config(cli: &Cli) -> Result<GoldenConfig, Failure> {
    let mut cfg = GoldenConfig::default();
    if let Some(t) = cli.tol {
        cfg = cfg.with_tol(t);
    }
    cfg = cfg.with_rule(cli.order, cli.panels);
    cfg.spec
        .validate()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(cfg)
}

fn metric(id: &str, q: Option<f64>) -> Result<RadialMetric, Failure> {
    if matches!(id, "escort" | "fisher-escort" | "hyb-escort") && q.is_none() {
        return Err(Failure::Usage(format!("metric `{id}` needs --q")));
    }
    Ok(metric_by_id(id, q)?)
}

fn cmd_metric(id: &str, q: Option<f64>, radii: &[f64]) -> Result<OutputTable, Failure> {
    let m = metric(id, q)?;
    let mut t = OutputTable::new(["r", "A", "B", "t", "f"]);
    for &r in radii {
        let (tt, f) = m.implied_f(r);
        t.push(vec![
            r.into(),
            m.a(r).into(),
            m.b(r).into(),
            tt.into(),
            f.into(),
        ]);
    }
    Ok(t)
}

fn cmd_kl(
    cfg: &GoldenConfig,
    p: &str,
    q: &str,
    scheme: Option<&str>,
    m: f64,
) -> Result<OutputTable, Failure> {
    let pp = prior_by_id(p, &cfg.spec)?;
    let qq = prior_by_id(q, &cfg.spec)?;
    let Some(kind) = scheme else {
        let mut t = OutputTable::new(["p", "q", "kl"]);
        t.push(vec![
            p.into(),
            q.into(),
            kl_divergence(&pp, &qq, &cfg.ball)?.into(),
        ]);
        return Ok(t);
    };
    let s = MeasurementScheme::parse(kind, m)?;
    let rep = noninformativity_compare(&pp, &qq, &s, &cfg.ball)?;
    let mut t = OutputTable::new([
        "p",
        "q",
        "scheme",
        "m",
        "kl_p_q",
        "kl_post_p_q",
        "kl_q_p",
        "kl_post_q_p",
        "verdict",
    ]);
    t.push(vec![
        p.into(),
        q.into(),
        kind.into(),
        m.into(),
        rep.kl_p_q.into(),
        rep.kl_post_p_q.into(),
        rep.kl_q_p.into(),
        rep.kl_post_q_p.into(),
        rep.verdict.to_string().into(),
    ]);
    Ok(t)
}

fn formula(c: f64) -> String {
    let sign = if c < 0.0 { '-' } else { '+' };
    format!(
        "1.5*log(N) {sign} {}",
        format_sig(c.abs(), SIGNIFICANT_DIGITS)
    )
}

/// Classical constant for the Fisher–Husimi volume, or the quantum maximin
/// constant of a symmetric prior together with the spread of its bracket.
/// A spread near zero marks an equalizer, whose maximin is also minimax.
fn cmd_redundancy(cfg: &GoldenConfig, prior: Option<&str>) -> Result<OutputTable, Failure> {
    let mut t = OutputTable::new(["source", "c", "formula", "bracket_spread"]);
    let (source, c, spread) = match prior {
        None => {
            let v = prior_by_id("hus", &cfg.spec)?.normalizer;
            ("classical", classical_redundancy_constant(v), f64::NAN)
        }
        Some(id) => {
            let w = w_profile(&prior_by_id(id, &cfg.spec)?, &cfg.spec)?;
            let (a, b, n) = EQUALIZER_GRID;
            (
                id,
                quantum_maximin_constant(&w, &cfg.spec)?,
                bracket_spread(&w, &linspace(a, b, n)),
            )
        }
    };
    t.push(vec![
        source.into(),
        c.into(),
        formula(c).into(),
        spread.into(),
    ]);
    Ok(t)
}

fn cmd_curvature(id: &str, q: Option<f64>, radii: &[f64]) -> Result<OutputTable, Failure> {
    let m = metric(id, q)?;
    let closed = id == "fisher-hus";
    let constant = if closed {
        None
    } else {
        constant_curvature(&m).ok()
    };
    let mut t = OutputTable::new(["r", "K", "method", "note"]);
    for &r in radii {
        let k = if closed {
            husimi_curvature_closed(r)?
        } else {
            scalar_curvature(&m, r)?
        };
        let mut note = Vec::new();
        if r == 0.0 && k.abs() < 1e-8 {
            note.push("flat at the fully mixed state".to_string());
        }
        if let Some(c) = constant {
            note.push(format!("constant curvature {}", format_sig(c, 8)));
        }
        t.push(vec![
            r.into(),
            k.into(),
            (if closed { "closed_form" } else { "numeric" }).into(),
            note.join("; ").into(),
        ]);
    }
    Ok(t)
}

fn cmd_distance(
    cfg: &GoldenConfig,
    id: &str,
    q: Option<f64>,
    radii: &[f64],
) -> Result<OutputTable, Failure> {
    let mut t = OutputTable::new(["r", "d"]);
    if id == "monge" {
        for &r in radii {
            t.push(vec![r.into(), monge_distance(r).into()]);
        }
        return Ok(t);
    }
    let m = metric(id, q)?;
    for &r in radii {
        t.push(vec![r.into(), radial_distance(&m, r, &cfg.spec)?.into()]);
    }
    Ok(t)
}

fn golden_table(rows: &[GoldenRow]) -> OutputTable {
    let mut t = OutputTable::new([
        "criterion",
        "label",
        "value",
        "target",
        "tolerance",
        "comparison",
        "pass",
        "gating",
        "note",
    ]);
    for r in rows {
        let cmp = serde_json::to_value(r.comparison)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        t.push(vec![
            Cell::Num(r.criterion as f64),
            r.label.clone().into(),
            r.value.into(),
            r.target.into(),
            r.tolerance.into(),
            cmp.into(),
            r.pass.into(),
            r.gating.into(),
            r.note.clone().into(),
        ]);
    }
    t
}

fn emit(cli: &Cli, table: &OutputTable) -> Result<(), Failure> {
    let format = match cli.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    let io_err = |e: io::Error| Failure::Io(e.to_string());
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
            table.write(format, &mut w)?;
            w.flush().map_err(io_err)
        }
        None => {
            let mut w = io::stdout().lock();
            table.write(format, &mut w)?;
            w.flush().map_err(io_err)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let cfg = config(cli)?;
    let table = match &cli.command {
        Command::Metric { id, q, radii } => cmd_metric(id, *q, &radii.values())?,
        Command::Kl { p, q, scheme, m } => cmd_kl(&cfg, p, q, scheme.as_deref(), *m)?,
        Command::Redundancy { prior, .. } => cmd_redundancy(&cfg, prior.as_deref())?,
        Command::Curvature { id, q, radii } => cmd_curvature(id, *q, &radii.values())?,
        Command::Distance { id, q, radii } => cmd_distance(&cfg, id, *q, &radii.values())?,
        Command::Goldens { criterion } => {
            let rows = match criterion {
                Some(n) => goldens::criterion(*n, &cfg),
                None => goldens::run_all(&cfg),
            };
            emit(cli, &golden_table(&rows))?;
            let failing: Vec<&GoldenRow> = rows.iter().filter(|r| r.gating && !r.pass).collect();
            if failing.is_empty() {
                return Ok(0);
            }
            eprintln!("{} gating row(s) failed:", failing.len());
            for r in failing {
                eprintln!(
                    "  [{}] {}: value {} target {} ({})",
                    r.criterion, r.label, r.value, r.target, r.note
                );
            }
            return Ok(EXIT_GOLDEN);
        }
    };
    emit(cli, &table)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Math(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_MATH)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_MATH)
        }
    }
}
