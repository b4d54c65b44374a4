//! Command-line front end: run verification suites, print operator blocks,
//! and evaluate fixed-point classes.
//!
//! Exit codes: 0 success / all suites passed, 1 verification failure,
//! 2 usage or parse error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fockgeom::fock::FixedPoint;
use fockgeom::geom::{
    build_block, c_tnv_heisenberg, euler_tangent, gamma, k_euler, BlockMatrix, GeometryContext,
    Half, OpAtom, TruncationWindow,
};
use fockgeom::poly::format_rational;
use fockgeom::verify::Suite;

#[derive(Parser)]
#[command(name = "fockgeom", version, about = "Exact fixed-point verification of colored Clifford/Heisenberg actions and the boson-fermion correspondence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites over a truncation window.
    Verify {
        /// Suite to run.
        #[arg(value_enum)]
        suite: SuiteArg,
        #[command(flatten)]
        cfg: WindowArgs,
    },
    /// Print the block matrix of one operator from a source block.
    Matrix {
        /// Operator, e.g. "Psi[1](2)", "PsiStar[1](0)", "P[1](-1)".
        #[arg(long)]
        op: String,
        /// Source block as "charges;energy", e.g. "0,1;3".
        #[arg(long)]
        source: String,
        #[command(flatten)]
        cfg: WindowArgs,
    },
    /// Print an equivariant class restricted to fixed points.
    Class {
        #[arg(value_enum)]
        kind: ClassKind,
        /// First fixed point, e.g. "0:(2,1)|1:()".
        #[arg(long = "I")]
        point_i: String,
        /// Second fixed point (k-euler, ctnv-heis, gamma).
        #[arg(long = "J")]
        point_j: Option<String>,
        /// Color for gamma (1-based).
        #[arg(long)]
        l: Option<usize>,
        /// Tangent half (tangent only).
        #[arg(long, value_enum, default_value_t = HalfArg::Full)]
        half: HalfArg,
        #[command(flatten)]
        cfg: WindowArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Clifford,
    Heisenberg,
    Correspondence,
    Bfc,
    Integrality,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Clifford => Suite::Clifford,
            SuiteArg::Heisenberg => Suite::Heisenberg,
            SuiteArg::Correspondence => Suite::Correspondence,
            SuiteArg::Bfc => Suite::Bfc,
            SuiteArg::Integrality => Suite::Integrality,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassKind {
    Tangent,
    KEuler,
    CtnvHeis,
    Gamma,
}

#[derive(Clone, Copy, ValueEnum)]
enum HalfArg {
    Minus,
    Plus,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct WindowArgs {
    /// Rank r (number of colors).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    rank: u32,
    /// Maximum energy of the window.
    #[arg(long, default_value_t = 4)]
    max_energy: u32,
    /// Lower charge bound, one value or comma-separated per color.
    #[arg(long, default_value = "-2", allow_hyphen_values = true)]
    charge_lo: String,
    /// Upper charge bound, one value or comma-separated per color.
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    charge_hi: String,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_charge_bound(bound: &str, rank: usize) -> Result<Vec<i64>, String> {
    let parts: Vec<&str> = bound.split(',').collect();
    let values: Result<Vec<i64>, _> = parts.iter().map(|p| p.trim().parse::<i64>()).collect();
    let values = values.map_err(|_| format!("invalid charge bound '{bound}'"))?;
    match values.len() {
        1 => Ok(vec![values[0]; rank]),
        n if n == rank => Ok(values),
        n => Err(format!(
            "charge bound '{bound}' has {n} entries but rank is {rank}"
        )),
    }
}

fn build_context(cfg: &WindowArgs) -> Result<GeometryContext, String> {
    let rank = cfg.rank as usize;
    let lo = parse_charge_bound(&cfg.charge_lo, rank)?;
    let hi = parse_charge_bound(&cfg.charge_hi, rank)?;
    if lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return Err("charge-lo exceeds charge-hi".to_string());
    }
    Ok(GeometryContext::new(
        rank,
        TruncationWindow::new(cfg.max_energy, lo, hi),
    ))
}

/// Parses "Psi[l](n)", "PsiStar[l](n)" or "P[l](n)" with 1-based colors.
fn parse_op(s: &str, rank: usize) -> Result<OpAtom, String> {
    let open = s
        .find('[')
        .ok_or_else(|| format!("expected '[' in operator '{s}'"))?;
    let name = &s[..open];
    let close = s[open..]
        .find(']')
        .map(|i| i + open)
        .ok_or_else(|| format!("expected ']' at position {} in '{s}'", s.len()))?;
    let color: usize = s[open + 1..close]
        .parse()
        .map_err(|_| format!("invalid color at position {} in '{s}'", open + 1))?;
    if color < 1 || color > rank {
        return Err(format!("color {color} out of range 1..={rank}"));
    }
    let rest = &s[close + 1..];
    if !rest.starts_with('(') || !rest.ends_with(')') || rest.len() < 3 {
        return Err(format!(
            "expected '(n)' at position {} in '{s}'",
            close + 1
        ));
    }
    let n: i64 = rest[1..rest.len() - 1]
        .parse()
        .map_err(|_| format!("invalid degree at position {} in '{s}'", close + 2))?;
    let color = color - 1;
    match name {
        "Psi" => Ok(OpAtom::Psi { color, n }),
        "PsiStar" => Ok(OpAtom::PsiStar { color, n }),
        "P" => Ok(OpAtom::P { color, n }),
        other => Err(format!(
            "unknown operator '{other}' at position 0 in '{s}' (expected Psi, PsiStar or P)"
        )),
    }
}

/// Parses "charges;energy", e.g. "0,1;3".
fn parse_source(s: &str, rank: usize) -> Result<(Vec<i64>, i64), String> {
    let (charges_str, energy_str) = s
        .split_once(';')
        .ok_or_else(|| format!("expected ';' in source '{s}'"))?;
    let charges: Result<Vec<i64>, _> = charges_str
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect();
    let charges = charges.map_err(|_| format!("invalid charges in source '{s}'"))?;
    if charges.len() != rank {
        return Err(format!(
            "source has {} charges but rank is {rank}",
            charges.len()
        ));
    }
    let energy: i64 = energy_str
        .trim()
        .parse()
        .map_err(|_| format!("invalid energy at position {} in '{s}'", charges_str.len() + 1))?;
    Ok((charges, energy))
}

fn parse_point(s: &str, rank: usize) -> Result<FixedPoint, String> {
    let p: FixedPoint = s.parse().map_err(|e| format!("bad fixed point '{s}': {e}"))?;
    if p.rank() != rank {
        return Err(format!(
            "fixed point '{s}' has rank {} but rank is {rank}",
            p.rank()
        ));
    }
    Ok(p)
}

fn print_matrix(block: &BlockMatrix, format: Format) {
    match format {
        Format::Json => println!("{}", block.to_json()),
        Format::Text => {
            if block.target().is_empty() {
                println!("empty block (no target states)");
                return;
            }
            println!(
                "block {}x{}",
                block.target().len(),
                block.source().len()
            );
            print!("source:");
            for p in block.source() {
                print!(" {p}");
            }
            println!();
            print!("target:");
            for p in block.target() {
                print!(" {p}");
            }
            println!();
            for row in 0..block.target().len() {
                let cells: Vec<String> = (0..block.source().len())
                    .map(|col| format_rational(&block.get(row, col)))
                    .collect();
                println!("[{}]", cells.join(" "));
            }
        }
    }
}

fn run_verify(suite: SuiteArg, cfg: &WindowArgs) -> ExitCode {
    let ctx = match build_context(cfg) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };
    let reports = Suite::from(suite).run(&ctx);
    let all_passed = reports.iter().all(|r| r.passed());
    match cfg.format {
        Format::Json => {
            let v = json!({
                "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                "passed": all_passed,
            });
            println!("{v}");
        }
        Format::Text => {
            for r in &reports {
                print!("{r}");
            }
            println!("{}", if all_passed { "all suites passed" } else { "verification failed" });
        }
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run_matrix(op: &str, source: &str, cfg: &WindowArgs) -> ExitCode {
    let ctx = match build_context(cfg) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };
    let atom = match parse_op(op, ctx.rank()) {
        Ok(a) => a,
        Err(e) => return usage_error(&e),
    };
    let (charges, energy) = match parse_source(source, ctx.rank()) {
        Ok(v) => v,
        Err(e) => return usage_error(&e),
    };
    let (_, t_energy) = atom.target_of(&charges, energy);
    match build_block(&ctx, atom, &charges, energy) {
        Ok(block) => {
            if t_energy < 0 {
                println!("note: target energy {t_energy} is negative; the block is empty");
            }
            print_matrix(&block, cfg.format);
            ExitCode::SUCCESS
        }
        Err(e) => usage_error(&e.to_string()),
    }
}

fn run_class(
    kind: ClassKind,
    point_i: &str,
    point_j: Option<&str>,
    l: Option<usize>,
    half: HalfArg,
    cfg: &WindowArgs,
) -> ExitCode {
    let ctx = match build_context(cfg) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };
    let p_i = match parse_point(point_i, ctx.rank()) {
        Ok(p) => p,
        Err(e) => return usage_error(&e),
    };
    let need_j = |point_j: Option<&str>| -> Result<FixedPoint, String> {
        let s = point_j.ok_or("this class needs --J")?;
        parse_point(s, ctx.rank())
    };
    let class = match kind {
        ClassKind::Tangent => {
            let half = match half {
                HalfArg::Minus => Half::Minus,
                HalfArg::Plus => Half::Plus,
                HalfArg::Full => Half::Full,
            };
            euler_tangent(&ctx, &p_i, half)
        }
        ClassKind::KEuler => match need_j(point_j) {
            Ok(p_j) => k_euler(&ctx, &p_i, &p_j),
            Err(e) => return usage_error(&e),
        },
        ClassKind::CtnvHeis => match need_j(point_j) {
            Ok(p_j) => match c_tnv_heisenberg(&ctx, &p_i, &p_j) {
                Ok(c) => c,
                Err(e) => return usage_error(&e.to_string()),
            },
            Err(e) => return usage_error(&e),
        },
        ClassKind::Gamma => {
            let color = match l {
                Some(c) if c >= 1 && c <= ctx.rank() => c - 1,
                Some(c) => return usage_error(&format!("color {c} out of range 1..={}", ctx.rank())),
                None => return usage_error("gamma needs --l"),
            };
            match need_j(point_j) {
                Ok(p_j) => gamma(&ctx, color, &p_i, &p_j),
                Err(e) => return usage_error(&e),
            }
        }
    };
    let expanded = class.expand();
    match cfg.format {
        Format::Json => println!("{}", expanded.to_json()),
        Format::Text => println!("{expanded}"),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Verify { suite, cfg } => run_verify(*suite, cfg),
        Command::Matrix { op, source, cfg } => run_matrix(op, source, cfg),
        Command::Class {
            kind,
            point_i,
            point_j,
            l,
            half,
            cfg,
        } => run_class(*kind, point_i, point_j.as_deref(), *l, *half, cfg),
    }
}
