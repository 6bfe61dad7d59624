//! `jumplab` command line: exact Green's functions, height jumps,
//! alignment verdicts, order sweeps and oracle cross-checks over JSON
//! problem files.
//!
//! Exit codes: 0 success, 2 input error, 3 disconnected network,
//! 4 oracle mismatch, 5 enumeration bound exceeded.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use jumplab::graph::{VertexId, DEFAULT_ORACLE_ENUM_BOUND};
use jumplab::green::{green, CombinatorialDivisor, GreenSolver};
use jumplab::jump::{height_jump, sweep, SectionDivisor};
use jumplab::labels::{AlignmentVerdict, Label, OrderVector};
use jumplab::Rational;

use jumplab_cli::problem::{compile, CliError, CliResult, CompiledProblem, ProblemFile};

#[derive(Parser)]
#[command(
    name = "jumplab",
    version,
    about = "Exact height jumps on labelled graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Green's function of the network pulled back along the orders
    Green {
        file: PathBuf,
        /// Divisor name for the first argument
        #[arg(long = "X")]
        x: String,
        /// Divisor name for the second argument
        #[arg(long = "Y")]
        y: String,
        /// Inline orders `name=value,...` overriding the file
        #[arg(long)]
        orders: Option<String>,
    },
    /// Height jump with the full per-term breakdown
    Jump {
        file: PathBuf,
        /// Divisor name for D (default: "D", or the only divisor)
        #[arg(long = "D")]
        d: Option<String>,
        /// Divisor name for E (default: "E", else D)
        #[arg(long = "E")]
        e: Option<String>,
    },
    /// Alignment verdict with witness
    Align { file: PathBuf },
    /// Jump values over the order grid {0..max}^r, written as CSV
    Sweep {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max: u64,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long = "D")]
        d: Option<String>,
        #[arg(long = "E")]
        e: Option<String>,
    },
    /// Compare Green's values against the spanning-tree oracle on all pairs
    Oracle { file: PathBuf },
    /// Print the biconnected decomposition
    Blocks { file: PathBuf },
}

fn main() {
    // die quietly on closed pipes, like any other line-oriented tool
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Err(err) = run(cli.command) {
        if !err.message.is_empty() {
            eprintln!("error: {}", err.message);
        }
        std::process::exit(err.code);
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Green { file, x, y, orders } => cmd_green(&file, &x, &y, orders.as_deref()),
        Command::Jump { file, d, e } => cmd_jump(&file, d.as_deref(), e.as_deref()),
        Command::Align { file } => cmd_align(&file),
        Command::Sweep {
            file,
            max,
            csv,
            d,
            e,
        } => cmd_sweep(&file, max, &csv, d.as_deref(), e.as_deref()),
        Command::Oracle { file } => cmd_oracle(&file),
        Command::Blocks { file } => cmd_blocks(&file),
    }
}

fn load(path: &std::path::Path) -> CliResult<CompiledProblem> {
    compile(&ProblemFile::load(path)?)
}

fn enum_bound(default: usize) -> CliResult<usize> {
    match std::env::var("JUMPLAB_ENUM_BOUND") {
        Err(_) => Ok(default),
        Ok(text) => text
            .parse()
            .map_err(|_| CliError::input(format!("bad JUMPLAB_ENUM_BOUND value {text:?}"))),
    }
}

/// Picks the D/E divisors: explicit flag, then the conventional names,
/// then the only declared divisor.
fn resolve_divisor_pair(
    p: &CompiledProblem,
    d: Option<&str>,
    e: Option<&str>,
) -> CliResult<(SectionDivisor, SectionDivisor)> {
    let d_name = match d {
        Some(name) => name.to_string(),
        None if p.divisors.contains_key("D") => "D".to_string(),
        None if p.divisors.len() == 1 => p.divisors.keys().next().unwrap().clone(),
        None => {
            return Err(CliError::input(
                "cannot choose a divisor: pass --D or declare exactly one",
            ))
        }
    };
    let e_name = match e {
        Some(name) => name.to_string(),
        None if p.divisors.contains_key("E") => "E".to_string(),
        None => d_name.clone(),
    };
    Ok((p.section_divisor(&d_name)?, p.section_divisor(&e_name)?))
}

fn combinatorial(p: &CompiledProblem, name: &str) -> CliResult<CombinatorialDivisor> {
    let supports = p
        .divisors
        .get(name)
        .ok_or_else(|| CliError::input(format!("divisor {name:?} is not declared")))?;
    CombinatorialDivisor::from_integer_weights(p.graph().vertex_count(), supports)
        .map_err(CliError::from_lib)
}

fn cmd_green(path: &std::path::Path, x: &str, y: &str, orders: Option<&str>) -> CliResult<()> {
    let p = load(path)?;
    let m: OrderVector = match orders {
        Some(text) => p.parse_inline_orders(text)?,
        None => p.require_orders()?.clone(),
    };
    let xd = combinatorial(&p, x)?;
    let yd = combinatorial(&p, y)?;
    let mu = p.lg.pullback_orders(&m).map_err(CliError::from_lib)?;
    let eval = green(p.graph(), &mu, &xd, &yd).map_err(CliError::from_lib)?;
    if !eval.degree_zero_inputs {
        eprintln!("note: divisor of nonzero total degree; no geometric reading");
    }
    println!("{}", eval.value);
    Ok(())
}

fn format_label(label: &Label) -> String {
    let parts: Vec<String> = label.exponents().iter().map(u64::to_string).collect();
    format!("({})", parts.join(", "))
}

fn cmd_jump(path: &std::path::Path, d: Option<&str>, e: Option<&str>) -> CliResult<()> {
    let p = load(path)?;
    let m = p.require_orders()?.clone();
    let (dd, ee) = resolve_divisor_pair(&p, d, e)?;
    let result = height_jump(&p.lg, &dd, &ee, &m).map_err(CliError::from_lib)?;
    println!("j = {}", result.value);
    println!("gr(full) = {}", result.per_term.full);
    for (name, value) in p.lg.basis().names().iter().zip(&result.per_term.single) {
        println!("gr({name}) = {value}");
    }
    match result.alignment {
        AlignmentVerdict::Aligned => println!("alignment: aligned"),
        AlignmentVerdict::NotAligned { .. } => println!("alignment: not aligned"),
    }
    Ok(())
}

fn cmd_align(path: &std::path::Path) -> CliResult<()> {
    let p = load(path)?;
    match p.lg.is_aligned().map_err(CliError::from_lib)? {
        AlignmentVerdict::Aligned => println!("aligned"),
        AlignmentVerdict::NotAligned { cycle, edges } => {
            let cycle_names: Vec<&str> = cycle.iter().map(|&e| p.edge_name(e)).collect();
            let (e1, e2) = edges;
            println!(
                "not aligned: cycle [{}], edges {}, {}, labels {}, {}",
                cycle_names.join(", "),
                p.edge_name(e1),
                p.edge_name(e2),
                format_label(p.lg.label(e1).map_err(CliError::from_lib)?),
                format_label(p.lg.label(e2).map_err(CliError::from_lib)?),
            );
        }
    }
    Ok(())
}

fn cmd_sweep(
    path: &std::path::Path,
    max: u64,
    csv: &std::path::Path,
    d: Option<&str>,
    e: Option<&str>,
) -> CliResult<()> {
    let p = load(path)?;
    let (dd, ee) = resolve_divisor_pair(&p, d, e)?;
    let report = sweep(&p.lg, &dd, &ee, max).map_err(CliError::from_lib)?;

    let mut out = String::new();
    out.push_str(&p.lg.basis().names().join(","));
    out.push_str(",num,den\n");
    for row in &report.rows {
        for o in &row.orders {
            out.push_str(&o.to_string());
            out.push(',');
        }
        out.push_str(&format!("{},{}\n", row.value.numer(), row.value.denom()));
    }
    std::fs::write(csv, out)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", csv.display())))?;

    let interior = report
        .rows
        .iter()
        .filter(|r| r.orders.iter().all(|&o| o >= 1))
        .count();
    let fmt = |v: &Option<Rational>| v.as_ref().map_or("-".to_string(), |r| r.to_string());
    println!(
        "rows: {}, interior: {}, min: {}, max: {}, all nonnegative: {}, all zero: {}, homogeneity checks: {} {}",
        report.rows.len(),
        interior,
        fmt(&report.interior_min),
        fmt(&report.interior_max),
        report.all_nonnegative,
        report.all_zero,
        report.homogeneity_checks,
        if report.homogeneity_ok { "ok" } else { "VIOLATED" },
    );
    Ok(())
}

fn cmd_oracle(path: &std::path::Path) -> CliResult<()> {
    let p = load(path)?;
    let m = p.require_orders()?.clone();
    let mu = p.lg.pullback_orders(&m).map_err(CliError::from_lib)?;
    if !mu.is_proper() {
        return Err(CliError::input(
            "the oracle needs strictly positive resistances; \
             some label pulls back to zero under these orders",
        ));
    }
    let bound = enum_bound(DEFAULT_ORACLE_ENUM_BOUND)?;
    let oracle = p
        .graph()
        .resistance_oracle_all_pairs(mu.map(), bound)
        .map_err(CliError::from_lib)?;
    let solver = GreenSolver::new(p.graph(), &mu).map_err(CliError::from_lib)?;
    let n = p.graph().vertex_count();
    for u in 0..n {
        for v in (u + 1)..n {
            let x = CombinatorialDivisor::point_difference(n, VertexId(u), VertexId(v))
                .map_err(CliError::from_lib)?;
            let green_value = solver.evaluate(&x, &x).value;
            let oracle_value = oracle[(u, v)].clone();
            if green_value != oracle_value {
                println!(
                    "MISMATCH {} -- {}: green {}, oracle {}",
                    p.vertex_name(VertexId(u)),
                    p.vertex_name(VertexId(v)),
                    green_value,
                    oracle_value
                );
                return Err(CliError {
                    code: 4,
                    message: String::new(),
                });
            }
            println!(
                "{} -- {}: {}",
                p.vertex_name(VertexId(u)),
                p.vertex_name(VertexId(v)),
                green_value
            );
        }
    }
    println!("MATCH");
    Ok(())
}

fn cmd_blocks(path: &std::path::Path) -> CliResult<()> {
    let p = load(path)?;
    let decomposition = p.graph().biconnected_blocks().map_err(CliError::from_lib)?;
    for (i, block) in decomposition.blocks.iter().enumerate() {
        let edges: Vec<&str> = block.edges.iter().map(|&e| p.edge_name(e)).collect();
        let vertices: Vec<&str> = block.vertices.iter().map(|&v| p.vertex_name(v)).collect();
        println!(
            "block {i}: edges [{}], vertices [{}]",
            edges.join(", "),
            vertices.join(", ")
        );
    }
    let cuts: Vec<&str> = decomposition
        .cut_vertices
        .iter()
        .map(|&v| p.vertex_name(v))
        .collect();
    println!("cut vertices: [{}]", cuts.join(", "));
    Ok(())
}
