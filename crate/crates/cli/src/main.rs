//! `mixvol`: mixed volumes, strict monotonicity verdicts and sparse system audits.
//!
//! Exit codes: 0 success, 1 negative verdict (strict inequality, failed audit), 2 input
//! error, 3 internal cross-check failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use mixvol_core::criteria::{
    best_deficit_bound, fully_mixed_simplex_witness, essential_b_direction, strict_monotonicity_equal,
    strict_monotonicity_general, MonotonicityVerdict, Witness,
};
use mixvol_core::io::{collection_to_json, read_polytopes, read_system};
use mixvol_core::lattice::PrimitiveVector;
use mixvol_core::mixed::{mixed_volume, pure_mixed_subdivision, Method};
use mixvol_core::polytope::Polytope;
use mixvol_core::rational::{fmt_rat, Int};
use mixvol_core::system::{analyze_system, SystemReport};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "mixvol", version, about = "Exact mixed volumes, monotonicity criteria and sparse system audits")]
struct Cli {
    /// Seed for the random liftings used by the subdivision method.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Print nothing; only the exit code reports the outcome.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized and Euclidean mixed volume of a collection file.
    Mv {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        method: String,
        /// Write the pure mixed subdivision used by the subdivision method as JSON.
        #[arg(long, value_name = "PATH")]
        dump_subdivision: Option<PathBuf>,
        /// Write the collection (vertices only) back out as JSON.
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
    },
    /// Decide whether V(P₁,…,Pₙ) < V(Q₁,…,Qₙ), with a witness.
    Mono {
        /// Collection of the inner polytopes P₁,…,Pₙ.
        inner: PathBuf,
        /// Collection of the outer polytopes Q₁,…,Qₙ.
        outer: Option<PathBuf>,
        /// Compare against Qᵢ = Q for every i (a polytope or one-member collection file).
        #[arg(long, value_name = "Q", conflicts_with = "outer")]
        equal: Option<PathBuf>,
        /// Search deficit bounds for the facet with this primitive outer normal, e.g. "(0,1)".
        #[arg(long, value_name = "V", allow_hyphen_values = true)]
        deficit: Option<String>,
        /// Also compute both mixed volumes directly.
        #[arg(long)]
        compare: bool,
        /// When strict, attach a fully mixed Cayley simplex certificate.
        #[arg(long)]
        segments: bool,
    },
    /// Audit a polynomial system (text grammar or matrix JSON).
    System {
        file: PathBuf,
        /// Write the parsed system in the matrix JSON format.
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
    },
}

struct Output {
    json: Value,
    table: String,
    negative: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_vector(s: &str) -> Result<PrimitiveVector> {
    let inner = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let coords: Vec<i64> = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| anyhow!("bad coordinate {t:?} in {s:?}")))
        .collect::<Result<_>>()?;
    Ok(PrimitiveVector::from_i64(&coords)?)
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(v)? + "\n").with_context(|| format!("cannot write {}", path.display()))
}

fn cmd_mv(file: &Path, method: &str, dump: Option<&Path>, export: Option<&Path>, seed: u64) -> Result<Output> {
    let ps = read_polytopes(&read(file)?)?;
    if let Some(path) = export {
        write_json(path, &collection_to_json(&ps))?;
    }
    let method: Method = method.parse()?;
    let report = mixed_volume(&ps, method, seed)?;
    if let Some(path) = dump {
        let sub = pure_mixed_subdivision(&ps, seed)?;
        write_json(path, &sub.to_json())?;
    }
    let mut json = report.to_json();
    json["method"] = json!(method.to_string());
    let mut table = format!(
        "{:<16}{}\n{:<16}{}\n",
        "normalized",
        fmt_rat(&report.normalized),
        "euclidean",
        fmt_rat(&report.value)
    );
    for r in &report.runs {
        table.push_str(&format!("{:<16}{}\n", r.method.to_string(), fmt_rat(&r.normalized)));
    }
    for m in &report.skipped {
        table.push_str(&format!("{:<16}skipped (input is not lattice)\n", m.to_string()));
    }
    if report.runs.len() > 1 {
        table.push_str(&format!("{:<16}{}\n", "agree", report.agree()));
    }
    Ok(Output {
        json,
        table,
        negative: false,
    })
}

fn verdict_table(v: &MonotonicityVerdict) -> String {
    let mut t = format!("{:<16}{}\n", "strict", v.strict);
    match &v.witness {
        Witness::None => {}
        Witness::Direction { u, touching, .. } => {
            let u: Vec<String> = u.iter().map(fmt_rat).collect();
            let t1: Vec<usize> = touching.iter().map(|i| i + 1).collect();
            t.push_str(&format!("{:<16}direction ({})\n{:<16}{:?}\n", "witness", u.join(","), "touching", t1));
        }
        Witness::Face { vertices, dim, touching, .. } => {
            let vs: Vec<String> = vertices
                .iter()
                .map(|p| format!("({})", p.iter().map(fmt_rat).collect::<Vec<_>>().join(",")))
                .collect();
            let t1: Vec<usize> = touching.iter().map(|i| i + 1).collect();
            t.push_str(&format!("{:<16}{dim}-face {}\n{:<16}{:?}\n", "witness", vs.join(" "), "touched by", t1));
        }
        Witness::Segments(w) => {
            t.push_str(&format!("{:<16}fully mixed simplex of dimension {}\n", "witness", w.dim));
        }
    }
    if let (Some(l), Some(r)) = (&v.lhs, &v.rhs) {
        t.push_str(&format!("{:<16}{}\n{:<16}{}\n", "lhs n!V", fmt_rat(l), "rhs n!V", fmt_rat(r)));
    }
    t
}

fn single_polytope(path: &Path) -> Result<Polytope> {
    let mut ps = read_polytopes(&read(path)?)?;
    if ps.len() != 1 {
        bail!("{} must hold a single polytope", path.display());
    }
    Ok(ps.remove(0))
}

fn cmd_mono(
    inner: &Path,
    outer: Option<&Path>,
    equal: Option<&Path>,
    deficit: Option<&str>,
    compare: bool,
    segments: bool,
) -> Result<Output> {
    let ps = read_polytopes(&read(inner)?)?;
    let (qs, q_equal): (Vec<Polytope>, Option<Polytope>) = match (outer, equal) {
        (Some(o), None) => {
            let qs = read_polytopes(&read(o)?)?;
            let first = qs[0].sorted_vertices();
            let eq = qs.iter().all(|q| q.sorted_vertices() == first).then(|| qs[0].clone());
            (qs, eq)
        }
        (None, Some(e)) => {
            let q = single_polytope(e)?;
            (vec![q.clone(); ps.len()], Some(q))
        }
        _ => bail!("give an outer collection or --equal Q"),
    };
    let mut verdict = match (&q_equal, outer) {
        (Some(q), None) => strict_monotonicity_equal(&ps, q)?,
        _ => strict_monotonicity_general(&ps, &qs)?,
    };
    if compare {
        verdict = verdict.with_volumes(&ps, &qs)?;
    }
    let mut json = verdict.to_json();
    let mut table = verdict_table(&verdict);
    if segments && verdict.strict {
        let direction = essential_b_direction(&ps, &qs)?;
        if let Witness::Direction { u, .. } = &direction.witness {
            let w = fully_mixed_simplex_witness(&ps, &qs, u)?;
            json["cayley_witness"] = w.to_json();
            table.push_str(&format!("{:<16}dimension {}, {} vertices\n", "cayley simplex", w.dim, w.simplex.len()));
        }
    }
    if let Some(d) = deficit {
        let q = q_equal.ok_or_else(|| anyhow!("--deficit needs all outer polytopes equal"))?;
        let v = parse_vector(d)?;
        let best = best_deficit_bound(&ps, &q, &v)?;
        json["deficit"] = best.as_ref().map_or(Value::Null, |b| b.to_json());
        match &best {
            Some(b) => {
                let order: Vec<usize> = b.order.iter().map(|i| i + 1).collect();
                table.push_str(&format!(
                    "{:<16}{} (order {:?}, distances {:?})\n{:<16}{}\n",
                    "deficit bound",
                    b.bound,
                    order,
                    b.distances.iter().map(Int::to_string).collect::<Vec<_>>(),
                    "actual deficit",
                    b.deficit
                ));
            }
            None => table.push_str(&format!("{:<16}no ordering satisfies the hypotheses\n", "deficit bound")),
        }
    }
    Ok(Output {
        json,
        table,
        negative: verdict.strict,
    })
}

fn cmd_system(file: &Path, export: Option<&Path>, seed: u64) -> Result<Output> {
    let s = read_system(&read(file)?)?;
    if let Some(path) = export {
        write_json(path, &s.to_json())?;
    }
    let report: SystemReport = analyze_system(&s, seed)?;
    Ok(Output {
        json: report.to_json(),
        table: report.to_table(),
        negative: report.ber.as_ref().is_some_and(|b| !b.pass),
    })
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<mixvol_core::Error>() {
        Some(err) if err.is_internal() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Mv {
            file,
            method,
            dump_subdivision,
            export,
        } => cmd_mv(file, method, dump_subdivision.as_deref(), export.as_deref(), cli.seed),
        Command::Mono {
            inner,
            outer,
            equal,
            deficit,
            compare,
            segments,
        } => cmd_mono(inner, outer.as_deref(), equal.as_deref(), deficit.as_deref(), *compare, *segments),
        Command::System { file, export } => cmd_system(file, export.as_deref(), cli.seed),
    };
    match result {
        Ok(out) => {
            if !cli.quiet {
                let text = match cli.format {
                    Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
                    Format::Table => out.table,
                };
                // A closed pipe (e.g. `| head`) is not an error worth reporting.
                let _ = std::io::stdout().lock().write_all(text.as_bytes());
            }
            ExitCode::from(u8::from(out.negative))
        }
        Err(e) => {
            if !cli.quiet {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(exit_code_for(&e))
        }
    }
}
