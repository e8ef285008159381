//! Command-line front end: graph files, operator expressions and reports.

pub mod expr;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semigroupoid::classify::{self, ClassificationReport, Verdict};
use semigroupoid::fock::{numeric_expectation, FockBasis};
use semigroupoid::lattice::{has_star_axis_property, lattice_path};
use semigroupoid::ncpartition::{enumerate_nc, mobius_table};
use semigroupoid::{
    diagram_distinct, Algebra, Element, Error, Graph, MomentFunctional, Scalar, SemanticsMode,
};

pub use expr::{parse_element, parse_word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "semigroupoid",
    version,
    about = "Exact D_G-valued moments, cumulants and classifiers for graph algebras"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Graph file (JSON with "vertices" and "edges")
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Rewriting semantics
    #[arg(long, global = true, value_enum, default_value_t = Mode::Paper)]
    mode: Mode,
    /// Highest order computed
    #[arg(long, global = true, default_value_t = 6)]
    order: usize,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized commands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Paper,
    Vacuum,
}

impl From<Mode> for SemanticsMode {
    fn from(m: Mode) -> SemanticsMode {
        match m {
            Mode::Paper => SemanticsMode::PaperRelations,
            Mode::Vacuum => SemanticsMode::FockVacuum,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the normal form of an expression
    Reduce { expr: String },
    /// Print the conditional expectation onto the diagonal
    Expect { expr: String },
    /// Print E(a^n) for n = 1..order
    Moments { expr: String },
    /// Print k_n(a, ..., a) for n = 1..order
    Cumulants { expr: String },
    /// Check that all mixed cumulants of two families vanish up to the order
    FreeCheck {
        #[arg(long = "left", required = true)]
        left: Vec<String>,
        #[arg(long = "right")]
        right: Vec<String>,
        #[arg(long, default_value_t = 3)]
        max_word_len: usize,
    },
    /// Semicircular, even or R-diagonal test of one element
    Classify { kind: Kind, expr: String },
    /// Whether two finite paths are diagram-distinct
    Distinct { first: String, second: String },
    /// Print the generating operator of the graph
    Genop,
    /// Noncrossing partition tables
    Nc {
        #[command(subcommand)]
        what: NcCommand,
    },
    #[command(hide = true)]
    Fock {
        expr: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    #[command(hide = true)]
    Lattice { word: String },
    #[command(hide = true)]
    InversionCheck {
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Semicircular,
    Even,
    Rdiagonal,
}

#[derive(Debug, Subcommand)]
enum NcCommand {
    /// |NC(n)|
    Count { n: usize },
    /// μ(π, 1_n) for every π in NC(n)
    Mobius { n: usize },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn load_graph(path: Option<&FsPath>) -> semigroupoid::Result<Graph> {
    let path = path.ok_or_else(|| Error::Usage("this command needs --graph FILE".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    Graph::from_json(&text)
}

fn io(e: std::io::Error) -> Error {
    Error::Usage(format!("cannot write output: {e}"))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> semigroupoid::Result<i32> {
    let g = &cli.global;
    if let Command::Nc { what } = &cli.command {
        return nc(what, g.json, out);
    }
    let graph = Arc::new(load_graph(g.graph.as_deref())?);
    let alg = Algebra::new(Arc::clone(&graph), g.mode.into());
    match &cli.command {
        Command::Reduce { expr } => {
            let x = parse_element(&alg, expr)?;
            emit_value(out, g.json, "value", &x)?;
        }
        Command::Expect { expr } => {
            let x = parse_element(&alg, expr)?;
            emit_value(out, g.json, "expectation", &x.expectation())?;
        }
        Command::Moments { expr } => {
            let a = parse_element(&alg, expr)?;
            let mut power = alg.one();
            let mut rows = Vec::new();
            for n in 1..=g.order {
                power = power.mul(&a)?;
                rows.push((n, power.expectation()));
            }
            emit_series(out, g, &a, "moments", 'm', &rows)?;
        }
        Command::Cumulants { expr } => {
            let a = parse_element(&alg, expr)?;
            let mf = MomentFunctional::new(alg.clone());
            let rows = (1..=g.order)
                .map(|n| Ok((n, mf.trivial_cumulant(&a, n)?)))
                .collect::<semigroupoid::Result<Vec<_>>>()?;
            emit_series(out, g, &a, "cumulants", 'k', &rows)?;
        }
        Command::FreeCheck {
            left,
            right,
            max_word_len,
        } => {
            let left = left
                .iter()
                .map(|e| parse_element(&alg, e))
                .collect::<semigroupoid::Result<Vec<_>>>()?;
            let right = right
                .iter()
                .map(|e| parse_element(&alg, e))
                .collect::<semigroupoid::Result<Vec<_>>>()?;
            let report = classify::check_free(&alg, &left, &right, g.order, *max_word_len)?;
            return emit_report(out, g.json, &report);
        }
        Command::Classify { kind, expr } => {
            let a = parse_element(&alg, expr)?;
            let report = match kind {
                Kind::Semicircular => classify::check_semicircular(&alg, &a, g.order)?,
                Kind::Even => classify::check_even(&alg, &a, g.order)?,
                Kind::Rdiagonal => classify::check_rdiagonal(&alg, &a, g.order)?,
            };
            return emit_report(out, g.json, &report);
        }
        Command::Distinct { first, second } => {
            let distinct = diagram_distinct(&graph.parse_path(first)?, &graph.parse_path(second)?)?;
            if g.json {
                writeln!(
                    out,
                    "{}",
                    serde_json::json!({ "diagram_distinct": distinct })
                )
                .map_err(io)?;
            } else {
                writeln!(
                    out,
                    "{}",
                    if distinct {
                        "diagram-distinct"
                    } else {
                        "not diagram-distinct"
                    }
                )
                .map_err(io)?;
            }
        }
        Command::Genop => {
            emit_value(out, g.json, "value", &classify::generating_operator(&alg)?)?;
        }
        Command::Fock { expr, depth } => {
            let basis = FockBasis::new(Arc::clone(&graph), *depth)?;
            // the matrix model realizes the vacuum action only
            let x = parse_element(&alg.with_mode(SemanticsMode::FockVacuum), expr)?;
            let (e, valid) = numeric_expectation(&basis, &x)?;
            if g.json {
                let j = serde_json::json!({"basis": basis.len(), "expectation": e.to_string(), "valid": valid});
                writeln!(out, "{j}").map_err(io)?;
            } else {
                writeln!(out, "basis size: {}", basis.len()).map_err(io)?;
                writeln!(out, "expectation: {e}").map_err(io)?;
                writeln!(out, "valid: {valid}").map_err(io)?;
            }
        }
        Command::Lattice { word } => {
            let letters = parse_word(&alg, word)?;
            let path = lattice_path(&alg, &letters)?;
            writeln!(out, "{}", path.render()).map_err(io)?;
            writeln!(out, "heights: {:?}", path.heights).map_err(io)?;
            writeln!(
                out,
                "star-axis property: {}",
                has_star_axis_property(&alg, &letters)?
            )
            .map_err(io)?;
        }
        Command::InversionCheck { count } => return inversion_check(&alg, g, *count, out),
        Command::Nc { .. } => unreachable!("handled above"),
    }
    Ok(EXIT_OK)
}

fn emit_value(out: &mut dyn Write, json: bool, key: &str, x: &Element) -> semigroupoid::Result<()> {
    if json {
        writeln!(out, "{}", serde_json::json!({ key: x.to_string() })).map_err(io)
    } else {
        writeln!(out, "{x}").map_err(io)
    }
}

fn emit_series(
    out: &mut dyn Write,
    g: &Global,
    a: &Element,
    key: &str,
    prefix: char,
    rows: &[(usize, Element)],
) -> semigroupoid::Result<()> {
    if g.json {
        let entries: Vec<_> = rows
            .iter()
            .map(|(n, v)| {
                if key == "cumulants" {
                    serde_json::json!({"n": n, "pattern": null, "value": v.to_string()})
                } else {
                    serde_json::json!({"n": n, "value": v.to_string()})
                }
            })
            .collect();
        let j = serde_json::json!({
            "subject": a.to_string(),
            "mode": a.algebra().mode().as_str(),
            "n_max": g.order,
            key: entries,
        });
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&j).expect("JSON values serialize")
        )
        .map_err(io)
    } else {
        for (n, v) in rows {
            writeln!(out, "{prefix}{n} = {v}").map_err(io)?;
        }
        Ok(())
    }
}

fn emit_report(
    out: &mut dyn Write,
    json: bool,
    r: &ClassificationReport,
) -> semigroupoid::Result<i32> {
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&r.to_json()).expect("JSON values serialize")
        )
        .map_err(io)?;
    } else {
        writeln!(out, "subject: {}", r.subject).map_err(io)?;
        writeln!(out, "mode: {}", r.mode).map_err(io)?;
        writeln!(out, "order: {}", r.n_max).map_err(io)?;
        for m in &r.moments {
            writeln!(out, "m{} = {}", m.n, m.value).map_err(io)?;
        }
        for c in &r.cumulants {
            let mut label = format!("k{}", c.n);
            if let Some(p) = &c.pattern {
                label.push_str(&format!("[{p}]"));
            }
            if !c.factors.is_empty() {
                label.push_str(&format!("({})", c.factors.join(", ")));
            }
            writeln!(out, "{label} = {}", c.value).map_err(io)?;
        }
        match &r.verdict {
            Verdict::Pass => writeln!(out, "verdict: pass (up to order {})", r.n_max),
            Verdict::Fail(w) => writeln!(out, "verdict: fail ({})", w.description),
            Verdict::Indeterminate(reason) => writeln!(out, "verdict: indeterminate ({reason})"),
        }
        .map_err(io)?;
        if let Some(w) = &r.symmetric_witness {
            let value = w.value.as_ref().map(Element::to_string).unwrap_or_default();
            writeln!(
                out,
                "self-adjoint witness: k{}({}) = {value}",
                w.n.unwrap_or(0),
                w.factors.join(", ")
            )
            .map_err(io)?;
        }
    }
    Ok(if matches!(r.verdict, Verdict::Fail(_)) {
        EXIT_FAIL
    } else {
        EXIT_OK
    })
}

fn nc(what: &NcCommand, json: bool, out: &mut dyn Write) -> semigroupoid::Result<i32> {
    match what {
        NcCommand::Count { n } => {
            let count = enumerate_nc(*n)?.len();
            if json {
                writeln!(out, "{}", serde_json::json!({"n": n, "count": count})).map_err(io)?;
            } else {
                writeln!(out, "{count}").map_err(io)?;
            }
        }
        NcCommand::Mobius { n } => {
            let parts = enumerate_nc(*n)?;
            let mu = mobius_table(*n)?;
            if json {
                let rows: Vec<_> = parts
                    .iter()
                    .zip(mu.iter())
                    .map(|(p, m)| serde_json::json!({"partition": p.to_string(), "mobius": m}))
                    .collect();
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&rows).expect("JSON values serialize")
                )
                .map_err(io)?;
            } else {
                for (p, m) in parts.iter().zip(mu.iter()) {
                    writeln!(out, "{p} {m}").map_err(io)?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

/// A random element with up to three monomials and coefficients in {±1, ±1/2}.
fn random_element(alg: &Algebra, rng: &mut ChaCha8Rng) -> semigroupoid::Result<Element> {
    let paths: Vec<_> = alg
        .graph()
        .vertex_ids()
        .map(|v| alg.graph().trivial(v))
        .chain(alg.graph().finite_paths(2))
        .collect();
    let coefficients = [
        Scalar::from_int(1),
        Scalar::from_int(-1),
        Scalar::ratio(1, 2),
        Scalar::ratio(-1, 2),
    ];
    let mut x = alg.zero();
    for _ in 0..rng.gen_range(1..=3) {
        let a = &paths[rng.gen_range(0..paths.len())];
        let b = &paths[rng.gen_range(0..paths.len())];
        if a.range() != b.range() {
            continue;
        }
        if let Some(m) = alg.iso(a.clone(), b.clone())?.into_option() {
            x = x.add(
                &alg.monomial(m)
                    .scale(&coefficients[rng.gen_range(0..coefficients.len())]),
            )?;
        }
    }
    Ok(x)
}

fn inversion_check(
    alg: &Algebra,
    g: &Global,
    count: usize,
    out: &mut dyn Write,
) -> semigroupoid::Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mf = MomentFunctional::new(alg.clone());
    let mut checked = 0;
    for _ in 0..count {
        let n = rng.gen_range(1..=g.order.max(1));
        let factors = (0..n)
            .map(|_| random_element(alg, &mut rng))
            .collect::<semigroupoid::Result<Vec<_>>>()?;
        let lhs = mf.moment_from_cumulants(&factors)?;
        let rhs = mf.moment(&factors)?;
        if lhs != rhs {
            let shown: Vec<String> = factors.iter().map(Element::to_string).collect();
            writeln!(
                out,
                "mismatch at n = {n}: [{}]: {lhs} != {rhs}",
                shown.join("; ")
            )
            .map_err(io)?;
            return Ok(EXIT_FAIL);
        }
        checked += 1;
    }
    writeln!(out, "ok: {checked} tuples, seed {}", g.seed).map_err(io)?;
    Ok(EXIT_OK)
}
