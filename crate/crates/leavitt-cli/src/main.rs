//! Command-line front end: parse graph files, dispatch to the library, and
//! render text or JSON with a stable exit-code contract (0 success or ISO,
//! 1 NON-ISO, 2 input or scope error).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use leavitt::classify::cycle_sources;
use leavitt::{
    canonical_invariant, certificate_from_json, certificate_to_json, ck_ideal_generators,
    decide_graded_iso, enumerate_elements, lpa_descriptor, multiply, parse_element_expr,
    quotient_dimension_with_limit, render, sink_blocks, verify_certificate, Certificate, Exec,
    Graph, Move, Witness,
};

#[derive(Parser)]
#[command(
    name = "leavitt",
    version,
    about = "Leavitt inverse semigroups and graded path algebras of finite directed graphs"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a graph file and report its structure
    Validate { path: PathBuf },
    /// List the nonzero semigroup elements, windowed when the graph has a cycle
    Elements {
        path: PathBuf,
        /// Cap on |p|+|q| for graphs with a cycle
        #[arg(long, default_value_t = 6)]
        window: usize,
    },
    /// Multiply two element expressions over one graph
    Mul { path: PathBuf, expr_a: String, expr_b: String },
    /// Canonical graded invariant and matrix-algebra descriptor
    Invariant { path: PathBuf },
    /// Decide graded isomorphism of the semigroups of two graphs
    Classify {
        path_e: PathBuf,
        path_f: PathBuf,
        /// Print the witness pairing and move chain on ISO
        #[arg(long)]
        witness: bool,
        /// Enumeration window for the cardinality heuristic
        #[arg(long, default_value_t = 6)]
        window: usize,
        /// Out-of-scope fallback: compare windowed element counts (sound for
        /// NON-ISO only)
        #[arg(long)]
        cardinality: bool,
    },
    /// Dimension and block structure of the path algebra of an acyclic graph
    AlgebraDim {
        path: PathBuf,
        /// Refuse basis enumerations larger than this
        #[arg(long, default_value_t = 4096)]
        max_size: usize,
    },
    /// Check a stored certificate against two graph files
    Verify {
        certificate: PathBuf,
        path_e: PathBuf,
        path_f: PathBuf,
        #[arg(long, default_value_t = 6)]
        window: usize,
    },
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = if path.extension().is_some_and(|x| x == "json") {
        Graph::parse_json(&text)
    } else {
        Graph::parse(&text)
    };
    parsed.with_context(|| format!("parsing {}", path.display()))
}

/// Base vertex the descriptor and witness renderings are anchored at: the
/// sink of a tree, or the least-index source on the cycle.
fn anchor(g: &Graph) -> Result<usize> {
    g.require_scope()?;
    Ok(match g.unique_sink()? {
        Some(s) => s,
        None => cycle_sources(g)?[0],
    })
}

fn describe_move(m: &Move) -> String {
    match m {
        Move::GlobalShift(delta) => format!("global shift {delta:+}"),
        Move::UnitShift { index, delta } => format!("unit shift at {} by {delta:+}", index + 1),
        Move::Permute(pi) => {
            let images: Vec<String> = pi.iter().map(|&k| (k + 1).to_string()).collect();
            format!("permute ({})", images.join(","))
        }
    }
}

fn print_witness_table(g_e: &Graph, g_f: &Graph, w: &Witness, moves: &[Move]) -> Result<()> {
    println!("base vertices: {} -> {}", g_e.vertex_id(w.v0), g_f.vertex_id(w.w0));
    println!("residue shift c: {}", w.c);
    let ps = g_e.base_paths(w.v0)?;
    let qs = g_f.base_paths(w.w0)?;
    println!("pairing:");
    for (i, p) in ps.iter().enumerate() {
        let q = &qs[w.sigma[i]];
        println!(
            "  p{} ({}, length {}) -> q{} ({}, length {}), lambda {}",
            i + 1,
            g_e.vertex_id(p.source()),
            p.len(),
            w.sigma[i] + 1,
            g_f.vertex_id(q.source()),
            q.len(),
            w.lambdas[i]
        );
    }
    if moves.is_empty() {
        println!("moves: none (descriptors already equal)");
    } else {
        println!("moves:");
        for m in moves {
            println!("  {}", describe_move(m));
        }
    }
    Ok(())
}

fn histogram_json(h: &leavitt::Histogram) -> serde_json::Value {
    serde_json::to_value(h).expect("histogram serializes")
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Validate { path } => {
            let g = load_graph(&path)?;
            let report = g.validate();
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("vertices: {}", g.n_vertices());
                println!("edges: {}", g.n_edges());
                println!("connected: {}", if report.connected { "yes" } else { "no" });
                println!("max out-degree: {}", report.max_out_degree);
                if report.sinks.is_empty() {
                    println!("sinks: none");
                } else {
                    println!("sinks: {}", report.sinks.join(" "));
                }
                match &report.cycle {
                    Some(c) => println!("cycle: {} (length {})", c.edges.join(" "), c.length),
                    None => println!("cycle: none"),
                }
                println!(
                    "classifier scope: {}",
                    if report.classifier_scope { "yes" } else { "no (needs connected, out-degree <= 1)" }
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Elements { path, window } => {
            let g = load_graph(&path)?;
            let windowed = !g.is_acyclic();
            let els = enumerate_elements(&g, window);
            let rendered: Vec<String> = els.iter().map(|a| render(&g, a)).collect();
            if cli.json {
                let out = json!({
                    "window": if windowed { Some(window) } else { None },
                    "count": rendered.len(),
                    "elements": rendered,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                if windowed {
                    println!("window: {window}");
                }
                println!("count: {}", rendered.len());
                for r in &rendered {
                    println!("{r}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Mul { path, expr_a, expr_b } => {
            let g = load_graph(&path)?;
            let a = parse_element_expr(&g, &expr_a).with_context(|| format!("parsing `{expr_a}`"))?;
            let b = parse_element_expr(&g, &expr_b).with_context(|| format!("parsing `{expr_b}`"))?;
            let ab = multiply(&g, &a, &b)?;
            if cli.json {
                let out = json!({
                    "product": render(&g, &ab),
                    "grade": ab.grade().map(|x| x.0),
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("{}", render(&g, &ab));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariant { path } => {
            let g = load_graph(&path)?;
            let v0 = anchor(&g)?;
            let inv = canonical_invariant(&g)?;
            let d = lpa_descriptor(&g, v0)?;
            if cli.json {
                let out = json!({
                    "step": inv.step,
                    "histogram": histogram_json(&inv.canon),
                    "descriptor": {
                        "n": d.n,
                        "step": d.step,
                        "shifts": d.shifts,
                        "rendered": d.render(),
                    },
                    "base": g.vertex_id(v0),
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("step: {}", inv.step);
                println!("histogram: {}", histogram_json(&inv.canon));
                println!("descriptor at {}: {}", g.vertex_id(v0), d.render());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { path_e, path_f, witness, window, cardinality } => {
            let g_e = load_graph(&path_e)?;
            let g_f = load_graph(&path_f)?;
            let in_scope = g_e.require_scope().and(g_f.require_scope());
            if let Err(scope_err) = in_scope {
                if !cardinality {
                    return Err(anyhow::Error::new(scope_err)
                        .context("decision needs both graphs in scope (try --cardinality)"));
                }
                let count_e = enumerate_elements(&g_e, window).len();
                let count_f = enumerate_elements(&g_f, window).len();
                let verdict = if count_e != count_f { "NON-ISO" } else { "INCONCLUSIVE" };
                if cli.json {
                    let out = json!({
                        "mode": "cardinality",
                        "window": window,
                        "countE": count_e,
                        "countF": count_f,
                        "result": verdict,
                    });
                    println!("{}", serde_json::to_string_pretty(&out)?);
                } else {
                    println!("cardinality heuristic (window {window}): {count_e} vs {count_f}");
                    println!("{verdict}");
                    if verdict == "INCONCLUSIVE" {
                        println!("equal counts prove nothing; the decision needs out-degree <= 1");
                    }
                }
                return Ok(ExitCode::from(if verdict == "NON-ISO" { 1 } else { 2 }));
            }
            let cert = decide_graded_iso(&g_e, &g_f)?;
            if cli.json {
                println!("{}", certificate_to_json(&g_e, &g_f, &cert)?);
            }
            match &cert {
                Certificate::Iso { witness: w, moves, .. } => {
                    if !cli.json {
                        println!("ISO");
                        if witness {
                            print_witness_table(&g_e, &g_f, w, moves)?;
                        }
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Certificate::NonIso { invariant_e, invariant_f } => {
                    if !cli.json {
                        println!("NON-ISO");
                        println!(
                            "invariant E: step {}, histogram {}",
                            invariant_e.step,
                            histogram_json(&invariant_e.canon)
                        );
                        println!(
                            "invariant F: step {}, histogram {}",
                            invariant_f.step,
                            histogram_json(&invariant_f.canon)
                        );
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::AlgebraDim { path, max_size } => {
            let g = load_graph(&path)?;
            if !g.is_acyclic() {
                bail!(
                    "the path algebra of a graph with a cycle is infinite-dimensional; \
                     use `invariant` for its graded matrix descriptor"
                );
            }
            let dim = quotient_dimension_with_limit(&g, max_size)?;
            let blocks = sink_blocks(&g)?;
            let generators = ck_ideal_generators(&g)?;
            let gens_json: Vec<Vec<serde_json::Value>> = generators
                .iter()
                .map(|gen| {
                    gen.terms()
                        .map(|(a, c)| json!({"element": render(&g, a), "coeff": c.to_string()}))
                        .collect()
                })
                .collect();
            if cli.json {
                let out = json!({
                    "dimension": dim,
                    "blocks": blocks
                        .iter()
                        .map(|(sink, size)| json!({"sink": sink, "size": size}))
                        .collect::<Vec<_>>(),
                    "generators": gens_json,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("dimension: {dim}");
                let rendered: Vec<String> =
                    blocks.iter().map(|(sink, size)| format!("M{size}(K) at {sink}")).collect();
                println!("blocks: {}", rendered.join(" + "));
                println!("ideal generators: {}", serde_json::to_string(&gens_json)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { certificate, path_e, path_f, window } => {
            let g_e = load_graph(&path_e)?;
            let g_f = load_graph(&path_f)?;
            let text = std::fs::read_to_string(&certificate)
                .with_context(|| format!("reading {}", certificate.display()))?;
            let cert = certificate_from_json(&g_e, &g_f, &text)
                .with_context(|| format!("parsing {}", certificate.display()))?;
            let ok = verify_certificate(&g_e, &g_f, &cert, window, Exec::Parallel)?;
            if cli.json {
                let out = json!({"verified": ok, "window": window});
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("{} (window {window})", if ok { "VERIFIED" } else { "REJECTED" });
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (e.g. `leavitt elements … | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
