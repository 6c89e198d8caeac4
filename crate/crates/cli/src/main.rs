//! `raag-lab`: batch experiments on right-angled Artin groups.
//!
//! Exit status is 0 on success, 1 on a domain or usage error, and 2 when a
//! budget cut a computation short (the partial output is still written).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use raag_core::bb::{self, format_t_word};
use raag_core::geometry::{self, DistortionRecord, DivergenceRecord, GeodesicDivergenceRecord, Rho};
use raag_core::graph::{load_graph, JoinDecomposition, SimplicialGraph};
use raag_core::search::{Status, DEFAULT_BUDGET};
use raag_core::word::{self, format_nf, NormalForm};
use raag_core::{manifold, selftest};

#[derive(Parser)]
#[command(name = "raag-lab", version, about = "Experiments on right-angled Artin groups and their Bestvina-Brady subgroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Node budget for every search and ball enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = positive)]
    budget: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct GraphArg {
    /// Graph file: `{"vertices": [...], "edges": [[u, v], ...]}`.
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct WordArg {
    #[command(flatten)]
    graph: GraphArg,

    /// Word such as `a c b^-2`.
    #[arg(long, allow_hyphen_values = true)]
    word: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph file and summarize it.
    Validate(GraphArg),
    /// Normal form of a word.
    Nf(WordArg),
    /// Geodesic length of a word.
    Len(WordArg),
    /// Exponent sum of a word.
    Phi(WordArg),
    /// Cyclic reduction `x = c · core · c⁻¹`.
    Cyclic(WordArg),
    /// Words in the generators `s t⁻¹` of the kernel.
    #[command(subcommand)]
    Rewrite(Rewrite),
    /// Exact length over the generators `s t⁻¹`.
    Tlen(WordArg),
    /// Distortion table.
    Distortion {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        rmax: u64,
    },
    /// Relative divergence rows for `r = 1..=rmax`.
    Divergence {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "1")]
        rho: Rho,
        #[arg(long, default_value_t = 2)]
        n: u64,
        #[arg(long)]
        rmax: u64,
    },
    /// Divergence of the axis of a period, for `r = 0..=rmax`.
    GeoDiv {
        #[command(flatten)]
        graph: GraphArg,
        /// Period word; defaults to the witness period of the graph.
        #[arg(long, allow_hyphen_values = true)]
        period: Option<String>,
        #[arg(long)]
        rmax: u64,
    },
    /// Witness pair for quadratic divergence.
    Witness {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 1)]
        r: u64,
    },
    /// Graph manifold and horizontal surface data for a tree.
    Manifold(GraphArg),
    /// Run the oracle-equivalence suites.
    Selftest,
}

#[derive(Subcommand)]
enum Rewrite {
    /// `a^m b^-m` along a shortest path.
    Pair {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// Any kernel element.
    General(WordArg),
    /// A kernel element of a join, through its join decomposition.
    Join {
        #[command(flatten)]
        word: WordArg,
        /// Comma-separated left side; defaults to the graph's own split.
        #[arg(long, requires = "right")]
        left: Option<String>,
        #[arg(long, requires = "left")]
        right: Option<String>,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Rendered output plus whether anything in it is incomplete.
struct Output {
    text: String,
    partial: bool,
}

impl Output {
    fn complete(text: String) -> Self {
        Output { text, partial: false }
    }
}

fn read_graph(arg: &GraphArg) -> anyhow::Result<SimplicialGraph> {
    let text = fs::read_to_string(&arg.graph).with_context(|| format!("reading {}", arg.graph.display()))?;
    Ok(load_graph(&text)?)
}

fn read_word(arg: &WordArg) -> anyhow::Result<(SimplicialGraph, NormalForm)> {
    let g = read_graph(&arg.graph)?;
    let x = word::parse_element(&g, &arg.word)?;
    Ok((g, x))
}

fn scalar(format: Format, key: &str, value: String) -> String {
    match format {
        Format::Csv => format!("{value}\n"),
        Format::Json => format!("{}\n", json!({ key: value })),
    }
}

fn number(format: Format, key: &str, value: i64) -> String {
    match format {
        Format::Csv => format!("{value}\n"),
        Format::Json => format!("{}\n", json!({ key: value })),
    }
}

fn table(format: Format, header: &str, rows: Vec<(String, Json)>) -> String {
    match format {
        Format::Csv => {
            let mut out = format!("{header}\n");
            for (csv, _) in rows {
                out.push_str(&csv);
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let records: Vec<Json> = rows.into_iter().map(|(_, j)| j).collect();
            format!("{}\n", serde_json::to_string_pretty(&records).expect("json"))
        }
    }
}

fn vertex_list(g: &SimplicialGraph, text: &str) -> anyhow::Result<Vec<usize>> {
    text.split(',')
        .map(|s| Ok(g.vertex(s.trim())?))
        .collect()
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let format = cli.format;
    let budget = cli.budget;
    let out = match &cli.command {
        Command::Validate(arg) => {
            let g = read_graph(arg)?;
            let diameter = g.diameter().ok();
            let join = g.join_decomposition();
            let names = |vs: &[usize]| vs.iter().map(|&v| g.name(v).to_string()).collect::<Vec<_>>();
            let summary = json!({
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "connected": g.is_connected(),
                "diameter": diameter,
                "tree": g.is_tree(),
                "join": join.as_ref().map(|j| json!([names(&j.left), names(&j.right)])),
            });
            Output::complete(match format {
                Format::Json => format!("{summary}\n"),
                Format::Csv => format!(
                    "vertices,edges,connected,diameter,tree,join\n{},{},{},{},{},{}\n",
                    g.vertex_count(),
                    g.edge_count(),
                    g.is_connected(),
                    diameter.map_or("inf".to_string(), |d| d.to_string()),
                    g.is_tree(),
                    join.as_ref().map_or("none".to_string(), |j| {
                        format!("{} | {}", names(&j.left).join(" "), names(&j.right).join(" "))
                    }),
                ),
            })
        }
        Command::Nf(arg) => {
            let (g, x) = read_word(arg)?;
            Output::complete(scalar(format, "normal_form", format_nf(&g, &x)))
        }
        Command::Len(arg) => {
            let (_, x) = read_word(arg)?;
            Output::complete(number(format, "length", word::geodesic_length(&x) as i64))
        }
        Command::Phi(arg) => {
            let (_, x) = read_word(arg)?;
            Output::complete(number(format, "phi", word::phi(&x)))
        }
        Command::Cyclic(arg) => {
            let (g, x) = read_word(arg)?;
            let split = word::cyclic_reduce(&g, &x);
            let (c, core) = (format_nf(&g, &split.conjugator), format_nf(&g, &split.core));
            Output::complete(match format {
                Format::Csv => format!("conjugator,core\n{c},{core}\n"),
                Format::Json => format!("{}\n", json!({ "conjugator": c, "core": core })),
            })
        }
        Command::Rewrite(rw) => {
            let (g, w) = match rw {
                Rewrite::Pair { graph, a, b, m } => {
                    let g = read_graph(graph)?;
                    let (a, b) = (g.vertex(a)?, g.vertex(b)?);
                    let w = bb::rewrite_pair(&g, a, b, *m)?;
                    (g, w)
                }
                Rewrite::General(arg) => {
                    let (g, h) = read_word(arg)?;
                    let w = bb::rewrite_general(&g, &h)?;
                    (g, w)
                }
                Rewrite::Join { word: arg, left, right } => {
                    let (g, h) = read_word(arg)?;
                    let j = match (left, right) {
                        (Some(l), Some(r)) => JoinDecomposition {
                            left: vertex_list(&g, l)?,
                            right: vertex_list(&g, r)?,
                        },
                        _ => match g.join_decomposition() {
                            Some(j) => j,
                            None => bail!("graph is not a join"),
                        },
                    };
                    let w = bb::rewrite_join(&g, &h, &j)?;
                    (g, w)
                }
            };
            let text = format_t_word(&g, &w);
            Output::complete(match format {
                Format::Csv => format!("{text}\n"),
                Format::Json => format!("{}\n", json!({ "t_word": text, "length": w.len() })),
            })
        }
        Command::Tlen(arg) => {
            let (g, h) = read_word(arg)?;
            let m = bb::t_length(&g, &h, budget)?;
            Output {
                text: match format {
                    Format::Csv => format!("value,status\n{},{}\n", m.value, m.status),
                    Format::Json => format!("{}\n", json!({ "value": m.value, "status": m.status })),
                },
                partial: m.status == Status::LowerBound,
            }
        }
        Command::Distortion { graph, rmax } => {
            let g = read_graph(graph)?;
            let t = geometry::distortion_table(&g, *rmax, budget)?;
            let partial = t.truncated || t.has_lower_bounds();
            if t.truncated {
                eprintln!(
                    "warning: ball budget exhausted after radius {}",
                    t.records.len().saturating_sub(1)
                );
            }
            let rows = t.records.iter().map(|r| (r.to_csv(&g), r.to_json(&g))).collect();
            Output {
                text: table(format, DistortionRecord::CSV_HEADER, rows),
                partial,
            }
        }
        Command::Divergence { graph, rho, n, rmax } => {
            let g = read_graph(graph)?;
            let mut rows = Vec::new();
            let mut partial = false;
            for r in 1..=*rmax {
                let rec = geometry::relative_divergence(&g, *rho, *n, r, budget)?;
                partial |= rec.status == Status::LowerBound;
                rows.push((rec.to_csv(&g), rec.to_json(&g)));
            }
            Output {
                text: table(format, DivergenceRecord::CSV_HEADER, rows),
                partial,
            }
        }
        Command::GeoDiv { graph, period, rmax } => {
            let g = read_graph(graph)?;
            let p = match period {
                Some(w) => word::parse_element(&g, w)?,
                None => geometry::witness_pair(&g, 1)?.h,
            };
            let mut rows = Vec::new();
            let mut partial = false;
            for r in 0..=*rmax {
                let rec = geometry::geodesic_divergence(&g, &p, r, budget)?;
                partial |= rec.status == Status::LowerBound;
                rows.push((rec.to_csv(&g), rec.to_json(&g)));
            }
            Output {
                text: table(format, GeodesicDivergenceRecord::CSV_HEADER, rows),
                partial,
            }
        }
        Command::Witness { graph, r } => {
            let g = read_graph(graph)?;
            let w = geometry::witness_pair(&g, *r)?;
            Output::complete(match format {
                Format::Csv => format!(
                    "x,y,h,t\n{},{},{},{}\n",
                    format_nf(&g, &w.x),
                    format_nf(&g, &w.y),
                    format_nf(&g, &w.h),
                    g.name(w.t)
                ),
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&w.to_json(&g))?),
            })
        }
        Command::Manifold(arg) => {
            let g = read_graph(arg)?;
            let md = manifold::build_manifold(&g)?;
            Output::complete(format!("{}\n", serde_json::to_string_pretty(&md.to_json(&g))?))
        }
        Command::Selftest => {
            let results = selftest::run_all();
            let failed = results.iter().filter(|r| !r.pass()).count();
            let mut text = String::new();
            for r in &results {
                let verdict = if r.pass() { "PASS" } else { "FAIL" };
                text.push_str(&format!("{verdict} {} ({} checks)\n", r.name, r.checked));
                for f in &r.failures {
                    text.push_str(&format!("    {f}\n"));
                }
            }
            if failed > 0 {
                emit(cli.output.as_deref(), &text)?;
                bail!("{failed} selftest suite(s) failed");
            }
            Output::complete(text)
        }
    };
    Ok(out)
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|out| {
        emit(cli.output.as_deref(), &out.text)?;
        Ok(out.partial)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("note: output contains lower bounds or was truncated by the budget");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
