//! Command-line entry point for the partite toolkit.
//!
//! Exit codes: 0 = success / property holds; 1 = property violated (the
//! witness is printed as JSON); 2 = input or precondition error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use partite::constructions::{full_suite, ConstructionId, ConstructionSpec};
use partite::family::ForbiddenFamily;
use partite::graph::HostGraph;
use partite::sampler;
use partite::search::{SearchMode, SearchProblem};
use partite::thresholds::{closed_form, paper_table, render_table, ThresholdId};
use partite::{check_family_free, Certificate, Error, PartiteGraph, Verdict, DEFAULT_ENUM_CAP};

#[derive(Parser)]
#[command(name = "partite", version, about = "Weighted H-partite graph toolkit")]
struct Cli {
    /// Worker pool size (defaults to the number of logical cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Suppress human-readable text; JSON output only.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConstructionArgs {
    /// Construction id (star_leaf, leila, missing_edge, two_colour, parity,
    /// refined_dead_end, pendant_triangle, intersecting_palette,
    /// hypercube_layers).
    #[arg(long)]
    id: String,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    p3: Option<f64>,
    /// Extra host edges to delete for missing_edge, e.g. `2-3,4-5`.
    #[arg(long)]
    matching: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Report every partite-invariant violation in a graph file.
    Validate {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Print the density profile of a valid graph.
    Density {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Check a graph for forbidden-family-free transversals.
    Check {
        #[arg(long)]
        graph: PathBuf,
        /// trees:T | hamilton | oddcycles | clique:T | path:L | cycle:L |
        /// factor:K3x2 | list:file.json
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: u128,
    },
    /// Build a construction and emit its graph JSON.
    Construct {
        #[command(flatten)]
        construction: ConstructionArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a construction's density and family claims by enumeration.
    VerifyConstruction {
        #[command(flatten)]
        construction: VerifyArgs,
    },
    /// Print a closed-form threshold value.
    Thresholds {
        #[arg(long)]
        id: String,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Reproduce the connected-transversal threshold table.
    ReportTable,
    /// Search for the extremal density over combinatorial patterns.
    Search {
        /// Builtin host (`builtin:K4`, `builtin:C5`, ...) or a JSON file
        /// with {"n": ..., "edges": [[u,v], ...]}.
        #[arg(long)]
        host: String,
        #[arg(long)]
        family: String,
        /// Per-vertex part-size caps, e.g. `2,2,2`; default is each host
        /// degree.
        #[arg(long)]
        caps: Option<String>,
        /// `exhaustive` or `stochastic`.
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exhaustive: pattern-space refusal threshold. Stochastic: hill
        /// climbing steps per restart.
        #[arg(long)]
        budget: Option<u64>,
        /// Stochastic restarts.
        #[arg(long, default_value_t = 1000)]
        restarts: u64,
        /// Multi-start count of the inner weight optimizer.
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of the family-containment probability.
    Sample {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact family-containment probability by enumeration.
    Exact {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: u128,
    },
    /// Chi-square independence check of induced subgraphs on two disjoint
    /// host-vertex sets.
    Depcheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Clone)]
struct VerifyArgs {
    /// Construction id, or use --all for the full batch.
    #[arg(long, conflicts_with = "all")]
    id: Option<String>,
    /// Run the whole verification suite.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    p3: Option<f64>,
    #[arg(long)]
    matching: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().is_err() {
            eprintln!("warning: thread pool already initialized; --jobs ignored");
        }
    }
    let cmdline: Vec<String> = std::env::args().skip(1).collect();
    if !cli.quiet {
        println!(
            "# partite {} | seed-bearing commands are reproducible | cmd: {}",
            env!("CARGO_PKG_VERSION"),
            cmdline.join(" ")
        );
    }
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn load_graph(path: &PathBuf, require_valid: bool) -> Result<PartiteGraph, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::param(format!("cannot read {}: {e}", path.display())))?;
    // Accept either a bare graph document or a search result that embeds
    // one under the `graph` key.
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::param(format!("malformed JSON in {}: {e}", path.display())))?;
    let doc = match value.get("graph") {
        Some(inner) if value.get("parts").is_none() => inner.to_string(),
        _ => text,
    };
    partite::json::from_json(&doc, require_valid)
}

fn parse_matching(text: &Option<String>) -> Result<Vec<(usize, usize)>, Error> {
    let Some(text) = text else {
        return Ok(Vec::new());
    };
    text.split(',')
        .map(|pair| {
            let (u, v) = pair
                .split_once('-')
                .ok_or_else(|| Error::param(format!("bad matching edge `{pair}`, expected u-v")))?;
            let u = u.trim().parse().map_err(|_| Error::param(format!("bad vertex in `{pair}`")))?;
            let v = v.trim().parse().map_err(|_| Error::param(format!("bad vertex in `{pair}`")))?;
            Ok((u, v))
        })
        .collect()
}

fn build_spec(
    id: &str,
    r: Option<usize>,
    t: Option<usize>,
    d: Option<usize>,
    alpha: Option<f64>,
    p1: Option<f64>,
    p2: Option<f64>,
    p3: Option<f64>,
    matching: &Option<String>,
) -> Result<ConstructionSpec, Error> {
    let mut spec = ConstructionSpec::new(ConstructionId::parse(id)?);
    spec.r = r;
    spec.t = t;
    spec.d = d;
    spec.alpha = alpha;
    spec.matching = parse_matching(matching)?;
    match (p1, p2, p3) {
        (None, None, None) => {}
        (Some(a), Some(b), Some(c)) => spec.p = Some((a, b, c)),
        _ => return Err(Error::param("give all of --p1 --p2 --p3 or none")),
    }
    Ok(spec)
}

fn parse_host(text: &str) -> Result<HostGraph, Error> {
    if let Some(name) = text.strip_prefix("builtin:") {
        return HostGraph::builtin(name);
    }
    let data = std::fs::read_to_string(text)
        .map_err(|e| Error::param(format!("cannot read host file {text}: {e}")))?;
    let spec: partite::graph::GraphSpec = serde_json::from_str(&data)
        .map_err(|e| Error::param(format!("bad host JSON in {text}: {e}")))?;
    HostGraph::new(spec.n, &spec.edges)
}

fn certificate_json(g: &PartiteGraph, cert: &Certificate) -> serde_json::Value {
    let witness = cert.witness.as_ref().map(|t| {
        let map: serde_json::Map<String, serde_json::Value> = t
            .0
            .iter()
            .enumerate()
            .map(|(x, &i)| {
                (x.to_string(), serde_json::Value::String(g.part(x).ids[i as usize].clone()))
            })
            .collect();
        serde_json::Value::Object(map)
    });
    let values: serde_json::Map<String, serde_json::Value> = cert
        .density
        .values
        .iter()
        .map(|(&(x, y), &v)| (format!("{x}-{y}"), json!(v)))
        .collect();
    json!({
        "verdict": match cert.verdict { Verdict::FamilyFree => "family-free", Verdict::Violated => "violated" },
        "family": cert.family.describe(),
        "witness": witness,
        "density": { "minimum": cert.density.minimum, "values": values },
    })
}

fn sig15(x: f64) -> String {
    format!("{x:.14e}")
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Validate { graph } => {
            let g = load_graph(graph, false)?;
            let report = g.validate();
            if cli.quiet {
                let violations: Vec<String> =
                    report.violations.iter().map(|v| v.to_string()).collect();
                println!("{}", json!({"valid": report.is_valid(), "violations": violations}));
            } else {
                println!("{report}");
            }
            Ok(if report.is_valid() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Density { graph } => {
            let g = load_graph(graph, false)?;
            let profile = g.density_profile()?;
            if cli.quiet {
                let values: serde_json::Map<String, serde_json::Value> = profile
                    .values
                    .iter()
                    .map(|(&(x, y), &v)| (format!("{x}-{y}"), json!(v)))
                    .collect();
                println!("{}", json!({"minimum": profile.minimum, "values": values}));
            } else {
                for (&(x, y), &v) in &profile.values {
                    println!("alpha[{x},{y}] = {}", sig15(v));
                }
                println!("minimum = {}", sig15(profile.minimum));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { graph, family, cap } => {
            let g = load_graph(graph, false)?;
            let family = ForbiddenFamily::parse(family)?;
            let cert = check_family_free(&g, &family, *cap)?;
            println!("{}", certificate_json(&g, &cert));
            Ok(if cert.is_family_free() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Construct { construction, out } => {
            let spec = build_spec(
                &construction.id,
                construction.r,
                construction.t,
                construction.d,
                construction.alpha,
                construction.p1,
                construction.p2,
                construction.p3,
                &construction.matching,
            )?;
            let g = spec.build()?;
            let text = partite::json::to_json(&g);
            match out {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| Error::param(format!("cannot write {}: {e}", path.display())))?;
                    if !cli.quiet {
                        println!(
                            "wrote {} (claimed density {})",
                            path.display(),
                            sig15(spec.claimed_density()?)
                        );
                    }
                }
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyConstruction { construction } => {
            let specs = if construction.all {
                full_suite()
            } else {
                let id = construction
                    .id
                    .as_deref()
                    .ok_or_else(|| Error::param("give --id <name> or --all"))?;
                vec![build_spec(
                    id,
                    construction.r,
                    construction.t,
                    construction.d,
                    construction.alpha,
                    construction.p1,
                    construction.p2,
                    construction.p3,
                    &construction.matching,
                )?]
            };
            let mut all_pass = true;
            for spec in &specs {
                let outcome = spec.verify(DEFAULT_ENUM_CAP)?;
                all_pass &= outcome.pass();
                if cli.quiet {
                    println!(
                        "{}",
                        json!({
                            "construction": outcome.construction,
                            "params": describe_params(spec),
                            "pass": outcome.pass(),
                            "claimed": outcome.claimed_density,
                            "measured": outcome.measured_density,
                            "failure": outcome.first_failure(),
                        })
                    );
                } else {
                    print!("[{}] {}", describe_params(spec), outcome);
                }
            }
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Thresholds { id, r } => {
            let id = ThresholdId::parse(id, *r)?;
            let value = closed_form(id)?;
            println!("{}", sig15(value));
            Ok(ExitCode::SUCCESS)
        }
        Command::ReportTable => {
            let rows = paper_table()?;
            print!("{}", render_table(&rows));
            Ok(ExitCode::SUCCESS)
        }
        Command::Search { host, family, caps, mode, seed, budget, restarts, starts, out } => {
            let host = parse_host(host)?;
            let family = ForbiddenFamily::parse(family)?;
            let mut problem = SearchProblem::new(host, family).with_seed(*seed).with_starts(*starts);
            if let Some(caps) = caps {
                let caps: Result<Vec<u32>, Error> = caps
                    .split(',')
                    .map(|c| {
                        c.trim().parse().map_err(|_| Error::param(format!("bad cap `{c}`")))
                    })
                    .collect();
                problem = problem.with_caps(caps?);
            }
            problem = match mode.as_str() {
                "exhaustive" => {
                    if let Some(b) = budget {
                        problem.pattern_budget = *b as f64;
                    }
                    problem.with_mode(SearchMode::Exhaustive)
                }
                "stochastic" => problem.with_mode(SearchMode::Stochastic {
                    restarts: *restarts,
                    budget: budget.unwrap_or(50),
                }),
                other => return Err(Error::param(format!("unknown mode `{other}`"))),
            };
            let result = partite::search::search(&problem)?;
            let graph = partite::search::pattern_to_graph(
                &problem.host,
                &result.best_pattern,
                &result.best_weights,
            );
            if !cli.quiet {
                for note in &result.notes {
                    println!("note: {note}");
                }
                println!("best_density = {}", sig15(result.best_density));
                println!(
                    "patterns_examined = {} | family_free = {}",
                    result.patterns_examined, result.patterns_family_free
                );
            }
            let graph_value: serde_json::Value =
                serde_json::from_str(&partite::json::to_json(&graph))
                    .expect("graph JSON round-trips");
            let doc = json!({
                "seed": seed,
                "best_density": result.best_density,
                "pattern": { "sizes": result.best_pattern.sizes, "bits": result.best_pattern.bits },
                "weights": result.best_weights,
                "patterns_examined": result.patterns_examined,
                "patterns_family_free": result.patterns_family_free,
                "certificate": certificate_json(&graph, &result.certificate),
                "graph": graph_value,
            });
            let text = format!("{doc:#}\n");
            match out {
                Some(path) => std::fs::write(path, &text)
                    .map_err(|e| Error::param(format!("cannot write {}: {e}", path.display())))?,
                None => {
                    if cli.quiet {
                        print!("{text}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample { graph, family, n, seed } => {
            let g = load_graph(graph, true)?;
            let family = ForbiddenFamily::parse(family)?;
            let report = sampler::estimate_property(&g, &family, *n, *seed)?;
            if cli.quiet {
                println!(
                    "{}",
                    json!({
                        "estimate": report.estimate,
                        "half_width": report.half_width,
                        "n": report.n,
                        "seed": report.seed,
                    })
                );
            } else {
                println!("{report}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Exact { graph, family, cap } => {
            let g = load_graph(graph, true)?;
            let family = ForbiddenFamily::parse(family)?;
            let p = sampler::exact_property_probability(&g, &family, *cap)?;
            println!("{}", sig15(p));
            Ok(ExitCode::SUCCESS)
        }
        Command::Depcheck { graph, a, b, n, seed } => {
            let g = load_graph(graph, true)?;
            let parse_set = |text: &str| -> Result<Vec<usize>, Error> {
                text.split(',')
                    .map(|v| {
                        v.trim().parse().map_err(|_| Error::param(format!("bad vertex `{v}`")))
                    })
                    .collect()
            };
            let report = sampler::one_dependence_check(&g, &parse_set(a)?, &parse_set(b)?, *n, *seed)?;
            let verdict = match report.verdict {
                sampler::DependenceVerdict::NotRejected => "independence not rejected at 1%",
                sampler::DependenceVerdict::Rejected => "independence REJECTED at 1%",
                sampler::DependenceVerdict::Inconclusive => "inconclusive (too few cells)",
            };
            if cli.quiet {
                println!(
                    "{}",
                    json!({
                        "statistic": report.statistic,
                        "df": report.degrees_of_freedom,
                        "p_value": report.p_value,
                        "verdict": verdict,
                        "cells": report.cells,
                        "pooled_cells": report.pooled_cells,
                    })
                );
            } else {
                println!(
                    "chi2 = {} with df = {}, p = {} -> {verdict}",
                    sig15(report.statistic),
                    report.degrees_of_freedom,
                    sig15(report.p_value)
                );
            }
            Ok(match report.verdict {
                sampler::DependenceVerdict::NotRejected => ExitCode::SUCCESS,
                sampler::DependenceVerdict::Rejected => ExitCode::from(1),
                sampler::DependenceVerdict::Inconclusive => ExitCode::from(2),
            })
        }
    }
}

fn describe_params(spec: &ConstructionSpec) -> String {
    let mut parts = vec![spec.id.name().to_string()];
    if let Some(r) = spec.r {
        parts.push(format!("r={r}"));
    }
    if let Some(t) = spec.t {
        parts.push(format!("t={t}"));
    }
    if let Some(d) = spec.d {
        parts.push(format!("d={d}"));
    }
    if let Some(a) = spec.alpha {
        parts.push(format!("alpha={a}"));
    }
    if let Some((p1, p2, p3)) = spec.p {
        parts.push(format!("p=({p1},{p2},{p3})"));
    }
    if !spec.matching.is_empty() {
        parts.push(format!("matching={:?}", spec.matching));
    }
    parts.join(" ")
}
