//! Batch command-line front end over the library.
//!
//! Exit codes: 0 embeddable/classical (or plain success), 3
//! non-embeddable/nonclassical, 4 inconclusive, 1 error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use gptnc::app;
use gptnc::embed::{self, Verdict};
use gptnc::error::{Error, Result};
use gptnc::gpt::{self, catalog::CatalogId};
use gptnc::io;
use gptnc::quasiprob;
use gptnc::quotient;
use gptnc::scalar::{Rat, Scalar};

#[derive(Parser)]
#[command(
    name = "gptnc",
    about = "Simplex embeddings and noncontextual models for GPTs",
    version
)]
struct Cli {
    /// Exact rational arithmetic (the default; kept for explicitness).
    #[arg(long, global = true)]
    exact: bool,

    /// Float tolerance; switches ingestion and checks to the float
    /// backend. Overrides the GPTNC_TOL environment variable.
    #[arg(long, global = true, conflicts_with = "exact")]
    tol: Option<f64>,

    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Parallel verdict jobs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Output format for catalog tables: json or csv.
    #[arg(long, global = true, default_value = "json")]
    format: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a catalog GPT (rebit, gbit, classical, polygon, restricted_square).
    Catalog {
        name: String,
        /// Dimension for `classical`.
        #[arg(long)]
        d: Option<usize>,
        /// Vertex count for `polygon`.
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated dual-vertex indices for restricted polygons.
        #[arg(long)]
        restrict: Option<String>,
        /// Comma-separated effect indices for `restricted_square`.
        #[arg(long)]
        effects: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report GPT validity constraints.
    Validate {
        #[arg(long)]
        gpt: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quotient an operational table into its GPT.
    Quotient {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        relations: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide simplex-embeddability; emits witness/model or certificate.
    Embed {
        #[arg(long)]
        gpt: PathBuf,
        /// Also minimize the ontic-state count greedily.
        #[arg(long)]
        min_d: bool,
        /// Write the verdict artifact to a separate file as well.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a quasiprobability representation from decomposition pairs or
    /// from an ontological model.
    Quasiprob {
        #[arg(long)]
        gpt: PathBuf,
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[arg(long)]
        from_model: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Depolarizing robustness radius of a GPT.
    Robustness {
        #[arg(long)]
        gpt: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Noise-robust classicality verdict from one or more tables.
    Verdict {
        #[arg(long, required = true)]
        table: Vec<PathBuf>,
        #[arg(long)]
        relations: Option<PathBuf>,
        /// Entrywise uncertainty radius of the table.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Rank threshold for the float factorization.
        #[arg(long)]
        rank_tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Effective float tolerance: --tol flag, then GPTNC_TOL, else exact mode.
fn float_tol(cli: &Cli) -> Option<f64> {
    if cli.exact {
        return None;
    }
    if cli.tol.is_some() {
        return cli.tol;
    }
    std::env::var("GPTNC_TOL").ok().and_then(|s| s.parse().ok())
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    emit_text(out, &text)
}

fn emit_text(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_exact_gpt(path: &Path, tol: Option<f64>) -> Result<gpt::Gpt<Rat>> {
    let v = read_json(path)?;
    match tol {
        None => io::gpt_from_json::<Rat>(&v, &Rat::from_int(0)),
        Some(t) => io::gpt_from_json::<f64>(&v, &t)?.to_exact(),
    }
}

fn catalog_params(
    d: Option<usize>,
    n: Option<usize>,
    restrict: &Option<String>,
    effects: &Option<String>,
) -> Vec<(String, String)> {
    let mut params = Vec::new();
    if let Some(d) = d {
        params.push(("d".to_string(), d.to_string()));
    }
    if let Some(n) = n {
        params.push(("n".to_string(), n.to_string()));
    }
    if let Some(r) = restrict {
        params.push(("restrict".to_string(), r.clone()));
    }
    if let Some(e) = effects {
        params.push(("effects".to_string(), e.clone()));
    }
    params
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let tol = float_tol(cli);
    match &cli.command {
        Command::Catalog {
            name,
            d,
            n,
            restrict,
            effects,
            out,
        } => {
            let id = CatalogId::parse(name, &catalog_params(*d, *n, restrict, effects))?;
            let entry = gpt::catalog::catalog::<Rat>(&id)?;
            if cli.format == "csv" {
                let theory = quotient::theory_from_gpt(&entry.gpt);
                emit_text(out, &io::theory_to_csv(&theory))?;
            } else {
                emit(out, &io::gpt_to_json(&entry.gpt))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { gpt: path, out } => {
            let report = match tol {
                None => {
                    let g = load_exact_gpt(path, None)?;
                    gpt::validate(&g, &Rat::from_int(0))
                }
                Some(t) => {
                    let g = io::gpt_from_json::<f64>(&read_json(path)?, &t)?;
                    gpt::validate(&g, &t)
                }
            };
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                .collect();
            emit(out, &json!({"valid": report.is_valid(), "checks": checks}))?;
            Ok(if report.is_valid() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Quotient {
            table,
            relations,
            out,
        } => {
            let csv_text = read_text(table)?;
            let rel_text = relations.as_ref().map(|p| read_text(p)).transpose()?;
            let value = match tol {
                None => {
                    let mut theory: quotient::OperationalTheory<Rat> =
                        io::parse_theory_csv(&csv_text)?;
                    if let Some(rel) = &rel_text {
                        theory.relations = io::parse_relations(rel)?;
                    }
                    let (g, _) = quotient::quotient_to_gpt(&theory, &Rat::from_int(0))?;
                    io::gpt_to_json(&g)
                }
                Some(t) => {
                    let mut theory: quotient::OperationalTheory<f64> =
                        io::parse_theory_csv(&csv_text)?;
                    if let Some(rel) = &rel_text {
                        theory.relations = io::parse_relations(rel)?;
                    }
                    let (g, _) = quotient::quotient_to_gpt(&theory, &t)?;
                    io::gpt_to_json(&g)
                }
            };
            emit(out, &value)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Embed {
            gpt: path,
            min_d,
            certificate,
            out,
        } => {
            let g = load_exact_gpt(path, tol)?;
            let verdict = embed::decide(&g)?;
            let lower = embed::min_d_lower_bound(&g, &Rat::from_int(0));
            let mut value = io::verdict_to_json(&verdict, lower);
            let code = match &verdict {
                Verdict::Embeddable {
                    decomposition,
                    model,
                    ..
                } => {
                    if *min_d {
                        let minimized = embed::minimize_support(decomposition);
                        let small = minimized.to_model();
                        value["min_d"] = json!(small.d);
                        value["min_d_model"] = io::model_to_json(&small);
                    }
                    value["model"] = io::model_to_json(model);
                    ExitCode::SUCCESS
                }
                Verdict::NotEmbeddable { .. } => ExitCode::from(3),
            };
            if let Some(cert_path) = certificate {
                emit(&Some(cert_path.clone()), &value)?;
            }
            emit(out, &value)?;
            Ok(code)
        }
        Command::Quasiprob {
            gpt: path,
            pairs,
            from_model,
            out,
        } => {
            let g = load_exact_gpt(path, tol)?;
            let zero = Rat::from_int(0);
            let rep = match (pairs, from_model) {
                (Some(p), None) => {
                    let pair_list = io::pairs_from_json::<Rat>(&read_json(p)?)?;
                    quasiprob::from_decomposition(&g, &pair_list, &zero)?
                }
                (None, Some(m)) => {
                    let model = io::model_from_json::<Rat>(&read_json(m)?)?;
                    quasiprob::from_model(&model, &g)
                }
                _ => {
                    return Err(Error::BadParams(
                        "pass exactly one of --pairs or --from-model".into(),
                    ))
                }
            };
            let neg = quasiprob::negativity(&rep);
            let mut value = io::quasirep_to_json(&rep);
            value["positive"] = json!(quasiprob::is_positive(&rep, &zero));
            value["negativity"] = json!({
                "states": io::scalar_to_json(&neg.states),
                "effects": io::scalar_to_json(&neg.effects),
                "total": io::scalar_to_json(&neg.total()),
            });
            emit(out, &value)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Robustness { gpt: path, out } => {
            let g = load_exact_gpt(path, tol)?;
            let r = app::robustness_radius(&g)?;
            emit(
                out,
                &json!({
                    "radius": io::scalar_to_json(&r),
                    "radius_f64": r.to_f64(),
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verdict {
            table,
            relations,
            epsilon,
            rank_tol,
            out,
        } => {
            let rel_text = relations.as_ref().map(|p| read_text(p)).transpose()?;
            let rank_tol = rank_tol.or(tol).unwrap_or(1e-9);
            let jobs = cli.jobs.max(1);
            let chunk_size = table.len().div_ceil(jobs);
            let mut results: Vec<Result<app::RobustVerdict>> = Vec::new();
            std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for chunk in table.chunks(chunk_size) {
                    let rel = rel_text.clone();
                    handles.push(scope.spawn(move || {
                        chunk
                            .iter()
                            .map(|path| {
                                let csv_text = read_text(path)?;
                                let (_, nt) = app::ingest(&csv_text, rel.as_deref(), *epsilon)?;
                                app::verdict(&nt, rank_tol)
                            })
                            .collect::<Vec<_>>()
                    }));
                }
                for h in handles {
                    results.extend(h.join().expect("verdict worker"));
                }
            });
            let mut worst = 0u8;
            let mut reports = Vec::new();
            for (result, path) in results.iter().zip(table.iter()) {
                let (label, detail, code) = match result {
                    Ok(app::RobustVerdict::Classical { margin, witness }) => (
                        "classical",
                        json!({"margin": io::scalar_to_json(margin), "d": witness.d}),
                        0u8,
                    ),
                    Ok(app::RobustVerdict::Nonclassical {
                        margin,
                        certificate,
                    }) => (
                        "nonclassical",
                        json!({
                            "margin": io::scalar_to_json(margin),
                            "farkas": io::vector_to_json(&certificate.y),
                        }),
                        3u8,
                    ),
                    Ok(app::RobustVerdict::Inconclusive { gap }) => {
                        ("inconclusive", json!({"gap": io::scalar_to_json(gap)}), 4u8)
                    }
                    Err(e) => ("error", json!({"message": e.to_string()}), 1u8),
                };
                worst = priority_max(worst, code);
                reports.push(json!({
                    "table": path.display().to_string(),
                    "verdict": label,
                    "detail": detail,
                }));
            }
            emit(out, &json!({"verdicts": reports, "epsilon": epsilon}))?;
            Ok(ExitCode::from(worst))
        }
    }
}

/// Error (1) dominates, then nonclassical (3), then inconclusive (4).
fn priority_max(a: u8, b: u8) -> u8 {
    let rank = |c: u8| match c {
        1 => 3,
        3 => 2,
        4 => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}
