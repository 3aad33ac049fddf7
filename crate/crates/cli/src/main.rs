use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use loosecycle::bounds::{self, RhoEquation};
use loosecycle::certificates::{validate_loose_cycle, validate_matching, LooseHamiltonCycle, PerfectMatching};
use loosecycle::coupling::{check_embedding, run_coupling, CouplingConfig};
use loosecycle::experiments::{
    matching_pipeline, statistical_suite, threshold_sweep, to_json, write_records_csv, ExperimentConfig, Grid,
    PipelineConfig, SuiteConfig,
};
use loosecycle::ferber::{reduce_and_solve, ReductionOutcome};
use loosecycle::format::read_hypergraph;
use loosecycle::samplers::{sample, Model, ModelParams};
use loosecycle::solvers::{count_matchings, find_loose_hamilton, find_perfect_matching, weight_profile, WeightMode};
use loosecycle::{Hypergraph, Seed};

const EXIT_SUITE_FAILED: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "loosecycle", version, about = "Random hypergraphs and loose Hamilton cycles")]
struct Cli {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Format of tabular output.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Hnm,
    Hnp,
    Oriented,
    Dout,
    MatchingUnion,
}

#[derive(Clone, Copy, ValueEnum)]
enum Task {
    LooseHam,
    Pm,
    CountPm,
    Weights,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Cher1,
    Cher2,
    Cov,
    Theta,
    Rho,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random hypergraph.
    Gen {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        rho: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an exact solver on a hypergraph file.
    Solve {
        #[arg(long, value_enum)]
        task: Task,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = u64::MAX)]
        budget: u64,
        /// Sample this many sets for `weights` instead of all of them.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the layered coupling and summarize its outcomes.
    Couple {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1)]
        rho: usize,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// Write the transcript of the first trial here.
        #[arg(long)]
        dump_transcript: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a tail bound beside its exact value.
    Bounds {
        #[arg(long, value_enum)]
        which: Which,
        /// Comma-separated `key=value` pairs, e.g. `n=100,p=0.5,eps=0.2`.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contract one edge, solve, and lift the cycle back.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = u64::MAX)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the probability of a loose Hamilton cycle across edge counts.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Grid as multiples of n ln n / r.
        #[arg(long, value_delimiter = ',', conflicts_with = "edges")]
        ratios: Option<Vec<f64>>,
        /// Grid as explicit edge counts.
        #[arg(long, value_delimiter = ',')]
        edges: Option<Vec<u64>>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        #[arg(long)]
        record_timing: bool,
        /// Per-trial records (csv) or full result (json).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the per-point summary as JSON.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Coupling, matchings in each layer, and a loose cycle in their union.
    Pipeline {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        rho: Option<usize>,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Monte Carlo suite, or check a certificate against a hypergraph.
    Verify {
        #[arg(long, default_value_t = 50_000)]
        trials: u64,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        /// Hypergraph file for certificate checking.
        #[arg(long = "in", requires = "cert")]
        input: Option<PathBuf>,
        /// Certificate JSON: a solver outcome or a bare cycle or matching.
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    emit(out, &to_json(value)?)
}

fn read_input(path: &Path) -> Result<Hypergraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(read_hypergraph(&text)?)
}

fn parse_params(s: &str) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .with_context(|| format!("expected key=value, got {part:?}"))?;
        let v: f64 = v.trim().parse().with_context(|| format!("bad number in {part:?}"))?;
        map.insert(k.trim().to_string(), v);
    }
    Ok(map)
}

fn param(map: &BTreeMap<String, f64>, key: &str, default: Option<f64>) -> Result<f64> {
    match (map.get(key), default) {
        (Some(&v), _) => Ok(v),
        (None, Some(d)) => Ok(d),
        (None, None) => bail!("missing parameter {key}"),
    }
}

fn int_param(map: &BTreeMap<String, f64>, key: &str, default: Option<f64>) -> Result<u64> {
    let v = param(map, key, default)?;
    if v < 0.0 || v.fract() != 0.0 {
        bail!("{key} must be a nonnegative integer, got {v}");
    }
    Ok(v as u64)
}

fn aligned(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:>width$}  {v}\n")).collect()
}

fn run(cli: Cli) -> Result<u8> {
    let seed = Seed::new(cli.seed);
    match cli.command {
        Command::Gen {
            model,
            n,
            r,
            m,
            p,
            d,
            rho,
            out,
        } => {
            let model = match model {
                ModelArg::Hnm => Model::Hnm {
                    m: m.context("--m is required")?,
                },
                ModelArg::Hnp => Model::Hnp {
                    p: p.context("--p is required")?,
                },
                ModelArg::Oriented => Model::Oriented {
                    p: p.context("--p is required")?,
                },
                ModelArg::Dout => Model::Dout {
                    d: d.context("--d is required")?,
                },
                ModelArg::MatchingUnion => Model::MatchingUnion { rho: rho.unwrap_or(1) },
            };
            let h = sample(&ModelParams { n, r, model }, seed)?;
            emit(out.as_deref(), &h.to_text())?;
            Ok(0)
        }
        Command::Solve {
            task,
            input,
            budget,
            samples,
            out,
        } => {
            let h = read_input(&input)?;
            let out = out.as_deref();
            let exceeded = match task {
                Task::LooseHam => {
                    let o = find_loose_hamilton(&h, budget)?;
                    emit_json(out, &o)?;
                    o.is_budget_exceeded()
                }
                Task::Pm => {
                    let o = find_perfect_matching(&h, budget)?;
                    emit_json(out, &o)?;
                    o.is_budget_exceeded()
                }
                Task::CountPm => {
                    let c = count_matchings(&h)?;
                    emit_json(out, &serde_json::json!({ "count": c }))?;
                    false
                }
                Task::Weights => {
                    let mode = match samples {
                        Some(s) => WeightMode::Sampled {
                            samples: s,
                            seed: cli.seed,
                        },
                        None => WeightMode::Exhaustive,
                    };
                    emit_json(out, &weight_profile(&h, mode)?)?;
                    false
                }
            };
            Ok(if exceeded { EXIT_BUDGET } else { 0 })
        }
        Command::Couple {
            n,
            r,
            eps,
            rho,
            trials,
            dump_transcript,
            out,
        } => {
            let config = CouplingConfig::new(n, r, eps, rho);
            #[derive(Serialize)]
            struct Row {
                trial: u64,
                success: bool,
                failure: Option<String>,
                bad_vertices: usize,
                embedding_ok: bool,
            }
            let mut rows = Vec::new();
            for t in 0..trials {
                let tr = run_coupling(&config, seed.with_stream(t))?;
                if t == 0 {
                    if let Some(path) = &dump_transcript {
                        fs::write(path, to_json(&tr)?)?;
                    }
                }
                rows.push(Row {
                    trial: t,
                    success: tr.success(),
                    failure: tr.failure.as_ref().map(|f| {
                        serde_json::to_value(f)
                            .ok()
                            .and_then(|v| v.get("event").and_then(|e| e.as_str()).map(String::from))
                            .unwrap_or_default()
                    }),
                    bad_vertices: tr.classification.bad.len(),
                    embedding_ok: check_embedding(&tr).is_ok(),
                });
            }
            let violations = rows.iter().filter(|r| !r.embedding_ok).count();
            match cli.format {
                OutputFormat::Csv => {
                    let mut s = String::from("trial,success,failure,bad_vertices,embedding_ok\n");
                    for r in &rows {
                        s += &format!(
                            "{},{},{},{},{}\n",
                            r.trial,
                            r.success,
                            r.failure.as_deref().unwrap_or(""),
                            r.bad_vertices,
                            r.embedding_ok
                        );
                    }
                    emit(out.as_deref(), &s)?;
                }
                OutputFormat::Json => {
                    let mut failures: BTreeMap<String, u64> = BTreeMap::new();
                    for r in &rows {
                        if let Some(f) = &r.failure {
                            *failures.entry(f.clone()).or_default() += 1;
                        }
                    }
                    emit_json(
                        out.as_deref(),
                        &serde_json::json!({
                            "config": config,
                            "seed": cli.seed,
                            "trials": trials,
                            "successes": rows.iter().filter(|r| r.success).count(),
                            "failures": failures,
                            "embedding_violations": violations,
                        }),
                    )?;
                }
            }
            Ok(if violations > 0 { EXIT_SUITE_FAILED } else { 0 })
        }
        Command::Bounds { which, params, out } => {
            let p = parse_params(&params)?;
            let (rows, json) = match which {
                Which::Cher1 => {
                    let rep = bounds::report_two_sided(
                        int_param(&p, "n", None)?,
                        param(&p, "p", None)?,
                        param(&p, "eps", None)?,
                    )?;
                    (report_rows(&rep), serde_json::to_value(&rep)?)
                }
                Which::Cher2 => {
                    let rep = bounds::report_upper(
                        int_param(&p, "n", None)?,
                        param(&p, "p", None)?,
                        param(&p, "alpha", None)?,
                    )?;
                    (report_rows(&rep), serde_json::to_value(&rep)?)
                }
                Which::Cov => {
                    let rep = bounds::report_codegree(
                        int_param(&p, "n", None)?,
                        int_param(&p, "r", None)?,
                        int_param(&p, "m", None)?,
                        int_param(&p, "k", None)?,
                    )?;
                    (report_rows(&rep), serde_json::to_value(&rep)?)
                }
                Which::Theta => {
                    let (eps, alpha) = (param(&p, "eps", None)?, param(&p, "alpha", None)?);
                    let rep = bounds::expected_bad_bound(eps, alpha)?;
                    let rows = vec![
                        ("eps".into(), eps.to_string()),
                        ("alpha".into(), alpha.to_string()),
                        ("theta".into(), format!("{:.15e}", rep.theta)),
                        ("below -1".into(), rep.below_minus_one.to_string()),
                    ];
                    (rows, serde_json::to_value(rep)?)
                }
                Which::Rho => {
                    let r = int_param(&p, "r", None)? as usize;
                    let tol = param(&p, "tol", Some(1e-12))?;
                    let eq = match p.get("d") {
                        Some(&d) => RhoEquation::LiteralD { d },
                        None => RhoEquation::Standard,
                    };
                    let root = bounds::rho_threshold(r, tol, eq)?;
                    let rows = vec![
                        ("r".into(), r.to_string()),
                        ("rho".into(), format!("{:.15}", root.rho)),
                        ("residual".into(), format!("{:.3e}", root.residual)),
                        ("bracket".into(), format!("[{}, {}]", root.bracket.0, root.bracket.1)),
                        ("rho used".into(), root.rho_int.to_string()),
                    ];
                    (rows, serde_json::to_value(root)?)
                }
            };
            let json = to_json(&json)?;
            match out {
                Some(path) => fs::write(path, &json)?,
                None => print!("{}{json}", aligned(&rows)),
            }
            Ok(0)
        }
        Command::Reduce { input, p, budget, out } => {
            let h = read_input(&input)?;
            let rep = reduce_and_solve(&h, p, seed, budget)?;
            emit_json(out.as_deref(), &rep)?;
            Ok(if rep.outcome == ReductionOutcome::BudgetExceeded {
                EXIT_BUDGET
            } else {
                0
            })
        }
        Command::Sweep {
            n,
            r,
            ratios,
            edges,
            trials,
            budget,
            alpha,
            record_timing,
            out,
            summary,
        } => {
            let mut config = ExperimentConfig::new(n, r, trials, cli.seed);
            config.grid = match (ratios, edges) {
                (_, Some(e)) => Grid::Edges(e),
                (Some(v), None) => Grid::Ratios(v),
                (None, None) => Grid::default_ratios(),
            };
            config.budget = budget;
            config.alpha = alpha;
            config.record_timing = record_timing;
            let result = threshold_sweep(&config)?;
            match cli.format {
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    write_records_csv(&result, &mut buf)?;
                    emit(out.as_deref(), &String::from_utf8(buf)?)?;
                }
                OutputFormat::Json => emit_json(out.as_deref(), &result)?,
            }
            if let Some(path) = summary {
                let s = serde_json::json!({ "config": result.config, "points": result.points });
                fs::write(path, to_json(&s)?)?;
            }
            let exceeded = result.points.iter().any(|p| p.budget_exceeded > 0);
            Ok(if exceeded { EXIT_BUDGET } else { 0 })
        }
        Command::Pipeline {
            n,
            r,
            eps,
            rho,
            trials,
            budget,
            out,
        } => {
            let reports = (0..trials)
                .map(|t| {
                    let mut c = PipelineConfig::new(n, r, eps, Seed::new(cli.seed).derive(t).value, budget);
                    c.rho = rho;
                    matching_pipeline(&c)
                })
                .collect::<Result<Vec<_>, _>>()?;
            emit_json(out.as_deref(), &reports)?;
            let exceeded = reports.iter().any(|r| {
                r.layers
                    .iter()
                    .any(|l| matches!(l.matching, loosecycle::experiments::StageOutcome::BudgetExceeded { .. }))
                    || matches!(r.cycle, loosecycle::experiments::StageOutcome::BudgetExceeded { .. })
            });
            Ok(if exceeded { EXIT_BUDGET } else { 0 })
        }
        Command::Verify {
            trials,
            alpha,
            input,
            cert,
            out,
        } => match (input, cert) {
            (Some(input), Some(cert)) => {
                let h = read_input(&input)?;
                let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert)?)?;
                let body = v.get("certificate").cloned().unwrap_or(v);
                let verdict = if body.get("vertex_order").is_some() {
                    let c: LooseHamiltonCycle = serde_json::from_value(body)?;
                    validate_loose_cycle(&h, &c)
                } else {
                    let m: PerfectMatching = serde_json::from_value(body)?;
                    validate_matching(&h, &m)
                };
                let ok = verdict.is_ok();
                emit_json(
                    out.as_deref(),
                    &serde_json::json!({ "valid": ok, "defect": verdict.err().map(|d| d.to_string()) }),
                )?;
                Ok(if ok { 0 } else { EXIT_SUITE_FAILED })
            }
            _ => {
                let report = statistical_suite(&SuiteConfig {
                    seed: cli.seed,
                    trials,
                    alpha,
                })?;
                match cli.format {
                    OutputFormat::Csv => {
                        let mut s = String::from("id,passed,p_value,statistic,samples\n");
                        for c in &report.claims {
                            s += &format!(
                                "{},{},{},{},{}\n",
                                c.id,
                                c.passed,
                                c.p_value.map(|p| p.to_string()).unwrap_or_default(),
                                c.statistic,
                                c.samples
                            );
                        }
                        emit(out.as_deref(), &s)?;
                    }
                    OutputFormat::Json => emit_json(out.as_deref(), &report)?,
                }
                Ok(if report.passed() { 0 } else { EXIT_SUITE_FAILED })
            }
        },
    }
}

fn report_rows(rep: &loosecycle::TailBoundReportF64) -> Vec<(String, String)> {
    let mut rows: Vec<(String, String)> = rep.params.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    rows.push(("exact".into(), format!("{:.15e}", rep.exact)));
    rows.push(("bound".into(), format!("{:.15e}", rep.bound)));
    rows.push(("slack".into(), format!("{:.15e}", rep.slack)));
    rows.push(("holds".into(), rep.holds().to_string()));
    rows
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
