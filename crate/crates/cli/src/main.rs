mod record;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use hatlab::blockers::{
    blocker_schedule, blockers_to_json, build_level, parse_blocker_json, verify_blocker, BlockerVerdict,
};
use hatlab::constructions::{Construction, DEFAULT_SIZE_LIMIT};
use hatlab::graph::{
    enumerate_maximum_independent_sets, max_independent_set, parse_graph, parse_labels, write_graph,
    write_graph_with_labels,
};
use hatlab::hat_game::{
    exact_value_one_player, exact_value_two_players, nested_lower_bound, winning_family, FamilyKind, GameValue,
    ValueMode, DEFAULT_TABLE_BUDGET,
};
use hatlab::hitting_sets::h_of_graph;
use hatlab::random_subgraphs::{
    alpha_star_star_exact_with_guard, alpha_star_star_mc, epsilon_probe, hajnal_check, partition_bound_eval,
    probe_corpus, removal_trace, t16_margin, Estimate, Sampler, EXACT_GUARD,
};
use hatlab::ratio::{parse as parse_ratio, to_f64, to_string as rs};
use hatlab::suite::{run_criterion, Tier, CRITERIA};
use hatlab::{Budget, Error, Graph, VertexSet};

use record::{ResultRecord, Sink};

#[derive(Parser)]
#[command(name = "hatlab", version, about = "Hat games, Kneser graph powers, blockers and hitting sets")]
struct Cli {
    /// Write records to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a constructed graph in the text format.
    Construct(ConstructArgs),
    /// Exact independence number.
    Alpha(AlphaArgs),
    /// Value of the hat game.
    Hatgame(HatgameArgs),
    /// Build, verify and schedule blocker families.
    #[command(subcommand)]
    Blockers(BlockersCommand),
    /// Random induced subgraph experiments.
    #[command(subcommand)]
    Subgraph(SubgraphCommand),
    /// Minimum set meeting every maximum independent set.
    Hitting(HittingArgs),
    /// Run the acceptance battery.
    Suite(SuiteArgs),
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Source {
    /// Construction such as kneser:3, kneser-power:2,3, shift:2, cayley:4,1, gnp:20,0.3,7.
    #[arg(long)]
    construct: Option<String>,
    /// Graph file in the text format.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    construct: String,
    /// Prefix a comment block mapping vertices to labels.
    #[arg(long)]
    emit_labels: bool,
    #[arg(long, default_value_t = DEFAULT_SIZE_LIMIT)]
    limit: usize,
}

#[derive(Args)]
struct AlphaArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = DEFAULT_SIZE_LIMIT)]
    limit: usize,
    /// Search node budget.
    #[arg(long)]
    budget: Option<u64>,
    /// Also list every maximum independent set, up to --cap.
    #[arg(long)]
    enumerate: bool,
    #[arg(long, default_value_t = 10_000)]
    cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Lower,
}

#[derive(Args)]
struct HatgameArgs {
    #[arg(long)]
    kind: FamilyKind,
    #[arg(long)]
    players: usize,
    #[arg(long)]
    hats: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Table budget for the exact two-player search.
    #[arg(long, default_value_t = DEFAULT_TABLE_BUDGET)]
    budget: u64,
    /// Required for --mode lower.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
}

#[derive(Subcommand)]
enum BlockersCommand {
    /// Build level-d blockers for n bits.
    Build {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        seed: u64,
        /// Keep adding tuples until rejections saturate.
        #[arg(long)]
        saturate: bool,
        /// Certify every blocker with the verifier.
        #[arg(long)]
        verify: bool,
        /// Write the blockers to this JSON file instead of inlining them.
        #[arg(long)]
        blocker_out: Option<PathBuf>,
    },
    /// Decide whether each blocker in a file meets every winning set.
    Verify {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value = "dictator")]
        kind: FamilyKind,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Exact k(d) and beta(d).
    Schedule {
        #[arg(long)]
        max_level: usize,
    },
}

#[derive(Subcommand)]
enum SubgraphCommand {
    /// Expected independence ratio inside a uniform random subset.
    Alphastarstar {
        #[command(flatten)]
        source: Source,
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        #[arg(long)]
        mc: bool,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Largest n for --exact.
        #[arg(long, default_value_t = EXACT_GUARD)]
        max_n: usize,
    },
    /// Intersection and union of all maximum independent sets.
    Hajnal {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Random vertex-removal trace.
    Removal {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        target_size: usize,
        #[arg(long)]
        seed: u64,
        /// Fraction of n below which every step counts as successful.
        #[arg(long, default_value = "0")]
        threshold: String,
        /// Write the trace as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare alpha** with 1/4 + tau - tau^2/3.
    T16 {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Evaluate the partition bound for a given partition.
    PartitionBound {
        #[command(flatten)]
        source: Source,
        /// JSON array of parts, each an array of vertex indices.
        #[arg(long)]
        partition_file: PathBuf,
        #[arg(long, value_enum, default_value_t = SamplerKind::Binomial)]
        sampler: SamplerKind,
        /// Winning family for --sampler rv (the graph must have 2^n vertices).
        #[arg(long, default_value = "intersecting")]
        kind: FamilyKind,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Gap between independence ratio and alpha** over a probe corpus.
    Sweep {
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerKind {
    Binomial,
    Rv,
}

#[derive(Args)]
struct HittingArgs {
    #[command(flatten)]
    source: Source,
    /// Hit every maximal independent set of size at least (alpha_bar - eps) n.
    #[arg(long)]
    threshold: Option<String>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    cap: usize,
}

#[derive(Args)]
struct SuiteArgs {
    /// Smaller corpora and no stretch checks.
    #[arg(long)]
    quick: bool,
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
}

/// A check that ran but did not succeed; maps to exit status 1.
#[derive(Debug)]
struct Failure(String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failure {}

/// Bad arguments that clap cannot express; maps to exit status 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Failure>().is_some() {
        return 1;
    }
    match e.downcast_ref::<Error>() {
        Some(
            Error::BudgetExceeded { .. }
            | Error::CapExceeded { .. }
            | Error::Guard { .. }
            | Error::RetryCapExceeded { .. },
        ) => 1,
        _ => 2,
    }
}

struct Ctx {
    argv: Vec<String>,
    sink: Sink,
    start: Instant,
}

impl Ctx {
    fn emit(&mut self, params: Value, result: Value, seed: Option<u64>) -> Result<()> {
        let record = ResultRecord {
            command: self.argv.clone(),
            params,
            result,
            seed,
            wall_ms: self.start.elapsed().as_secs_f64() * 1000.0,
            version: env!("CARGO_PKG_VERSION"),
        };
        self.sink.record(&record)?;
        Ok(())
    }
}

struct Loaded {
    graph: Graph,
    labels: Vec<String>,
    id: String,
}

fn load(source: &Source, limit: usize) -> Result<Loaded> {
    if let Some(spec) = &source.construct {
        let c: Construction = spec.parse()?;
        let graph = c.build(limit)?;
        return Ok(Loaded { graph, labels: c.labels(), id: spec.clone() });
    }
    let path = source.graph.as_ref().expect("clap enforces one source");
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let graph = parse_graph(&text)?;
    let labels = parse_labels(&text, graph.n()).unwrap_or_else(|| (0..graph.n()).map(|v| v.to_string()).collect());
    Ok(Loaded { graph, labels, id: path.display().to_string() })
}

fn labelled(set: &VertexSet, labels: &[String]) -> Vec<String> {
    set.iter().map(|v| labels[v].clone()).collect()
}

fn budget(nodes: Option<u64>) -> Budget {
    nodes.map_or_else(Budget::unlimited, Budget::nodes).with_env_override()
}

fn parse_fraction(s: &str) -> Result<BigRational> {
    parse_ratio(s).ok_or_else(|| usage(format!("not a rational number: {s:?}")))
}

fn estimate_json(e: &Estimate) -> Value {
    json!({
        "mode": e.mode.as_str(),
        "value": rs(&e.value),
        "mean": e.mean(),
        "stderr": e.stderr,
        "samples": e.samples,
        "seed": e.seed,
    })
}

fn game_json(v: &GameValue) -> Value {
    json!({
        "players": v.t,
        "hats": v.n,
        "kind": v.kind,
        "value": rs(&v.value),
        "value_f64": to_f64(&v.value),
        "mode": v.mode,
        "witness": v.witness,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let outcome = match cli.threads {
        Some(k) => hatlab::par::with_threads(k, || run(cli, argv)),
        None => run(cli, argv),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli, argv: Vec<String>) -> Result<()> {
    let sink = Sink::open(cli.out.as_deref()).context("opening output")?;
    let mut ctx = Ctx { argv, sink, start: Instant::now() };
    let outcome = dispatch(&mut ctx, cli.command);
    ctx.sink.flush()?;
    outcome
}

fn dispatch(ctx: &mut Ctx, command: Command) -> Result<()> {
    match command {
        Command::Construct(a) => construct(ctx, a),
        Command::Alpha(a) => alpha(ctx, a),
        Command::Hatgame(a) => hatgame(ctx, a),
        Command::Blockers(c) => blockers(ctx, c),
        Command::Subgraph(c) => subgraph(ctx, c),
        Command::Hitting(a) => hitting(ctx, a),
        Command::Suite(a) => suite(ctx, a),
    }
}

fn construct(ctx: &mut Ctx, a: ConstructArgs) -> Result<()> {
    let c: Construction = a.construct.parse()?;
    let g = c.build(a.limit)?;
    let text = if a.emit_labels { write_graph_with_labels(&g, &c.labels()) } else { write_graph(&g) };
    ctx.sink.raw(&text)?;
    Ok(())
}

fn alpha(ctx: &mut Ctx, a: AlphaArgs) -> Result<()> {
    let loaded = load(&a.source, a.limit)?;
    let g = &loaded.graph;
    let mis = max_independent_set(g, budget(a.budget))?;
    let mut result = json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "alpha": mis.alpha,
        "alpha_bar": rs(&mis.alpha_bar),
        "witness": labelled(&mis.witness, &loaded.labels),
    });
    if a.enumerate {
        let sets = enumerate_maximum_independent_sets(g, a.cap, budget(a.budget))?;
        result["maximum_sets"] = Value::from(sets.iter().map(|s| labelled(s, &loaded.labels)).collect::<Vec<_>>());
        result["num_maximum_sets"] = Value::from(sets.len());
    }
    ctx.emit(json!({"graph": loaded.id, "budget": a.budget, "enumerate": a.enumerate}), result, None)
}

fn hatgame(ctx: &mut Ctx, a: HatgameArgs) -> Result<()> {
    if a.players == 0 {
        return Err(usage("--players must be at least 1"));
    }
    let family = winning_family(a.kind, a.hats)?;
    let params = json!({
        "kind": a.kind, "players": a.players, "hats": a.hats,
        "mode": match a.mode { Mode::Exact => "exact", Mode::Lower => "lower" },
        "budget": a.budget, "restarts": a.restarts,
    });
    let value = match a.mode {
        Mode::Exact => match a.players {
            1 => exact_value_one_player(&family),
            2 => exact_value_two_players(&family, a.budget)?,
            _ => return Err(usage("exact mode supports one or two players; use --mode lower")),
        },
        Mode::Lower => {
            let seed = a.seed.ok_or_else(|| usage("--mode lower needs --seed"))?;
            nested_lower_bound(&family, a.players, seed, a.restarts)?
        }
    };
    ctx.emit(params, game_json(&value), a.seed)?;
    if matches!(a.mode, Mode::Exact) && value.mode != ValueMode::Exact {
        return Err(Failure("table budget exceeded; reported value is a lower bound".into()).into());
    }
    Ok(())
}

fn verdict_json(n: usize, index: usize, v: &BlockerVerdict) -> Value {
    match v {
        BlockerVerdict::Blocker => json!({"index": index, "verdict": "blocker"}),
        BlockerVerdict::Unknown { nodes } => json!({"index": index, "verdict": "unknown", "nodes": nodes}),
        BlockerVerdict::Avoidable(p) => {
            let width = n * (p.t - 1);
            let players: Vec<Value> = p
                .guesses
                .iter()
                .map(|g| g.iter().map(|&(view, guess)| json!([format!("{view:0width$b}"), guess])).collect())
                .collect();
            json!({"index": index, "verdict": "avoidable", "counterexample": players})
        }
    }
}

fn blockers(ctx: &mut Ctx, command: BlockersCommand) -> Result<()> {
    match command {
        BlockersCommand::Build { level, bits, seed, saturate, verify, blocker_out } => {
            let family = build_level(level, bits, seed, saturate)?;
            let mut result = json!({
                "level": level,
                "n": family.n,
                "t": family.t,
                "count": family.blockers.len(),
                "blocker_size": family.blocker_size(),
                "union_measure": rs(&family.union_measure),
            });
            let mut failed = 0;
            if verify {
                let w = winning_family(FamilyKind::Dictator, bits)?;
                let verdicts = family
                    .blockers
                    .iter()
                    .map(|b| verify_blocker(bits, family.t, b, &w, budget(None)))
                    .collect::<hatlab::Result<Vec<_>>>()?;
                failed = verdicts.iter().filter(|v| !v.is_blocker()).count();
                result["verified"] = Value::from(verdicts.len() - failed);
            }
            let json = blockers_to_json(bits, &family.blockers);
            match &blocker_out {
                Some(path) => {
                    std::fs::write(path, serde_json::to_string(&json)?)
                        .with_context(|| format!("writing {}", path.display()))?;
                    result["blocker_file"] = Value::from(path.display().to_string());
                }
                None => result["blockers"] = json,
            }
            let params = json!({"level": level, "bits": bits, "saturate": saturate, "verify": verify});
            ctx.emit(params, result, Some(seed))?;
            if failed > 0 {
                return Err(Failure(format!("{failed} blockers did not verify")).into());
            }
            Ok(())
        }
        BlockersCommand::Verify { file, kind, budget: nodes } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let value: Value = serde_json::from_str(&text).map_err(|e| usage(format!("blocker file: {e}")))?;
            let (n, t, candidates) = parse_blocker_json(&value)?;
            let family = winning_family(kind, n)?;
            let verdicts = candidates
                .iter()
                .map(|b| verify_blocker(n, t, b, &family, budget(nodes)))
                .collect::<hatlab::Result<Vec<_>>>()?;
            let unknown = verdicts.iter().filter(|v| matches!(v, BlockerVerdict::Unknown { .. })).count();
            let result = json!({
                "n": n,
                "t": t,
                "count": candidates.len(),
                "blockers": verdicts.iter().filter(|v| v.is_blocker()).count(),
                "verdicts": verdicts.iter().enumerate().map(|(i, v)| verdict_json(n, i, v)).collect::<Vec<_>>(),
            });
            ctx.emit(json!({"file": file.display().to_string(), "kind": kind, "budget": nodes}), result, None)?;
            if unknown > 0 {
                return Err(Failure(format!("{unknown} verdicts unknown within budget")).into());
            }
            Ok(())
        }
        BlockersCommand::Schedule { max_level } => {
            if max_level == 0 {
                return Err(usage("--max-level must be at least 1"));
            }
            if max_level > 3 {
                return Err(Error::Guard { what: "schedule levels", size: max_level as u128, limit: 3 }.into());
            }
            let levels: Vec<Value> = blocker_schedule(max_level)
                .iter()
                .map(|s| {
                    json!({
                        "d": s.d,
                        "k": s.k.to_string(),
                        "beta": rs(&s.beta),
                        "ell": s.ell.as_ref().map(ToString::to_string),
                    })
                })
                .collect();
            ctx.emit(json!({"max_level": max_level}), json!({"levels": levels}), None)
        }
    }
}

fn read_partition(path: &Path, n: usize) -> Result<Vec<VertexSet>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parts: Vec<Vec<usize>> = serde_json::from_str(&text).map_err(|e| usage(format!("partition file: {e}")))?;
    parts
        .into_iter()
        .map(|p| {
            if let Some(&v) = p.iter().find(|&&v| v >= n) {
                return Err(Error::MalformedPartition(format!("vertex {v} out of range")).into());
            }
            Ok(VertexSet::from_indices(n, p))
        })
        .collect()
}

fn subgraph(ctx: &mut Ctx, command: SubgraphCommand) -> Result<()> {
    match command {
        SubgraphCommand::Alphastarstar { source, exact, mc, samples, seed, max_n } => {
            let loaded = load(&source, DEFAULT_SIZE_LIMIT)?;
            let estimate = match (exact, mc) {
                (true, _) => alpha_star_star_exact_with_guard(&loaded.graph, max_n)?,
                (_, true) => {
                    let samples = samples.ok_or_else(|| usage("--mc needs --samples"))?;
                    let seed = seed.ok_or_else(|| usage("--mc needs --seed"))?;
                    alpha_star_star_mc(&loaded.graph, samples, seed)?
                }
                _ => return Err(usage("choose --exact or --mc")),
            };
            let params = json!({"graph": loaded.id, "exact": exact, "samples": samples});
            ctx.emit(params, estimate_json(&estimate), seed)
        }
        SubgraphCommand::Hajnal { source, cap } => {
            let loaded = load(&source, DEFAULT_SIZE_LIMIT)?;
            let r = hajnal_check(&loaded.graph, cap)?;
            let result = json!({
                "n": loaded.graph.n(),
                "alpha": r.alpha,
                "num_sets": r.num_sets,
                "intersection": labelled(&r.intersection, &loaded.labels),
                "intersection_size": r.intersection_size,
                "union_size": r.union_size,
                "pass": r.pass,
            });
            ctx.emit(json!({"graph": loaded.id, "cap": cap}), result, None)
        }
        SubgraphCommand::Removal { source, target_size, seed, threshold, csv } => {
            let loaded = load(&source, DEFAULT_SIZE_LIMIT)?;
            let threshold_value = parse_fraction(&threshold)?;
            let trace = removal_trace(&loaded.graph, target_size, seed, &threshold_value)?;
            if let Some(path) = &csv {
                std::fs::write(path, trace.to_csv()).with_context(|| format!("writing {}", path.display()))?;
            }
            let result = json!({
                "n": loaded.graph.n(),
                "initial_alpha": trace.initial_alpha,
                "final_alpha": trace.final_alpha(),
                "steps": trace.steps.len(),
                "successful_steps": trace.successful_steps(),
                "removed": trace.steps.iter().map(|s| s.removed).collect::<Vec<_>>(),
                "alpha": trace.steps.iter().map(|s| s.alpha).collect::<Vec<_>>(),
            });
            let params = json!({"graph": loaded.id, "target_size": target_size, "threshold": rs(&threshold_value)});
            ctx.emit(params, result, Some(seed))
        }
        SubgraphCommand::T16 { source, samples, seed } => {
            let loaded = load(&source, DEFAULT_SIZE_LIMIT)?;
            let r = t16_margin(&loaded.graph, samples, seed)?;
            let result = json!({
                "alpha_bar": rs(&r.alpha_bar),
                "tau": rs(&r.tau),
                "bound": rs(&r.bound),
                "bound_f64": to_f64(&r.bound),
                "estimate": estimate_json(&r.estimate),
                "pass": r.pass,
            });
            ctx.emit(json!({"graph": loaded.id, "samples": samples}), result, Some(seed))?;
            if !r.pass {
                return Err(Failure("estimate exceeds the bound".into()).into());
            }
            Ok(())
        }
        SubgraphCommand::PartitionBound { source, partition_file, sampler, kind, samples, seed } => {
            let loaded = load(&source, DEFAULT_SIZE_LIMIT)?;
            let n = loaded.graph.n();
            let partition = read_partition(&partition_file, n)?;
            let family;
            let chosen = match sampler {
                SamplerKind::Binomial => Sampler::Binomial,
                SamplerKind::Rv => {
                    if !n.is_power_of_two() {
                        return Err(usage("--sampler rv needs a graph on 2^n vertices"));
                    }
                    family = winning_family(kind, n.trailing_zeros() as usize)?;
                    Sampler::RV(&family)
                }
            };
            let e = partition_bound_eval(&loaded.graph, &partition, chosen, samples, seed)?;
            let params = json!({
                "graph": loaded.id,
                "partition_file": partition_file.display().to_string(),
                "parts": partition.len(),
                "sampler": match sampler { SamplerKind::Binomial => "binomial".to_string(), SamplerKind::Rv => format!("rv:{kind}") },
                "samples": samples,
            });
            ctx.emit(params, estimate_json(&e), Some(seed))
        }
        SubgraphCommand::Sweep { samples, seed } => {
            let corpus = probe_corpus(seed)?;
            let rows = epsilon_probe(&corpus, samples, seed)?;
            let min_gap = rows.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
            let result = json!({
                "rows": rows.iter().map(|r| json!({
                    "graph": r.name,
                    "n": r.n,
                    "alpha_bar": rs(&r.alpha_bar),
                    "alpha_star_star": estimate_json(&r.estimate),
                    "gap": r.gap,
                })).collect::<Vec<_>>(),
                "min_gap": min_gap,
            });
            ctx.emit(json!({"samples": samples}), result, Some(seed))
        }
    }
}

fn hitting(ctx: &mut Ctx, a: HittingArgs) -> Result<()> {
    let loaded = load(&a.source, DEFAULT_SIZE_LIMIT)?;
    let threshold = a.threshold.as_deref().map(parse_fraction).transpose()?;
    let r = h_of_graph(&loaded.graph, a.cap, budget(a.budget), threshold.as_ref())?;
    let result = json!({
        "h": r.h,
        "witness": labelled(&r.witness, &loaded.labels),
        "num_targets": r.num_targets,
        "lower_bound_cert": r.lower_bound_cert,
        "exact": r.exact,
    });
    let params = json!({
        "graph": loaded.id,
        "threshold": threshold.as_ref().map(rs),
        "budget": a.budget,
        "cap": a.cap,
    });
    ctx.emit(params, result, None)?;
    if !r.exact {
        return Err(Failure("budget exceeded; h is an upper bound".into()).into());
    }
    Ok(())
}

fn suite(ctx: &mut Ctx, a: SuiteArgs) -> Result<()> {
    let tier = if a.quick { Tier::Quick } else { Tier::Full };
    let ids: Vec<u8> = if a.only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { a.only.clone() };
    if let Some(bad) = ids.iter().find(|id| !CRITERIA.iter().any(|c| c.0 == **id)) {
        return Err(usage(format!("no criterion {bad}")));
    }
    let mut failed = 0;
    for id in ids {
        let r = run_criterion(id, tier);
        eprintln!("{:>2} {:<36} {}", r.id, r.name, if r.pass { "PASS" } else { "FAIL" });
        failed += !r.pass as usize;
        let result =
            json!({"id": r.id, "name": r.name, "pass": r.pass, "detail": r.detail, "elapsed_ms": r.elapsed_ms});
        ctx.emit(json!({"quick": a.quick, "criterion": id}), result, None)?;
    }
    if failed > 0 {
        return Err(Failure(format!("{failed} criteria failed")).into());
    }
    Ok(())
}
