//! `tlink`: command-line front end.
//!
//! Every subcommand prints a JSON run report on stdout, except `gen` and
//! `export` without `--out`, which print the artifact itself. Exit codes:
//! 0 pass, 1 verdict failed, 2 usage or input error, 3 internal assertion.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tournament_linkage::acceptance::{run_acceptance_suite, run_criterion, Profile};
use tournament_linkage::counterexample::{
    build_counterexample, build_unchecked, min_out_degree_bound, sampled_connectivity_check, verify_construction_rules,
    verify_property2, CounterexampleLayout, CounterexampleParams,
};
use tournament_linkage::dominators::{domination_profile, find_nearly_in_dominating, find_nearly_out_dominating, Direction};
use tournament_linkage::dot::export_dot;
use tournament_linkage::flow::{max_disjoint_paths, min_weight_disjoint_paths, vertex_connectivity};
use tournament_linkage::generators::GenSpec;
use tournament_linkage::io::{parse_list, parse_pairs, read_arc_list_file, write_arc_list, write_arc_list_file};
use tournament_linkage::linker::{link, HypothesisMode, LinkOptions, LinkOutcome};
use tournament_linkage::oracle::{exists_disjoint_linkage, LinkageVerdict, OracleBudget};
use tournament_linkage::report::RunReport;
use tournament_linkage::{Digraph, Error, Result};

#[derive(Parser)]
#[command(name = "tlink", version, about = "Disjoint paths and linkages in semicomplete digraphs")]
struct Cli {
    /// Worker threads for parallel verification phases (0 = all cores).
    #[arg(long, global = true, env = "TLINK_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a digraph in arc-list format.
    Gen(GenArgs),
    /// Build the counterexample tournament and check its construction rules.
    Counterexample(CounterexampleArgs),
    /// Exact or sampled vertex connectivity.
    Connectivity(ConnectivityArgs),
    /// Disjoint paths between two vertex sets.
    Paths(PathsArgs),
    /// Find or check nearly dominating vertices.
    Dominators(DominatorArgs),
    /// Run the linkage construction and emit a certificate.
    Link(LinkArgs),
    /// Exhaustive linkage decision for small digraphs.
    Oracle(OracleArgs),
    /// Graphviz DOT export.
    Export(ExportArgs),
    /// Run the acceptance suite.
    Accept(AcceptArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Transitive,
    Rotational,
    Random,
    Semicomplete,
    Bipartite,
    NearRegular,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Probability that a pair is bidirected (`semicomplete` only).
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Size of the first side (`bipartite` only; default n / 2).
    #[arg(long)]
    u_size: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    /// Randomize the free orientations with this seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    layout: Option<PathBuf>,
    /// Skip the k >= 42 and n >= k^2 hypotheses (for small test builds).
    #[arg(long)]
    unchecked: bool,
    /// Ordered pairs to sample for the connectivity check.
    #[arg(long, default_value_t = 200)]
    sample: usize,
}

#[derive(Args)]
struct ConnectivityArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, conflicts_with = "sample")]
    exact: bool,
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long)]
    target: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PathsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    sources: String,
    #[arg(long)]
    sinks: String,
    #[arg(long)]
    count: usize,
    /// Minimize the total number of vertices on the paths.
    #[arg(long)]
    minimize: bool,
}

#[derive(Args)]
struct DominatorArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, group = "mode")]
    find_out: bool,
    #[arg(long, group = "mode")]
    find_in: bool,
    #[arg(long, group = "mode")]
    check: Option<usize>,
    /// Check in-domination instead of out-domination.
    #[arg(long, requires = "check")]
    incoming: bool,
    #[arg(long)]
    cmax: Option<usize>,
}

#[derive(Args)]
struct LinkArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    pairs: String,
    /// `exact` or `sample:N`.
    #[arg(long)]
    check_hypotheses: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    pairs: String,
    #[arg(long, default_value_t = 50_000_000)]
    node_limit: u64,
    /// Seconds.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    layout: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AcceptArgs {
    #[arg(long, value_enum, default_value_t = Profile::Quick)]
    profile: Profile,
    /// Run a single criterion (1-8).
    #[arg(long)]
    criterion: Option<u8>,
}

/// What a subcommand produced: a report, or raw text for stdout.
enum Output {
    Report(RunReport),
    Text(String),
}

fn load(path: &PathBuf) -> Result<Digraph> {
    read_arc_list_file(path)
}

fn write_json(path: &PathBuf, value: &impl serde::Serialize) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value).expect("serializable"))?;
    Ok(())
}

fn gen(a: GenArgs) -> Result<Output> {
    let spec = match a.kind {
        Kind::Transitive => GenSpec::Transitive { n: a.n },
        Kind::Rotational => GenSpec::Rotational { n: a.n },
        Kind::Random => GenSpec::RandomTournament { n: a.n, seed: a.seed },
        Kind::Semicomplete => GenSpec::RandomSemicomplete {
            n: a.n,
            p_bidirected: a.p,
            seed: a.seed,
        },
        Kind::Bipartite => {
            let u = a.u_size.unwrap_or(a.n / 2);
            if u > a.n {
                return Err(Error::InvalidParameter(format!("u-size {u} exceeds n = {}", a.n)));
            }
            GenSpec::BipartiteTournament {
                u_size: u,
                w_size: a.n - u,
                seed: a.seed,
            }
        }
        Kind::NearRegular => GenSpec::NearRegular { n: a.n, seed: a.seed },
    };
    let d = spec.build()?;
    let Some(out) = a.out else {
        return Ok(Output::Text(write_arc_list(&d)));
    };
    write_arc_list_file(&d, &out)?;
    let mut r = RunReport::new("gen");
    r.param("spec", &spec);
    r.measure("n", d.n()).measure("arcs", d.arc_count());
    r.artifacts.push(out.display().to_string());
    r.verdict("generated", true, "");
    Ok(Output::Report(r))
}

fn counterexample(a: CounterexampleArgs) -> Result<Output> {
    let p = CounterexampleParams {
        k: a.k,
        n: a.n,
        seed: a.seed,
    };
    let mut r = RunReport::new("counterexample");
    r.param("params", p).param("sample", a.sample);
    let (t, lay) = r.timed("build", || if a.unchecked { build_unchecked(&p) } else { build_counterexample(&p) })?;
    let rules = r.timed("rules", || verify_construction_rules(&t, &lay))?;
    let delta = t.min_out_degree()?;
    let bound = min_out_degree_bound(a.k);
    r.measure("min_out_degree", delta).measure("rules", &rules);
    r.verdict("tournament", rules.is_tournament, "");
    r.verdict("min_out_degree", delta >= bound, format!("{delta} >= {bound}"));
    r.verdict("construction_rules", rules.all_passed(), "");
    r.verdict("u_minus_regular", rules.u_minus_regular, "");
    r.verdict("tier_orders", rules.tier_orders, "");
    let p2 = r.timed("property2", || verify_property2(&t, &lay));
    r.verdict(
        "property2",
        p2.as_ref().is_ok_and(|s| s.len() == a.k + 1),
        match &p2 {
            Ok(s) => format!("{} disjoint paths", s.len()),
            Err(e) => e.to_string(),
        },
    );
    if a.sample > 0 {
        let target = (2 * a.k + 1).min(delta);
        let sc = r.timed("sampled_connectivity", || sampled_connectivity_check(&t, target, a.sample, a.seed.unwrap_or(0)))?;
        r.verdict(
            "sampled_connectivity",
            sc.passed,
            format!("min cut {:?} over {} pairs, target {target} (cuts capped at target)", sc.min_observed, a.sample),
        );
    }
    if let Some(out) = &a.out {
        write_arc_list_file(&t, out)?;
        r.artifacts.push(out.display().to_string());
    }
    if let Some(path) = &a.layout {
        write_json(path, &lay)?;
        r.artifacts.push(path.display().to_string());
    }
    Ok(Output::Report(r))
}

fn connectivity(a: ConnectivityArgs) -> Result<Output> {
    let d = load(&a.input)?;
    let mut r = RunReport::new("connectivity");
    r.param("input", a.input.display().to_string()).param("target", a.target);
    match a.sample {
        Some(pairs) => {
            let target = a
                .target
                .ok_or_else(|| Error::InvalidParameter("--sample needs --target".into()))?;
            r.param("sample", pairs).param("seed", a.seed);
            let sc = r.timed("sample", || sampled_connectivity_check(&d, target, pairs, a.seed))?;
            r.verdict("sampled", sc.passed, sc.note.clone().unwrap_or_default());
            r.measure("sampled", &sc);
        }
        None => {
            let kappa = r.timed("exact", || vertex_connectivity(&d))?;
            r.measure("connectivity", kappa);
            match a.target {
                Some(t) => r.verdict("target", kappa >= t, format!("{kappa} >= {t}")),
                None => r.verdict("computed", true, kappa.to_string()),
            };
        }
    }
    Ok(Output::Report(r))
}

fn paths(a: PathsArgs) -> Result<Output> {
    let d = load(&a.input)?;
    let (s, t) = (parse_list(&a.sources)?, parse_list(&a.sinks)?);
    let mut r = RunReport::new("paths");
    r.param("sources", &s).param("sinks", &t).param("count", a.count).param("minimize", a.minimize);
    if a.minimize {
        match min_weight_disjoint_paths(&d, &s, &t, a.count) {
            Ok(sys) => {
                r.measure("total_vertices", sys.total_vertices()).measure("paths", &sys.paths);
                r.verdict("found", true, format!("{} paths", sys.len()));
            }
            Err(Error::Infeasible { requested, found, cut }) => {
                r.measure("cut", &cut);
                r.verdict("found", false, format!("only {found} of {requested}"));
            }
            Err(e) => return Err(e),
        }
    } else {
        let dp = max_disjoint_paths(&d, &s, &t, a.count)?;
        r.measure("paths", &dp.system.paths).measure("cut", &dp.cut);
        r.verdict("found", dp.system.len() >= a.count, format!("{} of {}", dp.system.len(), a.count));
    }
    Ok(Output::Report(r))
}

fn dominators(a: DominatorArgs) -> Result<Output> {
    let d = load(&a.input)?;
    let cmax = a.cmax.unwrap_or(d.n());
    let mut r = RunReport::new("dominators");
    r.param("cmax", cmax);
    let (vertex, dir) = if let Some(u) = a.check {
        (u, if a.incoming { Direction::In } else { Direction::Out })
    } else if a.find_in {
        (find_nearly_in_dominating(&d)?, Direction::In)
    } else if a.find_out {
        (find_nearly_out_dominating(&d)?, Direction::Out)
    } else {
        return Err(Error::InvalidParameter("one of --find-out, --find-in, --check is required".into()));
    };
    let p = domination_profile(&d, vertex, dir, cmax)?;
    r.measure("vertex", vertex).measure("profile", &p);
    r.verdict("nearly_dominating", p.verdict, format!("vertex {vertex}, {dir:?}"));
    Ok(Output::Report(r))
}

fn parse_hypothesis_mode(s: &str, seed: u64) -> Result<HypothesisMode> {
    match s.split_once(':') {
        None if s == "exact" => Ok(HypothesisMode::Exact),
        Some(("sample", n)) => Ok(HypothesisMode::Sample {
            pairs: n
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad sample size {n:?}")))?,
            seed,
        }),
        _ => Err(Error::InvalidParameter(format!("expected exact or sample:N, got {s:?}"))),
    }
}

fn link_cmd(a: LinkArgs) -> Result<Output> {
    let d = load(&a.input)?;
    let pairs = parse_pairs(&a.pairs)?;
    let opts = LinkOptions {
        hypotheses: a.check_hypotheses.as_deref().map(|s| parse_hypothesis_mode(s, a.seed)).transpose()?,
    };
    let mut r = RunReport::new("link");
    r.param("pairs", &pairs).param("options", opts);
    let run = r.timed("link", || link(&d, &pairs, opts))?;
    if let Some(h) = &run.hypotheses {
        r.measure("hypotheses", h);
        r.verdict("hypotheses", h.holds(), "");
    }
    match &run.outcome {
        LinkOutcome::Linked(c) => {
            r.measure("paths", &c.paths);
            r.verdict("linked", true, format!("{} paths", c.paths.len()));
            if let Some(p) = &a.cert {
                write_json(p, c)?;
                r.artifacts.push(p.display().to_string());
            }
        }
        LinkOutcome::Failed(f) => {
            r.measure("failure", f);
            r.verdict("linked", false, format!("{:?} at {:?}: {}", f.kind, f.step, f.message));
        }
    }
    if let Some(p) = &a.trace {
        write_json(p, &run.state.trace)?;
        r.artifacts.push(p.display().to_string());
    }
    Ok(Output::Report(r))
}

fn oracle(a: OracleArgs) -> Result<Output> {
    let d = load(&a.input)?;
    let pairs = parse_pairs(&a.pairs)?;
    if !(a.time_limit.is_finite() && a.time_limit > 0.0) {
        return Err(Error::InvalidParameter("time limit must be positive".into()));
    }
    let budget = OracleBudget::new(a.node_limit, Duration::from_secs_f64(a.time_limit))?;
    let mut r = RunReport::new("oracle");
    r.param("pairs", &pairs).param("node_limit", a.node_limit).param("time_limit", a.time_limit);
    let v = r.timed("search", || exists_disjoint_linkage(&d, &pairs, budget))?;
    let passed = matches!(v, LinkageVerdict::Yes { .. });
    r.measure("verdict", &v);
    r.verdict("linked", passed, "");
    Ok(Output::Report(r))
}

fn export(a: ExportArgs) -> Result<Output> {
    let d = load(&a.input)?;
    let layout: Option<CounterexampleLayout> = match &a.layout {
        Some(p) => Some(
            serde_json::from_str(&std::fs::read_to_string(p)?)
                .map_err(|e| Error::InvalidParameter(format!("layout file: {e}")))?,
        ),
        None => None,
    };
    if let Some(l) = &layout {
        if l.n != d.n() {
            return Err(Error::InvalidParameter(format!("layout has {} vertices, digraph {}", l.n, d.n())));
        }
    }
    let dot = export_dot(&d, layout.as_ref());
    let Some(out) = a.out else {
        return Ok(Output::Text(dot));
    };
    std::fs::write(&out, dot)?;
    let mut r = RunReport::new("export");
    r.artifacts.push(out.display().to_string());
    r.verdict("exported", true, "");
    Ok(Output::Report(r))
}

fn accept(a: AcceptArgs) -> Result<Output> {
    Ok(Output::Report(match a.criterion {
        Some(id) => {
            let c = run_criterion(id, a.profile)
                .ok_or_else(|| Error::InvalidParameter(format!("criteria are numbered 1-8, got {id}")))?;
            eprintln!("{}", c.line());
            let mut r = RunReport::new("accept");
            r.param("profile", a.profile).param("criterion", id);
            r.timings.insert(format!("criterion_{id}"), c.seconds);
            r.verdict(format!("criterion {id}: {}", c.name), c.passed, c.detail);
            r
        }
        None => {
            let r = run_acceptance_suite(a.profile);
            for v in &r.verdicts {
                eprintln!("[{}] {}", if v.passed { "PASS" } else { "FAIL" }, v.name);
            }
            r
        }
    }))
}

fn dispatch(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Counterexample(a) => counterexample(a),
        Command::Connectivity(a) => connectivity(a),
        Command::Paths(a) => paths(a),
        Command::Dominators(a) => dominators(a),
        Command::Link(a) => link_cmd(a),
        Command::Oracle(a) => oracle(a),
        Command::Export(a) => export(a),
        Command::Accept(a) => accept(a),
    }
}

/// Writes to stdout, tolerating a reader that closed the pipe early.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match std::panic::catch_unwind(|| dispatch(cli.command)) {
        Ok(Ok(Output::Report(r))) => {
            emit(&format!("{}\n", r.to_json()));
            ExitCode::from(if r.all_passed() { 0 } else { 1 })
        }
        Ok(Ok(Output::Text(t))) => {
            emit(&t);
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(3),
    }
}
