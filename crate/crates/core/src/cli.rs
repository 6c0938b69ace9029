//! The `scherk` command line.
//!
//! Exit status: `0` success, `1` usage or input errors, `2` a violated
//! existence condition, `3` a solve that did not converge. Every run that
//! gets past argument parsing writes `report.json` and `timings.json` to
//! `--out`.

use crate::domain::{check, enumerate_polygons, truncation_table, validate, EnumerationLimits, VerdictKind};
use crate::error::{Error, Result};
use crate::exact::family;
use crate::io::{parse_domain, write_flux_csv, write_profile_csv, ParsedDomain, RunReport, Timings};
use crate::lab::{
    discrete_flux, experiment_nonuniqueness, experiment_nonzero_flux, ExperimentReport, FluxResult, LemmaSample,
    NonuniquenessConfig, NonzeroFluxConfig, Normal,
};
use crate::solver::{detect_divergence_lines, run_truncation_sequence, DivergenceConfig, TruncationSequence};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATED: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "scherk", version, about = "Jenkins-Serrin problems for minimal graphs in the hyperbolic plane")]
pub struct Cli {
    /// Directory for report.json, timings.json and CSV tables.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for random sampling; overrides the file's `seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a domain file and list structural diagnostics.
    Validate(InputArgs),
    /// Decide the existence conditions and print the truncation table.
    Check(InputArgs),
    /// One Dirichlet solve at the top truncation level; writes grid.csv.
    Solve(SolveArgs),
    /// The truncation ladder with probe summaries and divergence candidates.
    Sequence(SolveArgs),
    /// Flux of the top-level solution across the file's named arcs; writes flux.csv.
    Flux(FluxArgs),
    /// Profile family of the translation-invariant graphs; writes profile.csv.
    CmcProfile(CmcArgs),
    /// Numerical experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Grid spacing.
    #[arg(long)]
    pub h: Option<f64>,
    /// Truncation levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct FluxArgs {
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Add this many random closed loops, whose flux should vanish.
    #[arg(long, default_value_t = 0)]
    pub loops: usize,
}

#[derive(Debug, Args)]
pub struct CmcArgs {
    /// Mean curvature.
    #[arg(long = "H", allow_negative_numbers = true)]
    pub mean_curvature: f64,
    /// `A` when `H = 0`, `k` otherwise.
    #[arg(long, allow_negative_numbers = true)]
    pub param: f64,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    /// Loop flux around the hole of an annulus against `α_1 - β_1`.
    NonzeroFlux(NonzeroArgs),
    /// Flux gap between the two truncated families on nested strips.
    Nonuniqueness(NonuniquenessArgs),
}

#[derive(Debug, Args)]
pub struct NonzeroArgs {
    /// Domain file whose `experiments.nonzero_flux` block sets the configuration.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<f64>>,
    /// Also run the symmetric configuration `a = 1`.
    #[arg(long)]
    pub control: bool,
}

#[derive(Debug, Args)]
pub struct NonuniquenessArgs {
    /// Domain file whose `experiments.nonuniqueness` block sets the configuration.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Strip depths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub depth: Option<Vec<usize>>,
}

/// Result of a subcommand that ran to completion.
struct Outcome {
    payload: serde_json::Value,
    status: i32,
}

struct Context {
    out: PathBuf,
    seed: Option<u64>,
    timings: Timings,
    input: Option<Vec<u8>>,
}

impl Context {
    fn load(&mut self, path: &Path) -> Result<ParsedDomain> {
        let start = Instant::now();
        let bytes = std::fs::read(path)?;
        self.input = Some(bytes.clone());
        let text = String::from_utf8(bytes).map_err(|e| Error::Misconfiguration(format!("input is not UTF-8: {e}")))?;
        let parsed = parse_domain(&text)?;
        self.timings.record("parse", start);
        self.seed = self.seed.or(parsed.file.seed);
        Ok(parsed)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn create(&self, name: &str) -> Result<BufWriter<File>> {
        std::fs::create_dir_all(&self.out)?;
        Ok(BufWriter::new(File::create(self.out.join(name))?))
    }
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let threads = cli.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {threads} threads: {e}");
            return EXIT_USAGE;
        }
    };
    let mut ctx = Context {
        out: cli.out.clone(),
        seed: cli.seed,
        timings: Timings { threads: pool.current_num_threads(), phases: Vec::new() },
        input: None,
    };
    let name = command_name(&cli.command);
    let start = Instant::now();
    let result = pool.install(|| dispatch(&cli.command, &mut ctx));
    ctx.timings.record("total", start);

    let mut report = RunReport::new(&name, ctx.input.as_deref(), ctx.seed());
    match result {
        Ok(o) => {
            report.exit_status = o.status;
            report.payload = o.payload;
        }
        Err(e) => {
            eprintln!("error: {e}");
            report.exit_status = exit_status(&e);
            report.errors = match &e {
                Error::Schema(issues) => issues.iter().map(ToString::to_string).collect(),
                other => vec![other.to_string()],
            };
        }
    }
    if let Err(e) = report.write(&ctx.out).and_then(|_| ctx.timings.write(&ctx.out)) {
        eprintln!("error: cannot write the report: {e}");
        return EXIT_USAGE;
    }
    report.exit_status
}

fn exit_status(e: &Error) -> i32 {
    match e {
        Error::NonConvergence(_) => EXIT_NONCONVERGENCE,
        _ => EXIT_USAGE,
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Validate(_) => "validate".into(),
        Command::Check(_) => "check".into(),
        Command::Solve(_) => "solve".into(),
        Command::Sequence(_) => "sequence".into(),
        Command::Flux(_) => "flux".into(),
        Command::CmcProfile(_) => "cmc-profile".into(),
        Command::Experiment(ExperimentCommand::NonzeroFlux(_)) => "experiment nonzero-flux".into(),
        Command::Experiment(ExperimentCommand::Nonuniqueness(_)) => "experiment nonuniqueness".into(),
    }
}

fn dispatch(c: &Command, ctx: &mut Context) -> Result<Outcome> {
    match c {
        Command::Validate(a) => cmd_validate(a, ctx),
        Command::Check(a) => cmd_check(a, ctx),
        Command::Solve(a) => cmd_solve(a, ctx),
        Command::Sequence(a) => cmd_sequence(a, ctx),
        Command::Flux(a) => cmd_flux(a, ctx),
        Command::CmcProfile(a) => cmd_cmc(a, ctx),
        Command::Experiment(ExperimentCommand::NonzeroFlux(a)) => cmd_nonzero(a, ctx),
        Command::Experiment(ExperimentCommand::Nonuniqueness(a)) => cmd_nonuniqueness(a, ctx),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("payloads always serialize")
}

fn cmd_validate(a: &InputArgs, ctx: &mut Context) -> Result<Outcome> {
    let p = ctx.load(&a.input)?;
    let diagnostics = validate(&p.domain);
    if diagnostics.is_empty() {
        println!("{}: valid, no diagnostics", a.input.display());
    }
    for d in &diagnostics {
        println!("{:?} at {}: {}", d.rule, d.location, d.message);
    }
    let edges = p.domain.edges().count();
    Ok(Outcome {
        payload: json!({
            "vertices": p.domain.vertex_count(),
            "edges": edges,
            "components": p.domain.components.len(),
            "diagnostics": to_value(&diagnostics),
        }),
        status: EXIT_OK,
    })
}

fn cmd_check(a: &InputArgs, ctx: &mut Context) -> Result<Outcome> {
    let p = ctx.load(&a.input)?;
    let start = Instant::now();
    let verdict = check(&p.domain)?;
    let polygons = enumerate_polygons(&p.domain, &EnumerationLimits::default())?;
    let subject = match &verdict.witness {
        Some(w) => polygons.iter().find(|q| q.vertices == w.vertices),
        None => polygons.iter().find(|q| q.is_whole_domain),
    };
    let table = match subject {
        Some(q) => truncation_table(&p.domain, q, &[1, 2, 3, 4])?,
        None => Vec::new(),
    };
    ctx.timings.record("check", start);
    println!("verdict: {:?} ({:?})", verdict.kind, verdict.theorem);
    if let Some(w) = &verdict.witness {
        println!(
            "witness {}: alpha={:.10} beta={:.10} gamma={:.10}",
            w.polygon, w.alpha, w.beta, w.gamma
        );
    }
    for r in &table {
        println!("  n={} alpha={:.10} beta={:.10} gamma={:.10}", r.generation, r.alpha, r.beta, r.gamma);
    }
    let status = if verdict.kind == VerdictKind::Violated { EXIT_VIOLATED } else { EXIT_OK };
    Ok(Outcome { payload: json!({ "verdict": to_value(&verdict), "truncation": to_value(&table) }), status })
}

fn sequence_config(p: &ParsedDomain, a: &SolveArgs) -> Result<crate::solver::SequenceConfig> {
    let mut cfg = p.file.sequence_config()?;
    if let Some(h) = a.h {
        cfg.h = h;
    }
    if let Some(l) = &a.levels {
        cfg.levels = l.clone();
        if cfg.generations.len() != 1 && cfg.generations.len() != l.len() {
            cfg.generations = vec![*cfg.generations.last().unwrap_or(&1)];
        }
    }
    Ok(cfg)
}

/// Solves only the last level of the configured ladder.
fn top_level(p: &ParsedDomain, a: &SolveArgs, ctx: &mut Context) -> Result<TruncationSequence> {
    let mut cfg = sequence_config(p, a)?;
    let last = cfg.levels.len() - 1;
    let generation = cfg.generation(last);
    cfg.levels = vec![cfg.levels[last]];
    cfg.generations = vec![generation];
    let start = Instant::now();
    let seq = run_truncation_sequence(&p.domain, &cfg)?;
    ctx.timings.record("solve", start);
    Ok(seq)
}

fn level_summary(seq: &TruncationSequence) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = seq
        .levels
        .iter()
        .map(|l| {
            json!({
                "level": l.level,
                "generation": l.generation,
                "iterations": l.solution.iterations,
                "converged": l.solution.converged,
                "residual": l.solution.residual,
                "unknowns": l.solution.grid.unknown_count(),
                "compact_sup": l.compact_sup,
                "compact_inf": l.compact_inf,
                "probe_values": l.probe_values,
                "failure": l.failure,
            })
        })
        .collect();
    json!(rows)
}

fn convergence_status(seq: &TruncationSequence) -> i32 {
    if seq.levels.iter().all(|l| l.failure.is_none() && l.solution.converged) {
        EXIT_OK
    } else {
        EXIT_NONCONVERGENCE
    }
}

fn write_grid(seq: &TruncationSequence, ctx: &Context) -> Result<()> {
    if let Some(l) = seq.levels.last() {
        l.solution.write_csv(ctx.create("grid.csv")?)?;
    }
    Ok(())
}

fn cmd_solve(a: &SolveArgs, ctx: &mut Context) -> Result<Outcome> {
    let p = ctx.load(&a.input)?;
    let seq = top_level(&p, a, ctx)?;
    write_grid(&seq, ctx)?;
    let l = &seq.levels[0];
    println!(
        "m={} n={} iterations={} converged={} residual={:.3e}",
        l.level, l.generation, l.solution.iterations, l.solution.converged, l.solution.residual
    );
    let status = convergence_status(&seq);
    Ok(Outcome { payload: json!({ "h": seq.spec.h(), "levels": level_summary(&seq) }), status })
}

fn cmd_sequence(a: &SolveArgs, ctx: &mut Context) -> Result<Outcome> {
    let p = ctx.load(&a.input)?;
    let cfg = sequence_config(&p, a)?;
    let start = Instant::now();
    let seq = run_truncation_sequence(&p.domain, &cfg)?;
    ctx.timings.record("sequence", start);
    write_grid(&seq, ctx)?;
    for l in &seq.levels {
        println!(
            "m={} n={} iterations={} converged={} sup={:.6}",
            l.level, l.generation, l.solution.iterations, l.solution.converged, l.compact_sup
        );
    }
    let probes = seq.probe_summaries(&cfg.probes);
    let status = convergence_status(&seq);
    let divergence = if seq.levels.len() >= 3 && status == EXIT_OK {
        let start = Instant::now();
        let c = detect_divergence_lines(&seq, &p.domain, &DivergenceConfig::default())?;
        ctx.timings.record("divergence", start);
        for x in &c {
            println!(
                "divergence candidate {} {:.6} {:.6}: {:?} -> {:?}, score {:.3}",
                x.geodesic.0, x.geodesic.1, x.geodesic.2, x.start_vertex, x.end_vertex, x.score
            );
        }
        to_value(&c)
    } else {
        serde_json::Value::Null
    };
    Ok(Outcome {
        payload: json!({
            "h": seq.spec.h(),
            "levels": level_summary(&seq),
            "flagged": seq.flagged,
            "probes": to_value(&probes),
            "divergence_candidates": divergence,
        }),
        status,
    })
}

fn cmd_flux(a: &FluxArgs, ctx: &mut Context) -> Result<Outcome> {
    let p = ctx.load(&a.solve.input)?;
    let seed = ctx.seed();
    let seq = top_level(&p, &a.solve, ctx)?;
    let status = convergence_status(&seq);
    let sol = &seq.levels[0].solution;
    let mut curves: Vec<(String, crate::lab::ChartCurve, Normal)> =
        p.arcs.iter().map(|n| (n.name.clone(), n.curve.clone(), n.normal)).collect();
    if a.loops > 0 {
        let s = sol.grid.spec;
        let bbox = (s.x0, s.x(s.nx - 1), s.y0, s.y(s.ny - 1));
        let sample = LemmaSample::random(|x, y| sol.interpolate(x, y).is_ok(), bbox, a.loops, 3.0 * s.h(), seed)?;
        for (i, c) in sample.loops.into_iter().enumerate() {
            curves.push((format!("loop{i}"), c, Normal::Right));
        }
    }
    let start = Instant::now();
    let mut rows: Vec<FluxResult> = Vec::with_capacity(curves.len());
    for (name, curve, normal) in &curves {
        let mut r = discrete_flux(sol, curve, *normal)?;
        r.arc = name.clone();
        println!("{name}: flux {:.10} length {:.10} error {:.2e}", r.value, r.arc_length, r.error_estimate);
        rows.push(r);
    }
    ctx.timings.record("flux", start);
    write_flux_csv(ctx.create("flux.csv")?, &rows)?;
    Ok(Outcome { payload: json!({ "level": seq.levels[0].level, "flux": to_value(&rows) }), status })
}

fn cmd_cmc(a: &CmcArgs, ctx: &mut Context) -> Result<Outcome> {
    let f = family(a.mean_curvature, a.param)?;
    let mut buf = Vec::new();
    write_profile_csv(&mut buf, &f, a.samples)?;
    std::fs::create_dir_all(&ctx.out)?;
    std::fs::write(ctx.out.join("profile.csv"), &buf)?;
    let head = String::from_utf8_lossy(&buf).lines().next().unwrap_or_default().to_string();
    println!("{head}");
    let components: Vec<serde_json::Value> = f
        .components
        .iter()
        .map(|c| {
            json!({
                "theta_lo": c.theta_lo, "theta_hi": c.theta_hi,
                "lower": to_value(&c.lower), "upper": to_value(&c.upper),
            })
        })
        .collect();
    Ok(Outcome {
        payload: json!({ "H": f.h, "param": f.param, "case": f.case.label(), "components": components }),
        status: EXIT_OK,
    })
}

fn experiment_block(ctx: &mut Context, input: &Option<PathBuf>) -> Result<Option<ParsedDomain>> {
    input.as_ref().map(|path| ctx.load(path)).transpose()
}

fn finish_experiment(reports: &[ExperimentReport], ctx: &mut Context) -> Result<Outcome> {
    let mut w = ctx.create("flux.csv")?;
    for r in reports {
        r.write_csv(&mut w)?;
        for c in &r.checks {
            println!("{}: {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
    }
    let converged = reports.iter().all(|r| r.find_check("all levels converged").is_none_or(|c| c.passed));
    Ok(Outcome {
        payload: json!({ "experiments": to_value(&reports) }),
        status: if converged { EXIT_OK } else { EXIT_NONCONVERGENCE },
    })
}

fn cmd_nonzero(a: &NonzeroArgs, ctx: &mut Context) -> Result<Outcome> {
    let file = experiment_block(ctx, &a.input)?;
    let mut cfg = file
        .and_then(|p| p.file.experiments.and_then(|e| e.nonzero_flux))
        .unwrap_or_default();
    if let Some(h) = a.h {
        cfg.h = h;
    }
    if let Some(l) = &a.levels {
        cfg.levels = l.clone();
    }
    let start = Instant::now();
    let mut reports = vec![experiment_nonzero_flux(&cfg)?];
    if a.control {
        let control = NonzeroFluxConfig { a: 1.0, ..cfg.clone() };
        reports.push(experiment_nonzero_flux(&control)?);
    }
    ctx.timings.record("experiment", start);
    finish_experiment(&reports, ctx)
}

fn cmd_nonuniqueness(a: &NonuniquenessArgs, ctx: &mut Context) -> Result<Outcome> {
    let file = experiment_block(ctx, &a.input)?;
    let mut cfg: NonuniquenessConfig = file
        .and_then(|p| p.file.experiments.and_then(|e| e.nonuniqueness))
        .unwrap_or_default();
    if let Some(h) = a.h {
        cfg.h = h;
    }
    if let Some(al) = a.alpha {
        cfg.alpha = al;
    }
    if let Some(d) = &a.depth {
        cfg.depths = d.clone();
    }
    let start = Instant::now();
    let report = experiment_nonuniqueness(&cfg)?;
    ctx.timings.record("experiment", start);
    finish_experiment(&[report], ctx)
}
