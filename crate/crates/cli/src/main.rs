//! `bjortho`: orthogonality queries, orthodigraphs and the acceptance suite
//! from the command line. Every report is one JSON object per line and
//! echoes the seed and tolerances it ran with.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bjortho::acceptance::{self, CriterionResult, SUITE_SEED};
use bjortho::graph::{self, GraphMode, OrthoDigraph};
use bjortho::norm::model_by_name;
use bjortho::{is_bj_orthogonal, parse_norm_spec, parse_norm_spec_file, radon, Error, NormSpec, Tolerances, Vector};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "bjortho", version, about = "Birkhoff-James orthogonality toolkit")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Norm spec: a JSON file, inline JSON, or a built-in name such as `linf3`.
    #[arg(long, global = true)]
    spec: Option<String>,
    /// Vertex set for graph commands; defaults to exact for polyhedral models.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    /// Sample count for sampled graphs and sampled checks.
    #[arg(long, global = true, default_value_t = 48)]
    samples: usize,
    #[arg(long, global = true, default_value_t = SUITE_SEED)]
    seed: u64,
    /// Tolerance override `KEY=VALUE`; repeatable.
    #[arg(long = "tol", global = true, value_name = "KEY=V")]
    tol: Vec<String>,
    /// Write the JSON lines here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the graph as DOT (graph commands).
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide x ⊥ y. Exit 0 orthogonal, 1 not, 2 error.
    Bj {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Build the orthodigraph and report its size and fingerprint.
    Graph {
        /// Add the loop vertex 0.
        #[arg(long)]
        gamma0: bool,
    },
    /// Minimal vertex set with trivial common neighbourhood.
    Dim,
    /// Vertices whose neighbourhood marks a smooth point.
    Smooth,
    /// Maximal faces read off the graph.
    Faces,
    /// Sup-norm recognition.
    Recognize,
    /// Radon-plane checks for real planes: mutual pair, symmetry, flat segments.
    Radon {
        /// Write the Day-construction boundary of the spec as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Acceptance suite. Exits nonzero iff a criterion fails.
    Suite {
        /// Run every criterion (the default).
        #[arg(long)]
        all: bool,
        /// Run only these criteria.
        #[arg(long = "criterion", value_name = "ID")]
        criteria: Vec<u8>,
    },
}

/// Exit status of a finished command.
enum Outcome {
    Ok,
    /// Negative answer (`bj` not orthogonal, failed criterion).
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_spec(arg: Option<&str>) -> Result<NormSpec, Error> {
    let arg = arg.ok_or_else(|| Error::Parse("--spec is required for this command".into()))?;
    let path = Path::new(arg);
    if path.is_file() {
        parse_norm_spec_file(path)
    } else if arg.trim_start().starts_with('{') {
        parse_norm_spec(arg)
    } else {
        model_by_name(arg).map_err(|_| Error::Parse(format!("{arg:?} is neither a spec file, inline JSON nor a model name")))
    }
}

struct Ctx {
    run: RunConfig,
    tol: Tolerances,
    lines: Vec<Value>,
}

impl Ctx {
    /// Report object with the common reproducibility fields.
    fn report(&mut self, command: &str, spec: Option<&NormSpec>, mode: &str, counts: Value, verdicts: Vec<Value>) {
        let mut obj = json!({
            "command": command,
            "mode": mode,
            "seed": self.run.seed,
            "tolerances": self.tol,
            "counts": counts,
            "verdicts": verdicts,
        });
        if let Some(s) = spec {
            obj["model"] = json!(s.name());
            obj["dim"] = json!(s.dim());
        }
        self.lines.push(obj);
    }

    fn flush(&self) -> Result<(), Error> {
        let mut text = String::new();
        for l in &self.lines {
            text.push_str(&l.to_string());
            text.push('\n');
        }
        match &self.run.out {
            Some(p) => fs::write(p, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let mut tol = Tolerances::default();
    for t in &cli.run.tol {
        tol.set(t)?;
    }
    let mut ctx = Ctx { run: cli.run.clone(), tol, lines: Vec::new() };
    let outcome = match &cli.command {
        Command::Bj { x, y } => cmd_bj(&mut ctx, x, y)?,
        Command::Graph { gamma0 } => cmd_graph(&mut ctx, *gamma0)?,
        Command::Dim => cmd_dim(&mut ctx)?,
        Command::Smooth => cmd_smooth(&mut ctx)?,
        Command::Faces => cmd_faces(&mut ctx)?,
        Command::Recognize => cmd_recognize(&mut ctx)?,
        Command::Radon { csv } => cmd_radon(&mut ctx, csv.as_deref())?,
        Command::Suite { all: _, criteria } => cmd_suite(&mut ctx, criteria)?,
    };
    ctx.flush()?;
    Ok(outcome)
}

fn cmd_bj(ctx: &mut Ctx, x: &str, y: &str) -> Result<Outcome, Error> {
    let spec = load_spec(ctx.run.spec.as_deref())?;
    let (xv, yv) = (Vector::parse_list(x, spec.is_exact())?, Vector::parse_list(y, spec.is_exact())?);
    let v = is_bj_orthogonal(&spec, &xv, &yv, &ctx.tol)?;
    let mode = if spec.is_exact() { "exact" } else { "numeric" };
    let orthogonal = v.orthogonal;
    let verdict = json!({"x": xv, "y": yv, "verdict": v});
    ctx.report("bj", Some(&spec), mode, json!({"orthogonal": orthogonal as u8}), vec![verdict]);
    Ok(if orthogonal { Outcome::Ok } else { Outcome::Negative })
}

fn build(ctx: &Ctx, spec: &NormSpec, gamma0: bool) -> Result<(OrthoDigraph, &'static str), Error> {
    let mode = ctx.run.mode.unwrap_or(if spec.is_exact() { Mode::Exact } else { Mode::Sampled });
    let (gm, name) = match mode {
        Mode::Exact => (GraphMode::ExactQuotient, "exact"),
        Mode::Sampled => (GraphMode::Sampled { count: ctx.run.samples, seed: ctx.run.seed }, "sampled"),
    };
    let g = graph::build_orthodigraph(spec, gm, gamma0, &ctx.tol)?;
    if let Some(p) = &ctx.run.dot {
        graph::export_dot(&g, p)?;
    }
    Ok((g, name))
}

fn cmd_graph(ctx: &mut Ctx, gamma0: bool) -> Result<Outcome, Error> {
    let spec = load_spec(ctx.run.spec.as_deref())?;
    let (g, mode) = build(ctx, &spec, gamma0)?;
    let fp = graph::graph_fingerprint(&g)?;
    let vertices: Vec<Value> = g
        .vertices
        .iter()
        .map(|v| json!({"id": v.id, "label": v.label, "representative": v.representative, "smooth": v.smooth, "out": g.out[v.id]}))
        .collect();
    ctx.report(
        "graph",
        Some(&spec),
        mode,
        json!({"vertices": g.len(), "edges": g.edge_count(), "requested": g.requested, "gamma0": g.gamma0}),
        vec![json!({"fingerprint": fp}), json!({"vertices": vertices})],
    );
    Ok(Outcome::Ok)
}

fn cmd_dim(ctx: &mut Ctx) -> Result<Outcome, Error> {
    let spec = load_spec(ctx.run.spec.as_deref())?;
    let (g, mode) = build(ctx, &spec, false)?;
    let d = graph::digraph_dimension(&g)?;
    ctx.report("dim", Some(&spec), mode, json!({"vertices": g.len(), "dim": d.dim}), vec![json!(d)]);
    Ok(Outcome::Ok)
}

fn cmd_smooth(ctx: &mut Ctx) -> Result<Outcome, Error> {
    let spec = load_spec(ctx.run.spec.as_deref())?;
    let (g, mode) = build(ctx, &spec, false)?;
    let smooth = graph::classify_smooth_vertices(&g)?;
    let verdicts = g
        .vertices
        .iter()
        .map(|v| {
            let by_graph = smooth.binary_search(&v.id).is_ok();
            json!({"vertex": v.label, "smooth": by_graph, "agrees": by_graph == v.smooth})
        })
        .collect();
    ctx.report("smooth", Some(&spec), mode, json!({"vertices": g.len(), "smooth": smooth.len()}), verdicts);
    Ok(Outcome::Ok)
}

fn cmd_faces(ctx: &mut Ctx) -> Result<Outcome, Error> {
    let spec = load_spec(ctx.run.spec.as_deref())?;
    let (g, mode) = build(ctx, &spec, false)?;
    let faces = graph::find_maximal_faces(&g)?;
    let verdicts = faces
        .iter()
        .map(|f| json!({"members": f.iter().map(|&i| g.vertices[i].label.clone()).collect::<Vec<_>>()}))
        .collect();
    ctx.report("faces", Some(&spec), mode, json!({"maximal_faces": faces.len()}), verdicts);
    Ok(Outcome::Ok)
}

fn cmd_recognize(ctx: &mut Ctx) -> Result<Outcome, Error> {
    let spec = load_spec(ctx.run.spec.as_deref())?;
    let (g, mode) = build(ctx, &spec, false)?;
    let r = graph::recognize_sup_norm(&g, &ctx.tol)?;
    let verdict = json!({"is_sup_norm": r.is_sup_norm, "count": r.smooth_neighborhood_count, "dim": r.dim});
    ctx.report("recognize", Some(&spec), mode, json!({"vertices": g.len()}), vec![verdict]);
    Ok(Outcome::Ok)
}

fn cmd_radon(ctx: &mut Ctx, csv: Option<&Path>) -> Result<Outcome, Error> {
    let spec = load_spec(ctx.run.spec.as_deref())?;
    if spec.dim() != 2 || spec.is_complex() {
        return Err(Error::Unsupported("radon checks need a real two-dimensional model".into()));
    }
    let mut verdicts = Vec::new();
    let pair = radon::find_mutual_pair_2d(&spec, &ctx.tol)?;
    verdicts.push(json!({"mutual_pair": pair}));
    let sym = radon::verify_radon_symmetry(&spec, ctx.run.samples, ctx.run.seed, 1e-6)?;
    let symmetric = sym.symmetric;
    verdicts.push(json!({"symmetry": sym}));
    verdicts.push(json!({"hilbert_conditions": radon::check_gamma0_hilbert_conditions_real(&spec)?}));
    if let Some(p) = csv {
        radon::day_construction(&spec)?.write_csv(p)?;
    }
    ctx.report("radon", Some(&spec), if spec.is_exact() { "exact" } else { "numeric" }, json!({"symmetric": symmetric}), verdicts);
    Ok(Outcome::Ok)
}

fn cmd_suite(ctx: &mut Ctx, criteria: &[u8]) -> Result<Outcome, Error> {
    let results: Vec<CriterionResult> = if criteria.is_empty() {
        acceptance::run_all(ctx.run.seed)
    } else {
        let mut ids = criteria.to_vec();
        ids.sort_unstable();
        ids.dedup();
        ids.iter()
            .map(|&id| acceptance::run_one(id, ctx.run.seed).ok_or_else(|| Error::Parse(format!("no criterion {id}"))))
            .collect::<Result<_, _>>()?
    };
    let failed = results.iter().filter(|r| !r.passed).count();
    for r in &results {
        // Timing goes to stderr so reports stay byte-identical across runs.
        eprintln!("{}", r.line());
        let verdict = json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail});
        ctx.report("suite", None, "mixed", json!({"criterion": r.id}), vec![verdict]);
    }
    ctx.report("suite", None, "mixed", json!({"run": results.len(), "passed": results.len() - failed, "failed": failed}), Vec::new());
    Ok(if failed == 0 { Outcome::Ok } else { Outcome::Negative })
}
