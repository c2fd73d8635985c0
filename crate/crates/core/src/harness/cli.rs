use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use super::converge::{run_converge, ConvergenceRow, ExperimentConfig, CONVERGE_HEADER};
use super::io::{
    format_g17, graph_from_json, graph_to_json, graphon_from_json, graphon_to_json, theta_from_csv,
    theta_to_csv, to_json,
};
use crate::error::{bail, Error, Result};
use crate::families::{self, Family};
use crate::fields::{LabelModel, PartitionSpec};
use crate::functionals::{kkt_residual, limit_j};
use crate::graph::Motif;
use crate::graphon::{
    cut_gap, cut_norm, cut_norm_forms, hom_density_graph, hom_density_graphon, AnalyticGraphon, CutNormMode,
    Graphon, Kernel, StepGraphon,
};
use crate::solvers::{
    brute_bisection, local_search_partition, minimize_j, sharpen_plateau, ContinuumMethod, MinimizeOptions,
    SolveReport,
};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "GRAPHCUT_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "graphcut",
    version,
    about = "Cut functionals on dense graph sequences and their graphon limits"
)]
struct Cli {
    /// Master seed [default: 0]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Result format [default: json, csv for converge]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a family member (graph file)
    Gen(GenArgs),
    /// Write a graphon file
    Graphon(GraphonArgs),
    /// Cut norm of a graphon or of the difference of two
    Cutnorm(CutnormArgs),
    /// Homomorphism density of a small motif
    Homdensity(HomArgs),
    /// Minimal cut of a graph under label-size constraints
    SolveDiscrete(SolveDiscreteArgs),
    /// Minimize the limit functional on a grid
    SolveLimit(SolveLimitArgs),
    /// Stationarity residual of a two-label field
    Kkt(KktArgs),
    /// Discrete versus continuum minima along a family
    Converge(ConvergeArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GenFamily {
    Complete,
    Blocks,
    Bipartite,
    Halfgraph,
    Wrandom,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: GenFamily,
    /// Node count
    #[arg(long)]
    n: usize,
    /// Block widths for `blocks`
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// Group fraction for `bipartite`
    #[arg(long)]
    gamma: Option<f64>,
    /// Kernel file for `wrandom`
    #[arg(long)]
    graphon: Option<PathBuf>,
    /// Also write the family's limit graphon here
    #[arg(long)]
    limit: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GraphonKind {
    Constant,
    Halfgraph,
    Blocks,
    Bipartite,
    Checkerboard,
    Graph,
}

#[derive(Args, Debug)]
struct GraphonArgs {
    #[arg(long, value_enum)]
    kind: GraphonKind,
    /// Value of the constant kernel
    #[arg(long)]
    value: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Checkerboard order (2n blocks)
    #[arg(long)]
    n: Option<usize>,
    /// Graph file for `graph` (its step graphon)
    #[arg(long)]
    from_graph: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CutMode {
    Exact,
    Heuristic,
}

#[derive(Args, Debug)]
struct CutnormArgs {
    /// Graphon or graph file
    #[arg(long)]
    a: PathBuf,
    /// Subtracted from `a` when given
    #[arg(long)]
    b: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: CutMode,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    /// Also report the complement, disjoint and functional forms
    #[arg(long)]
    forms: bool,
}

#[derive(Args, Debug)]
struct HomArgs {
    /// edge, path3, triangle or cycle4
    #[arg(long)]
    motif: String,
    #[arg(long, conflicts_with = "graphon", required_unless_present = "graphon")]
    graph: Option<PathBuf>,
    #[arg(long)]
    graphon: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum DiscreteMethod {
    Brute,
    Swap,
}

#[derive(Args, Debug)]
struct SolveDiscreteArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "brute")]
    method: DiscreteMethod,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Label count: 2 is the spin model, more the Potts model
    #[arg(long, default_value_t = 2)]
    labels: usize,
    /// Label masses; sizes follow by largest remainder
    #[arg(long, value_delimiter = ',')]
    masses: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct SolveLimitArgs {
    #[arg(long)]
    graphon: PathBuf,
    #[arg(long, default_value_t = 48)]
    grid: usize,
    #[arg(long, default_value_t = 2)]
    labels: usize,
    #[arg(long, value_delimiter = ',')]
    masses: Option<Vec<f64>>,
    /// pgd or frank_wolfe
    #[arg(long, default_value = "pgd")]
    method: ContinuumMethod,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 5000)]
    max_iter: usize,
    /// Skip the rounding and cell-swap pass
    #[arg(long)]
    no_polish: bool,
    /// Apply plateau sharpening to the result (half graph)
    #[arg(long)]
    sharpen: bool,
    /// Write the minimizing field as CSV here
    #[arg(long)]
    theta_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct KktArgs {
    #[arg(long)]
    graphon: PathBuf,
    /// θ field CSV
    #[arg(long)]
    theta: PathBuf,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    /// JSON experiment config; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// complete, blocks, bipartite or halfgraph
    #[arg(long)]
    family: Option<String>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    labels: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    masses: Option<Vec<f64>>,
    #[arg(long)]
    method: Option<ContinuumMethod>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Fill the seconds column with wall time
    #[arg(long)]
    timing: bool,
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) | Error::Input(_) => 2,
        Error::Capacity(_) => 3,
        Error::Infeasible(_) => 4,
        Error::Structural(_) | Error::Io(_) | Error::Json(_) => 1,
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit status. Diagnostics go to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("graphcut: {e}");
        return exit_code(&e);
    }
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("graphcut: {e}");
            exit_code(&e)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize =
        raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
            Error::Parameter(format!("{THREADS_ENV} must be a positive integer, got '{raw}'"))
        })?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

fn model_for(labels: usize) -> Result<LabelModel> {
    match labels {
        2 => Ok(LabelModel::spin()),
        k if k > 2 => LabelModel::potts(k),
        k => bail!(Parameter, "--labels must be at least 2, got {k}"),
    }
}

fn masses_for(masses: Option<Vec<f64>>, labels: usize) -> Result<Vec<f64>> {
    let masses = masses.unwrap_or_else(|| vec![1.0 / labels as f64; labels]);
    if masses.len() != labels {
        bail!(Parameter, "--masses has {} values for {labels} labels", masses.len());
    }
    Ok(masses)
}

fn dispatch(cli: Cli) -> Result<()> {
    let seed = cli.seed.unwrap_or(0);
    let format = cli.format;
    let out = cli.out;
    let json_only = |what: &str| -> Result<()> {
        if format == Some(Format::Csv) {
            bail!(Parameter, "{what} writes JSON files only");
        }
        Ok(())
    };
    match cli.command {
        Command::Gen(a) => {
            json_only("gen")?;
            let need = |v: Option<f64>, name: &str| {
                v.ok_or_else(|| Error::Parameter(format!("--{name} is required for this family")))
            };
            let (graph, limit) = match a.family {
                GenFamily::Complete => split(families::complete(a.n)?),
                GenFamily::Blocks => {
                    let lambda =
                        a.lambda.ok_or_else(|| Error::Parameter("--lambda is required for blocks".into()))?;
                    split(families::block_family(&lambda, a.n)?)
                }
                GenFamily::Bipartite => split(families::bipartite(need(a.gamma, "gamma")?, a.n)?),
                GenFamily::Halfgraph => split(families::halfgraph(a.n)?),
                GenFamily::Wrandom => {
                    let path = a
                        .graphon
                        .ok_or_else(|| Error::Parameter("--graphon is required for wrandom".into()))?;
                    let w = graphon_from_json(&read(&path)?)?;
                    (families::w_random(&w, a.n, seed)?, w)
                }
            };
            if let Some(path) = a.limit {
                fs::write(path, graphon_to_json(&limit)?)?;
            }
            emit(&out, &graph_to_json(&graph)?)
        }
        Command::Graphon(a) => {
            json_only("graphon")?;
            let w: Graphon = match a.kind {
                GraphonKind::Constant => AnalyticGraphon::constant(a.value.unwrap_or(1.0))?.into(),
                GraphonKind::Halfgraph => AnalyticGraphon::halfgraph().into(),
                GraphonKind::Blocks => AnalyticGraphon::block_family(
                    a.lambda.ok_or_else(|| Error::Parameter("--lambda is required for blocks".into()))?,
                )?
                .into(),
                GraphonKind::Bipartite => AnalyticGraphon::bipartite(
                    a.gamma.ok_or_else(|| Error::Parameter("--gamma is required for bipartite".into()))?,
                )?
                .into(),
                GraphonKind::Checkerboard => families::checkerboard(a.n.unwrap_or(1))?.into(),
                GraphonKind::Graph => {
                    let path = a
                        .from_graph
                        .ok_or_else(|| Error::Parameter("--from-graph is required for graph".into()))?;
                    StepGraphon::from_graph(&graph_from_json(&read(&path)?)?).into()
                }
            };
            emit(&out, &graphon_to_json(&w)?)
        }
        Command::Cutnorm(a) => cutnorm_cmd(a, seed, format, &out),
        Command::Homdensity(a) => {
            let motif = Motif::by_name(&a.motif)?;
            let (value, exact) = match (a.graph, a.graphon) {
                (Some(p), _) => {
                    let r = hom_density_graph(&motif, &graph_from_json(&read(&p)?)?)?;
                    (*r.numer() as f64 / *r.denom() as f64, Some(format!("{}/{}", r.numer(), r.denom())))
                }
                (None, Some(p)) => {
                    let w = graphon_from_json(&read(&p)?)?;
                    let step = step_of(&w)?;
                    (hom_density_graphon(&motif, &step)?, None)
                }
                (None, None) => bail!(Parameter, "one of --graph or --graphon is required"),
            };
            match format.unwrap_or(Format::Json) {
                Format::Json => {
                    emit(&out, &to_json(&json!({ "motif": a.motif, "value": value, "exact": exact }))?)
                }
                Format::Csv => {
                    let mut text = csv_line(&["motif".into(), "value".into(), "exact".into()]);
                    text += &csv_line(&[a.motif, format_g17(value), exact.unwrap_or_default()]);
                    emit(&out, &text)
                }
            }
        }
        Command::SolveDiscrete(a) => {
            let g = graph_from_json(&read(&a.graph)?)?;
            let report = match a.method {
                DiscreteMethod::Brute => {
                    if a.labels != 2 || a.masses.as_ref().is_some_and(|m| m != &[0.5, 0.5]) {
                        bail!(Parameter, "brute force solves the balanced two-label problem only");
                    }
                    brute_bisection(&g)?
                }
                DiscreteMethod::Swap => {
                    let model = model_for(a.labels)?;
                    let masses = masses_for(a.masses, a.labels)?;
                    let spec = PartitionSpec::from_masses(masses, g.n())?;
                    local_search_partition(&g, &spec, &model, seed, a.restarts)?
                }
            };
            emit_report(&report, format, &out)
        }
        Command::SolveLimit(a) => {
            let w = graphon_from_json(&read(&a.graphon)?)?;
            let model = model_for(a.labels)?;
            let masses = masses_for(a.masses, a.labels)?;
            let opts = MinimizeOptions {
                method: a.method,
                seed,
                restarts: a.restarts,
                max_iter: a.max_iter,
                polish: !a.no_polish,
            };
            let mut report = minimize_j(&w, &model, &masses, a.grid, &opts)?;
            if a.sharpen {
                let theta = report.theta().expect("continuum report")?;
                let s = sharpen_plateau(&theta)?;
                if s.sharpened {
                    report.value = s.j_after;
                    report.argument = crate::solvers::Argument::Theta(
                        (0..s.field.cells()).map(|c| s.field.row(c).to_vec()).collect(),
                    );
                }
            }
            if let Some(path) = &a.theta_out {
                let theta = report.theta().expect("continuum report")?;
                fs::write(path, theta_to_csv(&theta)?)?;
            }
            emit_report(&report, format, &out)
        }
        Command::Kkt(a) => {
            let w = graphon_from_json(&read(&a.graphon)?)?;
            let file =
                fs::File::open(&a.theta).map_err(|e| Error::Input(format!("{}: {e}", a.theta.display())))?;
            let theta = theta_from_csv(file)?;
            let r = kkt_residual(&w, &theta)?;
            let j = limit_j(&w, &theta, &LabelModel::spin())?;
            match format.unwrap_or(Format::Json) {
                Format::Json => emit(
                    &out,
                    &to_json(&json!({
                        "residual": r.residual,
                        "multiplier": r.multiplier,
                        "interior": r.interior.len(),
                        "vacuous": r.is_vacuous(),
                        "J": j,
                    }))?,
                ),
                Format::Csv => {
                    let mut text = csv_line(&["residual,multiplier,interior,J".into()]);
                    text += &csv_line(&[
                        format_g17(r.residual),
                        r.multiplier.map(format_g17).unwrap_or_default(),
                        r.interior.len().to_string(),
                        format_g17(j),
                    ]);
                    emit(&out, &text)
                }
            }
        }
        Command::Converge(a) => converge_cmd(a, cli.seed, format, &out),
    }
}

fn split(f: families::FamilyInstance) -> (crate::graph::Graph, Graphon) {
    (f.graph, f.limit)
}

fn step_of(w: &Graphon) -> Result<StepGraphon> {
    match w {
        Graphon::Step(s) => Ok(s.clone()),
        Graphon::Analytic(a) => {
            a.to_step().ok_or_else(|| Error::Parameter("this kernel is not a step function".into()))
        }
    }
}

/// Maximal intervals covered by the blocks with weight 1.
fn intervals(w: &StepGraphon, pick: &[f64]) -> Vec<[f64; 2]> {
    let mut out: Vec<[f64; 2]> = Vec::new();
    for (b, &p) in w.bounds().windows(2).zip(pick) {
        if p > 0.5 {
            match out.last_mut() {
                Some(last) if last[1] == b[0] => last[1] = b[1],
                _ => out.push([b[0], b[1]]),
            }
        }
    }
    out
}

fn cutnorm_cmd(a: CutnormArgs, seed: u64, format: Option<Format>, out: &Option<PathBuf>) -> Result<()> {
    let wa = graphon_from_json(&read(&a.a)?)?;
    let wb = a.b.as_ref().map(|p| read(p).and_then(|t| graphon_from_json(&t))).transpose()?;
    let mode = match a.mode {
        CutMode::Exact => CutNormMode::Exact,
        CutMode::Heuristic => CutNormMode::Heuristic { restarts: a.restarts, seed },
    };
    let step_a = step_of(&wa)?;
    let (diff, limit) = match &wb {
        None => (Some(step_a.clone()), None),
        Some(b) => match b {
            Graphon::Step(s) => (Some(step_a.sub(s)), None),
            Graphon::Analytic(an) => match an.to_step() {
                Some(s) => (Some(step_a.sub(&s)), None),
                None => (None, Some(b)),
            },
        },
    };
    let mut result = match (&diff, limit) {
        (Some(d), _) => {
            let c = cut_norm(d, mode)?;
            json!({
                "value": c.value,
                "exact": c.exact,
                "s": intervals(d, &c.s),
                "t": intervals(d, &c.t),
            })
        }
        (None, Some(limit)) => {
            let g = cut_gap(&step_a, limit, a.restarts, seed)?;
            json!({
                "value": g.value,
                "exact": g.exact,
                "s": intervals(&step_a, &g.s),
                "t": intervals(&step_a, &g.t),
            })
        }
        (None, None) => unreachable!(),
    };
    if a.forms {
        let d = diff.ok_or_else(|| Error::Parameter("--forms needs step-function kernels".into()))?;
        if !d.is_w0() {
            eprintln!("graphcut: note: the complement and disjoint forms differ from the cut norm on signed kernels");
        }
        let f = cut_norm_forms(&d)?;
        result["forms"] = json!({
            "rectangles": f.rectangles,
            "complement": f.complement,
            "disjoint": f.disjoint,
            "functional": f.functional,
        });
    }
    match format.unwrap_or(Format::Json) {
        Format::Json => emit(out, &to_json(&result)?),
        Format::Csv => {
            let mut text = csv_line(&["value".into(), "exact".into()]);
            text += &csv_line(&[
                format_g17(result["value"].as_f64().unwrap_or(f64::NAN)),
                result["exact"].to_string(),
            ]);
            emit(out, &text)
        }
    }
}

fn emit_report(report: &SolveReport, format: Option<Format>, out: &Option<PathBuf>) -> Result<()> {
    match format.unwrap_or(Format::Json) {
        Format::Json => emit(out, &to_json(report)?),
        Format::Csv => {
            let mut text = csv_line(
                &["value", "method", "seed", "restarts", "iterations", "residual"].map(String::from),
            );
            text += &csv_line(&[
                format_g17(report.value),
                report.method.clone(),
                report.seed.to_string(),
                report.restarts.to_string(),
                report.iterations.to_string(),
                report.residual.map(format_g17).unwrap_or_default(),
            ]);
            emit(out, &text)
        }
    }
}

fn converge_cmd(
    a: ConvergeArgs,
    seed: Option<u64>,
    format: Option<Format>,
    out: &Option<PathBuf>,
) -> Result<()> {
    let mut cfg = match &a.config {
        Some(path) => ExperimentConfig::from_json(&read(path)?)?,
        None => {
            if a.family.is_none() {
                bail!(Parameter, "--family or --config is required");
            }
            let n = a.n.clone().ok_or_else(|| Error::Parameter("--n or --config is required".into()))?;
            ExperimentConfig::from_json(&serde_json::to_string(&json!({ "family": "complete", "n": n }))?)?
        }
    };
    if let Some(name) = &a.family {
        cfg.family = match name.as_str() {
            "complete" => Family::Complete,
            "halfgraph" => Family::Halfgraph,
            "bipartite" => Family::Bipartite {
                gamma: a.gamma.ok_or_else(|| Error::Parameter("--gamma is required for bipartite".into()))?,
            },
            "blocks" => Family::Blocks {
                lambda: a
                    .lambda
                    .clone()
                    .ok_or_else(|| Error::Parameter("--lambda is required for blocks".into()))?,
            },
            other => bail!(Parameter, "unknown family '{other}'"),
        };
    } else {
        match (&mut cfg.family, a.gamma, &a.lambda) {
            (Family::Bipartite { gamma }, Some(g), _) => *gamma = g,
            (Family::Blocks { lambda }, _, Some(l)) => *lambda = l.clone(),
            _ => {}
        }
    }
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if let Some(v) = a.grid {
        cfg.grid = v;
    }
    if let Some(v) = a.labels {
        cfg.labels = v;
        if a.masses.is_none() {
            cfg.masses = vec![1.0 / v as f64; v];
        }
    }
    if let Some(v) = a.masses {
        cfg.masses = v;
    }
    if let Some(v) = a.method {
        cfg.method = v;
    }
    if let Some(v) = a.restarts {
        cfg.restarts = v;
    }
    if let Some(v) = seed {
        cfg.seed = v;
    }
    if a.timing {
        cfg.timing = true;
    }
    if out.is_some() {
        cfg.out = out.clone();
    }

    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let sink: Box<dyn Write> = match &cfg.out {
                Some(path) => Box::new(fs::File::create(path)?),
                None => Box::new(io::stdout().lock()),
            };
            run_converge(&cfg, sink)?;
            Ok(())
        }
        Format::Json => {
            let rows = run_converge(&cfg, io::sink())?;
            let rows: Vec<_> = rows.iter().map(row_json).collect();
            let text = to_json(&rows)?;
            match &cfg.out {
                Some(path) => Ok(fs::write(path, text)?),
                None => emit(&None, &text),
            }
        }
    }
}

fn row_json(r: &ConvergenceRow) -> impl Serialize {
    let mut obj = serde_json::Map::new();
    obj.insert(CONVERGE_HEADER[0].into(), json!(r.n));
    obj.insert(CONVERGE_HEADER[1].into(), json!(r.f_n));
    obj.insert(CONVERGE_HEADER[2].into(), json!(r.f_exact));
    obj.insert(CONVERGE_HEADER[3].into(), json!(r.j_star));
    obj.insert(CONVERGE_HEADER[4].into(), json!(r.gap));
    obj.insert(CONVERGE_HEADER[5].into(), json!(r.cutnorm));
    obj.insert(CONVERGE_HEADER[6].into(), json!(r.cutnorm_exact));
    obj.insert(CONVERGE_HEADER[7].into(), json!(r.seconds));
    serde_json::Value::Object(obj)
}
