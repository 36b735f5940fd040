//! Command-line front end: argument parsing, JSON reports, and the `verify`
//! suite that replays the reference examples end to end.
//!
//! Results go to stdout as one JSON [`RunReport`]; diagnostics go to
//! stderr. Exit codes: 0 success, 1 computational failure, 2 usage error.

mod inputs;
mod report;
pub mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use gradet::graphcomb::{chromatic, multidegree_via_huh, reduced_chromatic};
use gradet::invariants::{
    cycle_model_degree_formula, euler_characteristics, phi, quadric_tangency_count, signed_terms, MleSolver,
};
use gradet::matspace::Kind;
use gradet::multidegree::{build_map, ml_degree, model_degree, multidegree, restricted_determinant, Engine, MapTag};
use gradet::tracker::{run_seeds, IsolatedCount, TrackerConfig};
use serde_json::{json, Value};

pub use inputs::{Failure, GraphRole, KindArg, SpaceArgs};
pub use report::{ConjectureRef, RunReport, Status};
pub use verify::{verify_paper_suite, VerifyOptions};

/// Seed counts agree across this many derived seeds before a number is reported.
pub const REPEATS: usize = 3;

#[derive(Debug, Parser)]
#[command(name = "gradet", version, about = "Multidegrees of the gradient-of-determinant map and their invariants")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Master seed; each tracker run derives its own seeds from it.
    #[arg(long, global = true, default_value_t = TrackerConfig::default().seed)]
    seed: u64,
    /// Print the report on a single line.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock timings (the report is then no longer reproducible byte for byte).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MapArg {
    Restricted,
    Lower,
}

impl From<MapArg> for MapTag {
    fn from(m: MapArg) -> MapTag {
        match m {
            MapArg::Restricted => MapTag::RestrictedGradient,
            MapArg::Lower => MapTag::GradientOfRestriction,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Numeric,
    Combinatorial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Paper,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chromatic and reduced chromatic polynomials of a graph (coefficients from k^0 up).
    Chromatic {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Multidegree of the graph of one of the two gradient maps. A graph stands for L_G.
    Multidegree {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value = "restricted")]
        map: MapArg,
        /// `combinatorial` reads the sequence off the chromatic polynomial (graphs only).
        #[arg(long, value_enum, default_value = "numeric")]
        engine: EngineArg,
        /// Also print the restricted determinant in canonical text form.
        #[arg(long)]
        dump_poly: bool,
    },
    /// Euler characteristics of the determinantal hypersurface and its complement.
    Euler {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Degree of a linear concentration model. A graph stands for its graphical model.
    ModelDegree {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// ML-degree of a linear concentration model. A graph stands for its graphical model.
    MlDegree {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Degree of a general codimension-a model of symmetric n x n matrices.
    Phi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        codim: usize,
        /// Allow ten times more homotopy paths.
        #[arg(long)]
        slow: bool,
    },
    /// Quadrics in n variables through `points` general points and tangent to the rest in general hyperplanes.
    QuadricCount {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        points: usize,
    },
    /// Maximum likelihood fit of a linear concentration model.
    MleFit {
        #[command(flatten)]
        space: SpaceArgs,
        /// CSV file with one mean-centred observation per row.
        #[arg(long, conflicts_with = "covariance")]
        samples: Option<PathBuf>,
        /// Sample covariance as inline JSON (`[[1,0],[0,1]]`) or a JSON file path.
        #[arg(long)]
        covariance: Option<String>,
    },
    /// Replays the reference examples and cross-checks; stops at the first discrepancy.
    Verify {
        #[arg(long, value_enum, default_value = "paper")]
        suite: Suite,
        /// Skip the 4-cycle symmetric runs, which take several minutes.
        #[arg(long)]
        skip_slow: bool,
        /// Override the endpoint residual tolerance (for negative controls).
        #[arg(long, hide = true)]
        newton_tol: Option<f64>,
    },
}

/// What `main` prints and returns.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Option<String>,
    pub stderr: Vec<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: Some(text), stderr: vec![] }
            } else {
                Outcome { code, stdout: None, stderr: vec![text] }
            };
        }
    };
    let started = Instant::now();
    let cfg = TrackerConfig::default().with_seed(cli.seed);
    let name = command_name(&cli.command);
    let mut report = RunReport::new(name, Value::Null);
    let outcome = execute(&cli.command, &cfg, cli.timings, &mut report);
    if cli.timings {
        let timings = report.timings.get_or_insert_with(BTreeMap::new);
        timings.insert("total_s".into(), started.elapsed().as_secs_f64());
    }
    match outcome {
        Ok(()) => {
            let code = if report.status == Status::Ok { 0 } else { 1 };
            let stderr = report.warnings.iter().map(|w| format!("warning: {w}")).collect();
            Outcome { code, stdout: Some(report.to_json(cli.json)), stderr }
        }
        Err(Failure::Usage(msg)) => Outcome { code: 2, stdout: None, stderr: vec![format!("error: {msg}")] },
        Err(Failure::Compute(e)) => {
            report.status = Status::Failed;
            report.error = Some(e.to_string());
            Outcome { code: 1, stdout: Some(report.to_json(cli.json)), stderr: vec![format!("error: {e}")] }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Chromatic { .. } => "chromatic",
        Command::Multidegree { .. } => "multidegree",
        Command::Euler { .. } => "euler",
        Command::ModelDegree { .. } => "model-degree",
        Command::MlDegree { .. } => "ml-degree",
        Command::Phi { .. } => "phi",
        Command::QuadricCount { .. } => "quadric-count",
        Command::MleFit { .. } => "mle-fit",
        Command::Verify { .. } => "verify",
    }
}

fn count_json(c: &IsolatedCount) -> Value {
    json!({ "count": c.count, "paths_tracked": c.paths_tracked, "excluded_fraction": c.excluded_fraction })
}

fn numeric_seeds(cfg: &TrackerConfig) -> Vec<u64> {
    std::iter::once(cfg.seed).chain(run_seeds(cfg.seed, REPEATS)).collect()
}

fn execute(cmd: &Command, cfg: &TrackerConfig, timings: bool, r: &mut RunReport) -> Result<(), Failure> {
    match cmd {
        Command::Chromatic { graph } => {
            let g = inputs::load_graph(graph)?;
            r.inputs = json!({ "graph": serde_json::from_str::<Value>(&g.to_json()).map_err(gradet::Error::from)? });
            let chi = chromatic(&g);
            let mut result = json!({ "chromatic": chi.coeffs() });
            if g.nedges() > 0 {
                let reduced = reduced_chromatic(&g)?;
                result["reduced"] = json!(reduced.coeffs());
                result["euler_complement"] = json!(reduced.eval(1));
                if g.is_connected() {
                    result["multidegree"] = json!(multidegree_via_huh(&g)?.entries());
                }
            }
            r.engine = vec![Engine::Combinatorial];
            r.result = result;
        }
        Command::Multidegree { space, map, engine, dump_poly } => {
            let s = space.resolve(GraphRole::Incidence, Kind::General, cfg.seed)?;
            r.inputs = json!({ "space": s.echo, "map": MapTag::from(*map).name(), "seed": cfg.seed });
            let seq = match engine {
                EngineArg::Numeric => {
                    r.seeds = numeric_seeds(cfg);
                    multidegree(&build_map(&s.space, (*map).into())?, cfg, REPEATS)?
                }
                EngineArg::Combinatorial => {
                    let g = s.graph.as_ref().ok_or_else(|| Failure::Usage("the combinatorial engine needs --graph".into()))?;
                    if *map != MapArg::Restricted {
                        return Err(Failure::Usage("the combinatorial engine computes the restricted map".into()));
                    }
                    multidegree_via_huh(g)?
                }
            };
            r.engine = vec![seq.engine()];
            r.warnings.extend(seq.warnings().iter().cloned());
            r.result = json!({
                "entries": seq.entries(),
                "map": seq.map().name(),
                "dim": seq.dim(),
                "seeds": seq.seeds(),
                "paths_tracked": seq.paths_tracked(),
            });
            if *dump_poly {
                r.result["determinant"] = json!(restricted_determinant(&s.space).to_string());
            }
        }
        Command::Euler { space } => {
            let s = space.resolve(GraphRole::Incidence, Kind::General, cfg.seed)?;
            r.inputs = json!({ "space": s.echo, "seed": cfg.seed });
            r.seeds = numeric_seeds(cfg);
            let e = euler_characteristics(&s.space, cfg, REPEATS)?;
            r.engine = vec![Engine::Numeric];
            r.warnings.extend(e.sequence.warnings().iter().cloned());
            r.result = json!({
                "sequence": e.sequence.entries(),
                "signed_terms": signed_terms(&e.sequence),
                "complement": e.complement,
                "hypersurface": e.hypersurface,
            });
        }
        Command::ModelDegree { space } | Command::MlDegree { space } => {
            let s = space.resolve(GraphRole::Graphical, Kind::Symmetric, cfg.seed)?;
            r.inputs = json!({ "space": s.echo, "seed": cfg.seed });
            r.seeds = numeric_seeds(cfg);
            r.engine = vec![Engine::Numeric];
            let is_model = matches!(cmd, Command::ModelDegree { .. });
            let c = if is_model { model_degree(&s.space, cfg, REPEATS)? } else { ml_degree(&s.space, cfg, REPEATS)? };
            let mut result = count_json(&c);
            if let Some(n) = s.graph.as_ref().and_then(inputs::cycle_length) {
                if is_model {
                    let formula = cycle_model_degree_formula(n as u32)?.to_string();
                    result["formula"] = json!(formula);
                    result["agrees_with_formula"] = json!(formula == c.count.to_string());
                    r.engine.push(Engine::Formula);
                    if formula != c.count.to_string() {
                        r.status = Status::Failed;
                    }
                } else {
                    r.conjecture_refs.push(ConjectureRef::cycle_ml_degree(n, Some(c.count))?);
                }
            }
            r.result = result;
        }
        Command::Phi { n, codim, slow } => {
            r.inputs = json!({ "n": n, "codim": codim, "slow": slow, "seed": cfg.seed });
            r.seeds = numeric_seeds(cfg);
            r.engine = vec![Engine::Numeric];
            r.result = count_json(&phi(*n, *codim, cfg, *slow)?);
        }
        Command::QuadricCount { n, points } => {
            r.inputs = json!({ "n": n, "points": points, "seed": cfg.seed });
            r.seeds = numeric_seeds(cfg);
            r.engine = vec![Engine::Numeric];
            let mut result = count_json(&quadric_tangency_count(*n, *points, cfg)?);
            result["tangent_hyperplanes"] = json!(Kind::Symmetric.ambient_dim(*n) - 1 - points);
            r.result = result;
        }
        Command::MleFit { space, samples, covariance } => {
            let s = space.resolve(GraphRole::Graphical, Kind::Symmetric, cfg.seed)?;
            let data = match (samples, covariance) {
                (Some(p), None) => inputs::load_samples(p)?,
                (None, Some(c)) => inputs::load_covariance(c)?,
                _ => return Err(Failure::Usage("give one of --samples or --covariance".into())),
            };
            r.inputs = json!({ "space": s.echo, "covariance": data.covariance(), "seed": cfg.seed });
            r.seeds = numeric_seeds(cfg);
            r.engine = vec![Engine::Numeric];
            let fit = MleSolver::new(&s.space, cfg)?.fit(&data)?;
            if let Some(n) = s.graph.as_ref().and_then(inputs::cycle_length) {
                r.conjecture_refs.push(ConjectureRef::cycle_ml_degree(n, Some(fit.count))?);
            }
            r.warnings.extend(fit.warnings.iter().cloned());
            r.result = serde_json::to_value(&fit).map_err(gradet::Error::from)?;
        }
        Command::Verify { suite: Suite::Paper, skip_slow, newton_tol } => {
            let mut vcfg = cfg.clone();
            if let Some(t) = newton_tol {
                vcfg.newton_tol = *t;
            }
            vcfg.validate()?;
            let options = VerifyOptions { skip_slow: *skip_slow, timings };
            *r = verify_paper_suite(&vcfg, &options);
        }
    }
    Ok(())
}
