use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use gradet::invariants::SampleData;
use gradet::matspace::{Graph, Kind, MatrixSpace};
use gradet::multidegree::build_map;
use gradet::rng::derive_seed;
use gradet::Error;
use serde_json::{json, Value};

/// Why a command did not produce a result.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or unreadable input; exit code 2.
    Usage(String),
    /// The computation itself failed; exit code 1.
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidGraph(_)
            | Error::Disconnected
            | Error::Edgeless
            | Error::InvalidSpace(_)
            | Error::InvalidConfig(_)
            | Error::InvalidData(_)
            | Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::Json(_) => Failure::Usage(e.to_string()),
            other => Failure::Compute(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Diagonal,
    Symmetric,
    General,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Diagonal => Kind::Diagonal,
            KindArg::Symmetric => Kind::Symmetric,
            KindArg::General => Kind::General,
        }
    }
}

/// Ways to name a matrix space on the command line.
#[derive(Clone, Debug, Default, Args)]
pub struct SpaceArgs {
    /// Graph file, as JSON `{"vertices": k, "edges": [[a, b], ...]}` or an edge list.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// JSON list of basis matrices with `"p/q"` entries.
    #[arg(long)]
    pub space: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Matrix side.
    #[arg(long)]
    pub n: Option<usize>,
    /// Codimension of a random subspace; the full space when omitted.
    #[arg(long)]
    pub codim: Option<usize>,
}

/// What a graph stands for in a command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphRole {
    /// `L_G`, spanned by incidence vectors.
    Incidence,
    /// `L^G`, symmetric matrices with zeros at non-edges.
    Graphical,
}

/// Random drawings of a space with a vanishing determinant are retried
/// this many times with fresh seeds.
pub const SPACE_REDRAWS: u64 = 5;

pub struct ResolvedSpace {
    pub space: MatrixSpace,
    pub graph: Option<Graph>,
    pub echo: Value,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

pub fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(Graph::parse(&read(path)?)?)
}

impl SpaceArgs {
    pub fn resolve(&self, role: GraphRole, default_kind: Kind, seed: u64) -> Result<ResolvedSpace, Failure> {
        let given = [self.graph.is_some(), self.space.is_some(), self.n.is_some()].iter().filter(|&&b| b).count();
        if given != 1 {
            return Err(Failure::Usage("give exactly one of --graph, --space or --n".into()));
        }
        let kind = self.kind.map(Kind::from).unwrap_or(default_kind);
        if let Some(path) = &self.graph {
            if self.kind.is_some() || self.codim.is_some() {
                return Err(Failure::Usage("--kind and --codim do not apply to --graph".into()));
            }
            let g = load_graph(path)?;
            let space = match role {
                GraphRole::Incidence => MatrixSpace::from_graph_incidence(&g)?,
                GraphRole::Graphical => MatrixSpace::from_graphical_model(&g)?,
            };
            let echo = json!({ "graph": serde_json::from_str::<Value>(&g.to_json()).map_err(Error::from)?, "space": space.label() });
            return Ok(ResolvedSpace { space, graph: Some(g), echo });
        }
        if let Some(path) = &self.space {
            let space = MatrixSpace::from_json(kind, &read(path)?, path.display().to_string())?;
            let echo = json!({ "kind": kind.name(), "basis": space.to_json() });
            return Ok(ResolvedSpace { space, graph: None, echo });
        }
        let n = self.n.expect("checked above");
        if n == 0 {
            return Err(Failure::Usage("--n must be positive".into()));
        }
        let ambient = kind.ambient_dim(n);
        let echo = json!({ "kind": kind.name(), "n": n, "codim": self.codim.unwrap_or(0) });
        let Some(codim) = self.codim.filter(|&c| c > 0) else {
            return Ok(ResolvedSpace { space: MatrixSpace::full(kind, n), graph: None, echo });
        };
        if codim >= ambient {
            return Err(Failure::Usage(format!("--codim must be below the ambient dimension {ambient}")));
        }
        let mut last = None;
        for k in 0..SPACE_REDRAWS {
            let space = MatrixSpace::random(kind, n, ambient - codim, derive_seed(seed, 0x7370_6163 + k))?;
            match build_map(&space, gradet::multidegree::MapTag::GradientOfRestriction) {
                Ok(_) => return Ok(ResolvedSpace { space, graph: None, echo }),
                Err(e @ Error::DegenerateSpace(_)) => last = Some(e),
                Err(e) => return Err(e.into()),
            }
        }
        Err(Failure::Compute(last.expect("at least one draw")))
    }
}

/// Length `n >= 3` cycle, in any labelling and orientation.
pub fn cycle_length(g: &Graph) -> Option<usize> {
    let n = g.nvertices();
    let simple = g.simple_edges().len() == g.nedges();
    (n >= 3 && simple && g.nedges() == n && g.is_connected() && g.degrees().iter().all(|&d| d == 2)).then_some(n)
}

/// Samples from a CSV file, one observation per row; `#` starts a comment.
pub fn load_samples(path: &Path) -> Result<SampleData, Failure> {
    let text = read(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let row = rec
            .iter()
            .map(|v| v.parse::<f64>().map_err(|e| Failure::Usage(format!("row {}: `{v}`: {e}", i + 1))))
            .collect::<Result<Vec<f64>, Failure>>()?;
        rows.push(row);
    }
    Ok(SampleData::from_samples(rows)?)
}

/// A covariance matrix given inline as JSON or as a path to a JSON file.
pub fn load_covariance(arg: &str) -> Result<SampleData, Failure> {
    let text = if arg.trim_start().starts_with('[') { arg.to_string() } else { read(Path::new(arg))? };
    let m: Vec<Vec<f64>> = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("covariance: {e}")))?;
    Ok(SampleData::from_covariance(m)?)
}
