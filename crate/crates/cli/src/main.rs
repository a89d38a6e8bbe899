use std::error::Error;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ecsearch::essential::{class_members, Violation};
use ecsearch::neighbourhood::{inclusion_boundary, EnumerationLimits, Neighbour, Side, SubsetCap};
use ecsearch::search::{hill_climb, Certificate, SearchConfig, Start};
use ecsearch::{
    essentialize, format_graph, parse_graph, validate_essential, Dataset, EssentialGraph, Metric, MixedGraph,
    NamedGraph, Scorer, VStructure,
};
use serde::Serialize;

mod oracle_cmd;

type CliResult<T> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(
    name = "ecsearch",
    version,
    about = "Search over Markov equivalence classes of Bayesian networks"
)]
struct Cli {
    /// Worker threads for neighbourhood enumeration and scoring.
    #[arg(long, global = true, env = "ECSEARCH_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn an essential graph from data by greedy hill climbing.
    Learn(LearnArgs),
    /// List the inclusion boundary neighbours of an essential graph.
    Neighbours(NeighboursArgs),
    /// Print the essential graph of a DAG.
    Essentialize { graph: PathBuf },
    /// Check that a graph is an essential graph.
    Validate { graph: PathBuf },
    /// Print the DAGs represented by an essential graph.
    Members {
        graph: PathBuf,
        /// Stop after this many members.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Score a DAG or essential graph against data.
    Score {
        graph: PathBuf,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Brute-force checks on all graphs of a given size.
    #[command(subcommand)]
    Oracle(oracle_cmd::OracleCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoreKind {
    Bic,
    Bdeu,
}

#[derive(Args)]
struct DataArgs {
    /// CSV file, first row holding the variable names.
    #[arg(long, required = true)]
    data: PathBuf,
    #[arg(long, value_enum, default_value = "bdeu")]
    score: ScoreKind,
    /// Equivalent sample size for BDeu.
    #[arg(long, default_value_t = 1.0)]
    ess: f64,
    /// Comma-separated arities overriding the ones inferred from the data.
    #[arg(long, value_delimiter = ',')]
    arity: Option<Vec<usize>>,
}

impl DataArgs {
    fn metric(&self) -> CliResult<Metric> {
        Ok(match self.score {
            ScoreKind::Bic => Metric::Bic,
            ScoreKind::Bdeu => Metric::bdeu(self.ess)?,
        })
    }

    fn load(&self) -> CliResult<Dataset> {
        let file = File::open(&self.data).map_err(|e| format!("{}: {e}", self.data.display()))?;
        Ok(Dataset::from_csv(file, self.arity.as_deref())?)
    }
}

#[derive(Args)]
struct LearnArgs {
    #[command(flatten)]
    data: DataArgs,
    /// `empty`, `complete` or a graph file.
    #[arg(long, default_value = "empty")]
    start: String,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    /// Cap on complete subsets enumerated per vertex pair.
    #[arg(long)]
    max_subsets: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random restarts after the first climb.
    #[arg(long, default_value_t = 0)]
    restarts: usize,
    /// Write the learned graph here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the search trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct NeighboursArgs {
    graph: PathBuf,
    /// One JSON record per neighbour.
    #[arg(long)]
    json: bool,
    /// Score each neighbour's delta against this CSV.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "bdeu")]
    score: ScoreKind,
    #[arg(long, default_value_t = 1.0)]
    ess: f64,
    #[arg(long, value_delimiter = ',')]
    arity: Option<Vec<usize>>,
    #[arg(long)]
    max_subsets: Option<usize>,
    /// Print a truncated neighbourhood instead of failing.
    #[arg(long)]
    partial_ok: bool,
}

fn limits(max_subsets: Option<usize>) -> EnumerationLimits {
    EnumerationLimits {
        max_subsets_per_pair: max_subsets.map_or(SubsetCap::Auto, SubsetCap::AtMost),
    }
}

fn read_graph(path: &Path) -> CliResult<NamedGraph> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn read_essential(path: &Path) -> CliResult<(Vec<String>, EssentialGraph)> {
    let NamedGraph { names, graph } = read_graph(path)?;
    match EssentialGraph::new(graph) {
        Ok(e) => Ok((names, e)),
        Err(v) => Err(format!("{}: not an essential graph: {}", path.display(), describe(&v, &names)).into()),
    }
}

fn describe(v: &Violation, names: &[String]) -> String {
    let list = |vs: &[usize]| vs.iter().map(|&v| names[v].as_str()).collect::<Vec<_>>().join(", ");
    match v {
        Violation::DirectedCycle { cycle } => format!("directed cycle through {}", list(cycle)),
        Violation::NonChordalComponent { component } => {
            format!("chain component {{{}}} is not chordal", list(component))
        }
        Violation::ArrowLine { a, b, c } => format!("induced {} -> {} -- {}", names[*a], names[*b], names[*c]),
        Violation::UnprotectedArrow { a, b } => {
            format!("arrow {} -> {} is not strongly protected", names[*a], names[*b])
        }
    }
}

/// Reorders the columns of `data` to match the vertex names of a graph.
fn align_data(data: Dataset, names: &[String]) -> CliResult<Dataset> {
    if data.names() == names {
        return Ok(data);
    }
    if data.n_vars() != names.len() {
        return Err(format!(
            "graph has {} vertices but the data has {} columns",
            names.len(),
            data.n_vars()
        )
        .into());
    }
    let cols: Vec<usize> = names
        .iter()
        .map(|n| {
            data.names()
                .iter()
                .position(|d| d == n)
                .ok_or_else(|| format!("no data column named `{n}`"))
        })
        .collect::<Result<_, _>>()?;
    let arities = cols.iter().map(|&c| data.arities()[c]).collect();
    let rows = data
        .rows()
        .iter()
        .map(|r| cols.iter().map(|&c| r[c]).collect())
        .collect();
    Ok(Dataset::new(names.to_vec(), arities, rows)?)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn learn(args: LearnArgs) -> CliResult<()> {
    let metric = args.data.metric()?;
    let mut data = args.data.load()?;
    let start = match args.start.as_str() {
        "empty" => Start::Empty,
        "complete" => {
            eprintln!(
                "warning: the boundary neighbourhood suits searches that mostly add edges; \
                 starting from the complete graph is slow and rarely useful"
            );
            Start::Complete
        }
        path => {
            let NamedGraph { names, graph } = read_graph(Path::new(path))?;
            let e = if graph.is_dag() {
                essentialize(graph)?
            } else {
                EssentialGraph::new(graph)
                    .map_err(|v| format!("{path}: not an essential graph: {}", describe(&v, &names)))?
            };
            data = align_data(data, &names)?;
            Start::Graph(e)
        }
    };
    let cfg = SearchConfig {
        start,
        metric,
        max_iterations: args.max_iter,
        limits: limits(args.max_subsets),
        seed: args.seed,
        random_restarts: args.restarts,
        ..Default::default()
    };
    let (e, score, trace) = hill_climb(&data, &cfg)?;
    if let Some(path) = &args.trace {
        let file = File::create(path).map_err(|err| format!("{}: {err}", path.display()))?;
        trace.write_csv(BufWriter::new(file))?;
    }
    let named = NamedGraph::new(data.names().to_vec(), e.into_graph());
    emit(args.out.as_deref(), &format_graph(&named))?;
    let certificate = match trace.certificate {
        Certificate::LocalOptimum => "local optimum",
        Certificate::BestFound => "best found",
    };
    eprintln!("score {score:.6} after {} moves ({certificate})", trace.steps.len());
    Ok(())
}

#[derive(Serialize)]
struct VStructureRecord<'a> {
    head: &'a str,
    tails: [&'a str; 2],
}

#[derive(Serialize)]
struct DeltaRecord<'a> {
    vertex: &'a str,
    old_parents: Vec<&'a str>,
    new_parents: Vec<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
}

#[derive(Serialize)]
struct NeighbourRecord<'a> {
    pair: [&'a str; 2],
    kind: String,
    side: &'static str,
    created: Vec<VStructureRecord<'a>>,
    arrows: Vec<[&'a str; 2]>,
    lines: Vec<[&'a str; 2]>,
    delta: DeltaRecord<'a>,
}

fn side_label(side: Side) -> &'static str {
    match side {
        Side::Plus => "N+",
        Side::Minus => "N-",
    }
}

fn record<'a>(nb: &Neighbour, names: &'a [String], value: Option<f64>) -> NeighbourRecord<'a> {
    let nm = |v: usize| names[v].as_str();
    let op = nb.characterization.op;
    let g = nb.result.graph();
    NeighbourRecord {
        pair: [nm(op.a), nm(op.b)],
        kind: op.kind.to_string(),
        side: side_label(nb.side()),
        created: nb
            .characterization
            .created
            .iter()
            .map(|v: &VStructure| VStructureRecord {
                head: nm(v.head),
                tails: [nm(v.tails.0), nm(v.tails.1)],
            })
            .collect(),
        arrows: g.arrows().map(|(a, b)| [nm(a), nm(b)]).collect(),
        lines: g.lines().map(|(a, b)| [nm(a), nm(b)]).collect(),
        delta: DeltaRecord {
            vertex: nm(nb.delta.vertex),
            old_parents: nb.delta.old_parents.iter().map(|&v| nm(v)).collect(),
            new_parents: nb.delta.new_parents.iter().map(|&v| nm(v)).collect(),
            value,
        },
    }
}

fn neighbours(args: NeighboursArgs) -> CliResult<()> {
    let (names, e) = read_essential(&args.graph)?;
    let nb = inclusion_boundary(&e, limits(args.max_subsets))?;
    if nb.partial && !args.partial_ok {
        return Err(
            "neighbourhood truncated by the subset cap; rerun with --partial-ok or a larger --max-subsets".into(),
        );
    }
    let scored = match &args.data {
        Some(path) => {
            let d = DataArgs {
                data: path.clone(),
                score: args.score,
                ess: args.ess,
                arity: args.arity.clone(),
            };
            Some((align_data(d.load()?, &names)?, d.metric()?))
        }
        None => None,
    };
    let scorer = scored.as_ref().map(|(data, metric)| Scorer::new(data, *metric));
    let mut out = BufWriter::new(io::stdout().lock());
    if nb.partial {
        eprintln!("warning: neighbourhood is partial");
    }
    for x in &nb.neighbours {
        let value = scorer.as_ref().map(|s| s.delta(&x.delta)).transpose()?;
        let rec = record(x, &names, value);
        if args.json {
            writeln!(out, "{}", serde_json::to_string(&rec)?)?;
            continue;
        }
        let created: Vec<String> = rec
            .created
            .iter()
            .map(|v| format!("{} <- {}, {}", v.head, v.tails[0], v.tails[1]))
            .collect();
        let edges: Vec<String> = rec
            .arrows
            .iter()
            .map(|[a, b]| format!("{a} -> {b}"))
            .chain(rec.lines.iter().map(|[a, b]| format!("{a} -- {b}")))
            .collect();
        write!(
            out,
            "{} {} {} {} | O: {{{}}} | {}",
            rec.side,
            rec.kind,
            rec.pair[0],
            rec.pair[1],
            created.join("; "),
            edges.join(", ")
        )?;
        if let Some(v) = value {
            write!(out, " | delta {v:.6}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

fn essentialize_cmd(path: &Path) -> CliResult<()> {
    let NamedGraph { names, graph } = read_graph(path)?;
    if !graph.is_dag() {
        return Err(format!("{}: not a DAG", path.display()).into());
    }
    let e = essentialize(graph)?;
    emit(None, &format_graph(&NamedGraph::new(names, e.into_graph())))
}

fn validate(path: &Path) -> CliResult<()> {
    let NamedGraph { names, graph } = read_graph(path)?;
    match validate_essential(&graph) {
        Ok(()) => {
            println!("essential");
            Ok(())
        }
        Err(v) => Err(format!(
            "not essential, condition '{}' fails: {}",
            v.condition(),
            describe(&v, &names)
        )
        .into()),
    }
}

fn members(path: &Path, limit: Option<usize>) -> CliResult<()> {
    let (names, e) = read_essential(path)?;
    let mut out = BufWriter::new(io::stdout().lock());
    for (i, d) in class_members(&e).take(limit.unwrap_or(usize::MAX)).enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        writeln!(out, "# member {}", i + 1)?;
        out.write_all(format_graph(&NamedGraph::new(names.clone(), d)).as_bytes())?;
    }
    out.flush()?;
    Ok(())
}

fn score(path: &Path, args: &DataArgs) -> CliResult<()> {
    let NamedGraph { names, graph } = read_graph(path)?;
    let data = align_data(args.load()?, &names)?;
    let s = Scorer::new(&data, args.metric()?).score_graph(&graph_for_scoring(graph)?)?;
    println!("{s:.9}");
    Ok(())
}

/// DAGs are scored as they are; anything else must be an essential graph.
fn graph_for_scoring(g: MixedGraph) -> CliResult<MixedGraph> {
    if g.is_dag() {
        return Ok(g);
    }
    validate_essential(&g).map_err(|v| format!("neither a DAG nor an essential graph: {v}"))?;
    Ok(g)
}

fn run(cli: Cli) -> CliResult<bool> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global()?;
    }
    match cli.command {
        Command::Learn(args) => learn(args)?,
        Command::Neighbours(args) => neighbours(args)?,
        Command::Essentialize { graph } => essentialize_cmd(&graph)?,
        Command::Validate { graph } => validate(&graph)?,
        Command::Members { graph, limit } => members(&graph, limit)?,
        Command::Score { graph, data } => score(&graph, &data)?,
        Command::Oracle(cmd) => return oracle_cmd::run(cmd),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
