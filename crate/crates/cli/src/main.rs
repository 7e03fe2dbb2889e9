use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{Context, Result, bail};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use fastiso::bench::{self, BenchConfig, ReportFormat};
use fastiso::generator::{self, GenParams};
use fastiso::graph::{Alphabet, LabeledGraph, Mapping};
use fastiso::io::{self as dataset, DisconnectedPolicy, GraphDataset, QuerySet, ReadOptions};
use fastiso::matcher::{DataIndex, Engine, MatchMode, PreparedQuery, choose_max_len};
use fastiso::path::{DEFAULT_MAX_LEN_CAP, PathTable};

#[derive(Parser)]
#[command(
    name = "fastiso",
    version,
    about = "Labeled subgraph isomorphism: matching, benchmarks and synthetic data"
)]
struct Cli {
    /// Log more (repeat for debug output).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Match one query against every graph of a data file.
    Match(MatchArgs),
    /// Run engines over datasets and query sets and report timings.
    Bench(BenchArgs),
    /// Generate a synthetic dataset.
    Gen(GenArgs),
    /// Extract connected queries of a fixed edge count from a dataset.
    ExtractQueries(ExtractArgs),
    /// Show a query's path cover and, optionally, its path candidates.
    Paths(PathsArgs),
    /// Check that dataset files parse and print their statistics.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ReadArgs {
    /// Ignore edge labels in every file read.
    #[arg(long = "strip-edge-labels")]
    strip_edge_labels: bool,
}

impl ReadArgs {
    fn options(&self) -> ReadOptions {
        ReadOptions {
            strip_edge_labels: self.strip_edge_labels,
            ..ReadOptions::default()
        }
    }
}

#[derive(Args)]
struct MatchArgs {
    /// File holding the query graph (the first graph is used).
    query: PathBuf,
    /// File holding one or more data graphs.
    data: PathBuf,
    #[arg(long, default_value = "fast-on")]
    engine: Engine,
    /// Longest path (in edges) Fast-P may use; chosen from the query if omitted.
    #[arg(long = "maxL")]
    max_len: Option<usize>,
    #[arg(long, default_value = "boolean")]
    mode: MatchMode,
    /// Give up on a data graph after this many milliseconds.
    #[arg(long = "timeout-ms")]
    timeout_ms: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    read: ReadArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Dataset files.
    #[arg(long = "data", required = true, num_args = 1..)]
    data: Vec<PathBuf>,
    /// Query set files; the size is taken from names like `Q8.txt`.
    #[arg(long = "queries", required = true, num_args = 1..)]
    queries: Vec<PathBuf>,
    /// Engines to run (repeatable); all of them by default.
    #[arg(long)]
    engine: Vec<Engine>,
    #[arg(long = "maxL", default_value_t = 2)]
    max_len: usize,
    #[arg(long, default_value = "boolean")]
    mode: MatchMode,
    /// Timed passes per query; the fastest is kept.
    #[arg(long, default_value_t = 1)]
    repetitions: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long = "timeout-ms", default_value_t = 10_000)]
    timeout_ms: u64,
    #[arg(long = "no-warmup")]
    no_warmup: bool,
    /// Run on prefixes of the (single) dataset with these graph counts.
    #[arg(long, value_delimiter = ',')]
    prefixes: Vec<usize>,
    /// Append rows from an existing CSV report, e.g. numbers from other tools.
    #[arg(long)]
    merge: Vec<PathBuf>,
    /// Report file; stdout if omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
    /// Also write one `<engine>.dat` series per engine next to the report.
    #[arg(long)]
    plotdata: bool,
    #[command(flatten)]
    read: ReadArgs,
}

#[derive(Args)]
struct GenArgs {
    /// Parameter shorthand such as `Syn10K.E30.D5.L50`; overrides the flags below.
    #[arg(long)]
    name: Option<String>,
    #[arg(long, default_value_t = 1000)]
    graphs: usize,
    /// Average edge count per graph.
    #[arg(long, default_value_t = 27)]
    edges: usize,
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    #[arg(long, default_value_t = 10)]
    labels: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    data: PathBuf,
    /// Edge count of every query; repeat or comma-separate for several sets.
    #[arg(long, required = true, value_delimiter = ',')]
    size: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file, or a directory receiving `Q<size>.txt` files when several
    /// sizes are requested.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    read: ReadArgs,
}

#[derive(Args)]
struct PathsArgs {
    query: PathBuf,
    /// Also list path candidates in each graph of this file.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long = "maxL")]
    max_len: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    read: ReadArgs,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Treat the files as query sets: graphs must be connected.
    #[arg(long)]
    queries: bool,
    #[command(flatten)]
    read: ReadArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = match cli.command {
        Command::Match(a) => run_match(a),
        Command::Bench(a) => run_bench(a).map(|()| true),
        Command::Gen(a) => run_gen(a).map(|()| true),
        Command::ExtractQueries(a) => run_extract(a).map(|()| true),
        Command::Paths(a) => run_paths(a).map(|()| true),
        Command::Validate(a) => run_validate(a).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn read_data(path: &Path, options: &ReadOptions, alphabet: Alphabet) -> Result<GraphDataset> {
    dataset::read_dataset_with_alphabet(path, options, alphabet)
        .with_context(|| format!("reading {}", path.display()))
}

fn read_query(path: &Path, options: &ReadOptions) -> Result<(Alphabet, String, LabeledGraph)> {
    let strict = ReadOptions {
        disconnected: DisconnectedPolicy::Reject,
        ..*options
    };
    let ds = read_data(path, &strict, Alphabet::default())?;
    if ds.is_empty() {
        bail!("{} holds no graph", path.display());
    }
    if ds.len() > 1 {
        warn!(
            "{} holds {} graphs; using the first",
            path.display(),
            ds.len()
        );
    }
    Ok((
        ds.alphabet().clone(),
        ds.ids()[0].clone(),
        ds.graph(0).clone(),
    ))
}

fn resolve_max_len(q: &LabeledGraph, requested: Option<usize>) -> usize {
    let choice = choose_max_len(q, requested, DEFAULT_MAX_LEN_CAP);
    if !choice.satisfies_bound {
        warn!(
            "maxL = {} leaves the query denser than the path bound favors",
            choice.max_len
        );
    }
    choice.max_len
}

fn format_mapping(m: &Mapping) -> String {
    (0..m.query_len())
        .map(|u| match m.image(u) {
            Some(v) => format!("{u}->{v}"),
            None => format!("{u}->?"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn run_match(a: MatchArgs) -> Result<bool> {
    let options = a.read.options();
    let (alphabet, qid, q) = read_query(&a.query, &options)?;
    let data = read_data(&a.data, &options, alphabet)?;
    let max_len = match a.engine {
        Engine::FastP => resolve_max_len(&q, a.max_len),
        _ => a.max_len.unwrap_or(2),
    };
    let prepared = PreparedQuery::new(a.engine, &q, max_len)?;
    let timeout = a.timeout_ms.map(Duration::from_millis);
    let mut out = sink(a.output.as_deref())?;
    writeln!(out, "# query {qid}, engine {}, mode {}", a.engine, a.mode)?;

    let mut any = false;
    let mut inconclusive = 0;
    for (id, g) in data.ids().iter().zip(data.graphs()) {
        let index = match a.engine {
            Engine::FastP => DataIndex::with_paths(g, max_len)?,
            _ => DataIndex::new(g),
        };
        let started = Instant::now();
        let o = prepared.run(&index, a.mode, timeout.map(|t| started + t))?;
        let ms = started.elapsed().as_secs_f64() * 1e3;
        any |= o.found;
        let verdict = match (o.found, o.timed_out) {
            (true, _) => "found",
            (false, true) => {
                inconclusive += 1;
                "timeout"
            }
            (false, false) => "not-found",
        };
        writeln!(
            out,
            "{id}\t{verdict}\tcount={}\tcalls={}\tcandidates={}\tms={ms:.3}",
            o.count, o.stats.recursive_calls, o.stats.candidate_total
        )?;
        match a.mode {
            MatchMode::Boolean => {}
            MatchMode::Witness => {
                if let Some(w) = &o.witness {
                    writeln!(out, "  {}", format_mapping(w))?;
                }
            }
            MatchMode::CountAll => {
                for w in &o.witnesses {
                    writeln!(out, "  {}", format_mapping(w))?;
                }
            }
        }
    }
    out.flush()?;
    if !any && inconclusive > 0 {
        bail!("{inconclusive} data graphs timed out without a match");
    }
    Ok(any)
}

fn run_bench(a: BenchArgs) -> Result<()> {
    let options = a.read.options();
    let mut alphabet = Alphabet::default();
    let mut datasets = Vec::new();
    for path in &a.data {
        let ds = read_data(path, &options, alphabet.clone())?;
        alphabet = ds.alphabet().clone();
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("data")
            .to_string();
        datasets.push((name, ds));
    }
    let mut querysets: Vec<QuerySet> = Vec::new();
    for path in &a.queries {
        let qs = dataset::read_query_set(path, &options, alphabet.clone())
            .with_context(|| format!("reading {}", path.display()))?;
        alphabet = qs.queries().alphabet().clone();
        querysets.push(qs);
    }
    let config = BenchConfig {
        engines: if a.engine.is_empty() {
            Engine::ALL.to_vec()
        } else {
            a.engine.clone()
        },
        max_len: a.max_len,
        mode: a.mode,
        repetitions: a.repetitions,
        warmup: !a.no_warmup,
        timeout: Duration::from_millis(a.timeout_ms),
        workers: a.workers,
    };

    let mut report = if a.prefixes.is_empty() {
        bench::run_benchmark(&config, &datasets, &querysets)?
    } else {
        let [(name, ds)] = datasets.as_slice() else {
            bail!("--prefixes needs exactly one dataset");
        };
        if let Some(&k) = a.prefixes.iter().find(|&&k| k > ds.len()) {
            bail!("prefix {k} is larger than {name} ({} graphs)", ds.len());
        }
        let mut report = bench::BenchReport::default();
        for qs in &querysets {
            report.extend(bench::run_scalability(&config, name, ds, qs, &a.prefixes)?);
        }
        report
    };
    for path in &a.merge {
        bench::merge_csv(&mut report.rows, path)
            .with_context(|| format!("merging {}", path.display()))?;
    }

    match &a.output {
        Some(path) => {
            for f in bench::emit_report(&report, a.format, path, a.plotdata)? {
                info!("wrote {}", f.display());
            }
        }
        None => {
            if a.plotdata {
                warn!("--plotdata needs --output; skipping series files");
            }
            print!("{}", bench::format_report(&report.rows, a.format)?);
        }
    }
    if !report.disagreements.is_empty() {
        bail!(
            "engines disagreed on {} queries",
            report.disagreements.len()
        );
    }
    Ok(())
}

fn run_gen(a: GenArgs) -> Result<()> {
    let params = match &a.name {
        Some(name) => name.parse::<GenParams>()?,
        None => GenParams::new(a.graphs, a.edges, a.density, a.labels),
    }
    .with_seed(a.seed);
    let ds = generator::generate_dataset(&params)?;
    info!("{params}: {:?}", ds.stats());
    let mut out = sink(a.output.as_deref())?;
    out.write_all(dataset::format_dataset(&ds).as_bytes())?;
    out.flush()?;
    Ok(())
}

fn run_extract(a: ExtractArgs) -> Result<()> {
    let ds = read_data(&a.data, &a.read.options(), Alphabet::default())?;
    let several = a.size.len() > 1;
    if several && a.output.is_none() {
        bail!("several sizes need --output naming a directory");
    }
    if several {
        fs::create_dir_all(a.output.as_ref().expect("checked above"))?;
    }
    for &size in &a.size {
        let qs = generator::extract_queries(&ds, size, a.count, a.seed)?;
        let text = dataset::format_dataset(qs.queries());
        match &a.output {
            Some(dir) if several => {
                let file = dir.join(format!("Q{size}.txt"));
                fs::write(&file, text).with_context(|| format!("writing {}", file.display()))?;
                info!("wrote {}", file.display());
            }
            other => {
                let mut out = sink(other.as_deref())?;
                out.write_all(text.as_bytes())?;
                out.flush()?;
            }
        }
    }
    Ok(())
}

fn run_paths(a: PathsArgs) -> Result<()> {
    let options = a.read.options();
    let (alphabet, qid, q) = read_query(&a.query, &options)?;
    let max_len = resolve_max_len(&q, a.max_len);
    let fq = fastiso::matcher::FastPQuery::new(&q, max_len)?;
    let mut out = sink(a.output.as_deref())?;
    writeln!(
        out,
        "# query {qid}: {} vertices, {} edges, maxL = {max_len}, {} cover paths",
        q.vertex_count(),
        q.edge_count(),
        fq.cover().len()
    )?;
    for (i, p) in fq.cover().paths().iter().enumerate() {
        writeln!(
            out,
            "p{i}\t{}\t{}{}",
            join(p.vertices()),
            p.code().display(&alphabet),
            if p.is_iso() { "\tiso" } else { "" }
        )?;
    }
    if let Some(path) = &a.data {
        let data = read_data(path, &options, alphabet)?;
        for (id, g) in data.ids().iter().zip(data.graphs()) {
            let index = DataIndex::with_path_table(g, PathTable::build(g, max_len)?);
            let cands = fq.candidates(&index)?;
            let sizes: Vec<usize> = cands.lists().iter().map(Vec::len).collect();
            writeln!(out, "{id}\t{}", join(&sizes))?;
            for (i, list) in cands.lists().iter().enumerate() {
                for c in list {
                    writeln!(out, "  p{i} <- {}", join(&c.vertices))?;
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("-")
}

fn run_validate(a: ValidateArgs) -> Result<()> {
    let options = a.read.options();
    let mut failed = 0;
    for path in &a.files {
        let read = if a.queries {
            dataset::read_query_set(path, &options, Alphabet::default())
                .map(|qs| qs.queries().clone())
        } else {
            dataset::read_dataset(path, &options)
        };
        match read {
            Ok(ds) => {
                let s = ds.stats();
                println!(
                    "{}: ok, {} graphs, {:.2} vertices, {:.2} edges, density {:.3} on average",
                    path.display(),
                    s.graphs,
                    s.avg_vertices,
                    s.avg_edges,
                    s.avg_density
                );
            }
            Err(e) => {
                failed += 1;
                println!("{}: {e}", path.display());
            }
        }
    }
    if failed > 0 {
        bail!("{failed} of {} files failed validation", a.files.len());
    }
    Ok(())
}
