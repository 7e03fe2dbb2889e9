//! Benchmark harness: engines × datasets × query sets.
//!
//! For every query the harness runs the engine against every graph of the
//! dataset and records the wall time of the whole sweep (query preparation
//! included, data-side indexing excluded and reported separately), the
//! number of graphs containing the query and the search statistics.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use log::{error, info, warn};

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::io::{GraphDataset, QuerySet};
use crate::matcher::{DataIndex, Engine, MatchMode, PreparedQuery};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

/// Queries run once, untimed, before measuring.
pub const WARMUP_QUERIES: usize = 10;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub engines: Vec<Engine>,
    pub max_len: usize,
    pub mode: MatchMode,
    /// Timed passes per query; the fastest pass is kept.
    pub repetitions: usize,
    pub warmup: bool,
    /// Per query, over the whole dataset.
    pub timeout: Duration,
    pub workers: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            engines: Engine::ALL.to_vec(),
            max_len: 2,
            mode: MatchMode::Boolean,
            repetitions: 1,
            warmup: true,
            timeout: DEFAULT_TIMEOUT,
            workers: 1,
        }
    }
}

impl BenchConfig {
    fn check(&self) -> Result<()> {
        if self.engines.is_empty() {
            return Err(Error::Config("no engines selected".into()));
        }
        if self.repetitions == 0 || self.workers == 0 {
            return Err(Error::Config(
                "repetitions and workers must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One query of one query set against one dataset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryEntry {
    pub engine: Engine,
    pub dataset: String,
    pub queryset: String,
    pub query: usize,
    pub time: Duration,
    /// Data graphs containing the query, by index.
    pub matches: Vec<u32>,
    pub recursive_calls: u64,
    pub candidates: u64,
    pub timed_out: bool,
}

/// Aggregates for one (engine, dataset, query set) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub engine: String,
    pub dataset: String,
    pub graphs: usize,
    pub queryset: String,
    pub query_edges: usize,
    pub queries: usize,
    pub pairs: u64,
    pub total_ms: f64,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub index_ms: f64,
    pub recursive_calls: u64,
    pub candidates: u64,
    pub answers: u64,
    pub timeouts: usize,
}

pub const COLUMNS: [&str; 15] = [
    "engine",
    "dataset",
    "graphs",
    "queryset",
    "query_edges",
    "queries",
    "pairs",
    "total_ms",
    "mean_ms",
    "median_ms",
    "index_ms",
    "recursive_calls",
    "candidates",
    "answers",
    "timeouts",
];

/// Columns that do not depend on timing.
pub const STABLE_COLUMNS: [&str; 10] = [
    "engine",
    "dataset",
    "graphs",
    "queryset",
    "query_edges",
    "queries",
    "pairs",
    "recursive_calls",
    "candidates",
    "answers",
];

impl BenchRow {
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.engine.clone(),
            self.dataset.clone(),
            self.graphs.to_string(),
            self.queryset.clone(),
            self.query_edges.to_string(),
            self.queries.to_string(),
            self.pairs.to_string(),
            format!("{:.3}", self.total_ms),
            format!("{:.3}", self.mean_ms),
            format!("{:.3}", self.median_ms),
            format!("{:.3}", self.index_ms),
            self.recursive_calls.to_string(),
            self.candidates.to_string(),
            self.answers.to_string(),
            self.timeouts.to_string(),
        ]
    }

    pub fn stable_fields(&self) -> Vec<String> {
        let all = self.fields();
        COLUMNS
            .iter()
            .zip(all)
            .filter(|(c, _)| STABLE_COLUMNS.contains(c))
            .map(|(_, f)| f)
            .collect()
    }

    fn from_fields(fields: &[&str]) -> Result<Self> {
        if fields.len() != COLUMNS.len() {
            return Err(Error::Config(format!(
                "expected {} columns, found {}",
                COLUMNS.len(),
                fields.len()
            )));
        }
        fn num<T: FromStr>(s: &str, column: &str) -> Result<T> {
            s.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad value `{s}` in column {column}")))
        }
        Ok(Self {
            engine: fields[0].to_string(),
            dataset: fields[1].to_string(),
            graphs: num(fields[2], COLUMNS[2])?,
            queryset: fields[3].to_string(),
            query_edges: num(fields[4], COLUMNS[4])?,
            queries: num(fields[5], COLUMNS[5])?,
            pairs: num(fields[6], COLUMNS[6])?,
            total_ms: num(fields[7], COLUMNS[7])?,
            mean_ms: num(fields[8], COLUMNS[8])?,
            median_ms: num(fields[9], COLUMNS[9])?,
            index_ms: num(fields[10], COLUMNS[10])?,
            recursive_calls: num(fields[11], COLUMNS[11])?,
            candidates: num(fields[12], COLUMNS[12])?,
            answers: num(fields[13], COLUMNS[13])?,
            timeouts: num(fields[14], COLUMNS[14])?,
        })
    }
}

/// Two engines disagreeing on which graphs contain a query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub dataset: String,
    pub queryset: String,
    pub query: usize,
    pub engines: (Engine, Engine),
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub entries: Vec<QueryEntry>,
    pub disagreements: Vec<Disagreement>,
}

impl BenchReport {
    pub fn row(&self, engine: Engine, dataset: &str, queryset: &str) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.engine == engine.name() && r.dataset == dataset && r.queryset == queryset)
    }

    pub fn extend(&mut self, other: BenchReport) {
        self.rows.extend(other.rows);
        self.entries.extend(other.entries);
        self.disagreements.extend(other.disagreements);
    }
}

fn millis(d: Duration) -> f64 {
    (d.as_micros() as f64) / 1000.0
}

/// Data-side indexes for one engine.
fn index_dataset<'g>(
    engine: Engine,
    ds: &'g GraphDataset,
    max_len: usize,
) -> Result<Vec<DataIndex<'g>>> {
    ds.graphs()
        .iter()
        .map(|g| match engine {
            Engine::FastP => DataIndex::with_paths(g, max_len),
            _ => Ok(DataIndex::new(g)),
        })
        .collect()
}

struct Timed {
    time: Duration,
    matches: Vec<u32>,
    recursive_calls: u64,
    candidates: u64,
    timed_out: bool,
}

fn run_query(
    engine: Engine,
    q: &LabeledGraph,
    data: &[DataIndex<'_>],
    config: &BenchConfig,
) -> Result<Timed> {
    let start = Instant::now();
    let deadline = start + config.timeout;
    let prepared = PreparedQuery::new(engine, q, config.max_len)?;
    let mut out = Timed {
        time: Duration::ZERO,
        matches: Vec::new(),
        recursive_calls: 0,
        candidates: 0,
        timed_out: false,
    };
    for (i, d) in data.iter().enumerate() {
        let o = prepared.run(d, config.mode, Some(deadline))?;
        out.recursive_calls += o.stats.recursive_calls;
        out.candidates += o.stats.candidate_total;
        if o.found {
            out.matches.push(i as u32);
        }
        // reading the clock costs about as much as a rejected pair
        if o.timed_out || ((i + 1).is_multiple_of(64) && Instant::now() >= deadline) {
            out.timed_out = true;
            break;
        }
    }
    out.time = start.elapsed();
    Ok(out)
}

/// One pass over every query.
fn run_pass(
    engine: Engine,
    queries: &[LabeledGraph],
    data: &[DataIndex<'_>],
    config: &BenchConfig,
) -> Result<Vec<Timed>> {
    if config.workers <= 1 || queries.len() < 2 {
        return queries
            .iter()
            .map(|q| run_query(engine, q, data, config))
            .collect();
    }
    let chunk = queries.len().div_ceil(config.workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = queries
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|q| run_query(engine, q, data, config))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut all = Vec::with_capacity(queries.len());
        for h in handles {
            all.extend(h.join().expect("benchmark worker panicked")?);
        }
        Ok(all)
    })
}

/// Repetitions are whole passes, so a slow stretch of the machine hits one
/// pass of a query rather than all of them. Each query keeps its fastest time.
fn run_queries(
    engine: Engine,
    qs: &QuerySet,
    data: &[DataIndex<'_>],
    config: &BenchConfig,
) -> Result<Vec<Timed>> {
    let queries = qs.queries().graphs();
    let mut best = run_pass(engine, queries, data, config)?;
    for _ in 1..config.repetitions {
        for (b, t) in best
            .iter_mut()
            .zip(run_pass(engine, queries, data, config)?)
        {
            b.time = b.time.min(t.time);
        }
    }
    Ok(best)
}

/// Runs every engine in `config` on every (dataset, query set) pair.
pub fn run_benchmark(
    config: &BenchConfig,
    datasets: &[(String, GraphDataset)],
    querysets: &[QuerySet],
) -> Result<BenchReport> {
    config.check()?;
    let mut report = BenchReport::default();
    for (name, ds) in datasets {
        for &engine in &config.engines {
            let started = Instant::now();
            let data = index_dataset(engine, ds, config.max_len)?;
            let index_time = started.elapsed();
            info!(
                "{engine} indexed {name} ({} graphs) in {:.1} ms",
                ds.len(),
                millis(index_time)
            );
            for qs in querysets {
                if config.warmup {
                    let warm = qs.prefix(WARMUP_QUERIES);
                    run_queries(
                        engine,
                        &warm,
                        &data,
                        &BenchConfig {
                            repetitions: 1,
                            ..config.clone()
                        },
                    )?;
                }
                let timed = run_queries(engine, qs, &data, config)?;
                report
                    .rows
                    .push(summarize(engine, name, ds.len(), qs, &timed, index_time));
                report
                    .entries
                    .extend(timed.into_iter().enumerate().map(|(i, t)| QueryEntry {
                        engine,
                        dataset: name.clone(),
                        queryset: qs.name().to_string(),
                        query: i,
                        time: t.time,
                        matches: t.matches,
                        recursive_calls: t.recursive_calls,
                        candidates: t.candidates,
                        timed_out: t.timed_out,
                    }));
            }
        }
    }
    report.disagreements = check_agreement(&report.entries);
    for d in &report.disagreements {
        error!(
            "{} and {} disagree on query {} of {} against {}",
            d.engines.0, d.engines.1, d.query, d.queryset, d.dataset
        );
    }
    Ok(report)
}

fn summarize(
    engine: Engine,
    dataset: &str,
    graphs: usize,
    qs: &QuerySet,
    timed: &[Timed],
    index_time: Duration,
) -> BenchRow {
    let mut times: Vec<Duration> = timed.iter().map(|t| t.time).collect();
    times.sort();
    let total: Duration = times.iter().sum();
    let median = match times.len() {
        0 => Duration::ZERO,
        n if n % 2 == 1 => times[n / 2],
        n => (times[n / 2 - 1] + times[n / 2]) / 2,
    };
    let timeouts = timed.iter().filter(|t| t.timed_out).count();
    if timeouts > 0 {
        warn!(
            "{engine}: {timeouts} queries of {} timed out on {dataset}",
            qs.name()
        );
    }
    BenchRow {
        engine: engine.name().to_string(),
        dataset: dataset.to_string(),
        graphs,
        queryset: qs.name().to_string(),
        query_edges: qs.size(),
        queries: timed.len(),
        pairs: (timed.len() * graphs) as u64,
        total_ms: millis(total),
        mean_ms: if timed.is_empty() {
            0.0
        } else {
            millis(total / timed.len() as u32)
        },
        median_ms: millis(median),
        index_ms: millis(index_time),
        recursive_calls: timed.iter().map(|t| t.recursive_calls).sum(),
        candidates: timed.iter().map(|t| t.candidates).sum(),
        answers: timed.iter().map(|t| t.matches.len() as u64).sum(),
        timeouts,
    }
}

/// Compares answer sets across engines, skipping queries that timed out.
pub fn check_agreement(entries: &[QueryEntry]) -> Vec<Disagreement> {
    let mut by_query: BTreeMap<(&str, &str, usize), Vec<&QueryEntry>> = BTreeMap::new();
    for e in entries.iter().filter(|e| !e.timed_out) {
        by_query
            .entry((e.dataset.as_str(), e.queryset.as_str(), e.query))
            .or_default()
            .push(e);
    }
    let mut out = Vec::new();
    for ((dataset, queryset, query), group) in by_query {
        let first = group[0];
        for other in &group[1..] {
            if other.matches != first.matches {
                out.push(Disagreement {
                    dataset: dataset.to_string(),
                    queryset: queryset.to_string(),
                    query,
                    engines: (first.engine, other.engine),
                });
            }
        }
    }
    out
}

/// Runs `queryset` over prefixes of `ds` with the given sizes. Rows are named
/// `<name>[<size>]`.
pub fn run_scalability(
    config: &BenchConfig,
    name: &str,
    ds: &GraphDataset,
    queryset: &QuerySet,
    sizes: &[usize],
) -> Result<BenchReport> {
    let datasets: Vec<(String, GraphDataset)> = sizes
        .iter()
        .map(|&k| (format!("{name}[{k}]"), ds.prefix(k)))
        .collect();
    run_benchmark(config, &datasets, std::slice::from_ref(queryset))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Csv,
    Tsv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "tsv" => Ok(Self::Tsv),
            "markdown" | "md" => Ok(Self::Markdown),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

pub fn format_report(rows: &[BenchRow], format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => delimited(rows, b','),
        ReportFormat::Tsv => delimited(rows, b'\t'),
        ReportFormat::Markdown => Ok(markdown(rows)),
    }
}

fn delimited(rows: &[BenchRow], delimiter: u8) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(Vec::new());
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("fields are valid UTF-8"))
}

fn markdown(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "| {} |", COLUMNS.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(COLUMNS.len()));
    for r in rows {
        let _ = writeln!(out, "| {} |", r.fields().join(" | "));
    }
    out
}

/// Parses CSV (or TSV) produced by [`format_report`], or an external file
/// with the same header.
pub fn parse_report(text: &str, format: ReportFormat) -> Result<Vec<BenchRow>> {
    let delimiter = match format {
        ReportFormat::Csv => b',',
        ReportFormat::Tsv => b'\t',
        ReportFormat::Markdown => {
            return Err(Error::Config("markdown reports are output only".into()));
        }
    };
    let mut r = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != COLUMNS {
        return Err(Error::Config(format!(
            "unexpected report header {header:?}"
        )));
    }
    r.records()
        .map(|rec| {
            let rec = rec?;
            BenchRow::from_fields(&rec.iter().collect::<Vec<_>>())
        })
        .collect()
}

/// Appends rows from an external CSV file (e.g. another tool's numbers).
pub fn merge_csv(rows: &mut Vec<BenchRow>, path: impl AsRef<Path>) -> Result<()> {
    let text = fs::read_to_string(path)?;
    rows.extend(parse_report(&text, ReportFormat::Csv)?);
    Ok(())
}

/// Series for plotting, one per engine. The x axis is the dataset size when
/// an engine ran on several sizes, otherwise the query size.
pub fn plot_series(rows: &[BenchRow]) -> BTreeMap<String, Vec<(usize, f64)>> {
    let mut sizes: HashMap<&str, Vec<usize>> = HashMap::new();
    for r in rows {
        sizes.entry(&r.engine).or_default().push(r.graphs);
    }
    let mut series: BTreeMap<String, Vec<(usize, f64)>> = BTreeMap::new();
    for r in rows {
        let by_graphs = sizes[r.engine.as_str()].iter().any(|&g| g != r.graphs);
        let x = if by_graphs { r.graphs } else { r.query_edges };
        series
            .entry(r.engine.clone())
            .or_default()
            .push((x, r.total_ms));
    }
    for points in series.values_mut() {
        points.sort_by_key(|p| p.0);
    }
    series
}

/// Writes the report to `path`; with `plotdata`, also one `<engine>.dat`
/// series per engine beside it. Returns every file written.
pub fn emit_report(
    report: &BenchReport,
    format: ReportFormat,
    path: impl AsRef<Path>,
    plotdata: bool,
) -> Result<Vec<PathBuf>> {
    if report.rows.is_empty() {
        return Err(Error::Config("report has no rows".into()));
    }
    let path = path.as_ref();
    fs::write(path, format_report(&report.rows, format)?)?;
    let mut written = vec![path.to_path_buf()];
    if plotdata {
        let dir = path.parent().unwrap_or(Path::new("."));
        for (engine, points) in plot_series(&report.rows) {
            let file = dir.join(format!("{engine}.dat"));
            let mut text = String::from("# x\ttotal_ms\n");
            for (x, y) in points {
                let _ = writeln!(text, "{x}\t{y:.3}");
            }
            fs::write(&file, text)?;
            written.push(file);
        }
    }
    Ok(written)
}

/// Least-squares fit `y = a + b x`; returns `(a, b, r_squared)`.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let b = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let a = my - b * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (a, b, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{GenParams, extract_queries, generate_dataset};

    fn small() -> (Vec<(String, GraphDataset)>, Vec<QuerySet>) {
        let ds = generate_dataset(&GenParams::new(30, 12, 0.3, 4).with_seed(1)).unwrap();
        let qs: Vec<QuerySet> = [2, 4, 6]
            .iter()
            .map(|&i| extract_queries(&ds, i, 5, i as u64).unwrap())
            .collect();
        (vec![("small".to_string(), ds)], qs)
    }

    #[test]
    fn matrix_cardinality_and_agreement() {
        let (ds, qs) = small();
        let report = run_benchmark(&BenchConfig::default(), &ds, &qs).unwrap();
        assert_eq!(report.rows.len(), 9);
        assert!(report.disagreements.is_empty());
        assert_eq!(report.entries.len(), 3 * 3 * 5);
        for r in &report.rows {
            assert_eq!(r.pairs, 5 * 30);
            // every extracted query has its source graph
            assert!(r.answers >= 5);
        }
    }

    #[test]
    fn totals_equal_entry_sums() {
        let (ds, qs) = small();
        let report = run_benchmark(&BenchConfig::default(), &ds, &qs).unwrap();
        for r in &report.rows {
            let entries: Vec<_> = report
                .entries
                .iter()
                .filter(|e| e.engine.name() == r.engine && e.queryset == r.queryset)
                .collect();
            let total: Duration = entries.iter().map(|e| e.time).sum();
            assert_eq!(r.total_ms, millis(total));
            assert_eq!(
                r.recursive_calls,
                entries.iter().map(|e| e.recursive_calls).sum::<u64>()
            );
        }
    }

    #[test]
    fn stable_columns_repeat() {
        let (ds, qs) = small();
        let config = BenchConfig {
            workers: 2,
            ..BenchConfig::default()
        };
        let a = run_benchmark(&config, &ds, &qs).unwrap();
        let b = run_benchmark(&BenchConfig::default(), &ds, &qs).unwrap();
        let stable = |r: &BenchReport| {
            r.rows
                .iter()
                .map(BenchRow::stable_fields)
                .collect::<Vec<_>>()
        };
        assert_eq!(stable(&a), stable(&b));
    }

    #[test]
    fn csv_round_trip_and_markdown_rows() {
        let (ds, qs) = small();
        let report = run_benchmark(&BenchConfig::default(), &ds, &qs).unwrap();
        for format in [ReportFormat::Csv, ReportFormat::Tsv] {
            let text = format_report(&report.rows, format).unwrap();
            let back = parse_report(&text, format).unwrap();
            assert_eq!(back, report.rows);
            assert_eq!(format_report(&back, format).unwrap(), text);
        }
        let md = format_report(&report.rows, ReportFormat::Markdown).unwrap();
        assert_eq!(md.lines().count(), report.rows.len() + 2);
    }

    #[test]
    fn scalability_series_use_dataset_size() {
        let (ds, qs) = small();
        let config = BenchConfig {
            engines: vec![Engine::FastOn, Engine::FastP],
            ..BenchConfig::default()
        };
        let report = run_scalability(&config, "small", &ds[0].1, &qs[0], &[10, 20, 30]).unwrap();
        let series = plot_series(&report.rows);
        assert_eq!(series.len(), 2);
        for points in series.values() {
            assert_eq!(
                points.iter().map(|p| p.0).collect::<Vec<_>>(),
                vec![10, 20, 30]
            );
        }
    }

    #[test]
    fn disagreement_is_reported() {
        let entry = |engine, matches| QueryEntry {
            engine,
            dataset: "d".into(),
            queryset: "Q1".into(),
            query: 0,
            time: Duration::ZERO,
            matches,
            recursive_calls: 0,
            candidates: 0,
            timed_out: false,
        };
        let entries = vec![
            entry(Engine::Ullman, vec![0, 1]),
            entry(Engine::FastP, vec![0]),
        ];
        assert_eq!(check_agreement(&entries).len(), 1);
        assert!(check_agreement(&entries[..1]).is_empty());
    }

    #[test]
    fn perfect_line_fits() {
        let (a, b, r2) = linear_fit(&[(1.0, 3.0), (2.0, 5.0), (4.0, 9.0)]);
        assert!((a - 1.0).abs() < 1e-9 && (b - 2.0).abs() < 1e-9 && (r2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bad_config_is_rejected() {
        let (ds, qs) = small();
        let config = BenchConfig {
            engines: vec![],
            ..BenchConfig::default()
        };
        assert!(matches!(
            run_benchmark(&config, &ds, &qs),
            Err(Error::Config(_))
        ));
    }
}
