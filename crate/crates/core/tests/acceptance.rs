//! Acceptance checks, one line per criterion. Runs as a plain binary so the
//! verdict lines are always printed; exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fastiso::bench::{BenchConfig, BenchReport, linear_fit, run_benchmark, run_scalability};
use fastiso::fixtures;
use fastiso::generator::{GenParams, extract_queries, generate_dataset};
use fastiso::io::{
    GraphDataset, QuerySet, ReadOptions, format_dataset, read_dataset, write_dataset,
};
use fastiso::matcher::{
    DataIndex, Engine, FastOnQuery, FastPQuery, MatchMode, fast_on_match, fast_p_match,
    ullman_match,
};
use fastiso::path::cover_query;
use fastiso::{Mapping, oracle_dedupe_redundant, oracle_enumerate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CORPUS_SEED: u64 = 0x5eed;
const CORPUS_PAIRS: usize = 10_000;
const CORPUS_BUDGET: Duration = Duration::from_secs(5 * 60);

const COVER_QUERIES: usize = 1_000;
const COVER_EDGES: std::ops::RangeInclusive<usize> = 2..=20;
const K7_COVER_PATHS: usize = 11;

const QUERY_SIZES: [usize; 6] = [4, 8, 12, 16, 20, 24];
const QUERIES_PER_SET: usize = 100;
const TIMING_REPETITIONS: usize = 3;
const TREND_BUDGET: Duration = Duration::from_secs(15 * 60);
const SPARSE_FAST_P_WINS: usize = 4;
const SPARSE_FAST_ON_WINS: usize = 5;

const SCALE_SIZES: [usize; 4] = [1_000, 2_000, 4_000, 8_000];
const SCALE_QUERY_EDGES: usize = 8;
const SCALE_MIN_R2: f64 = 0.98;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn images(ms: &[Mapping]) -> BTreeSet<Vec<usize>> {
    ms.iter().map(|m| m.images().unwrap()).collect()
}

/// Criteria 1, 2, 5 and 6 share one corpus and one pass over it.
struct CorpusResults {
    pairs: usize,
    positives: usize,
    verdict_mismatches: usize,
    witness_mismatches: usize,
    vertex_exclusions: usize,
    path_exclusions: usize,
    unclear_states: usize,
    elapsed: Duration,
}

fn run_corpus() -> CorpusResults {
    let started = Instant::now();
    let mut r = CorpusResults {
        pairs: 0,
        positives: 0,
        verdict_mismatches: 0,
        witness_mismatches: 0,
        vertex_exclusions: 0,
        path_exclusions: 0,
        unclear_states: 0,
        elapsed: Duration::ZERO,
    };
    for p in common::random_pairs(CORPUS_SEED, CORPUS_PAIRS) {
        r.pairs += 1;
        let witnesses = oracle_enumerate(&p.q, &p.g).unwrap();
        let expected = !witnesses.is_empty();
        r.positives += expected as usize;

        let mut verdicts = vec![
            ullman_match(&p.q, &p.g, MatchMode::Boolean).found,
            fast_on_match(&p.q, &p.g, MatchMode::Boolean).found,
        ];
        let data = DataIndex::with_paths(&p.g, 3).unwrap();
        for max_len in 1..=3 {
            verdicts.push(
                fast_p_match(&p.q, &p.g, max_len, MatchMode::Boolean)
                    .unwrap()
                    .found,
            );

            let fq = FastPQuery::new(&p.q, max_len).unwrap();
            let mut search = fq.search(&data).unwrap();
            search.run(MatchMode::Boolean, None);
            r.unclear_states += !search.state().is_clear() as usize;
            search.run(MatchMode::CountAll, None);
            r.unclear_states += !search.state().is_clear() as usize;

            let cands = fq.candidates(&data).unwrap();
            for w in &witnesses {
                for (i, cp) in fq.cover().paths().iter().enumerate() {
                    let image: Vec<usize> =
                        cp.vertices().iter().map(|&u| w.image(u).unwrap()).collect();
                    if !cands.of(i).iter().any(|c| c.vertices == image) {
                        r.path_exclusions += 1;
                    }
                }
            }
        }
        r.verdict_mismatches += verdicts.iter().filter(|&&v| v != expected).count();

        let u = ullman_match(&p.q, &p.g, MatchMode::CountAll);
        let on = fast_on_match(&p.q, &p.g, MatchMode::CountAll);
        r.witness_mismatches += (images(&u.witnesses) != images(&on.witnesses)) as usize;

        let plain = DataIndex::new(&p.g);
        let vertex_cands = FastOnQuery::new(&p.q).candidates(&plain);
        for w in &witnesses {
            for uq in 0..p.q.vertex_count() {
                if !vertex_cands.of(uq).contains(&w.image(uq).unwrap()) {
                    r.vertex_exclusions += 1;
                }
            }
        }
    }
    r.elapsed = started.elapsed();
    r
}

fn fixture_witnesses() -> Verdict {
    let (_, q, g) = fixtures::sample_pair();
    let oracle = oracle_enumerate(&q, &g).unwrap();
    let expected: BTreeSet<Vec<usize>> = fixtures::SAMPLE_PAIR_WITNESSES
        .iter()
        .map(|w| w.to_vec())
        .collect();
    let mut ok = images(&oracle) == expected;
    for engine in Engine::ALL {
        let o = fastiso::match_with(engine, &q, &g, 2, MatchMode::CountAll).unwrap();
        ok &= images(&o.witnesses) == expected;
    }
    let distinct = oracle_dedupe_redundant(&oracle, &q, &g).len();
    verdict(
        ok && distinct == 2,
        format!("{} witnesses, {distinct} distinct embeddings", oracle.len()),
    )
}

fn cover_size_law() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED + 4);
    let mut bad_size = 0;
    let mut bad_cover = 0;
    for i in 0..COVER_QUERIES {
        let span = COVER_EDGES.end() - COVER_EDGES.start() + 1;
        let edges = COVER_EDGES.start() + i % span;
        let q = common::random_query_with_edges(&mut rng, edges);
        for max_len in 1..=3 {
            let c = cover_query(&q, max_len).unwrap();
            let mut seen = BTreeSet::new();
            let mut disjoint = true;
            for p in c.paths() {
                for (a, b) in p.path().edges() {
                    disjoint &= seen.insert((a.min(b), a.max(b)));
                }
            }
            if !disjoint || seen.len() != q.edge_count() {
                bad_cover += 1;
            }
            if max_len == 2 && c.len() != edges / 2 + edges % 2 {
                bad_size += 1;
            }
        }
    }
    let a = fixtures::sample_alphabet();
    let k7 = cover_query(&fixtures::complete_graph(&a, 7), 2)
        .unwrap()
        .len();
    verdict(
        bad_size == 0 && bad_cover == 0 && k7 == K7_COVER_PATHS,
        format!(
            "{COVER_QUERIES} queries, {bad_size} size violations, {bad_cover} bad covers, K7 -> {k7} paths"
        ),
    )
}

fn query_sets(ds: &GraphDataset, seed: u64) -> Vec<QuerySet> {
    QUERY_SIZES
        .iter()
        .map(|&k| extract_queries(ds, k, QUERIES_PER_SET, seed + k as u64).unwrap())
        .collect()
}

fn timing_config() -> BenchConfig {
    BenchConfig {
        repetitions: TIMING_REPETITIONS,
        ..BenchConfig::default()
    }
}

fn totals(report: &BenchReport, dataset: &str, engine: Engine) -> Vec<f64> {
    QUERY_SIZES
        .iter()
        .map(|k| {
            report
                .row(engine, dataset, &format!("Q{k}"))
                .unwrap()
                .total_ms
        })
        .collect()
}

fn fmt_ms(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:.1}"))
        .collect::<Vec<_>>()
        .join("/")
}

fn sparse_trend() -> Verdict {
    let started = Instant::now();
    let ds = generate_dataset(&GenParams::new(1_000, 27, 0.1, 10).with_seed(7)).unwrap();
    let qs = query_sets(&ds, 70);
    let report = run_benchmark(&timing_config(), &[("sparse".into(), ds)], &qs).unwrap();
    let (u, on, p) = (
        totals(&report, "sparse", Engine::Ullman),
        totals(&report, "sparse", Engine::FastOn),
        totals(&report, "sparse", Engine::FastP),
    );
    let p_wins = p.iter().zip(&on).filter(|(p, on)| p <= on).count();
    let on_wins = on.iter().zip(&u).filter(|(on, u)| on <= u).count();
    let elapsed = started.elapsed();
    verdict(
        p_wins >= SPARSE_FAST_P_WINS
            && on_wins >= SPARSE_FAST_ON_WINS
            && report.disagreements.is_empty()
            && elapsed < TREND_BUDGET,
        format!(
            "fast-p <= fast-on on {p_wins}/6, fast-on <= ullman on {on_wins}/6; ms ullman {} fast-on {} fast-p {}; {:.1}s",
            fmt_ms(&u),
            fmt_ms(&on),
            fmt_ms(&p),
            elapsed.as_secs_f64()
        ),
    )
}

fn dense_trend() -> Verdict {
    let started = Instant::now();
    let ds = generate_dataset(&GenParams::new(500, 30, 0.5, 50).with_seed(8)).unwrap();
    let qs = query_sets(&ds, 80);
    let config = BenchConfig {
        engines: vec![Engine::FastOn, Engine::FastP],
        ..timing_config()
    };
    let report = run_benchmark(&config, &[("dense".into(), ds)], &qs).unwrap();
    let (on, p) = (
        totals(&report, "dense", Engine::FastOn),
        totals(&report, "dense", Engine::FastP),
    );
    let on_wins = on.iter().zip(&p).filter(|(on, p)| on < p).count();
    let elapsed = started.elapsed();
    verdict(
        on_wins == QUERY_SIZES.len() && report.disagreements.is_empty() && elapsed < TREND_BUDGET,
        format!(
            "fast-on < fast-p on {on_wins}/6; ms fast-on {} fast-p {}; {:.1}s",
            fmt_ms(&on),
            fmt_ms(&p),
            elapsed.as_secs_f64()
        ),
    )
}

fn scalability() -> Verdict {
    let largest = *SCALE_SIZES.last().unwrap();
    let ds = generate_dataset(&GenParams::new(largest, 27, 0.1, 10).with_seed(9)).unwrap();
    let qs = extract_queries(&ds, SCALE_QUERY_EDGES, QUERIES_PER_SET, 90).unwrap();
    let report = run_scalability(&timing_config(), "scale", &ds, &qs, &SCALE_SIZES).unwrap();
    let mut pass = report.disagreements.is_empty();
    let mut fits = Vec::new();
    for engine in Engine::ALL {
        let points: Vec<(f64, f64)> = SCALE_SIZES
            .iter()
            .map(|&k| {
                let row = report
                    .row(engine, &format!("scale[{k}]"), qs.name())
                    .unwrap();
                (k as f64, row.total_ms)
            })
            .collect();
        let (_, _, r2) = linear_fit(&points);
        pass &= r2 >= SCALE_MIN_R2;
        let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
        fits.push(format!("{engine} R2={r2:.4} ms {}", fmt_ms(&ys)));
    }
    verdict(pass, fits.join(", "))
}

fn round_trip() -> Verdict {
    let params = GenParams::new(300, 27, 0.1, 10).with_seed(10);
    let a = generate_dataset(&params).unwrap();
    let b = generate_dataset(&params).unwrap();
    let same_bytes = format_dataset(&a) == format_dataset(&b);

    let dir = std::env::temp_dir().join(format!("fastiso-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("round_trip.txt");
    write_dataset(&a, &path).unwrap();
    let back = read_dataset(&path, &ReadOptions::default()).unwrap();
    let identity = back.same_structure(&a) && format_dataset(&back) == format_dataset(&a);
    let _ = std::fs::remove_dir_all(&dir);

    let qs = extract_queries(&a, 6, 20, 11).unwrap();
    let config = BenchConfig {
        engines: Engine::ALL.to_vec(),
        ..BenchConfig::default()
    };
    let stable = |r: &BenchReport| {
        r.rows
            .iter()
            .map(|row| row.stable_fields())
            .collect::<Vec<_>>()
    };
    let r1 = run_benchmark(&config, &[("a".into(), a)], std::slice::from_ref(&qs)).unwrap();
    let r2 = run_benchmark(&config, &[("a".into(), b)], std::slice::from_ref(&qs)).unwrap();
    let same_columns = stable(&r1) == stable(&r2);
    verdict(
        same_bytes && identity && same_columns,
        format!(
            "byte-identical {same_bytes}, read/write identity {identity}, stable columns equal {same_columns}"
        ),
    )
}

fn main() -> ExitCode {
    let corpus = run_corpus();
    let c = &corpus;
    let results = [
        (
            "oracle equivalence",
            verdict(
                c.pairs >= CORPUS_PAIRS && c.verdict_mismatches == 0 && c.elapsed < CORPUS_BUDGET,
                format!(
                    "{} pairs ({} positive), {} disagreements, {:.1}s",
                    c.pairs,
                    c.positives,
                    c.verdict_mismatches,
                    c.elapsed.as_secs_f64()
                ),
            ),
        ),
        (
            "witness sets",
            verdict(
                c.witness_mismatches == 0,
                format!("{} differing pairs", c.witness_mismatches),
            ),
        ),
        ("fixture witnesses", fixture_witnesses()),
        ("cover size law", cover_size_law()),
        (
            "filtering necessity",
            verdict(
                c.vertex_exclusions == 0 && c.path_exclusions == 0,
                format!(
                    "{} vertex, {} path exclusions",
                    c.vertex_exclusions, c.path_exclusions
                ),
            ),
        ),
        (
            "counter conservation",
            verdict(
                c.unclear_states == 0,
                format!("{} searches left state behind", c.unclear_states),
            ),
        ),
        ("sparse trend", sparse_trend()),
        ("dense trend", dense_trend()),
        ("scalability", scalability()),
        ("round trip and determinism", round_trip()),
    ];
    let mut failed = 0;
    for (i, (name, v)) in results.iter().enumerate() {
        println!(
            "criterion {:>2} {name}: {} ({})",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        failed += !v.pass as usize;
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
