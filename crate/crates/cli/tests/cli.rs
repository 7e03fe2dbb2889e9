use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const QUERY: &str = "t # q\nv 0 A\nv 1 X\nv 2 B\ne 0 1 a\ne 1 2 b\n";
const DATA: &str = "\
t # g0
v 0 A
v 1 X
v 2 B
v 3 B
e 0 1 a
e 1 2 b
e 1 3 b
t # g1
v 0 A
v 1 B
e 0 1 a
";

fn fastiso(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fastiso"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("q.txt"), QUERY).unwrap();
    fs::write(dir.path().join("g.txt"), DATA).unwrap();
    dir
}

#[test]
fn match_exit_codes() {
    let dir = fixture_dir();
    for engine in ["ullman", "fast-on", "fast-p"] {
        let o = fastiso(dir.path(), &["match", "q.txt", "g.txt", "--engine", engine]);
        assert_eq!(o.status.code(), Some(0), "{engine}: {}", stdout(&o));
        let text = stdout(&o);
        assert!(text.contains("g0\tfound"));
        assert!(text.contains("g1\tnot-found"));
    }

    fs::write(
        dir.path().join("miss.txt"),
        "t # m\nv 0 A\nv 1 A\ne 0 1 a\n",
    )
    .unwrap();
    let o = fastiso(dir.path(), &["match", "miss.txt", "g.txt"]);
    assert_eq!(o.status.code(), Some(1));

    let o = fastiso(dir.path(), &["match", "nope.txt", "g.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn match_count_all_lists_every_embedding() {
    let dir = fixture_dir();
    let o = fastiso(
        dir.path(),
        &[
            "match",
            "q.txt",
            "g.txt",
            "--engine",
            "fast-p",
            "--maxL",
            "2",
            "--mode",
            "count-all",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("count=2"), "{text}");
    assert!(text.contains("0->0 1->1 2->2"));
    assert!(text.contains("0->0 1->1 2->3"));
}

#[test]
fn strip_edge_labels_relaxes_matching() {
    let dir = fixture_dir();
    fs::write(dir.path().join("q2.txt"), "t # q\nv 0 A\nv 1 X\ne 0 1 z\n").unwrap();
    let o = fastiso(dir.path(), &["match", "q2.txt", "g.txt"]);
    assert_eq!(o.status.code(), Some(1));
    let o = fastiso(
        dir.path(),
        &["match", "q2.txt", "g.txt", "--strip-edge-labels"],
    );
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bad_usage_is_rejected() {
    let dir = fixture_dir();
    let o = fastiso(dir.path(), &["match", "q.txt", "g.txt", "--engine", "vf2"]);
    assert_ne!(o.status.code(), Some(0));
    let o = fastiso(dir.path(), &["match", "q.txt", "g.txt", "--mode", "all"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        [
            "gen",
            "--name",
            "Syn50.E12.D3.L5",
            "--seed",
            "9",
            "--output",
            out,
        ]
    };
    assert!(fastiso(dir.path(), &args("a.txt")).status.success());
    assert!(fastiso(dir.path(), &args("b.txt")).status.success());
    let a = fs::read(dir.path().join("a.txt")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.txt")).unwrap());
    let o = fastiso(dir.path(), &["validate", "a.txt"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("50 graphs"));
}

#[test]
fn gen_extract_bench_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let gen_args = [
        "gen",
        "--graphs",
        "60",
        "--edges",
        "15",
        "--density",
        "0.2",
        "--labels",
        "6",
        "--seed",
        "3",
        "--output",
        "d.txt",
    ];
    assert!(fastiso(p, &gen_args).status.success());
    let o = fastiso(
        p,
        &[
            "extract-queries",
            "d.txt",
            "--size",
            "4,6",
            "--count",
            "12",
            "--seed",
            "5",
            "--output",
            "qs",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = fastiso(p, &["validate", "--queries", "qs/Q4.txt", "qs/Q6.txt"]);
    assert!(o.status.success());

    let o = fastiso(
        p,
        &[
            "bench",
            "--data",
            "d.txt",
            "--queries",
            "qs/Q4.txt",
            "qs/Q6.txt",
            "--timeout-ms",
            "5000",
            "--output",
            "r.csv",
            "--format",
            "csv",
            "--plotdata",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(p.join("r.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 2);
    assert!(csv.starts_with("engine,dataset,graphs,queryset"));
    for engine in ["ullman", "fast-on", "fast-p"] {
        assert!(p.join(format!("{engine}.dat")).exists());
    }

    let o = fastiso(
        p,
        &[
            "bench",
            "--data",
            "d.txt",
            "--queries",
            "qs/Q4.txt",
            "--format",
            "markdown",
        ],
    );
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("| ")).count(),
        1 + 3
    );
}

#[test]
fn paths_dumps_cover_and_candidates() {
    let dir = fixture_dir();
    let o = fastiso(
        dir.path(),
        &["paths", "q.txt", "--data", "g.txt", "--maxL", "2"],
    );
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("1 cover paths"), "{text}");
    assert!(text.contains("g0\t2"));
    assert!(text.contains("g1\t0"));
}

#[test]
fn validate_reports_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.txt"), "t # 0\nv 0 A\nv 2 B\n").unwrap();
    let o = fastiso(dir.path(), &["validate", "bad.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("line 3"));
}
