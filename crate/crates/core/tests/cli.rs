use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_xorshift-gf2"));
    cmd.env_remove("XORSHIFT_FACTOR_TABLE");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_spec(dir: &Path, poly: &str, m: &str) -> String {
    let path = dir.join("spec.txt");
    let o = run(&[
        "construct",
        "--poly",
        poly,
        "--word-size",
        m,
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    path.to_str().unwrap().to_string()
}

#[test]
fn construct_examples() {
    let o = run(&["construct", "--poly", "degs:4,1,0", "--word-size", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("m=2\nn=2\nv0=hex:2\nv1=hex:2\n"), "{text}");

    let o = run(&["construct", "--poly", "degs:4,3,2,1,0", "--word-size", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not primitive"));

    let o = run(&["construct", "--poly", "degs:2,1,0", "--word-size", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("m=1\nn=2\n"));

    assert_eq!(
        run(&["construct", "--poly", "x^4+x+1", "--word-size", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["construct", "--poly", "degs:4,1,0", "--word-size", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["construct", "--poly", "degs:4,1,0"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn sample_examples() {
    let o = run(&[
        "sample",
        "--m",
        "4",
        "--n",
        "4",
        "--k",
        "4",
        "--search-seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("tap_count=4"));
    assert!(stderr(&o).contains("attempts"));
    let again = run(&[
        "sample",
        "--m",
        "4",
        "--n",
        "4",
        "--k",
        "4",
        "--search-seed",
        "1",
    ]);
    assert_eq!(stdout(&o), stdout(&again));

    // Three operations on four stages: no primitive polynomial has that shape.
    let o = run(&[
        "sample",
        "--m",
        "4",
        "--n",
        "4",
        "--k",
        "3",
        "--search-seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(4));

    assert_eq!(
        run(&["sample", "--m", "4", "--n", "4", "--k", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["sample", "--m", "4", "--n", "4", "--k", "6"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn stream_round_trip_and_regression() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "degs:4,1,0", "2");
    let out = dir.path().join("bits.bin");
    let o = run(&[
        "stream",
        "--spec",
        &spec,
        "--seed",
        "1,1",
        "--bits",
        "15",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(fs::read(&out).unwrap(), [0x48, 0x5a]);

    let a = run(&[
        "stream", "--spec", &spec, "--seed", "0x3,0b10", "--bits", "1e4",
    ]);
    let b = run(&[
        "stream", "--spec", &spec, "--seed", "3,2", "--bits", "10000",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout.len(), 1250);
    assert_eq!(a.stdout, b.stdout);

    let o = run(&["stream", "--spec", &spec, "--seed", "0,0", "--bits", "8"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["stream", "--spec", &spec, "--seed", "2,2", "--bits", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    let o = run(&[
        "stream",
        "--spec",
        &spec,
        "--seed",
        "2,2",
        "--bits",
        "8",
        "--allow-degraded",
    ]);
    assert!(stderr(&o).is_empty());
}

#[test]
fn analysis_commands() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "degs:4,1,0", "2");
    let o = run(&["period", "--spec", &spec, "--seed", "1,1"]);
    assert_eq!(stdout(&o).trim(), "15");

    let o = run(&["census", "--m", "2", "--n", "2"]);
    assert_eq!(stdout(&o).trim(), "2");
    let o = run(&["census", "--m", "4", "--n", "2", "--format", "tsv"]);
    assert_eq!(stdout(&o), "m\tn\tcensus\n4\t2\t16\n");

    let o = run(&[
        "check-triplet",
        "--m",
        "1",
        "--n",
        "2",
        "--a",
        "3",
        "--b",
        "1",
        "--c",
        "2",
        "--format",
        "tsv",
    ]);
    assert_eq!(stdout(&o), "a\tb\tc\tprimitive\n3\t1\t2\ttrue\n");
    let o = run(&[
        "check-triplet",
        "--m",
        "4",
        "--n",
        "2",
        "--max-shift",
        "4",
        "--format",
        "tsv",
    ]);
    assert_eq!(stdout(&o).lines().count(), 28);
    assert!(stdout(&o).contains("2\t1\t3\ttrue"));
}

#[test]
fn weakness_renders_table() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.txt");
    let o = run(&[
        "sample",
        "--m",
        "8",
        "--n",
        "4",
        "--k",
        "5",
        "--search-seed",
        "2",
        "--out",
        spec.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&[
        "weakness",
        "--spec",
        spec.to_str().unwrap(),
        "--d",
        "0x08",
        "--l",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("pattern_ok=true"));
    assert!(text.contains("Iteration No."));
    assert!(text.contains("(01, 00, 00, 00)"));

    let o = run(&[
        "weakness",
        "--spec",
        spec.to_str().unwrap(),
        "--d",
        "0x08",
        "--l",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bench_zero_bits_has_no_ratios() {
    let o = run(&[
        "bench",
        "--mn",
        "64",
        "--word-sizes",
        "8,16",
        "--bits",
        "0",
        "--format",
        "tsv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Vec<String>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[2] == "0" && r[5] == "-"));
    assert_eq!(
        run(&["bench", "--mn", "64", "--word-sizes", "3", "--bits", "8"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn factor_table_flag_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.txt");
    // 2^89 - 1 is prime but beyond the deterministic Miller-Rabin range.
    fs::write(&table, "89: 618970019642690137449562111\n").unwrap();
    let t = table.to_str().unwrap();

    let o = run(&["census", "--m", "1", "--n", "89", "--factor-table", t]);
    assert_eq!(
        o.status.code(),
        Some(1),
        "untrusted large factor must be rejected"
    );
    let o = run(&[
        "census",
        "--m",
        "1",
        "--n",
        "89",
        "--factor-table",
        t,
        "--trust-table",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = bin()
        .args(["census", "--m", "1", "--n", "89", "--trust-table"])
        .env("XORSHIFT_FACTOR_TABLE", t)
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "6954719321827979072466990"); // (2^89 - 2) / 89

    let o = run(&["census", "--m", "1", "--n", "89"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn stream_stops_when_reader_hangs_up() {
    use std::io::Read;
    use std::process::Stdio;

    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "degs:4,1,0", "2");
    let mut child = bin()
        .args(["stream", "--spec", &spec, "--seed", "1,1", "--bits", "1e15"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut first = [0u8; 4];
    child.stdout.take().unwrap().read_exact(&mut first).unwrap();
    // Dropping the pipe must end the run instead of generating 1e15 bits.
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
