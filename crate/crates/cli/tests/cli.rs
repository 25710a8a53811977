use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn tomo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tomo"))
        .args(args)
        .output()
        .expect("run tomo")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen(args: &[&str], name: &str) -> PathBuf {
    let o = tomo(args);
    assert!(o.status.success(), "{}", stderr(&o));
    scratch(name, &stdout(&o))
}

#[test]
fn gen_example1_line_counts() {
    let o = tomo(&["gen", "example1", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("tomo-pair 1\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("F1 ")).count(), 20);
    assert_eq!(text.lines().filter(|l| l.starts_with("F2 ")).count(), 20);
}

#[test]
fn gen_example3_and_out_flag() {
    let out = scratch("ex3.pair", "");
    let o = tomo(&["gen", "example3", "--n", "4", "--alpha", "3", "-o", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("F1 ")).count(), 76);
}

#[test]
fn gen_rejects_bad_parameters() {
    let o = tomo(&["gen", "example2", "--k", "1", "--m", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid parameters"));
}

#[test]
fn analyze_example1() {
    let path = gen(&["gen", "example1", "--m", "3"], "ex1m3.pair");
    let o = tomo(&["analyze", p(&path)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("alpha 8 p 0 u 20\n"), "{text}");
    assert!(text.contains("unique: yes"));
    let harmonic = text.lines().find(|l| l.starts_with("harmonic ")).unwrap();
    assert!(harmonic.ends_with("20 ≤ 20 OK"), "{harmonic}");
    assert!(text.ends_with("0 violated\n"));
}

#[test]
fn analyze_non_unique() {
    let path = scratch(
        "nonunique.pair",
        "tomo-pair 1\nF1 1 1\nF1 2 2\nF2 1 2\nF2 2 1\n",
    );
    let o = tomo(&["analyze", p(&path)]);
    assert_eq!(o.status.code(), Some(4));
    let text = stdout(&o);
    assert!(text.contains("unique: no"));
    assert!(!text.contains(" OK"));
}

#[test]
fn analyze_input_errors() {
    let empty = scratch("emptyf1.pair", "tomo-pair 1\nF2 1 1\n");
    let o = tomo(&["analyze", p(&empty)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("F1 empty"));

    let bad = scratch("bad.pair", "tomo-pair 1\nF1 1 1\n# fine\nF2 0 1\n");
    let o = tomo(&["analyze", p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));

    let o = tomo(&["analyze", "/definitely/not/here.pair"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn decompose_trivial_pair() {
    let path = scratch("trivial.pair", "tomo-pair 1\nF1 1 1\nF2 1 2\n");
    let o = tomo(&["decompose", p(&path)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("staircases 1\n"));
    assert!(text.contains("S 1: (1,1)/1 -> (1,2)/2\n"));
}

#[test]
fn decompose_example1_and_check_certificate() {
    let path = gen(&["gen", "example1", "--m", "2"], "ex1m2.pair");
    let cert = scratch("ex1m2.cert", "");
    let o = tomo(&["decompose", p(&path), "--cert", p(&cert)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("staircases 4\n"));
    let o = tomo(&["check-cert", p(&path), p(&cert)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // drop the last staircase
    let text = fs::read_to_string(&cert).unwrap();
    let cut: Vec<&str> = text.lines().collect();
    let tampered = scratch("ex1m2-bad.cert", &(cut[..cut.len() - 1].join("\n") + "\n"));
    let o = tomo(&["check-cert", p(&path), p(&tampered)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("rejected"));
}

#[test]
fn decompose_unequal_sizes() {
    let path = scratch(
        "unequal.pair",
        "tomo-pair 1\nF1 1 1\nF1 1 2\nF1 2 1\nF2 3 3\n",
    );
    let o = tomo(&["decompose", p(&path)]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("--equalize"));
    let cert = scratch("unequal.cert", "");
    let o = tomo(&["decompose", p(&path), "--equalize", "--cert", p(&cert)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = tomo(&["check-cert", p(&path), p(&cert), "--equalize"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn decompose_relabels_to_canonical_order() {
    // F1 is a column, not yet in triangular order
    let path = scratch(
        "column.pair",
        "tomo-pair 1\nF1 1 2\nF1 2 2\nF2 1 1\nF2 2 3\n",
    );
    let o = tomo(&["decompose", p(&path)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("order: relabeled"));
}

#[test]
fn render_ascii_and_pbm() {
    let path = scratch("render.pair", "tomo-pair 1\nF1 1 1\nF2 1 2\n");
    let o = tomo(&["render", p(&path)]);
    assert_eq!(stdout(&o), "ox\n");
    let o = tomo(&["render", p(&path), "--format", "pbm"]);
    assert_eq!(stdout(&o), "P1\n# F1\n2 1\n1 0\nP1\n# F2\n2 1\n0 1\n");

    let empty = scratch("empty.pair", "tomo-pair 1\n");
    let o = tomo(&["render", p(&empty)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
}

#[test]
fn render_example2_golden() {
    let golden = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/example2_k3_m4.txt"
    );
    let pair = gen(&["gen", "example2", "--k", "3", "--m", "4"], "ex2.pair");
    let frozen = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/example2_k3_m4.pair"
    );
    assert_eq!(
        fs::read_to_string(&pair).unwrap(),
        fs::read_to_string(frozen).unwrap()
    );
    let o = tomo(&["render", p(&pair)]);
    assert_eq!(stdout(&o), fs::read_to_string(golden).unwrap());
}

#[test]
fn verify_small_disjoint_run() {
    let o = tomo(&[
        "verify",
        "--max-cells",
        "4",
        "--box",
        "5x5",
        "--mode",
        "disjoint",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("0 violations\n"));
}

#[test]
fn verify_guard() {
    let o = tomo(&["verify", "--max-cells", "8", "--box", "9x9"]);
    assert_eq!(o.status.code(), Some(6));
    assert!(stderr(&o).contains("--allow-large"));
}

#[test]
fn verify_reports_injected_fault() {
    let cex = scratch("cex.pair", "");
    let o = tomo(&[
        "verify",
        "--max-cells",
        "3",
        "--box",
        "3x3",
        "--inject-fault",
        "--counterexample-out",
        p(&cex),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!stdout(&o).contains("\n0 violations"));
    let text = fs::read_to_string(&cex).unwrap();
    assert!(text.starts_with("tomo-pair 1\n# counterexample: "));
    // the written instance is itself a valid pair file
    let o = tomo(&["analyze", p(&cex)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_rejects_bad_flags() {
    let o = tomo(&["verify", "--box", "5by5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tomo(&["verify", "--mode", "sideways"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tomo(&["verify", "--max-cells", "6", "--box", "3x3"]);
    assert_eq!(o.status.code(), Some(2));
}
