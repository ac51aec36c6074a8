use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use invlam::lambda::Signature;
use invlam::learner::parse_checkpoint;
use invlam::lexicon::{generalize_all, Lexicon};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
}

fn invlam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invlam"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn train_give_me(dir: &Path, extra: &[&str]) -> PathBuf {
    let out = dir.join("t1.ckpt");
    let corpus = data("give-me.txt");
    let lex = data("give-me-no-largest.lex");
    let mut args = vec![
        "train",
        "--corpus",
        path(&corpus),
        "--lexicon",
        path(&lex),
        "--lexicon-out",
        path(&out),
        "--epochs",
        "5",
    ];
    args.extend_from_slice(extra);
    let o = invlam(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn train_then_parse_give_me() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = train_give_me(dir.path(), &[]);
    let o = invlam(&[
        "parse",
        "--lexicon-in",
        path(&ckpt),
        "Give me the largest state.",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "answer(A,largest(A,state(A)))");
}

#[test]
fn unknown_word_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = train_give_me(dir.path(), &[]);
    let o = invlam(&[
        "parse",
        "--lexicon-in",
        path(&ckpt),
        "Give me the largest zebra",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).trim(), "NO-PARSE");
}

#[test]
fn missing_input_exits_one() {
    let o = invlam(&[
        "train",
        "--corpus",
        "/nonexistent",
        "--lexicon",
        "/nonexistent",
        "--lexicon-out",
        "/tmp/x",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = invlam(&["parse", "--lexicon-in", "/nonexistent", "hi"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn zero_examples_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("empty.txt");
    fs::write(&corpus, "# nothing\n").unwrap();
    let lex = data("give-me-no-largest.lex");
    let out = dir.path().join("o");
    let o = invlam(&[
        "train",
        "--corpus",
        path(&corpus),
        "--lexicon",
        path(&lex),
        "--lexicon-out",
        path(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn zero_epochs_writes_generalized_initial_lexicon() {
    let dir = tempfile::tempdir().unwrap();
    let lex_path = data("geo-mini.lex");
    let corpus = data("geo-mini.txt");
    let out = dir.path().join("c.ckpt");
    let o = invlam(&[
        "train",
        "--corpus",
        path(&corpus),
        "--lexicon",
        path(&lex_path),
        "--lexicon-out",
        path(&out),
        "--epochs",
        "0",
    ]);
    assert!(o.status.success());
    let (written, cfg) =
        parse_checkpoint(&fs::read_to_string(&out).unwrap(), &Signature::dynamic()).unwrap();
    assert_eq!(cfg.unwrap().epochs, 0);
    let l0 = Lexicon::load(&lex_path, &Signature::dynamic()).unwrap();
    assert_eq!(written.triples(), generalize_all(&l0).triples());
}

#[test]
fn env_override_matches_flag() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = data("give-me.txt");
    let lex = data("give-me-no-largest.lex");
    let out = dir.path().join("env.ckpt");
    let o = Command::new(env!("CARGO_BIN_EXE_invlam"))
        .args([
            "train",
            "--corpus",
            path(&corpus),
            "--lexicon",
            path(&lex),
            "--lexicon-out",
            path(&out),
        ])
        .env("INVLAM_EPOCHS", "5")
        .output()
        .unwrap();
    assert!(o.status.success());
    let flag = train_give_me(dir.path(), &[]);
    assert_eq!(fs::read(out).unwrap(), fs::read(flag).unwrap());
}

#[test]
fn same_seed_same_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let x = train_give_me(a.path(), &["--seed", "7", "--shuffle"]);
    let y = train_give_me(b.path(), &["--seed", "7", "--shuffle"]);
    assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
}

#[test]
fn metrics_are_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.jsonl");
    train_give_me(dir.path(), &["--metrics", path(&m)]);
    let text = fs::read_to_string(&m).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    for (i, l) in lines.iter().enumerate() {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        assert_eq!(v["epoch"], i + 1);
    }
}

#[test]
fn eval_prints_table() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = train_give_me(dir.path(), &[]);
    let corpus = data("give-me.txt");
    let o = invlam(&[
        "eval",
        "--corpus",
        path(&corpus),
        "--lexicon-in",
        path(&ckpt),
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("Precision") && out.contains("F-measure"));
    assert!(out.lines().nth(1).unwrap().contains("100.00"));
}

#[test]
fn unify_define_changes_scoring() {
    let dir = tempfile::tempdir().unwrap();
    let lex = dir.path().join("l.lex");
    fs::write(&lex, "define\tS\tdefinec(def1,bowner(our))\n").unwrap();
    let corpus = dir.path().join("c.txt");
    fs::write(&corpus, "define\n(definer \"def1\" (bowner our))\n").unwrap();
    let base = [
        "eval",
        "--dialect",
        "clang",
        "--corpus",
        path(&corpus),
        "--lexicon",
        path(&lex),
    ];
    let plain = stdout(&invlam(&base));
    assert!(plain.lines().nth(1).unwrap().contains("0.00"));
    let mut args = base.to_vec();
    args.push("--unify-define");
    let unified = stdout(&invlam(&args));
    assert!(unified.lines().nth(1).unwrap().contains("100.00"));
}

#[test]
fn crossval_has_aggregate_row() {
    let corpus = data("geo-mini.txt");
    let lex = data("geo-mini.lex");
    let o = invlam(&[
        "crossval",
        "--corpus",
        path(&corpus),
        "--lexicon",
        path(&lex),
        "--epochs",
        "5",
        "--folds",
        "4",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("fold")).count(), 4);
    assert!(out.lines().last().unwrap().starts_with("aggregate"));
}

#[test]
fn inverse_prints_candidates() {
    let o = invlam(&["inverse", "in(river,Texas)", "\\v.v@Texas@river"]);
    assert!(o.status.success());
    assert!(stdout(&o)
        .lines()
        .any(|l| l.starts_with("\\v1.\\v2.in(v2,v1)")));
    let o = invlam(&["inverse", "--direction", "left", "fly(john)", "john"]);
    assert!(stdout(&o).contains("fly("));
}
