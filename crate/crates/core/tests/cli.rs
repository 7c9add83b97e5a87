use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use edit_mbr::cli::{file_digest, RunManifest};
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_edit-mbr"));
    cmd.env_remove("EDIT_MBR_THREADS");
    cmd
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn read(dir: &TempDir, name: &str) -> String {
    std::fs::read_to_string(dir.path().join(name)).unwrap()
}

/// Three systems over "a b c": h1 = {B}, h2 = {B, d}, h3 = {}.
fn abc(dir: &TempDir) {
    write(dir, "src.txt", "a b c\n");
    write(dir, "h1.txt", "a B c\n");
    write(dir, "h2.txt", "a B c d\n");
    write(dir, "h3.txt", "a b c\n");
}

#[test]
fn extract_then_apply_round_trips() {
    let dir = TempDir::new().unwrap();
    write(&dir, "src.txt", "He go to school .\nThis is fine .\n\nI like it\n");
    write(&dir, "hyp.txt", "He goes to the school .\nThis is fine .\nHello\nI like it !\n");
    let o = run(&["extract", "-s", "src.txt", "--hyp", "hyp.txt", "-o", "out.m2"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let m2 = read(&dir, "out.m2");
    assert_eq!(
        m2,
        "S He go to school .\n\
         A 1 2|||UNK|||goes|||REQUIRED|||-NONE-|||0\n\
         A 3 3|||UNK|||the|||REQUIRED|||-NONE-|||0\n\
         \n\
         S This is fine .\n\
         A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0\n\
         \n\
         S\n\
         A 0 0|||UNK|||Hello|||REQUIRED|||-NONE-|||0\n\
         \n\
         S I like it\n\
         A 3 3|||UNK|||!|||REQUIRED|||-NONE-|||0\n\
         \n"
    );
    assert!(dir.path().join("out.m2.manifest.json").exists());

    let o = run(&["apply", "-s", "src.txt", "--m2", "out.m2"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), read(&dir, "hyp.txt"));
}

#[test]
fn no_merge_splits_edits() {
    let dir = TempDir::new().unwrap();
    write(&dir, "src.txt", "a b c d\n");
    write(&dir, "hyp.txt", "a X Y d\n");
    let o = run(&["extract", "-s", "src.txt", "--hyp", "hyp.txt", "--no-merge"], dir.path());
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().filter(|l| l.starts_with('A')).map(String::from).collect();
    assert_eq!(lines.len(), 2);
}

#[test]
fn data_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    write(&dir, "src.txt", "a b c\n");
    write(&dir, "bad.m2", "S a b c\nA 2 9|||UNK|||x|||REQUIRED|||-NONE-|||0\n\n");
    let o = run(&["apply", "-s", "src.txt", "--m2", "bad.m2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.m2"), "{}", stderr(&o));

    write(&dir, "short.txt", "");
    let o = run(&["combine", "-s", "src.txt", "--hyp", "short.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["combine", "-s", "src.txt", "--hyp", "missing.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing.txt"));
}

#[test]
fn usage_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    abc(&dir);
    for args in [
        vec!["combine", "-s", "src.txt"],
        vec!["combine", "-s", "src.txt", "--hyp", "h1.txt", "--method", "best"],
        vec!["combine", "-s", "src.txt", "--hyp", "h1.txt", "--pool-votes", "0", "--method", "greedy"],
        vec!["combine", "-s", "src.txt", "--hyp", "h1.txt", "--beta", "-1"],
        vec!["frobnicate"],
    ] {
        let o = run(&args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
    }
    let o = bin()
        .current_dir(dir.path())
        .env("EDIT_MBR_THREADS", "many")
        .args(["combine", "-s", "src.txt", "--hyp", "h1.txt"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn combine_methods_on_fixture() {
    let dir = TempDir::new().unwrap();
    abc(&dir);
    let combine = |extra: &[&str]| {
        let mut args = vec!["combine", "-s", "src.txt", "--hyp", "h1.txt", "h2.txt", "h3.txt"];
        args.extend_from_slice(extra);
        let o = run(&args, dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
        o
    };
    assert_eq!(stdout(&combine(&["--reward", "f"])), "a B c\n");
    assert_eq!(stdout(&combine(&["--reward", "recall"])), "a B c d\n");
    assert_eq!(stdout(&combine(&["--reward", "precision"])), "a b c\n");
    assert_eq!(stdout(&combine(&["--method", "mbr-vote"])), "a B c\n");

    let o = combine(&["--method", "greedy", "--pool-votes", "1", "--trace", "trace.jsonl", "--report"]);
    assert_eq!(stdout(&o), "a B c\n");
    assert_eq!(
        read(&dir, "trace.jsonl"),
        "{\"sentence\":0,\"edit\":{\"start\":1,\"end\":2,\"replacement\":[\"B\"]},\"before\":\"0.333333\",\"after\":\"0.611111\"}\n"
    );
    let report = stderr(&o);
    assert!(report.contains("0\th1.txt\t0.611111"), "{report}");
    assert!(report.contains("0\tgreedy\t0.611111"), "{report}");

    let o = combine(&["--out-format", "m2"]);
    assert_eq!(stdout(&o), "S a b c\nA 1 2|||UNK|||B|||REQUIRED|||-NONE-|||0\n\n");
}

#[test]
fn single_hypothesis_is_returned_unchanged() {
    let dir = TempDir::new().unwrap();
    write(&dir, "src.txt", "a b c\nx y\n");
    write(&dir, "h.txt", "a c d\nx Y y\n");
    for method in ["mbr", "mbr-vote", "greedy"] {
        let o = run(&["combine", "-s", "src.txt", "--hyp", "h.txt", "--method", method], dir.path());
        assert!(o.status.success());
        assert_eq!(stdout(&o), "a c d\nx Y y\n", "{method}");
    }
}

#[test]
fn m2_hypotheses_are_accepted() {
    let dir = TempDir::new().unwrap();
    abc(&dir);
    for h in ["h1", "h2", "h3"] {
        let o = run(&["extract", "-s", "src.txt", "--hyp", &format!("{h}.txt"), "-o", &format!("{h}.m2")], dir.path());
        assert!(o.status.success());
    }
    let o = run(&["combine", "-s", "src.txt", "--hyp", "h1.m2", "h2.m2", "h3.m2"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "a B c\n");
}

#[test]
fn score_lines() {
    let dir = TempDir::new().unwrap();
    write(&dir, "src.txt", "a b c\na b c\n");
    write(&dir, "hyp.txt", "a B c\na B c d\n");
    write(
        &dir,
        "ref.m2",
        "S a b c\nA 1 2|||UNK|||B|||REQUIRED|||-NONE-|||0\nA 3 3|||UNK|||d|||REQUIRED|||-NONE-|||0\n\n\
         S a b c\nA 1 2|||UNK|||B|||REQUIRED|||-NONE-|||0\n\n",
    );
    let o = run(&["score", "-s", "src.txt", "--hyp", "hyp.txt", "--ref", "ref.m2"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "P 0.6667 R 0.6667 F0.5 0.6667\n");

    let o = run(&["score", "-s", "src.txt", "--hyp", "hyp.txt", "--ref", "ref.m2", "--beta", "1.0", "--per-sentence"], dir.path());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("0\tTP 1 FP 0 FN 1\t"), "{out}");
    assert_eq!(lines[2], "P 0.6667 R 0.6667 F1 0.6667");

    // a hypothesis equal to the reference scores perfectly
    let o = run(&["apply", "-s", "src.txt", "--m2", "ref.m2", "-o", "gold.txt"], dir.path());
    assert!(o.status.success());
    let o = run(&["score", "-s", "src.txt", "--hyp", "gold.txt", "--ref", "ref.m2"], dir.path());
    assert_eq!(stdout(&o), "P 1.0000 R 1.0000 F0.5 1.0000\n");
}

#[test]
fn manifest_replays_to_same_output() {
    let dir = TempDir::new().unwrap();
    abc(&dir);
    let o = run(
        &[
            "combine", "-s", "src.txt", "--hyp", "h1.txt", "h2.txt", "h3.txt", "--method", "greedy", "--reward",
            "jaccard", "-o", "out.txt",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest = RunManifest::read(&dir.path().join("out.txt.manifest.json")).unwrap();
    assert_eq!(manifest.command, "combine");
    assert_eq!(manifest.inputs.len(), 4);
    assert_eq!(manifest.outputs.len(), 1);
    let recorded = manifest.outputs[0].sha256.clone();

    std::fs::remove_file(dir.path().join("out.txt")).unwrap();
    let args: Vec<&str> = manifest.args.iter().map(String::as_str).collect();
    let o = run(&args, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(file_digest(&dir.path().join("out.txt")).unwrap().sha256, recorded);
    assert_eq!(RunManifest::read(&dir.path().join("out.txt.manifest.json")).unwrap(), manifest);
}

#[test]
fn thread_env_overrides_flag() {
    let dir = TempDir::new().unwrap();
    abc(&dir);
    let o = bin()
        .current_dir(dir.path())
        .env("EDIT_MBR_THREADS", "2")
        .args(["--threads", "1", "combine", "-s", "src.txt", "--hyp", "h1.txt", "h2.txt", "h3.txt"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o), "a B c\n");
}
