use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn regen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regen")).args(args).output().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn encode_example(dir: &Path) -> Vec<u8> {
    let msg: Vec<u8> = vec![1, 2, 3, 4, 5, 6, 0, 1, 2];
    let msg_path = dir.join("msg.bin");
    fs::write(&msg_path, &msg).unwrap();
    let out = regen(&[
        "encode",
        msg_path.to_str().unwrap(),
        "--codec",
        "mbr-psrs",
        "--n",
        "6",
        "--k",
        "3",
        "--d",
        "4",
        "--field",
        "7",
        "--out-dir",
        dir.join("frags").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    msg
}

#[test]
fn encode_repair_reconstruct_round_trip() {
    let tmp = tempdir().unwrap();
    let msg = encode_example(tmp.path());
    let frags = tmp.path().join("frags");
    let lost = frags.join("node-4.frag");
    let original = fs::read(&lost).unwrap();
    fs::remove_file(&lost).unwrap();
    let out = regen(&["repair", "--failed", "4", "--frags", frags.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(fs::read(&lost).unwrap(), original);

    for scheme in ["full", "lower", "upper", "timeshare"] {
        let dest = tmp.path().join(format!("out-{scheme}.bin"));
        let out = regen(&[
            "reconstruct",
            "--nodes",
            "1,2,4",
            "--scheme",
            scheme,
            "--frags",
            frags.to_str().unwrap(),
            "--out",
            dest.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{scheme}: {}", stderr(&out));
        assert_eq!(fs::read(&dest).unwrap(), msg, "{scheme}");
    }
}

#[test]
fn too_few_nodes_exit_1() {
    let tmp = tempdir().unwrap();
    encode_example(tmp.path());
    let out = regen(&[
        "reconstruct",
        "--nodes",
        "1,2",
        "--frags",
        tmp.path().join("frags").to_str().unwrap(),
        "--out",
        tmp.path().join("x.bin").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: InsufficientSymbols: "), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["encode"],
        vec!["frobnicate"],
        vec!["reconstruct", "--nodes", "0,1", "--frags", ".", "--out", "x"],
        vec!["encode", "m", "--codec", "lrc", "--n", "3", "--k", "2", "--field", "7", "--out-dir", "."],
        vec!["encode", "m", "--codec", "rbt", "--n", "3", "--k", "2", "--field", "9", "--out-dir", "."],
    ] {
        assert_eq!(regen(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn codec_errors_exit_1() {
    let tmp = tempdir().unwrap();
    let msg = tmp.path().join("short.bin");
    fs::write(&msg, [1, 2, 3]).unwrap();
    let out = regen(&[
        "encode",
        msg.to_str().unwrap(),
        "--codec",
        "rbt",
        "--n",
        "5",
        "--k",
        "3",
        "--field",
        "2^2",
        "--out-dir",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: WrongMessageLength: "), "{}", stderr(&out));

    encode_example(tmp.path());
    let frag = tmp.path().join("frags/node-2.frag");
    fs::write(&frag, b"RGC0").unwrap();
    let out = regen(&[
        "reconstruct",
        "--nodes",
        "1,2,3",
        "--frags",
        tmp.path().join("frags").to_str().unwrap(),
        "--out",
        tmp.path().join("x.bin").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: MalformedFile: "), "{}", stderr(&out));
}

#[test]
fn selftest_passes() {
    let out = regen(&["selftest"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn bench_writes_csv() {
    let tmp = tempdir().unwrap();
    let report = tmp.path().join("r.csv");
    let out = regen(&["bench", "--family", "rbt-vs-shah", "--sizes", "8,12,16", "--report", report.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(&report).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,contender,multiplications,additions,symbols"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn simulate_prints_report() {
    let tmp = tempdir().unwrap();
    let script = tmp.path().join("s.txt");
    fs::write(&script, "codec rbt n=5 k=3 field=2^2\nencode\nfail 3\nrepair 3\nreconstruct 1,2,4\n").unwrap();
    let out = regen(&["simulate", script.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("repair"));
    assert!(text.contains("sent per node: 1:5 2:5 3:0 4:5 5:1"), "{text}");

    fs::write(&script, "codec rbt n=5 k=3 field=2^2\nencode\nfail 3\nfail 3\n").unwrap();
    let out = regen(&["simulate", script.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: NodeState: event 2 (line 4)"), "{}", stderr(&out));
}
