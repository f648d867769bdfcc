use std::fs;
use std::path::Path;

use regen_core::CodeParams;
use regen_harness::sim::{sim_run, EventKind};
use regen_harness::{CodecKind, HarnessError, Retrieval};

fn corpus() -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/scenarios");
    let mut out: Vec<(String, String)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[test]
fn corpus_runs_and_tallies_match_formulas() {
    let scripts = corpus();
    assert!(scripts.len() >= 6);
    for (name, text) in scripts {
        let (report, state) = sim_run(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let codec = state.codec.as_ref().unwrap();
        let CodeParams { n, k, d, alpha, b, .. } = codec.params();
        assert!(state.nodes.iter().all(|s| s.alive), "{name}");
        for e in &report.events {
            assert_eq!(e.sent.iter().sum::<usize>(), if e.kind == EventKind::Encode { 0 } else { e.symbols });
            match e.kind {
                EventKind::Encode => assert_eq!(e.symbols, n * alpha, "{name}"),
                EventKind::Fail => assert_eq!(e.symbols, 0),
                EventKind::Repair => {
                    assert_eq!(e.symbols, d, "{name}");
                    if codec.kind().repairs_by_transfer() {
                        assert!(e.ops.is_zero(), "{name}: transfer repair did arithmetic");
                    }
                }
                EventKind::Reconstruct => assert_eq!(e.symbols, k * alpha, "{name}"),
                EventKind::PartialReconstruct => assert_eq!(e.symbols, b, "{name}"),
            }
        }
    }
}

#[test]
fn rbt_repair_costs_nothing() {
    let (report, _) = sim_run("codec rbt n=5 k=3 field=2^2\nencode\nfail 3\nrepair 3\nreconstruct 1,2,4\n").unwrap();
    let kinds: Vec<EventKind> = report.events.iter().map(|e| e.kind).collect();
    assert_eq!(
        kinds,
        [EventKind::Encode, EventKind::Fail, EventKind::Repair, EventKind::Reconstruct]
    );
    let repair = &report.events[2];
    assert_eq!(repair.target, Some(2));
    assert_eq!(repair.symbols, 4);
    assert!(repair.ops.is_zero());
    assert_eq!(repair.sent, vec![1, 1, 0, 1, 1]);
}

#[test]
fn lower_scheme_downloads_b_symbols() {
    let (report, _) = sim_run("codec mbr-psrs n=6 k=3 d=4 field=7\nencode\nreconstruct 1,2,4 lower\n").unwrap();
    let e = &report.events[1];
    assert_eq!(e.kind, EventKind::PartialReconstruct);
    assert_eq!(e.scheme, Some(Retrieval::Partial(regen_core::Scheme::Lower)));
    assert_eq!(e.symbols, 9);
    assert_eq!(e.sent, vec![2, 3, 0, 4, 0, 0]);
}

#[test]
fn timeshare_balances_over_two_rounds() {
    let script = "codec mbr-psrs n=10 k=4 d=7 field=11\nencode\nreconstruct 2,5,8,9 timeshare\nreconstruct 2,5,8,9 timeshare\n";
    let (report, state) = sim_run(script).unwrap();
    assert_eq!(state.timeshare_round, 2);
    let hist = report.histogram();
    for node in [1, 4, 7, 8] {
        assert_eq!(hist[node], 2 * 7 - (4 - 1));
    }
}

#[test]
fn state_errors_are_annotated() {
    let cases = [
        ("codec rbt n=5 k=3 field=7\nencode\nrepair 2\n", "NodeState", 1),
        ("codec rbt n=5 k=3 field=7\nencode\nfail 2\nreconstruct 1,2,3\n", "NodeState", 2),
        ("codec mbr-psrs n=6 k=3 d=4 field=7\nencode\nfail 1\nrepair 1 2,3,4\n", "WrongHelperCount", 2),
        ("codec mbr-psrs n=6 k=3 d=4 field=7\nencode\nreconstruct 1,2,3 balanced\n", "SchemeBackendMismatch", 1),
        ("codec rbt n=5 k=3 field=7\nencode\nfail 1\nfail 2\nrepair 1\n", "MissingHelper", 3),
        ("codec shah n=8 k=4 field=2^3\n", "FieldTooSmall", 0),
        ("encode\n", "NodeState", 0),
    ];
    for (script, kind, index) in cases {
        match sim_run(script) {
            Err(e @ HarnessError::Event { .. }) => {
                assert_eq!(e.kind(), kind, "{script}");
                let HarnessError::Event { index: i, .. } = e else { unreachable!() };
                assert_eq!(i, index, "{script}");
            }
            other => panic!("{script}: {other:?}"),
        }
    }
}

#[test]
fn every_codec_survives_a_full_churn() {
    for kind in CodecKind::ALL {
        let header = match kind {
            CodecKind::MbrPsrs | CodecKind::MbrVdm => format!("codec {kind} n=7 k=3 d=5 field=2^4\n"),
            _ => format!("codec {kind} n=6 k=3 field=2^4\n"),
        };
        let n = if header.contains("n=7") { 7 } else { 6 };
        let mut script = header + "encode seed=9\n";
        for i in 1..=n {
            script.push_str(&format!("fail {i}\nrepair {i}\n"));
        }
        script.push_str("reconstruct 1,3,5\n");
        let (report, _) = sim_run(&script).unwrap_or_else(|e| panic!("{kind}: {e}"));
        assert_eq!(report.events.len(), 2 + 2 * n);
    }
}
