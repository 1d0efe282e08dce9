use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use indexmap::IndexMap;
use seqprod::io::{from_json, to_json, ChoiDoc, InstrumentDoc, ObservableDoc, OperationDoc, OperatorDoc};
use seqprod::{
    holevo, holevo_instrument, luders, luders_instrument, seq_product_effects, seq_product_observables, Effect,
    FiniteObservable, Matrix, State, Tolerance,
};
use tempfile::TempDir;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn seqprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqprod"))
        .args(args)
        .env_remove("SEQPROD_EPS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn save(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn effect(rows: &[&[f64]]) -> Effect {
    Effect::new(Matrix::real(rows), tol()).unwrap()
}

fn observable(effects: &[(&str, Effect)]) -> FiniteObservable {
    FiniteObservable::new(effects.iter().map(|(x, e)| (x.to_string(), e.clone())), tol()).unwrap()
}

fn sharp() -> FiniteObservable {
    observable(&[
        ("x0", effect(&[&[1.0, 0.0], &[0.0, 0.0]])),
        ("x1", effect(&[&[0.0, 0.0], &[0.0, 1.0]])),
    ])
}

fn blurred() -> FiniteObservable {
    let half = effect(&[&[0.5, 0.0], &[0.0, 0.5]]);
    observable(&[("x0", half.clone()), ("x1", half)])
}

fn tilted() -> FiniteObservable {
    let b = effect(&[&[0.6, 0.2], &[0.2, 0.3]]);
    observable(&[("y0", b.clone()), ("y1", b.complement())])
}

#[test]
fn luders_of_sharp_qubit_observable_is_repeatable() {
    let dir = TempDir::new().unwrap();
    let inst = save(
        &dir,
        "i.json",
        &to_json(&InstrumentDoc::from_instrument(&luders_instrument(&sharp()))),
    );
    let out = seqprod(&["check", "repeatable", "--instrument", s(&inst)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("repeatable: true\n"));
    assert!(stdout(&out).contains("forms agree: true"));
}

#[test]
fn blurred_luders_instrument_is_not_repeatable() {
    let dir = TempDir::new().unwrap();
    let inst = save(
        &dir,
        "i.json",
        &to_json(&InstrumentDoc::from_instrument(&luders_instrument(&blurred()))),
    );
    let out = seqprod(&["check", "repeatable", "--instrument", s(&inst), "--json"]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["repeatable"], false);
    assert_eq!(v["agree"], true);
}

#[test]
fn verify_family_passes() {
    let out = seqprod(&["verify", "--theorems", "T1.4", "--trials", "10"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("6 of 6 checks passed"));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn verify_reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |p: &Path| {
        let out = seqprod(&[
            "verify",
            "--theorems",
            "T2.1,T3.4",
            "--trials",
            "12",
            "--seed",
            "3",
            "--json",
            "-o",
            s(p),
        ]);
        assert_eq!(code(&out), 0);
        stdout(&out)
    };
    let first = args(&a);
    let second = args(&b);
    assert_eq!(first, second);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read_to_string(&a).unwrap(), first);
}

#[test]
fn verify_list_names_every_check() {
    let out = seqprod(&["verify", "--list"]);
    assert_eq!(code(&out), 0);
    for id in seqprod::theorem_ids() {
        assert!(
            stdout(&out).lines().any(|l| l.split_whitespace().next() == Some(id)),
            "{id}"
        );
    }
}

#[test]
fn measured_holevo_instrument_recovers_its_observable() {
    let dir = TempDir::new().unwrap();
    let a = tilted();
    let alphas: IndexMap<String, State> = [
        ("y0".to_string(), State::new(Matrix::diag(&[1.0, 0.0]), tol()).unwrap()),
        ("y1".to_string(), State::maximally_mixed(2)),
    ]
    .into_iter()
    .collect();
    let inst = holevo_instrument(&alphas, &a).unwrap();
    let path = save(&dir, "h.json", &to_json(&InstrumentDoc::from_instrument(&inst)));
    let out = seqprod(&["compute", "measured", "--instrument", s(&path), "--json"]);
    assert_eq!(code(&out), 0);
    let back = from_json::<ObservableDoc>(&stdout(&out))
        .unwrap()
        .to_observable(tol())
        .unwrap();
    assert!(back.max_abs_diff(&a).unwrap() <= 1e-12);
}

#[test]
fn emitted_documents_load_back_exactly() {
    let dir = TempDir::new().unwrap();
    let b = effect(&[&[0.6, 0.2], &[0.2, 0.3]]);
    let j = luders(&effect(&[&[0.7, 0.1], &[0.1, 0.4]]));
    let op = save(&dir, "j.json", &to_json(&OperationDoc::from_operation(&j)));
    let eff = save(&dir, "b.json", &to_json(&OperatorDoc::from_effect(&b)));
    let first = dir.path().join("jb.json");
    let out = seqprod(&[
        "compute",
        "seq-effect",
        "--op",
        s(&op),
        "--effect",
        s(&eff),
        "-o",
        s(&first),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&first).unwrap();
    let loaded = from_json::<OperatorDoc>(&text).unwrap().to_effect(tol()).unwrap();
    assert_eq!(
        loaded
            .matrix()
            .max_abs_diff(seq_product_effects(&j, &b).unwrap().matrix()),
        0.0
    );

    // The emitted effect is itself a valid input.
    let out = seqprod(&["compute", "seq-effect", "--op", s(&op), "--effect", s(&first), "--json"]);
    assert_eq!(code(&out), 0);
    let twice = from_json::<OperatorDoc>(&stdout(&out))
        .unwrap()
        .to_effect(tol())
        .unwrap();
    let expected = seq_product_effects(&j, &loaded).unwrap();
    assert_eq!(twice.matrix().max_abs_diff(expected.matrix()), 0.0);

    let inst = save(
        &dir,
        "i.json",
        &to_json(&InstrumentDoc::from_instrument(&luders_instrument(&sharp()))),
    );
    let obs = save(&dir, "o.json", &to_json(&ObservableDoc::from_observable(&tilted())));
    let ab = dir.path().join("ab.json");
    let out = seqprod(&[
        "compute",
        "seq-obs",
        "--instrument",
        s(&inst),
        "--observable",
        s(&obs),
        "-o",
        s(&ab),
    ]);
    assert_eq!(code(&out), 0);
    let doc = from_json::<ObservableDoc>(&std::fs::read_to_string(&ab).unwrap()).unwrap();
    let loaded = doc.to_observable(tol()).unwrap();
    let direct = seq_product_observables(&luders_instrument(&sharp()), &tilted()).unwrap();
    assert_eq!(loaded.max_abs_diff(&direct).unwrap(), 0.0);
    assert_eq!(
        loaded.outcomes().collect::<Vec<_>>(),
        vec!["x0⊗y0", "x0⊗y1", "x1⊗y0", "x1⊗y1"]
    );
    let out = seqprod(&[
        "compute",
        "conditioned-obs",
        "--instrument",
        s(&inst),
        "--observable",
        s(&ab),
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    from_json::<ObservableDoc>(&stdout(&out))
        .unwrap()
        .to_observable(tol())
        .unwrap();

    let dual = dir.path().join("dual.json");
    let out = seqprod(&["compute", "dual", "--op", s(&op), "--matrix", s(&eff), "-o", s(&dual)]);
    assert_eq!(code(&out), 0);
    let m: Matrix = from_json(&std::fs::read_to_string(&dual).unwrap()).unwrap();
    assert_eq!(m.max_abs_diff(&j.apply_dual(b.matrix()).unwrap()), 0.0);
    let out = seqprod(&["compute", "dual", "--op", s(&op), "--matrix", s(&dual)]);
    assert_eq!(code(&out), 0);
}

#[test]
fn choi_documents_are_accepted() {
    let dir = TempDir::new().unwrap();
    let alpha = State::maximally_mixed(2);
    let h = holevo(&alpha, &Effect::identity(2)).unwrap();
    let op = save(&dir, "c.json", &to_json(&ChoiDoc::from_operation(&h)));
    let out = seqprod(&["check", "channel", "--op", s(&op)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("channel: true"));

    let half = luders(&effect(&[&[0.5, 0.0], &[0.0, 0.5]]));
    let op = save(&dir, "l.json", &to_json(&OperationDoc::from_operation(&half)));
    let out = seqprod(&["check", "channel", "--op", s(&op)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("channel: false"));
}

#[test]
fn bad_inputs_exit_2_naming_the_invariant() {
    let dir = TempDir::new().unwrap();
    let eff = save(
        &dir,
        "b.json",
        &to_json(&OperatorDoc::from_effect(&effect(&[&[0.5, 0.0], &[0.0, 0.5]]))),
    );

    let garbled = save(&dir, "bad.json", "{\"dim\": 2, \"kraus\": [");
    let out = seqprod(&["compute", "seq-effect", "--op", s(&garbled), "--effect", s(&eff)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("invariant `input`"), "{}", stderr(&out));

    let grow = r#"{"dim":2,"kraus":[{"dim":2,"entries":[[[2,0],[0,0]],[[0,0],[1,0]]]}]}"#;
    let grow = save(&dir, "grow.json", grow);
    let out = seqprod(&["compute", "seq-effect", "--op", s(&grow), "--effect", s(&eff)]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("invariant `trace-non-increasing`"),
        "{}",
        stderr(&out)
    );

    let three = save(
        &dir,
        "j3.json",
        &to_json(&OperationDoc::from_operation(&seqprod::Operation::identity(3))),
    );
    let out = seqprod(&["compute", "seq-effect", "--op", s(&three), "--effect", s(&eff)]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("invariant `matching-dimensions`"),
        "{}",
        stderr(&out)
    );

    let state = save(
        &dir,
        "s.json",
        &to_json(&OperatorDoc::from_state(&State::maximally_mixed(2))),
    );
    let out = seqprod(&["compute", "seq-effect", "--op", s(&three), "--effect", s(&state)]);
    assert_eq!(code(&out), 2);

    let out = seqprod(&[
        "compute",
        "measured",
        "--instrument",
        s(&dir.path().join("missing.json")),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cannot read"));

    let out = seqprod(&["verify", "--theorems", "T9.9"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("invariant `known-theorem-id`"));

    let out = seqprod(&["verify", "--dim", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unknown_flags_are_errors() {
    assert_eq!(code(&seqprod(&["verify", "--trails", "10"])), 2);
    assert_eq!(code(&seqprod(&["demo", "luders", "--json"])), 2);
    assert_eq!(code(&seqprod(&["frobnicate"])), 2);
    assert_eq!(code(&seqprod(&["--help"])), 0);
}

#[test]
fn eps_flag_overrides_environment() {
    let run = |env: &str, extra: &[&str]| {
        let mut args = vec!["verify", "--theorems", "T1.1", "--trials", "4"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_seqprod"))
            .args(&args)
            .env("SEQPROD_EPS", env)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("-1", &[])), 2);
    assert_eq!(code(&run("1e-9", &[])), 0);
    assert_eq!(code(&run("-1", &["--eps", "1e-9"])), 0);
    let tight = run("1e-9", &["--eps", "1e-300", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&tight)).unwrap();
    assert_eq!(v["config"]["eps"], 1e-300);
}

#[test]
fn exploration_reports_coverage_only() {
    let out = seqprod(&["explore", "conjecture1", "--samples", "6", "--seed", "2", "--json"]);
    assert_eq!(code(&out), 0);
    assert!(!stdout(&out).contains("counterexample"));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["samples"], 6);
    assert_eq!(v["families"].as_array().unwrap().len(), 3);
}

#[test]
fn demos_run() {
    let out = seqprod(&["demo", "luders"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("sharp A: repeatable: true"));
    assert!(stdout(&out).contains("A = {I/2, I/2}: repeatable: false"));
    let out = seqprod(&["demo", "holevo"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("H(α, I) is a channel: true"));
    assert_eq!(seqprod(&["demo", "holevo"]).stdout, out.stdout);
}
