use seqprod::verify::select;
use seqprod::{explore_conjecture1, registry, replay, run_suite, theorem_ids, Error, TrialConfig};

#[test]
fn registry_is_enumerable_and_covers_every_family() {
    let ids = theorem_ids();
    assert_eq!(ids.len(), registry().len());
    for family in [
        "T1.1", "K1", "T1.2", "C1.3", "T1.4", "E1.2", "E1.3", "T2.1", "T2.2", "R2.2", "E3.1", "T3.1", "L3.2", "L3.3",
        "T3.4", "T3.5", "T3.6", "T3.7", "C3.8", "T4.1", "C4.2", "L4.3", "T4.4", "T4.5", "C4.6", "CLOSE", "NEG",
    ] {
        assert!(!select(&[family.to_string()]).unwrap().is_empty(), "{family}");
    }
}

#[test]
fn unknown_ids_are_rejected() {
    let cfg = TrialConfig::new(2, 3, 1).with_ids(&["T7.7"]);
    assert!(matches!(run_suite(&cfg), Err(Error::UnknownTheoremId(_))));
}

#[test]
fn failures_carry_replayable_witnesses() {
    // An absurdly tight eps turns ordinary roundoff into failures.
    let cfg = TrialConfig::new(3, 6, 4)
        .with_ids(&["T1.2iv", "T2.1ii"])
        .with_eps(1e-300);
    let report = run_suite(&cfg).unwrap();
    assert!(!report.all_pass());
    for r in report.results.iter().filter(|r| !r.pass) {
        let witness = r.witness.as_ref().expect("failing entries carry a witness");
        let (residual, inputs) = replay(&cfg, &r.id, r.worst_trial).unwrap();
        assert_eq!(residual, r.max_residual);
        assert_eq!(&inputs, witness);
    }
}

#[test]
fn passing_entries_omit_the_witness() {
    let report = run_suite(&TrialConfig::new(2, 4, 3).with_ids(&["T1.1"])).unwrap();
    assert!(report.all_pass());
    assert!(report.results.iter().all(|r| r.witness.is_none()));
    assert!(!report.to_json().contains("witness"));
    assert_eq!(report.summary.checks, 2);
}

#[test]
fn seeds_change_reports_and_repeats_do_not() {
    let a = TrialConfig::new(2, 6, 1).with_ids(&["T4.4"]);
    let b = TrialConfig::new(2, 6, 2).with_ids(&["T4.4"]);
    let ra = run_suite(&a).unwrap().to_json();
    assert_eq!(ra, run_suite(&a).unwrap().to_json());
    assert_ne!(ra, run_suite(&b).unwrap().to_json());
}

#[test]
fn conjecture_exploration_never_claims_a_counterexample() {
    let report = explore_conjecture1(&TrialConfig::new(2, 9, 3)).unwrap();
    assert_eq!(report.families.len(), 3);
    assert!(!report.note.contains("counterexample"));
    for f in &report.families {
        assert!(f.conclusion_witnessed <= f.hypothesis_witnessed);
    }
}
