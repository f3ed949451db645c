//! Verification, exact distributions and seeded trials on the known protocols.

use spinretro::construction::Builtin;
use spinretro::protocol::{
    emit_protocol, enumerate_outcomes, parse_protocol, run_trials, verify_protocol, TrialConfig, DEFAULT_SEED,
};
use spinretro::{Sign, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn vaa_printed_table_is_the_negation_of_the_implied_one() {
    let printed = Builtin::Vaa.protocol();
    let implied = Builtin::Vaa.implied().unwrap();
    assert_eq!(implied.table(), &printed.table().negated());
    assert_eq!(verify_protocol(&printed, &tol()).violations.len(), 12);
    assert!(verify_protocol(&implied, &tol()).is_clean());
}

#[test]
fn singlet_printed_table_swaps_rows_three_and_four() {
    let printed = Builtin::Singlet.protocol();
    let implied = Builtin::Singlet.implied().unwrap();
    let mut rows = printed.table().rows().to_vec();
    rows.swap(2, 3);
    assert_eq!(implied.table().rows(), &rows[..]);
    assert_eq!(verify_protocol(&printed, &tol()).violations.len(), 4);
    assert!(verify_protocol(&implied, &tol()).is_clean());
}

#[test]
fn vaa_conditionals_split_evenly_over_two_outcomes() {
    let d = enumerate_outcomes(&Builtin::Vaa.implied().unwrap());
    assert!((d.total() - 1.0).abs() < 1e-12);
    for l in 0..3 {
        for eta in Sign::BOTH {
            let c: Vec<f64> = (0..4).map(|j| d.conditional(l, eta, j)).collect();
            let halves = c.iter().filter(|p| (*p - 0.5).abs() < 1e-12).count();
            let zeros = c.iter().filter(|p| p.abs() < 1e-12).count();
            assert_eq!((halves, zeros), (2, 2), "axis {l} {eta}: {c:?}");
        }
    }
    assert!(d.leakage() < 1e-12);
}

#[test]
fn implied_protocols_always_succeed() {
    for b in [Builtin::Vaa, Builtin::Singlet] {
        let s = run_trials(&b.implied().unwrap(), &TrialConfig::new(10_000, DEFAULT_SEED)).unwrap();
        assert_eq!(s.successes, 10_000, "{b}");
    }
}

#[test]
fn printed_vaa_table_is_always_wrong() {
    let s = run_trials(&Builtin::Vaa.protocol(), &TrialConfig::new(2_000, 3)).unwrap();
    assert_eq!(s.successes, 0);
}

#[test]
fn printed_singlet_table_succeeds_about_two_thirds() {
    let s = run_trials(&Builtin::Singlet.protocol(), &TrialConfig::new(30_000, 5)).unwrap();
    let rate = s.success_rate().unwrap();
    // Axis z always succeeds, x and y half the time.
    assert!((rate - 2.0 / 3.0).abs() < 0.02, "{rate}");
}

#[test]
fn sampled_cells_match_the_exact_distribution() {
    let p = Builtin::Singlet.implied().unwrap();
    let s = run_trials(&p, &TrialConfig::new(20_000, 11)).unwrap();
    let cells = enumerate_outcomes(&p).compare(&s, 5.0);
    assert!(cells.iter().all(|c| c.pass), "{:?}", cells.iter().find(|c| !c.pass));
}

#[test]
fn fixed_seed_is_byte_identical() {
    let p = Builtin::Vaa.implied().unwrap();
    let mut cfg = TrialConfig::new(500, 99);
    cfg.keep_records = true;
    let a = format!("{:?}", run_trials(&p, &cfg).unwrap());
    let b = format!("{:?}", run_trials(&p, &cfg).unwrap());
    assert_eq!(a, b);
}

#[test]
fn each_trial_depends_only_on_seed_and_index() {
    let p = Builtin::Singlet.implied().unwrap();
    let mut short = TrialConfig::new(40, 8);
    short.keep_records = true;
    let mut long = short.clone();
    long.trials = 200;
    let a = run_trials(&p, &short).unwrap().records.unwrap();
    let b = run_trials(&p, &long).unwrap().records.unwrap();
    assert_eq!(a[..], b[..40]);
}

#[test]
fn different_seeds_differ() {
    let p = Builtin::Vaa.implied().unwrap();
    let a = run_trials(&p, &TrialConfig::new(200, 1)).unwrap();
    let b = run_trials(&p, &TrialConfig::new(200, 2)).unwrap();
    assert_ne!(a.alice_counts, b.alice_counts);
}

#[test]
fn empty_run_has_no_rate() {
    let s = run_trials(&Builtin::Vaa.protocol(), &TrialConfig::new(0, 1)).unwrap();
    assert_eq!(s.successes, 0);
    assert_eq!(s.success_rate(), None);
}

#[test]
fn protocol_files_round_trip() {
    for b in Builtin::ALL {
        let p = b.protocol();
        let q = parse_protocol(&emit_protocol(&p)).unwrap();
        assert_eq!(q.table(), p.table(), "{b}");
        assert_eq!(q.axes(), p.axes(), "{b}");
        for (x, y) in q.basis().iter().zip(p.basis()) {
            assert_eq!(x, y, "{b}");
        }
        assert_eq!(q.initial(), p.initial(), "{b}");
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = parse_protocol("name x\naxis 1 0\n").unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
}
