//! Acceptance gate: one test per advertised guarantee, each checking the
//! exact numbers the library promises, with no tolerances anywhere.

use qtmhalt::amplitude::{parse, parse_real, Amplitude, RealValue};
use qtmhalt::checks::{check_stationary, check_wellformed, StationaryMode, StationaryViolation};
use qtmhalt::compiler::{
    compare_runtimes_classical, compare_runtimes_quantum, compile, compiled_halt_time,
    semidecide_halt, RuntimeVerdict, SemiVerdict,
};
use qtmhalt::corpus;
use qtmhalt::dynamics::{parse_input, step, Configuration, Superposition};
use qtmhalt::halting::{classify, compare_protocols, halt_distribution, monitored_run, Classification};
use qtmhalt::machine::{simulate_classical, ClassicalOutcome, Qtm};
use qtmhalt::oracle::{build, OracleError, Window, DEFAULT_DIM_CAP};
use std::collections::BTreeSet;

const CAP: usize = 1 << 22;

fn half() -> RealValue {
    RealValue::from_ratio(1, 2)
}

/// Amplitudes are exact elements of Q(i, sqrt2): arithmetic, inverses and
/// printing round-trip with no rounding, and protocol probabilities built
/// from 1/sqrt2 splits come out as literal rationals.
#[test]
fn c1_exact_amplitude_field_and_split_probabilities() {
    let h = Amplitude::inv_sqrt2();
    assert_eq!(h.clone() * h.clone(), Amplitude::from_ratio(1, 2));
    assert!((h.clone() * h.clone() - Amplitude::from_ratio(1, 2)).is_zero());

    let w = parse("3-2*sqrt2+1/3*i-i*sqrt2").unwrap();
    assert_eq!(w.clone() * w.inv(), Amplitude::one());
    assert_eq!(parse(&w.to_string()).unwrap(), w);

    // exact order decision a float would have to take on faith
    assert!(parse_real("99/70").unwrap() > parse_real("sqrt2").unwrap());
    assert!(parse_real("sqrt2").unwrap() > parse_real("140/99").unwrap());

    // a split then a halt: first halt mass is exactly 1/2, not 0.4999..
    let run = monitored_run(&corpus::equal_split_halter(), &[], 10, CAP).unwrap();
    assert_eq!(run.p[1], half());
    assert_eq!(run.residual.norm_sq(), half());
    assert_eq!(run.total_halt_mass(), half());
}

/// The compiled two-branch protocol semidecides classical halting: paired
/// with a never-halting partner, flag mass appears exactly at compiled
/// step t + head + 3 when the source halts, and never otherwise. Growing
/// budgets only ever add detections.
#[test]
fn c2_compiled_semidecider_tracks_classical_halting() {
    let budgets = [10u64, 100, 1000];

    // machines that halt are caught as soon as the budget reaches the
    // compiled step predicted from their classical run
    for (m, input) in [
        (corpus::counter(40, false), ""),
        (corpus::bouncer(), ""),
        (corpus::parity_halter(), "11"),
        (corpus::bit_flipper(), "101"),
    ] {
        let w = parse_input(m.as_qtm(), input).unwrap();
        let (outcome, _) = simulate_classical(&m, &w, 2000);
        let ClassicalOutcome::Halted { step, head, .. } = outcome else {
            panic!("source must halt")
        };
        let expected = compiled_halt_time(step, head).unwrap();
        let results = semidecide_halt(&m, &w, &budgets, CAP).unwrap();
        for (budget, verdict) in results {
            if budget >= expected {
                assert_eq!(verdict, SemiVerdict::Halts { compiled_step: expected });
            } else {
                assert_eq!(verdict, SemiVerdict::Unknown { budget });
            }
        }
    }
    // counter(40) specifically: unknown at 10, caught at 100 with step 83
    let results = semidecide_halt(&corpus::counter(40, false), &[], &budgets, CAP).unwrap();
    assert_eq!(results[0].1, SemiVerdict::Unknown { budget: 10 });
    assert_eq!(results[1].1, SemiVerdict::Halts { compiled_step: 83 });

    // machines that do not halt are never flagged, at any budget
    for (m, input) in [(corpus::never_halt(), ""), (corpus::parity_halter(), "1")] {
        let w = parse_input(m.as_qtm(), input).unwrap();
        for (_, verdict) in semidecide_halt(&m, &w, &budgets, CAP).unwrap() {
            assert!(matches!(verdict, SemiVerdict::Unknown { .. }));
        }
    }

    // runtime comparison rides on the same mechanism, in compiled units
    let v = compare_runtimes_quantum(
        &corpus::counter(40, false),
        &corpus::counter(40, true),
        &[],
        1000,
        CAP,
    )
    .unwrap();
    assert_eq!(v, RuntimeVerdict::Same { step: 83 });
    let v = compare_runtimes_classical(&corpus::counter(40, false), &corpus::counter(60, false), &[], 1000);
    assert_eq!(v, RuntimeVerdict::Different { first: Some(40), second: Some(60) });
}

/// Within a budget every run classifies exactly: certain halt (first mass
/// equals the survival mass), probabilistic halt, or no mass at all.
#[test]
fn c3_halting_trichotomy_is_exact() {
    let c = classify(corpus::counter(40, false).as_qtm(), &[], 1000, CAP).unwrap();
    assert_eq!(c, Classification::NonProbabilisticHaltAt { step: 40 });

    let c = classify(&corpus::equal_split_halter(), &[], 1000, CAP).unwrap();
    assert_eq!(c, Classification::Probabilistic { first_step: 2, first_p: "1/2".into() });

    let c = classify(corpus::never_halt().as_qtm(), &[], 1000, CAP).unwrap();
    assert_eq!(c, Classification::NoHaltWithinBudget { budget: 1000 });

    // the distribution behind the probabilistic verdict is exact
    let dist = halt_distribution(&corpus::equal_split_halter(), &[], 100, CAP).unwrap();
    assert_eq!(dist.p[1], half());
    assert_eq!(dist.never, half());
    assert!(dist.p.iter().enumerate().all(|(i, p)| i == 1 || p.is_zero()));
}

/// Stationary halting makes monitoring free: tables whose halting rows
/// trap the state and preserve the tape give identical monitored and
/// unmonitored laws (total variation exactly zero). This covers the
/// statically strict tables and the compiled machines, whose only strict
/// violations are six junk rows the dynamics never reaches.
#[test]
fn c4_stationary_tables_make_monitoring_free() {
    for (name, m) in [
        ("never_halt", corpus::never_halt().into_qtm()),
        ("hadamard_coin", corpus::hadamard_coin()),
        ("shuttle", corpus::shuttle().into_qtm()),
    ] {
        assert!(check_stationary(&m, StationaryMode::Strict).is_ok(), "{name}");
        for budget in [50u64, 200] {
            let cmp = compare_protocols(&m, &[], budget, CAP).unwrap();
            assert_eq!(cmp.tv, RealValue::zero(), "{name} at budget {budget}");
        }
    }

    let c = compile(&corpus::counter(5, false), &corpus::counter(7, true)).unwrap();
    let report = check_stationary(&c.machine, StationaryMode::Strict);
    assert!(!report.is_ok());
    let rows: BTreeSet<_> = report
        .violations
        .iter()
        .map(|v| match v {
            StationaryViolation::LeavesHaltingSet { row, .. } => *row,
            StationaryViolation::RewritesSymbol { row, .. } => *row,
        })
        .collect();
    assert_eq!(rows.len(), 6, "exactly the six junk rows on fin states");
    for row in &rows {
        let state = c.machine.state_name(row.state);
        let symbol = c.machine.alphabet.name(row.symbol);
        assert!(state.starts_with("fin."), "{state}");
        assert!(symbol == "0" || symbol == "1", "{symbol}");
    }
    // and yet, dynamically, monitoring changes nothing
    for budget in [20u64, 40] {
        let cmp = compare_protocols(&c.machine, &[], budget, CAP).unwrap();
        assert_eq!(cmp.tv, RealValue::zero(), "compiled at budget {budget}");
    }
}

/// A halting state the dynamics can leave makes the protocols diverge:
/// the divergence machine pins total variation at exactly 1/2.
#[test]
fn c5_nonstationary_halting_diverges_by_half() {
    let m = corpus::myers_interference();
    for budget in [10u64, 20, 60] {
        let cmp = compare_protocols(&m, &[], budget, CAP).unwrap();

        // monitored: both branches caught at step 2, half mass each
        assert_eq!(cmp.monitored.len(), 2);
        for ((t, _), mass) in &cmp.monitored {
            assert_eq!(*t, 2);
            assert_eq!(mass, &half());
        }
        assert_eq!(cmp.monitored_never, RealValue::zero());

        // unmonitored: the trap branch stays, the transient branch escaped
        assert_eq!(cmp.unmonitored.len(), 1);
        assert_eq!(cmp.unmonitored.values().next().unwrap(), &half());
        assert_eq!(cmp.unmonitored_never, half());

        assert_eq!(cmp.tv, half(), "budget {budget}");
    }
}

/// The dense windowed operator is an independent oracle: it reproduces
/// the sparse evolution exactly while amplitude stays in the window,
/// reports escapes as errors, and its interior Gram defects are empty
/// precisely for well-formed tables.
#[test]
fn c6_dense_window_oracle_agrees_with_sparse_engine() {
    // (i) step-for-step agreement on machines confined to small windows
    let confined: [(&str, Qtm, Window, u64); 4] = [
        ("shuttle", corpus::shuttle().into_qtm(), Window::new(-2, 2), 30),
        ("hadamard_coin", corpus::hadamard_coin(), Window::new(0, 6), 5),
        ("myers_interference", corpus::myers_interference(), Window::new(-2, 2), 4),
        ("equal_split_halter", corpus::equal_split_halter(), Window::new(-3, 3), 3),
    ];
    for (name, m, window, budget) in &confined {
        let d = build(m, *window, DEFAULT_DIM_CAP).unwrap();
        let mut sparse = Superposition::unit(Configuration::initial(m, &[]));
        let mut dense = d.embed(&sparse).unwrap();
        for t in 1..=*budget {
            sparse = step(m, &sparse);
            dense = d.evolve(&dense, 1).unwrap_or_else(|e| panic!("{name} step {t}: {e}"));
            assert_eq!(d.extract(&dense), sparse, "{name} diverged at step {t}");
        }
        assert_eq!(d.norm_sq(&dense), RealValue::one(), "{name}");
    }
    // the two walkers leave their windows on the next step, loudly
    for (m, window, budget) in [
        (corpus::myers_interference(), Window::new(-2, 2), 4u64),
        (corpus::equal_split_halter(), Window::new(-3, 3), 3),
    ] {
        let d = build(&m, window, DEFAULT_DIM_CAP).unwrap();
        let v = d.embed(&Superposition::unit(Configuration::initial(&m, &[]))).unwrap();
        let v = d.evolve(&v, budget).unwrap();
        assert_eq!(d.evolve(&v, 1), Err(OracleError::Escaped { step: 1 }));
    }

    // (ii) over a mixed population, interior isometry and sparse
    // wellformedness are the same predicate
    let window = Window::new(-2, 2);
    let mut machines: Vec<(String, Qtm)> = Vec::new();
    for seed in 0..20u64 {
        let n = 3 + (seed as usize % 6);
        machines.push((format!("rev-{seed}"), corpus::random_reversible(seed, n).into_qtm()));
    }
    for seed in 0..15u64 {
        let n = 2 + (seed as usize % 5);
        machines.push((format!("tape-{seed}"), corpus::random_tape_preserving(seed, n)));
    }
    let hows =
        [corpus::Sabotage::ScaleAmplitude, corpus::Sabotage::CloneArrow, corpus::Sabotage::MixDirections];
    for (k, how) in hows.iter().cycle().take(15).enumerate() {
        let base = if k % 2 == 0 {
            corpus::random_reversible(100 + k as u64, 4 + k % 4).into_qtm()
        } else {
            corpus::random_tape_preserving(100 + k as u64, 3 + k % 3)
        };
        machines.push((format!("sabotaged-{k}"), corpus::sabotage(&base, *how)));
    }
    assert_eq!(machines.len(), 50);
    let mut broken = 0;
    for (name, m) in &machines {
        let wf = check_wellformed(m).is_ok();
        let d = build(m, window, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(wf, d.gram_defects().is_empty(), "{name}");
        if !wf {
            broken += 1;
        }
    }
    assert!(broken >= 10, "population must include ill-formed tables, got {broken}");

    // (iii) cross-check of a compiled machine: unconditional halted mass
    // in the window equals the monitored cumulative law while everything
    // fits, and the final sweep escapes exactly at step 6
    let c = compile(&corpus::immediate_halt(), &corpus::halt_at(2)).unwrap();
    let d = build(&c.machine, Window::new(-2, 2), DEFAULT_DIM_CAP).unwrap();
    assert_eq!(d.dim(), 15 * 5 * 1024);
    let run = halt_distribution(&c.machine, &[], 5, CAP).unwrap();
    let mut sparse = Superposition::unit(Configuration::initial(&c.machine, &[]));
    let mut dense = d.embed(&sparse).unwrap();
    for t in 1..=5u64 {
        sparse = step(&c.machine, &sparse);
        dense = d.evolve(&dense, 1).unwrap();
        assert_eq!(d.extract(&dense), sparse, "compiled diverged at step {t}");
        assert_eq!(
            d.halted_mass(&dense),
            run.cumulative[(t - 1) as usize],
            "halted mass vs monitored cumulative at step {t}"
        );
    }
    assert_eq!(d.halted_mass(&dense), half());
    assert_eq!(d.evolve(&dense, 1), Err(OracleError::Escaped { step: 1 }));
}

/// The sparse engine conserves the exact norm over long runs of random
/// well-formed machines, reversible and genuinely quantum alike.
#[test]
fn c7_norm_conservation_over_random_machines() {
    let mut checked = 0;
    for seed in 0..60u64 {
        let n = 2 + (seed as usize % 20);
        let m = corpus::random_reversible(seed, n);
        let mut s = Superposition::unit(Configuration::initial(m.as_qtm(), &[]));
        for _ in 0..50 {
            s = step(m.as_qtm(), &s);
        }
        assert_eq!(s.norm_sq(), RealValue::one(), "reversible seed {seed}");
        assert_eq!(s.support_len(), 1, "classical evolution stays a single path");
        checked += 1;
    }
    for seed in 0..40u64 {
        let n = 2 + (seed as usize % 11);
        let m = corpus::random_tape_preserving(seed, n);
        assert!(check_wellformed(&m).is_ok(), "tape-preserving seed {seed}");
        let mut s = Superposition::unit(Configuration::initial(&m, &[]));
        for t in 1..=50u64 {
            s = step(&m, &s);
            if t % 10 == 0 {
                assert_eq!(s.norm_sq(), RealValue::one(), "quantum seed {seed} at step {t}");
            }
        }
        checked += 1;
    }
    assert_eq!(checked, 100);
}

/// Analysis of compiled machines stays fast: classifying the 123-state
/// two-branch compilation of counter(40) and counter(60) over a budget of
/// 1000 steps completes well inside five seconds.
#[test]
fn c8_compiled_classification_within_time_budget() {
    let started = std::time::Instant::now();
    let c = compile(&corpus::counter(40, false), &corpus::counter(60, false)).unwrap();
    let verdict = classify(&c.machine, &[], 1000, CAP).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(verdict, Classification::Probabilistic { first_step: 83, first_p: "1/2".into() });
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
}
