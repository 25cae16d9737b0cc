//! When does watching the halting flag change the outcome?
//!
//! The monitored protocol measures the flag after every step; the
//! unmonitored one lets the machine run freely and measures once at the
//! end. If every halting row leaves the halting set and the scanned
//! symbol fixed (stationarity), the two laws agree exactly. A machine
//! that routes amplitude *out* of a halting state makes them differ, and
//! the gap is the total variation distance computed here exactly.
//!
//! ```bash
//! cargo run --example monitored_vs_unmonitored
//! ```

use qtmhalt::amplitude::RealValue;
use qtmhalt::checks::{check_stationary, StationaryMode};
use qtmhalt::compiler::compile;
use qtmhalt::corpus;
use qtmhalt::halting::compare_protocols;

const CAP: usize = 1 << 20;

fn main() {
    // strict stationarity holds for these tables, so monitoring is free:
    // total variation is exactly zero at any budget
    for (name, m) in [
        ("never_halt", corpus::never_halt().into_qtm()),
        ("hadamard_coin", corpus::hadamard_coin()),
        ("shuttle", corpus::shuttle().into_qtm()),
    ] {
        assert!(check_stationary(&m, StationaryMode::Strict).is_ok());
        for budget in [50u64, 200] {
            let cmp = compare_protocols(&m, &[], budget, CAP).unwrap();
            assert_eq!(cmp.tv, RealValue::zero(), "{name} at budget {budget}");
        }
        println!("{name:16} strictly stationary, tv = 0 at budgets 50 and 200");
    }

    println!();

    // the divergence machine: an equal split where branch `a` halts into a
    // trap and branch `b` merely passes through its halting state
    let m = corpus::myers_interference();
    let cmp = compare_protocols(&m, &[], 20, CAP).unwrap();
    println!("myers_interference, budget 20:");
    println!("  monitored law:");
    for ((t, word), mass) in &cmp.monitored {
        println!("    t = {t}, word {word}: {mass}");
    }
    println!("    never: {}", cmp.monitored_never);
    println!("  unmonitored law:");
    for (word, mass) in &cmp.unmonitored {
        println!("    word {word}: {mass}");
    }
    println!("    never: {}", cmp.unmonitored_never);
    println!("  total variation: {}", cmp.tv);

    // monitoring froze both branches at t = 2; free evolution let branch b
    // escape, so half the mass turned into `never`
    assert_eq!(cmp.monitored_never, RealValue::zero());
    assert_eq!(cmp.unmonitored_never, RealValue::from_ratio(1, 2));
    assert_eq!(cmp.tv, RealValue::from_ratio(1, 2));

    println!();

    // compiled two-branch machines fail the static strict check (their
    // unreachable junk rows rewrite symbols) yet their reachable dynamics
    // are stationary, so the two protocols still agree exactly
    let c = compile(&corpus::counter(5, false), &corpus::counter(7, true)).unwrap();
    assert!(!check_stationary(&c.machine, StationaryMode::Strict).is_ok());
    let cmp = compare_protocols(&c.machine, &[], 40, CAP).unwrap();
    assert_eq!(cmp.tv, RealValue::zero());
    println!("compiled(counter 5, counter 7): static check conservative, dynamic tv = 0");
}
