//! Loading machines and running the structural checks.
//!
//! A table is *well-formed* when its one-step operator is an isometry:
//! unit rows, orthogonal rows, and the two-direction separability
//! condition. A classical table is *reversible* when it is a bijection on
//! (state, symbol) pairs entering each state from one direction only.
//! Partial files are completed deterministically on load.
//!
//! ```bash
//! cargo run --example build_and_check
//! ```

use qtmhalt::checks::{
    check_reversible, check_stationary, check_wellformed, describe_wellformed_violation,
    StationaryMode,
};
use qtmhalt::corpus;
use qtmhalt::format::parse_machine;
use qtmhalt::machine::{StateId, BLANK};

fn main() {
    // a file that spells out only three rows; the loader completes the
    // other six so the table becomes exactly unitary
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../machines/split_walkers.qtm");
    let m = parse_machine(&std::fs::read_to_string(path).unwrap()).unwrap();
    println!("split_walkers: {} states over {} symbols", m.state_count(), m.alphabet.len());

    let zero = m.alphabet.lookup("0").unwrap();
    println!("completed row (s, 0):");
    for e in m.row(StateId(0), zero) {
        println!(
            "  {} -> {}, {}, {:?}",
            e.amp,
            m.state_name(e.state),
            m.alphabet.name(e.write),
            e.dir
        );
    }
    // the completion supplied the conjugate partner of the written split
    let row = m.row(StateId(0), zero);
    assert_eq!(row.len(), 2);
    assert_eq!(row[0].amp, qtmhalt::amplitude::Amplitude::inv_sqrt2());
    assert_eq!(row[1].amp, -qtmhalt::amplitude::Amplitude::inv_sqrt2());

    let wf = check_wellformed(&m);
    println!("wellformed: {}", if wf.is_ok() { "ok" } else { "violated" });
    assert!(wf.is_ok());

    // reversibility is the classical specialisation
    let r = corpus::parity_halter();
    assert!(check_reversible(r.as_qtm()).is_ok());
    println!("parity_halter: reversible ok");

    // break the table on purpose and watch the exact witnesses appear
    for how in [
        corpus::Sabotage::ScaleAmplitude,
        corpus::Sabotage::CloneArrow,
        corpus::Sabotage::MixDirections,
    ] {
        let bad = corpus::sabotage(r.as_qtm(), how);
        let report = check_wellformed(&bad);
        assert!(!report.is_ok());
        let first = describe_wellformed_violation(&bad, &report.violations[0]);
        println!("{how:?}: {} violation(s), e.g. {first}", report.violations.len());
    }

    // stationarity: does the halting set trap the control state and leave
    // the tape alone? the strict check inspects every halting row
    let st = check_stationary(corpus::never_halt().as_qtm(), StationaryMode::Strict);
    println!("never_halt strict stationarity: {}", if st.is_ok() { "ok" } else { "violated" });
    assert!(st.is_ok());

    let st = check_stationary(&corpus::myers_interference(), StationaryMode::Strict);
    println!("myers_interference strict stationarity: {} violation(s)", st.violations.len());
    assert!(!st.is_ok());

    // sanity: the blank symbol is always symbol 0
    assert_eq!(m.alphabet.name(BLANK), "B");
}
