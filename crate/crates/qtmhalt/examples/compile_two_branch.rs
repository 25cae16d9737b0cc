//! Compiling two reversible machines into one two-branch protocol.
//!
//! The compiled machine starts one cell left of the data, writes a marker
//! and splits into the two embedded sources with amplitude 1/sqrt2 each.
//! When a branch's source halts at step t with head h, the branch sweeps
//! back to the marker, stamps its branch tag, and enters a halting state
//! at compiled step t + h + 3 exactly.
//!
//! ```bash
//! cargo run --example compile_two_branch
//! ```

use qtmhalt::amplitude::RealValue;
use qtmhalt::checks::check_wellformed;
use qtmhalt::compiler::{compile, compiled_halt_time};
use qtmhalt::corpus;
use qtmhalt::halting::halt_distribution;
use qtmhalt::machine::{simulate_classical, ClassicalOutcome};

const CAP: usize = 1 << 20;

fn main() {
    let m1 = corpus::counter(40, false);
    let m2 = corpus::counter(60, false);
    let c = compile(&m1, &m2).unwrap();

    println!("compiled machine: {} states over {} symbols", c.machine.state_count(), c.machine.alphabet.len());
    for line in c.provenance().iter().take(8) {
        println!("  {line}");
    }
    println!("  ...");

    // the compiled table is exactly unitary even though only one of its
    // 60 rows was written by hand per source row
    assert!(check_wellformed(&c.machine).is_ok());
    println!("wellformed: ok");

    // predicted halt schedule from the sources' classical runs
    let mut predicted = Vec::new();
    for (branch, src) in [(1u8, &m1), (2, &m2)] {
        let (outcome, _) = simulate_classical(src, &[], 1000);
        let ClassicalOutcome::Halted { step, head, .. } = outcome else {
            panic!("source must halt")
        };
        let t = compiled_halt_time(step, head).unwrap();
        println!("branch {branch}: source halts at step {step}, head {head} -> compiled step {t}");
        predicted.push(t);
    }
    assert_eq!(predicted, [83, 123]);

    // the protocol delivers exactly half the mass at each predicted step
    let dist = halt_distribution(&c.machine, &[], 150, CAP).unwrap();
    for &t in &predicted {
        assert_eq!(dist.p[(t - 1) as usize], RealValue::from_ratio(1, 2), "spike at {t}");
    }
    let spikes = dist.p.iter().filter(|p| !p.is_zero()).count();
    assert_eq!(spikes, 2);
    assert_eq!(dist.never, RealValue::zero());
    println!("halt mass: 1/2 at step 83 and 1/2 at step 123, nothing anywhere else");

    // sources must share the data alphabet, start at cell 0, and declare
    // exactly one halting state; anything else is rejected up front
    let err = compile(&m1, &corpus::shuttle()).unwrap_err();
    println!("refusing a non-halting source: {err}");
}
