//! Comparing halting times classically and through the compiled protocol.
//!
//! Classically, run both machines and compare their halt steps. On the
//! quantum side, compile them into one two-branch machine: equal runtimes
//! produce a single certain halt step, different runtimes produce two
//! half-mass spikes. Note the units differ: the compiled step is
//! t + head + 3, so branches are compared after their rewind phase.
//!
//! ```bash
//! cargo run --example compare_runtimes
//! ```

use qtmhalt::compiler::{compare_runtimes_classical, compare_runtimes_quantum, RuntimeVerdict};
use qtmhalt::corpus;

const CAP: usize = 1 << 20;

fn show(name: &str, v: &RuntimeVerdict) {
    match v {
        RuntimeVerdict::Same { step } => println!("{name:44} same, halt at {step}"),
        RuntimeVerdict::Different { first, second } => {
            println!("{name:44} different: {first:?} vs {second:?}")
        }
        RuntimeVerdict::Unknown { budget } => println!("{name:44} unknown within {budget}"),
    }
}

fn main() {
    let fast = corpus::counter(40, false);
    let fast_b = corpus::counter(40, true);
    let slow = corpus::counter(60, false);

    // same schedule, different tape output: both verdicts say "same"
    let v = compare_runtimes_classical(&fast, &fast_b, &[], 1000);
    show("classical counter(40) vs counter(40, ones)", &v);
    assert_eq!(v, RuntimeVerdict::Same { step: 40 });

    let v = compare_runtimes_quantum(&fast, &fast_b, &[], 1000, CAP).unwrap();
    show("quantum   counter(40) vs counter(40, ones)", &v);
    assert_eq!(v, RuntimeVerdict::Same { step: 83 });

    // different schedules: both modes see it, in their own units
    let v = compare_runtimes_classical(&fast, &slow, &[], 1000);
    show("classical counter(40) vs counter(60)", &v);
    assert_eq!(v, RuntimeVerdict::Different { first: Some(40), second: Some(60) });

    let v = compare_runtimes_quantum(&fast, &slow, &[], 1000, CAP).unwrap();
    show("quantum   counter(40) vs counter(60)", &v);
    assert_eq!(v, RuntimeVerdict::Different { first: Some(83), second: Some(123) });

    println!();

    // the compiled step depends on the halting head position too: these
    // two halt at the same source step 3 but at heads 1 and 3, so the
    // classical verdict is "same" while the compiled protocol separates
    // them at steps 3+1+3 = 7 and 3+3+3 = 9
    let bounce = corpus::bouncer();
    let hops = corpus::halt_at(3);
    let v = compare_runtimes_classical(&bounce, &hops, &[], 100);
    show("classical bouncer vs halt_at(3)", &v);
    assert_eq!(v, RuntimeVerdict::Same { step: 3 });

    let v = compare_runtimes_quantum(&bounce, &hops, &[], 100, CAP).unwrap();
    show("quantum   bouncer vs halt_at(3)", &v);
    assert_eq!(v, RuntimeVerdict::Different { first: Some(7), second: Some(9) });
    println!("(the quantum comparison includes each branch's rewind, hence the head term)");

    // one side never halting is still a sound "different" once the other
    // side's spike has appeared
    let v = compare_runtimes_quantum(&fast, &corpus::never_halt(), &[], 200, CAP).unwrap();
    show("quantum   counter(40) vs never_halt", &v);
    assert_eq!(v, RuntimeVerdict::Different { first: Some(83), second: None });
}
