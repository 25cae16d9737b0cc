//! The halting trichotomy.
//!
//! Within a step budget every run falls into one of three classes: the
//! first halt mass is the whole remaining mass (halting is certain), the
//! first halt mass is a proper fraction (halting is probabilistic), or no
//! halt mass appears at all. Because arithmetic is exact the first two
//! cases are separated by a true equality test, not a tolerance.
//!
//! ```bash
//! cargo run --example classify_runs
//! ```

use qtmhalt::corpus;
use qtmhalt::dynamics::parse_input;
use qtmhalt::halting::{classify, Classification};

const CAP: usize = 1 << 20;

fn show(name: &str, c: &Classification) {
    match c {
        Classification::NonProbabilisticHaltAt { step } => {
            println!("{name:32} halts with certainty at step {step}");
        }
        Classification::Probabilistic { first_step, first_p } => {
            println!("{name:32} probabilistic, first mass {first_p} at step {first_step}");
        }
        Classification::NoHaltWithinBudget { budget } => {
            println!("{name:32} no halt mass within budget {budget}");
        }
    }
}

fn main() {
    let c = classify(corpus::counter(40, false).as_qtm(), &[], 1000, CAP).unwrap();
    show("counter(40)", &c);
    assert_eq!(c, Classification::NonProbabilisticHaltAt { step: 40 });

    let c = classify(&corpus::equal_split_halter(), &[], 1000, CAP).unwrap();
    show("equal_split_halter", &c);
    assert_eq!(c, Classification::Probabilistic { first_step: 2, first_p: "1/2".into() });

    let c = classify(corpus::never_halt().as_qtm(), &[], 1000, CAP).unwrap();
    show("never_halt", &c);
    assert_eq!(c, Classification::NoHaltWithinBudget { budget: 1000 });

    println!();

    // the same machine can land in different classes on different inputs
    let m = corpus::parity_halter();
    for (input, expect_halt) in [("11", true), ("1", false), ("1010", true)] {
        let w = parse_input(m.as_qtm(), input).unwrap();
        let c = classify(m.as_qtm(), &w, 50, CAP).unwrap();
        show(&format!("parity_halter on {input:?}"), &c);
        match c {
            Classification::NonProbabilisticHaltAt { .. } => assert!(expect_halt),
            Classification::NoHaltWithinBudget { .. } => assert!(!expect_halt),
            other => panic!("classical machine cannot be probabilistic: {other:?}"),
        }
    }
}
