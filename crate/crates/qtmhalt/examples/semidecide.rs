//! Semideciding the halting problem through the compiled protocol.
//!
//! Pair the machine under test with a partner that provably never halts
//! and compile the two. Any halt mass the monitored protocol ever sees
//! must come from the tested machine's branch, so observing the flag is a
//! proof of halting; not observing it within a budget proves nothing.
//!
//! ```bash
//! cargo run --example semidecide
//! ```

use qtmhalt::compiler::{semidecide_halt, SemiVerdict};
use qtmhalt::corpus;
use qtmhalt::dynamics::parse_input;

const CAP: usize = 1 << 20;

fn show(name: &str, results: &[(u64, SemiVerdict)]) {
    println!("{name}:");
    for (budget, v) in results {
        match v {
            SemiVerdict::Halts { compiled_step } => {
                println!("  budget {budget:<5} halts (compiled step {compiled_step})")
            }
            SemiVerdict::Unknown { .. } => println!("  budget {budget:<5} unknown"),
        }
    }
}

fn main() {
    let budgets = [10u64, 100, 1000];

    // a halting machine is eventually caught: counter(40) halts at source
    // step 40, head 40, so the flag arrives at compiled step 83
    let m = corpus::counter(40, false);
    let results = semidecide_halt(&m, &[], &budgets, CAP).unwrap();
    show("counter(40)", &results);
    assert_eq!(results[0].1, SemiVerdict::Unknown { budget: 10 });
    assert_eq!(results[1].1, SemiVerdict::Halts { compiled_step: 83 });
    assert_eq!(results[2].1, SemiVerdict::Halts { compiled_step: 83 });

    println!();

    // parity_halter on an odd input never halts; every budget stays
    // honest and says so
    let m = corpus::parity_halter();
    let odd = parse_input(m.as_qtm(), "1").unwrap();
    let results = semidecide_halt(&m, &odd, &budgets, CAP).unwrap();
    show("parity_halter on \"1\"", &results);
    for (_, v) in &results {
        assert!(matches!(v, SemiVerdict::Unknown { .. }));
    }

    println!();

    // on an even input it halts just past the input: steps 3, head 3
    // gives compiled step 3 + 3 + 3 = 9
    let even = parse_input(m.as_qtm(), "11").unwrap();
    let results = semidecide_halt(&m, &even, &budgets, CAP).unwrap();
    show("parity_halter on \"11\"", &results);
    assert_eq!(results[0].1, SemiVerdict::Halts { compiled_step: 9 });

    println!("\nno budget ever reports a false positive; growing budgets only add detections");
}
