//! The monitored halting protocol and its exact halting-time law.
//!
//! After every step the halting flag is measured. Mass that lands on a
//! halting state is recorded and removed; what survives keeps evolving
//! without renormalisation, so the recorded numbers are directly the
//! unconditional probabilities p(halt first at t).
//!
//! ```bash
//! cargo run --example halting_distribution
//! ```

use qtmhalt::amplitude::RealValue;
use qtmhalt::compiler::compile;
use qtmhalt::corpus;
use qtmhalt::halting::halt_distribution;

const CAP: usize = 1 << 20;

fn show(name: &str, dist: &qtmhalt::halting::HaltDistribution) {
    println!("{name} (budget {}):", dist.budget);
    for (i, p) in dist.p.iter().enumerate() {
        if !p.is_zero() {
            println!("  t = {:<4} p = {}  cumulative {}", i + 1, p, dist.cumulative[i]);
        }
    }
    println!("  never within budget: {}", dist.never);
}

fn main() {
    // a deterministic halter has a single unit spike
    let m = corpus::bouncer();
    let dist = halt_distribution(m.as_qtm(), &[], 10, CAP).unwrap();
    show("bouncer", &dist);
    assert_eq!(dist.p[2], RealValue::one());
    assert_eq!(dist.never, RealValue::zero());

    println!();

    // an equal split halts with probability exactly 1/2 at step 2; the
    // other half walks forever and shows up as `never`
    let m = corpus::equal_split_halter();
    let dist = halt_distribution(&m, &[], 30, CAP).unwrap();
    show("equal_split_halter", &dist);
    assert_eq!(dist.p[1], RealValue::from_ratio(1, 2));
    assert_eq!(dist.never, RealValue::from_ratio(1, 2));

    println!();

    // compiling two deterministic halters yields two exact half spikes at
    // compiled steps t + head + 3, one per branch
    let c = compile(&corpus::immediate_halt(), &corpus::halt_at(2)).unwrap();
    let dist = halt_distribution(&c.machine, &[], 12, CAP).unwrap();
    show("compiled(immediate_halt, halt_at_two)", &dist);
    assert_eq!(dist.p[4], RealValue::from_ratio(1, 2)); // 1 + 1 + 3 = 5
    assert_eq!(dist.p[6], RealValue::from_ratio(1, 2)); // 2 + 2 + 3 = 7
    assert_eq!(dist.never, RealValue::zero());

    // the cumulative law is exact: 1/2 + 1/2 sums to 1, no epsilon
    assert_eq!(dist.cumulative.last().unwrap(), &RealValue::one());
}
