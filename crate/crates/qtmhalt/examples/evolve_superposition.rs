//! Exact sparse evolution of configuration superpositions.
//!
//! The state is a finitely supported map from configurations to exact
//! amplitudes. One step applies the table linearly; destructive
//! interference removes entries outright because cancelled amplitudes are
//! exactly zero.
//!
//! ```bash
//! cargo run --example evolve_superposition
//! ```

use qtmhalt::corpus;
use qtmhalt::dynamics::{step, Configuration, Superposition};

fn main() {
    // the Hadamard coin mixes two control states over an untouched tape;
    // after two steps all amplitude is back on `u` (H^2 = I)
    let m = corpus::hadamard_coin();
    let mut s = Superposition::unit(Configuration::initial(&m, &[]));
    for t in 1..=4u32 {
        s = step(&m, &s);
        let terms: Vec<String> = s
            .iter()
            .map(|(c, a)| format!("({}, head {}) {}", m.state_name(c.state), c.head, a))
            .collect();
        println!("t = {t}: support {:>2}  {}", s.support_len(), terms.join("   "));
        assert_eq!(s.norm_sq(), qtmhalt::amplitude::RealValue::one());
        // even steps: the d-component has cancelled exactly
        if t % 2 == 0 {
            assert_eq!(s.support_len(), 1);
        }
    }

    println!();

    // the walking coin spreads instead: coin-dependent movement keeps the
    // branches at different heads, so nothing can cancel and the support
    // grows linearly while the exact norm stays pinned at 1
    let m = corpus::quantum_walk();
    let mut s = Superposition::unit(Configuration::initial(&m, &[]));
    for t in 1..=8u32 {
        s = step(&m, &s);
        assert_eq!(s.norm_sq(), qtmhalt::amplitude::RealValue::one());
        println!("walk t = {t}: support {:>2}, norm exactly 1", s.support_len());
    }
    assert!(s.support_len() > 8);

    println!();

    // inputs are written on cells 0..; words render as `offset:symbols`
    let m = corpus::bit_flipper();
    let input = qtmhalt::dynamics::parse_input(m.as_qtm(), "1011").unwrap();
    let mut s = Superposition::unit(Configuration::initial(m.as_qtm(), &input));
    for _ in 0..5 {
        s = step(m.as_qtm(), &s);
    }
    let (c, a) = s.iter().next().unwrap();
    println!(
        "bit_flipper on 1011, 5 steps: state {}, word {}, amp {}",
        m.as_qtm().state_name(c.state),
        c.render_word(m.as_qtm()),
        a
    );
    assert_eq!(c.render_word(m.as_qtm()), "0:0100");
    assert!(m.as_qtm().is_halting(c.state));
}
