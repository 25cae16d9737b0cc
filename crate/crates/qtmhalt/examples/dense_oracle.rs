//! Auditing the sparse engine against a dense windowed operator.
//!
//! On a finite tape window the one-step evolution is an explicit matrix.
//! Building it straight from the rule table gives an independent witness:
//! its interior Gram matrix is the identity exactly when the table is
//! well-formed, and applying it must reproduce the sparse evolution
//! column for column until amplitude reaches the window edge.
//!
//! ```bash
//! cargo run --example dense_oracle
//! ```

use qtmhalt::checks::check_wellformed;
use qtmhalt::corpus;
use qtmhalt::dynamics::{step, Configuration, Superposition};
use qtmhalt::oracle::{build, OracleError, Window, DEFAULT_DIM_CAP};

fn main() {
    // a well-formed table has a defect-free interior Gram matrix
    let m = corpus::equal_split_halter();
    let d = build(&m, Window::new(-2, 2), DEFAULT_DIM_CAP).unwrap();
    println!(
        "equal_split_halter on window -2..2: dim {}, interior {}, escaping {}",
        d.dim(),
        d.interior_count(),
        d.dim() - d.interior_count()
    );
    assert!(d.gram_defects().is_empty());
    println!("gram defects: none (matches the sparse wellformedness check)");

    // break one amplitude and the matrix stops being an isometry; the
    // defect names the exact pair of basis columns that overlap wrongly
    let bad = corpus::sabotage(&m, corpus::Sabotage::ScaleAmplitude);
    let d_bad = build(&bad, Window::new(-2, 2), DEFAULT_DIM_CAP).unwrap();
    let defects = d_bad.gram_defects();
    assert!(!check_wellformed(&bad).is_ok());
    assert!(!defects.is_empty());
    let (i, j, v) = &defects[0];
    let ci = d_bad.config_of(*i);
    println!(
        "sabotaged copy: {} defect(s); first at column pair ({i}, {j}), state {}, value {v}",
        defects.len(),
        bad.state_name(ci.state),
    );
    assert_eq!(i, j, "a scaled amplitude shows first as a diagonal defect");

    println!();

    // the shuttle never leaves cells -1..0, so dense and sparse evolution
    // agree for as long as we care to run them
    let m = corpus::shuttle();
    let d = build(m.as_qtm(), Window::new(-2, 2), DEFAULT_DIM_CAP).unwrap();
    let start = Superposition::unit(Configuration::initial(m.as_qtm(), &[]));
    let mut dense = d.embed(&start).unwrap();
    let mut sparse = start;
    for _ in 0..50 {
        dense = d.evolve(&dense, 1).unwrap();
        sparse = step(m.as_qtm(), &sparse);
        assert_eq!(d.extract(&dense), sparse);
    }
    println!("shuttle: 50 steps of dense evolution match the sparse engine exactly");

    // escape is an error, not a silent truncation: the divergence machine
    // fits in -2..2 for four steps and leaves during the fifth
    let m = corpus::myers_interference();
    let d = build(&m, Window::new(-2, 2), DEFAULT_DIM_CAP).unwrap();
    let v0 = d.embed(&Superposition::unit(Configuration::initial(&m, &[]))).unwrap();
    assert!(d.evolve(&v0, 4).is_ok());
    let err = d.evolve(&v0, 5).unwrap_err();
    println!("myers_interference: {err}");
    assert_eq!(err, OracleError::Escaped { step: 5 });

    // basis sizes are checked before anything is allocated
    let err = build(corpus::counter(10, false).as_qtm(), Window::new(-20, 20), DEFAULT_DIM_CAP)
        .err()
        .expect("window is far too wide");
    println!("counter(10) on window -20..20: {err}");
    assert!(matches!(err, OracleError::DimExceedsCap { .. }));
}
