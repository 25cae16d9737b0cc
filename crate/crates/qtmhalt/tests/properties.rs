//! Property-based checks: field axioms of the exact amplitudes, printing
//! and parsing as inverses, sign decisions against the float view, and
//! conservation laws of the dynamics on random machines.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qtmhalt::amplitude::{parse, Amplitude, RealValue};
use qtmhalt::checks::{check_reversible, check_wellformed};
use qtmhalt::corpus;
use qtmhalt::dynamics::{step, Configuration, Superposition};
use qtmhalt::halting::monitored_run;
use qtmhalt::machine::SymbolId;

fn ratio(num: i64, den: u8) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den as i64 + 1))
}

fn real_value() -> impl Strategy<Value = RealValue> {
    (-40i64..=40, 0u8..6, -40i64..=40, 0u8..6)
        .prop_map(|(qn, qd, sn, sd)| RealValue::new(ratio(qn, qd), ratio(sn, sd)))
}

fn amplitude() -> impl Strategy<Value = Amplitude> {
    (real_value(), real_value()).prop_map(|(re, im)| Amplitude::new(re, im))
}

proptest! {
    #[test]
    fn field_axioms_hold(a in amplitude(), b in amplitude(), c in amplitude()) {
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!(
            (a.clone() + b.clone()) + c.clone(),
            a.clone() + (b.clone() + c.clone())
        );
        prop_assert_eq!(
            (a.clone() * b.clone()) * c.clone(),
            a.clone() * (b.clone() * c.clone())
        );
        prop_assert_eq!(
            a.clone() * (b.clone() + c.clone()),
            a.clone() * b.clone() + a.clone() * c.clone()
        );
        prop_assert_eq!(a.clone() + Amplitude::zero(), a.clone());
        prop_assert_eq!(a.clone() * Amplitude::one(), a.clone());
        prop_assert_eq!(a.clone() + (-a.clone()), Amplitude::zero());
    }

    #[test]
    fn inverses_are_exact(a in amplitude()) {
        prop_assume!(!a.is_zero());
        prop_assert_eq!(a.clone() * a.inv(), Amplitude::one());
    }

    #[test]
    fn printing_and_parsing_invert(a in amplitude()) {
        let text = a.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn conjugation_fixes_the_norm(a in amplitude()) {
        prop_assert_eq!(a.conj().norm_sq(), a.norm_sq());
        prop_assert_eq!(a.conj().conj(), a.clone());
        // norm through multiplication: |ab|^2 = |a|^2 |b|^2 needs no floats
        let b = Amplitude::inv_sqrt2();
        prop_assert_eq!(
            (a.clone() * b.clone()).norm_sq(),
            a.norm_sq() * b.norm_sq()
        );
    }

    #[test]
    fn exact_sign_agrees_with_a_clear_float_gap(x in real_value(), y in real_value()) {
        let fx = x.to_f64().unwrap();
        let fy = y.to_f64().unwrap();
        // when the float gap is unambiguous the exact order must match it
        if (fx - fy).abs() > 1e-6 {
            prop_assert_eq!(x > y, fx > fy);
        }
        // and equality is decided exactly, never by closeness
        if x == y {
            prop_assert!((fx - fy).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_reversible_tables_are_what_they_claim(seed in any::<u64>(), n in 2usize..12) {
        let m = corpus::random_reversible(seed, n);
        prop_assert!(check_reversible(m.as_qtm()).is_ok());
        prop_assert!(check_wellformed(m.as_qtm()).is_ok());
    }

    #[test]
    fn sabotage_always_breaks_wellformedness(seed in any::<u64>(), n in 2usize..10, which in 0usize..3) {
        let how = [
            corpus::Sabotage::ScaleAmplitude,
            corpus::Sabotage::CloneArrow,
            corpus::Sabotage::MixDirections,
        ][which];
        let bad = corpus::sabotage(corpus::random_reversible(seed, n).as_qtm(), how);
        prop_assert!(!check_wellformed(&bad).is_ok());
    }

    #[test]
    fn classical_runs_keep_one_configuration(
        seed in any::<u64>(),
        n in 2usize..12,
        bits in proptest::collection::vec(0u8..2, 0..6),
        steps in 1u64..25,
    ) {
        let m = corpus::random_reversible(seed, n);
        let input: Vec<SymbolId> = bits.iter().map(|b| SymbolId(b + 1)).collect();
        let mut s = Superposition::unit(Configuration::initial(m.as_qtm(), &input));
        for _ in 0..steps {
            s = step(m.as_qtm(), &s);
        }
        prop_assert_eq!(s.support_len(), 1);
        prop_assert_eq!(s.norm_sq(), RealValue::one());
    }

    #[test]
    fn quantum_evolution_conserves_the_exact_norm(seed in any::<u64>(), n in 2usize..8, steps in 1u64..20) {
        let m = corpus::random_tape_preserving(seed, n);
        let mut s = Superposition::unit(Configuration::initial(&m, &[]));
        for _ in 0..steps {
            s = step(&m, &s);
        }
        prop_assert_eq!(s.norm_sq(), RealValue::one());
    }

    #[test]
    fn monitored_mass_partitions_exactly(seed in any::<u64>(), n in 2usize..7, budget in 1u64..15) {
        // halt mass recorded + mass still running = 1, with no drift
        let m = corpus::random_tape_preserving(seed, n);
        let run = monitored_run(&m, &[], budget, 1 << 22).unwrap();
        let mut total = run.residual.norm_sq();
        for p in &run.p {
            total = total + p.clone();
        }
        prop_assert_eq!(total, RealValue::one());
    }
}
