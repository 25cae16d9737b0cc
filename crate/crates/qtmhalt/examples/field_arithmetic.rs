//! The exact amplitude field.
//!
//! Amplitudes live in Q(i, sqrt2): four rational coordinates, closed under
//! the arithmetic a transition table ever needs. Nothing here rounds, so
//! interference cancels to a true zero and comparisons of real values are
//! exact sign decisions, not float guesses.
//!
//! ```bash
//! cargo run --example field_arithmetic
//! ```

use qtmhalt::amplitude::{parse, parse_real, Amplitude, RealValue};

fn main() {
    // canonical printing and exact parsing invert each other
    let a = parse("3/4+1/2*sqrt2*i").unwrap();
    println!("parsed back out as      {a}");
    assert_eq!(parse(&a.to_string()).unwrap(), a);

    // 1/sqrt2 squared is exactly 1/2, not 0.5000000000000001
    let h = Amplitude::inv_sqrt2();
    let half = h.clone() * h.clone();
    println!("(1/sqrt2)^2           = {half}");
    assert_eq!(half, Amplitude::from_ratio(1, 2));

    // conjugate units multiply to 1: (1+sqrt2)(-1+sqrt2) = 1
    let u = parse("1+sqrt2").unwrap();
    let v = parse("-1+sqrt2").unwrap();
    println!("(1+sqrt2)(-1+sqrt2)   = {}", u.clone() * v);
    assert_eq!(u.clone() * parse("-1+sqrt2").unwrap(), Amplitude::one());

    // inverses are exact too
    let w = parse("3-2*sqrt2+i").unwrap();
    println!("w * w^-1              = {}", w.clone() * w.inv());
    assert_eq!(w.clone() * w.inv(), Amplitude::one());

    // exact sign decisions where floats need care: 99/70 vs sqrt2.
    // 99/70 = 1.4142857..., sqrt2 = 1.4142135...; the difference is ~7e-5
    // but the comparison below is integer arithmetic, not a float test.
    let near = parse_real("99/70").unwrap();
    let root = parse_real("sqrt2").unwrap();
    assert!(near > root);
    let gap = near.clone() - root.clone();
    println!("99/70 - sqrt2         = {gap}  (~{:.2e})", gap.to_f64().unwrap());

    // norm of a superposition coefficient pair: interference in the small
    let plus = h.clone() * h.clone() + h.clone() * h.clone();
    let minus = h.clone() * h.clone() - h.clone() * h.clone();
    println!("constructive pair     = {plus}");
    println!("destructive pair      = {minus}");
    assert_eq!(plus, Amplitude::one());
    assert!(minus.is_zero());

    // floats are available as a view, never as the ground truth
    let x = parse("1/3+1/7*sqrt2").unwrap();
    println!("float view of {x}: {:.17}", x.re.to_f64().unwrap());

    // real values order totally; sorting is stable and exact
    let mut vals: Vec<RealValue> = ["1", "sqrt2", "3/2", "7/5", "0"]
        .iter()
        .map(|s| parse_real(s).unwrap())
        .collect();
    vals.sort();
    let shown: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
    println!("sorted exactly        : {}", shown.join(" < "));
    assert_eq!(shown, ["0", "1", "7/5", "sqrt2", "3/2"]);
}
