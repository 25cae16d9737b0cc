//! Machine builders used across tests, examples and the shipped machine
//! files: small reversible machines with known halt schedules, quantum
//! machines exhibiting interference and protocol divergence, and seeded
//! random generators for well-formed and deliberately broken tables.
//!
//! Builders specify only the rows the intended runs reach; the assembly
//! completion fills the rest. The files under `machines/` mirror these
//! tables row for row.

use crate::amplitude::Amplitude;
use crate::machine::{Alphabet, Direction, Entry, MachineKind, Qtm, Rtm, StateId, SymbolId};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

struct Builder {
    alphabet: Alphabet,
    names: Vec<String>,
    partial: Vec<Vec<Option<Vec<Entry>>>>,
}

impl Builder {
    fn bits(names: &[&str]) -> Builder {
        Builder::over(Alphabet::default_bits(), names)
    }

    fn marked(names: &[&str]) -> Builder {
        let alphabet = Alphabet::new(vec!["B".into(), "0".into(), "1".into(), "#".into()]).unwrap();
        Builder::over(alphabet, names)
    }

    fn over(alphabet: Alphabet, names: &[&str]) -> Builder {
        let partial = vec![vec![None; alphabet.len()]; names.len()];
        Builder { alphabet, names: names.iter().map(|s| s.to_string()).collect(), partial }
    }

    fn state(&self, name: &str) -> StateId {
        StateId(self.names.iter().position(|n| n == name).expect("known state") as u16)
    }

    fn sym(&self, name: &str) -> SymbolId {
        self.alphabet.lookup(name).expect("known symbol")
    }

    fn class(&mut self, state: &str, scanned: &str, target: &str, write: &str, dir: Direction) {
        let row = vec![Entry::class(Amplitude::one(), self.state(target), self.sym(write), dir)];
        self.rule(state, scanned, row);
    }

    fn rule(&mut self, state: &str, scanned: &str, row: Vec<Entry>) {
        let s = self.state(state).0 as usize;
        let y = self.sym(scanned).0 as usize;
        assert!(self.partial[s][y].is_none(), "row defined twice");
        self.partial[s][y] = Some(row);
    }

    fn build(self, kind: MachineKind, initial: &str, halting: &[&str], start_head: i64) -> Qtm {
        let initial = self.state(initial);
        let halting: BTreeSet<StateId> = halting.iter().map(|h| self.state(h)).collect();
        Qtm::assemble(kind, self.alphabet, self.names, initial, halting, start_head, self.partial)
            .expect("corpus table assembles")
    }
}

fn rtm(q: Qtm) -> Rtm {
    Rtm::try_new(q).expect("corpus table is reversible")
}

/// Hops through `n` fresh states on any symbol, entering the halting state
/// at step n with the head at cell n.
pub fn halt_at(n: u64) -> Rtm {
    assert!(n >= 1);
    let names: Vec<String> = (0..n).map(|i| format!("q{i}")).chain(["qf".to_string()]).collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut b = Builder::bits(&name_refs);
    for i in 0..n {
        let here = format!("q{i}");
        let next = if i + 1 == n { "qf".to_string() } else { format!("q{}", i + 1) };
        for y in ["B", "0", "1"] {
            b.class(&here, y, &next, y, Direction::R);
        }
    }
    rtm(b.build(MachineKind::Rtm, "q0", &["qf"], 0))
}

/// Halts at step 1 on every input.
pub fn immediate_halt() -> Rtm {
    halt_at(1)
}

/// Marches right for `n` steps over blanks, then halts; `write_ones`
/// leaves a trail of 1s instead of blanks. Only the blank rows are
/// specified, so the empty-input run is the defined behaviour.
pub fn counter(n: u64, write_ones: bool) -> Rtm {
    assert!(n >= 1);
    let names: Vec<String> = (0..n).map(|i| format!("q{i}")).chain(["qf".to_string()]).collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut b = Builder::bits(&name_refs);
    let w = if write_ones { "1" } else { "B" };
    for i in 0..n {
        let here = format!("q{i}");
        let next = if i + 1 == n { "qf".to_string() } else { format!("q{}", i + 1) };
        b.class(&here, "B", &next, w, Direction::R);
    }
    rtm(b.build(MachineKind::Rtm, "q0", &["qf"], 0))
}

/// Walks right forever; its halting state exists but nothing reaches it.
/// Passes the strict stationarity check.
pub fn never_halt() -> Rtm {
    let mut b = Builder::bits(&["n0", "nf"]);
    for y in ["B", "0", "1"] {
        b.class("n0", y, "n0", y, Direction::R);
        b.class("nf", y, "nf", y, Direction::R);
    }
    rtm(b.build(MachineKind::Rtm, "n0", &["nf"], 0))
}

/// Halts past the input iff the input holds an even number of 1s;
/// otherwise walks right forever.
pub fn parity_halter() -> Rtm {
    let mut b = Builder::bits(&["p0", "p1", "qf"]);
    b.class("p0", "0", "p0", "0", Direction::R);
    b.class("p0", "1", "p1", "1", Direction::R);
    b.class("p0", "B", "qf", "B", Direction::R);
    b.class("p1", "0", "p1", "0", Direction::R);
    b.class("p1", "1", "p0", "1", Direction::R);
    b.class("p1", "B", "p1", "B", Direction::R);
    rtm(b.build(MachineKind::Rtm, "p0", &["qf"], 0))
}

/// Writes a 1, steps back onto it, halts moving right: a two-direction
/// machine halting at step 3 with the head at cell 1.
pub fn bouncer() -> Rtm {
    let mut b = Builder::bits(&["q0", "q1", "q2", "qf"]);
    b.class("q0", "B", "q1", "1", Direction::R);
    b.class("q1", "B", "q2", "B", Direction::L);
    b.class("q2", "1", "qf", "1", Direction::R);
    rtm(b.build(MachineKind::Rtm, "q0", &["qf"], 0))
}

/// Flips every bit of the input left to right, halting on the first blank
/// (step n+1 on an n-bit input).
pub fn bit_flipper() -> Rtm {
    let mut b = Builder::bits(&["f0", "qf"]);
    b.class("f0", "0", "f0", "1", Direction::R);
    b.class("f0", "1", "f0", "0", Direction::R);
    b.class("f0", "B", "qf", "B", Direction::R);
    rtm(b.build(MachineKind::Rtm, "f0", &["qf"], 0))
}

/// Oscillates between cells -1 and 0 forever: the head never leaves a
/// two-cell region, which makes this the reference machine for windowed
/// dense checks over long horizons.
pub fn shuttle() -> Rtm {
    let mut b = Builder::bits(&["r", "l"]);
    for y in ["B", "0", "1"] {
        b.class("r", y, "l", y, Direction::L);
        b.class("l", y, "r", y, Direction::R);
    }
    rtm(b.build(MachineKind::Rtm, "r", &[], 0))
}

/// A coined walk: on every scanned symbol the two control states mix
/// through a Hadamard block while the tape is left untouched. Never
/// halts; the unreachable halting state keeps the table strictly
/// stationary. Two steps return all amplitude to the `u` state, the
/// textbook interference pattern.
pub fn hadamard_coin() -> Qtm {
    let h = Amplitude::inv_sqrt2();
    let mut b = Builder::bits(&["u", "d", "hf"]);
    for y in ["B", "0", "1"] {
        let (u, d, sy) = (b.state("u"), b.state("d"), b.sym(y));
        b.rule("u", y, vec![
            Entry::class(h.clone(), u, sy, Direction::R),
            Entry::class(h.clone(), d, sy, Direction::R),
        ]);
        b.rule("d", y, vec![
            Entry::class(h.clone(), u, sy, Direction::R),
            Entry::class(-h.clone(), d, sy, Direction::R),
        ]);
        b.class("hf", y, "hf", y, Direction::R);
    }
    b.build(MachineKind::Qtm, "u", &["hf"], 0)
}

/// The standard coined walk with coin-dependent movement: `u` steps
/// right, `d` steps left. The support grows linearly with time, which
/// makes this the reference machine for support-cap behaviour.
pub fn quantum_walk() -> Qtm {
    let h = Amplitude::inv_sqrt2();
    let mut b = Builder::bits(&["u", "d"]);
    for y in ["B", "0", "1"] {
        let (u, d, sy) = (b.state("u"), b.state("d"), b.sym(y));
        b.rule("u", y, vec![
            Entry::class(h.clone(), u, sy, Direction::R),
            Entry::class(h.clone(), d, sy, Direction::L),
        ]);
        b.rule("d", y, vec![
            Entry::class(h.clone(), u, sy, Direction::R),
            Entry::class(-h.clone(), d, sy, Direction::L),
        ]);
    }
    b.build(MachineKind::Qtm, "u", &[], 0)
}

/// The protocol-divergence machine: one branch halts and stays halted,
/// the other passes through a halting state transiently and escapes.
/// Monitored and unmonitored outcome laws differ by total variation 1/2.
pub fn myers_interference() -> Qtm {
    let h = Amplitude::inv_sqrt2();
    let mut b = Builder::marked(&["s", "a", "b", "ha", "hb", "g"]);
    let (a, bb) = (b.state("a"), b.state("b"));
    let (one, zero) = (b.sym("1"), b.sym("0"));
    b.rule("s", "B", vec![
        Entry::class(h.clone(), a, one, Direction::R),
        Entry::class(h.clone(), bb, zero, Direction::R),
    ]);
    b.class("a", "B", "ha", "#", Direction::L);
    b.class("b", "B", "hb", "#", Direction::L);
    // ha traps: scans the written 1, then blanks leftward forever
    b.class("ha", "1", "ha", "1", Direction::L);
    b.class("ha", "B", "ha", "B", Direction::L);
    // hb leaks: one step later the branch leaves the halting set for good
    b.class("hb", "0", "g", "0", Direction::R);
    b.class("g", "#", "g", "#", Direction::R);
    b.class("g", "B", "g", "B", Direction::R);
    b.build(MachineKind::Qtm, "s", &["ha", "hb"], 0)
}

/// Splits once; one branch halts at step 2 with probability 1/2, the
/// other walks forever. The simplest probabilistically halting machine.
pub fn equal_split_halter() -> Qtm {
    let h = Amplitude::inv_sqrt2();
    let mut b = Builder::bits(&["s", "a", "b", "h"]);
    let (a, bb) = (b.state("a"), b.state("b"));
    let (one, zero) = (b.sym("1"), b.sym("0"));
    b.rule("s", "B", vec![
        Entry::class(h.clone(), a, one, Direction::R),
        Entry::class(h.clone(), bb, zero, Direction::R),
    ]);
    b.class("a", "B", "h", "1", Direction::R);
    b.class("b", "B", "b", "B", Direction::R);
    b.class("h", "B", "h", "B", Direction::R);
    b.build(MachineKind::Qtm, "s", &["h"], 0)
}

/// A uniformly random reversible machine: a random bijection from
/// (state, scanned) to (state, written) pairs, with one movement
/// direction drawn per target state.
pub fn random_reversible(seed: u64, n_states: usize) -> Rtm {
    assert!((2..=60).contains(&n_states));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..n_states).map(|i| format!("s{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut b = Builder::bits(&name_refs);
    let dirs: Vec<Direction> = (0..n_states)
        .map(|_| if rng.gen::<bool>() { Direction::R } else { Direction::L })
        .collect();
    let mut targets: Vec<(usize, usize)> =
        (0..n_states).flat_map(|q| (0..3).map(move |y| (q, y))).collect();
    targets.shuffle(&mut rng);
    for (i, (q, y)) in (0..n_states).flat_map(|q| (0..3).map(move |y| (q, y))).enumerate() {
        let (tq, ty) = targets[i];
        let row = vec![Entry::class(Amplitude::one(), StateId(tq as u16), SymbolId(ty as u8), dirs[tq])];
        b.partial[q][y] = Some(row);
    }
    let halting = names.last().unwrap().clone();
    rtm(b.build(MachineKind::Rtm, "s0", &[halting.as_str()], 0))
}

/// A random tape-preserving quantum machine: per scanned symbol, a random
/// exact unitary mixes the control states; written symbols always equal
/// scanned ones and each target state keeps one direction, so the table
/// is well-formed by construction and superpositions stay small.
pub fn random_tape_preserving(seed: u64, n_states: usize) -> Qtm {
    assert!((2..=12).contains(&n_states));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..n_states).map(|i| format!("s{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut b = Builder::bits(&name_refs);
    let dirs: Vec<Direction> = (0..n_states)
        .map(|_| if rng.gen::<bool>() { Direction::R } else { Direction::L })
        .collect();
    for y in 0..3u8 {
        let cols = random_unitary(&mut rng, n_states);
        for p in 0..n_states {
            let row: Vec<Entry> = (0..n_states)
                .filter(|&q| !cols[p][q].is_zero())
                .map(|q| Entry::class(cols[p][q].clone(), StateId(q as u16), SymbolId(y), dirs[q]))
                .collect();
            b.partial[p][y as usize] = Some(row);
        }
    }
    b.build(MachineKind::Qtm, "s0", &[], 0)
}

/// Random exact unitary as columns: a product of Hadamard blocks, swaps
/// and i-phases on random coordinate pairs.
fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Amplitude>> {
    let mut cols: Vec<Vec<Amplitude>> = (0..n)
        .map(|p| (0..n).map(|q| if p == q { Amplitude::one() } else { Amplitude::zero() }).collect())
        .collect();
    let h = Amplitude::inv_sqrt2();
    for _ in 0..(3 * n) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..3) {
            0 => {
                // Hadamard block on (i, j)
                for col in cols.iter_mut() {
                    let vi = col[i].clone();
                    let vj = col[j].clone();
                    col[i] = h.clone() * (vi.clone() + vj.clone());
                    col[j] = h.clone() * (vi - vj);
                }
            }
            1 => {
                for col in cols.iter_mut() {
                    col.swap(i, j);
                }
            }
            _ => {
                for col in cols.iter_mut() {
                    let vi = col[i].clone();
                    col[i] = vi * Amplitude::i();
                }
            }
        }
    }
    cols
}

/// Ways to break a well-formed table, one condition at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sabotage {
    /// Scale one amplitude so a row loses unit norm.
    ScaleAmplitude,
    /// Copy one row over another so two rows share every arrow.
    CloneArrow,
    /// Retarget one row so some state is entered from both directions.
    MixDirections,
}

/// Return a structurally valid but ill-formed variant of `m`.
pub fn sabotage(m: &Qtm, how: Sabotage) -> Qtm {
    let mut partial = m.to_partial();
    match how {
        Sabotage::ScaleAmplitude => {
            let row = partial[0][0].as_mut().unwrap();
            row[0].amp = row[0].amp.clone() * Amplitude::inv_sqrt2();
        }
        Sabotage::CloneArrow => {
            partial[0][1] = partial[0][0].clone();
        }
        Sabotage::MixDirections => {
            let lead = partial[0][0].as_ref().unwrap()[0].clone();
            let flipped = match lead.dir {
                Direction::L => Direction::R,
                Direction::R => Direction::L,
            };
            partial[0][1] = Some(vec![Entry::class(Amplitude::one(), lead.state, lead.write, flipped)]);
        }
    }
    Qtm::assemble(
        m.kind,
        m.alphabet.clone(),
        m.state_names().to_vec(),
        m.initial,
        m.halting.clone(),
        m.start_head,
        partial,
    )
    .expect("sabotaged table stays structurally valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::RealValue;
    use crate::checks::{check_reversible, check_stationary, check_wellformed, StationaryMode};
    use crate::dynamics::{evolve, step, Configuration, Superposition};
    use crate::halting::{classify, compare_protocols, Classification};
    use crate::machine::{simulate_classical, ClassicalOutcome};

    const CAP: usize = 1 << 20;

    #[test]
    fn corpus_machines_pass_their_kind_checks() {
        let rtms = [
            ("halt_at_3", halt_at(3)),
            ("counter", counter(5, false)),
            ("counter_ones", counter(5, true)),
            ("never_halt", never_halt()),
            ("parity", parity_halter()),
            ("bouncer", bouncer()),
            ("bit_flipper", bit_flipper()),
        ];
        for (name, m) in &rtms {
            let wf = check_wellformed(m.as_qtm());
            assert!(wf.is_ok(), "{name} not well-formed: {:?}", wf.violations);
        }
        for (name, m) in [("hadamard_coin", hadamard_coin()), ("myers", myers_interference()), ("split", equal_split_halter())] {
            let wf = check_wellformed(&m);
            assert!(wf.is_ok(), "{name} not well-formed: {:?}", wf.violations);
            assert!(!check_reversible(&m).is_ok(), "{name} should not be classical");
        }
    }

    #[test]
    fn strict_stationarity_passers() {
        assert!(check_stationary(never_halt().as_qtm(), StationaryMode::Strict).is_ok());
        assert!(check_stationary(&hadamard_coin(), StationaryMode::Strict).is_ok());
        assert!(!check_stationary(&myers_interference(), StationaryMode::Strict).is_ok());
    }

    #[test]
    fn known_halt_schedules() {
        for (m, t, h) in [
            (immediate_halt(), 1u64, 1i64),
            (halt_at(2), 2, 2),
            (counter(40, false), 40, 40),
            (bouncer(), 3, 1),
        ] {
            match simulate_classical(&m, &[], 100) {
                (ClassicalOutcome::Halted { step, head, .. }, false) => {
                    assert_eq!((step, head), (t, h));
                }
                other => panic!("expected clean halt, got {other:?}"),
            }
        }
    }

    #[test]
    fn shuttle_never_leaves_two_cells() {
        let m = shuttle();
        let mut s = Superposition::unit(Configuration::initial(m.as_qtm(), &[]));
        for _ in 0..20 {
            s = step(m.as_qtm(), &s);
            assert!(s.iter().all(|(c, _)| c.head == -1 || c.head == 0));
        }
    }

    #[test]
    fn parity_behaviour() {
        let m = parity_halter();
        let q = m.as_qtm();
        let even = crate::dynamics::parse_input(q, "11").unwrap();
        let odd = crate::dynamics::parse_input(q, "100").unwrap();
        assert!(matches!(simulate_classical(&m, &even, 50).0, ClassicalOutcome::Halted { step: 3, .. }));
        assert!(matches!(simulate_classical(&m, &[], 50).0, ClassicalOutcome::Halted { step: 1, .. }));
        assert!(matches!(simulate_classical(&m, &odd, 50).0, ClassicalOutcome::Running));
    }

    #[test]
    fn hadamard_coin_interferes() {
        let m = hadamard_coin();
        let s0 = Superposition::unit(Configuration::initial(&m, &[]));
        let s1 = step(&m, &s0);
        assert_eq!(s1.support_len(), 2, "one step spreads over both coin states");
        let s2 = step(&m, &s1);
        assert_eq!(s2.support_len(), 1, "the second step cancels the d component");
        let (c, a) = s2.iter().next().unwrap();
        assert_eq!(m.state_name(c.state), "u");
        assert_eq!(a, &Amplitude::one());
        assert_eq!(c.head, 2);
    }

    #[test]
    fn myers_tv_is_exactly_half() {
        let m = myers_interference();
        let cmp = compare_protocols(&m, &[], 12, CAP).unwrap();
        assert_eq!(cmp.tv, RealValue::from_ratio(1, 2));
        let half = RealValue::from_ratio(1, 2);
        assert_eq!(cmp.monitored.get(&(2, "0:1#".into())), Some(&half));
        assert_eq!(cmp.monitored.get(&(2, "0:0#".into())), Some(&half));
        assert!(cmp.monitored_never.is_zero());
        assert_eq!(cmp.unmonitored.get("0:1#"), Some(&half));
        assert_eq!(cmp.unmonitored.get("0:0#"), None);
        assert_eq!(cmp.unmonitored_never, half);
    }

    #[test]
    fn split_halter_is_probabilistic() {
        let m = equal_split_halter();
        assert_eq!(
            classify(&m, &[], 20, CAP).unwrap(),
            Classification::Probabilistic { first_step: 2, first_p: "1/2".into() }
        );
    }

    #[test]
    fn random_reversible_tables_are_wellformed() {
        for seed in 0..20 {
            let m = random_reversible(seed, 4);
            let wf = check_wellformed(m.as_qtm());
            assert!(wf.is_ok(), "seed {seed}: {:?}", wf.violations);
        }
    }

    #[test]
    fn random_quantum_tables_conserve_norm() {
        for seed in 0..10 {
            let m = random_tape_preserving(seed, 4);
            let wf = check_wellformed(&m);
            assert!(wf.is_ok(), "seed {seed}: {:?}", wf.violations);
            let s = Superposition::unit(Configuration::initial(&m, &[]));
            let out = evolve(&m, &s, 25, CAP).unwrap();
            assert_eq!(out.norm_sq(), RealValue::one(), "seed {seed}");
        }
    }

    #[test]
    fn sabotage_breaks_the_advertised_condition() {
        use crate::checks::WellformedViolation as V;
        let base = random_reversible(99, 4).into_qtm();
        let a = check_wellformed(&sabotage(&base, Sabotage::ScaleAmplitude));
        assert!(a.violations.iter().any(|v| matches!(v, V::RowNotUnit { .. })));
        let b = check_wellformed(&sabotage(&base, Sabotage::CloneArrow));
        assert!(b.violations.iter().any(|v| matches!(v, V::RowsNotOrthogonal { .. })));
        let c = check_wellformed(&sabotage(&base, Sabotage::MixDirections));
        assert!(c.violations.iter().any(|v| matches!(v, V::SeparabilityFailure { .. })));
    }
}
