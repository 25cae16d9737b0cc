//! Configurations, superpositions and the exact one-step evolution.
//!
//! A configuration stores only the non-blank tape cells, so superpositions
//! stay sparse. Evolution applies each transition row linearly; amplitudes
//! that cancel to zero are dropped from the support immediately, which is
//! what makes destructive interference observable in the support size.

use crate::amplitude::{Amplitude, RealValue};
use crate::machine::{Qtm, StateId, SymbolId, BLANK};
use std::collections::BTreeMap;

/// One classical configuration: control state, head position, tape.
/// Only non-blank cells are stored; `tape.get(&i)` absent means blank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub head: i64,
    pub tape: BTreeMap<i64, SymbolId>,
}

impl Configuration {
    /// The standard start: input written on cells 0.., head at the
    /// machine's declared start cell, control in the initial state.
    pub fn initial(m: &Qtm, input: &[SymbolId]) -> Configuration {
        Configuration {
            state: m.initial,
            head: m.start_head,
            tape: input
                .iter()
                .enumerate()
                .filter(|(_, &s)| s != BLANK)
                .map(|(i, &s)| (i as i64, s))
                .collect(),
        }
    }

    pub fn scanned(&self) -> SymbolId {
        self.tape.get(&self.head).copied().unwrap_or(BLANK)
    }

    fn with_move(&self, write: SymbolId, dir: crate::machine::Direction, state: StateId) -> Configuration {
        let mut tape = self.tape.clone();
        if write == BLANK {
            tape.remove(&self.head);
        } else {
            tape.insert(self.head, write);
        }
        Configuration { state, head: self.head + dir.offset(), tape }
    }

    /// Render the written word as `offset:symbols`, or `-` for an all-blank
    /// tape. Interior blanks print as `B`.
    pub fn render_word(&self, m: &Qtm) -> String {
        render_tape_word(m, &self.tape)
    }
}

pub fn render_tape_word(m: &Qtm, tape: &BTreeMap<i64, SymbolId>) -> String {
    let (Some((&lo, _)), Some((&hi, _))) = (tape.iter().next(), tape.iter().next_back()) else {
        return "-".to_string();
    };
    let mut word = String::new();
    for i in lo..=hi {
        word.push_str(m.alphabet.name(tape.get(&i).copied().unwrap_or(BLANK)));
    }
    format!("{lo}:{word}")
}

/// A finitely supported vector over configurations. Zero amplitudes are
/// never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Superposition {
    terms: BTreeMap<Configuration, Amplitude>,
}

impl Superposition {
    pub fn new() -> Superposition {
        Superposition { terms: BTreeMap::new() }
    }

    pub fn unit(c: Configuration) -> Superposition {
        let mut s = Superposition::new();
        s.add(c, Amplitude::one());
        s
    }

    pub fn add(&mut self, c: Configuration, amp: Amplitude) {
        if amp.is_zero() {
            return;
        }
        match self.terms.entry(c) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(amp);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + amp;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Configuration, &Amplitude)> {
        self.terms.iter()
    }

    pub fn amplitude_of(&self, c: &Configuration) -> Amplitude {
        self.terms.get(c).cloned().unwrap_or_else(Amplitude::zero)
    }

    pub fn norm_sq(&self) -> RealValue {
        let mut n = RealValue::zero();
        for a in self.terms.values() {
            n = n + a.norm_sq();
        }
        n
    }

    pub fn scaled(&self, k: &Amplitude) -> Superposition {
        let mut out = Superposition::new();
        for (c, a) in &self.terms {
            out.add(c.clone(), a.clone() * k.clone());
        }
        out
    }

    pub fn plus(&self, other: &Superposition) -> Superposition {
        let mut out = self.clone();
        for (c, a) in &other.terms {
            out.add(c.clone(), a.clone());
        }
        out
    }

    pub fn inner(&self, other: &Superposition) -> Amplitude {
        // sparse: walk the smaller map
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        let mut acc = Amplitude::zero();
        for (c, a) in small {
            if let Some(b) = big.get(c) {
                let (sa, sb) = if std::ptr::eq(small, &self.terms) { (a, b) } else { (b, a) };
                acc = acc + sa.conj() * sb.clone();
            }
        }
        acc
    }

    /// Split into (halting part, running part) by the control state.
    pub fn split_halting(&self, m: &Qtm) -> (Superposition, Superposition) {
        let mut halted = Superposition::new();
        let mut running = Superposition::new();
        for (c, a) in &self.terms {
            if m.is_halting(c.state) {
                halted.add(c.clone(), a.clone());
            } else {
                running.add(c.clone(), a.clone());
            }
        }
        (halted, running)
    }

    /// Group probability mass by rendered data word.
    pub fn word_masses(&self, m: &Qtm) -> BTreeMap<String, RealValue> {
        let mut out: BTreeMap<String, RealValue> = BTreeMap::new();
        for (c, a) in &self.terms {
            let w = c.render_word(m);
            let p = a.norm_sq();
            match out.entry(w) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(p);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let v = e.get().clone() + p;
                    *e.get_mut() = v;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DynamicsError {
    #[error("superposition support {support} exceeds cap {cap} at step {step}")]
    SupportExceeded { support: usize, cap: usize, step: u64 },
}

/// Apply the table once, linearly.
pub fn step(m: &Qtm, s: &Superposition) -> Superposition {
    let mut out = Superposition::new();
    for (c, a) in s.iter() {
        for e in m.row(c.state, c.scanned()) {
            out.add(c.with_move(e.write, e.dir, e.state), a.clone() * e.amp.clone());
        }
    }
    out
}

/// Apply `steps` steps, enforcing a support cap after each one.
pub fn evolve(m: &Qtm, s: &Superposition, steps: u64, cap: usize) -> Result<Superposition, DynamicsError> {
    let mut cur = s.clone();
    for t in 1..=steps {
        cur = step(m, &cur);
        if cur.support_len() > cap {
            return Err(DynamicsError::SupportExceeded { support: cur.support_len(), cap, step: t });
        }
    }
    Ok(cur)
}

/// Parse an input word over the machine's alphabet, one name per character
/// for single-character names; whitespace separates multi-character names.
pub fn parse_input(m: &Qtm, text: &str) -> Result<Vec<SymbolId>, String> {
    if text.is_empty() || text == "-" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    if text.contains(char::is_whitespace) {
        for tok in text.split_whitespace() {
            out.push(m.alphabet.lookup(tok).ok_or_else(|| format!("unknown symbol {tok:?}"))?);
        }
    } else {
        for ch in text.chars() {
            let name = ch.to_string();
            out.push(m.alphabet.lookup(&name).ok_or_else(|| format!("unknown symbol {name:?}"))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Alphabet, Direction, Entry, MachineKind, Qtm};
    use std::collections::BTreeSet;

    /// One-state walker: moves right forever writing 1 over anything.
    fn walker() -> Qtm {
        let alpha = Alphabet::default_bits();
        let mut partial = vec![vec![None, None, None]];
        for y in 0..3u8 {
            partial[0][y as usize] =
                Some(vec![Entry::class(Amplitude::one(), StateId(0), SymbolId((y + 1) % 3), Direction::R)]);
        }
        Qtm::assemble(MachineKind::Rtm, alpha, vec!["w".into()], StateId(0), BTreeSet::new(), 0, partial).unwrap()
    }

    /// Split on first step, then both branches walk right.
    fn splitter() -> Qtm {
        let alpha = Alphabet::default_bits();
        let h = Amplitude::inv_sqrt2();
        let mut partial = vec![vec![None; 3], vec![None; 3], vec![None; 3]];
        partial[0][0] = Some(vec![
            Entry::class(h.clone(), StateId(1), SymbolId(1), Direction::R),
            Entry::class(h.clone(), StateId(2), SymbolId(2), Direction::R),
        ]);
        for s in 1..3 {
            for y in 0..3 {
                partial[s][y] =
                    Some(vec![Entry::class(Amplitude::one(), StateId(s as u16), SymbolId(y as u8), Direction::R)]);
            }
        }
        Qtm::assemble(MachineKind::Qtm, alpha, vec!["s".into(), "a".into(), "b".into()], StateId(0), BTreeSet::new(), 0, partial)
            .unwrap()
    }

    #[test]
    fn step_moves_and_writes() {
        let m = walker();
        let c0 = Configuration::initial(&m, &[]);
        let s1 = step(&m, &Superposition::unit(c0));
        assert_eq!(s1.support_len(), 1);
        let (c, a) = s1.iter().next().unwrap();
        assert_eq!(a, &Amplitude::one());
        assert_eq!(c.head, 1);
        assert_eq!(c.tape.get(&0), Some(&SymbolId(1)));
    }

    #[test]
    fn norm_is_conserved_exactly() {
        let m = splitter();
        let mut s = Superposition::unit(Configuration::initial(&m, &[]));
        for _ in 0..20 {
            s = step(&m, &s);
            assert_eq!(s.norm_sq(), RealValue::one());
        }
        assert_eq!(s.support_len(), 2);
    }

    #[test]
    fn destructive_interference_shrinks_support() {
        // two copies of the same configuration with opposite amplitudes
        let m = walker();
        let c = Configuration::initial(&m, &[]);
        let mut s = Superposition::new();
        s.add(c.clone(), Amplitude::inv_sqrt2());
        s.add(c, -Amplitude::inv_sqrt2());
        assert!(s.is_zero());
    }

    #[test]
    fn support_cap_enforced() {
        let m = splitter();
        let s = Superposition::unit(Configuration::initial(&m, &[]));
        let err = evolve(&m, &s, 5, 1).unwrap_err();
        assert!(matches!(err, DynamicsError::SupportExceeded { cap: 1, .. }));
    }

    #[test]
    fn words_render_with_offsets() {
        let m = walker();
        let mut tape = BTreeMap::new();
        assert_eq!(render_tape_word(&m, &tape), "-");
        tape.insert(-1, SymbolId(1));
        tape.insert(2, SymbolId(2));
        assert_eq!(render_tape_word(&m, &tape), "-1:0BB1");
    }

    #[test]
    fn linearity_of_step() {
        let m = splitter();
        let c0 = Configuration::initial(&m, &[]);
        let mut c1 = c0.clone();
        c1.tape.insert(0, SymbolId(1));
        let a = Amplitude::from_ratio(3, 5);
        let b = Amplitude::from_ratio(4, 5) * Amplitude::i();
        let mut s = Superposition::new();
        s.add(c0.clone(), a.clone());
        s.add(c1.clone(), b.clone());
        let lhs = step(&m, &s);
        let rhs = step(&m, &Superposition::unit(c0)).scaled(&a).plus(&step(&m, &Superposition::unit(c1)).scaled(&b));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn input_parsing() {
        let m = walker();
        assert_eq!(parse_input(&m, "-").unwrap(), vec![]);
        assert_eq!(parse_input(&m, "01").unwrap(), vec![SymbolId(1), SymbolId(2)]);
        assert_eq!(parse_input(&m, "0 1 B").unwrap(), vec![SymbolId(1), SymbolId(2), SymbolId(0)]);
        assert!(parse_input(&m, "2").is_err());
    }
}
