//! Machine model: alphabets, states, transition tables and the structural
//! rules they must satisfy before any dynamics run.
//!
//! A table maps every (state, scanned symbol) pair to a list of weighted
//! targets (amplitude, next state, written symbol, head move). Rows omitted
//! by hand-written machine files are filled by a deterministic completion
//! routine (see [`complete_rows`]) so files stay terse while tables stay
//! total.

use crate::amplitude::Amplitude;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// Index into the alphabet. Blank is always symbol 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u8);

/// Index into the state list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u16);

pub const BLANK: SymbolId = SymbolId(0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    L,
    R,
}

impl Direction {
    pub fn offset(self) -> i64 {
        match self {
            Direction::L => -1,
            Direction::R => 1,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::L => write!(f, "L"),
            Direction::R => write!(f, "R"),
        }
    }
}

/// Symbol names, blank first. The default machine alphabet is `B 0 1`;
/// compiled machines append the marker `#`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new(names: Vec<String>) -> Result<Self, MachineError> {
        if names.is_empty() {
            return Err(MachineError::EmptyAlphabet);
        }
        if names.len() > 250 {
            return Err(MachineError::TooManySymbols(names.len()));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(MachineError::DuplicateSymbol(n.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn default_bits() -> Self {
        Alphabet::new(vec!["B".into(), "0".into(), "1".into()]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, s: SymbolId) -> &str {
        &self.names[s.0 as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.names.iter().position(|n| n == name).map(|i| SymbolId(i as u8))
    }

    pub fn symbols(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.names.len()).map(|i| SymbolId(i as u8))
    }

    /// Symbols that may appear in the data region: blank plus `0`/`1`.
    /// Marker symbols such as `#` are working-region only.
    pub fn data_symbols(&self) -> Vec<SymbolId> {
        self.symbols()
            .filter(|&s| s == BLANK || self.name(s) == "0" || self.name(s) == "1")
            .collect()
    }
}

/// One weighted target of a transition row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub amp: Amplitude,
    pub state: StateId,
    pub write: SymbolId,
    pub dir: Direction,
}

impl Entry {
    pub fn class(amp: Amplitude, state: StateId, write: SymbolId, dir: Direction) -> Self {
        Entry { amp, state, write, dir }
    }

    /// The (target state, written symbol, direction) triple; two classical
    /// rows sharing an arrow can never be orthogonal.
    pub fn arrow(&self) -> (StateId, SymbolId, Direction) {
        (self.state, self.write, self.dir)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MachineKind {
    Qtm,
    Rtm,
}

/// A quantum Turing machine with a total transition table.
#[derive(Debug, Clone, PartialEq)]
pub struct Qtm {
    pub kind: MachineKind,
    pub alphabet: Alphabet,
    state_names: Vec<String>,
    pub initial: StateId,
    pub halting: BTreeSet<StateId>,
    pub start_head: i64,
    /// rows[state][symbol]
    rows: Vec<Vec<Vec<Entry>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MachineError {
    #[error("alphabet must not be empty")]
    EmptyAlphabet,
    #[error("alphabet has {0} symbols, limit is 250")]
    TooManySymbols(usize),
    #[error("duplicate symbol name {0:?}")]
    DuplicateSymbol(String),
    #[error("duplicate state name {0:?}")]
    DuplicateState(String),
    #[error("machine must declare at least one state")]
    NoStates,
    #[error("too many states: {0}")]
    TooManyStates(usize),
    #[error("initial state must not be in the halting set")]
    InitialHalts,
    #[error("rule references state index {0} out of range")]
    BadState(usize),
    #[error("rule references symbol index {0} out of range")]
    BadSymbol(usize),
    #[error("row ({state}, {symbol}) has a zero-amplitude target")]
    ZeroAmplitude { state: String, symbol: String },
    #[error("row ({state}, {symbol}) lists target ({target}, {write}, {dir}) twice")]
    DuplicateTarget { state: String, symbol: String, target: String, write: String, dir: Direction },
    #[error("cannot complete row ({state}, {symbol}): no free target respects direction consistency")]
    CompletionStuck { state: String, symbol: String },
    #[error("cannot complete around row ({state}, {symbol}): unpaired superposition rows with more than two targets must be completed by hand")]
    CompletionUnsupported { state: String, symbol: String },
}

impl Qtm {
    /// Assemble a machine from possibly-partial rows. Missing rows are
    /// filled deterministically, then the table is structurally validated.
    pub fn assemble(
        kind: MachineKind,
        alphabet: Alphabet,
        state_names: Vec<String>,
        initial: StateId,
        halting: BTreeSet<StateId>,
        start_head: i64,
        partial: Vec<Vec<Option<Vec<Entry>>>>,
    ) -> Result<Qtm, MachineError> {
        if state_names.is_empty() {
            return Err(MachineError::NoStates);
        }
        if state_names.len() > 60_000 {
            return Err(MachineError::TooManyStates(state_names.len()));
        }
        let mut seen = BTreeSet::new();
        for n in &state_names {
            if !seen.insert(n.clone()) {
                return Err(MachineError::DuplicateState(n.clone()));
            }
        }
        if halting.contains(&initial) {
            return Err(MachineError::InitialHalts);
        }
        if initial.0 as usize >= state_names.len() {
            return Err(MachineError::BadState(initial.0 as usize));
        }
        for h in &halting {
            if h.0 as usize >= state_names.len() {
                return Err(MachineError::BadState(h.0 as usize));
            }
        }
        let rows = complete_rows(&alphabet, &state_names, partial)?;
        let m = Qtm { kind, alphabet, state_names, initial, halting, start_head, rows };
        m.validate_structure()?;
        Ok(m)
    }

    fn validate_structure(&self) -> Result<(), MachineError> {
        for (si, per_sym) in self.rows.iter().enumerate() {
            for (yi, row) in per_sym.iter().enumerate() {
                let mut arrows = BTreeSet::new();
                for e in row {
                    if e.state.0 as usize >= self.state_names.len() {
                        return Err(MachineError::BadState(e.state.0 as usize));
                    }
                    if e.write.0 as usize >= self.alphabet.len() {
                        return Err(MachineError::BadSymbol(e.write.0 as usize));
                    }
                    if e.amp.is_zero() {
                        return Err(MachineError::ZeroAmplitude {
                            state: self.state_names[si].clone(),
                            symbol: self.alphabet.name(SymbolId(yi as u8)).into(),
                        });
                    }
                    if !arrows.insert(e.arrow()) {
                        return Err(MachineError::DuplicateTarget {
                            state: self.state_names[si].clone(),
                            symbol: self.alphabet.name(SymbolId(yi as u8)).into(),
                            target: self.state_names[e.state.0 as usize].clone(),
                            write: self.alphabet.name(e.write).into(),
                            dir: e.dir,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s.0 as usize]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn lookup_state(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name).map(|i| StateId(i as u16))
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.state_names.len()).map(|i| StateId(i as u16))
    }

    pub fn row(&self, state: StateId, symbol: SymbolId) -> &[Entry] {
        &self.rows[state.0 as usize][symbol.0 as usize]
    }

    pub fn is_halting(&self, state: StateId) -> bool {
        self.halting.contains(&state)
    }

    /// All (state, symbol) row labels in declaration order.
    pub fn row_labels(&self) -> impl Iterator<Item = (StateId, SymbolId)> + '_ {
        let syms = self.alphabet.len();
        (0..self.state_names.len()).flat_map(move |s| (0..syms).map(move |y| (StateId(s as u16), SymbolId(y as u8))))
    }

    /// The table as fully-specified partial rows, for rebuilding a
    /// deliberately altered copy through [`Qtm::assemble`].
    pub fn to_partial(&self) -> Vec<Vec<Option<Vec<Entry>>>> {
        self.rows
            .iter()
            .map(|per_sym| per_sym.iter().map(|r| Some(r.clone())).collect())
            .collect()
    }
}

/// Fill missing rows deterministically.
///
/// Classical fills pick, for each absent row in declaration order, the first
/// unused (target, written, direction) arrow that keeps every target state
/// entered from a single direction. A lone two-target superposition row
/// (such as a branch split) leaves a one-dimensional gap in its two-arrow
/// slice; the first absent row is then filled with the conjugate partner
/// beta* e1 - alpha* e2, without which no completion exists.
fn complete_rows(
    alphabet: &Alphabet,
    state_names: &[String],
    partial: Vec<Vec<Option<Vec<Entry>>>>,
) -> Result<Vec<Vec<Vec<Entry>>>, MachineError> {
    let n_states = state_names.len();
    let n_syms = alphabet.len();
    assert_eq!(partial.len(), n_states);

    let mut arrow_users: HashMap<(StateId, SymbolId, Direction), usize> = HashMap::new();
    let mut dir_of: Vec<Option<Direction>> = vec![None; n_states];
    for per_sym in &partial {
        assert_eq!(per_sym.len(), n_syms);
        for row in per_sym.iter().flatten() {
            for e in row {
                *arrow_users.entry(e.arrow()).or_insert(0) += 1;
                let d = &mut dir_of[e.state.0 as usize];
                if d.is_none() {
                    *d = Some(e.dir);
                }
                // conflicting directions surface later in the well-formedness
                // check; completion just avoids making things worse
            }
        }
    }

    let mut missing: Vec<(usize, usize)> = Vec::new();
    for s in 0..n_states {
        for y in 0..n_syms {
            if partial[s][y].is_none() {
                missing.push((s, y));
            }
        }
    }

    // partner fills for lone superposition rows
    let mut partners: Vec<Vec<Entry>> = Vec::new();
    for (s, per_sym) in partial.iter().enumerate() {
        for (y, row) in per_sym.iter().enumerate() {
            let Some(row) = row else { continue };
            if row.len() < 2 {
                continue;
            }
            let private = row.iter().all(|e| arrow_users[&e.arrow()] == 1);
            if !private {
                continue;
            }
            if row.len() > 2 {
                if !missing.is_empty() {
                    return Err(MachineError::CompletionUnsupported {
                        state: state_names[s].clone(),
                        symbol: alphabet.name(SymbolId(y as u8)).into(),
                    });
                }
                continue;
            }
            let (a, b) = (&row[0], &row[1]);
            partners.push(vec![
                Entry::class(b.amp.conj(), a.state, a.write, a.dir),
                Entry::class(-a.amp.conj(), b.state, b.write, b.dir),
            ]);
        }
    }

    let mut rows: Vec<Vec<Vec<Entry>>> = partial
        .into_iter()
        .map(|per_sym| per_sym.into_iter().map(|r| r.unwrap_or_default()).collect())
        .collect();

    let mut missing = missing.into_iter();
    for partner in partners {
        let Some((s, y)) = missing.next() else { break };
        for e in &partner {
            *arrow_users.entry(e.arrow()).or_insert(0) += 1;
        }
        rows[s][y] = partner;
    }

    for (s, y) in missing {
        let mut placed = false;
        'search: for q in 0..n_states {
            let dirs: &[Direction] = match dir_of[q] {
                Some(Direction::R) => &[Direction::R],
                Some(Direction::L) => &[Direction::L],
                None => &[Direction::R, Direction::L],
            };
            for &d in dirs {
                for t in 0..n_syms {
                    let arrow = (StateId(q as u16), SymbolId(t as u8), d);
                    if !arrow_users.contains_key(&arrow) {
                        arrow_users.insert(arrow, 1);
                        dir_of[q].get_or_insert(d);
                        rows[s][y] = vec![Entry::class(Amplitude::one(), arrow.0, arrow.1, arrow.2)];
                        placed = true;
                        break 'search;
                    }
                }
            }
        }
        if !placed {
            return Err(MachineError::CompletionStuck {
                state: state_names[s].clone(),
                symbol: alphabet.name(SymbolId(y as u8)).into(),
            });
        }
    }

    Ok(rows)
}

/// A machine whose table passed [`crate::checks::check_reversible`]:
/// classical amplitudes, one target per row, globally injective.
#[derive(Debug, Clone, PartialEq)]
pub struct Rtm(Qtm);

impl Rtm {
    /// Wrap a machine after verifying reversibility.
    pub fn try_new(m: Qtm) -> Result<Rtm, crate::checks::ReversibleReport> {
        let report = crate::checks::check_reversible(&m);
        if report.is_ok() {
            Ok(Rtm(m))
        } else {
            Err(report)
        }
    }

    pub fn as_qtm(&self) -> &Qtm {
        &self.0
    }

    pub fn into_qtm(self) -> Qtm {
        self.0
    }

    /// The unique target of a row.
    pub fn target(&self, state: StateId, symbol: SymbolId) -> &Entry {
        &self.0.row(state, symbol)[0]
    }
}

/// Outcome of a classical (single-configuration) run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassicalOutcome {
    /// Entered a halting state at `step`, with the head and tape at that step.
    Halted { step: u64, head: i64, tape: std::collections::BTreeMap<i64, SymbolId> },
    /// Still running after the budget.
    Running,
}

/// Deterministically run a reversible machine from its standard start
/// (input written on cells 0.., head at `start_head`). Also records whether
/// the head ever left the nonnegative region, which compiled two-branch
/// machines forbid of their sources.
pub fn simulate_classical(m: &Rtm, input: &[SymbolId], budget: u64) -> (ClassicalOutcome, bool) {
    let q = m.as_qtm();
    let mut tape: std::collections::BTreeMap<i64, SymbolId> = input
        .iter()
        .enumerate()
        .filter(|(_, &s)| s != BLANK)
        .map(|(i, &s)| (i as i64, s))
        .collect();
    let mut head = q.start_head;
    let mut state = q.initial;
    let mut went_negative = head < 0;
    for step in 1..=budget {
        let scanned = tape.get(&head).copied().unwrap_or(BLANK);
        let e = m.target(state, scanned);
        if e.write == BLANK {
            tape.remove(&head);
        } else {
            tape.insert(head, e.write);
        }
        head += e.dir.offset();
        state = e.state;
        if head < 0 {
            went_negative = true;
        }
        if q.is_halting(state) {
            return (ClassicalOutcome::Halted { step, head, tape }, went_negative);
        }
    }
    (ClassicalOutcome::Running, went_negative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::Amplitude;

    fn two_state_hop() -> Qtm {
        // q0 -> qf on every symbol, qf cycles back; a total bijection
        let alpha = Alphabet::default_bits();
        let names = vec!["q0".to_string(), "qf".to_string()];
        let mut partial = vec![vec![None, None, None], vec![None, None, None]];
        for y in 0..3 {
            partial[0][y] = Some(vec![Entry::class(Amplitude::one(), StateId(1), SymbolId(y as u8), Direction::R)]);
            partial[1][y] = Some(vec![Entry::class(Amplitude::one(), StateId(0), SymbolId(y as u8), Direction::R)]);
        }
        Qtm::assemble(
            MachineKind::Rtm,
            alpha,
            names,
            StateId(0),
            [StateId(1)].into(),
            0,
            partial,
        )
        .unwrap()
    }

    #[test]
    fn assemble_and_lookup() {
        let m = two_state_hop();
        assert_eq!(m.state_count(), 2);
        assert_eq!(m.lookup_state("qf"), Some(StateId(1)));
        assert_eq!(m.row(StateId(0), BLANK).len(), 1);
        assert!(m.is_halting(StateId(1)));
    }

    #[test]
    fn completion_fills_missing_rows_classically() {
        let alpha = Alphabet::default_bits();
        let names = vec!["a".to_string(), "b".to_string()];
        let mut partial = vec![vec![None, None, None], vec![None, None, None]];
        // only one explicit row; the rest must appear, all arrows distinct
        partial[0][0] = Some(vec![Entry::class(Amplitude::one(), StateId(1), BLANK, Direction::R)]);
        let m = Qtm::assemble(MachineKind::Qtm, alpha, names, StateId(0), BTreeSet::new(), 0, partial).unwrap();
        let mut arrows = BTreeSet::new();
        for (s, y) in m.row_labels().collect::<Vec<_>>() {
            let row = m.row(s, y);
            assert_eq!(row.len(), 1, "row ({s:?},{y:?}) should be classical");
            assert!(arrows.insert(row[0].arrow()), "arrow reused");
        }
        let wf = crate::checks::check_wellformed(&m);
        assert!(wf.is_ok(), "completed table should be well-formed: {:?}", wf.violations);
    }

    #[test]
    fn completion_pairs_lone_split_rows() {
        let alpha = Alphabet::default_bits();
        let names = vec!["a".into(), "b".into(), "c".into()];
        let h = Amplitude::inv_sqrt2();
        let mut partial = vec![vec![None, None, None], vec![None, None, None], vec![None, None, None]];
        partial[0][0] = Some(vec![
            Entry::class(h.clone(), StateId(1), BLANK, Direction::R),
            Entry::class(h.clone(), StateId(2), BLANK, Direction::R),
        ]);
        let m = Qtm::assemble(MachineKind::Qtm, alpha, names, StateId(0), BTreeSet::new(), 0, partial).unwrap();
        let wf = crate::checks::check_wellformed(&m);
        assert!(wf.is_ok(), "partnered completion should be well-formed: {:?}", wf.violations);
        // some completed row carries the partner 1/sqrt2, -1/sqrt2
        let partner = m
            .row_labels()
            .map(|(s, y)| m.row(s, y))
            .find(|r| r.len() == 2 && r[1].amp == -h.clone());
        assert!(partner.is_some(), "expected a conjugate partner row");
    }

    #[test]
    fn duplicate_targets_rejected() {
        let alpha = Alphabet::default_bits();
        let names = vec!["a".to_string()];
        let e = Entry::class(Amplitude::inv_sqrt2(), StateId(0), BLANK, Direction::R);
        let partial = vec![vec![Some(vec![e.clone(), e]), None, None]];
        let err = Qtm::assemble(MachineKind::Qtm, alpha, names, StateId(0), BTreeSet::new(), 0, partial).unwrap_err();
        assert!(matches!(err, MachineError::DuplicateTarget { .. }));
    }

    #[test]
    fn classical_run_halts() {
        let m = Rtm::try_new(two_state_hop()).unwrap();
        let (out, neg) = simulate_classical(&m, &[], 10);
        assert!(!neg);
        match out {
            ClassicalOutcome::Halted { step, head, .. } => {
                assert_eq!(step, 1);
                assert_eq!(head, 1);
            }
            _ => panic!("expected halt"),
        }
    }
}
