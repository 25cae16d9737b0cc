//! Text format for machine tables.
//!
//! ```text
//! # full-line comments only
//! qtm                      (or rtm)
//! alphabet: B 0 1 #
//! states: start q0.1 fin.B
//! initial: start
//! halting: fin.B
//! start-head: -1           (optional, default 0)
//!
//! q0.1, 0 -> 1, q0.1, 1, R
//! start, B -> 1/sqrt2, q0.1, #, R ; 1/sqrt2, q0.2, #, R
//! ```
//!
//! Rows may be omitted; the loader completes them deterministically (see
//! [`crate::machine`]). The emitter always writes every row, so emitted
//! files parse back to the identical table.

use crate::amplitude;
use crate::machine::{Alphabet, Direction, Entry, MachineKind, Qtm, StateId, SymbolId};
use std::collections::BTreeSet;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: expected machine kind `qtm` or `rtm`, found {found:?}")]
    BadKind { line: usize, found: String },
    #[error("line {line}: expected directive {expected}")]
    MissingDirective { line: usize, expected: &'static str },
    #[error("line {line}: unknown symbol {name:?}")]
    UnknownSymbol { line: usize, name: String },
    #[error("line {line}: unknown state {name:?}")]
    UnknownState { line: usize, name: String },
    #[error("line {line}: bad integer {text:?}")]
    BadInt { line: usize, text: String },
    #[error("line {line}: malformed rule, expected `state, symbol -> amp, state, symbol, dir [; ...]`")]
    BadRule { line: usize },
    #[error("line {line}: bad amplitude at column {col}: {msg}")]
    BadAmplitude { line: usize, col: usize, msg: String },
    #[error("line {line}: duplicate rule for ({state}, {symbol})")]
    DuplicateRule { line: usize, state: String, symbol: String },
    #[error("line {line}: bad direction {text:?}, expected L or R")]
    BadDirection { line: usize, text: String },
    #[error("machine is structurally invalid: {0}")]
    Machine(#[from] crate::machine::MachineError),
    #[error("file ended before any rules or directives")]
    Empty,
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    peeked: Option<(usize, &'a str)>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { iter: text.lines().enumerate(), peeked: None }
    }

    /// Next significant line as (1-based number, trimmed text).
    fn next_sig(&mut self) -> Option<(usize, &'a str)> {
        if let Some(p) = self.peeked.take() {
            return Some(p);
        }
        for (i, raw) in self.iter.by_ref() {
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Some((i + 1, t));
        }
        None
    }

    fn put_back(&mut self, item: (usize, &'a str)) {
        self.peeked = Some(item);
    }
}

fn directive<'a>(lines: &mut Lines<'a>, key: &'static str) -> Result<(usize, &'a str), FormatError> {
    let (n, t) = lines.next_sig().ok_or(FormatError::MissingDirective { line: 0, expected: key })?;
    match t.strip_prefix(key).and_then(|r| r.strip_prefix(':')) {
        Some(rest) => Ok((n, rest.trim())),
        None => Err(FormatError::MissingDirective { line: n, expected: key }),
    }
}

pub fn parse_machine(text: &str) -> Result<Qtm, FormatError> {
    let mut lines = Lines::new(text);

    let (kline, ktext) = lines.next_sig().ok_or(FormatError::Empty)?;
    let kind = match ktext {
        "qtm" => MachineKind::Qtm,
        "rtm" => MachineKind::Rtm,
        other => return Err(FormatError::BadKind { line: kline, found: other.to_string() }),
    };

    let (_, alpha_text) = directive(&mut lines, "alphabet")?;
    let alphabet = Alphabet::new(alpha_text.split_whitespace().map(String::from).collect())
        .map_err(FormatError::Machine)?;

    let (_, states_text) = directive(&mut lines, "states")?;
    let state_names: Vec<String> = states_text.split_whitespace().map(String::from).collect();
    let lookup_state = |line: usize, name: &str| -> Result<StateId, FormatError> {
        state_names
            .iter()
            .position(|n| n == name)
            .map(|i| StateId(i as u16))
            .ok_or_else(|| FormatError::UnknownState { line, name: name.to_string() })
    };
    let lookup_symbol = |line: usize, name: &str| -> Result<SymbolId, FormatError> {
        alphabet
            .lookup(name)
            .ok_or_else(|| FormatError::UnknownSymbol { line, name: name.to_string() })
    };

    let (iline, initial_text) = directive(&mut lines, "initial")?;
    let initial = lookup_state(iline, initial_text)?;

    let (hline, halting_text) = directive(&mut lines, "halting")?;
    let mut halting = BTreeSet::new();
    for name in halting_text.split_whitespace() {
        halting.insert(lookup_state(hline, name)?);
    }

    let mut start_head = 0i64;
    if let Some((n, t)) = lines.next_sig() {
        if let Some(rest) = t.strip_prefix("start-head").and_then(|r| r.strip_prefix(':')) {
            let rest = rest.trim();
            start_head = rest.parse().map_err(|_| FormatError::BadInt { line: n, text: rest.to_string() })?;
        } else {
            lines.put_back((n, t));
        }
    }

    let mut partial: Vec<Vec<Option<Vec<Entry>>>> = vec![vec![None; alphabet.len()]; state_names.len()];
    while let Some((n, t)) = lines.next_sig() {
        let (lhs, rhs) = t.split_once("->").ok_or(FormatError::BadRule { line: n })?;
        let mut lhs_parts = lhs.split(',').map(str::trim);
        let (Some(sname), Some(yname), None) = (lhs_parts.next(), lhs_parts.next(), lhs_parts.next()) else {
            return Err(FormatError::BadRule { line: n });
        };
        let state = lookup_state(n, sname)?;
        let symbol = lookup_symbol(n, yname)?;
        let mut row = Vec::new();
        for entry_text in rhs.split(';') {
            let mut parts = entry_text.split(',').map(str::trim);
            let (Some(amp_text), Some(tname), Some(wname), Some(dtext), None) =
                (parts.next(), parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(FormatError::BadRule { line: n });
            };
            let amp = amplitude::parse(amp_text)
                .map_err(|e| FormatError::BadAmplitude { line: n, col: e.pos, msg: e.msg })?;
            let target = lookup_state(n, tname)?;
            let write = lookup_symbol(n, wname)?;
            let dir = match dtext {
                "L" => Direction::L,
                "R" => Direction::R,
                other => return Err(FormatError::BadDirection { line: n, text: other.to_string() }),
            };
            row.push(Entry { amp, state: target, write, dir });
        }
        let slot = &mut partial[state.0 as usize][symbol.0 as usize];
        if slot.is_some() {
            return Err(FormatError::DuplicateRule {
                line: n,
                state: sname.to_string(),
                symbol: yname.to_string(),
            });
        }
        *slot = Some(row);
    }

    Qtm::assemble(kind, alphabet, state_names, initial, halting, start_head, partial).map_err(FormatError::Machine)
}

/// Emit the full table. `header_comments` are written first, one `#` line
/// each; pass machine provenance notes through here.
pub fn emit_machine(m: &Qtm, header_comments: &[String]) -> String {
    let mut out = String::new();
    for c in header_comments {
        writeln!(out, "# {c}").unwrap();
    }
    writeln!(
        out,
        "{}",
        match m.kind {
            MachineKind::Qtm => "qtm",
            MachineKind::Rtm => "rtm",
        }
    )
    .unwrap();
    let alpha_names: Vec<&str> = m.alphabet.symbols().map(|s| m.alphabet.name(s)).collect();
    writeln!(out, "alphabet: {}", alpha_names.join(" ")).unwrap();
    writeln!(out, "states: {}", m.state_names().join(" ")).unwrap();
    writeln!(out, "initial: {}", m.state_name(m.initial)).unwrap();
    let halting: Vec<&str> = m.halting.iter().map(|&h| m.state_name(h)).collect();
    writeln!(out, "halting: {}", halting.join(" ")).unwrap();
    if m.start_head != 0 {
        writeln!(out, "start-head: {}", m.start_head).unwrap();
    }
    writeln!(out).unwrap();
    for (s, y) in m.row_labels().collect::<Vec<_>>() {
        let row = m.row(s, y);
        let entries: Vec<String> = row
            .iter()
            .map(|e| format!("{}, {}, {}, {}", e.amp, m.state_name(e.state), m.alphabet.name(e.write), e.dir))
            .collect();
        writeln!(out, "{}, {} -> {}", m.state_name(s), m.alphabet.name(y), entries.join(" ; ")).unwrap();
    }
    out
}

/// Errors from enforcing the declared kind on load.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KindError {
    #[error("declared qtm is not well-formed: {0}")]
    NotWellformed(String),
    #[error("declared rtm is not reversible: {0}")]
    NotReversible(String),
}

/// A `qtm` header promises a well-formed table, an `rtm` header a
/// reversible one. Called on load unless checks are deferred.
pub fn enforce_kind(m: &Qtm) -> Result<(), KindError> {
    match m.kind {
        MachineKind::Qtm => {
            let r = crate::checks::check_wellformed(m);
            if let Some(v) = r.violations.first() {
                return Err(KindError::NotWellformed(crate::checks::describe_wellformed_violation(m, v)));
            }
        }
        MachineKind::Rtm => {
            let r = crate::checks::check_reversible(m);
            if let Some(v) = r.violations.first() {
                return Err(KindError::NotReversible(crate::checks::describe_reversible_violation(m, v)));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::BLANK;

    const SPLIT_FILE: &str = "\
# a split then two blank-walkers
qtm
alphabet: B 0 1
states: s a b
initial: s
halting:
start-head: -1

s, B -> 1/sqrt2, a, 1, R ; 1/sqrt2, b, 0, R
a, B -> 1, a, B, R
b, B -> 1, b, B, R
";

    #[test]
    fn parse_directives_and_rules() {
        let m = parse_machine(SPLIT_FILE).unwrap();
        assert_eq!(m.kind, MachineKind::Qtm);
        assert_eq!(m.start_head, -1);
        assert_eq!(m.state_count(), 3);
        assert!(m.halting.is_empty());
        let row = m.row(StateId(0), BLANK);
        assert_eq!(row.len(), 2);
        assert_eq!(row[0].amp, crate::amplitude::Amplitude::inv_sqrt2());
        // the first omitted row picked up the conjugate partner of the split
        let partner = m.row(StateId(0), SymbolId(1));
        assert_eq!(partner.len(), 2);
        assert_eq!(partner[1].amp, -crate::amplitude::Amplitude::inv_sqrt2());
        // later omissions completed classically
        assert_eq!(m.row(StateId(1), SymbolId(1)).len(), 1);
    }

    #[test]
    fn emit_parse_round_trip() {
        let m = parse_machine(SPLIT_FILE).unwrap();
        let text = emit_machine(&m, &["provenance note".into()]);
        assert!(text.starts_with("# provenance note\nqtm\n"));
        let m2 = parse_machine(&text).unwrap();
        assert_eq!(m, m2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad_kind = parse_machine("utm\nalphabet: B\n");
        assert_eq!(bad_kind, Err(FormatError::BadKind { line: 1, found: "utm".into() }));

        let bad_amp = SPLIT_FILE.replace("1/sqrt2, a", "1/sqrt3, a");
        match parse_machine(&bad_amp) {
            Err(FormatError::BadAmplitude { line: 9, .. }) => {}
            other => panic!("expected amplitude error on line 9, got {other:?}"),
        }

        let unknown = SPLIT_FILE.replace("s, B ->", "zz, B ->");
        match parse_machine(&unknown) {
            Err(FormatError::UnknownState { line: 9, name }) => assert_eq!(name, "zz"),
            other => panic!("expected unknown state, got {other:?}"),
        }

        let dup = format!("{SPLIT_FILE}a, B -> 1, a, B, R\n");
        assert!(matches!(parse_machine(&dup), Err(FormatError::DuplicateRule { .. })));
    }

    #[test]
    fn kind_enforcement() {
        let m = parse_machine(SPLIT_FILE).unwrap();
        assert_eq!(enforce_kind(&m), Ok(()));
        let as_rtm = SPLIT_FILE.replace("qtm", "rtm");
        let m2 = parse_machine(&as_rtm).unwrap();
        assert!(matches!(enforce_kind(&m2), Err(KindError::NotReversible(_))));
    }

    #[test]
    fn default_start_head_is_zero() {
        let text = SPLIT_FILE.replace("start-head: -1\n", "");
        let m = parse_machine(&text).unwrap();
        assert_eq!(m.start_head, 0);
    }
}
