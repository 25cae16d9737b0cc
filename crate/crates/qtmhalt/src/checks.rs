//! Static table checks: well-formedness (unitarity of the induced evolution),
//! reversibility, and halting-set stationarity.
//!
//! All three are decided exactly over the amplitude field; no floating point
//! is involved. The well-formedness conditions follow the standard local
//! characterisation of unitarity for quantum Turing machine tables:
//!
//! (a) every row has unit norm;
//! (b) distinct rows are orthogonal;
//! (c) for every ordered pair of rows, the left-moving part of one is
//!     orthogonal to the right-moving part of the other after a one-cell
//!     shift, i.e. sum_q conj(d(p1,s1)[q,t1,L]) * d(p2,s2)[q,t2,R] = 0
//!     for every q-target collision of an L entry and an R entry.
//!
//! Condition (b) is evaluated sparsely: only row pairs that share a target
//! arrow can have a nonzero inner product. Condition (c) is evaluated per
//! target state by pairing its incoming L entries against its incoming R
//! entries.

use crate::amplitude::Amplitude;
use crate::machine::{Direction, Qtm, StateId, SymbolId};
use std::collections::HashMap;

/// A row label, printable with machine names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowId {
    pub state: StateId,
    pub symbol: SymbolId,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WellformedViolation {
    /// Row norm differs from 1; carries the exact squared norm, printed.
    RowNotUnit { row: RowId, norm_sq: String },
    /// Two distinct rows have nonzero inner product.
    RowsNotOrthogonal { a: RowId, b: RowId, inner: String },
    /// An L entry and an R entry into the same state fail separability.
    SeparabilityFailure {
        a: RowId,
        b: RowId,
        target: StateId,
        write_a: SymbolId,
        write_b: SymbolId,
        inner: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WellformedReport {
    pub violations: Vec<WellformedViolation>,
}

impl WellformedReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Decide well-formedness exactly.
pub fn check_wellformed(m: &Qtm) -> WellformedReport {
    let mut violations = Vec::new();

    // (a) unit rows
    for (s, y) in m.row_labels() {
        let row = m.row(s, y);
        let mut norm = crate::amplitude::RealValue::zero();
        for e in row {
            norm = norm + e.amp.norm_sq();
        }
        if norm != crate::amplitude::RealValue::one() {
            violations.push(WellformedViolation::RowNotUnit {
                row: RowId { state: s, symbol: y },
                norm_sq: crate::amplitude::Amplitude { re: norm, im: crate::amplitude::RealValue::zero() }.to_string(),
            });
        }
    }

    // (b) orthogonality, sparsely via shared arrows
    let mut by_arrow: HashMap<(StateId, SymbolId, Direction), Vec<(RowId, Amplitude)>> = HashMap::new();
    for (s, y) in m.row_labels() {
        for e in m.row(s, y) {
            by_arrow
                .entry(e.arrow())
                .or_default()
                .push((RowId { state: s, symbol: y }, e.amp.clone()));
        }
    }
    let mut inners: HashMap<(RowId, RowId), Amplitude> = HashMap::new();
    for users in by_arrow.values() {
        for i in 0..users.len() {
            for j in (i + 1)..users.len() {
                let (ra, aa) = &users[i];
                let (rb, ab) = &users[j];
                let (key, contrib) = if ra <= rb {
                    ((*ra, *rb), aa.conj() * ab.clone())
                } else {
                    ((*rb, *ra), ab.conj() * aa.clone())
                };
                let slot = inners.entry(key).or_insert_with(Amplitude::zero);
                *slot = slot.clone() + contrib;
            }
        }
    }
    let mut ortho: Vec<_> = inners
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|((a, b), v)| WellformedViolation::RowsNotOrthogonal { a, b, inner: v.to_string() })
        .collect();
    ortho.sort_by_key(|v| match v {
        WellformedViolation::RowsNotOrthogonal { a, b, .. } => (*a, *b),
        _ => unreachable!(),
    });
    violations.extend(ortho);

    // (c) separability, per target state
    let mut l_into: HashMap<StateId, Vec<(RowId, SymbolId, Amplitude)>> = HashMap::new();
    let mut r_into: HashMap<StateId, Vec<(RowId, SymbolId, Amplitude)>> = HashMap::new();
    for (s, y) in m.row_labels() {
        for e in m.row(s, y) {
            let bucket = match e.dir {
                Direction::L => &mut l_into,
                Direction::R => &mut r_into,
            };
            bucket
                .entry(e.state)
                .or_default()
                .push((RowId { state: s, symbol: y }, e.write, e.amp.clone()));
        }
    }
    let mut sep: HashMap<(RowId, SymbolId, RowId, SymbolId, StateId), Amplitude> = HashMap::new();
    for (q, ls) in &l_into {
        let Some(rs) = r_into.get(q) else { continue };
        for (ra, ta, aa) in ls {
            for (rb, tb, ab) in rs {
                let slot = sep.entry((*ra, *ta, *rb, *tb, *q)).or_insert_with(Amplitude::zero);
                *slot = slot.clone() + aa.conj() * ab.clone();
            }
        }
    }
    let mut sepv: Vec<_> = sep
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|((a, ta, b, tb, q), v)| WellformedViolation::SeparabilityFailure {
            a,
            b,
            target: q,
            write_a: ta,
            write_b: tb,
            inner: v.to_string(),
        })
        .collect();
    sepv.sort_by_key(|v| match v {
        WellformedViolation::SeparabilityFailure { a, b, target, write_a, write_b, .. } => {
            (*a, *b, *target, *write_a, *write_b)
        }
        _ => unreachable!(),
    });
    violations.extend(sepv);

    WellformedReport { violations }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReversibleViolation {
    /// A row holds a superposition.
    RowNotClassical { row: RowId, targets: usize },
    /// A row's single amplitude is not exactly 1.
    AmplitudeNotOne { row: RowId, amp: String },
    /// Two rows map to the same (state, written symbol) pair.
    NotInjective { a: RowId, b: RowId, target: StateId, write: SymbolId },
    /// A target state is entered from both directions.
    MixedDirections { target: StateId },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReversibleReport {
    pub violations: Vec<ReversibleViolation>,
}

impl ReversibleReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A classical table is reversible exactly when every row is a single
/// amplitude-1 target, the map (state, scanned) -> (target, written) is
/// injective, and each target state is entered from one direction only.
/// For such tables this coincides with well-formedness.
pub fn check_reversible(m: &Qtm) -> ReversibleReport {
    let mut violations = Vec::new();
    let mut image: HashMap<(StateId, SymbolId), RowId> = HashMap::new();
    let mut dir_of: HashMap<StateId, (Direction, bool)> = HashMap::new();
    for (s, y) in m.row_labels() {
        let row = m.row(s, y);
        let id = RowId { state: s, symbol: y };
        if row.len() != 1 {
            violations.push(ReversibleViolation::RowNotClassical { row: id, targets: row.len() });
            continue;
        }
        let e = &row[0];
        if e.amp != Amplitude::one() {
            violations.push(ReversibleViolation::AmplitudeNotOne { row: id, amp: e.amp.to_string() });
        }
        if let Some(prev) = image.insert((e.state, e.write), id) {
            violations.push(ReversibleViolation::NotInjective { a: prev, b: id, target: e.state, write: e.write });
        }
        match dir_of.get_mut(&e.state) {
            None => {
                dir_of.insert(e.state, (e.dir, false));
            }
            Some((d, reported)) => {
                if *d != e.dir && !*reported {
                    *reported = true;
                    violations.push(ReversibleViolation::MixedDirections { target: e.state });
                }
            }
        }
    }
    ReversibleReport { violations }
}

/// Which symbols a stationarity check may insist on preserving.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryMode {
    /// Every halting row must rewrite its scanned symbol unchanged.
    Strict,
    /// Only rows scanning data symbols (blank, 0, 1) must preserve them;
    /// marker symbols may change. A pass is reported as conservative.
    DataOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StationaryViolation {
    /// A halting row targets a non-halting state.
    LeavesHaltingSet { row: RowId, target: StateId },
    /// A halting row rewrites the scanned symbol.
    RewritesSymbol { row: RowId, scanned: SymbolId, written: SymbolId },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryReport {
    pub mode: StationaryMode,
    pub violations: Vec<StationaryViolation>,
    /// True when the verdict was reached under `DataOnly`, which inspects
    /// a weaker property than full static stationarity.
    pub conservative: bool,
}

impl StationaryReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Statically check that the halting set traps the state part of every
/// configuration and (per `mode`) preserves scanned symbols. This is a
/// sufficient syntactic condition for the halting flag to stay put once
/// raised; machines can satisfy the same operational property dynamically
/// without passing it.
pub fn check_stationary(m: &Qtm, mode: StationaryMode) -> StationaryReport {
    let mut violations = Vec::new();
    let data: Vec<SymbolId> = m.alphabet.data_symbols();
    for &h in &m.halting {
        for y in m.alphabet.symbols() {
            let must_preserve = match mode {
                StationaryMode::Strict => true,
                StationaryMode::DataOnly => data.contains(&y),
            };
            for e in m.row(h, y) {
                let row = RowId { state: h, symbol: y };
                if !m.is_halting(e.state) {
                    violations.push(StationaryViolation::LeavesHaltingSet { row, target: e.state });
                }
                if must_preserve && e.write != y {
                    violations.push(StationaryViolation::RewritesSymbol { row, scanned: y, written: e.write });
                }
            }
        }
    }
    StationaryReport { mode, violations, conservative: mode == StationaryMode::DataOnly }
}

/// Render a row label with machine names, e.g. `(q0, B)`.
pub fn describe_row(m: &Qtm, row: RowId) -> String {
    format!("({}, {})", m.state_name(row.state), m.alphabet.name(row.symbol))
}

pub fn describe_wellformed_violation(m: &Qtm, v: &WellformedViolation) -> String {
    match v {
        WellformedViolation::RowNotUnit { row, norm_sq } => {
            format!("row {} has squared norm {}", describe_row(m, *row), norm_sq)
        }
        WellformedViolation::RowsNotOrthogonal { a, b, inner } => {
            format!("rows {} and {} have inner product {}", describe_row(m, *a), describe_row(m, *b), inner)
        }
        WellformedViolation::SeparabilityFailure { a, b, target, write_a, write_b, inner } => format!(
            "separability fails into {} for rows {} (writes {}, L) and {} (writes {}, R): sum {}",
            m.state_name(*target),
            describe_row(m, *a),
            m.alphabet.name(*write_a),
            describe_row(m, *b),
            m.alphabet.name(*write_b),
            inner
        ),
    }
}

pub fn describe_reversible_violation(m: &Qtm, v: &ReversibleViolation) -> String {
    match v {
        ReversibleViolation::RowNotClassical { row, targets } => {
            format!("row {} has {} targets, expected exactly 1", describe_row(m, *row), targets)
        }
        ReversibleViolation::AmplitudeNotOne { row, amp } => {
            format!("row {} has amplitude {}, expected 1", describe_row(m, *row), amp)
        }
        ReversibleViolation::NotInjective { a, b, target, write } => format!(
            "rows {} and {} both map to ({}, {})",
            describe_row(m, *a),
            describe_row(m, *b),
            m.state_name(*target),
            m.alphabet.name(*write)
        ),
        ReversibleViolation::MixedDirections { target } => {
            format!("state {} is entered moving both left and right", m.state_name(*target))
        }
    }
}

pub fn describe_stationary_violation(m: &Qtm, v: &StationaryViolation) -> String {
    match v {
        StationaryViolation::LeavesHaltingSet { row, target } => {
            format!("halting row {} targets non-halting state {}", describe_row(m, *row), m.state_name(*target))
        }
        StationaryViolation::RewritesSymbol { row, scanned, written } => format!(
            "halting row {} rewrites {} as {}",
            describe_row(m, *row),
            m.alphabet.name(*scanned),
            m.alphabet.name(*written)
        ),
    }
}
