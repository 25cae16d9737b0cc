//! Dense reference operator over a finite tape window.
//!
//! Restricting configurations to heads and nonblank cells inside a window
//! `[lo, hi]` leaves a finite basis: state times head position times one
//! symbol per window cell. The one-step evolution restricted to that basis
//! is an explicit matrix, built column by column straight from the rule
//! table. Columns whose image would step outside the window are marked
//! escaping and excluded; on the remaining interior columns the matrix of
//! a well-formed machine is an exact isometry, and every wellformedness
//! violation shows up as a nonzero Gram defect once the window is wide
//! enough for two-cell head offsets (width 5 suffices).
//!
//! Everything here is exact; the dense operator is a cross-check for the
//! sparse evolution, not an approximation of it.

use std::collections::BTreeMap;
use std::fmt;

use crate::amplitude::{Amplitude, RealValue};
use crate::dynamics::{Configuration, Superposition};
use crate::machine::{Qtm, StateId, SymbolId};

/// Default ceiling on the dense basis size.
pub const DEFAULT_DIM_CAP: usize = 200_000;

/// Closed cell interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Window {
        assert!(lo <= hi, "window must be nonempty");
        Window { lo, hi }
    }

    pub fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn contains(&self, cell: i64) -> bool {
        self.lo <= cell && cell <= self.hi
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The windowed basis would exceed the configured cap. The recorded
    /// dimension saturates at `u128::MAX` for very wide windows.
    DimExceedsCap { dim: u128, cap: usize },
    /// Evolution hit an escaping column: some amplitude would have left
    /// the window during the given step.
    Escaped { step: u64 },
    /// A configuration has its head or a nonblank cell at `position`,
    /// outside the window, so it has no basis index.
    OutsideWindow { position: i64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::DimExceedsCap { dim, cap } => {
                if *dim == u128::MAX {
                    write!(f, "dense basis overflows any cap (cap {cap})")
                } else {
                    write!(f, "dense basis has dimension {dim}, above the cap {cap}")
                }
            }
            OracleError::Escaped { step } => {
                write!(f, "amplitude escaped the window during step {step}")
            }
            OracleError::OutsideWindow { position } => {
                write!(f, "configuration touches cell {position} outside the window")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// One-step evolution matrix on the windowed basis, stored by columns.
pub struct DenseOperator {
    window: Window,
    n_syms: usize,
    combos: usize,
    dim: usize,
    halting: Vec<bool>,
    /// `columns[i]`: image of basis vector `i` as sorted `(row, amp)`
    /// pairs, or `None` when part of the image leaves the window.
    columns: Vec<Option<Vec<(usize, Amplitude)>>>,
}

/// Build the dense operator of `m` on `window`, refusing basis sizes
/// above `cap`.
pub fn build(m: &Qtm, window: Window, cap: usize) -> Result<DenseOperator, OracleError> {
    let w = window.width();
    let n_states = m.states().count();
    let n_syms = m.alphabet.len();

    let mut combos_u: u128 = 1;
    for _ in 0..w {
        combos_u = combos_u.saturating_mul(n_syms as u128);
    }
    let dim_u = (n_states as u128).saturating_mul(w as u128).saturating_mul(combos_u);
    if dim_u > cap as u128 {
        return Err(OracleError::DimExceedsCap { dim: dim_u, cap });
    }
    let combos = combos_u as usize;
    let dim = dim_u as usize;

    // places[k] = weight of cell lo + k; cell lo is most significant.
    let mut places = vec![1usize; w];
    for k in (0..w.saturating_sub(1)).rev() {
        places[k] = places[k + 1] * n_syms;
    }

    let mut columns = Vec::with_capacity(dim);
    for state in 0..n_states {
        for off in 0..w {
            let head = window.lo + off as i64;
            for code in 0..combos {
                let scanned = (code / places[off]) % n_syms;
                let row = m.row(StateId(state as u16), SymbolId(scanned as u8));
                let mut col = Some(Vec::with_capacity(row.len()));
                for e in row {
                    let nh = head + e.dir.offset();
                    if !window.contains(nh) {
                        col = None;
                        break;
                    }
                    let ncode = code + (e.write.0 as usize) * places[off] - scanned * places[off];
                    let noff = (nh - window.lo) as usize;
                    let idx = (e.state.0 as usize * w + noff) * combos + ncode;
                    col.as_mut().unwrap().push((idx, e.amp.clone()));
                }
                if let Some(c) = col.as_mut() {
                    // distinct (state, write, dir) targets give distinct rows
                    c.sort_by_key(|(i, _)| *i);
                }
                columns.push(col);
            }
        }
    }

    let halting = m.states().map(|s| m.is_halting(s)).collect();
    Ok(DenseOperator { window, n_syms, combos, dim, halting, columns })
}

impl DenseOperator {
    pub fn window(&self) -> Window {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis vectors whose full image stays inside the window.
    pub fn interior_count(&self) -> usize {
        self.columns.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_interior(&self, idx: usize) -> bool {
        self.columns[idx].is_some()
    }

    fn places(&self, off: usize) -> usize {
        let w = self.window.width();
        self.n_syms.pow((w - 1 - off) as u32)
    }

    /// Basis index of a configuration, if it fits the window.
    pub fn index_of(&self, c: &Configuration) -> Result<usize, OracleError> {
        if !self.window.contains(c.head) {
            return Err(OracleError::OutsideWindow { position: c.head });
        }
        let mut code = 0usize;
        for (cell, sym) in c.tape.iter() {
            if !self.window.contains(*cell) {
                return Err(OracleError::OutsideWindow { position: *cell });
            }
            let off = (*cell - self.window.lo) as usize;
            code += sym.0 as usize * self.places(off);
        }
        let w = self.window.width();
        let off = (c.head - self.window.lo) as usize;
        Ok((c.state.0 as usize * w + off) * self.combos + code)
    }

    /// Configuration behind a basis index.
    pub fn config_of(&self, idx: usize) -> Configuration {
        assert!(idx < self.dim);
        let w = self.window.width();
        let mut code = idx % self.combos;
        let rest = idx / self.combos;
        let off = rest % w;
        let state = rest / w;
        let mut tape = BTreeMap::new();
        for k in 0..w {
            let place = self.places(k);
            let sym = SymbolId((code / place) as u8);
            code %= place;
            if sym != crate::machine::BLANK {
                tape.insert(self.window.lo + k as i64, sym);
            }
        }
        Configuration { state: StateId(state as u16), head: self.window.lo + off as i64, tape }
    }

    pub fn state_of(&self, idx: usize) -> StateId {
        StateId((idx / (self.window.width() * self.combos)) as u16)
    }

    /// Indexed amplitude vector of a sparse superposition.
    pub fn embed(&self, s: &Superposition) -> Result<BTreeMap<usize, Amplitude>, OracleError> {
        let mut v = BTreeMap::new();
        for (c, a) in s.iter() {
            v.insert(self.index_of(c)?, a.clone());
        }
        Ok(v)
    }

    /// Sparse superposition behind an indexed vector.
    pub fn extract(&self, v: &BTreeMap<usize, Amplitude>) -> Superposition {
        let mut s = Superposition::new();
        for (i, a) in v {
            s.add(self.config_of(*i), a.clone());
        }
        s
    }

    /// Apply the matrix `steps` times, failing on the first escaping
    /// column that carries amplitude.
    pub fn evolve(
        &self,
        v: &BTreeMap<usize, Amplitude>,
        steps: u64,
    ) -> Result<BTreeMap<usize, Amplitude>, OracleError> {
        let mut cur = v.clone();
        for t in 1..=steps {
            let mut next: BTreeMap<usize, Amplitude> = BTreeMap::new();
            for (i, a) in &cur {
                let col = self.columns[*i].as_ref().ok_or(OracleError::Escaped { step: t })?;
                for (j, b) in col {
                    let add = a.clone() * b.clone();
                    match next.entry(*j) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(add);
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            *e.get_mut() = e.get().clone() + add;
                        }
                    }
                }
            }
            next.retain(|_, a| !a.is_zero());
            cur = next;
        }
        Ok(cur)
    }

    pub fn norm_sq(&self, v: &BTreeMap<usize, Amplitude>) -> RealValue {
        v.values().fold(RealValue::zero(), |acc, a| acc + a.norm_sq())
    }

    /// Squared mass sitting on halting states.
    pub fn halted_mass(&self, v: &BTreeMap<usize, Amplitude>) -> RealValue {
        v.iter()
            .filter(|(i, _)| self.halting[self.state_of(**i).0 as usize])
            .fold(RealValue::zero(), |acc, (_, a)| acc + a.norm_sq())
    }

    /// Gram defects of the interior columns: entries `(i, j, value)` with
    /// `i <= j` where `<col_i, col_j>` differs from the identity, sorted.
    /// Empty exactly when the interior restriction is an isometry.
    pub fn gram_defects(&self) -> Vec<(usize, usize, Amplitude)> {
        let mut by_row: BTreeMap<usize, Vec<(usize, &Amplitude)>> = BTreeMap::new();
        for (i, col) in self.columns.iter().enumerate() {
            if let Some(col) = col {
                for (j, a) in col {
                    by_row.entry(*j).or_default().push((i, a));
                }
            }
        }
        let mut acc: BTreeMap<(usize, usize), Amplitude> = BTreeMap::new();
        for users in by_row.values() {
            for x in 0..users.len() {
                for y in x..users.len() {
                    let (i, a) = users[x];
                    let (j, b) = users[y];
                    let term = a.conj() * b.clone();
                    match acc.entry((i, j)) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(term);
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            *e.get_mut() = e.get().clone() + term;
                        }
                    }
                }
            }
        }
        for (i, col) in self.columns.iter().enumerate() {
            if col.is_some() {
                let one = Amplitude::one();
                match acc.entry((i, i)) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-one);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() = e.get().clone() - one;
                    }
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((i, j), v)| (i, j, v)).collect()
    }
}
