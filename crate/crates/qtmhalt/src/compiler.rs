//! The two-branch construction: compile a pair of reversible machines into
//! one quantum machine that runs both in superposition with amplitude
//! 1/sqrt2 each and signals each branch's halt through a shared family of
//! halting states.
//!
//! Layout of the compiled machine, per branch j over source alphabet
//! B 0 1 (the compiled alphabet adds the marker #):
//!
//! - the start state sits at cell -1, writes # there and splits right into
//!   the two embedded initial states;
//! - source states are embedded verbatim as `mj.<name>`, except the
//!   halting state, whose out-rows are replaced: on scanned symbol s it
//!   writes # over s (remembering s in the rewinder state) and moves left;
//! - rewinders `r.<s>.<j>` sweep left over data symbols unchanged until
//!   they hit the # the start state left at cell -1, overwrite it with the
//!   branch tag (0 for branch 1, 1 for branch 2) and enter `fin.<s>`;
//! - finals walk left over blanks forever, so a halted branch never
//!   re-enters the data region and never interferes with the other branch.
//!
//! A branch whose source halts after t steps with head at h >= 0 reaches a
//! final state at compiled step t + h + 3: one split step, t embedded
//! steps, one halt-entry step, h sweep steps, one tag step.
//!
//! Sources must start at cell 0 and keep their head nonnegative on the
//! inputs of interest; the compiled equivalence is meaningless otherwise
//! because the branch would scan the # at cell -1 where its source saw a
//! blank. Head nonnegativity is a run property; [`crate::machine::simulate_classical`]
//! reports it per run.

use crate::amplitude::Amplitude;
use crate::machine::{
    Alphabet, Direction, Entry, MachineKind, MachineError, Qtm, Rtm, StateId, SymbolId, BLANK,
};
use std::collections::BTreeSet;

/// What each compiled state is for. Indexed by compiled `StateId`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateRole {
    /// The splitting state at cell -1.
    Start,
    /// Embedded copy of a source state.
    Source { branch: u8, name: String },
    /// Leftward sweeper remembering the symbol scanned at the halt cell.
    Rewind { branch: u8, scanned: String },
    /// Shared halting family, one per remembered symbol.
    Final { scanned: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Compiled {
    pub machine: Qtm,
    pub roles: Vec<StateRole>,
}

impl Compiled {
    /// Human-readable provenance, one line per state, suitable for file
    /// header comments.
    pub fn provenance(&self) -> Vec<String> {
        let mut out = vec!["two-branch compilation".to_string()];
        for (i, role) in self.roles.iter().enumerate() {
            let name = self.machine.state_name(StateId(i as u16));
            let desc = match role {
                StateRole::Start => "start/split".to_string(),
                StateRole::Source { branch, name } => format!("branch {branch} source state {name}"),
                StateRole::Rewind { branch, scanned } => {
                    format!("branch {branch} rewinder, halt cell held {scanned}")
                }
                StateRole::Final { scanned } => format!("halting family, halt cell held {scanned}"),
            };
            out.push(format!("state {name}: {desc}"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompileError {
    #[error("branch {branch} source must use alphabet B 0 1")]
    SourceAlphabet { branch: u8 },
    #[error("branch {branch} source must start at cell 0, not {head}")]
    SourceStartHead { branch: u8, head: i64 },
    #[error("branch {branch} source must declare exactly one halting state, found {count}")]
    SourceHaltingCount { branch: u8, count: usize },
    #[error("branch {branch} source enters its initial state moving left (row ({from}, {scanned})); the split enters it moving right, which no well-formed table can mix")]
    InitialEnteredLeftward { branch: u8, from: String, scanned: String },
    #[error("compiled table could not be assembled: {0}")]
    Assemble(#[from] MachineError),
}

const DATA_SYMS: [&str; 3] = ["B", "0", "1"];

/// Compiled halt step for a source that halts after `steps` steps with the
/// head at `head`. `None` when the head ended negative, which violates the
/// source contract.
pub fn compiled_halt_time(steps: u64, head: i64) -> Option<u64> {
    if head < 0 {
        None
    } else {
        Some(steps + head as u64 + 3)
    }
}

fn check_source(branch: u8, m: &Rtm) -> Result<(), CompileError> {
    let q = m.as_qtm();
    if q.alphabet != Alphabet::default_bits() {
        return Err(CompileError::SourceAlphabet { branch });
    }
    if q.start_head != 0 {
        return Err(CompileError::SourceStartHead { branch, head: q.start_head });
    }
    if q.halting.len() != 1 {
        return Err(CompileError::SourceHaltingCount { branch, count: q.halting.len() });
    }
    for (s, y) in q.row_labels() {
        for e in q.row(s, y) {
            if e.state == q.initial && e.dir == Direction::L {
                return Err(CompileError::InitialEnteredLeftward {
                    branch,
                    from: q.state_name(s).to_string(),
                    scanned: q.alphabet.name(y).to_string(),
                });
            }
        }
    }
    Ok(())
}

pub fn compile(m1: &Rtm, m2: &Rtm) -> Result<Compiled, CompileError> {
    check_source(1, m1)?;
    check_source(2, m2)?;

    let alphabet = Alphabet::new(vec!["B".into(), "0".into(), "1".into(), "#".into()]).unwrap();
    let hash = alphabet.lookup("#").unwrap();

    let mut names: Vec<String> = vec!["start".into()];
    let mut roles: Vec<StateRole> = vec![StateRole::Start];

    let sources = [m1.as_qtm(), m2.as_qtm()];
    let mut embed_base = [0usize; 2];
    for (bi, src) in sources.iter().enumerate() {
        embed_base[bi] = names.len();
        for n in src.state_names() {
            names.push(format!("m{}.{}", bi + 1, n));
            roles.push(StateRole::Source { branch: bi as u8 + 1, name: n.clone() });
        }
    }
    let mut rewind_base = [0usize; 2];
    for bi in 0..2 {
        rewind_base[bi] = names.len();
        for s in DATA_SYMS {
            names.push(format!("r.{}.{}", s, bi + 1));
            roles.push(StateRole::Rewind { branch: bi as u8 + 1, scanned: s.to_string() });
        }
    }
    let fin_base = names.len();
    for s in DATA_SYMS {
        names.push(format!("fin.{s}"));
        roles.push(StateRole::Final { scanned: s.to_string() });
    }

    let n_states = names.len();
    let embed = |bi: usize, q: StateId| StateId((embed_base[bi] + q.0 as usize) as u16);
    let rewind = |bi: usize, y: SymbolId| StateId((rewind_base[bi] + y.0 as usize) as u16);
    let fin = |y: SymbolId| StateId((fin_base + y.0 as usize) as u16);

    let mut partial: Vec<Vec<Option<Vec<Entry>>>> = vec![vec![None; alphabet.len()]; n_states];

    // split row at cell -1
    partial[0][BLANK.0 as usize] = Some(vec![
        Entry::class(Amplitude::inv_sqrt2(), embed(0, sources[0].initial), hash, Direction::R),
        Entry::class(Amplitude::inv_sqrt2(), embed(1, sources[1].initial), hash, Direction::R),
    ]);

    for (bi, src) in sources.iter().enumerate() {
        let halt = *src.halting.iter().next().unwrap();
        for q in src.states() {
            for y in src.alphabet.symbols() {
                let row = if q == halt {
                    // halt entry: mark the halt cell, remember what it held
                    vec![Entry::class(Amplitude::one(), rewind(bi, y), hash, Direction::L)]
                } else {
                    src.row(q, y)
                        .iter()
                        .map(|e| Entry::class(e.amp.clone(), embed(bi, e.state), e.write, e.dir))
                        .collect()
                };
                partial[embed(bi, q).0 as usize][y.0 as usize] = Some(row);
            }
        }
        let tag = SymbolId(bi as u8 + 1); // branch 1 tags 0, branch 2 tags 1
        for y in src.alphabet.symbols() {
            let r = rewind(bi, y);
            for tau in src.alphabet.symbols() {
                partial[r.0 as usize][tau.0 as usize] =
                    Some(vec![Entry::class(Amplitude::one(), r, tau, Direction::L)]);
            }
            partial[r.0 as usize][hash.0 as usize] =
                Some(vec![Entry::class(Amplitude::one(), fin(y), tag, Direction::L)]);
        }
    }

    for y in sources[0].alphabet.symbols() {
        let f = fin(y);
        partial[f.0 as usize][BLANK.0 as usize] =
            Some(vec![Entry::class(Amplitude::one(), f, BLANK, Direction::L)]);
        partial[f.0 as usize][hash.0 as usize] =
            Some(vec![Entry::class(Amplitude::one(), f, hash, Direction::L)]);
        // rows on scanned 0/1 are unreachable junk; completion must route
        // them out of the halting family, and does, because every in-arrow
        // of a final is already spoken for
    }

    let halting: BTreeSet<StateId> = sources[0].alphabet.symbols().map(fin).collect();
    let machine = Qtm::assemble(MachineKind::Qtm, alphabet, names, StateId(0), halting, -1, partial)?;
    Ok(Compiled { machine, roles })
}

/// Verdict of a runtime comparison.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum RuntimeVerdict {
    /// Both halted at the same step (source steps in classical mode,
    /// compiled steps in quantum mode).
    Same { step: u64 },
    /// Halt steps differ; `None` means that side did not halt within the
    /// budget, which is still a sound difference because the other did.
    Different { first: Option<u64>, second: Option<u64> },
    /// Neither halted within the budget.
    Unknown { budget: u64 },
}

/// Ground truth by running both sources classically.
pub fn compare_runtimes_classical(m1: &Rtm, m2: &Rtm, input: &[SymbolId], budget: u64) -> RuntimeVerdict {
    use crate::machine::{simulate_classical, ClassicalOutcome};
    let (o1, _) = simulate_classical(m1, input, budget);
    let (o2, _) = simulate_classical(m2, input, budget);
    match (o1, o2) {
        (ClassicalOutcome::Halted { step: t1, .. }, ClassicalOutcome::Halted { step: t2, .. }) => {
            if t1 == t2 {
                RuntimeVerdict::Same { step: t1 }
            } else {
                RuntimeVerdict::Different { first: Some(t1), second: Some(t2) }
            }
        }
        (ClassicalOutcome::Halted { step: t1, .. }, ClassicalOutcome::Running) => {
            RuntimeVerdict::Different { first: Some(t1), second: None }
        }
        (ClassicalOutcome::Running, ClassicalOutcome::Halted { step: t2, .. }) => {
            RuntimeVerdict::Different { first: None, second: Some(t2) }
        }
        (ClassicalOutcome::Running, ClassicalOutcome::Running) => RuntimeVerdict::Unknown { budget },
    }
}

/// Branch attribution of a halted slice: the tag written at cell -1 is 0
/// for branch 1 and 1 for branch 2.
fn slice_branch(m: &Qtm, slice: &crate::halting::HaltSlice) -> Option<u8> {
    let mut branch = None;
    for (c, _) in slice.slice.iter() {
        let tag = c.tape.get(&-1).copied()?;
        let b = match m.alphabet.name(tag) {
            "0" => 1,
            "1" => 2,
            _ => return None,
        };
        if branch.replace(b).is_some_and(|prev| prev != b) {
            return None;
        }
    }
    branch
}

/// Compare runtimes through the compiled machine alone: run the halting
/// protocol on compile(m1, m2) and read the halt-step spikes. Halt masses
/// of 1 mean both branches halted together; each 1/2 spike is attributed
/// to its branch by the tag it wrote.
pub fn compare_runtimes_quantum(
    m1: &Rtm,
    m2: &Rtm,
    input: &[SymbolId],
    budget: u64,
    cap: usize,
) -> Result<RuntimeVerdict, QuantumCompareError> {
    let compiled = compile(m1, m2)?;
    let run = crate::halting::monitored_run(&compiled.machine, input, budget, cap)?;
    let half = crate::amplitude::RealValue::from_ratio(1, 2);
    let one = crate::amplitude::RealValue::one();
    let mut first: Option<u64> = None;
    let mut second: Option<u64> = None;
    for s in &run.slices {
        let mass = s.slice.norm_sq();
        if mass == one {
            return Ok(RuntimeVerdict::Same { step: s.step });
        }
        assert_eq!(mass, half, "a compiled branch halts with mass exactly 1/2");
        match slice_branch(&compiled.machine, s) {
            Some(1) => first = Some(s.step),
            Some(2) => second = Some(s.step),
            _ => unreachable!("halted slice carries a single branch tag"),
        }
    }
    Ok(match (first, second) {
        (None, None) => RuntimeVerdict::Unknown { budget },
        (f, s) => RuntimeVerdict::Different { first: f, second: s },
    })
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuantumCompareError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Dynamics(#[from] crate::dynamics::DynamicsError),
}

/// Semidecision verdict for one budget.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum SemiVerdict {
    /// Halt mass observed at this compiled step.
    Halts { compiled_step: u64 },
    /// No halt mass within the budget.
    Unknown { budget: u64 },
}

/// Semidecide halting of `m` on `input` by pairing it with a machine that
/// provably never halts and watching the compiled protocol: any halt mass
/// must come from `m`'s branch.
pub fn semidecide_halt(
    m: &Rtm,
    input: &[SymbolId],
    budgets: &[u64],
    cap: usize,
) -> Result<Vec<(u64, SemiVerdict)>, QuantumCompareError> {
    let partner = crate::corpus::never_halt();
    let compiled = compile(m, &partner)?;
    let max_budget = budgets.iter().copied().max().unwrap_or(0);
    let run = crate::halting::monitored_run(&compiled.machine, input, max_budget, cap)?;
    let half = crate::amplitude::RealValue::from_ratio(1, 2);
    let mut halt_step: Option<u64> = None;
    for s in &run.slices {
        let mass = s.slice.norm_sq();
        assert_eq!(mass, half, "the never-halting partner cannot contribute halt mass");
        assert_eq!(slice_branch(&compiled.machine, s), Some(1), "halt mass must carry branch 1's tag");
        assert!(halt_step.is_none(), "branch 1 halts at most once");
        halt_step = Some(s.step);
    }
    Ok(budgets
        .iter()
        .map(|&b| {
            let v = match halt_step {
                Some(t) if t <= b => SemiVerdict::Halts { compiled_step: t },
                _ => SemiVerdict::Unknown { budget: b },
            };
            (b, v)
        })
        .collect())
}
