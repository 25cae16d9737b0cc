//! Command line front end.
//!
//! One verb per analysis: `check`, `run`, `halt-dist`, `classify`,
//! `sample`, `compare-protocols`, `compile`, `compare-runtimes`,
//! `semidecide-halt`, `oracle-check`. Every verb reads machine files in
//! the format of [`crate::format`] and reports either as text or as JSON
//! with stable, sorted keys; `halt-dist` additionally speaks CSV.
//!
//! Exit codes: 0 success (including honest `unknown` verdicts), 2 for
//! validation problems (unreadable or ill-formed machines, bad flags,
//! failed checks), 3 for exhausted resources (superposition support cap,
//! dense basis cap, window escape).

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

use crate::amplitude::RealValue;
use crate::checks::{
    check_reversible, check_stationary, check_wellformed, describe_reversible_violation,
    describe_stationary_violation, describe_wellformed_violation, StationaryMode,
};
use crate::compiler::{self, RuntimeVerdict, SemiVerdict};
use crate::dynamics::{self, Configuration, DynamicsError, Superposition};
use crate::format::{emit_machine, enforce_kind, parse_machine};
use crate::halting::{self, Classification, SampleOutcome};
use crate::machine::{MachineKind, Qtm, Rtm};
use crate::oracle::{self, OracleError, Window};

pub const SUPPORT_CAP_ENV: &str = "QTMHALT_SUPPORT_CAP";
pub const DEFAULT_SUPPORT_CAP: usize = 1_000_000;

#[derive(Parser)]
#[command(
    name = "qtmhalt",
    version,
    about = "Exact analysis of quantum Turing machine halting protocols"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StationaryArg {
    Strict,
    DataOnly,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Classical,
    Quantum,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a machine file and run its structural checks
    Check {
        file: PathBuf,
        /// Stationarity mode to report alongside the kind check
        #[arg(long, value_enum, default_value_t = StationaryArg::Strict)]
        stationary: StationaryArg,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Evolve the superposition freely and print the final state
    Run {
        file: PathBuf,
        /// Input word, e.g. "1011" or "-" for the blank tape
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 10)]
        steps: u64,
        /// Superposition support cap (overrides QTMHALT_SUPPORT_CAP)
        #[arg(long)]
        cap: Option<usize>,
        /// Skip the declared-kind check after parsing
        #[arg(long)]
        defer_checks: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Monitored halting-time distribution over a step budget
    HaltDist {
        file: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 50)]
        budget: u64,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        defer_checks: bool,
        /// text, json, or csv with header `t,p_exact,p_float`
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Decide whether halting is certain, probabilistic, or unseen
    Classify {
        file: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        defer_checks: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Draw seeded Monte Carlo outcomes of the halting protocol
    Sample {
        file: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 100)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        defer_checks: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Compare the monitored and unmonitored outcome laws
    CompareProtocols {
        file: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 50)]
        budget: u64,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        defer_checks: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Compile two reversible sources into one two-branch machine
    Compile {
        first: PathBuf,
        second: PathBuf,
        /// Write the compiled machine here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare halting times of two reversible machines
    CompareRuntimes {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        /// classical runs the sources directly; quantum runs the compiled protocol
        #[arg(long, value_enum, default_value_t = ModeArg::Quantum)]
        mode: ModeArg,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Watch the compiled protocol for halt mass over growing budgets
    SemidecideHalt {
        file: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, value_delimiter = ',', default_values_t = [10u64, 100, 1000])]
        budgets: Vec<u64>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Build the dense windowed operator and audit it against the table
    OracleCheck {
        file: PathBuf,
        /// Cell window as `lo..hi`, e.g. "-2..2"
        #[arg(long, default_value = "-2..2", allow_hyphen_values = true)]
        window: String,
        /// Also evolve this many steps densely and diff against the sparse run
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value = "")]
        input: String,
        /// Cap on the dense basis size
        #[arg(long, default_value_t = oracle::DEFAULT_DIM_CAP)]
        dim_cap: usize,
        #[arg(long)]
        defer_checks: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

enum Failure {
    Validation(String),
    Resource(String),
}

type CliResult<T> = Result<T, Failure>;

fn validation(msg: impl ToString) -> Failure {
    Failure::Validation(msg.to_string())
}

fn dynamics_failure(e: DynamicsError) -> Failure {
    Failure::Resource(e.to_string())
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::OutsideWindow { .. } => Failure::Validation(e.to_string()),
        _ => Failure::Resource(e.to_string()),
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            3
        }
    }
}

fn dispatch(cmd: Cmd) -> CliResult<i32> {
    match cmd {
        Cmd::Check { file, stationary, format } => cmd_check(&file, stationary, format),
        Cmd::Run { file, input, steps, cap, defer_checks, format } => {
            cmd_run(&file, &input, steps, cap, defer_checks, format)
        }
        Cmd::HaltDist { file, input, budget, cap, defer_checks, format } => {
            cmd_halt_dist(&file, &input, budget, cap, defer_checks, format)
        }
        Cmd::Classify { file, input, budget, cap, defer_checks, format } => {
            cmd_classify(&file, &input, budget, cap, defer_checks, format)
        }
        Cmd::Sample { file, input, budget, seed, shots, cap, defer_checks, format } => {
            cmd_sample(&file, &input, budget, seed, shots, cap, defer_checks, format)
        }
        Cmd::CompareProtocols { file, input, budget, cap, defer_checks, format } => {
            cmd_compare_protocols(&file, &input, budget, cap, defer_checks, format)
        }
        Cmd::Compile { first, second, output } => cmd_compile(&first, &second, output.as_deref()),
        Cmd::CompareRuntimes { first, second, input, budget, mode, cap, format } => {
            cmd_compare_runtimes(&first, &second, &input, budget, mode, cap, format)
        }
        Cmd::SemidecideHalt { file, input, budgets, cap, format } => {
            cmd_semidecide(&file, &input, &budgets, cap, format)
        }
        Cmd::OracleCheck { file, window, steps, input, dim_cap, defer_checks, format } => {
            cmd_oracle_check(&file, &window, steps, &input, dim_cap, defer_checks, format)
        }
    }
}

fn support_cap(flag: Option<usize>) -> CliResult<usize> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var(SUPPORT_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| validation(format!("{SUPPORT_CAP_ENV} must be an integer, found {v:?}"))),
        Err(_) => Ok(DEFAULT_SUPPORT_CAP),
    }
}

fn load_machine(path: &Path, defer_checks: bool) -> CliResult<Qtm> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| validation(format!("{}: {e}", path.display())))?;
    let m = parse_machine(&text).map_err(|e| validation(format!("{}: {e}", path.display())))?;
    if !defer_checks {
        enforce_kind(&m).map_err(|e| validation(format!("{}: {e}", path.display())))?;
    }
    Ok(m)
}

fn load_rtm(path: &Path) -> CliResult<Rtm> {
    let m = load_machine(path, true)?;
    if m.kind != MachineKind::Rtm {
        return Err(validation(format!(
            "{}: a reversible source (kind rtm) is required here",
            path.display()
        )));
    }
    Rtm::try_new(m).map_err(|r| {
        validation(format!(
            "{}: not reversible: {}",
            path.display(),
            r.violations.len()
        ))
    })
}

fn parse_word(m: &Qtm, text: &str) -> CliResult<Vec<crate::machine::SymbolId>> {
    dynamics::parse_input(m, text).map_err(validation)
}

fn float(v: &RealValue) -> CliResult<f64> {
    v.to_f64().map_err(|e| validation(format!("value overflows f64: {e}")))
}

fn print_value(format: OutputFormat, text: String, value: Value) -> CliResult<i32> {
    match format {
        OutputFormat::Text => println!("{text}"),
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
        OutputFormat::Csv => {
            return Err(validation("csv output is only available for halt-dist"));
        }
    }
    Ok(0)
}

fn kind_name(k: MachineKind) -> &'static str {
    match k {
        MachineKind::Qtm => "qtm",
        MachineKind::Rtm => "rtm",
    }
}

fn cmd_check(file: &Path, stationary: StationaryArg, format: OutputFormat) -> CliResult<i32> {
    let m = load_machine(file, true)?;
    let wf = check_wellformed(&m);
    let rev = (m.kind == MachineKind::Rtm).then(|| check_reversible(&m));
    let mode = match stationary {
        StationaryArg::Strict => StationaryMode::Strict,
        StationaryArg::DataOnly => StationaryMode::DataOnly,
    };
    let st = check_stationary(&m, mode);

    let kind_ok = match &rev {
        Some(r) => r.is_ok(),
        None => wf.is_ok(),
    };

    let wf_lines: Vec<String> =
        wf.violations.iter().map(|v| describe_wellformed_violation(&m, v)).collect();
    let rev_lines: Vec<String> = rev
        .as_ref()
        .map(|r| r.violations.iter().map(|v| describe_reversible_violation(&m, v)).collect())
        .unwrap_or_default();
    let st_lines: Vec<String> =
        st.violations.iter().map(|v| describe_stationary_violation(&m, v)).collect();

    let mode_name = match mode {
        StationaryMode::Strict => "strict",
        StationaryMode::DataOnly => "data-only",
    };

    let mut text = format!(
        "kind: {}\nstates: {}, symbols: {}\n",
        kind_name(m.kind),
        m.state_count(),
        m.alphabet.len()
    );
    let describe = |ok: bool, lines: &[String]| -> String {
        if ok {
            "ok".to_string()
        } else {
            let mut s = format!("{} violation(s)", lines.len());
            for l in lines {
                s.push_str("\n  ");
                s.push_str(l);
            }
            s
        }
    };
    text.push_str(&format!("wellformed: {}\n", describe(wf.is_ok(), &wf_lines)));
    if rev.is_some() {
        text.push_str(&format!("reversible: {}\n", describe(rev_lines.is_empty(), &rev_lines)));
    }
    text.push_str(&format!(
        "stationary ({mode_name}): {}{}",
        describe(st.is_ok(), &st_lines),
        if st.conservative && st.is_ok() { "\n  (data-only pass; marker cells may still move)" } else { "" }
    ));

    let mut value = json!({
        "kind": kind_name(m.kind),
        "states": m.state_count(),
        "symbols": m.alphabet.len(),
        "wellformed": { "ok": wf.is_ok(), "violations": wf_lines },
        "stationary": {
            "mode": mode_name,
            "ok": st.is_ok(),
            "conservative": st.conservative,
            "violations": st_lines,
        },
    });
    if rev.is_some() {
        value["reversible"] = json!({ "ok": rev_lines.is_empty(), "violations": rev_lines });
    }

    print_value(format, text, value)?;
    Ok(if kind_ok { 0 } else { 2 })
}

fn cmd_run(
    file: &Path,
    input: &str,
    steps: u64,
    cap: Option<usize>,
    defer_checks: bool,
    format: OutputFormat,
) -> CliResult<i32> {
    let m = load_machine(file, defer_checks)?;
    let word = parse_word(&m, input)?;
    let cap = support_cap(cap)?;
    let start = Superposition::unit(Configuration::initial(&m, &word));
    let s = dynamics::evolve(&m, &start, steps, cap).map_err(dynamics_failure)?;
    let (halted, _) = s.split_halting(&m);

    let norm = s.norm_sq();
    let halt_mass = halted.norm_sq();
    let mut text = format!(
        "after {} step(s): support {}, norm {} ({}), halted mass {} ({})",
        steps,
        s.support_len(),
        norm,
        float(&norm)?,
        halt_mass,
        float(&halt_mass)?
    );
    let mut terms = Vec::new();
    for (c, a) in s.iter() {
        let prob = a.norm_sq();
        text.push_str(&format!(
            "\n  state {:10} head {:4} word {:12} amp {} (p = {})",
            m.state_name(c.state),
            c.head,
            c.render_word(&m),
            a,
            float(&prob)?
        ));
        terms.push(json!({
            "state": m.state_name(c.state),
            "head": c.head,
            "word": c.render_word(&m),
            "amp": a.to_string(),
            "prob": float(&prob)?,
        }));
    }
    let value = json!({
        "steps": steps,
        "support": s.support_len(),
        "norm_sq": { "exact": norm.to_string(), "float": float(&norm)? },
        "halted_mass": { "exact": halt_mass.to_string(), "float": float(&halt_mass)? },
        "terms": terms,
    });
    print_value(format, text, value)
}

fn cmd_halt_dist(
    file: &Path,
    input: &str,
    budget: u64,
    cap: Option<usize>,
    defer_checks: bool,
    format: OutputFormat,
) -> CliResult<i32> {
    let m = load_machine(file, defer_checks)?;
    let word = parse_word(&m, input)?;
    let cap = support_cap(cap)?;
    let dist = halting::halt_distribution(&m, &word, budget, cap).map_err(dynamics_failure)?;

    if format == OutputFormat::Csv {
        let mut out = String::from("t,p_exact,p_float\n");
        for (i, p) in dist.p.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, p, float(p)?));
        }
        print!("{out}");
        return Ok(0);
    }

    let mut rows = Vec::new();
    let mut text = format!("halting distribution over budget {budget}:");
    for (i, p) in dist.p.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let t = i as u64 + 1;
        let c = &dist.cumulative[i];
        text.push_str(&format!("\n  t = {t:<5} p = {} ({}), cumulative {}", p, float(p)?, c));
        rows.push(json!({
            "t": t,
            "p": p.to_string(),
            "p_float": float(p)?,
            "cumulative": c.to_string(),
        }));
    }
    if rows.is_empty() {
        text.push_str("\n  (no halt mass within budget)");
    }
    text.push_str(&format!("\nnever (within budget): {} ({})", dist.never, float(&dist.never)?));
    let value = json!({
        "budget": budget,
        "rows": rows,
        "never": { "exact": dist.never.to_string(), "float": float(&dist.never)? },
    });
    print_value(format, text, value)
}

fn cmd_classify(
    file: &Path,
    input: &str,
    budget: u64,
    cap: Option<usize>,
    defer_checks: bool,
    format: OutputFormat,
) -> CliResult<i32> {
    let m = load_machine(file, defer_checks)?;
    let word = parse_word(&m, input)?;
    let cap = support_cap(cap)?;
    let c = halting::classify(&m, &word, budget, cap).map_err(dynamics_failure)?;
    let (text, value) = match c {
        Classification::NonProbabilisticHaltAt { step } => (
            format!("verdict: halts with certainty at step {step}"),
            json!({ "verdict": "non-probabilistic", "step": step }),
        ),
        Classification::Probabilistic { first_step, first_p } => (
            format!("verdict: probabilistic halting, first mass {first_p} at step {first_step}"),
            json!({ "verdict": "probabilistic", "first_step": first_step, "first_p": first_p }),
        ),
        Classification::NoHaltWithinBudget { budget } => (
            format!("verdict: no halt mass within budget {budget}"),
            json!({ "verdict": "no-halt-within-budget", "budget": budget }),
        ),
    };
    print_value(format, text, value)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    file: &Path,
    input: &str,
    budget: u64,
    seed: u64,
    shots: u64,
    cap: Option<usize>,
    defer_checks: bool,
    format: OutputFormat,
) -> CliResult<i32> {
    let m = load_machine(file, defer_checks)?;
    let word = parse_word(&m, input)?;
    let cap = support_cap(cap)?;
    let outcomes = halting::sample(&m, &word, budget, cap, seed, shots).map_err(dynamics_failure)?;

    let mut counts: std::collections::BTreeMap<String, u64> = std::collections::BTreeMap::new();
    for o in outcomes {
        let key = match o {
            SampleOutcome::Halted { step, word } => format!("t={step} word={word}"),
            SampleOutcome::Never => "never".to_string(),
        };
        *counts.entry(key).or_insert(0) += 1;
    }

    let mut text = format!("{shots} shot(s), seed {seed}, budget {budget}:");
    for (key, n) in &counts {
        text.push_str(&format!("\n  {key:24} {n:8}  ({:.4})", *n as f64 / shots as f64));
    }
    let value = json!({
        "shots": shots,
        "seed": seed,
        "budget": budget,
        "counts": counts,
    });
    print_value(format, text, value)
}

fn cmd_compare_protocols(
    file: &Path,
    input: &str,
    budget: u64,
    cap: Option<usize>,
    defer_checks: bool,
    format: OutputFormat,
) -> CliResult<i32> {
    let m = load_machine(file, defer_checks)?;
    let word = parse_word(&m, input)?;
    let cap = support_cap(cap)?;
    let cmp = halting::compare_protocols(&m, &word, budget, cap).map_err(dynamics_failure)?;

    let mut text = String::from("monitored law (flag checked every step):");
    let mut monitored = Vec::new();
    for ((step, w), mass) in &cmp.monitored {
        text.push_str(&format!("\n  t = {step:<5} word {w:12} mass {} ({})", mass, float(mass)?));
        monitored.push(json!({
            "step": step,
            "word": w,
            "mass": mass.to_string(),
            "float": float(mass)?,
        }));
    }
    text.push_str(&format!(
        "\n  never               mass {} ({})",
        cmp.monitored_never,
        float(&cmp.monitored_never)?
    ));
    text.push_str("\nunmonitored law (measured once at the budget):");
    let mut unmonitored = Vec::new();
    for (w, mass) in &cmp.unmonitored {
        text.push_str(&format!("\n  word {w:12}       mass {} ({})", mass, float(mass)?));
        unmonitored.push(json!({
            "word": w,
            "mass": mass.to_string(),
            "float": float(mass)?,
        }));
    }
    text.push_str(&format!(
        "\n  never               mass {} ({})",
        cmp.unmonitored_never,
        float(&cmp.unmonitored_never)?
    ));
    text.push_str(&format!("\ntotal variation: {} ({})", cmp.tv, float(&cmp.tv)?));

    let value = json!({
        "budget": budget,
        "monitored": monitored,
        "monitored_never": { "exact": cmp.monitored_never.to_string(), "float": float(&cmp.monitored_never)? },
        "unmonitored": unmonitored,
        "unmonitored_never": { "exact": cmp.unmonitored_never.to_string(), "float": float(&cmp.unmonitored_never)? },
        "tv": { "exact": cmp.tv.to_string(), "float": float(&cmp.tv)? },
    });
    print_value(format, text, value)
}

fn cmd_compile(first: &Path, second: &Path, output: Option<&Path>) -> CliResult<i32> {
    let m1 = load_rtm(first)?;
    let m2 = load_rtm(second)?;
    let compiled = compiler::compile(&m1, &m2).map_err(validation)?;
    let text = emit_machine(&compiled.machine, &compiled.provenance());
    match output {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| validation(format!("{}: {e}", path.display())))?;
            println!(
                "wrote {} states over {} symbols to {}",
                compiled.machine.state_count(),
                compiled.machine.alphabet.len(),
                path.display()
            );
        }
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_compare_runtimes(
    first: &Path,
    second: &Path,
    input: &str,
    budget: u64,
    mode: ModeArg,
    cap: Option<usize>,
    format: OutputFormat,
) -> CliResult<i32> {
    let m1 = load_rtm(first)?;
    let m2 = load_rtm(second)?;
    let word = parse_word(m1.as_qtm(), input)?;
    let (verdict, units, mode_name) = match mode {
        ModeArg::Classical => (
            compiler::compare_runtimes_classical(&m1, &m2, &word, budget),
            "source steps",
            "classical",
        ),
        ModeArg::Quantum => {
            let cap = support_cap(cap)?;
            let v = compiler::compare_runtimes_quantum(&m1, &m2, &word, budget, cap)
                .map_err(|e| match e {
                    compiler::QuantumCompareError::Compile(c) => validation(c),
                    compiler::QuantumCompareError::Dynamics(d) => dynamics_failure(d),
                })?;
            (v, "compiled steps", "quantum")
        }
    };

    let side = |t: &Option<u64>| match t {
        Some(t) => t.to_string(),
        None => format!("no halt within {budget}"),
    };
    let (text, value) = match &verdict {
        RuntimeVerdict::Same { step } => (
            format!("verdict: same runtime, halt at step {step} ({units})"),
            json!({ "mode": mode_name, "verdict": "same", "step": step, "units": units }),
        ),
        RuntimeVerdict::Different { first, second } => (
            format!(
                "verdict: different runtimes, first: {}, second: {} ({units})",
                side(first),
                side(second)
            ),
            json!({
                "mode": mode_name,
                "verdict": "different",
                "first": first,
                "second": second,
                "units": units,
            }),
        ),
        RuntimeVerdict::Unknown { budget } => (
            format!("verdict: unknown, neither halted within budget {budget}"),
            json!({ "mode": mode_name, "verdict": "unknown", "budget": budget }),
        ),
    };
    print_value(format, text, value)
}

fn cmd_semidecide(
    file: &Path,
    input: &str,
    budgets: &[u64],
    cap: Option<usize>,
    format: OutputFormat,
) -> CliResult<i32> {
    if budgets.is_empty() {
        return Err(validation("at least one budget is required"));
    }
    let m = load_rtm(file)?;
    let word = parse_word(m.as_qtm(), input)?;
    let cap = support_cap(cap)?;
    let results = compiler::semidecide_halt(&m, &word, budgets, cap).map_err(|e| match e {
        compiler::QuantumCompareError::Compile(c) => validation(c),
        compiler::QuantumCompareError::Dynamics(d) => dynamics_failure(d),
    })?;

    let mut text = String::from("semidecision by compiled protocol:");
    let mut rows = Vec::new();
    for (budget, verdict) in &results {
        match verdict {
            SemiVerdict::Halts { compiled_step } => {
                text.push_str(&format!(
                    "\n  budget {budget:<7} halts (flag mass at compiled step {compiled_step})"
                ));
                rows.push(json!({ "budget": budget, "verdict": "halts", "compiled_step": compiled_step }));
            }
            SemiVerdict::Unknown { .. } => {
                text.push_str(&format!("\n  budget {budget:<7} unknown"));
                rows.push(json!({ "budget": budget, "verdict": "unknown" }));
            }
        }
    }
    let value = json!({ "results": rows });
    print_value(format, text, value)
}

fn parse_window(text: &str) -> CliResult<Window> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| validation(format!("window must be `lo..hi`, found {text:?}")))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| validation(format!("bad window bound {lo:?}")))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| validation(format!("bad window bound {hi:?}")))?;
    if lo > hi {
        return Err(validation(format!("window {text:?} is empty")));
    }
    Ok(Window::new(lo, hi))
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle_check(
    file: &Path,
    window: &str,
    steps: Option<u64>,
    input: &str,
    dim_cap: usize,
    defer_checks: bool,
    format: OutputFormat,
) -> CliResult<i32> {
    let m = load_machine(file, defer_checks)?;
    let window = parse_window(window)?;
    let d = oracle::build(&m, window, dim_cap).map_err(oracle_failure)?;

    let defects = d.gram_defects();
    let wf_ok = check_wellformed(&m).is_ok();
    let agrees = wf_ok == defects.is_empty();
    let narrow = window.width() < 5;

    let mut text = format!(
        "window {window}: dimension {}, interior {}, escaping {}\n",
        d.dim(),
        d.interior_count(),
        d.dim() - d.interior_count()
    );
    text.push_str(&format!("gram defects on interior columns: {}", defects.len()));
    let mut defect_lines = Vec::new();
    for (i, j, v) in defects.iter().take(5) {
        let ci = d.config_of(*i);
        let cj = d.config_of(*j);
        let line = format!(
            "({}, head {}, word {}) vs ({}, head {}, word {}): {}",
            m.state_name(ci.state),
            ci.head,
            ci.render_word(&m),
            m.state_name(cj.state),
            cj.head,
            cj.render_word(&m),
            v
        );
        text.push_str(&format!("\n  {line}"));
        defect_lines.push(line);
    }
    if defects.len() > 5 {
        text.push_str(&format!("\n  ... and {} more", defects.len() - 5));
    }
    text.push_str(&format!(
        "\nsparse wellformedness check: {}\nagreement: {}",
        if wf_ok { "ok" } else { "violations found" },
        if agrees { "yes" } else { "no" }
    ));
    if narrow && !agrees {
        text.push_str("\nnote: windows narrower than 5 cells cannot witness every violation");
    }

    let mut evolution = Value::Null;
    if let Some(t) = steps {
        let word = parse_word(&m, input)?;
        let start = Superposition::unit(Configuration::initial(&m, &word));
        let mut dense = d.embed(&start).map_err(oracle_failure)?;
        let mut sparse = start;
        let mut agree = true;
        for _ in 0..t {
            dense = d.evolve(&dense, 1).map_err(oracle_failure)?;
            sparse = dynamics::step(&m, &sparse);
            if d.extract(&dense) != sparse {
                agree = false;
                break;
            }
        }
        let norm = d.norm_sq(&dense);
        let halted = d.halted_mass(&dense);
        text.push_str(&format!(
            "\nafter {t} step(s): dense and sparse evolutions {}; norm {} ({}), halted mass {} ({})",
            if agree { "agree" } else { "DIVERGE" },
            norm,
            float(&norm)?,
            halted,
            float(&halted)?
        ));
        evolution = json!({
            "steps": t,
            "match": agree,
            "norm_sq": { "exact": norm.to_string(), "float": float(&norm)? },
            "halted_mass": { "exact": halted.to_string(), "float": float(&halted)? },
        });
        if !agree {
            let value = oracle_value(&window, &d, defects.len(), &defect_lines, wf_ok, agrees, evolution);
            print_value(format, text, value)?;
            return Ok(2);
        }
    }

    let value = oracle_value(&window, &d, defects.len(), &defect_lines, wf_ok, agrees, evolution);
    print_value(format, text, value)?;
    Ok(if agrees { 0 } else { 2 })
}

fn oracle_value(
    window: &Window,
    d: &oracle::DenseOperator,
    defect_count: usize,
    defect_lines: &[String],
    wf_ok: bool,
    agrees: bool,
    evolution: Value,
) -> Value {
    json!({
        "window": window.to_string(),
        "dim": d.dim(),
        "interior": d.interior_count(),
        "escaping": d.dim() - d.interior_count(),
        "defects": defect_count,
        "first_defects": defect_lines,
        "wellformed": wf_ok,
        "agreement": agrees,
        "evolution": evolution,
    })
}
