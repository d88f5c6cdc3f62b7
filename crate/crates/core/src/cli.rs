//! The `maxplus` command line.
//!
//! Exit codes: 0 for a big-O verdict or a successful query, 1 for a
//! not-big-O verdict, 2 for errors, 3 when a resource cap is exhausted.
//! Results go to standard output and diagnostics to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::automaton::MaxPlusAutomaton;
use crate::counterexample::{violation_family, Violation};
use crate::decision::{
    decide_bigo_with_stats, find_witness_exhaustive, DecideOptions, Refutation, SearchMethod, Verdict,
};
use crate::error::{Error, Result};
use crate::factorisation::{build_tree_with, find_faults};
use crate::format;
use crate::nfa::DEFAULT_SUBSET_CAP;
use crate::reduction::{lift_word, simplify, Simplification};
use crate::semigroup::{asymptotic_closure, generators, paths_closure, ClosureConfig, DEFAULT_SEMIGROUP_CAP};

pub const EXIT_BIGO: i32 = 0;
pub const EXIT_NOT_BIGO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_CAP: i32 = 3;

pub const ENV_CAP_SEMIGROUP: &str = "MAXPLUS_CAP_SEMIGROUP";
pub const ENV_CAP_SUBSET: &str = "MAXPLUS_CAP_SUBSET";

/// Counterexample words up to this length are also printed letter by letter.
const EXPAND_THRESHOLD: u128 = 80;

#[derive(Parser, Debug)]
#[command(name = "maxplus", version, about = "Big-O checks for max-plus automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether A is big-O of B (exit 0) or not (exit 1).
    Check {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Exhaustive)]
        method: Method,
        /// Print a violating word for every s in 1..=S.
        #[arg(long, value_name = "S")]
        counterexample: Option<u64>,
        /// Nesting bound of the tractable search (default 3 times the semigroup of paths).
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an automaton on a word such as "(a^2 b)^3".
    Eval { automaton: PathBuf, word: String },
    /// Print a factorisation tree with contributors and faults.
    Tree {
        a: PathBuf,
        b: PathBuf,
        word: String,
        /// Graphviz output.
        #[arg(long)]
        dot: bool,
    },
    /// Statistics on the semigroups of the instance.
    Closure { a: PathBuf, b: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Exhaustive,
    Tractable,
}

struct Caps {
    semigroup: usize,
    subset: usize,
}

fn env_cap(name: &str, default: usize) -> Result<usize> {
    match std::env::var(name) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{name} must be a positive integer, got `{v}`"))),
        Err(std::env::VarError::NotPresent) => Ok(default),
        Err(e) => Err(Error::Parse(format!("{name}: {e}"))),
    }
}

fn caps() -> Result<Caps> {
    Ok(Caps {
        semigroup: env_cap(ENV_CAP_SEMIGROUP, DEFAULT_SEMIGROUP_CAP)?,
        subset: env_cap(ENV_CAP_SUBSET, DEFAULT_SUBSET_CAP)?,
    })
}

/// Runs the command line with explicit streams; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_BIGO };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_cap() {
                EXIT_CAP
            } else {
                EXIT_ERROR
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Check {
            a,
            b,
            method,
            counterexample,
            k_max,
            json,
        } => {
            let caps = caps()?;
            let options = DecideOptions {
                method: match method {
                    Method::Exhaustive => SearchMethod::Exhaustive,
                    Method::Tractable => SearchMethod::Tractable,
                },
                semigroup_cap: caps.semigroup,
                subset_cap: caps.subset,
                k_max,
            };
            cmd_check(&format::load(a)?, &format::load(b)?, &options, counterexample, json, out)
        }
        Command::Eval { automaton, word } => {
            let aut = format::load(automaton)?;
            let w = aut.alphabet().parse_word(&word)?;
            writeln!(out, "{}", aut.evaluate_rle(&w)?)?;
            Ok(EXIT_BIGO)
        }
        Command::Tree { a, b, word, dot } => cmd_tree(&format::load(a)?, &format::load(b)?, &word, dot, out),
        Command::Closure { a, b } => cmd_closure(&format::load(a)?, &format::load(b)?, out),
    }
}

fn cmd_check(
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
    options: &DecideOptions,
    counterexample: Option<u64>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let (verdict, stats) = decide_bigo_with_stats(a, b, options)?;
    let family = match counterexample {
        Some(n) if n > 0 => violation_family(&verdict, &(1..=n).collect::<Vec<_>>())?,
        _ => None,
    };
    if json {
        let mut v = verdict_json(&verdict, a);
        v["stats"] = json!({
            "generators": stats.generators,
            "paths_size": stats.paths_size,
            "asymptotic_size": stats.asymptotic_size,
        });
        if let Some(family) = &family {
            v["counterexamples"] = family.iter().map(|x| violation_json(x, a)).collect();
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        match &verdict {
            Verdict::BigO(c) => {
                writeln!(out, "BigO: A is big-O of B")?;
                writeln!(out, "certificate: f_A <= c*f_B + c with c = c_H = (4*{}+4)^{} * {}", c.b_states, c.height, c.lambda)?;
                writeln!(out, "c = {}", c.constant)?;
            }
            Verdict::NotBigO(Refutation::LanguageGap { word, .. }) => {
                writeln!(out, "NotBigO: A is not big-O of B")?;
                writeln!(
                    out,
                    "word accepted by A and rejected by B: \"{}\"",
                    a.alphabet().format_word(word)
                )?;
            }
            Verdict::NotBigO(Refutation::Witness(w)) => {
                writeln!(out, "NotBigO: A is not big-O of B")?;
                let inst = &w.instance;
                writeln!(out, "witness: {}", w.element.describe(&inst.a))?;
                writeln!(out, "derivation: {}", w.derivation.display(inst.a.alphabet()))?;
                if inst.determinized || inst.totalized {
                    writeln!(
                        out,
                        "(over the simplified instance; A determinized: {}, B totalized: {})",
                        inst.determinized, inst.totalized
                    )?;
                }
            }
        }
        for v in family.iter().flatten() {
            let shown = v.word.display(a.alphabet());
            write!(out, "s={}: f_A = {}, f_B = {}, w = {shown}", v.s, v.f_a, v.f_b)?;
            if v.realized_s != v.s {
                write!(out, " (realized at s={})", v.realized_s)?;
            }
            writeln!(out)?;
            if v.word.len().is_some_and(|n| n <= EXPAND_THRESHOLD) {
                writeln!(out, "    = {}", a.alphabet().format_word(&v.word.expand(EXPAND_THRESHOLD as usize)?))?;
            }
        }
    }
    Ok(if verdict.is_bigo() { EXIT_BIGO } else { EXIT_NOT_BIGO })
}

/// Machine-readable form of a verdict, with big numbers as strings.
pub fn verdict_json(verdict: &Verdict, a: &MaxPlusAutomaton) -> Value {
    match verdict {
        Verdict::BigO(c) => json!({
            "verdict": "BigO",
            "certificate": {
                "constant": c.constant.to_string(),
                "height": c.height,
                "lambda": c.lambda.to_string(),
                "paths_size": c.paths_size,
                "b_states": c.b_states,
            },
        }),
        Verdict::NotBigO(Refutation::LanguageGap { word, .. }) => json!({
            "verdict": "NotBigO",
            "refutation": {
                "kind": "language_gap",
                "word": a.alphabet().format_word(word),
            },
        }),
        Verdict::NotBigO(Refutation::Witness(w)) => json!({
            "verdict": "NotBigO",
            "refutation": {
                "kind": "witness",
                "method": match w.method {
                    SearchMethod::Exhaustive => "exhaustive",
                    SearchMethod::Tractable => "tractable",
                },
                "element": w.element.describe(&w.instance.a),
                "derivation": w.derivation.display(w.instance.a.alphabet()).to_string(),
                "determinized": w.instance.determinized,
                "totalized": w.instance.totalized,
            },
        }),
    }
}

fn violation_json(v: &Violation, a: &MaxPlusAutomaton) -> Value {
    json!({
        "s": v.s,
        "realized_s": v.realized_s,
        "word": v.word.display(a.alphabet()).to_string(),
        "length": v.word.len().map(|n| n.to_string()),
        "f_a": v.f_a.to_string(),
        "f_b": v.f_b.to_string(),
    })
}

fn cmd_tree(a: &MaxPlusAutomaton, b: &MaxPlusAutomaton, word: &str, dot: bool, out: &mut dyn Write) -> Result<i32> {
    let w = a.alphabet().parse_word(word)?.expand(1 << 24)?;
    let caps = caps()?;
    let config = ClosureConfig {
        cap: caps.semigroup,
        ..ClosureConfig::default()
    };
    let (ta, tb, tw) = match simplify(a, b, caps.subset)? {
        Simplification::Simplified(inst) => {
            let lifted = lift_word(&inst, &w)?.ok_or(Error::WordRejected)?;
            (inst.a, inst.b, lifted)
        }
        // B misses some word of A; a tree still makes sense when A is deterministic.
        Simplification::Immediate { .. } => {
            if !a.is_deterministic() {
                return Err(Error::NotDeterministic);
            }
            (a.clone(), b.with_alphabet(a.alphabet())?, w)
        }
    };
    let tree = build_tree_with(&tw, &ta, &tb, config)?;
    let faults = find_faults(&tree);
    if dot {
        write!(out, "{}", tree.to_dot(&ta, &faults))?;
    } else {
        writeln!(out, "height {}, {} nodes, {} faults", tree.height(), tree.len(), faults.len())?;
        write!(out, "{}", tree.to_text(&ta, &faults))?;
    }
    Ok(EXIT_BIGO)
}

fn cmd_closure(a: &MaxPlusAutomaton, b: &MaxPlusAutomaton, out: &mut dyn Write) -> Result<i32> {
    let caps = caps()?;
    let config = ClosureConfig {
        cap: caps.semigroup,
        ..ClosureConfig::default()
    };
    let start = Instant::now();
    let (ia, ib) = match simplify(a, b, caps.subset)? {
        Simplification::Simplified(inst) => (inst.a, inst.b),
        Simplification::Immediate { word } => {
            writeln!(
                out,
                "note: B rejects \"{}\", which A accepts; statistics are for the unsimplified pair",
                a.alphabet().format_word(&word)
            )?;
            (a.clone(), b.with_alphabet(a.alphabet())?)
        }
    };
    let gens = generators(&ia, &ib)?;
    let paths = paths_closure(&gens, config)?;
    let asym = asymptotic_closure(&gens, config)?;
    let witnesses = asym
        .elements()
        .iter()
        .filter(|e| crate::decision::is_witness(e, &ia, &ib))
        .count();
    writeln!(out, "generators: {}", gens.len())?;
    writeln!(out, "paths (S-bar): {}", paths.len())?;
    writeln!(out, "asymptotic (S): {}", asym.len())?;
    writeln!(out, "witnesses: {witnesses}")?;
    if let Some(i) = find_witness_exhaustive(&asym, &ia, &ib) {
        writeln!(out, "first witness: {}", asym.get(i).describe(&ia))?;
    }
    writeln!(out, "time: {:.3}s", start.elapsed().as_secs_f64())?;
    Ok(EXIT_BIGO)
}
