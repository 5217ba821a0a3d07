//! Command-line front end: learning runs, evaluation, equivalence checking,
//! Smith normal form, a non-termination demonstration over the naturals,
//! and random target generation.
//!
//! Exit codes: 0 success (or "equivalent"), 1 inequivalent, 2 learning
//! budget exhausted, 3 input error.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use wfa_learn::{
    build_hypothesis, equiv, learn, nat_solve_dfs, smith_normal_form, Alphabet, AnyWfa,
    ClosednessOutcome, EquivResult, Int, LanguageEquiv, LearnEvent, LearnResult, LearnerStats,
    LinearSolve, Matrix, Nat, ObservationTable, Semiring, SimulatedTeacher, Teacher, TeacherReply,
    Wfa, Word,
};

#[derive(Parser)]
#[command(
    name = "wfa-learn",
    version,
    about = "Learn and analyze weighted finite automata with exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn the language of a target automaton through queries
    Learn {
        /// Target automaton (JSON)
        target: PathBuf,
        /// Budget in steps: defect fixes and counterexamples
        #[arg(long, default_value_t = 500)]
        budget: u64,
        /// Reinterpret the target over this semiring first (exact conversion)
        #[arg(long)]
        semiring: Option<String>,
        /// Stream the iteration log to stderr
        #[arg(long)]
        trace: bool,
        /// Print a machine-readable run report to stdout
        #[arg(long)]
        json: bool,
        /// Write the learned automaton to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate an automaton on a word
    Eval {
        /// Automaton (JSON)
        wfa: PathBuf,
        /// Word over the automaton's alphabet (empty or "ε" for the empty word)
        #[arg(default_value = "")]
        word: String,
    },
    /// Decide language equivalence of two automata over the same semiring
    Equiv { a: PathBuf, b: PathBuf },
    /// Smith normal form of an integer matrix (JSON array of arrays)
    Snf { matrix: PathBuf },
    /// Run the learner over the naturals on the language a^j -> 2^j - 1 and
    /// watch it chase closedness defects until the budget runs out
    DemoNat {
        /// Budget in steps
        #[arg(long, default_value_t = 12)]
        steps: u64,
    },
    /// Generate a random automaton file
    Gen {
        /// Semiring tag: rat, int, bool or nat
        #[arg(long)]
        semiring: String,
        /// Number of states
        #[arg(long)]
        states: usize,
        /// Alphabet size (symbols a, b, c, ...)
        #[arg(long)]
        alphabet: usize,
        /// Probability of each potential transition
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Weight magnitude bound
        #[arg(long, default_value_t = 5)]
        bound: u64,
        /// Output file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(3);
        }
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Learn {
            target,
            budget,
            semiring,
            trace,
            json,
            out,
        } => cmd_learn(
            &target,
            budget,
            semiring.as_deref(),
            trace,
            json,
            out.as_deref(),
        ),
        Command::Eval { wfa, word } => cmd_eval(&wfa, &word),
        Command::Equiv { a, b } => cmd_equiv(&a, &b),
        Command::Snf { matrix } => cmd_snf(&matrix),
        Command::DemoNat { steps } => cmd_demo_nat(steps),
        Command::Gen {
            semiring,
            states,
            alphabet,
            density,
            seed,
            bound,
            out,
        } => cmd_gen(
            &semiring,
            states,
            alphabet,
            density,
            seed,
            bound,
            out.as_deref(),
        ),
    }
}

fn read_wfa(path: &Path) -> Result<AnyWfa, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    AnyWfa::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_learn(
    target: &Path,
    budget: u64,
    semiring: Option<&str>,
    trace: bool,
    json: bool,
    out: Option<&Path>,
) -> Result<i32, String> {
    if budget < 1 {
        return Err("budget must be at least 1".to_string());
    }
    let mut wfa = read_wfa(target)?;
    if let Some(tag) = semiring {
        wfa = wfa.convert(tag).map_err(|e| e.to_string())?;
    }
    match wfa {
        AnyWfa::Rat(w) => run_learn(w, budget, trace, json, out),
        AnyWfa::Int(w) => run_learn(w, budget, trace, json, out),
        AnyWfa::Bool(w) => run_learn(w, budget, trace, json, out),
        AnyWfa::Nat(w) => run_learn(w, budget, trace, json, out),
    }
}

fn run_learn<S: LinearSolve + LanguageEquiv>(
    target: Wfa<S>,
    budget: u64,
    trace: bool,
    json: bool,
    out: Option<&Path>,
) -> Result<i32, String> {
    let alphabet = target.alphabet().clone();
    let mut teacher = SimulatedTeacher::new(target);
    let mut sink = |chunk: &str| eprintln!("{chunk}");
    let result = learn(
        &mut teacher,
        budget,
        if trace { Some(&mut sink) } else { None },
    );

    if let Some(path) = out {
        if let LearnResult::Learned { hypothesis, .. } = &result {
            std::fs::write(path, hypothesis.wfa.to_json_string() + "\n")
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        }
    }
    if json {
        let report = run_report(&result, &alphabet);
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        );
    } else {
        match &result {
            LearnResult::Learned { hypothesis, stats } => {
                println!("learned a {}-state automaton", hypothesis.wfa.states());
                print_stats(stats);
            }
            LearnResult::BudgetExhausted { stats, rows, cols } => {
                println!("budget exhausted");
                println!("rows: {}", join_words(&alphabet, rows));
                println!("columns: {}", join_words(&alphabet, cols));
                print_stats(stats);
            }
        }
    }
    Ok(match result {
        LearnResult::Learned { .. } => 0,
        LearnResult::BudgetExhausted { .. } => 2,
    })
}

fn print_stats(stats: &LearnerStats) {
    println!("membership queries: {}", stats.membership_queries);
    println!("equivalence queries: {}", stats.equivalence_queries);
    println!("defects fixed: {}", stats.defects_fixed);
    println!("counterexamples processed: {}", stats.counterexamples);
}

fn join_words(alphabet: &Alphabet, words: &[Word]) -> String {
    words
        .iter()
        .map(|w| alphabet.format_word(w))
        .collect::<Vec<_>>()
        .join(", ")
}

fn opt_rank(rank: &Option<usize>) -> serde_json::Value {
    match rank {
        Some(r) => serde_json::Value::from(*r),
        None => serde_json::Value::Null,
    }
}

fn run_report<S: Semiring>(result: &LearnResult<S>, alphabet: &Alphabet) -> serde_json::Value {
    let stats = result.stats();
    let events: Vec<serde_json::Value> = stats
        .events
        .iter()
        .map(|event| match event {
            LearnEvent::DefectFix {
                word,
                rank_before,
                rank_after,
            } => serde_json::json!({
                "kind": "defect_fix",
                "word": alphabet.format_word(word),
                "rank_before": opt_rank(rank_before),
                "rank_after": opt_rank(rank_after),
            }),
            LearnEvent::HypothesisBuilt { states, rank } => serde_json::json!({
                "kind": "hypothesis",
                "states": states,
                "rank": opt_rank(rank),
            }),
            LearnEvent::CounterexampleProcessed {
                word,
                rank_before,
                rank_after,
            } => {
                serde_json::json!({
                    "kind": "counterexample",
                    "word": alphabet.format_word(word),
                    "rank_before": opt_rank(rank_before),
                    "rank_after": opt_rank(rank_after),
                })
            }
        })
        .collect();
    let ranks: Vec<serde_json::Value> = stats
        .events
        .iter()
        .filter_map(|event| match event {
            LearnEvent::HypothesisBuilt { rank, .. } => Some(opt_rank(rank)),
            _ => None,
        })
        .collect();
    let stats_json = serde_json::json!({
        "iterations": stats.iterations,
        "defects_fixed": stats.defects_fixed,
        "counterexamples": stats.counterexamples,
        "membership_queries": stats.membership_queries,
        "equivalence_queries": stats.equivalence_queries,
        "final_rows": stats.final_rows,
        "final_cols": stats.final_cols,
        "ranks": ranks,
        "events": events,
    });
    match result {
        LearnResult::Learned { hypothesis, .. } => serde_json::json!({
            "result": "learned",
            "stats": stats_json,
            "wfa": hypothesis.wfa.to_json(),
            "state_labels": hypothesis
                .state_labels
                .iter()
                .map(|w| alphabet.format_word(w))
                .collect::<Vec<_>>(),
        }),
        LearnResult::BudgetExhausted { rows, cols, .. } => serde_json::json!({
            "result": "budget_exhausted",
            "stats": stats_json,
            "wfa": serde_json::Value::Null,
            "rows": rows.iter().map(|w| alphabet.format_word(w)).collect::<Vec<_>>(),
            "cols": cols.iter().map(|w| alphabet.format_word(w)).collect::<Vec<_>>(),
        }),
    }
}

fn cmd_eval(path: &Path, word: &str) -> Result<i32, String> {
    let wfa = read_wfa(path)?;
    fn value_of<S: Semiring>(w: &Wfa<S>, text: &str) -> Result<S, String> {
        let word = w
            .alphabet()
            .word_from_str(text)
            .map_err(|e| e.to_string())?;
        Ok(w.evaluate(&word))
    }
    let rendered = match &wfa {
        AnyWfa::Rat(w) => value_of(w, word)?.to_string(),
        AnyWfa::Int(w) => value_of(w, word)?.to_string(),
        AnyWfa::Bool(w) => {
            if value_of(w, word)? {
                "1".to_string()
            } else {
                "0".to_string()
            }
        }
        AnyWfa::Nat(w) => value_of(w, word)?.to_string(),
    };
    println!("{rendered}");
    Ok(0)
}

fn cmd_equiv(left: &Path, right: &Path) -> Result<i32, String> {
    let a = read_wfa(left)?;
    let b = read_wfa(right)?;
    if a.tag() != b.tag() {
        return Err(format!("semiring mismatch: {} vs {}", a.tag(), b.tag()));
    }
    fn decide<S: LanguageEquiv + Display>(a: &Wfa<S>, b: &Wfa<S>) -> Result<i32, String> {
        match equiv(a, b).map_err(|e| e.to_string())? {
            EquivResult::Equivalent => {
                println!("equivalent");
                Ok(0)
            }
            EquivResult::Witness { word, lhs, rhs } => {
                println!(
                    "inequivalent: witness {} (left: {lhs}, right: {rhs})",
                    a.alphabet().format_word(&word)
                );
                Ok(1)
            }
        }
    }
    match (&a, &b) {
        (AnyWfa::Rat(x), AnyWfa::Rat(y)) => decide(x, y),
        (AnyWfa::Int(x), AnyWfa::Int(y)) => decide(x, y),
        (AnyWfa::Bool(x), AnyWfa::Bool(y)) => decide(x, y),
        (AnyWfa::Nat(x), AnyWfa::Nat(y)) => decide(x, y),
        _ => unreachable!("tags already compared"),
    }
}

fn cmd_snf(path: &Path) -> Result<i32, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("malformed JSON: {e}"))?;
    let rows = value
        .as_array()
        .ok_or_else(|| "expected a JSON array of arrays of integers".to_string())?;
    let mut matrix_rows: Vec<Vec<Int>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| format!("row {i} is not an array"))?;
        let entries: Result<Vec<Int>, String> = row
            .iter()
            .enumerate()
            .map(|(j, cell)| Int::from_json(cell).map_err(|m| format!("entry [{i}][{j}]: {m}")))
            .collect();
        matrix_rows.push(entries?);
    }
    if let Some(first) = matrix_rows.first() {
        let width = first.len();
        if matrix_rows.iter().any(|r| r.len() != width) {
            return Err("rows have differing lengths".to_string());
        }
    }
    let a = Matrix::from_rows(matrix_rows);
    let snf = smith_normal_form(&a);
    let to_json = |m: &Matrix<Int>| -> serde_json::Value {
        serde_json::Value::Array(
            (0..m.rows())
                .map(|i| serde_json::Value::Array(m.row(i).iter().map(Semiring::to_json).collect()))
                .collect(),
        )
    };
    let out = serde_json::json!({
        "u": to_json(&snf.u),
        "d": to_json(&snf.d),
        "v": to_json(&snf.v),
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&out).expect("serializable")
    );
    Ok(0)
}

/// Drive the learner over the naturals by hand so that every defect can be
/// printed along with its failed system and re-checked by the reverse
/// search. The target assigns 2^j − 1 to a^j; after the one counterexample
/// the loop keeps finding defects until the budget runs out.
fn cmd_demo_nat(steps: u64) -> Result<i32, String> {
    if steps < 1 {
        return Err("steps must be at least 1".to_string());
    }
    let n = |x: u64| Nat::from(x);
    let target = Wfa::new(
        Alphabet::of_chars("a"),
        vec![n(1), n(0)],
        vec![n(0), n(1)],
        vec![Matrix::from_rows(vec![vec![n(1), n(1)], vec![n(0), n(2)]])],
    )
    .expect("valid target");
    let mut teacher = SimulatedTeacher::new(target);
    let alphabet = teacher.alphabet().clone();
    let mut table: ObservationTable<Nat> = ObservationTable::new(alphabet.clone(), &mut teacher);
    let mut spent = 0u64;
    let mut seen_counterexample = false;

    println!("learner over nat, target a^j -> 2^j - 1, budget {steps}");
    loop {
        let witness = loop {
            match table.check_closedness() {
                ClosednessOutcome::Defect(word) => {
                    println!();
                    println!("closedness defect at {}", alphabet.format_word(&word));
                    let labels = table.row_labels().to_vec();
                    let columns: Vec<Vec<Nat>> = (0..labels.len()).map(|i| table.row(i)).collect();
                    for (label, column) in labels.iter().zip(&columns) {
                        println!(
                            "  row({}) = [{}]",
                            alphabet.format_word(label),
                            join_values(column)
                        );
                    }
                    let prefix = &word.letters()[..word.len() - 1];
                    let index = labels
                        .iter()
                        .position(|l| l.letters() == prefix)
                        .expect("defect extends a row label");
                    let rhs = table.srow(index, *word.letters().last().expect("nonempty"));
                    println!(
                        "  srow({}) = [{}]",
                        alphabet.format_word(&word),
                        join_values(&rhs)
                    );
                    let system = Matrix::from_columns(&columns);
                    match nat_solve_dfs(&system, &rhs) {
                        None => println!("  confirmed by the reverse search: no combination"),
                        Some(_) => {
                            return Err("reverse search found a combination; solver bug".into())
                        }
                    }
                    spent += 1;
                    if spent == steps {
                        println!();
                        println!("budget exhausted, table not closed");
                        return Ok(2);
                    }
                    table.add_row(word.clone(), &mut teacher).expect("new row");
                    println!("add row: {}", alphabet.format_word(&word));
                }
                ClosednessOutcome::Closed(witness) => {
                    if seen_counterexample {
                        return Err(
                            "table closed after the counterexample; this target never closes"
                                .into(),
                        );
                    }
                    break witness;
                }
            }
        };
        let hypothesis = build_hypothesis(&table, &witness);
        println!();
        println!("hypothesis with {} states", hypothesis.wfa.states());
        match teacher.equivalence(&hypothesis.wfa) {
            TeacherReply::Equivalent => {
                return Err("teacher accepted a hypothesis; this target is never learned".into())
            }
            TeacherReply::Counterexample {
                word,
                hypothesis_value,
                target_value,
            } => {
                println!(
                    "counterexample {} (hypothesis: {hypothesis_value}, target: {target_value})",
                    alphabet.format_word(&word)
                );
                spent += 1;
                if spent == steps {
                    println!();
                    println!("budget exhausted");
                    return Ok(2);
                }
                let added = table.add_suffix_columns(&word, &mut teacher);
                seen_counterexample = true;
                println!("add columns: {}", join_words(&alphabet, &added));
            }
        }
    }
}

fn join_values<S: Semiring>(values: &[S]) -> String {
    values
        .iter()
        .map(S::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_gen(
    semiring: &str,
    states: usize,
    alphabet: usize,
    density: f64,
    seed: u64,
    bound: u64,
    out: Option<&Path>,
) -> Result<i32, String> {
    if states < 1 {
        return Err("states must be at least 1".to_string());
    }
    if !(1..=26).contains(&alphabet) {
        return Err("alphabet size must be between 1 and 26".to_string());
    }
    if !(0.0..=1.0).contains(&density) {
        return Err("density must be within [0, 1]".to_string());
    }
    if bound < 1 {
        return Err("bound must be at least 1".to_string());
    }
    let wfa = AnyWfa::random(semiring, states, alphabet, bound, density, seed)
        .map_err(|e| e.to_string())?;
    let text = wfa.to_json_string() + "\n";
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(0)
}
