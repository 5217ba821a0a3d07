//! The main learning loop: close the table, build a hypothesis, ask the
//! teacher, process counterexamples.
//!
//! Each closedness-defect fix and each counterexample costs one budget unit.
//! The budget is spent *before* the step runs and the loop stops the moment
//! it is used up, so a run with budget `k` performs at most `k − 1` steps.
//! Exhaustion is a regular outcome, not an error: over the naturals the
//! loop can chase defects forever, and the budget is what turns that into
//! an observable result.

use crate::equiv::LanguageEquiv;
use crate::linalg::{LinearSolve, Matrix};
use crate::semiring::Semiring;
use crate::table::{ClosedWitness, ClosednessOutcome, ObservationTable};
use crate::teacher::{Teacher, TeacherReply};
use crate::wfa::{Alphabet, Wfa, Word};

/// A hypothesis automaton whose states are the current row labels.
#[derive(Clone, Debug)]
pub struct Hypothesis<S> {
    pub wfa: Wfa<S>,
    pub state_labels: Vec<Word>,
}

/// One observable step of a run, with the table rank around it when the
/// semiring has a rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LearnEvent {
    DefectFix {
        word: Word,
        rank_before: Option<usize>,
        rank_after: Option<usize>,
    },
    HypothesisBuilt {
        states: usize,
        rank: Option<usize>,
    },
    CounterexampleProcessed {
        word: Word,
        rank_before: Option<usize>,
        rank_after: Option<usize>,
    },
}

/// Counters of a finished or exhausted run. `iterations` counts consumed
/// budget units.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LearnerStats {
    pub iterations: u64,
    pub defects_fixed: u64,
    pub counterexamples: u64,
    pub membership_queries: u64,
    pub equivalence_queries: u64,
    pub final_rows: usize,
    pub final_cols: usize,
    pub events: Vec<LearnEvent>,
}

#[derive(Clone, Debug)]
pub enum LearnResult<S> {
    Learned {
        hypothesis: Hypothesis<S>,
        stats: LearnerStats,
    },
    BudgetExhausted {
        stats: LearnerStats,
        rows: Vec<Word>,
        cols: Vec<Word>,
    },
}

impl<S> LearnResult<S> {
    pub fn stats(&self) -> &LearnerStats {
        match self {
            LearnResult::Learned { stats, .. } => stats,
            LearnResult::BudgetExhausted { stats, .. } => stats,
        }
    }

    pub fn hypothesis(&self) -> Option<&Hypothesis<S>> {
        match self {
            LearnResult::Learned { hypothesis, .. } => Some(hypothesis),
            LearnResult::BudgetExhausted { .. } => None,
        }
    }
}

/// Build the hypothesis automaton from a closed table: states are the row
/// labels, the initial vector is the unit at `ε`, outputs are the `ε`-column
/// values, and the transition row of `(s, a)` is the closedness combination
/// of `s·a`.
pub fn build_hypothesis<S: Semiring>(
    table: &ObservationTable<S>,
    witness: &ClosedWitness<S>,
) -> Hypothesis<S> {
    let labels = table.row_labels().to_vec();
    let n = labels.len();
    let alphabet = table.alphabet().clone();
    assert!(labels[0].is_empty(), "first row label must be ε");
    let initial: Vec<S> = (0..n)
        .map(|i| if i == 0 { S::one() } else { S::zero() })
        .collect();
    let output: Vec<S> = (0..n).map(|i| table.row(i)[0].clone()).collect();
    let transitions: Vec<Matrix<S>> = (0..alphabet.len())
        .map(|letter| Matrix::with_size(n, n, |s, s2| witness.combos[s][letter][s2].clone()))
        .collect();
    let wfa = Wfa::new(alphabet, initial, output, transitions)
        .expect("hypothesis dimensions are consistent by construction");
    Hypothesis {
        wfa,
        state_labels: labels,
    }
}

fn format_combo<S: Semiring>(alphabet: &Alphabet, rows: &[Word], combo: &[S]) -> String {
    let one = S::one();
    let mut terms: Vec<String> = Vec::new();
    for (label, coeff) in rows.iter().zip(combo) {
        if coeff.is_zero() {
            continue;
        }
        let row = format!("row({})", alphabet.format_word(label));
        terms.push(if *coeff == one {
            row
        } else {
            format!("{coeff}·{row}")
        });
    }
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, term) in terms.iter().enumerate() {
        if i == 0 {
            out.push_str(term);
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(term);
        }
    }
    out
}

/// Run the learning loop against a teacher.
///
/// `budget` must be at least 1. `trace` receives human-readable chunks (one
/// logical line each, possibly spanning several text lines) and is
/// byte-stable for a fixed teacher.
pub fn learn<S, T>(
    teacher: &mut T,
    budget: u64,
    mut trace: Option<&mut dyn FnMut(&str)>,
) -> LearnResult<S>
where
    S: LinearSolve + LanguageEquiv,
    T: Teacher<S>,
{
    assert!(budget >= 1, "budget must be at least 1");
    let alphabet = teacher.alphabet().clone();

    macro_rules! emit {
        ($($arg:tt)*) => {
            if let Some(sink) = trace.as_mut() {
                sink(&format!($($arg)*));
            }
        };
    }

    emit!(
        "learning over {}: alphabet {{{}}}, budget {}, {} solver",
        S::TAG,
        alphabet.symbols().join(", "),
        budget,
        S::SOLVER.name()
    );

    let mut table = ObservationTable::new(alphabet.clone(), teacher);
    let mut events: Vec<LearnEvent> = Vec::new();
    let mut spent = 0u64;
    let mut defects_fixed = 0u64;
    let mut counterexamples = 0u64;
    let mut equivalence_queries = 0u64;
    let mut hypotheses = 0u64;

    macro_rules! stats {
        () => {
            LearnerStats {
                iterations: spent,
                defects_fixed,
                counterexamples,
                membership_queries: table.membership_queries(),
                equivalence_queries,
                final_rows: table.row_labels().len(),
                final_cols: table.col_labels().len(),
                events,
            }
        };
    }

    loop {
        // inner loop: fix closedness defects one row at a time
        let witness = loop {
            emit!("");
            emit!("observation table");
            emit!("{}", table.render());
            match table.check_closedness() {
                ClosednessOutcome::Defect(word) => {
                    emit!("closedness defect at {}", alphabet.format_word(&word));
                    let rank_before = table.rank();
                    spent += 1;
                    if spent == budget {
                        emit!("budget exhausted");
                        let rows = table.row_labels().to_vec();
                        let cols = table.col_labels().to_vec();
                        return LearnResult::BudgetExhausted {
                            stats: stats!(),
                            rows,
                            cols,
                        };
                    }
                    table
                        .add_row(word.clone(), teacher)
                        .expect("a defect word is never an existing row");
                    defects_fixed += 1;
                    emit!("add row: {}", alphabet.format_word(&word));
                    let rank_after = table.rank();
                    events.push(LearnEvent::DefectFix {
                        word,
                        rank_before,
                        rank_after,
                    });
                }
                ClosednessOutcome::Closed(witness) => break witness,
            }
        };

        emit!("table closed");
        if trace.is_some() {
            for (i, s) in table.row_labels().iter().enumerate() {
                for letter in 0..alphabet.len() {
                    emit!(
                        "  cs({}) = {}",
                        alphabet.format_word(&s.extended(letter)),
                        format_combo(&alphabet, table.row_labels(), &witness.combos[i][letter])
                    );
                }
            }
        }

        let hypothesis = build_hypothesis(&table, &witness);
        hypotheses += 1;
        events.push(LearnEvent::HypothesisBuilt {
            states: hypothesis.wfa.states(),
            rank: table.rank(),
        });
        emit!(
            "hypothesis {}: {} states ({})",
            hypotheses,
            hypothesis.wfa.states(),
            hypothesis
                .state_labels
                .iter()
                .map(|w| alphabet.format_word(w))
                .collect::<Vec<_>>()
                .join(", ")
        );

        equivalence_queries += 1;
        match teacher.equivalence(&hypothesis.wfa) {
            TeacherReply::Equivalent => {
                emit!("equivalence query {}: equivalent", equivalence_queries);
                emit!("");
                emit!("learned a {}-state automaton", hypothesis.wfa.states());
                emit!("membership queries: {}", table.membership_queries());
                emit!("equivalence queries: {}", equivalence_queries);
                emit!("defects fixed: {}", defects_fixed);
                emit!("counterexamples processed: {}", counterexamples);
                return LearnResult::Learned {
                    hypothesis,
                    stats: stats!(),
                };
            }
            TeacherReply::Counterexample {
                word,
                hypothesis_value,
                target_value,
            } => {
                emit!(
                    "equivalence query {}: counterexample {} (hypothesis: {}, target: {})",
                    equivalence_queries,
                    alphabet.format_word(&word),
                    hypothesis_value,
                    target_value
                );
                let rank_before = table.rank();
                spent += 1;
                if spent == budget {
                    emit!("budget exhausted");
                    let rows = table.row_labels().to_vec();
                    let cols = table.col_labels().to_vec();
                    return LearnResult::BudgetExhausted {
                        stats: stats!(),
                        rows,
                        cols,
                    };
                }
                let added = table.add_suffix_columns(&word, teacher);
                debug_assert!(
                    !added.is_empty(),
                    "a valid counterexample adds a new column"
                );
                counterexamples += 1;
                emit!(
                    "add columns: {}",
                    added
                        .iter()
                        .map(|w| alphabet.format_word(w))
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                let rank_after = table.rank();
                events.push(LearnEvent::CounterexampleProcessed {
                    word,
                    rank_before,
                    rank_after,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::ClosednessOutcome;
    use crate::teacher::SimulatedTeacher;
    use crate::wfa::fixtures::{hypothesis_one_rat, hypothesis_two_rat, pow2_minus_one_nat};
    use crate::{equiv, EquivResult, Int, Nat, Rat};

    fn close(table: &ObservationTable<Rat>) -> ClosedWitness<Rat> {
        match table.check_closedness() {
            ClosednessOutcome::Closed(w) => w,
            ClosednessOutcome::Defect(t) => panic!("table not closed, defect at {t:?}"),
        }
    }

    #[test]
    fn first_closed_table_yields_the_first_hypothesis() {
        let target = pow2_minus_one_nat().embed();
        let mut oracle = |w: &Word| target.evaluate(w);
        let alphabet = target.alphabet().clone();
        let mut table = ObservationTable::new(alphabet.clone(), &mut oracle);
        table
            .add_row(alphabet.word_from_str("a").unwrap(), &mut oracle)
            .unwrap();
        let hyp = build_hypothesis(&table, &close(&table));
        assert_eq!(hyp.wfa, hypothesis_one_rat());
    }

    #[test]
    fn extended_table_yields_the_second_hypothesis() {
        let target = pow2_minus_one_nat().embed();
        let mut oracle = |w: &Word| target.evaluate(w);
        let alphabet = target.alphabet().clone();
        let mut table = ObservationTable::new(alphabet.clone(), &mut oracle);
        table
            .add_row(alphabet.word_from_str("a").unwrap(), &mut oracle)
            .unwrap();
        table.add_suffix_columns(&alphabet.word_from_str("aaa").unwrap(), &mut oracle);
        let hyp = build_hypothesis(&table, &close(&table));
        assert_eq!(hyp.wfa, hypothesis_two_rat());
    }

    #[test]
    fn zero_language_hypothesis() {
        let mut oracle = |_: &Word| Rat::from_integer(Int::from(0));
        let table = ObservationTable::new(crate::Alphabet::of_chars("a"), &mut oracle);
        let hyp = build_hypothesis(&table, &close(&table));
        assert_eq!(hyp.wfa.states(), 1);
        assert!(hyp.wfa.output()[0].is_zero());
        assert!(hyp.wfa.transition(0).is_zero());
    }

    #[test]
    fn learns_the_doubling_language_over_the_rationals() {
        let mut teacher = SimulatedTeacher::new(pow2_minus_one_nat().embed());
        let result = learn(&mut teacher, 500, None);
        let LearnResult::Learned { hypothesis, stats } = result else {
            panic!("expected a learned automaton");
        };
        assert_eq!(hypothesis.wfa, hypothesis_two_rat());
        assert_eq!(stats.defects_fixed, 1);
        assert_eq!(stats.counterexamples, 1);
        assert_eq!(stats.equivalence_queries, 2);
        assert_eq!(stats.final_rows, 2);
        assert_eq!(stats.final_cols, 4);
        assert_eq!(stats.membership_queries, 6);
        assert_eq!(stats.membership_queries, teacher.membership_queries());
        assert_eq!(stats.equivalence_queries, teacher.equivalence_queries());
        assert_eq!(
            equiv(&hypothesis.wfa, teacher.target()).unwrap(),
            EquivResult::Equivalent
        );
    }

    #[test]
    fn integer_run_mirrors_the_rational_run() {
        let int_target = match crate::AnyWfa::Nat(pow2_minus_one_nat())
            .convert("int")
            .unwrap()
        {
            crate::AnyWfa::Int(w) => w,
            _ => unreachable!(),
        };
        let mut teacher = SimulatedTeacher::new(int_target.clone());
        let result = learn(&mut teacher, 500, None);
        let LearnResult::Learned { hypothesis, stats } = result else {
            panic!("expected a learned automaton");
        };
        assert_eq!(stats.defects_fixed, 1);
        assert_eq!(stats.counterexamples, 1);
        assert_eq!(stats.equivalence_queries, 2);
        assert_eq!(
            equiv(&hypothesis.wfa, &int_target).unwrap(),
            EquivResult::Equivalent
        );
    }

    #[test]
    fn natural_run_succeeds_when_the_table_closes() {
        // L(a^j) = 2^j is recognized over the naturals and its tables close
        let one_state = Wfa::new(
            crate::Alphabet::of_chars("a"),
            vec![Nat::from(1u32)],
            vec![Nat::from(1u32)],
            vec![crate::Matrix::from_rows(vec![vec![Nat::from(2u32)]])],
        )
        .unwrap();
        let mut teacher = SimulatedTeacher::new(one_state.clone());
        match learn::<Nat, _>(&mut teacher, 500, None) {
            LearnResult::Learned { hypothesis, stats } => {
                assert_eq!(
                    equiv(&hypothesis.wfa, &one_state).unwrap(),
                    EquivResult::Equivalent
                );
                assert_eq!(stats.counterexamples, 0);
            }
            LearnResult::BudgetExhausted { .. } => panic!("this table closes immediately"),
        }
    }

    #[test]
    fn natural_run_exhausts_its_budget() {
        for budget in 5..=12u64 {
            let mut teacher = SimulatedTeacher::new(pow2_minus_one_nat());
            let result: LearnResult<Nat> = learn(&mut teacher, budget, None);
            let LearnResult::BudgetExhausted { stats, rows, .. } = result else {
                panic!("the run over the naturals must not converge");
            };
            assert_eq!(rows.len() as u64, budget - 1, "budget {budget}");
            let alphabet = teacher.alphabet();
            for (j, row) in rows.iter().enumerate() {
                assert_eq!(row.len(), j, "row {j} must be a^{j}");
                assert!(row.letters().iter().all(|&l| l == 0));
                let _ = alphabet;
            }
            assert_eq!(stats.counterexamples, 1);
            assert_eq!(stats.defects_fixed, budget - 2);
        }
    }

    #[test]
    fn trace_is_byte_stable() {
        let run = || {
            let mut teacher = SimulatedTeacher::new(pow2_minus_one_nat().embed());
            let mut buffer = String::new();
            let mut sink = |chunk: &str| {
                buffer.push_str(chunk);
                buffer.push('\n');
            };
            learn(&mut teacher, 500, Some(&mut sink));
            buffer
        };
        let first = run();
        assert_eq!(first, run());
        assert!(first.contains("closedness defect at a"));
        assert!(first.contains("cs(aa) = 3·row(a)"));
        assert!(first.contains("counterexample aaa (hypothesis: 9, target: 7)"));
        assert!(first.contains("cs(aa) = -2·row(ε) + 3·row(a)"));
        assert!(first.contains("learned a 2-state automaton"));
    }

    #[test]
    fn combo_formatting() {
        let alphabet = crate::Alphabet::of_chars("a");
        let rows = vec![Word::epsilon(), alphabet.word_from_str("a").unwrap()];
        let rat = |x: i64| Rat::from_integer(Int::from(x));
        assert_eq!(
            format_combo(&alphabet, &rows, &[rat(0), rat(3)]),
            "3·row(a)"
        );
        assert_eq!(
            format_combo(&alphabet, &rows, &[rat(-2), rat(3)]),
            "-2·row(ε) + 3·row(a)"
        );
        assert_eq!(
            format_combo(&alphabet, &rows, &[rat(3), rat(-2)]),
            "3·row(ε) - 2·row(a)"
        );
        assert_eq!(format_combo(&alphabet, &rows, &[rat(0), rat(0)]), "0");
        assert_eq!(format_combo(&alphabet, &rows, &[rat(1), rat(0)]), "row(ε)");
    }
}
