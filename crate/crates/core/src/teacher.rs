//! The oracle side of learning: membership and equivalence queries answered
//! from a hidden target automaton.
//!
//! The learner only ever sees the [`Teacher`] trait, never the target; a
//! remote teacher can implement the same interface. The simulated teacher
//! answers equivalence queries exactly, with the shortest counterexample in
//! length-then-lexicographic order by default. The adversarial variant
//! instead extends that witness by a random suffix when the extension still
//! separates the automata; learners must cope with any valid counterexample,
//! and tests use this variant to make sure of it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equiv::{equiv, EquivResult, LanguageEquiv};
use crate::semiring::Semiring;
use crate::table::MembershipOracle;
use crate::wfa::{Alphabet, Wfa, Word};

/// Answer to an equivalence query. A counterexample carries both values so
/// the learner never needs side queries to report them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TeacherReply<S> {
    Equivalent,
    Counterexample {
        word: Word,
        hypothesis_value: S,
        target_value: S,
    },
}

/// The query interface between learner and teacher.
pub trait Teacher<S: Semiring>: MembershipOracle<S> {
    fn alphabet(&self) -> &Alphabet;
    fn equivalence(&mut self, hypothesis: &Wfa<S>) -> TeacherReply<S>;
}

enum CounterexampleStyle {
    Shortest,
    Adversarial {
        rng: Box<ChaCha8Rng>,
        attempts: usize,
        max_extension: usize,
    },
}

/// A teacher backed by a target automaton it never reveals.
pub struct SimulatedTeacher<S> {
    target: Wfa<S>,
    style: CounterexampleStyle,
    membership_count: u64,
    equivalence_count: u64,
    word_log: Option<Vec<Word>>,
}

impl<S: Semiring> SimulatedTeacher<S> {
    /// Teacher that replies with the shortest counterexample; runs against
    /// it are deterministic.
    pub fn new(target: Wfa<S>) -> Self {
        SimulatedTeacher {
            target,
            style: CounterexampleStyle::Shortest,
            membership_count: 0,
            equivalence_count: 0,
            word_log: None,
        }
    }

    /// Teacher that pads counterexamples with a random suffix whenever the
    /// padded word still separates hypothesis and target.
    pub fn adversarial(target: Wfa<S>, seed: u64) -> Self {
        SimulatedTeacher {
            target,
            style: CounterexampleStyle::Adversarial {
                rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
                attempts: 8,
                max_extension: 4,
            },
            membership_count: 0,
            equivalence_count: 0,
            word_log: None,
        }
    }

    /// Record every queried word, not just the counts.
    pub fn with_word_log(mut self) -> Self {
        self.word_log = Some(Vec::new());
        self
    }

    pub fn target(&self) -> &Wfa<S> {
        &self.target
    }

    pub fn membership_queries(&self) -> u64 {
        self.membership_count
    }

    pub fn equivalence_queries(&self) -> u64 {
        self.equivalence_count
    }

    pub fn word_log(&self) -> Option<&[Word]> {
        self.word_log.as_deref()
    }
}

impl<S: Semiring> MembershipOracle<S> for SimulatedTeacher<S> {
    fn membership(&mut self, word: &Word) -> S {
        self.membership_count += 1;
        if let Some(log) = &mut self.word_log {
            log.push(word.clone());
        }
        self.target.evaluate(word)
    }
}

impl<S: LanguageEquiv> Teacher<S> for SimulatedTeacher<S> {
    fn alphabet(&self) -> &Alphabet {
        self.target.alphabet()
    }

    fn equivalence(&mut self, hypothesis: &Wfa<S>) -> TeacherReply<S> {
        assert_eq!(
            hypothesis.alphabet(),
            self.target.alphabet(),
            "alphabet mismatch between hypothesis and target"
        );
        self.equivalence_count += 1;
        let verdict = equiv(&self.target, hypothesis).expect("alphabets match");
        let (mut word, mut target_value, mut hypothesis_value) = match verdict {
            EquivResult::Equivalent => return TeacherReply::Equivalent,
            EquivResult::Witness { word, lhs, rhs } => (word, lhs, rhs),
        };
        if let CounterexampleStyle::Adversarial {
            rng,
            attempts,
            max_extension,
        } = &mut self.style
        {
            let letters = self.target.alphabet().len();
            for _ in 0..*attempts {
                let len = rng.gen_range(1..=*max_extension);
                let mut padded = word.clone();
                for _ in 0..len {
                    padded = padded.extended(rng.gen_range(0..letters));
                }
                let tv = self.target.evaluate(&padded);
                let hv = hypothesis.evaluate(&padded);
                if tv != hv {
                    word = padded;
                    target_value = tv;
                    hypothesis_value = hv;
                    break;
                }
            }
        }
        // the contract the learner relies on
        assert_ne!(
            self.target.evaluate(&word),
            hypothesis.evaluate(&word),
            "counterexample does not separate hypothesis and target"
        );
        TeacherReply::Counterexample {
            word,
            hypothesis_value,
            target_value,
        }
    }
}
