//! Exact language-equivalence decision procedures with shortest-witness
//! extraction.
//!
//! Over a field the check runs on the "difference" automaton: the disjoint
//! union of both automata started in configuration `(i_A, −i_B)` accepts the
//! pointwise difference of the two languages, so the languages are equal iff
//! every reachable configuration has output value zero. Configurations are
//! explored breadth-first in length-then-lexicographic word order while a
//! linearly independent spanning set is maintained; a configuration inside
//! the span of earlier ones contributes nothing new and is pruned. The
//! spanning set can grow at most `n_A + n_B` times, which bounds the search.
//!
//! Integer and natural automata are decided by lifting the embedding into
//! the rationals, which is injective and commutes with evaluation. Boolean
//! automata are NFAs and get a subset-construction product check instead.

use std::collections::{HashSet, VecDeque};

use crate::linalg::{dot, gaussian_solve, Matrix};
use crate::semiring::{Field, Ring, Semiring};
use crate::wfa::{Wfa, Word};
use crate::{Bool, Int, Nat, Rat};

/// The verdict of an equivalence check.
///
/// A witness is the length-then-lexicographically least word on which the
/// two languages differ, together with both values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivResult<S> {
    Equivalent,
    Witness { word: Word, lhs: S, rhs: S },
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EquivError {
    #[error("alphabet mismatch")]
    AlphabetMismatch,
}

fn in_span<F: Field>(basis: &[Vec<F>], v: &[F]) -> bool {
    if basis.is_empty() {
        return v.iter().all(Semiring::is_zero);
    }
    gaussian_solve(&Matrix::from_columns(basis), v).is_some()
}

/// Decide language equality of two automata over a field.
pub fn field_equiv<F: Field>(a: &Wfa<F>, b: &Wfa<F>) -> Result<EquivResult<F>, EquivError> {
    if a.alphabet() != b.alphabet() {
        return Err(EquivError::AlphabetMismatch);
    }
    let bound = a.states() + b.states();
    let initial: Vec<F> = a
        .initial()
        .iter()
        .cloned()
        .chain(b.initial().iter().map(Ring::neg))
        .collect();
    let output: Vec<F> = a.output().iter().chain(b.output()).cloned().collect();
    let step = |config: &[F], letter: usize| -> Vec<F> {
        let (ca, cb) = config.split_at(a.states());
        let mut next = a.transition(letter).vec_mat(ca);
        next.extend(b.transition(letter).vec_mat(cb));
        next
    };

    let mut basis: Vec<Vec<F>> = Vec::new();
    let mut queue = VecDeque::new();
    queue.push_back((Word::epsilon(), initial));
    while let Some((word, config)) = queue.pop_front() {
        if !dot(&config, &output).is_zero() {
            let lhs = a.evaluate(&word);
            let rhs = b.evaluate(&word);
            assert_ne!(lhs, rhs, "witness does not separate the automata");
            return Ok(EquivResult::Witness { word, lhs, rhs });
        }
        if in_span(&basis, &config) {
            continue;
        }
        for letter in 0..a.alphabet().len() {
            queue.push_back((word.extended(letter), step(&config, letter)));
        }
        basis.push(config);
        assert!(
            basis.len() <= bound,
            "spanning set exceeded the state bound"
        );
    }
    Ok(EquivResult::Equivalent)
}

/// Decide NFA language equality by an on-the-fly subset construction over
/// the pair of automata.
pub fn bool_equiv(a: &Wfa<Bool>, b: &Wfa<Bool>) -> Result<EquivResult<Bool>, EquivError> {
    if a.alphabet() != b.alphabet() {
        return Err(EquivError::AlphabetMismatch);
    }
    let accepts = |w: &Wfa<Bool>, subset: &[bool]| -> bool {
        subset
            .iter()
            .zip(w.output())
            .any(|(&reached, &out)| reached && out)
    };
    let successor = |w: &Wfa<Bool>, subset: &[bool], letter: usize| -> Vec<bool> {
        let m = w.transition(letter);
        (0..w.states())
            .map(|q2| (0..w.states()).any(|q| subset[q] && m[(q, q2)]))
            .collect()
    };

    let start = (a.initial().to_vec(), b.initial().to_vec());
    let mut visited: HashSet<(Vec<bool>, Vec<bool>)> = HashSet::new();
    let mut queue = VecDeque::new();
    queue.push_back((Word::epsilon(), start));
    while let Some((word, (pa, pb))) = queue.pop_front() {
        let (va, vb) = (accepts(a, &pa), accepts(b, &pb));
        if va != vb {
            return Ok(EquivResult::Witness {
                word,
                lhs: va,
                rhs: vb,
            });
        }
        if !visited.insert((pa.clone(), pb.clone())) {
            continue;
        }
        for letter in 0..a.alphabet().len() {
            queue.push_back((
                word.extended(letter),
                (successor(a, &pa, letter), successor(b, &pb, letter)),
            ));
        }
    }
    Ok(EquivResult::Equivalent)
}

/// Semirings whose WFA language equivalence is decidable here.
pub trait LanguageEquiv: Semiring + Sized {
    fn language_equiv(a: &Wfa<Self>, b: &Wfa<Self>) -> Result<EquivResult<Self>, EquivError>;
}

impl LanguageEquiv for Rat {
    fn language_equiv(a: &Wfa<Self>, b: &Wfa<Self>) -> Result<EquivResult<Self>, EquivError> {
        field_equiv(a, b)
    }
}

fn equiv_via_rationals<S>(a: &Wfa<S>, b: &Wfa<S>) -> Result<EquivResult<S>, EquivError>
where
    S: crate::semiring::IntoRational,
{
    match field_equiv(&a.embed(), &b.embed())? {
        EquivResult::Equivalent => Ok(EquivResult::Equivalent),
        EquivResult::Witness { word, .. } => {
            let lhs = a.evaluate(&word);
            let rhs = b.evaluate(&word);
            assert_ne!(lhs, rhs, "witness does not separate the automata");
            Ok(EquivResult::Witness { word, lhs, rhs })
        }
    }
}

impl LanguageEquiv for Int {
    fn language_equiv(a: &Wfa<Self>, b: &Wfa<Self>) -> Result<EquivResult<Self>, EquivError> {
        equiv_via_rationals(a, b)
    }
}

impl LanguageEquiv for Nat {
    fn language_equiv(a: &Wfa<Self>, b: &Wfa<Self>) -> Result<EquivResult<Self>, EquivError> {
        equiv_via_rationals(a, b)
    }
}

impl LanguageEquiv for Bool {
    fn language_equiv(a: &Wfa<Self>, b: &Wfa<Self>) -> Result<EquivResult<Self>, EquivError> {
        bool_equiv(a, b)
    }
}

/// Decide language equality of two automata over the same semiring.
pub fn equiv<S: LanguageEquiv>(a: &Wfa<S>, b: &Wfa<S>) -> Result<EquivResult<S>, EquivError> {
    S::language_equiv(a, b)
}
