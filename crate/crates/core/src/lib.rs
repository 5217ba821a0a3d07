//! Active learning of weighted finite automata (WFAs) with exact arithmetic.
//!
//! The library implements an observation-table learner that is generic over
//! the weight semiring. A learner instance needs two things from its semiring:
//! exact arithmetic and a way to solve finite linear systems `A·x = b` (the
//! closedness check of the table is exactly such a system). Four weight
//! domains ship out of the box, each with its own solver backend:
//!
//! * [`Rat`] — arbitrary-precision rationals, solved by Gaussian elimination;
//! * [`Int`] — arbitrary-precision integers, solved through the Smith normal form;
//! * [`Bool`] — the Boolean semiring (WFAs are then plain NFAs), solved by
//!   exhaustive enumeration of the finite carrier;
//! * [`Nat`] — arbitrary-precision naturals, solved by a bounded search.
//!
//! Learning over [`Rat`], [`Int`] and [`Bool`] terminates on every language
//! accepted by a WFA over the same semiring. Over [`Nat`] this fails: the
//! learner can chase closedness defects forever, which is why
//! [`learner::learn`] takes a step budget and reports exhaustion as a regular
//! outcome rather than an error. See `wfa-learn-cli` for a runnable
//! demonstration.
//!
//! All arithmetic is arbitrary precision; there is no floating point anywhere.
//! Equality of weights is exact and decidable, which the termination
//! behaviour of the learner depends on.

pub mod equiv;
pub mod learner;
pub mod linalg;
pub mod semiring;
pub mod table;
pub mod teacher;
pub mod wfa;

/// Arbitrary-precision rational numbers, kept in lowest terms with a
/// positive denominator, so equality is structural.
pub type Rat = num_rational::BigRational;

/// Arbitrary-precision integers.
pub type Int = num_bigint::BigInt;

/// Arbitrary-precision natural numbers. A separate type from [`Int`], so
/// negative coefficients cannot leak into computations over the naturals.
pub type Nat = num_bigint::BigUint;

/// The Boolean semiring: addition is `or`, multiplication is `and`.
pub type Bool = bool;

pub use equiv::{bool_equiv, equiv, field_equiv, EquivError, EquivResult, LanguageEquiv};
pub use learner::{build_hypothesis, learn, Hypothesis, LearnEvent, LearnResult, LearnerStats};
pub use linalg::{
    finite_solve, gaussian_solve, hermite_normal_form, nat_solve, nat_solve_dfs, pid_solve,
    rank_over_field, rank_over_pid, smith_normal_form, LinearSolve, Matrix, SmithDecomposition,
};
pub use semiring::{
    check_field_axioms, check_ring_axioms, check_semiring_axioms, embed_to_rationals, AxiomOutcome,
    Field, FiniteCarrier, IntoRational, Pid, Ring, Semiring, SolverKind,
};
pub use table::{ClosedWitness, ClosednessOutcome, MembershipOracle, ObservationTable, TableError};
pub use teacher::{SimulatedTeacher, Teacher, TeacherReply};
pub use wfa::{Alphabet, AnyWfa, Wfa, WfaError, Word};
