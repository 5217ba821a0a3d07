//! The semiring interface hierarchy and the four shipped weight domains.
//!
//! Everything downstream (matrices, automata, the observation table, the
//! learner) is generic over [`Semiring`]. The refinements [`Ring`], [`Field`]
//! and [`Pid`] expose the extra structure the linear solvers need, and
//! [`FiniteCarrier`] marks semirings whose carrier can be enumerated.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::{Bool, Int, Nat, Rat};

/// Which linear-system solver backs the closedness strategy of a semiring.
///
/// Each semiring declares exactly one default backend; the observation table
/// dispatches through [`crate::linalg::LinearSolve`], this tag is for
/// reporting and diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    /// Gaussian elimination over a field.
    FieldGaussian,
    /// Smith-normal-form solving over a principal ideal domain.
    PidSmith,
    /// Bounded search over the naturals.
    NatBounded,
    /// Exhaustive enumeration over a finite carrier.
    FiniteExhaustive,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::FieldGaussian => "gaussian",
            SolverKind::PidSmith => "smith",
            SolverKind::NatBounded => "bounded",
            SolverKind::FiniteExhaustive => "exhaustive",
        }
    }
}

/// A commutative semiring with exact, decidable equality.
///
/// Laws (checked by [`check_semiring_axioms`] on any sample set):
/// addition is associative and commutative with identity `zero`;
/// multiplication is associative with identity `one` and distributes over
/// addition on both sides; `zero` annihilates multiplication.
pub trait Semiring: Clone + PartialEq + Eq + std::fmt::Debug + std::fmt::Display + 'static {
    /// Tag used in files and on the command line: `"rat"`, `"int"`, `"bool"`, `"nat"`.
    const TAG: &'static str;

    /// The default closedness-strategy backend for this semiring.
    const SOLVER: SolverKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    /// Serialize one weight into the JSON value format of this semiring.
    fn to_json(&self) -> serde_json::Value;

    /// Parse one weight from its JSON value format. The error is a bare
    /// message; callers prepend the field path.
    fn from_json(value: &serde_json::Value) -> Result<Self, String>;

    /// Draw a weight with magnitude governed by `bound` (which must be at
    /// least 1). With `nonzero` the result is never `zero`; transition
    /// weights use this so that "present with probability density" is
    /// meaningful.
    fn random<R: Rng + ?Sized>(rng: &mut R, bound: u64, nonzero: bool) -> Self;
}

/// A semiring with additive inverses.
pub trait Ring: Semiring {
    fn neg(&self) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// A ring in which every nonzero element has a multiplicative inverse.
pub trait Field: Ring {
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
}

/// A principal ideal domain with computable Euclidean division.
///
/// `divmod(a, b)` returns `(q, r)` with `a = q·b + r` and the Euclidean size
/// of `r` strictly below that of `b` (for the integers: `|r| < |b|`).
/// `gcd_bezout` also returns the Bézout witnesses.
pub trait Pid: Ring {
    /// Quotient and remainder; `b` must be nonzero.
    fn divmod(&self, b: &Self) -> (Self, Self);

    /// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)`.
    fn gcd_bezout(a: &Self, b: &Self) -> (Self, Self, Self);

    /// Compare Euclidean sizes (for the integers: absolute values). Used to
    /// pick minimal pivots during Smith-normal-form reduction.
    fn cmp_size(&self, other: &Self) -> std::cmp::Ordering;

    /// `(c, u)` with `c = self · u`, `u` a unit and `c` the canonical
    /// associate (for the integers: `c = |self|`, `u = ±1`).
    fn canonical_assoc(&self) -> (Self, Self);
}

/// A semiring whose whole carrier can be listed, in its canonical order.
pub trait FiniteCarrier: Semiring {
    fn carrier() -> Vec<Self>;
}

/// Semirings that embed into the rationals by an injective homomorphism.
pub trait IntoRational: Semiring {
    fn to_rational(&self) -> Rat;
}

/// Injective semiring homomorphism into the rationals.
pub fn embed_to_rationals<S: IntoRational>(x: &S) -> Rat {
    x.to_rational()
}

fn json_unsigned(value: &serde_json::Value, what: &str) -> Result<Nat, String> {
    match value {
        serde_json::Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                Ok(Nat::from(u))
            } else if n.as_i64().is_some() {
                Err(format!("negative value under \"{what}\""))
            } else {
                Err(format!("expected a {what} weight, found {value}"))
            }
        }
        serde_json::Value::String(s) => {
            let s = s.trim();
            if s.starts_with('-') {
                Err(format!("negative value under \"{what}\""))
            } else {
                s.parse::<Nat>()
                    .map_err(|_| format!("expected a {what} weight, found {value}"))
            }
        }
        _ => Err(format!("expected a {what} weight, found {value}")),
    }
}

fn json_signed(value: &serde_json::Value) -> Result<Int, String> {
    match value {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Int::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Int::from(u))
            } else {
                Err(format!("expected an int weight, found {value}"))
            }
        }
        serde_json::Value::String(s) => s
            .trim()
            .parse::<Int>()
            .map_err(|_| format!("expected an int weight, found {value}")),
        _ => Err(format!("expected an int weight, found {value}")),
    }
}

fn int_to_json(x: &Int) -> serde_json::Value {
    if let Some(i) = x.to_i64() {
        serde_json::Value::from(i)
    } else {
        serde_json::Value::from(x.to_string())
    }
}

impl Semiring for Rat {
    const TAG: &'static str = "rat";
    const SOLVER: SolverKind = SolverKind::FieldGaussian;

    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn to_json(&self) -> serde_json::Value {
        // Always "p/q" in lowest terms; `Ratio` keeps the denominator positive.
        serde_json::Value::from(format!("{}/{}", self.numer(), self.denom()))
    }

    fn from_json(value: &serde_json::Value) -> Result<Self, String> {
        match value {
            serde_json::Value::Number(_) => Ok(Rat::from_integer(json_signed(value)?)),
            serde_json::Value::String(s) => {
                let s = s.trim();
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let num = num
                    .trim()
                    .parse::<Int>()
                    .map_err(|_| format!("expected a rat weight, found {value}"))?;
                let den = den
                    .trim()
                    .parse::<Int>()
                    .map_err(|_| format!("expected a rat weight, found {value}"))?;
                if Zero::is_zero(&den) {
                    return Err("zero denominator".to_string());
                }
                Ok(Rat::new(num, den))
            }
            _ => Err(format!("expected a rat weight, found {value}")),
        }
    }

    fn random<R: Rng + ?Sized>(rng: &mut R, bound: u64, nonzero: bool) -> Self {
        let b = bound.max(1) as i64;
        let den = Int::from(rng.gen_range(1..=b));
        loop {
            let num = Int::from(rng.gen_range(-b..=b));
            if nonzero && Zero::is_zero(&num) {
                continue;
            }
            return Rat::new(num, den);
        }
    }
}

impl Ring for Rat {
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for Rat {
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
}

impl IntoRational for Rat {
    fn to_rational(&self) -> Rat {
        self.clone()
    }
}

impl Semiring for Int {
    const TAG: &'static str = "int";
    const SOLVER: SolverKind = SolverKind::PidSmith;

    fn zero() -> Self {
        <Int as Zero>::zero()
    }
    fn one() -> Self {
        <Int as One>::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn to_json(&self) -> serde_json::Value {
        int_to_json(self)
    }

    fn from_json(value: &serde_json::Value) -> Result<Self, String> {
        json_signed(value)
    }

    fn random<R: Rng + ?Sized>(rng: &mut R, bound: u64, nonzero: bool) -> Self {
        let b = bound.max(1) as i64;
        loop {
            let x = rng.gen_range(-b..=b);
            if nonzero && x == 0 {
                continue;
            }
            return Int::from(x);
        }
    }
}

impl Ring for Int {
    fn neg(&self) -> Self {
        -self
    }
}

impl Pid for Int {
    fn divmod(&self, b: &Self) -> (Self, Self) {
        assert!(!Zero::is_zero(b), "division by zero");
        self.div_rem(b)
    }

    fn gcd_bezout(a: &Self, b: &Self) -> (Self, Self, Self) {
        let e = a.extended_gcd(b);
        (e.gcd, e.x, e.y)
    }

    fn cmp_size(&self, other: &Self) -> std::cmp::Ordering {
        self.magnitude().cmp(other.magnitude())
    }

    fn canonical_assoc(&self) -> (Self, Self) {
        if self.is_negative() {
            (-self, Int::from(-1))
        } else {
            (self.clone(), Int::from(1))
        }
    }
}

impl IntoRational for Int {
    fn to_rational(&self) -> Rat {
        Rat::from_integer(self.clone())
    }
}

impl Semiring for Nat {
    const TAG: &'static str = "nat";
    const SOLVER: SolverKind = SolverKind::NatBounded;

    fn zero() -> Self {
        <Nat as Zero>::zero()
    }
    fn one() -> Self {
        <Nat as One>::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn to_json(&self) -> serde_json::Value {
        if let Some(u) = self.to_u64() {
            serde_json::Value::from(u)
        } else {
            serde_json::Value::from(self.to_string())
        }
    }

    fn from_json(value: &serde_json::Value) -> Result<Self, String> {
        json_unsigned(value, "nat")
    }

    fn random<R: Rng + ?Sized>(rng: &mut R, bound: u64, nonzero: bool) -> Self {
        let lo = if nonzero { 1 } else { 0 };
        Nat::from(rng.gen_range(lo..=bound.max(1)))
    }
}

impl IntoRational for Nat {
    fn to_rational(&self) -> Rat {
        Rat::from_integer(Int::from(self.clone()))
    }
}

impl Semiring for Bool {
    const TAG: &'static str = "bool";
    const SOLVER: SolverKind = SolverKind::FiniteExhaustive;

    fn zero() -> Self {
        false
    }
    fn one() -> Self {
        true
    }
    fn add(&self, other: &Self) -> Self {
        *self || *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }
    fn is_zero(&self) -> bool {
        !*self
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(if *self { 1 } else { 0 })
    }

    fn from_json(value: &serde_json::Value) -> Result<Self, String> {
        match value.as_u64() {
            Some(0) => Ok(false),
            Some(1) => Ok(true),
            _ => Err(format!("expected a bool weight (0 or 1), found {value}")),
        }
    }

    fn random<R: Rng + ?Sized>(rng: &mut R, _bound: u64, nonzero: bool) -> Self {
        if nonzero {
            true
        } else {
            rng.gen()
        }
    }
}

impl FiniteCarrier for Bool {
    fn carrier() -> Vec<Self> {
        vec![false, true]
    }
}

/// Outcome of an axiom check: the first violated law, or a pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomOutcome {
    Pass,
    Fail {
        law: &'static str,
        /// Index of the offending sample triple.
        sample: usize,
    },
}

impl AxiomOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomOutcome::Pass)
    }
}

macro_rules! law {
    ($name:literal, $idx:expr, $cond:expr) => {
        if !$cond {
            return AxiomOutcome::Fail {
                law: $name,
                sample: $idx,
            };
        }
    };
}

/// Check the semiring laws on every given sample triple. Samples must be
/// nonempty. Reports the first violated law.
pub fn check_semiring_axioms<S: Semiring>(samples: &[(S, S, S)]) -> AxiomOutcome {
    assert!(!samples.is_empty(), "axiom check needs at least one sample");
    let zero = S::zero();
    let one = S::one();
    for (i, (a, b, c)) in samples.iter().enumerate() {
        law!("add associativity", i, a.add(b).add(c) == a.add(&b.add(c)));
        law!("add commutativity", i, a.add(b) == b.add(a));
        law!("add identity", i, a.add(&zero) == *a);
        law!("mul associativity", i, a.mul(b).mul(c) == a.mul(&b.mul(c)));
        law!("mul identity", i, a.mul(&one) == *a && one.mul(a) == *a);
        law!(
            "left distributivity",
            i,
            a.mul(&b.add(c)) == a.mul(b).add(&a.mul(c))
        );
        law!(
            "right distributivity",
            i,
            a.add(b).mul(c) == a.mul(c).add(&b.mul(c))
        );
        law!(
            "zero annihilates",
            i,
            a.mul(&zero).is_zero() && zero.mul(a).is_zero()
        );
    }
    AxiomOutcome::Pass
}

/// Semiring laws plus additive inverses.
pub fn check_ring_axioms<R: Ring>(samples: &[(R, R, R)]) -> AxiomOutcome {
    let semi = check_semiring_axioms(samples);
    if !semi.passed() {
        return semi;
    }
    for (i, (a, _, _)) in samples.iter().enumerate() {
        law!("add inverse", i, a.add(&a.neg()).is_zero());
    }
    AxiomOutcome::Pass
}

/// Ring laws plus multiplicative inverses of nonzero elements.
pub fn check_field_axioms<F: Field>(samples: &[(F, F, F)]) -> AxiomOutcome {
    let ring = check_ring_axioms(samples);
    if !ring.passed() {
        return ring;
    }
    let one = F::one();
    for (i, (a, _, _)) in samples.iter().enumerate() {
        if !a.is_zero() {
            law!("mul inverse", i, a.mul(&a.inv()) == one);
        }
    }
    AxiomOutcome::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn samples<S: Semiring>(n: usize, seed: u64, bound: u64) -> Vec<(S, S, S)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                (
                    S::random(&mut rng, bound, false),
                    S::random(&mut rng, bound, false),
                    S::random(&mut rng, bound, false),
                )
            })
            .collect()
    }

    #[test]
    fn axioms_hold_on_random_samples() {
        assert!(check_field_axioms::<Rat>(&samples(1000, 1, 30)).passed());
        assert!(check_ring_axioms::<Int>(&samples(1000, 2, 30)).passed());
        assert!(check_semiring_axioms::<Nat>(&samples(1000, 3, 30)).passed());
        assert!(check_semiring_axioms::<Bool>(&samples(1000, 4, 1)).passed());
    }

    #[test]
    fn axioms_hold_on_small_cases() {
        let ints = vec![(Int::from(2), Int::from(3), Int::from(5))];
        assert!(check_ring_axioms(&ints).passed());

        let mut bools = Vec::new();
        for a in [false, true] {
            for b in [false, true] {
                for c in [false, true] {
                    bools.push((a, b, c));
                }
            }
        }
        assert!(check_semiring_axioms(&bools).passed());
    }

    /// A deliberately broken wrapper over the naturals: 1 + 1 = 0.
    #[derive(Clone, PartialEq, Eq, Debug)]
    struct BrokenNat(Nat);

    impl std::fmt::Display for BrokenNat {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            write!(f, "{}", self.0)
        }
    }

    impl Semiring for BrokenNat {
        const TAG: &'static str = "nat";
        const SOLVER: SolverKind = SolverKind::NatBounded;
        fn zero() -> Self {
            BrokenNat(Semiring::zero())
        }
        fn one() -> Self {
            BrokenNat(Semiring::one())
        }
        fn add(&self, other: &Self) -> Self {
            let one: Nat = Semiring::one();
            if self.0 == one && other.0 == one {
                Self::zero()
            } else {
                BrokenNat(self.0.add(&other.0))
            }
        }
        fn mul(&self, other: &Self) -> Self {
            BrokenNat(self.0.mul(&other.0))
        }
        fn to_json(&self) -> serde_json::Value {
            self.0.to_json()
        }
        fn from_json(value: &serde_json::Value) -> Result<Self, String> {
            Nat::from_json(value).map(BrokenNat)
        }
        fn random<R: Rng + ?Sized>(rng: &mut R, bound: u64, nonzero: bool) -> Self {
            BrokenNat(Nat::random(rng, bound, nonzero))
        }
    }

    #[test]
    fn broken_instance_fails_at_addition_laws() {
        // (1+1)+2 = 0+2 = 2 but 1+(1+2) = 1+3 = 4
        let two = BrokenNat(Nat::from(2u32));
        let t = vec![(BrokenNat::one(), BrokenNat::one(), two)];
        match check_semiring_axioms(&t) {
            AxiomOutcome::Fail { law, sample } => {
                assert_eq!(law, "add associativity");
                assert_eq!(sample, 0);
            }
            AxiomOutcome::Pass => panic!("broken instance passed"),
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = Int::random(&mut rng, 1000, false);
            let b = Int::random(&mut rng, 1000, false);
            assert_eq!(
                embed_to_rationals(&a.add(&b)),
                embed_to_rationals(&a).add(&embed_to_rationals(&b))
            );
            assert_eq!(
                embed_to_rationals(&a.mul(&b)),
                embed_to_rationals(&a).mul(&embed_to_rationals(&b))
            );
            let na = Nat::random(&mut rng, 1000, false);
            let nb = Nat::random(&mut rng, 1000, false);
            assert_eq!(
                embed_to_rationals(&na.add(&nb)),
                embed_to_rationals(&na).add(&embed_to_rationals(&nb))
            );
            assert_eq!(
                embed_to_rationals(&na.mul(&nb)),
                embed_to_rationals(&na).mul(&embed_to_rationals(&nb))
            );
        }
        let rat = |x: i64| Rat::from_integer(Int::from(x));
        assert_eq!(embed_to_rationals(&Int::from(0)), rat(0));
        assert_eq!(embed_to_rationals(&Int::from(1)), rat(1));
        assert_eq!(embed_to_rationals(&Nat::from(0u32)), rat(0));
        assert_eq!(embed_to_rationals(&Nat::from(1u32)), rat(1));
    }

    #[test]
    fn embedding_canonical_values() {
        assert_eq!(
            Int::from(-2).to_rational(),
            Rat::new(Int::from(-2), Int::from(1))
        );
        assert_eq!(
            Int::from(7).to_rational(),
            Rat::new(Int::from(7), Int::from(1))
        );
        assert_eq!(
            Nat::from(0u32).to_rational(),
            Rat::from_integer(Int::from(0))
        );
    }

    #[test]
    fn rational_arithmetic_is_canonical() {
        // a/b + c/d reduced to lowest terms with positive denominator.
        let half = Rat::new(Int::from(1), Int::from(2));
        let sum = half.add(&half);
        assert_eq!(sum, Rat::from_integer(Int::from(1)));
        assert_eq!(sum.denom(), &Int::from(1));

        let x = Rat::new(Int::from(2), Int::from(-4));
        assert_eq!(x.numer(), &Int::from(-1));
        assert_eq!(x.denom(), &Int::from(2));
    }

    #[test]
    fn json_value_formats() {
        let r = Rat::new(Int::from(-2), Int::from(3));
        assert_eq!(r.to_json(), serde_json::json!("-2/3"));
        assert_eq!(Rat::from_json(&serde_json::json!("-2/3")).unwrap(), r);
        assert_eq!(
            Rat::from_json(&serde_json::json!(5)).unwrap(),
            Rat::from_integer(Int::from(5))
        );
        assert!(Rat::from_json(&serde_json::json!("1/0")).is_err());

        assert_eq!(Int::from(-7).to_json(), serde_json::json!(-7));
        let big: Int = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(Int::from_json(&big.to_json()).unwrap(), big);

        assert!(Nat::from_json(&serde_json::json!(-2)).is_err());
        assert!(Nat::from_json(&serde_json::json!("-2"))
            .unwrap_err()
            .contains("negative value under \"nat\""));
        assert_eq!(
            Nat::from_json(&serde_json::json!(9)).unwrap(),
            Nat::from(9u32)
        );

        assert_eq!(true.to_json(), serde_json::json!(1));
        assert!(Bool::from_json(&serde_json::json!(2)).is_err());
    }
}
