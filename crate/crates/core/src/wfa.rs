//! Weighted finite automata: the model, its evaluation semantics, JSON
//! serialization, random generation and semiring embedding.
//!
//! A WFA is stored in matrix form: an initial weight vector, an output
//! weight vector, and one `n×n` transition matrix per alphabet symbol with
//! `M_a[q][q']` the weight of the `a`-step from `q` to `q'`. The weight of a
//! word is `i·M_{a₁}·…·M_{a_k}·o`, computed left to right as configuration
//! updates.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{dot, Matrix};
use crate::semiring::{IntoRational, Semiring};
use crate::{Bool, Int, Nat, Rat};

/// Errors from constructing, parsing or converting automata.
#[derive(Debug, thiserror::Error)]
pub enum WfaError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("unknown symbol {symbol:?}")]
    UnknownSymbol { symbol: String },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> WfaError {
    WfaError::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

/// An ordered, duplicate-free set of symbols. Words store symbol indices;
/// symbols themselves only matter at the file and CLI boundary.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new(symbols: Vec<String>) -> Result<Self, WfaError> {
        if symbols.is_empty() {
            return Err(invalid("alphabet", "must not be empty"));
        }
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() {
                return Err(invalid(format!("alphabet[{i}]"), "empty symbol"));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(invalid(
                    format!("alphabet[{i}]"),
                    format!("duplicate symbol {s:?}"),
                ));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    /// Alphabet of single-character symbols, e.g. `Alphabet::of_chars("ab")`.
    pub fn of_chars(chars: &str) -> Self {
        Alphabet::new(chars.chars().map(String::from).collect()).expect("valid alphabet")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, letter: usize) -> &str {
        &self.symbols[letter]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    /// Parse a word. Symbols may be separated by spaces or commas; when every
    /// symbol is a single character, a plain string like `"aab"` works too.
    pub fn word_from_str(&self, text: &str) -> Result<Word, WfaError> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::epsilon());
        }
        let tokens: Vec<&str> = if text.contains([' ', ',']) {
            text.split([' ', ',']).filter(|t| !t.is_empty()).collect()
        } else if self.symbols.iter().all(|s| s.chars().count() == 1) {
            return text
                .chars()
                .map(|c| {
                    self.index_of(&c.to_string())
                        .ok_or_else(|| WfaError::UnknownSymbol {
                            symbol: c.to_string(),
                        })
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Word::from);
        } else {
            vec![text]
        };
        tokens
            .into_iter()
            .map(|t| {
                self.index_of(t).ok_or_else(|| WfaError::UnknownSymbol {
                    symbol: t.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word::from)
    }

    /// Render a word; the empty word prints as `ε`.
    pub fn format_word(&self, word: &Word) -> String {
        if word.is_empty() {
            "ε".to_string()
        } else {
            word.letters().iter().map(|&l| self.symbol(l)).collect()
        }
    }
}

/// A word as a sequence of letter indices into some [`Alphabet`].
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn epsilon() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// The word with one letter appended.
    pub fn extended(&self, letter: usize) -> Word {
        let mut letters = self.0.clone();
        letters.push(letter);
        Word(letters)
    }

    /// All suffixes in increasing length order, from `ε` up to the word itself.
    pub fn suffixes(&self) -> Vec<Word> {
        (0..=self.0.len())
            .rev()
            .map(|start| Word(self.0[start..].to_vec()))
            .collect()
    }

    /// Length-then-lexicographic order, the canonical word order throughout.
    pub fn length_lex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl From<Vec<usize>> for Word {
    fn from(letters: Vec<usize>) -> Self {
        Word(letters)
    }
}

/// A weighted finite automaton over the semiring `S`.
///
/// `n = 0` is legal and accepts the language that assigns zero to every word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Wfa<S> {
    alphabet: Alphabet,
    initial: Vec<S>,
    output: Vec<S>,
    transitions: Vec<Matrix<S>>,
}

impl<S: Semiring> Wfa<S> {
    pub fn new(
        alphabet: Alphabet,
        initial: Vec<S>,
        output: Vec<S>,
        transitions: Vec<Matrix<S>>,
    ) -> Result<Self, WfaError> {
        let n = initial.len();
        if output.len() != n {
            return Err(invalid(
                "output",
                format!("expected {n} entries, found {}", output.len()),
            ));
        }
        if transitions.len() != alphabet.len() {
            return Err(invalid(
                "transitions",
                format!(
                    "expected {} matrices, found {}",
                    alphabet.len(),
                    transitions.len()
                ),
            ));
        }
        for (a, m) in transitions.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(invalid(
                    format!("transitions.{}", alphabet.symbol(a)),
                    format!("expected a {n}×{n} matrix, found {}×{}", m.rows(), m.cols()),
                ));
            }
        }
        Ok(Wfa {
            alphabet,
            initial,
            output,
            transitions,
        })
    }

    pub fn states(&self) -> usize {
        self.initial.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> &[S] {
        &self.initial
    }

    pub fn output(&self) -> &[S] {
        &self.output
    }

    pub fn transition(&self, letter: usize) -> &Matrix<S> {
        &self.transitions[letter]
    }

    /// The configuration reached after reading `word`: the initial vector
    /// pushed through one transition matrix per letter.
    pub fn reach_config(&self, word: &Word) -> Vec<S> {
        let mut config = self.initial.clone();
        for &letter in word.letters() {
            config = self.transitions[letter].vec_mat(&config);
        }
        config
    }

    /// The weight `config · M_{a₁} · … · M_{a_k} · o` of reading `word` from
    /// an arbitrary configuration.
    pub fn obs_value(&self, config: &[S], word: &Word) -> S {
        assert_eq!(config.len(), self.states(), "configuration length mismatch");
        let mut config = config.to_vec();
        for &letter in word.letters() {
            config = self.transitions[letter].vec_mat(&config);
        }
        dot(&config, &self.output)
    }

    /// The weight this automaton assigns to `word`.
    pub fn evaluate(&self, word: &Word) -> S {
        self.obs_value(&self.initial.clone(), word)
    }

    /// Entrywise change of weights. The mapping must be a semiring
    /// homomorphism for the result to accept the mapped language.
    pub fn map_weights<T: Semiring>(&self, f: impl Fn(&S) -> T) -> Wfa<T> {
        Wfa {
            alphabet: self.alphabet.clone(),
            initial: self.initial.iter().map(&f).collect(),
            output: self.output.iter().map(&f).collect(),
            transitions: self.transitions.iter().map(|m| m.map(&f)).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut transitions = serde_json::Map::new();
        for (a, m) in self.transitions.iter().enumerate() {
            let rows: Vec<serde_json::Value> = (0..m.rows())
                .map(|i| serde_json::Value::Array(m.row(i).iter().map(Semiring::to_json).collect()))
                .collect();
            transitions.insert(
                self.alphabet.symbol(a).to_string(),
                serde_json::Value::Array(rows),
            );
        }
        serde_json::json!({
            "semiring": S::TAG,
            "alphabet": self.alphabet.symbols(),
            "states": self.states(),
            "initial": self.initial.iter().map(Semiring::to_json).collect::<Vec<_>>(),
            "output": self.output.iter().map(Semiring::to_json).collect::<Vec<_>>(),
            "transitions": serde_json::Value::Object(transitions),
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, WfaError> {
        let obj = value
            .as_object()
            .ok_or_else(|| invalid("$", "expected a JSON object"))?;
        let tag = obj
            .get("semiring")
            .and_then(|v| v.as_str())
            .ok_or_else(|| invalid("semiring", "missing or not a string"))?;
        if tag != S::TAG {
            return Err(invalid(
                "semiring",
                format!("expected \"{}\", found \"{tag}\"", S::TAG),
            ));
        }
        let alphabet = parse_alphabet(obj)?;
        let n = obj
            .get("states")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| invalid("states", "missing or not a nonnegative integer"))?
            as usize;
        let initial = parse_weight_vector::<S>(obj, "initial", n)?;
        let output = parse_weight_vector::<S>(obj, "output", n)?;
        let trans_obj = obj
            .get("transitions")
            .and_then(|v| v.as_object())
            .ok_or_else(|| invalid("transitions", "missing or not an object"))?;
        for key in trans_obj.keys() {
            if alphabet.index_of(key).is_none() {
                return Err(invalid(
                    format!("transitions.{key}"),
                    "symbol not in the alphabet",
                ));
            }
        }
        let mut transitions = Vec::with_capacity(alphabet.len());
        for a in 0..alphabet.len() {
            let symbol = alphabet.symbol(a).to_string();
            let path = format!("transitions.{symbol}");
            let rows = trans_obj
                .get(&symbol)
                .and_then(|v| v.as_array())
                .ok_or_else(|| invalid(&path, "missing or not an array"))?;
            if rows.len() != n {
                return Err(invalid(
                    &path,
                    format!("expected {n} rows, found {}", rows.len()),
                ));
            }
            let mut m = Matrix::zero(n, n);
            for (i, row) in rows.iter().enumerate() {
                let row = row
                    .as_array()
                    .ok_or_else(|| invalid(format!("{path}[{i}]"), "not an array"))?;
                if row.len() != n {
                    return Err(invalid(
                        format!("{path}[{i}]"),
                        format!("expected {n} entries, found {}", row.len()),
                    ));
                }
                for (j, cell) in row.iter().enumerate() {
                    m[(i, j)] = S::from_json(cell)
                        .map_err(|msg| invalid(format!("{path}[{i}][{j}]"), msg))?;
                }
            }
            transitions.push(m);
        }
        Wfa::new(alphabet, initial, output, transitions)
    }

    pub fn parse(text: &str) -> Result<Self, WfaError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        Wfa::from_json(&value)
    }

    /// Draw a random automaton, deterministic in `seed`. Each potential
    /// transition is present with probability `density` and carries a
    /// nonzero weight bounded by `weight_bound`; initial and output entries
    /// are unconstrained draws from the same bound.
    pub fn random(
        states: usize,
        alphabet_size: usize,
        weight_bound: u64,
        density: f64,
        seed: u64,
    ) -> Self {
        assert!(states >= 1, "need at least one state");
        assert!(
            (1..=26).contains(&alphabet_size),
            "alphabet size out of range"
        );
        assert!(
            (0.0..=1.0).contains(&density),
            "density must be within [0, 1]"
        );
        assert!(weight_bound >= 1, "weight bound must be at least 1");
        let symbols: String = ('a'..='z').take(alphabet_size).collect();
        let alphabet = Alphabet::of_chars(&symbols);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let initial: Vec<S> = (0..states)
            .map(|_| S::random(&mut rng, weight_bound, false))
            .collect();
        let output: Vec<S> = (0..states)
            .map(|_| S::random(&mut rng, weight_bound, false))
            .collect();
        let transitions: Vec<Matrix<S>> = (0..alphabet_size)
            .map(|_| {
                Matrix::with_size(states, states, |_, _| {
                    if rng.gen_bool(density) {
                        S::random(&mut rng, weight_bound, true)
                    } else {
                        S::zero()
                    }
                })
            })
            .collect();
        Wfa {
            alphabet,
            initial,
            output,
            transitions,
        }
    }
}

impl<S: IntoRational> Wfa<S> {
    /// Lift the semiring embedding into the rationals to the whole
    /// automaton; evaluation commutes with the embedding.
    pub fn embed(&self) -> Wfa<Rat> {
        self.map_weights(IntoRational::to_rational)
    }
}

fn parse_alphabet(obj: &serde_json::Map<String, serde_json::Value>) -> Result<Alphabet, WfaError> {
    let symbols = obj
        .get("alphabet")
        .and_then(|v| v.as_array())
        .ok_or_else(|| invalid("alphabet", "missing or not an array"))?;
    let symbols: Result<Vec<String>, WfaError> = symbols
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_str()
                .map(String::from)
                .ok_or_else(|| invalid(format!("alphabet[{i}]"), "not a string"))
        })
        .collect();
    Alphabet::new(symbols?)
}

fn parse_weight_vector<S: Semiring>(
    obj: &serde_json::Map<String, serde_json::Value>,
    key: &str,
    n: usize,
) -> Result<Vec<S>, WfaError> {
    let arr = obj
        .get(key)
        .and_then(|v| v.as_array())
        .ok_or_else(|| invalid(key, "missing or not an array"))?;
    if arr.len() != n {
        return Err(invalid(
            key,
            format!("expected {n} entries, found {}", arr.len()),
        ));
    }
    arr.iter()
        .enumerate()
        .map(|(i, v)| S::from_json(v).map_err(|msg| invalid(format!("{key}[{i}]"), msg)))
        .collect()
}

/// A parsed automaton of any shipped semiring, for the file and CLI layer
/// where the weight domain is only known at run time.
#[derive(Clone, Debug)]
pub enum AnyWfa {
    Rat(Wfa<Rat>),
    Int(Wfa<Int>),
    Bool(Wfa<Bool>),
    Nat(Wfa<Nat>),
}

impl AnyWfa {
    pub fn parse(text: &str) -> Result<Self, WfaError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let tag = value
            .get("semiring")
            .and_then(|v| v.as_str())
            .ok_or_else(|| invalid("semiring", "missing or not a string"))?;
        match tag {
            "rat" => Wfa::from_json(&value).map(AnyWfa::Rat),
            "int" => Wfa::from_json(&value).map(AnyWfa::Int),
            "bool" => Wfa::from_json(&value).map(AnyWfa::Bool),
            "nat" => Wfa::from_json(&value).map(AnyWfa::Nat),
            other => Err(invalid(
                "semiring",
                format!("unknown semiring tag \"{other}\""),
            )),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            AnyWfa::Rat(_) => Rat::TAG,
            AnyWfa::Int(_) => Int::TAG,
            AnyWfa::Bool(_) => Bool::TAG,
            AnyWfa::Nat(_) => Nat::TAG,
        }
    }

    pub fn states(&self) -> usize {
        match self {
            AnyWfa::Rat(w) => w.states(),
            AnyWfa::Int(w) => w.states(),
            AnyWfa::Bool(w) => w.states(),
            AnyWfa::Nat(w) => w.states(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            AnyWfa::Rat(w) => w.alphabet(),
            AnyWfa::Int(w) => w.alphabet(),
            AnyWfa::Bool(w) => w.alphabet(),
            AnyWfa::Nat(w) => w.alphabet(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            AnyWfa::Rat(w) => w.to_json(),
            AnyWfa::Int(w) => w.to_json(),
            AnyWfa::Bool(w) => w.to_json(),
            AnyWfa::Nat(w) => w.to_json(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    /// Reinterpret the automaton over another semiring. Conversions are
    /// exact: they go through the rationals and fail on any weight that the
    /// target cannot represent.
    pub fn convert(&self, tag: &str) -> Result<AnyWfa, WfaError> {
        use num_traits::Signed;
        let as_rat: Wfa<Rat> = match self {
            AnyWfa::Rat(w) => w.clone(),
            AnyWfa::Int(w) => w.embed(),
            AnyWfa::Nat(w) => w.embed(),
            AnyWfa::Bool(w) => w.map_weights(|b| {
                if *b {
                    Semiring::one()
                } else {
                    Semiring::zero()
                }
            }),
        };
        fn map_exact<T: Semiring>(
            w: &Wfa<Rat>,
            f: impl Fn(&Rat) -> Result<T, String>,
        ) -> Result<Wfa<T>, WfaError> {
            let conv = |v: &[Rat], path: &str| -> Result<Vec<T>, WfaError> {
                v.iter()
                    .enumerate()
                    .map(|(i, x)| f(x).map_err(|m| invalid(format!("{path}[{i}]"), m)))
                    .collect()
            };
            let initial = conv(&w.initial, "initial")?;
            let output = conv(&w.output, "output")?;
            let mut transitions = Vec::with_capacity(w.transitions.len());
            for (a, m) in w.transitions.iter().enumerate() {
                let mut out = Matrix::zero(m.rows(), m.cols());
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        out[(i, j)] = f(&m[(i, j)]).map_err(|msg| {
                            invalid(
                                format!("transitions.{}[{i}][{j}]", w.alphabet.symbol(a)),
                                msg,
                            )
                        })?;
                    }
                }
                transitions.push(out);
            }
            Ok(Wfa {
                alphabet: w.alphabet.clone(),
                initial,
                output,
                transitions,
            })
        }
        match tag {
            "rat" => Ok(AnyWfa::Rat(as_rat)),
            "int" => map_exact(&as_rat, |x| {
                if x.is_integer() {
                    Ok(x.to_integer())
                } else {
                    Err(format!("{x} is not an integer"))
                }
            })
            .map(AnyWfa::Int),
            "nat" => map_exact(&as_rat, |x| {
                if x.is_integer() && !x.is_negative() {
                    Ok(x.to_integer().to_biguint().expect("nonnegative"))
                } else {
                    Err(format!("negative value under \"nat\": {x}"))
                }
            })
            .map(AnyWfa::Nat),
            "bool" => map_exact(&as_rat, |x| {
                if Semiring::is_zero(x) {
                    Ok(false)
                } else if *x == Rat::from_integer(Int::from(1)) {
                    Ok(true)
                } else {
                    Err(format!("{x} is not a bool weight"))
                }
            })
            .map(AnyWfa::Bool),
            other => Err(invalid(
                "semiring",
                format!("unknown semiring tag \"{other}\""),
            )),
        }
    }

    pub fn random(
        tag: &str,
        states: usize,
        alphabet_size: usize,
        weight_bound: u64,
        density: f64,
        seed: u64,
    ) -> Result<AnyWfa, WfaError> {
        Ok(match tag {
            "rat" => AnyWfa::Rat(Wfa::random(
                states,
                alphabet_size,
                weight_bound,
                density,
                seed,
            )),
            "int" => AnyWfa::Int(Wfa::random(
                states,
                alphabet_size,
                weight_bound,
                density,
                seed,
            )),
            "bool" => AnyWfa::Bool(Wfa::random(
                states,
                alphabet_size,
                weight_bound,
                density,
                seed,
            )),
            "nat" => AnyWfa::Nat(Wfa::random(
                states,
                alphabet_size,
                weight_bound,
                density,
                seed,
            )),
            other => {
                return Err(invalid(
                    "semiring",
                    format!("unknown semiring tag \"{other}\""),
                ))
            }
        })
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::{pow2_minus_one_nat, two_state_rat};
    use super::*;

    fn rat(x: i64) -> Rat {
        Rat::from_integer(Int::from(x))
    }

    fn rats(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    fn word(alphabet: &Alphabet, text: &str) -> Word {
        alphabet.word_from_str(text).unwrap()
    }

    #[test]
    fn evaluate_two_state_example() {
        let w = two_state_rat();
        let a = w.alphabet().clone();
        assert_eq!(w.evaluate(&word(&a, "aaa")), rat(23));
        assert_eq!(w.evaluate(&word(&a, "")), rat(2));
    }

    #[test]
    fn evaluate_doubling_language() {
        let w = pow2_minus_one_nat();
        let a = w.alphabet().clone();
        for j in 0..=6u32 {
            let text = "a".repeat(j as usize);
            assert_eq!(w.evaluate(&word(&a, &text)), Nat::from(2u64.pow(j) - 1));
        }
    }

    #[test]
    fn reach_configurations() {
        let w = two_state_rat();
        let a = w.alphabet().clone();
        assert_eq!(w.reach_config(&word(&a, "")), rats(&[1, 0]));
        assert_eq!(w.reach_config(&word(&a, "aa")), rats(&[1, 3]));
        assert_eq!(w.reach_config(&word(&a, "aaa")), rats(&[1, 7]));
    }

    #[test]
    fn obs_values_from_unit_configurations() {
        let w = pow2_minus_one_nat();
        let a = w.alphabet().clone();
        let unit0 = vec![Nat::from(1u32), Nat::from(0u32)];
        let unit1 = vec![Nat::from(0u32), Nat::from(1u32)];
        let zero = vec![Nat::from(0u32), Nat::from(0u32)];
        for j in 0..=6u32 {
            let text = "a".repeat(j as usize);
            let u = word(&a, &text);
            assert_eq!(w.obs_value(&unit1, &u), Nat::from(2u64.pow(j)));
            assert_eq!(w.obs_value(&unit0, &u), Nat::from(2u64.pow(j) - 1));
            assert_eq!(w.obs_value(&zero, &u), Nat::from(0u32));
        }
    }

    #[test]
    fn obs_value_is_linear() {
        let w = two_state_rat();
        let a = w.alphabet().clone();
        let c1 = rats(&[2, 5]);
        let c2 = rats(&[-1, 3]);
        let sum: Vec<Rat> = c1.iter().zip(&c2).map(|(x, y)| x.add(y)).collect();
        for text in ["", "a", "aa", "aaaa"] {
            let u = word(&a, text);
            assert_eq!(
                w.obs_value(&sum, &u),
                w.obs_value(&c1, &u).add(&w.obs_value(&c2, &u))
            );
        }
    }

    #[test]
    fn json_round_trip() {
        let w = pow2_minus_one_nat();
        let text = w.to_json_string();
        let parsed = Wfa::<Nat>::parse(&text).unwrap();
        assert_eq!(parsed, w);
        // round trip is the identity modulo whitespace
        let reserialized: serde_json::Value =
            serde_json::from_str(&parsed.to_json_string()).unwrap();
        let original: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(reserialized, original);
    }

    #[test]
    fn parse_rejects_negative_nat() {
        let text = r#"{
            "semiring": "nat", "alphabet": ["a"], "states": 1,
            "initial": [1], "output": [-2],
            "transitions": {"a": [[1]]}
        }"#;
        let err = Wfa::<Nat>::parse(text).unwrap_err().to_string();
        assert!(err.contains("output[0]"), "{err}");
        assert!(err.contains("negative value under \"nat\""), "{err}");
    }

    #[test]
    fn parse_rejects_dimension_mismatch() {
        let text = r#"{
            "semiring": "nat", "alphabet": ["a"], "states": 2,
            "initial": [1, 0, 0], "output": [0, 1],
            "transitions": {"a": [[1, 1], [0, 2]]}
        }"#;
        let err = Wfa::<Nat>::parse(text).unwrap_err().to_string();
        assert!(err.contains("initial"), "{err}");
        assert!(err.contains("expected 2 entries, found 3"), "{err}");
    }

    #[test]
    fn random_is_deterministic_in_the_seed() {
        let w1 = Wfa::<Int>::random(3, 2, 5, 0.6, 42);
        let w2 = Wfa::<Int>::random(3, 2, 5, 0.6, 42);
        assert_eq!(w1, w2);
        let w3 = Wfa::<Int>::random(3, 2, 5, 0.6, 43);
        assert_ne!(w1, w3);
    }

    #[test]
    fn random_density_extremes() {
        let w = Wfa::<Int>::random(3, 2, 5, 0.0, 1);
        for a in 0..2 {
            assert!(w.transition(a).is_zero());
        }
        let w = Wfa::<Bool>::random(2, 2, 1, 1.0, 1);
        for a in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    assert!(w.transition(a)[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn embedding_commutes_with_evaluation() {
        let w = pow2_minus_one_nat();
        let a = w.alphabet().clone();
        let e = w.embed();
        assert_eq!(e.states(), w.states());
        assert_eq!(e.alphabet(), w.alphabet());
        assert_eq!(e.evaluate(&word(&a, "aaa")), rat(7));
        for j in 0..=8usize {
            let u = word(&a, &"a".repeat(j));
            assert_eq!(e.evaluate(&u), w.evaluate(&u).to_rational());
        }

        let zero = Wfa::<Nat>::new(
            a.clone(),
            vec![Nat::from(0u32); 2],
            vec![Nat::from(0u32); 2],
            vec![Matrix::zero(2, 2)],
        )
        .unwrap();
        let embedded = zero.embed();
        assert!(embedded.initial().iter().all(Semiring::is_zero));
        assert!(embedded.output().iter().all(Semiring::is_zero));
        assert!(embedded.transition(0).is_zero());
    }

    #[test]
    fn any_wfa_conversions() {
        let nat = AnyWfa::Nat(pow2_minus_one_nat());
        let int = nat.convert("int").unwrap();
        assert_eq!(int.tag(), "int");
        let back = int.convert("nat").unwrap();
        assert_eq!(back.to_json(), nat.to_json());

        let rat = AnyWfa::Rat(two_state_rat());
        assert!(rat.convert("nat").is_ok()); // weights 0,1,2,3 are natural
        assert!(rat.convert("bool").is_err()); // weight 2 is not boolean
        assert!(rat.convert("frac").is_err());
    }

    #[test]
    fn length_lex_order() {
        let ab = Alphabet::of_chars("ab");
        let mut words: Vec<Word> = ["ba", "b", "aa", "", "ab", "a"]
            .iter()
            .map(|t| word(&ab, t))
            .collect();
        words.sort_by(|x, y| x.length_lex_cmp(y));
        let sorted: Vec<String> = words.iter().map(|w| ab.format_word(w)).collect();
        assert_eq!(sorted, vec!["ε", "a", "b", "aa", "ab", "ba"]);
    }

    #[test]
    fn suffixes_in_increasing_length_order() {
        let ab = Alphabet::of_chars("ab");
        let w = word(&ab, "ba");
        let suf: Vec<String> = w.suffixes().iter().map(|s| ab.format_word(s)).collect();
        assert_eq!(suf, vec!["ε", "a", "ba"]);
        assert_eq!(Word::epsilon().suffixes(), vec![Word::epsilon()]);
    }
}
