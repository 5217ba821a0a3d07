//! The observation table: row labels `S`, column labels `E`, memoized access
//! to a membership oracle, the solver-backed closedness check and the
//! rank-based progress measure.
//!
//! The cell at `(s, e)` holds the target language's value on the
//! concatenation `s·e`. The cache is keyed by raw words, so two label pairs
//! whose concatenations collide cost a single query. `ε` is a member of both
//! label sets at all times, `S` keeps insertion order with `ε` first, and
//! `E` stores suffixes in increasing length order; defects are reported in
//! `S`-order × alphabet-order. These orders make entire learner runs
//! reproducible byte for byte.

use std::collections::{HashMap, HashSet};

use crate::linalg::{LinearSolve, Matrix};
use crate::semiring::Semiring;
use crate::wfa::{Alphabet, Word};

/// Answers membership queries: the value of the target language on a word.
pub trait MembershipOracle<S> {
    fn membership(&mut self, word: &Word) -> S;
}

impl<S, F: FnMut(&Word) -> S> MembershipOracle<S> for F {
    fn membership(&mut self, word: &Word) -> S {
        self(word)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("row {0:?} is already present")]
    DuplicateRow(String),
}

/// A filled observation table over the alphabet of its oracle.
#[derive(Clone, Debug)]
pub struct ObservationTable<S> {
    alphabet: Alphabet,
    rows: Vec<Word>,
    row_set: HashSet<Word>,
    cols: Vec<Word>,
    col_set: HashSet<Word>,
    cache: HashMap<Word, S>,
    queries: u64,
}

/// How a closedness check ended: witnesses for every successor row, or the
/// first (in canonical order) successor row that no combination reaches.
#[derive(Clone, Debug)]
pub enum ClosednessOutcome<S> {
    Closed(ClosedWitness<S>),
    Defect(Word),
}

/// For each row `s` and letter `a`, coefficients over the current rows whose
/// combination reproduces the successor row of `s·a`.
#[derive(Clone, Debug)]
pub struct ClosedWitness<S> {
    pub combos: Vec<Vec<Vec<S>>>,
}

impl<S: Semiring> ObservationTable<S> {
    /// Start from `S = E = {ε}` and fill the cells.
    pub fn new(alphabet: Alphabet, oracle: &mut dyn MembershipOracle<S>) -> Self {
        let epsilon = Word::epsilon();
        let mut table = ObservationTable {
            alphabet,
            rows: vec![epsilon.clone()],
            row_set: HashSet::from([epsilon.clone()]),
            cols: vec![epsilon.clone()],
            col_set: HashSet::from([epsilon]),
            cache: HashMap::new(),
            queries: 0,
        };
        table.fill(oracle);
        table
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn row_labels(&self) -> &[Word] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[Word] {
        &self.cols
    }

    /// Distinct words queried so far.
    pub fn membership_queries(&self) -> u64 {
        self.queries
    }

    fn query(&mut self, word: Word, oracle: &mut dyn MembershipOracle<S>) {
        if let std::collections::hash_map::Entry::Vacant(entry) = self.cache.entry(word) {
            let value = oracle.membership(entry.key());
            entry.insert(value);
            self.queries += 1;
        }
    }

    fn fill(&mut self, oracle: &mut dyn MembershipOracle<S>) {
        for s in self.rows.clone() {
            for e in self.cols.clone() {
                self.query(s.concat(&e), oracle);
            }
            for letter in 0..self.alphabet.len() {
                let sa = s.extended(letter);
                for e in self.cols.clone() {
                    self.query(sa.concat(&e), oracle);
                }
            }
        }
    }

    fn value(&self, word: &Word) -> &S {
        self.cache.get(word).expect("cell not filled")
    }

    /// The row of values for the row label at `index`.
    pub fn row(&self, index: usize) -> Vec<S> {
        let s = &self.rows[index];
        self.cols
            .iter()
            .map(|e| self.value(&s.concat(e)).clone())
            .collect()
    }

    /// The successor row of values for the label at `index` extended by `letter`.
    pub fn srow(&self, index: usize, letter: usize) -> Vec<S> {
        let sa = self.rows[index].extended(letter);
        self.cols
            .iter()
            .map(|e| self.value(&sa.concat(e)).clone())
            .collect()
    }

    /// The `|S| × |E|` matrix of row values.
    pub fn row_matrix(&self) -> Matrix<S> {
        Matrix::from_rows((0..self.rows.len()).map(|i| self.row(i)).collect())
    }

    /// Append a row label and fill the new cells.
    pub fn add_row(
        &mut self,
        word: Word,
        oracle: &mut dyn MembershipOracle<S>,
    ) -> Result<(), TableError> {
        if self.row_set.contains(&word) {
            return Err(TableError::DuplicateRow(self.alphabet.format_word(&word)));
        }
        self.row_set.insert(word.clone());
        self.rows.push(word);
        self.fill(oracle);
        Ok(())
    }

    /// Append all suffixes of `word` (from `ε` up to the word itself, in
    /// increasing length) that are not yet column labels, then fill.
    /// Returns the labels that were added.
    pub fn add_suffix_columns(
        &mut self,
        word: &Word,
        oracle: &mut dyn MembershipOracle<S>,
    ) -> Vec<Word> {
        let mut added = Vec::new();
        for suffix in word.suffixes() {
            if self.col_set.insert(suffix.clone()) {
                self.cols.push(suffix.clone());
                added.push(suffix);
            }
        }
        self.fill(oracle);
        added
    }

    /// Render the table in rows-over-a-rule layout: the rows of `S` above,
    /// the successor rows of `S·A \ S` below, one column per label in `E`.
    pub fn render(&self) -> String {
        let fmt = |w: &Word| self.alphabet.format_word(w);
        let mut upper: Vec<(String, Vec<String>)> = Vec::new();
        let mut lower: Vec<(String, Vec<String>)> = Vec::new();
        for (i, s) in self.rows.iter().enumerate() {
            upper.push((fmt(s), self.row(i).iter().map(|v| v.to_string()).collect()));
        }
        for (i, s) in self.rows.iter().enumerate() {
            for letter in 0..self.alphabet.len() {
                let sa = s.extended(letter);
                if !self.row_set.contains(&sa) {
                    lower.push((
                        fmt(&sa),
                        self.srow(i, letter).iter().map(|v| v.to_string()).collect(),
                    ));
                }
            }
        }
        let headers: Vec<String> = self.cols.iter().map(fmt).collect();
        let label_width = upper
            .iter()
            .chain(&lower)
            .map(|(l, _)| l.chars().count())
            .max()
            .unwrap_or(1);
        let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
        for (_, cells) in upper.iter().chain(&lower) {
            for (j, c) in cells.iter().enumerate() {
                widths[j] = widths[j].max(c.chars().count());
            }
        }
        let pad = |text: &str, width: usize| {
            let len = text.chars().count();
            format!("{}{}", " ".repeat(width - len), text)
        };
        let mut out = String::new();
        let line = |label: &str, cells: &[String]| {
            let mut s = format!("{} |", pad(label, label_width));
            for (j, c) in cells.iter().enumerate() {
                s.push(' ');
                s.push_str(&pad(c, widths[j]));
            }
            s
        };
        out.push_str(&line("", &headers));
        out.push('\n');
        for (label, cells) in &upper {
            out.push_str(&line(label, cells));
            out.push('\n');
        }
        let total: usize = widths.iter().map(|w| w + 1).sum();
        out.push_str(&format!(
            "{}-+{}",
            "-".repeat(label_width),
            "-".repeat(total)
        ));
        for (label, cells) in &lower {
            out.push('\n');
            out.push_str(&line(label, cells));
        }
        out
    }
}

impl<S: LinearSolve> ObservationTable<S> {
    /// Check closedness: each successor row must be a combination of the
    /// rows of `S`. Successor rows are visited in row-insertion order ×
    /// alphabet order and the first unsolvable one is the defect. The
    /// solvers are complete, so a defect really means no combination exists.
    pub fn check_closedness(&self) -> ClosednessOutcome<S> {
        let columns: Vec<Vec<S>> = (0..self.rows.len()).map(|i| self.row(i)).collect();
        let system = Matrix::from_columns(&columns);
        let mut combos = Vec::with_capacity(self.rows.len());
        for index in 0..self.rows.len() {
            let mut per_letter = Vec::with_capacity(self.alphabet.len());
            for letter in 0..self.alphabet.len() {
                let target = self.srow(index, letter);
                match S::solve(&system, &target) {
                    Some(combo) => {
                        debug_assert_eq!(
                            system.mat_vec(&combo),
                            target,
                            "closedness witness does not reproduce the successor row"
                        );
                        per_letter.push(combo);
                    }
                    None => return ClosednessOutcome::Defect(self.rows[index].extended(letter)),
                }
            }
            combos.push(per_letter);
        }
        ClosednessOutcome::Closed(ClosedWitness { combos })
    }

    /// Rank of the row matrix, for semirings that have a rank.
    pub fn rank(&self) -> Option<usize> {
        S::rank(&self.row_matrix())
    }
}
