//! Exact dense matrices over a semiring and the linear-system solvers that
//! back the closedness strategies.
//!
//! Every solver verifies `A·x = b` by re-multiplication before returning a
//! solution; a solver that hands out a wrong vector is a bug worth crashing
//! on. Solutions are canonical (free variables zero, enumerative solvers
//! return the first hit in their fixed order) so that learner runs are
//! deterministic.
#![allow(clippy::needless_range_loop)]

use num_traits::{Signed, ToPrimitive};

use crate::semiring::{Field, FiniteCarrier, Pid, Semiring};
use crate::{Bool, Int, Nat, Rat};

/// Dense row-major matrix with entries from one semiring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Semiring> Matrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "entry grid does not match dimensions"
        );
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Matrix whose `i`-th column is `columns[i]`.
    pub fn from_columns(columns: &[Vec<S>]) -> Self {
        let c = columns.len();
        let r = columns.first().map_or(0, Vec::len);
        let mut m = Matrix::zero(r, c);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn with_size(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix::with_size(rows, cols, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::with_size(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Semiring::is_zero)
    }

    /// `A·x` for a column vector `x`. Panics on dimension mismatch.
    pub fn mat_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(self.cols, x.len(), "dimension mismatch in A·x");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(S::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    /// `x·A` for a row vector `x`. Panics on dimension mismatch.
    pub fn vec_mat(&self, x: &[S]) -> Vec<S> {
        assert_eq!(self.rows, x.len(), "dimension mismatch in x·A");
        (0..self.cols)
            .map(|j| (0..self.rows).fold(S::zero(), |acc, i| acc.add(&x[i].mul(&self[(i, j)]))))
            .collect()
    }

    pub fn mat_mul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in A·B");
        Matrix::with_size(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(S::zero(), |acc, k| {
                acc.add(&self[(i, k)].mul(&other[(k, j)]))
            })
        })
    }

    pub fn transpose(&self) -> Matrix<S> {
        Matrix::with_size(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<T: Semiring>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix::with_size(self.rows, self.cols, |i, j| f(&self[(i, j)]))
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<S: Semiring>(x: &[S], y: &[S]) -> S {
    assert_eq!(x.len(), y.len(), "dimension mismatch in dot product");
    x.iter()
        .zip(y)
        .fold(S::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
}

fn verify_solution<S: Semiring>(a: &Matrix<S>, x: &[S], b: &[S]) {
    assert_eq!(a.mat_vec(x), b, "solver produced a wrong solution");
}

/// Gauss–Jordan reduction of `m` in place; returns the pivot columns.
fn row_reduce<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(pivot_row) = (rank..m.rows()).find(|&r| !m[(r, col)].is_zero()) else {
            continue;
        };
        for j in 0..m.cols() {
            let tmp = m[(rank, j)].clone();
            m[(rank, j)] = m[(pivot_row, j)].clone();
            m[(pivot_row, j)] = tmp;
        }
        let inv = m[(rank, col)].inv();
        for j in 0..m.cols() {
            m[(rank, j)] = m[(rank, j)].mul(&inv);
        }
        for r in 0..m.rows() {
            if r != rank && !m[(r, col)].is_zero() {
                let factor = m[(r, col)].clone();
                for j in 0..m.cols() {
                    let delta = factor.mul(&m[(rank, j)]);
                    m[(r, j)] = m[(r, j)].sub(&delta);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.rows() {
            break;
        }
    }
    pivots
}

/// Solve `A·x = b` over a field by Gaussian elimination.
///
/// Returns the canonical solution (free variables zero) or `None` when the
/// system is inconsistent.
pub fn gaussian_solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch in A·x = b");
    let n = a.cols();
    let mut aug = Matrix::with_size(a.rows(), n + 1, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let pivots = row_reduce(&mut aug);
    // A pivot in the augmented column marks an inconsistent system.
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![F::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = aug[(i, n)].clone();
    }
    verify_solution(a, &x, b);
    Some(x)
}

/// Number of pivots after elimination.
pub fn rank_over_field<F: Field>(a: &Matrix<F>) -> usize {
    let mut m = a.clone();
    row_reduce(&mut m).len()
}

/// Smith normal form `U·A·V = D` with `U`, `V` unimodular and `D` diagonal
/// whose nonzero entries form a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithDecomposition<P> {
    pub u: Matrix<P>,
    pub d: Matrix<P>,
    pub v: Matrix<P>,
}

impl<P: Pid> SmithDecomposition<P> {
    /// The nonzero diagonal entries `d₁ | d₂ | …`.
    pub fn invariant_factors(&self) -> Vec<P> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

struct SmithState<P> {
    u: Matrix<P>,
    d: Matrix<P>,
    v: Matrix<P>,
}

impl<P: Pid> SmithState<P> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.d.cols() {
            let tmp = self.d[(a, j)].clone();
            self.d[(a, j)] = self.d[(b, j)].clone();
            self.d[(b, j)] = tmp;
        }
        for j in 0..self.u.cols() {
            let tmp = self.u[(a, j)].clone();
            self.u[(a, j)] = self.u[(b, j)].clone();
            self.u[(b, j)] = tmp;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.d.rows() {
            let tmp = self.d[(i, a)].clone();
            self.d[(i, a)] = self.d[(i, b)].clone();
            self.d[(i, b)] = tmp;
        }
        for i in 0..self.v.rows() {
            let tmp = self.v[(i, a)].clone();
            self.v[(i, a)] = self.v[(i, b)].clone();
            self.v[(i, b)] = tmp;
        }
    }

    /// row(r) -= q · row(k)
    fn row_sub(&mut self, r: usize, k: usize, q: &P) {
        for j in 0..self.d.cols() {
            let delta = q.mul(&self.d[(k, j)]);
            self.d[(r, j)] = self.d[(r, j)].sub(&delta);
        }
        for j in 0..self.u.cols() {
            let delta = q.mul(&self.u[(k, j)]);
            self.u[(r, j)] = self.u[(r, j)].sub(&delta);
        }
    }

    /// col(c) -= q · col(k)
    fn col_sub(&mut self, c: usize, k: usize, q: &P) {
        for i in 0..self.d.rows() {
            let delta = q.mul(&self.d[(i, k)]);
            self.d[(i, c)] = self.d[(i, c)].sub(&delta);
        }
        for i in 0..self.v.rows() {
            let delta = q.mul(&self.v[(i, k)]);
            self.v[(i, c)] = self.v[(i, c)].sub(&delta);
        }
    }

    /// row(k) += row(r)
    fn row_add(&mut self, k: usize, r: usize) {
        for j in 0..self.d.cols() {
            let add = self.d[(r, j)].clone();
            self.d[(k, j)] = self.d[(k, j)].add(&add);
        }
        for j in 0..self.u.cols() {
            let add = self.u[(r, j)].clone();
            self.u[(k, j)] = self.u[(k, j)].add(&add);
        }
    }

    /// col(k) *= unit
    fn col_scale(&mut self, k: usize, unit: &P) {
        for i in 0..self.d.rows() {
            self.d[(i, k)] = self.d[(i, k)].mul(unit);
        }
        for i in 0..self.v.rows() {
            self.v[(i, k)] = self.v[(i, k)].mul(unit);
        }
    }

    fn min_entry_from(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.d.rows() {
            for j in k..self.d.cols() {
                if self.d[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if self.d[(i, j)].cmp_size(&self.d[(bi, bj)]) == std::cmp::Ordering::Less {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }
}

/// Compute the Smith normal form of any `m×n` matrix over a Euclidean PID.
///
/// Pivots are chosen by minimal Euclidean size to limit coefficient growth.
pub fn smith_normal_form<P: Pid>(a: &Matrix<P>) -> SmithDecomposition<P> {
    let (m, n) = (a.rows(), a.cols());
    let mut st = SmithState {
        u: Matrix::identity(m),
        d: a.clone(),
        v: Matrix::identity(n),
    };
    for k in 0..m.min(n) {
        // the while-let exits once the remaining block is entirely zero
        'pivot: while let Some((pi, pj)) = st.min_entry_from(k) {
            st.swap_rows(k, pi);
            st.swap_cols(k, pj);

            let mut dirty = false;
            for r in k + 1..m {
                if !st.d[(r, k)].is_zero() {
                    let (q, _) = st.d[(r, k)].divmod(&st.d[(k, k)]);
                    if !q.is_zero() {
                        st.row_sub(r, k, &q);
                    }
                    if !st.d[(r, k)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue; // a remainder smaller than the pivot appeared
            }
            for c in k + 1..n {
                if !st.d[(k, c)].is_zero() {
                    let (q, _) = st.d[(k, c)].divmod(&st.d[(k, k)]);
                    if !q.is_zero() {
                        st.col_sub(c, k, &q);
                    }
                    if !st.d[(k, c)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide every entry of the trailing block, otherwise
            // fold the offending row in and keep reducing
            for r in k + 1..m {
                for c in k + 1..n {
                    if !st.d[(r, c)].divmod(&st.d[(k, k)]).1.is_zero() {
                        st.row_add(k, r);
                        continue 'pivot;
                    }
                }
            }
            break;
        }
        if st.d[(k, k)].is_zero() {
            break;
        }
        let (canonical, unit) = st.d[(k, k)].canonical_assoc();
        if unit != P::one() {
            st.col_scale(k, &unit);
            st.d[(k, k)] = canonical;
        }
    }
    SmithDecomposition {
        u: st.u,
        d: st.d,
        v: st.v,
    }
}

/// Count of nonzero invariant factors.
pub fn rank_over_pid<P: Pid>(a: &Matrix<P>) -> usize {
    smith_normal_form(a).invariant_factors().len()
}

/// Row-style Hermite normal form: returns `(u, h)` with `u·a = h`, `u`
/// unimodular, `h` in echelon form with canonical pivots and reduced entries
/// above each pivot.
pub fn hermite_normal_form<P: Pid>(a: &Matrix<P>) -> (Matrix<P>, Matrix<P>) {
    let m = a.rows();
    let mut h = a.clone();
    let mut u = Matrix::identity(m);
    let row_sub = |h: &mut Matrix<P>, u: &mut Matrix<P>, r: usize, k: usize, q: &P| {
        for j in 0..h.cols() {
            let delta = q.mul(&h[(k, j)]);
            h[(r, j)] = h[(r, j)].sub(&delta);
        }
        for j in 0..u.cols() {
            let delta = q.mul(&u[(k, j)]);
            u[(r, j)] = u[(r, j)].sub(&delta);
        }
    };
    let swap = |h: &mut Matrix<P>, u: &mut Matrix<P>, a: usize, b: usize| {
        if a == b {
            return;
        }
        for j in 0..h.cols() {
            let tmp = h[(a, j)].clone();
            h[(a, j)] = h[(b, j)].clone();
            h[(b, j)] = tmp;
        }
        for j in 0..u.cols() {
            let tmp = u[(a, j)].clone();
            u[(a, j)] = u[(b, j)].clone();
            u[(b, j)] = tmp;
        }
    };
    let mut r = 0;
    for c in 0..h.cols() {
        if r == m {
            break;
        }
        while let Some(best) = (r..m)
            .filter(|&i| !h[(i, c)].is_zero())
            .min_by(|&i, &j| h[(i, c)].cmp_size(&h[(j, c)]))
        {
            swap(&mut h, &mut u, r, best);
            let mut remaining = false;
            for i in r + 1..m {
                if !h[(i, c)].is_zero() {
                    let (q, _) = h[(i, c)].divmod(&h[(r, c)]);
                    if !q.is_zero() {
                        row_sub(&mut h, &mut u, i, r, &q);
                    }
                    if !h[(i, c)].is_zero() {
                        remaining = true;
                    }
                }
            }
            if !remaining {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        let (canonical, unit) = h[(r, c)].canonical_assoc();
        if unit != P::one() {
            for j in 0..h.cols() {
                h[(r, j)] = h[(r, j)].mul(&unit);
            }
            for j in 0..u.cols() {
                u[(r, j)] = u[(r, j)].mul(&unit);
            }
            h[(r, c)] = canonical;
        }
        for i in 0..r {
            if !h[(i, c)].is_zero() {
                let (q, _) = h[(i, c)].divmod(&h[(r, c)]);
                if !q.is_zero() {
                    row_sub(&mut h, &mut u, i, r, &q);
                }
            }
        }
        r += 1;
    }
    (u, h)
}

/// Solve `A·x = b` over a PID through the Smith normal form.
///
/// Solves `D·y = U·b` entrywise with exact-divisibility checks and maps the
/// result back with `x = V·y`; free components of `y` are zero.
pub fn pid_solve<P: Pid>(a: &Matrix<P>, b: &[P]) -> Option<Vec<P>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch in A·x = b");
    let (m, n) = (a.rows(), a.cols());
    let snf = smith_normal_form(a);
    let ub = snf.u.mat_vec(b);
    let mut y = vec![P::zero(); n];
    for (i, rhs) in ub.iter().enumerate().take(m) {
        let diag = if i < n {
            snf.d[(i, i)].clone()
        } else {
            P::zero()
        };
        if diag.is_zero() {
            if !rhs.is_zero() {
                return None;
            }
        } else {
            let (q, r) = rhs.divmod(&diag);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    let x = snf.v.mat_vec(&y);
    verify_solution(a, &x, b);
    Some(x)
}

/// Upper bounds of the search box for `A·x = b` over the naturals.
///
/// Any solution satisfies `xᵢ ≤ min { ⌊bⱼ / A[j][i]⌋ : A[j][i] > 0 }` because
/// all terms are nonnegative; columns without a positive entry are pinned to
/// zero.
fn nat_bounds(a: &Matrix<Int>, b: &[Int]) -> Vec<Int> {
    (0..a.cols())
        .map(|i| {
            let mut bound: Option<Int> = None;
            for j in 0..a.rows() {
                if a[(j, i)].is_positive() {
                    let q = &b[j] / &a[(j, i)];
                    bound = Some(match bound {
                        None => q,
                        Some(cur) => cur.min(q),
                    });
                }
            }
            bound.unwrap_or_else(|| Int::from(0))
        })
        .collect()
}

/// Integer consequences of the system used to prune the natural search:
/// every row of `H·x = U·b` (with `U·A = H` the Hermite form) must hold for
/// any solution. Returns `None` when the system is already infeasible over
/// the integers.
struct CutRow {
    coeffs: Vec<Int>,
    rhs: Int,
    // suffix_lo[k] / suffix_hi[k]: extreme values of Σ_{j≥k} coeffs[j]·x_j
    // over the box
    suffix_lo: Vec<Int>,
    suffix_hi: Vec<Int>,
}

fn l1_norm(coeffs: &[Int]) -> Int {
    coeffs
        .iter()
        .map(|c| c.abs())
        .fold(Int::from(0), |acc, x| acc + x)
}

/// Shrink the derived equations by pairwise unimodular row operations.
///
/// The echelon rows of a system whose columns grow geometrically still carry
/// huge coefficients even though the row space contains very short vectors
/// (the kind that make interval pruning bite). A sweep of `rowᵢ −= q·rowⱼ`
/// steps with `q` chosen to minimize the L1 norm recovers such vectors;
/// every accepted step strictly shrinks a row, so the sweep terminates.
fn size_reduce_rows(rows: &mut [(Vec<Int>, Int)]) {
    let q_candidates = |num: &Int, den: &Int| -> Vec<Int> {
        use num_integer::Integer;
        let q = num.div_floor(den);
        vec![q.clone(), &q + 1]
    };
    for _sweep in 0..64 {
        let mut improved = false;
        for i in 0..rows.len() {
            for j in 0..rows.len() {
                if i == j {
                    continue;
                }
                let current = l1_norm(&rows[i].0);
                if Semiring::is_zero(&current) {
                    continue;
                }
                let mut best: Option<(Int, Int)> = None; // (norm, q)
                for k in 0..rows[i].0.len() {
                    if Semiring::is_zero(&rows[j].0[k]) {
                        continue;
                    }
                    for q in q_candidates(&rows[i].0[k], &rows[j].0[k]) {
                        if Semiring::is_zero(&q) {
                            continue;
                        }
                        let candidate: Vec<Int> = rows[i]
                            .0
                            .iter()
                            .zip(&rows[j].0)
                            .map(|(a, b)| a - &q * b)
                            .collect();
                        let norm = l1_norm(&candidate);
                        if best.as_ref().is_none_or(|(b, _)| norm < *b) {
                            best = Some((norm, q));
                        }
                    }
                }
                if let Some((norm, q)) = best {
                    if norm < current {
                        let (coeffs_j, rhs_j) = rows[j].clone();
                        let (coeffs_i, rhs_i) = &mut rows[i];
                        for (a, b) in coeffs_i.iter_mut().zip(&coeffs_j) {
                            *a -= &q * b;
                        }
                        *rhs_i -= &q * &rhs_j;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
}

fn nat_cut_rows(a: &Matrix<Int>, b: &[Int], bounds: &[Int]) -> Option<Vec<CutRow>> {
    let (u, h) = hermite_normal_form(a);
    let ub = u.mat_vec(b);
    let n = a.cols();
    let mut rows: Vec<(Vec<Int>, Int)> = Vec::new();
    for i in 0..h.rows() {
        let coeffs: Vec<Int> = h.row(i).to_vec();
        if coeffs.iter().all(Semiring::is_zero) {
            if !Semiring::is_zero(&ub[i]) {
                return None; // no integer solution at all
            }
            continue;
        }
        rows.push((coeffs, ub[i].clone()));
    }
    size_reduce_rows(&mut rows);
    let mut cuts = Vec::new();
    for (coeffs, rhs) in rows {
        if coeffs.iter().all(Semiring::is_zero) {
            if !Semiring::is_zero(&rhs) {
                return None;
            }
            continue;
        }
        let mut suffix_lo = vec![Int::from(0); n + 1];
        let mut suffix_hi = vec![Int::from(0); n + 1];
        for k in (0..n).rev() {
            let reach = &coeffs[k] * &bounds[k];
            suffix_lo[k] = &suffix_lo[k + 1] + reach.clone().min(Int::from(0));
            suffix_hi[k] = &suffix_hi[k + 1] + reach.max(Int::from(0));
        }
        cuts.push(CutRow {
            coeffs,
            rhs,
            suffix_lo,
            suffix_hi,
        });
    }
    Some(cuts)
}

struct NatSearch<'a> {
    a: &'a Matrix<Int>,
    bounds: &'a [Int],
    cuts: &'a [CutRow],
    n: usize,
    reverse: bool,
}

impl NatSearch<'_> {
    fn var(&self, depth: usize) -> usize {
        if self.reverse {
            self.n - 1 - depth
        } else {
            depth
        }
    }

    fn prune(&self, depth: usize, cut_acc: &[Int]) -> bool {
        // What the not-yet-assigned variables can still contribute to each
        // cut row: in forward order that is a suffix of the index range, in
        // reverse order a prefix (the complement of a suffix).
        for (ci, cut) in self.cuts.iter().enumerate() {
            let need = &cut.rhs - &cut_acc[ci];
            let (lo, hi) = if self.reverse {
                let k = self.n - depth;
                (
                    &cut.suffix_lo[0] - &cut.suffix_lo[k],
                    &cut.suffix_hi[0] - &cut.suffix_hi[k],
                )
            } else {
                (cut.suffix_lo[depth].clone(), cut.suffix_hi[depth].clone())
            };
            if need < lo || need > hi {
                return true;
            }
        }
        false
    }

    fn dfs(
        &self,
        depth: usize,
        residual: &mut Vec<Int>,
        cut_acc: &mut Vec<Int>,
        x: &mut Vec<Int>,
    ) -> bool {
        if self.prune(depth, cut_acc) {
            return false;
        }
        if depth == self.n {
            return residual.iter().all(Semiring::is_zero);
        }
        let var = self.var(depth);
        let mut ub = self.bounds[var].clone();
        for j in 0..self.a.rows() {
            if self.a[(j, var)].is_positive() {
                ub = ub.min(&residual[j] / &self.a[(j, var)]);
            }
        }
        let Some(ub) = ub.to_u64() else {
            // bounds of this size are outside anything the learner produces
            panic!("natural search box too large");
        };
        let values: Box<dyn Iterator<Item = u64>> = if self.reverse {
            Box::new((0..=ub).rev())
        } else {
            Box::new(0..=ub)
        };
        for v in values {
            let vi = Int::from(v);
            for j in 0..self.a.rows() {
                residual[j] -= &self.a[(j, var)] * &vi;
            }
            for (ci, cut) in self.cuts.iter().enumerate() {
                cut_acc[ci] += &cut.coeffs[var] * &vi;
            }
            x[var] = vi.clone();
            if self.dfs(depth + 1, residual, cut_acc, x) {
                return true;
            }
            for j in 0..self.a.rows() {
                residual[j] += &self.a[(j, var)] * &vi;
            }
            for (ci, cut) in self.cuts.iter().enumerate() {
                cut_acc[ci] -= &cut.coeffs[var] * &vi;
            }
            x[var] = Int::from(0);
        }
        false
    }
}

fn nat_search(a: &Matrix<Int>, b: &[Int], reverse: bool) -> Option<Vec<Int>> {
    let bounds = nat_bounds(a, b);
    let cuts = nat_cut_rows(a, b, &bounds)?;
    let search = NatSearch {
        a,
        bounds: &bounds,
        cuts: &cuts,
        n: a.cols(),
        reverse,
    };
    let mut residual = b.to_vec();
    let mut cut_acc = vec![Int::from(0); cuts.len()];
    let mut x = vec![Int::from(0); a.cols()];
    if search.dfs(0, &mut residual, &mut cut_acc, &mut x) {
        Some(x)
    } else {
        None
    }
}

fn nat_to_int_system(a: &Matrix<Nat>, b: &[Nat]) -> (Matrix<Int>, Vec<Int>) {
    (
        a.map(|x| Int::from(x.clone())),
        b.iter().map(|x| Int::from(x.clone())).collect(),
    )
}

/// Solve `A·x = b` over the naturals by a complete bounded search.
///
/// Any solution lies in the box described by [`nat_bounds`], so exhausting it
/// is a decision procedure. The search walks the box in lexicographic order
/// (depth-first, variable 0 outermost, values ascending) and prunes branches
/// that violate integer consequences of the system, which keeps the systems
/// arising from observation tables tractable. Returns the
/// lexicographically-least solution.
pub fn nat_solve(a: &Matrix<Nat>, b: &[Nat]) -> Option<Vec<Nat>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch in A·x = b");
    let (ai, bi) = nat_to_int_system(a, b);
    let x = nat_search(&ai, &bi, false)?;
    let x: Vec<Nat> = x
        .into_iter()
        .map(|v| v.to_biguint().expect("nonnegative"))
        .collect();
    verify_solution(a, &x, b);
    Some(x)
}

/// Depth-first reference solver over the naturals: same box, opposite
/// traversal (last variable outermost, values descending). Returns any
/// solution; used as an independent existence check for `nat_solve`
/// outcomes.
pub fn nat_solve_dfs(a: &Matrix<Nat>, b: &[Nat]) -> Option<Vec<Nat>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch in A·x = b");
    let (ai, bi) = nat_to_int_system(a, b);
    let x = nat_search(&ai, &bi, true)?;
    let x: Vec<Nat> = x
        .into_iter()
        .map(|v| v.to_biguint().expect("nonnegative"))
        .collect();
    verify_solution(a, &x, b);
    Some(x)
}

/// Solve `A·x = b` over a finite semiring by enumerating every candidate
/// vector.
///
/// Candidates are ordered with index 0 cycling fastest through the canonical
/// carrier order, and the first satisfying vector is returned. Over the
/// Booleans this makes `(1,0)` come before `(0,1)`.
pub fn finite_solve<S: FiniteCarrier>(a: &Matrix<S>, b: &[S]) -> Option<Vec<S>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch in A·x = b");
    let carrier = S::carrier();
    assert!(!carrier.is_empty(), "empty carrier");
    let n = a.cols();
    let mut digits = vec![0usize; n];
    loop {
        let x: Vec<S> = digits.iter().map(|&d| carrier[d].clone()).collect();
        if a.mat_vec(&x) == b {
            return Some(x);
        }
        // odometer step, index 0 fastest
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            digits[i] += 1;
            if digits[i] < carrier.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Boolean solve with the same outcome as [`finite_solve`] but a cheap
/// existence gate: a solution exists iff the union of all columns contained
/// in `b` equals `b`. The enumeration then only runs when it will hit.
pub(crate) fn bool_solve(a: &Matrix<Bool>, b: &[Bool]) -> Option<Vec<Bool>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch in A·x = b");
    let m = a.rows();
    let n = a.cols();
    let usable: Vec<bool> = (0..n).map(|j| (0..m).all(|i| !a[(i, j)] || b[i])).collect();
    let mut union = vec![false; m];
    for j in 0..n {
        if usable[j] {
            for i in 0..m {
                union[i] = union[i] || a[(i, j)];
            }
        }
    }
    if union != b {
        return None;
    }
    finite_solve(a, b)
}

/// The closedness-strategy backend of a semiring: canonical solving of the
/// linear systems an observation table produces, plus the table rank where
/// the semiring supports one.
pub trait LinearSolve: Semiring {
    fn solve(a: &Matrix<Self>, b: &[Self]) -> Option<Vec<Self>>;

    fn rank(m: &Matrix<Self>) -> Option<usize> {
        let _ = m;
        None
    }
}

impl LinearSolve for Rat {
    fn solve(a: &Matrix<Self>, b: &[Self]) -> Option<Vec<Self>> {
        gaussian_solve(a, b)
    }
    fn rank(m: &Matrix<Self>) -> Option<usize> {
        Some(rank_over_field(m))
    }
}

impl LinearSolve for Int {
    fn solve(a: &Matrix<Self>, b: &[Self]) -> Option<Vec<Self>> {
        pid_solve(a, b)
    }
    fn rank(m: &Matrix<Self>) -> Option<usize> {
        Some(rank_over_pid(m))
    }
}

impl LinearSolve for Nat {
    fn solve(a: &Matrix<Self>, b: &[Self]) -> Option<Vec<Self>> {
        nat_solve(a, b)
    }
}

impl LinearSolve for Bool {
    fn solve(a: &Matrix<Self>, b: &[Self]) -> Option<Vec<Self>> {
        bool_solve(a, b)
    }
}
