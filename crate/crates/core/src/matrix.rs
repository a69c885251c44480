//! Exact integer and rational matrices.
//!
//! Everything here is arbitrary precision. Matrices are dense and row-major,
//! and all algorithms (Bareiss determinant, Hermite and Smith normal forms,
//! congruence diagonalization) work without any floating point.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("rows have unequal lengths")]
    Ragged,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("symmetric matrix is degenerate")]
    Degenerate,
    #[error("matrix is not symmetric")]
    NotSymmetric,
}

/// Dense matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Dense matrix of reduced fractions.
///
/// `BigRational` keeps every entry in lowest terms with a positive
/// denominator, so two equal matrices compare equal entrywise.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

/// `u * m * v == d` with `d` diagonal, `d[0][0] | d[1][1] | ...`, zeros last.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries of `d`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

fn collect_rows<T: Clone>(rows: &[Vec<T>]) -> Result<(usize, usize, Vec<T>), MatrixError> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(MatrixError::Ragged);
    }
    Ok((r, c, rows.iter().flatten().cloned().collect()))
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Shape {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self, MatrixError> {
        let (r, c, data) = collect_rows(rows)?;
        Ok(IntMatrix { rows: r, cols: c, data })
    }

    /// Convenience constructor for small literals. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(&rows).expect("ragged literal matrix")
    }

    pub fn diag<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone().into();
        }
        m
    }

    /// Block diagonal matrix `[[a, 0], [0, b]]`.
    pub fn block_diag(a: &IntMatrix, b: &IntMatrix) -> Self {
        let mut m = Self::zeros(a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m[(i, j)] = a[(i, j)].clone();
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                m[(a.rows + i, a.cols + j)] = b[(i, j)].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    /// Entrywise `self ≡ I (mod m)`.
    pub fn is_identity_mod(&self, m: &BigInt) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let mut x = self[(i, j)].clone();
                    if i == j {
                        x -= 1;
                    }
                    x.mod_floor(m).is_zero()
                })
            })
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Panics if the matrix is not square.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        negate = !negate;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    /// Row-style Hermite normal form: returns `(h, u)` with `u * self == h`,
    /// `u` unimodular, pivots positive, entries above each pivot reduced into
    /// `[0, pivot)`, zero rows at the bottom.
    pub fn hnf(&self) -> (IntMatrix, IntMatrix) {
        let mut h = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut pivot = 0;
        for col in 0..self.cols {
            if pivot == self.rows {
                break;
            }
            loop {
                let best = (pivot..self.rows)
                    .filter(|&r| !h[(r, col)].is_zero())
                    .min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()));
                let Some(best) = best else { break };
                h.swap_rows(best, pivot);
                u.swap_rows(best, pivot);
                let mut done = true;
                for r in pivot + 1..self.rows {
                    if h[(r, col)].is_zero() {
                        continue;
                    }
                    let q = -h[(r, col)].div_floor(&h[(pivot, col)]);
                    h.add_row_multiple(r, pivot, &q);
                    u.add_row_multiple(r, pivot, &q);
                    if !h[(r, col)].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h[(pivot, col)].is_zero() {
                continue;
            }
            if h[(pivot, col)].is_negative() {
                h.negate_row(pivot);
                u.negate_row(pivot);
            }
            for r in 0..pivot {
                let q = -h[(r, col)].div_floor(&h[(pivot, col)]);
                if !q.is_zero() {
                    h.add_row_multiple(r, pivot, &q);
                    u.add_row_multiple(r, pivot, &q);
                }
            }
            pivot += 1;
        }
        (h, u)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let (h, _) = self.hnf();
        (0..h.rows)
            .filter(|&i| h.row(i).iter().any(|x| !x.is_zero()))
            .count()
    }

    /// Basis (as rows) of the integer left kernel `{ y : y * self = 0 }`.
    pub fn left_kernel(&self) -> IntMatrix {
        let (h, u) = self.hnf();
        let rows: Vec<Vec<BigInt>> = (0..h.rows)
            .filter(|&i| h.row(i).iter().all(Zero::is_zero))
            .map(|i| u.row(i).to_vec())
            .collect();
        if rows.is_empty() {
            return IntMatrix::zeros(0, self.rows);
        }
        IntMatrix::from_rows(&rows).expect("kernel rows have equal length")
    }

    /// Smith normal form with transforms.
    pub fn snf(&self) -> SnfResult {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut u = IntMatrix::identity(rows);
        let mut v = IntMatrix::identity(cols);
        for t in 0..rows.min(cols) {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for r in t..rows {
                    for c in t..cols {
                        if a[(r, c)].is_zero() {
                            continue;
                        }
                        if best.map_or(true, |(br, bc)| a[(r, c)].abs() < a[(br, bc)].abs()) {
                            best = Some((r, c));
                        }
                    }
                }
                let Some((br, bc)) = best else {
                    return SnfResult { d: a, u, v };
                };
                a.swap_rows(t, br);
                u.swap_rows(t, br);
                a.swap_cols(t, bc);
                v.swap_cols(t, bc);

                let mut clean = true;
                for r in t + 1..rows {
                    if a[(r, t)].is_zero() {
                        continue;
                    }
                    let q = -a[(r, t)].div_floor(&a[(t, t)]);
                    a.add_row_multiple(r, t, &q);
                    u.add_row_multiple(r, t, &q);
                    clean &= a[(r, t)].is_zero();
                }
                for c in t + 1..cols {
                    if a[(t, c)].is_zero() {
                        continue;
                    }
                    let q = -a[(t, c)].div_floor(&a[(t, t)]);
                    a.add_col_multiple(c, t, &q);
                    v.add_col_multiple(c, t, &q);
                    clean &= a[(t, c)].is_zero();
                }
                if !clean {
                    continue;
                }
                let bad_row = (t + 1..rows).find(|&r| {
                    (t + 1..cols).any(|c| !a[(r, c)].is_multiple_of(&a[(t, t)]))
                });
                match bad_row {
                    Some(r) => {
                        let one = BigInt::one();
                        a.add_row_multiple(t, r, &one);
                        u.add_row_multiple(t, r, &one);
                    }
                    None => break,
                }
            }
            if a[(t, t)].is_negative() {
                a.negate_row(t);
                u.negate_row(t);
            }
        }
        SnfResult { d: a, u, v }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Shape {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::identity(n).to_rat()
    }

    pub fn from_rows(rows: &[Vec<BigRational>]) -> Result<Self, MatrixError> {
        let (r, c, data) = collect_rows(rows)?;
        Ok(RatMatrix { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// The integer matrix with the same entries, if every entry is integral.
    pub fn to_int(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.to_integer()).collect(),
        })
    }

    /// Least common multiple of all denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.data
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Exact determinant by Gaussian elimination.
    pub fn det(&self) -> BigRational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigRational::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let pivot = a[(k, k)].clone();
            det *= &pivot;
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &pivot;
                for j in k..n {
                    let v = &f * &a[(k, j)];
                    a[(i, j)] -= v;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for k in 0..n {
            let p = (k..n)
                .find(|&i| !a[(i, k)].is_zero())
                .ok_or(MatrixError::Singular)?;
            a.swap_rows(p, k);
            inv.swap_rows(p, k);
            let pivot = a[(k, k)].recip();
            for j in 0..n {
                a[(k, j)] *= &pivot;
                inv[(k, j)] *= &pivot;
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let x = &f * &a[(k, j)];
                    a[(i, j)] -= x;
                    let y = &f * &inv[(k, j)];
                    inv[(i, j)] -= y;
                }
            }
        }
        Ok(inv)
    }

    /// Inertia `(positive, negative)` of a symmetric matrix, computed by
    /// rational congruence diagonalization.
    pub fn signature(&self) -> Result<(usize, usize), MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if !self.is_symmetric() {
            return Err(MatrixError::NotSymmetric);
        }
        let n = self.rows;
        let mut a = self.clone();
        let (mut pos, mut neg) = (0, 0);
        for k in 0..n {
            match (k..n).find(|&i| !a[(i, i)].is_zero()) {
                Some(i) => a.sym_swap(i, k),
                None => {
                    // all remaining diagonal entries vanish: e_i += e_j makes
                    // the new diagonal entry 2 a_ij
                    let pair = (k..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .find(|&(i, j)| !a[(i, j)].is_zero());
                    let (i, j) = pair.ok_or(MatrixError::Degenerate)?;
                    a.sym_add(i, j);
                    a.sym_swap(i, k);
                }
            }
            let pivot = a[(k, k)].clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &pivot;
                for j in k + 1..n {
                    let v = &f * &a[(k, j)];
                    a[(i, j)] -= v;
                }
                a[(i, k)] = BigRational::zero();
            }
            // row k is read by every row above, so clear it only now
            for j in k + 1..n {
                a[(k, j)] = BigRational::zero();
            }
        }
        Ok((pos, neg))
    }

    /// Symmetric swap of basis vectors `i` and `j`.
    pub(crate) fn sym_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.swap_rows(i, j);
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// Symmetric update `e_i += e_j`.
    pub(crate) fn sym_add(&mut self, i: usize, j: usize) {
        self.sym_add_multiple(i, j, &BigRational::one());
    }

    /// Symmetric update `e_i += k e_j`.
    pub(crate) fn sym_add_multiple(&mut self, i: usize, j: usize, k: &BigRational) {
        for c in 0..self.cols {
            let v = &self[(j, c)] * k;
            self[(i, c)] += v;
        }
        for r in 0..self.rows {
            let v = &self[(r, j)] * k;
            self[(r, i)] += v;
        }
    }

    /// row[dst] += k * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigRational) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// Select rows by index, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> RatMatrix {
        RatMatrix {
            rows: idx.len(),
            cols: self.cols,
            data: idx.iter().flat_map(|&i| self.row(i).to_vec()).collect(),
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Exact determinant of a square integer matrix.
pub fn det_exact(m: &IntMatrix) -> BigInt {
    m.det()
}

pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    m.hnf()
}

pub fn snf(m: &IntMatrix) -> SnfResult {
    m.snf()
}

pub fn signature(g: &RatMatrix) -> Result<(usize, usize), MatrixError> {
    g.signature()
}

pub fn rat_inverse(m: &RatMatrix) -> Result<RatMatrix, MatrixError> {
    m.inverse()
}

/// `x * m` for a row vector `x`.
pub fn vec_mat(x: &[BigRational], m: &RatMatrix) -> Vec<BigRational> {
    assert_eq!(x.len(), m.rows, "dimension mismatch in vector product");
    let mut out = vec![BigRational::zero(); m.cols];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += xi * &m[(i, j)];
        }
    }
    out
}

pub fn dot(x: &[BigRational], y: &[BigRational]) -> BigRational {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}
