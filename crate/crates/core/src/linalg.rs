//! Exact integer and rational linear algebra.
//!
//! Everything here works over [`BigInt`] / [`BigRational`]; there is no
//! floating point. Matrices are small and dense (rank ≤ 8, a few dozen
//! columns), so the algorithms favour clarity over asymptotics.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;
pub type IntVector = Vec<BigInt>;
pub type RatVector = Vec<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds a matrix from rows. Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.iter().cloned()).collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<T>]) -> Self {
        Self::from_rows(columns).transpose()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self[(r, c)].clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::filled(n, n, T::zero());
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + std::ops::Mul<Output = T>,
{
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let mut out = Self::filled(self.rows, other.cols, T::zero());
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self[(r, k)].clone() * other[(k, c)].clone();
                }
                out[(r, c)] = acc;
            }
        }
        out
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "incompatible shapes");
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(T::zero(), |acc, c| {
                    acc + self[(r, c)].clone() * v[c].clone()
                })
            })
            .collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn int_vector(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat_vector(v: &[i64]) -> RatVector {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

pub fn to_rational(v: &[BigInt]) -> RatVector {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    Matrix::from_rows(&rows.iter().map(|r| int_vector(r)).collect::<Vec<_>>())
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Returns `Some(integers)` when every entry of `v` is integral.
pub fn as_integers(v: &[BigRational]) -> Option<IntVector> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

/// Integer vector on the same ray as `v`: denominators cleared and the
/// content divided out. Positive scaling only, so signs are preserved.
pub fn primitive_multiple(v: &[BigRational]) -> IntVector {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: IntVector = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    primitive(&scaled)
}

/// Divides an integer vector by the gcd of its entries (keeping the sign).
pub fn primitive(v: &[BigInt]) -> IntVector {
    let g = content(v);
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Gcd of the entries, always non-negative.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// The representative of `±v` whose first nonzero entry is positive.
pub fn sign_normalized<T: Signed + Clone>(v: &[T]) -> Vec<T> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.iter().map(|x| -x.clone()).collect(),
        _ => v.to_vec(),
    }
}

/// Elementary divisors `d₁ | d₂ | … | d_k`, `k = min(rows, cols)`.
///
/// Plain row/column reduction: the pivot is always an entry of minimal
/// nonzero absolute value in the remaining block.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let k = a.rows.min(a.cols);
    let mut divisors = Vec::with_capacity(k);
    for t in 0..k {
        let Some((pr, pc)) = min_abs_position(&a, t) else {
            divisors.extend(std::iter::repeat_n(BigInt::zero(), k - t));
            break;
        };
        a.swap_rows(t, pr);
        a.swap_cols(t, pc);
        loop {
            // Clear column t below and row t to the right of the pivot.
            let mut dirty = false;
            for r in t + 1..a.rows {
                if a[(r, t)].is_zero() {
                    continue;
                }
                let q = a[(r, t)].div_floor(&a[(t, t)]);
                for c in t..a.cols {
                    let v = &a[(t, c)] * &q;
                    a[(r, c)] -= v;
                }
                dirty |= !a[(r, t)].is_zero();
            }
            for c in t + 1..a.cols {
                if a[(t, c)].is_zero() {
                    continue;
                }
                let q = a[(t, c)].div_floor(&a[(t, t)]);
                for r in t..a.rows {
                    let v = &a[(r, t)] * &q;
                    a[(r, c)] -= v;
                }
                dirty |= !a[(t, c)].is_zero();
            }
            if dirty {
                let (pr, pc) = min_abs_in_cross(&a, t);
                a.swap_rows(t, pr);
                a.swap_cols(t, pc);
                continue;
            }
            // Pivot must divide the whole remaining block.
            let bad = (t + 1..a.rows)
                .flat_map(|r| (t + 1..a.cols).map(move |c| (r, c)))
                .find(|&(r, c)| !(a[(r, c)].is_multiple_of(&a[(t, t)])));
            match bad {
                Some((r, _)) => {
                    for c in t..a.cols {
                        let v = a[(r, c)].clone();
                        a[(t, c)] += v;
                    }
                }
                None => break,
            }
        }
        divisors.push(a[(t, t)].abs());
    }
    divisors
}

fn min_abs_position(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..a.rows {
        for c in t..a.cols {
            let v = &a[(r, c)];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(br, bc)| v.abs() < a[(br, bc)].abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` or column `t`.
fn min_abs_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let consider = |r: usize, c: usize, best: &mut (usize, usize)| {
        let v = &a[(r, c)];
        if !v.is_zero() && (a[*best].is_zero() || v.abs() < a[*best].abs()) {
            *best = (r, c);
        }
    };
    for r in t..a.rows {
        consider(r, t, &mut best);
    }
    for c in t..a.cols {
        consider(t, c, &mut best);
    }
    best
}

/// `Vol_m`: product of the elementary divisors of the `r × m` matrix whose
/// columns are `vectors`.
pub fn vol(m: usize, vectors: &[IntVector]) -> Result<BigInt, LinalgError> {
    if vectors.len() != m {
        return Err(LinalgError::DimensionMismatch {
            expected: m,
            found: vectors.len(),
        });
    }
    let r = vectors.first().map_or(0, Vec::len);
    if let Some(bad) = vectors.iter().find(|v| v.len() != r) {
        return Err(LinalgError::DimensionMismatch {
            expected: r,
            found: bad.len(),
        });
    }
    if m == 0 {
        return Ok(BigInt::one());
    }
    let divisors = smith_normal_form(&Matrix::from_columns(vectors));
    Ok(divisors.iter().product())
}

/// Convenience wrapper over [`vol`] for machine-size vectors.
pub fn vol_i64(vectors: &[&[i64]]) -> BigInt {
    let vs: Vec<IntVector> = vectors.iter().map(|v| int_vector(v)).collect();
    vol(vs.len(), &vs).expect("consistent dimensions")
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                Some(r) => {
                    a.swap_rows(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
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
    Ok(sign * a[(n - 1, n - 1)].clone())
}

/// Reduced row echelon form over ℚ; returns the pivot columns.
fn row_reduce(a: &mut RatMatrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = a[(row, col)].recip();
        for c in 0..a.cols {
            a[(row, c)] = &a[(row, c)] * &inv;
        }
        for r in 0..a.rows {
            if r != row && !a[(r, col)].is_zero() {
                let f = a[(r, col)].clone();
                for c in 0..a.cols {
                    let v = &f * &a[(row, c)];
                    a[(r, c)] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut a = m.clone();
    row_reduce(&mut a).len()
}

/// Rank of a family of integer vectors.
pub fn rank_of(vectors: &[Vec<i64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows: Vec<RatVector> = vectors.iter().map(|v| rat_vector(v)).collect();
    rank(&Matrix::from_rows(&rows))
}

pub fn inverse(m: &RatMatrix) -> Result<RatMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut aug = Matrix::filled(n, 2 * n, BigRational::zero());
    for r in 0..n {
        for c in 0..n {
            aug[(r, c)] = m[(r, c)].clone();
        }
        aug[(r, n + r)] = BigRational::one();
    }
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(LinalgError::Singular);
    }
    let mut inv = Matrix::filled(n, n, BigRational::zero());
    for r in 0..n {
        for c in 0..n {
            inv[(r, c)] = aug[(r, n + c)].clone();
        }
    }
    Ok(inv)
}

/// Dual basis: returns `B*` with `⟨B*ᵢ, Bⱼ⟩ = δᵢⱼ`.
pub fn dual_basis(basis: &[RatVector]) -> Result<Vec<RatVector>, LinalgError> {
    let n = basis.len();
    if let Some(bad) = basis.iter().find(|b| b.len() != n) {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    let inv = inverse(&Matrix::from_rows(basis))?;
    Ok((0..n).map(|c| inv.column(c)).collect())
}

/// Coordinates of `v` with respect to the linearly independent family
/// `basis`, or `None` when `v` is outside its span.
pub fn coordinates_in_span(basis: &[RatVector], v: &[BigRational]) -> Option<RatVector> {
    let k = basis.len();
    let dim = v.len();
    // Columns: basis vectors, then v.
    let mut aug = Matrix::filled(dim, k + 1, BigRational::zero());
    for (c, b) in basis.iter().enumerate() {
        assert_eq!(b.len(), dim, "dimension mismatch");
        for r in 0..dim {
            aug[(r, c)] = b[r].clone();
        }
    }
    for r in 0..dim {
        aug[(r, k)] = v[r].clone();
    }
    let pivots = row_reduce(&mut aug);
    if pivots.contains(&k) || pivots.len() < k {
        return None;
    }
    Some((0..k).map(|r| aug[(r, k)].clone()).collect())
}

/// Primitive generator of the kernel of an `(n-1) × n` integer matrix of
/// full row rank, normalized so its first nonzero entry is positive.
/// Computed from signed maximal minors.
pub fn kernel_line(rows: &[IntVector]) -> Option<IntVector> {
    let n = rows.len() + 1;
    let mut x = Vec::with_capacity(n);
    for skip in 0..n {
        let minor: Vec<IntVector> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != skip)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let d = if minor.is_empty() {
            BigInt::one()
        } else {
            determinant(&Matrix::from_rows(&minor)).expect("square minor")
        };
        x.push(if skip % 2 == 0 { d } else { -d });
    }
    if x.iter().all(Zero::is_zero) {
        return None;
    }
    Some(sign_normalized(&primitive(&x)))
}
