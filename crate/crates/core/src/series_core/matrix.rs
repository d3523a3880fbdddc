//! Dense matrices of Puiseux series.

use std::fmt;

use nalgebra::DMatrix;
use num_integer::Integer;

use super::exponent::{Exponent, Valuation};
use super::series::{PuiseuxSeries, DEFAULT_ZERO_TOL};
use super::SeriesError;
use crate::dense::singular_values;

/// A column of Puiseux series.
pub type PuiseuxVector = Vec<PuiseuxSeries>;

/// Valuation of a vector: the minimum entry valuation.
pub fn vector_val(v: &[PuiseuxSeries]) -> Valuation {
    v.iter().map(PuiseuxSeries::val).min().unwrap_or(Valuation::Infinite)
}

/// Sign pattern of a Puiseux matrix, from most to least specific.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Positivity {
    /// Every nonzero entry has a positive leading coefficient and no negative coefficient.
    SubtractionFree,
    /// Every entry is nonzero with a positive leading coefficient.
    Positive,
    /// Every entry is zero or has a positive leading coefficient.
    Nonnegative,
    General,
}

impl Positivity {
    /// True for every class except `General`.
    pub fn is_nonnegative(self) -> bool {
        self != Positivity::General
    }
}

#[derive(Clone, PartialEq)]
pub struct PuiseuxMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<PuiseuxSeries>,
}

impl PuiseuxMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<PuiseuxSeries>) -> Result<Self, SeriesError> {
        if entries.len() != rows * cols {
            return Err(SeriesError::DimensionMismatch { expected: (rows, cols), found: (entries.len(), 1) });
        }
        Ok(PuiseuxMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<PuiseuxSeries>>) -> Result<Self, SeriesError> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(SeriesError::DimensionMismatch { expected: (n, m), found: (n, bad.len()) });
        }
        Ok(PuiseuxMatrix { rows: n, cols: m, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> PuiseuxSeries) -> Self {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        PuiseuxMatrix { rows, cols, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { PuiseuxSeries::one() } else { PuiseuxSeries::zero() })
    }

    /// Lifts a real matrix to constant series.
    pub fn from_real(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| PuiseuxSeries::constant(m[(i, j)]))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PuiseuxSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: PuiseuxSeries) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[PuiseuxSeries] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[PuiseuxSeries] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Least common multiple of entry ramifications.
    pub fn ramification(&self) -> i64 {
        self.entries.iter().fold(1i64, |acc, x| acc.lcm(&x.ramification()))
    }

    /// Minimum entry valuation.
    pub fn val(&self) -> Valuation {
        vector_val(&self.entries)
    }

    /// Minimum entry truncation.
    pub fn trunc(&self) -> Valuation {
        self.entries.iter().map(PuiseuxSeries::trunc).min().unwrap_or(Valuation::Infinite)
    }

    /// Entry valuations in row-major order.
    pub fn valuations(&self) -> Vec<Valuation> {
        self.entries.iter().map(PuiseuxSeries::val).collect()
    }

    /// Real coefficient matrix of `t^e`.
    pub fn coeff_matrix(&self, e: Exponent) -> Result<DMatrix<f64>, SeriesError> {
        let mut out = DMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self.get(i, j).coeff(e)?;
            }
        }
        Ok(out)
    }

    /// The coefficient matrix at the matrix valuation.
    pub fn leading_term(&self) -> Result<DMatrix<f64>, SeriesError> {
        match self.val() {
            Valuation::Finite(v) => self.coeff_matrix(v),
            Valuation::Infinite => Err(SeriesError::ZeroMatrix),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn truncated(&self, t: Valuation) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).truncated(t))
    }

    /// Principal or general submatrix on the given index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), SeriesError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(SeriesError::DimensionMismatch {
                expected: (self.rows, self.cols),
                found: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j)))
    }

    /// `Y − λ·Id`.
    pub fn sub_scalar(&self, lambda: &PuiseuxSeries) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            if i == j {
                self.get(i, j) - lambda
            } else {
                self.get(i, j).clone()
            }
        })
    }

    /// Matrix product with truncation propagated entrywise.
    pub fn mat_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.cols != other.rows {
            return Err(SeriesError::DimensionMismatch {
                expected: (self.cols, other.cols),
                found: (other.rows, other.cols),
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            dot((0..self.cols).map(|k| (self.get(i, k), other.get(k, j))))
        }))
    }

    pub fn mat_vec(&self, v: &[PuiseuxSeries]) -> Result<PuiseuxVector, SeriesError> {
        if self.cols != v.len() {
            return Err(SeriesError::DimensionMismatch { expected: (self.cols, 1), found: (v.len(), 1) });
        }
        Ok((0..self.rows).map(|i| dot((0..self.cols).map(|k| (self.get(i, k), &v[k])))).collect())
    }

    /// `δ⁻¹·Y·δ` with `δ = diag(t^{r_i})`: entry `(i, j)` gains `t^{r_j − r_i}`.
    pub fn diag_conjugate(&self, r: &[Exponent]) -> Result<Self, SeriesError> {
        if !self.is_square() || r.len() != self.rows {
            return Err(SeriesError::DimensionMismatch {
                expected: (self.rows, self.cols),
                found: (r.len(), r.len()),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).shift(r[j] - r[i])))
    }

    /// Most specific sign class of the entries.
    pub fn positivity(&self) -> Positivity {
        let sf = self.entries.iter().all(|x| x.is_zero() || x.is_subtraction_free());
        let nonneg = self.entries.iter().all(|x| x.is_zero() || x.is_positive());
        let no_zero = self.entries.iter().all(|x| !x.is_zero());
        match (sf, nonneg, no_zero) {
            (true, _, _) => Positivity::SubtractionFree,
            (false, true, true) => Positivity::Positive,
            (false, true, false) => Positivity::Nonnegative,
            _ => Positivity::General,
        }
    }
}

fn dot<'a>(pairs: impl Iterator<Item = (&'a PuiseuxSeries, &'a PuiseuxSeries)>) -> PuiseuxSeries {
    pairs.fold(PuiseuxSeries::zero(), |acc, (a, b)| &acc + &(a * b))
}

/// Solves `A·x = b` modulo terms above `order`.
///
/// Gaussian elimination over truncated series, pivoting on the entry of
/// least valuation in each column. The leading term of `A` must be invertible.
pub fn solve_linear(
    a: &PuiseuxMatrix,
    b: &[PuiseuxSeries],
    order: Exponent,
) -> Result<PuiseuxVector, SeriesError> {
    let n = a.nrows();
    if !a.is_square() || b.len() != n {
        return Err(SeriesError::DimensionMismatch { expected: (n, n), found: (b.len(), a.ncols()) });
    }
    let lead = a.leading_term().map_err(|_| SeriesError::SingularLeadingTerm)?;
    let scale = lead.amax().max(1e-300);
    let smin = singular_values(&lead).into_iter().fold(f64::INFINITY, f64::min);
    if n > 0 && smin <= 1e-9 * scale {
        return Err(SeriesError::SingularLeadingTerm);
    }
    let va = a.val().expect_finite("nonzero matrix");
    let spread = match a.entries.iter().filter_map(|x| x.val().finite()).max() {
        Some(m) => m - va,
        None => Exponent::ZERO,
    };
    let mut work = order - va + spread + Exponent::ONE;
    let target = Valuation::Finite(order);
    let mut best: Option<PuiseuxVector> = None;
    for _ in 0..8 {
        let x = eliminate(a, b, work)?;
        let reached = vector_trunc(&x);
        if reached >= target {
            return Ok(x.iter().map(|s| s.truncated(target).chop(DEFAULT_ZERO_TOL)).collect());
        }
        let improved = best.as_ref().is_none_or(|bx| vector_trunc(bx) < reached);
        best = Some(x);
        if !improved {
            break;
        }
        work = work + work.abs() + Exponent::ONE;
    }
    Ok(best.unwrap_or_default())
}

fn vector_trunc(v: &[PuiseuxSeries]) -> Valuation {
    v.iter().map(PuiseuxSeries::trunc).min().unwrap_or(Valuation::Infinite)
}

fn eliminate(a: &PuiseuxMatrix, b: &[PuiseuxSeries], work: Exponent) -> Result<PuiseuxVector, SeriesError> {
    let n = a.nrows();
    let mut m: Vec<Vec<PuiseuxSeries>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let pivot_row = (k..n)
            .filter(|&i| !m[i][k].is_zero())
            .min_by(|&i, &j| {
                m[i][k].val().cmp(&m[j][k].val()).then_with(|| {
                    let ci = m[i][k].leading_coeff().unwrap_or(0.0).abs();
                    let cj = m[j][k].leading_coeff().unwrap_or(0.0).abs();
                    cj.total_cmp(&ci)
                })
            })
            .ok_or(SeriesError::SingularLeadingTerm)?;
        m.swap(k, pivot_row);
        let pv = m[k][k].val().expect_finite("pivot");
        let inv = m[k][k].invert(work - pv)?;
        let (upper, lower) = m.split_at_mut(k + 1);
        let pivot = &upper[k];
        for row in lower.iter_mut().filter(|row| !row[k].is_zero()) {
            let factor = &row[k] * &inv;
            for (x, p) in row.iter_mut().zip(pivot).skip(k) {
                *x = &*x - &(&factor * p);
            }
        }
        pivots.push(inv);
    }
    let mut x = vec![PuiseuxSeries::zero(); n];
    for k in (0..n).rev() {
        let mut rhs = m[k][n].clone();
        for j in k + 1..n {
            rhs = &rhs - &(&m[k][j] * &x[j]);
        }
        x[k] = &rhs * &pivots[k];
    }
    Ok(x)
}

impl fmt::Debug for PuiseuxMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
