//! Dense exact linear algebra over the rationals.
//!
//! Everything in the crate bottoms out here: ranks, kernels, images, linear
//! solves and quotient presentations `V -> V/W`. Elimination is plain
//! Gauss-Jordan with the first nonzero entry (in row order) of each column
//! taken as pivot, so all bases produced are deterministic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar, always kept in lowest terms.
pub type Rational = BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^n` as a rational.
pub fn sign(n: i64) -> Rational {
    if n.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Formats a rational as `p/q` (or `p` when the denominator is one).
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn zero_vec(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Rational> {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

pub fn add_scaled(acc: &mut [Rational], c: &Rational, v: &[Rational]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(fmt_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: zero_vec(rows * cols) }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_rows(&rows)
    }

    /// Matrix whose columns are the given vectors (all of length `dim`).
    pub fn from_columns(dim: usize, cols: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), dim);
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
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

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Rational) {
        if !v.is_zero() {
            self.data[r * self.cols + c] += v;
        }
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> Rational {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        let mut out = zero_vec(self.rows);
        for (r, o) in out.iter_mut().enumerate() {
            let row = self.row(r);
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Matrix) -> Matrix {
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Kronecker product; index `(i, j)` of the result's rows is `i * other.rows + j`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.get(r2, c2);
                        if !b.is_zero() {
                            out.data[(r1 * other.rows + r2) * cols + c1 * other.cols + c2] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut out = Self::zeros(idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut out = Self::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for col in 0..a.cols {
            if pr >= a.rows {
                break;
            }
            let Some(found) = (pr..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(found, pr);
            let inv = a.get(pr, col).recip();
            for c in col..a.cols {
                let v = a.get(pr, c) * &inv;
                a.set(pr, c, v);
            }
            let pivot_row: Vec<Rational> = a.row(pr)[col..].to_vec();
            for r in 0..a.rows {
                if r == pr {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for (k, p) in pivot_row.iter().enumerate() {
                    if !p.is_zero() {
                        let idx = r * a.cols + col + k;
                        a.data[idx] -= &factor * p;
                    }
                }
            }
            pivots.push(col);
            pr += 1;
        }
        (a, pivots)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Kernel basis as columns of the returned `cols x k` matrix.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        Self::kernel_from_rref(&r, &pivots, self.cols)
    }

    fn kernel_from_rref(r: &Matrix, pivots: &[usize], n: usize) -> Matrix {
        let mut is_pivot = vec![false; n];
        for &p in pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = unit_vec(n, fc);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, fc).clone();
            }
            basis.push(v);
        }
        Matrix::from_columns(n, &basis)
    }

    /// Columns of `self` at pivot positions: a basis of the column span.
    pub fn image(&self) -> Matrix {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    /// Some `x` with `self * x = b`, or `None` when `b` is outside the column span.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = zero_vec(self.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Solves `self * X = B` column by column; `None` if any column is inconsistent.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch("solve_matrix row mismatch".into()));
        }
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.cols, b.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(pc, c, r.get(row, self.cols + c).clone());
            }
        }
        Ok(Some(x))
    }

    /// Max absolute numerator, used only in diagnostics.
    pub fn height(&self) -> BigInt {
        self.data.iter().map(|x| x.numer().abs()).max().unwrap_or_default()
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix add shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sub shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix mul shape mismatch");
        self.mul_unchecked(rhs)
    }
}

/// A linearly independent family of vectors in `k^ambient_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspacePresentation {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<Rational>>,
}

impl SubspacePresentation {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspacePresentation { ambient_dim, basis: Vec::new() }
    }

    /// Independent subfamily of `vectors` spanning the same space.
    pub fn span(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient_dim);
        }
        Self::from_matrix(&Matrix::from_columns(ambient_dim, vectors).image())
    }

    pub fn from_matrix(columns: &Matrix) -> Self {
        SubspacePresentation { ambient_dim: columns.rows(), basis: columns.columns() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient_dim, &self.basis)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if is_zero_vec(v) {
            return true;
        }
        if self.basis.is_empty() {
            return false;
        }
        matches!(self.matrix().solve(v), Ok(Some(_)))
    }
}

/// Rank, kernel and image of a matrix in one elimination.
#[derive(Clone, Debug)]
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: SubspacePresentation,
    pub image: SubspacePresentation,
}

pub fn rank_kernel_image(m: &Matrix) -> RankKernelImage {
    let (r, pivots) = m.rref();
    let kernel = Matrix::kernel_from_rref(&r, &pivots, m.cols());
    let image = m.select_columns(&pivots);
    RankKernelImage {
        rank: pivots.len(),
        kernel: SubspacePresentation::from_matrix(&kernel),
        image: SubspacePresentation::from_matrix(&image),
    }
}

/// Presentation of `k^n / sub`: a surjection `proj` killing `sub` and a
/// section with `proj * section = id`.
///
/// The complement is spanned by the first standard basis vectors (in index
/// order) not already in the span, so `section` columns are standard vectors
/// and serve as coset representatives.
pub fn quotient_presentation(
    ambient_dim: usize,
    sub: &SubspacePresentation,
) -> Result<(Matrix, Matrix)> {
    if sub.ambient_dim != ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "subspace of k^{} in k^{}",
            sub.ambient_dim, ambient_dim
        )));
    }
    if sub.basis.iter().any(|v| v.len() != ambient_dim) {
        return Err(Error::DimensionMismatch("subspace vector length".into()));
    }
    let w = sub.matrix();
    // Pivots of [W | I] beyond the W block pick the complement.
    let (_, pivots) = w.hstack(&Matrix::identity(ambient_dim)).rref();
    let wdim = pivots.iter().filter(|&&p| p < w.cols()).count();
    if wdim != sub.dim() {
        return Err(Error::DimensionMismatch("subspace basis is not independent".into()));
    }
    let chosen: Vec<usize> =
        pivots.iter().filter(|&&p| p >= w.cols()).map(|&p| p - w.cols()).collect();
    let section = Matrix::identity(ambient_dim).select_columns(&chosen);
    let full = w.hstack(&section);
    let inv = full.inverse().expect("complement completes a basis");
    let rows: Vec<usize> = (wdim..ambient_dim).collect();
    let proj = inv.select_rows(&rows);
    Ok((proj, section))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_matrix() {
        let rki = rank_kernel_image(&Matrix::zeros(0, 0));
        assert_eq!(rki.rank, 0);
        assert_eq!(rki.kernel.dim(), 0);
        assert_eq!(rki.image.dim(), 0);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let rki = rank_kernel_image(&Matrix::identity(2));
        assert_eq!(rki.rank, 2);
        assert_eq!(rki.kernel.dim(), 0);
    }

    #[test]
    fn rank_one_kernel() {
        let m = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        let rki = rank_kernel_image(&m);
        assert_eq!(rki.rank, 1);
        assert_eq!(rki.kernel.dim(), 1);
        // spanned by (2, -1)
        let v = &rki.kernel.basis[0];
        assert_eq!(v[0].clone() * q(-1), v[1].clone() * q(2));
        assert!(is_zero_vec(&m.mul_vec(v)));
    }

    #[test]
    fn solve_cases() {
        let b = vec![q(3), qf(-1, 2)];
        assert_eq!(Matrix::identity(2).solve(&b).unwrap(), Some(b.clone()));

        let m = Matrix::from_i64(&[&[1, 1]]);
        let x = m.solve(&[q(3)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), vec![q(3)]);

        let m = Matrix::from_i64(&[&[1], &[2]]);
        assert_eq!(m.solve(&[q(1), q(3)]).unwrap(), None);
        assert!(m.solve(&[q(1)]).is_err());
    }

    #[test]
    fn quotient_cases() {
        let (p, s) = quotient_presentation(3, &SubspacePresentation::zero(3)).unwrap();
        assert_eq!(p, Matrix::identity(3));
        assert_eq!(s, Matrix::identity(3));

        let all = SubspacePresentation::span(3, &Matrix::identity(3).columns());
        let (p, _) = quotient_presentation(3, &all).unwrap();
        assert_eq!(p.shape(), (0, 3));

        let sub = SubspacePresentation::span(3, &[vec![q(0), q(0), q(1)]]);
        let (p, s) = quotient_presentation(3, &sub).unwrap();
        assert_eq!(p.shape(), (2, 3));
        assert!(is_zero_vec(&p.mul_vec(&sub.basis[0])));
        assert_eq!(&p * &s, Matrix::identity(2));

        assert!(quotient_presentation(4, &sub).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_i64(&[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn rational_text() {
        assert_eq!(fmt_rational(&qf(6, -4)), "-3/2");
        assert_eq!(parse_rational("-3/2"), Some(qf(-3, 2)));
        assert_eq!(parse_rational("7"), Some(q(7)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
