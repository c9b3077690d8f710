//! Dense exact matrices over the rationals.
//!
//! Row reduction is fraction free: every row is first cleared of
//! denominators, Bareiss elimination runs over `BigInt`, and only the final
//! back-substitution to reduced echelon form divides. Pivots are the first
//! nonzero entry at or below the current row, so echelon forms (and hence
//! subspace bases) are deterministic.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries(self.row_strings()).finish()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.row_strings().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds an `ambient x k` matrix whose columns are the given vectors.
    pub fn from_columns(ambient: usize, cols: &[Vec<Rational>]) -> Self {
        Self::from_fn(ambient, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn diag(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
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

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    fn same_shape(&self, other: &Matrix, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other, "add")?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other, "sub")?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(x, y)| x - y).collect(),
        })
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "apply: vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Kronecker product with `self` as the slow (outer) index.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r2, c2) = (other.rows, other.cols);
        Matrix::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            let a = &self[(i / r2, j / c2)];
            if a.is_zero() {
                Rational::zero()
            } else {
                a * &other[(i % r2, j % c2)]
            }
        })
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack: row counts differ".into()));
        }
        Ok(Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        }))
    }

    pub fn pow(&self, n: u32) -> Matrix {
        assert!(self.is_square());
        (0..n).fold(Matrix::identity(self.rows), |acc, _| &acc * self)
    }

    pub fn rank(&self) -> usize {
        rref(self).pivots.len()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "inverse of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n))?;
        let r = rref(&aug);
        let rank = r.pivots.iter().take_while(|&&p| p < n).count();
        if rank < n {
            return Err(Error::SingularMatrix { rank, dim: n });
        }
        Ok(Matrix::from_fn(n, n, |i, j| r.matrix[(i, n + j)].clone()))
    }

    /// Null space basis, canonicalized.
    pub fn kernel(&self) -> Subspace {
        let r = rref(self);
        Subspace::span(self.cols, &kernel_vectors(&r, self.cols))
    }

    /// Solves `self * x = rhs`, returning one solution (free variables set to
    /// zero) and the homogeneous solution space.
    pub fn solve_affine(&self, rhs: &[Rational]) -> Result<(Vec<Rational>, Subspace)> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve_affine: {} equations, rhs of length {}",
                self.rows,
                rhs.len()
            )));
        }
        let n = self.cols;
        let b = Matrix::from_columns(self.rows, &[rhs.to_vec()]);
        let r = rref(&self.hstack(&b)?);
        if r.pivots.contains(&n) {
            return Err(Error::NoSolution);
        }
        let mut x = vec![Rational::zero(); n];
        for (k, &p) in r.pivots.iter().enumerate() {
            x[p] = r.matrix[(k, n)].clone();
        }
        Ok((x, Subspace::span(n, &kernel_vectors(&r, n))))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix add")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).expect("matrix sub")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix mul")
    }
}

impl Mul<&Matrix> for &Rational {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        rhs.scale(self)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Matrix {
            type Output = Matrix;
            fn $m(self, rhs: Matrix) -> Matrix {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Matrix> for Matrix {
            type Output = Matrix;
            fn $m(self, rhs: &Matrix) -> Matrix {
                (&self).$m(rhs)
            }
        }
        impl $tr<Matrix> for &Matrix {
            type Output = Matrix;
            fn $m(self, rhs: Matrix) -> Matrix {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Mul<Matrix> for &Rational {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        rhs.scale(self)
    }
}

impl Neg for Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        -&self
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Clears denominators row by row.
fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) forward elimination. Returns the integer echelon
/// rows and pivot columns; rows past the rank are zero.
pub fn bareiss_echelon(m: &Matrix) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a = integer_rows(m);
    let (nr, nc) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut pr = 0;
    for c in 0..nc {
        if pr == nr {
            break;
        }
        let Some(src) = (pr..nr).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(pr, src);
        let (top, rest) = a.split_at_mut(pr + 1);
        let prow = &top[pr];
        let p = &prow[c];
        for row in rest.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..nc {
                let v = p * &row[j] - &f * &prow[j];
                let (quo, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = quo;
            }
            row[c] = BigInt::zero();
        }
        prev = p.clone();
        pivots.push(c);
        pr += 1;
    }
    (a, pivots)
}

pub fn rref(m: &Matrix) -> Rref {
    let (a, pivots) = bareiss_echelon(m);
    let mut out = Matrix::zeros(m.rows, m.cols);
    for (k, &p) in pivots.iter().enumerate() {
        let piv = Rational::from_integer(a[k][p].clone());
        for j in 0..m.cols {
            if !a[k][j].is_zero() {
                out[(k, j)] = Rational::from_integer(a[k][j].clone()) / &piv;
            }
        }
    }
    // back-substitution, bottom pivot first
    for (k, &p) in pivots.iter().enumerate().rev() {
        for i in 0..k {
            let f = out[(i, p)].clone();
            if f.is_zero() {
                continue;
            }
            for j in p..m.cols {
                let v = &out[(k, j)] * &f;
                if !v.is_zero() {
                    out[(i, j)] -= v;
                }
            }
        }
    }
    Rref {
        matrix: out,
        pivots,
    }
}

fn kernel_vectors(r: &Rref, n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .filter(|c| !r.pivots.contains(c))
        .map(|f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (k, &p) in r.pivots.iter().enumerate() {
                v[p] = -r.matrix[(k, f)].clone();
            }
            v
        })
        .collect()
}

/// A linear subspace of `Q^ambient`, stored by its canonical basis: the
/// nonzero rows of the reduced echelon form of any spanning set. Two
/// subspaces are equal iff their stored bases are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .basis
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .collect();
        write!(f, "Subspace(ambient {}, basis {:?})", self.ambient, rows)
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(
            ambient,
            &Matrix::identity(ambient).columns(),
        )
    }

    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Self {
        assert!(
            vectors.iter().all(|v| v.len() == ambient),
            "span: vector length differs from ambient dimension"
        );
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_fn(vectors.len(), ambient, |i, j| vectors[i][j].clone());
        let r = rref(&m);
        let basis = (0..r.pivots.len())
            .map(|k| r.matrix.row(k).to_vec())
            .collect();
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of Q^{} and Q^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let vs: Vec<_> = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Subspace::span(self.ambient, &vs))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        let bu = self.basis_matrix();
        let bw = -&other.basis_matrix();
        let k = bu.hstack(&bw)?.kernel();
        let du = self.dim();
        let vs: Vec<_> = k
            .basis
            .iter()
            .map(|x| bu.apply(&x[..du]))
            .collect();
        Ok(Subspace::span(self.ambient, &vs))
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        // basis rows are fully reduced, so one pass suffices
        for row in &self.basis {
            let p = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let f = w[p].clone();
            if !f.is_zero() {
                for (wj, rj) in w.iter_mut().zip(row) {
                    if !rj.is_zero() {
                        *wj -= &f * rj;
                    }
                }
            }
        }
        w.iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && other.basis.iter().all(|v| self.contains(v))
    }

    /// Image under a square map on the ambient space.
    pub fn image(&self, m: &Matrix) -> Subspace {
        let vs: Vec<_> = self.basis.iter().map(|v| m.apply(v)).collect();
        Subspace::span(m.rows(), &vs)
    }

    pub fn sum_all<'a>(ambient: usize, parts: impl IntoIterator<Item = &'a Subspace>) -> Subspace {
        let vs: Vec<_> = parts
            .into_iter()
            .flat_map(|s| s.basis.iter().cloned())
            .collect();
        Subspace::span(ambient, &vs)
    }

    /// True iff the dimensions of the parts add up to the dimension of their
    /// sum.
    pub fn is_direct_sum(parts: &[Subspace]) -> Result<bool> {
        let Some(first) = parts.first() else {
            return Ok(true);
        };
        for p in parts {
            first.check_ambient(p)?;
        }
        let total = Subspace::sum_all(first.ambient, parts);
        Ok(parts.iter().map(Subspace::dim).sum::<usize>() == total.dim())
    }
}

/// Incrementally grown span used for algebra-closure searches. Rows are kept
/// reduced against every earlier row's pivot.
#[derive(Clone, Debug, Default)]
pub struct SpanBuilder {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl SpanBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v`; returns true iff it was not already in the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            let f = w[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (wj, rj) in w.iter_mut().zip(row) {
                if !rj.is_zero() {
                    *wj -= &f * rj;
                }
            }
        }
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((p, w));
        true
    }
}
