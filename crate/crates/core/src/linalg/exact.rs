//! Dense exact matrices over the rationals with an integer fast path.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(ExactMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&v| int(v)).collect())
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::from_i64(r, c, &rows.concat())
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

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn is_integer(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Entries as `i64` when every entry is an integer that fits.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.data.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect()
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_f64().unwrap_or(f64::NAN))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape("addition of mismatched shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape("subtraction of mismatched shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if let (Some(a), Some(b)) = (self.to_i64(), other.to_i64()) {
            if let Some(c) = mul_i128(&a, &b, self.rows, self.cols, other.cols) {
                return Ok(ExactMatrix { rows: self.rows, cols: other.cols, data: c });
            }
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn sum_entries(&self) -> BigRational {
        self.data.iter().sum()
    }

    pub fn row_sums(&self) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Principal submatrix on the given (row = column) indices.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let k = idx.len();
        let mut m = Self::zeros(k, k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.data[a * k + b] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Signed diagonal sum `sum_x (-1)^dims[x] M[x][x]`.
    pub fn super_trace(&self, dims: &[usize]) -> Result<BigRational> {
        if !self.is_square() || dims.len() != self.rows {
            return Err(Error::Shape(format!(
                "super trace of {}x{} with {} dimensions",
                self.rows,
                self.cols,
                dims.len()
            )));
        }
        Ok(dims
            .iter()
            .enumerate()
            .map(|(i, d)| if d % 2 == 0 { self.get(i, i).clone() } else { -self.get(i, i).clone() })
            .sum())
    }

    /// Integer matrix `lcm(denominators) * self` together with the common denominator.
    fn cleared(&self) -> (Vec<BigInt>, BigInt) {
        let mut l = BigInt::one();
        for x in &self.data {
            l = num::integer::lcm(l, x.denom().clone());
        }
        let ints = self.data.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
        (ints, l)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::Shape(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigRational::one());
        }
        if let Some(a) = self.to_i64() {
            if let Some(d) = bareiss_det_i128(&a, n) {
                return Ok(BigRational::from_integer(BigInt::from(d)));
            }
        }
        let (ints, l) = self.cleared();
        let d = bareiss_det_big(ints, n);
        Ok(BigRational::new(d, num::pow(l, n)))
    }

    /// Exact inverse by fraction-free Gauss–Jordan on `[M | I]`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape(format!("inverse of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if let Some(a) = self.to_i64() {
            if let Some(res) = gauss_jordan_i128(&a, n) {
                let (adj, d) = res.ok_or(Error::SingularMatrix)?;
                let data = adj
                    .into_iter()
                    .map(|x| BigRational::new(BigInt::from(x), BigInt::from(d)))
                    .collect();
                return Ok(ExactMatrix { rows: n, cols: n, data });
            }
        }
        let (ints, l) = self.cleared();
        let (adj, d) = gauss_jordan_big(ints, n).ok_or(Error::SingularMatrix)?;
        // (L M)^{-1} = adj / d, hence M^{-1} = L adj / d
        let data = adj.into_iter().map(|x| BigRational::new(x * &l, d.clone())).collect();
        Ok(ExactMatrix { rows: n, cols: n, data })
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        let (ints, _) = self.cleared();
        integer_rank(ints, self.rows, self.cols)
    }

    /// Basis of the right null space, one vector per free column of the reduced row echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -rref.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in c..m.cols {
                        let v = m.get(i, j) - &f * m.get(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Coefficients `c_0..c_n` of `det(I + z M)`, lowest degree first.
    pub fn fredholm_polynomial(&self) -> Result<Vec<BigInt>> {
        if !self.is_square() {
            return Err(Error::Shape("Fredholm determinant of a non-square matrix".into()));
        }
        if !self.is_integer() {
            return Err(Error::InvalidArgument("Fredholm polynomial needs an integer matrix".into()));
        }
        let n = self.rows;
        let a: Vec<BigInt> = self.data.iter().map(|x| x.to_integer()).collect();
        let c = berkowitz(&a, n);
        // det(xI - M) = sum_k c_k x^{n-k} and det(I + zM) = sum_k (-1)^k c_k z^k
        Ok(c.into_iter()
            .enumerate()
            .map(|(k, ck)| if k % 2 == 0 { ck } else { -ck })
            .collect())
    }
}

fn mul_i128(a: &[i64], b: &[i64], n: usize, m: usize, p: usize) -> Option<Vec<BigRational>> {
    let mut out = Vec::with_capacity(n * p);
    for i in 0..n {
        for j in 0..p {
            let mut s: i128 = 0;
            for k in 0..m {
                s = s.checked_add((a[i * m + k] as i128).checked_mul(b[k * p + j] as i128)?)?;
            }
            out.push(BigRational::from_integer(BigInt::from(s)));
        }
    }
    Some(out)
}

fn bareiss_det_i128(a: &[i64], n: usize) -> Option<i128> {
    let mut m: Vec<i128> = a.iter().map(|&x| x as i128).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| m[i * n + k] != 0) else {
            return Some(0);
        };
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i * n + j]
                    .checked_mul(m[k * n + k])?
                    .checked_sub(m[i * n + k].checked_mul(m[k * n + j])?)?;
                m[i * n + j] = v / prev;
            }
        }
        prev = m[k * n + k];
    }
    Some(sign * m[(n - 1) * n + (n - 1)])
}

fn bareiss_det_big(mut m: Vec<BigInt>, n: usize) -> BigInt {
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i * n + k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                m[i * n + j] = v / &prev;
            }
        }
        prev = m[k * n + k].clone();
    }
    sign * &m[(n - 1) * n + (n - 1)]
}

/// Fraction-free Gauss–Jordan on `[A | I]`. Returns `(B, d)` with `A^{-1} = B / d`,
/// `None` inside when singular; the outer `None` signals i128 overflow.
#[allow(clippy::type_complexity)]
fn gauss_jordan_i128(a: &[i64], n: usize) -> Option<Option<(Vec<i128>, i128)>> {
    let w = 2 * n;
    let mut m = vec![0i128; n * w];
    for i in 0..n {
        for j in 0..n {
            m[i * w + j] = a[i * n + j] as i128;
        }
        m[i * w + n + i] = 1;
    }
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| m[i * w + k] != 0) else {
            return Some(None);
        };
        if p != k {
            for j in 0..w {
                m.swap(k * w + j, p * w + j);
            }
        }
        let piv = m[k * w + k];
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[i * w + k];
            for j in 0..w {
                if j == k {
                    continue;
                }
                let v = m[i * w + j].checked_mul(piv)?.checked_sub(f.checked_mul(m[k * w + j])?)?;
                m[i * w + j] = v / prev;
            }
            m[i * w + k] = 0;
        }
        prev = piv;
    }
    let d = prev;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.extend_from_slice(&m[i * w + n..(i + 1) * w]);
    }
    let g = out.iter().fold(d.abs(), |g, &x| gcd_i128(g, x.abs()));
    let (d, out) = if g > 1 { (d / g, out.into_iter().map(|x| x / g).collect()) } else { (d, out) };
    Some(Some((out, d)))
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gauss_jordan_big(a: Vec<BigInt>, n: usize) -> Option<(Vec<BigInt>, BigInt)> {
    let w = 2 * n;
    let mut m = vec![BigInt::zero(); n * w];
    for i in 0..n {
        for j in 0..n {
            m[i * w + j] = a[i * n + j].clone();
        }
        m[i * w + n + i] = BigInt::one();
    }
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i * w + k].is_zero())?;
        if p != k {
            for j in 0..w {
                m.swap(k * w + j, p * w + j);
            }
        }
        let piv = m[k * w + k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[i * w + k].clone();
            for j in 0..w {
                if j == k {
                    continue;
                }
                let v = &m[i * w + j] * &piv - &f * &m[k * w + j];
                m[i * w + j] = v / &prev;
            }
            m[i * w + k] = BigInt::zero();
        }
        prev = piv;
    }
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.extend_from_slice(&m[i * w + n..(i + 1) * w]);
    }
    Some((out, prev))
}

fn integer_rank(mut m: Vec<BigInt>, rows: usize, cols: usize) -> usize {
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.swap(r * cols + j, p * cols + j);
            }
        }
        let piv = m[r * cols + c].clone();
        for i in r + 1..rows {
            let f = m[i * cols + c].clone();
            for j in c..cols {
                let v = &m[i * cols + j] * &piv - &f * &m[r * cols + j];
                m[i * cols + j] = v / &prev;
            }
        }
        prev = piv.abs();
        r += 1;
    }
    r
}

/// Division-free characteristic polynomial; returns `c_0..c_n` of `det(xI - A) = sum c_k x^{n-k}`.
fn berkowitz(a: &[BigInt], n: usize) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    let at = |i: usize, j: usize| &a[i * n + j];
    let mut vect = vec![BigInt::one(), -at(0, 0).clone()];
    for r in 1..n {
        // Q = [1, -a_rr, -R C, -R S C, ..., -R S^{r-1} C] with S the leading r x r block
        let mut q = vec![BigInt::one(), -at(r, r).clone()];
        let mut col: Vec<BigInt> = (0..r).map(|i| at(i, r).clone()).collect();
        for _ in 0..r {
            let rc: BigInt = (0..r).map(|j| at(r, j) * &col[j]).sum();
            q.push(-rc);
            col = (0..r).map(|i| (0..r).map(|j| at(i, j) * &col[j]).sum()).collect();
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, v) in vect.iter().enumerate().take(i + 1) {
                if i - j < q.len() {
                    *slot += &q[i - j] * v;
                }
            }
        }
        vect = next;
    }
    vect
}

/// Evaluates an integer polynomial (lowest degree first) at a rational point.
pub fn eval_poly(coeffs: &[BigInt], z: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * z + BigRational::from_integer(c.clone()))
}

/// Sign-agnostic helper used in checks: |x| == 1.
pub fn is_unit(x: &BigRational) -> bool {
    x.abs().is_one()
}
