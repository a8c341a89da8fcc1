//! Dense square matrices of arbitrary-precision non-negative integers.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix must have dimension at least 1")]
    Empty,
    #[error("row {row} has {len} entries, expected {dim}")]
    Ragged { row: usize, len: usize, dim: usize },
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Square matrix with non-negative big-integer entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigUint>,
}

impl IntMatrix {
    pub fn new(dim: usize, entries: Vec<BigUint>) -> Result<Self, MatrixError> {
        if dim == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != dim * dim {
            return Err(MatrixError::WrongLength { expected: dim * dim, got: entries.len() });
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn from_rows<T, R>(rows: R) -> Result<Self, MatrixError>
    where
        T: Into<BigUint>,
        R: IntoIterator,
        R::Item: IntoIterator<Item = T>,
    {
        let rows: Vec<Vec<BigUint>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(Into::into).collect())
            .collect();
        let dim = rows.len();
        if dim == 0 {
            return Err(MatrixError::Empty);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(MatrixError::Ragged { row, len: r.len(), dim });
            }
            entries.extend(r);
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        IntMatrix { dim, entries: vec![BigUint::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigUint::one();
        }
        m
    }

    /// Matrix sending basis vector `j` to basis vector `image[j]`.
    pub fn permutation(image: &[usize]) -> Self {
        let mut m = Self::zeros(image.len());
        for (j, &i) in image.iter().enumerate() {
            m.entries[i * image.len() + j] = BigUint::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigUint) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigUint] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigUint]> {
        self.entries.chunks(self.dim)
    }

    pub fn row_sums(&self) -> Vec<BigUint> {
        self.rows().map(|r| r.iter().sum()).collect()
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|e| !e.is_zero())
    }

    pub fn trace(&self) -> BigUint {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Positions of nonzero entries, as a row-major boolean pattern.
    pub fn support(&self) -> Vec<bool> {
        self.entries.iter().map(|e| !e.is_zero()).collect()
    }

    pub fn pow(&self, k: u64) -> IntMatrix {
        mat_pow(self, k)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.dim;
        let mut a: Vec<BigInt> = self.entries.iter().map(|e| BigInt::from(e.clone())).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[k * n + k] * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.dim);
        for r in self.rows() {
            let line: Vec<String> = r.iter().map(ToString::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        if let Some(out) = mul_small(self, rhs) {
            return out;
        }
        let n = self.dim;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = &self.entries[i * n + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[l * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

/// Machine-word product when every output entry provably fits in `u128`:
/// row sums of `a` and entries of `b` below `2^64`.
fn mul_small(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let n = a.dim;
    let mut left = Vec::with_capacity(n * n);
    for row in a.entries.chunks(n) {
        let mut sum = 0u64;
        for x in row {
            let v = x.to_u64()?;
            sum = sum.checked_add(v)?;
            left.push(v);
        }
    }
    let right: Vec<u64> = b.entries.iter().map(|x| x.to_u64()).collect::<Option<_>>()?;
    let mut acc = vec![0u128; n];
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        acc.iter_mut().for_each(|x| *x = 0);
        for l in 0..n {
            let x = left[i * n + l] as u128;
            if x == 0 {
                continue;
            }
            for (o, &y) in acc.iter_mut().zip(&right[l * n..(l + 1) * n]) {
                *o += x * y as u128;
            }
        }
        entries.extend(acc.iter().map(|&x| BigUint::from(x)));
    }
    Some(IntMatrix { dim: n, entries })
}

/// `a^k` by repeated squaring; `a^0` is the identity.
pub fn mat_pow(a: &IntMatrix, mut k: u64) -> IntMatrix {
    let mut result = IntMatrix::identity(a.dim);
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.rows().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()))
            .finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parses the text format: a line holding `dim`, then `dim` lines of `dim`
/// whitespace-separated decimal integers. Blank lines and `#` comments are
/// skipped.
impl FromStr for IntMatrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(MatrixError::Empty)?;
        let dim: usize = header
            .parse()
            .map_err(|e| MatrixError::Parse { line, msg: format!("bad dimension: {e}") })?;
        if dim == 0 {
            return Err(MatrixError::Empty);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in 0..dim {
            let (line, text) = lines.next().ok_or(MatrixError::Parse {
                line: line + row + 1,
                msg: format!("missing row {row}"),
            })?;
            let vals = text
                .split_whitespace()
                .map(|t| t.parse::<BigUint>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| MatrixError::Parse { line, msg: e.to_string() })?;
            if vals.len() != dim {
                return Err(MatrixError::Ragged { row, len: vals.len(), dim });
            }
            entries.extend(vals);
        }
        if let Some((line, _)) = lines.next() {
            return Err(MatrixError::Parse { line, msg: "trailing content".into() });
        }
        IntMatrix::new(dim, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec())).unwrap()
    }

    /// Fibonacci numbers by the recurrence, independent of matrix code.
    fn fib(n: usize) -> u64 {
        let (mut a, mut b) = (0u64, 1u64);
        for _ in 0..n {
            (a, b) = (b, a + b);
        }
        a
    }

    #[test]
    fn fibonacci_power() {
        let p = mat_pow(&m(&[&[1, 1], &[1, 0]]), 10);
        assert_eq!(p, m(&[&[fib(11), fib(10)], &[fib(10), fib(9)]]));
        assert_eq!(p, m(&[&[89, 55], &[55, 34]]));
    }

    #[test]
    fn zeroth_power_is_identity() {
        let a = m(&[&[3, 0, 1], &[2, 2, 2], &[0, 5, 1]]);
        assert_eq!(mat_pow(&a, 0), IntMatrix::identity(3));
        assert_eq!(mat_pow(&a, 1), a);
    }

    #[test]
    fn square_by_hand() {
        assert_eq!(mat_pow(&m(&[&[2, 1], &[1, 1]]), 2), m(&[&[5, 3], &[3, 2]]));
    }

    #[test]
    fn large_powers_stay_exact() {
        let p = mat_pow(&m(&[&[1, 1], &[1, 0]]), 200);
        assert_eq!(
            p.get(0, 1).to_string(),
            "280571172992510140037611932413038677189525"
        );
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).determinant(), BigInt::from(1));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(), BigInt::from(0));
        assert_eq!(m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]).determinant(), BigInt::from(1));
        assert_eq!(m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).determinant(), BigInt::from(6));
    }

    #[test]
    fn permutation_matrix_maps_basis() {
        let p = IntMatrix::permutation(&[1, 2, 0]);
        assert_eq!(p, m(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]));
    }

    #[test]
    fn text_format_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.to_text(), "2\n2 1\n1 1\n");
        assert_eq!(a.to_text().parse::<IntMatrix>().unwrap(), a);
        let commented = "# fib\n2\n1 1 # row 0\n\n1 0\n";
        assert_eq!(commented.parse::<IntMatrix>().unwrap(), m(&[&[1, 1], &[1, 0]]));
    }

    #[test]
    fn text_format_errors() {
        assert_eq!("".parse::<IntMatrix>(), Err(MatrixError::Empty));
        assert_eq!("0\n".parse::<IntMatrix>(), Err(MatrixError::Empty));
        assert!(matches!("2\n1 1\n1\n".parse::<IntMatrix>(), Err(MatrixError::Ragged { row: 1, .. })));
        assert!(matches!("2\n1 -1\n1 1\n".parse::<IntMatrix>(), Err(MatrixError::Parse { line: 2, .. })));
        assert!(matches!("1\n1\n1\n".parse::<IntMatrix>(), Err(MatrixError::Parse { line: 3, .. })));
        assert!(matches!("2\n1 1\n".parse::<IntMatrix>(), Err(MatrixError::Parse { .. })));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = IntMatrix::from_rows(vec![vec![1u32, 2], vec![3u32]]).unwrap_err();
        assert_eq!(err, MatrixError::Ragged { row: 1, len: 1, dim: 2 });
    }
}
