use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense real matrix stored in row-major order.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::domain(format!("matrix shape {rows}x{cols} is empty")));
        }
        if data.len() != rows * cols {
            return Err(Error::domain(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "non-finite entry at ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be non-empty");
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::domain("rows have unequal lengths"));
        }
        Self::new(r, c, rows.concat())
    }

    /// Builds an `n x k` matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, columns: &[Vec<f64>]) -> Self {
        let mut m = Self::zeros(n, columns.len().max(1));
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n, "column length mismatch");
            for i in 0..n {
                m[(i, j)] = col[i];
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

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `‖A − Aᵀ‖_max` for square matrices.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Self {
        assert_eq!(self.rows, other.rows, "hcat row mismatch");
        let cols = self.cols + other.cols;
        let mut m = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            m.data[i * cols..i * cols + self.cols].copy_from_slice(self.row(i));
            m.data[i * cols + self.cols..(i + 1) * cols].copy_from_slice(other.row(i));
        }
        m
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Matrix) -> Self {
        assert_eq!(self.cols, other.cols, "vcat column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, keep: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, keep.len().max(1));
        for (k, &j) in keep.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, k)] = self[(i, j)];
            }
        }
        m
    }

    /// Parses the text format: a `rows cols` line followed by `rows` lines of
    /// whitespace-separated decimals. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let m = Self::parse_lines(&mut lines)?;
        if let Some((line, _)) = lines.next() {
            return Err(Error::parse(line, "end of matrix data"));
        }
        Ok(m)
    }

    /// Parses one matrix block from an iterator of `(line number, content)`
    /// pairs, consuming exactly the header and the row lines.
    pub fn parse_lines<'a, I>(lines: &mut I) -> Result<Self>
    where
        I: Iterator<Item = (usize, &'a str)>,
    {
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(0, "a 'rows cols' header"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(hline, "a 'rows cols' header of two integers"))?;
        let [rows, cols] = dims[..] else {
            return Err(Error::parse(hline, "a 'rows cols' header of two integers"));
        };
        if rows == 0 || cols == 0 {
            return Err(Error::parse(hline, "positive matrix dimensions"));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (line, content) = lines
                .next()
                .ok_or_else(|| Error::parse(hline + r + 1, format!("matrix row {} of {rows}", r + 1)))?;
            let before = data.len();
            for tok in content.split_whitespace() {
                let v: f64 = tok
                    .parse()
                    .map_err(|_| Error::parse(line, format!("a decimal number, found '{tok}'")))?;
                if !v.is_finite() {
                    return Err(Error::parse(line, "a finite number"));
                }
                data.push(v);
            }
            if data.len() - before != cols {
                return Err(Error::parse(line, format!("{cols} entries, found {}", data.len() - before)));
            }
        }
        Self::new(rows, cols, data)
    }

    /// Writes the text format read by [`Matrix::parse`]. `{:e}`-free output
    /// using Rust's shortest round-trip representation.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:>12.6}")).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(Matrix::new(1, 1, vec![f64::NAN]).is_err());
        assert!(Matrix::new(0, 2, vec![]).is_err());
        assert!(Matrix::new(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn matmul_and_transpose() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = &a * &a.transpose();
        assert_eq!(b.as_slice(), &[5.0, 11.0, 11.0, 25.0]);
    }

    #[test]
    fn text_format_round_trip() {
        let a = Matrix::from_rows(&[vec![0.1, -2.5e-7], vec![3.0, 1.0 / 3.0]]).unwrap();
        let b = Matrix::parse(&a.to_text()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = Matrix::parse("2 2\n1 2\n3 x\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = Matrix::parse("2 2\n1 2 3\n3 4\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(Matrix::parse("2 2\n1 2\n").is_err());
    }
}
