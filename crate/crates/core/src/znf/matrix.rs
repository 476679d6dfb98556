//! Dense integer matrices.

use std::fmt;

use super::int::{self, Int};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, int::one());
        }
        m
    }

    pub fn diagonal(entries: &[Int]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_int_rows(rows.len(), cols, rows.iter().map(|r| r.iter().map(|&x| int::int(x)).collect()).collect())
    }

    pub fn from_int_rows(nrows: usize, ncols: usize, rows: Vec<Vec<Int>>) -> Self {
        assert_eq!(rows.len(), nrows, "row count mismatch");
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged matrix rows");
            data.extend(r);
        }
        IntMatrix { rows: nrows, cols: ncols, data }
    }

    /// Build a matrix whose columns are the given vectors of length `nrows`.
    pub fn from_columns(nrows: usize, columns: &[Vec<Int>]) -> Self {
        let mut m = Self::zeros(nrows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), nrows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
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

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Int> {
        self.row(i).to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if int::is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !int::is_zero(b) {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut s = int::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !int::is_zero(a) && !int::is_zero(b) {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Int) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let rows = idx.iter().map(|&i| self.row_vec(i)).collect();
        Self::from_int_rows(idx.len(), self.cols, rows)
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(int::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || int::is_zero(self.get(i, j))))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &Int) {
        if int::is_zero(c) {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(src, j).clone();
            if !int::is_zero(&s) {
                *self.get_mut(dst, j) += c * &s;
            }
        }
    }

    /// col[dst] += c * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &Int) {
        if int::is_zero(c) {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src).clone();
            if !int::is_zero(&s) {
                *self.get_mut(i, dst) += c * &s;
            }
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// Replace rows (a, b) by (x*a + y*b, z*a + w*b).
    pub fn combine_rows(&mut self, a: usize, b: usize, x: &Int, y: &Int, z: &Int, w: &Int) {
        for j in 0..self.cols {
            let ra = self.get(a, j).clone();
            let rb = self.get(b, j).clone();
            if int::is_zero(&ra) && int::is_zero(&rb) {
                continue;
            }
            self.set(a, j, x * &ra + y * &rb);
            self.set(b, j, z * &ra + w * &rb);
        }
    }

    /// Replace columns (a, b) by (x*a + y*b, z*a + w*b).
    pub fn combine_cols(&mut self, a: usize, b: usize, x: &Int, y: &Int, z: &Int, w: &Int) {
        for i in 0..self.rows {
            let ca = self.get(i, a).clone();
            let cb = self.get(i, b).clone();
            if int::is_zero(&ca) && int::is_zero(&cb) {
                continue;
            }
            self.set(i, a, x * &ca + y * &cb);
            self.set(i, b, z * &ca + w * &cb);
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return int::one();
        }
        let mut a = self.clone();
        let mut sign = int::one();
        let mut prev = int::one();
        for k in 0..n - 1 {
            if int::is_zero(a.get(k, k)) {
                match (k + 1..n).find(|&i| !int::is_zero(a.get(i, k))) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j);
                    a.set(i, j, int::div_exact(&v, &prev));
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && int::abs(&self.determinant()) == int::one()
    }

    pub fn max_abs_entry(&self) -> Int {
        self.data.iter().map(int::abs).max().unwrap_or_else(int::zero)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let parts: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        let b = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b), IntMatrix::from_rows(&[vec![2, 1], vec![4, 3]]));
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = IntMatrix::from_rows(&[vec![2, -1, 3], vec![0, 4, 1], vec![5, 2, -2]]);
        // 2*(4*-2 - 1*2) - (-1)*(0*-2 - 1*5) + 3*(0*2 - 4*5)
        assert_eq!(a.determinant(), int::int(2 * (-10) + (-5) + 3 * (-20)));
        let singular = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(singular.determinant(), int::zero());
    }
}
