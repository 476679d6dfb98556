//! Smith normal form.
//!
//! Two elimination strategies are provided. [`SnfStrategy::MinPivot`] moves the
//! smallest entry into the pivot position and clears its row and column with
//! 2×2 Bézout transforms. [`SnfStrategy::AlternatingHermite`] alternates row and
//! column Hermite reductions until the matrix is diagonal and then repairs the
//! divisibility chain with gcd/lcm exchanges. Both return `U·A·V = D`.

use super::int::{self, Int};
use super::matrix::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnfStrategy {
    MinPivot,
    AlternatingHermite,
}

#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Diagonal entries `d_1 | d_2 | ...`, zeros last, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Int> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    smith_normal_form_with(a, SnfStrategy::MinPivot)
}

pub fn smith_normal_form_with(a: &IntMatrix, strategy: SnfStrategy) -> Snf {
    let mut w = Work::new(a, true, false);
    match strategy {
        SnfStrategy::MinPivot => w.min_pivot(),
        SnfStrategy::AlternatingHermite => w.alternating(),
    }
    w.fix_diagonal();
    Snf { u: w.u.unwrap(), d: w.a, v: w.v.unwrap() }
}

/// Invariant factors of the cokernel presentation: the full diagonal of the SNF
/// padded with zeros to `a.rows()` entries.
pub fn cokernel_diagonal(a: &IntMatrix) -> Vec<Int> {
    let d = smith_normal_form(a).diagonal();
    let mut out = d;
    out.resize(a.rows(), int::zero());
    out
}

/// Row transform data for a presentation: `U·A·V = D` with `U^{-1}` also returned.
pub(crate) struct RowSnf {
    pub u: IntMatrix,
    pub uinv: IntMatrix,
    pub diag: Vec<Int>,
}

/// SNF keeping only the row transform and its inverse; `diag` has length `a.rows()`.
pub(crate) fn row_snf(a: &IntMatrix) -> RowSnf {
    let mut w = Work::new(a, false, true);
    w.min_pivot();
    w.fix_diagonal();
    let mut diag: Vec<Int> = (0..a.rows().min(a.cols())).map(|i| w.a.get(i, i).clone()).collect();
    diag.resize(a.rows(), int::zero());
    RowSnf { u: w.u.unwrap(), uinv: w.uinv.unwrap(), diag }
}

struct Work {
    a: IntMatrix,
    u: Option<IntMatrix>,
    uinv: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Work {
    fn new(a: &IntMatrix, track_v: bool, track_uinv: bool) -> Self {
        Work {
            a: a.clone(),
            u: Some(IntMatrix::identity(a.rows())),
            uinv: if track_uinv { Some(IntMatrix::identity(a.rows())) } else { None },
            v: if track_v { Some(IntMatrix::identity(a.cols())) } else { None },
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
        if let Some(ui) = &mut self.uinv {
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
        if let Some(ui) = &mut self.uinv {
            ui.negate_col(i);
        }
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &Int) {
        self.a.add_row_multiple(i, j, c);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(i, j, c);
        }
        if let Some(ui) = &mut self.uinv {
            ui.add_col_multiple(j, i, &-c.clone());
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &Int) {
        self.a.add_col_multiple(i, j, c);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(i, j, c);
        }
    }

    /// Rows (i, j) <- M (i, j) for M = [[x, y], [z, w]] of determinant 1.
    fn combine_rows(&mut self, i: usize, j: usize, x: &Int, y: &Int, z: &Int, w: &Int) {
        self.a.combine_rows(i, j, x, y, z, w);
        if let Some(u) = &mut self.u {
            u.combine_rows(i, j, x, y, z, w);
        }
        if let Some(ui) = &mut self.uinv {
            ui.combine_cols(i, j, w, &-z.clone(), &-y.clone(), x);
        }
    }

    fn combine_cols(&mut self, i: usize, j: usize, x: &Int, y: &Int, z: &Int, w: &Int) {
        self.a.combine_cols(i, j, x, y, z, w);
        if let Some(v) = &mut self.v {
            v.combine_cols(i, j, x, y, z, w);
        }
    }

    /// Make entry (i, c) zero using row t, leaving the gcd at (t, c).
    fn clear_with_row(&mut self, t: usize, i: usize, c: usize) {
        let a = self.a.get(t, c).clone();
        let b = self.a.get(i, c).clone();
        if int::is_zero(&b) {
            return;
        }
        if int::divides(&a, &b) {
            self.add_row(i, t, &-int::div_exact(&b, &a));
        } else {
            let (g, x, y) = int::ext_gcd(&a, &b);
            let z = -int::div_exact(&b, &g);
            let w = int::div_exact(&a, &g);
            self.combine_rows(t, i, &x, &y, &z, &w);
        }
    }

    fn clear_with_col(&mut self, t: usize, j: usize, r: usize) {
        let a = self.a.get(r, t).clone();
        let b = self.a.get(r, j).clone();
        if int::is_zero(&b) {
            return;
        }
        if int::divides(&a, &b) {
            self.add_col(j, t, &-int::div_exact(&b, &a));
        } else {
            let (g, x, y) = int::ext_gcd(&a, &b);
            let z = -int::div_exact(&b, &g);
            let w = int::div_exact(&a, &g);
            self.combine_cols(t, j, &x, &y, &z, &w);
        }
    }

    fn min_pivot(&mut self) {
        let (m, n) = (self.a.rows(), self.a.cols());
        let k = m.min(n);
        let mut t = 0;
        while t < k {
            let mut best: Option<(usize, usize, Int)> = None;
            for i in t..m {
                for j in t..n {
                    let e = self.a.get(i, j);
                    if int::is_zero(e) {
                        continue;
                    }
                    let ab = int::abs(e);
                    if best.as_ref().map_or(true, |b| ab < b.2) {
                        best = Some((i, j, ab));
                    }
                }
            }
            let (pi, pj, _) = match best {
                Some(b) => b,
                None => break,
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                for i in t + 1..m {
                    self.clear_with_row(t, i, t);
                }
                for j in t + 1..n {
                    self.clear_with_col(t, j, t);
                }
                let col_clear = (t + 1..m).all(|i| int::is_zero(self.a.get(i, t)));
                if !col_clear {
                    continue;
                }
                let p = self.a.get(t, t).clone();
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !int::divides(&p, self.a.get(i, j))));
                match bad {
                    Some(i) => self.add_row(t, i, &int::one()),
                    None => break,
                }
            }
            if int::is_neg(self.a.get(t, t)) {
                self.negate_row(t);
            }
            t += 1;
        }
    }

    fn row_hermite(&mut self) {
        let (m, n) = (self.a.rows(), self.a.cols());
        let mut r = 0;
        for c in 0..n {
            if r >= m {
                break;
            }
            let p = (r..m).filter(|&i| !int::is_zero(self.a.get(i, c))).min_by_key(|&i| int::abs(self.a.get(i, c)));
            let p = match p {
                Some(p) => p,
                None => continue,
            };
            self.swap_rows(r, p);
            for i in r + 1..m {
                self.clear_with_row(r, i, c);
            }
            r += 1;
        }
    }

    fn col_hermite(&mut self) {
        let (m, n) = (self.a.rows(), self.a.cols());
        let mut c = 0;
        for r in 0..m {
            if c >= n {
                break;
            }
            let p = (c..n).filter(|&j| !int::is_zero(self.a.get(r, j))).min_by_key(|&j| int::abs(self.a.get(r, j)));
            let p = match p {
                Some(p) => p,
                None => continue,
            };
            self.swap_cols(c, p);
            for j in c + 1..n {
                self.clear_with_col(c, j, r);
            }
            c += 1;
        }
    }

    fn alternating(&mut self) {
        loop {
            if self.a.is_diagonal() {
                break;
            }
            self.row_hermite();
            if self.a.is_diagonal() {
                break;
            }
            self.col_hermite();
        }
    }

    /// Bring a diagonal matrix into divisibility order with non-negative entries.
    fn fix_diagonal(&mut self) {
        let k = self.a.rows().min(self.a.cols());
        // Push zeros to the end.
        let mut nz: Vec<usize> = (0..k).filter(|&i| !int::is_zero(self.a.get(i, i))).collect();
        for (slot, &i) in nz.clone().iter().enumerate() {
            if slot != i {
                self.swap_rows(slot, i);
                self.swap_cols(slot, i);
            }
        }
        nz.truncate(nz.len());
        let r = nz.len();
        for i in 0..r {
            for j in i + 1..r {
                let a = self.a.get(i, i).clone();
                let b = self.a.get(j, j).clone();
                if int::divides(&a, &b) {
                    continue;
                }
                // diag(a, b) -> diag(g, ab/g)
                let (g, x, y) = int::ext_gcd(&a, &b);
                let bg = int::div_exact(&b, &g);
                let ag = int::div_exact(&a, &g);
                self.combine_rows(i, j, &x, &y, &-bg.clone(), &ag);
                // columns: [[1, -y b/g], [1, x a/g]] acting as (col_i, col_j) -> (col_i + col_j, -y b/g col_i + x a/g col_j)
                let one = int::one();
                let c1 = -(&y * &bg);
                let c2 = &x * &ag;
                self.combine_cols(i, j, &one, &one, &c1, &c2);
            }
        }
        for i in 0..r {
            if int::is_neg(self.a.get(i, i)) {
                self.negate_row(i);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::znf::int::int;

    fn check(a: &IntMatrix, s: &Snf) {
        assert!(s.u.is_unimodular());
        assert!(s.v.is_unimodular());
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert!(s.d.is_diagonal());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(int::divides(&w[0], &w[1]), "{diag:?}");
        }
    }

    #[test]
    fn two_by_two_example() {
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        for strat in [SnfStrategy::MinPivot, SnfStrategy::AlternatingHermite] {
            let s = smith_normal_form_with(&a, strat);
            check(&a, &s);
            assert_eq!(s.diagonal(), vec![int(2), int(4)]);
        }
    }

    #[test]
    fn degenerate_shapes() {
        for a in [IntMatrix::zeros(0, 0), IntMatrix::zeros(2, 3), IntMatrix::identity(3), IntMatrix::zeros(0, 2)] {
            for strat in [SnfStrategy::MinPivot, SnfStrategy::AlternatingHermite] {
                let s = smith_normal_form_with(&a, strat);
                check(&a, &s);
            }
        }
        assert_eq!(smith_normal_form(&IntMatrix::identity(3)).d, IntMatrix::identity(3));
    }

    #[test]
    fn row_transform_inverse() {
        let a = IntMatrix::from_rows(&[vec![4, 6, 0], vec![2, 8, 10], vec![-6, 2, 14]]);
        let r = row_snf(&a);
        assert_eq!(r.u.mul(&r.uinv), IntMatrix::identity(3));
    }

    #[test]
    fn diagonal_needs_repair() {
        let a = IntMatrix::from_rows(&[vec![6, 0], vec![0, 4]]);
        let s = smith_normal_form_with(&a, SnfStrategy::AlternatingHermite);
        check(&a, &s);
        assert_eq!(s.diagonal(), vec![int(2), int(12)]);
    }
}
