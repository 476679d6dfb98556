//! Subgroups of ℤ^n in row Hermite form, integer kernels and linear solving.

use super::int::{self, Int};
use super::matrix::IntMatrix;

/// A subgroup of ℤ^n stored as an echelon basis.
///
/// Rows are ordered by strictly increasing pivot column and every pivot entry
/// is positive. When the lattice is known to contain `m_i e_i` for a positive
/// modulus on every coordinate, entries are kept reduced modulo those moduli.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<Int>>,
    pivots: Vec<usize>,
    moduli: Option<Vec<Int>>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, rows: Vec::new(), pivots: Vec::new(), moduli: None }
    }

    pub fn full(dim: usize) -> Self {
        Self::containing_moduli(&vec![int::one(); dim])
    }

    /// The lattice spanned by `m_i e_i` (a zero modulus contributes nothing).
    pub fn containing_moduli(moduli: &[Int]) -> Self {
        let dim = moduli.len();
        if dim > 0 && moduli.iter().all(|m| !int::is_zero(m)) {
            let mut rows = Vec::with_capacity(dim);
            for (i, m) in moduli.iter().enumerate() {
                let mut r = vec![int::zero(); dim];
                r[i] = int::abs(m);
                rows.push(r);
            }
            Lattice {
                dim,
                rows,
                pivots: (0..dim).collect(),
                moduli: Some(moduli.iter().map(int::abs).collect()),
            }
        } else {
            let mut l = Self::zero(dim);
            for (i, m) in moduli.iter().enumerate() {
                if !int::is_zero(m) {
                    let mut r = vec![int::zero(); dim];
                    r[i] = m.clone();
                    l.insert(r);
                }
            }
            l
        }
    }

    pub fn from_generators<I: IntoIterator<Item = Vec<Int>>>(dim: usize, gens: I) -> Self {
        let mut l = Self::zero(dim);
        l.extend(gens);
        l.hermite_reduce();
        l
    }

    pub fn with_moduli_and_generators<I: IntoIterator<Item = Vec<Int>>>(moduli: &[Int], gens: I) -> Self {
        let mut l = Self::containing_moduli(moduli);
        l.extend(gens);
        l.hermite_reduce();
        l
    }

    pub fn extend<I: IntoIterator<Item = Vec<Int>>>(&mut self, gens: I) {
        for g in gens {
            self.insert(g);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_int_rows(self.rows.len(), self.dim, self.rows.clone())
    }

    fn reduce_entry(&self, j: usize, x: &mut Int) {
        if let Some(m) = &self.moduli {
            *x = int::rem_floor(x, &m[j]);
        }
    }

    fn reduce_vec(&self, v: &mut [Int], from: usize) {
        if let Some(m) = &self.moduli {
            for j in from..v.len() {
                if !int::is_zero(&v[j]) {
                    v[j] = int::rem_floor(&v[j], &m[j]);
                }
            }
        }
    }

    /// Add a generator.
    pub fn insert(&mut self, mut v: Vec<Int>) {
        assert_eq!(v.len(), self.dim, "vector length does not match lattice dimension");
        self.reduce_vec(&mut v, 0);
        let mut start = 0;
        loop {
            let c = match (start..self.dim).find(|&j| !int::is_zero(&v[j])) {
                Some(c) => c,
                None => return,
            };
            match self.pivots.binary_search(&c) {
                Err(pos) => {
                    if int::is_neg(&v[c]) {
                        for x in v.iter_mut() {
                            *x = -std::mem::replace(x, int::zero());
                        }
                        self.reduce_vec(&mut v, c + 1);
                    }
                    self.rows.insert(pos, v);
                    self.pivots.insert(pos, c);
                    return;
                }
                Ok(pos) => {
                    let a = self.rows[pos][c].clone();
                    let b = v[c].clone();
                    if int::divides(&a, &b) {
                        let q = int::div_exact(&b, &a);
                        let r = &self.rows[pos];
                        for j in c..self.dim {
                            if !int::is_zero(&r[j]) {
                                v[j] -= &q * &r[j];
                            }
                        }
                        self.reduce_vec(&mut v, c + 1);
                    } else {
                        let (g, x, y) = int::ext_gcd(&a, &b);
                        let ag = int::div_exact(&a, &g);
                        let bg = int::div_exact(&b, &g);
                        let mut newr = vec![int::zero(); self.dim];
                        {
                            let r = &self.rows[pos];
                            for j in c..self.dim {
                                let (rj, vj) = (&r[j], &v[j]);
                                if int::is_zero(rj) && int::is_zero(vj) {
                                    continue;
                                }
                                newr[j] = &x * rj + &y * vj;
                                v[j] = &ag * vj - &bg * rj;
                            }
                        }
                        for j in c + 1..self.dim {
                            let mut e = std::mem::replace(&mut newr[j], int::zero());
                            self.reduce_entry(j, &mut e);
                            newr[j] = e;
                        }
                        self.reduce_vec(&mut v, c + 1);
                        self.rows[pos] = newr;
                    }
                    start = c + 1;
                }
            }
        }
    }

    /// Reduce entries above each pivot into `[0, pivot)`.
    pub fn hermite_reduce(&mut self) {
        let k = self.rows.len();
        for t in (0..k).rev() {
            let p = self.pivots[t];
            let piv = self.rows[t][p].clone();
            for s in 0..t {
                let e = self.rows[s][p].clone();
                if int::is_zero(&e) {
                    continue;
                }
                let q = int::div_floor(&e, &piv);
                if int::is_zero(&q) {
                    continue;
                }
                let (head, tail) = self.rows.split_at_mut(t);
                let src = &tail[0];
                let dst = &mut head[s];
                for j in p..self.dim {
                    if !int::is_zero(&src[j]) {
                        dst[j] -= &q * &src[j];
                    }
                }
            }
        }
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is not in the lattice.
    pub fn coords(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        let mut out = Vec::with_capacity(self.rows.len());
        let mut cursor = 0;
        for (t, r) in self.rows.iter().enumerate() {
            let p = self.pivots[t];
            if (cursor..p).any(|j| !int::is_zero(&w[j])) {
                return None;
            }
            let b = &w[p];
            if !int::divides(&r[p], b) {
                return None;
            }
            let q = int::div_exact(b, &r[p]);
            if !int::is_zero(&q) {
                for j in p..self.dim {
                    if !int::is_zero(&r[j]) {
                        w[j] -= &q * &r[j];
                    }
                }
            }
            out.push(q);
            cursor = p + 1;
        }
        if (cursor..self.dim).any(|j| !int::is_zero(&w[j])) {
            return None;
        }
        Some(out)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn same_as(&self, other: &Lattice) -> bool {
        self.dim == other.dim && self.rank() == other.rank() && self.contains_lattice(other) && other.contains_lattice(self)
    }

    /// Linear combination of basis rows.
    pub fn combine(&self, coords: &[Int]) -> Vec<Int> {
        let mut out = vec![int::zero(); self.dim];
        for (c, r) in coords.iter().zip(&self.rows) {
            if int::is_zero(c) {
                continue;
            }
            for j in 0..self.dim {
                if !int::is_zero(&r[j]) {
                    out[j] += c * &r[j];
                }
            }
        }
        out
    }

    /// Product of pivots for a full-rank lattice, i.e. the index in ℤ^n.
    pub fn index(&self) -> Option<Int> {
        if self.rank() < self.dim {
            return None;
        }
        let mut p = int::one();
        for (t, r) in self.rows.iter().enumerate() {
            p *= &r[self.pivots[t]];
        }
        Some(p)
    }
}

/// Basis of the integer kernel `{x : A x = 0}` for the matrix with the given rows.
///
/// Works from a fraction-free reduced echelon form with primitive rows, then
/// saturates over the free coordinates, which keeps entries near the size of
/// the minors of `A`.
pub fn integer_kernel(dim: usize, rows: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let (ech, pivots) = reduced_echelon(dim, rows);
    let free: Vec<usize> = (0..dim).filter(|j| pivots.binary_search(j).is_err()).collect();
    if free.is_empty() {
        return Vec::new();
    }
    // y on the free coordinates extends to an integral kernel vector iff
    // a_t divides Σ_f y_f e_t[f] for every echelon row t with pivot a_t.
    let congruences: Vec<(Vec<Int>, Int)> = ech
        .iter()
        .zip(&pivots)
        .filter(|(r, &c)| !int::is_one(&r[c]))
        .map(|(r, &c)| (free.iter().map(|&f| int::rem_floor(&r[f], &r[c])).collect(), r[c].clone()))
        .collect();
    let ys: Vec<Vec<Int>> = if congruences.is_empty() {
        (0..free.len())
            .map(|j| {
                let mut y = vec![int::zero(); free.len()];
                y[j] = int::one();
                y
            })
            .collect()
    } else {
        congruence_kernel(free.len(), &congruences)
    };
    ys.into_iter()
        .map(|y| {
            let mut x = vec![int::zero(); dim];
            for (yf, &f) in y.iter().zip(&free) {
                x[f] = yf.clone();
            }
            for (r, &c) in ech.iter().zip(&pivots) {
                let mut s = int::zero();
                for (yf, &f) in y.iter().zip(&free) {
                    if !int::is_zero(yf) && !int::is_zero(&r[f]) {
                        s += yf * &r[f];
                    }
                }
                x[c] = -int::div_exact(&s, &r[c]);
            }
            x
        })
        .collect()
}

/// Fraction-free reduced row echelon form over ℚ: each row is primitive with a
/// positive pivot, and every pivot column is zero outside its own row. Rows are
/// returned in increasing pivot order.
fn reduced_echelon(dim: usize, rows: &[Vec<Int>]) -> (Vec<Vec<Int>>, Vec<usize>) {
    let mut ech: Vec<Vec<Int>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for row in rows {
        let mut v = row.clone();
        // The echelon rows vanish on each other's pivots, so the order of elimination is irrelevant.
        for (r, &c) in ech.iter().zip(&pivots) {
            eliminate(&mut v, r, c);
        }
        let Some(c) = (0..dim).filter(|&j| !int::is_zero(&v[j])).min_by_key(|&j| int::abs(&v[j])) else {
            continue;
        };
        if int::is_neg(&v[c]) {
            for x in v.iter_mut() {
                *x = -std::mem::replace(x, int::zero());
            }
        }
        make_primitive(&mut v);
        for r in ech.iter_mut() {
            eliminate(r, &v, c);
        }
        ech.push(v);
        pivots.push(c);
    }
    let mut order: Vec<usize> = (0..ech.len()).collect();
    order.sort_by_key(|&i| pivots[i]);
    let mut slots: Vec<Option<Vec<Int>>> = ech.into_iter().map(Some).collect();
    let ech = order.iter().map(|&i| slots[i].take().unwrap()).collect();
    let pivots = order.iter().map(|&i| pivots[i]).collect();
    (ech, pivots)
}

/// Clear column `c` of `r` using `p`, whose entry there is positive, keeping `r` primitive.
fn eliminate(r: &mut [Int], p: &[Int], c: usize) {
    if int::is_zero(&r[c]) {
        return;
    }
    let g = int::gcd(&r[c], &p[c]);
    let a = int::div_exact(&p[c], &g);
    let b = int::div_exact(&r[c], &g);
    let unit = int::is_one(&a);
    for j in 0..r.len() {
        if int::is_zero(&p[j]) {
            if !unit && !int::is_zero(&r[j]) {
                r[j] *= &a;
            }
            continue;
        }
        let t = &b * &p[j];
        if unit {
            r[j] -= t;
        } else {
            r[j] = &a * &r[j] - t;
        }
    }
    if !unit {
        make_primitive(r);
    }
}

fn make_primitive(r: &mut [Int]) {
    let mut g = int::zero();
    for x in r.iter() {
        if !int::is_zero(x) {
            g = int::gcd(&g, x);
            if int::is_one(&g) {
                return;
            }
        }
    }
    if !int::is_zero(&g) {
        for x in r.iter_mut() {
            if !int::is_zero(x) {
                *x = int::div_exact(x, &g);
            }
        }
    }
}

/// Generators of `{x ∈ ℤ^n : <row_j, x> ≡ 0 (mod t_j)}`; a zero modulus means exact vanishing.
pub fn kernel_lattice(dim: usize, rows: &[(Vec<Int>, Int)]) -> Vec<Vec<Int>> {
    let exact: Vec<Vec<Int>> = rows.iter().filter(|(_, t)| int::is_zero(t)).map(|(r, _)| r.clone()).collect();
    let modular: Vec<&(Vec<Int>, Int)> = rows.iter().filter(|(_, t)| !int::is_zero(t) && !int::is_one(&int::abs(t))).collect();
    let base: Vec<Vec<Int>> = if exact.is_empty() {
        (0..dim)
            .map(|j| {
                let mut c = vec![int::zero(); dim];
                c[j] = int::one();
                c
            })
            .collect()
    } else {
        integer_kernel(dim, &exact)
    };
    if modular.is_empty() || base.is_empty() {
        return base;
    }
    let k = base.len();
    // Restrict the congruences to the coordinates of the exact kernel.
    let restricted: Vec<(Vec<Int>, Int)> = modular
        .iter()
        .map(|(row, t)| {
            let r: Vec<Int> = base
                .iter()
                .map(|b| {
                    let mut s = int::zero();
                    for (x, y) in row.iter().zip(b) {
                        if !int::is_zero(x) && !int::is_zero(y) {
                            s += x * y;
                        }
                    }
                    int::rem_floor(&s, t)
                })
                .collect();
            (r, int::abs(t))
        })
        .collect();
    let local = congruence_kernel(k, &restricted);
    local
        .into_iter()
        .map(|c| {
            let mut out = vec![int::zero(); dim];
            for (ci, b) in c.iter().zip(&base) {
                if int::is_zero(ci) {
                    continue;
                }
                for j in 0..dim {
                    if !int::is_zero(&b[j]) {
                        out[j] += ci * &b[j];
                    }
                }
            }
            out
        })
        .collect()
}

/// Kernel of a system of congruences with positive moduli, via the dual lattice.
fn congruence_kernel(k: usize, rows: &[(Vec<Int>, Int)]) -> Vec<Vec<Int>> {
    let mut n = int::one();
    for (_, t) in rows {
        n = int::lcm(&n, t);
    }
    let mut w = Lattice::containing_moduli(&vec![n.clone(); k]);
    for (row, t) in rows {
        let f = int::div_exact(&n, t);
        w.insert(row.iter().map(|x| x * &f).collect());
    }
    // Solve W C = n I for the upper triangular W.
    let wr = w.basis();
    let mut cols = Vec::with_capacity(k);
    for j in 0..k {
        let mut c = vec![int::zero(); k];
        c[j] = int::div_exact(&n, &wr[j][j]);
        for i in (0..j).rev() {
            let mut s = int::zero();
            for l in i + 1..=j {
                if !int::is_zero(&wr[i][l]) && !int::is_zero(&c[l]) {
                    s += &wr[i][l] * &c[l];
                }
            }
            c[i] = -int::div_exact(&s, &wr[i][i]);
        }
        for x in c.iter_mut() {
            *x = int::rem_floor(x, &n);
        }
        c[j] = int::div_exact(&n, &wr[j][j]);
        cols.push(c);
    }
    cols
}

/// Integer coefficients `c` with `Σ c_i gens[i] = target`, if any exist.
pub fn solve_in_span(dim: usize, gens: &[Vec<Int>], target: &[Int]) -> Option<Vec<Int>> {
    let m = gens.len();
    // Kernel of [G | -target] restricted to vectors whose last entry is 1.
    let rows: Vec<Vec<Int>> = (0..dim)
        .map(|i| {
            let mut r: Vec<Int> = gens.iter().map(|g| g[i].clone()).collect();
            r.push(-target[i].clone());
            r
        })
        .collect();
    let ker = integer_kernel(m + 1, &rows);
    let mut acc = vec![int::zero(); m + 1];
    let mut g = int::zero();
    for v in &ker {
        let last = &v[m];
        if int::is_zero(last) {
            continue;
        }
        let (ng, x, y) = int::ext_gcd(&g, last);
        for (a, b) in acc.iter_mut().zip(v) {
            *a = &x * &*a + &y * b;
        }
        g = ng;
    }
    if !int::is_one(&g) {
        return None;
    }
    acc.truncate(m);
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::znf::int::int;

    fn v(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn insertion_builds_echelon_basis() {
        let l = Lattice::from_generators(3, vec![v(&[2, 4, 6]), v(&[3, 6, 9]), v(&[0, 0, 5])]);
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&v(&[1, 2, 3])));
        assert!(l.contains(&v(&[0, 0, 5])));
        assert!(!l.contains(&v(&[0, 0, 1])));
        let c = l.coords(&v(&[1, 2, 8])).unwrap();
        assert_eq!(l.combine(&c), v(&[1, 2, 8]));
    }

    #[test]
    fn modular_lattice_index() {
        let mut l = Lattice::containing_moduli(&v(&[4, 4]));
        l.insert(v(&[2, 2]));
        assert_eq!(l.index(), Some(int(8)));
        assert!(l.contains(&v(&[6, 2])));
        assert!(!l.contains(&v(&[1, 1])));
    }

    #[test]
    fn kernel_of_rank_one_map() {
        let ker = integer_kernel(3, &[v(&[1, 2, 3])]);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert_eq!(&k[0] + int(2) * &k[1] + int(3) * &k[2], int(0));
        }
        // The kernel is saturated: (1, 1, -1) must be reachable.
        let l = Lattice::from_generators(3, ker);
        assert!(l.contains(&v(&[1, 1, -1])));
    }

    #[test]
    fn congruence_kernel_matches_enumeration() {
        // x + 2y ≡ 0 mod 4 together with 3x ≡ 0 mod 6, inside ℤ^2.
        let rows = vec![(v(&[1, 2]), int(4)), (v(&[3, 0]), int(6))];
        let l = Lattice::from_generators(2, kernel_lattice(2, &rows));
        for x in -8i64..8 {
            for y in -8i64..8 {
                let ok = (x + 2 * y).rem_euclid(4) == 0 && (3 * x).rem_euclid(6) == 0;
                assert_eq!(l.contains(&v(&[x, y])), ok, "({x},{y})");
            }
        }
    }

    #[test]
    fn mixed_kernel() {
        // x - y = 0 exactly and x ≡ 0 mod 3.
        let rows = vec![(v(&[1, -1]), int(0)), (v(&[1, 0]), int(3))];
        let l = Lattice::from_generators(2, kernel_lattice(2, &rows));
        assert!(l.contains(&v(&[3, 3])));
        assert!(!l.contains(&v(&[1, 1])));
        assert_eq!(l.rank(), 1);
    }

    #[test]
    fn solve_finds_combination() {
        let gens = vec![v(&[2, 0]), v(&[0, 3]), v(&[1, 1])];
        let c = solve_in_span(2, &gens, &v(&[5, 7])).unwrap();
        let mut s = v(&[0, 0]);
        for (ci, g) in c.iter().zip(&gens) {
            s[0] += ci * &g[0];
            s[1] += ci * &g[1];
        }
        assert_eq!(s, v(&[5, 7]));
        assert!(solve_in_span(2, &[v(&[2, 0]), v(&[0, 2])], &v(&[1, 0])).is_none());
    }
}
