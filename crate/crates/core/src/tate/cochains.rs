//! Inhomogeneous cochains with values in the diagonal model of a module.
//!
//! A module `M` with canonical invariants `a_1, ..., a_h` is replaced by
//! `⊕ ℤ/a_i` (a free factor when `a_i = 0`) with the action written in canonical
//! coordinates. An `r`-cochain is a table indexed by `r`-tuples of group
//! elements; normalized cochains only store tuples without the identity.

use std::sync::Arc;

use crate::galois::{FiniteGroup, GammaModule};
use crate::znf::group::reduce_vec;
use crate::znf::int::{self, Int};
use crate::znf::IntMatrix;

/// A module in canonical coordinates.
#[derive(Clone, Debug)]
pub struct Coefficients {
    pub module: GammaModule,
    pub invariants: Vec<Int>,
    pub action: Vec<IntMatrix>,
}

impl Coefficients {
    pub fn new(m: &GammaModule) -> Arc<Self> {
        let action = m.group().elements().map(|g| m.canonical_action(g)).collect();
        Arc::new(Coefficients { module: m.clone(), invariants: m.underlying().invariants().to_vec(), action })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.module.group()
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        reduce_vec(v, &self.invariants)
    }

    /// Canonical coordinates of a module element.
    pub fn to_model(&self, m: &[Int]) -> Option<Vec<Int>> {
        self.module.underlying().coords(m)
    }

    /// A module element with the given canonical coordinates.
    pub fn from_model(&self, c: &[Int]) -> Vec<Int> {
        self.module.underlying().element(c)
    }

    pub fn act(&self, g: usize, v: &[Int]) -> Vec<Int> {
        self.reduce(&self.action[g].mul_vec(v))
    }
}

/// Cochain spaces `C^r(Γ, M)` for one coefficient module.
#[derive(Clone, Debug)]
pub struct Cochains {
    pub coeff: Arc<Coefficients>,
    normalized: bool,
    /// Group elements used as tuple entries.
    elems: Vec<usize>,
    /// Position of each group element in `elems`, if present.
    pos: Vec<Option<usize>>,
}

impl Cochains {
    pub fn normalized(coeff: Arc<Coefficients>) -> Self {
        let g = coeff.group().clone();
        let elems: Vec<usize> = g.elements().filter(|&x| x != g.identity()).collect();
        Self::build(coeff, true, elems)
    }

    pub fn full(coeff: Arc<Coefficients>) -> Self {
        let elems: Vec<usize> = coeff.group().elements().collect();
        Self::build(coeff, false, elems)
    }

    fn build(coeff: Arc<Coefficients>, normalized: bool, elems: Vec<usize>) -> Self {
        let mut pos = vec![None; coeff.group().order()];
        for (i, &e) in elems.iter().enumerate() {
            pos[e] = Some(i);
        }
        Cochains { coeff, normalized, elems, pos }
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.coeff.group()
    }

    pub fn num_tuples(&self, r: usize) -> usize {
        self.elems.len().pow(r as u32)
    }

    pub fn dim(&self, r: usize) -> usize {
        self.num_tuples(r) * self.coeff.rank()
    }

    pub fn moduli(&self, r: usize) -> Vec<Int> {
        let h = &self.coeff.invariants;
        (0..self.num_tuples(r)).flat_map(|_| h.iter().cloned()).collect()
    }

    pub fn zero(&self, r: usize) -> Vec<Int> {
        vec![int::zero(); self.dim(r)]
    }

    /// Tuple number `t` in lexicographic order.
    pub fn tuple(&self, r: usize, mut t: usize) -> Vec<usize> {
        let k = self.elems.len();
        let mut out = vec![0; r];
        for slot in out.iter_mut().rev() {
            *slot = self.elems[t % k];
            t /= k;
        }
        out
    }

    /// Index of a tuple, or `None` when it is not stored (contains the identity
    /// in the normalized model, where the value is zero).
    pub fn tuple_index(&self, tuple: &[usize]) -> Option<usize> {
        let k = self.elems.len();
        let mut t = 0;
        for &g in tuple {
            t = t * k + self.pos[g]?;
        }
        Some(t)
    }

    /// `f(tuple)` as a vector of canonical coordinates.
    pub fn value(&self, f: &[Int], tuple: &[usize]) -> Vec<Int> {
        let h = self.coeff.rank();
        match self.tuple_index(tuple) {
            Some(t) => f[t * h..(t + 1) * h].to_vec(),
            None => vec![int::zero(); h],
        }
    }

    /// Build a cochain from a function on tuples.
    pub fn tabulate<F: FnMut(&[usize]) -> Vec<Int>>(&self, r: usize, mut f: F) -> Vec<Int> {
        let mut out = Vec::with_capacity(self.dim(r));
        for t in 0..self.num_tuples(r) {
            out.extend(self.coeff.reduce(&f(&self.tuple(r, t))));
        }
        out
    }

    /// `(df)(g_1..g_{r+1}) = g_1 f(g_2..) + Σ (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{r+1} f(g_1..g_r)`.
    pub fn differential(&self, r: usize, f: &[Int]) -> Vec<Int> {
        let g = self.group().clone();
        self.tabulate(r + 1, |t| self.d_at(&g, r, f, t))
    }

    fn d_at(&self, g: &FiniteGroup, r: usize, f: &[Int], t: &[usize]) -> Vec<Int> {
        let h = self.coeff.rank();
        let mut acc = self.coeff.act(t[0], &self.value(f, &t[1..]));
        let mut sub = Vec::with_capacity(r);
        for i in 1..=r {
            sub.clear();
            sub.extend_from_slice(&t[..i - 1]);
            sub.push(g.mul(t[i - 1], t[i]));
            sub.extend_from_slice(&t[i + 1..]);
            let v = self.value(f, &sub);
            add_signed(&mut acc, &v, i % 2 == 1);
        }
        let v = self.value(f, &t[..r]);
        add_signed(&mut acc, &v, (r + 1) % 2 == 1);
        debug_assert_eq!(acc.len(), h);
        acc
    }

    /// Matrix of `d^r` on ambient coordinates (columns indexed by `C^r`).
    pub fn differential_matrix(&self, r: usize) -> IntMatrix {
        let n = self.dim(r);
        let mut cols = Vec::with_capacity(n);
        let mut e = self.zero(r);
        for j in 0..n {
            e[j] = int::one();
            cols.push(self.differential(r, &e));
            e[j] = int::zero();
        }
        IntMatrix::from_columns(self.dim(r + 1), &cols)
    }

    /// Rows of `d^r` paired with the modulus of their coordinate, ready for a kernel computation.
    pub fn differential_rows(&self, r: usize) -> Vec<(Vec<Int>, Int)> {
        let m = self.differential_matrix(r);
        let moduli = self.moduli(r + 1);
        (0..m.rows()).map(|i| (m.row_vec(i), moduli[i].clone())).collect()
    }

    /// Basis vectors of `C^r` (as ambient vectors), for spanning images.
    pub fn basis(&self, r: usize) -> Vec<Vec<Int>> {
        let n = self.dim(r);
        (0..n)
            .map(|j| {
                let mut e = self.zero(r);
                e[j] = int::one();
                e
            })
            .collect()
    }

    /// Pointwise application of a coefficient matrix: `(Φ f)(t) = Φ · f(t)`,
    /// landing in `other` (same tuple model).
    pub fn map_values(&self, other: &Cochains, r: usize, phi: &IntMatrix, f: &[Int]) -> Vec<Int> {
        other.tabulate(r, |t| phi.mul_vec(&self.value(f, t)))
    }
}

fn add_signed(acc: &mut [Int], v: &[Int], negative: bool) {
    for (a, x) in acc.iter_mut().zip(v) {
        if negative {
            *a -= x;
        } else {
            *a += x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::znf::AbGroup;

    #[test]
    fn d_squared_vanishes() {
        let g = Arc::new(FiniteGroup::symmetric3());
        let sign: Vec<i64> = g.elements().map(|x| if g.element_order(x) == 2 { -1 } else { 1 }).collect();
        let m = GammaModule::sign_lattice(g, &sign).unwrap();
        for normalized in [true, false] {
            let coeff = Coefficients::new(&m);
            let c = if normalized { Cochains::normalized(coeff) } else { Cochains::full(coeff) };
            let top = if normalized { 3 } else { 2 };
            for r in 0..top {
                let d0 = c.differential_matrix(r);
                let d1 = c.differential_matrix(r + 1);
                assert!(d1.mul(&d0).is_zero(), "d∘d != 0 at r={r}");
            }
        }
    }

    #[test]
    fn coefficients_of_finite_module() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let m = GammaModule::new(g, Arc::new(AbGroup::cyclic(4)), vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![3]])]).unwrap();
        let c = Coefficients::new(&m);
        assert_eq!(c.invariants, vec![int::int(4)]);
        assert_eq!(c.act(1, &[int::int(1)]), vec![int::int(3)]);
    }
}
