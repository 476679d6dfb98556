//! Finitely generated abelian groups as subquotients of a diagonal ambient group.
//!
//! Every group lives inside `ℤ^n / ⊕ m_i ℤ` (the ambient, with `m_i = 0` meaning a
//! free coordinate) as `numer / denom` for two lattices `denom ⊆ numer`. Elements
//! are ambient integer vectors; two vectors are equal in the group when their
//! difference lies in `denom`. On construction the quotient is diagonalised so
//! that every element has canonical coordinates with respect to the invariant
//! factors.

use std::fmt;

use super::int::{self, Int};
use super::lattice::Lattice;
use super::matrix::IntMatrix;
use super::snf::row_snf;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct AbGroup {
    moduli: Vec<Int>,
    numer: Lattice,
    denom: Lattice,
    invariants: Vec<Int>,
    proj: IntMatrix,
    lift: IntMatrix,
    /// Set when the group is the whole ambient and its canonical coordinates
    /// are ambient coordinates, as for `diagonal`; then coordinates are read off directly.
    selection: Option<Vec<usize>>,
}

impl AbGroup {
    /// `(⟨numer⟩ + M) / (⟨denom⟩ + M)` where `M = ⊕ m_i ℤ e_i`.
    pub fn subquotient(moduli: &[Int], numer: &[Vec<Int>], denom: &[Vec<Int>]) -> Result<Self> {
        let moduli: Vec<Int> = moduli.iter().map(int::abs).collect();
        let numer = Lattice::with_moduli_and_generators(&moduli, numer.iter().map(|v| reduce_vec(v, &moduli)));
        let denom = Lattice::with_moduli_and_generators(&moduli, denom.iter().map(|v| reduce_vec(v, &moduli)));
        Self::from_lattices(moduli, numer, denom)
    }

    pub(crate) fn from_lattices(moduli: Vec<Int>, numer: Lattice, denom: Lattice) -> Result<Self> {
        let k = numer.rank();
        let mut rel_cols = Vec::with_capacity(denom.rank());
        for r in denom.basis() {
            match numer.coords(r) {
                Some(c) => rel_cols.push(c),
                None => return Err(Error::Invalid("relation subgroup is not contained in the generated subgroup".into())),
            }
        }
        let rel = IntMatrix::from_columns(k, &rel_cols);
        let snf = row_snf(&rel);
        let nonunit: Vec<usize> = (0..k).filter(|&i| !int::is_one(&snf.diag[i])).collect();
        let invariants: Vec<Int> = nonunit.iter().map(|&i| snf.diag[i].clone()).collect();
        let proj = snf.u.select_rows(&nonunit);
        let basis_t = numer.basis_matrix().transpose();
        let mut lift = basis_t.mul(&snf.uinv.select_cols(&nonunit));
        for i in 0..lift.rows() {
            if !int::is_zero(&moduli[i]) {
                for j in 0..lift.cols() {
                    let x = int::rem_floor(lift.get(i, j), &moduli[i]);
                    lift.set(i, j, x);
                }
            }
        }
        let selection = selection_of(&numer, &proj, &invariants, &moduli);
        Ok(AbGroup { moduli, numer, denom, invariants, proj, lift, selection })
    }

    /// `ℤ^rows / colspan(relations)`.
    pub fn from_relations(relations: &IntMatrix) -> Self {
        let n = relations.rows();
        let full: Vec<Vec<Int>> = (0..n).map(|i| unit(n, i)).collect();
        Self::subquotient(&vec![int::zero(); n], &full, &relations.columns()).expect("full lattice contains every relation")
    }

    /// `⊕ ℤ/m_i` with the standard generators.
    pub fn diagonal(moduli: &[Int]) -> Self {
        let n = moduli.len();
        let full: Vec<Vec<Int>> = (0..n).map(|i| unit(n, i)).collect();
        Self::subquotient(moduli, &full, &[]).expect("full lattice contains the moduli")
    }

    pub fn cyclic(n: i64) -> Self {
        Self::diagonal(&[int::int(n)])
    }

    pub fn free(rank: usize) -> Self {
        Self::diagonal(&vec![int::zero(); rank])
    }

    pub fn trivial() -> Self {
        Self::diagonal(&[])
    }

    /// The same ambient and relations with a different generated subgroup.
    pub fn with_numer(&self, gens: &[Vec<Int>]) -> Result<Self> {
        let mut numer = self.denom.clone();
        numer.extend(gens.iter().map(|v| reduce_vec(v, &self.moduli)));
        numer.hermite_reduce();
        Self::from_lattices(self.moduli.clone(), numer, self.denom.clone())
    }

    /// The quotient by the subgroup generated by `gens` (and the current relations).
    pub fn quotient_by(&self, gens: &[Vec<Int>]) -> Result<Self> {
        let mut denom = self.denom.clone();
        denom.extend(gens.iter().map(|v| reduce_vec(v, &self.moduli)));
        denom.hermite_reduce();
        Self::from_lattices(self.moduli.clone(), self.numer.clone(), denom)
    }

    /// Direct sum; the ambient of the result is the concatenation of the ambients.
    pub fn direct_sum(parts: &[&AbGroup]) -> AbGroup {
        let moduli: Vec<Int> = parts.iter().flat_map(|p| p.moduli.iter().cloned()).collect();
        let total = moduli.len();
        let mut numer = Vec::new();
        let mut denom = Vec::new();
        let mut off = 0;
        for p in parts {
            let pad = |v: &Vec<Int>| {
                let mut w = vec![int::zero(); total];
                w[off..off + v.len()].clone_from_slice(v);
                w
            };
            numer.extend(p.numer.basis().iter().map(pad));
            denom.extend(p.denom.basis().iter().map(pad));
            off += p.ambient_dim();
        }
        Self::subquotient(&moduli, &numer, &denom).expect("summands are valid subquotients")
    }

    pub fn ambient_dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[Int] {
        &self.moduli
    }

    pub fn numer(&self) -> &Lattice {
        &self.numer
    }

    pub fn denom(&self) -> &Lattice {
        &self.denom
    }

    /// Generators of the subgroup: the basis of the numerator lattice.
    pub fn numer_basis(&self) -> &[Vec<Int>] {
        self.numer.basis()
    }

    /// Non-unit invariant factors `d_1 | d_2 | ...`, free factors (0) last.
    pub fn invariants(&self) -> &[Int] {
        &self.invariants
    }

    pub fn num_generators(&self) -> usize {
        self.invariants.len()
    }

    pub fn free_rank(&self) -> usize {
        self.invariants.iter().filter(|d| int::is_zero(d)).count()
    }

    pub fn torsion_invariants(&self) -> Vec<Int> {
        self.invariants.iter().filter(|d| !int::is_zero(d)).cloned().collect()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    pub fn order(&self) -> Option<Int> {
        if !self.is_finite() {
            return None;
        }
        let mut p = int::one();
        for d in &self.invariants {
            p *= d;
        }
        Some(p)
    }

    /// Order as a machine integer when finite and small enough.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().and_then(|o| u64::try_from(&o).ok())
    }

    pub fn exponent(&self) -> Option<Int> {
        if !self.is_finite() {
            return None;
        }
        Some(self.invariants.last().cloned().unwrap_or_else(int::one))
    }

    pub fn isomorphic(&self, other: &AbGroup) -> bool {
        self.invariants == other.invariants
    }

    pub fn zero_vec(&self) -> Vec<Int> {
        vec![int::zero(); self.moduli.len()]
    }

    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        reduce_vec(v, &self.moduli)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.numer.contains(&self.reduce(v))
    }

    /// Canonical coordinates with respect to the invariant factors, or `None`
    /// when `v` is not in the subgroup.
    pub fn coords(&self, v: &[Int]) -> Option<Vec<Int>> {
        if let Some(sel) = &self.selection {
            return Some(sel.iter().zip(&self.invariants).map(|(&j, d)| if int::is_zero(d) { v[j].clone() } else { int::rem_floor(&v[j], d) }).collect());
        }
        let c = self.numer.coords(&self.reduce(v))?;
        Some(self.coords_from_numer(&c))
    }

    pub(crate) fn coords_from_numer(&self, c: &[Int]) -> Vec<Int> {
        let mut y = self.proj.mul_vec(c);
        for (x, d) in y.iter_mut().zip(&self.invariants) {
            if !int::is_zero(d) {
                *x = int::rem_floor(x, d);
            }
        }
        y
    }

    pub fn is_zero_elem(&self, v: &[Int]) -> bool {
        if self.selection.is_some() {
            return self.coords(v).expect("whole ambient").iter().all(int::is_zero);
        }
        self.denom.contains(&self.reduce(v))
    }

    pub fn elems_equal(&self, a: &[Int], b: &[Int]) -> bool {
        let d: Vec<Int> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.is_zero_elem(&d)
    }

    /// Ambient representative of the i-th canonical generator.
    pub fn generator(&self, i: usize) -> Vec<Int> {
        self.lift.col(i)
    }

    pub fn generators(&self) -> Vec<Vec<Int>> {
        (0..self.num_generators()).map(|i| self.generator(i)).collect()
    }

    /// Ambient representative of the element with the given canonical coordinates.
    pub fn element(&self, coords: &[Int]) -> Vec<Int> {
        assert_eq!(coords.len(), self.num_generators());
        self.reduce(&self.lift.mul_vec(coords))
    }

    pub fn add(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    pub fn scale(&self, c: &Int, a: &[Int]) -> Vec<Int> {
        self.reduce(&a.iter().map(|x| c * x).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: &[Int]) -> Vec<Int> {
        self.scale(&int::int(-1), a)
    }

    /// Order of an element (`None` for elements of infinite order).
    pub fn element_order(&self, v: &[Int]) -> Option<Int> {
        let c = self.coords(v)?;
        let mut o = int::one();
        for (x, d) in c.iter().zip(&self.invariants) {
            if int::is_zero(x) {
                continue;
            }
            if int::is_zero(d) {
                return None;
            }
            let g = int::gcd(x, d);
            o = int::lcm(&o, &int::div_exact(d, &g));
        }
        Some(o)
    }

    /// All canonical coordinate vectors of a finite group, if its order is within `budget`.
    pub fn enumerate(&self, budget: u64) -> Result<Vec<Vec<Int>>> {
        let order = self.order().ok_or_else(|| Error::Budget("cannot enumerate an infinite group".into()))?;
        match u64::try_from(&order) {
            Ok(o) if o <= budget => {}
            _ => return Err(Error::Budget(format!("group of order {order} exceeds enumeration budget {budget}"))),
        }
        let mut out = vec![Vec::new()];
        for d in &self.invariants {
            let d = int::to_i64(d).expect("small invariant");
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for prefix in &out {
                for x in 0..d {
                    let mut p = prefix.clone();
                    p.push(int::int(x));
                    next.push(p);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Ambient representatives of every element.
    pub fn enumerate_elements(&self, budget: u64) -> Result<Vec<Vec<Int>>> {
        Ok(self.enumerate(budget)?.iter().map(|c| self.element(c)).collect())
    }

    /// Torsion subgroup, in the same ambient with the same relations.
    pub fn torsion_subgroup(&self) -> AbGroup {
        let gens: Vec<Vec<Int>> = (0..self.num_generators()).filter(|&i| !int::is_zero(&self.invariants[i])).map(|i| self.generator(i)).collect();
        self.with_numer(&gens).expect("torsion generators lie in the group")
    }

    /// Subgroup of elements killed by `n`.
    pub fn n_torsion(&self, n: &Int) -> AbGroup {
        let mut gens = Vec::new();
        for (i, d) in self.invariants.iter().enumerate() {
            let g = self.generator(i);
            if int::is_zero(d) {
                continue;
            }
            let step = int::div_exact(d, &int::gcd(d, n));
            gens.push(self.scale(&step, &g));
        }
        self.with_numer(&gens).expect("torsion generators lie in the group")
    }

    /// Same ambient, same relations, and `self` generated inside `other`.
    pub fn is_subgroup_of(&self, other: &AbGroup) -> bool {
        self.moduli == other.moduli && self.denom.same_as(&other.denom) && other.numer.contains_lattice(&self.numer)
    }

    /// Equality as subquotients of the same ambient.
    pub fn same_subgroup(&self, other: &AbGroup) -> bool {
        self.moduli == other.moduli && self.denom.same_as(&other.denom) && self.numer.same_as(&other.numer)
    }

    pub fn describe(&self) -> String {
        describe_invariants(&self.invariants)
    }
}

pub fn describe_invariants(inv: &[Int]) -> String {
    if inv.is_empty() {
        return "0".into();
    }
    inv.iter()
        .map(|d| if int::is_zero(d) { "Z".to_string() } else { format!("Z/{d}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl fmt::Debug for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbGroup({})", self.describe())
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Int> {
    let mut v = vec![int::zero(); n];
    v[i] = int::one();
    v
}

pub(crate) fn reduce_vec(v: &[Int], moduli: &[Int]) -> Vec<Int> {
    assert_eq!(v.len(), moduli.len(), "vector length does not match the ambient group");
    v.iter().zip(moduli).map(|(x, m)| int::reduce(x, m)).collect()
}

pub fn cokernel_group(a: &IntMatrix) -> AbGroup {
    AbGroup::from_relations(a)
}


/// Ambient indices read by `proj` when the group is the full ambient and `proj`
/// simply selects the coordinates whose modulus is not 1.
fn selection_of(numer: &Lattice, proj: &IntMatrix, invariants: &[Int], moduli: &[Int]) -> Option<Vec<usize>> {
    let n = moduli.len();
    if numer.rank() != n || numer.basis().iter().enumerate().any(|(i, r)| r.iter().enumerate().any(|(j, x)| if i == j { !int::is_one(x) } else { !int::is_zero(x) })) {
        return None;
    }
    let mut sel = Vec::with_capacity(proj.rows());
    for i in 0..proj.rows() {
        let row = proj.row(i);
        let j = row.iter().position(|x| !int::is_zero(x))?;
        if !int::is_one(&row[j]) || row[j + 1..].iter().any(|x| !int::is_zero(x)) || moduli[j] != invariants[i] {
            return None;
        }
        sel.push(j);
    }
    Some(sel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::znf::int::int;

    fn ints(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel_group(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]])).invariants(), ints(&[2, 4]).as_slice());
        assert_eq!(cokernel_group(&IntMatrix::from_rows(&[vec![0]])).invariants(), ints(&[0]).as_slice());
        let g = cokernel_group(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(g.invariants(), ints(&[2, 4]).as_slice());
        assert_eq!(g.order(), Some(int(8)));
    }

    #[test]
    fn coordinates_respect_relations() {
        let g = cokernel_group(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        let a = ints(&[1, 0]);
        let b = ints(&[3, 6]); // a + first relation column
        assert_eq!(g.coords(&a), g.coords(&b));
        assert!(g.elems_equal(&a, &b));
        for i in 0..g.num_generators() {
            let gen = g.generator(i);
            let c = g.coords(&gen).unwrap();
            for (j, x) in c.iter().enumerate() {
                assert_eq!(*x, if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn subquotient_with_moduli() {
        // (2ℤ/8ℤ) / (4ℤ/8ℤ) ≅ ℤ/2
        let g = AbGroup::subquotient(&ints(&[8]), &[ints(&[2])], &[ints(&[4])]).unwrap();
        assert_eq!(g.invariants(), ints(&[2]).as_slice());
        assert!(!g.contains(&ints(&[1])));
        assert!(g.is_zero_elem(&ints(&[12])));
    }

    #[test]
    fn torsion_and_enumeration() {
        let g = AbGroup::diagonal(&ints(&[2, 0, 3]));
        assert_eq!(g.invariants(), ints(&[6, 0]).as_slice());
        let t = g.torsion_subgroup();
        assert_eq!(t.order(), Some(int(6)));
        assert_eq!(t.enumerate(100).unwrap().len(), 6);
        assert!(g.enumerate(100).is_err());
    }
}
