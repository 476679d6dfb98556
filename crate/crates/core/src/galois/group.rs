//! Finite groups given by multiplication tables.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validate a multiplication table: closure, identity, inverses and associativity.
    pub fn from_table(name: impl Into<String>, rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Invalid("empty multiplication table".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Invalid(format!("row {i} of the multiplication table has length {} (expected {n})", r.len())));
            }
            if let Some(j) = r.iter().position(|&x| x >= n) {
                return Err(Error::Invalid(format!("entry ({i},{j}) = {} is out of range", r[j])));
            }
        }
        let table: Vec<usize> = rows.iter().flatten().copied().collect();
        let m = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| m(e, x) == x && m(x, e) == x))
            .ok_or_else(|| Error::Invalid("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| m(a, b) == identity && m(b, a) == identity)
                .ok_or_else(|| Error::Invalid(format!("element {a} has no inverse")))?;
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if m(m(i, j), k) != m(i, m(j, k)) {
                        return Err(Error::Invalid(format!("associativity violated at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.into(), order: n, table, identity, inverse })
    }

    /// Closure of a set of permutations of `0..degree`, elements indexed in
    /// breadth-first order from the identity.
    pub fn from_permutations(name: impl Into<String>, degree: usize, gens: &[Vec<usize>]) -> Result<Self> {
        let id: Vec<usize> = (0..degree).collect();
        for g in gens {
            let mut seen = g.clone();
            seen.sort_unstable();
            if g.len() != degree || seen != id {
                return Err(Error::Invalid(format!("{g:?} is not a permutation of 0..{degree}")));
            }
        }
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let p: Vec<usize> = (0..degree).map(|x| g[elems[i][x]]).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let n = elems.len();
        // (a*b)(x) = a(b(x))
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let p: Vec<usize> = (0..degree).map(|x| elems[a][elems[b][x]]).collect();
                        index[&p]
                    })
                    .collect()
            })
            .collect();
        Self::from_table(name, &rows)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("C{n}"), &rows).expect("cyclic table is valid")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Dihedral group of order 2n: element `r^k` is index k, `s r^k` is index n+k.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let enc = |refl: bool, k: usize| if refl { n + k } else { k };
        let dec = |x: usize| if x >= n { (true, x - n) } else { (false, x) };
        let rows: Vec<Vec<usize>> = (0..2 * n)
            .map(|a| {
                (0..2 * n)
                    .map(|b| {
                        let (sa, ka) = dec(a);
                        let (sb, kb) = dec(b);
                        // (s^sa r^ka)(s^sb r^kb) = s^(sa+sb) r^(±ka + kb)
                        let k = if sb { (n + kb - ka % n) % n } else { (ka + kb) % n };
                        enc(sa ^ sb, k)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(format!("D{n}"), &rows).expect("dihedral table is valid")
    }

    pub fn symmetric3() -> Self {
        // Generated by a 3-cycle and a transposition.
        Self::from_permutations("S3", 3, &[vec![1, 2, 0], vec![1, 0, 2]]).expect("valid permutations")
    }

    pub fn klein() -> Self {
        let mut g = Self::direct_product(&Self::cyclic(2), &Self::cyclic(2));
        g.name = "C2xC2".into();
        g
    }

    /// Element `(a, b)` has index `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order, b.order);
        let rows: Vec<Vec<usize>> = (0..na * nb)
            .map(|x| (0..na * nb).map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)).collect())
            .collect();
        Self::from_table(format!("{}x{}", a.name, b.name), &rows).expect("product table is valid")
    }

    /// Parse names such as `C5`, `S3`, `D4`, `C2xC2`, `trivial`.
    pub fn named(name: &str) -> Result<Self> {
        let t = name.trim();
        let lower = t.to_ascii_lowercase().replace(['×', '*'], "x").replace('_', "");
        if lower == "trivial" || lower == "1" {
            return Ok(Self::trivial());
        }
        if lower == "s3" {
            return Ok(Self::symmetric3());
        }
        if lower == "c2xc2" || lower == "v4" || lower == "klein" {
            return Ok(Self::klein());
        }
        if let Some(parts) = lower.split_once('x') {
            let a = Self::named(parts.0)?;
            let b = Self::named(parts.1)?;
            return Ok(Self::direct_product(&a, &b));
        }
        let num = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1);
        if let Some(n) = lower.strip_prefix('c').and_then(num) {
            return Ok(Self::cyclic(n));
        }
        if let Some(n) = lower.strip_prefix('d').and_then(num) {
            return Ok(Self::dihedral(n));
        }
        Err(Error::Invalid(format!("unknown group name '{t}'")))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut x = self.identity;
        for _ in 0..k {
            x = self.mul(x, a);
        }
        x
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order).any(|a| self.element_order(a) == self.order)
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        !set.is_empty()
            && set.iter().all(|&x| x < self.order)
            && set.contains(&self.identity)
            && set.iter().all(|&a| set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// Smallest subgroup containing `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.identity]);
        let mut frontier: Vec<usize> = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for g in 0..self.order {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.closure(&gens);
            }
        }
        gens
    }

    pub fn subgroup(&self, elems: &[usize]) -> Result<Subgroup> {
        if !self.is_subgroup(elems) {
            return Err(Error::Invalid(format!("{elems:?} is not a subgroup of {}", self.name)));
        }
        let mut elements: Vec<usize> = elems.to_vec();
        elements.sort_unstable();
        elements.dedup();
        let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let rows: Vec<Vec<usize>> = elements.iter().map(|&a| elements.iter().map(|&b| pos[&self.mul(a, b)]).collect()).collect();
        let group = FiniteGroup::from_table(format!("{}<{}>", self.name, elements.len()), &rows)?;
        Ok(Subgroup { elements, group })
    }

    pub fn whole(&self) -> Subgroup {
        self.subgroup(&(0..self.order).collect::<Vec<_>>()).expect("whole group")
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.subgroup(&[self.identity]).expect("trivial subgroup")
    }

    /// All subgroups, sorted by (order, elements).
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut frontier: Vec<Vec<usize>> = vec![vec![self.identity]];
        found.insert(vec![self.identity]);
        while let Some(h) = frontier.pop() {
            for g in 0..self.order {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.closure(&gens);
                if found.insert(k.clone()) {
                    frontier.push(k);
                }
            }
        }
        let mut v: Vec<Vec<usize>> = found.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        v
    }

    /// Right cosets `H g`, each sorted; the trivial coset comes first and the
    /// rest are ordered by their smallest element.
    pub fn right_cosets(&self, h: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut cosets = Vec::new();
        let mut order: Vec<usize> = (0..self.order).collect();
        order.sort_by_key(|&g| (g != self.identity, g));
        for g in order {
            if seen[g] {
                continue;
            }
            let mut c: Vec<usize> = h.iter().map(|&x| self.mul(x, g)).collect();
            c.sort_unstable();
            c.dedup();
            for &x in &c {
                seen[x] = true;
            }
            cosets.push(c);
        }
        let (first, rest) = cosets.split_at_mut(1);
        let _ = first;
        rest.sort_by_key(|c| c[0]);
        cosets
    }

    /// Lexicographically minimal right transversal with the identity for the trivial coset.
    pub fn right_transversal(&self, h: &[usize]) -> Vec<usize> {
        self.right_cosets(h)
            .iter()
            .map(|c| if c.contains(&self.identity) { self.identity } else { c[0] })
            .collect()
    }

    /// Whether `map: self -> other` is a homomorphism.
    pub fn is_homomorphism(&self, other: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.order
            && map.iter().all(|&x| x < other.order)
            && (0..self.order).all(|a| (0..self.order).all(|b| map[self.mul(a, b)] == other.mul(map[a], map[b])))
    }

    pub fn kernel_of(&self, other: &FiniteGroup, map: &[usize]) -> Vec<usize> {
        (0..self.order).filter(|&g| map[g] == other.identity).collect()
    }
}

/// A subgroup together with its own re-indexed multiplication table: local
/// index `i` corresponds to parent element `elements[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub group: FiniteGroup,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn local_index(&self, parent: usize) -> Option<usize> {
        self.elements.binary_search(&parent).ok()
    }

    pub fn contains(&self, parent: usize) -> bool {
        self.local_index(parent).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_groups() {
        assert_eq!(FiniteGroup::named("C5").unwrap().order(), 5);
        let s3 = FiniteGroup::named("S3").unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let d4 = FiniteGroup::named("D4").unwrap();
        assert_eq!(d4.order(), 8);
        assert!(!d4.is_abelian());
        let v = FiniteGroup::named("C2xC2").unwrap();
        assert!(v.is_abelian() && !v.is_cyclic());
        assert!(FiniteGroup::named("Q17").is_err());
    }

    #[test]
    fn associativity_failure_is_reported() {
        // A Latin square with identity 0 that is not associative.
        let rows = vec![vec![0, 1, 2, 3, 4], vec![1, 0, 3, 4, 2], vec![2, 4, 0, 1, 3], vec![3, 2, 4, 0, 1], vec![4, 3, 1, 2, 0]];
        let err = FiniteGroup::from_table("bad", &rows).unwrap_err();
        assert!(err.to_string().contains("associativity violated at ("), "{err}");
    }

    #[test]
    fn subgroup_lattice_sizes() {
        assert_eq!(FiniteGroup::symmetric3().subgroups().len(), 6);
        assert_eq!(FiniteGroup::dihedral(4).subgroups().len(), 10);
        assert_eq!(FiniteGroup::klein().subgroups().len(), 5);
    }

    #[test]
    fn transversal_normalisation() {
        let s3 = FiniteGroup::symmetric3();
        let h = s3.closure(&[4]);
        let t = s3.right_transversal(&h);
        assert_eq!(t.len(), 3);
        assert_eq!(t[0], s3.identity());
        let cosets = s3.right_cosets(&h);
        for (c, &r) in cosets.iter().zip(&t) {
            assert!(c.contains(&r));
        }
    }
}
