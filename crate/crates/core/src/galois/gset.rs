//! Finite sets with a group action.

use std::collections::BTreeSet;

use super::group::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// A finite Γ-set given by its action table: `action[g][x]` is `g·x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSet {
    size: usize,
    action: Vec<Vec<usize>>,
}

impl GammaSet {
    pub fn new(group: &FiniteGroup, action: Vec<Vec<usize>>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::Invalid(format!(
                "action table has {} rows but the group has order {}",
                action.len(),
                group.order()
            )));
        }
        let size = action.first().map_or(0, Vec::len);
        for (g, row) in action.iter().enumerate() {
            if row.len() != size {
                return Err(Error::Invalid(format!("action row {g} has length {} (expected {size})", row.len())));
            }
            let distinct: BTreeSet<usize> = row.iter().copied().collect();
            if distinct.len() != size || row.iter().any(|&x| x >= size) {
                return Err(Error::Invalid(format!("element {g} does not act by a permutation")));
            }
        }
        let e = group.identity();
        if let Some(x) = (0..size).find(|&x| action[e][x] != x) {
            return Err(Error::Invalid(format!("the identity moves point {x}")));
        }
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                if let Some(x) = (0..size).find(|&x| action[gh][x] != action[g][action[h][x]]) {
                    return Err(Error::Invalid(format!("action table mismatch: ({g}*{h})·{x} != {g}·({h}·{x})")));
                }
            }
        }
        Ok(GammaSet { size, action })
    }

    /// Γ acting on itself by left multiplication.
    pub fn regular(group: &FiniteGroup) -> Self {
        let action = group.elements().map(|g| group.elements().map(|x| group.mul(g, x)).collect()).collect();
        GammaSet { size: group.order(), action }
    }

    /// `size` points, all fixed.
    pub fn fixed_points(group: &FiniteGroup, size: usize) -> Self {
        GammaSet { size, action: vec![(0..size).collect(); group.order()] }
    }

    /// Left cosets `gH`, numbered by increasing smallest element.
    pub fn left_cosets(group: &FiniteGroup, h: &[usize]) -> Result<Self> {
        if !group.is_subgroup(h) {
            return Err(Error::Invalid(format!("{h:?} is not a subgroup")));
        }
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        let mut label = vec![usize::MAX; group.order()];
        for g in group.elements() {
            if label[g] != usize::MAX {
                continue;
            }
            let c: Vec<usize> = h.iter().map(|&x| group.mul(g, x)).collect();
            for &x in &c {
                label[x] = cosets.len();
            }
            cosets.push(c);
        }
        let action = group
            .elements()
            .map(|g| cosets.iter().map(|c| label[group.mul(g, c[0])]).collect())
            .collect();
        Ok(GammaSet { size: cosets.len(), action })
    }

    pub fn disjoint_union(&self, other: &GammaSet) -> GammaSet {
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&y| y + self.size)).collect())
            .collect();
        GammaSet { size: self.size + other.size, action }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn orbit_of(&self, x: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.action.iter().map(|row| row[x]).collect();
        set.into_iter().collect()
    }

    /// Orbits, each sorted, ordered by smallest element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if !seen[x] {
                let o = self.orbit_of(x);
                for &y in &o {
                    seen[y] = true;
                }
                out.push(o);
            }
        }
        out
    }

    /// Smallest point of each orbit.
    pub fn canonical_section(&self) -> Vec<usize> {
        self.orbits().iter().map(|o| o[0]).collect()
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.action.len()).filter(|&g| self.action[g][x] == x).collect()
    }

    /// Some `g` with `g·x = y`.
    pub fn transporter(&self, x: usize, y: usize) -> Option<usize> {
        (0..self.action.len()).find(|&g| self.action[g][x] == y)
    }

    pub fn restrict(&self, sub: &Subgroup) -> GammaSet {
        GammaSet { size: self.size, action: sub.elements.iter().map(|&g| self.action[g].clone()).collect() }
    }

    /// Pull back along a homomorphism `pi: big -> group`.
    pub fn inflate(&self, pi: &[usize]) -> GammaSet {
        GammaSet { size: self.size, action: pi.iter().map(|&g| self.action[g].clone()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coset_space_of_s3() {
        let s3 = FiniteGroup::symmetric3();
        let h = s3.closure(&[s3.generating_set()[1]]);
        let x = GammaSet::left_cosets(&s3, &h).unwrap();
        assert_eq!(x.size(), 6 / h.len());
        assert_eq!(x.orbits().len(), 1);
        assert!(GammaSet::new(&s3, x.table().to_vec()).is_ok());
    }

    #[test]
    fn bad_action_rejected() {
        let c2 = FiniteGroup::cyclic(2);
        assert!(GammaSet::new(&c2, vec![vec![1, 0], vec![1, 0]]).is_err());
        assert!(GammaSet::new(&c2, vec![vec![0, 1], vec![0, 0]]).is_err());
        let c3 = FiniteGroup::cyclic(3);
        let err = GammaSet::new(&c3, vec![vec![0, 1], vec![1, 0], vec![1, 0]]).unwrap_err();
        assert!(err.to_string().contains("mismatch"));
    }
}
