//! Čech cochains of a split Galois cover versus group cochains.
//!
//! For a cover split by Γ, `M(S^{⊗n})` is the set of maps `Γ^n → M`, and the
//! descent data cuts it down to homogeneous equivariant functions
//! `F(γσ_1, …, γσ_n) = γ F(σ_1, …, σ_n)`. Such an `F` is stored by its values
//! `F(1, σ_2, …, σ_n)`, a table on `Γ^{n−1}`. The Čech differential is the
//! alternating sum of the `n+1` face maps.

use std::sync::Arc;

use super::cochains::{Coefficients, Cochains};
use crate::error::{Error, Result};
use crate::galois::GammaModule;
use crate::znf::int::{self, Int};

#[derive(Clone, Debug)]
pub struct CechDictionary {
    /// Full (non-normalized) cochains; Čech tables use the same indexing on `Γ^{n−1}`.
    pub cochains: Cochains,
}

impl CechDictionary {
    pub fn new(m: &GammaModule) -> Self {
        CechDictionary { cochains: Cochains::full(Coefficients::new(m)) }
    }

    pub fn coefficients(&self) -> &Arc<Coefficients> {
        &self.cochains.coeff
    }

    fn check(&self, n: usize, table: &[Int]) -> Result<()> {
        if n == 0 {
            return Err(Error::Invalid("Čech cochains start in degree 1".into()));
        }
        if table.len() != self.cochains.dim(n - 1) {
            return Err(Error::Invalid(format!("table has {} entries, expected {}", table.len(), self.cochains.dim(n - 1))));
        }
        Ok(())
    }

    /// `F(σ_1, …, σ_n)` for an arbitrary tuple.
    pub fn evaluate(&self, table: &[Int], sigma: &[usize]) -> Vec<Int> {
        let g = self.cochains.group();
        let s0 = g.inv(sigma[0]);
        let rest: Vec<usize> = sigma[1..].iter().map(|&s| g.mul(s0, s)).collect();
        self.cochains.coeff.act(sigma[0], &self.cochains.value(table, &rest))
    }

    /// Čech `n`-cochain to group `(n−1)`-cochain: `φ(g_1, …) = F(1, g_1, g_1g_2, …)`.
    pub fn cech_to_group(&self, n: usize, table: &[Int]) -> Result<Vec<Int>> {
        self.check(n, table)?;
        let g = self.cochains.group().clone();
        Ok(self.cochains.tabulate(n - 1, |t| {
            let mut partial = Vec::with_capacity(t.len());
            let mut acc = g.identity();
            for &x in t {
                acc = g.mul(acc, x);
                partial.push(acc);
            }
            self.cochains.value(table, &partial)
        }))
    }

    /// Inverse translation: successive quotients `σ_{i}^{-1} σ_{i+1}`.
    pub fn group_to_cech(&self, n: usize, phi: &[Int]) -> Result<Vec<Int>> {
        self.check(n, phi)?;
        let g = self.cochains.group().clone();
        Ok(self.cochains.tabulate(n - 1, |t| {
            let mut prev = g.identity();
            let quotients: Vec<usize> = t
                .iter()
                .map(|&s| {
                    let q = g.mul(g.inv(prev), s);
                    prev = s;
                    q
                })
                .collect();
            self.cochains.value(phi, &quotients)
        }))
    }

    /// Alternating sum of the face maps, producing a Čech `(n+1)`-cochain.
    pub fn cech_differential(&self, n: usize, table: &[Int]) -> Result<Vec<Int>> {
        self.check(n, table)?;
        let g = self.cochains.group().clone();
        let h = self.cochains.coeff.rank();
        Ok(self.cochains.tabulate(n, |t| {
            let mut sigma = Vec::with_capacity(n + 1);
            sigma.push(g.identity());
            sigma.extend_from_slice(t);
            let mut acc = vec![int::zero(); h];
            for i in 0..=n {
                let face: Vec<usize> = sigma.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &s)| s).collect();
                let v = self.evaluate(table, &face);
                for (a, x) in acc.iter_mut().zip(v) {
                    if i % 2 == 0 {
                        *a += x;
                    } else {
                        *a -= x;
                    }
                }
            }
            acc
        }))
    }

    /// Group differential on the full cochain model.
    pub fn group_differential(&self, r: usize, phi: &[Int]) -> Vec<Int> {
        self.cochains.differential(r, phi)
    }

    /// Whether the translation intertwines the two differentials on `table`.
    pub fn commutes_on(&self, n: usize, table: &[Int]) -> Result<bool> {
        let lhs = self.cech_to_group(n + 1, &self.cech_differential(n, table)?)?;
        let rhs = self.group_differential(n - 1, &self.cech_to_group(n, table)?);
        Ok(lhs == rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FiniteGroup;
    use crate::znf::int::int;
    use crate::znf::AbGroup;
    use rand::{Rng, SeedableRng};

    #[test]
    fn dictionary_commutes_and_round_trips() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric3()] {
            let g = Arc::new(g);
            let m = GammaModule::trivial_action(g.clone(), Arc::new(AbGroup::cyclic(5)));
            let dict = CechDictionary::new(&m);
            for n in 1..=3 {
                for _ in 0..5 {
                    let t: Vec<Int> = (0..dict.cochains.dim(n - 1)).map(|_| int(rng.gen_range(0..5))).collect();
                    assert!(dict.commutes_on(n, &t).unwrap());
                    let back = dict.group_to_cech(n, &dict.cech_to_group(n, &t).unwrap()).unwrap();
                    assert_eq!(back, t);
                }
            }
        }
    }
}
