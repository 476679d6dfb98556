//! Finite-level models of dual-torus complexes: coefficients `X ⊗ (1/n)ℤ/ℤ`,
//! identified with `X ⊗ ℤ/n` by multiplication by `n`.

use std::sync::Arc;

use super::lattice::{HyperModel, LatticeComplex, ModularComplex, MAX_HYPER_DEGREE};
use crate::error::{Error, Result};
use crate::znf::int::{self, Int};
use crate::znf::{AbGroup, Morphism};

/// `base ⊗ ℤ/n`, with `base` read as `X^*(U) → X^*(T)`.
#[derive(Clone, Debug)]
pub struct DualModel {
    pub base: LatticeComplex,
    pub modulus: Int,
}

impl DualModel {
    pub fn new(base: LatticeComplex, modulus: Int) -> Result<Self> {
        let order = int::int(base.group().order() as i64);
        if int::is_zero(&modulus) || !int::divides(&order, &modulus) {
            return Err(Error::Invalid(format!("modulus {modulus} is not a positive multiple of |Γ| = {order}")));
        }
        Ok(DualModel { base, modulus })
    }

    /// `|Γ|²·exp(coker f)`, large enough to kill every finite hypercohomology
    /// group in degrees 1 and 2 of an isogeny complex.
    pub fn threshold(base: &LatticeComplex) -> Int {
        let g = int::int(base.group().order() as i64);
        &g * &g * base.cokernel_exponent().unwrap_or_else(int::one)
    }

    pub fn at_threshold(base: LatticeComplex) -> Result<Self> {
        let n = Self::threshold(&base);
        Self::new(base, n)
    }

    fn model(&self, top: usize) -> Result<HyperModel> {
        HyperModel::new(&ModularComplex { base: self.base.clone(), modulus: Some(self.modulus.clone()) }, top)
    }

    pub fn doubled(&self) -> DualModel {
        DualModel { base: self.base.clone(), modulus: &self.modulus * int::int(2) }
    }
}

/// The groups of one dual model in degrees `0..=3`.
#[derive(Clone, Debug)]
pub struct DualCohomology {
    pub modulus: Int,
    pub groups: Vec<Arc<AbGroup>>,
    /// `H^r` modulo the reductions of integral classes, for `r = 1..=3` at
    /// index `r - 1`. This is the part isomorphic to `H^{r+1}[n]` of the
    /// lattice complex, and the part that survives in the colimit over `n`.
    pub reduced: Vec<Arc<AbGroup>>,
}

impl DualCohomology {
    pub fn reduced_h1(&self) -> &Arc<AbGroup> {
        &self.reduced[0]
    }
}

pub fn dual_model_cohomology(d: &DualModel) -> Result<DualCohomology> {
    let model = d.model(MAX_HYPER_DEGREE)?;
    let integral = HyperModel::new(&ModularComplex { base: d.base.clone(), modulus: None }, MAX_HYPER_DEGREE)?;
    let groups: Vec<Arc<AbGroup>> = (0..=MAX_HYPER_DEGREE).map(|r| model.hypercohomology(r)).collect::<Result<_>>()?;
    let reduced = (1..=MAX_HYPER_DEGREE)
        .map(|r| Ok(Arc::new(groups[r].quotient_by(integral.hypercohomology(r)?.numer_basis())?)))
        .collect::<Result<_>>()?;
    Ok(DualCohomology { modulus: d.modulus.clone(), groups, reduced })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationAudit {
    pub modulus: Int,
    /// Reduced `H^1`, `H^2`, `H^3`: whether `ℤ/n → ℤ/2n` induces an isomorphism.
    pub isomorphisms: Vec<bool>,
    pub orders: Vec<Option<Int>>,
}

impl StabilizationAudit {
    pub fn stable(&self) -> bool {
        self.isomorphisms.iter().all(|&b| b)
    }
}

pub fn stabilization_audit(d: &DualModel) -> Result<StabilizationAudit> {
    let low = dual_model_cohomology(d)?;
    let high = dual_model_cohomology(&d.doubled())?;
    let two = int::int(2);
    let double = |v: &[Int]| v.iter().map(|x| x * &two).collect::<Vec<Int>>();
    let mut isomorphisms = Vec::new();
    let mut orders = Vec::new();
    for (a, b) in low.reduced.iter().zip(&high.reduced) {
        let m = Morphism::from_fn(a.clone(), b.clone(), double)?;
        isomorphisms.push(m.is_isomorphism());
        orders.push(a.order());
    }
    Ok(StabilizationAudit { modulus: d.modulus.clone(), isomorphisms, orders })
}

/// `|H^1(dual, reduced)|` against `|H^2(Γ, base)|` on the lattice side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderComparison {
    pub dual_reduced_h1: Option<Int>,
    pub lattice_h2: Option<Int>,
}

impl OrderComparison {
    pub fn equal(&self) -> bool {
        self.dual_reduced_h1.is_some() && self.dual_reduced_h1 == self.lattice_h2
    }
}

pub fn order_comparison(d: &DualModel) -> Result<OrderComparison> {
    let dual = dual_model_cohomology(d)?;
    let lattice = HyperModel::new(&ModularComplex { base: d.base.clone(), modulus: None }, 2)?.hypercohomology(2)?;
    Ok(OrderComparison { dual_reduced_h1: dual.reduced_h1().order(), lattice_h2: lattice.order() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{FiniteGroup, GammaModule};
    use crate::znf::int::int;
    use crate::znf::IntMatrix;

    fn doubling(g: Arc<FiniteGroup>, s: &[i64]) -> LatticeComplex {
        let m = GammaModule::sign_lattice(g, s).unwrap();
        LatticeComplex::new(m.clone(), m, IntMatrix::from_rows(&[vec![2]])).unwrap()
    }

    #[test]
    fn modulus_must_be_multiple_of_order() {
        let c = doubling(Arc::new(FiniteGroup::cyclic(2)), &[1, -1]);
        assert!(DualModel::new(c, int(3)).is_err());
    }

    #[test]
    fn sign_doubling_compares_and_stabilizes() {
        let c = doubling(Arc::new(FiniteGroup::cyclic(2)), &[1, -1]);
        let d = DualModel::at_threshold(c).unwrap();
        assert!(order_comparison(&d).unwrap().equal());
        assert!(stabilization_audit(&d).unwrap().stable());
    }

    #[test]
    fn trivial_group_vanishes() {
        let c = doubling(Arc::new(FiniteGroup::trivial()), &[1]);
        let d = DualModel::at_threshold(c).unwrap();
        let h = dual_model_cohomology(&d).unwrap();
        assert!(h.reduced.iter().all(|g| g.is_trivial()) && h.groups[2].is_trivial() && h.groups[3].is_trivial());
    }
}
