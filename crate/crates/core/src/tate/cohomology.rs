//! Tate cohomology groups in degrees −1 through 3.

use std::sync::Arc;

use super::cochains::{Coefficients, Cochains};
use crate::error::{Error, Result};
use crate::galois::GammaModule;
use crate::znf::int::{self, Int};
use crate::znf::{kernel_lattice, AbGroup, IntMatrix, Morphism};

pub const MIN_DEGREE: i32 = -1;
pub const MAX_DEGREE: i32 = 3;

/// `Ĥ^i(Γ, M)` as a subquotient of the degree-`i` cochains (the module itself
/// for `i ≤ 0`), together with a compact isomorphic copy `⊕ ℤ/d_j` whose
/// standard basis vectors are the classes of the chosen representatives.
#[derive(Clone, Debug)]
pub struct TateGroup {
    pub degree: i32,
    pub cochains: Cochains,
    cocycles: AbGroup,
    compact: Arc<AbGroup>,
}

/// An element of a cohomology group with a representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomClass {
    pub degree: i32,
    pub coords: Vec<Int>,
    /// A module element in canonical coordinates for `i ≤ 0`, a cochain table otherwise.
    pub representative: Vec<Int>,
}

impl TateGroup {
    pub fn coefficients(&self) -> &Arc<Coefficients> {
        &self.cochains.coeff
    }

    /// The group as `⊕ ℤ/d_j`.
    pub fn group(&self) -> &Arc<AbGroup> {
        &self.compact
    }

    pub fn invariants(&self) -> &[Int] {
        self.compact.invariants()
    }

    pub fn order(&self) -> Option<Int> {
        self.compact.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.compact.is_trivial()
    }

    pub fn describe(&self) -> String {
        self.compact.describe()
    }

    /// The cocycle subgroup (with coboundaries as relations).
    pub fn cocycles(&self) -> &AbGroup {
        &self.cocycles
    }

    pub fn is_cocycle(&self, f: &[Int]) -> bool {
        self.cocycles.contains(f)
    }

    pub fn is_coboundary(&self, f: &[Int]) -> bool {
        self.cocycles.contains(f) && self.cocycles.is_zero_elem(f)
    }

    /// Coordinates of the class of a cocycle in the compact group.
    pub fn classify(&self, f: &[Int]) -> Result<Vec<Int>> {
        self.cocycles
            .coords(f)
            .ok_or_else(|| Error::Invalid(format!("not a cocycle in degree {}", self.degree)))
    }

    /// A cocycle representing the class with the given coordinates.
    pub fn representative(&self, coords: &[Int]) -> Vec<Int> {
        self.cochains.coeff.reduce_cochain(&self.cocycles.element(coords))
    }

    pub fn class(&self, coords: &[Int]) -> CohomClass {
        let coords = self.compact.reduce(coords);
        CohomClass { degree: self.degree, representative: self.representative(&coords), coords }
    }

    pub fn class_of(&self, f: &[Int]) -> Result<CohomClass> {
        Ok(CohomClass { degree: self.degree, coords: self.classify(f)?, representative: f.to_vec() })
    }

    /// The homomorphism between compact groups induced by a cochain map.
    pub fn induced_morphism<F: Fn(&[Int]) -> Vec<Int>>(&self, target: &TateGroup, f: F) -> Result<Morphism> {
        Morphism::from_fn(self.compact.clone(), target.compact.clone(), |c| {
            let image = f(&self.representative(c));
            target.classify(&image).expect("cochain map sends cocycles to cocycles")
        })
    }
}

impl Coefficients {
    pub(crate) fn reduce_cochain(&self, f: &[Int]) -> Vec<Int> {
        let h = self.rank();
        if h == 0 {
            return Vec::new();
        }
        f.chunks(h).flat_map(|c| self.reduce(c)).collect()
    }
}

pub fn tate_cohomology(m: &GammaModule, degree: i32) -> Result<TateGroup> {
    tate_cohomology_with(Cochains::normalized(Coefficients::new(m)), degree)
}

pub(crate) fn tate_cohomology_with(cochains: Cochains, degree: i32) -> Result<TateGroup> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&degree) {
        return Err(Error::Unsupported(format!("Tate cohomology is computed in degrees -1..3, not {degree}")));
    }
    let coeff = cochains.coeff.clone();
    let h = coeff.rank();
    let group = coeff.group().clone();
    let moduli = &coeff.invariants;
    let with_moduli = |m: &IntMatrix, mods: &[Int]| -> Vec<(Vec<Int>, Int)> {
        (0..m.rows()).map(|i| (m.row_vec(i), mods[i].clone())).collect()
    };
    let cocycles = match degree {
        -1 => {
            let mut norm = IntMatrix::zeros(h, h);
            for a in &coeff.action {
                norm = norm.add(a);
            }
            let ker = kernel_lattice(h, &with_moduli(&norm, moduli));
            let mut aug = Vec::new();
            for g in group.generating_set() {
                let d = coeff.action[g].sub(&IntMatrix::identity(h));
                aug.extend(d.columns());
            }
            AbGroup::subquotient(moduli, &ker, &aug)?
        }
        0 => {
            let mut rows = Vec::new();
            for g in group.generating_set() {
                let d = coeff.action[g].sub(&IntMatrix::identity(h));
                rows.extend(with_moduli(&d, moduli));
            }
            let ker = kernel_lattice(h, &rows);
            let mut norm = IntMatrix::zeros(h, h);
            for a in &coeff.action {
                norm = norm.add(a);
            }
            AbGroup::subquotient(moduli, &ker, &norm.columns())?
        }
        r => {
            let r = r as usize;
            let ker = kernel_lattice(cochains.dim(r), &cochains.differential_rows(r));
            let bound: Vec<Vec<Int>> = cochains.basis(r - 1).iter().map(|e| cochains.differential(r - 1, e)).collect();
            AbGroup::subquotient(&cochains.moduli(r), &ker, &bound)?
        }
    };
    let compact = Arc::new(AbGroup::diagonal(cocycles.invariants()));
    let order = int::int(group.order() as i64);
    for d in cocycles.invariants() {
        assert!(
            int::divides(d, &order),
            "invariant factor {d} of a Tate cohomology group does not divide the group order {order}"
        );
    }
    Ok(TateGroup { degree, cochains, cocycles, compact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FiniteGroup;
    use crate::znf::int::int;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn sign_lattice_over_c2() {
        let m = GammaModule::sign_lattice(c2(), &[1, -1]).unwrap();
        assert_eq!(tate_cohomology(&m, -1).unwrap().invariants(), &[int(2)]);
        assert!(tate_cohomology(&m, 0).unwrap().is_trivial());
        assert_eq!(tate_cohomology(&m, 1).unwrap().invariants(), &[int(2)]);
        assert!(tate_cohomology(&m, 2).unwrap().is_trivial());
        assert_eq!(tate_cohomology(&m, 3).unwrap().invariants(), &[int(2)]);
    }

    #[test]
    fn trivial_lattice_over_c2() {
        let m = GammaModule::trivial_action(c2(), Arc::new(AbGroup::free(1)));
        assert!(tate_cohomology(&m, -1).unwrap().is_trivial());
        assert_eq!(tate_cohomology(&m, 0).unwrap().invariants(), &[int(2)]);
        assert!(tate_cohomology(&m, 1).unwrap().is_trivial());
        assert_eq!(tate_cohomology(&m, 2).unwrap().invariants(), &[int(2)]);
    }

    #[test]
    fn degree_out_of_range() {
        let m = GammaModule::trivial_action(c2(), Arc::new(AbGroup::free(1)));
        assert!(matches!(tate_cohomology(&m, 4), Err(Error::Unsupported(_))));
        assert!(tate_cohomology(&m, -2).is_err());
    }

    #[test]
    fn trivial_group_has_no_cohomology() {
        let g = Arc::new(FiniteGroup::trivial());
        let m = GammaModule::trivial_action(g, Arc::new(AbGroup::diagonal(&[int(6), int(0)])));
        for i in -1..=3 {
            assert!(tate_cohomology(&m, i).unwrap().is_trivial());
        }
    }

    #[test]
    fn s3_trivial_coefficients() {
        // H^1(S3, Z/2) = Hom(S3, Z/2) = Z/2, H^2(S3, Z) = Z/2.
        let g = Arc::new(FiniteGroup::symmetric3());
        let m = GammaModule::trivial_action(g.clone(), Arc::new(AbGroup::cyclic(2)));
        assert_eq!(tate_cohomology(&m, 1).unwrap().invariants(), &[int(2)]);
        let z = GammaModule::trivial_action(g, Arc::new(AbGroup::free(1)));
        assert_eq!(tate_cohomology(&z, 2).unwrap().invariants(), &[int(2)]);
        assert_eq!(tate_cohomology(&z, 0).unwrap().invariants(), &[int(6)]);
    }

    #[test]
    fn representatives_round_trip() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let m = GammaModule::trivial_action(g, Arc::new(AbGroup::cyclic(4)));
        let h = tate_cohomology(&m, 2).unwrap();
        assert_eq!(h.invariants(), &[int(4)]);
        for c in h.group().enumerate(16).unwrap() {
            let rep = h.representative(&c);
            assert!(h.is_cocycle(&rep));
            assert_eq!(h.classify(&rep).unwrap(), c);
        }
    }
}
