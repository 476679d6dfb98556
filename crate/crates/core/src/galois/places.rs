//! Place systems, their conditions, decomposition data and the modules
//! `ℤ/n[Γ × S]` killed by both augmentations.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::group::{FiniteGroup, Subgroup};
use super::gset::GammaSet;
use super::module::{GammaModule, InducedModule};
use crate::error::{Error, Result};
use crate::znf::int::{self, Int};
use crate::znf::{kernel_lattice, AbGroup, IntMatrix};

/// Labels of a level `(E, S, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelLabel {
    pub field: String,
    pub places: String,
    pub modulus: Int,
}

/// Conditions (1) and (2) cannot be decided from a finite Γ-set; they are
/// supplied by the caller and echoed back.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ArithmeticFlags {
    pub ramification_contained: bool,
    pub class_group_killed: bool,
}

#[derive(Clone, Debug)]
pub struct PlaceSystem {
    group: Arc<FiniteGroup>,
    places: GammaSet,
    section: Vec<usize>,
    flags: ArithmeticFlags,
    level: LevelLabel,
    ambient: Option<GammaSet>,
}

impl PlaceSystem {
    pub fn new(
        group: Arc<FiniteGroup>,
        places: GammaSet,
        section: Vec<usize>,
        flags: ArithmeticFlags,
        level: LevelLabel,
    ) -> Result<Self> {
        if level.modulus < int::one() {
            return Err(Error::Invalid(format!("modulus must be at least 1, got {}", level.modulus)));
        }
        if places.table().len() != group.order() {
            return Err(Error::Invalid("place action does not match the group".into()));
        }
        let orbits = places.orbits();
        let mut hit = vec![0usize; orbits.len()];
        for &v in &section {
            let o = orbits
                .iter()
                .position(|o| o.binary_search(&v).is_ok())
                .ok_or_else(|| Error::Invalid(format!("section point {v} is not a place")))?;
            hit[o] += 1;
        }
        if let Some(o) = hit.iter().position(|&c| c != 1) {
            return Err(Error::Invalid(format!(
                "the section meets the orbit {:?} {} times (expected exactly once)",
                orbits[o], hit[o]
            )));
        }
        let mut section = section;
        section.sort_unstable();
        Ok(PlaceSystem { group, places, section, flags, level, ambient: None })
    }

    /// Places outside `S` (given as a larger Γ-set) against which condition (3) is checked.
    pub fn with_ambient(mut self, ambient: GammaSet) -> Result<Self> {
        if ambient.table().len() != self.group.order() {
            return Err(Error::Invalid("ambient place action does not match the group".into()));
        }
        self.ambient = Some(ambient);
        Ok(self)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn places(&self) -> &GammaSet {
        &self.places
    }

    pub fn section(&self) -> &[usize] {
        &self.section
    }

    pub fn is_dotted(&self, w: usize) -> bool {
        self.section.binary_search(&w).is_ok()
    }

    pub fn flags(&self) -> ArithmeticFlags {
        self.flags
    }

    pub fn level(&self) -> &LevelLabel {
        &self.level
    }

    pub fn modulus(&self) -> &Int {
        &self.level.modulus
    }

    pub fn ambient(&self) -> Option<&GammaSet> {
        self.ambient.as_ref()
    }

    /// The dotted place in the orbit of `w`.
    pub fn dotted_of(&self, w: usize) -> usize {
        let orbit = self.places.orbit_of(w);
        *self.section.iter().find(|v| orbit.binary_search(v).is_ok()).expect("section meets every orbit")
    }

    /// Whether `w ∈ σ·Ṡ`.
    pub fn in_translated_section(&self, sigma: usize, w: usize) -> bool {
        self.is_dotted(self.places.act(self.group.inv(sigma), w))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub ramification_contained: bool,
    pub class_group_killed: bool,
    pub stabilizers_realized: bool,
    /// Ambient places whose stabilizer does not occur in `S`.
    pub stabilizer_violations: Vec<usize>,
    pub every_element_fixes_dotted: bool,
    /// Group elements fixing no dotted place.
    pub fixing_violations: Vec<usize>,
    pub note: String,
}

impl ConditionReport {
    /// Conditions (3) and (4).
    pub fn combinatorial_ok(&self) -> bool {
        self.stabilizers_realized && self.every_element_fixes_dotted
    }

    pub fn all_ok(&self) -> bool {
        self.combinatorial_ok() && self.ramification_contained && self.class_group_killed
    }
}

pub fn check_place_conditions(p: &PlaceSystem) -> ConditionReport {
    let s = &p.places;
    let in_s: BTreeSet<Vec<usize>> = (0..s.size()).map(|w| s.stabilizer(w)).collect();
    let (stabilizer_violations, note) = match &p.ambient {
        Some(amb) => (
            (0..amb.size()).filter(|&w| !in_s.contains(&amb.stabilizer(w))).collect(),
            "condition (3) checked against the declared ambient places".to_string(),
        ),
        None => (Vec::new(), "condition (3) checked against S itself (no ambient places declared)".to_string()),
    };
    let fixing_violations: Vec<usize> =
        p.group.elements().filter(|&g| !p.section.iter().any(|&v| s.act(g, v) == v)).collect();
    ConditionReport {
        ramification_contained: p.flags.ramification_contained,
        class_group_killed: p.flags.class_group_killed,
        stabilizers_realized: stabilizer_violations.is_empty(),
        stabilizer_violations,
        every_element_fixes_dotted: fixing_violations.is_empty(),
        fixing_violations,
        note,
    }
}

/// Decomposition group of a dotted place with a right transversal `Γ_v τ`.
#[derive(Clone, Debug)]
pub struct DecompositionData {
    pub place: usize,
    pub stabilizer: Subgroup,
    pub coset_reps: Vec<usize>,
}

impl DecompositionData {
    /// Lexicographically minimal transversal, identity for the trivial coset.
    pub fn new(p: &PlaceSystem, place: usize) -> Result<Self> {
        if !p.is_dotted(place) {
            return Err(Error::Invalid(format!("place {place} is not in the dotted section")));
        }
        let stab = p.places.stabilizer(place);
        let stabilizer = p.group.subgroup(&stab)?;
        let coset_reps = p.group.right_transversal(&stab);
        Ok(DecompositionData { place, stabilizer, coset_reps })
    }

    /// Replace the transversal, checking that it is one and is identity-normalised.
    pub fn with_reps(&self, group: &FiniteGroup, reps: Vec<usize>) -> Result<Self> {
        let cosets = group.right_cosets(&self.stabilizer.elements);
        if reps.len() != cosets.len() {
            return Err(Error::Invalid("wrong number of coset representatives".into()));
        }
        for (c, r) in cosets.iter().zip(&reps) {
            if c.binary_search(r).is_err() {
                return Err(Error::Invalid(format!("{r} does not represent the coset {c:?}")));
            }
        }
        if reps[0] != group.identity() {
            return Err(Error::Invalid("the trivial coset must be represented by the identity".into()));
        }
        Ok(DecompositionData { coset_reps: reps, ..self.clone() })
    }

    /// Every identity-normalised transversal, up to `budget` of them.
    pub fn all_transversals(&self, group: &FiniteGroup, budget: usize) -> Result<Vec<Vec<usize>>> {
        let cosets = group.right_cosets(&self.stabilizer.elements);
        let count = cosets.iter().skip(1).try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
        match count {
            Some(c) if c <= budget => {}
            _ => return Err(Error::Budget(format!("more than {budget} transversals"))),
        }
        let mut out = vec![vec![group.identity()]];
        for c in cosets.iter().skip(1) {
            out = out.into_iter().flat_map(|t| c.iter().map(move |&r| [t.clone(), vec![r]].concat())).collect();
        }
        Ok(out)
    }
}

pub fn restrict_to_decomposition(m: &GammaModule, d: &DecompositionData) -> GammaModule {
    m.restrict(&d.stabilizer)
}

/// `ℤ/n[Γ × S]` and its submodules killed by both augmentations. The ambient
/// index of `(σ, w)` is `σ·|S| + w`; γ acts by `(σ, w) ↦ (γσ, γw)`.
#[derive(Clone, Debug)]
pub struct DoubleAugmentation {
    pub modulus: Int,
    pub num_places: usize,
    pub full: GammaModule,
    pub kernel: GammaModule,
    pub dotted: Option<GammaModule>,
}

impl DoubleAugmentation {
    pub fn index(&self, sigma: usize, w: usize) -> usize {
        sigma * self.num_places + w
    }

    pub fn unpack(&self, i: usize) -> (usize, usize) {
        (i / self.num_places, i % self.num_places)
    }
}

pub fn double_augmentation_kernel(group: &Arc<FiniteGroup>, places: &GammaSet, n: &Int, section: Option<&PlaceSystem>) -> DoubleAugmentation {
    let g = group.order();
    let s = places.size();
    let dim = g * s;
    let idx = |sigma: usize, w: usize| sigma * s + w;
    let moduli = vec![n.clone(); dim];
    let full_group = Arc::new(AbGroup::diagonal(&moduli));
    let action: Vec<IntMatrix> = group
        .elements()
        .map(|gamma| {
            let mut m = IntMatrix::zeros(dim, dim);
            for sigma in 0..g {
                for w in 0..s {
                    m.set(idx(group.mul(gamma, sigma), places.act(gamma, w)), idx(sigma, w), int::one());
                }
            }
            m
        })
        .collect();
    let action = Arc::new(action);
    let full = GammaModule::new_unchecked(group.clone(), full_group.clone(), action.clone());
    let mut rows: Vec<(Vec<Int>, Int)> = Vec::new();
    for w in 0..s {
        let mut r = vec![int::zero(); dim];
        for sigma in 0..g {
            r[idx(sigma, w)] = int::one();
        }
        rows.push((r, n.clone()));
    }
    for sigma in 0..g {
        let mut r = vec![int::zero(); dim];
        for w in 0..s {
            r[idx(sigma, w)] = int::one();
        }
        rows.push((r, n.clone()));
    }
    let build = |rows: &[(Vec<Int>, Int)]| {
        let gens = kernel_lattice(dim, rows);
        let sub = AbGroup::subquotient(&moduli, &gens, &[]).expect("kernel inside the ambient");
        GammaModule::new_unchecked(group.clone(), Arc::new(sub), action.clone())
    };
    let kernel = build(&rows);
    let dotted = section.map(|p| {
        let mut rows = rows.clone();
        for sigma in 0..g {
            for w in 0..s {
                if !p.in_translated_section(sigma, w) {
                    let mut r = vec![int::zero(); dim];
                    r[idx(sigma, w)] = int::one();
                    rows.push((r, n.clone()));
                }
            }
        }
        build(&rows)
    });
    DoubleAugmentation { modulus: n.clone(), num_places: s, full, kernel, dotted }
}

/// `ℤ/n[X]_0`: sum-zero elements of `ℤ/n[X]` (identified with `(1/n)ℤ/ℤ[X]_0`).
pub fn sum_zero_module(group: &Arc<FiniteGroup>, x: &GammaSet, n: &Int) -> (InducedModule, GammaModule) {
    let base = GammaModule::trivial_action(group.clone(), Arc::new(AbGroup::diagonal(&[n.clone()])));
    let ind = super::module::induced_module(x, &base);
    let k = super::module::augmentation_kernel(&ind);
    (ind, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::znf::int::int;

    fn label(n: i64) -> LevelLabel {
        LevelLabel { field: "E".into(), places: "S".into(), modulus: int(n) }
    }

    fn swapped_pair(g: &Arc<FiniteGroup>) -> GammaSet {
        GammaSet::new(g, vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn section_must_meet_each_orbit_once() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let x = swapped_pair(&g);
        assert!(PlaceSystem::new(g.clone(), x.clone(), vec![0, 1], ArithmeticFlags::default(), label(2)).is_err());
        assert!(PlaceSystem::new(g.clone(), x.clone(), vec![], ArithmeticFlags::default(), label(2)).is_err());
        assert!(PlaceSystem::new(g, x, vec![1], ArithmeticFlags::default(), label(0)).is_err());
    }

    #[test]
    fn condition_four() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let p = PlaceSystem::new(g.clone(), swapped_pair(&g), vec![0], ArithmeticFlags::default(), label(2)).unwrap();
        let r = check_place_conditions(&p);
        assert!(!r.every_element_fixes_dotted);
        assert_eq!(r.fixing_violations, vec![1]);
        let x = swapped_pair(&g).disjoint_union(&GammaSet::fixed_points(&g, 1));
        let p = PlaceSystem::new(g, x, vec![0, 2], ArithmeticFlags::default(), label(2)).unwrap();
        assert!(check_place_conditions(&p).every_element_fixes_dotted);
    }

    #[test]
    fn double_augmentation_orders() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let d = double_augmentation_kernel(&g, &swapped_pair(&g), &int(2), None);
        assert_eq!(d.kernel.underlying().order(), Some(int(2)));
        d.kernel.validate().unwrap();
        let d = double_augmentation_kernel(&g, &swapped_pair(&g), &int(1), None);
        assert!(d.kernel.underlying().is_trivial());
        // For trivial Γ the sum over Γ is the identity, so nothing survives.
        let t = Arc::new(FiniteGroup::trivial());
        let d = double_augmentation_kernel(&t, &GammaSet::fixed_points(&t, 4), &int(3), None);
        assert!(d.kernel.underlying().is_trivial());
    }

    #[test]
    fn transversals_enumerated() {
        let g = Arc::new(FiniteGroup::symmetric3());
        let t = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        let x = GammaSet::left_cosets(&g, &g.closure(&[t])).unwrap();
        let sec = x.canonical_section();
        let p = PlaceSystem::new(g.clone(), x, sec.clone(), ArithmeticFlags::default(), label(2)).unwrap();
        let d = DecompositionData::new(&p, sec[0]).unwrap();
        let all = d.all_transversals(&g, 100).unwrap();
        assert_eq!(all.len(), 4);
        for t in all {
            d.with_reps(&g, t).unwrap();
        }
    }
}
