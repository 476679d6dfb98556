//! Levels `(E, Ṡ_E, n)` and the maps between them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::{
    check_place_conditions, double_augmentation_kernel, ArithmeticFlags, ConditionReport, DoubleAugmentation, FiniteGroup,
    GammaSet, LevelLabel, PlaceSystem,
};
use crate::znf::int::{self, Int};

/// A place system whose conditions (3) and (4) hold, unless explicitly overridden.
#[derive(Clone, Debug)]
pub struct Level {
    pub system: PlaceSystem,
    pub conditions: ConditionReport,
    pub overridden: bool,
    pub modules: DoubleAugmentation,
}

impl Level {
    pub fn new(system: PlaceSystem) -> Result<Self> {
        Self::build(system, false)
    }

    /// Accept a system violating conditions (3)–(4); used for negative controls.
    pub fn with_override(system: PlaceSystem) -> Result<Self> {
        Self::build(system, true)
    }

    fn build(system: PlaceSystem, allow: bool) -> Result<Self> {
        let conditions = check_place_conditions(&system);
        if !allow && !conditions.combinatorial_ok() {
            let mut why = Vec::new();
            if !conditions.every_element_fixes_dotted {
                why.push(format!("elements {:?} fix no dotted place", conditions.fixing_violations));
            }
            if !conditions.stabilizers_realized {
                why.push(format!("ambient places {:?} have stabilizers not realized in S", conditions.stabilizer_violations));
            }
            return Err(Error::Invalid(format!("place conditions fail: {}", why.join("; "))));
        }
        let modules = double_augmentation_kernel(system.group(), system.places(), system.modulus(), Some(&system));
        Ok(Level { overridden: allow && !conditions.combinatorial_ok(), system, conditions, modules })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.system.group()
    }

    pub fn places(&self) -> &GammaSet {
        self.system.places()
    }

    pub fn modulus(&self) -> &Int {
        self.system.modulus()
    }

    pub fn num_places(&self) -> usize {
        self.system.places().size()
    }

    pub fn section(&self) -> &[usize] {
        self.system.section()
    }
}

/// `(E, Ṡ_E, n) < (K, Ṡ'_K, m)`: a surjection `Γ_K → Γ_E`, the map `u ↦ u_E`
/// on places (undefined for places of K over `S' ∖ S`) and a section
/// `s: S_E → S'_K` with `s(Ṡ_E) ⊆ Ṡ'_K`.
#[derive(Clone, Debug)]
pub struct LevelMap {
    pub source: Level,
    pub target: Level,
    pub surjection: Vec<usize>,
    pub below: Vec<Option<usize>>,
    pub section: Vec<usize>,
}

impl LevelMap {
    pub fn new(source: Level, target: Level, surjection: Vec<usize>, below: Vec<Option<usize>>) -> Result<Self> {
        let (ge, gk) = (source.group().clone(), target.group().clone());
        if !gk.is_homomorphism(&ge, &surjection) {
            return Err(Error::Invalid("group map is not a homomorphism".into()));
        }
        if (0..ge.order()).any(|x| !surjection.contains(&x)) {
            return Err(Error::Invalid("group map is not surjective".into()));
        }
        if !int::divides(source.modulus(), target.modulus()) {
            return Err(Error::Invalid(format!("{} does not divide {}", source.modulus(), target.modulus())));
        }
        let (se, sk) = (source.places(), target.places());
        if below.len() != sk.size() || below.iter().flatten().any(|&w| w >= se.size()) {
            return Err(Error::Invalid("place map has the wrong shape".into()));
        }
        for g in gk.elements() {
            for u in 0..sk.size() {
                let lhs = below[sk.act(g, u)];
                let rhs = below[u].map(|w| se.act(surjection[g], w));
                if lhs != rhs {
                    return Err(Error::NotEquivariant(format!("place map fails at element {g}, place {u}")));
                }
            }
        }
        let kernel = gk.kernel_of(&ge, &surjection);
        let mut section = Vec::with_capacity(se.size());
        for w in 0..se.size() {
            let fiber: Vec<usize> = (0..sk.size()).filter(|&u| below[u] == Some(w)).collect();
            let first = *fiber.first().ok_or_else(|| Error::Invalid(format!("no place of K above place {w}")))?;
            let mut orbit: Vec<usize> = kernel.iter().map(|&k| sk.act(k, first)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            if orbit != fiber {
                return Err(Error::Invalid(format!("Gal(K/E) is not transitive on the places above {w}")));
            }
            let dotted: Vec<usize> = fiber.iter().copied().filter(|&u| target.system.is_dotted(u)).collect();
            section.push(if source.system.is_dotted(w) {
                *dotted
                    .first()
                    .ok_or_else(|| Error::Invalid(format!("no dotted place of K above the dotted place {w}")))?
            } else {
                first
            });
        }
        for &u in target.section() {
            if let Some(w) = below[u] {
                if !source.system.is_dotted(w) {
                    return Err(Error::Invalid(format!("dotted place {u} of K lies over the undotted place {w}")));
                }
            }
        }
        Ok(LevelMap { source, target, surjection, below, section })
    }

    pub fn with_section(&self, section: Vec<usize>) -> Result<Self> {
        check_section(self, &section)?;
        Ok(LevelMap { section, ..self.clone() })
    }

    pub fn ratio(&self) -> Int {
        int::div_exact(self.target.modulus(), self.source.modulus())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &LevelMap) -> Result<LevelMap> {
        let surjection: Vec<usize> = next.surjection.iter().map(|&g| self.surjection[g]).collect();
        let below: Vec<Option<usize>> = next.below.iter().map(|u| u.and_then(|u| self.below[u])).collect();
        LevelMap::new(self.source.clone(), next.target.clone(), surjection, below)
    }

    /// Every admissible section, up to `budget` of them.
    pub fn all_sections(&self, budget: usize) -> Result<Vec<Vec<usize>>> {
        let sk = self.target.places();
        let mut choices: Vec<Vec<usize>> = Vec::new();
        for w in 0..self.source.num_places() {
            let fiber: Vec<usize> = (0..sk.size())
                .filter(|&u| self.below[u] == Some(w) && (!self.source.system.is_dotted(w) || self.target.system.is_dotted(u)))
                .collect();
            choices.push(fiber);
        }
        let total = choices.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
        if !matches!(total, Some(t) if t <= budget) {
            return Err(Error::Budget(format!("more than {budget} sections")));
        }
        let mut out = vec![Vec::new()];
        for c in &choices {
            out = out.into_iter().flat_map(|p: Vec<usize>| c.iter().map(move |&u| [p.clone(), vec![u]].concat())).collect();
        }
        Ok(out)
    }
}

fn check_section(m: &LevelMap, s: &[usize]) -> Result<()> {
    if s.len() != m.source.num_places() {
        return Err(Error::Invalid("section has the wrong length".into()));
    }
    for (w, &u) in s.iter().enumerate() {
        if u >= m.below.len() || m.below[u] != Some(w) {
            return Err(Error::Invalid(format!("section sends {w} to {u}, which does not lie above it")));
        }
        if m.source.system.is_dotted(w) && !m.target.system.is_dotted(u) {
            return Err(Error::Invalid(format!("section sends the dotted place {w} to the undotted place {u}")));
        }
    }
    Ok(())
}

/// A place of F described by its decomposition group at each level of a tower.
#[derive(Clone, Debug)]
pub struct PlaceSpec {
    /// Level at which the place joins `S`.
    pub first_level: usize,
    /// Decomposition group at each level from `first_level` on (group elements).
    pub decomposition: Vec<Vec<usize>>,
}

/// A tower of levels built from a chain of group surjections and place
/// specifications. The places of level `i` are the cosets `Γ_i / D_{v,i}`
/// for the places present at that level; the dotted place of each orbit is
/// the identity coset.
#[derive(Clone, Debug)]
pub struct Tower {
    pub levels: Vec<Level>,
    pub maps: Vec<LevelMap>,
}

pub struct TowerSpec {
    pub groups: Vec<Arc<FiniteGroup>>,
    /// `surjections[i]`: `Γ_{i+1} → Γ_i`.
    pub surjections: Vec<Vec<usize>>,
    pub moduli: Vec<Int>,
    pub places: Vec<PlaceSpec>,
    pub allow_violations: bool,
}

/// The Γ-set of one level together with the coset of each point.
fn level_places(group: &FiniteGroup, places: &[(usize, &Vec<usize>)]) -> Result<(GammaSet, Vec<(usize, Vec<usize>)>, Vec<usize>)> {
    let mut labels: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut section = Vec::new();
    for &(v, d) in places {
        if !group.is_subgroup(d) {
            return Err(Error::Invalid(format!("decomposition group {d:?} of place {v} is not a subgroup")));
        }
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for g in group.elements() {
            let mut c: Vec<usize> = d.iter().map(|&x| group.mul(g, x)).collect();
            c.sort_unstable();
            if !seen.contains(&c) {
                if c.contains(&group.identity()) {
                    section.push(labels.len());
                }
                seen.push(c.clone());
                labels.push((v, c));
            }
        }
    }
    let action: Vec<Vec<usize>> = group
        .elements()
        .map(|g| {
            labels
                .iter()
                .map(|(v, c)| {
                    let mut gc: Vec<usize> = c.iter().map(|&x| group.mul(g, x)).collect();
                    gc.sort_unstable();
                    labels.iter().position(|(v2, c2)| v2 == v && *c2 == gc).expect("cosets are permuted")
                })
                .collect()
        })
        .collect();
    Ok((GammaSet::new(group, action)?, labels, section))
}

impl Tower {
    pub fn build(spec: &TowerSpec) -> Result<Self> {
        let k = spec.groups.len();
        if spec.surjections.len() + 1 != k || spec.moduli.len() != k {
            return Err(Error::Invalid("tower data has inconsistent lengths".into()));
        }
        let mut levels = Vec::new();
        let mut labels_per_level = Vec::new();
        for (i, g) in spec.groups.iter().enumerate() {
            let present: Vec<(usize, &Vec<usize>)> = spec
                .places
                .iter()
                .enumerate()
                .filter(|(_, p)| p.first_level <= i)
                .map(|(v, p)| {
                    p.decomposition
                        .get(i - p.first_level)
                        .map(|d| (v, d))
                        .ok_or_else(|| Error::Invalid(format!("place {v} has no decomposition group at level {i}")))
                })
                .collect::<Result<_>>()?;
            let (set, labels, section) = level_places(g, &present)?;
            let label = LevelLabel { field: format!("E{i}"), places: format!("S{i}"), modulus: spec.moduli[i].clone() };
            let flags = ArithmeticFlags { ramification_contained: true, class_group_killed: true };
            let system = PlaceSystem::new(g.clone(), set, section, flags, label)?;
            let level = if spec.allow_violations { Level::with_override(system)? } else { Level::new(system)? };
            levels.push(level);
            labels_per_level.push(labels);
        }
        let mut maps = Vec::new();
        for i in 0..k - 1 {
            let pi = &spec.surjections[i];
            let lower = &labels_per_level[i];
            let below: Vec<Option<usize>> = labels_per_level[i + 1]
                .iter()
                .map(|(v, c)| {
                    let mut img: Vec<usize> = c.iter().map(|&x| pi[x]).collect();
                    img.sort_unstable();
                    img.dedup();
                    lower.iter().position(|(v2, c2)| v2 == v && c2.iter().all(|x| img.contains(x)) && c2.len() == img.len())
                })
                .collect();
            maps.push(LevelMap::new(levels[i].clone(), levels[i + 1].clone(), pi.clone(), below)?);
        }
        Ok(Tower { levels, maps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::znf::int::int;

    /// C4 → C2 with one inert place (full decomposition group) and one split place.
    pub(crate) fn c2_c4_tower() -> Tower {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let c4 = Arc::new(FiniteGroup::cyclic(4));
        Tower::build(&TowerSpec {
            groups: vec![c2, c4],
            surjections: vec![vec![0, 1, 0, 1]],
            moduli: vec![int(2), int(4)],
            places: vec![
                PlaceSpec { first_level: 0, decomposition: vec![vec![0, 1], vec![0, 1, 2, 3]] },
                PlaceSpec { first_level: 0, decomposition: vec![vec![0], vec![0]] },
            ],
            allow_violations: false,
        })
        .unwrap()
    }

    #[test]
    fn tower_levels_are_consistent() {
        let t = c2_c4_tower();
        assert_eq!(t.levels[0].num_places(), 3);
        assert_eq!(t.levels[1].num_places(), 5);
        assert_eq!(t.maps[0].all_sections(100).unwrap().len(), 2);
    }

    #[test]
    fn condition_four_enforced() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let spec = |allow| TowerSpec {
            groups: vec![c2.clone()],
            surjections: vec![],
            moduli: vec![int(2)],
            places: vec![PlaceSpec { first_level: 0, decomposition: vec![vec![0]] }],
            allow_violations: allow,
        };
        assert!(Tower::build(&spec(false)).is_err());
        let t = Tower::build(&spec(true)).unwrap();
        assert!(t.levels[0].overridden);
    }
}
