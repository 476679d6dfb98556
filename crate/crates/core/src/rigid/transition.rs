//! Transition maps between levels, the companion map on `ℤ/n[S]_0`, the
//! short exact sequence at one level and localization at a dotted place.

use std::sync::Arc;

use super::level::{Level, LevelMap};
use crate::error::{Error, Result};
use crate::galois::{sum_zero_module, DecompositionData, GammaModule, GammaSet, ModuleMap};
use crate::znf::int::{self, Int};
use crate::znf::{exactness_defect, kernel_lattice, AbGroup, IntMatrix, Morphism};

fn dotted_module(level: &Level) -> &GammaModule {
    level.modules.dotted.as_ref().expect("levels carry the dotted module")
}

/// `M_{E,Ṡ_E,n} → M_{K,Ṡ'_K,m}`:
/// `Σ a_{σ,w}[(σ,w)] ↦ Σ (m/n)·a_{γ̄,u_E}[(γ,u)]`, summed over `(γ, u)` with
/// `u` over `S` and `γ⁻¹u ∈ Ṡ'_K`. Equivariant for the inflated source action.
pub fn level_transition(map: &LevelMap) -> Result<ModuleMap> {
    let source = dotted_module(&map.source).inflate(map.target.group().clone(), &map.surjection)?;
    let target = dotted_module(&map.target).clone();
    let ratio = map.ratio();
    let (se, sk) = (map.source.num_places(), map.target.num_places());
    let gk = map.target.group().clone();
    let f = Morphism::from_fn(source.underlying().clone(), target.underlying().clone(), |x| {
        let mut y = vec![int::zero(); gk.order() * sk];
        for gamma in gk.elements() {
            for u in 0..sk {
                if let Some(w) = map.below[u] {
                    if map.target.system.in_translated_section(gamma, u) {
                        y[gamma * sk + u] = &ratio * &x[map.surjection[gamma] * se + w];
                    }
                }
            }
        }
        y
    })?;
    ModuleMap::new(source, target, f)
}

/// The companion transition `ℤ/n[S_E]_0 → ℤ/m[S'_K]_0`,
/// `[w] ↦ Σ_{u over w} (m/n)·#Γ_{K/E}^u [u]`, with its vanishing detector.
#[derive(Clone, Debug)]
pub struct CompanionTransition {
    pub map: ModuleMap,
    /// `(m/n)·#Γ_{K/E}^u` for each place `u` of K over `S`.
    pub coefficients: Vec<Option<Int>>,
    /// Every coefficient is divisible by `m`.
    pub predicted_zero: bool,
}

pub fn companion_transition(map: &LevelMap) -> Result<CompanionTransition> {
    let (_, src) = sum_zero_module(map.source.group(), map.source.places(), map.source.modulus());
    let (_, tgt) = sum_zero_module(map.target.group(), map.target.places(), map.target.modulus());
    let src = src.inflate(map.target.group().clone(), &map.surjection)?;
    let gk = map.target.group();
    let kernel = gk.kernel_of(map.source.group(), &map.surjection);
    let ratio = map.ratio();
    let coefficients: Vec<Option<Int>> = map
        .below
        .iter()
        .enumerate()
        .map(|(u, w)| {
            w.map(|_| {
                let stab = kernel.iter().filter(|&&k| map.target.places().act(k, u) == u).count();
                &ratio * int::int(stab as i64)
            })
        })
        .collect();
    let m = map.target.modulus();
    let predicted_zero = coefficients.iter().flatten().all(|c| int::divides(m, c));
    let f = Morphism::from_fn(src.underlying().clone(), tgt.underlying().clone(), |x| {
        map.below
            .iter()
            .zip(&coefficients)
            .map(|(w, c)| match (w, c) {
                (Some(w), Some(c)) => c * &x[*w],
                _ => int::zero(),
            })
            .collect()
    })?;
    Ok(CompanionTransition { map: ModuleMap::new(src, tgt, f)?, coefficients, predicted_zero })
}

/// `0 → M_{E,Ṡ,n} → ℤ/n[Γ × Ṡ]_0 → ℤ/n[S]_0 → 0`, where the middle term is
/// killed by summing over `Ṡ` for each fixed `σ`, `γ` acts on the first
/// factor only, `i(x)(σ, v̇) = x[(σ, σv̇)]` and `q[(σ, v̇)] = [σv̇]`.
#[derive(Clone, Debug)]
pub struct LevelSequence {
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
    pub injective: bool,
    pub surjective: bool,
    pub middle_defect: Option<String>,
}

impl LevelSequence {
    pub fn exact(&self) -> bool {
        self.injective && self.surjective && self.middle_defect.is_none()
    }
}

pub fn level_sequence(level: &Level) -> Result<LevelSequence> {
    let gr = level.group().clone();
    let g = gr.order();
    let s = level.num_places();
    let dots = level.section().to_vec();
    let k = dots.len();
    let n = level.modulus().clone();
    let dim = g * k;
    let rows: Vec<(Vec<Int>, Int)> = (0..g)
        .map(|sigma| {
            let mut r = vec![int::zero(); dim];
            for j in 0..k {
                r[sigma * k + j] = int::one();
            }
            (r, n.clone())
        })
        .collect();
    let moduli = vec![n.clone(); dim];
    let und = AbGroup::subquotient(&moduli, &kernel_lattice(dim, &rows), &[])?;
    let action: Vec<IntMatrix> = gr
        .elements()
        .map(|gamma| {
            let mut m = IntMatrix::zeros(dim, dim);
            for sigma in 0..g {
                for j in 0..k {
                    m.set(gr.mul(gamma, sigma) * k + j, sigma * k + j, int::one());
                }
            }
            m
        })
        .collect();
    let middle = GammaModule::new(gr.clone(), Arc::new(und), action)?;
    let sub = dotted_module(level).clone();
    let (_, right) = sum_zero_module(&gr, level.places(), &n);
    let i = Morphism::from_fn(sub.underlying().clone(), middle.underlying().clone(), |x| {
        let mut y = vec![int::zero(); dim];
        for sigma in 0..g {
            for (j, &v) in dots.iter().enumerate() {
                y[sigma * k + j] = x[sigma * s + level.places().act(sigma, v)].clone();
            }
        }
        y
    })?;
    let q = Morphism::from_fn(middle.underlying().clone(), right.underlying().clone(), |y| {
        let mut z = vec![int::zero(); s];
        for sigma in 0..g {
            for (j, &v) in dots.iter().enumerate() {
                z[level.places().act(sigma, v)] += &y[sigma * k + j];
            }
        }
        z
    })?;
    let inclusion = ModuleMap::new(sub, middle.clone(), i)?;
    let projection = ModuleMap::new(middle, right, q)?;
    Ok(LevelSequence {
        injective: inclusion.map.is_injective(),
        surjective: projection.map.is_surjective(),
        middle_defect: exactness_defect(&inclusion.map, &projection.map),
        inclusion,
        projection,
    })
}

/// `loc_v: M_{E,Ṡ,n} → ℤ/n[Γ_v]_0`, `Σ c_{σ,w}[(σ,w)] ↦ Σ_{σ ∈ Γ_v} c_{σ,v}[σ]`,
/// as a map of `Γ_v`-modules. Elements of `ℤ/n[Γ_v]` are indexed by position
/// in the sorted list of `Γ_v`.
pub fn localize_level(level: &Level, d: &DecompositionData) -> Result<ModuleMap> {
    if !level.system.is_dotted(d.place) {
        return Err(Error::Invalid(format!("place {} is not dotted", d.place)));
    }
    let local = Arc::new(d.stabilizer.group.clone());
    let (_, target) = sum_zero_module(&local, &GammaSet::regular(&local), level.modulus());
    let source = dotted_module(level).restrict(&d.stabilizer);
    let s = level.num_places();
    let elems = d.stabilizer.elements.clone();
    let f = Morphism::from_fn(source.underlying().clone(), target.underlying().clone(), |x| {
        elems.iter().map(|&sigma| x[sigma * s + d.place].clone()).collect()
    })?;
    ModuleMap::new(source, target, f)
}

/// Whether `loc_u ∘ transition = (local transition) ∘ loc_v` on generators,
/// for the dotted place `v` of E and the dotted place `u` of K above it.
pub fn localization_square_commutes(map: &LevelMap, v: usize) -> Result<bool> {
    let u = map.section[v];
    let de = DecompositionData::new(&map.source.system, v)?;
    let dk = DecompositionData::new(&map.target.system, u)?;
    let t = level_transition(map)?;
    let loc_e = localize_level(&map.source, &de)?;
    let loc_k = localize_level(&map.target, &dk)?;
    let ratio = map.ratio();
    let m = map.target.modulus();
    for x in t.source.underlying().numer_basis() {
        let lhs = loc_k.map.apply(&t.map.apply(x)?)?;
        let down = loc_e.map.apply(x)?;
        let rhs: Vec<Int> = dk
            .stabilizer
            .elements
            .iter()
            .map(|&gamma| {
                let pos = de.stabilizer.local_index(map.surjection[gamma]).expect("decomposition groups map onto each other");
                int::reduce(&(&ratio * &down[pos]), m)
            })
            .collect();
        if !loc_k.target.underlying().elems_equal(&lhs, &rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::level::{PlaceSpec, Tower, TowerSpec};
    use super::*;
    use crate::galois::FiniteGroup;
    use crate::znf::int::int;

    fn tower(moduli: [i64; 3]) -> Tower {
        // C8 → C4 → C2, one place inert all the way and one split place.
        let groups: Vec<Arc<FiniteGroup>> = [2, 4, 8].iter().map(|&k| Arc::new(FiniteGroup::cyclic(k))).collect();
        Tower::build(&TowerSpec {
            groups,
            surjections: vec![(0..4).map(|g| g % 2).collect(), (0..8).map(|g| g % 4).collect()],
            moduli: moduli.iter().map(|&x| int(x)).collect(),
            places: vec![
                PlaceSpec { first_level: 0, decomposition: vec![(0..2).collect(), (0..4).collect(), (0..8).collect()] },
                PlaceSpec { first_level: 0, decomposition: vec![vec![0], vec![0], vec![0]] },
            ],
            allow_violations: false,
        })
        .unwrap()
    }

    #[test]
    fn transitions_compose_and_are_injective() {
        let t = tower([2, 4, 8]);
        let a = level_transition(&t.maps[0]).unwrap();
        let b = level_transition(&t.maps[1]).unwrap();
        let c = level_transition(&t.maps[0].then(&t.maps[1]).unwrap()).unwrap();
        assert!(a.map.compose(&b.map).unwrap().agrees_with(&c.map));
        assert!(a.map.is_injective());
    }

    #[test]
    fn sequence_is_exact() {
        for l in &tower([2, 4, 8]).levels {
            assert!(level_sequence(l).unwrap().exact());
        }
    }

    #[test]
    fn companion_vanishes_when_predicted() {
        // Both places have decomposition groups containing each Gal(K/E).
        let groups: Vec<Arc<FiniteGroup>> = [2, 4, 8].iter().map(|&k| Arc::new(FiniteGroup::cyclic(k))).collect();
        let t = Tower::build(&TowerSpec {
            groups,
            surjections: vec![(0..4).map(|g| g % 2).collect(), (0..8).map(|g| g % 4).collect()],
            moduli: vec![int(2); 3],
            places: vec![
                PlaceSpec { first_level: 0, decomposition: vec![(0..2).collect(), (0..4).collect(), (0..8).collect()] },
                PlaceSpec { first_level: 0, decomposition: vec![vec![0], vec![0, 2], vec![0, 2, 4, 6]] },
            ],
            allow_violations: false,
        })
        .unwrap();
        for m in &t.maps {
            let c = companion_transition(m).unwrap();
            assert!(c.predicted_zero);
            assert!(c.map.map.is_zero());
        }
        let c = companion_transition(&tower([2, 4, 8]).maps[0]).unwrap();
        assert!(!c.predicted_zero && !c.map.map.is_zero());
    }

    #[test]
    fn localization_square() {
        let t = tower([2, 4, 8]);
        for m in &t.maps {
            for &v in m.source.section() {
                assert!(localization_square_commutes(m, v).unwrap());
            }
        }
    }

    #[test]
    fn localization_at_split_place_is_zero() {
        let t = tower([2, 4, 8]);
        let l = &t.levels[1];
        let split = *l.section().iter().find(|&&v| l.places().stabilizer(v).len() == 1).unwrap();
        let d = DecompositionData::new(&l.system, split).unwrap();
        assert!(localize_level(l, &d).unwrap().map.is_zero());
    }
}
