//! Seeded random scenarios within fixed size caps.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::scenario::{
    ActionSpec, ComplexSpec, GroupSpec, InputError, ModuleSpec, Num, OpKind, OperationSpec, PairSpec, PlacesSpec, Scenario,
};
use crate::galois::{FiniteGroup, GammaModule, GammaSet};

pub const MAX_ORDER: usize = 12;
pub const MAX_RANK: usize = 4;
pub const MAX_PLACES: usize = 8;
pub const MAX_MODULUS: u64 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_order: usize,
    pub max_rank: usize,
    /// Largest `|S|`, counting every place.
    pub max_places: usize,
    pub max_modulus: u64,
    /// Emit a place system violating condition (4).
    pub negative_control: bool,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_order: 6, max_rank: 2, max_places: 4, max_modulus: 6, negative_control: false }
    }
}

impl Bounds {
    pub fn validate(&self) -> Result<(), InputError> {
        let bad = |field: &str, v: u64, cap: u64| {
            if v == 0 || v > cap {
                Err(InputError { context: field.into(), message: format!("{v} outside 1..={cap}") })
            } else {
                Ok(())
            }
        };
        bad("max_order", self.max_order as u64, MAX_ORDER as u64)?;
        bad("max_rank", self.max_rank as u64, MAX_RANK as u64)?;
        bad("max_places", self.max_places as u64, MAX_PLACES as u64)?;
        bad("max_modulus", self.max_modulus, MAX_MODULUS)?;
        if self.max_modulus < 2 {
            return Err(InputError { context: "max_modulus".into(), message: "must be at least 2".into() });
        }
        if self.negative_control && self.max_order < 2 {
            return Err(InputError { context: "max_order".into(), message: "a negative control needs a nontrivial group".into() });
        }
        Ok(())
    }
}

const FAMILIES: [&str; 8] = ["C2xC2", "S3", "D4", "C2xC4", "D5", "C2xC6", "D6", "C3xC3"];

fn candidate_groups(max_order: usize) -> Vec<String> {
    let mut out: Vec<String> = (1..=max_order).map(|n| format!("C{n}")).collect();
    for name in FAMILIES {
        if FiniteGroup::named(name).map_or(false, |g| g.order() <= max_order) {
            out.push(name.into());
        }
    }
    out
}

fn index_two(g: &FiniteGroup) -> Vec<Vec<usize>> {
    g.subgroups().into_iter().filter(|h| 2 * h.len() == g.order()).collect()
}

fn action_of(m: &GammaModule, g: &FiniteGroup) -> Vec<ActionSpec> {
    g.generating_set()
        .into_iter()
        .map(|x| ActionSpec {
            element: x,
            matrix: m.matrix(x).to_rows().into_iter().map(|r| r.into_iter().map(Num).collect()).collect(),
        })
        .collect()
}

fn scalar(r: usize, k: i64) -> Vec<Vec<Num>> {
    (0..r).map(|i| (0..r).map(|j| Num::new(if i == j { k } else { 0 })).collect()).collect()
}

fn op(kind: OpKind, f: impl FnOnce(&mut OperationSpec)) -> OperationSpec {
    let mut o = OperationSpec::new(kind);
    f(&mut o);
    o
}

/// A random lattice of rank at most `max_rank`: trivial, signed, or a
/// permutation lattice on cosets, padded with trivial summands.
fn random_lattice(rng: &mut ChaCha8Rng, g: &Arc<FiniteGroup>, max_rank: usize) -> GammaModule {
    let signs = index_two(g);
    let perms: Vec<Vec<usize>> = g.subgroups().into_iter().filter(|h| g.order() / h.len() <= max_rank && h.len() < g.order()).collect();
    let choice = rng.gen_range(0..3);
    let core = match choice {
        1 if !signs.is_empty() => {
            let h = signs.choose(rng).expect("nonempty");
            let chi: Vec<i64> = g.elements().map(|x| if h.contains(&x) { 1 } else { -1 }).collect();
            GammaModule::sign_lattice(g.clone(), &chi).expect("index-two characters are valid")
        }
        2 if !perms.is_empty() => {
            let h = perms.choose(rng).expect("nonempty");
            GammaModule::permutation_lattice(g.clone(), &GammaSet::left_cosets(g, h).expect("subgroup"))
        }
        _ => GammaModule::trivial_action(g.clone(), Arc::new(crate::znf::AbGroup::free(1))),
    };
    let extra = rng.gen_range(0..=max_rank - core.ambient_dim());
    if extra == 0 {
        return core;
    }
    let pad = GammaModule::trivial_action(g.clone(), Arc::new(crate::znf::AbGroup::free(extra)));
    GammaModule::direct_sum(&[&core, &pad]).expect("same group")
}

pub fn generate_instance(seed: u64, bounds: &Bounds) -> Result<Scenario, InputError> {
    bounds.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut names = candidate_groups(bounds.max_order);
    if bounds.negative_control {
        names.retain(|n| n != "C1");
    }
    // Every place system below needs a subgroup whose cosets fit in S.
    names.retain(|n| {
        let g = FiniteGroup::named(n).expect("known family");
        !bounds.negative_control || g.subgroups().iter().any(|h| h.len() < g.order() && g.order() / h.len() <= bounds.max_places)
    });
    let name = names.choose(&mut rng).expect("C2 always fits").clone();
    let g = Arc::new(FiniteGroup::named(&name).expect("known family"));
    let order = g.order();

    let n = rng.gen_range(2..=bounds.max_modulus) as i64;
    let subgroups = g.subgroups();
    let mut decomposition: Vec<Vec<usize>> = Vec::new();
    let mut used = 0;
    if bounds.negative_control {
        let proper: Vec<&Vec<usize>> =
            subgroups.iter().filter(|h| h.len() < order && order / h.len() <= bounds.max_places).collect();
        let h = (*proper.choose(&mut rng).expect("filtered above")).clone();
        used += order / h.len();
        decomposition.push(h);
    } else {
        decomposition.push(g.elements().collect());
        used += 1;
    }
    for _ in 0..rng.gen_range(0..=2) {
        let fits: Vec<&Vec<usize>> = subgroups
            .iter()
            .filter(|h| used + order / h.len() <= bounds.max_places && (!bounds.negative_control || h.len() < order))
            .collect();
        let Some(h) = fits.choose(&mut rng) else { break };
        used += order / h.len();
        decomposition.push((*h).clone());
    }
    if bounds.negative_control {
        // Keep at least one element outside every decomposition group.
        let covered = |d: &[Vec<usize>]| g.elements().all(|x| d.iter().any(|h| h.contains(&x)));
        while decomposition.len() > 1 && covered(&decomposition) {
            decomposition.pop();
        }
    }

    let lattice = random_lattice(&mut rng, &g, bounds.max_rank);
    let rank = lattice.ambient_dim();
    let divisors: Vec<i64> = (2..=n).filter(|d| n % d == 0).collect();
    let m = *divisors.choose(&mut rng).expect("n divides itself");
    let k = rng.gen_range(1..=3);
    let group = GroupSpec { name: Some(name.clone()), table: None };

    let mut s = Scenario {
        name: format!("generated-{seed}"),
        budget: None,
        group: Some(group),
        places: vec![PlacesSpec {
            id: "S".into(),
            modulus: Num::new(n),
            decomposition,
            negative_control: bounds.negative_control,
        }],
        modules: vec![
            ModuleSpec { id: "Ybar".into(), rank, moduli: None, action: action_of(&lattice, &g) },
            ModuleSpec { id: "A".into(), rank: 1, moduli: Some(vec![Num::new(m)]), action: vec![] },
        ],
        pairs: vec![PairSpec { id: "pair".into(), lattice: "Ybar".into(), y_basis: scalar(rank, k) }],
        complexes: vec![ComplexSpec { id: "f".into(), source: "Ybar".into(), target: "Ybar".into(), map: scalar(rank, k) }],
        operations: vec![op(OpKind::Conditions, |o| o.places = Some("S".into()))],
    };
    if bounds.negative_control {
        return Ok(s);
    }
    let on = |o: &mut OperationSpec| {
        o.places = Some("S".into());
        o.pair = Some("pair".into());
    };
    s.operations.extend([
        op(OpKind::Tate, |o| {
            o.module = Some("Ybar".into());
            o.degree = Some(rng.gen_range(-1..=1));
        }),
        op(OpKind::Psi, |o| {
            o.places = Some("S".into());
            o.module = Some("A".into());
        }),
        op(OpKind::LevelSequence, |o| o.places = Some("S".into())),
        op(OpKind::ComponentGroup, |o| o.pair = Some("pair".into())),
        op(OpKind::Ybar, on),
        op(OpKind::Localization, on),
        op(OpKind::Sigma, on),
    ]);
    // Cochains up to degree 3 grow like |Γ|^3, so the complex checks stay small.
    if order * order * order * rank <= 250 {
        s.operations.push(op(OpKind::Hypercohomology, |o| o.complex = Some("f".into())));
    }
    if order <= 3 && rank <= 2 {
        s.operations.push(op(OpKind::DualModel, |o| o.complex = Some("f".into())));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::check_place_conditions;

    #[test]
    fn same_seed_same_bytes() {
        let b = Bounds::default();
        assert_eq!(generate_instance(7, &b).unwrap().to_toml(), generate_instance(7, &b).unwrap().to_toml());
    }

    #[test]
    fn caps_are_enforced() {
        let b = Bounds { max_order: 13, ..Bounds::default() };
        assert_eq!(generate_instance(1, &b).unwrap_err().context, "max_order");
        let b = Bounds { max_modulus: 13, ..Bounds::default() };
        assert!(generate_instance(1, &b).is_err());
    }

    #[test]
    fn generated_systems_satisfy_the_conditions() {
        let b = Bounds { max_order: 12, max_rank: 4, max_places: 8, max_modulus: 12, negative_control: false };
        for seed in 0..40 {
            let built = generate_instance(seed, &b).unwrap().build().unwrap();
            let level = &built.places["S"].level;
            assert!(check_place_conditions(&level.system).combinatorial_ok(), "seed {seed}");
        }
    }

    #[test]
    fn negative_controls_violate_condition_four() {
        let b = Bounds { negative_control: true, ..Bounds::default() };
        for seed in 0..40 {
            let built = generate_instance(seed, &b).unwrap().build().unwrap();
            let r = check_place_conditions(&built.places["S"].level.system);
            assert!(!r.every_element_fixes_dotted, "seed {seed}");
        }
    }
}
