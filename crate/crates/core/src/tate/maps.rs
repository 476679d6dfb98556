//! Maps between Tate cohomology groups: functoriality, connecting maps and
//! the Shapiro decomposition of induced modules.

use std::sync::Arc;

use super::cochains::{Coefficients, Cochains};
use super::cohomology::{tate_cohomology, tate_cohomology_with, TateGroup};
use crate::error::{Error, Result};
use crate::galois::{induced_module, FiniteGroup, GammaModule, GammaSet, InducedModule, ModuleMap, Subgroup};
use crate::znf::int::Int;
use crate::znf::{exactness_defect, AbGroup, IntMatrix, Morphism};

/// A homomorphism between two computed cohomology groups.
#[derive(Clone, Debug)]
pub struct CohomMap {
    pub source: TateGroup,
    pub target: TateGroup,
    pub map: Morphism,
}

impl CohomMap {
    pub fn apply(&self, coords: &[Int]) -> Result<Vec<Int>> {
        self.map.apply(coords)
    }
}

/// Matrix of a module map in canonical coordinates.
fn canonical(f: &ModuleMap) -> IntMatrix {
    f.map.canonical_matrix()
}

/// Map induced by an equivariant module map.
pub fn map_on_cohomology(f: &ModuleMap, degree: i32) -> Result<CohomMap> {
    let source = tate_cohomology(&f.source, degree)?;
    let target = tate_cohomology(&f.target, degree)?;
    map_between(&source, &target, f)
}

pub(crate) fn map_between(source: &TateGroup, target: &TateGroup, f: &ModuleMap) -> Result<CohomMap> {
    let phi = canonical(f);
    let r = source.degree.max(0) as usize;
    let (sc, tc) = (&source.cochains, &target.cochains);
    let map = source.induced_morphism(target, |x| sc.map_values(tc, r, &phi, x))?;
    Ok(CohomMap { source: source.clone(), target: target.clone(), map })
}

/// Restriction `Ĥ^i(Γ, M) → Ĥ^i(H, M)` for `i ≥ 0`.
pub fn restriction(m: &GammaModule, sub: &Subgroup, degree: i32) -> Result<CohomMap> {
    if degree < 0 {
        return Err(Error::Unsupported("restriction is provided in degrees 0..3".into()));
    }
    let source = tate_cohomology(m, degree)?;
    let target = tate_cohomology(&m.restrict(sub), degree)?;
    let r = degree as usize;
    let (sc, tc) = (&source.cochains, &target.cochains);
    let map = source.induced_morphism(&target, |f| {
        tc.tabulate(r, |t| {
            let parent: Vec<usize> = t.iter().map(|&x| sub.elements[x]).collect();
            sc.value(f, &parent)
        })
    })?;
    Ok(CohomMap { source, target, map })
}

/// Inflation `Ĥ^i(Q, M) → Ĥ^i(G, M)` along a surjection `pi: G → Q`, for `i ≥ 1`.
pub fn inflation(m: &GammaModule, big: Arc<FiniteGroup>, pi: &[usize], degree: i32) -> Result<CohomMap> {
    if degree < 1 {
        return Err(Error::Unsupported("inflation is provided in degrees 1..3".into()));
    }
    let q = m.group();
    let mut hit = vec![false; q.order()];
    for &x in pi {
        if x < hit.len() {
            hit[x] = true;
        }
    }
    if hit.contains(&false) {
        return Err(Error::Invalid("inflation needs a surjective homomorphism".into()));
    }
    let inflated = m.inflate(big, pi)?;
    let source = tate_cohomology(m, degree)?;
    let target = tate_cohomology(&inflated, degree)?;
    let r = degree as usize;
    let (sc, tc) = (&source.cochains, &target.cochains);
    let map = source.induced_morphism(&target, |f| {
        tc.tabulate(r, |t| {
            let down: Vec<usize> = t.iter().map(|&x| pi[x]).collect();
            sc.value(f, &down)
        })
    })?;
    Ok(CohomMap { source, target, map })
}

/// A short exact sequence `0 → A → B → C → 0` of modules.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

impl ShortExact {
    pub fn new(inclusion: ModuleMap, projection: ModuleMap) -> Result<Self> {
        if !inclusion.map.is_injective() {
            return Err(Error::NotExact("first map is not injective".into()));
        }
        if !projection.map.is_surjective() {
            return Err(Error::NotExact("second map is not surjective".into()));
        }
        if let Some(w) = exactness_defect(&inclusion.map, &projection.map) {
            return Err(Error::NotExact(format!("not exact in the middle: {w}")));
        }
        Ok(ShortExact { inclusion, projection })
    }

    pub fn sub(&self) -> &GammaModule {
        &self.inclusion.source
    }

    pub fn middle(&self) -> &GammaModule {
        &self.inclusion.target
    }

    pub fn quotient(&self) -> &GammaModule {
        &self.projection.target
    }
}

/// Connecting homomorphism `Ĥ^i(C) → Ĥ^{i+1}(A)` for `-1 ≤ i ≤ 2`.
pub fn connecting_map(ses: &ShortExact, degree: i32) -> Result<CohomMap> {
    if !(-1..=2).contains(&degree) {
        return Err(Error::Unsupported("connecting maps are provided for degrees -1..2".into()));
    }
    let source = tate_cohomology(ses.quotient(), degree)?;
    let target = tate_cohomology(ses.sub(), degree + 1)?;
    connecting_between(ses, &source, &target)
}

pub(crate) fn connecting_between(ses: &ShortExact, source: &TateGroup, target: &TateGroup) -> Result<CohomMap> {
    let b_coeff = Coefficients::new(ses.middle());
    let b_cochains = Cochains::normalized(b_coeff.clone());
    let (ac, cc) = (target.coefficients().clone(), source.coefficients().clone());
    // A fixed lift through B → C of each canonical generator of C.
    let lifts: Vec<Vec<Int>> = (0..cc.rank())
        .map(|j| {
            let mut e = vec![crate::znf::int::zero(); cc.rank()];
            e[j] = crate::znf::int::one();
            let pre = ses.projection.map.preimage(&cc.from_model(&e)).expect("projection is surjective");
            b_coeff.to_model(&pre).expect("lift lies in B")
        })
        .collect();
    let lift_matrix = IntMatrix::from_columns(b_coeff.rank(), &lifts);
    let pull = |b_model: &[Int]| -> Vec<Int> {
        let pre = ses
            .inclusion
            .map
            .preimage(&b_coeff.from_model(b_model))
            .expect("boundary of a lift lies in the submodule");
        ac.to_model(&pre).expect("preimage lies in A")
    };
    let degree = source.degree;
    let sc = &source.cochains;
    let map = source.induced_morphism(target, |c| {
        if degree == -1 {
            let b = b_coeff.reduce(&lift_matrix.mul_vec(c));
            let nb = b_coeff.module.norm(&b_coeff.from_model(&b));
            pull(&b_coeff.to_model(&nb).expect("norm stays in B"))
        } else {
            let r = degree as usize;
            let lifted = sc.map_values(&b_cochains, r, &lift_matrix, c);
            let db = b_cochains.differential(r, &lifted);
            let h = b_coeff.rank();
            let mut out = Vec::new();
            for t in 0..b_cochains.num_tuples(r + 1) {
                out.extend(pull(&db[t * h..(t + 1) * h]));
            }
            out
        }
    })?;
    Ok(CohomMap { source: source.clone(), target: target.clone(), map })
}

/// One node of a long exact sequence check.
#[derive(Clone, Debug)]
pub struct ExactnessNode {
    pub label: String,
    pub exact: bool,
    pub witness: Option<String>,
}

/// Exactness of `… → Ĥ^i(A) → Ĥ^i(B) → Ĥ^i(C) → Ĥ^{i+1}(A) → …` at every node
/// whose neighbours lie in degrees −1..3.
pub fn long_exact_sequence_check(ses: &ShortExact) -> Result<Vec<ExactnessNode>> {
    let mut ha = Vec::new();
    let mut hb = Vec::new();
    let mut hc = Vec::new();
    for i in -1..=3 {
        ha.push(tate_cohomology(ses.sub(), i)?);
        hb.push(tate_cohomology(ses.middle(), i)?);
        hc.push(tate_cohomology(ses.quotient(), i)?);
    }
    let mut maps: Vec<(String, Morphism)> = Vec::new();
    for k in 0..5 {
        let i = k as i32 - 1;
        maps.push((format!("H^{i}(A)->H^{i}(B)"), map_between(&ha[k], &hb[k], &ses.inclusion)?.map));
        maps.push((format!("H^{i}(B)->H^{i}(C)"), map_between(&hb[k], &hc[k], &ses.projection)?.map));
        if k < 4 {
            maps.push((format!("H^{i}(C)->H^{}(A)", i + 1), connecting_between(ses, &hc[k], &ha[k + 1])?.map));
        }
    }
    Ok(maps
        .windows(2)
        .map(|w| {
            let witness = exactness_defect(&w[0].1, &w[1].1);
            ExactnessNode { label: format!("{} then {}", w[0].0, w[1].0), exact: witness.is_none(), witness }
        })
        .collect())
}

/// `Ĥ^i(Γ, A[X]) ≅ ⊕_x Ĥ^i(Γ_x, A)` over a section `x` of the orbits.
#[derive(Clone, Debug)]
pub struct ShapiroIso {
    pub global: TateGroup,
    pub section: Vec<usize>,
    pub locals: Vec<TateGroup>,
    pub sum: Arc<AbGroup>,
    pub forward: Morphism,
    pub backward: Morphism,
}

pub fn shapiro_decompose(x: &GammaSet, a: &GammaModule, degree: i32) -> Result<ShapiroIso> {
    let group = a.group().clone();
    let ind = induced_module(x, a);
    let global = tate_cohomology(&ind.module, degree)?;
    let section = x.canonical_section();
    let mut locals = Vec::new();
    let mut stabs = Vec::new();
    for &p in &section {
        let stab = group.subgroup(&x.stabilizer(p))?;
        locals.push(tate_cohomology(&a.restrict(&stab), degree)?);
        stabs.push(stab);
    }
    let inv: Vec<Int> = locals.iter().flat_map(|l| l.invariants().iter().cloned()).collect();
    let sum = Arc::new(AbGroup::diagonal(&inv));
    let offsets: Vec<usize> = locals
        .iter()
        .scan(0, |acc, l| {
            let o = *acc;
            *acc += l.invariants().len();
            Some(o)
        })
        .collect();
    let (forward, backward) = if degree >= 0 {
        let f = shapiro_forward(&ind, &global, &section, &stabs, &locals, &sum)?;
        let b = f.inverse().map_err(|_| Error::NotExact("Shapiro map is not bijective".into()))?;
        (f, b)
    } else {
        let b = Morphism::from_fn(sum.clone(), global.group().clone(), |c| {
            let mut total = ind.module.underlying().zero_vec();
            for (k, (&p, l)) in section.iter().zip(&locals).enumerate() {
                let part = &c[offsets[k]..offsets[k] + l.invariants().len()];
                let rep = l.coefficients().from_model(&l.representative(part));
                total = ind.module.underlying().add(&total, &ind.embed(p, &rep));
            }
            let model = global.coefficients().to_model(&total).expect("element of A[X]");
            global.classify(&model).expect("norm-killed element")
        })?;
        let f = b.inverse().map_err(|_| Error::NotExact("Shapiro map is not bijective".into()))?;
        (f, b)
    };
    Ok(ShapiroIso { global, section, locals, sum, forward, backward })
}

fn shapiro_forward(
    ind: &InducedModule,
    global: &TateGroup,
    section: &[usize],
    stabs: &[Subgroup],
    locals: &[TateGroup],
    sum: &Arc<AbGroup>,
) -> Result<Morphism> {
    let r = global.degree as usize;
    let gc = global.coefficients().clone();
    let gcoch = &global.cochains;
    global.induced_morphism_into(sum, |f| {
        let mut out = Vec::new();
        for ((&p, stab), local) in section.iter().zip(stabs).zip(locals) {
            let lc = local.coefficients().clone();
            let cochain = local.cochains.tabulate(r, |t| {
                let parent: Vec<usize> = t.iter().map(|&x| stab.elements[x]).collect();
                let v = gc.from_model(&gcoch.value(f, &parent));
                lc.to_model(&ind.component(&v, p)).expect("component lies in A")
            });
            out.extend(local.classify(&cochain).expect("restriction of a cocycle"));
        }
        out
    })
}

impl TateGroup {
    /// Like [`TateGroup::induced_morphism`] but into an arbitrary diagonal group.
    pub(crate) fn induced_morphism_into<F: Fn(&[Int]) -> Vec<Int>>(&self, target: &Arc<AbGroup>, f: F) -> Result<Morphism> {
        Morphism::from_fn(self.group().clone(), target.clone(), |c| f(&self.representative(c)))
    }
}

/// Cohomology over an explicitly chosen cochain model (used by the dictionary tests).
pub fn tate_cohomology_full(m: &GammaModule, degree: i32) -> Result<TateGroup> {
    tate_cohomology_with(Cochains::full(Coefficients::new(m)), degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::znf::int::int;

    fn trivial(g: &Arc<FiniteGroup>, a: AbGroup) -> GammaModule {
        GammaModule::trivial_action(g.clone(), Arc::new(a))
    }

    /// `0 → ℤ →(×n) ℤ → ℤ/n → 0` with trivial action.
    fn multiplication_sequence(g: &Arc<FiniteGroup>, n: i64) -> ShortExact {
        let z = trivial(g, AbGroup::free(1));
        let zn = trivial(g, AbGroup::cyclic(n));
        let i = ModuleMap::from_matrix(z.clone(), z.clone(), &IntMatrix::from_rows(&[vec![n]])).unwrap();
        let p = ModuleMap::from_matrix(z, zn, &IntMatrix::identity(1)).unwrap();
        ShortExact::new(i, p).unwrap()
    }

    #[test]
    fn identity_induces_identity() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let m = trivial(&g, AbGroup::cyclic(4));
        for i in -1..=3 {
            let f = map_on_cohomology(&ModuleMap::identity(&m), i).unwrap();
            assert!(f.map.agrees_with(&Morphism::identity(f.source.group().clone())));
        }
    }

    #[test]
    fn restriction_to_trivial_subgroup_vanishes() {
        let g = Arc::new(FiniteGroup::symmetric3());
        let m = trivial(&g, AbGroup::cyclic(2));
        for i in 1..=2 {
            assert!(restriction(&m, &g.trivial_subgroup(), i).unwrap().map.is_zero());
        }
    }

    #[test]
    fn inflation_c2_to_c4_is_injective() {
        let c4 = Arc::new(FiniteGroup::cyclic(4));
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let m = trivial(&c2, AbGroup::cyclic(2));
        let f = inflation(&m, c4, &[0, 1, 0, 1], 1).unwrap();
        assert_eq!(f.source.invariants(), &[int(2)]);
        assert_eq!(f.target.invariants(), &[int(2)]);
        assert!(f.map.is_injective());
    }

    #[test]
    fn connecting_maps_of_multiplication_by_two() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let ses = multiplication_sequence(&g, 2);
        // Ĥ^0(C2, ℤ/2) = ℤ/2 but Ĥ^1(C2, ℤ) = 0.
        let d0 = connecting_map(&ses, 0).unwrap();
        assert!(d0.target.is_trivial());
        for i in [-1, 1] {
            let d = connecting_map(&ses, i).unwrap();
            assert_eq!(d.source.invariants(), &[int(2)]);
            assert_eq!(d.target.invariants(), &[int(2)]);
            assert!(d.map.is_surjective());
        }
        for node in long_exact_sequence_check(&ses).unwrap() {
            assert!(node.exact, "{}: {:?}", node.label, node.witness);
        }
    }

    #[test]
    fn split_sequence_has_zero_connecting_map() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let a = GammaModule::sign_lattice(g.clone(), &[1, -1]).unwrap();
        let c = trivial(&g, AbGroup::cyclic(2));
        let b = GammaModule::direct_sum(&[&a, &c]).unwrap();
        let i = ModuleMap::from_matrix(a, b.clone(), &IntMatrix::from_rows(&[vec![1], vec![0]])).unwrap();
        let p = ModuleMap::from_matrix(b, c, &IntMatrix::from_rows(&[vec![0, 1]])).unwrap();
        let ses = ShortExact::new(i, p).unwrap();
        for d in -1..=2 {
            assert!(connecting_map(&ses, d).unwrap().map.is_zero());
        }
    }

    #[test]
    fn non_exact_input_rejected() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let z = trivial(&g, AbGroup::free(1));
        let i = ModuleMap::from_matrix(z.clone(), z.clone(), &IntMatrix::from_rows(&[vec![2]])).unwrap();
        let p = ModuleMap::from_matrix(z.clone(), trivial(&g, AbGroup::cyclic(4)), &IntMatrix::identity(1)).unwrap();
        assert!(matches!(ShortExact::new(i, p), Err(Error::NotExact(_))));
    }

    #[test]
    fn shapiro_on_s3_cosets() {
        let g = Arc::new(FiniteGroup::symmetric3());
        let t = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        let x = GammaSet::left_cosets(&g, &g.closure(&[t])).unwrap();
        let a = trivial(&g, AbGroup::cyclic(2));
        let s = shapiro_decompose(&x, &a, 1).unwrap();
        assert_eq!(s.global.invariants(), &[int(2)]);
        assert_eq!(s.sum.invariants(), &[int(2)]);
        assert!(s.forward.is_isomorphism());
    }

    #[test]
    fn shapiro_regular_set_vanishes() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let a = trivial(&g, AbGroup::cyclic(3));
        for i in -1..=2 {
            let s = shapiro_decompose(&GammaSet::regular(&g), &a, i).unwrap();
            assert!(s.global.is_trivial() && s.sum.is_trivial());
        }
    }

    #[test]
    fn shapiro_degree_minus_one_on_swapped_pair() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let x = GammaSet::new(&g, vec![vec![0, 1], vec![1, 0]]).unwrap().disjoint_union(&GammaSet::fixed_points(&g, 1));
        let a = GammaModule::sign_lattice(g, &[1, -1]).unwrap();
        let s = shapiro_decompose(&x, &a, -1).unwrap();
        assert_eq!(s.global.invariants(), &[int(2)]);
        assert!(s.backward.is_isomorphism());
    }
}
