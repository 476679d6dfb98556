//! The lattice side: `Y ⊆ Ȳ`, the groups `Ȳ[S,Ṡ]_0^N / I·Y[S]_0`, the maps
//! `!` and `l_v`, the local-global sequence and the component group.

use std::sync::Arc;

use super::level::{Level, LevelMap};
use crate::error::{Error, Result};
use crate::galois::{DecompositionData, FiniteGroup, GammaModule};
use crate::znf::int::{self, Int};
use crate::znf::{dual_group, exactness_defect, kernel_lattice, smith_normal_form, AbGroup, DualGroup, IntMatrix, Morphism};

/// `Y ⊆ Ȳ` with `Ȳ = ℤ^r` carrying a Γ-action and `Y` spanned by the rows of
/// a full-rank Γ-stable basis.
#[derive(Clone, Debug)]
pub struct IsogenyPair {
    pub ybar: GammaModule,
    pub y_basis: Vec<Vec<Int>>,
    /// `c ∈ Y ⟺ (c·V)_k ≡ 0 mod d_k`.
    membership: Vec<(Vec<Int>, Int)>,
}

impl IsogenyPair {
    pub fn new(group: Arc<FiniteGroup>, action: Vec<IntMatrix>, y_basis: Vec<Vec<Int>>) -> Result<Self> {
        let ybar = GammaModule::lattice(group, action)?;
        let r = ybar.ambient_dim();
        if y_basis.len() != r || y_basis.iter().any(|b| b.len() != r) {
            return Err(Error::Invalid(format!("Y needs a basis of {r} vectors of length {r}")));
        }
        let b = IntMatrix::from_int_rows(r, r, y_basis.clone());
        let snf = smith_normal_form(&b);
        let d = snf.diagonal();
        if d.iter().any(int::is_zero) {
            return Err(Error::Invalid("Y does not have finite index in Ȳ".into()));
        }
        let membership: Vec<(Vec<Int>, Int)> =
            (0..r).filter(|&k| !int::is_one(&int::abs(&d[k]))).map(|k| (snf.v.col(k), int::abs(&d[k]))).collect();
        let pair = IsogenyPair { ybar, y_basis, membership };
        for g in pair.ybar.group().generating_set() {
            for bv in &pair.y_basis {
                if !pair.in_y(&pair.ybar.matrix(g).mul_vec(bv)) {
                    return Err(Error::NotEquivariant(format!("Y is not stable under element {g}")));
                }
            }
        }
        Ok(pair)
    }

    /// `Y = Ȳ`.
    pub fn trivial(group: Arc<FiniteGroup>, action: Vec<IntMatrix>) -> Result<Self> {
        let r = action.first().map_or(0, |m| m.rows());
        let basis = IntMatrix::identity(r).to_rows();
        Self::new(group, action, basis)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.ybar.group()
    }

    pub fn rank(&self) -> usize {
        self.ybar.ambient_dim()
    }

    pub fn in_y(&self, c: &[Int]) -> bool {
        self.membership.iter().all(|(col, d)| {
            let dot = col.iter().zip(c).fold(int::zero(), |acc, (x, y)| acc + x * y);
            int::divides(d, &dot)
        })
    }

    /// `[Ȳ : Y]`.
    pub fn index(&self) -> Int {
        self.membership.iter().fold(int::one(), |acc, (_, d)| acc * d)
    }

    /// Pull back along `pi: big → Γ`.
    pub fn inflate(&self, big: Arc<FiniteGroup>, pi: &[usize]) -> Result<Self> {
        let ybar = self.ybar.inflate(big, pi)?;
        Ok(IsogenyPair { ybar, ..self.clone() })
    }

    /// `(γ − 1)·b` for γ in `gens` and `b` in the basis of `Y`.
    fn augmentation_span(&self, gens: &[usize]) -> Vec<Vec<Int>> {
        let mut out = Vec::new();
        for &g in gens {
            for b in &self.y_basis {
                let gb = self.ybar.matrix(g).mul_vec(b);
                out.push(gb.iter().zip(b).map(|(x, y)| x - y).collect());
            }
        }
        out
    }

    /// `Ȳ / I·Y`.
    pub fn coinvariant_quotient(&self, gens: &[usize]) -> AbGroup {
        let r = self.rank();
        let full = IntMatrix::identity(r).to_rows();
        AbGroup::subquotient(&vec![int::zero(); r], &full, &self.augmentation_span(gens)).expect("I·Y lies in Ȳ")
    }
}

/// Block `w` of an element of `Ȳ[S]` (ambient index `w·r + i`).
fn block(v: &[Int], w: usize, r: usize) -> &[Int] {
    &v[w * r..(w + 1) * r]
}

/// `Ȳ[S,Ṡ]_0 / I·Y[S]_0` and its norm-killed part.
#[derive(Clone, Debug)]
pub struct YbarGroup {
    pub pair: IsogenyPair,
    pub level: Level,
    /// `Ȳ[S,Ṡ]_0 / I·Y[S]_0`.
    pub quotient: Arc<AbGroup>,
    /// `Ȳ[S,Ṡ]_0^N / I·Y[S]_0`.
    pub group: Arc<AbGroup>,
    /// Classes with a representative supported on `Ṡ`.
    pub dotted: Arc<AbGroup>,
    /// Action of Γ on `Ȳ[S]`.
    pub action: Vec<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YbarCertificate {
    pub equals_torsion: bool,
    pub dotted_representatives: bool,
}

pub fn ybar_group(pair: &IsogenyPair, level: &Level) -> Result<YbarGroup> {
    if **pair.group() != **level.group() {
        return Err(Error::Invalid("isogeny pair and level have different groups".into()));
    }
    let r = pair.rank();
    let s = level.num_places();
    let dim = s * r;
    let gr = level.group().clone();
    let places = level.places();
    let action: Vec<IntMatrix> = gr
        .elements()
        .map(|g| {
            let mut m = IntMatrix::zeros(dim, dim);
            let rho = pair.ybar.matrix(g);
            for w in 0..s {
                let gw = places.act(g, w);
                for i in 0..r {
                    for j in 0..r {
                        m.set(gw * r + i, w * r + j, rho.get(i, j).clone());
                    }
                }
            }
            m
        })
        .collect();
    let mut rows: Vec<(Vec<Int>, Int)> = Vec::new();
    for i in 0..r {
        let mut row = vec![int::zero(); dim];
        for w in 0..s {
            row[w * r + i] = int::one();
        }
        rows.push((row, int::zero()));
    }
    for w in (0..s).filter(|&w| !level.system.is_dotted(w)) {
        for (col, d) in &pair.membership {
            let mut row = vec![int::zero(); dim];
            row[w * r..(w + 1) * r].clone_from_slice(col);
            rows.push((row, d.clone()));
        }
    }
    let norm = action.iter().fold(IntMatrix::zeros(dim, dim), |acc, m| acc.add(m));
    let mut normed = rows.clone();
    normed.extend((0..dim).map(|k| (norm.row_vec(k), int::zero())));
    let mut dotted_rows = normed.clone();
    for w in (0..s).filter(|&w| !level.system.is_dotted(w)) {
        for i in 0..r {
            let mut row = vec![int::zero(); dim];
            row[w * r + i] = int::one();
            dotted_rows.push((row, int::zero()));
        }
    }

    // I·Y[S]_0, generated by (γ − 1)(b[w] − b[0]).
    let mut denom = Vec::new();
    for g in gr.generating_set() {
        for w in 1..s {
            for b in &pair.y_basis {
                let mut x = vec![int::zero(); dim];
                x[w * r..(w + 1) * r].clone_from_slice(b);
                for (xi, bi) in x[..r].iter_mut().zip(b) {
                    *xi -= bi;
                }
                let gx = action[g].mul_vec(&x);
                denom.push(gx.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<Int>>());
            }
        }
    }
    let moduli = vec![int::zero(); dim];
    let build = |rows: &[(Vec<Int>, Int)]| -> Result<Arc<AbGroup>> {
        let mut numer = kernel_lattice(dim, rows);
        numer.extend(denom.iter().cloned());
        Ok(Arc::new(AbGroup::subquotient(&moduli, &numer, &denom)?))
    };
    Ok(YbarGroup {
        pair: pair.clone(),
        level: level.clone(),
        quotient: build(&rows)?,
        group: build(&normed)?,
        dotted: build(&dotted_rows)?,
        action,
    })
}

impl YbarGroup {
    pub fn rank(&self) -> usize {
        self.pair.rank()
    }

    pub fn certificate(&self) -> YbarCertificate {
        let torsion = self.quotient.torsion_subgroup();
        let within = self.group.with_numer(self.group.numer_basis()).expect("same group");
        let dotted_onto = Morphism::inclusion(self.dotted.clone(), self.group.clone()).map(|m| m.is_surjective()).unwrap_or(false);
        YbarCertificate { equals_torsion: torsion.same_subgroup(&within), dotted_representatives: dotted_onto }
    }

    /// A representative of the class of `x` supported on `Ṡ`.
    pub fn dotted_representative(&self, x: &[Int]) -> Result<Vec<Int>> {
        let inc = Morphism::inclusion(self.dotted.clone(), self.group.clone())?;
        inc.preimage(x).ok_or_else(|| Error::Invalid("class has no representative supported on the dotted places".into()))
    }

    /// `(Ȳ/I_vY)[tor]` for the decomposition group of `d`.
    pub fn local_target(&self, d: &DecompositionData) -> AbGroup {
        self.pair.coinvariant_quotient(&d.stabilizer.elements).torsion_subgroup()
    }

    /// `l_v(f) = Σ_τ τ̇·c_{τ̇⁻¹v̇}` over the chosen right transversal of `Γ_v`.
    pub fn l_v(&self, d: &DecompositionData) -> Result<Morphism> {
        if !self.level.system.is_dotted(d.place) {
            return Err(Error::Invalid(format!("place {} is not dotted", d.place)));
        }
        let target = Arc::new(self.local_target(d));
        Morphism::from_fn(self.group.clone(), target, |f| self.l_v_raw(d, f))
    }

    fn l_v_raw(&self, d: &DecompositionData, f: &[Int]) -> Vec<Int> {
        let r = self.rank();
        let gr = self.level.group();
        let places = self.level.places();
        let mut out = vec![int::zero(); r];
        for &t in &d.coset_reps {
            let w = places.act(gr.inv(t), d.place);
            let moved = self.pair.ybar.matrix(t).mul_vec(block(f, w, r));
            for (o, x) in out.iter_mut().zip(moved) {
                *o += x;
            }
        }
        out
    }

    /// Changing a representative by a generator of `I·Y[S]_0` leaves the value
    /// of `l_v` unchanged, checked on every generator of the group.
    pub fn l_v_relation_audit(&self, d: &DecompositionData) -> Result<bool> {
        let target = self.local_target(d);
        let reps = self.group.generators();
        for rel in self.group.denom().basis() {
            for x in &reps {
                let moved: Vec<Int> = x.iter().zip(rel).map(|(a, b)| a + b).collect();
                if !target.elems_equal(&self.l_v_raw(d, x), &self.l_v_raw(d, &moved)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `l_v` recomputed for every identity-normalised transversal; true when all agree.
    pub fn l_v_transversal_audit(&self, d: &DecompositionData, budget: usize) -> Result<bool> {
        let base = self.l_v(d)?;
        for reps in d.all_transversals(self.level.group(), budget)? {
            let other = self.l_v(&d.with_reps(self.level.group(), reps)?)?;
            if !other.agrees_with(&base) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `s_!: Σ c_w[w] ↦ Σ c_w[s(w)]` between the groups at the two ends of `map`,
/// using the section stored in `map`.
pub fn shriek_map(pair: &IsogenyPair, map: &LevelMap) -> Result<(YbarGroup, YbarGroup, Morphism)> {
    let low = ybar_group(pair, &map.source)?;
    let high = ybar_group(&pair.inflate(map.target.group().clone(), &map.surjection)?, &map.target)?;
    let f = shriek_between(&low, &high, &map.section)?;
    Ok((low, high, f))
}

pub fn shriek_between(low: &YbarGroup, high: &YbarGroup, section: &[usize]) -> Result<Morphism> {
    let r = low.rank();
    let dim = high.level.num_places() * r;
    Morphism::from_fn(low.group.clone(), high.group.clone(), |f| {
        let mut out = vec![int::zero(); dim];
        for (w, &u) in section.iter().enumerate() {
            out[u * r..(u + 1) * r].clone_from_slice(block(f, w, r));
        }
        out
    })
}

/// Recompute `s_!` for every admissible section; true when all agree.
pub fn shriek_section_audit(pair: &IsogenyPair, map: &LevelMap, budget: usize) -> Result<bool> {
    let (low, high, base) = shriek_map(pair, map)?;
    for s in map.all_sections(budget)? {
        if !shriek_between(&low, &high, &s)?.agrees_with(&base) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `l_u ∘ s_! = l_v` for each dotted `v` of the source and the dotted `u` above it.
pub fn shriek_localization_square(pair: &IsogenyPair, map: &LevelMap) -> Result<bool> {
    let (low, high, shriek) = shriek_map(pair, map)?;
    for &v in map.source.section() {
        let dv = DecompositionData::new(&map.source.system, v)?;
        let du = DecompositionData::new(&map.target.system, map.section[v])?;
        let (lv, lu) = (low.l_v(&dv)?, high.l_v(&du)?);
        if !lv.target().same_subgroup(lu.target()) {
            return Ok(false);
        }
        for x in low.group.numer_basis() {
            if !lv.target().elems_equal(&lu.apply(&shriek.apply(x)?)?, &lv.apply(x)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of checking `G → ⊕_v (Ȳ/I_vY)[tor] → (Ȳ/IY)[tor]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaReport {
    pub composite_zero: bool,
    pub middle_exact: bool,
    pub defect: Option<String>,
    pub sigma_surjective: bool,
    /// `Some(true)` when the enumeration agreed, `None` when over budget.
    pub enumeration: Option<bool>,
    pub local_order: Option<Int>,
    pub global_order: Option<Int>,
}

impl SigmaReport {
    pub fn exact(&self) -> bool {
        self.composite_zero && self.middle_exact && self.enumeration != Some(false)
    }
}

pub fn sigma_exactness(g: &YbarGroup, budget: u64) -> Result<SigmaReport> {
    let data: Vec<DecompositionData> =
        g.level.section().iter().map(|&v| DecompositionData::new(&g.level.system, v)).collect::<Result<_>>()?;
    let locals: Vec<AbGroup> = data.iter().map(|d| g.local_target(d)).collect();
    let refs: Vec<&AbGroup> = locals.iter().collect();
    let sum = Arc::new(AbGroup::direct_sum(&refs));
    let r = g.rank();
    let global = Arc::new(g.pair.coinvariant_quotient(&g.level.group().generating_set()).torsion_subgroup());
    let k = data.len();
    let sigma = Morphism::from_fn(sum.clone(), global.clone(), |t| {
        (0..r).map(|i| (0..k).fold(int::zero(), |acc, v| acc + &t[v * r + i])).collect()
    })?;
    let ls: Vec<Morphism> = data.iter().map(|d| g.l_v(d)).collect::<Result<_>>()?;
    let l = Morphism::from_fn(g.group.clone(), sum.clone(), |f| ls.iter().flat_map(|m| m.apply(f).expect("element of G")).collect())?;
    let composite_zero = l.compose(&sigma)?.is_zero();
    let defect = exactness_defect(&l, &sigma);
    let enumeration = match sum.order_u64() {
        Some(o) if o <= budget => {
            let mut ok = true;
            for t in sum.enumerate_elements(budget)? {
                let killed = global.is_zero_elem(&sigma.apply(&t)?);
                if killed != l.preimage(&t).is_some() {
                    ok = false;
                    break;
                }
            }
            Some(ok)
        }
        _ => None,
    };
    Ok(SigmaReport {
        composite_zero,
        middle_exact: defect.is_none(),
        defect,
        sigma_surjective: sigma.is_surjective(),
        enumeration,
        local_order: sum.order(),
        global_order: global.order(),
    })
}

/// `(Ȳ/IY)[tor]`, its dual, and the pairing against characters `φ` of `Ȳ`
/// whose restriction to `Y` is Γ-invariant.
#[derive(Clone, Debug)]
pub struct ComponentGroup {
    pub group: Arc<AbGroup>,
    pub dual: DualGroup,
    /// The level `N` at which characters `Ȳ → (1/N)ℤ/ℤ` are taken.
    pub level: Int,
    /// Characters as vectors `φ(e_i)·N mod N`.
    pub characters: Arc<AbGroup>,
    pub left_kernel_trivial: bool,
}

pub fn component_group(pair: &IsogenyPair) -> Result<ComponentGroup> {
    let gens = pair.group().generating_set();
    let group = Arc::new(pair.coinvariant_quotient(&gens).torsion_subgroup());
    let dual = dual_group(group.clone())?;
    let r = pair.rank();
    let exp = group.exponent().unwrap_or_else(int::one);
    let level = exp * int::int(pair.group().order() as i64) * pair.index();
    let mut rows: Vec<(Vec<Int>, Int)> = Vec::new();
    for &g in &gens {
        let back = pair.ybar.matrix(pair.group().inv(g));
        for b in &pair.y_basis {
            let moved = back.mul_vec(b);
            rows.push((moved.iter().zip(b).map(|(x, y)| x - y).collect(), level.clone()));
        }
    }
    let moduli = vec![level.clone(); r];
    let characters = Arc::new(AbGroup::subquotient(&moduli, &kernel_lattice(r, &rows), &[])?);
    let chars: Vec<Vec<Int>> = characters.numer_basis().to_vec();
    let target = Arc::new(AbGroup::diagonal(&vec![level.clone(); chars.len()]));
    let pairing = Morphism::from_fn(group.clone(), target, |x| {
        chars.iter().map(|phi| phi.iter().zip(x).fold(int::zero(), |acc, (a, b)| acc + a * b)).collect()
    })?;
    Ok(ComponentGroup { left_kernel_trivial: pairing.is_injective(), group, dual, level, characters })
}

/// Whether the groups along a tower have stabilized: two consecutive `!`
/// maps (restricted to the norm-killed groups) are isomorphisms.
#[derive(Clone, Debug)]
pub struct Stabilization {
    pub orders: Vec<Option<Int>>,
    pub isomorphisms: Vec<bool>,
    pub stabilized_at: Option<usize>,
}

pub fn tower_stabilization(pair: &IsogenyPair, maps: &[LevelMap]) -> Result<Stabilization> {
    let mut orders = Vec::new();
    let mut isomorphisms = Vec::new();
    let mut current = pair.clone();
    for (i, m) in maps.iter().enumerate() {
        let (low, high, f) = shriek_map(&current, m)?;
        if i == 0 {
            orders.push(low.group.order());
        }
        orders.push(high.group.order());
        isomorphisms.push(f.is_isomorphism());
        current = high.pair.clone();
    }
    let stabilized_at = (1..isomorphisms.len()).find(|&i| isomorphisms[i - 1] && isomorphisms[i]).map(|i| i - 1);
    Ok(Stabilization { orders, isomorphisms, stabilized_at })
}

#[cfg(test)]
mod tests {
    use super::super::level::{PlaceSpec, Tower, TowerSpec};
    use super::*;
    use crate::znf::int::int;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    /// `Y = ℤ` with the sign action inside `Ȳ = ½ℤ`, in the basis `½`.
    pub(crate) fn sign_pair(g: Arc<FiniteGroup>, sign: &[i64]) -> IsogenyPair {
        let action = sign.iter().map(|&s| IntMatrix::from_rows(&[vec![s]])).collect();
        IsogenyPair::new(g, action, vec![vec![int(2)]]).unwrap()
    }

    fn single_level(g: Arc<FiniteGroup>, places: Vec<PlaceSpec>, allow: bool) -> Level {
        Tower::build(&TowerSpec { groups: vec![g], surjections: vec![], moduli: vec![int(2)], places, allow_violations: allow })
            .unwrap()
            .levels
            .remove(0)
    }

    #[test]
    fn component_group_of_sign_pair() {
        let c = component_group(&sign_pair(c2(), &[1, -1])).unwrap();
        assert_eq!(c.group.invariants(), &[int(4)]);
        assert!(c.left_kernel_trivial);
        let t = component_group(&IsogenyPair::trivial(c2(), vec![IntMatrix::identity(1); 2]).unwrap()).unwrap();
        assert!(t.group.is_trivial());
    }

    #[test]
    fn inert_plus_split() {
        let l = single_level(
            c2(),
            vec![PlaceSpec { first_level: 0, decomposition: vec![vec![0, 1]] }, PlaceSpec { first_level: 0, decomposition: vec![vec![0]] }],
            false,
        );
        let g = ybar_group(&sign_pair(c2(), &[1, -1]), &l).unwrap();
        let cert = g.certificate();
        assert!(cert.equals_torsion && cert.dotted_representatives, "{cert:?}");
        for &v in l.section() {
            let d = DecompositionData::new(&l.system, v).unwrap();
            assert!(g.l_v_transversal_audit(&d, 100).unwrap());
            assert!(g.l_v_relation_audit(&d).unwrap());
        }
        let rep = sigma_exactness(&g, 512).unwrap();
        assert!(rep.exact(), "{rep:?}");
    }

    #[test]
    fn shriek_on_tower() {
        let groups: Vec<Arc<FiniteGroup>> = [2, 4].iter().map(|&k| Arc::new(FiniteGroup::cyclic(k))).collect();
        let t = Tower::build(&TowerSpec {
            groups,
            surjections: vec![(0..4).map(|g| g % 2).collect()],
            moduli: vec![int(2), int(4)],
            places: vec![
                PlaceSpec { first_level: 0, decomposition: vec![vec![0, 1], (0..4).collect()] },
                PlaceSpec { first_level: 0, decomposition: vec![vec![0], vec![0]] },
            ],
            allow_violations: false,
        })
        .unwrap();
        let pair = sign_pair(c2(), &[1, -1]);
        assert!(shriek_section_audit(&pair, &t.maps[0], 64).unwrap());
        assert!(shriek_localization_square(&pair, &t.maps[0]).unwrap());
    }
}
