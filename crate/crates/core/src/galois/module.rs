//! Modules over finite groups.
//!
//! The action is stored as one matrix per group element acting on the ambient
//! coordinates of the underlying [`AbGroup`]. Submodules and quotients keep the
//! ambient and the matrices, so inclusions and projections are identity maps on
//! coordinates.

use std::sync::Arc;

use super::group::{FiniteGroup, Subgroup};
use super::gset::GammaSet;
use crate::error::{Error, Result};
use crate::znf::group::reduce_vec;
use crate::znf::int::{self, Int};
use crate::znf::{AbGroup, IntMatrix, Morphism, QZ};

#[derive(Clone)]
pub struct GammaModule {
    group: Arc<FiniteGroup>,
    underlying: Arc<AbGroup>,
    action: Arc<Vec<IntMatrix>>,
}

impl std::fmt::Debug for GammaModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GammaModule({} over {})", self.underlying.describe(), self.group.name())
    }
}

impl GammaModule {
    /// Validate a full action table: each matrix preserves the subgroup and its
    /// relations, the identity acts trivially and the table is multiplicative.
    pub fn new(group: Arc<FiniteGroup>, underlying: Arc<AbGroup>, action: Vec<IntMatrix>) -> Result<Self> {
        let m = Self::from_parts(group, underlying, action)?;
        m.validate()?;
        Ok(m)
    }

    fn from_parts(group: Arc<FiniteGroup>, underlying: Arc<AbGroup>, action: Vec<IntMatrix>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::Invalid(format!("{} action matrices given for a group of order {}", action.len(), group.order())));
        }
        let d = underlying.ambient_dim();
        if let Some(g) = action.iter().position(|a| a.rows() != d || a.cols() != d) {
            return Err(Error::Invalid(format!("action matrix of element {g} is not {d}x{d}")));
        }
        Ok(GammaModule { group, underlying, action: Arc::new(action) })
    }

    pub(crate) fn new_unchecked(group: Arc<FiniteGroup>, underlying: Arc<AbGroup>, action: Arc<Vec<IntMatrix>>) -> Self {
        GammaModule { group, underlying, action }
    }

    /// Build the full table from the matrices of a generating set.
    pub fn from_generators(group: Arc<FiniteGroup>, underlying: Arc<AbGroup>, gens: &[(usize, IntMatrix)]) -> Result<Self> {
        let d = underlying.ambient_dim();
        let mut table: Vec<Option<IntMatrix>> = vec![None; group.order()];
        table[group.identity()] = Some(IntMatrix::identity(d));
        let mut queue = vec![group.identity()];
        while let Some(x) = queue.pop() {
            for (g, mg) in gens {
                if *g >= group.order() || mg.rows() != d || mg.cols() != d {
                    return Err(Error::Invalid(format!("bad generator matrix for element {g}")));
                }
                let y = group.mul(*g, x);
                if table[y].is_none() {
                    let my = mg.mul(table[x].as_ref().expect("visited"));
                    table[y] = Some(reduce_matrix(&my, underlying.moduli()));
                    queue.push(y);
                }
            }
        }
        if let Some(g) = table.iter().position(Option::is_none) {
            return Err(Error::Invalid(format!("the given elements do not generate the group (element {g} unreachable)")));
        }
        Self::new(group, underlying, table.into_iter().map(Option::unwrap).collect())
    }

    pub fn trivial_action(group: Arc<FiniteGroup>, underlying: Arc<AbGroup>) -> Self {
        let d = underlying.ambient_dim();
        let action = vec![IntMatrix::identity(d); group.order()];
        GammaModule { group, underlying, action: Arc::new(action) }
    }

    /// `ℤ^r` with the given action matrices.
    pub fn lattice(group: Arc<FiniteGroup>, action: Vec<IntMatrix>) -> Result<Self> {
        let r = action.first().map_or(0, IntMatrix::rows);
        Self::new(group, Arc::new(AbGroup::free(r)), action)
    }

    /// `ℤ` with γ acting by the sign of a character `sign: Γ -> {±1}`.
    pub fn sign_lattice(group: Arc<FiniteGroup>, sign: &[i64]) -> Result<Self> {
        let action = sign.iter().map(|&s| IntMatrix::from_rows(&[vec![s]])).collect();
        Self::lattice(group, action)
    }

    /// The permutation lattice `ℤ[X]`.
    pub fn permutation_lattice(group: Arc<FiniteGroup>, x: &GammaSet) -> Self {
        let base = Self::trivial_action(group, Arc::new(AbGroup::free(1)));
        induced_module(x, &base).module
    }

    pub fn validate(&self) -> Result<()> {
        let u = &self.underlying;
        for (g, a) in self.action.iter().enumerate() {
            Morphism::from_matrix(u.clone(), u.clone(), a)
                .map_err(|e| Error::Invalid(format!("action of element {g} is not an endomorphism: {e}")))?;
        }
        let basis = u.numer_basis();
        let e = self.group.identity();
        for b in basis {
            if !u.elems_equal(&self.act(e, b), b) {
                return Err(Error::Invalid("the identity does not act trivially".into()));
            }
        }
        for g in self.group.elements() {
            for h in self.group.elements() {
                let gh = self.group.mul(g, h);
                for b in basis {
                    if !u.elems_equal(&self.act(g, &self.act(h, b)), &self.act(gh, b)) {
                        return Err(Error::Invalid(format!("action matrices violate the multiplication table at ({g},{h})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn underlying(&self) -> &Arc<AbGroup> {
        &self.underlying
    }

    pub fn matrices(&self) -> &Arc<Vec<IntMatrix>> {
        &self.action
    }

    pub fn matrix(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn ambient_dim(&self) -> usize {
        self.underlying.ambient_dim()
    }

    pub fn act(&self, g: usize, v: &[Int]) -> Vec<Int> {
        self.underlying.reduce(&self.action[g].mul_vec(v))
    }

    pub fn action_morphism(&self, g: usize) -> Morphism {
        Morphism::from_matrix(self.underlying.clone(), self.underlying.clone(), &self.action[g]).expect("validated action")
    }

    /// Action matrix in canonical coordinates of the underlying group.
    pub fn canonical_action(&self, g: usize) -> IntMatrix {
        self.action_morphism(g).canonical_matrix()
    }

    pub fn norm_matrix(&self) -> IntMatrix {
        let d = self.ambient_dim();
        let mut n = IntMatrix::zeros(d, d);
        for a in self.action.iter() {
            n = n.add(a);
        }
        n
    }

    pub fn norm(&self, v: &[Int]) -> Vec<Int> {
        self.underlying.reduce(&self.norm_matrix().mul_vec(v))
    }

    /// The norm endomorphism `Σ_γ γ`.
    pub fn norm_map(&self) -> Morphism {
        Morphism::from_matrix(self.underlying.clone(), self.underlying.clone(), &self.norm_matrix()).expect("validated action")
    }

    pub fn norm_kernel(&self) -> AbGroup {
        self.norm_map().kernel()
    }

    pub fn norm_image(&self) -> AbGroup {
        self.norm_map().image()
    }

    /// `I·M`, spanned by `γm − m` for γ in a generating set.
    pub fn augmentation_submodule(&self) -> AbGroup {
        let mut gens = Vec::new();
        for g in self.group.generating_set() {
            for b in self.underlying.numer_basis() {
                let gb = self.action[g].mul_vec(b);
                gens.push(gb.iter().zip(b).map(|(x, y)| x - y).collect());
            }
        }
        self.underlying.with_numer(&gens).expect("I·M lies in M")
    }

    /// `M^Γ`.
    pub fn fixed_points(&self) -> AbGroup {
        let gens = self.group.generating_set();
        if gens.is_empty() {
            return (*self.underlying).clone();
        }
        let copies: Vec<&AbGroup> = gens.iter().map(|_| &*self.underlying).collect();
        let target = Arc::new(AbGroup::direct_sum(&copies));
        let map = Morphism::from_fn(self.underlying.clone(), target, |v| {
            gens.iter()
                .flat_map(|&g| {
                    let gv = self.action[g].mul_vec(v);
                    gv.into_iter().zip(v).map(|(x, y)| x - y).collect::<Vec<_>>()
                })
                .collect()
        })
        .expect("γ − 1 is an endomorphism");
        map.kernel()
    }

    pub fn is_stable(&self, sub: &AbGroup) -> bool {
        self.group
            .generating_set()
            .iter()
            .all(|&g| sub.numer_basis().iter().all(|b| sub.contains(&self.action[g].mul_vec(b))))
    }

    /// Submodule given by a Γ-stable subgroup sharing the ambient and relations.
    pub fn submodule(&self, sub: AbGroup) -> Result<GammaModule> {
        if sub.moduli() != self.underlying.moduli() || !sub.is_subgroup_of(&self.underlying) {
            return Err(Error::Invalid("not a subgroup of the module".into()));
        }
        if !self.is_stable(&sub) {
            return Err(Error::NotEquivariant("subgroup is not Γ-stable".into()));
        }
        Ok(GammaModule { group: self.group.clone(), underlying: Arc::new(sub), action: self.action.clone() })
    }

    /// Quotient by the Γ-submodule generated by `gens`.
    pub fn quotient(&self, gens: &[Vec<Int>]) -> Result<GammaModule> {
        let mut all = Vec::new();
        for g in self.group.elements() {
            for v in gens {
                all.push(self.action[g].mul_vec(v));
            }
        }
        let q = self.underlying.quotient_by(&all)?;
        Ok(GammaModule { group: self.group.clone(), underlying: Arc::new(q), action: self.action.clone() })
    }

    /// Same underlying group, action restricted to a subgroup.
    pub fn restrict(&self, sub: &Subgroup) -> GammaModule {
        let action = sub.elements.iter().map(|&g| self.action[g].clone()).collect();
        GammaModule { group: Arc::new(sub.group.clone()), underlying: self.underlying.clone(), action: Arc::new(action) }
    }

    /// Pull back along a homomorphism `pi: big -> Γ`.
    pub fn inflate(&self, big: Arc<FiniteGroup>, pi: &[usize]) -> Result<GammaModule> {
        if !big.is_homomorphism(&self.group, pi) {
            return Err(Error::Invalid("inflation map is not a homomorphism".into()));
        }
        let action = pi.iter().map(|&g| self.action[g].clone()).collect();
        Ok(GammaModule { group: big, underlying: self.underlying.clone(), action: Arc::new(action) })
    }

    pub fn direct_sum(parts: &[&GammaModule]) -> Result<GammaModule> {
        let group = parts.first().ok_or_else(|| Error::Invalid("empty direct sum".into()))?.group.clone();
        if parts.iter().any(|p| *p.group != *group) {
            return Err(Error::Invalid("summands over different groups".into()));
        }
        let groups: Vec<&AbGroup> = parts.iter().map(|p| &*p.underlying).collect();
        let underlying = AbGroup::direct_sum(&groups);
        let action = group
            .elements()
            .map(|g| block_diagonal(&parts.iter().map(|p| &p.action[g]).collect::<Vec<_>>()))
            .collect();
        Ok(GammaModule { group, underlying: Arc::new(underlying), action: Arc::new(action) })
    }

    /// The same module with every ambient coordinate reduced modulo `n`
    /// (only meaningful for lattices): `M ⊗ ℤ/n`.
    pub fn mod_n(&self, n: &Int) -> Result<GammaModule> {
        if self.underlying.moduli().iter().any(|m| !int::is_zero(m)) || !self.underlying.denom().basis().is_empty() {
            return Err(Error::Unsupported("reduction mod n is only defined here for lattices".into()));
        }
        let moduli = vec![n.clone(); self.ambient_dim()];
        let underlying = AbGroup::subquotient(&moduli, self.underlying.numer_basis(), &[])?;
        let action = self.action.iter().map(|a| reduce_matrix(a, &moduli)).collect();
        Ok(GammaModule { group: self.group.clone(), underlying: Arc::new(underlying), action: Arc::new(action) })
    }

    /// `Hom(M, ℚ/ℤ)` for finite `M`, on the diagonal model `⊕ ℤ/a_i` where the
    /// basis vector `e_i` is the character taking value `1/a_i` on the i-th
    /// canonical generator of `M` and 0 on the others.
    pub fn dual(&self) -> Result<GammaModule> {
        if !self.underlying.is_finite() {
            return Err(Error::Invalid("dual of an infinite module".into()));
        }
        let a = self.underlying.invariants().to_vec();
        let h = a.len();
        let underlying = Arc::new(AbGroup::diagonal(&a));
        let action = self
            .group
            .elements()
            .map(|g| {
                let r = self.canonical_action(self.group.inv(g));
                let mut d = IntMatrix::zeros(h, h);
                for j in 0..h {
                    for k in 0..h {
                        d.set(j, k, int::div_exact(&(&a[j] * r.get(k, j)), &a[k]));
                    }
                }
                reduce_matrix(&d, &a)
            })
            .collect();
        Ok(GammaModule { group: self.group.clone(), underlying, action: Arc::new(action) })
    }

    /// Evaluate a character (an element of [`GammaModule::dual`]) on an element of `M`.
    pub fn pair_dual(&self, chi: &[Int], m: &[Int]) -> QZ {
        let c = self.underlying.coords(m).expect("element of the module");
        let mut out = QZ::zero();
        for ((x, y), a) in chi.iter().zip(&c).zip(self.underlying.invariants()) {
            out = out.add(&QZ::new(x * y, a.clone()));
        }
        out
    }

    /// Whether two modules have the same group, ambient, relations and action.
    pub fn same_as(&self, other: &GammaModule) -> bool {
        *self.group == *other.group
            && self.underlying.moduli() == other.underlying.moduli()
            && self.underlying.numer().same_as(other.underlying.numer())
            && self.underlying.denom().same_as(other.underlying.denom())
            && self.group.elements().all(|g| {
                self.underlying
                    .numer_basis()
                    .iter()
                    .all(|b| self.underlying.elems_equal(&self.act(g, b), &other.act(g, b)))
            })
    }
}

/// A Γ-equivariant homomorphism.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: GammaModule,
    pub target: GammaModule,
    pub map: Morphism,
}

impl ModuleMap {
    pub fn new(source: GammaModule, target: GammaModule, map: Morphism) -> Result<Self> {
        if *source.group != *target.group {
            return Err(Error::Invalid("modules over different groups".into()));
        }
        for g in source.group.generating_set() {
            for b in source.underlying.numer_basis() {
                let lhs = map.apply(&source.act(g, b))?;
                let rhs = target.act(g, &map.apply(b)?);
                if !target.underlying.elems_equal(&lhs, &rhs) {
                    return Err(Error::NotEquivariant(format!("f(γ·b) != γ·f(b) for γ = {g}, b = {b:?}")));
                }
            }
        }
        Ok(ModuleMap { source, target, map })
    }

    pub fn from_matrix(source: GammaModule, target: GammaModule, m: &IntMatrix) -> Result<Self> {
        let map = Morphism::from_matrix(source.underlying.clone(), target.underlying.clone(), m)?;
        Self::new(source, target, map)
    }

    pub fn identity(m: &GammaModule) -> Self {
        ModuleMap { source: m.clone(), target: m.clone(), map: Morphism::identity(m.underlying.clone()) }
    }

    pub fn apply(&self, v: &[Int]) -> Result<Vec<Int>> {
        self.map.apply(v)
    }

    pub fn compose(&self, after: &ModuleMap) -> Result<ModuleMap> {
        Ok(ModuleMap { source: self.source.clone(), target: after.target.clone(), map: self.map.compose(&after.map)? })
    }
}

/// `A[X]`: copies of `A` indexed by `X`, with `γ` sending the `x`-copy to the
/// `γx`-copy through `γ` acting on `A`. Ambient index `(x, i)` is `x·dim(A) + i`.
#[derive(Clone, Debug)]
pub struct InducedModule {
    pub module: GammaModule,
    pub set: GammaSet,
    pub base: GammaModule,
}

pub fn induced_module(x: &GammaSet, a: &GammaModule) -> InducedModule {
    let group = a.group.clone();
    let d = a.ambient_dim();
    let n = x.size();
    let moduli: Vec<Int> = (0..n).flat_map(|_| a.underlying.moduli().iter().cloned()).collect();
    let place = |p: usize, v: &[Int]| {
        let mut w = vec![int::zero(); n * d];
        w[p * d..(p + 1) * d].clone_from_slice(v);
        w
    };
    let numer: Vec<Vec<Int>> = (0..n).flat_map(|p| a.underlying.numer_basis().iter().map(move |b| place(p, b))).collect();
    let denom: Vec<Vec<Int>> = (0..n).flat_map(|p| a.underlying.denom().basis().iter().map(move |b| place(p, b))).collect();
    let underlying = AbGroup::subquotient(&moduli, &numer, &denom).expect("copies of a valid group");
    let action = group
        .elements()
        .map(|g| {
            let mut m = IntMatrix::zeros(n * d, n * d);
            for p in 0..n {
                let q = x.act(g, p);
                for i in 0..d {
                    for j in 0..d {
                        m.set(q * d + i, p * d + j, a.action[g].get(i, j).clone());
                    }
                }
            }
            m
        })
        .collect();
    let module = GammaModule { group, underlying: Arc::new(underlying), action: Arc::new(action) };
    InducedModule { module, set: x.clone(), base: a.clone() }
}

impl InducedModule {
    fn dim(&self) -> usize {
        self.base.ambient_dim()
    }

    /// `a[x]`.
    pub fn embed(&self, x: usize, a: &[Int]) -> Vec<Int> {
        let d = self.dim();
        let mut w = vec![int::zero(); self.set.size() * d];
        w[x * d..(x + 1) * d].clone_from_slice(a);
        self.module.underlying.reduce(&w)
    }

    /// The `x`-coordinate of an element.
    pub fn component(&self, v: &[Int], x: usize) -> Vec<Int> {
        let d = self.dim();
        self.base.underlying.reduce(&v[x * d..(x + 1) * d])
    }

    /// The augmentation `A[X] -> A`, summing coordinates.
    pub fn augmentation(&self) -> Morphism {
        let d = self.dim();
        let n = self.set.size();
        Morphism::from_fn(self.module.underlying.clone(), self.base.underlying.clone(), |v| {
            (0..d).map(|i| (0..n).fold(int::zero(), |acc, p| acc + &v[p * d + i])).collect()
        })
        .expect("sum of coordinates is well defined")
    }

    /// `f[X]: A[X] -> B[X]` for `f: A -> B`, where `other` is `B[X]`.
    pub fn induced_map(&self, other: &InducedModule, f: &ModuleMap) -> Result<ModuleMap> {
        if self.set != other.set {
            return Err(Error::Invalid("induced modules over different sets".into()));
        }
        let n = self.set.size();
        let d = self.dim();
        let map = Morphism::from_fn(self.module.underlying.clone(), other.module.underlying.clone(), |v| {
            (0..n)
                .flat_map(|p| f.map.apply(&v[p * d..(p + 1) * d]).expect("block lies in the source"))
                .collect()
        })?;
        ModuleMap::new(self.module.clone(), other.module.clone(), map)
    }
}

/// `A[X]_0`: the kernel of the augmentation.
pub fn augmentation_kernel(ind: &InducedModule) -> GammaModule {
    let ker = ind.augmentation().kernel();
    GammaModule { group: ind.module.group.clone(), underlying: Arc::new(ker), action: ind.module.action.clone() }
}

/// Norm endomorphism, augmentation submodule `I·M` and norm kernel.
pub struct NormData {
    pub norm: Morphism,
    pub augmentation_submodule: AbGroup,
    pub norm_kernel: AbGroup,
}

pub fn norm_and_augmentation_ideal(m: &GammaModule) -> NormData {
    let norm = m.norm_map();
    let norm_kernel = norm.kernel();
    let augmentation_submodule = m.augmentation_submodule();
    debug_assert!(augmentation_submodule.is_subgroup_of(&norm_kernel), "I·M must be norm-killed");
    NormData { norm, augmentation_submodule, norm_kernel }
}

pub(crate) fn reduce_matrix(m: &IntMatrix, moduli: &[Int]) -> IntMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        if !int::is_zero(&moduli[i]) {
            for j in 0..m.cols() {
                let x = int::rem_floor(m.get(i, j), &moduli[i]);
                out.set(i, j, x);
            }
        }
    }
    out
}

pub(crate) fn block_diagonal(blocks: &[&IntMatrix]) -> IntMatrix {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut m = IntMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m.set(off + i, off + j, b.get(i, j).clone());
            }
        }
        off += b.rows();
    }
    m
}

/// Reduce an ambient vector modulo the moduli of a module.
pub fn reduce_in(m: &GammaModule, v: &[Int]) -> Vec<Int> {
    reduce_vec(v, m.underlying.moduli())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::znf::int::int;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn sign_module_norm_data() {
        let m = GammaModule::sign_lattice(c2(), &[1, -1]).unwrap();
        let nd = norm_and_augmentation_ideal(&m);
        assert!(nd.norm.is_zero());
        assert_eq!(nd.norm_kernel.invariants(), &[int(0)]);
        let q = nd.norm_kernel.quotient_by(nd.augmentation_submodule.numer_basis()).unwrap();
        assert_eq!(q.invariants(), &[int(2)]);
        assert!(m.fixed_points().is_trivial());
    }

    #[test]
    fn multiplication_table_enforced() {
        let bad = vec![IntMatrix::from_rows(&[vec![1]]), IntMatrix::from_rows(&[vec![2]])];
        assert!(GammaModule::lattice(c2(), bad).is_err());
    }

    #[test]
    fn induced_from_swapped_pair() {
        let g = c2();
        let x = GammaSet::new(&g, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let a = GammaModule::trivial_action(g.clone(), Arc::new(AbGroup::cyclic(2)));
        let ind = induced_module(&x, &a);
        ind.module.validate().unwrap();
        assert_eq!(ind.module.underlying().order(), Some(int(4)));
        let v = ind.embed(0, &[int(1)]);
        assert_eq!(ind.component(&ind.module.act(1, &v), 1), vec![int(1)]);
        assert_eq!(augmentation_kernel(&ind).underlying().order(), Some(int(2)));
    }

    #[test]
    fn sign_pair_augmentation_kernel_is_free_rank_one() {
        let g = c2();
        let x = GammaSet::new(&g, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let a = GammaModule::sign_lattice(g, &[1, -1]).unwrap();
        let k = augmentation_kernel(&induced_module(&x, &a));
        assert_eq!(k.underlying().invariants(), &[int(0)]);
    }

    #[test]
    fn regular_norm_kernel_is_augmentation_kernel() {
        let g = Arc::new(FiniteGroup::symmetric3());
        let x = GammaSet::regular(&g);
        let triv = GammaModule::trivial_action(g.clone(), Arc::new(AbGroup::free(1)));
        let ind = induced_module(&x, &triv);
        let nk = ind.module.norm_kernel();
        let ak = augmentation_kernel(&ind);
        assert!(nk.same_subgroup(ak.underlying()));
    }

    #[test]
    fn dual_of_z4_sign() {
        let g = c2();
        let m = GammaModule::new(g.clone(), Arc::new(AbGroup::cyclic(4)), vec![IntMatrix::from_rows(&[vec![1]]), IntMatrix::from_rows(&[vec![3]])]).unwrap();
        let d = m.dual().unwrap();
        d.validate().unwrap();
        // The pairing is invariant: <γχ, γa> = <χ, a>.
        for chi in 0..4 {
            for a in 0..4 {
                let lhs = m.pair_dual(&d.act(1, &[int(chi)]), &m.act(1, &[int(a)]));
                assert_eq!(lhs, m.pair_dual(&[int(chi)], &[int(a)]));
            }
        }
    }
}
