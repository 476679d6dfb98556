//! The isomorphism `Ψ: Hom(A, M_{E,S,n})^Γ → Ẑ^{-1}(Γ, A^∨[S]_0)` and its
//! restriction to `M_{E,Ṡ,n}`.

use std::sync::Arc;

use super::level::Level;
use crate::error::{Error, Result};
use crate::galois::{augmentation_kernel, induced_module, GammaModule, InducedModule};
use crate::znf::int::{self, Int};
use crate::znf::{kernel_lattice, AbGroup, IntMatrix, Morphism};

/// Linear conditions cutting `M_{E,S,n}` (or `M_{E,Ṡ,n}`) out of `ℤ/n[Γ × S]`.
fn membership_rows(level: &Level, dotted: bool) -> Vec<Vec<usize>> {
    let g = level.group().order();
    let s = level.num_places();
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for w in 0..s {
        rows.push((0..g).map(|sigma| sigma * s + w).collect());
    }
    for sigma in 0..g {
        rows.push((0..s).map(|w| sigma * s + w).collect());
    }
    if dotted {
        for sigma in 0..g {
            for w in 0..s {
                if !level.system.in_translated_section(sigma, w) {
                    rows.push(vec![sigma * s + w]);
                }
            }
        }
    }
    rows
}

/// `Hom(A, M)^Γ`, stored as the tuple `(H(e_1), …, H(e_h))` of images of the
/// canonical generators of `A`; coordinate `(i, k)` sits at `i·|Γ×S| + k`.
#[derive(Clone, Debug)]
pub struct EquivariantHoms {
    pub group: Arc<AbGroup>,
    pub coefficients: GammaModule,
    pub dotted: bool,
    width: usize,
}

impl EquivariantHoms {
    pub fn new(level: &Level, a: &GammaModule, dotted: bool) -> Result<Self> {
        if **a.group() != **level.group() {
            return Err(Error::Invalid("A and the level have different groups".into()));
        }
        let n = level.modulus().clone();
        let und = a.underlying();
        if !und.is_finite() {
            return Err(Error::Invalid("A must be finite".into()));
        }
        let inv = und.invariants().to_vec();
        if inv.iter().any(|ai| !int::divides(ai, &n)) {
            return Err(Error::Invalid(format!("the exponent of A does not divide n = {n}")));
        }
        let gr = level.group();
        let s = level.num_places();
        let width = gr.order() * s;
        let h = inv.len();
        let dim = h * width;
        let at = |i: usize, k: usize| i * width + k;
        let mut rows: Vec<(Vec<Int>, Int)> = Vec::new();
        let zero_row = || vec![int::zero(); dim];
        for (i, ai) in inv.iter().enumerate() {
            for k in 0..width {
                let mut r = zero_row();
                r[at(i, k)] = ai.clone();
                rows.push((r, n.clone()));
            }
            for support in membership_rows(level, dotted) {
                let mut r = zero_row();
                for k in support {
                    r[at(i, k)] = int::one();
                }
                rows.push((r, n.clone()));
            }
        }
        for gamma in gr.generating_set() {
            let rho = a.canonical_action(gamma);
            let ginv = gr.inv(gamma);
            for i in 0..h {
                for sigma in 0..gr.order() {
                    for w in 0..s {
                        let k = sigma * s + w;
                        let back = gr.mul(ginv, sigma) * s + level.places().act(ginv, w);
                        let mut r = zero_row();
                        for j in 0..h {
                            r[at(j, k)] += rho.get(j, i);
                        }
                        r[at(i, back)] -= int::one();
                        rows.push((r, n.clone()));
                    }
                }
            }
        }
        let gens = kernel_lattice(dim, &rows);
        let group = Arc::new(AbGroup::subquotient(&vec![n; dim], &gens, &[])?);
        Ok(EquivariantHoms { group, coefficients: a.clone(), dotted, width })
    }

    pub fn rank(&self) -> usize {
        self.coefficients.underlying().invariants().len()
    }

    /// `H(e_i) ∈ ℤ/n[Γ × S]`.
    pub fn image_of_generator<'a>(&self, hom: &'a [Int], i: usize) -> &'a [Int] {
        &hom[i * self.width..(i + 1) * self.width]
    }

    /// `H(a)` for `a` in the ambient of `A`.
    pub fn evaluate(&self, hom: &[Int], a: &[Int]) -> Vec<Int> {
        let c = self.coefficients.underlying().coords(a).expect("element of A");
        let mut out = vec![int::zero(); self.width];
        for (i, ci) in c.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(self.image_of_generator(hom, i)) {
                *o += ci * x;
            }
        }
        let n = &self.group.moduli()[0];
        out.iter().map(|x| int::reduce(x, n)).collect()
    }
}

/// Everything attached to `Ψ` at one level and one coefficient module `A`.
#[derive(Clone, Debug)]
pub struct PsiMap {
    pub homs: EquivariantHoms,
    pub dotted_homs: EquivariantHoms,
    /// `A^∨[S]`, ambient index `(w, i) = w·h + i`.
    pub induced: InducedModule,
    /// `A^∨[S]_0`.
    pub sum_zero: GammaModule,
    /// `Ẑ^{-1}(Γ, A^∨[S]_0)`.
    pub cocycles: Arc<AbGroup>,
    /// `A^∨[Ṡ]_0 ∩ Ẑ^{-1}`.
    pub dotted_cocycles: Arc<AbGroup>,
    /// `Ĥ^{-1}(Γ, A^∨[S]_0)` as a quotient of the cocycles.
    pub tate: Arc<AbGroup>,
    pub forward: Morphism,
    pub inverse: Morphism,
    pub restricted: Morphism,
    pub to_tate: Morphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiReport {
    pub bijective: bool,
    pub inverse_verified: bool,
    pub restricted_onto: bool,
    pub onto_tate: bool,
    pub hom_order: Option<Int>,
    pub tate_order: Option<Int>,
}

impl PsiReport {
    pub fn all_ok(&self) -> bool {
        self.bijective && self.inverse_verified && self.restricted_onto && self.onto_tate
    }
}

pub fn psi_map(level: &Level, a: &GammaModule) -> Result<PsiMap> {
    let homs = EquivariantHoms::new(level, a, false)?;
    let dotted_homs = EquivariantHoms::new(level, a, true)?;
    let dual = a.dual()?;
    let induced = induced_module(level.places(), &dual);
    let sum_zero = augmentation_kernel(&induced);
    let cocycles = Arc::new(sum_zero.norm_kernel());
    let n = level.modulus().clone();
    let inv = a.underlying().invariants().to_vec();
    let h = inv.len();
    let s = level.num_places();
    let gr = level.group().clone();
    let e = gr.identity();

    let psi = |hom: &[Int]| -> Vec<Int> {
        let mut out = vec![int::zero(); s * h];
        for w in 0..s {
            for i in 0..h {
                let x = &homs.image_of_generator(hom, i)[e * s + w];
                let x = int::reduce(x, &n);
                out[w * h + i] = int::div_exact(&(&x * &inv[i]), &n);
            }
        }
        out
    };
    let forward = Morphism::from_fn(homs.group.clone(), cocycles.clone(), psi)?;
    let dotted_cocycles = Arc::new(dotted_cocycle_group(&induced, level, &inv)?);
    let restricted = Morphism::from_fn(dotted_homs.group.clone(), dotted_cocycles.clone(), psi)?;

    let rho_inv: Vec<IntMatrix> = gr.elements().map(|g| a.canonical_action(gr.inv(g))).collect();
    let inverse = Morphism::from_fn(cocycles.clone(), homs.group.clone(), |c| {
        let width = gr.order() * s;
        let mut out = vec![int::zero(); h * width];
        for i in 0..h {
            for sigma in gr.elements() {
                let r = &rho_inv[sigma];
                for w in 0..s {
                    let u = level.places().act(gr.inv(sigma), w);
                    let mut v = int::zero();
                    for j in 0..h {
                        v += &c[u * h + j] * r.get(j, i) * int::div_exact(&n, &inv[j]);
                    }
                    out[i * width + sigma * s + w] = int::reduce(&v, &n);
                }
            }
        }
        out
    })?;
    let im = sum_zero.augmentation_submodule();
    let tate = Arc::new(cocycles.quotient_by(im.numer_basis())?);
    let to_tate = Morphism::from_fn(dotted_cocycles.clone(), tate.clone(), |v| v.to_vec())?;
    Ok(PsiMap { homs, dotted_homs, induced, sum_zero, cocycles, dotted_cocycles, tate, forward, inverse, restricted, to_tate })
}

fn dotted_cocycle_group(induced: &InducedModule, level: &Level, inv: &[Int]) -> Result<AbGroup> {
    let h = inv.len();
    let s = level.num_places();
    let dim = s * h;
    let norm = induced.module.norm_matrix();
    let mut rows: Vec<(Vec<Int>, Int)> = Vec::new();
    for i in 0..h {
        let mut r = vec![int::zero(); dim];
        for w in 0..s {
            r[w * h + i] = int::one();
        }
        rows.push((r, inv[i].clone()));
    }
    for k in 0..dim {
        rows.push((norm.row_vec(k), inv[k % h].clone()));
        if !level.system.is_dotted(k / h) {
            let mut r = vec![int::zero(); dim];
            r[k] = int::one();
            rows.push((r, inv[k % h].clone()));
        }
    }
    let gens = kernel_lattice(dim, &rows);
    let moduli: Vec<Int> = (0..s).flat_map(|_| inv.iter().cloned()).collect();
    AbGroup::subquotient(&moduli, &gens, &[])
}

impl PsiMap {
    pub fn report(&self) -> Result<PsiReport> {
        let id_hom = Morphism::identity(self.homs.group.clone());
        let id_coc = Morphism::identity(self.cocycles.clone());
        let inverse_verified =
            self.forward.compose(&self.inverse)?.agrees_with(&id_hom) && self.inverse.compose(&self.forward)?.agrees_with(&id_coc);
        Ok(PsiReport {
            bijective: self.forward.is_isomorphism(),
            inverse_verified,
            restricted_onto: self.restricted.image().same_subgroup(&self.dotted_cocycles),
            onto_tate: self.to_tate.is_surjective(),
            hom_order: self.homs.group.order(),
            tate_order: self.tate.order(),
        })
    }
}

/// `Ψ_m ∘ ι = Ψ_n` for the inclusion `ι: M_{E,S,n} → M_{E,S,m}`, `x ↦ (m/n)·x`,
/// checked on generators. Both maps must be built over the same group,
/// places and coefficients.
pub fn psi_compatible(small: &PsiMap, large: &PsiMap) -> Result<bool> {
    let n = &small.homs.group.moduli()[0];
    let m = &large.homs.group.moduli()[0];
    if !int::divides(n, m) {
        return Err(Error::Invalid(format!("{n} does not divide {m}")));
    }
    let ratio = int::div_exact(m, n);
    for b in small.homs.group.numer_basis() {
        let up: Vec<Int> = b.iter().map(|x| x * &ratio).collect();
        let lhs = large.forward.apply(&up)?;
        let rhs = small.forward.apply(b)?;
        if !small.cocycles.elems_equal(&lhs, &rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{ArithmeticFlags, FiniteGroup, GammaSet, LevelLabel, PlaceSystem};
    use crate::znf::int::int;

    fn level(g: Arc<FiniteGroup>, set: GammaSet, section: Vec<usize>, n: i64, allow: bool) -> Level {
        let label = LevelLabel { field: "E".into(), places: "S".into(), modulus: int(n) };
        let p = PlaceSystem::new(g, set, section, ArithmeticFlags::default(), label).unwrap();
        if allow {
            Level::with_override(p).unwrap()
        } else {
            Level::new(p).unwrap()
        }
    }

    fn c2_two_orbits(n: i64) -> Level {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let set = GammaSet::new(&g, vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        level(g, set, vec![0, 2], n, false)
    }

    #[test]
    fn psi_is_bijective_and_restricts_onto() {
        let l = c2_two_orbits(4);
        let g = l.group().clone();
        for a in [
            GammaModule::trivial_action(g.clone(), Arc::new(AbGroup::cyclic(2))),
            GammaModule::trivial_action(g.clone(), Arc::new(AbGroup::cyclic(4))),
            GammaModule::sign_lattice(g.clone(), &[1, -1]).unwrap().mod_n(&int(4)).unwrap(),
        ] {
            let p = psi_map(&l, &a).unwrap();
            let r = p.report().unwrap();
            assert!(r.all_ok(), "{r:?}");
        }
    }

    #[test]
    fn compatible_across_moduli() {
        let a = GammaModule::trivial_action(Arc::new(FiniteGroup::cyclic(2)), Arc::new(AbGroup::cyclic(2)));
        let p2 = psi_map(&c2_two_orbits(2), &a).unwrap();
        let p4 = psi_map(&c2_two_orbits(4), &a).unwrap();
        assert!(psi_compatible(&p2, &p4).unwrap());
    }

    #[test]
    fn negative_control_is_not_onto() {
        // Condition (4) fails: the swap fixes no dotted place.
        let g = Arc::new(FiniteGroup::cyclic(2));
        let set = GammaSet::new(&g, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let l = level(g.clone(), set, vec![0], 2, true);
        let a = GammaModule::trivial_action(g, Arc::new(AbGroup::cyclic(2)));
        let r = psi_map(&l, &a).unwrap().report().unwrap();
        assert!(r.bijective);
        assert!(!r.onto_tate);
    }
}
