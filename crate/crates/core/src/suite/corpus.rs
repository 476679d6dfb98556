//! Instances exercised by the acceptance suite.

use std::sync::Arc;

use crate::complexes::LatticeComplex;
use crate::galois::{FiniteGroup, GammaModule, GammaSet};
use crate::rigid::{IsogenyPair, Level, PlaceSpec, Tower, TowerSpec};
use crate::znf::int::{int, Int};
use crate::znf::{AbGroup, IntMatrix};
use crate::Result;

pub fn cyclic(n: usize) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(n))
}

pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::direct_product(a, b))
}

fn first_of_order(g: &FiniteGroup, k: usize) -> usize {
    g.elements().find(|&a| g.element_order(a) == k).expect("element of the requested order")
}

/// The subgroup generated by the first element of order `k`.
pub fn cyclic_subgroup(g: &FiniteGroup, k: usize) -> Vec<usize> {
    g.closure(&[first_of_order(g, k)])
}

pub fn whole(g: &FiniteGroup) -> Vec<usize> {
    g.elements().collect()
}

pub fn trivial(g: &FiniteGroup) -> Vec<usize> {
    vec![g.identity()]
}

/// The ±1 character with kernel `h`, an index-two subgroup.
pub fn character(g: &FiniteGroup, h: &[usize]) -> Vec<i64> {
    g.elements().map(|x| if h.contains(&x) { 1 } else { -1 }).collect()
}

/// A single level whose places are the cosets of the given decomposition groups.
pub fn single_level(g: &Arc<FiniteGroup>, decomposition: &[Vec<usize>], n: i64, allow_violations: bool) -> Result<Level> {
    let places = decomposition.iter().map(|d| PlaceSpec { first_level: 0, decomposition: vec![d.clone()] }).collect();
    let spec = TowerSpec { groups: vec![g.clone()], surjections: vec![], moduli: vec![int(n)], places, allow_violations };
    Ok(Tower::build(&spec)?.levels.remove(0))
}

fn finite(g: &Arc<FiniteGroup>, m: i64) -> GammaModule {
    GammaModule::trivial_action(g.clone(), Arc::new(AbGroup::cyclic(m)))
}

fn signed(g: &Arc<FiniteGroup>, h: &[usize], m: i64) -> Result<GammaModule> {
    GammaModule::sign_lattice(g.clone(), &character(g, h))?.mod_n(&int(m))
}

pub struct PsiInstance {
    pub name: String,
    pub level: Level,
    pub module: GammaModule,
}

/// Levels satisfying conditions (3) and (4) with coefficient modules killed by `n`.
pub fn psi_instances() -> Result<Vec<PsiInstance>> {
    let mut out = Vec::new();
    let mut push = |name: &str, level: Level, module: GammaModule| out.push(PsiInstance { name: name.into(), level, module });

    let c2 = cyclic(2);
    let (all, one) = (whole(&c2), trivial(&c2));
    push("C2 inert+split n=2 Z/2", single_level(&c2, &[all.clone(), one.clone()], 2, false)?, finite(&c2, 2));
    push("C2 inert+split n=4 Z/2", single_level(&c2, &[all.clone(), one.clone()], 4, false)?, finite(&c2, 2));
    push("C2 inert+split n=4 Z/4", single_level(&c2, &[all.clone(), one.clone()], 4, false)?, finite(&c2, 4));
    push("C2 inert+split n=4 sign", single_level(&c2, &[all.clone(), one.clone()], 4, false)?, signed(&c2, &one, 4)?);
    push("C2 two inert n=2 Z/2", single_level(&c2, &[all.clone(), all.clone()], 2, false)?, finite(&c2, 2));
    push("C2 inert+2 split n=4 sign", single_level(&c2, &[all.clone(), one.clone(), one.clone()], 4, false)?, signed(&c2, &one, 4)?);
    push("C2 one inert n=2 Z/2", single_level(&c2, &[all.clone()], 2, false)?, finite(&c2, 2));

    let c3 = cyclic(3);
    let (all, one) = (whole(&c3), trivial(&c3));
    push("C3 inert+split n=3 Z/3", single_level(&c3, &[all.clone(), one.clone()], 3, false)?, finite(&c3, 3));
    push("C3 inert+split n=6 Z/3", single_level(&c3, &[all.clone(), one.clone()], 6, false)?, finite(&c3, 3));
    push("C3 inert+split n=6 Z/2", single_level(&c3, &[all, one], 6, false)?, finite(&c3, 2));

    let c4 = cyclic(4);
    let (all, one, half) = (whole(&c4), trivial(&c4), cyclic_subgroup(&c4, 2));
    push("C4 inert+C2 n=4 Z/2", single_level(&c4, &[all.clone(), half.clone()], 4, false)?, finite(&c4, 2));
    push("C4 inert+C2 n=4 Z/4", single_level(&c4, &[all.clone(), half.clone()], 4, false)?, finite(&c4, 4));
    push("C4 inert+C2 n=8 sign", single_level(&c4, &[all.clone(), half.clone()], 8, false)?, signed(&c4, &half, 4)?);
    push("C4 inert+split n=4 Z/4", single_level(&c4, &[all, one], 4, false)?, finite(&c4, 4));

    let v4 = Arc::new(FiniteGroup::klein());
    let twos: Vec<Vec<usize>> = v4.elements().filter(|&a| a != v4.identity()).map(|a| v4.closure(&[a])).collect();
    let (all, one) = (whole(&v4), trivial(&v4));
    push("V4 three C2 n=2 Z/2", single_level(&v4, &twos, 2, false)?, finite(&v4, 2));
    push("V4 three C2 n=4 Z/4", single_level(&v4, &twos, 4, false)?, finite(&v4, 4));
    push("V4 inert+split n=2 Z/2", single_level(&v4, &[all.clone(), one], 2, false)?, finite(&v4, 2));
    push("V4 inert+C2 n=4 character", single_level(&v4, &[all, twos[0].clone()], 4, false)?, signed(&v4, &twos[0], 4)?);

    let s3 = Arc::new(FiniteGroup::symmetric3());
    let (all, c3s, c2s) = (whole(&s3), cyclic_subgroup(&s3, 3), cyclic_subgroup(&s3, 2));
    push("S3 inert+C3 n=6 Z/2", single_level(&s3, &[all.clone(), c3s.clone()], 6, false)?, finite(&s3, 2));
    push("S3 inert+C3 n=6 Z/3", single_level(&s3, &[all.clone(), c3s.clone()], 6, false)?, finite(&s3, 3));
    push("S3 inert+C2 n=6 sign", single_level(&s3, &[all.clone(), c2s.clone()], 6, false)?, signed(&s3, &c3s, 2)?);
    push("S3 inert+C2 n=6 Z/3", single_level(&s3, &[all, c2s], 6, false)?, finite(&s3, 3));

    let d4 = Arc::new(FiniteGroup::dihedral(4));
    let (all, rot) = (whole(&d4), cyclic_subgroup(&d4, 4));
    push("D4 inert+C4 n=4 Z/2", single_level(&d4, &[all.clone(), rot.clone()], 4, false)?, finite(&d4, 2));
    push("D4 inert+C4 n=8 Z/4", single_level(&d4, &[all.clone(), rot.clone()], 8, false)?, finite(&d4, 4));
    push("D4 inert+C4 n=8 sign", single_level(&d4, &[all, rot.clone()], 8, false)?, signed(&d4, &rot, 8)?);

    let c6 = cyclic(6);
    let all = whole(&c6);
    push("C6 inert+C3 n=6 Z/6", single_level(&c6, &[all.clone(), cyclic_subgroup(&c6, 3)], 6, false)?, finite(&c6, 6));
    push("C6 inert+C2 n=6 Z/3", single_level(&c6, &[all, cyclic_subgroup(&c6, 2)], 6, false)?, finite(&c6, 3));
    Ok(out)
}

/// Condition (4) fails: the nontrivial element of C2 fixes no dotted place.
pub fn negative_control() -> Result<PsiInstance> {
    let c2 = cyclic(2);
    Ok(PsiInstance {
        name: "C2 single split orbit n=2 Z/2".into(),
        level: single_level(&c2, &[trivial(&c2)], 2, true)?,
        module: finite(&c2, 2),
    })
}

pub struct TowerInstance {
    pub name: String,
    pub tower: Tower,
}

fn reduce_mod(big: usize, small: usize) -> Vec<usize> {
    (0..big).map(|g| g % small).collect()
}

/// Projection of `A × B` onto `A`, in the indexing of [`FiniteGroup::direct_product`].
fn first_factor(a: usize, b: usize) -> Vec<usize> {
    (0..a * b).map(|x| x / b).collect()
}

fn tower(name: &str, groups: Vec<Arc<FiniteGroup>>, surjections: Vec<Vec<usize>>, moduli: [i64; 3], places: Vec<PlaceSpec>) -> Result<TowerInstance> {
    let spec = TowerSpec { groups, surjections, moduli: moduli.iter().map(|&m| int(m)).collect(), places, allow_violations: false };
    Ok(TowerInstance { name: name.into(), tower: Tower::build(&spec)? })
}

fn place(first_level: usize, decomposition: Vec<Vec<usize>>) -> PlaceSpec {
    PlaceSpec { first_level, decomposition }
}

/// Three-level towers; in each the top map has decomposition groups containing its kernel.
pub fn towers() -> Result<Vec<TowerInstance>> {
    let mut out = Vec::new();
    let c248 = || vec![cyclic(2), cyclic(4), cyclic(8)];
    let s248 = || vec![reduce_mod(4, 2), reduce_mod(8, 4)];
    let full = |orders: &[usize]| place(0, orders.iter().map(|&k| (0..k).collect()).collect());

    out.push(tower("C2<C4<C8 late split", c248(), s248(), [2, 2, 2], vec![full(&[2, 4, 8]), place(0, vec![vec![0], vec![0], vec![0, 4]])])?);
    out.push(tower("C2<C4<C8 growing", c248(), s248(), [2, 2, 2], vec![full(&[2, 4, 8]), place(0, vec![vec![0], vec![0, 2], vec![0, 2, 4, 6]])])?);
    out.push(tower("C2<C4<C8 moduli 2,2,4", c248(), s248(), [2, 2, 4], vec![full(&[2, 4, 8]), place(0, vec![vec![0], vec![0], vec![0, 4]])])?);
    out.push(tower(
        "C2<C4<C8 three places",
        c248(),
        s248(),
        [2, 2, 2],
        vec![full(&[2, 4, 8]), place(0, vec![vec![0], vec![0, 2], vec![0, 2, 4, 6]]), place(0, vec![vec![0], vec![0], vec![0, 4]])],
    )?);
    out.push(tower("C2<C4<C8 late place", c248(), s248(), [2, 2, 2], vec![full(&[2, 4, 8]), place(1, vec![vec![0, 2], vec![0, 2, 4, 6]])])?);

    out.push(tower(
        "C3<C6<C12",
        vec![cyclic(3), cyclic(6), cyclic(12)],
        vec![reduce_mod(6, 3), reduce_mod(12, 6)],
        [2, 2, 2],
        vec![full(&[3, 6, 12]), place(0, vec![vec![0], vec![0], vec![0, 6]])],
    )?);
    out.push(tower(
        "C2<C6<C12",
        vec![cyclic(2), cyclic(6), cyclic(12)],
        vec![reduce_mod(6, 2), reduce_mod(12, 6)],
        [2, 2, 2],
        vec![full(&[2, 6, 12]), place(0, vec![vec![0], vec![0, 2, 4], vec![0, 2, 4, 6, 8, 10]])],
    )?);

    let c2 = FiniteGroup::cyclic(2);
    let v4 = product(&c2, &c2);
    let v8 = product(&v4, &c2);
    out.push(tower(
        "C2<C2xC2<C2xC2xC2",
        vec![cyclic(2), v4.clone(), v8.clone()],
        vec![first_factor(2, 2), first_factor(4, 2)],
        [2, 2, 2],
        vec![full(&[2, 4, 8]), place(0, vec![vec![0], vec![0], vec![0, 1]])],
    )?);
    out.push(tower(
        "C2<C2xC2<C2xC2xC2 two split",
        vec![cyclic(2), v4, v8],
        vec![first_factor(2, 2), first_factor(4, 2)],
        [2, 2, 2],
        vec![full(&[2, 4, 8]), place(0, vec![vec![0], vec![0, 1], vec![0, 1, 2, 3]]), place(0, vec![vec![0], vec![0], vec![0, 1]])],
    )?);

    let c4x2 = product(&FiniteGroup::cyclic(4), &c2);
    out.push(tower(
        "C2<C4<C4xC2",
        vec![cyclic(2), cyclic(4), c4x2],
        vec![reduce_mod(4, 2), first_factor(4, 2)],
        [2, 2, 2],
        vec![full(&[2, 4, 8]), place(0, vec![vec![0], vec![0], vec![0, 1]])],
    )?);

    let s3 = FiniteGroup::symmetric3();
    let even = cyclic_subgroup(&s3, 3);
    let sign: Vec<usize> = s3.elements().map(|x| usize::from(!even.contains(&x))).collect();
    let e = s3.identity();
    let s3x2 = product(&s3, &c2);
    out.push(tower(
        "C2<S3<S3xC2",
        vec![cyclic(2), Arc::new(s3), s3x2],
        vec![sign, first_factor(6, 2)],
        [2, 2, 2],
        vec![full(&[2, 6, 12]), place(0, vec![vec![0], vec![e], vec![2 * e, 2 * e + 1]])],
    )?);

    let c6x2 = product(&FiniteGroup::cyclic(6), &c2);
    out.push(tower(
        "C3<C6<C6xC2",
        vec![cyclic(3), cyclic(6), c6x2],
        vec![reduce_mod(6, 3), first_factor(6, 2)],
        [2, 2, 2],
        vec![full(&[3, 6, 12]), place(0, vec![vec![0], vec![0], vec![0, 1]])],
    )?);
    Ok(out)
}

pub struct PairInstance {
    pub name: String,
    pub pair: IsogenyPair,
    pub level: Level,
}

fn rep(g: &FiniteGroup, generator: &IntMatrix) -> Vec<IntMatrix> {
    // Cyclic groups only: element k acts by generator^k.
    let mut out = vec![IntMatrix::identity(generator.rows())];
    for _ in 1..g.order() {
        out.push(generator.mul(out.last().unwrap()));
    }
    out
}

fn scalar_action(signs: &[i64]) -> Vec<IntMatrix> {
    signs.iter().map(|&s| IntMatrix::from_rows(&[vec![s]])).collect()
}

fn permutation_action(g: &FiniteGroup, x: &GammaSet) -> Vec<IntMatrix> {
    g.elements()
        .map(|a| {
            let mut m = IntMatrix::zeros(x.size(), x.size());
            for p in 0..x.size() {
                m.set(x.act(a, p), p, int(1));
            }
            m
        })
        .collect()
}

fn basis(rows: &[&[i64]]) -> Vec<Vec<Int>> {
    rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

/// Isogeny pairs `Y ⊆ Ȳ`, each with a level satisfying condition (4).
pub fn pair_instances() -> Result<Vec<PairInstance>> {
    let mut out = Vec::new();
    let mut push = |name: &str, pair: IsogenyPair, decomposition: Vec<Vec<usize>>| -> Result<()> {
        let level = single_level(pair.group(), &decomposition, 2, false)?;
        out.push(PairInstance { name: name.into(), pair, level });
        Ok(())
    };
    let c2 = cyclic(2);
    let split = |g: &Arc<FiniteGroup>| vec![whole(g), trivial(g)];
    push("C2 sign, Y = 2Z", IsogenyPair::new(c2.clone(), scalar_action(&[1, -1]), basis(&[&[2]]))?, split(&c2))?;
    push("C2 trivial, Y = 2Z", IsogenyPair::new(c2.clone(), scalar_action(&[1, 1]), basis(&[&[2]]))?, split(&c2))?;
    push("C2 trivial, Y = 3Z", IsogenyPair::new(c2.clone(), scalar_action(&[1, 1]), basis(&[&[3]]))?, split(&c2))?;
    let swap = permutation_action(&c2, &GammaSet::regular(&c2));
    push("C2 swap, Y = even sum", IsogenyPair::new(c2.clone(), swap.clone(), basis(&[&[1, 1], &[2, 0]]))?, split(&c2))?;
    push("C2 swap, Y = 2Z^2", IsogenyPair::new(c2.clone(), swap, basis(&[&[2, 0], &[0, 2]]))?, split(&c2))?;
    let minus = vec![IntMatrix::identity(2), IntMatrix::from_rows(&[vec![-1, 0], vec![0, -1]])];
    push("C2 minus on Z^2, Y = 2Z+Z", IsogenyPair::new(c2.clone(), minus, basis(&[&[2, 0], &[0, 1]]))?, split(&c2))?;

    let c3 = cyclic(3);
    let zeta = IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]]);
    push("C3 Z[zeta], Y = (1-zeta)", IsogenyPair::new(c3.clone(), rep(&c3, &zeta), basis(&[&[1, -1], &[3, 0]]))?, split(&c3))?;
    push("C3 Z[zeta], Y = 2Z[zeta]", IsogenyPair::new(c3.clone(), rep(&c3, &zeta), basis(&[&[2, 0], &[0, 2]]))?, split(&c3))?;
    let perm3 = permutation_action(&c3, &GammaSet::regular(&c3));
    push("C3 Z[C3], Y = sum in 3Z", IsogenyPair::new(c3.clone(), perm3, basis(&[&[1, -1, 0], &[0, 1, -1], &[3, 0, 0]]))?, split(&c3))?;

    let c4 = cyclic(4);
    let i = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]);
    push("C4 Z[i], Y = (1+i)", IsogenyPair::new(c4.clone(), rep(&c4, &i), basis(&[&[1, 1], &[2, 0]]))?, split(&c4))?;
    push("C4 Z[i], Y = 2Z[i]", IsogenyPair::new(c4.clone(), rep(&c4, &i), basis(&[&[2, 0], &[0, 2]]))?, split(&c4))?;
    push("C4 sign, Y = 2Z", IsogenyPair::new(c4.clone(), scalar_action(&[1, -1, 1, -1]), basis(&[&[2]]))?, split(&c4))?;
    push("C4 sign, Y = 4Z", IsogenyPair::new(c4.clone(), scalar_action(&[1, -1, 1, -1]), basis(&[&[4]]))?, split(&c4))?;

    let v4 = Arc::new(FiniteGroup::klein());
    let h = v4.closure(&[1]);
    push("V4 character, Y = 2Z", IsogenyPair::new(v4.clone(), scalar_action(&character(&v4, &h)), basis(&[&[2]]))?, split(&v4))?;
    let h2 = v4.closure(&[2]);
    let both: Vec<IntMatrix> = v4
        .elements()
        .map(|a| {
            let s = |hh: &[usize]| if hh.contains(&a) { 1 } else { -1 };
            IntMatrix::from_rows(&[vec![s(&h), 0], vec![0, s(&h2)]])
        })
        .collect();
    push("V4 two characters, Y = 2Z^2", IsogenyPair::new(v4.clone(), both, basis(&[&[2, 0], &[0, 2]]))?, split(&v4))?;

    let s3 = Arc::new(FiniteGroup::symmetric3());
    let (all, c3s, c2s) = (whole(&s3), cyclic_subgroup(&s3, 3), cyclic_subgroup(&s3, 2));
    push("S3 sign, Y = 2Z", IsogenyPair::new(s3.clone(), scalar_action(&character(&s3, &c3s)), basis(&[&[2]]))?, vec![all.clone(), c3s.clone()])?;
    let x = GammaSet::left_cosets(&s3, &c2s)?;
    let perm = permutation_action(&s3, &x);
    push("S3 on Z^3, Y = even sum", IsogenyPair::new(s3.clone(), perm, basis(&[&[1, 1, 0], &[0, 1, 1], &[2, 0, 0]]))?, vec![all, c2s])?;

    let d4 = Arc::new(FiniteGroup::dihedral(4));
    let rot = cyclic_subgroup(&d4, 4);
    push("D4 sign, Y = 2Z", IsogenyPair::new(d4.clone(), scalar_action(&character(&d4, &rot)), basis(&[&[2]]))?, vec![whole(&d4), rot])?;
    Ok(out)
}

fn lattice(g: &Arc<FiniteGroup>, action: Vec<IntMatrix>) -> Result<GammaModule> {
    GammaModule::lattice(g.clone(), action)
}

fn complex(d0: &GammaModule, d1: &GammaModule, f: &IntMatrix) -> Result<LatticeComplex> {
    LatticeComplex::new(d0.clone(), d1.clone(), f.clone())
}

fn scalar(k: i64) -> IntMatrix {
    IntMatrix::from_rows(&[vec![k]])
}

fn sum_row(k: usize) -> IntMatrix {
    IntMatrix::from_rows(&[vec![1; k]])
}

fn diagonal_column(k: usize) -> IntMatrix {
    IntMatrix::from_rows(&vec![vec![1]; k])
}

pub struct ComplexInstance {
    pub name: String,
    pub complex: LatticeComplex,
    pub isogeny: bool,
}

/// Two-term lattice complexes over C2, C3, C4, C2×C2 and S3.
pub fn lattice_complexes() -> Result<Vec<ComplexInstance>> {
    let mut out = Vec::new();
    let mut push = |name: &str, complex: LatticeComplex| {
        let isogeny = complex.is_isogeny();
        out.push(ComplexInstance { name: name.into(), complex, isogeny });
    };
    let trivial_lattice = |g: &Arc<FiniteGroup>, r: usize| lattice(g, vec![IntMatrix::identity(r); g.order()]);

    let c2 = cyclic(2);
    let sign2 = GammaModule::sign_lattice(c2.clone(), &[1, -1])?;
    let triv2 = trivial_lattice(&c2, 1)?;
    let reg2 = GammaModule::permutation_lattice(c2.clone(), &GammaSet::regular(&c2));
    push("C2 sign x2", complex(&sign2, &sign2, &scalar(2))?);
    push("C2 trivial x2", complex(&triv2, &triv2, &scalar(2))?);
    push("C2 Z[C2] sum", complex(&reg2, &triv2, &sum_row(2))?);
    push("C2 diagonal into Z[C2]", complex(&triv2, &reg2, &diagonal_column(2))?);

    let c3 = cyclic(3);
    let triv3 = trivial_lattice(&c3, 1)?;
    let reg3 = GammaModule::permutation_lattice(c3.clone(), &GammaSet::regular(&c3));
    let zeta = IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]]);
    let rot3 = lattice(&c3, rep(&c3, &zeta))?;
    push("C3 Z[C3] sum", complex(&reg3, &triv3, &sum_row(3))?);
    push("C3 diagonal into Z[C3]", complex(&triv3, &reg3, &diagonal_column(3))?);
    push("C3 Z[zeta] by 1-zeta", complex(&rot3, &rot3, &IntMatrix::identity(2).sub(&zeta))?);
    push("C3 trivial x3", complex(&triv3, &triv3, &scalar(3))?);

    let c4 = cyclic(4);
    let i = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]);
    let rot4 = lattice(&c4, rep(&c4, &i))?;
    let sign4 = GammaModule::sign_lattice(c4.clone(), &[1, -1, 1, -1])?;
    let reg4 = GammaModule::permutation_lattice(c4.clone(), &GammaSet::regular(&c4));
    push("C4 Z[i] by 1+i", complex(&rot4, &rot4, &IntMatrix::identity(2).add(&i))?);
    push("C4 sign x2", complex(&sign4, &sign4, &scalar(2))?);
    push("C4 Z[C4] sum", complex(&reg4, &trivial_lattice(&c4, 1)?, &sum_row(4))?);

    let v4 = Arc::new(FiniteGroup::klein());
    let h = v4.closure(&[1]);
    let signv = GammaModule::sign_lattice(v4.clone(), &character(&v4, &h))?;
    let regv = GammaModule::permutation_lattice(v4.clone(), &GammaSet::regular(&v4));
    push("V4 character x2", complex(&signv, &signv, &scalar(2))?);
    push("V4 Z[V4] sum", complex(&regv, &trivial_lattice(&v4, 1)?, &sum_row(4))?);

    let s3 = Arc::new(FiniteGroup::symmetric3());
    let c3s = cyclic_subgroup(&s3, 3);
    let signs = GammaModule::sign_lattice(s3.clone(), &character(&s3, &c3s))?;
    let x = GammaSet::left_cosets(&s3, &cyclic_subgroup(&s3, 2))?;
    let perm = GammaModule::permutation_lattice(s3.clone(), &x);
    push("S3 sign x2", complex(&signs, &signs, &scalar(2))?);
    push("S3 Z^3 sum", complex(&perm, &trivial_lattice(&s3, 1)?, &sum_row(3))?);
    Ok(out)
}

/// `(Γ, X, A)` triples for the Shapiro decomposition; degrees are added by the caller.
pub fn shapiro_instances() -> Result<Vec<(String, GammaSet, GammaModule)>> {
    let mut out = Vec::new();
    let c2 = cyclic(2);
    let c3 = cyclic(3);
    let s3 = Arc::new(FiniteGroup::symmetric3());
    let v4 = Arc::new(FiniteGroup::klein());
    let z = |g: &Arc<FiniteGroup>| lattice(g, vec![IntMatrix::identity(1); g.order()]);
    let reg2 = GammaSet::regular(&c2);
    let two_orbits = reg2.disjoint_union(&GammaSet::fixed_points(&c2, 1));
    out.push(("C2 regular, Z".to_string(), reg2.clone(), z(&c2)?));
    out.push(("C2 regular+point, Z".to_string(), two_orbits.clone(), z(&c2)?));
    out.push(("C2 regular+point, sign".to_string(), two_orbits, GammaModule::sign_lattice(c2.clone(), &[1, -1])?));
    out.push(("C3 point, Z/3".to_string(), GammaSet::fixed_points(&c3, 1), finite(&c3, 3)));
    out.push(("C3 regular+point, Z".to_string(), GammaSet::regular(&c3).disjoint_union(&GammaSet::fixed_points(&c3, 1)), z(&c3)?));
    out.push(("S3 cosets of C2, Z".to_string(), GammaSet::left_cosets(&s3, &cyclic_subgroup(&s3, 2))?, z(&s3)?));
    out.push(("S3 cosets of C3, Z/2".to_string(), GammaSet::left_cosets(&s3, &cyclic_subgroup(&s3, 3))?, finite(&s3, 2)));
    out.push(("V4 cosets of C2, Z".to_string(), GammaSet::left_cosets(&v4, &v4.closure(&[1]))?, z(&v4)?));
    Ok(out)
}
