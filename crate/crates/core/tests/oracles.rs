//! Library results checked against brute-force enumeration or closed forms
//! computed independently in the test.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rigidform::complexes::{ker1_locus, HyperModel, LatticeComplex, ModularComplex};
use rigidform::galois::{
    check_place_conditions, ArithmeticFlags, FiniteGroup, GammaModule, GammaSet, LevelLabel, PlaceSystem,
};
use rigidform::rigid::{ybar_group, IsogenyPair, Level};
use rigidform::suite::corpus;
use rigidform::tate::tate_cohomology;
use rigidform::znf::int::{int, Int};
use rigidform::znf::{AbGroup, IntMatrix};

fn small(v: &[Int]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).unwrap()).collect()
}

fn big(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

fn lattice(g: &Arc<FiniteGroup>, rank: usize) -> GammaModule {
    GammaModule::trivial_action(g.clone(), Arc::new(AbGroup::free(rank)))
}

#[test]
fn v4_ker1_locus_matches_enumeration() {
    // T = U = ℤ with f = 0, so H^r = H^r(Γ, ℤ) ⊕ H^{r−1}(Γ, ℤ).
    // H^3(V4, ℤ) = ℤ/2 restricts to zero on every cyclic subgroup, while
    // H^2(V4, ℤ) = Hom(V4, ℚ/ℤ) is detected by them.
    let g = Arc::new(FiniteGroup::klein());
    let c = LatticeComplex::new(lattice(&g, 1), lattice(&g, 1), IntMatrix::zeros(1, 1)).unwrap();
    let family: Vec<Vec<usize>> = g.elements().filter(|&a| a != g.identity()).map(|a| g.closure(&[a])).collect();
    assert_eq!(family.len(), 3);
    let model = HyperModel::new(&ModularComplex { base: c.clone(), modulus: None }, 3).unwrap();
    for (r, expected) in [(2, 1), (3, 2)] {
        let h = model.hypercohomology(r).unwrap();
        assert!(!h.is_trivial(), "H^{r} should be nontrivial");
        let restrictions: Vec<_> =
            family.iter().map(|elems| model.restriction(&g.subgroup(elems).unwrap(), r).unwrap().1).collect();
        let brute = h
            .enumerate_elements(4096)
            .unwrap()
            .iter()
            .filter(|x| restrictions.iter().all(|m| m.target().is_zero_elem(&m.apply(x).unwrap())))
            .count();
        let locus = ker1_locus(&c, &family, r).unwrap();
        assert_eq!(brute, expected, "degree {r}");
        assert_eq!(locus.order_u64(), Some(brute as u64), "degree {r}");
    }
}

/// `D ∩ box`, reached from 0 by adding or subtracting generators inside the box.
fn lattice_points(gens: &[Vec<i64>], bound: i64) -> HashSet<Vec<i64>> {
    let dim = gens.first().map_or(0, Vec::len);
    let mut seen = HashSet::from([vec![0; dim]]);
    let mut queue = VecDeque::from([vec![0; dim]]);
    while let Some(v) = queue.pop_front() {
        for g in gens {
            for s in [1, -1] {
                let w: Vec<i64> = v.iter().zip(g).map(|(a, b)| a + s * b).collect();
                if w.iter().all(|x| x.abs() <= bound) && seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
    }
    seen
}

fn all_vectors(dim: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|p| (-bound..=bound).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Sign lattices on inert places have vanishing norm, so these groups are
/// nontrivial: with two inert places and `Y = kℤ` the class of `(a, −a)` is
/// taken modulo `2k`.
fn inert_sign_instances() -> Vec<(String, IsogenyPair, Level, Option<u64>)> {
    let mut out = Vec::new();
    for (n, places, k, expected) in [(2, 2, 2, 4), (2, 2, 1, 2), (2, 3, 2, 16), (4, 2, 2, 4)] {
        let g = corpus::cyclic(n);
        let h = corpus::cyclic_subgroup(&g, n / 2);
        let chi = corpus::character(&g, &h);
        let action: Vec<IntMatrix> = chi.iter().map(|&c| IntMatrix::from_rows(&[vec![c]])).collect();
        let pair = IsogenyPair::new(g.clone(), action, vec![vec![int(k)]]).unwrap();
        let level = corpus::single_level(&g, &vec![corpus::whole(&g); places], 2 * k, false).unwrap();
        out.push((format!("C{n} sign, {places} inert, Y = {k}Z"), pair, level, Some(expected)));
    }
    out
}

#[test]
fn ybar_orders_match_box_enumeration() {
    // Norm-killed elements of Ȳ[S,Ṡ]_0 in a box, counted modulo I·Y[S]_0,
    // with every condition written out from the definitions.
    let mut checked = 0;
    let corpus_cases = corpus::pair_instances().unwrap().into_iter().map(|i| (i.name, i.pair, i.level, None));
    for (name, pair, level, expected) in corpus_cases.chain(inert_sign_instances()) {
        let (pair, level) = (&pair, &level);
        let r = pair.rank();
        let s = level.num_places();
        let dim = r * s;
        if dim > 3 {
            continue;
        }
        let g = level.group();
        let places = level.places();
        let act = |x: usize, v: &[i64]| -> Vec<i64> {
            let rho = pair.ybar.matrix(x);
            let mut out = vec![0; dim];
            for w in 0..s {
                let moved = small(&rho.mul_vec(&big(&v[w * r..(w + 1) * r])));
                let gw = places.act(x, w);
                out[gw * r..(gw + 1) * r].copy_from_slice(&moved);
            }
            out
        };
        let sum_zero = |v: &[i64]| (0..r).all(|i| (0..s).map(|w| v[w * r + i]).sum::<i64>() == 0);
        let in_y = |v: &[i64], w: usize| pair.in_y(&big(&v[w * r..(w + 1) * r]));

        // I·Y[S]_0 is spanned by (γ − 1)y with y = b·e_w − b·e_0, b a basis vector of Y.
        let mut gens = Vec::new();
        for x in g.elements() {
            for w in 1..s {
                for b in &pair.y_basis {
                    let mut y = vec![0; dim];
                    for i in 0..r {
                        y[w * r + i] += i64::try_from(&b[i]).unwrap();
                        y[i] -= i64::try_from(&b[i]).unwrap();
                    }
                    let d: Vec<i64> = act(x, &y).iter().zip(&y).map(|(a, b)| a - b).collect();
                    if d.iter().any(|&e| e != 0) {
                        gens.push(d);
                    }
                }
            }
        }
        let bound = 6;
        let denominators = lattice_points(&gens, 4 * bound);
        let mut reps: Vec<Vec<i64>> = Vec::new();
        for v in all_vectors(dim, bound) {
            let norm = g.elements().map(|x| act(x, &v)).fold(vec![0; dim], |acc, w| acc.iter().zip(&w).map(|(a, b)| a + b).collect());
            let admissible = sum_zero(&v)
                && norm.iter().all(|&x| x == 0)
                && (0..s).filter(|&w| !level.system.is_dotted(w)).all(|w| in_y(&v, w));
            if !admissible {
                continue;
            }
            let known = reps.iter().any(|rep| {
                let d: Vec<i64> = v.iter().zip(rep).map(|(a, b)| a - b).collect();
                denominators.contains(&d)
            });
            if !known {
                reps.push(v);
            }
        }
        let computed = ybar_group(pair, level).unwrap();
        assert_eq!(computed.group.order_u64(), Some(reps.len() as u64), "{name}");
        if let Some(e) = expected {
            assert_eq!(reps.len() as u64, e, "{name}");
        }
        checked += 1;
    }
    assert!(checked >= 9, "only {checked} small instances");
}

#[test]
fn s3_condition_four_over_all_sections() {
    let g = Arc::new(FiniteGroup::symmetric3());
    let c2 = g.closure(&[g.elements().find(|&a| g.element_order(a) == 2).unwrap()]);
    let fixed = GammaSet::fixed_points(&g, 1);
    let three = GammaSet::left_cosets(&g, &c2).unwrap();
    let regular = GammaSet::regular(&g);
    let label = LevelLabel { field: "E".into(), places: "S".into(), modulus: int(2) };
    for with_fixed in [true, false] {
        let x = if with_fixed { fixed.disjoint_union(&three).disjoint_union(&regular) } else { three.disjoint_union(&regular) };
        let orbits = x.orbits();
        // Every choice of one point per orbit.
        let mut sections = vec![vec![]];
        for o in &orbits {
            sections = sections.into_iter().flat_map(|p: Vec<usize>| o.iter().map(move |&v| [p.clone(), vec![v]].concat())).collect();
        }
        for section in sections {
            let expected = g.elements().all(|sigma| section.iter().any(|&v| x.act(sigma, v) == v));
            assert_eq!(expected, with_fixed);
            let p = PlaceSystem::new(g.clone(), x.clone(), section.clone(), ArithmeticFlags::default(), label.clone()).unwrap();
            assert_eq!(check_place_conditions(&p).every_element_fixes_dotted, expected, "{section:?}");
        }
    }
}

#[test]
fn s3_regular_restricts_to_three_regular_c2_modules() {
    let g = Arc::new(FiniteGroup::symmetric3());
    let t = g.elements().find(|&a| g.element_order(a) == 2).unwrap();
    let sub = g.subgroup(&g.closure(&[g.identity(), t])).unwrap();
    let regular = GammaSet::regular(&g).restrict(&sub);
    let orbits = regular.orbits();
    assert_eq!(orbits.len(), 3);
    assert!(orbits.iter().all(|o| o.len() == 2));
    let restricted = GammaModule::permutation_lattice(g.clone(), &GammaSet::regular(&g)).restrict(&sub);
    let c2 = Arc::new(sub.group.clone());
    let copy = GammaSet::regular(&c2);
    let three = GammaModule::permutation_lattice(c2.clone(), &copy.disjoint_union(&copy).disjoint_union(&copy));
    for degree in -1..=2 {
        let a = tate_cohomology(&restricted, degree).unwrap();
        let b = tate_cohomology(&three, degree).unwrap();
        assert!(a.is_trivial() && b.is_trivial(), "degree {degree}");
    }
    // The two modules agree up to a permutation of coordinates: same character.
    for (i, &x) in sub.elements.iter().enumerate() {
        let trace = |m: &IntMatrix| (0..m.rows()).map(|k| m.get(k, k).clone()).fold(int(0), |a, b| a + b);
        assert_eq!(trace(restricted.matrix(i)), trace(three.matrix(i)), "element {x}");
    }
}

#[test]
fn c3_multiplication_complexes_match_quotient_cohomology() {
    // T = U = ℤ[ζ₃] and f = a + bζ: the complex is quasi-isomorphic to
    // ℤ[ζ₃]/(a + bζ) placed in degree 1, so H^r = Ĥ^{r−1}(C3, ℤ[ζ₃]/(a + bζ)) for r ≥ 2.
    let g = Arc::new(FiniteGroup::cyclic(3));
    let zeta = IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]]);
    let t = GammaModule::from_generators(g.clone(), Arc::new(AbGroup::free(2)), &[(1, zeta.clone())]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 6 {
        let (a, b) = (rng.gen_range(-3..=3i64), rng.gen_range(-3..=3i64));
        if a == 0 && b == 0 {
            continue;
        }
        let f = IntMatrix::identity(2).scale(&int(a)).add(&zeta.scale(&int(b)));
        let c = LatticeComplex::new(t.clone(), t.clone(), f.clone()).unwrap();
        let model = HyperModel::new(&ModularComplex { base: c, modulus: None }, 3).unwrap();
        let les = model.les1().unwrap();
        assert!(les.exact(), "a={a} b={b}: {les:?}");
        let q = t.quotient(&f.columns()).unwrap();
        for r in 2..=3 {
            let h = model.hypercohomology(r).unwrap();
            let expected = tate_cohomology(&q, r as i32 - 1).unwrap();
            assert_eq!(h.order(), expected.order(), "a={a} b={b} r={r}");
        }
        done += 1;
    }
}

#[test]
fn inert_localization_reads_the_dotted_coefficient() {
    for inst in corpus::pair_instances().unwrap() {
        let level = &inst.level;
        let g = ybar_group(&inst.pair, level).unwrap();
        let r = g.rank();
        for &v in level.section() {
            let d = rigidform::galois::DecompositionData::new(&level.system, v).unwrap();
            if d.stabilizer.order() != level.group().order() {
                continue;
            }
            let l = g.l_v(&d).unwrap();
            for x in g.group.generators() {
                let direct = x[v * r..(v + 1) * r].to_vec();
                assert!(l.target().elems_equal(&l.apply(&x).unwrap(), &direct), "{} place {v}", inst.name);
            }
        }
    }
}
