use std::sync::Arc;

use proptest::prelude::*;

use rigidform::complexes::{hypercohomology, LatticeComplex};
use rigidform::galois::{augmentation_kernel, induced_module, FiniteGroup, GammaModule, GammaSet, ModuleMap};
use rigidform::rigid::{psi_compatible, psi_map};
use rigidform::suite::corpus;
use rigidform::tate::{long_exact_sequence_check, shapiro_decompose, tate_cohomology, ShortExact};
use rigidform::znf::int::{self, int};
use rigidform::znf::{dual_group, smith_normal_form, smith_normal_form_with, AbGroup, Int, IntMatrix, Morphism, SnfStrategy};

fn matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r).prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Gcd of all k×k minors, by cofactor expansion.
fn determinantal_divisor(a: &IntMatrix, k: usize) -> Int {
    let mut g = int(0);
    for rows in combinations(a.rows(), k) {
        for cols in combinations(a.cols(), k) {
            g = int::gcd(&g, &a.select_rows(&rows).select_cols(&cols).determinant());
        }
    }
    g
}

fn small_group(i: usize) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::named(["C2", "C3", "C4", "C2xC2", "S3"][i]).unwrap())
}

/// Lattices over a small group: trivial rank one, a sign lattice when an
/// index-two subgroup exists, a coset permutation lattice, or the regular one.
fn lattice(g: &Arc<FiniteGroup>, kind: usize, pick: usize) -> GammaModule {
    let proper: Vec<Vec<usize>> = g.subgroups().into_iter().filter(|h| h.len() < g.order()).collect();
    let index_two: Vec<&Vec<usize>> = proper.iter().filter(|h| 2 * h.len() == g.order()).collect();
    match kind {
        1 if !index_two.is_empty() => {
            let chi = corpus::character(g, index_two[pick % index_two.len()]);
            GammaModule::sign_lattice(g.clone(), &chi).unwrap()
        }
        2 => {
            let h = &proper[pick % proper.len()];
            GammaModule::permutation_lattice(g.clone(), &GammaSet::left_cosets(g, h).unwrap())
        }
        3 => GammaModule::permutation_lattice(g.clone(), &GammaSet::regular(g)),
        _ => GammaModule::trivial_action(g.clone(), Arc::new(AbGroup::free(1))),
    }
}

fn gset(g: &Arc<FiniteGroup>, picks: &[usize]) -> GammaSet {
    let subs = g.subgroups();
    let mut x = GammaSet::left_cosets(g, &subs[picks[0] % subs.len()]).unwrap();
    for p in &picks[1..] {
        x = x.disjoint_union(&GammaSet::left_cosets(g, &subs[p % subs.len()]).unwrap());
    }
    x
}

fn scalar_map(m: &GammaModule, k: i64) -> ModuleMap {
    let d = m.ambient_dim();
    ModuleMap::from_matrix(m.clone(), m.clone(), &IntMatrix::identity(d).scale(&int(k))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_is_a_unimodular_diagonalisation(a in matrix(6, 6, 30)) {
        let mut diagonals = Vec::new();
        for strategy in [SnfStrategy::MinPivot, SnfStrategy::AlternatingHermite] {
            let s = smith_normal_form_with(&a, strategy);
            prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
            prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
            prop_assert!(s.d.is_diagonal());
            let d = s.diagonal();
            for w in d.windows(2) {
                prop_assert!(!int::is_neg(&w[0]) && int::divides(&w[0], &w[1]), "{:?}", d);
            }
            diagonals.push(d);
        }
        prop_assert_eq!(&diagonals[0], &diagonals[1]);
    }

    #[test]
    fn snf_products_are_determinantal_divisors(a in matrix(4, 4, 12)) {
        let d = smith_normal_form(&a).diagonal();
        let mut product = int(1);
        for k in 1..=d.len() {
            product *= &d[k - 1];
            prop_assert_eq!(&product, &determinantal_divisor(&a, k), "k = {}", k);
        }
    }

    #[test]
    fn kernel_and_image_orders_multiply(
        src in prop::collection::vec(1i64..=12, 1..=3),
        tgt in prop::collection::vec(1i64..=12, 1..=3),
        coeffs in prop::collection::vec(-5i64..=5, 9),
    ) {
        let source = Arc::new(AbGroup::diagonal(&src.iter().map(|&m| int(m)).collect::<Vec<_>>()));
        let target = Arc::new(AbGroup::diagonal(&tgt.iter().map(|&m| int(m)).collect::<Vec<_>>()));
        // Scale each coordinate so that the image of a generator of order a lands in the a-torsion.
        let images: Vec<Vec<Int>> = src
            .iter()
            .enumerate()
            .map(|(i, &a)| tgt.iter().enumerate().map(|(j, &b)| int(coeffs[3 * i + j] * (b / num_gcd(a, b)))).collect())
            .collect();
        let f = Morphism::from_images(source.clone(), target, images).unwrap();
        let product = f.kernel().order().unwrap() * f.image().order().unwrap();
        prop_assert_eq!(product, source.order().unwrap());
    }

    #[test]
    fn double_dual_evaluation_is_an_isomorphism(moduli in prop::collection::vec(1i64..=6, 1..=3)) {
        let a = Arc::new(AbGroup::diagonal(&moduli.iter().map(|&m| int(m)).collect::<Vec<_>>()));
        let dual = dual_group(a.clone()).unwrap();
        let (dd, ev) = dual.double_dual().unwrap();
        prop_assert!(ev.is_isomorphism());
        let chars = dual.group.enumerate_elements(256).unwrap();
        for x in a.enumerate_elements(256).unwrap() {
            let e = ev.apply(&x).unwrap();
            for chi in &chars {
                prop_assert_eq!(dd.pair(&e, chi), dual.pair(chi, &x));
            }
        }
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { num_gcd(b, a % b) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_order_kills_tate_cohomology(gi in 0usize..5, kind in 0usize..4, pick in 0usize..8, degree in -1i32..=2) {
        let g = small_group(gi);
        let m = lattice(&g, kind, pick);
        let h = tate_cohomology(&m, degree).unwrap();
        let exponent = h.group().exponent().unwrap();
        prop_assert!(int::divides(&exponent, &int(g.order() as i64)), "{} on {}", exponent, g.name());
    }

    #[test]
    fn cyclic_cohomology_has_period_two(n in 2usize..=4, kind in 0usize..4, pick in 0usize..8, degree in -1i32..=1) {
        let g = corpus::cyclic(n);
        let m = lattice(&g, kind, pick);
        let low = tate_cohomology(&m, degree).unwrap();
        let high = tate_cohomology(&m, degree + 2).unwrap();
        prop_assert_eq!(low.invariants(), high.invariants());
    }

    #[test]
    fn augmentation_ideal_lies_in_norm_kernel(gi in 0usize..5, kind in 0usize..4, pick in 0usize..8) {
        let m = lattice(&small_group(gi), kind, pick);
        prop_assert!(m.augmentation_submodule().is_subgroup_of(&m.norm_kernel()));
    }

    #[test]
    fn augmentation_kernel_has_index_a(gi in 0usize..5, picks in prop::collection::vec(0usize..8, 1..=2), n in 2i64..=6) {
        let g = small_group(gi);
        let a = GammaModule::trivial_action(g.clone(), Arc::new(AbGroup::cyclic(n)));
        let ind = induced_module(&gset(&g, &picks), &a);
        let kernel = augmentation_kernel(&ind);
        let lhs = kernel.underlying().order().unwrap() * a.underlying().order().unwrap();
        prop_assert_eq!(lhs, ind.module.underlying().order().unwrap());
    }

    #[test]
    fn shapiro_is_a_bijection(gi in 0usize..5, picks in prop::collection::vec(0usize..8, 1..=2), n in 2i64..=4, degree in -1i32..=1) {
        let g = small_group(gi);
        let a = GammaModule::trivial_action(g.clone(), Arc::new(AbGroup::cyclic(n)));
        let iso = shapiro_decompose(&gset(&g, &picks), &a, degree).unwrap();
        prop_assert_eq!(iso.global.order(), iso.sum.order());
        prop_assert!(iso.forward.is_isomorphism());
        let round = iso.forward.compose(&iso.backward).unwrap();
        prop_assert!(round.agrees_with(&Morphism::identity(iso.global.group().clone())));
    }

    #[test]
    fn induced_maps_are_functorial(gi in 0usize..5, kind in 0usize..4, pick in 0usize..8, picks in prop::collection::vec(0usize..8, 1..=2), a in -3i64..=3, b in -3i64..=3) {
        let g = small_group(gi);
        let m = lattice(&g, kind, pick);
        let ind = induced_module(&gset(&g, &picks), &m);
        let (f, h) = (scalar_map(&m, a), scalar_map(&m, b));
        let composite = ind.induced_map(&ind, &f.compose(&h).unwrap()).unwrap();
        let stepwise = ind.induced_map(&ind, &f).unwrap().compose(&ind.induced_map(&ind, &h).unwrap()).unwrap();
        prop_assert!(composite.map.agrees_with(&stepwise.map));
        let id = ind.induced_map(&ind, &ModuleMap::identity(&m)).unwrap();
        prop_assert!(id.map.agrees_with(&Morphism::identity(ind.module.underlying().clone())));
    }

    #[test]
    fn multiplication_sequences_are_exact(gi in 0usize..4, kind in 0usize..3, pick in 0usize..8, n in 2i64..=4) {
        // 0 → L →(×n) L → L/n → 0, whose long exact sequence must be exact everywhere.
        let m = lattice(&small_group(gi), kind, pick);
        let quotient = m.mod_n(&int(n)).unwrap();
        let d = m.ambient_dim();
        let p = ModuleMap::from_matrix(m.clone(), quotient, &IntMatrix::identity(d)).unwrap();
        let ses = ShortExact::new(scalar_map(&m, n), p).unwrap();
        for node in long_exact_sequence_check(&ses).unwrap() {
            prop_assert!(node.exact, "{}: {:?}", node.label, node.witness);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn acyclic_summands_leave_hypercohomology_unchanged(gi in 0usize..2, kind in 0usize..3, pick in 0usize..8, k in 1i64..=3) {
        let g = small_group(gi);
        let m = lattice(&g, kind, pick);
        let d = m.ambient_dim();
        let c = LatticeComplex::new(m.clone(), m, IntMatrix::identity(d).scale(&int(k))).unwrap();
        let regular = GammaModule::permutation_lattice(g.clone(), &GammaSet::regular(&g));
        let bigger = c.with_acyclic_summand(&regular).unwrap();
        for r in 0..=2 {
            let (small, large) = (hypercohomology(&c, r).unwrap(), hypercohomology(&bigger, r).unwrap());
            prop_assert_eq!(small.invariants(), large.invariants());
        }
    }

    #[test]
    fn psi_is_compatible_with_raising_the_modulus(gi in 0usize..5, picks in prop::collection::vec(0usize..8, 0..=2), d in 2i64..=4, k in 1i64..=3) {
        let g = small_group(gi);
        let subs = g.subgroups();
        let mut decomposition = vec![corpus::whole(&g)];
        decomposition.extend(picks.iter().map(|p| subs[p % subs.len()].clone()));
        let n = d;
        let small = corpus::single_level(&g, &decomposition, n, false).unwrap();
        let large = corpus::single_level(&g, &decomposition, n * k, false).unwrap();
        let a = GammaModule::trivial_action(g.clone(), Arc::new(AbGroup::cyclic(d)));
        prop_assert!(psi_compatible(&psi_map(&small, &a).unwrap(), &psi_map(&large, &a).unwrap()).unwrap());
    }
}
