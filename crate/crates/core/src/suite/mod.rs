//! The acceptance suite: one check per criterion, run over the bundled corpus.

pub mod corpus;

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complexes::{les_check, order_comparison, stabilization_audit, DualModel, HyperModel, LesKind, ModularComplex};
use crate::galois::{check_place_conditions, DecompositionData, FiniteGroup, GammaModule};
use crate::rigid::{companion_transition, level_sequence, level_transition, psi_map, sigma_exactness, ybar_group};
use crate::tate::{shapiro_decompose, CechDictionary};
use crate::znf::int::{self, int, Int};
use crate::znf::{smith_normal_form_with, AbGroup, IntMatrix, SnfStrategy};
use crate::Result;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Largest group enumerated exhaustively.
    pub budget: u64,
    pub fail_fast: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 1, budget: 512, fail_fast: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    /// Instances that were checked, against the number required.
    pub instances: usize,
    pub required: usize,
    /// First failing instance with its witness, or a summary.
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} {}: {} ({}/{} instances, {:.2}s of {}s) {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.instances,
            self.required,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

/// Collects per-instance outcomes for one criterion.
struct Tally {
    checked: usize,
    failure: Option<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checked: 0, failure: None, notes: Vec::new() }
    }

    fn record(&mut self, name: &str, outcome: Result<std::result::Result<(), String>>) {
        self.checked += 1;
        let msg = match outcome {
            Ok(Ok(())) => return,
            Ok(Err(w)) => format!("{name}: {w}"),
            Err(e) => format!("{name}: {e}"),
        };
        if self.failure.is_none() {
            self.failure = Some(msg);
        }
    }
}

fn check(ok: bool, witness: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

pub const CRITERIA: [(u8, &str, usize, u64); 9] = [
    (1, "Psi isomorphism", 25, 60),
    (2, "transition coherence", 10, 30),
    (3, "localization well-definedness", 20, 60),
    (4, "torsion characterization", 15, 60),
    (5, "Sigma exactness", 10, 120),
    (6, "hypercohomology sequences", 15, 60),
    (7, "dual-model comparisons", 1, 60),
    (8, "foundations", 3, 60),
    (9, "negative controls", 1, 10),
];

pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> CriterionResult {
    let (_, title, required, limit) = *CRITERIA.iter().find(|c| c.0 == id).expect("criterion id in 1..=9");
    let start = Instant::now();
    let tally = match id {
        1 => psi_criterion(),
        2 => transition_criterion(),
        3 => localization_criterion(),
        4 => torsion_criterion(),
        5 => sigma_criterion(cfg),
        6 => sequences_criterion(),
        7 => dual_criterion(),
        8 => foundations_criterion(cfg),
        _ => negative_criterion(),
    };
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit);
    let (tally, setup) = match tally {
        Ok(t) => (t, None),
        Err(e) => (Tally::new(), Some(format!("corpus construction failed: {e}"))),
    };
    let enough = tally.checked >= required;
    let in_time = elapsed <= limit;
    let passed = setup.is_none() && tally.failure.is_none() && enough && in_time;
    let detail = if let Some(s) = setup {
        s
    } else if let Some(f) = tally.failure {
        f
    } else if !enough {
        format!("only {} instances checked", tally.checked)
    } else if !in_time {
        "time limit exceeded".into()
    } else {
        tally.notes.join("; ")
    };
    CriterionResult { id, title: title.into(), passed, instances: tally.checked, required, detail, elapsed, limit }
}

pub fn run_suite(cfg: &SuiteConfig) -> Vec<CriterionResult> {
    let mut out = Vec::new();
    for (id, ..) in CRITERIA {
        let r = run_criterion(id, cfg);
        let stop = cfg.fail_fast && !r.passed;
        out.push(r);
        if stop {
            break;
        }
    }
    out
}

fn psi_criterion() -> Result<Tally> {
    let mut t = Tally::new();
    for inst in corpus::psi_instances()? {
        let outcome = psi_map(&inst.level, &inst.module).and_then(|p| p.report()).map(|r| check(r.all_ok(), || format!("{r:?}")));
        t.record(&inst.name, outcome);
    }
    Ok(t)
}

fn transition_criterion() -> Result<Tally> {
    let mut t = Tally::new();
    let mut triggered = 0;
    for inst in corpus::towers()? {
        let tower = &inst.tower;
        let outcome = (|| -> Result<std::result::Result<(), String>> {
            let a = level_transition(&tower.maps[0])?;
            let b = level_transition(&tower.maps[1])?;
            let c = level_transition(&tower.maps[0].then(&tower.maps[1])?)?;
            if !a.map.compose(&b.map)?.agrees_with(&c.map) {
                return Ok(Err("transition maps do not compose".into()));
            }
            for (i, level) in tower.levels.iter().enumerate() {
                let seq = level_sequence(level)?;
                if !seq.exact() {
                    return Ok(Err(format!("sequence not exact at level {i}: {:?}", seq.middle_defect)));
                }
            }
            for (i, m) in tower.maps.iter().enumerate() {
                let comp = companion_transition(m)?;
                if comp.predicted_zero && !comp.map.map.is_zero() {
                    return Ok(Err(format!("companion map {i} predicted zero but is not: {:?}", comp.coefficients)));
                }
            }
            let top = companion_transition(tower.maps.last().expect("two maps"))?;
            if !top.predicted_zero {
                return Ok(Err(format!("top companion coefficients {:?} do not trigger", top.coefficients)));
            }
            triggered += 1;
            Ok(Ok(()))
        })();
        t.record(&inst.name, outcome);
    }
    t.notes.push(format!("companion vanishing triggered on {triggered} towers"));
    Ok(t)
}

fn localization_criterion() -> Result<Tally> {
    let mut t = Tally::new();
    for inst in corpus::pair_instances()? {
        let g = ybar_group(&inst.pair, &inst.level)?;
        for &v in inst.level.section() {
            let outcome = (|| -> Result<std::result::Result<(), String>> {
                let d = DecompositionData::new(&inst.level.system, v)?;
                if !g.l_v_transversal_audit(&d, 10_000)? {
                    return Ok(Err("value depends on the coset representatives".into()));
                }
                Ok(check(g.l_v_relation_audit(&d)?, || "value changes modulo I·Y[S]_0".into()))
            })();
            t.record(&format!("{} at place {v}", inst.name), outcome);
        }
    }
    Ok(t)
}

fn torsion_criterion() -> Result<Tally> {
    let mut t = Tally::new();
    for inst in corpus::pair_instances()? {
        let outcome = ybar_group(&inst.pair, &inst.level).map(|g| {
            let cert = g.certificate();
            if !cert.equals_torsion {
                return Err(format!("norm-killed subgroup {} differs from the torsion subgroup", g.group.describe()));
            }
            for x in g.group.generators() {
                if g.dotted_representative(&x).is_err() {
                    return Err(format!("class of {x:?} has no representative on the dotted places"));
                }
            }
            check(cert.dotted_representatives, || format!("{cert:?}"))
        });
        t.record(&inst.name, outcome);
    }
    Ok(t)
}

fn sigma_criterion(cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::new();
    let mut skipped = 0;
    for inst in corpus::pair_instances()? {
        let g = ybar_group(&inst.pair, &inst.level)?;
        let rep = sigma_exactness(&g, cfg.budget)?;
        let Some(enumerated) = rep.enumeration else {
            skipped += 1;
            continue;
        };
        t.record(&inst.name, Ok(check(rep.exact() && enumerated, || format!("{rep:?}"))));
    }
    if skipped > 0 {
        t.notes.push(format!("{skipped} instances above the enumeration budget"));
    }
    Ok(t)
}

fn sequences_criterion() -> Result<Tally> {
    let mut t = Tally::new();
    for inst in corpus::lattice_complexes()? {
        let outcome = (|| -> Result<std::result::Result<(), String>> {
            let model = HyperModel::new(&ModularComplex { base: inst.complex.clone(), modulus: None }, crate::complexes::MAX_HYPER_DEGREE)?;
            if !model.h0_matches_fixed_kernel()? {
                return Ok(Err("H^0 differs from the fixed part of ker f".into()));
            }
            for (kind, rep) in [(LesKind::Les1, model.les1()?), (LesKind::Les2, model.les2()?)] {
                if let Some(node) = rep.nodes.iter().find(|n| !n.exact) {
                    return Ok(Err(format!("{kind:?} not exact at {}: {:?}", node.label, node.witness)));
                }
            }
            Ok(Ok(()))
        })();
        t.record(&inst.name, outcome);
    }
    let _ = les_check;
    Ok(t)
}

fn dual_criterion() -> Result<Tally> {
    let mut t = Tally::new();
    for inst in corpus::lattice_complexes()?.into_iter().filter(|c| c.isogeny) {
        let outcome = DualModel::at_threshold(inst.complex.clone()).and_then(|d| {
            let cmp = order_comparison(&d)?;
            if !cmp.equal() {
                return Ok(Err(format!("orders differ: {cmp:?}")));
            }
            let audit = stabilization_audit(&d)?;
            Ok(check(audit.stable(), || format!("not stable under doubling: {audit:?}")))
        });
        t.record(&inst.name, outcome);
    }
    Ok(t)
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
    let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-20..=20)).collect()).collect();
    IntMatrix::from_rows(&rows)
}

fn snf_consistent(a: &IntMatrix) -> std::result::Result<(), String> {
    let x = smith_normal_form_with(a, SnfStrategy::MinPivot);
    let y = smith_normal_form_with(a, SnfStrategy::AlternatingHermite);
    for s in [&x, &y] {
        if s.u.mul(a).mul(&s.v) != s.d {
            return Err(format!("U·A·V ≠ D for {a:?}"));
        }
    }
    check(x.diagonal() == y.diagonal(), || format!("strategies disagree on {a:?}: {:?} vs {:?}", x.diagonal(), y.diagonal()))
}

fn foundations_criterion(cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut snf = Tally::new();
    for i in 0..100 {
        let a = random_matrix(&mut rng);
        snf.record(&format!("matrix {i}"), Ok(snf_consistent(&a)));
    }
    t.record("SNF strategies", Ok(snf.failure.map_or(Ok(()), Err)));

    let mut shapiro = Tally::new();
    for (name, x, a) in corpus::shapiro_instances()? {
        for degree in -1..=2 {
            let outcome = shapiro_decompose(&x, &a, degree).map(|s| {
                let orders = (s.global.order(), s.sum.order());
                if orders.0 != orders.1 {
                    return Err(format!("orders {orders:?}"));
                }
                let round = s.forward.compose(&s.backward).map(|m| m.agrees_with(&crate::znf::Morphism::identity(s.global.group().clone())));
                check(round == Ok(true), || "forward and backward are not inverse".into())
            });
            shapiro.record(&format!("{name} degree {degree}"), outcome);
        }
    }
    let count = shapiro.checked;
    if count < 20 {
        shapiro.failure.get_or_insert(format!("only {count} Shapiro instances"));
    }
    t.record("Shapiro", Ok(shapiro.failure.map_or(Ok(()), Err)));

    let mut cech = Tally::new();
    for (g, m) in [(FiniteGroup::cyclic(2), 4), (FiniteGroup::cyclic(3), 3), (FiniteGroup::symmetric3(), 6)] {
        let g = std::sync::Arc::new(g);
        let module = GammaModule::trivial_action(g.clone(), std::sync::Arc::new(AbGroup::cyclic(m)));
        let dict = CechDictionary::new(&module);
        for n in 1..=3 {
            for k in 0..4 {
                let table: Vec<Int> = (0..dict.cochains.dim(n - 1)).map(|_| int(rng.gen_range(0..m))).collect();
                let outcome = (|| -> Result<std::result::Result<(), String>> {
                    if !dict.commutes_on(n, &table)? {
                        return Ok(Err("differentials do not commute".into()));
                    }
                    let back = dict.group_to_cech(n, &dict.cech_to_group(n, &table)?)?;
                    Ok(check(back == table, || "round trip changes the table".into()))
                })();
                cech.record(&format!("{} degree {n} sample {k}", g.name()), outcome);
            }
        }
    }
    t.record("Cech dictionary", Ok(cech.failure.map_or(Ok(()), Err)));
    t.notes.push(format!("100 matrices, {count} Shapiro instances, {} Cech samples", cech.checked));
    let _ = int::zero;
    Ok(t)
}

fn negative_criterion() -> Result<Tally> {
    let mut t = Tally::new();
    let inst = corpus::negative_control()?;
    let outcome = (|| -> Result<std::result::Result<(), String>> {
        let report = check_place_conditions(&inst.level.system);
        if report.every_element_fixes_dotted {
            return Ok(Err("condition (4) violation not detected".into()));
        }
        let psi = psi_map(&inst.level, &inst.module)?.report()?;
        Ok(check(!psi.onto_tate, || "Ψ is still onto Ĥ^{-1}".into()))
    })();
    t.record(&inst.name, outcome);
    t.notes.push("condition (4) violation detected; Ψ not onto Ĥ^{-1} as expected".into());
    Ok(t)
}

