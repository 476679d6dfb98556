use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{GroupData, MapData, OperationResult, Report, Verdict};
use super::scenario::{Built, InputError, OpKind, OperationSpec, Scenario};
use crate::complexes::{
    dual_model_cohomology, order_comparison, stabilization_audit, DualModel, HyperModel, ModularComplex, MAX_HYPER_DEGREE,
};
use crate::galois::{check_place_conditions, DecompositionData};
use crate::rigid::{component_group, level_sequence, psi_map, sigma_exactness, ybar_group};
use crate::tate::{tate_cohomology, CechDictionary};
use crate::znf::int::{self, Int};
use crate::Error;

pub const DEFAULT_BUDGET: u64 = 512;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: u64,
    /// Overrides the scenario's budget.
    pub budget: Option<u64>,
    pub fail_fast: bool,
    pub timing: bool,
}

/// What an error from the library means for one property.
fn judge(property: &str, e: Error, ctx: &str) -> Result<Verdict, InputError> {
    match e {
        Error::Budget(why) => Ok(Verdict::out_of_budget(property, why)),
        Error::NotExact(_) | Error::NotWellDefined(_) | Error::NotEquivariant(_) => {
            Ok(Verdict::check(property, false, || e.to_string()))
        }
        other => Err(InputError { context: ctx.into(), message: other.to_string() }),
    }
}

fn hard(ctx: &str) -> impl Fn(Error) -> InputError + '_ {
    move |e| InputError { context: ctx.into(), message: e.to_string() }
}

fn coords(v: &[Int]) -> String {
    let shown: Vec<String> = v.iter().take(32).map(Int::to_string).collect();
    let more = if v.len() > 32 { ", ..." } else { "" };
    format!("[{}{more}]", shown.join(", "))
}

struct Runner<'a> {
    built: &'a Built,
    budget: u64,
    rng: ChaCha8Rng,
}

impl Runner<'_> {
    fn execute(&mut self, op: &OperationSpec, out: &mut OperationResult, ctx: &str) -> Result<(), InputError> {
        let b = self.built;
        let verify = op.verify;
        match op.kind {
            OpKind::Conditions => {
                let entry = b.level(op, ctx)?;
                let r = check_place_conditions(&entry.level.system);
                let witness = || {
                    format!("elements fixing no dotted place {:?}, unrealized stabilizers at {:?}", r.fixing_violations, r.stabilizer_violations)
                };
                if entry.negative_control {
                    out.verdicts.push(Verdict::check("violation detected", !r.combinatorial_ok(), || "conditions hold".into()));
                } else {
                    out.verdicts.push(Verdict::check("conditions (3) and (4)", r.combinatorial_ok(), witness));
                }
            }
            OpKind::Tate => {
                let m = b.module(op, ctx)?;
                let degree = op.degree.ok_or_else(|| InputError { context: ctx.into(), message: "missing field 'degree'".into() })?;
                let h = tate_cohomology(m, degree).map_err(hard(ctx))?;
                out.groups.push(GroupData::of(format!("H^{degree}"), h.group()));
                // Degree d + 2 needs cochains on Γ^(d+3).
                let cost = (m.group().order() as u64).saturating_pow((degree + 3).max(0) as u32).saturating_mul(m.ambient_dim() as u64);
                if verify && m.group().is_cyclic() && degree <= 1 && cost > self.budget * 8 {
                    out.verdicts.push(Verdict::out_of_budget("periodicity", format!("{cost} cochain coordinates")));
                } else if verify && m.group().is_cyclic() && degree <= 1 {
                    let shifted = tate_cohomology(m, degree + 2).map_err(hard(ctx))?;
                    out.verdicts.push(Verdict::check("periodicity", h.order() == shifted.order(), || {
                        format!("H^{} has invariants {}", degree + 2, shifted.describe())
                    }));
                }
            }
            OpKind::Cech => {
                let m = b.module(op, ctx)?;
                let dict = CechDictionary::new(m);
                if !verify {
                    return Ok(());
                }
                let top = op.degree.unwrap_or(3).clamp(1, 3) as usize;
                for n in 1..=top {
                    let moduli = dict.cochains.moduli(n - 1);
                    if moduli.len() as u64 > self.budget * 64 {
                        out.verdicts.push(Verdict::out_of_budget(format!("degree {n}"), format!("{} coordinates", moduli.len())));
                        continue;
                    }
                    let table: Vec<Int> = moduli
                        .iter()
                        .map(|q| {
                            let bound = int::to_i64(q).filter(|&q| q > 0).unwrap_or(11);
                            int::int(self.rng.gen_range(0..bound))
                        })
                        .collect();
                    let property = format!("degree {n} commutes with differentials");
                    match dict.commutes_on(n, &table) {
                        Ok(ok) => out.verdicts.push(Verdict::check(property, ok, || format!("table {}", coords(&table)))),
                        Err(e) => out.verdicts.push(judge(&property, e, ctx)?),
                    }
                    let property = format!("degree {n} round trip");
                    let back = dict.cech_to_group(n, &table).and_then(|phi| dict.group_to_cech(n, &phi));
                    match back {
                        Ok(t) => out.verdicts.push(Verdict::check(property, t == table, || format!("table {}", coords(&table)))),
                        Err(e) => out.verdicts.push(judge(&property, e, ctx)?),
                    }
                }
            }
            OpKind::Psi => {
                let level = &b.level(op, ctx)?.level;
                let m = b.module(op, ctx)?;
                let r = psi_map(level, m).and_then(|p| p.report()).map_err(hard(ctx))?;
                if verify {
                    let orders = || format!("Hom order {:?}, Tate order {:?}", r.hom_order, r.tate_order);
                    out.verdicts.push(Verdict::check("bijective", r.bijective, orders));
                    out.verdicts.push(Verdict::check("explicit inverse", r.inverse_verified, orders));
                    out.verdicts.push(Verdict::check("restricted image", r.restricted_onto, orders));
                    out.verdicts.push(Verdict::check("onto Tate H^-1", r.onto_tate, orders));
                }
            }
            OpKind::LevelSequence => {
                let level = &b.level(op, ctx)?.level;
                let seq = level_sequence(level).map_err(hard(ctx))?;
                out.maps.push(MapData::of("inclusion", &seq.inclusion.map));
                out.maps.push(MapData::of("projection", &seq.projection.map));
                if verify {
                    out.verdicts.push(Verdict::check("injective", seq.injective, || "inclusion has a kernel".into()));
                    out.verdicts.push(Verdict::check("surjective", seq.surjective, || "projection misses a class".into()));
                    out.verdicts.push(Verdict::check("exact in the middle", seq.middle_defect.is_none(), || {
                        seq.middle_defect.clone().unwrap_or_default()
                    }));
                }
            }
            OpKind::ComponentGroup => {
                let cg = component_group(b.pair(op, ctx)?).map_err(hard(ctx))?;
                out.groups.push(GroupData::of("(Ybar/IY)[tor]", &cg.group));
                if verify {
                    out.verdicts.push(Verdict::check("pairing injective", cg.left_kernel_trivial, || {
                        format!("characters at level {} miss a class", cg.level)
                    }));
                }
            }
            OpKind::Ybar => {
                let g = ybar_group(b.pair(op, ctx)?, &b.level(op, ctx)?.level).map_err(hard(ctx))?;
                out.groups.push(GroupData::of("Ybar[S,S']_0 / I.Y[S]_0", &g.quotient));
                out.groups.push(GroupData::of("norm-killed", &g.group));
                out.groups.push(GroupData::of("dotted-supported", &g.dotted));
                if verify {
                    let cert = g.certificate();
                    out.verdicts.push(Verdict::check("equals torsion", cert.equals_torsion, || {
                        format!("torsion subgroup {}", g.quotient.torsion_subgroup().describe())
                    }));
                    let missing = g.group.generators().into_iter().find(|x| g.dotted_representative(x).is_err());
                    out.verdicts.push(Verdict::check("dotted representatives", cert.dotted_representatives && missing.is_none(), || {
                        missing.map_or_else(|| "certificate failed".into(), |x| format!("class {}", coords(&x)))
                    }));
                }
            }
            OpKind::Localization => {
                let level = &b.level(op, ctx)?.level;
                let g = ybar_group(b.pair(op, ctx)?, level).map_err(hard(ctx))?;
                for &v in level.section() {
                    let d = DecompositionData::new(&level.system, v).map_err(hard(ctx))?;
                    out.maps.push(MapData::of(format!("l_v at place {v}"), &g.l_v(&d).map_err(hard(ctx))?));
                    if !verify {
                        continue;
                    }
                    let property = format!("place {v} transversal independence");
                    match g.l_v_transversal_audit(&d, self.budget as usize) {
                        Ok(ok) => out.verdicts.push(Verdict::check(property, ok, || "two transversals disagree".into())),
                        Err(e) => out.verdicts.push(judge(&property, e, ctx)?),
                    }
                    let property = format!("place {v} relation independence");
                    match g.l_v_relation_audit(&d) {
                        Ok(ok) => out.verdicts.push(Verdict::check(property, ok, || "value moves under I.Y[S]_0".into())),
                        Err(e) => out.verdicts.push(judge(&property, e, ctx)?),
                    }
                }
            }
            OpKind::Sigma => {
                let g = ybar_group(b.pair(op, ctx)?, &b.level(op, ctx)?.level).map_err(hard(ctx))?;
                let r = sigma_exactness(&g, self.budget).map_err(hard(ctx))?;
                if verify {
                    out.verdicts.push(Verdict::check("composite zero", r.composite_zero, || "Sigma after localization is nonzero".into()));
                    out.verdicts.push(Verdict::check("exact in the middle", r.middle_exact, || r.defect.clone().unwrap_or_default()));
                    out.verdicts.push(match r.enumeration {
                        Some(ok) => Verdict::check("enumeration", ok, || "brute force disagrees".into()),
                        None => Verdict::out_of_budget("enumeration", format!("groups larger than {}", self.budget)),
                    });
                }
            }
            OpKind::Hypercohomology => {
                let c = b.complex(op, ctx)?;
                let model = HyperModel::new(&ModularComplex { base: c.clone(), modulus: None }, MAX_HYPER_DEGREE).map_err(hard(ctx))?;
                let degrees = match op.degree {
                    Some(r) if (0..=MAX_HYPER_DEGREE as i32).contains(&r) => r as usize..=r as usize,
                    Some(r) => return Err(InputError { context: ctx.into(), message: format!("degree {r} outside 0..={MAX_HYPER_DEGREE}") }),
                    None => 0..=MAX_HYPER_DEGREE,
                };
                for r in degrees {
                    let h = model.hypercohomology(r).map_err(hard(ctx))?;
                    out.groups.push(GroupData::of(format!("H^{r}"), &h));
                }
                if verify {
                    out.verdicts.push(Verdict::check("H^0 is the fixed kernel", model.h0_matches_fixed_kernel().map_err(hard(ctx))?, || {
                        "orders differ".into()
                    }));
                    for (name, rep) in [("LES1", model.les1()), ("LES2", model.les2())] {
                        let rep = rep.map_err(hard(ctx))?;
                        let bad = rep.nodes.iter().find(|n| !n.exact);
                        out.verdicts.push(Verdict::check(format!("{name} exact"), bad.is_none(), || {
                            bad.map(|n| format!("{}: {}", n.label, n.witness.clone().unwrap_or_default())).unwrap_or_default()
                        }));
                    }
                }
            }
            OpKind::DualModel => {
                let d = DualModel::at_threshold(b.complex(op, ctx)?.clone()).map_err(hard(ctx))?;
                let h = dual_model_cohomology(&d).map_err(hard(ctx))?;
                for (r, g) in h.reduced.iter().enumerate() {
                    out.groups.push(GroupData::of(format!("reduced H^{} mod {}", r + 1, d.modulus), g));
                }
                if verify {
                    let cmp = order_comparison(&d).map_err(hard(ctx))?;
                    out.verdicts.push(Verdict::check("order equality", cmp.equal(), || {
                        format!("dual {:?} against lattice H^2 {:?}", cmp.dual_reduced_h1, cmp.lattice_h2)
                    }));
                    let audit = stabilization_audit(&d).map_err(hard(ctx))?;
                    out.verdicts.push(Verdict::check("stable under doubling", audit.stable(), || format!("{:?}", audit.isomorphisms)));
                }
            }
        }
        Ok(())
    }
}

fn subject(op: &OperationSpec) -> String {
    let parts: Vec<String> = [("places", &op.places), ("module", &op.module), ("pair", &op.pair), ("complex", &op.complex)]
        .iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| format!("{k} {v}")))
        .chain(op.degree.map(|d| format!("degree {d}")))
        .collect();
    parts.join(", ")
}

/// Build and run every operation; input problems abort with an [`InputError`].
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<Report, InputError> {
    let built = s.build()?;
    let budget = opts.budget.or(s.budget).unwrap_or(DEFAULT_BUDGET);
    if budget == 0 {
        return Err(InputError { context: "budget".into(), message: "must be positive".into() });
    }
    let mut runner = Runner { built: &built, budget, rng: ChaCha8Rng::seed_from_u64(opts.seed) };
    let mut report = Report {
        scenario: s.name.clone(),
        seed: opts.seed.to_string(),
        budget: budget.to_string(),
        passed: true,
        results: Vec::new(),
    };
    for (i, op) in s.operations.iter().enumerate() {
        let kind = serde_plain_kind(op.kind);
        let ctx = format!("operations[{i}] ({kind})");
        let mut out = OperationResult {
            index: i,
            kind,
            subject: subject(op),
            groups: vec![],
            maps: vec![],
            verdicts: vec![],
            elapsed_ms: None,
        };
        let start = Instant::now();
        runner.execute(op, &mut out, &ctx)?;
        if opts.timing {
            out.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        }
        let ok = out.passed();
        report.passed &= ok;
        report.results.push(out);
        if !ok && opts.fail_fast {
            break;
        }
    }
    Ok(report)
}

fn serde_plain_kind(k: OpKind) -> String {
    let v = toml::Value::try_from(k).expect("kinds serialize as strings");
    v.as_str().expect("kinds serialize as strings").to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::report::Status;
    use crate::cli::scenario::c2_sign_torus;

    #[test]
    fn sign_torus_component_group_is_z4() {
        let r = run_scenario(&c2_sign_torus(), &RunOptions::default()).unwrap();
        assert!(r.passed, "{}", r.to_toml());
        let cg = &r.results[0];
        assert_eq!(cg.kind, "component_group");
        assert_eq!(cg.groups[0].invariants, vec!["4"]);
    }

    #[test]
    fn empty_scenario_has_no_results() {
        let r = run_scenario(&Scenario::default(), &RunOptions::default()).unwrap();
        assert!(r.passed && r.results.is_empty());
    }

    #[test]
    fn negative_control_is_expected_to_violate() {
        let text = "group = { name = \"C2\" }\n[[places]]\nid = \"S\"\nmodulus = \"2\"\ndecomposition = [[0]]\nnegative_control = true\n\n[[operations]]\nkind = \"conditions\"\nplaces = \"S\"\n";
        let r = run_scenario(&Scenario::parse(text).unwrap(), &RunOptions::default()).unwrap();
        assert_eq!(r.results[0].verdicts[0].status, Status::Pass);
    }
}
