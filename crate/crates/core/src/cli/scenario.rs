//! Scenario files: a TOML description of one group, its place systems,
//! modules, isogeny pairs, complexes and the operations to run on them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::complexes::LatticeComplex;
use crate::galois::{FiniteGroup, GammaModule};
use crate::rigid::{IsogenyPair, Level, PlaceSpec, Tower, TowerSpec};
use crate::znf::int::{self, Int};
use crate::znf::{AbGroup, IntMatrix};

/// An integer written as a decimal string; bare TOML integers are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num(pub Int);

impl Num {
    pub fn new(v: i64) -> Self {
        Num(int::int(v))
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num::new(v))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                int::parse_int(v).map(Num).ok_or_else(|| E::custom(format!("'{v}' is not a decimal integer")))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    /// Largest group enumerated by brute-force checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub places: Vec<PlacesSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub complexes: Vec<ComplexSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub operations: Vec<OperationSpec>,
}

/// Either a named family (`C6`, `S3`, `D4`, `C2xC2`, ...) or a multiplication table.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
}

/// One orbit per entry of `decomposition`, the cosets of that subgroup;
/// the identity coset of each orbit is its dotted place.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacesSpec {
    pub id: String,
    pub modulus: Num,
    pub decomposition: Vec<Vec<usize>>,
    /// Accept a system violating the place conditions, and expect the violation.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub negative_control: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub element: usize,
    pub matrix: Vec<Vec<Num>>,
}

/// `ℤ^rank` modulo `moduli` (free when absent), with the action of a
/// generating set given by matrices acting on columns. No matrices means
/// the trivial action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub id: String,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moduli: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub action: Vec<ActionSpec>,
}

/// `Y ⊆ Ȳ` with `Ȳ` a lattice module and `Y` given by a basis in `Ȳ`-coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub id: String,
    pub lattice: String,
    pub y_basis: Vec<Vec<Num>>,
}

/// `f: source → target` between lattice modules, as a matrix on columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub id: String,
    pub source: String,
    pub target: String,
    pub map: Vec<Vec<Num>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpKind {
    Conditions,
    Tate,
    Cech,
    Psi,
    LevelSequence,
    ComponentGroup,
    Ybar,
    Localization,
    Sigma,
    Hypercohomology,
    DualModel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationSpec {
    pub kind: OpKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub places: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i32>,
    /// Skip the property checks and report only the computed data.
    #[serde(default = "yes", skip_serializing_if = "Clone::clone")]
    pub verify: bool,
}

fn yes() -> bool {
    true
}

impl OperationSpec {
    pub fn new(kind: OpKind) -> Self {
        OperationSpec { kind, places: None, module: None, pair: None, complex: None, degree: None, verify: true }
    }
}

/// A parse or validation failure, with the field it concerns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub context: String,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.context.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.context, self.message)
        }
    }
}

impl std::error::Error for InputError {}

fn input(context: impl Into<String>, message: impl fmt::Display) -> InputError {
    InputError { context: context.into(), message: message.to_string() }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        toml::from_str(text).map_err(|e| input("", e.to_string().trim_end()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenarios always serialize")
    }

    pub fn build(&self) -> Result<Built, InputError> {
        Built::new(self)
    }
}

pub struct PlacesEntry {
    pub level: Level,
    pub negative_control: bool,
}

/// The objects of a scenario, constructed and validated.
pub struct Built {
    pub group: Arc<FiniteGroup>,
    pub places: BTreeMap<String, PlacesEntry>,
    pub modules: BTreeMap<String, GammaModule>,
    pub pairs: BTreeMap<String, IsogenyPair>,
    pub complexes: BTreeMap<String, LatticeComplex>,
}

fn matrix(rows: &[Vec<Num>], nrows: usize, ncols: usize, ctx: &str) -> Result<IntMatrix, InputError> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(input(ctx, format!("expected a {nrows}x{ncols} matrix")));
    }
    Ok(IntMatrix::from_int_rows(nrows, ncols, rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect()))
}

fn fresh<T>(map: &BTreeMap<String, T>, id: &str, ctx: &str) -> Result<(), InputError> {
    if map.contains_key(id) {
        return Err(input(ctx, format!("duplicate id '{id}'")));
    }
    Ok(())
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, id: &str, what: &str, ctx: &str) -> Result<&'a T, InputError> {
    map.get(id).ok_or_else(|| input(ctx, format!("unknown {what} '{id}'")))
}

impl Built {
    fn new(s: &Scenario) -> Result<Self, InputError> {
        if s.budget == Some(0) {
            return Err(input("budget", "must be positive"));
        }
        let group = match &s.group {
            None => FiniteGroup::trivial(),
            Some(GroupSpec { name: Some(n), table: None }) => FiniteGroup::named(n).map_err(|e| input("group.name", e))?,
            Some(GroupSpec { name, table: Some(t) }) => {
                FiniteGroup::from_table(name.clone().unwrap_or_else(|| "G".into()), t).map_err(|e| input("group.table", e))?
            }
            Some(_) => return Err(input("group", "give a name or a table")),
        };
        let group = Arc::new(group);
        let mut b = Built {
            group: group.clone(),
            places: BTreeMap::new(),
            modules: BTreeMap::new(),
            pairs: BTreeMap::new(),
            complexes: BTreeMap::new(),
        };

        for (i, p) in s.places.iter().enumerate() {
            let ctx = format!("places[{i}] '{}'", p.id);
            fresh(&b.places, &p.id, &ctx)?;
            for d in &p.decomposition {
                if !group.is_subgroup(d) {
                    return Err(input(&ctx, format!("{d:?} is not a subgroup")));
                }
            }
            let places = p.decomposition.iter().map(|d| PlaceSpec { first_level: 0, decomposition: vec![d.clone()] }).collect();
            let spec = TowerSpec {
                groups: vec![group.clone()],
                surjections: vec![],
                moduli: vec![p.modulus.0.clone()],
                places,
                allow_violations: p.negative_control,
            };
            let level = Tower::build(&spec).map_err(|e| input(&ctx, e))?.levels.remove(0);
            b.places.insert(p.id.clone(), PlacesEntry { level, negative_control: p.negative_control });
        }

        for (i, m) in s.modules.iter().enumerate() {
            let ctx = format!("modules[{i}] '{}'", m.id);
            fresh(&b.modules, &m.id, &ctx)?;
            let underlying = match &m.moduli {
                None => AbGroup::free(m.rank),
                Some(ms) if ms.len() == m.rank => AbGroup::diagonal(&ms.iter().map(|x| x.0.clone()).collect::<Vec<_>>()),
                Some(_) => return Err(input(&ctx, format!("expected {} moduli", m.rank))),
            };
            let mut gens = Vec::new();
            for (j, a) in m.action.iter().enumerate() {
                let actx = format!("{ctx} action[{j}]");
                if a.element >= group.order() {
                    return Err(input(&actx, format!("element {} is not in the group", a.element)));
                }
                gens.push((a.element, matrix(&a.matrix, m.rank, m.rank, &actx)?));
            }
            let module = if gens.is_empty() {
                GammaModule::trivial_action(group.clone(), Arc::new(underlying))
            } else {
                GammaModule::from_generators(group.clone(), Arc::new(underlying), &gens).map_err(|e| input(&ctx, e))?
            };
            b.modules.insert(m.id.clone(), module);
        }

        for (i, p) in s.pairs.iter().enumerate() {
            let ctx = format!("pairs[{i}] '{}'", p.id);
            fresh(&b.pairs, &p.id, &ctx)?;
            let lattice = lookup(&b.modules, &p.lattice, "module", &ctx)?;
            let r = lattice.ambient_dim();
            let basis = matrix(&p.y_basis, r, r, &ctx)?.to_rows();
            let pair = IsogenyPair::new(group.clone(), lattice.matrices().to_vec(), basis).map_err(|e| input(&ctx, e))?;
            b.pairs.insert(p.id.clone(), pair);
        }

        for (i, c) in s.complexes.iter().enumerate() {
            let ctx = format!("complexes[{i}] '{}'", c.id);
            fresh(&b.complexes, &c.id, &ctx)?;
            let src = lookup(&b.modules, &c.source, "module", &ctx)?;
            let dst = lookup(&b.modules, &c.target, "module", &ctx)?;
            let f = matrix(&c.map, dst.ambient_dim(), src.ambient_dim(), &ctx)?;
            let complex = LatticeComplex::new(src.clone(), dst.clone(), f).map_err(|e| input(&ctx, e))?;
            b.complexes.insert(c.id.clone(), complex);
        }
        Ok(b)
    }

    pub fn level(&self, op: &OperationSpec, ctx: &str) -> Result<&PlacesEntry, InputError> {
        let id = op.places.as_deref().ok_or_else(|| input(ctx, "missing field 'places'"))?;
        lookup(&self.places, id, "place system", ctx)
    }

    pub fn module(&self, op: &OperationSpec, ctx: &str) -> Result<&GammaModule, InputError> {
        let id = op.module.as_deref().ok_or_else(|| input(ctx, "missing field 'module'"))?;
        lookup(&self.modules, id, "module", ctx)
    }

    pub fn pair(&self, op: &OperationSpec, ctx: &str) -> Result<&IsogenyPair, InputError> {
        let id = op.pair.as_deref().ok_or_else(|| input(ctx, "missing field 'pair'"))?;
        lookup(&self.pairs, id, "pair", ctx)
    }

    pub fn complex(&self, op: &OperationSpec, ctx: &str) -> Result<&LatticeComplex, InputError> {
        let id = op.complex.as_deref().ok_or_else(|| input(ctx, "missing field 'complex'"))?;
        lookup(&self.complexes, id, "complex", ctx)
    }
}

/// The bundled scenario for the sign torus of C2: `Y = ℤ` with the sign
/// action inside `Ȳ = ½ℤ`, so `(Ȳ/IY)[tor] = ℤ/4`.
pub fn c2_sign_torus() -> Scenario {
    let sign = ModuleSpec { id: "Ybar".into(), rank: 1, moduli: None, action: vec![ActionSpec { element: 1, matrix: vec![vec![Num::new(-1)]] }] };
    let places = PlacesSpec { id: "S".into(), modulus: Num::new(4), decomposition: vec![vec![0, 1], vec![0]], negative_control: false };
    let pair = PairSpec { id: "sign".into(), lattice: "Ybar".into(), y_basis: vec![vec![Num::new(2)]] };
    let complex = ComplexSpec { id: "double".into(), source: "Ybar".into(), target: "Ybar".into(), map: vec![vec![Num::new(2)]] };
    let with = |kind, f: &dyn Fn(&mut OperationSpec)| {
        let mut op = OperationSpec::new(kind);
        f(&mut op);
        op
    };
    Scenario {
        name: "c2-sign-torus".into(),
        budget: None,
        group: Some(GroupSpec { name: Some("C2".into()), table: None }),
        places: vec![places],
        modules: vec![sign],
        pairs: vec![pair],
        complexes: vec![complex],
        operations: vec![
            with(OpKind::ComponentGroup, &|o| o.pair = Some("sign".into())),
            with(OpKind::Conditions, &|o| o.places = Some("S".into())),
            with(OpKind::Ybar, &|o| {
                o.pair = Some("sign".into());
                o.places = Some("S".into());
            }),
            with(OpKind::Localization, &|o| {
                o.pair = Some("sign".into());
                o.places = Some("S".into());
            }),
            with(OpKind::Sigma, &|o| {
                o.pair = Some("sign".into());
                o.places = Some("S".into());
            }),
            with(OpKind::Tate, &|o| {
                o.module = Some("Ybar".into());
                o.degree = Some(-1);
            }),
            with(OpKind::Hypercohomology, &|o| {
                o.complex = Some("double".into());
                o.degree = Some(1);
            }),
            with(OpKind::DualModel, &|o| o.complex = Some("double".into())),
        ],
    }
}

pub fn bundled(name: &str) -> Option<Scenario> {
    match name {
        "c2-sign-torus" => Some(c2_sign_torus()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_canonical() {
        let s = c2_sign_torus();
        let text = s.to_toml();
        assert_eq!(Scenario::parse(&text).unwrap(), s);
        assert!(text.contains("modulus = \"4\""), "{text}");
    }

    #[test]
    fn bare_integers_are_accepted() {
        let s = Scenario::parse("[[places]]\nid = \"S\"\nmodulus = 2\ndecomposition = [[0]]\n").unwrap();
        assert_eq!(s.places[0].modulus, Num::new(2));
        assert!(s.build().is_ok());
    }

    #[test]
    fn unknown_references_name_the_field() {
        let s = Scenario::parse("[[pairs]]\nid = \"p\"\nlattice = \"missing\"\ny_basis = []\n").unwrap();
        let err = s.build().err().unwrap();
        assert_eq!(err.context, "pairs[0] 'p'");
        assert!(err.message.contains("unknown module 'missing'"));
    }

    #[test]
    fn parse_errors_carry_the_line() {
        let err = Scenario::parse("name = \"x\"\nbudget = \"many\"\n").unwrap_err();
        assert!(err.message.contains("line 2"), "{err}");
    }
}
