//! Versioned corpus of named example objects with their recorded
//! expectations. Files are embedded at build time from `fixtures/v1`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classification::{classify_linearly_related, gorenstein_stack_predicate, is_extremal_stack_shape, is_linear_resolution_shape};
use crate::error::{Error, Result};
use crate::lattice::{classify_lattice, order_ideal_lattice, DistLattice, Poset};
use crate::linalg::FieldChoice;
use crate::polyomino::{Cell, CellCollection};
use crate::resolution::{divisor_complex, find_koszul_pair, is_linearly_related_oracle, koszul_pair_minimal, resolution_verdict};
use crate::toric::{InnerMinor, ToricModel};

pub const CORPUS_VERSION: u32 = 1;

const CORPUS: &str = include_str!("../fixtures/v1/corpus.json");

const FILES: &[(&str, &str)] = &[
    ("fig_cases_1.grid", include_str!("../fixtures/v1/fig_cases_1.grid")),
    ("fig_cases_2.grid", include_str!("../fixtures/v1/fig_cases_2.grid")),
    ("fig_cases_3.grid", include_str!("../fixtures/v1/fig_cases_3.grid")),
    ("fig_combinatorial_left.grid", include_str!("../fixtures/v1/fig_combinatorial_left.grid")),
    ("fig_combinatorial_right.grid", include_str!("../fixtures/v1/fig_combinatorial_right.grid")),
    ("fig_convex_plus.grid", include_str!("../fixtures/v1/fig_convex_plus.grid")),
    ("fig_extremalstack_L.grid", include_str!("../fixtures/v1/fig_extremalstack_L.grid")),
    ("fig_extremalstack_square.grid", include_str!("../fixtures/v1/fig_extremalstack_square.grid")),
    ("fig_gorenstein.grid", include_str!("../fixtures/v1/fig_gorenstein.grid")),
    ("fig_not.grid", include_str!("../fixtures/v1/fig_not.grid")),
    ("fig_polyomino.grid", include_str!("../fixtures/v1/fig_polyomino.grid")),
    ("fig_proof1corner_a.grid", include_str!("../fixtures/v1/fig_proof1corner_a.grid")),
    ("fig_proof1corner_b.grid", include_str!("../fixtures/v1/fig_proof1corner_b.grid")),
    ("fig_proof1corner_c.grid", include_str!("../fixtures/v1/fig_proof1corner_c.grid")),
    ("fig_proof1corner_d.grid", include_str!("../fixtures/v1/fig_proof1corner_d.grid")),
    ("fig_proof23corner_a.grid", include_str!("../fixtures/v1/fig_proof23corner_a.grid")),
    ("fig_proof23corner_b.grid", include_str!("../fixtures/v1/fig_proof23corner_b.grid")),
    ("fig_proof23corner_c.grid", include_str!("../fixtures/v1/fig_proof23corner_c.grid")),
    ("fig_proof23corner_d.grid", include_str!("../fixtures/v1/fig_proof23corner_d.grid")),
    ("fig_restricted_a.grid", include_str!("../fixtures/v1/fig_restricted_a.grid")),
    ("fig_restricted_b.grid", include_str!("../fixtures/v1/fig_restricted_b.grid")),
    ("fig_stack_left.grid", include_str!("../fixtures/v1/fig_stack_left.grid")),
    ("fig_stack_right.grid", include_str!("../fixtures/v1/fig_stack_right.grid")),
    ("fig_stairs_variants.json", include_str!("../fixtures/v1/fig_stairs_variants.json")),
    ("fig_two.grid", include_str!("../fixtures/v1/fig_two.grid")),
    ("fig_width_1.grid", include_str!("../fixtures/v1/fig_width_1.grid")),
    ("fig_width_2.grid", include_str!("../fixtures/v1/fig_width_2.grid")),
    ("fig_width_3.grid", include_str!("../fixtures/v1/fig_width_3.grid")),
    ("poset_chain2.json", include_str!("../fixtures/v1/poset_chain2.json")),
    ("poset_chain3_chain2.json", include_str!("../fixtures/v1/poset_chain3_chain2.json")),
    ("poset_fig_1.json", include_str!("../fixtures/v1/poset_fig_1.json")),
    ("poset_fig_2.json", include_str!("../fixtures/v1/poset_fig_2.json")),
    ("poset_fig_3.json", include_str!("../fixtures/v1/poset_fig_3.json")),
    ("poset_flattice_1.json", include_str!("../fixtures/v1/poset_flattice_1.json")),
    ("poset_flattice_2.json", include_str!("../fixtures/v1/poset_flattice_2.json")),
    ("poset_flattice_3.json", include_str!("../fixtures/v1/poset_flattice_3.json")),
    ("poset_flattice_4.json", include_str!("../fixtures/v1/poset_flattice_4.json")),
    ("poset_plane.json", include_str!("../fixtures/v1/poset_plane.json")),
];

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated verbatim in the published source; asserted as is.
    Published,
    /// Immediate from definitions.
    Trivial,
    /// Computed; tests recompute it with the named independent oracle.
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureKind {
    Cells,
    CellVariants,
    Poset,
    Lattice,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Expectation {
    pub check: String,
    pub provenance: Provenance,
    #[serde(default)]
    pub value: Option<Value>,
    /// Name of the independent computation that reproduces a derived value.
    #[serde(default)]
    pub oracle: Option<String>,
    #[serde(default)]
    pub args: Option<Value>,
    /// The observed cells must be isomorphic to this fixture's cells.
    #[serde(default)]
    pub value_fixture: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub file: String,
    pub kind: FixtureKind,
    pub description: String,
    pub expect: Vec<Expectation>,
}

#[derive(Deserialize)]
struct Corpus {
    version: u32,
    fixtures: Vec<Fixture>,
}

#[derive(Clone, Debug)]
pub enum Payload {
    Cells(CellCollection),
    /// Mandatory cells plus every subset of the optional ones.
    CellVariants { mandatory: Vec<Cell>, optional: Vec<Cell> },
    Poset(Poset),
    Lattice(DistLattice),
}

pub fn corpus() -> &'static [Fixture] {
    static PARSED: OnceLock<Vec<Fixture>> = OnceLock::new();
    PARSED.get_or_init(|| {
        let c: Corpus = serde_json::from_str(CORPUS).expect("embedded corpus is valid JSON");
        assert_eq!(c.version, CORPUS_VERSION);
        c.fixtures
    })
}

pub fn fixture(name: &str) -> Result<&'static Fixture> {
    corpus().iter().find(|f| f.name == name).ok_or_else(|| Error::Unknown(format!("fixture {name}")))
}

pub fn file_text(file: &str) -> Result<&'static str> {
    FILES.iter().find(|(f, _)| *f == file).map(|(_, t)| *t).ok_or_else(|| Error::Unknown(format!("fixture file {file}")))
}

fn cell_list(v: &Value) -> Result<Vec<Cell>> {
    let bad = || Error::Malformed("expected a list of [x, y] pairs".into());
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|p| match p.as_array().map(|a| a.iter().map(Value::as_i64).collect::<Vec<_>>()) {
            Some(xy) if xy.len() == 2 => match (xy[0], xy[1]) {
                (Some(x), Some(y)) => Ok((x as i32, y as i32)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        })
        .collect()
}

impl Fixture {
    pub fn payload(&self) -> Result<Payload> {
        let text = file_text(&self.file)?;
        Ok(match self.kind {
            FixtureKind::Cells if self.file.ends_with(".json") => Payload::Cells(CellCollection::from_json(text)?),
            FixtureKind::Cells => Payload::Cells(CellCollection::from_grid(text)?),
            FixtureKind::CellVariants => {
                let v: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
                Payload::CellVariants { mandatory: cell_list(&v["cells"])?, optional: cell_list(&v["optional"])? }
            }
            FixtureKind::Poset => Payload::Poset(Poset::from_json(text)?),
            FixtureKind::Lattice => Payload::Lattice(DistLattice::from_json(text)?),
        })
    }

    pub fn cells(&self) -> Result<CellCollection> {
        match self.payload()? {
            Payload::Cells(c) => Ok(c),
            _ => Err(Error::Precondition(format!("fixture {} does not hold a cell collection", self.name))),
        }
    }
}

impl Payload {
    /// All collections described by the payload.
    pub fn collections(&self) -> Result<Vec<CellCollection>> {
        match self {
            Payload::Cells(c) => Ok(vec![c.clone()]),
            Payload::CellVariants { mandatory, optional } => (0u32..1 << optional.len())
                .map(|mask| {
                    let extra = optional.iter().enumerate().filter(|&(k, _)| mask >> k & 1 == 1).map(|(_, &c)| c);
                    CellCollection::new(mandatory.iter().copied().chain(extra))
                })
                .collect(),
            _ => Ok(Vec::new()),
        }
    }

    fn lattice(&self) -> Result<DistLattice> {
        match self {
            Payload::Poset(p) => order_ideal_lattice(p),
            Payload::Lattice(l) => Ok(l.clone()),
            _ => Err(Error::Precondition("not a poset or lattice".into())),
        }
    }
}

fn minor_arg(args: &Value, key: &str) -> Result<InnerMinor> {
    let cells = cell_list(&args[key])?;
    match cells[..] {
        [lower, upper] => Ok(InnerMinor { lower, upper }),
        _ => Err(Error::Malformed(format!("argument {key} must be two vertices"))),
    }
}

fn field_arg(args: &Value) -> Result<FieldChoice> {
    args.get("field").and_then(Value::as_str).map_or(Ok(FieldChoice::Rational), str::parse)
}

fn ints(args: &Value, key: &str) -> Result<Vec<i32>> {
    args[key]
        .as_array()
        .and_then(|a| a.iter().map(|v| v.as_i64().map(|x| x as i32)).collect())
        .ok_or_else(|| Error::Malformed(format!("argument {key} must be a list of integers")))
}

/// Degree of the product of the two anti-diagonal monomials.
pub fn pair_degree(model: &ToricModel, a: &InnerMinor, b: &InnerMinor) -> Vec<u32> {
    let da = model.minor_degree(a);
    let db = model.minor_degree(b);
    da.iter().zip(&db).map(|(x, y)| x + y).collect()
}

/// Computes the quantity named by `check` on `payload`.
pub fn observe(payload: &Payload, check: &str, args: Option<&Value>) -> Result<Value> {
    let none = Value::Null;
    let args = args.unwrap_or(&none);
    match payload {
        Payload::Cells(c) => observe_cells(c, check, args),
        Payload::CellVariants { .. } => {
            let all = payload.collections()?;
            match check {
                "variant_count" => Ok(json!(all.len())),
                "koszul_pair_exists_all" => {
                    for c in &all {
                        if find_koszul_pair(&ToricModel::new(c), field_arg(args)?)?.is_none() {
                            return Ok(json!(false));
                        }
                    }
                    Ok(json!(true))
                }
                other => Err(Error::Unknown(format!("check {other} on cell variants"))),
            }
        }
        Payload::Poset(_) | Payload::Lattice(_) => {
            let l = payload.lattice()?;
            match check {
                "lattice_size" => Ok(json!(l.len())),
                "is_simple" => Ok(json!(l.is_simple())),
                "h_vector" => Ok(json!(l.h_vector()?.entries())),
                "join_meet_count" => Ok(json!(l.join_meet_generators().len())),
                "hibi_generator_count" => Ok(json!(l.hibi_semigroup().generators().len())),
                "join_irreducible_count" => Ok(json!(l.join_irreducibles().len())),
                "is_pure" => Ok(json!(l.join_irreducibles().is_pure())),
                "linear_resolution" => Ok(json!(classify_lattice(&l)?.linear_resolution)),
                "extremal_gorenstein" => Ok(json!(classify_lattice(&l)?.extremal_gorenstein)),
                other => Err(Error::Unknown(format!("check {other} on a lattice"))),
            }
        }
    }
}

fn observe_cells(c: &CellCollection, check: &str, args: &Value) -> Result<Value> {
    let model = || ToricModel::new(c);
    Ok(match check {
        "is_polyomino" => json!(c.is_polyomino()),
        "is_convex" => json!(c.is_convex()),
        "cell_count" => json!(c.len()),
        "bbox" => {
            let (m, n) = c.bbox();
            json!([m, n])
        }
        "vertex_count" => json!(c.vertices().len()),
        "generator_count" | "minor_count" => json!(model().minors.len()),
        "minors" => json!(model().minors.iter().map(ToString::to_string).collect::<Vec<_>>()),
        "missing_corners" => json!(c.shape_profile()?.missing_corners()),
        "linearly_related" => json!(is_linearly_related_oracle(&model().semigroup, field_arg(args)?)?.linearly_related),
        "linearly_related_shape" => json!(classify_linearly_related(c)?.linearly_related),
        "koszul_pair_exists" => json!(find_koszul_pair(&model(), field_arg(args)?)?.is_some()),
        "koszul_pair_minimal" => {
            let (a, b) = (minor_arg(args, "a")?, minor_arg(args, "b")?);
            json!(koszul_pair_minimal(&model(), &a, &b, field_arg(args)?)?)
        }
        "h1_at_pair_degree" => {
            let m = model();
            let h = pair_degree(&m, &minor_arg(args, "a")?, &minor_arg(args, "b")?);
            json!(divisor_complex(&m.semigroup, &h)?.reduced_homology_rank(1, field_arg(args)?)?)
        }
        "quadratic_gb" => json!(model().quadratic_gb_certificate(0).quadratic),
        "induced" => json!(c.induced(&ints(args, "cols")?, &ints(args, "rows")?)?.to_json()["cells"]),
        "stack_width" => json!(c.stack_profile()?.width),
        "stack_height" => json!(c.stack_profile()?.height),
        "stack_jumps" => json!(c.stack_profile()?.jumps[1..]),
        "gorenstein_stack_predicate" => json!(gorenstein_stack_predicate(c)?),
        "extremal_stack_shape" => json!(is_extremal_stack_shape(c)),
        "h_vector" => json!(resolution_verdict(c)?.h_vector.entries()),
        "gorenstein" => json!(resolution_verdict(c)?.is_gorenstein),
        "extremal_gorenstein" => json!(resolution_verdict(c)?.is_extremal_gorenstein),
        "linear_resolution" => json!(resolution_verdict(c)?.has_linear_resolution),
        "linear_resolution_shape" => json!(is_linear_resolution_shape(c)?),
        "regularity" => json!(resolution_verdict(c)?.regularity),
        other => return Err(Error::Unknown(format!("check {other} on cells"))),
    })
}

/// Outcome of comparing one expectation with the computed value.
#[derive(Clone, Debug, Serialize)]
pub struct Observation {
    pub fixture: String,
    pub check: String,
    pub provenance: Provenance,
    pub observed: Value,
    pub expected: Option<Value>,
    /// `None` when the expectation names only an oracle.
    pub agrees: Option<bool>,
}

/// `x13x22-x23x12` and `x13x22-x12x23` name the same binomial.
fn normalize_binomial(text: &str) -> String {
    text.split('-')
        .map(|mono| {
            let mut vars: Vec<&str> = mono.split('x').filter(|v| !v.is_empty()).collect();
            vars.sort();
            vars.iter().map(|v| format!("x{v}")).collect::<String>()
        })
        .collect::<Vec<_>>()
        .join("-")
}

fn same_value(check: &str, observed: &Value, expected: &Value) -> bool {
    if check == "minors" {
        let sorted = |v: &Value| {
            let mut s: Vec<String> = v.as_array().into_iter().flatten().filter_map(Value::as_str).map(normalize_binomial).collect();
            s.sort();
            s
        };
        return sorted(observed) == sorted(expected);
    }
    observed == expected
}

/// Evaluates every expectation of `f` that carries a value or a reference
/// fixture. Oracle-only expectations are reported with `agrees: None`.
pub fn evaluate(f: &Fixture) -> Result<Vec<Observation>> {
    let payload = f.payload()?;
    let mut out = Vec::new();
    for e in &f.expect {
        let observed = observe(&payload, &e.check, e.args.as_ref())?;
        let agrees = if let Some(v) = &e.value {
            Some(same_value(&e.check, &observed, v))
        } else if let Some(other) = &e.value_fixture {
            let got = CellCollection::new(cell_list(&observed)?)?;
            Some(got.is_isomorphic(&fixture(other)?.cells()?))
        } else {
            None
        };
        out.push(Observation {
            fixture: f.name.clone(),
            check: e.check.clone(),
            provenance: e.provenance,
            observed,
            expected: e.value.clone(),
            agrees,
        });
    }
    Ok(out)
}

/// Checks per provenance over the whole corpus.
pub fn provenance_counts() -> BTreeMap<&'static str, usize> {
    let mut counts = BTreeMap::new();
    for e in corpus().iter().flat_map(|f| &f.expect) {
        let key = match e.provenance {
            Provenance::Published => "published",
            Provenance::Trivial => "trivial",
            Provenance::Derived => "derived",
        };
        *counts.entry(key).or_insert(0) += 1;
    }
    counts
}
