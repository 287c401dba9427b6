//! Exhaustive checks of each classification against its homological or
//! enumerative oracle over all small objects.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::classification::{
    classify_linearly_related, gorenstein_stack_predicate, is_extremal_stack_shape, is_linear_resolution_shape,
};
use crate::enumerate::{convex_polyominoes_capped, posets_capped, stack_polyominoes_capped, DEFAULT_CELL_CAP, DEFAULT_POSET_ENUM_CAP};
use crate::error::{Error, Result};
use crate::lattice::{classify_lattice, lattice_class_from_h_vector, order_ideal_lattice, Poset};
use crate::linalg::FieldChoice;
use crate::polyomino::{CellCollection, Symmetry};
use crate::resolution::{find_koszul_pair, first_syzygies_in_degree_cached, is_linearly_related_oracle, resolution_verdict, LocalRankCache};
use crate::toric::ToricModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, )]
pub enum Theorem {
    /// Shape criterion for linearly related ideals, plus the Koszul-pair characterization.
    Main,
    /// Linear resolution exactly for strips.
    Linear,
    /// Extremal Gorenstein stacks are the L-tromino and the 2×2 square.
    Stack,
    /// Gorenstein stacks via the width/height condition.
    GorensteinStack,
    /// Join-meet ideals with linear resolution.
    HibiOne,
    /// Extremal Gorenstein join-meet ideals.
    HibiTwo,
    /// No first syzygies in total degree 5 or 6.
    DegreeBound,
    /// Descent h-vector equals the Hilbert-series h-vector of the Hibi ring.
    HibiHVector,
}

impl Theorem {
    pub const ALL: [Theorem; 8] = [
        Theorem::Main,
        Theorem::Linear,
        Theorem::Stack,
        Theorem::GorensteinStack,
        Theorem::HibiOne,
        Theorem::HibiTwo,
        Theorem::DegreeBound,
        Theorem::HibiHVector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Main => "main",
            Theorem::Linear => "linear",
            Theorem::Stack => "stack",
            Theorem::GorensteinStack => "gorenstein_stack",
            Theorem::HibiOne => "hibione",
            Theorem::HibiTwo => "hibitwo",
            Theorem::DegreeBound => "degree_bound",
            Theorem::HibiHVector => "hibi_h_vector",
        }
    }

    fn on_posets(self) -> bool {
        matches!(self, Theorem::HibiOne | Theorem::HibiTwo | Theorem::HibiHVector)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Theorem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Theorem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Theorem::ALL.iter().map(|t| t.name()).collect();
            Error::Malformed(format!("unknown theorem {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub bound: usize,
    pub field: FieldChoice,
    /// Repeat the homological oracles over `GF(p)` and report disagreements.
    pub compare_field: Option<FieldChoice>,
    pub cap: usize,
}

impl SweepOptions {
    pub fn new(theorem: Theorem, bound: usize) -> Self {
        let cap = if theorem.on_posets() { DEFAULT_POSET_ENUM_CAP } else { DEFAULT_CELL_CAP };
        SweepOptions { bound, field: FieldChoice::Rational, compare_field: None, cap }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub item: String,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepItem {
    pub item: String,
    pub size: usize,
    /// Named boolean verdicts for this item.
    pub verdicts: BTreeMap<String, bool>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub theorem: Theorem,
    pub universe: String,
    pub bound: usize,
    pub field: FieldChoice,
    pub item_count: usize,
    /// Items per verdict name that came out true.
    pub tallies: BTreeMap<String, usize>,
    pub mismatches: Vec<Mismatch>,
    /// Items that could not be decided; `check` is `resource_cap` or `error`.
    pub errors: Vec<Mismatch>,
    pub runtime_ms: u128,
    pub items: Vec<SweepItem>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.errors.is_empty()
    }

    pub fn tally(&self, name: &str) -> usize {
        self.tallies.get(name).copied().unwrap_or(0)
    }

    /// Items whose verdict `name` is true.
    pub fn items_with(&self, name: &str) -> impl Iterator<Item = &SweepItem> + '_ {
        let name = name.to_string();
        self.items.iter().filter(move |i| i.verdicts.get(&name) == Some(&true))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "theorem {} over {} (bound {}, field {})", self.theorem.name(), self.universe, self.bound, self.field);
        let _ = writeln!(out, "items: {}", self.item_count);
        for (name, count) in &self.tallies {
            let _ = writeln!(out, "  {name}: {count}");
        }
        let _ = writeln!(out, "mismatches: {}", self.mismatches.len());
        for m in &self.mismatches {
            let _ = writeln!(out, "  MISMATCH {} [{}]: {}", m.item, m.check, m.detail);
        }
        if !self.errors.is_empty() {
            let _ = writeln!(out, "errors: {}", self.errors.len());
            for m in &self.errors {
                let _ = writeln!(out, "  ERROR {} [{}]: {}", m.item, m.check, m.detail);
            }
        }
        let _ = writeln!(out, "runtime: {} ms", self.runtime_ms);
        out
    }
}

/// Compact one-line label of a collection, rows top to bottom separated by `/`.
pub fn cell_label(c: &CellCollection) -> String {
    c.to_grid().trim_end().replace('\n', "/")
}

fn poset_label(p: &Poset) -> String {
    let covers: Vec<String> = p.covers().iter().map(|&(a, b)| format!("{}<{}", a + 1, b + 1)).collect();
    format!("n={} [{}]", p.len(), covers.join(" "))
}

/// Per-item outcome: verdicts plus disagreements, as (check, detail).
type Outcome = Result<(BTreeMap<String, bool>, Vec<(String, String)>)>;

fn agree(out: &mut Vec<(String, String)>, check: &str, oracle: bool, predicate: bool, detail: impl FnOnce() -> String) {
    if oracle != predicate {
        out.push((check.to_string(), format!("oracle {oracle}, predicate {predicate}; {}", detail())));
    }
}

fn main_item(c: &CellCollection, o: &SweepOptions) -> Outcome {
    let model = ToricModel::new(c);
    let oracle = is_linearly_related_oracle(&model.semigroup, o.field)?;
    let verdict = classify_linearly_related(c)?;
    let pair = find_koszul_pair(&model, o.field)?;
    let mut bad = Vec::new();
    agree(&mut bad, "linearly_related", oracle.linearly_related, verdict.linearly_related, || {
        format!("witness {:?}, case {:?}", oracle.witness, verdict.case)
    });
    agree(&mut bad, "koszul_pair", pair.is_some(), !oracle.linearly_related, || format!("pair {pair:?}"));
    for s in Symmetry::all() {
        if classify_linearly_related(&c.transform(s))?.linearly_related != verdict.linearly_related {
            bad.push(("isomorphism_invariance".into(), format!("verdict changes under {s:?}")));
        }
    }
    if let Some(other) = o.compare_field {
        let second = is_linearly_related_oracle(&model.semigroup, other)?;
        agree(&mut bad, "field_agreement", second.linearly_related, oracle.linearly_related, || format!("{other} vs {}", o.field));
    }
    let verdicts = BTreeMap::from([
        ("linearly_related".to_string(), oracle.linearly_related),
        ("koszul_pair".to_string(), pair.is_some()),
    ]);
    Ok((verdicts, bad))
}

fn linear_item(c: &CellCollection) -> Outcome {
    let v = resolution_verdict(c)?;
    let strip = is_linear_resolution_shape(c)?;
    let mut bad = Vec::new();
    agree(&mut bad, "linear_resolution", v.has_linear_resolution, strip, || format!("h-vector {}", v.h_vector));
    Ok((BTreeMap::from([("linear_resolution".to_string(), v.has_linear_resolution), ("strip".to_string(), strip)]), bad))
}

fn gorenstein_stack_item(c: &CellCollection) -> Outcome {
    let v = resolution_verdict(c)?;
    let predicate = gorenstein_stack_predicate(c)?;
    let mut bad = Vec::new();
    agree(&mut bad, "gorenstein", v.is_gorenstein, predicate, || format!("h-vector {}", v.h_vector));
    for s in Symmetry::all() {
        let t = c.transform(s);
        if t.stack_profile().is_ok() && gorenstein_stack_predicate(&t)? != predicate {
            bad.push(("orientation".into(), format!("width/height condition changes under {s:?}")));
        }
    }
    Ok((BTreeMap::from([("gorenstein".to_string(), v.is_gorenstein)]), bad))
}

fn stack_item(c: &CellCollection) -> Outcome {
    let v = resolution_verdict(c)?;
    let shape = is_extremal_stack_shape(c);
    let mut bad = Vec::new();
    agree(&mut bad, "extremal_gorenstein", v.is_extremal_gorenstein, shape, || format!("h-vector {}", v.h_vector));
    Ok((BTreeMap::from([("extremal_gorenstein".to_string(), v.is_extremal_gorenstein)]), bad))
}

fn degree_bound_item(c: &CellCollection, caches: &[LocalRankCache]) -> Outcome {
    let sg = ToricModel::new(c).semigroup;
    let mut bad = Vec::new();
    for degree in [5, 6] {
        for (h, rank) in first_syzygies_in_degree_cached(&sg, degree, &caches[0])? {
            bad.push(("degree_bound".into(), format!("first syzygy of rank {rank} in degree {h:?}")));
        }
        if let Some(second) = caches.get(1) {
            let other = second.field();
            if !first_syzygies_in_degree_cached(&sg, degree, second)?.is_empty() {
                bad.push(("degree_bound".into(), format!("first syzygy in total degree {degree} over {other}")));
            }
        }
    }
    Ok((BTreeMap::from([("violation".to_string(), !bad.is_empty())]), bad))
}

fn hibi_item(p: &Poset, theorem: Theorem) -> Outcome {
    let l = order_ideal_lattice(p)?;
    let h = l.h_vector()?;
    let mut bad = Vec::new();
    let mut verdicts = BTreeMap::new();
    match theorem {
        Theorem::HibiHVector => {
            let hilbert = l.hibi_semigroup().h_vector()?;
            if hilbert != h {
                bad.push(("h_vector".into(), format!("descents {h}, Hilbert series {hilbert}")));
            }
            verdicts.insert("agree".to_string(), hilbert == h);
        }
        _ => {
            let simple = l.is_simple();
            verdicts.insert("simple".to_string(), simple);
            if simple {
                let class = classify_lattice(&l)?;
                let oracle = lattice_class_from_h_vector(&l)?;
                if theorem == Theorem::HibiOne {
                    agree(&mut bad, "linear_resolution", oracle.linear_resolution, class.linear_resolution, || format!("h-vector {h}"));
                    verdicts.insert("linear_resolution".to_string(), oracle.linear_resolution);
                } else {
                    agree(&mut bad, "extremal_gorenstein", oracle.extremal_gorenstein, class.extremal_gorenstein, || format!("h-vector {h}"));
                    verdicts.insert("extremal_gorenstein".to_string(), oracle.extremal_gorenstein);
                }
            }
        }
    }
    Ok((verdicts, bad))
}

/// Runs one theorem over its enumerated universe. Per-item failures such as
/// resource caps are recorded and the sweep continues.
pub fn verify_theorem(theorem: Theorem, options: &SweepOptions) -> Result<SweepReport> {
    let start = Instant::now();
    let (universe, results): (String, Vec<(String, usize, Outcome)>) = if theorem.on_posets() {
        let all = posets_capped(options.bound, options.cap)?;
        let results = all.par_iter().map(|p| (poset_label(p), p.len(), hibi_item(p, theorem))).collect();
        (format!("posets with 1..={} elements up to isomorphism", options.bound), results)
    } else {
        let stacks = matches!(theorem, Theorem::Stack | Theorem::GorensteinStack);
        let all = if stacks {
            stack_polyominoes_capped(options.bound, options.cap)?
        } else {
            convex_polyominoes_capped(options.bound, options.cap)?
        };
        // shared across items: divisor complexes recur between polyominoes
        let caches: Vec<LocalRankCache> =
            std::iter::once(options.field).chain(options.compare_field).map(LocalRankCache::new).collect();
        let results = all
            .par_iter()
            .map(|c| {
                let outcome = match theorem {
                    Theorem::Main => main_item(c, options),
                    Theorem::Linear => linear_item(c),
                    Theorem::GorensteinStack => gorenstein_stack_item(c),
                    Theorem::Stack => stack_item(c),
                    Theorem::DegreeBound => degree_bound_item(c, &caches),
                    _ => unreachable!("poset theorems handled above"),
                };
                (cell_label(c), c.len(), outcome)
            })
            .collect();
        let kind = if stacks { "convex stack polyominoes" } else { "convex polyominoes" };
        (format!("{kind} with 1..={} cells up to isomorphism", options.bound), results)
    };
    let mut report = SweepReport {
        theorem,
        universe,
        bound: options.bound,
        field: options.field,
        item_count: results.len(),
        tallies: BTreeMap::new(),
        mismatches: Vec::new(),
        errors: Vec::new(),
        runtime_ms: 0,
        items: Vec::with_capacity(results.len()),
    };
    for (item, size, outcome) in results {
        match outcome {
            Ok((verdicts, bad)) => {
                for (name, &v) in &verdicts {
                    *report.tallies.entry(name.clone()).or_insert(0) += usize::from(v);
                }
                report.mismatches.extend(bad.into_iter().map(|(check, detail)| Mismatch { item: item.clone(), check, detail }));
                report.items.push(SweepItem { item, size, verdicts, error: None });
            }
            Err(e) => {
                let check = if e.is_resource_cap() { "resource_cap" } else { "error" };
                report.errors.push(Mismatch { item: item.clone(), check: check.into(), detail: e.to_string() });
                report.items.push(SweepItem { item, size, verdicts: BTreeMap::new(), error: Some(e.to_string()) });
            }
        }
    }
    report.runtime_ms = start.elapsed().as_millis();
    Ok(report)
}
