//! Combinatorial predicates for the resolution shapes of convex polyomino
//! ideals, and their comparison against the homological oracles.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::linalg::FieldChoice;
use crate::polyomino::{CellCollection, ShapeProfile, Symmetry};
use crate::resolution::{find_koszul_pair, is_linearly_related_oracle, resolution_verdict};
use crate::toric::ToricModel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "reason", rename_all = "snake_case")]
pub enum MainCase {
    /// No corner or a single corner of the bounding box is missing.
    AtMostOneCornerMissing,
    TwoAdjacentCornersMissing,
    /// Three corners are missing and the boundary spans satisfy the side condition.
    ThreeCornersMissingWithSpans,
    Fails(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainVerdict {
    pub linearly_related: bool,
    /// Outcome of the corner and boundary span conditions alone, before the
    /// T-shaped obstruction is taken into account.
    pub corner_conditions: bool,
    pub case: MainCase,
    pub profile: ShapeProfile,
}

fn fails(profile: ShapeProfile, reason: &str) -> MainVerdict {
    MainVerdict { linearly_related: false, corner_conditions: false, case: MainCase::Fails(reason.into()), profile }
}

/// Shape criterion for a convex polyomino ideal to be linearly related: the
/// corner and span conditions, and no induced T-shaped subpolyomino.
pub fn classify_linearly_related(c: &CellCollection) -> Result<MainVerdict> {
    let mut v = corner_conditions(c)?;
    if v.linearly_related {
        if let Some(reason) = t_obstruction(c) {
            v.linearly_related = false;
            v.case = MainCase::Fails(reason);
        }
    }
    Ok(v)
}

fn corner_conditions(c: &CellCollection) -> Result<MainVerdict> {
    let profile = c.shape_profile()?;
    if profile.m >= 4 && profile.n >= 4 && profile.inner_corners.contains(&false) {
        return Ok(fails(profile, "an inner corner (2,2), (m-1,2), (2,n-1) or (m-1,n-1) is not a vertex"));
    }
    let [ll, lr, ul, ur] = profile.corners;
    let ok = |case| MainVerdict { linearly_related: true, corner_conditions: true, case, profile: profile.clone() };
    match profile.missing_corners() {
        0 | 1 => Ok(ok(MainCase::AtMostOneCornerMissing)),
        2 if ll == ur => {
            // the two missing corners are either (1,1),(m,n) or (m,1),(1,n)
            Ok(fails(profile, "two opposite corners are missing"))
        }
        2 => Ok(ok(MainCase::TwoAdjacentCornersMissing)),
        3 => {
            let sym = match (ll, lr, ul, ur) {
                (true, ..) => Symmetry::identity(),
                (_, true, ..) => Symmetry { swap: false, flip_x: true, flip_y: false },
                (_, _, true, _) => Symmetry { swap: false, flip_x: false, flip_y: true },
                _ => Symmetry { swap: false, flip_x: true, flip_y: true },
            };
            let moved = c.transform(sym).shape_profile()?;
            let s = moved.spans;
            let (m, n) = (moved.m, moved.n);
            if (s.i2 == m - 1 && s.j4 <= s.j2) || (s.j2 == n - 1 && s.i4 <= s.i2) {
                Ok(ok(MainCase::ThreeCornersMissingWithSpans))
            } else {
                Ok(fails(profile, "three corners are missing and the boundary spans violate the side condition"))
            }
        }
        _ => Ok(fails(profile, "all four corners are missing")),
    }
}

/// Looks for columns `a<b<c<d` and rows `p<q<r<s` inducing a T: the
/// interval `[(a,p),(b,s)]` and the arm `[(b,q),(d,r)]` lie in `c` while
/// `(c,p)` and `(c,s)` are not vertices. The minors on `{a,b}×{p,s}` and
/// `{c,d}×{q,r}` then form a minimal Koszul pair. All four arm directions are
/// tried.
pub fn t_obstruction(c: &CellCollection) -> Option<String> {
    let turns = [
        (Symmetry::identity(), "right"),
        (Symmetry { swap: false, flip_x: true, flip_y: false }, "left"),
        (Symmetry { swap: true, flip_x: false, flip_y: false }, "up"),
        (Symmetry { swap: true, flip_x: true, flip_y: false }, "down"),
    ];
    turns.into_iter().find(|(sym, _)| has_right_t(&c.transform(*sym))).map(|(_, dir)| {
        format!("an induced T-shaped subpolyomino with its arm pointing {dir} carries a Koszul pair")
    })
}

fn has_right_t(c: &CellCollection) -> bool {
    let (m, n) = c.bbox();
    // vertex x-range of each row; rows of a convex polyomino are intervals
    let ranges: Vec<(i32, i32)> = (1..=n)
        .map(|y| {
            let xs: Vec<i32> = (1..=m).filter(|&x| c.has_vertex((x, y))).collect();
            (xs[0], xs[xs.len() - 1])
        })
        .collect();
    let n = ranges.len();
    for p in 0..n {
        for s in p + 3..n {
            let (lo, hi) = (ranges[p].0.max(ranges[s].0), ranges[p].1.min(ranges[s].1));
            if lo >= hi {
                continue;
            }
            let reach = ranges[p].1.max(ranges[s].1) + 2;
            let long = (p + 1..s).filter(|&y| ranges[y].1 >= reach).count();
            if long >= 2 {
                return true;
            }
        }
    }
    false
}

/// A single row or column of cells, i.e. a bounding box of vertex width 2.
pub fn is_linear_resolution_shape(c: &CellCollection) -> Result<bool> {
    c.ensure_convex()?;
    let (m, n) = c.bbox();
    Ok(m == 2 || n == 2)
}

/// First orientation of `c` that is a stack polyomino, if any.
pub fn stack_orientation(c: &CellCollection) -> Option<CellCollection> {
    Symmetry::all().map(|s| c.transform(s)).find(|t| t.stack_profile().is_ok())
}

/// Width equals height for every truncation at which the width drops.
pub fn gorenstein_stack_predicate(c: &CellCollection) -> Result<bool> {
    c.ensure_convex()?;
    let p = c.stack_profile()?;
    Ok(p.jumps.iter().all(|&k| p.truncations[k] == p.height_after(k)))
}

/// The L-tromino or the 2×2 square, up to isomorphism.
pub fn is_extremal_stack_shape(c: &CellCollection) -> bool {
    let canon = c.canonical_form();
    let l = CellCollection::new([(1, 1), (2, 1), (2, 2)]).expect("nonempty");
    let square = CellCollection::new([(1, 1), (2, 1), (1, 2), (2, 2)]).expect("nonempty");
    canon == l.canonical_form() || canon == square.canonical_form()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub oracle: bool,
    pub predicate: bool,
    pub agree: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, oracle: bool, predicate: bool, detail: String) -> Self {
        Check { name, oracle, predicate, agree: oracle == predicate, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub cells: Vec<(i32, i32)>,
    pub field: FieldChoice,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_agree(&self) -> bool {
        self.checks.iter().all(|c| c.agree)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CHECK_NAMES: [&str; 5] = ["linearly_related", "koszul_pair", "linear_resolution", "gorenstein_stack", "extremal_stack"];

/// Runs each homological oracle and its combinatorial counterpart. The stack
/// checks only appear when some orientation of `c` is a stack polyomino.
pub fn cross_verify(c: &CellCollection, field: FieldChoice) -> Result<Report> {
    c.ensure_convex()?;
    let model = ToricModel::new(c);
    let oracle = is_linearly_related_oracle(&model.semigroup, field)?;
    let main = classify_linearly_related(c)?;
    let mut checks = Vec::new();
    let witness = oracle.witness.as_ref().map_or("no degree-4 syzygy".to_string(), |h| format!("syzygy in degree {h:?}"));
    checks.push(Check::new("linearly_related", oracle.linearly_related, main.linearly_related, format!("{witness}; shape case {:?}", main.case)));
    let pair = find_koszul_pair(&model, field)?;
    let detail = pair.map_or("no minimal Koszul pair".into(), |(a, b)| format!("Koszul pair {a}, {b}"));
    checks.push(Check::new("koszul_pair", pair.is_some(), !main.linearly_related, detail));
    let verdict = resolution_verdict(c)?;
    checks.push(Check::new(
        "linear_resolution",
        verdict.has_linear_resolution,
        is_linear_resolution_shape(c)?,
        format!("h-vector {}", verdict.h_vector),
    ));
    if let Some(stack) = stack_orientation(c) {
        checks.push(Check::new(
            "gorenstein_stack",
            verdict.is_gorenstein,
            gorenstein_stack_predicate(&stack)?,
            format!("h-vector {}", verdict.h_vector),
        ));
        checks.push(Check::new(
            "extremal_stack",
            verdict.is_extremal_gorenstein,
            is_extremal_stack_shape(c),
            format!("h-vector {}", verdict.h_vector),
        ));
    }
    Ok(Report { cells: c.cells().to_vec(), field, checks })
}

/// Fixed-width matrix with one row per named report and one column per check.
pub fn report_matrix(rows: &[(String, Report)]) -> String {
    let label = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(4).max(4);
    let cell = |r: &Report, name: &str| match r.check(name) {
        None => "-".to_string(),
        Some(c) if c.agree => "agree".to_string(),
        Some(c) => format!("MISMATCH(oracle={}, predicate={})", c.oracle, c.predicate),
    };
    let widths: Vec<usize> = CHECK_NAMES
        .iter()
        .map(|name| rows.iter().map(|(_, r)| cell(r, name).len()).chain([name.len()]).max().unwrap_or(0))
        .collect();
    let mut out = format!("{:<label$}", "item");
    for (name, w) in CHECK_NAMES.iter().zip(&widths) {
        let _ = write!(out, "  {name:<w$}");
    }
    out.push('\n');
    for (n, r) in rows {
        let _ = write!(out, "{n:<label$}");
        for (name, w) in CHECK_NAMES.iter().zip(&widths) {
            let _ = write!(out, "  {:<w$}", cell(r, name));
        }
        out.push('\n');
    }
    out
}
