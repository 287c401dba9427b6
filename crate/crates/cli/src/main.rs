//! `polyideal`: analysis, Betti tables, classification checks, lattice
//! invariants, enumeration and theorem sweeps from the command line.
//!
//! Exit status: 0 success, 1 mismatch found, 2 usage error or bad input,
//! 3 resource cap reached.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polyideal::classification::{cross_verify, report_matrix, stack_orientation, Check, Report};
use polyideal::enumerate::{
    convex_polyominoes_capped, posets_capped, stack_polyominoes_capped, EnumKind, DEFAULT_CELL_CAP, DEFAULT_POSET_ENUM_CAP,
};
use polyideal::lattice::{classify_lattice, lattice_class_from_h_vector, order_ideal_lattice, DistLattice, Poset};
use polyideal::resolution::{betti_table_capped, DEFAULT_BETTI_DEGREE};
use polyideal::sweep::{cell_label, verify_theorem, SweepOptions, SweepReport, Theorem};
use polyideal::toric::semigroup::DEFAULT_LAYER_CAP;
use polyideal::toric::{AffineSemigroup, ToricModel};
use polyideal::{CellCollection, Error, FieldChoice};

#[derive(Parser)]
#[command(name = "polyideal", version, about = "Polyomino ideals, Hibi rings and their resolutions")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Connectivity, convexity, generators, chordality and shape profile of a cell collection.
    Analyze { file: PathBuf },
    /// Graded Betti numbers of the toric ring of a collection, or of the Hibi ring of a poset file.
    Betti {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BETTI_DEGREE)]
        max_degree: u32,
        /// `q` for the rationals or `gf:P` for a prime field.
        #[arg(long, default_value = "q")]
        field: FieldChoice,
        /// Largest number of multidegrees enumerated in one layer.
        #[arg(long, default_value_t = DEFAULT_LAYER_CAP)]
        layer_cap: usize,
    },
    /// Every combinatorial predicate checked against its homological oracle.
    Classify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value = "q")]
        field: FieldChoice,
    },
    /// Invariants of the distributive lattice of order ideals of a poset.
    Lattice {
        file: PathBuf,
        #[arg(value_enum)]
        action: LatticeAction,
        /// The file lists the lattice's own elements and covers instead of its base poset.
        #[arg(long)]
        elements: bool,
    },
    /// Isomorphism classes of small convex polyominoes, stacks or posets.
    Enumerate {
        /// convex, stack or poset.
        #[arg(long)]
        kind: EnumKind,
        /// Largest number of cells or elements.
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Cross-checks one classification over every enumerated object up to a bound.
    Verify {
        /// main, linear, stack, gorenstein_stack, hibione, hibitwo, degree_bound or hibi_h_vector.
        #[arg(long)]
        theorem: Theorem,
        #[arg(long)]
        bound: usize,
        #[arg(long, default_value = "q")]
        field: FieldChoice,
        /// Repeat the homological oracles over a second field.
        #[arg(long)]
        compare_field: Option<FieldChoice>,
        /// Largest bound accepted by the enumerator.
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LatticeAction {
    HVector,
    Classify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Ok,
    Mismatch,
    Cap,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Mismatch => 1,
            Status::Cap => 3,
        }
    }
}

struct Output {
    json: Value,
    text: String,
    status: Status,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, status: Status::Ok }
    }
}

enum Input {
    Cells(CellCollection),
    Poset(Poset),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Grid files hold cells; JSON files hold `{"cells": ..}` or `{"n": .., "covers": ..}`.
fn load(path: &Path) -> Result<Input> {
    let text = read(path)?;
    let context = || format!("cannot parse {}", path.display());
    if !text.trim_start().starts_with('{') {
        return Ok(Input::Cells(CellCollection::from_grid(&text).with_context(context)?));
    }
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Malformed(e.to_string())).with_context(context)?;
    if value.get("cells").is_some() {
        Ok(Input::Cells(CellCollection::from_json(&text).with_context(context)?))
    } else if value.get("n").is_some() {
        Ok(Input::Poset(Poset::from_json(&text).with_context(context)?))
    } else {
        bail!("{}: expected a \"cells\" or an \"n\"/\"covers\" object", path.display())
    }
}

fn load_cells(path: &Path) -> Result<CellCollection> {
    match load(path)? {
        Input::Cells(c) => Ok(c),
        Input::Poset(_) => bail!("{} holds a poset; use the lattice subcommand", path.display()),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn analyze(path: &Path) -> Result<Output> {
    let c = load_cells(path)?;
    let (m, n) = c.bbox();
    let model = ToricModel::new(&c);
    let generators: Vec<String> = model.minors.iter().map(|g| g.to_string()).collect();
    let gb = model.quadratic_gb_certificate(4);
    let profile = if c.is_convex() { Some(c.shape_profile()?) } else { None };
    let stack = stack_orientation(&c).map(|s| s.stack_profile()).transpose()?;

    let mut text = String::new();
    writeln!(text, "cells: {} (vertex box {m} x {n})", c.len())?;
    writeln!(text, "polyomino: {}", yes(c.is_polyomino()))?;
    writeln!(
        text,
        "convex: {} (rows {}, columns {})",
        yes(c.is_convex()),
        yes(c.is_row_convex()),
        yes(c.is_column_convex())
    )?;
    writeln!(text, "generators: {}", generators.len())?;
    for g in &generators {
        writeln!(text, "  {g}")?;
    }
    match &gb.chordless_cycle {
        None => writeln!(text, "quadratic Groebner basis: yes (no chordless cycle of length >= 6)")?,
        Some(cycle) => {
            let path: Vec<String> = cycle.iter().map(|(i, j)| format!("({i},{j})")).collect();
            writeln!(text, "quadratic Groebner basis: no (chordless cycle {})", path.join(" "))?
        }
    }
    if let Some(p) = &profile {
        let names = ["(1,1)", "(m,1)", "(1,n)", "(m,n)"];
        let missing: Vec<&str> = names.iter().zip(p.corners).filter(|(_, present)| !present).map(|(n, _)| *n).collect();
        writeln!(text, "missing corners: {} [{}]", missing.len(), missing.join(" "))?;
        let s = &p.spans;
        writeln!(
            text,
            "boundary spans: bottom {}..{}, top {}..{}, left {}..{}, right {}..{}",
            s.i1, s.i2, s.i3, s.i4, s.j1, s.j2, s.j3, s.j4
        )?;
    }
    if let Some(s) = &stack {
        let jumps = &s.jumps[1..];
        writeln!(text, "stack: width {}, height {}, width drops after rows {jumps:?}", s.width, s.height)?;
    }
    let json = json!({
        "cells": c.to_json()["cells"],
        "bbox": [m, n],
        "polyomino": c.is_polyomino(),
        "row_convex": c.is_row_convex(),
        "column_convex": c.is_column_convex(),
        "convex": c.is_convex(),
        "generators": generators,
        "chordality": gb,
        "shape_profile": profile,
        "stack_profile": stack,
    });
    Ok(Output::ok(json, text))
}

fn hibi_semigroup(p: &Poset) -> Result<AffineSemigroup> {
    Ok(order_ideal_lattice(p)?.hibi_semigroup())
}

fn betti(path: &Path, max_degree: u32, field: FieldChoice, layer_cap: usize) -> Result<Output> {
    let sg = match load(path)? {
        Input::Cells(c) => ToricModel::new(&c).semigroup,
        Input::Poset(p) => hibi_semigroup(&p)?,
    };
    let table = betti_table_capped(&sg, max_degree, field, layer_cap)?;
    let status = if table.cap_reached.is_some() { Status::Cap } else { Status::Ok };
    Ok(Output { json: table.to_json(), text: table.to_text(), status })
}

/// What the check reports when it holds and when it fails.
fn check_phrases(name: &str) -> (&'static str, &'static str, &'static str) {
    match name {
        "linearly_related" => ("linearly related", "not linearly related", "shape criterion"),
        "koszul_pair" => ("has a minimal Koszul pair", "no minimal Koszul pair", "shape criterion"),
        "linear_resolution" => ("linear resolution", "no linear resolution", "strip criterion"),
        "gorenstein_stack" => ("Gorenstein", "not Gorenstein", "stack width criterion"),
        "extremal_stack" => ("extremal Gorenstein", "not extremal Gorenstein", "extremal stack shapes"),
        _ => ("holds", "fails", "predicate"),
    }
}

fn check_line(c: &Check) -> String {
    let (yes, no, criterion) = check_phrases(c.name);
    let said = |b: bool| if b { yes } else { no };
    if c.agree {
        format!("{} (oracle and {criterion} agree)", said(c.oracle))
    } else {
        format!("MISMATCH: oracle says {}, {criterion} says {}", said(c.oracle), said(c.predicate))
    }
}

fn classify(files: &[PathBuf], field: FieldChoice) -> Result<Output> {
    let mut rows: Vec<(String, Report)> = Vec::new();
    for path in files {
        let c = load_cells(path)?;
        let report = cross_verify(&c, field).with_context(|| format!("cannot classify {}", path.display()))?;
        rows.push((path.display().to_string(), report));
    }
    let mut text = String::new();
    for (name, report) in &rows {
        writeln!(text, "{name} over {}", report.field)?;
        for c in &report.checks {
            writeln!(text, "  {}", check_line(c))?;
            writeln!(text, "    {}", c.detail)?;
        }
    }
    if rows.len() > 1 {
        text.push('\n');
        text.push_str(&report_matrix(&rows));
    }
    let all_agree = rows.iter().all(|(_, r)| r.all_agree());
    let items: Vec<Value> = rows
        .iter()
        .map(|(name, r)| json!({"file": name, "all_agree": r.all_agree(), "report": r}))
        .collect();
    let status = if all_agree { Status::Ok } else { Status::Mismatch };
    Ok(Output { json: json!({"all_agree": all_agree, "items": items}), text, status })
}

fn lattice(path: &Path, action: LatticeAction, elements: bool) -> Result<Output> {
    let p = match load(path)? {
        Input::Poset(p) => p,
        Input::Cells(_) => bail!("{} holds cells; the lattice subcommand expects poset JSON", path.display()),
    };
    let l = if elements { DistLattice::from_order(&p)? } else { order_ideal_lattice(&p)? };
    let h = l.h_vector()?;
    match action {
        LatticeAction::HVector => Ok(Output::ok(json!({"h_vector": h}), format!("{h}\n"))),
        LatticeAction::Classify => {
            let simple = l.is_simple();
            let generators: Vec<String> = l.join_meet_generators().iter().map(|g| g.to_string()).collect();
            let mut text = String::new();
            writeln!(text, "lattice: {} elements, {} join-irreducible", l.len(), l.join_irreducibles().len())?;
            writeln!(text, "join-meet generators: {}", generators.len())?;
            writeln!(text, "h-vector: {h}")?;
            writeln!(text, "simple: {}", yes(simple))?;
            let mut json = json!({
                "lattice": l.to_json(),
                "size": l.len(),
                "generators": generators,
                "h_vector": h,
                "simple": simple,
            });
            let mut status = Status::Ok;
            if simple {
                let predicate = classify_lattice(&l)?;
                let oracle = lattice_class_from_h_vector(&l)?;
                for (name, o, q) in [
                    ("linear resolution", oracle.linear_resolution, predicate.linear_resolution),
                    ("extremal Gorenstein", oracle.extremal_gorenstein, predicate.extremal_gorenstein),
                ] {
                    if o == q {
                        writeln!(text, "{name}: {} (h-vector and base poset criterion agree)", yes(o))?;
                    } else {
                        writeln!(text, "{name}: MISMATCH: h-vector says {}, base poset criterion says {}", yes(o), yes(q))?;
                        status = Status::Mismatch;
                    }
                }
                json["oracle"] = json!(oracle);
                json["predicate"] = json!(predicate);
                json["agree"] = json!(oracle == predicate);
            } else {
                writeln!(text, "classification covers simple lattices only")?;
            }
            Ok(Output { json, text, status })
        }
    }
}

fn enumerate(kind: EnumKind, bound: usize, cap: Option<usize>) -> Result<Output> {
    let (labels, items): (Vec<String>, Vec<Value>) = match kind {
        EnumKind::Convex | EnumKind::Stack => {
            let cap = cap.unwrap_or(DEFAULT_CELL_CAP);
            let all =
                if kind == EnumKind::Convex { convex_polyominoes_capped(bound, cap)? } else { stack_polyominoes_capped(bound, cap)? };
            all.iter().map(|c| (cell_label(c), c.to_json())).unzip()
        }
        EnumKind::Poset => {
            let all = posets_capped(bound, cap.unwrap_or(DEFAULT_POSET_ENUM_CAP))?;
            all.iter().map(|p| (p.to_json().to_string(), p.to_json())).unzip()
        }
    };
    let mut text = String::new();
    writeln!(text, "{} classes with 1..={bound} {}", labels.len(), if kind == EnumKind::Poset { "elements" } else { "cells" })?;
    for l in &labels {
        writeln!(text, "{l}")?;
    }
    Ok(Output::ok(json!({"kind": kind, "bound": bound, "count": items.len(), "items": items}), text))
}

fn sweep_status(report: &SweepReport) -> Status {
    if !report.mismatches.is_empty() || report.errors.iter().any(|e| e.check != "resource_cap") {
        Status::Mismatch
    } else if !report.errors.is_empty() {
        Status::Cap
    } else {
        Status::Ok
    }
}

fn verify(
    theorem: Theorem,
    bound: usize,
    field: FieldChoice,
    compare_field: Option<FieldChoice>,
    cap: Option<usize>,
) -> Result<Output> {
    let mut options = SweepOptions::new(theorem, bound);
    options.field = field;
    options.compare_field = compare_field;
    if let Some(cap) = cap {
        options.cap = cap;
    }
    let report = verify_theorem(theorem, &options)?;
    Ok(Output { json: serde_json::to_value(&report)?, text: report.to_text(), status: sweep_status(&report) })
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Analyze { file } => analyze(file),
        Command::Betti { file, max_degree, field, layer_cap } => betti(file, *max_degree, *field, *layer_cap),
        Command::Classify { files, field } => classify(files, *field),
        Command::Lattice { file, action, elements } => lattice(file, *action, *elements),
        Command::Enumerate { kind, bound, cap } => enumerate(*kind, *bound, *cap),
        Command::Verify { theorem, bound, field, compare_field, cap } => verify(*theorem, *bound, *field, *compare_field, *cap),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json values serialize") + "\n",
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(out.status.code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let cap = e.chain().any(|c| c.downcast_ref::<Error>().is_some_and(Error::is_resource_cap));
            ExitCode::from(if cap { Status::Cap.code() } else { 2 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use polyideal::sweep::Mismatch;

    fn report(mismatches: Vec<Mismatch>, errors: Vec<Mismatch>) -> SweepReport {
        let mut r = verify_theorem(Theorem::Linear, &SweepOptions::new(Theorem::Linear, 2)).unwrap();
        r.mismatches = mismatches;
        r.errors = errors;
        r
    }

    fn entry(check: &str) -> Mismatch {
        Mismatch { item: "#".into(), check: check.into(), detail: String::new() }
    }

    #[test]
    fn mismatches_outrank_caps() {
        assert_eq!(sweep_status(&report(vec![], vec![])), Status::Ok);
        assert_eq!(sweep_status(&report(vec![], vec![entry("resource_cap")])), Status::Cap);
        assert_eq!(sweep_status(&report(vec![], vec![entry("error")])), Status::Mismatch);
        assert_eq!(sweep_status(&report(vec![entry("linear")], vec![entry("resource_cap")])), Status::Mismatch);
    }
}
