//! Acceptance suite. Prints one PASS or FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use polyideal::classification::is_extremal_stack_shape;
use polyideal::enumerate::posets;
use polyideal::fixtures::{corpus, evaluate, fixture, Payload};
use polyideal::lattice::is_chain_plus_point;
use polyideal::resolution::{divisor_complex, koszul_pair_minimal, resolution_verdict, Syzygies};
use polyideal::sweep::{verify_theorem, SweepOptions, SweepReport, Theorem};
use polyideal::toric::{InnerMinor, ToricModel};
use polyideal::{CellCollection, FieldChoice};

const GF: FieldChoice = FieldChoice::Prime(32003);

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sweep(theorem: Theorem, bound: usize) -> Result<SweepReport, String> {
    let r = verify_theorem(theorem, &SweepOptions::new(theorem, bound)).map_err(|e| e.to_string())?;
    ensure(r.passed(), || {
        let first: Vec<String> = r.mismatches.iter().chain(&r.errors).take(3).map(|m| format!("{} [{}] {}", m.item, m.check, m.detail)).collect();
        format!("{} mismatches, {} errors: {}", r.mismatches.len(), r.errors.len(), first.join("; "))
    })?;
    Ok(r)
}

/// Every expectation on the named fixtures that carries a value holds.
fn fixtures_hold(names: &[&str]) -> Result<usize, String> {
    let mut n = 0;
    for name in names {
        let f = fixture(name).map_err(|e| e.to_string())?;
        for o in evaluate(f).map_err(|e| format!("{name}: {e}"))? {
            if let Some(ok) = o.agrees {
                ensure(ok, || format!("{name} {}: observed {} expected {:?}", o.check, o.observed, o.expected))?;
                n += 1;
            }
        }
    }
    Ok(n)
}

fn sorted_factors(b: &str) -> String {
    b.split('-')
        .map(|m| {
            let mut v: Vec<&str> = m.split('x').filter(|s| !s.is_empty()).collect();
            v.sort();
            v.join("x")
        })
        .collect::<Vec<_>>()
        .join("-")
}

fn generator_fidelity() -> Outcome {
    let published = [
        "x22x31-x32x21",
        "x23x31-x33x21",
        "x24x31-x34x21",
        "x23x32-x33x22",
        "x24x32-x34x22",
        "x24x33-x34x23",
        "x13x22-x12x23",
        "x13x32-x12x33",
        "x13x42-x12x43",
        "x23x42-x22x43",
        "x33x42-x32x43",
    ];
    let start = Instant::now();
    let plus = fixture("fig_convex_plus").and_then(|f| f.cells()).map_err(|e| e.to_string())?;
    ensure(plus.bbox() == (4, 4), || format!("bounding box {:?}", plus.bbox()))?;
    let model = ToricModel::new(&plus);
    let mut ours: Vec<String> = model.minors.iter().map(|m| sorted_factors(&m.to_string())).collect();
    let mut theirs: Vec<String> = published.iter().map(|b| sorted_factors(b)).collect();
    ours.sort();
    theirs.sort();
    ensure(ours == theirs, || format!("minors differ: {ours:?}"))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!("11 binomials reproduced in {t:?}"))
}

fn koszul_reproduction() -> Outcome {
    let a = InnerMinor { lower: (1, 1), upper: (2, 2) };
    let b = InnerMinor { lower: (3, 3), upper: (4, 4) };
    let mut notes = Vec::new();
    for name in ["fig_restricted_a", "fig_restricted_b"] {
        let c = fixture(name).and_then(|f| f.cells()).map_err(|e| e.to_string())?;
        let model = ToricModel::new(&c);
        for field in [FieldChoice::Rational, GF] {
            let start = Instant::now();
            let minimal = koszul_pair_minimal(&model, &a, &b, field).map_err(|e| e.to_string())?;
            let t = start.elapsed();
            ensure(minimal, || format!("{name} over {field}: pair is not minimal"))?;
            ensure(t < Duration::from_secs(5), || format!("{name} over {field} took {t:?}"))?;
            notes.push(format!("{name}/{field} {t:?}"));
        }
    }
    Ok(notes.join(", "))
}

fn main_sweep() -> Outcome {
    let r = sweep(Theorem::Main, 8)?;
    let related = r.tally("linearly_related");
    let pairs = r.tally("koszul_pair");
    ensure(related + pairs == r.item_count, || format!("{related} related + {pairs} with pairs != {}", r.item_count))?;
    Ok(format!("{} items, {related} linearly related, {pairs} with a Koszul pair, {} ms", r.item_count, r.runtime_ms))
}

fn degree_bound() -> Outcome {
    let r = sweep(Theorem::DegreeBound, 8)?;
    ensure(r.tally("violation") == 0, || "violations recorded".into())?;
    Ok(format!("{} items, no first syzygies in degrees 5 and 6, {} ms", r.item_count, r.runtime_ms))
}

fn linear_sweep() -> Outcome {
    let r = sweep(Theorem::Linear, 8)?;
    // one straight strip per length 1..=8
    ensure(r.tally("linear_resolution") == 8, || format!("{} linear items", r.tally("linear_resolution")))?;
    Ok(format!("{} items, linear resolution exactly on the 8 strips", r.item_count))
}

fn square_regularity() -> Outcome {
    let square = CellCollection::from_grid("##\n##").map_err(|e| e.to_string())?;
    let counts = common::hilbert_counts(square.cells(), 2);
    ensure(counts == [1, 9, 36], || format!("Hilbert counts {counts:?}"))?;
    let oracle_h = common::h_vector_by_sums(square.cells());
    let v = resolution_verdict(&square).map_err(|e| e.to_string())?;
    ensure(v.h_vector.entries() == oracle_h.as_slice(), || format!("h-vector {} vs counted {oracle_h:?}", v.h_vector))?;
    ensure(v.h_vector.entries() == [1, 4, 1], || format!("h-vector {}", v.h_vector))?;
    ensure(v.regularity == Some(3), || format!("regularity {:?}", v.regularity))?;
    Ok("h = (1,4,1), Hilbert counts 1, 9, 36, regularity 3".into())
}

fn gorenstein_stacks() -> Outcome {
    let r = sweep(Theorem::GorensteinStack, 8)?;
    let n = fixtures_hold(&["fig_stack_right", "fig_gorenstein", "fig_width_1", "fig_width_2", "fig_width_3"])?;
    Ok(format!("{} stacks, {} Gorenstein; {n} fixture checks", r.item_count, r.tally("gorenstein")))
}

fn extremal_stacks() -> Outcome {
    let r = sweep(Theorem::Stack, 8)?;
    let extremal: Vec<CellCollection> = r
        .items_with("extremal_gorenstein")
        .map(|i| CellCollection::from_grid(&i.item.replace('/', "\n")))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(extremal.len() == 2, || format!("{} extremal stacks", extremal.len()))?;
    ensure(extremal.iter().all(is_extremal_stack_shape), || "an extremal stack is neither shape".into())?;
    ensure(!extremal[0].is_isomorphic(&extremal[1]), || "both extremal stacks are the same shape".into())?;
    fixtures_hold(&["fig_extremalstack_L", "fig_extremalstack_square"])?;
    Ok(format!("{} stacks; (1,q,1) only for the L-tromino and the square", r.item_count))
}

fn poset_h_vectors() -> Outcome {
    let expected: [&[i64]; 3] = [&[1, 2, 1], &[1, 3, 1], &[1, 4, 1]];
    for (k, h) in expected.iter().enumerate() {
        let name = format!("poset_fig_{}", k + 1);
        let f = fixture(&name).map_err(|e| e.to_string())?;
        let Ok(Payload::Poset(p)) = f.payload() else { return Err(format!("{name} is not a poset")) };
        let l = polyideal::lattice::order_ideal_lattice(&p).map_err(|e| e.to_string())?;
        let got = l.h_vector().map_err(|e| e.to_string())?;
        ensure(got.entries() == *h, || format!("{name}: {got}"))?;
    }
    Ok("(1,2,1), (1,3,1), (1,4,1)".into())
}

fn hibi_cross_oracle() -> Outcome {
    let r = sweep(Theorem::HibiHVector, 6)?;
    ensure(r.tally("agree") == r.item_count, || "disagreement".into())?;
    Ok(format!("{} posets, descents = Hilbert series, {} ms", r.item_count, r.runtime_ms))
}

fn hibi_classifications() -> Outcome {
    let one = sweep(Theorem::HibiOne, 6)?;
    let two = sweep(Theorem::HibiTwo, 6)?;
    ensure(two.tally("extremal_gorenstein") == 4, || format!("{} extremal lattices", two.tally("extremal_gorenstein")))?;
    // independent count from descent h-vectors of simple lattices
    let (mut linear, mut extremal) = (0, 0);
    for p in posets(6).map_err(|e| e.to_string())? {
        let n = p.len();
        let lt: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| p.less(a, b)).collect()).collect();
        let universal = (0..n).any(|a| (0..n).all(|b| a == b || lt[a][b] || lt[b][a]));
        if universal {
            continue;
        }
        let h = common::descent_h_vector(&lt);
        if h.len() <= 2 {
            linear += 1;
            ensure(is_chain_plus_point(&p), || format!("linear but not chain plus point: {:?}", p.covers()))?;
        }
        if h.len() == 3 && h[2] == 1 {
            extremal += 1;
        }
    }
    ensure(linear == one.tally("linear_resolution"), || format!("{linear} linear by descents vs {}", one.tally("linear_resolution")))?;
    ensure(extremal == 4, || format!("{extremal} extremal by descents"))?;
    let n = fixtures_hold(&["poset_flattice_1", "poset_flattice_2", "poset_flattice_3", "poset_flattice_4", "poset_plane"])?;
    Ok(format!("{linear} linear (chain plus point), exactly 4 extremal; {n} fixture checks"))
}

fn oracle_self_consistency() -> Outcome {
    let mut degrees = 0;
    for f in corpus() {
        let Ok(payload) = f.payload() else { return Err(format!("{} failed to load", f.name)) };
        for c in payload.collections().map_err(|e| e.to_string())? {
            let model = ToricModel::new(&c);
            let mut engines = [Syzygies::new(&model, FieldChoice::Rational), Syzygies::new(&model, GF)];
            for d in [3usize, 4] {
                let layers = model.semigroup.layers(d, 1 << 20).map_err(|e| e.to_string())?;
                for h in layers.last().into_iter().flatten() {
                    let complex = divisor_complex(&model.semigroup, h).map_err(|e| e.to_string())?;
                    let mut seen = Vec::new();
                    for (engine, field) in engines.iter_mut().zip([FieldChoice::Rational, GF]) {
                        let h1 = complex.reduced_homology_rank(1, field).map_err(|e| e.to_string())?;
                        let slice = engine.syzygy_slice(h).map_err(|e| e.to_string())?;
                        ensure(slice.minimal_dim == h1, || format!("{} at {h:?} over {field}: slice {} vs homology {h1}", f.name, slice.minimal_dim))?;
                        seen.push(h1);
                    }
                    ensure(seen[0] == seen[1], || format!("{} at {h:?}: QQ {} vs GF {}", f.name, seen[0], seen[1]))?;
                    degrees += 1;
                }
            }
        }
    }
    Ok(format!("{degrees} multidegrees agree over QQ and GF(32003)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("generator fidelity", generator_fidelity),
        ("Koszul pair reproduction", koszul_reproduction),
        ("linearly related sweep", main_sweep),
        ("no first syzygies beyond degree 4", degree_bound),
        ("linear resolution sweep", linear_sweep),
        ("regularity of the square", square_regularity),
        ("Gorenstein stack sweep", gorenstein_stacks),
        ("extremal Gorenstein stacks", extremal_stacks),
        ("lattice h-vectors", poset_h_vectors),
        ("descent and Hilbert series h-vectors", hibi_cross_oracle),
        ("join-meet ideal classifications", hibi_classifications),
        ("oracle self-consistency", oracle_self_consistency),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{:.1?}]", k + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{:.1?}]", k + 1, start.elapsed());
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
