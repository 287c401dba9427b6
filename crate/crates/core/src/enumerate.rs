//! Exhaustive enumeration of small objects up to isomorphism.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::Serialize;

use crate::classification::stack_orientation;
use crate::error::{Error, Result};
use crate::lattice::Poset;
use crate::polyomino::{Cell, CellCollection};

pub const DEFAULT_CELL_CAP: usize = 10;
pub const DEFAULT_POSET_ENUM_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumKind {
    Convex,
    Stack,
    Poset,
}

impl FromStr for EnumKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convex" => Ok(EnumKind::Convex),
            "stack" => Ok(EnumKind::Stack),
            "poset" => Ok(EnumKind::Poset),
            other => Err(Error::Malformed(format!("unknown enumeration kind {other:?}; expected convex, stack or poset"))),
        }
    }
}

fn check_bound(bound: usize, cap: usize, what: &str) -> Result<()> {
    if bound > cap {
        return Err(Error::ResourceCap(format!("{what} bound {bound} exceeds the cap {cap}")));
    }
    Ok(())
}

/// Canonical forms of all polyominoes with `1..=bound` cells, grown one
/// cell at a time; grouped by size.
pub fn free_polyominoes(bound: usize, cap: usize) -> Result<Vec<Vec<CellCollection>>> {
    check_bound(bound, cap, "cell")?;
    let mut levels: Vec<Vec<CellCollection>> = Vec::new();
    if bound == 0 {
        return Ok(levels);
    }
    levels.push(vec![CellCollection::new([(1, 1)])?]);
    while levels.len() < bound {
        let mut next: BTreeSet<CellCollection> = BTreeSet::new();
        for p in levels.last().unwrap() {
            let cells: BTreeSet<Cell> = p.cells().iter().copied().collect();
            for &(x, y) in &cells {
                for nb in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                    if cells.contains(&nb) {
                        continue;
                    }
                    let grown = CellCollection::new(cells.iter().copied().chain([nb]))?;
                    next.insert(grown.canonical_form());
                }
            }
        }
        levels.push(next.into_iter().collect());
    }
    Ok(levels)
}

/// One representative per isomorphism class of convex polyominoes with at
/// most `bound` cells, ordered by size and then cell list.
pub fn convex_polyominoes(bound: usize) -> Result<Vec<CellCollection>> {
    convex_polyominoes_capped(bound, DEFAULT_CELL_CAP)
}

pub fn convex_polyominoes_capped(bound: usize, cap: usize) -> Result<Vec<CellCollection>> {
    Ok(free_polyominoes(bound, cap)?.into_iter().flatten().filter(|p| p.is_convex()).collect())
}

/// Convex polyominoes with some orientation that is a stack polyomino; each
/// is returned in the first such orientation.
pub fn stack_polyominoes(bound: usize) -> Result<Vec<CellCollection>> {
    stack_polyominoes_capped(bound, DEFAULT_CELL_CAP)
}

pub fn stack_polyominoes_capped(bound: usize, cap: usize) -> Result<Vec<CellCollection>> {
    Ok(convex_polyominoes_capped(bound, cap)?.iter().filter_map(stack_orientation).collect())
}

/// One poset per isomorphism class with `1..=bound` elements. Posets of size
/// `n` arise from those of size `n-1` by adding a maximal element above an
/// order ideal.
pub fn posets(bound: usize) -> Result<Vec<Poset>> {
    posets_capped(bound, DEFAULT_POSET_ENUM_CAP)
}

pub fn posets_capped(bound: usize, cap: usize) -> Result<Vec<Poset>> {
    check_bound(bound, cap, "poset")?;
    let mut out = Vec::new();
    let mut level = vec![Poset::antichain(0)];
    for n in 1..=bound {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for p in &level {
            for ideal in ideals_unbounded(p) {
                // new element n-1 sits above exactly the elements of `ideal`
                let mut rel = p.covers().to_vec();
                rel.extend((0..n - 1).filter(|&a| ideal >> a & 1 == 1).map(|a| (a, n - 1)));
                let q = Poset::from_relations(n, &rel)?;
                if seen.insert(q.canonical_key()) {
                    next.push(q);
                }
            }
        }
        next.sort_by_key(|q| q.canonical_key());
        out.extend(next.iter().cloned());
        level = next;
    }
    Ok(out)
}

fn ideals_unbounded(p: &Poset) -> Vec<u64> {
    let n = p.len();
    let down: Vec<u64> = (0..n).map(|b| p.down_mask(b)).collect();
    (0u64..1 << n).filter(|&mask| (0..n).all(|b| mask >> b & 1 == 0 || down[b] & !mask == 0)).collect()
}
