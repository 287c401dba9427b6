//! Cell collections on the integer grid.
//!
//! A cell is named by its lower-left corner. Collections are always stored
//! normalized: the smallest cell x- and y-coordinates are 1, so the vertex
//! bounding box is `[(1,1),(m,n)]`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Cell = (i32, i32);
pub type Vertex = (i32, i32);

/// One of the eight symmetries of the square, acting on cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub swap: bool,
    pub flip_x: bool,
    pub flip_y: bool,
}

impl Symmetry {
    pub fn all() -> impl Iterator<Item = Symmetry> {
        (0..8).map(|k| Symmetry { swap: k & 4 != 0, flip_x: k & 2 != 0, flip_y: k & 1 != 0 })
    }

    pub fn identity() -> Symmetry {
        Symmetry { swap: false, flip_x: false, flip_y: false }
    }

    fn apply(self, (x, y): Cell) -> Cell {
        let (a, b) = if self.swap { (y, x) } else { (x, y) };
        // a cell [a, a+1] reflects to [-a-1, -a]
        let a = if self.flip_x { -a - 1 } else { a };
        let b = if self.flip_y { -b - 1 } else { b };
        (a, b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellCollection {
    cells: Vec<Cell>,
}

#[derive(Serialize, Deserialize)]
struct CellsJson {
    cells: Vec<[i64; 2]>,
}

impl CellCollection {
    /// Builds a collection, removing duplicates and translating it so the
    /// lower-left corner of the bounding box is `(1,1)`.
    pub fn new(cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let set: BTreeSet<Cell> = cells.into_iter().collect();
        if set.is_empty() {
            return Err(Error::Empty);
        }
        let min_x = set.iter().map(|c| c.0).min().unwrap();
        let min_y = set.iter().map(|c| c.1).min().unwrap();
        let mut cells: Vec<Cell> = set.into_iter().map(|(x, y)| (x - min_x + 1, y - min_y + 1)).collect();
        cells.sort_unstable();
        Ok(CellCollection { cells })
    }

    /// Parses either the JSON form or an ASCII grid, whichever the text looks like.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_grid(text)
        }
    }

    /// ASCII grid: `#` marks a cell, `.` an empty square, top row first.
    pub fn from_grid(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().map(|l| l.trim_end()).collect();
        let first = lines.iter().position(|l| !l.is_empty());
        let last = lines.iter().rposition(|l| !l.is_empty());
        let (first, last) = match (first, last) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Empty),
        };
        let rows = &lines[first..=last];
        let width = rows[0].chars().count();
        let height = rows.len() as i32;
        let mut cells = Vec::new();
        for (r, line) in rows.iter().enumerate() {
            if line.chars().count() != width {
                return Err(Error::Malformed(format!(
                    "grid row {} has width {}, expected {}",
                    r + 1,
                    line.chars().count(),
                    width
                )));
            }
            let y = height - r as i32;
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '#' => cells.push((c as i32 + 1, y)),
                    '.' => {}
                    other => {
                        return Err(Error::Malformed(format!("unexpected character {other:?} in grid row {}", r + 1)))
                    }
                }
            }
        }
        Self::new(cells)
    }

    /// JSON form `{"cells": [[x,y], ...]}` with positive coordinates.
    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: CellsJson = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let mut cells = Vec::with_capacity(parsed.cells.len());
        for [x, y] in parsed.cells {
            if x < 1 || y < 1 || x > i32::MAX as i64 || y > i32::MAX as i64 {
                return Err(Error::Malformed(format!("cell ({x},{y}) is not a pair of positive integers")));
            }
            cells.push((x as i32, y as i32));
        }
        Self::new(cells)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "cells": self.cells.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>() })
    }

    pub fn to_grid(&self) -> String {
        let (m, n) = self.bbox();
        let mut out = String::new();
        for y in (1..n).rev() {
            for x in 1..m {
                out.push(if self.contains((x, y)) { '#' } else { '.' });
            }
            out.push('\n');
        }
        out
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }

    /// Upper-right corner `(m,n)` of the vertex bounding box.
    pub fn bbox(&self) -> (i32, i32) {
        let m = self.cells.iter().map(|c| c.0).max().unwrap() + 1;
        let n = self.cells.iter().map(|c| c.1).max().unwrap() + 1;
        (m, n)
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        let mut out = BTreeSet::new();
        for &(x, y) in &self.cells {
            out.extend([(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)]);
        }
        out
    }

    pub fn has_vertex(&self, (x, y): Vertex) -> bool {
        [(x, y), (x - 1, y), (x, y - 1), (x - 1, y - 1)].iter().any(|&c| self.contains(c))
    }

    /// True iff the cells are edge-connected.
    pub fn is_polyomino(&self) -> bool {
        let mut seen = vec![false; self.cells.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(i) = queue.pop_front() {
            let (x, y) = self.cells[i];
            for nb in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                if let Ok(j) = self.cells.binary_search(&nb) {
                    if !seen[j] {
                        seen[j] = true;
                        reached += 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        reached == self.cells.len()
    }

    fn runs_contiguous(groups: BTreeMap<i32, Vec<i32>>) -> bool {
        groups.values().all(|v| {
            let lo = *v.iter().min().unwrap();
            let hi = *v.iter().max().unwrap();
            (hi - lo + 1) as usize == v.len()
        })
    }

    pub fn is_row_convex(&self) -> bool {
        let mut rows: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
        for &(x, y) in &self.cells {
            rows.entry(y).or_default().push(x);
        }
        Self::runs_contiguous(rows)
    }

    pub fn is_column_convex(&self) -> bool {
        let mut cols: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
        for &(x, y) in &self.cells {
            cols.entry(x).or_default().push(y);
        }
        Self::runs_contiguous(cols)
    }

    /// True for row and column convex polyominoes; false for everything else,
    /// including disconnected collections.
    pub fn is_convex(&self) -> bool {
        self.is_polyomino() && self.is_row_convex() && self.is_column_convex()
    }

    pub fn ensure_convex(&self) -> Result<()> {
        if !self.is_polyomino() {
            Err(Error::NotPolyomino)
        } else if !(self.is_row_convex() && self.is_column_convex()) {
            Err(Error::NotConvex)
        } else {
            Ok(())
        }
    }

    pub fn transform(&self, sym: Symmetry) -> CellCollection {
        Self::new(self.cells.iter().map(|&c| sym.apply(c))).expect("transform keeps cells")
    }

    /// Lexicographically least normalized cell list over the dihedral group.
    pub fn canonical_form(&self) -> CellCollection {
        Symmetry::all().map(|s| self.transform(s)).min().unwrap()
    }

    pub fn is_isomorphic(&self, other: &CellCollection) -> bool {
        self.len() == other.len() && self.canonical_form() == other.canonical_form()
    }

    /// Collection induced by the vertex columns `cols` and vertex rows `rows`:
    /// cell `(k,l)` is present iff the four points `(cols[k], rows[l])`,
    /// `(cols[k+1], rows[l])`, ... all lie in the vertex set.
    pub fn induced(&self, cols: &[i32], rows: &[i32]) -> Result<CellCollection> {
        let (m, n) = self.bbox();
        check_selection(cols, m, "column")?;
        check_selection(rows, n, "row")?;
        let verts = self.vertices();
        let mut cells = Vec::new();
        for k in 0..cols.len() - 1 {
            for l in 0..rows.len() - 1 {
                let corners = [
                    (cols[k], rows[l]),
                    (cols[k + 1], rows[l]),
                    (cols[k], rows[l + 1]),
                    (cols[k + 1], rows[l + 1]),
                ];
                if corners.iter().all(|v| verts.contains(v)) {
                    cells.push((k as i32 + 1, l as i32 + 1));
                }
            }
        }
        CellCollection::new(cells)
    }

    pub fn shape_profile(&self) -> Result<ShapeProfile> {
        self.ensure_convex()?;
        let (m, n) = self.bbox();
        let verts = self.vertices();
        let span = |pred: &dyn Fn(&Vertex) -> bool, coord: fn(&Vertex) -> i32| {
            let vals: Vec<i32> = verts.iter().filter(|v| pred(v)).map(coord).collect();
            (*vals.iter().min().unwrap(), *vals.iter().max().unwrap())
        };
        let (i1, i2) = span(&|v| v.1 == 1, |v| v.0);
        let (i3, i4) = span(&|v| v.1 == n, |v| v.0);
        let (j1, j2) = span(&|v| v.0 == 1, |v| v.1);
        let (j3, j4) = span(&|v| v.0 == m, |v| v.1);
        let has = |v: Vertex| verts.contains(&v);
        Ok(ShapeProfile {
            m,
            n,
            corners: [has((1, 1)), has((m, 1)), has((1, n)), has((m, n))],
            inner_corners: [has((2, 2)), has((m - 1, 2)), has((2, n - 1)), has((m - 1, n - 1))],
            spans: Spans { i1, i2, i3, i4, j1, j2, j3, j4 },
        })
    }

    /// Width/height profile of a stack polyomino: a column convex polyomino
    /// whose bottom row of cells is full.
    pub fn stack_profile(&self) -> Result<StackProfile> {
        if !self.is_polyomino() {
            return Err(Error::NotStack("cells are not connected".into()));
        }
        if !self.is_column_convex() {
            return Err(Error::NotStack("not column convex".into()));
        }
        let (m, _) = self.bbox();
        let mut heights = Vec::with_capacity(m as usize - 1);
        for x in 1..m {
            if !self.contains((x, 1)) {
                return Err(Error::NotStack(format!("bottom row misses column {x}")));
            }
            heights.push(self.cells.iter().filter(|c| c.0 == x).count());
        }
        let height = *heights.iter().max().unwrap();
        let truncations: Vec<usize> = (0..height).map(|k| heights.iter().filter(|&&h| h > k).count()).collect();
        let mut jumps = vec![0];
        jumps.extend((1..height).filter(|&k| truncations[k] < truncations[k - 1]));
        Ok(StackProfile { width: truncations[0], height, truncations, jumps })
    }
}

fn check_selection(sel: &[i32], max: i32, what: &str) -> Result<()> {
    if sel.len() < 2 {
        return Err(Error::BadSelection(format!("need at least two {what} indices")));
    }
    if sel.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadSelection(format!("{what} indices must be strictly increasing")));
    }
    if sel[0] < 1 || sel[sel.len() - 1] > max {
        return Err(Error::BadSelection(format!("{what} indices must lie in 1..={max}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Spans {
    pub i1: i32,
    pub i2: i32,
    pub i3: i32,
    pub i4: i32,
    pub j1: i32,
    pub j2: i32,
    pub j3: i32,
    pub j4: i32,
}

/// Boundary data of a convex polyomino inside its bounding box `[(1,1),(m,n)]`.
///
/// `i1..i2` is the x-span of the vertices on the bottom row, `i3..i4` on the
/// top row, `j1..j2` the y-span on the left column and `j3..j4` on the right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeProfile {
    pub m: i32,
    pub n: i32,
    /// Presence of `(1,1)`, `(m,1)`, `(1,n)`, `(m,n)`.
    pub corners: [bool; 4],
    /// Presence of `(2,2)`, `(m-1,2)`, `(2,n-1)`, `(m-1,n-1)`.
    pub inner_corners: [bool; 4],
    pub spans: Spans,
}

impl ShapeProfile {
    pub fn missing_corners(&self) -> usize {
        self.corners.iter().filter(|&&c| !c).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StackProfile {
    pub width: usize,
    pub height: usize,
    /// `truncations[k]` is the width of the stack with its `k` bottom rows removed.
    pub truncations: Vec<usize>,
    /// Row counts `k` at which the width strictly drops, preceded by `0`
    /// (the untruncated stack).
    pub jumps: Vec<usize>,
}

impl StackProfile {
    pub fn height_after(&self, k: usize) -> usize {
        self.height - k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(s: &str) -> CellCollection {
        CellCollection::from_grid(s).unwrap()
    }

    #[test]
    fn parses_single_cell_and_domino() {
        let c = grid("#");
        assert_eq!(c.cells(), &[(1, 1)]);
        assert_eq!(c.bbox(), (2, 2));
        let d = grid("##");
        assert_eq!(d.cells(), &[(1, 1), (2, 1)]);
        assert_eq!(d.bbox(), (3, 2));
    }

    #[test]
    fn grid_rows_read_top_first() {
        let c = grid("#.\n##");
        assert_eq!(c.cells(), &[(1, 1), (1, 2), (2, 1)]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert_eq!(CellCollection::from_grid("\n\n"), Err(Error::Empty));
        assert_eq!(CellCollection::from_grid("..\n.."), Err(Error::Empty));
        assert!(matches!(CellCollection::from_grid("##\n#"), Err(Error::Malformed(_))));
        assert!(matches!(CellCollection::from_grid("#x"), Err(Error::Malformed(_))));
    }

    #[test]
    fn padding_is_normalized_away() {
        let c = grid("....\n.##.\n....");
        assert_eq!(c, grid("##"));
    }

    #[test]
    fn json_round_trip() {
        let c = CellCollection::from_json(r#"{"cells": [[3,4],[4,4],[4,5]]}"#).unwrap();
        assert_eq!(c.cells(), &[(1, 1), (2, 1), (2, 2)]);
        let back = CellCollection::from_json(&c.to_json().to_string()).unwrap();
        assert_eq!(back, c);
        assert!(CellCollection::from_json(r#"{"cells": [[0,1]]}"#).is_err());
        assert!(CellCollection::from_json(r#"{"cells": []}"#).is_err());
    }

    #[test]
    fn normalization_is_idempotent() {
        let c = CellCollection::new([(5, 7), (6, 7)]).unwrap();
        assert_eq!(CellCollection::new(c.cells().iter().copied()).unwrap(), c);
        assert_eq!(CellCollection::parse(&c.to_grid()).unwrap(), c);
    }

    #[test]
    fn connectivity() {
        assert!(grid("#").is_polyomino());
        assert!(!grid("#.#").is_polyomino());
        assert!(!grid(".#\n#.").is_polyomino());
    }

    #[test]
    fn convexity() {
        assert!(grid(".#.\n###\n.#.").is_convex());
        assert!(!grid("###\n#.#").is_convex());
        assert!(grid("#").is_convex());
        assert_eq!(grid("#.#").ensure_convex(), Err(Error::NotPolyomino));
        assert_eq!(grid("###\n#.#").ensure_convex(), Err(Error::NotConvex));
    }

    #[test]
    fn vertex_counts() {
        assert_eq!(grid("#").vertices().len(), 4);
        assert_eq!(grid("##").vertices().len(), 6);
        assert_eq!(grid("###\n###").vertices().len(), 12);
        let c = grid(".#\n##");
        for v in c.vertices() {
            assert!(c.has_vertex(v));
        }
        assert!(!c.has_vertex((1, 3)));
    }

    #[test]
    fn canonical_form_of_orbits() {
        let l = grid("#.\n##");
        let canon = l.canonical_form();
        for s in Symmetry::all() {
            assert_eq!(l.transform(s).canonical_form(), canon);
        }
        assert_eq!(grid("#").canonical_form(), grid("#"));
        assert_eq!(grid("#\n#").canonical_form(), grid("##").canonical_form());
        assert!(!grid("##\n##").is_isomorphic(&grid("####")));
    }

    #[test]
    fn induced_identity_and_errors() {
        let c = grid(".#.\n###\n.#.");
        let (m, n) = c.bbox();
        let cols: Vec<i32> = (1..=m).collect();
        let rows: Vec<i32> = (1..=n).collect();
        assert_eq!(c.induced(&cols, &rows).unwrap(), c);
        assert!(c.induced(&[1, 1, 2], &rows).is_err());
        assert!(c.induced(&[1, 9], &rows).is_err());
        assert!(c.induced(&[1], &rows).is_err());
    }

    #[test]
    fn shape_profile_of_rectangle() {
        let p = grid("###\n###").shape_profile().unwrap();
        assert_eq!((p.m, p.n), (4, 3));
        assert_eq!(p.corners, [true; 4]);
        assert_eq!(p.spans, Spans { i1: 1, i2: 4, i3: 1, i4: 4, j1: 1, j2: 3, j3: 1, j4: 3 });
        assert!(grid("#.#").shape_profile().is_err());
    }

    #[test]
    fn plus_misses_all_corners() {
        let p = grid(".#.\n###\n.#.").shape_profile().unwrap();
        assert_eq!(p.corners, [false; 4]);
        assert_eq!(p.inner_corners, [true; 4]);
        assert_eq!(p.spans, Spans { i1: 2, i2: 3, i3: 2, i4: 3, j1: 2, j2: 3, j3: 2, j4: 3 });
    }

    #[test]
    fn stack_profiles() {
        let one = grid("#").stack_profile().unwrap();
        assert_eq!((one.width, one.height), (1, 1));
        assert_eq!(one.jumps, vec![0]);
        let s = grid("..#\n.##\n###").stack_profile().unwrap();
        assert_eq!(s.truncations, vec![3, 2, 1]);
        assert_eq!(s.jumps, vec![0, 1, 2]);
        assert!(grid("##\n.#").stack_profile().is_err());
        assert!(grid("#.\n..\n##").stack_profile().is_err());
    }
}
