//! Brute-force recomputations used to confirm derived values. None of these
//! call into the library's algorithms beyond parsing.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

pub type Cell = (i32, i32);

pub fn vertex_union(cells: &[Cell]) -> BTreeSet<Cell> {
    cells.iter().flat_map(|&(x, y)| [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)]).collect()
}

/// Intervals `[a,b]` with `a < b` componentwise whose cells all lie in `cells`.
pub fn interval_count(cells: &[Cell]) -> usize {
    let set: HashSet<Cell> = cells.iter().copied().collect();
    let verts: Vec<Cell> = vertex_union(cells).into_iter().collect();
    let mut count = 0;
    for &(i, j) in &verts {
        for &(k, l) in &verts {
            if i < k && j < l && (i..k).all(|x| (j..l).all(|y| set.contains(&(x, y)))) {
                count += 1;
            }
        }
    }
    count
}

/// Corners of the bounding box not covered by any cell, found from the
/// cells adjacent to each corner.
pub fn missing_corner_count(cells: &[Cell]) -> usize {
    let set: HashSet<Cell> = cells.iter().copied().collect();
    let (x0, x1) = (cells.iter().map(|c| c.0).min().unwrap(), cells.iter().map(|c| c.0).max().unwrap());
    let (y0, y1) = (cells.iter().map(|c| c.1).min().unwrap(), cells.iter().map(|c| c.1).max().unwrap());
    [(x0, y0), (x1, y0), (x0, y1), (x1, y1)].iter().filter(|c| !set.contains(c)).count()
}

/// Hilbert function of the toric ring spanned by `s_x t_y` for the vertices,
/// by breadth-first sums, in degrees `0..=top`.
pub fn hilbert_counts(cells: &[Cell], top: usize) -> Vec<usize> {
    let verts: Vec<Cell> = vertex_union(cells).into_iter().collect();
    let xs: Vec<i32> = verts.iter().map(|v| v.0).collect::<BTreeSet<_>>().into_iter().collect();
    let ys: Vec<i32> = verts.iter().map(|v| v.1).collect::<BTreeSet<_>>().into_iter().collect();
    let gens: Vec<Vec<u8>> = verts
        .iter()
        .map(|&(x, y)| {
            let mut g = vec![0u8; xs.len() + ys.len()];
            g[xs.iter().position(|&a| a == x).unwrap()] = 1;
            g[xs.len() + ys.iter().position(|&b| b == y).unwrap()] = 1;
            g
        })
        .collect();
    let mut layer: HashSet<Vec<u8>> = HashSet::from([vec![0u8; xs.len() + ys.len()]]);
    let mut counts = vec![1];
    for _ in 0..top {
        layer = layer.iter().flat_map(|h| gens.iter().map(move |g| h.iter().zip(g).map(|(a, b)| a + b).collect())).collect();
        counts.push(layer.len());
    }
    counts
}

/// Krull dimension of a connected vertex set: columns plus rows minus one.
pub fn vertex_dimension(cells: &[Cell]) -> usize {
    let verts = vertex_union(cells);
    let xs: BTreeSet<i32> = verts.iter().map(|v| v.0).collect();
    let ys: BTreeSet<i32> = verts.iter().map(|v| v.1).collect();
    xs.len() + ys.len() - 1
}

/// Numerator of the Hilbert series: multiply the counts by `(1-t)^dim`.
/// Returns `None` if the truncated product is not yet stable.
pub fn h_from_counts(counts: &[usize], dim: usize) -> Option<Vec<i64>> {
    let mut poly: Vec<i64> = counts.iter().map(|&c| c as i64).collect();
    for _ in 0..dim {
        for k in (1..poly.len()).rev() {
            poly[k] -= poly[k - 1];
        }
    }
    let last_nonzero = poly.iter().rposition(|&c| c != 0)?;
    // need at least two trailing zeros to trust the cut
    if poly.len() < last_nonzero + 3 {
        return None;
    }
    poly.truncate(last_nonzero + 1);
    Some(poly)
}

pub fn h_vector_by_sums(cells: &[Cell]) -> Vec<i64> {
    let dim = vertex_dimension(cells);
    let mut top = dim + 2;
    loop {
        if let Some(h) = h_from_counts(&hilbert_counts(cells, top), dim) {
            return h;
        }
        top += 2;
    }
}

/// Strict order as a boolean matrix from 0-based cover pairs.
pub fn closure(n: usize, covers: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut lt = vec![vec![false; n]; n];
    for &(a, b) in covers {
        lt[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if lt[i][k] && lt[k][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    lt
}

/// Parses `{"n": .., "covers": [[a, b], ..]}` with 1-based labels.
pub fn poset_json(text: &str) -> (usize, Vec<(usize, usize)>) {
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    let n = v["n"].as_u64().unwrap() as usize;
    let covers = v["covers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_u64().unwrap() as usize - 1, p[1].as_u64().unwrap() as usize - 1))
        .collect();
    (n, covers)
}

/// Join-irreducible elements of a finite lattice order and their induced
/// strict order: elements with exactly one lower cover.
pub fn join_irreducibles(n: usize, covers: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let lt = closure(n, covers);
    let keep: Vec<usize> = (0..n).filter(|&b| covers.iter().filter(|c| c.1 == b).count() == 1).collect();
    keep.iter().map(|&a| keep.iter().map(|&b| lt[a][b]).collect()).collect()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Descent distribution over linear extensions, relative to a fixed natural
/// labeling (the first linear extension found). Trailing zeros trimmed.
pub fn descent_h_vector(lt: &[Vec<bool>]) -> Vec<i64> {
    let n = lt.len();
    let exts: Vec<Vec<usize>> =
        permutations(n).into_iter().filter(|p| (0..n).all(|i| (i + 1..n).all(|j| !lt[p[j]][p[i]]))).collect();
    let mut label = vec![0; n];
    for (k, &e) in exts[0].iter().enumerate() {
        label[e] = k;
    }
    let mut h = vec![0i64; n.max(1)];
    for p in &exts {
        h[p.windows(2).filter(|w| label[w[0]] > label[w[1]]).count()] += 1;
    }
    while h.len() > 1 && *h.last().unwrap() == 0 {
        h.pop();
    }
    h
}

/// Down-closed subsets of a poset given by its strict order.
pub fn order_ideals(lt: &[Vec<bool>]) -> Vec<u64> {
    let n = lt.len();
    (0u64..1 << n).filter(|&m| (0..n).all(|b| m >> b & 1 == 0 || (0..n).all(|a| !lt[a][b] || m >> a & 1 == 1))).collect()
}

pub fn incomparable_ideal_pairs(lt: &[Vec<bool>]) -> usize {
    let ideals = order_ideals(lt);
    let mut count = 0;
    for (i, &a) in ideals.iter().enumerate() {
        for &b in &ideals[i + 1..] {
            if a & b != a && a & b != b {
                count += 1;
            }
        }
    }
    count
}

/// Every maximal chain has the same number of elements.
pub fn all_maximal_chains_equal(lt: &[Vec<bool>]) -> bool {
    let n = lt.len();
    let covers = |a: usize, b: usize| lt[a][b] && !(0..n).any(|c| lt[a][c] && lt[c][b]);
    fn lengths(a: usize, n: usize, covers: &dyn Fn(usize, usize) -> bool, out: &mut BTreeSet<usize>, depth: usize) {
        let ups: Vec<usize> = (0..n).filter(|&b| covers(a, b)).collect();
        if ups.is_empty() {
            out.insert(depth);
        }
        for b in ups {
            lengths(b, n, covers, out, depth + 1);
        }
    }
    let mut seen = BTreeSet::new();
    for a in (0..n).filter(|&a| !(0..n).any(|b| lt[b][a])) {
        lengths(a, n, &covers, &mut seen, 1);
    }
    seen.len() <= 1
}
