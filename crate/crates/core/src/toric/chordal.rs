//! Chords of even cycles in the bipartite graph of a cell collection.
//!
//! The toric ideal of a bipartite graph has a quadratic Gröbner basis exactly
//! when every cycle of length at least six has a chord.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyomino::{CellCollection, Vertex};

/// Bipartite graph on row nodes `s_1..s_m` and column nodes `t_1..t_n`; the
/// edge `{s_i, t_j}` stands for the vertex `(i,j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub m: usize,
    pub n: usize,
    /// `adj[i-1]` has bit `j-1` set for each edge `{s_i, t_j}`.
    pub adj: Vec<u64>,
}

impl BipartiteGraph {
    pub fn from_edges(m: usize, n: usize, edges: impl IntoIterator<Item = Vertex>) -> Self {
        assert!(m + n <= 64, "graph too large");
        let mut adj = vec![0u64; m];
        for (i, j) in edges {
            adj[i as usize - 1] |= 1 << (j - 1);
        }
        BipartiteGraph { m, n, adj }
    }

    pub fn of_collection(c: &CellCollection) -> Self {
        let (m, n) = c.bbox();
        Self::from_edges(m as usize, n as usize, c.vertices())
    }

    pub fn has_edge(&self, (i, j): Vertex) -> bool {
        i >= 1 && j >= 1 && (i as usize) <= self.m && (j as usize) <= self.n && self.adj[i as usize - 1] >> (j - 1) & 1 == 1
    }

    /// Neighbor masks over the combined node set: rows `0..m`, columns `m..m+n`.
    fn node_adjacency(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.m + self.n];
        for i in 0..self.m {
            for j in 0..self.n {
                if self.adj[i] >> j & 1 == 1 {
                    out[i] |= 1 << (self.m + j);
                    out[self.m + j] |= 1 << i;
                }
            }
        }
        out
    }

    /// Converts a node cycle starting at a row node into vertex form
    /// `a_1, ..., a_{2r}` with `a_{2k-1} = (i_k, j_k)`, `a_{2k} = (i_{k+1}, j_k)`.
    fn cycle_vertices(&self, nodes: &[usize]) -> Vec<Vertex> {
        let start = nodes.iter().position(|&v| v < self.m).unwrap();
        let rot: Vec<usize> = nodes[start..].iter().chain(&nodes[..start]).copied().collect();
        let r = rot.len() / 2;
        let mut out = Vec::with_capacity(rot.len());
        for k in 0..r {
            let i = rot[2 * k] as i32 + 1;
            let j = (rot[2 * k + 1] - self.m) as i32 + 1;
            let i_next = rot[(2 * k + 2) % rot.len()] as i32 + 1;
            out.push((i, j));
            out.push((i_next, j));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampledChord {
    pub cycle: Vec<Vertex>,
    /// The vertex of the collection that joins two non-consecutive nodes.
    pub chord: Vertex,
    /// Whether the chord came from the sandwich pivot rather than a search.
    pub from_pivot: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GbCertificate {
    pub quadratic: bool,
    /// A chordless cycle of length at least six, in vertex form.
    pub chordless_cycle: Option<Vec<Vertex>>,
    pub induced_paths_explored: usize,
    pub sampled_chords: Vec<SampledChord>,
}

/// Decides whether every cycle of length at least six has a chord.
pub fn quadratic_gb_certificate(g: &BipartiteGraph, samples: usize) -> GbCertificate {
    let adj = g.node_adjacency();
    let total = g.m + g.n;
    let max_len = 2 * g.m.min(g.n);
    let mut explored = 0;
    let mut witness = None;
    'outer: for s in 0..total {
        let mut path = vec![s];
        if let Some(cycle) = induced_cycles_from(&adj, s, &mut path, 1u64 << s, max_len, &mut explored) {
            witness = Some(g.cycle_vertices(&cycle));
            break 'outer;
        }
    }
    let sampled_chords = if witness.is_none() { sample_chords(g, &adj, samples) } else { Vec::new() };
    GbCertificate { quadratic: witness.is_none(), chordless_cycle: witness, induced_paths_explored: explored, sampled_chords }
}

/// Extends induced paths whose nodes all exceed the start node; returns the
/// first chordless cycle of length at least six.
fn induced_cycles_from(adj: &[u64], s: usize, path: &mut Vec<usize>, on_path: u64, max_len: usize, explored: &mut usize) -> Option<Vec<usize>> {
    *explored += 1;
    let v = *path.last().unwrap();
    let mut cand = adj[v] & !on_path & !((1u64 << (s + 1)) - 1);
    while cand != 0 {
        let w = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        let touches = adj[w] & on_path;
        if path.len() >= 3 && touches == (1 << v) | (1 << s) {
            if path.len() + 1 >= 6 {
                let mut cycle = path.clone();
                cycle.push(w);
                return Some(cycle);
            }
            continue;
        }
        if touches != 1 << v || path.len() + 1 >= max_len {
            continue;
        }
        path.push(w);
        let found = induced_cycles_from(adj, s, path, on_path | 1 << w, max_len, explored);
        path.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Finds up to `limit` simple cycles of length at least six and names a chord
/// of each, preferring the one given by the sandwich pivot.
fn sample_chords(g: &BipartiteGraph, adj: &[u64], limit: usize) -> Vec<SampledChord> {
    let mut cycles = Vec::new();
    for s in 0..g.m {
        if cycles.len() >= limit {
            break;
        }
        let mut path = vec![s];
        simple_cycles(adj, s, &mut path, 1 << s, 2 * g.m.min(g.n), limit, &mut cycles);
    }
    cycles
        .into_iter()
        .map(|nodes| {
            let cycle = g.cycle_vertices(&nodes);
            let rows: Vec<i64> = cycle.iter().step_by(2).map(|v| v.0 as i64).chain([cycle[0].0 as i64]).collect();
            let pivot = find_chord_pivot(&rows).ok().map(|(s, t)| (cycle[2 * t - 2].0, cycle[2 * s - 2].1));
            match pivot.filter(|&v| g.has_edge(v)) {
                Some(chord) => SampledChord { cycle, chord, from_pivot: true },
                None => {
                    let chord = any_chord(g, &cycle).expect("cycle sampled from a chordal graph");
                    SampledChord { cycle, chord, from_pivot: false }
                }
            }
        })
        .collect()
}

fn simple_cycles(adj: &[u64], s: usize, path: &mut Vec<usize>, on_path: u64, max_len: usize, limit: usize, out: &mut Vec<Vec<usize>>) {
    let v = *path.last().unwrap();
    let mut cand = adj[v] & !((1u64 << (s + 1)) - 1);
    while cand != 0 && out.len() < limit {
        let w = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        if on_path >> w & 1 == 1 {
            continue;
        }
        if adj[w] >> s & 1 == 1 && path.len() + 1 >= 6 && path[1] < w {
            let mut cycle = path.clone();
            cycle.push(w);
            out.push(cycle);
        }
        if path.len() + 1 < max_len {
            path.push(w);
            simple_cycles(adj, s, path, on_path | 1 << w, max_len, limit, out);
            path.pop();
        }
    }
}

fn any_chord(g: &BipartiteGraph, cycle: &[Vertex]) -> Option<Vertex> {
    let rows: Vec<i32> = cycle.iter().step_by(2).map(|v| v.0).collect();
    let cols: Vec<i32> = cycle.iter().step_by(2).map(|v| v.1).collect();
    for &i in &rows {
        for &j in &cols {
            if g.has_edge((i, j)) && !cycle.contains(&(i, j)) {
                return Some((i, j));
            }
        }
    }
    None
}

/// For `f` of length `r+1` with `r >= 3`, `f(r+1) = f(1)` and `f` injective on
/// its first `r` entries, returns 1-based `(s, t)` with `f(s) < f(t) < f(s+1)`
/// or `f(s+1) < f(t) < f(s)`.
pub fn find_chord_pivot(f: &[i64]) -> Result<(usize, usize)> {
    if f.len() < 4 {
        return Err(Error::Precondition("sequence needs r >= 3, i.e. at least four entries".into()));
    }
    let r = f.len() - 1;
    if f[r] != f[0] {
        return Err(Error::Precondition("last entry must repeat the first".into()));
    }
    let mut seen = f[..r].to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("entries 1..r must be distinct".into()));
    }
    if f[0] > f[1] {
        let neg: Vec<i64> = f.iter().map(|v| -v).collect();
        return find_chord_pivot(&neg);
    }
    // 1-based accessor
    let at = |k: usize| f[k - 1];
    let mut q = 2;
    while q < r && at(q + 1) > at(q) {
        q += 1;
    }
    if q == r {
        return Ok((r, 2));
    }
    if at(q + 1) > at(1) {
        let target = at(q + 1);
        let s = (1..q).find(|&s| at(s) < target && target < at(s + 1)).expect("value between f(1) and f(q)");
        return Ok((s, q + 1));
    }
    Ok((q, 1))
}

pub fn is_pivot(f: &[i64], (s, t): (usize, usize)) -> bool {
    let r = f.len() - 1;
    if !(1..=r).contains(&s) || !(1..=r).contains(&t) {
        return false;
    }
    let (a, b, c) = (f[s - 1], f[t - 1], f[s]);
    (a < b && b < c) || (c < b && b < a)
}
