//! Toric description of a cell collection: the vertex `(i,j)` becomes the
//! monomial `s_i t_j`, and the ideal of inner 2-minors is the kernel of that
//! substitution when the collection is convex.

pub mod chordal;
pub mod flow;
pub mod minors;
pub mod semigroup;

use rustc_hash::FxHashMap;

pub use chordal::{find_chord_pivot, quadratic_gb_certificate, BipartiteGraph, GbCertificate};
pub use minors::{inner_minors, InnerMinor};
pub use semigroup::{AffineSemigroup, HVector, Membership, MultiDegree};

use crate::polyomino::{CellCollection, Vertex};

/// Edge semigroup of a collection with one generator per vertex, in the
/// sorted vertex order.
pub fn semigroup_of(c: &CellCollection) -> AffineSemigroup {
    ToricModel::new(c).semigroup
}

/// A collection together with its variables, minors and semigroup.
#[derive(Clone, Debug)]
pub struct ToricModel {
    pub cells: CellCollection,
    pub m: usize,
    pub n: usize,
    /// Variables `x_v`, sorted; generator `k` of the semigroup is `vertices[k]`.
    pub vertices: Vec<Vertex>,
    pub minors: Vec<InnerMinor>,
    pub semigroup: AffineSemigroup,
    index: FxHashMap<Vertex, usize>,
}

impl ToricModel {
    pub fn new(c: &CellCollection) -> Self {
        let (m, n) = c.bbox();
        let (m, n) = (m as usize, n as usize);
        let vertices: Vec<Vertex> = c.vertices().into_iter().collect();
        let edges: Vec<(usize, usize)> = vertices.iter().map(|&(i, j)| (i as usize - 1, j as usize - 1)).collect();
        let semigroup = AffineSemigroup::bipartite(m, n, &edges);
        let index = vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        ToricModel { cells: c.clone(), m, n, vertices, minors: inner_minors(c), semigroup, index }
    }

    pub fn var(&self, v: Vertex) -> usize {
        self.index[&v]
    }

    pub fn ambient_dim(&self) -> usize {
        self.m + self.n
    }

    pub fn var_degree(&self, k: usize) -> MultiDegree {
        self.semigroup.generators()[k].clone()
    }

    pub fn minor_degree(&self, minor: &InnerMinor) -> MultiDegree {
        let mut h = vec![0u32; self.m + self.n];
        let ((i, j), (k, l)) = (minor.lower, minor.upper);
        h[i as usize - 1] += 1;
        h[k as usize - 1] += 1;
        h[self.m + j as usize - 1] += 1;
        h[self.m + l as usize - 1] += 1;
        h
    }

    /// Multidegree `sum h_v` of a monomial given by its variable indices.
    pub fn monomial_degree(&self, vars: &[usize]) -> MultiDegree {
        let mut h = vec![0u32; self.m + self.n];
        for &k in vars {
            let (i, j) = self.vertices[k];
            h[i as usize - 1] += 1;
            h[self.m + j as usize - 1] += 1;
        }
        h
    }

    /// All monomials (sorted variable multisets) of multidegree `h`.
    pub fn monomials_of_degree(&self, h: &[u32]) -> Vec<Vec<usize>> {
        let mut rows = h[..self.m].to_vec();
        let mut cols = h[self.m..].to_vec();
        let total: u32 = rows.iter().sum();
        if total != cols.iter().sum::<u32>() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(total as usize);
        self.fill_monomials(0, total, &mut rows, &mut cols, &mut current, &mut out);
        out
    }

    fn fill_monomials(&self, start: usize, left: u32, rows: &mut [u32], cols: &mut [u32], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        // the smallest remaining row must be served by variables from `start` on
        for k in start..self.vertices.len() {
            let (i, j) = self.vertices[k];
            let (ri, cj) = (i as usize - 1, j as usize - 1);
            if rows[ri] == 0 || cols[cj] == 0 {
                continue;
            }
            // rows are visited in sorted vertex order; an unserved earlier row is a dead end
            if rows[..ri].iter().any(|&r| r > 0) {
                break;
            }
            rows[ri] -= 1;
            cols[cj] -= 1;
            current.push(k);
            self.fill_monomials(k, left - 1, rows, cols, current, out);
            current.pop();
            rows[ri] += 1;
            cols[cj] += 1;
        }
    }

    pub fn quadratic_gb_certificate(&self, samples: usize) -> GbCertificate {
        quadratic_gb_certificate(&BipartiteGraph::of_collection(&self.cells), samples)
    }
}
