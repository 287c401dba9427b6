//! Affine semigroups with pluggable membership tests, Hilbert functions and
//! h-vectors.

use std::hash::Hash;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use super::flow::transport_feasible;
use crate::error::{Error, Result};
use crate::linalg::{rank_bareiss, FieldChoice, SparseMatrix};

pub type MultiDegree = Vec<u32>;

/// Largest number of distinct elements kept for a single degree during
/// breadth-first closure.
pub const DEFAULT_LAYER_CAP: usize = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Generators are `e_i + e_{rows+j}` for the edges of a bipartite graph;
    /// bit `j` of `adj[i]` marks edge `{s_i, t_j}`.
    BipartiteFlow { rows: usize, cols: usize, adj: Vec<u64> },
    /// Generators are order-ideal indicators of a poset on `0..size`,
    /// extended by a trailing homogenizing `1`. `covers` lists `(a, b)` with
    /// `a` covered by `b`.
    HibiMonotone { size: usize, covers: Vec<(usize, usize)> },
    /// Arbitrary generators of degree one under `grading`.
    GenericSearch { grading: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSemigroup {
    dim: usize,
    generators: Vec<MultiDegree>,
    membership: Membership,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HVector(pub Vec<i64>);

impl HVector {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// `(1)` or `(1, q)`.
    pub fn is_linear(&self) -> bool {
        self.0.len() <= 2 && self.0.first() == Some(&1)
    }

    /// `Some(q)` for `(1, q, 1)`.
    pub fn extremal_q(&self) -> Option<i64> {
        match self.0.as_slice() {
            [1, q, 1] => Some(*q),
            _ => None,
        }
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl std::fmt::Display for HVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl AffineSemigroup {
    /// Edge semigroup of a bipartite graph, one generator per edge in the
    /// order given.
    pub fn bipartite(rows: usize, cols: usize, edges: &[(usize, usize)]) -> Self {
        assert!(rows <= 64 && cols <= 64, "bipartite semigroups support at most 64 rows and columns");
        let mut adj = vec![0u64; rows];
        let mut generators = Vec::with_capacity(edges.len());
        for &(i, j) in edges {
            adj[i] |= 1 << j;
            let mut g = vec![0; rows + cols];
            g[i] = 1;
            g[rows + j] = 1;
            generators.push(g);
        }
        AffineSemigroup { dim: rows + cols, generators, membership: Membership::BipartiteFlow { rows, cols, adj } }
    }

    /// Hibi semigroup: `ideals` are bitmasks of order ideals of a poset on
    /// `0..size` whose cover relations are `covers`.
    pub fn hibi(size: usize, covers: Vec<(usize, usize)>, ideals: &[u64]) -> Self {
        let generators = ideals
            .iter()
            .map(|&mask| {
                let mut g: Vec<u32> = (0..size).map(|p| (mask >> p & 1) as u32).collect();
                g.push(1);
                g
            })
            .collect();
        AffineSemigroup { dim: size + 1, generators, membership: Membership::HibiMonotone { size, covers } }
    }

    /// Semigroup with arbitrary generators; `grading` must give every
    /// generator degree one.
    pub fn generic(generators: Vec<MultiDegree>, grading: Vec<i64>) -> Result<Self> {
        let dim = grading.len();
        let mut seen = FxHashSet::default();
        for g in &generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
            }
            if g.iter().all(|&v| v == 0) || !seen.insert(g.clone()) {
                return Err(Error::Precondition("generators must be distinct and nonzero".into()));
            }
            let deg: i64 = g.iter().zip(&grading).map(|(&a, &b)| a as i64 * b).sum();
            if deg != 1 {
                return Err(Error::Precondition("every generator must have degree one".into()));
            }
        }
        Ok(AffineSemigroup { dim, generators, membership: Membership::GenericSearch { grading } })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[MultiDegree] {
        &self.generators
    }

    pub fn membership(&self) -> &Membership {
        &self.membership
    }

    pub fn kind_name(&self) -> &'static str {
        match self.membership {
            Membership::BipartiteFlow { .. } => "bipartite-flow",
            Membership::HibiMonotone { .. } => "hibi-monotone",
            Membership::GenericSearch { .. } => "generic-search",
        }
    }

    /// Total degree of `h` if it is consistent with the grading.
    pub fn degree(&self, h: &[u32]) -> Option<u32> {
        match &self.membership {
            Membership::BipartiteFlow { rows, .. } => {
                let r: u32 = h[..*rows].iter().sum();
                let c: u32 = h[*rows..].iter().sum();
                (r == c).then_some(r)
            }
            Membership::HibiMonotone { size, .. } => Some(h[*size]),
            Membership::GenericSearch { grading } => {
                let d: i64 = h.iter().zip(grading).map(|(&a, &b)| a as i64 * b).sum();
                u32::try_from(d).ok()
            }
        }
    }

    pub fn contains(&self, h: &[u32]) -> Result<bool> {
        if h.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: h.len() });
        }
        Ok(self.contains_unchecked(h))
    }

    pub(crate) fn contains_unchecked(&self, h: &[u32]) -> bool {
        match &self.membership {
            Membership::BipartiteFlow { rows, adj, .. } => transport_feasible(&h[..*rows], &h[*rows..], adj),
            Membership::HibiMonotone { size, covers } => {
                let top = h[*size];
                h[..*size].iter().all(|&v| v <= top) && covers.iter().all(|&(a, b)| h[a] >= h[b])
            }
            Membership::GenericSearch { .. } => {
                let Some(d) = self.degree(h) else { return false };
                let mut failed = FxHashSet::default();
                search(&self.generators, h.to_vec(), 0, d, &mut failed)
            }
        }
    }

    /// Krull dimension of the semigroup ring: rank of the generator matrix.
    pub fn krull_dimension(&self) -> usize {
        let rows: Vec<Vec<i64>> = self.generators.iter().map(|g| g.iter().map(|&v| v as i64).collect()).collect();
        rank_bareiss(rows)
    }

    /// Elements of each total degree `0..=max_degree`.
    pub fn layers(&self, max_degree: usize, cap: usize) -> Result<Vec<Vec<MultiDegree>>> {
        let mut closure = Closure::new(self)?;
        let mut out = vec![closure.elements()];
        for _ in 0..max_degree {
            closure.step(cap)?;
            out.push(closure.elements());
        }
        Ok(out)
    }

    pub fn hilbert_function(&self, d: usize) -> Result<u64> {
        self.hilbert_function_capped(d, DEFAULT_LAYER_CAP)
    }

    pub fn hilbert_function_capped(&self, d: usize, cap: usize) -> Result<u64> {
        let mut closure = Closure::new(self)?;
        for _ in 0..d {
            closure.step(cap)?;
        }
        Ok(closure.len() as u64)
    }

    /// h-vector of the semigroup ring, computed from Hilbert function values
    /// until three consecutive entries vanish.
    pub fn h_vector(&self) -> Result<HVector> {
        self.h_vector_capped(DEFAULT_LAYER_CAP)
    }

    pub fn h_vector_capped(&self, cap: usize) -> Result<HVector> {
        let dim = self.krull_dimension();
        let degree_cap = 2 * self.generators.len().max(1);
        let binom: Vec<i128> = (0..=dim).map(|k| binomial(dim, k)).collect();
        let mut closure = Closure::new(self)?;
        let mut hilbert: Vec<i128> = vec![1];
        let mut h: Vec<i64> = Vec::new();
        loop {
            let i = h.len();
            if i > degree_cap {
                return Err(Error::ResourceCap(format!("h-vector did not stabilize by degree {degree_cap}")));
            }
            while hilbert.len() <= i {
                closure.step(cap)?;
                hilbert.push(closure.len() as i128);
            }
            let hi: i128 = (0..=i.min(dim))
                .map(|k| if k % 2 == 0 { binom[k] * hilbert[i - k] } else { -binom[k] * hilbert[i - k] })
                .sum();
            h.push(hi as i64);
            if h.len() >= 3 && h[h.len() - 3..].iter().all(|&v| v == 0) {
                break;
            }
        }
        while h.last() == Some(&0) {
            h.pop();
        }
        Ok(HVector(h))
    }

    /// Rank of the generator matrix over the chosen field.
    pub fn rank_over(&self, field: FieldChoice) -> usize {
        let mut m = SparseMatrix::new(self.dim);
        for g in &self.generators {
            m.push_col(g.iter().enumerate().filter(|(_, &v)| v != 0).map(|(r, &v)| (r, v as i64)).collect());
        }
        m.rank(field)
    }
}

fn search(gens: &[MultiDegree], rest: Vec<u32>, start: usize, degree: u32, failed: &mut FxHashSet<(Vec<u32>, usize)>) -> bool {
    if degree == 0 {
        return rest.iter().all(|&v| v == 0);
    }
    if failed.contains(&(rest.clone(), start)) {
        return false;
    }
    for (k, g) in gens.iter().enumerate().skip(start) {
        if g.iter().zip(&rest).all(|(a, b)| a <= b) {
            let next: Vec<u32> = rest.iter().zip(g).map(|(a, b)| a - b).collect();
            if search(gens, next, k, degree - 1, failed) {
                return true;
            }
        }
    }
    failed.insert((rest, start));
    false
}

pub fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

trait Packed: Clone + Eq + Hash + Send + Sync {
    fn plus(&self, other: &Self) -> Self;
}

impl Packed for u128 {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

impl Packed for Vec<u32> {
    fn plus(&self, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a + b).collect()
    }
}

/// One degree of a breadth-first closure `layer_{d+1} = layer_d + generators`.
struct Layer<K: Packed> {
    gens: Vec<K>,
    current: Vec<K>,
}

impl<K: Packed> Layer<K> {
    fn step(&mut self, cap: usize) -> Result<()> {
        let mut next: FxHashSet<K> = FxHashSet::default();
        next.reserve(self.current.len() * 2);
        for x in &self.current {
            for g in &self.gens {
                next.insert(x.plus(g));
            }
            if next.len() > cap {
                return Err(Error::ResourceCap(format!("more than {cap} semigroup elements in one degree")));
            }
        }
        let mut v: Vec<K> = next.into_iter().collect();
        v.shrink_to_fit();
        self.current = v;
        Ok(())
    }
}

/// Elements packed eight bits per coordinate when they fit in 128 bits.
enum Closure {
    Narrow { layer: Layer<u128>, dim: usize, degree: usize, max_entry: u32 },
    Wide(Layer<Vec<u32>>),
}

impl Closure {
    fn new(sg: &AffineSemigroup) -> Result<Self> {
        let max_entry = sg.generators.iter().flatten().copied().max().unwrap_or(0);
        if sg.dim <= 16 {
            let gens = sg.generators.iter().map(|g| pack(g)).collect();
            Ok(Closure::Narrow { layer: Layer { gens, current: vec![0] }, dim: sg.dim, degree: 0, max_entry })
        } else {
            Ok(Closure::Wide(Layer { gens: sg.generators.clone(), current: vec![vec![0; sg.dim]] }))
        }
    }

    fn step(&mut self, cap: usize) -> Result<()> {
        match self {
            Closure::Narrow { layer, dim, degree, max_entry } => {
                if (*degree as u32 + 1) * *max_entry > 255 {
                    // entries would overflow their byte; continue unpacked
                    let current = layer.current.iter().map(|&x| unpack(x, *dim)).collect();
                    let gens = layer.gens.iter().map(|&x| unpack(x, *dim)).collect();
                    *self = Closure::Wide(Layer { gens, current });
                    return self.step(cap);
                }
                *degree += 1;
                layer.step(cap)
            }
            Closure::Wide(layer) => layer.step(cap),
        }
    }

    fn len(&self) -> usize {
        match self {
            Closure::Narrow { layer, .. } => layer.current.len(),
            Closure::Wide(layer) => layer.current.len(),
        }
    }

    fn elements(&self) -> Vec<MultiDegree> {
        let mut out: Vec<MultiDegree> = match self {
            Closure::Narrow { layer, dim, .. } => layer.current.iter().map(|&x| unpack(x, *dim)).collect(),
            Closure::Wide(layer) => layer.current.clone(),
        };
        out.sort_unstable();
        out
    }
}

fn pack(v: &[u32]) -> u128 {
    v.iter().enumerate().fold(0u128, |acc, (i, &x)| acc | (x as u128) << (8 * i))
}

fn unpack(x: u128, dim: usize) -> Vec<u32> {
    (0..dim).map(|i| (x >> (8 * i) & 0xff) as u32).collect()
}

/// Memoized membership oracle for repeated queries against one semigroup.
pub struct MembershipCache<'a> {
    sg: &'a AffineSemigroup,
    memo: FxHashMap<MultiDegree, bool>,
}

impl<'a> MembershipCache<'a> {
    pub fn new(sg: &'a AffineSemigroup) -> Self {
        MembershipCache { sg, memo: FxHashMap::default() }
    }

    pub fn contains(&mut self, h: &[u32]) -> bool {
        if let Some(&v) = self.memo.get(h) {
            return v;
        }
        let v = self.sg.contains_unchecked(h);
        self.memo.insert(h.to_vec(), v);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid_semigroup(rows: usize, cols: usize) -> AffineSemigroup {
        let edges: Vec<(usize, usize)> = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).collect();
        AffineSemigroup::bipartite(rows, cols, &edges)
    }

    #[test]
    fn single_cell_hilbert_function() {
        let sg = grid_semigroup(2, 2);
        for d in 0..6 {
            assert_eq!(sg.hilbert_function(d).unwrap(), ((d + 1) * (d + 1)) as u64);
        }
        assert_eq!(sg.krull_dimension(), 3);
        assert_eq!(sg.h_vector().unwrap(), HVector(vec![1, 1]));
    }

    #[test]
    fn full_segre_counts() {
        // degree-d elements of a complete bipartite edge ring: pairs of compositions
        let sg = grid_semigroup(3, 3);
        for d in 0..5usize {
            let comps = binomial(d + 2, 2) as u64;
            assert_eq!(sg.hilbert_function(d).unwrap(), comps * comps);
        }
    }

    #[test]
    fn membership_basics() {
        let sg = grid_semigroup(2, 3);
        assert!(sg.contains(&[0; 5]).unwrap());
        for g in sg.generators() {
            assert!(sg.contains(g).unwrap());
        }
        assert!(!sg.contains(&[1, 0, 0, 0, 0]).unwrap());
        assert!(sg.contains(&[1]).is_err());
        // L-tromino vertex set misses (1,3)
        let l_edges = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1), (0, 2), (1, 2)];
        let l = AffineSemigroup::bipartite(3, 3, &l_edges);
        assert!(!l.contains(&[0, 0, 1, 0, 0, 1]).unwrap());
        assert!(l.contains(&[1, 0, 0, 0, 0, 1]).unwrap());
    }

    #[test]
    fn hibi_chain_is_polynomial_ring() {
        // chain a < b: ideals {}, {a}, {a,b}
        let sg = AffineSemigroup::hibi(2, vec![(0, 1)], &[0b00, 0b01, 0b11]);
        assert_eq!(sg.generators().len(), 3);
        assert_eq!(sg.h_vector().unwrap(), HVector(vec![1]));
        assert!(sg.contains(&[2, 1, 2]).unwrap());
        assert!(!sg.contains(&[1, 2, 2]).unwrap());
        assert!(!sg.contains(&[3, 1, 2]).unwrap());
    }

    #[test]
    fn generic_search_agrees_with_flow() {
        let flow = grid_semigroup(2, 3);
        let grading = vec![1, 1, 0, 0, 0];
        let generic = AffineSemigroup::generic(flow.generators().to_vec(), grading).unwrap();
        for h in flow.layers(3, 1000).unwrap().into_iter().flatten() {
            assert!(generic.contains(&h).unwrap());
        }
        assert!(!generic.contains(&[2, 0, 0, 0, 1]).unwrap());
        assert_eq!(generic.h_vector().unwrap(), flow.h_vector().unwrap());
        assert!(AffineSemigroup::generic(vec![vec![1, 1]], vec![1, 1]).is_err());
    }

    #[test]
    fn wide_closure_matches_narrow() {
        // 17 coordinates forces the unpacked representation
        let edges: Vec<(usize, usize)> = (0..15).flat_map(|j| [(0, j), (1, j)]).collect();
        let sg = AffineSemigroup::bipartite(2, 15, &edges);
        assert_eq!(sg.dim(), 17);
        assert_eq!(sg.hilbert_function(2).unwrap(), 3 * binomial(16, 2) as u64);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    proptest! {
        #[test]
        fn membership_is_additive(seed in proptest::collection::vec(0usize..9, 1..6), other in proptest::collection::vec(0usize..9, 1..6)) {
            // 3x3 vertex grid minus one corner
            let edges: Vec<(usize, usize)> = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|&e| e != (2, 2)).collect();
            let sg = AffineSemigroup::bipartite(3, 3, &edges);
            let sum = |idx: &[usize]| -> Vec<u32> {
                let mut h = vec![0u32; 6];
                for &k in idx {
                    let g = &sg.generators()[k % sg.generators().len()];
                    for (a, b) in h.iter_mut().zip(g) { *a += b; }
                }
                h
            };
            let a = sum(&seed);
            let b = sum(&other);
            prop_assert!(sg.contains(&a).unwrap());
            let ab: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            prop_assert!(sg.contains(&ab).unwrap());
        }
    }
}
