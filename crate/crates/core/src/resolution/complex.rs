//! Simplicial complexes and the squarefree divisor complex of a semigroup
//! element.

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{FieldChoice, SparseMatrix};
use crate::toric::semigroup::{AffineSemigroup, MembershipCache, MultiDegree};

/// Faces grouped by size; `faces[0]` holds the empty face. When `complete_to`
/// is `Some(s)` only faces of size at most `s` were enumerated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialComplex {
    pub vertices: Vec<usize>,
    pub faces: Vec<Vec<Vec<usize>>>,
    pub complete_to: Option<usize>,
}

impl SimplicialComplex {
    /// Closure of the given facets under taking subsets.
    pub fn from_facets(facets: &[Vec<usize>]) -> Self {
        let mut by_size: Vec<std::collections::BTreeSet<Vec<usize>>> = vec![Default::default()];
        by_size[0].insert(Vec::new());
        for facet in facets {
            let mut f = facet.clone();
            f.sort_unstable();
            f.dedup();
            for mask in 1u64..(1 << f.len()) {
                let sub: Vec<usize> = (0..f.len()).filter(|b| mask >> b & 1 == 1).map(|b| f[b]).collect();
                while by_size.len() <= sub.len() {
                    by_size.push(Default::default());
                }
                by_size[sub.len()].insert(sub);
            }
        }
        let faces: Vec<Vec<Vec<usize>>> = by_size.into_iter().map(|s| s.into_iter().collect()).collect();
        let vertices = faces.get(1).map_or(Vec::new(), |v| v.iter().map(|f| f[0]).collect());
        SimplicialComplex { vertices, faces, complete_to: None }
    }

    /// Dimension of the largest face; `-1` for the complex holding only the empty face.
    pub fn dimension(&self) -> isize {
        self.faces.iter().rposition(|f| !f.is_empty()).map_or(-1, |s| s as isize - 1)
    }

    pub fn face_count(&self, size: usize) -> usize {
        self.faces.get(size).map_or(0, |f| f.len())
    }

    /// Alternating face count including the empty face, `-f_{-1} + f_0 - f_1 + ...`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.faces.iter().enumerate().map(|(s, f)| if s % 2 == 1 { f.len() as i64 } else { -(f.len() as i64) }).sum()
    }

    /// Boundary map from faces of size `size` to faces of size `size - 1`,
    /// with faces oriented by ascending vertex index.
    pub fn boundary(&self, size: usize) -> SparseMatrix {
        let lower = self.faces.get(size - 1).map_or(&[][..], |v| v.as_slice());
        let index: FxHashMap<&[usize], usize> = lower.iter().enumerate().map(|(k, f)| (f.as_slice(), k)).collect();
        let mut m = SparseMatrix::new(lower.len());
        let mut sub = Vec::with_capacity(size);
        for face in self.faces.get(size).map_or(&[][..], |v| v.as_slice()) {
            let mut col = Vec::with_capacity(size);
            for drop in 0..size {
                sub.clear();
                sub.extend(face.iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, &v)| v));
                let sign = if drop % 2 == 0 { 1 } else { -1 };
                col.push((index[sub.as_slice()], sign));
            }
            m.push_col(col);
        }
        m
    }

    fn boundary_rank(&self, size: usize, field: FieldChoice) -> usize {
        if size == 0 || self.face_count(size) == 0 {
            0
        } else {
            self.boundary(size).rank(field)
        }
    }

    /// Rank of the reduced homology group in dimension `i >= -1`.
    pub fn reduced_homology_rank(&self, i: isize, field: FieldChoice) -> Result<usize> {
        if i < -1 {
            return Err(Error::Precondition("homology index below -1".into()));
        }
        let size = (i + 1) as usize;
        if let Some(limit) = self.complete_to {
            if size + 1 > limit {
                return Err(Error::Precondition(format!(
                    "homology in dimension {i} needs faces of size {} but only sizes up to {limit} were enumerated",
                    size + 1
                )));
            }
        }
        let chains = self.face_count(size);
        Ok(chains - self.boundary_rank(size, field) - self.boundary_rank(size + 1, field))
    }

    /// Reduced Betti numbers in dimensions `-1..=dimension`.
    pub fn reduced_betti_numbers(&self, field: FieldChoice) -> Vec<usize> {
        assert!(self.complete_to.is_none(), "reduced Betti numbers need the full complex");
        let sizes = self.faces.len();
        let ranks: Vec<usize> = (0..=sizes).map(|s| self.boundary_rank(s, field)).collect();
        (0..sizes).map(|s| self.face_count(s) - ranks[s] - ranks[s + 1]).collect()
    }
}

/// Squarefree divisor complex of `h`: faces are the generator sets `F` with
/// `h - sum_{k in F} g_k` in the semigroup.
pub fn divisor_complex(sg: &AffineSemigroup, h: &[u32]) -> Result<SimplicialComplex> {
    build(sg, h, None)
}

/// Faces of size at most `max_size` of the divisor complex; enough to compute
/// reduced homology up to dimension `max_size - 2`.
pub fn divisor_complex_skeleton(sg: &AffineSemigroup, h: &[u32], max_size: usize) -> Result<SimplicialComplex> {
    build(sg, h, Some(max_size))
}

fn build(sg: &AffineSemigroup, h: &[u32], max_size: Option<usize>) -> Result<SimplicialComplex> {
    if !sg.contains(h)? {
        return Err(Error::NotInSemigroup);
    }
    let mut cache = MembershipCache::new(sg);
    let gens = sg.generators();
    let fits = |rest: &[u32], g: &[u32]| rest.iter().zip(g).all(|(a, b)| a >= b);
    let vertices: Vec<usize> = (0..gens.len())
        .filter(|&k| fits(h, &gens[k]) && cache.contains(&sub(h, &gens[k])))
        .collect();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
    let limit = max_size.unwrap_or(usize::MAX);
    let mut face = Vec::new();
    extend(sg, &mut cache, h.to_vec(), &vertices, &mut face, &mut faces, limit);
    while faces.last().is_some_and(|f| f.is_empty()) && faces.len() > 1 {
        faces.pop();
    }
    Ok(SimplicialComplex { vertices, faces, complete_to: max_size })
}

fn sub(a: &[u32], b: &[u32]) -> MultiDegree {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Adds every face extending `face` by candidates in `cand` (all larger than
/// the face's vertices); `rest` is `h` minus the face's generators.
fn extend(
    sg: &AffineSemigroup,
    cache: &mut MembershipCache<'_>,
    rest: MultiDegree,
    cand: &[usize],
    face: &mut Vec<usize>,
    faces: &mut Vec<Vec<Vec<usize>>>,
    limit: usize,
) {
    if face.len() >= limit {
        return;
    }
    let gens = sg.generators();
    for (pos, &v) in cand.iter().enumerate() {
        let g = &gens[v];
        if !rest.iter().zip(g).all(|(a, b)| a >= b) {
            continue;
        }
        let next = sub(&rest, g);
        if !cache.contains(&next) {
            continue;
        }
        face.push(v);
        if faces.len() <= face.len() {
            faces.push(Vec::new());
        }
        faces[face.len()].push(face.clone());
        extend(sg, cache, next, &cand[pos + 1..], face, faces, limit);
        face.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: FieldChoice = FieldChoice::Rational;

    #[test]
    fn simplex_and_hollow_triangle() {
        let simplex = SimplicialComplex::from_facets(&[vec![0, 1, 2]]);
        for i in -1..=2 {
            assert_eq!(simplex.reduced_homology_rank(i, Q).unwrap(), 0);
        }
        let hollow = SimplicialComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(hollow.reduced_homology_rank(1, Q).unwrap(), 1);
        assert_eq!(hollow.reduced_homology_rank(0, Q).unwrap(), 0);
        let two_edges = SimplicialComplex::from_facets(&[vec![0, 1], vec![2, 3]]);
        assert_eq!(two_edges.reduced_homology_rank(0, Q).unwrap(), 1);
    }

    #[test]
    fn empty_complex_conventions() {
        let empty = SimplicialComplex::from_facets(&[]);
        assert_eq!(empty.dimension(), -1);
        assert_eq!(empty.reduced_homology_rank(-1, Q).unwrap(), 1);
        assert_eq!(empty.reduced_betti_numbers(Q), vec![1]);
        let sg = AffineSemigroup::bipartite(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        let zero = divisor_complex(&sg, &[0, 0, 0, 0]).unwrap();
        assert_eq!(zero.faces, vec![vec![Vec::<usize>::new()]]);
    }

    #[test]
    fn projective_plane_depends_on_characteristic() {
        // six-vertex triangulation of RP^2
        let rp2 = SimplicialComplex::from_facets(&[
            vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4], vec![0, 4, 5], vec![0, 5, 1],
            vec![1, 2, 4], vec![2, 3, 5], vec![3, 4, 1], vec![4, 5, 2], vec![5, 1, 3],
        ]);
        assert_eq!(rp2.reduced_euler_characteristic(), 0);
        assert_eq!(rp2.reduced_homology_rank(1, Q).unwrap(), 0);
        assert_eq!(rp2.reduced_homology_rank(1, FieldChoice::Prime(2)).unwrap(), 1);
        assert_eq!(rp2.reduced_homology_rank(2, FieldChoice::Prime(2)).unwrap(), 1);
    }

    #[test]
    fn single_cell_minor_degree() {
        // vertices (1,1),(1,2),(2,1),(2,2) as generators 0..4
        let sg = AffineSemigroup::bipartite(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        let cx = divisor_complex(&sg, &[1, 1, 1, 1]).unwrap();
        assert_eq!(cx.faces[1].len(), 4);
        assert_eq!(cx.faces[2], vec![vec![0, 3], vec![1, 2]]);
        assert_eq!(cx.face_count(3), 0);
        assert_eq!(cx.reduced_homology_rank(0, Q).unwrap(), 1);
        let double = divisor_complex(&sg, &[2, 0, 2, 0]).unwrap();
        assert_eq!(double.vertices, vec![0]);
        assert_eq!(double.dimension(), 0);
        assert_eq!(divisor_complex(&sg, &[1, 0, 0, 0]), Err(Error::NotInSemigroup));
    }

    #[test]
    fn skeleton_guards_homology_index() {
        let sg = AffineSemigroup::bipartite(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        let sk = divisor_complex_skeleton(&sg, &[2, 2, 2, 2], 3).unwrap();
        assert!(sk.reduced_homology_rank(1, Q).is_ok());
        assert!(sk.reduced_homology_rank(2, Q).is_err());
    }

    fn random_complex(facets: &[Vec<usize>], perm: &[usize]) -> (SimplicialComplex, SimplicialComplex) {
        let relabeled: Vec<Vec<usize>> = facets.iter().map(|f| f.iter().map(|&v| perm[v]).collect()).collect();
        (SimplicialComplex::from_facets(facets), SimplicialComplex::from_facets(&relabeled))
    }

    proptest! {
        #[test]
        fn euler_characteristic_and_relabeling(
            raw in proptest::collection::vec(proptest::collection::btree_set(0usize..6, 1..4), 1..7),
            perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
        ) {
            let facets: Vec<Vec<usize>> = raw.into_iter().map(|s| s.into_iter().collect()).collect();
            let (a, b) = random_complex(&facets, &perm);
            for field in [Q, FieldChoice::Prime(32003)] {
                let betti = a.reduced_betti_numbers(field);
                let alt: i64 = betti.iter().enumerate().map(|(s, &v)| if s % 2 == 1 { v as i64 } else { -(v as i64) }).sum();
                prop_assert_eq!(alt, a.reduced_euler_characteristic());
                prop_assert_eq!(betti, b.reduced_betti_numbers(field));
            }
        }
    }
}
