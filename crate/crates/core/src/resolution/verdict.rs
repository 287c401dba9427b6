use std::sync::Mutex;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::FieldChoice;
use crate::polyomino::CellCollection;
use crate::toric::semigroup::{AffineSemigroup, HVector, Membership, MultiDegree, DEFAULT_LAYER_CAP};
use crate::toric::ToricModel;

use super::complex::divisor_complex_skeleton;

/// `dim H̃_1(Δ_h)`, which is `β_{1,h}` of the ideal, for every `h` of total
/// degree `degree` where it is nonzero. Only faces of size at most 3 are built.
pub fn first_syzygies_in_degree(sg: &AffineSemigroup, degree: u32, field: FieldChoice) -> Result<Vec<(MultiDegree, usize)>> {
    first_syzygies_in_degree_cached(sg, degree, &LocalRankCache::new(field))
}

/// Ranks of `H̃_1(Δ_h)` keyed by the local data of `h` in an edge semigroup.
/// The key does not depend on the ambient graph, so one cache can serve many
/// semigroups, e.g. a whole sweep.
#[derive(Debug, Default)]
pub struct LocalRankCache {
    field: FieldChoice,
    ranks: Mutex<FxHashMap<Vec<u32>, usize>>,
}

impl LocalRankCache {
    pub fn new(field: FieldChoice) -> Self {
        LocalRankCache { field, ranks: Mutex::default() }
    }

    pub fn field(&self) -> FieldChoice {
        self.field
    }

    pub fn len(&self) -> usize {
        self.ranks.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn first_syzygies_in_degree_cached(sg: &AffineSemigroup, degree: u32, cache: &LocalRankCache) -> Result<Vec<(MultiDegree, usize)>> {
    let field = cache.field;
    let layer = sg.layers(degree as usize, DEFAULT_LAYER_CAP)?.pop().unwrap_or_default();
    // elements with the same local data have the same divisor complex
    let mut classes: FxHashMap<Vec<u32>, Vec<MultiDegree>> = FxHashMap::default();
    let mut loose = Vec::new();
    for h in layer {
        match local_key(sg, &h) {
            Some(key) => classes.entry(key).or_default().push(h),
            None => loose.push(h),
        }
    }
    let rank_of = |h: &MultiDegree| divisor_complex_skeleton(sg, h, 3)?.reduced_homology_rank(1, field);
    let known: Vec<(Vec<u32>, Vec<MultiDegree>, Option<usize>)> = {
        let ranks = cache.ranks.lock().expect("cache lock");
        classes.into_iter().map(|(k, members)| {
            let r = ranks.get(&k).copied();
            (k, members, r)
        }).collect()
    };
    let ranks: Vec<usize> = known
        .par_iter()
        .map(|(_, members, r)| r.map_or_else(|| rank_of(&members[0]), Ok))
        .collect::<Result<_>>()?;
    {
        let mut store = cache.ranks.lock().expect("cache lock");
        for ((k, _, r), &rank) in known.iter().zip(&ranks) {
            if r.is_none() {
                store.insert(k.clone(), rank);
            }
        }
    }
    let loose_ranks: Vec<usize> = loose.par_iter().map(rank_of).collect::<Result<_>>()?;
    let mut found: Vec<(MultiDegree, usize)> = known
        .into_iter()
        .zip(ranks)
        .flat_map(|((_, members, _), r)| members.into_iter().map(move |h| (h, r)))
        .chain(loose.into_iter().zip(loose_ranks))
        .filter(|&(_, r)| r > 0)
        .collect();
    found.sort();
    Ok(found)
}

/// For an edge semigroup, the nonzero row and column entries of `h` in order
/// together with the edges among the supporting rows and columns. Every
/// factorization of `h` uses only those edges, so this determines `Δ_h` up to
/// relabeling. Rows with identical neighbourhoods are interchangeable, so
/// their entries are sorted; likewise for columns.
fn local_key(sg: &AffineSemigroup, h: &[u32]) -> Option<Vec<u32>> {
    let Membership::BipartiteFlow { rows, adj, .. } = sg.membership() else { return None };
    let support_rows: Vec<usize> = (0..*rows).filter(|&i| h[i] > 0).collect();
    let support_cols: Vec<usize> = (0..h.len() - rows).filter(|&j| h[rows + j] > 0).collect();
    let row_bits: Vec<u64> = support_rows
        .iter()
        .map(|&i| support_cols.iter().enumerate().fold(0, |acc, (k, &j)| acc | ((adj[i] >> j & 1) << k)))
        .collect();
    let col_bits: Vec<u64> =
        (0..support_cols.len()).map(|k| row_bits.iter().enumerate().fold(0, |acc, (r, &b)| acc | ((b >> k & 1) << r))).collect();
    let mut key = twin_sorted(&support_rows.iter().map(|&i| h[i]).collect::<Vec<_>>(), &row_bits);
    key.push(u32::MAX);
    key.extend(twin_sorted(&support_cols.iter().map(|&j| h[rows + j]).collect::<Vec<_>>(), &col_bits));
    key.push(u32::MAX);
    for b in row_bits {
        key.push(b as u32);
        key.push((b >> 32) as u32);
    }
    Some(key)
}

/// Sorts the entries of `mults` within each class of equal `bits`, leaving
/// the positions of each class unchanged.
fn twin_sorted(mults: &[u32], bits: &[u64]) -> Vec<u32> {
    let mut out = mults.to_vec();
    let mut done = vec![false; mults.len()];
    for a in 0..mults.len() {
        if done[a] {
            continue;
        }
        let class: Vec<usize> = (a..mults.len()).filter(|&b| bits[b] == bits[a]).collect();
        let mut vals: Vec<u32> = class.iter().map(|&b| mults[b]).collect();
        vals.sort_unstable();
        for (&b, v) in class.iter().zip(vals) {
            out[b] = v;
            done[b] = true;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearlyRelatedOracle {
    pub linearly_related: bool,
    /// A degree-4 multidegree carrying a minimal first syzygy.
    pub witness: Option<MultiDegree>,
    pub witness_rank: usize,
}

/// Linearly related iff no first syzygy of the ideal lives in total degree 4.
pub fn is_linearly_related_oracle(sg: &AffineSemigroup, field: FieldChoice) -> Result<LinearlyRelatedOracle> {
    let found = first_syzygies_in_degree(sg, 4, field)?;
    Ok(match found.into_iter().next() {
        Some((h, rank)) => LinearlyRelatedOracle { linearly_related: false, witness: Some(h), witness_rank: rank },
        None => LinearlyRelatedOracle { linearly_related: true, witness: None, witness_rank: 0 },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionVerdict {
    pub h_vector: HVector,
    pub krull_dimension: usize,
    pub is_gorenstein: bool,
    pub has_linear_resolution: bool,
    pub is_extremal_gorenstein: bool,
    /// Regularity of the ideal, `1 + deg` of the h-polynomial; absent for the zero ideal.
    pub regularity: Option<usize>,
}

/// Resolution shape of a Cohen-Macaulay ring read off its h-vector.
pub fn verdict_from_h_vector(h: HVector, krull_dimension: usize, generators: usize) -> ResolutionVerdict {
    let e = h.entries();
    let regularity = (generators > 0).then_some(e.len());
    ResolutionVerdict {
        is_gorenstein: h.is_palindromic(),
        has_linear_resolution: h.is_linear(),
        is_extremal_gorenstein: generators > 1 && h.extremal_q().is_some_and(|q| q > 1),
        h_vector: h,
        krull_dimension,
        regularity,
    }
}

pub fn resolution_verdict(c: &CellCollection) -> Result<ResolutionVerdict> {
    c.ensure_convex()?;
    let model = ToricModel::new(c);
    let h = model.semigroup.h_vector()?;
    Ok(verdict_from_h_vector(h, model.semigroup.krull_dimension(), model.minors.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::semigroup_of;

    fn cells(grid: &str) -> CellCollection {
        CellCollection::from_grid(grid).unwrap()
    }

    #[test]
    fn square_is_extremal_gorenstein() {
        let v = resolution_verdict(&cells("##\n##")).unwrap();
        assert_eq!(v.h_vector, HVector(vec![1, 4, 1]));
        assert_eq!(v.krull_dimension, 5);
        assert!(v.is_gorenstein && v.is_extremal_gorenstein && !v.has_linear_resolution);
        assert_eq!(v.regularity, Some(3));
    }

    #[test]
    fn strips_have_linear_resolution() {
        for len in 1..=4 {
            let v = resolution_verdict(&cells(&"#".repeat(len))).unwrap();
            assert!(v.has_linear_resolution, "strip of {len}");
            assert_eq!(v.h_vector.entries()[1], len as i64);
        }
        assert!(resolution_verdict(&cells("#.\n.#")).is_err());
    }

    #[test]
    fn oracle_on_small_shapes() {
        let rect = semigroup_of(&cells("###\n###"));
        assert!(is_linearly_related_oracle(&rect, FieldChoice::Rational).unwrap().linearly_related);
        let diag = semigroup_of(&cells("#.\n.#"));
        let o = is_linearly_related_oracle(&diag, FieldChoice::Rational).unwrap();
        assert!(!o.linearly_related);
        // the only degree-4 syzygy is the Koszul relation of the two minors
        assert_eq!(o.witness, Some(vec![1, 2, 1, 1, 2, 1]));
    }

    #[test]
    fn grouped_search_matches_direct_search() {
        for grid in ["#..\n###\n#..", "##.\n###", "#.\n.#"] {
            let sg = semigroup_of(&cells(grid));
            for degree in [3, 4, 5] {
                let layer = sg.layers(degree, DEFAULT_LAYER_CAP).unwrap().pop().unwrap();
                let mut direct: Vec<(MultiDegree, usize)> = layer
                    .into_iter()
                    .map(|h| {
                        let r = divisor_complex_skeleton(&sg, &h, 3).unwrap().reduced_homology_rank(1, FieldChoice::Rational).unwrap();
                        (h, r)
                    })
                    .filter(|&(_, r)| r > 0)
                    .collect();
                direct.sort();
                assert_eq!(first_syzygies_in_degree(&sg, degree as u32, FieldChoice::Rational).unwrap(), direct, "{grid} {degree}");
            }
        }
    }

    #[test]
    fn twin_classes_sort_in_place() {
        assert_eq!(twin_sorted(&[3, 1, 2, 1], &[5, 6, 5, 6]), vec![2, 1, 3, 1]);
    }
}
