use std::collections::BinaryHeap;
use std::cmp::Reverse;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::toric::HVector;

/// Largest poset for which extensions, order ideals and h-vectors are computed.
pub const DEFAULT_POSET_CAP: usize = 10;

/// Finite poset on `0..n`, given by its cover relations `(a, b)` meaning `a ⋖ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    /// `less[a][b]` iff `a < b`.
    less: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    n: usize,
    covers: Vec<[usize; 2]>,
}

impl Poset {
    /// Validates that `covers` is acyclic and transitively irredundant.
    pub fn new(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        let p = Self::closure(n, covers)?;
        let mut sorted = covers.to_vec();
        sorted.sort_unstable();
        let before = sorted.len();
        sorted.dedup();
        if sorted.len() != before {
            return Err(Error::InvalidPoset("repeated cover relation".into()));
        }
        if sorted != p.covers {
            let (a, b) = sorted.iter().copied().find(|c| !p.covers.contains(c)).expect("closure keeps irredundant covers");
            return Err(Error::InvalidPoset(format!("relation {} < {} is implied by others", a + 1, b + 1)));
        }
        Ok(p)
    }

    /// Poset generated by arbitrary relations `a < b`; redundant ones are dropped.
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        Self::closure(n, relations)
    }

    fn closure(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset(format!("relation ({}, {}) is out of range 1..={n}", a + 1, b + 1)));
            }
            if a == b {
                return Err(Error::InvalidPoset(format!("element {} is related to itself", a + 1)));
            }
            succ[a].push(b);
        }
        let order = topological(n, &succ).ok_or_else(|| Error::InvalidPoset("relations contain a cycle".into()))?;
        let mut less = vec![vec![false; n]; n];
        for &a in order.iter().rev() {
            for &b in &succ[a] {
                less[a][b] = true;
                for c in 0..n {
                    if less[b][c] {
                        less[a][c] = true;
                    }
                }
            }
        }
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if less[a][b] && !(0..n).any(|c| less[a][c] && less[c][b]) {
                    covers.push((a, b));
                }
            }
        }
        Ok(Poset { n, covers, less })
    }

    pub fn chain(n: usize) -> Self {
        let covers: Vec<_> = (1..n).map(|k| (k - 1, k)).collect();
        Self::new(n, &covers).expect("chain")
    }

    pub fn antichain(n: usize) -> Self {
        Self::new(n, &[]).expect("antichain")
    }

    /// Elements of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &Poset) -> Poset {
        let mut covers = self.covers.clone();
        covers.extend(other.covers.iter().map(|&(a, b)| (a + self.n, b + self.n)));
        Poset::new(self.n + other.n, &covers).expect("union of posets")
    }

    /// `{"n": d, "covers": [[a, b], ...]}` with 1-based elements.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PosetJson = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let mut covers = Vec::with_capacity(raw.covers.len());
        for [a, b] in raw.covers {
            if a == 0 || b == 0 {
                return Err(Error::InvalidPoset("elements are numbered from 1".into()));
            }
            covers.push((a - 1, b - 1));
        }
        Self::new(raw.n, &covers)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let covers: Vec<[usize; 2]> = self.covers.iter().map(|&(a, b)| [a + 1, b + 1]).collect();
        serde_json::to_value(PosetJson { n: self.n, covers }).expect("plain data")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.less[a][b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn lower_covers(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.1 == b).map(|c| c.0)
    }

    pub fn upper_covers(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.0 == a).map(|c| c.1)
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&b| !(0..self.n).any(|a| self.less[a][b])).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| !(0..self.n).any(|b| self.less[a][b])).collect()
    }

    /// Bitmask of the elements strictly below `b`; needs at most 64 elements.
    pub fn down_mask(&self, b: usize) -> u64 {
        (0..self.n).filter(|&a| self.less[a][b]).fold(0, |m, a| m | 1 << a)
    }

    /// Subposet on `keep`, renumbered in the given order.
    pub fn induced(&self, keep: &[usize]) -> Poset {
        let mut rel = Vec::new();
        for (x, &a) in keep.iter().enumerate() {
            for (y, &b) in keep.iter().enumerate() {
                if self.less[a][b] {
                    rel.push((x, y));
                }
            }
        }
        Poset::from_relations(keep.len(), &rel).expect("subposet of a poset")
    }

    /// Connected components of the comparability graph, as element lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(a) = stack.pop() {
                members.push(a);
                for b in 0..self.n {
                    if comp[b] == usize::MAX && self.comparable(a, b) {
                        comp[b] = id;
                        stack.push(b);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.comparable(a, b)))
    }

    /// Topological order with ties broken by element index; labelling the
    /// elements in this order gives a natural labelling.
    pub fn natural_order(&self) -> Vec<usize> {
        let mut succ = vec![Vec::new(); self.n];
        for &(a, b) in &self.covers {
            succ[a].push(b);
        }
        topological(self.n, &succ).expect("posets are acyclic")
    }

    /// All order ideals as bitmasks, sorted by size and then value.
    pub fn order_ideals(&self) -> Result<Vec<u64>> {
        self.check_cap(DEFAULT_POSET_CAP)?;
        let down: Vec<u64> = (0..self.n).map(|b| self.down_mask(b)).collect();
        let mut out: Vec<u64> = (0u64..1 << self.n)
            .filter(|&mask| (0..self.n).all(|b| mask >> b & 1 == 0 || down[b] & !mask == 0))
            .collect();
        out.sort_by_key(|&m| (m.count_ones(), m));
        Ok(out)
    }

    fn check_cap(&self, cap: usize) -> Result<()> {
        if self.n > cap {
            return Err(Error::ResourceCap(format!("poset has {} elements, the cap is {cap}", self.n)));
        }
        Ok(())
    }

    /// Counts of linear extensions by number of descents relative to the
    /// natural labelling from [`Poset::natural_order`].
    pub fn descent_counts(&self) -> Result<Vec<u64>> {
        self.check_cap(DEFAULT_POSET_CAP)?;
        let n = self.n;
        if n == 0 {
            return Ok(vec![1]);
        }
        let order = self.natural_order();
        let mut label = vec![0; n];
        for (k, &e) in order.iter().enumerate() {
            label[e] = k;
        }
        let down: Vec<u64> = (0..n).map(|b| self.down_mask(b)).collect();
        // table[mask][last] = descent-count polynomial of extensions of `mask` ending at `last`
        let mut table = vec![vec![Vec::<u64>::new(); n]; 1 << n];
        for e in 0..n {
            if down[e] == 0 {
                table[1 << e][e] = vec![1];
            }
        }
        for mask in 1usize..1 << n {
            for last in 0..n {
                if table[mask][last].is_empty() {
                    continue;
                }
                let poly = std::mem::take(&mut table[mask][last]);
                for e in 0..n {
                    if mask >> e & 1 == 1 || down[e] & !(mask as u64) != 0 {
                        continue;
                    }
                    let shift = usize::from(label[last] > label[e]);
                    let slot = &mut table[mask | 1 << e][e];
                    if slot.len() < poly.len() + shift {
                        slot.resize(poly.len() + shift, 0);
                    }
                    for (d, &c) in poly.iter().enumerate() {
                        slot[d + shift] += c;
                    }
                }
                table[mask][last] = poly;
            }
        }
        let mut total: Vec<u64> = Vec::new();
        for poly in &table[(1 << n) - 1] {
            if total.len() < poly.len() {
                total.resize(poly.len(), 0);
            }
            for (d, &c) in poly.iter().enumerate() {
                total[d] += c;
            }
        }
        Ok(total)
    }

    pub fn linear_extension_count(&self) -> Result<u64> {
        Ok(self.descent_counts()?.iter().sum())
    }

    /// Every maximal chain has the same number of elements.
    pub fn is_pure(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        // longest and shortest cover paths from a minimal element, element by element
        let order = self.natural_order();
        let mut lo = vec![usize::MAX; self.n];
        let mut hi = vec![0; self.n];
        for &b in &order {
            let below: Vec<usize> = self.lower_covers(b).collect();
            if below.is_empty() {
                lo[b] = 1;
                hi[b] = 1;
            } else {
                lo[b] = below.iter().map(|&a| lo[a]).min().unwrap() + 1;
                hi[b] = below.iter().map(|&a| hi[a]).max().unwrap() + 1;
            }
        }
        let tops = self.maximal_elements();
        let shortest = tops.iter().map(|&a| lo[a]).min().unwrap();
        let longest = tops.iter().map(|&a| hi[a]).max().unwrap();
        shortest == longest
    }

    /// Some element is comparable to every other element.
    pub fn has_universal_element(&self) -> bool {
        (0..self.n).any(|x| (0..self.n).all(|y| self.comparable(x, y)))
    }

    /// Canonical encoding of the isomorphism class: the least strict-order
    /// matrix, row by row, over all natural labellings.
    pub fn canonical_key(&self) -> Vec<u64> {
        let mut best: Option<Vec<u64>> = None;
        let mut seq = Vec::with_capacity(self.n);
        let mut used = vec![false; self.n];
        self.canonical_search(&mut seq, &mut used, &mut Vec::new(), &mut best);
        best.unwrap_or_default()
    }

    fn canonical_search(&self, seq: &mut Vec<usize>, used: &mut [bool], key: &mut Vec<u64>, best: &mut Option<Vec<u64>>) {
        if let Some(b) = best {
            if key.as_slice() > &b[..key.len()] {
                return;
            }
        }
        if seq.len() == self.n {
            if best.as_ref().is_none_or(|b| *key < *b) {
                *best = Some(key.clone());
            }
            return;
        }
        for e in 0..self.n {
            if used[e] || (0..self.n).any(|a| self.less[a][e] && !used[a]) {
                continue;
            }
            let row = seq.iter().enumerate().filter(|&(_, &a)| self.less[a][e]).fold(0u64, |m, (k, _)| m | 1 << k);
            used[e] = true;
            seq.push(e);
            key.push(row);
            self.canonical_search(seq, used, key, best);
            key.pop();
            seq.pop();
            used[e] = false;
        }
    }

    /// Order isomorphism by backtracking with rank and up/down-set pruning.
    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        if self.n != other.n || self.covers.len() != other.covers.len() {
            return false;
        }
        let sig = |p: &Poset, a: usize| {
            let below = (0..p.n).filter(|&b| p.less[b][a]).count();
            let above = (0..p.n).filter(|&b| p.less[a][b]).count();
            (below, above, p.lower_covers(a).count(), p.upper_covers(a).count())
        };
        let left: Vec<_> = (0..self.n).map(|a| sig(self, a)).collect();
        let right: Vec<_> = (0..other.n).map(|a| sig(other, a)).collect();
        let mut l_sorted = left.clone();
        let mut r_sorted = right.clone();
        l_sorted.sort_unstable();
        r_sorted.sort_unstable();
        if l_sorted != r_sorted {
            return false;
        }
        let order = self.natural_order();
        let mut image = vec![usize::MAX; self.n];
        let mut taken = vec![false; other.n];
        self.extend_iso(other, &order, 0, &left, &right, &mut image, &mut taken)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_iso(
        &self,
        other: &Poset,
        order: &[usize],
        k: usize,
        left: &[(usize, usize, usize, usize)],
        right: &[(usize, usize, usize, usize)],
        image: &mut [usize],
        taken: &mut [bool],
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let a = order[k];
        for b in 0..other.n {
            if taken[b] || left[a] != right[b] {
                continue;
            }
            let consistent = order[..k].iter().all(|&x| {
                let y = image[x];
                self.less[x][a] == other.less[y][b] && self.less[a][x] == other.less[b][y]
            });
            if !consistent {
                continue;
            }
            image[a] = b;
            taken[b] = true;
            if self.extend_iso(other, order, k + 1, left, right, image, taken) {
                return true;
            }
            taken[b] = false;
        }
        image[a] = usize::MAX;
        false
    }
}

fn topological(n: usize, succ: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut indeg = vec![0; n];
    for s in succ {
        for &b in s {
            indeg[b] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n).filter(|&a| indeg[a] == 0).map(Reverse).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(Reverse(a)) = heap.pop() {
        out.push(a);
        for &b in &succ[a] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                heap.push(Reverse(b));
            }
        }
    }
    (out.len() == n).then_some(out)
}

/// h-vector of the Hibi ring of `p`: linear extensions counted by descents.
pub fn h_vector_of_poset(p: &Poset) -> Result<HVector> {
    let mut h: Vec<i64> = p.descent_counts()?.into_iter().map(|c| c as i64).collect();
    while h.len() > 1 && h.last() == Some(&0) {
        h.pop();
    }
    Ok(HVector(h))
}
