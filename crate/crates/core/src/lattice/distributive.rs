use std::fmt;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::toric::{AffineSemigroup, HVector};

use super::poset::{h_vector_of_poset, Poset};

/// Finite distributive lattice stored as the order ideals of its poset of
/// join-irreducibles; join is union and meet is intersection.
#[derive(Clone, Debug)]
pub struct DistLattice {
    base: Poset,
    /// Element `k` is the ideal `ideals[k]`; sorted by size, then value.
    ideals: Vec<u64>,
    index: FxHashMap<u64, usize>,
    labels: Vec<String>,
}

fn ideal_label(mask: u64, n: usize) -> String {
    let parts: Vec<String> = (0..n).filter(|&b| mask >> b & 1 == 1).map(|b| (b + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Lattice of order ideals of `p`, ordered by inclusion.
pub fn order_ideal_lattice(p: &Poset) -> Result<DistLattice> {
    let ideals = p.order_ideals()?;
    let labels = ideals.iter().map(|&m| ideal_label(m, p.len())).collect();
    Ok(DistLattice::assemble(p.clone(), ideals, labels))
}

/// Join-irreducible elements of a lattice given by its order: those with
/// exactly one lower cover. Returns the elements and their induced order.
pub fn join_irreducibles_of_order(order: &Poset) -> (Vec<usize>, Poset) {
    let irreducible: Vec<usize> = (0..order.len()).filter(|&x| order.lower_covers(x).count() == 1).collect();
    let sub = order.induced(&irreducible);
    (irreducible, sub)
}

impl DistLattice {
    fn assemble(base: Poset, ideals: Vec<u64>, labels: Vec<String>) -> Self {
        let index = ideals.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        DistLattice { base, ideals, index, labels }
    }

    /// Interprets `order` as a lattice. Fails unless every pair has a join
    /// and a meet and the lattice is distributive. Element `k` keeps label `k+1`.
    pub fn from_order(order: &Poset) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(Error::NotLattice("a lattice has at least one element".into()));
        }
        let bound = |a: usize, b: usize, upper: bool| -> Option<usize> {
            let cands: Vec<usize> =
                (0..n).filter(|&u| if upper { order.leq(a, u) && order.leq(b, u) } else { order.leq(u, a) && order.leq(u, b) }).collect();
            cands.iter().copied().find(|&u| cands.iter().all(|&v| if upper { order.leq(u, v) } else { order.leq(v, u) }))
        };
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                join[a][b] = bound(a, b, true).ok_or_else(|| Error::NotLattice(format!("elements {} and {} have no join", a + 1, b + 1)))?;
                meet[a][b] = bound(a, b, false).ok_or_else(|| Error::NotLattice(format!("elements {} and {} have no meet", a + 1, b + 1)))?;
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                        return Err(Error::NotLattice(format!("not distributive at elements {}, {}, {}", a + 1, b + 1, c + 1)));
                    }
                }
            }
        }
        let (irreducible, base) = join_irreducibles_of_order(order);
        if irreducible.len() > 64 {
            return Err(Error::ResourceCap("more than 64 join-irreducible elements".into()));
        }
        let mut elems: Vec<(u64, usize)> = (0..n)
            .map(|x| (irreducible.iter().enumerate().filter(|&(_, &j)| order.leq(j, x)).fold(0u64, |m, (k, _)| m | 1 << k), x))
            .collect();
        elems.sort_by_key(|&(m, _)| (m.count_ones(), m));
        let ideals: Vec<u64> = elems.iter().map(|e| e.0).collect();
        let labels = elems.iter().map(|e| (e.1 + 1).to_string()).collect();
        Ok(DistLattice::assemble(base, ideals, labels))
    }

    /// Lattice given in poset JSON form, its elements being the lattice elements.
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_order(&Poset::from_json(text)?)
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn label(&self, k: usize) -> &str {
        &self.labels[k]
    }

    pub fn ideal(&self, k: usize) -> u64 {
        self.ideals[k]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.ideals[a] & !self.ideals[b] == 0
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.index[&(self.ideals[a] | self.ideals[b])]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.index[&(self.ideals[a] & self.ideals[b])]
    }

    /// The lattice as a poset on its elements; covers add one element to an ideal.
    pub fn order(&self) -> Poset {
        let mut covers = Vec::new();
        for (a, &x) in self.ideals.iter().enumerate() {
            for (b, &y) in self.ideals.iter().enumerate() {
                if x & !y == 0 && (y & !x).count_ones() == 1 {
                    covers.push((a, b));
                }
            }
        }
        Poset::new(self.len(), &covers).expect("inclusion order on ideals")
    }

    /// Poset of join-irreducible elements, computed from the lattice order.
    pub fn join_irreducibles(&self) -> Poset {
        join_irreducibles_of_order(&self.order()).1
    }

    /// No join-irreducible element is comparable to all the others.
    pub fn is_simple(&self) -> bool {
        !self.base.has_universal_element()
    }

    /// One binomial `x_a x_b - x_{a∧b} x_{a∨b}` per incomparable pair.
    pub fn join_meet_generators(&self) -> Vec<JoinMeetBinomial> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if !self.leq(a, b) && !self.leq(b, a) {
                    out.push(JoinMeetBinomial {
                        a: self.labels[a].clone(),
                        b: self.labels[b].clone(),
                        meet: self.labels[self.meet(a, b)].clone(),
                        join: self.labels[self.join(a, b)].clone(),
                    });
                }
            }
        }
        out
    }

    /// Hibi semigroup: one generator per element, the indicator of its ideal
    /// followed by a homogenizing `1`.
    pub fn hibi_semigroup(&self) -> AffineSemigroup {
        AffineSemigroup::hibi(self.base.len(), self.base.covers().to_vec(), &self.ideals)
    }

    pub fn h_vector(&self) -> Result<HVector> {
        h_vector_of_poset(&self.base)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let order = self.order();
        serde_json::json!({
            "n": self.len(),
            "covers": order.covers().iter().map(|&(a, b)| [a + 1, b + 1]).collect::<Vec<_>>(),
            "labels": self.labels,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinMeetBinomial {
    pub a: String,
    pub b: String,
    pub meet: String,
    pub join: String,
}

impl fmt::Display for JoinMeetBinomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{}]x[{}]-x[{}]x[{}]", self.a, self.b, self.meet, self.join)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeClass {
    pub linear_resolution: bool,
    pub extremal_gorenstein: bool,
}

/// A chain together with one extra element incomparable to it.
pub fn is_chain_plus_point(p: &Poset) -> bool {
    let comps = p.components();
    comps.len() == 2 && comps.iter().any(|c| c.len() == 1) && comps.iter().all(|c| p.induced(c).is_chain())
}

/// The four posets whose join-meet ideals are extremal Gorenstein: the
/// 3-element antichain and two 2-chains joined by zero, one or two relations.
pub fn extremal_posets() -> [Poset; 4] {
    [
        Poset::antichain(3),
        Poset::new(4, &[(0, 1), (2, 3)]).expect("two chains"),
        Poset::new(4, &[(0, 1), (2, 3), (0, 3)]).expect("one cross relation"),
        Poset::new(4, &[(0, 1), (2, 3), (0, 3), (2, 1)]).expect("two cross relations"),
    ]
}

pub fn classify_lattice(l: &DistLattice) -> Result<LatticeClass> {
    if !l.is_simple() {
        return Err(Error::NotSimple);
    }
    let p = &l.base;
    Ok(LatticeClass {
        linear_resolution: is_chain_plus_point(p),
        extremal_gorenstein: extremal_posets().iter().any(|q| q.is_isomorphic(p)),
    })
}

/// The same two properties read off the h-vector of the Hibi ring: a linear
/// resolution is `h = (1)` or `(1,q)`, and extremal Gorenstein is a pure base
/// poset with `h = (1,q,1)`, `q > 1`.
pub fn lattice_class_from_h_vector(l: &DistLattice) -> Result<LatticeClass> {
    let h = l.h_vector()?;
    Ok(LatticeClass {
        linear_resolution: h.is_linear(),
        extremal_gorenstein: l.base.is_pure() && h.extremal_q().is_some_and(|q| q > 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::poset::DEFAULT_POSET_CAP;
    use proptest::prelude::*;

    #[test]
    fn diamond_and_chain() {
        let diamond = order_ideal_lattice(&Poset::antichain(2)).unwrap();
        assert_eq!(diamond.len(), 4);
        assert!(diamond.join_irreducibles().is_isomorphic(&Poset::antichain(2)));
        assert!(diamond.is_simple());
        assert_eq!(diamond.join_meet_generators().len(), 1);
        assert_eq!(diamond.join_meet_generators()[0].to_string(), "x[{1}]x[{2}]-x[{}]x[{1,2}]");
        let chain = order_ideal_lattice(&Poset::chain(3)).unwrap();
        assert!(chain.order().is_isomorphic(&Poset::chain(4)));
        assert!(chain.join_irreducibles().is_isomorphic(&Poset::chain(3)));
        assert!(!chain.is_simple());
        assert!(chain.join_meet_generators().is_empty());
        assert_eq!(classify_lattice(&chain).unwrap_err(), Error::NotSimple);
    }

    #[test]
    fn hibi_semigroup_shape() {
        let diamond = order_ideal_lattice(&Poset::antichain(2)).unwrap();
        let sg = diamond.hibi_semigroup();
        assert_eq!(sg.generators().len(), 4);
        assert_eq!(sg.dim(), 3);
        assert_eq!(order_ideal_lattice(&Poset::chain(2)).unwrap().hibi_semigroup().generators().len(), 3);
    }

    #[test]
    fn rejects_non_lattices() {
        // two minimal elements, no bottom
        let v = Poset::new(3, &[(0, 2), (1, 2)]).unwrap();
        assert!(matches!(DistLattice::from_order(&v), Err(Error::NotLattice(_))));
        // pentagon N5 is a lattice but not distributive
        let n5 = Poset::new(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        assert!(matches!(DistLattice::from_order(&n5), Err(Error::NotLattice(_))));
        // diamond M3
        let m3 = Poset::new(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        assert!(matches!(DistLattice::from_order(&m3), Err(Error::NotLattice(_))));
    }

    #[test]
    fn boolean_lattice_from_order() {
        let b3 = order_ideal_lattice(&Poset::antichain(3)).unwrap().order();
        let l = DistLattice::from_order(&b3).unwrap();
        assert!(l.join_irreducibles().is_isomorphic(&Poset::antichain(3)));
        assert_eq!(l.h_vector().unwrap(), HVector(vec![1, 4, 1]));
        assert_eq!(classify_lattice(&l).unwrap(), LatticeClass { linear_resolution: false, extremal_gorenstein: true });
    }

    fn random_poset() -> impl Strategy<Value = Poset> {
        (1usize..6).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..8).prop_map(move |pairs| {
                let rel: Vec<(usize, usize)> = pairs.into_iter().filter(|(a, b)| a < b).collect();
                Poset::from_relations(n, &rel).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn birkhoff_round_trip(p in random_poset()) {
            prop_assume!(p.len() <= DEFAULT_POSET_CAP);
            let l = order_ideal_lattice(&p).unwrap();
            let irr = l.join_irreducibles();
            prop_assert!(irr.is_isomorphic(&p));
            let again = order_ideal_lattice(&irr).unwrap();
            prop_assert!(again.order().is_isomorphic(&l.order()));
            let rebuilt = DistLattice::from_order(&l.order()).unwrap();
            prop_assert_eq!(rebuilt.len(), l.len());
            prop_assert_eq!(rebuilt.h_vector().unwrap(), l.h_vector().unwrap());
        }

        #[test]
        fn h_vector_sums_to_extension_count(p in random_poset()) {
            prop_assert_eq!(h_vector_of_poset(&p).unwrap().sum() as u64, p.linear_extension_count().unwrap());
        }
    }
}
