use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::FieldChoice;
use crate::toric::semigroup::{AffineSemigroup, MultiDegree, DEFAULT_LAYER_CAP};

use super::complex::divisor_complex;

/// Default largest total degree of a Betti table.
pub const DEFAULT_BETTI_DEGREE: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultigradedBetti {
    /// Homological index in the resolution of the semigroup ring.
    pub i: usize,
    pub degree: MultiDegree,
    pub total_degree: u32,
    pub rank: usize,
}

/// Betti numbers `β_{i,h}` of the semigroup ring for `|h|` up to a cap.
/// Only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub field: FieldChoice,
    pub degree_cap: u32,
    /// Largest total degree that was fully computed.
    pub computed_to: u32,
    /// Why the computation stopped below `degree_cap`, if it did.
    pub cap_reached: Option<String>,
    pub multigraded: Vec<MultigradedBetti>,
}

impl BettiTable {
    /// `β_{i,j}` of the semigroup ring `S/I`.
    pub fn ring(&self, i: usize, j: u32) -> usize {
        self.multigraded.iter().filter(|e| e.i == i && e.total_degree == j).map(|e| e.rank).sum()
    }

    /// `β_{i,j}` of the ideal, which equals `β_{i+1,j}` of the ring.
    pub fn ideal(&self, i: usize, j: u32) -> usize {
        self.ring(i + 1, j)
    }

    /// Ring-indexed totals `(i, j) -> β_{i,j}`, nonzero entries only.
    pub fn totals(&self) -> BTreeMap<(usize, u32), usize> {
        let mut out = BTreeMap::new();
        for e in &self.multigraded {
            *out.entry((e.i, e.total_degree)).or_insert(0) += e.rank;
        }
        out
    }

    pub fn max_index(&self) -> usize {
        self.multigraded.iter().map(|e| e.i).max().unwrap_or(0)
    }

    /// Text table of the ring's Betti numbers: one row per homological index
    /// with index 0 at the bottom, one column per total degree.
    pub fn to_text(&self) -> String {
        let totals = self.totals();
        let width = totals.values().map(|v| v.to_string().len()).max().unwrap_or(1).max(self.computed_to.to_string().len());
        let mut out = String::new();
        let _ = writeln!(out, "computed up to degree {} over {}", self.computed_to, self.field);
        if let Some(reason) = &self.cap_reached {
            let _ = writeln!(out, "cap reached: {reason}");
        }
        for i in (0..=self.max_index()).rev() {
            let _ = write!(out, "{i:>3} |");
            for j in 0..=self.computed_to {
                match totals.get(&(i, j)) {
                    Some(v) => { let _ = write!(out, " {v:>width$}"); }
                    None => { let _ = write!(out, " {:>width$}", "."); }
                }
            }
            out.push('\n');
        }
        let _ = write!(out, "    +");
        for _ in 0..=self.computed_to {
            let _ = write!(out, " {}", "-".repeat(width));
        }
        let _ = write!(out, "\n  i/j");
        for j in 0..=self.computed_to {
            let _ = write!(out, " {j:>width$}");
        }
        out.push('\n');
        let _ = writeln!(out, "row i of the ring is row i-1 of the ideal");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let totals: Vec<_> = self.totals().into_iter().map(|((i, j), v)| json!({"i": i, "j": j, "rank": v})).collect();
        let ideal: Vec<_> = self
            .totals()
            .into_iter()
            .filter(|&((i, _), _)| i > 0)
            .map(|((i, j), v)| json!({"i": i - 1, "j": j, "rank": v}))
            .collect();
        json!({
            "field": self.field,
            "degree_cap": self.degree_cap,
            "computed_to": self.computed_to,
            "cap_reached": self.cap_reached,
            "ring_totals": totals,
            "ideal_totals": ideal,
            "multigraded": self.multigraded,
        })
    }
}

/// Betti numbers of `K[H]` in every degree `|h| <= max_degree`, read off the
/// reduced homology of the divisor complexes. A layer cap that is hit stops
/// the computation and is recorded in the table.
pub fn betti_table(sg: &AffineSemigroup, max_degree: u32, field: FieldChoice) -> Result<BettiTable> {
    betti_table_capped(sg, max_degree, field, DEFAULT_LAYER_CAP)
}

pub fn betti_table_capped(sg: &AffineSemigroup, max_degree: u32, field: FieldChoice, layer_cap: usize) -> Result<BettiTable> {
    let mut table = BettiTable { field, degree_cap: max_degree, computed_to: 0, cap_reached: None, multigraded: Vec::new() };
    let layers = match sg.layers(max_degree as usize, layer_cap) {
        Ok(l) => l,
        Err(Error::ResourceCap(reason)) => {
            // recompute as far as the cap allows
            let mut l = Vec::new();
            for d in 0..max_degree as usize {
                match sg.layers(d, layer_cap) {
                    Ok(found) => l = found,
                    Err(_) => break,
                }
            }
            table.cap_reached = Some(reason);
            l
        }
        Err(e) => return Err(e),
    };
    for (d, layer) in layers.iter().enumerate() {
        let entries: Vec<Vec<MultigradedBetti>> = layer
            .par_iter()
            .map(|h| {
                let cx = divisor_complex(sg, h)?;
                Ok(cx
                    .reduced_betti_numbers(field)
                    .into_iter()
                    .enumerate()
                    .filter(|&(_, r)| r > 0)
                    .map(|(i, rank)| MultigradedBetti { i, degree: h.clone(), total_degree: d as u32, rank })
                    .collect())
            })
            .collect::<Result<_>>()?;
        table.multigraded.extend(entries.into_iter().flatten());
        table.computed_to = d as u32;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyomino::CellCollection;
    use crate::toric::semigroup_of;

    fn sg(grid: &str) -> AffineSemigroup {
        semigroup_of(&CellCollection::from_grid(grid).unwrap())
    }

    #[test]
    fn single_cell_is_a_hypersurface() {
        let t = betti_table(&sg("#"), 5, FieldChoice::Rational).unwrap();
        assert_eq!(t.ring(0, 0), 1);
        assert_eq!(t.ideal(0, 2), 1);
        assert_eq!(t.max_index(), 1);
    }

    #[test]
    fn domino_matches_hilbert_burch() {
        let t = betti_table(&sg("##"), 5, FieldChoice::Rational).unwrap();
        assert_eq!(t.ideal(0, 2), 3);
        assert_eq!(t.ideal(1, 3), 2);
        assert_eq!(t.ideal(1, 4), 0);
        assert_eq!(t.max_index(), 2);
        let expected: BTreeMap<(usize, u32), usize> = [((0, 0), 1), ((1, 2), 3), ((2, 3), 2)].into_iter().collect();
        assert_eq!(t.totals(), expected);
    }

    #[test]
    fn totals_sum_multigraded_and_fields_agree() {
        let s = sg("##\n##");
        let q = betti_table(&s, 4, FieldChoice::Rational).unwrap();
        let p = betti_table(&s, 4, FieldChoice::Prime(32003)).unwrap();
        assert_eq!(q.multigraded, p.multigraded);
        let sum: usize = q.totals().values().sum();
        assert_eq!(sum, q.multigraded.iter().map(|e| e.rank).sum::<usize>());
        assert_eq!(q.ideal(0, 2), 9);
    }

    #[test]
    fn cap_is_reported() {
        let t = betti_table_capped(&sg("##\n##"), 4, FieldChoice::Rational, 50).unwrap();
        assert!(t.cap_reached.is_some());
        assert!(t.computed_to < 4);
        assert!(t.to_text().contains("cap reached"));
    }

    #[test]
    fn text_and_json() {
        let t = betti_table(&sg("##"), 4, FieldChoice::Rational).unwrap();
        let text = t.to_text();
        assert!(text.starts_with("computed up to degree 4 over QQ"));
        let v = t.to_json();
        assert_eq!(v["field"], "QQ");
        assert!(v["ideal_totals"].as_array().unwrap().contains(&json!({"i": 1, "j": 3, "rank": 2})));
    }
}
