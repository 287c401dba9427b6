use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::polyomino::{CellCollection, Vertex};

/// The binomial `x_{il} x_{kj} - x_{kl} x_{ij}` of an inner interval
/// `[(i,j),(k,l)]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InnerMinor {
    pub lower: Vertex,
    pub upper: Vertex,
}

impl InnerMinor {
    /// Anti-diagonal monomial `x_{il} x_{kj}`.
    pub fn plus(&self) -> [Vertex; 2] {
        let ((i, j), (k, l)) = (self.lower, self.upper);
        [(i, l), (k, j)]
    }

    /// Diagonal monomial `x_{kl} x_{ij}`.
    pub fn minus(&self) -> [Vertex; 2] {
        let ((i, j), (k, l)) = (self.lower, self.upper);
        [(k, l), (i, j)]
    }

    pub fn corners(&self) -> [Vertex; 4] {
        let ((i, j), (k, l)) = (self.lower, self.upper);
        [(i, j), (k, j), (i, l), (k, l)]
    }
}

fn var(f: &mut fmt::Formatter<'_>, (x, y): Vertex) -> fmt::Result {
    if x < 10 && y < 10 {
        write!(f, "x{x}{y}")
    } else {
        write!(f, "x[{x},{y}]")
    }
}

impl fmt::Display for InnerMinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.plus();
        let [c, d] = self.minus();
        var(f, a)?;
        var(f, b)?;
        write!(f, "-")?;
        var(f, c)?;
        var(f, d)
    }
}

impl Serialize for InnerMinor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pair = |v: [Vertex; 2]| [[v[0].0, v[0].1], [v[1].0, v[1].1]];
        let mut st = s.serialize_struct("InnerMinor", 3)?;
        st.serialize_field("interval", &pair([self.lower, self.upper]))?;
        st.serialize_field("plus", &pair(self.plus()))?;
        st.serialize_field("minus", &pair(self.minus()))?;
        st.end()
    }
}

/// All inner 2-minors of a collection, sorted by interval.
pub fn inner_minors(c: &CellCollection) -> Vec<InnerMinor> {
    let verts = c.vertices();
    let list: Vec<Vertex> = verts.iter().copied().collect();
    let mut out = Vec::new();
    for &(i, j) in &list {
        for &(k, l) in &list {
            if i < k && j < l && verts.contains(&(i, l)) && verts.contains(&(k, j)) {
                out.push(InnerMinor { lower: (i, j), upper: (k, l) });
            }
        }
    }
    out.sort_unstable();
    out
}
