//! First syzygies of the inner-minor presentation, one multidegree at a time.
//!
//! The degree-`h` part of `F = ⊕ S e_k` has basis `μ e_k` with
//! `deg μ + deg f_k = h`; it maps to `S_h` by `e_k ↦ f_k`. The minimal part
//! of the kernel is the quotient by the images `x_v · ker_{h - deg x_v}`.

use std::rc::Rc;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, Field, FieldChoice, PrimeField, Rationals, SparseMatrix, Span};
use crate::toric::{InnerMinor, MultiDegree, ToricModel};

/// Largest total degree a slice may be built at unless configured otherwise.
pub const DEFAULT_SLICE_DEGREE_CAP: u32 = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyzygySlice {
    pub degree: MultiDegree,
    pub total_degree: u32,
    /// Number of basis elements `μ e_k` of the free module in degree `h`.
    pub free_rank: usize,
    pub relation_dim: usize,
    pub minimal_dim: usize,
}

struct Slice<E> {
    basis: Vec<(Vec<usize>, usize)>,
    index: FxHashMap<(Vec<usize>, usize), usize>,
    kernel: Vec<Vec<E>>,
}

/// Memoizing slice builder over one field.
pub struct SyzygyEngine<'m, F: Field> {
    model: &'m ToricModel,
    field: F,
    degree_cap: u32,
    terms: Vec<([usize; 2], [usize; 2])>,
    minor_degrees: Vec<MultiDegree>,
    slices: FxHashMap<MultiDegree, Rc<Slice<F::Elem>>>,
    lower: FxHashMap<MultiDegree, Rc<Span<F>>>,
}

fn sorted_pair(a: usize, b: usize) -> [usize; 2] {
    if a <= b { [a, b] } else { [b, a] }
}

fn merge(mono: &[usize], extra: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(mono.len() + extra.len());
    out.extend_from_slice(mono);
    out.extend_from_slice(extra);
    out.sort_unstable();
    out
}

fn minus(a: &[u32], b: &[u32]) -> Option<MultiDegree> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

impl<'m, F: Field + Clone> SyzygyEngine<'m, F> {
    pub fn new(model: &'m ToricModel, field: F) -> Self {
        let terms = model
            .minors
            .iter()
            .map(|minor| {
                let [a, b] = minor.plus().map(|v| model.var(v));
                let [c, d] = minor.minus().map(|v| model.var(v));
                (sorted_pair(a, b), sorted_pair(c, d))
            })
            .collect();
        let minor_degrees = model.minors.iter().map(|minor| model.minor_degree(minor)).collect();
        SyzygyEngine {
            model,
            field,
            degree_cap: DEFAULT_SLICE_DEGREE_CAP,
            terms,
            minor_degrees,
            slices: FxHashMap::default(),
            lower: FxHashMap::default(),
        }
    }

    pub fn with_degree_cap(mut self, cap: u32) -> Self {
        self.degree_cap = cap;
        self
    }

    fn guard(&self, h: &[u32]) -> Result<u32> {
        if h.len() != self.model.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.model.ambient_dim(), got: h.len() });
        }
        let total: u32 = h[..self.model.m].iter().sum();
        if total > self.degree_cap {
            return Err(Error::ResourceCap(format!("syzygy slice at total degree {total} exceeds the cap {}", self.degree_cap)));
        }
        Ok(total)
    }

    fn slice(&mut self, h: &[u32]) -> Rc<Slice<F::Elem>> {
        if let Some(s) = self.slices.get(h) {
            return s.clone();
        }
        let s = Rc::new(self.build(h));
        self.slices.insert(h.to_vec(), s.clone());
        s
    }

    fn build(&self, h: &[u32]) -> Slice<F::Elem> {
        let mut basis = Vec::new();
        for (k, deg) in self.minor_degrees.iter().enumerate() {
            if let Some(rest) = minus(h, deg) {
                for mono in self.model.monomials_of_degree(&rest) {
                    basis.push((mono, k));
                }
            }
        }
        let targets = self.model.monomials_of_degree(h);
        let row: FxHashMap<&[usize], usize> = targets.iter().enumerate().map(|(r, t)| (t.as_slice(), r)).collect();
        let mut matrix = SparseMatrix::new(targets.len());
        for (mono, k) in &basis {
            let (plus, minus) = &self.terms[*k];
            matrix.push_col(vec![(row[merge(mono, plus).as_slice()], 1), (row[merge(mono, minus).as_slice()], -1)]);
        }
        let kernel = kernel_basis(&self.field, &matrix);
        let index = basis.iter().enumerate().map(|(c, b)| (b.clone(), c)).collect();
        Slice { basis, index, kernel }
    }

    /// Span of the variable multiples of lower-degree syzygies inside the
    /// degree-`h` slice.
    fn lower_span(&mut self, h: &[u32]) -> Rc<Span<F>> {
        if let Some(s) = self.lower.get(h) {
            return s.clone();
        }
        let top = self.slice(h);
        let mut span = Span::new(self.field.clone());
        for v in 0..self.model.vertices.len() {
            let Some(rest) = minus(h, &self.model.var_degree(v)) else { continue };
            let below = self.slice(&rest);
            for z in &below.kernel {
                let mut lifted = vec![self.field.zero(); top.basis.len()];
                for (c, coef) in z.iter().enumerate() {
                    if self.field.is_zero(coef) {
                        continue;
                    }
                    let (mono, k) = &below.basis[c];
                    lifted[top.index[&(merge(mono, &[v]), *k)]] = coef.clone();
                }
                span.insert(lifted);
            }
        }
        let span = Rc::new(span);
        self.lower.insert(h.to_vec(), span.clone());
        span
    }

    pub fn syzygy_slice(&mut self, h: &[u32]) -> Result<SyzygySlice> {
        let total = self.guard(h)?;
        let top = self.slice(h);
        let lower = self.lower_span(h);
        Ok(SyzygySlice {
            degree: h.to_vec(),
            total_degree: total,
            free_rank: top.basis.len(),
            relation_dim: top.kernel.len(),
            minimal_dim: top.kernel.len() - lower.dim(),
        })
    }

    /// Whether `f_a e_b - f_b e_a` is nonzero modulo `m · Syz_1`.
    pub fn koszul_minimal(&mut self, a: usize, b: usize) -> Result<bool> {
        if a == b {
            return Err(Error::Precondition("a Koszul pair needs two distinct minors".into()));
        }
        let h: MultiDegree = self.minor_degrees[a].iter().zip(&self.minor_degrees[b]).map(|(x, y)| x + y).collect();
        self.guard(&h)?;
        let top = self.slice(&h);
        let lower = self.lower_span(&h);
        let f = &self.field;
        let mut z = vec![f.zero(); top.basis.len()];
        let (pa, ma) = self.terms[a];
        let (pb, mb) = self.terms[b];
        for (mono, k, sign) in [(pa, b, 1), (ma, b, -1), (pb, a, -1), (mb, a, 1)] {
            let c = top.index[&(mono.to_vec(), k)];
            z[c] = f.add(&z[c], &f.from_i64(sign));
        }
        Ok(!lower.contains(&z))
    }
}

/// A syzygy engine over a field chosen at run time.
pub enum Syzygies<'m> {
    Rational(SyzygyEngine<'m, Rationals>),
    Prime(SyzygyEngine<'m, PrimeField>),
}

impl<'m> Syzygies<'m> {
    pub fn new(model: &'m ToricModel, field: FieldChoice) -> Self {
        match field {
            FieldChoice::Rational => Syzygies::Rational(SyzygyEngine::new(model, Rationals)),
            FieldChoice::Prime(p) => Syzygies::Prime(SyzygyEngine::new(model, PrimeField::new(p))),
        }
    }

    pub fn with_degree_cap(self, cap: u32) -> Self {
        match self {
            Syzygies::Rational(e) => Syzygies::Rational(e.with_degree_cap(cap)),
            Syzygies::Prime(e) => Syzygies::Prime(e.with_degree_cap(cap)),
        }
    }

    pub fn syzygy_slice(&mut self, h: &[u32]) -> Result<SyzygySlice> {
        match self {
            Syzygies::Rational(e) => e.syzygy_slice(h),
            Syzygies::Prime(e) => e.syzygy_slice(h),
        }
    }

    pub fn koszul_minimal(&mut self, a: usize, b: usize) -> Result<bool> {
        match self {
            Syzygies::Rational(e) => e.koszul_minimal(a, b),
            Syzygies::Prime(e) => e.koszul_minimal(a, b),
        }
    }
}

pub fn syzygy_slice(model: &ToricModel, h: &[u32], field: FieldChoice) -> Result<SyzygySlice> {
    Syzygies::new(model, field).syzygy_slice(h)
}

fn minor_index(model: &ToricModel, m: &InnerMinor) -> Result<usize> {
    model
        .minors
        .binary_search(m)
        .map_err(|_| Error::Precondition(format!("{m} is not an inner minor of the collection")))
}

pub fn koszul_pair_minimal(model: &ToricModel, a: &InnerMinor, b: &InnerMinor, field: FieldChoice) -> Result<bool> {
    let (ia, ib) = (minor_index(model, a)?, minor_index(model, b)?);
    Syzygies::new(model, field).koszul_minimal(ia, ib)
}

/// First pair of minors, in lexicographic order, whose Koszul syzygy is minimal.
pub fn find_koszul_pair(model: &ToricModel, field: FieldChoice) -> Result<Option<(InnerMinor, InnerMinor)>> {
    let mut engine = Syzygies::new(model, field);
    for a in 0..model.minors.len() {
        for b in a + 1..model.minors.len() {
            if engine.koszul_minimal(a, b)? {
                return Ok(Some((model.minors[a], model.minors[b])));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyomino::CellCollection;

    fn model(cells: &[(i32, i32)]) -> ToricModel {
        ToricModel::new(&CellCollection::new(cells.to_vec()).unwrap())
    }

    #[test]
    fn domino_has_two_linear_syzygies() {
        let t = model(&[(1, 1), (2, 1)]);
        let mut total = 0;
        for h in t.semigroup.layers(3, 10_000).unwrap()[3].clone() {
            let s = syzygy_slice(&t, &h, FieldChoice::Rational).unwrap();
            assert_eq!(s.minimal_dim, s.relation_dim);
            total += s.minimal_dim;
        }
        assert_eq!(total, 2);
        for h in t.semigroup.layers(4, 10_000).unwrap()[4].clone() {
            assert_eq!(syzygy_slice(&t, &h, FieldChoice::Rational).unwrap().minimal_dim, 0);
        }
        assert_eq!(find_koszul_pair(&t, FieldChoice::Rational).unwrap(), None);
    }

    #[test]
    fn single_cell_has_no_relations() {
        let t = model(&[(1, 1)]);
        for h in t.semigroup.layers(3, 1000).unwrap()[3].clone() {
            assert_eq!(syzygy_slice(&t, &h, FieldChoice::Rational).unwrap().relation_dim, 0);
        }
    }

    #[test]
    fn diagonal_cells_form_a_koszul_pair() {
        let t = model(&[(1, 1), (2, 2)]);
        assert_eq!(t.minors.len(), 2);
        for field in [FieldChoice::Rational, FieldChoice::Prime(32003)] {
            assert!(koszul_pair_minimal(&t, &t.minors[0], &t.minors[1], field).unwrap());
        }
    }

    #[test]
    fn degree_guard() {
        let t = model(&[(1, 1)]);
        let h = vec![3, 3, 3, 3];
        assert!(syzygy_slice(&t, &h, FieldChoice::Rational).unwrap_err().is_resource_cap());
        let mut big = Syzygies::new(&t, FieldChoice::Rational).with_degree_cap(6);
        assert!(big.syzygy_slice(&h).is_ok());
        assert!(matches!(syzygy_slice(&t, &[1, 1], FieldChoice::Rational), Err(Error::DimensionMismatch { .. })));
    }
}
