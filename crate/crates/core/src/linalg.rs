//! Exact linear algebra over the rationals and prime fields.
//!
//! Ranks of integer matrices go through a sparse peeling pass (rows or
//! columns with a single nonzero entry each contribute one pivot) followed by
//! dense elimination of whatever is left: fraction-free Bareiss elimination
//! for the rationals, plain Gaussian elimination modulo p otherwise.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u32 = 32003;

/// Coefficient field selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum FieldChoice {
    #[default]
    Rational,
    Prime(u32),
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Rational => write!(f, "QQ"),
            FieldChoice::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl Serialize for FieldChoice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldChoice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

impl FromStr for FieldChoice {
    type Err = Error;

    /// Accepts `q`, `qq`, `rational`, `gf:P` and `GF(P)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if matches!(t.as_str(), "q" | "qq" | "rational" | "rationals") {
            return Ok(FieldChoice::Rational);
        }
        let digits = t
            .strip_prefix("gf:")
            .or_else(|| t.strip_prefix("gf(").and_then(|r| r.strip_suffix(')')))
            .ok_or_else(|| Error::Malformed(format!("unknown field {s:?}; use q or gf:P")))?;
        let p: u32 = digits.parse().map_err(|_| Error::Malformed(format!("bad prime in {s:?}")))?;
        if !(2..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::Malformed(format!("{p} is not a prime below 2^31")));
        }
        Ok(FieldChoice::Prime(p))
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d: &u32| (*d as u64) * (*d as u64) <= p as u64).all(|d| !p.is_multiple_of(d))
}

/// Field arithmetic used by the generic elimination routines.
pub trait Field {
    type Elem: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u32) -> Self {
        assert!(is_prime(p), "{p} is not prime");
        PrimeField { p: p as u64 }
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
}

/// Integer matrix stored by columns; each column lists `(row, value)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize) -> Self {
        SparseMatrix { nrows, cols: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn push_col(&mut self, col: Vec<(usize, i64)>) {
        debug_assert!(col.iter().all(|&(r, _)| r < self.nrows));
        self.cols.push(col);
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; self.ncols()]; self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                out[r][c] += v;
            }
        }
        out
    }

    pub fn rank(&self, field: FieldChoice) -> usize {
        let (peeled, rest) = peel_singletons(self);
        peeled
            + match field {
                FieldChoice::Rational => rank_bareiss(rest),
                FieldChoice::Prime(p) => rank_dense(&PrimeField::new(p), rest),
            }
    }
}

/// Removes rows and columns holding a single nonzero entry, each such removal
/// accounting for one unit of rank, and returns the count together with the
/// dense remainder.
fn peel_singletons(m: &SparseMatrix) -> (usize, Vec<Vec<i64>>) {
    let ncols = m.ncols();
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); m.nrows];
    let mut col_count = vec![0usize; ncols];
    for (c, col) in m.cols.iter().enumerate() {
        for &(r, v) in col {
            if v != 0 {
                rows[r].push(c);
                col_count[c] += 1;
            }
        }
    }
    let mut row_count: Vec<usize> = rows.iter().map(|r| r.len()).collect();
    let mut row_alive = vec![true; m.nrows];
    let mut col_alive = vec![true; ncols];
    let mut stack: Vec<(bool, usize)> = Vec::new();
    stack.extend((0..m.nrows).filter(|&r| row_count[r] <= 1).map(|r| (true, r)));
    stack.extend((0..ncols).filter(|&c| col_count[c] <= 1).map(|c| (false, c)));
    let mut peeled = 0;

    while let Some((is_row, idx)) = stack.pop() {
        let (row, col) = if is_row {
            if !row_alive[idx] || row_count[idx] > 1 {
                continue;
            }
            if row_count[idx] == 0 {
                row_alive[idx] = false;
                continue;
            }
            let c = *rows[idx].iter().find(|&&c| col_alive[c]).unwrap();
            (idx, c)
        } else {
            if !col_alive[idx] || col_count[idx] > 1 {
                continue;
            }
            if col_count[idx] == 0 {
                col_alive[idx] = false;
                continue;
            }
            let r = m.cols[idx].iter().find(|&&(r, v)| v != 0 && row_alive[r]).unwrap().0;
            (r, idx)
        };
        peeled += 1;
        row_alive[row] = false;
        col_alive[col] = false;
        for &c in &rows[row] {
            if col_alive[c] {
                col_count[c] -= 1;
                if col_count[c] <= 1 {
                    stack.push((false, c));
                }
            }
        }
        for &(r, v) in &m.cols[col] {
            if v != 0 && row_alive[r] {
                row_count[r] -= 1;
                if row_count[r] <= 1 {
                    stack.push((true, r));
                }
            }
        }
    }

    let live_cols: Vec<usize> = (0..ncols).filter(|&c| col_alive[c]).collect();
    let mut col_pos = vec![usize::MAX; ncols];
    for (i, &c) in live_cols.iter().enumerate() {
        col_pos[c] = i;
    }
    let live_rows: Vec<usize> = (0..m.nrows).filter(|&r| row_alive[r]).collect();
    let mut row_pos = vec![usize::MAX; m.nrows];
    for (i, &r) in live_rows.iter().enumerate() {
        row_pos[r] = i;
    }
    let mut dense = vec![vec![0i64; live_cols.len()]; live_rows.len()];
    for &c in &live_cols {
        for &(r, v) in &m.cols[c] {
            if row_alive[r] {
                dense[row_pos[r]][col_pos[c]] += v;
            }
        }
    }
    (peeled, dense)
}

/// Rank over a field by Gaussian elimination.
pub fn rank_dense<F: Field>(f: &F, rows: Vec<Vec<i64>>) -> usize {
    let mut a: Vec<Vec<F::Elem>> = rows.into_iter().map(|r| r.into_iter().map(|v| f.from_i64(v)).collect()).collect();
    echelonize(f, &mut a).len()
}

/// In-place reduced row echelon form; returns the pivot columns.
fn echelonize<F: Field>(f: &F, a: &mut Vec<Vec<F::Elem>>) -> Vec<usize> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !f.is_zero(&a[i][c])) else { continue };
        a.swap(r, p);
        let inv = f.inv(&a[r][c]);
        for v in a[r].iter_mut() {
            *v = f.mul(v, &inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    pivots
}

/// Rank over the rationals by fraction-free elimination; machine integers
/// are tried first and big integers take over on overflow.
pub fn rank_bareiss(rows: Vec<Vec<i64>>) -> usize {
    let small: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    if let Some(r) = bareiss_i128(small) {
        return r;
    }
    let big: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    bareiss_big(big)
}

fn bareiss_i128(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        let piv = a[r][c];
        for i in r + 1..nrows {
            let lead = a[i][c];
            for j in c..ncols {
                let v = a[i][j].checked_mul(piv)?.checked_sub(lead.checked_mul(a[r][j])?)?;
                a[i][j] = v / prev;
            }
        }
        prev = piv;
        r += 1;
    }
    Some(r)
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..nrows {
            let lead = a[i][c].clone();
            for j in c..ncols {
                let v = &a[i][j] * &piv - &lead * &a[r][j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero());
                a[i][j] = q;
            }
        }
        prev = piv;
        r += 1;
    }
    r
}

/// Basis of the kernel of the map whose columns are `m.cols`, written in
/// column coordinates.
pub fn kernel_basis<F: Field>(f: &F, m: &SparseMatrix) -> Vec<Vec<F::Elem>> {
    let ncols = m.ncols();
    let mut a = vec![vec![f.zero(); ncols]; m.nrows];
    for (c, col) in m.cols.iter().enumerate() {
        for &(r, v) in col {
            a[r][c] = f.add(&a[r][c], &f.from_i64(v));
        }
    }
    let pivots = echelonize(f, &mut a);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (row, &p) in a.iter().zip(&pivots) {
            if !f.is_zero(&row[free]) {
                v[p] = f.sub(&f.zero(), &row[free]);
            }
        }
        basis.push(v);
    }
    basis
}

/// Incrementally maintained echelon basis of a subspace.
#[derive(Clone, Debug)]
pub struct Span<F: Field> {
    f: F,
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> Span<F> {
    pub fn new(f: F) -> Self {
        Span { f, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
        let f = &self.f;
        for (p, row) in &self.rows {
            if f.is_zero(&v[*p]) {
                continue;
            }
            let factor = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| self.f.is_zero(x))
    }

    /// Adds `v`; returns false if it already lay in the span.
    pub fn insert(&mut self, v: Vec<F::Elem>) -> bool {
        let mut v = self.reduce(v);
        let f = &self.f;
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else { return false };
        let inv = f.inv(&v[p]);
        for x in v.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for (_, row) in self.rows.iter_mut() {
            if f.is_zero(&row[p]) {
                continue;
            }
            let factor = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}
