//! Exact sparse linear algebra over the rationals.
//!
//! Vectors are sparse maps `index -> nonzero rational`. Subspaces are kept as
//! row echelon forms whose pivots are the leading (smallest) column of each
//! row, normalized to 1. Reducing a vector against an echelon form eliminates
//! pivot columns in increasing order, so the remainder is a canonical
//! representative modulo the subspace and its support avoids pivot columns.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{int, parse_pq, to_pq, Rational};
use crate::Error;

pub type SparseVec = BTreeMap<usize, Rational>;

/// `v[index] += c`, dropping the entry if it cancels.
pub fn axpy_entry(v: &mut SparseVec, index: usize, c: Rational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match v.entry(index) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// `v += c * w`.
pub fn axpy(v: &mut SparseVec, c: &Rational, w: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (&i, a) in w {
        axpy_entry(v, i, c * a);
    }
}

pub fn dense_to_sparse(v: &[Rational]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Column-major sparse matrix with exact entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseRationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseRationalMatrix { rows, cols, columns: vec![SparseVec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.columns[i].insert(i, Rational::one());
        }
        m
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Result<Self, Error> {
        for col in &columns {
            if let Some((&r, _)) = col.last_key_value() {
                if r >= rows {
                    return Err(Error::DimensionMismatch { expected: rows, found: r + 1 });
                }
            }
        }
        let mut columns = columns;
        for col in &mut columns {
            col.retain(|_, v| !v.is_zero());
        }
        Ok(SparseRationalMatrix { rows, cols: columns.len(), columns })
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self, Error> {
        let mut m = Self::zero(rows, cols);
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch { expected: rows.max(cols), found: r.max(c) + 1 });
            }
            axpy_entry(&mut m.columns[c], r, v);
        }
        Ok(m)
    }

    pub fn from_dense_rows(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r, c, v.clone())));
        Self::from_triplets(rows.len(), cols, entries).expect("rectangular input")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.columns[c].get(&r).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    /// Entries in `(row, col, value)` order, sorted by row then column.
    pub fn triplets(&self) -> Vec<(usize, usize, Rational)> {
        let mut out: Vec<_> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, v)| (r, c, v.clone())))
            .collect();
        out.sort_by_key(|&(r, c, _)| (r, c));
        out
    }

    pub fn row_vectors(&self) -> Vec<SparseVec> {
        let mut rows = vec![SparseVec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (&r, v) in col {
                rows[r].insert(c, v.clone());
            }
        }
        rows
    }

    pub fn transpose(&self) -> Self {
        SparseRationalMatrix { rows: self.cols, cols: self.rows, columns: self.row_vectors() }
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&c, a) in v {
            axpy(&mut out, a, &self.columns[c]);
        }
        out
    }

    pub fn mul(&self, other: &SparseRationalMatrix) -> Result<Self, Error> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let columns = other.columns.iter().map(|c| self.mul_vec(c)).collect();
        Ok(SparseRationalMatrix { rows: self.rows, cols: other.cols, columns })
    }

    pub fn sub(&self, other: &SparseRationalMatrix) -> Result<Self, Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        let mut out = self.clone();
        for (c, col) in other.columns.iter().enumerate() {
            axpy(&mut out.columns[c], &int(-1), col);
        }
        Ok(out)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.triplets().into_iter().map(|(r, c, v)| (r, c, to_pq(&v))).collect(),
        }
    }

    pub fn from_json(j: &MatrixJson) -> Result<Self, Error> {
        let entries = j
            .entries
            .iter()
            .map(|(r, c, v)| Ok((*r, *c, parse_pq(v)?)))
            .collect::<Result<Vec<_>, Error>>()?;
        Self::from_triplets(j.rows, j.cols, entries)
    }
}

/// Coordinate triplet form used in cache files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

impl fmt::Display for SparseRationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Incremental row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivot_row: HashMap::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivot(&self, row: usize) -> usize {
        *self.rows[row].keys().next().expect("echelon rows are nonzero")
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    pub fn pivot_columns(&self) -> BTreeSet<usize> {
        self.pivot_row.keys().copied().collect()
    }

    /// Columns that are not pivots, increasing; a coordinate transversal of the quotient.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|c| !self.pivot_row.contains_key(c)).collect()
    }

    /// Eliminates pivot columns from `v`; optionally records `row -> coefficient`
    /// so that `v_in = sum coeff * row + v_out`.
    pub fn reduce_in_place(&self, v: &mut SparseVec, mut record: Option<&mut SparseVec>) {
        let mut cursor = 0;
        loop {
            let next = v
                .range(cursor..)
                .find(|(c, _)| self.pivot_row.contains_key(c))
                .map(|(&c, _)| c);
            let Some(col) = next else { break };
            let coef = v.remove(&col).expect("present");
            let r = self.pivot_row[&col];
            for (&c, a) in self.rows[r].iter().skip(1) {
                axpy_entry(v, c, -(&coef * a));
            }
            if let Some(rec) = record.as_deref_mut() {
                rec.insert(r, coef);
            }
            cursor = col + 1;
        }
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut w = v.clone();
        self.reduce_in_place(&mut w, None);
        w
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coefficients of `v` in the echelon rows, if `v` lies in their span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let mut w = v.clone();
        let mut rec = SparseVec::new();
        self.reduce_in_place(&mut w, Some(&mut rec));
        w.is_empty().then_some(rec)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut w = v;
        w.retain(|_, x| !x.is_zero());
        self.reduce_in_place(&mut w, None);
        self.push_reduced(w)
    }

    /// Adds an already-reduced vector (no pivot columns in its support).
    fn push_reduced(&mut self, mut w: SparseVec) -> bool {
        let Some((&lead, lead_val)) = w.first_key_value() else {
            return false;
        };
        assert!(lead < self.dim, "vector index {lead} outside ambient dimension {}", self.dim);
        if !lead_val.is_one() {
            let inv = lead_val.recip();
            for x in w.values_mut() {
                *x *= &inv;
            }
        }
        self.pivot_row.insert(lead, self.rows.len());
        self.rows.push(w);
        true
    }

    pub fn extend<I: IntoIterator<Item = SparseVec>>(&mut self, vs: I) {
        for v in vs {
            self.insert(v);
        }
    }

    /// Rows as the columns of a `dim x rank` matrix.
    pub fn basis_matrix(&self) -> SparseRationalMatrix {
        SparseRationalMatrix { rows: self.dim, cols: self.rows.len(), columns: self.rows.clone() }
    }
}

/// A subspace of `Q^ambient_dim` with an echelonized basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    echelon: Echelon,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { echelon: Echelon::new(ambient_dim) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let mut e = Echelon::new(ambient_dim);
        for i in 0..ambient_dim {
            e.insert(SparseVec::from([(i, Rational::one())]));
        }
        Subspace { echelon: e }
    }

    pub fn span(ambient_dim: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut e = Echelon::new(ambient_dim);
        e.extend(vectors);
        Subspace { echelon: e }
    }

    pub fn from_echelon(echelon: Echelon) -> Self {
        Subspace { echelon }
    }

    pub fn ambient_dim(&self) -> usize {
        self.echelon.dim
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn into_echelon(self) -> Echelon {
        self.echelon
    }

    pub fn basis(&self) -> SparseRationalMatrix {
        self.echelon.basis_matrix()
    }

    pub fn contains_sparse(&self, v: &SparseVec) -> Result<bool, Error> {
        if let Some((&i, _)) = v.last_key_value() {
            if i >= self.ambient_dim() {
                return Err(Error::DimensionMismatch { expected: self.ambient_dim(), found: i + 1 });
            }
        }
        Ok(self.echelon.contains(v))
    }
}

/// Exact rank by fraction-free elimination over the integers, choosing at each
/// step the sparsest remaining row and, within it, the column shared by the
/// fewest remaining rows (ties broken by index).
pub fn rank(m: &SparseRationalMatrix) -> usize {
    let mut rows: Vec<Option<BTreeMap<usize, BigInt>>> = m
        .row_vectors()
        .into_iter()
        .map(|r| (!r.is_empty()).then(|| primitive_integer_row(&r)))
        .collect();
    let mut col_rows: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for (i, r) in rows.iter().enumerate() {
        if let Some(r) = r {
            for &c in r.keys() {
                col_rows.entry(c).or_default().insert(i);
            }
        }
    }
    let mut rank = 0;
    loop {
        let pick = rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|r| (r.len(), i)))
            .min();
        let Some((_, pr)) = pick else { break };
        let prow = rows[pr].take().expect("picked row is live");
        for c in prow.keys() {
            col_rows.get_mut(c).expect("indexed").remove(&pr);
        }
        let pc = *prow
            .keys()
            .min_by_key(|&&c| (col_rows.get(&c).map_or(0, BTreeSet::len), c))
            .expect("nonempty row");
        rank += 1;
        let pval = prow[&pc].clone();
        let targets: Vec<usize> = col_rows.get(&pc).map(|s| s.iter().copied().collect()).unwrap_or_default();
        for t in targets {
            let mut row = rows[t].take().expect("indexed row is live");
            for c in row.keys() {
                col_rows.get_mut(c).expect("indexed").remove(&t);
            }
            let a = row[&pc].clone();
            for v in row.values_mut() {
                *v *= &pval;
            }
            for (&c, pv) in &prow {
                let e = row.entry(c).or_insert_with(BigInt::zero);
                *e -= &a * pv;
            }
            row.retain(|_, v| !v.is_zero());
            if !row.is_empty() {
                let g = row.values().fold(BigInt::zero(), |g, v| g.gcd(v));
                if !g.is_one() {
                    for v in row.values_mut() {
                        *v /= &g;
                    }
                }
                for &c in row.keys() {
                    col_rows.entry(c).or_default().insert(t);
                }
                rows[t] = Some(row);
            }
        }
    }
    rank
}

fn primitive_integer_row(r: &SparseVec) -> BTreeMap<usize, BigInt> {
    let lcm = r.values().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let mut out: BTreeMap<usize, BigInt> =
        r.iter().map(|(&c, v)| (c, (v * Rational::from_integer(lcm.clone())).to_integer())).collect();
    let g = out.values().fold(BigInt::zero(), |g, v| g.gcd(v));
    if !g.is_one() && !g.is_zero() {
        for v in out.values_mut() {
            *v /= &g;
        }
    }
    out
}

pub fn column_space(m: &SparseRationalMatrix) -> Subspace {
    Subspace::span(m.rows(), m.columns().iter().cloned())
}

pub fn row_echelon(m: &SparseRationalMatrix) -> Echelon {
    let mut e = Echelon::new(m.cols());
    e.extend(m.row_vectors());
    e
}

pub fn nullspace(m: &SparseRationalMatrix) -> Subspace {
    let e = row_echelon(m);
    Subspace::span(m.cols(), kernel_vectors(&e))
}

/// One kernel vector per free column of the row echelon form `e`.
pub fn kernel_vectors(e: &Echelon) -> Vec<SparseVec> {
    let mut by_pivot: Vec<usize> = (0..e.rank()).collect();
    by_pivot.sort_by_key(|&r| std::cmp::Reverse(e.pivot(r)));
    e.free_columns()
        .into_iter()
        .map(|f| {
            let mut x = SparseVec::from([(f, Rational::one())]);
            for &r in &by_pivot {
                let row = &e.rows()[r];
                let p = e.pivot(r);
                let mut s = Rational::zero();
                for (c, a) in row.iter().skip(1) {
                    if let Some(xc) = x.get(c) {
                        s -= a * xc;
                    }
                }
                if !s.is_zero() {
                    x.insert(p, s);
                }
            }
            x
        })
        .collect()
}

pub fn contains(s: &Subspace, v: &[Rational]) -> Result<bool, Error> {
    if v.len() != s.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: s.ambient_dim(), found: v.len() });
    }
    s.contains_sparse(&dense_to_sparse(v))
}

/// The matrix `C` with `A B = B C`, where `B` is the echelon basis of `s`.
pub fn induced_on_subspace(a: &SparseRationalMatrix, s: &Subspace) -> Result<SparseRationalMatrix, Error> {
    if a.rows() != s.ambient_dim() || a.cols() != s.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: s.ambient_dim(), found: a.rows() });
    }
    let e = s.echelon();
    let columns = e
        .rows()
        .iter()
        .enumerate()
        .map(|(j, b)| e.coordinates(&a.mul_vec(b)).ok_or(Error::NotInvariant { column: j }))
        .collect::<Result<Vec<_>, _>>()?;
    SparseRationalMatrix::from_columns(e.rank(), columns)
}

/// Outcome of an exact linear solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    Underdetermined { rank: usize, unknowns: usize },
    Inconsistent,
}

/// Solves `sum_j row[j] x_j = rhs` for each `(row, rhs)`.
pub fn solve(unknowns: usize, equations: impl IntoIterator<Item = (SparseVec, Rational)>) -> Solution {
    let mut e = Echelon::new(unknowns + 1);
    for (mut row, rhs) in equations {
        axpy_entry(&mut row, unknowns, rhs);
        e.insert(row);
        if e.is_pivot(unknowns) {
            return Solution::Inconsistent;
        }
    }
    if e.rank() < unknowns {
        return Solution::Underdetermined { rank: e.rank(), unknowns };
    }
    let mut x = vec![Rational::zero(); unknowns];
    let mut order: Vec<usize> = (0..e.rank()).collect();
    order.sort_by_key(|&r| std::cmp::Reverse(e.pivot(r)));
    for r in order {
        let row = &e.rows()[r];
        let p = e.pivot(r);
        let mut s = row.get(&unknowns).cloned().unwrap_or_else(Rational::zero);
        for (&c, a) in row.iter().skip(1) {
            if c < unknowns {
                s -= a * &x[c];
            }
        }
        x[p] = s;
    }
    Solution::Unique(x)
}

/// A univariate polynomial with ascending rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial(Vec<Rational>);

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial(coeffs)
    }

    /// `prod (t - r)` scaled by `c`.
    pub fn from_roots(roots: &[i64], c: Rational) -> Self {
        let mut coeffs = vec![c];
        for &r in roots {
            let mut next = vec![Rational::zero(); coeffs.len() + 1];
            for (i, a) in coeffs.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * int(r);
            }
            coeffs = next;
        }
        Polynomial::new(coeffs)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let mono = match d {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{d}"),
            };
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The unique polynomial of degree `<= max_deg` through `points`.
pub fn interpolate_polynomial(points: &[(i64, Rational)], max_deg: usize) -> Result<Polynomial, Error> {
    let xs: BTreeSet<i64> = points.iter().map(|p| p.0).collect();
    if xs.len() != points.len() {
        return Err(Error::Parse("interpolation nodes must be distinct".into()));
    }
    let equations = points.iter().map(|(x, y)| {
        let mut row = SparseVec::new();
        let mut pow = Rational::one();
        for d in 0..=max_deg {
            axpy_entry(&mut row, d, pow.clone());
            pow *= int(*x);
        }
        (row, y.clone())
    });
    match solve(max_deg + 1, equations) {
        Solution::Unique(c) => Ok(Polynomial::new(c)),
        Solution::Inconsistent => Err(Error::Infeasible { max_deg }),
        Solution::Underdetermined { rank, unknowns } => Err(Error::Underdetermined { rank, unknowns }),
    }
}
