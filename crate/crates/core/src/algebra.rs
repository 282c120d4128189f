//! Skew-commutative algebras presented by degree-one generators indexed by
//! labels `1..=n`, with linear relations in degree one and quadratic relations.
//!
//! Every family except `m0` is handled the same way: choose a basis of the
//! degree-one space `V_1`, rewrite each generator in it, and realize the
//! degree-`i` piece as `Λ^i(V_1) / R_i` where `R_i` is spanned by the rewritten
//! quadratic relators times all monomials of degree `i - 2`. Quotient
//! coordinates are the non-pivot monomials of the echelon form of `R_i`.
//!
//! `m0` is the subalgebra of the `arnold` algebra generated by
//! `θ_{ij} = w_{ij} - w_{12}`. Its degree-`i` piece is modeled as
//! `Λ^i(θ-span)` modulo the kernel of the product map into the `arnold`
//! quotient, which identifies it with the image.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::exactla::{
    axpy, axpy_entry, kernel_vectors, rank, row_echelon, Echelon, SparseRationalMatrix, SparseVec, Subspace,
};
use crate::rational::{int, Rational};
use crate::symcomb::{binomial, Permutation};
use crate::Error;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Real points of the compactified moduli space of `n`-pointed genus-zero curves.
    Mbar,
    /// Configuration space of `n` points in the plane.
    Arnold,
    /// The `θ` subalgebra of `arnold` (moduli of `n + 1` points).
    M0,
    /// Pure virtual braid group.
    Pvb,
    /// Pure flat braid group.
    Pfb,
    /// Pure string motions.
    Psigma,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::Mbar, Family::Arnold, Family::M0, Family::Pvb, Family::Pfb, Family::Psigma];

    pub fn name(self) -> &'static str {
        match self {
            Family::Mbar => "mbar",
            Family::Arnold => "arnold",
            Family::M0 => "m0",
            Family::Pvb => "pvb",
            Family::Pfb => "pfb",
            Family::Psigma => "psigma",
        }
    }

    pub fn scheme(self) -> GeneratorScheme {
        match self {
            Family::Mbar => GeneratorScheme { arity: 4, symmetry: Symmetry::Antisymmetric },
            Family::Arnold | Family::M0 => GeneratorScheme { arity: 2, symmetry: Symmetry::Symmetric },
            Family::Pfb => GeneratorScheme { arity: 2, symmetry: Symmetry::Antisymmetric },
            Family::Pvb | Family::Psigma => GeneratorScheme { arity: 2, symmetry: Symmetry::None },
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Antisymmetric,
    Symmetric,
    None,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GeneratorScheme {
    pub arity: usize,
    pub symmetry: Symmetry,
}

/// Canonical index tuple of `w_{indices}` and its sign, or `None` when it vanishes.
///
/// Repeated indices give zero. For `m0` the indices name `θ_{ij}` and
/// `θ_{12}` is zero.
pub fn normalize_generator(family: Family, indices: &[usize]) -> Result<Option<(Vec<usize>, i64)>, Error> {
    let scheme = family.scheme();
    if indices.len() != scheme.arity {
        return Err(Error::ArityMismatch { expected: scheme.arity, found: indices.len() });
    }
    let distinct: BTreeSet<_> = indices.iter().collect();
    if distinct.len() != indices.len() {
        return Ok(None);
    }
    let normalized = match scheme.symmetry {
        Symmetry::None => (indices.to_vec(), 1),
        Symmetry::Symmetric => {
            let mut v = indices.to_vec();
            v.sort_unstable();
            (v, 1)
        }
        Symmetry::Antisymmetric => sort_with_sign(indices).expect("indices are distinct"),
    };
    if family == Family::M0 && normalized.0 == [1, 2] {
        return Ok(None);
    }
    Ok(Some(normalized))
}

/// Sorts a sequence, returning the parity sign of the sorting permutation,
/// or `None` if an entry repeats.
pub fn sort_with_sign<T: Ord + Clone>(seq: &[T]) -> Option<(Vec<T>, i64)> {
    let mut v = seq.to_vec();
    let mut sign = 1;
    // insertion sort counting transpositions; sequences here are short
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// All ordered `k`-tuples of distinct labels from `1..=n`.
fn distinct_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in 1..=n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(n, k, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(n, k, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
    }
    out
}

/// All increasing `k`-subsets of `1..=n`, lexicographic.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    MonomialSpace::new(n, k).iter().map(|m| m.into_iter().map(|x| x + 1).collect()).collect()
}

/// A linear combination of ordered generator products, in raw index form.
type RawQuadratic = Vec<(i64, Vec<usize>, Vec<usize>)>;
type RawLinear = Vec<(i64, Vec<usize>)>;

fn raw_linear_relators(family: Family, n: usize) -> Vec<RawLinear> {
    match family {
        Family::Mbar => distinct_tuples(n, 5)
            .into_iter()
            .map(|t| {
                let (i, j, k, l, m) = (t[0], t[1], t[2], t[3], t[4]);
                vec![
                    (1, vec![i, j, k, l]),
                    (1, vec![j, k, l, m]),
                    (1, vec![k, l, m, i]),
                    (1, vec![l, m, i, j]),
                    (1, vec![m, i, j, k]),
                ]
            })
            .collect(),
        _ => Vec::new(),
    }
}

fn raw_quadratic_relators(family: Family, n: usize) -> Vec<RawQuadratic> {
    let mut out = Vec::new();
    match family {
        Family::Mbar => {
            for t in distinct_tuples(n, 5) {
                let (i, j, k, l, m) = (t[0], t[1], t[2], t[3], t[4]);
                out.push(vec![(1, vec![i, j, k, l], vec![i, j, k, m])]);
            }
        }
        Family::Arnold => {
            for t in distinct_tuples(n, 3) {
                let (i, j, k) = (t[0], t[1], t[2]);
                out.push(vec![(1, vec![i, j], vec![j, k]), (1, vec![j, k], vec![k, i]), (1, vec![k, i], vec![i, j])]);
            }
        }
        Family::Pvb => {
            for t in distinct_tuples(n, 2) {
                out.push(vec![(1, vec![t[0], t[1]], vec![t[1], t[0]])]);
            }
            for t in distinct_tuples(n, 3) {
                let (i, j, k) = (t[0], t[1], t[2]);
                out.push(vec![(1, vec![i, j], vec![i, k]), (-1, vec![i, j], vec![j, k]), (1, vec![i, k], vec![k, j])]);
                out.push(vec![(1, vec![i, k], vec![j, k]), (-1, vec![i, j], vec![j, k]), (1, vec![j, i], vec![i, k])]);
            }
        }
        Family::Pfb => {
            for t in distinct_tuples(n, 3) {
                let (i, j, k) = (t[0], t[1], t[2]);
                out.push(vec![(1, vec![i, j], vec![i, k]), (-1, vec![i, j], vec![j, k])]);
                if i < j && j < k {
                    out.push(vec![(1, vec![i, k], vec![j, k]), (-1, vec![i, j], vec![j, k])]);
                }
            }
        }
        Family::Psigma => {
            for t in distinct_tuples(n, 2) {
                out.push(vec![(1, vec![t[0], t[1]], vec![t[1], t[0]])]);
            }
            for t in distinct_tuples(n, 3) {
                let (i, j, k) = (t[0], t[1], t[2]);
                out.push(vec![(1, vec![k, j], vec![j, i]), (-1, vec![k, j], vec![k, i]), (1, vec![i, j], vec![k, i])]);
            }
        }
        Family::M0 => {}
    }
    out
}

/// Scales so the first coefficient is 1; used to deduplicate relators.
fn monic<K: Ord + Clone>(v: BTreeMap<K, Rational>) -> Option<Vec<(K, Rational)>> {
    let lead = v.values().next()?.clone();
    Some(v.into_iter().map(|(k, c)| (k, c / &lead)).collect())
}

/// A fully instantiated presentation.
#[derive(Debug)]
pub struct Presentation {
    pub family: Family,
    pub n: usize,
    pub scheme: GeneratorScheme,
    /// Canonical index tuples in lexicographic order.
    pub generators: Vec<Vec<usize>>,
    gen_index: HashMap<Vec<usize>, usize>,
    /// Degree-one relators over generator positions, deduplicated up to scale.
    pub linear_relators: Vec<SparseVec>,
    /// Quadratic relators over generator pairs `(a, b)`, `a < b`, deduplicated up to scale.
    pub quadratic_relators: Vec<BTreeMap<(usize, usize), Rational>>,
    pub ambient: Option<Arc<Presentation>>,
}

impl Presentation {
    fn build(family: Family, n: usize) -> Self {
        let scheme = family.scheme();
        let generators: Vec<Vec<usize>> = match (family, scheme.symmetry) {
            (Family::M0, _) => subsets(n, 2).into_iter().filter(|s| s[..] != [1, 2]).collect(),
            (_, Symmetry::None) => {
                let mut t = distinct_tuples(n, scheme.arity);
                t.sort();
                t
            }
            _ => subsets(n, scheme.arity),
        };
        let gen_index = generators.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        let mut p = Presentation {
            family,
            n,
            scheme,
            generators,
            gen_index,
            linear_relators: Vec::new(),
            quadratic_relators: Vec::new(),
            ambient: (family == Family::M0).then(|| presentation(Family::Arnold, n)),
        };
        let mut seen = BTreeSet::new();
        for rel in raw_linear_relators(family, n) {
            let mut v = SparseVec::new();
            for (c, idx) in rel {
                if let Some((g, s)) = p.generator_term(&idx) {
                    axpy_entry(&mut v, g, int(c * s));
                }
            }
            if let Some(m) = monic(v) {
                if seen.insert(m.clone()) {
                    p.linear_relators.push(m.into_iter().collect());
                }
            }
        }
        let mut seen = BTreeSet::new();
        for rel in raw_quadratic_relators(family, n) {
            let mut v: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
            for (c, a, b) in rel {
                let (Some((ga, sa)), Some((gb, sb))) = (p.generator_term(&a), p.generator_term(&b)) else {
                    continue;
                };
                if ga == gb {
                    continue;
                }
                let (key, sign) = if ga < gb { ((ga, gb), 1) } else { ((gb, ga), -1) };
                let e = v.entry(key).or_insert_with(Rational::zero);
                *e += int(c * sa * sb * sign);
            }
            v.retain(|_, c| !c.is_zero());
            if let Some(m) = monic(v) {
                if seen.insert(m.clone()) {
                    p.quadratic_relators.push(m.into_iter().collect());
                }
            }
        }
        p
    }

    /// Position of the canonical generator for `indices`, with sign.
    pub fn generator_term(&self, indices: &[usize]) -> Option<(usize, i64)> {
        let (canon, sign) = normalize_generator(self.family, indices).ok()??;
        self.gen_index.get(&canon).map(|&g| (g, sign))
    }

    pub fn generator_position(&self, canonical: &[usize]) -> Option<usize> {
        self.gen_index.get(canonical).copied()
    }
}

type Memo<K, V> = Mutex<HashMap<K, Arc<OnceLock<Arc<V>>>>>;

fn memoized<K: std::hash::Hash + Eq + Clone, V>(
    memo: &'static OnceLock<Memo<K, V>>,
    key: K,
    build: impl FnOnce() -> V,
) -> Arc<V> {
    let cell = {
        let mut map = memo.get_or_init(|| Mutex::new(HashMap::new())).lock();
        map.entry(key).or_default().clone()
    };
    cell.get_or_init(|| Arc::new(build())).clone()
}

pub fn presentation(family: Family, n: usize) -> Arc<Presentation> {
    static MEMO: OnceLock<Memo<(Family, usize), Presentation>> = OnceLock::new();
    memoized(&MEMO, (family, n), || Presentation::build(family, n))
}

/// A chosen basis of the degree-one space and the rewriting of generators into it.
#[derive(Debug)]
pub struct DegreeOne {
    pub family: Family,
    pub n: usize,
    basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl DegreeOne {
    pub fn new(family: Family, n: usize) -> Self {
        let basis: Vec<Vec<usize>> = match family {
            Family::Mbar => subsets(n, 4).into_iter().filter(|s| s[0] == 1).collect(),
            _ => presentation(family, n).generators.clone(),
        };
        let index = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        DegreeOne { family, n, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    /// The generator `w_{indices}` (for `m0`, `θ_{indices}`) in basis coordinates.
    pub fn express(&self, indices: &[usize]) -> Result<SparseVec, Error> {
        for &x in indices {
            if x == 0 || x > self.n {
                return Err(Error::LabelOutOfRange { label: x, n: self.n });
            }
        }
        let mut out = SparseVec::new();
        let Some((canon, sign)) = normalize_generator(self.family, indices)? else {
            return Ok(out);
        };
        if let Some(&b) = self.index.get(&canon) {
            out.insert(b, int(sign));
            return Ok(out);
        }
        debug_assert_eq!(self.family, Family::Mbar);
        // w_{ijkl} = w_{1jkl} - w_{1kli} + w_{1lij} - w_{1ijk} for 1 not in {i,j,k,l}
        let (i, j, k, l) = (canon[0], canon[1], canon[2], canon[3]);
        for (c, t) in [(1, [1, j, k, l]), (-1, [1, k, l, i]), (1, [1, l, i, j]), (-1, [1, i, j, k])] {
            let (tc, ts) = normalize_generator(self.family, &t)?.expect("distinct indices");
            axpy_entry(&mut out, self.index[&tc], int(sign * c * ts));
        }
        Ok(out)
    }

    /// Every canonical generator with its expression in the basis.
    pub fn rewrite_table(&self) -> Vec<(Vec<usize>, SparseVec)> {
        presentation(self.family, self.n)
            .generators
            .iter()
            .map(|g| (g.clone(), self.express(g).expect("canonical generator")))
            .collect()
    }

    /// Images of the basis under the map induced by relabeling with `f`
    /// (labels of `self` to labels of `target`).
    pub fn relabel_images(&self, target: &DegreeOne, f: &dyn Fn(usize) -> usize) -> Vec<SparseVec> {
        self.basis
            .iter()
            .map(|b| {
                let moved: Vec<usize> = b.iter().map(|&x| f(x)).collect();
                let mut v = target.express(&moved).expect("relabeling stays in range");
                if self.family == Family::M0 {
                    // θ_{ij} = w_{ij} - w_{12} goes to θ_{f(i)f(j)} - θ_{f(1)f(2)}
                    let base = target.express(&[f(1), f(2)]).expect("relabeling stays in range");
                    axpy(&mut v, &int(-1), &base);
                }
                v
            })
            .collect()
    }
}

pub fn degree_one_space(family: Family, n: usize) -> Arc<DegreeOne> {
    static MEMO: OnceLock<Memo<(Family, usize), DegreeOne>> = OnceLock::new();
    memoized(&MEMO, (family, n), || DegreeOne::new(family, n))
}

/// Strictly increasing `k`-subsets of `0..d`, ranked lexicographically.
#[derive(Clone, Debug)]
pub struct MonomialSpace {
    d: usize,
    k: usize,
    binom: Vec<Vec<usize>>,
}

impl MonomialSpace {
    pub fn new(d: usize, k: usize) -> Self {
        let mut binom = vec![vec![0usize; k + 2]; d + 2];
        for (a, row) in binom.iter_mut().enumerate() {
            row[0] = 1;
            for b in 1..=(k + 1).min(a) {
                row[b] = 0;
            }
            let _ = a;
        }
        for a in 1..=d + 1 {
            for b in 1..=k + 1 {
                binom[a][b] = binom[a - 1][b - 1] + binom[a - 1][b];
            }
        }
        MonomialSpace { d, k, binom }
    }

    fn c(&self, a: usize, b: usize) -> usize {
        if b > a {
            0
        } else {
            self.binom[a][b]
        }
    }

    pub fn len(&self) -> usize {
        self.c(self.d, self.k)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rank(&self, m: &[usize]) -> usize {
        debug_assert_eq!(m.len(), self.k);
        let mut r = self.len() - 1;
        for (j, &c) in m.iter().enumerate() {
            r -= self.c(self.d - 1 - c, self.k - j);
        }
        r
    }

    pub fn unrank(&self, mut r: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.k);
        let mut x = 0;
        for j in 0..self.k {
            loop {
                let count = self.c(self.d - 1 - x, self.k - j - 1);
                if r < count {
                    out.push(x);
                    x += 1;
                    break;
                }
                r -= count;
                x += 1;
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len()).map(|r| self.unrank(r))
    }
}

/// `x_{m_1} ... x_{m_k}` rearranged into increasing order, with sign.
fn wedge_monomials(parts: &[&[usize]]) -> Option<(Vec<usize>, i64)> {
    let seq: Vec<usize> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    sort_with_sign(&seq)
}

/// `v_1 ∧ ... ∧ v_k` for degree-one vectors, as `monomial -> coefficient`.
pub fn wedge_degree_one(factors: &[&SparseVec]) -> BTreeMap<Vec<usize>, Rational> {
    let mut terms: BTreeMap<Vec<usize>, Rational> = BTreeMap::from([(Vec::new(), Rational::one())]);
    for f in factors {
        let mut next: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (mono, c) in &terms {
            for (&b, x) in f.iter() {
                if mono.binary_search(&b).is_ok() {
                    continue;
                }
                let greater = mono.iter().filter(|&&y| y > b).count();
                let mut m = mono.clone();
                let pos = m.partition_point(|&y| y < b);
                m.insert(pos, b);
                let mut coef = c * x;
                if greater % 2 == 1 {
                    coef = -coef;
                }
                let e = next.entry(m).or_insert_with(Rational::zero);
                *e += coef;
            }
        }
        next.retain(|_, c| !c.is_zero());
        terms = next;
    }
    terms
}

/// Serializable summary of a graded piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedBasis {
    pub family: Family,
    pub n: usize,
    pub degree: usize,
    pub dimension: usize,
    /// Each basis monomial as its list of generator index tuples.
    pub basis_monomials: Vec<Vec<Vec<usize>>>,
    pub relation_space_dim: usize,
}

/// The degree-`i` piece `Λ^i(V_1) / R_i` with a monomial transversal.
#[derive(Debug)]
pub struct GradedPiece {
    pub family: Family,
    pub n: usize,
    pub degree: usize,
    deg1: Arc<DegreeOne>,
    space: MonomialSpace,
    relations: Echelon,
    transversal: Vec<usize>,
    position: HashMap<usize, usize>,
}

impl GradedPiece {
    /// Memoized construction.
    pub fn get(family: Family, n: usize, degree: usize) -> Arc<GradedPiece> {
        static MEMO: OnceLock<Memo<(Family, usize, usize), GradedPiece>> = OnceLock::new();
        memoized(&MEMO, (family, n, degree), || GradedPiece::build(family, n, degree))
    }

    fn build(family: Family, n: usize, degree: usize) -> Self {
        let deg1 = degree_one_space(family, n);
        let space = MonomialSpace::new(deg1.dim(), degree);
        let relations = if family == Family::M0 {
            m0_kernel(&deg1, &space, n, degree)
        } else {
            quadratic_ideal(family, &deg1, &space, n, degree)
        };
        let transversal = relations.free_columns();
        let position = transversal.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        GradedPiece { family, n, degree, deg1, space, relations, transversal, position }
    }

    pub fn dim(&self) -> usize {
        self.transversal.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.len()
    }

    pub fn degree_one(&self) -> &DegreeOne {
        &self.deg1
    }

    pub fn monomials(&self) -> &MonomialSpace {
        &self.space
    }

    pub fn relations(&self) -> &Echelon {
        &self.relations
    }

    /// Coordinates (in `Λ^i`) of the basis monomials of the quotient.
    pub fn transversal(&self) -> &[usize] {
        &self.transversal
    }

    pub fn monomial_indices(&self, coord: usize) -> Vec<Vec<usize>> {
        self.space.unrank(coord).into_iter().map(|b| self.deg1.basis()[b].clone()).collect()
    }

    /// Normal form of a `Λ^i` vector, in quotient coordinates.
    pub fn to_quotient(&self, v: &SparseVec) -> SparseVec {
        let r = self.relations.reduce(v);
        r.into_iter().map(|(c, x)| (self.position[&c], x)).collect()
    }

    /// Quotient coordinates back to `Λ^i` coordinates on the transversal.
    pub fn lift(&self, q: &SparseVec) -> SparseVec {
        q.iter().map(|(&i, x)| (self.transversal[i], x.clone())).collect()
    }

    fn wedge_to_coords(&self, factors: &[&SparseVec]) -> SparseVec {
        wedge_degree_one(factors).into_iter().map(|(m, c)| (self.space.rank(&m), c)).collect()
    }

    /// Image of the monomial at `coord` under a degree-one map given by basis images.
    fn map_monomial(&self, coord: usize, images: &[SparseVec], target: &GradedPiece) -> SparseVec {
        let mono = self.space.unrank(coord);
        let factors: Vec<&SparseVec> = mono.iter().map(|&b| &images[b]).collect();
        target.wedge_to_coords(&factors)
    }

    fn permutation_images(&self, p: &Permutation) -> Result<Vec<SparseVec>, Error> {
        if p.degree() != self.n {
            return Err(Error::SizeMismatch { left: p.degree(), right: self.n });
        }
        Ok(self.deg1.relabel_images(&self.deg1, &|x| p.apply(x)))
    }

    /// Action of `p` on `Λ^i(V_1)` coordinates.
    pub fn action_matrix(&self, p: &Permutation) -> Result<SparseRationalMatrix, Error> {
        let images = self.permutation_images(p)?;
        let columns = (0..self.ambient_dim()).map(|c| self.map_monomial(c, &images, self)).collect();
        SparseRationalMatrix::from_columns(self.ambient_dim(), columns)
    }

    /// Action of `p` on the quotient, in quotient coordinates.
    pub fn quotient_action(&self, p: &Permutation) -> Result<SparseRationalMatrix, Error> {
        let images = self.permutation_images(p)?;
        let columns = self
            .transversal
            .iter()
            .map(|&c| self.to_quotient(&self.map_monomial(c, &images, self)))
            .collect();
        SparseRationalMatrix::from_columns(self.dim(), columns)
    }

    /// Trace of `p` on the quotient, computed directly from the transversal.
    pub fn quotient_trace(&self, p: &Permutation) -> Result<Rational, Error> {
        let images = self.permutation_images(p)?;
        let mut t = Rational::zero();
        for (i, &c) in self.transversal.iter().enumerate() {
            if let Some(x) = self.to_quotient(&self.map_monomial(c, &images, self)).get(&i) {
                t += x;
            }
        }
        Ok(t)
    }

    /// Pullback along the injection `f: [m] -> [n]`, in quotient coordinates.
    pub fn pullback_to(&self, f: &[usize], target: &GradedPiece) -> Result<SparseRationalMatrix, Error> {
        check_injection(f, target.n)?;
        if f.len() != self.n || self.family != target.family || self.degree != target.degree {
            return Err(Error::SizeMismatch { left: f.len(), right: self.n });
        }
        let images = self.deg1.relabel_images(&target.deg1, &|x| f[x - 1]);
        let columns = self
            .transversal
            .iter()
            .map(|&c| target.to_quotient(&self.map_monomial(c, &images, target)))
            .collect();
        SparseRationalMatrix::from_columns(target.dim(), columns)
    }

    pub fn graded_basis(&self) -> GradedBasis {
        GradedBasis {
            family: self.family,
            n: self.n,
            degree: self.degree,
            dimension: self.dim(),
            basis_monomials: self.transversal.iter().map(|&c| self.monomial_indices(c)).collect(),
            relation_space_dim: self.relations.rank(),
        }
    }
}

fn check_injection(f: &[usize], n: usize) -> Result<(), Error> {
    let mut seen = BTreeSet::new();
    for &x in f {
        if x == 0 || x > n {
            return Err(Error::LabelOutOfRange { label: x, n });
        }
        if !seen.insert(x) {
            return Err(Error::NotInjective(f.to_vec()));
        }
    }
    Ok(())
}

/// Quadratic relators rewritten in `Λ^2(V_1)` as sparse monomial maps.
fn rewritten_quadratics(family: Family, deg1: &DegreeOne, n: usize) -> Vec<BTreeMap<Vec<usize>, Rational>> {
    let pres = presentation(family, n);
    let rewritten: Vec<SparseVec> =
        pres.generators.iter().map(|g| deg1.express(g).expect("canonical generator")).collect();
    let mut out = Vec::new();
    for rel in &pres.quadratic_relators {
        let mut acc: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (&(a, b), c) in rel {
            for (m, x) in wedge_degree_one(&[&rewritten[a], &rewritten[b]]) {
                let e = acc.entry(m).or_insert_with(Rational::zero);
                *e += c * x;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        if !acc.is_empty() {
            out.push(acc);
        }
    }
    out
}

/// `R_i`: rewritten quadratic relators times every monomial of degree `i - 2`.
fn quadratic_ideal(family: Family, deg1: &DegreeOne, space: &MonomialSpace, n: usize, degree: usize) -> Echelon {
    let mut rel = Echelon::new(space.len());
    if degree < 2 || space.is_empty() {
        return rel;
    }
    let quadratics = rewritten_quadratics(family, deg1, n);
    let lower = MonomialSpace::new(deg1.dim(), degree - 2);
    for m in lower.iter() {
        for q in &quadratics {
            let mut v = SparseVec::new();
            for (pair, c) in q {
                if let Some((mono, s)) = wedge_monomials(&[pair, &m]) {
                    axpy_entry(&mut v, space.rank(&mono), c * int(s));
                }
            }
            rel.insert(v);
            if rel.is_full() {
                return rel;
            }
        }
    }
    rel
}

/// Degree-one images `θ_{ab} = w_{ab} - w_{12}` inside the `arnold` degree-one space.
fn theta_embedding(theta: &DegreeOne, arnold: &DegreeOne) -> Vec<SparseVec> {
    theta
        .basis()
        .iter()
        .map(|t| {
            let mut v = arnold.express(t).expect("label in range");
            axpy(&mut v, &int(-1), &arnold.express(&[1, 2]).expect("n >= 2 when θ exists"));
            v
        })
        .collect()
}

/// Columns: images of `θ`-monomials in `arnold` quotient coordinates.
fn m0_product_map(theta: &DegreeOne, space: &MonomialSpace, n: usize, degree: usize) -> (Arc<GradedPiece>, SparseRationalMatrix) {
    let arnold = GradedPiece::get(Family::Arnold, n, degree);
    let emb = theta_embedding(theta, &arnold.deg1);
    let columns = space
        .iter()
        .map(|m| {
            let factors: Vec<&SparseVec> = m.iter().map(|&b| &emb[b]).collect();
            arnold.to_quotient(&arnold.wedge_to_coords(&factors))
        })
        .collect();
    let dim = arnold.dim();
    (arnold, SparseRationalMatrix::from_columns(dim, columns).expect("quotient coordinates in range"))
}

fn m0_kernel(theta: &DegreeOne, space: &MonomialSpace, n: usize, degree: usize) -> Echelon {
    let (_, map) = m0_product_map(theta, space, n, degree);
    let e = row_echelon(&map);
    Subspace::span(space.len(), kernel_vectors(&e)).into_echelon()
}

/// For `m0`: the image of `Λ^i(θ-span)` inside the `arnold` quotient.
pub fn m0_image(n: usize, degree: usize) -> (Arc<GradedPiece>, Subspace) {
    let theta = degree_one_space(Family::M0, n);
    let space = MonomialSpace::new(theta.dim(), degree);
    let (arnold, map) = m0_product_map(&theta, &space, n, degree);
    let dim = arnold.dim();
    (arnold, Subspace::span(dim, map.columns().iter().cloned()))
}

pub fn graded_basis(family: Family, n: usize, degree: usize) -> GradedBasis {
    GradedPiece::get(family, n, degree).graded_basis()
}

/// `R_i` inside `Λ^i(V_1)`; not defined for `m0`, whose pieces come from `arnold`.
pub fn relation_space(family: Family, n: usize, degree: usize) -> Result<Subspace, Error> {
    if family == Family::M0 {
        return Err(Error::Unsupported("m0 has no presentation of its own; its pieces are images in arnold".into()));
    }
    Ok(Subspace::from_echelon(GradedPiece::get(family, n, degree).relations.clone()))
}

pub fn action_matrix(family: Family, n: usize, degree: usize, p: &Permutation) -> Result<SparseRationalMatrix, Error> {
    GradedPiece::get(family, n, degree).action_matrix(p)
}

/// Pullback `H^i(m) -> H^i(n)` along the injection `f` (images of `1..=m`).
pub fn pullback_matrix(family: Family, f: &[usize], n: usize, degree: usize) -> Result<SparseRationalMatrix, Error> {
    check_injection(f, n)?;
    let source = GradedPiece::get(family, f.len(), degree);
    let target = GradedPiece::get(family, n, degree);
    source.pullback_to(f, &target)
}

/// Independent dimension count: every generator is a raw symbol, all linear
/// and quadratic relations are imposed in degree `i` at once, and the rank is
/// taken by fraction-free elimination.
pub fn brute_force_dimension(family: Family, n: usize, degree: usize) -> Result<usize, Error> {
    if n > 6 || degree > 2 {
        let raw = raw_symbols(family, n).len();
        return Err(Error::SizeGuard {
            what: format!("brute-force dimension for {family} n={n} i={degree} (limit n <= 6, i <= 2)"),
            ambient_dim: binomial(raw as i64, degree as i64).try_into().unwrap_or(u128::MAX),
            limit: binomial(raw.min(30) as i64, 2).try_into().unwrap_or(u128::MAX),
        });
    }
    let base = if family == Family::M0 { Family::Arnold } else { family };
    let symbols = raw_symbols(base, n);
    let index: HashMap<&[usize], usize> = symbols.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let space = MonomialSpace::new(symbols.len(), degree);
    let mut rows: Vec<SparseVec> = Vec::new();

    // degree-one relations, in raw symbols
    let mut linear: Vec<Vec<(i64, usize)>> = Vec::new();
    match base.scheme().symmetry {
        Symmetry::Symmetric | Symmetry::Antisymmetric if base.scheme().arity == 2 => {
            let s = if base.scheme().symmetry == Symmetry::Symmetric { -1 } else { 1 };
            for t in distinct_tuples(n, 2) {
                linear.push(vec![(1, index[&[t[0], t[1]][..]]), (s, index[&[t[1], t[0]][..]])]);
            }
        }
        _ => {}
    }
    let raw_term = |idx: &[usize]| -> Option<(i64, usize)> {
        if base == Family::Mbar {
            let (canon, sign) = sort_with_sign(idx)?;
            Some((sign, index[canon.as_slice()]))
        } else {
            Some((1, index[idx]))
        }
    };
    for rel in raw_linear_relators(base, n) {
        linear.push(rel.iter().filter_map(|(c, idx)| raw_term(idx).map(|(s, g)| (c * s, g))).collect());
    }
    let quadratic: Vec<Vec<(i64, usize, usize)>> = raw_quadratic_relators(base, n)
        .into_iter()
        .map(|rel| {
            rel.iter()
                .filter_map(|(c, a, b)| {
                    let (sa, ga) = raw_term(a)?;
                    let (sb, gb) = raw_term(b)?;
                    Some((c * sa * sb, ga, gb))
                })
                .collect()
        })
        .collect();

    let push_product = |rows: &mut Vec<SparseVec>, terms: &[(i64, Vec<usize>)], tail: &[usize]| {
        let mut v = SparseVec::new();
        for (c, head) in terms {
            if let Some((mono, s)) = wedge_monomials(&[head, tail]) {
                axpy_entry(&mut v, space.rank(&mono), int(c * s));
            }
        }
        if !v.is_empty() {
            rows.push(v);
        }
    };
    if degree >= 1 {
        for m in MonomialSpace::new(symbols.len(), degree - 1).iter() {
            for rel in &linear {
                let terms: Vec<(i64, Vec<usize>)> = rel.iter().map(|&(c, g)| (c, vec![g])).collect();
                push_product(&mut rows, &terms, &m);
            }
        }
    }
    if degree >= 2 {
        for m in MonomialSpace::new(symbols.len(), degree - 2).iter() {
            for rel in &quadratic {
                let terms: Vec<(i64, Vec<usize>)> = rel.iter().map(|&(c, a, b)| (c, vec![a, b])).collect();
                push_product(&mut rows, &terms, &m);
            }
        }
    }
    let relation_rank = rank(&SparseRationalMatrix::from_columns(space.len(), rows.clone())?.transpose());
    if base == family {
        return Ok(space.len() - relation_rank);
    }

    // m0: rank of the θ-monomial images modulo the relations
    let theta_pairs: Vec<Vec<usize>> = subsets(n, 2).into_iter().filter(|s| s[..] != [1, 2]).collect();
    let theta_space = MonomialSpace::new(theta_pairs.len(), degree);
    let theta_vecs: Vec<SparseVec> = theta_pairs
        .iter()
        .map(|t| SparseVec::from([(index[t.as_slice()], int(1)), (index[&[1usize, 2][..]], int(-1))]))
        .collect();
    let mut all = rows;
    for m in theta_space.iter() {
        let factors: Vec<&SparseVec> = m.iter().map(|&b| &theta_vecs[b]).collect();
        let v: SparseVec = wedge_degree_one(&factors).into_iter().map(|(mono, c)| (space.rank(&mono), c)).collect();
        if !v.is_empty() {
            all.push(v);
        }
    }
    let total = rank(&SparseRationalMatrix::from_columns(space.len(), all)?.transpose());
    Ok(total - relation_rank)
}

/// Raw generator symbols used by the brute-force count: ordered pairs for the
/// two-index families, sorted 4-subsets for `mbar`.
fn raw_symbols(family: Family, n: usize) -> Vec<Vec<usize>> {
    match family {
        Family::Mbar => subsets(n, 4),
        _ => {
            let mut t = distinct_tuples(n, 2);
            t.sort();
            t
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_roundtrip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!(matches!("cactus".parse::<Family>(), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_generator(Family::Mbar, &[2, 1, 3, 4]).unwrap(), Some((vec![1, 2, 3, 4], -1)));
        assert_eq!(normalize_generator(Family::Mbar, &[1, 1, 2, 3]).unwrap(), None);
        assert_eq!(normalize_generator(Family::Pfb, &[3, 2]).unwrap(), Some((vec![2, 3], -1)));
        assert_eq!(normalize_generator(Family::Arnold, &[3, 2]).unwrap(), Some((vec![2, 3], 1)));
        assert_eq!(normalize_generator(Family::Pvb, &[3, 2]).unwrap(), Some((vec![3, 2], 1)));
        assert_eq!(normalize_generator(Family::M0, &[2, 1]).unwrap(), None);
        assert!(matches!(normalize_generator(Family::Mbar, &[1, 2]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn presentations() {
        let p = presentation(Family::Mbar, 5);
        assert_eq!(p.generators.len(), 5);
        assert!(!p.linear_relators.is_empty());
        assert!(p.linear_relators.iter().all(|r| r.len() == 5));
        let a = presentation(Family::Arnold, 3);
        assert_eq!(a.generators.len(), 3);
        assert_eq!(a.quadratic_relators.len(), 1);
        let v = presentation(Family::Pvb, 2);
        assert_eq!(v.generators.len(), 2);
        assert_eq!(v.quadratic_relators.len(), 1);
        assert_eq!(v.quadratic_relators[0].len(), 1);
        for n in 0..=7 {
            assert_eq!(presentation(Family::Arnold, n).generators.len(), n * n.saturating_sub(1) / 2);
            assert_eq!(presentation(Family::Pvb, n).generators.len(), n * n.saturating_sub(1));
            assert_eq!(presentation(Family::Mbar, n).generators.len(), subsets(n, 4).len());
        }
        assert_eq!(presentation(Family::M0, 4).generators.len(), 5);
        assert!(presentation(Family::M0, 4).ambient.is_some());
    }

    #[test]
    fn degree_one_mbar() {
        assert_eq!(degree_one_space(Family::Mbar, 4).basis(), &[vec![1, 2, 3, 4]]);
        assert_eq!(degree_one_space(Family::Mbar, 6).dim(), 10);
        let d = degree_one_space(Family::Mbar, 5);
        let w = d.express(&[2, 3, 4, 5]).unwrap();
        let pos = |t: &[usize]| d.basis().iter().position(|b| b == t).unwrap();
        let expected = SparseVec::from([
            (pos(&[1, 3, 4, 5]), int(1)),
            (pos(&[1, 2, 4, 5]), int(-1)),
            (pos(&[1, 2, 3, 5]), int(1)),
            (pos(&[1, 2, 3, 4]), int(-1)),
        ]);
        assert_eq!(w, expected);
    }

    #[test]
    fn five_term_relators_vanish() {
        for n in 5..=8 {
            let d = degree_one_space(Family::Mbar, n);
            let table = d.rewrite_table();
            for rel in &presentation(Family::Mbar, n).linear_relators {
                let mut acc = SparseVec::new();
                for (&g, c) in rel {
                    axpy(&mut acc, c, &table[g].1);
                }
                assert!(acc.is_empty(), "n = {n}");
            }
        }
    }

    #[test]
    fn monomial_ranks() {
        let s = MonomialSpace::new(6, 3);
        assert_eq!(s.len(), 20);
        let all: Vec<_> = s.iter().collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        for (r, m) in all.iter().enumerate() {
            assert_eq!(s.rank(m), r);
        }
        assert_eq!(MonomialSpace::new(3, 0).iter().collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(MonomialSpace::new(2, 3).len(), 0);
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(graded_basis(Family::Mbar, 3, 1).dimension, 0);
        assert_eq!(graded_basis(Family::Mbar, 4, 1).dimension, 1);
        assert_eq!(graded_basis(Family::Mbar, 5, 1).dimension, 4);
        assert_eq!(graded_basis(Family::Mbar, 5, 2).dimension, 0);
        assert_eq!(graded_basis(Family::Arnold, 3, 2).dimension, 2);
        assert_eq!(graded_basis(Family::Arnold, 4, 2).dimension, 11);
        assert_eq!(relation_space(Family::Mbar, 6, 1).unwrap().dim(), 0);
        assert!(relation_space(Family::M0, 4, 2).is_err());
        for n in 0..=5 {
            assert_eq!(graded_basis(Family::Mbar, n, 0).dimension, 1);
        }
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_dimension(Family::Mbar, 4, 1).unwrap(), 1);
        assert_eq!(brute_force_dimension(Family::Mbar, 5, 1).unwrap(), 4);
        assert_eq!(brute_force_dimension(Family::Arnold, 4, 2).unwrap(), 11);
        assert!(matches!(brute_force_dimension(Family::Mbar, 9, 2), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn transposition_acts_by_sign_on_mbar4() {
        let m = action_matrix(Family::Mbar, 4, 1, &Permutation::transposition(4, 1, 2)).unwrap();
        assert_eq!(m, SparseRationalMatrix::from_triplets(1, 1, [(0, 0, int(-1))]).unwrap());
    }

    #[test]
    fn pullback_of_circle_class() {
        let m = pullback_matrix(Family::Mbar, &[1, 2, 3, 4], 6, 1).unwrap();
        let target = GradedPiece::get(Family::Mbar, 6, 1);
        let col = m.column(0);
        assert_eq!(col.len(), 1);
        let (&i, x) = col.iter().next().unwrap();
        assert_eq!(x, &int(1));
        assert_eq!(target.monomial_indices(target.transversal()[i]), vec![vec![1, 2, 3, 4]]);
        assert!(matches!(pullback_matrix(Family::Mbar, &[1, 1, 2, 3], 6, 1), Err(Error::NotInjective(_))));
    }
}
