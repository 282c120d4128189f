//! Partition and symmetric-group combinatorics.
//!
//! Irreducible characters come from the Murnaghan–Nakayama rule on beta-sets
//! and are memoized per `(shape, cycle type)`. Class functions are exact
//! rational maps indexed by cycle types; character polynomials live in the
//! monomial basis `X_1^{e_1} ... X_r^{e_r}` with `deg X_l = l`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::rational::{int, Rational};
use crate::Error;

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, Error> {
        if parts.iter().any(|&p| p == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(parts));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zeros; always succeeds.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    /// Number of parts equal to `l`.
    pub fn multiplicity(&self, l: usize) -> usize {
        self.0.iter().filter(|&&p| p == l).count()
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.first();
        Partition((0..cols).map(|c| self.0.iter().filter(|&&p| p > c).count()).collect())
    }

    /// `z_mu = prod_l l^{m_l} m_l!`, the centralizer order of the class `mu`.
    pub fn centralizer_order(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let m = self.multiplicity(l);
            for k in 1..=m {
                z *= BigInt::from(l) * BigInt::from(k);
            }
            i += m;
        }
        z
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self, Error> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.0
    }
}

// Size first, then reverse lexicographic: (4) < (3,1) < (2,2) < (2,1,1) < (1,1,1,1).
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders as a decreasing integer array, e.g. `[4,1,1,1]`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("not a partition: {s:?}")))?;
        let parts = inner
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("not a partition: {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `n` in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// A permutation of `{1..n}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    /// The transposition swapping `a` and `b` in `S_n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(a - 1, b - 1);
        p
    }

    /// `(1 2), (2 3), ..., (n-1 n)`.
    pub fn adjacent_transpositions(n: usize) -> Vec<Permutation> {
        (1..n).map(|a| Self::transposition(n, a, a + 1)).collect()
    }

    /// Product of consecutive cycles `(1..mu_1)(mu_1+1..)...`, a permutation of cycle type `mu`.
    pub fn representative(mu: &Partition) -> Self {
        let n = mu.size();
        let mut images = vec![0; n];
        let mut start = 0;
        for &l in mu.parts() {
            for j in 0..l {
                images[start + j] = start + (j + 1) % l + 1;
            }
            start += l;
        }
        Permutation(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// Image of the 1-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.0[x - 1]
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "composing permutations of different degree");
        Permutation(other.0.iter().map(|&x| self.apply(x)).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// Extends to `S_m`, `m >= n`, fixing the new points.
    pub fn extend(&self, m: usize) -> Permutation {
        let mut images = self.0.clone();
        images.extend(self.0.len() + 1..=m);
        Permutation(images)
    }

    pub fn cycle_type(&self) -> Partition {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] - 1;
                len += 1;
            }
            lengths.push(len);
        }
        Partition::from_unsorted(lengths)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self, Error> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.0
    }
}

pub fn cycle_type(p: &Permutation) -> Partition {
    p.cycle_type()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Number of permutations of cycle type `mu` in `S_|mu|`.
pub fn class_size(mu: &Partition) -> BigInt {
    factorial(mu.size()) / mu.centralizer_order()
}

type CharMemo = RwLock<HashMap<(Partition, Partition), i64>>;

fn char_memo() -> &'static CharMemo {
    static MEMO: OnceLock<CharMemo> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `chi_lam(mu)` by the Murnaghan–Nakayama rule.
pub fn irreducible_character(lam: &Partition, mu: &Partition) -> Result<i64, Error> {
    if lam.size() != mu.size() {
        return Err(Error::SizeMismatch { left: lam.size(), right: mu.size() });
    }
    Ok(mn_character(lam, mu.parts()))
}

fn mn_character(lam: &Partition, mu: &[usize]) -> i64 {
    let Some((&r, rest)) = mu.split_first() else {
        return 1;
    };
    let key = (lam.clone(), Partition(mu.to_vec()));
    if let Some(&v) = char_memo().read().get(&key) {
        return v;
    }
    // Beta-set of lam with k = len(lam) beads; removing a rim hook of length r
    // slides one bead down by r onto an empty position.
    let k = lam.len();
    let beta: Vec<usize> = lam.parts().iter().enumerate().map(|(i, &p)| p + k - 1 - i).collect();
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let crossed = beta.iter().filter(|&&g| g > target && g < b).count();
        let mut next = beta.clone();
        next[idx] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let shape = Partition::from_unsorted(
            next.iter().enumerate().map(|(i, &g)| g - (k - 1 - i)).collect(),
        );
        let sign = if crossed % 2 == 0 { 1 } else { -1 };
        total += sign * mn_character(&shape, rest);
    }
    char_memo().write().insert(key, total);
    total
}

/// Hook length formula.
pub fn irreducible_dimension(lam: &Partition) -> BigInt {
    let conj = lam.conjugate();
    let mut hooks = BigInt::one();
    for (i, &row) in lam.parts().iter().enumerate() {
        for j in 0..row {
            let hook = row - j + conj.parts()[j] - i - 1;
            hooks *= BigInt::from(hook);
        }
    }
    factorial(lam.size()) / hooks
}

/// `lam[n] = (n - |lam|, lam_1, ..., lam_j)`.
pub fn pad_partition(lam: &Partition, n: usize) -> Result<Partition, Error> {
    let m = lam.size();
    if n < m + lam.first() {
        return Err(Error::PaddingInvalid { partition: lam.clone(), n });
    }
    let mut parts = Vec::with_capacity(lam.len() + 1);
    if n > m {
        parts.push(n - m);
    }
    parts.extend_from_slice(lam.parts());
    Ok(Partition(parts))
}

pub fn unpad_partition(mu: &Partition) -> Partition {
    Partition(mu.parts().iter().skip(1).copied().collect())
}

/// Cycle type of `sigma^k` for `sigma` of cycle type `mu`.
pub fn power_cycle_type(mu: &Partition, k: usize) -> Partition {
    assert!(k >= 1, "power must be positive");
    let mut parts = Vec::new();
    for &l in mu.parts() {
        let g = l.gcd(&k);
        parts.extend(std::iter::repeat(l / g).take(g));
    }
    Partition::from_unsorted(parts)
}

/// An exact rational function on the conjugacy classes of `S_n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassFunction {
    n: usize,
    values: BTreeMap<Partition, Rational>,
}

impl ClassFunction {
    /// Builds a class function by evaluating `f` on every cycle type of `n`.
    pub fn from_fn(n: usize, mut f: impl FnMut(&Partition) -> Rational) -> Self {
        let values = partitions(n).into_iter().map(|mu| {
            let v = f(&mu);
            (mu, v)
        });
        ClassFunction { n, values: values.collect() }
    }

    /// Requires a value for every cycle type of `n`.
    pub fn from_values(n: usize, values: BTreeMap<Partition, Rational>) -> Result<Self, Error> {
        let classes = partitions(n);
        if values.len() != classes.len() || classes.iter().any(|mu| !values.contains_key(mu)) {
            return Err(Error::Parse(format!("class function on S_{n} must cover every cycle type")));
        }
        Ok(ClassFunction { n, values })
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::from_fn(n, |_| c.clone())
    }

    pub fn irreducible(lam: &Partition) -> Self {
        Self::from_fn(lam.size(), |mu| int(mn_character(lam, mu.parts())))
    }

    /// Character of the regular representation.
    pub fn regular(n: usize) -> Self {
        let nf = factorial(n);
        Self::from_fn(n, |mu| {
            if mu.parts().iter().all(|&p| p == 1) {
                Rational::from_integer(nf.clone())
            } else {
                Rational::zero()
            }
        })
    }

    /// Character of the standard representation: fixed points minus one.
    pub fn standard(n: usize) -> Self {
        Self::from_fn(n, |mu| int(mu.multiplicity(1) as i64 - 1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, mu: &Partition) -> &Rational {
        &self.values[mu]
    }

    pub fn at_identity(&self) -> &Rational {
        self.get(&Partition(vec![1; self.n]))
    }

    pub fn values(&self) -> &BTreeMap<Partition, Rational> {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(Zero::is_zero)
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction, Error> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<ClassFunction, Error> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> ClassFunction {
        ClassFunction {
            n: self.n,
            values: self.values.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    fn zip(
        &self,
        other: &ClassFunction,
        op: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<ClassFunction, Error> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        let values = self.values.iter().map(|(k, v)| (k.clone(), op(v, &other.values[k])));
        Ok(ClassFunction { n: self.n, values: values.collect() })
    }
}

/// `(1/n!) sum_mu |C_mu| f(mu) g(mu)`.
pub fn inner_product(f: &ClassFunction, g: &ClassFunction) -> Result<Rational, Error> {
    if f.n != g.n {
        return Err(Error::SizeMismatch { left: f.n, right: g.n });
    }
    let mut acc = Rational::zero();
    for (mu, fv) in &f.values {
        acc += Rational::from_integer(class_size(mu)) * fv * &g.values[mu];
    }
    Ok(acc / Rational::from_integer(factorial(f.n)))
}

/// Character of the `i`-th exterior power, from Newton's identities
/// `k e_k = sum_{j=1}^k (-1)^{j-1} e_{k-j} p_j` with `p_j(mu) = chi(mu^j)`.
pub fn exterior_power_character(chi: &ClassFunction, i: usize) -> ClassFunction {
    ClassFunction::from_fn(chi.n, |mu| {
        let power_sums: Vec<Rational> =
            (1..=i).map(|j| chi.get(&power_cycle_type(mu, j)).clone()).collect();
        let mut e = vec![Rational::one()];
        for k in 1..=i {
            let mut acc = Rational::zero();
            for j in 1..=k {
                let term = &e[k - j] * &power_sums[j - 1];
                if j % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            e.push(acc / int(k as i64));
        }
        e.pop().unwrap()
    })
}

/// A polynomial in the cycle-counting class functions `X_1, X_2, ...`.
///
/// Keys are exponent vectors `(e_1, ..., e_r)` with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CharacterPolynomial {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl CharacterPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn monomial(mut exps: Vec<u32>, c: Rational) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        CharacterPolynomial { terms }
    }

    /// The variable `X_l`.
    pub fn x(l: usize) -> Self {
        assert!(l >= 1);
        let mut exps = vec![0; l];
        exps[l - 1] = 1;
        Self::monomial(exps, Rational::one())
    }

    /// `binom(X_l, k)` expanded into the monomial basis.
    pub fn binomial_x(l: usize, k: usize) -> Self {
        let mut acc = Self::constant(Rational::one());
        for j in 0..k {
            let factor = Self::x(l).sub(&Self::constant(int(j as i64)));
            acc = acc.mul(&factor);
        }
        acc.scale(&(Rational::one() / Rational::from_integer(factorial(k))))
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    /// Weighted degree with `deg X_l = l`; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| weighted_degree(e)).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            add_term(&mut terms, e.clone(), c.clone());
        }
        CharacterPolynomial { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        CharacterPolynomial { terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let len = ea.len().max(eb.len());
                let e: Vec<u32> = (0..len)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                add_term(&mut terms, e, ca * cb);
            }
        }
        CharacterPolynomial { terms }
    }

    /// Evaluates with `X_l := counts[l - 1]` (missing counts are zero).
    pub fn eval_counts(&self, counts: &[usize]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    let x = counts.get(i).copied().unwrap_or(0);
                    v *= Rational::from_integer(BigInt::from(x).pow(p));
                }
            }
            acc += v;
        }
        acc
    }

    /// Polynomial in `n` obtained by evaluating at the identity of `S_n`.
    pub fn at_identity_coefficients(&self) -> Vec<Rational> {
        let mut coeffs = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().skip(1).any(|&p| p > 0) {
                continue;
            }
            let d = e.first().copied().unwrap_or(0) as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Rational::zero());
            }
            coeffs[d] += c;
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        coeffs
    }
}

fn add_term(terms: &mut BTreeMap<Vec<u32>, Rational>, mut e: Vec<u32>, c: Rational) {
    while e.last() == Some(&0) {
        e.pop();
    }
    let entry = terms.entry(e).or_insert_with(Rational::zero);
    *entry += c;
    if entry.is_zero() {
        terms.retain(|_, v| !v.is_zero());
    }
}

pub fn weighted_degree(exps: &[u32]) -> usize {
    exps.iter().enumerate().map(|(i, &e)| (i + 1) * e as usize).sum()
}

/// All exponent vectors of weighted degree at most `max_deg`, in a fixed order.
pub fn monomials_up_to(max_deg: usize) -> Vec<Vec<u32>> {
    fn go(var: usize, budget: usize, max_deg: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if var > max_deg {
            let mut e = cur.clone();
            while e.last() == Some(&0) {
                e.pop();
            }
            out.push(e);
            return;
        }
        for p in 0..=budget / var {
            cur.push(p as u32);
            go(var + 1, budget - p * var, max_deg, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, max_deg, max_deg, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| weighted_degree(a).cmp(&weighted_degree(b)).then_with(|| a.cmp(b)));
    out
}

pub fn eval_char_poly(p: &CharacterPolynomial, mu: &Partition) -> Rational {
    let counts: Vec<usize> = (1..=mu.first()).map(|l| mu.multiplicity(l)).collect();
    p.eval_counts(&counts)
}

impl CharacterPolynomial {
    pub fn to_class_function(&self, n: usize) -> ClassFunction {
        ClassFunction::from_fn(n, |mu| eval_char_poly(self, mu))
    }
}

impl fmt::Display for CharacterPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|a, b| weighted_degree(b.0).cmp(&weighted_degree(a.0)).then_with(|| b.0.cmp(a.0)));
        for (e, c) in ordered {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("X{}", i + 1) } else { format!("X{}^{}", i + 1, p) })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CharacterPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Irreducible multiplicities keyed by unpadded partitions.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiplicityTable {
    n: usize,
    mult: BTreeMap<Partition, u64>,
}

impl MultiplicityTable {
    /// Zero multiplicities are dropped; padding validity is enforced.
    pub fn new(n: usize, entries: impl IntoIterator<Item = (Partition, u64)>) -> Result<Self, Error> {
        let mut mult = BTreeMap::new();
        for (lam, m) in entries {
            pad_partition(&lam, n)?;
            if m > 0 {
                *mult.entry(lam).or_insert(0) += m;
            }
        }
        Ok(MultiplicityTable { n, mult })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, lam: &Partition) -> u64 {
        self.mult.get(lam).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<Partition, u64> {
        &self.mult
    }

    /// `sum_lam mult(lam) * dim V_{lam[n]}`.
    pub fn dimension(&self) -> BigInt {
        self.mult
            .iter()
            .map(|(lam, &m)| BigInt::from(m) * irreducible_dimension(&pad_partition(lam, self.n).unwrap()))
            .sum()
    }

    /// Same multiplicities regardless of `n`.
    pub fn same_multiplicities(&self, other: &MultiplicityTable) -> bool {
        self.mult == other.mult
    }

    pub fn weight(&self) -> usize {
        self.mult.keys().map(Partition::size).max().unwrap_or(0)
    }
}

impl fmt::Display for MultiplicityTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .mult
            .iter()
            .map(|(lam, &m)| if m == 1 { format!("V{lam}") } else { format!("V{lam}^{m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
