//! Characters, decompositions and stability diagnostics for the graded pieces
//! built in [`crate::algebra`].

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

use num_traits::{ToPrimitive, Zero};

use crate::algebra::{degree_one_space, m0_image, Family, GradedPiece};
use crate::exactla::{
    induced_on_subspace, interpolate_polynomial, rank, solve, Echelon, Polynomial,
    SparseRationalMatrix, SparseVec, Solution,
};
use crate::rational::{int, is_nonneg_integer, Rational};
use crate::symcomb::{
    binomial, eval_char_poly, exterior_power_character, inner_product, monomials_up_to, partitions, unpad_partition,
    CharacterPolynomial, ClassFunction, MultiplicityTable, Partition, Permutation,
};
use crate::Error;

pub const MAX_N_DEGREE_ONE: usize = 13;
pub const MAX_N_DEGREE_TWO: usize = 10;
/// Ceiling on `dim Λ^i(V_1)` for degrees three and up.
pub const MAX_AMBIENT: u128 = 60_000;

/// Estimated `dim Λ^i(V_1)` at `n` labels.
pub fn ambient_dimension(family: Family, n: usize, i: usize) -> u128 {
    let d = degree_one_space(family, n).dim();
    binomial(d as i64, i as i64).to_u128().unwrap_or(u128::MAX)
}

static GUARD_DISABLED: AtomicBool = AtomicBool::new(false);

/// Enables or disables [`check_size`] process-wide.
pub fn set_size_guard(enabled: bool) {
    GUARD_DISABLED.store(!enabled, Ordering::Relaxed);
}

/// Fails fast when `(family, n, i)` is beyond the default ceilings.
pub fn check_size(family: Family, n: usize, i: usize) -> Result<(), Error> {
    if GUARD_DISABLED.load(Ordering::Relaxed) {
        return Ok(());
    }
    let over = match i {
        0 => false,
        1 => n > MAX_N_DEGREE_ONE,
        2 => n > MAX_N_DEGREE_TWO,
        _ => n > MAX_N_DEGREE_TWO || ambient_dimension(family, n, i) > MAX_AMBIENT,
    };
    if !over {
        return Ok(());
    }
    let limit = match i {
        1 => ambient_dimension(family, MAX_N_DEGREE_ONE, 1),
        2 => ambient_dimension(family, MAX_N_DEGREE_TWO, 2),
        _ => MAX_AMBIENT,
    };
    Err(Error::SizeGuard {
        what: format!(
            "{family} at n={n}, degree {i} (ceilings: n <= {MAX_N_DEGREE_ONE} for degree 1, n <= {MAX_N_DEGREE_TWO} for degree 2)"
        ),
        ambient_dim: ambient_dimension(family, n, i),
        limit,
    })
}

fn class_representatives(n: usize) -> Vec<(Partition, Permutation)> {
    partitions(n).into_iter().map(|mu| { let p = Permutation::representative(&mu); (mu, p) }).collect()
}

/// Character of `S_n` on the degree-`i` piece.
///
/// Computed as the exterior power of the degree-one character minus the trace
/// on the relation space; for `m0`, as the trace on the image inside `arnold`.
pub fn character(family: Family, n: usize, i: usize) -> Result<ClassFunction, Error> {
    check_size(family, n, i)?;
    if i == 0 {
        return Ok(ClassFunction::constant(n, int(1)));
    }
    let mut values = BTreeMap::new();
    if family == Family::M0 {
        let (arnold, image) = m0_image(n, i);
        for (mu, p) in class_representatives(n) {
            let a = arnold.quotient_action(&p)?;
            values.insert(mu, induced_on_subspace(&a, &image)?.trace());
        }
        return ClassFunction::from_values(n, values);
    }
    let deg1 = GradedPiece::get(family, n, 1);
    let piece = GradedPiece::get(family, n, i);
    let relations = crate::algebra::relation_space(family, n, i)?;
    let mut chi1 = BTreeMap::new();
    for (mu, p) in class_representatives(n) {
        chi1.insert(mu.clone(), deg1.action_matrix(&p)?.trace());
        let on_relations = if relations.dim() == 0 {
            Rational::zero()
        } else {
            induced_on_subspace(&piece.action_matrix(&p)?, &relations)?.trace()
        };
        values.insert(mu, on_relations);
    }
    let ambient = exterior_power_character(&ClassFunction::from_values(n, chi1)?, i);
    ambient.sub(&ClassFunction::from_values(n, values)?)
}

/// Character from traces of the action on quotient coordinates; an
/// independent path to [`character`].
pub fn character_on_quotient(family: Family, n: usize, i: usize) -> Result<ClassFunction, Error> {
    check_size(family, n, i)?;
    let piece = GradedPiece::get(family, n, i);
    let mut values = BTreeMap::new();
    for (mu, p) in class_representatives(n) {
        values.insert(mu, piece.quotient_trace(&p)?);
    }
    ClassFunction::from_values(n, values)
}

/// Multiplicities of the irreducibles `V(λ)_n` in a character.
pub fn decompose_character(chi: &ClassFunction) -> Result<MultiplicityTable, Error> {
    let n = chi.n();
    let mut entries = Vec::new();
    for nu in partitions(n) {
        let m = inner_product(chi, &ClassFunction::irreducible(&nu))?;
        if !is_nonneg_integer(&m) {
            return Err(Error::Internal(format!("multiplicity of {nu} in a character of S_{n} is {m}")));
        }
        let m = m.to_integer().to_u64().ok_or_else(|| Error::Internal("multiplicity overflow".into()))?;
        entries.push((unpad_partition(&nu), m));
    }
    MultiplicityTable::new(n, entries)
}

pub fn decompose(family: Family, n: usize, i: usize) -> Result<MultiplicityTable, Error> {
    decompose_character(&character(family, n, i)?)
}

pub fn weight_observed(t: &MultiplicityTable) -> usize {
    t.weight()
}

/// Smallest `S_n`-invariant subspace of `piece` containing `seeds`, closed
/// under adjacent transpositions.
pub fn orbit_span(piece: &GradedPiece, seeds: impl IntoIterator<Item = SparseVec>) -> Result<Echelon, Error> {
    let generators: Vec<SparseRationalMatrix> = Permutation::adjacent_transpositions(piece.n)
        .iter()
        .map(|s| piece.quotient_action(s))
        .collect::<Result<_, _>>()?;
    let mut span = Echelon::new(piece.dim());
    let mut queue = Vec::new();
    for v in seeds {
        if span.is_full() {
            return Ok(span);
        }
        if span.insert(v.clone()) {
            queue.push(v);
        }
    }
    while let Some(v) = queue.pop() {
        for g in &generators {
            if span.is_full() {
                return Ok(span);
            }
            let w = g.mul_vec(&v);
            if span.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    Ok(span)
}

fn canonical_inclusion(k: usize) -> Vec<usize> {
    (1..=k).collect()
}

/// Whether the `S_n`-orbit of the images of all pullbacks from `k <= m` labels spans the piece at `n`.
pub fn generation_degree_check(family: Family, i: usize, m: usize, n: usize) -> Result<bool, Error> {
    if m > n {
        return Err(Error::SizeMismatch { left: m, right: n });
    }
    check_size(family, n, i)?;
    let target = GradedPiece::get(family, n, i);
    let mut seeds = Vec::new();
    // every injection [k] -> [n] is a permutation of the canonical one
    for k in 0..=m {
        let source = GradedPiece::get(family, k, i);
        let p = source.pullback_to(&canonical_inclusion(k), &target)?;
        seeds.extend(p.columns().iter().cloned());
    }
    Ok(orbit_span(&target, seeds)?.is_full())
}

/// Conditions for the map from level `n` to level `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityEntry {
    pub n: usize,
    pub dimension: usize,
    pub next_dimension: usize,
    pub injective: bool,
    pub spanning: bool,
    pub multiplicities_stable: bool,
    pub multiplicities: MultiplicityTable,
}

impl StabilityEntry {
    pub fn holds(&self) -> bool {
        self.injective && self.spanning && self.multiplicities_stable
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub family: Family,
    pub degree: usize,
    pub n_lo: usize,
    pub n_hi: usize,
    pub entries: Vec<StabilityEntry>,
    /// Smallest `n` in range from which every entry through `n_hi` holds.
    pub observed_onset: Option<usize>,
    /// `6i`, the range in which stability is known in general for `mbar`.
    pub guaranteed_onset: Option<usize>,
}

/// Injectivity, orbit-spanning and multiplicity stability for each step
/// `n -> n + 1` with `n_lo <= n <= n_hi`.
pub fn rep_stability_report(family: Family, i: usize, n_lo: usize, n_hi: usize) -> Result<StabilityReport, Error> {
    if n_lo > n_hi {
        return Err(Error::SizeMismatch { left: n_lo, right: n_hi });
    }
    check_size(family, n_hi + 1, i)?;
    let mut entries = Vec::new();
    let mut next_table = decompose(family, n_lo, i)?;
    for n in n_lo..=n_hi {
        let table = next_table;
        next_table = decompose(family, n + 1, i)?;
        let source = GradedPiece::get(family, n, i);
        let target = GradedPiece::get(family, n + 1, i);
        let p = source.pullback_to(&canonical_inclusion(n), &target)?;
        let injective = rank(&p) == source.dim();
        let spanning = orbit_span(&target, p.columns().iter().cloned())?.is_full();
        entries.push(StabilityEntry {
            n,
            dimension: source.dim(),
            next_dimension: target.dim(),
            injective,
            spanning,
            multiplicities_stable: table.same_multiplicities(&next_table),
            multiplicities: table,
        });
    }
    let mut observed_onset = None;
    for e in entries.iter().rev() {
        if !e.holds() {
            break;
        }
        observed_onset = Some(e.n);
    }
    Ok(StabilityReport {
        family,
        degree: i,
        n_lo,
        n_hi,
        entries,
        observed_onset,
        guaranteed_onset: (family == Family::Mbar).then_some(6 * i),
    })
}

/// Coinvariants at one level and the transition map to the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoinvariantLevel {
    pub n: usize,
    pub dimension: usize,
    /// `T: (V_n)_{S_n} -> (V_{n+1})_{S_{n+1}}` in coinvariant coordinates.
    pub t_map: SparseRationalMatrix,
    pub t_injective: bool,
    pub t_surjective: bool,
}

impl CoinvariantLevel {
    pub fn t_iso(&self) -> bool {
        self.t_injective && self.t_surjective
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoinvariantProbe {
    pub family: Family,
    pub degree: usize,
    /// Number of frozen labels; global labels `1..=a` stand for `-1..=-a`.
    pub a: usize,
    pub levels: Vec<CoinvariantLevel>,
}

/// `span{v - s v}` over adjacent transpositions of the labels `a+1..=a+n`.
fn coinvariant_relations(piece: &GradedPiece, a: usize) -> Result<Echelon, Error> {
    let total = piece.n;
    let mut w = Echelon::new(piece.dim());
    for j in a + 1..total {
        let s = piece.quotient_action(&Permutation::transposition(total, j, j + 1))?;
        for (c, col) in s.columns().iter().enumerate() {
            let mut v = col.clone();
            let e = v.entry(c).or_insert_with(Rational::zero);
            *e -= int(1);
            if e.is_zero() {
                v.remove(&c);
            }
            w.insert(v);
            if w.is_full() {
                return Ok(w);
            }
        }
    }
    Ok(w)
}

pub fn coinvariant_probe(family: Family, i: usize, a: usize, n_lo: usize, n_hi: usize) -> Result<CoinvariantProbe, Error> {
    if n_lo > n_hi {
        return Err(Error::SizeMismatch { left: n_lo, right: n_hi });
    }
    check_size(family, a + n_hi + 1, i)?;
    let mut levels = Vec::new();
    let mut next: Option<(std::sync::Arc<GradedPiece>, Echelon)> = None;
    for n in n_lo..=n_hi {
        let (piece, w) = match next.take() {
            Some(x) => x,
            None => {
                let p = GradedPiece::get(family, a + n, i);
                let w = coinvariant_relations(&p, a)?;
                (p, w)
            }
        };
        let up = GradedPiece::get(family, a + n + 1, i);
        let w_up = coinvariant_relations(&up, a)?;
        let free = w.free_columns();
        let free_up = w_up.free_columns();
        let position: BTreeMap<usize, usize> = free_up.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let pull = piece.pullback_to(&canonical_inclusion(a + n), &up)?;
        let columns = free
            .iter()
            .map(|&c| w_up.reduce(pull.column(c)).into_iter().map(|(r, x)| (position[&r], x)).collect())
            .collect();
        let t_map = SparseRationalMatrix::from_columns(free_up.len(), columns)?;
        let r = rank(&t_map);
        levels.push(CoinvariantLevel {
            n,
            dimension: free.len(),
            t_injective: r == free.len(),
            t_surjective: r == free_up.len(),
            t_map,
        });
        next = Some((up, w_up));
    }
    Ok(CoinvariantProbe { family, degree: i, a, levels })
}

/// Outcome of checking a fitted object against levels it was not fitted on.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Validation {
    pub checked: Vec<usize>,
    /// `(n, cycle type)` pairs (cycle type empty for dimension checks) where the fit disagrees.
    pub mismatches: Vec<(usize, Partition)>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterFit {
    pub polynomial: CharacterPolynomial,
    pub validation: Validation,
}

/// Solves exactly for the character polynomial of weighted degree `<= max_deg`
/// agreeing with the character on every class of every level in `fit_ns`.
pub fn fit_character_polynomial(
    family: Family,
    i: usize,
    fit_ns: &[usize],
    check_ns: &[usize],
    max_deg: usize,
) -> Result<CharacterFit, Error> {
    let monomials = monomials_up_to(max_deg);
    let basis: Vec<CharacterPolynomial> =
        monomials.iter().map(|e| CharacterPolynomial::monomial(e.clone(), int(1))).collect();
    let mut equations = Vec::new();
    for &n in fit_ns {
        let chi = character(family, n, i)?;
        for (mu, value) in chi.iter() {
            let row: SparseVec = basis
                .iter()
                .enumerate()
                .map(|(k, m)| (k, eval_char_poly(m, mu)))
                .filter(|(_, x)| !x.is_zero())
                .collect();
            equations.push((row, value.clone()));
        }
    }
    let coefficients = match solve(monomials.len(), equations) {
        Solution::Unique(x) => x,
        Solution::Underdetermined { rank, unknowns } => return Err(Error::Underdetermined { rank, unknowns }),
        Solution::Inconsistent => return Err(Error::Inconsistent),
    };
    let mut polynomial = CharacterPolynomial::zero();
    for (m, c) in basis.iter().zip(&coefficients) {
        polynomial = polynomial.add(&m.scale(c));
    }
    let mut validation = Validation::default();
    for &n in check_ns {
        validation.checked.push(n);
        let chi = character(family, n, i)?;
        for (mu, value) in chi.iter() {
            if &eval_char_poly(&polynomial, mu) != value {
                validation.mismatches.push((n, mu.clone()));
            }
        }
    }
    Ok(CharacterFit { polynomial, validation })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiFit {
    pub polynomial: Polynomial,
    pub validation: Validation,
}

pub fn dimension(family: Family, n: usize, i: usize) -> Result<usize, Error> {
    check_size(family, n, i)?;
    Ok(GradedPiece::get(family, n, i).dim())
}

/// Interpolates `n -> dim` over `fit_ns` and checks the result on `check_ns`.
pub fn fit_betti_polynomial(
    family: Family,
    i: usize,
    fit_ns: &[usize],
    check_ns: &[usize],
    max_deg: usize,
) -> Result<BettiFit, Error> {
    let points = fit_ns
        .iter()
        .map(|&n| Ok((n as i64, int(dimension(family, n, i)? as i64))))
        .collect::<Result<Vec<_>, Error>>()?;
    let polynomial = interpolate_polynomial(&points, max_deg)?;
    let mut validation = Validation::default();
    for &n in check_ns {
        validation.checked.push(n);
        if polynomial.eval(&int(n as i64)) != int(dimension(family, n, i)? as i64) {
            validation.mismatches.push((n, Partition::empty()));
        }
    }
    Ok(BettiFit { polynomial, validation })
}

/// Compares the degree-one `mbar` character with the exterior cube of the
/// standard representation, class by class.
pub fn model_check_h1(n: usize) -> Result<bool, Error> {
    let chi = character(Family::Mbar, n, 1)?;
    Ok(chi == exterior_power_character(&ClassFunction::standard(n), 3))
}

/// The character polynomial of the degree-one `mbar` piece:
/// `C(X1,3) + X3 - X2 X1 - C(X1,2) + X2 + X1 - 1`.
pub fn mbar_h1_character_polynomial() -> CharacterPolynomial {
    let x = CharacterPolynomial::x;
    CharacterPolynomial::binomial_x(1, 3)
        .add(&x(3))
        .sub(&x(2).mul(&x(1)))
        .sub(&CharacterPolynomial::binomial_x(1, 2))
        .add(&x(2))
        .add(&x(1))
        .sub(&CharacterPolynomial::constant(int(1)))
}

/// Sum of `mult(λ) χ_{λ[n]}`.
pub fn reconstruct(t: &MultiplicityTable) -> Result<ClassFunction, Error> {
    let mut acc = ClassFunction::constant(t.n(), Rational::zero());
    for (lam, &m) in t.entries() {
        let nu = crate::symcomb::pad_partition(lam, t.n())?;
        acc = acc.add(&ClassFunction::irreducible(&nu).scale(&int(m as i64)))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::as_i64;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sign_character_on_mbar4() {
        let chi = character(Family::Mbar, 4, 1).unwrap();
        for mu in partitions(4) {
            let sign = if (4 - mu.len()) % 2 == 0 { 1 } else { -1 };
            assert_eq!(chi.get(&mu), &int(sign), "{mu}");
        }
    }

    #[test]
    fn two_character_paths_agree() {
        for f in Family::ALL {
            if f == Family::M0 {
                continue;
            }
            for n in 0..=5 {
                for i in 0..=2 {
                    let a = character(f, n, i).unwrap();
                    if i > 0 {
                        assert_eq!(a, character_on_quotient(f, n, i).unwrap(), "{f} {n} {i}");
                    }
                    assert_eq!(as_i64(a.at_identity()), Some(dimension(f, n, i).unwrap() as i64));
                }
            }
        }
    }

    #[test]
    fn m0_image_and_kernel_models_agree() {
        for n in 2..=5 {
            for i in 1..=2 {
                assert_eq!(character(Family::M0, n, i).unwrap(), character_on_quotient(Family::M0, n, i).unwrap());
            }
        }
    }

    #[test]
    fn decompositions() {
        let t = decompose(Family::Mbar, 6, 1).unwrap();
        assert_eq!(t, MultiplicityTable::new(6, [(p(&[1, 1, 1]), 1)]).unwrap());
        let t = decompose(Family::Arnold, 5, 1).unwrap();
        assert_eq!(t, MultiplicityTable::new(5, [(p(&[]), 1), (p(&[1]), 1), (p(&[2]), 1)]).unwrap());
        let t = decompose(Family::Pfb, 4, 1).unwrap();
        assert_eq!(t, MultiplicityTable::new(4, [(p(&[1]), 1), (p(&[1, 1]), 1)]).unwrap());
        assert_eq!(reconstruct(&t).unwrap(), character(Family::Pfb, 4, 1).unwrap());
        assert_eq!(weight_observed(&MultiplicityTable::new(6, [(p(&[1, 1, 1]), 1)]).unwrap()), 3);
        assert_eq!(weight_observed(&MultiplicityTable::new(6, [(p(&[]), 1)]).unwrap()), 0);
    }

    #[test]
    fn non_character_is_rejected() {
        let half = ClassFunction::constant(3, crate::rational::frac(1, 2));
        assert!(matches!(decompose_character(&half), Err(Error::Internal(_))));
    }

    #[test]
    fn generation_degree() {
        assert!(generation_degree_check(Family::Mbar, 1, 4, 7).unwrap());
        assert!(!generation_degree_check(Family::Mbar, 1, 3, 5).unwrap());
        assert!(generation_degree_check(Family::Arnold, 1, 2, 5).unwrap());
    }

    #[test]
    fn stability_small() {
        let r = rep_stability_report(Family::Mbar, 1, 3, 4).unwrap();
        assert!(r.entries[0].injective);
        assert!(!r.entries[0].spanning);
        assert_eq!(r.observed_onset, Some(4));
        let r = rep_stability_report(Family::Arnold, 1, 4, 6).unwrap();
        assert_eq!(r.observed_onset, Some(4));
        assert_eq!(r.guaranteed_onset, None);
    }

    #[test]
    fn coinvariants_with_frozen_labels() {
        let c = coinvariant_probe(Family::Mbar, 1, 3, 0, 3).unwrap();
        let dims: Vec<_> = c.levels.iter().map(|l| l.dimension).collect();
        assert_eq!(dims, [0, 1, 1, 1]);
        assert!(!c.levels[0].t_surjective);
        assert!(c.levels[1..].iter().all(CoinvariantLevel::t_iso));
        let c = coinvariant_probe(Family::Mbar, 1, 0, 1, 4).unwrap();
        for l in &c.levels {
            let trivial = decompose(Family::Mbar, l.n, 1).unwrap().get(&Partition::empty());
            assert_eq!(l.dimension as u64, trivial);
        }
    }

    #[test]
    fn fits() {
        let fit = fit_character_polynomial(Family::Mbar, 1, &[3, 4, 5, 6], &[7], 3).unwrap();
        assert_eq!(fit.polynomial, mbar_h1_character_polynomial());
        assert!(fit.validation.passed());
        let fit = fit_character_polynomial(Family::Pvb, 1, &[2, 3, 4, 5], &[6], 2).unwrap();
        assert_eq!(fit.polynomial, CharacterPolynomial::binomial_x(1, 2).scale(&int(2)));
        let b = fit_betti_polynomial(Family::Arnold, 1, &[1, 2, 3, 4], &[5, 6, 7], 2).unwrap();
        assert_eq!(b.polynomial, Polynomial::from_roots(&[0, 1], crate::rational::frac(1, 2)));
        assert!(b.validation.passed());
        let b = fit_betti_polynomial(Family::Mbar, 0, &[3, 4, 5], &[6], 0).unwrap();
        assert_eq!(b.polynomial, Polynomial::new(vec![int(1)]));
        assert!(matches!(
            fit_character_polynomial(Family::Mbar, 1, &[3], &[], 3),
            Err(Error::Underdetermined { .. })
        ));
    }

    #[test]
    fn model_check() {
        for n in 3..=6 {
            assert!(model_check_h1(n).unwrap());
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(character(Family::Mbar, 11, 2), Err(Error::SizeGuard { .. })));
        assert!(matches!(character(Family::Arnold, 14, 1), Err(Error::SizeGuard { .. })));
        assert!(check_size(Family::Mbar, 40, 0).is_ok());
    }
}
