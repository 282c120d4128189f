//! Built-in check suite, one check per reproduced claim.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use repstab_core::algebra::{action_matrix, brute_force_dimension, graded_basis, pullback_matrix, relation_space, Family, GradedPiece};
use repstab_core::exactla::{induced_on_subspace, Polynomial};
use repstab_core::rational::{as_i64, frac, int};
use repstab_core::repstab::{
    character, coinvariant_probe, decompose, fit_betti_polynomial, fit_character_polynomial, generation_degree_check,
    mbar_h1_character_polynomial, model_check_h1,
};
use repstab_core::symcomb::{
    eval_char_poly, inner_product, partitions, CharacterPolynomial, ClassFunction, MultiplicityTable, Partition,
    Permutation,
};

use crate::CliError;

type CheckResult = Result<String, String>;

pub struct Check {
    pub name: &'static str,
    pub title: &'static str,
    run: fn() -> CheckResult,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn run(&self) -> Outcome {
        let (passed, detail) = match (self.run)() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        Outcome { name: self.name, title: self.title, passed, detail }
    }
}

pub const CHECKS: &[Check] = &[
    Check { name: "c1", title: "b1 of mbar is (n-1)(n-2)(n-3)/6 for n=3..10", run: c1 },
    Check { name: "c2", title: "H1 of mbar is V(1,1,1) for n=4..9", run: c2 },
    Check { name: "c3", title: "H1 character of mbar matches P1 for n=3..8", run: c3 },
    Check { name: "c4", title: "degree-one decompositions and character polynomials of the braid-like families, n=4..7", run: c4 },
    Check { name: "c5", title: "weight bounds in degrees one and two", run: c5 },
    Check { name: "c6", title: "generation degree of mbar in degrees one and two", run: c6 },
    Check { name: "c7", title: "coinvariants with 3, 4, 5 frozen labels", run: c7 },
    Check { name: "c8", title: "Betti and character polynomial fits for H1 of mbar", run: c8 },
    Check { name: "c9", title: "graded bases agree with the brute-force count; characters at identity equal dimensions", run: c9 },
    Check { name: "c10", title: "H1 of mbar is the exterior cube of the standard representation, n=3..8", run: c10 },
    Check { name: "c11", title: "orthogonality, homomorphism, relation invariance, pullback functoriality", run: c11 },
];

pub fn select(only: &[String]) -> Result<Vec<&'static Check>, CliError> {
    if only.is_empty() {
        return Ok(CHECKS.iter().collect());
    }
    only.iter()
        .map(|name| {
            CHECKS
                .iter()
                .find(|c| c.name == name)
                .ok_or_else(|| CliError::Usage(format!("unknown check {name:?}; expected c1..c{}", CHECKS.len())))
        })
        .collect()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn p(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).expect("valid partition")
}

fn table(n: usize, entries: &[(&[usize], u64)]) -> MultiplicityTable {
    MultiplicityTable::new(n, entries.iter().map(|&(l, m)| (p(l), m))).expect("valid table")
}

fn c1() -> CheckResult {
    for n in 3..=10usize {
        let d = graded_basis(Family::Mbar, n, 1).dimension;
        let expected = (n - 1) * (n - 2) * (n - 3) / 6;
        ensure(d == expected, || format!("n={n}: dimension {d}, expected {expected}"))?;
    }
    Ok("n=3..10".into())
}

fn c2() -> CheckResult {
    for n in 4..=9 {
        let t = decompose(Family::Mbar, n, 1).map_err(err)?;
        ensure(t == table(n, &[(&[1, 1, 1], 1)]), || format!("n={n}: {t}"))?;
    }
    Ok("n=4..9".into())
}

fn agrees(chi: &ClassFunction, poly: &CharacterPolynomial) -> Result<(), String> {
    for (mu, v) in chi.iter() {
        let e = eval_char_poly(poly, mu);
        ensure(&e == v, || format!("n={} class {mu}: {v} vs {e}", chi.n()))?;
    }
    Ok(())
}

fn c3() -> CheckResult {
    let p1 = mbar_h1_character_polynomial();
    for n in 3..=8 {
        agrees(&character(Family::Mbar, n, 1).map_err(err)?, &p1)?;
    }
    Ok("every class, n=3..8".into())
}

fn table_one() -> Vec<(Family, Vec<(&'static [usize], u64)>, CharacterPolynomial)> {
    let b2 = CharacterPolynomial::binomial_x(1, 2);
    let x2 = CharacterPolynomial::x(2);
    let one = CharacterPolynomial::constant(int(1));
    let trivial_two: Vec<(&'static [usize], u64)> = vec![(&[], 1), (&[1], 2), (&[1, 1], 1), (&[2], 1)];
    vec![
        (Family::Arnold, vec![(&[], 1), (&[1], 1), (&[2], 1)], b2.add(&x2)),
        (Family::M0, vec![(&[1], 1), (&[2], 1)], b2.add(&x2).sub(&one)),
        (Family::Pvb, trivial_two.clone(), b2.scale(&int(2))),
        (Family::Psigma, trivial_two, b2.scale(&int(2))),
        (Family::Pfb, vec![(&[1], 1), (&[1, 1], 1)], b2.sub(&x2)),
    ]
}

fn c4() -> CheckResult {
    for (family, entries, poly) in table_one() {
        for n in 4..=7 {
            let chi = character(family, n, 1).map_err(err)?;
            agrees(&chi, &poly).map_err(|e| format!("{family}: {e}"))?;
            let t = decompose(family, n, 1).map_err(err)?;
            ensure(t == table(n, &entries), || format!("{family} n={n}: {t}"))?;
        }
    }
    Ok("arnold, m0, pvb, psigma, pfb at n=4..7".into())
}

fn c5() -> CheckResult {
    let mut top = 0;
    for n in 5..=9 {
        let w = decompose(Family::Mbar, n, 2).map_err(err)?.weight();
        ensure(w <= 6, || format!("H2 of mbar at n={n} has weight {w}"))?;
        top = top.max(w);
    }
    for family in Family::ALL {
        for n in 3..=8 {
            let w = decompose(family, n, 1).map_err(err)?.weight();
            ensure(w <= 3, || format!("H1 of {family} at n={n} has weight {w}"))?;
        }
    }
    Ok(format!("max weight of H2(mbar) over n=5..9 is {top}"))
}

fn c6() -> CheckResult {
    for n in 5..=9 {
        ensure(generation_degree_check(Family::Mbar, 1, 4, n).map_err(err)?, || format!("degree 1, n={n}"))?;
    }
    for n in 8..=9 {
        ensure(generation_degree_check(Family::Mbar, 2, 7, n).map_err(err)?, || format!("degree 2, n={n}"))?;
    }
    Ok("H1 from 4 labels for n=5..9; H2 from 7 labels for n=8..9".into())
}

fn c7() -> CheckResult {
    let probe = coinvariant_probe(Family::Mbar, 1, 3, 0, 4).map_err(err)?;
    let dims: Vec<usize> = probe.levels.iter().map(|l| l.dimension).collect();
    ensure(dims == [0, 1, 1, 1, 1], || format!("a=3 dims {dims:?}"))?;
    ensure(!probe.levels[0].t_surjective, || "a=3: T surjective at n=0".into())?;
    ensure(probe.levels[1..].iter().all(|l| l.t_iso()), || "a=3: T not an isomorphism for some n >= 1".into())?;
    for a in [4usize, 5] {
        let expected = a * (a - 1) * (a - 2) / 6;
        let probe = coinvariant_probe(Family::Mbar, 1, a, 1, 4).map_err(err)?;
        for l in &probe.levels {
            ensure(l.dimension == expected, || format!("a={a} n={}: {}", l.n, l.dimension))?;
        }
    }
    Ok("a=3 dims 0,1,1,1,1; a=4,5 constant".into())
}

fn c8() -> CheckResult {
    let b = fit_betti_polynomial(Family::Mbar, 1, &[3, 4, 5, 6, 7], &[8, 9, 10], 3).map_err(err)?;
    let expected = Polynomial::from_roots(&[1, 2, 3], frac(1, 6));
    ensure(b.polynomial == expected, || format!("betti fit {}", b.polynomial))?;
    ensure(b.validation.passed(), || format!("betti fit fails at {:?}", b.validation.mismatches))?;
    let c = fit_character_polynomial(Family::Mbar, 1, &[3, 4, 5, 6], &[7, 8], 3).map_err(err)?;
    ensure(c.polynomial == mbar_h1_character_polynomial(), || format!("character fit {}", c.polynomial))?;
    ensure(c.validation.passed(), || format!("character fit fails at {:?}", c.validation.mismatches))?;
    Ok(format!("b1 = {}", b.polynomial))
}

fn c9() -> CheckResult {
    let mut count = 0;
    for family in Family::ALL {
        for n in 0..=6 {
            for i in 0..=2 {
                let d = graded_basis(family, n, i).dimension;
                let b = brute_force_dimension(family, n, i).map_err(err)?;
                ensure(d == b, || format!("{family} n={n} i={i}: {d} vs brute force {b}"))?;
                let chi = character(family, n, i).map_err(err)?;
                ensure(as_i64(chi.at_identity()) == Some(d as i64), || format!("{family} n={n} i={i}: character at identity"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} triples"))
}

fn c10() -> CheckResult {
    for n in 3..=8 {
        ensure(model_check_h1(n).map_err(err)?, || format!("n={n}"))?;
    }
    Ok("n=3..8".into())
}

fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    Permutation::new(v).expect("shuffle is a permutation")
}

fn random_injection(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    v.truncate(m);
    v
}

fn c11() -> CheckResult {
    for n in 1..=7 {
        for a in partitions(n) {
            for b in partitions(n) {
                let ip = inner_product(&ClassFunction::irreducible(&a), &ClassFunction::irreducible(&b)).map_err(err)?;
                ensure(ip == int((a == b) as i64), || format!("<{a},{b}> = {ip}"))?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for family in Family::ALL {
        for n in [4, 5, 6] {
            let i = if n == 6 { 1 } else { 2 };
            for _ in 0..3 {
                let s = random_permutation(&mut rng, n);
                let t = random_permutation(&mut rng, n);
                let lhs = action_matrix(family, n, i, &s.compose(&t)).map_err(err)?;
                let rhs = action_matrix(family, n, i, &s).map_err(err)?.mul(&action_matrix(family, n, i, &t).map_err(err)?).map_err(err)?;
                ensure(lhs == rhs, || format!("{family} n={n}: action is not multiplicative"))?;
                if family != Family::M0 {
                    let r = relation_space(family, n, i).map_err(err)?;
                    induced_on_subspace(&lhs, &r).map_err(|e| format!("{family} n={n}: {e}"))?;
                }
            }
            let f = random_injection(&mut rng, n - 1, n);
            let g = random_injection(&mut rng, n, n + 1);
            let gf: Vec<usize> = f.iter().map(|&x| g[x - 1]).collect();
            let composed = pullback_matrix(family, &gf, n + 1, i).map_err(err)?;
            let stepwise = pullback_matrix(family, &g, n + 1, i)
                .map_err(err)?
                .mul(&pullback_matrix(family, &f, n, i).map_err(err)?)
                .map_err(err)?;
            ensure(composed == stepwise, || format!("{family} n={n}: pullback is not functorial"))?;
            let sigma = random_permutation(&mut rng, n);
            let inc: Vec<usize> = (1..=n).collect();
            let pull = pullback_matrix(family, &inc, n + 1, i).map_err(err)?;
            let small = GradedPiece::get(family, n, i).quotient_action(&sigma).map_err(err)?;
            let big = GradedPiece::get(family, n + 1, i).quotient_action(&sigma.extend(n + 1)).map_err(err)?;
            ensure(pull.mul(&small).map_err(err)? == big.mul(&pull).map_err(err)?, || {
                format!("{family} n={n}: pullback is not equivariant")
            })?;
        }
    }
    Ok("all families, n=4..6".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection() {
        assert_eq!(select(&[]).unwrap().len(), 11);
        assert_eq!(select(&["c3".to_string()]).unwrap()[0].name, "c3");
        assert!(select(&["c99".to_string()]).is_err());
    }

    #[test]
    fn cheap_checks_pass() {
        for name in ["c1", "c2", "c3", "c10"] {
            let o = select(&[name.to_string()]).unwrap()[0].run();
            assert!(o.passed, "{name}: {}", o.detail);
        }
    }
}
