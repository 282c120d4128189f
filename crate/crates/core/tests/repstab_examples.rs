use repstab_core::algebra::{graded_basis, Family};
use repstab_core::exactla::Polynomial;
use repstab_core::rational::{as_i64, frac, int};
use repstab_core::repstab::{
    character, coinvariant_probe, decompose, fit_betti_polynomial, fit_character_polynomial, generation_degree_check,
    mbar_h1_character_polynomial, model_check_h1, reconstruct, rep_stability_report, weight_observed,
};
use repstab_core::symcomb::{eval_char_poly, CharacterPolynomial, MultiplicityTable, Partition};
use repstab_core::Error;

fn p(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

fn table(n: usize, entries: &[(&[usize], u64)]) -> MultiplicityTable {
    MultiplicityTable::new(n, entries.iter().map(|&(l, m)| (p(l), m))).unwrap()
}

/// `(n-1)(n-2)(n-3)/6` written out without the crate's polynomial type.
fn b1(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        (n - 1) * (n - 2) * (n - 3) / 6
    }
}

#[test]
fn arnold_degree_one_character_is_uniform() {
    let poly = CharacterPolynomial::binomial_x(1, 2).add(&CharacterPolynomial::x(2));
    for n in 0..=7 {
        let chi = character(Family::Arnold, n, 1).unwrap();
        for (mu, v) in chi.iter() {
            assert_eq!(&eval_char_poly(&poly, mu), v, "n={n} {mu}");
        }
    }
}

#[test]
fn mbar_degree_one_character_matches_p1() {
    let p1 = mbar_h1_character_polynomial();
    assert_eq!(eval_char_poly(&p1, &p(&[1, 1, 1, 1])), int(1));
    assert_eq!(eval_char_poly(&p1, &p(&[2, 1, 1])), int(-1));
    for n in 3..=8 {
        let chi = character(Family::Mbar, n, 1).unwrap();
        assert_eq!(as_i64(chi.at_identity()), Some(b1(n) as i64));
        for (mu, v) in chi.iter() {
            assert_eq!(&eval_char_poly(&p1, mu), v, "n={n} {mu}");
        }
    }
}

#[test]
fn decompositions_reconstruct_characters() {
    for f in Family::ALL {
        for n in 2..=6 {
            for i in 1..=2 {
                let chi = character(f, n, i).unwrap();
                let t = decompose(f, n, i).unwrap();
                assert_eq!(reconstruct(&t).unwrap(), chi, "{f} n={n} i={i}");
                assert_eq!(t.dimension(), graded_basis(f, n, i).dimension.into());
            }
        }
    }
}

#[test]
fn weights() {
    for n in 4..=9 {
        assert_eq!(weight_observed(&decompose(Family::Mbar, n, 1).unwrap()), 3);
    }
    for f in [Family::Arnold, Family::Pvb, Family::Pfb, Family::Psigma] {
        for i in 1..=2 {
            for n in 2..=7 {
                let w = weight_observed(&decompose(f, n, i).unwrap());
                assert!(w <= 2 * i, "{f} n={n} i={i}: weight {w}");
            }
        }
    }
}

#[test]
fn generation_degree_examples() {
    assert!(generation_degree_check(Family::Mbar, 1, 4, 7).unwrap());
    assert!(!generation_degree_check(Family::Mbar, 1, 3, 5).unwrap());
    assert!(generation_degree_check(Family::Mbar, 2, 7, 8).unwrap());
    assert!(matches!(generation_degree_check(Family::Mbar, 1, 6, 5), Err(Error::SizeMismatch { .. })));
}

#[test]
fn stability_reports() {
    let r = rep_stability_report(Family::Mbar, 1, 4, 9).unwrap();
    assert!(r.entries.iter().all(|e| e.holds()));
    assert!(r.entries.iter().all(|e| e.multiplicities == table(e.n, &[(&[1, 1, 1], 1)])));
    assert_eq!(r.observed_onset, Some(4));
    assert_eq!(r.guaranteed_onset, Some(6));

    let r = rep_stability_report(Family::Arnold, 1, 4, 8).unwrap();
    for e in &r.entries {
        assert_eq!(e.multiplicities, table(e.n, &[(&[], 1), (&[1], 1), (&[2], 1)]));
    }

    let r = rep_stability_report(Family::Mbar, 1, 3, 3).unwrap();
    assert!(r.entries[0].injective);
    assert_eq!(r.observed_onset, None);
}

#[test]
fn spanning_follows_from_generation_degree() {
    for f in Family::ALL {
        let r = rep_stability_report(f, 1, 3, 6).unwrap();
        for e in &r.entries {
            if generation_degree_check(f, 1, e.n, e.n + 1).unwrap() {
                assert!(e.spanning, "{f} n={}", e.n);
            }
        }
    }
}

#[test]
fn coinvariant_examples() {
    let c = coinvariant_probe(Family::Mbar, 1, 3, 0, 3).unwrap();
    assert_eq!(c.levels.iter().map(|l| l.dimension).collect::<Vec<_>>(), [0, 1, 1, 1]);
    assert!(!c.levels[0].t_iso());
    assert!(c.levels[1..].iter().all(|l| l.t_iso()));
    assert_eq!(c.levels[1].t_map.rows(), 1);

    let c = coinvariant_probe(Family::Mbar, 1, 4, 1, 4).unwrap();
    assert!(c.levels.iter().all(|l| l.dimension == 4));

    for f in Family::ALL {
        let c = coinvariant_probe(f, 1, 0, 1, 5).unwrap();
        for l in &c.levels {
            assert_eq!(l.dimension as u64, decompose(f, l.n, 1).unwrap().get(&Partition::empty()), "{f} n={}", l.n);
        }
    }
}

#[test]
fn coinvariants_match_trivial_multiplicity_of_the_acting_group() {
    // with a frozen labels the acting group is S_n; restrict the S_{a+n} character
    let (a, n) = (2usize, 3usize);
    let c = coinvariant_probe(Family::Arnold, 2, a, n, n).unwrap();
    let total = a + n;
    let chi = character(Family::Arnold, total, 2).unwrap();
    let mut sum = num_rational::BigRational::from_integer(0.into());
    let mut order = 0u64;
    for perm in permutations(n) {
        let mut full: Vec<usize> = (1..=a).collect();
        full.extend(perm.iter().map(|x| x + a));
        let mu = repstab_core::symcomb::Permutation::new(full).unwrap().cycle_type();
        sum += chi.get(&mu).clone();
        order += 1;
    }
    assert_eq!(sum / int(order as i64), int(c.levels[0].dimension as i64));
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n);
            out.push(q);
        }
    }
    out
}

#[test]
fn fit_examples() {
    let fit = fit_character_polynomial(Family::Mbar, 1, &[3, 4, 5, 6], &[7, 8], 3).unwrap();
    assert_eq!(fit.polynomial, mbar_h1_character_polynomial());
    assert!(fit.validation.passed());

    let fit = fit_character_polynomial(Family::Pvb, 1, &[2, 3, 4, 5], &[6], 2).unwrap();
    assert_eq!(fit.polynomial, CharacterPolynomial::binomial_x(1, 2).scale(&int(2)));
    assert!(fit.validation.passed());

    let fit = fit_character_polynomial(Family::M0, 1, &[2, 3, 4, 5], &[6], 2).unwrap();
    let expected = CharacterPolynomial::binomial_x(1, 2)
        .add(&CharacterPolynomial::x(2))
        .sub(&CharacterPolynomial::constant(int(1)));
    assert_eq!(fit.polynomial, expected);
    assert!(fit.validation.passed());

    let b = fit_betti_polynomial(Family::Mbar, 1, &[3, 4, 5, 6, 7], &[8, 9, 10], 3).unwrap();
    assert_eq!(b.polynomial, Polynomial::from_roots(&[1, 2, 3], frac(1, 6)));
    assert!(b.validation.passed());

    let b = fit_betti_polynomial(Family::Mbar, 0, &[3, 4, 5], &[6], 0).unwrap();
    assert_eq!(b.polynomial, Polynomial::new(vec![int(1)]));
}

#[test]
fn character_fit_at_identity_is_betti_fit() {
    let c = fit_character_polynomial(Family::Mbar, 1, &[3, 4, 5, 6], &[], 3).unwrap();
    let b = fit_betti_polynomial(Family::Mbar, 1, &[3, 4, 5, 6, 7], &[], 3).unwrap();
    assert_eq!(Polynomial::new(c.polynomial.at_identity_coefficients()), b.polynomial);
}

#[test]
fn fits_report_inconsistency() {
    // no constant matches the degree-one mbar character
    assert!(matches!(
        fit_character_polynomial(Family::Mbar, 1, &[2, 3, 4], &[], 0),
        Err(Error::Inconsistent)
    ));
    assert!(matches!(fit_betti_polynomial(Family::Mbar, 1, &[3, 4, 5, 6], &[], 1), Err(Error::Infeasible { .. })));
}

#[test]
fn exterior_cube_model() {
    for n in [3, 4, 7] {
        assert!(model_check_h1(n).unwrap());
    }
}
