use proptest::prelude::*;
use repstab_core::algebra::{
    action_matrix, brute_force_dimension, degree_one_space, graded_basis, m0_image, presentation, pullback_matrix,
    relation_space, Family, GradedPiece,
};
use repstab_core::exactla::{axpy, induced_on_subspace, SparseVec};
use repstab_core::symcomb::{binomial, Permutation};

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

fn injection(m: usize, n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle().prop_map(move |mut v| {
        v.truncate(m);
        v
    })
}

fn level() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=6, 1usize..=2).prop_filter("keep Λ^i small", |&(n, i)| !(n == 6 && i == 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn action_is_a_homomorphism(f in family(), (n, i, s, t) in level().prop_flat_map(|(n, i)| (Just(n), Just(i), permutation(n), permutation(n)))) {
        let lhs = action_matrix(f, n, i, &s.compose(&t)).unwrap();
        let rhs = action_matrix(f, n, i, &s).unwrap().mul(&action_matrix(f, n, i, &t).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        let piece = GradedPiece::get(f, n, i);
        let q = piece.quotient_action(&s.compose(&t)).unwrap();
        let q2 = piece.quotient_action(&s).unwrap().mul(&piece.quotient_action(&t).unwrap()).unwrap();
        prop_assert_eq!(q, q2);
    }

    #[test]
    fn relations_are_invariant(f in family(), s in (2usize..=6).prop_flat_map(permutation)) {
        prop_assume!(f != Family::M0);
        let n = s.degree();
        let r = relation_space(f, n, 2).unwrap();
        let a = action_matrix(f, n, 2, &s).unwrap();
        prop_assert!(induced_on_subspace(&a, &r).is_ok());
    }

    #[test]
    fn pullbacks_compose(f in family(), i in 1usize..=2, (first, second) in (3usize..=5).prop_flat_map(|m| (injection(m, m + 1), injection(m + 1, m + 2)))) {
        let m = first.len();
        let composed: Vec<usize> = first.iter().map(|&x| second[x - 1]).collect();
        let lhs = pullback_matrix(f, &composed, m + 2, i).unwrap();
        let rhs = pullback_matrix(f, &second, m + 2, i).unwrap().mul(&pullback_matrix(f, &first, m + 1, i).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullbacks_are_equivariant(f in family(), i in 1usize..=2, s in (3usize..=5).prop_flat_map(permutation)) {
        let m = s.degree();
        let inc: Vec<usize> = (1..=m).collect();
        let p = pullback_matrix(f, &inc, m + 1, i).unwrap();
        let small = GradedPiece::get(f, m, i).quotient_action(&s).unwrap();
        let big = GradedPiece::get(f, m + 1, i).quotient_action(&s.extend(m + 1)).unwrap();
        prop_assert_eq!(p.mul(&small).unwrap(), big.mul(&p).unwrap());
    }
}

#[test]
fn identity_acts_trivially() {
    for f in Family::ALL {
        let a = action_matrix(f, 5, 2, &Permutation::identity(5)).unwrap();
        assert_eq!(a, repstab_core::exactla::SparseRationalMatrix::identity(a.rows()));
        let p = pullback_matrix(f, &[1, 2, 3, 4, 5], 5, 2).unwrap();
        assert_eq!(p, repstab_core::exactla::SparseRationalMatrix::identity(p.rows()));
    }
}

#[test]
fn graded_bases_match_brute_force() {
    for f in Family::ALL {
        for n in 0..=6 {
            for i in 0..=2 {
                assert_eq!(graded_basis(f, n, i).dimension, brute_force_dimension(f, n, i).unwrap(), "{f} n={n} i={i}");
            }
        }
    }
}

#[test]
fn five_term_relators_rewrite_to_zero() {
    for n in 5..=9 {
        let d = degree_one_space(Family::Mbar, n);
        let table = d.rewrite_table();
        let pres = presentation(Family::Mbar, n);
        assert!(!pres.linear_relators.is_empty());
        for rel in &pres.linear_relators {
            let mut acc = SparseVec::new();
            for (&g, c) in rel {
                axpy(&mut acc, c, &table[g].1);
            }
            assert!(acc.is_empty(), "n={n}");
        }
    }
}

#[test]
fn mbar_vanishes_above_real_dimension() {
    for n in 3..=7 {
        for i in (n - 2)..=(n - 1).min(5) {
            assert_eq!(graded_basis(Family::Mbar, n, i).dimension, 0, "n={n} i={i}");
        }
    }
}

#[test]
fn theta_span_is_closed() {
    for n in 2..=8 {
        let expected = binomial(n as i64, 2) - 1;
        assert_eq!(graded_basis(Family::M0, n, 1).dimension as i64, i64::try_from(expected).unwrap());
    }
    for n in 3..=6 {
        for i in 1..=2 {
            let (arnold, image) = m0_image(n, i);
            for s in Permutation::adjacent_transpositions(n) {
                assert!(induced_on_subspace(&arnold.quotient_action(&s).unwrap(), &image).is_ok());
            }
        }
    }
}

#[test]
fn graded_basis_json_shape() {
    let b = graded_basis(Family::Mbar, 5, 1);
    let v: serde_json::Value = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
    assert_eq!(v["family"], "mbar");
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["basis_monomials"][0], serde_json::json!([[1, 2, 3, 4]]));
    assert_eq!(v["relation_space_dim"], 0);
}
