use std::collections::BTreeSet;

use proptest::prelude::*;
use symqcs::rep::{induce_tail, SnModule};
use symqcs::sgroup::{all_perms, chi, coset_reps, factorial, Permutation};
use symqcs::{Field, QMatrix, Rational};

type Q = Rational;

fn q(a: i64) -> Q {
    Q::from_i64(a)
}

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> QMatrix {
    QMatrix::from_fn(rows, cols, |i, j| q(entries[i * cols + j]))
}

fn small_matrix() -> impl Strategy<Value = QMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(-2i64..=2, r * c).prop_map(move |v| matrix(r, c, &v))
    })
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    (0..factorial(n)).prop_map(move |r| Permutation::from_lex_rank(n, r))
}

/// Direct sums of trivial, sign, regular and word modules of `Σ_n`.
fn sn_module(n: usize) -> impl Strategy<Value = SnModule<Q>> {
    prop::collection::vec(0u8..4, 1..=2).prop_map(move |kinds| {
        let parts: Vec<SnModule<Q>> = kinds
            .iter()
            .map(|k| match k {
                0 => SnModule::trivial(n, 1),
                1 => SnModule::sign(n),
                2 => SnModule::regular(n),
                _ => SnModule::words(n, 2),
            })
            .collect();
        SnModule::direct_sum(&parts)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_recovers_a_preimage(a in small_matrix(), seed in prop::collection::vec(-3i64..=3, 4)) {
        let x: Vec<Q> = (0..a.cols()).map(|j| q(seed[j])).collect();
        let b = a.apply(&x);
        let y = a.solve(&b).expect("b lies in the image");
        prop_assert_eq!(a.apply(&y), b);
    }

    #[test]
    fn rank_of_kron_is_product(a in small_matrix(), b in small_matrix()) {
        prop_assert_eq!(a.kron(&b).rank(), a.rank() * b.rank());
    }

    #[test]
    fn transpose_keeps_rank(a in small_matrix()) {
        prop_assert_eq!(a.transpose().rank(), a.rank());
    }

    #[test]
    fn chi_inverse((q_, p) in (0usize..=8).prop_flat_map(|q| (Just(q), 0..=8 - q))) {
        prop_assert_eq!(chi(q_, p).inverse(), chi(p, q_));
        prop_assert!(chi(q_, p).compose(&chi(p, q_)).is_identity());
    }

    #[test]
    fn composition_is_associative(
        (a, b, c) in (1usize..=6).prop_flat_map(|n| (perm(n), perm(n), perm(n)))
    ) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn lex_rank_round_trip((n, r) in (1usize..=7).prop_flat_map(|n| (Just(n), 0..factorial(n)))) {
        prop_assert_eq!(Permutation::from_lex_rank(n, r).lex_rank(), r);
    }

    #[test]
    fn coinvariants_of_induced_modules(
        (m, extra) in (1usize..=3).prop_flat_map(|n| (sn_module(n), 0usize..=2))
    ) {
        let l = m.degree() + extra;
        let ind = induce_tail(l, &m).unwrap();
        prop_assert_eq!(ind.dim(), m.dim() * factorial(l) / factorial(m.degree()));
        prop_assert!(ind.validate().is_ok());
        prop_assert_eq!(ind.coinvariants().0, m.coinvariants().0);
    }

    #[test]
    fn maschke_average_is_an_equivariant_projection(m in (1usize..=4).prop_flat_map(sn_module)) {
        let p = m.maschke_average().unwrap();
        prop_assert_eq!(p.mul(&p), p.clone());
        for g in m.gens() {
            prop_assert_eq!(g.mul(&p), p.clone());
            prop_assert_eq!(p.mul(g), p.clone());
        }
        prop_assert_eq!(p.rank(), m.invariants().dim());
    }

    #[test]
    fn restriction_keeps_coxeter_relations(
        (m, k) in (2usize..=4).prop_flat_map(|n| (sn_module(n), 0..=n))
    ) {
        let r = m.restrict_tail(k);
        prop_assert_eq!(r.degree(), m.degree() - k);
        prop_assert!(r.validate().is_ok());
    }
}

#[test]
fn coset_reps_partition_the_group() {
    for l in 0..=6 {
        for tail in 0..=l {
            let reps = coset_reps(l, tail).unwrap();
            assert_eq!(reps.len(), factorial(l) / factorial(tail));
            let head = Permutation::identity(l - tail);
            let mut seen = BTreeSet::new();
            for g in &reps {
                for h in all_perms(tail) {
                    assert!(seen.insert(g.compose(&head.block_sum(&h)).lex_rank()), "overlap at l={l}, q={tail}");
                }
            }
            assert_eq!(seen.len(), factorial(l));
        }
    }
}
