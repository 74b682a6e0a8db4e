use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use symqcs::algebra::{
    exterior_algebra, exterior_projection, sym_group_algebra_with, tensor_algebra, trivial_action, MonomialRing,
    SymAlgebra, SymGroupAction,
};
use symqcs::emod::{is_tors_closed, unit_counit, EModule, GradedModule};
use symqcs::rep::SnModule;
use symqcs::symseq::{associator, day_tensor, hexagon_holds, twist, SymSeq, SymSeqMap};
use symqcs::{Field, Matrix, Rational, SparseVec};

type Q = Rational;

fn q(a: i64) -> Q {
    Q::from_i64(a)
}

/// Each level is zero, trivial, sign, or trivial plus sign.
fn symseq(cutoff: usize) -> impl Strategy<Value = SymSeq<Q>> {
    prop::collection::vec(0u8..4, cutoff + 1).prop_map(|kinds| {
        let levels = kinds
            .iter()
            .enumerate()
            .map(|(n, k)| match k {
                0 => SnModule::zero(n),
                1 => SnModule::trivial(n, 1),
                2 => SnModule::sign(n),
                _ => SnModule::direct_sum(&[SnModule::trivial(n, 1), SnModule::sign(n)]),
            })
            .collect();
        SymSeq::new(levels).unwrap()
    })
}

fn ring(vars: &[&str], c: usize) -> Arc<SymAlgebra<Q>> {
    Arc::new(trivial_action(&MonomialRing::polynomial(vars), c).unwrap())
}

/// A few random elements of a module, as `(level, coordinates)`.
fn random_gens(m: &EModule<Q>, picks: &[(usize, usize, i64)]) -> Vec<(usize, SparseVec<Q>)> {
    picks
        .iter()
        .filter_map(|&(n, i, a)| {
            let n = n % (m.cutoff() + 1);
            let d = m.dim(n);
            (d > 0 && a != 0).then(|| (n, vec![(i % d, q(a))]))
        })
        .collect()
}

fn algebras(c: usize) -> Vec<(String, SymAlgebra<Q>)> {
    let mut out = Vec::new();
    for d in 1..=3 {
        out.push((format!("T({d})"), tensor_algebra(d, c).unwrap()));
        out.push((format!("Lambda({d})"), exterior_algebra(d, c).unwrap()));
    }
    out.push(("QS".into(), sym_group_algebra_with(c, SymGroupAction::Regular).unwrap()));
    out.push(("QS conj".into(), sym_group_algebra_with(c, SymGroupAction::Conjugation).unwrap()));
    out.push(("Q[x,y]".into(), trivial_action(&MonomialRing::polynomial(&["x", "y"]), c).unwrap()));
    out.push(("Q[x]/(x^3)".into(), trivial_action(&MonomialRing::new(vec!["x".into()], vec![1], vec![vec![3]]).unwrap(), c).unwrap()));
    out
}

#[test]
fn every_builder_satisfies_the_axioms() {
    for c in 0..=5 {
        for (name, a) in algebras(c) {
            let r = a.check_axioms();
            assert!(r.passed, "{name} at cutoff {c}: {:?}", r.violations);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn associator_is_an_equivariant_iso(a in symseq(4), b in symseq(4), c in symseq(4)) {
        let ab_c = day_tensor(&day_tensor(&a, &b).unwrap(), &c).unwrap();
        let a_bc = day_tensor(&a, &day_tensor(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c.dims(), a_bc.dims());
        let alpha = associator(&a, &b, &c).unwrap();
        prop_assert!(alpha.is_equivariant());
        prop_assert!(alpha.is_iso());
    }

    #[test]
    fn hexagon(a in symseq(4), b in symseq(4), c in symseq(4)) {
        prop_assert!(hexagon_holds(&a, &b, &c).unwrap());
    }

    #[test]
    fn twist_is_an_involution(a in symseq(5), b in symseq(5)) {
        let t = twist(&a, &b).unwrap();
        prop_assert!(t.is_equivariant());
        let back = t.then(&twist(&b, &a).unwrap());
        prop_assert!(back.components.iter().all(Matrix::is_identity));
    }

    #[test]
    fn exterior_projection_is_a_morphism(d in 2usize..=3, c in 2usize..=4, scale in 2i64..=5) {
        let t = tensor_algebra::<Q>(d, c).unwrap();
        let l = exterior_algebra::<Q>(d, c).unwrap();
        let comps: Vec<Matrix<Q>> = (0..=c).map(|n| exterior_projection(d, n)).collect();
        let f = SymSeqMap::new(t.underlying().clone(), l.underlying().clone(), comps.clone()).unwrap();
        prop_assert!(t.check_morphism(&l, &f).passed);
        let mut bad = comps;
        bad[1] = bad[1].scale(&q(scale));
        let g = SymSeqMap::new(t.underlying().clone(), l.underlying().clone(), bad).unwrap();
        prop_assert!(!t.check_morphism(&l, &g).passed);
    }

    #[test]
    fn corrupted_actions_are_detected(
        (n, m) in (1usize..=4).prop_flat_map(|n| (Just(n), 0..=4 - n)),
        i in 0usize..64,
        j in 0usize..64,
        delta in prop_oneof![-3i64..=-1, 1i64..=3],
    ) {
        let e = Arc::new(tensor_algebra::<Q>(2, 4).unwrap());
        let f = EModule::free(&e, 1).unwrap();
        let a = f.action(n, m);
        let (i, j) = (i % a.rows(), j % a.cols());
        let mut rows = a.dense_rows();
        rows[i][j] = rows[i][j].clone() + q(delta);
        let mut actions: BTreeMap<_, _> = f.actions().clone();
        actions.insert((n, m), Matrix::from_rows(a.rows(), a.cols(), rows).unwrap());
        let bad = EModule::new(e.clone(), f.underlying().clone(), actions);
        prop_assert!(bad.map_or(true, |b| !b.check_axioms().passed));
    }

    #[test]
    fn adjunction_triangle(
        two_vars in any::<bool>(),
        rank in 1usize..=2,
        picks in prop::collection::vec((0usize..5, 0usize..8, -2i64..=2), 0..4),
    ) {
        let e = if two_vars { ring(&["x", "y"], 4) } else { Arc::new(tensor_algebra::<Q>(1, 4).unwrap()) };
        let free = EModule::direct_sum(&vec![EModule::regular(&e); rank]).unwrap();
        let (m, _) = free.quotient_by_elements(&random_gens(&free, &picks)).unwrap();
        let (_, r) = unit_counit(&m).unwrap();
        prop_assert!(r.passed, "{:?}", r.violations);
    }

    #[test]
    fn closedness_survives_shifts(
        degrees in prop::collection::vec(0usize..=2, 1..=2),
        picks in prop::collection::vec((0usize..7, 0usize..4, -2i64..=2), 0..3),
        k in 1usize..=2,
    ) {
        let e = ring(&["x"], 6);
        let free = GradedModule::free(&e, &degrees, 6).unwrap();
        let gens: Vec<(usize, SparseVec<Q>)> = picks
            .iter()
            .filter_map(|&(n, i, a)| (free.dim(n) > 0 && a != 0).then(|| (n, vec![(i % free.dim(n), q(a))])))
            .collect();
        let (m, _) = free.quotient(&free.closure(&gens)).unwrap();
        let v = is_tors_closed(&m, 2).unwrap();
        let w = is_tors_closed(&m.shift(k).unwrap(), 2).unwrap();
        for &(n, d) in &w.failures {
            prop_assert!(v.failures.contains(&(n, d + k)), "{:?} vs {:?}", w.failures, v.failures);
        }
        if v.closed {
            prop_assert!(w.closed);
        }
    }
}
