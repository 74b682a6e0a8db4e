use std::sync::Arc;

use super::*;
use crate::algebra::{exterior_algebra, sym_group_algebra, tensor_algebra, trivial_action, MonomialRing};
use crate::scalars::Rational;
use crate::sgroup::factorial;
use num_traits::One;

type Q = Rational;

fn t2(c: usize) -> Arc<SymAlgebra<Q>> {
    Arc::new(tensor_algebra(2, c).unwrap())
}

fn qxy(c: usize) -> Arc<SymAlgebra<Q>> {
    Arc::new(trivial_action(&MonomialRing::polynomial(&["x", "y"]), c).unwrap())
}

fn qx(c: usize) -> Arc<SymAlgebra<Q>> {
    Arc::new(trivial_action(&MonomialRing::polynomial(&["x"]), c).unwrap())
}

#[test]
fn free_modules() {
    let e = t2(4);
    assert_eq!(EModule::free(&e, 0).unwrap(), EModule::regular(&e));
    let f1 = EModule::free(&e, 1).unwrap();
    assert_eq!(f1.dim(2), 4);
    assert!(f1.check_axioms().passed);
    let s = Arc::new(sym_group_algebra::<Q>(4).unwrap());
    let g = EModule::free(&s, 1).unwrap();
    for n in 1..=4 {
        assert_eq!(g.dim(n), factorial(n));
    }
    for alg in [e, s, qxy(4), Arc::new(exterior_algebra(2, 4).unwrap())] {
        for m in 0..=3 {
            let f = EModule::free(&alg, m).unwrap();
            assert!(f.check_axioms().passed, "F_{m}");
            for n in m..=4 {
                assert_eq!(f.dim(n), factorial(n) / factorial(n - m) * alg.dim(n - m));
            }
        }
    }
    assert!(EModule::free(&qx(2), 3).is_err());
}

#[test]
fn shifts() {
    let e = t2(4);
    let f = EModule::free(&e, 1).unwrap();
    assert_eq!(f.shift(0).unwrap(), f);
    assert_eq!(f.shift(1).unwrap().shift(1).unwrap(), f.shift(2).unwrap());
    assert_eq!(f.shift(1).unwrap().dims(), f.dims()[1..].to_vec());
    assert!(f.shift(1).unwrap().check_axioms().passed);
    assert!(f.shift(5).is_err());
}

#[test]
fn corrupted_action_is_detected() {
    let e = t2(3);
    let f = EModule::free(&e, 1).unwrap();
    let mut actions = f.actions().clone();
    let a = actions[&(1, 1)].clone();
    let mut rows = a.dense_rows();
    rows[0][0] = rows[0][0].clone() + Q::from_i64(1);
    actions.insert((1, 1), Matrix::from_rows(a.rows(), a.cols(), rows).unwrap());
    let bad = EModule::new(e, f.underlying().clone(), actions).unwrap();
    assert!(!bad.check_axioms().passed);
}

#[test]
fn submodules_and_quotients() {
    let e = qxy(4);
    let m = EModule::regular(&e);
    let x = e.parse_element("x").unwrap();
    let levels = m.closure(&[(1, x.coords)]).unwrap();
    assert_eq!(levels.iter().map(Subspace::dim).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
    let (q, p) = m.quotient(&levels).unwrap();
    assert_eq!(q.dims(), vec![1, 1, 1, 1, 1]);
    assert!(q.check_axioms().passed);
    assert!(p.check().passed);
    let (s, i) = m.submodule(&levels).unwrap();
    assert!(s.check_axioms().passed && i.check().passed && i.is_injective());
}

#[test]
fn smash_with_unit_and_free() {
    let e = t2(3);
    let f1 = EModule::free(&e, 1).unwrap();
    let sm = smash_over_e(&EModule::regular(&e), &f1).unwrap();
    assert_eq!(sm.module.dims(), f1.dims());
    assert!(sm.module.check_axioms().passed);
    for (m, n) in [(0, 1), (1, 1), (1, 2), (2, 1)] {
        assert!(free_smash_iso(&e, m, n).unwrap().passed, "{m} {n}");
    }
    assert!(free_smash_iso(&qxy(3), 1, 1).unwrap().passed);
}

#[test]
fn flatness_on_an_inclusion() {
    let e = t2(3);
    let f0 = EModule::regular(&e);
    let levels = f0.closure(&[(1, vec![(0, Q::one())])]).unwrap();
    let (_, incl) = f0.submodule(&levels).unwrap();
    let f2 = EModule::free(&e, 2).unwrap();
    assert!(smash_preserves_injectivity(&f2, &incl).unwrap().passed);
}

#[test]
fn hom_from_free_is_shift() {
    let e = t2(4);
    let m = EModule::free(&e, 1).unwrap();
    for gen in 0..=2 {
        for k in 0..=4 - gen {
            let r = shift_iso_check(&m, gen, k).unwrap();
            assert!(r.passed, "{gen} {k} {:?}", r);
        }
    }
    let h = internal_hom_level(&EModule::regular(&e), &m, 2).unwrap();
    assert_eq!(h.space.dim(), m.dim(2));
    assert_eq!(h.valid_up_to, 2);
}

#[test]
fn no_maps_from_torsion_to_e() {
    let e = qx(4);
    let r = EModule::regular(&e);
    let levels = r.closure(&[(2, vec![(0, Q::one())])]).unwrap();
    let (tors, _) = r.quotient(&levels).unwrap();
    let h = hom_space(&tors, &r, 4).unwrap();
    assert_eq!(h.dim(), 0);
    let h = hom_space(&u_functor(&tors), &u_functor(&r), 4).unwrap();
    assert_eq!(h.dim(), 0);
}

#[test]
fn v_and_u() {
    let e = t2(3);
    for n in 0..=3 {
        let v = v_functor(&e, &GradedPresentation::free(&[n], 3)).unwrap();
        assert_eq!(v.module, EModule::free(&e, n).unwrap());
    }
    let v = v_functor(&e, &GradedPresentation::free(&[0, 1], 3)).unwrap();
    assert_eq!(v.module.dims(), vec![1, 3, 8, 20]);
    assert_eq!(u_functor(&EModule::free(&e, 0).unwrap()), GradedModule::regular(&e));
    let bad = GradedPresentation { cutoff: 3, gen_degrees: vec![4], relations: vec![] };
    assert!(v_functor(&e, &bad).is_err());
}

#[test]
fn presentation_round_trip() {
    let e = qxy(4);
    let a = GradedModule::regular(&e);
    let levels = a.closure(&[(2, vec![(0, Q::one())]), (2, vec![(1, Q::one())])]);
    let (m, _) = a.quotient(&levels).unwrap();
    let (pres, _) = m.presentation();
    assert_eq!(pres.gen_degrees, vec![0]);
    assert_eq!(pres.relations.len(), 2);
    assert_eq!(pres.module(&e).unwrap().dims(), m.dims());
}

#[test]
fn adjunction_triangle() {
    for e in [qxy(3), t2(3)] {
        let f = EModule::free(&e, 1).unwrap();
        let (_, r) = unit_counit(&f).unwrap();
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn suspension_modules() {
    let e = t2(3);
    let s = suspension(1, 0, &e).unwrap();
    assert_eq!(s.shifted, EModule::regular(&e));
    let s = suspension(2, 1, &e).unwrap();
    assert_eq!(s.dim(2), 4);
    assert!(s.unshifted().is_err());
    let e = qxy(4);
    let s = suspension(2, 1, &e).unwrap();
    let m = s.unshifted().unwrap();
    assert!(m.check_axioms().passed);
    let (_, r) = vu_shift_map(&m, 1).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn a_maps() {
    let e = qx(4);
    let (_, a0) = a_map(&e, 0).unwrap();
    assert!(a0.check().passed && a0.is_iso());
    let (_, a1) = a_map(&e, 1).unwrap();
    assert!(a1.check().passed);
    let (coker, _) = a1.cokernel().unwrap();
    assert_eq!(coker.dims(), vec![1, 0, 0, 0, 0]);
    for n in 0..=3 {
        let (_, v) = a_map_cokernel_torsion(&qxy(4), n).unwrap();
        assert!(v.torsion);
        assert!(v.max_annihilation().unwrap() <= n);
    }
}

#[test]
fn torsion_verdicts() {
    let e = qx(6);
    let a = GradedModule::regular(&e);
    assert!(!is_torsion(&a).unwrap().torsion);
    assert_eq!(is_torsion(&a).unwrap().annihilation[0], None);
    for n in 1..=4 {
        let (q, _) = a.quotient(&tail_levels(&a, n)).unwrap();
        let v = is_torsion(&q).unwrap();
        assert!(v.torsion);
        assert!(v.max_annihilation().unwrap() <= n);
    }
    let ks = Arc::new(sym_group_algebra::<Q>(4).unwrap());
    assert!(is_torsion(&GradedModule::regular(&ks)).is_err());
}

#[test]
fn closedness() {
    let e = qx(6);
    let a = GradedModule::regular(&e);
    assert!(is_tors_closed(&a, 3).unwrap().closed);
    let (q, _) = a.quotient(&tail_levels(&a, 1)).unwrap();
    let v = is_tors_closed(&q, 3).unwrap();
    assert!(!v.closed);
    assert!(v.failures.contains(&(1, 0)));
    assert!(is_tors_closed(&GradedModule::zero(&e, 6), 3).unwrap().closed);
}

#[test]
fn filtration_of_a_module() {
    let e = qxy(4);
    let free = GradedModule::free(&e, &[0, 1], 4).unwrap();
    let levels = free.closure(&[(2, vec![(0, Q::one()), (4, Q::from_i64(-1))])]);
    let (m, _) = free.quotient(&levels).unwrap();
    let f = Filtration::new(&m, 1);
    assert!(f.check(&m).unwrap().passed);
}

#[test]
fn graded_json_round_trip() {
    let e = qxy(3);
    let a = GradedModule::regular(&e);
    let v = serde_json::to_value(&a).unwrap();
    assert!(v.get("levels").is_some() && v.get("mult").is_some());
    assert_eq!(GradedModule::from_json(&e, &v).unwrap(), a);
    let m = EModule::free(&e, 1).unwrap();
    assert_eq!(EModule::from_json(&e, &m.to_json()).unwrap(), m);
}
