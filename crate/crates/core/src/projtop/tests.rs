use std::sync::Arc;

use super::*;
use crate::algebra::{tensor_algebra, trivial_action, MonomialRing};
use crate::scalars::Rational;

type Q = Rational;

fn ring(vars: &[&str], c: usize) -> Arc<SymAlgebra<Q>> {
    Arc::new(trivial_action(&MonomialRing::polynomial(vars), c).unwrap())
}

fn ideal(alg: &Arc<SymAlgebra<Q>>, gens: &[&str]) -> SigmaIdeal<Q> {
    let g: Vec<Element<Q>> = gens.iter().map(|s| alg.parse_element(s).unwrap()).collect();
    sigma_closure(alg, &g).unwrap()
}

fn p1_family(e: &Arc<SymAlgebra<Q>>) -> PrimeFamily<Q> {
    PrimeFamily::new(e, vec![ideal(e, &["x"]), ideal(e, &["y"]), ideal(e, &["x - y"])], 0).unwrap()
}

#[test]
fn closed_sets() {
    let e = ring(&["x", "y"], 4);
    let fam = p1_family(&e);
    assert_eq!(fam.len(), 3);
    assert_eq!(v_set(&SigmaIdeal::zero(&e), &fam).unwrap().members, vec![0, 1, 2]);
    assert!(v_set(&SigmaIdeal::tail(&e, 1), &fam).unwrap().members.is_empty());
    assert_eq!(v_set(&ideal(&e, &["x"]), &fam).unwrap().members, vec![0]);
    assert_eq!(d_set(&e.parse_element("x").unwrap(), &fam).members, vec![1, 2]);
}

#[test]
fn family_constructor_filters() {
    let e = ring(&["x", "y"], 4);
    let fam = PrimeFamily::new(
        &e,
        vec![ideal(&e, &["x"]), ideal(&e, &["x"]), ideal(&e, &["x", "y"]), ideal(&e, &["x*y"])],
        0,
    )
    .unwrap();
    assert_eq!(fam.len(), 1);
    assert_eq!(fam.rejected.len(), 3);
    let mono = monomial_family(&e, 0).unwrap();
    assert_eq!(mono.labels(), &["(0)".to_string(), "(x)".into(), "(y)".into()]);
}

#[test]
fn topology_laws_on_p1() {
    let e = ring(&["x", "y"], 4);
    let fam = p1_family(&e);
    let ideals = vec![ideal(&e, &["x"]), ideal(&e, &["y"])];
    for law in check_topology_laws(&fam, &ideals).unwrap() {
        assert!(law.passed(), "{law:?}");
    }
    let mono = monomial_family(&e, 0).unwrap();
    for law in check_topology_laws(&mono, &[ideal(&e, &["x"]), ideal(&e, &["y"]), ideal(&e, &["x*y"])]).unwrap() {
        assert!(law.passed(), "{law:?}");
    }
}

#[test]
fn a_non_prime_member_breaks_the_product_law() {
    let e = ring(&["x", "y"], 4);
    let fam = PrimeFamily::unchecked(&e, vec![ideal(&e, &["x*y"])]).unwrap();
    let laws = check_topology_laws(&fam, &[ideal(&e, &["x"]), ideal(&e, &["y"])]).unwrap();
    assert!(!laws[0].passed());
}

#[test]
fn spectral_checks() {
    let e = ring(&["x", "y"], 4);
    let fam = p1_family(&e);
    let ideals = vec![ideal(&e, &["x"]), ideal(&e, &["y"]), ideal(&e, &["x - y"])];
    for law in check_spectral_properties(&fam, &ideals).unwrap() {
        assert!(law.passed(), "{law:?}");
    }
    let dup = PrimeFamily::unchecked(&e, vec![ideal(&e, &["x"]), ideal(&e, &["y"]), ideal(&e, &["x"])]).unwrap();
    let laws = check_spectral_properties(&dup, &ideals).unwrap();
    assert!(!laws[0].passed());
    assert!(laws[0].failures[0].contains("0 and 2"));

    let e3 = ring(&["x", "y", "z"], 4);
    let fam = PrimeFamily::new(&e3, vec![ideal(&e3, &["x"]), ideal(&e3, &["x", "y - x"])], 0).unwrap();
    assert_eq!(fam.len(), 2);
    let laws = check_spectral_properties(&fam, &[ideal(&e3, &["x"])]).unwrap();
    assert!(laws.iter().all(LawCheck::passed));
    assert!(laws[2].notes.iter().any(|n| n == "V(x) has generic point (x)"), "{:?}", laws[2].notes);
}

#[test]
fn radical_is_intersection() {
    let e = ring(&["x", "y"], 5);
    let fam = monomial_family(&e, 0).unwrap();
    for gens in [vec!["x^2"], vec!["x*y"], vec!["x^2*y"], vec!["x", "y"], vec!["x^3", "y^2"]] {
        let law = radical_intersection_check(&ideal(&e, &gens), &fam).unwrap();
        assert!(law.passed(), "{law:?}");
    }
}

#[test]
fn p1_charts() {
    let e = ring(&["x", "y"], 2);
    let x = e.parse_element("x").unwrap();
    let c = sections_commutative(&e, &x, 3).unwrap();
    assert_eq!(c.generators.len(), 1);
    assert_eq!(c.generators[0].fraction, "y/x");
    assert!(c.relations.is_empty());
    let xy = e.parse_element("x*y").unwrap();
    let c = sections_commutative(&e, &xy, 2).unwrap();
    let fr: Vec<&str> = c.generators.iter().map(|g| g.fraction.as_str()).collect();
    assert_eq!(fr, vec!["x^2/(x*y)", "y^2/(x*y)"]);
    assert_eq!(c.relation_strings(), vec!["-1 + u1*u2".to_string()]);
    let e1 = ring(&["x"], 2);
    let c = sections_commutative(&e1, &e1.parse_element("x").unwrap(), 3).unwrap();
    assert!(c.generators.is_empty() && c.relations.is_empty());
    assert!(sections_commutative(&e, &e.one(), 2).is_err());
}

#[test]
fn gluing_p1_and_p2() {
    let e = ring(&["x", "y"], 2);
    let fs = vec![e.parse_element("x").unwrap(), e.parse_element("y").unwrap()];
    let (r, g) = gluing_check(&e, &fs, 2).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(g.global_sections, Some(1));
    assert_eq!(g.restriction(&[0], &[0, 1]).images, vec!["u2".to_string()]);
    assert_eq!(g.restriction(&[1], &[0, 1]).images, vec!["u1".to_string()]);
    let e = ring(&["x", "y", "z"], 2);
    let fs: Vec<_> = ["x", "y", "z"].iter().map(|s| e.parse_element(s).unwrap()).collect();
    let (r, g) = gluing_check(&e, &fs, 1).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(g.global_sections, Some(1));
}

#[test]
fn pn_embedding() {
    for d in 1..=3 {
        let (r, data) = projective_space_embedding_check::<Q>(d, 4).unwrap();
        assert!(r.passed, "{d} {r:?}");
        assert_eq!(data.quotient_dims, data.symmetric_dims);
        assert_eq!(data.pullbacks.len(), (1 << d) - 1);
    }
    let (_, data) = projective_space_embedding_check::<Q>(2, 3).unwrap();
    assert_eq!(data.quotient_dims, vec![1, 2, 3, 4]);
    let (_, data) = projective_space_embedding_check::<Q>(1, 4).unwrap();
    assert_eq!(data.commutator_dims, vec![0; 5]);
}

#[test]
fn tensor_monomial_family() {
    let t = Arc::new(tensor_algebra::<Q>(2, 3).unwrap());
    let fam = monomial_family(&t, 0).unwrap();
    assert_eq!(fam.len(), 3);
    let ideals = vec![ideal(&t, &["x"]), ideal(&t, &["y"])];
    for law in check_topology_laws(&fam, &ideals).unwrap() {
        assert!(law.passed(), "{law:?}");
    }
    let j = serde_json::to_value(&check_topology_laws(&fam, &ideals).unwrap()[0]).unwrap();
    assert_eq!(j["status"], "verified");
    assert_eq!(j["family_size"], 3);
}
