use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symqcs::algebra::{tensor_algebra, trivial_action, Element, MonomialRing, SymAlgebra};
use symqcs::ideal::{sigma_closure, SigmaIdeal};
use symqcs::projtop::{d_set, monomial_family, radical_intersection_check, v_set, PrimeFamily};
use symqcs::suites::random_element;
use symqcs::Rational;

type Q = Rational;

fn ring(vars: &[&str], c: usize) -> Arc<SymAlgebra<Q>> {
    Arc::new(trivial_action(&MonomialRing::polynomial(vars), c).unwrap())
}

fn pick_algebra(which: u8) -> Arc<SymAlgebra<Q>> {
    match which {
        0 => ring(&["x", "y"], 4),
        1 => Arc::new(tensor_algebra(2, 4).unwrap()),
        _ => ring(&["x", "y", "z"], 3),
    }
}

fn random_ideal(rng: &mut ChaCha8Rng, e: &Arc<SymAlgebra<Q>>, gens: usize) -> SigmaIdeal<Q> {
    let g: Vec<Element<Q>> = (0..gens).map(|_| random_element(rng, e, 2)).collect();
    sigma_closure(e, &g).unwrap()
}

fn parsed(e: &Arc<SymAlgebra<Q>>, gens: &[&str]) -> SigmaIdeal<Q> {
    let g: Vec<Element<Q>> = gens.iter().map(|s| e.parse_element(s).unwrap()).collect();
    sigma_closure(e, &g).unwrap()
}

/// Containment of ideals compared only in degrees `≤ top`.
fn subset_below(i: &SigmaIdeal<Q>, j: &SigmaIdeal<Q>, top: usize) -> bool {
    (0..=top).all(|n| i.level(n).is_subspace_of(j.level(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn closure_is_extensive_idempotent_monotone(which in 0u8..3, seed in any::<u64>()) {
        let e = pick_algebra(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let small: Vec<Element<Q>> = (0..2).map(|_| random_element(&mut rng, &e, 2)).collect();
        let mut big = small.clone();
        big.push(random_element(&mut rng, &e, 2));
        let cs = sigma_closure(&e, &small).unwrap();
        let cb = sigma_closure(&e, &big).unwrap();
        prop_assert!(small.iter().all(|g| cs.contains(g)));
        prop_assert_eq!(cs.reclosed().unwrap().dims(), cs.dims());
        prop_assert!(cs.is_subset(&cb));
    }

    #[test]
    fn products_commute_and_associate(which in 0u8..3, seed in any::<u64>()) {
        let e = pick_algebra(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (i, j, k) = (random_ideal(&mut rng, &e, 1), random_ideal(&mut rng, &e, 1), random_ideal(&mut rng, &e, 1));
        let ij = i.product(&j).unwrap();
        let ji = j.product(&i).unwrap();
        prop_assert_eq!(ij.levels(), ji.levels());
        let (left, right) = (ij.product(&k).unwrap(), i.product(&j.product(&k).unwrap()).unwrap());
        prop_assert_eq!(left.levels(), right.levels());
        prop_assert!(ij.is_subset(&i.intersect(&j).unwrap()));
    }

    #[test]
    fn sigma_ideals_are_two_sided(which in 0u8..3, seed in any::<u64>(), gens in 1usize..=3) {
        let e = pick_algebra(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = random_ideal(&mut rng, &e, gens);
        let r = i.is_two_sided();
        prop_assert!(r.passed, "{:?}", r.violations);
    }

    /// Generators have degree ≤ 2, so every product of two of them is
    /// visible at cutoff 4.
    #[test]
    fn prime_spot_check(p in 0usize..4, seed in any::<u64>()) {
        let e = ring(&["x", "y"], 4);
        let prime = parsed(&e, &[["x"], ["y"], ["x - y"], ["x + 2*y"]][p]);
        prop_assert!(prime.is_prime_up_to(4, 0).prime);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = random_ideal(&mut rng, &e, 1).sum(&prime.product(&random_ideal(&mut rng, &e, 1)).unwrap()).unwrap();
        let j = random_ideal(&mut rng, &e, 1);
        if subset_below(&i.product(&j).unwrap(), &prime, 4) {
            prop_assert!(subset_below(&i, &prime, 4) || subset_below(&j, &prime, 4));
        }
    }

    #[test]
    fn v_reverses_inclusion(which in 0u8..2, seed in any::<u64>()) {
        let e = pick_algebra(which);
        let fam = monomial_family(&e, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = random_ideal(&mut rng, &e, 1);
        let j = i.sum(&random_ideal(&mut rng, &e, 1)).unwrap();
        let (vi, vj) = (v_set(&i, &fam).unwrap(), v_set(&j, &fam).unwrap());
        prop_assert!(vj.members.iter().all(|k| vi.members.contains(k)));
    }

    #[test]
    fn basic_opens_multiply(seed in any::<u64>()) {
        let e = ring(&["x", "y"], 4);
        let fam = PrimeFamily::new(&e, vec![parsed(&e, &["x"]), parsed(&e, &["y"]), parsed(&e, &["x - y"])], 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g) = (random_element(&mut rng, &e, 2), random_element(&mut rng, &e, 2));
        let fg = e.multiply(&f, &g).unwrap();
        let meet: Vec<usize> = d_set(&f, &fam).members.into_iter().filter(|k| d_set(&g, &fam).members.contains(k)).collect();
        prop_assert_eq!(d_set(&fg, &fam).members, meet);
    }

    /// Only ideals whose radical generators reach `I` within the cutoff.
    #[test]
    fn radical_is_the_intersection_of_primes(a in 0u32..=4, b in 0u32..=4, c in 0u32..=4, d in 0u32..=4) {
        let visible = |p: u32, q: u32| p + q > 0 && p + q <= 5 && p.max(q) * ((p > 0) as u32 + (q > 0) as u32) <= 5;
        prop_assume!(visible(a, b) && visible(c, d));
        let e = ring(&["x", "y"], 5);
        let fam = monomial_family(&e, 0).unwrap();
        let mono = |p: u32, q: u32| match (p, q) {
            (0, q) => format!("y^{q}"),
            (p, 0) => format!("x^{p}"),
            (p, q) => format!("x^{p}*y^{q}"),
        };
        let i = parsed(&e, &[&mono(a, b), &mono(c, d)]);
        let law = radical_intersection_check(&i, &fam).unwrap();
        prop_assert!(law.passed(), "{:?}", law);
    }
}
