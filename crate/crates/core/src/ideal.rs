//! Σ-ideals: subobjects of `E` stable under the group actions and right
//! multiplication.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::algebra::{kron_vec, AlgebraKind, Element, SymAlgebra};
use crate::emod::EModule;
use crate::error::{Error, Result};
use crate::linalg::{densify, sparsify, Matrix, SparseVec, Subspace};
use crate::report::Report;
use crate::scalars::Field;

#[derive(Clone, Debug)]
pub struct SigmaIdeal<F: Field> {
    algebra: Arc<SymAlgebra<F>>,
    generators: Vec<Element<F>>,
    levels: Vec<Subspace<F>>,
}

impl<F: Field> PartialEq for SigmaIdeal<F> {
    /// Levelwise equality; generators are not compared.
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels
    }
}

fn check_generators<F: Field>(alg: &SymAlgebra<F>, gens: &[Element<F>]) -> Result<()> {
    for g in gens {
        if g.degree > alg.cutoff() {
            return Err(Error::DegreeMismatch(format!(
                "generator of degree {} beyond cutoff {}",
                g.degree,
                alg.cutoff()
            )));
        }
        if g.coords.iter().any(|(i, _)| *i >= alg.dim(g.degree)) {
            return Err(Error::Argument(format!("generator coordinates out of range in degree {}", g.degree)));
        }
    }
    Ok(())
}

/// Smallest Σ-ideal containing the generators.
pub fn sigma_closure<F: Field>(alg: &Arc<SymAlgebra<F>>, gens: &[Element<F>]) -> Result<SigmaIdeal<F>> {
    check_generators(alg, gens)?;
    let e = EModule::regular(alg);
    let pairs: Vec<(usize, SparseVec<F>)> = gens.iter().map(|g| (g.degree, g.coords.clone())).collect();
    let levels = e.closure(&pairs)?;
    Ok(SigmaIdeal { algebra: alg.clone(), generators: gens.to_vec(), levels })
}

/// Closure under right multiplication only (no group actions).
pub fn right_ideal_levels<F: Field>(alg: &SymAlgebra<F>, gens: &[Element<F>]) -> Result<Vec<Subspace<F>>> {
    check_generators(alg, gens)?;
    let c = alg.cutoff();
    let mut levels: Vec<Subspace<F>> = Vec::with_capacity(c + 1);
    for n in 0..=c {
        let mut s = Subspace::zero(alg.dim(n));
        for g in gens.iter().filter(|g| g.degree == n) {
            s.insert(&g.coords);
        }
        for (i, li) in levels.iter().enumerate() {
            if i == n {
                continue;
            }
            for x in li.basis() {
                for e in 0..alg.dim(n - i) {
                    s.insert(&alg.mult(i, n - i).apply_sparse(&kron_vec(&x, &[(e, F::one())], alg.dim(n - i))));
                }
            }
        }
        levels.push(s);
    }
    Ok(levels)
}

/// Left absorption `y · x ∈ I` for basis elements, on arbitrary levelwise data.
pub fn left_absorption<F: Field>(alg: &SymAlgebra<F>, levels: &[Subspace<F>]) -> Report {
    let c = alg.cutoff();
    let mut r = Report::new("two-sided", c);
    for a in 0..=c {
        for x in levels[a].basis() {
            for b in 0..=c - a {
                for y in 0..alg.dim(b) {
                    let v = alg.mult(b, a).apply_sparse(&kron_vec(&[(y, F::one())], &x, alg.dim(a)));
                    if !levels[a + b].contains(&v) {
                        if r.passed {
                            r.note(format!(
                                "{} * {} not in I",
                                alg.basis_label(b, y),
                                alg.format_element(&Element::new(a, x.clone()))
                            ));
                        }
                        r.fail("left absorption", &[b, a]);
                        break;
                    }
                }
            }
        }
    }
    r.violations.dedup();
    r
}

/// Verdict of the cutoff primality test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeVerdict<F: Field> {
    pub prime: bool,
    /// False when some degree pair was decided by random search only.
    pub exact: bool,
    pub cutoff: usize,
    #[serde(serialize_with = "ser_witness")]
    pub witness: Option<(Element<F>, Element<F>)>,
    pub inexact_pairs: Vec<(usize, usize)>,
}

fn ser_witness<F: Field, S: Serializer>(w: &Option<(Element<F>, Element<F>)>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match w {
        None => s.serialize_none(),
        Some((x, y)) => (element_json(x), element_json(y)).serialize(s),
    }
}

pub fn element_json<F: Field>(x: &Element<F>) -> serde_json::Value {
    serde_json::json!({ "degree": x.degree, "coords": densify(&x.coords, x.coords.last().map_or(0, |c| c.0 + 1)) })
}

fn element_json_dim<F: Field>(x: &Element<F>, dim: usize) -> serde_json::Value {
    serde_json::json!({ "degree": x.degree, "coords": densify(&x.coords, dim) })
}

impl<F: Field> SigmaIdeal<F> {
    pub fn zero(alg: &Arc<SymAlgebra<F>>) -> Self {
        let levels = (0..=alg.cutoff()).map(|n| Subspace::zero(alg.dim(n))).collect();
        SigmaIdeal { algebra: alg.clone(), generators: Vec::new(), levels }
    }

    pub fn whole(alg: &Arc<SymAlgebra<F>>) -> Self {
        let levels = (0..=alg.cutoff()).map(|n| Subspace::full(alg.dim(n))).collect();
        SigmaIdeal { algebra: alg.clone(), generators: vec![alg.one()], levels }
    }

    /// `E_{≥n}`.
    pub fn tail(alg: &Arc<SymAlgebra<F>>, n: usize) -> Self {
        let levels = (0..=alg.cutoff())
            .map(|d| if d >= n { Subspace::full(alg.dim(d)) } else { Subspace::zero(alg.dim(d)) })
            .collect();
        let generators = if n <= alg.cutoff() { (0..alg.dim(n)).map(|i| Element::basis(n, i)).collect() } else { Vec::new() };
        SigmaIdeal { algebra: alg.clone(), generators, levels }
    }

    /// An ideal from levelwise data, verified to be Σ- and right-stable.
    pub fn from_levels(alg: &Arc<SymAlgebra<F>>, levels: Vec<Subspace<F>>) -> Result<Self> {
        let e = EModule::regular(alg);
        if !e.is_submodule(&levels) {
            return Err(Error::InvariantViolation("levels are not a Σ-ideal".into()));
        }
        let generators = levels
            .iter()
            .enumerate()
            .flat_map(|(d, s)| s.basis().into_iter().map(move |v| Element::new(d, v)))
            .collect();
        Ok(SigmaIdeal { algebra: alg.clone(), generators, levels })
    }

    pub fn algebra(&self) -> &Arc<SymAlgebra<F>> {
        &self.algebra
    }

    pub fn generators(&self) -> &[Element<F>] {
        &self.generators
    }

    pub fn levels(&self) -> &[Subspace<F>] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> &Subspace<F> {
        &self.levels[n]
    }

    pub fn cutoff(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Subspace::dim).collect()
    }

    pub fn contains(&self, x: &Element<F>) -> bool {
        x.degree > self.cutoff() || self.levels[x.degree].contains(&x.coords)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.levels.iter().zip(&other.levels).all(|(a, b)| a.is_subspace_of(b))
    }

    pub fn contains_positive(&self) -> bool {
        (1..=self.cutoff()).all(|n| self.levels[n].is_full())
    }

    /// Regenerates the levels from the stored generators.
    pub fn reclosed(&self) -> Result<Self> {
        sigma_closure(&self.algebra, &self.generators)
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch("ideals of different algebras".into()))
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let levels = self.levels.iter().zip(&other.levels).map(|(a, b)| a.sum(b)).collect();
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        Ok(SigmaIdeal { algebra: self.algebra.clone(), generators, levels })
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let levels = self.levels.iter().zip(&other.levels).map(|(a, b)| a.intersect(b)).collect();
        SigmaIdeal::from_levels(&self.algebra, levels)
    }

    /// `IJ`: the Σ-closure of all products `x·y`, `x ∈ I`, `y ∈ J`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let alg = &self.algebra;
        let c = self.cutoff();
        let mut gens = Vec::new();
        for a in 0..=c {
            let xs = self.levels[a].basis();
            if xs.is_empty() {
                continue;
            }
            for b in 0..=c - a {
                for y in other.levels[b].basis() {
                    for x in &xs {
                        let p = alg.mult(a, b).apply_sparse(&kron_vec(x, &y, alg.dim(b)));
                        if !p.is_empty() {
                            gens.push(Element::new(a + b, p));
                        }
                    }
                }
            }
        }
        let mut out = sigma_closure(alg, &gens)?;
        out.generators = gens;
        Ok(out)
    }

    /// Left absorption, which holds for Σ-ideals of commutative algebras.
    pub fn is_two_sided(&self) -> Report {
        left_absorption(&self.algebra, &self.levels)
    }

    /// For all `a + b ≤ cutoff`: no `x ∉ P_a`, `y ∉ P_b` with `x·y ∈ P`.
    pub fn is_prime_up_to(&self, cutoff: usize, seed: u64) -> PrimeVerdict<F> {
        let alg = &self.algebra;
        let c = cutoff.min(self.cutoff());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut inexact = Vec::new();
        let monomial = matches!(alg.kind(), AlgebraKind::Tensor { .. } | AlgebraKind::Trivial { .. })
            && self.levels.iter().all(Subspace::is_coordinate);
        for t in 0..=c {
            for a in 0..=t {
                let b = t - a;
                let (qa, qb, qt) = (&self.levels[a], &self.levels[b], &self.levels[t]);
                let (ca, cb) = (qa.quotient_cols(), qb.quotient_cols());
                if ca.is_empty() || cb.is_empty() {
                    continue;
                }
                let proj = qt.quotient_map();
                let mu = alg.mult(a, b);
                let db = alg.dim(b);
                // Matrix of (x ⊗ y) ↦ [x·y] on complement bases.
                let prod = |x: &[(usize, F)], y: &[(usize, F)]| proj.apply_sparse(&mu.apply_sparse(&kron_vec(x, y, db)));
                let pencil_cols: Vec<SparseVec<F>> = ca
                    .iter()
                    .flat_map(|&i| cb.iter().map(move |&j| (i, j)))
                    .map(|(i, j)| prod(&[(i, F::one())], &[(j, F::one())]))
                    .collect();
                let pencil = Matrix::from_sparse_cols(proj.rows(), pencil_cols.len(), pencil_cols);
                if pencil.rank() == ca.len() * cb.len() {
                    continue;
                }
                let lift = |cols: &[usize], v: &[(usize, F)]| -> SparseVec<F> {
                    v.iter().map(|(k, a)| (cols[*k], a.clone())).collect()
                };
                // x fixed in a one-dimensional quotient, or y fixed.
                let left_kernel = |x: &SparseVec<F>| -> Option<SparseVec<F>> {
                    let cols = cb.iter().map(|&j| prod(x, &[(j, F::one())])).collect();
                    let m = Matrix::from_sparse_cols(proj.rows(), cb.len(), cols);
                    m.kernel().into_iter().next().map(|k| lift(&cb, &k))
                };
                let right_kernel = |y: &SparseVec<F>| -> Option<SparseVec<F>> {
                    let cols = ca.iter().map(|&i| prod(&[(i, F::one())], y)).collect();
                    let m = Matrix::from_sparse_cols(proj.rows(), ca.len(), cols);
                    m.kernel().into_iter().next().map(|k| lift(&ca, &k))
                };
                let found = |x: SparseVec<F>, y: SparseVec<F>| Some((Element::new(a, x), Element::new(b, y)));
                let mut witness = None;
                if ca.len() == 1 {
                    let x = vec![(ca[0], F::one())];
                    if let Some(y) = left_kernel(&x) {
                        witness = found(x, y);
                    }
                } else if cb.len() == 1 {
                    let y = vec![(cb[0], F::one())];
                    if let Some(x) = right_kernel(&y) {
                        witness = found(x, y);
                    }
                } else if monomial {
                    'outer: for &i in &ca {
                        for &j in &cb {
                            if prod(&[(i, F::one())], &[(j, F::one())]).is_empty() {
                                witness = found(vec![(i, F::one())], vec![(j, F::one())]);
                                break 'outer;
                            }
                        }
                    }
                } else {
                    let mut trials: Vec<SparseVec<F>> = ca.iter().map(|&i| vec![(i, F::one())]).collect();
                    for _ in 0..16 {
                        trials.push(ca.iter().map(|&i| (i, F::from_i64(rng.gen_range(-3..=3)))).filter(|(_, v)| !v.is_zero()).collect());
                    }
                    for x in trials.into_iter().filter(|x| !x.is_empty()) {
                        if let Some(y) = left_kernel(&x) {
                            witness = found(x, y);
                            break;
                        }
                    }
                    if witness.is_none() {
                        inexact.push((a, b));
                    }
                }
                if let Some(w) = witness {
                    return PrimeVerdict { prime: false, exact: true, cutoff: c, witness: Some(w), inexact_pairs: inexact };
                }
            }
        }
        PrimeVerdict { prime: true, exact: inexact.is_empty(), cutoff: c, witness: None, inexact_pairs: inexact }
    }

    /// Σ-closure of `I` and every basis element some power of which lies in `I`.
    pub fn radical_up_to(&self, cutoff: usize) -> Result<Self> {
        let alg = &self.algebra;
        let c = cutoff.min(self.cutoff());
        let mut gens = self.generators.clone();
        for d in 1..=c {
            for i in 0..alg.dim(d) {
                let b = Element::basis(d, i);
                if self.contains(&b) {
                    continue;
                }
                let mut p = b.clone();
                for _ in 2..=c / d {
                    p = alg.multiply(&p, &b).expect("within cutoff");
                    if self.contains(&p) {
                        gens.push(b.clone());
                        break;
                    }
                }
            }
        }
        let mut out = sigma_closure(alg, &gens)?;
        out.levels = out.levels.iter().zip(&self.levels).map(|(a, b)| a.sum(b)).collect();
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let gens: Vec<serde_json::Value> =
            self.generators.iter().map(|g| element_json_dim(g, self.algebra.dim(g.degree))).collect();
        let levels: Vec<Matrix<F>> = self.levels.iter().map(Subspace::basis_matrix).collect();
        serde_json::json!({ "generators": gens, "levels": levels })
    }
}

impl<F: Field> Serialize for SigmaIdeal<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Parses `{"degree": d, "coords": [...]}`.
pub fn element_from_json<F: Field>(alg: &SymAlgebra<F>, v: &serde_json::Value) -> Result<Element<F>> {
    #[derive(serde::Deserialize)]
    #[serde(bound = "F: Field")]
    struct Raw<F: Field> {
        degree: usize,
        coords: Vec<F>,
    }
    let raw: Raw<F> = serde_json::from_value(v.clone())?;
    if raw.degree > alg.cutoff() || raw.coords.len() != alg.dim(raw.degree) {
        return Err(Error::Schema(format!("element of degree {} has the wrong length", raw.degree)));
    }
    Ok(Element::new(raw.degree, sparsify(&raw.coords)))
}

/// Whether the Σ-closure of `gens` contains `E_{≥1}` up to the cutoff;
/// reports the first degree where it does not.
pub fn is_finitely_sigma_generated<F: Field>(alg: &Arc<SymAlgebra<F>>, gens: &[Element<F>], cutoff: usize) -> Result<Report> {
    let i = sigma_closure(alg, gens)?;
    let c = cutoff.min(alg.cutoff());
    let mut r = Report::new("finitely sigma-generated", c);
    if let Some(d) = (1..=c).find(|&d| !i.level(d).is_full()) {
        r.fail("contains E_{>=1}", &[d]);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sym_group_algebra, tensor_algebra, trivial_action, MonomialRing};
    use crate::scalars::Rational;
    use num_traits::One;

    type Q = Rational;

    fn qxy(c: usize) -> Arc<SymAlgebra<Q>> {
        Arc::new(trivial_action(&MonomialRing::polynomial(&["x", "y"]), c).unwrap())
    }

    fn el(alg: &SymAlgebra<Q>, s: &str) -> Element<Q> {
        alg.parse_element(s).unwrap()
    }

    #[test]
    fn closures() {
        let e = qxy(4);
        assert_eq!(sigma_closure(&e, &[el(&e, "x")]).unwrap().dims(), vec![0, 1, 2, 3, 4]);
        let t = Arc::new(tensor_algebra::<Q>(2, 3).unwrap());
        assert_eq!(sigma_closure(&t, &[el(&t, "x*y")]).unwrap().dims(), vec![0, 0, 2, 6]);
        let s = Arc::new(sym_group_algebra::<Q>(4).unwrap());
        let i = sigma_closure(&s, &[Element::basis(1, 0)]).unwrap();
        assert_eq!(i, SigmaIdeal::tail(&s, 1));
        assert!(sigma_closure(&e, &[Element::new(5, vec![])]).is_err());
    }

    #[test]
    fn products() {
        let t = Arc::new(tensor_algebra::<Q>(2, 4).unwrap());
        let x = sigma_closure(&t, &[el(&t, "x")]).unwrap();
        let y = sigma_closure(&t, &[el(&t, "y")]).unwrap();
        let xy = sigma_closure(&t, &[el(&t, "x*y")]).unwrap();
        assert_eq!(x.product(&y).unwrap(), xy);
        assert_eq!(y.product(&x).unwrap(), xy);
        assert_eq!(x.product(&SigmaIdeal::whole(&t)).unwrap(), x);
        assert!(x.product(&y).unwrap().is_subset(&x.intersect(&y).unwrap()));
    }

    #[test]
    fn two_sidedness() {
        let t = Arc::new(tensor_algebra::<Q>(2, 3).unwrap());
        assert!(sigma_closure(&t, &[el(&t, "x*y")]).unwrap().is_two_sided().passed);
        assert!(SigmaIdeal::zero(&t).is_two_sided().passed);
        let naive = right_ideal_levels(&t, &[el(&t, "x")]).unwrap();
        let r = left_absorption(&t, &naive);
        assert!(!r.passed);
        assert!(r.cells("left absorption").contains(&vec![1, 1]));
    }

    #[test]
    fn primality() {
        let e = qxy(5);
        let x = sigma_closure(&e, &[el(&e, "x")]).unwrap();
        let v = x.is_prime_up_to(5, 0);
        assert!(v.prime && v.exact);
        let xm = sigma_closure(&e, &[el(&e, "x - y")]).unwrap();
        assert!(xm.is_prime_up_to(5, 0).prime);
        let x2 = sigma_closure(&e, &[el(&e, "x^2")]).unwrap();
        let v = x2.is_prime_up_to(5, 0);
        assert!(!v.prime);
        let (a, b) = v.witness.unwrap();
        assert!(x2.contains(&e.multiply(&a, &b).unwrap()) && !x2.contains(&a) && !x2.contains(&b));
        let xy = sigma_closure(&e, &[el(&e, "x*y")]).unwrap();
        assert!(!xy.is_prime_up_to(4, 0).prime);
        for alg in [e.clone(), Arc::new(tensor_algebra::<Q>(2, 4).unwrap())] {
            assert!(SigmaIdeal::tail(&alg, 1).is_prime_up_to(4, 0).prime);
        }
    }

    #[test]
    fn sym_group_zero_ideal_has_no_graded_zero_divisors() {
        let s = Arc::new(sym_group_algebra::<Q>(4).unwrap());
        let v = SigmaIdeal::zero(&s).is_prime_up_to(4, 0);
        assert!(v.prime && v.exact);
        let x = Element::new(2, vec![(0, Q::one()), (1, Q::one())]);
        let y = Element::new(2, vec![(0, Q::one()), (1, -Q::one())]);
        assert!(!s.multiply(&x, &y).unwrap().is_zero());
    }

    #[test]
    fn radicals() {
        let e = Arc::new(trivial_action::<Q>(&MonomialRing::polynomial(&["x"]), 6).unwrap());
        let i = sigma_closure(&e, &[el(&e, "x^2")]).unwrap();
        let r = i.radical_up_to(6).unwrap();
        assert_eq!(r, sigma_closure(&e, &[el(&e, "x")]).unwrap());
        let p = sigma_closure(&e, &[el(&e, "x")]).unwrap();
        assert_eq!(p.radical_up_to(6).unwrap(), p);
    }

    #[test]
    fn finite_generation() {
        let s = Arc::new(sym_group_algebra::<Q>(4).unwrap());
        assert!(is_finitely_sigma_generated(&s, &[Element::basis(1, 0)], 4).unwrap().passed);
        let t = Arc::new(tensor_algebra::<Q>(2, 4).unwrap());
        assert!(is_finitely_sigma_generated(&t, &[el(&t, "x"), el(&t, "y")], 4).unwrap().passed);
        let r = is_finitely_sigma_generated(&t, &[el(&t, "x")], 4).unwrap();
        assert_eq!(r.first_violation().unwrap().cell, vec![1]);
    }

    #[test]
    fn json_shape() {
        let e = qxy(3);
        let i = sigma_closure(&e, &[el(&e, "x")]).unwrap();
        let v = i.to_json();
        assert_eq!(v["generators"][0]["degree"], 1);
        assert_eq!(v["levels"].as_array().unwrap().len(), 4);
        let g = element_from_json(&e, &v["generators"][0]).unwrap();
        assert_eq!(g, el(&e, "x"));
    }
}
