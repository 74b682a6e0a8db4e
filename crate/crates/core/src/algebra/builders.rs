use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{AlgebraKind, SymAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::rep::{check_dim, word_of, SnModule};
use crate::scalars::Field;
use crate::sgroup::{all_perms, subsets, Permutation};
use crate::symseq::SymSeq;

/// Names of the letters of `V` for `T(V)` and `Λ(V)`.
pub fn letter_names(d: usize) -> Vec<String> {
    if d <= 4 {
        ["x", "y", "z", "w"][..d].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=d).map(|i| format!("x{i}")).collect()
    }
}

fn unit_matrix<F: Field>() -> Matrix<F> {
    Matrix::identity(1)
}

/// `T(V)` with `dim V = d`: words with the place-permutation action,
/// multiplication by concatenation.
pub fn tensor_algebra<F: Field>(d: usize, cutoff: usize) -> Result<SymAlgebra<F>> {
    let mut levels = Vec::new();
    for n in 0..=cutoff {
        check_dim(d.pow(n as u32))?;
        levels.push(SnModule::words(n, d));
    }
    let underlying = SymSeq::new(levels)?;
    let mut mults = BTreeMap::new();
    for n in 0..=cutoff {
        for m in 0..=cutoff - n {
            // Lexicographic tensor basis of words is concatenation order.
            mults.insert((n, m), Matrix::identity(d.pow((n + m) as u32)));
        }
    }
    SymAlgebra::new(AlgebraKind::Tensor { dim: d }, underlying, mults, unit_matrix())
}

/// Sorts a word of distinct letters; `None` on a repeated letter.
fn sort_with_sign(word: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut w = word.to_vec();
    let mut sign = 1;
    for end in (1..w.len()).rev() {
        for i in 0..end {
            if w[i] == w[i + 1] {
                return None;
            }
            if w[i] > w[i + 1] {
                w.swap(i, i + 1);
                sign = -sign;
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((w, sign))
}

fn increasing_words(d: usize, n: usize) -> Vec<Vec<usize>> {
    subsets(d, n).into_iter().map(|s| s.into_iter().map(|v| v - 1).collect()).collect()
}

/// The quotient map `V^{⊗n} → Λ^n V` on the basis of increasing words.
pub fn exterior_projection<F: Field>(d: usize, n: usize) -> Matrix<F> {
    let basis = increasing_words(d, n);
    let index: HashMap<Vec<usize>, usize> = basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let cols = (0..d.pow(n as u32))
        .map(|w| match sort_with_sign(&word_of(w, n, d)) {
            Some((s, sign)) => vec![(index[&s], F::from_i64(sign))],
            None => Vec::new(),
        })
        .collect();
    Matrix::from_sparse_cols(basis.len(), d.pow(n as u32), cols)
}

/// The relation subspace of `V^{⊗n}`: the Σ_n-stable span of the tensors
/// `v_1 ⊗ … ⊗ v_n` with two equal factors. Over a field it is spanned by the
/// polarizations `w + (i j)·w` of words `w`.
pub fn exterior_relations<F: Field>(d: usize, n: usize) -> Subspace<F> {
    let words = SnModule::<F>::words(n, d);
    let words = &words;
    let seeds: Vec<SparseVec<F>> = (0..d.pow(n as u32))
        .flat_map(|w| {
            (1..n).map(move |i| {
                let sw = words.gen(i).col(w);
                crate::linalg::axpy(&[(w, F::one())], &F::one(), &sw)
            })
        })
        .collect();
    words.orbit_span(seeds)
}

/// `Λ(V)` with `dim V = d`, basis of increasing words; each `s_i` acts by `−1`.
pub fn exterior_algebra<F: Field>(d: usize, cutoff: usize) -> Result<SymAlgebra<F>> {
    let dims: Vec<usize> = (0..=cutoff).map(|n| increasing_words(d, n).len()).collect();
    let levels = (0..=cutoff)
        .map(|n| SnModule::new_unchecked(n, dims[n], vec![Matrix::identity(dims[n]).scale(&-F::one()); n.saturating_sub(1)]))
        .collect();
    let underlying = SymSeq::new(levels)?;
    let mut mults = BTreeMap::new();
    for n in 0..=cutoff {
        let left = increasing_words(d, n);
        for m in 0..=cutoff - n {
            let right = increasing_words(d, m);
            let target = increasing_words(d, n + m);
            let index: HashMap<&Vec<usize>, usize> = target.iter().enumerate().map(|(i, w)| (w, i)).collect();
            let cols = left
                .iter()
                .flat_map(|a| right.iter().map(move |b| (a, b)))
                .map(|(a, b)| {
                    let mut w = a.clone();
                    w.extend(b);
                    match sort_with_sign(&w) {
                        Some((s, sign)) => vec![(index[&s], F::from_i64(sign))],
                        None => Vec::new(),
                    }
                })
                .collect();
            mults.insert((n, m), Matrix::from_sparse_cols(target.len(), left.len() * right.len(), cols));
        }
    }
    SymAlgebra::new(AlgebraKind::Exterior { dim: d }, underlying, mults, unit_matrix())
}

/// How `Σ_n` acts on `kΣ_n` in the group-algebra builder.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymGroupAction {
    /// `σ · e_ρ = e_{σρ}`.
    #[default]
    Regular,
    /// `σ · e_ρ = e_{σρσ⁻¹}`.
    Conjugation,
}

/// `kΣ_* = ⊕ kΣ_n` with `μ(σ ⊗ τ) = σ × τ` and the regular action.
pub fn sym_group_algebra<F: Field>(cutoff: usize) -> Result<SymAlgebra<F>> {
    sym_group_algebra_with(cutoff, SymGroupAction::Regular)
}

pub fn sym_group_algebra_with<F: Field>(cutoff: usize, action: SymGroupAction) -> Result<SymAlgebra<F>> {
    let mut levels = Vec::new();
    for n in 0..=cutoff {
        check_dim(crate::sgroup::factorial(n))?;
        levels.push(match action {
            SymGroupAction::Regular => SnModule::regular(n),
            SymGroupAction::Conjugation => {
                let perms = all_perms(n);
                let gens = (1..n)
                    .map(|i| {
                        let s = Permutation::transposition(n, i);
                        let targets: Vec<(usize, F)> =
                            perms.iter().map(|r| (s.compose(r).compose(&s).lex_rank(), F::one())).collect();
                        Matrix::monomial(perms.len(), &targets)
                    })
                    .collect();
                SnModule::new_unchecked(n, perms.len(), gens)
            }
        });
    }
    let underlying = SymSeq::new(levels)?;
    let perms: Vec<Vec<Permutation>> = (0..=cutoff).map(all_perms).collect();
    let mut mults = BTreeMap::new();
    for n in 0..=cutoff {
        for m in 0..=cutoff - n {
            let targets: Vec<(usize, F)> = perms[n]
                .iter()
                .flat_map(|s| perms[m].iter().map(move |t| (s.block_sum(t).lex_rank(), F::one())))
                .collect();
            mults.insert((n, m), Matrix::monomial(perms[n + m].len(), &targets));
        }
    }
    SymAlgebra::new(AlgebraKind::SymGroup { action }, underlying, mults, unit_matrix())
}

/// A graded commutative ring `k[x_1..x_r]/(monomials)` with positive
/// generator degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialRing {
    pub vars: Vec<String>,
    pub degrees: Vec<usize>,
    /// Exponent vectors of the monomial relations.
    pub relations: Vec<Vec<u32>>,
}

impl MonomialRing {
    pub fn new(vars: Vec<String>, degrees: Vec<usize>, relations: Vec<Vec<u32>>) -> Result<Self> {
        if vars.len() != degrees.len() {
            return Err(Error::Config("one degree per generator expected".into()));
        }
        if let Some(v) = vars.iter().zip(&degrees).find(|(_, &d)| d == 0) {
            return Err(Error::Config(format!(
                "generator {} has degree 0; graded pieces would be infinite-dimensional",
                v.0
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            if v.is_empty() || !seen.insert(v) {
                return Err(Error::Config(format!("generator name {v:?} is empty or repeated")));
            }
        }
        for r in &relations {
            if r.len() != vars.len() {
                return Err(Error::Config("relation exponent vector has the wrong length".into()));
            }
            if r.iter().all(|&e| e == 0) {
                return Err(Error::Config("the relation 1 = 0 leaves no algebra with E_0 = k".into()));
            }
        }
        Ok(MonomialRing { vars, degrees, relations })
    }

    pub fn polynomial(vars: &[&str]) -> Self {
        MonomialRing {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            degrees: vec![1; vars.len()],
            relations: Vec::new(),
        }
    }

    pub fn degree_of(&self, e: &[u32]) -> usize {
        e.iter().zip(&self.degrees).map(|(&a, &d)| a as usize * d).sum()
    }

    pub fn is_standard(&self, e: &[u32]) -> bool {
        !self.relations.iter().any(|r| r.iter().zip(e).all(|(a, b)| a <= b))
    }

    /// Standard monomials of degree `n`, in descending lexicographic order.
    pub fn monomials(&self, n: usize) -> Vec<Vec<u32>> {
        fn go(ring: &MonomialRing, k: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if k == ring.vars.len() {
                if left == 0 && ring.is_standard(cur) {
                    out.push(cur.clone());
                }
                return;
            }
            let d = ring.degrees[k];
            for a in (0..=left / d).rev() {
                cur.push(a as u32);
                go(ring, k + 1, left - a * d, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(self, 0, n, &mut Vec::new(), &mut out);
        out
    }

    pub fn format_monomial(&self, e: &[u32]) -> String {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(e)
            .filter(|(_, &a)| a > 0)
            .map(|(v, &a)| if a == 1 { v.clone() } else { format!("{v}^{a}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }
}

/// A graded commutative monomial ring regarded as a symmetric algebra with
/// trivial actions.
pub fn trivial_action<F: Field>(ring: &MonomialRing, cutoff: usize) -> Result<SymAlgebra<F>> {
    let ring = MonomialRing::new(ring.vars.clone(), ring.degrees.clone(), ring.relations.clone())?;
    let monos: Vec<Vec<Vec<u32>>> = (0..=cutoff).map(|n| ring.monomials(n)).collect();
    for m in &monos {
        check_dim(m.len())?;
    }
    let index: Vec<HashMap<&Vec<u32>, usize>> =
        monos.iter().map(|l| l.iter().enumerate().map(|(i, e)| (e, i)).collect()).collect();
    let levels = (0..=cutoff).map(|n| SnModule::trivial(n, monos[n].len())).collect();
    let underlying = SymSeq::new(levels)?;
    let mut mults = BTreeMap::new();
    for n in 0..=cutoff {
        for m in 0..=cutoff - n {
            let cols = monos[n]
                .iter()
                .flat_map(|a| monos[m].iter().map(move |b| (a, b)))
                .map(|(a, b)| {
                    let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    match index[n + m].get(&e) {
                        Some(&i) => vec![(i, F::one())],
                        None => Vec::new(),
                    }
                })
                .collect();
            mults.insert((n, m), Matrix::from_sparse_cols(monos[n + m].len(), monos[n].len() * monos[m].len(), cols));
        }
    }
    SymAlgebra::new(AlgebraKind::Trivial { ring }, underlying, mults, unit_matrix())
}

pub(super) fn basis_label(kind: &AlgebraKind, n: usize, i: usize) -> String {
    match kind {
        AlgebraKind::Tensor { dim } => {
            if n == 0 {
                return "1".into();
            }
            let names = letter_names(*dim);
            word_of(i, n, *dim).iter().map(|&l| names[l].clone()).collect::<Vec<_>>().join("*")
        }
        AlgebraKind::Exterior { dim } => {
            if n == 0 {
                return "1".into();
            }
            let names = letter_names(*dim);
            increasing_words(*dim, n)[i].iter().map(|&l| names[l].clone()).collect::<Vec<_>>().join("*")
        }
        AlgebraKind::SymGroup { .. } => format!("{}", Permutation::from_lex_rank(n, i)),
        AlgebraKind::Trivial { ring } => ring.format_monomial(&ring.monomials(n)[i]),
        AlgebraKind::Custom => format!("e{n}_{i}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;
    use crate::sgroup::binomial;
    use crate::symseq::SymSeqMap;

    type Q = Rational;

    #[test]
    fn exterior_dims_and_laws() {
        assert_eq!(exterior_algebra::<Q>(1, 4).unwrap().dims(), vec![1, 1, 0, 0, 0]);
        let l = exterior_algebra::<Q>(3, 4).unwrap();
        assert_eq!(l.dims(), vec![1, 3, 3, 1, 0]);
        assert!(l.check_axioms().passed);
        assert!(l.check_commutative(false).passed);
    }

    #[test]
    fn exterior_is_the_stated_quotient() {
        // The kernel of the sorting projection is exactly the relation span.
        for d in 1..=3 {
            for n in 0..=3 {
                let p = exterior_projection::<Q>(d, n);
                let rel = exterior_relations::<Q>(d, n);
                let ker = Subspace::from_vectors(p.cols(), p.kernel());
                assert_eq!(ker, rel, "d={d} n={n}");
                assert_eq!(rel.codim(), binomial(d, n));
            }
        }
    }

    #[test]
    fn projection_is_algebra_morphism() {
        let t = tensor_algebra::<Q>(2, 4).unwrap();
        let l = exterior_algebra::<Q>(2, 4).unwrap();
        let comps = (0..=4).map(|n| exterior_projection::<Q>(2, n)).collect();
        let f = SymSeqMap::new(t.underlying().clone(), l.underlying().clone(), comps).unwrap();
        assert!(t.check_morphism(&l, &f).passed);
        // A non-multiplicative levelwise map is rejected.
        let mut comps: Vec<Matrix<Q>> = (0..=4).map(|n| exterior_projection::<Q>(2, n)).collect();
        comps[2] = comps[2].scale(&Q::from_i64(2));
        let g = SymSeqMap::new(t.underlying().clone(), l.underlying().clone(), comps).unwrap();
        let r = t.check_morphism(&l, &g);
        assert!(!r.passed);
        assert!(r.cells("multiplicativity").contains(&vec![1, 1]));
    }

    #[test]
    fn group_algebra() {
        let e = sym_group_algebra::<Q>(4).unwrap();
        assert_eq!(e.dims(), vec![1, 1, 2, 6, 24]);
        assert!(e.check_axioms().passed);
        let c = sym_group_algebra_with::<Q>(4, SymGroupAction::Conjugation).unwrap();
        assert!(c.check_axioms().passed);
        assert!(c.check_commutative(false).passed);
    }

    #[test]
    fn group_algebra_regular_action_square() {
        // Oracle by hand: μ_{1,1}(id ⊗ id) = id_2 while χ_{1,1}·id_2 = [2,1]
        // under left multiplication, so the square fails at (1,1).
        let e = sym_group_algebra::<Q>(3).unwrap();
        let r = e.check_commutative(false);
        assert_eq!(r.first_violation().unwrap().cell, vec![1, 1]);
        // The naive square holds at (1,1) and first fails at (1,2).
        let n = e.check_commutative(true);
        assert!(!n.cells("commutativity square").contains(&vec![1, 1]));
        assert!(n.cells("commutativity square").contains(&vec![1, 2]));
    }

    #[test]
    fn monomial_rings() {
        let r = MonomialRing::polynomial(&["x", "y"]);
        let a = trivial_action::<Q>(&r, 4).unwrap();
        assert_eq!(a.dims(), vec![1, 2, 3, 4, 5]);
        assert!(a.check_axioms().passed);
        assert!(a.check_commutative(false).passed);
        assert!(a.check_commutative(true).passed);
        assert_eq!(r.monomials(2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let c = MonomialRing::new(vec!["x".into()], vec![1], vec![vec![3]]).unwrap();
        let b = trivial_action::<Q>(&c, 4).unwrap();
        assert_eq!(b.dims(), vec![1, 1, 1, 0, 0]);
        assert!(b.check_axioms().passed);
        assert!(MonomialRing::new(vec!["x".into()], vec![0], vec![]).is_err());
        assert!(MonomialRing::new(vec!["x".into()], vec![1], vec![vec![0]]).is_err());
    }

    #[test]
    fn tensor_algebra_small_d() {
        for d in 1..=3 {
            let t = tensor_algebra::<Q>(d, 4).unwrap();
            assert!(t.check_axioms().passed);
            assert!(t.check_commutative(false).passed);
        }
        // T(k) is commutative in the naive sense as well.
        assert!(tensor_algebra::<Q>(1, 4).unwrap().check_commutative(true).passed);
    }
}
