//! Finite-dimensional representations of symmetric groups, stored through
//! the action matrices of the adjacent transpositions.

use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::scalars::{invertible_factorial, Field};
use crate::sgroup::{all_perms, coset_reps, factorial, shuffles, tail_decompose, young_decompose, Permutation};

/// Default bound on any single level dimension.
pub const DEFAULT_MAX_DIM: usize = 5000;

/// Dimension cap read from `SYMQCS_MAX_DIM`.
pub fn max_dim() -> usize {
    std::env::var("SYMQCS_MAX_DIM")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

pub fn check_dim(dim: usize) -> Result<()> {
    let cap = max_dim();
    if dim > cap {
        Err(Error::DimensionCap { dim, cap })
    } else {
        Ok(())
    }
}

/// A representation of `Σ_n` on `F^dim`.
#[derive(Clone, Debug)]
pub struct SnModule<F: Field> {
    n: usize,
    dim: usize,
    gens: Vec<Matrix<F>>,
}

impl<F: Field> SnModule<F> {
    /// Validates shapes, involutions, braid and far-commutation relations.
    pub fn new(n: usize, dim: usize, gens: Vec<Matrix<F>>) -> Result<Self> {
        if gens.len() != n.saturating_sub(1) {
            return Err(Error::InvariantViolation(format!(
                "Σ_{n} needs {} generator matrices, got {}",
                n.saturating_sub(1),
                gens.len()
            )));
        }
        let gens = gens
            .into_iter()
            .map(|g| g.with_shape(dim, dim))
            .collect::<Result<Vec<_>>>()?;
        let m = SnModule { n, dim, gens };
        m.validate()?;
        Ok(m)
    }

    pub fn new_unchecked(n: usize, dim: usize, gens: Vec<Matrix<F>>) -> Self {
        debug_assert_eq!(gens.len(), n.saturating_sub(1));
        SnModule { n, dim, gens }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvariantViolation(what));
        for (i, g) in self.gens.iter().enumerate() {
            if !g.mul(g).is_identity() {
                return bad(format!("s_{} does not square to the identity", i + 1));
            }
        }
        for i in 0..self.gens.len() {
            for j in i + 1..self.gens.len() {
                let (a, b) = (&self.gens[i], &self.gens[j]);
                if j == i + 1 {
                    if a.mul(b).mul(a) != b.mul(a).mul(b) {
                        return bad(format!("braid relation fails for s_{} and s_{}", i + 1, j + 1));
                    }
                } else if a.mul(b) != b.mul(a) {
                    return bad(format!("s_{} and s_{} do not commute", i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    pub fn zero(n: usize) -> Self {
        Self::trivial(n, 0)
    }

    pub fn trivial(n: usize, dim: usize) -> Self {
        SnModule { n, dim, gens: vec![Matrix::identity(dim); n.saturating_sub(1)] }
    }

    pub fn sign(n: usize) -> Self {
        SnModule { n, dim: 1, gens: vec![Matrix::scalar(-F::one()); n.saturating_sub(1)] }
    }

    /// `kΣ_n` with `σ·e_ρ = e_{σρ}`, basis in lexicographic order.
    pub fn regular(n: usize) -> Self {
        let perms = all_perms(n);
        let gens = (1..n)
            .map(|i| {
                let s = Permutation::transposition(n, i);
                let targets: Vec<(usize, F)> =
                    perms.iter().map(|r| (s.compose(r).lex_rank(), F::one())).collect();
                Matrix::monomial(perms.len(), &targets)
            })
            .collect();
        SnModule { n, dim: perms.len(), gens }
    }

    /// Permutation representation on `d`-letter words of length `n`.
    pub fn words(n: usize, d: usize) -> Self {
        let dim = d.pow(n as u32);
        let gens = (1..n)
            .map(|i| {
                let targets: Vec<(usize, F)> = (0..dim)
                    .map(|w| {
                        let mut letters = word_of(w, n, d);
                        letters.swap(i - 1, i);
                        (index_of_word(&letters, d), F::one())
                    })
                    .collect();
                Matrix::monomial(dim, &targets)
            })
            .collect();
        SnModule { n, dim, gens }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Matrix<F>] {
        &self.gens
    }

    /// Matrix of `s_i` (1-based).
    pub fn gen(&self, i: usize) -> &Matrix<F> {
        &self.gens[i - 1]
    }

    pub fn action_of(&self, s: &Permutation) -> Result<Matrix<F>> {
        if s.degree() != self.n {
            return Err(Error::DegreeMismatch(format!(
                "permutation of degree {} acting on a Σ_{} module",
                s.degree(),
                self.n
            )));
        }
        let mut acc = Matrix::identity(self.dim);
        for i in s.reduced_word() {
            acc = self.gens[i - 1].mul(&acc);
        }
        Ok(acc)
    }

    pub fn act(&self, s: &Permutation, v: &[(usize, F)]) -> SparseVec<F> {
        assert_eq!(s.degree(), self.n, "degree mismatch");
        let mut v = v.to_vec();
        for i in s.reduced_word() {
            v = self.gens[i - 1].apply_sparse(&v);
        }
        v
    }

    /// Whether `f: self → other` commutes with all generators.
    pub fn is_hom_to(&self, other: &Self, f: &Matrix<F>) -> bool {
        self.n == other.n
            && f.cols() == self.dim
            && f.rows() == other.dim
            && self.gens.iter().zip(&other.gens).all(|(a, b)| f.mul(a) == b.mul(f))
    }

    /// Restriction along `Σ_{n−k} → Σ_n`, `τ ↦ 1_k × τ`.
    pub fn restrict_tail(&self, k: usize) -> Self {
        assert!(k <= self.n, "restriction beyond degree");
        let gens = if self.n - k >= 2 { self.gens[k..].to_vec() } else { Vec::new() };
        SnModule { n: self.n - k, dim: self.dim, gens }
    }

    /// Restriction to the Young subgroup `Σ_p × Σ_{n−p}`.
    pub fn restrict_young(&self, p: usize) -> YoungModule<F> {
        let q = self.n - p;
        let left = self.gens[..p.saturating_sub(1)].to_vec();
        let right = if q >= 2 { self.gens[p..].to_vec() } else { Vec::new() };
        YoungModule { p, q, dim: self.dim, left, right }
    }

    pub fn direct_sum(parts: &[Self]) -> Self {
        let n = parts.first().map_or(0, |m| m.n);
        assert!(parts.iter().all(|m| m.n == n), "degree mismatch in direct sum");
        let dim = parts.iter().map(|m| m.dim).sum();
        let gens = (0..n.saturating_sub(1))
            .map(|i| Matrix::block_diag(&parts.iter().map(|m| m.gens[i].clone()).collect::<Vec<_>>()))
            .collect();
        SnModule { n, dim, gens }
    }

    /// Whether a subspace is stable under all generators.
    pub fn is_stable(&self, s: &Subspace<F>) -> bool {
        s.basis().iter().all(|v| self.gens.iter().all(|g| s.contains(&g.apply_sparse(v))))
    }

    /// Smallest stable subspace containing the given vectors.
    pub fn orbit_span(&self, vs: impl IntoIterator<Item = SparseVec<F>>) -> Subspace<F> {
        let mut s = Subspace::zero(self.dim);
        let mut queue: Vec<SparseVec<F>> = vs.into_iter().collect();
        while let Some(v) = queue.pop() {
            if s.insert(&v) {
                for g in &self.gens {
                    queue.push(g.apply_sparse(&v));
                }
            }
        }
        s
    }

    /// A stable subspace as a module in its own right, on the canonical basis
    /// of the subspace; also returns the inclusion matrix.
    pub fn submodule(&self, s: &Subspace<F>) -> (Self, Matrix<F>) {
        debug_assert!(self.is_stable(s));
        let incl = s.basis_matrix();
        let pivots = s.echelon().pivot_cols();
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let cols = s
                    .basis()
                    .iter()
                    .map(|v| {
                        let w = g.apply_sparse(v);
                        coords_in_basis(&w, &pivots)
                    })
                    .collect();
                Matrix::from_sparse_cols(s.dim(), s.dim(), cols)
            })
            .collect();
        (SnModule { n: self.n, dim: s.dim(), gens }, incl)
    }

    /// Quotient by a stable subspace, with the projection matrix.
    pub fn quotient(&self, s: &Subspace<F>) -> (Self, Matrix<F>) {
        debug_assert!(self.is_stable(s));
        let proj = s.quotient_map();
        let lift = s.quotient_lift();
        let gens = self.gens.iter().map(|g| proj.mul(g).mul(&lift)).collect();
        (SnModule { n: self.n, dim: s.codim(), gens }, proj)
    }

    /// Span of `v − s_i v`.
    pub fn coinvariant_relations(&self) -> Subspace<F> {
        let mut s = Subspace::zero(self.dim);
        for g in &self.gens {
            for j in 0..self.dim {
                let mut v = g.col(j);
                v = crate::linalg::axpy(&[(j, F::one())], &-F::one(), &v);
                s.insert(&v);
            }
        }
        s
    }

    /// `M/⟨m − σ(m)⟩`: the quotient dimension and the projection.
    pub fn coinvariants(&self) -> (usize, Matrix<F>) {
        let rel = self.coinvariant_relations();
        (rel.codim(), rel.quotient_map())
    }

    /// Vectors fixed by every generator.
    pub fn invariants(&self) -> Subspace<F> {
        let blocks: Vec<Matrix<F>> =
            self.gens.iter().map(|g| g.sub(&Matrix::identity(self.dim))).collect();
        let stacked = Matrix::vstack(&blocks, self.dim);
        Subspace::from_vectors(self.dim, stacked.kernel())
    }

    /// `(1/n!) Σ_σ σ`.
    pub fn maschke_average(&self) -> Result<Matrix<F>> {
        if !invertible_factorial::<F>(self.n) {
            return Err(Error::UnsupportedCharacteristic(F::characteristic(), self.n));
        }
        let mut acc = Matrix::zeros(self.dim, self.dim);
        for s in all_perms(self.n) {
            acc = acc.add(&self.action_of(&s)?);
        }
        let c = F::one() / F::from_i64(factorial(self.n) as i64);
        Ok(acc.scale(&c))
    }
}

impl<F: Field> PartialEq for SnModule<F> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.dim == other.dim && self.gens == other.gens
    }
}

impl<F: Field> Eq for SnModule<F> {}

fn coords_in_basis<F: Field>(w: &[(usize, F)], pivots: &[usize]) -> SparseVec<F> {
    pivots
        .iter()
        .enumerate()
        .filter_map(|(k, &p)| {
            let x = crate::linalg::sparse_get(w, p);
            (!x.is_zero()).then_some((k, x))
        })
        .collect()
}

/// Coordinates of `w` in the canonical basis of `s`, assuming `w ∈ s`.
pub fn subspace_coords<F: Field>(s: &Subspace<F>, w: &[(usize, F)]) -> SparseVec<F> {
    coords_in_basis(w, &s.echelon().pivot_cols())
}

/// Letters (0-based, most significant first) of word number `w`.
pub fn word_of(mut w: usize, n: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = w % d;
        w /= d;
    }
    out
}

pub fn index_of_word(letters: &[usize], d: usize) -> usize {
    letters.iter().fold(0, |acc, &l| acc * d + l)
}

/// A representation of `Σ_p × Σ_q` on one space.
#[derive(Clone, Debug)]
pub struct YoungModule<F: Field> {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
    pub left: Vec<Matrix<F>>,
    pub right: Vec<Matrix<F>>,
}

impl<F: Field> YoungModule<F> {
    /// Checks that the two actions commute and are representations.
    pub fn new(p: usize, q: usize, dim: usize, left: Vec<Matrix<F>>, right: Vec<Matrix<F>>) -> Result<Self> {
        SnModule::new(p, dim, left.clone())?;
        SnModule::new(q, dim, right.clone())?;
        for (i, a) in left.iter().enumerate() {
            for (j, b) in right.iter().enumerate() {
                if a.mul(b) != b.mul(a) {
                    return Err(Error::InvariantViolation(format!(
                        "left s_{} and right s_{} do not commute",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(YoungModule { p, q, dim, left, right })
    }

    /// External tensor product `a ⊗ b` on the lexicographic basis.
    pub fn tensor(a: &SnModule<F>, b: &SnModule<F>) -> Self {
        let ia = Matrix::identity(a.dim);
        let ib = Matrix::identity(b.dim);
        YoungModule {
            p: a.n,
            q: b.n,
            dim: a.dim * b.dim,
            left: a.gens.iter().map(|g| g.kron(&ib)).collect(),
            right: b.gens.iter().map(|g| ia.kron(g)).collect(),
        }
    }

    /// Action of `a × b`.
    pub fn act(&self, a: &Permutation, b: &Permutation, v: &[(usize, F)]) -> SparseVec<F> {
        let mut v = v.to_vec();
        for i in b.reduced_word() {
            v = self.right[i - 1].apply_sparse(&v);
        }
        for i in a.reduced_word() {
            v = self.left[i - 1].apply_sparse(&v);
        }
        v
    }

    pub fn action_of(&self, a: &Permutation, b: &Permutation) -> Matrix<F> {
        let mut acc = Matrix::identity(self.dim);
        for i in b.reduced_word() {
            acc = self.right[i - 1].mul(&acc);
        }
        for i in a.reduced_word() {
            acc = self.left[i - 1].mul(&acc);
        }
        acc
    }

    /// The generator list of `Σ_p × Σ_q` inside `Σ_{p+q}` (missing `s_p`).
    pub fn as_block_gens(&self) -> Vec<(usize, &Matrix<F>)> {
        let mut out: Vec<(usize, &Matrix<F>)> = self.left.iter().enumerate().map(|(i, g)| (i + 1, g)).collect();
        out.extend(self.right.iter().enumerate().map(|(j, g)| (self.p + j + 1, g)));
        out
    }
}

/// `kΣ_{p+q} ⊗_{kΣ_p ⊗ kΣ_q} Y`, basis (shuffle, source vector) with shuffles
/// in lex order as the major index.
pub fn induce_young<F: Field>(y: &YoungModule<F>) -> Result<SnModule<F>> {
    let (p, q) = (y.p, y.q);
    let n = p + q;
    let reps = shuffles(p, q);
    let dim = reps.len() * y.dim;
    check_dim(dim)?;
    let index: HashMap<&Permutation, usize> = reps.iter().enumerate().map(|(k, g)| (g, k)).collect();
    let mut cache: HashMap<(Permutation, Permutation), Matrix<F>> = HashMap::new();
    let gens = (1..n)
        .map(|i| {
            let s = Permutation::transposition(n, i);
            let mut cols: Vec<SparseVec<F>> = Vec::with_capacity(dim);
            for g in &reps {
                let (g2, a, b) = young_decompose(&s.compose(g), p);
                let off = index[&g2] * y.dim;
                let m = cache
                    .entry((a.clone(), b.clone()))
                    .or_insert_with(|| y.action_of(&a, &b));
                for c in m.sparse_cols() {
                    cols.push(c.into_iter().map(|(r, x)| (r + off, x)).collect());
                }
            }
            Matrix::from_sparse_cols(dim, dim, cols)
        })
        .collect();
    Ok(SnModule::new_unchecked(n, dim, gens))
}

/// Induction from the tail subgroup `Σ_q ⊂ Σ_l`, basis (coset rep, source
/// vector) with coset reps in lex order as the major index.
pub fn induce_tail<F: Field>(l: usize, m: &SnModule<F>) -> Result<SnModule<F>> {
    let q = m.n;
    let reps = coset_reps(l, q)?;
    let dim = reps.len() * m.dim;
    check_dim(dim)?;
    let index: HashMap<&Permutation, usize> = reps.iter().enumerate().map(|(k, g)| (g, k)).collect();
    let mut cache: HashMap<Permutation, Matrix<F>> = HashMap::new();
    let gens = (1..l)
        .map(|i| {
            let s = Permutation::transposition(l, i);
            let mut cols: Vec<SparseVec<F>> = Vec::with_capacity(dim);
            for g in &reps {
                let (g2, h) = tail_decompose(&s.compose(g), q);
                let off = index[&g2] * m.dim;
                let a = cache.entry(h.clone()).or_insert_with(|| m.action_of(&h).unwrap());
                for c in a.sparse_cols() {
                    cols.push(c.into_iter().map(|(r, x)| (r + off, x)).collect());
                }
            }
            Matrix::from_sparse_cols(dim, dim, cols)
        })
        .collect();
    Ok(SnModule::new_unchecked(l, dim, gens))
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "F: Field")]
struct SnModuleJson<F: Field> {
    n: usize,
    dim: usize,
    gen_actions: Vec<Matrix<F>>,
}

impl<F: Field> Serialize for SnModule<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SnModuleJson { n: self.n, dim: self.dim, gen_actions: self.gens.clone() }.serialize(s)
    }
}

impl<'de, F: Field> Deserialize<'de> for SnModule<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SnModuleJson::<F>::deserialize(d)?;
        SnModule::new(j.n, j.dim, j.gen_actions).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Fp, Rational};
    use crate::sgroup::{binomial, chi};
    use proptest::prelude::*;

    type Q = Rational;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    #[test]
    fn regular_sigma2_swaps() {
        let r = SnModule::<Q>::regular(2);
        let m = r.action_of(&chi(1, 1)).unwrap();
        assert_eq!(m.dense_rows(), vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
        assert!(r.action_of(&Permutation::identity(2)).unwrap().is_identity());
        assert!(r.action_of(&Permutation::identity(3)).is_err());
    }

    #[test]
    fn regular_is_left_multiplication() {
        // Oracle: σ·e_ρ = e_{σρ} read off from the enumeration.
        let r = SnModule::<Q>::regular(3);
        let perms = all_perms(3);
        for s in &perms {
            let m = r.action_of(s).unwrap();
            for (j, rho) in perms.iter().enumerate() {
                assert_eq!(m.col(j), vec![(s.compose(rho).lex_rank(), q(1))]);
            }
        }
    }

    #[test]
    fn validation_rejects_bad_generators() {
        let bad = Matrix::from_rows(1, 1, vec![vec![q(2)]]).unwrap();
        assert!(SnModule::new(2, 1, vec![bad]).is_err());
        let words = SnModule::<Q>::words(3, 2);
        assert!(words.validate().is_ok());
    }

    #[test]
    fn induce_trivial_gives_regular() {
        let t = SnModule::<Q>::trivial(1, 1);
        let ind = induce_young(&YoungModule::tensor(&t, &t)).unwrap();
        assert_eq!(ind.dim(), 2);
        assert!(ind.validate().is_ok());
        // Two cosets swapped by s_1, as in the regular module of Σ_2.
        assert_eq!(ind, SnModule::regular(2));
    }

    #[test]
    fn induce_dimensions() {
        let w = SnModule::<Q>::words(2, 2);
        let z = SnModule::trivial(0, 1);
        assert_eq!(induce_young(&YoungModule::tensor(&z, &w)).unwrap(), w);
        let m3 = SnModule::direct_sum(&[SnModule::<Q>::trivial(2, 2), SnModule::sign(2)]);
        let y = YoungModule::tensor(&m3, &SnModule::trivial(1, 1));
        let ind = induce_young(&y).unwrap();
        assert_eq!(ind.dim(), 9);
        assert!(ind.validate().is_ok());
    }

    #[test]
    fn induce_tail_is_valid() {
        for l in 0..=4 {
            for qd in 0..=l {
                let m = SnModule::<Q>::regular(qd);
                let ind = induce_tail(l, &m).unwrap();
                assert_eq!(ind.dim(), factorial(l));
                assert!(ind.validate().is_ok());
            }
        }
    }

    #[test]
    fn coinvariant_examples() {
        assert_eq!(SnModule::<Q>::trivial(3, 2).coinvariants().0, 2);
        assert_eq!(SnModule::<Q>::regular(2).coinvariants().0, 1);
        assert_eq!(SnModule::<Q>::sign(2).coinvariants().0, 0);
    }

    #[test]
    fn maschke_examples() {
        assert!(SnModule::<Q>::trivial(3, 2).maschke_average().unwrap().is_identity());
        let avg = SnModule::<Q>::regular(2).maschke_average().unwrap();
        let half = Q::new(1, 2);
        assert_eq!(avg.dense_rows(), vec![vec![half.clone(), half.clone()], vec![half.clone(), half]]);
        assert_eq!(avg.rank(), 1);
        assert!(SnModule::<Q>::sign(2).maschke_average().unwrap().is_zero());
        let err = SnModule::<Fp<2>>::regular(2).maschke_average();
        assert!(matches!(err, Err(Error::UnsupportedCharacteristic(2, 2))));
    }

    #[test]
    fn maschke_is_equivariant_projector() {
        for m in [SnModule::<Q>::regular(3), SnModule::words(3, 2)] {
            let p = m.maschke_average().unwrap();
            assert_eq!(p.mul(&p), p);
            assert!(m.is_hom_to(&m, &p));
            assert_eq!(p.rank(), m.invariants().dim());
        }
    }

    #[test]
    fn coinvariants_of_induced_module() {
        // Coinvariants of an induced module are the coinvariants of the source
        // under the subgroup.
        let a = SnModule::<Q>::words(2, 2);
        let b = SnModule::<Q>::sign(1);
        let y = YoungModule::tensor(&a, &b);
        let ind = induce_young(&y).unwrap();
        let sub_rel = {
            let mut gens: Vec<Matrix<Q>> = y.left.clone();
            gens.extend(y.right.clone());
            let mut s = Subspace::zero(y.dim);
            for g in gens {
                for j in 0..y.dim {
                    s.insert(&crate::linalg::axpy(&[(j, q(1))], &q(-1), &g.col(j)));
                }
            }
            s
        };
        assert_eq!(ind.coinvariants().0, sub_rel.codim());
        assert_eq!(ind.dim(), y.dim * binomial(3, 2));
    }

    #[test]
    fn restriction_keeps_relations() {
        let m = SnModule::<Q>::regular(4);
        for k in 0..=4 {
            assert!(m.restrict_tail(k).validate().is_ok());
        }
    }

    #[test]
    fn json_shape() {
        let m = SnModule::<Q>::regular(2);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"n":2,"dim":2,"gen_actions":[[["0/1","1/1"],["1/1","0/1"]]]}"#);
        let back: SnModule<Q> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }

    proptest! {
        #[test]
        fn action_is_multiplicative(a in 0usize..24, b in 0usize..24) {
            let m = SnModule::<Q>::words(4, 2);
            let s = Permutation::from_lex_rank(4, a);
            let t = Permutation::from_lex_rank(4, b);
            let lhs = m.action_of(&s.compose(&t)).unwrap();
            let rhs = m.action_of(&s).unwrap().mul(&m.action_of(&t).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
