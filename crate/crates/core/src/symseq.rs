//! Truncated symmetric sequences, levelwise maps, and the Day tensor with
//! its twist and associator.

use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::rep::{induce_young, SnModule, YoungModule};
use crate::scalars::Field;
use crate::sgroup::{chi, shuffles, young_decompose, Permutation};

/// One `(M_0, …, M_N)` with `M_n` a `Σ_n`-module.
#[derive(Clone, Debug)]
pub struct SymSeq<F: Field> {
    levels: Vec<SnModule<F>>,
}

impl<F: Field> PartialEq for SymSeq<F> {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels
    }
}

impl<F: Field> SymSeq<F> {
    pub fn new(levels: Vec<SnModule<F>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Schema("a symmetric sequence needs level 0".into()));
        }
        for (n, l) in levels.iter().enumerate() {
            if l.degree() != n {
                return Err(Error::DegreeMismatch(format!("level {n} carries a Σ_{} action", l.degree())));
            }
        }
        Ok(SymSeq { levels })
    }

    pub fn zero(cutoff: usize) -> Self {
        SymSeq { levels: (0..=cutoff).map(SnModule::zero).collect() }
    }

    /// `(k, 0, 0, …)`.
    pub fn unit(cutoff: usize) -> Self {
        Self::representable(0, cutoff)
    }

    /// `F_m k`: the regular representation in level `m`, zero elsewhere.
    pub fn representable(m: usize, cutoff: usize) -> Self {
        SymSeq {
            levels: (0..=cutoff)
                .map(|n| if n == m { SnModule::regular(n) } else { SnModule::zero(n) })
                .collect(),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &SnModule<F> {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[SnModule<F>] {
        &self.levels
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(SnModule::dim).collect()
    }

    pub fn truncate(&self, cutoff: usize) -> Self {
        SymSeq { levels: self.levels[..=cutoff.min(self.cutoff())].to_vec() }
    }

    pub fn direct_sum(parts: &[Self]) -> Result<Self> {
        let cutoff = parts.first().map_or(0, Self::cutoff);
        for p in parts {
            if p.cutoff() != cutoff {
                return Err(Error::CutoffMismatch(cutoff, p.cutoff()));
            }
        }
        Ok(SymSeq {
            levels: (0..=cutoff)
                .map(|n| SnModule::direct_sum(&parts.iter().map(|p| p.levels[n].clone()).collect::<Vec<_>>()))
                .collect(),
        })
    }
}

/// Levelwise linear maps between two sequences of equal cutoff.
#[derive(Clone, Debug)]
pub struct SymSeqMap<F: Field> {
    pub source: SymSeq<F>,
    pub target: SymSeq<F>,
    pub components: Vec<Matrix<F>>,
}

impl<F: Field> SymSeqMap<F> {
    pub fn new(source: SymSeq<F>, target: SymSeq<F>, components: Vec<Matrix<F>>) -> Result<Self> {
        if source.cutoff() != target.cutoff() {
            return Err(Error::CutoffMismatch(source.cutoff(), target.cutoff()));
        }
        if components.len() != source.cutoff() + 1 {
            return Err(Error::Schema("one component per level expected".into()));
        }
        let components = components
            .into_iter()
            .enumerate()
            .map(|(n, c)| c.with_shape(target.level(n).dim(), source.level(n).dim()))
            .collect::<Result<Vec<_>>>()?;
        Ok(SymSeqMap { source, target, components })
    }

    pub fn identity(m: &SymSeq<F>) -> Self {
        let components = m.levels.iter().map(|l| Matrix::identity(l.dim())).collect();
        SymSeqMap { source: m.clone(), target: m.clone(), components }
    }

    pub fn zero(source: &SymSeq<F>, target: &SymSeq<F>) -> Self {
        let components = (0..=source.cutoff())
            .map(|n| Matrix::zeros(target.level(n).dim(), source.level(n).dim()))
            .collect();
        SymSeqMap { source: source.clone(), target: target.clone(), components }
    }

    /// Levels whose component fails to commute with some generator.
    pub fn equivariance_failures(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (n, c) in self.components.iter().enumerate() {
            let (s, t) = (self.source.level(n), self.target.level(n));
            for i in 1..n {
                if c.mul(s.gen(i)) != t.gen(i).mul(c) {
                    out.push((n, i));
                }
            }
        }
        out
    }

    pub fn is_equivariant(&self) -> bool {
        self.equivariance_failures().is_empty()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Self) -> Self {
        let components = self.components.iter().zip(&other.components).map(|(a, b)| b.mul(a)).collect();
        SymSeqMap { source: self.source.clone(), target: other.target.clone(), components }
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(Matrix::is_invertible)
    }

    pub fn inverse(&self) -> Option<Self> {
        let components = self.components.iter().map(Matrix::inverse).collect::<Option<Vec<_>>>()?;
        Some(SymSeqMap { source: self.target.clone(), target: self.source.clone(), components })
    }

    /// Kernel with its inclusion.
    pub fn kernel(&self) -> (SymSeq<F>, SymSeqMap<F>) {
        let mut levels = Vec::new();
        let mut incl = Vec::new();
        for (n, c) in self.components.iter().enumerate() {
            let sub = Subspace::from_vectors(c.cols(), c.kernel());
            let (m, i) = self.source.level(n).submodule(&sub);
            levels.push(m);
            incl.push(i);
        }
        let k = SymSeq { levels };
        let map = SymSeqMap { source: k.clone(), target: self.source.clone(), components: incl };
        (k, map)
    }

    /// Cokernel with its projection.
    pub fn cokernel(&self) -> (SymSeq<F>, SymSeqMap<F>) {
        let mut levels = Vec::new();
        let mut proj = Vec::new();
        for (n, c) in self.components.iter().enumerate() {
            let (m, p) = self.target.level(n).quotient(&c.image());
            levels.push(m);
            proj.push(p);
        }
        let q = SymSeq { levels };
        let map = SymSeqMap { source: self.target.clone(), target: q.clone(), components: proj };
        (q, map)
    }
}

/// One summand `kΣ_t ⊗ (M_p ⊗ N_q)` of a Day tensor level.
#[derive(Clone, Debug)]
pub struct DaySummand {
    pub p: usize,
    pub q: usize,
    pub offset: usize,
    pub left_dim: usize,
    pub right_dim: usize,
    pub shuffles: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl DaySummand {
    pub fn block(&self) -> usize {
        self.left_dim * self.right_dim
    }

    pub fn dim(&self) -> usize {
        self.shuffles.len() * self.block()
    }

    pub fn shuffle_index(&self, g: &Permutation) -> usize {
        self.index[g]
    }

    /// Global index of the basis element `g ⊗ x_i ⊗ y_j`.
    pub fn at(&self, g: usize, i: usize, j: usize) -> usize {
        self.offset + g * self.block() + i * self.right_dim + j
    }

    /// Inverse of [`Self::at`] for indices inside this summand.
    pub fn split(&self, idx: usize) -> (usize, usize, usize) {
        let r = idx - self.offset;
        let (g, rest) = (r / self.block(), r % self.block());
        (g, rest / self.right_dim, rest % self.right_dim)
    }
}

/// Summand layout of level `t` of a Day tensor with the given level dims.
#[derive(Clone, Debug)]
pub struct DayLevel {
    pub t: usize,
    pub summands: Vec<DaySummand>,
    pub dim: usize,
}

impl DayLevel {
    pub fn new(left: &[usize], right: &[usize], t: usize) -> Self {
        let mut summands = Vec::new();
        let mut offset = 0;
        for p in 0..=t {
            let q = t - p;
            let ld = left.get(p).copied().unwrap_or(0);
            let rd = right.get(q).copied().unwrap_or(0);
            let sh = shuffles(p, q);
            let index = sh.iter().enumerate().map(|(k, g)| (g.clone(), k)).collect();
            let s = DaySummand { p, q, offset, left_dim: ld, right_dim: rd, shuffles: sh, index };
            offset += s.dim();
            summands.push(s);
        }
        DayLevel { t, summands, dim: offset }
    }

    pub fn summand(&self, p: usize) -> &DaySummand {
        &self.summands[p]
    }

    /// Summand containing a global index.
    pub fn locate(&self, idx: usize) -> &DaySummand {
        self.summands
            .iter()
            .find(|s| idx >= s.offset && idx < s.offset + s.dim())
            .expect("index inside the level")
    }
}

/// Layout of every level of `M ∧ N`.
pub fn day_layout(left: &[usize], right: &[usize], cutoff: usize) -> Vec<DayLevel> {
    (0..=cutoff).map(|t| DayLevel::new(left, right, t)).collect()
}

/// `(M ∧ N)_t = ⊕_{p+q=t} kΣ_t ⊗_{kΣ_p ⊗ kΣ_q} M_p ⊗ N_q`.
pub fn day_tensor<F: Field>(m: &SymSeq<F>, n: &SymSeq<F>) -> Result<SymSeq<F>> {
    if m.cutoff() != n.cutoff() {
        return Err(Error::CutoffMismatch(m.cutoff(), n.cutoff()));
    }
    let levels = (0..=m.cutoff())
        .map(|t| {
            let parts = (0..=t)
                .map(|p| induce_young(&YoungModule::tensor(m.level(p), n.level(t - p))))
                .collect::<Result<Vec<_>>>()?;
            let lvl = SnModule::direct_sum(&parts);
            crate::rep::check_dim(lvl.dim())?;
            Ok(lvl)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymSeq { levels })
}

/// Builds a level map of Day tensors from the images of basis elements.
fn day_map<F: Field>(
    src: &DayLevel,
    tgt_dim: usize,
    mut image: impl FnMut(&DaySummand, &Permutation, usize, usize) -> SparseVec<F>,
) -> Matrix<F> {
    let mut cols = Vec::with_capacity(src.dim);
    for s in &src.summands {
        for g in &s.shuffles {
            for i in 0..s.left_dim {
                for j in 0..s.right_dim {
                    cols.push(image(s, g, i, j));
                }
            }
        }
    }
    Matrix::from_sparse_cols(tgt_dim, src.dim, cols)
}

/// The symmetry `M ∧ N → N ∧ M`: `g ⊗ x ⊗ y ↦ g χ_{q,p} ⊗ y ⊗ x`.
pub fn twist<F: Field>(m: &SymSeq<F>, n: &SymSeq<F>) -> Result<SymSeqMap<F>> {
    let src = day_tensor(m, n)?;
    let tgt = day_tensor(n, m)?;
    let (md, nd) = (m.dims(), n.dims());
    let components = (0..=m.cutoff())
        .map(|t| {
            let sl = DayLevel::new(&md, &nd, t);
            let tl = DayLevel::new(&nd, &md, t);
            day_map(&sl, tl.dim, |s, g, i, j| {
                let ts = tl.summand(s.q);
                let g2 = g.compose(&chi(s.q, s.p));
                vec![(ts.at(ts.shuffle_index(&g2), j, i), F::one())]
            })
        })
        .collect();
    Ok(SymSeqMap { source: src, target: tgt, components })
}

/// The swap without the shuffle correction: `g ⊗ x ⊗ y ↦ g ⊗ y ⊗ x`, with
/// `g` reinterpreted against the `(q,p)` Young subgroup. Not equivariant in general.
pub fn naive_swap<F: Field>(m: &SymSeq<F>, n: &SymSeq<F>) -> Result<SymSeqMap<F>> {
    let src = day_tensor(m, n)?;
    let tgt = day_tensor(n, m)?;
    let (md, nd) = (m.dims(), n.dims());
    let components = (0..=m.cutoff())
        .map(|t| {
            let sl = DayLevel::new(&md, &nd, t);
            let tl = DayLevel::new(&nd, &md, t);
            day_map(&sl, tl.dim, |s, g, i, j| {
                let ts = tl.summand(s.q);
                let (g2, a, b) = young_decompose(g, s.q);
                let y = YoungModule::tensor(n.level(s.q), m.level(s.p));
                let v = y.act(&a, &b, &[(j * s.left_dim + i, F::one())]);
                let base = ts.at(ts.shuffle_index(&g2), 0, 0);
                v.into_iter().map(|(k, x)| (base + k, x)).collect()
            })
        })
        .collect();
    Ok(SymSeqMap { source: src, target: tgt, components })
}

/// `f ∧ g` on Day tensors.
pub fn day_map_tensor<F: Field>(f: &SymSeqMap<F>, g: &SymSeqMap<F>) -> Result<SymSeqMap<F>> {
    let src = day_tensor(&f.source, &g.source)?;
    let tgt = day_tensor(&f.target, &g.target)?;
    let (sa, sb) = (f.source.dims(), g.source.dims());
    let (ta, tb) = (f.target.dims(), g.target.dims());
    let components = (0..=src.cutoff())
        .map(|t| {
            let sl = DayLevel::new(&sa, &sb, t);
            let tl = DayLevel::new(&ta, &tb, t);
            let blocks: Vec<Matrix<F>> = sl
                .summands
                .iter()
                .map(|s| {
                    let fg = f.components[s.p].kron(&g.components[s.q]);
                    Matrix::identity(s.shuffles.len()).kron(&fg)
                })
                .collect();
            let m = Matrix::block_diag(&blocks);
            debug_assert_eq!(m.rows(), tl.dim);
            m
        })
        .collect();
    Ok(SymSeqMap { source: src, target: tgt, components })
}

/// The associator `(A ∧ B) ∧ C → A ∧ (B ∧ C)`.
pub fn associator<F: Field>(a: &SymSeq<F>, b: &SymSeq<F>, c: &SymSeq<F>) -> Result<SymSeqMap<F>> {
    let ab = day_tensor(a, b)?;
    let bc = day_tensor(b, c)?;
    let src = day_tensor(&ab, c)?;
    let tgt = day_tensor(a, &bc)?;
    let (ad, bd, cd) = (a.dims(), b.dims(), c.dims());
    let (abd, bcd) = (ab.dims(), bc.dims());
    let inner_ab = day_layout(&ad, &bd, a.cutoff());
    let inner_bc = day_layout(&bd, &cd, a.cutoff());
    let components = (0..=a.cutoff())
        .map(|t| {
            let sl = DayLevel::new(&abd, &cd, t);
            let tl = DayLevel::new(&ad, &bcd, t);
            day_map(&sl, tl.dim, |s, g, i, k| {
                // i indexes (A∧B)_s; locate its inner summand.
                let is = inner_ab[s.p].locate(i);
                let (h, x, y) = is.split(i);
                let r = s.q;
                let gamma = g.compose(&is.shuffles[h].block_sum(&Permutation::identity(r)));
                let (g2, head, tail) = young_decompose(&gamma, is.p);
                debug_assert!(head.is_identity());
                let ts = tl.summand(is.p);
                let bs = inner_bc[is.q + r].summand(is.q);
                let yz = bs.at(bs.shuffle_index(&tail), y, k);
                vec![(ts.at(ts.shuffle_index(&g2), x, yz), F::one())]
            })
        })
        .collect();
    Ok(SymSeqMap { source: src, target: tgt, components })
}

/// Hexagon: `τ_{A,B∧C} = α⁻¹ (1 ∧ τ_{A,C}) α (τ_{A,B} ∧ 1) α⁻¹`.
pub fn hexagon_holds<F: Field>(a: &SymSeq<F>, b: &SymSeq<F>, c: &SymSeq<F>) -> Result<bool> {
    let bc = day_tensor(b, c)?;
    let lhs = twist(a, &bc)?;
    let alpha_abc_inv = associator(a, b, c)?.inverse().expect("associator is invertible");
    let t_ab = day_map_tensor(&twist(a, b)?, &SymSeqMap::identity(c))?;
    let alpha_bac = associator(b, a, c)?;
    let t_ac = day_map_tensor(&SymSeqMap::identity(b), &twist(a, c)?)?;
    let alpha_bca_inv = associator(b, c, a)?.inverse().expect("associator is invertible");
    let rhs = alpha_abc_inv.then(&t_ab).then(&alpha_bac).then(&t_ac).then(&alpha_bca_inv);
    Ok(lhs.components == rhs.components)
}

/// The isomorphism `F_m k ∧ F_n k → F_{m+n} k`, `g ⊗ σ ⊗ τ ↦ g (σ × τ)`.
pub fn representable_product_iso<F: Field>(m: usize, n: usize, cutoff: usize) -> Result<SymSeqMap<F>> {
    let a = SymSeq::representable(m, cutoff);
    let b = SymSeq::representable(n, cutoff);
    let src = day_tensor(&a, &b)?;
    let tgt = SymSeq::representable(m + n, cutoff);
    let (ad, bd) = (a.dims(), b.dims());
    let components = (0..=cutoff)
        .map(|t| {
            let sl = DayLevel::new(&ad, &bd, t);
            day_map(&sl, tgt.level(t).dim(), |s, g, i, j| {
                let sigma = Permutation::from_lex_rank(s.p, i);
                let tau = Permutation::from_lex_rank(s.q, j);
                vec![(g.compose(&sigma.block_sum(&tau)).lex_rank(), F::one())]
            })
        })
        .collect();
    Ok(SymSeqMap { source: src, target: tgt, components })
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "F: Field")]
struct SymSeqJson<F: Field> {
    cutoff: usize,
    levels: Vec<SnModule<F>>,
}

impl<F: Field> Serialize for SymSeq<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymSeqJson { cutoff: self.cutoff(), levels: self.levels.clone() }.serialize(s)
    }
}

impl<'de, F: Field> Deserialize<'de> for SymSeq<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SymSeqJson::<F>::deserialize(d)?;
        if j.levels.len() != j.cutoff + 1 {
            return Err(serde::de::Error::custom("levels must run from 0 to cutoff"));
        }
        SymSeq::new(j.levels).map_err(serde::de::Error::custom)
    }
}

impl<F: Field> Serialize for SymSeqMap<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(bound = "F: Field")]
        struct MapJson<'a, F: Field> {
            cutoff: usize,
            components: &'a [Matrix<F>],
        }
        MapJson { cutoff: self.source.cutoff(), components: &self.components }.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;
    use crate::sgroup::binomial;

    type Q = Rational;

    fn seq_with_dims(dims: &[usize]) -> SymSeq<Q> {
        // Direct sums of trivial and sign pieces give any dimension vector.
        SymSeq::new(
            dims.iter()
                .enumerate()
                .map(|(n, &d)| {
                    let parts: Vec<SnModule<Q>> = (0..d)
                        .map(|k| if k % 2 == 0 { SnModule::trivial(n, 1) } else { SnModule::sign(n) })
                        .collect();
                    if parts.is_empty() {
                        SnModule::zero(n)
                    } else {
                        SnModule::direct_sum(&parts)
                    }
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn dimension_formula() {
        let a = seq_with_dims(&[1, 2, 0, 1]);
        let b = seq_with_dims(&[1, 1, 1, 1]);
        let d = day_tensor(&a, &b).unwrap();
        assert_eq!(d.level(2).dim(), 5);
        for t in 0..=3 {
            let expect: usize = (0..=t).map(|p| binomial(t, p) * a.dims()[p] * b.dims()[t - p]).sum();
            assert_eq!(d.level(t).dim(), expect);
            assert!(d.level(t).validate().is_ok());
        }
    }

    #[test]
    fn representables_multiply() {
        let f1 = SymSeq::<Q>::representable(1, 3);
        assert_eq!(day_tensor(&f1, &f1).unwrap().dims(), vec![0, 0, 2, 0]);
        for m in 0..=3 {
            for n in 0..=(5 - m).min(3) {
                let iso = representable_product_iso::<Q>(m, n, 5).unwrap();
                assert!(iso.is_equivariant());
                assert!(iso.is_iso());
            }
        }
    }

    #[test]
    fn unit_law() {
        let a = seq_with_dims(&[1, 2, 1, 2]);
        let u = SymSeq::unit(3);
        assert_eq!(day_tensor(&u, &a).unwrap(), a);
        assert_eq!(day_tensor(&a, &u).unwrap(), a);
    }

    #[test]
    fn twist_involution_and_equivariance() {
        let a = seq_with_dims(&[1, 2, 1, 1]);
        let b = SymSeq::representable(1, 3);
        let t1 = twist(&a, &b).unwrap();
        let t2 = twist(&b, &a).unwrap();
        assert!(t1.is_equivariant());
        assert!(t1.then(&t2).components.iter().all(Matrix::is_identity));
    }

    #[test]
    fn twist_on_f1_f1() {
        let f1 = SymSeq::<Q>::representable(1, 2);
        let t = twist(&f1, &f1).unwrap();
        // Basis at level 2 indexed by shuffles [1,2] and [2,1]; the identity
        // coset goes to the coset of χ_{1,1}.
        assert_eq!(t.components[2].col(0), vec![(1, Q::from_i64(1))]);
        assert_eq!(t.components[2].col(1), vec![(0, Q::from_i64(1))]);
    }

    #[test]
    fn naive_swap_is_not_equivariant() {
        let a = seq_with_dims(&[1, 1, 1, 1]);
        let b = seq_with_dims(&[1, 1, 1, 1]);
        let failures = naive_swap(&a, &b).unwrap().equivariance_failures();
        assert!(failures.iter().any(|&(n, _)| n == 3));
    }

    #[test]
    fn associator_and_hexagon() {
        let a = seq_with_dims(&[1, 1, 1, 0]);
        let b = SymSeq::representable(1, 3);
        let c = seq_with_dims(&[0, 2, 1, 1]);
        let al = associator(&a, &b, &c).unwrap();
        assert!(al.is_equivariant());
        assert!(al.is_iso());
        assert!(hexagon_holds(&a, &b, &c).unwrap());
    }

    #[test]
    fn kernel_cokernel() {
        let a = seq_with_dims(&[1, 2, 1]);
        let id = SymSeqMap::identity(&a);
        assert_eq!(id.kernel().0.dims(), vec![0, 0, 0]);
        let z = SymSeqMap::zero(&a, &a);
        assert_eq!(z.cokernel().0, a);
        let (k, incl) = z.kernel();
        assert!(incl.is_equivariant());
        assert_eq!(k.dims(), a.dims());
    }

    #[test]
    fn cutoff_mismatch() {
        let a = SymSeq::<Q>::unit(2);
        let b = SymSeq::<Q>::unit(3);
        assert!(matches!(day_tensor(&a, &b), Err(Error::CutoffMismatch(2, 3))));
    }
}
