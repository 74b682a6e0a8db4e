//! Right modules over a symmetric graded algebra: `M_n ⊗ E_m → M_{n+m}`.

mod graded;
mod hom;
mod smash;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use graded::{
    a_map_cokernel_torsion, has_trivial_algebra_action, is_tors_closed, is_torsion, vu_shift_map,
    nonsymmetric_generation_degree, suspension, tail_levels, u_functor, unit_counit, unit_map, v_functor,
    ClosedVerdict, Filtration, GradedModule, GradedPresentation, GradedRelation, Suspension, TorsionVerdict,
    UnitCounit, VImage,
};
pub use hom::{flatten, hom_space, internal_hom_level, shift_iso_check, HomLevel, HomSpace, ModuleData};
pub use smash::{a_map, free_smash_iso, smash_cutoff, smash_maps, smash_over_e, smash_preserves_injectivity, Smash};

use crate::algebra::{cell_key, kron_vec, parse_cell_key, SymAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::rep::{induce_tail, SnModule};
use crate::report::Report;
use crate::scalars::Field;
use crate::sgroup::{coset_reps, tail_decompose, Permutation};
use crate::symseq::SymSeq;

/// A right `E`-module, truncated at `cutoff ≤ E.cutoff()`.
#[derive(Clone, Debug)]
pub struct EModule<F: Field> {
    algebra: Arc<SymAlgebra<F>>,
    underlying: SymSeq<F>,
    actions: BTreeMap<(usize, usize), Matrix<F>>,
}

impl<F: Field> PartialEq for EModule<F> {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra)
            && self.underlying == other.underlying
            && self.actions == other.actions
    }
}

pub(crate) fn same_algebra<F: Field>(a: &Arc<SymAlgebra<F>>, b: &Arc<SymAlgebra<F>>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl<F: Field> EModule<F> {
    pub fn new(
        algebra: Arc<SymAlgebra<F>>,
        underlying: SymSeq<F>,
        actions: BTreeMap<(usize, usize), Matrix<F>>,
    ) -> Result<Self> {
        let c = underlying.cutoff();
        if c > algebra.cutoff() {
            return Err(Error::CutoffMismatch(c, algebra.cutoff()));
        }
        let mut fixed = BTreeMap::new();
        for n in 0..=c {
            for m in 0..=c - n {
                let a = actions
                    .get(&(n, m))
                    .ok_or_else(|| Error::Schema(format!("missing action {}", cell_key(n, m))))?;
                let rows = underlying.level(n + m).dim();
                let cols = underlying.level(n).dim() * algebra.dim(m);
                fixed.insert((n, m), a.clone().with_shape(rows, cols)?);
            }
        }
        Ok(EModule { algebra, underlying, actions: fixed })
    }

    pub(crate) fn from_parts(
        algebra: Arc<SymAlgebra<F>>,
        underlying: SymSeq<F>,
        actions: BTreeMap<(usize, usize), Matrix<F>>,
    ) -> Self {
        EModule { algebra, underlying, actions }
    }

    /// `E` as a right module over itself.
    pub fn regular(algebra: &Arc<SymAlgebra<F>>) -> Self {
        EModule {
            algebra: algebra.clone(),
            underlying: algebra.underlying().clone(),
            actions: algebra.mults().clone(),
        }
    }

    /// The zero module.
    pub fn zero(algebra: &Arc<SymAlgebra<F>>, cutoff: usize) -> Self {
        let underlying = SymSeq::zero(cutoff);
        let mut actions = BTreeMap::new();
        for n in 0..=cutoff {
            for m in 0..=cutoff - n {
                actions.insert((n, m), Matrix::zeros(0, 0));
            }
        }
        EModule { algebra: algebra.clone(), underlying, actions }
    }

    /// The free module `F_m E` on one generator in level `m`:
    /// `(F_m E)_n = kΣ_n ⊗_{kΣ_{n−m}} E_{n−m}`, basis (coset rep, `E` basis).
    pub fn free(algebra: &Arc<SymAlgebra<F>>, m: usize) -> Result<Self> {
        let c = algebra.cutoff();
        if m > c {
            return Err(Error::Argument(format!("free module generator level {m} exceeds cutoff {c}")));
        }
        let levels = (0..=c)
            .map(|n| if n < m { Ok(SnModule::zero(n)) } else { induce_tail(n, algebra.level(n - m)) })
            .collect::<Result<Vec<_>>>()?;
        let underlying = SymSeq::new(levels)?;
        let reps: Vec<Vec<Permutation>> =
            (0..=c).map(|n| if n < m { Vec::new() } else { coset_reps(n, n - m).unwrap() }).collect();
        let index: Vec<BTreeMap<&Permutation, usize>> =
            reps.iter().map(|r| r.iter().enumerate().map(|(k, g)| (g, k)).collect()).collect();
        let mut actions = BTreeMap::new();
        for n in 0..=c {
            for r in 0..=c - n {
                let rows = underlying.level(n + r).dim();
                let cols = underlying.level(n).dim() * algebra.dim(r);
                if n < m {
                    actions.insert((n, r), Matrix::zeros(rows, cols));
                    continue;
                }
                let (src, tgt) = (n - m, n + r - m);
                let (ds, de, dt) = (algebra.dim(src), algebra.dim(r), algebra.dim(tgt));
                let mu = algebra.mult(src, r);
                let id_r = Permutation::identity(r);
                let mut out = Vec::with_capacity(cols);
                for g in &reps[n] {
                    let (g2, h) = tail_decompose(&g.block_sum(&id_r), tgt);
                    let off = index[n + r][&g2] * dt;
                    let hm = (!h.is_identity()).then(|| algebra.level(tgt).action_of(&h).unwrap());
                    for x in 0..ds {
                        for e in 0..de {
                            let mut v = mu.col(x * de + e);
                            if let Some(hm) = &hm {
                                v = hm.apply_sparse(&v);
                            }
                            out.push(v.into_iter().map(|(i, a)| (i + off, a)).collect());
                        }
                    }
                }
                actions.insert((n, r), Matrix::from_sparse_cols(rows, cols, out));
            }
        }
        Ok(EModule { algebra: algebra.clone(), underlying, actions })
    }

    pub fn algebra(&self) -> &Arc<SymAlgebra<F>> {
        &self.algebra
    }

    pub fn underlying(&self) -> &SymSeq<F> {
        &self.underlying
    }

    pub fn cutoff(&self) -> usize {
        self.underlying.cutoff()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.underlying.dims()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.underlying.level(n).dim()
    }

    pub fn level(&self, n: usize) -> &SnModule<F> {
        self.underlying.level(n)
    }

    /// `α_{n,m}`.
    pub fn action(&self, n: usize, m: usize) -> &Matrix<F> {
        &self.actions[&(n, m)]
    }

    pub fn actions(&self) -> &BTreeMap<(usize, usize), Matrix<F>> {
        &self.actions
    }

    /// `x · e` for `x ∈ M_n`, `e ∈ E_m`.
    pub fn act(&self, n: usize, x: &[(usize, F)], m: usize, e: &[(usize, F)]) -> SparseVec<F> {
        self.action(n, m).apply_sparse(&kron_vec(x, e, self.algebra.dim(m)))
    }

    /// Lowest level that is nonzero, or `cutoff + 1`.
    pub fn connectivity(&self) -> usize {
        (0..=self.cutoff()).find(|&n| self.dim(n) > 0).unwrap_or(self.cutoff() + 1)
    }

    pub fn truncate(&self, cutoff: usize) -> Self {
        let c = cutoff.min(self.cutoff());
        let actions = self.actions.iter().filter(|((n, m), _)| n + m <= c).map(|(k, v)| (*k, v.clone())).collect();
        EModule { algebra: self.algebra.clone(), underlying: self.underlying.truncate(c), actions }
    }

    /// Equivariance, associativity and unit laws of the action.
    pub fn check_axioms(&self) -> Report {
        let c = self.cutoff();
        let mut r = Report::new("module axioms", c);
        let e = &self.algebra;
        for n in 0..=c {
            for m in 0..=c - n {
                if !self.action_is_equivariant(n, m) {
                    r.fail("equivariance", &[n, m]);
                }
            }
        }
        for n in 0..=c {
            for m in 0..=c - n {
                for p in 0..=c - n - m {
                    let left = self.action(n + m, p).mul(&self.action(n, m).kron(&Matrix::identity(e.dim(p))));
                    let right = self.action(n, m + p).mul(&Matrix::identity(self.dim(n)).kron(e.mult(m, p)));
                    if left != right {
                        r.fail("associativity", &[n, m, p]);
                    }
                }
            }
        }
        for n in 0..=c {
            let u = self.action(n, 0).mul(&Matrix::identity(self.dim(n)).kron(e.unit()));
            if !u.is_identity() {
                r.fail("unit", &[n]);
            }
        }
        r
    }

    fn action_is_equivariant(&self, n: usize, m: usize) -> bool {
        let a = self.action(n, m);
        let (src, alg, tgt) = (self.level(n), self.algebra.level(m), self.level(n + m));
        let ia = Matrix::identity(src.dim());
        let ib = Matrix::identity(alg.dim());
        (1..n).all(|i| a.mul(&src.gen(i).kron(&ib)) == tgt.gen(i).mul(a))
            && (1..m).all(|j| a.mul(&ia.kron(alg.gen(j))) == tgt.gen(n + j).mul(a))
    }

    /// `M[k]_n = M_{k+n}` with `Σ_n` acting on the last `n` letters.
    pub fn shift(&self, k: usize) -> Result<Self> {
        let c = self.cutoff();
        if k > c {
            return Err(Error::Argument(format!("shift by {k} exceeds cutoff {c}")));
        }
        let levels = (0..=c - k).map(|n| self.level(n + k).restrict_tail(k)).collect();
        let mut actions = BTreeMap::new();
        for n in 0..=c - k {
            for m in 0..=c - k - n {
                actions.insert((n, m), self.action(n + k, m).clone());
            }
        }
        Ok(EModule { algebra: self.algebra.clone(), underlying: SymSeq::new(levels)?, actions })
    }

    pub fn direct_sum(parts: &[Self]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Argument("empty direct sum".into()))?;
        let c = first.cutoff();
        for p in parts {
            if !same_algebra(&p.algebra, &first.algebra) {
                return Err(Error::AlgebraMismatch("direct sum over different algebras".into()));
            }
            if p.cutoff() != c {
                return Err(Error::CutoffMismatch(c, p.cutoff()));
            }
        }
        let underlying = SymSeq::direct_sum(&parts.iter().map(|p| p.underlying.clone()).collect::<Vec<_>>())?;
        let mut actions = BTreeMap::new();
        for n in 0..=c {
            for m in 0..=c - n {
                let de = first.algebra.dim(m);
                let rows = underlying.level(n + m).dim();
                let mut cols = Vec::new();
                let mut off = 0;
                for p in parts {
                    for col in p.action(n, m).sparse_cols() {
                        cols.push(col.into_iter().map(|(i, a)| (i + off, a)).collect());
                    }
                    off += p.dim(n + m);
                }
                let _ = de;
                actions.insert((n, m), Matrix::from_sparse_cols(rows, cols.len(), cols));
            }
        }
        Ok(EModule { algebra: first.algebra.clone(), underlying, actions })
    }

    /// Offsets of the summands of a direct sum, per level.
    pub fn summand_offsets(parts: &[Self], n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(parts.len());
        let mut off = 0;
        for p in parts {
            out.push(off);
            off += p.dim(n);
        }
        out
    }

    /// Smallest submodule containing the given elements `(level, vector)`:
    /// saturate under right multiplication and the group actions, level by level.
    pub fn closure(&self, gens: &[(usize, SparseVec<F>)]) -> Result<Vec<Subspace<F>>> {
        let c = self.cutoff();
        for (d, v) in gens {
            if *d > c {
                continue;
            }
            if v.iter().any(|(i, _)| *i >= self.dim(*d)) {
                return Err(Error::Argument(format!("generator out of range in level {d}")));
            }
        }
        let mut levels: Vec<Subspace<F>> = Vec::with_capacity(c + 1);
        for n in 0..=c {
            let mut seeds: Vec<SparseVec<F>> =
                gens.iter().filter(|(d, _)| *d == n).map(|(_, v)| v.clone()).collect();
            for (i, s) in levels.iter().enumerate() {
                let m = n - i;
                if m == 0 || s.is_zero() {
                    continue;
                }
                for x in s.basis() {
                    for e in 0..self.algebra.dim(m) {
                        seeds.push(self.act(i, &x, m, &[(e, F::one())]));
                    }
                }
            }
            levels.push(self.level(n).orbit_span(seeds));
        }
        Ok(levels)
    }

    /// Whether levelwise subspaces form a submodule.
    pub fn is_submodule(&self, levels: &[Subspace<F>]) -> bool {
        let c = self.cutoff();
        levels.len() == c + 1
            && (0..=c).all(|n| levels[n].ambient() == self.dim(n) && self.level(n).is_stable(&levels[n]))
            && (0..=c).all(|n| {
                (1..=c - n).all(|m| {
                    levels[n].basis().iter().all(|x| {
                        (0..self.algebra.dim(m)).all(|e| levels[n + m].contains(&self.act(n, x, m, &[(e, F::one())])))
                    })
                })
            })
    }

    /// A submodule on the canonical bases of its levels, with its inclusion.
    pub fn submodule(&self, levels: &[Subspace<F>]) -> Result<(Self, EModuleMap<F>)> {
        if !self.is_submodule(levels) {
            return Err(Error::InvariantViolation("not a submodule".into()));
        }
        let c = self.cutoff();
        let mut lv = Vec::with_capacity(c + 1);
        let mut incl = Vec::with_capacity(c + 1);
        for n in 0..=c {
            let (m, i) = self.level(n).submodule(&levels[n]);
            lv.push(m);
            incl.push(i);
        }
        let mut actions = BTreeMap::new();
        for n in 0..=c {
            for m in 0..=c - n {
                let coords = levels[n + m].coords_map();
                let a = coords.mul(self.action(n, m)).mul(&incl[n].kron(&Matrix::identity(self.algebra.dim(m))));
                actions.insert((n, m), a);
            }
        }
        let sub = EModule { algebra: self.algebra.clone(), underlying: SymSeq::new(lv)?, actions };
        let map = EModuleMap { source: sub.clone(), target: self.clone(), components: incl };
        Ok((sub, map))
    }

    /// Quotient by a submodule, with the projection.
    pub fn quotient(&self, levels: &[Subspace<F>]) -> Result<(Self, EModuleMap<F>)> {
        if !self.is_submodule(levels) {
            return Err(Error::InvariantViolation("not a submodule".into()));
        }
        let c = self.cutoff();
        let mut lv = Vec::with_capacity(c + 1);
        let mut proj = Vec::with_capacity(c + 1);
        for n in 0..=c {
            let (m, p) = self.level(n).quotient(&levels[n]);
            lv.push(m);
            proj.push(p);
        }
        let mut actions = BTreeMap::new();
        for n in 0..=c {
            for m in 0..=c - n {
                let lift = levels[n].quotient_lift();
                let a = proj[n + m].mul(self.action(n, m)).mul(&lift.kron(&Matrix::identity(self.algebra.dim(m))));
                actions.insert((n, m), a);
            }
        }
        let q = EModule { algebra: self.algebra.clone(), underlying: SymSeq::new(lv)?, actions };
        let map = EModuleMap { source: self.clone(), target: q.clone(), components: proj };
        Ok((q, map))
    }

    /// The map `⊕_i F_{m_i}E → M` sending the `i`-th generator to `z_i ∈ M_{m_i}`.
    pub fn map_from_free(&self, gens: &[(usize, SparseVec<F>)]) -> Result<EModuleMap<F>> {
        let c = self.cutoff();
        let frees = gens
            .iter()
            .map(|(m, _)| EModule::free(&self.algebra, *m).map(|f| f.truncate(c)))
            .collect::<Result<Vec<_>>>()?;
        let source = if frees.is_empty() { EModule::zero(&self.algebra, c) } else { EModule::direct_sum(&frees)? };
        let components = (0..=c)
            .map(|n| {
                let mut cols = Vec::with_capacity(source.dim(n));
                for (m, z) in gens {
                    if *m > n {
                        continue;
                    }
                    let reps = coset_reps(n, n - m).unwrap();
                    let de = self.algebra.dim(n - m);
                    let images: Vec<SparseVec<F>> =
                        (0..de).map(|x| self.act(*m, z, n - m, &[(x, F::one())])).collect();
                    for g in &reps {
                        for v in &images {
                            cols.push(self.level(n).act(g, v));
                        }
                    }
                }
                Matrix::from_sparse_cols(self.dim(n), source.dim(n), cols)
            })
            .collect();
        Ok(EModuleMap { source, target: self.clone(), components })
    }

    /// Submodule generated by elements, as a closure, then the quotient.
    pub fn quotient_by_elements(&self, gens: &[(usize, SparseVec<F>)]) -> Result<(Self, EModuleMap<F>)> {
        let levels = self.closure(gens)?;
        self.quotient(&levels)
    }

    /// Whether every level carries the trivial group action.
    pub fn has_trivial_action(&self) -> bool {
        self.underlying.levels().iter().all(|l| l.gens().iter().all(Matrix::is_identity))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let actions: BTreeMap<String, &Matrix<F>> =
            self.actions.iter().map(|((n, m), a)| (cell_key(*n, *m), a)).collect();
        serde_json::json!({ "underlying": self.underlying, "actions": actions })
    }

    pub fn from_json(algebra: &Arc<SymAlgebra<F>>, v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(bound = "F: Field")]
        struct Raw<F: Field> {
            underlying: SymSeq<F>,
            actions: BTreeMap<String, Matrix<F>>,
        }
        let raw: Raw<F> = serde_json::from_value(v.clone())?;
        let actions = raw
            .actions
            .into_iter()
            .map(|(k, a)| parse_cell_key(&k).map(|c| (c, a)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let m = EModule::new(algebra.clone(), raw.underlying, actions)?;
        for n in 0..=m.cutoff() {
            m.level(n).validate()?;
        }
        Ok(m)
    }
}

impl<F: Field> Serialize for EModule<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Levelwise maps between two modules over the same algebra.
#[derive(Clone, Debug)]
pub struct EModuleMap<F: Field> {
    pub source: EModule<F>,
    pub target: EModule<F>,
    pub components: Vec<Matrix<F>>,
}

impl<F: Field> EModuleMap<F> {
    pub fn new(source: EModule<F>, target: EModule<F>, components: Vec<Matrix<F>>) -> Result<Self> {
        if !same_algebra(&source.algebra, &target.algebra) {
            return Err(Error::AlgebraMismatch("map between modules over different algebras".into()));
        }
        if source.cutoff() != target.cutoff() {
            return Err(Error::CutoffMismatch(source.cutoff(), target.cutoff()));
        }
        if components.len() != source.cutoff() + 1 {
            return Err(Error::Schema("one component per level expected".into()));
        }
        let components = components
            .into_iter()
            .enumerate()
            .map(|(n, c)| c.with_shape(target.dim(n), source.dim(n)))
            .collect::<Result<Vec<_>>>()?;
        Ok(EModuleMap { source, target, components })
    }

    pub fn identity(m: &EModule<F>) -> Self {
        let components = (0..=m.cutoff()).map(|n| Matrix::identity(m.dim(n))).collect();
        EModuleMap { source: m.clone(), target: m.clone(), components }
    }

    pub fn cutoff(&self) -> usize {
        self.source.cutoff()
    }

    /// Equivariance `f σ = σ f` and compatibility `f α = α (f ⊗ 1)`.
    pub fn check(&self) -> Report {
        let c = self.cutoff();
        let mut r = Report::new("module map", c);
        for n in 0..=c {
            let (s, t) = (self.source.level(n), self.target.level(n));
            for i in 1..n {
                if self.components[n].mul(s.gen(i)) != t.gen(i).mul(&self.components[n]) {
                    r.fail("equivariance", &[n, i]);
                }
            }
        }
        let alg = self.source.algebra.clone();
        for n in 0..=c {
            for m in 0..=c - n {
                let lhs = self.components[n + m].mul(self.source.action(n, m));
                let rhs = self.target.action(n, m).mul(&self.components[n].kron(&Matrix::identity(alg.dim(m))));
                if lhs != rhs {
                    r.fail("action compatibility", &[n, m]);
                }
            }
        }
        r
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|c| c.rank() == c.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.components.iter().all(|c| c.rank() == c.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Levels where the map fails to be injective.
    pub fn non_injective_levels(&self) -> Vec<usize> {
        (0..self.components.len()).filter(|&n| self.components[n].rank() != self.components[n].cols()).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Self) -> Self {
        let components = self.components.iter().zip(&other.components).map(|(a, b)| b.mul(a)).collect();
        EModuleMap { source: self.source.clone(), target: other.target.clone(), components }
    }

    pub fn kernel_levels(&self) -> Vec<Subspace<F>> {
        self.components.iter().map(|c| Subspace::from_vectors(c.cols(), c.kernel())).collect()
    }

    pub fn image_levels(&self) -> Vec<Subspace<F>> {
        self.components.iter().map(Matrix::image).collect()
    }

    pub fn cokernel(&self) -> Result<(EModule<F>, EModuleMap<F>)> {
        self.target.quotient(&self.image_levels())
    }

    pub fn kernel(&self) -> Result<(EModule<F>, EModuleMap<F>)> {
        self.source.submodule(&self.kernel_levels())
    }

    /// The map induced on quotients `M/S → N/T`, provided `f(S) ⊆ T`.
    pub fn induced_on_quotients(
        &self,
        src: &[Subspace<F>],
        src_q: &EModule<F>,
        tgt: &[Subspace<F>],
        tgt_q: &EModule<F>,
    ) -> Result<Self> {
        let components = (0..=self.cutoff())
            .map(|n| {
                if !src[n].map(&self.components[n]).is_subspace_of(&tgt[n]) {
                    return Err(Error::InvariantViolation(format!("map does not descend in level {n}")));
                }
                Ok(tgt[n].quotient_map().mul(&self.components[n]).mul(&src[n].quotient_lift()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EModuleMap { source: src_q.clone(), target: tgt_q.clone(), components })
    }
}

#[cfg(test)]
mod tests;
