//! Non-symmetric graded modules over `U(E)`, the adjunction `V ⊣ U`,
//! suspension modules and the torsion criteria.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::hom::{flatten, hom_space};
use super::smash::{a_map, smash_over_e};
use super::{EModule, EModuleMap};
use crate::algebra::{cell_key, kron_vec, parse_cell_key, SymAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{densify, sparsify, Matrix, SparseVec, Subspace};
use crate::rep::SnModule;
use crate::report::Report;
use crate::scalars::Field;
use crate::sgroup::Permutation;
use crate::symseq::SymSeq;

/// A graded right module over the algebra with its group actions forgotten.
#[derive(Clone, Debug)]
pub struct GradedModule<F: Field> {
    algebra: Arc<SymAlgebra<F>>,
    dims: Vec<usize>,
    mult: BTreeMap<(usize, usize), Matrix<F>>,
}

impl<F: Field> PartialEq for GradedModule<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.mult == other.mult
    }
}

impl<F: Field> GradedModule<F> {
    pub fn new(
        algebra: Arc<SymAlgebra<F>>,
        dims: Vec<usize>,
        mult: BTreeMap<(usize, usize), Matrix<F>>,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Schema("graded module needs at least one level".into()));
        }
        let c = dims.len() - 1;
        if c > algebra.cutoff() {
            return Err(Error::CutoffMismatch(c, algebra.cutoff()));
        }
        let mut fixed = BTreeMap::new();
        for n in 0..=c {
            for m in 0..=c - n {
                let a = mult
                    .get(&(n, m))
                    .ok_or_else(|| Error::Schema(format!("missing multiplication {}", cell_key(n, m))))?;
                fixed.insert((n, m), a.clone().with_shape(dims[n + m], dims[n] * algebra.dim(m))?);
            }
        }
        Ok(GradedModule { algebra, dims, mult: fixed })
    }

    pub fn regular(algebra: &Arc<SymAlgebra<F>>) -> Self {
        GradedModule { algebra: algebra.clone(), dims: algebra.dims(), mult: algebra.mults().clone() }
    }

    pub fn zero(algebra: &Arc<SymAlgebra<F>>, cutoff: usize) -> Self {
        let mut mult = BTreeMap::new();
        for n in 0..=cutoff {
            for m in 0..=cutoff - n {
                mult.insert((n, m), Matrix::zeros(0, 0));
            }
        }
        GradedModule { algebra: algebra.clone(), dims: vec![0; cutoff + 1], mult }
    }

    /// `⊕_i E(−n_i)`, blocks in the order given.
    pub fn free(algebra: &Arc<SymAlgebra<F>>, degrees: &[usize], cutoff: usize) -> Result<Self> {
        if cutoff > algebra.cutoff() {
            return Err(Error::CutoffMismatch(cutoff, algebra.cutoff()));
        }
        let dims: Vec<usize> = (0..=cutoff)
            .map(|d| degrees.iter().filter(|&&n| n <= d).map(|&n| algebra.dim(d - n)).sum())
            .collect();
        let mut mult = BTreeMap::new();
        for d in 0..=cutoff {
            for r in 0..=cutoff - d {
                let de = algebra.dim(r);
                let mut cols = Vec::with_capacity(dims[d] * de);
                for (i, &n) in degrees.iter().enumerate() {
                    if n > d {
                        continue;
                    }
                    let off = free_offset(algebra, degrees, i, d + r);
                    let mu = algebra.mult(d - n, r);
                    for a in 0..algebra.dim(d - n) {
                        for e in 0..de {
                            cols.push(mu.col(a * de + e).into_iter().map(|(k, x)| (k + off, x)).collect());
                        }
                    }
                }
                mult.insert((d, r), Matrix::from_sparse_cols(dims[d + r], dims[d] * de, cols));
            }
        }
        Ok(GradedModule { algebra: algebra.clone(), dims, mult })
    }

    pub fn algebra(&self) -> &Arc<SymAlgebra<F>> {
        &self.algebra
    }

    pub fn cutoff(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    pub fn mult(&self, n: usize, m: usize) -> &Matrix<F> {
        &self.mult[&(n, m)]
    }

    pub fn act(&self, n: usize, x: &[(usize, F)], m: usize, e: &[(usize, F)]) -> SparseVec<F> {
        self.mult(n, m).apply_sparse(&kron_vec(x, e, self.algebra.dim(m)))
    }

    pub fn truncate(&self, cutoff: usize) -> Self {
        let c = cutoff.min(self.cutoff());
        let mult = self.mult.iter().filter(|((n, m), _)| n + m <= c).map(|(k, v)| (*k, v.clone())).collect();
        GradedModule { algebra: self.algebra.clone(), dims: self.dims[..=c].to_vec(), mult }
    }

    pub fn check_axioms(&self) -> Report {
        let c = self.cutoff();
        let e = &self.algebra;
        let mut r = Report::new("graded module axioms", c);
        for n in 0..=c {
            for m in 0..=c - n {
                for p in 0..=c - n - m {
                    let left = self.mult(n + m, p).mul(&self.mult(n, m).kron(&Matrix::identity(e.dim(p))));
                    let right = self.mult(n, m + p).mul(&Matrix::identity(self.dim(n)).kron(e.mult(m, p)));
                    if left != right {
                        r.fail("associativity", &[n, m, p]);
                    }
                }
            }
            let u = self.mult(n, 0).mul(&Matrix::identity(self.dim(n)).kron(e.unit()));
            if !u.is_identity() {
                r.fail("unit", &[n]);
            }
        }
        r
    }

    /// `Σ_{i<d} M_i · E_{d−i}`.
    pub fn decomposables(&self, d: usize) -> Subspace<F> {
        let mut s = Subspace::zero(self.dim(d));
        for i in 0..d {
            let r = d - i;
            let a = self.mult(i, r);
            for j in 0..a.cols() {
                s.insert(&a.col(j));
            }
        }
        s
    }

    /// Smallest submodule containing the given elements.
    pub fn closure(&self, gens: &[(usize, SparseVec<F>)]) -> Vec<Subspace<F>> {
        let c = self.cutoff();
        let mut levels: Vec<Subspace<F>> = Vec::with_capacity(c + 1);
        for n in 0..=c {
            let mut s = Subspace::zero(self.dim(n));
            for (d, v) in gens {
                if *d == n {
                    s.insert(v);
                }
            }
            for (i, li) in levels.iter().enumerate() {
                let m = n - i;
                if m == 0 {
                    continue;
                }
                for x in li.basis() {
                    for e in 0..self.algebra.dim(m) {
                        s.insert(&self.act(i, &x, m, &[(e, F::one())]));
                    }
                }
            }
            levels.push(s);
        }
        levels
    }

    pub fn is_submodule(&self, levels: &[Subspace<F>]) -> bool {
        let c = self.cutoff();
        levels.len() == c + 1
            && (0..=c).all(|n| levels[n].ambient() == self.dim(n))
            && (0..=c).all(|n| {
                (1..=c - n).all(|m| {
                    levels[n].basis().iter().all(|x| {
                        (0..self.algebra.dim(m)).all(|e| levels[n + m].contains(&self.act(n, x, m, &[(e, F::one())])))
                    })
                })
            })
    }

    pub fn submodule(&self, levels: &[Subspace<F>]) -> Result<(Self, Vec<Matrix<F>>)> {
        if !self.is_submodule(levels) {
            return Err(Error::InvariantViolation("not a submodule".into()));
        }
        let c = self.cutoff();
        let incl: Vec<Matrix<F>> = levels.iter().map(Subspace::basis_matrix).collect();
        let mut mult = BTreeMap::new();
        for n in 0..=c {
            for m in 0..=c - n {
                let a = levels[n + m]
                    .coords_map()
                    .mul(self.mult(n, m))
                    .mul(&incl[n].kron(&Matrix::identity(self.algebra.dim(m))));
                mult.insert((n, m), a);
            }
        }
        let dims = levels.iter().map(Subspace::dim).collect();
        Ok((GradedModule { algebra: self.algebra.clone(), dims, mult }, incl))
    }

    pub fn quotient(&self, levels: &[Subspace<F>]) -> Result<(Self, Vec<Matrix<F>>)> {
        if !self.is_submodule(levels) {
            return Err(Error::InvariantViolation("not a submodule".into()));
        }
        let c = self.cutoff();
        let proj: Vec<Matrix<F>> = levels.iter().map(Subspace::quotient_map).collect();
        let mut mult = BTreeMap::new();
        for n in 0..=c {
            for m in 0..=c - n {
                let a = proj[n + m]
                    .mul(self.mult(n, m))
                    .mul(&levels[n].quotient_lift().kron(&Matrix::identity(self.algebra.dim(m))));
                mult.insert((n, m), a);
            }
        }
        let dims = levels.iter().map(Subspace::codim).collect();
        Ok((GradedModule { algebra: self.algebra.clone(), dims, mult }, proj))
    }

    /// `M_{≥n}` on the same bases.
    pub fn tail(&self, n: usize) -> Self {
        let levels: Vec<Subspace<F>> = (0..=self.cutoff())
            .map(|d| if d >= n { Subspace::full(self.dim(d)) } else { Subspace::zero(self.dim(d)) })
            .collect();
        self.submodule(&levels).expect("tails are submodules").0
    }

    /// `M[d]_j = M_{d+j}`.
    pub fn shift(&self, d: usize) -> Result<Self> {
        let c = self.cutoff();
        if d > c {
            return Err(Error::Argument(format!("shift by {d} exceeds cutoff {c}")));
        }
        let mut mult = BTreeMap::new();
        for n in 0..=c - d {
            for m in 0..=c - d - n {
                mult.insert((n, m), self.mult(n + d, m).clone());
            }
        }
        Ok(GradedModule { algebra: self.algebra.clone(), dims: self.dims[d..].to_vec(), mult })
    }

    /// Minimal generators (complements of the decomposables) and minimal
    /// relations (kernel of the free cover modulo lower relations).
    pub fn presentation(&self) -> (GradedPresentation<F>, Vec<(usize, SparseVec<F>)>) {
        let c = self.cutoff();
        let mut gens: Vec<(usize, SparseVec<F>)> = Vec::new();
        for d in 0..=c {
            let dec = self.decomposables(d);
            for j in dec.quotient_cols() {
                gens.push((d, vec![(j, F::one())]));
            }
        }
        let degrees: Vec<usize> = gens.iter().map(|(d, _)| *d).collect();
        let free = GradedModule::free(&self.algebra, &degrees, c).expect("cutoff within algebra");
        let cover = cover_map(self, &free, &gens);
        let mut relations = Vec::new();
        let mut closed: Vec<Subspace<F>> = Vec::with_capacity(c + 1);
        for d in 0..=c {
            let mut s = Subspace::zero(free.dim(d));
            for (i, li) in closed.iter().enumerate() {
                let m = d - i;
                if m == 0 {
                    continue;
                }
                for x in li.basis() {
                    for e in 0..self.algebra.dim(m) {
                        s.insert(&free.act(i, &x, m, &[(e, F::one())]));
                    }
                }
            }
            for k in cover[d].kernel() {
                if s.insert(&k) {
                    relations.push((d, k));
                }
            }
            closed.push(s);
        }
        (GradedPresentation { cutoff: c, gen_degrees: degrees, relations }, gens)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mult: BTreeMap<String, &Matrix<F>> = self.mult.iter().map(|((n, m), a)| (cell_key(*n, *m), a)).collect();
        serde_json::json!({ "levels": self.dims, "mult": mult })
    }

    pub fn from_json(algebra: &Arc<SymAlgebra<F>>, v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(bound = "F: Field")]
        struct Raw<F: Field> {
            levels: Vec<usize>,
            mult: BTreeMap<String, Matrix<F>>,
        }
        let raw: Raw<F> = serde_json::from_value(v.clone())?;
        let mult = raw
            .mult
            .into_iter()
            .map(|(k, a)| parse_cell_key(&k).map(|c| (c, a)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        GradedModule::new(algebra.clone(), raw.levels, mult)
    }
}

impl<F: Field> Serialize for GradedModule<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

fn free_offset<F: Field>(alg: &SymAlgebra<F>, degrees: &[usize], i: usize, d: usize) -> usize {
    degrees[..i].iter().filter(|&&n| n <= d).map(|&n| alg.dim(d - n)).sum()
}

/// `π_d: P_d → M_d`, `(i, a) ↦ g_i · a`.
fn cover_map<F: Field>(m: &GradedModule<F>, free: &GradedModule<F>, gens: &[(usize, SparseVec<F>)]) -> Vec<Matrix<F>> {
    (0..=m.cutoff())
        .map(|d| {
            let mut cols = Vec::with_capacity(free.dim(d));
            for (n, g) in gens {
                if *n > d {
                    continue;
                }
                for a in 0..m.algebra.dim(d - n) {
                    cols.push(m.act(*n, g, d - n, &[(a, F::one())]));
                }
            }
            Matrix::from_sparse_cols(m.dim(d), free.dim(d), cols)
        })
        .collect()
}

/// A relation: an element of `⊕_i E(−n_i)` in a given degree.
pub type GradedRelation<F> = (usize, SparseVec<F>);

/// Generators in given degrees and relations among them.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedPresentation<F: Field> {
    pub cutoff: usize,
    pub gen_degrees: Vec<usize>,
    pub relations: Vec<GradedRelation<F>>,
}

impl<F: Field> GradedPresentation<F> {
    pub fn free(degrees: &[usize], cutoff: usize) -> Self {
        GradedPresentation { cutoff, gen_degrees: degrees.to_vec(), relations: Vec::new() }
    }

    /// The presented graded module.
    pub fn module(&self, alg: &Arc<SymAlgebra<F>>) -> Result<GradedModule<F>> {
        self.validate(alg)?;
        let free = GradedModule::free(alg, &self.gen_degrees, self.cutoff)?;
        let levels = free.closure(&self.relations);
        Ok(free.quotient(&levels)?.0)
    }

    fn validate(&self, alg: &SymAlgebra<F>) -> Result<()> {
        if self.cutoff > alg.cutoff() {
            return Err(Error::CutoffMismatch(self.cutoff, alg.cutoff()));
        }
        if let Some(d) = self.gen_degrees.iter().find(|&&d| d > self.cutoff) {
            return Err(Error::DegreeMismatch(format!("generator degree {d} exceeds cutoff {}", self.cutoff)));
        }
        for (d, v) in &self.relations {
            if *d > self.cutoff {
                return Err(Error::DegreeMismatch(format!("relation degree {d} exceeds cutoff {}", self.cutoff)));
            }
            let dim: usize =
                self.gen_degrees.iter().filter(|&&n| n <= *d).map(|&n| alg.dim(d - n)).sum();
            if v.iter().any(|(i, _)| *i >= dim) {
                return Err(Error::DegreeMismatch(format!("relation in degree {d} has entries outside the free module")));
            }
        }
        Ok(())
    }
}

/// `U`: forget the group actions.
pub fn u_functor<F: Field>(m: &EModule<F>) -> GradedModule<F> {
    GradedModule { algebra: m.algebra().clone(), dims: m.dims(), mult: m.actions().clone() }
}

/// `V` of a presentation, with the free module it is a quotient of.
#[derive(Clone, Debug)]
pub struct VImage<F: Field> {
    pub module: EModule<F>,
    pub free: EModule<F>,
    pub relations: Vec<Subspace<F>>,
    pub proj: EModuleMap<F>,
}

/// Element `ι_{n_i} · a` of `⊕_i F_{n_i}E` for a free graded vector.
fn embed_free<F: Field>(free: &EModule<F>, degrees: &[usize], d: usize, v: &[(usize, F)]) -> SparseVec<F> {
    let alg = free.algebra();
    let offsets = free_offsets_sym(alg, degrees, d);
    let mut out: BTreeMap<usize, F> = BTreeMap::new();
    let mut block_start = 0;
    for (i, &n) in degrees.iter().enumerate() {
        if n > d {
            continue;
        }
        let len = alg.dim(d - n);
        let part: SparseVec<F> = v
            .iter()
            .filter(|(k, _)| *k >= block_start && *k < block_start + len)
            .map(|(k, a)| (k - block_start, a.clone()))
            .collect();
        block_start += len;
        if part.is_empty() {
            continue;
        }
        let f = EModule::free(alg, n).expect("level within cutoff");
        let img = f.act(n, &[(0, F::one())], d - n, &part);
        for (k, a) in img {
            let key = offsets[i] + k;
            let cur = out.remove(&key).unwrap_or_else(F::zero);
            let s = cur + a;
            if !s.is_zero() {
                out.insert(key, s);
            }
        }
    }
    out.into_iter().collect()
}

fn free_offsets_sym<F: Field>(alg: &SymAlgebra<F>, degrees: &[usize], d: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(degrees.len());
    let mut off = 0;
    for &n in degrees {
        out.push(off);
        if n <= d {
            off += crate::sgroup::factorial(d) / crate::sgroup::factorial(d - n) * alg.dim(d - n);
        }
    }
    out
}

/// `V(X)` for `X` given by a presentation: `E(−n) ↦ F_nE`, then cokernel.
pub fn v_functor<F: Field>(alg: &Arc<SymAlgebra<F>>, pres: &GradedPresentation<F>) -> Result<VImage<F>> {
    pres.validate(alg)?;
    let c = pres.cutoff;
    let frees = pres
        .gen_degrees
        .iter()
        .map(|&n| EModule::free(alg, n).map(|f| f.truncate(c)))
        .collect::<Result<Vec<_>>>()?;
    let free = if frees.is_empty() { EModule::zero(alg, c) } else { EModule::direct_sum(&frees)? };
    let gens: Vec<(usize, SparseVec<F>)> =
        pres.relations.iter().map(|(d, v)| (*d, embed_free(&free, &pres.gen_degrees, *d, v))).collect();
    let relations = free.closure(&gens)?;
    let (module, proj) = free.quotient(&relations)?;
    Ok(VImage { module, free, relations, proj })
}

/// Unit `η_X: X → UV(X)` and the triangle `U(ε_Y) ∘ η_{U(Y)} = id`.
#[derive(Clone, Debug)]
pub struct UnitCounit<F: Field> {
    pub unit: Vec<Matrix<F>>,
    pub counit: EModuleMap<F>,
    pub v: VImage<F>,
}

/// `η_X` for a graded module with a chosen presentation.
pub fn unit_map<F: Field>(
    x: &GradedModule<F>,
    pres: &GradedPresentation<F>,
    gens: &[(usize, SparseVec<F>)],
    v: &VImage<F>,
) -> Result<Vec<Matrix<F>>> {
    let alg = x.algebra();
    let free = GradedModule::free(alg, &pres.gen_degrees, x.cutoff())?;
    let cover = cover_map(x, &free, gens);
    (0..=x.cutoff())
        .map(|d| {
            let cols = (0..x.dim(d))
                .map(|j| {
                    let mut b = vec![F::zero(); x.dim(d)];
                    b[j] = F::one();
                    let p = cover[d]
                        .solve(&b)
                        .ok_or_else(|| Error::InvariantViolation(format!("generators miss degree {d}")))?;
                    let e = embed_free(&v.free, &pres.gen_degrees, d, &sparsify(&p));
                    Ok(v.proj.components[d].apply_sparse(&e))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_sparse_cols(v.module.dim(d), x.dim(d), cols))
        })
        .collect()
}

/// `ε_Y: VU(Y) → Y` together with `η_{U(Y)}`.
pub fn unit_counit<F: Field>(y: &EModule<F>) -> Result<(UnitCounit<F>, Report)> {
    let alg = y.algebra();
    let x = u_functor(y);
    let (pres, gens) = x.presentation();
    let v = v_functor(alg, &pres)?;
    let yoneda = y.map_from_free(&gens)?;
    let zero: Vec<Subspace<F>> = (0..=y.cutoff()).map(|n| Subspace::zero(y.dim(n))).collect();
    let counit = yoneda.induced_on_quotients(&v.relations, &v.module, &zero, y)?;
    let unit = unit_map(&x, &pres, &gens, &v)?;
    let mut report = Report::new("adjunction", y.cutoff());
    for d in 0..=y.cutoff() {
        if !counit.components[d].mul(&unit[d]).is_identity() {
            report.fail("triangle", &[d]);
        }
    }
    let cr = counit.check();
    for viol in cr.violations {
        report.fail(&format!("counit {}", viol.law), &viol.cell);
    }
    Ok((UnitCounit { unit, counit, v }, report))
}

/// `(M_n, M_nE_1, M_nE_2, …)` with `M_n` a vector space of dimension `base`.
#[derive(Clone, Debug)]
pub struct Suspension<F: Field> {
    pub offset: usize,
    pub base: usize,
    /// Levels `k ↦ M_n ⊗ E_k`, with `Σ_k` acting on `E_k`.
    pub shifted: EModule<F>,
}

impl<F: Field> Suspension<F> {
    /// Dimension in absolute degree `level`.
    pub fn dim(&self, level: usize) -> usize {
        if level < self.offset { 0 } else { self.shifted.dim(level - self.offset) }
    }

    /// The module in absolute degrees with trivial group actions; only for
    /// algebras whose actions are trivial.
    pub fn unshifted(&self) -> Result<EModule<F>> {
        let alg = self.shifted.algebra();
        if !alg.underlying().levels().iter().all(|l| l.gens().iter().all(Matrix::is_identity)) {
            return Err(Error::Unsupported("unshifted suspension needs trivial group actions".into()));
        }
        let c = alg.cutoff();
        let dims: Vec<usize> = (0..=c).map(|d| self.dim(d)).collect();
        let levels = (0..=c).map(|d| SnModule::trivial(d, dims[d])).collect();
        let mut actions = BTreeMap::new();
        for d in 0..=c {
            for r in 0..=c - d {
                let a = if d < self.offset {
                    Matrix::zeros(dims[d + r], dims[d] * alg.dim(r))
                } else {
                    self.shifted.action(d - self.offset, r).clone()
                };
                actions.insert((d, r), a);
            }
        }
        EModule::new(alg.clone(), SymSeq::new(levels)?, actions)
    }
}

pub fn suspension<F: Field>(base: usize, offset: usize, alg: &Arc<SymAlgebra<F>>) -> Result<Suspension<F>> {
    if offset > alg.cutoff() {
        return Err(Error::Argument(format!("suspension degree {offset} exceeds cutoff {}", alg.cutoff())));
    }
    let e = EModule::regular(alg).truncate(alg.cutoff() - offset);
    let shifted = if base == 0 {
        EModule::zero(alg, alg.cutoff() - offset)
    } else {
        EModule::direct_sum(&vec![e; base])?
    };
    Ok(Suspension { offset, base, shifted })
}

/// `VU(M) → M[n] ∧_E F_nE` for `M` vanishing below `n` and generated in
/// degree `n`; reports whether it is a well-defined isomorphism.
pub fn vu_shift_map<F: Field>(m: &EModule<F>, n: usize) -> Result<(EModuleMap<F>, Report)> {
    let alg = m.algebra();
    if (0..n.min(m.cutoff() + 1)).any(|d| m.dim(d) > 0) {
        return Err(Error::Argument(format!("module is nonzero below degree {n}")));
    }
    let x = u_functor(m);
    let (pres, gens) = x.presentation();
    if gens.iter().any(|(d, _)| *d != n) {
        return Err(Error::Argument(format!("module is not generated in degree {n}")));
    }
    let v = v_functor(alg, &pres)?;
    let sm = smash_over_e(&m.shift(n)?, &EModule::free(alg, n)?)?;
    let mut report = Report::new("VU(M) = M[n] smash F_nE", m.cutoff());
    if sm.cutoff() != m.cutoff() {
        return Err(Error::CutoffMismatch(sm.cutoff(), m.cutoff()));
    }
    let images: Vec<(usize, SparseVec<F>)> = gens
        .iter()
        .map(|(_, g)| (n, sm.class(n, 0, &Permutation::identity(n), g, &[(0, F::one())])))
        .collect();
    let yoneda = sm.module.map_from_free(&images)?;
    let zero: Vec<Subspace<F>> = (0..=sm.cutoff()).map(|d| Subspace::zero(sm.module.dim(d))).collect();
    let map = match yoneda.induced_on_quotients(&v.relations, &v.module, &zero, &sm.module) {
        Ok(f) => f,
        Err(_) => {
            report.fail("relations vanish", &[n]);
            return Ok((yoneda, report));
        }
    };
    for d in map.non_injective_levels() {
        report.fail("injective", &[d]);
    }
    for d in 0..=map.cutoff() {
        if map.components[d].rank() != map.components[d].rows() {
            report.fail("surjective", &[d]);
        }
    }
    for viol in map.check().violations {
        report.fail(&viol.law, &viol.cell);
    }
    Ok((map, report))
}

/// Largest degree of an indecomposable of `U(E)` within the cutoff.
pub fn nonsymmetric_generation_degree<F: Field>(alg: &Arc<SymAlgebra<F>>) -> Result<usize> {
    let mut top = 0;
    for d in 1..=alg.cutoff() {
        let mut dec = Subspace::zero(alg.dim(d));
        for i in 1..d {
            let mu = alg.mult(i, d - i);
            for j in 0..mu.cols() {
                dec.insert(&mu.col(j));
            }
        }
        if !dec.is_full() {
            top = d;
        }
    }
    if top > 0 && 2 * top > alg.cutoff() {
        return Err(Error::Unsupported(format!(
            "indecomposables up to degree {top} at cutoff {}: finite generation not certified",
            alg.cutoff()
        )));
    }
    Ok(top.max(1))
}

/// Per-degree annihilation data for a graded module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionVerdict {
    pub generator_degree: usize,
    pub cutoff: usize,
    /// For each degree `d < cutoff`: the least multiple `Nn` of the generator
    /// degree with `M_d · A_{≥Nn} = 0` inside the window, or `None`.
    pub annihilation: Vec<Option<usize>>,
    pub torsion: bool,
    pub note: String,
}

impl TorsionVerdict {
    pub fn max_annihilation(&self) -> Option<usize> {
        self.annihilation.iter().try_fold(0, |acc, a| a.map(|a| acc.max(a)))
    }
}

pub fn is_torsion<F: Field>(m: &GradedModule<F>) -> Result<TorsionVerdict> {
    let n = nonsymmetric_generation_degree(m.algebra())?;
    let c = m.cutoff();
    let annihilation = (0..c)
        .map(|d| {
            if m.dim(d) == 0 {
                return Some(0);
            }
            let s = (0..=c - d).rev().take_while(|&t| m.mult(d, t).is_zero()).last()?;
            Some(s.div_ceil(n) * n)
        })
        .collect::<Vec<_>>();
    let torsion = annihilation.iter().all(Option::is_some);
    Ok(TorsionVerdict {
        generator_degree: n,
        cutoff: c,
        annihilation,
        torsion,
        note: format!("relative to degrees below {c}"),
    })
}

/// Verdict of the closedness test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedVerdict {
    pub closed: bool,
    pub n_max: usize,
    pub cutoff: usize,
    /// `(n, d)` pairs where `M_d → Hom(A_{≥n}, M[d])` is not bijective.
    pub failures: Vec<(usize, usize)>,
    pub tested: usize,
}

/// For `1 ≤ n ≤ n_max` and `d ≥ 0` with `n + d ≤ cutoff`, checks that
/// restriction along `A_{≥n} ⊂ A` is bijective on maps into `M[d]`.
pub fn is_tors_closed<F: Field>(m: &GradedModule<F>, n_max: usize) -> Result<ClosedVerdict> {
    let c = m.cutoff();
    let a = GradedModule::regular(m.algebra()).truncate(c);
    let mut failures = Vec::new();
    let mut tested = 0;
    for n in 1..=n_max {
        for d in 0..=c.saturating_sub(n) {
            if n + d > c {
                continue;
            }
            tested += 1;
            let target = m.shift(d)?;
            let top = target.cutoff();
            let source = a.tail(n).truncate(top);
            let h = hom_space(&source, &target, top)?;
            let flat: Vec<SparseVec<F>> = h.basis.iter().map(|f| flatten(f)).collect();
            let total: usize = (0..=top).map(|j| source.dim(j) * target.dim(j)).sum();
            let span = Subspace::from_vectors(total, flat);
            let coords = span.coords_map();
            let cols = (0..m.dim(d))
                .map(|x| {
                    let comps: Vec<Matrix<F>> = (0..=top)
                        .map(|j| {
                            let cols = (0..source.dim(j))
                                .map(|s| m.act(d, &[(x, F::one())], j, &source_incl(&source, &a, j, s)))
                                .collect();
                            Matrix::from_sparse_cols(target.dim(j), source.dim(j), cols)
                        })
                        .collect();
                    coords.apply_sparse(&flatten(&comps))
                })
                .collect();
            let r = Matrix::from_sparse_cols(h.dim(), m.dim(d), cols);
            if h.dim() != m.dim(d) || r.rank() != m.dim(d) {
                failures.push((n, d));
            }
        }
    }
    Ok(ClosedVerdict { closed: failures.is_empty(), n_max, cutoff: c, failures, tested })
}

fn source_incl<F: Field>(src: &GradedModule<F>, a: &GradedModule<F>, j: usize, s: usize) -> SparseVec<F> {
    // tails keep the ambient bases, so the inclusion is the identity where nonzero
    debug_assert!(src.dim(j) == 0 || src.dim(j) == a.dim(j));
    vec![(s, F::one())]
}

/// `coker(a_n)` as a graded module and its torsion verdict.
pub fn a_map_cokernel_torsion<F: Field>(alg: &Arc<SymAlgebra<F>>, n: usize) -> Result<(GradedModule<F>, TorsionVerdict)> {
    let (_, map) = a_map(alg, n)?;
    let (coker, _) = map.cokernel()?;
    let g = u_functor(&coker);
    let v = is_torsion(&g)?;
    Ok((g, v))
}

/// `L_{Nn} = (M_0, …, M_{Nn}, M_{Nn}A_1, …)` and `L_{≥Nn}` inside `M`.
#[derive(Clone, Debug)]
pub struct Filtration<F: Field> {
    pub step: usize,
    pub stages: Vec<Vec<Subspace<F>>>,
    pub tails: Vec<Vec<Subspace<F>>>,
}

impl<F: Field> Filtration<F> {
    pub fn new(m: &GradedModule<F>, step: usize) -> Self {
        let c = m.cutoff();
        let step = step.max(1);
        let mut stages = Vec::new();
        let mut tails = Vec::new();
        for k in 0..=c / step {
            let b = k * step;
            let gens: Vec<(usize, SparseVec<F>)> = (0..m.dim(b)).map(|j| (b, vec![(j, F::one())])).collect();
            let tail = m.closure(&gens);
            let stage = (0..=c)
                .map(|d| if d <= b { Subspace::full(m.dim(d)) } else { tail[d].clone() })
                .collect();
            stages.push(stage);
            tails.push(tail);
        }
        Filtration { step, stages, tails }
    }

    /// Submodules, increasing, exhaustive, with torsion subquotients.
    pub fn check(&self, m: &GradedModule<F>) -> Result<Report> {
        let c = m.cutoff();
        let mut r = Report::new("filtration", c);
        for (k, (s, t)) in self.stages.iter().zip(&self.tails).enumerate() {
            if !m.is_submodule(s) {
                r.fail("submodule", &[k * self.step]);
            }
            if !m.is_submodule(t) || !(0..=c).all(|d| t[d].is_subspace_of(&s[d])) {
                r.fail("tail submodule", &[k * self.step]);
            }
            if k > 0 && !(0..=c).all(|d| self.stages[k - 1][d].is_subspace_of(&s[d])) {
                r.fail("increasing", &[k * self.step]);
            }
            if m.is_submodule(s) && m.is_submodule(t) {
                let (ls, _) = m.submodule(s)?;
                let rel: Vec<Subspace<F>> =
                    (0..=c).map(|d| Subspace::from_vectors(s[d].dim(), t[d].basis().iter().map(|v| coords_in(&s[d], v)))).collect();
                let (q, _) = ls.quotient(&rel)?;
                let bounded = (0..=c).all(|d| d <= k * self.step || q.dim(d) == 0);
                let tv = is_torsion(&q)?;
                if !bounded || !tv.torsion {
                    r.fail("torsion quotient", &[k * self.step]);
                }
            }
        }
        if let Some(last) = self.stages.last() {
            if !(0..=c).all(|d| last[d].is_full()) {
                r.fail("exhaustive", &[c]);
            }
        }
        Ok(r)
    }
}

fn coords_in<F: Field>(s: &Subspace<F>, v: &[(usize, F)]) -> SparseVec<F> {
    let dense = densify(v, s.ambient());
    sparsify(&s.echelon().pivot_cols().into_iter().map(|p| dense[p].clone()).collect::<Vec<_>>())
}

/// The tail `A_{≥n}` of a module, handy for tests.
pub fn tail_levels<F: Field>(m: &GradedModule<F>, n: usize) -> Vec<Subspace<F>> {
    (0..=m.cutoff())
        .map(|d| if d >= n { Subspace::full(m.dim(d)) } else { Subspace::zero(m.dim(d)) })
        .collect()
}

/// Trivial-action check on the algebra.
pub fn has_trivial_algebra_action<F: Field>(alg: &SymAlgebra<F>) -> bool {
    alg.underlying().levels().iter().all(|l| l.gens().iter().all(Matrix::is_identity))
}
