//! `M ∧_E N` as the quotient of the Day tensor by the balancing relations
//! `(x·e) ∧ y ~ x ∧ (e·y)`, where `e·y = χ_{q,r}(y·e)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{same_algebra, EModule, EModuleMap};
use crate::algebra::SymAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{sparsify, Matrix, SparseVec, Subspace};
use crate::rep::SnModule;
use crate::report::Report;
use crate::scalars::Field;
use crate::sgroup::{chi, Permutation};
use crate::symseq::{day_tensor, DayLevel, SymSeq};

/// A smash product together with the data needed to name its elements.
#[derive(Clone, Debug)]
pub struct Smash<F: Field> {
    pub module: EModule<F>,
    pub day: SymSeq<F>,
    pub layouts: Vec<DayLevel>,
    pub relations: Vec<Subspace<F>>,
}

fn lowest(m: &EModule<impl Field>) -> usize {
    m.connectivity()
}

fn pad<F: Field>(s: &SymSeq<F>, c: usize) -> Result<SymSeq<F>> {
    if s.cutoff() >= c {
        return Ok(s.truncate(c));
    }
    let mut levels = s.levels().to_vec();
    levels.extend((s.cutoff() + 1..=c).map(SnModule::zero));
    SymSeq::new(levels)
}

/// Cutoff of `M ∧_E N`: the largest level determined by the inputs.
pub fn smash_cutoff<F: Field>(m: &EModule<F>, n: &EModule<F>) -> usize {
    let c = m.algebra().cutoff();
    c.min(m.cutoff() + lowest(n)).min(n.cutoff() + lowest(m))
}

impl<F: Field> Smash<F> {
    pub fn cutoff(&self) -> usize {
        self.module.cutoff()
    }

    /// Day-tensor vector of `[g; x ⊗ y]` with `x ∈ M_p`, `y ∈ N_{t−p}`.
    pub fn day_vector(&self, t: usize, p: usize, g: &Permutation, x: &[(usize, F)], y: &[(usize, F)]) -> SparseVec<F> {
        let s = self.layouts[t].summand(p);
        let gi = s.shuffle_index(g);
        let mut out: SparseVec<F> = Vec::with_capacity(x.len() * y.len());
        for (i, a) in x {
            for (j, b) in y {
                out.push((s.at(gi, *i, *j), a.clone() * b.clone()));
            }
        }
        out.sort_by_key(|e| e.0);
        out
    }

    /// Class of a Day-tensor vector in the smash product.
    pub fn project(&self, t: usize, v: &[(usize, F)]) -> SparseVec<F> {
        sparsify(&self.relations[t].quotient_coords(v))
    }

    /// Class of `[g; x ⊗ y]`.
    pub fn class(&self, t: usize, p: usize, g: &Permutation, x: &[(usize, F)], y: &[(usize, F)]) -> SparseVec<F> {
        self.project(t, &self.day_vector(t, p, g, x, y))
    }

    /// Day basis index lifting each basis element of level `t`.
    pub fn lifts(&self, t: usize) -> Vec<usize> {
        self.relations[t].quotient_cols()
    }
}

/// `M ∧_E N`.
pub fn smash_over_e<F: Field>(m: &EModule<F>, n: &EModule<F>) -> Result<Smash<F>> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch("smash over different algebras".into()));
    }
    let alg: Arc<SymAlgebra<F>> = m.algebra().clone();
    let rc = smash_cutoff(m, n);
    let (mu, nu) = (pad(m.underlying(), rc)?, pad(n.underlying(), rc)?);
    let (md, nd) = (mu.dims(), nu.dims());
    let day = day_tensor(&mu, &nu)?;
    let layouts: Vec<DayLevel> = (0..=rc).map(|t| DayLevel::new(&md, &nd, t)).collect();
    let act_m = |p: usize, r: usize, x: usize, e: usize| -> SparseVec<F> {
        m.act(p, &[(x, F::one())], r, &[(e, F::one())])
    };
    // e·y = χ_{q,r}(y·e), for y ∈ N_q, e ∈ E_r
    let left_n = |r: usize, e: usize, q: usize, y: usize| -> SparseVec<F> {
        let ye = n.act(q, &[(y, F::one())], r, &[(e, F::one())]);
        n.level(q + r).act(&chi(q, r), &ye)
    };
    let mut relations = Vec::with_capacity(rc + 1);
    for t in 0..=rc {
        let lay = &layouts[t];
        let mut seeds = Vec::new();
        for p in 0..=t {
            for r in 1..=t - p {
                let q = t - p - r;
                if md[p] == 0 || nd[q] == 0 || alg.dim(r) == 0 {
                    continue;
                }
                let (sl, sr) = (lay.summand(p + r), lay.summand(p));
                let (il, ir) = (sl.shuffle_index(&Permutation::identity(t)), sr.shuffle_index(&Permutation::identity(t)));
                for x in 0..md[p] {
                    for e in 0..alg.dim(r) {
                        let xe = act_m(p, r, x, e);
                        for y in 0..nd[q] {
                            let ey = left_n(r, e, q, y);
                            let mut v: BTreeMap<usize, F> = BTreeMap::new();
                            for (i, a) in &xe {
                                let k = sl.at(il, *i, y);
                                let cur = v.remove(&k).unwrap_or_else(F::zero);
                                v.insert(k, cur + a.clone());
                            }
                            for (j, b) in &ey {
                                let k = sr.at(ir, x, *j);
                                let cur = v.remove(&k).unwrap_or_else(F::zero);
                                v.insert(k, cur - b.clone());
                            }
                            let v: SparseVec<F> = v.into_iter().filter(|(_, a)| !a.is_zero()).collect();
                            if !v.is_empty() {
                                seeds.push(v);
                            }
                        }
                    }
                }
            }
        }
        relations.push(day.level(t).orbit_span(seeds));
    }
    let mut levels = Vec::with_capacity(rc + 1);
    for t in 0..=rc {
        levels.push(day.level(t).quotient(&relations[t]).0);
    }
    let underlying = SymSeq::new(levels)?;
    let partial = Smash {
        module: EModule::from_parts(alg.clone(), underlying.clone(), BTreeMap::new()),
        day,
        layouts,
        relations,
    };
    let mut actions = BTreeMap::new();
    for t in 0..=rc {
        let lifts = partial.lifts(t);
        for r in 0..=rc - t {
            let de = alg.dim(r);
            let mut cols = Vec::with_capacity(lifts.len() * de);
            for &idx in &lifts {
                let s = partial.layouts[t].locate(idx);
                let (gi, i, j) = s.split(idx);
                let g = s.shuffles[gi].block_sum(&Permutation::identity(r));
                for e in 0..de {
                    let ye = n.act(s.q, &[(j, F::one())], r, &[(e, F::one())]);
                    cols.push(partial.class(t + r, s.p, &g, &[(i, F::one())], &ye));
                }
            }
            actions.insert((t, r), Matrix::from_sparse_cols(underlying.level(t + r).dim(), cols.len(), cols));
        }
    }
    Ok(Smash { module: EModule::from_parts(alg, underlying, actions), ..partial })
}

/// `f ∧ g: M ∧_E N → M' ∧_E N'` on precomputed smash products.
pub fn smash_maps<F: Field>(
    src: &Smash<F>,
    tgt: &Smash<F>,
    f: &EModuleMap<F>,
    g: &EModuleMap<F>,
) -> Result<EModuleMap<F>> {
    let c = src.cutoff();
    if tgt.cutoff() != c {
        return Err(Error::CutoffMismatch(c, tgt.cutoff()));
    }
    let comp = |m: &EModuleMap<F>, d: usize, i: usize| -> SparseVec<F> {
        if d <= m.cutoff() { m.components[d].col(i) } else { Vec::new() }
    };
    let components = (0..=c)
        .map(|t| {
            let cols = src
                .lifts(t)
                .into_iter()
                .map(|idx| {
                    let s = src.layouts[t].locate(idx);
                    let (gi, i, j) = s.split(idx);
                    tgt.class(t, s.p, &s.shuffles[gi], &comp(f, s.p, i), &comp(g, s.q, j))
                })
                .collect();
            Matrix::from_sparse_cols(tgt.module.dim(t), src.module.dim(t), cols)
        })
        .collect();
    EModuleMap::new(src.module.clone(), tgt.module.clone(), components)
}

/// The evaluation `E[n] ∧_E F_nE → E`,
/// `[g; x ∧ (h ⊗ y)] ↦ g (1_p × h) μ(χ_{n,p} x ⊗ y)`.
pub fn a_map<F: Field>(alg: &Arc<SymAlgebra<F>>, n: usize) -> Result<(Smash<F>, EModuleMap<F>)> {
    let e = EModule::regular(alg);
    let shifted = e.shift(n)?;
    let free = EModule::free(alg, n)?;
    let sm = smash_over_e(&shifted, &free)?;
    let c = sm.cutoff();
    let target = e.truncate(c);
    let components = (0..=c)
        .map(|t| {
            let cols = sm
                .lifts(t)
                .into_iter()
                .map(|idx| {
                    let s = sm.layouts[t].locate(idx);
                    let (gi, i, j) = s.split(idx);
                    let (p, q) = (s.p, s.q);
                    let dy = alg.dim(q - n);
                    let (hi, y) = (j / dy, j % dy);
                    let h = crate::sgroup::coset_reps(q, q - n).unwrap()[hi].clone();
                    let x = alg.level(n + p).act(&chi(n, p), &[(i, F::one())]);
                    let xy = alg.mult(n + p, q - n).apply_sparse(&crate::algebra::kron_vec(&x, &[(y, F::one())], dy));
                    let perm = s.shuffles[gi].compose(&Permutation::identity(p).block_sum(&h));
                    alg.level(t).act(&perm, &xy)
                })
                .collect();
            Matrix::from_sparse_cols(target.dim(t), sm.module.dim(t), cols)
        })
        .collect();
    let map = EModuleMap::new(sm.module.clone(), target, components)?;
    Ok((sm, map))
}

/// `F_mE ∧_E F_nE ≅ F_{m+n}E` through `ι_{m+n} ↦ [id; ι_m ∧ ι_n]`.
pub fn free_smash_iso<F: Field>(alg: &Arc<SymAlgebra<F>>, m: usize, n: usize) -> Result<Report> {
    let c = alg.cutoff();
    let mut r = Report::new("free smash", c);
    if m + n > c {
        r.note(format!("F_{m}E smash F_{n}E beyond cutoff {c}"));
        return Ok(r);
    }
    let sm = smash_over_e(&EModule::free(alg, m)?, &EModule::free(alg, n)?)?;
    let z = sm.class(m + n, m, &Permutation::identity(m + n), &[(0, F::one())], &[(0, F::one())]);
    let f = sm.module.map_from_free(&[(m + n, z)])?;
    for d in f.non_injective_levels() {
        r.fail("injective", &[m, n, d]);
    }
    for (d, comp) in f.components.iter().enumerate() {
        if comp.rank() != comp.rows() {
            r.fail("surjective", &[m, n, d]);
        }
    }
    for v in f.check().violations {
        r.fail(&v.law, &v.cell);
    }
    Ok(r)
}

/// Whether `X ∧_E f` is injective in every level, for a monomorphism `f`.
pub fn smash_preserves_injectivity<F: Field>(x: &EModule<F>, f: &EModuleMap<F>) -> Result<Report> {
    let mut r = Report::new("flatness", f.cutoff());
    if !f.is_injective() {
        return Err(Error::Argument("input map is not injective".into()));
    }
    let src = smash_over_e(x, &f.source)?;
    let tgt = smash_over_e(x, &f.target)?;
    let id = EModuleMap::identity(x);
    let g = smash_maps(&src, &tgt, &id, f)?;
    for d in g.non_injective_levels() {
        r.fail("injective", &[d]);
    }
    Ok(r)
}
