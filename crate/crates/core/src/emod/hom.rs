//! Module homomorphisms by exact linear solve, and the truncated internal hom.
//!
//! Unknown maps are carried as images that are linear forms in parameters
//! θ. Each level is swept once: decomposable vectors get forced images, the
//! span is closed under the group generators, and every linear dependency
//! found on the way becomes a linear constraint on θ.

use crate::error::{Error, Result};
use crate::linalg::{axpy, densify, scale_sparse, sparse_get, sparsify, Echelon, Matrix, SparseVec, Subspace};
use crate::rep::SnModule;
use crate::report::Report;
use crate::scalars::Field;
use crate::sgroup::chi;

use super::graded::GradedModule;
use super::EModule;

/// What the solver needs to know about a module.
pub trait ModuleData<F: Field> {
    fn top(&self) -> usize;
    fn dim(&self, n: usize) -> usize;
    /// Group generators acting on level `n`; empty for graded modules.
    fn gens(&self, n: usize) -> &[Matrix<F>];
    fn action(&self, n: usize, r: usize) -> &Matrix<F>;
    fn alg_dim(&self, r: usize) -> usize;
}

impl<F: Field> ModuleData<F> for EModule<F> {
    fn top(&self) -> usize {
        self.cutoff()
    }
    fn dim(&self, n: usize) -> usize {
        EModule::dim(self, n)
    }
    fn gens(&self, n: usize) -> &[Matrix<F>] {
        self.level(n).gens()
    }
    fn action(&self, n: usize, r: usize) -> &Matrix<F> {
        EModule::action(self, n, r)
    }
    fn alg_dim(&self, r: usize) -> usize {
        self.algebra().dim(r)
    }
}

impl<F: Field> ModuleData<F> for GradedModule<F> {
    fn top(&self) -> usize {
        self.cutoff()
    }
    fn dim(&self, n: usize) -> usize {
        GradedModule::dim(self, n)
    }
    fn gens(&self, _n: usize) -> &[Matrix<F>] {
        &[]
    }
    fn action(&self, n: usize, r: usize) -> &Matrix<F> {
        self.mult(n, r)
    }
    fn alg_dim(&self, r: usize) -> usize {
        self.algebra().dim(r)
    }
}

type Forms<F> = Vec<SparseVec<F>>;

fn forms_axpy<F: Field>(w: &mut Forms<F>, c: &F, other: &Forms<F>) {
    for (a, b) in w.iter_mut().zip(other) {
        if !b.is_empty() {
            *a = axpy(a, c, b);
        }
    }
}

fn apply_to_forms<F: Field>(m: &Matrix<F>, w: &Forms<F>) -> Forms<F> {
    let mut out: Forms<F> = vec![Vec::new(); m.rows()];
    for (l, form) in w.iter().enumerate() {
        if form.is_empty() {
            continue;
        }
        for (k, a) in m.col(l) {
            out[k] = axpy(&out[k], &a, form);
        }
    }
    out
}

/// Echelon over a source level with images riding along.
struct AugEchelon<F: Field> {
    n: usize,
    rows: Vec<(SparseVec<F>, Forms<F>)>,
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> AugEchelon<F> {
    fn new(n: usize) -> Self {
        AugEchelon { n, rows: Vec::new(), pivot_row: vec![None; n] }
    }

    /// Inserts `(v, w)`; on dependency pushes the residual image forms into
    /// `constraints`. Returns whether the rank grew.
    fn insert(&mut self, v: &[(usize, F)], mut w: Forms<F>, constraints: &mut Vec<SparseVec<F>>) -> bool {
        let mut d = densify(v, self.n);
        for (r, img) in &self.rows {
            let p = r[0].0;
            if !d[p].is_zero() {
                let c = d[p].clone();
                for (j, x) in r {
                    d[*j] = d[*j].clone() - c.clone() * x.clone();
                }
                forms_axpy(&mut w, &-c, img);
            }
        }
        let r = sparsify(&d);
        if r.is_empty() {
            constraints.extend(w.into_iter().filter(|f| !f.is_empty()));
            return false;
        }
        let (q, lead) = r[0].clone();
        let inv = F::one() / lead;
        let r = scale_sparse(&r, &inv);
        for f in w.iter_mut() {
            *f = scale_sparse(f, &inv);
        }
        for (row, img) in &mut self.rows {
            let c = sparse_get(row, q);
            if !c.is_zero() {
                *row = axpy(row, &-c.clone(), &r);
                forms_axpy(img, &-c, &w);
            }
        }
        self.pivot_row[q] = Some(self.rows.len());
        self.rows.push((r, w));
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn first_free(&self) -> Option<usize> {
        (0..self.n).find(|&j| self.pivot_row[j].is_none())
    }

    /// Image forms of each unit vector; requires full rank.
    fn unit_images(&self) -> Vec<Forms<F>> {
        (0..self.n).map(|j| self.rows[self.pivot_row[j].unwrap()].1.clone()).collect()
    }
}

/// A basis of the maps `S → T` on levels `0..=top`.
#[derive(Clone, Debug)]
pub struct HomSpace<F: Field> {
    pub top: usize,
    pub basis: Vec<Vec<Matrix<F>>>,
}

impl<F: Field> HomSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Flattens per-level components into a single vector.
pub fn flatten<F: Field>(components: &[Matrix<F>]) -> SparseVec<F> {
    let mut out = Vec::new();
    let mut off = 0;
    for c in components {
        for (i, row) in c.sparse_rows().into_iter().enumerate() {
            out.extend(row.into_iter().map(|(j, a)| (off + i * c.cols() + j, a)));
        }
        off += c.rows() * c.cols();
    }
    out
}

fn unflatten<F: Field>(v: &[(usize, F)], shapes: &[(usize, usize)]) -> Vec<Matrix<F>> {
    let mut out = Vec::with_capacity(shapes.len());
    let mut off = 0;
    let mut it = v.iter().peekable();
    for &(r, c) in shapes {
        let mut rows: Vec<SparseVec<F>> = vec![Vec::new(); r];
        while let Some((k, a)) = it.peek() {
            if *k >= off + r * c {
                break;
            }
            let local = k - off;
            rows[local / c].push((local % c, a.clone()));
            it.next();
        }
        out.push(Matrix::from_sparse_rows(r, c, rows));
        off += r * c;
    }
    out
}

/// All equivariant, action-compatible maps `S → T` on levels `0..=top`.
pub fn hom_space<F: Field, S: ModuleData<F>, T: ModuleData<F>>(s: &S, t: &T, top: usize) -> Result<HomSpace<F>> {
    if top > s.top() || top > t.top() {
        return Err(Error::Argument(format!("hom level {top} exceeds a module cutoff")));
    }
    let mut params = 0usize;
    let mut constraints: Vec<SparseVec<F>> = Vec::new();
    let mut levels: Vec<Vec<Forms<F>>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let (ds, dt) = (s.dim(n), t.dim(n));
        let mut ech = AugEchelon::new(ds);
        let mut queue: Vec<(SparseVec<F>, Forms<F>)> = Vec::new();
        for i in 0..n {
            let r = n - i;
            let de = s.alg_dim(r);
            if s.dim(i) == 0 || de == 0 {
                continue;
            }
            let (as_, at) = (s.action(i, r), t.action(i, r));
            for (x, fx) in levels[i].iter().enumerate() {
                for e in 0..de {
                    let v = as_.col(x * de + e);
                    let mut w: Forms<F> = vec![Vec::new(); dt];
                    for (rr, form) in fx.iter().enumerate() {
                        if form.is_empty() {
                            continue;
                        }
                        for (k, a) in at.col(rr * de + e) {
                            w[k] = axpy(&w[k], &a, form);
                        }
                    }
                    queue.push((v, w));
                }
            }
        }
        loop {
            while let Some((v, w)) = queue.pop() {
                if ech.insert(&v, w.clone(), &mut constraints) {
                    for (gs, gt) in s.gens(n).iter().zip(t.gens(n)) {
                        queue.push((gs.apply_sparse(&v), apply_to_forms(gt, &w)));
                    }
                }
            }
            if ech.rank() == ds {
                break;
            }
            let c = ech.first_free().expect("rank deficit leaves a free column");
            let w: Forms<F> = (0..dt).map(|r| vec![(params + r, F::one())]).collect();
            params += dt;
            queue.push((vec![(c, F::one())], w));
        }
        levels.push(ech.unit_images());
    }
    let mut cons = Echelon::new(params);
    for c in &constraints {
        cons.insert(c);
    }
    let shapes: Vec<(usize, usize)> = (0..=top).map(|n| (t.dim(n), s.dim(n))).collect();
    let sols = cons.kernel_basis();
    let raw: Vec<SparseVec<F>> = sols
        .iter()
        .map(|theta| {
            let comps: Vec<Matrix<F>> = levels
                .iter()
                .enumerate()
                .map(|(n, cols)| {
                    let data = cols
                        .iter()
                        .map(|forms| {
                            forms
                                .iter()
                                .enumerate()
                                .filter_map(|(r, f)| {
                                    let x = dot(f, theta);
                                    (!x.is_zero()).then_some((r, x))
                                })
                                .collect()
                        })
                        .collect();
                    Matrix::from_sparse_cols(shapes[n].0, shapes[n].1, data)
                })
                .collect();
            flatten(&comps)
        })
        .collect();
    let total: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let canon = Subspace::from_vectors(total, raw);
    let basis = canon.basis().iter().map(|v| unflatten(v, &shapes)).collect();
    Ok(HomSpace { top, basis })
}

fn dot<F: Field>(a: &[(usize, F)], b: &[(usize, F)]) -> F {
    let (mut i, mut j) = (0, 0);
    let mut acc = F::zero();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = acc + a[i].1.clone() * b[j].1.clone();
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// `[M, N]_k = Hom(M, N[k])` with its `Σ_k`-action, computed from levels
/// `≤ valid_up_to`.
#[derive(Clone, Debug)]
pub struct HomLevel<F: Field> {
    pub k: usize,
    pub module: SnModule<F>,
    pub space: HomSpace<F>,
    pub valid_up_to: usize,
}

pub fn internal_hom_level<F: Field>(m: &EModule<F>, n: &EModule<F>, k: usize) -> Result<HomLevel<F>> {
    if k > n.cutoff() {
        return Err(Error::Argument(format!("hom level {k} exceeds cutoff {}", n.cutoff())));
    }
    let shifted = n.shift(k)?;
    let top = m.cutoff().min(shifted.cutoff());
    let space = hom_space(m, &shifted, top)?;
    let flat: Vec<SparseVec<F>> = space.basis.iter().map(|f| flatten(f)).collect();
    let total: usize = (0..=top).map(|j| m.dim(j) * shifted.dim(j)).sum();
    let sub = Subspace::from_vectors(total, flat.clone());
    let coords = sub.coords_map();
    let gens = (1..k)
        .map(|i| {
            let cols = space
                .basis
                .iter()
                .map(|f| {
                    let moved: Vec<Matrix<F>> =
                        f.iter().enumerate().map(|(j, c)| n.level(k + j).gen(i).mul(c)).collect();
                    coords.apply_sparse(&flatten(&moved))
                })
                .collect();
            Matrix::from_sparse_cols(space.dim(), space.dim(), cols)
        })
        .collect();
    let module = SnModule::new(k, space.dim(), gens)?;
    Ok(HomLevel { k, module, space, valid_up_to: top })
}

/// `[F_mE, M]_k ≅ M[m]_k` via evaluation at the generator followed by `χ_{k,m}`.
pub fn shift_iso_check<F: Field>(m: &EModule<F>, gen_level: usize, k: usize) -> Result<Report> {
    let alg = m.algebra();
    let mut report = Report::new("hom-shift", m.cutoff());
    if gen_level + k > m.cutoff() {
        report.note(format!("[F_{gen_level}E, M]_{k} not computable at cutoff {}", m.cutoff()));
        return Ok(report);
    }
    let free = EModule::free(alg, gen_level)?.truncate(m.cutoff());
    let h = internal_hom_level(&free, m, k)?;
    let target = m.level(gen_level + k).restrict_tail(gen_level);
    let tw = m.level(gen_level + k).action_of(&chi(k, gen_level))?;
    let cols = h.space.basis.iter().map(|f| tw.apply_sparse(&f[gen_level].col(0))).collect();
    let phi = Matrix::from_sparse_cols(target.dim(), h.space.dim(), cols);
    if phi.rows() != phi.cols() || !phi.is_invertible() {
        report.fail("bijective", &[gen_level, k]);
        report.note(format!("hom dim {}, target dim {}", h.space.dim(), target.dim()));
        return Ok(report);
    }
    if !h.module.is_hom_to(&target, &phi) {
        report.fail("equivariance", &[gen_level, k]);
    }
    Ok(report)
}
