//! Degree-zero localizations `(R_f)_0` of a trivial-action commutative
//! monomial ring, with restriction maps between charts.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{trivial_action, AlgebraKind, Element, MonomialRing, SymAlgebra};
use crate::error::{Error, Result};
use crate::ideal::sigma_closure;
use crate::linalg::{axpy, sparsify, Matrix, SparseVec, Subspace};
use crate::report::Report;
use crate::scalars::Field;

/// A generator `a / f^t` of `(R_f)_0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartGenerator {
    pub name: String,
    pub fraction: String,
    pub weight: usize,
}

/// `(R_f)_0` up to denominators `f^bound`. Every element is stored as a
/// numerator in `R_{bound·deg f}` over `f^bound`, modulo `f`-torsion.
#[derive(Clone, Debug)]
pub struct Chart<F: Field> {
    algebra: Arc<SymAlgebra<F>>,
    pub f: Element<F>,
    pub bound: usize,
    pub torsion: Subspace<F>,
    pub generators: Vec<ChartGenerator>,
    numerators: Vec<Element<F>>,
    /// Exponent vectors over the generators, weight ≤ bound.
    pub monomials: Vec<Vec<u32>>,
    weights: Vec<usize>,
    images: Vec<SparseVec<F>>,
    /// Minimal relations, as coefficient vectors over `monomials`.
    pub relations: Vec<SparseVec<F>>,
    pub notes: Vec<String>,
}

fn ring_of<F: Field>(alg: &SymAlgebra<F>) -> Result<MonomialRing> {
    match alg.kind() {
        AlgebraKind::Trivial { ring } => Ok(ring.clone()),
        _ => Err(Error::Unsupported("sections are computed for trivial-action commutative monomial rings".into())),
    }
}

fn power<F: Field>(alg: &SymAlgebra<F>, f: &Element<F>, k: usize) -> Element<F> {
    let mut p = alg.one();
    for _ in 0..k {
        p = alg.multiply(&p, f).expect("power within cutoff");
    }
    p
}

fn wrap(s: String, always: bool) -> String {
    let compound = s.contains(['+', '-', ' ']) || (always && s.contains(['*', '^']));
    if compound {
        format!("({s})")
    } else {
        s
    }
}

fn fraction<F: Field>(alg: &SymAlgebra<F>, a: &Element<F>, f: &Element<F>, t: usize) -> String {
    let den = wrap(alg.format_element(f), true);
    let den = if t == 1 { den } else { format!("{den}^{t}") };
    format!("{}/{}", wrap(alg.format_element(a), false), den)
}

/// `(R_f)_0` up to `bound`, with generators and minimal relations.
pub fn sections_commutative<F: Field>(alg: &SymAlgebra<F>, f: &Element<F>, bound: usize) -> Result<Chart<F>> {
    let ring = ring_of(alg)?;
    if f.degree == 0 {
        return Err(Error::Argument("localizing element must have positive degree".into()));
    }
    if f.is_zero() {
        return Err(Error::Argument("localizing at zero".into()));
    }
    let big = Arc::new(trivial_action::<F>(&ring, 2 * bound * f.degree)?);
    Chart::build(&big, f, bound)
}

impl<F: Field> Chart<F> {
    fn build(alg: &Arc<SymAlgebra<F>>, f: &Element<F>, bound: usize) -> Result<Self> {
        let top = bound * f.degree;
        if top > alg.cutoff() {
            return Err(Error::DegreeMismatch(format!("chart needs degree {top}, cutoff is {}", alg.cutoff())));
        }
        let slack = (alg.cutoff() - top) / f.degree;
        let mut notes = Vec::new();
        let torsion = if slack == 0 {
            notes.push("f-torsion not tested".into());
            Subspace::zero(alg.dim(top))
        } else {
            let fs = power(alg, f, slack);
            let kernel = alg.right_mult(top, &fs).kernel();
            Subspace::from_vectors(alg.dim(top), kernel)
        };
        let mut chart = Chart {
            algebra: alg.clone(),
            f: f.clone(),
            bound,
            torsion,
            generators: Vec::new(),
            numerators: Vec::new(),
            monomials: vec![Vec::new()],
            weights: vec![0],
            images: Vec::new(),
            relations: Vec::new(),
            notes,
        };
        let one = chart.lift(&alg.one(), 0);
        chart.images.push(one.clone());
        let mut span = Subspace::from_vectors(alg.dim(top), [one]);
        let mut num_of_mono: Vec<Element<F>> = vec![alg.one()];
        for t in 1..=bound {
            // monomials of weight t in the generators found so far
            let k = chart.numerators.len();
            let mut fresh: Vec<(Vec<u32>, Element<F>)> = Vec::new();
            for (mi, m) in chart.monomials.iter().enumerate() {
                let last = m.iter().rposition(|&e| e > 0).unwrap_or(0);
                for g in last..k {
                    if chart.weights[mi] + chart.generators[g].weight == t {
                        let mut e = m.clone();
                        e.resize(k, 0);
                        e[g] += 1;
                        let num = alg.multiply(&num_of_mono[mi], &chart.numerators[g]).expect("within cutoff");
                        fresh.push((e, num));
                    }
                }
            }
            for (e, num) in fresh {
                let v = chart.lift(&num, t);
                span.insert(&v);
                chart.push_monomial(e, t, v);
                num_of_mono.push(num);
            }
            for i in 0..alg.dim(t * f.degree) {
                let b = Element::basis(t * f.degree, i);
                let v = chart.lift(&b, t);
                if span.insert(&v) {
                    let g = chart.numerators.len();
                    chart.generators.push(ChartGenerator {
                        name: format!("u{}", g + 1),
                        fraction: fraction(alg, &b, f, t),
                        weight: t,
                    });
                    chart.numerators.push(b.clone());
                    let mut e = vec![0; g + 1];
                    e[g] = 1;
                    chart.push_monomial(e, t, v);
                    num_of_mono.push(b);
                }
            }
        }
        let r = chart.numerators.len();
        for m in &mut chart.monomials {
            m.resize(r, 0);
        }
        chart.relations = chart.minimal_relations();
        Ok(chart)
    }

    fn push_monomial(&mut self, e: Vec<u32>, w: usize, v: SparseVec<F>) {
        self.monomials.push(e);
        self.weights.push(w);
        self.images.push(v);
    }

    pub fn algebra(&self) -> &Arc<SymAlgebra<F>> {
        &self.algebra
    }

    /// Degree of the common numerator space.
    pub fn top(&self) -> usize {
        self.bound * self.f.degree
    }

    /// `a / f^t` as a numerator over `f^bound`.
    pub fn lift(&self, a: &Element<F>, t: usize) -> SparseVec<F> {
        let fp = power(&self.algebra, &self.f, self.bound - t);
        let v = self.algebra.multiply(a, &fp).expect("within cutoff");
        self.torsion.reduce(&v.coords)
    }

    fn image_matrix(&self, upto: usize) -> (Vec<usize>, Matrix<F>) {
        let idx: Vec<usize> = (0..self.monomials.len()).filter(|&i| self.weights[i] <= upto).collect();
        let cols = idx.iter().map(|&i| self.images[i].clone()).collect();
        (idx.clone(), Matrix::from_sparse_cols(self.algebra.dim(self.top()), idx.len(), cols))
    }

    fn minimal_relations(&self) -> Vec<SparseVec<F>> {
        let index: HashMap<&Vec<u32>, usize> = self.monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let n = self.monomials.len();
        let mut minimal: Vec<(SparseVec<F>, usize)> = Vec::new();
        for w in 0..=self.bound {
            let (idx, m) = self.image_matrix(w);
            let mut known = Subspace::zero(n);
            for (r, rw) in &minimal {
                for (mi, mono) in self.monomials.iter().enumerate() {
                    if self.weights[mi] + rw > w {
                        continue;
                    }
                    let shifted: Option<SparseVec<F>> = r
                        .iter()
                        .map(|(j, c)| {
                            let e: Vec<u32> = self.monomials[*j].iter().zip(mono).map(|(a, b)| a + b).collect();
                            index.get(&e).map(|&k| (k, c.clone()))
                        })
                        .collect();
                    if let Some(mut s) = shifted {
                        s.sort_by_key(|e| e.0);
                        known.insert(&s);
                    }
                }
            }
            for k in m.kernel() {
                let v: SparseVec<F> = k.into_iter().map(|(i, c)| (idx[i], c)).collect();
                if known.insert(&v) {
                    let rw = v.iter().map(|(i, _)| self.weights[*i]).max().unwrap_or(0);
                    minimal.push((v, rw));
                }
            }
        }
        minimal.into_iter().map(|(v, _)| v).collect()
    }

    pub fn format_monomial(&self, e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(g, &a)| if a == 1 { self.generators[g].name.clone() } else { format!("{}^{a}", self.generators[g].name) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// A polynomial in the generators, coefficients over `monomials`.
    pub fn format_polynomial(&self, v: &[(usize, F)]) -> String {
        if v.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (i, c)) in v.iter().enumerate() {
            let mono = self.format_monomial(&self.monomials[*i]);
            let (neg, abs) = if c.to_string().starts_with('-') { (true, -c.clone()) } else { (false, c.clone()) };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if abs.is_one() {
                out.push_str(&mono);
            } else if mono == "1" {
                out.push_str(&abs.to_string());
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|r| self.format_polynomial(r)).collect()
    }

    /// Writes a numerator over `f^bound` as a polynomial in the generators.
    pub fn express(&self, v: &[(usize, F)]) -> Option<SparseVec<F>> {
        let (idx, m) = self.image_matrix(self.bound);
        let target = crate::linalg::densify(&self.torsion.reduce(v), m.rows());
        let sol = m.solve(&target)?;
        Some(sparsify(&sol).into_iter().map(|(i, c)| (idx[i], c)).collect())
    }

    /// Whether two numerators over `f^bound` give the same section.
    pub fn same(&self, a: &[(usize, F)], b: &[(usize, F)]) -> bool {
        axpy(a, &-F::one(), b).is_empty() || self.torsion.contains(&axpy(a, &-F::one(), b))
    }

    pub fn label(&self) -> String {
        format!("({})_0", wrap(format!("R_{}", wrap(self.algebra.format_element(&self.f), false)), false))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "chart": self.algebra.format_element(&self.f),
            "bound": self.bound,
            "generators": self.generators,
            "relations": self.relation_strings(),
        })
    }
}

/// The restriction `(R_f)_0 → (R_{fg})_0`, `a/f^t ↦ a g^t/(fg)^t`.
#[derive(Clone, Debug)]
pub struct Restriction<F: Field> {
    pub g: Element<F>,
    pub matrix: Matrix<F>,
    /// Images of the source generators as polynomials in the target's.
    pub images: Vec<String>,
}

impl<F: Field> Restriction<F> {
    pub fn new(src: &Chart<F>, tgt: &Chart<F>, g: &Element<F>) -> Result<Self> {
        let alg = tgt.algebra();
        if src.bound != tgt.bound {
            return Err(Error::Argument("charts with different bounds".into()));
        }
        let fg = alg.multiply(&src.f, g).ok_or_else(|| Error::DegreeMismatch("f*g beyond cutoff".into()))?;
        if fg != tgt.f {
            return Err(Error::Argument("target chart is not D(fg)".into()));
        }
        let gt = power(alg, g, src.bound);
        let m = alg.right_mult(src.top(), &gt);
        let cols = m.sparse_cols().into_iter().map(|c| tgt.torsion.reduce(&c)).collect();
        let matrix = Matrix::from_sparse_cols(m.rows(), m.cols(), cols);
        let mut images = Vec::new();
        for (k, gen) in src.generators.iter().enumerate() {
            let v = src.lift(&src.numerators[k], gen.weight);
            let img = matrix.apply_sparse(&v);
            images.push(match tgt.express(&img) {
                Some(p) => tgt.format_polynomial(&p),
                None => "?".into(),
            });
        }
        Ok(Restriction { g: g.clone(), matrix, images })
    }

    pub fn apply(&self, v: &[(usize, F)]) -> SparseVec<F> {
        self.matrix.apply_sparse(v)
    }
}

/// Charts on `D(f_i)` and their overlaps, with the gluing checks.
#[derive(Clone, Debug)]
pub struct Gluing<F: Field> {
    pub charts: Vec<(Vec<usize>, Chart<F>)>,
    pub restrictions: Vec<(Vec<usize>, Vec<usize>, Restriction<F>)>,
    /// Dimension of the sections over `∪ D(f_i)` up to the bound, when
    /// the charts cover.
    pub global_sections: Option<usize>,
}

impl<F: Field> Gluing<F> {
    pub fn chart(&self, key: &[usize]) -> &Chart<F> {
        &self.charts.iter().find(|(k, _)| k == key).expect("chart").1
    }

    pub fn restriction(&self, from: &[usize], to: &[usize]) -> &Restriction<F> {
        &self.restrictions.iter().find(|(a, b, _)| a == from && b == to).expect("restriction").2
    }

    pub fn to_json(&self) -> serde_json::Value {
        let charts: Vec<serde_json::Value> = self.charts.iter().map(|(_, c)| c.to_json()).collect();
        let restrictions: Vec<serde_json::Value> = self
            .restrictions
            .iter()
            .map(|(a, b, r)| {
                let src = self.chart(a);
                let tgt = self.chart(b);
                let alg = tgt.algebra();
                let maps: serde_json::Map<String, serde_json::Value> =
                    src.generators.iter().zip(&r.images).map(|(g, i)| (g.fraction.clone(), i.clone().into())).collect();
                serde_json::json!({
                    "from": alg.format_element(&src.f),
                    "to": alg.format_element(&tgt.f),
                    "images": maps,
                })
            })
            .collect();
        serde_json::json!({ "charts": charts, "restrictions": restrictions, "global_sections": self.global_sections })
    }
}

fn subsets_upto(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=k.min(n) {
        out.extend(crate::sgroup::subsets(n, size).into_iter().map(|s| s.into_iter().map(|v| v - 1).collect::<Vec<_>>()));
    }
    out
}

/// Charts on `D(f_i)`, double and triple overlaps, the cocycle condition
/// for restrictions, multiplicativity, and the glued sections.
pub fn gluing_check<F: Field>(alg: &SymAlgebra<F>, fs: &[Element<F>], bound: usize) -> Result<(Report, Gluing<F>)> {
    let ring = ring_of(alg)?;
    if fs.is_empty() {
        return Err(Error::Argument("no charts".into()));
    }
    if let Some(f) = fs.iter().find(|f| f.degree == 0 || f.is_zero()) {
        return Err(Error::Argument(format!("cannot localize at {}", alg.format_element(f))));
    }
    let keys = subsets_upto(fs.len(), 3);
    let deg = |k: &[usize]| k.iter().map(|&i| fs[i].degree).sum::<usize>();
    let need = 2 * bound * keys.iter().map(|k| deg(k)).max().unwrap_or(1);
    let big = Arc::new(trivial_action::<F>(&ring, need)?);
    let elem = |k: &[usize]| -> Element<F> {
        k.iter().fold(big.one(), |acc, &i| big.multiply(&acc, &fs[i]).expect("within cutoff"))
    };
    let mut charts = Vec::new();
    for k in &keys {
        let f = elem(k);
        if f.is_zero() {
            continue;
        }
        charts.push((k.clone(), Chart::build(&big, &f, bound)?));
    }
    let find = |k: &[usize]| charts.iter().find(|(c, _)| c == k).map(|(_, c)| c);
    let mut restrictions = Vec::new();
    for (k, src) in &charts {
        for (l, tgt) in &charts {
            if l.len() <= k.len() || !k.iter().all(|i| l.contains(i)) {
                continue;
            }
            let extra: Vec<usize> = l.iter().copied().filter(|i| !k.contains(i)).collect();
            let g = elem(&extra);
            restrictions.push((k.clone(), l.clone(), Restriction::new(src, tgt, &g)?));
        }
    }
    let rest = |a: &[usize], b: &[usize]| restrictions.iter().find(|(x, y, _)| x == a && y == b).map(|(_, _, r)| r);
    let mut r = Report::new("gluing", bound);

    // cocycle: D(f_i) → D(f_i f_j) → D(f_i f_j f_k) agrees with the direct map
    for (k, src) in charts.iter().filter(|(k, _)| k.len() == 1) {
        for (l, _) in charts.iter().filter(|(l, _)| l.len() == 2 && l.contains(&k[0])) {
            for (t, tgt) in charts.iter().filter(|(t, _)| t.len() == 3 && l.iter().all(|i| t.contains(i))) {
                let (Some(a), Some(b), Some(direct)) = (rest(k, l), rest(l, t), rest(k, t)) else { continue };
                for i in 0..big.dim(src.top()) {
                    let e = vec![(i, F::one())];
                    if !tgt.same(&b.apply(&a.apply(&e)), &direct.apply(&e)) {
                        r.fail("cocycle", &[k[0], l[0], l[1], t[0], t[1], t[2]]);
                        break;
                    }
                }
            }
        }
    }
    // restrictions are ring maps on generators: ρ(uv) = ρ(u)ρ(v) when weights allow
    for (k, l, res) in &restrictions {
        let (src, tgt) = (find(k).unwrap(), find(l).unwrap());
        for a in 0..src.generators.len() {
            for b in a..src.generators.len() {
                let (wa, wb) = (src.generators[a].weight, src.generators[b].weight);
                if wa + wb > bound {
                    continue;
                }
                let uv = big.multiply(&src.numerators[a], &src.numerators[b]).unwrap();
                let lhs = res.apply(&src.lift(&uv, wa + wb));
                let ga = big.multiply(&src.numerators[a], &power(&big, &res.g, wa)).unwrap();
                let gb = big.multiply(&src.numerators[b], &power(&big, &res.g, wb)).unwrap();
                let rhs = tgt.lift(&big.multiply(&ga, &gb).unwrap(), wa + wb);
                if !tgt.same(&lhs, &rhs) {
                    r.fail("ring map", &[k.len(), l.len(), a, b]);
                }
            }
        }
    }
    // equalizer of ∏ (R_{f_i})_0 ⇉ ∏ (R_{f_i f_j})_0
    let units: Vec<&(Vec<usize>, Chart<F>)> = charts.iter().filter(|(k, _)| k.len() == 1).collect();
    let cover = sigma_closure(&big, fs)?.radical_up_to(big.cutoff())?;
    let global_sections = if (1..=need).all(|d| cover.level(d).is_full()) {
        let offsets: Vec<usize> = units.iter().scan(0, |acc, (_, c)| {
            let o = *acc;
            *acc += big.dim(c.top());
            Some(o)
        }).collect();
        let total: usize = units.iter().map(|(_, c)| big.dim(c.top())).sum();
        let mut blocks: Vec<SparseVec<F>> = vec![Vec::new(); total];
        let mut row_offset = 0;
        for (a, (ka, _)) in units.iter().enumerate() {
            for (b, (kb, _)) in units.iter().enumerate().skip(a + 1) {
                let key = vec![ka[0], kb[0]];
                let (Some(ra), Some(rb), Some(tgt)) = (rest(ka, &key), rest(kb, &key), find(&key)) else { continue };
                let rows = big.dim(tgt.top());
                for i in 0..ra.matrix.cols() {
                    let c = tgt.torsion.reduce(&ra.apply(&[(i, F::one())]));
                    blocks[offsets[a] + i].extend(c.into_iter().map(|(j, x)| (row_offset + j, x)));
                }
                for i in 0..rb.matrix.cols() {
                    let c = tgt.torsion.reduce(&rb.apply(&[(i, F::one())]));
                    blocks[offsets[b] + i].extend(c.into_iter().map(|(j, x)| (row_offset + j, -x)));
                }
                row_offset += rows;
            }
        }
        let m = Matrix::from_sparse_cols(row_offset.max(1), total, blocks);
        let torsion_dim: usize = units.iter().map(|(_, c)| c.torsion.dim()).sum();
        // torsion numerators are zero sections
        let dim = m.kernel().len().saturating_sub(torsion_dim);
        if ring.relations.is_empty() && ring.vars.len() >= 2 && dim != 1 {
            r.fail("global sections", &[dim]);
        }
        Some(dim)
    } else {
        r.note("charts do not cover Proj; global sections not computed");
        None
    };
    Ok((r, Gluing { charts, restrictions, global_sections }))
}
