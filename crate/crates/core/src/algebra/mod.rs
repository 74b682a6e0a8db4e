//! Symmetric graded algebras: a symmetric sequence `E` with equivariant
//! multiplications `μ_{n,m}: E_n ⊗ E_m → E_{n+m}` and a unit `k → E_0`.

mod builders;
mod parse;

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use builders::{
    exterior_algebra, exterior_projection, exterior_relations, letter_names, sym_group_algebra, sym_group_algebra_with, tensor_algebra,
    trivial_action, MonomialRing, SymGroupAction,
};
pub use parse::{parse_element, parse_ring_spec, RingSpec};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec};
use crate::report::Report;
use crate::scalars::Field;
use crate::sgroup::chi;
use crate::symseq::{SymSeq, SymSeqMap};

/// Which builder produced an algebra; drives element parsing and labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraKind {
    Tensor { dim: usize },
    Exterior { dim: usize },
    SymGroup { action: SymGroupAction },
    Trivial { ring: MonomialRing },
    Custom,
}

/// A homogeneous element: degree and coordinates in `E_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element<F: Field> {
    pub degree: usize,
    pub coords: SparseVec<F>,
}

impl<F: Field> Element<F> {
    pub fn new(degree: usize, coords: SparseVec<F>) -> Self {
        Element { degree, coords }
    }

    pub fn basis(degree: usize, i: usize) -> Self {
        Element { degree, coords: vec![(i, F::one())] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Kronecker product of two sparse vectors, the right factor of length `m`.
pub fn kron_vec<F: Field>(x: &[(usize, F)], y: &[(usize, F)], m: usize) -> SparseVec<F> {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for (i, a) in x {
        for (j, b) in y {
            out.push((i * m + j, a.clone() * b.clone()));
        }
    }
    out
}

/// Matrix of `E_n ⊗ E_m → E_m ⊗ E_n`, `x ⊗ y ↦ y ⊗ x`.
pub fn swap_matrix<F: Field>(dn: usize, dm: usize) -> Matrix<F> {
    let targets: Vec<(usize, F)> =
        (0..dn * dm).map(|k| ((k % dm) * dn + k / dm, F::one())).collect();
    Matrix::monomial(dn * dm, &targets)
}

#[derive(Clone, Debug)]
pub struct SymAlgebra<F: Field> {
    kind: AlgebraKind,
    underlying: SymSeq<F>,
    mults: BTreeMap<(usize, usize), Matrix<F>>,
    unit: Matrix<F>,
}

impl<F: Field> PartialEq for SymAlgebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.underlying == other.underlying && self.mults == other.mults && self.unit == other.unit
    }
}

impl<F: Field> SymAlgebra<F> {
    /// Assembles an algebra, checking shapes only; see [`Self::check_axioms`].
    pub fn new(
        kind: AlgebraKind,
        underlying: SymSeq<F>,
        mults: BTreeMap<(usize, usize), Matrix<F>>,
        unit: Matrix<F>,
    ) -> Result<Self> {
        let cutoff = underlying.cutoff();
        let dims = underlying.dims();
        let mut fixed = BTreeMap::new();
        for n in 0..=cutoff {
            for m in 0..=cutoff - n {
                let mat = mults
                    .get(&(n, m))
                    .cloned()
                    .ok_or_else(|| Error::Schema(format!("missing multiplication \"{n},{m}\"")))?;
                fixed.insert((n, m), mat.with_shape(dims[n + m], dims[n] * dims[m])?);
            }
        }
        let unit = unit.with_shape(dims[0], 1)?;
        Ok(SymAlgebra { kind, underlying, mults: fixed, unit })
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
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

    pub fn level(&self, n: usize) -> &crate::rep::SnModule<F> {
        self.underlying.level(n)
    }

    pub fn mult(&self, n: usize, m: usize) -> &Matrix<F> {
        &self.mults[&(n, m)]
    }

    pub fn mults(&self) -> &BTreeMap<(usize, usize), Matrix<F>> {
        &self.mults
    }

    pub fn unit(&self) -> &Matrix<F> {
        &self.unit
    }

    pub fn one(&self) -> Element<F> {
        Element::new(0, self.unit.col(0))
    }

    /// Same algebra truncated to a lower cutoff.
    pub fn truncate(&self, cutoff: usize) -> Self {
        let cutoff = cutoff.min(self.cutoff());
        let mults = self.mults.iter().filter(|((n, m), _)| n + m <= cutoff).map(|(k, v)| (*k, v.clone())).collect();
        SymAlgebra { kind: self.kind.clone(), underlying: self.underlying.truncate(cutoff), mults, unit: self.unit.clone() }
    }

    /// `x · y`, or `None` beyond the cutoff.
    pub fn multiply(&self, x: &Element<F>, y: &Element<F>) -> Option<Element<F>> {
        let d = x.degree + y.degree;
        if d > self.cutoff() {
            return None;
        }
        let v = kron_vec(&x.coords, &y.coords, self.dim(y.degree));
        Some(Element::new(d, self.mult(x.degree, y.degree).apply_sparse(&v)))
    }

    /// Matrix of `x ↦ x · y` on `E_n`.
    pub fn right_mult(&self, n: usize, y: &Element<F>) -> Matrix<F> {
        let m = y.degree;
        let cols = (0..self.dim(n))
            .map(|i| self.mult(n, m).apply_sparse(&kron_vec(&[(i, F::one())], &y.coords, self.dim(m))))
            .collect();
        Matrix::from_sparse_cols(self.dim(n + m), self.dim(n), cols)
    }

    /// Matrix of `x ↦ y · x` on `E_n`.
    pub fn left_mult(&self, y: &Element<F>, n: usize) -> Matrix<F> {
        let m = y.degree;
        let cols = (0..self.dim(n))
            .map(|i| self.mult(m, n).apply_sparse(&kron_vec(&y.coords, &[(i, F::one())], self.dim(n))))
            .collect();
        Matrix::from_sparse_cols(self.dim(n + m), self.dim(n), cols)
    }

    /// Action of a permutation on an element.
    pub fn act(&self, s: &crate::sgroup::Permutation, x: &Element<F>) -> Element<F> {
        Element::new(x.degree, self.level(x.degree).act(s, &x.coords))
    }

    /// Equivariance, associativity, unit laws and `E_0 = k`, cell by cell.
    pub fn check_axioms(&self) -> Report {
        let mut r = Report::new("axioms", self.cutoff());
        let n_max = self.cutoff();
        if self.dim(0) != 1 {
            r.fail("E_0=k", &[0]);
        }
        for n in 0..=n_max {
            for m in 0..=n_max - n {
                if !self.mult_is_equivariant(n, m) {
                    r.fail("equivariance", &[n, m]);
                }
            }
        }
        for n in 0..=n_max {
            for m in 0..=n_max - n {
                for p in 0..=n_max - n - m {
                    let (dn, dp) = (self.dim(n), self.dim(p));
                    let left = self.mult(n + m, p).mul(&self.mult(n, m).kron(&Matrix::identity(dp)));
                    let right = self.mult(n, m + p).mul(&Matrix::identity(dn).kron(self.mult(m, p)));
                    if left != right {
                        r.fail("associativity", &[n, m, p]);
                    }
                }
            }
        }
        for n in 0..=n_max {
            let i = Matrix::identity(self.dim(n));
            if !self.mult(n, 0).mul(&i.kron(&self.unit)).is_identity() {
                r.fail("right unit", &[n]);
            }
            if !self.mult(0, n).mul(&self.unit.kron(&i)).is_identity() {
                r.fail("left unit", &[n]);
            }
        }
        r
    }

    /// `μ_{n,m}` commutes with `Σ_n × Σ_m`.
    pub fn mult_is_equivariant(&self, n: usize, m: usize) -> bool {
        let mu = self.mult(n, m);
        let (a, b, c) = (self.level(n), self.level(m), self.level(n + m));
        let ia = Matrix::identity(a.dim());
        let ib = Matrix::identity(b.dim());
        (1..n).all(|i| mu.mul(&a.gen(i).kron(&ib)) == c.gen(i).mul(mu))
            && (1..m).all(|j| mu.mul(&ia.kron(b.gen(j))) == c.gen(n + j).mul(mu))
    }

    /// With `naive = false`: `μ_{m,n} ∘ twist = χ_{n,m} ∘ μ_{n,m}`.
    /// With `naive = true`: `μ_{m,n} ∘ twist = μ_{n,m}`.
    pub fn check_commutative(&self, naive: bool) -> Report {
        let name = if naive { "commutative (naive)" } else { "commutative" };
        let mut r = Report::new(name, self.cutoff());
        let n_max = self.cutoff();
        for n in 0..=n_max {
            for m in 0..=n_max - n {
                let lhs = self.mult(m, n).mul(&swap_matrix(self.dim(n), self.dim(m)));
                let rhs = if naive {
                    self.mult(n, m).clone()
                } else {
                    let c = self.level(n + m).action_of(&chi(n, m)).expect("degree matches");
                    c.mul(self.mult(n, m))
                };
                if lhs != rhs {
                    r.fail("commutativity square", &[n, m]);
                }
            }
        }
        r
    }

    /// Whether levelwise maps `f: self → other` form an algebra morphism.
    pub fn check_morphism(&self, other: &Self, f: &SymSeqMap<F>) -> Report {
        let mut r = Report::new("algebra morphism", self.cutoff());
        for (n, i) in f.equivariance_failures() {
            r.fail("equivariance", &[n, i]);
        }
        let n_max = self.cutoff().min(other.cutoff());
        for n in 0..=n_max {
            for m in 0..=n_max - n {
                let lhs = f.components[n + m].mul(self.mult(n, m));
                let rhs = other.mult(n, m).mul(&f.components[n].kron(&f.components[m]));
                if lhs != rhs {
                    r.fail("multiplicativity", &[n, m]);
                }
            }
        }
        if f.components[0].mul(&self.unit) != other.unit {
            r.fail("unit", &[0]);
        }
        r
    }

    /// The same data with one multiplication replaced (used to inject faults).
    pub fn with_mult(&self, n: usize, m: usize, mat: Matrix<F>) -> Self {
        let mut out = self.clone();
        out.mults.insert((n, m), mat);
        out.kind = AlgebraKind::Custom;
        out
    }

    /// Human-readable name of basis vector `i` of `E_n`.
    pub fn basis_label(&self, n: usize, i: usize) -> String {
        builders::basis_label(&self.kind, n, i)
    }

    /// Renders an element as a linear combination of basis labels.
    pub fn format_element(&self, x: &Element<F>) -> String {
        if x.coords.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (i, c)) in x.coords.iter().enumerate() {
            let label = self.basis_label(x.degree, *i);
            let s = c.to_string();
            let s = s.split(" mod ").next().unwrap_or("").trim_end_matches("/1").to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            out.push_str(match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let mag = if mag.contains('/') { format!("({mag})") } else { mag };
            match (mag.as_str(), label.as_str()) {
                ("1", l) => out.push_str(l),
                (m, "1") => out.push_str(m),
                (m, l) => out.push_str(&format!("{m}*{l}")),
            }
        }
        out
    }

    /// Parses an element written in the builder's generator names.
    pub fn parse_element(&self, s: &str) -> Result<Element<F>> {
        parse_element(self, s)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "F: Field")]
struct AlgebraJson<F: Field> {
    underlying: SymSeq<F>,
    mults: BTreeMap<String, Matrix<F>>,
    unit: Matrix<F>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    builder: Option<AlgebraKind>,
}

pub(crate) fn cell_key(n: usize, m: usize) -> String {
    format!("{n},{m}")
}

pub(crate) fn parse_cell_key(k: &str) -> Result<(usize, usize)> {
    let bad = || Error::Schema(format!("bad cell key {k:?}"));
    let (a, b) = k.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

impl<F: Field> Serialize for SymAlgebra<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraJson {
            underlying: self.underlying.clone(),
            mults: self.mults.iter().map(|((n, m), v)| (cell_key(*n, *m), v.clone())).collect(),
            unit: self.unit.clone(),
            builder: (self.kind != AlgebraKind::Custom).then(|| self.kind.clone()),
        }
        .serialize(s)
    }
}

impl<'de, F: Field> Deserialize<'de> for SymAlgebra<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = AlgebraJson::<F>::deserialize(d)?;
        let mut mults = BTreeMap::new();
        for (k, v) in j.mults {
            mults.insert(parse_cell_key(&k).map_err(serde::de::Error::custom)?, v);
        }
        SymAlgebra::new(j.builder.unwrap_or(AlgebraKind::Custom), j.underlying, mults, j.unit)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;

    type Q = Rational;

    #[test]
    fn tensor_algebra_passes() {
        let t = tensor_algebra::<Q>(2, 4).unwrap();
        assert_eq!(t.dims(), vec![1, 2, 4, 8, 16]);
        assert!(t.check_axioms().passed);
        assert!(t.check_commutative(false).passed);
        let naive = t.check_commutative(true);
        assert!(!naive.passed);
        assert_eq!(naive.first_violation().unwrap().cell, vec![1, 1]);
        assert_eq!(tensor_algebra::<Q>(0, 3).unwrap().dims(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn corrupted_cell_is_reported() {
        let t = tensor_algebra::<Q>(1, 4).unwrap();
        // T(k) is k[x]. Doubling μ_{1,1} is invisible at (1,1,1) but not at (1,1,2).
        let bad = t.with_mult(1, 1, t.mult(1, 1).scale(&Q::from_i64(2)));
        let r = bad.check_axioms();
        assert!(!r.passed);
        let assoc = r.cells("associativity");
        assert!(assoc.iter().all(|c| c.contains(&1)));
        assert!(!assoc.contains(&vec![1, 1, 1]));
        assert!(assoc.contains(&vec![1, 1, 2]));
        assert!(r.cells("left unit").is_empty());
    }

    #[test]
    fn cutoff_zero_is_vacuous() {
        let k = tensor_algebra::<Q>(3, 0).unwrap();
        assert!(k.check_axioms().passed);
        assert!(k.check_commutative(true).passed);
    }

    #[test]
    fn json_round_trip() {
        let t = exterior_algebra::<Q>(2, 3).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        let back: SymAlgebra<Q> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.kind(), t.kind());
    }
}
